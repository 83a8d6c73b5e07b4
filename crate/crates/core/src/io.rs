//! On-disk JSON forms for matrices and state vectors.
//!
//! A unitary is `{"dim": d, "re": [[...]], "im": [[...]]}` with row-major
//! d x d arrays; a state is `{"n": n, "re": [...], "im": [...]}` with 2^n
//! amplitudes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::verify::StateVector;

#[derive(Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        let d = m.dim();
        let mut re = vec![vec![0.0; d]; d];
        let mut im = vec![vec![0.0; d]; d];
        for i in 0..d {
            for j in 0..d {
                re[i][j] = m[(i, j)].re;
                im[i][j] = m[(i, j)].im;
            }
        }
        Self { dim: d, re, im }
    }

    pub fn into_matrix(self) -> Result<ComplexMatrix> {
        let d = self.dim;
        let check = |rows: &Vec<Vec<f64>>| -> Result<()> {
            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                return Err(Error::BadShape {
                    len: rows.iter().map(|r| r.len()).sum(),
                    dim: d,
                });
            }
            Ok(())
        };
        check(&self.re)?;
        check(&self.im)?;
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(Complex64::new(self.re[i][j], self.im[i][j]));
            }
        }
        ComplexMatrix::from_entries(d, entries)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StateJson {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl StateJson {
    pub fn from_state(s: &StateVector) -> Self {
        Self {
            n: s.n_qubits,
            re: s.amplitudes.iter().map(|a| a.re).collect(),
            im: s.amplitudes.iter().map(|a| a.im).collect(),
        }
    }

    pub fn into_state(self) -> Result<StateVector> {
        if self.re.len() != self.im.len() {
            return Err(Error::BadStateLength {
                len: self.im.len(),
                n: self.n,
            });
        }
        let amplitudes = self
            .re
            .iter()
            .zip(&self.im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        StateVector::new(self.n, amplitudes)
    }
}
