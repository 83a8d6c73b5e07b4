//! Dense complex linear algebra and reproducible Haar-random unitary sampling.
//!
//! Everything here is deliberately small: square matrices over `Complex64`,
//! a Householder QR good enough for Ginibre matrices, and a counter-based
//! RNG stream so parallel sweeps stay reproducible.

pub use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Frobenius tolerance below which a matrix is accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-10;

/// Square dense complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of size `dim` x `dim`.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension);
        }
        Ok(Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from a row-major entry vector of length `dim * dim`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension);
        }
        if entries.len() != dim * dim {
            return Err(Error::BadShape {
                len: entries.len(),
                dim,
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let d = self.dim;
        let mut out = Self::zeros(d)?;
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d).expect("dim >= 1");
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    /// Column `j` as an owned vector.
    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// `‖U†U − I‖_F`, the distance from unitarity.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim;
        let mut sum = 0.0;
        // Row i of U†U is <col_i, col_j>; accumulate against the identity.
        for i in 0..d {
            for j in 0..d {
                let mut dot = Complex64::new(0.0, 0.0);
                for k in 0..d {
                    dot += self[(k, i)].conj() * self[(k, j)];
                }
                if i == j {
                    dot -= 1.0;
                }
                sum += dot.norm_sqr();
            }
        }
        sum.sqrt()
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_defect() < tolerance
    }

    /// Error unless the matrix is unitary within `UNITARY_TOL`.
    pub fn require_unitary(&self) -> Result<()> {
        let defect = self.unitarity_defect();
        if defect < UNITARY_TOL {
            Ok(())
        } else {
            Err(Error::NotUnitary {
                defect,
                tolerance: UNITARY_TOL,
            })
        }
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// `‖a − b‖_F`.
pub fn frobenius_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let sum: f64 = a
        .entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    Ok(sum.sqrt())
}

/// Seed plus stream index for a counter-based RNG.
///
/// Identical `(seed, stream_index)` pairs produce identical sample sequences
/// on every host and under any thread schedule, so Monte Carlo trials keyed
/// by trial index are reproducible under parallel execution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        Self { seed, stream_index }
    }

    /// Same seed, different stream.
    pub fn with_stream(self, stream_index: u64) -> Self {
        Self {
            seed: self.seed,
            stream_index,
        }
    }

    /// Stream offset by `delta`, for deriving per-trial substreams.
    pub fn offset(self, delta: u64) -> Self {
        Self {
            seed: self.seed,
            stream_index: self.stream_index.wrapping_add(delta),
        }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

fn complex_standard_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / 2f64.sqrt()
}

/// Haar-random `dim x dim` unitary.
///
/// Ginibre sample (i.i.d. complex standard normal entries) followed by QR,
/// with the R-diagonal phase pushed into Q so the distribution is exactly
/// Haar rather than QR-convention biased.
pub fn haar_unitary(dim: usize, stream: RngStream) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension);
    }
    let mut rng = stream.rng();
    let mut g = ComplexMatrix::zeros(dim)?;
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = complex_standard_normal(&mut rng);
        }
    }
    let (q, r_diag) = householder_qr(&g);
    let mut u = q;
    for j in 0..dim {
        let d = r_diag[j];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    Ok(u)
}

/// Householder QR returning Q and the diagonal of R.
fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, Vec<Complex64>) {
    let d = a.dim();
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(d).expect("dim >= 1");

    for k in 0..d {
        // Householder vector for column k below the diagonal.
        let mut norm_x = 0.0;
        for i in k..d {
            norm_x += r[(i, k)].norm_sqr();
        }
        let norm_x = norm_x.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() > 0.0 {
            x0 / x0.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let alpha = -phase * norm_x;
        let mut v: Vec<Complex64> = (k..d).map(|i| r[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm_sqr == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;

        // r <- H r with H = I - beta v v†, acting on rows k..d.
        for j in k..d {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in k..d {
                dot += v[i - k].conj() * r[(i, j)];
            }
            let scale = beta * dot;
            for i in k..d {
                let delta = scale * v[i - k];
                r[(i, j)] -= delta;
            }
        }
        // q <- q H, acting on columns k..d.
        for i in 0..d {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in k..d {
                dot += q[(i, j)] * v[j - k];
            }
            let scale = beta * dot;
            for j in k..d {
                let delta = scale * v[j - k].conj();
                q[(i, j)] -= delta;
            }
        }
    }

    let r_diag = (0..d).map(|i| r[(i, i)]).collect();
    (q, r_diag)
}
