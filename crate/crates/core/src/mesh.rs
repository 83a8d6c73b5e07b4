//! Compilation of unitaries onto a rectangular Mach-Zehnder mesh.
//!
//! A `MeshProgram` is the hardware form of a unitary: an ordered list of
//! two-mode crossings `T(theta, phi)` plus a column of output phases, with
//! `U = D · T_k · ... · T_1` (crossings listed in the order light meets
//! them). `clements_decompose` produces the program, `mesh_reconstruct`
//! evaluates it back to a matrix; the pair is contract-tested as a roundtrip.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, TAU};
#[cfg(test)]
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

/// One programmable beam splitter acting on modes `(top_mode, top_mode + 1)`.
///
/// `theta` sets the splitting with amplitude reflectivity `cos(theta)`;
/// `phi` is the phase applied at the top input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    /// Mesh column, counted from the input side.
    pub layer: usize,
    pub top_mode: usize,
    pub theta: f64,
    pub phi: f64,
}

impl Crossing {
    pub fn new(layer: usize, top_mode: usize, theta: f64, phi: f64) -> Self {
        Self {
            layer,
            top_mode,
            theta,
            phi,
        }
    }
}

/// Compiled mesh: crossings in physical order plus the output phase column.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshProgram {
    pub dim: usize,
    pub crossings: Vec<Crossing>,
    pub output_phases: Vec<f64>,
}

impl MeshProgram {
    /// Identity program: no crossings, zero phases.
    pub fn identity(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension);
        }
        Ok(Self {
            dim,
            crossings: Vec::new(),
            output_phases: vec![0.0; dim],
        })
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDimension);
        }
        if self.output_phases.len() != self.dim {
            return Err(Error::BadMeshProgram(format!(
                "{} output phases for dimension {}",
                self.output_phases.len(),
                self.dim
            )));
        }
        for c in &self.crossings {
            if self.dim < 2 || c.top_mode > self.dim - 2 {
                return Err(Error::ModeOutOfRange {
                    top_mode: c.top_mode,
                    dim: self.dim,
                });
            }
            if !c.theta.is_finite() || !c.phi.is_finite() {
                return Err(Error::BadMeshProgram("non-finite crossing phase".into()));
            }
        }
        Ok(())
    }
}

fn wrap_tau(phase: f64) -> f64 {
    let w = phase.rem_euclid(TAU);
    if w == TAU {
        0.0
    } else {
        w
    }
}

/// Embedded two-mode beam-splitter unitary.
///
/// Identity except for the 2x2 block on modes `(top_mode, top_mode + 1)`:
///
/// ```text
/// [ e^{i phi} cos(theta)   -sin(theta) ]
/// [ e^{i phi} sin(theta)    cos(theta) ]
/// ```
pub fn t_matrix(dim: usize, top_mode: usize, theta: f64, phi: f64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::InvalidDimension);
    }
    if dim < 2 || top_mode > dim - 2 {
        return Err(Error::ModeOutOfRange { top_mode, dim });
    }
    let mut m = ComplexMatrix::identity(dim)?;
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    m[(top_mode, top_mode)] = e * c;
    m[(top_mode, top_mode + 1)] = Complex64::new(-s, 0.0);
    m[(top_mode + 1, top_mode)] = e * s;
    m[(top_mode + 1, top_mode + 1)] = Complex64::new(c, 0.0);
    Ok(m)
}

/// Apply `T_m(theta, phi)` from the left, in place (rows m, m+1).
fn apply_t_left(u: &mut ComplexMatrix, m: usize, theta: f64, phi: f64) {
    let d = u.dim();
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    for j in 0..d {
        let top = u[(m, j)];
        let bot = u[(m + 1, j)];
        u[(m, j)] = e * c * top - s * bot;
        u[(m + 1, j)] = e * s * top + c * bot;
    }
}

/// Apply `T_m(theta, phi)^{-1}` from the right, in place (columns m, m+1).
fn apply_t_inv_right(u: &mut ComplexMatrix, m: usize, theta: f64, phi: f64) {
    let d = u.dim();
    let (s, c) = theta.sin_cos();
    let e = Complex64::from_polar(1.0, -phi);
    for i in 0..d {
        let left = u[(i, m)];
        let right = u[(i, m + 1)];
        u[(i, m)] = e * c * left - s * right;
        u[(i, m + 1)] = e * s * left + c * right;
    }
}

/// Angles that null the target entry in a left elimination.
///
/// Zeroes `u[m+1][col]` by mixing rows `(m, m+1)`; ties at exact zeros
/// break toward zero phase.
fn nulling_angles_left(u: &ComplexMatrix, m: usize, col: usize) -> (f64, f64) {
    let a = u[(m, col)];
    let b = u[(m + 1, col)];
    if b.norm() == 0.0 {
        return (0.0, 0.0);
    }
    if a.norm() == 0.0 {
        return (FRAC_PI_2, 0.0);
    }
    let theta = b.norm().atan2(a.norm());
    let phi = (-b * a.conj()).arg();
    (theta, phi)
}

/// Angles that null the target entry in a right elimination.
///
/// Zeroes `u[row][m]` by mixing columns `(m, m+1)`.
fn nulling_angles_right(u: &ComplexMatrix, row: usize, m: usize) -> (f64, f64) {
    let b = u[(row, m)];
    let a = u[(row, m + 1)];
    if b.norm() == 0.0 {
        return (0.0, 0.0);
    }
    if a.norm() == 0.0 {
        return (FRAC_PI_2, 0.0);
    }
    let theta = b.norm().atan2(a.norm());
    let phi = (b * a.conj()).arg();
    (theta, phi)
}

#[derive(Clone, Copy)]
struct Factor {
    top_mode: usize,
    theta: f64,
    phi: f64,
}

/// Compile a unitary into a rectangular mesh program.
///
/// Eliminations run along anti-diagonals, alternating right-multiplications
/// by `T^{-1}` and left-multiplications by `T`; the residual diagonal is
/// pushed to the output column. The result satisfies
/// `mesh_reconstruct(program) == u` to the unitarity tolerance and holds
/// exactly `dim (dim - 1) / 2` crossings.
pub fn clements_decompose(u: &ComplexMatrix) -> Result<MeshProgram> {
    u.require_unitary()?;
    let d = u.dim();

    let mut work = u.clone();
    let mut left_ops: Vec<Factor> = Vec::new();
    let mut right_ops: Vec<Factor> = Vec::new();

    for diag in 0..d.saturating_sub(1) {
        if diag % 2 == 0 {
            // Null (d-1-j, diag-j) from the right, for j = 0..=diag.
            for j in 0..=diag {
                let row = d - 1 - j;
                let m = diag - j;
                let (theta, phi) = nulling_angles_right(&work, row, m);
                apply_t_inv_right(&mut work, m, theta, phi);
                right_ops.push(Factor {
                    top_mode: m,
                    theta,
                    phi,
                });
            }
        } else {
            // Null (d-1-diag+j, j) from the left, for j = 0..=diag.
            for j in 0..=diag {
                let row = d - 1 - diag + j;
                let m = row - 1;
                let (theta, phi) = nulling_angles_left(&work, m, j);
                apply_t_left(&mut work, m, theta, phi);
                left_ops.push(Factor {
                    top_mode: m,
                    theta,
                    phi,
                });
            }
        }
    }

    // Residual diagonal (entries have unit modulus up to fp noise).
    let mut diag: Vec<Complex64> = (0..d)
        .map(|i| {
            let z = work[(i, i)];
            let n = z.norm();
            if n > 0.0 {
                z / n
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();

    // U = L1^-1 ... Lq^-1 D Rp ... R1. Commute each L^-1 rightward through
    // the diagonal: T^-1(theta, phi) D = D' T(theta, phi') with
    //   phi' = arg(-d_top / d_bot),  d_top' = -e^{-i phi} d_bot,  d_bot' = d_bot.
    let mut left_pushed: Vec<Factor> = Vec::with_capacity(left_ops.len());
    for op in left_ops.iter().rev() {
        let m = op.top_mode;
        if op.theta.sin() == 0.0 {
            // T(0, phi) is diagonal: fold it into D and keep the factor at
            // zero phase, so trivial eliminations stay canonical.
            diag[m] *= Complex64::from_polar(1.0, -op.phi);
            left_pushed.push(Factor {
                top_mode: m,
                theta: op.theta,
                phi: 0.0,
            });
            continue;
        }
        let d_top = diag[m];
        let d_bot = diag[m + 1];
        let phi_new = (-d_top * d_bot.conj()).arg();
        diag[m] = -Complex64::from_polar(1.0, -op.phi) * d_bot;
        left_pushed.push(Factor {
            top_mode: m,
            theta: op.theta,
            phi: phi_new,
        });
    }
    // left_pushed is ordered Lq', ..., L1'; the matrix product order is
    // D L1' L2' ... Lq' Rp ... R1, so the physical order (rightmost factor
    // first) is R1 ... Rp Lq' ... L1'.
    let physical = right_ops.iter().chain(left_pushed.iter());

    // Greedy layer assignment in physical order: a crossing lands in the
    // first column after every earlier crossing touching either mode.
    let mut frontier = vec![0usize; d];
    let mut crossings: Vec<Crossing> = Vec::with_capacity(d * (d - 1) / 2);
    for f in physical {
        let m = f.top_mode;
        let layer = frontier[m].max(frontier[m + 1]);
        frontier[m] = layer + 1;
        frontier[m + 1] = layer + 1;
        crossings.push(Crossing::new(layer, m, f.theta, wrap_tau(f.phi)));
    }
    crossings.sort_by_key(|c| (c.layer, c.top_mode));

    let output_phases = diag.iter().map(|z| wrap_tau(z.arg())).collect();

    Ok(MeshProgram {
        dim: d,
        crossings,
        output_phases,
    })
}

/// Evaluate a mesh program back to its unitary.
pub fn mesh_reconstruct(program: &MeshProgram) -> Result<ComplexMatrix> {
    program.validate()?;
    let d = program.dim;
    let mut m = ComplexMatrix::identity(d)?;
    for c in &program.crossings {
        apply_t_left(&mut m, c.top_mode, c.theta, c.phi);
    }
    for i in 0..d {
        let e = Complex64::from_polar(1.0, program.output_phases[i]);
        for j in 0..d {
            m[(i, j)] *= e;
        }
    }
    Ok(m)
}

/// State prepared by the program from a photon in the first input waveguide:
/// column 0 of the reconstructed unitary.
pub fn qsp_column(program: &MeshProgram) -> Result<Vec<Complex64>> {
    program.validate()?;
    let d = program.dim;
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[0] = Complex64::new(1.0, 0.0);
    for c in &program.crossings {
        let (s, co) = c.theta.sin_cos();
        let e = Complex64::from_polar(1.0, c.phi);
        let top = v[c.top_mode];
        let bot = v[c.top_mode + 1];
        v[c.top_mode] = e * co * top - s * bot;
        v[c.top_mode + 1] = e * s * top + co * bot;
    }
    for (amp, phase) in v.iter_mut().zip(&program.output_phases) {
        *amp *= Complex64::from_polar(1.0, *phase);
    }
    Ok(v)
}
