//! Small state-vector simulation and SQO-parameter fitting, used to check
//! that synthesized CNOT templates can actually express target states.
//!
//! Qubit 0 is the least significant amplitude index throughout.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::circuits::{Gate, GateCircuit};
use crate::error::{Error, Result};
use crate::numerics::RngStream;
use rand::Rng;

/// Hard cap on simulated register size.
pub const MAX_SIM_QUBITS: usize = 12;
/// Hard cap on optimized register size.
pub const MAX_OPT_QUBITS: usize = 6;
/// Fidelity at which a fit counts as converged.
pub const CONVERGENCE_FIDELITY: f64 = 1.0 - 1e-6;
/// Central-difference step for the fidelity gradient.
pub const GRADIENT_STEP: f64 = 1e-5;

/// Amplitudes of an n-qubit register, little-endian.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    pub n_qubits: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on n qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Build from amplitudes, requiring unit norm within 1e-10.
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_qubit_count(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::BadStateLength {
                len: amplitudes.len(),
                n: n_qubits,
            });
        }
        let state = Self {
            n_qubits,
            amplitudes,
        };
        let defect = (state.norm() - 1.0).abs();
        if defect > 1e-10 {
            return Err(Error::NotNormalized { defect });
        }
        Ok(state)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// |<self|other>|^2, clamped into [0, 1].
    pub fn fidelity(&self, other: &Self) -> f64 {
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        overlap.norm_sqr().clamp(0.0, 1.0)
    }
}

fn check_qubit_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidDimension);
    }
    if n > MAX_SIM_QUBITS {
        return Err(Error::TooManyQubits {
            n,
            max: MAX_SIM_QUBITS,
        });
    }
    Ok(())
}

/// Haar-random n-qubit state: column 0 of a Haar unitary on 2^n modes.
pub fn haar_state(n_qubits: usize, stream: RngStream) -> Result<StateVector> {
    check_qubit_count(n_qubits)?;
    let u = crate::numerics::haar_unitary(1 << n_qubits, stream)?;
    StateVector::new(n_qubits, u.column(0))
}

/// Three-angle single-qubit unitary (full coverage up to global phase):
///
/// ```text
/// [ cos(t/2)             -e^{i l} sin(t/2)      ]
/// [ e^{i p} sin(t/2)      e^{i(p + l)} cos(t/2) ]
/// ```
fn sqo_matrix(params: [f64; 3]) -> [Complex64; 4] {
    let [t, p, l] = params;
    let (s, c) = (t / 2.0).sin_cos();
    [
        Complex64::new(c, 0.0),
        -Complex64::from_polar(s, l),
        Complex64::from_polar(s, p),
        Complex64::from_polar(c, p + l),
    ]
}

fn apply_sqo(state: &mut StateVector, qubit: usize, params: [f64; 3]) {
    let m = sqo_matrix(params);
    let bit = 1usize << qubit;
    let len = state.amplitudes.len();
    let mut base = 0usize;
    while base < len {
        for low in base..base + bit {
            let a = state.amplitudes[low];
            let b = state.amplitudes[low | bit];
            state.amplitudes[low] = m[0] * a + m[1] * b;
            state.amplitudes[low | bit] = m[2] * a + m[3] * b;
        }
        base += bit << 1;
    }
}

fn apply_cnot(state: &mut StateVector, control: usize, target: usize) {
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    for i in 0..state.amplitudes.len() {
        if i & cbit != 0 && i & tbit == 0 {
            state.amplitudes.swap(i, i | tbit);
        }
    }
}

/// Apply the circuit to |0...0>, taking SQO angles for **every** slot from
/// `params` in slot order (embedded parameters are ignored).
pub fn simulate_with(circuit: &GateCircuit, params: &[[f64; 3]]) -> Result<StateVector> {
    circuit.validate()?;
    let slots = circuit.sqo_slot_count();
    if params.len() != slots {
        return Err(Error::UnassignedSlot {
            slot: params.len().min(slots),
        });
    }
    let mut state = StateVector::zero(circuit.n_qubits)?;
    let mut slot = 0;
    for gate in &circuit.gates {
        match *gate {
            Gate::Cnot { control, target } => apply_cnot(&mut state, control, target),
            Gate::Sqo { qubit, .. } => {
                apply_sqo(&mut state, qubit, params[slot]);
                slot += 1;
            }
        }
    }
    Ok(state)
}

/// Apply the circuit to |0...0> using each slot's embedded parameters;
/// errors on the first unassigned slot.
pub fn simulate(circuit: &GateCircuit) -> Result<StateVector> {
    let mut params = Vec::with_capacity(circuit.sqo_slot_count());
    for (slot, gate) in circuit
        .gates
        .iter()
        .filter(|g| matches!(g, Gate::Sqo { .. }))
        .enumerate()
    {
        match gate {
            Gate::Sqo {
                params: Some(p), ..
            } => params.push(*p),
            Gate::Sqo { params: None, .. } => return Err(Error::UnassignedSlot { slot }),
            Gate::Cnot { .. } => unreachable!(),
        }
    }
    simulate_with(circuit, &params)
}

/// Outcome of fitting a template's SQO angles to a target state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub fidelity: f64,
    pub params: Vec<[f64; 3]>,
    pub iterations: usize,
    pub converged: bool,
}

fn fidelity_of(circuit: &GateCircuit, target: &StateVector, params: &[[f64; 3]]) -> f64 {
    let prepared = simulate_with(circuit, params).expect("validated circuit");
    target.fidelity(&prepared)
}

fn flat_gradient(
    circuit: &GateCircuit,
    target: &StateVector,
    params: &[[f64; 3]],
    step: f64,
) -> Vec<f64> {
    let dim = params.len() * 3;
    let mut grad = Vec::with_capacity(dim);
    let mut work = params.to_vec();
    for i in 0..dim {
        let (slot, comp) = (i / 3, i % 3);
        let orig = work[slot][comp];
        work[slot][comp] = orig + step;
        let up = fidelity_of(circuit, target, &work);
        work[slot][comp] = orig - step;
        let down = fidelity_of(circuit, target, &work);
        work[slot][comp] = orig;
        grad.push((up - down) / (2.0 * step));
    }
    grad
}

/// Richer five-point gradient estimate, used to cross-check the two-point
/// stencil that drives the optimizer.
pub fn gradient_five_point(
    circuit: &GateCircuit,
    target: &StateVector,
    params: &[[f64; 3]],
    step: f64,
) -> Vec<f64> {
    let dim = params.len() * 3;
    let mut grad = Vec::with_capacity(dim);
    let mut work = params.to_vec();
    let eval = |work: &mut Vec<[f64; 3]>, slot: usize, comp: usize, delta: f64| {
        let orig = work[slot][comp];
        work[slot][comp] = orig + delta;
        let f = fidelity_of(circuit, target, work);
        work[slot][comp] = orig;
        f
    };
    for i in 0..dim {
        let (slot, comp) = (i / 3, i % 3);
        let f2p = eval(&mut work, slot, comp, 2.0 * step);
        let f1p = eval(&mut work, slot, comp, step);
        let f1m = eval(&mut work, slot, comp, -step);
        let f2m = eval(&mut work, slot, comp, -2.0 * step);
        grad.push((-f2p + 8.0 * f1p - 8.0 * f1m + f2m) / (12.0 * step));
    }
    grad
}

/// Two-point central-difference gradient at the optimizer's step size.
pub fn gradient_central(
    circuit: &GateCircuit,
    target: &StateVector,
    params: &[[f64; 3]],
) -> Vec<f64> {
    flat_gradient(circuit, target, params, GRADIENT_STEP)
}

/// Maximize fidelity over all SQO parameters by multi-start gradient ascent
/// with backtracking line search.
///
/// Restart 0 starts from the circuit's embedded parameters (zeros where
/// unset), so a target already reachable at the initial point converges at
/// iteration 0. Later restarts draw uniform angles from the stream. The
/// budget caps total ascent iterations across restarts; exhausting it
/// returns the best fit found with `converged = false`.
pub fn optimize_template(
    circuit: &GateCircuit,
    target: &StateVector,
    budget: usize,
    stream: RngStream,
) -> Result<FitResult> {
    circuit.validate()?;
    if circuit.n_qubits > MAX_OPT_QUBITS {
        return Err(Error::TooManyQubits {
            n: circuit.n_qubits,
            max: MAX_OPT_QUBITS,
        });
    }
    if circuit.n_qubits != target.n_qubits {
        return Err(Error::DimensionMismatch {
            left: circuit.n_qubits,
            right: target.n_qubits,
        });
    }

    let slots = circuit.sqo_slot_count();
    let embedded: Vec<[f64; 3]> = circuit
        .gates
        .iter()
        .filter_map(|g| match g {
            Gate::Sqo { params, .. } => Some(params.unwrap_or([0.0; 3])),
            Gate::Cnot { .. } => None,
        })
        .collect();

    let mut best_params = embedded.clone();
    let mut best_fidelity = fidelity_of(circuit, target, &best_params);
    let mut iterations = 0usize;
    let mut restart = 0u64;

    while best_fidelity < CONVERGENCE_FIDELITY && iterations < budget {
        let mut params = if restart == 0 {
            embedded.clone()
        } else {
            let mut rng = stream.offset(restart).rng();
            (0..slots)
                .map(|_| {
                    [
                        rng.gen_range(-PI..PI),
                        rng.gen_range(-PI..PI),
                        rng.gen_range(-PI..PI),
                    ]
                })
                .collect()
        };
        let mut fidelity = fidelity_of(circuit, target, &params);

        'ascent: while iterations < budget {
            iterations += 1;
            let grad = flat_gradient(circuit, target, &params, GRADIENT_STEP);
            let gnorm_sqr: f64 = grad.iter().map(|g| g * g).sum();
            if gnorm_sqr < 1e-18 {
                break 'ascent;
            }
            let mut alpha = 1.0;
            loop {
                let mut trial = params.clone();
                for (i, g) in grad.iter().enumerate() {
                    trial[i / 3][i % 3] += alpha * g;
                }
                let trial_fid = fidelity_of(circuit, target, &trial);
                if trial_fid > fidelity {
                    params = trial;
                    fidelity = trial_fid;
                    break;
                }
                alpha *= 0.5;
                if alpha < 1e-12 {
                    break 'ascent;
                }
            }
            if fidelity >= CONVERGENCE_FIDELITY {
                break 'ascent;
            }
        }

        if fidelity > best_fidelity {
            best_fidelity = fidelity;
            best_params = params;
        }
        restart += 1;
    }

    Ok(FitResult {
        fidelity: best_fidelity,
        params: best_params,
        iterations,
        converged: best_fidelity >= CONVERGENCE_FIDELITY,
    })
}
