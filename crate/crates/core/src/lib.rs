//! Electrical programming-energy estimation for photonic state preparation.
//!
//! Compares two ways of preparing arbitrary quantum states on a programmable
//! Mach-Zehnder mesh driven by electro-optic phase shifters:
//!
//! - **path-encoded qudits**: compile a Haar-random unitary onto a
//!   rectangular mesh ([`mesh`]) and charge every phase shifter ([`energy`]);
//! - **path-encoded qubits**: count the nearest-neighbor CNOTs of a
//!   state-preparation circuit ([`circuits`]) and charge each heralded CNOT
//!   block, either programmed into reconfigurable hardware or as a dedicated
//!   component with trim corrections.
//!
//! [`montecarlo`] runs the seeded sweeps behind the comparison curves and
//! [`verify`] checks by state-vector simulation that the CNOT templates can
//! express arbitrary targets.

pub mod circuits;
pub mod energy;
pub mod error;
pub mod io;
pub mod mesh;
pub mod montecarlo;
pub mod numerics;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{frobenius_distance, haar_unitary, Complex64, ComplexMatrix, RngStream};
