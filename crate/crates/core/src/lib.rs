//! Exact state-vector simulation of truncated (`j_max = 1/2`) SU(2) lattice
//! gauge theory on plaquette chains and honeycomb lattices, with dynamical
//! local tadpole improvement of the magnetic Hamiltonian.
//!
//! All quantities are in lattice units (`a = 1`).

pub mod chain;
pub mod eigen;
pub mod error;
pub mod evolution;
pub mod ground_state;
pub mod honeycomb;
pub mod io;

mod linalg;
pub mod model;
pub mod observables;
pub mod pauli;
pub mod propagate;
pub mod tadpole;

pub use error::{Error, Result};
pub use model::{Model, ModelOperators};
pub use pauli::{PauliString, PauliSum, StateVector};
pub use tadpole::{TadpoleField, TadpoleKind};
