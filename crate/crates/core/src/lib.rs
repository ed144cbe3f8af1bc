//! Simulator and analysis toolkit for a three-well Bose-Hubbard mode splitter.
//!
//! Three potential wells in a line, tunneling `J` between neighbours and an
//! on-site collisional nonlinearity `chi`, with all population initially in
//! the middle well. The crate provides four routes to the same observables:
//!
//! - [`analytic`]: closed-form solutions of the Heisenberg equations for the
//!   non-interacting case (`chi = 0`).
//! - [`ppsim`]: positive-P phase-space integration of the full interacting
//!   dynamics over large trajectory ensembles.
//! - [`oracle`]: exact evolution in the fixed-total-number Fock basis for
//!   small atom numbers, plus an exact two-mode beamsplitter reference.
//! - [`beamsplitter`]: closed forms for the optical-beamsplitter comparison
//!   system (Fock, coherent and squeezed-vacuum inputs on a vacuum port).
//!
//! [`criteria`] evaluates the inseparability, entanglement, EPR-steering and
//! Bell witnesses (Hillery-Zubairy, Cavalcanti, Duan-Simon, Reid) from the
//! ensemble-averaged moments that both the stochastic and exact routes
//! produce.

pub mod analytic;
pub mod beamsplitter;
pub mod criteria;
mod error;
pub mod model;
pub mod moments;
pub mod oracle;
pub mod ppsim;
pub mod stats;

pub use error::{Error, Result};
pub use model::{initial_moments, InitialMoments, InitialState, OmegaRate, SystemConfig};
pub use moments::{MomentSet, MomentVector, PairMoments};
pub use ppsim::{run_ensemble, EnsembleSeries, TrajectoryState};
