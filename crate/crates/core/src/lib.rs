//! Nested Mach-Zehnder interferometer with vibrating mirrors.
//!
//! Two models of the same five-mirror geometry live here:
//!
//! * [`fock`]: a single photon whose frequency modes record which vibrating
//!   mirrors it bounced off, with amplitudes kept as truncated power series
//!   in the kick amplitude ε.
//! * [`beam`]: a classical transverse Gaussian beam whose three output
//!   components are shifted by the mirror displacements, with closed-form
//!   total-intensity and quad-cell detector signals.
//!
//! [`spectra`] samples the detector signals, takes a periodogram and
//! attributes spectral lines to mirrors. [`validation`] bundles the model
//! invariants into a runnable check suite.

pub mod beam;
pub mod error;
pub mod fock;
pub mod scenario;
pub mod series;
pub mod spectra;
pub mod validation;

pub use error::{Error, Result};
pub use scenario::{CaseId, MirrorId, Scenario};
