//! Fourier analysis on bounded Vilenkin groups: group arithmetic, characters,
//! fast transforms, kernels, summability means and martingale Hardy spaces.

pub mod characters;
pub mod error;
pub mod group;
pub mod hardy;
pub mod kernels;
pub mod means;
pub mod report;
pub mod spectral;
pub mod verify;

pub use error::{AtomViolation, Error, Result};
pub use group::{CosetShell, GroupSpec, NatDigits, Point};
pub use num_complex::Complex64;
pub use means::{CesaroCoeffs, MeanKind, Monotonicity, WeightSequence};
pub use spectral::{GridFunction, Spectrum};
