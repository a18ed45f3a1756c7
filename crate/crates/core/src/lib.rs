//! Spectral toolkit for right-linear operators on quaternionic vector spaces.

pub mod drazin;
pub mod error;
pub mod gen;
pub mod geninv;
pub mod hmat;
pub mod io;
pub(crate) mod kernel;
pub mod quat;
pub mod scalc;
pub mod sspec;
pub mod suite;
pub mod tol;

pub use drazin::DrazinResult;
pub use error::{Error, Result};
pub use geninv::GenInvResult;
pub use hmat::{ComplexAdjoint, HMatrix};
pub use io::FormatError;
pub use quat::{sphere_of, slice_point, EigenSphere, Quaternion};
pub use scalc::{IntrinsicFn, SliceContour};
pub use sspec::Spectrum;
pub use suite::{run_check, run_suite, Check, CheckOutcome, SuiteConfig, SuiteReport};
