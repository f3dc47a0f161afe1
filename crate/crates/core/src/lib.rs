pub mod analysis;
pub mod constants;
pub mod descriptor;
pub mod domains;
pub mod error;
pub mod kernels;
pub mod rng;
pub mod special;
pub mod sum;
pub mod verify;

pub use constants::{ComplexDim, LogNumber, RealDim};
pub use analysis::TestFunction;
pub use domains::{Domain, QuadratureRule};
pub use error::{Error, Result};
pub use kernels::{BallKernels, EigenPair};
pub use verify::{Check, VerificationReport};
