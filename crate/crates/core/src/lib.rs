//! Radio map interpolation from a handful of fixed power sensors.
//!
//! The crate models received power as a log-distance median plus spatially
//! correlated log-normal shadow fading and interpolates it at unmeasured
//! points with six estimators:
//!
//! * `sm0`: ideal conditional-mean interpolator (true path loss, known
//!   correlation); equivalent to Simple Kriging,
//! * `sm1`: least-squares path-loss fit plus correlation-derived weights on
//!   the fitted residuals,
//! * `sm2`: the same pipeline with inverse-distance residual weights,
//! * `nn`, `idw`, `nan`: nearest neighbour, inverse distance weighting and
//!   Sibson natural neighbour on the raw powers.
//!
//! Every estimator is linear in the measurement vector, so its error at a
//! point is an affine form over the joint Gaussian shadow vector. The
//! [`analysis`] module turns those forms into exact RMS errors and the
//! [`harness`] module checks them against Monte Carlo simulation.

pub mod analysis;
pub mod correlation;
pub mod error;
pub mod estimators;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod linalg;

pub use correlation::{CorrelationModel, Kernel};
pub use error::{Error, Result};
pub use estimators::Method;
pub use geometry::{PathLoss, Point, QueryGrid, Scenario};
