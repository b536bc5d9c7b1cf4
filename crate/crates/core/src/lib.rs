//! Estimation for generalized linear observation models `y ~ p(y | Ax)` via
//! approximate message passing and expectation propagation, with second-order
//! (variance) updates ranging from the classical entrywise rules to exact
//! EP matrix inversion and R-transform updates for invariant matrix ensembles.
//!
//! The crate is organized around five building blocks:
//!
//! - [`channels`]: scalar priors and likelihoods exposing tilted-moment
//!   evaluation (the mean/variance of `p(s) exp(-tilt/2 (s-kappa)^2)`).
//! - [`ensembles`]: measurement-matrix generators (iid Gaussian, Haar-invariant
//!   factor models, row-orthogonal) and synthetic problem instances.
//! - [`freeprob`]: empirical spectra, Stieltjes/R-transforms, the additive
//!   free-convolution fixed point, and Marchenko-Pastur closed forms.
//! - [`solver`]: the first-order sweep with pluggable second-order strategies
//!   (`gamp-full`, `gamp-iid`, `exact-ep`, `samp-rtransform`).
//! - [`oracle`]: dense reference computations (LMMSE, fixed-point identity
//!   residuals, Woodbury checks) used as ground truth in tests and CI.
//!
//! The [`harness`] module adds config-file driven experiments on top, and is
//! what the `gampkit` CLI wraps.

pub mod channels;
pub mod ensembles;
pub mod freeprob;
pub mod harness;
pub mod oracle;
pub mod quad;
pub mod rng;
pub mod solver;
pub mod special;

pub use channels::{ChannelModel, TiltedMoments};
