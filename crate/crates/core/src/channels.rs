//! Scalar priors and likelihoods with tilted-moment evaluation.
//!
//! Every channel exposes the mean and variance of the tilted density
//!
//! ```text
//!   q(s) propto p(s) exp(-tilt/2 (s - kappa)^2)
//! ```
//!
//! where `p` is either a prior `p(x)` or a likelihood slice `p(y | z)` at a
//! fixed observation `y`. These are the scalar nonlinearities that drive the
//! message-passing sweeps; everything is closed form here, with the
//! Gauss-Hermite path in [`crate::quad`] as the generic fallback and test
//! cross-check. Tilt precisions must be strictly positive; transient
//! negative precisions produced by EP-style updates are clipped upstream in
//! the solver, never here.

use rand::{Rng, RngExt};
use rand_distr::{Distribution, Exp, StandardNormal, Uniform};
use thiserror::Error;

use crate::special::{
    erfcx, mills_delta, mills_lambda, norm_cdf, norm_logcdf, one_minus_lambda_delta, sigmoid,
};

#[derive(Debug, Error)]
pub enum ChannelError {
    #[error("tilt precision must be > 0, got {0}")]
    NonPositiveTiltPrecision(f64),
    #[error("invalid {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("operation requires a prior channel, got a likelihood")]
    NotAPrior,
    #[error("operation requires a likelihood channel, got a prior")]
    NotALikelihood,
    #[error("probit expects binary observations y = +/-1, got {0}")]
    BinaryObservationExpected(f64),
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("vector moment evaluation cannot mix prior and likelihood channels")]
    MixedKinds,
    #[error("likelihood moments need observations; prior moments must not have them")]
    ObservationMismatch,
    #[error("tilted moments are not finite (kappa={kappa}, tilt={tilt})")]
    NonFiniteMoments { kappa: f64, tilt: f64 },
}

/// Mean and variance of a tilted density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedMoments {
    pub mean: f64,
    pub variance: f64,
}

/// A scalar prior or likelihood from the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    /// `x ~ N(mean, variance)`
    PriorGaussian { mean: f64, variance: f64 },
    /// `x ~ (1 - sparsity) delta_0 + sparsity N(mean, variance)`;
    /// `sparsity` is the active (Gaussian) fraction.
    PriorBernoulliGaussian {
        sparsity: f64,
        mean: f64,
        variance: f64,
    },
    /// `p(x) = rate/2 exp(-rate |x|)`
    PriorLaplace { rate: f64 },
    /// `y = z + N(0, noise_variance)`; `noise_variance = 0` is allowed for
    /// noiseless data synthesis and yields a degenerate (zero-variance) tilt.
    LikAwgn { noise_variance: f64 },
    /// `p(y | z) = Phi(y z / scale)` with `y in {-1, +1}`.
    LikProbit { scale: f64 },
}

impl ChannelModel {
    pub fn prior_gaussian(mean: f64, variance: f64) -> Result<Self, ChannelError> {
        require(variance > 0.0 && variance.is_finite(), "variance", variance, "must be > 0")?;
        require(mean.is_finite(), "mean", mean, "must be finite")?;
        Ok(ChannelModel::PriorGaussian { mean, variance })
    }

    pub fn prior_bernoulli_gaussian(
        sparsity: f64,
        mean: f64,
        variance: f64,
    ) -> Result<Self, ChannelError> {
        require(
            sparsity > 0.0 && sparsity <= 1.0,
            "sparsity",
            sparsity,
            "must lie in (0, 1]",
        )?;
        require(variance > 0.0 && variance.is_finite(), "variance", variance, "must be > 0")?;
        require(mean.is_finite(), "mean", mean, "must be finite")?;
        Ok(ChannelModel::PriorBernoulliGaussian { sparsity, mean, variance })
    }

    pub fn prior_laplace(rate: f64) -> Result<Self, ChannelError> {
        require(rate > 0.0 && rate.is_finite(), "rate", rate, "must be > 0")?;
        Ok(ChannelModel::PriorLaplace { rate })
    }

    pub fn likelihood_awgn(noise_variance: f64) -> Result<Self, ChannelError> {
        require(
            noise_variance >= 0.0 && noise_variance.is_finite(),
            "noise_variance",
            noise_variance,
            "must be >= 0",
        )?;
        Ok(ChannelModel::LikAwgn { noise_variance })
    }

    pub fn likelihood_probit(scale: f64) -> Result<Self, ChannelError> {
        require(scale > 0.0 && scale.is_finite(), "scale", scale, "must be > 0")?;
        Ok(ChannelModel::LikProbit { scale })
    }

    pub fn is_prior(&self) -> bool {
        matches!(
            self,
            ChannelModel::PriorGaussian { .. }
                | ChannelModel::PriorBernoulliGaussian { .. }
                | ChannelModel::PriorLaplace { .. }
        )
    }

    pub fn is_likelihood(&self) -> bool {
        !self.is_prior()
    }

    /// Prior mean and variance, the tabula-rasa initialization of the solver.
    pub fn prior_moments(&self) -> Result<(f64, f64), ChannelError> {
        match *self {
            ChannelModel::PriorGaussian { mean, variance } => Ok((mean, variance)),
            ChannelModel::PriorBernoulliGaussian { sparsity, mean, variance } => {
                let m = sparsity * mean;
                let second = sparsity * (variance + mean * mean);
                Ok((m, second - m * m))
            }
            ChannelModel::PriorLaplace { rate } => Ok((0.0, 2.0 / (rate * rate))),
            _ => Err(ChannelError::NotAPrior),
        }
    }

    /// Moments of `q(x) propto p(x) exp(-tilt/2 (x - kappa)^2)`.
    pub fn prior_tilted_moments(
        &self,
        kappa: f64,
        tilt_precision: f64,
    ) -> Result<TiltedMoments, ChannelError> {
        check_tilt(tilt_precision)?;
        let m = match *self {
            ChannelModel::PriorGaussian { mean, variance } => {
                gaussian_tilt(mean, variance, kappa, tilt_precision)
            }
            ChannelModel::PriorBernoulliGaussian { sparsity, mean, variance } => {
                bernoulli_gaussian_tilt(sparsity, mean, variance, kappa, tilt_precision)
            }
            ChannelModel::PriorLaplace { rate } => laplace_tilt(rate, kappa, tilt_precision),
            _ => return Err(ChannelError::NotAPrior),
        };
        finite_or_err(m, kappa, tilt_precision)
    }

    /// Moments of `q(z) propto p(y | z) exp(-tilt/2 (z - kappa)^2)`.
    pub fn likelihood_tilted_moments(
        &self,
        y: f64,
        kappa: f64,
        tilt_precision: f64,
    ) -> Result<TiltedMoments, ChannelError> {
        check_tilt(tilt_precision)?;
        let m = match *self {
            ChannelModel::LikAwgn { noise_variance } => {
                if noise_variance == 0.0 {
                    // Degenerate but well-defined limit: the tilt is ignored.
                    TiltedMoments { mean: y, variance: 0.0 }
                } else {
                    gaussian_tilt(y, noise_variance, kappa, tilt_precision)
                }
            }
            ChannelModel::LikProbit { scale } => {
                if y != 1.0 && y != -1.0 {
                    return Err(ChannelError::BinaryObservationExpected(y));
                }
                probit_tilt(scale, y, kappa, tilt_precision)
            }
            _ => return Err(ChannelError::NotALikelihood),
        };
        finite_or_err(m, kappa, tilt_precision)
    }

    /// Draws one sample from a prior channel.
    pub fn sample_prior<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<f64, ChannelError> {
        match *self {
            ChannelModel::PriorGaussian { mean, variance } => {
                let g: f64 = StandardNormal.sample(rng);
                Ok(mean + variance.sqrt() * g)
            }
            ChannelModel::PriorBernoulliGaussian { sparsity, mean, variance } => {
                let u: f64 = rng.random();
                if u < sparsity {
                    let g: f64 = StandardNormal.sample(rng);
                    Ok(mean + variance.sqrt() * g)
                } else {
                    Ok(0.0)
                }
            }
            ChannelModel::PriorLaplace { rate } => {
                let e = Exp::new(rate).expect("validated rate").sample(rng);
                Ok(if rng.random::<bool>() { e } else { -e })
            }
            _ => Err(ChannelError::NotAPrior),
        }
    }

    /// Draws one observation `y ~ p(y | z)` from a likelihood channel.
    pub fn sample_observation<R: Rng + ?Sized>(
        &self,
        z: f64,
        rng: &mut R,
    ) -> Result<f64, ChannelError> {
        match *self {
            ChannelModel::LikAwgn { noise_variance } => {
                if noise_variance == 0.0 {
                    Ok(z)
                } else {
                    let g: f64 = StandardNormal.sample(rng);
                    Ok(z + noise_variance.sqrt() * g)
                }
            }
            ChannelModel::LikProbit { scale } => {
                let u = Uniform::new(0.0, 1.0).expect("unit interval").sample(rng);
                Ok(if u < norm_cdf(z / scale) { 1.0 } else { -1.0 })
            }
            _ => Err(ChannelError::NotALikelihood),
        }
    }
}

fn require(ok: bool, name: &'static str, value: f64, reason: &'static str) -> Result<(), ChannelError> {
    if ok {
        Ok(())
    } else {
        Err(ChannelError::InvalidParameter { name, value, reason })
    }
}

fn check_tilt(tilt: f64) -> Result<(), ChannelError> {
    if tilt > 0.0 && tilt.is_finite() {
        Ok(())
    } else {
        Err(ChannelError::NonPositiveTiltPrecision(tilt))
    }
}

fn finite_or_err(m: TiltedMoments, kappa: f64, tilt: f64) -> Result<TiltedMoments, ChannelError> {
    if m.mean.is_finite() && m.variance.is_finite() && m.variance >= 0.0 {
        Ok(m)
    } else {
        Err(ChannelError::NonFiniteMoments { kappa, tilt })
    }
}

/// Conjugate Gaussian-times-Gaussian tilt.
fn gaussian_tilt(mean: f64, variance: f64, kappa: f64, tilt: f64) -> TiltedMoments {
    let prec = 1.0 / variance + tilt;
    TiltedMoments {
        mean: (mean / variance + tilt * kappa) / prec,
        variance: 1.0 / prec,
    }
}

/// Spike-and-slab tilt: responsibility-weighted mixture of the conjugate
/// slab posterior and the spike at zero, with weights in log space.
fn bernoulli_gaussian_tilt(
    sparsity: f64,
    mean: f64,
    variance: f64,
    kappa: f64,
    tilt: f64,
) -> TiltedMoments {
    let tilt_var = 1.0 / tilt;
    // Evidence of each component against the tilt Gaussian N(kappa, 1/tilt).
    let slab_var = variance + tilt_var;
    let log_slab = sparsity.ln() - 0.5 * (kappa - mean) * (kappa - mean) / slab_var
        - 0.5 * slab_var.ln();
    let log_spike = (1.0 - sparsity).ln() - 0.5 * kappa * kappa / tilt_var - 0.5 * tilt_var.ln();
    let pi_slab = sigmoid(log_slab - log_spike);
    let post_prec = 1.0 / variance + tilt;
    let slab_mean = (mean / variance + tilt * kappa) / post_prec;
    let slab_post_var = 1.0 / post_prec;
    let m = pi_slab * slab_mean;
    // Always-positive mixture variance: sum pi_i (var_i + (mean_i - m)^2).
    let d_slab = slab_mean - m;
    let var = pi_slab * (slab_post_var + d_slab * d_slab) + (1.0 - pi_slab) * m * m;
    TiltedMoments { mean: m, variance: var }
}

/// Laplace tilt: two truncated Gaussians, one per sign branch.
///
/// On `x >= 0` the target is `exp(rate^2 v / 2 - rate kappa) N(x; kappa - rate v, v)`
/// truncated below at zero, and symmetrically on `x <= 0`. Branch weights and
/// truncated moments are evaluated through the Mills-ratio helpers so both
/// deep-tail regimes (tiny and huge tilt) stay accurate.
fn laplace_tilt(rate: f64, kappa: f64, tilt: f64) -> TiltedMoments {
    let v = 1.0 / tilt;
    let s = v.sqrt();
    let mu_pos = kappa - rate * v;
    let mu_neg = kappa + rate * v;
    let alpha_pos = -mu_pos / s; // standardized truncation gap, positive branch
    let alpha_neg = mu_neg / s; // same for the negative branch (reflected)

    // log-weight difference lw_pos - lw_neg; the quadratic parts cancel
    // analytically when both truncations are deep in the tail.
    let dlw = if alpha_pos > 8.0 && alpha_neg > 8.0 {
        erfcx(alpha_pos / std::f64::consts::SQRT_2).ln()
            - erfcx(alpha_neg / std::f64::consts::SQRT_2).ln()
    } else {
        (-rate * kappa + norm_logcdf(-alpha_pos)) - (rate * kappa + norm_logcdf(-alpha_neg))
    };
    let pi_pos = sigmoid(dlw);
    let pi_neg = 1.0 - pi_pos;

    let mean_pos = s * mills_delta(alpha_pos);
    let var_pos = v * one_minus_lambda_delta(alpha_pos);
    let mean_neg = -s * mills_delta(alpha_neg);
    let var_neg = v * one_minus_lambda_delta(alpha_neg);

    let m = pi_pos * mean_pos + pi_neg * mean_neg;
    let dp = mean_pos - m;
    let dn = mean_neg - m;
    let var = pi_pos * (var_pos + dp * dp) + pi_neg * (var_neg + dn * dn);
    TiltedMoments { mean: m, variance: var }
}

/// Probit tilt via the standard Gaussian-CDF moment identities.
fn probit_tilt(scale: f64, y: f64, kappa: f64, tilt: f64) -> TiltedMoments {
    let v = 1.0 / tilt;
    let t2 = scale * scale + v;
    let u = y * kappa / t2.sqrt();
    let r = mills_lambda(-u); // phi(u) / Phi(u)
    let mean = kappa + y * v * r / t2.sqrt();
    let omld = one_minus_lambda_delta(-u);
    // var = v (1 - v/t2 * lambda(-u) delta(-u)), written with positive terms.
    let var = v * (omld + (scale * scale / t2) * (1.0 - omld));
    TiltedMoments { mean, variance: var }
}

/// Elementwise tilted moments for a per-index channel vector.
///
/// All models must be of the same side: priors take `observations = None`,
/// likelihoods require one observation per index.
pub fn vector_moments(
    models: &[ChannelModel],
    observations: Option<&[f64]>,
    kappa: &[f64],
    tilt: &[f64],
) -> Result<(Vec<f64>, Vec<f64>), ChannelError> {
    let n = models.len();
    if kappa.len() != n {
        return Err(ChannelError::DimensionMismatch { what: "kappa", got: kappa.len(), expected: n });
    }
    if tilt.len() != n {
        return Err(ChannelError::DimensionMismatch { what: "tilt", got: tilt.len(), expected: n });
    }
    let all_prior = models.iter().all(|m| m.is_prior());
    let all_lik = models.iter().all(|m| m.is_likelihood());
    if !all_prior && !all_lik {
        return Err(ChannelError::MixedKinds);
    }
    match (all_prior, observations) {
        (true, None) => {
            let mut mean = Vec::with_capacity(n);
            let mut var = Vec::with_capacity(n);
            for i in 0..n {
                let m = models[i].prior_tilted_moments(kappa[i], tilt[i])?;
                mean.push(m.mean);
                var.push(m.variance);
            }
            Ok((mean, var))
        }
        (false, Some(y)) => {
            if y.len() != n {
                return Err(ChannelError::DimensionMismatch {
                    what: "observations",
                    got: y.len(),
                    expected: n,
                });
            }
            let mut mean = Vec::with_capacity(n);
            let mut var = Vec::with_capacity(n);
            for i in 0..n {
                let m = models[i].likelihood_tilted_moments(y[i], kappa[i], tilt[i])?;
                mean.push(m.mean);
                var.push(m.variance);
            }
            Ok((mean, var))
        }
        _ => Err(ChannelError::ObservationMismatch),
    }
}
