//! Scalar special functions used by the channel moment formulas.
//!
//! Everything here is about evaluating Gaussian tails without cancellation:
//! the scaled complementary error function, stable `log` of the normal CDF,
//! and the inverse Mills ratio together with the tail-safe combinations
//! `lambda(a) - a` and `1 - lambda(a) (lambda(a) - a)` that truncated-normal
//! moments reduce to.

use std::f64::consts::PI;

const SQRT_2: f64 = std::f64::consts::SQRT_2;
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Log of the standard normal density.
pub fn ln_norm_pdf(x: f64) -> f64 {
    -0.5 * x * x - LN_SQRT_2PI
}

/// Standard normal CDF via the complementary error function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Scaled complementary error function `exp(x^2) erfc(x)`.
///
/// For moderate arguments the direct product is exact enough; past the point
/// where `erfc` underflows we switch to the Laplace continued fraction.
pub fn erfcx(x: f64) -> f64 {
    if x < 0.0 {
        // Only used for mildly negative arguments; blows up ~ 2 exp(x^2).
        return 2.0 * (x * x).exp() - erfcx(-x);
    }
    if x < 6.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    // Modified Lentz evaluation of 1/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + ...))).
    let tiny = 1e-300;
    let mut f = x;
    let mut c = f;
    let mut d = 0.0;
    for n in 1..200 {
        let a = 0.5 * n as f64;
        d = x + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        c = x + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-17 {
            break;
        }
    }
    1.0 / (PI.sqrt() * f)
}

/// `ln Phi(x)`, accurate into the deep lower tail.
pub fn norm_logcdf(x: f64) -> f64 {
    if x > -8.0 {
        norm_cdf(x).ln()
    } else {
        // Phi(x) = phi(x) / lambda(-x) for x << 0.
        ln_norm_pdf(x) - mills_lambda(-x).ln()
    }
}

/// Inverse Mills ratio `lambda(a) = phi(a) / Phi(-a)`.
///
/// This is the hazard of the standard normal; `lambda(a) ~ a + 1/a` as
/// `a -> inf` and `lambda(a) -> 0` as `a -> -inf`.
pub fn mills_lambda(a: f64) -> f64 {
    if a < -8.0 {
        // Phi(-a) = 1 - O(1e-16); the ratio is phi(a) to machine precision.
        return norm_pdf(a);
    }
    (2.0 / PI).sqrt() / erfcx(a / SQRT_2)
}

/// `lambda(a) - a`, without cancellation for large `a`.
///
/// Truncated-normal means reduce to `s * mills_delta(alpha)`; the direct
/// subtraction loses relative accuracy like `a^2 eps`, so beyond `a = 80`
/// the asymptotic series in `1/a^2` takes over.
pub fn mills_delta(a: f64) -> f64 {
    if a < 80.0 {
        mills_lambda(a) - a
    } else {
        let u = 1.0 / (a * a);
        (1.0 - u * (2.0 - u * (10.0 - u * (74.0 - 706.0 * u)))) / a
    }
}

/// `1 - lambda(a) * (lambda(a) - a)`, the truncated-normal variance factor.
///
/// Equals `Var[X | X > 0] / s^2` for `X ~ N(-s a, s^2)`; tends to `1/a^2`
/// from below, so the direct form cancels badly for large `a`.
pub fn one_minus_lambda_delta(a: f64) -> f64 {
    if a < 80.0 {
        1.0 - mills_lambda(a) * mills_delta(a)
    } else {
        let u = 1.0 / (a * a);
        u * (1.0 - u * (6.0 - u * (50.0 - 518.0 * u)))
    }
}

/// Numerically stable logistic function.
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values computed with 40-digit arithmetic.
    const ERFCX_REF: &[(f64, f64)] = &[
        (0.0, 1.0),
        (0.5, 0.6156903441929258748708),
        (1.0, 0.4275835761558070044108),
        (2.0, 0.2553956763105057438651),
        (5.0, 0.1107046377330686263702),
        (6.0, 0.09277656780053835438949),
        (8.0, 0.06998516620088092772275),
        (10.0, 0.05614099274382258585752),
        (26.0, 0.02168358485056290661617),
        (50.0, 0.01128153626532377250018),
        (1e4, 0.00005641895807268084115235),
    ];

    #[test]
    fn erfcx_matches_reference() {
        for &(x, want) in ERFCX_REF {
            let got = erfcx(x);
            assert!(
                ((got - want) / want).abs() < 1e-14,
                "erfcx({x}) = {got}, want {want}"
            );
        }
    }

    const MILLS_REF: &[(f64, f64, f64, f64)] = &[
        // (a, lambda, delta, one_minus_lambda_delta)
        (0.0, 0.7978845608028653558799, 0.7978845608028653558799, 0.3633802276324186569245),
        (0.5, 1.141077770368064480884, 0.6410777703680644808839, 0.2684804071558789461801),
        (1.0, 1.525135276160981209089, 0.5251352761609812090891, 0.1990976655703487915534),
        (3.0, 3.283098654930436506928, 0.2830986549304365069281, 0.0705591867852681168624),
        (8.0, 8.121368112236112680654, 0.1213681122361126806535, 0.01432488344334091017574),
        (30.0, 30.03325966743367703707, 0.03325966743367703707112, 0.001103771511890091001137),
        (100.0, 100.0099980009992607052, 0.009998000999260705184902, 0.00009994004994826345036128),
        (299.0, 299.0033444067897546698, 0.00334440678975466984624, 0.0000111848065783588379069),
        (301.0, 301.0033221858020153072, 0.003322185802015307218142, 0.00001103667488941524921133),
        (1e4, 10000.000099999998, 0.00009999999800000009999999, 9.999999400000049924386e-9),
    ];

    #[test]
    fn mills_family_matches_reference() {
        for &(a, lambda, delta, omld) in MILLS_REF {
            assert!(((mills_lambda(a) - lambda) / lambda).abs() < 1e-13, "lambda({a})");
            assert!(((mills_delta(a) - delta) / delta).abs() < 1e-11, "delta({a})");
            assert!(
                ((one_minus_lambda_delta(a) - omld) / omld).abs() < 5e-10,
                "one_minus_lambda_delta({a}) = {} want {omld}",
                one_minus_lambda_delta(a)
            );
        }
    }

    #[test]
    fn mills_lambda_lower_tail() {
        // lambda(a) ~ phi(a) for very negative a.
        let a = -12.0;
        assert!((mills_lambda(a) - norm_pdf(a)).abs() < 1e-40);
    }

    const LOGCDF_REF: &[(f64, f64)] = &[
        (0.0, -0.6931471805599453094172),
        (-1.0, -1.841021645009263505771),
        (-5.0, -15.06499839398872573608),
        (-10.0, -53.23128515051247057835),
        (-20.0, -203.9171553710972639368),
        (-40.0, -804.6084420137537881666),
        (-200.0, -20006.21728089819040209),
    ];

    #[test]
    fn norm_logcdf_matches_reference() {
        for &(x, want) in LOGCDF_REF {
            let got = norm_logcdf(x);
            assert!(
                ((got - want) / want).abs() < 1e-13 || (got - want).abs() < 1e-13,
                "logPhi({x}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn cdf_basics() {
        assert!((norm_cdf(0.0) - 0.5).abs() < 1e-16);
        assert!((norm_cdf(1.0) + norm_cdf(-1.0) - 1.0).abs() < 1e-15);
        assert!((sigmoid(0.0) - 0.5).abs() < 1e-16);
        assert!((sigmoid(30.0) + sigmoid(-30.0) - 1.0).abs() < 1e-15);
    }
}
