//! Normal-family probability primitives evaluated in log space.
//!
//! The probit likelihood multiplies hundreds of CDF terms, and prior draws
//! routinely push linear predictors far into the tails, so everything here
//! is built to stay finite there: `std_normal_logcdf` never returns `-inf`
//! for finite input, and truncated sampling remains efficient however deep
//! the truncation point sits.

// Published coefficients and reference values are kept digit for digit.
#![allow(clippy::excessive_precision)]

use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Standardized truncation point beyond which plain rejection gives way to
/// the translated-exponential proposal.
const EXP_PROPOSAL_SWITCH: f64 = 0.5;

/// Standard normal CDF.
pub fn std_normal_cdf<T: Scalar>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::NonFinite("std_normal_cdf"));
    }
    Ok(ncdf(x))
}

/// `log Φ(x)`, accurate in both tails.
pub fn std_normal_logcdf<T: Scalar>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::NonFinite("std_normal_logcdf"));
    }
    Ok(log_ncdf(x))
}

/// Log-density of the standard normal.
#[inline]
pub fn std_normal_logpdf<T: Scalar>(x: T) -> T {
    -T::lit(0.5) * x * x - T::lit(0.5) * (T::TAU()).ln()
}

#[inline]
pub(crate) fn ncdf<T: Scalar>(x: T) -> T {
    T::lit(0.5) * (-x * T::FRAC_1_SQRT_2()).erfc()
}

/// Unchecked `log Φ(x)`; callers guarantee a finite argument.
///
/// Cody's rational Chebyshev approximations, evaluated in log space on every
/// branch. The Gaussian factor `exp(-x²/2)` is split as
/// `exp(-s²/2) exp(-(x-s)(x+s)/2)` with `s = ⌊16x⌋/16` so that the tails
/// keep full relative precision.
#[inline]
pub(crate) fn log_ncdf<T: Scalar>(x: T) -> T {
    let y = x.abs();
    if y <= T::lit(0.674_489_75) {
        let xsq = if y > T::epsilon() { x * x } else { T::zero() };
        let mut num = T::lit(CODY_A[4]) * xsq;
        let mut den = xsq;
        for i in 0..3 {
            num = (num + T::lit(CODY_A[i])) * xsq;
            den = (den + T::lit(CODY_B[i])) * xsq;
        }
        let t = x * (num + T::lit(CODY_A[3])) / (den + T::lit(CODY_B[3]));
        return (T::lit(0.5) + t).ln();
    }
    // log of the smaller tail, Φ(-|x|).
    let log_tail = if y <= T::lit(32.0f64.sqrt()) {
        let mut num = T::lit(CODY_C[8]) * y;
        let mut den = y;
        for i in 0..7 {
            num = (num + T::lit(CODY_C[i])) * y;
            den = (den + T::lit(CODY_D[i])) * y;
        }
        split_gaussian(y) + ((num + T::lit(CODY_C[7])) / (den + T::lit(CODY_D[7]))).ln()
    } else {
        let r = (y * y).recip();
        let mut num = T::lit(CODY_P[5]) * r;
        let mut den = r;
        for i in 0..4 {
            num = (num + T::lit(CODY_P[i])) * r;
            den = (den + T::lit(CODY_Q[i])) * r;
        }
        let t = r * (num + T::lit(CODY_P[4])) / (den + T::lit(CODY_Q[4]));
        split_gaussian(y) + ((T::lit(FRAC_1_SQRT_2PI) - t) / y).ln()
    };
    if x < T::zero() {
        log_tail
    } else {
        (-log_tail.exp()).ln_1p()
    }
}

/// `-y²/2`, summed so that rounding in `y²` does not leak into the tails.
#[inline]
fn split_gaussian<T: Scalar>(y: T) -> T {
    let s = (y * T::lit(16.0)).trunc() / T::lit(16.0);
    let del = (y - s) * (y + s);
    -s * s * T::lit(0.5) - del * T::lit(0.5)
}

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;

const CODY_A: [f64; 5] = [
    2.235_252_035_460_683_928_7,
    161.028_231_068_555_878_81,
    1_067.689_485_460_370_958_2,
    18_154.981_253_343_561_249,
    0.065_682_337_918_207_449_113,
];
const CODY_B: [f64; 4] = [
    47.202_581_904_688_241_87,
    976.098_551_737_776_693_22,
    10_260.932_208_618_978_205,
    45_507.789_335_026_729_956,
];
const CODY_C: [f64; 9] = [
    0.398_941_512_088_134_667_64,
    8.883_149_794_388_375_941_2,
    93.506_656_132_177_855_979,
    597.270_276_394_800_262_26,
    2_494.537_585_290_372_671_1,
    6_848.190_450_536_282_332_6,
    11_602.651_437_647_350_124,
    9_842.714_838_383_978_021_8,
    1.076_557_677_372_019_231_7e-8,
];
const CODY_D: [f64; 8] = [
    22.266_688_044_328_115_691,
    235.387_901_782_624_998_61,
    1_519.377_599_407_554_805,
    6_485.558_298_266_760_755,
    18_615.571_640_885_098_091,
    34_900.952_721_145_977_266,
    38_912.003_286_093_271_411,
    19_685.429_676_859_990_727,
];
const CODY_P: [f64; 6] = [
    0.215_898_534_057_956_99,
    0.127_401_161_160_247_363_9,
    0.022_235_277_870_649_807,
    0.001_421_619_193_227_893_466,
    2.911_287_495_116_879_2e-5,
    0.023_073_441_764_940_173_03,
];
const CODY_Q: [f64; 5] = [
    1.284_260_096_144_911_21,
    0.468_238_212_480_865_118,
    0.065_988_137_868_928_551_5,
    0.003_782_396_332_027_582_44,
    7.297_515_550_839_662_05e-5,
];

/// `φ(x)/Φ(x)`, the inverse Mills ratio, computed without forming either
/// factor directly.
#[inline]
pub(crate) fn inverse_mills<T: Scalar>(x: T) -> T {
    (std_normal_logpdf(x) - log_ncdf(x)).exp()
}

/// `log Σ exp(vᵢ)` with max-shift stabilization.
pub fn logsumexp<T: Scalar>(v: &[T]) -> Result<T> {
    if v.is_empty() {
        return Err(Error::Empty("logsumexp"));
    }
    Ok(logsumexp_unchecked(v))
}

pub(crate) fn logsumexp_unchecked<T: Scalar>(v: &[T]) -> T {
    let max = v.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() || max == T::infinity() {
        return max;
    }
    let sum: T = v.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

/// `log((1/n) Σ exp(vᵢ))`.
pub fn log_mean_exp<T: Scalar>(v: &[T]) -> Result<T> {
    Ok(logsumexp(v)? - T::from_usize_lossy(v.len()).ln())
}

/// `log(exp(a) + exp(b))`.
#[inline]
pub fn log_add_exp<T: Scalar>(a: T, b: T) -> T {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == T::neg_infinity() {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// Which half-line a truncated normal is restricted to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Support `(0, ∞)`: the `N₊(μ, σ², 0)` case.
    RightOfZero,
    /// Support `(-∞, 0]`: the `N₋(μ, σ², 0)` case.
    LeftOfZero,
}

/// Draw from `N(mu, sigma²)` conditioned on the given side of zero.
///
/// Right-of-zero draws are strictly positive and left-of-zero draws strictly
/// negative; the sign is never left to rounding.
pub fn truncated_normal_sample<T: Scalar, R: Rng + ?Sized>(
    mu: T,
    sigma: T,
    side: Side,
    rng: &mut R,
) -> T {
    debug_assert!(sigma > T::zero());
    let (mu, flip) = match side {
        Side::RightOfZero => (mu, false),
        Side::LeftOfZero => (-mu, true),
    };
    let lower = (-mu / sigma).as_f64();
    let sigma64 = sigma.as_f64();
    loop {
        let z = T::lit(sigma64 * positive_excess(lower, rng));
        if z > T::zero() {
            return if flip { -z } else { z };
        }
    }
}

/// For `X ~ N(0,1)` conditioned on `X > a`, returns `X - a` (always > 0).
fn positive_excess<R: Rng + ?Sized>(a: f64, rng: &mut R) -> f64 {
    if a <= EXP_PROPOSAL_SWITCH {
        loop {
            let x: f64 = rng.sample(StandardNormal);
            if x > a {
                return x - a;
            }
        }
    }
    // Translated exponential proposal with the optimal rate for this a.
    let rate = 0.5 * (a + (a * a + 4.0).sqrt());
    loop {
        let e: f64 = rng.sample::<f64, _>(Exp1) / rate;
        if e <= 0.0 {
            continue;
        }
        let x = a + e;
        let u: f64 = rng.random();
        if u.ln() <= -0.5 * (x - rate) * (x - rate) {
            return e;
        }
    }
}

/// One standard-normal draw converted to `T`.
#[inline]
pub(crate) fn std_normal_draw<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}
