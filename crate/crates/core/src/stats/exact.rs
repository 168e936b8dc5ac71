//! Exact rational closed forms for `f_4`: moments, centered moments,
//! autocorrelation and the Kummer-series moment coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Lossy conversion for reports. Values here are dyadic, so the result is
/// exact whenever the denominator fits in the `f64` exponent range.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `m_nu = (1 * 3 * ... * (2 nu - 1)) / (2^nu nu!)`.
pub fn theoretical_moment(nu: u32) -> BigRational {
    (1..=i64::from(nu)).fold(BigRational::one(), |acc, k| acc * rat(2 * k - 1, 2 * k))
}

/// Moments of the zero-mean sequence, `sum_k C(nu, k) (-1/2)^(nu - k) m_k`.
pub fn centered_moment(nu: u32) -> BigRational {
    let minus_half = rat(-1, 2);
    let mut binom = BigInt::one();
    let mut acc = BigRational::zero();
    for k in 0..=nu {
        if k > 0 {
            binom = binom * BigInt::from(nu - k + 1) / BigInt::from(k);
        }
        let shift = num_traits::pow(minus_half.clone(), (nu - k) as usize);
        acc += BigRational::from_integer(binom.clone()) * shift * theoretical_moment(k);
    }
    acc
}

/// Rising factorial `(a)_r = a (a + 1) ... (a + r - 1)`, `(a)_0 = 1`.
pub fn pochhammer(a: &BigRational, r: u32) -> BigRational {
    (0..r).fold(BigRational::one(), |acc, k| {
        acc * (a + BigRational::from_integer(BigInt::from(k)))
    })
}

/// Moment obtained from the Kummer-series route with `a = 1/2`, `b = 1`:
/// `(1/2)_nu / (1)_nu`. The Gamma prefactor `Gamma(1/2)^2 / pi` is exactly 1.
pub fn kummer_moment(nu: u32) -> BigRational {
    pochhammer(&rat(1, 2), nu) / pochhammer(&BigRational::one(), nu)
}

/// `C_4(m) = 1/4 + delta_{m,0} / 8`; the centered sequence drops the `1/4`.
pub fn theoretical_autocorr(m: u32, centered: bool) -> BigRational {
    let base = if centered { BigRational::zero() } else { rat(1, 4) };
    if m == 0 {
        base + rat(1, 8)
    } else {
        base
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentTable {
    pub max_order: u32,
    pub raw: Vec<BigRational>,
    pub centered: Vec<BigRational>,
}

impl MomentTable {
    pub fn new(max_order: u32) -> Self {
        Self {
            max_order,
            raw: (0..=max_order).map(theoretical_moment).collect(),
            centered: (0..=max_order).map(centered_moment).collect(),
        }
    }
}
