//! Rational exponents and controlled-precision scalar powers.
//!
//! Everything downstream leans on two facts: a cut value decoded from a
//! norm survives the subtraction `(n/2^p)·f^p − n·α^p` only if the powers
//! are computed with enough working bits, and rational p admits an exact
//! conjugate exponent p′ with 1/p + 1/p′ = 1.

use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Precision used by the floating search/ascent paths (machine double).
pub const DEFAULT_SEARCH_BITS: u32 = 53;

/// A rational exponent p = num/den ≥ 1, stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PExponent {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl PExponent {
    /// Builds p = num/den, reduced; requires p ≥ 1.
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidExponent("denominator is zero".into()));
        }
        if num < den {
            return Err(Error::InvalidExponent(format!("{num}/{den} is below 1")));
        }
        let g = gcd(num, den);
        Ok(PExponent { num: num / g, den: den / g })
    }

    pub fn from_integer(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn is_one(&self) -> bool {
        self.num == 1 && self.den == 1
    }

    pub fn is_integer(&self) -> bool {
        self.den == 1
    }

    /// Nearest-double value of p (search paths only; decode keeps p exact).
    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn as_rational(&self) -> Rational {
        Rational::from((self.num, self.den))
    }

    pub fn to_float(&self, bits: u32) -> Float {
        Float::with_val(bits, self.as_rational())
    }

    /// The conjugate exponent p′ = p/(p−1), exact; rejects p = 1.
    pub fn conjugate(&self) -> Result<PExponent> {
        if self.is_one() {
            return Err(Error::InvalidExponent(
                "p = 1 has conjugate ∞, not representable".into(),
            ));
        }
        // p/(p-1) = (a/b) / ((a-b)/b) = a/(a-b)
        PExponent::new(self.num, self.num - self.den)
    }

    /// Exact sum p + q (test support for the power-additivity property).
    pub fn checked_add(&self, other: &PExponent) -> Option<PExponent> {
        let num = (self.num as u128)
            .checked_mul(other.den as u128)?
            .checked_add((other.num as u128).checked_mul(self.den as u128)?)?;
        let den = (self.den as u128).checked_mul(other.den as u128)?;
        if num > u64::MAX as u128 || den > u64::MAX as u128 {
            return None;
        }
        PExponent::new(num as u64, den as u64).ok()
    }
}

impl fmt::Display for PExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for PExponent {
    type Err = Error;

    /// Accepts "3", "5/2", or a decimal such as "2.5" (parsed exactly).
    fn from_str(s: &str) -> Result<PExponent> {
        let s = s.trim();
        let bad = |msg: &str| Error::InvalidExponent(format!("{s:?}: {msg}"));
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad("bad numerator"))?;
            let den: u64 = b.trim().parse().map_err(|_| bad("bad denominator"))?;
            return PExponent::new(num, den);
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            if frac_part.is_empty() || !frac_part.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad("bad fractional part"));
            }
            let int: u64 = if int_part.is_empty() {
                0
            } else {
                int_part.parse().map_err(|_| bad("bad integer part"))?
            };
            let scale = 10u64
                .checked_pow(frac_part.len() as u32)
                .ok_or_else(|| bad("too many fractional digits"))?;
            let frac: u64 = frac_part.parse().map_err(|_| bad("bad fractional part"))?;
            let num = int
                .checked_mul(scale)
                .and_then(|v| v.checked_add(frac))
                .ok_or_else(|| bad("value too large"))?;
            return PExponent::new(num, scale);
        }
        let num: u64 = s.parse().map_err(|_| bad("not a number"))?;
        PExponent::new(num, 1)
    }
}

/// Working precision for `pow_rational`: enough guard bits that the
/// exp/ln round-trip error stays far below the caller's target.
fn pow_working_bits(base: &Float, q: &Rational, bits: u32) -> u32 {
    // |q·ln base| ≤ |q|·(|exp2(base)| + 1)·ln 2; only its bit-length matters.
    let e = base.get_exp().unwrap_or(0).unsigned_abs() as f64;
    let qa = q.to_f64().abs();
    let mag = (qa * (e + 1.0)).max(1.0);
    bits + 32 + mag.log2().ceil().max(0.0) as u32 + 1
}

/// base^q for base > 0, via exp(q·ln base) in extended working precision,
/// rounded back to `bits`. Relative error ≤ 2^(2−bits).
pub fn pow_rational(base: &Float, q: &Rational, bits: u32) -> Float {
    debug_assert!(base.is_sign_positive() && !base.is_zero());
    if *q == 0 {
        return Float::with_val(bits, 1);
    }
    let w = pow_working_bits(base, q, bits);
    let ln = Float::with_val(w, base).ln();
    let m = ln * q;
    Float::with_val(bits, m.exp())
}

/// |t|^p at `bits` precision; pow_abs(0, p) = 0 by definition.
/// Relative error ≤ 2^(4−bits).
pub fn pow_abs(t: &Float, p: &PExponent, bits: u32) -> Float {
    if t.is_zero() {
        return Float::with_val(bits, 0);
    }
    let a = Float::with_val(bits.max(t.prec()), t.abs_ref());
    pow_rational(&a, &p.as_rational(), bits)
}

/// Same as [`pow_abs`] with an exact rational argument.
pub fn pow_abs_rational(t: &Rational, p: &PExponent, bits: u32) -> Float {
    if *t == 0 {
        return Float::with_val(bits, 0);
    }
    let w = bits + 64;
    let a = Float::with_val(w, Rational::from(t.abs_ref()));
    pow_rational(&a, &p.as_rational(), bits)
}

/// Precision (in bits) sufficient for the decode subtraction
/// `(n/2^p)·f^p − n·α^p` to retain at least 50 accurate bits:
/// 64 + ⌈p·log2(α) + p·log2(2n)⌉.
///
/// Callers must ensure `alpha ≥ 1` and `n ≥ 2`.
pub fn decode_precision_bits(n: usize, p: &PExponent, alpha: &Float) -> u32 {
    assert!(n >= 2, "decode_precision_bits requires n >= 2");
    assert!(
        !alpha.is_zero() && alpha.is_sign_positive() && *alpha >= 1,
        "decode_precision_bits requires alpha >= 1"
    );
    let w = 96;
    let la = Float::with_val(w, alpha).log2();
    let ln2n = Float::with_val(w, 2 * n as u64).log2();
    let t = p.to_float(w) * (la + ln2n);
    let ceil = t.ceil().to_f64();
    64 + ceil as u32
}
