//! The 2n×n gadget matrix whose p-norm sphere maximizers are exactly the
//! sign vectors, plus direct evaluation of its objective and the two-term
//! power inequality behind that fact.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{pow_abs, pow_rational, PExponent};

/// Builds the gadget matrix: for i = 1..n−1 a difference row (x_i − x_{i+1})
/// followed by a sum row (x_i + x_{i+1}), then the wraparound pair
/// (x_n − x_1) and (x_1 + x_n). Shape 2n × n, entries in {−1, 0, +1}.
pub fn gadget_matrix(n: usize) -> Result<DenseMatrix> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "gadget_matrix needs n >= 2, got {n}"
        )));
    }
    let mut a = DenseMatrix::zeros(2 * n, n);
    for i in 0..n - 1 {
        a.set(2 * i, i, Rational::from(1));
        a.set(2 * i, i + 1, Rational::from(-1));
        a.set(2 * i + 1, i, Rational::from(1));
        a.set(2 * i + 1, i + 1, Rational::from(1));
    }
    a.set(2 * n - 2, 0, Rational::from(-1));
    a.set(2 * n - 2, n - 1, Rational::from(1));
    a.set(2 * n - 1, 0, Rational::from(1));
    a.set(2 * n - 1, n - 1, Rational::from(1));
    Ok(a)
}

/// Σ_i |x_i − x_{i+1}|^p + |x_i + x_{i+1}|^p with index n+1 ≡ 1, evaluated
/// termwise without materializing the matrix. Equals ‖Ax‖_p^p.
pub fn gadget_value(x: &[Float], p: &PExponent, bits: u32) -> Float {
    assert!(x.len() >= 2, "gadget_value needs a vector of length >= 2");
    let n = x.len();
    let w = bits + 16;
    let mut acc = Float::with_val(w, 0);
    for i in 0..n {
        let j = (i + 1) % n;
        let d = Float::with_val(w, &x[i] - &x[j]);
        let s = Float::with_val(w, &x[i] + &x[j]);
        acc += pow_abs(&d, p, w);
        acc += pow_abs(&s, p, w);
    }
    Float::with_val(bits, acc)
}

/// f64 fast path for sampling loops and the ascent objective.
pub fn gadget_value_f64(x: &[f64], p: f64) -> f64 {
    let n = x.len();
    let mut acc = 0.0;
    for i in 0..n {
        let j = (i + 1) % n;
        acc += (x[i] - x[j]).abs().powf(p) + (x[i] + x[j]).abs().powf(p);
    }
    acc
}

/// |t|^q for q ≥ 0 with the convention 0^0 = 1 (needed for the p = 2
/// boundary of the pair inequality).
fn pow_abs_nonneg(t: &Float, q: &Rational, bits: u32) -> Float {
    debug_assert!(*q >= 0);
    if t.is_zero() {
        return Float::with_val(bits, i32::from(*q == 0));
    }
    let a = Float::with_val(bits.max(t.prec()), t.abs_ref());
    pow_rational(&a, q, bits)
}

/// The three quantities of the two-term power inequality for p ≥ 2:
/// lhs = |x+y|^p + |x−y|^p,
/// bound = 2^{p−1}(|x|^p + |y|^p),
/// error = ((|x|−|y|)²/4)·(p(p−1)(|x|+|y|)^{p−2} − 2·||x|−|y||^{p−2}),
/// satisfying lhs ≤ bound − error with error ≥ 0.
pub fn pair_inequality_terms(
    x: &Float,
    y: &Float,
    p: &PExponent,
    bits: u32,
) -> Result<(Float, Float, Float)> {
    let two = PExponent::from_integer(2)?;
    if p.as_rational() < two.as_rational() {
        return Err(Error::InvalidParameter(format!(
            "pair_inequality_terms needs p >= 2, got {p}"
        )));
    }
    let w = bits + 16;
    let s = Float::with_val(w, x + y);
    let d = Float::with_val(w, x - y);
    let lhs = Float::with_val(bits, pow_abs(&s, p, w) + pow_abs(&d, p, w));

    let ax = Float::with_val(w, x.abs_ref());
    let ay = Float::with_val(w, y.abs_ref());
    let pm1 = Rational::from(p.as_rational() - 1);
    let half_pow = pow_rational(&Float::with_val(w, 2), &pm1, w);
    let bound = Float::with_val(
        bits,
        half_pow * (pow_abs(&ax, p, w) + pow_abs(&ay, p, w)),
    );

    let diff = Float::with_val(w, &ax - &ay);
    let error = if diff.is_zero() {
        Float::with_val(bits, 0)
    } else {
        let pm2 = Rational::from(p.as_rational() - 2);
        let sum = Float::with_val(w, &ax + &ay);
        let adiff = Float::with_val(w, diff.abs_ref());
        let pr = p.to_float(w);
        let coef = pr.clone() * (pr - 1) * pow_abs_nonneg(&sum, &pm2, w)
            - 2 * pow_abs_nonneg(&adiff, &pm2, w);
        let prefactor = Float::with_val(w, &diff * &diff) / 4;
        Float::with_val(bits, prefactor * coef)
    };
    Ok((lhs, bound, error))
}

/// Certified upper bound n·2^p − 3(p−2)c²/(2^p n²) on ‖Ay‖_p^p over sphere
/// points y with min_{x ∈ X} ‖y − x‖_∞ ≥ c. Requires p ≥ 2, c ∈ (0, 1/2].
pub fn deficiency_bound(n: usize, p: &PExponent, c: &Float, bits: u32) -> Result<Float> {
    if p.as_rational() < 2 {
        return Err(Error::InvalidParameter(format!(
            "deficiency_bound needs p >= 2, got {p}"
        )));
    }
    if !(c.is_sign_positive() && !c.is_zero() && *c <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "deficiency_bound needs c in (0, 1/2], got {c}"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("deficiency_bound needs n >= 2".into()));
    }
    let w = bits + 16;
    let two_p = pow_rational(&Float::with_val(w, 2), &p.as_rational(), w);
    let lead = Float::with_val(w, &two_p * Rational::from(n as u64));
    let pm2 = p.to_float(w) - 2;
    let c2 = Float::with_val(w, c * c);
    let correction = Float::with_val(w, 3 * pm2 * c2)
        / (two_p * Rational::from((n * n) as u64));
    Ok(Float::with_val(bits, lead - correction))
}
