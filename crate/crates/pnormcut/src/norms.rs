//! Norm computation engines.
//!
//! Four ways to attack `max ‖Mx‖_q / ‖x‖_p`, with different guarantees:
//! hypercube enumeration (exact for the mixed (∞,p) norm), multistart
//! nonlinear power iteration (heuristic, p→p), sign-restricted search
//! (certified lower bound, exact on the sign set), and closed forms for
//! p ∈ {1, ∞}. Enumeration keeps an exact rational image vector so that
//! reduction matrices, whose cut contribution sits ~30 digits below the
//! gadget term, still rank correctly.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{pow_abs, pow_abs_rational, pow_rational, PExponent, DEFAULT_SEARCH_BITS};
use crate::DEFAULT_ENUM_LIMIT;

/// How a [`NormEstimate`] was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormMethod {
    /// Exhaustive hypercube vertex enumeration.
    Enumeration,
    /// Multistart nonlinear power iteration; `converged` records whether
    /// the best run stalled before hitting the iteration cap.
    Ascent { converged: bool },
    /// Enumeration restricted to sign vectors, ratio against ‖x‖_p.
    SignSearch,
    /// Closed-form row/column sums (p = 1 or p = ∞).
    Direct,
}

/// A norm value together with the witness achieving it.
///
/// `value` is always a valid lower bound on the true norm; `certified`
/// is set only when the optimum provably lies on the enumerated set.
#[derive(Clone, Debug)]
pub struct NormEstimate {
    pub value: Float,
    pub witness: Vec<Float>,
    pub method: NormMethod,
    pub certified: bool,
}

/// Knobs for the multistart ascent.
#[derive(Clone, Debug)]
pub struct AscentConfig {
    /// Number of random unit starts (sign and coordinate starts are added
    /// on top, see module docs).
    pub restarts: usize,
    pub max_iters: usize,
    /// Relative stall tolerance: a run stops after 3 consecutive
    /// iterations improving by less than this factor.
    pub tol: f64,
    pub seed: u64,
}

impl Default for AscentConfig {
    fn default() -> Self {
        AscentConfig {
            restarts: 200,
            max_iters: 10_000,
            tol: 1e-12,
            seed: 0,
        }
    }
}

/// Σ|v_i|^p for a high-precision vector.
pub fn p_power_sum_hp(v: &[Float], p: &PExponent, bits: u32) -> Float {
    let w = bits + 16;
    let mut acc = Float::with_val(w, 0);
    for vi in v {
        acc += pow_abs(vi, p, w);
    }
    Float::with_val(bits, acc)
}

/// Σ|v_i|^p for an exact rational vector, evaluated at `bits`.
pub fn p_power_sum_rational(v: &[Rational], p: &PExponent, bits: u32) -> Float {
    let w = bits + 16;
    if p.is_integer() {
        return Float::with_val(bits, &p_power_sum_exact(v, p.numerator() as u32));
    }
    let mut acc = Float::with_val(w, 0);
    for vi in v {
        acc += pow_abs_rational(vi, p, w);
    }
    Float::with_val(bits, acc)
}

/// Exact Σ|v_i|^p for integer p.
fn p_power_sum_exact(v: &[Rational], p: u32) -> Rational {
    let mut acc = Rational::new();
    for vi in v {
        acc += Rational::from(vi.abs_ref()).pow(p);
    }
    acc
}

/// ‖v‖_p for a high-precision vector.
pub fn vector_p_norm_hp(v: &[Float], p: &PExponent, bits: u32) -> Float {
    let w = bits + 16;
    let sum = p_power_sum_hp(v, p, w);
    if sum.is_zero() {
        return Float::with_val(bits, 0);
    }
    if p.is_one() {
        return Float::with_val(bits, sum);
    }
    let inv_p = Rational::from((p.denominator(), p.numerator()));
    pow_rational(&sum, &inv_p, bits)
}

fn vector_p_norm_f64(v: &[f64], pf: f64) -> f64 {
    if pf == 1.0 {
        return v.iter().map(|x| x.abs()).sum();
    }
    let s: f64 = v.iter().map(|x| x.abs().powf(pf)).sum();
    s.powf(1.0 / pf)
}

enum BestSum {
    Exact(Rational),
    Hp(Float),
}

/// Maximizes Σ|(Mx)_i|^p over sign vectors x with x_1 = +1 (the objective
/// is sign-symmetric). A fast f64 scan with incremental image updates
/// filters candidates; anything within 10⁻⁹ relative of the running f64
/// best is re-ranked with an exact rational image (exact sums for integer
/// p, `bits`-precision sums otherwise), so near-ties invisible at machine
/// precision are still ordered correctly. Ties resolve to the
/// lexicographically smallest witness.
///
/// Returns the winning power sum (at bits+16) and witness.
fn best_sign_power_sum(
    m: &DenseMatrix,
    p: &PExponent,
    bits: u32,
    limit: usize,
) -> Result<(Float, Vec<i8>)> {
    let (rows, n) = m.shape();
    if n == 0 || rows == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    if n > limit {
        return Err(Error::EnumerationLimit { n, limit });
    }
    let w = bits + 16;
    let colsf: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..rows).map(|i| m.get(i, j).to_f64()).collect())
        .collect();
    let pf = p.value();
    let pint = p.is_integer().then(|| p.numerator() as u32);

    let mut x = vec![1i8; n];
    let mut yf: Vec<f64> = (0..rows)
        .map(|i| colsf.iter().map(|c| c[i]).sum())
        .collect();
    let mut best_f64 = f64::NEG_INFINITY;
    let mut best: Option<(BestSum, Vec<i8>)> = None;

    let consider = |x: &[i8], val: f64, best_f64: &mut f64, best: &mut Option<(BestSum, Vec<i8>)>| {
        if val > *best_f64 {
            *best_f64 = val;
        }
        if val < *best_f64 * (1.0 - 1e-9) - f64::MIN_POSITIVE {
            return;
        }
        let yr = m.mul_sign(x).expect("dimensions checked");
        match pint {
            Some(k) => {
                let sum = p_power_sum_exact(&yr, k);
                let better = match best {
                    Some((BestSum::Exact(b), wit)) => {
                        sum > *b || (sum == *b && x < wit.as_slice())
                    }
                    None => true,
                    _ => unreachable!(),
                };
                if better {
                    *best = Some((BestSum::Exact(sum), x.to_vec()));
                }
            }
            None => {
                let mut acc = Float::with_val(w, 0);
                for vi in &yr {
                    acc += pow_abs_rational(vi, p, w);
                }
                let better = match best {
                    Some((BestSum::Hp(b), wit)) => {
                        acc > *b || (acc == *b && x < wit.as_slice())
                    }
                    None => true,
                    _ => unreachable!(),
                };
                if better {
                    *best = Some((BestSum::Hp(acc), x.to_vec()));
                }
            }
        }
    };

    let val0 = yf.iter().map(|v| v.abs().powf(pf)).sum::<f64>();
    consider(&x, val0, &mut best_f64, &mut best);
    let steps = 1u64 << (n - 1);
    for k in 1..steps {
        let j = 1 + k.trailing_zeros() as usize;
        let s = -2.0 * f64::from(x[j]);
        for (yi, cj) in yf.iter_mut().zip(&colsf[j]) {
            *yi += s * cj;
        }
        x[j] = -x[j];
        let val = yf.iter().map(|v| v.abs().powf(pf)).sum::<f64>();
        consider(&x, val, &mut best_f64, &mut best);
    }

    let (sum, wit) = best.expect("at least one candidate evaluated");
    let sum = match sum {
        BestSum::Exact(r) => Float::with_val(w, &r),
        BestSum::Hp(f) => f,
    };
    Ok((sum, wit))
}

fn signs_to_floats(x: &[i8]) -> Vec<Float> {
    x.iter()
        .map(|&s| Float::with_val(DEFAULT_SEARCH_BITS, s))
        .collect()
}

/// Root (Σ)^{1/p} of a nonnegative power sum.
fn power_sum_root(sum: &Float, p: &PExponent, bits: u32) -> Float {
    if sum.is_zero() {
        return Float::with_val(bits, 0);
    }
    if p.is_one() {
        return Float::with_val(bits, sum);
    }
    let inv_p = Rational::from((p.denominator(), p.numerator()));
    pow_rational(sum, &inv_p, bits)
}

/// The mixed (∞,p) norm max_{‖x‖_∞ ≤ 1} ‖Mx‖_p, exact up to pow rounding:
/// the maximum of a convex function over the cube is attained at a vertex,
/// so enumerating {−1,+1}^n is exhaustive. `certified` is set; the witness
/// is the lexicographically smallest maximizer with x_1 = +1.
pub fn infinity_p_norm_exact(m: &DenseMatrix, p: &PExponent, bits: u32) -> Result<NormEstimate> {
    infinity_p_norm_exact_with_limit(m, p, bits, DEFAULT_ENUM_LIMIT)
}

pub fn infinity_p_norm_exact_with_limit(
    m: &DenseMatrix,
    p: &PExponent,
    bits: u32,
    limit: usize,
) -> Result<NormEstimate> {
    let (sum, wit) = best_sign_power_sum(m, p, bits, limit)?;
    Ok(NormEstimate {
        value: power_sum_root(&sum, p, bits),
        witness: signs_to_floats(&wit),
        method: NormMethod::Enumeration,
        certified: true,
    })
}

/// max ‖Mx‖_p / ‖x‖_p over sign vectors: a certified lower bound on
/// ‖M‖_p (not certified as the norm itself for general M, hence
/// `certified = false`). Since ‖x‖_p = n^{1/p} is constant on the sign
/// set, this maximizes the same power sum as the (∞,p) enumeration.
pub fn p_norm_sign_search(m: &DenseMatrix, p: &PExponent, bits: u32) -> Result<NormEstimate> {
    p_norm_sign_search_with_limit(m, p, bits, DEFAULT_ENUM_LIMIT)
}

pub fn p_norm_sign_search_with_limit(
    m: &DenseMatrix,
    p: &PExponent,
    bits: u32,
    limit: usize,
) -> Result<NormEstimate> {
    let (sum, wit) = best_sign_power_sum(m, p, bits, limit)?;
    let w = bits + 16;
    let ratio_pow = sum / Float::with_val(w, m.cols() as u64);
    Ok(NormEstimate {
        value: power_sum_root(&ratio_pow, p, bits),
        witness: signs_to_floats(&wit),
        method: NormMethod::SignSearch,
        certified: false,
    })
}

struct AscentRun {
    obj: f64,
    x: Vec<f64>,
    converged: bool,
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// One run of the nonlinear power iteration from a given start.
fn ascent_run(
    rowsf: &[Vec<f64>],
    n: usize,
    pf: f64,
    mut x: Vec<f64>,
    max_iters: usize,
    tol: f64,
) -> AscentRun {
    let rows = rowsf.len();
    let xnorm = vector_p_norm_f64(&x, pf);
    if xnorm == 0.0 || !xnorm.is_finite() {
        return AscentRun {
            obj: 0.0,
            x: unit_coordinate(n, 0),
            converged: true,
        };
    }
    for xi in &mut x {
        *xi /= xnorm;
    }
    let qexp = 1.0 / (pf - 1.0);
    let mut prev = -1.0f64;
    let mut stall = 0u32;
    let mut converged = false;
    let mut y = vec![0.0f64; rows];
    for _ in 0..max_iters {
        for (yi, row) in y.iter_mut().zip(rowsf) {
            *yi = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        let obj = vector_p_norm_f64(&y, pf);
        if prev >= 0.0 {
            assert!(
                obj >= prev * (1.0 - 1e-12),
                "ascent objective decreased: {prev} -> {obj}"
            );
            if obj - prev <= tol * prev.abs() {
                stall += 1;
                if stall >= 3 {
                    prev = obj;
                    converged = true;
                    break;
                }
            } else {
                stall = 0;
            }
        }
        prev = obj;
        if obj == 0.0 {
            converged = true;
            break;
        }
        // z = sign(y)|y|^{p-1}; w = Mᵀz; x ← sign(w)|w|^{p′-1}, renormalized
        let mut wv = vec![0.0f64; n];
        for (yi, row) in y.iter().zip(rowsf) {
            let z = yi.signum() * yi.abs().powf(pf - 1.0);
            for (wj, a) in wv.iter_mut().zip(row) {
                *wj += a * z;
            }
        }
        let wnorm: f64 = wv.iter().map(|v| v.abs()).sum();
        if wnorm == 0.0 {
            converged = true;
            break;
        }
        for (xi, wi) in x.iter_mut().zip(&wv) {
            *xi = wi.signum() * wi.abs().powf(qexp);
        }
        let xnorm = vector_p_norm_f64(&x, pf);
        for xi in &mut x {
            *xi /= xnorm;
        }
    }
    AscentRun {
        obj: prev.max(0.0),
        x,
        converged,
    }
}

fn unit_coordinate(n: usize, j: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[j] = 1.0;
    e
}

fn ascent_starts(n: usize, cfg: &AscentConfig) -> Vec<Vec<f64>> {
    let mut starts = Vec::new();
    for k in 0..cfg.restarts {
        let mut rng =
            ChaCha8Rng::seed_from_u64(cfg.seed ^ (k as u64 + 1).wrapping_mul(0x9E3779B97F4A7C15));
        // coordinates drawn in index order so that trailing zero-padding
        // columns only append draws instead of reshuffling them
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        starts.push(x);
    }
    if n <= 12 {
        for mask in 0u32..(1 << n) {
            starts.push(
                (0..n)
                    .map(|j| if mask >> j & 1 == 1 { -1.0 } else { 1.0 })
                    .collect(),
            );
        }
    }
    for j in 0..n {
        starts.push(unit_coordinate(n, j));
    }
    starts
}

/// Heuristic ‖M‖_p by multistart nonlinear power iteration (p > 1). The
/// objective is nondecreasing within each run; the returned estimate is
/// the best run under (value, lexicographic witness) order, so the result
/// is deterministic for a given seed regardless of thread count.
pub fn p_norm_ascent(m: &DenseMatrix, p: &PExponent, cfg: &AscentConfig) -> Result<NormEstimate> {
    if p.is_one() {
        return Err(Error::InvalidParameter(
            "ascent requires p > 1; use l1_norm for p = 1".into(),
        ));
    }
    if cfg.restarts == 0 || cfg.tol <= 0.0 {
        return Err(Error::InvalidParameter(
            "ascent config needs restarts >= 1 and tol > 0".into(),
        ));
    }
    let (rows, n) = m.shape();
    if n == 0 || rows == 0 {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    let rowsf: Vec<Vec<f64>> = m.to_f64();
    if rowsf.iter().flatten().all(|&v| v == 0.0) {
        return Ok(NormEstimate {
            value: Float::with_val(DEFAULT_SEARCH_BITS, 0),
            witness: unit_coordinate(n, 0)
                .iter()
                .map(|&v| Float::with_val(DEFAULT_SEARCH_BITS, v))
                .collect(),
            method: NormMethod::Ascent { converged: true },
            certified: false,
        });
    }
    let pf = p.value();
    let starts = ascent_starts(n, cfg);
    let runs: Vec<AscentRun> = starts
        .into_par_iter()
        .map(|x0| ascent_run(&rowsf, n, pf, x0, cfg.max_iters, cfg.tol))
        .collect();
    let best = runs
        .into_iter()
        .reduce(|a, b| {
            if b.obj > a.obj || (b.obj == a.obj && lex_less(&b.x, &a.x)) {
                b
            } else {
                a
            }
        })
        .expect("at least one start");
    Ok(NormEstimate {
        value: Float::with_val(DEFAULT_SEARCH_BITS, best.obj),
        witness: best
            .x
            .iter()
            .map(|&v| Float::with_val(DEFAULT_SEARCH_BITS, v))
            .collect(),
        method: NormMethod::Ascent {
            converged: best.converged,
        },
        certified: false,
    })
}

/// ‖Mx‖_q / ‖x‖_p at `bits` precision.
pub fn rayleigh(
    m: &DenseMatrix,
    x: &[Float],
    p: &PExponent,
    q: &PExponent,
    bits: u32,
) -> Result<Float> {
    if x.iter().all(Float::is_zero) {
        return Err(Error::ZeroVector);
    }
    let w = bits + 16;
    let y = m.mul_hp(x, w)?;
    let num = vector_p_norm_hp(&y, q, w);
    let den = vector_p_norm_hp(x, p, w);
    Ok(Float::with_val(bits, num / den))
}

/// (ascent on M at p, ascent on Mᵀ at the conjugate p′); the two values
/// estimate the same norm since ‖M‖_p = ‖Mᵀ‖_{p′}.
pub fn dual_norm_pair(
    m: &DenseMatrix,
    p: &PExponent,
    cfg: &AscentConfig,
) -> Result<(NormEstimate, NormEstimate)> {
    let primal = p_norm_ascent(m, p, cfg)?;
    let dual = p_norm_ascent(&m.transpose(), &p.conjugate()?, cfg)?;
    Ok((primal, dual))
}

/// ‖M‖₁ = max column absolute sum, exact; witness is the maximizing
/// coordinate vector.
pub fn l1_norm(m: &DenseMatrix) -> NormEstimate {
    let (rows, n) = m.shape();
    let mut best = Rational::from(-1);
    let mut best_j = 0;
    for j in 0..n {
        let mut s = Rational::new();
        for i in 0..rows {
            s += Rational::from(m.get(i, j).abs_ref());
        }
        if s > best {
            best = s;
            best_j = j;
        }
    }
    NormEstimate {
        value: Float::with_val(64, &best),
        witness: (0..n)
            .map(|j| Float::with_val(DEFAULT_SEARCH_BITS, i32::from(j == best_j)))
            .collect(),
        method: NormMethod::Direct,
        certified: true,
    }
}

/// ‖M‖_∞ = max row absolute sum, exact; witness is the sign pattern of
/// the maximizing row.
pub fn linf_norm(m: &DenseMatrix) -> NormEstimate {
    let (rows, n) = m.shape();
    let mut best = Rational::from(-1);
    let mut best_i = 0;
    for i in 0..rows {
        let mut s = Rational::new();
        for j in 0..n {
            s += Rational::from(m.get(i, j).abs_ref());
        }
        if s > best {
            best = s;
            best_i = i;
        }
    }
    NormEstimate {
        value: Float::with_val(64, &best),
        witness: (0..n)
            .map(|j| {
                let v = if *m.get(best_i, j) < 0 { -1 } else { 1 };
                Float::with_val(DEFAULT_SEARCH_BITS, v)
            })
            .collect(),
        method: NormMethod::Direct,
        certified: true,
    }
}

/// Outcome of [`mixed_pq_sign_maximizer_check`].
#[derive(Clone, Debug)]
pub struct MixedCheckReport {
    /// Best sampled ratio ‖Mx‖_q/‖x‖_p over random x.
    pub best_sampled: f64,
    /// Best ratio over sign vectors.
    pub best_sign: f64,
    /// best_sampled − best_sign; expected ≤ 0 up to tolerance when sign
    /// vectors are the true maximizers.
    pub gap: f64,
    pub samples: usize,
}

/// Samples the ratio ‖Mx‖_q/‖x‖_p (q < p) and compares against the best
/// sign vector, checking numerically that signs maximize it.
pub fn mixed_pq_sign_maximizer_check(
    m: &DenseMatrix,
    p: &PExponent,
    q: &PExponent,
    samples: usize,
    seed: u64,
) -> Result<MixedCheckReport> {
    if q.as_rational() >= p.as_rational() {
        return Err(Error::InvalidParameter(format!(
            "mixed check needs q < p, got q = {q}, p = {p}"
        )));
    }
    let (_rows, n) = m.shape();
    if n > DEFAULT_ENUM_LIMIT {
        return Err(Error::EnumerationLimit {
            n,
            limit: DEFAULT_ENUM_LIMIT,
        });
    }
    let rowsf = m.to_f64();
    let pf = p.value();
    let qf = q.value();
    let ratio = |x: &[f64]| -> f64 {
        let y: Vec<f64> = rowsf
            .iter()
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect();
        vector_p_norm_f64(&y, qf) / vector_p_norm_f64(x, pf)
    };

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best_sampled = f64::NEG_INFINITY;
    for _ in 0..samples {
        let x: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        if x.iter().all(|&v| v == 0.0) {
            continue;
        }
        best_sampled = best_sampled.max(ratio(&x));
    }

    let mut best_sign = f64::NEG_INFINITY;
    for mask in 0u64..(1 << (n - 1)) {
        let x: Vec<f64> = (0..n)
            .map(|j| {
                if j > 0 && mask >> (j - 1) & 1 == 1 {
                    -1.0
                } else {
                    1.0
                }
            })
            .collect();
        best_sign = best_sign.max(ratio(&x));
    }

    Ok(MixedCheckReport {
        best_sampled,
        best_sign,
        gap: best_sampled - best_sign,
        samples,
    })
}
