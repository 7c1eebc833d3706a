//! Reduction matrices, ε schedules, decode, and the end-to-end pipeline.
//!
//! The constructions stack a weighted gadget block over the incidence
//! matrix: Z̃ = [A; w·M], Z = [α·A; M], Z* = [⌈α⌉·A; M], and Z** with the
//! gadget repeated k times at weight 1 (entries stay in {−1,0,1}).
//! On sign vectors ‖Zx‖_p^p = α^p·n·2^p + 2^p·cut(x), so the cut comes
//! back via maxcut ≈ (n/2^p)·f^p − n·α^p, a subtraction of two nearly
//! equal huge numbers; every decode runs at a precision floor derived
//! from α and n and refuses to run below it.

use std::time::Instant;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::gadget::gadget_matrix;
use crate::graph::{cut_value, incidence_matrix, CutResult, Graph, SignVector};
use crate::matrix::DenseMatrix;
use crate::norms::{
    p_norm_ascent, p_norm_sign_search_with_limit, p_power_sum_hp, rayleigh, vector_p_norm_hp,
    AscentConfig,
};
use crate::scalar::{decode_precision_bits, pow_rational, PExponent};
use crate::DEFAULT_ENUM_LIMIT;

/// Cap on materialized block-stack rows.
pub const DEFAULT_ROW_LIMIT: usize = 65_536;

/// Which construction produced a [`ReductionInstance`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Ztilde,
    Z,
    Zstar,
    Zdoublestar,
    Padded,
}

impl std::fmt::Display for Provenance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Provenance::Ztilde => "ztilde",
            Provenance::Z => "z",
            Provenance::Zstar => "zstar",
            Provenance::Zdoublestar => "zdoublestar",
            Provenance::Padded => "padded",
        };
        f.write_str(s)
    }
}

/// One block of a virtual stack: `matrix` repeated `reps` times, each copy
/// scaled by `weight`.
#[derive(Clone, Debug)]
pub struct Block {
    pub matrix: DenseMatrix,
    pub reps: Integer,
    pub weight: Rational,
}

/// A stack of repeated blocks, kept virtual because the default repetition
/// count ⌈α^p⌉ is astronomically large. ‖stack‖_p equals the norm of the
/// dense stack with each block scaled by reps^{1/p}·weight.
#[derive(Clone, Debug)]
pub struct BlockSpec {
    pub blocks: Vec<Block>,
}

impl BlockSpec {
    pub fn cols(&self) -> usize {
        self.blocks.first().map_or(0, |b| b.matrix.cols())
    }

    pub fn total_rows(&self) -> Integer {
        let mut total = Integer::new();
        for b in &self.blocks {
            total += Integer::from(&b.reps * b.matrix.rows() as u64);
        }
        total
    }

    /// Concatenates the repeated, weighted blocks into a dense matrix.
    pub fn materialize(&self, row_limit: usize) -> Result<DenseMatrix> {
        let total = self.total_rows();
        if total > row_limit as u64 {
            return Err(Error::RowLimit {
                rows: total.to_string(),
                limit: row_limit,
            });
        }
        let mut out: Option<DenseMatrix> = None;
        for b in &self.blocks {
            let scaled = if b.weight == 1 {
                b.matrix.clone()
            } else {
                b.matrix.scale(&b.weight)
            };
            for _ in 0..b.reps.to_usize().expect("bounded by row_limit") {
                out = Some(match out {
                    Some(acc) => acc.vstack(&scaled)?,
                    None => scaled.clone(),
                });
            }
        }
        out.ok_or_else(|| Error::InvalidParameter("empty block spec".into()))
    }

    /// Σ_blocks reps·weight^p·Σ|Bx|^p for a sign vector, without
    /// materializing; works for astronomically large reps.
    pub fn sign_power_sum(&self, x: &[i8], p: &PExponent, bits: u32) -> Result<Float> {
        let w = bits + 16;
        let mut acc = Float::with_val(w, 0);
        for b in &self.blocks {
            let y = b.matrix.mul_sign(x)?;
            let base = crate::norms::p_power_sum_rational(&y, p, w);
            let wt = Float::with_val(w, &b.weight).abs();
            let wt_p = if b.weight == 1 {
                Float::with_val(w, 1)
            } else {
                pow_rational(&wt, &p.as_rational(), w)
            };
            acc += Float::with_val(w, &b.reps) * wt_p * base;
        }
        Ok(Float::with_val(bits, acc))
    }
}

/// Dense or virtual matrix backing a reduction instance.
#[derive(Clone, Debug)]
pub enum MatrixRepr {
    Dense(DenseMatrix),
    Blocks(BlockSpec),
}

/// A graph encoded as a matrix norm problem.
#[derive(Clone, Debug)]
pub struct ReductionInstance {
    pub graph: Graph,
    pub p: PExponent,
    /// Exact gadget weight (1 for Z̃ and the unit-weight Z** blocks).
    pub alpha: Rational,
    pub matrix: MatrixRepr,
    /// Precision floor for decoding this instance.
    pub bits: u32,
    pub provenance: Provenance,
}

impl ReductionInstance {
    pub fn dense(&self) -> Result<&DenseMatrix> {
        match &self.matrix {
            MatrixRepr::Dense(m) => Ok(m),
            MatrixRepr::Blocks(spec) => Err(Error::RowLimit {
                rows: spec.total_rows().to_string(),
                limit: 0,
            }),
        }
    }
}

fn require_p_above_2(p: &PExponent) -> Result<()> {
    if p.numerator() <= 2 * p.denominator() {
        return Err(Error::InvalidParameter(format!(
            "p must exceed 2 for this construction (got {p})"
        )));
    }
    Ok(())
}

/// The default gadget weight 64pn⁸/(p−2), exact.
pub fn default_alpha(n: usize, p: &PExponent) -> Result<Rational> {
    require_p_above_2(p)?;
    let a = p.numerator();
    let b = p.denominator();
    let num = Integer::from(64u32) * a * Integer::from(n as u64).pow(8);
    Ok(Rational::from((num, Integer::from(a - 2 * b))))
}

fn alpha_to_float(alpha: &Rational) -> Float {
    Float::with_val(128, alpha)
}

/// Z̃ = [A; ((p−2)/(64pn⁸))·M(G)], the localization construction.
pub fn build_ztilde(g: &Graph, p: &PExponent) -> Result<ReductionInstance> {
    require_p_above_2(p)?;
    let n = g.n();
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "ztilde requires n >= 3, got n = {n}"
        )));
    }
    let a = p.numerator();
    let b = p.denominator();
    // (p−2)/(64pn⁸) = (a−2b)/(64a·n⁸)
    let den = Integer::from(64u32) * a * Integer::from(n as u64).pow(8);
    let weight = Rational::from((Integer::from(a - 2 * b), den));
    let matrix = gadget_matrix(n)?.vstack(&incidence_matrix(g).scale(&weight))?;
    let one = Rational::from(1);
    let bits = decode_precision_bits(n, p, &alpha_to_float(&one));
    Ok(ReductionInstance {
        graph: g.clone(),
        p: p.clone(),
        alpha: one,
        matrix: MatrixRepr::Dense(matrix),
        bits,
        provenance: Provenance::Ztilde,
    })
}

/// Z = [α·A; M(G)] with α defaulting to 64pn⁸/(p−2).
pub fn build_z(g: &Graph, p: &PExponent, alpha: Option<Rational>) -> Result<ReductionInstance> {
    require_p_above_2(p)?;
    let n = g.n();
    let alpha = match alpha {
        Some(a) => a,
        None => default_alpha(n, p)?,
    };
    if alpha < 1 {
        return Err(Error::InvalidParameter(format!(
            "gadget weight must satisfy alpha >= 1, got {alpha}"
        )));
    }
    build_weighted(g, p, alpha, Provenance::Z)
}

fn build_weighted(
    g: &Graph,
    p: &PExponent,
    alpha: Rational,
    provenance: Provenance,
) -> Result<ReductionInstance> {
    let n = g.n();
    let gadget = gadget_matrix(n)?;
    let top = if alpha == 1 {
        gadget
    } else {
        gadget.scale(&alpha)
    };
    let matrix = top.vstack(&incidence_matrix(g))?;
    let bits = decode_precision_bits(n, p, &alpha_to_float(&alpha));
    Ok(ReductionInstance {
        graph: g.clone(),
        p: p.clone(),
        alpha,
        matrix: MatrixRepr::Dense(matrix),
        bits,
        provenance,
    })
}

/// Z* = [⌈α⌉·A; M(G)] with the default α rounded up to an integer.
pub fn build_zstar(g: &Graph, p: &PExponent) -> Result<ReductionInstance> {
    require_p_above_2(p)?;
    let alpha = default_alpha(g.n(), p)?;
    let ceil = Integer::from(alpha.ceil_ref());
    build_weighted(g, p, Rational::from(ceil), Provenance::Zstar)
}

/// Smallest integer r with r ≥ base^p, via exact integer arithmetic:
/// r is minimal with r^b·D^a ≥ N^a for base = N/D and p = a/b.
pub fn rational_pow_ceil(base: &Rational, p: &PExponent) -> Result<Integer> {
    if *base <= 0 {
        return Err(Error::InvalidParameter(
            "rational_pow_ceil requires a positive base".into(),
        ));
    }
    let a = p.numerator() as u32;
    let b = p.denominator() as u32;
    let na = Integer::from(base.numer()).pow(a);
    let da = Integer::from(base.denom()).pow(a);
    // start from the floor b-th root of ceil(N^a/D^a) and adjust
    let q = Integer::from(&na + &da) - 1u32;
    let q = q / &da;
    let mut r = q.root(b);
    if r == 0 {
        r = Integer::from(1);
    }
    while Integer::from(r.clone().pow(b) * &da) < na {
        r += 1;
    }
    while r > 1 {
        let prev = Integer::from(&r - 1u32);
        if Integer::from(prev.clone().pow(b) * &da) >= na {
            r = prev;
        } else {
            break;
        }
    }
    Ok(r)
}

/// Z** as a virtual stack: the unscaled gadget repeated k times over M(G),
/// k defaulting to ⌈α^p⌉ for the default α. All entries stay in {−1,0,1};
/// the effective gadget weight is k^{1/p}.
pub fn build_zdoublestar(
    g: &Graph,
    p: &PExponent,
    k: Option<Integer>,
) -> Result<ReductionInstance> {
    require_p_above_2(p)?;
    let n = g.n();
    let k = match k {
        Some(k) => {
            if k < 1 {
                return Err(Error::InvalidParameter(format!(
                    "repetition count must be >= 1, got {k}"
                )));
            }
            k
        }
        None => rational_pow_ceil(&default_alpha(n, p)?, p)?,
    };
    let spec = BlockSpec {
        blocks: vec![
            Block {
                matrix: gadget_matrix(n)?,
                reps: k.clone(),
                weight: Rational::from(1),
            },
            Block {
                matrix: incidence_matrix(g),
                reps: Integer::from(1),
                weight: Rational::from(1),
            },
        ],
    };
    // effective weight k^{1/p} sets the decode precision floor
    let inv_p = Rational::from((p.denominator(), p.numerator()));
    let alpha_eff = pow_rational(&Float::with_val(128, &k), &inv_p, 128);
    let bits = decode_precision_bits(n, p, &alpha_eff);
    Ok(ReductionInstance {
        graph: g.clone(),
        p: p.clone(),
        alpha: Rational::from(1),
        matrix: MatrixRepr::Blocks(spec),
        bits,
        provenance: Provenance::Zdoublestar,
    })
}

/// Zero-pads to a square matrix; every norm is unchanged (zero columns
/// are never chosen by a maximizer, zero rows contribute nothing).
pub fn pad_square(m: &DenseMatrix) -> DenseMatrix {
    m.pad_square()
}

/// The relative-accuracy demand of the p-norm hardness schedule:
/// ε = (132^p·(p/(p−2))^p·n^{8p+3}·p)⁻¹ · (132·(p/(p−2))·n⁸)⁻¹.
pub fn required_epsilon_pnorm(n: usize, p: &PExponent, bits: u32) -> Result<Float> {
    require_p_above_2(p)?;
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "epsilon schedule requires n >= 3, got {n}"
        )));
    }
    let w = bits + 32;
    let pr = p.as_rational();
    let pf = Float::with_val(w, &pr);
    let ratio = Float::with_val(w, &pr / Rational::from(&pr - 2u32));
    let nf = Float::with_val(w, n as u64);
    // n^{8p+3}
    let exp1 = Rational::from(8u32 * &pr) + 3u32;
    let first = pow_rational(&Float::with_val(w, 132), &pr, w)
        * pow_rational(&ratio, &pr, w)
        * pow_rational(&nf, &exp1, w)
        * &pf;
    let second = Float::with_val(w, 132) * &ratio * pow_rational(&nf, &Rational::from(8), w);
    let inv = Float::with_val(w, 1) / (first * second);
    Ok(Float::with_val(bits, inv))
}

/// The fixed relative error ((33+δ)·p·2^{p−1})⁻¹ below which the mixed
/// (∞,p) approximation is hard.
pub fn required_epsilon_inftyp(p: &PExponent, delta: &Rational, bits: u32) -> Result<Float> {
    if *delta <= 0 {
        return Err(Error::InvalidParameter(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let w = bits + 32;
    let pr = p.as_rational();
    let lead = Float::with_val(w, Rational::from(delta + 33u32)) * Float::with_val(w, &pr);
    let pm1 = Rational::from(&pr - 1u32);
    let two_pm1 = pow_rational(&Float::with_val(w, 2), &pm1, w);
    let inv = Float::with_val(w, 1) / (lead * two_pm1);
    Ok(Float::with_val(bits, inv))
}

/// The Prop.-8-style sufficiency threshold on |f_approx − f*|/f*:
/// (p−2)^p / (132^p·p^p·n^{8p+3}·p).
pub fn fapprox_threshold(n: usize, p: &PExponent, bits: u32) -> Result<Float> {
    require_p_above_2(p)?;
    let w = bits + 32;
    let pr = p.as_rational();
    let ratio = Float::with_val(w, Rational::from(&pr - 2u32) / &pr);
    let nf = Float::with_val(w, n as u64);
    let exp1 = Rational::from(8u32 * &pr) + 3u32;
    let denom = pow_rational(&Float::with_val(w, 132), &pr, w)
        * pow_rational(&nf, &exp1, w)
        * Float::with_val(w, &pr);
    let num = pow_rational(&ratio, &pr, w);
    Ok(Float::with_val(bits, num / denom))
}

/// Cut decoded from a norm value.
#[derive(Clone, Debug)]
pub struct DecodeResult {
    pub maxcut_estimate: Float,
    pub maxcut_rounded: i64,
    /// Additive error implied by a declared relative error on f; zero when
    /// no error was declared.
    pub additive_error_bound: Float,
    pub witness_cut: Option<CutResult>,
}

/// maxcut ≈ (n/2^p)·f^p − n·α^p at `bits` precision. Refuses to run below
/// the precision floor: the two terms agree in their leading ~p·log2(α·2n)
/// bits and a short float would cancel to garbage.
pub fn decode_maxcut(
    f: &Float,
    n: usize,
    p: &PExponent,
    alpha: &Float,
    bits: u32,
    declared_rel_error: Option<&Float>,
) -> Result<DecodeResult> {
    if !(f.is_sign_positive() && !f.is_zero()) {
        return Err(Error::InvalidParameter("decode requires f > 0".into()));
    }
    let needed = decode_precision_bits(n, p, alpha);
    let got = bits.min(f.prec());
    if got < needed {
        return Err(Error::InsufficientPrecision { got, needed });
    }
    let w = bits + 16;
    let pr = p.as_rational();
    let f_p = pow_rational(&Float::with_val(w, f), &pr, w);
    let two_p = pow_rational(&Float::with_val(w, 2), &pr, w);
    let alpha_p = pow_rational(&Float::with_val(w, alpha), &pr, w);
    let nf = Float::with_val(w, n as u64);
    let term_f = Float::with_val(w, &nf * &f_p) / &two_p;
    let term_alpha = Float::with_val(w, &nf * &alpha_p);
    let estimate = Float::with_val(bits, term_f - term_alpha);
    let rounded = estimate.to_f64().round() as i64;
    let bound = match declared_rel_error {
        Some(eps) => {
            // worst-case swing of (n/2^p)·f^p under f → f(1+ε)
            let one_eps = Float::with_val(w, 1) + Float::with_val(w, eps);
            let grow = pow_rational(&one_eps, &pr, w) - 1u32;
            Float::with_val(bits, nf * f_p / two_p * grow)
        }
        None => Float::with_val(bits, 0),
    };
    Ok(DecodeResult {
        maxcut_estimate: estimate,
        maxcut_rounded: rounded,
        additive_error_bound: bound,
        witness_cut: None,
    })
}

/// maxcut estimate (f/2)^p from an exact mixed (∞,p) norm value; a
/// declared relative error ε on f propagates to the additive bound
/// 2^{p−1}·p·ε·(f/2)^p / (1 − 2^{p−1}·p·ε).
pub fn decode_maxcut_from_inftyp(
    f: &Float,
    p: &PExponent,
    bits: u32,
    declared_rel_error: Option<&Float>,
) -> Result<DecodeResult> {
    if f.is_sign_negative() && !f.is_zero() {
        return Err(Error::InvalidParameter("decode requires f >= 0".into()));
    }
    let w = bits + 16;
    let pr = p.as_rational();
    let estimate = if f.is_zero() {
        Float::with_val(bits, 0)
    } else {
        let half = Float::with_val(w, f) / 2u32;
        Float::with_val(bits, pow_rational(&half, &pr, w))
    };
    let rounded = estimate.to_f64().round() as i64;
    let bound = match declared_rel_error {
        Some(eps) => {
            let pm1 = Rational::from(&pr - 1u32);
            let coef = pow_rational(&Float::with_val(w, 2), &pm1, w)
                * Float::with_val(w, &pr)
                * Float::with_val(w, eps);
            let denom = Float::with_val(w, 1) - &coef;
            if denom <= 0 {
                Float::with_val(bits, rug::float::Special::Infinity)
            } else {
                Float::with_val(bits, coef * &estimate / denom)
            }
        }
        None => Float::with_val(bits, 0),
    };
    Ok(DecodeResult {
        maxcut_estimate: estimate,
        maxcut_rounded: rounded,
        additive_error_bound: bound,
        witness_cut: None,
    })
}

/// Componentwise rounding to {−1,+1}; zeros map to +1.
pub fn round_to_signs(x: &[Float]) -> SignVector {
    SignVector::new(
        x.iter()
            .map(|v| if v.is_sign_negative() && !v.is_zero() { -1 } else { 1 })
            .collect(),
    )
    .expect("entries are ±1 by construction")
}

/// max_i ||x_i| − 1|, the ∞-distance from x to the nearest sign vector.
pub fn linf_distance_to_signs(x: &[Float]) -> Float {
    let mut best = Float::with_val(64, 0);
    for v in x {
        let d = Float::with_val(64, v.abs_ref()) - 1u32;
        let d = d.abs();
        if d > best {
            best = d;
        }
    }
    best
}

/// Σ|Mx|^p at `bits` precision.
pub fn matrix_power_sum(m: &DenseMatrix, x: &[Float], p: &PExponent, bits: u32) -> Result<Float> {
    let w = bits + 16;
    let y = m.mul_hp(x, w)?;
    Ok(p_power_sum_hp(&y, p, bits))
}

/// Monotone high-precision polish of a norm witness: runs the nonlinear
/// power iteration in `bits`-precision arithmetic from x0, keeping
/// ‖x‖_p = n^{1/p}, and stops as soon as the objective Σ|Mx|^p fails to
/// increase. The result never scores below the (rescaled) start.
pub fn hp_polish_witness(
    m: &DenseMatrix,
    x0: &[Float],
    p: &PExponent,
    bits: u32,
    max_iters: usize,
) -> Result<Vec<Float>> {
    let n = m.cols();
    if x0.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "polish: {} columns vs start of length {}",
            n,
            x0.len()
        )));
    }
    if x0.iter().all(Float::is_zero) {
        return Err(Error::ZeroVector);
    }
    let w = bits + 16;
    let pr = p.as_rational();
    let pm1 = Rational::from(&pr - 1u32);
    let inv_pm1 = Rational::from(pm1.clone().recip());
    let radius = pow_rational(
        &Float::with_val(w, n as u64),
        &Rational::from((p.denominator(), p.numerator())),
        w,
    );
    let mt = m.transpose();

    let rescale = |x: &[Float]| -> Vec<Float> {
        let nrm = vector_p_norm_hp(x, p, w);
        x.iter()
            .map(|v| Float::with_val(w, v * &radius) / &nrm)
            .collect()
    };
    let mut x = rescale(x0);
    let mut obj = matrix_power_sum(m, &x, p, w)?;
    for _ in 0..max_iters {
        let y = m.mul_hp(&x, w)?;
        let z: Vec<Float> = y
            .iter()
            .map(|yi| {
                if yi.is_zero() {
                    Float::with_val(w, 0)
                } else {
                    let mag = pow_rational(&Float::with_val(w, yi.abs_ref()), &pm1, w);
                    if yi.is_sign_negative() {
                        -mag
                    } else {
                        mag
                    }
                }
            })
            .collect();
        let wv = mt.mul_hp(&z, w)?;
        if wv.iter().all(Float::is_zero) {
            break;
        }
        let xn: Vec<Float> = wv
            .iter()
            .map(|wi| {
                if wi.is_zero() {
                    Float::with_val(w, 0)
                } else {
                    let mag = pow_rational(&Float::with_val(w, wi.abs_ref()), &inv_pm1, w);
                    if wi.is_sign_negative() {
                        -mag
                    } else {
                        mag
                    }
                }
            })
            .collect();
        let xn = rescale(&xn);
        let new_obj = matrix_power_sum(m, &xn, p, w)?;
        if new_obj <= obj {
            break;
        }
        x = xn;
        obj = new_obj;
    }
    Ok(x)
}

/// Timing breakdown of one pipeline run, in milliseconds.
#[derive(Clone, Copy, Debug, Default)]
pub struct PipelineTimings {
    pub build_ms: f64,
    pub solve_ms: f64,
    pub decode_ms: f64,
}

/// Everything one end-to-end run produces.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub n: usize,
    pub p: PExponent,
    pub alpha: Rational,
    pub bits: u32,
    /// Best norm estimate ‖Z‖_p found (ratio form, high precision).
    pub f: Float,
    pub decode: DecodeResult,
    /// Which engine produced f ("sign-search" or "ascent").
    pub method: String,
    pub timings: PipelineTimings,
}

/// Full pipeline: build Z, find f = max(sign search, high-precision
/// re-evaluation of the ascent witness), decode, and round the winning
/// witness to a cut. The witness cut is checked against the decoded value
/// (a witness can never exceed the max cut).
pub fn solve_maxcut_via_pnorm(
    g: &Graph,
    p: &PExponent,
    alpha: Option<Rational>,
    cfg: &AscentConfig,
) -> Result<PipelineResult> {
    solve_maxcut_via_pnorm_with_limit(g, p, alpha, cfg, DEFAULT_ENUM_LIMIT)
}

pub fn solve_maxcut_via_pnorm_with_limit(
    g: &Graph,
    p: &PExponent,
    alpha: Option<Rational>,
    cfg: &AscentConfig,
    limit: usize,
) -> Result<PipelineResult> {
    let t0 = Instant::now();
    let inst = build_z(g, p, alpha)?;
    let z = inst.dense()?;
    let bits = inst.bits;
    let build_ms = t0.elapsed().as_secs_f64() * 1e3;

    let t1 = Instant::now();
    let sign_est = p_norm_sign_search_with_limit(z, p, bits, limit)?;
    let ascent_est = p_norm_ascent(z, p, cfg)?;
    let ascent_f = rayleigh(z, &ascent_est.witness, p, p, bits)?;
    let (f, witness, method) = if ascent_f > sign_est.value {
        (ascent_f, ascent_est.witness, "ascent")
    } else {
        (sign_est.value.clone(), sign_est.witness, "sign-search")
    };
    let solve_ms = t1.elapsed().as_secs_f64() * 1e3;

    let t2 = Instant::now();
    let alpha_f = Float::with_val(bits.max(128), &inst.alpha);
    let mut decode = decode_maxcut(&f, g.n(), p, &alpha_f, bits, None)?;
    let x_r = round_to_signs(&witness);
    let wcut = cut_value(g, &x_r)?;
    if (wcut as i64) > decode.maxcut_rounded {
        return Err(Error::Invariant(format!(
            "witness cut {wcut} exceeds decoded maxcut {}",
            decode.maxcut_rounded
        )));
    }
    decode.witness_cut = Some(CutResult {
        value: wcut,
        witness: x_r,
    });
    let decode_ms = t2.elapsed().as_secs_f64() * 1e3;

    Ok(PipelineResult {
        n: g.n(),
        p: p.clone(),
        alpha: inst.alpha,
        bits,
        f,
        decode,
        method: method.into(),
        timings: PipelineTimings {
            build_ms,
            solve_ms,
            decode_ms,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use crate::norms::infinity_p_norm_exact;

    fn p(s: &str) -> PExponent {
        s.parse().unwrap()
    }

    fn k3() -> Graph {
        parse_graph("3 3\n1 2\n2 3\n1 3").unwrap()
    }

    #[test]
    fn ztilde_shapes_and_scale() {
        let inst = build_ztilde(&k3(), &p("3")).unwrap();
        let m = inst.dense().unwrap();
        assert_eq!(m.shape(), (9, 3));
        assert_eq!(*m.get(6, 0), Rational::from((1, 1_259_712)));
        assert_eq!(*m.get(0, 0), Rational::from(1));
        assert_eq!(inst.provenance, Provenance::Ztilde);

        let k4 = Graph::complete(4).unwrap();
        let inst = build_ztilde(&k4, &p("4")).unwrap();
        let m = inst.dense().unwrap();
        assert_eq!(*m.get(8, 0), Rational::from((1, 8_388_608)));

        let p2 = parse_graph("2 1\n1 2").unwrap();
        assert!(build_ztilde(&p2, &p("3")).is_err());
        assert!(build_ztilde(&k3(), &p("2")).is_err());
    }

    #[test]
    fn z_construction_and_default_alpha() {
        let inst = build_z(&k3(), &p("3"), Some(Rational::from(10))).unwrap();
        let m = inst.dense().unwrap();
        assert_eq!(m.shape(), (9, 3));
        for i in 0..6 {
            for j in 0..3 {
                let v = m.get(i, j).to_f64();
                assert!(v == 0.0 || v.abs() == 10.0);
            }
        }
        assert_eq!(*m.get(6, 0), Rational::from(1));

        assert_eq!(
            default_alpha(3, &p("3")).unwrap(),
            Rational::from(1_259_712)
        );
        assert_eq!(
            default_alpha(4, &p("5/2")).unwrap(),
            Rational::from(20_971_520)
        );

        assert!(build_z(&k3(), &p("2"), None).is_err());
        assert!(build_z(&k3(), &p("3"), Some(Rational::from((1, 2)))).is_err());
    }

    #[test]
    fn zstar_rounds_alpha_up() {
        // p = 11/4, n = 4: 64·11·4⁸/3 is not an integer
        let k4 = Graph::complete(4).unwrap();
        let inst = build_zstar(&k4, &p("11/4")).unwrap();
        assert_eq!(inst.alpha, Rational::from(15_379_115));
        assert_eq!(inst.provenance, Provenance::Zstar);

        // already integral stays put
        let inst = build_zstar(&k3(), &p("3")).unwrap();
        assert_eq!(inst.alpha, Rational::from(1_259_712));
    }

    #[test]
    fn rational_pow_ceil_cases() {
        let r = rational_pow_ceil(&Rational::from((3, 2)), &p("5/2")).unwrap();
        assert_eq!(r, 3); // 1.5^2.5 ≈ 2.756
        let r = rational_pow_ceil(&Rational::from(2), &p("3")).unwrap();
        assert_eq!(r, 8);
        let r = rational_pow_ceil(&Rational::from(1_259_712), &p("3")).unwrap();
        assert_eq!(r, Integer::from(1_259_712u64).pow(3));
        let r = rational_pow_ceil(&Rational::from((5, 2)), &p("2")).unwrap();
        assert_eq!(r, 7); // 6.25
    }

    #[test]
    fn zdoublestar_materialization() {
        let inst = build_zdoublestar(&k3(), &p("3"), Some(Integer::from(8))).unwrap();
        let MatrixRepr::Blocks(spec) = &inst.matrix else {
            panic!("expected block representation");
        };
        assert_eq!(spec.total_rows(), 51);
        let m = spec.materialize(DEFAULT_ROW_LIMIT).unwrap();
        assert_eq!(m.shape(), (51, 3));
        for i in 0..51 {
            for j in 0..3 {
                let v = m.get(i, j).to_f64();
                assert!(v == 0.0 || v.abs() == 1.0);
            }
        }

        // k = 1 equals [A; M]
        let inst1 = build_zdoublestar(&k3(), &p("3"), Some(Integer::from(1))).unwrap();
        let MatrixRepr::Blocks(spec1) = &inst1.matrix else {
            panic!()
        };
        let m1 = spec1.materialize(DEFAULT_ROW_LIMIT).unwrap();
        let z1 = build_z(&k3(), &p("3"), Some(Rational::from(1))).unwrap();
        assert_eq!(&m1, z1.dense().unwrap());
    }

    #[test]
    fn zdoublestar_default_is_virtual() {
        let inst = build_zdoublestar(&k3(), &p("3"), None).unwrap();
        let MatrixRepr::Blocks(spec) = &inst.matrix else {
            panic!()
        };
        let k = &spec.blocks[0].reps;
        assert_eq!(*k, Integer::from(1_259_712u64).pow(3));
        assert!(matches!(
            spec.materialize(DEFAULT_ROW_LIMIT),
            Err(Error::RowLimit { .. })
        ));
        assert!(inst.dense().is_err());
    }

    #[test]
    fn replication_weight_identity_small_k() {
        // ‖[A;A;…;A;M]x‖³ = ‖[k^{1/3}A;M]x‖³ for k = 8, k^{1/3} = 2
        let g = k3();
        let inst = build_zdoublestar(&g, &p("3"), Some(Integer::from(8))).unwrap();
        let MatrixRepr::Blocks(spec) = &inst.matrix else {
            panic!()
        };
        let stacked = spec.materialize(DEFAULT_ROW_LIMIT).unwrap();
        let weighted = gadget_matrix(3)
            .unwrap()
            .scale(&Rational::from(2))
            .vstack(&incidence_matrix(&g))
            .unwrap();
        for ps in ["3"] {
            let pe = p(ps);
            let a = infinity_p_norm_exact(&stacked, &pe, 96).unwrap();
            let b = infinity_p_norm_exact(&weighted, &pe, 96).unwrap();
            let rel = ((a.value.to_f64() - b.value.to_f64()) / b.value.to_f64()).abs();
            assert!(rel < 1e-12, "rel {rel}");
        }
    }

    #[test]
    fn blockspec_sign_power_sum_virtual_decode() {
        // default k is astronomically large; the virtual power sum still
        // decodes the cut exactly
        let g = k3();
        let inst = build_zdoublestar(&g, &p("3"), None).unwrap();
        let MatrixRepr::Blocks(spec) = &inst.matrix else {
            panic!()
        };
        let bits = inst.bits;
        let x = [1i8, 1, -1]; // cut 2
        let sum = spec.sign_power_sum(&x, &p("3"), bits).unwrap();
        // sum = k·n·2³ + 2³·cut; decode: (n/2^p)(sum/n) − n·k = cut
        let k = Float::with_val(bits, &spec.blocks[0].reps);
        let est = Float::with_val(bits, &sum / 8u32) - Float::with_val(bits, 3) * k;
        assert!((est.to_f64() - 2.0).abs() < 1e-6, "est {est}");
    }

    #[test]
    fn pad_square_examples() {
        let m = DenseMatrix::from_i64_rows(&[&[1, -1]]).unwrap();
        let padded = pad_square(&m);
        assert_eq!(padded.to_f64(), vec![vec![1.0, -1.0], vec![0.0, 0.0]]);

        let m32 = DenseMatrix::from_i64_rows(&[&[1, 2], &[3, 4], &[5, 6]]).unwrap();
        assert_eq!(pad_square(&m32).shape(), (3, 3));

        let k4 = Graph::complete(4).unwrap();
        let m = incidence_matrix(&k4);
        let a = infinity_p_norm_exact(&m, &p("3"), 96).unwrap();
        let b = infinity_p_norm_exact(&pad_square(&m), &p("3"), 96).unwrap();
        let rel = ((a.value.to_f64() - b.value.to_f64()) / b.value.to_f64()).abs();
        assert!(rel < 1e-12);
    }

    #[test]
    fn epsilon_inftyp_examples() {
        let one = Rational::from(1);
        let e = required_epsilon_inftyp(&p("1"), &one, 96).unwrap();
        assert!((e.to_f64() - 1.0 / 34.0).abs() < 1e-15);
        let e = required_epsilon_inftyp(&p("2"), &one, 96).unwrap();
        assert!((e.to_f64() - 1.0 / 136.0).abs() < 1e-15);
        let e = required_epsilon_inftyp(&p("3"), &Rational::from((1, 2)), 96).unwrap();
        assert!((e.to_f64() - 1.0 / 402.0).abs() < 1e-15);
        assert!(required_epsilon_inftyp(&p("2"), &Rational::new(), 96).is_err());
    }

    #[test]
    fn epsilon_pnorm_examples() {
        // n=3, p=3: (132³·27·3²⁷·3)⁻¹ · (132·3·3⁸)⁻¹
        let e = required_epsilon_pnorm(3, &p("3"), 128).unwrap();
        let first = Integer::from(132).pow(3) * 27 * Integer::from(3).pow(27) * 3;
        let second = Integer::from(132) * 3 * Integer::from(3).pow(8);
        let exact = Rational::from((Integer::from(1), first * second));
        let rel = ((Float::with_val(160, &exact) - &e) / Float::with_val(160, &exact))
            .abs()
            .to_f64();
        assert!(rel < 1e-30, "rel {rel}");

        let e43 = required_epsilon_pnorm(4, &p("3"), 128).unwrap();
        assert!(e43 < e);

        // n=3, p=4: ratio p/(p−2) = 2, n-exponent 8p+3 = 35
        let e34 = required_epsilon_pnorm(3, &p("4"), 128).unwrap();
        let first = Integer::from(132).pow(4) * 16 * Integer::from(3).pow(35) * 4;
        let second = Integer::from(132) * 2 * Integer::from(3).pow(8);
        let exact = Rational::from((Integer::from(1), first * second));
        let rel = ((Float::with_val(192, &exact) - &e34) / Float::with_val(192, &exact))
            .abs()
            .to_f64();
        assert!(rel < 1e-30, "rel {rel}");

        assert!(required_epsilon_pnorm(3, &p("2"), 96).is_err());
        assert!(required_epsilon_pnorm(2, &p("3"), 96).is_err());
    }

    #[test]
    fn decode_k3_hand_value() {
        let bits = decode_precision_bits(3, &p("3"), &Float::with_val(64, 10));
        assert_eq!(bits, 82);
        let f3 = Float::with_val(bits + 16, Rational::from((24_016, 3)));
        let f = pow_rational(&f3, &Rational::from((1, 3)), bits);
        let d = decode_maxcut(&f, 3, &p("3"), &Float::with_val(bits, 10), bits, None).unwrap();
        assert!((d.maxcut_estimate.to_f64() - 2.0).abs() < 1e-9);
        assert_eq!(d.maxcut_rounded, 2);
    }

    #[test]
    fn decode_c4_hand_value() {
        let bits = decode_precision_bits(4, &p("3"), &Float::with_val(64, 10));
        let f3 = Float::with_val(bits + 16, 8008);
        let f = pow_rational(&f3, &Rational::from((1, 3)), bits);
        let d = decode_maxcut(&f, 4, &p("3"), &Float::with_val(bits, 10), bits, None).unwrap();
        assert_eq!(d.maxcut_rounded, 4);
        assert!((d.maxcut_estimate.to_f64() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn decode_refuses_low_precision() {
        let f = Float::with_val(53, 20.0);
        let err = decode_maxcut(&f, 3, &p("3"), &Float::with_val(64, 10), 53, None).unwrap_err();
        assert!(matches!(
            err,
            Error::InsufficientPrecision { got: 53, needed: 82 }
        ));
        assert!(decode_maxcut(
            &Float::with_val(96, 0),
            3,
            &p("3"),
            &Float::with_val(96, 10),
            96,
            None
        )
        .is_err());
    }

    #[test]
    fn decode_inftyp_examples() {
        let f = Float::with_val(96, 2) * pow_rational(&Float::with_val(96, 2), &Rational::from((1, 3)), 96);
        let d = decode_maxcut_from_inftyp(&f, &p("3"), 96, None).unwrap();
        assert!((d.maxcut_estimate.to_f64() - 2.0).abs() < 1e-20);
        assert_eq!(d.maxcut_rounded, 2);

        let d = decode_maxcut_from_inftyp(&Float::with_val(96, 0), &p("3"), 96, None).unwrap();
        assert_eq!(d.maxcut_rounded, 0);

        let d = decode_maxcut_from_inftyp(&Float::with_val(96, 2), &p("5/2"), 96, None).unwrap();
        assert_eq!(d.maxcut_rounded, 1);
    }

    #[test]
    fn decode_inftyp_error_bound_formula() {
        let f = Float::with_val(96, 4);
        let eps = Float::with_val(96, 1e-3);
        let d = decode_maxcut_from_inftyp(&f, &p("3"), 96, Some(&eps)).unwrap();
        // coef = 2²·3·1e-3 = 0.012; bound = 0.012·8/(1−0.012)
        let expect = 0.012 * 8.0 / (1.0 - 0.012);
        assert!((d.additive_error_bound.to_f64() - expect).abs() < 1e-12);
    }

    #[test]
    fn round_to_signs_examples() {
        let x = [
            Float::with_val(53, 0.99),
            Float::with_val(53, -1.02),
            Float::with_val(53, 0.8),
        ];
        assert_eq!(round_to_signs(&x).as_slice(), &[1, -1, 1]);
        let x = [Float::with_val(53, 0), Float::with_val(53, -0.5)];
        assert_eq!(round_to_signs(&x).as_slice(), &[1, -1]);
    }

    #[test]
    fn pipeline_k3_small_alpha() {
        let cfg = AscentConfig {
            restarts: 40,
            ..AscentConfig::default()
        };
        let r = solve_maxcut_via_pnorm(&k3(), &p("3"), Some(Rational::from(10)), &cfg).unwrap();
        assert_eq!(r.decode.maxcut_rounded, 2);
        assert_eq!(r.decode.witness_cut.as_ref().unwrap().value, 2);
        // f³ is at least the sign maximum 24016/3; at this small α the
        // continuous maximizer sits measurably above the best sign vector,
        // but still far too close to perturb the rounding
        let f3 = r.f.clone() * r.f.clone() * r.f.clone();
        assert!(f3.to_f64() >= 24_016.0 / 3.0 - 1e-9, "f^3 = {f3}");
        assert!(f3.to_f64() <= 24_016.0 / 3.0 + 0.01, "f^3 = {f3}");
    }

    #[test]
    fn pipeline_c5_and_k4() {
        let cfg = AscentConfig {
            restarts: 40,
            ..AscentConfig::default()
        };
        let c5 = Graph::cycle(5).unwrap();
        let r = solve_maxcut_via_pnorm(&c5, &p("3"), Some(Rational::from(10)), &cfg).unwrap();
        assert_eq!(r.decode.maxcut_rounded, 4);

        let k4 = Graph::complete(4).unwrap();
        let r = solve_maxcut_via_pnorm(&k4, &p("5/2"), Some(Rational::from(10_000)), &cfg).unwrap();
        assert_eq!(r.decode.maxcut_rounded, 4);
        assert_eq!(r.decode.witness_cut.as_ref().unwrap().value, 4);
    }

    #[test]
    fn pipeline_default_alpha_exact() {
        let cfg = AscentConfig {
            restarts: 20,
            ..AscentConfig::default()
        };
        let r = solve_maxcut_via_pnorm(&k3(), &p("3"), None, &cfg).unwrap();
        assert_eq!(r.alpha, Rational::from(1_259_712));
        assert_eq!(r.decode.maxcut_rounded, 2);
        assert!((r.decode.maxcut_estimate.to_f64() - 2.0).abs() < 1e-6);
    }

    #[test]
    fn pipeline_f_respects_upper_bound() {
        // f ≤ 2·66pn⁸/(p−2) at the default weight (maxcut < n²)
        let cfg = AscentConfig {
            restarts: 10,
            ..AscentConfig::default()
        };
        for (g, ps) in [
            (k3(), "3"),
            (Graph::cycle(4).unwrap(), "5/2"),
            (Graph::complete(4).unwrap(), "3"),
        ] {
            let pe = p(ps);
            let n = g.n() as f64;
            let r = solve_maxcut_via_pnorm(&g, &pe, None, &cfg).unwrap();
            let pf = pe.value();
            let bound = 2.0 * 66.0 * pf * n.powi(8) / (pf - 2.0);
            assert!(r.f.to_f64() <= bound, "f = {} > bound {bound}", r.f);
        }
    }

    #[test]
    fn polish_only_improves() {
        let inst = build_z(&k3(), &p("3"), Some(Rational::from(10))).unwrap();
        let z = inst.dense().unwrap();
        let x0: Vec<Float> = [1.0, 1.0, -1.0]
            .iter()
            .map(|&v| Float::with_val(96, v))
            .collect();
        let before = matrix_power_sum(z, &x0, &p("3"), 96).unwrap();
        let polished = hp_polish_witness(z, &x0, &p("3"), 96, 50).unwrap();
        let after = matrix_power_sum(z, &polished, &p("3"), 96).unwrap();
        assert!(after >= before);
        // stays near the sign vector it started at
        let d = linf_distance_to_signs(&polished);
        assert!(d.to_f64() < 1e-2, "moved too far: {d}");
    }

    #[test]
    fn distance_to_signs() {
        let x = [
            Float::with_val(64, 0.98),
            Float::with_val(64, -1.03),
            Float::with_val(64, 1.0),
        ];
        let d = linf_distance_to_signs(&x);
        assert!((d.to_f64() - 0.03).abs() < 1e-12);
    }
}
