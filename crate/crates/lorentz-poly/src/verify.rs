//! One checker per inequality, each computing both sides exactly where
//! possible, plus the batch driver that samples from the matching class
//! generator and aggregates verdicts.

use crate::classes::{
    in_lorentz_class, monotone_on_interval, real_zeros_outside_interval, sample,
    zeros_outside_open_disk, ClassParams, ClassTag, Membership, Sample, VerdictKind,
};
use crate::lorentz::from_power;
use crate::norms::{integral_exact, lp_norm, pow_rat, sup_norm, Exponent, NormMode, NormValue};
use crate::poly::RatPoly;
use crate::scalar::{rint, Rational, Scalar};
use crate::{Error, Result};
use num_traits::{Signed, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// The checkable statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TheoremId {
    /// Nikolskii for `B_d(−1,1)`.
    Thm21,
    /// Nikolskii for `P_{n,0}`.
    Thm22,
    /// Markov for `f' ∈ B_{d−1}(−1,1)`.
    Thm23,
    /// Markov for `f'` with zeros outside the unit disk.
    Thm24,
    /// Markov `n/2` for monotone with real zeros outside `(−1,1)`.
    Thm25,
    /// Endpoint bound `(max{f(a),f(b)})^q ≤ (qd+1)/(b−a)·∫f^q`.
    Lem33,
    /// Sup bound `‖f‖_∞^q ≤ ((qd+1)/2)‖f‖_q^q`.
    Lem34,
    /// Erdős factor `(n/2)(n/(n−1))^{n−1}` for real zeros outside `(−1,1)`.
    Erdos,
    /// Bernstein's parity-dependent supremum for monotone polynomials.
    BernsteinMonotone,
}

pub const ALL_THEOREMS: [TheoremId; 9] = [
    TheoremId::Thm21,
    TheoremId::Thm22,
    TheoremId::Thm23,
    TheoremId::Thm24,
    TheoremId::Thm25,
    TheoremId::Lem33,
    TheoremId::Lem34,
    TheoremId::Erdos,
    TheoremId::BernsteinMonotone,
];

impl TheoremId {
    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Thm21 => "thm2.1",
            TheoremId::Thm22 => "thm2.2",
            TheoremId::Thm23 => "thm2.3",
            TheoremId::Thm24 => "thm2.4",
            TheoremId::Thm25 => "thm2.5",
            TheoremId::Lem33 => "lem3.3",
            TheoremId::Lem34 => "lem3.4",
            TheoremId::Erdos => "erdos",
            TheoremId::BernsteinMonotone => "bernstein-monotone",
        }
    }

    pub fn parse(s: &str) -> Option<TheoremId> {
        ALL_THEOREMS.iter().copied().find(|t| t.name() == s)
    }

    /// Whether the checker takes a `(q, p)` exponent pair.
    pub fn uses_exponents(&self) -> bool {
        matches!(
            self,
            TheoremId::Thm21 | TheoremId::Thm22 | TheoremId::Lem33 | TheoremId::Lem34
        )
    }

    pub fn class_for(&self, n: usize) -> ClassTag {
        match self {
            TheoremId::Thm21 | TheoremId::Lem33 | TheoremId::Lem34 => ClassTag::LorentzNonneg(n),
            TheoremId::Thm22 => ClassTag::ZerosOutsideDisk(n),
            TheoremId::Thm23 => ClassTag::DerivLorentz(n),
            TheoremId::Thm24 => ClassTag::DerivZerosOutsideDisk(n),
            TheoremId::Thm25 | TheoremId::Erdos => ClassTag::MonotoneRealZerosOutside(n),
            TheoremId::BernsteinMonotone => ClassTag::MonotoneOnly(n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Equality {
    /// Zero slack on the exact rational path.
    Exact,
    /// Relative slack below `10⁻¹⁰` on a numeric path.
    Near,
    Strict,
}

/// Outcome of one inequality check.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub theorem: TheoremId,
    pub lhs: NormValue,
    pub rhs_bound: NormValue,
    /// `lhs / base-norm`, the Markov (or Nikolskii) ratio.
    pub ratio: f64,
    /// `bound − lhs` (floating view of the comparison).
    pub slack: f64,
    pub holds: bool,
    /// Comparison decided in rational arithmetic.
    pub exact_comparison: bool,
    /// Neither `holds` nor a violation could be certified.
    pub indeterminate: bool,
    pub equality: Equality,
    /// Relative slack `slack / bound`.
    pub equality_within: f64,
    pub witness: Witness,
    pub class_evidence: Membership,
}

/// Serializable polynomial record; coefficients as exact `num/den` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    pub coeffs: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Witness {
    pub fn from_poly(f: &RatPoly) -> Self {
        Witness {
            coeffs: f.coeffs().iter().map(|c| c.to_string()).collect(),
            class: None,
            seed: None,
        }
    }

    pub fn to_poly(&self) -> Option<RatPoly> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|s| crate::parse_rational(s))
            .collect::<Option<Vec<_>>>()?;
        Some(RatPoly::new(coeffs))
    }
}

fn as_small_int(q: &Rational) -> Option<u32> {
    if q.is_integer() && q.is_positive() {
        q.to_integer().to_u32().filter(|&v| v <= 64)
    } else {
        None
    }
}

/// Decide `lhs ≤ factor·base`, exactly when a common-power rational pair is
/// available, otherwise in floating point with the certified error bounds.
struct Comparison {
    holds: bool,
    indeterminate: bool,
    exact: bool,
    equality: Equality,
    slack: f64,
    equality_within: f64,
}

fn compare(
    lhs_f: f64,
    bound_f: f64,
    err: f64,
    exact_pair: Option<(Rational, Rational)>,
) -> Comparison {
    if let Some((l, r)) = exact_pair {
        let equality = if l == r { Equality::Exact } else { Equality::Strict };
        let slack = bound_f - lhs_f;
        return Comparison {
            holds: l <= r,
            indeterminate: false,
            exact: true,
            equality,
            slack,
            equality_within: slack / bound_f.abs().max(1e-300),
        };
    }
    let slack = bound_f - lhs_f;
    let rel = slack / bound_f.abs().max(1e-300);
    let margin = err + 1e-13 * bound_f.abs().max(lhs_f.abs()).max(1.0);
    if lhs_f <= bound_f - margin {
        Comparison {
            holds: true,
            indeterminate: false,
            exact: false,
            equality: if rel < 1e-10 { Equality::Near } else { Equality::Strict },
            slack,
            equality_within: rel,
        }
    } else if lhs_f > bound_f + margin {
        Comparison {
            holds: false,
            indeterminate: false,
            exact: false,
            equality: Equality::Strict,
            slack,
            equality_within: rel,
        }
    } else {
        Comparison {
            holds: true,
            indeterminate: true,
            exact: false,
            equality: if rel.abs() < 1e-10 { Equality::Near } else { Equality::Strict },
            slack,
            equality_within: rel,
        }
    }
}

fn make_verdict(
    theorem: TheoremId,
    lhs: NormValue,
    base: &NormValue,
    factor_f: f64,
    cmp: Comparison,
    f: &RatPoly,
    evidence: Membership,
) -> Verdict {
    let base_v = base.value.max(1e-300);
    let rhs_bound = NormValue {
        value: factor_f * base.value,
        mode: base.mode,
        error_bound: factor_f * base.error_bound,
        exact: None,
        argmax: None,
    };
    Verdict {
        theorem,
        ratio: lhs.value / base_v,
        slack: cmp.slack,
        holds: cmp.holds,
        exact_comparison: cmp.exact,
        indeterminate: cmp.indeterminate,
        equality: cmp.equality,
        equality_within: cmp.equality_within,
        witness: Witness::from_poly(f),
        class_evidence: evidence,
        lhs,
        rhs_bound,
    }
}

fn require_yes(m: Membership, what: &str) -> Result<Membership> {
    match m.verdict {
        VerdictKind::Yes => Ok(m),
        VerdictKind::Indeterminate => Ok(m),
        VerdictKind::No => Err(Error::ClassViolation(what.to_string())),
    }
}

/// Nikolskii comparison shared by Theorems 2.1 and 2.2: the class membership
/// differs, the bound `((qd+1)/2)^{1/q−1/p}` does not.
fn nikolskii(
    theorem: TheoremId,
    f: &RatPoly,
    d: usize,
    q: &Rational,
    p: Option<&Rational>,
    known_nonneg: bool,
    evidence: Membership,
) -> Result<Verdict> {
    if !q.is_positive() {
        return Err(Error::NonPositiveP);
    }
    let m1 = rint(-1);
    let p1 = rint(1);
    let qf = q.to_f64_lossy();
    let (p_exp, pf) = match p {
        None => (Exponent::Inf, f64::INFINITY),
        Some(pv) => (Exponent::Finite(pv.to_f64_lossy()), pv.to_f64_lossy()),
    };
    if pf <= qf {
        return Err(Error::NonPositiveP);
    }
    let lhs = lp_norm(f, p_exp, &m1, &p1, known_nonneg)?;
    let base = lp_norm(f, Exponent::Finite(qf), &m1, &p1, known_nonneg)?;
    // C = (qd+1)/2, bound = C^{1/q−1/p}·‖f‖_q
    let c = (q.clone() * rint(d as i64) + rint(1)) / rint(2);
    let cf = c.to_f64_lossy();
    let factor = if pf.is_infinite() {
        cf.powf(1.0 / qf)
    } else {
        cf.powf(1.0 / qf - 1.0 / pf)
    };
    let bound_f = factor * base.value;
    // exact route: both exponents integral (or p = ∞) and both norms exact
    let exact_pair = match (as_small_int(q), p.map(as_small_int)) {
        (Some(qi), None) => match (lhs.rational(), base.rational_pth_power()) {
            (Some(lv), Some((bq, bp))) if bp == qi => {
                Some((pow_rat(lv, qi), c.clone() * bq))
            }
            _ => None,
        },
        (Some(qi), Some(Some(pi))) => {
            match (lhs.rational_pth_power(), base.rational_pth_power()) {
                (Some((lp_pow, lpi)), Some((bq, bqi))) if lpi == pi && bqi == qi => {
                    // lhs^{pq} ≤ C^{p−q}·(‖f‖_q^q)^p
                    Some((pow_rat(&lp_pow, qi), pow_rat(&c, pi - qi) * pow_rat(&bq, pi)))
                }
                _ => None,
            }
        }
        _ => None,
    };
    let err = lhs.error_bound + factor * base.error_bound;
    let cmp = compare(lhs.value, bound_f, err, exact_pair);
    Ok(make_verdict(theorem, lhs, &base, factor, cmp, f, evidence))
}

/// Theorem: `‖f‖_p ≤ ((qd+1)/2)^{1/q−1/p}‖f‖_q` for `f ∈ B_d(−1,1)`.
pub fn check_nikolskii_lorentz(
    f: &RatPoly,
    d: usize,
    q: &Rational,
    p: Option<&Rational>,
) -> Result<Verdict> {
    let evidence = require_yes(in_lorentz_class(f, d), "f not in B_d(-1,1)")?;
    nikolskii(TheoremId::Thm21, f, d, q, p, true, evidence)
}

/// Theorem: same bound with `d = n` for `f ∈ P_{n,0}`.
pub fn check_nikolskii_pn0(
    f: &RatPoly,
    n: usize,
    q: &Rational,
    p: Option<&Rational>,
    factors: Option<&crate::poly::FactorList>,
) -> Result<Verdict> {
    if f.is_zero() || f.degree() > n {
        return Err(Error::ClassViolation("degree exceeds n".into()));
    }
    let evidence = require_yes(
        zeros_outside_open_disk(f, factors)?,
        "f has a zero inside the unit disk",
    )?;
    nikolskii(TheoremId::Thm22, f, n, q, p, false, evidence)
}

fn markov(
    theorem: TheoremId,
    f: &RatPoly,
    factor: &Rational,
    evidence: Membership,
) -> Result<Verdict> {
    let m1 = rint(-1);
    let p1 = rint(1);
    let lhs = sup_norm(&f.derivative(), &m1, &p1);
    let base = sup_norm(f, &m1, &p1);
    let factor_f = factor.to_f64_lossy();
    let bound_f = factor_f * base.value;
    let exact_pair = match (lhs.rational(), base.rational()) {
        (Some(l), Some(b)) => Some((l.clone(), factor.clone() * b.clone())),
        _ => None,
    };
    let err = lhs.error_bound + factor_f * base.error_bound;
    let cmp = compare(lhs.value, bound_f, err, exact_pair);
    Ok(make_verdict(theorem, lhs, &base, factor_f, cmp, f, evidence))
}

/// Theorem: `‖f′‖_∞ ≤ d‖f‖_∞` when `f′ ∈ B_{d−1}(−1,1)`.
pub fn check_markov_deriv_lorentz(f: &RatPoly, d: usize) -> Result<Verdict> {
    assert!(d >= 1);
    let evidence = require_yes(
        in_lorentz_class(&f.derivative(), d - 1),
        "f' not in B_{d-1}(-1,1)",
    )?;
    markov(TheoremId::Thm23, f, &rint(d as i64), evidence)
}

/// Theorem: `‖f′‖_∞ ≤ n‖f‖_∞` when `f′` has all zeros outside the open
/// unit disk.
pub fn check_markov_deriv_disk(
    f: &RatPoly,
    n: usize,
    deriv_factors: Option<&crate::poly::FactorList>,
) -> Result<Verdict> {
    if f.is_zero() || f.degree() > n {
        return Err(Error::ClassViolation("degree exceeds n".into()));
    }
    let evidence = require_yes(
        zeros_outside_open_disk(&f.derivative(), deriv_factors)?,
        "f' has a zero inside the unit disk",
    )?;
    markov(TheoremId::Thm24, f, &rint(n as i64), evidence)
}

/// Theorem: `‖f′‖_∞ ≤ (n/2)‖f‖_∞` for monotone `f` with all zeros in
/// `ℝ∖(−1,1)`. Also asserts the proof's inner step `f(1)f(−1) ≥ 0`.
pub fn check_markov_monotone_realzeros(f: &RatPoly, n: usize) -> Result<Verdict> {
    if f.is_zero() || f.degree() > n {
        return Err(Error::ClassViolation("degree exceeds n".into()));
    }
    if !monotone_on_interval(f).is_yes() {
        return Err(Error::ClassViolation("f not monotone on [-1,1]".into()));
    }
    let evidence = require_yes(
        real_zeros_outside_interval(f)?,
        "f has a zero outside R\\(-1,1)",
    )?;
    let endpoint_product = f.eval(&rint(1)) * f.eval(&rint(-1));
    assert!(
        !endpoint_product.is_negative(),
        "f(1)f(-1) >= 0 must hold for the class"
    );
    markov(
        TheoremId::Thm25,
        f,
        &(rint(n as i64) / rint(2)),
        evidence,
    )
}

/// The `n/2` Markov comparison with the hypothesis deliberately weakened to
/// plain monotonicity; violations are expected (negative control).
pub fn check_monotone_only_negative_control(f: &RatPoly, n: usize) -> Result<Verdict> {
    let evidence = require_yes(monotone_on_interval(f), "f not monotone on [-1,1]")?;
    markov(TheoremId::Thm25, f, &(rint(n as i64) / rint(2)), evidence)
}

/// Lemma: `(max{f(a),f(b)})^q ≤ (qd+1)/(b−a)·∫_a^b f^q`.
pub fn check_lemma_endpoint(
    f: &RatPoly,
    d: usize,
    q: &Rational,
    a: &Rational,
    b: &Rational,
) -> Result<Verdict> {
    if !q.is_positive() {
        return Err(Error::NonPositiveP);
    }
    let form = from_power(f, d, a, b).map_err(|_| Error::ClassViolation("d < deg f".into()))?;
    if !form.all_nonnegative() {
        return Err(Error::ClassViolation("f not in B_d(a,b)".into()));
    }
    let evidence = Membership {
        verdict: VerdictKind::Yes,
        margin: None,
        basis: crate::classes::BasisKind::Constructive,
    };
    let endpoint_max = f.eval(a).max(f.eval(b));
    let factor_rat = (q.clone() * rint(d as i64) + rint(1)) / (b.clone() - a.clone());
    let qf = q.to_f64_lossy();
    let lhs_f = endpoint_max.to_f64_lossy().powf(qf);
    let (rhs_norm, exact_pair) = if let Some(qi) = as_small_int(q) {
        let fq = {
            let mut acc = RatPoly::constant(rint(1));
            for _ in 0..qi {
                acc = acc.mul(f);
            }
            acc
        };
        let integral = integral_exact(&fq, a, b);
        let rhs = factor_rat.clone() * integral.clone();
        let pair = Some((pow_rat(&endpoint_max, qi), rhs.clone()));
        (
            NormValue {
                value: integral.to_f64_lossy(),
                mode: NormMode::Exact,
                error_bound: 0.0,
                exact: None,
                argmax: None,
            },
            pair,
        )
    } else {
        let norm = lp_norm(f, Exponent::Finite(qf), a, b, true)?;
        let qth_power = norm.value.powf(qf);
        (
            NormValue {
                value: qth_power,
                mode: NormMode::Quadrature,
                error_bound: norm.error_bound * qf * qth_power / norm.value.max(1e-300),
                exact: None,
                argmax: None,
            },
            None,
        )
    };
    let factor_f = factor_rat.to_f64_lossy();
    let bound_f = factor_f * rhs_norm.value;
    let err = factor_f * rhs_norm.error_bound;
    let cmp = compare(lhs_f, bound_f, err, exact_pair);
    let lhs = NormValue {
        value: lhs_f,
        mode: NormMode::Exact,
        error_bound: 0.0,
        exact: None,
        argmax: None,
    };
    Ok(make_verdict(TheoremId::Lem33, lhs, &rhs_norm, factor_f, cmp, f, evidence))
}

/// Lemma: `‖f‖_∞^q ≤ ((qd+1)/2)‖f‖_q^q` for `f ∈ B_d(−1,1)`.
pub fn check_lemma_supnorm(f: &RatPoly, d: usize, q: &Rational) -> Result<Verdict> {
    if !q.is_positive() {
        return Err(Error::NonPositiveP);
    }
    let evidence = require_yes(in_lorentz_class(f, d), "f not in B_d(-1,1)")?;
    let m1 = rint(-1);
    let p1 = rint(1);
    let sup = sup_norm(f, &m1, &p1);
    let qf = q.to_f64_lossy();
    let factor_rat = (q.clone() * rint(d as i64) + rint(1)) / rint(2);
    let norm_q = lp_norm(f, Exponent::Finite(qf), &m1, &p1, true)?;
    let exact_pair = match (as_small_int(q), sup.rational(), norm_q.rational_pth_power()) {
        (Some(qi), Some(sv), Some((qq, qqi))) if qqi == qi => {
            Some((pow_rat(sv, qi), factor_rat.clone() * qq))
        }
        _ => None,
    };
    let lhs_f = sup.value.powf(qf);
    let rhs_q = norm_q.value.powf(qf);
    let factor_f = factor_rat.to_f64_lossy();
    let bound_f = factor_f * rhs_q;
    let err = qf
        * (sup.error_bound * lhs_f / sup.value.max(1e-300)
            + factor_f * norm_q.error_bound * rhs_q / norm_q.value.max(1e-300));
    let cmp = compare(lhs_f, bound_f, err, exact_pair);
    let lhs = NormValue {
        value: lhs_f,
        mode: sup.mode,
        error_bound: qf * sup.error_bound * lhs_f / sup.value.max(1e-300),
        exact: None,
        argmax: sup.argmax.clone(),
    };
    let rhs_norm = NormValue {
        value: rhs_q,
        mode: norm_q.mode,
        error_bound: qf * norm_q.error_bound * rhs_q / norm_q.value.max(1e-300),
        exact: None,
        argmax: None,
    };
    Ok(make_verdict(TheoremId::Lem34, lhs, &rhs_norm, factor_f, cmp, f, evidence))
}

/// Erdős's improved Markov factor `(n/2)(n/(n−1))^{n−1}` for polynomials with
/// all zeros in `ℝ∖(−1,1)` (monotonicity not required). The factor is exact
/// rational; `n = 1` uses the empty-product convention.
pub fn erdos_factor(n: usize) -> Rational {
    let half_n = rint(n as i64) / rint(2);
    if n <= 1 {
        return half_n;
    }
    let ratio = rint(n as i64) / rint(n as i64 - 1);
    half_n * pow_rat(&ratio, (n - 1) as u32)
}

pub fn check_erdos_factor(f: &RatPoly, n: usize) -> Result<Verdict> {
    if f.is_zero() || f.degree() > n {
        return Err(Error::ClassViolation("degree exceeds n".into()));
    }
    let evidence = require_yes(
        real_zeros_outside_interval(f)?,
        "f has a zero outside R\\(-1,1)",
    )?;
    markov(TheoremId::Erdos, f, &erdos_factor(n), evidence)
}

/// Bernstein's supremum over monotone polynomials: `¼(n+1)²` (odd `n`) or
/// `¼n(n+2)` (even `n`). Individual polynomials sit at or below it.
pub fn bernstein_monotone_bound(n: usize) -> Rational {
    let n = n as i64;
    if n % 2 == 1 {
        rint((n + 1) * (n + 1)) / rint(4)
    } else {
        rint(n * (n + 2)) / rint(4)
    }
}

pub fn check_bernstein_monotone(f: &RatPoly, n: usize) -> Result<Verdict> {
    if f.is_zero() || f.degree() > n {
        return Err(Error::ClassViolation("degree exceeds n".into()));
    }
    let evidence = require_yes(monotone_on_interval(f), "f not monotone on [-1,1]")?;
    markov(TheoremId::BernsteinMonotone, f, &bernstein_monotone_bound(n), evidence)
}

/// Dispatch one checker against a generated sample.
pub fn run_checker(
    theorem: TheoremId,
    f: &RatPoly,
    n: usize,
    q: &Rational,
    p: Option<&Rational>,
    params: Option<&ClassParams>,
) -> Result<Verdict> {
    match theorem {
        TheoremId::Thm21 => check_nikolskii_lorentz(f, n, q, p),
        TheoremId::Thm22 => {
            check_nikolskii_pn0(f, n, q, p, params.and_then(|s| s.factors()))
        }
        TheoremId::Thm23 => check_markov_deriv_lorentz(f, n),
        TheoremId::Thm24 => {
            check_markov_deriv_disk(f, n, params.and_then(|s| s.deriv_factors()))
        }
        TheoremId::Thm25 => check_markov_monotone_realzeros(f, n),
        TheoremId::Lem33 => check_lemma_endpoint(f, n, q, &rint(-1), &rint(1)),
        TheoremId::Lem34 => check_lemma_supnorm(f, n, q),
        TheoremId::Erdos => check_erdos_factor(f, n),
        TheoremId::BernsteinMonotone => check_bernstein_monotone(f, n),
    }
}

/// Batch configuration; `qp_pairs` is consumed round-robin by trial index
/// for the exponent-parameterized checkers.
#[derive(Debug, Clone)]
pub struct BatchConfig {
    pub theorem: TheoremId,
    pub n_lo: usize,
    pub n_hi: usize,
    pub trials: usize,
    pub seed: u64,
    pub qp_pairs: Vec<(Rational, Option<Rational>)>,
    /// Sample from `MonotoneOnly` instead of the theorem's class and invert
    /// the failure semantics (a violation is the expected outcome).
    pub negative_control: bool,
}

/// Default Nikolskii exponent grid: `q ∈ {½,1,2,3}`, `p ∈ {q+½, 2q, ∞}`.
pub fn default_qp_pairs() -> Vec<(Rational, Option<Rational>)> {
    let mut pairs = Vec::new();
    for q in [crate::rat(1, 2), rint(1), rint(2), rint(3)] {
        pairs.push((q.clone(), Some(q.clone() + crate::rat(1, 2))));
        pairs.push((q.clone(), Some(q.clone() * rint(2))));
        pairs.push((q.clone(), None));
    }
    pairs
}

/// One line of a batch run, kept for CSV output.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub theorem: String,
    pub n: usize,
    pub trial: usize,
    pub ratio: f64,
    pub bound: f64,
    pub slack: f64,
    pub holds: bool,
    pub equality_within: f64,
    pub witness_id: String,
}

/// Per-theorem aggregate of a batch run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub theorem: String,
    pub trials: usize,
    pub failures: usize,
    pub indeterminates: usize,
    pub violations_found: usize,
    pub min_slack: Option<f64>,
    pub min_slack_witness: Option<Witness>,
    pub max_ratio: Option<f64>,
    pub max_ratio_witness: Option<Witness>,
    #[serde(skip)]
    pub runtime_secs: f64,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
    /// First genuine violation (negative-control mode leaves it here too).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_witness: Option<Witness>,
}

fn derive_seed(seed: u64, n: usize, trial: usize) -> u64 {
    // splitmix64 over the packed coordinates
    let mut z = seed
        .wrapping_add((n as u64) << 32)
        .wrapping_add(trial as u64)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run `trials` checks per degree over `n_lo..=n_hi`, sampling from the
/// theorem's class generator. Deterministic under a fixed seed and
/// independent of the worker count (aggregation is order-fixed).
pub fn batch_verify(config: &BatchConfig) -> Result<Report> {
    let start = Instant::now();
    let qp = if config.qp_pairs.is_empty() {
        vec![(rint(1), None)]
    } else {
        config.qp_pairs.clone()
    };
    let mut jobs = Vec::new();
    for n in config.n_lo..=config.n_hi {
        if n == 0 {
            continue;
        }
        for trial in 0..config.trials {
            jobs.push((n, trial));
        }
    }
    let outcomes: Vec<Result<(usize, usize, Verdict)>> = jobs
        .par_iter()
        .map(|&(n, trial)| {
            let seed = derive_seed(config.seed, n, trial);
            let class = if config.negative_control {
                ClassTag::MonotoneOnly(n)
            } else {
                config.theorem.class_for(n)
            };
            let s: Sample = sample(class, seed)?;
            let (q, p) = if config.theorem.uses_exponents() {
                let (q, p) = &qp[trial % qp.len()];
                (q.clone(), p.clone())
            } else {
                (rint(1), None)
            };
            let verdict = if config.negative_control {
                check_monotone_only_negative_control(&s.poly, n)?
            } else {
                run_checker(config.theorem, &s.poly, n, &q, p.as_ref(), Some(&s.params))?
            };
            Ok((n, trial, verdict))
        })
        .collect();

    let mut report = Report {
        theorem: config.theorem.name().to_string(),
        trials: 0,
        failures: 0,
        indeterminates: 0,
        violations_found: 0,
        min_slack: None,
        min_slack_witness: None,
        max_ratio: None,
        max_ratio_witness: None,
        runtime_secs: 0.0,
        records: Vec::new(),
        failure_witness: None,
    };
    for outcome in outcomes {
        let (n, trial, v) = outcome?;
        report.trials += 1;
        if v.indeterminate {
            report.indeterminates += 1;
        } else if !v.holds {
            report.violations_found += 1;
            if !config.negative_control {
                report.failures += 1;
            }
            if report.failure_witness.is_none() {
                report.failure_witness = Some(v.witness.clone());
            }
        }
        if !v.indeterminate {
            if report.min_slack.is_none_or(|s| v.slack < s) {
                report.min_slack = Some(v.slack);
                report.min_slack_witness = Some(v.witness.clone());
            }
            if report.max_ratio.is_none_or(|r| v.ratio > r) {
                report.max_ratio = Some(v.ratio);
                report.max_ratio_witness = Some(v.witness.clone());
            }
        }
        report.records.push(TrialRecord {
            theorem: config.theorem.name().to_string(),
            n,
            trial,
            ratio: v.ratio,
            bound: v.rhs_bound.value,
            slack: v.slack,
            holds: v.holds,
            equality_within: v.equality_within,
            witness_id: format!("{}-n{}-t{}", config.theorem.name(), n, trial),
        });
    }
    report.runtime_secs = start.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PowerPoly;
    use crate::rat;

    fn p(cs: &[i64]) -> RatPoly {
        PowerPoly::from_ints(cs)
    }

    #[test]
    fn thm21_equality_on_endpoint_power() {
        // f = (x+1)², d=2, q=1, p=∞ → 4 = (3/2)(8/3)
        let f = p(&[1, 2, 1]);
        let v = check_nikolskii_lorentz(&f, 2, &rint(1), None).unwrap();
        assert!(v.holds);
        assert!(v.exact_comparison);
        assert_eq!(v.equality, Equality::Exact);
        assert_eq!(v.lhs.rational(), Some(&rint(4)));
    }

    #[test]
    fn thm21_constant_is_equality() {
        let f = p(&[1]);
        let v = check_nikolskii_lorentz(&f, 0, &rint(1), None).unwrap();
        assert_eq!(v.equality, Equality::Exact);
    }

    #[test]
    fn thm21_strict_on_interior_positive() {
        // x²+1: lhs 2, bound (3/2)(8/3) = 4
        let v = check_nikolskii_lorentz(&p(&[1, 0, 1]), 2, &rint(1), None).unwrap();
        assert!(v.holds);
        assert!(v.exact_comparison);
        assert_eq!(v.equality, Equality::Strict);
        assert!((v.rhs_bound.value - 4.0).abs() < 1e-12);
        assert!((v.lhs.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn thm22_sign_flip_equality() {
        // −(x+1)³: triple root on the circle needs factor evidence, the
        // numeric root-finder cannot separate it from the guard band
        let f = p(&[1, 3, 3, 1]).neg();
        let evidence = crate::poly::FactorList {
            real_roots: vec![crate::poly::RealRoot {
                root: rint(-1),
                multiplicity: 3,
            }],
            complex_pairs: vec![],
            leading: rint(-1),
        };
        let v = check_nikolskii_pn0(&f, 3, &rint(1), None, Some(&evidence)).unwrap();
        assert!(v.holds);
        assert_eq!(v.equality, Equality::Exact);
    }

    #[test]
    fn thm23_equality_family() {
        // f = (x+1)³ − 4: lhs 12, bound 3·4
        let f = p(&[-3, 3, 3, 1]);
        let v = check_markov_deriv_lorentz(&f, 3).unwrap();
        assert!(v.holds && v.exact_comparison);
        assert_eq!(v.equality, Equality::Exact);
        assert_eq!(v.lhs.rational(), Some(&rint(12)));

        // (x+1)^d is strict with ratio d/2
        let g = p(&[1, 1]).pow(4);
        let v = check_markov_deriv_lorentz(&g, 4).unwrap();
        assert_eq!(v.equality, Equality::Strict);
        assert!((v.ratio - 2.0).abs() < 1e-12);

        // f = x at d=1
        let v = check_markov_deriv_lorentz(&p(&[0, 1]), 1).unwrap();
        assert_eq!(v.equality, Equality::Exact);
    }

    #[test]
    fn thm24_examples() {
        let f = p(&[-3, 3, 3, 1]); // (x+1)³ − 4 = (x+1)³ − 2²
        let v = check_markov_deriv_disk(&f, 3, None).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        assert!((v.ratio - 3.0).abs() < 1e-12);

        let v = check_markov_deriv_disk(&p(&[7, 1]), 1, None).unwrap();
        assert!(v.holds);
        assert!((v.ratio - 1.0 / 8.0).abs() < 1e-12);
    }

    #[test]
    fn thm25_examples() {
        for n in 1..=6 {
            let f = p(&[1, 1]).pow(n);
            let v = check_markov_monotone_realzeros(&f, n).unwrap();
            assert_eq!(v.equality, Equality::Exact, "n={n}");
            assert!((v.ratio - n as f64 / 2.0).abs() < 1e-12);
        }
        // (x+2)(x+3) is strict
        let f = p(&[6, 5, 1]);
        let v = check_markov_monotone_realzeros(&f, 2).unwrap();
        assert!(v.holds);
        assert_eq!(v.equality, Equality::Strict);
        // sign-flipped family c(1−x)^n with c < 0
        let g = p(&[1, -1]).pow(3).scale(&rat(-5, 2));
        let v = check_markov_monotone_realzeros(&g, 3).unwrap();
        assert_eq!(v.equality, Equality::Exact);
    }

    #[test]
    fn lemma_endpoint_examples() {
        let v = check_lemma_endpoint(&p(&[1, 2, 1]), 2, &rint(1), &rint(-1), &rint(1)).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        let v = check_lemma_endpoint(&p(&[1]), 0, &rint(1), &rint(-1), &rint(1)).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        let v = check_lemma_endpoint(&p(&[1, 0, 1]), 2, &rint(1), &rint(-1), &rint(1)).unwrap();
        assert!(v.holds);
        assert_eq!(v.equality, Equality::Strict);
    }

    #[test]
    fn lemma_supnorm_examples() {
        let v = check_lemma_supnorm(&p(&[1, 2, 1]), 2, &rint(1)).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        let v = check_lemma_supnorm(&p(&[1]), 0, &rint(1)).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        // x²+1, q=2, d=2 → 4 ≤ (5/2)(56/15) = 28/3
        let v = check_lemma_supnorm(&p(&[1, 0, 1]), 2, &rint(2)).unwrap();
        assert!(v.holds && v.exact_comparison);
        assert!((v.rhs_bound.value - 28.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn erdos_examples() {
        // x²−1: ratio 2 equals the n=2 bound
        let v = check_erdos_factor(&p(&[-1, 0, 1]), 2).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        assert!((v.ratio - 2.0).abs() < 1e-12);

        // (x+1)^n sits below the bound
        let v = check_erdos_factor(&p(&[1, 1]).pow(5), 5).unwrap();
        assert!(v.holds);
        assert_eq!(v.equality, Equality::Strict);

        // n = 1 edge: bound 1/2 attained by 1−x
        let v = check_erdos_factor(&p(&[1, -1]), 1).unwrap();
        assert_eq!(v.equality, Equality::Exact);
        assert_eq!(erdos_factor(1), rat(1, 2));
    }

    #[test]
    fn bernstein_monotone_examples() {
        // n=2, f = x²+2x: ratio 4/3 ≤ 2
        let v = check_bernstein_monotone(&p(&[0, 2, 1]), 2).unwrap();
        assert!(v.holds);
        assert!((v.ratio - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(bernstein_monotone_bound(2), rint(2));

        // n=1, f = x: equality at 1
        let v = check_bernstein_monotone(&p(&[0, 1]), 1).unwrap();
        assert_eq!(v.equality, Equality::Exact);

        // n=3, f = x³: ratio 3 ≤ 4
        let v = check_bernstein_monotone(&p(&[0, 0, 0, 1]), 3).unwrap();
        assert!(v.holds);
        assert!((v.ratio - 3.0).abs() < 1e-12);
        assert_eq!(bernstein_monotone_bound(3), rint(4));
    }

    #[test]
    fn class_violation_is_rejected() {
        assert!(matches!(
            check_nikolskii_lorentz(&p(&[0, 1]), 1, &rint(1), None),
            Err(Error::ClassViolation(_))
        ));
        assert!(matches!(
            check_markov_monotone_realzeros(&p(&[1, 0, 1]), 2),
            Err(Error::ClassViolation(_))
        ));
    }

    #[test]
    fn small_batches_have_no_failures() {
        for theorem in ALL_THEOREMS {
            let report = batch_verify(&BatchConfig {
                theorem,
                n_lo: 2,
                n_hi: 4,
                trials: 20,
                seed: 7,
                qp_pairs: default_qp_pairs(),
                negative_control: false,
            })
            .unwrap();
            assert_eq!(report.failures, 0, "{}", theorem.name());
            assert_eq!(report.trials, 60);
        }
    }

    #[test]
    fn negative_control_finds_violation() {
        let report = batch_verify(&BatchConfig {
            theorem: TheoremId::Thm25,
            n_lo: 2,
            n_hi: 4,
            trials: 200,
            seed: 1,
            qp_pairs: Vec::new(),
            negative_control: true,
        })
        .unwrap();
        assert_eq!(report.failures, 0);
        assert!(report.violations_found > 0);
        assert!(report.failure_witness.is_some());
    }

    #[test]
    fn batch_is_deterministic() {
        let config = BatchConfig {
            theorem: TheoremId::Thm24,
            n_lo: 2,
            n_hi: 3,
            trials: 10,
            seed: 42,
            qp_pairs: Vec::new(),
            negative_control: false,
        };
        let a = batch_verify(&config).unwrap();
        let b = batch_verify(&config).unwrap();
        assert_eq!(a.min_slack, b.min_slack);
        assert_eq!(a.max_ratio, b.max_ratio);
        let ra: Vec<_> = a.records.iter().map(|r| r.ratio).collect();
        let rb: Vec<_> = b.records.iter().map(|r| r.ratio).collect();
        assert_eq!(ra, rb);
    }

    #[test]
    fn witness_round_trip() {
        let f = RatPoly::new(vec![rat(1, 3), rat(-7, 2), rint(4)]);
        let w = Witness::from_poly(&f);
        assert_eq!(w.to_poly(), Some(f));
    }
}
