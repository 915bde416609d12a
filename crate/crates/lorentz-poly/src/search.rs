//! Empirical extremal exploration: ratio maximization over the constrained
//! classes, pointwise derivative profiles against the constant-free
//! envelopes, and the Lorentz-degree growth experiment.

use crate::classes::{
    check_membership, sample, sample_real_outside, ClassParams, ClassTag,
};
use crate::lorentz::{lorentz_degree, LorentzDegreeResult};
use crate::norms::{lp_norm, pow_rat, sup_norm, Exponent};
use crate::poly::{FactorList, RatPoly};
use crate::scalar::{rat, rint, Rational, Scalar};
use crate::verify::Witness;
use crate::{Error, Result};
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Strategy {
    Random,
    CoordinateDescent,
}

impl Strategy {
    pub fn parse(s: &str) -> Option<Strategy> {
        match s {
            "random" => Some(Strategy::Random),
            "coordinate-descent" => Some(Strategy::CoordinateDescent),
            _ => None,
        }
    }
}

/// Best ratio found over a class, with the attaining polynomial.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub class: String,
    pub n: usize,
    pub best_poly: Witness,
    pub best_ratio: f64,
    pub bound: f64,
    pub gap: f64,
    pub iterations: usize,
    pub strategy: Strategy,
    pub seed: u64,
    /// Constructive evidence for the winner, for exact re-checking.
    #[serde(skip)]
    pub best_params: ClassParams,
}

/// The proved (or, for `MonotoneOnly`, supremum-level) ratio bound that the
/// class's theorem assigns to degree `n`.
pub fn class_bound(class: ClassTag) -> Rational {
    match class {
        ClassTag::LorentzNonneg(d) => (rint(d as i64) + rint(1)) / rint(2),
        ClassTag::ZerosOutsideDisk(n) => (rint(n as i64) + rint(1)) / rint(2),
        ClassTag::DerivLorentz(d) => rint(d as i64),
        ClassTag::DerivZerosOutsideDisk(n) => rint(n as i64),
        ClassTag::MonotoneRealZerosOutside(n) => rint(n as i64) / rint(2),
        ClassTag::MonotoneOnly(n) => crate::verify::bernstein_monotone_bound(n),
    }
}

/// The maximized quantity: the Markov ratio `‖f′‖_∞/‖f‖_∞` for the
/// derivative-bound classes, the Nikolskii ratio `‖f‖_∞/‖f‖_1` (matching
/// `q = 1`, `p = ∞`) for the norm-comparison classes.
pub fn class_ratio(class: ClassTag, f: &RatPoly) -> Result<f64> {
    let m1 = rint(-1);
    let p1 = rint(1);
    match class {
        ClassTag::LorentzNonneg(_) | ClassTag::ZerosOutsideDisk(_) => {
            let sup = sup_norm(f, &m1, &p1);
            let l1 = lp_norm(f, Exponent::Finite(1.0), &m1, &p1, false)?;
            Ok(sup.value / l1.value.max(1e-300))
        }
        _ => {
            let sup_d = sup_norm(&f.derivative(), &m1, &p1);
            let sup = sup_norm(f, &m1, &p1);
            Ok(sup_d.value / sup.value.max(1e-300))
        }
    }
}

fn perturb_factors(factors: &FactorList, idx: usize, delta: &Rational) -> Option<FactorList> {
    let mut out = factors.clone();
    let nr = out.real_roots.len();
    let np = out.complex_pairs.len();
    if idx < nr {
        let r = &mut out.real_roots[idx];
        // push the root along its own side of the axis; never across ±1
        let moved = if r.root.is_negative() {
            r.root.clone() - delta.clone()
        } else {
            r.root.clone() + delta.clone()
        };
        if moved.abs() < rint(1) {
            return None;
        }
        r.root = moved;
    } else if idx < nr + 2 * np {
        let pi = (idx - nr) / 2;
        let pair = &mut out.complex_pairs[pi];
        if (idx - nr) % 2 == 0 {
            pair.re += delta.clone();
        } else {
            pair.im += delta.clone();
        }
        let m2 = pair.re.clone() * pair.re.clone() + pair.im.clone() * pair.im.clone();
        if m2 < rint(1) || pair.im.is_zero() {
            return None;
        }
    } else if idx == nr + 2 * np {
        let l = out.leading.clone() + delta.clone();
        if l.is_zero() {
            return None;
        }
        out.leading = l;
    } else {
        return None;
    }
    Some(out)
}

fn perturb_nonneg(coeffs: &[Rational], idx: usize, delta: &Rational) -> Option<Vec<Rational>> {
    let mut out = coeffs.to_vec();
    let c = out.get(idx)?.clone() + delta.clone();
    if c.is_negative() {
        return None;
    }
    out[idx] = c;
    if out.iter().all(|v| v.is_zero()) {
        return None;
    }
    Some(out)
}

/// Number of perturbable rational parameters.
fn knob_count(params: &ClassParams) -> usize {
    match params {
        ClassParams::LorentzNonneg { coeffs } => coeffs.len(),
        ClassParams::ZerosOutsideDisk { factors }
        | ClassParams::MonotoneRealZerosOutside { factors } => {
            factors.real_roots.len() + 2 * factors.complex_pairs.len() + 1
        }
        ClassParams::DerivLorentz { coeffs, .. } => coeffs.len() + 1,
        ClassParams::DerivZerosOutsideDisk { factors, .. } => {
            factors.real_roots.len() + 2 * factors.complex_pairs.len() + 2
        }
        ClassParams::MonotoneOnly { square, lorentz, .. } => square.len() + lorentz.len() + 1,
    }
}

/// Move one parameter by `delta`, keeping the parameterization inside its
/// class by construction; `None` when the move would leave the class.
fn perturb(params: &ClassParams, idx: usize, delta: &Rational) -> Option<ClassParams> {
    match params {
        ClassParams::LorentzNonneg { coeffs } => Some(ClassParams::LorentzNonneg {
            coeffs: perturb_nonneg(coeffs, idx, delta)?,
        }),
        ClassParams::ZerosOutsideDisk { factors } => Some(ClassParams::ZerosOutsideDisk {
            factors: perturb_factors(factors, idx, delta)?,
        }),
        ClassParams::MonotoneRealZerosOutside { factors } => {
            Some(ClassParams::MonotoneRealZerosOutside {
                factors: perturb_factors(factors, idx, delta)?,
            })
        }
        ClassParams::DerivLorentz { coeffs, constant } => {
            if idx < coeffs.len() {
                Some(ClassParams::DerivLorentz {
                    coeffs: perturb_nonneg(coeffs, idx, delta)?,
                    constant: constant.clone(),
                })
            } else {
                Some(ClassParams::DerivLorentz {
                    coeffs: coeffs.clone(),
                    constant: constant.clone() + delta.clone(),
                })
            }
        }
        ClassParams::DerivZerosOutsideDisk { factors, constant } => {
            let nf = factors.real_roots.len() + 2 * factors.complex_pairs.len() + 1;
            if idx < nf {
                Some(ClassParams::DerivZerosOutsideDisk {
                    factors: perturb_factors(factors, idx, delta)?,
                    constant: constant.clone(),
                })
            } else {
                Some(ClassParams::DerivZerosOutsideDisk {
                    factors: factors.clone(),
                    constant: constant.clone() + delta.clone(),
                })
            }
        }
        ClassParams::MonotoneOnly { square, lorentz, constant } => {
            if idx < square.len() {
                let mut s = square.clone();
                s[idx] += delta.clone();
                if s.iter().all(|v| v.is_zero()) {
                    return None;
                }
                Some(ClassParams::MonotoneOnly {
                    square: s,
                    lorentz: lorentz.clone(),
                    constant: constant.clone(),
                })
            } else if idx < square.len() + lorentz.len() {
                Some(ClassParams::MonotoneOnly {
                    square: square.clone(),
                    lorentz: perturb_nonneg(lorentz, idx - square.len(), delta)?,
                    constant: constant.clone(),
                })
            } else {
                Some(ClassParams::MonotoneOnly {
                    square: square.clone(),
                    lorentz: lorentz.clone(),
                    constant: constant.clone() + delta.clone(),
                })
            }
        }
    }
}

fn admissible(class: ClassTag, params: &ClassParams) -> bool {
    let f = params.realize();
    if f.is_zero() || f.degree() > class.degree_bound() {
        return false;
    }
    matches!(
        check_membership(class, &f, Some(params)),
        Ok(m) if m.is_yes()
    )
}

fn derive_seed(seed: u64, lane: u64, i: u64) -> u64 {
    let mut z = seed
        .wrapping_add(lane << 40)
        .wrapping_add(i)
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Maximize the class ratio over `iterations` evaluations. Random strategy
/// takes the best over fresh generator samples; coordinate descent perturbs
/// the constructive parameters with shrinking rational steps, accepting only
/// strict improvements (so a polynomial already at the bound never moves).
pub fn maximize_ratio(
    class: ClassTag,
    strategy: Strategy,
    iterations: usize,
    seed: u64,
    start: Option<ClassParams>,
) -> Result<SearchResult> {
    assert!(iterations >= 1);
    let n = class.degree_bound();
    let bound = class_bound(class).to_f64_lossy();
    let mut best_params: Option<ClassParams> = None;
    let mut best_ratio = f64::NEG_INFINITY;
    let mut used = 0usize;

    let consider = |params: ClassParams,
                        best_params: &mut Option<ClassParams>,
                        best_ratio: &mut f64|
     -> Result<bool> {
        let f = params.realize();
        let r = class_ratio(class, &f)?;
        if r > *best_ratio {
            *best_ratio = r;
            *best_params = Some(params);
            Ok(true)
        } else {
            Ok(false)
        }
    };

    if let Some(p) = start {
        if !admissible(class, &p) {
            return Err(Error::ClassViolation("seed polynomial outside class".into()));
        }
        consider(p, &mut best_params, &mut best_ratio)?;
        used += 1;
    }

    match strategy {
        Strategy::Random => {
            while used < iterations {
                let s = derive_seed(seed, 1, used as u64);
                used += 1;
                if let Ok(sample) = sample(class, s) {
                    consider(sample.params, &mut best_params, &mut best_ratio)?;
                }
            }
        }
        Strategy::CoordinateDescent => {
            if best_params.is_none() {
                let sample = sample(class, seed)?;
                consider(sample.params, &mut best_params, &mut best_ratio)?;
                used += 1;
            }
            let mut step = rint(1);
            let floor = rat(1, 1024);
            'outer: while step >= floor {
                let mut improved = false;
                let current = best_params.clone().unwrap();
                for idx in 0..knob_count(&current) {
                    for delta in [step.clone(), -step.clone()] {
                        if used >= iterations {
                            break 'outer;
                        }
                        used += 1;
                        let Some(cand) = perturb(&current, idx, &delta) else {
                            continue;
                        };
                        if !admissible(class, &cand) {
                            continue;
                        }
                        if consider(cand, &mut best_params, &mut best_ratio)? {
                            improved = true;
                        }
                    }
                }
                if !improved {
                    step /= rint(2);
                }
            }
        }
    }

    let best = best_params.expect("at least one admissible candidate");
    Ok(SearchResult {
        class: class.name().to_string(),
        n,
        best_poly: Witness::from_poly(&best.realize()),
        best_ratio,
        bound,
        gap: bound - best_ratio,
        iterations: used,
        strategy,
        seed,
        best_params: best,
    })
}

/// One grid point of a pointwise derivative profile.
#[derive(Debug, Clone, Serialize)]
pub struct ProfilePoint {
    pub x: f64,
    /// Largest observed `|f′(x)|/‖f‖_∞`.
    pub max_ratio: f64,
    /// Constant-free envelope `min{√n/(1−x²)², n}`.
    pub envelope: f64,
    /// Implied constant `max_ratio / envelope`.
    pub c_emp: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileTable {
    pub class: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub points: Vec<ProfilePoint>,
    pub c_emp_max: f64,
}

/// 41 Chebyshev-spaced points strictly inside `(−1,1)`, dense near the
/// endpoints where the envelopes blow up.
pub fn chebyshev_grid() -> Vec<f64> {
    (1..=41)
        .map(|k| (k as f64 * std::f64::consts::PI / 42.0).cos())
        .collect()
}

pub fn envelope(n: usize, x: f64) -> f64 {
    let nf = n as f64;
    let w = 1.0 - x * x;
    (nf.sqrt() / (w * w)).min(nf)
}

/// Sample `trials` members of `class` (`real_only` restricts the
/// zeros-outside-disk generator to real roots) and record, per grid point,
/// the largest `|f′(x)|/‖f‖_∞` seen; the unspecified absolute constant of
/// the pointwise bounds is reported empirically and is never a pass/fail.
pub fn pointwise_profile(
    class: ClassTag,
    trials: usize,
    seed: u64,
    real_only: bool,
) -> Result<ProfileTable> {
    let n = class.degree_bound();
    let grid = chebyshev_grid();
    let m1 = rint(-1);
    let p1 = rint(1);
    let per_trial: Vec<Vec<f64>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let s = derive_seed(seed, 2, t as u64);
            let f = if real_only {
                sample_real_outside(n, s).poly
            } else {
                match sample(class, s) {
                    Ok(smp) => smp.poly,
                    Err(_) => return vec![0.0; grid.len()],
                }
            };
            let sup = sup_norm(&f, &m1, &p1).value.max(1e-300);
            let df = f.derivative().to_float();
            grid.iter().map(|&x| df.eval(&x).abs() / sup).collect()
        })
        .collect();
    let mut points = Vec::with_capacity(grid.len());
    let mut c_emp_max: f64 = 0.0;
    for (i, &x) in grid.iter().enumerate() {
        let max_ratio = per_trial
            .iter()
            .map(|row| row[i])
            .fold(0.0_f64, f64::max);
        let env = envelope(n, x);
        let c_emp = max_ratio / env;
        c_emp_max = c_emp_max.max(c_emp);
        points.push(ProfilePoint {
            x,
            max_ratio,
            envelope: env,
            c_emp,
        });
    }
    Ok(ProfileTable {
        class: if real_only {
            "real-zeros-outside".to_string()
        } else {
            class.name().to_string()
        },
        n,
        trials,
        seed,
        points,
        c_emp_max,
    })
}

/// One run of the degree-growth experiment on
/// `p = ((x−a)² + ε²(1−a²))^n`.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeGrowthRow {
    pub n: usize,
    pub a: String,
    pub eps: String,
    pub d_found: Option<usize>,
    pub cap: usize,
    pub status: String,
    /// `d·ε²/n` when finite.
    pub normalized: Option<f64>,
}

/// Build `((x−a)² + ε²(1−a²))^n` exactly.
pub fn growth_polynomial(n: usize, a: &Rational, eps: &Rational) -> RatPoly {
    let shift = RatPoly::new(vec![-a.clone(), rint(1)]);
    let bump = eps.clone() * eps.clone() * (rint(1) - a.clone() * a.clone());
    shift
        .mul(&shift)
        .add(&RatPoly::constant(bump))
        .pow(n)
}

/// Cap `⌈10n/ε²⌉` for the Lorentz-degree scan.
pub fn growth_cap(n: usize, eps: &Rational) -> usize {
    let bound = rint(10 * n as i64) / (eps.clone() * eps.clone());
    bound.to_f64_lossy().ceil() as usize
}

/// Scan the cross product of the parameter lists; rows are deterministic
/// and independent, computed in parallel.
pub fn degree_growth_experiment(
    ns: &[usize],
    a_list: &[Rational],
    eps_list: &[Rational],
) -> Result<Vec<DegreeGrowthRow>> {
    let mut combos = Vec::new();
    for &n in ns {
        for a in a_list {
            for eps in eps_list {
                if !(eps.is_positive() && *eps <= rint(1)) {
                    return Err(Error::ClassViolation("need 0 < eps <= 1".into()));
                }
                if !(a.abs() < rint(1)) {
                    return Err(Error::ClassViolation("need -1 < a < 1".into()));
                }
                combos.push((n, a.clone(), eps.clone()));
            }
        }
    }
    combos
        .par_iter()
        .map(|(n, a, eps)| {
            let p = growth_polynomial(*n, a, eps);
            let cap = growth_cap(*n, eps);
            let result = lorentz_degree(&p, &rint(-1), &rint(1), cap)?;
            let (d_found, status, normalized) = match result {
                LorentzDegreeResult::Finite(d) => {
                    let norm = rint(d as i64) * eps.clone() * eps.clone() / rint(*n as i64);
                    (Some(d), "finite".to_string(), Some(norm.to_f64_lossy()))
                }
                LorentzDegreeResult::Infinite => (None, "infinite".to_string(), None),
                LorentzDegreeResult::Unknown { cap_reached } => {
                    (None, format!("unknown(cap {cap_reached})"), None)
                }
            };
            Ok(DegreeGrowthRow {
                n: *n,
                a: a.to_string(),
                eps: eps.to_string(),
                d_found,
                cap,
                status,
                normalized,
            })
        })
        .collect()
}

/// `(x+1)^n − 2^{n−1}`, the equality family of the disk-constrained Markov
/// bound, as constructive evidence for its class.
pub fn disk_equality_params(n: usize) -> ClassParams {
    assert!(n >= 1);
    // f' = n(x+1)^{n−1}
    let factors = FactorList {
        real_roots: if n >= 2 {
            vec![crate::poly::RealRoot {
                root: rint(-1),
                multiplicity: n - 1,
            }]
        } else {
            vec![]
        },
        complex_pairs: vec![],
        leading: rint(n as i64),
    };
    let constant = RatPoly::new(vec![rint(1), rint(1)])
        .pow(n)
        .sub(&RatPoly::constant(pow_rat(&rint(2), (n - 1) as u32)))
        .coeff(0);
    ClassParams::DerivZerosOutsideDisk { factors, constant }
}
