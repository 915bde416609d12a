//! Membership predicates and random generators for the constrained classes:
//! nonnegative Lorentz forms `B_d(−1,1)`, polynomials with all zeros outside
//! the open unit disk, the derivative-constrained variants, and monotone
//! polynomials with all zeros in `ℝ∖(−1,1)`.

use crate::lorentz::{from_power, LorentzForm};
use crate::poly::{ComplexPair, FactorList, RatPoly, RealRoot};
use crate::scalar::{rat, rint, Rational, Scalar};
use crate::sturm::{count_real_roots, count_roots_in, square_free_decomposition, sturm_isolate, Interval, Parity};
use crate::{Error, Result};
use nalgebra::DMatrix;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The constrained classes of the inequality checkers; the parameter is the
/// class's degree bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClassTag {
    /// `f ∈ B_d(−1,1)`.
    LorentzNonneg(usize),
    /// `f ∈ P_{n,0}`: all zeros outside the open unit disk.
    ZerosOutsideDisk(usize),
    /// `f' ∈ B_{d−1}(−1,1)`.
    DerivLorentz(usize),
    /// `f'` has all zeros outside the open unit disk.
    DerivZerosOutsideDisk(usize),
    /// Monotone on `[−1,1]` with all zeros in `ℝ∖(−1,1)`.
    MonotoneRealZerosOutside(usize),
    /// Monotone on `[−1,1]` only (negative-control class).
    MonotoneOnly(usize),
}

impl ClassTag {
    pub fn name(&self) -> &'static str {
        match self {
            ClassTag::LorentzNonneg(_) => "lorentz-nonneg",
            ClassTag::ZerosOutsideDisk(_) => "zeros-outside-disk",
            ClassTag::DerivLorentz(_) => "deriv-lorentz",
            ClassTag::DerivZerosOutsideDisk(_) => "deriv-disk",
            ClassTag::MonotoneRealZerosOutside(_) => "monotone-real-zeros",
            ClassTag::MonotoneOnly(_) => "monotone-only",
        }
    }

    pub fn parse(s: &str, n: usize) -> Option<ClassTag> {
        match s {
            "lorentz-nonneg" => Some(ClassTag::LorentzNonneg(n)),
            "zeros-outside-disk" => Some(ClassTag::ZerosOutsideDisk(n)),
            "deriv-lorentz" => Some(ClassTag::DerivLorentz(n)),
            "deriv-disk" => Some(ClassTag::DerivZerosOutsideDisk(n)),
            "monotone-real-zeros" => Some(ClassTag::MonotoneRealZerosOutside(n)),
            "monotone-only" => Some(ClassTag::MonotoneOnly(n)),
            _ => None,
        }
    }

    pub fn degree_bound(&self) -> usize {
        match *self {
            ClassTag::LorentzNonneg(d)
            | ClassTag::ZerosOutsideDisk(d)
            | ClassTag::DerivLorentz(d)
            | ClassTag::DerivZerosOutsideDisk(d)
            | ClassTag::MonotoneRealZerosOutside(d)
            | ClassTag::MonotoneOnly(d) => d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    Yes,
    No,
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Constructive,
    Numeric,
}

/// Outcome of a membership test.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub verdict: VerdictKind,
    /// Distance of the closest root to the unit circle, when relevant.
    pub margin: Option<f64>,
    pub basis: BasisKind,
}

impl Membership {
    fn constructive(yes: bool) -> Self {
        Membership {
            verdict: if yes { VerdictKind::Yes } else { VerdictKind::No },
            margin: None,
            basis: BasisKind::Constructive,
        }
    }

    pub fn is_yes(&self) -> bool {
        self.verdict == VerdictKind::Yes
    }
}

/// `f ∈ B_d(−1,1)`: the unique degree-`d` Lorentz coefficients exist and are
/// all nonnegative. Always constructive.
pub fn in_lorentz_class(f: &RatPoly, d: usize) -> Membership {
    match from_power(f, d, &rint(-1), &rint(1)) {
        Ok(form) => Membership::constructive(form.all_nonnegative()),
        Err(_) => Membership::constructive(false),
    }
}

/// All zeros of `f` outside the open unit disk.
///
/// With a factor list the answer is exact (`|α|² ≥ 1` in rational
/// arithmetic); otherwise companion-matrix eigenvalues decide up to a
/// `10⁻⁹` guard band, with `Indeterminate` inside the band.
pub fn zeros_outside_open_disk(f: &RatPoly, evidence: Option<&FactorList>) -> Result<Membership> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if let Some(factors) = evidence {
        if factors.expand() == *f {
            let mut yes = true;
            let mut margin = f64::INFINITY;
            for r in &factors.real_roots {
                let m2 = (r.root.clone() * r.root.clone()).to_f64_lossy();
                margin = margin.min((m2.sqrt() - 1.0).abs());
                if r.root.abs() < rint(1) {
                    yes = false;
                }
            }
            for p in &factors.complex_pairs {
                let m2 = p.re.clone() * p.re.clone() + p.im.clone() * p.im.clone();
                margin = margin.min((m2.to_f64_lossy().sqrt() - 1.0).abs());
                if m2 < rint(1) {
                    yes = false;
                }
            }
            return Ok(Membership {
                verdict: if yes { VerdictKind::Yes } else { VerdictKind::No },
                margin: if margin.is_finite() { Some(margin) } else { None },
                basis: BasisKind::Constructive,
            });
        }
    }
    if f.degree() == 0 {
        // constants have no zeros at all
        return Ok(Membership {
            verdict: VerdictKind::Yes,
            margin: None,
            basis: BasisKind::Constructive,
        });
    }
    let roots = companion_roots(f);
    let min_mod = roots
        .iter()
        .map(|(re, im)| (re * re + im * im).sqrt())
        .fold(f64::INFINITY, f64::min);
    let verdict = if min_mod >= 1.0 + 1e-9 {
        VerdictKind::Yes
    } else if min_mod <= 1.0 - 1e-9 {
        VerdictKind::No
    } else {
        VerdictKind::Indeterminate
    };
    Ok(Membership {
        verdict,
        margin: Some((min_mod - 1.0).abs()),
        basis: BasisKind::Numeric,
    })
}

/// Companion-matrix roots of `f` as `(re, im)` pairs, floating point.
pub fn companion_roots(f: &RatPoly) -> Vec<(f64, f64)> {
    let n = f.degree();
    if n == 0 {
        return Vec::new();
    }
    let ff = f.to_float();
    let lead = ff.coeff(n);
    let m = DMatrix::from_fn(n, n, |i, j| {
        if j == n - 1 {
            -ff.coeff(i) / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().map(|c| (c.re, c.im)).collect()
}

/// All zeros of `f` real and in `ℝ∖(−1,1)`; exact via Sturm counting with a
/// square-free multiplicity cascade.
pub fn real_zeros_outside_interval(f: &RatPoly) -> Result<Membership> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.degree() == 0 {
        return Ok(Membership::constructive(true));
    }
    let with_multiplicity: usize = square_free_decomposition(f)
        .iter()
        .map(|(g, i)| i * count_real_roots(g))
        .sum();
    let all_real = with_multiplicity == f.degree();
    let none_inside = count_roots_in(f, &rint(-1), &rint(1)) == 0;
    Ok(Membership::constructive(all_real && none_inside))
}

/// Monotone on `[−1,1]`: `f'` has no odd-multiplicity root strictly inside.
pub fn monotone_on_interval(f: &RatPoly) -> Membership {
    assert!(f.degree() >= 1, "monotonicity test requires deg f >= 1");
    let df = f.derivative();
    if df.is_zero() {
        return Membership::constructive(true);
    }
    let sign_changes = sturm_isolate(&df, &Interval::Open(rint(-1), rint(1)))
        .iter()
        .any(|b| b.parity() == Parity::Odd);
    Membership::constructive(!sign_changes)
}

/// Constructive parameterization of a class sample; the search module
/// perturbs these parameters so every iterate stays inside its class.
#[derive(Debug, Clone)]
pub enum ClassParams {
    LorentzNonneg { coeffs: Vec<Rational> },
    ZerosOutsideDisk { factors: FactorList },
    DerivLorentz { coeffs: Vec<Rational>, constant: Rational },
    DerivZerosOutsideDisk { factors: FactorList, constant: Rational },
    MonotoneRealZerosOutside { factors: FactorList },
    MonotoneOnly { square: Vec<Rational>, lorentz: Vec<Rational>, constant: Rational },
}

/// A generated class member: the polynomial plus its constructive evidence.
#[derive(Debug, Clone)]
pub struct Sample {
    pub poly: RatPoly,
    pub params: ClassParams,
}

impl ClassParams {
    /// Expand the parameters into the polynomial they represent.
    pub fn realize(&self) -> RatPoly {
        match self {
            ClassParams::LorentzNonneg { coeffs } => {
                LorentzForm::new(rint(-1), rint(1), coeffs.clone()).to_power()
            }
            ClassParams::ZerosOutsideDisk { factors }
            | ClassParams::MonotoneRealZerosOutside { factors } => factors.expand(),
            ClassParams::DerivLorentz { coeffs, constant } => {
                let deriv = LorentzForm::new(rint(-1), rint(1), coeffs.clone()).to_power();
                deriv
                    .antiderivative()
                    .add(&RatPoly::constant(constant.clone()))
            }
            ClassParams::DerivZerosOutsideDisk { factors, constant } => factors
                .expand()
                .antiderivative()
                .add(&RatPoly::constant(constant.clone())),
            ClassParams::MonotoneOnly { square, lorentz, constant } => {
                let s = RatPoly::new(square.clone());
                let l = LorentzForm::new(rint(-1), rint(1), lorentz.clone()).to_power();
                s.mul(&s)
                    .mul(&l)
                    .antiderivative()
                    .add(&RatPoly::constant(constant.clone()))
            }
        }
    }

    /// The factor list, when the parameterization carries one.
    pub fn factors(&self) -> Option<&FactorList> {
        match self {
            ClassParams::ZerosOutsideDisk { factors }
            | ClassParams::MonotoneRealZerosOutside { factors } => Some(factors),
            _ => None,
        }
    }

    /// Factor list of the derivative, for derivative-constrained classes.
    pub fn deriv_factors(&self) -> Option<&FactorList> {
        match self {
            ClassParams::DerivZerosOutsideDisk { factors, .. } => Some(factors),
            _ => None,
        }
    }
}

fn rand_rat(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    let dens = [1, 2, 3, 4, 5, 8];
    let den = dens[rng.gen_range(0..dens.len())];
    rat(rng.gen_range(lo * den..=hi * den), den)
}

fn rand_nonneg_rat(rng: &mut ChaCha8Rng, hi: i64) -> Rational {
    let dens = [1, 2, 3, 4, 5, 8];
    let den = dens[rng.gen_range(0..dens.len())];
    rat(rng.gen_range(0..=hi * den), den)
}

fn rand_nonzero_leading(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let c = rand_rat(rng, -3, 3);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Radius ≥ 1 for a root draw; half the draws sit exactly on the unit
/// circle to stress the equality cases, the rest spread over [1, 4].
fn rand_radius(rng: &mut ChaCha8Rng) -> Rational {
    if rng.gen_bool(0.5) {
        rint(1)
    } else {
        rint(1) + rand_nonneg_rat(rng, 3)
    }
}

/// Rational point on the unit circle via the tangent half-angle map.
fn rand_circle_point(rng: &mut ChaCha8Rng) -> (Rational, Rational) {
    loop {
        let t = rand_rat(rng, -2, 2);
        if t.is_zero() {
            continue;
        }
        let t2 = t.clone() * t.clone();
        let den = rint(1) + t2.clone();
        let re = (rint(1) - t2) / den.clone();
        let im = rint(2) * t / den;
        if !im.is_zero() {
            return (re, im);
        }
    }
}

fn rand_factors(rng: &mut ChaCha8Rng, n: usize, real_only: bool) -> FactorList {
    let mut real_roots: Vec<RealRoot> = Vec::new();
    let mut complex_pairs: Vec<ComplexPair> = Vec::new();
    let mut remaining = n;
    // bias toward one-sided real roots so monotone rejection sampling
    // terminates quickly
    let one_sided = real_only && rng.gen_bool(0.5);
    let side = if rng.gen_bool(0.5) { 1 } else { -1 };
    while remaining > 0 {
        if !real_only && remaining >= 2 && rng.gen_bool(0.4) {
            let (re, im) = rand_circle_point(rng);
            let m = rand_radius(rng);
            complex_pairs.push(ComplexPair {
                re: re * m.clone(),
                im: im * m,
                multiplicity: 1,
            });
            remaining -= 2;
        } else {
            let s = if one_sided {
                side
            } else if rng.gen_bool(0.5) {
                1
            } else {
                -1
            };
            let root = rint(s) * rand_radius(rng);
            real_roots.push(RealRoot {
                root,
                multiplicity: 1,
            });
            remaining -= 1;
        }
    }
    FactorList {
        real_roots,
        complex_pairs,
        leading: rand_nonzero_leading(rng),
    }
}

/// Draw a polynomial provably inside `class`, with constructive evidence.
/// Deterministic in `(class, n implicit in the tag, seed)`.
pub fn sample(class: ClassTag, seed: u64) -> Result<Sample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = class.degree_bound();
    assert!(n >= 1, "class degree bound must be at least 1");
    let params = match class {
        ClassTag::LorentzNonneg(d) => {
            let mut coeffs: Vec<Rational> =
                (0..=d).map(|_| rand_nonneg_rat(&mut rng, 4)).collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                coeffs[0] = rint(1);
            }
            ClassParams::LorentzNonneg { coeffs }
        }
        ClassTag::ZerosOutsideDisk(n) => ClassParams::ZerosOutsideDisk {
            factors: rand_factors(&mut rng, n, false),
        },
        ClassTag::DerivLorentz(d) => {
            let mut coeffs: Vec<Rational> =
                (0..d).map(|_| rand_nonneg_rat(&mut rng, 4)).collect();
            if coeffs.iter().all(|c| c.is_zero()) {
                coeffs[0] = rint(1);
            }
            ClassParams::DerivLorentz {
                coeffs,
                constant: rand_rat(&mut rng, -3, 3),
            }
        }
        ClassTag::DerivZerosOutsideDisk(n) => ClassParams::DerivZerosOutsideDisk {
            factors: rand_factors(&mut rng, n - 1, false),
            constant: rand_rat(&mut rng, -3, 3),
        },
        ClassTag::MonotoneRealZerosOutside(n) => {
            let budget = 10_000;
            let mut found = None;
            for _ in 0..budget {
                let factors = rand_factors(&mut rng, n, true);
                let f = factors.expand();
                if monotone_on_interval(&f).is_yes() {
                    found = Some(factors);
                    break;
                }
            }
            match found {
                Some(factors) => ClassParams::MonotoneRealZerosOutside { factors },
                None => return Err(Error::RejectionBudgetExceeded(budget)),
            }
        }
        ClassTag::MonotoneOnly(n) => {
            // f' = s²·L with 2·deg s + deg L = n − 1
            let dprime = n - 1;
            let s_deg = if dprime >= 2 { rng.gen_range(0..=dprime / 2) } else { 0 };
            let l_deg = dprime - 2 * s_deg;
            let mut square: Vec<Rational> =
                (0..=s_deg).map(|_| rand_rat(&mut rng, -3, 3)).collect();
            if square[s_deg].is_zero() {
                square[s_deg] = rint(1);
            }
            let mut lorentz: Vec<Rational> =
                (0..=l_deg).map(|_| rand_nonneg_rat(&mut rng, 4)).collect();
            if lorentz.iter().all(|c| c.is_zero()) {
                lorentz[0] = rint(1);
            }
            // the Lorentz part must genuinely reach degree l_deg so that
            // deg f' = n − 1; force an endpoint coefficient when needed
            if l_deg > 0 && lorentz[0].is_zero() && lorentz[l_deg].is_zero() {
                lorentz[0] = rint(1);
            }
            ClassParams::MonotoneOnly {
                square,
                lorentz,
                constant: rand_rat(&mut rng, -3, 3),
            }
        }
    };
    Ok(Sample {
        poly: params.realize(),
        params,
    })
}

/// Draw a degree-`n` polynomial with all zeros real and outside `(−1,1)`,
/// monotone or not; evidence is carried as a real-only factor list.
pub fn sample_real_outside(n: usize, seed: u64) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = ClassParams::ZerosOutsideDisk {
        factors: rand_factors(&mut rng, n, true),
    };
    Sample {
        poly: params.realize(),
        params,
    }
}

/// Run the membership predicate matching `class` against `f`, using the
/// sample's constructive evidence when available.
pub fn check_membership(class: ClassTag, f: &RatPoly, params: Option<&ClassParams>) -> Result<Membership> {
    match class {
        ClassTag::LorentzNonneg(d) => Ok(in_lorentz_class(f, d)),
        ClassTag::ZerosOutsideDisk(_) => {
            zeros_outside_open_disk(f, params.and_then(|p| p.factors()))
        }
        ClassTag::DerivLorentz(d) => Ok(in_lorentz_class(&f.derivative(), d.saturating_sub(1))),
        ClassTag::DerivZerosOutsideDisk(_) => {
            zeros_outside_open_disk(&f.derivative(), params.and_then(|p| p.deriv_factors()))
        }
        ClassTag::MonotoneRealZerosOutside(_) => {
            let mono = monotone_on_interval(f);
            if !mono.is_yes() {
                return Ok(mono);
            }
            real_zeros_outside_interval(f)
        }
        ClassTag::MonotoneOnly(_) => Ok(monotone_on_interval(f)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PowerPoly;

    fn p(cs: &[i64]) -> RatPoly {
        PowerPoly::from_ints(cs)
    }

    #[test]
    fn lorentz_class_examples() {
        assert!(in_lorentz_class(&p(&[1, 2, 1]), 2).is_yes());
        assert!(!in_lorentz_class(&p(&[0, 1]), 1).is_yes());
        assert!(in_lorentz_class(&p(&[1, 0, 1]), 2).is_yes());
    }

    #[test]
    fn zeros_outside_disk_examples() {
        // (x+1)³ built constructively
        let factors = FactorList {
            real_roots: vec![RealRoot {
                root: rint(-1),
                multiplicity: 3,
            }],
            complex_pairs: vec![],
            leading: rint(1),
        };
        let f = factors.expand();
        let m = zeros_outside_open_disk(&f, Some(&factors)).unwrap();
        assert!(m.is_yes());
        assert_eq!(m.basis, BasisKind::Constructive);
        assert_eq!(m.margin, Some(0.0));

        // x² + 1/4: roots ±i/2 strictly inside
        let g = RatPoly::new(vec![rat(1, 4), rint(0), rint(1)]);
        let m = zeros_outside_open_disk(&g, None).unwrap();
        assert_eq!(m.verdict, VerdictKind::No);

        // x²+1: roots on the circle, closed condition accepts; the numeric
        // path is allowed to answer Indeterminate here
        let factors = FactorList {
            real_roots: vec![],
            complex_pairs: vec![ComplexPair {
                re: rint(0),
                im: rint(1),
                multiplicity: 1,
            }],
            leading: rint(1),
        };
        let m = zeros_outside_open_disk(&p(&[1, 0, 1]), Some(&factors)).unwrap();
        assert!(m.is_yes());
    }

    #[test]
    fn real_zeros_outside_examples() {
        assert!(real_zeros_outside_interval(&p(&[-2, 1, 1]))
            .unwrap()
            .is_yes()); // (x−1)(x+2)
        assert!(!real_zeros_outside_interval(&p(&[1, 0, 1])).unwrap().is_yes());
        // (x−1/2)(x−2)
        let f = RatPoly::new(vec![rint(1), rat(-5, 2), rint(1)]);
        assert!(!real_zeros_outside_interval(&f).unwrap().is_yes());
    }

    #[test]
    fn monotone_examples() {
        assert!(monotone_on_interval(&p(&[0, 0, 0, 1])).is_yes()); // x³
        assert!(!monotone_on_interval(&p(&[0, 0, 1])).is_yes()); // x²
        assert!(monotone_on_interval(&p(&[1, 1]).pow(5)).is_yes());
    }

    #[test]
    fn generators_pass_their_own_predicates() {
        let classes = [
            ClassTag::LorentzNonneg(4),
            ClassTag::ZerosOutsideDisk(4),
            ClassTag::DerivLorentz(4),
            ClassTag::DerivZerosOutsideDisk(4),
            ClassTag::MonotoneRealZerosOutside(3),
            ClassTag::MonotoneOnly(4),
        ];
        for class in classes {
            for seed in 0..50 {
                let s = sample(class, seed).unwrap();
                let m = check_membership(class, &s.poly, Some(&s.params)).unwrap();
                assert!(
                    m.is_yes(),
                    "{class:?} seed {seed} produced a non-member: {:?}",
                    s.poly
                );
            }
        }
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample(ClassTag::ZerosOutsideDisk(5), 42).unwrap();
        let b = sample(ClassTag::ZerosOutsideDisk(5), 42).unwrap();
        assert_eq!(a.poly, b.poly);
    }

    #[test]
    fn deriv_samples_constrain_the_derivative() {
        for seed in 0..20 {
            let s = sample(ClassTag::DerivZerosOutsideDisk(4), seed).unwrap();
            let m = zeros_outside_open_disk(&s.poly.derivative(), s.params.deriv_factors())
                .unwrap();
            assert!(m.is_yes());
        }
    }

    #[test]
    fn numeric_and_constructive_agree_off_the_boundary() {
        for seed in 0..40 {
            let s = sample(ClassTag::ZerosOutsideDisk(4), seed).unwrap();
            let constructive =
                zeros_outside_open_disk(&s.poly, s.params.factors()).unwrap();
            let numeric = zeros_outside_open_disk(&s.poly, None).unwrap();
            if constructive.margin.unwrap_or(0.0) > 1e-6
                && numeric.verdict != VerdictKind::Indeterminate
            {
                assert_eq!(numeric.verdict, constructive.verdict, "seed {seed}");
            }
        }
    }
}
