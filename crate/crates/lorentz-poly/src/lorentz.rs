//! Lorentz-basis algebra on an interval `[a, b]`.
//!
//! A `LorentzForm` stores coefficients over the basis
//! `(b−x)^j (x−a)^{d−j}`, `j = 0..=d`. Nonnegativity of the coefficient list
//! is a predicate, not a type invariant, so intermediate signed
//! representations stay expressible.

use crate::poly::{FactorList, RatPoly};
use crate::scalar::{binomial, rint, Rational};
use crate::sturm::count_roots_in;
use crate::{Error, Result};
use num_traits::{One, Signed, Zero};

/// Degree-`d` representation of a polynomial over `(b−x)^j (x−a)^{d−j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LorentzForm {
    a: Rational,
    b: Rational,
    coeffs: Vec<Rational>,
}

/// Result of a Lorentz-degree computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LorentzDegreeResult {
    Finite(usize),
    Infinite,
    Unknown { cap_reached: usize },
}

impl LorentzForm {
    /// `coeffs[j]` multiplies `(b−x)^j (x−a)^{d−j}`; `coeffs.len() = d + 1`.
    pub fn new(a: Rational, b: Rational, coeffs: Vec<Rational>) -> Self {
        assert!(a < b, "interval endpoints must satisfy a < b");
        assert!(!coeffs.is_empty(), "a degree-d form has d+1 coefficients");
        LorentzForm { a, b, coeffs }
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.a, &self.b)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn all_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Exact expansion into the power basis.
    pub fn to_power(&self) -> RatPoly {
        let d = self.degree();
        let bx = RatPoly::new(vec![self.b.clone(), rint(-1)]);
        let xa = RatPoly::new(vec![-self.a.clone(), rint(1)]);
        let mut bx_pow = vec![RatPoly::constant(rint(1))];
        let mut xa_pow = vec![RatPoly::constant(rint(1))];
        for j in 1..=d {
            bx_pow.push(bx_pow[j - 1].mul(&bx));
            xa_pow.push(xa_pow[j - 1].mul(&xa));
        }
        let mut out = RatPoly::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&bx_pow[j].mul(&xa_pow[d - j]).scale(c));
        }
        out
    }

    /// Exact evaluation without expanding.
    pub fn eval(&self, x: &Rational) -> Rational {
        let d = self.degree();
        let bx = self.b.clone() - x.clone();
        let xa = x.clone() - self.a.clone();
        let mut acc = Rational::zero();
        let mut bxp = Rational::one();
        // coeffs[j]·(b−x)^j·(x−a)^{d−j}
        for (j, c) in self.coeffs.iter().enumerate() {
            let mut term = c.clone() * bxp.clone();
            for _ in 0..(d - j) {
                term *= xa.clone();
            }
            acc += term;
            bxp *= bx.clone();
        }
        acc
    }
}

/// Solve for the unique degree-`d` Lorentz coefficients of `f` on `[a, b]`.
///
/// The coefficient extraction is the exact closed-form solution of the
/// `(d+1)×(d+1)` linear system relating Lorentz and power coefficients,
/// computed through the substitution `t = (x−a)/(b−a)`.
pub fn from_power(f: &RatPoly, d: usize, a: &Rational, b: &Rational) -> Result<LorentzForm> {
    assert!(a < b);
    if !f.is_zero() && d < f.degree() {
        return Err(Error::DegreeTooSmall {
            needed: f.degree(),
            got: d,
        });
    }
    let width = b.clone() - a.clone();
    // f(a + width·t) = Σ c_k t^k
    let c = f.compose_affine(&width, a);
    let mut width_pow_d = Rational::one();
    for _ in 0..d {
        width_pow_d *= width.clone();
    }
    let mut coeffs = vec![Rational::zero(); d + 1];
    for i in 0..=d {
        // Bernstein coefficient b_i = Σ_k c_k C(i,k)/C(d,k)
        let mut bi = Rational::zero();
        for (k, ck) in c.coeffs().iter().enumerate() {
            if k > i {
                break;
            }
            bi += ck.clone() * binomial(i, k) / binomial(d, k);
        }
        // basis index j counts powers of (b−x): j = d − i
        coeffs[d - i] = bi * binomial(d, i) / width_pow_d.clone();
    }
    Ok(LorentzForm::new(a.clone(), b.clone(), coeffs))
}

/// Rewrite `L` at a higher representation degree using
/// `(b−x) + (x−a) = b−a`. Preserves the polynomial and coefficient
/// nonnegativity.
pub fn elevate(l: &LorentzForm, d_new: usize) -> Result<LorentzForm> {
    if d_new < l.degree() {
        return Err(Error::DegreeDecrease {
            current: l.degree(),
            got: d_new,
        });
    }
    let width = l.b.clone() - l.a.clone();
    let mut coeffs = l.coeffs.clone();
    for _ in l.degree()..d_new {
        let mut next = vec![Rational::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            // (b−x)^j(x−a)^{d−j} = [(b−x)^{j+1}(x−a)^{d−j} + (b−x)^j(x−a)^{d+1−j}]/(b−a)
            let v = c.clone() / width.clone();
            next[j] += v.clone();
            next[j + 1] += v;
        }
        coeffs = next;
    }
    Ok(LorentzForm::new(l.a.clone(), l.b.clone(), coeffs))
}

/// Re-represent `L` on a nested subinterval `[c, e] ⊆ [a, b]` at the same
/// degree, via the linear interpolation identities
/// `x−a = ((e−a)(x−c) + (c−a)(e−x))/(e−c)` and
/// `b−x = ((b−e)(x−c) + (b−c)(e−x))/(e−c)`.
/// Nonnegative coefficients stay nonnegative.
pub fn restrict_interval(l: &LorentzForm, c: &Rational, e: &Rational) -> Result<LorentzForm> {
    if !(l.a <= *c && c < e && *e <= l.b) {
        return Err(Error::BadNesting);
    }
    let w = e.clone() - c.clone();
    // degree-1 forms on [c, e]: index 0 ↦ (x−c), index 1 ↦ (e−x)
    let xa = [
        (e.clone() - l.a.clone()) / w.clone(),
        (c.clone() - l.a.clone()) / w.clone(),
    ];
    let bx = [
        (l.b.clone() - e.clone()) / w.clone(),
        (l.b.clone() - c.clone()) / w.clone(),
    ];
    let d = l.degree();
    let mut xa_pow = vec![vec![Rational::one()]];
    let mut bx_pow = vec![vec![Rational::one()]];
    for j in 1..=d {
        xa_pow.push(convolve(&xa_pow[j - 1], &xa));
        bx_pow.push(convolve(&bx_pow[j - 1], &bx));
    }
    let mut coeffs = vec![Rational::zero(); d + 1];
    for (j, cf) in l.coeffs.iter().enumerate() {
        if cf.is_zero() {
            continue;
        }
        let term = convolve(&bx_pow[j], &xa_pow[d - j]);
        for (k, t) in term.iter().enumerate() {
            coeffs[k] += cf.clone() * t.clone();
        }
    }
    Ok(LorentzForm::new(c.clone(), e.clone(), coeffs))
}

fn convolve(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x.clone() * y.clone();
        }
    }
    out
}

/// Product of two forms on the same interval; degrees add, coefficient lists
/// convolve, nonnegativity is preserved.
pub fn mul_lorentz(l1: &LorentzForm, l2: &LorentzForm) -> Result<LorentzForm> {
    if l1.a != l2.a || l1.b != l2.b {
        return Err(Error::IntervalMismatch);
    }
    Ok(LorentzForm::new(
        l1.a.clone(),
        l1.b.clone(),
        convolve(&l1.coeffs, &l2.coeffs),
    ))
}

/// Constructive nonnegative Lorentz form on `[−1, 1]` for a polynomial whose
/// zeros all lie outside the open unit disk, built factor by factor:
/// `x−α = ((1−α)/2)(x+1) − ((α+1)/2)(1−x)` for real `α`, and
/// `(x−α)(x−ᾱ) = ¼|1+α|²(1−x)² + ½(|α|²−1)(1−x²) + ¼|1−α|²(x+1)²`
/// for a conjugate pair.
///
/// Returns the form together with the sign `s ∈ {−1, +1}` such that the form
/// represents `s·f`.
pub fn lorentz_from_factors(factors: &FactorList) -> Result<(LorentzForm, i32)> {
    let one = rint(1);
    let two = rint(2);
    let four = rint(4);
    let mut sign = if factors.leading.is_negative() { -1 } else { 1 };
    let mut form = LorentzForm::new(rint(-1), rint(1), vec![factors.leading.abs()]);
    for r in &factors.real_roots {
        let alpha = &r.root;
        if alpha.abs() < one {
            return Err(Error::ZeroInsideDisk);
        }
        // coeffs[0] ↦ (x+1), coeffs[1] ↦ (1−x)
        let (factor, s) = if alpha.is_negative() {
            // x−α with α ≤ −1: both coefficients nonnegative
            (
                vec![
                    (one.clone() - alpha.clone()) / two.clone(),
                    -(alpha.clone() + one.clone()) / two.clone(),
                ],
                1,
            )
        } else {
            // α ≥ 1: represent α−x instead
            (
                vec![
                    (alpha.clone() - one.clone()) / two.clone(),
                    (alpha.clone() + one.clone()) / two.clone(),
                ],
                -1,
            )
        };
        let lin = LorentzForm::new(rint(-1), rint(1), factor);
        for _ in 0..r.multiplicity {
            form = mul_lorentz(&form, &lin)?;
            sign *= s;
        }
    }
    for p in &factors.complex_pairs {
        let re = &p.re;
        let im = &p.im;
        let modulus_sq = re.clone() * re.clone() + im.clone() * im.clone();
        if modulus_sq < one {
            return Err(Error::ZeroInsideDisk);
        }
        // |1+α|² = (1+re)² + im²,  |1−α|² = (1−re)² + im²
        let plus = (one.clone() + re.clone()) * (one.clone() + re.clone()) + im.clone() * im.clone();
        let minus =
            (one.clone() - re.clone()) * (one.clone() - re.clone()) + im.clone() * im.clone();
        let quad = LorentzForm::new(
            rint(-1),
            rint(1),
            vec![
                minus / four.clone(),
                (modulus_sq - one.clone()) / two.clone(),
                plus / four.clone(),
            ],
        );
        for _ in 0..p.multiplicity {
            form = mul_lorentz(&form, &quad)?;
        }
    }
    Ok((form, sign))
}

/// Lorentz degree `d(f)` on `[a, b]`: the minimal `d` at which `f`
/// (sign-normalized to be positive at the interval midpoint) has all
/// Lorentz coefficients nonnegative.
///
/// A real root strictly inside `(a, b)` forces `Infinite`; otherwise the
/// scan runs `d = deg f, deg f + 1, …, cap` and gives `Unknown` past the cap.
pub fn lorentz_degree(
    f: &RatPoly,
    a: &Rational,
    b: &Rational,
    cap: usize,
) -> Result<LorentzDegreeResult> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    assert!(cap >= f.degree(), "cap must be at least deg f");
    // normalize sign by the midpoint value, falling back to the first
    // nonzero derivative there
    let mid = (a.clone() + b.clone()) / rint(2);
    let mut g = f.clone();
    let mut probe = f.clone();
    loop {
        let v = probe.eval(&mid);
        if !v.is_zero() {
            if v.is_negative() {
                g = g.neg();
            }
            break;
        }
        probe = probe.derivative();
    }
    if count_roots_in(&g, a, b) > 0 {
        return Ok(LorentzDegreeResult::Infinite);
    }
    for d in g.degree()..=cap {
        let form = from_power(&g, d, a, b)?;
        if form.all_nonnegative() {
            return Ok(LorentzDegreeResult::Finite(d));
        }
    }
    Ok(LorentzDegreeResult::Unknown { cap_reached: cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ComplexPair, PowerPoly, RealRoot};
    use crate::scalar::rat;

    fn p(cs: &[i64]) -> RatPoly {
        PowerPoly::from_ints(cs)
    }

    fn std_form(coeffs: Vec<Rational>) -> LorentzForm {
        LorentzForm::new(rint(-1), rint(1), coeffs)
    }

    #[test]
    fn to_power_examples() {
        // d=1, coeffs (1, 0) → (x+1)
        assert_eq!(std_form(vec![rint(1), rint(0)]).to_power(), p(&[1, 1]));
        // d=2, coeffs (1/2, 0, 1/2) → x²+1
        assert_eq!(
            std_form(vec![rat(1, 2), rint(0), rat(1, 2)]).to_power(),
            p(&[1, 0, 1])
        );
        // d=0 constant
        assert_eq!(std_form(vec![rat(7, 3)]).to_power(), RatPoly::new(vec![rat(7, 3)]));
    }

    #[test]
    fn from_power_examples() {
        let f = from_power(&p(&[1, 0, 1]), 2, &rint(-1), &rint(1)).unwrap();
        assert_eq!(f.coeffs(), &[rat(1, 2), rint(0), rat(1, 2)]);

        let g = from_power(&p(&[1, 1]), 2, &rint(-1), &rint(1)).unwrap();
        assert_eq!(g.coeffs(), &[rat(1, 2), rat(1, 2), rint(0)]);

        let h = from_power(&p(&[0, 1]), 1, &rint(-1), &rint(1)).unwrap();
        assert_eq!(h.coeffs(), &[rat(1, 2), rat(-1, 2)]);

        assert_eq!(
            from_power(&p(&[1, 0, 1]), 1, &rint(-1), &rint(1)),
            Err(Error::DegreeTooSmall { needed: 2, got: 1 })
        );
    }

    #[test]
    fn elevate_examples() {
        let xp1 = std_form(vec![rint(1), rint(0)]);
        assert_eq!(
            elevate(&xp1, 2).unwrap().coeffs(),
            &[rat(1, 2), rat(1, 2), rint(0)]
        );
        let one = std_form(vec![rint(1)]);
        assert_eq!(
            elevate(&one, 2).unwrap().coeffs(),
            &[rat(1, 4), rat(1, 2), rat(1, 4)]
        );
        assert_eq!(elevate(&xp1, 1).unwrap(), xp1);
        assert_eq!(
            elevate(&std_form(vec![rint(1), rint(0), rint(0)]), 1),
            Err(Error::DegreeDecrease { current: 2, got: 1 })
        );
    }

    #[test]
    fn restriction_identities_are_exact() {
        // the interpolation identities behind interval restriction, expanded
        // symbolically for generic nested rational intervals
        let cases = [
            (rint(-1), rint(1), rint(0), rint(1)),
            (rint(-2), rint(3), rat(-1, 2), rat(5, 2)),
            (rat(-7, 3), rat(9, 4), rat(-1, 3), rat(1, 5)),
        ];
        for (a, b, c, e) in cases {
            let w = e.clone() - c.clone();
            let xc = RatPoly::new(vec![-c.clone(), rint(1)]);
            let ex = RatPoly::new(vec![e.clone(), rint(-1)]);
            let lhs_xa = RatPoly::new(vec![-a.clone(), rint(1)]);
            let rhs_xa = xc
                .scale(&((e.clone() - a.clone()) / w.clone()))
                .add(&ex.scale(&((c.clone() - a.clone()) / w.clone())));
            assert_eq!(lhs_xa, rhs_xa);
            let lhs_bx = RatPoly::new(vec![b.clone(), rint(-1)]);
            let rhs_bx = xc
                .scale(&((b.clone() - e.clone()) / w.clone()))
                .add(&ex.scale(&((b.clone() - c.clone()) / w.clone())));
            assert_eq!(lhs_bx, rhs_bx);
        }
    }

    #[test]
    fn quadratic_factor_identity_is_exact() {
        // (x−α)(x−ᾱ) = ¼|1+α|²(1−x)² + ½(|α|²−1)(1−x²) + ¼|1−α|²(x+1)²
        for (re, im) in [
            (rint(0), rint(1)),
            (rint(0), rint(2)),
            (rat(3, 2), rat(-5, 7)),
            (rat(-4, 3), rat(1, 9)),
        ] {
            let lhs = RatPoly::new(vec![
                re.clone() * re.clone() + im.clone() * im.clone(),
                rint(-2) * re.clone(),
                rint(1),
            ]);
            let omx = p(&[1, -1]);
            let xp1 = p(&[1, 1]);
            let m2 = re.clone() * re.clone() + im.clone() * im.clone();
            let plus = (rint(1) + re.clone()) * (rint(1) + re.clone()) + im.clone() * im.clone();
            let minus = (rint(1) - re.clone()) * (rint(1) - re.clone()) + im.clone() * im.clone();
            let rhs = omx
                .pow(2)
                .scale(&(plus / rint(4)))
                .add(&omx.mul(&xp1).scale(&((m2 - rint(1)) / rint(2))))
                .add(&xp1.pow(2).scale(&(minus / rint(4))));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn restrict_interval_examples() {
        // x+1 on [−1,1] restricted to [0,1] → coeffs (1, 2): (x−0) + 2(1−x)...
        // ordering: coeffs[0] ↦ (x−0), coeffs[1] ↦ (1−x)
        let l = std_form(vec![rint(1), rint(0)]);
        let r = restrict_interval(&l, &rint(0), &rint(1)).unwrap();
        assert_eq!(r.to_power(), p(&[1, 1]));
        assert!(r.all_nonnegative());

        // same interval is the identity
        let same = restrict_interval(&l, &rint(-1), &rint(1)).unwrap();
        assert_eq!(same, l);

        // constant 1 at d=1
        let one = std_form(vec![rat(1, 2), rat(1, 2)]);
        let r1 = restrict_interval(&one, &rat(-1, 3), &rat(1, 2)).unwrap();
        assert_eq!(r1.to_power(), p(&[1]));
        assert!(r1.all_nonnegative());

        assert_eq!(
            restrict_interval(&l, &rint(-2), &rint(0)),
            Err(Error::BadNesting)
        );
    }

    #[test]
    fn mul_lorentz_examples() {
        let xp1 = std_form(vec![rint(1), rint(0)]);
        let omx = std_form(vec![rint(0), rint(1)]);
        let prod = mul_lorentz(&xp1, &omx).unwrap();
        assert_eq!(prod.coeffs(), &[rint(0), rint(1), rint(0)]);

        let one = std_form(vec![rint(1)]);
        assert_eq!(mul_lorentz(&xp1, &one).unwrap(), xp1);

        let sq = mul_lorentz(&xp1, &xp1).unwrap();
        assert_eq!(sq.coeffs(), &[rint(1), rint(0), rint(0)]);
        assert_eq!(sq.to_power(), p(&[1, 2, 1]));

        let other = LorentzForm::new(rint(0), rint(1), vec![rint(1), rint(0)]);
        assert_eq!(mul_lorentz(&xp1, &other), Err(Error::IntervalMismatch));
    }

    #[test]
    fn lorentz_from_factors_examples() {
        // 1−x: real root 1, leading −1
        let (form, sign) = lorentz_from_factors(&FactorList {
            real_roots: vec![RealRoot {
                root: rint(1),
                multiplicity: 1,
            }],
            complex_pairs: vec![],
            leading: rint(-1),
        })
        .unwrap();
        assert_eq!(form.coeffs(), &[rint(0), rint(1)]);
        assert_eq!(sign, 1);
        assert_eq!(form.to_power(), p(&[1, -1]));

        // x²+1 from pair α = i
        let (f2, s2) = lorentz_from_factors(&FactorList {
            real_roots: vec![],
            complex_pairs: vec![ComplexPair {
                re: rint(0),
                im: rint(1),
                multiplicity: 1,
            }],
            leading: rint(1),
        })
        .unwrap();
        assert_eq!(s2, 1);
        assert_eq!(f2.coeffs(), &[rat(1, 2), rint(0), rat(1, 2)]);

        // x²+4 from pair α = 2i
        let (f3, _) = lorentz_from_factors(&FactorList {
            real_roots: vec![],
            complex_pairs: vec![ComplexPair {
                re: rint(0),
                im: rint(2),
                multiplicity: 1,
            }],
            leading: rint(1),
        })
        .unwrap();
        assert_eq!(f3.coeffs(), &[rat(5, 4), rat(3, 2), rat(5, 4)]);
        assert_eq!(f3.to_power(), p(&[4, 0, 1]));

        // a root inside the disk is rejected
        assert_eq!(
            lorentz_from_factors(&FactorList {
                real_roots: vec![RealRoot {
                    root: rat(1, 2),
                    multiplicity: 1,
                }],
                complex_pairs: vec![],
                leading: rint(1),
            }),
            Err(Error::ZeroInsideDisk)
        );
    }

    #[test]
    fn lorentz_degree_examples() {
        let m1 = rint(-1);
        let p1 = rint(1);
        assert_eq!(
            lorentz_degree(&p(&[1, 0, 1]), &m1, &p1, 64).unwrap(),
            LorentzDegreeResult::Finite(2)
        );
        assert_eq!(
            lorentz_degree(&p(&[0, 1]), &m1, &p1, 64).unwrap(),
            LorentzDegreeResult::Infinite
        );
        for n in 1..6 {
            assert_eq!(
                lorentz_degree(&p(&[1, 1]).pow(n), &m1, &p1, 64).unwrap(),
                LorentzDegreeResult::Finite(n)
            );
        }
        assert_eq!(
            lorentz_degree(&RatPoly::zero(), &m1, &p1, 0),
            Err(Error::ZeroPolynomial)
        );
        // x² + 1/100: finite, with the scan running well past deg f
        let tight = RatPoly::new(vec![rat(1, 100), rint(0), rint(1)]);
        match lorentz_degree(&tight, &m1, &p1, 2000).unwrap() {
            LorentzDegreeResult::Finite(d) => assert!(d > 2, "expected d > 2, got {d}"),
            other => panic!("expected finite, got {other:?}"),
        }
    }

    #[test]
    fn round_trip_small() {
        let f = p(&[3, -2, 0, 5]);
        for d in 3..8 {
            let l = from_power(&f, d, &rint(-1), &rint(1)).unwrap();
            assert_eq!(l.to_power(), f);
        }
    }

    #[test]
    fn eval_matches_to_power() {
        let l = std_form(vec![rat(1, 3), rat(-2, 5), rint(4), rint(0)]);
        let f = l.to_power();
        for k in -4..5 {
            let x = rat(k, 3);
            assert_eq!(l.eval(&x), f.eval(&x));
        }
    }
}
