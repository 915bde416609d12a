//! Sturm-sequence real root counting and isolation, exact over the rationals.
//!
//! Counting runs on the square-free part so it is multiplicity-blind;
//! multiplicities are recovered from a Yun square-free decomposition.

use crate::poly::RatPoly;
use crate::scalar::{rint, Rational};
#[cfg(test)]
use crate::scalar::rat;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// An open interval `(lo, hi)` containing exactly one distinct real root of
/// the polynomial it was produced for, together with that root's multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootBracket {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
}

impl RootBracket {
    pub fn parity(&self) -> Parity {
        if self.multiplicity % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// Root-search domain.
#[derive(Debug, Clone)]
pub enum Interval {
    Whole,
    Open(Rational, Rational),
}

fn sign(x: &Rational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a (square-free) polynomial.
fn sturm_chain(f: &RatPoly) -> Vec<RatPoly> {
    let mut chain = vec![f.clone(), f.derivative()];
    loop {
        let n = chain.len();
        if chain[n - 1].is_zero() {
            chain.pop();
            return chain;
        }
        if chain[n - 1].degree() == 0 {
            return chain;
        }
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        if r.is_zero() {
            return chain;
        }
        chain.push(r.neg());
    }
}

fn variations_at(chain: &[RatPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0;
    for p in chain {
        let s = sign(&p.eval(x));
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Distinct real roots of `f` strictly inside `(lo, hi)`.
pub fn count_roots_in(f: &RatPoly, lo: &Rational, hi: &Rational) -> usize {
    assert!(!f.is_zero(), "root counting requires a nonzero polynomial");
    assert!(lo < hi);
    let mut sf = f.square_free_part().monic();
    // deflate roots sitting exactly at the endpoints
    for e in [lo, hi] {
        if sf.eval(e).is_zero() {
            let lin = RatPoly::new(vec![-e.clone(), rint(1)]);
            sf = sf.div_rem(&lin).0;
        }
    }
    if sf.degree() == 0 {
        return 0;
    }
    let chain = sturm_chain(&sf);
    variations_at(&chain, lo) - variations_at(&chain, hi)
}

/// Distinct real roots of `f` on the whole line.
pub fn count_real_roots(f: &RatPoly) -> usize {
    assert!(!f.is_zero());
    let sf = f.square_free_part();
    if sf.degree() == 0 {
        return 0;
    }
    let bound = root_bound(&sf);
    count_roots_in(&sf, &(-bound.clone()), &bound)
}

/// Cauchy bound: every real root lies strictly inside `(-bound, bound)`.
pub fn root_bound(f: &RatPoly) -> Rational {
    let lead = f.leading();
    let mut m = Rational::zero();
    for c in f.coeffs() {
        let v = (c.clone() / lead.clone()).abs();
        if v > m {
            m = v;
        }
    }
    m + rint(2)
}

/// Yun square-free decomposition: returns `(g_i, i)` with `f = lead · Π g_i^i`,
/// the `g_i` monic, square-free, and pairwise coprime.
pub fn square_free_decomposition(f: &RatPoly) -> Vec<(RatPoly, usize)> {
    assert!(!f.is_zero());
    if f.degree() == 0 {
        return Vec::new();
    }
    let f = f.monic();
    let df = f.derivative();
    let g = f.gcd(&df);
    if g.degree() == 0 {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let mut c = f.div_rem(&g).0;
    let mut d = df.div_rem(&g).0.sub(&c.derivative());
    let mut i = 1;
    while c.degree() > 0 {
        let p = c.gcd(&d);
        if p.degree() > 0 {
            out.push((p.clone(), i));
        }
        c = c.div_rem(&p).0;
        d = d.div_rem(&p).0.sub(&c.derivative());
        i += 1;
    }
    out
}

/// Isolate the distinct real roots of `f` in `iv` into disjoint open brackets.
pub fn sturm_isolate(f: &RatPoly, iv: &Interval) -> Vec<RootBracket> {
    assert!(!f.is_zero(), "cannot isolate roots of the zero polynomial");
    if f.degree() == 0 {
        return Vec::new();
    }
    let mut sf = f.square_free_part().monic();
    let (lo, hi) = match iv {
        Interval::Whole => {
            let b = root_bound(&sf);
            (-b.clone(), b)
        }
        Interval::Open(a, b) => (a.clone(), b.clone()),
    };
    assert!(lo < hi);
    for e in [&lo, &hi] {
        if sf.eval(e).is_zero() {
            let lin = RatPoly::new(vec![-e.clone(), rint(1)]);
            sf = sf.div_rem(&lin).0;
        }
    }
    if sf.degree() == 0 {
        return Vec::new();
    }
    let chain = sturm_chain(&sf);
    let count = |l: &Rational, h: &Rational| variations_at(&chain, l) - variations_at(&chain, h);
    let mut raw: Vec<(Rational, Rational)> = Vec::new();
    isolate_rec(&sf, &count, lo, hi, &mut raw);
    raw.sort_by(|a, b| a.0.cmp(&b.0));

    let decomp = square_free_decomposition(f);
    raw.into_iter()
        .map(|(l, h)| {
            let multiplicity = decomp
                .iter()
                .find(|(g, _)| g.degree() > 0 && count_roots_in(g, &l, &h) == 1)
                .map(|(_, i)| *i)
                .unwrap_or(1);
            RootBracket {
                lo: l,
                hi: h,
                multiplicity,
            }
        })
        .collect()
}

fn isolate_rec(
    sf: &RatPoly,
    count: &impl Fn(&Rational, &Rational) -> usize,
    lo: Rational,
    hi: Rational,
    out: &mut Vec<(Rational, Rational)>,
) {
    let c = count(&lo, &hi);
    if c == 0 {
        return;
    }
    if c == 1 {
        out.push((lo, hi));
        return;
    }
    let mid = (lo.clone() + hi.clone()) / rint(2);
    if sf.eval(&mid).is_zero() {
        // midpoint is itself a root; carve a private bracket around it
        let mut delta = (hi.clone() - lo.clone()) / rint(4);
        loop {
            let l = mid.clone() - delta.clone();
            let h = mid.clone() + delta.clone();
            if !sf.eval(&l).is_zero() && !sf.eval(&h).is_zero() && count(&l, &h) == 1 {
                out.push((l.clone(), h.clone()));
                isolate_rec(sf, count, lo, l, out);
                isolate_rec(sf, count, h, hi, out);
                return;
            }
            delta /= rint(2);
        }
    }
    isolate_rec(sf, count, lo.clone(), mid.clone(), out);
    isolate_rec(sf, count, mid, hi, out);
}

/// Outcome of bracket refinement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Refined {
    /// The bracket collapsed onto an exact rational root.
    Exact(Rational),
    /// Narrowed bracket of width `< target`, still containing the root.
    Bracket(Rational, Rational),
}

/// Bisect a bracket known to contain exactly one simple root of `sf`
/// (sign change across the bracket) until the width drops below `target`
/// or the root is hit exactly.
pub fn refine_root(sf: &RatPoly, lo: &Rational, hi: &Rational, target: &Rational) -> Refined {
    let mut l = lo.clone();
    let mut h = hi.clone();
    // the root inside the bracket is simple, but sf may carry additional
    // roots exactly at the endpoints; divide those out first
    let mut sf = sf.clone();
    for e in [&l, &h] {
        while sf.degree() > 1 && sf.eval(e).is_zero() {
            let lin = RatPoly::new(vec![-e.clone(), rint(1)]);
            sf = sf.div_rem(&lin).0;
        }
    }
    let sf = &sf;
    let mut sl = sign(&sf.eval(&l));
    debug_assert!(sl != 0 && sign(&sf.eval(&h)) != 0);
    while h.clone() - l.clone() >= *target {
        let mid = (l.clone() + h.clone()) / rint(2);
        let sm = sign(&sf.eval(&mid));
        if sm == 0 {
            return Refined::Exact(mid);
        }
        if sm == sl {
            l = mid;
        } else {
            h = mid;
        }
        sl = sign(&sf.eval(&l));
    }
    Refined::Bracket(l, h)
}
