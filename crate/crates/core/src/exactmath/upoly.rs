//! Univariate rational polynomials and real-root counting by Sturm sequences.

use super::rational::{int, one, rat, zero, Rational};
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SturmError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Unbounded,
    Open(Rational),
    Closed(Rational),
}

/// An interval of the real line with independently open, closed or
/// infinite ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
}

impl Interval {
    pub fn real_line() -> Self {
        Interval {
            lo: Bound::Unbounded,
            hi: Bound::Unbounded,
        }
    }

    pub fn open(a: Rational, b: Rational) -> Self {
        Interval {
            lo: Bound::Open(a),
            hi: Bound::Open(b),
        }
    }

    pub fn closed(a: Rational, b: Rational) -> Self {
        Interval {
            lo: Bound::Closed(a),
            hi: Bound::Closed(b),
        }
    }

    /// `(a, b]`
    pub fn left_open(a: Rational, b: Rational) -> Self {
        Interval {
            lo: Bound::Open(a),
            hi: Bound::Closed(b),
        }
    }
}

/// Contains exactly one root: the point `lo` when `lo == hi`, otherwise a
/// root in the half-open interval `(lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(zero(), |acc, c| acc * x + c)
    }

    /// Index of the lowest nonzero coefficient, i.e. the order of vanishing
    /// at zero.
    pub fn order_at_zero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut quot = vec![zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some(l) => {
                let inv = l.recip();
                UniPoly::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> UniPoly {
        let g = self.gcd(&self.derivative());
        if g.degree().unwrap_or(0) == 0 {
            self.clone()
        } else {
            self.div_rem(&g).0
        }
    }

    /// Sturm sequence `p, p', -rem(p, p'), ...` of this polynomial.
    pub fn sturm_sequence(&self) -> Vec<UniPoly> {
        let mut seq = vec![self.clone()];
        if self.is_zero() {
            return seq;
        }
        let d = self.derivative();
        if d.is_zero() {
            return seq;
        }
        seq.push(d);
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-&r);
        }
        seq
    }

    /// Cauchy bound: every real root lies strictly inside `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lead = self.leading().expect("nonzero polynomial").abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| c.abs() / &lead)
            .max()
            .unwrap_or_else(zero);
        max + one()
    }
}

fn sign_changes(signs: impl Iterator<Item = Ordering>) -> usize {
    let mut last = Ordering::Equal;
    let mut n = 0;
    for s in signs.filter(|s| *s != Ordering::Equal) {
        if last != Ordering::Equal && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sign(q: &Rational) -> Ordering {
    q.cmp(&zero())
}

struct Sturm {
    square_free: UniPoly,
    seq: Vec<UniPoly>,
}

impl Sturm {
    fn new(p: &UniPoly) -> Result<Self, SturmError> {
        if p.is_zero() {
            return Err(SturmError::ZeroPolynomial);
        }
        let square_free = p.squarefree();
        let seq = square_free.sturm_sequence();
        Ok(Sturm { square_free, seq })
    }

    fn changes_at(&self, x: &Rational) -> usize {
        sign_changes(self.seq.iter().map(|p| sign(&p.eval(x))))
    }

    fn changes_at_pos_inf(&self) -> usize {
        sign_changes(self.seq.iter().map(|p| sign(p.leading().unwrap())))
    }

    fn changes_at_neg_inf(&self) -> usize {
        sign_changes(self.seq.iter().map(|p| {
            let s = sign(p.leading().unwrap());
            if p.degree().unwrap() % 2 == 1 { s.reverse() } else { s }
        }))
    }

    fn is_root(&self, x: &Rational) -> bool {
        self.square_free.eval(x).is_zero()
    }

    /// Distinct roots in `(a, b]`.
    fn count_left_open(&self, a: &Rational, b: &Rational) -> usize {
        if a >= b {
            return 0;
        }
        self.changes_at(a) - self.changes_at(b)
    }

    fn count(&self, interval: &Interval) -> usize {
        let lo_changes = match &interval.lo {
            Bound::Unbounded => self.changes_at_neg_inf(),
            Bound::Open(a) | Bound::Closed(a) => self.changes_at(a),
        };
        let hi_changes = match &interval.hi {
            Bound::Unbounded => self.changes_at_pos_inf(),
            Bound::Open(b) | Bound::Closed(b) => self.changes_at(b),
        };
        if let (Bound::Open(a) | Bound::Closed(a), Bound::Open(b) | Bound::Closed(b)) =
            (&interval.lo, &interval.hi)
        {
            if a > b {
                return 0;
            }
            if a == b {
                let closed = matches!(interval.lo, Bound::Closed(_)) && matches!(interval.hi, Bound::Closed(_));
                return usize::from(closed && self.is_root(a));
            }
        }
        let mut n = lo_changes - hi_changes;
        if let Bound::Closed(a) = &interval.lo {
            n += usize::from(self.is_root(a));
        }
        if let Bound::Open(b) = &interval.hi {
            n -= usize::from(self.is_root(b));
        }
        n
    }

    fn isolate_left_open(&self, a: Rational, b: Rational, out: &mut Vec<RootInterval>) {
        match self.count_left_open(&a, &b) {
            0 => {}
            1 => out.push(RootInterval { lo: a, hi: b }),
            _ => {
                let mid = (&a + &b) / int(2);
                self.isolate_left_open(a, mid.clone(), out);
                self.isolate_left_open(mid, b, out);
            }
        }
    }
}

/// Number of distinct real roots of `p` in `interval`.
pub fn count_real_roots(p: &UniPoly, interval: &Interval) -> Result<usize, SturmError> {
    Ok(Sturm::new(p)?.count(interval))
}

/// Isolating intervals for the distinct real roots of `p` in `interval`,
/// sorted from left to right.
pub fn isolate_real_roots(p: &UniPoly, interval: &Interval) -> Result<Vec<RootInterval>, SturmError> {
    let st = Sturm::new(p)?;
    if st.square_free.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let bound = st.square_free.root_bound();
    let mut out = Vec::new();
    let lo = match &interval.lo {
        Bound::Unbounded => -bound.clone(),
        Bound::Open(a) => a.clone(),
        Bound::Closed(a) => {
            if st.is_root(a) {
                out.push(RootInterval { lo: a.clone(), hi: a.clone() });
            }
            a.clone()
        }
    };
    let hi = match &interval.hi {
        Bound::Unbounded => bound,
        Bound::Open(b) | Bound::Closed(b) => b.clone(),
    };
    st.isolate_left_open(lo, hi.clone(), &mut out);
    if let Bound::Open(b) = &interval.hi {
        if st.is_root(b) {
            out.retain(|r| r.hi != *b);
        }
    }
    Ok(out)
}

/// Shrinks an isolating interval of `p` by bisection until it is at most
/// `width` wide (or exact).
pub fn refine_root(p: &UniPoly, root: &RootInterval, width: &Rational) -> RootInterval {
    let st = Sturm::new(p).expect("nonzero polynomial");
    let (mut a, mut b) = (root.lo.clone(), root.hi.clone());
    while &b - &a > *width {
        let mid = (&a + &b) / int(2);
        if st.is_root(&mid) {
            return RootInterval { lo: mid.clone(), hi: mid };
        }
        if st.count_left_open(&a, &mid) == 1 {
            b = mid;
        } else {
            a = mid;
        }
    }
    RootInterval { lo: a, hi: b }
}

impl Add for &UniPoly {
    type Output = UniPoly;
    fn add(self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(zero);
                    let b = rhs.coeffs.get(i).cloned().unwrap_or_else(zero);
                    a + b
                })
                .collect(),
        )
    }
}

impl Sub for &UniPoly {
    type Output = UniPoly;
    fn sub(self, rhs: &UniPoly) -> UniPoly {
        self + &(-rhs)
    }
}

impl Neg for &UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl Mul for &UniPoly {
    type Output = UniPoly;
    fn mul(self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::new(out)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let a = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            match i {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if i == 1 { write!(f, "t")? } else { write!(f, "t^{i}")? }
                }
            }
        }
        Ok(())
    }
}

/// `(t - r_1)(t - r_2)...` for rational roots; handy in tests.
pub fn from_roots(roots: &[Rational]) -> UniPoly {
    roots.iter().fold(UniPoly::constant(one()), |acc, r| {
        &acc * &UniPoly::new(vec![-r.clone(), one()])
    })
}

/// Midpoint of an isolating interval, used as a rational sample near the root.
pub fn midpoint(r: &RootInterval) -> Rational {
    (&r.lo + &r.hi) * rat(1, 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn no_roots_for_t2_plus_1() {
        let p = UniPoly::from_i64(&[1, 0, 1]);
        assert_eq!(count_real_roots(&p, &Interval::real_line()), Ok(0));
        assert!(isolate_real_roots(&p, &Interval::real_line()).unwrap().is_empty());
    }

    #[test]
    fn two_roots_for_t2_minus_1() {
        let p = UniPoly::from_i64(&[-1, 0, 1]);
        assert_eq!(count_real_roots(&p, &Interval::real_line()), Ok(2));
        let iso = isolate_real_roots(&p, &Interval::real_line()).unwrap();
        assert_eq!(iso.len(), 2);
        for (r, want) in iso.iter().zip([int(-1), int(1)]) {
            assert!(r.is_exact() && r.lo == want || (r.lo < want && want <= r.hi), "{r:?}");
        }
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        assert_eq!(
            count_real_roots(&UniPoly::zero(), &Interval::real_line()),
            Err(SturmError::ZeroPolynomial)
        );
    }

    #[test]
    fn repeated_roots_count_once() {
        let p = from_roots(&[int(1), int(1), int(-2), rat(1, 3)]);
        assert_eq!(count_real_roots(&p, &Interval::real_line()), Ok(3));
        assert_eq!(count_real_roots(&p, &Interval::closed(int(1), int(1))), Ok(1));
        assert_eq!(count_real_roots(&p, &Interval::open(int(-2), int(1))), Ok(1));
        assert_eq!(count_real_roots(&p, &Interval::closed(int(-2), int(1))), Ok(3));
        assert_eq!(count_real_roots(&p, &Interval::left_open(int(-2), int(1))), Ok(2));
    }

    #[test]
    fn open_upper_bound_drops_root() {
        let p = from_roots(&[int(0), int(2)]);
        let iso = isolate_real_roots(&p, &Interval::open(int(-1), int(2))).unwrap();
        assert_eq!(iso.len(), 1);
        let iso = isolate_real_roots(&p, &Interval::closed(int(0), int(2))).unwrap();
        assert_eq!(iso.len(), 2);
        assert!(iso[0].is_exact());
    }

    #[test]
    fn irrational_roots_are_isolated_and_refined() {
        let p = UniPoly::from_i64(&[-2, 0, 1]);
        let iso = isolate_real_roots(&p, &Interval::real_line()).unwrap();
        assert_eq!(iso.len(), 2);
        let r = refine_root(&p, &iso[1], &rat(1, 1000));
        assert!(&r.hi - &r.lo <= rat(1, 1000));
        assert!(r.lo < rat(1415, 1000) && rat(1414, 1000) < r.hi);
    }

    fn root_set() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((-20i64..20, 1i64..4), 1..6)
            .prop_map(|v| v.into_iter().map(|(n, d)| rat(n, d)).collect())
    }

    proptest! {
        #[test]
        fn counts_are_additive(roots in root_set(), a in -30i64..0, c in 1i64..30, b in -29i64..29) {
            let p = from_roots(&roots);
            let b = rat(2 * b + 1, 7);
            prop_assume!(!p.eval(&b).is_zero());
            let (a, c) = (int(a), int(c));
            prop_assume!(a < b && b < c);
            let whole = count_real_roots(&p, &Interval::closed(a.clone(), c.clone())).unwrap();
            let left = count_real_roots(&p, &Interval::closed(a, b.clone())).unwrap();
            let right = count_real_roots(&p, &Interval::closed(b, c)).unwrap();
            prop_assert_eq!(whole, left + right);
        }

        #[test]
        fn isolation_matches_distinct_roots(roots in root_set()) {
            let p = from_roots(&roots);
            let mut distinct = roots.clone();
            distinct.sort();
            distinct.dedup();
            let iso = isolate_real_roots(&p, &Interval::real_line()).unwrap();
            prop_assert_eq!(iso.len(), distinct.len());
            for (r, x) in iso.iter().zip(&distinct) {
                prop_assert!((r.is_exact() && &r.lo == x) || (&r.lo < x && x <= &r.hi));
            }
        }
    }
}
