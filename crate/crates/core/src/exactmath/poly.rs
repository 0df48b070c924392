//! Sparse multivariate polynomials with rational coefficients.
//!
//! Terms are kept in graded-lexicographic order, and printing walks them from
//! the largest monomial down, so the text form is reproducible.

use super::rational::{one, zero, Rational};
use super::upoly::UniPoly;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub type VarNames = Arc<[String]>;

/// `z1, ..., zm`.
pub fn z_vars(m: usize) -> VarNames {
    (1..=m).map(|i| format!("z{i}")).collect::<Vec<_>>().into()
}

/// Exponent vector ordered by total degree first, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: VarNames,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &VarNames) -> Self {
        MultiPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarNames, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial(vec![0; vars.len()]), c);
        p
    }

    /// The variable with index `i` (0-based).
    pub fn var(vars: &VarNames, i: usize) -> Self {
        assert!(i < vars.len(), "variable index out of range");
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(vars);
        p.add_term(Monomial(e), one());
        p
    }

    /// `sum_i coeffs[i] * z_i`.
    pub fn linear(vars: &VarNames, coeffs: &[Rational]) -> Self {
        assert_eq!(coeffs.len(), vars.len());
        let mut p = Self::zero(vars);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    pub fn from_terms(vars: &VarNames, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &VarNames {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the largest monomial to the smallest.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variables"
        );
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(&self.vars, one());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars(), "evaluation point length");
        let mut acc = zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    if x.is_zero() {
                        t = zero();
                        break;
                    }
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Restriction to the line `t -> base + t * dir`.
    pub fn restrict_to_line(&self, base: &[Rational], dir: &[Rational]) -> UniPoly {
        assert_eq!(base.len(), self.nvars());
        assert_eq!(dir.len(), self.nvars());
        let lines: Vec<UniPoly> = base
            .iter()
            .zip(dir)
            .map(|(b, d)| UniPoly::new(vec![b.clone(), d.clone()]))
            .collect();
        let mut cache: Vec<Vec<UniPoly>> = lines.iter().map(|l| vec![UniPoly::constant(one()), l.clone()]).collect();
        let mut out = UniPoly::zero();
        for (m, c) in &self.terms {
            let mut t = UniPoly::constant(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while cache[i].len() <= e as usize {
                    let next = cache[i].last().unwrap() * &lines[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// True when every exponent is even.
    pub fn is_even_in_each_variable(&self) -> bool {
        self.terms.keys().all(|m| m.0.iter().all(|e| e % 2 == 0))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let factors: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    if e == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], e)
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{a}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = MultiPoly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect();
                out.add_term(Monomial(e), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-one())
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::{int, rat};

    #[test]
    fn prints_in_graded_lex_order() {
        let v = z_vars(3);
        let z1 = MultiPoly::var(&v, 0);
        let z2 = MultiPoly::var(&v, 1);
        let z3 = MultiPoly::var(&v, 2);
        let p = &(&(&z1 * &z1) + &z2.scale(&rat(3, 2))) - &(&z3 * &(&z2 * &z2).scale(&int(2)));
        let p = &p - &MultiPoly::constant(&v, int(1));
        assert_eq!(p.to_string(), "-2*z2^2*z3 + z1^2 + 3/2*z2 - 1");
        assert_eq!(MultiPoly::zero(&v).to_string(), "0");
    }

    #[test]
    fn arithmetic_cancels_to_zero() {
        let v = z_vars(2);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let lhs = &(&x + &y) * &(&x - &y);
        let rhs = &(&x * &x) - &(&y * &y);
        assert!((&lhs - &rhs).is_zero());
        assert!(lhs.is_homogeneous(2));
        assert_eq!(lhs.total_degree(), Some(2));
    }

    #[test]
    fn eval_and_line_restriction_agree() {
        let v = z_vars(2);
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let p = &(&x * &y).pow(2) + &x.scale(&int(3));
        let base = [int(1), rat(-1, 2)];
        let dir = [int(2), int(3)];
        let line = p.restrict_to_line(&base, &dir);
        for t in [int(0), int(1), rat(-2, 3)] {
            let pt: Vec<Rational> = base.iter().zip(&dir).map(|(b, d)| b + &t * d).collect();
            assert_eq!(line.eval(&t), p.eval(&pt));
        }
    }
}
