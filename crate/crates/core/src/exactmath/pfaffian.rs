//! Pfaffians of skew-symmetric matrices over rationals or polynomials.
//!
//! Convention: `Pf([[0, a], [-a, 0]]) = a`, expanded along the first row as
//! `Pf(A) = sum_{k>=2} (-1)^k a_{1k} Pf(A without rows/cols 1 and k)`.
//! Sub-Pfaffians are memoized on the bitmask of remaining indices.

use super::matrix::RatMatrix;
use super::poly::{MultiPoly, VarNames};
use super::rational::{one, zero, Rational};
use num_traits::Zero;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PfaffianError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not skew-symmetric")]
    NotSkew,
    #[error("Pfaffian of a matrix of odd order {0}")]
    OddOrder(usize),
    #[error("order {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
}

/// Entries a Pfaffian can be taken over.
pub trait PfEntry: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_entry(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl PfEntry for Rational {
    fn zero_like(&self) -> Self {
        zero()
    }
    fn one_like(&self) -> Self {
        one()
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self.clone()
    }
}

impl PfEntry for MultiPoly {
    fn zero_like(&self) -> Self {
        MultiPoly::zero(self.vars())
    }
    fn one_like(&self) -> Self {
        MultiPoly::constant(self.vars(), one())
    }
    fn is_zero_entry(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
}

fn check_skew<T: PfEntry>(rows: &[Vec<T>]) -> Result<usize, PfaffianError> {
    let n = rows.len();
    for r in rows {
        if r.len() != n {
            return Err(PfaffianError::NotSquare { rows: n, cols: r.len() });
        }
    }
    for i in 0..n {
        if !rows[i][i].is_zero_entry() {
            return Err(PfaffianError::NotSkew);
        }
        for j in i + 1..n {
            if rows[i][j] != rows[j][i].negated() {
                return Err(PfaffianError::NotSkew);
            }
        }
    }
    Ok(n)
}

/// Pfaffian of a skew-symmetric matrix given as rows. `template` supplies the
/// zero and unit of the entry type (the order-0 Pfaffian is the unit).
pub fn pfaffian_rows<T: PfEntry>(rows: &[Vec<T>], template: &T) -> Result<T, PfaffianError> {
    let n = check_skew(rows)?;
    if n % 2 == 1 {
        return Err(PfaffianError::OddOrder(n));
    }
    if n > 64 {
        return Err(PfaffianError::TooLarge(n));
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut memo = HashMap::new();
    Ok(pf_mask(rows, full, template, &mut memo))
}

fn pf_mask<T: PfEntry>(rows: &[Vec<T>], mask: u64, template: &T, memo: &mut HashMap<u64, T>) -> T {
    if mask == 0 {
        return template.one_like();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let mut acc = template.zero_like();
    let mut bits = rest;
    let mut position = 0usize;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let a = &rows[i][j];
        if !a.is_zero_entry() {
            let sub = pf_mask(rows, rest & !(1u64 << j), template, memo);
            if !sub.is_zero_entry() {
                let term = a.times(&sub);
                acc = if position.is_multiple_of(2) { acc.plus(&term) } else { acc.minus(&term) };
            }
        }
        position += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}

pub fn pfaffian(m: &RatMatrix) -> Result<Rational, PfaffianError> {
    if !m.is_square() {
        return Err(PfaffianError::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    pfaffian_rows(&m.to_rows(), &zero())
}

pub fn pfaffian_poly(rows: &[Vec<MultiPoly>], vars: &VarNames) -> Result<MultiPoly, PfaffianError> {
    pfaffian_rows(rows, &MultiPoly::zero(vars))
}

/// Determinant of a skew-symmetric polynomial matrix: `Pf^2` in even order,
/// identically zero in odd order.
pub fn skew_determinant_poly(rows: &[Vec<MultiPoly>], vars: &VarNames) -> Result<MultiPoly, PfaffianError> {
    let n = check_skew(rows)?;
    if n % 2 == 1 {
        return Ok(MultiPoly::zero(vars));
    }
    let pf = pfaffian_poly(rows, vars)?;
    Ok(&pf * &pf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::poly::z_vars;
    use crate::exactmath::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn two_by_two_base_case() {
        let v = z_vars(1);
        let a = MultiPoly::var(&v, 0);
        let rows = vec![vec![MultiPoly::zero(&v), a.clone()], vec![-&a, MultiPoly::zero(&v)]];
        assert_eq!(pfaffian_poly(&rows, &v).unwrap(), a);
    }

    #[test]
    fn errors() {
        let odd = RatMatrix::zeros(3, 3);
        assert_eq!(pfaffian(&odd), Err(PfaffianError::OddOrder(3)));
        let not_skew = RatMatrix::from_i64(2, 2, &[0, 1, 1, 0]);
        assert_eq!(pfaffian(&not_skew), Err(PfaffianError::NotSkew));
        let diag = RatMatrix::from_i64(2, 2, &[1, 0, 0, -1]);
        assert_eq!(pfaffian(&diag), Err(PfaffianError::NotSkew));
    }

    #[test]
    fn four_by_four_formula() {
        // Pf = a12 a34 - a13 a24 + a14 a23
        let (a12, a13, a14, a23, a24, a34) = (2, 3, 5, 7, 11, 13);
        let m = RatMatrix::from_i64(
            4,
            4,
            &[
                0, a12, a13, a14, -a12, 0, a23, a24, -a13, -a23, 0, a34, -a14, -a24, -a34, 0,
            ],
        );
        assert_eq!(pfaffian(&m).unwrap(), int(a12 * a34 - a13 * a24 + a14 * a23));
    }

    fn skew(n: usize) -> impl Strategy<Value = RatMatrix> {
        proptest::collection::vec((-5i64..6, 1i64..4), n * (n - 1) / 2).prop_map(move |v| {
            let mut m = RatMatrix::zeros(n, n);
            let mut it = v.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let (a, b) = it.next().unwrap();
                    m[(i, j)] = rat(a, b);
                    m[(j, i)] = -rat(a, b);
                }
            }
            m
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn pf_squared_is_det(m in prop_oneof![skew(2), skew(4), skew(6), skew(8)]) {
            let pf = pfaffian(&m).unwrap();
            prop_assert_eq!(&pf * &pf, m.determinant());
        }
    }
}
