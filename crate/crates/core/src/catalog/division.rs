//! The normed real division algebras R, C, H, O by Cayley-Dickson doubling,
//! `(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))`.
//!
//! Basis of the double of `A` is `(e_k, 0)` followed by `(0, e_k)`, so
//! H = (1, i, j, k) with `j = (0, 1)` and `k = (0, i)`.

use crate::exactmath::rational::{one, zero, Rational};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DivisionName {
    R,
    C,
    H,
    O,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown division algebra {0:?} (expected R, C, H or O)")]
pub struct UnknownAlgebra(pub String);

impl FromStr for DivisionName {
    type Err = UnknownAlgebra;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" => Ok(DivisionName::R),
            "C" => Ok(DivisionName::C),
            "H" => Ok(DivisionName::H),
            "O" => Ok(DivisionName::O),
            _ => Err(UnknownAlgebra(s.to_string())),
        }
    }
}

impl fmt::Display for DivisionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DivisionName::R => "R",
            DivisionName::C => "C",
            DivisionName::H => "H",
            DivisionName::O => "O",
        };
        f.write_str(s)
    }
}

impl DivisionName {
    pub fn dim(self) -> usize {
        match self {
            DivisionName::R => 1,
            DivisionName::C => 2,
            DivisionName::H => 4,
            DivisionName::O => 8,
        }
    }
}

fn conj(a: &[Rational]) -> Vec<Rational> {
    a.iter()
        .enumerate()
        .map(|(k, x)| if k == 0 { x.clone() } else { -x.clone() })
        .collect()
}

fn add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn cd_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len();
    if n == 1 {
        return vec![&a[0] * &b[0]];
    }
    let h = n / 2;
    let (p, q) = a.split_at(h);
    let (r, s) = b.split_at(h);
    let left = sub(&cd_mul(p, r), &cd_mul(&conj(s), q));
    let right = add(&cd_mul(s, p), &cd_mul(q, &conj(r)));
    [left, right].concat()
}

/// Multiplication table on the standard basis: `e_i e_j = sign * e_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionAlgebra {
    name: DivisionName,
    table: Vec<Vec<(i8, usize)>>,
}

impl DivisionAlgebra {
    pub fn new(name: DivisionName) -> Self {
        let d = name.dim();
        let basis = |k: usize| -> Vec<Rational> { (0..d).map(|i| if i == k { one() } else { zero() }).collect() };
        let table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let p = cd_mul(&basis(i), &basis(j));
                        let (k, c) = p
                            .iter()
                            .enumerate()
                            .find(|(_, c)| **c != zero())
                            .expect("basis products are nonzero");
                        (if *c == one() { 1 } else { -1 }, k)
                    })
                    .collect()
            })
            .collect();
        DivisionAlgebra { name, table }
    }

    pub fn name(&self) -> DivisionName {
        self.name
    }

    pub fn dim(&self) -> usize {
        self.name.dim()
    }

    pub fn basis_product(&self, i: usize, j: usize) -> (i8, usize) {
        self.table[i][j]
    }

    pub fn basis(&self, k: usize) -> Vec<Rational> {
        (0..self.dim()).map(|i| if i == k { one() } else { zero() }).collect()
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let d = self.dim();
        assert_eq!(a.len(), d);
        assert_eq!(b.len(), d);
        let mut out = vec![zero(); d];
        for (i, x) in a.iter().enumerate() {
            if *x == zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if *y == zero() {
                    continue;
                }
                let (s, k) = self.table[i][j];
                let p = x * y;
                if s > 0 {
                    out[k] += p;
                } else {
                    out[k] -= p;
                }
            }
        }
        out
    }

    pub fn conj(&self, a: &[Rational]) -> Vec<Rational> {
        conj(a)
    }

    pub fn norm2(&self, a: &[Rational]) -> Rational {
        a.iter().map(|x| x * x).sum()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        match self.name {
            DivisionName::R => vec!["1".into()],
            DivisionName::C => vec!["1".into(), "i".into()],
            DivisionName::H => ["1", "i", "j", "k"].iter().map(|s| s.to_string()).collect(),
            DivisionName::O => (0..8).map(|k| format!("e{k}")).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn quaternion_units() {
        let h = DivisionAlgebra::new(DivisionName::H);
        assert_eq!(h.basis_product(1, 2), (1, 3)); // ij = k
        assert_eq!(h.basis_product(2, 1), (-1, 3)); // ji = -k
        assert_eq!(h.basis_product(1, 1), (-1, 0));
    }

    #[test]
    fn complex_product() {
        let c = DivisionAlgebra::new(DivisionName::C);
        let p = c.mul(&[rat(2, 1), rat(3, 1)], &[rat(5, 1), rat(7, 1)]);
        assert_eq!(p, vec![rat(2 * 5 - 3 * 7, 1), rat(2 * 7 + 3 * 5, 1)]);
    }

    #[test]
    fn octonions_are_not_associative() {
        let o = DivisionAlgebra::new(DivisionName::O);
        let (e1, e2, e4) = (o.basis(1), o.basis(2), o.basis(4));
        let lhs = o.mul(&o.mul(&e1, &e2), &e4);
        let rhs = o.mul(&e1, &o.mul(&e2, &e4));
        assert_ne!(lhs, rhs);
        assert_eq!(lhs, rhs.iter().map(|x| -x.clone()).collect::<Vec<_>>());
    }

    fn elem(d: usize) -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec((-6i64..7, 1i64..4), d).prop_map(|v| v.into_iter().map(|(a, b)| rat(a, b)).collect())
    }

    fn algebra() -> impl Strategy<Value = DivisionAlgebra> {
        prop_oneof![
            Just(DivisionName::R),
            Just(DivisionName::C),
            Just(DivisionName::H),
            Just(DivisionName::O)
        ]
        .prop_map(DivisionAlgebra::new)
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative((alg, a, b) in algebra().prop_flat_map(|alg| {
            let d = alg.dim();
            (Just(alg), elem(d), elem(d))
        })) {
            let ab = alg.mul(&a, &b);
            prop_assert_eq!(alg.norm2(&ab), alg.norm2(&a) * alg.norm2(&b));
            // conj(ab) = conj(b) conj(a)
            prop_assert_eq!(alg.conj(&ab), alg.mul(&alg.conj(&b), &alg.conj(&a)));
            // a conj(a) = |a|^2
            let mut n = vec![zero(); alg.dim()];
            n[0] = alg.norm2(&a);
            prop_assert_eq!(alg.mul(&a, &alg.conj(&a)), n);
        }

        #[test]
        fn metric_identities((alg, u, v, w) in algebra().prop_flat_map(|alg| {
            let d = alg.dim();
            (Just(alg), elem(d), elem(d), elem(d))
        })) {
            let dot = crate::exactmath::matrix::dot;
            // Re(vw) = Re(wv)
            prop_assert_eq!(&alg.mul(&v, &w)[0], &alg.mul(&w, &v)[0]);
            // Re((vw)u) = Re(v(wu))
            prop_assert_eq!(&alg.mul(&alg.mul(&v, &w), &u)[0], &alg.mul(&v, &alg.mul(&w, &u))[0]);
            // <vu, w> = <v, w conj(u)> and <uv, w> = <v, conj(u) w>
            prop_assert_eq!(dot(&alg.mul(&v, &u), &w), dot(&v, &alg.mul(&w, &alg.conj(&u))));
            prop_assert_eq!(dot(&alg.mul(&u, &v), &w), dot(&v, &alg.mul(&alg.conj(&u), &w)));
        }

        #[test]
        fn octonions_are_alternative(a in elem(8), b in elem(8)) {
            let o = DivisionAlgebra::new(DivisionName::O);
            prop_assert_eq!(o.mul(&o.mul(&a, &a), &b), o.mul(&a, &o.mul(&a, &b)));
            prop_assert_eq!(o.mul(&o.mul(&a, &b), &b), o.mul(&a, &o.mul(&b, &b)));
        }
    }
}
