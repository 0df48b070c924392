//! Brute-force oracles, independent of the production solution spaces.
#![allow(dead_code)]

use nilmag::catalog::{build, build_str, CatalogId};
use nilmag::exactmath::matrix::RatMatrix;
use nilmag::exactmath::rational::{one, zero, Rational};
use nilmag::magnetic::{LorentzForce, SolutionSpace};
use nilmag::nilalgebra::NilAlgebra;
use num_traits::Zero;

/// `[e_a, e_b]` on the full basis of `n`, as a vector of length `dim n`.
fn full_bracket(a: &NilAlgebra, x: usize, y: usize) -> Vec<Rational> {
    let (n, d) = (a.dim_v(), a.dim());
    let mut out = vec![zero(); d];
    if x < n && y < n && x != y {
        for (t, c) in a.basis_bracket(x, y).into_iter().enumerate() {
            out[n + t] = c;
        }
    }
    out
}

/// Unit skew maps `E_ab - E_ba`, `a > b`, in coordinate order.
fn skew_units(d: usize) -> Vec<RatMatrix> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..i {
            let mut e = RatMatrix::zeros(d, d);
            e[(i, j)] = one();
            e[(j, i)] = -one();
            out.push(e);
        }
    }
    out
}

/// Nullspace of the raw cyclic condition
/// `<F U, [V, W]> + <F V, [W, U]> + <F W, [U, V]> = 0` over all basis triples
/// and all skew `F`.
pub fn clos_oracle(a: &NilAlgebra) -> SolutionSpace {
    let (n, m, d) = (a.dim_v(), a.dim_z(), a.dim());
    let units = skew_units(d);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for x in 0..d {
        for y in x + 1..d {
            for w in y + 1..d {
                let (byw, bwx, bxy) = (full_bracket(a, y, w), full_bracket(a, w, x), full_bracket(a, x, y));
                let row: Vec<Rational> = units
                    .iter()
                    .map(|f| {
                        let term = |u: usize, b: &[Rational]| -> Rational {
                            (0..d).filter(|&k| !b[k].is_zero()).map(|k| &f[(k, u)] * &b[k]).sum()
                        };
                        term(x, &byw) + term(y, &bwx) + term(w, &bxy)
                    })
                    .collect();
                if row.iter().any(|c| !c.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let forces: Vec<LorentzForce> = if rows.is_empty() {
        units.into_iter().map(|u| LorentzForce::new(n, m, u).unwrap()).collect()
    } else {
        let sys = RatMatrix::from_rows(rows);
        sys.nullspace()
            .iter()
            .map(|c| LorentzForce::from_coordinates(n, m, c))
            .collect()
    };
    SolutionSpace::spanned_by(n, m, &forces)
}

/// Type-I forms subject to the raw (C1) constraints `<C Z_t, [V_i, V_j]> = 0`
/// for every `t` and every bracket.
pub fn c1_oracle(a: &NilAlgebra) -> SolutionSpace {
    let (n, m) = (a.dim_v(), a.dim_z());
    let mut unknowns = Vec::new();
    for i in 0..n {
        for j in 0..i {
            let mut f = RatMatrix::zeros(n + m, n + m);
            f[(i, j)] = one();
            f[(j, i)] = -one();
            unknowns.push(f);
        }
    }
    for i in 0..m {
        for j in 0..i {
            let mut f = RatMatrix::zeros(n + m, n + m);
            f[(n + i, n + j)] = one();
            f[(n + j, n + i)] = -one();
            unknowns.push(f);
        }
    }
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for t in 0..m {
        for c in a.brackets().values() {
            rows.push(
                unknowns
                    .iter()
                    .map(|f| (0..m).map(|s| &f[(n + s, n + t)] * &c[s]).sum())
                    .collect(),
            );
        }
    }
    let combos: Vec<Vec<Rational>> = if rows.is_empty() || unknowns.is_empty() {
        (0..unknowns.len())
            .map(|k| (0..unknowns.len()).map(|l| if k == l { one() } else { zero() }).collect())
            .collect()
    } else {
        RatMatrix::from_rows(rows).nullspace()
    };
    let forces: Vec<LorentzForce> = combos
        .iter()
        .map(|x| {
            let mut f = RatMatrix::zeros(n + m, n + m);
            for (c, u) in x.iter().zip(&unknowns) {
                if !c.is_zero() {
                    f = &f + &u.scale(c);
                }
            }
            LorentzForce::new(n, m, f).unwrap()
        })
        .collect();
    SolutionSpace::spanned_by(n, m, &forces)
}

pub const H_TYPE_IDS: [&str; 12] = [
    "heisenberg:1",
    "complexheis",
    "quatheis:1",
    "divi:C",
    "divi:H",
    "divi:O",
    "divii:R",
    "divii:C",
    "divii:H",
    "divii:O",
    "oct87",
    "oct168",
];

/// Every catalog family with a few parameter values.
pub fn all_catalog() -> Vec<(String, NilAlgebra)> {
    let mut ids: Vec<String> = CatalogId::listing().iter().map(ToString::to_string).collect();
    ids.extend(["heisenberg:2", "heisenberg:3", "quatheis:2"].map(String::from));
    ids.into_iter().map(|s| (s.clone(), build_str(&s).unwrap())).collect()
}

pub fn oct87() -> NilAlgebra {
    build(CatalogId::Oct87).unwrap()
}
