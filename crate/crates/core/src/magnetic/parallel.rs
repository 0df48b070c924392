//! Parallel (uniform) forces and kernels of 2-forms.

use super::{c2_system, skew_unit, LorentzForce, MagneticError, SolutionSpace};
use crate::exactmath::matrix::{dot, rank_of_vectors, span_basis, RatMatrix};
use crate::exactmath::rational::{zero, Rational};
use crate::nilalgebra::NilAlgebra;
use num_traits::Zero;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParallelKind {
    TypeI,
    TypeII,
}

fn combine(js: &[RatMatrix], z: &[Rational], n: usize) -> RatMatrix {
    let mut out = RatMatrix::zeros(n, n);
    for (j, c) in js.iter().zip(z) {
        if !c.is_zero() {
            out = &out + &j.scale(c);
        }
    }
    out
}

fn push_matrix(out: &mut Vec<Rational>, m: &RatMatrix) {
    out.extend(m.entries().iter().cloned());
}

/// Stacked conditions for a type-I force `A + C`: `A j_Z = j_Z A`,
/// `A j_Z = j_{C Z}`, `C [V, W] = [V, A W]`, `C Z` orthogonal to `C(n)`.
fn type_one_conditions(a: &NilAlgebra, js: &[RatMatrix], commutator: &[Vec<Rational>], f: &LorentzForce) -> Vec<Rational> {
    let (n, m) = (a.dim_v(), a.dim_z());
    let (am, cm) = (f.a_block(), f.c_block());
    let mut out = Vec::new();
    for j in js {
        push_matrix(&mut out, &(&(&am * j) - &(j * &am)));
    }
    for (t, j) in js.iter().enumerate() {
        let cz = cm.column(t);
        push_matrix(&mut out, &(&(&am * j) - &combine(js, &cz, n)));
    }
    for i in 0..n {
        for k in 0..n {
            let lhs = cm.mul_vec(&a.basis_bracket(i, k));
            let mut rhs = vec![zero(); m];
            for l in 0..n {
                let c = &am[(l, k)];
                if !c.is_zero() {
                    for (r, b) in rhs.iter_mut().zip(a.basis_bracket(i, l)) {
                        *r += c * b;
                    }
                }
            }
            out.extend(lhs.into_iter().zip(rhs).map(|(x, y)| x - y));
        }
    }
    for t in 0..m {
        let cz = cm.column(t);
        for w in commutator {
            out.push(dot(&cz, w));
        }
    }
    out
}

/// Stacked conditions for a type-II force with block `B`: `B j_Z = 0`,
/// `B j_Z = ad(F Z)`, `j_{F V} = F ad(V)`, `j_Z F Z' = 0`, and (C2).
fn type_two_conditions(a: &NilAlgebra, js: &[RatMatrix], c2: &RatMatrix, f: &LorentzForce) -> Vec<Rational> {
    let (n, m) = (a.dim_v(), a.dim_z());
    let b = f.b_block();
    let bt = b.transpose();
    let mut out = Vec::new();
    let f_of_z = |t: usize| -> Vec<Rational> { b.row(t).iter().map(|x| -x.clone()).collect() };
    for j in js {
        push_matrix(&mut out, &(&b * j));
    }
    for (t, j) in js.iter().enumerate() {
        let bj = &b * j;
        let fz = f_of_z(t);
        for i in 0..n {
            let mut ad = vec![zero(); m];
            for (s, c) in fz.iter().enumerate() {
                if !c.is_zero() {
                    for (r, x) in ad.iter_mut().zip(a.basis_bracket(s, i)) {
                        *r += c * x;
                    }
                }
            }
            out.extend(bj.column(i).into_iter().zip(ad).map(|(x, y)| x - y));
        }
    }
    for i in 0..n {
        let jf = combine(js, &b.column(i), n);
        for k in 0..n {
            let rhs: Vec<Rational> = bt.mul_vec(&a.basis_bracket(i, k)).into_iter().map(|x| -x).collect();
            out.extend(jf.column(k).into_iter().zip(rhs).map(|(x, y)| x - y));
        }
    }
    for j in js {
        for t in 0..m {
            out.extend(j.mul_vec(&f_of_z(t)));
        }
    }
    let coords: Vec<Rational> = (0..m).flat_map(|t| b.row(t).to_vec()).collect();
    out.extend(c2.mul_vec(&coords));
    out
}

/// Skew forces satisfying the parallel-transport conditions of the given
/// type together with closedness, as an exact nullspace.
pub fn parallel_space(a: &NilAlgebra, kind: ParallelKind) -> SolutionSpace {
    let (n, m) = (a.dim_v(), a.dim_z());
    let js: Vec<RatMatrix> = (0..m).map(|t| a.j_basis(t)).collect();
    let mut unknowns = Vec::new();
    match kind {
        ParallelKind::TypeI => {
            for i in 0..n {
                for j in i + 1..n {
                    let mut mat = RatMatrix::zeros(n + m, n + m);
                    mat.set_block(0, 0, &skew_unit(n, i, j));
                    unknowns.push(LorentzForce { n, m, matrix: mat });
                }
            }
            for i in 0..m {
                for j in i + 1..m {
                    let mut mat = RatMatrix::zeros(n + m, n + m);
                    mat.set_block(n, n, &skew_unit(m, i, j));
                    unknowns.push(LorentzForce { n, m, matrix: mat });
                }
            }
        }
        ParallelKind::TypeII => {
            for t in 0..m {
                for s in 0..n {
                    let mut b = RatMatrix::zeros(m, n);
                    b[(t, s)] = Rational::from_integer(1.into());
                    unknowns.push(LorentzForce::from_b(&b));
                }
            }
        }
    }
    let columns: Vec<Vec<Rational>> = match kind {
        ParallelKind::TypeI => {
            let commutator = a.center_split().commutator_basis;
            unknowns.iter().map(|f| type_one_conditions(a, &js, &commutator, f)).collect()
        }
        ParallelKind::TypeII => {
            let c2 = c2_system(a).matrix;
            unknowns.iter().map(|f| type_two_conditions(a, &js, &c2, f)).collect()
        }
    };
    if unknowns.is_empty() {
        return SolutionSpace::spanned_by(n, m, &[]);
    }
    let rows = columns[0].len();
    let system = RatMatrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone());
    let forces: Vec<LorentzForce> = system
        .nullspace()
        .iter()
        .map(|x| {
            x.iter()
                .zip(&unknowns)
                .filter(|(c, _)| !c.is_zero())
                .fold(LorentzForce::zero(n, m), |acc, (c, f)| &acc + &f.scale(c))
        })
        .collect();
    SolutionSpace::spanned_by(n, m, &forces)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormKernel {
    /// Reduced basis of `{X : F X = 0}` in `n`.
    pub basis: Vec<Vec<Rational>>,
    /// `dim(ker F  ∩ z)`.
    pub center_meet: usize,
    /// Whether the kernel is an abelian subalgebra; only evaluated when the
    /// kernel meets `z` trivially.
    pub abelian: Option<bool>,
}

pub fn form_kernel(a: &NilAlgebra, f: &LorentzForce) -> Result<FormKernel, MagneticError> {
    if f.dim_v() != a.dim_v() || f.dim_z() != a.dim_z() {
        return Err(MagneticError::DimensionMismatch {
            expected: a.dim(),
            got: f.dim_v() + f.dim_z(),
        });
    }
    let n = a.dim_v();
    let basis = span_basis(a.dim(), &f.matrix().nullspace());
    let v_parts: Vec<Vec<Rational>> = basis.iter().map(|x| x[..n].to_vec()).collect();
    let center_meet = basis.len() - rank_of_vectors(&v_parts);
    let abelian = (center_meet == 0).then(|| a.is_abelian_subspace(&v_parts));
    Ok(FormKernel {
        basis,
        center_meet,
        abelian,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, build_str, CatalogId};
    use crate::exactmath::rational::int;

    #[test]
    fn uniform_forces_vanish() {
        for s in ["heisenberg:1", "quatheis:1", "oct87"] {
            let a = build_str(s).unwrap();
            assert_eq!(parallel_space(&a, ParallelKind::TypeI).dim(), 0, "{s}");
            assert_eq!(parallel_space(&a, ParallelKind::TypeII).dim(), 0, "{s}");
        }
    }

    #[test]
    fn euclidean_factor_type_one() {
        // A commutes with j_Z and A j_Z = j_{C Z} = 0 force A = 0, then
        // C [V1, V2] = 0 kills C
        let a = build_str("heisenberg:1").unwrap().add_euclidean_factor(1);
        let sp = parallel_space(&a, ParallelKind::TypeI);
        for f in sp.basis() {
            assert!(f.is_type_one());
            assert!(super::super::is_closed(&a, f).unwrap());
        }
        assert_eq!(sp.dim(), 0);
    }

    #[test]
    fn zero_force_kernel() {
        let a = build(CatalogId::Heisenberg(1)).unwrap();
        let k = form_kernel(&a, &LorentzForce::zero(2, 1)).unwrap();
        assert_eq!(k.basis.len(), 3);
        assert_eq!(k.center_meet, 1);
        assert_eq!(k.abelian, None);
    }

    #[test]
    fn full_image_kernel_on_oct168() {
        let a = build(CatalogId::Oct168).unwrap();
        // B = [I_8 | 0]: v -> z onto, not closed
        let b = RatMatrix::from_fn(8, 16, |t, s| int((t == s) as i64));
        let f = LorentzForce::from_b(&b);
        assert!(!super::super::is_closed(&a, &f).unwrap());
        let k = form_kernel(&a, &f).unwrap();
        assert_eq!(k.basis.len(), 8);
        assert_eq!(k.center_meet, 0);
        assert!(k.basis.iter().all(|x| x[..8].iter().all(Zero::is_zero) && x[16..].iter().all(Zero::is_zero)));
    }
}
