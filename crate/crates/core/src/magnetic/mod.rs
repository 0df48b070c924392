//! Left-invariant 2-forms `omega(X, Y) = <F X, Y>` on `n = v + z`, their
//! closedness, and the solution spaces of closed, exact and parallel forms.
//!
//! A force is stored as its `(n+m) x (n+m)` matrix over `(V_1..V_n, Z_1..Z_m)`
//! with entry `(row, col) = <F e_col, e_row>`, so `F x` is a matrix-vector
//! product. The `v -> z` block `B` has `B[t][s] = a_ts = <F V_s, Z_t>`.

mod parallel;

pub use parallel::{form_kernel, parallel_space, FormKernel, ParallelKind};

use crate::exactmath::matrix::{span_basis, RatMatrix};
use crate::exactmath::rational::{int, one, zero, Rational};
use crate::nilalgebra::NilAlgebra;
use num_traits::Zero;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MagneticError {
    #[error("force matrix is not skew-symmetric")]
    NotSkew,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LorentzForce {
    n: usize,
    m: usize,
    matrix: RatMatrix,
}

impl LorentzForce {
    pub fn new(n: usize, m: usize, matrix: RatMatrix) -> Result<Self, MagneticError> {
        let d = n + m;
        if matrix.rows() != d || matrix.cols() != d {
            return Err(MagneticError::DimensionMismatch {
                expected: d,
                got: matrix.rows().max(matrix.cols()),
            });
        }
        if !matrix.is_skew() {
            return Err(MagneticError::NotSkew);
        }
        Ok(LorentzForce { n, m, matrix })
    }

    pub fn zero(n: usize, m: usize) -> Self {
        LorentzForce {
            n,
            m,
            matrix: RatMatrix::zeros(n + m, n + m),
        }
    }

    /// Assembles `[[A, -B^T], [B, C]]`; `a` and `c` must be skew.
    pub fn from_blocks(a: &RatMatrix, b: &RatMatrix, c: &RatMatrix) -> Result<Self, MagneticError> {
        let (n, m) = (a.rows(), c.rows());
        if b.rows() != m || b.cols() != n {
            return Err(MagneticError::DimensionMismatch {
                expected: m * n,
                got: b.rows() * b.cols(),
            });
        }
        let mut matrix = RatMatrix::zeros(n + m, n + m);
        matrix.set_block(0, 0, a);
        matrix.set_block(n, 0, b);
        matrix.set_block(0, n, &-&b.transpose());
        matrix.set_block(n, n, c);
        Self::new(n, m, matrix)
    }

    /// Type-II force with the given `v -> z` block.
    pub fn from_b(b: &RatMatrix) -> Self {
        let (m, n) = (b.rows(), b.cols());
        Self::from_blocks(&RatMatrix::zeros(n, n), b, &RatMatrix::zeros(m, m)).expect("shapes agree")
    }

    /// `j_W` on `v`, zero on `z`.
    pub fn from_j(a: &NilAlgebra, w: &[Rational]) -> Result<Self, MagneticError> {
        let j = a.j_operator(w).map_err(|_| MagneticError::DimensionMismatch {
            expected: a.dim_z(),
            got: w.len(),
        })?;
        let m = a.dim_z();
        Self::from_blocks(&j, &RatMatrix::zeros(m, a.dim_v()), &RatMatrix::zeros(m, m))
    }

    pub fn dim_v(&self) -> usize {
        self.n
    }

    pub fn dim_z(&self) -> usize {
        self.m
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn a_block(&self) -> RatMatrix {
        self.matrix.block(0, 0, self.n, self.n)
    }

    pub fn b_block(&self) -> RatMatrix {
        self.matrix.block(self.n, 0, self.m, self.n)
    }

    pub fn c_block(&self) -> RatMatrix {
        self.matrix.block(self.n, self.n, self.m, self.m)
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix.mul_vec(x)
    }

    pub fn omega(&self, x: &[Rational], y: &[Rational]) -> Rational {
        crate::exactmath::matrix::dot(&self.apply(x), y)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_type_one(&self) -> bool {
        self.b_block().is_zero()
    }

    pub fn is_type_two(&self) -> bool {
        self.a_block().is_zero() && self.c_block().is_zero()
    }

    /// Strictly lower triangle, row-major.
    pub fn coordinates(&self) -> Vec<Rational> {
        let d = self.n + self.m;
        let mut out = Vec::with_capacity(d * (d - 1) / 2);
        for i in 0..d {
            for j in 0..i {
                out.push(self.matrix[(i, j)].clone());
            }
        }
        out
    }

    pub fn from_coordinates(n: usize, m: usize, coords: &[Rational]) -> Self {
        let d = n + m;
        let mut matrix = RatMatrix::zeros(d, d);
        let mut k = 0;
        for i in 0..d {
            for j in 0..i {
                matrix[(i, j)] = coords[k].clone();
                matrix[(j, i)] = -coords[k].clone();
                k += 1;
            }
        }
        LorentzForce { n, m, matrix }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        LorentzForce {
            n: self.n,
            m: self.m,
            matrix: self.matrix.scale(c),
        }
    }
}

impl std::ops::Add for &LorentzForce {
    type Output = LorentzForce;
    fn add(self, rhs: &LorentzForce) -> LorentzForce {
        assert_eq!((self.n, self.m), (rhs.n, rhs.m));
        LorentzForce {
            n: self.n,
            m: self.m,
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl fmt::Display for LorentzForce {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForceSplit {
    pub f1: LorentzForce,
    pub f2: LorentzForce,
}

/// `F = F1 + F2` with `F1` block-diagonal and `F2` off-diagonal.
pub fn split_force(f: &LorentzForce) -> ForceSplit {
    let (n, m) = (f.n, f.m);
    let zn = RatMatrix::zeros(n, n);
    let zm = RatMatrix::zeros(m, m);
    let f1 = LorentzForce::from_blocks(&f.a_block(), &RatMatrix::zeros(m, n), &f.c_block()).expect("blocks of a skew matrix");
    let f2 = LorentzForce::from_blocks(&zn, &f.b_block(), &zm).expect("blocks of a skew matrix");
    ForceSplit { f1, f2 }
}

fn check_dims(a: &NilAlgebra, f: &LorentzForce) -> Result<(), MagneticError> {
    if f.n != a.dim_v() || f.m != a.dim_z() {
        return Err(MagneticError::DimensionMismatch {
            expected: a.dim(),
            got: f.n + f.m,
        });
    }
    Ok(())
}

/// `<F e_a, [e_b, e_c]>` on basis vectors of `n`.
fn pairing(a: &NilAlgebra, f: &LorentzForce, x: usize, y: usize, w: usize) -> Rational {
    let n = a.dim_v();
    if y >= n || w >= n || y == w {
        return zero();
    }
    a.basis_bracket(y, w)
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(zero(), |acc, (t, c)| acc + c * &f.matrix[(n + t, x)])
}

/// Cyclic sum `<F U, [V, W]> + <F V, [W, U]> + <F W, [U, V]>` on every basis
/// triple of `n`.
pub fn is_closed(a: &NilAlgebra, f: &LorentzForce) -> Result<bool, MagneticError> {
    check_dims(a, f)?;
    let d = a.dim();
    for x in 0..d {
        for y in x + 1..d {
            for w in y + 1..d {
                let s = pairing(a, f, x, y, w) + pairing(a, f, y, w, x) + pairing(a, f, w, x, y);
                if !s.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Linear system of the cyclic condition on `v`-triples for a type-II force,
/// in the unknowns `a_ts` at column `t * n + s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct C2System {
    pub triples: Vec<(usize, usize, usize)>,
    pub matrix: RatMatrix,
}

pub fn c2_system(a: &NilAlgebra) -> C2System {
    let (n, m) = (a.dim_v(), a.dim_z());
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                triples.push((i, j, k));
            }
        }
    }
    let mut matrix = RatMatrix::zeros(triples.len(), n * m);
    for (row, &(i, j, k)) in triples.iter().enumerate() {
        // sum_t a_ti c_jk^t + a_tj c_ki^t + a_tk c_ij^t
        for (s, (p, q)) in [(i, (j, k)), (j, (k, i)), (k, (i, j))] {
            for (t, c) in a.basis_bracket(p, q).into_iter().enumerate() {
                if !c.is_zero() {
                    matrix[(row, t * n + s)] += c;
                }
            }
        }
    }
    C2System { triples, matrix }
}

/// A subspace of skew maps, kept with a reduced-echelon basis in
/// [`LorentzForce::coordinates`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpace {
    n: usize,
    m: usize,
    basis: Vec<LorentzForce>,
}

impl SolutionSpace {
    pub fn spanned_by(n: usize, m: usize, forces: &[LorentzForce]) -> Self {
        let d = n + m;
        let coords: Vec<Vec<Rational>> = forces.iter().map(LorentzForce::coordinates).collect();
        let basis = span_basis(d * (d - 1) / 2, &coords)
            .iter()
            .map(|c| LorentzForce::from_coordinates(n, m, c))
            .collect();
        SolutionSpace { n, m, basis }
    }

    pub fn basis(&self) -> &[LorentzForce] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    pub fn contains(&self, f: &LorentzForce) -> bool {
        let mut all: Vec<LorentzForce> = self.basis.clone();
        all.push(f.clone());
        SolutionSpace::spanned_by(self.n, self.m, &all).dim() == self.dim()
    }

    pub fn sum(&self, other: &SolutionSpace) -> SolutionSpace {
        let all: Vec<LorentzForce> = self.basis.iter().chain(&other.basis).cloned().collect();
        SolutionSpace::spanned_by(self.n, self.m, &all)
    }
}

fn skew_unit(d: usize, i: usize, j: usize) -> RatMatrix {
    let mut e = RatMatrix::zeros(d, d);
    e[(j, i)] = one();
    e[(i, j)] = -one();
    e
}

/// Closed forms of type I: all of `so(v)`, plus `so(ker j)` on `z`.
pub fn type1_closed_space(a: &NilAlgebra) -> SolutionSpace {
    let (n, m) = (a.dim_v(), a.dim_z());
    let mut forces = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut mat = RatMatrix::zeros(n + m, n + m);
            mat.set_block(0, 0, &skew_unit(n, i, j));
            forces.push(LorentzForce { n, m, matrix: mat });
        }
    }
    let kernel = a.center_split().kernel_basis;
    for (p, ka) in kernel.iter().enumerate() {
        for kb in &kernel[p + 1..] {
            // k_b k_a^T - k_a k_b^T sends k_a to a multiple of k_b
            let c = RatMatrix::from_fn(m, m, |r, s| &kb[r] * &ka[s] - &ka[r] * &kb[s]);
            let mut mat = RatMatrix::zeros(n + m, n + m);
            mat.set_block(n, n, &c);
            forces.push(LorentzForce { n, m, matrix: mat });
        }
    }
    SolutionSpace::spanned_by(n, m, &forces)
}

/// Closed forms of type II: the nullspace of [`c2_system`].
pub fn type2_closed_space(a: &NilAlgebra) -> SolutionSpace {
    let (n, m) = (a.dim_v(), a.dim_z());
    let sys = c2_system(a);
    let forces: Vec<LorentzForce> = sys
        .matrix
        .nullspace()
        .iter()
        .map(|x| LorentzForce::from_b(&RatMatrix::from_fn(m, n, |t, s| x[t * n + s].clone())))
        .collect();
    SolutionSpace::spanned_by(n, m, &forces)
}

/// Exact forms: `j_W` on `v` for `W` in the commutator `C(n)`.
pub fn exact_space(a: &NilAlgebra) -> SolutionSpace {
    let forces: Vec<LorentzForce> = a
        .center_split()
        .commutator_basis
        .iter()
        .map(|w| LorentzForce::from_j(a, w).expect("commutator vectors live in z"))
        .collect();
    SolutionSpace::spanned_by(a.dim_v(), a.dim_z(), &forces)
}

pub fn closed_space(a: &NilAlgebra) -> SolutionSpace {
    type1_closed_space(a).sum(&type2_closed_space(a))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedReport {
    pub closed_total: usize,
    pub type1: usize,
    pub type2: usize,
    pub exact: usize,
    pub betti2: usize,
}

pub fn closed_report(a: &NilAlgebra) -> ClosedReport {
    let type1 = type1_closed_space(a).dim();
    let type2 = type2_closed_space(a).dim();
    let exact = exact_space(a).dim();
    let closed_total = type1 + type2;
    ClosedReport {
        closed_total,
        type1,
        type2,
        exact,
        betti2: closed_total - exact,
    }
}

/// Forces written down for the singular (5,2) algebra: `F V3 = Z2 = -F V5`,
/// `F V4 = Z1`.
pub fn singular52_stated_force() -> LorentzForce {
    let mut b = RatMatrix::zeros(2, 5);
    b[(1, 2)] = int(1);
    b[(1, 4)] = int(-1);
    b[(0, 3)] = int(1);
    LorentzForce::from_b(&b)
}

fn is_singular52(a: &NilAlgebra) -> bool {
    crate::catalog::build(crate::catalog::CatalogId::Singular52).is_ok_and(|s| s.brackets() == a.brackets())
}

/// Notes about inputs whose commonly quoted data disagrees with what is
/// computed here.
pub fn warnings(a: &NilAlgebra) -> Vec<String> {
    let mut out = Vec::new();
    if let Err(e) = a.validate() {
        out.push(format!("declared splitting is not v + center: {e}"));
    }
    if is_singular52(a) {
        let f = singular52_stated_force();
        if !is_closed(a, &f).unwrap_or(false) {
            out.push(
                "the type-II form F(V3) = Z2 = -F(V5), F(V4) = Z1 is not closed: the cyclic sum on (V1, V2, V4) \
                 equals <Z1, Z1> = 1; closed type-II forms have <F(V4), Z1> = 0"
                    .to_string(),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build, build_str, CatalogId};
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    #[test]
    fn h3_everything_closed() {
        let h = build_str("heisenberg:1").unwrap();
        let r = closed_report(&h);
        assert_eq!(r, ClosedReport { closed_total: 3, type1: 1, type2: 2, exact: 1, betti2: 2 });
        let f = LorentzForce::from_coordinates(2, 1, &[rat(3, 1), rat(-2, 1), rat(5, 7)]);
        assert!(is_closed(&h, &f).unwrap());
    }

    #[test]
    fn split_of_h3_force() {
        // alpha j_{e3} + beta F13 + rho F23
        let h = build_str("heisenberg:1").unwrap();
        let (al, be, rh) = (rat(2, 1), rat(-3, 1), rat(1, 2));
        let j = LorentzForce::from_j(&h, &[one()]).unwrap();
        let mut b13 = RatMatrix::zeros(1, 2);
        b13[(0, 0)] = one();
        let mut b23 = RatMatrix::zeros(1, 2);
        b23[(0, 1)] = one();
        let f1 = LorentzForce::from_b(&b13);
        let f2 = LorentzForce::from_b(&b23);
        let f = &(&j.scale(&al) + &f1.scale(&be)) + &f2.scale(&rh);
        let s = split_force(&f);
        assert_eq!(s.f1, j.scale(&al));
        assert_eq!(s.f2, &f1.scale(&be) + &f2.scale(&rh));
        assert!(split_force(&j).f2.is_zero());
        assert!(split_force(&f1).f1.is_zero());
    }

    #[test]
    fn dimension_table() {
        let dim2 = |s: &str| type2_closed_space(&build_str(s).unwrap()).dim();
        assert_eq!(dim2("heisenberg:1"), 2);
        assert_eq!(dim2("complexheis"), 4);
        assert_eq!(dim2("quatheis:1"), 8);
        assert_eq!(dim2("singular52"), 4);
        assert_eq!(dim2("graph43"), 8);
        assert_eq!(dim2("heisenberg:2"), 0);
        let t1 = |s: &str| type1_closed_space(&build_str(s).unwrap()).dim();
        assert_eq!(t1("heisenberg:1"), 1);
        assert_eq!(t1("quatheis:1"), 6);
        let h = build_str("heisenberg:1").unwrap();
        assert_eq!(type1_closed_space(&h.add_euclidean_factor(2)).dim(), 2);
        assert_eq!(exact_space(&h.add_euclidean_factor(1)).dim(), 1);
        assert_eq!(exact_space(&build_str("complexheis").unwrap()).dim(), 2);
    }

    #[test]
    fn c2_system_shape_on_oct87() {
        let a = build(CatalogId::Oct87).unwrap();
        let s = c2_system(&a);
        assert_eq!((s.matrix.rows(), s.matrix.cols()), (56, 56));
        assert_eq!(s.matrix.rank(), 56);
    }

    #[test]
    fn graph43_forced_zeros() {
        let a = build(CatalogId::Graph43).unwrap();
        let sp = type2_closed_space(&a);
        let zeros: Vec<(usize, usize)> = (0..3)
            .flat_map(|t| (0..4).map(move |s| (t, s)))
            .filter(|&(t, s)| sp.basis().iter().all(|f| f.b_block()[(t, s)].is_zero()))
            .collect();
        assert_eq!(zeros, vec![(0, 3), (2, 0)]);
    }

    #[test]
    fn singular52_space_and_warning() {
        let a = build(CatalogId::Singular52).unwrap();
        let sp = type2_closed_space(&a);
        let mut b = RatMatrix::zeros(2, 5);
        b[(1, 2)] = one();
        b[(1, 4)] = -one();
        assert!(sp.contains(&LorentzForce::from_b(&b)));
        assert!(sp.basis().iter().all(|f| f.b_block()[(0, 3)].is_zero()));
        assert!(!is_closed(&a, &singular52_stated_force()).unwrap());
        let w = warnings(&a);
        assert_eq!(w.len(), 2);
        assert!(warnings(&build_str("heisenberg:1").unwrap()).is_empty());
    }

    #[test]
    fn complex_heisenberg_anticommutes_with_j() {
        let a = build(CatalogId::ComplexHeisenberg).unwrap();
        // multiplication by i: X1 -> X2, Y1 -> Y2, Z1 -> Z2
        let mut jm = RatMatrix::zeros(6, 6);
        for (from, to) in [(0, 2), (1, 3), (4, 5)] {
            jm[(to, from)] = one();
            jm[(from, to)] = -one();
        }
        for f in type2_closed_space(&a).basis() {
            let lhs = f.matrix() * &jm;
            let rhs = -&(&jm * f.matrix());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn wrong_shapes() {
        let h = build_str("heisenberg:1").unwrap();
        assert_eq!(
            is_closed(&h, &LorentzForce::zero(2, 2)),
            Err(MagneticError::DimensionMismatch { expected: 3, got: 4 })
        );
        assert_eq!(
            LorentzForce::new(2, 1, RatMatrix::from_i64(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 0])),
            Err(MagneticError::NotSkew)
        );
    }

    fn small_force(n: usize, m: usize) -> impl Strategy<Value = LorentzForce> {
        let d = n + m;
        proptest::collection::vec(-3i64..4, d * (d - 1) / 2)
            .prop_map(move |v| LorentzForce::from_coordinates(n, m, &v.into_iter().map(int).collect::<Vec<_>>()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn split_recombines(f in small_force(4, 3)) {
            let s = split_force(&f);
            prop_assert_eq!(&s.f1 + &s.f2, f);
            prop_assert!(s.f1.is_type_one());
            prop_assert!(s.f2.is_type_two());
        }

        #[test]
        fn closed_iff_parts_closed(f in small_force(4, 2)) {
            let a = build(CatalogId::ComplexHeisenberg).unwrap();
            let s = split_force(&f);
            let whole = is_closed(&a, &f).unwrap();
            prop_assert_eq!(whole, is_closed(&a, &s.f1).unwrap() && is_closed(&a, &s.f2).unwrap());
            prop_assert_eq!(whole, closed_space(&a).contains(&f));
        }

        #[test]
        fn exact_forms_are_closed(id in prop::sample::select(CatalogId::listing())) {
            let a = build(id).unwrap();
            for f in exact_space(&a).basis() {
                prop_assert!(is_closed(&a, f).unwrap());
            }
        }
    }
}
