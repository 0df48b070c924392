//! Deformations `n_r` of H-type algebras: `j_{Z_1}` is rescaled by `r` on one
//! half `v_2` of a splitting `v = v_1 + v_2` that `j_{Z_1}` and `j_{Z_2}`
//! both preserve.

use crate::catalog::{build, CatalogId};
use crate::exactmath::matrix::{dot, orthogonal_complement, rank_of_vectors, span_basis, RatMatrix};
use crate::exactmath::poly::{z_vars, MultiPoly};
use crate::exactmath::rational::{int, one, random_small, rational_sqrt, zero, Rational};
use crate::nilalgebra::{pfaffian_of, AlgebraError, NilAlgebra};
use num_traits::{Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Fresh seeds tried by [`find_invariant_split`].
pub const SPLIT_RETRIES: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeformError {
    #[error("base algebra is not of H-type")]
    NotHType,
    #[error("splitting needs dim > 7 and dim z >= 2, got dim v = {dim_v}, dim z = {dim_z}")]
    TooSmall { dim_v: usize, dim_z: usize },
    #[error("center index {index} out of range for dim z = {dim_z}")]
    BadCenterIndex { index: usize, dim_z: usize },
    #[error("no invariant splitting found after {0} attempts")]
    NoSplitFound(u64),
    #[error("invalid splitting: {0}")]
    InvalidSplit(String),
    #[error("canonical splitting for dim z = {m} needs a Clifford volume element squaring to +1 (m~ = {m_tilde:?})")]
    UnsupportedCanonical { m: usize, m_tilde: Option<usize> },
    #[error("the Pfaffian identity is stated for the (8,7) algebra with v1 = span{{V1..V4}}")]
    WrongBase,
    #[error("r must be nonzero")]
    ZeroR,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Base algebra, the two distinguished center directions, the splitting and
/// the factor `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformSpec {
    base: NilAlgebra,
    z1: usize,
    z2: usize,
    v1: Vec<Vec<Rational>>,
    v2: Vec<Vec<Rational>>,
    r: Rational,
}

fn invariant(j: &RatMatrix, space: &[Vec<Rational>]) -> bool {
    let r = rank_of_vectors(space);
    space.iter().all(|x| {
        let mut all = space.to_vec();
        all.push(j.mul_vec(x));
        rank_of_vectors(&all) == r
    })
}

fn check_base(a: &NilAlgebra) -> Result<(), DeformError> {
    if a.dim() <= 7 || a.dim_z() < 2 {
        return Err(DeformError::TooSmall {
            dim_v: a.dim_v(),
            dim_z: a.dim_z(),
        });
    }
    if !a.is_htype() {
        return Err(DeformError::NotHType);
    }
    Ok(())
}

impl DeformSpec {
    pub fn new(
        base: NilAlgebra,
        z1: usize,
        z2: usize,
        v1: Vec<Vec<Rational>>,
        v2: Vec<Vec<Rational>>,
        r: Rational,
    ) -> Result<Self, DeformError> {
        check_base(&base)?;
        let (n, m) = (base.dim_v(), base.dim_z());
        for index in [z1, z2] {
            if index >= m {
                return Err(DeformError::BadCenterIndex { index, dim_z: m });
            }
        }
        if z1 == z2 {
            return Err(DeformError::InvalidSplit("Z1 and Z2 must differ".into()));
        }
        if v1.iter().chain(&v2).any(|x| x.len() != n) {
            return Err(DeformError::InvalidSplit(format!("vectors must have length {n}")));
        }
        let v1 = span_basis(n, &v1);
        let v2 = span_basis(n, &v2);
        if v1.len() + v2.len() != n || rank_of_vectors(&[v1.clone(), v2.clone()].concat()) != n {
            return Err(DeformError::InvalidSplit("v1 + v2 is not all of v".into()));
        }
        if v1.iter().any(|x| v2.iter().any(|y| !dot(x, y).is_zero())) {
            return Err(DeformError::InvalidSplit("v1 and v2 are not orthogonal".into()));
        }
        if !v1.len().is_multiple_of(4) || !v2.len().is_multiple_of(4) {
            return Err(DeformError::InvalidSplit("dimensions must be multiples of 4".into()));
        }
        for t in [z1, z2] {
            let j = base.j_basis(t);
            if !invariant(&j, &v1) || !invariant(&j, &v2) {
                return Err(DeformError::InvalidSplit(format!("not invariant under j of {}", base.z_labels()[t])));
            }
        }
        Ok(DeformSpec { base, z1, z2, v1, v2, r })
    }

    pub fn base(&self) -> &NilAlgebra {
        &self.base
    }

    pub fn z1(&self) -> usize {
        self.z1
    }

    pub fn z2(&self) -> usize {
        self.z2
    }

    pub fn v1(&self) -> &[Vec<Rational>] {
        &self.v1
    }

    pub fn v2(&self) -> &[Vec<Rational>] {
        &self.v2
    }

    pub fn r(&self) -> &Rational {
        &self.r
    }

    pub fn with_r(&self, r: Rational) -> Self {
        DeformSpec { r, ..self.clone() }
    }

    /// Orthogonal projection onto `v1`.
    pub fn projection_v1(&self) -> RatMatrix {
        let n = self.base.dim_v();
        if self.v1.is_empty() {
            return RatMatrix::zeros(n, n);
        }
        let b = RatMatrix::from_columns(n, &self.v1);
        let gram = &b.transpose() * &b;
        let inv = gram.inverse().expect("basis vectors are independent");
        &(&b * &inv) * &b.transpose()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeformedAlgebra {
    pub algebra: NilAlgebra,
    pub spec: DeformSpec,
}

/// `j~_{Z_1} = j_{Z_1} (P_1 + r P_2)`, other `j_{Z_t}` unchanged.
pub fn deform(spec: &DeformSpec) -> Result<DeformedAlgebra, DeformError> {
    let base = &spec.base;
    let n = base.dim_v();
    let p1 = spec.projection_v1();
    let p2 = &RatMatrix::identity(n) - &p1;
    let scale = &p1 + &p2.scale(&spec.r);
    let js: Vec<RatMatrix> = (0..base.dim_z())
        .map(|t| {
            let j = base.j_basis(t);
            if t == spec.z1 {
                &j * &scale
            } else {
                j
            }
        })
        .collect();
    let name = format!("{}~r={}", base.name(), spec.r);
    let algebra = NilAlgebra::from_j_operators(name, &js)?.with_labels(base.v_labels().to_vec(), base.z_labels().to_vec())?;
    algebra.validate()?;
    Ok(DeformedAlgebra {
        algebra,
        spec: spec.clone(),
    })
}

/// Seeded search for a `j_{Z_1}`, `j_{Z_2}`-invariant orthogonal splitting
/// with `dim v1` the largest multiple of 4 not above `dim v / 2`.
pub fn find_invariant_split(
    a: &NilAlgebra,
    z1: usize,
    z2: usize,
    seed: u64,
) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>), DeformError> {
    check_base(a)?;
    let (n, m) = (a.dim_v(), a.dim_z());
    for index in [z1, z2] {
        if index >= m {
            return Err(DeformError::BadCenterIndex { index, dim_z: m });
        }
    }
    let target = (n / 2) / 4 * 4;
    let (j1, j2) = (a.j_basis(z1), a.j_basis(z2));
    for attempt in 0..SPLIT_RETRIES {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut w: Vec<Vec<Rational>> = Vec::new();
        let mut stalled = 0;
        while w.len() < target && stalled < 4 {
            let x: Vec<Rational> = (0..n).map(|_| random_small(&mut rng)).collect();
            // component of x orthogonal to the invariant span found so far
            let x = project_out(&x, &w);
            if x.iter().all(Zero::is_zero) {
                stalled += 1;
                continue;
            }
            let j2x = j2.mul_vec(&x);
            let closure = [x.clone(), j1.mul_vec(&x), j2x.clone(), j1.mul_vec(&j2x)];
            let grown = span_basis(n, &[w.clone(), closure.to_vec()].concat());
            if grown.len() == w.len() + 4 {
                w = grown;
            } else {
                stalled += 1;
            }
        }
        if w.len() != target {
            continue;
        }
        let v2 = span_basis(n, &orthogonal_complement(n, &w));
        if invariant(&j1, &w) && invariant(&j2, &w) && invariant(&j1, &v2) && invariant(&j2, &v2) {
            return Ok((w, v2));
        }
    }
    Err(DeformError::NoSplitFound(SPLIT_RETRIES))
}

fn project_out(x: &[Rational], span: &[Vec<Rational>]) -> Vec<Rational> {
    if span.is_empty() {
        return x.to_vec();
    }
    let n = x.len();
    let b = RatMatrix::from_columns(n, span);
    let gram = &b.transpose() * &b;
    let coeffs = gram.inverse().expect("independent span").mul_vec(&b.transpose().mul_vec(x));
    let proj = b.mul_vec(&coeffs);
    x.iter().zip(proj).map(|(a, b)| a - b).collect()
}

/// Dimension of an irreducible `Cl(m)`-module, `m = 1..=8`.
fn irreducible_dim(m: usize) -> Option<usize> {
    [2, 4, 4, 8, 8, 8, 8, 16].get(m.checked_sub(1)?).copied()
}

/// `m~ < m` maximal with irreducible `Cl(m~)`-modules of half the dimension.
pub fn clifford_half(m: usize) -> Option<usize> {
    let d = irreducible_dim(m)?;
    (1..m).rev().find(|&k| irreducible_dim(k).is_some_and(|e| 2 * e == d))
}

fn product(js: &[RatMatrix], n: usize) -> RatMatrix {
    js.iter().fold(RatMatrix::identity(n), |acc, j| &acc * j)
}

/// The splitting of `v` into eigenspaces of `j_{Z_1} ... j_{Z_m~}`, with `v1`
/// the one containing `V_1` when it lies in one. Returns `(v1, v2, m~)`.
pub fn canonical_split(a: &NilAlgebra) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>, usize), DeformError> {
    check_base(a)?;
    let (n, m) = (a.dim_v(), a.dim_z());
    let m_tilde = clifford_half(m);
    let Some(k) = m_tilde.filter(|k| k % 4 == 3) else {
        return Err(DeformError::UnsupportedCanonical { m, m_tilde });
    };
    let js: Vec<RatMatrix> = (0..k).map(|t| a.j_basis(t)).collect();
    let omega = product(&js, n);
    let id = RatMatrix::identity(n);
    let plus = span_basis(n, &(&omega - &id).nullspace());
    let minus = span_basis(n, &(&omega + &id).nullspace());
    let mut e1 = vec![zero(); n];
    e1[0] = one();
    let in_minus = rank_of_vectors(&[minus.clone(), vec![e1]].concat()) == minus.len();
    let (v1, v2) = if in_minus { (minus, plus) } else { (plus, minus) };
    Ok((v1, v2, k))
}

/// Canonical spec with `Z_1`, `Z_2` the first two center basis vectors.
pub fn canonical_spec(a: &NilAlgebra, r: Rational) -> Result<DeformSpec, DeformError> {
    let (v1, v2, _) = canonical_split(a)?;
    DeformSpec::new(a.clone(), 0, 1, v1, v2, r)
}

/// `||Z||^4 + z1^2 ((r^2 - 1)(z1^2 + z2^2 + z3^2) + 2 (r - 1)(z4^2 + ... + z7^2))`.
pub fn oct87_pfaffian_formula(r: &Rational) -> MultiPoly {
    let vars = z_vars(7);
    let sq = |t: usize| {
        let mut e = vec![0u32; 7];
        e[t] = 2;
        MultiPoly::from_terms(&vars, [(e, one())])
    };
    let sum = |ts: std::ops::Range<usize>| ts.fold(MultiPoly::zero(&vars), |acc, t| &acc + &sq(t));
    let norm = sum(0..7);
    let r2m1 = r * r - one();
    let inner = &sum(0..3).scale(&r2m1) + &sum(3..7).scale(&(int(2) * (r - one())));
    &(&norm * &norm) + &(&sq(0) * &inner)
}

/// `(||Z||^2)^{dim v1 / 2} (||Z||^2 + (r^2 - 1) z_1^2)^{dim v2 / 2}`.
pub fn det_factorization_target(d: &DeformedAlgebra) -> MultiPoly {
    let m = d.algebra.dim_z();
    let vars = z_vars(m);
    let sq = |t: usize| {
        let mut e = vec![0u32; m];
        e[t] = 2;
        MultiPoly::from_terms(&vars, [(e, one())])
    };
    let norm = (0..m).fold(MultiPoly::zero(&vars), |acc, t| &acc + &sq(t));
    let r = &d.spec.r;
    let shifted = &norm + &sq(d.spec.z1).scale(&(r * r - one()));
    let (e1, e2) = ((d.spec.v1.len() / 2) as u32, (d.spec.v2.len() / 2) as u32);
    &norm.pow(e1) * &shifted.pow(e2)
}

/// `det(j~_Z) = Pf(j~_Z)^2` equals [`det_factorization_target`] exactly.
pub fn det_factorization_holds(d: &DeformedAlgebra) -> bool {
    let Some(pf) = pfaffian_of(&d.algebra) else { return false };
    &pf * &pf == det_factorization_target(d)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PfaffianIdentity {
    pub pfaffian: MultiPoly,
    pub formula: MultiPoly,
    /// `+1` or `-1` when `Pf = sign * formula`, `None` when neither holds.
    pub sign: Option<i8>,
}

/// Compares `Pf(j~_Z)` on a deformation of the (8,7) algebra with the closed
/// form [`oct87_pfaffian_formula`].
pub fn pfaffian_identity_check(d: &DeformedAlgebra) -> Result<PfaffianIdentity, DeformError> {
    let oct = build(CatalogId::Oct87).map_err(|_| DeformError::WrongBase)?;
    let spec = &d.spec;
    let unit = |k: usize| -> Vec<Rational> { (0..8).map(|i| int((i == k) as i64)).collect() };
    let first_half: Vec<Vec<Rational>> = (0..4).map(unit).collect();
    let same_v1 = spec.v1.len() == 4 && rank_of_vectors(&[spec.v1.clone(), first_half].concat()) == 4;
    if spec.base.brackets() != oct.brackets() || spec.z1 != 0 || !same_v1 {
        return Err(DeformError::WrongBase);
    }
    let pfaffian = pfaffian_of(&d.algebra).expect("even dimension");
    let formula = oct87_pfaffian_formula(&spec.r);
    let sign = if pfaffian == formula {
        Some(1)
    } else if pfaffian == -&formula {
        Some(-1)
    } else {
        None
    };
    Ok(PfaffianIdentity { pfaffian, formula, sign })
}

/// For `r < 0` with `sqrt|r|` rational: a center vector `Z + lambda Z_1` and
/// a nonzero `V_1 + V_2` in the kernel of `j~`. `Z` is a unit center basis
/// vector whose `j_Z` exchanges `v1` and `v2`, `lambda = 1 / sqrt|r|` and
/// `V_1 = r lambda j_Z j_{Z_1} V_2`.
pub fn negative_r_witness(d: &DeformedAlgebra) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let spec = &d.spec;
    if !spec.r.is_negative() {
        return None;
    }
    let root = rational_sqrt(&spec.r.abs())?;
    let lambda = one() / root;
    let base = &spec.base;
    let m = base.dim_z();
    let j1 = base.j_basis(spec.z1);
    let v2 = spec.v2.first()?;
    for t in (0..m).filter(|&t| t != spec.z1) {
        let jz = base.j_basis(t);
        let v1: Vec<Rational> = jz.mul_vec(&j1.mul_vec(v2)).into_iter().map(|x| x * &spec.r * &lambda).collect();
        let in_v1 = rank_of_vectors(&[spec.v1.clone(), vec![v1.clone()]].concat()) == spec.v1.len();
        if !in_v1 {
            continue;
        }
        let mut z = vec![zero(); m];
        z[t] = one();
        z[spec.z1] = lambda.clone();
        let x: Vec<Rational> = v1.iter().zip(v2).map(|(a, b)| a + b).collect();
        let j = d.algebra.j_operator(&z).ok()?;
        if j.mul_vec(&x).iter().all(Zero::is_zero) {
            return Some((z, x));
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoCheck {
    pub m_tilde: usize,
    /// `phi^T j^{1/r}_{Z_i} phi == j^r_{phi(Z_i)}` per center direction.
    pub homomorphism: Vec<bool>,
    /// `phi^T j^r_{Z_i} phi == j^{1/r}_{phi(Z_i)}` per center direction.
    pub reversed: Vec<bool>,
}

impl IsoCheck {
    pub fn holds(&self) -> bool {
        self.homomorphism.iter().all(|&b| b)
    }
}

/// Checks that `phi` with `phi|_v = j_{Z_1} ... j_{Z_{m~+1}}` and diagonal
/// center part `phi(Z_1) = (-1)^{m~} / r Z_1`, `phi(Z_i) = (-1)^{m~} Z_i`
/// for `i <= m~ + 1`, `phi(Z_i) = (-1)^{m~+1} Z_i` beyond, maps `n_r` onto
/// `n_{1/r}` on the canonical splitting.
pub fn iso_check(a: &NilAlgebra, r: &Rational) -> Result<IsoCheck, DeformError> {
    if r.is_zero() {
        return Err(DeformError::ZeroR);
    }
    let (v1, v2, k) = canonical_split(a)?;
    let spec = DeformSpec::new(a.clone(), 0, 1, v1, v2, r.clone())?;
    let nr = deform(&spec)?.algebra;
    let ninv = deform(&spec.with_r(one() / r))?.algebra;
    let (n, m) = (a.dim_v(), a.dim_z());
    let js: Vec<RatMatrix> = (0..=k.min(m - 1)).map(|t| a.j_basis(t)).collect();
    let phi = product(&js, n);
    let sign = if k % 2 == 0 { one() } else { -one() };
    let phi_z: Vec<Rational> = (0..m)
        .map(|i| {
            if i == 0 {
                &sign / r
            } else if i <= k {
                sign.clone()
            } else {
                -sign.clone()
            }
        })
        .collect();
    let phit = phi.transpose();
    let mut homomorphism = Vec::new();
    let mut reversed = Vec::new();
    for i in 0..m {
        let mut z = vec![zero(); m];
        z[i] = one();
        let mut pz = vec![zero(); m];
        pz[i] = phi_z[i].clone();
        let lhs = &(&phit * &ninv.j_operator(&z)?) * &phi;
        homomorphism.push(lhs == nr.j_operator(&pz)?);
        let lhs = &(&phit * &nr.j_operator(&z)?) * &phi;
        reversed.push(lhs == ninv.j_operator(&pz)?);
    }
    Ok(IsoCheck {
        m_tilde: k,
        homomorphism,
        reversed,
    })
}
