//! Named 2-step nilpotent algebras, center restriction, Euclidean factors and
//! Radon-Hurwitz admissibility of `(dim v, dim z)` pairs.

pub mod division;

pub use division::{DivisionAlgebra, DivisionName, UnknownAlgebra};

use crate::exactmath::matrix::{dot, rank_of_vectors, RatMatrix};
use crate::exactmath::rational::{int, rational_sqrt, zero, Rational};
use crate::nilalgebra::{AlgebraError, NilAlgebra};
use num_traits::Zero;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog id {0:?}")]
    UnknownId(String),
    #[error("bad parameter for {id}: {reason}")]
    BadParameter { id: String, reason: String },
    #[error(transparent)]
    UnknownAlgebra(#[from] UnknownAlgebra),
    #[error("center vectors are linearly dependent")]
    DependentBasis,
    #[error("Gram-Schmidt on the given center vectors needs irrational norms; supply an orthogonal basis with rational norms")]
    IrrationalProjection,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CatalogId {
    Heisenberg(usize),
    ComplexHeisenberg,
    QuatHeisenberg(usize),
    DivI(DivisionName),
    DivII(DivisionName),
    Oct87,
    Oct168,
    Singular52,
    Graph43,
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::Heisenberg(p) => write!(f, "heisenberg:{p}"),
            CatalogId::ComplexHeisenberg => write!(f, "complexheis"),
            CatalogId::QuatHeisenberg(p) => write!(f, "quatheis:{p}"),
            CatalogId::DivI(a) => write!(f, "divi:{a}"),
            CatalogId::DivII(a) => write!(f, "divii:{a}"),
            CatalogId::Oct87 => write!(f, "oct87"),
            CatalogId::Oct168 => write!(f, "oct168"),
            CatalogId::Singular52 => write!(f, "singular52"),
            CatalogId::Graph43 => write!(f, "graph43"),
        }
    }
}

impl FromStr for CatalogId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, param) = match s.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let bad = |reason: &str| CatalogError::BadParameter {
            id: s.to_string(),
            reason: reason.to_string(),
        };
        let count = |p: Option<&str>| -> Result<usize, CatalogError> {
            let p = p.ok_or_else(|| bad("missing parameter p"))?;
            match p.parse::<usize>() {
                Ok(0) | Err(_) => Err(bad("p must be a positive integer")),
                Ok(v) => Ok(v),
            }
        };
        let no_param = |id: CatalogId| match param {
            None => Ok(id),
            Some(_) => Err(bad("takes no parameter")),
        };
        match head {
            "heisenberg" => Ok(CatalogId::Heisenberg(count(param)?)),
            "quatheis" => Ok(CatalogId::QuatHeisenberg(count(param)?)),
            "complexheis" => no_param(CatalogId::ComplexHeisenberg),
            "oct87" => no_param(CatalogId::Oct87),
            "oct168" => no_param(CatalogId::Oct168),
            "singular52" => no_param(CatalogId::Singular52),
            "graph43" => no_param(CatalogId::Graph43),
            "divi" => {
                let a: DivisionName = param.ok_or_else(|| bad("missing algebra"))?.parse()?;
                if a == DivisionName::R {
                    return Err(bad("construction over R has no imaginary part"));
                }
                Ok(CatalogId::DivI(a))
            }
            "divii" => Ok(CatalogId::DivII(param.ok_or_else(|| bad("missing algebra"))?.parse()?)),
            _ => Err(CatalogError::UnknownId(s.to_string())),
        }
    }
}

impl CatalogId {
    /// One representative per family, in listing order.
    pub fn listing() -> Vec<CatalogId> {
        use DivisionName::*;
        vec![
            CatalogId::Heisenberg(1),
            CatalogId::ComplexHeisenberg,
            CatalogId::QuatHeisenberg(1),
            CatalogId::DivI(C),
            CatalogId::DivI(H),
            CatalogId::DivI(O),
            CatalogId::DivII(R),
            CatalogId::DivII(C),
            CatalogId::DivII(H),
            CatalogId::DivII(O),
            CatalogId::Oct87,
            CatalogId::Oct168,
            CatalogId::Singular52,
            CatalogId::Graph43,
        ]
    }

    pub fn describe(&self) -> &'static str {
        match self {
            CatalogId::Heisenberg(_) => "real Heisenberg algebra h_{2p+1}",
            CatalogId::ComplexHeisenberg => "complex Heisenberg algebra, real dimension 6",
            CatalogId::QuatHeisenberg(_) => "quaternionic Heisenberg algebra of dimension 4p+3",
            CatalogId::DivI(_) => "v = A, z = Im A, [U,V] = -Im(U conj(V))",
            CatalogId::DivII(_) => "v = A x A, z = A, [(U,V),(U',V')] = U V' - U' V",
            CatalogId::Oct87 => "octonionic (8,7) algebra from an explicit j-matrix",
            CatalogId::Oct168 => "(16,8) algebra with j = [[j', -z8 I], [z8 I, -j']]",
            CatalogId::Singular52 => "singular (5,2) algebra",
            CatalogId::Graph43 => "almost non-singular (4,3) graph algebra",
        }
    }
}

fn unit(m: usize, t: usize) -> Vec<Rational> {
    (0..m).map(|s| int((s == t) as i64)).collect()
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Builds and validates a catalog algebra.
pub fn build(id: CatalogId) -> Result<NilAlgebra, CatalogError> {
    let name = id.to_string();
    let a = match id {
        CatalogId::Heisenberg(p) => {
            let entries = (0..p).map(|i| ((2 * i, 2 * i + 1), vec![int(1)]));
            let v = (1..=p).flat_map(|i| [format!("X{i}"), format!("Y{i}")]).collect();
            NilAlgebra::from_brackets(name, 2 * p, 1, entries)?.with_labels(v, vec!["Z".into()])?
        }
        CatalogId::ComplexHeisenberg => {
            let e = |t| unit(2, t);
            let entries = [
                ((0, 1), e(0)),
                ((2, 3), e(0).iter().map(|x| -x.clone()).collect()),
                ((0, 3), e(1)),
                ((2, 1), e(1)),
            ];
            NilAlgebra::from_brackets(name, 4, 2, entries)?.with_labels(labels(&["X1", "Y1", "X2", "Y2"]), labels(&["Z1", "Z2"]))?
        }
        CatalogId::QuatHeisenberg(p) => {
            let e = |t| unit(3, t);
            let neg = |v: Vec<Rational>| v.into_iter().map(|x| -x).collect::<Vec<_>>();
            let mut entries = Vec::new();
            for i in 0..p {
                let (x, y, v, w) = (4 * i, 4 * i + 1, 4 * i + 2, 4 * i + 3);
                entries.push(((x, y), e(0)));
                entries.push(((x, v), e(1)));
                entries.push(((x, w), e(2)));
                entries.push(((v, w), e(0)));
                entries.push(((y, w), neg(e(1))));
                entries.push(((y, v), e(2)));
            }
            let v = (1..=p)
                .flat_map(|i| [format!("X{i}"), format!("Y{i}"), format!("V{i}"), format!("W{i}")])
                .collect();
            NilAlgebra::from_brackets(name, 4 * p, 3, entries)?.with_labels(v, labels(&["Z1", "Z2", "Z3"]))?
        }
        CatalogId::DivI(a) => div_i(a)?,
        CatalogId::DivII(a) => div_ii(a)?,
        CatalogId::Oct87 => NilAlgebra::from_j_operators(name, &oct87_j())?,
        CatalogId::Oct168 => NilAlgebra::from_j_operators(name, &oct168_j())?,
        CatalogId::Singular52 => {
            let e = |t| unit(2, t);
            NilAlgebra::from_brackets(name, 5, 2, [((0, 1), e(0)), ((2, 3), e(1)), ((3, 4), e(1))])?
        }
        CatalogId::Graph43 => {
            let e = |t| unit(3, t);
            NilAlgebra::from_brackets(name, 4, 3, [((0, 1), e(0)), ((1, 2), e(1)), ((2, 3), e(2))])?
        }
    };
    match a.validate() {
        // the printed (5,2) brackets leave V3 + V5 central; kept as stated
        Err(AlgebraError::CentralVInV { .. }) if id == CatalogId::Singular52 => {}
        r => r?,
    }
    Ok(a)
}

/// Central directions of `v` a catalog entry is known to carry.
pub fn known_central_in_v(id: CatalogId) -> Option<Vec<Rational>> {
    match id {
        CatalogId::Singular52 => Some([0, 0, 1, 0, 1].map(int).to_vec()),
        _ => None,
    }
}

/// Parses and builds in one step.
pub fn build_str(id: &str) -> Result<NilAlgebra, CatalogError> {
    build(id.parse()?)
}

fn div_i(name: DivisionName) -> Result<NilAlgebra, CatalogError> {
    let alg = DivisionAlgebra::new(name);
    let d = alg.dim();
    // [U, V] = -Im(U conj(V)); Z_t is the imaginary unit e_{t+1}
    let a = NilAlgebra::from_fn(CatalogId::DivI(name).to_string(), d, d - 1, |i, j, t| {
        let p = alg.mul(&alg.basis(i), &alg.conj(&alg.basis(j)));
        -p[t + 1].clone()
    })?;
    let v = alg.basis_labels();
    let z = v[1..].to_vec();
    Ok(a.with_labels(v, z)?)
}

fn div_ii(name: DivisionName) -> Result<NilAlgebra, CatalogError> {
    let alg = DivisionAlgebra::new(name);
    let d = alg.dim();
    let split = |i: usize| -> (Vec<Rational>, Vec<Rational>) {
        if i < d {
            (alg.basis(i), vec![zero(); d])
        } else {
            (vec![zero(); d], alg.basis(i - d))
        }
    };
    // [(U, V), (U', V')] = U V' - U' V
    let a = NilAlgebra::from_fn(CatalogId::DivII(name).to_string(), 2 * d, d, |i, j, t| {
        let (u, v) = split(i);
        let (u2, v2) = split(j);
        &alg.mul(&u, &v2)[t] - &alg.mul(&u2, &v)[t]
    })?;
    let base = alg.basis_labels();
    let v = base
        .iter()
        .map(|b| format!("({b},0)"))
        .chain(base.iter().map(|b| format!("(0,{b})")))
        .collect();
    Ok(a.with_labels(v, base)?)
}

/// Signed variable indices of the (8,7) j-matrix: `k > 0` is `+z_k`, `k < 0`
/// is `-z_{|k|}`, `0` is zero. Row `r`, column `c` is `<j_Z V_c, V_r>`.
const OCT87: [[i8; 8]; 8] = [
    [0, -1, -2, -3, -4, -5, -6, -7],
    [1, 0, -3, 2, 5, -4, 7, -6],
    [2, 3, 0, -1, 6, -7, -4, 5],
    [3, -2, 1, 0, 7, 6, -5, -4],
    [4, -5, -6, -7, 0, 1, 2, 3],
    [5, 4, 7, -6, -1, 0, 3, -2],
    [6, -7, 4, 5, -2, -3, 0, 1],
    [7, 6, -5, 4, -3, 2, -1, 0],
];

/// `j_{Z_t}` of the (8,7) algebra, `t = 0..7`.
pub fn oct87_j() -> Vec<RatMatrix> {
    (1..=7i8)
        .map(|t| {
            RatMatrix::from_fn(8, 8, |r, c| {
                let k = OCT87[r][c];
                if k == t {
                    int(1)
                } else if k == -t {
                    int(-1)
                } else {
                    zero()
                }
            })
        })
        .collect()
}

/// `j_{Z_t}` of the (16,8) algebra built from 8x8 blocks.
pub fn oct168_j() -> Vec<RatMatrix> {
    let mut out = Vec::new();
    for j in oct87_j() {
        let mut m = RatMatrix::zeros(16, 16);
        m.set_block(0, 0, &j);
        m.set_block(8, 8, &-&j);
        out.push(m);
    }
    let mut j8 = RatMatrix::zeros(16, 16);
    j8.set_block(0, 8, &RatMatrix::identity(8).scale(&int(-1)));
    j8.set_block(8, 0, &RatMatrix::identity(8));
    out.push(j8);
    out
}

/// Algebra on the same `v` with center `span(basis)`, brackets projected
/// orthogonally. The basis is orthonormalized exactly; this fails when a
/// norm is not the square of a rational.
pub fn restrict_center(a: &NilAlgebra, basis: &[Vec<Rational>]) -> Result<NilAlgebra, CatalogError> {
    let m = a.dim_z();
    for b in basis {
        if b.len() != m {
            return Err(AlgebraError::DimensionMismatch {
                expected: m,
                got: b.len(),
            }
            .into());
        }
    }
    if basis.is_empty() || rank_of_vectors(basis) < basis.len() {
        return Err(CatalogError::DependentBasis);
    }
    let mut ortho: Vec<Vec<Rational>> = Vec::new();
    for b in basis {
        let mut u = b.clone();
        for w in &ortho {
            let c = dot(b, w);
            if !c.is_zero() {
                for (x, y) in u.iter_mut().zip(w) {
                    *x -= &c * y;
                }
            }
        }
        let norm = rational_sqrt(&dot(&u, &u)).ok_or(CatalogError::IrrationalProjection)?;
        ortho.push(u.into_iter().map(|x| x / &norm).collect());
    }
    let k = ortho.len();
    let entries: Vec<_> = a
        .brackets()
        .iter()
        .map(|(&ij, c)| (ij, ortho.iter().map(|u| dot(u, c)).collect::<Vec<_>>()))
        .collect();
    let z_labels = ortho
        .iter()
        .enumerate()
        .map(|(s, u)| {
            let nz: Vec<usize> = (0..m).filter(|&t| !u[t].is_zero()).collect();
            match nz.as_slice() {
                [t] if u[*t] == int(1) => a.z_labels()[*t].clone(),
                _ => format!("W{}", s + 1),
            }
        })
        .collect::<Vec<_>>();
    let name = format!("{}|{}", a.name(), z_labels.join(","));
    let out = NilAlgebra::from_brackets(name, a.dim_v(), k, entries)?.with_labels(a.v_labels().to_vec(), z_labels)?;
    out.validate()?;
    Ok(out)
}

/// Restriction to the first `k` center basis directions.
pub fn restrict_to_leading(a: &NilAlgebra, k: usize) -> Result<NilAlgebra, CatalogError> {
    let basis: Vec<Vec<Rational>> = (0..k).map(|t| unit(a.dim_z(), t)).collect();
    restrict_center(a, &basis)
}

/// `rho(n) = 2^c + 8d` where `n = odd * 2^(c + 4d)`, `0 <= c <= 3`.
pub fn radon_hurwitz(n: u64) -> u64 {
    assert!(n >= 1, "Radon-Hurwitz number of 0");
    let b = n.trailing_zeros() as u64;
    (1 << (b % 4)) + 8 * (b / 4)
}

/// All `(n, m)` with `1 <= n <= n_max` and `1 <= m < rho(n)`.
pub fn admissible_pairs(n_max: u64) -> Vec<(u64, u64)> {
    (1..=n_max)
        .flat_map(|n| (1..radon_hurwitz(n)).map(move |m| (n, m)))
        .collect()
}

/// Admissible pairs that also satisfy `n <= 2m < 2 rho(n)`.
pub fn type_two_candidate_pairs(n_max: u64) -> Vec<(u64, u64)> {
    admissible_pairs(n_max)
        .into_iter()
        .filter(|&(n, m)| n <= 2 * m && m < radon_hurwitz(n))
        .collect()
}
