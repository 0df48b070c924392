//! 2-step nilpotent metric Lie algebras `n = v + z` with an orthonormal basis
//! `(V_1..V_n, Z_1..Z_m)`.
//!
//! Brackets are stored for index pairs `i < j` (0-based) as coefficient
//! vectors over the center basis, `[V_i, V_j] = sum_t c_ij^t Z_t`. The
//! j-operator is the skew map on `v` with `<j_Z V_i, V_j> = <Z, [V_i, V_j]>`,
//! stored with the image of `V_i` in column `i`.

mod singularity;

pub use singularity::{
    classify_singularity, pfaffian_of, NonSingularCertificate, QuadraticFactor, SingularReason, SingularWitness,
    SingularityVerdict,
    DEFAULT_PROBE_SLICES,
};

use crate::exactmath::matrix::{orthogonal_complement, span_basis, RatMatrix};
use crate::exactmath::poly::{z_vars, MultiPoly, VarNames};
use crate::exactmath::rational::{int, zero, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("bracket index pair ({i}, {j}) out of range for dim v = {dim_v}")]
    IndexOutOfRange { i: usize, j: usize, dim_v: usize },
    #[error("the center must be nonzero (dim z = 0)")]
    EmptyCenter,
    #[error("some nonzero vector of v is central: {witness:?}")]
    CentralVInV { witness: Vec<String> },
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilAlgebra {
    name: String,
    v_labels: Vec<String>,
    z_labels: Vec<String>,
    brackets: BTreeMap<(usize, usize), Vec<Rational>>,
}

/// `C(n)` and `ker j` inside `z`, as canonical (reduced echelon) bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CenterSplit {
    pub commutator_basis: Vec<Vec<Rational>>,
    pub kernel_basis: Vec<Vec<Rational>>,
}

fn default_labels(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

impl NilAlgebra {
    /// Builds an algebra from bracket entries `((i, j), coeffs)` with 0-based
    /// `i != j`; a pair given as `i > j` is stored as `-[V_j, V_i]`, and
    /// repeated pairs accumulate. Index and length checks happen here, the
    /// center check in [`NilAlgebra::validate`].
    pub fn from_brackets(
        name: impl Into<String>,
        dim_v: usize,
        dim_z: usize,
        entries: impl IntoIterator<Item = ((usize, usize), Vec<Rational>)>,
    ) -> Result<Self, AlgebraError> {
        if dim_z == 0 {
            return Err(AlgebraError::EmptyCenter);
        }
        let mut brackets: BTreeMap<(usize, usize), Vec<Rational>> = BTreeMap::new();
        for ((i, j), coeffs) in entries {
            if i >= dim_v || j >= dim_v || i == j {
                return Err(AlgebraError::IndexOutOfRange { i, j, dim_v });
            }
            if coeffs.len() != dim_z {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim_z,
                    got: coeffs.len(),
                });
            }
            let (key, sign) = if i < j { ((i, j), int(1)) } else { ((j, i), int(-1)) };
            let slot = brackets.entry(key).or_insert_with(|| vec![zero(); dim_z]);
            for (s, c) in slot.iter_mut().zip(&coeffs) {
                *s += c * &sign;
            }
        }
        brackets.retain(|_, c| c.iter().any(|x| !x.is_zero()));
        Ok(NilAlgebra {
            name: name.into(),
            v_labels: default_labels("V", dim_v),
            z_labels: default_labels("Z", dim_z),
            brackets,
        })
    }

    /// Builds from one structure-constant callback `c(i, j, t)` evaluated on
    /// all `i < j`.
    pub fn from_fn(
        name: impl Into<String>,
        dim_v: usize,
        dim_z: usize,
        mut c: impl FnMut(usize, usize, usize) -> Rational,
    ) -> Result<Self, AlgebraError> {
        let mut entries = Vec::new();
        for i in 0..dim_v {
            for j in i + 1..dim_v {
                entries.push(((i, j), (0..dim_z).map(|t| c(i, j, t)).collect()));
            }
        }
        Self::from_brackets(name, dim_v, dim_z, entries)
    }

    /// Builds from the j-operators of the center basis: `c_ij^t` is the
    /// entry in row `j`, column `i` of `js[t]`.
    pub fn from_j_operators(name: impl Into<String>, js: &[RatMatrix]) -> Result<Self, AlgebraError> {
        let dim_z = js.len();
        let dim_v = js.first().map_or(0, RatMatrix::rows);
        for j in js {
            if j.rows() != dim_v || j.cols() != dim_v {
                return Err(AlgebraError::DimensionMismatch {
                    expected: dim_v,
                    got: j.rows().max(j.cols()),
                });
            }
        }
        Self::from_fn(name, dim_v, dim_z, |i, j, t| js[t][(j, i)].clone())
    }

    pub fn with_labels(mut self, v_labels: Vec<String>, z_labels: Vec<String>) -> Result<Self, AlgebraError> {
        if v_labels.len() != self.dim_v() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim_v(),
                got: v_labels.len(),
            });
        }
        if z_labels.len() != self.dim_z() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim_z(),
                got: z_labels.len(),
            });
        }
        self.v_labels = v_labels;
        self.z_labels = z_labels;
        Ok(self)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim_v(&self) -> usize {
        self.v_labels.len()
    }

    pub fn dim_z(&self) -> usize {
        self.z_labels.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_v() + self.dim_z()
    }

    pub fn v_labels(&self) -> &[String] {
        &self.v_labels
    }

    pub fn z_labels(&self) -> &[String] {
        &self.z_labels
    }

    /// Nonzero brackets `[V_i, V_j]` with `i < j`.
    pub fn brackets(&self) -> &BTreeMap<(usize, usize), Vec<Rational>> {
        &self.brackets
    }

    /// `c_ij^t` for any `i, j` (antisymmetric in `i, j`).
    pub fn structure_constant(&self, i: usize, j: usize, t: usize) -> Rational {
        match i.cmp(&j) {
            std::cmp::Ordering::Equal => zero(),
            std::cmp::Ordering::Less => self.brackets.get(&(i, j)).map_or_else(zero, |c| c[t].clone()),
            std::cmp::Ordering::Greater => self.brackets.get(&(j, i)).map_or_else(zero, |c| -c[t].clone()),
        }
    }

    /// `[V_i, V_j]` as a center vector.
    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<Rational> {
        (0..self.dim_z()).map(|t| self.structure_constant(i, j, t)).collect()
    }

    /// `[X, Y]` for `X, Y` in `v`.
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        assert_eq!(x.len(), self.dim_v());
        assert_eq!(y.len(), self.dim_v());
        let mut out = vec![zero(); self.dim_z()];
        for (&(i, j), c) in &self.brackets {
            let w = &x[i] * &y[j] - &x[j] * &y[i];
            if w.is_zero() {
                continue;
            }
            for (o, ct) in out.iter_mut().zip(c) {
                *o += &w * ct;
            }
        }
        out
    }

    /// Confirms that no nonzero `V` in `v` is central, i.e. the linear map
    /// `V -> ad(V)|_v` is injective.
    pub fn validate(&self) -> Result<(), AlgebraError> {
        let (n, m) = (self.dim_v(), self.dim_z());
        // rows indexed by (W, t): <[V, V_w], Z_t> as a linear form in V
        let mut rows = Vec::new();
        for w in 0..n {
            for t in 0..m {
                let row: Vec<Rational> = (0..n).map(|i| self.structure_constant(i, w, t)).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        let kernel = if rows.is_empty() {
            orthogonal_complement(n, &[])
        } else {
            RatMatrix::from_rows(rows).nullspace()
        };
        match kernel.first() {
            None => Ok(()),
            Some(v) => Err(AlgebraError::CentralVInV {
                witness: v.iter().map(ToString::to_string).collect(),
            }),
        }
    }

    pub fn check_center_vector(&self, z: &[Rational]) -> Result<(), AlgebraError> {
        if z.len() != self.dim_z() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.dim_z(),
                got: z.len(),
            });
        }
        Ok(())
    }

    /// Matrix of `j_Z` on `v`.
    pub fn j_operator(&self, z: &[Rational]) -> Result<RatMatrix, AlgebraError> {
        self.check_center_vector(z)?;
        let n = self.dim_v();
        let mut j = RatMatrix::zeros(n, n);
        for (&(a, b), c) in &self.brackets {
            let w = c
                .iter()
                .zip(z)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(zero(), |acc, (x, y)| acc + x * y);
            if !w.is_zero() {
                j[(b, a)] = w.clone();
                j[(a, b)] = -w;
            }
        }
        Ok(j)
    }

    /// `j_{Z_t}` for the center basis vector `Z_t`.
    pub fn j_basis(&self, t: usize) -> RatMatrix {
        let mut z = vec![zero(); self.dim_z()];
        z[t] = int(1);
        self.j_operator(&z).expect("basis vector has the right length")
    }

    /// `j_Z` with `Z = z_1 Z_1 + ... + z_m Z_m` as a matrix of linear forms.
    pub fn j_symbolic(&self) -> (VarNames, Vec<Vec<MultiPoly>>) {
        let vars = z_vars(self.dim_z());
        let n = self.dim_v();
        let mut rows = vec![vec![MultiPoly::zero(&vars); n]; n];
        for (&(a, b), c) in &self.brackets {
            let form = MultiPoly::linear(&vars, c);
            rows[a][b] = -&form;
            rows[b][a] = form;
        }
        (vars, rows)
    }

    pub fn center_split(&self) -> CenterSplit {
        let m = self.dim_z();
        let commutator_basis = span_basis(m, &self.brackets.values().cloned().collect::<Vec<_>>());
        let kernel_basis = span_basis(m, &orthogonal_complement(m, &commutator_basis));
        CenterSplit {
            commutator_basis,
            kernel_basis,
        }
    }

    /// `j_{Z_s} j_{Z_t} + j_{Z_t} j_{Z_s} = -2 delta_st Id` for all basis pairs.
    pub fn is_htype(&self) -> bool {
        let n = self.dim_v();
        let js: Vec<RatMatrix> = (0..self.dim_z()).map(|t| self.j_basis(t)).collect();
        let minus_two = RatMatrix::identity(n).scale(&int(-2));
        for s in 0..js.len() {
            for t in s..js.len() {
                let anti = &(&js[s] * &js[t]) + &(&js[t] * &js[s]);
                let ok = if s == t { anti == minus_two } else { anti.is_zero() };
                if !ok {
                    return false;
                }
            }
        }
        true
    }

    /// True iff `[w, w'] = 0` for all pairs of the given vectors of `v`.
    pub fn is_abelian_subspace(&self, basis: &[Vec<Rational>]) -> bool {
        for (k, x) in basis.iter().enumerate() {
            for y in &basis[k + 1..] {
                if self.bracket(x, y).iter().any(|c| !c.is_zero()) {
                    return false;
                }
            }
        }
        true
    }

    /// Appends `d` central generators with no brackets.
    pub fn add_euclidean_factor(&self, d: usize) -> NilAlgebra {
        let m = self.dim_z();
        let mut out = self.clone();
        for c in out.brackets.values_mut() {
            c.extend(std::iter::repeat_with(zero).take(d));
        }
        out.z_labels.extend((m + 1..=m + d).map(|i| format!("E{}", i - m)));
        out.name = format!("{}+R{d}", self.name);
        out
    }
}
