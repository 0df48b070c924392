use nilmag::magnetic::{
    closed_space, exact_space, parallel_space, type1_closed_space, type2_closed_space, warnings, ParallelKind,
    SolutionSpace,
};
use nilmag::nilalgebra::{
    classify_singularity, NilAlgebra, NonSingularCertificate, SingularReason, SingularWitness, SingularityVerdict,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::files::{matrix_strings, vec_strings};

pub type Matrix = Vec<Vec<String>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraInfo {
    pub name: String,
    pub dim_v: usize,
    pub dim_z: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterSplitInfo {
    pub commutator_dim: usize,
    pub kernel_dim: usize,
    pub commutator_basis: Matrix,
    pub kernel_basis: Matrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictInfo {
    pub kind: String,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedDims {
    pub closed_total: usize,
    pub type1: usize,
    pub type2: usize,
    pub exact: usize,
    pub betti2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bases {
    pub type1: Vec<Matrix>,
    pub type2: Vec<Matrix>,
    pub exact: Vec<Matrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelDims {
    pub type1: usize,
    pub type2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationInfo {
    pub base: String,
    pub r: String,
    pub split: String,
    pub z1: usize,
    pub z2: usize,
    pub v1_basis: Matrix,
    pub det_factorization: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pfaffian_sign: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_r_witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub algebra: AlgebraInfo,
    pub h_type: bool,
    pub center_split: CenterSplitInfo,
    pub singularity: VerdictInfo,
    pub closed: ClosedDims,
    pub bases: Bases,
    pub parallel: ParallelDims,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deformation: Option<DeformationInfo>,
}

pub fn space_matrices(s: &SolutionSpace) -> Vec<Matrix> {
    s.basis().iter().map(|f| matrix_strings(f.matrix())).collect()
}

fn witness_json(w: &SingularWitness) -> Value {
    match w {
        SingularWitness::Point { z, kernel } => json!({
            "point": { "z": vec_strings(z), "kernel": vec_strings(kernel) }
        }),
        SingularWitness::Slice { base, direction, slice, root } => json!({
            "slice": {
                "base": vec_strings(base),
                "direction": vec_strings(direction),
                "polynomial": slice.to_string(),
                "root": { "lo": root.lo.to_string(), "hi": root.hi.to_string() }
            }
        }),
    }
}

pub fn verdict_info(v: &SingularityVerdict) -> VerdictInfo {
    let detail = match v {
        SingularityVerdict::Singular { reason, witness } => json!({
            "reason": match reason {
                SingularReason::OddDimension => "OddDimension",
                SingularReason::PfaffianVanishes => "PfaffianVanishes",
            },
            "witness": witness_json(witness),
        }),
        SingularityVerdict::AlmostNonSingular { singular, nonsingular } => json!({
            "singular": witness_json(singular),
            "nonsingular": vec_strings(nonsingular),
        }),
        SingularityVerdict::NonSingular(cert) => match cert {
            NonSingularCertificate::HTypeIdentity => json!({ "certificate": "HTypeIdentity" }),
            NonSingularCertificate::DetFactorization { scale, factors } => json!({
                "certificate": "DetFactorization",
                "scale": scale.to_string(),
                "factors": factors.iter().map(|f| json!({
                    "coordinate": f.coordinate.map(|t| t + 1),
                    "c": f.c.to_string(),
                    "exponent": f.exponent,
                })).collect::<Vec<_>>(),
            }),
            NonSingularCertificate::PositiveSquares { pfaffian } => json!({
                "certificate": "PositiveSquares",
                "pfaffian": pfaffian.to_string(),
            }),
        },
        SingularityVerdict::HeuristicallyNonSingular { slices } => json!({ "slices": slices }),
    };
    VerdictInfo {
        kind: v.kind().to_string(),
        detail,
    }
}

pub fn analyze(a: &NilAlgebra, probe_slices: usize, seed: u64) -> Report {
    let split = a.center_split();
    let type1 = type1_closed_space(a);
    let type2 = type2_closed_space(a);
    let exact = exact_space(a);
    let total = closed_space(a).dim();
    Report {
        algebra: AlgebraInfo {
            name: a.name().to_string(),
            dim_v: a.dim_v(),
            dim_z: a.dim_z(),
        },
        h_type: a.is_htype(),
        center_split: CenterSplitInfo {
            commutator_dim: split.commutator_basis.len(),
            kernel_dim: split.kernel_basis.len(),
            commutator_basis: split.commutator_basis.iter().map(|v| vec_strings(v)).collect(),
            kernel_basis: split.kernel_basis.iter().map(|v| vec_strings(v)).collect(),
        },
        singularity: verdict_info(&classify_singularity(a, probe_slices, seed)),
        closed: ClosedDims {
            closed_total: total,
            type1: type1.dim(),
            type2: type2.dim(),
            exact: exact.dim(),
            betti2: total - exact.dim(),
        },
        bases: Bases {
            type1: space_matrices(&type1),
            type2: space_matrices(&type2),
            exact: space_matrices(&exact),
        },
        parallel: ParallelDims {
            type1: parallel_space(a, ParallelKind::TypeI).dim(),
            type2: parallel_space(a, ParallelKind::TypeII).dim(),
        },
        warnings: warnings(a),
        deformation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilmag::catalog::build_str;

    #[test]
    fn reports_round_trip() {
        for id in ["heisenberg:1", "graph43", "singular52", "quatheis:1"] {
            let r = analyze(&build_str(id).unwrap(), 16, 0);
            let text = serde_json::to_string(&r).unwrap();
            assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
        }
    }

    #[test]
    fn h3_report() {
        let r = analyze(&build_str("heisenberg:1").unwrap(), 16, 0);
        assert_eq!((r.closed.closed_total, r.closed.type2, r.closed.exact, r.closed.betti2), (3, 2, 1, 2));
        assert_eq!(r.bases.type2.len(), 2);
        assert_eq!(r.singularity.detail, json!({ "certificate": "HTypeIdentity" }));
        assert!(r.warnings.is_empty());
    }
}
