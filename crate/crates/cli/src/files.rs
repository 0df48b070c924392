//! JSON file formats. Rationals travel as strings, indices are 1-based.

use std::collections::BTreeMap;
use std::path::Path;

use nilmag::exactmath::matrix::RatMatrix;
use nilmag::exactmath::rational::{format_rational, parse_rational, zero, Rational};
use nilmag::magnetic::LorentzForce;
use nilmag::nilalgebra::NilAlgebra;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    /// z-index (1-based) to coefficient.
    pub coeffs: BTreeMap<usize, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    pub name: String,
    pub dim_v: usize,
    pub dim_z: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_labels: Option<Vec<String>>,
    pub brackets: Vec<BracketEntry>,
}

/// Skew `(n + m) x (n + m)` matrix of a force, rows of rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForceFile {
    pub dim_v: usize,
    pub dim_z: usize,
    pub matrix: Vec<Vec<String>>,
}

pub fn rational(text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::Parse(format!("bad rational {:?}", e.0)))
}

pub fn vec_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| vec_strings(r)).collect()
}

impl AlgebraFile {
    pub fn from_algebra(a: &NilAlgebra) -> Self {
        let brackets = a
            .brackets()
            .iter()
            .map(|(&(i, j), c)| BracketEntry {
                i: i + 1,
                j: j + 1,
                coeffs: c
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(t, x)| (t + 1, format_rational(x)))
                    .collect(),
            })
            .collect();
        AlgebraFile {
            name: a.name().to_string(),
            dim_v: a.dim_v(),
            dim_z: a.dim_z(),
            v_labels: Some(a.v_labels().to_vec()),
            z_labels: Some(a.z_labels().to_vec()),
            brackets,
        }
    }

    /// Builds and validates the algebra.
    pub fn to_algebra(&self) -> Result<NilAlgebra, CliError> {
        let mut seen = std::collections::BTreeSet::new();
        let mut entries = Vec::new();
        for b in &self.brackets {
            if b.i == 0 || b.i >= b.j || b.j > self.dim_v {
                return Err(CliError::Parse(format!(
                    "bracket ({}, {}) must satisfy 1 <= i < j <= dim_v = {}",
                    b.i, b.j, self.dim_v
                )));
            }
            if !seen.insert((b.i, b.j)) {
                return Err(CliError::Parse(format!("bracket ({}, {}) given twice", b.i, b.j)));
            }
            let mut coeffs = vec![zero(); self.dim_z];
            for (&t, text) in &b.coeffs {
                if t == 0 || t > self.dim_z {
                    return Err(CliError::Parse(format!("z-index {t} out of range 1..={}", self.dim_z)));
                }
                coeffs[t - 1] = rational(text)?;
            }
            entries.push(((b.i - 1, b.j - 1), coeffs));
        }
        let mut a = NilAlgebra::from_brackets(self.name.clone(), self.dim_v, self.dim_z, entries)?;
        if self.v_labels.is_some() || self.z_labels.is_some() {
            let v = self.v_labels.clone().unwrap_or_else(|| a.v_labels().to_vec());
            let z = self.z_labels.clone().unwrap_or_else(|| a.z_labels().to_vec());
            a = a.with_labels(v, z)?;
        }
        a.validate()?;
        Ok(a)
    }
}

impl ForceFile {
    pub fn to_force(&self) -> Result<LorentzForce, CliError> {
        let d = self.dim_v + self.dim_z;
        if self.matrix.len() != d || self.matrix.iter().any(|r| r.len() != d) {
            return Err(CliError::Parse(format!("force matrix must be {d} x {d}")));
        }
        let rows = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| rational(x)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LorentzForce::new(self.dim_v, self.dim_z, RatMatrix::from_rows(rows))?)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use nilmag::catalog::{build, CatalogId};

    #[test]
    fn catalog_round_trips_through_files() {
        for id in CatalogId::listing().into_iter().filter(|id| *id != CatalogId::Singular52) {
            let a = build(id).unwrap();
            let file = AlgebraFile::from_algebra(&a);
            let back: AlgebraFile = serde_json::from_str(&to_json(&file)).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.to_algebra().unwrap(), a, "{id}");
        }
    }

    #[test]
    fn rejects_bad_files() {
        let parse = |text: &str| serde_json::from_str::<AlgebraFile>(text).unwrap().to_algebra();
        let h3 = r#"{"name":"h","dim_v":2,"dim_z":1,"brackets":[{"i":1,"j":2,"coeffs":{"1":"1"}}]}"#;
        assert!(parse(h3).is_ok());
        assert!(parse(&h3.replace(r#""i":1,"j":2"#, r#""i":2,"j":1"#)).is_err());
        assert!(parse(&h3.replace(r#"{"1":"1"}"#, r#"{"2":"1"}"#)).is_err());
        assert!(parse(&h3.replace(r#""1":"1""#, r#""1":"x/2""#)).is_err());
        // V3 is central
        assert!(matches!(parse(&h3.replace(r#""dim_v":2"#, r#""dim_v":3"#)), Err(CliError::Algebra(_))));
        assert!(serde_json::from_str::<AlgebraFile>(&h3.replace(r#""name""#, r#""nmae""#)).is_err());
    }

    #[test]
    fn force_file_checks_shape_and_skewness() {
        let f = ForceFile {
            dim_v: 2,
            dim_z: 1,
            matrix: vec![vec!["0".into(), "-1".into(), "0".into()], vec!["1".into(), "0".into(), "0".into()], vec!["0".into(); 3]],
        };
        assert!(f.to_force().unwrap().is_type_one());
        let mut bad = f.clone();
        bad.matrix[0][1] = "1".into();
        assert!(matches!(bad.to_force(), Err(CliError::Magnetic(_))));
        bad.matrix.pop();
        assert!(matches!(bad.to_force(), Err(CliError::Parse(_))));
    }
}
