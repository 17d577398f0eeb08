//! JSON file formats: Lie algebras by sparse bracket tables, compact-group
//! specs, and generator lists. Scalars are exact literals (`"p/q"`,
//! `"p/q+r/s*i"`); omitted brackets are zero.

use crate::compact::{CompactGroupSpec, ComponentDatum, TorusWeights};
use crate::lie::LieAlgebra;
use crate::scalar::{parse_gaussian, parse_rational, rat_to_string, GaussianRational, Rat};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: String, message: String },
    #[error("{path}: {message}")]
    Semantic { path: String, message: String },
}

fn parse_err(path: &Path, message: impl Into<String>) -> FileError {
    FileError::Parse { path: path.display().to_string(), message: message.into() }
}

fn semantic_err(path: &Path, message: impl Into<String>) -> FileError {
    FileError::Semantic { path: path.display().to_string(), message: message.into() }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum IndexOrName {
    Index(usize),
    Name(String),
}

#[derive(Debug, Deserialize)]
pub struct BracketEntry {
    pub i: IndexOrName,
    pub j: IndexOrName,
    pub coeffs: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
pub struct AlgebraFile {
    pub dim: usize,
    pub basis: Vec<String>,
    #[serde(default)]
    pub brackets: Vec<BracketEntry>,
}

#[derive(Debug, Deserialize)]
pub struct ComponentFile {
    pub label: String,
    pub torus_aut: Vec<Vec<i64>>,
    pub rep_matrix: Vec<Vec<String>>,
}

#[derive(Debug, Deserialize)]
pub struct GroupSpecFile {
    pub torus_rank: usize,
    pub weights: Vec<Vec<i64>>,
    pub components: Vec<ComponentFile>,
    pub component_table: Vec<Vec<IndexOrName>>,
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path)
        .map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

fn resolve_index(
    which: &IndexOrName,
    names: &[String],
    path: &Path,
    context: &str,
) -> Result<usize, FileError> {
    match which {
        IndexOrName::Index(i) => {
            if *i < names.len() {
                Ok(*i)
            } else {
                Err(semantic_err(path, format!("{context}: index {i} out of range")))
            }
        }
        IndexOrName::Name(n) => names
            .iter()
            .position(|b| b == n)
            .ok_or_else(|| semantic_err(path, format!("{context}: unknown name {n}"))),
    }
}

/// Loads a Lie algebra file. The structure constants are completed
/// antisymmetrically for pairs given in one order only; `validate` is the
/// caller's job so that violations are reported with locations.
pub fn load_algebra(path: &Path) -> Result<LieAlgebra, FileError> {
    let text = read(path)?;
    parse_algebra_str(&text, path)
}

/// Parses algebra-file JSON from a string; `origin` labels diagnostics.
pub fn parse_algebra_str(text: &str, origin: &Path) -> Result<LieAlgebra, FileError> {
    let path = origin;
    let file: AlgebraFile =
        serde_json::from_str(text).map_err(|e| parse_err(path, e.to_string()))?;
    if file.basis.len() != file.dim {
        return Err(semantic_err(
            path,
            format!("basis has {} names for dim {}", file.basis.len(), file.dim),
        ));
    }
    let mut brackets = Vec::new();
    for (bi, entry) in file.brackets.iter().enumerate() {
        let ctx = format!("brackets[{bi}]");
        let i = resolve_index(&entry.i, &file.basis, path, &ctx)?;
        let j = resolve_index(&entry.j, &file.basis, path, &ctx)?;
        let mut coeffs = Vec::new();
        for (key, value) in &entry.coeffs {
            let k = if let Ok(idx) = key.parse::<usize>() {
                if idx >= file.dim {
                    return Err(semantic_err(path, format!("{ctx}: index {idx} out of range")));
                }
                idx
            } else {
                resolve_index(&IndexOrName::Name(key.clone()), &file.basis, path, &ctx)?
            };
            let v = parse_rational(value)
                .map_err(|e| semantic_err(path, format!("{ctx}: {e}")))?;
            coeffs.push((k, v));
        }
        brackets.push((i, j, coeffs));
    }
    Ok(LieAlgebra::from_sparse(file.dim, file.basis, &brackets))
}

/// Loads a compact-group spec file; does not validate.
pub fn load_group_spec(path: &Path) -> Result<CompactGroupSpec, FileError> {
    let text = read(path)?;
    parse_group_spec_str(&text, path)
}

/// Parses spec-file JSON from a string; `origin` labels diagnostics.
pub fn parse_group_spec_str(text: &str, origin: &Path) -> Result<CompactGroupSpec, FileError> {
    let path = origin;
    let file: GroupSpecFile =
        serde_json::from_str(text).map_err(|e| parse_err(path, e.to_string()))?;
    let labels: Vec<String> = file.components.iter().map(|c| c.label.clone()).collect();
    let mut components = Vec::new();
    for comp in &file.components {
        let mut rep = Vec::new();
        for row in &comp.rep_matrix {
            let mut out = Vec::new();
            for entry in row {
                out.push(
                    parse_gaussian(entry)
                        .map_err(|e| semantic_err(path, format!("component {}: {e}", comp.label)))?,
                );
            }
            rep.push(out);
        }
        components.push(ComponentDatum {
            label: comp.label.clone(),
            torus_aut: comp.torus_aut.clone(),
            rep_matrix: rep,
        });
    }
    let mut table = Vec::new();
    for row in &file.component_table {
        let mut out = Vec::new();
        for entry in row {
            out.push(resolve_index(entry, &labels, path, "component_table")?);
        }
        table.push(out);
    }
    Ok(CompactGroupSpec {
        weights: TorusWeights { torus_rank: file.torus_rank, weights: file.weights },
        components,
        component_table: table,
    })
}

/// Generator files: a JSON array of vectors of rational literals.
pub fn load_generators(path: &Path) -> Result<Vec<Vec<Rat>>, FileError> {
    let text = read(path)?;
    let raw: Vec<Vec<String>> =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
    let mut out = Vec::new();
    for (i, row) in raw.iter().enumerate() {
        let mut v = Vec::new();
        for entry in row {
            v.push(
                parse_rational(entry)
                    .map_err(|e| semantic_err(path, format!("row {i}: {e}")))?,
            );
        }
        out.push(v);
    }
    Ok(out)
}

/// Pythagorean triple list: a JSON array of [a, b, c] with a² + b² = c².
pub fn load_triples(path: &Path) -> Result<Vec<(i64, i64, i64)>, FileError> {
    let text = read(path)?;
    let raw: Vec<Vec<i64>> =
        serde_json::from_str(&text).map_err(|e| parse_err(path, e.to_string()))?;
    let mut out = Vec::new();
    for (i, t) in raw.iter().enumerate() {
        if t.len() != 3 || t[0] * t[0] + t[1] * t[1] != t[2] * t[2] {
            return Err(semantic_err(path, format!("entry {i} is not a Pythagorean triple")));
        }
        out.push((t[0], t[1], t[2]));
    }
    Ok(out)
}

/// Renders a spec back to its file format (used by `reduce`).
pub fn spec_to_json(spec: &CompactGroupSpec) -> serde_json::Value {
    let gauss_str = |g: &GaussianRational| g.to_literal();
    serde_json::json!({
        "torus_rank": spec.weights.torus_rank,
        "weights": spec.weights.weights,
        "components": spec.components.iter().map(|c| serde_json::json!({
            "label": c.label,
            "torus_aut": c.torus_aut,
            "rep_matrix": c.rep_matrix.iter().map(|row| {
                row.iter().map(&gauss_str).collect::<Vec<_>>()
            }).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "component_table": spec.component_table,
    })
}

/// ChainReport as JSON with exact rational strings.
pub fn chain_report_to_json(report: &crate::lattice::ChainReport) -> serde_json::Value {
    serde_json::json!({
        "ranks": report.ranks,
        "covolumes": report.covolumes.iter().map(rat_to_string).collect::<Vec<_>>(),
        "stabilized_at": report.stabilized_at,
        "verdict": match report.verdict {
            crate::lattice::ChainVerdict::Stabilized => "stabilized",
            crate::lattice::ChainVerdict::NotStabilizedByBound => "not_stabilized_by_bound",
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("compel-file-tests");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join(name);
        let mut f = std::fs::File::create(&path).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        path
    }

    #[test]
    fn algebra_roundtrip() {
        let path = write_temp(
            "h3.json",
            r#"{"dim": 3, "basis": ["x", "y", "z"],
                "brackets": [{"i": 0, "j": 1, "coeffs": {"z": "1"}}]}"#,
        );
        let a = load_algebra(&path).unwrap();
        assert_eq!(a.dim, 3);
        a.validate().unwrap();
        assert!(a.is_nilpotent());
    }

    #[test]
    fn algebra_names_and_indices_mix() {
        let path = write_temp(
            "aff1.json",
            r#"{"dim": 2, "basis": ["h", "x"],
                "brackets": [{"i": "h", "j": "x", "coeffs": {"1": "1"}}]}"#,
        );
        let a = load_algebra(&path).unwrap();
        a.validate().unwrap();
        assert!(!a.is_nilpotent());
    }

    #[test]
    fn group_spec_parses() {
        let path = write_temp(
            "z2.json",
            r#"{
                "torus_rank": 1,
                "weights": [[1], [-1]],
                "components": [
                    {"label": "1", "torus_aut": [[1]], "rep_matrix": [["1", "0"], ["0", "1"]]},
                    {"label": "s", "torus_aut": [[-1]], "rep_matrix": [["0", "1"], ["1", "0"]]}
                ],
                "component_table": [[0, 1], [1, 0]]
            }"#,
        );
        let spec = load_group_spec(&path).unwrap();
        spec.validate().unwrap();
        assert!(!spec.almost_elliptic());
    }

    #[test]
    fn generator_file_parses() {
        let path = write_temp("gens.json", r#"[["1", "-1/2"], ["0", "2"]]"#);
        let gens = load_generators(&path).unwrap();
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[0][1], crate::scalar::rat(-1, 2));
    }

    #[test]
    fn spec_json_roundtrips() {
        let path = write_temp(
            "roundtrip.json",
            r#"{
                "torus_rank": 1,
                "weights": [[1], [-1]],
                "components": [
                    {"label": "1", "torus_aut": [[1]], "rep_matrix": [["1", "0"], ["0", "1"]]},
                    {"label": "s", "torus_aut": [[-1]], "rep_matrix": [["0", "1/2+1/2*i"], ["1", "0"]]}
                ],
                "component_table": [[0, 1], [1, 0]]
            }"#,
        );
        let spec = load_group_spec(&path).unwrap();
        let rendered = serde_json::to_string(&spec_to_json(&spec)).unwrap();
        let back = parse_group_spec_str(&rendered, std::path::Path::new("<inline>")).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn bad_files_are_reported() {
        let path = write_temp("broken.json", r#"{"dim": 2"#);
        assert!(matches!(load_algebra(&path), Err(FileError::Parse { .. })));
        let path = write_temp(
            "bad_dim.json",
            r#"{"dim": 3, "basis": ["x"], "brackets": []}"#,
        );
        assert!(matches!(load_algebra(&path), Err(FileError::Semantic { .. })));
        let path = write_temp("bad_triple.json", r#"[[3, 4, 6]]"#);
        assert!(load_triples(&path).is_err());
    }
}
