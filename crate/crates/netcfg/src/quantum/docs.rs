//! JSON documents for network states and per-party bases.
//!
//! State document: a list of components, each with a family, its parameters,
//! an optional `visibility` (depolarizing noise, default 1), and an
//! `assignment` giving the 1-based owning party of every subsystem. Complex
//! numbers are `[re, im]` pairs.
//!
//! Basis document: one entry per party, `{"kind": ...}` plus parameters, or
//! explicit `vectors`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{
    add_noise, assemble, make_basis, make_state, BasisSpec, Cx, MeasurementBasis,
    NetworkQuantumState, StateSpec,
};

#[derive(Serialize, Deserialize)]
struct ComponentDoc {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alphas: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    phi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    dims: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    visibility: Option<f64>,
    assignment: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct StateDoc {
    components: Vec<ComponentDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parties: Option<usize>,
}

fn cx(pair: [f64; 2]) -> Cx {
    Cx::new(pair[0], pair[1])
}

fn missing(family: &str, field: &str) -> Error {
    Error::Parse(format!("component family `{family}` needs field `{field}`"))
}

/// Parse the state document into an assembled network state.
pub fn parse_state(document: &str) -> Result<NetworkQuantumState> {
    let doc: StateDoc = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let mut components = Vec::with_capacity(doc.components.len());
    let mut assignment = Vec::with_capacity(doc.components.len());
    for entry in &doc.components {
        let fam = entry.family.as_str();
        let spec = match fam {
            "ghz" => StateSpec::Ghz {
                theta: entry.theta.ok_or_else(|| missing(fam, "theta"))?,
                qubits: entry.qubits.unwrap_or(entry.assignment.len()),
            },
            "epr" => StateSpec::Epr {
                theta: entry.theta.ok_or_else(|| missing(fam, "theta"))?,
            },
            "w3" => StateSpec::W3 {
                theta: entry.theta.ok_or_else(|| missing(fam, "theta"))?,
                gamma: entry.gamma.ok_or_else(|| missing(fam, "gamma"))?,
            },
            "wn" => StateSpec::Wn {
                alphas: entry.alphas.clone().ok_or_else(|| missing(fam, "alphas"))?,
            },
            "acin" => {
                let a = entry.alphas.clone().ok_or_else(|| missing(fam, "alphas"))?;
                if a.len() != 5 {
                    return Err(Error::Parse("acin needs exactly 5 amplitudes".into()));
                }
                StateSpec::Acin {
                    alphas: [a[0], a[1], a[2], a[3], a[4]],
                    phi: entry.phi.unwrap_or(0.0),
                }
            }
            "product" => StateSpec::Product {
                vectors: entry
                    .vectors
                    .clone()
                    .ok_or_else(|| missing(fam, "vectors"))?
                    .into_iter()
                    .map(|v| v.into_iter().map(cx).collect())
                    .collect(),
            },
            "custom" => {
                let dims = entry.dims.clone().ok_or_else(|| missing(fam, "dims"))?;
                if let Some(v) = &entry.vector {
                    StateSpec::CustomVector {
                        vector: v.iter().map(|&p| cx(p)).collect(),
                        dims,
                    }
                } else if let Some(rows) = &entry.matrix {
                    let d = rows.len();
                    let mut m = DMatrix::from_element(d, d, Cx::new(0.0, 0.0));
                    for (i, row) in rows.iter().enumerate() {
                        if row.len() != d {
                            return Err(Error::Parse("density matrix must be square".into()));
                        }
                        for (j, &p) in row.iter().enumerate() {
                            m[(i, j)] = cx(p);
                        }
                    }
                    StateSpec::CustomDensity { matrix: m, dims }
                } else {
                    return Err(missing(fam, "vector or matrix"));
                }
            }
            other => return Err(Error::Parse(format!("unknown state family `{other}`"))),
        };
        let mut component = make_state(&spec)?;
        if let Some(v) = entry.visibility {
            component = add_noise(&component, v)?;
        }
        if entry.assignment.len() != component.dims().len() {
            return Err(Error::State(format!(
                "family `{fam}` has {} subsystems, assignment lists {}",
                component.dims().len(),
                entry.assignment.len()
            )));
        }
        components.push(component);
        assignment.push(entry.assignment.clone());
    }
    let n_parties = doc
        .parties
        .unwrap_or_else(|| assignment.iter().flatten().copied().max().unwrap_or(0));
    assemble(components, assignment, n_parties)
}

/// Serialize a state built from explicit density matrices (the generic form;
/// family information is not retained).
pub fn serialize_state(state: &NetworkQuantumState) -> String {
    let components = state
        .components()
        .iter()
        .zip(state.assignment())
        .map(|(c, owners)| {
            let d = c.dim();
            let matrix: Vec<Vec<[f64; 2]>> = (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| [c.rho()[(i, j)].re, c.rho()[(i, j)].im])
                        .collect()
                })
                .collect();
            ComponentDoc {
                family: "custom".into(),
                theta: None,
                gamma: None,
                qubits: None,
                alphas: None,
                phi: None,
                vectors: None,
                vector: None,
                matrix: Some(matrix),
                dims: Some(c.dims().to_vec()),
                visibility: None,
                assignment: owners.iter().map(|&p| p + 1).collect(),
            }
        })
        .collect();
    let doc = StateDoc {
        components,
        parties: Some(state.n_parties()),
    };
    serde_json::to_string_pretty(&doc).expect("state document serialization")
}

#[derive(Serialize, Deserialize)]
struct BasisEntry {
    kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    qubits: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    vectors: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Serialize, Deserialize)]
struct BasisDoc {
    bases: Vec<BasisEntry>,
}

/// Parse the basis document against a state's party dimensions.
pub fn parse_bases(document: &str, state: &NetworkQuantumState) -> Result<Vec<MeasurementBasis>> {
    let doc: BasisDoc = serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let dims = state.party_dims();
    if doc.bases.len() != dims.len() {
        return Err(Error::Dimension(format!(
            "{} bases for {} parties",
            doc.bases.len(),
            dims.len()
        )));
    }
    doc.bases
        .iter()
        .zip(&dims)
        .map(|(entry, &dim)| {
            let spec = match entry.kind.as_str() {
                "computational" => BasisSpec::Computational,
                "bell2" => BasisSpec::Bell2,
                "gamma" => BasisSpec::Gamma {
                    gamma: entry.gamma.ok_or_else(|| missing("gamma", "gamma"))?,
                },
                "star_ghz" => BasisSpec::StarGhz {
                    qubits: entry.qubits.ok_or_else(|| missing("star_ghz", "qubits"))?,
                },
                "rotated" => {
                    let rows = entry
                        .matrix
                        .as_ref()
                        .ok_or_else(|| missing("rotated", "matrix"))?;
                    let d = rows.len();
                    let mut m = DMatrix::from_element(d, d, Cx::new(0.0, 0.0));
                    for (i, row) in rows.iter().enumerate() {
                        if row.len() != d {
                            return Err(Error::Parse("rotation matrix must be square".into()));
                        }
                        for (j, &p) in row.iter().enumerate() {
                            m[(i, j)] = cx(p);
                        }
                    }
                    BasisSpec::Rotated { matrix: m }
                }
                "custom" => {
                    let vectors = entry
                        .vectors
                        .as_ref()
                        .ok_or_else(|| missing("custom", "vectors"))?
                        .iter()
                        .map(|v| DVector::from_iterator(v.len(), v.iter().map(|&p| cx(p))))
                        .collect();
                    BasisSpec::Custom { vectors }
                }
                other => return Err(Error::Parse(format!("unknown basis kind `{other}`"))),
            };
            make_basis(&spec, dim)
        })
        .collect()
}
