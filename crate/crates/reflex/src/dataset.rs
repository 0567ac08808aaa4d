//! Loading of the shipped JSON datasets.
//!
//! A dataset bundles one lattice (integer Gram matrix), optional named
//! isometries, the product candidates with their principal parts, and a
//! list of expected-value checks that the verification driver
//! evaluates. All rationals are stored as exact strings ("p/q" or "p");
//! loading canonicalizes every coset and fails if any vector is not in
//! the dual lattice.

use crate::exact::{Int, IntMatrix, Rat};
use crate::lattice::{DiscriminantGroup, Lattice, LatticeError};
use crate::product::{PrincipalPart, ProductCandidate, Table1Row, Term};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {detail}")]
    Parse { path: PathBuf, detail: String },
    #[error("invalid dataset entry '{label}': {detail}")]
    Validation { label: String, detail: String },
    #[error("invalid lattice: {0}")]
    Lattice(#[from] LatticeError),
}

/// One loaded dataset: lattice, named isometries, candidates (in file
/// order), and the expected-value checks.
#[derive(Debug)]
pub struct LatticeDataset {
    pub name: String,
    pub lattice_name: String,
    pub group: DiscriminantGroup,
    pub isometries: Vec<(String, IntMatrix)>,
    pub candidates: Vec<ProductCandidate>,
    pub checks: Vec<CheckSpec>,
}

impl LatticeDataset {
    pub fn candidate(&self, label: &str) -> Option<&ProductCandidate> {
        self.candidates.iter().find(|c| c.label() == label)
    }

    pub fn candidates_with_prefix(&self, prefix: &str) -> Vec<&ProductCandidate> {
        self.candidates
            .iter()
            .filter(|c| c.label().starts_with(prefix))
            .collect()
    }

    pub fn isometry(&self, label: &str) -> Option<&IntMatrix> {
        self.isometries
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, m)| m)
    }
}

/// A single expected-value check from a dataset's `expected` block.
#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckSpec {
    /// Invariant factors of the discriminant group.
    InvariantFactors { id: String, value: Vec<u64> },
    /// Order of the discriminant group.
    DiscOrder { id: String, value: u64 },
    /// Signature (p, q) of the lattice.
    Signature { id: String, value: [usize; 2] },
    /// Number of cosets (or ± classes) with the given order and norm.
    CosetCount {
        id: String,
        order: u64,
        norm: String,
        pm: bool,
        value: usize,
        #[serde(default)]
        note: Option<String>,
    },
    /// The full coset list with the given order and norm must equal the
    /// recorded list; surplus or missing entries are reported verbatim.
    CosetList {
        id: String,
        order: u64,
        norm: String,
        pm: bool,
        cosets: Vec<Vec<String>>,
        #[serde(default)]
        note: Option<String>,
    },
    /// The candidates with the given label prefix must carry exactly
    /// the cosets (pm: ± classes) found by enumeration.
    CandidatesMatchEnumeration {
        id: String,
        labels_prefix: String,
        order: u64,
        norm: String,
        pm: bool,
    },
    /// Every candidate passes consistency validation.
    CandidatesValidate { id: String },
    /// Candidates with the prefix are tagged singular and their common
    /// weight equals both `value` and the lattice's singular weight.
    SingularWeight {
        id: String,
        labels_prefix: String,
        value: String,
    },
    /// Every divisor class of the selected candidates is reflective
    /// with the given parameter d.
    Divisors {
        id: String,
        #[serde(default)]
        labels_prefix: Option<String>,
        #[serde(default)]
        label: Option<String>,
        value: u64,
    },
    /// Per-exponent reflective parameter d for one candidate's terms.
    TermDivisors {
        id: String,
        label: String,
        values: BTreeMap<String, u64>,
    },
    /// The exponent sequence of one candidate's terms.
    CandidateExponents {
        id: String,
        label: String,
        value: Vec<String>,
    },
    /// Every coset of the selected candidates has this order and norm.
    CandidateCosetsIn {
        id: String,
        #[serde(default)]
        label: Option<String>,
        #[serde(default)]
        labels_prefix: Option<String>,
        order: u64,
        norm: String,
    },
    /// Orbit count of the named isometry on the enumerated cosets.
    IsometryOrbitCount {
        id: String,
        isometry: String,
        order: u64,
        norm: String,
        value: usize,
    },
    /// Number of enumerated cosets fixed by the named isometry.
    IsometryInvariantCount {
        id: String,
        isometry: String,
        order: u64,
        norm: String,
        value: usize,
    },
    /// Each candidate's coset pair is exchanged by the named isometry.
    SwapPairs {
        id: String,
        labels_prefix: String,
        isometry: String,
    },
    /// Full star-set audit of the compatibility graph on the candidates
    /// with the given prefix.
    StarGraph {
        id: String,
        vertex_prefix: String,
        regular: usize,
        edges: usize,
        clique_size: usize,
        clique_count: usize,
        per_vertex: usize,
        pair_histogram: BTreeMap<String, usize>,
        srg: Option<[usize; 4]>,
        automorphism_order: String,
        cliques: Vec<Vec<String>>,
    },
    /// Components of the pairs-in-at-least-two-cliques relation and the
    /// strong-regularity parameters of the contracted graph.
    ExceptionalClasses {
        id: String,
        classes: Vec<Vec<String>>,
        contracted_srg: [usize; 4],
    },
    /// The given label set must appear among the maximal cliques.
    CliqueContains { id: String, labels: Vec<String> },
    /// Orbit sizes (sorted) of the group generated by all induced
    /// reflections, acting on the cosets of the given order and norm.
    ReflectionOrbitSplit {
        id: String,
        order: u64,
        norm: String,
        sizes: Vec<usize>,
        #[serde(default)]
        note: Option<String>,
    },
    /// Order of the group generated by the named candidates' induced
    /// reflections.
    ReflectionGroupOrder {
        id: String,
        generators: Vec<String>,
        value: String,
    },
    /// Arithmetic identity: the weighted part counts sum to the total.
    WeightSum {
        id: String,
        name: String,
        total: String,
        parts: Vec<WeightPart>,
    },
    /// Number of ± classes (or cosets) of the given order and norm that
    /// admit no reflective parameter.
    NonReflectiveCount {
        id: String,
        order: u64,
        norm: String,
        pm: bool,
        value: usize,
    },
}

#[derive(Debug, Clone, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WeightPart {
    pub weight: String,
    pub count: usize,
}

impl CheckSpec {
    pub fn id(&self) -> &str {
        match self {
            CheckSpec::InvariantFactors { id, .. }
            | CheckSpec::DiscOrder { id, .. }
            | CheckSpec::Signature { id, .. }
            | CheckSpec::CosetCount { id, .. }
            | CheckSpec::CosetList { id, .. }
            | CheckSpec::CandidatesMatchEnumeration { id, .. }
            | CheckSpec::CandidatesValidate { id }
            | CheckSpec::SingularWeight { id, .. }
            | CheckSpec::Divisors { id, .. }
            | CheckSpec::TermDivisors { id, .. }
            | CheckSpec::CandidateExponents { id, .. }
            | CheckSpec::CandidateCosetsIn { id, .. }
            | CheckSpec::IsometryOrbitCount { id, .. }
            | CheckSpec::IsometryInvariantCount { id, .. }
            | CheckSpec::SwapPairs { id, .. }
            | CheckSpec::StarGraph { id, .. }
            | CheckSpec::ExceptionalClasses { id, .. }
            | CheckSpec::CliqueContains { id, .. }
            | CheckSpec::ReflectionOrbitSplit { id, .. }
            | CheckSpec::ReflectionGroupOrder { id, .. }
            | CheckSpec::WeightSum { id, .. }
            | CheckSpec::NonReflectiveCount { id, .. } => id,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDataset {
    schema: String,
    name: String,
    lattice: RawLattice,
    #[serde(default)]
    isometries: Vec<RawIsometry>,
    candidates: Vec<RawCandidate>,
    #[serde(default)]
    expected: Vec<CheckSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLattice {
    name: String,
    gram: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIsometry {
    label: String,
    matrix: Vec<Vec<i64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCandidate {
    label: String,
    #[serde(default)]
    weight: Option<String>,
    terms: Vec<RawTerm>,
    #[serde(default)]
    constant_coefficient: Option<String>,
    #[serde(default)]
    tags: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    exponent: String,
    cosets: Vec<Vec<String>>,
}

pub fn parse_rat(text: &str) -> Result<Rat, String> {
    Rat::from_str(text.trim()).map_err(|e| format!("bad rational '{text}': {e}"))
}

pub fn parse_int(text: &str) -> Result<Int, String> {
    Int::from_str(text.trim()).map_err(|e| format!("bad integer '{text}': {e}"))
}

fn parse_rat_for(label: &str, text: &str) -> Result<Rat, DatasetError> {
    parse_rat(text).map_err(|detail| DatasetError::Validation { label: label.into(), detail })
}

pub fn parse_coords(label: &str, coords: &[String]) -> Result<Vec<Rat>, DatasetError> {
    coords.iter().map(|c| parse_rat_for(label, c)).collect()
}

/// Load and structurally validate one dataset file: JSON shape, schema
/// version, lattice axioms, isometry property, dual membership of every
/// candidate coset. Semantic candidate consistency (exponent
/// congruences, weights) is the business of the verification checks.
pub fn load_dataset(path: &Path) -> Result<LatticeDataset, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawDataset =
        serde_json::from_str(&text).map_err(|e| DatasetError::Parse {
            path: path.to_path_buf(),
            detail: e.to_string(),
        })?;
    if raw.schema != "1" {
        return Err(DatasetError::Parse {
            path: path.to_path_buf(),
            detail: format!("unsupported schema '{}', expected '1'", raw.schema),
        });
    }
    let gram = IntMatrix::from_rows(raw.lattice.gram).map_err(|e| DatasetError::Parse {
        path: path.to_path_buf(),
        detail: format!("gram matrix: {e}"),
    })?;
    let lattice = Lattice::new(gram)?;
    let group = DiscriminantGroup::new(lattice);

    let mut isometries = Vec::new();
    for raw_isometry in raw.isometries {
        let matrix =
            IntMatrix::from_rows(raw_isometry.matrix).map_err(|e| DatasetError::Validation {
                label: raw_isometry.label.clone(),
                detail: e.to_string(),
            })?;
        if !group.lattice().is_isometry(&matrix) {
            return Err(DatasetError::Validation {
                label: raw_isometry.label,
                detail: "matrix does not preserve the gram form".into(),
            });
        }
        isometries.push((raw_isometry.label, matrix));
    }

    let mut candidates = Vec::new();
    for raw_candidate in raw.candidates {
        let label = raw_candidate.label.clone();
        let mut terms = Vec::new();
        for raw_term in &raw_candidate.terms {
            let exponent = parse_rat_for(&label, &raw_term.exponent)?;
            let mut cosets = Vec::new();
            for coords in &raw_term.cosets {
                let coords = parse_coords(&label, coords)?;
                let coset = group.coset(&coords).map_err(|e| DatasetError::Validation {
                    label: label.clone(),
                    detail: e.to_string(),
                })?;
                cosets.push(coset);
            }
            terms.push(Term { exponent, cosets });
        }
        let constant_coefficient = raw_candidate
            .constant_coefficient
            .as_deref()
            .map(|c| {
                parse_int(c).map_err(|detail| DatasetError::Validation {
                    label: label.clone(),
                    detail,
                })
            })
            .transpose()?;
        let weight = raw_candidate
            .weight
            .as_deref()
            .map(|w| parse_rat_for(&label, w))
            .transpose()?;
        candidates.push(ProductCandidate::new(
            label,
            group.clone(),
            PrincipalPart { terms, constant_coefficient },
            weight,
            raw_candidate.tags,
        ));
    }

    Ok(LatticeDataset {
        name: raw.name,
        lattice_name: raw.lattice.name,
        group,
        isometries,
        candidates,
        checks: raw.expected,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTable {
    schema: String,
    #[allow(dead_code)]
    name: String,
    rows: Vec<RawRow>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRow {
    group: String,
    n: usize,
    jacobian_weight: String,
    generator_weights: Vec<String>,
    square_decomposition: Vec<WeightPart>,
}

/// Load the generator/Jacobian weight table.
pub fn load_table1(path: &Path) -> Result<Vec<Table1Row>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: RawTable = serde_json::from_str(&text).map_err(|e| DatasetError::Parse {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })?;
    if raw.schema != "1" {
        return Err(DatasetError::Parse {
            path: path.to_path_buf(),
            detail: format!("unsupported schema '{}', expected '1'", raw.schema),
        });
    }
    let mut rows = Vec::new();
    for raw_row in raw.rows {
        let label = raw_row.group.clone();
        let context = |detail| DatasetError::Validation { label: label.clone(), detail };
        rows.push(Table1Row {
            group_name: raw_row.group,
            n: raw_row.n,
            jacobian_weight: parse_rat(&raw_row.jacobian_weight).map_err(context)?,
            generator_weights: raw_row
                .generator_weights
                .iter()
                .map(|w| parse_rat(w).map_err(|d| DatasetError::Validation {
                    label: label.clone(),
                    detail: d,
                }))
                .collect::<Result<_, _>>()?,
            square_decomposition: raw_row
                .square_decomposition
                .iter()
                .map(|part| {
                    Ok((
                        parse_rat(&part.weight).map_err(|d| DatasetError::Validation {
                            label: label.clone(),
                            detail: d,
                        })?,
                        part.count,
                    ))
                })
                .collect::<Result<_, DatasetError>>()?,
        });
    }
    Ok(rows)
}

/// Resolve a dataset argument: an existing path is used as is,
/// otherwise `<data_dir>/<name>.json`.
pub fn resolve_dataset(name_or_path: &str, data_dir: &Path) -> PathBuf {
    let direct = Path::new(name_or_path);
    if direct.exists() {
        return direct.to_path_buf();
    }
    if name_or_path.ends_with(".json") {
        return direct.to_path_buf();
    }
    data_dir.join(format!("{name_or_path}.json"))
}
