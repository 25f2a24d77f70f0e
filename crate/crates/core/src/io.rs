//! JSON instance and result files.
//!
//! Root edges never appear in instance files; they are implied. In result
//! files the root is `"r"` and root edges carry the edge id `"root"`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::augment::{Arborescence, AugmentedDigraph, ROOT_EDGE_LABEL};
use crate::certificate::{DualSet, DualSolution};
use crate::error::ModelError;
use crate::graph::{Digraph, DigraphView, EdgeId, EdgeSpec, VertexId, VertexSet, ROOT_LABEL};
use crate::solver::{NoneReason, SolveOutcome};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub vertices: Vec<VertexEntry>,
    pub edges: Vec<EdgeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: String,
    pub weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub id: String,
    pub src: String,
    pub dst: String,
    pub rank: i64,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("invalid instance at {path}: {source}")]
    Model {
        path: String,
        #[source]
        source: ModelError,
    },
}

impl ParseError {
    pub fn path(&self) -> &str {
        match self {
            ParseError::Schema { path, .. } | ParseError::Model { path, .. } => path,
        }
    }
}

fn json_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    let mut out = String::new();
    for seg in path.iter() {
        out.push('/');
        match seg {
            Segment::Seq { index } => out.push_str(&index.to_string()),
            Segment::Map { key } => out.push_str(&key.replace('~', "~0").replace('/', "~1")),
            Segment::Enum { variant } => out.push_str(variant),
            Segment::Unknown => out.push('?'),
        }
    }
    if out.is_empty() {
        out.push('/');
    }
    out
}

fn decode<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_slice(bytes);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|err| ParseError::Schema {
        path: json_pointer(err.path()),
        message: err.inner().to_string(),
    })?;
    de.end().map_err(|err| ParseError::Schema {
        path: "/".to_owned(),
        message: err.to_string(),
    })?;
    Ok(value)
}

impl InstanceFile {
    /// Validates into a [`Digraph`], locating model errors in the file.
    pub fn to_digraph(&self) -> Result<Digraph, ParseError> {
        let vertices: Vec<String> = self.vertices.iter().map(|v| v.id.clone()).collect();
        let weights: BTreeMap<String, i64> = self
            .vertices
            .iter()
            .map(|v| (v.id.clone(), v.weight))
            .collect();
        let edges: Vec<EdgeSpec> = self
            .edges
            .iter()
            .map(|e| EdgeSpec {
                id: e.id.clone(),
                src: e.src.clone(),
                dst: e.dst.clone(),
            })
            .collect();
        let ranks: BTreeMap<String, i64> =
            self.edges.iter().map(|e| (e.id.clone(), e.rank)).collect();
        Digraph::build(&vertices, &edges, &weights, &ranks).map_err(|source| ParseError::Model {
            path: self.locate(&source),
            source,
        })
    }

    fn locate(&self, err: &ModelError) -> String {
        let vertex_at = |id: &str, field: &str| {
            let hits: Vec<usize> = (0..self.vertices.len())
                .filter(|&i| self.vertices[i].id == id)
                .collect();
            // Duplicates point at the second occurrence.
            hits.get(1)
                .or(hits.first())
                .map(|i| format!("/vertices/{i}/{field}"))
                .unwrap_or_else(|| "/vertices".to_owned())
        };
        let edge_at = |id: &str| {
            let hits: Vec<usize> = (0..self.edges.len())
                .filter(|&i| self.edges[i].id == id)
                .collect();
            hits.get(1).or(hits.first()).copied()
        };
        match err {
            ModelError::DuplicateId {
                kind: crate::error::IdKind::Vertex,
                id,
            }
            | ModelError::ReservedId(id) => vertex_at(id, "id"),
            ModelError::DuplicateId { id, .. } => edge_at(id)
                .map(|i| format!("/edges/{i}/id"))
                .unwrap_or_else(|| "/edges".into()),
            ModelError::MissingWeight(id) | ModelError::NonpositiveWeight { vertex: id, .. } => {
                vertex_at(id, "weight")
            }
            ModelError::SelfLoop { edge, .. } => edge_at(edge)
                .map(|i| format!("/edges/{i}"))
                .unwrap_or_else(|| "/edges".into()),
            ModelError::UnknownEndpoint { edge, vertex } => match edge_at(edge) {
                Some(i) if self.edges[i].src == *vertex => format!("/edges/{i}/src"),
                Some(i) => format!("/edges/{i}/dst"),
                None => "/edges".into(),
            },
            ModelError::MissingRank(edge) | ModelError::NonpositiveRank { edge, .. } => {
                edge_at(edge)
                    .map(|i| format!("/edges/{i}/rank"))
                    .unwrap_or_else(|| "/edges".into())
            }
        }
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        InstanceFile {
            vertices: g
                .vertices()
                .map(|v| VertexEntry {
                    id: g.vertex_label(v).to_owned(),
                    weight: g.weight(v) as i64,
                })
                .collect(),
            edges: g
                .edges()
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeEntry {
                    id: g.edge_label(EdgeId(i)).to_owned(),
                    src: g.vertex_label(e.src).to_owned(),
                    dst: g.vertex_label(e.dst).to_owned(),
                    rank: i64::from(e.rank),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// Decodes and validates an instance file.
pub fn parse_instance(bytes: &[u8]) -> Result<Digraph, ParseError> {
    decode::<InstanceFile>(bytes)?.to_digraph()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    PopularFound,
    NoneExists,
    AssumptionViolated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcEntry {
    pub src: String,
    pub dst: String,
    pub edge_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetEntry {
    pub members: Vec<String>,
    pub y: u64,
    pub owner: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub sets: Vec<SetEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessEntry {
    pub vertex: String,
    pub s: String,
    pub f: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Reason {
    /// Every minimum-weight bottom vertex of `set` has a displacement witness.
    Hijackable {
        set: Vec<String>,
        min_weight_vertices: Vec<String>,
        witnesses: Vec<WitnessEntry>,
    },
    NoArborescenceInContracted,
    WeightAssumption {
        /// `(s, t, u)` with `w(s) + w(t) <= w(u)`.
        triple: [String; 3],
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultFile {
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arborescence: Option<Vec<ArcEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<Reason>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResultError {
    #[error("status `{0:?}` requires field `{1}`")]
    MissingField(Status, &'static str),
    #[error("status `{0:?}` must not carry field `{1}`")]
    UnexpectedField(Status, &'static str),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("no edge `{id}` from `{src}` to `{dst}`")]
    UnknownEdge {
        id: String,
        src: String,
        dst: String,
    },
    #[error("not an arborescence: {0}")]
    NotArborescence(#[from] crate::error::ArborescenceError),
}

fn names(d: &AugmentedDigraph, set: &VertexSet) -> Vec<String> {
    set.iter().map(|v| d.vertex_label(v).to_owned()).collect()
}

impl ResultFile {
    pub fn from_outcome(d: &AugmentedDigraph, outcome: &SolveOutcome) -> Self {
        let label = |v: VertexId| d.vertex_label(v).to_owned();
        match outcome {
            SolveOutcome::PopularFound {
                arborescence,
                certificate,
            } => ResultFile {
                status: Status::PopularFound,
                arborescence: Some(arcs(d, arborescence)),
                certificate: Some(CertificateFile {
                    sets: certificate
                        .sets
                        .iter()
                        .map(|s| SetEntry {
                            members: names(d, &s.members),
                            y: s.y,
                            owner: label(s.owner),
                        })
                        .collect(),
                }),
                reason: None,
                warnings: Vec::new(),
            },
            SolveOutcome::NoneExists(reason) => ResultFile {
                status: Status::NoneExists,
                arborescence: None,
                certificate: None,
                reason: Some(match reason {
                    NoneReason::Hijackable(failure) => Reason::Hijackable {
                        set: names(d, &failure.set),
                        min_weight_vertices: failure.min_weight.iter().map(|&v| label(v)).collect(),
                        witnesses: failure
                            .witnesses
                            .iter()
                            .map(|w| WitnessEntry {
                                vertex: label(w.vertex),
                                s: label(w.s),
                                f: d.edge_label(w.f).to_owned(),
                            })
                            .collect(),
                    },
                    NoneReason::NoArborescenceInContracted => Reason::NoArborescenceInContracted,
                }),
                warnings: Vec::new(),
            },
            SolveOutcome::AssumptionViolated { triple: (s, t, u) } => ResultFile {
                status: Status::AssumptionViolated,
                arborescence: None,
                certificate: None,
                reason: Some(Reason::WeightAssumption {
                    triple: [label(*s), label(*t), label(*u)],
                }),
                warnings: Vec::new(),
            },
        }
    }

    /// Checks that the fields present match the status.
    pub fn validate_shape(&self) -> Result<(), ResultError> {
        let found = self.status == Status::PopularFound;
        for (present, name) in [
            (self.arborescence.is_some(), "arborescence"),
            (self.certificate.is_some(), "certificate"),
        ] {
            match (found, present) {
                (true, false) => return Err(ResultError::MissingField(self.status, name)),
                (false, true) => return Err(ResultError::UnexpectedField(self.status, name)),
                _ => {}
            }
        }
        match (found, self.reason.is_some()) {
            (true, true) => Err(ResultError::UnexpectedField(self.status, "reason")),
            (false, false) => Err(ResultError::MissingField(self.status, "reason")),
            _ => Ok(()),
        }
    }

    /// Resolves the listed arborescence against `d`.
    pub fn arborescence(&self, d: &AugmentedDigraph) -> Result<Option<Arborescence>, ResultError> {
        let Some(entries) = &self.arborescence else {
            return Ok(None);
        };
        let mut edges = Vec::with_capacity(entries.len());
        for entry in entries {
            edges.push(resolve_edge(d, entry)?);
        }
        Ok(Some(Arborescence::from_edges(d, edges)?))
    }

    pub fn certificate(&self, d: &AugmentedDigraph) -> Result<Option<DualSolution>, ResultError> {
        let Some(cert) = &self.certificate else {
            return Ok(None);
        };
        let vertex = |label: &str| {
            d.base()
                .vertex_by_label(label)
                .ok_or_else(|| ResultError::UnknownVertex(label.to_owned()))
        };
        let mut sets = Vec::with_capacity(cert.sets.len());
        for entry in &cert.sets {
            let mut members = VertexSet::empty(d.vertex_capacity());
            for m in &entry.members {
                members.insert(vertex(m)?);
            }
            sets.push(DualSet {
                members,
                y: entry.y,
                owner: vertex(&entry.owner)?,
            });
        }
        Ok(Some(DualSolution { sets }))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }
}

fn resolve_edge(d: &AugmentedDigraph, entry: &ArcEntry) -> Result<EdgeId, ResultError> {
    let unknown = || ResultError::UnknownEdge {
        id: entry.edge_id.clone(),
        src: entry.src.clone(),
        dst: entry.dst.clone(),
    };
    let dst = d
        .base()
        .vertex_by_label(&entry.dst)
        .ok_or_else(|| ResultError::UnknownVertex(entry.dst.clone()))?;
    if entry.edge_id == ROOT_EDGE_LABEL {
        if entry.src != ROOT_LABEL {
            return Err(unknown());
        }
        return Ok(d.root_edge(dst));
    }
    let e = d.base().edge_by_label(&entry.edge_id).ok_or_else(unknown)?;
    let edge = d.edge(e);
    if edge.dst != dst || d.vertex_label(edge.src) != entry.src {
        return Err(unknown());
    }
    Ok(e)
}

/// Tree edges in vertex order, as written to result files.
pub fn arcs(d: &AugmentedDigraph, a: &Arborescence) -> Vec<ArcEntry> {
    a.edges()
        .map(|e| {
            let edge = d.edge(e);
            ArcEntry {
                src: d.vertex_label(edge.src).to_owned(),
                dst: d.vertex_label(edge.dst).to_owned(),
                edge_id: d.edge_label(e).to_owned(),
            }
        })
        .collect()
}

pub fn parse_result(bytes: &[u8]) -> Result<ResultFile, ParseError> {
    decode(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cycle3, pair};
    use crate::solver::{solve, SolveOptions};
    use proptest::prelude::*;

    const PAIR: &str = r#"{
        "vertices": [{"id": "a", "weight": 1}, {"id": "b", "weight": 1}],
        "edges": [{"id": "ab", "src": "a", "dst": "b", "rank": 1}]
    }"#;

    #[test]
    fn parses_pair() {
        let g = parse_instance(PAIR.as_bytes()).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn missing_weight_is_a_schema_error() {
        let text = r#"{"vertices": [{"id": "a"}], "edges": []}"#;
        match parse_instance(text.as_bytes()) {
            Err(ParseError::Schema { path, message }) => {
                assert_eq!(path, "/vertices/0");
                assert!(message.contains("weight"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn root_is_not_an_endpoint() {
        let text = r#"{"vertices": [{"id": "a", "weight": 1}],
                       "edges": [{"id": "e", "src": "a", "dst": "r", "rank": 1}]}"#;
        match parse_instance(text.as_bytes()) {
            Err(ParseError::Model {
                path,
                source: ModelError::UnknownEndpoint { vertex, .. },
            }) => {
                assert_eq!(path, "/edges/0/dst");
                assert_eq!(vertex, "r");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn model_errors_are_located() {
        let text =
            r#"{"vertices": [{"id": "a", "weight": 1}, {"id": "b", "weight": -2}], "edges": []}"#;
        let err = parse_instance(text.as_bytes()).unwrap_err();
        assert_eq!(err.path(), "/vertices/1/weight");
        let text = r#"{"vertices": [{"id": "a", "weight": 1}],
                       "edges": [{"id": "e", "src": "a", "dst": "a", "rank": 1}]}"#;
        assert_eq!(
            parse_instance(text.as_bytes()).unwrap_err().path(),
            "/edges/0"
        );
        let text = r#"{"vertices": [{"id": "a", "weight": 1}], "edges": [], "extra": 1}"#;
        assert!(matches!(
            parse_instance(text.as_bytes()),
            Err(ParseError::Schema { .. })
        ));
        assert!(matches!(
            parse_instance(b"\xff"),
            Err(ParseError::Schema { .. })
        ));
    }

    #[test]
    fn result_shapes() {
        let d = pair();
        let outcome = solve(&d, SolveOptions::default()).unwrap();
        let file = ResultFile::from_outcome(&d, &outcome);
        assert_eq!(file.status, Status::PopularFound);
        file.validate_shape().unwrap();
        let json: serde_json::Value = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(json["status"], "popular_found");
        assert_eq!(json["arborescence"][0]["edge_id"], "root");
        assert_eq!(json["arborescence"][0]["src"], "r");
        assert_eq!(json["arborescence"][1]["edge_id"], "ab");
        assert_eq!(json["certificate"]["sets"][0]["owner"], "a");
        assert!(json.get("reason").is_none());

        let d = cycle3(&[3, 1, 1]);
        let file = ResultFile::from_outcome(&d, &solve(&d, SolveOptions::default()).unwrap());
        let json: serde_json::Value = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(json["status"], "assumption_violated");
        assert_eq!(json["reason"]["kind"], "weight_assumption");
        assert_eq!(json["reason"]["triple"], serde_json::json!(["b", "c", "a"]));

        let mut broken = file.clone();
        broken.reason = None;
        assert!(broken.validate_shape().is_err());
    }

    #[test]
    fn result_resolves_back() {
        let d = cycle3(&[3, 2, 2]);
        let outcome = solve(&d, SolveOptions::default()).unwrap();
        let file =
            parse_result(ResultFile::from_outcome(&d, &outcome).to_json().as_bytes()).unwrap();
        let SolveOutcome::PopularFound {
            arborescence,
            certificate,
        } = outcome
        else {
            panic!()
        };
        assert_eq!(file.arborescence(&d).unwrap(), Some(arborescence));
        assert_eq!(file.certificate(&d).unwrap(), Some(certificate));

        let mut bad = file.clone();
        bad.arborescence.as_mut().unwrap()[0].src = "b".into();
        assert!(matches!(
            bad.arborescence(&d),
            Err(ResultError::UnknownEdge { .. })
        ));
    }

    fn arb_instance() -> impl Strategy<Value = InstanceFile> {
        (1usize..6, 0u64..1000).prop_map(|(n, seed)| {
            crate::gen::generate_random(&crate::gen::GenParams {
                n,
                density: 0.5,
                max_weight: 4,
                tie_prob: 0.3,
                enforce_assumption: false,
                seed,
            })
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn instance_round_trip(file in arb_instance()) {
            let g = file.to_digraph().unwrap();
            let back = parse_instance(file.to_json().as_bytes()).unwrap();
            prop_assert_eq!(InstanceFile::from_digraph(&back), InstanceFile::from_digraph(&g));
        }

        #[test]
        fn result_round_trip(file in arb_instance()) {
            let d = AugmentedDigraph::new(file.to_digraph().unwrap());
            let outcome = solve(&d, SolveOptions { force: true }).unwrap();
            let result = ResultFile::from_outcome(&d, &outcome);
            let back = parse_result(result.to_json().as_bytes()).unwrap();
            prop_assert_eq!(&back, &result);
            back.validate_shape().unwrap();
        }
    }
}
