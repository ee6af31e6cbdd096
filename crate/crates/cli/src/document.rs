//! The JSON graph document.

use std::collections::BTreeMap;
use std::str::FromStr;

use contact_loci_core::numerics::{self, AmbientMode, DivisorData};
use contact_loci_core::{Arrow, BigRational, DivisorId, ExceptionalVertex, PlumbingGraph};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::render::rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: String,
    pub self_intersection: i64,
    pub genus: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowRecord {
    pub id: String,
    pub attached_to: String,
    pub multiplicity: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    Smooth,
    Singular,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDocument {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<[String; 2]>,
    pub arrows: Vec<ArrowRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ambient: Option<Ambient>,
    /// Discrepancies of the exceptional vertices as `"p/q"` strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancies: Option<BTreeMap<String, String>>,
    /// Written by `refine`; checked against the solved values when read back.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplicities: Option<BTreeMap<String, u64>>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents always serialize")
    }

    pub fn graph(&self) -> Result<PlumbingGraph, CliError> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| ExceptionalVertex::new(v.id.as_str(), v.self_intersection, v.genus))
            .collect();
        let edges = self.edges.iter().map(|[a, b]| (DivisorId::from(a.as_str()), DivisorId::from(b.as_str()))).collect();
        let arrows = self.arrows.iter().map(|a| Arrow::new(a.id.as_str(), a.attached_to.as_str(), a.multiplicity)).collect();
        Ok(PlumbingGraph::new(vertices, edges, arrows)?)
    }

    pub fn from_graph(g: &PlumbingGraph) -> Self {
        GraphDocument {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexRecord { id: v.id.to_string(), self_intersection: v.self_intersection, genus: v.genus })
                .collect(),
            edges: g.edges().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            arrows: g
                .arrows()
                .iter()
                .map(|a| ArrowRecord { id: a.id.to_string(), attached_to: a.attached_to.to_string(), multiplicity: a.multiplicity })
                .collect(),
            ambient: None,
            discrepancies: None,
            multiplicities: None,
        }
    }

    /// Records multiplicities, and discrepancies when known, next to the graph.
    pub fn annotate(&mut self, dd: &DivisorData) {
        self.multiplicities = Some(dd.multiplicities.iter().map(|(k, &v)| (k.to_string(), v)).collect());
        match dd.ambient_mode {
            AmbientMode::Smooth => {
                self.ambient = Some(Ambient::Smooth);
                self.discrepancies = None;
            }
            AmbientMode::UserSuppliedDiscrepancies => {
                self.ambient = Some(Ambient::Singular);
                self.discrepancies = dd
                    .discrepancies
                    .as_ref()
                    .map(|k| k.iter().map(|(id, v)| (id.to_string(), rational(v))).collect());
            }
            AmbientMode::MultiplicitiesOnly => {}
        }
    }

    /// Solves for the multiplicities and attaches discrepancies: computed
    /// for a smooth ambient surface, read from the document when supplied.
    pub fn divisor_data(&self, g: &PlumbingGraph) -> Result<DivisorData, CliError> {
        let dd = numerics::compute_multiplicities(g)?;
        if let Some(declared) = &self.multiplicities {
            let solved: BTreeMap<String, u64> = dd.multiplicities.iter().map(|(k, &v)| (k.to_string(), v)).collect();
            if declared != &solved {
                let bad: Vec<&str> = solved
                    .iter()
                    .filter(|(k, v)| declared.get(k.as_str()) != Some(v))
                    .map(|(k, _)| k.as_str())
                    .chain(declared.keys().filter(|k| !solved.contains_key(k.as_str())).map(String::as_str))
                    .collect();
                return Err(CliError::Inconsistent(format!(
                    "declared multiplicities disagree with the solved ones at {}",
                    bad.join(", ")
                )));
            }
        }
        let supplied = match &self.discrepancies {
            Some(map) => Some(self.parse_discrepancies(g, map)?),
            None => None,
        };
        match (self.ambient, supplied) {
            (Some(Ambient::Smooth), supplied) => {
                let computed = numerics::compute_discrepancies(g)?;
                if let Some(s) = supplied {
                    if s != computed {
                        let bad: Vec<&str> =
                            computed.iter().filter(|(k, v)| s.get(*k) != Some(v)).map(|(k, _)| k.as_str()).collect();
                        return Err(CliError::Inconsistent(format!(
                            "supplied discrepancies disagree with the smooth-ambient values at {}",
                            bad.join(", ")
                        )));
                    }
                }
                Ok(dd.with_discrepancies(computed, AmbientMode::Smooth))
            }
            (_, Some(s)) => Ok(dd.with_discrepancies(s, AmbientMode::UserSuppliedDiscrepancies)),
            (_, None) => Ok(dd),
        }
    }

    fn parse_discrepancies(
        &self,
        g: &PlumbingGraph,
        map: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<DivisorId, BigRational>, CliError> {
        let mut out = BTreeMap::new();
        for (id, text) in map {
            if !g.is_vertex(id) {
                return Err(CliError::Inconsistent(format!("discrepancy given for {id}, which is not an exceptional vertex")));
            }
            let value = BigRational::from_str(text.trim())
                .map_err(|_| CliError::Parse(format!("discrepancy of {id}: {text:?} is not a rational \"p/q\"")))?;
            out.insert(DivisorId::from(id.as_str()), value);
        }
        let missing: Vec<&str> = g.vertex_ids().filter(|id| !out.contains_key(*id)).map(|id| id.as_str()).collect();
        if !missing.is_empty() {
            return Err(CliError::Inconsistent(format!("discrepancies missing for {}", missing.join(", "))));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CUSP: &str = r#"{
        "vertices": [
            {"id": "E1", "self_intersection": -3, "genus": 0},
            {"id": "E2", "self_intersection": -2, "genus": 0},
            {"id": "E3", "self_intersection": -1, "genus": 0}
        ],
        "edges": [["E1", "E3"], ["E2", "E3"]],
        "arrows": [{"id": "A1", "attached_to": "E3", "multiplicity": 1}]
    }"#;

    #[test]
    fn parses_cusp() {
        let doc = GraphDocument::parse(CUSP).unwrap();
        let g = doc.graph().unwrap();
        assert_eq!((g.vertices().len(), g.edges().len(), g.arrows().len()), (3, 2, 1));
        let dd = doc.divisor_data(&g).unwrap();
        assert_eq!(dd.ambient_mode, AmbientMode::MultiplicitiesOnly);
        assert_eq!(dd.multiplicity("E3").unwrap(), 6);
    }

    #[test]
    fn round_trip() {
        let doc = GraphDocument::parse(CUSP).unwrap();
        let g = doc.graph().unwrap();
        let back = GraphDocument::from_graph(&g);
        assert_eq!(back, doc);
        assert_eq!(GraphDocument::parse(&back.to_json()).unwrap().graph().unwrap(), g);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_references() {
        let text = CUSP.replace("\"arrows\"", "\"extra\": 1, \"arrows\"");
        assert!(matches!(GraphDocument::parse(&text), Err(CliError::Parse(_))));
        let text = CUSP.replace("[\"E2\", \"E3\"]", "[\"E2\", \"E9\"]");
        assert!(matches!(GraphDocument::parse(&text).unwrap().graph(), Err(CliError::Domain(_))));
        let text = CUSP.replace("[\"E2\", \"E3\"]", "[\"E1\", \"E1\"]");
        let err = GraphDocument::parse(&text).unwrap().graph().unwrap_err();
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn ambient_modes() {
        let smooth = CUSP.replace("\"arrows\"", "\"ambient\": \"smooth\", \"arrows\"");
        let doc = GraphDocument::parse(&smooth).unwrap();
        let g = doc.graph().unwrap();
        let dd = doc.divisor_data(&g).unwrap();
        assert_eq!(dd.ambient_mode, AmbientMode::Smooth);
        assert_eq!(rational(dd.discrepancy("E3").unwrap()), "4/1");

        let supplied = CUSP.replace(
            "\"arrows\"",
            "\"ambient\": \"singular\", \"discrepancies\": {\"E1\": \"1/2\", \"E2\": \"1\", \"E3\": \"3/2\"}, \"arrows\"",
        );
        let doc = GraphDocument::parse(&supplied).unwrap();
        let dd = doc.divisor_data(&g).unwrap();
        assert_eq!(dd.ambient_mode, AmbientMode::UserSuppliedDiscrepancies);
        assert_eq!(rational(dd.discrepancy("E1").unwrap()), "1/2");

        let partial = CUSP.replace("\"arrows\"", "\"discrepancies\": {\"E1\": \"1\"}, \"arrows\"");
        let err = GraphDocument::parse(&partial).unwrap().divisor_data(&g).unwrap_err();
        assert!(err.to_string().contains("E2, E3"));

        let wrong = CUSP.replace(
            "\"arrows\"",
            "\"ambient\": \"smooth\", \"discrepancies\": {\"E1\": \"1\", \"E2\": \"2\", \"E3\": \"5\"}, \"arrows\"",
        );
        let err = GraphDocument::parse(&wrong).unwrap().divisor_data(&g).unwrap_err();
        assert!(err.to_string().contains("E3"));
    }

    #[test]
    fn declared_multiplicities_are_checked() {
        let text = CUSP.replace("\"arrows\"", "\"multiplicities\": {\"A1\": 1, \"E1\": 2, \"E2\": 3, \"E3\": 7}, \"arrows\"");
        let doc = GraphDocument::parse(&text).unwrap();
        let g = doc.graph().unwrap();
        let err = doc.divisor_data(&g).unwrap_err();
        assert!(err.to_string().contains("E3"));
    }
}
