//! Solution files: recursive solution records plus timings.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::constraints::eval::Value;
use crate::geometry::{Coord, Rect};
use crate::parser::{Node, SolutionForest};
use crate::scene::Scene;

pub const SOLUTION_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct Timing {
    pub index_ms: f64,
    pub parse_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Slot {
    pub name: String,
    pub value: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Child {
    Derived {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        record: SolutionRecord,
    },
    Primitive {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        tag: u32,
        /// Source id of the primitive (`p<tag>` when the input had none).
        id: String,
    },
    Endpoint {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        tag: u32,
        line: String,
    },
    Null {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    #[serde(rename = "type")]
    pub type_name: String,
    pub tag: u32,
    /// `[xmin, ymin, xmax, ymax]` in grid units.
    pub bbox: [f64; 4],
    #[serde(default)]
    pub slots: Vec<Slot>,
    pub children: Vec<Child>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub version: u32,
    pub grammar: String,
    pub start: String,
    pub solutions: Vec<SolutionRecord>,
    pub timing: Timing,
}

fn value_json<T: Coord>(v: &Value<T>) -> serde_json::Value {
    use serde_json::json;
    match v {
        Value::Bool(b) => json!(b),
        Value::Num(n) => json!(n.as_f64()),
        Value::Point(p) => json!({ "point": [p.x.as_f64(), p.y.as_f64()] }),
        Value::Object(t) => json!({ "object": t.0 }),
        Value::Set(s) => json!({ "set": s.iter().map(|t| t.0).collect::<Vec<_>>() }),
        Value::Null => serde_json::Value::Null,
    }
}

fn rect<T: Coord>(r: Rect<T>) -> [f64; 4] {
    [r.min.x.as_f64(), r.min.y.as_f64(), r.max.x.as_f64(), r.max.y.as_f64()]
}

impl SolutionRecord {
    pub fn from_node<T: Coord>(node: &Node<T>, scene: &Scene<T>) -> Option<Self> {
        let Node::Derived {
            tag,
            type_name,
            bbox,
            slots,
            children,
            ..
        } = node
        else {
            return None;
        };
        let children = children
            .iter()
            .map(|(name, child)| {
                let name = name.as_ref().map(|n| n.to_string());
                match child {
                    Node::Primitive { tag } => Child::Primitive {
                        name,
                        tag: tag.0,
                        id: scene
                            .primitive(*tag)
                            .map_or_else(|| format!("p{}", tag.0), |p| p.display_id()),
                    },
                    Node::Endpoint { tag, line } => Child::Endpoint {
                        name,
                        tag: tag.0,
                        line: scene.label(*line),
                    },
                    Node::Null => Child::Null { name },
                    derived => Child::Derived {
                        name,
                        record: SolutionRecord::from_node(derived, scene).expect("derived node"),
                    },
                }
            })
            .collect();
        Some(SolutionRecord {
            type_name: type_name.to_string(),
            tag: tag.0,
            bbox: rect(*bbox),
            slots: slots
                .iter()
                .map(|(n, v)| Slot {
                    name: n.to_string(),
                    value: value_json(v),
                })
                .collect(),
            children,
        })
    }

    /// Source ids of every primitive leaf, in tree order.
    pub fn leaf_ids(&self) -> Vec<&str> {
        let mut out = Vec::new();
        for c in &self.children {
            match c {
                Child::Primitive { id, .. } => out.push(id.as_str()),
                Child::Derived { record, .. } => out.extend(record.leaf_ids()),
                _ => {}
            }
        }
        out
    }
}

impl SolutionFile {
    pub fn new<T: Coord>(grammar: &str, forest: &SolutionForest<T>, scene: &Scene<T>, timing: Timing) -> Self {
        Self {
            version: SOLUTION_VERSION,
            grammar: grammar.to_string(),
            start: forest.start.to_string(),
            solutions: forest
                .solutions
                .iter()
                .filter_map(|n| SolutionRecord::from_node(n, scene))
                .collect(),
            timing,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solutions serialize");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, IoError> {
        serde_json::from_str(src).map_err(IoError::Json)
    }

    pub fn write(&self, path: &Path) -> Result<(), IoError> {
        std::fs::write(path, self.to_json()).map_err(|e| IoError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self, IoError> {
        let src = std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))?;
        Self::from_json(&src)
    }
}

/// Writes `forest` with its timings to `path`.
pub fn write_solutions<T: Coord>(
    grammar: &str,
    forest: &SolutionForest<T>,
    scene: &Scene<T>,
    timing: Timing,
    path: &Path,
) -> Result<SolutionFile, IoError> {
    let file = SolutionFile::new(grammar, forest, scene, timing);
    file.write(path)?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::grammar::g1;
    use crate::io::fixtures::fixture;
    use crate::parser::parse;

    #[test]
    fn fig2_round_trips() {
        let d = fixture("fig2-ticks").unwrap().to_diagram::<f64>().unwrap();
        let mut scene = Scene::new(d.primitives, Config::default()).unwrap();
        let out = parse(&g1(), "X-Ticks", &mut scene).unwrap();
        let file = SolutionFile::new(
            "g1",
            &out.forest,
            &scene,
            Timing {
                index_ms: 1.5,
                parse_ms: 2.0,
            },
        );
        assert_eq!(file.solutions.len(), 2);
        assert!(file.solutions.iter().all(|s| s.type_name == "X-Ticks"));
        assert_eq!(SolutionFile::from_json(&file.to_json()).unwrap(), file);
    }

    #[test]
    fn empty_forest_keeps_timing() {
        let forest: SolutionForest<f64> = SolutionForest {
            start: "X-Ticks".into(),
            solutions: vec![],
        };
        let scene = Scene::new(vec![], Config::default()).unwrap();
        let file = SolutionFile::new("g1", &forest, &scene, Timing::default());
        let json = file.to_json();
        assert!(json.contains("\"solutions\": []"));
        assert!(json.contains("index_ms"));
        assert_eq!(SolutionFile::from_json(&json).unwrap(), file);
    }
}
