//! Import of a narrow, whitelisted subset of GeoGebra's `geogebra.xml`.
//!
//! Accepted: free points (`<element type="point">` with `<coords>`), the
//! two-point `Midpoint` command and the two-line `Intersect` command. Lines
//! feeding `Intersect` may be defined with the two-point `Line` command.
//! Anything else aborts the import with a diagnostic naming it.

use std::collections::{HashMap, HashSet};

use roxmltree::{Document, Node};
use thiserror::Error;

use crate::model::{Construction, ConstructionError, ConstructionStep, Hint, PointName, StepKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GgbError {
    #[error("malformed XML: {0}")]
    Xml(String),
    #[error("unsupported GeoGebra command `{0}`")]
    UnsupportedCommand(String),
    #[error("unsupported GeoGebra element `{0}`")]
    UnsupportedElement(String),
    #[error("command `{command}` is missing input/output `{slot}`")]
    MissingArgument { command: String, slot: String },
    #[error("`{0}` is not a usable point label")]
    Label(String),
    #[error("`{0}` does not name a line created by a Line command")]
    UnknownLine(String),
    #[error("point `{0}` has unusable coordinates")]
    Coords(String),
    #[error("{label}: {source}")]
    Construction {
        label: String,
        source: ConstructionError,
    },
}

fn point(label: &str) -> Result<PointName, GgbError> {
    PointName::new(label).map_err(|_| GgbError::Label(label.to_string()))
}

fn slot<'a>(node: Node<'a, '_>, command: &str, tag: &str, attr: &str) -> Result<&'a str, GgbError> {
    node.children()
        .find(|n| n.has_tag_name(tag))
        .and_then(|n| n.attribute(attr))
        .ok_or_else(|| GgbError::MissingArgument {
            command: command.to_string(),
            slot: format!("{tag}.{attr}"),
        })
}

fn input_count(node: Node<'_, '_>) -> usize {
    node.children()
        .find(|n| n.has_tag_name("input"))
        .map(|n| n.attributes().filter(|a| a.name().starts_with('a')).count())
        .unwrap_or(0)
}

fn construction_root<'a, 'i>(doc: &'a Document<'i>) -> Result<Option<Node<'a, 'i>>, GgbError> {
    let root = doc.root_element();
    match root.tag_name().name() {
        "construction" => Ok(Some(root)),
        "geogebra" => Ok(root.children().find(|n| n.has_tag_name("construction"))),
        other => Err(GgbError::UnsupportedElement(other.to_string())),
    }
}

pub fn import_ggb_subset(xml_text: &str) -> Result<Construction, GgbError> {
    let doc = Document::parse(xml_text).map_err(|e| GgbError::Xml(e.to_string()))?;
    let mut c = Construction::new();
    let Some(root) = construction_root(&doc)? else {
        return Ok(c);
    };

    let outputs: HashSet<&str> = root
        .children()
        .filter(|n| n.has_tag_name("command"))
        .filter_map(|n| n.children().find(|o| o.has_tag_name("output")))
        .flat_map(|o| o.attributes().map(|a| a.value()))
        .collect();
    let mut lines: HashMap<String, (PointName, PointName)> = HashMap::new();

    let push = |c: &mut Construction, step: ConstructionStep| {
        let label = step.defined().to_string();
        c.push_step(step)
            .map_err(|source| GgbError::Construction { label, source })
    };

    for node in root.children().filter(Node::is_element) {
        match node.tag_name().name() {
            "element" => {
                let kind = node.attribute("type").unwrap_or("");
                let label = node.attribute("label").unwrap_or("");
                match kind {
                    "point" if outputs.contains(label) => {}
                    "point" => {
                        let mut step = ConstructionStep::free(point(label)?);
                        if let Some(coords) = node.children().find(|n| n.has_tag_name("coords")) {
                            step = step
                                .with_hint(homogeneous(coords, label)?)
                                .map_err(|_| GgbError::Coords(label.to_string()))?;
                        }
                        push(&mut c, step)?;
                    }
                    "line" if lines.contains_key(label) => {}
                    other => {
                        return Err(GgbError::UnsupportedElement(format!("element type=\"{other}\"")))
                    }
                }
            }
            "command" => {
                let name = node.attribute("name").unwrap_or("");
                match (name, input_count(node)) {
                    ("Midpoint", 2) => {
                        let a = point(slot(node, name, "input", "a0")?)?;
                        let b = point(slot(node, name, "input", "a1")?)?;
                        let m = point(slot(node, name, "output", "a0")?)?;
                        let step = ConstructionStep::new(StepKind::Midpoint, m, vec![a, b])
                            .map_err(|source| GgbError::Construction {
                                label: name.to_string(),
                                source,
                            })?;
                        push(&mut c, step)?;
                    }
                    ("Line", 2) => {
                        let a = point(slot(node, name, "input", "a0")?)?;
                        let b = point(slot(node, name, "input", "a1")?)?;
                        for p in [&a, &b] {
                            if !c.defines(p) {
                                return Err(GgbError::Construction {
                                    label: name.to_string(),
                                    source: ConstructionError::Undefined(p.clone()),
                                });
                            }
                        }
                        let out = slot(node, name, "output", "a0")?;
                        lines.insert(out.to_string(), (a, b));
                    }
                    ("Intersect", 2) => {
                        let line = |slot_name: &str| -> Result<(PointName, PointName), GgbError> {
                            let l = slot(node, name, "input", slot_name)?;
                            lines
                                .get(l)
                                .cloned()
                                .ok_or_else(|| GgbError::UnknownLine(l.to_string()))
                        };
                        let (a, b) = line("a0")?;
                        let (p, q) = line("a1")?;
                        let out = point(slot(node, name, "output", "a0")?)?;
                        let step = ConstructionStep::new(StepKind::IntersectLl, out, vec![a, b, p, q])
                            .map_err(|source| GgbError::Construction {
                                label: name.to_string(),
                                source,
                            })?;
                        push(&mut c, step)?;
                    }
                    ("Midpoint", _) => {
                        return Err(GgbError::UnsupportedCommand("Midpoint (segment form)".into()))
                    }
                    ("Intersect", _) => {
                        return Err(GgbError::UnsupportedCommand("Intersect (non two-line form)".into()))
                    }
                    (other, _) => return Err(GgbError::UnsupportedCommand(other.to_string())),
                }
            }
            other => return Err(GgbError::UnsupportedElement(other.to_string())),
        }
    }
    Ok(c)
}

fn homogeneous(coords: Node<'_, '_>, label: &str) -> Result<Hint, GgbError> {
    let bad = || GgbError::Coords(label.to_string());
    let read = |attr: &str, default: Option<f64>| -> Result<f64, GgbError> {
        match coords.attribute(attr) {
            Some(v) => v.trim().parse::<f64>().map_err(|_| bad()),
            None => default.ok_or_else(bad),
        }
    };
    let (x, y, z) = (read("x", None)?, read("y", None)?, read("z", Some(1.0))?);
    if z == 0.0 || !(x / z).is_finite() || !(y / z).is_finite() {
        return Err(bad());
    }
    Ok(Hint { x: x / z, y: y / z })
}
