//! Text formats: whitespace-delimited edge lists, seed label files, result
//! JSON and vector CSV. External labels are arbitrary strings and are mapped
//! to contiguous internal ids in order of first appearance.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::embedding::{EmbeddingKind, EmbeddingVector};
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::result::ClusterResult;

/// Bijection between external labels and internal ids `0..n`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelMap {
    ids: HashMap<String, usize>,
    labels: Vec<String>,
}

impl LabelMap {
    pub fn new() -> Self {
        LabelMap::default()
    }

    /// Labels "0", "1", ..., "n-1".
    pub fn identity(n: usize) -> Self {
        let mut lm = LabelMap::new();
        for i in 0..n {
            lm.intern(&i.to_string());
        }
        lm
    }

    /// Id of `label`, assigning the next free id if it is new.
    pub fn intern(&mut self, label: &str) -> usize {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len();
        self.ids.insert(label.to_string(), id);
        self.labels.push(label.to_string());
        id
    }

    pub fn id(&self, label: &str) -> Option<usize> {
        self.ids.get(label).copied()
    }

    /// Id of `label`, or an error naming it.
    pub fn resolve(&self, label: &str) -> Result<usize> {
        self.id(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn label(&self, id: usize) -> &str {
        &self.labels[id]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

/// Reads an edge list: one `u v [w]` edge per line, `#` starts a comment,
/// weights default to 1. Repeated edges are summed with a warning.
pub fn read_edge_list<R: Read>(reader: R) -> Result<(Graph, LabelMap)> {
    let mut lm = LabelMap::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut first_seen: HashMap<(usize, usize), usize> = HashMap::new();
    for (k, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = k + 1;
        let fields: Vec<&str> = strip_comment(&line).split_whitespace().collect();
        let (u, v, w) = match fields.as_slice() {
            [] => continue,
            [u, v] => (*u, *v, 1.0),
            [u, v, w] => {
                let w: f64 = w.parse().map_err(|_| Error::Parse {
                    line: lineno,
                    message: format!("cannot parse weight '{w}'"),
                })?;
                (*u, *v, w)
            }
            _ => {
                return Err(Error::Parse {
                    line: lineno,
                    message: format!("expected 'u v [w]', found {} fields", fields.len()),
                })
            }
        };
        if u == v {
            return Err(Error::SelfLoop {
                line: lineno,
                label: u.to_string(),
            });
        }
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::NonPositiveWeight { line: lineno, weight: w });
        }
        let (a, b) = (lm.intern(u), lm.intern(v));
        let key = (a.min(b), a.max(b));
        if let Some(prev) = first_seen.get(&key) {
            log::warn!("line {lineno}: edge {u} {v} repeats line {prev}; weights are summed");
        } else {
            first_seen.insert(key, lineno);
        }
        edges.push((a, b, w));
    }
    if edges.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = lm.len();
    match Graph::from_edges(n, edges) {
        Ok(g) => Ok((g, lm)),
        Err(Error::Disconnected { reached, unreached }) => {
            let name = |s: &str| s.parse::<usize>().map(|i| lm.label(i).to_string()).unwrap_or_default();
            Err(Error::Disconnected {
                reached: name(&reached),
                unreached: name(&unreached),
            })
        }
        Err(e) => Err(e),
    }
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<(Graph, LabelMap)> {
    read_edge_list(File::open(path)?)
}

/// Reads one label per line (blank lines and `#` comments ignored).
pub fn read_seed_set<R: Read>(reader: R, lm: &LabelMap) -> Result<NodeSet> {
    let mut ids = Vec::new();
    for line in BufReader::new(reader).lines() {
        let line = line?;
        for label in strip_comment(&line).split_whitespace() {
            ids.push(lm.resolve(label)?);
        }
    }
    if ids.is_empty() {
        return Err(Error::EmptySeed);
    }
    Ok(NodeSet::new(ids))
}

pub fn load_seed_set(path: impl AsRef<Path>, lm: &LabelMap) -> Result<NodeSet> {
    read_seed_set(File::open(path)?, lm)
}

fn json_number(x: f64) -> Result<String> {
    Ok(serde_json::to_string(&x)?)
}

/// Writes the result as a JSON object with external labels. Extras follow
/// the fixed fields in key order.
pub fn write_result<W: Write>(result: &ClusterResult, lm: &LabelMap, mut out: W) -> Result<()> {
    let labels: Vec<&str> = result.set.iter().map(|v| lm.label(v)).collect();
    let mut fields: Vec<(String, String)> = vec![
        ("set".into(), serde_json::to_string(&labels)?),
        ("objective_name".into(), serde_json::to_string(&result.objective_name)?),
        ("objective".into(), json_number(result.objective)?),
        ("conductance".into(), json_number(result.conductance)?),
        ("cut".into(), json_number(result.cut)?),
        ("volume".into(), json_number(result.volume)?),
        ("touched_nodes".into(), result.touched_nodes.to_string()),
        ("iterations".into(), result.iterations.to_string()),
        ("runtime_ms".into(), json_number(result.runtime_ms)?),
    ];
    for (k, v) in &result.extras {
        fields.push((k.clone(), json_number(*v)?));
    }
    writeln!(out, "{{")?;
    for (i, (k, v)) in fields.iter().enumerate() {
        let sep = if i + 1 == fields.len() { "" } else { "," };
        writeln!(out, "  {}: {}{}", serde_json::to_string(k)?, v, sep)?;
    }
    writeln!(out, "}}")?;
    Ok(())
}

/// Writes `node,value` rows: every node for a dense vector, nonzeros only
/// for a sparse one.
pub fn write_vector_csv<W: Write>(x: &EmbeddingVector, lm: &LabelMap, mut out: W) -> Result<()> {
    writeln!(out, "node,value")?;
    for (i, v) in x.entries() {
        writeln!(out, "{},{:.16e}", lm.label(i), v)?;
    }
    Ok(())
}

/// Reads a `node,value` CSV; unlisted nodes are zero.
pub fn read_vector_csv<R: Read>(reader: R, lm: &LabelMap) -> Result<EmbeddingVector> {
    let mut lines = BufReader::new(reader).lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != "node,value" {
        return Err(Error::Parse {
            line: 1,
            message: "expected header 'node,value'".into(),
        });
    }
    let mut entries = Vec::new();
    for (k, line) in lines.enumerate() {
        let line = line?;
        let lineno = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        let (label, value) = line.rsplit_once(',').ok_or_else(|| Error::Parse {
            line: lineno,
            message: "expected 'node,value'".into(),
        })?;
        let value: f64 = value.trim().parse().map_err(|_| Error::Parse {
            line: lineno,
            message: format!("cannot parse value '{}'", value.trim()),
        })?;
        entries.push((lm.resolve(label.trim())?, value));
    }
    Ok(EmbeddingVector::sparse(lm.len(), entries, EmbeddingKind::External))
}

/// Writes `u v w` lines with external labels, one per undirected edge.
pub fn write_edge_list<W: Write>(g: &Graph, lm: &LabelMap, mut out: W) -> Result<()> {
    for (u, v, w) in g.edges() {
        writeln!(out, "{} {} {}", lm.label(u), lm.label(v), w)?;
    }
    Ok(())
}
