//! Vectors over the vertex set: embeddings produced by the spectral solvers
//! and the seed vectors that localize them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};

/// Which solver produced an [`EmbeddingVector`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Fiedler,
    Dirichlet,
    Mov,
    L1pr,
    /// Supplied from outside, e.g. read from a file.
    External,
}

/// Dense or sparse storage of vertex values.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Dense(Vec<f64>),
    /// Entries sorted by vertex id; absent vertices are zero.
    Sparse(Vec<(usize, f64)>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    pub n: usize,
    pub values: Values,
    pub kind: EmbeddingKind,
}

impl EmbeddingVector {
    pub fn dense(values: Vec<f64>, kind: EmbeddingKind) -> Self {
        EmbeddingVector {
            n: values.len(),
            values: Values::Dense(values),
            kind,
        }
    }

    /// Builds a sparse vector; entries are sorted and exact zeros dropped.
    pub fn sparse(n: usize, mut entries: Vec<(usize, f64)>, kind: EmbeddingKind) -> Self {
        entries.retain(|&(_, x)| x != 0.0);
        entries.sort_by_key(|&(i, _)| i);
        EmbeddingVector {
            n,
            values: Values::Sparse(entries),
            kind,
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.values, Values::Sparse(_))
    }

    pub fn get(&self, i: usize) -> f64 {
        match &self.values {
            Values::Dense(v) => v[i],
            Values::Sparse(e) => match e.binary_search_by_key(&i, |&(j, _)| j) {
                Ok(k) => e[k].1,
                Err(_) => 0.0,
            },
        }
    }

    pub fn to_dense(&self) -> Vec<f64> {
        match &self.values {
            Values::Dense(v) => v.clone(),
            Values::Sparse(e) => {
                let mut out = vec![0.0; self.n];
                for &(i, x) in e {
                    out[i] = x;
                }
                out
            }
        }
    }

    /// `(vertex, value)` pairs: every vertex for dense storage, the stored
    /// nonzeros for sparse storage.
    pub fn entries(&self) -> Vec<(usize, f64)> {
        match &self.values {
            Values::Dense(v) => v.iter().copied().enumerate().collect(),
            Values::Sparse(e) => e.clone(),
        }
    }

    /// Vertices with a nonzero value.
    pub fn support(&self) -> NodeSet {
        self.entries()
            .into_iter()
            .filter(|&(_, x)| x != 0.0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn l1_norm(&self) -> f64 {
        self.entries().iter().map(|&(_, x)| x.abs()).sum()
    }
}

/// A sparse seed vector: a distribution `h` (nonnegative, summing to one)
/// for ℓ1-regularized PageRank, or a signed localization vector `z` for MOV.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedVector {
    entries: Vec<(usize, f64)>,
}

impl SeedVector {
    /// Arbitrary sparse entries; repeated vertices are summed.
    pub fn new(mut entries: Vec<(usize, f64)>) -> Self {
        entries.sort_by_key(|&(i, _)| i);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(entries.len());
        for (i, x) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == i => last.1 += x,
                _ => merged.push((i, x)),
            }
        }
        merged.retain(|&(_, x)| x != 0.0);
        SeedVector { entries: merged }
    }

    /// Point mass on `v`.
    pub fn single(v: usize) -> Self {
        SeedVector {
            entries: vec![(v, 1.0)],
        }
    }

    /// Distribution over `set` proportional to degree.
    pub fn degree_weighted(g: &Graph, set: &NodeSet) -> Result<Self> {
        g.validate_set(set)?;
        if set.is_empty() {
            return Err(Error::EmptySeed);
        }
        let vol = g.volume_unchecked(set);
        Ok(SeedVector {
            entries: set.iter().map(|v| (v, g.degree(v) / vol)).collect(),
        })
    }

    /// Indicator vector of `set`.
    pub fn indicator(set: &NodeSet) -> Self {
        SeedVector {
            entries: set.iter().map(|v| (v, 1.0)).collect(),
        }
    }

    pub fn entries(&self) -> &[(usize, f64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.num_nodes();
        if let Some(&(i, _)) = self.entries.iter().find(|&&(i, _)| i >= n) {
            return Err(Error::InvalidSet { vertex: i, n });
        }
        if self.entries.iter().any(|&(_, x)| !x.is_finite()) {
            return Err(Error::InvalidParameter("seed vector has non-finite entries".into()));
        }
        Ok(())
    }

    pub fn to_dense(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for &(i, x) in &self.entries {
            out[i] = x;
        }
        out
    }
}

/// How a local computation is localized.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedSpec {
    /// A reference set R.
    Set(NodeSet),
    /// A distribution vector h.
    Distribution(SeedVector),
    /// A correlation vector z.
    Correlation(SeedVector),
}
