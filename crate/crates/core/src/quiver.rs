//! Quivers without oriented cycles, dimension vectors, weights and the
//! bilinear forms attached to them.
//!
//! Vertices are stored in a topological order: every arrow goes from a
//! smaller dense index to a larger one. The string ids from the input are
//! kept as labels and used for all serialized output.

use std::collections::{BTreeSet, HashMap};
use std::ops::Deref;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input form of a quiver, as read from JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawQuiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<RawArrow>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawArrow {
    pub id: String,
    pub tail: String,
    pub head: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

/// A finite connected quiver without oriented cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quiver {
    labels: Vec<String>,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Validates a raw description and re-indexes its vertices topologically.
    ///
    /// Among the vertices available at each step the one listed first in the
    /// input is taken, so an input that is already topologically sorted keeps
    /// its order.
    pub fn new(raw: &RawQuiver) -> Result<Self> {
        let mut position = HashMap::new();
        for (i, v) in raw.vertices.iter().enumerate() {
            if position.insert(v.as_str(), i).is_some() {
                return Err(Error::DuplicateId(v.clone()));
            }
        }
        if raw.vertices.is_empty() {
            return Err(Error::InvalidInput("quiver has no vertices".into()));
        }

        let mut arrow_ids = BTreeSet::new();
        let mut edges = Vec::with_capacity(raw.arrows.len());
        for a in &raw.arrows {
            if !arrow_ids.insert(a.id.as_str()) {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            let t = *position
                .get(a.tail.as_str())
                .ok_or_else(|| Error::UnknownVertex(a.tail.clone()))?;
            let h = *position
                .get(a.head.as_str())
                .ok_or_else(|| Error::UnknownVertex(a.head.clone()))?;
            if t == h {
                return Err(Error::CyclicQuiver(a.tail.clone()));
            }
            edges.push((t, h));
        }

        let n = raw.vertices.len();
        let mut indegree = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(t, h) in &edges {
            indegree[h] += 1;
            out[t].push(h);
        }
        let mut ready: BTreeSet<usize> = (0..n).filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &w in &out[v] {
                indegree[w] -= 1;
                if indegree[w] == 0 {
                    ready.insert(w);
                }
            }
        }
        if order.len() < n {
            let stuck = (0..n).find(|&v| indegree[v] > 0).unwrap();
            return Err(Error::CyclicQuiver(raw.vertices[stuck].clone()));
        }

        let mut dense = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            dense[old] = new;
        }

        // connectivity of the underlying graph
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(t, h) in &edges {
            adj[dense[t]].push(dense[h]);
            adj[dense[h]].push(dense[t]);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Disconnected(raw.vertices[order[v]].clone()));
        }

        let labels = order.iter().map(|&old| raw.vertices[old].clone()).collect();
        let arrows = raw
            .arrows
            .iter()
            .zip(&edges)
            .map(|(a, &(t, h))| Arrow {
                id: a.id.clone(),
                tail: dense[t],
                head: dense[h],
            })
            .collect();
        Ok(Quiver { labels, arrows })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawQuiver =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        Self::new(&raw)
    }

    pub fn to_raw(&self) -> RawQuiver {
        RawQuiver {
            vertices: self.labels.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| RawArrow {
                    id: a.id.clone(),
                    tail: self.labels[a.tail].clone(),
                    head: self.labels[a.head].clone(),
                })
                .collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == id)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub(crate) fn check_len(&self, v: &[i64]) -> Result<()> {
        if v.len() != self.vertex_count() {
            return Err(Error::IndexMismatch {
                expected: self.vertex_count(),
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Euler form `<a, b> = sum_x a(x) b(x) - sum_arrows a(tail) b(head)`.
    pub fn euler_form(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        let mut acc = 0i64;
        for (x, y) in a.iter().zip(b) {
            acc = checked_fma(acc, *x, *y, "euler form")?;
        }
        for arrow in &self.arrows {
            acc = checked_fma(acc, -a[arrow.tail], b[arrow.head], "euler form")?;
        }
        Ok(acc)
    }

    pub fn quadratic_form(&self, a: &[i64]) -> Result<i64> {
        self.euler_form(a, a)
    }

    /// Coordinates of the functional `<a, ->`.
    pub fn weight_of_left_form(&self, a: &[i64]) -> Result<Weight> {
        self.check_len(a)?;
        let mut sigma = a.to_vec();
        for arrow in &self.arrows {
            sigma[arrow.head] = sigma[arrow.head]
                .checked_sub(a[arrow.tail])
                .ok_or(Error::Overflow("left weight"))?;
        }
        Ok(Weight(sigma))
    }

    /// Coordinates of the functional `-<-, b>`.
    pub fn weight_of_right_form(&self, b: &[i64]) -> Result<Weight> {
        self.check_len(b)?;
        let mut sigma: Vec<i64> = b.iter().map(|x| -x).collect();
        for arrow in &self.arrows {
            sigma[arrow.tail] = sigma[arrow.tail]
                .checked_add(b[arrow.head])
                .ok_or(Error::Overflow("right weight"))?;
        }
        Ok(Weight(sigma))
    }

    pub fn apply_weight(&self, s: &Weight, g: &[i64]) -> Result<i64> {
        self.check_len(s)?;
        apply_weight(s, g)
    }

    /// Matrix of the symmetrized Euler form `<a,b> + <b,a>`.
    pub fn symmetric_gram(&self) -> Vec<Vec<i64>> {
        let n = self.vertex_count();
        let mut g = vec![vec![0i64; n]; n];
        for (i, row) in g.iter_mut().enumerate() {
            row[i] = 2;
        }
        for a in &self.arrows {
            g[a.tail][a.head] -= 1;
            g[a.head][a.tail] -= 1;
        }
        g
    }

    /// Reads a dimension vector keyed by vertex id; every vertex must appear.
    pub fn dimension_vector_from_map(&self, map: &IndexMap<String, i64>) -> Result<DimensionVector> {
        for key in map.keys() {
            if self.vertex_index(key).is_none() {
                return Err(Error::UnknownVertex(key.clone()));
            }
        }
        let mut entries = Vec::with_capacity(self.vertex_count());
        for label in &self.labels {
            let v = *map.get(label).ok_or_else(|| {
                Error::InvalidInput(format!("dimension vector is missing vertex {label:?}"))
            })?;
            entries.push(v);
        }
        DimensionVector::new(self, entries)
    }

    pub fn dimension_vector_from_json(&self, text: &str) -> Result<DimensionVector> {
        let map: IndexMap<String, i64> =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))?;
        self.dimension_vector_from_map(&map)
    }

    /// Labels an integer vector with vertex ids, in vertex order.
    pub fn labeled(&self, v: &[i64]) -> LabeledVector {
        LabeledVector(
            self.labels
                .iter()
                .cloned()
                .zip(v.iter().copied())
                .collect(),
        )
    }
}

fn checked_fma(acc: i64, x: i64, y: i64, what: &'static str) -> Result<i64> {
    x.checked_mul(y)
        .and_then(|p| acc.checked_add(p))
        .ok_or(Error::Overflow(what))
}

/// `sum_x s(x) g(x)`.
pub fn apply_weight(s: &[i64], g: &[i64]) -> Result<i64> {
    if s.len() != g.len() {
        return Err(Error::IndexMismatch {
            expected: s.len(),
            found: g.len(),
        });
    }
    s.iter()
        .zip(g)
        .try_fold(0i64, |acc, (x, y)| checked_fma(acc, *x, *y, "weight pairing"))
}

/// Nonnegative integer vector indexed by the dense vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimensionVector(Vec<i64>);

impl DimensionVector {
    pub fn new(q: &Quiver, entries: Vec<i64>) -> Result<Self> {
        q.check_len(&entries)?;
        if let Some(v) = entries.iter().position(|&x| x < 0) {
            return Err(Error::NegativeDimension {
                vertex: q.label(v).to_string(),
                value: entries[v],
            });
        }
        Ok(DimensionVector(entries))
    }

    /// Caller guarantees nonnegativity and the right length.
    pub(crate) fn from_vec_unchecked(entries: Vec<i64>) -> Self {
        debug_assert!(entries.iter().all(|&x| x >= 0));
        DimensionVector(entries)
    }

    pub fn zero(n: usize) -> Self {
        DimensionVector(vec![0; n])
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn scaled(&self, k: i64) -> Self {
        DimensionVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn into_vec(self) -> Vec<i64> {
        self.0
    }
}

impl Deref for DimensionVector {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

/// Integer vector indexed by vertices, the exponent data of a character.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Weight(pub Vec<i64>);

impl Deref for Weight {
    type Target = [i64];
    fn deref(&self) -> &[i64] {
        &self.0
    }
}

/// Integer vector keyed by vertex id, the serialized form of dimension
/// vectors and weights.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LabeledVector(pub IndexMap<String, i64>);

impl LabeledVector {
    pub fn values(&self) -> Vec<i64> {
        self.0.values().copied().collect()
    }
}

pub(crate) fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}
