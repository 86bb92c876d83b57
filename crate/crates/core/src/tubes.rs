//! Canonical and generic decompositions of regular dimension vectors,
//! labeled polygons and their admissible arcs.
//!
//! Polygon conventions: vertex `k` of a family's polygon carries the
//! coefficient `p_k`, and edge `k` runs from vertex `k` to vertex `k + 1`
//! (mod `u`) carrying `e_k`. Arcs run clockwise, i.e. in increasing index.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euclidean::EuclideanStructure;
use crate::quiver::{DimensionVector, Weight};

/// `d = p h + sum_f sum_i coefficients[f][i] e^f_i`, with a zero coefficient
/// in every family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalDecomposition {
    pub p: i64,
    pub coefficients: Vec<Vec<i64>>,
}

impl CanonicalDecomposition {
    pub fn reconstruct(&self, es: &EuclideanStructure) -> Vec<i64> {
        let mut d = es.h().scaled(self.p).into_vec();
        for (fam, coeffs) in es.families().iter().zip(&self.coefficients) {
            for (e, &c) in fam.vectors().iter().zip(coeffs) {
                for (x, y) in d.iter_mut().zip(e.iter()) {
                    *x += c * y;
                }
            }
        }
        d
    }

    pub fn polygons(&self) -> Vec<LabeledPolygon> {
        self.coefficients
            .iter()
            .enumerate()
            .map(|(family, labels)| LabeledPolygon {
                family,
                labels: labels.clone(),
            })
            .collect()
    }
}

/// Solves for the canonical decomposition.
///
/// Within a family `<e_k, d> = p_k - p_{k+1}`, so the labels are fixed up to
/// a constant by Euler pairings; the constant is chosen to make the minimum
/// zero, and the remainder must be a nonnegative integer multiple of `h`.
pub fn canonical_decomposition(
    es: &EuclideanStructure,
    d: &[i64],
) -> Result<CanonicalDecomposition> {
    let q = es.quiver();
    let defect = es.defect(d)?;
    if defect != 0 {
        return Err(Error::NotRegular(format!("defect is {defect}")));
    }
    let mut coefficients = Vec::with_capacity(es.families().len());
    let mut rest = d.to_vec();
    for fam in es.families() {
        let u = fam.size();
        let mut labels = vec![0i64; u];
        for k in 0..u - 1 {
            labels[k + 1] = labels[k] - q.euler_form(fam.get(k), d)?;
        }
        let min = *labels.iter().min().unwrap();
        labels.iter_mut().for_each(|x| *x -= min);
        for (e, &c) in fam.vectors().iter().zip(&labels) {
            for (x, y) in rest.iter_mut().zip(e.iter()) {
                *x -= c * y;
            }
        }
        coefficients.push(labels);
    }
    let h = es.h();
    let p = rest[0] / h[0];
    if rest.iter().zip(h.iter()).any(|(&r, &x)| r != p * x) {
        return Err(Error::NotRegular(format!(
            "remainder {rest:?} is not a multiple of h"
        )));
    }
    if p < 0 {
        return Err(Error::NotRegular(format!("remainder is {p} h")));
    }
    let cd = CanonicalDecomposition { p, coefficients };
    debug_assert_eq!(cd.reconstruct(es), d);
    Ok(cd)
}

pub fn is_regular(es: &EuclideanStructure, d: &[i64]) -> bool {
    canonical_decomposition(es, d).is_ok()
}

/// A summand of the generic decomposition: `h`, or a consecutive run of
/// `len` edges starting at `start` in some family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summand {
    pub dim: DimensionVector,
    pub multiplicity: usize,
    pub family: Option<usize>,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericDecomposition {
    pub summands: Vec<Summand>,
}

impl GenericDecomposition {
    pub fn total(&self, n: usize) -> Vec<i64> {
        let mut t = vec![0; n];
        for s in &self.summands {
            for (x, y) in t.iter_mut().zip(s.dim.iter()) {
                *x += y * s.multiplicity as i64;
            }
        }
        t
    }

    pub fn non_homogeneous(&self) -> impl Iterator<Item = &Summand> {
        self.summands.iter().filter(|s| s.family.is_some())
    }
}

/// Maximal cyclic runs of indices in `set`, as `(start, len)`.
fn cyclic_runs(set: &[bool]) -> Vec<(usize, usize)> {
    let u = set.len();
    if set.iter().all(|&b| b) {
        return vec![(0, u)];
    }
    let mut runs = Vec::new();
    for start in 0..u {
        if set[start] && !set[(start + u - 1) % u] {
            let mut len = 0;
            while set[(start + len) % u] {
                len += 1;
            }
            runs.push((start, len));
        }
    }
    runs
}

/// Peels each family's labels from the top level down: the vertices at the
/// current maximum split into maximal cyclic runs, each run contributes the
/// sum of its `e_i`, and the maximum drops by one.
pub fn generic_decomposition(
    es: &EuclideanStructure,
    cd: &CanonicalDecomposition,
) -> GenericDecomposition {
    let mut summands: Vec<Summand> = Vec::new();
    let mut push = |s: Summand| {
        if let Some(existing) = summands
            .iter_mut()
            .find(|x| x.family == s.family && x.start == s.start && x.len == s.len)
        {
            existing.multiplicity += s.multiplicity;
        } else {
            summands.push(s);
        }
    };
    if cd.p > 0 {
        push(Summand {
            dim: es.h().clone(),
            multiplicity: cd.p as usize,
            family: None,
            start: 0,
            len: 0,
        });
    }
    for (fi, (fam, coeffs)) in es.families().iter().zip(&cd.coefficients).enumerate() {
        for (start, len, mult) in peel(coeffs) {
            push(Summand {
                dim: DimensionVector::from_vec_unchecked(fam.cyclic_sum(start, len)),
                multiplicity: mult,
                family: Some(fi),
                start,
                len,
            });
        }
    }
    GenericDecomposition { summands }
}

/// Runs `(start, len)` produced by peeling a label vector, one entry per
/// level (repeated runs are merged into a multiplicity).
pub fn peel(labels: &[i64]) -> Vec<(usize, usize, usize)> {
    let mut labels = labels.to_vec();
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    loop {
        let top = labels.iter().copied().max().unwrap_or(0);
        if top <= 0 {
            return out;
        }
        let at_top: Vec<bool> = labels.iter().map(|&x| x == top).collect();
        for (start, len) in cyclic_runs(&at_top) {
            match out.iter_mut().find(|r| r.0 == start && r.1 == len) {
                Some(r) => r.2 += 1,
                None => out.push((start, len, 1)),
            }
        }
        for (x, t) in labels.iter_mut().zip(&at_top) {
            if *t {
                *x -= 1;
            }
        }
    }
}

/// A family's polygon with vertex labels `p_0, ..., p_{u-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledPolygon {
    pub family: usize,
    pub labels: Vec<i64>,
}

impl LabeledPolygon {
    pub fn size(&self) -> usize {
        self.labels.len()
    }
}

/// Clockwise arc from vertex `start` to vertex `end` over `len` edges
/// `e_start, ..., e_{end-1}`, with `1 <= len <= u - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub family: usize,
    pub start: usize,
    pub end: usize,
    pub len: usize,
}

impl Arc {
    fn new(family: usize, start: usize, len: usize, u: usize) -> Self {
        Arc {
            family,
            start,
            end: (start + len) % u,
            len,
        }
    }

    pub fn interior(&self, u: usize) -> impl Iterator<Item = usize> {
        let s = self.start;
        (1..self.len).map(move |k| (s + k) % u)
    }
}

/// Arcs with equal extreme labels and strictly larger interior labels,
/// ordered by start vertex then length. Full circles are excluded.
pub fn admissible_arcs(poly: &LabeledPolygon) -> Vec<Arc> {
    let u = poly.size();
    let p = &poly.labels;
    let mut out = Vec::new();
    for start in 0..u {
        for len in 1..u {
            let arc = Arc::new(poly.family, start, len, u);
            if p[arc.end] == p[start] && arc.interior(u).all(|k| p[k] > p[start]) {
                out.push(arc);
            }
        }
    }
    out
}

/// Arcs whose extreme labels are equal but which are not admissible.
pub fn equal_label_non_admissible_arcs(poly: &LabeledPolygon) -> Vec<Arc> {
    let u = poly.size();
    let p = &poly.labels;
    let mut out = Vec::new();
    for start in 0..u {
        for len in 1..u {
            let arc = Arc::new(poly.family, start, len, u);
            if p[arc.end] == p[start] && !arc.interior(u).all(|k| p[k] > p[start]) {
                out.push(arc);
            }
        }
    }
    out
}

/// Name, dimension vector and weight of the indecomposable attached to an
/// arc: arc `[s, t]` is the module `E_{t-1, s}` with socle `E_{t-1}` and top
/// `E_s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcModule {
    pub arc: Arc,
    pub socle: usize,
    pub top: usize,
    pub name: String,
    pub dim: DimensionVector,
    pub weight: Weight,
}

impl ArcModule {
    /// Stable identifier `E:<family>:<socle>:<top>`.
    pub fn id(&self) -> String {
        format!("E:{}:{}:{}", self.arc.family, self.socle, self.top)
    }
}

pub fn family_prefix(family: usize) -> String {
    format!("E{}", "'".repeat(family))
}

pub fn arc_generator_data(es: &EuclideanStructure, arc: &Arc) -> Result<ArcModule> {
    let fam = es
        .families()
        .get(arc.family)
        .ok_or_else(|| Error::InvalidInput(format!("no family {}", arc.family)))?;
    let u = fam.size();
    let socle = (arc.end + u - 1) % u;
    let top = arc.start;
    let dim = DimensionVector::from_vec_unchecked(fam.cyclic_sum(arc.start, arc.len));
    let weight = es.quiver().weight_of_left_form(&dim)?;
    Ok(ArcModule {
        arc: *arc,
        socle,
        top,
        name: format!("{}_{{{},{}}}", family_prefix(arc.family), socle, top),
        dim,
        weight,
    })
}

/// Arcs between cyclically consecutive zero-labeled vertices, when there are
/// at least two such vertices. They partition the polygon's edges.
pub fn min_level_partition(poly: &LabeledPolygon) -> Option<Vec<Arc>> {
    let u = poly.size();
    let zeros: Vec<usize> = (0..u).filter(|&i| poly.labels[i] == 0).collect();
    if zeros.len() < 2 {
        return None;
    }
    Some(
        (0..zeros.len())
            .map(|k| {
                let s = zeros[k];
                let t = zeros[(k + 1) % zeros.len()];
                Arc::new(poly.family, s, (t + u - s) % u, u)
            })
            .collect(),
    )
}
