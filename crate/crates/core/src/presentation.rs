//! Generators, relations and classification of the semi-invariant algebra
//! of a regular dimension vector.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euclidean::EuclideanStructure;
use crate::quiver::LabeledVector;
use crate::tubes::{
    admissible_arcs, arc_generator_data, canonical_decomposition, min_level_partition,
    CanonicalDecomposition,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Arc,
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub kind: GeneratorKind,
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<LabeledVector>,
    pub weight: LabeledVector,
}

/// `sum(lhs) = prod(rhs)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub family: usize,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    PolynomialRing,
    Hypersurface,
    DenseOrbitPolynomial,
    OutOfScope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationConfig {
    /// Largest `m` listed in the weight-space dimension table.
    pub max_m: u32,
}

impl Default for PresentationConfig {
    fn default() -> Self {
        PresentationConfig { max_m: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightSpaceDim {
    pub m: u32,
    pub dim: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub d: LabeledVector,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i64>,
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub classification: Classification,
    pub weight_space_dims: Vec<WeightSpaceDim>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn regular_with_p(es: &EuclideanStructure, d: &[i64]) -> Result<CanonicalDecomposition> {
    let cd = canonical_decomposition(es, d)?;
    if cd.p == 0 {
        return Err(Error::DenseOrbitCase);
    }
    Ok(cd)
}

/// Homogeneous basis `c_0, ..., c_p` followed by the arc generators of each
/// family in admissible-arc order.
pub fn generators(es: &EuclideanStructure, d: &[i64]) -> Result<Vec<Generator>> {
    let cd = regular_with_p(es, d)?;
    let q = es.quiver();
    let defect = q.labeled(es.defect_weight());
    let mut out: Vec<Generator> = (0..=cd.p as usize)
        .map(|k| Generator {
            id: format!("c{k}"),
            kind: GeneratorKind::Homogeneous,
            name: format!("c_{k}"),
            family: None,
            arc: None,
            index: Some(k),
            dim: None,
            weight: defect.clone(),
        })
        .collect();
    for poly in cd.polygons() {
        for arc in admissible_arcs(&poly) {
            let m = arc_generator_data(es, &arc)?;
            out.push(Generator {
                id: m.id(),
                kind: GeneratorKind::Arc,
                name: m.name.clone(),
                family: Some(arc.family),
                arc: Some([arc.start, arc.end]),
                index: None,
                dim: Some(q.labeled(&m.dim)),
                weight: q.labeled(&m.weight),
            });
        }
    }
    Ok(out)
}

/// One relation per family whose zero labels split the polygon; the first
/// such family binds `c_0`, the second `c_p`, the third `c_0 + ... + c_p`.
pub fn relations(es: &EuclideanStructure, d: &[i64]) -> Result<Vec<Relation>> {
    let cd = regular_with_p(es, d)?;
    let p = cd.p as usize;
    let mut out = Vec::new();
    for poly in cd.polygons() {
        let Some(parts) = min_level_partition(&poly) else {
            continue;
        };
        let lhs = match out.len() {
            0 => vec!["c0".to_string()],
            1 => vec![format!("c{p}")],
            _ => (0..=p).map(|k| format!("c{k}")).collect(),
        };
        let rhs = parts
            .iter()
            .map(|a| arc_generator_data(es, a).map(|m| m.id()))
            .collect::<Result<Vec<_>>>()?;
        out.push(Relation {
            family: poly.family,
            lhs,
            rhs,
        });
    }
    Ok(out)
}

/// Families whose labels have fewer than two zeros, hence no relation.
fn families_without_partition(cd: &CanonicalDecomposition) -> Vec<usize> {
    cd.polygons()
        .iter()
        .filter(|poly| min_level_partition(poly).is_none())
        .map(|poly| poly.family)
        .collect()
}

/// Polynomial in commuting generators: sorted monomial -> coefficient.
type Poly = BTreeMap<Vec<String>, BigRational>;

fn relation_poly(r: &Relation) -> Poly {
    let mut p = Poly::new();
    for g in &r.lhs {
        *p.entry(vec![g.clone()]).or_insert_with(BigRational::zero) += BigRational::one();
    }
    let mut mono = r.rhs.clone();
    mono.sort();
    *p.entry(mono).or_insert_with(BigRational::zero) -= BigRational::one();
    p.retain(|_, c| !c.is_zero());
    p
}

/// A generator occurring in `p` only as a degree-one term.
fn linear_generator(p: &Poly) -> Option<String> {
    p.keys()
        .filter(|m| m.len() == 1)
        .map(|m| &m[0])
        .find(|g| p.keys().filter(|m| m.contains(g)).count() == 1)
        .cloned()
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<String> = ma.iter().chain(mb).cloned().collect();
            m.sort();
            *out.entry(m).or_insert_with(BigRational::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Replaces every occurrence of `g` in `target` by `value`.
fn substitute(target: &Poly, g: &str, value: &Poly) -> Poly {
    let mut out = Poly::new();
    for (m, c) in target {
        let k = m.iter().filter(|x| *x == g).count();
        let mut term: Poly = Poly::from([(
            m.iter().filter(|x| *x != g).cloned().collect::<Vec<_>>(),
            c.clone(),
        )]);
        for _ in 0..k {
            term = mul(&term, value);
        }
        for (tm, tc) in term {
            *out.entry(tm).or_insert_with(BigRational::zero) += tc;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Number of relations left after repeatedly solving a relation for a
/// generator that occurs in it linearly and substituting into the rest.
pub fn eliminate(relations: &[Relation]) -> usize {
    let mut polys: Vec<Poly> = relations.iter().map(relation_poly).collect();
    polys.retain(|p| !p.is_empty());
    'outer: loop {
        for i in 0..polys.len() {
            if let Some(g) = linear_generator(&polys[i]) {
                let r = polys.remove(i);
                let key = vec![g.clone()];
                let coeff = r[&key].clone();
                let value: Poly = r
                    .iter()
                    .filter(|(m, _)| **m != key)
                    .map(|(m, c)| (m.clone(), -c / &coeff))
                    .collect();
                polys = polys
                    .iter()
                    .map(|p| substitute(p, &g, &value))
                    .filter(|p| !p.is_empty())
                    .collect();
                continue 'outer;
            }
        }
        return polys.len();
    }
}

pub fn classify_algebra(es: &EuclideanStructure, d: &[i64]) -> Classification {
    let rels = match relations(es, d) {
        Ok(r) => r,
        Err(Error::NotRegular(_)) | Err(Error::DenseOrbitCase) => {
            return Classification::DenseOrbitPolynomial
        }
        Err(_) => return Classification::OutOfScope,
    };
    match eliminate(&rels) {
        0 => Classification::PolynomialRing,
        1 => Classification::Hypersurface,
        _ => Classification::OutOfScope,
    }
}

/// `binom(p + m, m)`.
pub fn weight_space_dim_formula(p: u64, m: u64) -> Result<u128> {
    let mut acc: u128 = 1;
    for i in 1..=m as u128 {
        acc = acc
            .checked_mul(p as u128 + i)
            .ok_or(Error::Overflow("binomial coefficient"))?
            / i;
    }
    Ok(acc)
}

pub fn presentation(
    es: &EuclideanStructure,
    d: &[i64],
    config: &PresentationConfig,
) -> Result<Presentation> {
    let q = es.quiver();
    q.check_len(d)?;
    let classification = classify_algebra(es, d);
    let labeled_d = q.labeled(d);
    if classification == Classification::DenseOrbitPolynomial {
        let p = canonical_decomposition(es, d).ok().map(|cd| cd.p);
        return Ok(Presentation {
            d: labeled_d,
            p,
            generators: Vec::new(),
            relations: Vec::new(),
            classification,
            weight_space_dims: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let cd = regular_with_p(es, d)?;
    let generators = generators(es, d)?;
    for g in &generators {
        let w = g.weight.values();
        if q.apply_weight(&crate::quiver::Weight(w), d)? != 0 {
            return Err(Error::StructureCheckFailed(format!(
                "generator {} has a weight not vanishing on d",
                g.id
            )));
        }
    }
    let relations = relations(es, d)?;
    let weight_space_dims = (0..=config.max_m)
        .map(|m| {
            weight_space_dim_formula(cd.p as u64, m as u64).map(|dim| WeightSpaceDim { m, dim })
        })
        .collect::<Result<Vec<_>>>()?;
    let warnings = families_without_partition(&cd)
        .into_iter()
        .map(|f| format!("family {f} has fewer than two zero labels; no relation emitted"))
        .collect();
    Ok(Presentation {
        d: labeled_d,
        p: Some(cd.p),
        generators,
        relations,
        classification,
        weight_space_dims,
        warnings,
    })
}

impl Presentation {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let fmt_vec = |v: &LabeledVector| {
            v.0.iter()
                .map(|(k, x)| format!("{k}={x}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(s, "d: {}", fmt_vec(&self.d));
        match self.p {
            Some(p) => {
                let _ = writeln!(s, "p: {p}");
            }
            None => {
                let _ = writeln!(s, "p: (not regular)");
            }
        }
        let _ = writeln!(s, "classification: {:?}", self.classification);
        let _ = writeln!(s, "generators ({}):", self.generators.len());
        for g in &self.generators {
            let dim = g.dim.as_ref().map(|v| format!("  dim [{}]", fmt_vec(v)));
            let _ = writeln!(
                s,
                "  {:<12} {:<12} weight [{}]{}",
                g.id,
                g.name,
                fmt_vec(&g.weight),
                dim.unwrap_or_default()
            );
        }
        let _ = writeln!(s, "relations ({}):", self.relations.len());
        for r in &self.relations {
            let _ = writeln!(s, "  {} = {}", r.lhs.join(" + "), r.rhs.join(" * "));
        }
        if !self.weight_space_dims.is_empty() {
            let dims: Vec<String> = self
                .weight_space_dims
                .iter()
                .map(|w| format!("{}:{}", w.m, w.dim))
                .collect();
            let _ = writeln!(s, "dim SI(Q,d)_(m*defect): {}", dims.join(" "));
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}
