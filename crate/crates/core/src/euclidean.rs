//! Graph classification, the radical vector, the Coxeter transformation and
//! the Coxeter orbits of non-homogeneous simple regular dimension vectors.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ExactMatrix;
use crate::quiver::{add, DimensionVector, Quiver, Weight};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Series {
    A,
    D,
    E,
}

/// A Dynkin or extended Dynkin diagram name, e.g. `D4` or `E~6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiagramType {
    pub series: Series,
    pub rank: usize,
    pub extended: bool,
}

impl fmt::Display for DiagramType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.series {
            Series::A => "A",
            Series::D => "D",
            Series::E => "E",
        };
        if self.extended {
            write!(f, "{s}~{}", self.rank)
        } else {
            write!(f, "{s}{}", self.rank)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphClass {
    Dynkin(DiagramType),
    Euclidean(DiagramType),
    Wild,
}

impl GraphClass {
    pub fn is_euclidean(&self) -> bool {
        matches!(self, GraphClass::Euclidean(_))
    }

    pub fn name(&self) -> &'static str {
        match self {
            GraphClass::Dynkin(_) => "Dynkin",
            GraphClass::Euclidean(_) => "Euclidean",
            GraphClass::Wild => "Wild",
        }
    }

    pub fn diagram(&self) -> Option<DiagramType> {
        match self {
            GraphClass::Dynkin(t) | GraphClass::Euclidean(t) => Some(*t),
            GraphClass::Wild => None,
        }
    }
}

/// `Some(nullity)` if the symmetric matrix is positive semi-definite.
///
/// Symmetric Gaussian elimination: a negative pivot, or a zero pivot with a
/// nonzero row, rules out semi-definiteness.
fn semidefinite_nullity(gram: &[Vec<i64>]) -> Option<usize> {
    let n = gram.len();
    let mut m: Vec<Vec<BigRational>> = gram
        .iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
        .collect();
    let mut nullity = 0;
    for k in 0..n {
        let pivot = m[k][k].clone();
        if pivot.is_negative() {
            return None;
        }
        if pivot.is_zero() {
            if m[k][k + 1..].iter().any(|x| !x.is_zero()) {
                return None;
            }
            nullity += 1;
            continue;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for j in k..n {
                let v = &m[i][j] - &f * &m[k][j];
                m[i][j] = v;
            }
        }
    }
    Some(nullity)
}

/// Names the underlying graph, assuming it is already known to be Dynkin
/// (`extended == false`) or Euclidean.
fn diagram_name(q: &Quiver, extended: bool) -> Option<DiagramType> {
    let n = q.vertex_count();
    let m = q.arrows().len();
    let mut neighbours: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in q.arrows() {
        neighbours[a.tail].push(a.head);
        neighbours[a.head].push(a.tail);
    }
    let ty = |series, rank| {
        Some(DiagramType {
            series,
            rank,
            extended,
        })
    };
    if extended && m == n {
        return ty(Series::A, n - 1);
    }
    if m + 1 != n {
        return None;
    }
    let branch: Vec<usize> = (0..n).filter(|&v| neighbours[v].len() >= 3).collect();
    match branch.as_slice() {
        [] if !extended => ty(Series::A, n),
        [c] if neighbours[*c].len() == 4 && extended && n == 5 => ty(Series::D, 4),
        [_, _] if extended => ty(Series::D, n - 1),
        [c] if neighbours[*c].len() == 3 => {
            let mut arms: Vec<usize> = neighbours[*c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (*c, start, 1);
                    while neighbours[cur].len() == 2 {
                        let next = if neighbours[cur][0] == prev {
                            neighbours[cur][1]
                        } else {
                            neighbours[cur][0]
                        };
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            match (extended, arms.as_slice()) {
                (false, [1, 1, _]) => ty(Series::D, n),
                (false, [1, 2, 2]) => ty(Series::E, 6),
                (false, [1, 2, 3]) => ty(Series::E, 7),
                (false, [1, 2, 4]) => ty(Series::E, 8),
                (true, [2, 2, 2]) => ty(Series::E, 6),
                (true, [1, 3, 3]) => ty(Series::E, 7),
                (true, [1, 2, 5]) => ty(Series::E, 8),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Dynkin iff the quadratic form is positive definite, Euclidean iff it is
/// positive semi-definite with a one-dimensional radical.
pub fn classify_graph(q: &Quiver) -> GraphClass {
    match semidefinite_nullity(&q.symmetric_gram()) {
        Some(0) => diagram_name(q, false).map_or(GraphClass::Wild, GraphClass::Dynkin),
        Some(1) => diagram_name(q, true).map_or(GraphClass::Wild, GraphClass::Euclidean),
        _ => GraphClass::Wild,
    }
}

/// The primitive positive generator of the radical of the quadratic form.
pub fn radical_generator(q: &Quiver) -> Result<DimensionVector> {
    if !classify_graph(q).is_euclidean() {
        return Err(Error::NotEuclidean);
    }
    let gram = ExactMatrix::from_rows(&q.symmetric_gram())?;
    let basis = gram.kernel_basis();
    let [v] = basis.as_slice() else {
        return Err(Error::StructureCheckFailed(format!(
            "radical has dimension {}",
            basis.len()
        )));
    };
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints.iter().any(|x| x.is_negative()) { -1 } else { 1 };
    let h: Vec<i64> = ints
        .iter()
        .map(|x| (x / &gcd).to_i64().map(|y| y * sign))
        .collect::<Option<_>>()
        .ok_or(Error::Overflow("radical generator"))?;
    if h.iter().any(|&x| x < 1) {
        return Err(Error::StructureCheckFailed(format!(
            "radical generator {h:?} is not positive"
        )));
    }
    Ok(DimensionVector::from_vec_unchecked(h))
}

/// Order in which the reflections of the Coxeter element are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoxeterOrder {
    /// `C = s_1 s_2 ... s_n` as a composition of maps: `s_n` acts first.
    #[default]
    SinkFirst,
    /// The inverse element: `s_1` acts first.
    SourceFirst,
}

fn reflect(q: &Quiver, v: &mut [i64], i: usize) {
    let mut s = -v[i];
    for a in q.arrows() {
        if a.tail == i {
            s += v[a.head];
        }
        if a.head == i {
            s += v[a.tail];
        }
    }
    v[i] = s;
}

pub fn coxeter_transform_with(q: &Quiver, a: &[i64], order: CoxeterOrder) -> Result<Vec<i64>> {
    q.check_len(a)?;
    let mut v = a.to_vec();
    let n = q.vertex_count();
    match order {
        CoxeterOrder::SinkFirst => (0..n).rev().for_each(|i| reflect(q, &mut v, i)),
        CoxeterOrder::SourceFirst => (0..n).for_each(|i| reflect(q, &mut v, i)),
    }
    Ok(v)
}

pub fn coxeter_transform(q: &Quiver, a: &[i64]) -> Result<Vec<i64>> {
    coxeter_transform_with(q, a, CoxeterOrder::SinkFirst)
}

pub fn coxeter_inverse(q: &Quiver, a: &[i64]) -> Result<Vec<i64>> {
    coxeter_transform_with(q, a, CoxeterOrder::SourceFirst)
}

/// All `0 < b < h` (componentwise, `b != h`) with `q(b) = 1` and defect 0,
/// found by scanning the box `[0, h]`. Sorted lexicographically.
pub fn defect_zero_roots_below(q: &Quiver, h: &[i64]) -> Result<Vec<DimensionVector>> {
    q.check_len(h)?;
    let n = h.len();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        // odometer increment
        let mut k = n;
        loop {
            if k == 0 {
                out.sort();
                return Ok(out);
            }
            k -= 1;
            if cur[k] < h[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = 0;
        }
        if cur.as_slice() == h {
            continue;
        }
        if q.quadratic_form(&cur)? == 1 && q.euler_form(h, &cur)? == 0 {
            out.push(DimensionVector::from_vec_unchecked(cur.clone()));
        }
    }
}

/// One Coxeter orbit `[e_0, ..., e_{u-1}]` with `C(e_i) = e_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitFamily {
    vectors: Vec<DimensionVector>,
}

impl OrbitFamily {
    /// No invariants are checked; see [`EuclideanStructure::validate`].
    pub fn from_vectors(vectors: Vec<DimensionVector>) -> Self {
        OrbitFamily { vectors }
    }

    pub fn size(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[DimensionVector] {
        &self.vectors
    }

    pub fn get(&self, i: usize) -> &DimensionVector {
        &self.vectors[i % self.vectors.len()]
    }

    /// `e_start + e_{start+1} + ... ` over `len` cyclically consecutive edges.
    pub fn cyclic_sum(&self, start: usize, len: usize) -> Vec<i64> {
        let n = self.vectors[0].len();
        (0..len).fold(vec![0; n], |acc, k| add(&acc, self.get(start + k)))
    }
}

/// Radical vector, defect weight and simple regular orbit families of a
/// Euclidean quiver.
#[derive(Debug, Clone)]
pub struct EuclideanStructure {
    quiver: Arc<Quiver>,
    class: DiagramType,
    h: DimensionVector,
    defect_weight: Weight,
    families: Vec<OrbitFamily>,
}

impl EuclideanStructure {
    pub fn new(q: impl Into<Arc<Quiver>>) -> Result<Self> {
        let quiver = q.into();
        let GraphClass::Euclidean(class) = classify_graph(&quiver) else {
            return Err(Error::NotEuclidean);
        };
        let h = radical_generator(&quiver)?;
        let families = simple_regular_orbits(&quiver, &h)?;
        let es = Self::from_parts(quiver, class, h, families)?;
        es.validate()?;
        Ok(es)
    }

    /// Assembles a structure without checking the orbit data.
    pub fn from_parts(
        quiver: Arc<Quiver>,
        class: DiagramType,
        h: DimensionVector,
        families: Vec<OrbitFamily>,
    ) -> Result<Self> {
        let defect_weight = quiver.weight_of_left_form(&h)?;
        Ok(EuclideanStructure {
            quiver,
            class,
            h,
            defect_weight,
            families,
        })
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn diagram(&self) -> DiagramType {
        self.class
    }

    pub fn h(&self) -> &DimensionVector {
        &self.h
    }

    pub fn defect_weight(&self) -> &Weight {
        &self.defect_weight
    }

    pub fn families(&self) -> &[OrbitFamily] {
        &self.families
    }

    pub fn defect(&self, d: &[i64]) -> Result<i64> {
        self.quiver.euler_form(&self.h, d)
    }

    pub fn roots_below_h(&self) -> Result<Vec<DimensionVector>> {
        defect_zero_roots_below(&self.quiver, &self.h)
    }

    /// Checks every orbit-family invariant. A failure indicates corrupted
    /// or mis-enumerated orbit data, not bad user input.
    pub fn validate(&self) -> Result<()> {
        let q = &*self.quiver;
        let fail = |msg: String| Err(Error::StructureCheckFailed(msg));
        if q.quadratic_form(&self.h)? != 0 || self.h.iter().any(|&x| x < 1) {
            return fail(format!("{:?} is not a positive radical vector", &*self.h));
        }
        let total: usize = self.families.iter().map(|f| f.size() - 1).sum();
        if total + 2 != q.vertex_count() {
            return fail(format!(
                "sum of (size - 1) over families is {total}, expected {}",
                q.vertex_count() - 2
            ));
        }
        for (fi, fam) in self.families.iter().enumerate() {
            let u = fam.size();
            if u < 2 {
                return fail(format!("family {fi} has size {u}"));
            }
            if fam.cyclic_sum(0, u) != *self.h {
                return fail(format!("family {fi} does not sum to h"));
            }
            for i in 0..u {
                let e = fam.get(i);
                if coxeter_transform(q, e)? != **fam.get(i + 1) {
                    return fail(format!("C(e_{i}) != e_{} in family {fi}", (i + 1) % u));
                }
                if self.defect(e)? != 0 || q.quadratic_form(e)? != 1 {
                    return fail(format!("e_{i} of family {fi} is not a defect-zero real root"));
                }
                for j in 0..u {
                    let expected = if i == j {
                        1
                    } else if (i + 1) % u == j {
                        -1
                    } else {
                        0
                    };
                    if q.euler_form(e, fam.get(j))? != expected {
                        return fail(format!(
                            "<e_{i}, e_{j}> != {expected} in family {fi}"
                        ));
                    }
                }
            }
        }
        for (a, fa) in self.families.iter().enumerate() {
            for fb in &self.families[a + 1..] {
                for x in fa.vectors() {
                    for y in fb.vectors() {
                        if q.euler_form(x, y)? != 0 {
                            return fail("families are not Euler-orthogonal".into());
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Coxeter orbits of the defect-zero roots below `h` that are not the sum of
/// two such roots. Families are ordered by their lexicographically smallest
/// member, and each cycle starts there.
pub fn simple_regular_orbits(q: &Quiver, h: &[i64]) -> Result<Vec<OrbitFamily>> {
    let roots = defect_zero_roots_below(q, h)?;
    let set: HashSet<&[i64]> = roots.iter().map(|r| &**r).collect();
    let minimal: Vec<&DimensionVector> = roots
        .iter()
        .filter(|r| {
            !roots.iter().any(|a| {
                let rest: Vec<i64> = r.iter().zip(a.iter()).map(|(x, y)| x - y).collect();
                rest.iter().all(|&x| x >= 0) && set.contains(rest.as_slice())
            })
        })
        .collect();

    let mut assigned: HashSet<DimensionVector> = HashSet::new();
    let mut families = Vec::new();
    for start in &minimal {
        if assigned.contains(*start) {
            continue;
        }
        let mut orbit = vec![(*start).clone()];
        loop {
            let next = coxeter_transform(q, orbit.last().unwrap())?;
            if next == ***start {
                break;
            }
            if orbit.len() > q.vertex_count() + 1 || !minimal.iter().any(|m| ***m == *next) {
                return Err(Error::StructureCheckFailed(format!(
                    "Coxeter orbit of {:?} leaves the simple regular roots",
                    &***start
                )));
            }
            orbit.push(DimensionVector::from_vec_unchecked(next));
        }
        if orbit.len() == 1 {
            return Err(Error::StructureCheckFailed(format!(
                "{:?} is Coxeter-fixed",
                &***start
            )));
        }
        assigned.extend(orbit.iter().cloned());
        // minimal is sorted, so `start` is already the smallest member.
        families.push(OrbitFamily::from_vectors(orbit));
    }
    Ok(families)
}
