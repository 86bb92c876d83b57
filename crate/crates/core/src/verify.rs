//! Seeded randomized verification of presentations by exact Schofield
//! determinants.
//!
//! Every random object is drawn from a ChaCha stream keyed by
//! `sha256(seed, tag, index)`, so results do not depend on evaluation order
//! or thread count. Ranks are exact; a rank is a certified lower bound for
//! the dimension it estimates and is accepted as the dimension once it is
//! unchanged after doubling the number of samples.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::euclidean::EuclideanStructure;
use crate::linalg::{det_is_zero_screened, rank_screened, ExactMatrix, ExactScalar};
use crate::presentation::weight_space_dim_formula;
use crate::quiver::{DimensionVector, Quiver};
use crate::schofield::{build_dvw, hom_dim, hom_ext_dims, schofield_value, Representation};
use crate::tubes::{
    admissible_arcs, arc_generator_data, canonical_decomposition, equal_label_non_admissible_arcs,
    generic_decomposition, min_level_partition, Arc as PolygonArc, CanonicalDecomposition,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub entry_bound: i64,
    pub trials: usize,
    pub retry_limit: usize,
    pub identity_bound: i64,
    /// Optional prime for modular screening of ranks and determinants.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    /// Largest `m` checked by the binomial law.
    pub m_max: u32,
    /// Number of sample points used by the relation span checks.
    pub eval_points: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            entry_bound: 7,
            trials: 40,
            retry_limit: 10,
            identity_bound: 1000,
            modulus: None,
            m_max: 2,
            eval_points: 12,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.entry_bound < 1
            || self.trials < 1
            || self.retry_limit < 1
            || self.identity_bound < 1
            || self.eval_points < 1
        {
            return Err(Error::InvalidInput(
                "sampler bounds and counts must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// ChaCha stream for `(seed, tag, index)`.
pub fn stream(seed: u64, tag: &str, index: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag.as_bytes());
    h.update(index.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}

fn sample_with(q: &Arc<Quiver>, dim: &DimensionVector, bound: i64, rng: &mut ChaCha8Rng) -> Representation {
    let maps: Vec<Vec<i64>> = q
        .arrows()
        .iter()
        .map(|a| {
            (0..dim[a.head] * dim[a.tail])
                .map(|_| rng.gen_range(-bound..=bound))
                .collect()
        })
        .collect();
    Representation::from_i64_maps(q.clone(), dim.clone(), &maps).expect("shapes follow dim")
}

/// Entries uniform in `[-entry_bound, entry_bound]`.
pub fn sample_representation(
    q: &Arc<Quiver>,
    dim: &DimensionVector,
    cfg: &SamplerConfig,
    stream_tag: &str,
) -> Representation {
    sample_with(q, dim, cfg.entry_bound, &mut stream(cfg.seed, stream_tag, 0))
}

fn sample_indexed(
    q: &Arc<Quiver>,
    dim: &DimensionVector,
    bound: i64,
    cfg: &SamplerConfig,
    tag: &str,
    index: u64,
) -> Representation {
    sample_with(q, dim, bound, &mut stream(cfg.seed, tag, index))
}

/// `End(V)` is one-dimensional.
pub fn certify_schur(v: &Representation) -> bool {
    hom_dim(v, v).map(|k| k == 1).unwrap_or(false)
}

fn certified_model(
    retry_limit: usize,
    mut sampler: impl FnMut(usize) -> Representation,
) -> Result<Representation> {
    for attempt in 0..retry_limit {
        let v = sampler(attempt);
        if certify_schur(&v) {
            return Ok(v);
        }
    }
    Err(Error::CertificationFailed(retry_limit))
}

/// A certified Schur representation of dimension `dim`.
pub fn model_schur(
    q: &Arc<Quiver>,
    dim: &DimensionVector,
    cfg: &SamplerConfig,
    tag: &str,
) -> Result<Representation> {
    certified_model(cfg.retry_limit, |attempt| {
        sample_indexed(q, dim, cfg.entry_bound, cfg, tag, attempt as u64)
    })
}

fn vec_tag(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Certified model of the indecomposable attached to an admissible arc.
pub fn model_arc_module(
    es: &EuclideanStructure,
    arc: &PolygonArc,
    cfg: &SamplerConfig,
) -> Result<Representation> {
    let m = arc_generator_data(es, arc)?;
    model_schur(es.quiver(), &m.dim, cfg, &format!("arc:{}", m.id()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub estimated_dim: usize,
    /// Rank over the first `trials x trials` block.
    pub rank_at_trials: usize,
    /// True when doubling the samples did not change the rank.
    pub stable: bool,
    pub samples_used: usize,
    pub shape: [usize; 2],
    pub evaluation_hash: String,
    pub note: String,
}

/// `[c^{V_i}(W_j)]` evaluated in parallel.
fn evaluate_grid(vs: &[Representation], ws: &[Representation]) -> Result<Vec<ExactScalar>> {
    let n = ws.len();
    (0..vs.len() * n)
        .into_par_iter()
        .map(|k| schofield_value(&vs[k / n], &ws[k % n]))
        .collect()
}

fn hash_values(values: &[ExactScalar]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_string().as_bytes());
        h.update(b";");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn sub_block(values: &[ExactScalar], cols: usize, r: usize, c: usize) -> ExactMatrix {
    let data = (0..r)
        .flat_map(|i| values[i * cols..i * cols + c].iter().cloned())
        .collect();
    ExactMatrix::new(r, c, data).expect("block shape")
}

/// Rank of `[c^{V_i}(W_j)]` with `V_i` of dimension `alpha` and `W_j` of
/// dimension `d`, over `trials` and then `2 trials` samples on each side.
pub fn estimate_weight_space_dim(
    es: &EuclideanStructure,
    d: &DimensionVector,
    alpha: &DimensionVector,
    cfg: &SamplerConfig,
) -> Result<RankReport> {
    estimate_with_trials(es, d, alpha, cfg, cfg.trials)
}

fn estimate_with_trials(
    es: &EuclideanStructure,
    d: &DimensionVector,
    alpha: &DimensionVector,
    cfg: &SamplerConfig,
    trials: usize,
) -> Result<RankReport> {
    let q = es.quiver();
    let e = q.euler_form(alpha, d)?;
    if e != 0 {
        return Err(Error::NotOrthogonal(e));
    }
    let n = 2 * trials;
    let vtag = format!("wsd:V:{}", vec_tag(alpha));
    let wtag = format!("wsd:W:{}", vec_tag(d));
    let vs: Vec<Representation> = (0..n)
        .map(|i| sample_indexed(q, alpha, cfg.entry_bound, cfg, &vtag, i as u64))
        .collect();
    let ws: Vec<Representation> = (0..n)
        .map(|j| sample_indexed(q, d, cfg.identity_bound, cfg, &wtag, j as u64))
        .collect();
    let values = evaluate_grid(&vs, &ws)?;
    let full = ExactMatrix::new(n, n, values.clone())?;
    let rank_at_trials = rank_screened(&sub_block(&values, n, trials, trials), cfg.modulus);
    let estimated_dim = rank_screened(&full, cfg.modulus);
    Ok(RankReport {
        estimated_dim,
        rank_at_trials,
        stable: rank_at_trials == estimated_dim,
        samples_used: n,
        shape: [n, n],
        evaluation_hash: hash_values(&values),
        note: "exact rank: certified lower bound, equal to the dimension for generic samples"
            .into(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            witness: None,
            millis: None,
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Check::new(name, false, format!("error: {err}"))
    }

    fn with_witness(mut self, w: String) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub config: SamplerConfig,
    pub d: Vec<i64>,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    fn new(cfg: &SamplerConfig, d: &[i64], checks: Vec<Check>) -> Self {
        VerificationReport {
            seed: cfg.seed,
            config: cfg.clone(),
            d: d.to_vec(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = format!(
            "seed {} d {:?}: {}\n",
            self.seed,
            self.d,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for c in &self.checks {
            s.push_str(&format!(
                "  [{}] {}: {}\n",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s
    }
}

fn regular_cd(es: &EuclideanStructure, d: &[i64]) -> Result<CanonicalDecomposition> {
    let cd = canonical_decomposition(es, d)?;
    if cd.p < 1 {
        return Err(Error::DenseOrbitCase);
    }
    Ok(cd)
}

fn as_dim(es: &EuclideanStructure, d: &[i64]) -> Result<DimensionVector> {
    DimensionVector::new(es.quiver(), d.to_vec())
}

/// Compares the rank oracle with `binom(p + m, m)` for `m = 1..=m_max`.
///
/// Each `m` uses `t = min(trials, 2 binom + 4)` samples per side: any
/// dimension above the expected value would still show in a `t x t` block.
pub fn verify_binomial_law(
    es: &EuclideanStructure,
    d: &[i64],
    m_max: u32,
    cfg: &SamplerConfig,
) -> Result<VerificationReport> {
    let cd = canonical_decomposition(es, d)?;
    let dv = as_dim(es, d)?;
    let mut checks = Vec::new();
    for m in 1..=m_max {
        let expected = weight_space_dim_formula(cd.p as u64, m as u64)?;
        let trials = cfg.trials.min(2 * expected as usize + 4);
        let alpha = es.h().scaled(m as i64);
        let name = format!("binomial_m{m}");
        match estimate_with_trials(es, &dv, &alpha, cfg, trials) {
            Ok(r) => checks.push(
                Check::new(
                    name,
                    r.stable && r.estimated_dim as u128 == expected,
                    format!(
                        "rank {} (at {trials} samples {}), expected binom({}+{m},{m}) = {expected}",
                        r.estimated_dim, r.rank_at_trials, cd.p
                    ),
                )
                .with_witness(r.evaluation_hash),
            ),
            Err(e) => checks.push(Check::failed(name, &e)),
        }
    }
    Ok(VerificationReport::new(cfg, d, checks))
}

/// Certified models of the distinct non-homogeneous generic summands.
fn summand_models(
    es: &EuclideanStructure,
    cd: &CanonicalDecomposition,
    cfg: &SamplerConfig,
) -> Result<Vec<(String, Representation)>> {
    let gd = generic_decomposition(es, cd);
    gd.non_homogeneous()
        .map(|s| {
            let tag = format!("summand:{}:{}:{}", s.family.unwrap_or(0), s.start, s.len);
            model_schur(es.quiver(), &s.dim, cfg, &tag).map(|m| (tag, m))
        })
        .collect()
}

/// Generator conditions for every arc generator, the Hom obstruction for
/// equal-label arcs dipping below their extremes, and Ext-orthogonality of
/// the generic summands.
pub fn verify_generator_conditions(
    es: &EuclideanStructure,
    d: &[i64],
    cfg: &SamplerConfig,
) -> Result<VerificationReport> {
    let cd = regular_cd(es, d)?;
    let q = es.quiver();
    let dv = as_dim(es, d)?;
    let summands = summand_models(es, &cd, cfg)?;
    let h_samples: Vec<Representation> = (0..3)
        .map(|i| sample_indexed(q, es.h(), cfg.identity_bound, cfg, "gen:h", i))
        .collect();
    let generic_w = sample_indexed(q, &dv, cfg.identity_bound, cfg, "gen:W", 0);
    let mut checks = Vec::new();

    let mut ext_ok = true;
    let mut ext_detail = format!("{} summand models", summands.len());
    for (i, (ti, si)) in summands.iter().enumerate() {
        for (j, (tj, sj)) in summands.iter().enumerate() {
            if i != j && hom_ext_dims(si, sj)?.1 != 0 {
                ext_ok = false;
                ext_detail = format!("Ext({ti}, {tj}) != 0");
            }
        }
    }
    checks.push(Check::new("generic_summands_ext_orthogonal", ext_ok, ext_detail));

    for poly in cd.polygons() {
        for arc in admissible_arcs(&poly) {
            let m = arc_generator_data(es, &arc)?;
            let name = format!("generator:{}", m.id());
            let model = match model_arc_module(es, &arc, cfg) {
                Ok(v) => v,
                Err(e) => {
                    checks.push(Check::failed(name, &e));
                    continue;
                }
            };
            let weight_ok = q.apply_weight(&m.weight, d)? == 0;
            let mut hom_ok = true;
            let mut detail = String::new();
            for (tag, s) in &summands {
                if hom_dim(&model, s)? != 0 {
                    hom_ok = false;
                    detail = format!("Hom to {tag} is nonzero; ");
                }
            }
            for s in &h_samples {
                if hom_dim(&model, s)? != 0 {
                    hom_ok = false;
                    detail.push_str("Hom to a dim-h sample is nonzero; ");
                }
            }
            let nonzero = !det_is_zero_screened(&build_dvw(&model, &generic_w)?, cfg.modulus)?;
            checks.push(Check::new(
                name,
                weight_ok && hom_ok && nonzero,
                format!(
                    "{}weight pairs to zero: {weight_ok}, Hom vanishing: {hom_ok}, c^E(W) != 0: {nonzero}",
                    detail
                ),
            ));
        }
        for arc in equal_label_non_admissible_arcs(&poly) {
            let extreme = poly.labels[arc.start];
            if !arc
                .interior(poly.size())
                .any(|k| poly.labels[k] < extreme)
            {
                continue;
            }
            let m = arc_generator_data(es, &arc)?;
            let name = format!("obstruction:{}", m.id());
            let model = match model_schur(q, &m.dim, cfg, &format!("obs:{}", m.id())) {
                Ok(v) => v,
                Err(e) => {
                    checks.push(Check::failed(name, &e));
                    continue;
                }
            };
            let mut witness = None;
            for (tag, s) in &summands {
                if hom_dim(&model, s)? != 0 {
                    witness = Some(tag.clone());
                    break;
                }
            }
            let vanishes = det_is_zero_screened(&build_dvw(&model, &generic_w)?, cfg.modulus)?;
            checks.push(Check::new(
                name,
                witness.is_some() && vanishes,
                format!(
                    "Hom witness: {}, c^E(W) = 0: {vanishes}",
                    witness.as_deref().unwrap_or("none")
                ),
            ));
        }
    }
    Ok(VerificationReport::new(cfg, d, checks))
}

fn rank_of_rows(rows: &[Vec<ExactScalar>], modulus: Option<u64>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let data = rows.iter().flatten().cloned().collect();
    rank_screened(&ExactMatrix::new(rows.len(), cols, data).expect("rows"), modulus)
}

/// Span checks on the `defect`-weight space: the family products and the
/// random `c^V` with `dim V = h` evaluated at common sample points.
pub fn verify_relations_span(
    es: &EuclideanStructure,
    d: &[i64],
    cfg: &SamplerConfig,
) -> Result<VerificationReport> {
    let cd = regular_cd(es, d)?;
    let q = es.quiver();
    let dv = as_dim(es, d)?;
    let p = cd.p as usize;
    let npts = cfg.eval_points.max(2 * (p + 4));
    let points: Vec<Representation> = (0..npts)
        .map(|j| sample_indexed(q, &dv, cfg.identity_bound, cfg, "span:W", j as u64))
        .collect();

    let mut products: Vec<Vec<ExactScalar>> = Vec::new();
    for poly in cd.polygons() {
        let Some(parts) = min_level_partition(&poly) else {
            continue;
        };
        let models = parts
            .iter()
            .map(|a| model_arc_module(es, a, cfg))
            .collect::<Result<Vec<_>>>()?;
        let values = evaluate_grid(&models, &points)?;
        let prod: Vec<ExactScalar> = (0..npts)
            .map(|j| {
                (0..models.len())
                    .map(|i| values[i * npts + j].clone())
                    .fold(num_traits::One::one(), |acc: ExactScalar, x| acc * x)
            })
            .collect();
        products.push(prod);
    }

    let nv = (p + 3).max(8);
    let vs: Vec<Representation> = (0..nv)
        .map(|i| sample_indexed(q, es.h(), cfg.entry_bound, cfg, "span:V", i as u64))
        .collect();
    let cv_flat = evaluate_grid(&vs, &points)?;
    let cv: Vec<Vec<ExactScalar>> = cv_flat.chunks(npts).map(<[_]>::to_vec).collect();

    let mut checks = Vec::new();
    let base = rank_of_rows(&cv, cfg.modulus);
    checks.push(
        Check::new(
            "span_rank",
            base == p + 1,
            format!("rank of {nv} random c^V on {npts} points is {base}, expected {}", p + 1),
        )
        .with_witness(hash_values(&cv_flat)),
    );
    for (f, prod) in products.iter().enumerate() {
        let zero = prod.iter().all(Zero::is_zero);
        let mut rows = cv.clone();
        rows.push(prod.clone());
        let r = rank_of_rows(&rows, cfg.modulus);
        checks.push(Check::new(
            format!("product_{f}_in_span"),
            r == base && !zero,
            format!("rank with product {f} adjoined is {r}; product nonzero: {}", !zero),
        ));
    }
    if !products.is_empty() {
        let mut rows = cv.clone();
        rows.extend(products.iter().cloned());
        let r = rank_of_rows(&rows, cfg.modulus);
        checks.push(Check::new(
            "products_with_span_rank",
            r == p + 1,
            format!("products together with the c^V have rank {r}"),
        ));
    }
    if products.len() == 3 {
        let r3 = rank_of_rows(&products, cfg.modulus);
        let expected = if p == 1 { 2 } else { 3.min(p + 1) };
        let pairs_ok = (0..3).all(|i| {
            let pair = vec![products[i].clone(), products[(i + 1) % 3].clone()];
            rank_of_rows(&pair, cfg.modulus) == 2
        });
        checks.push(
            Check::new(
                "three_products_dependency",
                r3 == expected && pairs_ok,
                format!("rank of the three products is {r3} (expected {expected}); every pair has rank 2: {pairs_ok}"),
            )
            .with_witness(hash_values(&products.concat())),
        );
    }
    Ok(VerificationReport::new(cfg, d, checks))
}

fn timed<T>(record: bool, f: impl FnOnce() -> T) -> (T, Option<u64>) {
    let t = Instant::now();
    let out = f();
    (out, record.then(|| t.elapsed().as_millis() as u64))
}

/// Runs every check that applies to `d` and collects the outcomes; errors
/// become failed checks.
pub fn verify_presentation(
    es: &EuclideanStructure,
    d: &[i64],
    cfg: &SamplerConfig,
) -> VerificationReport {
    verify_presentation_with(es, d, cfg, false)
}

/// As [`verify_presentation`], optionally recording wall-clock timings.
/// Timings make the report non-deterministic.
pub fn verify_presentation_with(
    es: &EuclideanStructure,
    d: &[i64],
    cfg: &SamplerConfig,
    timings: bool,
) -> VerificationReport {
    let mut checks = Vec::new();
    if let Err(e) = cfg.validate() {
        checks.push(Check::failed("config", &e));
        return VerificationReport::new(cfg, d, checks);
    }
    match es.validate() {
        Ok(()) => checks.push(Check::new(
            "structure",
            true,
            format!("{} orbit families", es.families().len()),
        )),
        Err(e) => {
            checks.push(Check::failed("structure", &e));
            return VerificationReport::new(cfg, d, checks);
        }
    }
    let cd = match canonical_decomposition(es, d) {
        Ok(cd) => cd,
        Err(e) => {
            checks.push(Check::new(
                "regularity",
                true,
                format!("{e}; the algebra is a polynomial ring with a dense orbit, nothing to verify"),
            ));
            return VerificationReport::new(cfg, d, checks);
        }
    };
    let gd = generic_decomposition(es, &cd);
    let round_trip = cd.reconstruct(es) == d && gd.total(d.len()) == d;
    checks.push(Check::new(
        "decomposition_round_trip",
        round_trip,
        format!("p = {}, {} generic summands", cd.p, gd.summands.len()),
    ));
    if cd.p == 0 {
        checks.push(Check::new(
            "regularity",
            true,
            "p = 0; the algebra is a polynomial ring with a dense orbit",
        ));
        return VerificationReport::new(cfg, d, checks);
    }
    let stages: [(&str, &dyn Fn() -> Result<VerificationReport>); 3] = [
        ("generators", &|| verify_generator_conditions(es, d, cfg)),
        ("binomial", &|| verify_binomial_law(es, d, cfg.m_max, cfg)),
        ("relations", &|| verify_relations_span(es, d, cfg)),
    ];
    for (name, stage) in stages {
        let (res, millis) = timed(timings, stage);
        match res {
            Ok(r) => {
                let mut sub = r.checks;
                if let Some(last) = sub.last_mut() {
                    last.millis = millis;
                }
                checks.extend(sub);
            }
            Err(e) => checks.push(Check::failed(name, &e)),
        }
    }
    VerificationReport::new(cfg, d, checks)
}
