//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails or exceeds its time limit.

use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qsi_core::catalog;
use qsi_core::euclidean::EuclideanStructure;
use qsi_core::linalg::{int, ExactMatrix, ExactScalar};
use qsi_core::presentation::{classify_algebra, generators, Classification};
use qsi_core::quiver::{DimensionVector, Quiver, Weight};
use qsi_core::schofield::{act, hom_ext_dims, schofield_value, GroupElement, Representation};
use qsi_core::tubes::{admissible_arcs, canonical_decomposition, generic_decomposition, LabeledPolygon};
use qsi_core::verify::{estimate_weight_space_dim, verify_relations_span, SamplerConfig};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn rat(n: i64, d: i64) -> ExactScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Euler form straight from the arrow list.
fn euler(q: &Quiver, a: &[i64], b: &[i64]) -> i64 {
    let vertices: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let arrows: i64 = q.arrows().iter().map(|ar| a[ar.tail] * b[ar.head]).sum();
    vertices - arrows
}

fn random_rep(q: &Arc<Quiver>, dim: &[i64], bound: i64, rng: &mut ChaCha8Rng) -> Representation {
    let maps: Vec<Vec<i64>> = q
        .arrows()
        .iter()
        .map(|a| (0..dim[a.head] * dim[a.tail]).map(|_| rng.gen_range(-bound..=bound)).collect())
        .collect();
    Representation::from_i64_maps(q.clone(), DimensionVector::new(q, dim.to_vec()).unwrap(), &maps).unwrap()
}

fn scalar_rep(q: &Arc<Quiver>, a: ExactScalar, b: ExactScalar) -> Representation {
    let maps = vec![
        ExactMatrix::new(1, 1, vec![a]).unwrap(),
        ExactMatrix::new(1, 1, vec![b]).unwrap(),
    ];
    Representation::new(q.clone(), DimensionVector::new(q, vec![1, 1]).unwrap(), maps).unwrap()
}

fn cfg(seed: u64) -> SamplerConfig {
    SamplerConfig {
        seed,
        ..SamplerConfig::default()
    }
}

/// `p h + sum_f sum_i c^f_i e^f_i` with one coefficient forced to zero per family.
fn random_regular(es: &EuclideanStructure, p: i64, max_c: i64, rng: &mut ChaCha8Rng) -> (Vec<i64>, Vec<Vec<i64>>) {
    let mut d = es.h().scaled(p).into_vec();
    let mut coeffs = Vec::new();
    for fam in es.families() {
        let u = fam.size();
        let zero = rng.gen_range(0..u);
        let c: Vec<i64> = (0..u).map(|i| if i == zero { 0 } else { rng.gen_range(0..=max_c) }).collect();
        for (i, &ci) in c.iter().enumerate() {
            for (x, y) in d.iter_mut().zip(fam.get(i).iter()) {
                *x += ci * y;
            }
        }
        coeffs.push(c);
    }
    (d, coeffs)
}

fn kronecker_closed_form() -> Outcome {
    let q = Arc::new(catalog::kronecker());
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut sign: Option<ExactScalar> = None;
    for _ in 0..20 {
        let mut r = || rat(rng.gen_range(-99..=99), rng.gen_range(1..=20));
        let (phi, psi, gamma, delta) = (r(), r(), r(), r());
        let expected = &phi * &delta - &psi * &gamma;
        let got = schofield_value(&scalar_rep(&q, phi, psi), &scalar_rep(&q, gamma, delta)).map_err(|e| e.to_string())?;
        if expected.is_zero() {
            ensure(got.is_zero(), "nonzero value where the closed form vanishes")?;
            continue;
        }
        let s = &got / &expected;
        ensure(s.abs() == int(1), format!("ratio {s} is not a sign"))?;
        match &sign {
            None => sign = Some(s),
            Some(prev) => ensure(*prev == s, "sign changes between samples")?,
        }
    }
    let sign = sign.ok_or("all samples degenerate")?;
    ensure(sign == int(1), "golden sign must be +1")?;
    Ok("20 rational tuples agree with phi*delta - psi*gamma, sign +1".into())
}

fn d4_structure() -> Outcome {
    let q = catalog::d4_star();
    let es = EuclideanStructure::new(q.clone()).map_err(|e| e.to_string())?;
    // Oracle: smallest nonzero vector in [0,3]^5 with q = 0.
    let mut radical = None;
    'scan: for total in 1..=15 {
        for code in 0..4i64.pow(5) {
            let v: Vec<i64> = (0..5).map(|i| (code / 4i64.pow(i)) % 4).collect();
            if v.iter().sum::<i64>() == total && euler(&q, &v, &v) == 0 {
                radical = Some(v);
                break 'scan;
            }
        }
    }
    let radical = radical.ok_or("no radical vector in box")?;
    ensure(radical == vec![1, 1, 1, 1, 2], format!("oracle radical {radical:?}"))?;
    ensure(es.h()[..] == radical[..], format!("h = {:?}", &es.h()[..]))?;
    // Oracle: defect-zero real roots strictly inside the box below h.
    let h = &radical;
    let mut roots = BTreeSet::new();
    for code in 0..(2 * 2 * 2 * 2 * 3) {
        let mut c = code;
        let v: Vec<i64> = h
            .iter()
            .map(|&hx| {
                let x = c % (hx + 1);
                c /= hx + 1;
                x
            })
            .collect();
        if v.iter().any(|&x| x != 0) && v != *h && euler(&q, h, &v) == 0 && euler(&q, &v, &v) == 1 {
            roots.insert(v);
        }
    }
    let fams = es.families();
    ensure(fams.len() == 3, format!("{} families", fams.len()))?;
    let mut members = BTreeSet::new();
    for f in fams {
        ensure(f.size() == 2, "family size is not 2")?;
        ensure(f.cyclic_sum(0, 2) == *h, "family does not sum to h")?;
        for v in f.vectors() {
            members.insert(v.to_vec());
        }
    }
    let sum: usize = fams.iter().map(|f| f.size() - 1).sum();
    ensure(sum == 3 && sum == q.vertex_count() - 2, "sum of (size - 1) != |Q0| - 2")?;
    ensure(members == roots, format!("family members {members:?} vs box roots {roots:?}"))?;
    Ok("h = (1,1,1,1,2); 3 families of size 2 summing to h; members = the 6 roots below h".into())
}

fn d4_weight_space() -> Outcome {
    let es = EuclideanStructure::new(catalog::d4_star()).map_err(|e| e.to_string())?;
    let q = es.quiver();
    let h = es.h().clone();
    let c = cfg(3);
    ensure(c.trials == 40, "trials must be 40")?;
    let r = estimate_weight_space_dim(&es, &DimensionVector::new(q, h.to_vec()).unwrap(), &h, &c)
        .map_err(|e| e.to_string())?;
    ensure(r.stable, "rank changed after doubling")?;
    ensure(r.estimated_dim == 2, format!("rank {}", r.estimated_dim))?;
    Ok(format!("rank 2 at 40 and at 80 samples per side ({}x{} grid)", r.shape[0], r.shape[1]))
}

fn binomial_law() -> Outcome {
    let mut lines = Vec::new();
    let cases: [(Quiver, i64, u32, usize); 3] = [
        (catalog::d4_star(), 2, 1, 3),
        (catalog::d4_star(), 2, 2, 6),
        (catalog::kronecker(), 3, 1, 4),
    ];
    for (q, p, m, expected) in cases {
        let es = EuclideanStructure::new(q).map_err(|e| e.to_string())?;
        let d = es.h().scaled(p);
        let alpha = es.h().scaled(m as i64);
        let c = SamplerConfig {
            trials: 2 * expected + 4,
            ..cfg(4)
        };
        let r = estimate_weight_space_dim(&es, &d, &alpha, &c).map_err(|e| e.to_string())?;
        ensure(
            r.stable && r.estimated_dim == expected,
            format!("{} d={p}h m={m}: rank {} (stable {})", es.diagram(), r.estimated_dim, r.stable),
        )?;
        lines.push(format!("{} {p}h m={m}: {expected}", es.diagram()));
    }
    Ok(lines.join(", "))
}

fn relations_span() -> Outcome {
    let es = EuclideanStructure::new(catalog::d4_star()).map_err(|e| e.to_string())?;
    let c = cfg(5);
    ensure(c.eval_points >= 12, "fewer than 12 evaluation points")?;
    let r = verify_relations_span(&es, &[1, 1, 1, 1, 2], &c).map_err(|e| e.to_string())?;
    let dep = r.check("three_products_dependency").ok_or("dependency check missing")?;
    ensure(r.passed, r.render_text())?;
    ensure(dep.detail.contains("rank of the three products is 2"), dep.detail.clone())?;
    let r2 = verify_relations_span(&es, &[2, 2, 2, 2, 4], &c).map_err(|e| e.to_string())?;
    ensure(r2.passed, r2.render_text())?;
    let span = r2.check("products_with_span_rank").ok_or("span check missing")?;
    ensure(span.detail.ends_with("rank 3"), span.detail.clone())?;
    Ok("d=h: products rank 2, pairs rank 2; d=2h: products with 8 c^V rank 3".into())
}

fn determinant_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let d4 = Arc::new(catalog::d4_star());
    let h = [1, 1, 1, 1, 2];
    // Vanishing on constructed orthogonal pairs: isomorphic copies force Hom != 0.
    let (mut zeros, mut nonzeros) = (0, 0);
    for i in 0..50 {
        let v = random_rep(&d4, &h, 5, &mut rng);
        let w = if i % 2 == 0 {
            let diag: Vec<Vec<ExactScalar>> = h
                .iter()
                .map(|&k| (0..k).map(|_| int(rng.gen_range(1..=9))).collect())
                .collect();
            act(&GroupElement::diagonal(&diag).unwrap(), &v).unwrap()
        } else {
            random_rep(&d4, &h, 1000, &mut rng)
        };
        let c = schofield_value(&v, &w).map_err(|e| e.to_string())?;
        let (hom, ext) = hom_ext_dims(&v, &w).map_err(|e| e.to_string())?;
        ensure(c.is_zero() == (hom != 0), format!("pair {i}: c = {c}, hom = {hom}"))?;
        ensure((hom != 0) == (ext != 0), format!("pair {i}: hom {hom} ext {ext}"))?;
        if c.is_zero() {
            zeros += 1;
        } else {
            nonzeros += 1;
        }
    }
    ensure(zeros >= 25 && nonzeros >= 1, format!("{zeros} vanishing, {nonzeros} nonvanishing"))?;
    // Direct sums, compared up to the basis-permutation sign.
    let e0 = [1, 1, 0, 0, 1];
    for i in 0..50 {
        let (lhs, rhs) = if i % 2 == 0 {
            let v = random_rep(&d4, &h, 5, &mut rng);
            let w1 = random_rep(&d4, &h, 5, &mut rng);
            let w2 = random_rep(&d4, &e0, 5, &mut rng);
            (
                schofield_value(&v, &w1.direct_sum(&w2).unwrap()),
                schofield_value(&v, &w1).and_then(|a| Ok(a * schofield_value(&v, &w2)?)),
            )
        } else {
            let v1 = random_rep(&d4, &h, 5, &mut rng);
            let v2 = random_rep(&d4, &e0, 5, &mut rng);
            let w = random_rep(&d4, &[2, 1, 2, 1, 3], 5, &mut rng);
            (
                schofield_value(&v1.direct_sum(&v2).unwrap(), &w),
                schofield_value(&v1, &w).and_then(|a| Ok(a * schofield_value(&v2, &w)?)),
            )
        };
        let (lhs, rhs) = (lhs.map_err(|e| e.to_string())?, rhs.map_err(|e| e.to_string())?);
        ensure(lhs.abs() == rhs.abs(), format!("direct sum {i}: {lhs} vs {rhs}"))?;
    }
    // hom - ext = Euler form.
    let quivers = [
        Arc::new(catalog::kronecker()),
        Arc::new(catalog::d4_star()),
        Arc::new(catalog::a2_acyclic()),
    ];
    for i in 0..100 {
        let q = &quivers[i % 3];
        let n = q.vertex_count();
        let a: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let b: Vec<i64> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let (hom, ext) = hom_ext_dims(&random_rep(q, &a, 5, &mut rng), &random_rep(q, &b, 5, &mut rng))
            .map_err(|e| e.to_string())?;
        ensure(hom as i64 - ext as i64 == euler(q, &a, &b), format!("pair {i}: {a:?} {b:?}"))?;
    }
    Ok(format!("{zeros}/{nonzeros} vanishing/nonvanishing pairs, 50 direct sums, 100 hom-ext pairs"))
}

fn weight_correctness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut count = 0;
    for q in [catalog::d4_star(), catalog::e6(), catalog::a_tilde(3, 2), catalog::kronecker()] {
        let es = EuclideanStructure::new(q.clone()).map_err(|e| e.to_string())?;
        for p in 1..=2 {
            let (d, _) = random_regular(&es, p, 2, &mut rng);
            for g in generators(&es, &d).map_err(|e| e.to_string())? {
                let pairing: i64 = g.weight.values().iter().zip(&d).map(|(s, x)| s * x).sum();
                ensure(pairing == 0, format!("{} pairs to {pairing} against {d:?}", g.id))?;
                count += 1;
            }
        }
    }
    // c^V(g W) chi_sigma(g) = c^V(W), sigma = <dim V, ->.
    let q = Arc::new(catalog::d4_star());
    let h = [1, 1, 1, 1, 2];
    let sigma: Weight = q.weight_of_left_form(&h).unwrap();
    for i in 0..20 {
        let v = random_rep(&q, &h, 5, &mut rng);
        let w = random_rep(&q, &h, 5, &mut rng);
        let diag: Vec<Vec<ExactScalar>> = h
            .iter()
            .map(|&k| {
                (0..k)
                    .map(|_| {
                        let n = rng.gen_range(1..=30) * if rng.gen_bool(0.5) { 1 } else { -1 };
                        rat(n, rng.gen_range(1..=7))
                    })
                    .collect()
            })
            .collect();
        let g = GroupElement::diagonal(&diag).unwrap();
        let moved = schofield_value(&v, &act(&g, &w).unwrap()).map_err(|e| e.to_string())?;
        let chi = g.character_value(&sigma).map_err(|e| e.to_string())?;
        let base = schofield_value(&v, &w).map_err(|e| e.to_string())?;
        ensure(moved * chi == base, format!("semi-invariance fails for g {i}"))?;
    }
    Ok(format!("{count} generator weights vanish on d; 20 diagonal g satisfy semi-invariance"))
}

fn brute_admissible(labels: &[i64]) -> BTreeSet<(usize, usize)> {
    let u = labels.len();
    let mut out = BTreeSet::new();
    for s in 0..u {
        for t in 0..u {
            if s == t || labels[s] != labels[t] {
                continue;
            }
            let len = (t + u - s) % u;
            let mut ok = true;
            for k in 1..len {
                if labels[(s + k) % u] <= labels[s] {
                    ok = false;
                }
            }
            if ok {
                out.insert((s, t));
            }
        }
    }
    out
}

fn combinatorics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    for i in 0..500 {
        let u = rng.gen_range(2..=8);
        let labels: Vec<i64> = (0..u).map(|_| rng.gen_range(0..=4)).collect();
        let poly = LabeledPolygon { family: 0, labels: labels.clone() };
        let ours: BTreeSet<(usize, usize)> = admissible_arcs(&poly).iter().map(|a| (a.start, a.end)).collect();
        ensure(ours == brute_admissible(&labels), format!("polygon {i}: {labels:?}"))?;
    }
    // Hand-run: labels (2,1,0,1) on a 4-gon peel into e_0 and e_3 + e_0 + e_1.
    let es = EuclideanStructure::new(catalog::a_tilde(4, 1)).map_err(|e| e.to_string())?;
    let fam = es.families().first().ok_or("no family")?.clone();
    ensure(fam.size() == 4, "expected one 4-gon")?;
    let mut d = vec![0; es.quiver().vertex_count()];
    for (i, c) in [2, 1, 0, 1].iter().enumerate() {
        for (x, y) in d.iter_mut().zip(fam.get(i).iter()) {
            *x += c * y;
        }
    }
    let cd = canonical_decomposition(&es, &d).map_err(|e| e.to_string())?;
    ensure(cd.p == 0 && cd.coefficients == vec![vec![2, 1, 0, 1]], format!("{cd:?}"))?;
    let got: BTreeSet<Vec<i64>> = generic_decomposition(&es, &cd)
        .summands
        .iter()
        .map(|s| s.dim.to_vec())
        .collect();
    let e = |i: usize| fam.get(i).to_vec();
    let long: Vec<i64> = (0..d.len()).map(|x| e(3)[x] + e(0)[x] + e(1)[x]).collect();
    ensure(got == BTreeSet::from([e(0), long]), format!("generic summands {got:?}"))?;
    // Canonical decomposition round-trips on random regular vectors.
    let structures: Vec<EuclideanStructure> = [catalog::d4_star(), catalog::e6(), catalog::a_tilde(4, 2), catalog::d5()]
        .into_iter()
        .map(|q| EuclideanStructure::new(q).unwrap())
        .collect();
    for i in 0..200 {
        let es = &structures[i % structures.len()];
        let p = rng.gen_range(0..=3);
        let (d, coeffs) = random_regular(es, p, 4, &mut rng);
        let cd = canonical_decomposition(es, &d).map_err(|e| e.to_string())?;
        ensure(cd.p == p && cd.coefficients == coeffs, format!("vector {i}: {d:?} gave {cd:?}"))?;
        ensure(cd.reconstruct(es) == d, format!("vector {i} does not reconstruct"))?;
    }
    Ok("500 polygons match brute force; (2,1,0,1) peels to e0 and e3+e0+e1; 200 round trips".into())
}

fn classification_dichotomy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut seen = BTreeSet::new();
    for q in [catalog::kronecker(), catalog::a2_acyclic(), catalog::d4_star(), catalog::e6()] {
        let es = EuclideanStructure::new(q).map_err(|e| e.to_string())?;
        for p in 1..=2 {
            for _ in 0..10 {
                let (d, _) = random_regular(&es, p, 2, &mut rng);
                let c = classify_algebra(&es, &d);
                ensure(
                    matches!(c, Classification::PolynomialRing | Classification::Hypersurface),
                    format!("{} d={d:?}: {c:?}", es.diagram()),
                )?;
                seen.insert(format!("{c:?}"));
            }
        }
    }
    let d4 = EuclideanStructure::new(catalog::d4_star()).unwrap();
    ensure(
        classify_algebra(&d4, &[1, 1, 1, 1, 2]) == Classification::Hypersurface,
        "D~4 at h is not a hypersurface",
    )?;
    Ok(format!("80 regular vectors classified as {:?}; D~4 at h is Hypersurface", seen))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("Kronecker closed form", 1, kronecker_closed_form),
        ("D~4 structure", 1, d4_structure),
        ("dim SI(D~4, h) at the defect weight is 2", 10, d4_weight_space),
        ("binomial law", 60, binomial_law),
        ("relations span", 30, relations_span),
        ("Schofield determinant suite", 30, determinant_suite),
        ("weight correctness", 10, weight_correctness),
        ("combinatorics oracles", 10, combinatorics),
        ("classification dichotomy", 10, classification_dichotomy),
    ];
    let mut failures = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(*limit);
        let (status, detail) = match (&result, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("time limit exceeded; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failures += 1;
        }
        println!(
            "{status} [{}] {name} ({:.2}s, limit {limit}s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
