//! One PASS/FAIL line per acceptance criterion.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::*;
use num_bigint::BigInt;
use toric_betti::closed_forms::veronese_predictions;
use toric_betti::engine::*;
use toric_betti::koszul::{choose_removal, regular_pair, regular_triple, ComplexKind, RemovalCertificate, RemovalPlan};
use toric_betti::linalg::PrimeModulus;
use toric_betti::oracle::oracle_betti;
use toric_betti::polygon::LatticePolygon;
use toric_betti::Error;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn check_reference(r: &Reference, o: &EngineOptions) -> Result<BettiTable, String> {
    let t = betti_table(&r.poly, o).map_err(|e| format!("{}: {e}", r.name))?;
    ensure((&t.b, &t.c) == (&r.b, &r.c), || {
        format!("{}: got b={:?} c={:?}", r.name, t.b, t.c)
    })?;
    Ok(t)
}

fn published(names: &[&str]) -> Vec<Reference> {
    published_tables().into_iter().filter(|r| names.contains(&r.name)).collect()
}

fn small_tables(o: &EngineOptions) -> Outcome {
    let refs = published(&["Sigma", "2*Sigma", "3*Sigma", "Upsilon", "Upsilon_2", "2*Upsilon", "Upsilon_3"]);
    ensure(refs.len() == 7, || "missing reference tables".into())?;
    let one = EngineOptions { workers: 1, ..o.clone() };
    let start = Instant::now();
    for r in &refs {
        check_reference(r, &one)?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.1} s"))?;
    Ok(format!("7 tables exact, {secs:.2} s on one worker"))
}

fn medium_tables(o: &EngineOptions) -> Outcome {
    let start = Instant::now();
    let refs = published(&["4*Sigma", "Upsilon_4"]);
    ensure(refs.len() == 2, || "missing reference tables".into())?;
    for r in &refs {
        check_reference(r, o)?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 600.0, || format!("took {secs:.1} s"))?;
    Ok(format!("4Σ and Υ₄ exact, {secs:.2} s"))
}

fn large_table(o: &EngineOptions) -> Outcome {
    let start = Instant::now();
    let r = published(&["5*Sigma"]).pop().ok_or("missing 5Σ reference")?;
    let t = check_reference(&r, o)?;
    ensure(t.b(15) == 375, || format!("b_15 = {}", t.b(15)))?;
    Ok(format!("5Σ exact, {:.2} s", start.elapsed().as_secs_f64()))
}

fn oracle_equivalence(o: &EngineOptions) -> Outcome {
    let polys = corpus(7, 100);
    ensure(polys.len() >= 100, || format!("corpus has {} polygons", polys.len()))?;
    let start = Instant::now();
    for p in [2, 3, 40009] {
        let prime = PrimeModulus::new(p).unwrap();
        for poly in &polys {
            let reference = oracle_betti(poly, prime).map_err(|e| e.to_string())?;
            let t = betti_table(poly, &EngineOptions { prime, ..o.clone() }).map_err(|e| e.to_string())?;
            ensure((&t.b, &t.c) == (&reference.b, &reference.c), || {
                format!("p = {p}, {:?}: engine {:?}/{:?} oracle {:?}/{:?}", poly.vertices(), t.b, t.c, reference.b, reference.c)
            })?;
        }
    }
    Ok(format!(
        "{} polygons x 3 primes, {:.2} s",
        polys.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn invariant_suite(o: &EngineOptions) -> Outcome {
    let mut tables = 0;
    let mut checks = 0;
    for poly in enumerate_classes(12) {
        let t = betti_table(&poly, o).map_err(|e| e.to_string())?;
        t.check_consistency(&poly).map_err(|e| e.to_string())?;
        checks += check_invariants(&poly, &t);
        tables += 1;
    }
    for r in published_tables() {
        let t = betti_table(&r.poly, o).map_err(|e| e.to_string())?;
        checks += check_invariants(&r.poly, &t);
        tables += 1;
    }
    Ok(format!("{checks} identities on {tables} tables"))
}

fn quotient_invariance(o: &EngineOptions) -> Outcome {
    let mut plans: BTreeMap<String, usize> = BTreeMap::new();
    let classes = enumerate_classes(9);
    for poly in &classes {
        let on = betti_table(poly, &EngineOptions { removal: RemovalMode::On, ..o.clone() }).map_err(|e| e.to_string())?;
        let off = betti_table(poly, &EngineOptions { removal: RemovalMode::Off, ..o.clone() }).map_err(|e| e.to_string())?;
        ensure((&on.b, &on.c) == (&off.b, &off.c), || format!("{:?}", poly.vertices()))?;
        for l in 1..=on.len() {
            for kind in [ComplexKind::PrimalB(l), ComplexKind::DualC(l)] {
                let a = compute_with_plan(poly, kind, o.prime, &choose_removal(poly), o).map_err(|e| e.to_string())?;
                let b = compute_with_plan(poly, kind, o.prime, &RemovalPlan::none(), o).map_err(|e| e.to_string())?;
                ensure(a.value == b.value, || format!("{kind} on {:?}", poly.vertices()))?;
            }
        }
        *plans.entry(format!("{:?}", choose_removal(poly).certificate)).or_default() += 1;
    }
    for cert in [
        RemovalCertificate::TriangleVertices,
        RemovalCertificate::OppositeVertices,
        RemovalCertificate::SinglePoint,
    ] {
        ensure(plans.contains_key(&format!("{cert:?}")), || format!("no {cert:?} plan"))?;
    }
    Ok(format!("{} classes, plans {plans:?}", classes.len()))
}

fn regularity_criteria() -> Outcome {
    let maps = scramblers();
    let (mut pairs, mut triples, mut late) = (0, 0, 0);
    for (i, base) in enumerate_classes(8).iter().enumerate() {
        for poly in [base.clone(), maps[1 + i % (maps.len() - 1)].image(base)] {
            let plain = module_parts(&poly, false);
            let twisted = module_parts(&poly, true);
            let pts = poly.points().as_slice();
            for a in 0..pts.len() {
                for b in a + 1..pts.len() {
                    let (p, q) = (pts[a], pts[b]);
                    let geometric = regular_pair(&poly, p, q).map_err(|e| e.to_string())?;
                    let twisted_ok = pair_containment(&twisted, p, q, MAX_Q)
                        && regular_by_enumeration(&twisted, &[p, q], MAX_Q);
                    let plain_ok = pair_containment(&plain, p, q, MAX_Q);
                    ensure(twisted_ok == geometric && (plain_ok || !geometric), || {
                        format!("pair {p} {q} in {:?}", poly.vertices())
                    })?;
                    ensure(pair_containment(&plain, p, q, PLAIN_Q) == geometric, || {
                        format!("pair {p} {q} in {:?} at higher degree", poly.vertices())
                    })?;
                    late += (plain_ok && !geometric) as usize;
                    pairs += 1;
                    for &r in &pts[b + 1..] {
                        let geometric = regular_triple(&poly, p, q, r).map_err(|e| e.to_string())?;
                        ensure(regular_by_enumeration(&twisted, &[p, q, r], MAX_Q) == geometric, || {
                            format!("triple {p} {q} {r} in {:?}", poly.vertices())
                        })?;
                        triples += 1;
                    }
                }
            }
        }
    }
    Ok(format!(
        "{pairs} pairs, {triples} triples; {late} pairs need degree 5 in the untwisted criterion"
    ))
}

fn kp1_campaign(o: &EngineOptions) -> Outcome {
    let start = Instant::now();
    let classes = enumerate_classes(14);
    let (mut holds, mut skipped, mut zeros) = (0, 0, 0);
    for poly in &classes {
        match verify_kp1(poly, o) {
            Ok(r) => {
                ensure(r.verdict == Kp1Verdict::Holds, || {
                    format!("{:?} on {:?}", r.verdict, poly.vertices())
                })?;
                for e in r.entries.iter().filter(|e| e.value == 0) {
                    ensure(e.rigorous, || format!("unflagged zero on {:?}", poly.vertices()))?;
                    zeros += 1;
                }
                holds += 1;
            }
            Err(Error::Pathological(_)) => skipped += 1,
            Err(e) => return Err(e.to_string()),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 7200.0, || format!("took {secs:.0} s"))?;
    Ok(format!(
        "holds on {holds} of {} classes (Σ, Υ excluded: {skipped}), {zeros} rigorous zeros, {secs:.1} s",
        classes.len()
    ))
}

fn bigraded_triangle(o: &EngineOptions) -> Outcome {
    let o = EngineOptions { bigraded: true, ..o.clone() };
    let res = compute_entry(&LatticePolygon::sigma(4), ComplexKind::DualC(3), &o).map_err(|e| e.to_string())?;
    let expected = four_sigma_c3_expected();
    let nonzero: BTreeMap<_, _> = expected.iter().filter(|(_, &v)| v != 0).map(|(k, v)| (*k, *v)).collect();
    ensure(res.bigraded == nonzero, || format!("got {:?}", res.bigraded))?;
    let rows: std::collections::BTreeSet<i64> = expected.keys().map(|p| p.y).collect();
    ensure(rows.len() == 10 && res.value == 55, || "shape".into())?;
    Ok("10 rows summing to 55".into())
}

fn veronese(o: &EngineOptions) -> Outcome {
    for d in 2..=5u32 {
        let poly = LatticePolygon::sigma(d as i64);
        let t = betti_table(&poly, o).map_err(|e| e.to_string())?;
        let (b, c) = veronese_predictions(d).map_err(|e| e.to_string())?;
        let bi = (d * (d + 1) / 2) as usize;
        ensure(BigInt::from(t.b(bi)) == b, || format!("{d}Σ: b_{bi} = {}", t.b(bi)))?;
        if let Some(c) = c {
            let g = ((d - 1) * (d - 2) / 2) as usize;
            ensure(BigInt::from(t.c(g)) == c, || format!("{d}Σ: c_{g} = {}", t.c(g)))?;
        }
    }
    Ok("d = 2, 3, 4, 5".into())
}

fn main() {
    let o = EngineOptions::default();
    let criteria: Vec<Criterion> = vec![
        ("small published tables", Box::new(|| small_tables(&o))),
        ("medium published tables", Box::new(|| medium_tables(&o))),
        ("large published table", Box::new(|| large_table(&o))),
        ("oracle equivalence", Box::new(|| oracle_equivalence(&o))),
        ("invariant suite", Box::new(|| invariant_suite(&o))),
        ("quotient invariance", Box::new(|| quotient_invariance(&o))),
        ("regularity criteria", Box::new(regularity_criteria)),
        ("linear strand vanishing campaign", Box::new(|| kp1_campaign(&o))),
        ("bigraded triangle", Box::new(|| bigraded_triangle(&o))),
        ("Veronese predictions", Box::new(|| veronese(&o))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = match catch_unwind(AssertUnwindSafe(f)) {
            Ok(r) => r,
            Err(p) => Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into())),
        };
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
