//! End-to-end acceptance checks. Runs without the libtest harness so every
//! criterion prints exactly one PASS/FAIL line.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use orbiconf::covering::{
    common_cover_search, common_cover_search_candidates, covering_translations, lift_automorphism,
    verify_covering, CommonCover,
};
use orbiconf::goodbad::{classify_n2, GoodBadStatus, N2Form};
use orbiconf::io::{parse_covering, Workspace};
use orbiconf::library;
use orbiconf::orbi::{orbi_dual, orbi_isomorphic, quotient, verify_quotient_claims, Orbiconfiguration};
use orbiconf::perm::{
    automorphism_group, cycle_structure_check, is_semiregular, orbit_divisibility_filter, orbits, subgroups,
    Domain, Permutation, PermutationGroup,
};
use orbiconf::primality::{admissible_orders, is_prime_general, is_prime_regular, PrimalityBudget, PrimeStatus};
use orbiconf::rational::{frac, int};
use orbiconf::scan;
use orbiconf::{Configuration, OrbiIncidenceStructure};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> String {
    std::fs::read_to_string(format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn fano_group() -> Check {
    let t0 = Instant::now();
    let g = automorphism_group(&library::fano()).map_err(|e| e.to_string())?;
    let dt = t0.elapsed();
    ensure(g.order() == 168, || format!("order {}", g.order()))?;
    ensure(dt < Duration::from_secs(1), || format!("took {dt:?}"))?;
    Ok(format!("order 168 in {dt:?}"))
}

fn mod14_group() -> Check {
    let g = automorphism_group(&library::mod14()).map_err(|e| e.to_string())?;
    ensure(g.order() == 14 && g.is_cyclic(), || format!("order {} cyclic {}", g.order(), g.is_cyclic()))?;
    Ok("order 14, cyclic".into())
}

fn mod14_fano_map() -> Vec<usize> {
    parse_covering(&data("mod14-fano.map")).unwrap().point_map
}

fn mod14_covers_fano() -> Check {
    let cm = verify_covering(&library::mod14(), &library::fano(), mod14_fano_map()).map_err(|e| e.to_string())?;
    ensure(cm.degree() == 2, || format!("degree {}", cm.degree()))?;
    let tr = covering_translations(&cm);
    ensure(tr.order() == 2, || format!("{} translations", tr.order()))?;
    let shift = tr.elements().iter().find(|e| !e.is_identity()).unwrap();
    ensure((0..14).all(|i| shift.point(i) == (i + 7) % 14), || shift.cycle_notation())?;
    Ok("degree 2, translations {id, x -> x+7}".into())
}

fn lifting() -> Check {
    let fano = library::fano();
    let cm = verify_covering(&library::mod14(), &fano, mod14_fano_map()).map_err(|e| e.to_string())?;
    let refl = Permutation::parse(&fano, "(1 4)(3 5)").map_err(|e| e.to_string())?;
    let n = lift_automorphism(&cm, &refl).len();
    ensure(n == 0, || format!("(1 4)(3 5) has {n} lifts"))?;
    let aut = automorphism_group(&fano).unwrap();
    let liftable: Vec<Permutation> = aut
        .elements()
        .iter()
        .filter(|g| !lift_automorphism(&cm, g).is_empty())
        .cloned()
        .collect();
    ensure(liftable.len() == 7, || format!("{} of 168 lift", liftable.len()))?;
    let closed = liftable.iter().all(|a| liftable.iter().all(|b| liftable.contains(&a.compose(b))));
    ensure(closed, || "liftable set not closed".into())?;
    let rot = Permutation::automorphism(&fano, (0..7).map(|i| (i + 1) % 7).collect()).unwrap();
    let rotations = PermutationGroup::generate(7, 7, vec![rot], 7).unwrap();
    ensure(liftable.iter().all(|g| rotations.contains(g)), || "liftable set is not the rotations".into())?;
    Ok("no lift of (1 4)(3 5); 7 of 168 lift, the rotations x -> x+k".into())
}

fn primality() -> Check {
    let fano = library::fano();
    for (name, v) in [
        ("regular", is_prime_regular(&fano, PrimalityBudget::default())),
        ("general", is_prime_general(&fano, PrimalityBudget::default().nodes)),
    ] {
        ensure(v.status == PrimeStatus::Prime, || format!("fano {name}: {}", v.status))?;
    }
    let mod14 = library::mod14();
    for (name, v) in [
        ("regular", is_prime_regular(&mod14, PrimalityBudget::default())),
        ("general", is_prime_general(&mod14, PrimalityBudget::default().nodes)),
    ] {
        ensure(v.status == PrimeStatus::NotPrime, || format!("mod14 {name}: {}", v.status))?;
        let w = v.witness.ok_or_else(|| format!("mod14 {name}: no witness"))?;
        ensure(w.base().is_isomorphic(&fano), || format!("mod14 {name}: base is not the Fano plane"))?;
    }
    Ok("fano prime; mod14 not prime under both methods, base = Fano plane".into())
}

fn half_chain_params() -> Check {
    let p = library::half_weight_chain().params();
    ensure(p.n == frac(3, 2) && p.m == frac(3, 2), || format!("n {} m {}", p.n, p.m))?;
    ensure(p.constant_s() == Some(int(2)) && p.constant_t() == Some(int(2)), || format!("{p:?}"))?;
    Ok("n = m = 3/2, s = t = 2".into())
}

/// Bundled configurations with their subgroups of order at most 24.
fn quotient_suite() -> Vec<(String, Configuration, Vec<PermutationGroup>)> {
    let mut configs = library::bundled();
    for k in 3..=12 {
        configs.push((format!("{k}-gon"), library::polygon(k)));
    }
    configs
        .into_iter()
        .map(|(name, c)| {
            let aut = automorphism_group(&c).unwrap();
            let list = subgroups(&aut, Some(24), 1_000_000);
            assert!(list.complete, "{name}: subgroup search incomplete");
            (name, c, list.groups)
        })
        .collect()
}

fn quotient_claims() -> Check {
    let (mut checked, mut orbi) = (0, 0);
    for (name, c, groups) in &quotient_suite() {
        for g in groups {
            let q = quotient(c, g);
            let claims = verify_quotient_claims(c, &q);
            ensure(claims.all_hold(), || format!("{name} / order {}: {:?}", g.order(), claims.failures()))?;
            checked += 1;
            if Orbiconfiguration::new(q.structure.clone()).is_err() {
                continue;
            }
            orbi += 1;
            let p = q.structure.params();
            let (s, t) = (int(c.params().s as i64), int(c.params().t as i64));
            ensure(p.n * s == p.m * t, || format!("{name} / order {}: ns != mt", g.order()))?;
        }
    }
    Ok(format!("{checked} quotients, all claims exact; ns = mt on the {orbi} orbiconfigurations"))
}

fn small_quotients() -> Check {
    let mut ws = Workspace::new();
    for f in ["square.cfg", "triangle.cfg", "rot180.grp", "rot120.grp"] {
        ws.load_str(f, &data(f)).map_err(|e| e.to_string())?;
    }
    for (cfg, grp, target) in [
        ("square", "rot180", library::bigon()),
        ("triangle", "rot120", library::loop_line()),
    ] {
        let c = ws.configuration(cfg).map_err(|e| e.to_string())?;
        let g = match ws.get(grp) {
            Some(orbiconf::io::Entry::Group { group, .. }) => group,
            _ => return Err(format!("{grp} missing")),
        };
        let q = quotient(c, g);
        ensure(orbi_isomorphic(&q.structure, &target).is_some(), || format!("{cfg}/{grp} = {}", q.structure))?;
    }
    Ok("square / C2 = bigon, triangle / C3 = loop".into())
}

fn self_dual() -> Check {
    let h = library::half_weight_chain();
    let d = orbi_dual(&h).map_err(|e| e.to_string())?;
    ensure(orbi_isomorphic(&d, &h).is_some(), || format!("dual is {d}"))?;
    let dd = orbi_dual(&d).map_err(|e| e.to_string())?;
    ensure(orbi_isomorphic(&dd, &h).is_some(), || "dual is not an involution".into())?;
    Ok("half-weight chain is self-dual".into())
}

fn cycle_structure() -> Check {
    let (mut semi, mut total) = (0, 0);
    for (name, _, groups) in &quotient_suite() {
        for g in groups {
            total += 1;
            let sr = is_semiregular(g).is_ok();
            let report = cycle_structure_check(g);
            ensure(sr == report.passed(), || format!("{name} / order {}: mismatch", g.order()))?;
            if sr {
                semi += 1;
                let pts = orbits(g, Domain::Points).sizes();
                let lns = orbits(g, Domain::Lines).sizes();
                ensure(pts.iter().chain(&lns).all(|&k| k == g.order()), || format!("{name}: orbit sizes"))?;
            }
        }
    }
    Ok(format!("{semi} of {total} subgroups semiregular, cycle check agrees on all"))
}

/// Chain: the Levi graph is a path. Interior: a weight-2 point on two
/// distinct lines.
fn has_interior_weight_two(o: &OrbiIncidenceStructure) -> bool {
    let mut degree = vec![0usize; o.point_count()];
    let mut edges = 0;
    for l in o.lines() {
        if l.incidences().len() > 2 {
            return false;
        }
        for &(p, _) in l.incidences() {
            degree[p] += 1;
            edges += 1;
        }
    }
    let path = edges + 1 == o.point_count() + o.line_count() && degree.iter().all(|&d| d <= 2);
    path && (0..o.point_count()).any(|p| o.a(p) == 2 && degree[p] == 2)
}

fn n2_oracle() -> Check {
    let mut keys = HashSet::new();
    for k in 3..=14 {
        let c = library::polygon(k);
        let aut = automorphism_group(&c).unwrap();
        for g in subgroups(&aut, None, 1_000_000).groups {
            let q = quotient(&c, &g);
            if q.weight_gcd == 1 && q.structure.point_count() <= 6 {
                keys.insert(scan::canonical_key(&q.structure));
            }
        }
    }
    let all = scan::n2_structures(6, 3);
    let mut good = 0;
    for o in &all {
        let oracle = keys.contains(&scan::canonical_key(o));
        let v = classify_n2(&Orbiconfiguration::new(o.clone()).unwrap()).unwrap();
        let g = v.status == GoodBadStatus::Good;
        good += g as usize;
        ensure(g == oracle, || format!("disagreement on {o}: oracle says good = {oracle}"))?;
    }
    for k in 3..=6 {
        let chain = N2Form::PointPointChain(k).structure();
        let v = classify_n2(&Orbiconfiguration::new(chain).unwrap()).unwrap();
        ensure(v.status == GoodBadStatus::Good, || format!("{k}-chain with weight-2 ends not good"))?;
    }
    let mut interior_chains = 0;
    for o in all.iter().filter(|o| has_interior_weight_two(o)) {
        interior_chains += 1;
        let v = classify_n2(&Orbiconfiguration::new(o.clone()).unwrap()).unwrap();
        ensure(v.status == GoodBadStatus::Bad, || format!("chain with interior weight-2 point is good: {o}"))?;
    }
    ensure(interior_chains > 0, || "no interior weight-2 chains enumerated".into())?;
    let mut ws = Workspace::new();
    ws.load_str("interior.orbi", &data("interior.orbi")).map_err(|e| e.to_string())?;
    let interior = match ws.get("interior") {
        Some(orbiconf::io::Entry::Orbi(o)) => o.clone(),
        _ => return Err("interior.orbi missing".into()),
    };
    let v = classify_n2(&Orbiconfiguration::new(interior).unwrap()).unwrap();
    ensure(v.status == GoodBadStatus::Bad, || "interior weight-2 point not bad".into())?;
    Ok(format!(
        "{} structures, {good} good, 0 disagreements; {interior_chains} interior weight-2 chains all bad",
        all.len()
    ))
}

fn common_cover() -> Check {
    let (sq, hex) = (library::polygon(4), library::polygon(6));
    let closed = common_cover_search(&sq, &hex, 60, 1_000_000).map_err(|e| e.to_string())?;
    let searched = common_cover_search_candidates(&sq, &hex, 60, 1_000_000).map_err(|e| e.to_string())?;
    let mut sizes = Vec::new();
    for cc in [closed, searched] {
        let CommonCover::Found { cover, first, second } = cc else {
            return Err("no common cover".into());
        };
        ensure(cover.is_isomorphic(&library::polygon(12)), || format!("{} points", cover.point_count()))?;
        for (cm, base) in [(first, &sq), (second, &hex)] {
            verify_covering(&cover, base, cm.point_map().to_vec()).map_err(|e| e.to_string())?;
        }
        sizes.push(cover.point_count());
    }
    Ok(format!("12-gon covers both; closed form and search agree ({sizes:?})"))
}

fn order_filter() -> Check {
    ensure(orbit_divisibility_filter(&[14, 7], 3) == Err(14), || "order 3 not rejected".into())?;
    let c: Configuration = library::mod21();
    let cands = admissible_orders(&c, &[14, 7]);
    let three = cands.iter().find(|k| k.order == 3).ok_or("no order-3 candidate")?;
    ensure(!three.admissible() && three.orbit_filter == Err(14), || format!("{three:?}"))?;
    Ok("order 3 rejected by the orbit of size 14".into())
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 13] = [
        ("fano automorphism group", fano_group),
        ("mod14 automorphism group", mod14_group),
        ("mod14 covers fano", mod14_covers_fano),
        ("lifting through mod14 -> fano", lifting),
        ("primality", primality),
        ("half-weight chain parameters", half_chain_params),
        ("quotient claims", quotient_claims),
        ("square and triangle quotients", small_quotients),
        ("self-dual orbiconfiguration", self_dual),
        ("semiregular cycle structure", cycle_structure),
        ("n2 classification against oracle", n2_oracle),
        ("polygon common cover", common_cover),
        ("orbit divisibility filter", order_filter),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let t0 = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{:.2?}]", i + 1, t0.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
