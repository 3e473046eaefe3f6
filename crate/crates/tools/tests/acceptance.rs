//! Acceptance criteria 1-10, one line each. Runs without the test harness so
//! the lines are always printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use locality_core::locality::{op_subgroup, op_subgroup_brute_force, verify_locality, verify_objectivity, Locality};
use locality_core::normal::{
    all_partial_normal_subgroups, first_isomorphism, frattini_decompose, maximal_cosets, normal_closure, quotient,
    theta_quotient, verify_first_isomorphism, verify_quotient, verify_theta, CosetAnalysis,
};
use locality_core::partial::{enumerate_words, generated_partial_subgroup, verify_partial_group, word_closure, PartialGroupView};
use locality_core::products::{check_product_hypothesis, product_normal, verify_products};
use locality_core::report::{Report, Status};
use locality_core::zoo::{named_group, named_locality, named_partial_group, BuiltLocality, LOCALITY_NAMES};
use locality_core::ElemSet;
use locality_tools::mutation::run_mutations;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn no_fail(r: &Report, what: &str) -> Result<(), String> {
    match r.failures().first() {
        None => Ok(()),
        Some(l) => Err(format!("{what}: {l}")),
    }
}

fn status_is(r: &Report, id: &str, want: Status, what: &str) -> Result<(), String> {
    ensure(r.status(id) == Some(want), || format!("{what}: line {id} is {:?}", r.status(id)))
}

fn zoo() -> Vec<(&'static str, Locality)> {
    LOCALITY_NAMES.iter().map(|&n| (n, named_locality(n).unwrap().locality)).collect()
}

/// A subgroup of the ambient group, as a set of locality elements.
fn to_locality(b: &BuiltLocality, h: &ElemSet) -> ElemSet {
    let origin = b.locality.origin().unwrap();
    ElemSet::from_iter(b.locality.size(), h.iter().filter_map(|x| origin.iter().position(|&e| e == x)))
}

fn origin_set(b: &BuiltLocality) -> ElemSet {
    ElemSet::from_iter(b.group.order(), b.locality.origin().unwrap().iter().copied())
}

fn criterion_1() -> Outcome {
    let b = named_locality("S3:delta-C3").map_err(|e| e.to_string())?;
    let loc = &b.locality;
    ensure(loc.size() == 6 && loc.p() == 3, || format!("|L| = {}", loc.size()))?;
    let mut rejected = None;
    enumerate_words(6, 4, |w| {
        if rejected.is_none() && !loc.in_domain(w) {
            rejected = Some(w.to_vec());
        }
    });
    ensure(rejected.is_none(), || format!("word {rejected:?} rejected"))?;
    Ok("|L| = 6 and every word of length <= 4 is in D".into())
}

fn criterion_2() -> Outcome {
    let loc = named_locality("O4plus2:all").map_err(|e| e.to_string())?.locality;
    ensure(loc.size() == 72, || format!("|L| = {}", loc.size()))?;
    let n = loc.size();
    let word = (0..n * n).map(|i| [i / n, i % n]).find(|w| !loc.in_domain(w));
    let w = word.ok_or("every pair is in D")?;
    ensure(loc.mul(w[0], w[1]).is_none(), || "rejected pair has a product".into())?;
    Ok(format!("|L| = 72, D != W(L): ({},{}) is rejected", w[0], w[1]))
}

fn criterion_3() -> Outcome {
    let g = named_group("GL3_2").map_err(|e| e.to_string())?;
    let (m1, m2) = (g.extra("M1").unwrap(), g.extra("M2").unwrap());
    let par = named_locality("GL3_2:parabolic").map_err(|e| e.to_string())?;
    ensure(origin_set(&par) == m1.union(m2), || "L is not M1 ∪ M2".into())?;
    ensure(par.locality.size() == 40, || format!("|L| = {}", par.locality.size()))?;
    let all = named_locality("GL3_2:all").map_err(|e| e.to_string())?;
    let grp = &g.group;
    let mut prods = ElemSet::new(grp.order());
    for a in m1 {
        for b in m2 {
            prods.insert(grp.mul(a, b));
            prods.insert(grp.mul(b, a));
        }
    }
    ensure(origin_set(&all) == prods, || "L is not M1M2 ∪ M2M1".into())?;
    Ok(format!("parabolic: L = M1 ∪ M2, |L| = 40; all: L = M1M2 ∪ M2M1, |L| = {}", all.locality.size()))
}

fn criterion_4() -> Outcome {
    let free1 = named_partial_group("free1").map_err(|e| e.to_string())?;
    no_fail(&verify_partial_group(&free1, 3), "free1")?;
    let zoo = zoo();
    for (name, loc) in &zoo {
        no_fail(&verify_partial_group(loc.view(), 3), name)?;
        no_fail(&verify_objectivity(loc, 3), name)?;
        no_fail(&verify_locality(loc), name)?;
    }
    let run = run_mutations(2024, 50, 3);
    ensure(run.outcomes.len() == 50, || format!("{} mutants", run.outcomes.len()))?;
    if let Some(s) = run.survivors().next() {
        return Err(format!("mutant survived: {} {:?}", s.instance, s.kind));
    }
    ensure(run.outcomes.iter().all(|o| o.killed_by.as_deref().is_some_and(|l| l.contains("witness="))), || {
        "a kill without a witness".into()
    })?;
    Ok(format!(
        "{} instances pass at bound 3; 50/50 mutants killed with a witness ({} equivalent deletions excluded)",
        zoo.len() + 1,
        run.equivalent.len()
    ))
}

fn criterion_5() -> Outcome {
    let b = named_locality("O4plus2:all").map_err(|e| e.to_string())?;
    let loc = &b.locality;
    let v = to_locality(&b, named_group("O4plus2").unwrap().extra("V").unwrap());
    let n = normal_closure(loc, &v);
    ensure(n.members() == &v, || format!("normal closure of V has {} elements", n.len()))?;
    let an = CosetAnalysis::new(loc, &n);
    for f in 0..loc.size() {
        let (x, g) = frattini_decompose(loc, &n, f).map_err(|e| e.to_string())?;
        ensure(n.contains(x) && an.up_max.contains(g), || format!("f={f}: bad factors ({x},{g})"))?;
        ensure(loc.mul(x, g) == Some(f) && loc.s_w_mask(&[x, g]) == loc.sg_mask(f), || format!("f={f}: S_f != S_(x,g)"))?;
    }
    let cosets = maximal_cosets(loc, &n).map_err(|e| e.to_string())?;
    let sizes: Vec<usize> = cosets.blocks.iter().map(ElemSet::len).collect();
    ensure(sizes == vec![9; 8], || format!("block sizes {sizes:?}"))?;
    Ok("72/72 Frattini splittings with S_f = S_(x,g); 8 maximal cosets of size 9".into())
}

fn criterion_6() -> Outcome {
    let mut count = 0;
    for (name, loc) in zoo() {
        for n in all_partial_normal_subgroups(&loc) {
            let what = format!("{name} |N|={}", n.len());
            let r = verify_quotient(&loc, &n, 3);
            no_fail(&r, &what)?;
            for id in ["4.5", "4.3(a)", "3.16(kernel)", "4.3(4)"] {
                status_is(&r, id, Status::Pass, &what)?;
            }
            let q = quotient(&loc, &n).map_err(|e| e.to_string())?;
            let rho = &q.projection;
            ensure(&rho.kernel(&q.locality) == n.members(), || format!("{what}: kernel differs"))?;
            for (i, block) in q.cosets.blocks.iter().enumerate() {
                let fiber = ElemSet::from_iter(loc.size(), (0..loc.size()).filter(|&g| rho.apply(g) == i));
                ensure(&fiber == block, || format!("{what}: fiber {i} differs from its block"))?;
            }
            for g in &q.up_max {
                let img = rho.image_mask(&loc, &q.locality, loc.sg_mask(g));
                ensure(img == Some(q.locality.sg_mask(rho.apply(g))), || format!("{what}: (S_g)ρ differs at g={g}"))?;
            }
            count += 1;
        }
    }
    Ok(format!("{count} (L, N) pairs: quotient is a locality, Ker ρ = N, fibers = blocks, (S_g)ρ = S_(gρ)"))
}

fn criterion_7() -> Outcome {
    let (mut towers, mut isos) = (0, 0);
    for (name, loc) in zoo() {
        let ns = all_partial_normal_subgroups(&loc);
        for m in &ns {
            let qm = quotient(&loc, m).map_err(|e| e.to_string())?;
            let beta = &qm.projection;
            ensure(&beta.kernel(&qm.locality) == m.members(), || format!("{name}: Ker β != M"))?;
            for n in ns.iter().filter(|n| n.members().is_subset(m.members())) {
                let what = format!("{name} |N|={} |M|={}", n.len(), m.len());
                no_fail(&verify_first_isomorphism(&loc, beta, &qm.locality, n, 3), &what)?;
                let (qn, gamma) = first_isomorphism(&loc, beta, &qm.locality, n).map_err(|e| format!("{what}: {e}"))?;
                for g in 0..loc.size() {
                    ensure(gamma.apply(qn.projection.apply(g)) == beta.apply(g), || format!("{what}: γ does not factor β"))?;
                }
                let injective = {
                    let mut seen = ElemSet::new(qm.locality.size());
                    (0..qn.locality.size()).all(|x| seen.insert(gamma.apply(x)))
                };
                let bijective = injective && qn.locality.size() == qm.locality.size();
                ensure(bijective == (n == m), || format!("{what}: γ bijective = {bijective}"))?;
                towers += 1;
                isos += usize::from(bijective);
            }
        }
    }
    Ok(format!("{towers} towers: γ exists and factors β; isomorphism exactly for the {isos} towers with N = Ker β"))
}

fn criterion_8() -> Outcome {
    let b = named_locality("C3xD8:sylow").map_err(|e| e.to_string())?;
    let loc = &b.locality;
    let c3 = to_locality(&b, named_group("C3xD8").unwrap().extra("C3").unwrap());
    let th = theta_quotient(loc).map_err(|e| e.to_string())?;
    ensure(th.theta.members() == &c3, || format!("Θ = {}", th.theta.members()))?;
    ensure(th.theta.t(loc).len() == 1, || "S∩Θ != 1".into())?;
    let r = verify_theta(loc, 3);
    for id in ["4.12", "4.12(S)", "4.12(a)", "4.12(b)", "4.12(c)"] {
        status_is(&r, id, Status::Pass, "C3xD8")?;
    }
    Ok(format!("Θ = C3, S∩Θ = 1, |L/Θ| = {}, 4.12(a)(b)(c) pass", th.quotient.locality.size()))
}

fn criterion_9() -> Outcome {
    let (mut met, mut skipped) = (0, 0);
    for (name, loc) in zoo() {
        let ns = all_partial_normal_subgroups(&loc);
        for m in &ns {
            for n in &ns {
                let what = format!("{name} |M|={} |N|={}", m.len(), n.len());
                let r = verify_products(&loc, m, n);
                no_fail(&r, &what)?;
                let want = if check_product_hypothesis(&loc, m, n).is_ok() {
                    met += 1;
                    Status::Pass
                } else {
                    skipped += 1;
                    ensure(product_normal(&loc, m, n).is_err(), || format!("{what}: product computed without (*)"))?;
                    Status::Skip
                };
                for id in ["5.1", "5.1(S)", "5.2"] {
                    status_is(&r, id, want, &what)?;
                }
            }
        }
    }
    Ok(format!("{met} pairs meet (*) and pass 5.1/5.2; {skipped} pairs skipped"))
}

fn criterion_10() -> Outcome {
    let mut views: Vec<(&str, PartialGroupView)> = vec![("free1", named_partial_group("free1").unwrap())];
    let zoo = zoo();
    views.extend(zoo.iter().filter(|(_, l)| l.size() <= 72).map(|(n, l)| (*n, l.view().clone())));
    let mut closures = 0;
    for (name, pg) in &views {
        let n = pg.size();
        let step = if n > 24 { 7 } else { 1 };
        let mut seeds: Vec<ElemSet> = (0..n).map(|a| ElemSet::singleton(n, a)).collect();
        for a in (0..n).step_by(step) {
            for b in (a + 1..n).step_by(step) {
                seeds.push(ElemSet::from_iter(n, [a, b]));
            }
        }
        for x in seeds {
            let fast = generated_partial_subgroup(pg, &x).members;
            ensure(fast == word_closure(pg, &x, 4), || format!("{name}: closures of {x} differ"))?;
            closures += 1;
        }
    }
    for (name, loc) in &zoo {
        ensure(op_subgroup(loc) == op_subgroup_brute_force(loc), || format!("{name}: O_p(L) differs"))?;
    }
    let mut subgroups = 0;
    for (name, loc) in zoo.iter().filter(|(_, l)| l.size() <= 72) {
        let n = loc.size();
        let mut cands: Vec<ElemSet> =
            (0..n).map(|a| generated_partial_subgroup(loc.view(), &ElemSet::singleton(n, a)).members).collect();
        cands.push(loc.sylow().clone());
        cands.extend(loc.object_masks().iter().map(|&m| loc.normalizer(m)));
        cands.sort_by_key(ElemSet::to_vec);
        cands.dedup();
        for h in cands {
            let letters = h.to_vec();
            let mut words_ok = true;
            enumerate_words(letters.len(), 4, |w| {
                if words_ok {
                    let w: Vec<usize> = w.iter().map(|&i| letters[i]).collect();
                    words_ok = loc.in_domain(&w);
                }
            });
            ensure(loc.is_subgroup(&h) == words_ok, || format!("{name}: subgroup test disagrees on {h}"))?;
            subgroups += 1;
        }
    }
    Ok(format!(
        "{closures} closures agree to length 4; O_p(L) agrees on {} localities; {subgroups} subgroup tests agree to length 4",
        zoo.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [(usize, fn() -> Outcome); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, f) in criteria {
        let t = Instant::now();
        let (tag, msg) = match f() {
            Ok(m) => ("PASS", m),
            Err(m) => {
                failed += 1;
                ("FAIL", m)
            }
        };
        println!("CRITERION {i} {tag}: {msg} [{:.1}s]", t.elapsed().as_secs_f64());
    }
    println!("acceptance: {}/10 criteria pass in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
