//! Cross-checks of the fast algorithms against brute-force word enumeration.

use locality_core::locality::{op_subgroup, op_subgroup_brute_force};
use locality_core::partial::{enumerate_words, generated_partial_subgroup, word_closure, PartialGroupView};
use locality_core::zoo::{named_locality, named_partial_group, LOCALITY_NAMES};
use locality_core::ElemSet;

fn small_views() -> Vec<(String, PartialGroupView)> {
    let mut out = vec![("free1".to_string(), named_partial_group("free1").unwrap())];
    for name in LOCALITY_NAMES {
        let pg = named_partial_group(name).unwrap();
        if pg.size() <= 72 {
            out.push((name.to_string(), pg));
        }
    }
    out
}

#[test]
fn binary_closure_matches_word_closure() {
    for (name, pg) in small_views() {
        let n = pg.size();
        let step = if n > 24 { 5 } else { 1 };
        let mut seeds: Vec<ElemSet> = (0..n).map(|a| ElemSet::singleton(n, a)).collect();
        for a in (0..n).step_by(step) {
            for b in (a + 1..n).step_by(step) {
                seeds.push(ElemSet::from_iter(n, [a, b]));
            }
        }
        for x in seeds {
            let fast = generated_partial_subgroup(&pg, &x).members;
            assert_eq!(fast, word_closure(&pg, &x, 4), "{name} X={x}");
        }
    }
}

#[test]
fn op_fixpoint_matches_brute_force() {
    for name in LOCALITY_NAMES {
        let loc = named_locality(name).unwrap().locality;
        assert_eq!(op_subgroup(&loc), op_subgroup_brute_force(&loc), "{name}");
    }
}

fn all_words_accepted(pg: &PartialGroupView, h: &ElemSet, len: usize) -> bool {
    let letters = h.to_vec();
    let mut ok = true;
    enumerate_words(letters.len(), len, |w| {
        if ok {
            let w: Vec<usize> = w.iter().map(|&i| letters[i]).collect();
            ok = pg.in_domain(&w);
        }
    });
    ok
}

#[test]
fn subgroup_criterion_matches_words() {
    for name in LOCALITY_NAMES {
        let loc = named_locality(name).unwrap().locality;
        let n = loc.size();
        if n > 72 {
            continue;
        }
        let mut cands: Vec<ElemSet> = (0..n)
            .map(|a| generated_partial_subgroup(loc.view(), &ElemSet::singleton(n, a)).members)
            .collect();
        cands.push(loc.sylow().clone());
        for &m in loc.object_masks() {
            cands.push(loc.normalizer(m));
        }
        cands.sort_by_key(|h| h.to_vec());
        cands.dedup();
        for h in cands {
            assert_eq!(loc.is_subgroup(&h), all_words_accepted(loc.view(), &h, 4), "{name} H={h}");
        }
    }
}
