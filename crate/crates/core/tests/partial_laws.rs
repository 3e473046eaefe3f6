//! Laws of partial subgroups and homomorphisms, checked on small instances.

use locality_core::normal::{all_partial_normal_subgroups, quotient};
use locality_core::partial::{check_image_of_subgroup, generated_partial_subgroup, PartialGroupHom, PartialGroupView};
use locality_core::zoo::{named_locality, named_partial_group, LOCALITY_NAMES};
use locality_core::ElemSet;

fn product(pg: &PartialGroupView, a: &ElemSet, b: &ElemSet) -> ElemSet {
    let mut out = ElemSet::new(pg.size());
    for x in a {
        for y in b {
            if let Some(z) = pg.mul(x, y) {
                out.insert(z);
            }
        }
    }
    out
}

/// Partial subgroups generated by at most two elements.
fn small_subgroups(pg: &PartialGroupView) -> Vec<ElemSet> {
    let n = pg.size();
    let mut out: Vec<ElemSet> = Vec::new();
    for a in 0..n {
        for b in a..n {
            let h = generated_partial_subgroup(pg, &ElemSet::from_iter(n, [a, b])).members;
            if !out.contains(&h) {
                out.push(h);
            }
        }
    }
    out
}

#[test]
fn dedekind_on_small_instances() {
    let mut views = vec![("free1".to_string(), named_partial_group("free1").unwrap())];
    for name in LOCALITY_NAMES {
        let pg = named_partial_group(name).unwrap();
        if pg.size() <= 24 {
            views.push((name.to_string(), pg));
        }
    }
    let mut checked = 0usize;
    let mut stated = 0usize;
    for (name, pg) in &views {
        let subs = small_subgroups(pg);
        for h in &subs {
            for k in &subs {
                let hk = product(pg, h, k);
                if !pg.is_partial_subgroup(&hk) {
                    continue;
                }
                for a in &subs {
                    // With K ≤ A: A∩HK = (A∩H)K. With H ≤ A: A∩HK = H(A∩K).
                    // Both give A itself once A ≤ HK.
                    let a_hk = a.intersection(&hk);
                    if a.is_subset(&hk) && (k.is_subset(a) || h.is_subset(a)) {
                        stated += 1;
                    }
                    if k.is_subset(a) {
                        assert_eq!(product(pg, &a.intersection(h), k), a_hk, "{name} (a) H={h} K={k} A={a}");
                        checked += 1;
                    }
                    if h.is_subset(a) {
                        assert_eq!(product(pg, h, &a.intersection(k)), a_hk, "{name} (b) H={h} K={k} A={a}");
                        checked += 1;
                    }
                }
            }
        }
    }
    assert!(checked > 1000, "only {checked} triples");
    assert!(stated > 100, "only {stated} triples with A ≤ HK");
}

#[test]
fn quotient_maps_send_subgroups_to_subgroups() {
    for name in ["S3:delta-C3", "D8:sylow", "S4:all", "O4plus2:sylow", "C3xD8:sylow"] {
        let loc = named_locality(name).unwrap().locality;
        let mut groups = vec![loc.sylow().clone()];
        groups.extend(loc.object_masks().iter().map(|&p| loc.normalizer(p)));
        for n in all_partial_normal_subgroups(&loc) {
            let q = quotient(&loc, &n).unwrap();
            let h = q.projection.hom();
            for m in &groups {
                let bad = check_image_of_subgroup(q.locality.view(), &h, m, 3);
                assert!(bad.is_none(), "{name} N={} M={m}: {bad:?}", n.members());
            }
        }
    }
}

#[test]
fn non_homomorphisms_can_break_subgroups() {
    // C2 onto {1, a} in the free partial group on one generator: (a, a) is not in D.
    let c2 = named_partial_group("S3:delta-C3").unwrap();
    let free1 = named_partial_group("free1").unwrap();
    let t = (0..c2.size()).find(|&x| x != c2.identity() && c2.inv(x) == x).unwrap();
    let mut map = vec![0; c2.size()];
    map[t] = 1;
    let m = ElemSet::from_iter(c2.size(), [c2.identity(), t]);
    let bad = check_image_of_subgroup(&free1, &PartialGroupHom { map }, &m, 2).expect("witness");
    assert_eq!(bad.key, vec![1, 1]);
}
