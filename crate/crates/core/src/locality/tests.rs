use super::*;
use crate::report::{Report, Status};
use crate::zoo::{named_group, named_locality, LOCALITY_NAMES};

fn origin_set(b: &crate::zoo::BuiltLocality) -> ElemSet {
    ElemSet::from_iter(b.group.order(), b.locality.origin().unwrap().iter().copied())
}

#[test]
fn s3_delta_c3_is_the_whole_group() {
    let b = named_locality("S3:delta-C3").unwrap();
    let loc = &b.locality;
    assert_eq!(loc.size(), 6);
    assert_eq!(loc.sylow().len(), 3);
    let mut all = true;
    crate::partial::enumerate_words(6, 4, |w| all &= loc.in_domain(w));
    assert!(all);
}

#[test]
fn o4plus2_all_rejects_a_pair() {
    let b = named_locality("O4plus2:all").unwrap();
    let loc = &b.locality;
    assert_eq!(loc.size(), 72);
    assert_eq!(loc.object_masks().len(), 9);
    let rejected = (0..72).flat_map(|f| (0..72).map(move |g| (f, g))).filter(|&(f, g)| !loc.in_domain(&[f, g])).count();
    assert!(rejected > 0);
}

#[test]
fn gl32_parabolic_is_union_of_parabolics() {
    let b = named_locality("GL3_2:parabolic").unwrap();
    let ng = named_group("GL3_2").unwrap();
    let (m1, m2) = (ng.extra("M1").unwrap(), ng.extra("M2").unwrap());
    assert_eq!(b.locality.object_masks().len(), 3);
    assert_eq!(b.locality.size(), 40);
    assert_eq!(origin_set(&b), m1.union(m2));
    // some pair from M1 - M2 and M2 - M1 is rejected
    let loc = &b.locality;
    let o = loc.origin().unwrap();
    let found = (0..40).any(|f| {
        (0..40).any(|g| m1.contains(o[f]) && !m2.contains(o[f]) && m2.contains(o[g]) && !m1.contains(o[g]) && !loc.in_domain(&[f, g]))
    });
    assert!(found);
}

#[test]
fn gl32_all_is_product_of_parabolics() {
    let b = named_locality("GL3_2:all").unwrap();
    let ng = named_group("GL3_2").unwrap();
    let (m1, m2) = (ng.extra("M1").unwrap(), ng.extra("M2").unwrap());
    let g = &ng.group;
    let expect = g.set_product(m1, m2).union(&g.set_product(m2, m1));
    assert_eq!(origin_set(&b), expect);
    assert_eq!(b.locality.size(), 104);
}

#[test]
fn zoo_passes_objectivity_and_locality() {
    for name in LOCALITY_NAMES {
        let b = named_locality(name).unwrap();
        let r = verify_objectivity(&b.locality, 2);
        assert!(r.all_pass(), "{name}\n{r}");
        let r = verify_locality(&b.locality);
        assert!(r.all_pass(), "{name}\n{r}");
    }
}

#[test]
fn partitioned_sweep_matches() {
    let b = named_locality("GL3_2:parabolic").unwrap();
    let whole = verify_objectivity(&b.locality, 3);
    let mut merged = Report::new();
    for part in 0..3 {
        merged.merge(verify_objectivity_part(&b.locality, 3, part, 3));
    }
    assert_eq!(whole, merged);
}

#[test]
fn sg_and_sw() {
    let b = named_locality("GL3_2:parabolic").unwrap();
    let loc = &b.locality;
    assert_eq!(loc.s_w(&[loc.identity()]), *loc.sylow());
    for x in loc.sylow() {
        assert_eq!(loc.s_g(x), *loc.sylow());
    }
    for g in 0..loc.size() {
        let gi = loc.inv(g);
        assert_eq!(loc.conj_mask(loc.sg_mask(g), g), Some(loc.sg_mask(gi)));
    }
}

#[test]
fn delta_closure_examples() {
    let ng = named_group("GL3_2").unwrap();
    let seed = [ng.extra("P1").unwrap().clone(), ng.extra("P2").unwrap().clone()];
    let d = delta_closure(&ng.group, &ng.sylow, 2, &seed);
    assert_eq!(d.len(), 3);
    let d = delta_closure(&ng.group, &ng.sylow, 2, &[]);
    assert_eq!(d.members, alloc::vec![ng.sylow.clone()]);
    let o = named_group("O4plus2").unwrap();
    let subs = o.group.subgroups_within(&o.sylow);
    let minimal: alloc::vec::Vec<ElemSet> = subs.iter().filter(|h| h.len() == 2).cloned().collect();
    let d = delta_closure(&o.group, &o.sylow, 2, &minimal);
    assert_eq!(d.len(), subs.len() - 1);
}

#[test]
fn o2_violation_is_rejected() {
    let ng = named_group("O4plus2").unwrap();
    let mut d = delta_all_nonidentity(&ng.group, &ng.sylow, 2);
    let victim = d.members.iter().find(|h| h.len() == 4).unwrap().clone();
    d.members.retain(|h| *h != victim);
    assert!(matches!(locality_from_group(&ng.group, &d), Err(LocalityError::DeltaNotClosed(_))));
}

#[test]
fn deleted_object_is_caught_unless_redundant() {
    let b = named_locality("O4plus2:all").unwrap();
    let loc = &b.locality;
    let o = loc.origin().unwrap();
    let objs = loc.objects();
    let mut redundant = 0;
    for drop in 0..objs.len() {
        let kept: alloc::vec::Vec<ElemSet> = objs.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, x)| x.clone()).collect();
        let bad = loc.with_objects_unchecked(&kept);
        // Rebuild from the group: if that gives the same partial group, the
        // deletion produced another valid locality.
        let in_g: alloc::vec::Vec<ElemSet> = kept.iter().map(|x| x.map(b.group.order(), |e| o[e])).collect();
        let same = ObjectSet::new(2, b.sylow.clone(), in_g.clone()).members.contains(&b.sylow)
            && locality_from_group(&b.group, &ObjectSet::new(2, b.sylow.clone(), in_g)).is_ok_and(|re| {
                re.origin() == loc.origin() && {
                    let mut eq = true;
                    crate::partial::enumerate_words(loc.size(), 3, |w| eq &= re.in_domain(w) == loc.in_domain(w));
                    eq
                }
            });
        let r = verify_objectivity(&bad, 3);
        if same {
            redundant += 1;
            assert!(r.all_pass(), "{}", objs[drop]);
        } else {
            assert!(!r.all_pass(), "dropping {} went unnoticed", objs[drop]);
        }
    }
    // only the center of S can go
    assert_eq!(redundant, 1);
}

#[test]
fn smaller_sylow_breaks_maximality() {
    let b = named_locality("GL3_2:parabolic").unwrap();
    let loc = &b.locality;
    let p1 = loc.objects()[0].clone();
    assert_eq!(p1.len(), 4);
    let bad = Locality::from_parts_unchecked(loc.view().clone(), 2, &p1, &[p1.clone()]).unwrap();
    let r = verify_locality(&bad);
    assert_eq!(r.status("2.8(L2)"), Some(Status::Fail));
}

#[test]
fn op_subgroups() {
    let s3 = named_locality("S3:delta-C3").unwrap().locality;
    assert_eq!(op_subgroup(&s3), *s3.sylow());
    let d8 = named_locality("D8:sylow").unwrap().locality;
    assert_eq!(op_subgroup(&d8).len(), 8);
    for name in LOCALITY_NAMES {
        let loc = named_locality(name).unwrap().locality;
        assert_eq!(op_subgroup(&loc), op_subgroup_brute_force(&loc), "{name}");
    }
    let gl = named_locality("GL3_2:parabolic").unwrap().locality;
    assert_eq!(op_subgroup(&gl).len(), 1);
}

#[test]
fn sublocalities() {
    let loc = named_locality("O4plus2:all").unwrap().locality;
    let (whole, emb) = normalizer_sublocality(&loc, &ElemSet::singleton(loc.size(), loc.identity())).unwrap();
    assert_eq!(whole.size(), loc.size());
    assert_eq!(emb.len(), loc.size());
    let (ns, _) = normalizer_sublocality(&loc, loc.sylow()).unwrap();
    assert_eq!(ns.size(), loc.normalizer(loc.full_mask()).len());
    assert!(ns.subgroup_as_group(&ElemSet::full(ns.size())).is_ok());
    let sg = named_group("O4plus2").unwrap();
    let (sgrp, semb) = sg.group.restrict(&sg.sylow).unwrap();
    let z: ElemSet = sgrp.center().map(sg.group.order(), |x| semb[x]);
    let zl = z.map(loc.size(), |x| loc.origin().unwrap().iter().position(|&o| o == x).unwrap());
    let (nz, _) = normalizer_sublocality(&loc, &zl).unwrap();
    assert!(verify_objectivity(&nz, 2).all_pass());
}

#[test]
fn conjugating_into_s() {
    let loc = named_locality("GL3_2:parabolic").unwrap().locality;
    assert_eq!(conjugate_into_s(&loc, loc.sylow()), Ok(loc.identity()));
    for x in 0..loc.size() {
        if x == loc.identity() || loc.mul(x, x) != Some(loc.identity()) {
            continue;
        }
        let h = ElemSet::from_iter(loc.size(), [loc.identity(), x]);
        let g = conjugate_into_s(&loc, &h).unwrap();
        assert!(loc.conj(x, g).is_some_and(|y| loc.sylow().contains(y)));
    }
}

#[test]
fn centralizers() {
    let loc = named_locality("O4plus2:all").unwrap().locality;
    let triv = ElemSet::singleton(loc.size(), loc.identity());
    assert_eq!(centralizer_partial(&loc, &triv).len(), loc.size());
    let d8 = named_locality("D8:sylow").unwrap().locality;
    assert_eq!(centralizer_partial(&d8, d8.sylow()).len(), 2);
}

#[test]
fn fusion_maps_are_deterministic() {
    let a = fusion_maps(&named_locality("D8:sylow").unwrap().locality);
    let b = fusion_maps(&named_locality("D8:sylow").unwrap().locality);
    assert_eq!(a, b);
    // inner automorphisms of D8 act on its 10 subgroups; all maps are restrictions of them
    assert!(a.maps.iter().all(|m| !m.is_empty()));
    let s3 = fusion_maps(&named_locality("S3:delta-C3").unwrap().locality);
    // C3 has two subgroups; maps: id and inversion on C3, identity on 1
    assert_eq!(s3.len(), 3);
}

#[test]
fn subgroup_test_agrees_with_words() {
    for name in ["O4plus2:all", "GL3_2:parabolic", "S4:all"] {
        let loc = named_locality(name).unwrap().locality;
        let n = loc.size();
        for a in 0..n {
            let h = crate::partial::generated_partial_subgroup(loc.view(), &ElemSet::singleton(n, a)).members;
            let letters = h.to_vec();
            let mut words_ok = true;
            crate::partial::enumerate_words(letters.len(), 3, |w| {
                let w: alloc::vec::Vec<usize> = w.iter().map(|&i| letters[i]).collect();
                words_ok &= loc.in_domain(&w);
            });
            assert_eq!(loc.is_subgroup(&h), words_ok, "{name} a={a}");
        }
    }
}

