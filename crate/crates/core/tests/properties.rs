//! Property tests over the example zoo.

use std::sync::OnceLock;

use locality_core::locality::Locality;
use locality_core::normal::{all_partial_normal_subgroups, quotient, up_rel, PartialNormalSubgroup, Quotient, UpPair};
use locality_core::partial::PartialGroupView;
use locality_core::products::{check_product_hypothesis, product_normal, set_product, split_product_element};
use locality_core::zoo::{named_locality, named_partial_group, LOCALITY_NAMES};
use proptest::prelude::*;

struct Zoo {
    views: Vec<PartialGroupView>,
    locs: Vec<Locality>,
    normals: Vec<Vec<PartialNormalSubgroup>>,
    quotients: Vec<Vec<Quotient>>,
}

fn zoo() -> &'static Zoo {
    static Z: OnceLock<Zoo> = OnceLock::new();
    Z.get_or_init(|| {
        let mut views = vec![named_partial_group("free1").unwrap()];
        let locs: Vec<Locality> = LOCALITY_NAMES.iter().map(|n| named_locality(n).unwrap().locality).collect();
        views.extend(locs.iter().map(|l| l.view().clone()));
        let normals: Vec<_> = locs.iter().map(all_partial_normal_subgroups).collect();
        let quotients = locs
            .iter()
            .zip(&normals)
            .map(|(l, ns)| ns.iter().map(|n| quotient(l, n).unwrap()).collect())
            .collect();
        Zoo { views, locs, normals, quotients }
    })
}

/// An instance index and a word over it, as raw numbers reduced modulo the size.
fn view_and_word(max_len: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0..10usize, prop::collection::vec(0..1024usize, 0..=max_len))
}

fn reduce(pg: &PartialGroupView, raw: &[usize]) -> Vec<usize> {
    raw.iter().map(|&x| x % pg.size()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn domain_is_closed_under_segments_and_multiplicative((i, raw) in view_and_word(6), cut in any::<usize>()) {
        let z = zoo();
        let pg = &z.views[i % z.views.len()];
        let w = reduce(pg, &raw);
        prop_assume!(pg.in_domain(&w));
        let c = if w.is_empty() { 0 } else { cut % (w.len() + 1) };
        let (u, v) = w.split_at(c);
        prop_assert!(pg.in_domain(u) && pg.in_domain(v));
        let (pu, pv) = (pg.fold(u).unwrap(), pg.fold(v).unwrap());
        prop_assert_eq!(pg.mul(pu, pv), pg.fold(&w));
    }

    #[test]
    fn cancellation((i, raw) in view_and_word(3), a in any::<u16>(), b in any::<u16>()) {
        let z = zoo();
        let pg = &z.views[i % z.views.len()];
        let u = reduce(pg, &raw);
        let (v, w) = ([a as usize % pg.size()], [b as usize % pg.size()]);
        let uv: Vec<usize> = u.iter().chain(&v).copied().collect();
        let uw: Vec<usize> = u.iter().chain(&w).copied().collect();
        if pg.in_domain(&uv) && pg.in_domain(&uw) && pg.fold(&uv) == pg.fold(&uw) {
            prop_assert_eq!(v, w);
        }
    }

    #[test]
    fn conjugation_is_a_bijection_with_inverse(i in 0..9usize, g in any::<u16>()) {
        let loc = &zoo().locs[i];
        let g = g as usize % loc.size();
        let gi = loc.inv(g);
        let dg = loc.d_of(g);
        let mut images = std::collections::BTreeSet::new();
        for x in &dg {
            let y = loc.conj(x, g).unwrap();
            prop_assert!(images.insert(y));
            prop_assert_eq!(loc.conj(y, gi), Some(x));
        }
        prop_assert_eq!(images.len(), loc.d_of(gi).len());
    }

    #[test]
    fn up_relation_is_transitive(i in 0..9usize, j in any::<u16>(), f in any::<[u16; 3]>(), p in any::<[u16; 3]>()) {
        let z = zoo();
        let loc = &z.locs[i];
        let ns = &z.normals[i];
        let n = &ns[j as usize % ns.len()];
        let pair = |k: usize| {
            let f = f[k] as usize % loc.size();
            let within: Vec<_> = loc.object_masks().iter().copied().filter(|&m| m & !loc.sg_mask(f) == 0).collect();
            UpPair { f, p: within[p[k] as usize % within.len()] }
        };
        let (a, b, c) = (pair(0), pair(1), pair(2));
        prop_assert!(up_rel(loc, n, a, a));
        if up_rel(loc, n, a, b) && up_rel(loc, n, b, c) {
            prop_assert!(up_rel(loc, n, a, c));
        }
    }

    #[test]
    fn projection_is_a_homomorphism((i, raw) in view_and_word(4), j in any::<u16>()) {
        let z = zoo();
        let i = i % z.locs.len();
        let (loc, qs) = (&z.locs[i], &z.quotients[i]);
        let q = &qs[j as usize % qs.len()];
        let w = reduce(loc.view(), &raw);
        prop_assume!(loc.in_domain(&w));
        let img: Vec<usize> = w.iter().map(|&x| q.projection.apply(x)).collect();
        prop_assert!(q.locality.in_domain(&img));
        prop_assert_eq!(q.locality.prod(&img), loc.prod(&w).map(|x| q.projection.apply(x)));
    }

    #[test]
    fn products_commute_and_split(i in 0..9usize, a in any::<u16>(), b in any::<u16>()) {
        let z = zoo();
        let (loc, ns) = (&z.locs[i], &z.normals[i]);
        let m = &ns[a as usize % ns.len()];
        let n = &ns[b as usize % ns.len()];
        prop_assume!(check_product_hypothesis(loc, m, n).is_ok());
        let mn = product_normal(loc, m, n).unwrap();
        prop_assert_eq!(mn.members(), &set_product(loc, n.members(), m.members()));
        let direct = loc.sylow().intersection(mn.members());
        let uv = set_product(loc, &m.t(loc), &n.t(loc));
        prop_assert_eq!(direct, uv);
        for g in mn.members() {
            let w = split_product_element(loc, m, n, g).unwrap();
            prop_assert_eq!(loc.mul(w.x, w.y), Some(g));
            prop_assert_eq!(loc.s_w_mask(&[w.x, w.y]), loc.sg_mask(g));
        }
    }
}
