//! Products of partial normal subgroups.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::locality::{Locality, Mask, MaskIter};
use crate::normal::{all_normal_in_view, PartialNormalSubgroup};
use crate::partial::generated_partial_subgroup;
use crate::report::{CheckLine, FirstWitness, Report, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProductError {
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("element {0} is not in the product")]
    NotInProduct(usize),
}

/// `g = Π(x, y)` with `x ∈ M`, `y ∈ N` and `S_g = S_{(x,y)}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductWitness {
    pub g: usize,
    pub x: usize,
    pub y: usize,
}

fn normalizes(loc: &Locality, set: &ElemSet, v: Mask) -> bool {
    set.iter().all(|x| loc.conj_mask(v, x) == Some(v))
}

fn mask_product(loc: &Locality, a: Mask, b: Mask) -> Mask {
    let mut out = 0;
    for i in MaskIter(a) {
        for j in MaskIter(b) {
            out |= 1u64 << loc.s_mul_pos(i, j);
        }
    }
    out
}

/// `{Π(x, y) : x ∈ A, y ∈ B, (x, y) ∈ D}`.
pub fn set_product(loc: &Locality, a: &ElemSet, b: &ElemSet) -> ElemSet {
    let mut out = ElemSet::new(loc.size());
    for x in a {
        for y in b {
            if let Some(z) = loc.mul(x, y) {
                out.insert(z);
            }
        }
    }
    out
}

/// Checks that `M` normalizes `S ∩ N` and `N` normalizes `S ∩ M`.
pub fn check_product_hypothesis(loc: &Locality, m: &PartialNormalSubgroup, n: &PartialNormalSubgroup) -> Result<(), ProductError> {
    if !normalizes(loc, m.members(), n.t_mask()) {
        return Err(ProductError::Hypothesis(String::from("M does not normalize V = S∩N")));
    }
    if !normalizes(loc, n.members(), m.t_mask()) {
        return Err(ProductError::Hypothesis(String::from("N does not normalize U = S∩M")));
    }
    Ok(())
}

/// `MN`, when `M` normalizes `S∩N` and `N` normalizes `S∩M`.
pub fn product_normal(loc: &Locality, m: &PartialNormalSubgroup, n: &PartialNormalSubgroup) -> Result<PartialNormalSubgroup, ProductError> {
    check_product_hypothesis(loc, m, n)?;
    Ok(PartialNormalSubgroup::new_unchecked(loc, set_product(loc, m.members(), n.members())))
}

/// A splitting of `g ∈ MN`: `(1, g)` for `g ∈ N`, `(g, 1)` for `g ∈ M`, and
/// otherwise the lexicographically smallest `(x, y)`.
pub fn split_product_element(
    loc: &Locality,
    m: &PartialNormalSubgroup,
    n: &PartialNormalSubgroup,
    g: usize,
) -> Result<ProductWitness, ProductError> {
    let one = loc.identity();
    if n.contains(g) {
        return Ok(ProductWitness { g, x: one, y: g });
    }
    if m.contains(g) {
        return Ok(ProductWitness { g, x: g, y: one });
    }
    let sg = loc.sg_mask(g);
    for x in m.members() {
        for y in n.members() {
            if loc.mul(x, y) == Some(g) && loc.s_w_mask(&[x, y]) == sg {
                return Ok(ProductWitness { g, x, y });
            }
        }
    }
    Err(ProductError::NotInProduct(g))
}

/// The product statements for one pair: `MN = NM ⊴ L`, `S∩MN = UV` and a
/// splitting of every element, or SKIP lines when the hypothesis fails.
pub fn verify_products(loc: &Locality, m: &PartialNormalSubgroup, n: &PartialNormalSubgroup) -> Report {
    let mut r = Report::new();
    if let Err(e) = check_product_hypothesis(loc, m, n) {
        for id in ["5.1", "5.1(S)", "5.2"] {
            r.push(CheckLine::skip(id, format!("hypothesis-not-met: {e}")));
        }
    } else {
        let mn = set_product(loc, m.members(), n.members());
        let nm = set_product(loc, n.members(), m.members());
        let w = if mn != nm {
            Some(Witness::new(Vec::new(), format!("MN={mn} NM={nm}")))
        } else if !loc.is_partial_normal(&mn) {
            Some(Witness::new(mn.to_vec(), format!("MN={mn} is not partially normal")))
        } else {
            None
        };
        r.check("5.1", w);
        let direct = loc.set_to_mask(&loc.sylow().intersection(&mn)).unwrap_or(0);
        let uv = mask_product(loc, m.t_mask(), n.t_mask());
        r.check(
            "5.1(S)",
            (direct != uv).then(|| Witness::new(Vec::new(), format!("S∩MN={} UV={}", loc.mask_to_set(direct), loc.mask_to_set(uv)))),
        );
        let mut sp = FirstWitness::default();
        for g in &mn {
            if split_product_element(loc, m, n, g).is_err() {
                sp.offer_word(&[g]);
            }
        }
        r.check("5.2", sp.0);
    }
    r.merge(disjointness_criterion(loc, m, n));
    r
}

/// When `M∩N ≤ S`: `M ≤ N_L(S∩N)`, `N ≤ N_L(S∩M)`, and the product conclusions.
pub fn disjointness_criterion(loc: &Locality, m: &PartialNormalSubgroup, n: &PartialNormalSubgroup) -> Report {
    let mut r = Report::new();
    if !m.members().intersection(n.members()).is_subset(loc.sylow()) {
        for id in ["5.3", "5.4"] {
            r.push(CheckLine::skip(id, "hypothesis-not-met: M∩N is not inside S"));
        }
        return r;
    }
    let mut w = FirstWitness::default();
    for x in m.members() {
        if loc.conj_mask(n.t_mask(), x) != Some(n.t_mask()) {
            w.offer_word(&[x]);
        }
    }
    for y in n.members() {
        if loc.conj_mask(m.t_mask(), y) != Some(m.t_mask()) {
            w.offer_word(&[y]);
        }
    }
    r.check("5.3", w.0);
    let w = match product_normal(loc, m, n) {
        Err(e) => Some(Witness::new(Vec::new(), format!("{e}"))),
        Ok(mn) => {
            let direct = mn.t_mask();
            let uv = mask_product(loc, m.t_mask(), n.t_mask());
            if !loc.is_partial_normal(mn.members()) {
                Some(Witness::new(mn.members().to_vec(), "MN is not partially normal"))
            } else if direct != uv {
                Some(Witness::new(Vec::new(), format!("S∩MN={}", mn.t(loc))))
            } else {
                None
            }
        }
    };
    r.check("5.4", w);
    r
}

/// Checks the two hypotheses on `K` (characteristic `p` normalizers, `K ≤ C_L(T)`)
/// and that `K` is a partial normal subgroup of `N_L(T)`.
pub fn check_generated_hypothesis(loc: &Locality, n: &PartialNormalSubgroup, k: &ElemSet) -> Result<(), ProductError> {
    let p = loc.p();
    for &pm in loc.object_masks() {
        let ok = loc.subgroup_as_group(&loc.normalizer(pm)).ok().and_then(|(g, _)| g.is_characteristic_p(p).ok());
        if ok != Some(true) {
            return Err(ProductError::Hypothesis(format!("(1): N_L(P) is not of characteristic p for P={}", loc.mask_to_set(pm))));
        }
    }
    let t = n.t_mask();
    let tl: Vec<usize> = loc.mask_elems(t).collect();
    if !k.iter().all(|x| tl.iter().all(|&s| loc.conj(s, x) == Some(s))) {
        return Err(ProductError::Hypothesis(String::from("(2): K is not inside C_L(T)")));
    }
    let lt = loc.normalizer(t);
    let sub_normal = k.is_subset(&lt)
        && loc.view().is_partial_subgroup(k)
        && lt.iter().all(|h| k.iter().all(|x| loc.conj(x, h).is_none_or(|y| k.contains(y))));
    if !sub_normal {
        return Err(ProductError::Hypothesis(String::from("K is not a partial normal subgroup of N_L(T)")));
    }
    Ok(())
}

/// `⟨K, N⟩` for `K ⊴ N_L(T)` under the hypotheses above.
pub fn generated_with_normal(loc: &Locality, n: &PartialNormalSubgroup, k: &ElemSet) -> Result<PartialNormalSubgroup, ProductError> {
    check_generated_hypothesis(loc, n, k)?;
    let j = generated_partial_subgroup(loc.view(), &k.union(n.members())).members;
    Ok(PartialNormalSubgroup::new_unchecked(loc, j))
}

/// Checks `⟨K,N⟩ ⊴ L`, `S∩⟨K,N⟩ = (S∩K)T`, that `⟨K,N⟩` is the preimage of
/// the normal closure of `Kρ` in `L/N`, and `⟨K,N⟩ = KN = NK` when `S = C_S(T)T`.
pub fn verify_generated(loc: &Locality, n: &PartialNormalSubgroup, k: &ElemSet) -> Report {
    let mut r = Report::new();
    let j = match generated_with_normal(loc, n, k) {
        Ok(j) => j,
        Err(e) => {
            for id in ["5.5", "5.5(S)", "5.5(KN)"] {
                r.push(CheckLine::skip(id, format!("hypothesis-not-met: {e}")));
            }
            return r;
        }
    };
    let mut w = (!loc.is_partial_normal(j.members())).then(|| Witness::new(j.members().to_vec(), format!("<K,N>={}", j.members())));
    if w.is_none() {
        match crate::normal::quotient(loc, n) {
            Ok(q) => {
                let rho = &q.projection;
                let kb = rho.image(q.locality.size(), k);
                let closure = crate::normal::normal_closure(&q.locality, &kb);
                let pre = ElemSet::from_iter(loc.size(), (0..loc.size()).filter(|&g| closure.contains(rho.apply(g))));
                if &pre != j.members() {
                    w = Some(Witness::new(Vec::new(), format!("<K,N>={} preimage={pre}", j.members())));
                }
            }
            Err(e) => w = Some(Witness::new(Vec::new(), format!("{e}"))),
        }
    }
    r.check("5.5", w);
    let sk = loc.set_to_mask(&loc.sylow().intersection(k)).unwrap_or(0);
    let want = mask_product(loc, sk, n.t_mask());
    r.check(
        "5.5(S)",
        (j.t_mask() != want).then(|| Witness::new(Vec::new(), format!("S∩<K,N>={} (S∩K)T={}", j.t(loc), loc.mask_to_set(want)))),
    );
    let t = n.t_mask();
    let cst = MaskIter(loc.full_mask())
        .filter(|&i| MaskIter(t).all(|c| loc.s_mul_pos(i, c) == loc.s_mul_pos(c, i)))
        .fold(0u64, |m, i| m | (1u64 << i));
    if mask_product(loc, cst, t) == loc.full_mask() {
        let kn = set_product(loc, k, n.members());
        let nk = set_product(loc, n.members(), k);
        r.check(
            "5.5(KN)",
            (&kn != j.members() || &nk != j.members()).then(|| Witness::new(Vec::new(), format!("KN={kn} NK={nk}"))),
        );
    } else {
        r.push(CheckLine::skip("5.5(KN)", "hypothesis-not-met: S != C_S(T)T"));
    }
    r
}

/// The partial normal subgroups of `N_L(T)`, in `L`'s indexing.
pub fn normal_subgroups_of_normalizer(loc: &Locality, t: Mask) -> Vec<ElemSet> {
    let lt = loc.normalizer(t);
    let (view, emb) = loc.view().restrict(&lt);
    all_normal_in_view(&view).into_iter().map(|k| k.map(loc.size(), |i| emb[i])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::{all_partial_normal_subgroups, normal_closure};
    use crate::report::Status;
    use crate::zoo::{named_group, named_locality, LOCALITY_NAMES};

    #[test]
    fn o4_v_against_center_closure_is_refused() {
        let loc = named_locality("O4plus2:all").unwrap().locality;
        let o = loc.origin().unwrap().to_vec();
        let v = named_group("O4plus2").unwrap().extra("V").unwrap().map(loc.size(), |x| o.iter().position(|&e| e == x).unwrap());
        let m = normal_closure(&loc, &v);
        let zs = ElemSet::from_iter(loc.size(), loc.sylow().iter().filter(|&s| loc.sylow().iter().all(|t| loc.mul(s, t) == loc.mul(t, s))));
        let n = normal_closure(&loc, &zs);
        let r = verify_products(&loc, &m, &n);
        assert!(r.failures().is_empty(), "{r}");
        // V acts faithfully on S, so it cannot normalize S∩N here
        assert_eq!(r.status("5.1"), Some(Status::Skip));
        match product_normal(&loc, &m, &n) {
            Err(ProductError::Hypothesis(side)) => assert!(side.starts_with("M "), "{side}"),
            other => panic!("{other:?}"),
        }
        let mn = set_product(&loc, m.members(), n.members());
        assert_eq!(mn, set_product(&loc, n.members(), m.members()));
        for g in &mn {
            let w = split_product_element(&loc, &m, &n, g).unwrap();
            assert_eq!(loc.mul(w.x, w.y), Some(g));
        }
    }

    #[test]
    fn trivial_factors() {
        let loc = named_locality("S4:all").unwrap().locality;
        let one = PartialNormalSubgroup::trivial(&loc);
        for n in all_partial_normal_subgroups(&loc) {
            assert_eq!(product_normal(&loc, &one, &n).unwrap().members(), n.members());
            if check_product_hypothesis(&loc, &n, &n).is_ok() {
                assert_eq!(product_normal(&loc, &n, &n).unwrap().members(), n.members());
            }
            let g = n.members().iter().last().unwrap();
            assert_eq!(split_product_element(&loc, &one, &n, g).unwrap(), ProductWitness { g, x: 0, y: g });
            assert_eq!(split_product_element(&loc, &n, &one, g).unwrap(), ProductWitness { g, x: g, y: 0 });
        }
    }

    #[test]
    fn zoo_pairs_and_generated() {
        let mut ran = 0;
        for name in LOCALITY_NAMES {
            let loc = named_locality(name).unwrap().locality;
            let ns = all_partial_normal_subgroups(&loc);
            for m in &ns {
                for n in &ns {
                    let r = verify_products(&loc, m, n);
                    assert!(r.failures().is_empty(), "{name}: {r}");
                    if r.status("5.1") == Some(Status::Pass) {
                        ran += 1;
                    }
                }
                for k in normal_subgroups_of_normalizer(&loc, m.t_mask()) {
                    let r = verify_generated(&loc, m, &k);
                    assert!(r.failures().is_empty(), "{name}: {r}");
                }
            }
        }
        assert!(ran > 0);
    }

    #[test]
    fn generated_refuses_without_centralizing() {
        let loc = named_locality("S4:all").unwrap().locality;
        let ns = all_partial_normal_subgroups(&loc);
        let v4 = ns.iter().find(|n| n.len() == 4).unwrap();
        let all = ElemSet::full(loc.size());
        assert!(matches!(generated_with_normal(&loc, v4, &all), Err(ProductError::Hypothesis(_))));
        assert_eq!(generated_with_normal(&loc, v4, &ElemSet::singleton(24, 0)).unwrap().members(), v4.members());
    }

    #[test]
    fn disjointness_with_center_intersection() {
        let loc = named_locality("C3xD8:sylow").unwrap().locality;
        let zs = ElemSet::from_iter(loc.size(), loc.sylow().iter().filter(|&s| loc.sylow().iter().all(|t| loc.mul(s, t) == loc.mul(t, s))));
        let ns = all_partial_normal_subgroups(&loc);
        let mut found = 0;
        for m in &ns {
            for n in &ns {
                if m.members().intersection(n.members()) != zs || m.members() == &zs || n.members() == &zs {
                    continue;
                }
                let r = disjointness_criterion(&loc, m, n);
                assert!(r.all_pass(), "{r}");
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
