//! Derived constructions: normalizer sublocalities, `O_p(L)`, conjugation of
//! `p`-subgroups into `S`, centralizers and fusion maps.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::{Locality, LocalityError, Mask, MaskIter};
use crate::bitset::ElemSet;
use crate::group::is_p_power;

/// `N_L(R)` as a locality together with its embedding into `L`.
///
/// The objects are `Γ = {N_P(R) : P ∈ Δ}` when `Γ ⊆ Δ`, and otherwise `Δ`
/// itself when `R ⊴ S`; the distinguished subgroup is `N_S(R)`.
pub fn normalizer_sublocality(loc: &Locality, r: &ElemSet) -> Result<(Locality, Vec<usize>), LocalityError> {
    let rm = loc.set_to_mask(r).ok_or(LocalityError::NotSubgroup)?;
    if !loc.mask_is_subgroup(rm) {
        return Err(LocalityError::NotSubgroup);
    }
    match gamma_objects(loc, rm) {
        Some(gamma) => sublocality_with(loc, rm, &gamma),
        None if loc.s_normalizer(rm) == loc.full_mask() => sublocality_with(loc, rm, loc.object_masks()),
        None => Err(LocalityError::Hypothesis(format!("some N_P(R) is not an object, R={r}"))),
    }
}

/// `{N_P(R) : P ∈ Δ}`, or `None` if it is not contained in `Δ`.
pub(crate) fn gamma_objects(loc: &Locality, rm: Mask) -> Option<Vec<Mask>> {
    let ns = loc.s_normalizer(rm);
    let mut out: Vec<Mask> = loc.object_masks().iter().map(|&p| p & ns).collect();
    out.sort_unstable();
    out.dedup();
    out.iter().all(|&m| loc.is_object(m)).then_some(out)
}

/// `N_L(R)` with the given objects (which must lie in `N_S(R)`).
pub(crate) fn sublocality_with(loc: &Locality, rm: Mask, objects: &[Mask]) -> Result<(Locality, Vec<usize>), LocalityError> {
    let nr = loc.normalizer(rm);
    let (view, emb) = loc.view().restrict(&nr);
    let m = emb.len();
    let mut back = alloc::vec![usize::MAX; loc.size()];
    for (i, &x) in emb.iter().enumerate() {
        back[x] = i;
    }
    let ns = loc.s_normalizer(rm);
    let lift = |mask: Mask| ElemSet::from_iter(m, loc.mask_elems(mask).map(|x| back[x]));
    let s = lift(ns);
    let objs: Vec<ElemSet> = objects.iter().map(|&o| lift(o & ns)).collect();
    let sub = Locality::from_parts_unchecked(view, loc.p(), &s, &objs)?;
    Ok((sub, emb))
}

/// `O_p(L)`: the largest subgroup of `S` mapped into itself by every `c_g`,
/// by shrinking `∩ S_g` to a fixpoint.
pub fn op_subgroup(loc: &Locality) -> ElemSet {
    let n = loc.size();
    let mut y = (0..n).fold(loc.full_mask(), |m, g| m & loc.sg_mask(g));
    loop {
        let mut next = y;
        for g in 0..n {
            for b in MaskIter(next) {
                if loc.sconj_pos(g, b).is_none_or(|c| y & (1u64 << c) == 0) {
                    next &= !(1u64 << b);
                }
            }
        }
        if next == y {
            return loc.mask_to_set(y);
        }
        y = next;
    }
}

/// `O_p(L)` by scanning every subgroup of `S` for partial normality and
/// taking the largest.
pub fn op_subgroup_brute_force(loc: &Locality) -> ElemSet {
    let mut best = loc.identity_mask();
    for &x in loc.s_subgroups() {
        if x.count_ones() > best.count_ones() && loc.is_partial_normal(&loc.mask_to_set(x)) {
            best = x;
        }
    }
    loc.mask_to_set(best)
}

/// An element `g` with `H^g ≤ S`, for a `p`-subgroup `H` of `L`.
///
/// Follows the existence proof: an object `U` normalized by `H`, an element
/// moving `U` to an object with Sylow normalizer, then a Sylow step inside that
/// normalizer.
pub fn conjugate_into_s(loc: &Locality, h: &ElemSet) -> Result<usize, LocalityError> {
    let s = loc.sylow();
    if h.is_subset(s) {
        return Ok(loc.identity());
    }
    if !loc.is_subgroup(h) {
        return Err(LocalityError::NotSubgroup);
    }
    if !is_p_power(h.len(), loc.p()) {
        return Err(LocalityError::NotPSubgroup);
    }
    let u = loc.subgroup_core(h);
    let n = loc.size();
    let lands = |g: usize| h.iter().all(|x| loc.conj(x, g).is_some_and(|y| s.contains(y)));
    for g in 0..n {
        let nsu = loc.s_normalizer(u);
        if nsu & !loc.sg_mask(g) != 0 {
            continue;
        }
        let Some(v) = loc.conj_mask(u, g) else { continue };
        let nv = loc.normalizer(v);
        let nsv = loc.s_normalizer(v);
        let Ok((grp, emb)) = loc.subgroup_as_group(&nv) else { continue };
        let p = loc.p();
        let mut pp = 1;
        while nv.len() % (pp * p) == 0 {
            pp *= p;
        }
        if nsv.count_ones() as usize != pp {
            continue;
        }
        // H^g inside N_L(V), then a Sylow conjugation into N_S(V).
        let Some(hg) = h.iter().map(|x| loc.conj(x, g)).collect::<Option<Vec<usize>>>() else { continue };
        let pos_of = |x: usize| emb.iter().position(|&e| e == x);
        let Some(local) = hg.iter().map(|&x| pos_of(x)).collect::<Option<Vec<usize>>>() else { continue };
        let target: BTreeSet<usize> = loc.mask_elems(nsv).filter_map(pos_of).collect();
        for x in 0..grp.order() {
            if local.iter().all(|&a| target.contains(&grp.conj(a, x))) {
                let gx = loc.mul(g, emb[x]);
                if let Some(gx) = gx {
                    if lands(gx) {
                        return Ok(gx);
                    }
                }
            }
        }
    }
    Err(LocalityError::SearchFailed(format!("no conjugator for H={h}")))
}

/// `C_L(T) = {g : T ≤ S_g, t^g = t for t ∈ T}` for `T ≤ S`.
pub fn centralizer_partial(loc: &Locality, t: &ElemSet) -> ElemSet {
    let n = loc.size();
    ElemSet::from_iter(n, (0..n).filter(|&g| t.iter().all(|x| loc.conj(x, g) == Some(x))))
}

/// A set of injective maps between subgroups of `S`, each stored as its sorted
/// graph `[(x, φ(x))]` in element indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FusionMapSet {
    pub maps: BTreeSet<Vec<(usize, usize)>>,
}

impl FusionMapSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Renames the points of every graph.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> FusionMapSet {
        let maps = self
            .maps
            .iter()
            .map(|g| {
                let mut v: Vec<(usize, usize)> = g.iter().map(|&(a, b)| (f(a), f(b))).collect();
                v.sort_unstable();
                v
            })
            .collect();
        FusionMapSet { maps }
    }
}

const UNDEF: u8 = u8::MAX;

/// All conjugation maps `c_g : P → P^g` with `P ≤ S_g`, closed under composition,
/// restriction to subgroups and inversion.
pub fn fusion_maps(loc: &Locality) -> FusionMapSet {
    let sl = loc.s_list().len();
    let subs = loc.s_subgroups().to_vec();
    let dom = |m: &[u8]| m.iter().enumerate().filter(|(_, &v)| v != UNDEF).fold(0u64, |a, (i, _)| a | (1u64 << i));
    let img = |m: &[u8]| m.iter().filter(|&&v| v != UNDEF).fold(0u64, |a, &v| a | (1u64 << v));
    let restrict = |m: &[u8], q: Mask| -> Vec<u8> {
        m.iter().enumerate().map(|(i, &v)| if q & (1u64 << i) != 0 { v } else { UNDEF }).collect()
    };

    let mut set: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut queue: Vec<Vec<u8>> = Vec::new();
    for g in 0..loc.size() {
        let sg = loc.sg_mask(g);
        for &p in &subs {
            if p & !sg != 0 {
                continue;
            }
            let m: Vec<u8> = (0..sl)
                .map(|i| if p & (1u64 << i) != 0 { loc.sconj_pos(g, i).unwrap() as u8 } else { UNDEF })
                .collect();
            if set.insert(m.clone()) {
                queue.push(m);
            }
        }
    }
    while let Some(m) = queue.pop() {
        let mut fresh: Vec<Vec<u8>> = Vec::new();
        let mut inv = alloc::vec![UNDEF; sl];
        for (i, &v) in m.iter().enumerate() {
            if v != UNDEF {
                inv[v as usize] = i as u8;
            }
        }
        fresh.push(inv);
        let d = dom(&m);
        for &q in &subs {
            if q & !d == 0 && q != d {
                fresh.push(restrict(&m, q));
            }
        }
        let im = img(&m);
        for other in &set {
            // m then other
            if im & !dom(other) == 0 {
                fresh.push(m.iter().map(|&v| if v == UNDEF { UNDEF } else { other[v as usize] }).collect());
            }
            // other then m
            if img(other) & !d == 0 {
                fresh.push(other.iter().map(|&v| if v == UNDEF { UNDEF } else { m[v as usize] }).collect());
            }
        }
        for f in fresh {
            if set.insert(f.clone()) {
                queue.push(f);
            }
        }
    }
    let s = loc.s_list();
    let maps = set
        .into_iter()
        .map(|m| {
            let mut v: Vec<(usize, usize)> = m
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != UNDEF)
                .map(|(i, &x)| (s[i], s[x as usize]))
                .collect();
            v.sort_unstable();
            v
        })
        .collect();
    FusionMapSet { maps }
}
