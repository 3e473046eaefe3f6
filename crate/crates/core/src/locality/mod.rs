//! Objective partial groups and localities `(L, Δ, S)`.
//!
//! A [`Locality`] wraps a [`PartialGroupView`] whose oracle is the "raw"
//! description of the domain (for instance the chain criterion computed in an
//! ambient group). From it the constructor derives, once, the subgroups `S_g`
//! and the conjugation maps `c_g : S_g → S`. Subsets of `S` are handled as
//! 64-bit masks over the positions of `S`'s members, so `|S| ≤ 64`.

mod ops;
mod verify;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::group::{is_p_power, is_prime, FiniteGroup, GroupError};
use crate::partial::{Oracle, PartialGroupError, PartialGroupView, NONE};

pub(crate) use ops::sublocality_with;
pub use ops::{FusionMapSet, conjugate_into_s, centralizer_partial, fusion_maps, normalizer_sublocality, op_subgroup, op_subgroup_brute_force};
pub use verify::{verify_locality, verify_objectivity, verify_objectivity_part};

/// A subset of `S`, as a bit mask over positions in `S`.
pub type Mask = u64;

const NO_POS: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalityError {
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("S is not a subgroup")]
    SylowNotSubgroup,
    #[error("S has order {0}, which is not a power of p")]
    NotPGroup(usize),
    #[error("S has order {0}; at most 64 is supported")]
    SylowTooLarge(usize),
    #[error("object {0} is not a subgroup of S")]
    ObjectNotSubgroup(String),
    #[error("S is not an object")]
    SNotObject,
    #[error("object set is not closed under conjugation: {0}")]
    DeltaNotClosed(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    PartialGroup(#[from] PartialGroupError),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("not a subgroup of the locality")]
    NotSubgroup,
    #[error("not a p-subgroup")]
    NotPSubgroup,
    #[error("search failed: {0}")]
    SearchFailed(String),
}

/// A set `Δ` of subgroups of a `p`-subgroup `S` of an ambient group, in the
/// group's indexing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectSet {
    pub p: usize,
    pub s: ElemSet,
    pub members: Vec<ElemSet>,
}

impl ObjectSet {
    pub fn new(p: usize, s: ElemSet, members: impl IntoIterator<Item = ElemSet>) -> Self {
        let set: BTreeSet<ElemSet> = members.into_iter().collect();
        let mut members: Vec<ElemSet> = set.into_iter().collect();
        sort_subgroups(&mut members);
        ObjectSet { p, s, members }
    }

    pub fn contains(&self, x: &ElemSet) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub(crate) fn sort_subgroups(v: &mut [ElemSet]) {
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
}

/// The smallest set of subgroups of `S` that contains `seed` and `S` and is closed
/// under passing from `X` to any subgroup of `S` containing a `G`-conjugate of `X`.
pub fn delta_closure(g: &FiniteGroup, s: &ElemSet, p: usize, seed: &[ElemSet]) -> ObjectSet {
    let subs = g.subgroups_within(s);
    let mut found: BTreeSet<ElemSet> = BTreeSet::new();
    let mut queue: Vec<ElemSet> = Vec::new();
    for x in seed.iter().chain(core::iter::once(s)) {
        if found.insert(x.clone()) {
            queue.push(x.clone());
        }
    }
    while let Some(x) = queue.pop() {
        for h in 0..g.order() {
            let z = g.conjugate_set(&x, h);
            if !z.is_subset(s) {
                continue;
            }
            for u in &subs {
                if z.is_subset(u) && found.insert(u.clone()) {
                    queue.push(u.clone());
                }
            }
        }
    }
    ObjectSet::new(p, s.clone(), found)
}

/// All non-identity subgroups of `S`.
pub fn delta_all_nonidentity(g: &FiniteGroup, s: &ElemSet, p: usize) -> ObjectSet {
    ObjectSet::new(p, s.clone(), g.subgroups_within(s).into_iter().filter(|u| u.len() > 1))
}

/// Returns a violation of closure under `G`-conjugation, if any.
fn delta_closure_violation(g: &FiniteGroup, delta: &ObjectSet) -> Option<String> {
    let subs = g.subgroups_within(&delta.s);
    for x in &delta.members {
        for h in 0..g.order() {
            let z = g.conjugate_set(x, h);
            if !z.is_subset(&delta.s) {
                continue;
            }
            for u in &subs {
                if z.is_subset(u) && !delta.contains(u) {
                    return Some(alloc::format!("X={x} g={h} misses overgroup {u}"));
                }
            }
        }
    }
    None
}

/// Everything needed to decide the domain of a group-derived locality inside `G`.
struct GroupChain {
    g: FiniteGroup,
    emb: Vec<usize>,
    s_list: Vec<usize>,
    s_pos: Vec<u8>,
    objects: Vec<Mask>,
}

impl GroupChain {
    fn s_w_mask(&self, w: &[usize]) -> Mask {
        let mut cur = self.g.identity();
        let mut mask: Mask = if self.s_list.len() == 64 { !0 } else { (1u64 << self.s_list.len()) - 1 };
        for &i in w {
            cur = self.g.mul(cur, self.emb[i]);
            let mut m = mask;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                if self.s_pos[self.g.conj(self.s_list[b], cur)] == NO_POS {
                    mask &= !(1u64 << b);
                }
            }
            if mask == 0 {
                break;
            }
        }
        mask
    }
}

/// The partial group `L = {g ∈ G : S ∩ S^g ∈ Δ}` with domain given by the chain
/// criterion, re-indexed in increasing `G` order.
pub fn locality_from_group(g: &FiniteGroup, delta: &ObjectSet) -> Result<Locality, LocalityError> {
    let p = delta.p;
    let s = &delta.s;
    if !is_prime(p) {
        return Err(LocalityError::NotPrime(p));
    }
    if !g.is_subgroup(s) {
        return Err(LocalityError::SylowNotSubgroup);
    }
    if !is_p_power(s.len(), p) {
        return Err(LocalityError::NotPGroup(s.len()));
    }
    if s.len() > 64 {
        return Err(LocalityError::SylowTooLarge(s.len()));
    }
    if !delta.contains(s) {
        return Err(LocalityError::SNotObject);
    }
    for x in &delta.members {
        if !x.is_subset(s) || !g.is_subgroup(x) {
            return Err(LocalityError::ObjectNotSubgroup(alloc::format!("{x}")));
        }
    }
    if let Some(v) = delta_closure_violation(g, delta) {
        return Err(LocalityError::DeltaNotClosed(v));
    }
    let s_list = s.to_vec();
    let mut s_pos = alloc::vec![NO_POS; g.order()];
    for (i, &x) in s_list.iter().enumerate() {
        s_pos[x] = i as u8;
    }
    let to_mask = |x: &ElemSet| x.iter().fold(0u64, |m, e| m | (1u64 << s_pos[e]));
    let mut objects: Vec<Mask> = delta.members.iter().map(to_mask).collect();
    objects.sort_unstable();
    // S_g = S ∩ S^{g⁻¹}
    let emb: Vec<usize> = (0..g.order())
        .filter(|&h| {
            let m = s_list
                .iter()
                .enumerate()
                .filter(|&(_, &x)| s_pos[g.conj(x, h)] != NO_POS)
                .fold(0u64, |m, (i, _)| m | (1u64 << i));
            objects.binary_search(&m).is_ok()
        })
        .collect();
    let n = emb.len();
    let mut back = alloc::vec![NONE; g.order()];
    for (i, &h) in emb.iter().enumerate() {
        back[h] = i as u32;
    }
    let chain = Arc::new(GroupChain { g: g.clone(), emb: emb.clone(), s_list, s_pos, objects });
    let c2 = chain.clone();
    let oracle = Oracle::Custom {
        name: String::from("objective"),
        horizon: None,
        f: Arc::new(move |w: &[usize]| c2.objects.binary_search(&c2.s_w_mask(w)).is_ok()),
    };
    let labels = g.labels().map(|l| emb.iter().map(|&h| l[h].clone()).collect());
    let view = PartialGroupView::from_oracle(
        n,
        back[g.identity()] as usize,
        emb.iter().map(|&h| back[g.inv(h)] as usize).collect(),
        |a, b| back[g.mul(emb[a], emb[b])] as usize,
        oracle,
        labels,
    )?;
    let s_l = s.map(n, |x| back[x] as usize);
    let objs: Vec<ElemSet> = delta.members.iter().map(|x| x.map(n, |e| back[e] as usize)).collect();
    let mut loc = Locality::new(view, p, &s_l, &objs)?;
    loc.origin = Some(emb);
    Ok(loc)
}

/// A finite objective partial group with a distinguished `p`-subgroup `S`
/// containing every object; a locality when `S ∈ Δ` and `S` is a maximal
/// `p`-subgroup.
#[derive(Clone)]
pub struct Locality {
    view: PartialGroupView,
    p: usize,
    s: ElemSet,
    s_list: Vec<usize>,
    s_pos: Vec<u8>,
    s_mul: Vec<u8>,
    objects: Vec<Mask>,
    sg: Vec<Mask>,
    // n × |S| local images under c_g, NO_POS outside S_g
    sconj: Vec<u8>,
    // n × n conjugation table x^g, NONE when (g⁻¹,x,g) is rejected
    conj: Vec<u32>,
    s_subgroups: Vec<Mask>,
    origin: Option<Vec<usize>>,
}

impl core::fmt::Debug for Locality {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Locality")
            .field("size", &self.size())
            .field("p", &self.p)
            .field("s", &self.s)
            .field("objects", &self.objects.len())
            .finish()
    }
}

impl Locality {
    /// A locality candidate: validates `S` and the objects and requires `S ∈ Δ`.
    /// The axioms themselves are checked by the verifiers.
    pub fn new(view: PartialGroupView, p: usize, s: &ElemSet, objects: &[ElemSet]) -> Result<Self, LocalityError> {
        let loc = Self::build(view, p, s, objects, true)?;
        if !loc.objects.contains(&loc.full_mask()) {
            return Err(LocalityError::SNotObject);
        }
        Ok(loc)
    }

    /// An objective partial group whose objects lie in `S`; `S` need not be an object.
    pub fn objective(view: PartialGroupView, p: usize, s: &ElemSet, objects: &[ElemSet]) -> Result<Self, LocalityError> {
        Self::build(view, p, s, objects, true)
    }

    /// Skips the validation of `p`, the order of `S` and the objects. `S` must
    /// still be closed under the pair table, since its multiplication is tabulated.
    pub fn from_parts_unchecked(view: PartialGroupView, p: usize, s: &ElemSet, objects: &[ElemSet]) -> Result<Self, LocalityError> {
        Self::build(view, p, s, objects, false)
    }

    fn build(view: PartialGroupView, p: usize, s: &ElemSet, objects: &[ElemSet], strict: bool) -> Result<Self, LocalityError> {
        let n = view.size();
        if strict && !is_prime(p) {
            return Err(LocalityError::NotPrime(p));
        }
        if s.len() > 64 {
            return Err(LocalityError::SylowTooLarge(s.len()));
        }
        let s_list = s.to_vec();
        let sl = s_list.len();
        let mut s_pos = alloc::vec![NO_POS; n];
        for (i, &x) in s_list.iter().enumerate() {
            s_pos[x] = i as u8;
        }
        let mut s_mul = alloc::vec![NO_POS; sl * sl];
        for (i, &a) in s_list.iter().enumerate() {
            for (j, &b) in s_list.iter().enumerate() {
                match view.mul(a, b) {
                    Some(c) if s_pos[c] != NO_POS => s_mul[i * sl + j] = s_pos[c],
                    _ => return Err(LocalityError::SylowNotSubgroup),
                }
            }
        }
        if !s.contains(view.identity()) || s.iter().any(|x| !s.contains(view.inv(x))) {
            return Err(LocalityError::SylowNotSubgroup);
        }
        if strict && !is_p_power(sl, p) {
            return Err(LocalityError::NotPGroup(sl));
        }
        let mut obj = Vec::with_capacity(objects.len());
        for x in objects {
            if !x.is_subset(s) {
                return Err(LocalityError::ObjectNotSubgroup(alloc::format!("{x}")));
            }
            obj.push(x.iter().fold(0u64, |m, e| m | (1u64 << s_pos[e])));
        }
        obj.sort_unstable();
        obj.dedup();

        let mut conj = alloc::vec![NONE; n * n];
        for g in 0..n {
            let gi = view.inv(g);
            for x in 0..n {
                let w = [gi, x, g];
                if view.in_domain(&w) {
                    if let Some(y) = view.fold(&w) {
                        conj[g * n + x] = y as u32;
                    }
                }
            }
        }
        let mut sg = alloc::vec![0u64; n];
        let mut sconj = alloc::vec![NO_POS; n * sl.max(1)];
        for g in 0..n {
            for (i, &x) in s_list.iter().enumerate() {
                let y = conj[g * n + x];
                if y != NONE && s_pos[y as usize] != NO_POS {
                    sg[g] |= 1u64 << i;
                    sconj[g * sl + i] = s_pos[y as usize];
                }
            }
        }
        let mut loc = Locality {
            view,
            p,
            s: s.clone(),
            s_list,
            s_pos,
            s_mul,
            objects: obj,
            sg,
            sconj,
            conj,
            s_subgroups: Vec::new(),
            origin: None,
        };
        loc.s_subgroups = loc.enumerate_s_subgroups();
        if strict {
            for &m in &loc.objects {
                if !loc.mask_is_subgroup(m) {
                    return Err(LocalityError::ObjectNotSubgroup(alloc::format!("{}", loc.mask_to_set(m))));
                }
            }
        }
        Ok(loc)
    }

    /// Same structure with a different object set (no validation).
    pub fn with_objects_unchecked(&self, objects: &[ElemSet]) -> Locality {
        let mut out = self.clone();
        let mut obj: Vec<Mask> = objects.iter().map(|x| self.set_to_mask(x).expect("object inside S")).collect();
        obj.sort_unstable();
        obj.dedup();
        out.objects = obj;
        out
    }

    /// Same structure with a different distinguished subgroup `S'` and the same
    /// objects (which must lie in `S'`).
    pub fn with_sylow_unchecked(&self, s: &ElemSet) -> Result<Locality, LocalityError> {
        let objs = self.objects();
        Self::from_parts_unchecked(self.view.clone(), self.p, s, &objs)
    }

    pub fn view(&self) -> &PartialGroupView {
        &self.view
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.view.size()
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.view.identity()
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.view.inv(x)
    }

    #[inline]
    pub fn mul(&self, f: usize, g: usize) -> Option<usize> {
        self.view.mul(f, g)
    }

    #[inline]
    pub fn in_domain(&self, w: &[usize]) -> bool {
        self.view.in_domain(w)
    }

    /// `Π(w)` if `w` is in the domain.
    #[inline]
    pub fn prod(&self, w: &[usize]) -> Option<usize> {
        if self.view.in_domain(w) {
            self.view.fold(w)
        } else {
            None
        }
    }

    /// `x^g`, if defined.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> Option<usize> {
        let v = self.conj[g * self.size() + x];
        (v != NONE).then_some(v as usize)
    }

    pub fn d_of(&self, g: usize) -> ElemSet {
        ElemSet::from_iter(self.size(), (0..self.size()).filter(|&x| self.conj(x, g).is_some()))
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn sylow(&self) -> &ElemSet {
        &self.s
    }

    /// Members of `S` in increasing order; position `i` is bit `i` of a [`Mask`].
    pub fn s_list(&self) -> &[usize] {
        &self.s_list
    }

    pub fn origin(&self) -> Option<&[usize]> {
        self.origin.as_deref()
    }

    pub fn set_origin(&mut self, origin: Option<Vec<usize>>) {
        self.origin = origin;
    }

    pub fn label(&self, x: usize) -> String {
        self.view.label(x)
    }

    #[inline]
    pub fn full_mask(&self) -> Mask {
        let sl = self.s_list.len();
        if sl == 64 {
            !0
        } else {
            (1u64 << sl) - 1
        }
    }

    #[inline]
    pub fn identity_mask(&self) -> Mask {
        1u64 << self.s_pos[self.identity()]
    }

    /// Position of `x` in `S`, if `x ∈ S`.
    #[inline]
    pub fn s_pos(&self, x: usize) -> Option<usize> {
        let p = self.s_pos[x];
        (p != NO_POS).then_some(p as usize)
    }

    pub fn mask_to_set(&self, m: Mask) -> ElemSet {
        let mut out = ElemSet::new(self.size());
        let mut m = m;
        while m != 0 {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            out.insert(self.s_list[b]);
        }
        out
    }

    /// The mask of a subset of `S`; `None` if the set leaves `S`.
    pub fn set_to_mask(&self, x: &ElemSet) -> Option<Mask> {
        let mut m = 0u64;
        for e in x {
            let p = self.s_pos.get(e).copied().unwrap_or(NO_POS);
            if p == NO_POS {
                return None;
            }
            m |= 1u64 << p;
        }
        Some(m)
    }

    pub fn mask_elems(&self, m: Mask) -> impl Iterator<Item = usize> + '_ {
        MaskIter(m).map(move |b| self.s_list[b])
    }

    /// The object set as masks, sorted.
    pub fn object_masks(&self) -> &[Mask] {
        &self.objects
    }

    pub fn objects(&self) -> Vec<ElemSet> {
        let mut v: Vec<ElemSet> = self.objects.iter().map(|&m| self.mask_to_set(m)).collect();
        sort_subgroups(&mut v);
        v
    }

    #[inline]
    pub fn is_object(&self, m: Mask) -> bool {
        self.objects.binary_search(&m).is_ok()
    }

    /// Every subgroup of `S`, sorted by order then mask.
    pub fn s_subgroups(&self) -> &[Mask] {
        &self.s_subgroups
    }

    /// `S_g` as a mask.
    #[inline]
    pub fn sg_mask(&self, g: usize) -> Mask {
        self.sg[g]
    }

    pub fn s_g(&self, g: usize) -> ElemSet {
        self.mask_to_set(self.sg[g])
    }

    /// Local position of `c_g(x)` for the position `i` of some `x ∈ S_g`.
    #[inline]
    pub fn sconj_pos(&self, g: usize, i: usize) -> Option<usize> {
        let v = self.sconj[g * self.s_list.len() + i];
        (v != NO_POS).then_some(v as usize)
    }

    /// `c_g(X)` for `X ⊆ S_g`; `None` if `X ⊄ S_g`.
    #[inline]
    pub fn conj_mask(&self, m: Mask, g: usize) -> Option<Mask> {
        if m & !self.sg[g] != 0 {
            return None;
        }
        let sl = self.s_list.len();
        let row = &self.sconj[g * sl..(g + 1) * sl];
        Some(MaskIter(m).fold(0u64, |acc, b| acc | (1u64 << row[b])))
    }

    /// `S_w` as a mask: points of `S` whose trajectory under the entries of `w`
    /// stays in `S`.
    pub fn s_w_mask(&self, w: &[usize]) -> Mask {
        let sl = self.s_list.len();
        let mut alive = self.full_mask();
        let mut pos: [u8; 64] = [0; 64];
        for (i, p) in pos.iter_mut().enumerate().take(sl) {
            *p = i as u8;
        }
        for &g in w {
            let row = &self.sconj[g * sl..(g + 1) * sl];
            let mut m = alive;
            while m != 0 {
                let b = m.trailing_zeros() as usize;
                m &= m - 1;
                let y = row[pos[b] as usize];
                if y == NO_POS {
                    alive &= !(1u64 << b);
                } else {
                    pos[b] = y;
                }
            }
            if alive == 0 {
                break;
            }
        }
        alive
    }

    pub fn s_w(&self, w: &[usize]) -> ElemSet {
        self.mask_to_set(self.s_w_mask(w))
    }

    /// Domain membership by the object criterion `S_w ∈ Δ`.
    #[inline]
    pub fn objective_accepts(&self, w: &[usize]) -> bool {
        self.is_object(self.s_w_mask(w))
    }

    /// Multiplication of positions in `S`.
    #[inline]
    pub fn s_mul_pos(&self, i: usize, j: usize) -> usize {
        self.s_mul[i * self.s_list.len() + j] as usize
    }

    /// Subgroup of `S` generated by a mask.
    pub fn mask_closure(&self, m: Mask) -> Mask {
        let gens: Vec<usize> = MaskIter(m).collect();
        let mut out = self.identity_mask();
        let mut list = alloc::vec![self.s_pos[self.identity()] as usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            i += 1;
            for &g in &gens {
                let y = self.s_mul_pos(x, g);
                if out & (1u64 << y) == 0 {
                    out |= 1u64 << y;
                    list.push(y);
                }
            }
        }
        out
    }

    pub fn mask_is_subgroup(&self, m: Mask) -> bool {
        m & self.identity_mask() != 0 && MaskIter(m).all(|a| MaskIter(m).all(|b| m & (1u64 << self.s_mul_pos(a, b)) != 0))
    }

    fn enumerate_s_subgroups(&self) -> Vec<Mask> {
        let sl = self.s_list.len();
        let mut cyclic: Vec<usize> = Vec::new();
        let mut seen: BTreeSet<Mask> = BTreeSet::new();
        for i in 0..sl {
            if seen.insert(self.mask_closure(1u64 << i)) {
                cyclic.push(i);
            }
        }
        let mut found: BTreeSet<Mask> = BTreeSet::new();
        let triv = self.identity_mask();
        found.insert(triv);
        let mut queue = alloc::vec![triv];
        while let Some(k) = queue.pop() {
            for &c in &cyclic {
                if k & (1u64 << c) != 0 {
                    continue;
                }
                let j = self.mask_closure(k | (1u64 << c));
                if found.insert(j) {
                    queue.push(j);
                }
            }
        }
        let mut v: Vec<Mask> = found.into_iter().collect();
        v.sort_by_key(|&m| (m.count_ones(), m));
        v
    }

    /// `N_L(X, Y) = {g : X ⊆ S_g, X^g ⊆ Y}` for subsets of `S`.
    pub fn transporter(&self, x: Mask, y: Mask) -> ElemSet {
        ElemSet::from_iter(
            self.size(),
            (0..self.size()).filter(|&g| self.conj_mask(x, g).is_some_and(|z| z & !y == 0)),
        )
    }

    /// `N_L(X)` for `X ≤ S`.
    pub fn normalizer(&self, x: Mask) -> ElemSet {
        ElemSet::from_iter(self.size(), (0..self.size()).filter(|&g| self.conj_mask(x, g) == Some(x)))
    }

    /// `N_S(X)` as a mask.
    pub fn s_normalizer(&self, x: Mask) -> Mask {
        MaskIter(self.full_mask())
            .filter(|&b| self.conj_mask(x, self.s_list[b]) == Some(x))
            .fold(0, |m, b| m | (1u64 << b))
    }

    /// The largest subset `Q*` of `∩_{h∈H} S_h` mapped into itself by every `c_h`.
    pub fn subgroup_core(&self, h: &ElemSet) -> Mask {
        let mut q = h.iter().fold(self.full_mask(), |m, x| m & self.sg[x]);
        loop {
            let mut next = q;
            for x in h {
                let sl = self.s_list.len();
                let row = &self.sconj[x * sl..(x + 1) * sl];
                for b in MaskIter(next) {
                    if q & (1u64 << row[b]) == 0 {
                        next &= !(1u64 << b);
                    }
                }
            }
            if next == q {
                return q;
            }
            q = next;
        }
    }

    /// Subgroup test: `H` closed under inversion and defined pairs, and `Q* ∈ Δ`.
    pub fn is_subgroup(&self, h: &ElemSet) -> bool {
        self.view.is_partial_subgroup(h)
            && h.iter().all(|a| h.iter().all(|b| self.mul(a, b).is_some()))
            && self.is_object(self.subgroup_core(h))
    }

    /// A subgroup `H` of `L` as a group (identity first, then increasing index),
    /// with the embedding into `L`.
    pub fn subgroup_as_group(&self, h: &ElemSet) -> Result<(FiniteGroup, Vec<usize>), LocalityError> {
        let mut emb = alloc::vec![self.identity()];
        emb.extend(h.iter().filter(|&x| x != self.identity()));
        if !h.contains(self.identity()) {
            return Err(LocalityError::NotSubgroup);
        }
        let m = emb.len();
        let mut back = alloc::vec![NONE; self.size()];
        for (i, &x) in emb.iter().enumerate() {
            back[x] = i as u32;
        }
        let mut table = Vec::with_capacity(m * m);
        for &a in &emb {
            for &b in &emb {
                match self.mul(a, b) {
                    Some(c) if back[c] != NONE => table.push(back[c]),
                    _ => return Err(LocalityError::NotSubgroup),
                }
            }
        }
        let labels = self.view.labels().map(|l| emb.iter().map(|&x| l[x].clone()).collect());
        let g = FiniteGroup::from_table(m, table, labels).map_err(|_| LocalityError::NotSubgroup)?;
        Ok((g, emb))
    }

    /// True if `N` is a partial subgroup stable under every defined conjugation.
    pub fn is_partial_normal(&self, nset: &ElemSet) -> bool {
        let n = self.size();
        self.view.is_partial_subgroup(nset)
            && (0..n).all(|g| nset.iter().all(|x| self.conj(x, g).is_none_or(|y| nset.contains(y))))
    }
}

/// Iterates the set bits of a mask.
#[derive(Clone, Copy)]
pub struct MaskIter(pub Mask);

impl Iterator for MaskIter {
    type Item = usize;
    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(b)
    }
}

#[cfg(test)]
mod tests;
