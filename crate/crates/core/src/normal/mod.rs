//! Partial normal subgroups of a locality: the ↑-relation, ↑-maximal
//! elements, the Frattini decomposition and maximal cosets.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::locality::{Locality, Mask};
use crate::partial::{generated_partial_subgroup, PartialGroupView};

mod quotient;
mod theta;
mod verify;

pub use quotient::{
    first_isomorphism, quotient, subgroup_correspondence, verify_first_isomorphism, verify_projection, verify_quotient,
    Projection, Quotient, QuotientError, CORRESPONDENCE_MAX_BLOCKS,
};
pub use verify::{verify_normal_theory, NORMAL_WORD_BOUND};
pub use theta::{theta_parts, theta_quotient, verify_theta, ThetaQuotient};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalError {
    #[error("not a partial normal subgroup: {0}")]
    NotNormal(String),
    #[error("no Frattini decomposition for element {0}")]
    NoDecomposition(usize),
    #[error("maximal cosets do not partition L: {0}")]
    NotPartition(String),
}

/// A partial normal subgroup `N` together with `T = S ∩ N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialNormalSubgroup {
    members: ElemSet,
    t: Mask,
}

impl PartialNormalSubgroup {
    pub fn new(loc: &Locality, members: ElemSet) -> Result<Self, NormalError> {
        if members.capacity() != loc.size() || !loc.is_partial_normal(&members) {
            return Err(NormalError::NotNormal(format!("{members}")));
        }
        Ok(Self::new_unchecked(loc, members))
    }

    pub fn new_unchecked(loc: &Locality, members: ElemSet) -> Self {
        let t = loc.s_list().iter().enumerate().filter(|(_, &x)| members.contains(x)).fold(0u64, |m, (i, _)| m | (1u64 << i));
        PartialNormalSubgroup { members, t }
    }

    pub fn trivial(loc: &Locality) -> Self {
        Self::new_unchecked(loc, ElemSet::singleton(loc.size(), loc.identity()))
    }

    pub fn whole(loc: &Locality) -> Self {
        Self::new_unchecked(loc, ElemSet::full(loc.size()))
    }

    pub fn members(&self) -> &ElemSet {
        &self.members
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `T = S ∩ N` as a mask over `S`.
    pub fn t_mask(&self) -> Mask {
        self.t
    }

    pub fn t(&self, loc: &Locality) -> ElemSet {
        loc.mask_to_set(self.t)
    }
}

/// Alternates product closure and closure under defined conjugation in a view.
pub fn normal_closure_in_view(view: &PartialGroupView, x: &ElemSet) -> ElemSet {
    closure_with(view, x, |y, g| {
        let w = [view.inv(g), y, g];
        if view.in_domain(&w) { view.fold(&w) } else { None }
    })
}

fn closure_with(view: &PartialGroupView, x: &ElemSet, conj: impl Fn(usize, usize) -> Option<usize>) -> ElemSet {
    let n = view.size();
    let mut cur = x.clone();
    cur.insert(view.identity());
    loop {
        let mut next = generated_partial_subgroup(view, &cur).members;
        let mut queue = next.to_vec();
        while let Some(y) = queue.pop() {
            for g in 0..n {
                if let Some(z) = conj(y, g) {
                    if next.insert(z) {
                        queue.push(z);
                    }
                }
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

fn all_normal_with(view: &PartialGroupView, closure: impl Fn(&ElemSet) -> ElemSet) -> Vec<ElemSet> {
    let n = view.size();
    let mut found: BTreeSet<ElemSet> = BTreeSet::new();
    let mut atoms: Vec<ElemSet> = Vec::new();
    for x in 0..n {
        let c = closure(&ElemSet::singleton(n, x));
        if found.insert(c.clone()) {
            atoms.push(c);
        }
    }
    let mut queue: Vec<ElemSet> = found.iter().cloned().collect();
    while let Some(a) = queue.pop() {
        for b in &atoms {
            if b.is_subset(&a) {
                continue;
            }
            let j = closure(&a.union(b));
            if found.insert(j.clone()) {
                queue.push(j);
            }
        }
    }
    let mut v: Vec<ElemSet> = found.into_iter().collect();
    v.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
    v
}

/// Every partial normal subgroup of a view: closures of single elements and
/// all their joins, sorted by size then members.
pub fn all_normal_in_view(view: &PartialGroupView) -> Vec<ElemSet> {
    all_normal_with(view, |x| normal_closure_in_view(view, x))
}

pub fn normal_closure(loc: &Locality, x: &ElemSet) -> PartialNormalSubgroup {
    PartialNormalSubgroup::new_unchecked(loc, closure_with(loc.view(), x, |y, g| loc.conj(y, g)))
}

pub fn all_partial_normal_subgroups(loc: &Locality) -> Vec<PartialNormalSubgroup> {
    all_normal_with(loc.view(), |x| closure_with(loc.view(), x, |y, g| loc.conj(y, g)))
        .into_iter()
        .map(|m| PartialNormalSubgroup::new_unchecked(loc, m))
        .collect()
}

/// A pair `(f, P)` with `P ∈ Δ` and `P ≤ S_f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpPair {
    pub f: usize,
    pub p: Mask,
}

impl UpPair {
    pub fn is_valid(&self, loc: &Locality) -> bool {
        self.f < loc.size() && loc.is_object(self.p) && self.p & !loc.sg_mask(self.f) == 0
    }
}

/// Witnesses `(x, y)` with `x ∈ N_N(P,Q)`, `y ∈ N_N(P^f,Q^g)` and `xg = fy`.
pub fn up_witness(loc: &Locality, n: &PartialNormalSubgroup, a: UpPair, b: UpPair) -> Option<(usize, usize)> {
    let pf = loc.conj_mask(a.p, a.f)?;
    let qg = loc.conj_mask(b.p, b.f)?;
    let fi = loc.inv(a.f);
    for x in n.members() {
        if !loc.conj_mask(a.p, x).is_some_and(|px| px & !b.p == 0) {
            continue;
        }
        let Some(xg) = loc.mul(x, b.f) else { continue };
        // fy = xg forces y = f⁻¹(xg)
        let Some(y) = loc.mul(fi, xg) else { continue };
        if n.contains(y)
            && loc.mul(a.f, y) == Some(xg)
            && loc.conj_mask(pf, y).is_some_and(|m| m & !qg == 0)
        {
            return Some((x, y));
        }
    }
    None
}

pub fn up_rel(loc: &Locality, n: &PartialNormalSubgroup, a: UpPair, b: UpPair) -> bool {
    up_witness(loc, n, a, b).is_some()
}

/// `f` is ↑-maximal if `(f, S_f)` relates to no pair with a larger subgroup.
pub fn is_up_maximal(loc: &Locality, n: &PartialNormalSubgroup, f: usize) -> bool {
    let a = UpPair { f, p: loc.sg_mask(f) };
    let size = a.p.count_ones();
    (0..loc.size()).all(|g| {
        let sg = loc.sg_mask(g);
        sg.count_ones() <= size || !up_rel(loc, n, a, UpPair { f: g, p: sg })
    })
}

/// `Nf = {Π(y,f) : y ∈ N, (y,f) ∈ D}`.
pub fn coset(loc: &Locality, n: &PartialNormalSubgroup, f: usize) -> ElemSet {
    ElemSet::from_iter(loc.size(), n.members().iter().filter_map(|y| loc.mul(y, f)))
}

/// `fN`.
pub fn right_coset(loc: &Locality, n: &PartialNormalSubgroup, f: usize) -> ElemSet {
    ElemSet::from_iter(loc.size(), n.members().iter().filter_map(|y| loc.mul(f, y)))
}

/// `NfN = {Π(x,f,y)}`.
pub fn double_coset(loc: &Locality, n: &PartialNormalSubgroup, f: usize) -> ElemSet {
    let mut out = ElemSet::new(loc.size());
    for x in n.members() {
        for y in n.members() {
            if let Some(v) = loc.prod(&[x, f, y]) {
                out.insert(v);
            }
        }
    }
    out
}

/// The partition of `L` into maximal cosets of `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetPartition {
    /// Blocks ordered by representative.
    pub blocks: Vec<ElemSet>,
    /// Smallest ↑-maximal member of each block.
    pub reps: Vec<usize>,
    pub block_of: Vec<usize>,
}

impl CosetPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// ↑-maximal elements, maximal cosets and Frattini decompositions for one `N`.
#[derive(Debug, Clone)]
pub struct CosetAnalysis<'a> {
    pub loc: &'a Locality,
    pub n: &'a PartialNormalSubgroup,
    pub up_max: ElemSet,
}

impl<'a> CosetAnalysis<'a> {
    pub fn new(loc: &'a Locality, n: &'a PartialNormalSubgroup) -> Self {
        let up_max = ElemSet::from_iter(loc.size(), (0..loc.size()).filter(|&f| is_up_maximal(loc, n, f)));
        CosetAnalysis { loc, n, up_max }
    }

    /// `f = Π(x, g)` with `x ∈ N`, `g` ↑-maximal and `S_f = S_{(x,g)}`.
    /// Returns `(1, f)` when `f` itself is ↑-maximal, otherwise the smallest `g`
    /// and then the smallest `x`.
    pub fn frattini(&self, f: usize) -> Result<(usize, usize), NormalError> {
        let loc = self.loc;
        if self.up_max.contains(f) {
            return Ok((loc.identity(), f));
        }
        let sf = loc.sg_mask(f);
        for g in &self.up_max {
            for x in self.n.members() {
                if loc.mul(x, g) == Some(f) && loc.s_w_mask(&[x, g]) == sf {
                    return Ok((x, g));
                }
            }
        }
        Err(NormalError::NoDecomposition(f))
    }

    pub fn cosets(&self) -> Result<CosetPartition, NormalError> {
        let loc = self.loc;
        let size = loc.size();
        let mut block_of = alloc::vec![usize::MAX; size];
        let mut blocks = Vec::new();
        let mut reps = Vec::new();
        for f in &self.up_max {
            if block_of[f] != usize::MAX {
                continue;
            }
            let c = coset(loc, self.n, f);
            for x in &c {
                if block_of[x] != usize::MAX {
                    return Err(NormalError::NotPartition(format!("cosets of {} and {f} overlap at {x}", reps[block_of[x]])));
                }
                block_of[x] = blocks.len();
            }
            reps.push(f);
            blocks.push(c);
        }
        if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
            return Err(NormalError::NotPartition(format!("{x} lies in no maximal coset")));
        }
        // the smallest ↑-maximal member represents its block
        for (i, b) in blocks.iter().enumerate() {
            reps[i] = b.iter().find(|&x| self.up_max.contains(x)).unwrap_or(reps[i]);
        }
        Ok(CosetPartition { blocks, reps, block_of })
    }
}

pub fn frattini_decompose(loc: &Locality, n: &PartialNormalSubgroup, f: usize) -> Result<(usize, usize), NormalError> {
    CosetAnalysis::new(loc, n).frattini(f)
}

pub fn maximal_cosets(loc: &Locality, n: &PartialNormalSubgroup) -> Result<CosetPartition, NormalError> {
    CosetAnalysis::new(loc, n).cosets()
}

/// No `p`-subgroup of `m` properly contains `u`: no `x ∈ m - u` normalizing
/// `u` generates a `p`-subgroup with it.
pub fn is_maximal_p_subgroup_in(loc: &Locality, m: &ElemSet, u: Mask) -> bool {
    let us = loc.mask_to_set(u);
    m.iter().all(|x| {
        if us.contains(x) || loc.conj_mask(u, x) != Some(u) {
            return true;
        }
        let mut seed = us.clone();
        seed.insert(x);
        let h = generated_partial_subgroup(loc.view(), &seed).members;
        !(crate::group::is_p_power(h.len(), loc.p()) && loc.is_subgroup(&h))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::named_locality;

    fn v_of_o4() -> (Locality, PartialNormalSubgroup) {
        let b = named_locality("O4plus2:all").unwrap();
        let ng = crate::zoo::named_group("O4plus2").unwrap();
        let loc = b.locality;
        let o = loc.origin().unwrap().to_vec();
        let v = ng.extra("V").unwrap().map(loc.size(), |x| o.iter().position(|&e| e == x).unwrap());
        let n = normal_closure(&loc, &v);
        (loc, n)
    }

    #[test]
    fn closures_and_enumeration() {
        let (loc, n) = v_of_o4();
        assert_eq!(n.len(), 9);
        assert_eq!(n.t_mask().count_ones(), 1);
        assert!(PartialNormalSubgroup::new(&loc, n.members().clone()).is_ok());
        assert!(loc.is_partial_normal(&ElemSet::singleton(72, loc.identity())));
        assert!(loc.is_partial_normal(&ElemSet::full(72)));
        let all = all_partial_normal_subgroups(&loc);
        assert!(all.iter().any(|m| m == &n));
        assert_eq!(all.first().unwrap().len(), 1);
        assert_eq!(all.last().unwrap().len(), 72);
        let mut dropped = n.members().clone();
        dropped.remove(dropped.iter().nth(1).unwrap());
        assert!(PartialNormalSubgroup::new(&loc, dropped).is_err());
    }

    #[test]
    fn up_relation_basics() {
        let (loc, n) = v_of_o4();
        for f in 0..loc.size() {
            let a = UpPair { f, p: loc.sg_mask(f) };
            assert!(up_rel(&loc, &n, a, a));
            for &p in loc.object_masks() {
                let b = UpPair { f, p };
                if b.is_valid(&loc) {
                    assert!(up_rel(&loc, &n, b, a));
                }
            }
        }
        // trivial N: (f,P) ↑ (g,Q) iff f = g and P ≤ Q
        let one = PartialNormalSubgroup::trivial(&loc);
        for f in [0, 5, 17] {
            for g in [0, 5, 17] {
                let a = UpPair { f, p: loc.sg_mask(f) };
                let b = UpPair { f: g, p: loc.sg_mask(g) };
                assert_eq!(up_rel(&loc, &one, a, b), f == g);
            }
        }
    }

    #[test]
    fn frattini_and_cosets() {
        let (loc, n) = v_of_o4();
        let an = CosetAnalysis::new(&loc, &n);
        for x in loc.sylow() {
            assert!(an.up_max.contains(x));
        }
        for f in 0..72 {
            let (x, g) = an.frattini(f).unwrap();
            assert!(n.contains(x) && an.up_max.contains(g));
            assert_eq!(loc.mul(x, g), Some(f));
            assert_eq!(loc.s_w_mask(&[x, g]), loc.sg_mask(f));
        }
        let part = an.cosets().unwrap();
        assert_eq!(part.len(), 8);
        assert!(part.blocks.iter().all(|b| b.len() == 9));
        let one = PartialNormalSubgroup::trivial(&loc);
        let p1 = maximal_cosets(&loc, &one).unwrap();
        assert_eq!(p1.len(), 72);
        let all = PartialNormalSubgroup::whole(&loc);
        assert_eq!(maximal_cosets(&loc, &all).unwrap().len(), 1);
        // f ∈ N that is not ↑-maximal splits as (f, 1)
        for f in n.members() {
            if !an.up_max.contains(f) {
                assert_eq!(an.frattini(f).unwrap(), (f, loc.identity()));
            }
        }
    }
}
