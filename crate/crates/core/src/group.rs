//! Cayley-table finite groups and the classical subgroup machinery.
//!
//! Products compose left to right and conjugation is a right action:
//! `x^g = g⁻¹ x g`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::perm::Perm;

/// Subgroups (and arbitrary element sets) are bit sets over the parent's indices.
pub type Subgroup = ElemSet;

/// Largest group for which the full subgroup lattice is enumerated.
pub const LATTICE_CAP: usize = 200;
/// Default cap for [`generate_group`].
pub const GENERATE_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("group would exceed {0} elements")]
    TooLarge(usize),
    #[error("subgroup lattice is only enumerated for |G| <= {cap}, got {order}")]
    LatticeTooLarge { order: usize, cap: usize },
    #[error("invalid Cayley table: {0}")]
    BadTable(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("set is not a subgroup")]
    NotSubgroup,
    #[error("{0} is not prime")]
    NotPrime(usize),
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    labels: Option<Vec<String>>,
}

impl core::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("FiniteGroup").field("order", &self.n).finish()
    }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// True if `n` is a power of `p` (including `p^0 = 1`).
pub fn is_p_power(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n % p == 0 {
        n /= p;
    }
    n == 1
}

fn p_part(mut n: usize, p: usize) -> usize {
    let mut q = 1;
    while n % p == 0 {
        n /= p;
        q *= p;
    }
    q
}

impl FiniteGroup {
    /// Builds a group from a row-major Cayley table with identity at index 0.
    ///
    /// Associativity is checked by the full triple loop.
    pub fn from_table(n: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Result<Self, GroupError> {
        if n == 0 {
            return Err(GroupError::BadTable("empty group".into()));
        }
        if table.len() != n * n {
            return Err(GroupError::BadTable("table has wrong size".into()));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(GroupError::BadTable("entry out of range".into()));
        }
        for g in 0..n {
            if table[g] as usize != g || table[g * n] as usize != g {
                return Err(GroupError::BadTable("index 0 is not the identity".into()));
            }
        }
        let mut inv = alloc::vec![u32::MAX; n];
        for g in 0..n {
            let row = &table[g * n..(g + 1) * n];
            let Some(h) = row.iter().position(|&x| x == 0) else {
                return Err(GroupError::BadTable("element without inverse".into()));
            };
            inv[g] = h as u32;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a * n + b] as usize;
                for c in 0..n {
                    let bc = table[b * n + c] as usize;
                    if table[ab * n + c] != table[a * n + bc] {
                        return Err(GroupError::BadTable("not associative".into()));
                    }
                }
            }
        }
        if let Some(l) = &labels {
            if l.len() != n {
                return Err(GroupError::BadTable("label count mismatch".into()));
            }
        }
        Ok(FiniteGroup { n, table, inv, labels })
    }

    // Tables produced by closure are associative by construction.
    fn from_table_trusted(n: usize, table: Vec<u32>, labels: Option<Vec<String>>) -> Self {
        let mut inv = alloc::vec![0u32; n];
        for g in 0..n {
            inv[g] = table[g * n..(g + 1) * n].iter().position(|&x| x == 0).expect("inverse") as u32;
        }
        FiniteGroup { n, table, inv, labels }
    }

    pub fn trivial() -> Self {
        FiniteGroup { n: 1, table: alloc::vec![0], inv: alloc::vec![0], labels: None }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `x^g = g⁻¹ x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, g: usize) -> String {
        match &self.labels {
            Some(l) => l[g].clone(),
            None => g.to_string(),
        }
    }

    pub fn table_row(&self, a: usize) -> &[u32] {
        &self.table[a * self.n..(a + 1) * self.n]
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.n)
    }

    pub fn trivial_subgroup(&self) -> ElemSet {
        ElemSet::singleton(self.n, 0)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_subgroup(&self, h: &ElemSet) -> bool {
        if !h.contains(0) {
            return false;
        }
        // Finite: closure under products suffices.
        h.iter().all(|a| h.iter().all(|b| h.contains(self.mul(a, b))))
    }

    /// Smallest subgroup containing `seed`.
    pub fn subgroup_closure(&self, seed: &ElemSet) -> Subgroup {
        let gens: Vec<usize> = seed.iter().filter(|&g| g != 0).collect();
        self.generated(&gens)
    }

    /// Subgroup generated by a list of elements.
    pub fn generated(&self, gens: &[usize]) -> Subgroup {
        let mut set = ElemSet::singleton(self.n, 0);
        let mut list = alloc::vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            i += 1;
            for &s in gens {
                let y = self.mul(x, s);
                if set.insert(y) {
                    list.push(y);
                }
            }
        }
        set
    }

    pub fn conjugate_set(&self, h: &ElemSet, g: usize) -> ElemSet {
        h.map(self.n, |x| self.conj(x, g))
    }

    /// `{g : P^g ≤ Q}`.
    pub fn transporter(&self, p: &ElemSet, q: &ElemSet) -> ElemSet {
        ElemSet::from_iter(
            self.n,
            (0..self.n).filter(|&g| p.iter().all(|x| q.contains(self.conj(x, g)))),
        )
    }

    pub fn normalizer(&self, p: &ElemSet) -> Subgroup {
        // For finite sets, P^g ⊆ P already forces equality.
        self.transporter(p, p)
    }

    /// Normalizer of `p` inside the subset `within`.
    pub fn normalizer_in(&self, within: &ElemSet, p: &ElemSet) -> ElemSet {
        self.normalizer(p).intersection(within)
    }

    pub fn centralizer(&self, p: &ElemSet) -> Subgroup {
        ElemSet::from_iter(
            self.n,
            (0..self.n).filter(|&g| p.iter().all(|x| self.mul(x, g) == self.mul(g, x))),
        )
    }

    pub fn center(&self) -> Subgroup {
        self.centralizer(&self.all())
    }

    pub fn is_normal(&self, h: &ElemSet) -> bool {
        (0..self.n).all(|g| h.iter().all(|x| h.contains(self.conj(x, g))))
    }

    /// Normal subgroup generated by `seed`.
    pub fn normal_closure(&self, seed: &ElemSet) -> Subgroup {
        let mut gens = ElemSet::new(self.n);
        for x in seed {
            for g in 0..self.n {
                gens.insert(self.conj(x, g));
            }
        }
        self.subgroup_closure(&gens)
    }

    /// Smallest subgroup containing both.
    pub fn join(&self, a: &ElemSet, b: &ElemSet) -> Subgroup {
        self.subgroup_closure(&a.union(b))
    }

    /// The set product `AB = {ab}`.
    pub fn set_product(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut out = ElemSet::new(self.n);
        for x in a {
            for y in b {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn is_p_group(&self, h: &ElemSet, p: usize) -> bool {
        is_p_power(h.len(), p)
    }

    /// Every subgroup, sorted by order and then by member set.
    ///
    /// Built by joining subgroups with cyclic subgroups until nothing new appears.
    pub fn all_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        if self.n > LATTICE_CAP {
            return Err(GroupError::LatticeTooLarge { order: self.n, cap: LATTICE_CAP });
        }
        Ok(self.subgroups_within(&self.all()))
    }

    /// Every subgroup contained in the subgroup `h` (no size cap; `h` should be small).
    pub fn subgroups_within(&self, h: &ElemSet) -> Vec<Subgroup> {
        // One generator per cyclic subgroup.
        let mut cyclic_gens: Vec<usize> = Vec::new();
        let mut cyclic_seen: BTreeSet<ElemSet> = BTreeSet::new();
        for g in h {
            let c = self.generated(&[g]);
            if cyclic_seen.insert(c) {
                cyclic_gens.push(g);
            }
        }
        let mut found: BTreeSet<ElemSet> = BTreeSet::new();
        let mut queue: VecDeque<(ElemSet, Vec<usize>)> = VecDeque::new();
        let triv = self.trivial_subgroup();
        found.insert(triv.clone());
        queue.push_back((triv, Vec::new()));
        while let Some((k, gens)) = queue.pop_front() {
            for &c in &cyclic_gens {
                if k.contains(c) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(c);
                let j = self.generated(&g2);
                if !found.contains(&j) {
                    found.insert(j.clone());
                    queue.push_back((j, g2));
                }
            }
        }
        let mut out: Vec<ElemSet> = found.into_iter().collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.to_vec().cmp(&b.to_vec())));
        out
    }

    pub fn normal_subgroups(&self) -> Result<Vec<Subgroup>, GroupError> {
        Ok(self.all_subgroups()?.into_iter().filter(|h| self.is_normal(h)).collect())
    }

    /// A Sylow `p`-subgroup, grown greedily: repeatedly adjoin the smallest-index
    /// element of `N_G(P) ∖ P` whose `p`-th power lies in `P`.
    pub fn sylow_subgroup(&self, p: usize) -> Subgroup {
        self.sylow_of(&self.all(), p)
    }

    /// A Sylow `p`-subgroup of the subgroup `h`, containing `start` if given.
    pub fn sylow_of_from(&self, h: &ElemSet, p: usize, start: &ElemSet) -> Subgroup {
        let target = p_part(h.len(), p);
        let mut cur = start.clone();
        while cur.len() < target {
            let norm = self.normalizer_in(h, &cur);
            let mut next = None;
            for x in norm.difference(&cur).iter() {
                let mut y = 0;
                for _ in 0..p {
                    y = self.mul(y, x);
                }
                if cur.contains(y) {
                    next = Some(x);
                    break;
                }
            }
            let x = next.expect("Sylow growth stalled");
            let mut seed = cur.clone();
            seed.insert(x);
            cur = self.subgroup_closure(&seed);
        }
        cur
    }

    pub fn sylow_of(&self, h: &ElemSet, p: usize) -> Subgroup {
        self.sylow_of_from(h, p, &self.trivial_subgroup())
    }

    /// `(O_p(G), O_{p'}(G))` as joins of normal subgroups of the right kind.
    pub fn cores(&self, p: usize) -> Result<(Subgroup, Subgroup), GroupError> {
        let normals = self.normal_subgroups()?;
        let mut op = self.trivial_subgroup();
        let mut opp = self.trivial_subgroup();
        for h in &normals {
            if is_p_power(h.len(), p) {
                op = self.join(&op, h);
            } else if h.len() % p != 0 {
                opp = self.join(&opp, h);
            }
        }
        Ok((op, opp))
    }

    /// Cores of a subgroup `h`, computed inside the group restricted to `h`.
    pub fn cores_of(&self, h: &ElemSet, p: usize) -> Result<(Subgroup, Subgroup), GroupError> {
        let (sub, emb) = self.restrict(h)?;
        let (a, b) = sub.cores(p)?;
        Ok((a.map(self.n, |i| emb[i]), b.map(self.n, |i| emb[i])))
    }

    /// `C_G(O_p(G)) ≤ O_p(G)`.
    pub fn is_characteristic_p(&self, p: usize) -> Result<bool, GroupError> {
        let (op, _) = self.cores(p)?;
        Ok(self.centralizer(&op).is_subset(&op))
    }

    /// The subgroup `h` as a group in its own right, with the embedding into `self`.
    /// Indices follow the parent's order, so the identity stays at 0.
    pub fn restrict(&self, h: &ElemSet) -> Result<(FiniteGroup, Vec<usize>), GroupError> {
        if !self.is_subgroup(h) {
            return Err(GroupError::NotSubgroup);
        }
        let emb = h.to_vec();
        let m = emb.len();
        let mut back = alloc::vec![u32::MAX; self.n];
        for (i, &g) in emb.iter().enumerate() {
            back[g] = i as u32;
        }
        let mut table = Vec::with_capacity(m * m);
        for &a in &emb {
            for &b in &emb {
                table.push(back[self.mul(a, b)]);
            }
        }
        let labels = self.labels.as_ref().map(|l| emb.iter().map(|&g| l[g].clone()).collect());
        Ok((FiniteGroup::from_table_trusted(m, table, labels), emb))
    }

    /// `G/N` with the canonical surjection; cosets are numbered by their least element.
    pub fn quotient_group(&self, nsub: &ElemSet) -> Result<(FiniteGroup, GroupHom), GroupError> {
        if !self.is_subgroup(nsub) {
            return Err(GroupError::NotSubgroup);
        }
        if !self.is_normal(nsub) {
            return Err(GroupError::NotNormal);
        }
        let mut coset_of = alloc::vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for x in nsub {
                coset_of[self.mul(g, x)] = idx;
            }
        }
        let m = reps.len();
        let mut table = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                table.push(coset_of[self.mul(a, b)] as u32);
            }
        }
        let q = FiniteGroup::from_table_trusted(m, table, None);
        Ok((q, GroupHom { map: coset_of }))
    }

    /// True if `map` is a group isomorphism from `self` onto `other`.
    pub fn is_isomorphism(&self, other: &FiniteGroup, map: &[usize]) -> bool {
        if self.n != other.n || map.len() != self.n {
            return false;
        }
        let img = ElemSet::from_iter(other.n, map.iter().copied());
        img.len() == self.n
            && GroupHom { map: map.to_vec() }.is_homomorphism(self, other)
    }
}

/// A homomorphism given by its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    pub map: Vec<usize>,
}

impl GroupHom {
    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn is_homomorphism(&self, dom: &FiniteGroup, cod: &FiniteGroup) -> bool {
        self.map.len() == dom.order()
            && (0..dom.order()).all(|a| {
                (0..dom.order()).all(|b| self.map[dom.mul(a, b)] == cod.mul(self.map[a], self.map[b]))
            })
    }

    pub fn kernel(&self, cod_identity: usize) -> ElemSet {
        ElemSet::from_iter(
            self.map.len(),
            (0..self.map.len()).filter(|&g| self.map[g] == cod_identity),
        )
    }
}

/// Closure of permutation generators as a Cayley-table group.
///
/// Elements are numbered breadth-first from the identity, multiplying on the
/// right by generators in the given order. Returns the group and the
/// permutation of each element.
pub fn generate_group(gens: &[Perm], cap: usize) -> Result<(FiniteGroup, Vec<Perm>), GroupError> {
    let degree = gens.iter().map(Perm::degree).max().unwrap_or(0);
    let gens: Vec<Perm> = gens.iter().map(|g| g.padded(degree)).collect();
    let mut elems = alloc::vec![Perm::identity(degree)];
    let mut index: alloc::collections::BTreeMap<Perm, usize> = alloc::collections::BTreeMap::new();
    index.insert(elems[0].clone(), 0);
    let mut i = 0;
    while i < elems.len() {
        for g in &gens {
            let y = elems[i].then(g);
            if !index.contains_key(&y) {
                if elems.len() >= cap {
                    return Err(GroupError::TooLarge(cap));
                }
                index.insert(y.clone(), elems.len());
                elems.push(y);
            }
        }
        i += 1;
    }
    let n = elems.len();
    let mut table = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            table.push(index[&a.then(b)] as u32);
        }
    }
    let labels = elems.iter().map(|p| p.to_string()).collect();
    Ok((FiniteGroup::from_table_trusted(n, table, Some(labels)), elems))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Lemma42Error {
    #[error("the family of conjugates is empty")]
    Empty,
    #[error("a member is not an S-conjugate of P")]
    NotConjugate,
    #[error("the union X is not stable: some P^x with x in X lies outside the family")]
    NotStable,
}

/// Checks the dichotomy "Γ = {P} or N_S(P) ∩ X ⊄ P" for a family `gamma` of
/// `S`-conjugates of `P` whose union `X` satisfies `P^x ∈ Γ` for `x ∈ X`.
pub fn lemma42_check(g: &FiniteGroup, s: &ElemSet, p: &ElemSet, gamma: &[ElemSet]) -> Result<bool, Lemma42Error> {
    if gamma.is_empty() {
        return Err(Lemma42Error::Empty);
    }
    let conjugates: BTreeSet<ElemSet> = s.iter().map(|x| g.conjugate_set(p, x)).collect();
    if gamma.iter().any(|q| !conjugates.contains(q)) {
        return Err(Lemma42Error::NotConjugate);
    }
    let fam: BTreeSet<&ElemSet> = gamma.iter().collect();
    let mut x = ElemSet::new(g.order());
    for q in gamma {
        x.union_with(q);
    }
    if x.iter().any(|e| !fam.contains(&g.conjugate_set(p, e))) {
        return Err(Lemma42Error::NotStable);
    }
    if fam.len() == 1 && fam.contains(p) {
        return Ok(true);
    }
    let ns = g.normalizer(p).intersection(s);
    Ok(!ns.intersection(&x).is_subset(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perms(list: &[&str]) -> Vec<Perm> {
        list.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn s3() -> FiniteGroup {
        generate_group(&perms(&["(1 2 3)", "(1 2)"]), GENERATE_CAP).unwrap().0
    }

    fn d8() -> FiniteGroup {
        generate_group(&perms(&["(1 2 3 4)", "(1 3)"]), GENERATE_CAP).unwrap().0
    }

    #[test]
    fn generation() {
        assert_eq!(s3().order(), 6);
        let (t, _) = generate_group(&[], GENERATE_CAP).unwrap();
        assert_eq!(t.order(), 1);
        assert!(matches!(
            generate_group(&perms(&["(1 2 3 4 5 6 7)", "(1 2)"]), 100),
            Err(GroupError::TooLarge(100))
        ));
    }

    #[test]
    fn table_validation() {
        // Z/2 as a table.
        assert!(FiniteGroup::from_table(2, alloc::vec![0, 1, 1, 0], None).is_ok());
        assert!(FiniteGroup::from_table(2, alloc::vec![0, 1, 1, 1], None).is_err());
        assert!(FiniteGroup::from_table(0, alloc::vec![], None).is_err());
    }

    #[test]
    fn closure_and_lattice() {
        let g = d8();
        let r = (0..8).find(|&x| g.element_order(x) == 4).unwrap();
        assert_eq!(g.subgroup_closure(&ElemSet::singleton(8, r)).len(), 4);
        assert_eq!(g.subgroup_closure(&g.trivial_subgroup()).len(), 1);
        assert_eq!(g.subgroup_closure(&g.all()), g.all());
        // D8 has 10 subgroups, S3 has 6.
        assert_eq!(g.all_subgroups().unwrap().len(), 10);
        assert_eq!(s3().all_subgroups().unwrap().len(), 6);
    }

    #[test]
    fn sylow_and_transporter() {
        let g = s3();
        assert_eq!(g.sylow_subgroup(3).len(), 3);
        assert_eq!(g.sylow_subgroup(2).len(), 2);
        assert_eq!(FiniteGroup::trivial().sylow_subgroup(2).len(), 1);
        let a = g.labels().unwrap().iter().position(|l| l == "(1 2)").unwrap();
        let b = g.labels().unwrap().iter().position(|l| l == "(1 3)").unwrap();
        let pa = g.generated(&[a]);
        let pb = g.generated(&[b]);
        assert_eq!(g.transporter(&pa, &pb).len(), 2);
        assert_eq!(g.transporter(&g.all(), &g.all()), g.all());
        let d = d8();
        assert_eq!(d.transporter(&d.center(), &d.center()), d.all());
    }

    #[test]
    fn cores_and_char_p() {
        let d = d8();
        assert_eq!(d.cores(2).unwrap(), (d.all(), d.trivial_subgroup()));
        let g = s3();
        let (o2, o2p) = g.cores(2).unwrap();
        assert_eq!((o2.len(), o2p.len()), (1, 3));
        assert!(d.is_characteristic_p(2).unwrap());
        let c6 = generate_group(&perms(&["(1 2 3)(4 5)"]), GENERATE_CAP).unwrap().0;
        assert!(!c6.is_characteristic_p(2).unwrap());
        let s4 = generate_group(&perms(&["(1 2 3 4)", "(1 2)"]), GENERATE_CAP).unwrap().0;
        assert_eq!(s4.cores(2).unwrap().0.len(), 4);
        assert!(s4.is_characteristic_p(2).unwrap());
    }

    #[test]
    fn quotients() {
        let g = s3();
        let c3 = g.sylow_subgroup(3);
        let (q, h) = g.quotient_group(&c3).unwrap();
        assert_eq!(q.order(), 2);
        assert!(h.is_homomorphism(&g, &q));
        assert_eq!(h.kernel(0), c3);
        assert_eq!(g.quotient_group(&g.all()).unwrap().0.order(), 1);
        assert_eq!(g.quotient_group(&g.sylow_subgroup(2)), Err(GroupError::NotNormal));
        let d = d8();
        let (q, _) = d.quotient_group(&d.center()).unwrap();
        assert_eq!(q.order(), 4);
        assert!((0..4).all(|x| q.mul(x, x) == 0));
    }

    #[test]
    fn lemma42() {
        let d = d8();
        let s = d.all();
        // Non-central involution and its class.
        let z = d.center();
        let t = (0..8).find(|&x| d.element_order(x) == 2 && !z.contains(x)).unwrap();
        let p = d.generated(&[t]);
        let class: BTreeSet<ElemSet> = (0..8).map(|x| d.conjugate_set(&p, x)).collect();
        let gamma: Vec<ElemSet> = class.into_iter().collect();
        assert_eq!(gamma.len(), 2);
        assert_eq!(lemma42_check(&d, &s, &p, &gamma), Ok(true));
        assert_eq!(lemma42_check(&d, &s, &p, &[p.clone()]), Ok(true));
        assert_eq!(lemma42_check(&d, &s, &p, &[]), Err(Lemma42Error::Empty));
    }
}
