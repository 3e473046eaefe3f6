//! Partial groups presented by an inversion, a pair table and a word-domain oracle.
//!
//! The domain of a partial group is usually infinite (identity padding), so it
//! is never stored: each view carries an [`Oracle`] deciding membership of a
//! word. The n-ary product is always the left fold of the pair table.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::group::FiniteGroup;
use crate::report::{FirstWitness, Report, Witness};

pub const NONE: u32 = u32::MAX;

/// A word in the free monoid on the element indices.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn fmt_slice(w: &[usize]) -> String {
        crate::report::fmt_elems(w)
    }

    /// Shortlex order: shorter words first, then lexicographic.
    pub fn shortlex_cmp(a: &[usize], b: &[usize]) -> core::cmp::Ordering {
        a.len().cmp(&b.len()).then_with(|| a.cmp(b))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Word::fmt_slice(&self.0))
    }
}

impl From<&[usize]> for Word {
    fn from(w: &[usize]) -> Self {
        Word(w.to_vec())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("word {0} is not in the domain")]
pub struct DomainError(pub Word);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartialGroupError {
    #[error("a partial group needs at least one element")]
    Empty,
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("inversion is not an involution at {0}")]
    BadInversion(usize),
    #[error("the identity is not its own inverse")]
    IdentityInverse,
    #[error("oracle rejects the word {0}, but words of length at most 1 must be accepted")]
    ShortWordRejected(Word),
    #[error("pair ({0},{1}): oracle and pair table disagree on definedness")]
    PairMismatch(usize, usize),
    #[error("pair ({0},{1}) is defined twice")]
    DuplicatePair(usize, usize),
}

pub type OracleFn = Arc<dyn Fn(&[usize]) -> bool + Send + Sync>;

/// Decides membership of words in the domain.
#[derive(Clone)]
pub enum Oracle {
    /// Every word (a group).
    Full,
    /// The free partial group on one generator: identity 0, `a` = 1, `b` = 2.
    /// A word is accepted when, after deleting identities, it alternates `a` and `b`.
    Free1,
    /// An explicit list of accepted words of length 2 up to `maxlen`; shorter words are
    /// always accepted and longer words are outside the horizon.
    Table { maxlen: usize, words: Arc<BTreeSet<Vec<usize>>> },
    /// Any other decidable predicate, with a name used in reports and files.
    Custom { name: String, horizon: Option<usize>, f: OracleFn },
}

impl Oracle {
    pub fn custom(name: impl Into<String>, f: impl Fn(&[usize]) -> bool + Send + Sync + 'static) -> Self {
        Oracle::Custom { name: name.into(), horizon: None, f: Arc::new(f) }
    }

    #[inline]
    pub fn accepts(&self, w: &[usize]) -> bool {
        match self {
            Oracle::Full => true,
            Oracle::Free1 => {
                let mut last = 0usize;
                for &x in w {
                    if x == 0 {
                        continue;
                    }
                    if x == last {
                        return false;
                    }
                    last = x;
                }
                true
            }
            Oracle::Table { words, .. } => w.len() <= 1 || words.contains(w),
            Oracle::Custom { f, .. } => f(w),
        }
    }

    /// Longest word length on which the oracle is authoritative.
    pub fn horizon(&self) -> Option<usize> {
        match self {
            Oracle::Table { maxlen, .. } => Some(*maxlen),
            Oracle::Custom { horizon, .. } => *horizon,
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Oracle::Full => "full",
            Oracle::Free1 => "free1",
            Oracle::Table { .. } => "table",
            Oracle::Custom { name, .. } => name,
        }
    }
}

impl fmt::Debug for Oracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle({})", self.name())
    }
}

/// A finite partial group.
#[derive(Clone, Debug)]
pub struct PartialGroupView {
    n: usize,
    identity: usize,
    inv: Vec<u32>,
    pairs: Vec<u32>,
    oracle: Oracle,
    labels: Option<Vec<String>>,
}

impl PartialGroupView {
    /// Builds and validates a view from explicit pair products.
    ///
    /// Checks that the inversion is an involution fixing the identity, that
    /// short words are accepted, and that the oracle accepts `(f,g)` exactly
    /// when the pair table is defined there.
    pub fn new(
        n: usize,
        identity: usize,
        inv: Vec<usize>,
        pairs: impl IntoIterator<Item = (usize, usize, usize)>,
        oracle: Oracle,
        labels: Option<Vec<String>>,
    ) -> Result<Self, PartialGroupError> {
        if n == 0 {
            return Err(PartialGroupError::Empty);
        }
        if identity >= n {
            return Err(PartialGroupError::OutOfRange(identity));
        }
        if inv.len() != n {
            return Err(PartialGroupError::OutOfRange(inv.len()));
        }
        let mut table = alloc::vec![NONE; n * n];
        for (f, g, h) in pairs {
            for x in [f, g, h] {
                if x >= n {
                    return Err(PartialGroupError::OutOfRange(x));
                }
            }
            if table[f * n + g] != NONE {
                return Err(PartialGroupError::DuplicatePair(f, g));
            }
            table[f * n + g] = h as u32;
        }
        let view = PartialGroupView {
            n,
            identity,
            inv: inv.iter().map(|&x| x as u32).collect(),
            pairs: table,
            oracle,
            labels,
        };
        view.validate()?;
        Ok(view)
    }

    /// Builds a view whose pair table is `mul` on every pair the oracle accepts.
    pub fn from_oracle(
        n: usize,
        identity: usize,
        inv: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
        oracle: Oracle,
        labels: Option<Vec<String>>,
    ) -> Result<Self, PartialGroupError> {
        let mut pairs = Vec::new();
        for f in 0..n {
            for g in 0..n {
                if oracle.accepts(&[f, g]) {
                    pairs.push((f, g, mul(f, g)));
                }
            }
        }
        Self::new(n, identity, inv, pairs, oracle, labels)
    }

    /// A group as a partial group with full domain.
    pub fn from_group(g: &FiniteGroup) -> Self {
        let n = g.order();
        let mut pairs = Vec::with_capacity(n * n);
        for a in 0..n {
            pairs.extend_from_slice(g.table_row(a));
        }
        PartialGroupView {
            n,
            identity: g.identity(),
            inv: (0..n).map(|x| g.inv(x) as u32).collect(),
            pairs,
            oracle: Oracle::Full,
            labels: g.labels().map(|l| l.to_vec()),
        }
    }

    fn validate(&self) -> Result<(), PartialGroupError> {
        let n = self.n;
        for x in 0..n {
            let y = self.inv[x] as usize;
            if y >= n || self.inv[y] as usize != x {
                return Err(PartialGroupError::BadInversion(x));
            }
        }
        if self.inv[self.identity] as usize != self.identity {
            return Err(PartialGroupError::IdentityInverse);
        }
        if !self.oracle.accepts(&[]) {
            return Err(PartialGroupError::ShortWordRejected(Word(Vec::new())));
        }
        for x in 0..n {
            if !self.oracle.accepts(&[x]) {
                return Err(PartialGroupError::ShortWordRejected(Word(alloc::vec![x])));
            }
        }
        for f in 0..n {
            for g in 0..n {
                if self.oracle.accepts(&[f, g]) != (self.pairs[f * n + g] != NONE) {
                    return Err(PartialGroupError::PairMismatch(f, g));
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// The pair table entry at `(f,g)`.
    #[inline]
    pub fn mul(&self, f: usize, g: usize) -> Option<usize> {
        let v = self.pairs[f * self.n + g];
        (v != NONE).then_some(v as usize)
    }

    #[inline]
    pub fn in_domain(&self, w: &[usize]) -> bool {
        self.oracle.accepts(w)
    }

    pub fn oracle(&self) -> &Oracle {
        &self.oracle
    }

    pub fn horizon(&self) -> Option<usize> {
        self.oracle.horizon()
    }

    /// True if the oracle is authoritative on words of length `len`.
    #[inline]
    pub fn decides(&self, len: usize) -> bool {
        self.horizon().is_none_or(|h| len <= h)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.labels {
            Some(l) => l[x].clone(),
            None => alloc::format!("{x}"),
        }
    }

    /// Left fold of the pair table; `None` if some step is undefined.
    #[inline]
    pub fn fold(&self, w: &[usize]) -> Option<usize> {
        let mut acc = self.identity;
        for &x in w {
            acc = self.mul(acc, x)?;
        }
        Some(acc)
    }

    /// `Π(w)`.
    pub fn product(&self, w: &[usize]) -> Result<usize, DomainError> {
        if !self.in_domain(w) {
            return Err(DomainError(Word(w.to_vec())));
        }
        self.fold(w).ok_or_else(|| DomainError(Word(w.to_vec())))
    }

    /// `x^g = Π(g⁻¹, x, g)`.
    pub fn conjugate(&self, x: usize, g: usize) -> Result<usize, DomainError> {
        self.product(&[self.inv(g), x, g])
    }

    /// `D(g)`: all `x` with `(g⁻¹, x, g)` in the domain.
    pub fn d_of(&self, g: usize) -> ElemSet {
        let gi = self.inv(g);
        ElemSet::from_iter(self.n, (0..self.n).filter(|&x| self.in_domain(&[gi, x, g])))
    }

    pub fn inverse_word(&self, w: &[usize]) -> Vec<usize> {
        w.iter().rev().map(|&x| self.inv(x)).collect()
    }

    /// Defined pairs `(f, g, fg)` in row-major order.
    pub fn defined_pairs(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        (0..self.n).flat_map(move |f| (0..self.n).filter_map(move |g| self.mul(f, g).map(|h| (f, g, h))))
    }

    /// Replaces the oracle without revalidation.
    pub fn with_oracle_unchecked(mut self, oracle: Oracle) -> Self {
        self.oracle = oracle;
        self
    }

    /// Overwrites one pair-table entry without revalidation (for fault injection).
    pub fn with_pair_unchecked(mut self, f: usize, g: usize, value: Option<usize>) -> Self {
        self.pairs[f * self.n + g] = value.map_or(NONE, |v| v as u32);
        self
    }

    pub fn with_labels(mut self, labels: Option<Vec<String>>) -> Self {
        self.labels = labels;
        self
    }

    /// True if `h` is inversion-closed and closed under defined pair products.
    ///
    /// This is equivalent to closure under all of `Π`, since `Π` of a word is
    /// the left fold of defined pairs.
    pub fn is_partial_subgroup(&self, h: &ElemSet) -> bool {
        !h.is_empty()
            && h.iter().all(|x| h.contains(self.inv(x)))
            && h.iter().all(|a| h.iter().all(|b| self.mul(a, b).is_none_or(|c| h.contains(c))))
    }

    /// Definition of partial normality for an arbitrary partial group.
    pub fn is_partial_normal(&self, h: &ElemSet) -> bool {
        self.is_partial_subgroup(h)
            && (0..self.n).all(|g| {
                let gi = self.inv(g);
                h.iter().all(|x| {
                    !self.in_domain(&[gi, x, g]) || self.fold(&[gi, x, g]).is_some_and(|y| h.contains(y))
                })
            })
    }

    /// The restriction to a partial subgroup, re-indexed in increasing order.
    /// Returns the view and the embedding into `self`.
    pub fn restrict(&self, h: &ElemSet) -> (PartialGroupView, Vec<usize>) {
        let emb = h.to_vec();
        let mut back = alloc::vec![NONE; self.n];
        for (i, &g) in emb.iter().enumerate() {
            back[g] = i as u32;
        }
        let m = emb.len();
        let mut pairs = alloc::vec![NONE; m * m];
        for (i, &a) in emb.iter().enumerate() {
            for (j, &b) in emb.iter().enumerate() {
                if let Some(c) = self.mul(a, b) {
                    pairs[i * m + j] = back[c];
                }
            }
        }
        let parent = self.oracle.clone();
        let emb2 = emb.clone();
        let oracle = Oracle::Custom {
            name: String::from("restricted"),
            horizon: parent.horizon(),
            f: Arc::new(move |w: &[usize]| {
                let up: Vec<usize> = w.iter().map(|&i| emb2[i]).collect();
                parent.accepts(&up)
            }),
        };
        let view = PartialGroupView {
            n: m,
            identity: back[self.identity] as usize,
            inv: emb.iter().map(|&g| back[self.inv(g)]).collect(),
            pairs,
            oracle,
            labels: self.labels.as_ref().map(|l| emb.iter().map(|&g| l[g].clone()).collect()),
        };
        (view, emb)
    }
}

/// The product of a word in the free one-generator partial group, by counting.
pub fn free1_count_product(w: &[usize]) -> usize {
    let a = w.iter().filter(|&&x| x == 1).count();
    let b = w.iter().filter(|&&x| x == 2).count();
    match a.cmp(&b) {
        core::cmp::Ordering::Equal => 0,
        core::cmp::Ordering::Greater => 1,
        core::cmp::Ordering::Less => 2,
    }
}

/// The free partial group on one generator: `{1, a, b}` with `a⁻¹ = b`.
pub fn free_one_generator() -> PartialGroupView {
    let pairs = [(0, 0, 0), (0, 1, 1), (0, 2, 2), (1, 0, 1), (2, 0, 2), (1, 2, 0), (2, 1, 0)];
    PartialGroupView::new(
        3,
        0,
        alloc::vec![0, 2, 1],
        pairs,
        Oracle::Free1,
        Some(alloc::vec!["1".into(), "a".into(), "b".into()]),
    )
    .expect("free partial group is valid")
}

/// Componentwise product: `(x, y)` is numbered `x * |L2| + y`.
pub fn direct_product(a: &PartialGroupView, b: &PartialGroupView) -> PartialGroupView {
    let (n1, n2) = (a.size(), b.size());
    let n = n1 * n2;
    let mut pairs = alloc::vec![NONE; n * n];
    for f in 0..n {
        for g in 0..n {
            if let (Some(x), Some(y)) = (a.mul(f / n2, g / n2), b.mul(f % n2, g % n2)) {
                pairs[f * n + g] = (x * n2 + y) as u32;
            }
        }
    }
    let horizon = match (a.horizon(), b.horizon()) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let (oa, ob) = (a.oracle.clone(), b.oracle.clone());
    let oracle = Oracle::Custom {
        name: String::from("product"),
        horizon,
        f: Arc::new(move |w: &[usize]| {
            let left: Vec<usize> = w.iter().map(|&x| x / n2).collect();
            let right: Vec<usize> = w.iter().map(|&x| x % n2).collect();
            oa.accepts(&left) && ob.accepts(&right)
        }),
    };
    let labels = match (a.labels(), b.labels()) {
        (None, None) => None,
        _ => Some((0..n).map(|f| alloc::format!("({},{})", a.label(f / n2), b.label(f % n2))).collect()),
    };
    PartialGroupView {
        n,
        identity: a.identity() * n2 + b.identity(),
        inv: (0..n).map(|f| (a.inv(f / n2) * n2 + b.inv(f % n2)) as u32).collect(),
        pairs,
        oracle,
        labels,
    }
}

/// A partial subgroup: an inversion- and product-closed subset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSubgroup {
    pub members: ElemSet,
}

/// Smallest partial subgroup containing `x`, by closure under inverses and
/// defined pair products.
pub fn generated_partial_subgroup(pg: &PartialGroupView, x: &ElemSet) -> PartialSubgroup {
    let mut set = ElemSet::singleton(pg.size(), pg.identity());
    let mut list = alloc::vec![pg.identity()];
    for g in x {
        for y in [g, pg.inv(g)] {
            if set.insert(y) {
                list.push(y);
            }
        }
    }
    // Every new element is multiplied against everything found before it, on both sides.
    let mut i = 0;
    while i < list.len() {
        let a = list[i];
        let mut j = 0;
        while j <= i {
            let b = list[j];
            for c in [pg.mul(a, b), pg.mul(b, a)].into_iter().flatten() {
                if set.insert(c) {
                    list.push(c);
                }
            }
            j += 1;
        }
        i += 1;
    }
    PartialSubgroup { members: set }
}

/// Word closure `∪ X_n` with words up to `max_len` at each stage, by brute force.
pub fn word_closure(pg: &PartialGroupView, x: &ElemSet, max_len: usize) -> ElemSet {
    let mut cur = x.clone();
    for g in x {
        cur.insert(pg.inv(g));
    }
    loop {
        let mut next = cur.clone();
        let members = cur.to_vec();
        for_each_domain_word(pg, &members, max_len, |_, p| {
            next.insert(p);
        });
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// Calls `f(word, Π(word))` for every accepted word of length at most `max_len`
/// over `letters`, using that prefixes of accepted words are accepted.
pub fn for_each_domain_word(
    pg: &PartialGroupView,
    letters: &[usize],
    max_len: usize,
    mut f: impl FnMut(&[usize], usize),
) {
    fn rec(
        pg: &PartialGroupView,
        letters: &[usize],
        max_len: usize,
        w: &mut Vec<usize>,
        prod: usize,
        f: &mut impl FnMut(&[usize], usize),
    ) {
        f(w, prod);
        if w.len() == max_len {
            return;
        }
        for &x in letters {
            w.push(x);
            if pg.in_domain(w) {
                if let Some(p) = pg.mul(prod, x) {
                    rec(pg, letters, max_len, w, p, f);
                }
            }
            w.pop();
        }
    }
    let mut w = Vec::with_capacity(max_len);
    rec(pg, letters, max_len, &mut w, pg.identity(), &mut f);
}

/// A map between partial groups, given by its image table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialGroupHom {
    pub map: Vec<usize>,
}

impl PartialGroupHom {
    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn apply_word(&self, w: &[usize]) -> Vec<usize> {
        w.iter().map(|&x| self.map[x]).collect()
    }

    pub fn kernel(&self, cod: &PartialGroupView) -> ElemSet {
        ElemSet::from_iter(self.map.len(), (0..self.map.len()).filter(|&g| self.map[g] == cod.identity()))
    }
}

/// Checks (H1) and (H2) on all accepted words up to `max_len`, the identity and
/// inverse rules for homomorphisms, and that the kernel is partially normal.
pub fn verify_homomorphism(
    dom: &PartialGroupView,
    cod: &PartialGroupView,
    h: &PartialGroupHom,
    max_len: usize,
) -> Report {
    let mut r = Report::new();
    if h.map.len() != dom.size() || h.map.iter().any(|&x| x >= cod.size()) {
        r.check("H(map)", Some(Witness::new(Vec::new(), "map is not total into the codomain")));
        return r;
    }
    let letters: Vec<usize> = (0..dom.size()).collect();
    let mut h1 = FirstWitness::default();
    let mut h2 = FirstWitness::default();
    for_each_domain_word(dom, &letters, max_len, |w, p| {
        let img = h.apply_word(w);
        if !cod.decides(img.len()) {
            return;
        }
        if !cod.in_domain(&img) {
            h1.offer_word(w);
        } else if cod.fold(&img) != Some(h.apply(p)) {
            h2.offer_word(w);
        }
    });
    r.check_bounded("H1", h1.0, max_len);
    r.check_bounded("H2", h2.0, max_len);
    let mut w113 = FirstWitness::default();
    if h.apply(dom.identity()) != cod.identity() {
        w113.offer_word(&[dom.identity()]);
    }
    for g in 0..dom.size() {
        if h.apply(dom.inv(g)) != cod.inv(h.apply(g)) {
            w113.offer_word(&[g]);
        }
    }
    r.check("1.13", w113.0);
    let ker = h.kernel(cod);
    let ok = dom.is_partial_normal(&ker);
    r.check("1.14", (!ok).then(|| Witness::new(ker.to_vec(), alloc::format!("kernel={ker}"))));
    r
}

/// For a subgroup `m` of the domain (every word over `m` is in `D`), checks that
/// the image of `m` is a subgroup of `cod` on words up to `max_len`: every word
/// over the image is in `D'` and its product stays in the image.
pub fn check_image_of_subgroup(cod: &PartialGroupView, h: &PartialGroupHom, m: &ElemSet, max_len: usize) -> Option<Witness> {
    let img = ElemSet::from_iter(cod.size(), m.iter().map(|x| h.apply(x)));
    let letters = img.to_vec();
    let mut bad = FirstWitness::default();
    enumerate_words(letters.len(), max_len, |idx| {
        let w: Vec<usize> = idx.iter().map(|&i| letters[i]).collect();
        if !cod.decides(w.len()) {
            return;
        }
        match cod.fold(&w) {
            Some(p) if cod.in_domain(&w) && img.contains(p) => {}
            _ => bad.offer_word(&w),
        }
    });
    bad.0
}

/// Calls `f` on every word over `0..n` of length at most `max_len` (shortlex order).
pub fn enumerate_words(n: usize, max_len: usize, mut f: impl FnMut(&[usize])) {
    let mut w: Vec<usize> = Vec::with_capacity(max_len);
    for len in 0..=max_len {
        if n == 0 && len > 0 {
            break;
        }
        w.clear();
        w.resize(len, 0);
        loop {
            f(&w);
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                w[i] += 1;
                if w[i] < n {
                    break;
                }
                w[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX || len == 0 {
                break;
            }
        }
    }
}

/// Per-check smallest witnesses gathered by the axiom sweep.
#[derive(Default, Clone)]
struct AxiomWitnesses {
    seg: FirstWitness,
    fold: FirstWitness,
    ax3: FirstWitness,
    ax4: FirstWitness,
    a: FirstWitness,
    b: FirstWitness,
    c: FirstWitness,
    d: FirstWitness,
    e: FirstWitness,
    f: FirstWitness,
    g: FirstWitness,
}

struct Sweep<'a> {
    pg: &'a PartialGroupView,
    k: usize,
    w: Vec<usize>,
    // prods[i] = fold of w[..i] (NONE if undefined)
    prods: Vec<u32>,
    // Per prefix length: stamped tables for cancellation and uncancellation.
    stamp: Vec<u32>,
    canc: Vec<Vec<(u32, u32)>>,
    unc: Vec<Vec<(u32, u32)>>,
    next_stamp: u32,
    wit: AxiomWitnesses,
    scratch: Vec<usize>,
}

impl<'a> Sweep<'a> {
    fn new(pg: &'a PartialGroupView, k: usize) -> Self {
        let n = pg.size();
        Sweep {
            pg,
            k,
            w: Vec::with_capacity(k),
            prods: alloc::vec![pg.identity() as u32],
            stamp: alloc::vec![0; k + 1],
            canc: (0..=k).map(|_| alloc::vec![(0, 0); n]).collect(),
            unc: (0..=k).map(|_| alloc::vec![(0, 0); n]).collect(),
            next_stamp: 1,
            wit: AxiomWitnesses::default(),
            scratch: Vec::with_capacity(4 * k + 2),
        }
    }

    fn seg_fold(&self, i: usize, j: usize) -> Option<usize> {
        self.pg.fold(&self.w[i..j])
    }

    // Checks that the word in `scratch` is accepted with product `expect`.
    fn scratch_ok(&self, expect: Option<usize>) -> bool {
        if !self.pg.decides(self.scratch.len()) {
            return true;
        }
        self.pg.in_domain(&self.scratch) && self.pg.fold(&self.scratch) == expect && expect.is_some()
    }

    fn visit(&mut self, prefix_accepted: bool) {
        let m = self.w.len();
        let accepted = self.pg.in_domain(&self.w);
        if m >= 1 {
            self.stamp[m] = self.next_stamp;
            self.next_stamp = self.next_stamp.wrapping_add(1).max(1);
        }
        if accepted {
            self.check_word(prefix_accepted);
        }
        if m < self.k {
            for x in 0..self.pg.size() {
                let p = self.prods[m];
                let np = if p == NONE { NONE } else { self.pg.mul(p as usize, x).map_or(NONE, |v| v as u32) };
                self.w.push(x);
                self.prods.push(np);
                self.visit(prefix_accepted && accepted);
                self.prods.pop();
                self.w.pop();
            }
        }
    }

    fn check_word(&mut self, prefix_accepted: bool) {
        let pg = self.pg;
        let m = self.w.len();
        let w = self.w.clone();
        // (1): segment closure via the two maximal proper segments.
        if m >= 1 && (!prefix_accepted || !pg.in_domain(&w[1..])) {
            self.wit.seg.offer_word(&w);
            return;
        }
        let pw = self.prods[m];
        if pw == NONE {
            self.wit.fold.offer_word(&w);
            return;
        }
        let pw = pw as usize;
        let one = pg.identity();

        // segment products
        let mut seg = alloc::vec![alloc::vec![None; m + 1]; m + 1];
        for i in 0..=m {
            for j in i..=m {
                seg[i][j] = self.seg_fold(i, j);
            }
        }
        // Axiom (3), and u∘(Π(v))∘w' in D for every split.
        for i in 0..=m {
            for j in i..=m {
                let Some(pv) = seg[i][j] else {
                    self.wit.seg.offer_word(&w);
                    continue;
                };
                self.scratch.clear();
                self.scratch.extend_from_slice(&w[..i]);
                self.scratch.push(pv);
                self.scratch.extend_from_slice(&w[j..]);
                if !self.scratch_ok(Some(pw)) {
                    if i == j {
                        self.wit.c.offer_word(&w);
                    } else {
                        self.wit.ax3.offer_word(&w);
                    }
                }
            }
        }
        // Axiom (4), and inverses of products.
        let wi = pg.inverse_word(&w);
        self.scratch.clear();
        self.scratch.extend_from_slice(&wi);
        self.scratch.extend_from_slice(&w);
        if !self.scratch_ok(Some(one)) {
            self.wit.ax4.offer_word(&w);
        }
        self.scratch.clear();
        self.scratch.extend_from_slice(&wi);
        if !self.scratch_ok(Some(pg.inv(pw))) {
            self.wit.f.offer_word(&w);
        }
        for i in 0..=m {
            let (pu, pv) = (seg[0][i], seg[i][m]);
            // (Π(u), Π(v)) in D with product Π(w)
            match (pu, pv) {
                (Some(pu), Some(pv)) => {
                    if !pg.in_domain(&[pu, pv]) || pg.mul(pu, pv) != Some(pw) {
                        self.wit.a.offer_word(&w);
                    }
                }
                _ => self.wit.a.offer_word(&w),
            }
            // every binary bracketing agrees
            for j in i..=m {
                let l = seg[0][j].and_then(|x| seg[j][m].and_then(|y| pg.mul(x, y)));
                let r = seg[0][i].and_then(|x| seg[i][m].and_then(|y| pg.mul(x, y)));
                if l.is_none() || l != r {
                    self.wit.b.offer_word(&w);
                }
            }
            // u∘(1)∘v and its product
            let u = &w[..i];
            let v = &w[i..];
            self.scratch.clear();
            self.scratch.extend(pg.inverse_word(u));
            self.scratch.extend_from_slice(&w);
            let ok1 = self.scratch_ok(pv);
            self.scratch.clear();
            self.scratch.extend_from_slice(&w);
            self.scratch.extend(pg.inverse_word(v));
            let ok2 = self.scratch_ok(pu);
            if !ok1 || !ok2 {
                self.wit.d.offer_word(&w);
            }
            // Cancellation against earlier words with the same prefix u.
            if i >= 1 {
                if let Some(pv) = pv {
                    let st = self.stamp[i];
                    let ce = self.canc[i][pw];
                    if ce.0 == st {
                        if ce.1 as usize != pv {
                            self.wit.e.offer_word(&w);
                        }
                    } else {
                        self.canc[i][pw] = (st, pv as u32);
                    }
                    let ue = self.unc[i][pv];
                    if ue.0 == st {
                        if ue.1 as usize != pw {
                            self.wit.g.offer_word(&w);
                        }
                    } else {
                        self.unc[i][pv] = (st, pw as u32);
                    }
                }
            }
        }
    }
}

/// Sweep over words whose first letter is `≡ part (mod parts)`; the empty word
/// and the per-element checks belong to part 0. Merging the reports of all
/// parts gives the same result as a single sweep.
pub fn verify_partial_group_part(pg: &PartialGroupView, max_len: usize, part: usize, parts: usize) -> Report {
    let k = match pg.horizon() {
        Some(h) => max_len.min(h),
        None => max_len,
    };
    let mut sw = Sweep::new(pg, k);
    if part == 0 {
        // The empty word node; stamps for length-0 prefixes are unused.
        if !pg.in_domain(&[]) {
            sw.wit.seg.offer_word(&[]);
        }
    }
    if k >= 1 {
        for x in (0..pg.size()).filter(|x| x % parts.max(1) == part) {
            let p = pg.mul(pg.identity(), x).map_or(NONE, |v| v as u32);
            sw.w.push(x);
            sw.prods.push(p);
            sw.visit(true);
            sw.prods.pop();
            sw.w.pop();
        }
    }
    let wit = sw.wit;
    let mut r = Report::new();
    r.check_bounded("1.1(1)", wit.seg.0, k);
    r.check_bounded("1.1(fold)", wit.fold.0, k);
    r.check_bounded("1.1(3)", wit.ax3.0, k);
    r.check_bounded("1.1(4)", wit.ax4.0, k);
    r.check_bounded("1.4(a)", wit.a.0, k);
    r.check_bounded("1.4(b)", wit.b.0, k);
    r.check_bounded("1.4(c)", wit.c.0, k);
    r.check_bounded("1.4(d)", wit.d.0, k);
    r.check_bounded("1.4(e)", wit.e.0, k);
    r.check_bounded("1.4(f)", wit.f.0, k);
    r.check_bounded("1.4(g)", wit.g.0, k);
    if part == 0 {
        r.merge(element_checks(pg));
    }
    if k < max_len {
        for line in ["1.1(1)", "1.1(3)"] {
            r.annotate(line, alloc::format!("oracle horizon {k}"));
        }
    }
    r
}

/// Exhaustive bounded check of the partial-group axioms and their elementary consequences.
pub fn verify_partial_group(pg: &PartialGroupView, max_len: usize) -> Report {
    verify_partial_group_part(pg, max_len, 0, 1)
}

// Checks that quantify over elements rather than words.
fn element_checks(pg: &PartialGroupView) -> Report {
    let n = pg.size();
    let one = pg.identity();
    let mut r = Report::new();
    let conj = |x: usize, g: usize| -> Option<usize> {
        let w = [pg.inv(g), x, g];
        if pg.in_domain(&w) {
            pg.fold(&w)
        } else {
            None
        }
    };
    // (2), the identity and the inversion
    let mut ax2 = FirstWitness::default();
    if pg.fold(&[]) != Some(one) {
        ax2.offer_word(&[]);
    }
    for x in 0..n {
        if pg.fold(&[x]) != Some(x) || pg.inv(pg.inv(x)) != x {
            ax2.offer_word(&[x]);
        }
    }
    r.check("1.1(2)", ax2.0);
    let mut pairs = FirstWitness::default();
    for f in 0..n {
        for g in 0..n {
            if pg.in_domain(&[f, g]) != pg.mul(f, g).is_some() {
                pairs.offer_word(&[f, g]);
            }
        }
    }
    r.check("1.1(pairs)", pairs.0);

    let mut l5a = FirstWitness::default();
    let mut l5b = FirstWitness::default();
    for f in 0..n {
        for g in 0..n {
            let fg = pg.mul(f, g);
            let gf = pg.mul(g, f);
            let fc = conj(f, g);
            if let (Some(a), Some(b), Some(c)) = (fg, gf, fc) {
                if a == b && c != f {
                    l5a.offer_word(&[f, g]);
                }
            }
            if let (Some(c), Some(d)) = (fc, conj(g, f)) {
                if c == f && (fg.is_none() || fg != gf || d != g) {
                    l5b.offer_word(&[f, g]);
                }
            }
        }
    }
    r.check("1.5(a)", l5a.0);
    r.check("1.5(b)", l5b.0);

    let mut a = FirstWitness::default();
    let mut b = FirstWitness::default();
    let mut c = FirstWitness::default();
    let mut d = FirstWitness::default();
    for g in 0..n {
        if conj(one, g) != Some(one) {
            a.offer_word(&[g]);
        }
        let dg = pg.d_of(g);
        let dgi = pg.d_of(pg.inv(g));
        let mut image = ElemSet::new(n);
        for x in dg.iter() {
            let xi = pg.inv(x);
            let xg = conj(x, g);
            if !dg.contains(xi) || conj(xi, g).is_none() || conj(xi, g) != xg.map(|y| pg.inv(y)) {
                b.offer_word(&[x, g]);
            }
            match xg {
                Some(y) => {
                    if !image.insert(y) || conj(y, pg.inv(g)) != Some(x) {
                        c.offer_word(&[x, g]);
                    }
                }
                None => c.offer_word(&[x, g]),
            }
        }
        if image != dgi {
            c.offer_word(&[g]);
        }
    }
    for x in 0..n {
        if conj(x, one) != Some(x) {
            d.offer_word(&[x]);
        }
    }
    r.check("1.6(a)", a.0);
    r.check("1.6(b)", b.0);
    r.check("1.6(c)", c.0);
    r.check("1.6(d)", d.0);
    r
}
