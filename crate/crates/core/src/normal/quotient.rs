//! Quotient localities `L/N`, projections, the first isomorphism theorem and
//! the partial subgroup correspondence.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use thiserror::Error;

use super::{coset, CosetAnalysis, CosetPartition, NormalError, PartialNormalSubgroup};
use crate::bitset::ElemSet;
use crate::group::GroupError;
use crate::locality::{sublocality_with, verify_locality, verify_objectivity, Locality, LocalityError, Mask};
use crate::partial::{
    for_each_domain_word, generated_partial_subgroup, verify_homomorphism, verify_partial_group, Oracle,
    PartialGroupError, PartialGroupHom, PartialGroupView,
};
use crate::report::{FirstWitness, Report, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuotientError {
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error(transparent)]
    Locality(#[from] LocalityError),
    #[error(transparent)]
    PartialGroup(#[from] PartialGroupError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("N is not contained in the kernel")]
    NotInKernel,
    #[error("map is not constant on the maximal coset of element {0}")]
    NotFactoring(usize),
    #[error("N_L(P)/Θ(P) is not of characteristic p for P = {0}")]
    ThetaHypothesis(String),
}

/// A map of localities given by its image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    pub map: Vec<usize>,
}

impl Projection {
    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn hom(&self) -> PartialGroupHom {
        PartialGroupHom { map: self.map.clone() }
    }

    pub fn image(&self, cod_size: usize, x: &ElemSet) -> ElemSet {
        ElemSet::from_iter(cod_size, x.iter().map(|g| self.map[g]))
    }

    pub fn kernel(&self, cod: &Locality) -> ElemSet {
        ElemSet::from_iter(self.map.len(), (0..self.map.len()).filter(|&g| self.map[g] == cod.identity()))
    }

    /// Image of a subset of `S` as a mask over the codomain's `S`.
    pub fn image_mask(&self, dom: &Locality, cod: &Locality, m: Mask) -> Option<Mask> {
        cod.set_to_mask(&self.image(cod.size(), &dom.mask_to_set(m)))
    }

    pub fn compose(&self, then: &Projection) -> Projection {
        Projection { map: self.map.iter().map(|&x| then.map[x]).collect() }
    }
}

/// `L/N` with the canonical projection `ρ` and the partition it came from.
#[derive(Debug, Clone)]
pub struct Quotient {
    pub locality: Locality,
    pub projection: Projection,
    pub cosets: CosetPartition,
    pub up_max: ElemSet,
}

/// The quotient locality: elements are the maximal cosets (numbered by their
/// smallest ↑-maximal member), and a word is accepted when the word of
/// representatives is.
pub fn quotient(loc: &Locality, n: &PartialNormalSubgroup) -> Result<Quotient, QuotientError> {
    let an = CosetAnalysis::new(loc, n);
    let cosets = an.cosets()?;
    let m = cosets.len();
    let reps = cosets.reps.clone();
    let block_of = cosets.block_of.clone();
    let parent = loc.view().oracle().clone();
    let lift = reps.clone();
    let oracle = Oracle::Custom {
        name: String::from("quotient"),
        horizon: parent.horizon(),
        f: Arc::new(move |w: &[usize]| {
            let up: Vec<usize> = w.iter().map(|&i| lift[i]).collect();
            parent.accepts(&up)
        }),
    };
    let labels = loc.view().labels().map(|_| reps.iter().map(|&r| loc.label(r)).collect());
    let view = PartialGroupView::from_oracle(
        m,
        block_of[loc.identity()],
        reps.iter().map(|&r| block_of[loc.inv(r)]).collect(),
        |a, b| loc.mul(reps[a], reps[b]).map_or(0, |c| block_of[c]),
        oracle,
        labels,
    )?;
    let projection = Projection { map: block_of };
    let s = projection.image(m, loc.sylow());
    let objects: Vec<ElemSet> = loc.objects().iter().map(|p| projection.image(m, p)).collect();
    let locality = Locality::new(view, loc.p(), &s, &objects)?;
    Ok(Quotient { locality, projection, cosets, up_max: an.up_max })
}

/// Every accepted word of `cod` up to `k` has a preimage in `D(dom)`, searched
/// letter by letter through the fibers.
fn preimage_witness(dom: &Locality, cod: &Locality, proj: &Projection, letters: &[usize], k: usize) -> Option<Witness> {
    let mut fibers: Vec<Vec<usize>> = alloc::vec![Vec::new(); cod.size()];
    for &g in letters {
        fibers[proj.apply(g)].push(g);
    }
    fn lift(dom: &Locality, fibers: &[Vec<usize>], w: &[usize], acc: &mut Vec<usize>) -> bool {
        if acc.len() == w.len() {
            return true;
        }
        for &g in &fibers[w[acc.len()]] {
            acc.push(g);
            if dom.in_domain(acc) && lift(dom, fibers, w, acc) {
                return true;
            }
            acc.pop();
        }
        false
    }
    let cod_letters: Vec<usize> = (0..cod.size()).collect();
    let mut bad = FirstWitness::default();
    for_each_domain_word(cod.view(), &cod_letters, k, |w, _| {
        if !bad.is_set() && !lift(dom, &fibers, w, &mut Vec::with_capacity(w.len())) {
            bad.offer_word(w);
        }
    });
    bad.0
}

/// Checks that `proj` is a projection: a homomorphism mapping `D` onto `D'`
/// (words up to `k`) and `Δ` onto `Δ'`.
pub fn verify_projection(dom: &Locality, cod: &Locality, proj: &Projection, k: usize) -> Report {
    let mut r = verify_homomorphism(dom.view(), cod.view(), &proj.hom(), k);
    if !r.all_pass() {
        return r;
    }
    let all: Vec<usize> = (0..dom.size()).collect();
    r.check_bounded("4.4(1)", preimage_witness(dom, cod, proj, &all, k), k);
    let mut img: Vec<Option<Mask>> = dom.object_masks().iter().map(|&p| proj.image_mask(dom, cod, p)).collect();
    img.sort_unstable();
    img.dedup();
    let want: Vec<Option<Mask>> = cod.object_masks().iter().map(|&m| Some(m)).collect();
    r.check(
        "4.4(2)",
        (img != want).then(|| Witness::new(Vec::new(), format!("{} image objects vs {} objects", img.len(), want.len()))),
    );
    r
}

fn first_failure(r: &Report) -> Option<Witness> {
    r.failures().first().map(|l| Witness::new(Vec::new(), format!("{} {}", l.id, l.witness.as_ref().map_or("", |w| w.text.as_str()))))
}

/// Checks the quotient by `N`: the partial group axioms and well-definedness,
/// the kernel and fibers of `ρ`, the locality axioms downstairs, and the
/// statements relating `L` and `L/N`.
pub fn verify_quotient(loc: &Locality, n: &PartialNormalSubgroup, k: usize) -> Report {
    let mut r = Report::new();
    let q = match quotient(loc, n) {
        Ok(q) => q,
        Err(e) => {
            r.check("3.16", Some(Witness::new(Vec::new(), format!("{e}"))));
            return r;
        }
    };
    let ql = &q.locality;
    let rho = &q.projection;

    r.check_bounded("3.16", first_failure(&verify_partial_group(ql.view(), k)), k);

    // Π̄ does not depend on the ↑-maximal preimages chosen
    let k3 = k.min(3);
    let mut wd = FirstWitness::default();
    let choices: Vec<Vec<usize>> = q.cosets.blocks.iter().map(|b| b.iter().filter(|&x| q.up_max.contains(x)).collect()).collect();
    let letters: Vec<usize> = (0..ql.size()).collect();
    for_each_domain_word(ql.view(), &letters, k3, |w, p| {
        if wd.is_set() || w.is_empty() {
            return;
        }
        let mut idx = alloc::vec![0usize; w.len()];
        loop {
            let up: Vec<usize> = w.iter().zip(&idx).map(|(&b, &i)| choices[b][i]).collect();
            if loc.prod(&up).map(|x| rho.apply(x)) != Some(p) {
                wd.offer_word(w);
                return;
            }
            let mut j = 0;
            while j < w.len() {
                idx[j] += 1;
                if idx[j] < choices[w[j]].len() {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j == w.len() {
                break;
            }
        }
    });
    r.check_bounded("3.16(well-defined)", wd.0, k3);
    let mut inv_bad = FirstWitness::default();
    for g in 0..loc.size() {
        if rho.apply(loc.inv(g)) != ql.inv(rho.apply(g)) {
            inv_bad.offer_word(&[g]);
        }
    }
    r.check("3.16(inverse)", inv_bad.0);
    let ker = rho.kernel(ql);
    r.check("3.16(kernel)", (&ker != n.members()).then(|| Witness::new(ker.to_vec(), format!("kernel={ker}"))));

    // fibers are the maximal cosets, recomputed from scratch
    let mut fib = FirstWitness::default();
    for g in 0..loc.size() {
        let f = ElemSet::from_iter(loc.size(), (0..loc.size()).filter(|&x| rho.apply(x) == rho.apply(g)));
        if q.up_max.contains(g) && coset(loc, n, g) != f {
            fib.offer(Witness::new(alloc::vec![g], format!("fiber of {g} is not N{g}")));
        }
    }
    r.check("4.3(a)", fib.0);

    let t = n.t_mask();
    let mut c = FirstWitness::default();
    for &pm in loc.object_masks() {
        for &qm in loc.object_masks() {
            if pm & qm & t != t {
                continue;
            }
            let up = rho.image(ql.size(), &loc.transporter(pm, qm));
            let (Some(pb), Some(qb)) = (rho.image_mask(loc, ql, pm), rho.image_mask(loc, ql, qm)) else {
                c.offer(Witness::new(alloc::vec![], "object image outside S̄"));
                continue;
            };
            if up != ql.transporter(pb, qb) {
                c.offer(Witness::new(alloc::vec![pm as usize, qm as usize], format!("N_L(P,Q) image differs, P={} Q={}", loc.mask_to_set(pm), loc.mask_to_set(qm))));
            }
        }
    }
    r.check("4.3(c)", c.0);
    let bij = ql.size() == loc.size();
    r.check("4.3(d)", (bij != (n.len() == 1)).then(|| Witness::new(Vec::new(), format!("|L/N|={} |N|={}", ql.size(), n.len()))));
    let mut step4 = FirstWitness::default();
    for g in &q.up_max {
        if rho.image_mask(loc, ql, loc.sg_mask(g)) != Some(ql.sg_mask(rho.apply(g))) {
            step4.offer_word(&[g]);
        }
    }
    r.check("4.3(4)", step4.0);

    let mut lr = verify_locality(ql);
    lr.merge(verify_objectivity(ql, k3));
    r.check("4.5", first_failure(&lr));

    r.merge(verify_projection(loc, ql, rho, k3));
    r.merge(subgroup_correspondence(loc, n, &q));

    // ρ restricted to L_T = N_L(T) is still a projection onto L/N
    match sublocality_with(loc, t, loc.object_masks()) {
        Ok((lt, emb)) => {
            let proj_t = Projection { map: emb.iter().map(|&x| rho.apply(x)).collect() };
            let mut sub = verify_homomorphism(lt.view(), ql.view(), &proj_t.hom(), k3);
            let pre = preimage_witness(loc, ql, rho, &emb, k3);
            sub.check_bounded("4.11", pre, k3);
            r.check_bounded("4.11", first_failure(&sub), k3);
        }
        Err(e) => r.check("4.11", Some(Witness::new(Vec::new(), format!("{e}")))),
    }
    r
}

/// Blocks of the partition above which correspondence enumerates exhaustively.
pub const CORRESPONDENCE_MAX_BLOCKS: usize = 24;
const CORRESPONDENCE_MAX_SUBGROUPS: usize = 4096;

pub(super) fn enumerate_partial_subgroups(view: &PartialGroupView, start: &ElemSet, steps: &[ElemSet]) -> Option<BTreeSet<ElemSet>> {
    let first = generated_partial_subgroup(view, start).members;
    let mut found: BTreeSet<ElemSet> = BTreeSet::new();
    found.insert(first.clone());
    let mut queue = alloc::vec![first];
    while let Some(h) = queue.pop() {
        for s in steps {
            if s.is_subset(&h) {
                continue;
            }
            let next = generated_partial_subgroup(view, &h.union(s)).members;
            if found.insert(next.clone()) {
                if found.len() > CORRESPONDENCE_MAX_SUBGROUPS {
                    return None;
                }
                queue.push(next);
            }
        }
    }
    Some(found)
}

/// Partial subgroups `H ⊇ N` (generated from `N` and maximal cosets) against the
/// partial subgroups of `L/N` (generated element by element), plus the
/// intersection and maximal `p`-subgroup statements for each `H`.
pub fn subgroup_correspondence(loc: &Locality, n: &PartialNormalSubgroup, q: &Quotient) -> Report {
    let mut r = Report::new();
    let ql = &q.locality;
    let rho = &q.projection;
    let m = ql.size();
    if q.cosets.len() > CORRESPONDENCE_MAX_BLOCKS {
        for id in ["3.15", "4.7", "4.7(normal)", "4.9", "4.10"] {
            r.push(crate::report::CheckLine::skip(id, format!("more than {CORRESPONDENCE_MAX_BLOCKS} cosets")));
        }
        return r;
    }
    let up = enumerate_partial_subgroups(loc.view(), n.members(), &q.cosets.blocks);
    let singles: Vec<ElemSet> = (0..m).map(|b| ElemSet::singleton(m, b)).collect();
    let down = enumerate_partial_subgroups(ql.view(), &ElemSet::singleton(m, ql.identity()), &singles);
    let (Some(up), Some(down)) = (up, down) else {
        for id in ["3.15", "4.7", "4.7(normal)", "4.9", "4.10"] {
            r.push(crate::report::CheckLine::skip(id, "too many partial subgroups"));
        }
        return r;
    };

    let mut unions = FirstWitness::default();
    let mut images: BTreeSet<ElemSet> = BTreeSet::new();
    let mut corr = FirstWitness::default();
    let mut normal = FirstWitness::default();
    for h in &up {
        let img = rho.image(m, h);
        let back = ElemSet::from_iter(loc.size(), (0..loc.size()).filter(|&g| img.contains(rho.apply(g))));
        if &back != h {
            unions.offer(Witness::new(h.to_vec(), format!("H={h} is not a union of maximal cosets")));
        }
        if !images.insert(img.clone()) {
            corr.offer(Witness::new(h.to_vec(), format!("two subgroups map to {img}")));
        }
        if loc.is_partial_normal(h) != ql.is_partial_normal(&img) {
            normal.offer(Witness::new(h.to_vec(), format!("normality differs for H={h}")));
        }
    }
    if images != down {
        corr.offer(Witness::new(Vec::new(), format!("{} images vs {} partial subgroups of L/N", images.len(), down.len())));
    }
    r.check("3.15", unions.0);
    r.check("4.7", corr.0);
    r.check("4.7(normal)", normal.0);

    let mut samples: Vec<ElemSet> = alloc::vec![loc.sylow().clone()];
    samples.extend(loc.object_masks().iter().map(|&p| loc.normalizer(p)));
    samples.extend((0..loc.size()).map(|g| loc.d_of(g)));
    let mut w49 = FirstWitness::default();
    let mut w410 = FirstWitness::default();
    for h in &up {
        let hi = rho.image(m, h);
        for x in &samples {
            if rho.image(m, &x.intersection(h)) != rho.image(m, x).intersection(&hi) {
                w49.offer(Witness::new(h.to_vec(), format!("H={h} X={x}")));
            }
        }
        if loc.is_partial_normal(h) {
            let u = rho.image_mask(loc, ql, loc.set_to_mask(&loc.sylow().intersection(h)).unwrap_or(0));
            let ok = u.is_some_and(|u| super::is_maximal_p_subgroup_in(ql, &hi, u));
            if !ok {
                w410.offer(Witness::new(h.to_vec(), format!("(S∩M)ρ not maximal in Mρ, M={h}")));
            }
        }
    }
    r.check("4.9", w49.0);
    r.check("4.10", w410.0);
    r
}

/// `γ : L/N → L'` with `ρ∘γ = β`, for a map `β` constant on maximal cosets of `N`.
pub fn first_isomorphism(loc: &Locality, beta: &Projection, cod: &Locality, n: &PartialNormalSubgroup) -> Result<(Quotient, Projection), QuotientError> {
    if !n.members().is_subset(&beta.kernel(cod)) {
        return Err(QuotientError::NotInKernel);
    }
    let q = quotient(loc, n)?;
    let gamma = Projection { map: q.cosets.reps.iter().map(|&r| beta.apply(r)).collect() };
    for g in 0..loc.size() {
        if gamma.apply(q.projection.apply(g)) != beta.apply(g) {
            return Err(QuotientError::NotFactoring(g));
        }
    }
    Ok((q, gamma))
}

/// Checks the factorization `β = ρ∘γ`, that `γ` is a projection, and that `γ` is
/// an isomorphism exactly when `N = Ker β`.
pub fn verify_first_isomorphism(loc: &Locality, beta: &Projection, cod: &Locality, n: &PartialNormalSubgroup, k: usize) -> Report {
    let mut r = Report::new();
    let (q, gamma) = match first_isomorphism(loc, beta, cod, n) {
        Ok(x) => x,
        Err(e) => {
            r.check("4.6", Some(Witness::new(Vec::new(), format!("{e}"))));
            return r;
        }
    };
    r.pass("4.6");
    let ql = &q.locality;
    r.check("4.6(projection)", first_failure(&verify_projection(ql, cod, &gamma, k)));
    let injective = ElemSet::from_iter(cod.size(), gamma.map.iter().copied()).len() == ql.size();
    let is_ker = beta.kernel(cod) == *n.members();
    let mut iso = (injective != is_ker).then(|| Witness::new(Vec::new(), format!("injective={injective} N=Ker={is_ker}")));
    if iso.is_none() && injective {
        // the inverse of γ also maps accepted words to accepted words
        let back = Projection {
            map: (0..cod.size()).map(|x| gamma.map.iter().position(|&y| y == x).unwrap_or(0)).collect(),
        };
        iso = first_failure(&verify_homomorphism(cod.view(), ql.view(), &back.hom(), k));
    }
    r.check("4.6(iso)", iso);
    r
}
