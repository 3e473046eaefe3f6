//! Sweeps over the statements about a single partial normal subgroup.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use super::quotient::{enumerate_partial_subgroups, CORRESPONDENCE_MAX_BLOCKS};
use super::{closure_with, coset, double_coset, right_coset, up_witness, CosetAnalysis, PartialNormalSubgroup, UpPair};
use crate::bitset::ElemSet;
use crate::locality::{Locality, Mask, MaskIter};
use crate::report::{CheckLine, FirstWitness, Report, Witness};

/// Word length for the statements quantified over words in `N_L(T)` or `D`.
pub const NORMAL_WORD_BOUND: usize = 2;

const HYPOTHESIS: &str = "hypothesis-not-met";

fn p_part(mut n: usize, p: usize) -> usize {
    let mut q = 1;
    while n % p == 0 {
        n /= p;
        q *= p;
    }
    q
}

/// The product set `AB` of two subsets of `S`.
fn mask_product(loc: &Locality, a: Mask, b: Mask) -> Mask {
    let mut out = 0;
    for i in MaskIter(a) {
        for j in MaskIter(b) {
            out |= 1u64 << loc.s_mul_pos(i, j);
        }
    }
    out
}

/// The ↑-relation on all of `L∘Δ`, as bit rows.
struct UpRelation {
    pairs: Vec<UpPair>,
    index: BTreeMap<UpPair, usize>,
    rows: Vec<Vec<u64>>,
}

impl UpRelation {
    fn new(loc: &Locality, n: &PartialNormalSubgroup) -> Self {
        let mut pairs = Vec::new();
        for f in 0..loc.size() {
            let sf = loc.sg_mask(f);
            for &p in loc.object_masks() {
                if p & !sf == 0 {
                    pairs.push(UpPair { f, p });
                }
            }
        }
        let index = pairs.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let words = pairs.len().div_ceil(64);
        let rows = pairs
            .iter()
            .map(|&a| {
                let mut row = alloc::vec![0u64; words];
                for (j, &b) in pairs.iter().enumerate() {
                    if up_witness(loc, n, a, b).is_some() {
                        row[j / 64] |= 1u64 << (j % 64);
                    }
                }
                row
            })
            .collect();
        UpRelation { pairs, index, rows }
    }

    fn rel(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] & (1u64 << (j % 64)) != 0
    }

    fn of(&self, f: usize, p: Mask) -> usize {
        self.index[&UpPair { f, p }]
    }
}

/// Checks the statements about `N ⊴ L` and its cosets: Frattini calculus,
/// the ↑-relation, splitting, and the structure of maximal cosets.
pub fn verify_normal_theory(loc: &Locality, n: &PartialNormalSubgroup) -> Report {
    let mut r = Report::new();
    if !loc.is_partial_normal(n.members()) {
        r.check("1.7", Some(Witness::new(n.members().to_vec(), format!("N={} is not partially normal", n.members()))));
        return r;
    }
    let size = loc.size();
    let t = n.t_mask();
    let p = loc.p();
    let nl_t = loc.normalizer(t);
    let k = NORMAL_WORD_BOUND;

    // (T ∩ S_g)^g lies in T for every g
    let mut a = FirstWitness::default();
    for g in 0..size {
        if loc.conj_mask(t & loc.sg_mask(g), g).is_none_or(|m| m & !t != 0) {
            a.offer_word(&[g]);
        }
    }
    r.check("3.1(a)", a.0);
    let mut b = FirstWitness::default();
    for x in n.members() {
        let sx = loc.sg_mask(x);
        for &q in loc.s_subgroups() {
            if q & !sx == 0 {
                let qx = loc.conj_mask(q, x).unwrap_or(0);
                if mask_product(loc, q, t) != mask_product(loc, qx, t) {
                    b.offer(Witness::new(alloc::vec![x], format!("x={x} P={}", loc.mask_to_set(q))));
                }
            }
        }
    }
    r.check("3.1(b)", b.0);
    r.check(
        "3.1(c)",
        (!super::is_maximal_p_subgroup_in(loc, n.members(), t)).then(|| Witness::new(Vec::new(), format!("T={}", n.t(loc)))),
    );

    // for f in N_L(T) and x in N: xf = f x^f, with S_(x,f) = S_(f,x^f)
    let mut a = FirstWitness::default();
    let mut b = FirstWitness::default();
    for f in &nl_t {
        let fi = loc.inv(f);
        let sf = loc.sg_mask(f);
        for x in n.members() {
            if let Some(xf) = loc.mul(x, f) {
                let ok = (|| {
                    let xc = loc.conj(x, f)?;
                    let s1 = loc.s_w_mask(&[x, f]);
                    (loc.in_domain(&[f, fi, x, f])
                        && loc.mul(f, xc) == Some(xf)
                        && s1 == loc.s_w_mask(&[f, xc])
                        && s1 == loc.sg_mask(x) & sf)
                        .then_some(())
                })();
                if ok.is_none() {
                    a.offer_word(&[x, f]);
                }
            }
            let y = x;
            if let Some(fy) = loc.mul(f, y) {
                let ok = (|| {
                    let yc = loc.conj(y, fi)?;
                    let s1 = loc.s_w_mask(&[f, y]);
                    (loc.in_domain(&[f, y, fi, f])
                        && loc.mul(yc, f) == Some(fy)
                        && s1 == loc.s_w_mask(&[yc, f])
                        && s1 == loc.sg_mask(yc) & sf)
                        .then_some(())
                })();
                if ok.is_none() {
                    b.offer_word(&[f, y]);
                }
            }
        }
    }
    r.check("3.2(a)", a.0);
    r.check("3.2(b)", b.0);

    // words of length up to k over N_L(T)
    let nlt: Vec<usize> = nl_t.to_vec();
    let mut words: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    let mut frontier: Vec<Vec<usize>> = alloc::vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for w in &frontier {
            for &f in &nlt {
                let mut v = w.clone();
                v.push(f);
                if loc.in_domain(&v) {
                    next.push(v);
                }
            }
        }
        words.extend(next.iter().cloned());
        frontier = next;
    }
    let mut a = FirstWitness::default();
    let mut b = FirstWitness::default();
    for w in &words {
        let g = loc.prod(w).unwrap_or(loc.identity());
        let winv: Vec<usize> = w.iter().rev().map(|&f| loc.inv(f)).collect();
        for x in n.members() {
            let mut xw = alloc::vec![x];
            xw.extend_from_slice(w);
            if loc.in_domain(&xw) {
                let pm = loc.s_w_mask(&xw);
                let mut u = winv.clone();
                u.extend_from_slice(&xw);
                if !loc.in_domain(&u) || loc.conj_mask(pm, g) != Some(loc.s_w_mask(&u)) {
                    a.offer_word(&xw);
                }
            }
            let mut wy = w.clone();
            wy.push(x);
            if loc.in_domain(&wy) {
                let qm = loc.s_w_mask(&wy);
                let mut v = wy.clone();
                v.extend_from_slice(&winv);
                if !loc.in_domain(&v) || loc.s_w_mask(&v) != qm {
                    b.offer_word(&wy);
                }
            }
        }
    }
    r.check_bounded("3.3(a)", a.0, k);
    r.check_bounded("3.3(b)", b.0, k);

    // interleaved words (f1,g1) and (f1,g1,f2,g2) with g_i in N
    let mut w34 = FirstWitness::default();
    for &f1 in &nlt {
        for g1 in n.members() {
            if !loc.in_domain(&[f1, g1]) {
                continue;
            }
            for &f2 in &nlt {
                for g2 in n.members() {
                    let w = [f1, g1, f2, g2];
                    if !loc.in_domain(&w) {
                        continue;
                    }
                    let ok = (|| {
                        let f2i = loc.inv(f2);
                        let u1 = [f2i, g1, f2];
                        if !loc.in_domain(&u1) {
                            return None;
                        }
                        let gb1 = loc.prod(&u1)?;
                        let w2 = [f1, f2, gb1, g2];
                        let pw = loc.prod(&w)?;
                        if !loc.in_domain(&w2) || loc.s_w_mask(&w2) != loc.s_w_mask(&w) || loc.prod(&w2) != Some(pw) {
                            return None;
                        }
                        let f12 = loc.mul(f1, f2)?;
                        let gg = loc.mul(gb1, g2)?;
                        if loc.mul(f12, gg) != Some(pw) {
                            return None;
                        }
                        let gt1 = loc.conj(g1, loc.inv(f1))?;
                        let gt2 = loc.conj(g2, loc.inv(f12))?;
                        let gt = loc.mul(gt1, gt2)?;
                        (loc.mul(gt, f12) == Some(pw)).then_some(())
                    })();
                    if ok.is_none() {
                        w34.offer_word(&w);
                    }
                }
            }
        }
    }
    r.check("3.4", w34.0);

    // only meaningful when every N_L(P) has characteristic p
    let char_p = loc.object_masks().iter().all(|&pm| {
        loc.subgroup_as_group(&loc.normalizer(pm)).ok().and_then(|(g, _)| g.is_characteristic_p(p).ok()) == Some(true)
    });
    let cst = MaskIter(loc.full_mask())
        .filter(|&i| MaskIter(t).all(|j| loc.s_mul_pos(i, j) == loc.s_mul_pos(j, i)))
        .fold(0u64, |m, i| m | (1u64 << i));
    let ct = mask_product(loc, cst, t);
    if char_p {
        let mut w = FirstWitness::default();
        for g in n.members().intersection(&nl_t).iter() {
            if loc.conj_mask(ct, g) != Some(ct) || loc.conj_mask(cst, g) != Some(cst) {
                w.offer_word(&[g]);
            }
        }
        r.check("3.5", w.0);
    } else {
        r.push(CheckLine::skip("3.5", HYPOTHESIS));
    }

    // the ↑-relation and ↑-maximality
    let rel = UpRelation::new(loc, n);
    let an = CosetAnalysis::new(loc, n);
    let np = rel.pairs.len();
    let mut w36 = FirstWitness::default();
    for i in 0..np {
        if !rel.rel(i, i) {
            w36.offer(Witness::new(alloc::vec![rel.pairs[i].f], "not reflexive"));
        }
        for j in 0..np {
            if rel.rel(i, j) && (0..rel.rows[j].len()).any(|c| rel.rows[j][c] & !rel.rows[i][c] != 0) {
                w36.offer(Witness::new(alloc::vec![rel.pairs[i].f, rel.pairs[j].f], "not transitive"));
            }
        }
    }
    r.check("3.6", w36.0);
    let mut a = FirstWitness::default();
    for g in &loc.normalizer(loc.full_mask()) {
        if !an.up_max.contains(g) {
            a.offer_word(&[g]);
        }
    }
    r.check("3.7(a)", a.0);
    let mut b = FirstWitness::default();
    let mut w39 = FirstWitness::default();
    for f in &an.up_max {
        if !an.up_max.contains(loc.inv(f)) {
            b.offer_word(&[f]);
        }
        if t & !loc.sg_mask(f) != 0 {
            w39.offer_word(&[f]);
        }
    }
    r.check("3.7(b)", b.0);
    let mut c = FirstWitness::default();
    for f in &an.up_max {
        let i = rel.of(f, loc.sg_mask(f));
        for (j, bp) in rel.pairs.iter().enumerate() {
            if rel.rel(i, j) && (!an.up_max.contains(bp.f) || bp.p != loc.sg_mask(bp.f)) {
                c.offer_word(&[f, bp.f]);
            }
        }
    }
    r.check("3.7(c)", c.0);

    let mut w38 = FirstWitness::default();
    for (i, ap) in rel.pairs.iter().enumerate() {
        for (j, bp) in rel.pairs.iter().enumerate() {
            if !rel.rel(i, j) || t & !bp.p != 0 {
                continue;
            }
            let (g, q, h, rm) = (ap.f, ap.p, bp.f, bp.p);
            let ys: Vec<usize> = n.members().iter().filter(|&y| loc.mul(y, h) == Some(g)).collect();
            let ok = (|| {
                let [y] = ys[..] else { return None };
                let qy = loc.conj_mask(q, y)?;
                if qy & !rm != 0 || q & !loc.s_w_mask(&[y, h]) != 0 {
                    return None;
                }
                let sylow_in_n = |x: Mask| {
                    let nn = n.members().intersection(&loc.normalizer(x)).len();
                    (loc.s_normalizer(x) & t).count_ones() as usize == p_part(nn, p)
                };
                let qg = loc.conj_mask(q, g)?;
                (!sylow_in_n(qg) || sylow_in_n(qy)).then_some(())
            })();
            if ok.is_none() {
                w38.offer_word(&[g, h]);
            }
        }
    }
    r.check("3.8", w38.0);
    r.check("3.9", w39.0);

    let hyp310 = ct == loc.full_mask() && n.members().intersection(&nl_t).is_subset(&loc.normalizer(loc.full_mask()));
    if hyp310 {
        let mut w = FirstWitness::default();
        for f in &nl_t {
            if !an.up_max.contains(f) {
                w.offer_word(&[f]);
            }
        }
        r.check("3.10", w.0);
    } else {
        r.push(CheckLine::skip("3.10", HYPOTHESIS));
    }

    // f = xg with g ↑-maximal, and also f = g'y
    let mut w311 = FirstWitness::default();
    for f in 0..size {
        let left = an.frattini(f).is_ok();
        let right = an.up_max.iter().any(|g| n.members().iter().any(|y| loc.mul(g, y) == Some(f)));
        if !left || !right {
            w311.offer_word(&[f]);
        }
    }
    r.check("3.11", w311.0);

    let mut w312 = FirstWitness::default();
    for f in &an.up_max {
        for x in n.members() {
            let Some(xf) = loc.mul(x, f) else { continue };
            let s1 = loc.s_w_mask(&[x, f]);
            let ok = loc.conj(x, f).is_some_and(|xc| s1 == loc.sg_mask(xf) && s1 == loc.s_w_mask(&[f, xc]));
            if !ok {
                w312.offer_word(&[x, f]);
            }
        }
    }
    r.check("3.12", w312.0);

    // over the partial normal subgroups of N itself
    let (nview, emb) = loc.view().restrict(n.members());
    let mut back = alloc::vec![usize::MAX; size];
    for (i, &x) in emb.iter().enumerate() {
        back[x] = i;
    }
    let in_n = super::all_normal_with(&nview, |x| {
        closure_with(&nview, x, |y, g| loc.conj(emb[y], emb[g]).map(|z| back[z]))
    });
    let mut w313 = FirstWitness::default();
    for kset in &in_n {
        let kk = kset.map(size, |i| emb[i]);
        let invariant = nl_t.iter().all(|h| kk.iter().all(|x| loc.conj(x, h).is_none_or(|y| kk.contains(y))));
        if invariant && !loc.is_partial_normal(&kk) {
            w313.offer(Witness::new(kk.to_vec(), format!("K={kk}")));
        }
    }
    r.check("3.13", w313.0);

    // cosets against ↑
    let cosets: Vec<ElemSet> = (0..size).map(|f| coset(loc, n, f)).collect();
    let mut a = FirstWitness::default();
    for f in &nl_t {
        let rc = right_coset(loc, n, f);
        if cosets[f] != rc || (an.up_max.contains(f) && double_coset(loc, n, f) != rc) {
            a.offer_word(&[f]);
        }
    }
    r.check("3.14(a)", a.0);
    let mut b = FirstWitness::default();
    let mut c = FirstWitness::default();
    for g in 0..size {
        let gi = rel.of(g, loc.sg_mask(g));
        let mut maximal = true;
        for f in 0..size {
            let up = rel.rel(gi, rel.of(f, loc.sg_mask(f)));
            let sub = cosets[g].is_subset(&cosets[f]);
            let mem = cosets[f].contains(g);
            // the equivalence needs f to be ↑-maximal
            if (sub && !mem) || (an.up_max.contains(f) && (up != sub || sub != mem)) {
                b.offer_word(&[g, f]);
            }
            if sub && cosets[g] != cosets[f] {
                maximal = false;
            }
        }
        // a maximal coset is Nf for some ↑-maximal f, but need not be Ng for every member g
        let realized = an.up_max.iter().any(|f| cosets[f] == cosets[g]);
        if (an.up_max.contains(g) && !maximal) || (maximal && !realized) {
            c.offer_word(&[g]);
        }
    }
    r.check("3.14(b)", b.0);
    r.check("3.14(c)", c.0);
    let part = an.cosets();
    r.check("3.14(d)", part.as_ref().err().map(|e| Witness::new(Vec::new(), format!("{e}"))));
    let mut e = FirstWitness::default();
    if let Ok(part) = &part {
        let choices: Vec<Vec<usize>> = (0..size)
            .map(|g| part.blocks[part.block_of[g]].iter().filter(|&f| an.up_max.contains(f)).collect())
            .collect();
        for u in words_in_domain(loc, k) {
            let pu = loc.prod(&u).unwrap_or(loc.identity());
            let tsu = mask_product(loc, t, loc.s_w_mask(&u));
            let mut idx = alloc::vec![0usize; u.len()];
            loop {
                let v: Vec<usize> = u.iter().zip(&idx).map(|(&g, &i)| choices[g][i]).collect();
                let ok = loc.in_domain(&v)
                    && tsu & !loc.s_w_mask(&v) == 0
                    && loc.prod(&v).is_some_and(|pv| cosets[pu].is_subset(&cosets[pv]));
                if !ok {
                    e.offer_word(&u);
                    break;
                }
                let mut j = 0;
                while j < u.len() {
                    idx[j] += 1;
                    if idx[j] < choices[u[j]].len() {
                        break;
                    }
                    idx[j] = 0;
                    j += 1;
                }
                if j == u.len() {
                    break;
                }
            }
        }
    }
    r.check_bounded("3.14(e)", e.0, k);

    // correspondence, with H grown element by element from N
    match &part {
        Ok(part) if part.len() <= CORRESPONDENCE_MAX_BLOCKS => {
            let singles: Vec<ElemSet> = (0..size).map(|g| ElemSet::singleton(size, g)).collect();
            match enumerate_partial_subgroups(loc.view(), n.members(), &singles) {
                Some(hs) => {
                    let mut w = FirstWitness::default();
                    for h in &hs {
                        if h.iter().any(|g| !part.blocks[part.block_of[g]].is_subset(h)) {
                            w.offer(Witness::new(h.to_vec(), format!("H={h}")));
                        }
                    }
                    r.check("3.15", w.0);
                }
                None => r.push(CheckLine::skip("3.15", "too many partial subgroups")),
            }
        }
        Ok(_) => r.push(CheckLine::skip("3.15", format!("more than {CORRESPONDENCE_MAX_BLOCKS} cosets"))),
        Err(_) => r.check("3.15", Some(Witness::new(Vec::new(), "no coset partition"))),
    }
    r
}

fn words_in_domain(loc: &Locality, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let letters: Vec<usize> = (0..loc.size()).collect();
    crate::partial::for_each_domain_word(loc.view(), &letters, k, |w, _| {
        if !w.is_empty() {
            out.push(w.to_vec());
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::{all_partial_normal_subgroups, normal_closure};
    use crate::report::Status;
    use crate::zoo::{named_group, named_locality, LOCALITY_NAMES};

    #[test]
    fn o4_with_v() {
        let loc = named_locality("O4plus2:all").unwrap().locality;
        let o = loc.origin().unwrap().to_vec();
        let v = named_group("O4plus2").unwrap().extra("V").unwrap().map(loc.size(), |x| o.iter().position(|&e| e == x).unwrap());
        let n = normal_closure(&loc, &v);
        let r = verify_normal_theory(&loc, &n);
        assert!(r.all_pass(), "{r}");
        assert_eq!(r.status("3.12"), Some(Status::Pass));
    }

    #[test]
    fn every_zoo_normal_subgroup() {
        for name in LOCALITY_NAMES {
            let loc = named_locality(name).unwrap().locality;
            for n in all_partial_normal_subgroups(&loc) {
                let r = verify_normal_theory(&loc, &n);
                assert!(r.failures().is_empty(), "{name} N={}: {r}", n.members());
            }
        }
    }

    #[test]
    fn non_normal_set_is_rejected_first() {
        let loc = named_locality("S4:all").unwrap().locality;
        let n = all_partial_normal_subgroups(&loc).into_iter().find(|n| n.len() == 4).unwrap();
        let mut m = n.members().clone();
        m.remove(m.iter().nth(1).unwrap());
        let r = verify_normal_theory(&loc, &PartialNormalSubgroup::new_unchecked(&loc, m));
        assert_eq!(r.status("1.7"), Some(Status::Fail));
        assert_eq!(r.len(), 1);
    }
}
