//! Objectivity and locality verifiers.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::ops::{gamma_objects, sublocality_with};
use super::{conjugate_into_s, op_subgroup, op_subgroup_brute_force, Locality, Mask, MaskIter};
use crate::bitset::ElemSet;
use crate::group::is_p_power;
use crate::partial::generated_partial_subgroup;
use crate::report::{fmt_elems, CheckLine, FirstWitness, Report, Witness};

// Word checks that only look at short words.
const BISET_LEN: usize = 2;
const SUBLOCALITY_BOUND: usize = 2;

#[derive(Default)]
struct ObjWitnesses {
    o1: FirstWitness,
    c23: FirstWitness,
    chain: FirstWitness,
    a24: FirstWitness,
    biset: FirstWitness,
}

struct ObjSweep<'a> {
    loc: &'a Locality,
    k: usize,
    w: Vec<usize>,
    // positions of every point of S after each prefix
    pos: Vec<[u8; 64]>,
    alive: Vec<Mask>,
    nls: Vec<usize>,
    wit: ObjWitnesses,
    scratch: Vec<usize>,
}

impl ObjSweep<'_> {
    fn visit(&mut self) {
        let loc = self.loc;
        let m = self.w.len();
        let alive = self.alive[m];
        let raw = loc.in_domain(&self.w);
        let obj = loc.is_object(alive);
        if raw != obj {
            self.wit.o1.offer_word(&self.w);
        }
        if obj {
            self.check_accepted(alive);
        }
        if m == self.k {
            return;
        }
        let sl = loc.s_list.len();
        for g in 0..loc.size() {
            let mut pos = self.pos[m];
            let mut a = alive;
            for b in MaskIter(alive) {
                match loc.sconj_pos(g, pos[b] as usize) {
                    Some(y) => pos[b] = y as u8,
                    None => a &= !(1u64 << b),
                }
            }
            debug_assert!(sl <= 64);
            self.w.push(g);
            self.pos.push(pos);
            self.alive.push(a);
            self.visit();
            self.alive.pop();
            self.pos.pop();
            self.w.pop();
        }
    }

    fn check_accepted(&mut self, alive: Mask) {
        let loc = self.loc;
        let m = self.w.len();
        let w = &self.w;
        let prod = loc.view.fold(w);
        // Conjugation along w agrees with conjugation by Π(w) on S_w.
        match prod {
            None => self.wit.c23.offer_word(w),
            Some(p) => {
                let last = &self.pos[m];
                if MaskIter(alive).any(|b| loc.conj(loc.s_list[b], p) != Some(loc.s_list[last[b] as usize])) {
                    self.wit.c23.offer_word(w);
                }
            }
        }
        // The chain S_w, S_w^{g1}, ... stays in Δ.
        for i in 0..=m {
            let xi = MaskIter(alive).fold(0u64, |acc, b| acc | (1u64 << self.pos[i][b]));
            if !loc.is_object(xi) {
                self.wit.chain.offer_word(w);
                break;
            }
        }
        if m == 3 {
            if let Some(d) = prod {
                let (a, b, c) = (w[0], w[1], w[2]);
                let bc = loc.mul(b, c);
                let ab = loc.mul(a, b);
                if bc.is_none() || loc.mul(loc.inv(a), d) != bc || ab.is_none() || loc.mul(d, loc.inv(c)) != ab {
                    self.wit.a24.offer_word(w);
                }
            }
        }
        if m <= BISET_LEN {
            let mut bad = false;
            'outer: for &x in &self.nls {
                for &y in &self.nls {
                    self.scratch.clear();
                    self.scratch.push(x);
                    self.scratch.extend_from_slice(w);
                    self.scratch.push(y);
                    if !loc.in_domain(&self.scratch) {
                        bad = true;
                        break 'outer;
                    }
                }
            }
            if bad {
                self.wit.biset.offer_word(w);
            }
        }
    }
}

fn mask_text(loc: &Locality, m: Mask) -> alloc::string::String {
    format!("{}", loc.mask_to_set(m))
}

/// Checks on objects and elements that do not depend on the word sweep.
fn element_checks(loc: &Locality, r: &mut Report) {
    let n = loc.size();
    let subs = loc.s_subgroups();

    // Overgroups of conjugates of objects, inside objects, are objects.
    let mut o2 = FirstWitness::default();
    for &x in &loc.objects {
        for g in 0..n {
            let Some(z) = loc.conj_mask(x, g) else { continue };
            for &y in &loc.objects {
                if z & !y != 0 {
                    continue;
                }
                for &u in subs {
                    if z & !u == 0 && u & !y == 0 && !loc.is_object(u) {
                        o2.offer(Witness::new(
                            alloc::vec![g],
                            format!("X={} g={} U={}", mask_text(loc, x), g, mask_text(loc, u)),
                        ));
                    }
                }
            }
        }
    }
    r.check("2.1(O2)", o2.0);

    let mut a = FirstWitness::default();
    let mut b = FirstWitness::default();
    let mut c = FirstWitness::default();
    for g in 0..n {
        let sg = loc.sg_mask(g);
        if !loc.is_object(sg) {
            a.offer(Witness::new(alloc::vec![g], format!("g={g} S_g={}", mask_text(loc, sg))));
        }
        // c_g is an isomorphism onto S_{g⁻¹}, inverted by c_{g⁻¹}
        let gi = loc.inv(g);
        let img = loc.conj_mask(sg, g).unwrap_or(0);
        let mut ok = img == loc.sg_mask(gi) && img.count_ones() == sg.count_ones();
        if ok {
            for i in MaskIter(sg) {
                let j = loc.sconj_pos(g, i).unwrap();
                if loc.sconj_pos(gi, j) != Some(i) {
                    ok = false;
                }
                for k in MaskIter(sg) {
                    let prod = loc.s_mul_pos(i, k);
                    let lhs = loc.sconj_pos(g, prod);
                    let rhs = loc.s_mul_pos(j, loc.sconj_pos(g, k).unwrap());
                    if lhs != Some(rhs) {
                        ok = false;
                    }
                }
            }
        }
        if !ok {
            b.offer(Witness::new(alloc::vec![g], format!("g={g}")));
        }
        for &p in &loc.objects {
            if p & !sg == 0 && !loc.conj_mask(p, g).is_some_and(|q| loc.is_object(q)) {
                c.offer(Witness::new(alloc::vec![g], format!("g={g} P={}", mask_text(loc, p))));
            }
        }
    }
    r.check("2.6(a)", a.0);
    r.check("2.6(b)", b.0);
    r.check("2.6(c)", c.0);

    // Normalizers of objects are subgroups, and c_g carries them isomorphically.
    let mut na = FirstWitness::default();
    let mut nb = FirstWitness::default();
    let normalizers: Vec<ElemSet> = loc.objects.iter().map(|&x| loc.normalizer(x)).collect();
    for (xi, &x) in loc.objects.iter().enumerate() {
        let nx = &normalizers[xi];
        let q = loc.subgroup_core(nx);
        let closed = loc.view.is_partial_subgroup(nx) && nx.iter().all(|a| nx.iter().all(|b| loc.mul(a, b).is_some()));
        if !closed || x & !q != 0 || !loc.is_object(q) {
            na.offer(Witness::new(nx.to_vec(), format!("X={}", mask_text(loc, x))));
        }
        for g in 0..n {
            let Some(y) = loc.conj_mask(x, g) else { continue };
            let ny = loc.normalizer(y);
            let mut imgs = ElemSet::new(n);
            let mut ok = ny.len() == nx.len();
            for h in nx {
                match loc.conj(h, g) {
                    Some(k) if ny.contains(k) => {
                        imgs.insert(k);
                    }
                    _ => ok = false,
                }
            }
            ok &= imgs.len() == nx.len();
            if ok {
                'pairs: for h1 in nx {
                    for h2 in nx {
                        let lhs = loc.mul(h1, h2).and_then(|h| loc.conj(h, g));
                        let rhs = loc.conj(h1, g).zip(loc.conj(h2, g)).and_then(|(u, v)| loc.mul(u, v));
                        if lhs.is_none() || lhs != rhs {
                            ok = false;
                            break 'pairs;
                        }
                    }
                }
            }
            if !ok {
                nb.offer(Witness::new(alloc::vec![g], format!("X={} g={g}", mask_text(loc, x))));
            }
        }
    }
    r.check("2.3(a)", na.0);
    r.check("2.3(b)", nb.0);

    // X^{fg} = (X^f)^g for X ≤ S_{(f,g)}
    let mut b24 = FirstWitness::default();
    for f in 0..n {
        for g in 0..n {
            let Some(fg) = loc.mul(f, g) else { continue };
            let sfg = loc.s_w_mask(&[f, g]);
            for &x in &loc.objects {
                if x & !sfg != 0 {
                    continue;
                }
                let two = loc.conj_mask(x, f).and_then(|y| loc.conj_mask(y, g));
                if two.is_none() || two != loc.conj_mask(x, fg) {
                    b24.offer(Witness::new(alloc::vec![f, g], format!("X={} (f,g)=({f},{g})", mask_text(loc, x))));
                }
            }
        }
    }
    r.check("2.4(b)", b24.0);

    // f^g = f forces fg = gf and g^f = g
    let mut c25 = FirstWitness::default();
    for f in 0..n {
        for g in 0..n {
            if loc.conj(f, g) != Some(f) {
                continue;
            }
            let ok = loc.mul(f, g).is_some() && loc.mul(f, g) == loc.mul(g, f) && loc.conj(g, f) == Some(g);
            if !ok {
                c25.offer(Witness::word(&[f, g]));
            }
        }
    }
    r.check("2.5", c25.0);
}

/// The part of the objectivity sweep over words whose first letter is
/// `≡ part (mod parts)`; element checks run in part 0.
pub fn verify_objectivity_part(loc: &Locality, max_len: usize, part: usize, parts: usize) -> Report {
    let k = loc.view.horizon().map_or(max_len, |h| max_len.min(h));
    let mut identity_pos = [0u8; 64];
    for (i, p) in identity_pos.iter_mut().enumerate().take(loc.s_list.len()) {
        *p = i as u8;
    }
    let nls = loc.normalizer(loc.full_mask()).to_vec();
    let mut sw = ObjSweep {
        loc,
        k,
        w: Vec::with_capacity(k),
        pos: alloc::vec![identity_pos],
        alive: alloc::vec![loc.full_mask()],
        nls,
        wit: ObjWitnesses::default(),
        scratch: Vec::new(),
    };
    if part == 0 {
        let raw = loc.in_domain(&[]);
        if raw != loc.is_object(loc.full_mask()) {
            sw.wit.o1.offer_word(&[]);
        }
    }
    if k >= 1 {
        for g in (0..loc.size()).filter(|g| g % parts.max(1) == part) {
            let mut pos = identity_pos;
            let mut a = loc.full_mask();
            for b in MaskIter(a) {
                match loc.sconj_pos(g, b) {
                    Some(y) => pos[b] = y as u8,
                    None => a &= !(1u64 << b),
                }
            }
            sw.w.push(g);
            sw.pos.push(pos);
            sw.alive.push(a);
            sw.visit();
            sw.alive.pop();
            sw.pos.pop();
            sw.w.pop();
        }
    }
    let wit = sw.wit;
    let mut r = Report::new();
    r.check_bounded("2.1(O1)", wit.o1.0, k);
    r.check_bounded("2.3(c)", wit.c23.0, k);
    r.check_bounded("2.7(chain)", wit.chain.0, k);
    r.check_bounded("2.4(a)", wit.a24.0, k.min(3));
    r.check_bounded("2.9", wit.biset.0, k.min(BISET_LEN));
    if k < max_len {
        r.annotate("2.1(O1)", format!("oracle horizon {k}"));
    }
    if part == 0 {
        element_checks(loc, &mut r);
    }
    r
}

/// Bounded objectivity check: the domain agrees with the object criterion on
/// all words up to `max_len`, plus the conjugation calculus of objects.
pub fn verify_objectivity(loc: &Locality, max_len: usize) -> Report {
    verify_objectivity_part(loc, max_len, 0, 1)
}

fn p_part(mut n: usize, p: usize) -> usize {
    let mut q = 1;
    while n % p == 0 {
        n /= p;
        q *= p;
    }
    q
}

/// `N_S(X)` is a Sylow subgroup of the group `N_L(X)`.
fn normalizer_sylow_ok(loc: &Locality, x: Mask) -> bool {
    let nl = loc.normalizer(x);
    let ns = loc.s_normalizer(x);
    loc.subgroup_as_group(&nl).is_ok() && ns.count_ones() as usize == p_part(nl.len(), loc.p)
}

/// Subgroups of `L` generated by at most two elements.
pub(crate) fn small_subgroups(loc: &Locality) -> Vec<ElemSet> {
    let n = loc.size();
    let mut found: BTreeSet<ElemSet> = BTreeSet::new();
    for a in 0..n {
        for b in a..n {
            let h = generated_partial_subgroup(&loc.view, &ElemSet::from_iter(n, [a, b])).members;
            if !found.contains(&h) && loc.is_subgroup(&h) {
                found.insert(h);
            }
        }
    }
    let mut v: Vec<ElemSet> = found.into_iter().collect();
    super::sort_subgroups(&mut v);
    v
}

/// Locality checks: `S ∈ Δ`, `S` a maximal `p`-subgroup, Sylow-type
/// statements, normalizer sublocalities and `O_p(L)`.
pub fn verify_locality(loc: &Locality) -> Report {
    let mut r = Report::new();
    let full = loc.full_mask();
    r.check(
        "2.8(S)",
        (!loc.is_object(full)).then(|| Witness::new(Vec::new(), "S is not an object")),
    );
    let sl = loc.s_list.len();
    r.check(
        "2.8(p)",
        (!is_p_power(sl, loc.p)).then(|| Witness::new(Vec::new(), format!("|S|={sl}"))),
    );
    let nls = loc.normalizer(full);
    let l2 = match loc.subgroup_as_group(&nls) {
        Err(_) => Some(Witness::new(nls.to_vec(), "N_L(S) is not a subgroup")),
        Ok(_) => {
            let pp = p_part(nls.len(), loc.p);
            (pp != sl).then(|| Witness::new(nls.to_vec(), format!("|N_L(S)|={} |S|={sl}", nls.len())))
        }
    };
    r.check("2.8(L2)", l2);

    let mut w210 = FirstWitness::default();
    for &p in &loc.objects {
        let ns = loc.s_normalizer(p);
        let found = (0..loc.size()).any(|g| {
            ns & !loc.sg_mask(g) == 0 && loc.conj_mask(p, g).is_some_and(|q| normalizer_sylow_ok(loc, q))
        });
        if !found {
            w210.offer(Witness::new(MaskIter(p).collect(), format!("P={}", mask_text(loc, p))));
        }
    }
    r.check("2.10", w210.0);

    let subs = small_subgroups(loc);
    let mut a211 = FirstWitness::default();
    let mut b211 = FirstWitness::default();
    let norms: Vec<(Mask, ElemSet)> = loc.objects.iter().map(|&p| (p, loc.normalizer(p))).collect();
    for h in &subs {
        if !norms.iter().any(|(_, np)| h.is_subset(np)) {
            a211.offer(Witness::new(h.to_vec(), format!("H={h}")));
        }
        if is_p_power(h.len(), loc.p) {
            let ok = match conjugate_into_s(loc, h) {
                Ok(g) => h.iter().all(|x| loc.conj(x, g).is_some_and(|y| loc.s.contains(y))),
                Err(_) => false,
            };
            if !ok {
                b211.offer(Witness::new(h.to_vec(), format!("H={h}")));
            }
        }
    }
    r.check("2.11(a)", a211.0);
    r.check("2.11(b)", b211.0);
    r.annotate("2.11(a)", "subgroups generated by two elements");

    // Normalizers of subgroups of S.
    let mut a213 = FirstWitness::default();
    let mut b213 = FirstWitness::default();
    let mut c213 = FirstWitness::default();
    let mut normal213 = FirstWitness::default();
    let (mut b_cases, mut c_cases) = (0, 0);
    for &rm in loc.s_subgroups() {
        let nr = loc.normalizer(rm);
        let rtext = || Witness::new(MaskIter(rm).collect(), format!("R={}", mask_text(loc, rm)));
        if !loc.view.is_partial_subgroup(&nr) {
            a213.offer(rtext());
            continue;
        }
        if let Some(gamma) = gamma_objects(loc, rm) {
            b_cases += 1;
            match sublocality_with(loc, rm, &gamma) {
                Ok((sub, _)) => {
                    if !verify_objectivity(&sub, SUBLOCALITY_BOUND).all_pass() {
                        b213.offer(rtext());
                    }
                    if normalizer_sylow_ok(&sub, sub.full_mask()) {
                        c_cases += 1;
                        if !locality_core_checks(&sub).all_pass() {
                            c213.offer(rtext());
                        }
                    }
                }
                Err(_) => b213.offer(rtext()),
            }
        }
        if loc.s_normalizer(rm) == full {
            let ok = match sublocality_with(loc, rm, loc.object_masks()) {
                Ok((sub, _)) => {
                    verify_objectivity(&sub, SUBLOCALITY_BOUND).all_pass() && locality_core_checks(&sub).all_pass()
                }
                Err(_) => false,
            };
            if !ok {
                normal213.offer(rtext());
            }
        }
    }
    r.check("2.13(a)", a213.0);
    if b_cases == 0 {
        r.push(CheckLine::skip("2.13(b)", "hypothesis-not-met"));
    } else {
        r.check_bounded("2.13(b)", b213.0, SUBLOCALITY_BOUND);
    }
    if c_cases == 0 {
        r.push(CheckLine::skip("2.13(c)", "hypothesis-not-met"));
    } else {
        r.check("2.13(c)", c213.0);
    }
    r.check_bounded("2.13(normal)", normal213.0, SUBLOCALITY_BOUND);

    let op = op_subgroup(loc);
    let brute = op_subgroup_brute_force(loc);
    let mut w214 = (op != brute).then(|| Witness::new(op.to_vec(), format!("fixpoint={op} scan={brute}")));
    if w214.is_none() {
        // every partially normal subgroup of S lies in O_p(L)
        for &x in loc.s_subgroups() {
            let xs = loc.mask_to_set(x);
            if !xs.is_subset(&op) && loc.is_partial_normal(&xs) {
                w214 = Some(Witness::new(xs.to_vec(), format!("X={xs} not in {op}")));
                break;
            }
        }
    }
    r.check("2.14", w214);
    r
}

/// `S ∈ Δ`, `|S|` a power of `p`, and `S` Sylow in `N_L(S)`.
pub(crate) fn locality_core_checks(loc: &Locality) -> Report {
    let mut r = Report::new();
    let full = loc.full_mask();
    r.check("2.8(S)", (!loc.is_object(full)).then(|| Witness::new(Vec::new(), "S")));
    r.check(
        "2.8(p)",
        (!is_p_power(loc.s_list.len(), loc.p)).then(|| Witness::new(Vec::new(), "p")),
    );
    r.check("2.8(L2)", (!normalizer_sylow_ok(loc, full)).then(|| Witness::new(loc.s_list.clone(), "L2")));
    r
}

#[allow(dead_code)]
pub(crate) fn fmt_mask(loc: &Locality, m: Mask) -> alloc::string::String {
    fmt_elems(&loc.mask_elems(m).collect::<Vec<_>>())
}
