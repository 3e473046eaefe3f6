//! Seeded mutants of zoo instances: a single corrupted pair-table entry, or a
//! single deleted object. A mutant is killed when the axiom or locality
//! checks report a FAIL line.

use locality_core::locality::{verify_locality, verify_objectivity, Locality, Mask};
use locality_core::partial::{enumerate_words, verify_partial_group, PartialGroupView};
use locality_core::report::{Report, Status};
use locality_core::zoo::{named_locality, named_partial_group, LOCALITY_NAMES};
use locality_core::ElemSet;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MutationKind {
    /// `Π(f, g)` changed from `from` to `to`.
    Pair { f: usize, g: usize, from: usize, to: usize },
    /// One object removed from `Δ`.
    DeleteObject { object: ElemSet },
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub instance: String,
    pub kind: MutationKind,
    /// The first failing line, as printed in reports.
    pub killed_by: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct MutationRun {
    pub outcomes: Vec<Outcome>,
    /// Deletions that leave the domain and (O2) unchanged, so no check can see them.
    pub equivalent: Vec<(String, ElemSet)>,
}

impl MutationRun {
    pub fn killed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.killed_by.is_some()).count()
    }

    pub fn survivors(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| o.killed_by.is_none())
    }
}

fn first_fail(r: &Report) -> Option<String> {
    r.lines().into_iter().find(|l| l.status == Status::Fail && l.witness.is_some()).map(|l| l.to_string())
}

pub fn corrupt_pair(pg: &PartialGroupView, rng: &mut StdRng) -> (PartialGroupView, MutationKind) {
    let pairs: Vec<(usize, usize, usize)> = pg.defined_pairs().collect();
    let (f, g, from) = pairs[rng.gen_range(0..pairs.len())];
    let mut to = rng.gen_range(0..pg.size() - 1);
    if to >= from {
        to += 1;
    }
    (pg.clone().with_pair_unchecked(f, g, Some(to)), MutationKind::Pair { f, g, from, to })
}

/// True when deleting `victim` changes nothing observable: every word up to
/// `bound` has `S_w` different from it, and the smaller object set is still
/// closed under overgroups of conjugates inside objects, and still contains `S`.
pub fn deletion_is_equivalent(loc: &Locality, victim: Mask, bound: usize) -> bool {
    if victim == loc.full_mask() {
        return false;
    }
    let mut seen = false;
    enumerate_words(loc.size(), bound, |w| {
        if !seen && loc.s_w_mask(w) == victim {
            seen = true;
        }
    });
    if seen {
        return false;
    }
    let kept: Vec<Mask> = loc.object_masks().iter().copied().filter(|&m| m != victim).collect();
    for &x in &kept {
        for g in 0..loc.size() {
            let Some(xg) = loc.conj_mask(x, g) else { continue };
            for &y in &kept {
                // the victim is an overgroup of X^g inside Y
                if xg & !y == 0 && xg & !victim == 0 && victim & !y == 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Draws `count` non-equivalent mutants from `seed`, alternating pair
/// corruptions and object deletions, and checks each at word bound `bound`.
pub fn run_mutations(seed: u64, count: usize, bound: usize) -> MutationRun {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut run = MutationRun::default();
    let mut views: Vec<&str> = vec!["free1"];
    views.extend(LOCALITY_NAMES.iter().copied());
    while run.outcomes.len() < count {
        if run.outcomes.len() % 2 == 0 {
            let name = views[rng.gen_range(0..views.len())];
            let pg = named_partial_group(name).expect("zoo member");
            let (mutant, kind) = corrupt_pair(&pg, &mut rng);
            let r = verify_partial_group(&mutant, bound);
            run.outcomes.push(Outcome { instance: name.into(), kind, killed_by: first_fail(&r) });
        } else {
            let name = LOCALITY_NAMES[rng.gen_range(0..LOCALITY_NAMES.len())];
            let loc = named_locality(name).expect("zoo member").locality;
            let objs = loc.object_masks();
            let victim = objs[rng.gen_range(0..objs.len())];
            let object = loc.mask_to_set(victim);
            if deletion_is_equivalent(&loc, victim, bound) {
                run.equivalent.push((name.into(), object));
                continue;
            }
            let kept: Vec<ElemSet> = objs.iter().filter(|&&m| m != victim).map(|&m| loc.mask_to_set(m)).collect();
            let mutant = loc.with_objects_unchecked(&kept);
            let mut r = verify_objectivity(&mutant, bound);
            r.merge(verify_locality(&mutant));
            run.outcomes.push(Outcome { instance: name.into(), kind: MutationKind::DeleteObject { object }, killed_by: first_fail(&r) });
        }
    }
    run
}
