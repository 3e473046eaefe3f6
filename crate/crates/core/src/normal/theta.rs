//! The quotient by `Θ = ∪ O_{p'}(N_L(P))`.

use alloc::format;
use alloc::vec::Vec;

use super::quotient::{quotient, Projection, Quotient, QuotientError};
use super::PartialNormalSubgroup;
use crate::bitset::ElemSet;
use crate::locality::{fusion_maps, verify_locality, verify_objectivity, Locality, Mask};
use crate::report::{CheckLine, FirstWitness, Report, Witness};

#[derive(Debug, Clone)]
pub struct ThetaQuotient {
    pub theta: PartialNormalSubgroup,
    /// `(P, Θ(P))` for every object `P`.
    pub parts: Vec<(Mask, ElemSet)>,
    pub quotient: Quotient,
}

/// `Θ(P) = O_{p'}(N_L(P))` for each object, after checking that
/// `N_L(P)/Θ(P)` has characteristic `p`.
pub fn theta_parts(loc: &Locality) -> Result<Vec<(Mask, ElemSet)>, QuotientError> {
    let mut out = Vec::new();
    for &pm in loc.object_masks() {
        let (grp, emb) = loc.subgroup_as_group(&loc.normalizer(pm))?;
        let (_, opp) = grp.cores(loc.p())?;
        let (bar, _) = grp.quotient_group(&opp)?;
        if !bar.is_characteristic_p(loc.p())? {
            return Err(QuotientError::ThetaHypothesis(format!("{}", loc.mask_to_set(pm))));
        }
        out.push((pm, opp.map(loc.size(), |i| emb[i])));
    }
    Ok(out)
}

pub fn theta_quotient(loc: &Locality) -> Result<ThetaQuotient, QuotientError> {
    let parts = theta_parts(loc)?;
    let mut theta = ElemSet::singleton(loc.size(), loc.identity());
    for (_, t) in &parts {
        theta.union_with(t);
    }
    let theta = PartialNormalSubgroup::new(loc, theta)?;
    let quotient = quotient(loc, &theta)?;
    Ok(ThetaQuotient { theta, parts, quotient })
}

/// Checks the conclusions about `L/Θ`, or skips them all when the
/// characteristic-`p` hypothesis fails.
pub fn verify_theta(loc: &Locality, k: usize) -> Report {
    const IDS: [&str; 5] = ["4.12", "4.12(S)", "4.12(a)", "4.12(b)", "4.12(c)"];
    let mut r = Report::new();
    let th = match theta_quotient(loc) {
        Ok(t) => t,
        Err(QuotientError::ThetaHypothesis(p)) => {
            for id in IDS {
                r.push(CheckLine::skip(id, format!("hypothesis-not-met at P={p}")));
            }
            return r;
        }
        Err(e) => {
            r.check("4.12", Some(Witness::new(Vec::new(), format!("{e}"))));
            return r;
        }
    };
    r.pass("4.12");
    let q = &th.quotient.locality;
    let rho: &Projection = &th.quotient.projection;
    let s_img = rho.image(q.size(), loc.sylow());
    let meets = th.theta.t_mask() != loc.identity_mask();
    r.check(
        "4.12(S)",
        (meets || s_img.len() != loc.sylow().len()).then(|| Witness::new(Vec::new(), format!("S∩Θ={}", th.theta.t(loc)))),
    );

    let mut lr = verify_locality(q);
    lr.merge(verify_objectivity(q, k));
    r.check(
        "4.12(a)",
        lr.failures().first().map(|l| Witness::new(Vec::new(), format!("{}", l.id))),
    );

    let up = fusion_maps(loc).relabel(|x| rho.apply(x));
    let down = fusion_maps(q);
    r.check(
        "4.12(b)",
        (up != down).then(|| Witness::new(Vec::new(), format!("{} maps upstairs, {} in the quotient", up.len(), down.len()))),
    );

    // ρ maps N_L(P) onto N_{L/Θ}(P) with kernel Θ(P), and the image has characteristic p
    let mut c = FirstWitness::default();
    for (pm, tp) in &th.parts {
        let nl = loc.normalizer(*pm);
        let Some(pb) = rho.image_mask(loc, q, *pm) else {
            c.offer(Witness::new(alloc::vec![*pm as usize], "image of P leaves S"));
            continue;
        };
        let nq = q.normalizer(pb);
        let ker = ElemSet::from_iter(loc.size(), nl.iter().filter(|&g| rho.apply(g) == q.identity()));
        let hom = nl.iter().all(|a| nl.iter().all(|b| loc.mul(a, b).map(|x| rho.apply(x)) == q.mul(rho.apply(a), rho.apply(b))));
        let char_p = q.subgroup_as_group(&nq).ok().and_then(|(g, _)| g.is_characteristic_p(q.p()).ok()) == Some(true);
        if rho.image(q.size(), &nl) != nq || &ker != tp || !hom || !char_p {
            c.offer(Witness::new(alloc::vec![*pm as usize], format!("P={}", loc.mask_to_set(*pm))));
        }
    }
    r.check("4.12(c)", c.0);
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::zoo::{named_group, named_locality};

    #[test]
    fn theta_of_c3xd8_is_c3() {
        let loc = named_locality("C3xD8:sylow").unwrap().locality;
        let th = theta_quotient(&loc).unwrap();
        let o = loc.origin().unwrap().to_vec();
        let c3 = named_group("C3xD8").unwrap().extra("C3").unwrap().map(loc.size(), |x| o.iter().position(|&e| e == x).unwrap());
        assert_eq!(th.theta.members(), &c3);
        assert_eq!(th.quotient.locality.size(), 8);
        let r = verify_theta(&loc, 3);
        assert!(r.all_pass(), "{r}");
    }

    #[test]
    fn theta_is_trivial_in_characteristic_p() {
        for name in ["S3:delta-C3", "S4:all", "O4plus2:sylow", "GL3_2:parabolic"] {
            let loc = named_locality(name).unwrap().locality;
            let th = theta_quotient(&loc).unwrap();
            assert_eq!(th.theta.len(), 1, "{name}");
            assert_eq!(th.quotient.locality.size(), loc.size());
        }
    }

    #[test]
    fn theta_report_never_fails_on_zoo() {
        for name in crate::zoo::LOCALITY_NAMES {
            let loc = named_locality(name).unwrap().locality;
            let r = verify_theta(&loc, 2);
            assert!(r.failures().is_empty(), "{name}: {r}");
            if theta_parts(&loc).is_err() {
                assert_eq!(r.status("4.12(a)"), Some(Status::Skip));
            }
        }
    }
}
