//! Named example groups and localities, and locality descriptions built from
//! permutation generators.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::bitset::ElemSet;
use crate::group::{generate_group, FiniteGroup, GroupError, GENERATE_CAP};
use crate::locality::{delta_all_nonidentity, delta_closure, locality_from_group, Locality, LocalityError};
use crate::partial::{free_one_generator, PartialGroupView};
use crate::perm::Perm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZooError {
    #[error("unknown example `{0}`")]
    Unknown(String),
    #[error("generator {0} is not an element of the group")]
    NotInGroup(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Locality(#[from] LocalityError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SylowSpec {
    Auto,
    Generators(Vec<Perm>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeltaSpec {
    AllNonidentity,
    /// Each entry generates one seed subgroup; the object set is the closure.
    Seed(Vec<Vec<Perm>>),
}

/// A group-derived locality given by generators, a prime, `S` and a rule for `Δ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityDescription {
    pub generators: Vec<Perm>,
    pub p: usize,
    pub sylow: SylowSpec,
    pub delta: DeltaSpec,
}

/// The ambient group of a description, with `S` and `Δ` in its indexing.
#[derive(Debug, Clone)]
pub struct BuiltLocality {
    pub group: FiniteGroup,
    pub perms: Vec<Perm>,
    pub sylow: ElemSet,
    pub locality: Locality,
}

/// Index of a permutation among the elements of a generated group.
pub fn perm_index(perms: &[Perm], x: &Perm) -> Option<usize> {
    let deg = perms.first().map_or(0, Perm::degree).max(x.degree());
    let x = x.padded(deg);
    perms.iter().position(|p| p.padded(deg) == x)
}

/// A deterministic generating set of `h`: scan its elements in order and keep
/// each one not already generated.
pub fn generators_of(g: &FiniteGroup, h: &ElemSet) -> Vec<usize> {
    let mut cur = g.trivial_subgroup();
    let mut gens = Vec::new();
    for x in h {
        if !cur.contains(x) {
            gens.push(x);
            cur = g.generated(&gens);
        }
    }
    gens
}

impl LocalityDescription {
    pub fn build(&self) -> Result<BuiltLocality, ZooError> {
        let (group, perms) = generate_group(&self.generators, GENERATE_CAP)?;
        let subgroup = |gens: &[Perm]| -> Result<ElemSet, ZooError> {
            let idx = gens
                .iter()
                .map(|x| perm_index(&perms, x).ok_or_else(|| ZooError::NotInGroup(x.to_string())))
                .collect::<Result<Vec<usize>, ZooError>>()?;
            Ok(group.generated(&idx))
        };
        let sylow = match &self.sylow {
            SylowSpec::Auto => group.sylow_subgroup(self.p),
            SylowSpec::Generators(gens) => subgroup(gens)?,
        };
        let delta = match &self.delta {
            DeltaSpec::AllNonidentity => delta_all_nonidentity(&group, &sylow, self.p),
            DeltaSpec::Seed(seeds) => {
                let seed = seeds.iter().map(|s| subgroup(s)).collect::<Result<Vec<ElemSet>, ZooError>>()?;
                delta_closure(&group, &sylow, self.p, &seed)
            }
        };
        let locality = locality_from_group(&group, &delta)?;
        Ok(BuiltLocality { group, perms, sylow, locality })
    }
}

/// A named group with a prime, a Sylow subgroup and some named subgroups.
#[derive(Debug, Clone)]
pub struct NamedGroup {
    pub name: String,
    pub group: FiniteGroup,
    pub perms: Vec<Perm>,
    pub p: usize,
    pub sylow: ElemSet,
    pub extras: Vec<(String, ElemSet)>,
}

impl NamedGroup {
    pub fn extra(&self, name: &str) -> Option<&ElemSet> {
        self.extras.iter().find(|(n, _)| n == name).map(|(_, h)| h)
    }

    /// Permutations generating a subgroup.
    pub fn generator_perms(&self, h: &ElemSet) -> Vec<Perm> {
        generators_of(&self.group, h).into_iter().map(|i| self.perms[i].clone()).collect()
    }
}

pub const GROUP_NAMES: &[&str] = &["S3", "D8", "C6", "S4", "O4plus2", "GL3_2", "C3xD8"];

pub const LOCALITY_NAMES: &[&str] = &[
    "S3:delta-C3",
    "D8:sylow",
    "S4:sylow",
    "S4:all",
    "O4plus2:sylow",
    "O4plus2:all",
    "GL3_2:parabolic",
    "GL3_2:all",
    "C3xD8:sylow",
];

fn cyc(deg: usize, cycles: &[&[u32]]) -> Perm {
    Perm::from_cycles(deg, cycles).expect("valid cycles")
}

// Affine maps of F_3^2 on the points 1 + x + 3y.
fn affine(f: impl Fn(u32, u32) -> (u32, u32)) -> Perm {
    let images = (0..9u32)
        .map(|pt| {
            let (x, y) = f(pt % 3, pt / 3);
            (x % 3) + 3 * (y % 3)
        })
        .collect();
    Perm::from_images(images).expect("affine map is a bijection")
}

// Linear maps of F_2^3 on the nonzero vectors 1..7 (bit i = coordinate i).
fn linear(f: impl Fn(u32) -> u32) -> Perm {
    Perm::from_images((1..8u32).map(|v| f(v) - 1).collect()).expect("invertible matrix")
}

fn o4plus2_parts() -> (Vec<Perm>, Vec<Perm>, Vec<Perm>) {
    let t1 = affine(|x, y| (x + 1, y));
    let t2 = affine(|x, y| (x, y + 1));
    let r = affine(|x, y| (3 - y, x));
    let s = affine(|x, y| (x, 3 - y));
    (alloc::vec![t1.clone(), t2.clone(), r.clone(), s.clone()], alloc::vec![r, s], alloc::vec![t1, t2])
}

fn gl32_generators() -> Vec<Perm> {
    // transvection e1 ↦ e1, e2 ↦ e1 + e2, and the coordinate cycle
    let t = linear(|v| v ^ ((v >> 1) & 1));
    let c = linear(|v| ((v << 1) | (v >> 2)) & 7);
    alloc::vec![t, c]
}

fn named_group_parts(name: &str) -> Result<(Vec<Perm>, usize, Option<Vec<Perm>>), ZooError> {
    Ok(match name {
        "S3" => (alloc::vec![cyc(3, &[&[0, 1, 2]]), cyc(3, &[&[0, 1]])], 3, None),
        "D8" => (alloc::vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 2]])], 2, None),
        "C6" => (alloc::vec![cyc(5, &[&[0, 1, 2], &[3, 4]])], 2, None),
        "S4" => (alloc::vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 1]])], 2, None),
        "O4plus2" => {
            let (gens, s, _) = o4plus2_parts();
            (gens, 2, Some(s))
        }
        "GL3_2" => (gl32_generators(), 2, None),
        "C3xD8" => (
            alloc::vec![cyc(7, &[&[0, 1, 2]]), cyc(7, &[&[3, 4, 5, 6]]), cyc(7, &[&[3, 5]])],
            2,
            None,
        ),
        _ => return Err(ZooError::Unknown(name.into())),
    })
}

/// One of [`GROUP_NAMES`], with its default prime and Sylow subgroup.
///
/// Extras: `O4plus2` has `V` (the translations); `GL3_2` has `M1`, `M2`, the two
/// maximal subgroups containing `S`, and `P1 = O_2(M1)`, `P2 = O_2(M2)`;
/// `C3xD8` has `C3`.
pub fn named_group(name: &str) -> Result<NamedGroup, ZooError> {
    let (gens, p, sylow_gens) = named_group_parts(name)?;
    let (group, perms) = generate_group(&gens, GENERATE_CAP)?;
    let gen_sub = |gs: &[Perm]| {
        let idx: Vec<usize> = gs.iter().map(|x| perm_index(&perms, x).expect("generator in group")).collect();
        group.generated(&idx)
    };
    let sylow = match &sylow_gens {
        Some(gs) => gen_sub(gs),
        None => group.sylow_subgroup(p),
    };
    let mut extras = Vec::new();
    match name {
        "O4plus2" => extras.push((String::from("V"), gen_sub(&o4plus2_parts().2))),
        "GL3_2" => {
            let mut maxes: Vec<ElemSet> = group
                .all_subgroups()?
                .into_iter()
                .filter(|h| h.len() == 24 && sylow.is_subset(h))
                .collect();
            maxes.sort_by_key(|h| h.to_vec());
            for (i, m) in maxes.iter().enumerate() {
                let op = group.cores_of(m, 2)?.0;
                extras.push((alloc::format!("M{}", i + 1), m.clone()));
                extras.push((alloc::format!("P{}", i + 1), op));
            }
        }
        "C3xD8" => extras.push((String::from("C3"), gen_sub(&[cyc(7, &[&[0, 1, 2]])]))),
        _ => {}
    }
    Ok(NamedGroup { name: name.into(), group, perms, p, sylow, extras })
}

/// The description of one of [`LOCALITY_NAMES`].
pub fn locality_description(name: &str) -> Result<LocalityDescription, ZooError> {
    let (group_name, kind) = name.split_once(':').ok_or_else(|| ZooError::Unknown(name.into()))?;
    if !LOCALITY_NAMES.contains(&name) {
        return Err(ZooError::Unknown(name.into()));
    }
    let ng = named_group(group_name)?;
    let s_gens = ng.generator_perms(&ng.sylow);
    let (generators, p, _) = named_group_parts(group_name)?;
    let delta = match kind {
        "all" => DeltaSpec::AllNonidentity,
        "parabolic" => DeltaSpec::Seed(alloc::vec![
            ng.generator_perms(ng.extra("P1").expect("P1")),
            ng.generator_perms(ng.extra("P2").expect("P2")),
        ]),
        _ => DeltaSpec::Seed(alloc::vec![s_gens.clone()]),
    };
    Ok(LocalityDescription { generators, p, sylow: SylowSpec::Generators(s_gens), delta })
}

pub fn named_locality(name: &str) -> Result<BuiltLocality, ZooError> {
    locality_description(name)?.build()
}

/// `free1` or a locality name.
pub fn named_partial_group(name: &str) -> Result<PartialGroupView, ZooError> {
    if name == "free1" {
        return Ok(free_one_generator());
    }
    Ok(named_locality(name)?.locality.view().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        let orders = [("S3", 6, 3), ("D8", 8, 8), ("C6", 6, 2), ("S4", 24, 8), ("O4plus2", 72, 8), ("GL3_2", 168, 8), ("C3xD8", 24, 8)];
        for (name, n, s) in orders {
            let g = named_group(name).unwrap();
            assert_eq!(g.group.order(), n, "{name}");
            assert_eq!(g.sylow.len(), s, "{name}");
            assert!(g.group.is_subgroup(&g.sylow));
        }
        assert!(matches!(named_group("A5"), Err(ZooError::Unknown(_))));
    }

    #[test]
    fn o4plus2_structure() {
        let g = named_group("O4plus2").unwrap();
        let v = g.extra("V").unwrap();
        assert_eq!(v.len(), 9);
        assert!(g.group.is_normal(v));
        assert!(v.is_disjoint(&g.sylow) || v.intersection(&g.sylow).len() == 1);
        // S acts faithfully on V: C_S(V) = 1
        assert_eq!(g.group.centralizer(v).intersection(&g.sylow).len(), 1);
        // S is dihedral of order 8: exactly one cyclic subgroup of order 4, center of order 2
        let (sg, _) = g.group.restrict(&g.sylow).unwrap();
        assert_eq!(sg.center().len(), 2);
        assert_eq!((0..8).filter(|&x| sg.element_order(x) == 4).count(), 2);
    }

    #[test]
    fn gl32_parabolics() {
        let g = named_group("GL3_2").unwrap();
        let m1 = g.extra("M1").unwrap();
        let m2 = g.extra("M2").unwrap();
        assert_eq!((m1.len(), m2.len()), (24, 24));
        assert_ne!(m1, m2);
        assert_eq!(m1.intersection(m2), g.sylow);
        let (p1, p2) = (g.extra("P1").unwrap(), g.extra("P2").unwrap());
        assert_eq!((p1.len(), p2.len()), (4, 4));
        assert_ne!(p1, p2);
    }
}
