//! Group-level invariants on every zoo group, against exhaustive scans.

use locality_core::group::{is_prime, FiniteGroup};
use locality_core::zoo::{named_group, GROUP_NAMES};

fn groups() -> Vec<(&'static str, FiniteGroup)> {
    GROUP_NAMES.iter().map(|&n| (n, named_group(n).unwrap().group)).collect()
}

fn primes_of(n: usize) -> Vec<usize> {
    (2..=n).filter(|&p| is_prime(p) && n % p == 0).collect()
}

fn p_part(mut n: usize, p: usize) -> usize {
    let mut out = 1;
    while n % p == 0 {
        n /= p;
        out *= p;
    }
    out
}

#[test]
fn cayley_tables_associate() {
    for (name, g) in groups() {
        let n = g.order();
        for a in 0..n {
            for b in 0..n {
                let ab = g.mul(a, b);
                for c in 0..n {
                    assert_eq!(g.mul(ab, c), g.mul(a, g.mul(b, c)), "{name}");
                }
            }
        }
    }
}

#[test]
fn sylow_orders() {
    for (name, g) in groups() {
        for p in primes_of(g.order()) {
            let s = g.sylow_subgroup(p);
            assert!(g.is_subgroup(&s) && g.is_p_group(&s, p), "{name} p={p}");
            assert_eq!(s.len(), p_part(g.order(), p), "{name} p={p}");
        }
    }
}

#[test]
fn quotients_by_every_normal_subgroup() {
    for (name, g) in groups() {
        for nsub in g.normal_subgroups().unwrap() {
            let (q, h) = g.quotient_group(&nsub).unwrap();
            assert_eq!(g.order(), nsub.len() * q.order(), "{name} N={nsub}");
            assert!(h.is_homomorphism(&g, &q), "{name} N={nsub}");
            assert_eq!(h.kernel(q.identity()), nsub, "{name} N={nsub}");
        }
    }
}

#[test]
fn transporters_only_go_up() {
    for (name, g) in groups() {
        let subs = g.all_subgroups().unwrap();
        for p in &subs {
            for q in &subs {
                let t = g.transporter(p, q);
                if !t.is_empty() {
                    assert!(p.len() <= q.len(), "{name} P={p} Q={q}");
                }
                for x in &t {
                    assert!(g.conjugate_set(p, x).is_subset(q), "{name} P={p} Q={q} x={x}");
                }
            }
        }
    }
}

#[test]
fn cores_against_normal_subgroup_scan() {
    for (name, g) in groups() {
        let normals = g.normal_subgroups().unwrap();
        for p in primes_of(g.order()) {
            let (op, opp) = g.cores(p).unwrap();
            assert!(g.is_normal(&op) && g.is_p_group(&op, p), "{name} p={p}");
            assert!(g.is_normal(&opp) && opp.len() % p != 0, "{name} p={p}");
            for nsub in &normals {
                if g.is_p_group(nsub, p) {
                    assert!(nsub.is_subset(&op), "{name} p={p} N={nsub}");
                }
                if nsub.len() % p != 0 {
                    assert!(nsub.is_subset(&opp), "{name} p={p} N={nsub}");
                }
            }
            // O_p(G) is also the intersection of the Sylow p-subgroups
            let s = g.sylow_subgroup(p);
            let mut meet = g.all();
            for x in 0..g.order() {
                meet = meet.intersection(&g.conjugate_set(&s, x));
            }
            assert_eq!(op, meet, "{name} p={p}");
        }
    }
}
