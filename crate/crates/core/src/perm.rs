//! Permutations on `{0, .., degree-1}` and their cycle notation.
//!
//! Cycle notation is 1-based on the wire: `(1 2 3)(4 5)`. The identity is `()`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Perm(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermParseError {
    #[error("unbalanced parentheses in `{0}`")]
    Unbalanced(String),
    #[error("bad point `{0}` (points are positive integers)")]
    BadPoint(String),
    #[error("point {0} repeated within one permutation")]
    Repeated(u32),
    #[error("unexpected text `{0}` outside cycles")]
    Stray(String),
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u32).collect())
    }

    /// Builds a permutation from its image list; `None` if it is not a bijection.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return None;
            }
            seen[i] = true;
        }
        Some(Perm(images))
    }

    /// Builds a permutation of the given degree from 0-based cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Option<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = alloc::vec![false; degree];
        for cyc in cycles {
            for (k, &a) in cyc.iter().enumerate() {
                let b = cyc[(k + 1) % cyc.len()];
                if a as usize >= degree || b as usize >= degree || touched[a as usize] {
                    return None;
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Some(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.0.get(point).map_or(point, |&p| p as usize)
    }

    /// Extends the permutation by fixed points up to `degree`.
    pub fn padded(&self, degree: usize) -> Perm {
        let mut v = self.0.clone();
        for i in v.len()..degree {
            v.push(i as u32);
        }
        Perm(v)
    }

    /// Right-action composition: `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        let d = self.degree().max(other.degree());
        Perm((0..d).map(|i| other.apply(self.apply(i)) as u32).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut v = alloc::vec![0u32; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j as usize] = i as u32;
        }
        Perm(v)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Disjoint cycles of length at least two, 0-based, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = alloc::vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cyc.push(i as u32);
                i = self.0[i] as usize;
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for cyc in cycles {
            f.write_str("(")?;
            for (k, p) in cyc.iter().enumerate() {
                if k > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = PermParseError;

    /// Parses 1-based cycle notation; whitespace (and commas inside cycles) is ignored
    /// as a separator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let Some(after_open) = rest.strip_prefix('(') else {
                return Err(PermParseError::Stray(rest.into()));
            };
            let close = after_open
                .find(')')
                .ok_or_else(|| PermParseError::Unbalanced(s.into()))?;
            let body = &after_open[..close];
            if body.contains('(') {
                return Err(PermParseError::Unbalanced(s.into()));
            }
            let mut cyc = Vec::new();
            for tok in body.split(|c: char| c.is_whitespace() || c == ',') {
                if tok.is_empty() {
                    continue;
                }
                let p: u32 = tok
                    .parse()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| PermParseError::BadPoint(tok.into()))?;
                cyc.push(p - 1);
            }
            if !cyc.is_empty() {
                cycles.push(cyc);
            }
            rest = after_open[close + 1..].trim_start();
        }
        let degree = cycles
            .iter()
            .flatten()
            .map(|&p| p as usize + 1)
            .max()
            .unwrap_or(0);
        // Cycles are composed left to right, so non-disjoint input is accepted.
        let mut acc = Perm::identity(degree);
        for cyc in &cycles {
            let mut uniq = cyc.clone();
            uniq.sort_unstable();
            if let Some(w) = uniq.windows(2).find(|w| w[0] == w[1]) {
                return Err(PermParseError::Repeated(w[0] + 1));
            }
            let c = Perm::from_cycles(degree, &[cyc.as_slice()]).expect("validated cycle");
            acc = acc.then(&c);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_display() {
        let p: Perm = "(1 2 3)(4 5)".parse().unwrap();
        assert_eq!(p.images(), &[1, 2, 0, 4, 3]);
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        let id: Perm = "()".parse().unwrap();
        assert!(id.is_identity());
        assert_eq!(id.to_string(), "()");
        let ws: Perm = "  ( 1   2 ) ".parse().unwrap();
        assert_eq!(ws.to_string(), "(1 2)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!("(1 2".parse::<Perm>(), Err(PermParseError::Unbalanced(_))));
        assert!(matches!("(0 1)".parse::<Perm>(), Err(PermParseError::BadPoint(_))));
        assert!(matches!("(1 1)".parse::<Perm>(), Err(PermParseError::Repeated(1))));
        assert!(matches!("x(1 2)".parse::<Perm>(), Err(PermParseError::Stray(_))));
    }

    #[test]
    fn right_action_composition() {
        let a: Perm = "(1 2)".parse().unwrap();
        let b: Perm = "(1 3)".parse().unwrap();
        // 1 -a-> 2 -b-> 2, 2 -a-> 1 -b-> 3, 3 -a-> 3 -b-> 1
        assert_eq!(a.then(&b).to_string(), "(1 2 3)");
        assert!(a.then(&a.inverse()).is_identity());
    }
}
