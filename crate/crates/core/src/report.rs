//! Check reports: one status line per checked statement.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Skip,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A counterexample. `key` orders witnesses (shorter first, then lexicographic),
/// so merging partial sweeps keeps the same witness as a sequential sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub key: Vec<usize>,
    pub text: String,
}

impl Witness {
    pub fn word(w: &[usize]) -> Self {
        Witness { key: w.to_vec(), text: crate::partial::Word::fmt_slice(w) }
    }

    pub fn new(key: Vec<usize>, text: impl Into<String>) -> Self {
        Witness { key, text: text.into() }
    }

    fn cmp_key(&self, other: &Witness) -> Ordering {
        self.key
            .len()
            .cmp(&other.key.len())
            .then_with(|| self.key.cmp(&other.key))
            .then_with(|| self.text.cmp(&other.text))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckLine {
    pub id: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub bound: Option<usize>,
    pub note: Option<String>,
}

impl CheckLine {
    pub fn pass(id: impl Into<String>) -> Self {
        CheckLine { id: id.into(), status: Status::Pass, witness: None, bound: None, note: None }
    }

    pub fn fail(id: impl Into<String>, witness: Witness) -> Self {
        CheckLine { id: id.into(), status: Status::Fail, witness: Some(witness), bound: None, note: None }
    }

    pub fn skip(id: impl Into<String>, note: impl Into<String>) -> Self {
        CheckLine { id: id.into(), status: Status::Skip, witness: None, bound: None, note: Some(note.into()) }
    }

    pub fn with_bound(mut self, k: usize) -> Self {
        self.bound = Some(k);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

impl fmt::Display for CheckLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LEMMA {} {}", self.id, self.status)?;
        if let Some(w) = &self.witness {
            write!(f, " witness={}", w.text)?;
        }
        if let Some(k) = self.bound {
            write!(f, " bound={k}")?;
        }
        if let Some(n) = &self.note {
            write!(f, " note=\"{n}\"")?;
        }
        Ok(())
    }
}

/// Sort key for ids like `1.4(a)`, `2.1(O1)`, `3.14(d)`, `H1`: numeric parts
/// compare numerically, everything else as text.
fn id_key(id: &str) -> Vec<(u64, String)> {
    let mut out = Vec::new();
    let mut num = String::new();
    let mut txt = String::new();
    for c in id.chars() {
        if c.is_ascii_digit() {
            if !txt.is_empty() {
                out.push((u64::MAX, core::mem::take(&mut txt)));
            }
            num.push(c);
        } else {
            if !num.is_empty() {
                out.push((num.parse().unwrap_or(u64::MAX), String::new()));
                num.clear();
            }
            if c != '.' {
                txt.push(c);
            }
        }
    }
    if !num.is_empty() {
        out.push((num.parse().unwrap_or(u64::MAX), String::new()));
    }
    if !txt.is_empty() {
        out.push((u64::MAX, txt));
    }
    out
}

/// A set of check lines, kept sorted by id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    lines: BTreeMap<String, CheckLine>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a result. If the id is already present the two are merged:
    /// FAIL beats SKIP beats PASS, and the smaller witness wins.
    pub fn push(&mut self, line: CheckLine) {
        match self.lines.get_mut(&line.id) {
            None => {
                self.lines.insert(line.id.clone(), line);
            }
            Some(old) => {
                if line.status > old.status {
                    let bound = old.bound.max(line.bound);
                    *old = line;
                    old.bound = bound;
                } else if line.status == old.status && line.status == Status::Fail {
                    if let (Some(a), Some(b)) = (&old.witness, &line.witness) {
                        if b.cmp_key(a) == Ordering::Less {
                            old.witness = line.witness;
                        }
                    }
                }
            }
        }
    }

    pub fn pass(&mut self, id: &str) {
        self.push(CheckLine::pass(id));
    }

    /// Records PASS or FAIL depending on `witness`.
    pub fn check(&mut self, id: &str, witness: Option<Witness>) {
        match witness {
            None => self.push(CheckLine::pass(id)),
            Some(w) => self.push(CheckLine::fail(id, w)),
        }
    }

    pub fn check_bounded(&mut self, id: &str, witness: Option<Witness>, bound: usize) {
        let line = match witness {
            None => CheckLine::pass(id),
            Some(w) => CheckLine::fail(id, w),
        };
        self.push(line.with_bound(bound));
    }

    pub fn merge(&mut self, other: Report) {
        for (_, line) in other.lines {
            self.push(line);
        }
    }

    /// Prefixes every id with `prefix` (used when a sub-report describes a derived object).
    pub fn prefixed(self, prefix: &str) -> Report {
        let mut out = Report::new();
        for (_, mut line) in self.lines {
            line.id = alloc::format!("{prefix}{}", line.id);
            out.push(line);
        }
        out
    }

    pub fn lines(&self) -> Vec<&CheckLine> {
        let mut v: Vec<&CheckLine> = self.lines.values().collect();
        v.sort_by(|a, b| id_key(&a.id).cmp(&id_key(&b.id)).then_with(|| a.id.cmp(&b.id)));
        v
    }

    /// Attaches a note to an existing line.
    pub fn annotate(&mut self, id: &str, note: impl Into<String>) {
        if let Some(l) = self.lines.get_mut(id) {
            l.note = Some(note.into());
        }
    }

    pub fn get(&self, id: &str) -> Option<&CheckLine> {
        self.lines.get(id)
    }

    pub fn status(&self, id: &str) -> Option<Status> {
        self.lines.get(id).map(|l| l.status)
    }

    pub fn all_pass(&self) -> bool {
        self.lines.values().all(|l| l.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&CheckLine> {
        self.lines().into_iter().filter(|l| l.status == Status::Fail).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Keeps the smallest witness seen so far for one check during a sweep.
#[derive(Debug, Default, Clone)]
pub struct FirstWitness(pub Option<Witness>);

impl FirstWitness {
    pub fn offer(&mut self, w: Witness) {
        match &self.0 {
            Some(old) if w.cmp_key(old) != Ordering::Less => {}
            _ => self.0 = Some(w),
        }
    }

    pub fn offer_word(&mut self, w: &[usize]) {
        // Avoid formatting when the candidate cannot win.
        if let Some(old) = &self.0 {
            if (w.len(), w) >= (old.key.len(), old.key.as_slice()) {
                return;
            }
        }
        self.0 = Some(Witness::word(w));
    }

    pub fn is_set(&self) -> bool {
        self.0.is_some()
    }
}

pub(crate) fn fmt_elems(xs: &[usize]) -> String {
    let mut s = String::from("(");
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&x.to_string());
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_merge() {
        let mut r = Report::new();
        r.pass("3.14(a)");
        r.pass("1.4(e)");
        r.pass("3.2(b)");
        r.push(CheckLine::fail("1.4(e)", Witness::word(&[2, 1])));
        r.push(CheckLine::fail("1.4(e)", Witness::word(&[1, 3])));
        r.push(CheckLine::fail("1.4(e)", Witness::word(&[0, 0, 0])));
        let ids: Vec<&str> = r.lines().iter().map(|l| l.id.as_str()).collect();
        assert_eq!(ids, ["1.4(e)", "3.2(b)", "3.14(a)"]);
        assert_eq!(r.get("1.4(e)").unwrap().witness.as_ref().unwrap().text, "(1,3)");
        assert!(!r.all_pass());
        assert_eq!(
            alloc::format!("{}", r.lines()[0]),
            "LEMMA 1.4(e) FAIL witness=(1,3)"
        );
    }
}
