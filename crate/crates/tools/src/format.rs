//! Text formats: the explicit partial-group file (optionally with a `delta`
//! section describing a locality) and the locality description file.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use locality_core::locality::{Locality, LocalityError, Mask, MaskIter};
use locality_core::partial::{Oracle, PartialGroupError, PartialGroupView};
use locality_core::zoo::{DeltaSpec, LocalityDescription, SylowSpec};
use locality_core::{ElemSet, Perm};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid partial group: {0}")]
    PartialGroup(#[from] PartialGroupError),
    #[error("invalid locality: {0}")]
    Locality(#[from] LocalityError),
    #[error("{0}")]
    Unsupported(String),
}

fn perr(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

const NO: u8 = u8::MAX;

/// A saved object: a bare partial group or a locality.
#[derive(Debug, Clone)]
pub enum Parsed {
    PartialGroup(PartialGroupView),
    Locality(Locality),
}

// ---------------------------------------------------------------------------
// writing

fn write_elems(out: &mut String, head: &str, xs: impl IntoIterator<Item = usize>) {
    out.push_str(head);
    for x in xs {
        let _ = write!(out, " {x}");
    }
    out.push('\n');
}

fn write_view(out: &mut String, pg: &PartialGroupView, oracle_line: &str) {
    let n = pg.size();
    let _ = writeln!(out, "partialgroup n={n}");
    let _ = writeln!(out, "identity {}", pg.identity());
    for x in 0..n {
        let _ = writeln!(out, "inv {x} {}", pg.inv(x));
    }
    for (f, g, h) in pg.defined_pairs() {
        let _ = writeln!(out, "pair {f} {g} {h}");
    }
    out.push_str(oracle_line);
    out.push('\n');
}

/// Writes a bare partial group. Oracles other than `full`, `free1` and
/// `table` cannot be written down and are refused.
pub fn write_partial_group(pg: &PartialGroupView) -> Result<String, FormatError> {
    let mut out = String::new();
    match pg.oracle() {
        Oracle::Full => write_view(&mut out, pg, "oracle full"),
        Oracle::Free1 => write_view(&mut out, pg, "oracle free1"),
        Oracle::Table { maxlen, words } => {
            write_view(&mut out, pg, &format!("oracle table maxlen={maxlen}"));
            for w in words.iter() {
                write_elems(&mut out, "word", w.iter().copied());
            }
        }
        Oracle::Custom { name, .. } => {
            return Err(FormatError::Unsupported(format!("oracle `{name}` has no file form")));
        }
    }
    Ok(out)
}

/// Writes a locality: the pair table with `oracle objective`, then the
/// `delta` section with `p`, `S`, the objects and the maps `c_g` on `S`.
pub fn write_locality(loc: &Locality) -> String {
    let mut out = String::new();
    write_view(&mut out, loc.view(), "oracle objective");
    out.push_str("delta\n");
    let _ = writeln!(out, "prime p={}", loc.p());
    write_elems(&mut out, "sylow", loc.s_list().iter().copied());
    for &m in loc.object_masks() {
        write_elems(&mut out, "object", loc.mask_elems(m));
    }
    let s = loc.s_list();
    for g in 0..loc.size() {
        for (i, &x) in s.iter().enumerate() {
            if let Some(j) = loc.sconj_pos(g, i) {
                let _ = writeln!(out, "conj {g} {x} {}", s[j]);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// reading

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items }
    }
}

fn parse_usize(line: usize, s: &str) -> Result<usize, FormatError> {
    s.parse().map_err(|_| perr(line, format!("expected a number, found `{s}`")))
}

fn parse_key(line: usize, s: &str, key: &str) -> Result<usize, FormatError> {
    let v = s
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| perr(line, format!("expected `{key}=<number>`, found `{s}`")))?;
    parse_usize(line, v)
}

fn numbers(line: usize, args: &[&str], n: usize) -> Result<Vec<usize>, FormatError> {
    let v = args.iter().map(|a| parse_usize(line, a)).collect::<Result<Vec<_>, _>>()?;
    if let Some(&x) = v.iter().find(|&&x| x >= n) {
        return Err(perr(line, format!("element {x} out of range (n={n})")));
    }
    Ok(v)
}

/// True if the text looks like an explicit partial-group file.
pub fn is_explicit(text: &str) -> bool {
    Lines::new(text).items.first().is_some_and(|(_, l)| l.starts_with("partialgroup"))
}

#[derive(Default)]
struct DeltaSection {
    p: Option<usize>,
    sylow: Option<(usize, Vec<usize>)>,
    objects: Vec<Vec<usize>>,
    conj: Vec<(usize, usize, usize, usize)>,
}

/// Reads an explicit file. With a `delta` section the result is a locality,
/// otherwise a bare partial group.
pub fn parse_explicit(text: &str) -> Result<Parsed, FormatError> {
    let lines = Lines::new(text);
    let mut it = lines.items.iter();
    let &(l0, head) = it.next().ok_or_else(|| perr(1, "empty file"))?;
    let mut h = head.split_whitespace();
    if h.next() != Some("partialgroup") {
        return Err(perr(l0, "expected `partialgroup n=<count>`"));
    }
    let n = parse_key(l0, h.next().unwrap_or(""), "n")?;
    if n == 0 {
        return Err(perr(l0, "the element set is empty"));
    }
    let mut identity = None;
    let mut inv: Vec<Option<usize>> = vec![None; n];
    let mut pairs = Vec::new();
    let mut oracle: Option<(usize, String)> = None;
    let mut words = BTreeSet::new();
    let mut delta: Option<DeltaSection> = None;
    for &(ln, l) in it {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let (kw, args) = (toks[0], &toks[1..]);
        if let Some(d) = delta.as_mut() {
            match kw {
                "prime" if args.len() == 1 => d.p = Some(parse_key(ln, args[0], "p")?),
                "sylow" => d.sylow = Some((ln, numbers(ln, args, n)?)),
                "object" => d.objects.push(numbers(ln, args, n)?),
                "conj" if args.len() == 3 => {
                    let v = numbers(ln, args, n)?;
                    d.conj.push((ln, v[0], v[1], v[2]));
                }
                _ => return Err(perr(ln, format!("unexpected `{l}` in the delta section"))),
            }
            continue;
        }
        match kw {
            "identity" if args.len() == 1 => identity = Some(numbers(ln, args, n)?[0]),
            "inv" if args.len() == 2 => {
                let v = numbers(ln, args, n)?;
                if inv[v[0]].replace(v[1]).is_some() {
                    return Err(perr(ln, format!("inverse of {} given twice", v[0])));
                }
            }
            "pair" if args.len() == 3 => {
                let v = numbers(ln, args, n)?;
                pairs.push((v[0], v[1], v[2]));
            }
            "oracle" if !args.is_empty() => {
                let name = match args {
                    ["table", m] => format!("table {}", parse_key(ln, m, "maxlen")?),
                    [name] => name.to_string(),
                    _ => return Err(perr(ln, format!("bad oracle line `{l}`"))),
                };
                if oracle.replace((ln, name)).is_some() {
                    return Err(perr(ln, "oracle given twice"));
                }
            }
            "word" => {
                words.insert(numbers(ln, args, n)?);
            }
            "delta" if args.is_empty() => delta = Some(DeltaSection::default()),
            _ => return Err(perr(ln, format!("unrecognized line `{l}`"))),
        }
    }
    let identity = identity.ok_or_else(|| perr(l0, "missing `identity` line"))?;
    let inv = inv
        .iter()
        .enumerate()
        .map(|(x, v)| v.ok_or_else(|| perr(l0, format!("missing `inv {x} ..` line"))))
        .collect::<Result<Vec<_>, _>>()?;
    let (oln, oname) = oracle.ok_or_else(|| perr(l0, "missing `oracle` line"))?;
    if !words.is_empty() && !oname.starts_with("table") {
        return Err(perr(oln, "`word` lines need `oracle table maxlen=<k>`"));
    }

    let oracle = match oname.as_str() {
        "full" => Oracle::Full,
        "free1" => Oracle::Free1,
        "objective" => {
            let d = delta.as_ref().ok_or_else(|| perr(oln, "`oracle objective` needs a delta section"))?;
            objective_oracle(n, d)?
        }
        t if t.starts_with("table ") => {
            let maxlen = parse_usize(oln, &t[6..])?;
            if let Some(w) = words.iter().find(|w| w.len() < 2 || w.len() > maxlen) {
                return Err(perr(oln, format!("word of length {} outside 2..={maxlen}", w.len())));
            }
            Oracle::Table { maxlen, words: Arc::new(words) }
        }
        other => return Err(perr(oln, format!("unknown oracle `{other}`"))),
    };
    let view = PartialGroupView::new(n, identity, inv, pairs, oracle, None)?;
    let Some(d) = delta else {
        return Ok(Parsed::PartialGroup(view));
    };
    let p = d.p.ok_or_else(|| perr(l0, "delta section without `prime p=<p>`"))?;
    let (_, s) = d.sylow.as_ref().ok_or_else(|| perr(l0, "delta section without `sylow` line"))?;
    let s = ElemSet::from_iter(n, s.iter().copied());
    let objects: Vec<ElemSet> = d.objects.iter().map(|o| ElemSet::from_iter(n, o.iter().copied())).collect();
    let loc = Locality::new(view, p, &s, &objects)?;
    check_conj_lines(&loc, &d)?;
    Ok(Parsed::Locality(loc))
}

/// The chain oracle: `w` is accepted iff `S_w`, computed from the listed
/// maps `c_g` on `S`, is one of the listed objects.
fn objective_oracle(n: usize, d: &DeltaSection) -> Result<Oracle, FormatError> {
    let (sln, s) = d.sylow.as_ref().ok_or_else(|| perr(1, "delta section without `sylow` line"))?;
    let mut s = s.clone();
    s.sort_unstable();
    s.dedup();
    if s.len() > 64 {
        return Err(perr(*sln, format!("|S| = {} exceeds 64", s.len())));
    }
    let sl = s.len();
    let mut pos = vec![NO; n];
    for (i, &x) in s.iter().enumerate() {
        pos[x] = i as u8;
    }
    let mut table = vec![NO; n * sl];
    for &(ln, g, x, y) in &d.conj {
        let (a, b) = (pos[x], pos[y]);
        if a == NO || b == NO {
            return Err(perr(ln, "conj entries must lie in S"));
        }
        if table[g * sl + a as usize] != NO {
            return Err(perr(ln, format!("conj {g} {x} given twice")));
        }
        table[g * sl + a as usize] = b;
    }
    let mut objects = Vec::new();
    for o in &d.objects {
        let mut m: Mask = 0;
        for &x in o {
            if pos[x] == NO {
                return Err(perr(*sln, format!("object element {x} is not in S")));
            }
            m |= 1 << pos[x];
        }
        objects.push(m);
    }
    objects.sort_unstable();
    objects.dedup();
    let full: Mask = if sl == 64 { !0 } else { (1u64 << sl) - 1 };
    Ok(Oracle::custom("objective", move |w: &[usize]| {
        let mut alive = full;
        let mut cur: [u8; 64] = core::array::from_fn(|i| i as u8);
        for &g in w {
            for b in MaskIter(alive) {
                match table[g * sl + cur[b] as usize] {
                    NO => alive &= !(1u64 << b),
                    y => cur[b] = y,
                }
            }
        }
        objects.binary_search(&alive).is_ok()
    }))
}

// The listed maps must be the conjugation maps the loaded locality computes.
fn check_conj_lines(loc: &Locality, d: &DeltaSection) -> Result<(), FormatError> {
    let s = loc.s_list();
    let mut listed = BTreeSet::new();
    for &(ln, g, x, y) in &d.conj {
        if loc.conj(x, g) != Some(y) {
            return Err(perr(ln, format!("conj {g} {x} {y} disagrees with the pair table")));
        }
        listed.insert((g, x));
    }
    for g in 0..loc.size() {
        for (i, &x) in s.iter().enumerate() {
            if loc.sconj_pos(g, i).is_some() && !listed.contains(&(g, x)) {
                return Err(perr(1, format!("missing `conj {g} {x} ..` line")));
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// locality descriptions

fn split_generators(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out.into_iter().filter(|t| !t.is_empty()).collect()
}

/// Parses a locality description:
///
/// ```text
/// group
/// (1 2 3)
/// (1 2)
/// end
/// prime p=3
/// sylow auto
/// delta seed
/// (1 2 3)
/// end
/// ```
///
/// `sylow` takes `auto` or generators separated by `;`. `delta` is either
/// `delta all-nonidentity` or a `delta seed` block with one line per seed
/// subgroup, again with generators separated by `;`.
pub fn parse_description(text: &str) -> Result<LocalityDescription, FormatError> {
    let lines = Lines::new(text);
    let mut it = lines.items.iter().peekable();
    let mut raw_gens: Vec<(usize, Perm)> = Vec::new();
    let mut p = None;
    let mut sylow: Option<Vec<(usize, Perm)>> = None;
    let mut seeds: Option<Vec<Vec<(usize, Perm)>>> = None;
    let mut all_nonid = false;
    let cyc = |ln: usize, s: &str| s.parse::<Perm>().map(|c| (ln, c)).map_err(|e| perr(ln, e.to_string()));
    let mut last = 0;
    while let Some(&(ln, l)) = it.next() {
        last = ln;
        match l {
            "group" => loop {
                let &(bl, b) = it.next().ok_or_else(|| perr(ln, "unterminated `group` block"))?;
                if b == "end" {
                    break;
                }
                raw_gens.push(cyc(bl, b)?);
            },
            "delta seed" => {
                let mut v = Vec::new();
                loop {
                    let &(bl, b) = it.next().ok_or_else(|| perr(ln, "unterminated `delta seed` block"))?;
                    if b == "end" {
                        break;
                    }
                    v.push(split_generators(b).into_iter().map(|g| cyc(bl, g)).collect::<Result<Vec<_>, _>>()?);
                }
                seeds = Some(v);
            }
            "delta all-nonidentity" => all_nonid = true,
            "sylow auto" => sylow = None,
            _ if l.starts_with("prime ") => p = Some(parse_key(ln, l[6..].trim(), "p")?),
            _ if l.starts_with("sylow ") => {
                sylow = Some(split_generators(&l[6..]).into_iter().map(|g| cyc(ln, g)).collect::<Result<Vec<_>, _>>()?);
            }
            _ => return Err(perr(ln, format!("unrecognized line `{l}`"))),
        }
    }
    if raw_gens.is_empty() {
        return Err(perr(last, "no `group` block"));
    }
    let p = p.ok_or_else(|| perr(last, "missing `prime p=<p>`"))?;
    if all_nonid == seeds.is_some() {
        return Err(perr(last, "give exactly one of `delta seed` and `delta all-nonidentity`"));
    }
    let mut all: Vec<&(usize, Perm)> = raw_gens.iter().collect();
    all.extend(sylow.iter().flatten());
    all.extend(seeds.iter().flatten().flatten());
    let degree = all.iter().map(|(_, g)| g.degree()).max().unwrap_or(1);
    let perm = |(_, g): &(usize, Perm)| -> Result<Perm, FormatError> { Ok(g.padded(degree)) };
    let generators = raw_gens.iter().map(perm).collect::<Result<Vec<_>, _>>()?;
    let sylow = match sylow {
        None => SylowSpec::Auto,
        Some(v) => SylowSpec::Generators(v.iter().map(perm).collect::<Result<_, _>>()?),
    };
    let delta = match seeds {
        None => DeltaSpec::AllNonidentity,
        Some(v) => DeltaSpec::Seed(
            v.iter().map(|s| s.iter().map(perm).collect::<Result<Vec<_>, _>>()).collect::<Result<_, _>>()?,
        ),
    };
    Ok(LocalityDescription { generators, p, sylow, delta })
}

/// The description in the format read by [`parse_description`].
pub fn write_description(d: &LocalityDescription) -> String {
    let join = |ps: &[Perm]| ps.iter().map(Perm::to_string).collect::<Vec<_>>().join("; ");
    let mut out = String::from("group\n");
    for g in &d.generators {
        let _ = writeln!(out, "{g}");
    }
    out.push_str("end\n");
    let _ = writeln!(out, "prime p={}", d.p);
    match &d.sylow {
        SylowSpec::Auto => out.push_str("sylow auto\n"),
        SylowSpec::Generators(g) => {
            let _ = writeln!(out, "sylow {}", join(g));
        }
    }
    match &d.delta {
        DeltaSpec::AllNonidentity => out.push_str("delta all-nonidentity\n"),
        DeltaSpec::Seed(seeds) => {
            out.push_str("delta seed\n");
            for s in seeds {
                out.push_str(&join(s));
                out.push('\n');
            }
            out.push_str("end\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use locality_core::partial::free_one_generator;
    use locality_core::zoo::{locality_description, named_locality};

    #[test]
    fn free1_round_trip() {
        let text = write_partial_group(&free_one_generator()).unwrap();
        assert!(text.starts_with("partialgroup n=3\n"));
        let Parsed::PartialGroup(pg) = parse_explicit(&text).unwrap() else { panic!() };
        assert_eq!(write_partial_group(&pg).unwrap(), text);
        assert!(!pg.in_domain(&[1, 1]));
    }

    #[test]
    fn locality_round_trip() {
        let loc = named_locality("S3:delta-C3").unwrap().locality;
        let text = write_locality(&loc);
        let Parsed::Locality(back) = parse_explicit(&text).unwrap() else { panic!() };
        assert_eq!(write_locality(&back), text);
    }

    #[test]
    fn errors_cite_lines() {
        let text = "partialgroup n=2\nidentity 0\ninv 0 0\ninv 1 1\npair 0 0 0\nbogus\n";
        match parse_explicit(text) {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("{other:?}"),
        }
        let text = "partialgroup n=2\nidentity 0\ninv 0 0\ninv 1 1\npair 0 5 0\n";
        assert!(matches!(parse_explicit(text), Err(FormatError::Parse { line: 5, .. })));
        // a missing pair is caught by validation
        let text = "partialgroup n=1\nidentity 0\ninv 0 0\noracle full\n";
        assert!(matches!(parse_explicit(text), Err(FormatError::PartialGroup(_))));
    }

    #[test]
    fn descriptions() {
        for name in ["S3:delta-C3", "GL3_2:parabolic", "O4plus2:all"] {
            let d = locality_description(name).unwrap();
            let text = write_description(&d);
            let back = parse_description(&text).unwrap();
            assert_eq!(back.build().unwrap().locality.size(), d.build().unwrap().locality.size(), "{name}");
        }
        let d = parse_description("group\n(1 2 3)\n(1 2)\nend\nprime p=3\nsylow auto\ndelta seed\n(1 2 3)\nend\n").unwrap();
        assert_eq!(d.build().unwrap().locality.size(), 6);
        assert!(matches!(parse_description("group\n(1 2)\nend\n"), Err(FormatError::Parse { .. })));
    }
}
