//! Proximity forests: the combinatorics of a sequence of point blow-ups.
//!
//! Point `q_i` is *proximate* to `q_j` when it lies on the strict transform of
//! the exceptional curve created by blowing up `q_j`. A point lies on at most
//! two exceptional curves, and two of them meet in at most one point, which
//! gives the validity rules checked here:
//!
//! * **P1** every entry of `prox(i)` is smaller than `i`, and `|prox(i)| <= 2`;
//! * **P2** if `prox(i) = {j, k}` with `j < k` then `j` is in `prox(k)`;
//! * **P4** each pair `{j, k}` is contained in at most one `prox(i)`.
//!
//! Indices are 1-based throughout the public API.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result, Rule};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProximityForest {
    // prox[i - 1] is the sorted proximity set of point i
    prox: Vec<Vec<usize>>,
}

impl ProximityForest {
    /// Builds and validates a forest from explicit proximity sets.
    ///
    /// `prox[i - 1]` lists the points that point `i` is proximate to.
    pub fn new(prox: Vec<Vec<usize>>) -> Result<Self> {
        if prox.is_empty() {
            return Err(Error::InvalidConfiguration(
                "a forest needs at least one point".into(),
            ));
        }
        let prox = prox
            .into_iter()
            .map(|mut p| {
                p.sort_unstable();
                p
            })
            .collect();
        let forest = ProximityForest { prox };
        forest.validate()?;
        Ok(forest)
    }

    /// `s` blow-ups at pairwise distinct points of the base surface.
    pub fn free(s: usize) -> Self {
        assert!(s >= 1, "a forest needs at least one point");
        ProximityForest {
            prox: vec![Vec::new(); s],
        }
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.prox.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prox.is_empty()
    }

    /// Points that `i` is proximate to, ascending.
    pub fn prox(&self, i: usize) -> &[usize] {
        &self.prox[i - 1]
    }

    /// Points proximate to `j`, ascending.
    pub fn proximate_to(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (j + 1..=self.len()).filter(move |&m| self.prox(m).contains(&j))
    }

    fn validate(&self) -> Result<()> {
        let mut used_pairs = HashSet::new();
        for i in 1..=self.len() {
            let p = self.prox(i);
            if p.len() > 2 {
                return Err(rule(Rule::P1, i, "a point lies on at most two exceptional curves"));
            }
            if let Some(&bad) = p.iter().find(|&&j| j == 0 || j >= i) {
                return Err(rule(
                    Rule::P1,
                    i,
                    &format!("point {bad} is not an earlier point"),
                ));
            }
            if let [j, k] = *p {
                if j == k {
                    return Err(rule(Rule::P1, i, "repeated proximate point"));
                }
                if !self.prox(k).contains(&j) {
                    return Err(rule(
                        Rule::P2,
                        i,
                        &format!("satellite of {j} and {k} requires {j} in prox({k})"),
                    ));
                }
                if !used_pairs.insert((j, k)) {
                    return Err(rule(
                        Rule::P4,
                        i,
                        &format!("the curves {j} and {k} no longer meet"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Every proximity set that point `self.len() + 1` could take.
    ///
    /// Order: empty set, singletons ascending, then satellite pairs ascending.
    pub fn next_point_options(&self) -> Vec<Vec<usize>> {
        let i = self.len() + 1;
        let mut out = vec![Vec::new()];
        out.extend((1..i).map(|j| vec![j]));
        for k in 2..i {
            for &j in self.prox(k) {
                let taken = self.prox.iter().any(|p| p.as_slice() == [j, k]);
                if !taken {
                    out.push(vec![j, k]);
                }
            }
        }
        out[1 + (i - 1)..].sort();
        out
    }

    /// Appends a point; the caller supplies one of [`Self::next_point_options`].
    pub(crate) fn push_unchecked(&mut self, p: Vec<usize>) {
        self.prox.push(p);
    }

    pub(crate) fn pop(&mut self) {
        self.prox.pop();
    }

    pub(crate) fn empty() -> Self {
        ProximityForest { prox: Vec::new() }
    }

    /// Parses the line-oriented `.prox` format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s: Option<usize> = None;
        let mut prox: Vec<Option<Vec<usize>>> = Vec::new();

        for (line_no, line) in text.lines().enumerate() {
            let line_no = line_no + 1;
            let toks = tokenize(line);
            let Some(&(col, head)) = toks.first() else {
                continue;
            };
            if head.starts_with('#') {
                continue;
            }
            match (s, head) {
                (None, "points") => {
                    if toks.len() != 2 {
                        return Err(syntax(line_no, col, "expected `points <s>`"));
                    }
                    let n = parse_index(line_no, toks[1])?;
                    if n == 0 {
                        return Err(syntax(line_no, toks[1].0, "point count must be positive"));
                    }
                    s = Some(n);
                    prox = vec![None; n];
                }
                (None, _) => {
                    return Err(syntax(line_no, col, "expected `points <s>` first"));
                }
                (Some(_), "prox") => {
                    let (i, entries) = parse_prox_line(line_no, &toks)?;
                    let n = prox.len();
                    if i > n {
                        return Err(syntax(
                            line_no,
                            toks[1].0,
                            &format!("point {i} exceeds declared count {n}"),
                        ));
                    }
                    if prox[i - 1].is_some() {
                        return Err(syntax(
                            line_no,
                            col,
                            &format!("duplicate entry for point {i}"),
                        ));
                    }
                    prox[i - 1] = Some(entries);
                }
                (Some(_), _) => {
                    return Err(syntax(line_no, col, &format!("unexpected `{head}`")));
                }
            }
        }

        if s.is_none() {
            return Err(syntax(1, 1, "missing `points <s>` line"));
        }
        Self::new(prox.into_iter().map(Option::unwrap_or_default).collect())
    }
}

impl FromStr for ProximityForest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Serializes in `.prox` format; empty proximity sets are omitted.
impl fmt::Display for ProximityForest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points {}", self.len())?;
        for (i, p) in self.prox.iter().enumerate() {
            match p.as_slice() {
                [] => {}
                [j] => writeln!(f, "prox {}: {}", i + 1, j)?,
                [j, k] => writeln!(f, "prox {}: {} {}", i + 1, j, k)?,
                _ => unreachable!("validated forest"),
            }
        }
        Ok(())
    }
}

fn rule(rule: Rule, index: usize, message: &str) -> Error {
    Error::Rule {
        rule,
        index,
        message: message.to_string(),
    }
}

fn syntax(line: usize, column: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.to_string(),
    }
}

/// Whitespace-separated tokens with their 1-based column; `:` is always a
/// token of its own.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (pos, ch)) in line.char_indices().enumerate() {
        let col = col + 1;
        if ch.is_whitespace() || ch == ':' {
            if let Some((a, c)) = start.take() {
                out.push((c, &line[a..pos]));
            }
            if ch == ':' {
                out.push((col, ":"));
            }
        } else if start.is_none() {
            start = Some((pos, col));
        }
    }
    if let Some((a, c)) = start {
        out.push((c, &line[a..]));
    }
    out
}

fn parse_index(line: usize, (col, tok): (usize, &str)) -> Result<usize> {
    if !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(syntax(line, col, &format!("expected a decimal integer, got `{tok}`")));
    }
    tok.parse()
        .map_err(|_| syntax(line, col, &format!("integer `{tok}` out of range")))
}

fn parse_prox_line(line: usize, toks: &[(usize, &str)]) -> Result<(usize, Vec<usize>)> {
    let end_col = toks.last().map_or(1, |t| t.0 + t.1.chars().count());
    if toks.len() < 3 || toks[2].1 != ":" {
        let col = toks.get(2).map_or(end_col, |t| t.0);
        return Err(syntax(line, col, "expected `prox <i>: <j> [<k>]`"));
    }
    let i = parse_index(line, toks[1])?;
    if i == 0 {
        return Err(syntax(line, toks[1].0, "indices are 1-based"));
    }
    let rest = &toks[3..];
    if rest.is_empty() || rest.len() > 2 {
        let col = rest.get(2).map_or(end_col, |t| t.0);
        return Err(syntax(line, col, "expected one or two proximate points"));
    }
    let mut entries = Vec::with_capacity(rest.len());
    for &tok in rest {
        let j = parse_index(line, tok)?;
        if j == 0 {
            return Err(syntax(line, tok.0, "indices are 1-based"));
        }
        entries.push(j);
    }
    if let [j, k] = entries[..] {
        if j >= k {
            return Err(syntax(line, rest[1].0, "expected `<j> <k>` with j < k"));
        }
    }
    Ok((i, entries))
}
