//! ADE labels and their identification from Gram matrices of simple roots.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Family letter of a simply laced Dynkin diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeKind {
    A,
    D,
    E,
}

/// One connected Dynkin diagram such as `A3` or `E6`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdeComponent {
    pub kind: AdeKind,
    pub rank: u8,
}

impl Ord for AdeComponent {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.kind, self.rank).cmp(&(other.kind, other.rank))
    }
}

impl PartialOrd for AdeComponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AdeComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            AdeKind::A => 'A',
            AdeKind::D => 'D',
            AdeKind::E => 'E',
        };
        write!(f, "{k}{}", self.rank)
    }
}

/// Multiset of ADE components, kept sorted in decreasing order.
///
/// Labels compare lexicographically on that sorted component list, which puts
/// `4A1 < A2+2A1 < A3+A1 < A4 < D4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AdeLabel(Vec<AdeComponent>);

impl AdeLabel {
    /// Label from an arbitrary list of components.
    pub fn new(mut comps: Vec<AdeComponent>) -> Self {
        comps.sort_by(|a, b| b.cmp(a));
        Self(comps)
    }

    /// Components in decreasing order.
    pub fn components(&self) -> &[AdeComponent] {
        &self.0
    }

    /// Total rank, equal to the number of simple roots.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|c| c.rank as usize).sum()
    }

    /// True when no (-2)-curves are present.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for AdeLabel {
    /// Writes `-` for the empty label and otherwise groups equal components, e.g. `A3+2A1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "-");
        }
        let mut i = 0;
        let mut first = true;
        while i < self.0.len() {
            let mut j = i;
            while j < self.0.len() && self.0[j] == self.0[i] {
                j += 1;
            }
            if !first {
                write!(f, "+")?;
            }
            if j - i > 1 {
                write!(f, "{}", j - i)?;
            }
            write!(f, "{}", self.0[i])?;
            first = false;
            i = j;
        }
        Ok(())
    }
}

impl FromStr for AdeLabel {
    type Err = Error;

    /// Parses strings such as `-`, `A1`, `2A1`, `A3+2A1`, `D4+3A1`, `E6+A2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "-" {
            return Ok(Self::default());
        }
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let digits: String = part.chars().take_while(|c| c.is_ascii_digit()).collect();
            let mult: usize = if digits.is_empty() {
                1
            } else {
                digits
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad multiplicity in {part:?}")))?
            };
            let rest = &part[digits.len()..];
            let mut chars = rest.chars();
            let kind = match chars.next() {
                Some('A') => AdeKind::A,
                Some('D') => AdeKind::D,
                Some('E') => AdeKind::E,
                _ => return Err(Error::Domain(format!("bad ADE component {part:?}"))),
            };
            let rank: u8 = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Domain(format!("bad ADE rank in {part:?}")))?;
            let valid = match kind {
                AdeKind::A => rank >= 1,
                AdeKind::D => rank >= 4,
                AdeKind::E => (6..=8).contains(&rank),
            };
            if !valid || mult == 0 {
                return Err(Error::Domain(format!("invalid ADE component {part:?}")));
            }
            for _ in 0..mult {
                comps.push(AdeComponent { kind, rank });
            }
        }
        Ok(Self::new(comps))
    }
}

impl Serialize for AdeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AdeLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Identifies the ADE multiset of a negated Cartan matrix.
///
/// `gram` must have `-2` on the diagonal and entries in `{0, 1}` elsewhere.
/// Returns `None` when some component is not a Dynkin diagram of type A, D or
/// E, which happens exactly when the form on the span is not negative definite.
pub fn identify_ade(gram: &[Vec<i64>]) -> Option<AdeLabel> {
    let n = gram.len();
    for (i, row) in gram.iter().enumerate() {
        if row.len() != n || row[i] != -2 {
            return None;
        }
        for (j, &v) in row.iter().enumerate() {
            if i != j && !(v == 0 || v == 1) {
                return None;
            }
            if gram[j][i] != v {
                return None;
            }
        }
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            for w in 0..n {
                if w != v && gram[v][w] == 1 && !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                }
            }
            k += 1;
        }
        comps.push(identify_component(gram, &comp)?);
    }
    Some(AdeLabel::new(comps))
}

fn identify_component(gram: &[Vec<i64>], comp: &[usize]) -> Option<AdeComponent> {
    let m = comp.len();
    let deg = |v: usize| comp.iter().filter(|&&w| w != v && gram[v][w] == 1).count();
    let edges: usize = comp.iter().map(|&v| deg(v)).sum::<usize>() / 2;
    if edges + 1 != m {
        return None;
    }
    let branch: Vec<usize> = comp.iter().copied().filter(|&v| deg(v) >= 3).collect();
    if branch.is_empty() {
        return Some(AdeComponent {
            kind: AdeKind::A,
            rank: m as u8,
        });
    }
    if branch.len() > 1 || deg(branch[0]) != 3 {
        return None;
    }
    let center = branch[0];
    let mut arms: Vec<usize> = comp
        .iter()
        .copied()
        .filter(|&w| w != center && gram[center][w] == 1)
        .map(|w| arm_length(gram, comp, center, w))
        .collect();
    arms.sort_unstable();
    let kind = match (arms[0], arms[1], arms[2]) {
        (1, 1, _) => AdeKind::D,
        (1, 2, 2) | (1, 2, 3) | (1, 2, 4) => AdeKind::E,
        _ => return None,
    };
    Some(AdeComponent {
        kind,
        rank: m as u8,
    })
}

fn arm_length(gram: &[Vec<i64>], comp: &[usize], center: usize, first: usize) -> usize {
    let mut prev = center;
    let mut cur = first;
    let mut len = 1;
    loop {
        let next = comp
            .iter()
            .copied()
            .find(|&w| w != prev && w != cur && gram[cur][w] == 1);
        match next {
            Some(w) => {
                prev = cur;
                cur = w;
                len += 1;
            }
            None => return len,
        }
    }
}
