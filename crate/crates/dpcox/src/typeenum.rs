//! Types of generalized del Pezzo surfaces: enumeration, extended Dynkin
//! diagrams of negative curves, and contraction sequences down to the plane.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::ade::{identify_ade, AdeLabel};
use crate::error::{Error, Result};
use crate::piclattice::{
    anticanonical, classes_with, isqrt, neg1_filter, roots, DivisorClass, LatticeContext,
};

/// Complete invariant of a type: degree, ADE multiset, number of (-1)-curves.
pub type TypeKey = (u8, AdeLabel, usize);

/// A type: a simple system of (-2)-classes together with the induced (-1)-classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceType {
    pub degree: u8,
    pub simple_twos: Vec<DivisorClass>,
    pub minus_ones: Vec<DivisorClass>,
    pub ade: AdeLabel,
    pub num_lines: usize,
}

impl SurfaceType {
    /// Builds a type from a simple system of roots, deriving the (-1)-classes.
    pub fn from_twos(degree: u8, twos: Vec<DivisorClass>) -> Result<Self> {
        let ctx = LatticeContext::new(degree)?;
        if degree > 7 {
            return Err(Error::Domain(format!(
                "degree {degree} types are not lattice types"
            )));
        }
        let all = classes_with(ctx, -1, 1);
        Self::from_twos_with(ctx, twos, &all)
    }

    fn from_twos_with(
        ctx: LatticeContext,
        twos: Vec<DivisorClass>,
        all_ones: &[DivisorClass],
    ) -> Result<Self> {
        let ade = identify_ade(&gram(&twos)).ok_or_else(|| {
            Error::Precondition("classes do not form an ADE simple system".into())
        })?;
        let minus_ones = neg1_filter(ctx, all_ones, &twos)?;
        Ok(Self {
            degree: ctx.degree(),
            num_lines: minus_ones.len(),
            simple_twos: twos,
            minus_ones,
            ade,
        })
    }

    /// The invariant triple `(degree, ade, num_lines)`.
    pub fn key(&self) -> TypeKey {
        (self.degree, self.ade.clone(), self.num_lines)
    }

    /// Lattice context of the type.
    pub fn context(&self) -> LatticeContext {
        LatticeContext::new(self.degree).expect("valid degree")
    }

    /// All negative curves: (-2)-classes first, then (-1)-classes.
    pub fn negative_curves(&self) -> Vec<DivisorClass> {
        self.simple_twos
            .iter()
            .chain(&self.minus_ones)
            .cloned()
            .collect()
    }

    /// Label such as `A3` or `A3:5` (lines appended when `with_lines`).
    pub fn label(&self, with_lines: bool) -> String {
        if with_lines {
            format!("{}:{}", self.ade, self.num_lines)
        } else {
            self.ade.to_string()
        }
    }
}

/// Gram matrix of a list of classes.
pub fn gram(classes: &[DivisorClass]) -> Vec<Vec<i64>> {
    classes
        .iter()
        .map(|a| classes.iter().map(|b| a.dot(b)).collect())
        .collect()
}

/// ADE types that only occur in characteristic two and are skipped.
fn char_two_only(degree: u8, ade: &AdeLabel) -> bool {
    let s = ade.to_string();
    match degree {
        2 => s == "7A1",
        1 => s == "7A1" || s == "8A1" || s == "D4+4A1",
        _ => false,
    }
}

/// All types of degree `degree` (1 to 7), one representative per invariant triple.
///
/// Simple systems are grown one root at a time. A system whose invariant was
/// already seen is not extended further: two systems with equal invariants are
/// Weyl-conjugate, so every extension of one is conjugate to an extension of the
/// other. Each kept representative is extended by every root, not only by roots
/// of larger index, which makes this pruning complete. Output is sorted by
/// `(rank, ade, -num_lines)`.
pub fn enumerate_types(degree: u8) -> Result<Vec<SurfaceType>> {
    if !(1..=7).contains(&degree) {
        return Err(Error::Domain(format!(
            "enumeration supports degrees 1..=7, got {degree}"
        )));
    }
    let ctx = LatticeContext::new(degree)?;
    let all_roots = roots(ctx);
    let all_ones = classes_with(ctx, -1, 1);
    let mut memo: BTreeMap<TypeKey, SurfaceType> = BTreeMap::new();
    let empty = SurfaceType::from_twos_with(ctx, Vec::new(), &all_ones)?;
    memo.insert(empty.key(), empty.clone());
    let mut level = vec![empty];
    while !level.is_empty() {
        let mut next = Vec::new();
        for t in &level {
            for r in &all_roots {
                if t.simple_twos.contains(r)
                    || t.simple_twos.iter().any(|s| !matches!(s.dot(r), 0 | 1))
                {
                    continue;
                }
                let mut twos = t.simple_twos.clone();
                twos.push(r.clone());
                if identify_ade(&gram(&twos)).is_none() {
                    continue;
                }
                let cand = SurfaceType::from_twos_with(ctx, twos, &all_ones)?;
                let key = cand.key();
                if let Entry::Vacant(slot) = memo.entry(key) {
                    slot.insert(cand.clone());
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    let mut out: Vec<SurfaceType> = memo
        .into_values()
        .filter(|t| !char_two_only(degree, &t.ade))
        .collect();
    out.sort_by(|a, b| {
        (a.simple_twos.len(), &a.ade, std::cmp::Reverse(a.num_lines)).cmp(&(
            b.simple_twos.len(),
            &b.ade,
            std::cmp::Reverse(b.num_lines),
        ))
    });
    Ok(out)
}

/// Finds the type with the given label among enumerated types.
///
/// `lines` disambiguates types sharing an ADE label; when absent the label must
/// be unique in that degree.
pub fn find_type(
    types: &[SurfaceType],
    ade: &AdeLabel,
    lines: Option<usize>,
) -> Result<SurfaceType> {
    let hits: Vec<&SurfaceType> = types
        .iter()
        .filter(|t| &t.ade == ade && lines.is_none_or(|l| l == t.num_lines))
        .collect();
    match hits.len() {
        1 => Ok(hits[0].clone()),
        0 => Err(Error::Domain(format!(
            "no type {ade} with the requested line count"
        ))),
        _ => Err(Error::Domain(format!(
            "type {ade} is ambiguous; append :lines (one of {})",
            hits.iter()
                .map(|t| t.num_lines.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

/// Extended Dynkin diagram of negative curves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtDynkin {
    /// Vertex classes with their current self-intersection numbers.
    pub vertices: Vec<(DivisorClass, i64)>,
    /// Symmetric matrix of intersection numbers between distinct vertices; the
    /// diagonal is zero.
    pub edges: Vec<Vec<i64>>,
}

/// Diagram whose vertices are the (-2)-classes followed by the (-1)-classes.
pub fn build_ext_dynkin(t: &SurfaceType) -> ExtDynkin {
    let verts = t.negative_curves();
    let n = verts.len();
    let mut edges = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                edges[i][j] = verts[i].dot(&verts[j]);
            }
        }
    }
    ExtDynkin {
        vertices: verts
            .into_iter()
            .map(|c| {
                let s = c.self_int();
                (c, s)
            })
            .collect(),
        edges,
    }
}

/// Contracts the (-1)-vertex `e`: it is removed, every other vertex `v` gains
/// `(e,v)^2` in self-intersection and every pair `v, w` gains `(e,v)(e,w)`.
pub fn blowdown_step(diag: &ExtDynkin, e: usize) -> Result<ExtDynkin> {
    let n = diag.vertices.len();
    if e >= n {
        return Err(Error::Precondition(format!("vertex {e} out of range")));
    }
    if diag.vertices[e].1 != -1 {
        return Err(Error::Precondition(format!(
            "vertex {e} has self-intersection {}, not -1",
            diag.vertices[e].1
        )));
    }
    let keep: Vec<usize> = (0..n).filter(|&v| v != e).collect();
    let vertices = keep
        .iter()
        .map(|&v| {
            let m = diag.edges[e][v];
            (diag.vertices[v].0.clone(), diag.vertices[v].1 + m * m)
        })
        .collect();
    let edges = keep
        .iter()
        .map(|&v| {
            keep.iter()
                .map(|&w| {
                    if v == w {
                        0
                    } else {
                        diag.edges[v][w] + diag.edges[e][v] * diag.edges[e][w]
                    }
                })
                .collect()
        })
        .collect();
    Ok(ExtDynkin { vertices, edges })
}

/// A full contraction of a type to the plane together with the induced basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractionSequence {
    /// Vertex indices (into [`build_ext_dynkin`] order) in contraction order.
    /// The first contracted vertex becomes `l_r`, the last `l_1`.
    pub order: Vec<usize>,
    /// The new basis `l'_0, ..., l'_r` expressed in the original coordinates.
    pub basis: Vec<DivisorClass>,
    /// Every vertex class expressed in the new basis by the blow-down rules,
    /// computed from the diagram alone.
    pub expressions: Vec<Vec<i64>>,
}

impl ContractionSequence {
    /// Converts a class in original coordinates to coordinates in the new basis.
    pub fn to_new_basis(&self, d: &DivisorClass) -> Vec<i64> {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, b)| if i == 0 { d.dot(b) } else { -d.dot(b) })
            .collect()
    }

    /// Converts new-basis coordinates back to a class in original coordinates.
    pub fn from_new_basis(&self, coords: &[i64]) -> DivisorClass {
        let mut out = self.basis[0].context().zero();
        for (c, b) in coords.iter().zip(&self.basis) {
            out.add_scaled(*c, b);
        }
        out
    }
}

/// Per-vertex history used to apply the blow-down rules.
#[derive(Clone, Default)]
struct History {
    contracted_at: Option<usize>,
    mults: Vec<(usize, i64)>,
}

/// Contraction sequence choosing the lexicographically smallest (-1)-class at
/// each step, with backtracking on dead ends.
pub fn contraction_sequence(t: &SurfaceType) -> Result<ContractionSequence> {
    contraction_sequence_from(t, None)
}

/// Like [`contraction_sequence`] but forcing vertex `first` to be contracted first.
pub fn contraction_sequence_from(
    t: &SurfaceType,
    first: Option<usize>,
) -> Result<ContractionSequence> {
    let diag = build_ext_dynkin(t);
    let ctx = t.context();
    let r = ctx.blowups();
    let n = diag.vertices.len();
    let mut state = SeqState {
        selfs: diag.vertices.iter().map(|v| v.1).collect(),
        edges: diag.edges.clone(),
        alive: vec![true; n],
        totals: diag.vertices.iter().map(|v| v.0.clone()).collect(),
        hist: vec![History::default(); n],
        order: Vec::new(),
        basis: vec![ctx.zero(); r + 1],
    };
    if !search(&diag, &mut state, r, first) {
        return Err(Error::Internal(format!(
            "no contraction of type {} (degree {}) reaches the plane",
            t.ade, t.degree
        )));
    }
    let mut sum = anticanonical(ctx);
    for b in &state.basis[1..] {
        sum.add_scaled(1, b);
    }
    if sum.coeffs().iter().any(|c| c % 3 != 0) {
        return Err(Error::Internal("pullback of a line is not integral".into()));
    }
    state.basis[0] = DivisorClass::new(ctx.degree(), sum.coeffs().iter().map(|c| c / 3).collect())?;

    let mut expressions = Vec::with_capacity(n);
    for v in 0..n {
        let mut coords = vec![0i64; r + 1];
        let h = &state.hist[v];
        match h.contracted_at {
            Some(i) => coords[i] = 1,
            None => {
                let s = state.selfs[v];
                let a0 = isqrt(s);
                if a0 * a0 != s || a0 <= 0 {
                    return Err(Error::Internal(format!(
                        "surviving vertex has self-intersection {s} in the plane"
                    )));
                }
                coords[0] = a0;
            }
        }
        for &(j, m) in &h.mults {
            coords[j] -= m;
        }
        expressions.push(coords);
    }
    Ok(ContractionSequence {
        order: state.order,
        basis: state.basis,
        expressions,
    })
}

struct SeqState {
    selfs: Vec<i64>,
    edges: Vec<Vec<i64>>,
    alive: Vec<bool>,
    totals: Vec<DivisorClass>,
    hist: Vec<History>,
    order: Vec<usize>,
    basis: Vec<DivisorClass>,
}

fn search(diag: &ExtDynkin, st: &mut SeqState, steps_left: usize, forced: Option<usize>) -> bool {
    let n = st.alive.len();
    if steps_left == 0 {
        return (0..n).all(|v| !st.alive[v] || st.selfs[v] >= 0);
    }
    let mut cands: Vec<usize> = (0..n)
        .filter(|&v| st.alive[v] && st.selfs[v] == -1)
        .collect();
    cands.sort_by(|&a, &b| diag.vertices[a].0.cmp(&diag.vertices[b].0));
    if let Some(f) = forced {
        if !cands.contains(&f) {
            return false;
        }
        cands = vec![f];
    }
    for e in cands {
        let saved_selfs = st.selfs.clone();
        let saved_edges = st.edges.clone();
        let saved_totals = st.totals.clone();
        let saved_hist = st.hist.clone();
        let idx = steps_left;
        let te = st.totals[e].clone();
        st.alive[e] = false;
        st.hist[e].contracted_at = Some(idx);
        st.basis[idx] = te.clone();
        for v in 0..n {
            if !st.alive[v] {
                continue;
            }
            let m = st.edges[e][v];
            if m != 0 {
                st.hist[v].mults.push((idx, m));
                st.totals[v].add_scaled(m, &te);
            }
            st.selfs[v] += m * m;
        }
        for v in 0..n {
            for w in 0..n {
                if v != w && st.alive[v] && st.alive[w] {
                    st.edges[v][w] += saved_edges[e][v] * saved_edges[e][w];
                }
            }
        }
        st.order.push(e);
        if search(diag, st, steps_left - 1, None) {
            return true;
        }
        st.order.pop();
        st.alive[e] = true;
        st.selfs = saved_selfs;
        st.edges = saved_edges;
        st.totals = saved_totals;
        st.hist = saved_hist;
    }
    false
}

/// The type obtained by contracting the (-1)-vertex `e` of `t`, together with
/// the contraction sequence whose basis realizes the image lattice as the span
/// of `l'_0, ..., l'_{r-1}`.
pub fn contract_type(t: &SurfaceType, e: usize) -> Result<(SurfaceType, ContractionSequence)> {
    let seq = contraction_sequence_from(t, Some(e))?;
    let diag = build_ext_dynkin(t);
    let after = blowdown_step(&diag, e)?;
    let target_degree = t.degree + 1;
    let mut twos = Vec::new();
    let mut ones = Vec::new();
    for (class, s) in &after.vertices {
        if *s >= 0 {
            continue;
        }
        // Strict transform on the contracted surface pulled back to the original one.
        let mut total = class.clone();
        total.add_scaled(class.dot(&diag.vertices[e].0), &diag.vertices[e].0);
        let coords = seq.to_new_basis(&total);
        if *coords.last().unwrap() != 0 {
            return Err(Error::Internal(
                "image class not orthogonal to the contracted curve".into(),
            ));
        }
        let img = DivisorClass::new(target_degree, coords[..coords.len() - 1].to_vec())?;
        if *s == -2 {
            twos.push(img);
        } else if *s == -1 {
            ones.push(img);
        } else {
            return Err(Error::Internal(format!(
                "negative curve with self-intersection {s}"
            )));
        }
    }
    let target = SurfaceType::from_twos(target_degree, twos)?;
    let mut a: Vec<_> = target.minus_ones.clone();
    a.sort();
    ones.sort();
    if a != ones {
        return Err(Error::Internal(format!(
            "contraction of type {} produced inconsistent (-1)-curves",
            t.ade
        )));
    }
    Ok((target, seq))
}

/// Checks that the expressions of a contraction sequence reproduce every
/// vertex class exactly and that the new basis is orthonormal for the form.
pub fn verify_sequence(t: &SurfaceType, seq: &ContractionSequence) -> Result<()> {
    let ctx = t.context();
    for (i, a) in seq.basis.iter().enumerate() {
        for (j, b) in seq.basis.iter().enumerate() {
            let want = if i != j { 0 } else { ctx.form_entry(i) };
            if a.dot(b) != want {
                return Err(Error::Internal(format!(
                    "basis pairing ({i},{j}) is {}",
                    a.dot(b)
                )));
            }
        }
    }
    for (v, expr) in t.negative_curves().iter().zip(&seq.expressions) {
        if &seq.from_new_basis(expr) != v {
            return Err(Error::Internal(format!(
                "expression for {v} does not round-trip"
            )));
        }
    }
    let distinct: HashSet<_> = seq.order.iter().collect();
    if distinct.len() != ctx.blowups() {
        return Err(Error::Internal(
            "contraction order has repeated vertices".into(),
        ));
    }
    Ok(())
}
