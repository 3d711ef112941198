//! Degrees of Cox ring generators and relations, and the resulting
//! classification of a type as toric, one-relation or multi-relation.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::minimize;
use crate::piclattice::{anticanonical, DivisorClass, LatticeContext};
use crate::typeenum::{
    build_ext_dynkin, contract_type, contraction_sequence, ContractionSequence, SurfaceType,
    TypeKey,
};

/// Default bound on `(D,-K)` for every degree scanned by the classifier.
pub const DEFAULT_SCAN_BOUND: i64 = 9;

/// Euler characteristic `((D,D) + (D,-K))/2 + 1` of the line bundle of `D`.
pub fn euler_char(d: &DivisorClass) -> Result<i64> {
    let s = d.self_int() + d.k_degree();
    if s % 2 != 0 {
        return Err(Error::Internal(format!(
            "non-integral Euler characteristic for {d}"
        )));
    }
    Ok(s / 2 + 1)
}

/// A class `w` with `(w, D_i) >= 1` for every given degree, found by exact
/// linear programming.
pub fn positive_functional(degrees: &[DivisorClass]) -> Result<Vec<BigRational>> {
    let Some(first) = degrees.first() else {
        return Err(Error::Precondition("empty degree list".into()));
    };
    let ctx = first.context();
    let rows: Vec<Vec<BigRational>> = degrees
        .iter()
        .map(|d| {
            if d.degree() != ctx.degree() {
                return Err(Error::ContextMismatch {
                    left: ctx.degree(),
                    right: d.degree(),
                });
            }
            Ok(d.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &c)| BigRational::from_integer(BigInt::from(c * ctx.form_entry(i))))
                .collect())
        })
        .collect::<Result<_>>()?;
    let rhs = vec![BigRational::one(); degrees.len()];
    // Minimizing the total pairing keeps every (w, D_i) small, which in turn
    // keeps the per-variable bounds of the counting search tight.
    let objective: Vec<BigRational> = (0..ctx.rank())
        .map(|j| rows.iter().map(|r| r[j].clone()).sum())
        .collect();
    minimize(&rows, &rhs, Some(&objective)).ok_or_else(|| {
        Error::Precondition(
            "degrees do not lie in an open half-space; no positive functional".into(),
        )
    })
}

/// Integer multiple of a positive functional, as a class.
fn integral_functional(degrees: &[DivisorClass]) -> Result<DivisorClass> {
    let w = positive_functional(degrees)?;
    let lcm = w.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let coeffs = w
        .iter()
        .map(|q| {
            (q.numer() * (&lcm / q.denom()))
                .to_i64()
                .ok_or_else(|| Error::Internal("functional does not fit in 64 bits".into()))
        })
        .collect::<Result<Vec<i64>>>()?;
    DivisorClass::new(degrees[0].degree(), coeffs)
}

/// Counts nonnegative integer solutions of `sum n_i D_i = D` for a fixed list
/// of degrees, reusing one positive functional for every query.
///
/// A maximal linearly independent subset of the degrees is solved for exactly;
/// only the multiplicities of the remaining degrees are enumerated, each bounded
/// through the positive functional.
#[derive(Debug, Clone)]
pub struct Counter {
    degrees: Vec<DivisorClass>,
    weight: DivisorClass,
    wdeg: Vec<i64>,
    /// Indices of the degrees whose multiplicities are solved for.
    pivots: Vec<usize>,
    /// Indices of the degrees whose multiplicities are enumerated.
    free: Vec<usize>,
    /// Coordinates used to solve for the pivot multiplicities.
    rows: Vec<usize>,
    /// `den` times the inverse of the pivot columns restricted to `rows`.
    inverse: Vec<Vec<i128>>,
    den: i128,
}

impl Counter {
    /// Prepares a counter; every degree must be nonzero and the list must lie
    /// in an open half-space.
    pub fn new(degrees: Vec<DivisorClass>) -> Result<Self> {
        if degrees.iter().any(DivisorClass::is_zero) {
            return Err(Error::Precondition("zero degree in generator list".into()));
        }
        let weight = integral_functional(&degrees)?;
        let wdeg: Vec<i64> = degrees.iter().map(|d| weight.dot(d)).collect();
        // Light degrees are solved for, heavy ones enumerated (fewer values each).
        let mut order: Vec<usize> = (0..degrees.len()).collect();
        order.sort_by_key(|&i| (wdeg[i], i));
        let rank = degrees[0].coeffs().len();
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let mut pivots = Vec::new();
        let mut free = Vec::new();
        let mut echelon: Vec<(usize, Vec<BigRational>)> = Vec::new();
        let mut rows = Vec::new();
        for &i in &order {
            let mut v: Vec<BigRational> = degrees[i].coeffs().iter().map(|&x| q(x)).collect();
            for (p, e) in &echelon {
                if !v[*p].is_zero() {
                    let f = &v[*p] / &e[*p];
                    for k in 0..rank {
                        v[k] = &v[k] - &f * &e[k];
                    }
                }
            }
            match v.iter().position(|x| !x.is_zero()) {
                Some(p) => {
                    rows.push(p);
                    echelon.push((p, v));
                    pivots.push(i);
                }
                None => free.push(i),
            }
        }
        free.sort_by_key(|&i| std::cmp::Reverse(wdeg[i]));
        let square: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|&r| pivots.iter().map(|&c| q(degrees[c].coeffs()[r])).collect())
            .collect();
        let inv = invert(square).ok_or_else(|| Error::Internal("singular pivot block".into()))?;
        let den = inv
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let to_i128 = |x: BigInt| {
            x.to_i128()
                .ok_or_else(|| Error::Internal("pivot inverse overflow".into()))
        };
        let inverse = inv
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| to_i128(x.numer() * (&den / x.denom())))
                    .collect()
            })
            .collect::<Result<Vec<Vec<i128>>>>()?;
        Ok(Self {
            den: to_i128(den)?,
            degrees,
            weight,
            wdeg,
            pivots,
            free,
            rows,
            inverse,
        })
    }

    /// The degrees being combined.
    pub fn degrees(&self) -> &[DivisorClass] {
        &self.degrees
    }

    /// The integral positive functional in use.
    pub fn weight(&self) -> &DivisorClass {
        &self.weight
    }

    /// Number of solutions.
    pub fn count(&self, d: &DivisorClass) -> u64 {
        let mut n = 0u64;
        self.visit(d, &mut |_| n += 1);
        n
    }

    /// Every solution vector `(n_1, ..., n_t)`, in lexicographic order.
    pub fn solutions(&self, d: &DivisorClass) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        self.visit(d, &mut |s| out.push(s.to_vec()));
        out.sort();
        out
    }

    fn visit(&self, d: &DivisorClass, f: &mut dyn FnMut(&[u32])) {
        if self.degrees.is_empty() {
            if d.is_zero() {
                f(&[]);
            }
            return;
        }
        let mut cur = vec![0u32; self.degrees.len()];
        let mut rem = d.coeffs().to_vec();
        self.visit_free(0, &mut rem, self.weight.dot(d), &mut cur, f);
    }

    fn visit_free(
        &self,
        k: usize,
        rem: &mut [i64],
        budget: i64,
        cur: &mut [u32],
        f: &mut dyn FnMut(&[u32]),
    ) {
        if budget < 0 {
            return;
        }
        if k == self.free.len() {
            if self.solve_pivots(rem, cur) {
                f(cur);
            }
            return;
        }
        let i = self.free[k];
        let w = self.wdeg[i];
        let g = self.degrees[i].coeffs();
        let top = budget / w;
        for n in 0..=top {
            cur[i] = n as u32;
            self.visit_free(k + 1, rem, budget - n * w, cur, f);
            for (r, x) in rem.iter_mut().zip(g) {
                *r -= x;
            }
        }
        for (r, x) in rem.iter_mut().zip(g) {
            *r += (top + 1) * x;
        }
        cur[i] = 0;
    }

    fn solve_pivots(&self, rem: &[i64], cur: &mut [u32]) -> bool {
        for (j, row) in self.inverse.iter().enumerate() {
            let num: i128 = row
                .iter()
                .zip(&self.rows)
                .map(|(a, &r)| a * rem[r] as i128)
                .sum();
            if num < 0 || num % self.den != 0 {
                return false;
            }
            cur[self.pivots[j]] = (num / self.den) as u32;
        }
        // The pivot rows determine the solution; the other coordinates must agree.
        (0..rem.len()).all(|r| {
            self.pivots
                .iter()
                .map(|&p| cur[p] as i64 * self.degrees[p].coeffs()[r])
                .sum::<i64>()
                == rem[r]
        })
    }
}

/// Number of ways to write `d` as a nonnegative integer combination of `degrees`.
pub fn count_combinations(d: &DivisorClass, degrees: &[DivisorClass]) -> Result<u64> {
    if degrees.is_empty() {
        return Ok(u64::from(d.is_zero()));
    }
    Ok(Counter::new(degrees.to_vec())?.count(d))
}

/// Why a type needs at least two relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MultiReason {
    /// At least `14 - d` negative curves, hence at least that many generators.
    TooManyNegativeCurves,
    /// Some contraction of a (-1)-curve leads to a multi-relation type.
    ContractionArgument,
    /// Dimension counting forces more than `13 - d` generators or a second relation.
    CountingSurplus,
}

/// Degrees of Cox ring generators and of the relation, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxPresentation {
    /// Negative curves first (in type order), then nef degrees in scan order.
    pub generator_degrees: Vec<DivisorClass>,
    pub relation_degree: Option<DivisorClass>,
    /// Exponent vectors of the relation, when known from explicit data.
    pub relation_monomials: Vec<Vec<u32>>,
}

/// Outcome of the decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Toric(CoxPresentation),
    OneRelation(CoxPresentation),
    MultiRelation(MultiReason),
}

impl Verdict {
    /// Short name: `toric`, `1 relation` or `>=2 relations`.
    pub fn short(&self) -> &'static str {
        match self {
            Verdict::Toric(_) => "toric",
            Verdict::OneRelation(_) => "1 relation",
            Verdict::MultiRelation(_) => ">=2 relations",
        }
    }

    /// Presentation for toric and one-relation verdicts.
    pub fn presentation(&self) -> Option<&CoxPresentation> {
        match self {
            Verdict::Toric(p) | Verdict::OneRelation(p) => Some(p),
            Verdict::MultiRelation(_) => None,
        }
    }
}

/// Verdict plus provenance details.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    /// True when degree-one reasoning relied on the generator-degree theorem,
    /// which is only conjectural in that degree.
    pub assumption_dependent: bool,
    /// For contraction arguments: the contracted class and the multi-relation target.
    pub witness: Option<String>,
}

/// Stateful classifier holding the memo of already classified types.
pub struct Classifier {
    bound: i64,
    memo: DashMap<TypeKey, Arc<(SurfaceType, Classification)>>,
}

impl Default for Classifier {
    fn default() -> Self {
        Self::new(DEFAULT_SCAN_BOUND)
    }
}

impl Classifier {
    /// Classifier scanning degrees with `(D,-K) <= bound`.
    pub fn new(bound: i64) -> Self {
        Self {
            bound,
            memo: DashMap::new(),
        }
    }

    /// Scan bound in use.
    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Classifies `t`, reusing memoized results for types with the same invariant.
    pub fn classify(&self, t: &SurfaceType) -> Result<Classification> {
        if let Some(hit) = self.memo.get(&t.key()).map(|e| Arc::clone(e.value())) {
            return transport(&hit.0, &hit.1, t);
        }
        let c = self.classify_uncached(t)?;
        self.memo
            .entry(t.key())
            .or_insert_with(|| Arc::new((t.clone(), c.clone())));
        Ok(c)
    }

    fn classify_uncached(&self, t: &SurfaceType) -> Result<Classification> {
        let d = t.degree as usize;
        let negs = t.negative_curves();
        let flag = d == 1;
        if negs.len() >= 14 - d {
            return Ok(Classification {
                verdict: Verdict::MultiRelation(MultiReason::TooManyNegativeCurves),
                assumption_dependent: flag,
                witness: None,
            });
        }
        let ctx = t.context();
        let mut candidates = Vec::new();
        let mut dependent = flag;
        if d == 7 {
            // The blow-downs of a degree-7 surface need not be blow-ups of the
            // plane, so every nef class of small anticanonical degree is a candidate.
            candidates.extend(nef_classes(t, 3)?);
        } else {
            let first_one = t.simple_twos.len();
            for (e, curve) in negs.iter().enumerate().skip(first_one) {
                let (target, seq) = contract_type(t, e)?;
                let tc = self.classify(&target)?;
                dependent |= tc.assumption_dependent;
                let pres = match &tc.verdict {
                    Verdict::MultiRelation(_) => {
                        return Ok(Classification {
                            verdict: Verdict::MultiRelation(MultiReason::ContractionArgument),
                            assumption_dependent: dependent,
                            witness: Some(format!(
                                "contracting {} gives degree {} type {} with >=2 relations",
                                curve,
                                target.degree,
                                target.label(true)
                            )),
                        });
                    }
                    Verdict::Toric(p) | Verdict::OneRelation(p) => p,
                };
                let tnegs = target.negative_curves();
                for g in &pres.generator_degrees {
                    if tnegs.contains(g) {
                        continue;
                    }
                    let mut coords = g.coeffs().to_vec();
                    coords.push(0);
                    candidates.push(seq.from_new_basis(&coords));
                }
            }
        }
        candidates.push(anticanonical(ctx));
        let mut scan = Scan::new(t, self.bound)?;
        let verdict = scan.run(candidates)?;
        Ok(Classification {
            verdict,
            assumption_dependent: dependent,
            witness: None,
        })
    }
}

/// Classifies a single type with a fresh classifier and the default bound.
pub fn classify_type(t: &SurfaceType) -> Result<Classification> {
    Classifier::default().classify(t)
}

/// State of the degree scan for one type.
struct Scan {
    degree: usize,
    negs: Vec<DivisorClass>,
    weight: DivisorClass,
    gens: Vec<DivisorClass>,
    counter: Counter,
    relation: Option<DivisorClass>,
    bound: i64,
    anti: DivisorClass,
    /// Degrees already found free of excess. A relation only lowers modelled
    /// counts, so the set is cleared only when generators are added.
    checked: HashSet<DivisorClass>,
    /// Nef classes grouped by anticanonical degree.
    nef_by_k: Vec<Vec<DivisorClass>>,
    nef: NefEnumerator,
}

/// Early exit of the scan with a multi-relation verdict.
struct Surplus;

impl Scan {
    fn new(t: &SurfaceType, bound: i64) -> Result<Self> {
        let negs = t.negative_curves();
        let anti = anticanonical(t.context());
        let mut basis = negs.clone();
        basis.push(anti.clone());
        let weight = integral_functional(&basis)?;
        let counter = Counter::new(negs.clone())?;
        Ok(Self {
            degree: t.degree as usize,
            gens: negs.clone(),
            negs,
            weight,
            counter,
            relation: None,
            bound,
            anti,
            checked: HashSet::new(),
            nef_by_k: Vec::new(),
            nef: NefEnumerator::new(t)?,
        })
    }

    /// Sort key compatible with the effective order: anticanonical degree,
    /// then the positive functional, then coefficients.
    fn key(&self, d: &DivisorClass) -> (i64, i64, DivisorClass) {
        (d.k_degree(), self.weight.dot(d), d.clone())
    }

    fn add_generators(&mut self, d: &DivisorClass, n: u64) -> Result<()> {
        for _ in 0..n {
            self.gens.push(d.clone());
        }
        self.counter = Counter::new(self.gens.clone())?;
        self.checked.clear();
        Ok(())
    }

    /// Expected dimension of the degree-`d` part given the relation found so far.
    fn modelled(&self, d: &DivisorClass) -> i64 {
        let base = self.counter.count(d) as i64;
        match &self.relation {
            Some(r) => base - self.counter.count(&(d - r)) as i64,
            None => base,
        }
    }

    /// `h^0` of `d`, obtained by stripping negative curves in the base locus
    /// until the class is nef.
    fn h0(&self, d: &DivisorClass) -> Result<i64> {
        let mut cur = d.clone();
        loop {
            if self.weight.dot(&cur) < 0 {
                return Ok(0);
            }
            match self.negs.iter().find(|c| cur.dot(c) < 0) {
                Some(c) => cur.add_scaled(-1, c),
                None => return euler_char(&cur),
            }
        }
    }

    /// Nef classes `E != d` with `E` and `d - E` both monomial degrees.
    ///
    /// Non-nef degrees are skipped: if `(E,C) < 0` for a negative curve `C`,
    /// every monomial of degree `E` contains the generator of `C`, so no minimal
    /// relation lives in degree `E`.
    fn smaller_degrees(&mut self, d: &DivisorClass) -> Vec<DivisorClass> {
        let top = d.k_degree().min(self.bound).max(0) as usize;
        let mut out = Vec::new();
        for k in 1..=top {
            for e in self.nef_level(k) {
                if &e != d && self.counter.count(&e) > 0 && self.counter.count(&(d - &e)) > 0 {
                    out.push(e);
                }
            }
        }
        out.sort_by_key(|e| self.key(e));
        out
    }

    /// Nef classes of anticanonical degree `k`, computed on first use.
    fn nef_level(&mut self, k: usize) -> Vec<DivisorClass> {
        while self.nef_by_k.len() <= k {
            let level = self.nef.level(self.nef_by_k.len() as i64);
            self.nef_by_k.push(level);
        }
        self.nef_by_k[k].clone()
    }

    /// Looks for degrees below `d` where the count exceeds `h^0`.
    fn search_below(&mut self, d: &DivisorClass) -> Result<std::result::Result<(), Surplus>> {
        for e in self.smaller_degrees(d) {
            if e.k_degree() > self.bound || self.checked.contains(&e) {
                continue;
            }
            let excess = self.modelled(&e) - self.h0(&e)?;
            if excess > 0 {
                if self.relation.is_some() || excess > 1 {
                    return Ok(Err(Surplus));
                }
                self.relation = Some(e.clone());
            }
            self.checked.insert(e);
        }
        Ok(Ok(()))
    }

    /// Compares counts with `h^0` at the nef candidate `d`.
    fn settle(
        &mut self,
        d: &DivisorClass,
        may_add: bool,
        search: bool,
    ) -> Result<std::result::Result<(), Surplus>> {
        if search {
            if let Err(s) = self.search_below(d)? {
                return Ok(Err(s));
            }
        }
        let h = euler_char(d)?;
        let mut c = self.modelled(d);
        if c > h {
            if self.relation.is_some() {
                return Ok(Err(Surplus));
            }
            self.relation = Some(d.clone());
            c = self.modelled(d);
            if c > h {
                return Ok(Err(Surplus));
            }
        }
        if c < h {
            if !may_add {
                return Err(Error::Internal(format!(
                    "missing generators in degree {d} outside the candidate list"
                )));
            }
            let deficit = (h - c) as u64;
            if d == &self.anti && deficit > 2 {
                return Err(Error::Internal(format!(
                    "{deficit} generators of anticanonical degree"
                )));
            }
            self.add_generators(d, deficit)?;
        }
        if self.gens.len() > 13 - self.degree {
            return Ok(Err(Surplus));
        }
        Ok(Ok(()))
    }

    fn run(&mut self, candidates: Vec<DivisorClass>) -> Result<Verdict> {
        let d = self.degree;
        let multi = Ok(Verdict::MultiRelation(MultiReason::CountingSurplus));
        let mut cands: Vec<DivisorClass> = candidates
            .into_iter()
            .filter(|c| !self.negs.contains(c) && c.k_degree() <= self.bound)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        cands.sort_by_key(|c| self.key(c));
        for c in &cands {
            if self.settle(c, true, true)?.is_err() {
                return multi;
            }
        }
        // Anticanonical multiples serve as anchors for the search below them;
        // the last anchor is the first multiple whose degree reaches the bound.
        let last_anchor = (self.bound + d as i64 - 1) / d as i64;
        let mut m = 1;
        while self.gens.len() == 13 - d && self.relation.is_none() {
            if m > last_anchor {
                return Err(Error::Inconclusive { bound: self.bound });
            }
            let mk = self.anti.scale(m);
            if self.settle(&mk, false, true)?.is_err() {
                return multi;
            }
            m += 1;
        }
        // Confirm the presentation on every anticanonical multiple in range.
        let mut m = 1;
        while (m * d as i64) <= self.bound {
            let mk = self.anti.scale(m);
            if self.settle(&mk, false, false)?.is_err() {
                return multi;
            }
            m += 1;
        }
        let pres = CoxPresentation {
            generator_degrees: self.gens.clone(),
            relation_degree: self.relation.clone(),
            relation_monomials: Vec::new(),
        };
        match (self.gens.len(), &self.relation) {
            (n, None) if n == 12 - d => Ok(Verdict::Toric(pres)),
            (n, Some(_)) if n == 13 - d => Ok(Verdict::OneRelation(pres)),
            (n, _) if n > 13 - d => multi,
            (n, r) => Err(Error::Internal(format!(
                "{n} generators with relation {} in degree {d}",
                r.as_ref().map_or("none".to_string(), |r| r.to_string())
            ))),
        }
    }
}

/// Re-expresses a classification computed for `rep` in the coordinates of `t`,
/// which has the same invariant triple.
fn transport(rep: &SurfaceType, c: &Classification, t: &SurfaceType) -> Result<Classification> {
    if rep == t {
        return Ok(c.clone());
    }
    let map = isometry(rep, t)?;
    let mapv = |v: &Verdict| -> Verdict {
        let mp = |p: &CoxPresentation| CoxPresentation {
            generator_degrees: p.generator_degrees.iter().map(&map).collect(),
            relation_degree: p.relation_degree.as_ref().map(&map),
            relation_monomials: p.relation_monomials.clone(),
        };
        match v {
            Verdict::Toric(p) => Verdict::Toric(mp(p)),
            Verdict::OneRelation(p) => Verdict::OneRelation(mp(p)),
            Verdict::MultiRelation(r) => Verdict::MultiRelation(*r),
        }
    };
    Ok(Classification {
        verdict: mapv(&c.verdict),
        assumption_dependent: c.assumption_dependent,
        witness: c.witness.clone(),
    })
}

/// An integral isometry fixing `-K` that maps the negative curves of `a` onto
/// those of `b`, returned as a class map.
pub fn isometry(
    a: &SurfaceType,
    b: &SurfaceType,
) -> Result<impl Fn(&DivisorClass) -> DivisorClass> {
    let da = build_ext_dynkin(a);
    let db = build_ext_dynkin(b);
    let n = da.vertices.len();
    if n != db.vertices.len() || a.degree != b.degree {
        return Err(Error::Internal(
            "isometry between types of different shape".into(),
        ));
    }
    let ctx = a.context();
    let mut assign = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let mut found = None;
    match_vertices(&da, &db, 0, &mut assign, &mut used, &mut |assign| {
        let src: Vec<DivisorClass> = da.vertices.iter().map(|v| v.0.clone()).collect();
        let dst: Vec<DivisorClass> = assign.iter().map(|&j| db.vertices[j].0.clone()).collect();
        match solve_map(ctx, &src, &dst) {
            Some(m) => {
                found = Some(m);
                true
            }
            None => false,
        }
    });
    let m =
        found.ok_or_else(|| Error::Internal("no isometry between equal-invariant types".into()))?;
    Ok(move |d: &DivisorClass| {
        let coeffs = (0..m.len())
            .map(|i| m[i].iter().zip(d.coeffs()).map(|(x, y)| x * y).sum())
            .collect();
        DivisorClass::new(d.degree(), coeffs).expect("same rank")
    })
}

fn match_vertices(
    da: &crate::typeenum::ExtDynkin,
    db: &crate::typeenum::ExtDynkin,
    i: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let n = assign.len();
    if i == n {
        return accept(assign);
    }
    for j in 0..n {
        if used[j] || da.vertices[i].1 != db.vertices[j].1 {
            continue;
        }
        if (0..i).any(|k| da.edges[i][k] != db.edges[j][assign[k]]) {
            continue;
        }
        used[j] = true;
        assign[i] = j;
        if match_vertices(da, db, i + 1, assign, used, accept) {
            return true;
        }
        used[j] = false;
    }
    assign[i] = usize::MAX;
    false
}

/// Integer matrix `M` with `M src_i = dst_i` for all `i` and `M(-K) = -K`,
/// provided the sources span the rational lattice and `M` is integral.
fn solve_map(
    ctx: LatticeContext,
    src: &[DivisorClass],
    dst: &[DivisorClass],
) -> Option<Vec<Vec<i64>>> {
    let rank = ctx.rank();
    let anti = anticanonical(ctx);
    let mut s: Vec<&DivisorClass> = src.iter().collect();
    let mut t: Vec<&DivisorClass> = dst.iter().collect();
    s.push(&anti);
    t.push(&anti);
    // Select a basis among the sources by Gaussian elimination.
    let q = |x: i64| BigRational::from_integer(BigInt::from(x));
    let mut chosen: Vec<usize> = Vec::new();
    let mut echelon: Vec<Vec<BigRational>> = Vec::new();
    for (idx, v) in s.iter().enumerate() {
        let mut row: Vec<BigRational> = v.coeffs().iter().map(|&x| q(x)).collect();
        for e in &echelon {
            let p = e.iter().position(|x| !x.is_zero()).unwrap();
            if !row[p].is_zero() {
                let f = &row[p] / &e[p];
                for k in 0..rank {
                    row[k] = &row[k] - &f * &e[k];
                }
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            echelon.push(row);
            chosen.push(idx);
            if chosen.len() == rank {
                break;
            }
        }
    }
    if chosen.len() < rank {
        return None;
    }
    // Solve M S = T with S, T the chosen columns: M = T S^{-1}.
    let sm: Vec<Vec<BigRational>> = (0..rank)
        .map(|r| chosen.iter().map(|&c| q(s[c].coeffs()[r])).collect())
        .collect();
    let inv = invert(sm)?;
    let mut m = vec![vec![0i64; rank]; rank];
    for (r, row) in m.iter_mut().enumerate() {
        for (c, entry) in row.iter_mut().enumerate() {
            let mut acc = BigRational::zero();
            for k in 0..rank {
                acc += q(t[chosen[k]].coeffs()[r]) * &inv[k][c];
            }
            if !acc.is_integer() {
                return None;
            }
            *entry = acc.to_integer().to_i64()?;
        }
    }
    for (a, b) in s.iter().zip(&t) {
        let img: Vec<i64> = (0..rank)
            .map(|r| (0..rank).map(|c| m[r][c] * a.coeffs()[c]).sum())
            .collect();
        if img != b.coeffs() {
            return None;
        }
    }
    Some(m)
}

fn invert(mut a: Vec<Vec<BigRational>>) -> Option<Vec<Vec<BigRational>>> {
    let n = a.len();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for k in 0..n {
            a[col][k] = &a[col][k] / &p;
            inv[col][k] = &inv[col][k] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..n {
                    let x = &a[col][k] * &f;
                    a[r][k] = &a[r][k] - x;
                    let y = &inv[col][k] * &f;
                    inv[r][k] = &inv[r][k] - y;
                }
            }
        }
    }
    Some(inv)
}

/// Every nef class `D` with `1 <= (D,-K) <= max_k` for the type `t`, sorted.
pub fn nef_classes(t: &SurfaceType, max_k: i64) -> Result<Vec<DivisorClass>> {
    let nef = NefEnumerator::new(t)?;
    let mut out = Vec::new();
    for k in 1..=max_k {
        out.extend(nef.level(k));
    }
    out.sort();
    Ok(out)
}

/// Enumerates nef classes of a type in the basis of one of its contraction
/// sequences.
///
/// In that basis `l'_i` and `l'_0 - l'_i` are effective, so a nef class has
/// multiplicities `0 <= m_i <= a_0` with `sum m_i = 3 a_0 - k` and
/// `sum m_i^2 <= a_0^2`. Each negative curve prunes the search as soon as the
/// last coordinate it involves is fixed.
struct NefEnumerator {
    seq: ContractionSequence,
    /// Negative curves in the new basis, grouped by the last coordinate they use.
    curves_by_last: Vec<Vec<Vec<i64>>>,
}

impl NefEnumerator {
    fn new(t: &SurfaceType) -> Result<Self> {
        let seq = contraction_sequence(t)?;
        let rank = t.context().rank();
        let mut curves_by_last = vec![Vec::new(); rank];
        for c in t.negative_curves() {
            let coords = seq.to_new_basis(&c);
            let last = coords.iter().rposition(|&x| x != 0).unwrap_or(0);
            curves_by_last[last].push(coords);
        }
        Ok(Self {
            seq,
            curves_by_last,
        })
    }

    /// Nef classes with `(D,-K) = k`, sorted.
    fn level(&self, k: i64) -> Vec<DivisorClass> {
        let rank = self.curves_by_last.len();
        let r = (rank - 1) as i64;
        let mut out = Vec::new();
        let mut m = vec![0i64; rank];
        let mut a0 = (k + 2) / 3;
        // (3 a0 - k)^2 <= r a0^2 holds on an interval of a0 since r < 9.
        while (3 * a0 - k).pow(2) <= r * a0 * a0 || 3 * a0 <= k {
            if (3 * a0 - k).pow(2) <= r * a0 * a0 {
                m[0] = a0;
                if self.pairs_ok(&m, 0) {
                    self.fill(&mut m, 1, 3 * a0 - k, 0, &mut out);
                }
            }
            a0 += 1;
        }
        out.sort();
        out
    }

    /// Pairings `(D, C)` for curves whose last coordinate is `pos` are nonnegative.
    /// `m[0]` is `a_0` and `m[i]` the multiplicity, so the class has new-basis
    /// coordinates `(a_0, -m_1, ..., -m_r)`.
    fn pairs_ok(&self, m: &[i64], pos: usize) -> bool {
        self.curves_by_last[pos].iter().all(|c| {
            let tail: i64 = (1..=pos).map(|i| m[i] * c[i]).sum();
            m[0] * c[0] + tail >= 0
        })
    }

    fn fill(&self, m: &mut [i64], pos: usize, sum: i64, sq: i64, out: &mut Vec<DivisorClass>) {
        let a0 = m[0];
        let left = (m.len() - pos) as i64;
        if left == 0 {
            if sum == 0 {
                let coords: Vec<i64> = m
                    .iter()
                    .enumerate()
                    .map(|(i, &x)| if i == 0 { x } else { -x })
                    .collect();
                out.push(self.seq.from_new_basis(&coords));
            }
            return;
        }
        for x in 0..=a0.min(sum) {
            let rest = sum - x;
            let q = left - 1;
            if rest > q * a0 {
                continue;
            }
            // Remaining squares are at least rest^2 / q by Cauchy-Schwarz.
            let sq2 = sq + x * x;
            let fits = if q == 0 {
                sq2 <= a0 * a0
            } else {
                q * sq2 + rest * rest <= q * a0 * a0
            };
            if !fits {
                continue;
            }
            m[pos] = x;
            if self.pairs_ok(m, pos) {
                self.fill(m, pos + 1, rest, sq2, out);
            }
        }
        m[pos] = 0;
    }
}
