//! Exact multivariate polynomials over a field, principal-ideal division,
//! small Gröbner reductions, and the geometric checks built on them.
//!
//! Monomials are ordered graded-lexicographically everywhere. Polynomials are
//! generic over the coefficient field; the crate root aliases the rational
//! instance as [`Poly`](crate::Poly).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::piclattice::{DivisorClass, LatticeContext};

/// Coefficient field of a [`MultiPoly`].
pub trait Field: Num + Clone + Neg<Output = Self> + fmt::Debug + fmt::Display {}
impl<T: Num + Clone + Neg<Output = T> + fmt::Debug + fmt::Display> Field for T {}

/// Exponent vector ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True when `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn quotient(&self, divisor: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&divisor.0).map(|(a, b)| a - b).collect())
    }

    fn product(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in a fixed number of variables with coefficients in `C`.
///
/// Zero coefficients are never stored, so equal polynomials have equal term maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly<C> {
    arity: usize,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Field> MultiPoly<C> {
    /// The zero polynomial.
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// A constant.
    pub fn constant(arity: usize, c: C) -> Self {
        Self::term(c, vec![0; arity])
    }

    /// The variable with index `i`.
    ///
    /// # Panics
    /// Panics if `i >= arity`.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!(
            i < arity,
            "variable index {i} out of range for arity {arity}"
        );
        let mut e = vec![0; arity];
        e[i] = 1;
        Self::term(C::one(), e)
    }

    /// A single term `c * x^exps`.
    pub fn term(c: C, exps: Vec<u32>) -> Self {
        let arity = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(exps), c);
        }
        Self { arity, terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging repeats.
    pub fn from_terms<I: IntoIterator<Item = (C, Vec<u32>)>>(
        arity: usize,
        items: I,
    ) -> Result<Self> {
        let mut p = Self::zero(arity);
        for (c, e) in items {
            if e.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: e.len(),
                });
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        self.arity
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    /// Largest term under the graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Maximal total degree of a term, or `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// True when the polynomial has exactly one term.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Self {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// Multiplies by the single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.arity);
        }
        Self {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.product(m), v.clone() * c.clone()))
                .collect(),
        }
    }

    /// `self^n`.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(self.arity, C::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluates at a point.
    pub fn eval(&self, point: &[C]) -> Result<C> {
        self.check_len(point.len())?;
        let mut s = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t = t * x.clone();
                }
            }
            s = s + t;
        }
        Ok(s)
    }

    /// Substitutes `images[i]` for variable `i`; all images must share one arity.
    pub fn substitute(&self, images: &[MultiPoly<C>]) -> Result<MultiPoly<C>> {
        self.check_len(images.len())?;
        let out_arity = match images.first() {
            Some(p) => p.arity,
            None => 0,
        };
        for p in images {
            if p.arity != out_arity {
                return Err(Error::ArityMismatch {
                    expected: out_arity,
                    found: p.arity,
                });
            }
        }
        let mut powers: Vec<Vec<MultiPoly<C>>> = vec![Vec::new(); images.len()];
        let mut out = MultiPoly::zero(out_arity);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(out_arity, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let cache = &mut powers[i];
                while cache.len() < e as usize {
                    let next = match cache.last() {
                        Some(last) => last * &images[i],
                        None => images[i].clone(),
                    };
                    cache.push(next);
                }
                t = &t * &cache[e as usize - 1];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if i >= self.arity {
            return Err(Error::Domain(format!(
                "variable index {i} out of range for arity {}",
                self.arity
            )));
        }
        let mut out = Self::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = m.clone();
            n.0[i] -= 1;
            let mut k = C::zero();
            for _ in 0..e {
                k = k + C::one();
            }
            out.add_term(n, c.clone() * k);
        }
        Ok(out)
    }

    /// Renders the polynomial with the given variable names, highest term first.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        PolyDisplay { poly: self, names }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: n,
            });
        }
        Ok(())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        self.check_len(other.arity)
    }
}

struct PolyDisplay<'a, C> {
    poly: &'a MultiPoly<C>,
    names: &'a [String],
}

impl<C: Field> fmt::Display for PolyDisplay<'_, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let mut coef = c.to_string();
            let negative = coef.starts_with('-');
            if negative {
                coef.remove(0);
            }
            if idx == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { " - " } else { " + " })?;
            }
            let is_const = m.degree() == 0;
            let unit = coef == "1";
            if !unit || is_const {
                if coef.contains('/') && !is_const {
                    write!(f, "({coef})")?;
                } else {
                    write!(f, "{coef}")?;
                }
            }
            let mut first = unit;
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                let name = self
                    .names
                    .get(i)
                    .cloned()
                    .unwrap_or_else(|| format!("x{i}"));
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

impl<C: Field> fmt::Display for MultiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.arity).map(|i| format!("x{i}")).collect();
        let shown = PolyDisplay {
            poly: self,
            names: &names,
        };
        write!(f, "{shown}")
    }
}

impl<C: Field> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    /// # Panics
    /// Panics on arity mismatch.
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(
            self.arity, rhs.arity,
            "arity mismatch in polynomial addition"
        );
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Field> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    /// # Panics
    /// Panics on arity mismatch.
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(
            self.arity, rhs.arity,
            "arity mismatch in polynomial subtraction"
        );
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Field> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    /// # Panics
    /// Panics on arity mismatch.
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        assert_eq!(
            self.arity, rhs.arity,
            "arity mismatch in polynomial multiplication"
        );
        let mut out = MultiPoly::zero(self.arity);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.product(m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Field> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;

    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// Checked sum, reporting arity mismatches as errors.
pub fn try_add<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    a.check_same(b)?;
    Ok(a + b)
}

/// Checked difference, reporting arity mismatches as errors.
pub fn try_sub<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    a.check_same(b)?;
    Ok(a - b)
}

/// Checked product, reporting arity mismatches as errors.
pub fn try_mul<C: Field>(a: &MultiPoly<C>, b: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    a.check_same(b)?;
    Ok(a * b)
}

/// Exact quotient `f / r`, or [`Error::NotDivisible`] when `f` is not in `(r)`.
///
/// Uses multivariate division by the single polynomial `r`, which is a Gröbner
/// basis of its principal ideal, so a zero remainder decides membership.
pub fn exact_divide<C: Field>(f: &MultiPoly<C>, r: &MultiPoly<C>) -> Result<MultiPoly<C>> {
    f.check_same(r)?;
    let Some((lm, lc)) = r.leading_term() else {
        return Err(Error::Domain("division by the zero polynomial".into()));
    };
    let (lm, lc) = (lm.clone(), lc.clone());
    let mut rem = f.clone();
    let mut q = MultiPoly::zero(f.arity);
    // Any term of the remainder not divisible by lm stays in the remainder, so
    // the first such leading term already proves non-membership.
    while let Some((m, c)) = rem.leading_term() {
        if !lm.divides(m) {
            return Err(Error::NotDivisible);
        }
        let qm = m.quotient(&lm);
        let qc = c.clone() / lc.clone();
        rem = &rem - &r.mul_term(&qm, &qc);
        q.add_term(qm, qc);
    }
    Ok(q)
}

/// Caps on the Buchberger completion inside [`groebner_reduce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroebnerCaps {
    /// Largest allowed basis size.
    pub max_basis: usize,
    /// Largest allowed total degree of a basis element.
    pub max_degree: u32,
}

impl Default for GroebnerCaps {
    fn default() -> Self {
        Self {
            max_basis: 64,
            max_degree: 24,
        }
    }
}

/// Remainder of `f` modulo the ideal generated by `gens`, with default caps.
pub fn groebner_reduce<C: Field>(f: &MultiPoly<C>, gens: &[MultiPoly<C>]) -> Result<MultiPoly<C>> {
    groebner_reduce_capped(f, gens, GroebnerCaps::default())
}

/// Remainder of `f` modulo the ideal of `gens` after Buchberger completion.
///
/// The remainder is zero exactly when `f` lies in the ideal.
pub fn groebner_reduce_capped<C: Field>(
    f: &MultiPoly<C>,
    gens: &[MultiPoly<C>],
    caps: GroebnerCaps,
) -> Result<MultiPoly<C>> {
    if gens.is_empty() {
        return Err(Error::Domain("empty generator list".into()));
    }
    for g in gens {
        f.check_same(g)?;
    }
    let basis = groebner_basis(gens, caps)?;
    Ok(reduce_full(f, &basis))
}

/// Reduced-by-leading-term Gröbner basis of the ideal of `gens`.
pub fn groebner_basis<C: Field>(
    gens: &[MultiPoly<C>],
    caps: GroebnerCaps,
) -> Result<Vec<MultiPoly<C>>> {
    let mut basis: Vec<MultiPoly<C>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(make_monic)
        .collect();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (mi, _) = basis[i].leading_term().expect("nonzero basis element");
        let (mj, _) = basis[j].leading_term().expect("nonzero basis element");
        // Buchberger's first criterion: coprime leading monomials reduce to zero.
        if mi.0.iter().zip(&mj.0).all(|(a, b)| *a == 0 || *b == 0) {
            continue;
        }
        let l = mi.lcm(mj);
        let si = basis[i].mul_term(&l.quotient(mi), &C::one());
        let sj = basis[j].mul_term(&l.quotient(mj), &C::one());
        let s = reduce_full(&(&si - &sj), &basis);
        if s.is_zero() {
            continue;
        }
        if basis.len() >= caps.max_basis {
            return Err(Error::ResourceCap(format!(
                "basis size exceeds {}",
                caps.max_basis
            )));
        }
        if s.total_degree().unwrap_or(0) > caps.max_degree {
            return Err(Error::ResourceCap(format!(
                "basis degree exceeds {}",
                caps.max_degree
            )));
        }
        let n = basis.len();
        basis.push(make_monic(&s));
        for i in 0..n {
            pairs.push((i, n));
        }
    }
    Ok(basis)
}

fn make_monic<C: Field>(p: &MultiPoly<C>) -> MultiPoly<C> {
    match p.leading_term() {
        Some((_, c)) => p.scale(&(C::one() / c.clone())),
        None => p.clone(),
    }
}

/// Full multivariate division remainder of `f` by `divisors`.
fn reduce_full<C: Field>(f: &MultiPoly<C>, divisors: &[MultiPoly<C>]) -> MultiPoly<C> {
    let mut p = f.clone();
    let mut rem = MultiPoly::zero(f.arity);
    while let Some((m, c)) = p.leading_term() {
        let (m, c) = (m.clone(), c.clone());
        let hit = divisors.iter().find_map(|g| {
            let (gm, gc) = g.leading_term()?;
            gm.divides(&m).then(|| (g, gm.clone(), gc.clone()))
        });
        match hit {
            Some((g, gm, gc)) => {
                p = &p - &g.mul_term(&m.quotient(&gm), &(c / gc));
            }
            None => {
                p.terms.remove(&m);
                rem.add_term(m, c);
            }
        }
    }
    rem
}

/// Polynomial ring graded by the Picard lattice: variable `i` has degree `degrees[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedRing {
    ctx: LatticeContext,
    degrees: Vec<DivisorClass>,
}

impl GradedRing {
    /// Ring whose variables carry the given classes, all from one lattice.
    pub fn new(ctx: LatticeContext, degrees: Vec<DivisorClass>) -> Result<Self> {
        for d in &degrees {
            if d.degree() != ctx.degree() {
                return Err(Error::ContextMismatch {
                    left: ctx.degree(),
                    right: d.degree(),
                });
            }
        }
        Ok(Self { ctx, degrees })
    }

    /// Number of variables.
    pub fn arity(&self) -> usize {
        self.degrees.len()
    }

    /// Degrees of the variables.
    pub fn degrees(&self) -> &[DivisorClass] {
        &self.degrees
    }

    /// Lattice the grading lives in.
    pub fn context(&self) -> LatticeContext {
        self.ctx
    }

    /// Degree of a single exponent vector.
    pub fn monomial_degree(&self, m: &Monomial) -> DivisorClass {
        let mut d = self.ctx.zero();
        for (e, g) in m.0.iter().zip(&self.degrees) {
            d.add_scaled(i64::from(*e), g);
        }
        d
    }
}

/// Common degree of all monomials of `p`; errors when `p` is not homogeneous.
///
/// The zero polynomial has no degree and is reported as not homogeneous.
pub fn graded_degree<C: Field>(p: &MultiPoly<C>, ring: &GradedRing) -> Result<DivisorClass> {
    p.check_len(ring.arity())?;
    let mut found: Option<DivisorClass> = None;
    for (m, _) in p.terms() {
        let d = ring.monomial_degree(m);
        match &found {
            None => found = Some(d),
            Some(f) if *f == d => {}
            Some(f) => {
                return Err(Error::NotHomogeneous(format!(
                    "monomials of degrees {f} and {d}"
                )));
            }
        }
    }
    found.ok_or_else(|| Error::NotHomogeneous("zero polynomial".into()))
}

/// Weighted degree of `p` for coordinate weights `w`, if weighted homogeneous.
pub fn weighted_degree<C: Field>(p: &MultiPoly<C>, w: &[u32]) -> Result<u32> {
    p.check_len(w.len())?;
    let mut found = None;
    for (m, _) in p.terms() {
        let d: u32 = m.0.iter().zip(w).map(|(e, w)| e * w).sum();
        match found {
            None => found = Some(d),
            Some(f) if f == d => {}
            Some(f) => {
                return Err(Error::NotHomogeneous(format!(
                    "weighted degrees {f} and {d}"
                )))
            }
        }
    }
    found.ok_or_else(|| Error::NotHomogeneous("zero polynomial".into()))
}

/// Ambient space of an anticanonical model: `P^d` or a weighted plane-like space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AmbientSpace {
    weights: Vec<u32>,
}

impl AmbientSpace {
    /// Ambient space of the anticanonical model in degree `d`.
    pub fn for_degree(d: u8) -> Result<Self> {
        let weights = match d {
            3..=9 => vec![1; d as usize + 1],
            2 => vec![2, 1, 1, 1],
            1 => vec![3, 2, 1, 1],
            _ => return Err(Error::Domain(format!("degree {d} outside 1..=9"))),
        };
        Ok(Self { weights })
    }

    /// Space with explicit weights.
    pub fn weighted(weights: Vec<u32>) -> Result<Self> {
        if weights.is_empty() || weights.contains(&0) {
            return Err(Error::Domain(
                "weights must be positive and nonempty".into(),
            ));
        }
        Ok(Self { weights })
    }

    /// The projective plane with coordinates `y0, y1, y2`.
    pub fn plane() -> Self {
        Self {
            weights: vec![1; 3],
        }
    }

    /// Coordinate weights.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Number of coordinates.
    pub fn dim_coords(&self) -> usize {
        self.weights.len()
    }
}

/// Outcome of [`singular_point_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum PointStatus {
    Singular,
    Smooth,
    NotOnSurface,
}

/// Decides whether `point` is a singular point of the surface cut out by `eqs`.
///
/// Works in the affine chart where a nonzero weight-one coordinate is set to
/// one; the surface has codimension `n - 3` there, with `n` coordinates.
pub fn singular_point_check(
    eqs: &[MultiPoly<BigRational>],
    point: &[BigRational],
    space: &AmbientSpace,
) -> Result<PointStatus> {
    let n = space.dim_coords();
    if point.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: point.len(),
        });
    }
    let chart = (0..n)
        .find(|&i| space.weights[i] == 1 && !point[i].is_zero())
        .ok_or(Error::UnsupportedChart)?;
    // Rescale the point so the chart coordinate is one. A weight-w coordinate
    // scales by t^w with t = 1/point[chart].
    let t = BigRational::one() / point[chart].clone();
    let scaled: Vec<BigRational> = point
        .iter()
        .zip(&space.weights)
        .map(|(x, &w)| {
            let mut f = x.clone();
            for _ in 0..w {
                f *= t.clone();
            }
            f
        })
        .collect();
    for f in eqs {
        if !f.eval(&scaled)?.is_zero() {
            return Ok(PointStatus::NotOnSurface);
        }
    }
    let mut jac = Vec::with_capacity(eqs.len());
    for f in eqs {
        let mut row = Vec::with_capacity(n - 1);
        for j in (0..n).filter(|&j| j != chart) {
            row.push(f.partial(j)?.eval(&scaled)?);
        }
        jac.push(row);
    }
    let codim = n - 3;
    Ok(if rank(jac) < codim {
        PointStatus::Singular
    } else {
        PointStatus::Smooth
    })
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank<C: Field>(mut m: Vec<Vec<C>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone() / pivot.clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                *v = v.clone() - f.clone() * pv.clone();
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Rational map given by weighted-homogeneous components in the source coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMap<C> {
    pub source: AmbientSpace,
    pub target: AmbientSpace,
    pub components: Vec<MultiPoly<C>>,
}

impl<C: Field> RationalMap<C> {
    /// Checks arities and weighted homogeneity: component `i` must have source
    /// degree `m * w_i` for a common `m`, where `w_i` is the target weight.
    pub fn new(
        source: AmbientSpace,
        target: AmbientSpace,
        components: Vec<MultiPoly<C>>,
    ) -> Result<Self> {
        if components.len() != target.dim_coords() {
            return Err(Error::ArityMismatch {
                expected: target.dim_coords(),
                found: components.len(),
            });
        }
        let mut scale: Option<(u32, u32)> = None;
        for (p, &w) in components.iter().zip(&target.weights) {
            if p.arity() != source.dim_coords() {
                return Err(Error::ArityMismatch {
                    expected: source.dim_coords(),
                    found: p.arity(),
                });
            }
            if p.is_zero() {
                continue;
            }
            let deg = weighted_degree(p, &source.weights)?;
            match scale {
                None => scale = Some((deg, w)),
                Some((d0, w0)) => {
                    if deg * w0 != d0 * w {
                        return Err(Error::NotHomogeneous(format!(
                            "component degrees {d0} (weight {w0}) and {deg} (weight {w}) are not proportional"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            source,
            target,
            components,
        })
    }

    /// Composition `self ∘ inner`, substituting `inner` into the components.
    pub fn compose(&self, inner: &RationalMap<C>) -> Result<Vec<MultiPoly<C>>> {
        self.components
            .iter()
            .map(|p| p.substitute(&inner.components))
            .collect()
    }
}

/// Failure found by [`roundtrip_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RoundtripFailure {
    /// Surface equation `index` does not vanish on the image of `psi`.
    EquationNonzero { index: usize },
    /// `phi(psi(y))` is identically zero.
    DegenerateComposite,
    /// Components `i` and `j` of `phi(psi(y))` are not proportional to `y_i`, `y_j`.
    NotProportional { i: usize, j: usize },
}

impl fmt::Display for RoundtripFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EquationNonzero { index } => write!(f, "equation {index} does not vanish on psi"),
            Self::DegenerateComposite => write!(f, "phi(psi(y)) vanishes identically"),
            Self::NotProportional { i, j } => {
                write!(
                    f,
                    "phi(psi(y)) is not proportional to y in components {i},{j}"
                )
            }
        }
    }
}

/// Verifies that `psi: P2 -> S` lands on the surface and that `phi ∘ psi` is the identity of `P2`.
///
/// `phi` maps the ambient space of `S` to the plane. Returns the first failure found.
pub fn roundtrip_check<C: Field>(
    eqs: &[MultiPoly<C>],
    phi: &RationalMap<C>,
    psi: &RationalMap<C>,
) -> Result<Option<RoundtripFailure>> {
    for (index, f) in eqs.iter().enumerate() {
        if !f.substitute(&psi.components)?.is_zero() {
            return Ok(Some(RoundtripFailure::EquationNonzero { index }));
        }
    }
    let comp = phi.compose(psi)?;
    if comp.iter().all(MultiPoly::is_zero) {
        return Ok(Some(RoundtripFailure::DegenerateComposite));
    }
    let n = comp.len();
    let arity = psi.source.dim_coords();
    for i in 0..n {
        for j in i + 1..n {
            let yi = MultiPoly::var(arity, i);
            let yj = MultiPoly::var(arity, j);
            let diff = &(&comp[i] * &yj) - &(&comp[j] * &yi);
            if !diff.is_zero() {
                return Ok(Some(RoundtripFailure::NotProportional { i, j }));
            }
        }
    }
    Ok(None)
}
