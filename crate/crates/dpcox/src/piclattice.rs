//! Picard lattice of a blow-up of the projective plane in `9 - d` points.
//!
//! Classes are integer vectors in the basis `l0, l1, ..., lr` with `r = 9 - d`,
//! where `l0` is the pullback of a line and `l1..lr` are the total transforms of
//! the exceptional curves. The intersection form is `diag(1, -1, ..., -1)`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Degree-indexed description of the lattice `Z^{10-d}` with its form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeContext {
    degree: u8,
}

impl LatticeContext {
    /// Context for a surface of anticanonical degree `degree` (1 to 9).
    pub fn new(degree: u8) -> Result<Self> {
        if !(1..=9).contains(&degree) {
            return Err(Error::Domain(format!("degree {degree} outside 1..=9")));
        }
        Ok(Self { degree })
    }

    /// Anticanonical degree `d`.
    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Rank `10 - d` of the lattice.
    pub fn rank(&self) -> usize {
        10 - self.degree as usize
    }

    /// Number `r = 9 - d` of blown-up points.
    pub fn blowups(&self) -> usize {
        9 - self.degree as usize
    }

    /// Diagonal entry of the intersection form at basis index `i`.
    pub fn form_entry(&self, i: usize) -> i64 {
        if i == 0 {
            1
        } else {
            -1
        }
    }

    /// The zero class.
    pub fn zero(&self) -> DivisorClass {
        DivisorClass {
            degree: self.degree,
            coeffs: vec![0; self.rank()],
        }
    }

    /// Basis vector `l_i`.
    pub fn basis(&self, i: usize) -> DivisorClass {
        let mut c = self.zero();
        c.coeffs[i] = 1;
        c
    }

    /// Builds a class from coefficients, checking the length.
    pub fn class(&self, coeffs: &[i64]) -> Result<DivisorClass> {
        DivisorClass::new(self.degree, coeffs.to_vec())
    }
}

/// An element of the Picard lattice, stored by its coefficients in `l0..lr`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DivisorClass {
    degree: u8,
    coeffs: Vec<i64>,
}

impl DivisorClass {
    /// Creates a class of the degree-`degree` lattice from its coefficient vector.
    pub fn new(degree: u8, coeffs: Vec<i64>) -> Result<Self> {
        let ctx = LatticeContext::new(degree)?;
        if coeffs.len() != ctx.rank() {
            return Err(Error::Domain(format!(
                "class of degree {degree} needs {} coefficients, got {}",
                ctx.rank(),
                coeffs.len()
            )));
        }
        Ok(Self { degree, coeffs })
    }

    /// Degree of the lattice the class lives in.
    pub fn degree(&self) -> u8 {
        self.degree
    }

    /// Lattice context of the class.
    pub fn context(&self) -> LatticeContext {
        LatticeContext {
            degree: self.degree,
        }
    }

    /// Coefficients `(a0, a1, ..., ar)`.
    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// True for the zero class.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Intersection number with `other`.
    ///
    /// # Panics
    /// Panics when the two classes live in lattices of different degree; use
    /// [`intersect`] for a checked variant.
    pub fn dot(&self, other: &DivisorClass) -> i64 {
        assert_eq!(self.degree, other.degree, "classes from different lattices");
        let mut s = self.coeffs[0] * other.coeffs[0];
        for i in 1..self.coeffs.len() {
            s -= self.coeffs[i] * other.coeffs[i];
        }
        s
    }

    /// Self-intersection number.
    pub fn self_int(&self) -> i64 {
        self.dot(self)
    }

    /// Pairing with the anticanonical class.
    pub fn k_degree(&self) -> i64 {
        self.dot(&anticanonical(self.context()))
    }

    /// Integer multiple of the class.
    pub fn scale(&self, k: i64) -> DivisorClass {
        DivisorClass {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Adds `k` times `other` in place.
    pub fn add_scaled(&mut self, k: i64, other: &DivisorClass) {
        assert_eq!(self.degree, other.degree, "classes from different lattices");
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += k * b;
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        out.add_scaled(1, rhs);
        out
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        let mut out = self.clone();
        out.add_scaled(-1, rhs);
        out
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(-1)
    }
}

impl fmt::Display for DivisorClass {
    /// Writes the class as a signed sum such as `2l0-l1-l2`; zero prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                write!(f, "{sign}l{i}")?;
            } else {
                write!(f, "{sign}{mag}l{i}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Checked intersection number of two classes.
pub fn intersect(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    if a.degree != b.degree {
        return Err(Error::ContextMismatch {
            left: a.degree,
            right: b.degree,
        });
    }
    Ok(a.dot(b))
}

/// The anticanonical class `3l0 - l1 - ... - lr`.
pub fn anticanonical(ctx: LatticeContext) -> DivisorClass {
    let mut coeffs = vec![-1; ctx.rank()];
    coeffs[0] = 3;
    DivisorClass {
        degree: ctx.degree,
        coeffs,
    }
}

/// Every class `D` with `(D,D) = self_int` and `(D,-K) = k_degree`, for the two
/// supported pairs `(-2, 0)` (roots) and `(-1, 1)` ((-1)-classes).
///
/// The result is sorted lexicographically by coefficients.
pub fn enumerate_classes(
    ctx: LatticeContext,
    self_int: i64,
    k_degree: i64,
) -> Result<Vec<DivisorClass>> {
    if !matches!((self_int, k_degree), (-2, 0) | (-1, 1)) {
        return Err(Error::Domain(format!(
            "unsupported (self-intersection, anticanonical degree) pair ({self_int}, {k_degree})"
        )));
    }
    Ok(classes_with(ctx, self_int, k_degree))
}

/// Every class with self-intersection `n` and anticanonical degree `k`.
///
/// With `a_i` the exceptional coefficients, the constraints read
/// `sum a_i = 3 a0 - k` and `sum a_i^2 = a0^2 - n`. Cauchy-Schwarz bounds `a0`,
/// and the remaining coordinates are found by a DFS that keeps both partial
/// constraints satisfiable. The enumeration is finite whenever `d >= 1`.
pub fn classes_with(ctx: LatticeContext, n: i64, k: i64) -> Vec<DivisorClass> {
    let r = ctx.blowups() as i64;
    let mut out = Vec::new();
    for a0 in a0_range(r, n, k) {
        let sum = 3 * a0 - k;
        let sq = a0 * a0 - n;
        if sq < 0 || (r == 0 && (sum != 0 || sq != 0)) {
            continue;
        }
        let mut coeffs = vec![0i64; ctx.rank()];
        coeffs[0] = a0;
        // The tail holds the multiplicities a_i; the class stores -a_i.
        fill_tail(&mut coeffs, 1, sum, sq, &mut |c| {
            let mut v = c.to_vec();
            for x in &mut v[1..] {
                *x = -*x;
            }
            out.push(DivisorClass {
                degree: ctx.degree,
                coeffs: v,
            })
        });
    }
    out.sort();
    out
}

/// Integer `a0` with `(3 a0 - k)^2 <= r (a0^2 - n)`, a superset-safe range.
fn a0_range(r: i64, n: i64, k: i64) -> std::ops::RangeInclusive<i64> {
    // (9 - r) a0^2 - 6 k a0 + k^2 + r n <= 0
    let a = (9 - r) as f64;
    let b = -6.0 * k as f64;
    let c = (k * k + r * n) as f64;
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        // Empty real interval; keep a tiny window so exact arithmetic decides.
        let mid = (-b / (2.0 * a)).round() as i64;
        return mid - 1..=mid + 1;
    }
    let s = disc.sqrt();
    let lo = ((-b - s) / (2.0 * a)).floor() as i64 - 1;
    let hi = ((-b + s) / (2.0 * a)).ceil() as i64 + 1;
    lo..=hi
}

fn fill_tail(coeffs: &mut [i64], pos: usize, sum: i64, sq: i64, emit: &mut dyn FnMut(&[i64])) {
    let left = (coeffs.len() - pos) as i64;
    if left == 0 {
        if sum == 0 && sq == 0 {
            emit(coeffs);
        }
        return;
    }
    // The remaining `left` entries must realize `sum` with squares adding to `sq`.
    if sq < 0 || sum * sum > left * sq {
        return;
    }
    let bound = isqrt(sq);
    for a in -bound..=bound {
        coeffs[pos] = a;
        fill_tail(coeffs, pos + 1, sum - a, sq - a * a, emit);
    }
    coeffs[pos] = 0;
}

/// Floor of the square root of a nonnegative integer.
pub(crate) fn isqrt(n: i64) -> i64 {
    if n <= 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as i64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// The root system `R_d`: all classes with `(D,D) = -2` and `(D,-K) = 0`.
pub fn roots(ctx: LatticeContext) -> Vec<DivisorClass> {
    classes_with(ctx, -2, 0)
}

/// The (-1)-classes pairing nonnegatively with every class in `twos`.
pub fn neg1_curves(ctx: LatticeContext, twos: &[DivisorClass]) -> Result<Vec<DivisorClass>> {
    let all = classes_with(ctx, -1, 1);
    neg1_filter(ctx, &all, twos)
}

/// Same as [`neg1_curves`] but filters a precomputed list of (-1)-classes.
pub fn neg1_filter(
    ctx: LatticeContext,
    all: &[DivisorClass],
    twos: &[DivisorClass],
) -> Result<Vec<DivisorClass>> {
    for t in twos {
        if t.degree != ctx.degree {
            return Err(Error::ContextMismatch {
                left: ctx.degree,
                right: t.degree,
            });
        }
        if t.self_int() != -2 || t.k_degree() != 0 {
            return Err(Error::Precondition(format!("{t} is not a root")));
        }
    }
    Ok(all
        .iter()
        .filter(|d| twos.iter().all(|t| d.dot(t) >= 0))
        .cloned()
        .collect())
}

/// Weyl reflection `D + (D, root) root` in the hyperplane orthogonal to `root`.
pub fn reflect(root: &DivisorClass, d: &DivisorClass) -> Result<DivisorClass> {
    if intersect(root, root)? != -2 {
        return Err(Error::Precondition(format!("{root} is not a root")));
    }
    let mut out = d.clone();
    out.add_scaled(intersect(d, root)?, root);
    Ok(out)
}
