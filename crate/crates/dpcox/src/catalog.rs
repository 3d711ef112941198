//! Bundled dataset of toric types and one-relation surfaces, its loader, and
//! the per-case verification battery.
//!
//! The document is JSON with `"schema": 1`. Polynomials are lists of
//! `[coefficient, exponents]` terms; coefficients are decimal integers or the
//! parameter tokens `lambda`, `-lambda`, `k*lambda`. Entries carrying
//! `lambda_values` expand into one case per value, with id suffix `-l<value>`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ade::AdeLabel;
use crate::coxdegrees::{count_combinations, euler_char, Classifier, Verdict};
use crate::error::{Error, Result};
use crate::piclattice::{anticanonical, DivisorClass, LatticeContext};
use crate::polyverify::{
    exact_divide, graded_degree, groebner_reduce, singular_point_check, AmbientSpace, GradedRing,
    PointStatus, RationalMap,
};
use crate::typeenum::{enumerate_types, find_type, SurfaceType};
use crate::Poly;

/// The dataset bundled with the crate.
pub const BUNDLED: &str = include_str!("../data/catalog.json");

/// Number of checks in the battery run by [`verify_case`].
pub const NUM_CHECKS: usize = 10;

type RawPoly = Vec<(String, Vec<u32>)>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    schema: u32,
    toric: Vec<ToricEntry>,
    cases: Vec<RawCase>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCase {
    id: String,
    degree: u8,
    ade: AdeLabel,
    num_lines: usize,
    #[serde(default)]
    lambda_values: Option<Vec<i64>>,
    generators: Vec<RawGenerator>,
    dynkin_edges: Vec<[usize; 3]>,
    relation: RawPoly,
    relation_degree: Vec<i64>,
    equations: Vec<RawPoly>,
    pullback: Vec<RawPoly>,
    identities: Vec<RawIdentity>,
    singular_points: Vec<SingularPoint>,
    triple_points: Vec<TriplePoint>,
    projection: Vec<RawPoly>,
    #[serde(default)]
    inverse: Option<Vec<RawPoly>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGenerator {
    class: Vec<i64>,
    kind: CurveKind,
    #[serde(default)]
    contracted_to: Option<Vec<i64>>,
    #[serde(default)]
    locus: Option<Vec<RawPoly>>,
    #[serde(default)]
    image_point: Option<Vec<i64>>,
    #[serde(default)]
    image_curve: Option<RawPoly>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIdentity {
    linear: RawPoly,
    monomial: RawPoly,
}

/// Kind of a Cox ring generator's curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// A (-2)-curve.
    MinusTwo,
    /// A (-1)-curve, whose image is a line.
    MinusOne,
    /// A curve of nonnegative self-intersection.
    Other,
}

/// Image of a generator's curve in the plane: a curve or a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaneImage {
    Curve(Poly),
    Point(Vec<i64>),
}

/// One Cox ring generator with its geometric data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub class: DivisorClass,
    pub kind: CurveKind,
    /// Singular point a (-2)-curve is contracted to.
    pub contracted_to: Option<Vec<i64>>,
    /// Equations of the image curve on the anticanonical model.
    pub locus: Option<Vec<Poly>>,
    pub image: PlaneImage,
}

/// A listed singular point with its ADE type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SingularPoint {
    pub ade: AdeLabel,
    pub point: Vec<i64>,
}

/// Three generators meeting in one point, with the image of that point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriplePoint {
    pub curves: Vec<usize>,
    pub point: Vec<i64>,
}

/// Identity `pi^*(linear) = monomial` modulo the relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub linear: Poly,
    pub monomial: Poly,
}

/// A fully expanded one-relation surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogCase {
    pub id: String,
    pub degree: u8,
    pub ade: AdeLabel,
    pub num_lines: usize,
    pub lambda: Option<i64>,
    pub generators: Vec<Generator>,
    /// Symmetric matrix of edge multiplicities between generators (zero diagonal).
    pub edges: Vec<Vec<i64>>,
    pub relation: Poly,
    pub relation_degree: DivisorClass,
    pub ambient: AmbientSpace,
    pub equations: Vec<Poly>,
    /// `pi^*(x_i)` for each ambient coordinate.
    pub pullback: Vec<Poly>,
    pub identities: Vec<Identity>,
    pub singular_points: Vec<SingularPoint>,
    pub triple_points: Vec<TriplePoint>,
    /// Components of the map to the plane, in ambient coordinates.
    pub projection: Vec<Poly>,
    /// Components of the inverse map, in plane coordinates, when listed.
    pub inverse: Option<Vec<Poly>>,
}

impl CatalogCase {
    /// Number of Cox ring generators, `13 - d`.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// Generator degrees in index order.
    pub fn generator_classes(&self) -> Vec<DivisorClass> {
        self.generators.iter().map(|g| g.class.clone()).collect()
    }

    /// The (-2)-classes among the generators.
    pub fn twos(&self) -> Vec<DivisorClass> {
        self.generators
            .iter()
            .filter(|g| g.kind == CurveKind::MinusTwo)
            .map(|g| g.class.clone())
            .collect()
    }

    /// Type of the case, rebuilt from its (-2)-classes.
    pub fn surface_type(&self) -> Result<SurfaceType> {
        SurfaceType::from_twos(self.degree, self.twos())
    }
}

/// A toric type with the cyclic self-intersection sequence of its boundary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToricEntry {
    pub degree: u8,
    pub ade: AdeLabel,
    pub num_lines: usize,
    pub cycle: Vec<i64>,
}

/// Loaded dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    pub toric: Vec<ToricEntry>,
    /// One-relation cases ordered by decreasing degree, then id.
    pub cases: Vec<CatalogCase>,
}

impl Catalog {
    /// Case with the given id.
    pub fn case(&self, id: &str) -> Option<&CatalogCase> {
        self.cases.iter().find(|c| c.id == id)
    }
}

/// Parses the bundled dataset.
pub fn bundled_catalog() -> Result<Catalog> {
    load_catalog(BUNDLED.as_bytes())
}

/// Parses and validates a catalog document.
pub fn load_catalog(source: &[u8]) -> Result<Catalog> {
    let mut de = serde_json::Deserializer::from_slice(source);
    let raw: RawCatalog =
        serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Catalog {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
    de.end().map_err(|e| Error::Catalog {
        path: ".".into(),
        message: e.to_string(),
    })?;
    if raw.schema != 1 {
        return Err(Error::Catalog {
            path: "schema".into(),
            message: format!("unsupported schema version {}", raw.schema),
        });
    }
    for (i, t) in raw.toric.iter().enumerate() {
        LatticeContext::new(t.degree).map_err(|e| cat_err(format!("toric[{i}].degree"), e))?;
    }
    let mut cases = Vec::new();
    for (i, rc) in raw.cases.iter().enumerate() {
        let values: Vec<Option<i64>> = match &rc.lambda_values {
            Some(v) => v.iter().map(|&x| Some(x)).collect(),
            None => vec![None],
        };
        for lam in values {
            let c = expand_case(rc, lam).map_err(|e| match e {
                Error::Catalog { path, message } => Error::Catalog {
                    path: format!("cases[{i}].{path}"),
                    message,
                },
                other => cat_err(format!("cases[{i}]"), other),
            })?;
            cases.push(c);
        }
    }
    cases.sort_by(|a, b| {
        (std::cmp::Reverse(a.degree), &a.id).cmp(&(std::cmp::Reverse(b.degree), &b.id))
    });
    for w in cases.windows(2) {
        if w[0].id == w[1].id {
            return Err(Error::Catalog {
                path: "cases".into(),
                message: format!("duplicate id {}", w[0].id),
            });
        }
    }
    Ok(Catalog {
        toric: raw.toric,
        cases,
    })
}

fn cat_err(path: String, e: Error) -> Error {
    Error::Catalog {
        path,
        message: e.to_string(),
    }
}

fn field_err(path: &str, message: impl Into<String>) -> Error {
    Error::Catalog {
        path: path.into(),
        message: message.into(),
    }
}

fn parse_coeff(s: &str, lambda: Option<i64>, path: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some(rest) = s.strip_suffix("lambda") {
        let lam = lambda.ok_or_else(|| {
            field_err(path, "lambda coefficient in an entry without lambda_values")
        })?;
        let k: i64 = match rest.trim_end_matches('*') {
            "" => 1,
            "-" => -1,
            other => other
                .parse()
                .map_err(|_| field_err(path, format!("bad coefficient {s:?}")))?,
        };
        return Ok(BigRational::from_integer(BigInt::from(k * lam)));
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| field_err(path, format!("bad coefficient {s:?}")))?;
    Ok(BigRational::from_integer(n))
}

fn parse_poly(raw: &RawPoly, arity: usize, lambda: Option<i64>, path: &str) -> Result<Poly> {
    let mut terms = Vec::with_capacity(raw.len());
    for (k, (c, e)) in raw.iter().enumerate() {
        if e.len() != arity {
            return Err(field_err(
                &format!("{path}[{k}]"),
                format!(
                    "exponent vector of length {} where {arity} is required",
                    e.len()
                ),
            ));
        }
        terms.push((parse_coeff(c, lambda, &format!("{path}[{k}]"))?, e.clone()));
    }
    Poly::from_terms(arity, terms).map_err(|e| cat_err(path.into(), e))
}

fn parse_polys(
    raw: &[RawPoly],
    arity: usize,
    lambda: Option<i64>,
    path: &str,
) -> Result<Vec<Poly>> {
    raw.iter()
        .enumerate()
        .map(|(i, p)| parse_poly(p, arity, lambda, &format!("{path}[{i}]")))
        .collect()
}

fn check_point(p: &[i64], n: usize, path: &str) -> Result<()> {
    if p.len() != n {
        return Err(field_err(
            path,
            format!("point with {} coordinates where {n} are required", p.len()),
        ));
    }
    if p.iter().all(|&x| x == 0) {
        return Err(field_err(path, "zero point"));
    }
    Ok(())
}

fn expand_case(rc: &RawCase, lambda: Option<i64>) -> Result<CatalogCase> {
    let ctx = LatticeContext::new(rc.degree).map_err(|e| cat_err("degree".into(), e))?;
    if !(1..=7).contains(&rc.degree) {
        return Err(field_err("degree", "one-relation cases have degree 1..=7"));
    }
    let ngen = 13 - rc.degree as usize;
    let ambient = AmbientSpace::for_degree(rc.degree)?;
    let nx = ambient.dim_coords();
    if rc.generators.len() != ngen {
        return Err(field_err(
            "generators",
            format!(
                "{} generators where {ngen} are required",
                rc.generators.len()
            ),
        ));
    }
    let mut generators = Vec::with_capacity(ngen);
    for (i, g) in rc.generators.iter().enumerate() {
        let path = format!("generators[{i}]");
        let class = ctx
            .class(&g.class)
            .map_err(|e| cat_err(format!("{path}.class"), e))?;
        let image = match (&g.image_point, &g.image_curve) {
            (Some(p), None) => {
                check_point(p, 3, &format!("{path}.image_point"))?;
                PlaneImage::Point(p.clone())
            }
            (None, Some(c)) => {
                PlaneImage::Curve(parse_poly(c, 3, lambda, &format!("{path}.image_curve"))?)
            }
            _ => {
                return Err(field_err(
                    &path,
                    "exactly one of image_point and image_curve is required",
                ))
            }
        };
        if let Some(p) = &g.contracted_to {
            check_point(p, nx, &format!("{path}.contracted_to"))?;
        }
        let locus = match &g.locus {
            Some(l) => Some(parse_polys(l, nx, lambda, &format!("{path}.locus"))?),
            None => None,
        };
        match g.kind {
            CurveKind::MinusTwo if g.contracted_to.is_none() => {
                return Err(field_err(&path, "(-2)-curve without contracted_to"));
            }
            CurveKind::MinusOne | CurveKind::Other if locus.is_none() => {
                return Err(field_err(&path, "curve without locus"));
            }
            _ => {}
        }
        generators.push(Generator {
            class,
            kind: g.kind,
            contracted_to: g.contracted_to.clone(),
            locus,
            image,
        });
    }
    let mut edges = vec![vec![0i64; ngen]; ngen];
    for (k, &[i, j, m]) in rc.dynkin_edges.iter().enumerate() {
        if i == 0 || j == 0 || i > ngen || j > ngen || i == j {
            return Err(field_err(
                &format!("dynkin_edges[{k}]"),
                "generator index out of range",
            ));
        }
        edges[i - 1][j - 1] = m as i64;
        edges[j - 1][i - 1] = m as i64;
    }
    for (k, t) in rc.triple_points.iter().enumerate() {
        check_point(&t.point, nx, &format!("triple_points[{k}].point"))?;
        if t.curves.iter().any(|&c| c == 0 || c > ngen) {
            return Err(field_err(
                &format!("triple_points[{k}].curves"),
                "generator index out of range",
            ));
        }
    }
    for (k, s) in rc.singular_points.iter().enumerate() {
        check_point(&s.point, nx, &format!("singular_points[{k}].point"))?;
    }
    if rc.pullback.len() != nx {
        return Err(field_err(
            "pullback",
            format!("{} entries where {nx} are required", rc.pullback.len()),
        ));
    }
    if rc.projection.len() != 3 {
        return Err(field_err("projection", "three components are required"));
    }
    let inverse = match &rc.inverse {
        Some(v) => {
            if v.len() != nx {
                return Err(field_err(
                    "inverse",
                    format!("{} components where {nx} are required", v.len()),
                ));
            }
            Some(parse_polys(v, 3, lambda, "inverse")?)
        }
        None => None,
    };
    let identities = rc
        .identities
        .iter()
        .enumerate()
        .map(|(k, id)| {
            Ok(Identity {
                linear: parse_poly(&id.linear, nx, lambda, &format!("identities[{k}].linear"))?,
                monomial: parse_poly(
                    &id.monomial,
                    ngen,
                    lambda,
                    &format!("identities[{k}].monomial"),
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let id = match lambda {
        Some(l) => format!("{}-l{l}", rc.id),
        None => rc.id.clone(),
    };
    Ok(CatalogCase {
        id,
        degree: rc.degree,
        ade: rc.ade.clone(),
        num_lines: rc.num_lines,
        lambda,
        generators,
        edges,
        relation: parse_poly(&rc.relation, ngen, lambda, "relation")?,
        relation_degree: ctx
            .class(&rc.relation_degree)
            .map_err(|e| cat_err("relation_degree".into(), e))?,
        ambient,
        equations: parse_polys(&rc.equations, nx, lambda, "equations")?,
        pullback: parse_polys(&rc.pullback, ngen, lambda, "pullback")?,
        identities,
        singular_points: rc.singular_points.clone(),
        triple_points: rc.triple_points.clone(),
        projection: parse_polys(&rc.projection, nx, lambda, "projection")?,
        inverse,
    })
}

/// Outcome of one check of the battery.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    /// Check number, 1 to 10.
    pub check: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Explanation of the first failure found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Results of the battery for one case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub checks: Vec<CheckResult>,
}

impl CaseReport {
    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Numbers of the failed checks.
    pub fn failed_checks(&self) -> Vec<u8> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.check)
            .collect()
    }
}

const CHECK_NAMES: [&str; NUM_CHECKS] = [
    "relation homogeneous of stated degree",
    "relation degree monomial count",
    "generator classes reproduce diagram",
    "pullback degrees",
    "equations divisible by relation",
    "pullback identities",
    "singular and triple points",
    "line loci contain surface",
    "birational round trip",
    "lattice classification",
];

/// Runs the ten checks on one case with a fresh classifier.
pub fn verify_case(c: &CatalogCase) -> CaseReport {
    verify_case_with(c, &Classifier::default())
}

/// Runs the ten checks, sharing the classifier memo across calls.
pub fn verify_case_with(c: &CatalogCase, classifier: &Classifier) -> CaseReport {
    type Check = fn(&CatalogCase, &Classifier) -> Result<std::result::Result<(), String>>;
    let checks: [Check; NUM_CHECKS] = [
        |c, _| check_homogeneous(c),
        |c, _| check_monomial_count(c),
        |c, _| check_diagram(c),
        |c, _| check_pullback_degrees(c),
        |c, _| check_equations(c),
        |c, _| check_identities(c),
        |c, _| check_points(c),
        |c, _| check_loci(c),
        |c, _| check_roundtrip(c),
        check_classification,
    ];
    let results = checks
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let (passed, detail) = match f(c, classifier) {
                Ok(Ok(())) => (true, None),
                Ok(Err(msg)) => (false, Some(msg)),
                Err(e) => (false, Some(format!("error: {e}"))),
            };
            CheckResult {
                check: i as u8 + 1,
                name: CHECK_NAMES[i],
                passed,
                detail,
            }
        })
        .collect();
    CaseReport {
        id: c.id.clone(),
        checks: results,
    }
}

/// Verifies all cases in parallel; reports come back in catalog order.
pub fn verify_all(cases: &[CatalogCase]) -> Vec<CaseReport> {
    let classifier = Classifier::default();
    cases
        .par_iter()
        .map(|c| verify_case_with(c, &classifier))
        .collect()
}

type CheckOutcome = Result<std::result::Result<(), String>>;

fn ring(c: &CatalogCase) -> Result<GradedRing> {
    let ctx = LatticeContext::new(c.degree)?;
    GradedRing::new(ctx, c.generator_classes())
}

fn check_homogeneous(c: &CatalogCase) -> CheckOutcome {
    let ring = ring(c)?;
    Ok(match graded_degree(&c.relation, &ring) {
        Ok(d) if d == c.relation_degree => Ok(()),
        Ok(d) => Err(format!(
            "relation has degree {d}, stated {}",
            c.relation_degree
        )),
        Err(e) => Err(e.to_string()),
    })
}

fn check_monomial_count(c: &CatalogCase) -> CheckOutcome {
    let d0 = &c.relation_degree;
    let n = count_combinations(d0, &c.generator_classes())?;
    let chi = euler_char(d0)?;
    if n != (chi + 1) as u64 {
        return Ok(Err(format!(
            "{n} monomials of degree {d0}, expected euler_char + 1 = {}",
            chi + 1
        )));
    }
    if c.relation.len() < 2 {
        return Ok(Err("relation has fewer than two terms".into()));
    }
    Ok(Ok(()))
}

fn check_diagram(c: &CatalogCase) -> CheckOutcome {
    let n = c.num_generators();
    for (i, g) in c.generators.iter().enumerate() {
        let s = g.class.self_int();
        let ok = match g.kind {
            CurveKind::MinusTwo => s == -2 && g.class.k_degree() == 0,
            CurveKind::MinusOne => s == -1 && g.class.k_degree() == 1,
            CurveKind::Other => s >= 0,
        };
        if !ok {
            return Ok(Err(format!(
                "E{} has self-intersection {s}, inconsistent with {:?}",
                i + 1,
                g.kind
            )));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let dot = c.generators[i].class.dot(&c.generators[j].class);
            if dot != c.edges[i][j] {
                return Ok(Err(format!(
                    "(E{}, E{}) = {dot} but the diagram has multiplicity {}",
                    i + 1,
                    j + 1,
                    c.edges[i][j]
                )));
            }
        }
    }
    Ok(Ok(()))
}

fn check_pullback_degrees(c: &CatalogCase) -> CheckOutcome {
    let ring = ring(c)?;
    let anti = anticanonical(ring.context());
    for (i, (p, &w)) in c.pullback.iter().zip(c.ambient.weights()).enumerate() {
        let want = anti.scale(i64::from(w));
        match graded_degree(p, &ring) {
            Ok(d) if d == want => {}
            Ok(d) => return Ok(Err(format!("pi^*(x{i}) has degree {d}, expected {want}"))),
            Err(e) => return Ok(Err(format!("pi^*(x{i}): {e}"))),
        }
    }
    Ok(Ok(()))
}

fn check_equations(c: &CatalogCase) -> CheckOutcome {
    let mut nonzero = 0;
    for (i, f) in c.equations.iter().enumerate() {
        let pulled = f.substitute(&c.pullback)?;
        if !pulled.is_zero() {
            nonzero += 1;
        }
        match exact_divide(&pulled, &c.relation) {
            Ok(_) => {}
            Err(Error::NotDivisible) => {
                return Ok(Err(format!(
                    "equation {i} pulled back is not a multiple of the relation"
                )));
            }
            Err(e) => return Err(e),
        }
    }
    if nonzero == 0 {
        return Ok(Err("every equation pulls back to zero".into()));
    }
    Ok(Ok(()))
}

fn check_identities(c: &CatalogCase) -> CheckOutcome {
    for (i, id) in c.identities.iter().enumerate() {
        let diff = &id.linear.substitute(&c.pullback)? - &id.monomial;
        match exact_divide(&diff, &c.relation) {
            Ok(_) => {}
            Err(Error::NotDivisible) => {
                return Ok(Err(format!(
                    "identity {i} does not hold modulo the relation"
                )));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Ok(()))
}

fn rational_point(p: &[i64]) -> Vec<BigRational> {
    p.iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect()
}

fn on_surface(c: &CatalogCase, p: &[i64]) -> Result<bool> {
    let q = rational_point(p);
    for f in &c.equations {
        if !f.eval(&q)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_points(c: &CatalogCase) -> CheckOutcome {
    for s in &c.singular_points {
        let status = singular_point_check(&c.equations, &rational_point(&s.point), &c.ambient)?;
        if status != PointStatus::Singular {
            return Ok(Err(format!("{} point {:?} is {status:?}", s.ade, s.point)));
        }
    }
    for (i, g) in c.generators.iter().enumerate() {
        if let Some(p) = &g.contracted_to {
            if !c.singular_points.iter().any(|s| &s.point == p) {
                return Ok(Err(format!(
                    "E{} is contracted to the unlisted point {p:?}",
                    i + 1
                )));
            }
        }
    }
    for t in &c.triple_points {
        if !on_surface(c, &t.point)? {
            return Ok(Err(format!(
                "triple point image {:?} is not on the surface",
                t.point
            )));
        }
        for &k in &t.curves {
            if let Some(locus) = &c.generators[k - 1].locus {
                let q = rational_point(&t.point);
                for f in locus {
                    if !f.eval(&q)?.is_zero() {
                        return Ok(Err(format!(
                            "triple point image {:?} is not on E{k}",
                            t.point
                        )));
                    }
                }
            }
        }
    }
    Ok(Ok(()))
}

fn check_loci(c: &CatalogCase) -> CheckOutcome {
    for (i, g) in c.generators.iter().enumerate() {
        let Some(locus) = &g.locus else { continue };
        for (k, f) in c.equations.iter().enumerate() {
            if !groebner_reduce(f, locus)?.is_zero() {
                return Ok(Err(format!(
                    "equation {k} is not in the ideal of the locus of E{}",
                    i + 1
                )));
            }
        }
    }
    Ok(Ok(()))
}

/// Inverse map reconstructed from the plane images of the generators: each
/// generator is replaced by the equation of its image curve, or by one when
/// its curve is contracted to a point of the plane.
pub fn reconstructed_inverse(c: &CatalogCase) -> Result<Vec<Poly>> {
    let images: Vec<Poly> = c
        .generators
        .iter()
        .map(|g| match &g.image {
            PlaneImage::Curve(p) => p.clone(),
            PlaneImage::Point(_) => Poly::constant(3, BigRational::one()),
        })
        .collect();
    c.pullback.iter().map(|p| p.substitute(&images)).collect()
}

fn check_roundtrip(c: &CatalogCase) -> CheckOutcome {
    let plane = AmbientSpace::plane();
    let phi = RationalMap::new(c.ambient.clone(), plane.clone(), c.projection.clone())?;
    let mut inverses = vec![("reconstructed", reconstructed_inverse(c)?)];
    if let Some(inv) = &c.inverse {
        inverses.push(("listed", inv.clone()));
    }
    for (label, comps) in inverses {
        let psi = match RationalMap::new(plane.clone(), c.ambient.clone(), comps) {
            Ok(m) => m,
            Err(e) => return Ok(Err(format!("{label} inverse: {e}"))),
        };
        if let Some(fail) = crate::polyverify::roundtrip_check(&c.equations, &phi, &psi)? {
            return Ok(Err(format!("{label} inverse: {fail}")));
        }
    }
    Ok(Ok(()))
}

fn check_classification(c: &CatalogCase, classifier: &Classifier) -> CheckOutcome {
    let t = match c.surface_type() {
        Ok(t) => t,
        Err(e) => return Ok(Err(format!("(-2)-classes do not define a type: {e}"))),
    };
    if t.ade != c.ade || t.num_lines != c.num_lines {
        return Ok(Err(format!(
            "(-2)-classes give type {} with {} lines, catalog says {} with {}",
            t.ade, t.num_lines, c.ade, c.num_lines
        )));
    }
    let ones: Vec<DivisorClass> = c
        .generators
        .iter()
        .filter(|g| g.kind == CurveKind::MinusOne)
        .map(|g| g.class.clone())
        .collect();
    let mut a = ones.clone();
    let mut b = t.minus_ones.clone();
    a.sort();
    b.sort();
    if a != b {
        return Ok(Err(
            "(-1)-generators differ from the (-1)-classes of the type".into(),
        ));
    }
    let cl = classifier.classify(&t)?;
    let Verdict::OneRelation(p) = &cl.verdict else {
        return Ok(Err(format!("classified as {}", cl.verdict.short())));
    };
    let mut got = p.generator_degrees.clone();
    let mut want = c.generator_classes();
    got.sort();
    want.sort();
    if got != want {
        return Ok(Err(
            "generator degrees differ from the lattice computation".into()
        ));
    }
    if p.relation_degree.as_ref() != Some(&c.relation_degree) {
        return Ok(Err(
            "relation degree differs from the lattice computation".into()
        ));
    }
    Ok(Ok(()))
}

/// Outcome of verifying one toric entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ToricReport {
    pub label: String,
    pub degree: u8,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Checks that `cycle` is the self-intersection sequence of a complete
/// smooth toric surface: consecutive rays satisfy
/// `v[i-1] + v[i+1] = -b[i] v[i]` and the sequence closes up after one turn.
pub fn toric_cycle_closes(cycle: &[i64]) -> bool {
    let n = cycle.len();
    if n < 3 {
        return false;
    }
    if cycle.iter().sum::<i64>() != 12 - 3 * n as i64 {
        return false;
    }
    let (mut a, mut b) = ([1i64, 0], [0i64, 1]);
    for k in 0..n {
        let bi = cycle[(k + 1) % n];
        let c = [-a[0] - bi * b[0], -a[1] - bi * b[1]];
        a = b;
        b = c;
    }
    a == [1, 0] && b == [0, 1]
}

/// Reads the self-intersections around the boundary cycle formed by `classes`,
/// if their intersection graph is a single cycle with simple edges.
pub fn boundary_cycle(classes: &[DivisorClass]) -> Option<Vec<i64>> {
    let n = classes.len();
    if n < 3 {
        return None;
    }
    let mut nbrs = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            match classes[i].dot(&classes[j]) {
                0 => {}
                1 => {
                    nbrs[i].push(j);
                    nbrs[j].push(i);
                }
                _ => return None,
            }
        }
    }
    if nbrs.iter().any(|v| v.len() != 2) {
        return None;
    }
    let mut order = vec![0usize];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = if nbrs[cur][0] != prev {
            nbrs[cur][0]
        } else {
            nbrs[cur][1]
        };
        if next == 0 {
            break;
        }
        order.push(next);
        prev = cur;
        cur = next;
        if order.len() > n {
            return None;
        }
    }
    (order.len() == n).then(|| order.iter().map(|&i| classes[i].self_int()).collect())
}

/// True when `a` and `b` agree up to rotation and reflection.
pub fn same_cycle(a: &[i64], b: &[i64]) -> bool {
    let n = a.len();
    if n != b.len() {
        return false;
    }
    let rev: Vec<i64> = b.iter().rev().copied().collect();
    (0..n.max(1))
        .any(|s| (0..n).all(|i| a[i] == b[(i + s) % n]) || (0..n).all(|i| a[i] == rev[(i + s) % n]))
}

/// Verifies a toric entry: the cycle closes up, and for degrees up to seven
/// the lattice classification is toric with generators forming that cycle.
pub fn verify_toric(entry: &ToricEntry, classifier: &Classifier) -> ToricReport {
    let label = format!("{}:{}", entry.ade, entry.num_lines);
    let fail = |msg: String| ToricReport {
        label: label.clone(),
        degree: entry.degree,
        passed: false,
        detail: Some(msg),
    };
    if !toric_cycle_closes(&entry.cycle) {
        return fail("cycle does not close up".into());
    }
    if entry.cycle.len() != 12 - entry.degree as usize {
        return fail(format!(
            "{} rays where {} are required",
            entry.cycle.len(),
            12 - entry.degree
        ));
    }
    if entry.degree <= 7 {
        let outcome = enumerate_types(entry.degree)
            .and_then(|types| find_type(&types, &entry.ade, Some(entry.num_lines)))
            .and_then(|t| classifier.classify(&t));
        let cl = match outcome {
            Ok(cl) => cl,
            Err(e) => return fail(e.to_string()),
        };
        let Verdict::Toric(p) = &cl.verdict else {
            return fail(format!("classified as {}", cl.verdict.short()));
        };
        match boundary_cycle(&p.generator_degrees) {
            Some(cyc) if same_cycle(&cyc, &entry.cycle) => {}
            Some(cyc) => return fail(format!("generators form the cycle {cyc:?}")),
            None => return fail("generators do not form a cycle".into()),
        }
    }
    ToricReport {
        label,
        degree: entry.degree,
        passed: true,
        detail: None,
    }
}

/// Counts of entries per degree, for summaries.
pub fn cases_per_degree(cat: &Catalog) -> BTreeMap<u8, usize> {
    let mut m = BTreeMap::new();
    for c in &cat.cases {
        *m.entry(c.degree).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_counts() {
        let cat = bundled_catalog().unwrap();
        assert_eq!(cat.cases.len(), 36);
        assert_eq!(cat.toric.len(), 16);
    }

    #[test]
    fn truncated_document_is_rejected() {
        let cut = &BUNDLED.as_bytes()[..BUNDLED.len() / 2];
        assert!(matches!(load_catalog(cut), Err(Error::Catalog { .. })));
    }

    #[test]
    fn unknown_field_reports_path() {
        let doc = br#"{"schema": 1, "toric": [{"degree": 9, "ade": "-", "num_lines": 0, "cycle": [1,1,1], "extra": 1}], "cases": []}"#;
        match load_catalog(doc) {
            Err(Error::Catalog { path, .. }) => assert!(path.starts_with("toric[0]"), "{path}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn toric_cycle_identity() {
        assert!(toric_cycle_closes(&[1, 1, 1]));
        assert!(toric_cycle_closes(&[0, 0, 0, 0]));
        assert!(!toric_cycle_closes(&[1, 1, 1, 0]));
        assert!(!toric_cycle_closes(&[0, -1, 0, -1]));
        assert!(same_cycle(&[1, 2, 3], &[3, 2, 1]));
        assert!(same_cycle(&[1, 2, 3], &[2, 3, 1]));
        assert!(!same_cycle(&[1, 1, 2, 3], &[1, 2, 1, 3]));
    }
}
