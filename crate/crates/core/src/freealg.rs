//! The free algebra `F(X, w)` on a finite weighted set.
//!
//! An element is a term over the generators of its context. Its meaning is
//! the function the term defines on the box `Π_{x ∈ X'} [-w(x), w(x)]`, where
//! `X'` is the positive-weight part of `X` and generators act as coordinate
//! projections. Zero-weight generators denote `0` and are rewritten away when
//! an element is admitted. The norm is the sup-norm over that box, and
//! equality of elements is equality of these functions.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::basic::{BasicElement, BasicError, FiniteBasicAlgebra};
use crate::interval::{
    self, BnBConfig, BoxRegion, Enclosure, Interval, IntervalError, Status, StopRule,
};
use crate::term::{Point, Term, TermError};
use crate::wset::{WSetError, WSetMorphism, WeightedSet};

/// Monomial cap for the exact polynomial identity check in
/// [`FreeElement::equals`].
const NORMAL_FORM_LIMIT: usize = 512;

/// Largest positive support for which [`FreeElement::sample_grid`] runs.
pub const MAX_GRID_DIMS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FreeAlgError {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("elements live in different weighted-set contexts")]
    ContextMismatch,
    #[error("node budget exhausted; best enclosure [{}, {}]", .0.lo, .0.hi)]
    BudgetExhausted(Enclosure),
    #[error("weight violation at `{0}`")]
    WeightViolation(String),
    #[error("could not certify the norm bound for the image of `{0}`")]
    NormCertificationFailed(String),
    #[error("positive support has {dims} elements; at most {max} supported")]
    DimensionTooLarge { dims: usize, max: usize },
    #[error("grid resolution must be at least 2")]
    InvalidResolution,
    #[error("expected {expected} values for `{name}`, got {got}")]
    WrongArity { name: String, expected: usize, got: usize },
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    WSet(#[from] WSetError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Basic(#[from] BasicError),
}

fn same_context(a: &Arc<WeightedSet>, b: &Arc<WeightedSet>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element of `F(X, w)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeElement {
    context: Arc<WeightedSet>,
    term: Term,
}

impl FreeElement {
    /// Admits `term` into the context: every generator must belong to it,
    /// and zero-weight generators are replaced by `0`.
    pub fn new(context: Arc<WeightedSet>, term: &Term) -> Result<Self, FreeAlgError> {
        for g in term.free_generators() {
            if !context.contains(&g) {
                return Err(FreeAlgError::UnknownElement(g));
            }
        }
        let term = term.substitute(&|name| {
            (context.weight(name) == Some(0.0)).then_some(Term::Const(0.0))
        });
        Ok(FreeElement { context, term })
    }

    /// The image `f(x)` of a generator.
    pub fn generator(context: Arc<WeightedSet>, x: &str) -> Result<Self, FreeAlgError> {
        let w = context
            .weight(x)
            .ok_or_else(|| FreeAlgError::UnknownElement(x.to_string()))?;
        let term = if w > 0.0 { Term::gen(x) } else { Term::Const(0.0) };
        Ok(FreeElement { context, term })
    }

    pub fn constant(context: Arc<WeightedSet>, c: f64) -> Result<Self, FreeAlgError> {
        Ok(FreeElement {
            context,
            term: Term::constant(c)?,
        })
    }

    pub fn context(&self) -> &Arc<WeightedSet> {
        &self.context
    }

    pub fn term(&self) -> &Term {
        &self.term
    }

    fn lift(&self, other: &Self, op: fn(Term, Term) -> Term) -> Result<Self, FreeAlgError> {
        if !same_context(&self.context, &other.context) {
            return Err(FreeAlgError::ContextMismatch);
        }
        Ok(FreeElement {
            context: self.context.clone(),
            term: op(self.term.clone(), other.term.clone()),
        })
    }

    fn map(&self, op: impl FnOnce(Term) -> Term) -> Self {
        FreeElement {
            context: self.context.clone(),
            term: op(self.term.clone()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.lift(other, Term::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.lift(other, Term::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.lift(other, Term::mul)
    }

    pub fn join(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.lift(other, Term::join)
    }

    pub fn meet(&self, other: &Self) -> Result<Self, FreeAlgError> {
        self.lift(other, Term::meet)
    }

    pub fn neg(&self) -> Self {
        self.map(Term::neg)
    }

    pub fn abs(&self) -> Self {
        self.map(Term::abs)
    }

    pub fn scale(&self, c: f64) -> Result<Self, FreeAlgError> {
        let term = Term::scale(c, self.term.clone())?;
        Ok(FreeElement {
            context: self.context.clone(),
            term,
        })
    }

    pub fn truncate(&self, c: f64) -> Result<Self, FreeAlgError> {
        let term = Term::truncate(self.term.clone(), c)?;
        Ok(FreeElement {
            context: self.context.clone(),
            term,
        })
    }

    pub fn simplify(&self) -> Self {
        self.map(|t| t.simplify())
    }

    /// Value at a point of the Yosida box (coordinates of the positive support).
    pub fn eval(&self, p: &Point) -> Result<f64, FreeAlgError> {
        Ok(self.term.eval(p)?)
    }

    /// Certified enclosure of the sup-norm. A budget-exhausted search is an
    /// error carrying the best enclosure found.
    pub fn norm(&self, cfg: &BnBConfig) -> Result<Enclosure, FreeAlgError> {
        let e = self.norm_enclosure(cfg)?;
        match e.status {
            Status::Converged => Ok(e),
            Status::BudgetExhausted => Err(FreeAlgError::BudgetExhausted(e)),
        }
    }

    /// Like [`norm`](Self::norm), but returns the enclosure whatever its status.
    pub fn norm_enclosure(&self, cfg: &BnBConfig) -> Result<Enclosure, FreeAlgError> {
        let region = YosidaBox::new(&self.context).region();
        Ok(interval::bnb_sup_abs(&self.term, &region, cfg)?)
    }

    /// Semi-decides `self == other`. A difference whose exact polynomial
    /// normal form is zero is `Equal` outright; otherwise `‖self − other‖` is
    /// bounded against `cfg.tol`.
    pub fn equals(&self, other: &Self, cfg: &BnBConfig) -> Result<Equality, FreeAlgError> {
        let diff = self.sub(other)?;
        if diff.term.polynomial_normal_form(NORMAL_FORM_LIMIT) == Some(Term::Const(0.0)) {
            return Ok(Equality::Equal(Enclosure {
                lo: 0.0,
                hi: 0.0,
                status: Status::Converged,
                nodes_expanded: 0,
            }));
        }
        let region = YosidaBox::new(&self.context).region();
        let e = interval::bnb_sup_abs_with(&diff.term, &region, cfg, StopRule::Threshold(cfg.tol))?;
        Ok(if e.hi <= cfg.tol {
            Equality::Equal(e)
        } else if e.lo > cfg.tol {
            Equality::NotEqual { lo: e.lo }
        } else {
            Equality::Unknown(e)
        })
    }

    /// Values on the regular grid of the unit cube `[0,1]^{X'}`, mapped into
    /// the Yosida box. Rows are lexicographic in declared order, the last
    /// coordinate varying fastest.
    pub fn sample_grid(&self, resolution: usize) -> Result<Vec<(Vec<f64>, f64)>, FreeAlgError> {
        let ybox = YosidaBox::new(&self.context);
        let d = ybox.dims();
        if d > MAX_GRID_DIMS {
            return Err(FreeAlgError::DimensionTooLarge { dims: d, max: MAX_GRID_DIMS });
        }
        if resolution < 2 {
            return Err(FreeAlgError::InvalidResolution);
        }
        let step = |i: usize| i as f64 / (resolution - 1) as f64;
        let total = resolution.pow(d as u32);
        let mut rows = Vec::with_capacity(total);
        let mut index = vec![0usize; d];
        for _ in 0..total {
            let u: Vec<f64> = index.iter().map(|&i| step(i)).collect();
            let value = self.term.eval(&ybox.from_unit_cube(&u))?;
            rows.push((u, value));
            for k in (0..d).rev() {
                index[k] += 1;
                if index[k] < resolution {
                    break;
                }
                index[k] = 0;
            }
        }
        Ok(rows)
    }
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.term.fmt(f)
    }
}

/// Outcome of [`FreeElement::equals`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Equality {
    /// `‖a − b‖ <= tol` certified.
    Equal(Enclosure),
    /// `‖a − b‖ >= lo > tol` certified.
    NotEqual { lo: f64 },
    /// Search ended with `lo <= tol < hi`.
    Unknown(Enclosure),
}

/// The box `Π_{x ∈ X'} [-w(x), w(x)]` and its affine identification with
/// the unit cube, `τ_x(a) = 2 w(x) a − w(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct YosidaBox {
    names: Vec<String>,
    radii: Vec<f64>,
}

impl YosidaBox {
    pub fn new(context: &WeightedSet) -> Self {
        let support = context.positive_support();
        YosidaBox {
            names: support.names().to_vec(),
            radii: support.weights().to_vec(),
        }
    }

    pub fn dims(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn region(&self) -> BoxRegion {
        BoxRegion::new(
            self.names
                .iter()
                .zip(&self.radii)
                .map(|(n, &w)| (n.clone(), Interval { lo: -w, hi: w })),
        )
        .expect("support names are distinct and radii positive")
    }

    /// `τ_x(a) = 2 w(x) a − w(x)`.
    pub fn tau(w: f64, a: f64) -> f64 {
        2.0 * w * a - w
    }

    pub fn from_unit_cube(&self, u: &[f64]) -> Point {
        assert_eq!(u.len(), self.dims(), "unit-cube point has wrong dimension");
        Point::from_pairs(
            self.names
                .iter()
                .zip(&self.radii)
                .zip(u)
                .map(|((n, &w), &a)| (n.clone(), YosidaBox::tau(w, a))),
        )
        .expect("support names are distinct")
    }

    /// Inverse of [`from_unit_cube`](Self::from_unit_cube); `None` if a
    /// coordinate is unassigned.
    pub fn to_unit_cube(&self, p: &Point) -> Option<Vec<f64>> {
        self.names
            .iter()
            .zip(&self.radii)
            .map(|(n, &w)| p.get(n).map(|v| (v + w) / (2.0 * w)))
            .collect()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.names
            .iter()
            .zip(&self.radii)
            .all(|(n, &w)| p.get(n).is_some_and(|v| v.abs() <= w))
    }
}

/// Codomain of a homomorphism out of `F(X, w)` together with the images of
/// the generators.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    /// A point of the Yosida box.
    Reals(Point),
    /// One point per atom of `ℝ^k`.
    FiniteBasic {
        algebra: FiniteBasicAlgebra,
        points: Vec<Point>,
    },
    /// A substitution of target elements for source generators.
    Free {
        context: Arc<WeightedSet>,
        substitution: Vec<(String, FreeElement)>,
    },
}

/// Result of applying a homomorphism.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetValue {
    Real(f64),
    Basic(BasicElement),
    Free(FreeElement),
}

impl fmt::Display for TargetValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetValue::Real(v) => write!(f, "{v:?}"),
            TargetValue::Basic(b) => write!(f, "{b}"),
            TargetValue::Free(e) => write!(f, "{e}"),
        }
    }
}

/// The unique extension `ᾱ : F(X, w) -> A` of a weight-respecting map
/// `h : X -> A`. Weight conditions are checked at construction, so
/// [`apply`](Homomorphism::apply) only fails on context mismatch.
#[derive(Debug, Clone, PartialEq)]
pub struct Homomorphism {
    source: Arc<WeightedSet>,
    target: Target,
}

impl Homomorphism {
    /// `h : X -> ℝ` with `|h(x)| <= w(x)`; every generator must be assigned.
    pub fn into_reals<S: AsRef<str>>(source: Arc<WeightedSet>, values: &[(S, f64)]) -> Result<Self, FreeAlgError> {
        let point = source.validate_real_map(values)?;
        Ok(Homomorphism {
            source,
            target: Target::Reals(point),
        })
    }

    /// `h : X -> ℝ^k` given coordinate vectors; `‖h(x)‖ = max_i |h(x)_i| <= w(x)`.
    pub fn into_basic<S: AsRef<str>>(
        source: Arc<WeightedSet>,
        algebra: FiniteBasicAlgebra,
        images: &[(S, Vec<f64>)],
    ) -> Result<Self, FreeAlgError> {
        let k = algebra.dim();
        for (name, v) in images {
            if v.len() != k {
                return Err(FreeAlgError::WrongArity {
                    name: name.as_ref().to_string(),
                    expected: k,
                    got: v.len(),
                });
            }
        }
        let mut points = Vec::with_capacity(k);
        for i in 0..k {
            let coords: Vec<(&str, f64)> = images.iter().map(|(n, v)| (n.as_ref(), v[i])).collect();
            points.push(source.validate_real_map(&coords)?);
        }
        if k == 0 {
            // still check names and totality
            let zeros: Vec<(&str, f64)> = images.iter().map(|(n, _)| (n.as_ref(), 0.0)).collect();
            source.validate_real_map(&zeros)?;
        }
        Ok(Homomorphism {
            source,
            target: Target::FiniteBasic { algebra, points },
        })
    }

    /// `h : X -> F(Y, v)` given by terms; each image must have certified
    /// norm at most `w(x)`.
    pub fn into_free<S: AsRef<str>>(
        source: Arc<WeightedSet>,
        target: Arc<WeightedSet>,
        images: &[(S, Term)],
        cfg: &BnBConfig,
    ) -> Result<Self, FreeAlgError> {
        let mut resolved: Vec<Option<FreeElement>> = vec![None; source.len()];
        for (name, term) in images {
            let name = name.as_ref();
            let i = source
                .index_of(name)
                .ok_or_else(|| FreeAlgError::UnknownElement(name.to_string()))?;
            if resolved[i].is_some() {
                return Err(WSetError::DuplicateName(name.to_string()).into());
            }
            resolved[i] = Some(FreeElement::new(target.clone(), term)?);
        }
        let mut substitution = Vec::with_capacity(source.len());
        for ((x, w), image) in source.iter().zip(resolved) {
            let image = image.ok_or_else(|| WSetError::MissingImage(x.to_string()))?;
            certify_norm_at_most(&image, w, x, cfg)?;
            substitution.push((x.to_string(), image));
        }
        Ok(Homomorphism {
            source,
            target: Target::Free {
                context: target,
                substitution,
            },
        })
    }

    /// The free functor on a weighted-set morphism: `x ↦ f(φ(x))`. The weight
    /// certificate is `‖f(φ(x))‖ = w₂(φ(x)) <= w₁(x)`.
    pub fn free_functor(phi: &WSetMorphism) -> Self {
        let source = Arc::new(phi.source().clone());
        let target = Arc::new(phi.target().clone());
        let substitution = phi
            .pairs()
            .map(|(x, y)| {
                let image = FreeElement::generator(target.clone(), y).expect("morphism images lie in the target");
                (x.to_string(), image)
            })
            .collect();
        Homomorphism {
            source,
            target: Target::Free {
                context: target,
                substitution,
            },
        }
    }

    pub fn source(&self) -> &Arc<WeightedSet> {
        &self.source
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    /// `h(x)` for a source generator.
    pub fn image_of(&self, x: &str) -> Option<TargetValue> {
        if !self.source.contains(x) {
            return None;
        }
        Some(match &self.target {
            Target::Reals(p) => TargetValue::Real(p.get(x)?),
            Target::FiniteBasic { algebra, points } => TargetValue::Basic(
                BasicElement::new(algebra.clone(), points.iter().map(|p| p.get(x)).collect::<Option<Vec<_>>>()?)
                    .ok()?,
            ),
            Target::Free { substitution, .. } => {
                TargetValue::Free(substitution.iter().find(|(n, _)| n == x)?.1.clone())
            }
        })
    }

    /// `ᾱ(a)`.
    pub fn apply(&self, a: &FreeElement) -> Result<TargetValue, FreeAlgError> {
        if !same_context(&self.source, &a.context) {
            return Err(FreeAlgError::ContextMismatch);
        }
        Ok(match &self.target {
            Target::Reals(p) => TargetValue::Real(a.term.eval(p)?),
            Target::FiniteBasic { algebra, points } => {
                let values = points.iter().map(|p| a.term.eval(p)).collect::<Result<Vec<_>, _>>()?;
                TargetValue::Basic(BasicElement::new(algebra.clone(), values)?)
            }
            Target::Free { context, substitution } => {
                let term = a.term.substitute(&|name| {
                    substitution
                        .iter()
                        .find(|(n, _)| n == name)
                        .map(|(_, e)| e.term.clone())
                });
                TargetValue::Free(FreeElement {
                    context: context.clone(),
                    term,
                })
            }
        })
    }
}

fn certify_norm_at_most(image: &FreeElement, w: f64, x: &str, cfg: &BnBConfig) -> Result<(), FreeAlgError> {
    // norms of generators and constants are exact
    let exact = match image.term() {
        Term::Gen(g) => image.context.weight(g),
        Term::Const(c) => Some(c.abs()),
        _ => None,
    };
    if let Some(n) = exact {
        return if n <= w {
            Ok(())
        } else {
            Err(FreeAlgError::WeightViolation(x.to_string()))
        };
    }
    let region = YosidaBox::new(&image.context).region();
    let e = interval::bnb_sup_abs_with(image.term(), &region, cfg, StopRule::Threshold(w))?;
    if e.hi <= w {
        Ok(())
    } else if e.lo > w {
        Err(FreeAlgError::WeightViolation(x.to_string()))
    } else {
        Err(FreeAlgError::NormCertificationFailed(x.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(pairs: &[(&str, f64)]) -> Arc<WeightedSet> {
        Arc::new(WeightedSet::from_pairs(pairs).unwrap())
    }

    fn cfg() -> BnBConfig {
        BnBConfig::default()
    }

    #[test]
    fn generators() {
        let c = ctx(&[("x", 2.0), ("z", 0.0)]);
        assert_eq!(FreeElement::generator(c.clone(), "x").unwrap().term(), &Term::gen("x"));
        assert_eq!(FreeElement::generator(c.clone(), "z").unwrap().term(), &Term::Const(0.0));
        assert_eq!(
            FreeElement::generator(c.clone(), "y"),
            Err(FreeAlgError::UnknownElement("y".into()))
        );
        let admitted = FreeElement::new(c, &(Term::gen("x") * Term::gen("z"))).unwrap();
        assert_eq!(admitted.term(), &(Term::gen("x") * Term::Const(0.0)));
    }

    #[test]
    fn lifted_operations() {
        let c = ctx(&[("x", 1.0)]);
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        assert_eq!(x.join(&x.neg()).unwrap().term(), &Term::abs(Term::gen("x")));
        let one = FreeElement::constant(c.clone(), 1.0).unwrap();
        let two = FreeElement::constant(c.clone(), 2.0).unwrap();
        assert_eq!(one.add(&two).unwrap().simplify().term(), &Term::Const(3.0));
        let other = FreeElement::generator(ctx(&[("x", 2.0)]), "x").unwrap();
        assert_eq!(x.add(&other), Err(FreeAlgError::ContextMismatch));
        assert!(x.scale(f64::NAN).is_err());
    }

    #[test]
    fn norms() {
        let c = ctx(&[("x", 2.0)]);
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        let e = x.norm(&cfg()).unwrap();
        assert!(e.contains(2.0) && e.gap() <= 1e-9);
        let k = FreeElement::constant(c.clone(), -3.25).unwrap();
        let e = k.norm(&cfg()).unwrap();
        assert_eq!((e.lo, e.hi), (3.25, 3.25));

        // oracle: max |t^2 - t| on a 200001-point grid over [-1, 1] is 2, at t = -1
        let oracle = (0..=200_000)
            .map(|i| -1.0 + 2.0 * i as f64 / 200_000.0)
            .map(|t: f64| (t * t - t).abs())
            .fold(0.0, f64::max);
        assert_eq!(oracle, 2.0);
        let c1 = ctx(&[("x", 1.0)]);
        let x1 = FreeElement::generator(c1, "x").unwrap();
        let t = x1.mul(&x1).unwrap().sub(&x1).unwrap();
        assert!(t.norm(&cfg()).unwrap().contains(oracle));
    }

    #[test]
    fn empty_support_norm_is_exact() {
        let c = ctx(&[("z", 0.0)]);
        let z = FreeElement::generator(c.clone(), "z").unwrap();
        let t = z.add(&FreeElement::constant(c, -7.0).unwrap()).unwrap();
        let e = t.norm(&cfg()).unwrap();
        assert!(e.contains(7.0) && e.gap() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_reports_best_enclosure() {
        let c = ctx(&[("x", 1.0), ("y", 1.0)]);
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        let y = FreeElement::generator(c, "y").unwrap();
        let t = x.mul(&y).unwrap().sub(&x).unwrap();
        let tight = BnBConfig { max_nodes: 1, ..cfg() };
        match t.norm(&tight) {
            Err(FreeAlgError::BudgetExhausted(e)) => assert!(e.contains(2.0)),
            other => panic!("expected budget exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn equality() {
        let c = ctx(&[("x", 1.5), ("y", 0.75)]);
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        let y = FreeElement::generator(c.clone(), "y").unwrap();
        assert!(matches!(x.equals(&x.truncate(1.5).unwrap(), &cfg()), Ok(Equality::Equal(_))));
        let xy = x.join(&y).unwrap();
        let yx = y.join(&x).unwrap();
        assert!(matches!(xy.equals(&yx, &cfg()), Ok(Equality::Equal(_))));
        let shifted = x.add(&FreeElement::constant(c.clone(), 0.001).unwrap()).unwrap();
        match x.equals(&shifted, &cfg()).unwrap() {
            Equality::NotEqual { lo } => assert!(lo >= 0.0009),
            other => panic!("{other:?}"),
        }
        // truncating below the weight changes the element
        let clipped = x.truncate(1.0).unwrap();
        assert!(matches!(x.equals(&clipped, &cfg()), Ok(Equality::NotEqual { .. })));
    }

    #[test]
    fn yosida_box() {
        assert_eq!(YosidaBox::tau(3.0, 0.0), -3.0);
        assert_eq!(YosidaBox::tau(3.0, 1.0), 3.0);
        assert_eq!(YosidaBox::tau(3.0, 0.5), 0.0);
        let b = YosidaBox::new(&WeightedSet::from_pairs(&[("x", 1.0), ("y", 0.0)]).unwrap());
        assert_eq!(b.names(), &["x".to_string()]);
        let p = b.from_unit_cube(&[0.25]);
        assert_eq!(p.get("x"), Some(-0.5));
        assert_eq!(b.to_unit_cube(&p), Some(vec![0.25]));
    }

    #[test]
    fn grids() {
        let c = ctx(&[("x", 1.0)]);
        let five = FreeElement::constant(c.clone(), 5.0).unwrap();
        assert_eq!(five.sample_grid(2).unwrap(), vec![(vec![0.0], 5.0), (vec![1.0], 5.0)]);
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        let values: Vec<f64> = x.sample_grid(3).unwrap().into_iter().map(|r| r.1).collect();
        assert_eq!(values, vec![-1.0, 0.0, 1.0]);
        assert_eq!(x.sample_grid(1), Err(FreeAlgError::InvalidResolution));
        let big = ctx(&[("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0)]);
        assert!(matches!(
            FreeElement::constant(big, 0.0).unwrap().sample_grid(2),
            Err(FreeAlgError::DimensionTooLarge { dims: 4, .. })
        ));
        let c2 = ctx(&[("x", 1.0), ("y", 2.0)]);
        let y = FreeElement::generator(c2, "y").unwrap();
        let rows = y.sample_grid(2).unwrap();
        let coords: Vec<Vec<f64>> = rows.iter().map(|r| r.0.clone()).collect();
        assert_eq!(coords, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0], vec![1.0, 1.0]]);
        assert_eq!(rows[1].1, 2.0);
    }

    #[test]
    fn homomorphism_into_reals() {
        let c = ctx(&[("x", 2.0)]);
        let h = Homomorphism::into_reals(c.clone(), &[("x", 1.0)]).unwrap();
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        let t = x.mul(&x).unwrap().add(&FreeElement::constant(c.clone(), 1.0).unwrap()).unwrap();
        assert_eq!(h.apply(&t).unwrap(), TargetValue::Real(2.0));
        assert_eq!(
            Homomorphism::into_reals(c, &[("x", 3.0)]),
            Err(FreeAlgError::WSet(WSetError::WeightViolation("x".into())))
        );
    }

    #[test]
    fn homomorphism_into_basic() {
        let c = ctx(&[("x", 2.0), ("y", 1.0)]);
        let r2 = FiniteBasicAlgebra::with_dim(2);
        let h = Homomorphism::into_basic(c.clone(), r2.clone(), &[("x", vec![1.0, -2.0]), ("y", vec![0.5, 1.0])]).unwrap();
        let x = FreeElement::generator(c.clone(), "x").unwrap();
        let y = FreeElement::generator(c.clone(), "y").unwrap();
        let t = x.mul(&y).unwrap();
        match h.apply(&t).unwrap() {
            TargetValue::Basic(b) => assert_eq!(b.values(), &[0.5, -2.0]),
            other => panic!("{other:?}"),
        }
        assert!(Homomorphism::into_basic(c.clone(), r2.clone(), &[("x", vec![1.0, 2.5]), ("y", vec![0.0, 0.0])]).is_err());
        assert!(matches!(
            Homomorphism::into_basic(c, r2, &[("x", vec![1.0]), ("y", vec![0.0, 0.0])]),
            Err(FreeAlgError::WrongArity { .. })
        ));
    }

    #[test]
    fn homomorphism_into_free() {
        let src = ctx(&[("x", 2.0)]);
        let tgt = ctx(&[("y", 1.0)]);
        let h = Homomorphism::into_free(src.clone(), tgt.clone(), &[("x", Term::gen("y"))], &cfg()).unwrap();
        let x = FreeElement::generator(src.clone(), "x").unwrap();
        match h.apply(&x.abs()).unwrap() {
            TargetValue::Free(e) => assert_eq!(e.term(), &Term::abs(Term::gen("y"))),
            other => panic!("{other:?}"),
        }
        // ‖2y + 0.5‖ = 2.5 > 2
        let too_big = Term::add(Term::mul(Term::Const(2.0), Term::gen("y")), Term::Const(0.5));
        assert_eq!(
            Homomorphism::into_free(src.clone(), tgt.clone(), &[("x", too_big)], &cfg()),
            Err(FreeAlgError::WeightViolation("x".into()))
        );
        // ‖y*y + 0.5‖ = 1.5 <= 2
        let ok = Term::add(Term::mul(Term::gen("y"), Term::gen("y")), Term::Const(0.5));
        assert!(Homomorphism::into_free(src, tgt, &[("x", ok)], &cfg()).is_ok());
    }

    #[test]
    fn free_functor() {
        let a = WeightedSet::from_pairs(&[("x", 3.0)]).unwrap();
        let b = WeightedSet::from_pairs(&[("y", 2.0)]).unwrap();
        let phi = WSetMorphism::new(&a, &b, &[("x", "y")]).unwrap();
        let h = Homomorphism::free_functor(&phi);
        match h.image_of("x").unwrap() {
            TargetValue::Free(e) => assert_eq!(e.term(), &Term::gen("y")),
            other => panic!("{other:?}"),
        }
        let id = Homomorphism::free_functor(&WSetMorphism::identity(&a));
        let x = FreeElement::generator(Arc::new(a), "x").unwrap();
        assert_eq!(id.apply(&x).unwrap(), TargetValue::Free(x.clone()));
    }
}
