//! Terms of the ℓ-algebra language over named generators.
//!
//! The node set is ring operations plus lattice join/meet. Subtraction,
//! absolute value, scaling and truncation are derived forms and are expanded
//! when built, so they never appear as nodes.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TermError {
    #[error("scalar constant is not finite")]
    NonFiniteScalar,
    #[error("no value assigned to generator `{0}`")]
    MissingAssignment(String),
    #[error("generator `{0}` assigned twice")]
    DuplicateAssignment(String),
    #[error("value for generator `{0}` is not finite")]
    NonFiniteValue(String),
}

#[derive(Debug, Clone)]
pub enum Term {
    Const(f64),
    Gen(String),
    Add(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        use Term::*;
        match (self, other) {
            (Const(a), Const(b)) => a == b,
            (Gen(a), Gen(b)) => a == b,
            (Neg(a), Neg(b)) => a == b,
            (Add(a, b), Add(c, d))
            | (Mul(a, b), Mul(c, d))
            | (Join(a, b), Join(c, d))
            | (Meet(a, b), Meet(c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

// Constants are finite, so `==` on them is an equivalence relation.
impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            // +0 and -0 compare equal and must hash alike
            Term::Const(c) => (if *c == 0.0 { 0.0f64 } else { *c }).to_bits().hash(state),
            Term::Gen(name) => name.hash(state),
            Term::Neg(t) => t.hash(state),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                a.hash(state);
                b.hash(state);
            }
        }
    }
}

impl Term {
    pub fn constant(c: f64) -> Result<Term, TermError> {
        if c.is_finite() {
            Ok(Term::Const(c))
        } else {
            Err(TermError::NonFiniteScalar)
        }
    }

    pub fn gen(name: impl Into<String>) -> Term {
        Term::Gen(name.into())
    }

    pub fn add(a: Term, b: Term) -> Term {
        Term::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Term, b: Term) -> Term {
        Term::add(a, Term::neg(b))
    }

    pub fn neg(a: Term) -> Term {
        Term::Neg(Box::new(a))
    }

    pub fn mul(a: Term, b: Term) -> Term {
        Term::Mul(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    /// `|a| = a ∨ (−a)`.
    pub fn abs(a: Term) -> Term {
        Term::join(a.clone(), Term::neg(a))
    }

    pub fn scale(c: f64, a: Term) -> Result<Term, TermError> {
        Ok(Term::mul(Term::constant(c)?, a))
    }

    /// `(a ∨ −c) ∧ c`, clamping `a` to `[−c, c]`.
    pub fn truncate(a: Term, c: f64) -> Result<Term, TermError> {
        let hi = Term::constant(c)?;
        let lo = Term::constant(-c)?;
        Ok(Term::meet(Term::join(a, lo), hi))
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Term::Const(_) | Term::Gen(_) => 1,
            Term::Neg(a) => 1 + a.size(),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_generators().is_empty()
    }

    /// Generator names in first-occurrence (left-to-right) order.
    pub fn free_generators(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.collect_generators(&mut out);
        out
    }

    fn collect_generators(&self, out: &mut Vec<String>) {
        match self {
            Term::Const(_) => {}
            Term::Gen(name) => {
                if !out.iter().any(|n| n == name) {
                    out.push(name.clone());
                }
            }
            Term::Neg(a) => a.collect_generators(out),
            Term::Add(a, b) | Term::Mul(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
                a.collect_generators(out);
                b.collect_generators(out);
            }
        }
    }

    /// Evaluates with a lookup for generator values.
    pub fn eval_with<F>(&self, lookup: &F) -> Result<f64, TermError>
    where
        F: Fn(&str) -> Option<f64>,
    {
        Ok(match self {
            Term::Const(c) => *c,
            Term::Gen(name) => lookup(name).ok_or_else(|| TermError::MissingAssignment(name.clone()))?,
            Term::Add(a, b) => a.eval_with(lookup)? + b.eval_with(lookup)?,
            Term::Neg(a) => -a.eval_with(lookup)?,
            Term::Mul(a, b) => a.eval_with(lookup)? * b.eval_with(lookup)?,
            Term::Join(a, b) => a.eval_with(lookup)?.max(b.eval_with(lookup)?),
            Term::Meet(a, b) => a.eval_with(lookup)?.min(b.eval_with(lookup)?),
        })
    }

    pub fn eval(&self, point: &Point) -> Result<f64, TermError> {
        self.eval_with(&|name| point.get(name))
    }

    /// Replaces every generator by the term `subst` returns for it.
    /// Generators for which `subst` returns `None` are kept.
    pub fn substitute<F>(&self, subst: &F) -> Term
    where
        F: Fn(&str) -> Option<Term>,
    {
        match self {
            Term::Const(c) => Term::Const(*c),
            Term::Gen(name) => subst(name).unwrap_or_else(|| Term::Gen(name.clone())),
            Term::Neg(a) => Term::neg(a.substitute(subst)),
            Term::Add(a, b) => Term::add(a.substitute(subst), b.substitute(subst)),
            Term::Mul(a, b) => Term::mul(a.substitute(subst), b.substitute(subst)),
            Term::Join(a, b) => Term::join(a.substitute(subst), b.substitute(subst)),
            Term::Meet(a, b) => Term::meet(a.substitute(subst), b.substitute(subst)),
        }
    }

    /// Local rewrites that preserve the value at every point: exact constant
    /// folding, additive and multiplicative units, `x·0`, double negation
    /// and lattice idempotence.
    pub fn simplify(&self) -> Term {
        use Term::*;
        match self {
            Const(c) => Const(*c),
            Gen(name) => Gen(name.clone()),
            Neg(a) => match a.simplify() {
                Const(c) => Const(-c),
                Neg(inner) => *inner,
                other => Term::neg(other),
            },
            Add(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), Const(y)) if exact_sum(x, y).is_some() => Const(x + y),
                (Const(z), t) | (t, Const(z)) if z == 0.0 => t,
                (x, y) => Term::add(x, y),
            },
            Mul(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), Const(y)) if exact_product(x, y).is_some() => Const(x * y),
                (Const(z), _) | (_, Const(z)) if z == 0.0 => Const(0.0),
                (Const(o), t) | (t, Const(o)) if o == 1.0 => t,
                (x, y) => Term::mul(x, y),
            },
            Join(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), Const(y)) => Const(x.max(y)),
                (x, y) if x == y => x,
                (x, y) => Term::join(x, y),
            },
            Meet(a, b) => match (a.simplify(), b.simplify()) {
                (Const(x), Const(y)) => Const(x.min(y)),
                (x, y) if x == y => x,
                (x, y) => Term::meet(x, y),
            },
        }
    }

    /// Expanded polynomial normal form, treating each `∨`/`∧` node (with
    /// normalized, canonically ordered arguments) as an opaque atom.
    ///
    /// Coefficients are combined only while every sum and product is exact
    /// in `f64`, so the result denotes the same real function. Returns
    /// `None` when that fails or the expansion exceeds `max_monomials`.
    /// Two terms whose normal forms agree are equal as functions.
    pub fn polynomial_normal_form(&self, max_monomials: usize) -> Option<Term> {
        let mut n = Normalizer {
            atoms: Vec::new(),
            index: HashMap::new(),
            max_monomials,
        };
        let p = n.poly(self)?;
        Some(n.to_term(&p))
    }
}

/// `a + b` when the floating-point sum is exact.
pub(crate) fn exact_sum(a: f64, b: f64) -> Option<f64> {
    let s = a + b;
    if !s.is_finite() {
        return None;
    }
    let bb = s - a;
    ((a - (s - bb)) + (b - bb) == 0.0).then_some(s)
}

/// `a * b` when the floating-point product is exact.
pub(crate) fn exact_product(a: f64, b: f64) -> Option<f64> {
    let p = a * b;
    if !p.is_finite() || (p != 0.0 && p.abs() < 1e-280) {
        return None;
    }
    (a.mul_add(b, -p) == 0.0).then_some(p)
}

/// Sorted `(atom, exponent)` pairs.
type Monomial = Vec<(usize, u32)>;
type Poly = BTreeMap<Monomial, f64>;

struct Normalizer {
    atoms: Vec<Term>,
    index: HashMap<Term, usize>,
    max_monomials: usize,
}

impl Normalizer {
    fn atom(&mut self, t: Term) -> Poly {
        let next = self.atoms.len();
        let id = *self.index.entry(t.clone()).or_insert(next);
        if id == next {
            self.atoms.push(t);
        }
        Poly::from([(vec![(id, 1)], 1.0)])
    }

    fn lattice_arg(&mut self, t: &Term) -> Term {
        match self.poly(t) {
            Some(p) => self.to_term(&p),
            None => t.clone(),
        }
    }

    fn poly(&mut self, t: &Term) -> Option<Poly> {
        let p = match t {
            Term::Const(c) if *c == 0.0 => Poly::new(),
            Term::Const(c) => Poly::from([(Vec::new(), *c)]),
            Term::Gen(_) => self.atom(t.clone()),
            Term::Neg(a) => self.poly(a)?.into_iter().map(|(m, c)| (m, -c)).collect(),
            Term::Add(a, b) => {
                let mut p = self.poly(a)?;
                for (m, c) in self.poly(b)? {
                    accumulate(&mut p, m, c)?;
                }
                p
            }
            Term::Mul(a, b) => {
                let (p, q) = (self.poly(a)?, self.poly(b)?);
                let mut r = Poly::new();
                for (m1, c1) in &p {
                    for (m2, c2) in &q {
                        accumulate(&mut r, mul_monomials(m1, m2), exact_product(*c1, *c2)?)?;
                    }
                }
                r
            }
            Term::Join(a, b) | Term::Meet(a, b) => {
                let (mut x, mut y) = (self.lattice_arg(a), self.lattice_arg(b));
                if x.to_string() > y.to_string() {
                    std::mem::swap(&mut x, &mut y);
                }
                let node = if matches!(t, Term::Join(..)) {
                    Term::join(x, y)
                } else {
                    Term::meet(x, y)
                };
                self.atom(node)
            }
        };
        (p.len() <= self.max_monomials).then_some(p)
    }

    fn to_term(&self, p: &Poly) -> Term {
        let mut sum: Option<Term> = None;
        for (m, &c) in p {
            let mut product: Option<Term> = None;
            for &(id, e) in m {
                for _ in 0..e {
                    let a = self.atoms[id].clone();
                    product = Some(match product {
                        None => a,
                        Some(q) => Term::mul(q, a),
                    });
                }
            }
            let monomial = match product {
                None => Term::Const(c),
                Some(q) if c == 1.0 => q,
                Some(q) if c == -1.0 => Term::neg(q),
                Some(q) => Term::mul(Term::Const(c), q),
            };
            sum = Some(match sum {
                None => monomial,
                Some(s) => Term::add(s, monomial),
            });
        }
        sum.unwrap_or(Term::Const(0.0))
    }
}

fn accumulate(p: &mut Poly, m: Monomial, c: f64) -> Option<()> {
    let total = match p.get(&m) {
        Some(&old) => exact_sum(old, c)?,
        None => c,
    };
    if total == 0.0 {
        p.remove(&m);
    } else {
        p.insert(m, total);
    }
    Some(())
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some(&(x, e)), Some(&(y, f))) if x == y => {
                out.push((x, e + f));
                i += 1;
                j += 1;
            }
            (Some(&(x, e)), Some(&(y, _))) if x < y => {
                out.push((x, e));
                i += 1;
            }
            (Some(&(x, e)), None) => {
                out.push((x, e));
                i += 1;
            }
            (_, Some(&(y, f))) => {
                out.push((y, f));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

// Printing is fully parenthesized. Negative constants print as `(-c)`, which
// the parser reads back as a literal; negation of a literal prints as `(-(c))`.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Const(c) => {
                if *c < 0.0 {
                    write!(f, "({c:?})")
                } else {
                    // also maps -0 to 0
                    write!(f, "{:?}", c.abs())
                }
            }
            Term::Gen(name) => write!(f, "{name}"),
            Term::Neg(a) => match **a {
                Term::Const(_) => write!(f, "(-({a}))"),
                _ => write!(f, "(-{a})"),
            },
            Term::Add(a, b) => write!(f, "({a} + {b})"),
            Term::Mul(a, b) => write!(f, "({a} * {b})"),
            Term::Join(a, b) => write!(f, "max({a}, {b})"),
            Term::Meet(a, b) => write!(f, "min({a}, {b})"),
        }
    }
}

impl ops::Add for Term {
    type Output = Term;
    fn add(self, rhs: Term) -> Term {
        Term::add(self, rhs)
    }
}

impl ops::Sub for Term {
    type Output = Term;
    fn sub(self, rhs: Term) -> Term {
        Term::sub(self, rhs)
    }
}

impl ops::Mul for Term {
    type Output = Term;
    fn mul(self, rhs: Term) -> Term {
        Term::mul(self, rhs)
    }
}

impl ops::Neg for Term {
    type Output = Term;
    fn neg(self) -> Term {
        Term::neg(self)
    }
}

/// An assignment of finite reals to a declared list of generators.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Point {
    names: Vec<String>,
    values: Vec<f64>,
}

impl Point {
    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, f64)>) -> Result<Point, TermError> {
        let mut point = Point::default();
        for (name, value) in pairs {
            let name = name.into();
            if point.names.contains(&name) {
                return Err(TermError::DuplicateAssignment(name));
            }
            if !value.is_finite() {
                return Err(TermError::NonFiniteValue(name));
            }
            point.names.push(name);
            point.values.push(value);
        }
        Ok(point)
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.names.iter().position(|n| n == name).map(|i| self.values[i])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.names.iter().map(String::as_str).zip(self.values.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}
