//! Finite basic algebras `ℝ^k` and their duality with finite sets.
//!
//! `B` sends a finite set `S` to the algebra of real functions on `S` and a
//! map `φ` to precomposition; `X` sends an algebra to its set of atoms
//! (minimal nonzero idempotents) and a normal homomorphism `α` to the map
//! `x ↦ ⋀ { a ∈ Id(A) | x ≤ α(a) }`. `η` and `ϑ` are the unit isomorphisms.

use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Guard for enumerating the `2^k` idempotents of `ℝ^k`.
pub const MAX_ENUMERATION_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BasicError {
    #[error("duplicate atom name `{0}`")]
    DuplicateName(String),
    #[error("operands belong to different algebras")]
    AlgebraMismatch,
    #[error("expected {expected} coordinates, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coordinate is not finite")]
    NonFinite,
    #[error("not an idempotent: coordinates must be 0 or 1")]
    NotIdempotent,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("algebra has dimension {0}; idempotent enumeration is limited to {MAX_ENUMERATION_DIM}")]
    DimensionTooLarge(usize),
}

/// `ℝ^k` with named atoms, equivalently `B(S)` for the set `S` of atom names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteBasicAlgebra {
    atom_names: Vec<String>,
}

impl FiniteBasicAlgebra {
    pub fn new<S: AsRef<str>>(atom_names: &[S]) -> Result<Self, BasicError> {
        let mut names: Vec<String> = Vec::with_capacity(atom_names.len());
        for n in atom_names {
            let n = n.as_ref();
            if names.iter().any(|m| m == n) {
                return Err(BasicError::DuplicateName(n.to_string()));
            }
            names.push(n.to_string());
        }
        Ok(FiniteBasicAlgebra { atom_names: names })
    }

    /// `ℝ^k` with atoms named `e1, ..., ek`.
    pub fn with_dim(k: usize) -> Self {
        FiniteBasicAlgebra {
            atom_names: (1..=k).map(|i| format!("e{i}")).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.atom_names.len()
    }

    pub fn atom_names(&self) -> &[String] {
        &self.atom_names
    }

    pub fn element(&self, values: Vec<f64>) -> Result<BasicElement, BasicError> {
        BasicElement::new(self.clone(), values)
    }

    pub fn constant(&self, c: f64) -> BasicElement {
        BasicElement {
            algebra: self.clone(),
            values: vec![c; self.dim()],
        }
    }

    pub fn one(&self) -> BasicElement {
        self.constant(1.0)
    }

    pub fn zero(&self) -> BasicElement {
        self.constant(0.0)
    }

    /// All `2^k` idempotents, in binary counting order with the first atom
    /// as the most significant coordinate.
    pub fn idempotents(&self) -> Result<Vec<Idempotent>, BasicError> {
        let k = self.dim();
        if k > MAX_ENUMERATION_DIM {
            return Err(BasicError::DimensionTooLarge(k));
        }
        Ok((0u32..(1u32 << k))
            .map(|bits| {
                let values = (0..k)
                    .map(|i| if bits >> (k - 1 - i) & 1 == 1 { 1.0 } else { 0.0 })
                    .collect();
                Idempotent(BasicElement {
                    algebra: self.clone(),
                    values,
                })
            })
            .collect())
    }
}

/// The atoms `X_A` of `Id(A)`: the characteristic vectors of single coordinates.
pub fn atoms(algebra: &FiniteBasicAlgebra) -> Vec<Idempotent> {
    (0..algebra.dim())
        .map(|i| {
            let mut values = vec![0.0; algebra.dim()];
            values[i] = 1.0;
            Idempotent(BasicElement {
                algebra: algebra.clone(),
                values,
            })
        })
        .collect()
}

/// An element of `ℝ^k`; all operations are coordinatewise.
#[derive(Debug, Clone, PartialEq)]
pub struct BasicElement {
    algebra: FiniteBasicAlgebra,
    values: Vec<f64>,
}

impl BasicElement {
    pub fn new(algebra: FiniteBasicAlgebra, values: Vec<f64>) -> Result<Self, BasicError> {
        if values.len() != algebra.dim() {
            return Err(BasicError::LengthMismatch {
                expected: algebra.dim(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(BasicError::NonFinite);
        }
        Ok(BasicElement { algebra, values })
    }

    pub fn algebra(&self) -> &FiniteBasicAlgebra {
        &self.algebra
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn zip(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self, BasicError> {
        if self.algebra != other.algebra {
            return Err(BasicError::AlgebraMismatch);
        }
        Ok(BasicElement {
            algebra: self.algebra.clone(),
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        BasicElement {
            algebra: self.algebra.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, BasicError> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, BasicError> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, BasicError> {
        self.zip(other, |a, b| a * b)
    }

    pub fn join(&self, other: &Self) -> Result<Self, BasicError> {
        self.zip(other, f64::max)
    }

    pub fn meet(&self, other: &Self) -> Result<Self, BasicError> {
        self.zip(other, f64::min)
    }

    pub fn neg(&self) -> Self {
        self.map(|v| -v)
    }

    pub fn abs(&self) -> Self {
        self.map(f64::abs)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    /// Coordinatewise order.
    pub fn le(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.values.iter().zip(&other.values).all(|(a, b)| a <= b)
    }

    /// `‖a‖ = max_i |a_i|` (0 in the zero algebra).
    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl fmt::Display for BasicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v:?}")?;
        }
        write!(f, ")")
    }
}

/// An element `e` with `e·e = e`, i.e. a 0/1 vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Idempotent(BasicElement);

impl Idempotent {
    pub fn new(element: BasicElement) -> Result<Self, BasicError> {
        let squared = element.mul(&element)?;
        if squared == element {
            Ok(Idempotent(element))
        } else {
            Err(BasicError::NotIdempotent)
        }
    }

    pub fn element(&self) -> &BasicElement {
        &self.0
    }

    pub fn values(&self) -> &[f64] {
        self.0.values()
    }

    /// `e ∨ f = e + f − ef`.
    pub fn join(&self, other: &Self) -> Result<Self, BasicError> {
        let sum = self.0.add(&other.0)?;
        Ok(Idempotent(sum.sub(&self.0.mul(&other.0)?)?))
    }

    /// `e ∧ f = ef`.
    pub fn meet(&self, other: &Self) -> Result<Self, BasicError> {
        Ok(Idempotent(self.0.mul(&other.0)?))
    }

    /// `¬e = 1 − e`.
    pub fn complement(&self) -> Self {
        Idempotent(self.0.algebra.one().sub(&self.0).expect("same algebra"))
    }

    pub fn le(&self, other: &Self) -> bool {
        self.0.le(&other.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values().iter().all(|&v| v == 0.0)
    }

    /// Nonzero with no idempotent strictly between it and 0.
    pub fn is_atom(&self) -> bool {
        self.values().iter().filter(|&&v| v == 1.0).count() == 1
    }

    fn atom_index(&self) -> Option<usize> {
        if self.is_atom() {
            self.values().iter().position(|&v| v == 1.0)
        } else {
            None
        }
    }
}

/// A map between finite sets, stored by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMap {
    domain: Vec<String>,
    codomain: Vec<String>,
    map: Vec<usize>,
}

impl FiniteMap {
    pub fn new<S: AsRef<str>, T: AsRef<str>, U: AsRef<str>, V: AsRef<str>>(
        domain: &[S],
        codomain: &[T],
        pairs: &[(U, V)],
    ) -> Result<Self, BasicError> {
        let domain = FiniteBasicAlgebra::new(domain)?.atom_names;
        let codomain = FiniteBasicAlgebra::new(codomain)?.atom_names;
        let mut map = vec![None; domain.len()];
        for (s, t) in pairs {
            let (s, t) = (s.as_ref(), t.as_ref());
            let i = domain
                .iter()
                .position(|n| n == s)
                .ok_or_else(|| BasicError::UnknownElement(s.to_string()))?;
            let j = codomain
                .iter()
                .position(|n| n == t)
                .ok_or_else(|| BasicError::UnknownElement(t.to_string()))?;
            if map[i].is_some() {
                return Err(BasicError::DuplicateName(s.to_string()));
            }
            map[i] = Some(j);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(i, j)| j.ok_or_else(|| BasicError::MissingImage(domain[i].clone())))
            .collect::<Result<_, _>>()?;
        Ok(FiniteMap { domain, codomain, map })
    }

    /// Builds a map directly from image indices.
    pub fn from_indices(domain: Vec<String>, codomain: Vec<String>, map: Vec<usize>) -> Self {
        assert_eq!(domain.len(), map.len());
        assert!(map.iter().all(|&j| j < codomain.len()));
        FiniteMap { domain, codomain, map }
    }

    pub fn identity(set: &[String]) -> Self {
        FiniteMap {
            domain: set.to_vec(),
            codomain: set.to_vec(),
            map: (0..set.len()).collect(),
        }
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn codomain(&self) -> &[String] {
        &self.codomain
    }

    pub fn indices(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, s: &str) -> Option<&str> {
        let i = self.domain.iter().position(|n| n == s)?;
        Some(self.codomain[self.map[i]].as_str())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.domain
            .iter()
            .zip(&self.map)
            .map(|(s, &j)| (s.as_str(), self.codomain[j].as_str()))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FiniteMap) -> Option<FiniteMap> {
        (first.codomain == self.domain).then(|| FiniteMap {
            domain: first.domain.clone(),
            codomain: self.codomain.clone(),
            map: first.map.iter().map(|&j| self.map[j]).collect(),
        })
    }
}

/// A normal homomorphism `ℝ^m -> ℝ^n`. Every such map is a reindexing
/// `α(a)_j = a_{σ(j)}` along a map `σ` from target atoms to source atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalHom {
    source: FiniteBasicAlgebra,
    target: FiniteBasicAlgebra,
    atom_map: Vec<usize>,
}

impl NormalHom {
    pub fn new(source: FiniteBasicAlgebra, target: FiniteBasicAlgebra, atom_map: Vec<usize>) -> Result<Self, BasicError> {
        if atom_map.len() != target.dim() {
            return Err(BasicError::LengthMismatch {
                expected: target.dim(),
                got: atom_map.len(),
            });
        }
        if let Some(&bad) = atom_map.iter().find(|&&i| i >= source.dim()) {
            return Err(BasicError::UnknownElement(format!("source atom #{bad}")));
        }
        Ok(NormalHom { source, target, atom_map })
    }

    pub fn identity(algebra: &FiniteBasicAlgebra) -> Self {
        NormalHom {
            source: algebra.clone(),
            target: algebra.clone(),
            atom_map: (0..algebra.dim()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteBasicAlgebra {
        &self.source
    }

    pub fn target(&self) -> &FiniteBasicAlgebra {
        &self.target
    }

    pub fn atom_map(&self) -> &[usize] {
        &self.atom_map
    }

    pub fn apply(&self, a: &BasicElement) -> Result<BasicElement, BasicError> {
        if a.algebra != self.source {
            return Err(BasicError::AlgebraMismatch);
        }
        Ok(BasicElement {
            algebra: self.target.clone(),
            values: self.atom_map.iter().map(|&i| a.values[i]).collect(),
        })
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &NormalHom) -> Result<NormalHom, BasicError> {
        if first.target != self.source {
            return Err(BasicError::AlgebraMismatch);
        }
        Ok(NormalHom {
            source: first.source.clone(),
            target: self.target.clone(),
            atom_map: self.atom_map.iter().map(|&j| first.atom_map[j]).collect(),
        })
    }
}

/// `B(S)`: functions on `S`, with atoms named by the elements of `S`.
pub fn algebra_of(set: &[String]) -> Result<FiniteBasicAlgebra, BasicError> {
    FiniteBasicAlgebra::new(set)
}

/// `B(φ) : B(T) -> B(S)`, `f ↦ f ∘ φ`, for `φ : S -> T`.
pub fn functor_b(phi: &FiniteMap) -> NormalHom {
    NormalHom {
        source: FiniteBasicAlgebra {
            atom_names: phi.codomain.clone(),
        },
        target: FiniteBasicAlgebra {
            atom_names: phi.domain.clone(),
        },
        atom_map: phi.map.clone(),
    }
}

/// `X(α) : X_C -> X_A` for `α : A -> C`, computed literally as the meet of
/// all idempotents `a` of `A` with `x ≤ α(a)`.
pub fn functor_x(alpha: &NormalHom) -> Result<FiniteMap, BasicError> {
    let candidates = alpha.source.idempotents()?;
    let mut map = Vec::with_capacity(alpha.target.dim());
    for x in atoms(&alpha.target) {
        let mut meet = Idempotent(alpha.source.one());
        for a in &candidates {
            let image = Idempotent(alpha.apply(a.element())?);
            if x.le(&image) {
                meet = meet.meet(a)?;
            }
        }
        let index = meet
            .atom_index()
            .expect("the meet for an atom under a normal homomorphism is an atom");
        map.push(index);
    }
    Ok(FiniteMap {
        domain: alpha.target.atom_names.clone(),
        codomain: alpha.source.atom_names.clone(),
        map,
    })
}

/// `η_S(s)`: the characteristic function of `{s}` in `B(S)`, for each `s`.
pub fn eta(set: &[String]) -> Result<Vec<Idempotent>, BasicError> {
    let algebra = algebra_of(set)?;
    Ok((0..set.len())
        .map(|i| {
            let values = (0..set.len()).map(|j| if i == j { 1.0 } else { 0.0 }).collect();
            Idempotent(BasicElement {
                algebra: algebra.clone(),
                values,
            })
        })
        .collect())
}

/// `η_S : S -> X_{B(S)}` as a map of finite sets, landing on the atom list
/// of `B(S)`. `None` if some `η_S(s)` is not among the atoms.
pub fn eta_map(set: &[String]) -> Result<Option<FiniteMap>, BasicError> {
    let algebra = algebra_of(set)?;
    let atoms = atoms(&algebra);
    let map: Option<Vec<usize>> = eta(set)?
        .iter()
        .map(|chi| atoms.iter().position(|a| a == chi))
        .collect();
    Ok(map.map(|map| FiniteMap {
        domain: set.to_vec(),
        codomain: algebra.atom_names.clone(),
        map,
    }))
}

/// The residue of `a` modulo the maximal ideal `(1 − e)A` of an atom `e`:
/// the unique `s` with `(a − s·1)·e = 0`.
pub fn residue(a: &BasicElement, atom: &Idempotent) -> Result<f64, BasicError> {
    let ae = a.mul(atom.element())?;
    let mass: f64 = atom.values().iter().sum();
    Ok(ae.values.iter().sum::<f64>() / mass)
}

/// `ϑ_A : A -> B(X_A)`, `ϑ(a)(x) = residue of a at x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theta {
    source: FiniteBasicAlgebra,
    dual: FiniteBasicAlgebra,
    atoms: Vec<Idempotent>,
}

pub fn theta(algebra: &FiniteBasicAlgebra) -> Theta {
    Theta {
        source: algebra.clone(),
        dual: algebra.clone(),
        atoms: atoms(algebra),
    }
}

impl Theta {
    /// `B(X_A)`, whose atoms are named after the atoms of `A`.
    pub fn dual(&self) -> &FiniteBasicAlgebra {
        &self.dual
    }

    pub fn apply(&self, a: &BasicElement) -> Result<BasicElement, BasicError> {
        if a.algebra != self.source {
            return Err(BasicError::AlgebraMismatch);
        }
        let values = self.atoms.iter().map(|x| residue(a, x)).collect::<Result<_, _>>()?;
        Ok(BasicElement {
            algebra: self.dual.clone(),
            values,
        })
    }

    /// `ϑ⁻¹(f) = Σ_x f(x)·x`.
    pub fn inverse(&self, f: &BasicElement) -> Result<BasicElement, BasicError> {
        if f.algebra != self.dual {
            return Err(BasicError::AlgebraMismatch);
        }
        let mut out = self.source.zero();
        for (x, &v) in self.atoms.iter().zip(&f.values) {
            out = out.add(&x.element().scale(v))?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormalityReport {
    pub trials: usize,
    pub failures: usize,
}

impl NormalityReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Samples random finite families in the source and checks that `α`
/// preserves their joins and meets (coordinatewise max and min).
pub fn check_normal<R: Rng>(alpha: &NormalHom, trials: usize, rng: &mut R) -> NormalityReport {
    let k = alpha.source.dim();
    let mut failures = 0;
    for _ in 0..trials {
        let size = rng.gen_range(1..=5);
        let family: Vec<BasicElement> = (0..size)
            .map(|_| BasicElement {
                algebra: alpha.source.clone(),
                values: (0..k).map(|_| rng.gen_range(-10.0..10.0)).collect(),
            })
            .collect();
        let fold = |op: fn(&BasicElement, &BasicElement) -> Result<BasicElement, BasicError>, items: &[BasicElement]| {
            items[1..]
                .iter()
                .try_fold(items[0].clone(), |acc, e| op(&acc, e))
                .expect("same algebra")
        };
        let images: Vec<BasicElement> = family.iter().map(|e| alpha.apply(e).expect("source element")).collect();
        let sup_ok = alpha.apply(&fold(BasicElement::join, &family)).ok() == Some(fold(BasicElement::join, &images));
        let inf_ok = alpha.apply(&fold(BasicElement::meet, &family)).ok() == Some(fold(BasicElement::meet, &images));
        if !(sup_ok && inf_ok) {
            failures += 1;
        }
    }
    NormalityReport { trials, failures }
}

/// Every map `{0..n} -> {0..m}` as an index vector.
pub fn all_index_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..m).map(move |j| {
                    let mut w = v.clone();
                    w.push(j);
                    w
                })
            })
            .collect();
    }
    out
}
