//! Weighted sets and their morphisms.
//!
//! A weighted set is a finite, ordered carrier where every element has a
//! nonnegative weight. A morphism `f : (X, w1) -> (Y, w2)` is a map that
//! never increases weight: `w2(f(x)) <= w1(x)`.

use std::fmt;

use thiserror::Error;

use crate::term::Point;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WSetError {
    #[error("duplicate element `{0}`")]
    DuplicateName(String),
    #[error("weight of `{name}` is negative ({weight})")]
    NegativeWeight { name: String, weight: f64 },
    #[error("weight of `{name}` is not finite")]
    NonFiniteWeight { name: String },
    #[error("{names} names but {weights} weights")]
    LengthMismatch { names: usize, weights: usize },
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("no image given for `{0}`")]
    MissingImage(String),
    #[error("weight violation at `{0}`: image weight exceeds source weight")]
    WeightViolation(String),
    #[error("value for `{0}` is not finite")]
    NonFiniteValue(String),
    #[error("composition target mismatch: codomain of the first map is not the domain of the second")]
    TargetMismatch,
}

/// A finite weighted set `(X, w)` with a declared element order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSet {
    names: Vec<String>,
    weights: Vec<f64>,
}

impl WeightedSet {
    pub fn new<S: AsRef<str>>(names: &[S], weights: &[f64]) -> Result<Self, WSetError> {
        if names.len() != weights.len() {
            return Err(WSetError::LengthMismatch {
                names: names.len(),
                weights: weights.len(),
            });
        }
        let mut out = WeightedSet {
            names: Vec::with_capacity(names.len()),
            weights: Vec::with_capacity(names.len()),
        };
        for (name, &weight) in names.iter().zip(weights) {
            out.push(name.as_ref(), weight)?;
        }
        Ok(out)
    }

    /// Builds a weighted set from `(name, weight)` pairs.
    pub fn from_pairs<S: AsRef<str>>(pairs: &[(S, f64)]) -> Result<Self, WSetError> {
        let mut out = WeightedSet::empty();
        for (name, weight) in pairs {
            out.push(name.as_ref(), *weight)?;
        }
        Ok(out)
    }

    pub fn empty() -> Self {
        WeightedSet {
            names: Vec::new(),
            weights: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, weight: f64) -> Result<(), WSetError> {
        if self.index_of(name).is_some() {
            return Err(WSetError::DuplicateName(name.to_string()));
        }
        if !weight.is_finite() {
            return Err(WSetError::NonFiniteWeight {
                name: name.to_string(),
            });
        }
        if weight < 0.0 {
            return Err(WSetError::NegativeWeight {
                name: name.to_string(),
                weight,
            });
        }
        self.names.push(name.to_string());
        self.weights.push(weight);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index_of(name).is_some()
    }

    pub fn weight(&self, name: &str) -> Option<f64> {
        self.index_of(name).map(|i| self.weights[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> + '_ {
        self.names
            .iter()
            .map(String::as_str)
            .zip(self.weights.iter().copied())
    }

    /// Restriction to the elements of strictly positive weight, order preserved.
    pub fn positive_support(&self) -> WeightedSet {
        let (names, weights) = self.iter().filter(|&(_, w)| w > 0.0).fold(
            (Vec::new(), Vec::new()),
            |(mut n, mut w), (name, weight)| {
                n.push(name.to_string());
                w.push(weight);
                (n, w)
            },
        );
        WeightedSet { names, weights }
    }

    /// Checks that `values` is a morphism into `(R, |.|)`, i.e. a point of
    /// the box `prod [-w(x), w(x)]`. Every element must be assigned.
    pub fn validate_real_map<S: AsRef<str>>(&self, values: &[(S, f64)]) -> Result<Point, WSetError> {
        let mut assigned: Vec<Option<f64>> = vec![None; self.len()];
        for (name, value) in values {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| WSetError::UnknownElement(name.to_string()))?;
            if assigned[i].is_some() {
                return Err(WSetError::DuplicateName(name.to_string()));
            }
            if !value.is_finite() {
                return Err(WSetError::NonFiniteValue(name.to_string()));
            }
            assigned[i] = Some(*value);
        }
        let mut pairs = Vec::with_capacity(self.len());
        for (i, (name, weight)) in self.iter().enumerate() {
            let value = assigned[i].ok_or_else(|| WSetError::MissingImage(name.to_string()))?;
            if value.abs() > weight {
                return Err(WSetError::WeightViolation(name.to_string()));
            }
            pairs.push((name.to_string(), value));
        }
        Ok(Point::from_pairs(pairs).expect("values checked finite and distinct"))
    }
}

impl fmt::Display for WeightedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (name, weight)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {name}: {weight:?}")?;
        }
        write!(f, " }}")
    }
}

/// A weight-nonincreasing map between weighted sets.
#[derive(Debug, Clone, PartialEq)]
pub struct WSetMorphism {
    source: WeightedSet,
    target: WeightedSet,
    // image index in `target` for each source element
    map: Vec<usize>,
}

impl WSetMorphism {
    /// Validates `map` (given as `(source element, target element)` pairs)
    /// against the weight condition. Comparisons are exact.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(
        source: &WeightedSet,
        target: &WeightedSet,
        map: &[(S, T)],
    ) -> Result<Self, WSetError> {
        let mut images: Vec<Option<usize>> = vec![None; source.len()];
        for (x, y) in map {
            let (x, y) = (x.as_ref(), y.as_ref());
            let i = source
                .index_of(x)
                .ok_or_else(|| WSetError::UnknownElement(x.to_string()))?;
            let j = target
                .index_of(y)
                .ok_or_else(|| WSetError::UnknownElement(y.to_string()))?;
            if images[i].is_some() {
                return Err(WSetError::DuplicateName(x.to_string()));
            }
            images[i] = Some(j);
        }
        let mut resolved = Vec::with_capacity(source.len());
        for (i, image) in images.into_iter().enumerate() {
            let j = image.ok_or_else(|| WSetError::MissingImage(source.names[i].clone()))?;
            if target.weights[j] > source.weights[i] {
                return Err(WSetError::WeightViolation(source.names[i].clone()));
            }
            resolved.push(j);
        }
        Ok(WSetMorphism {
            source: source.clone(),
            target: target.clone(),
            map: resolved,
        })
    }

    pub fn identity(set: &WeightedSet) -> Self {
        WSetMorphism {
            source: set.clone(),
            target: set.clone(),
            map: (0..set.len()).collect(),
        }
    }

    pub fn source(&self) -> &WeightedSet {
        &self.source
    }

    pub fn target(&self) -> &WeightedSet {
        &self.target
    }

    pub fn image(&self, x: &str) -> Option<&str> {
        self.source
            .index_of(x)
            .map(|i| self.target.names[self.map[i]].as_str())
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.source
            .names
            .iter()
            .zip(&self.map)
            .map(|(x, &j)| (x.as_str(), self.target.names[j].as_str()))
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn compose(&self, first: &WSetMorphism) -> Result<WSetMorphism, WSetError> {
        if first.target != self.source {
            return Err(WSetError::TargetMismatch);
        }
        let map = first.map.iter().map(|&j| self.map[j]).collect();
        Ok(WSetMorphism {
            source: first.source.clone(),
            target: self.target.clone(),
            map,
        })
    }
}

/// `g ∘ f`.
pub fn compose(g: &WSetMorphism, f: &WSetMorphism) -> Result<WSetMorphism, WSetError> {
    g.compose(f)
}
