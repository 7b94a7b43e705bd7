//! Computation in free bounded archimedean ℓ-algebras over finite weighted sets.
//!
//! Elements of the free algebra `F(X, w)` are terms over the generators of a
//! weighted set `(X, w)`. They denote piecewise polynomial functions on the
//! box `Π [-w(x), w(x)]` over the positive-weight generators, which gives
//! certified sup-norms, semi-decided equality and the universal mapping
//! property into the reals, finite basic algebras `ℝ^k` and other free
//! algebras. The [`basic`] module covers finite basic algebras and the
//! duality between them and finite sets.
//!
//! The [`cli`] module holds the script language used by the `freebal` binary.

pub mod basic;
pub mod cli;
pub mod freealg;
pub mod interval;
pub mod term;
pub mod wset;

pub use freealg::{Equality, FreeAlgError, FreeElement, Homomorphism, TargetValue, YosidaBox};
pub use interval::{BnBConfig, BoxRegion, Branching, Enclosure, Interval, Status};
pub use term::{Point, Term};
pub use wset::{WSetMorphism, WeightedSet};
