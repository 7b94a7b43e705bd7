//! Homomorphisms out of the free algebra: into the reals, into R^k, into
//! another free algebra, and the free functor on a weighted-set morphism.

use std::sync::Arc;

use freebal::basic::FiniteBasicAlgebra;
use freebal::cli::parse_term;
use freebal::{BnBConfig, FreeElement, Homomorphism, WSetMorphism, WeightedSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Arc::new(WeightedSet::from_pairs(&[("x", 2.0), ("y", 1.0)])?);
    let a = FreeElement::new(ctx.clone(), &parse_term("x*x - max(x, y)")?)?;

    // evaluation at a point of the box
    let at = Homomorphism::into_reals(ctx.clone(), &[("x", 1.5), ("y", -1.0)])?;
    println!("a at (1.5, -1) = {}", at.apply(&a)?);
    println!(
        "point outside the box: {}",
        Homomorphism::into_reals(ctx.clone(), &[("x", 2.5), ("y", 0.0)]).unwrap_err()
    );

    // three points at once, as a homomorphism into R^3
    let r3 = FiniteBasicAlgebra::with_dim(3);
    let h = Homomorphism::into_basic(ctx.clone(), r3, &[("x", vec![2.0, -2.0, 0.0]), ("y", vec![1.0, 0.5, -1.0])])?;
    println!("a in R^3 = {}", h.apply(&a)?);
    let norm = a.norm(&BnBConfig::default())?;
    println!("||a|| = {} bounds every coordinate", norm.hi);

    // substitution into another free algebra, certified against the weights
    let target = Arc::new(WeightedSet::from_pairs(&[("u", 1.0), ("v", 1.0)])?);
    let cfg = BnBConfig::default();
    let s = Homomorphism::into_free(ctx.clone(), target.clone(), &[("x", parse_term("u + v")?), ("y", parse_term("u*v")?)], &cfg)?;
    println!("a under x -> u+v, y -> uv: {}", s.apply(&a)?);
    let too_big = Homomorphism::into_free(ctx.clone(), target.clone(), &[("x", parse_term("u")?), ("y", parse_term("u + v")?)], &cfg);
    println!("y -> u+v: {}", too_big.unwrap_err());

    // the free functor sends generators to generators
    let small = WeightedSet::from_pairs(&[("p", 0.5)])?;
    let phi = WSetMorphism::new(&target, &small, &[("u", "p"), ("v", "p")])?;
    let f_phi = Homomorphism::free_functor(&phi);
    let b = FreeElement::new(target.clone(), &parse_term("u - v*v")?)?;
    println!("F(phi)(u - v*v) = {}", f_phi.apply(&b)?);
    Ok(())
}
