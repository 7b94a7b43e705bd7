//! Weighted sets, their morphisms, and real maps inside the Yosida box.

use freebal::{WSetMorphism, WeightedSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x = WeightedSet::from_pairs(&[("a", 3.0), ("b", 1.0), ("c", 0.0)])?;
    let y = WeightedSet::from_pairs(&[("p", 2.0), ("q", 0.0)])?;
    println!("X = {x}");
    println!("Y = {y}");
    println!("positive support of X = {}", x.positive_support());

    // a morphism may only move an element to one of no larger weight
    let f = WSetMorphism::new(&x, &y, &[("a", "p"), ("b", "q"), ("c", "q")])?;
    for (s, t) in f.pairs() {
        println!("f({s}) = {t}");
    }
    match WSetMorphism::new(&y, &x, &[("p", "a"), ("q", "c")]) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }

    let g = WSetMorphism::new(&y, &y, &[("p", "q"), ("q", "q")])?;
    let gf = g.compose(&f)?;
    println!("(g . f)(a) = {}", gf.image("a").unwrap());

    // maps into the reals with |g(x)| <= w(x) are exactly the points of the box
    for values in [[2.5, -1.0, 0.0], [3.5, 0.0, 0.0], [0.0, 0.0, 1e-300]] {
        let pairs: Vec<(&str, f64)> = ["a", "b", "c"].into_iter().zip(values).collect();
        match x.validate_real_map(&pairs) {
            Ok(p) => println!("{values:?} accepted as a point with {} coordinates", p.len()),
            Err(e) => println!("{values:?} rejected: {e}"),
        }
    }
    Ok(())
}
