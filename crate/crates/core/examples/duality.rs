//! Finite sets and the finite basic algebras R^k: idempotents, atoms, the
//! functors between the two categories and their unit maps.

use freebal::basic::{self, FiniteMap};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let t: Vec<String> = ["p", "q"].map(String::from).to_vec();

    let algebra = basic::algebra_of(&s)?;
    let ids = algebra.idempotents()?;
    println!("B(S) has {} idempotents; atoms:", ids.len());
    for atom in basic::atoms(&algebra) {
        println!("  {}", atom.element());
    }

    let phi = FiniteMap::new(&s, &t, &[("a", "p"), ("b", "p"), ("c", "q")])?;
    let b_phi = basic::functor_b(&phi);
    let f = basic::algebra_of(&t)?.element(vec![10.0, -1.0])?;
    println!("B(phi) sends {f} to {}", b_phi.apply(&f)?);

    // X recovers the map from the homomorphism
    let back = basic::functor_x(&b_phi)?;
    for (x, y) in back.pairs() {
        println!("X(B(phi)): {x} -> {y}");
    }
    println!("X(B(phi)) = phi: {}", back == phi);

    for (x, chi) in s.iter().zip(basic::eta(&s)?) {
        println!("eta({x}) = {}", chi.element());
    }

    let theta = basic::theta(&algebra);
    let a = algebra.element(vec![3.0, -0.5, 2.0])?;
    let image = theta.apply(&a)?;
    println!("theta({a}) = {image}, inverse gives back {}", theta.inverse(&image)?);
    Ok(())
}
