//! Certified sup-norms of free-algebra elements.

use std::sync::Arc;

use freebal::cli::parse_term;
use freebal::{BnBConfig, FreeAlgError, FreeElement, WeightedSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Arc::new(WeightedSet::from_pairs(&[("x", 2.0), ("y", 1.0), ("z", 0.0)])?);
    let cfg = BnBConfig::default();

    // the norm of a generator is its weight
    for name in ["x", "y", "z"] {
        let g = FreeElement::generator(ctx.clone(), name)?;
        let e = g.norm(&cfg)?;
        println!("||{name}|| in [{}, {}] after {} boxes", e.lo, e.hi, e.nodes_expanded);
    }

    for text in ["x*x - x*y", "max(x, y) * min(x, -y)", "x*x*x - 3*x + z", "abs(x - y) - 1.5"] {
        let a = FreeElement::new(ctx.clone(), &parse_term(text)?)?;
        let e = a.norm(&cfg)?;
        println!("||{text}|| in [{}, {}] ({} boxes)", e.lo, e.hi, e.nodes_expanded);
    }

    // a tiny budget returns the best enclosure so far as an error
    let tight = BnBConfig {
        max_nodes: 3,
        ..BnBConfig::default()
    };
    let hard = FreeElement::new(ctx.clone(), &parse_term("x*x*x - 3*x*y*y")?)?;
    match hard.norm(&tight) {
        Err(FreeAlgError::BudgetExhausted(e)) => println!("budget exhausted: norm in [{}, {}]", e.lo, e.hi),
        other => println!("{other:?}"),
    }
    let e = hard.norm(&cfg)?;
    println!("with the default budget: [{}, {}]", e.lo, e.hi);
    Ok(())
}
