//! Three-valued equality in the free algebra.

use std::sync::Arc;

use freebal::cli::parse_term;
use freebal::{BnBConfig, Equality, FreeElement, WeightedSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Arc::new(WeightedSet::from_pairs(&[("x", 2.0), ("y", 0.5)])?);
    let cfg = BnBConfig::default();

    // clamping a generator at its own weight changes nothing
    for name in ["x", "y"] {
        let g = FreeElement::generator(ctx.clone(), name)?;
        let w = ctx.weight(name).unwrap();
        println!("{name} = truncate({name}, {w}): {}", short(&g.equals(&g.truncate(w)?, &cfg)?));
    }

    let pairs = [
        ("max(x, y)", "max(y, x)"),
        ("x*(y + 1)", "x*y + x"),
        ("max(x, 0) + min(x, 0)", "x"),
        ("min(x, 1)", "x"),
        ("x", "x + 0.000001"),
    ];
    for (a, b) in pairs {
        let ea = FreeElement::new(ctx.clone(), &parse_term(a)?)?;
        let eb = FreeElement::new(ctx.clone(), &parse_term(b)?)?;
        println!("{a} vs {b}: {}", short(&ea.equals(&eb, &cfg)?));
    }

    // equality is only semi-decided: this identity holds, but near the axes
    // the bounds on the difference shrink too slowly to certify it
    let budget = BnBConfig {
        max_nodes: 20_000,
        ..BnBConfig::default()
    };
    let a = FreeElement::new(ctx.clone(), &parse_term("abs(x*y)")?)?;
    let b = FreeElement::new(ctx.clone(), &parse_term("abs(x)*abs(y)")?)?;
    println!("abs(x*y) vs abs(x)*abs(y): {}", short(&a.equals(&b, &budget)?));
    Ok(())
}

fn short(e: &Equality) -> String {
    match e {
        Equality::Equal(_) => "equal".into(),
        Equality::NotEqual { lo } => format!("not equal (distance >= {lo})"),
        Equality::Unknown(enc) => format!("unknown (distance in [{}, {}])", enc.lo, enc.hi),
    }
}
