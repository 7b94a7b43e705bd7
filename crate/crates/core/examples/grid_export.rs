//! Sampling an element on a regular grid of the unit cube and writing CSV.

use std::io::Write;
use std::sync::Arc;

use freebal::cli::{format_number, parse_term};
use freebal::{FreeElement, WeightedSet};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = Arc::new(WeightedSet::from_pairs(&[("x", 1.0), ("y", 2.0)])?);
    let a = FreeElement::new(ctx.clone(), &parse_term("max(x*y, 0.5) - abs(x)")?)?;
    let rows = a.sample_grid(5)?;

    let out = std::io::stdout();
    let mut out = out.lock();
    writeln!(out, "u_x,u_y,value")?;
    for (u, v) in &rows {
        writeln!(out, "{},{},{}", format_number(u[0]), format_number(u[1]), format_number(*v))?;
    }
    eprintln!("{} rows", rows.len());
    Ok(())
}
