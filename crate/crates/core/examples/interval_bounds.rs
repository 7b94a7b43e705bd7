//! Interval enclosures and certified extrema on an arbitrary box.

use freebal::cli::parse_term;
use freebal::interval::{bnb_max, bnb_min, gradient_bounds, interval_eval};
use freebal::{BnBConfig, BoxRegion, Interval};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let region = BoxRegion::new([
        ("x", Interval::new(-1.0, 2.0).unwrap()),
        ("y", Interval::new(0.0, 0.5).unwrap()),
    ])?;
    let t = parse_term("x*x - x + max(y, x*y)")?;
    let cfg = BnBConfig::default();

    println!("naive enclosure: {}", interval_eval(&t, &region)?);
    let (lo, hi) = (bnb_min(&t, &region, &cfg)?, bnb_max(&t, &region, &cfg)?);
    println!("min in [{}, {}] ({} boxes)", lo.lo, lo.hi, lo.nodes_expanded);
    println!("max in [{}, {}] ({} boxes)", hi.lo, hi.hi, hi.nodes_expanded);
    println!("per-axis Lipschitz bounds: {:?}", gradient_bounds(&t, &region)?);

    // 0.1 + 0.2 is not exactly representable; the enclosure brackets it
    let s = Interval::point(0.1).add(Interval::point(0.2));
    println!("0.1 + 0.2 in {s}");
    Ok(())
}
