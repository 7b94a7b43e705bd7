//! Seeded property-test driver behind `--seed`.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::interval::{interval_eval, BoxRegion, Interval};
use crate::term::{Point, Term};

use super::syntax::parse_term;

/// Random term over `names` with at most `max_size` nodes. Constants are
/// drawn from [-3, 3] and rounded to two decimals.
pub fn random_term<R: Rng>(rng: &mut R, names: &[&str], max_size: usize) -> Term {
    let max_size = max_size.max(1);
    let leaf = |rng: &mut R| {
        if names.is_empty() || rng.gen_bool(0.3) {
            let c: f64 = rng.gen_range(-300..=300) as f64 / 100.0;
            Term::Const(c)
        } else {
            Term::gen(names[rng.gen_range(0..names.len())])
        }
    };
    if max_size < 3 {
        if max_size == 2 && rng.gen_bool(0.3) {
            return Term::neg(leaf(rng));
        }
        return leaf(rng);
    }
    match rng.gen_range(0..6) {
        0 => leaf(rng),
        1 => Term::neg(random_term(rng, names, max_size - 1)),
        k => {
            let budget = max_size - 1;
            let left = rng.gen_range(1..budget);
            let a = random_term(rng, names, left);
            let b = random_term(rng, names, budget - left);
            match k {
                2 => Term::add(a, b),
                3 => Term::mul(a, b),
                4 => Term::join(a, b),
                _ => Term::meet(a, b),
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelfCheckReport {
    pub cases: usize,
    pub roundtrip_failures: usize,
    pub soundness_failures: usize,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.roundtrip_failures == 0 && self.soundness_failures == 0
    }
}

impl std::fmt::Display for SelfCheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "selfcheck cases={} roundtrip_failures={} soundness_failures={}",
            self.cases, self.roundtrip_failures, self.soundness_failures
        )
    }
}

/// Checks print/parse round trips and interval soundness on `cases` random
/// terms drawn from `seed`.
pub fn selfcheck(seed: u64, cases: usize) -> SelfCheckReport {
    const NAMES: [&str; 3] = ["x", "y", "z"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = SelfCheckReport {
        cases,
        roundtrip_failures: 0,
        soundness_failures: 0,
    };
    for _ in 0..cases {
        let t = random_term(&mut rng, &NAMES, 12);
        if parse_term(&t.to_string()).ok().as_ref() != Some(&t) {
            report.roundtrip_failures += 1;
        }
        let mut sides = Vec::new();
        let mut coords = Vec::new();
        for name in NAMES {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            sides.push((name, Interval::new(lo, hi).expect("ordered endpoints")));
            coords.push((name, rng.gen_range(lo..=hi)));
        }
        let region = BoxRegion::new(sides).expect("valid box");
        let point = Point::from_pairs(coords).expect("distinct names");
        let value = t.eval(&point).expect("total point");
        match interval_eval(&t, &region) {
            Ok(enc) if enc.contains(value) => {}
            _ => report.soundness_failures += 1,
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_terms_respect_size() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let t = random_term(&mut rng, &["x", "y"], 12);
            assert!(t.size() <= 12, "{t}");
        }
    }

    #[test]
    fn selfcheck_passes_and_is_deterministic() {
        let a = selfcheck(1, 200);
        assert!(a.passed(), "{a}");
        assert_eq!(a, selfcheck(1, 200));
    }
}
