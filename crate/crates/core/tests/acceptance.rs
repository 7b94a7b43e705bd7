//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with
//! `cargo test -p freebal --test acceptance`.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use freebal::basic::{self, FiniteBasicAlgebra, FiniteMap, Idempotent};
use freebal::cli::{parse_term, random_term, Session};
use freebal::interval::{bnb_sup_abs, gradient_bounds, interval_eval, point_bound};
use freebal::{BnBConfig, BoxRegion, Equality, FreeElement, Homomorphism, Interval, Point, TargetValue, Term, WeightedSet, YosidaBox};

const NAMES: [&str; 4] = ["x", "y", "z", "w"];

type Criterion<'a> = Box<dyn FnOnce(&mut ChaCha8Rng) -> Verdict + 'a>;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        passed,
        detail: detail.into(),
    }
}

fn random_context(rng: &mut ChaCha8Rng, max_len: usize, max_weight: f64) -> Arc<WeightedSet> {
    let n = rng.gen_range(1..=max_len);
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=max_weight)).collect();
    Arc::new(WeightedSet::new(&NAMES[..n], &weights).unwrap())
}

/// Point-free stack program for a term over coordinates `names`; evaluates
/// in plain floating point, independently of the library's evaluators.
enum Op {
    Const(f64),
    Coord(usize),
    Add,
    Mul,
    Neg,
    Max,
    Min,
}

fn compile(t: &Term, names: &[&str], out: &mut Vec<Op>) {
    match t {
        Term::Const(c) => out.push(Op::Const(*c)),
        Term::Gen(g) => out.push(Op::Coord(names.iter().position(|n| n == g).unwrap())),
        Term::Neg(a) => {
            compile(a, names, out);
            out.push(Op::Neg);
        }
        Term::Add(a, b) | Term::Mul(a, b) | Term::Join(a, b) | Term::Meet(a, b) => {
            compile(a, names, out);
            compile(b, names, out);
            out.push(match t {
                Term::Add(..) => Op::Add,
                Term::Mul(..) => Op::Mul,
                Term::Join(..) => Op::Max,
                _ => Op::Min,
            });
        }
    }
}

fn run(prog: &[Op], coords: &[f64], stack: &mut Vec<f64>) -> f64 {
    stack.clear();
    for op in prog {
        let v = match op {
            Op::Const(c) => *c,
            Op::Coord(i) => coords[*i],
            Op::Neg => -stack.pop().unwrap(),
            _ => {
                let b = stack.pop().unwrap();
                let a = stack.pop().unwrap();
                match op {
                    Op::Add => a + b,
                    Op::Mul => a * b,
                    Op::Max => a.max(b),
                    _ => a.min(b),
                }
            }
        };
        stack.push(v);
    }
    stack.pop().unwrap()
}

/// 1. `‖f(x)‖ = w(x)` for generators of random contexts.
fn generator_norm_law(contexts: &[Arc<WeightedSet>]) -> Verdict {
    let cfg = BnBConfig::default();
    let (mut cases, mut failures, mut slowest) = (0, 0, Duration::ZERO);
    for ctx in contexts {
        for (x, w) in ctx.iter() {
            cases += 1;
            let start = Instant::now();
            let e = FreeElement::generator(ctx.clone(), x).unwrap().norm_enclosure(&cfg).unwrap();
            slowest = slowest.max(start.elapsed());
            if !(e.is_converged() && e.gap() <= 1e-6 && e.contains(w)) || start.elapsed() > Duration::from_secs(1) {
                failures += 1;
            }
        }
    }
    verdict(
        failures == 0,
        format!("{} contexts, {cases} generators, {failures} failures, slowest {slowest:?}", contexts.len()),
    )
}

/// 2. `f(x) = (f(x) ∨ −w(x)) ∧ w(x)`.
fn truncation_identity(contexts: &[Arc<WeightedSet>]) -> Verdict {
    let cfg = BnBConfig::default();
    let (mut cases, mut failures) = (0, 0);
    for ctx in contexts {
        for (x, w) in ctx.iter() {
            cases += 1;
            let g = FreeElement::generator(ctx.clone(), x).unwrap();
            let t = g.truncate(w).unwrap();
            if !matches!(g.equals(&t, &cfg).unwrap(), Equality::Equal(_)) {
                failures += 1;
            }
        }
    }
    verdict(failures == 0, format!("{cases} generators, {failures} not Equal"))
}

fn random_basic_values(rng: &mut ChaCha8Rng, ctx: &WeightedSet, k: usize) -> Vec<(String, Vec<f64>)> {
    ctx.iter()
        .map(|(x, w)| {
            let values = (0..k)
                .map(|_| match rng.gen_range(0..4) {
                    0 => w,
                    1 => -w,
                    _ => rng.gen_range(-w..=w),
                })
                .collect();
            (x.to_string(), values)
        })
        .collect()
}

/// 3. `‖α(a)‖ ≤ ‖a‖` for homomorphisms into `ℝ^k`.
fn norm_contraction(rng: &mut ChaCha8Rng) -> Verdict {
    let cfg = BnBConfig {
        max_nodes: 200_000,
        ..Default::default()
    };
    let mut violations = 0;
    let mut unconverged = 0;
    for _ in 0..200 {
        let ctx = random_context(rng, 3, 4.0);
        let names: Vec<&str> = ctx.names().iter().map(String::as_str).collect();
        let term = random_term(rng, &names, 12);
        let a = FreeElement::new(ctx.clone(), &term).unwrap();
        let k = rng.gen_range(1..=4);
        let values = random_basic_values(rng, &ctx, k);
        let alpha = Homomorphism::into_basic(ctx.clone(), FiniteBasicAlgebra::with_dim(k), &values).unwrap();
        let TargetValue::Basic(image) = alpha.apply(&a).unwrap() else {
            unreachable!("basic target")
        };
        let norm = a.norm_enclosure(&cfg).unwrap();
        if !norm.is_converged() {
            unconverged += 1;
        }
        if image.norm() > norm.hi + 1e-9 {
            violations += 1;
        }
    }
    verdict(
        violations == 0,
        format!("200 pairs, {violations} violations ({unconverged} norms stopped at the node budget)"),
    )
}

/// 4. Brute-force grid maximum of `|t|` against the certified enclosure.
fn grid_oracle(rng: &mut ChaCha8Rng) -> Verdict {
    const RES: usize = 2001;
    let start = Instant::now();
    let cfg = BnBConfig::default();
    let mut violations = 0;
    let mut worst_slack_used: f64 = 0.0;
    for _ in 0..100 {
        let dims = rng.gen_range(1..=2);
        let weights: Vec<f64> = (0..dims).map(|_| rng.gen_range(0.1..=3.0)).collect();
        let names = &NAMES[..dims];
        let ctx = WeightedSet::new(names, &weights).unwrap();
        let t = random_term(rng, names, 12);
        let region = YosidaBox::new(&ctx).region();
        let enc = bnb_sup_abs(&t, &region, &cfg).unwrap();
        let lipschitz = gradient_bounds(&t, &region).unwrap();
        let slack: f64 = lipschitz
            .iter()
            .zip(&weights)
            .map(|(l, w)| l * 2.0 * w / (RES - 1) as f64)
            .sum();

        let mut prog = Vec::new();
        compile(&t, names, &mut prog);
        let mut stack = Vec::new();
        // w·u with u in [-1, 1] keeps rounded grid points inside the box
        let axis = |w: f64, i: usize| w * (2.0 * i as f64 / (RES - 1) as f64 - 1.0);
        let mut grid_max = 0.0f64;
        let mut above: Vec<Vec<f64>> = Vec::new();
        let mut visit = |coords: Vec<f64>, stack: &mut Vec<f64>| {
            let v = run(&prog, &coords, stack).abs();
            grid_max = grid_max.max(v);
            if v > enc.hi {
                above.push(coords);
            }
        };
        if dims == 1 {
            for i in 0..RES {
                visit(vec![axis(weights[0], i)], &mut stack);
            }
        } else {
            for i in 0..RES {
                let x = axis(weights[0], i);
                for j in 0..RES {
                    visit(vec![x, axis(weights[1], j)], &mut stack);
                }
            }
        }
        // a float evaluation may round past an exact bound; the real value
        // at such a point is checked with a certified point evaluation
        let upper_ok = above.iter().all(|coords| {
            let p = Point::from_pairs(names.iter().copied().zip(coords.iter().copied())).unwrap();
            let v = point_bound(&t, &p).unwrap();
            let least_abs = if v.contains(0.0) { 0.0 } else { v.lo.abs().min(v.hi.abs()) };
            least_abs <= enc.hi
        });
        let lower_ok = grid_max >= enc.lo - slack;
        if !(upper_ok && lower_ok) {
            violations += 1;
        }
        if slack > 0.0 {
            worst_slack_used = worst_slack_used.max((enc.lo - grid_max).max(0.0) / slack);
        }
    }
    let elapsed = start.elapsed();
    verdict(
        violations == 0 && elapsed < Duration::from_secs(120),
        format!(
            "100 terms at {RES} points per axis, {violations} violations, max slack fraction {worst_slack_used:.3}, {elapsed:.1?}"
        ),
    )
}

/// 5. Induced homomorphisms preserve operations bit for bit and extend `h`.
fn ump_laws(rng: &mut ChaCha8Rng) -> Verdict {
    fn bits(v: &TargetValue) -> Vec<u64> {
        match v {
            TargetValue::Real(r) => vec![r.to_bits()],
            TargetValue::Basic(b) => b.values().iter().map(|x| x.to_bits()).collect(),
            TargetValue::Free(_) => unreachable!("real and basic targets only"),
        }
    }
    fn combine(a: &TargetValue, b: &TargetValue, op: fn(f64, f64) -> f64) -> Vec<u64> {
        match (a, b) {
            (TargetValue::Real(x), TargetValue::Real(y)) => vec![op(*x, *y).to_bits()],
            (TargetValue::Basic(x), TargetValue::Basic(y)) => {
                x.values().iter().zip(y.values()).map(|(p, q)| op(*p, *q).to_bits()).collect()
            }
            _ => unreachable!("same target"),
        }
    }
    let mut failures = 0;
    let mut triangle_failures = 0;
    for i in 0..500 {
        let ctx = random_context(rng, 4, 5.0);
        let names: Vec<&str> = ctx.names().iter().map(String::as_str).collect();
        let hom = if i % 2 == 0 {
            let values: Vec<(String, f64)> = ctx
                .iter()
                .map(|(x, w)| (x.to_string(), rng.gen_range(-w..=w)))
                .collect();
            Homomorphism::into_reals(ctx.clone(), &values).unwrap()
        } else {
            let k = rng.gen_range(1..=4);
            let values = random_basic_values(rng, &ctx, k);
            Homomorphism::into_basic(ctx.clone(), FiniteBasicAlgebra::with_dim(k), &values).unwrap()
        };
        let s = FreeElement::new(ctx.clone(), &random_term(rng, &names, 10)).unwrap();
        let t = FreeElement::new(ctx.clone(), &random_term(rng, &names, 10)).unwrap();
        let (hs, ht) = (hom.apply(&s).unwrap(), hom.apply(&t).unwrap());
        type Law = (FreeElement, fn(f64, f64) -> f64);
        let laws: [Law; 4] = [
            (s.add(&t).unwrap(), |a, b| a + b),
            (s.mul(&t).unwrap(), |a, b| a * b),
            (s.join(&t).unwrap(), f64::max),
            (s.meet(&t).unwrap(), f64::min),
        ];
        for (combined, op) in laws {
            if bits(&hom.apply(&combined).unwrap()) != combine(&hs, &ht, op) {
                failures += 1;
            }
        }
        for (x, _) in ctx.iter() {
            let fx = FreeElement::generator(ctx.clone(), x).unwrap();
            if bits(&hom.apply(&fx).unwrap()) != bits(&hom.image_of(x).unwrap()) {
                triangle_failures += 1;
            }
        }
    }
    verdict(
        failures == 0 && triangle_failures == 0,
        format!("500 pairs, {failures} operation mismatches, {triangle_failures} triangle mismatches"),
    )
}

fn set_of(n: usize, prefix: &str) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// 6. Finite duality between sets and finite basic algebras, exhaustively.
fn finite_duality() -> Verdict {
    let mut checks = 0u64;
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        checks += 1;
        if !ok && failures.len() < 5 {
            failures.push(what.to_string());
        }
    };
    for k in 0..=4 {
        let s = set_of(k, "s");
        let algebra = basic::algebra_of(&s).unwrap();
        let ids = algebra.idempotents().unwrap();
        check(ids.len() == 1 << k, "idempotent count");
        let one = Idempotent::new(algebra.one()).unwrap();
        let zero = Idempotent::new(algebra.zero()).unwrap();
        for e in &ids {
            check(e.join(&e.complement()).unwrap() == one, "complement join");
            check(e.meet(&e.complement()).unwrap() == zero, "complement meet");
            check(e.complement().complement() == *e, "involution");
            for f in &ids {
                check(e.join(f).unwrap() == f.join(e).unwrap(), "join commutes");
                check(e.meet(f).unwrap() == f.meet(e).unwrap(), "meet commutes");
                check(e.join(&e.meet(f).unwrap()).unwrap() == *e, "absorption");
                check(e.le(f) == (e.meet(f).unwrap() == *e), "order");
                for g in &ids {
                    check(
                        e.meet(&f.join(g).unwrap()).unwrap() == e.meet(f).unwrap().join(&e.meet(g).unwrap()).unwrap(),
                        "distributivity",
                    );
                    check(
                        e.join(&f.join(g).unwrap()).unwrap() == e.join(f).unwrap().join(g).unwrap(),
                        "associativity",
                    );
                }
            }
        }
        // atoms are the minimal nonzero idempotents
        let atoms = basic::atoms(&algebra);
        let minimal: Vec<&Idempotent> = ids
            .iter()
            .filter(|e| !e.is_zero() && ids.iter().all(|f| f.is_zero() || !f.le(e) || f == *e))
            .collect();
        check(minimal.len() == atoms.len() && minimal.iter().all(|m| atoms.contains(m)), "atoms");
        // η is a bijection onto the atoms
        let eta = basic::eta_map(&s).unwrap();
        check(
            eta.as_ref().is_some_and(|m| {
                let mut seen = m.indices().to_vec();
                seen.sort_unstable();
                seen == (0..k).collect::<Vec<_>>()
            }),
            "eta bijection",
        );
        // ϑ is an ℓ-isomorphism: probe values from a small exact grid
        let theta = basic::theta(&algebra);
        let probes = [-2.0, -0.5, 0.0, 1.0, 3.0];
        let mut elems = Vec::new();
        for i in 0..25 {
            let values = (0..k).map(|j| probes[(i * (j + 2) + j) % probes.len()]).collect();
            elems.push(algebra.element(values).unwrap());
        }
        for a in &elems {
            check(theta.inverse(&theta.apply(a).unwrap()).unwrap() == *a, "theta inverse");
            for b in &elems {
                let (ta, tb) = (theta.apply(a).unwrap(), theta.apply(b).unwrap());
                check(theta.apply(&a.add(b).unwrap()).unwrap() == ta.add(&tb).unwrap(), "theta +");
                check(theta.apply(&a.mul(b).unwrap()).unwrap() == ta.mul(&tb).unwrap(), "theta *");
                check(theta.apply(&a.join(b).unwrap()).unwrap() == ta.join(&tb).unwrap(), "theta join");
                check(theta.apply(&a.meet(b).unwrap()).unwrap() == ta.meet(&tb).unwrap(), "theta meet");
            }
        }
        check(theta.apply(&algebra.one()).unwrap() == theta.dual().one(), "theta unit");
    }
    // X(B(φ)) = φ, the meet formula, and functoriality
    for n in 0..=4 {
        for m in 0..=4 {
            let (s, t) = (set_of(n, "s"), set_of(m, "t"));
            for map in basic::all_index_maps(n, m) {
                let phi = FiniteMap::from_indices(s.clone(), t.clone(), map);
                let b_phi = basic::functor_b(&phi);
                check(basic::functor_x(&b_phi).unwrap() == phi, "X(B(phi)) = phi");
                let id_t = FiniteMap::identity(&t);
                check(phi.compose(&FiniteMap::identity(&s)).as_ref() == Some(&phi), "phi id");
                check(id_t.compose(&phi).as_ref() == Some(&phi), "id phi");
                check(
                    basic::functor_b(&FiniteMap::identity(&s)) == basic::NormalHom::identity(&basic::algebra_of(&s).unwrap()),
                    "B(id) = id",
                );
                for r in 0..=2 {
                    let u = set_of(r, "u");
                    for map2 in basic::all_index_maps(m, r) {
                        let psi = FiniteMap::from_indices(t.clone(), u.clone(), map2);
                        let psi_phi = psi.compose(&phi).unwrap();
                        let b_psi = basic::functor_b(&psi);
                        // B(ψ∘φ) = B(φ)∘B(ψ)
                        check(basic::functor_b(&psi_phi) == b_phi.compose(&b_psi).unwrap(), "B composition");
                        // X(B(φ)∘B(ψ)) = X(B(ψ))∘X(B(φ))
                        let lhs = basic::functor_x(&b_phi.compose(&b_psi).unwrap()).unwrap();
                        let rhs = basic::functor_x(&b_psi)
                            .unwrap()
                            .compose(&basic::functor_x(&b_phi).unwrap())
                            .unwrap();
                        check(lhs == rhs, "X composition");
                    }
                }
            }
        }
    }
    verdict(
        failures.is_empty(),
        format!("{checks} exact checks on carriers of size <= 4, failures: {failures:?}"),
    )
}

/// 7. `validate_real_map` accepts exactly the maps inside the Yosida box.
fn yosida_box(rng: &mut ChaCha8Rng) -> Verdict {
    let mut mismatches = 0;
    let mut accepted = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=4);
        let weights: Vec<f64> = (0..n)
            .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.0..10.0) })
            .collect();
        let ctx = WeightedSet::new(&NAMES[..n], &weights).unwrap();
        let values: Vec<(&str, f64)> = NAMES[..n]
            .iter()
            .zip(&weights)
            .map(|(&x, &w)| {
                let v = match rng.gen_range(0..6) {
                    0 => w,
                    1 => -w,
                    2 => w.next_up(),
                    3 => -(w.next_up()),
                    _ => rng.gen_range(-12.0..12.0),
                };
                (x, v)
            })
            .collect();
        let expected = values.iter().zip(&weights).all(|((_, v), w)| v.abs() <= *w);
        let got = ctx.validate_real_map(&values).is_ok();
        if got {
            accepted += 1;
        }
        if got != expected {
            mismatches += 1;
        }
    }
    verdict(mismatches == 0, format!("1000 maps ({accepted} accepted), {mismatches} mismatches"))
}

fn random_box(rng: &mut ChaCha8Rng, names: &[&str]) -> (Vec<(f64, f64)>, BoxRegion) {
    let sides: Vec<(f64, f64)> = names
        .iter()
        .map(|_| {
            let a = rng.gen_range(-3.0..3.0);
            let b = a + rng.gen_range(0.0..3.0);
            (a, b)
        })
        .collect();
    let region = BoxRegion::new(names.iter().zip(&sides).map(|(n, &(a, b))| (*n, Interval::new(a, b).unwrap()))).unwrap();
    (sides, region)
}

/// 8. Interval soundness and inclusion isotonicity.
fn interval_soundness(rng: &mut ChaCha8Rng) -> Verdict {
    let names = &NAMES[..3];
    let mut unsound = 0;
    for _ in 0..10_000 {
        let t = random_term(rng, names, 12);
        let (sides, region) = random_box(rng, names);
        let p = Point::from_pairs(names.iter().zip(&sides).map(|(n, &(a, b))| (*n, rng.gen_range(a..=b)))).unwrap();
        let enc = interval_eval(&t, &region).unwrap();
        if !enc.contains(t.eval(&p).unwrap()) {
            unsound += 1;
        }
    }
    let mut non_isotone = 0;
    for _ in 0..1_000 {
        let t = random_term(rng, names, 12);
        let (sides, outer) = random_box(rng, names);
        let inner_sides: Vec<(&str, Interval)> = names
            .iter()
            .zip(&sides)
            .map(|(n, &(a, b))| {
                let mut u = [rng.gen_range(a..=b), rng.gen_range(a..=b)];
                u.sort_by(f64::total_cmp);
                (*n, Interval::new(u[0], u[1]).unwrap())
            })
            .collect();
        let inner = BoxRegion::new(inner_sides).unwrap();
        let (o, i) = (interval_eval(&t, &outer).unwrap(), interval_eval(&t, &inner).unwrap());
        if !o.contains_interval(&i) {
            non_isotone += 1;
        }
    }
    verdict(
        unsound == 0 && non_isotone == 0,
        format!("10000 triples, {unsound} unsound; 1000 nested pairs, {non_isotone} not isotone"),
    )
}

/// 9. Batch output is byte-identical across runs.
fn determinism() -> Verdict {
    let script = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/regression.fbl");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_freebal"))
            .arg(&script)
            .output()
            .expect("run freebal")
    };
    let (a, b) = (run(), run());
    let text = std::fs::read_to_string(&script).unwrap();
    let (c, d) = (Session::default().run_script(&text), Session::default().run_script(&text));
    let same = a.stdout == b.stdout && c == d && a.stdout == c.output.as_bytes();
    let ok = same && a.status.success() && c.status == 0;
    verdict(
        ok,
        format!(
            "regression script: {} output lines, identical across 2 process runs and 2 in-process runs: {same}",
            c.output.lines().count()
        ),
    )
}

/// 10. `parse(print(t)) = t`.
fn parser_round_trip(rng: &mut ChaCha8Rng) -> Verdict {
    let mut failures = 0;
    let mut names = NAMES.to_vec();
    for _ in 0..1000 {
        names.shuffle(rng);
        let t = random_term(rng, &names[..3], 15);
        if parse_term(&t.to_string()).ok().as_ref() != Some(&t) {
            failures += 1;
        }
    }
    verdict(failures == 0, format!("1000 terms, {failures} failures"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(20261016);
    let contexts: Vec<Arc<WeightedSet>> = (0..50).map(|_| random_context(&mut rng, 4, 10.0)).collect();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("1 generator-norm law", Box::new(|_| generator_norm_law(&contexts))),
        ("2 truncation identity", Box::new(|_| truncation_identity(&contexts))),
        ("3 norm contraction", Box::new(norm_contraction)),
        ("4 grid oracle", Box::new(grid_oracle)),
        ("5 homomorphism laws", Box::new(ump_laws)),
        ("6 finite duality", Box::new(|_| finite_duality())),
        ("7 Yosida box", Box::new(yosida_box)),
        ("8 interval soundness", Box::new(interval_soundness)),
        ("9 determinism", Box::new(|_| determinism())),
        ("10 parser round trip", Box::new(parser_round_trip)),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let start = Instant::now();
        let v = criterion(&mut rng);
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {} [{:.2?}]", v.detail, start.elapsed());
        if !v.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
