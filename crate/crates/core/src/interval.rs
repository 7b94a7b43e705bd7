//! Certified range analysis over terms.
//!
//! Interval arithmetic rounds outward by one ulp whenever `+` or `*` is
//! inexact, detected with error-free transforms; negation, `max` and `min`
//! are exact. The branch-and-bound search bounds each subbox by the
//! intersection of the naive interval extension with a mean-value form built
//! from interval gradients, and takes certified lower bounds at subbox
//! midpoints and at the corner the gradient signs point to.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::term::{Point, Term};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("generator `{0}` is not a coordinate of the box")]
    MissingGenerator(String),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
}

fn down(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v.next_down()
    }
}

fn up(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v.next_up()
    }
}

/// Bounds on the exact sum `a + b`: the rounded sum when TwoSum shows it is
/// exact, otherwise widened by one ulp on the side of the rounding error.
fn sum_bounds(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    if !(s.is_finite() && a.is_finite() && b.is_finite()) {
        return (down(s), up(s));
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    directed(s, err)
}

/// Bounds on the exact product `a * b`, using the FMA residual. Near the
/// subnormal range the residual itself may round, so both sides widen.
fn product_bounds(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    if !(p.is_finite() && a.is_finite() && b.is_finite()) || p.abs() < 1e-280 {
        return (down(p), up(p));
    }
    directed(p, a.mul_add(b, -p))
}

fn directed(v: f64, err: f64) -> (f64, f64) {
    if err > 0.0 {
        (v, up(v))
    } else if err < 0.0 {
        (down(v), v)
    } else {
        (v, v)
    }
}

/// Closed interval `[lo, hi]`. Infinite endpoints only arise from overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    /// Returns `None` unless `lo <= hi` and neither is NaN.
    pub fn new(lo: f64, hi: f64) -> Option<Interval> {
        (lo <= hi).then_some(Interval { lo, hi })
    }

    pub fn point(v: f64) -> Interval {
        Interval { lo: v, hi: v }
    }

    // NaN endpoints widen to the whole line.
    fn widened(lo: f64, hi: f64) -> Interval {
        Interval {
            lo: if lo.is_nan() { f64::NEG_INFINITY } else { lo },
            hi: if hi.is_nan() { f64::INFINITY } else { hi },
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn add(self, o: Interval) -> Interval {
        Interval::widened(sum_bounds(self.lo, o.lo).0, sum_bounds(self.hi, o.hi).1)
    }

    pub fn sub(self, o: Interval) -> Interval {
        self.add(o.neg())
    }

    pub fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn mul(self, o: Interval) -> Interval {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for a in [self.lo, self.hi] {
            for b in [o.lo, o.hi] {
                // 0 * inf is taken as the exact 0
                let (l, h) = if a == 0.0 || b == 0.0 {
                    (0.0, 0.0)
                } else {
                    product_bounds(a, b)
                };
                lo = lo.min(l);
                hi = hi.max(h);
            }
        }
        Interval::widened(lo, hi)
    }

    pub fn max(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo.max(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    pub fn min(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.min(o.hi),
        }
    }

    pub fn hull(self, o: Interval) -> Interval {
        Interval {
            lo: self.lo.min(o.lo),
            hi: self.hi.max(o.hi),
        }
    }

    /// `{ |v| : v in self }`, exactly.
    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    /// Largest absolute value in the interval.
    pub fn magnitude(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    fn intersect_or(self, o: Interval) -> Interval {
        let lo = self.lo.max(o.lo);
        let hi = self.hi.min(o.hi);
        if lo <= hi {
            Interval { lo, hi }
        } else {
            self
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Axis-aligned box: an ordered list of named, nonempty intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxRegion {
    names: Vec<String>,
    intervals: Vec<Interval>,
}

impl BoxRegion {
    pub fn new<S: Into<String>>(coords: impl IntoIterator<Item = (S, Interval)>) -> Result<BoxRegion, IntervalError> {
        let mut names: Vec<String> = Vec::new();
        let mut intervals = Vec::new();
        for (name, iv) in coords {
            let name = name.into();
            if names.contains(&name) {
                return Err(IntervalError::InvalidBox(format!("duplicate coordinate `{name}`")));
            }
            if !(iv.lo <= iv.hi) {
                return Err(IntervalError::InvalidBox(format!("empty interval for `{name}`")));
            }
            names.push(name);
            intervals.push(iv);
        }
        Ok(BoxRegion { names, intervals })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn dims(&self) -> usize {
        self.names.len()
    }

    pub fn get(&self, name: &str) -> Option<Interval> {
        self.names.iter().position(|n| n == name).map(|i| self.intervals[i])
    }

    pub fn midpoint(&self) -> Point {
        Point::from_pairs(self.names.iter().cloned().zip(self.intervals.iter().map(Interval::midpoint)))
            .expect("box coordinates are distinct")
    }

    /// Whether every coordinate of the box is assigned by `p` and lies in its interval.
    pub fn contains(&self, p: &Point) -> bool {
        self.names
            .iter()
            .zip(&self.intervals)
            .all(|(n, iv)| p.get(n).is_some_and(|v| iv.contains(v)))
    }

    pub fn contains_box(&self, other: &BoxRegion) -> bool {
        self.names == other.names
            && self
                .intervals
                .iter()
                .zip(&other.intervals)
                .all(|(a, b)| a.contains_interval(b))
    }

    /// Restriction to the named coordinates, in this box's order.
    pub fn project(&self, keep: &[String]) -> BoxRegion {
        let (names, intervals) = self
            .names
            .iter()
            .zip(&self.intervals)
            .filter(|(n, _)| keep.contains(n))
            .map(|(n, iv)| (n.clone(), *iv))
            .unzip();
        BoxRegion { names, intervals }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Const(u64),
    Var(usize),
    Add(usize, usize),
    Neg(usize),
    Mul(usize, usize),
    Max(usize, usize),
    Min(usize, usize),
    Abs(usize),
}

/// A term compiled to straight-line code over box coordinates, with common
/// subexpressions shared. Operands of commutative operations are ordered.
#[derive(Debug, Clone)]
pub struct Tape {
    ops: Vec<Op>,
    dims: usize,
}

struct TapeBuilder<'a> {
    ops: Vec<Op>,
    index: HashMap<Op, usize>,
    coords: &'a [String],
    rewrite: bool,
}

impl TapeBuilder<'_> {
    fn push(&mut self, op: Op) -> usize {
        if let Some(&slot) = self.index.get(&op) {
            return slot;
        }
        self.ops.push(op);
        self.index.insert(op, self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn binary(&mut self, make: fn(usize, usize) -> Op, a: usize, b: usize) -> usize {
        self.push(make(a.min(b), a.max(b)))
    }

    /// `Some(s)` when the slots are `s` and `-s`, under `rewrite`.
    fn negation_pair(&self, a: usize, b: usize) -> Option<usize> {
        if !self.rewrite {
            None
        } else if self.ops[a] == Op::Neg(b) {
            Some(b)
        } else if self.ops[b] == Op::Neg(a) {
            Some(a)
        } else {
            None
        }
    }

    fn lower(&mut self, t: &Term) -> Result<usize, IntervalError> {
        Ok(match t {
            Term::Const(c) => {
                let c = if *c == 0.0 { 0.0 } else { *c };
                self.push(Op::Const(c.to_bits()))
            }
            Term::Gen(name) => {
                let i = self
                    .coords
                    .iter()
                    .position(|n| n == name)
                    .ok_or_else(|| IntervalError::MissingGenerator(name.clone()))?;
                self.push(Op::Var(i))
            }
            Term::Neg(a) => {
                let a = self.lower(a)?;
                match self.ops[a] {
                    Op::Neg(inner) if self.rewrite => inner,
                    _ => self.push(Op::Neg(a)),
                }
            }
            Term::Add(a, b) => {
                let (a, b) = (self.lower(a)?, self.lower(b)?);
                if self.rewrite && (self.ops[a] == Op::Neg(b) || self.ops[b] == Op::Neg(a)) {
                    // s + (-s) is exactly 0 over the reals
                    self.push(Op::Const(0.0f64.to_bits()))
                } else {
                    self.binary(Op::Add, a, b)
                }
            }
            Term::Mul(a, b) => {
                let (a, b) = (self.lower(a)?, self.lower(b)?);
                self.binary(Op::Mul, a, b)
            }
            Term::Join(a, b) => {
                let (a, b) = (self.lower(a)?, self.lower(b)?);
                if self.rewrite && a == b {
                    a
                } else if let Some(s) = self.negation_pair(a, b) {
                    self.push(Op::Abs(s))
                } else {
                    self.binary(Op::Max, a, b)
                }
            }
            Term::Meet(a, b) => {
                let (a, b) = (self.lower(a)?, self.lower(b)?);
                if self.rewrite && a == b {
                    a
                } else if let Some(s) = self.negation_pair(a, b) {
                    let abs = self.push(Op::Abs(s));
                    self.push(Op::Neg(abs))
                } else {
                    self.binary(Op::Min, a, b)
                }
            }
        })
    }
}

impl Tape {
    /// Compiles `t` over the coordinate list `coords`. With `rewrite`, exact
    /// real identities (`--s = s`, `s + -s = 0`, `s ∨ s = s ∧ s = s`,
    /// `s ∨ -s = |s|`, `s ∧ -s = -|s|`) are applied to shared slots.
    pub fn compile(t: &Term, coords: &[String], rewrite: bool) -> Result<Tape, IntervalError> {
        let mut builder = TapeBuilder {
            ops: Vec::new(),
            index: HashMap::new(),
            coords,
            rewrite,
        };
        let root = builder.lower(t)?;
        let mut ops = builder.ops;
        // the root is always the last slot
        if root + 1 != ops.len() {
            ops.push(ops[root]);
        }
        Ok(Tape { ops, dims: coords.len() })
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Naive interval extension.
    pub fn eval(&self, coords: &[Interval], scratch: &mut Vec<Interval>) -> Interval {
        scratch.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Const(bits) => Interval::point(f64::from_bits(bits)),
                Op::Var(i) => coords[i],
                Op::Add(a, b) => scratch[a].add(scratch[b]),
                Op::Neg(a) => scratch[a].neg(),
                Op::Mul(a, b) => scratch[a].mul(scratch[b]),
                Op::Max(a, b) => scratch[a].max(scratch[b]),
                Op::Min(a, b) => scratch[a].min(scratch[b]),
                Op::Abs(a) => scratch[a].abs(),
            };
            scratch.push(v);
        }
        *scratch.last().expect("tape is never empty")
    }

    /// Value and gradient enclosures over the box. Join and meet take the
    /// gradient of the active branch when one branch dominates on the whole
    /// box and the hull of both gradients otherwise.
    fn eval_with_gradient(&self, coords: &[Interval], vals: &mut Vec<Interval>, grads: &mut Vec<Interval>) {
        let d = self.dims;
        vals.clear();
        grads.clear();
        for op in &self.ops {
            let base = grads.len();
            let v = match *op {
                Op::Const(bits) => {
                    grads.extend(std::iter::repeat_n(Interval::ZERO, d));
                    Interval::point(f64::from_bits(bits))
                }
                Op::Var(i) => {
                    grads.extend((0..d).map(|k| Interval::point(if k == i { 1.0 } else { 0.0 })));
                    coords[i]
                }
                Op::Add(a, b) => {
                    for k in 0..d {
                        let g = grads[a * d + k].add(grads[b * d + k]);
                        grads.push(g);
                    }
                    vals[a].add(vals[b])
                }
                Op::Neg(a) => {
                    for k in 0..d {
                        let g = grads[a * d + k].neg();
                        grads.push(g);
                    }
                    vals[a].neg()
                }
                Op::Mul(a, b) => {
                    let (va, vb) = (vals[a], vals[b]);
                    for k in 0..d {
                        let g = grads[a * d + k].mul(vb).add(va.mul(grads[b * d + k]));
                        grads.push(g);
                    }
                    va.mul(vb)
                }
                Op::Abs(a) => {
                    let va = vals[a];
                    for k in 0..d {
                        let g = grads[a * d + k];
                        grads.push(if va.lo >= 0.0 {
                            g
                        } else if va.hi <= 0.0 {
                            g.neg()
                        } else {
                            g.hull(g.neg())
                        });
                    }
                    va.abs()
                }
                Op::Max(a, b) | Op::Min(a, b) => {
                    let (va, vb) = (vals[a], vals[b]);
                    let is_max = matches!(op, Op::Max(..));
                    let (a_wins, b_wins) = if is_max {
                        (va.lo >= vb.hi, vb.lo >= va.hi)
                    } else {
                        (va.hi <= vb.lo, vb.hi <= va.lo)
                    };
                    for k in 0..d {
                        let g = if a_wins {
                            grads[a * d + k]
                        } else if b_wins {
                            grads[b * d + k]
                        } else {
                            grads[a * d + k].hull(grads[b * d + k])
                        };
                        grads.push(g);
                    }
                    if is_max {
                        va.max(vb)
                    } else {
                        va.min(vb)
                    }
                }
            };
            debug_assert_eq!(grads.len(), base + d);
            vals.push(v);
        }
    }

    fn root_gradient<'g>(&self, grads: &'g [Interval]) -> &'g [Interval] {
        &grads[grads.len() - self.dims..]
    }
}

/// Scratch buffers for repeated bounding on one tape.
struct Bounder<'t> {
    tape: &'t Tape,
    vals: Vec<Interval>,
    grads: Vec<Interval>,
    scratch: Vec<Interval>,
    center: Vec<Interval>,
}

impl<'t> Bounder<'t> {
    fn new(tape: &'t Tape) -> Self {
        Bounder {
            tape,
            vals: Vec::new(),
            grads: Vec::new(),
            scratch: Vec::new(),
            center: Vec::new(),
        }
    }

    fn point(&mut self, coords: &[Interval]) -> Interval {
        self.center.clear();
        self.center.extend(coords.iter().map(|iv| Interval::point(iv.midpoint())));
        self.tape.eval(&self.center, &mut self.scratch)
    }

    /// Naive extension intersected with the mean-value form about the midpoint.
    fn range(&mut self, coords: &[Interval]) -> Interval {
        self.tape.eval_with_gradient(coords, &mut self.vals, &mut self.grads);
        let naive = *self.vals.last().expect("tape is never empty");
        let at_center = self.point(coords);
        let mut mean_value = at_center;
        for (k, g) in self.tape.root_gradient(&self.grads).iter().enumerate() {
            let offset = coords[k].sub(self.center[k]);
            mean_value = mean_value.add(g.mul(offset));
        }
        naive.intersect_or(mean_value)
    }

    /// Range enclosure plus a lower bound on the maximum, taken from the
    /// midpoint and from the corner the gradient signs point to.
    fn bounds(&mut self, coords: &[Interval]) -> (Interval, f64) {
        let range = self.range(coords);
        let mut lower = self.tape.eval(&self.center, &mut self.scratch).lo;
        let grad = self.tape.root_gradient(&self.grads);
        if grad.iter().any(|g| g.lo > 0.0 || g.hi < 0.0) {
            for (k, g) in grad.iter().enumerate() {
                if g.lo > 0.0 {
                    self.center[k] = Interval::point(coords[k].hi);
                } else if g.hi < 0.0 {
                    self.center[k] = Interval::point(coords[k].lo);
                }
            }
            lower = lower.max(self.tape.eval(&self.center, &mut self.scratch).lo);
        }
        (range, lower)
    }
}

/// Sound enclosure of `{ t(p) : p in region }` by the naive interval extension.
pub fn interval_eval(t: &Term, region: &BoxRegion) -> Result<Interval, IntervalError> {
    let tape = Tape::compile(t, region.names(), false)?;
    Ok(tape.eval(region.intervals(), &mut Vec::new()))
}

/// Certified enclosure of the exact real value `t(p)`.
pub fn point_bound(t: &Term, p: &Point) -> Result<Interval, IntervalError> {
    let tape = Tape::compile(t, p.names(), false)?;
    let coords: Vec<Interval> = p.values().iter().copied().map(Interval::point).collect();
    Ok(tape.eval(&coords, &mut Vec::new()))
}

/// Per-coordinate bounds on `|∂t/∂x_i|` over the box, from interval
/// gradients. `|t(p) - t(q)| <= Σ_i L_i |p_i - q_i|` inside the box.
pub fn gradient_bounds(t: &Term, region: &BoxRegion) -> Result<Vec<f64>, IntervalError> {
    let tape = Tape::compile(t, region.names(), true)?;
    let (mut vals, mut grads) = (Vec::new(), Vec::new());
    tape.eval_with_gradient(region.intervals(), &mut vals, &mut grads);
    Ok(tape.root_gradient(&grads).iter().map(Interval::magnitude).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Branching {
    #[default]
    WidestDimension,
    RoundRobin,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BnBConfig {
    pub tol: f64,
    pub max_nodes: u64,
    pub branching: Branching,
}

impl Default for BnBConfig {
    fn default() -> Self {
        BnBConfig {
            tol: 1e-9,
            max_nodes: 1_000_000,
            branching: Branching::WidestDimension,
        }
    }
}

impl BnBConfig {
    pub fn with_tol(tol: f64) -> Self {
        BnBConfig {
            tol,
            ..Default::default()
        }
    }

    fn check(&self) -> Result<(), IntervalError> {
        if self.tol > 0.0 && self.tol.is_finite() {
            Ok(())
        } else {
            Err(IntervalError::InvalidTolerance)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    /// Node budget reached, or no subbox could be split further.
    BudgetExhausted,
}

/// Certified two-sided bound on an extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
    pub status: Status,
    pub nodes_expanded: u64,
}

impl Enclosure {
    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn gap(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_converged(&self) -> bool {
        self.status == Status::Converged
    }
}

/// When the search may stop.
#[derive(Debug, Clone, Copy)]
pub(crate) enum StopRule {
    /// `hi - lo <= tol`
    Gap(f64),
    /// the maximum is decided against a threshold: `hi <= tol` or `lo > tol`
    Threshold(f64),
}

struct Node {
    ub: f64,
    depth: u32,
    coords: Vec<Interval>,
}

impl Node {
    fn coord_cmp(&self, other: &Node) -> Ordering {
        for (a, b) in self.coords.iter().zip(&other.coords) {
            let c = a.lo.total_cmp(&b.lo).then(a.hi.total_cmp(&b.hi));
            if c != Ordering::Equal {
                return c;
            }
        }
        Ordering::Equal
    }
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // larger upper bound first; ties go to the lexicographically smaller box
    fn cmp(&self, other: &Self) -> Ordering {
        self.ub
            .total_cmp(&other.ub)
            .then_with(|| other.coord_cmp(self))
    }
}

fn split_dimension(node: &Node, branching: Branching) -> Option<usize> {
    let splittable = |iv: &Interval| {
        let m = iv.midpoint();
        iv.lo < m && m < iv.hi
    };
    let d = node.coords.len();
    match branching {
        Branching::WidestDimension => {
            let mut best: Option<(usize, f64)> = None;
            for (k, iv) in node.coords.iter().enumerate() {
                if splittable(iv) && best.is_none_or(|(_, w)| iv.width() > w) {
                    best = Some((k, iv.width()));
                }
            }
            best.map(|(k, _)| k)
        }
        Branching::RoundRobin => (0..d)
            .map(|off| (node.depth as usize + off) % d)
            .find(|&k| splittable(&node.coords[k])),
    }
}

/// Best-first maximization of a compiled tape over a box.
pub(crate) fn search_max(tape: &Tape, root: Vec<Interval>, cfg: &BnBConfig, stop: StopRule) -> Enclosure {
    let mut bounder = Bounder::new(tape);
    let (root_range, mut lo) = bounder.bounds(&root);
    let root_ub = root_range.hi;
    let mut heap = BinaryHeap::new();
    if root_ub > lo {
        heap.push(Node {
            ub: root_ub,
            depth: 0,
            coords: root,
        });
    }
    let mut leaf_hi = f64::NEG_INFINITY;
    let mut nodes: u64 = 0;
    loop {
        while heap.peek().is_some_and(|n: &Node| n.ub <= lo) {
            heap.pop();
        }
        let hi = heap.peek().map_or(lo, |n| n.ub.max(lo)).max(leaf_hi);
        let done = match stop {
            StopRule::Gap(tol) => hi - lo <= tol,
            StopRule::Threshold(tol) => hi <= tol || lo > tol,
        };
        let finish = |status| Enclosure {
            lo,
            hi,
            status,
            nodes_expanded: nodes,
        };
        if done {
            return finish(Status::Converged);
        }
        if heap.is_empty() || nodes >= cfg.max_nodes {
            return finish(Status::BudgetExhausted);
        }
        let node = heap.pop().expect("checked nonempty");
        let Some(k) = split_dimension(&node, cfg.branching) else {
            leaf_hi = leaf_hi.max(node.ub);
            continue;
        };
        nodes += 1;
        let mid = node.coords[k].midpoint();
        let mut left = node.coords.clone();
        left[k].hi = mid;
        let mut right = node.coords;
        right[k].lo = mid;
        for coords in [left, right] {
            let (range, lower) = bounder.bounds(&coords);
            let ub = range.hi;
            lo = lo.max(lower);
            if ub > lo {
                heap.push(Node {
                    ub,
                    depth: node.depth + 1,
                    coords,
                });
            }
        }
    }
}

/// Compiles `t` over the coordinates it actually uses; the extremum over the
/// remaining coordinates is the same.
fn prepare(t: &Term, region: &BoxRegion) -> Result<(Tape, Vec<Interval>), IntervalError> {
    let used = t.free_generators();
    if let Some(missing) = used.iter().find(|g| region.get(g).is_none()) {
        return Err(IntervalError::MissingGenerator(missing.clone()));
    }
    let sub = region.project(&used);
    let tape = Tape::compile(t, sub.names(), true)?;
    Ok((tape, sub.intervals().to_vec()))
}

pub(crate) fn bnb_max_with(t: &Term, region: &BoxRegion, cfg: &BnBConfig, stop: StopRule) -> Result<Enclosure, IntervalError> {
    cfg.check()?;
    let (tape, root) = prepare(t, region)?;
    Ok(search_max(&tape, root, cfg, stop))
}

/// Enclosure of `max_{p in box} t(p)`.
pub fn bnb_max(t: &Term, region: &BoxRegion, cfg: &BnBConfig) -> Result<Enclosure, IntervalError> {
    bnb_max_with(t, region, cfg, StopRule::Gap(cfg.tol))
}

/// Enclosure of `min_{p in box} t(p)`, computed as `-max(-t)`.
pub fn bnb_min(t: &Term, region: &BoxRegion, cfg: &BnBConfig) -> Result<Enclosure, IntervalError> {
    let e = bnb_max(&Term::neg(t.clone()), region, cfg)?;
    Ok(Enclosure {
        lo: -e.hi,
        hi: -e.lo,
        ..e
    })
}

pub(crate) fn bnb_sup_abs_with(t: &Term, region: &BoxRegion, cfg: &BnBConfig, stop: StopRule) -> Result<Enclosure, IntervalError> {
    let e = bnb_max_with(&Term::abs(t.clone()), region, cfg, stop)?;
    let lo = e.lo.max(0.0);
    Ok(Enclosure {
        lo,
        hi: e.hi.max(lo),
        ..e
    })
}

/// Enclosure of `sup_{p in box} |t(p)|`.
pub fn bnb_sup_abs(t: &Term, region: &BoxRegion, cfg: &BnBConfig) -> Result<Enclosure, IntervalError> {
    bnb_sup_abs_with(t, region, cfg, StopRule::Gap(cfg.tol))
}
