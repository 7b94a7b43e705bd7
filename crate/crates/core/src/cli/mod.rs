//! Line-oriented script interpreter.
//!
//! One command per line; `#` starts a comment.
//!
//! ```text
//! wset NAME { x: W, ... }
//! let NAME : WSET = EXPR
//! norm WSET EXPR [--tol T] [--budget N]
//! eq WSET EXPR EXPR [--tol T] [--budget N]
//! eval WSET EXPR AT x=V, ...
//! hom NAME : WSET -> real { x: V, ... }
//! hom NAME : WSET -> rk K { x: V1 V2 .. VK, ... }
//! hom NAME : WSET -> WSET2 { x: EXPR, ... }
//! apply NAME EXPR
//! ffunctor WSET -> WSET2 { x: y, ... }
//! grid WSET EXPR RES FILE
//! atoms K
//! dualize { s, ... } -> { t, ... } { s: t, ... }
//! ```
//!
//! Identifiers in an expression resolve to generators of the named weighted
//! set first, then to elements bound with `let` in the same weighted set.

mod selfcheck;
mod syntax;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::basic::{self, FiniteBasicAlgebra, FiniteMap};
use crate::freealg::{Equality, FreeAlgError, FreeElement, Homomorphism, TargetValue};
use crate::interval::{BnBConfig, Enclosure, Status};
use crate::term::Term;
use crate::wset::{WSetMorphism, WeightedSet};

pub use selfcheck::{random_term, selfcheck, SelfCheckReport};
pub use syntax::{parse_term, Cursor, SyntaxError, Tok};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CommandError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("{0}")]
    Semantic(String),
    /// Budget exhausted where a definite answer was required; carries the
    /// output already produced for the command.
    #[error("budget exhausted before a definite answer")]
    Budget(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CommandError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CommandError::Syntax(_) => EXIT_SYNTAX,
            CommandError::Semantic(_) => EXIT_SEMANTIC,
            CommandError::Budget(_) => EXIT_BUDGET,
            CommandError::Io(_) => EXIT_IO,
        }
    }
}

impl From<FreeAlgError> for CommandError {
    fn from(e: FreeAlgError) -> Self {
        CommandError::Semantic(e.to_string())
    }
}

impl From<basic::BasicError> for CommandError {
    fn from(e: basic::BasicError) -> Self {
        CommandError::Semantic(e.to_string())
    }
}

impl From<crate::wset::WSetError> for CommandError {
    fn from(e: crate::wset::WSetError) -> Self {
        CommandError::Semantic(e.to_string())
    }
}

fn semantic(msg: impl Into<String>) -> CommandError {
    CommandError::Semantic(msg.into())
}

/// Formats a real with up to 17 significant digits in the style of `%.17g`:
/// trailing zeros dropped, lowercase exponent for very small or large
/// magnitudes, and `-0` printed as `0`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let trim = |s: &str| -> String {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s.to_string()
        }
    };
    if !(-4..17).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim(mantissa), exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim(&format!("{v:.decimals$}"))
    }
}

fn format_values(values: &[f64]) -> String {
    let parts: Vec<String> = values.iter().map(|&v| format_number(v)).collect();
    format!("({})", parts.join(", "))
}

fn format_enclosure(e: &Enclosure) -> String {
    let status = match e.status {
        Status::Converged => "converged",
        Status::BudgetExhausted => "budget_exhausted",
    };
    format!(
        "lo={} hi={} status={status} nodes={}",
        format_number(e.lo),
        format_number(e.hi),
        e.nodes_expanded
    )
}

/// Interpreter state: named weighted sets, elements and homomorphisms.
#[derive(Debug, Clone)]
pub struct Session {
    wsets: BTreeMap<String, Arc<WeightedSet>>,
    elements: BTreeMap<String, FreeElement>,
    homs: BTreeMap<String, Homomorphism>,
    config: BnBConfig,
    base_dir: Option<std::path::PathBuf>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(BnBConfig::default())
    }
}

/// Result of running a whole script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScriptOutcome {
    pub output: String,
    pub status: i32,
}

impl Session {
    pub fn new(config: BnBConfig) -> Self {
        Session {
            wsets: BTreeMap::new(),
            elements: BTreeMap::new(),
            homs: BTreeMap::new(),
            config,
            base_dir: None,
        }
    }

    /// Relative `grid` output paths are resolved against `dir`.
    pub fn with_base_dir(mut self, dir: impl Into<std::path::PathBuf>) -> Self {
        self.base_dir = Some(dir.into());
        self
    }

    pub fn config(&self) -> &BnBConfig {
        &self.config
    }

    pub fn wset(&self, name: &str) -> Option<&Arc<WeightedSet>> {
        self.wsets.get(name)
    }

    pub fn element(&self, name: &str) -> Option<&FreeElement> {
        self.elements.get(name)
    }

    pub fn hom(&self, name: &str) -> Option<&Homomorphism> {
        self.homs.get(name)
    }

    /// Runs a script in batch mode: stops at the first failing command.
    pub fn run_script(&mut self, script: &str) -> ScriptOutcome {
        let mut output = String::new();
        for (i, line) in script.lines().enumerate() {
            match self.run_line(line, i + 1) {
                Ok(text) => output.push_str(&text),
                Err(e) => {
                    if let CommandError::Budget(partial) = &e {
                        output.push_str(partial);
                    }
                    let _ = writeln!(output, "error (line {}): {}", i + 1, e);
                    return ScriptOutcome {
                        output,
                        status: e.exit_code(),
                    };
                }
            }
        }
        ScriptOutcome { output, status: EXIT_OK }
    }

    /// Runs one command; `line_no` is used in syntax error positions.
    /// Returns the text the command prints (each line newline-terminated).
    pub fn run_line(&mut self, line: &str, line_no: usize) -> Result<String, CommandError> {
        let mut cur = Cursor::at_line(line, line_no);
        let (head, at) = cur.next()?;
        let cmd = match head {
            Tok::End => return Ok(String::new()),
            Tok::Ident(s) => s,
            other => return Err(cur.error_at(at, format!("expected a command, found {other}")).into()),
        };
        match cmd.as_str() {
            "wset" => self.cmd_wset(&mut cur),
            "let" => self.cmd_let(&mut cur),
            "norm" => self.cmd_norm(&mut cur),
            "eq" => self.cmd_eq(&mut cur),
            "eval" => self.cmd_eval(&mut cur),
            "hom" => self.cmd_hom(&mut cur),
            "apply" => self.cmd_apply(&mut cur),
            "ffunctor" => self.cmd_ffunctor(&mut cur),
            "grid" => self.cmd_grid(&mut cur),
            "atoms" => cmd_atoms(&mut cur),
            "dualize" => cmd_dualize(&mut cur),
            other => Err(cur.error_at(at, format!("unknown command `{other}`")).into()),
        }
    }

    fn lookup_wset(&self, name: &str) -> Result<Arc<WeightedSet>, CommandError> {
        self.wsets
            .get(name)
            .cloned()
            .ok_or_else(|| semantic(format!("unknown weighted set `{name}`")))
    }

    /// Resolves identifiers of a parsed term in a context and admits it.
    fn resolve(&self, ctx: &Arc<WeightedSet>, term: &Term) -> Result<FreeElement, CommandError> {
        for name in term.free_generators() {
            if ctx.contains(&name) {
                continue;
            }
            match self.elements.get(&name) {
                Some(e) if e.context() == ctx => {}
                Some(_) => return Err(semantic(format!("`{name}` is bound in a different weighted set"))),
                None => return Err(semantic(format!("unknown identifier `{name}`"))),
            }
        }
        let expanded = term.substitute(&|name| {
            if ctx.contains(name) {
                None
            } else {
                self.elements.get(name).map(|e| e.term().clone())
            }
        });
        Ok(FreeElement::new(ctx.clone(), &expanded)?)
    }

    fn element_arg(&self, cur: &mut Cursor, ctx: &Arc<WeightedSet>) -> Result<FreeElement, CommandError> {
        let term = cur.expr()?;
        self.resolve(ctx, &term)
    }

    fn flags(&self, cur: &mut Cursor) -> Result<BnBConfig, CommandError> {
        let mut cfg = self.config;
        loop {
            match cur.next()? {
                (Tok::End, _) => return Ok(cfg),
                (Tok::Flag(f), at) if f == "tol" => {
                    let v = cur.signed_number()?;
                    if !(v > 0.0) {
                        return Err(cur.error_at(at, "--tol must be positive").into());
                    }
                    cfg.tol = v;
                }
                (Tok::Flag(f), at) if f == "budget" => {
                    let v = cur.signed_number()?;
                    if !(v >= 1.0 && v.fract() == 0.0) {
                        return Err(cur.error_at(at, "--budget must be a positive integer").into());
                    }
                    cfg.max_nodes = v as u64;
                }
                (tok, at) => return Err(cur.error_at(at, format!("unexpected {tok}")).into()),
            }
        }
    }

    fn cmd_wset(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let name = cur.ident()?;
        cur.expect_sym('{')?;
        let mut pairs = Vec::new();
        if !cur.eat('}')? {
            loop {
                let x = cur.ident()?;
                cur.expect_sym(':')?;
                pairs.push((x, cur.signed_number()?));
                if cur.eat('}')? {
                    break;
                }
                cur.expect_sym(',')?;
            }
        }
        cur.expect_end()?;
        if self.wsets.contains_key(&name) {
            return Err(semantic(format!("weighted set `{name}` already defined")));
        }
        let set = WeightedSet::from_pairs(&pairs)?;
        self.wsets.insert(name, Arc::new(set));
        Ok(String::new())
    }

    fn cmd_let(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let name = cur.ident()?;
        cur.expect_sym(':')?;
        let ctx = self.lookup_wset(&cur.ident()?)?;
        cur.expect_sym('=')?;
        let term = cur.expr()?;
        cur.expect_end()?;
        if self.elements.contains_key(&name) {
            return Err(semantic(format!("element `{name}` already defined")));
        }
        if ctx.contains(&name) {
            return Err(semantic(format!("`{name}` is a generator of the weighted set")));
        }
        let element = self.resolve(&ctx, &term)?;
        self.elements.insert(name, element);
        Ok(String::new())
    }

    fn cmd_norm(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let ctx = self.lookup_wset(&cur.ident()?)?;
        let a = self.element_arg(cur, &ctx)?;
        let cfg = self.flags(cur)?;
        let e = a.norm_enclosure(&cfg)?;
        let line = format!("norm {}\n", format_enclosure(&e));
        match e.status {
            Status::Converged => Ok(line),
            Status::BudgetExhausted => Err(CommandError::Budget(line)),
        }
    }

    fn cmd_eq(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let ctx = self.lookup_wset(&cur.ident()?)?;
        let a = self.element_arg(cur, &ctx)?;
        let b = self.element_arg(cur, &ctx)?;
        let cfg = self.flags(cur)?;
        match a.equals(&b, &cfg)? {
            Equality::Equal(_) => Ok("equal\n".into()),
            Equality::NotEqual { lo } => Ok(format!("notequal lo={}\n", format_number(lo))),
            Equality::Unknown(e) => Err(CommandError::Budget(format!(
                "unknown lo={} hi={}\n",
                format_number(e.lo),
                format_number(e.hi)
            ))),
        }
    }

    fn cmd_eval(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let ctx = self.lookup_wset(&cur.ident()?)?;
        let a = self.element_arg(cur, &ctx)?;
        match cur.next()? {
            (Tok::Ident(k), _) if k == "AT" => {}
            (tok, at) => return Err(cur.error_at(at, format!("expected `AT`, found {tok}")).into()),
        }
        let mut pairs: Vec<(String, f64)> = Vec::new();
        if cur.peek()? != &Tok::End {
            loop {
                let x = cur.ident()?;
                cur.expect_sym('=')?;
                let v = cur.signed_number()?;
                pairs.push((x, v));
                if !cur.eat(',')? {
                    break;
                }
            }
        }
        cur.expect_end()?;
        for (x, v) in &pairs {
            let w = ctx
                .weight(x)
                .ok_or_else(|| semantic(format!("`{x}` is not a generator of the weighted set")))?;
            if v.abs() > w {
                return Err(semantic(format!("point is outside the Yosida box at `{x}`")));
            }
        }
        let point = crate::term::Point::from_pairs(pairs).map_err(|e| semantic(e.to_string()))?;
        let v = a.eval(&point)?;
        Ok(format!("{}\n", format_number(v)))
    }

    fn cmd_hom(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let name = cur.ident()?;
        cur.expect_sym(':')?;
        let source = self.lookup_wset(&cur.ident()?)?;
        cur.expect_arrow()?;
        let kind = cur.ident()?;
        let hom = match kind.as_str() {
            "real" => {
                let pairs = braced_entries(cur, |c| Ok(c.signed_number()?))?;
                cur.expect_end()?;
                Homomorphism::into_reals(source, &pairs)?
            }
            "rk" => {
                let (k, at) = cur.next()?;
                let k = match k {
                    Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => v as usize,
                    tok => return Err(cur.error_at(at, format!("expected a dimension, found {tok}")).into()),
                };
                let pairs = braced_entries(cur, |c| {
                    let mut values = Vec::new();
                    while !matches!(c.peek()?, Tok::Sym(',') | Tok::Sym('}')) {
                        values.push(c.signed_number()?);
                    }
                    Ok(values)
                })?;
                cur.expect_end()?;
                Homomorphism::into_basic(source, FiniteBasicAlgebra::with_dim(k), &pairs)?
            }
            other => {
                let target = self.lookup_wset(other)?;
                let pairs = braced_entries(cur, |c| Ok(c.expr()?))?;
                cur.expect_end()?;
                Homomorphism::into_free(source, target, &pairs, &self.config)?
            }
        };
        if self.homs.contains_key(&name) {
            return Err(semantic(format!("homomorphism `{name}` already defined")));
        }
        self.homs.insert(name, hom);
        Ok(String::new())
    }

    fn cmd_apply(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let name = cur.ident()?;
        let hom = self
            .homs
            .get(&name)
            .ok_or_else(|| semantic(format!("unknown homomorphism `{name}`")))?;
        let a = self.element_arg(cur, &hom.source().clone())?;
        cur.expect_end()?;
        Ok(match hom.apply(&a)? {
            TargetValue::Real(v) => format!("{}\n", format_number(v)),
            TargetValue::Basic(b) => format!("{}\n", format_values(b.values())),
            TargetValue::Free(e) => format!("{e}\n"),
        })
    }

    fn cmd_ffunctor(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let source = self.lookup_wset(&cur.ident()?)?;
        cur.expect_arrow()?;
        let target = self.lookup_wset(&cur.ident()?)?;
        let pairs = braced_entries(cur, |c| Ok(c.ident()?))?;
        cur.expect_end()?;
        let phi = WSetMorphism::new(&source, &target, &pairs)?;
        let hom = Homomorphism::free_functor(&phi);
        let mut out = String::new();
        for x in source.names() {
            if let Some(TargetValue::Free(e)) = hom.image_of(x) {
                let _ = writeln!(out, "{x} -> {e}");
            }
        }
        Ok(out)
    }

    fn cmd_grid(&mut self, cur: &mut Cursor) -> Result<String, CommandError> {
        let ctx = self.lookup_wset(&cur.ident()?)?;
        let a = self.element_arg(cur, &ctx)?;
        let (res, at) = cur.next()?;
        let res = match res {
            Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => v as usize,
            tok => return Err(cur.error_at(at, format!("expected a resolution, found {tok}")).into()),
        };
        let file = cur.rest();
        if file.is_empty() {
            let at = line_len(cur);
            return Err(cur.error_at(at, "expected an output file").into());
        }
        let rows = a.sample_grid(res)?;
        let support = ctx.positive_support();
        let mut csv = String::new();
        for name in support.names() {
            let _ = write!(csv, "u_{name},");
        }
        csv.push_str("value\n");
        for (u, v) in &rows {
            for c in u {
                let _ = write!(csv, "{},", format_number(*c));
            }
            let _ = writeln!(csv, "{}", format_number(*v));
        }
        let path = match &self.base_dir {
            Some(dir) if Path::new(file).is_relative() => dir.join(file),
            _ => Path::new(file).to_path_buf(),
        };
        std::fs::write(&path, csv).map_err(|e| CommandError::Io(format!("{}: {e}", path.display())))?;
        Ok(format!("grid rows={} file={file}\n", rows.len()))
    }
}

fn line_len(cur: &mut Cursor) -> usize {
    cur.peek_offset().unwrap_or(0)
}

/// `{ key: VALUE, ... }` with a caller-supplied value parser.
fn braced_entries<T>(
    cur: &mut Cursor,
    mut value: impl FnMut(&mut Cursor) -> Result<T, CommandError>,
) -> Result<Vec<(String, T)>, CommandError> {
    cur.expect_sym('{')?;
    let mut out = Vec::new();
    if cur.eat('}')? {
        return Ok(out);
    }
    loop {
        let key = cur.ident()?;
        cur.expect_sym(':')?;
        out.push((key, value(cur)?));
        if cur.eat('}')? {
            return Ok(out);
        }
        cur.expect_sym(',')?;
    }
}

/// `{ a, b, ... }`
fn braced_names(cur: &mut Cursor) -> Result<Vec<String>, CommandError> {
    cur.expect_sym('{')?;
    let mut out = Vec::new();
    if cur.eat('}')? {
        return Ok(out);
    }
    loop {
        out.push(cur.ident()?);
        if cur.eat('}')? {
            return Ok(out);
        }
        cur.expect_sym(',')?;
    }
}

fn cmd_atoms(cur: &mut Cursor) -> Result<String, CommandError> {
    let (k, at) = cur.next()?;
    let k = match k {
        Tok::Number(v) if v >= 0.0 && v.fract() == 0.0 => v as usize,
        tok => return Err(cur.error_at(at, format!("expected a dimension, found {tok}")).into()),
    };
    cur.expect_end()?;
    let algebra = FiniteBasicAlgebra::with_dim(k);
    let mut out = String::new();
    for (name, atom) in algebra.atom_names().iter().zip(basic::atoms(&algebra)) {
        let _ = writeln!(out, "{name} = {}", format_values(atom.values()));
    }
    if k == 0 {
        out.push_str("no atoms\n");
    }
    Ok(out)
}

/// Runs the finite duality on `φ : S -> T`: prints `B(φ)`, recovers
/// `X(B(φ))` by the idempotent meet, and checks it against `φ` through `η`.
fn cmd_dualize(cur: &mut Cursor) -> Result<String, CommandError> {
    let domain = braced_names(cur)?;
    cur.expect_arrow()?;
    let codomain = braced_names(cur)?;
    let pairs = braced_entries(cur, |c| Ok(c.ident()?))?;
    cur.expect_end()?;
    let phi = FiniteMap::new(&domain, &codomain, &pairs)?;
    let b_phi = basic::functor_b(&phi);
    let x_b_phi = basic::functor_x(&b_phi)?;
    let eta_s = basic::eta_map(&domain)?.ok_or_else(|| semantic("eta is not a bijection onto the atoms"))?;
    let eta_t = basic::eta_map(&codomain)?.ok_or_else(|| semantic("eta is not a bijection onto the atoms"))?;
    // naturality: X(B(φ)) ∘ η_S = η_T ∘ φ
    let lhs = x_b_phi.compose(&eta_s);
    let rhs = eta_t.compose(&phi);

    let mut out = String::new();
    let render = |m: &FiniteMap| -> String {
        m.pairs().map(|(a, b)| format!("{a} -> {b}")).collect::<Vec<_>>().join(", ")
    };
    let sources: Vec<&str> = b_phi.atom_map().iter().map(|&i| codomain[i].as_str()).collect();
    let _ = writeln!(
        out,
        "B(phi): R^{} -> R^{} reindex [{}]",
        codomain.len(),
        domain.len(),
        sources.join(", ")
    );
    let _ = writeln!(out, "X(B(phi)): {}", render(&x_b_phi));
    let algebra = basic::algebra_of(&domain)?;
    let chis = basic::eta(&domain)?;
    let etas: Vec<String> = domain
        .iter()
        .zip(&chis)
        .map(|(s, chi)| format!("{s} -> {}", format_values(chi.values())))
        .collect();
    let _ = writeln!(out, "eta: {}", etas.join(", "));
    let theta = basic::theta(&algebra);
    let probe = algebra.element((1..=domain.len()).map(|i| i as f64).collect())?;
    let theta_ok = theta.inverse(&theta.apply(&probe)?)? == probe;
    if lhs.is_some() && lhs == rhs && theta_ok {
        out.push_str("duality ok\n");
        Ok(out)
    } else {
        Err(semantic(format!("{out}duality check failed")))
    }
}
