//! Seeded numeric sampling, probabilistic zero testing and derivative checks.
//!
//! Sample values are a pure function of `(seed, index, symbol)`: every symbol
//! gets its own ChaCha8 stream keyed by a hash of its name, so a coordinate
//! takes the same value at a given index no matter which other symbols occur.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{eval, eval_with_scale, simplify, Assignment, EvalError, Expr, Symbol};
use crate::jet::{prolong_curve_to, total_derivative, Curve, JetSpace};

/// Name of the sampling scheme, recorded in reports.
pub const PRNG: &str = "chacha8/fnv1a-symbol-stream";

/// Relative tolerance of finite-difference checks.
pub const FD_TOL: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub fd_step: f64,
    pub lo: f64,
    pub hi: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 42,
            samples: 32,
            tol: 1e-8,
            fd_step: 1e-5,
            lo: -2.0,
            hi: 2.0,
        }
    }
}

impl OracleConfig {
    pub fn with_seed(&self, seed: u64) -> OracleConfig {
        OracleConfig {
            seed,
            ..self.clone()
        }
    }

    /// Independent configuration for a sub-computation labelled by `tags`.
    pub fn derive(&self, tags: &[u64]) -> OracleConfig {
        let mut s = splitmix(self.seed);
        for t in tags {
            s = splitmix(s ^ splitmix(*t));
        }
        self.with_seed(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::Space("oracle needs at least one sample".into()));
        }
        if !(self.tol > 0.0) || !(self.fd_step > 0.0) {
            return Err(Error::Space("tolerance and step must be positive".into()));
        }
        if !(self.lo <= self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::Space("sampling box is empty".into()));
        }
        Ok(())
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn symbol_key(s: &Symbol) -> u64 {
    let tag = match s {
        Symbol::Base(n) => format!("b:{n}"),
        Symbol::Jet { fiber, order } => format!("j:{fiber}:{order}"),
        Symbol::Param(n) => format!("p:{n}"),
    };
    fnv1a(tag.as_bytes())
}

/// Deterministic generator for `(seed, stream)`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix(seed));
    rng.set_stream(stream);
    rng
}

fn draw(cfg: &OracleConfig, s: &Symbol, index: u64) -> f64 {
    let mut rng = seeded_rng(cfg.seed ^ symbol_key(s), index);
    let u: f64 = rng.gen();
    cfg.lo + (cfg.hi - cfg.lo) * u
}

/// Sample `index` restricted to the given symbols.
pub fn sample_symbols<'a>(
    symbols: impl IntoIterator<Item = &'a Symbol>,
    cfg: &OracleConfig,
    index: u64,
) -> Assignment {
    symbols
        .into_iter()
        .map(|s| (s.clone(), draw(cfg, s, index)))
        .collect()
}

/// Sample `index` over every coordinate of `js` (base, jets up to `r`, parameters).
pub fn sample_point(js: &JetSpace, cfg: &OracleConfig, index: u64) -> Assignment {
    sample_symbols(&js.coordinates(js.order()), cfg, index)
}

/// How a zero verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Certainty {
    Symbolic,
    Probabilistic,
}

/// A sample point at which an expression is not zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub at: Assignment,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ZeroTest {
    Zero(Certainty),
    NonZero(Witness),
}

impl ZeroTest {
    pub fn passed(&self) -> bool {
        matches!(self, ZeroTest::Zero(_))
    }
}

fn is_domain(e: &EvalError) -> bool {
    matches!(e, EvalError::Domain { .. } | EvalError::NonFinite)
}

// Calls `f` on valid sample points until `cfg.samples` have been accepted.
fn for_valid_samples<T>(
    symbols: &[Symbol],
    cfg: &OracleConfig,
    mut f: impl FnMut(&Assignment) -> std::result::Result<Option<T>, EvalError>,
) -> Result<Option<T>> {
    let budget = cfg.samples.saturating_mul(10);
    let mut accepted = 0;
    let mut misses = 0;
    let mut index = 0u64;
    while accepted < cfg.samples {
        let a = sample_symbols(symbols, cfg, index);
        index += 1;
        match f(&a) {
            Ok(Some(found)) => return Ok(Some(found)),
            Ok(None) => {
                accepted += 1;
                misses = 0;
            }
            Err(e) if is_domain(&e) => {
                misses += 1;
                if misses >= budget {
                    return Err(Error::UnableToSample { attempts: misses });
                }
            }
            Err(e) => return Err(e.into()),
        }
    }
    Ok(None)
}

/// Simplifies `e`; a literal zero is symbolic, otherwise `e` must vanish at
/// `cfg.samples` valid points within `tol·(1 + largest subterm magnitude)`.
pub fn is_zero(e: &Expr, cfg: &OracleConfig) -> Result<ZeroTest> {
    let s = simplify(e);
    if s.is_zero() {
        return Ok(ZeroTest::Zero(Certainty::Symbolic));
    }
    let symbols: Vec<Symbol> = s.symbols().into_iter().collect();
    let found = for_valid_samples(&symbols, cfg, |a| {
        let (v, scale) = eval_with_scale(&s, a)?;
        if v.abs() <= cfg.tol * (1.0 + scale) {
            Ok(None)
        } else {
            Ok(Some(Witness {
                at: a.clone(),
                value: v,
            }))
        }
    })?;
    Ok(match found {
        Some(w) => ZeroTest::NonZero(w),
        None => ZeroTest::Zero(Certainty::Probabilistic),
    })
}

/// Outcome of a finite-difference comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdReport {
    pub pass: bool,
    pub max_rel_err: f64,
    pub worst: Option<Assignment>,
}

fn shifted(a: &Assignment, v: &Symbol, dv: f64) -> Assignment {
    let mut b = a.clone();
    b.set(v.clone(), a.get(v).unwrap_or(0.0) + dv);
    b
}

/// Compares `diff(e, v)` with a central difference of step `cfg.fd_step`.
pub fn fd_check(e: &Expr, v: &Symbol, cfg: &OracleConfig) -> Result<FdReport> {
    fd_check_with(e, v, &e.diff(v), cfg)
}

/// Compares a claimed partial derivative of `e` with respect to `v` against
/// a central difference.
pub fn fd_check_with(e: &Expr, v: &Symbol, claimed: &Expr, cfg: &OracleConfig) -> Result<FdReport> {
    let mut symbols = e.symbols();
    symbols.extend(claimed.symbols());
    symbols.insert(v.clone());
    let symbols: Vec<Symbol> = symbols.into_iter().collect();
    let h = cfg.fd_step;
    let mut report = FdReport {
        pass: true,
        max_rel_err: 0.0,
        worst: None,
    };
    for_valid_samples(&symbols, cfg, |a| {
        let d = eval(claimed, a)?;
        let fp = eval(e, &shifted(a, v, h))?;
        let fm = eval(e, &shifted(a, v, -h))?;
        let fd = (fp - fm) / (2.0 * h);
        let err = (fd - d).abs() / (1.0 + d.abs());
        if err > report.max_rel_err {
            report.max_rel_err = err;
            report.worst = Some(a.clone());
        }
        Ok(None::<()>)
    })?;
    report.pass = report.max_rel_err <= FD_TOL;
    Ok(report)
}

/// Checks `Dt e` along a curve against the numeric time derivative of `e`.
pub fn curve_consistency(
    e: &Expr,
    js: &JetSpace,
    c: &Curve,
    cfg: &OracleConfig,
) -> Result<FdReport> {
    curve_consistency_with(e, &total_derivative(e, js), js, c, cfg)
}

/// As [`curve_consistency`] with an explicitly supplied total derivative.
pub fn curve_consistency_with(
    e: &Expr,
    dt: &Expr,
    js: &JetSpace,
    c: &Curve,
    cfg: &OracleConfig,
) -> Result<FdReport> {
    let order = js.effective_order([e, dt]);
    let t = js.base_symbol();
    let params: Vec<Symbol> = e
        .symbols()
        .into_iter()
        .chain(dt.symbols())
        .filter(|s| matches!(s, Symbol::Param(_)))
        .collect();
    let mut symbols = params.clone();
    symbols.push(t.clone());
    let h = cfg.fd_step;
    let mut report = FdReport {
        pass: true,
        max_rel_err: 0.0,
        worst: None,
    };
    let at = |a: &Assignment, t0: f64| -> std::result::Result<Assignment, EvalError> {
        let mut p = match prolong_curve_to(c, js, order, t0) {
            Ok(p) => p,
            Err(Error::Eval(err)) => return Err(err),
            Err(_) => return Err(EvalError::NonFinite),
        };
        for s in &params {
            p.set(s.clone(), a.get(s).unwrap_or(0.0));
        }
        Ok(p)
    };
    for_valid_samples(&symbols, cfg, |a| {
        let t0 = a.get(&t).unwrap_or(0.0);
        let here = at(a, t0)?;
        let d = eval(dt, &here)?;
        let fp = eval(e, &at(a, t0 + h)?)?;
        let fm = eval(e, &at(a, t0 - h)?)?;
        let fd = (fp - fm) / (2.0 * h);
        let err = (fd - d).abs() / (1.0 + d.abs());
        if err > report.max_rel_err {
            report.max_rel_err = err;
            report.worst = Some(here);
        }
        Ok(None::<()>)
    })?;
    report.pass = report.max_rel_err <= FD_TOL;
    Ok(report)
}

/// Random polynomial with small integer coefficients over `symbols`.
pub fn random_polynomial(symbols: &[Symbol], max_degree: u32, terms: usize, seed: u64) -> Expr {
    let mut rng = seeded_rng(seed, 0x706f_6c79);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let mut c: i64 = rng.gen_range(-3..=3);
        if c == 0 {
            c = 1;
        }
        let degree = rng.gen_range(0..=max_degree);
        let mut factors = vec![Expr::int(c)];
        if !symbols.is_empty() {
            for _ in 0..degree {
                let s = &symbols[rng.gen_range(0..symbols.len())];
                factors.push(Expr::var(s.clone()));
            }
        }
        out.push(Expr::mul(factors));
    }
    Expr::add(out)
}
