//! Command implementations shared by the binary and the tests.

use std::fmt::Write;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use varsub_core::embedding::{
    self, catalog_embedding, force_condition, induce_source_form, is_variational_submanifold,
    one_dim_condition, Embedding, ImmersionCheck,
};
use varsub_core::expr::{Expr, ParseError};
use varsub_core::jet::JetSpace;
use varsub_core::oracle::{is_zero, Certainty, OracleConfig};
use varsub_core::topology::{self, global_status, GlobalStatus, TopologyInfo};
use varsub_core::variational::{
    euler_lagrange, helmholtz, is_null_lagrangian, linear_accel_decompose, HelmholtzReport,
    Lagrangian, SourceForm,
};

use crate::problem::{EmbeddingDef, Equations, FormatError, ProblemFile};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_DISAGREE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("in `{key}`: {source}")]
    Expression { key: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] varsub_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(varsub_core::Error::RouteDisagreement(_)) => EXIT_DISAGREE,
            _ => EXIT_ERROR,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Helmholtz,
    El,
    Induce,
    Check,
}

/// Command-line overrides of the `[oracle]` section.
#[derive(Clone, Debug, Default)]
pub struct Options {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub check: bool,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
}

fn parse_in(js: &JetSpace, key: &str, text: &str) -> Result<Expr> {
    js.parse(text).map_err(|e| match e {
        varsub_core::Error::Parse(source) => CliError::Expression {
            key: key.into(),
            source,
        },
        other => other.into(),
    })
}

/// A problem file resolved against the core types.
pub struct Problem {
    pub file: ProblemFile,
    pub space: JetSpace,
}

impl Problem {
    pub fn new(file: ProblemFile) -> Result<Problem> {
        let s = &file.system;
        let fibers: Vec<&str> = s.fibers.iter().map(String::as_str).collect();
        let params: Vec<&str> = s.parameters.iter().map(String::as_str).collect();
        let space = JetSpace::with_params(&s.base, &fibers, s.order, &params)?;
        Ok(Problem { file, space })
    }

    pub fn load(path: &str) -> Result<Problem> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        Problem::new(ProblemFile::parse(&text)?)
    }

    pub fn oracle(&self, opts: &Options) -> Result<OracleConfig> {
        let mut cfg = OracleConfig::default();
        if let Some(o) = &self.file.oracle {
            cfg.seed = o.seed.unwrap_or(cfg.seed);
            cfg.samples = o.samples.unwrap_or(cfg.samples);
            cfg.tol = o.tol.unwrap_or(cfg.tol);
            cfg.fd_step = o.fd_step.unwrap_or(cfg.fd_step);
            if let Some((lo, hi)) = o.bounds {
                cfg.lo = lo;
                cfg.hi = hi;
            }
        }
        cfg.seed = opts.seed.unwrap_or(cfg.seed);
        cfg.samples = opts.samples.unwrap_or(cfg.samples);
        cfg.tol = opts.tol.unwrap_or(cfg.tol);
        cfg.validate()?;
        Ok(cfg)
    }

    /// The system as a source form; forces `F` become `ẍ - F`.
    pub fn source_form(&self) -> Result<SourceForm> {
        match &self.file.system.equations {
            Equations::Eps(eps) => {
                let comps = eps
                    .iter()
                    .map(|(n, t)| parse_in(&self.space, &format!("eps.{n}"), t))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SourceForm::new(self.space.clone(), comps)?)
            }
            Equations::Forces(_) => {
                let js = self.space.with_order(self.space.order().max(2));
                let comps = self
                    .forces()?
                    .into_iter()
                    .enumerate()
                    .map(|(s, f)| js.coord(s, 2) - f)
                    .collect();
                Ok(SourceForm::new(js, comps)?)
            }
            Equations::Lagrangian(_) => Err(CliError::Usage(
                "this command needs `eps.*` or `force.*` in [system], found `lagrangian`".into(),
            )),
        }
    }

    pub fn forces(&self) -> Result<Vec<Expr>> {
        let Equations::Forces(forces) = &self.file.system.equations else {
            return Ok(Vec::new());
        };
        forces
            .iter()
            .map(|(n, t)| parse_in(&self.space, &format!("force.{n}"), t))
            .collect()
    }

    pub fn lagrangian(&self) -> Result<Lagrangian> {
        let Equations::Lagrangian(text) = &self.file.system.equations else {
            return Err(CliError::Usage("this command needs `lagrangian` in [system]".into()));
        };
        let expr = parse_in(&self.space, "lagrangian", text)?;
        Ok(Lagrangian::new(self.space.clone(), expr)?)
    }

    pub fn embedding(&self) -> Result<Embedding> {
        let Some(emb) = &self.file.embedding else {
            return Err(CliError::Usage("this command needs an [embedding] section".into()));
        };
        let target = self.space.with_order(self.space.order().max(2));
        match &emb.def {
            EmbeddingDef::Catalog(entry) => {
                let names = (!emb.params.is_empty()).then_some(emb.params.as_slice());
                Ok(catalog_embedding(entry, &target, names)?)
            }
            EmbeddingDef::Map(maps) => {
                let names: Vec<&str> = emb.params.iter().map(String::as_str).collect();
                let params: Vec<&str> = self.space.params().iter().map(String::as_str).collect();
                let source = JetSpace::with_params(self.space.base(), &names, 2, &params)?;
                let comps = maps
                    .iter()
                    .map(|(n, t)| parse_in(&source, &format!("map.{n}"), t))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Embedding::new(source, target, comps)?)
            }
        }
    }

    /// Topology of the constraint manifold: the section if present, otherwise
    /// inferred from a catalog embedding.
    pub fn topology(&self) -> TopologyInfo {
        if let Some(t) = &self.file.topology {
            let name = t.name.clone().unwrap_or_else(|| "user".into());
            if t.betti1.is_some() || t.betti2.is_some() {
                return TopologyInfo::new(&name, t.betti1, t.betti2);
            }
            return TopologyInfo::lookup(&name).unwrap_or_else(|| TopologyInfo::unknown(&name));
        }
        let Some(emb) = &self.file.embedding else {
            return TopologyInfo::unknown("unspecified");
        };
        let EmbeddingDef::Catalog(entry) = &emb.def else {
            return TopologyInfo::unknown("embedded submanifold");
        };
        let mut words = entry.split_whitespace();
        match words.next() {
            Some("circle") => TopologyInfo::lookup("S1"),
            Some("sphere") => TopologyInfo::lookup("S2"),
            Some("mobius") => TopologyInfo::lookup("mobius"),
            Some("slice") => words
                .next()
                .and_then(|n| TopologyInfo::lookup(&format!("R^{n}"))),
            _ => None,
        }
        .unwrap_or_else(|| TopologyInfo::unknown(entry))
    }

    /// Topology of the ambient space for commands without an embedding.
    fn ambient_topology(&self) -> TopologyInfo {
        match (&self.file.topology, &self.file.embedding) {
            (Some(_), None) => self.topology(),
            _ => TopologyInfo::lookup(&format!("R^{}", self.space.dim())).unwrap(),
        }
    }
}

fn certification(r: &HelmholtzReport) -> &'static str {
    match r.certification {
        Some(Certainty::Symbolic) => "symbolic",
        Some(Certainty::Probabilistic) => "probabilistic",
        None => "counterexample",
    }
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

fn render_report(out: &mut String, r: &HelmholtzReport, names: &[String]) {
    let _ = writeln!(out, "  verdict: {}", verdict_word(r.passed()));
    let _ = writeln!(out, "  certification: {}", certification(r));
    let _ = writeln!(out, "  order: {} (effective {})", r.order, r.effective_order);
    for f in &r.families {
        let _ = writeln!(out, "  {} [{}]", f.name, verdict_word(f.passed()));
        for e in &f.entries {
            if e.expr.is_zero() {
                continue;
            }
            let idx = match e.kappa {
                Some(k) => format!("{},{},{}", names[e.nu], names[e.sigma], names[k]),
                None => format!("{},{}", names[e.nu], names[e.sigma]),
            };
            let mark = if e.status.passed() { "" } else { "  <- nonzero" };
            let _ = writeln!(out, "    ({idx}) {}{mark}", e.expr);
        }
    }
    if let Some(w) = &r.witness {
        let _ = writeln!(
            out,
            "  witness: {} ({},{}) = {} at {}",
            w.family, names[w.nu], names[w.sigma], w.value, w.at
        );
    }
    let _ = writeln!(out, "  normalization: {}", r.normalization);
    let _ = writeln!(out, "  prng: {} seed {}", r.prng, r.seed);
}

#[derive(Serialize)]
struct Component<'a> {
    fiber: &'a str,
    expr: &'a Expr,
}

fn components<'a>(names: &'a [String], exprs: &'a [Expr]) -> Vec<Component<'a>> {
    names
        .iter()
        .zip(exprs)
        .map(|(fiber, expr)| Component { fiber, expr })
        .collect()
}

fn render_components(out: &mut String, prefix: &str, names: &[String], exprs: &[Expr]) {
    for (n, e) in names.iter().zip(exprs) {
        let _ = writeln!(out, "  {prefix}.{n} = {e}");
    }
}

fn render_immersion(out: &mut String, imm: &ImmersionCheck) {
    if !imm.full_rank {
        let _ = writeln!(
            out,
            "warning: embedding is rank deficient at a sampled point (smallest singular value {:.3e})",
            imm.min_singular_value
        );
    }
}

fn topology_json(t: &TopologyInfo, status: GlobalStatus) -> Value {
    json!({ "topology": t, "global_status": status })
}

pub fn run(cmd: Command, p: &Problem, opts: &Options) -> Result<Outcome> {
    let cfg = p.oracle(opts)?;
    match cmd {
        Command::Helmholtz => cmd_helmholtz(p, &cfg),
        Command::El => cmd_el(p, &cfg, opts.check),
        Command::Induce => cmd_induce(p, &cfg, opts.check),
        Command::Check => cmd_check(p, &cfg),
    }
}

fn cmd_helmholtz(p: &Problem, cfg: &OracleConfig) -> Result<Outcome> {
    let eps = p.source_form()?;
    let report = helmholtz(&eps, cfg)?;
    let topo = p.ambient_topology();
    let status = global_status(report.passed(), &topo);
    let mut text = String::from("helmholtz\n");
    render_report(&mut text, &report, p.space.fibers());
    let _ = writeln!(text, "global: {status} ({})", topo.name);
    let mut json = json!({
        "command": "helmholtz",
        "verdict": report.verdict,
        "certification": certification(&report),
        "effective_order": report.effective_order,
        "report": report,
    });
    json["global"] = topology_json(&topo, status);
    Ok(Outcome {
        text,
        json,
        code: if report.passed() { EXIT_PASS } else { EXIT_FAIL },
    })
}

fn cmd_el(p: &Problem, cfg: &OracleConfig, check: bool) -> Result<Outcome> {
    let lag = p.lagrangian()?;
    let el = euler_lagrange(&lag);
    let null = is_null_lagrangian(&lag, cfg)?;
    let names = p.space.fibers();
    let mut text = String::from("euler-lagrange\n");
    render_components(&mut text, "eps", names, &el.components);
    if null {
        let _ = writeln!(text, "  null Lagrangian: every component vanishes");
    }
    let mut json = json!({
        "command": "el",
        "order": el.space.order(),
        "components": components(names, &el.components),
        "null_lagrangian": null,
    });
    let mut code = EXIT_PASS;
    if check {
        let report = helmholtz(&el, cfg)?;
        text.push_str("helmholtz\n");
        render_report(&mut text, &report, names);
        if !report.passed() {
            code = EXIT_FAIL;
        }
        json["certification"] = json!(certification(&report));
        json["effective_order"] = json!(report.effective_order);
        json["check"] = serde_json::to_value(&report).unwrap_or(Value::Null);
    }
    Ok(Outcome { text, json, code })
}

fn cmd_induce(p: &Problem, cfg: &OracleConfig, check: bool) -> Result<Outcome> {
    let eps = p.source_form()?;
    let e = p.embedding()?;
    let names = e.source.fibers().to_vec();
    let mut text = format!("induced on {}\n", e.name.as_deref().unwrap_or("embedding"));
    let mut json = json!({ "command": "induce", "embedding": e.name });
    let mut code = EXIT_PASS;
    if check {
        let v = is_variational_submanifold(&eps, &e, cfg)?;
        render_immersion(&mut text, &v.immersion);
        render_components(&mut text, "eps", &names, &v.induced.components);
        text.push_str("helmholtz (induced)\n");
        render_report(&mut text, &v.direct, &names);
        let topo = p.topology();
        let status = global_status(v.variational, &topo);
        let _ = writeln!(text, "global: {status} ({})", topo.name);
        json["induced"] = serde_json::to_value(components(&names, &v.induced.components)).unwrap_or_default();
        json["certification"] = json!(certification(&v.direct));
        json["effective_order"] = json!(v.pullback.effective_order);
        json["global"] = topology_json(&topo, status);
        json["check"] = serde_json::to_value(&v).unwrap_or_default();
        if !v.variational {
            code = EXIT_FAIL;
        }
    } else {
        let induced = induce_source_form(&eps, &e)?;
        render_components(&mut text, "eps", &names, &induced.components);
        json["induced"] = serde_json::to_value(components(&names, &induced.components)).unwrap_or_default();
    }
    Ok(Outcome { text, json, code })
}

fn cmd_check(p: &Problem, cfg: &OracleConfig) -> Result<Outcome> {
    let eps = p.source_form()?;
    let e = p.embedding()?;
    let original = helmholtz(&eps, cfg)?;
    let v = is_variational_submanifold(&eps, &e, cfg)?;
    let src_names = e.source.fibers().to_vec();
    let topo = p.topology();
    let status = global_status(v.variational, &topo);

    let mut text = String::from("original system\n");
    render_report(&mut text, &original, p.space.fibers());
    let _ = writeln!(text, "induced on {}", e.name.as_deref().unwrap_or("embedding"));
    render_immersion(&mut text, &v.immersion);
    render_components(&mut text, "eps", &src_names, &v.induced.components);
    text.push_str("helmholtz (induced)\n");
    render_report(&mut text, &v.direct, &src_names);
    text.push_str("helmholtz (pullback of ambient residuals)\n");
    render_report(&mut text, &v.pullback, &src_names);

    let mut json = json!({
        "command": "check",
        "original": original,
        "embedding": e.name,
        "induced": components(&src_names, &v.induced.components),
        "induced_helmholtz": { "direct": v.direct, "pullback": v.pullback },
        "immersion": v.immersion,
        "variational": v.variational,
        "certification": certification(&v.direct),
        "effective_order": v.pullback.effective_order,
    });
    let mut pass = v.variational;

    if let Some(text_l) = p.file.embedding.as_ref().and_then(|s| s.induced_lagrangian.as_ref()) {
        let js = e.source.with_order(1);
        let expr = parse_in(&js, "induced_lagrangian", text_l)?;
        let el = euler_lagrange(&Lagrangian::new(js, expr)?);
        let mut matches = true;
        for (i, (a, b)) in el.components.iter().zip(&v.induced.components).enumerate() {
            matches &= is_zero(&(a - b), &cfg.derive(&[0x4c, i as u64]))?.passed();
        }
        let _ = writeln!(
            text,
            "induced Lagrangian {text_l}: Euler-Lagrange expressions {}",
            if matches { "match" } else { "do not match" }
        );
        json["induced_lagrangian"] = json!({ "expr": text_l, "matches": matches });
        pass &= matches;
    }

    if e.n() == 1 {
        let one = linear_accel_decompose(&eps, cfg)
            .map_err(CliError::from)
            .and_then(|d| Ok(one_dim_condition(&d, &e, cfg)?));
        match one {
            Ok(r) => {
                let _ = writeln!(text, "one-dimensional residual: {} [{}]", r.residual, verdict_word(r.passed));
                json["one_dim"] = serde_json::to_value(&r).unwrap_or_default();
            }
            Err(CliError::Core(err @ varsub_core::Error::RouteDisagreement(_))) => {
                return Err(err.into())
            }
            Err(err) => {
                let _ = writeln!(text, "one-dimensional residual: not applicable ({err})");
            }
        }
        let forces = p.forces()?;
        if !forces.is_empty() {
            let r = force_condition(&forces, &e)?;
            let _ = writeln!(text, "force condition: {r}");
            json["force_condition"] = json!(r);
        }
    }

    let _ = writeln!(text, "global: {status} ({})", topo.name);
    json["global"] = topology_json(&topo, status);
    Ok(Outcome {
        text,
        json,
        code: if pass { EXIT_PASS } else { EXIT_FAIL },
    })
}

/// Listing of built-in embeddings and topologies.
pub fn catalog() -> Outcome {
    let mut text = String::from("embeddings\n");
    for (name, usage) in embedding::CATALOG {
        let _ = writeln!(text, "  {name:<8} {usage}");
    }
    text.push_str("topologies (b1, b2)\n");
    for (name, b1, b2) in topology::CATALOG {
        let _ = writeln!(text, "  {name:<8} ({b1}, {b2})");
    }
    let json = json!({
        "embeddings": embedding::CATALOG
            .iter()
            .map(|(name, usage)| json!({ "name": name, "usage": usage }))
            .collect::<Vec<_>>(),
        "topologies": topology::CATALOG
            .iter()
            .map(|(name, b1, b2)| json!({ "name": name, "betti1": b1, "betti2": b2 }))
            .collect::<Vec<_>>(),
    });
    Outcome {
        text,
        json,
        code: EXIT_PASS,
    }
}
