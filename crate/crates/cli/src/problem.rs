//! The sectioned problem-file format.
//!
//! ```text
//! [system]
//! order = 2
//! fibers = x, y
//! eps.x = "y' + x'*(x'*x'' + y'*y'')"
//! eps.y = "-x' + y'*(x'*x'' + y'*y'')"
//!
//! [embedding]
//! catalog = "circle 2"
//! ```

use std::fmt::{self, Write};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError {
        line,
        message: message.into(),
    })
}

/// Right-hand sides of the system, keyed by fiber name.
#[derive(Clone, Debug, PartialEq)]
pub enum Equations {
    Eps(Vec<(String, String)>),
    Lagrangian(String),
    Forces(Vec<(String, String)>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub base: String,
    pub order: u32,
    pub fibers: Vec<String>,
    pub parameters: Vec<String>,
    pub equations: Equations,
}

#[derive(Clone, Debug, PartialEq)]
pub enum EmbeddingDef {
    Map(Vec<(String, String)>),
    Catalog(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingSection {
    pub params: Vec<String>,
    pub def: EmbeddingDef,
    pub induced_lagrangian: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TopologySection {
    pub name: Option<String>,
    pub betti1: Option<u32>,
    pub betti2: Option<u32>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OracleSection {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub tol: Option<f64>,
    pub fd_step: Option<f64>,
    pub bounds: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub system: System,
    pub embedding: Option<EmbeddingSection>,
    pub topology: Option<TopologySection>,
    pub oracle: Option<OracleSection>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Section {
    System,
    Embedding,
    Topology,
    Oracle,
}

enum Value {
    Quoted(String),
    Bare(String),
}

impl Value {
    fn text(self) -> String {
        match self {
            Value::Quoted(s) | Value::Bare(s) => s,
        }
    }
}

struct Entry {
    line: usize,
    key: String,
    value: Value,
}

fn split_line(raw: &str, line: usize) -> Result<(String, Value), FormatError> {
    let Some((k, v)) = raw.split_once('=') else {
        return fail(line, "expected `key = value`");
    };
    let key = k.trim().to_string();
    if key.is_empty() {
        return fail(line, "empty key");
    }
    let v = v.trim();
    let value = if let Some(rest) = v.strip_prefix('"') {
        let Some(end) = rest.find('"') else {
            return fail(line, "unterminated string");
        };
        let tail = rest[end + 1..].trim();
        if !tail.is_empty() && !tail.starts_with('#') {
            return fail(line, format!("unexpected `{tail}` after string"));
        }
        Value::Quoted(rest[..end].to_string())
    } else {
        let bare = v.split('#').next().unwrap_or("").trim();
        if bare.is_empty() {
            return fail(line, format!("`{key}` has no value"));
        }
        Value::Bare(bare.to_string())
    };
    Ok((key, value))
}

fn list(text: &str) -> Vec<String> {
    text.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

fn number<T: std::str::FromStr>(e: &Entry, text: &str) -> Result<T, FormatError> {
    text.trim()
        .parse()
        .or_else(|_| fail(e.line, format!("`{}` must be a number, found `{text}`", e.key)))
}

fn expression(e: Entry) -> Result<String, FormatError> {
    match e.value {
        Value::Quoted(s) => Ok(s),
        Value::Bare(_) => fail(e.line, format!("`{}` must be a quoted expression", e.key)),
    }
}

/// Collects `prefix.<name>` entries, checking they name each of `names` exactly once.
fn keyed(
    entries: Vec<Entry>,
    names: &[String],
    what: &str,
    section_line: usize,
) -> Result<Vec<(String, String)>, FormatError> {
    let mut out: Vec<Option<(usize, String)>> = vec![None; names.len()];
    for e in entries {
        let name = e.key.split_once('.').map(|(_, n)| n.to_string()).unwrap_or_default();
        let Some(i) = names.iter().position(|n| *n == name) else {
            return fail(e.line, format!("`{}` does not name a {what}", e.key));
        };
        if out[i].is_some() {
            return fail(e.line, format!("`{}` given twice", e.key));
        }
        let line = e.line;
        out[i] = Some((line, expression(e)?));
    }
    names
        .iter()
        .zip(out)
        .map(|(n, v)| match v {
            Some((_, text)) => Ok((n.clone(), text)),
            None => fail(section_line, format!("missing entry for {what} `{n}`")),
        })
        .collect()
}

fn parse_system(entries: Vec<Entry>, at: usize) -> Result<System, FormatError> {
    let mut base = None;
    let mut order = None;
    let mut fibers = None;
    let mut parameters = None;
    let mut eps = Vec::new();
    let mut forces = Vec::new();
    let mut lagrangian: Option<String> = None;
    for e in entries {
        let key = e.key.clone();
        let first = key.split('.').next().unwrap_or("");
        let dup = |set: bool| -> Result<(), FormatError> {
            if set {
                return fail(e.line, format!("`{key}` given twice"));
            }
            Ok(())
        };
        match (first, key.contains('.')) {
            ("base", false) => {
                dup(base.is_some())?;
                base = Some(e.value.text());
            }
            ("order", false) => {
                dup(order.is_some())?;
                order = Some(number(&e, &e.value_text())?);
            }
            ("fibers", false) => {
                dup(fibers.is_some())?;
                fibers = Some(list(&e.value.text()));
            }
            ("parameters", false) => {
                dup(parameters.is_some())?;
                parameters = Some(list(&e.value.text()));
            }
            ("lagrangian", false) => {
                dup(lagrangian.is_some())?;
                lagrangian = Some(expression(e)?);
            }
            ("eps", true) => eps.push(e),
            ("force", true) => forces.push(e),
            _ => return fail(e.line, format!("unknown key `{key}` in [system]")),
        }
    }
    let Some(fibers) = fibers else {
        return fail(at, "[system] needs `fibers`");
    };
    let kinds = [!eps.is_empty(), !forces.is_empty(), lagrangian.is_some()];
    let equations = match kinds {
        [true, false, false] => Equations::Eps(keyed(eps, &fibers, "fiber", at)?),
        [false, true, false] => Equations::Forces(keyed(forces, &fibers, "fiber", at)?),
        [false, false, true] => Equations::Lagrangian(lagrangian.unwrap()),
        _ => return fail(at, "[system] needs exactly one of `eps.*`, `force.*` or `lagrangian`"),
    };
    Ok(System {
        base: base.unwrap_or_else(|| "t".into()),
        order: order.unwrap_or(2),
        fibers,
        parameters: parameters.unwrap_or_default(),
        equations,
    })
}

fn parse_embedding(
    entries: Vec<Entry>,
    at: usize,
    system: &System,
) -> Result<EmbeddingSection, FormatError> {
    let mut params = None;
    let mut catalog = None;
    let mut induced = None;
    let mut maps = Vec::new();
    for e in entries {
        match e.key.as_str() {
            "params" if params.is_none() => params = Some(list(&e.value.text())),
            "catalog" if catalog.is_none() => catalog = Some(e.value.text()),
            "induced_lagrangian" if induced.is_none() => induced = Some(expression(e)?),
            k if k.starts_with("map.") => maps.push(e),
            "params" | "catalog" | "induced_lagrangian" => {
                return fail(e.line, format!("`{}` given twice", e.key))
            }
            k => return fail(e.line, format!("unknown key `{k}` in [embedding]")),
        }
    }
    let def = match (catalog, maps.is_empty()) {
        (Some(c), true) => EmbeddingDef::Catalog(c),
        (None, false) => {
            if params.is_none() {
                return fail(at, "a mapped embedding needs `params`");
            }
            EmbeddingDef::Map(keyed(maps, &system.fibers, "fiber", at)?)
        }
        _ => return fail(at, "[embedding] needs exactly one of `catalog` or `map.*`"),
    };
    let params = params.unwrap_or_default();
    for p in &params {
        if system.fibers.contains(p) || *p == system.base {
            return fail(at, format!("embedding parameter `{p}` clashes with the system"));
        }
    }
    Ok(EmbeddingSection {
        params,
        def,
        induced_lagrangian: induced,
    })
}

fn parse_topology(entries: Vec<Entry>, at: usize) -> Result<TopologySection, FormatError> {
    let mut t = TopologySection {
        name: None,
        betti1: None,
        betti2: None,
    };
    for e in entries {
        let text = e.value_text();
        match e.key.as_str() {
            "name" if t.name.is_none() => t.name = Some(text),
            "betti1" if t.betti1.is_none() => t.betti1 = Some(number(&e, &text)?),
            "betti2" if t.betti2.is_none() => t.betti2 = Some(number(&e, &text)?),
            "name" | "betti1" | "betti2" => return fail(e.line, format!("`{}` given twice", e.key)),
            k => return fail(e.line, format!("unknown key `{k}` in [topology]")),
        }
    }
    if t.name.is_none() && t.betti1.is_none() && t.betti2.is_none() {
        return fail(at, "[topology] needs `name` or Betti numbers");
    }
    Ok(t)
}

fn parse_oracle(entries: Vec<Entry>) -> Result<OracleSection, FormatError> {
    let mut o = OracleSection::default();
    for e in entries {
        let text = e.value_text();
        let twice = || fail(e.line, format!("`{}` given twice", e.key));
        match e.key.as_str() {
            "seed" => {
                if o.seed.is_some() {
                    return twice();
                }
                o.seed = Some(number(&e, &text)?);
            }
            "samples" => {
                if o.samples.is_some() {
                    return twice();
                }
                o.samples = Some(number(&e, &text)?);
            }
            "tol" => {
                if o.tol.is_some() {
                    return twice();
                }
                o.tol = Some(number(&e, &text)?);
            }
            "fd_step" => {
                if o.fd_step.is_some() {
                    return twice();
                }
                o.fd_step = Some(number(&e, &text)?);
            }
            "box" => {
                if o.bounds.is_some() {
                    return twice();
                }
                let parts = list(&text);
                if parts.len() != 2 {
                    return fail(e.line, "`box` takes two numbers `lo, hi`");
                }
                o.bounds = Some((number(&e, &parts[0])?, number(&e, &parts[1])?));
            }
            k => return fail(e.line, format!("unknown key `{k}` in [oracle]")),
        }
    }
    Ok(o)
}

impl Entry {
    fn value_text(&self) -> String {
        match &self.value {
            Value::Quoted(s) | Value::Bare(s) => s.clone(),
        }
    }
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<ProblemFile, FormatError> {
        let mut sections: Vec<(Section, usize, Vec<Entry>)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(name) = trimmed.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return fail(line, "malformed section header");
                };
                let s = match name.trim() {
                    "system" => Section::System,
                    "embedding" => Section::Embedding,
                    "topology" => Section::Topology,
                    "oracle" => Section::Oracle,
                    other => return fail(line, format!("unknown section [{other}]")),
                };
                if sections.iter().any(|(t, _, _)| *t == s) {
                    return fail(line, format!("section [{}] appears twice", name.trim()));
                }
                sections.push((s, line, Vec::new()));
                continue;
            }
            let Some((_, _, entries)) = sections.last_mut() else {
                return fail(line, "entry outside of any section");
            };
            let (key, value) = split_line(trimmed, line)?;
            entries.push(Entry { line, key, value });
        }
        let mut take = |s: Section| {
            sections
                .iter()
                .position(|(t, _, _)| *t == s)
                .map(|i| sections.remove(i))
        };
        let Some((_, at, entries)) = take(Section::System) else {
            return fail(1, "missing [system] section");
        };
        let system = parse_system(entries, at)?;
        let embedding = match take(Section::Embedding) {
            Some((_, at, entries)) => Some(parse_embedding(entries, at, &system)?),
            None => None,
        };
        let topology = match take(Section::Topology) {
            Some((_, at, entries)) => Some(parse_topology(entries, at)?),
            None => None,
        };
        let oracle = match take(Section::Oracle) {
            Some((_, _, entries)) => Some(parse_oracle(entries)?),
            None => None,
        };
        Ok(ProblemFile {
            system,
            embedding,
            topology,
            oracle,
        })
    }
}

fn join(v: &[String]) -> String {
    v.join(", ")
}

impl fmt::Display for ProblemFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.system;
        let mut out = String::new();
        writeln!(out, "[system]")?;
        writeln!(out, "base = {}", s.base)?;
        writeln!(out, "order = {}", s.order)?;
        writeln!(out, "fibers = {}", join(&s.fibers))?;
        if !s.parameters.is_empty() {
            writeln!(out, "parameters = {}", join(&s.parameters))?;
        }
        match &s.equations {
            Equations::Eps(v) => {
                for (n, e) in v {
                    writeln!(out, "eps.{n} = \"{e}\"")?;
                }
            }
            Equations::Forces(v) => {
                for (n, e) in v {
                    writeln!(out, "force.{n} = \"{e}\"")?;
                }
            }
            Equations::Lagrangian(e) => writeln!(out, "lagrangian = \"{e}\"")?,
        }
        if let Some(emb) = &self.embedding {
            writeln!(out, "\n[embedding]")?;
            if !emb.params.is_empty() {
                writeln!(out, "params = {}", join(&emb.params))?;
            }
            match &emb.def {
                EmbeddingDef::Catalog(c) => writeln!(out, "catalog = \"{c}\"")?,
                EmbeddingDef::Map(v) => {
                    for (n, e) in v {
                        writeln!(out, "map.{n} = \"{e}\"")?;
                    }
                }
            }
            if let Some(l) = &emb.induced_lagrangian {
                writeln!(out, "induced_lagrangian = \"{l}\"")?;
            }
        }
        if let Some(t) = &self.topology {
            writeln!(out, "\n[topology]")?;
            if let Some(n) = &t.name {
                writeln!(out, "name = {n}")?;
            }
            if let Some(b) = t.betti1 {
                writeln!(out, "betti1 = {b}")?;
            }
            if let Some(b) = t.betti2 {
                writeln!(out, "betti2 = {b}")?;
            }
        }
        if let Some(o) = &self.oracle {
            writeln!(out, "\n[oracle]")?;
            if let Some(v) = o.seed {
                writeln!(out, "seed = {v}")?;
            }
            if let Some(v) = o.samples {
                writeln!(out, "samples = {v}")?;
            }
            if let Some(v) = o.tol {
                writeln!(out, "tol = {v:e}")?;
            }
            if let Some(v) = o.fd_step {
                writeln!(out, "fd_step = {v:e}")?;
            }
            if let Some((lo, hi)) = o.bounds {
                writeln!(out, "box = {lo}, {hi}")?;
            }
        }
        f.write_str(&out)
    }
}
