//! Jet spaces, the total derivative and curve prolongation.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{eval, parse_expr, Assignment, Expr, ParseContext, Symbol};

/// A fibered chart `(t, y^σ, y^σ_1, ..., y^σ_r)` plus free parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JetSpace {
    base: String,
    fibers: Vec<String>,
    order: u32,
    params: Vec<String>,
}

fn valid_name(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic()) && cs.all(|c| c.is_ascii_alphanumeric())
}

impl JetSpace {
    pub fn new(base: &str, fibers: &[&str], order: u32) -> Result<JetSpace> {
        JetSpace::with_params(base, fibers, order, &[])
    }

    pub fn with_params(
        base: &str,
        fibers: &[&str],
        order: u32,
        params: &[&str],
    ) -> Result<JetSpace> {
        if order < 1 {
            return Err(Error::Space("order must be at least 1".into()));
        }
        if fibers.is_empty() {
            return Err(Error::Space("at least one fiber is required".into()));
        }
        let mut seen = BTreeSet::new();
        for name in std::iter::once(&base).chain(fibers).chain(params) {
            if !valid_name(name) {
                return Err(Error::Space(format!("`{name}` is not a valid identifier")));
            }
            if name == &"pi" || crate::expr::Func::from_name(name).is_some() {
                return Err(Error::Space(format!("`{name}` is reserved")));
            }
            if !seen.insert(*name) {
                return Err(Error::Space(format!("`{name}` is declared twice")));
            }
        }
        Ok(JetSpace {
            base: base.into(),
            fibers: fibers.iter().map(|s| s.to_string()).collect(),
            order,
            params: params.iter().map(|s| s.to_string()).collect(),
        })
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn fibers(&self) -> &[String] {
        &self.fibers
    }

    pub fn dim(&self) -> usize {
        self.fibers.len()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    /// Same chart at a different jet order.
    pub fn with_order(&self, order: u32) -> JetSpace {
        JetSpace {
            order: order.max(1),
            ..self.clone()
        }
    }

    pub fn base_symbol(&self) -> Symbol {
        Symbol::base(&self.base)
    }

    pub fn t(&self) -> Expr {
        Expr::var(self.base_symbol())
    }

    /// The coordinate `y^σ_l`.
    pub fn symbol(&self, sigma: usize, l: u32) -> Symbol {
        Symbol::jet(&self.fibers[sigma], l)
    }

    pub fn coord(&self, sigma: usize, l: u32) -> Expr {
        Expr::var(self.symbol(sigma, l))
    }

    pub fn param(&self, name: &str) -> Option<Symbol> {
        self.params
            .iter()
            .any(|p| p == name)
            .then(|| Symbol::param(name))
    }

    /// Base, jet coordinates up to `order`, then parameters.
    pub fn coordinates(&self, order: u32) -> Vec<Symbol> {
        let mut out = vec![self.base_symbol()];
        for l in 0..=order {
            for s in 0..self.dim() {
                out.push(self.symbol(s, l));
            }
        }
        out.extend(self.params.iter().map(|p| Symbol::param(p)));
        out
    }

    pub fn parse_context(&self) -> ParseContext {
        ParseContext {
            base: Some(self.base.clone()),
            fibers: self.fibers.clone(),
            max_order: self.order,
            params: self.params.clone(),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Expr> {
        Ok(parse_expr(text, &self.parse_context())?)
    }

    /// Index of the fiber carrying `s`, if `s` is one of this chart's jets.
    pub fn fiber_index(&self, s: &Symbol) -> Option<usize> {
        match s {
            Symbol::Jet { fiber, .. } => self.fibers.iter().position(|f| **f == **fiber),
            _ => None,
        }
    }

    /// Working order needed to hold all of `exprs`: at least `r`.
    pub fn effective_order<'a>(&self, exprs: impl IntoIterator<Item = &'a Expr>) -> u32 {
        exprs
            .into_iter()
            .filter_map(Expr::jet_order)
            .fold(self.order, u32::max)
    }
}

/// `Dt e = ∂e/∂t + Σ y^σ_{l+1} ∂e/∂y^σ_l` over every jet coordinate of `e`.
///
/// The result may exceed the order of `js`; callers track the widened order
/// with [`JetSpace::effective_order`].
pub fn total_derivative(e: &Expr, js: &JetSpace) -> Expr {
    let mut terms = vec![e.diff(&js.base_symbol())];
    for s in e.symbols() {
        if let Some(up) = s.raised() {
            terms.push(Expr::var(up) * e.diff(&s));
        }
    }
    Expr::add(terms)
}

/// `k`-fold total derivative; `k = 0` is the identity.
pub fn total_derivative_k(e: &Expr, js: &JetSpace, k: u32) -> Expr {
    (0..k).fold(e.clone(), |acc, _| total_derivative(&acc, js))
}

/// A section `t ↦ (t, c^σ(t))` given by explicit expressions in the base variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    components: BTreeMap<String, Expr>,
}

impl Curve {
    pub fn new(js: &JetSpace, components: Vec<Expr>) -> Result<Curve> {
        if components.len() != js.dim() {
            return Err(Error::DimensionMismatch {
                expected: js.dim(),
                found: components.len(),
            });
        }
        let t = js.base_symbol();
        for c in &components {
            if let Some(s) = c.symbols().into_iter().find(|s| *s != t) {
                return Err(Error::Curve(format!(
                    "component depends on `{s}`, only `{t}` is allowed"
                )));
            }
        }
        Ok(Curve {
            components: js.fibers().iter().cloned().zip(components).collect(),
        })
    }

    pub fn component(&self, fiber: &str) -> Option<&Expr> {
        self.components.get(fiber)
    }
}

/// Binds `t = t0` and every `y^σ_l`, `l ≤ order`, to the `l`-th derivative of the curve.
pub fn prolong_curve_to(c: &Curve, js: &JetSpace, order: u32, t0: f64) -> Result<Assignment> {
    let t = js.base_symbol();
    let mut a = Assignment::new().with(t.clone(), t0);
    let at = Assignment::new().with(t.clone(), t0);
    for (s, fiber) in js.fibers().iter().enumerate() {
        let mut d = c
            .component(fiber)
            .ok_or_else(|| Error::Curve(format!("no component for `{fiber}`")))?
            .clone();
        for l in 0..=order {
            a.set(js.symbol(s, l), eval(&d, &at)?);
            d = d.diff(&t);
        }
    }
    Ok(a)
}

/// [`prolong_curve_to`] at the order of `js`.
pub fn prolong_curve(c: &Curve, js: &JetSpace, t0: f64) -> Result<Assignment> {
    prolong_curve_to(c, js, js.order(), t0)
}
