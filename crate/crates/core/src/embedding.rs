//! Embeddings `ι: ℝ×Q → ℝ×ℝᵐ`, their prolongations and induced systems.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{eval, simplify, Expr, Symbol};
use crate::jet::{total_derivative, JetSpace};
use crate::oracle::{is_zero, sample_symbols, OracleConfig, Witness, ZeroTest};
use crate::variational::{
    assemble, helmholtz, helmholtz_expressions, ABDecomposition, HelmholtzReport, Lagrangian,
    RawEntry, RawFamily, SourceForm,
};

/// Parametric map `x^σ = f^σ(q^i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    pub name: Option<String>,
    pub source: JetSpace,
    pub target: JetSpace,
    pub components: Vec<Expr>,
}

/// Numeric rank of the Jacobian at seeded points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImmersionCheck {
    pub full_rank: bool,
    pub points: usize,
    pub min_singular_value: f64,
}

pub const IMMERSION_POINTS: usize = 8;

impl Embedding {
    pub fn new(source: JetSpace, target: JetSpace, components: Vec<Expr>) -> Result<Embedding> {
        if components.len() != target.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: components.len(),
            });
        }
        if source.dim() > target.dim() {
            return Err(Error::Embedding(format!(
                "source dimension {} exceeds target dimension {}",
                source.dim(),
                target.dim()
            )));
        }
        if let Some(f) = source.fibers().iter().find(|f| target.fibers().contains(f)) {
            return Err(Error::Embedding(format!(
                "`{f}` names both a source and a target coordinate"
            )));
        }
        for c in &components {
            for s in c.symbols() {
                let ok = match &s {
                    Symbol::Jet { order: 0, .. } => source.fiber_index(&s).is_some(),
                    Symbol::Param(p) => source.param(p).is_some(),
                    _ => false,
                };
                if !ok {
                    return Err(Error::Embedding(format!(
                        "component depends on `{s}`; only source positions and parameters are allowed"
                    )));
                }
            }
        }
        Ok(Embedding {
            name: None,
            source: source.with_order(source.order().max(2)),
            target,
            components,
        })
    }

    pub fn named(mut self, name: &str) -> Embedding {
        self.name = Some(name.into());
        self
    }

    /// Source dimension `n`.
    pub fn n(&self) -> usize {
        self.source.dim()
    }

    /// Target dimension `m`.
    pub fn m(&self) -> usize {
        self.target.dim()
    }

    /// `∂f^σ/∂q^i`, indexed `[σ][i]`.
    pub fn jacobian(&self) -> Vec<Vec<Expr>> {
        self.components
            .iter()
            .map(|f| {
                (0..self.n())
                    .map(|i| simplify(&f.diff(&self.source.symbol(i, 0))))
                    .collect()
            })
            .collect()
    }

    /// Rank of the Jacobian at [`IMMERSION_POINTS`] seeded points.
    pub fn immersion_check(&self, cfg: &OracleConfig) -> Result<ImmersionCheck> {
        let jac = self.jacobian();
        let mut symbols: Vec<Symbol> = (0..self.n()).map(|i| self.source.symbol(i, 0)).collect();
        symbols.extend(self.source.params().iter().map(|p| Symbol::param(p)));
        let (m, n) = (self.m(), self.n());
        let mut checked = 0;
        let mut misses = 0;
        let mut min_sv = f64::INFINITY;
        let mut full = true;
        let mut index = 0u64;
        while checked < IMMERSION_POINTS {
            let a = sample_symbols(&symbols, cfg, index);
            index += 1;
            let mut values = Vec::with_capacity(m * n);
            let mut ok = true;
            for row in &jac {
                for d in row {
                    match eval(d, &a) {
                        Ok(v) => values.push(v),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
            }
            if !ok {
                misses += 1;
                if misses >= 10 * IMMERSION_POINTS {
                    return Err(Error::UnableToSample { attempts: misses });
                }
                continue;
            }
            misses = 0;
            checked += 1;
            let mat = DMatrix::from_row_slice(m, n, &values);
            let sv = mat.singular_values();
            let largest = sv.max();
            let smallest = sv.min();
            min_sv = min_sv.min(smallest);
            if !(smallest > 1e-9 * largest.max(1.0)) {
                full = false;
            }
        }
        Ok(ImmersionCheck {
            full_rank: full,
            points: checked,
            min_singular_value: min_sv,
        })
    }
}

/// Table of `x^σ_l ∘ Jʳι = Dt^l f^σ`, computed in the source space.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedEmbedding {
    pub order: u32,
    table: Vec<Vec<Expr>>,
    target: JetSpace,
    source: JetSpace,
}

impl ProlongedEmbedding {
    /// Entry `x^σ_l ∘ Jʳι`.
    pub fn entry(&self, sigma: usize, l: u32) -> &Expr {
        &self.table[sigma][l as usize]
    }

    /// Bindings of target coordinates (and the base variable) for composition.
    pub fn substitution(&self) -> HashMap<Symbol, Expr> {
        let mut out = HashMap::new();
        if self.target.base() != self.source.base() {
            out.insert(self.target.base_symbol(), self.source.t());
        }
        for (s, row) in self.table.iter().enumerate() {
            for (l, e) in row.iter().enumerate() {
                out.insert(self.target.symbol(s, l as u32), e.clone());
            }
        }
        out
    }
}

pub fn prolong_embedding(e: &Embedding, r: u32) -> ProlongedEmbedding {
    let table = e
        .components
        .iter()
        .map(|f| {
            let mut row = vec![f.clone()];
            for _ in 0..r {
                let next = simplify(&total_derivative(row.last().unwrap(), &e.source));
                row.push(next);
            }
            row
        })
        .collect();
    ProlongedEmbedding {
        order: r,
        table,
        target: e.target.clone(),
        source: e.source.clone(),
    }
}

fn check_target(eps_space: &JetSpace, e: &Embedding) -> Result<()> {
    if eps_space.fibers() != e.target.fibers() {
        return Err(Error::DimensionMismatch {
            expected: e.m(),
            found: eps_space.dim(),
        });
    }
    Ok(())
}

/// `ε̃_i = (ε_σ ∘ J²ι) ∂f^σ/∂q^i` on the source space.
pub fn induce_source_form(eps: &SourceForm, e: &Embedding) -> Result<SourceForm> {
    check_target(&eps.space, e)?;
    let found = eps.actual_order();
    if found > 2 {
        return Err(Error::OrderTooHigh { found, max: 2 });
    }
    let sub = prolong_embedding(e, 2).substitution();
    let composed: Vec<Expr> = eps.components.iter().map(|c| c.subst(&sub)).collect();
    let jac = e.jacobian();
    let components = (0..e.n())
        .map(|i| {
            simplify(&Expr::add(
                composed
                    .iter()
                    .zip(&jac)
                    .map(|(c, row)| c * &row[i]),
            ))
        })
        .collect();
    Ok(SourceForm {
        space: e.source.with_order(2),
        components,
    })
}

/// `L ∘ J¹ι` on the source space.
pub fn pullback_lagrangian(lag: &Lagrangian, e: &Embedding) -> Result<Lagrangian> {
    check_target(&lag.space, e)?;
    let found = lag.expr.jet_order().unwrap_or(0);
    if found > 1 {
        return Err(Error::OrderTooHigh { found, max: 1 });
    }
    let sub = prolong_embedding(e, 1).substitution();
    Ok(Lagrangian {
        space: e.source.with_order(1),
        expr: simplify(&lag.expr.subst(&sub)),
    })
}

/// Coefficient `C[σ,l][i,s] = ∂(x^σ_l ∘ Jʳι)/∂q^i_s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactEntry {
    pub sigma: usize,
    pub l: u32,
    pub i: usize,
    pub s: u32,
    pub expr: Expr,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactTable {
    pub order: u32,
    pub entries: Vec<ContactEntry>,
}

impl ContactTable {
    pub fn get(&self, sigma: usize, l: u32, i: usize, s: u32) -> Option<&Expr> {
        self.entries
            .iter()
            .find(|c| c.sigma == sigma && c.l == l && c.i == i && c.s == s)
            .map(|c| &c.expr)
    }
}

/// Pullback coefficients of the contact forms `ω^σ_l`, `0 ≤ s ≤ l ≤ r-1`.
pub fn contact_pullback_coeffs(e: &Embedding, r: u32) -> ContactTable {
    let top = r.saturating_sub(1);
    let p = prolong_embedding(e, top);
    let mut entries = Vec::new();
    for sigma in 0..e.m() {
        for l in 0..=top {
            for i in 0..e.n() {
                for s in 0..=l {
                    entries.push(ContactEntry {
                        sigma,
                        l,
                        i,
                        s,
                        expr: simplify(&p.entry(sigma, l).diff(&e.source.symbol(i, s))),
                    });
                }
            }
        }
    }
    ContactTable { order: r, entries }
}

pub const PULLBACK_NORMALIZATION: &str =
    "K^k_ij = 1/2 sum_{l>=k} sum_{sigma,nu} (H^l_sigma,nu o J iota) df^nu/dq^j d(x^sigma_l o J iota)/dq^i_k; 2 K^k_ij = H^k_ij of the induced system";

/// Helmholtz residuals of the induced system assembled from the ambient
/// Helmholtz expressions composed with the prolonged embedding.
pub fn induced_helmholtz_via_pullback(
    eps: &SourceForm,
    e: &Embedding,
    cfg: &OracleConfig,
) -> Result<HelmholtzReport> {
    check_target(&eps.space, e)?;
    let found = eps.actual_order();
    if found > 2 {
        return Err(Error::OrderTooHigh { found, max: 2 });
    }
    let eps2 = SourceForm {
        space: eps.space.with_order(2),
        components: eps.components.clone(),
    };
    let r = 2u32;
    let h: Vec<Vec<Vec<Expr>>> = helmholtz_expressions(&eps2)
        .into_iter()
        .map(|l| {
            l.into_iter()
                .map(|row| row.iter().map(simplify).collect())
                .collect()
        })
        .collect();
    let reach = eps2
        .space
        .effective_order(h.iter().flatten().flatten());
    let p = prolong_embedding(e, reach);
    let sub = p.substitution();
    let composed: Vec<Vec<Vec<Expr>>> = h
        .iter()
        .map(|l| {
            l.iter()
                .map(|row| row.iter().map(|x| x.subst(&sub)).collect())
                .collect()
        })
        .collect();
    let jac = e.jacobian();
    let n = e.n();
    let m = e.m();
    let half = Expr::rational(1, 2);
    let mut families = Vec::new();
    let mut entries = Vec::new();
    for (fi, k) in (0..=r).rev().enumerate() {
        families.push(RawFamily {
            name: format!("K{k}"),
            l: k,
        });
        for i in 0..n {
            let qik = e.source.symbol(i, k);
            for j in 0..n {
                let mut terms = Vec::new();
                for l in k..=r {
                    for sigma in 0..m {
                        let dx = p.entry(sigma, l).diff(&qik);
                        if dx.is_zero() {
                            continue;
                        }
                        for nu in 0..m {
                            terms.push(Expr::mul([
                                composed[l as usize][sigma][nu].clone(),
                                jac[nu][j].clone(),
                                dx.clone(),
                            ]));
                        }
                    }
                }
                entries.push(RawEntry {
                    family: fi,
                    nu: i,
                    sigma: j,
                    kappa: None,
                    expr: &half * Expr::add(terms),
                });
            }
        }
    }
    assemble(
        r,
        &e.source.with_order(r),
        PULLBACK_NORMALIZATION,
        families,
        entries,
        cfg,
    )
}

/// Both routes to the induced Helmholtz verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubmanifoldVerdict {
    pub variational: bool,
    #[serde(skip)]
    pub induced: SourceForm,
    pub direct: HelmholtzReport,
    pub pullback: HelmholtzReport,
    pub immersion: ImmersionCheck,
}

/// Decides whether the induced system is locally variational; the direct and
/// pullback routes must agree.
pub fn is_variational_submanifold(
    eps: &SourceForm,
    e: &Embedding,
    cfg: &OracleConfig,
) -> Result<SubmanifoldVerdict> {
    let immersion = e.immersion_check(cfg)?;
    let induced = induce_source_form(eps, e)?;
    let direct = helmholtz(&induced, cfg)?;
    let pullback = induced_helmholtz_via_pullback(eps, e, cfg)?;
    if direct.verdict != pullback.verdict {
        return Err(Error::RouteDisagreement(format!(
            "induced Helmholtz residuals give {:?}, pullback residuals give {:?}",
            direct.verdict, pullback.verdict
        )));
    }
    Ok(SubmanifoldVerdict {
        variational: direct.passed(),
        induced,
        direct,
        pullback,
        immersion,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneDimResult {
    pub residual: Expr,
    pub passed: bool,
    pub witness: Option<Witness>,
}

fn one_dim(e: &Embedding) -> Result<()> {
    if e.n() != 1 {
        return Err(Error::NotOneDimensional(e.n()));
    }
    Ok(())
}

/// The single condition for a curve `q ↦ f(q)` and `ε = A + B ẍ`.
pub fn one_dim_condition(
    d: &ABDecomposition,
    e: &Embedding,
    cfg: &OracleConfig,
) -> Result<OneDimResult> {
    one_dim(e)?;
    check_target(&d.space, e)?;
    let js = &d.space;
    let t = js.base_symbol();
    for (k, c) in d.a.iter().chain(d.b.iter().flatten()).enumerate() {
        if !is_zero(&c.diff(&t), &cfg.derive(&[k as u64]))?.passed() {
            return Err(Error::TimeDependent);
        }
    }
    let m = e.m();
    let sub = prolong_embedding(e, 1).substitution();
    let q = e.source.symbol(0, 0);
    let qd = e.source.coord(0, 1);
    let fp: Vec<Expr> = e.components.iter().map(|f| f.diff(&q)).collect();
    let dfp: Vec<Expr> = fp.iter().map(|g| total_derivative(g, &e.source)).collect();
    let df: Vec<Expr> = e
        .components
        .iter()
        .map(|g| total_derivative(g, &e.source))
        .collect();
    let v = |n: usize| js.symbol(n, 1);
    let x = |n: usize| js.symbol(n, 0);
    let mut terms = Vec::new();
    for s in 0..m {
        for n in 0..m {
            let pair = &fp[n] * &fp[s];
            terms.push(d.a[s].diff(&v(n)).subst(&sub) * &pair);
            terms.push((&d.b[s][n] - &d.b[n][s]).subst(&sub) * &fp[s] * &dfp[n]);
            for k in 0..m {
                let skew = d.b[s][k].diff(&v(n)) - d.b[s][n].diff(&v(k));
                terms.push(skew.subst(&sub) * &qd * &pair * &dfp[k]);
                terms.push(-d.b[s][n].diff(&x(k)).subst(&sub) * &df[k] * &pair);
            }
        }
    }
    let residual = simplify(&Expr::add(terms));
    let verdict = is_zero(&residual, cfg)?;
    let induced = induce_source_form(&d.reconstruct(), e)?;
    let c = &induced.components[0];
    let half_velocity = c.diff(&e.source.symbol(0, 1))
        - total_derivative(&c.diff(&e.source.symbol(0, 2)), &e.source);
    if !is_zero(&(&residual - half_velocity), &cfg.derive(&[0x7276]))?.passed() {
        return Err(Error::RouteDisagreement(
            "one-dimensional residual differs from the induced velocity condition".into(),
        ));
    }
    let (passed, witness) = match verdict {
        ZeroTest::Zero(_) => (true, None),
        ZeroTest::NonZero(w) => (false, Some(w)),
    };
    Ok(OneDimResult {
        residual,
        passed,
        witness,
    })
}

/// `Σ (∂F^σ/∂ẋ^ν) ∘ J¹ι · ∂f^σ/∂q · ∂f^ν/∂q` for `ẍ = F(t, x, ẋ)` on a curve.
pub fn force_condition(forces: &[Expr], e: &Embedding) -> Result<Expr> {
    one_dim(e)?;
    if forces.len() != e.m() {
        return Err(Error::DimensionMismatch {
            expected: e.m(),
            found: forces.len(),
        });
    }
    let sub = prolong_embedding(e, 1).substitution();
    let q = e.source.symbol(0, 0);
    let fp: Vec<Expr> = e.components.iter().map(|f| f.diff(&q)).collect();
    let mut terms = Vec::new();
    for (s, f) in forces.iter().enumerate() {
        for (n, fpn) in fp.iter().enumerate() {
            let dv = f.diff(&e.target.symbol(n, 1)).subst(&sub);
            terms.push(dv * &fp[s] * fpn);
        }
    }
    Ok(simplify(&Expr::add(terms)))
}

/// Built-in embedding names with their argument lists.
pub const CATALOG: [(&str, &str); 4] = [
    ("circle", "circle <radius>: x = r cos q, y = r sin q"),
    (
        "sphere",
        "sphere: x = cos(phi) sin(theta), y = sin(phi) sin(theta), z = cos(theta)",
    ),
    (
        "mobius",
        "mobius <r> <a>: x = (r + tau cos(phi/2)) cos phi, y = (r + tau cos(phi/2)) sin phi, z = tau sin(phi/2)",
    ),
    (
        "slice",
        "slice <n> <m> <c_(n+1)> ... <c_m>: x^j = q^j for j <= n, x^k = c^k otherwise",
    ),
];

/// Default source coordinate names of a catalog entry.
pub fn catalog_source_names(kind: &str, n: usize) -> Vec<String> {
    match kind {
        "circle" => vec!["q".into()],
        "sphere" => vec!["phi".into(), "theta".into()],
        "mobius" => vec!["phi".into(), "tau".into()],
        _ => (1..=n).map(|i| format!("q{i}")).collect(),
    }
}

/// Builds a catalog embedding such as `"circle 2"` into `target`.
///
/// `source_names` overrides the default parameter names.
pub fn catalog_embedding(
    entry: &str,
    target: &JetSpace,
    source_names: Option<&[String]>,
) -> Result<Embedding> {
    let words: Vec<&str> = entry.split_whitespace().collect();
    let Some((&kind, args)) = words.split_first() else {
        return Err(Error::UnknownCatalog(entry.into()));
    };
    let constant = |text: &str| -> Result<Expr> {
        let ctx = crate::expr::ParseContext {
            params: target.params().to_vec(),
            ..Default::default()
        };
        Ok(crate::expr::parse_expr(text, &ctx)?)
    };
    let arity = |want: usize| -> Result<()> {
        if args.len() != want {
            return Err(Error::Embedding(format!(
                "`{kind}` takes {want} argument(s), found {}",
                args.len()
            )));
        }
        Ok(())
    };
    let need_target = |m: usize| -> Result<()> {
        if target.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: target.dim(),
            });
        }
        Ok(())
    };
    let n = match kind {
        "circle" => 1,
        "sphere" | "mobius" => 2,
        "slice" => {
            let n: usize = args
                .first()
                .and_then(|a| a.parse().ok())
                .ok_or_else(|| Error::Embedding("`slice` needs n and m".into()))?;
            n
        }
        _ => return Err(Error::UnknownCatalog(kind.into())),
    };
    let names: Vec<String> = match source_names {
        Some(s) => s.to_vec(),
        None => catalog_source_names(kind, n),
    };
    if names.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: names.len(),
        });
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let params: Vec<&str> = target.params().iter().map(String::as_str).collect();
    let source = JetSpace::with_params(target.base(), &name_refs, 2, &params)?;
    let q = |i: usize| source.coord(i, 0);
    let components = match kind {
        "circle" => {
            arity(1)?;
            need_target(2)?;
            let r0 = constant(args[0])?;
            vec![&r0 * q(0).cos(), &r0 * q(0).sin()]
        }
        "sphere" => {
            arity(0)?;
            need_target(3)?;
            let (phi, theta) = (q(0), q(1));
            vec![
                phi.clone().cos() * theta.clone().sin(),
                phi.sin() * theta.clone().sin(),
                theta.cos(),
            ]
        }
        "mobius" => {
            arity(2)?;
            need_target(3)?;
            let r = constant(args[0])?;
            let _half_width = constant(args[1])?;
            let (phi, tau) = (q(0), q(1));
            let half = Expr::rational(1, 2) * &phi;
            let radial = r + &tau * half.clone().cos();
            vec![
                &radial * phi.clone().cos(),
                &radial * phi.sin(),
                tau * half.sin(),
            ]
        }
        _ => {
            let m: usize = args
                .get(1)
                .and_then(|a| a.parse().ok())
                .ok_or_else(|| Error::Embedding("`slice` needs n and m".into()))?;
            need_target(m)?;
            if n > m || args.len() != 2 + (m - n) {
                return Err(Error::Embedding(format!(
                    "`slice {n} {m}` needs {} constant(s)",
                    m.saturating_sub(n)
                )));
            }
            let mut out: Vec<Expr> = (0..n).map(q).collect();
            for a in &args[2..] {
                out.push(constant(a)?);
            }
            out
        }
    };
    Ok(Embedding::new(source, target.clone(), components)?.named(entry))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> JetSpace {
        JetSpace::new("t", &["x", "y"], 2).unwrap()
    }

    #[test]
    fn circle_prolongation() {
        let e = catalog_embedding("circle 1", &plane(), None).unwrap();
        let p = prolong_embedding(&e, 2);
        assert_eq!(p.entry(0, 1), &e.source.parse("-sin(q)*q'").unwrap());
        let want = e.source.parse("-cos(q)*q'^2 - sin(q)*q''").unwrap();
        assert_eq!(simplify(&(p.entry(0, 2) - want)), Expr::zero());
    }

    #[test]
    fn slice_is_identity_on_coordinates() {
        let js = JetSpace::new("t", &["x", "y", "z"], 2).unwrap();
        let e = catalog_embedding("slice 2 3 5", &js, None).unwrap();
        let p = prolong_embedding(&e, 3);
        for l in 0..=3 {
            assert_eq!(p.entry(0, l), &e.source.coord(0, l));
            assert_eq!(p.entry(1, l), &e.source.coord(1, l));
            if l > 0 {
                assert!(p.entry(2, l).is_zero());
            }
        }
        assert_eq!(p.entry(2, 0), &Expr::int(5));
        let c = contact_pullback_coeffs(&e, 3);
        for l in 0..=2 {
            for s in 0..=l {
                for i in 0..2 {
                    let want = if i == 0 && s == l { 1 } else { 0 };
                    assert_eq!(c.get(0, l, i, s), Some(&Expr::int(want)));
                    assert_eq!(c.get(2, l, i, s), Some(&Expr::zero()));
                }
            }
        }
    }

    #[test]
    fn contact_coefficients_of_circle() {
        let e = catalog_embedding("circle 2", &plane(), None).unwrap();
        let c = contact_pullback_coeffs(&e, 2);
        let jac = e.jacobian();
        for s in 0..2 {
            assert_eq!(c.get(s, 0, 0, 0), Some(&jac[s][0]));
            assert_eq!(c.get(s, 1, 0, 1), Some(&jac[s][0]));
        }
        assert!(c.get(0, 2, 0, 0).is_none());
    }

    #[test]
    fn free_lagrangian_on_circle() {
        let e = catalog_embedding("circle 1", &plane(), None).unwrap();
        let lag = Lagrangian::parse(plane().with_order(1), "(x'^2 + y'^2)/2").unwrap();
        let pulled = pullback_lagrangian(&lag, &e).unwrap();
        assert_eq!(pulled.expr, e.source.parse("q'^2/2").unwrap());
        let one = Lagrangian::parse(plane().with_order(1), "1").unwrap();
        assert_eq!(pullback_lagrangian(&one, &e).unwrap().expr, Expr::one());
    }

    #[test]
    fn immersion() {
        let cfg = OracleConfig::default();
        let e = catalog_embedding("sphere", &JetSpace::new("t", &["x", "y", "z"], 2).unwrap(), None)
            .unwrap();
        let check = e.immersion_check(&cfg).unwrap();
        assert!(check.full_rank);
        assert_eq!(check.points, IMMERSION_POINTS);
        let src = JetSpace::new("t", &["q"], 2).unwrap();
        let flat = Embedding::new(src, plane(), vec![Expr::int(1), Expr::int(2)]).unwrap();
        assert!(!flat.immersion_check(&cfg).unwrap().full_rank);
    }

    #[test]
    fn validation() {
        let src = JetSpace::new("t", &["q"], 2).unwrap();
        let bad = Embedding::new(src.clone(), plane(), vec![src.parse("q'").unwrap(), Expr::one()]);
        assert!(bad.is_err());
        assert!(matches!(
            catalog_embedding("torus 1", &plane(), None),
            Err(Error::UnknownCatalog(_))
        ));
        assert!(catalog_embedding("sphere", &plane(), None).is_err());
        let clash = JetSpace::new("t", &["x"], 2).unwrap();
        assert!(Embedding::new(clash, plane(), vec![Expr::one(), Expr::one()]).is_err());
    }

    #[test]
    fn one_dim_rejects_surfaces_and_time() {
        let cfg = OracleConfig::default();
        let js = JetSpace::new("t", &["x", "y", "z"], 2).unwrap();
        let sphere = catalog_embedding("sphere", &js, None).unwrap();
        assert!(matches!(
            force_condition(&[Expr::zero(), Expr::zero(), Expr::zero()], &sphere),
            Err(Error::NotOneDimensional(2))
        ));
        let eps = SourceForm::parse(plane(), &["x'' + t", "y''"]).unwrap();
        let d = crate::variational::linear_accel_decompose(&eps, &cfg).unwrap();
        let circle = catalog_embedding("circle 1", &plane(), None).unwrap();
        assert!(matches!(
            one_dim_condition(&d, &circle, &cfg),
            Err(Error::TimeDependent)
        ));
    }

    #[test]
    fn position_only_forces_vanish() {
        let e = catalog_embedding("circle 1", &plane(), None).unwrap();
        let f = vec![plane().parse("x*y").unwrap(), plane().parse("sin(x)").unwrap()];
        assert_eq!(force_condition(&f, &e).unwrap(), Expr::zero());
    }
}
