#![allow(dead_code)]

use varsub_core::expr::{Expr, Symbol};
use varsub_core::jet::JetSpace;
use varsub_core::oracle::{is_zero, random_polynomial, OracleConfig, ZeroTest};
use varsub_core::variational::{ABDecomposition, Lagrangian, SourceForm};

pub fn cfg() -> OracleConfig {
    OracleConfig::default()
}

pub fn space(fibers: &[&str], r: u32) -> JetSpace {
    JetSpace::new("t", fibers, r).unwrap()
}

/// Zero under the default seed and, when only probabilistic, under `seed + 1` too.
pub fn zero_twice(e: &Expr) -> bool {
    let c = cfg();
    match is_zero(e, &c).unwrap() {
        ZeroTest::Zero(varsub_core::oracle::Certainty::Symbolic) => true,
        ZeroTest::Zero(_) => is_zero(e, &c.with_seed(c.seed + 1)).unwrap().passed(),
        ZeroTest::NonZero(_) => false,
    }
}

pub fn jets(js: &JetSpace, up_to: u32) -> Vec<Symbol> {
    let mut out = Vec::new();
    for l in 0..=up_to {
        for s in 0..js.dim() {
            out.push(js.symbol(s, l));
        }
    }
    out
}

pub fn random_lagrangian(js: &JetSpace, degree: u32, seed: u64) -> Lagrangian {
    let mut syms = jets(js, js.order());
    syms.push(js.base_symbol());
    Lagrangian::new(js.clone(), random_polynomial(&syms, degree, 6, seed)).unwrap()
}

/// `A + B ẍ` with polynomial coefficients in positions and velocities.
pub fn random_affine(js: &JetSpace, degree: u32, seed: u64) -> ABDecomposition {
    let syms = jets(js, 1);
    let m = js.dim();
    let a = (0..m)
        .map(|s| random_polynomial(&syms, degree, 3, seed * 31 + s as u64))
        .collect();
    let b = (0..m)
        .map(|s| {
            (0..m)
                .map(|n| random_polynomial(&syms, degree, 2, seed * 97 + (s * m + n) as u64 + 7))
                .collect()
        })
        .collect();
    ABDecomposition::new(js.clone(), a, b).unwrap()
}

pub fn source(js: &JetSpace, texts: &[&str]) -> SourceForm {
    SourceForm::parse(js.clone(), texts).unwrap()
}
