use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use num::{Signed, ToPrimitive};
use thiserror::Error;

use super::{Expr, Func, Node, Symbol};

/// Finite real values bound to symbols.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assignment(BTreeMap<Symbol, f64>);

impl Assignment {
    pub fn new() -> Self {
        Assignment(BTreeMap::new())
    }

    pub fn set(&mut self, s: Symbol, v: f64) {
        self.0.insert(s, v);
    }

    pub fn with(mut self, s: Symbol, v: f64) -> Self {
        self.set(s, v);
        self
    }

    pub fn get(&self, s: &Symbol) -> Option<f64> {
        self.0.get(s).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Symbol, &f64)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(Symbol, f64)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Symbol, f64)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

impl serde::Serialize for Assignment {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = ser.serialize_map(Some(self.0.len()))?;
        for (s, v) in &self.0 {
            m.serialize_entry(&s.to_string(), v)?;
        }
        m.end()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (s, v)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}: {v}")?;
        }
        f.write_str("}")
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("unbound symbol `{0}`")]
    Unbound(Symbol),
    #[error("domain error: {func} at {arg}")]
    Domain { func: &'static str, arg: f64 },
    #[error("non-finite result")]
    NonFinite,
}

/// IEEE double evaluation; never returns a non-finite value.
pub fn eval(e: &Expr, a: &Assignment) -> Result<f64, EvalError> {
    eval_with_scale(e, a).map(|(v, _)| v)
}

/// Value together with the largest magnitude of any subterm.
pub fn eval_with_scale(e: &Expr, a: &Assignment) -> Result<(f64, f64), EvalError> {
    let mut scale = 0.0f64;
    let v = walk(e, a, &mut scale)?;
    Ok((v, scale))
}

fn finite(v: f64) -> Result<f64, EvalError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite)
    }
}

fn walk(e: &Expr, a: &Assignment, scale: &mut f64) -> Result<f64, EvalError> {
    let v = match e.node() {
        Node::Num(r) => r.to_f64().ok_or(EvalError::NonFinite)?,
        Node::Pi => PI,
        Node::Var(s) => a.get(s).ok_or_else(|| EvalError::Unbound(s.clone()))?,
        Node::Add(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += walk(t, a, scale)?;
            }
            acc
        }
        Node::Mul(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= walk(f, a, scale)?;
            }
            acc
        }
        Node::Pow(b, p) => {
            let base = walk(b, a, scale)?;
            power(base, p)?
        }
        Node::Func(f, x) => {
            let arg = walk(x, a, scale)?;
            apply(*f, arg)?
        }
    };
    let v = finite(v)?;
    *scale = scale.max(v.abs());
    Ok(v)
}

fn power(base: f64, p: &num::BigRational) -> Result<f64, EvalError> {
    if p.denom() == &num::BigInt::from(1) {
        let n = p.numer().to_i32().ok_or(EvalError::NonFinite)?;
        if base == 0.0 && n < 0 {
            return Err(EvalError::NonFinite);
        }
        return finite(base.powi(n));
    }
    let pf = p.to_f64().ok_or(EvalError::NonFinite)?;
    if base < 0.0 {
        let q = p.denom();
        if (q % 2u32) == num::BigInt::from(0) {
            return Err(EvalError::Domain {
                func: "fractional power",
                arg: base,
            });
        }
        let mag = (-base).powf(pf);
        let odd_numer = (p.numer().abs() % 2u32) == num::BigInt::from(1);
        return finite(if odd_numer { -mag } else { mag });
    }
    if base == 0.0 && pf < 0.0 {
        return Err(EvalError::NonFinite);
    }
    finite(base.powf(pf))
}

fn apply(f: Func, x: f64) -> Result<f64, EvalError> {
    let domain = |func| Err(EvalError::Domain { func, arg: x });
    let v = match f {
        Func::Sin => x.sin(),
        Func::Cos => x.cos(),
        Func::Tan => x.tan(),
        Func::Sqrt => {
            if x < 0.0 {
                return domain("sqrt");
            }
            x.sqrt()
        }
        Func::Exp => x.exp(),
        Func::Log => {
            if x <= 0.0 {
                return domain("log");
            }
            x.ln()
        }
        Func::Arcsin => {
            if !(-1.0..=1.0).contains(&x) {
                return domain("arcsin");
            }
            x.asin()
        }
        Func::Arccos => {
            if !(-1.0..=1.0).contains(&x) {
                return domain("arccos");
            }
            x.acos()
        }
        Func::Arctan => x.atan(),
    };
    finite(v)
}
