//! Immutable symbolic expressions over jet coordinates.
//!
//! Every [`Expr`] is built through smart constructors that keep it in a light
//! canonical form: sums and products are flattened, numeric factors are
//! folded, like terms and equal bases are collected, and children are kept
//! in a deterministic total order. [`simplify`] performs the heavier
//! normalization (distribution and the Pythagorean rewrite).

mod diff;
mod eval;
mod parse;
mod print;
mod simplify;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops;
use std::sync::Arc;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

pub use eval::{eval, eval_with_scale, Assignment, EvalError};
pub use parse::{parse_expr, ParseContext, ParseError, ParseErrorKind};
pub use simplify::simplify;

/// A coordinate appearing in an expression.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// The base (time) variable.
    Base(Arc<str>),
    /// Jet coordinate `y^σ_l`, named by its fiber.
    Jet { fiber: Arc<str>, order: u32 },
    /// A free parameter, sampled like any coordinate.
    Param(Arc<str>),
}

impl Symbol {
    pub fn base(name: &str) -> Self {
        Symbol::Base(Arc::from(name))
    }

    pub fn jet(fiber: &str, order: u32) -> Self {
        Symbol::Jet {
            fiber: Arc::from(fiber),
            order,
        }
    }

    pub fn param(name: &str) -> Self {
        Symbol::Param(Arc::from(name))
    }

    /// Derivative order of a jet coordinate, `None` for base and parameters.
    pub fn jet_order(&self) -> Option<u32> {
        match self {
            Symbol::Jet { order, .. } => Some(*order),
            _ => None,
        }
    }

    /// The same fiber one derivative higher.
    pub fn raised(&self) -> Option<Symbol> {
        match self {
            Symbol::Jet { fiber, order } => Some(Symbol::Jet {
                fiber: fiber.clone(),
                order: order + 1,
            }),
            _ => None,
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Base(n) | Symbol::Param(n) => f.write_str(n),
            Symbol::Jet { fiber, order } => match order {
                0 => f.write_str(fiber),
                1 => write!(f, "{fiber}'"),
                2 => write!(f, "{fiber}''"),
                l => write!(f, "{fiber}_{l}"),
            },
        }
    }
}

/// Elementary unary functions recognized by the grammar.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sqrt,
    Exp,
    Log,
    Arcsin,
    Arccos,
    Arctan,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sqrt,
        Func::Exp,
        Func::Log,
        Func::Arcsin,
        Func::Arccos,
        Func::Arctan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Arcsin => "arcsin",
            Func::Arccos => "arccos",
            Func::Arctan => "arctan",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Node of an expression tree. Variant order defines the canonical ordering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Num(BigRational),
    Pi,
    Var(Symbol),
    Pow(Expr, BigRational),
    Func(Func, Expr),
    Mul(Vec<Expr>),
    Add(Vec<Expr>),
}

/// Shared immutable expression tree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Expr(Arc<Node>);

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Expr({self})")
    }
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

// Exact powers are only folded below this exponent size.
const MAX_FOLD_EXPONENT: i64 = 256;

impl Expr {
    fn wrap(node: Node) -> Expr {
        Expr(Arc::new(node))
    }

    pub fn node(&self) -> &Node {
        &self.0
    }

    pub fn num(r: BigRational) -> Expr {
        Expr::wrap(Node::Num(r))
    }

    pub fn int(n: i64) -> Expr {
        Expr::num(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::num(rat(n, d))
    }

    pub fn zero() -> Expr {
        Expr::int(0)
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn pi() -> Expr {
        Expr::wrap(Node::Pi)
    }

    pub fn var(s: Symbol) -> Expr {
        Expr::wrap(Node::Var(s))
    }

    pub fn jet(fiber: &str, order: u32) -> Expr {
        Expr::var(Symbol::jet(fiber, order))
    }

    pub fn as_num(&self) -> Option<&BigRational> {
        match self.node() {
            Node::Num(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_num().is_some_and(|r| r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_num().is_some_and(|r| r.is_one())
    }

    pub fn as_symbol(&self) -> Option<&Symbol> {
        match self.node() {
            Node::Var(s) => Some(s),
            _ => None,
        }
    }

    /// Sum with flattening and like-term collection.
    pub fn add(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut collected: BTreeMap<Expr, BigRational> = BTreeMap::new();
        let mut constant = BigRational::zero();
        let mut stack: Vec<Expr> = terms.into_iter().collect();
        stack.reverse();
        while let Some(t) = stack.pop() {
            match t.node() {
                Node::Add(inner) => stack.extend(inner.iter().rev().cloned()),
                Node::Num(r) => constant += r,
                _ => {
                    let (c, mono) = t.split_coefficient();
                    *collected.entry(mono).or_insert_with(BigRational::zero) += c;
                }
            }
        }
        let mut out: Vec<Expr> = Vec::with_capacity(collected.len() + 1);
        if !constant.is_zero() {
            out.push(Expr::num(constant));
        }
        for (mono, c) in collected {
            if c.is_zero() {
                continue;
            }
            out.push(Expr::scaled(c, mono));
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => {
                out.sort();
                Expr::wrap(Node::Add(out))
            }
        }
    }

    /// Splits `c * rest` with `c` the leading rational coefficient.
    pub fn split_coefficient(&self) -> (BigRational, Expr) {
        match self.node() {
            Node::Num(r) => (r.clone(), Expr::one()),
            Node::Mul(fs) => match fs[0].node() {
                Node::Num(r) => {
                    let rest: Vec<Expr> = fs[1..].to_vec();
                    let rest = if rest.len() == 1 {
                        rest.into_iter().next().unwrap()
                    } else {
                        Expr::wrap(Node::Mul(rest))
                    };
                    (r.clone(), rest)
                }
                _ => (BigRational::one(), self.clone()),
            },
            _ => (BigRational::one(), self.clone()),
        }
    }

    // Rebuilds `c * mono` for an already canonical coefficient-free monomial.
    fn scaled(c: BigRational, mono: Expr) -> Expr {
        if c.is_one() {
            return mono;
        }
        if mono.is_one() {
            return Expr::num(c);
        }
        let mut fs = vec![Expr::num(c)];
        match mono.node() {
            Node::Mul(inner) => fs.extend(inner.iter().cloned()),
            _ => fs.push(mono),
        }
        Expr::wrap(Node::Mul(fs))
    }

    /// Product with flattening, coefficient folding and exponent collection.
    pub fn mul(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let mut coeff = BigRational::one();
        let mut bases: BTreeMap<Expr, BigRational> = BTreeMap::new();
        let mut stack: Vec<Expr> = factors.into_iter().collect();
        while let Some(f) = stack.pop() {
            match f.node() {
                Node::Num(r) => coeff *= r,
                Node::Mul(inner) => stack.extend(inner.iter().cloned()),
                Node::Pow(b, e) => {
                    *bases.entry(b.clone()).or_insert_with(BigRational::zero) += e;
                }
                _ => {
                    *bases.entry(f.clone()).or_insert_with(BigRational::zero) += BigRational::one();
                }
            }
        }
        if let Some(e) = bases.get(&Expr::zero()) {
            // Division by zero absorbs everything else.
            if e.is_positive() {
                return Expr::zero();
            }
            return Expr::wrap(Node::Pow(Expr::zero(), rat(-1, 1)));
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        let mut out: Vec<Expr> = Vec::with_capacity(bases.len());
        let several = bases.len() > 1;
        for (b, e) in bases {
            let p = if matches!(b.node(), Node::Add(_)) && is_integer(&e) && (several || !e.is_one()) {
                // Pull the numeric content out of sum factors so products are canonical.
                let (c, prim) = b.content();
                let k = num::pow::pow(c, e.numer().abs().to_usize().unwrap_or(0));
                if e.is_negative() {
                    coeff /= k;
                } else {
                    coeff *= k;
                }
                if e.is_one() {
                    prim
                } else {
                    Expr::wrap(Node::Pow(prim, e))
                }
            } else {
                Expr::pow(b, e)
            };
            match p.node() {
                Node::Num(r) => coeff *= r,
                Node::Mul(inner) => {
                    for g in inner {
                        match g.node() {
                            Node::Num(r) => coeff *= r,
                            _ => out.push(g.clone()),
                        }
                    }
                }
                _ => out.push(p),
            }
        }
        if coeff.is_zero() {
            return Expr::zero();
        }
        // Re-merge in case folding produced repeated bases.
        if out.iter().enumerate().any(|(i, a)| {
            out[i + 1..]
                .iter()
                .any(|b| a.pow_parts().0 == b.pow_parts().0)
        }) {
            let mut fs = vec![Expr::num(coeff)];
            fs.extend(out);
            return Expr::mul(fs);
        }
        out.sort();
        if out.len() == 1 {
            let only = out.pop().unwrap();
            if coeff.is_one() {
                return only;
            }
            if let Node::Add(terms) = only.node() {
                return Expr::add(terms.iter().map(|t| Expr::scaled_term(&coeff, t)));
            }
            out.push(only);
        }
        if out.is_empty() {
            return Expr::num(coeff);
        }
        if !coeff.is_one() {
            out.insert(0, Expr::num(coeff));
        }
        Expr::wrap(Node::Mul(out))
    }

    // `(c, p)` with `self = c·p` and the term of least monomial in `p` monic.
    fn content(&self) -> (BigRational, Expr) {
        let Node::Add(ts) = self.node() else {
            return (BigRational::one(), self.clone());
        };
        let lead = ts
            .iter()
            .map(Expr::split_coefficient)
            .min_by(|a, b| a.1.cmp(&b.1))
            .map(|(c, _)| c)
            .unwrap_or_else(BigRational::one);
        let inv = lead.recip();
        (lead, Expr::add(ts.iter().map(|t| Expr::scaled_term(&inv, t))))
    }

    fn scaled_term(c: &BigRational, t: &Expr) -> Expr {
        let (tc, mono) = t.split_coefficient();
        Expr::scaled(tc * c, mono)
    }

    /// `(base, exponent)` of a factor; non-powers have exponent 1.
    pub fn pow_parts(&self) -> (Expr, BigRational) {
        match self.node() {
            Node::Pow(b, e) => (b.clone(), e.clone()),
            _ => (self.clone(), BigRational::one()),
        }
    }

    /// Power with a rational exponent.
    pub fn pow(base: Expr, exp: BigRational) -> Expr {
        if exp.is_zero() {
            return Expr::one();
        }
        if exp.is_one() {
            return base;
        }
        match base.node() {
            Node::Num(b) => {
                if b.is_one() {
                    return Expr::one();
                }
                if b.is_zero() {
                    if exp.is_positive() {
                        return Expr::zero();
                    }
                    return Expr::wrap(Node::Pow(base, rat(-1, 1)));
                }
                if let Some(r) = exact_power(b, &exp) {
                    return Expr::num(r);
                }
                Expr::wrap(Node::Pow(base, exp))
            }
            Node::Pow(inner, e0) if is_integer(&exp) => Expr::pow(inner.clone(), e0 * &exp),
            Node::Mul(fs) if is_integer(&exp) => {
                Expr::mul(fs.iter().map(|f| Expr::pow(f.clone(), exp.clone())))
            }
            Node::Add(_) if is_integer(&exp) => Expr::mul([Expr::wrap(Node::Pow(base, exp))]),
            _ => Expr::wrap(Node::Pow(base, exp)),
        }
    }

    pub fn powi(base: Expr, n: i64) -> Expr {
        Expr::pow(base, rat(n, 1))
    }

    /// Unary function application with a few exact folds.
    pub fn func(f: Func, arg: Expr) -> Expr {
        if f == Func::Sqrt {
            return Expr::pow(arg, rat(1, 2));
        }
        if arg.is_zero() {
            match f {
                Func::Sin | Func::Tan | Func::Arcsin | Func::Arctan => return Expr::zero(),
                Func::Cos | Func::Exp => return Expr::one(),
                _ => {}
            }
        }
        if f == Func::Log && arg.is_one() {
            return Expr::zero();
        }
        Expr::wrap(Node::Func(f, arg))
    }

    pub fn sin(self) -> Expr {
        Expr::func(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::func(Func::Cos, self)
    }

    pub fn sqrt(self) -> Expr {
        Expr::func(Func::Sqrt, self)
    }

    pub fn recip(self) -> Expr {
        Expr::powi(self, -1)
    }

    /// All symbols occurring in the expression.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<Symbol>) {
        match self.node() {
            Node::Num(_) | Node::Pi => {}
            Node::Var(s) => {
                out.insert(s.clone());
            }
            Node::Pow(b, _) | Node::Func(_, b) => b.collect_symbols(out),
            Node::Mul(cs) | Node::Add(cs) => cs.iter().for_each(|c| c.collect_symbols(out)),
        }
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        match self.node() {
            Node::Num(_) | Node::Pi => false,
            Node::Var(v) => v == s,
            Node::Pow(b, _) | Node::Func(_, b) => b.contains(s),
            Node::Mul(cs) | Node::Add(cs) => cs.iter().any(|c| c.contains(s)),
        }
    }

    /// Highest jet order present, `None` if no jet coordinate occurs.
    pub fn jet_order(&self) -> Option<u32> {
        self.symbols().iter().filter_map(Symbol::jet_order).max()
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self.node() {
            Node::Num(_) | Node::Pi | Node::Var(_) => 1,
            Node::Pow(b, _) | Node::Func(_, b) => 1 + b.size(),
            Node::Mul(cs) | Node::Add(cs) => 1 + cs.iter().map(Expr::size).sum::<usize>(),
        }
    }

    /// Simultaneous substitution of symbols, rebuilt canonically.
    pub fn subst(&self, bindings: &HashMap<Symbol, Expr>) -> Expr {
        if bindings.is_empty() {
            return self.clone();
        }
        match self.node() {
            Node::Num(_) | Node::Pi => self.clone(),
            Node::Var(s) => bindings.get(s).cloned().unwrap_or_else(|| self.clone()),
            Node::Pow(b, e) => Expr::pow(b.subst(bindings), e.clone()),
            Node::Func(f, a) => Expr::func(*f, a.subst(bindings)),
            Node::Mul(cs) => Expr::mul(cs.iter().map(|c| c.subst(bindings))),
            Node::Add(cs) => Expr::add(cs.iter().map(|c| c.subst(bindings))),
        }
    }

    /// Partial derivative with respect to `v`.
    pub fn diff(&self, v: &Symbol) -> Expr {
        diff::diff(self, v)
    }

    /// Approximate numeric value of a constant expression (no symbols).
    pub fn to_f64(&self) -> Option<f64> {
        if !self.symbols().is_empty() {
            return None;
        }
        eval(self, &Assignment::new()).ok()
    }
}

/// `b^e` when it is an exact rational.
fn exact_power(b: &BigRational, e: &BigRational) -> Option<BigRational> {
    let p = e.numer().to_i64()?;
    let q = e.denom().to_i64()?;
    if p.abs() > MAX_FOLD_EXPONENT || q > MAX_FOLD_EXPONENT {
        return None;
    }
    let root = if q == 1 {
        b.clone()
    } else {
        if b.is_negative() && q % 2 == 0 {
            return None;
        }
        let n = exact_root(b.numer(), q as u32)?;
        let d = exact_root(b.denom(), q as u32)?;
        BigRational::new(n, d)
    };
    let mut out = num::pow::pow(root, p.unsigned_abs() as usize);
    if p < 0 {
        out = out.recip();
    }
    Some(out)
}

fn exact_root(n: &BigInt, q: u32) -> Option<BigInt> {
    let r = n.nth_root(q);
    if num::pow::pow(r.clone(), q as usize) == *n {
        Some(r)
    } else {
        None
    }
}

impl serde::Serialize for Expr {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<Symbol> for Expr {
    fn from(s: Symbol) -> Expr {
        Expr::var(s)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl ops::$tr<Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs)
            }
        }
        impl ops::$tr<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs.clone())
            }
        }
        impl ops::$tr<&Expr> for Expr {
            type Output = Expr;
            fn $method(self, rhs: &Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self, rhs.clone())
            }
        }
        impl ops::$tr<Expr> for &Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                let f: fn(Expr, Expr) -> Expr = $body;
                f(self.clone(), rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::add([a, b]));
binop!(Sub, sub, |a, b| Expr::add([a, -b]));
binop!(Mul, mul, |a, b| Expr::mul([a, b]));
binop!(Div, div, |a, b| Expr::mul([a, Expr::powi(b, -1)]));

impl ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::mul([Expr::int(-1), self])
    }
}

impl ops::Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -(self.clone())
    }
}

impl std::iter::Sum for Expr {
    fn sum<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::add(iter)
    }
}

impl std::iter::Product for Expr {
    fn product<I: Iterator<Item = Expr>>(iter: I) -> Expr {
        Expr::mul(iter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Expr {
        Expr::jet("x", 0)
    }

    #[test]
    fn sums_collect_like_terms() {
        assert_eq!(x() + x(), Expr::int(2) * x());
        assert_eq!(x() - x(), Expr::zero());
    }

    #[test]
    fn products_commute_structurally() {
        let a = Expr::jet("x", 1);
        let b = Expr::jet("x", 2);
        let lhs = Expr::powi(a.clone(), 2) * &b;
        let rhs = &b * Expr::powi(a, 2);
        assert_eq!(lhs.clone() - rhs, Expr::zero());
    }

    #[test]
    fn trivial_powers() {
        assert_eq!(Expr::powi(x(), 0), Expr::one());
        assert_eq!(Expr::powi(x(), 1), x());
        assert_eq!(Expr::pow(Expr::int(4), rat(1, 2)), Expr::int(2));
        assert_eq!(Expr::pow(Expr::int(2), rat(3, 1)), Expr::int(8));
        assert!(matches!(
            Expr::pow(Expr::int(2), rat(1, 2)).node(),
            Node::Pow(_, _)
        ));
    }

    #[test]
    fn nested_sums_flatten() {
        let e = Expr::add([x(), Expr::add([Expr::one(), Expr::jet("y", 0)])]);
        match e.node() {
            Node::Add(ts) => assert_eq!(ts.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficient_distributes_over_sum() {
        let s = x() + Expr::one();
        let e = Expr::int(2) * s;
        assert_eq!(e, Expr::int(2) * x() + Expr::int(2));
    }

    #[test]
    fn rationals_in_lowest_terms() {
        let r = Expr::rational(4, -6);
        assert_eq!(r.as_num().unwrap(), &rat(-2, 3));
        assert!(r.as_num().unwrap().denom().is_positive());
    }
}
