use super::{rat, Expr, Func, Node, Symbol};
use num::{BigRational, One};

/// Exact partial derivative; symbols other than `v` are held constant.
pub(super) fn diff(e: &Expr, v: &Symbol) -> Expr {
    if !e.contains(v) {
        return Expr::zero();
    }
    match e.node() {
        Node::Num(_) | Node::Pi => Expr::zero(),
        Node::Var(s) => {
            if s == v {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Node::Add(ts) => Expr::add(ts.iter().map(|t| diff(t, v))),
        Node::Mul(fs) => {
            let mut terms = Vec::with_capacity(fs.len());
            for (i, f) in fs.iter().enumerate() {
                if !f.contains(v) {
                    continue;
                }
                let mut factors: Vec<Expr> = fs
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                factors.push(diff(f, v));
                terms.push(Expr::mul(factors));
            }
            Expr::add(terms)
        }
        Node::Pow(b, p) => {
            let lowered: BigRational = p - BigRational::one();
            Expr::mul([
                Expr::num(p.clone()),
                Expr::pow(b.clone(), lowered),
                diff(b, v),
            ])
        }
        Node::Func(f, a) => {
            let inner = diff(a, v);
            let outer = match f {
                Func::Sin => a.clone().cos(),
                Func::Cos => -(a.clone().sin()),
                Func::Tan => Expr::one() + Expr::powi(Expr::func(Func::Tan, a.clone()), 2),
                Func::Sqrt => Expr::rational(1, 2) * Expr::pow(a.clone(), rat(-1, 2)),
                Func::Exp => e.clone(),
                Func::Log => Expr::powi(a.clone(), -1),
                Func::Arcsin => Expr::pow(Expr::one() - Expr::powi(a.clone(), 2), rat(-1, 2)),
                Func::Arccos => -Expr::pow(Expr::one() - Expr::powi(a.clone(), 2), rat(-1, 2)),
                Func::Arctan => Expr::powi(Expr::one() + Expr::powi(a.clone(), 2), -1),
            };
            outer * inner
        }
    }
}
