//! Normalization to a polynomial over atoms.
//!
//! Atoms are symbols, `pi`, function applications with simplified arguments,
//! and powers that cannot be expanded. Positive integer powers of sums are
//! multiplied out, and every `cos(u)^n` with `n >= 2` is rewritten through
//! `cos(u)^2 = 1 - sin(u)^2`, which makes trigonometric polynomials canonical.

use std::collections::BTreeMap;

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use super::{Expr, Func, Node};

type Mono = BTreeMap<Expr, BigRational>;

#[derive(Clone, Debug, Default)]
struct Poly(BTreeMap<Mono, BigRational>);

const MAX_EXPAND_EXPONENT: i64 = 16;
const MAX_EXPAND_TERMS: usize = 20_000;

/// Returns an equivalent expression in expanded canonical form.
///
/// Two expressions that agree as polynomials over their atoms (after the
/// Pythagorean rewrite) simplify to structurally equal results.
pub fn simplify(e: &Expr) -> Expr {
    to_poly(e).into_expr()
}

impl Poly {
    fn constant(c: BigRational) -> Poly {
        let mut p = Poly::default();
        if !c.is_zero() {
            p.0.insert(Mono::new(), c);
        }
        p
    }

    fn atom(a: Expr, x: BigRational) -> Poly {
        let mut m = Mono::new();
        m.insert(a, x);
        let mut p = Poly::default();
        p.0.insert(m, BigRational::one());
        p
    }

    fn single(&self) -> Option<(&Mono, &BigRational)> {
        if self.0.len() == 1 {
            self.0.iter().next()
        } else {
            None
        }
    }

    fn as_constant(&self) -> Option<BigRational> {
        match self.0.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (m, c) = self.0.iter().next().unwrap();
                m.is_empty().then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.retain(|_, v| !v.is_zero());
        }
    }

    fn add(mut self, other: Poly) -> Poly {
        for (m, c) in other.0 {
            self.add_term(m, c);
        }
        self
    }

    fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::default();
        for (ma, ca) in &self.0 {
            for (mb, cb) in &other.0 {
                let (m, k) = mono_mul(ma, mb);
                out.add_term(m, k * ca * cb);
            }
        }
        out.reduce_trig()
    }

    fn reduce_trig(self) -> Poly {
        if !self.0.keys().any(|m| m.iter().any(reducible_cos)) {
            return self;
        }
        let mut out = Poly::default();
        for (m, c) in self.0 {
            let Some((a, x)) = m.iter().find(|entry| reducible_cos(*entry)) else {
                out.add_term(m, c);
                continue;
            };
            let a = a.clone();
            let n = x.to_integer().to_i64().unwrap();
            let Node::Func(_, u) = a.node() else {
                unreachable!()
            };
            let mut rest = m.clone();
            rest.remove(&a);
            if n % 2 == 1 {
                rest.insert(a.clone(), BigRational::one());
            }
            let mut base = Poly::default();
            base.0.insert(rest, c);
            let one_minus_sin2 = Poly::constant(BigRational::one()).add(Poly::atom(
                Expr::func(Func::Sin, u.clone()),
                BigRational::from_integer(2.into()),
            ).scale(&-BigRational::one()));
            let mut acc = base;
            for _ in 0..n / 2 {
                acc = acc.mul(&one_minus_sin2);
            }
            out = out.add(acc);
        }
        out.reduce_trig()
    }

    fn scale(mut self, k: &BigRational) -> Poly {
        if k.is_zero() {
            return Poly::default();
        }
        for c in self.0.values_mut() {
            *c *= k;
        }
        self
    }

    fn into_expr(self) -> Expr {
        Expr::add(self.0.into_iter().map(|(m, c)| {
            let mut fs = vec![Expr::num(c)];
            fs.extend(m.into_iter().map(|(a, x)| Expr::pow(a, x)));
            Expr::mul(fs)
        }))
    }
}

fn reducible_cos((a, x): (&Expr, &BigRational)) -> bool {
    matches!(a.node(), Node::Func(Func::Cos, _))
        && x.denom().is_one()
        && *x >= BigRational::from_integer(2.into())
}

fn mono_mul(a: &Mono, b: &Mono) -> (Mono, BigRational) {
    let mut m = a.clone();
    for (atom, x) in b {
        let slot = m.entry(atom.clone()).or_insert_with(BigRational::zero);
        *slot += x;
    }
    fold_mono(m)
}

// Drops zero exponents and folds exact numeric atoms into a coefficient.
fn fold_mono(m: Mono) -> (Mono, BigRational) {
    let mut coeff = BigRational::one();
    let mut out = Mono::new();
    for (atom, x) in m {
        if x.is_zero() {
            continue;
        }
        if atom.as_num().is_some() {
            match Expr::pow(atom.clone(), x.clone()).node() {
                Node::Num(r) => {
                    coeff *= r;
                    continue;
                }
                _ => {
                    out.insert(atom, x);
                    continue;
                }
            }
        }
        out.insert(atom, x);
    }
    (out, coeff)
}

fn to_poly(e: &Expr) -> Poly {
    match e.node() {
        Node::Num(r) => Poly::constant(r.clone()),
        Node::Pi | Node::Var(_) => Poly::atom(e.clone(), BigRational::one()),
        Node::Func(f, a) => {
            let g = Expr::func(*f, simplify(a));
            match g.node() {
                Node::Func(_, _) => Poly::atom(g, BigRational::one()),
                _ => to_poly(&g),
            }
        }
        Node::Add(ts) => ts
            .iter()
            .map(to_poly)
            .fold(Poly::default(), |acc, p| acc.add(p)),
        Node::Mul(fs) => fs
            .iter()
            .map(to_poly)
            .fold(Poly::constant(BigRational::one()), |acc, p| acc.mul(&p)),
        Node::Pow(b, x) => pow_poly(to_poly(b), x),
    }
}

fn pow_poly(p: Poly, x: &BigRational) -> Poly {
    if let Some(c) = p.as_constant() {
        return match Expr::pow(Expr::num(c.clone()), x.clone()).node() {
            Node::Num(r) => Poly::constant(r.clone()),
            _ => Poly::atom(Expr::num(c), x.clone()),
        };
    }
    if x.denom().is_one() {
        let n = x.to_integer().to_i64().unwrap_or(i64::MAX);
        if let Some((m, c)) = p.single() {
            if let Some(k) = exact(c, x) {
                let raised: Mono = m.iter().map(|(a, y)| (a.clone(), y * x)).collect();
                let (raised, k2) = fold_mono(raised);
                let mut out = Poly::default();
                out.0.insert(raised, k * k2);
                return out.reduce_trig();
            }
        }
        if n > 0 && n <= MAX_EXPAND_EXPONENT {
            let estimate = (p.0.len() as f64).powi(n as i32);
            if estimate <= MAX_EXPAND_TERMS as f64 {
                let mut acc = Poly::constant(BigRational::one());
                for _ in 0..n {
                    acc = acc.mul(&p);
                }
                return acc;
            }
        }
        return Poly::atom(p.into_expr(), x.clone());
    }
    if let Some((m, c)) = p.single() {
        if c.is_one() && m.len() == 1 {
            let (a, y) = m.iter().next().unwrap();
            if y.numer().abs().is_one() {
                return Poly::atom(a.clone(), y * x);
            }
        }
    }
    Poly::atom(p.into_expr(), x.clone())
}

fn exact(c: &BigRational, x: &BigRational) -> Option<BigRational> {
    Expr::pow(Expr::num(c.clone()), x.clone()).as_num().cloned()
}

#[cfg(test)]
mod tests {
    use super::super::{eval, rat, Assignment, Symbol};
    use super::*;

    fn x() -> Expr {
        Expr::jet("x", 0)
    }

    fn t() -> Expr {
        Expr::var(Symbol::base("t"))
    }

    #[test]
    fn pythagorean_identity() {
        let e = Expr::powi(t().sin(), 2) + Expr::powi(t().cos(), 2);
        assert_eq!(simplify(&e), Expr::one());
    }

    #[test]
    fn square_of_binomial() {
        let e = Expr::powi(x() + Expr::one(), 2) - Expr::powi(x(), 2) - Expr::int(2) * x();
        assert_eq!(simplify(&e), Expr::one());
    }

    #[test]
    fn unit_sphere_radius() {
        let (p, q) = (Expr::var(Symbol::base("p")), Expr::var(Symbol::base("q")));
        let xs = p.clone().cos() * q.clone().sin();
        let ys = p.sin() * q.clone().sin();
        let zs = q.cos();
        let r = (Expr::powi(xs, 2) + Expr::powi(ys, 2) + Expr::powi(zs, 2)).sqrt();
        assert_eq!(simplify(&r), Expr::one());
    }

    #[test]
    fn root_times_root() {
        let e = x().sqrt() * x().sqrt();
        assert_eq!(simplify(&e), x());
        let two = Expr::int(2).sqrt() * Expr::int(2).sqrt();
        assert_eq!(simplify(&two), Expr::int(2));
    }

    #[test]
    fn even_root_of_square_is_kept() {
        let e = Expr::pow(Expr::powi(x(), 2), rat(1, 2));
        let s = simplify(&e);
        assert_ne!(s, x());
        let a = Assignment::new().with(Symbol::jet("x", 0), -3.0);
        assert_eq!(eval(&s, &a).unwrap(), 3.0);
    }

    #[test]
    fn odd_cosine_power() {
        let c = t().cos();
        let e = Expr::powi(c.clone(), 3) + c.clone() * Expr::powi(t().sin(), 2);
        assert_eq!(simplify(&e), c);
    }

    #[test]
    fn reciprocal_cancels() {
        let s = x() + Expr::jet("y", 0);
        let e = Expr::powi(s.clone(), 3) * Expr::powi(s, -3);
        assert_eq!(simplify(&e), Expr::one());
    }
}
