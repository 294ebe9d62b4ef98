use std::fmt;

use num::{BigRational, One, Signed, Zero};

use super::{Expr, Node};

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

fn render(e: &Expr) -> String {
    match e.node() {
        Node::Num(r) => r.to_string(),
        Node::Pi => "pi".into(),
        Node::Var(s) => s.to_string(),
        Node::Func(func, a) => format!("{}({})", func.name(), render(a)),
        Node::Add(ts) => render_sum(ts),
        Node::Mul(_) | Node::Pow(_, _) => render_product(e),
    }
}

fn render_sum(ts: &[Expr]) -> String {
    let mut out = String::new();
    for (i, t) in ts.iter().enumerate() {
        let (c, _) = t.split_coefficient();
        let negative = c.is_negative();
        let body = if negative { render(&-t) } else { render(t) };
        match (i, negative) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

fn render_product(e: &Expr) -> String {
    let (coeff, rest) = e.split_coefficient();
    let factors: Vec<Expr> = match rest.node() {
        Node::Mul(fs) => fs.clone(),
        _ => vec![rest.clone()],
    };
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<String> = Vec::new();
    let p = coeff.numer().abs();
    let q = coeff.denom().clone();
    let mut numeric_num = !p.is_one();
    for f in &factors {
        if f.is_one() {
            continue;
        }
        let (b, x) = f.pow_parts();
        if x.is_negative() {
            den.push(power(&b, &-x));
        } else {
            num.push(power(&b, &x));
        }
    }
    if num.is_empty() {
        numeric_num = true;
    }
    let mut head: Vec<String> = Vec::new();
    if numeric_num {
        head.push(p.to_string());
    }
    head.extend(num);
    let mut out = String::new();
    if coeff.is_negative() {
        out.push('-');
    }
    out.push_str(&head.join("*"));
    let mut tail: Vec<String> = Vec::new();
    if !q.is_one() {
        tail.push(q.to_string());
    }
    tail.extend(den);
    match tail.len() {
        0 => {}
        1 => {
            out.push('/');
            out.push_str(&tail[0]);
        }
        _ => {
            out.push_str("/(");
            out.push_str(&tail.join("*"));
            out.push(')');
        }
    }
    out
}

// `b^x` for a positive exponent, formatted as a single factor.
fn power(b: &Expr, x: &BigRational) -> String {
    if x.is_one() {
        return factor(b);
    }
    if *x == BigRational::new(1.into(), 2.into()) {
        return format!("sqrt({})", render(b));
    }
    let exp = if x.denom().is_one() {
        x.to_string()
    } else {
        format!("({x})")
    };
    format!("{}^{}", atom(b), exp)
}

// Operand of `*` or `/`.
fn factor(e: &Expr) -> String {
    match e.node() {
        Node::Add(_) => format!("({})", render(e)),
        Node::Num(r) if r.is_negative() || !r.denom().is_one() => format!("({r})"),
        Node::Mul(_) => format!("({})", render(e)),
        Node::Pow(_, x) if x.is_negative() => format!("({})", render(e)),
        _ => render(e),
    }
}

// Base of `^`.
fn atom(e: &Expr) -> String {
    match e.node() {
        Node::Var(_) | Node::Pi | Node::Func(_, _) => render(e),
        Node::Num(r) if !r.is_negative() && r.denom().is_one() => render(e),
        Node::Num(r) if r.is_zero() => "0".into(),
        _ => format!("({})", render(e)),
    }
}
