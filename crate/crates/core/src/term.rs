//! Terms, equations, and their interpretation in a finite algebra.
//!
//! Terms are written as s-expressions: variables `x0 x1 ...`, applications
//! `(meet x0 (neg x1))`, nullary symbols `(zero)`. An equation is `(= t t')`.

use std::fmt;

use crate::algebra::{FiniteAlgebra, Signature};
use crate::codec;
use crate::error::{Error, Result};
use crate::table::FunctionTable;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Apply(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Self {
        Term::Var(i)
    }

    pub fn apply(op: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Apply(op.into(), args)
    }

    /// Largest variable index, `None` for ground terms.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Apply(_, args) => args.iter().filter_map(Term::max_var).max(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Apply(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Checks every application against `signature`.
    pub fn check(&self, signature: &Signature) -> Result<()> {
        match self {
            Term::Var(_) => Ok(()),
            Term::Apply(op, args) => {
                let arity = signature
                    .arity_of(op)
                    .ok_or_else(|| Error::Signature(format!("unknown symbol {op}")))?;
                if arity != args.len() {
                    return Err(Error::Shape(format!(
                        "{op} expects {arity} arguments, got {}",
                        args.len()
                    )));
                }
                args.iter().try_for_each(|a| a.check(signature))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Apply(op, args) => {
                write!(f, "({op}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An ordered pair of terms over `vars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
    vars: usize,
}

impl Equation {
    /// `vars` defaults to one more than the largest variable index (at least 1).
    pub fn new(lhs: Term, rhs: Term, vars: Option<usize>) -> Result<Self> {
        let needed = lhs.max_var().max(rhs.max_var()).map_or(1, |m| m + 1);
        let vars = vars.unwrap_or(needed);
        if vars < needed {
            return Err(Error::Domain(format!(
                "equation uses {needed} variables but only {vars} were declared"
            )));
        }
        Ok(Equation { lhs, rhs, vars })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    /// The same equation with one more (dummy) variable.
    pub fn padded(&self) -> Self {
        Equation {
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
            vars: self.vars + 1,
        }
    }

    pub fn check(&self, signature: &Signature) -> Result<()> {
        self.lhs.check(signature)?;
        self.rhs.check(signature)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(= {} {})", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexp(text: &str) -> Result<Sexp> {
    let mut toks = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        match c {
            '(' | ')' => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
                toks.push(c.to_string());
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    toks.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        toks.push(cur);
    }
    let mut pos = 0;
    let sexp = read_one(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(Error::parse(1, format!("malformed s-expression: trailing {:?}", toks[pos])));
    }
    Ok(sexp)
}

fn read_one(toks: &[String], pos: &mut usize) -> Result<Sexp> {
    let tok = toks
        .get(*pos)
        .ok_or_else(|| Error::parse(1, "malformed s-expression: unexpected end"))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let mut items = Vec::new();
            loop {
                match toks.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        return Ok(Sexp::List(items));
                    }
                    Some(_) => items.push(read_one(toks, pos)?),
                    None => return Err(Error::parse(1, "malformed s-expression: missing `)`")),
                }
            }
        }
        ")" => Err(Error::parse(1, "malformed s-expression: unexpected `)`")),
        atom => Ok(Sexp::Atom(atom.to_string())),
    }
}

fn parse_var(atom: &str) -> Option<usize> {
    let digits = atom.strip_prefix('x')?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

fn sexp_to_term(s: &Sexp, signature: &Signature) -> Result<Term> {
    match s {
        Sexp::Atom(a) => {
            if let Some(i) = parse_var(a) {
                Ok(Term::Var(i))
            } else if signature.arity_of(a) == Some(0) {
                Err(Error::parse(1, format!("nullary symbol {a} must be written ({a})")))
            } else {
                Err(Error::Signature(format!("unknown symbol {a}")))
            }
        }
        Sexp::List(items) => {
            let (head, rest) = items
                .split_first()
                .ok_or_else(|| Error::parse(1, "malformed s-expression: empty list"))?;
            let Sexp::Atom(op) = head else {
                return Err(Error::parse(1, "malformed s-expression: operator must be a symbol"));
            };
            let arity = signature
                .arity_of(op)
                .ok_or_else(|| Error::Signature(format!("unknown symbol {op}")))?;
            if arity != rest.len() {
                return Err(Error::Shape(format!(
                    "{op} expects {arity} arguments, got {}",
                    rest.len()
                )));
            }
            let args = rest
                .iter()
                .map(|a| sexp_to_term(a, signature))
                .collect::<Result<Vec<_>>>()?;
            Ok(Term::Apply(op.clone(), args))
        }
    }
}

pub fn parse_term(text: &str, signature: &Signature) -> Result<Term> {
    sexp_to_term(&read_sexp(text)?, signature)
}

/// Parses `(= t t')`; `vars` overrides the default variable count.
pub fn parse_equation(text: &str, signature: &Signature, vars: Option<usize>) -> Result<Equation> {
    match read_sexp(text)? {
        Sexp::List(items) if items.len() == 3 && items[0] == Sexp::Atom("=".into()) => {
            let lhs = sexp_to_term(&items[1], signature)?;
            let rhs = sexp_to_term(&items[2], signature)?;
            Equation::new(lhs, rhs, vars)
        }
        _ => Err(Error::parse(1, "an equation must have the form (= <term> <term>)")),
    }
}

/// Value of `term` under `assignment` (`x_i := assignment[i]`).
pub fn eval_term(algebra: &FiniteAlgebra, term: &Term, assignment: &[usize]) -> Result<usize> {
    match term {
        Term::Var(i) => {
            let v = *assignment
                .get(*i)
                .ok_or_else(|| Error::Domain(format!("missing binding for x{i}")))?;
            if v >= algebra.size() {
                return Err(Error::Domain(format!("x{i} = {v} is not an element")));
            }
            Ok(v)
        }
        Term::Apply(op, args) => {
            let operation = algebra
                .op(op)
                .ok_or_else(|| Error::Signature(format!("unknown symbol {op}")))?;
            if operation.arity() != args.len() {
                return Err(Error::Shape(format!(
                    "{op} expects {} arguments, got {}",
                    operation.arity(),
                    args.len()
                )));
            }
            let mut index = 0usize;
            for a in args {
                index = index * algebra.size() + eval_term(algebra, a, assignment)?;
            }
            Ok(operation.table.at(index))
        }
    }
}

/// The term function `t^A` as a `k`-ary table.
pub fn compile_term(algebra: &FiniteAlgebra, term: &Term, k: usize) -> Result<FunctionTable> {
    if let Some(m) = term.max_var() {
        if m >= k {
            return Err(Error::Domain(format!("term uses x{m} but arity is {k}")));
        }
    }
    term.check(&algebra.signature())?;
    let n = algebra.size();
    let points = codec::points(n, k)?;
    Ok(FunctionTable::from_raw(n, k, compile_entries(algebra, term, k, points)))
}

fn compile_entries(algebra: &FiniteAlgebra, term: &Term, k: usize, points: usize) -> Vec<u8> {
    let n = algebra.size();
    match term {
        Term::Var(i) => {
            // x_i's digit repeats in blocks of n^(k-1-i)
            let block = n.pow((k - 1 - i) as u32);
            (0..points).map(|p| ((p / block) % n) as u8).collect()
        }
        Term::Apply(op, args) => {
            let table = &algebra.op(op).expect("checked").table;
            if args.is_empty() {
                return vec![table.entries()[0]; points];
            }
            let children: Vec<Vec<u8>> = args
                .iter()
                .map(|a| compile_entries(algebra, a, k, points))
                .collect();
            (0..points)
                .map(|p| {
                    let idx = children.iter().fold(0usize, |acc, c| acc * n + c[p] as usize);
                    table.entries()[idx]
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::{builtin_algebra, BuiltinSpec};

    fn boolean2() -> FiniteAlgebra {
        builtin_algebra(&BuiltinSpec::parse("boolean2").unwrap()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let sig = boolean2().signature();
        assert_eq!(
            parse_term("(meet x0 x1)", &sig).unwrap(),
            Term::apply("meet", vec![Term::Var(0), Term::Var(1)])
        );
        assert_eq!(parse_term("x3", &sig).unwrap(), Term::Var(3));
        let err = parse_term("(meet x0)", &sig).unwrap_err().to_string();
        assert!(err.contains("meet expects 2 arguments"), "{err}");
        assert!(parse_term("(frob x0)", &sig).is_err());
        assert!(parse_term("(meet x0 x1", &sig).is_err());
        assert!(parse_term("zero", &sig).is_err());
        assert_eq!(parse_term("(zero)", &sig).unwrap(), Term::apply("zero", vec![]));
    }

    #[test]
    fn equation_var_count() {
        let sig = boolean2().signature();
        let e = parse_equation("(= (meet x0 x1) (zero))", &sig, None).unwrap();
        assert_eq!(e.vars(), 2);
        let e = parse_equation("(= (zero) (one))", &sig, None).unwrap();
        assert_eq!(e.vars(), 1);
        assert!(parse_equation("(= x3 x0)", &sig, Some(2)).is_err());
        assert!(parse_equation("(meet x0 x1)", &sig, None).is_err());
    }

    #[test]
    fn eval_examples() {
        let b = boolean2();
        let t = parse_term("(meet x0 x1)", &b.signature()).unwrap();
        assert_eq!(eval_term(&b, &t, &[1, 1]).unwrap(), 1);
        assert!(eval_term(&b, &t, &[1]).is_err());

        let z3 = builtin_algebra(&BuiltinSpec::parse("zp:3").unwrap()).unwrap();
        let t = parse_term("(add x0 (neg x0))", &z3.signature()).unwrap();
        assert_eq!(eval_term(&z3, &t, &[2]).unwrap(), 0);

        // pentagon: 0 < a < b < 1, 0 < c < 1 stored as 0, a=1, b=2, c=3, 1=4
        let n5 = builtin_algebra(&BuiltinSpec::parse("pentagon").unwrap()).unwrap();
        let t = parse_term("(meet x0 x1)", &n5.signature()).unwrap();
        assert_eq!(eval_term(&n5, &t, &[1, 3]).unwrap(), 0);
    }

    #[test]
    fn compile_examples() {
        let b = boolean2();
        let sig = b.signature();
        let t = parse_term("(meet x0 x1)", &sig).unwrap();
        assert_eq!(compile_term(&b, &t, 2).unwrap().entries(), &[0, 0, 0, 1]);
        assert_eq!(compile_term(&b, &Term::Var(0), 2).unwrap().entries(), &[0, 0, 1, 1]);
        let one = parse_term("(one)", &sig).unwrap();
        assert_eq!(compile_term(&b, &one, 1).unwrap().entries(), &[1, 1]);
        assert!(compile_term(&b, &Term::Var(2), 2).is_err());
    }

    #[test]
    fn compile_agrees_with_eval() {
        let s3 = builtin_algebra(&BuiltinSpec::parse("s3").unwrap()).unwrap();
        let t = parse_term("(mul (inv x1) (mul x0 (mul x2 x0)))", &s3.signature()).unwrap();
        let table = compile_term(&s3, &t, 3).unwrap();
        for i in 0..table.len() {
            let tuple = codec::index_tuple(i, 3, 6).unwrap();
            assert_eq!(table.at(i), eval_term(&s3, &t, &tuple).unwrap());
        }
    }

    #[test]
    fn display_roundtrip() {
        let sig = boolean2().signature();
        let text = "(join (neg x2) (meet x0 (one)))";
        assert_eq!(parse_term(text, &sig).unwrap().to_string(), text);
    }
}
