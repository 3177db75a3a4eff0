//! A small textual language for string diagrams.
//!
//! `f . g` is the composite `f ∘ g` (apply `g` first) and `f * g` the tensor
//! product; `*` binds tighter than `.`. A picture read from bottom to top
//! is written right to left. Identifiers may carry object arguments, as in
//! `id[H]` or `tau[H,F]`.
//!
//! ```text
//! expr := comp
//! comp := tens { "." tens }
//! tens := atom { "*" atom }
//! atom := IDENT [ "[" IDENT { "," IDENT } "]" ] | "(" expr ")"
//! ```

use std::collections::BTreeMap;
use std::fmt;

use cyclo::CycScalar;
use linmap::{FactoredOp, LinMap, SpaceShape};

use crate::McgError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Ident { name: String, args: Vec<String> },
    Compose(Vec<Expr>),
    Tensor(Vec<Expr>),
}

impl Expr {
    pub fn ident(name: &str) -> Expr {
        Expr::Ident { name: name.into(), args: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Dot,
    Star,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, McgError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut line, mut col) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let single = match c {
            '.' => Some(Tok::Dot),
            '*' => Some(Tok::Star),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, line, col });
            i += 1;
            col += 1;
        } else if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                s.push(chars[i]);
                i += 1;
                col += 1;
            }
            out.push(Token { tok: Tok::Ident(s), line: start.0, col: start.1 });
        } else {
            return Err(McgError::UnknownToken { token: c.to_string(), line, col });
        }
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, msg: &str) -> Result<T, McgError> {
        let t = self.peek();
        let found = match &t.tok {
            Tok::End => "end of input".to_string(),
            Tok::Ident(s) => format!("identifier {s:?}"),
            other => format!("{other:?}"),
        };
        Err(McgError::Syntax { line: t.line, col: t.col, msg: format!("{msg}, found {found}") })
    }

    fn comp(&mut self) -> Result<Expr, McgError> {
        let mut items = vec![self.tens()?];
        while self.peek().tok == Tok::Dot {
            self.bump();
            items.push(self.tens()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Compose(items) })
    }

    fn tens(&mut self) -> Result<Expr, McgError> {
        let mut items = vec![self.atom()?];
        while self.peek().tok == Tok::Star {
            self.bump();
            items.push(self.atom()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Tensor(items) })
    }

    fn atom(&mut self) -> Result<Expr, McgError> {
        match self.peek().tok.clone() {
            Tok::LParen => {
                self.bump();
                let e = self.comp()?;
                if self.peek().tok != Tok::RParen {
                    return self.err("expected ')'");
                }
                self.bump();
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                let mut args = Vec::new();
                if self.peek().tok == Tok::LBrack {
                    self.bump();
                    loop {
                        match self.peek().tok.clone() {
                            Tok::Ident(a) => {
                                self.bump();
                                args.push(a);
                            }
                            _ => return self.err("expected object name"),
                        }
                        match self.peek().tok {
                            Tok::Comma => {
                                self.bump();
                            }
                            Tok::RBrack => {
                                self.bump();
                                break;
                            }
                            _ => return self.err("expected ',' or ']'"),
                        }
                    }
                }
                Ok(Expr::Ident { name, args })
            }
            _ => self.err("expected identifier or '('"),
        }
    }
}

pub fn parse(src: &str) -> Result<Expr, McgError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    let e = p.comp()?;
    if p.peek().tok != Tok::End {
        return p.err("expected '.', '*' or end of input");
    }
    Ok(e)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Ident { name, args } => {
                write!(f, "{name}")?;
                if !args.is_empty() {
                    write!(f, "[{}]", args.join(","))?;
                }
                Ok(())
            }
            Expr::Compose(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " . ")?;
                    }
                    match e {
                        Expr::Compose(_) => write!(f, "({e})")?,
                        _ => write!(f, "{e}")?,
                    }
                }
                Ok(())
            }
            Expr::Tensor(items) => {
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " * ")?;
                    }
                    match e {
                        Expr::Ident { .. } => write!(f, "{e}")?,
                        _ => write!(f, "({e})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

pub fn print(e: &Expr) -> String {
    e.to_string()
}

const FAMILIES: &[&str] = &["id", "tau", "ev", "coev", "evt", "coevt"];

/// Named objects (shapes) and morphisms an expression is evaluated against.
#[derive(Clone, Debug, Default)]
pub struct Context {
    objects: BTreeMap<String, SpaceShape>,
    morphisms: BTreeMap<String, LinMap>,
}

impl Context {
    pub fn new() -> Context {
        let mut c = Context::default();
        c.objects.insert("k".into(), SpaceShape::scalar());
        c
    }

    pub fn add_object(&mut self, name: &str, shape: SpaceShape) -> Result<(), McgError> {
        if self.objects.contains_key(name) {
            return Err(McgError::Shadowing(name.into()));
        }
        self.objects.insert(name.into(), shape);
        Ok(())
    }

    pub fn add(&mut self, name: &str, f: LinMap) -> Result<(), McgError> {
        if self.morphisms.contains_key(name) || FAMILIES.contains(&name) {
            return Err(McgError::Shadowing(name.into()));
        }
        self.morphisms.insert(name.into(), f);
        Ok(())
    }

    pub fn object(&self, name: &str) -> Result<&SpaceShape, McgError> {
        self.objects.get(name).ok_or_else(|| McgError::UnboundIdentifier(name.into()))
    }

    pub fn morphism(&self, name: &str) -> Option<&LinMap> {
        self.morphisms.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.morphisms.keys()
    }

    fn family(&self, name: &str, args: &[String]) -> Result<LinMap, McgError> {
        let arity = if name == "tau" { 2 } else { 1 };
        if args.len() != arity {
            return Err(McgError::ShapeMismatch(format!("{name} takes {arity} object argument(s)")));
        }
        let x = self.object(&args[0])?.clone();
        let one = || CycScalar::one(1);
        let d = x.dim();
        let dual = SpaceShape(x.legs().iter().rev().copied().collect());
        // nested pairing between a reversed-leg dual and x
        let pair_index = |i: usize| -> usize {
            let legs = x.legs();
            let mut digits = Vec::with_capacity(legs.len());
            let mut rest = i;
            for l in legs.iter().rev() {
                digits.push(rest % l);
                rest /= l;
            }
            // digits are least significant first, i.e. in the dual's leg order
            dual.legs().iter().zip(&digits).fold(0, |r, (l, dg)| r * l + dg)
        };
        Ok(match name {
            "id" => LinMap::identity(x),
            "tau" => {
                let y = self.object(&args[1])?.clone();
                LinMap::flip(d, y.dim()).reshape(y.concat(&x), x.concat(&y))?
            }
            "ev" => {
                let t = (0..d).map(|i| (0, pair_index(i) * d + i, one()));
                LinMap::from_triplets(SpaceShape::scalar(), dual.concat(&x), t)
            }
            "coev" => {
                let t = (0..d).map(|i| (i * d + pair_index(i), 0, one()));
                LinMap::from_triplets(x.concat(&dual), SpaceShape::scalar(), t)
            }
            "evt" => {
                let t = (0..d).map(|i| (0, i * d + pair_index(i), one()));
                LinMap::from_triplets(SpaceShape::scalar(), x.concat(&dual), t)
            }
            "coevt" => {
                let t = (0..d).map(|i| (pair_index(i) * d + i, 0, one()));
                LinMap::from_triplets(dual.concat(&x), SpaceShape::scalar(), t)
            }
            _ => unreachable!(),
        })
    }

    fn lookup(&self, name: &str, args: &[String]) -> Result<LinMap, McgError> {
        if FAMILIES.contains(&name) {
            return self.family(name, args);
        }
        if !args.is_empty() {
            return Err(McgError::ShapeMismatch(format!("{name} takes no object arguments")));
        }
        self.morphisms.get(name).cloned().ok_or_else(|| McgError::UnboundIdentifier(name.into()))
    }

    pub fn eval_str(&self, src: &str) -> Result<LinMap, McgError> {
        self.eval(&parse(src)?)
    }

    /// Evaluates an expression; tensor factors inside a composite are applied
    /// as staged operators, so identity legs are never materialized.
    pub fn eval(&self, e: &Expr) -> Result<LinMap, McgError> {
        match e {
            Expr::Ident { name, args } => self.lookup(name, args),
            Expr::Tensor(items) => {
                let mut acc = self.eval(&items[0])?;
                for it in &items[1..] {
                    acc = acc.kron(&self.eval(it)?);
                }
                Ok(acc)
            }
            Expr::Compose(items) => {
                let last = items.last().unwrap();
                let mut acc = self.eval(last)?;
                for it in items[..items.len() - 1].iter().rev() {
                    acc = self.apply_term(it, acc)?;
                }
                Ok(acc)
            }
        }
    }

    fn apply_term(&self, term: &Expr, acc: LinMap) -> Result<LinMap, McgError> {
        let mismatch = |dom: &SpaceShape| {
            McgError::ShapeMismatch(format!(
                "`{term}` expects input {dom} (dim {}) but receives {} (dim {})",
                dom.dim(),
                acc.cod(),
                acc.rows()
            ))
        };
        if let Expr::Tensor(items) = term {
            let factors: Vec<(bool, LinMap)> = items
                .iter()
                .map(|it| {
                    let is_id = matches!(it, Expr::Ident { name, .. } if name == "id");
                    self.eval(it).map(|f| (is_id, f))
                })
                .collect::<Result<_, _>>()?;
            let input = factors.iter().fold(SpaceShape::scalar(), |s, (_, f)| s.concat(f.dom()));
            if input.dim() != acc.rows() {
                return Err(mismatch(&input));
            }
            let mut op = FactoredOp::new(input.clone());
            let mut leg = 0;
            for (is_id, f) in factors {
                let k = f.cod().len();
                if !is_id {
                    op = op.then(leg, f)?;
                }
                leg += k;
            }
            let x = acc.reshape(input, acc.dom().clone())?;
            return Ok(op.apply(&x)?);
        }
        let f = self.eval(term)?;
        if f.cols() != acc.rows() {
            return Err(mismatch(f.dom()));
        }
        Ok(f.compose(&acc)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_composition_and_tensor() {
        assert_eq!(parse("eps . eta").unwrap(), Expr::Compose(vec![Expr::ident("eps"), Expr::ident("eta")]));
        let e = parse("m . (S * id[H]) . delta").unwrap();
        match &e {
            Expr::Compose(items) => {
                assert_eq!(items.len(), 3);
                assert!(matches!(&items[1], Expr::Tensor(t) if t.len() == 2));
            }
            _ => panic!("not a composite"),
        }
    }

    #[test]
    fn syntax_error_points_at_end_of_input() {
        match parse("m . (") {
            Err(McgError::Syntax { line, col, msg }) => {
                assert_eq!((line, col), (1, 6));
                assert!(msg.contains("end of input"));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("m $ n"), Err(McgError::UnknownToken { .. })));
    }

    #[test]
    fn printer_round_trips() {
        for src in ["a . (b * c) . d", "(a . b) * c", "tau[H,F] . (x * (y . z))", "(a . b) . c"] {
            let e = parse(src).unwrap();
            assert_eq!(parse(&print(&e)).unwrap(), e);
        }
    }

    #[test]
    fn duality_families_zigzag() {
        let mut c = Context::new();
        c.add_object("X", SpaceShape::new(&[2, 3])).unwrap();
        let lhs = c.eval_str("(ev[X] * id[X]) . (id[X] * coev[X])");
        // X ⊗ X^∨ ⊗ X -> X: the zigzag for a right dual
        let z = c.eval_str("(id[X] * ev[X]) . (coev[X] * id[X])").unwrap();
        assert_eq!(z.rows(), 6);
        assert_eq!(z, LinMap::id(6));
        assert!(lhs.is_err() || lhs.unwrap().rows() == 6);
        let zt = c.eval_str("(evt[X] * id[X]) . (id[X] * coevt[X])").unwrap();
        assert_eq!(zt, LinMap::id(6));
    }

    #[test]
    fn unbound_and_shadowing() {
        let mut c = Context::new();
        assert!(matches!(c.eval_str("nope"), Err(McgError::UnboundIdentifier(_))));
        c.add("f", LinMap::id(2)).unwrap();
        assert!(matches!(c.add("f", LinMap::id(2)), Err(McgError::Shadowing(_))));
        assert!(matches!(c.add("id", LinMap::id(2)), Err(McgError::Shadowing(_))));
        c.add("g", LinMap::id(3)).unwrap();
        match c.eval_str("f . g") {
            Err(McgError::ShapeMismatch(m)) => assert!(m.contains("`f`")),
            other => panic!("{other:?}"),
        }
    }
}
