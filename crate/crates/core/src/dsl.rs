//! Text syntax for multigerms.
//!
//! ```text
//! multigerm := branch | "{" branch (";" branch)* "}"
//! branch    := "(" poly ("," poly)* ")"
//! poly      := ["+"|"-"] term (("+"|"-") term)*
//! term      := integer | [integer "*"] factor ("*" factor)*
//! factor    := var ["^" natural]
//! var       := lowercase letter, then letters / digits / underscores
//! ```
//!
//! Whitespace is insignificant. Variables are numbered in order of first
//! appearance; `n` is the number of distinct variables and `p` the number
//! of components per branch.
//!
//! The printer emits terms in descending graded-lex order, except that a
//! term is held back while it would mention a variable ahead of one with a
//! smaller index, so that re-parsing reproduces the same numbering.

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::germ::{Branch, MultiGerm};
use crate::ring::{Monomial, Poly};
use crate::scalar::Scalar;
use crate::Q;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Int(BigInt),
    Var(String),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '^' => Some(Tok::Caret),
            _ => None,
        };
        if let Some(tok) = simple {
            out.push(Token {
                tok,
                line: start.0,
                column: start.1,
            });
            i += 1;
            column += 1;
            continue;
        }
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let s = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[s..i].iter().collect();
            column += i - s;
            out.push(Token {
                tok: Tok::Int(digits.parse().expect("digits parse")),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        if c.is_ascii_lowercase() {
            let s = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let name: String = chars[s..i].iter().collect();
            column += i - s;
            out.push(Token {
                tok: Tok::Var(name),
                line: start.0,
                column: start.1,
            });
            continue;
        }
        return Err(Error::Syntax {
            line,
            column,
            message: format!("unexpected character {c:?}"),
        });
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

/// A parsed term before the variable count is known.
type RawTerm = (BigInt, Vec<(usize, u32)>);
type RawPoly = Vec<RawTerm>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    names: Vec<String>,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            names: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = &self.toks[self.pos];
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    fn var_index(&mut self, name: &str) -> usize {
        match self.names.iter().position(|n| n == name) {
            Some(i) => i,
            None => {
                self.names.push(name.to_string());
                self.names.len() - 1
            }
        }
    }

    fn multigerm(&mut self) -> Result<Vec<Vec<RawPoly>>> {
        let mut branches = Vec::new();
        if *self.peek() == Tok::LBrace {
            self.pos += 1;
            branches.push(self.branch()?);
            while *self.peek() == Tok::Semi {
                self.pos += 1;
                branches.push(self.branch()?);
            }
            self.expect(Tok::RBrace, "'}' or ';'")?;
        } else {
            branches.push(self.branch()?);
        }
        self.expect(Tok::End, "end of input")?;
        Ok(branches)
    }

    fn branch(&mut self) -> Result<Vec<RawPoly>> {
        self.expect(Tok::LParen, "'('")?;
        let mut comps = vec![self.poly()?];
        while *self.peek() == Tok::Comma {
            self.pos += 1;
            comps.push(self.poly()?);
        }
        self.expect(Tok::RParen, "')' or ','")?;
        Ok(comps)
    }

    fn poly(&mut self) -> Result<RawPoly> {
        let mut terms = Vec::new();
        let mut sign = 1;
        match self.peek() {
            Tok::Minus => {
                sign = -1;
                self.pos += 1;
            }
            Tok::Plus => self.pos += 1,
            _ => {}
        }
        loop {
            let (c, factors) = self.term()?;
            terms.push((c * sign, factors));
            match self.peek() {
                Tok::Plus => sign = 1,
                Tok::Minus => sign = -1,
                _ => break,
            }
            self.pos += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let mut coeff = BigInt::from(1);
        let mut factors = Vec::new();
        if let Tok::Int(v) = self.peek().clone() {
            self.pos += 1;
            coeff = v;
            if *self.peek() != Tok::Star {
                return Ok((coeff, factors));
            }
            self.pos += 1;
        }
        factors.push(self.factor()?);
        while *self.peek() == Tok::Star {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok((coeff, factors))
    }

    fn factor(&mut self) -> Result<(usize, u32)> {
        let Tok::Var(name) = self.peek().clone() else {
            return self.error("expected a variable");
        };
        self.pos += 1;
        let idx = self.var_index(&name);
        let mut e = 1;
        if *self.peek() == Tok::Caret {
            self.pos += 1;
            let Tok::Int(v) = self.peek().clone() else {
                return self.error("expected an exponent");
            };
            e = u32::try_from(v).or_else(|_| self.error("exponent too large"))?;
            self.pos += 1;
        }
        Ok((idx, e))
    }
}

fn realize<T: Scalar>(raw: &RawPoly, nvars: usize) -> Poly<T> {
    let mut p = Poly::zero(nvars);
    for (c, factors) in raw {
        let mut exps = vec![0u32; nvars];
        for &(v, e) in factors {
            exps[v] += e;
        }
        p.add_term(Monomial::new(exps), T::from_bigint(c));
    }
    p
}

/// Explicit dimensions for inputs whose variables do not all appear.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    pub source_dim: Option<usize>,
    pub target_dim: Option<usize>,
}

fn pad_names(mut names: Vec<String>, n: usize) -> Vec<String> {
    let mut k = 1;
    while names.len() < n {
        let candidate = format!("u{k}");
        if !names.contains(&candidate) {
            names.push(candidate);
        }
        k += 1;
    }
    names
}

pub fn parse_multigerm(text: &str) -> Result<MultiGerm<Q>> {
    parse_multigerm_with(text, ParseOptions::default())
}

pub fn parse_multigerm_with<T: Scalar>(text: &str, opts: ParseOptions) -> Result<MultiGerm<T>> {
    let mut parser = Parser::new(text)?;
    let raw = parser.multigerm()?;
    let found = parser.names.len();
    let n = match opts.source_dim {
        Some(n) if n < found => {
            return Err(Error::ArityMismatch {
                expected: n,
                got: found,
            })
        }
        Some(n) => n,
        None => found,
    };
    let p = raw[0].len();
    if let Some((i, b)) = raw.iter().enumerate().find(|(_, b)| b.len() != p) {
        return Err(Error::InvalidGerm(format!(
            "branch arity mismatch: branch 0 has {p} components, branch {i} has {}",
            b.len()
        )));
    }
    if let Some(tp) = opts.target_dim {
        if tp != p {
            return Err(Error::ArityMismatch {
                expected: tp,
                got: p,
            });
        }
    }
    let mut branches = Vec::with_capacity(raw.len());
    for (i, comps) in raw.iter().enumerate() {
        let polys: Vec<Poly<T>> = comps.iter().map(|c| realize(c, n)).collect();
        if let Some(j) = polys.iter().position(|q| !q.vanishes_at_origin()) {
            return Err(Error::NonzeroConstant {
                branch: i,
                component: j,
            });
        }
        branches.push(Branch::new(n, polys)?);
    }
    MultiGerm::with_names(branches, pad_names(parser.names, n))
}

/// Parses a single polynomial; returns it with its variable names.
pub fn parse_poly(text: &str) -> Result<(Poly<Q>, Vec<String>)> {
    let mut parser = Parser::new(text)?;
    let raw = parser.poly()?;
    parser.expect(Tok::End, "end of input")?;
    let n = parser.names.len().max(1);
    let names = pad_names(parser.names, n);
    Ok((realize(&raw, n), names))
}

fn term_text<T: Scalar>(m: &Monomial, c: &T, first: bool, names: &[String]) -> String {
    let mut out = String::new();
    let neg = c.is_negative_display();
    let abs = if neg { -c.clone() } else { c.clone() };
    if neg {
        out.push('-');
    } else if !first {
        out.push('+');
    }
    let factors: Vec<String> = m
        .exponents()
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            if e == 1 {
                names[v].clone()
            } else {
                format!("{}^{}", names[v], e)
            }
        })
        .collect();
    if factors.is_empty() {
        out.push_str(&abs.to_string());
    } else {
        if !abs.is_one() {
            out.push_str(&abs.to_string());
            out.push('*');
        }
        out.push_str(&factors.join("*"));
    }
    out
}

/// Canonical text of a polynomial, updating the set of variables already
/// mentioned.
fn poly_text<T: Scalar>(p: &Poly<T>, names: &[String], seen: &mut HashSet<usize>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut remaining: Vec<(&Monomial, &T)> = p.terms().rev().collect();
    let mut out = String::new();
    let mut first = true;
    while !remaining.is_empty() {
        // first term (in descending order) whose new variables are exactly
        // the next unseen indices
        let pick = remaining
            .iter()
            .position(|(m, _)| {
                let mut fresh: Vec<usize> = (0..m.nvars())
                    .filter(|&v| m.exp(v) > 0 && !seen.contains(&v))
                    .collect();
                fresh.sort_unstable();
                fresh
                    .iter()
                    .enumerate()
                    .all(|(k, &v)| v == seen.len() + k)
            })
            .unwrap_or(0);
        let (m, c) = remaining.remove(pick);
        for v in 0..m.nvars() {
            if m.exp(v) > 0 {
                seen.insert(v);
            }
        }
        out.push_str(&term_text(m, c, first, names));
        first = false;
    }
    out
}

/// Canonical rendering; `parse_multigerm(format_multigerm(f))` returns `f`
/// for every germ produced by the parser.
pub fn format_multigerm<T: Scalar>(f: &MultiGerm<T>) -> String {
    let names = f.var_names();
    let mut seen = HashSet::new();
    let branches: Vec<String> = f
        .branches()
        .iter()
        .map(|b| {
            let comps: Vec<String> = b
                .components()
                .iter()
                .map(|c| poly_text(c, names, &mut seen))
                .collect();
            format!("({})", comps.join(", "))
        })
        .collect();
    if branches.len() == 1 {
        branches.into_iter().next().expect("one branch")
    } else {
        format!("{{{}}}", branches.join("; "))
    }
}

pub fn format_poly<T: Scalar>(p: &Poly<T>, names: &[String]) -> String {
    let mut seen = HashSet::new();
    poly_text(p, names, &mut seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::QPoly;

    fn v(i: usize) -> QPoly {
        Poly::var(3, i)
    }

    #[test]
    fn parses_a1a2_bigerm() {
        let f = parse_multigerm("{(x^3+y*x, y, z); (x, y^2+z^3, z)}").unwrap();
        assert_eq!((f.n(), f.p(), f.r()), (3, 3, 2));
        let expected = MultiGerm::from_components(
            3,
            vec![
                vec![&v(0).pow(3) + &(&v(1) * &v(0)), v(1), v(2)],
                vec![v(0), &v(1).pow(2) + &v(2).pow(3), v(2)],
            ],
        )
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_single_branch() {
        let f = parse_multigerm("(x, y, z^2)").unwrap();
        assert_eq!(f.r(), 1);
        assert_eq!(format_multigerm(&f), "(x, y, z^2)");
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        let err = parse_multigerm("{(x,y); (x,y,z)}").unwrap_err();
        assert!(matches!(err, Error::InvalidGerm(ref m) if m.contains("arity mismatch")));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_multigerm("(x,\n y +)").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 5,
                message: "expected a variable".into()
            }
        );
        assert!(matches!(parse_multigerm("(X)"), Err(Error::Syntax { column: 2, .. })));
    }

    #[test]
    fn constant_terms_are_rejected() {
        let err = parse_multigerm("{(x, y); (x, y+1)}").unwrap_err();
        assert_eq!(err, Error::NonzeroConstant { branch: 1, component: 1 });
    }

    #[test]
    fn negative_unit_coefficients() {
        let f = parse_multigerm("(x, y - x^2)").unwrap();
        assert_eq!(format_multigerm(&f), "(x, -x^2+y)");
        let g = parse_multigerm("(x, -x^2+y)").unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn printer_keeps_first_appearance_order() {
        let f = parse_multigerm("(x, y + x*z)").unwrap();
        let text = format_multigerm(&f);
        assert_eq!(text, "(x, y+x*z)");
        assert_eq!(parse_multigerm(&text).unwrap(), f);
    }

    #[test]
    fn explicit_source_dimension() {
        let f: MultiGerm<Q> = parse_multigerm_with(
            "(x, 0)",
            ParseOptions {
                source_dim: Some(2),
                target_dim: Some(2),
            },
        )
        .unwrap();
        assert_eq!(f.n(), 2);
        assert_eq!(f.var_names(), &["x".to_string(), "u1".to_string()]);
    }

    #[test]
    fn coefficients_and_powers() {
        let f = parse_multigerm("(3*x^2*y - 2*y^3, y)").unwrap();
        assert_eq!(format_multigerm(&f), "(3*x^2*y-2*y^3, y)");
    }

    #[test]
    fn parse_single_poly() {
        let (p, names) = parse_poly("z^2").unwrap();
        assert_eq!(names, vec!["z".to_string()]);
        assert_eq!(p, Poly::var(1, 0).pow(2));
    }
}
