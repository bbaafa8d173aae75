//! Polynomial expressions and `key: value` job files.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::weyl::Poly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                // a rational literal is `p/q` with no spaces
                if i + 2 < chars.len() && chars[i + 1] == '/' && chars[i + 2].is_ascii_digit() {
                    i += 2;
                    while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                        i += 1;
                    }
                }
                let lit: String = chars[start..=i].iter().collect();
                let value = parse_rational(&lit).ok_or_else(|| syntax(start, format!("bad number `{lit}`")))?;
                Tok::Num(value)
            }
            a if a.is_alphabetic() || a == '_' => {
                while i + 1 < chars.len() && (chars[i + 1].is_alphanumeric() || chars[i + 1] == '_') {
                    i += 1;
                }
                Tok::Ident(chars[start..=i].iter().collect())
            }
            '/' => return Err(syntax(start, "division is only allowed inside a rational literal")),
            other => return Err(syntax(start, format!("unexpected character `{other}`"))),
        };
        out.push((tok, start));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            acc = &acc * &self.unary()?;
        }
        match self.peek() {
            Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                Err(syntax(self.here(), "implicit multiplication is not allowed; use `*`"))
            }
            _ => Ok(acc),
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        let caret = self.here();
        self.pos += 1;
        match self.toks.get(self.pos) {
            Some((Tok::Num(e), _)) if e.is_integer() && !e.is_negative() => {
                let e = e.to_integer();
                let k: u32 = e.try_into().map_err(|_| syntax(caret, "exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(k))
            }
            _ => Err(syntax(caret, "exponent must be a nonnegative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.vars.len();
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((Tok::Num(c), _)) => {
                self.pos += 1;
                Ok(Poly::constant(n, c))
            }
            Some((Tok::Ident(name), _)) => {
                self.pos += 1;
                let i = self.vars.iter().position(|v| v == &name).ok_or(Error::UnknownVariable(name))?;
                Ok(Poly::var(n, i))
            }
            Some((Tok::LParen, _)) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.here(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(syntax(at, "expected a number, a variable or `(`")),
            None => Err(syntax(at, "unexpected end of input")),
        }
    }
}

/// Parses `text` as a polynomial in `vars`. Positions in errors are character
/// offsets from 0.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<Poly> {
    if vars.is_empty() {
        return Err(Error::Config("no variables declared".into()));
    }
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), vars };
    let out = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(syntax(p.here(), "unexpected token"));
    }
    Ok(out)
}

/// Settings of one job file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub vars: Vec<String>,
    pub f_text: String,
    pub alpha: Rational,
    pub k_max: u32,
    pub degree_bound: u32,
    pub budget_e: u32,
    pub budget_d: u32,
    pub budget_m: u32,
    pub assert_parametrically_prime: bool,
    pub assert_ann_complete: bool,
}

impl JobConfig {
    pub fn f(&self) -> Result<Poly> {
        parse_polynomial(&self.f_text, &self.vars)
    }
}

fn config(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Config(format!("line {line}: {msg}"))
}

fn parse_bool(line: usize, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(config(line, format!("expected true or false, got `{v}`"))),
    }
}

fn parse_u32(line: usize, v: &str) -> Result<u32> {
    v.parse().map_err(|_| config(line, format!("expected a nonnegative integer, got `{v}`")))
}

fn valid_identifier(v: &str) -> bool {
    let mut chars = v.chars();
    chars.next().is_some_and(|c| c.is_alphabetic() || c == '_') && chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Parses a job file: `key: value` lines, `#` comments, blank lines ignored.
pub fn parse_job(text: &str) -> Result<JobConfig> {
    let mut seen = BTreeSet::new();
    let mut vars: Option<Vec<String>> = None;
    let mut f_text: Option<String> = None;
    let mut cfg = JobConfig {
        vars: Vec::new(),
        f_text: String::new(),
        alpha: Rational::zero(),
        k_max: 0,
        degree_bound: 8,
        budget_e: 4,
        budget_d: 8,
        budget_m: 6,
        assert_parametrically_prime: false,
        assert_ann_complete: false,
    };
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once(':').ok_or_else(|| config(line, "expected `key: value`"))?;
        let (key, value) = (key.trim(), value.trim());
        if !seen.insert(key.to_string()) {
            return Err(config(line, format!("duplicate key `{key}`")));
        }
        match key {
            "vars" => {
                let list: Vec<String> = value.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(String::from).collect();
                vars = Some(list);
            }
            "f" => f_text = Some(value.to_string()),
            "alpha" => {
                let a = parse_rational(value).ok_or_else(|| config(line, format!("bad rational `{value}`")))?;
                if a.is_negative() {
                    return Err(config(line, "alpha must be nonnegative"));
                }
                cfg.alpha = a;
            }
            "k_max" => cfg.k_max = parse_u32(line, value)?,
            "degree_bound" => cfg.degree_bound = parse_u32(line, value)?,
            "budget_e" => cfg.budget_e = parse_u32(line, value)?,
            "budget_d" => cfg.budget_d = parse_u32(line, value)?,
            "budget_m" => cfg.budget_m = parse_u32(line, value)?,
            "assert_parametrically_prime" => cfg.assert_parametrically_prime = parse_bool(line, value)?,
            "assert_ann_complete" => cfg.assert_ann_complete = parse_bool(line, value)?,
            other => return Err(config(line, format!("unknown key `{other}`"))),
        }
    }
    cfg.vars = vars.ok_or_else(|| Error::Config("missing `vars`".into()))?;
    cfg.f_text = f_text.ok_or_else(|| Error::Config("missing `f`".into()))?;
    if cfg.vars.is_empty() {
        return Err(Error::Config("`vars` is empty".into()));
    }
    let mut distinct = BTreeSet::new();
    for v in &cfg.vars {
        if !valid_identifier(v) {
            return Err(Error::Config(format!("`{v}` is not an identifier")));
        }
        if ["s", "t", "dt"].contains(&v.as_str()) {
            return Err(Error::Config(format!("`{v}` is reserved")));
        }
        if !distinct.insert(v.clone()) {
            return Err(Error::Config(format!("variable `{v}` declared twice")));
        }
    }
    for v in &cfg.vars {
        if cfg.vars.iter().any(|w| format!("d{w}") == *v) {
            return Err(Error::Config(format!("`{v}` clashes with the derivative name of another variable")));
        }
    }
    if cfg.budget_m == 0 {
        return Err(Error::Config("budget_m must be at least 1".into()));
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn examples() {
        let p = parse_polynomial("x^2 + y^3", &xy()).unwrap();
        assert_eq!(p, &Poly::var(2, 0).pow(2) + &Poly::var(2, 1).pow(3));
        assert!(parse_polynomial("1/2*x - 1/2*x", &xy()).unwrap().is_zero());
        assert_eq!(parse_polynomial("x^-1", &xy()), Err(Error::Syntax { pos: 1, msg: "exponent must be a nonnegative integer literal".into() }));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_polynomial("2x", &xy()), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_polynomial("x + z", &xy()), Err(Error::UnknownVariable(v)) if v == "z"));
        assert!(matches!(parse_polynomial("(x + y", &xy()), Err(Error::Syntax { pos: 6, .. })));
        assert!(matches!(parse_polynomial("x/2", &xy()), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_polynomial("", &xy()), Err(Error::Syntax { pos: 0, .. })));
    }

    #[test]
    fn precedence() {
        let p = parse_polynomial("-x^2 + 3/4*(x - y)*2", &xy()).unwrap();
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let q = &(-&x.pow(2)) + &(&x - &y).scale(&rat(3, 2));
        assert_eq!(p, q);
    }

    #[test]
    fn job_file() {
        let cfg = parse_job("# cusp\nvars: x, y\nf: x^2 + y^3\nalpha: 1/6\nk_max: 2\nassert_parametrically_prime: true\n").unwrap();
        assert_eq!(cfg.vars, xy());
        assert_eq!(cfg.alpha, rat(1, 6));
        assert_eq!(cfg.k_max, 2);
        assert!(cfg.assert_parametrically_prime);
        assert!(!cfg.assert_ann_complete);
        assert!(matches!(parse_job("vars: x\nf: x\nbogus: 1\n"), Err(Error::Config(_))));
        assert!(matches!(parse_job("vars: x x\nf: x\n"), Err(Error::Config(_))));
        assert!(matches!(parse_job("vars: x\nf: x\nalpha: -1/2\n"), Err(Error::Config(_))));
        assert!(matches!(parse_job("vars: x\n"), Err(Error::Config(_))));
    }
}
