//! A small expression language over Weil-group representations:
//!
//! ```text
//! query := ("eps" | "gamma" | "logcond" | "dim") "(" sum ")" | sum
//! sum   := prod ("(+)" prod)*
//! prod  := unary ("(*)" unary)*
//! unary := "sym^" INT "(" sum ")" | "wedge2" "(" sum ")" | "(" sum ")" | atom
//! atom  := "[" ("+" | "-" | INT) ("," RATIONAL)? "]"
//! ```
//!
//! `[k,t]` is the discrete-series piece of weight `k` twisted by `t`.

use std::fmt;

use num_rational::Ratio;
use serde_json::{json, Value};
use symfam_core::weil::{
    epsilon_factor, gamma_factor, log_analytic_conductor, sym_power_rep, tensor, wedge2, GammaFactor, IPower, Twist,
    WeilRep,
};

/// What went wrong, and where (1-based character column).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprError {
    Parse { column: usize, message: String },
    Semantic(String),
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::Parse { column, message } => write!(f, "parse error at column {column}: {message}"),
            ExprError::Semantic(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for ExprError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Plus,
    Minus,
    Slash,
    Caret,
    Oplus,
    Otimes,
    Int(u64),
    Ident(String),
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Ident(s) => format!("{s:?}"),
        Tok::End => "end of input".into(),
        Tok::Oplus => "\"(+)\"".into(),
        Tok::Otimes => "\"(*)\"".into(),
        other => {
            let c = match other {
                Tok::LParen => '(',
                Tok::RParen => ')',
                Tok::LBracket => '[',
                Tok::RBracket => ']',
                Tok::Comma => ',',
                Tok::Plus => '+',
                Tok::Minus => '-',
                Tok::Slash => '/',
                _ => '^',
            };
            format!("{c:?}")
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '(' && i + 2 < chars.len() && chars[i + 2] == ')' && matches!(chars[i + 1], '+' | '*') {
            out.push((if chars[i + 1] == '+' { Tok::Oplus } else { Tok::Otimes }, col));
            i += 3;
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse()
                    .map_err(|_| ExprError::Parse { column: col, message: format!("number {text} is too large") })?;
                out.push((Tok::Int(n), col));
                continue;
            }
            a if a.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), col));
                continue;
            }
            other => return Err(ExprError::Parse { column: col, message: format!("unexpected character {other:?}") }),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

/// Result of evaluating a query.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Rep(WeilRep),
    Epsilon(IPower),
    Gamma(GammaFactor),
    LogConductor(f64),
    Dimension(u32),
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Rep(r) => write!(f, "{r}"),
            Outcome::Epsilon(e) => write!(f, "{e}"),
            Outcome::Gamma(g) => write!(f, "{g}"),
            Outcome::LogConductor(x) => write!(f, "{}", crate::output::fmt_num(*x)),
            Outcome::Dimension(d) => write!(f, "{d}"),
        }
    }
}

impl Outcome {
    pub fn to_json(&self, expression: &str) -> Value {
        let (kind, value) = match self {
            Outcome::Rep(r) => ("representation", json!(r.to_string())),
            Outcome::Epsilon(e) => ("epsilon", json!(e.to_string())),
            Outcome::Gamma(g) => ("gamma", json!(g.to_string())),
            Outcome::LogConductor(x) => ("log_conductor", json!(x)),
            Outcome::Dimension(d) => ("dimension", json!(d)),
        };
        json!({ "expression": expression, "kind": kind, "value": value })
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Parse { column: self.column(), message: message.into() })
    }

    fn expect(&mut self, want: Tok) -> Result<(), ExprError> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&want), describe(self.peek())))
        }
    }

    fn int(&mut self) -> Result<u64, ExprError> {
        match self.peek() {
            Tok::Int(n) => {
                let n = *n;
                self.bump();
                Ok(n)
            }
            other => self.error(format!("expected a number, found {}", describe(other))),
        }
    }

    fn query(&mut self) -> Result<Outcome, ExprError> {
        let out = match self.peek().clone() {
            Tok::Ident(name) if matches!(name.as_str(), "eps" | "gamma" | "logcond" | "dim") => {
                self.bump();
                self.expect(Tok::LParen)?;
                let rep = self.sum()?;
                self.expect(Tok::RParen)?;
                match name.as_str() {
                    "eps" => Outcome::Epsilon(epsilon_factor(&rep)),
                    "gamma" => Outcome::Gamma(gamma_factor(&rep)),
                    "dim" => Outcome::Dimension(rep.dimension()),
                    _ => Outcome::LogConductor(
                        log_analytic_conductor(&rep).map_err(|e| ExprError::Semantic(e.to_string()))?,
                    ),
                }
            }
            _ => Outcome::Rep(self.sum()?),
        };
        if *self.peek() != Tok::End {
            return self.error(format!("unexpected {}", describe(self.peek())));
        }
        Ok(out)
    }

    fn sum(&mut self) -> Result<WeilRep, ExprError> {
        let mut acc = self.prod()?;
        while *self.peek() == Tok::Oplus {
            self.bump();
            acc = acc.direct_sum(&self.prod()?);
        }
        Ok(acc)
    }

    fn prod(&mut self) -> Result<WeilRep, ExprError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Otimes {
            self.bump();
            acc = tensor(&acc, &self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<WeilRep, ExprError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let r = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            Tok::LBracket => self.atom(),
            Tok::Ident(name) if name == "sym" => {
                self.bump();
                self.expect(Tok::Caret)?;
                let m = self.int()?;
                let m = u32::try_from(m).map_err(|_| ExprError::Semantic(format!("sym^{m}: power too large")))?;
                self.expect(Tok::LParen)?;
                let r = self.sum()?;
                self.expect(Tok::RParen)?;
                sym_power_rep(&r, m).map_err(|e| ExprError::Semantic(format!("sym^{m}({r}): {e}")))
            }
            Tok::Ident(name) if name == "wedge2" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let r = self.sum()?;
                self.expect(Tok::RParen)?;
                let irr = r
                    .as_irreducible()
                    .ok_or_else(|| ExprError::Semantic(format!("wedge2 needs an irreducible argument, got {r}")))?;
                wedge2(&irr).map_err(|e| ExprError::Semantic(format!("wedge2({r}): {e}")))
            }
            Tok::Ident(name) => self.error(format!("unknown operator {name:?}")),
            other => self.error(format!("expected a representation, found {}", describe(&other))),
        }
    }

    fn atom(&mut self) -> Result<WeilRep, ExprError> {
        self.expect(Tok::LBracket)?;
        enum Head {
            Plus,
            Minus,
            Weight(u64, usize),
        }
        let head = match self.peek().clone() {
            Tok::Plus => {
                self.bump();
                Head::Plus
            }
            Tok::Minus => {
                self.bump();
                Head::Minus
            }
            Tok::Int(k) => {
                let col = self.column();
                self.bump();
                Head::Weight(k, col)
            }
            other => return self.error(format!("expected '+', '-' or a weight, found {}", describe(&other))),
        };
        let twist = if *self.peek() == Tok::Comma {
            self.bump();
            self.rational()?
        } else {
            Ratio::from_integer(0)
        };
        self.expect(Tok::RBracket)?;
        match head {
            Head::Plus => Ok(WeilRep::plus(twist)),
            Head::Minus => Ok(WeilRep::minus(twist)),
            Head::Weight(k, col) => {
                let k = u32::try_from(k)
                    .ok()
                    .filter(|k| *k >= 1)
                    .ok_or(ExprError::Parse { column: col, message: format!("weight must be a positive integer, got {k}") })?;
                WeilRep::disc(k, twist).map_err(|e| ExprError::Parse { column: col, message: e.to_string() })
            }
        }
    }

    fn rational(&mut self) -> Result<Twist, ExprError> {
        let neg = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let col = self.column();
        let num = i64::try_from(self.int()?).map_err(|_| ExprError::Parse { column: col, message: "twist too large".into() })?;
        let den = if *self.peek() == Tok::Slash {
            self.bump();
            let col = self.column();
            let d = self.int()?;
            if d == 0 {
                return Err(ExprError::Parse { column: col, message: "zero denominator".into() });
            }
            i64::try_from(d).map_err(|_| ExprError::Parse { column: col, message: "twist too large".into() })?
        } else {
            1
        };
        Ok(Ratio::new(if neg { -num } else { num }, den))
    }
}

/// Parse and evaluate one query.
pub fn evaluate(src: &str) -> Result<Outcome, ExprError> {
    let mut p = Parser { toks: lex(src)?, pos: 0 };
    p.query()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(s: &str) -> String {
        evaluate(s).unwrap().to_string()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(show("sym^3([12])"), "[34] (+) [12]");
        assert_eq!(show("[+] (*) [-]"), "[-]");
        assert_eq!(show("eps([12] (*) [16])"), "+1");
        assert_eq!(show("[5] (*) [5]"), "[9] (+) [+] (+) [-]");
        assert_eq!(show("wedge2([3])"), "[-]");
        assert_eq!(show("dim(sym^4([6]))"), "5");
        assert_eq!(show("gamma([+] (+) [-])"), "GammaR(s+0) GammaR(s+1)");
    }

    #[test]
    fn twists_and_grouping() {
        assert_eq!(show("[2,1/2] (*) [+,-1/2]"), "[2]");
        assert_eq!(show("([2] (+) [+]) (*) [-]"), "[2] (+) [-]");
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(evaluate("sym^3([12]").unwrap_err(), ExprError::Parse { column: 11, message: "expected ')', found end of input".into() });
        assert!(matches!(evaluate("[12] (*) foo([2])"), Err(ExprError::Parse { column: 10, .. })));
        assert!(matches!(evaluate("[2] $"), Err(ExprError::Parse { column: 5, .. })));
        assert!(matches!(evaluate("[0]"), Err(ExprError::Parse { column: 2, .. })));
        assert!(matches!(evaluate("wedge2([+])"), Err(ExprError::Semantic(_))));
        assert!(matches!(evaluate("sym^2([2] (+) [3])"), Err(ExprError::Semantic(_))));
    }
}
