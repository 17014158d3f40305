//! The set-expression language.
//!
//! ```text
//! set    := term ( "U" term )*
//! term   := ap | finite | range
//! ap     := INT "N" ( "+" INT )? ( "@" INT )?
//! finite := "{" ( INT ( "," INT )* )? "}"
//! range  := "[" INT ".." INT "]"
//! ```
//!
//! `aN+b@t` denotes `{x >= t : x ≡ b mod a}`; `@t` defaults to `b`.
//! Whitespace is ignored everywhere.

use std::fmt;

use crate::error::{Error, Result};
use crate::set::Eps;

/// Largest modulus the parser will build when combining terms.
pub const DEFAULT_MODULUS_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Progression { step: u64, offset: u64, start: Option<u64> },
    Finite(Vec<u64>),
    Range { lo: u64, hi: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetExpr {
    pub terms: Vec<Term>,
}

impl Term {
    fn eval(&self) -> Result<Eps> {
        match *self {
            Term::Progression { step, offset, start } => {
                Eps::progression(step, offset, start.unwrap_or(offset))
            }
            Term::Finite(ref items) => Ok(Eps::finite(items.iter().copied())),
            Term::Range { lo, hi } => Ok(Eps::finite(lo..=hi)),
        }
    }
}

impl SetExpr {
    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse_set()
    }

    /// Union of all terms, refusing any intermediate modulus above `cap`.
    pub fn eval_with_cap(&self, cap: u64) -> Result<Eps> {
        let mut acc = Eps::empty();
        for term in &self.terms {
            if let Term::Progression { step, .. } = term {
                check_cap(*step as u128, cap)?;
            }
            let next = term.eval()?;
            let joint = crate::arith::lcm(acc.modulus(), next.modulus())
                .map(u128::from)
                .unwrap_or(u128::MAX);
            check_cap(joint, cap)?;
            acc = acc.union(&next)?;
        }
        Ok(acc)
    }

    pub fn eval(&self) -> Result<Eps> {
        self.eval_with_cap(DEFAULT_MODULUS_CAP)
    }
}

fn check_cap(modulus: u128, cap: u64) -> Result<()> {
    if modulus > cap as u128 {
        Err(Error::ModulusCap { modulus, cap })
    } else {
        Ok(())
    }
}

/// Parses `text` and returns the canonical set it denotes.
pub fn parse_set_expr(text: &str) -> Result<Eps> {
    SetExpr::parse(text)?.eval()
}

pub fn parse_set_expr_with_cap(text: &str, cap: u64) -> Result<Eps> {
    SetExpr::parse(text)?.eval_with_cap(cap)
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Progression { step, offset, start } => {
                write!(f, "{step}N+{offset}")?;
                if let Some(t) = start {
                    write!(f, "@{t}")?;
                }
                Ok(())
            }
            Term::Finite(items) => {
                let items: Vec<String> = items.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            Term::Range { lo, hi } => write!(f, "[{lo}..{hi}]"),
        }
    }
}

impl fmt::Display for SetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.terms.iter().map(Term::to_string).collect();
        f.write_str(&terms.join(" U "))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, byte: u8) -> Result<()> {
        if self.eat(byte) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", byte as char))
        }
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.error("expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| Error::Syntax {
            pos: start,
            msg: "integer out of range".into(),
        })
    }

    fn parse_set(&mut self) -> Result<SetExpr> {
        let mut terms = vec![self.term()?];
        while self.eat(b'U') {
            terms.push(self.term()?);
        }
        if self.peek().is_some() {
            return self.error("unexpected trailing input");
        }
        Ok(SetExpr { terms })
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            Some(b'{') => self.finite(),
            Some(b'[') => self.range(),
            Some(c) if c.is_ascii_digit() => self.progression(),
            Some(_) => self.error("expected a term"),
            None => self.error("unexpected end of input"),
        }
    }

    fn progression(&mut self) -> Result<Term> {
        self.skip_ws();
        let at = self.pos;
        let step = self.int()?;
        self.expect(b'N')?;
        if step == 0 {
            return Err(Error::ZeroModulus { pos: at });
        }
        let offset = if self.eat(b'+') { self.int()? } else { 0 };
        let start = if self.eat(b'@') { Some(self.int()?) } else { None };
        Ok(Term::Progression { step, offset, start })
    }

    fn finite(&mut self) -> Result<Term> {
        self.expect(b'{')?;
        let mut items = Vec::new();
        if self.eat(b'}') {
            return Ok(Term::Finite(items));
        }
        loop {
            items.push(self.int()?);
            if self.eat(b'}') {
                return Ok(Term::Finite(items));
            }
            self.expect(b',')?;
        }
    }

    fn range(&mut self) -> Result<Term> {
        self.expect(b'[')?;
        let lo = self.int()?;
        self.expect(b'.')?;
        self.expect(b'.')?;
        let hi = self.int()?;
        self.expect(b']')?;
        if lo > hi {
            return self.error(format!("empty range [{lo}..{hi}]"));
        }
        Ok(Term::Range { lo, hi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fields(s: &Eps) -> (u64, Vec<u64>, u64, Vec<u64>) {
        (s.modulus(), s.residues().to_vec(), s.threshold(), s.exceptional().to_vec())
    }

    #[test]
    fn direct_denotations() {
        assert_eq!(fields(&parse_set_expr("2N U {1}").unwrap()), (2, vec![0], 0, vec![1]));
        assert_eq!(fields(&parse_set_expr("6N U {2,3}").unwrap()), (6, vec![0], 0, vec![2, 3]));
    }

    #[test]
    fn union_of_classes_is_enumerated_exactly() {
        // 3 | x is only covered at 0, so this is not all of ℕ
        let s = parse_set_expr("3N+1 U 3N+2 U {0}").unwrap();
        let brute: Vec<u64> = (0..=100)
            .filter(|&x| (x >= 1 && x % 3 == 1) || (x >= 2 && x % 3 == 2) || x == 0)
            .collect();
        assert_eq!(s.enumerate(100), brute);
        assert_eq!(fields(&s), (3, vec![1, 2], 0, vec![0]));

        let n = parse_set_expr("3N U 3N+1 U 3N+2").unwrap();
        assert_eq!(fields(&n), (1, vec![0], 0, vec![]));
    }

    #[test]
    fn default_start_is_the_offset() {
        let s = parse_set_expr("5N+7").unwrap();
        assert_eq!(s.enumerate(20), vec![7, 12, 17]);
        let s = parse_set_expr("5N+7@0").unwrap();
        assert_eq!(s.enumerate(20), vec![2, 7, 12, 17]);
    }

    #[test]
    fn ranges_and_whitespace() {
        let s = parse_set_expr("  6N U [1 .. 5] ").unwrap();
        assert_eq!(fields(&s), (6, vec![0], 0, vec![1, 2, 3, 4, 5]));
        assert_eq!(parse_set_expr("{}").unwrap(), Eps::empty());
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse_set_expr("0N U {1}"), Err(Error::ZeroModulus { pos: 0 }));
        assert_eq!(parse_set_expr("2N U 0N+1"), Err(Error::ZeroModulus { pos: 5 }));
        match parse_set_expr("2N U {1,}") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_set_expr("2N U"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_set_expr("2X"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_set_expr("[5..1]"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn odd_tail_merges_to_one_class() {
        let s = parse_set_expr("4N+1@9 U 4N+3@9 U {0,2,5}").unwrap();
        assert_eq!(s.to_string(), "2N+1@8 U {0,2,5}");
    }

    #[test]
    fn modulus_cap() {
        assert!(matches!(
            parse_set_expr_with_cap("1000N U 999N", 10_000),
            Err(Error::ModulusCap { modulus: 999_000, .. })
        ));
    }

    #[test]
    fn canonical_text_roundtrips() {
        for text in ["6N+0@0 U {2,3}", "1N+0@0", "{5}", "2N+1@8 U {0,2,5}"] {
            let s = parse_set_expr(text).unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(SetExpr::parse(text).unwrap().to_string(), text);
        }
    }
}
