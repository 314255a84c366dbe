//! Text syntax for monomials and monomial ideals.
//!
//! A monomial is `1` or a `*`-separated product of factors `var` or
//! `var^exp`, e.g. `x1^2*x3`.  Variables are resolved against the declared
//! names of the ring; the canonical names `x1..xd` always work, and for
//! rings with at most three variables the aliases `x`, `y`, `z` do too.  An
//! ideal is a bracketed comma-separated generator list such as `[x^2, x*y]`;
//! `[]` is the zero ideal and `[1]` the unit ideal.
//!
//! Inputs are untrusted: every failure is a structured error, never a panic,
//! and exponents are capped.

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};

/// Largest exponent the parser accepts for a single factor.
pub const MAX_EXPONENT: u32 = 1_000_000;

fn err(at: usize, message: impl Into<String>) -> Error {
    Error::Parse { at, message: message.into() }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek();
        if b.is_some() {
            self.pos += 1;
        }
        b
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        let start = self.pos;
        if !self.peek().is_some_and(|b| b.is_ascii_alphabetic() || b == b'_') {
            return None;
        }
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).ok()
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        let mut val: u64 = 0;
        let mut any = false;
        while let Some(b) = self.peek() {
            if !b.is_ascii_digit() {
                break;
            }
            any = true;
            val = val * 10 + u64::from(b - b'0');
            if val > MAX_EXPONENT as u64 {
                return Err(err(start, format!("exponent exceeds {MAX_EXPONENT}")));
            }
            self.pos += 1;
        }
        if !any {
            return Err(err(self.pos, "expected a number"));
        }
        Ok(val as u32)
    }
}

/// Map a variable token to its index.  Declared names win; `x<k>` canonical
/// names and the `x`, `y`, `z` aliases (for d ≤ 3) apply when not shadowed.
fn resolve_var(token: &str, names: &[String]) -> Option<usize> {
    if let Some(i) = names.iter().position(|n| n == token) {
        return Some(i);
    }
    if names.len() <= 3 {
        if let Some(i) = ["x", "y", "z"].iter().position(|a| *a == token) {
            if i < names.len() {
                return Some(i);
            }
        }
    }
    if let Some(rest) = token.strip_prefix('x') {
        if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) && rest.len() <= 4 {
            let k: usize = rest.parse().ok()?;
            if k >= 1 && k <= names.len() {
                return Some(k - 1);
            }
        }
    }
    None
}

fn parse_monomial_at(cur: &mut Cursor, names: &[String]) -> Result<Monomial> {
    let mut exps = vec![0u32; names.len()];
    loop {
        cur.skip_ws();
        let at = cur.pos;
        if cur.eat(b'1') {
            // The factor 1 contributes nothing.
        } else if let Some(tok) = cur.ident() {
            let Some(v) = resolve_var(tok, names) else {
                return Err(err(at, format!("unknown variable `{tok}`")));
            };
            let mut e = 1u32;
            if cur.eat(b'^') {
                cur.skip_ws();
                e = cur.number()?;
            }
            exps[v] = exps[v]
                .checked_add(e)
                .filter(|&t| t <= MAX_EXPONENT)
                .ok_or_else(|| err(at, format!("exponent exceeds {MAX_EXPONENT}")))?;
        } else {
            return Err(err(cur.pos, "expected a variable or 1"));
        }
        cur.skip_ws();
        if !cur.eat(b'*') {
            break;
        }
    }
    Ok(Monomial::new(exps))
}

/// Parse a single monomial such as `x^2*y` against the given variable names.
pub fn parse_monomial(input: &str, names: &[String]) -> Result<Monomial> {
    let mut cur = Cursor::new(input);
    let m = parse_monomial_at(&mut cur, names)?;
    cur.skip_ws();
    if let Some(b) = cur.peek() {
        return Err(err(cur.pos, format!("unexpected `{}`", b as char)));
    }
    Ok(m)
}

/// Parse a bracketed generator list such as `[x^2, x*y]` into an ideal.
/// The result is minimalized; `[]` is the zero ideal.
pub fn parse_ideal(input: &str, names: &[String]) -> Result<MonomialIdeal> {
    let mut cur = Cursor::new(input);
    cur.skip_ws();
    if !cur.eat(b'[') {
        return Err(err(cur.pos, "expected `[`"));
    }
    let mut gens = Vec::new();
    cur.skip_ws();
    if !cur.eat(b']') {
        loop {
            gens.push(parse_monomial_at(&mut cur, names)?);
            cur.skip_ws();
            match cur.bump() {
                Some(b',') => continue,
                Some(b']') => break,
                Some(b) => return Err(err(cur.pos - 1, format!("unexpected `{}`", b as char))),
                None => return Err(err(cur.pos, "unterminated generator list")),
            }
        }
    }
    cur.skip_ws();
    if let Some(b) = cur.peek() {
        return Err(err(cur.pos, format!("unexpected `{}`", b as char)));
    }
    Ok(MonomialIdeal::new(names.len(), gens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::default_var_names;

    fn names(d: usize) -> Vec<String> {
        default_var_names(d)
    }

    #[test]
    fn parses_canonical_and_alias_forms() {
        let n3 = names(3);
        assert_eq!(parse_monomial("x1^2*x3", &n3).unwrap(), Monomial::new(vec![2, 0, 1]));
        assert_eq!(parse_monomial("x^2 * z", &n3).unwrap(), Monomial::new(vec![2, 0, 1]));
        assert_eq!(parse_monomial("1", &n3).unwrap(), Monomial::one(3));
        assert_eq!(parse_monomial("y*y^3", &n3).unwrap(), Monomial::new(vec![0, 4, 0]));
    }

    #[test]
    fn declared_names_shadow_aliases() {
        let custom = vec!["y".to_string(), "x".to_string()];
        // `x` names the second variable here.
        assert_eq!(parse_monomial("x", &custom).unwrap(), Monomial::new(vec![0, 1]));
        assert_eq!(parse_monomial("y^2", &custom).unwrap(), Monomial::new(vec![2, 0]));
    }

    #[test]
    fn rejects_malformed_input() {
        let n2 = names(2);
        assert!(parse_monomial("", &n2).is_err());
        assert!(parse_monomial("x^", &n2).is_err());
        assert!(parse_monomial("w", &n2).is_err());
        assert!(parse_monomial("x**y", &n2).is_err());
        assert!(parse_monomial("x^2y", &n2).is_err());
        assert!(parse_monomial("x3", &n2).is_err());
        assert!(parse_monomial(&format!("x^{}", MAX_EXPONENT as u64 + 1), &n2).is_err());
    }

    #[test]
    fn ideal_lists() {
        let n2 = names(2);
        let i = parse_ideal("[x^2, x*y]", &n2).unwrap();
        assert_eq!(i.gens().len(), 2);
        assert!(parse_ideal("[]", &n2).unwrap().is_zero());
        assert!(parse_ideal("[1]", &n2).unwrap().is_unit());
        assert!(parse_ideal("[x^2, x]", &n2).unwrap().gens().len() == 1);
        assert!(parse_ideal("[x,", &n2).is_err());
        assert!(parse_ideal("x", &n2).is_err());
        assert!(parse_ideal("[x] y", &n2).is_err());
    }
}
