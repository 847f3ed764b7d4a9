//! Text format for polynomials: a signed sum of monomials with rational
//! coefficients, e.g. `3/2*x^2*y - x + 1`. `^` marks powers, `*` is optional
//! between factors, whitespace is insignificant. Printing and parsing
//! round-trip exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::{Poly, Rat, VAR_NAMES};

/// A parse failure, with the byte offset where it happened.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(s: &'a str) -> Self {
        Scanner { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return err(start, "expected digits");
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }
}

/// Parse a polynomial of arity `N`. Variables beyond the arity (e.g. `y`
/// when `N = 1`) are rejected.
pub fn parse_poly<const N: usize>(input: &str) -> Result<Poly<N>, ParseError> {
    let mut sc = Scanner::new(input);
    let mut acc = Poly::<N>::zero();
    let mut first = true;
    loop {
        sc.skip_ws();
        if sc.pos >= sc.bytes.len() {
            if first {
                return err(sc.pos, "empty polynomial");
            }
            return Ok(acc);
        }
        let negative = match sc.peek() {
            Some(b'+') => {
                sc.bump();
                false
            }
            Some(b'-') => {
                sc.bump();
                true
            }
            _ if first => false,
            Some(b) => return err(sc.pos, format!("expected '+' or '-', found {:?}", b as char)),
            None => unreachable!(),
        };
        let term = parse_term::<N>(&mut sc)?;
        acc = if negative { acc.sub(&term) } else { acc.add(&term) };
        first = false;
    }
}

fn parse_term<const N: usize>(sc: &mut Scanner<'_>) -> Result<Poly<N>, ParseError> {
    let mut coeff = Rat::one();
    let mut exps = [0u32; N];
    let mut any = false;
    loop {
        match sc.peek() {
            Some(b) if b.is_ascii_digit() => {
                let num = sc.digits()?;
                let den = if sc.eat(b'/') {
                    let pos = sc.pos;
                    let d = sc.digits()?;
                    if d.is_zero() {
                        return err(pos, "zero denominator");
                    }
                    d
                } else {
                    BigInt::one()
                };
                coeff *= Rat::new(num, den);
                any = true;
            }
            Some(b) if b.is_ascii_alphabetic() => {
                let pos = sc.pos;
                let name = (b as char).to_ascii_lowercase().to_string();
                let idx = match VAR_NAMES.iter().position(|v| **v == name) {
                    Some(i) if i < N => i,
                    Some(_) => {
                        return err(pos, format!("variable '{name}' not allowed in {N}-variable polynomial"))
                    }
                    None => return err(pos, format!("unknown variable '{name}'")),
                };
                sc.bump();
                let e: u32 = if sc.eat(b'^') {
                    let pos = sc.pos;
                    let d = sc.digits()?;
                    u32::try_from(&d).map_err(|_| ParseError { pos, msg: "exponent too large".into() })?
                } else {
                    1
                };
                exps[idx] += e;
                any = true;
            }
            _ => break,
        }
        // a '*' may separate factors but is never required
        if !sc.eat(b'*') {
            match sc.peek() {
                Some(b) if b.is_ascii_alphanumeric() => continue,
                _ => break,
            }
        }
    }
    if !any {
        return err(sc.pos, "expected a term");
    }
    Ok(Poly::monomial(exps, coeff))
}

fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn monomial_to_string<const N: usize>(exps: &[u32; N]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(VAR_NAMES[i].to_string()),
            _ => parts.push(format!("{}^{}", VAR_NAMES[i], e)),
        }
    }
    parts.join("*")
}

/// Canonical printed form: terms in descending lexicographic exponent order.
pub fn poly_to_string<const N: usize>(p: &Poly<N>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (exps, coeff)) in p.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let mag = coeff.abs();
        if i == 0 {
            if coeff.is_negative() {
                out.push('-');
            }
        } else if coeff.is_negative() {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mono = monomial_to_string(exps);
        if mono.is_empty() {
            out.push_str(&rat_to_string(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&rat_to_string(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

/// Parse a rational written as `p` or `p/q`.
pub fn parse_rat(s: &str) -> Result<Rat, ParseError> {
    let t = s.trim();
    let (neg, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r.trim_start()),
        None => (false, t.strip_prefix('+').unwrap_or(t).trim_start()),
    };
    let mut sc = Scanner::new(rest);
    let num = sc.digits().map_err(|e| ParseError { pos: e.pos, msg: format!("bad rational '{t}'") })?;
    let den = if sc.eat(b'/') {
        let d = sc.digits().map_err(|e| ParseError { pos: e.pos, msg: format!("bad rational '{t}'") })?;
        if d.is_zero() {
            return err(0, format!("zero denominator in '{t}'"));
        }
        d
    } else {
        BigInt::one()
    };
    sc.skip_ws();
    if sc.pos != rest.len() {
        return err(sc.pos, format!("trailing input in rational '{t}'"));
    }
    let r = Rat::new(num, den);
    Ok(if neg { -r } else { r })
}
