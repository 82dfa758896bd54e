//! Recursive-descent parser for the polynomial grammar.
//!
//! ```text
//! expr   := [+|-] term { (+|-) term }
//! term   := factor { [*] factor }
//! factor := atom [ ^ signed-int ]
//! atom   := decimal | (re,im) | z<idx> | ( expr )
//! ```
//!
//! Variables are 1-based. Parenthesised sub-expressions are expanded at parse
//! time; a negative power is only allowed on a single-term base.

use num_complex::Complex64;

use super::LaurentPoly;
use crate::{Error, Result};

pub(super) fn parse(text: &str, nvars: usize) -> Result<LaurentPoly> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        nvars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            message: message.to_string(),
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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut negate = false;
        match self.peek() {
            Some(b'+') => self.pos += 1,
            Some(b'-') => {
                self.pos += 1;
                negate = true;
            }
            _ => {}
        }
        let mut acc = self.term()?;
        if negate {
            acc = acc.scale(Complex64::new(-1.0, 0.0));
        }
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                Some(b'z') | Some(b'(') => {
                    let f = self.factor()?;
                    acc = acc.mul(&f)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.pos;
        let k = self.signed_int()?;
        if k >= 0 {
            let k = u32::try_from(k).map_err(|_| self.error("exponent too large"))?;
            return Ok(base.pow(k));
        }
        if !base.is_monomial() {
            self.pos = at;
            return Err(self.error("negative power of a polynomial with several terms"));
        }
        let (e, c) = base.terms().next().expect("monomial");
        let k = -k;
        let inv: Vec<i64> = e.as_slice().iter().map(|x| -x * k).collect();
        Ok(LaurentPoly::monomial(inv, c.inv().powi(k as i32)))
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some(b'z') => {
                self.pos += 1;
                let start = self.pos;
                let idx = self.digits()?;
                let idx: usize = idx.parse().map_err(|_| self.error("bad variable index"))?;
                if idx == 0 || idx > self.nvars {
                    self.pos = start;
                    return Err(Error::VariableOutOfRange {
                        index: idx,
                        n: self.nvars,
                    });
                }
                Ok(LaurentPoly::variable(self.nvars, idx - 1))
            }
            Some(b'(') => {
                self.pos += 1;
                let save = self.pos;
                if let Some(c) = self.try_complex_literal() {
                    return Ok(LaurentPoly::constant(self.nvars, c));
                }
                self.pos = save;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let x = self.decimal()?;
                Ok(LaurentPoly::constant(self.nvars, Complex64::new(x, 0.0)))
            }
            Some(_) => Err(self.error("expected a number, a variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    /// `re,im)` after an opening parenthesis.
    fn try_complex_literal(&mut self) -> Option<Complex64> {
        let re = self.signed_decimal().ok()?;
        if self.peek() != Some(b',') {
            return None;
        }
        self.pos += 1;
        let im = self.signed_decimal().ok()?;
        if self.peek() != Some(b')') {
            return None;
        }
        self.pos += 1;
        Some(Complex64::new(re, im))
    }

    fn digits(&mut self) -> Result<String> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected digits"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let d = self.digits()?;
        let v: i64 = d.parse().map_err(|_| self.error("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn signed_decimal(&mut self) -> Result<f64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        self.skip_ws();
        let x = self.decimal()?;
        Ok(if neg { -x } else { x })
    }

    fn decimal(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut j = i + 1;
            if j < s.len() && (s[j] == b'+' || s[j] == b'-') {
                j += 1;
            }
            if j < s.len() && s[j].is_ascii_digit() {
                while j < s.len() && s[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
        }
        let text = std::str::from_utf8(&s[start..i]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(x) if x.is_finite() => {
                self.pos = i;
                Ok(x)
            }
            _ => Err(self.error("malformed number")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;

    fn one() -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    #[test]
    fn trinomial() {
        let p = parse("z1 + z2 + 1", 2).unwrap();
        assert_eq!(p.len(), 3);
        for e in [[1, 0], [0, 1], [0, 0]] {
            assert_eq!(p.coeff(&e), one());
        }
    }

    #[test]
    fn cancellation_gives_zero() {
        assert!(parse("z1^-1 - z1^-1", 1).unwrap().is_zero());
        assert!(parse("0", 3).unwrap().is_zero());
    }

    #[test]
    fn expands_products() {
        let p = parse("(1-z1)*(1-z2) - (1-z3)*(1-z4)", 4).unwrap();
        let expected = parse("-z1 - z2 + z1*z2 + z3 + z4 - z3*z4", 4).unwrap();
        assert_eq!(p, expected);
        assert_eq!(p.len(), 6);
        // evaluation cross-check against the factored form at random points
        for k in 0..20 {
            let t: Vec<f64> = (0..4).map(|j| 0.37 * (k * 4 + j) as f64 + 0.1).collect();
            let z: Vec<Complex64> = t
                .iter()
                .map(|&x| Complex64::new(x.cos() * 1.3, x.sin()))
                .collect();
            let f = (one() - z[0]) * (one() - z[1]) - (one() - z[2]) * (one() - z[3]);
            assert!((p.eval(&z).unwrap() - f).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_coefficients_and_powers() {
        let p = parse("(2,-1)*z1^2 + (0.5,0)z2 - 3e-1", 2).unwrap();
        assert_eq!(p.coeff(&[2, 0]), Complex64::new(2.0, -1.0));
        assert_eq!(p.coeff(&[0, 1]), Complex64::new(0.5, 0.0));
        assert_eq!(p.coeff(&[0, 0]), Complex64::new(-0.3, 0.0));
        let q = parse("(z1-1)^2", 1).unwrap();
        assert_eq!(q, parse("z1^2 - 2*z1 + 1", 1).unwrap());
        let r = parse("(2*z1*z2^-1)^-2", 2).unwrap();
        assert_eq!(r.coeff(&[-2, 2]), Complex64::new(0.25, 0.0));
    }

    #[test]
    fn errors_carry_positions() {
        match parse("z1 + * z2", 2) {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse("z3 + 1", 2),
            Err(Error::VariableOutOfRange { index: 3, n: 2 })
        ));
        assert!(matches!(
            parse("z0", 2),
            Err(Error::VariableOutOfRange { .. })
        ));
        assert!(parse("(z1 + 1", 1).is_err());
        assert!(parse("(z1+1)^-1", 1).is_err());
        assert!(parse("z1 z", 1).is_err());
        assert!(parse("", 1).is_err());
    }

    #[test]
    fn display_reparses() {
        let p = LaurentPoly::parse("(1.5,-2)*z1^-3*z2 - 0.25*z2^7 + 4", 2).unwrap();
        assert_eq!(LaurentPoly::parse(&p.to_string(), 2).unwrap(), p);
    }
}
