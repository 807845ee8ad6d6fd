//! A small expression language for algebra elements.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' nat)?
//! atom   := rational | generator | '(' expr ')'
//! rational  := int ('/' posint)?
//! generator := ('v' | 'y' | 'u' | 'x' | 'n' | 'dn') index
//! ```
//!
//! Positions in errors are 0-based byte offsets.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::liedata::LieAlgebra;
use crate::multivec::{mul_unchecked, Elem, Tag};
use crate::ring::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(Rational),
    /// Generator letter, 1-based index, source position.
    Gen(String, usize, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Neg(Box<Expr>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::ParseError { pos, msg: msg.into() })
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).expect("ascii"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let d = self.digits().ok_or(Error::ParseError { pos: at, msg: "expected exponent".into() })?;
            let k: u32 = d.parse().map_err(|_| Error::ParseError { pos: at, msg: "exponent too large".into() })?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = match self.peek() {
            None => return err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.src[at];
        if c == b'(' {
            self.pos += 1;
            let e = self.expr()?;
            if self.peek() != Some(b')') {
                return err(self.pos, "expected ')'");
            }
            self.pos += 1;
            return Ok(e);
        }
        if c.is_ascii_digit() {
            let num: BigInt = self.digits().expect("digit").parse().expect("digits");
            if self.src.get(self.pos) == Some(&b'/') {
                self.pos += 1;
                let dpos = self.pos;
                let den: BigInt = match self.digits() {
                    Some(d) => d.parse().expect("digits"),
                    None => return err(dpos, "expected denominator"),
                };
                if den.is_zero() {
                    return err(dpos, "zero denominator");
                }
                return Ok(Expr::Num(Rational::new(num, den)));
            }
            return Ok(Expr::Num(Rational::from_integer(num)));
        }
        let letter = if self.src[at..].starts_with(b"dn") {
            "dn"
        } else {
            match c {
                b'v' => "v",
                b'y' => "y",
                b'u' => "u",
                b'x' => "x",
                b'n' => "n",
                _ => return err(at, format!("unexpected character '{}'", c as char)),
            }
        };
        self.pos += letter.len();
        let ipos = self.pos;
        let idx = match self.digits() {
            Some(d) => d.parse::<usize>().map_err(|_| Error::ParseError { pos: ipos, msg: "index too large".into() })?,
            None => return err(ipos, "expected generator index"),
        };
        Ok(Expr::Gen(letter.to_string(), idx, at))
    }
}

/// Parses an expression.
pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected '{}'", c as char));
    }
    Ok(e)
}

impl Expr {
    /// Evaluates in the algebra named by the tag. Sphere results are put in
    /// normal form.
    pub fn eval(&self, tag: Tag, alg: &LieAlgebra) -> Result<Elem> {
        let n = if tag == Tag::Sphere { 3 } else { alg.dim() };
        let e = self.eval_raw(tag, alg, n)?;
        Ok(if tag == Tag::Sphere { crate::cartan::sphere_nf(&e) } else { e })
    }

    fn eval_raw(&self, tag: Tag, alg: &LieAlgebra, n: usize) -> Result<Elem> {
        Ok(match self {
            Expr::Num(r) => Elem::scalar(tag, n, r.clone()),
            Expr::Gen(letter, idx, _) => {
                let is_sym = tag.sym_letter() == Some(letter.as_str());
                let is_ext = tag.ext_letter() == Some(letter.as_str());
                if !is_sym && !is_ext {
                    return Err(Error::TagMismatch { expected: tag.name().into(), found: format!("{letter}{idx}") });
                }
                if *idx == 0 || *idx > n {
                    return Err(Error::IndexOutOfRange { index: *idx, dim: n });
                }
                if is_sym {
                    Elem::sym_gen(tag, n, idx - 1)
                } else {
                    Elem::ext_gen(tag, n, idx - 1)
                }
            }
            Expr::Add(a, b) => &a.eval_raw(tag, alg, n)? + &b.eval_raw(tag, alg, n)?,
            Expr::Sub(a, b) => &a.eval_raw(tag, alg, n)? - &b.eval_raw(tag, alg, n)?,
            Expr::Neg(a) => -&a.eval_raw(tag, alg, n)?,
            Expr::Mul(a, b) => mul_unchecked(alg, &a.eval_raw(tag, alg, n)?, &b.eval_raw(tag, alg, n)?),
            Expr::Pow(a, k) => {
                let base = a.eval_raw(tag, alg, n)?;
                let mut acc = Elem::one(tag, n);
                for _ in 0..*k {
                    acc = mul_unchecked(alg, &acc, &base);
                }
                acc
            }
        })
    }
}

/// Parses and evaluates in one step.
pub fn parse_elem(text: &str, tag: Tag, alg: &LieAlgebra) -> Result<Elem> {
    parse(text)?.eval(tag, alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liedata::su2;
    use crate::ring::{int, rat};

    #[test]
    fn examples() {
        let g = su2();
        let lam = parse_elem("v1*v1 + v2*v2 + v3*v3", Tag::Sym, &g).unwrap();
        assert_eq!(lam.render(), "v1^2 + v2^2 + v3^2");
        assert_eq!(parse_elem("u2*u1", Tag::Env, &g).unwrap().render(), "u1*u2 - u3");
        assert_eq!(parse("y1*("), Err(Error::ParseError { pos: 4, msg: "unexpected end of input".into() }));
    }

    #[test]
    fn precedence_and_literals() {
        let g = su2();
        let e = parse_elem("2*v1^2 - 3/4", Tag::Sym, &g).unwrap();
        assert_eq!(e.coeff(&crate::multivec::Mono::one(3)), rat(-3, 4));
        assert_eq!(parse_elem("-(v1) + v1", Tag::Sym, &g).unwrap(), Elem::zero(Tag::Sym, 3));
        assert_eq!(parse_elem("x1*x1", Tag::Cl, &g).unwrap(), Elem::scalar(Tag::Cl, 3, rat(1, 2)));
        assert_eq!(parse_elem("(v1)^0", Tag::Sym, &g).unwrap(), Elem::scalar(Tag::Sym, 3, int(1)));
    }

    #[test]
    fn errors() {
        let g = su2();
        assert!(matches!(parse_elem("v4", Tag::Sym, &g), Err(Error::IndexOutOfRange { index: 4, dim: 3 })));
        assert!(matches!(parse_elem("u1", Tag::Sym, &g), Err(Error::TagMismatch { .. })));
        assert!(matches!(parse("1/0"), Err(Error::ParseError { pos: 2, .. })));
        assert!(matches!(parse("v1 v2"), Err(Error::ParseError { pos: 3, .. })));
        assert!(matches!(parse("q1"), Err(Error::ParseError { pos: 0, .. })));
    }

    #[test]
    fn sphere_generators() {
        let g = su2();
        let e = parse_elem("n1^2 + n2^2 + n3^2", Tag::Sphere, &g).unwrap();
        assert_eq!(e, Elem::one(Tag::Sphere, 3));
        let f = parse_elem("n1*dn1 + n2*dn2 + n3*dn3", Tag::Sphere, &g).unwrap();
        assert!(f.is_zero());
    }
}
