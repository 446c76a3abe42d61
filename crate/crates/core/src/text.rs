//! Concrete syntax for algebra and Witt elements.
//!
//! ```text
//! element := sign? term (('+' | '-') term)*
//! term    := coeff ('*' factor)* | factor ('*' factor)*
//! factor  := 'x[' q (',' q)* ']' | 't' INT ('^' INT)? | 'd' INT
//! coeff   := INT | INT '/' INT
//! ```
//!
//! A term ending in a `d{p}` factor is a Witt term; all terms of one element
//! must agree. x-exponents are raw rational coordinates, not lattice
//! coordinates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraElement, AlgebraParams, Monomial};
use crate::error::{Error, Result};
use crate::rational::{fmt_q, is_zero_vec, Q};
use crate::witt::WittElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Algebra(AlgebraElement),
    Witt(WittElement),
}

#[derive(Debug)]
struct RawTerm {
    coeff: Q,
    alpha: Option<(Vec<Q>, usize)>,
    t: Vec<(usize, u32, usize)>,
    d: Option<(usize, usize)>,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Self { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn error(&self, at: usize, message: impl Into<String>) -> Error {
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        let at = self.peek_pos();
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(at, format!("expected '{c}'")))
        }
    }

    fn peek_pos(&mut self) -> usize {
        self.skip_ws();
        self.pos
    }

    fn int(&mut self) -> Result<BigInt> {
        let start = self.peek_pos();
        let digits: String = self.src[start..].chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(self.error(start, "expected an integer"));
        }
        self.pos += digits.len();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn small_int(&mut self, what: &str) -> Result<(usize, usize)> {
        let at = self.peek_pos();
        let n = self.int()?;
        let v = usize::try_from(n).map_err(|_| self.error(at, format!("{what} out of range")))?;
        Ok((v, at))
    }

    fn unsigned_rational(&mut self) -> Result<Q> {
        let num = self.int()?;
        if self.eat('/') {
            let at = self.peek_pos();
            let den = self.int()?;
            if den.is_zero() {
                return Err(self.error(at, "zero denominator"));
            }
            Ok(Q::new(num, den))
        } else {
            Ok(Q::from_integer(num))
        }
    }

    fn signed_rational(&mut self) -> Result<Q> {
        if self.eat('-') {
            Ok(-self.unsigned_rational()?)
        } else {
            self.eat('+');
            self.unsigned_rational()
        }
    }

    fn factor(&mut self, term: &mut RawTerm) -> Result<()> {
        let at = self.peek_pos();
        match self.bump() {
            Some('x') => {
                self.expect('[')?;
                let mut coords = vec![self.signed_rational()?];
                while self.eat(',') {
                    coords.push(self.signed_rational()?);
                }
                self.expect(']')?;
                match &mut term.alpha {
                    Some((a, _)) if a.len() == coords.len() => {
                        *a = crate::rational::add_vec(a, &coords);
                    }
                    Some(_) => return Err(self.error(at, "x factors of different lengths")),
                    None => term.alpha = Some((coords, at)),
                }
            }
            Some('t') => {
                let (k, _) = self.small_int("t index")?;
                let e = if self.eat('^') {
                    let eat = self.peek_pos();
                    let e = self.int()?;
                    u32::try_from(e).map_err(|_| self.error(eat, "exponent out of range"))?
                } else {
                    1
                };
                term.t.push((k, e, at));
            }
            Some('d') => {
                let (p, _) = self.small_int("d index")?;
                if term.d.is_some() {
                    return Err(self.error(at, "a term takes at most one d factor"));
                }
                term.d = Some((p, at));
            }
            _ => return Err(self.error(at, "expected a factor: x[..], t<k> or d<p>")),
        }
        Ok(())
    }

    fn term(&mut self, sign: Q) -> Result<RawTerm> {
        let mut term = RawTerm {
            coeff: sign,
            alpha: None,
            t: Vec::new(),
            d: None,
        };
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                term.coeff *= self.unsigned_rational()?;
            }
            _ => self.factor(&mut term)?,
        }
        while self.eat('*') {
            self.factor(&mut term)?;
        }
        Ok(term)
    }

    fn element(&mut self) -> Result<Vec<RawTerm>> {
        let mut terms = Vec::new();
        let mut sign = if self.eat('-') {
            -Q::one()
        } else {
            self.eat('+');
            Q::one()
        };
        loop {
            terms.push(self.term(sign)?);
            let at = self.peek_pos();
            match self.bump() {
                None => break,
                Some('+') => sign = Q::one(),
                Some('-') => sign = -Q::one(),
                Some(c) => return Err(self.error(at, format!("unexpected '{c}'"))),
            }
        }
        Ok(terms)
    }
}

enum Kind {
    Algebra,
    Witt,
}

fn build(text: &str, params: &Arc<AlgebraParams>, want: Option<Kind>) -> Result<Parsed> {
    let mut lx = Lexer::new(text);
    if lx.peek().is_none() {
        return Err(lx.error(lx.pos, "empty input"));
    }
    let raw = lx.element()?;
    let witt_terms = raw.iter().filter(|t| t.d.is_some()).count();
    let is_witt = match want {
        Some(Kind::Witt) => true,
        Some(Kind::Algebra) => false,
        None => witt_terms > 0,
    };
    for t in &raw {
        // constant zero terms ("0") carry no type
        let typeless = t.coeff.is_zero() && t.alpha.is_none() && t.t.is_empty() && t.d.is_none();
        if !typeless && t.d.is_some() != is_witt {
            let at = t.d.map_or(0, |(_, at)| at);
            let msg = if is_witt {
                "expected a Witt element: every term needs a d factor"
            } else {
                "expected an algebra element: d factors are not allowed"
            };
            return Err(lx.error(at, msg));
        }
    }
    let mut alg = AlgebraElement::zero(params);
    let mut witt = WittElement::zero(params);
    for t in raw {
        let alpha = match t.alpha {
            Some((a, _)) if a.len() != params.n_x() => {
                return Err(Error::Arity(format!(
                    "x[..] has {} coordinates, expected {}",
                    a.len(),
                    params.n_x()
                )))
            }
            Some((a, _)) => a,
            None => params.zero_alpha(),
        };
        let mut ivec = vec![0u32; params.n_t()];
        for (k, e, _) in t.t {
            if !(1..=params.n_t()).contains(&k) {
                return Err(Error::Arity(format!("t{k} outside t1..t{}", params.n_t())));
            }
            ivec[k - 1] += e;
        }
        if t.coeff.is_zero() {
            continue;
        }
        match t.d {
            Some((p, _)) => {
                if !(1..=params.ell()).contains(&p) {
                    return Err(Error::Arity(format!("d{p} outside d1..d{}", params.ell())));
                }
                let term = WittElement::term(params, t.coeff, alpha, ivec, p)?;
                witt = witt.add(&term)?;
            }
            None => {
                let term = AlgebraElement::monomial(params, t.coeff, alpha, ivec)?;
                alg = alg.add(&term)?;
            }
        }
    }
    Ok(if is_witt {
        Parsed::Witt(witt)
    } else {
        Parsed::Algebra(alg)
    })
}

/// Parses either kind; the presence of `d` factors decides which.
pub fn parse(text: &str, params: &Arc<AlgebraParams>) -> Result<Parsed> {
    build(text, params, None)
}

pub fn parse_witt(text: &str, params: &Arc<AlgebraParams>) -> Result<WittElement> {
    match build(text, params, Some(Kind::Witt))? {
        Parsed::Witt(w) => Ok(w),
        Parsed::Algebra(_) => unreachable!("requested Witt"),
    }
}

pub fn parse_algebra(text: &str, params: &Arc<AlgebraParams>) -> Result<AlgebraElement> {
    match build(text, params, Some(Kind::Algebra))? {
        Parsed::Algebra(a) => Ok(a),
        Parsed::Witt(_) => unreachable!("requested algebra"),
    }
}

/// Comma-separated rationals, as used by `--rho` and similar flags.
pub fn parse_vector(text: &str) -> Result<Vec<Q>> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let mut lx = Lexer::new(trimmed);
    let mut out = vec![lx.signed_rational()?];
    while lx.eat(',') {
        out.push(lx.signed_rational()?);
    }
    if let Some(c) = lx.peek() {
        let at = lx.pos;
        return Err(lx.error(at, format!("unexpected '{c}'")));
    }
    Ok(out)
}

fn monomial_factors(m: &Monomial) -> Vec<String> {
    let mut f = Vec::new();
    for (k, &e) in m.ivec.iter().enumerate() {
        match e {
            0 => {}
            1 => f.push(format!("t{}", k + 1)),
            _ => f.push(format!("t{}^{}", k + 1, e)),
        }
    }
    if !is_zero_vec(&m.alpha) {
        let coords: Vec<String> = m.alpha.iter().map(fmt_q).collect();
        f.push(format!("x[{}]", coords.join(",")));
    }
    f
}

fn join_terms(terms: impl Iterator<Item = (Q, Vec<String>)>) -> String {
    let mut out = String::new();
    for (c, factors) in terms {
        let neg = c.is_negative();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mag = c.abs();
        let mut parts = Vec::with_capacity(factors.len() + 1);
        if !mag.is_one() || factors.is_empty() {
            parts.push(fmt_q(&mag));
        }
        parts.extend(factors);
        out.push_str(&parts.join("*"));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_algebra(u: &AlgebraElement) -> String {
    join_terms(u.terms().iter().map(|(m, c)| (c.clone(), monomial_factors(m))))
}

pub fn print_witt(u: &WittElement) -> String {
    join_terms(u.terms().iter().map(|(k, c)| {
        let mut f = monomial_factors(&k.mono);
        f.push(format!("d{}", k.p));
        (c.clone(), f)
    }))
}

pub fn print(u: &Parsed) -> String {
    match u {
        Parsed::Algebra(a) => print_algebra(a),
        Parsed::Witt(w) => print_witt(w),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr, qvec};

    fn params(l1: usize, l2: usize, l3: usize) -> Arc<AlgebraParams> {
        Arc::new(AlgebraParams::standard(l1, l2, l3).unwrap())
    }

    #[test]
    fn single_term() {
        let p = params(0, 0, 2);
        let u = parse_witt("x[1,0]*d2", &p).unwrap();
        assert_eq!(u, WittElement::term(&p, q(1), qvec(&[1, 0]), vec![], 2).unwrap());
        assert_eq!(print_witt(&u), "x[1,0]*d2");
    }

    #[test]
    fn two_terms() {
        let p = params(1, 0, 2);
        let u = parse_witt("3/2*t1^2*x[0,1]*d1 - t1*d2", &p).unwrap();
        assert_eq!(u.len(), 2);
        let a = WittElement::term(&p, qr(3, 2), qvec(&[0, 1]), vec![2], 1).unwrap();
        let b = WittElement::term(&p, q(-1), qvec(&[0, 0]), vec![1], 2).unwrap();
        assert_eq!(u, a.add(&b).unwrap());
        assert_eq!(parse_witt(&print_witt(&u), &p).unwrap(), u);
    }

    #[test]
    fn errors() {
        let p = params(0, 0, 2);
        assert!(matches!(parse_witt("x[1/3,0]*d1", &p), Err(Error::NotInGamma(_))));
        assert!(matches!(parse_witt("x[1,0,0]*d1", &p), Err(Error::Arity(_))));
        assert!(matches!(parse_witt("x[1,0]*d3", &p), Err(Error::Arity(_))));
        let err = parse_witt("x[1,0]*d1 +", &p).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 12, .. }), "{err:?}");
        let err = parse_witt("x[1,0]*d1\n  + *", &p).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 5, .. }), "{err:?}");
        assert!(matches!(parse("x[1,0]*d1 + x[0,1]", &p), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x[1,0]*d1*d2", &p), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1/0", &p), Err(Error::Syntax { .. })));
    }

    #[test]
    fn printing() {
        let p = params(0, 0, 2);
        assert_eq!(print_witt(&WittElement::zero(&p)), "0");
        assert_eq!(print_algebra(&AlgebraElement::zero(&p)), "0");
        assert_eq!(print_algebra(&AlgebraElement::one(&p)), "1");
        let u = parse_witt("x[1,1]*d1 - x[1,1]*d2", &p).unwrap();
        assert_eq!(print_witt(&u), "x[1,1]*d1 - x[1,1]*d2");
        let v = parse_witt("-1/2*x[-1,1]*d1 + 0*d2", &p).unwrap();
        assert_eq!(print_witt(&v), "-1/2*x[-1,1]*d1");
        assert_eq!(parse("0", &p).unwrap(), Parsed::Algebra(AlgebraElement::zero(&p)));
        assert_eq!(parse_witt("0", &p).unwrap(), WittElement::zero(&p));
    }

    #[test]
    fn like_terms_combine() {
        let p = params(2, 0, 1);
        let u = parse_algebra("t1*t2 + t2*t1 - 2*t1*t2 + t1*t1", &p).unwrap();
        assert_eq!(print_algebra(&u), "t1^2");
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vector("1,-1/2, 3").unwrap(), vec![q(1), qr(-1, 2), q(3)]);
        assert!(parse_vector("").unwrap().is_empty());
        assert!(parse_vector("1,,2").is_err());
    }
}
