//! Expression grammar for scalars, algebra elements and forms.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '(*)' | '⊗' | <juxtaposition>) factor)*
//! factor := '-' factor | scalar | 'xN' | 'dxN' | 'd2xN' | 'd' '(' expr ')' | '(' expr ')'
//! scalar := INT ('/' INT)? | 'q' | '[' INT ']_q'
//! ```
//!
//! There is a single product, the tensor product with coefficients pushed
//! right, so `x1 * dx2` and `x1 dx2` both canonicalize through `xi`. `d(..)`
//! only accepts algebra elements; higher forms are written with letters.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::calculus::CalculusContext;
use crate::error::{Error, Result};
use crate::freealg::AlgebraElement;
use crate::scalar::{q_integer, CycScalar};
use crate::tensoralg::{tensor_mul, DLetter, TensorElement};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Slash,
    Plus,
    Minus,
    Star,
    Tensor,
    LParen,
    RParen,
    Q,
    QInt(u64),
    Gen(usize),
    Letter(DLetter),
    D,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(i) => format!("integer {i}"),
            Tok::Slash => "'/'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Tensor => "'(*)'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Q => "'q'".into(),
            Tok::QInt(n) => format!("[{n}]_q"),
            Tok::Gen(i) => format!("x{}", i + 1),
            Tok::Letter(l) if l.grade == 1 => format!("dx{}", l.index + 1),
            Tok::Letter(l) => format!("d2x{}", l.index + 1),
            Tok::D => "'d'".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self, Tok::Int(_) | Tok::LParen | Tok::Q | Tok::QInt(_) | Tok::Gen(_) | Tok::Letter(_) | Tok::D)
    }
}

fn index_suffix(digits: &str, pos: usize, word: &str) -> Result<usize> {
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(pos, format!("unknown identifier '{word}'")));
    }
    match digits.parse::<usize>() {
        Ok(i) if i >= 1 => Ok(i - 1),
        _ => Err(Error::parse(pos, format!("generator indices start at 1 in '{word}'"))),
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let rest = &src[pos..];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let (tok, width) = match c {
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '/' => (Tok::Slash, 1),
            '⊗' => (Tok::Tensor, 1),
            ')' => (Tok::RParen, 1),
            '(' if rest.starts_with("(*)") => (Tok::Tensor, 3),
            '(' => (Tok::LParen, 1),
            '[' => {
                let close = rest.find("]_q").ok_or_else(|| Error::parse(pos, "expected q-integer of the form [n]_q"))?;
                let body = &rest[1..close];
                let n = body.trim().parse::<u64>().map_err(|_| Error::parse(pos + 1, format!("invalid q-integer argument '{body}'")))?;
                (Tok::QInt(n), rest[..close + 3].chars().count())
            }
            c if c.is_ascii_digit() => {
                let len = rest.bytes().take_while(u8::is_ascii_digit).count();
                (Tok::Int(rest[..len].parse().expect("digits")), len)
            }
            c if c.is_ascii_alphabetic() => {
                let len = rest.bytes().take_while(u8::is_ascii_alphanumeric).count();
                let word = &rest[..len];
                let tok = if word == "q" {
                    Tok::Q
                } else if word == "d" {
                    Tok::D
                } else if let Some(d) = word.strip_prefix('x') {
                    Tok::Gen(index_suffix(d, pos, word)?)
                } else if let Some(d) = word.strip_prefix("dx") {
                    Tok::Letter(DLetter::d1(index_suffix(d, pos, word)?))
                } else if let Some(d) = word.strip_prefix("d2x") {
                    Tok::Letter(DLetter::d2(index_suffix(d, pos, word)?))
                } else if word.strip_prefix('d').and_then(|r| r.split_once('x')).is_some_and(|(g, _)| g.parse::<u32>().is_ok_and(|g| g >= 3)) {
                    return Err(Error::parse(pos, "d^3 x^i = 0"));
                } else {
                    return Err(Error::parse(pos, format!("unknown identifier '{word}'")));
                };
                (tok, len)
            }
            other => return Err(Error::parse(pos, format!("unexpected character '{other}'"))),
        };
        out.push((pos, tok));
        // `width` is in chars.
        let end = pos + rest.chars().take(width).map(char::len_utf8).sum::<usize>();
        while i < chars.len() && chars[i].0 < end {
            i += 1;
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    ctx: Option<&'a CalculusContext>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(Error::parse(self.pos(), format!("expected {}, found {}", want.describe(), self.peek().describe())))
        }
    }

    fn check_index(&self, i: usize, pos: usize) -> Result<()> {
        match self.ctx {
            None => Err(Error::parse(pos, "generators are not allowed in a scalar")),
            Some(ctx) if i >= ctx.n() => {
                Err(Error::parse(pos, format!("unknown generator index {} (n = {})", i + 1, ctx.n())))
            }
            Some(_) => Ok(()),
        }
    }

    fn mul(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let scalar = |t: &TensorElement| {
            if t.is_zero() {
                return Some(CycScalar::zero());
            }
            match t.terms().next() {
                Some((w, c)) if t.num_terms() == 1 && w.is_empty() => c.as_scalar(),
                _ => None,
            }
        };
        if let Some(s) = scalar(a) {
            return b.scale(&s);
        }
        if let Some(s) = scalar(b) {
            return a.scale(&s);
        }
        tensor_mul(self.ctx.expect("non-scalar values need a context").xi(), a, b)
    }

    fn expr(&mut self) -> Result<TensorElement> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TensorElement> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star | Tok::Tensor => {
                    self.bump();
                }
                t if t.starts_factor() => {}
                _ => return Ok(acc),
            }
            let rhs = self.factor()?;
            acc = self.mul(&acc, &rhs);
        }
    }

    fn factor(&mut self) -> Result<TensorElement> {
        let pos = self.pos();
        match self.bump() {
            Tok::Minus => Ok(-&self.factor()?),
            Tok::Int(num) => {
                let value = if *self.peek() == Tok::Slash {
                    self.bump();
                    let dpos = self.pos();
                    let Tok::Int(den) = self.bump() else {
                        return Err(Error::parse(dpos, "expected integer denominator"));
                    };
                    if den.is_zero() {
                        return Err(Error::parse(dpos, "zero denominator"));
                    }
                    BigRational::new(num, den)
                } else {
                    BigRational::from_integer(num)
                };
                Ok(TensorElement::scalar(CycScalar::from_rational(value)))
            }
            Tok::Q => Ok(TensorElement::scalar(CycScalar::q())),
            Tok::QInt(n) => Ok(TensorElement::scalar(q_integer(n))),
            Tok::Gen(i) => {
                self.check_index(i, pos)?;
                Ok(TensorElement::from_algebra(AlgebraElement::gen(i)))
            }
            Tok::Letter(l) => {
                self.check_index(l.index as usize, pos)?;
                Ok(TensorElement::letter(l))
            }
            Tok::D => {
                self.expect(Tok::LParen)?;
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                if inner.max_grade() > 0 {
                    return Err(Error::parse(pos, "d(...) applies only to algebra elements; write forms with dxN and d2xN"));
                }
                let ctx = self.ctx.ok_or_else(|| Error::parse(pos, "d(...) is not allowed in a scalar"))?;
                Ok(ctx.d1(&inner.algebra_part()))
            }
            Tok::LParen => {
                let inner = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(Error::parse(pos, format!("expected a factor, found {}", other.describe()))),
        }
    }

    fn finish(mut self) -> Result<TensorElement> {
        let v = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(Error::parse(self.pos(), format!("unexpected {}", self.peek().describe())));
        }
        Ok(v)
    }
}

/// Parses a form over the calculus of `ctx` into canonical form.
pub fn parse_expression(src: &str, ctx: &CalculusContext) -> Result<TensorElement> {
    Parser { toks: lex(src)?, at: 0, ctx: Some(ctx) }.finish()
}

/// Parses an algebra element (a grade-0 expression).
pub fn parse_algebra(src: &str, ctx: &CalculusContext) -> Result<AlgebraElement> {
    let t = parse_expression(src, ctx)?;
    if t.max_grade() > 0 {
        return Err(Error::parse(0, "expected an algebra element, found a form"));
    }
    Ok(t.algebra_part())
}

/// Parses a scalar expression such as `1/2 - 3*q` or `[2]_q`.
pub fn parse_scalar(src: &str) -> Result<CycScalar> {
    let t = Parser { toks: lex(src)?, at: 0, ctx: None }.finish()?;
    Ok(t.algebra_part().as_scalar().unwrap_or_else(CycScalar::zero))
}
