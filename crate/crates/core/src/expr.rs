//! Plain-text expression grammar for elements and report witnesses.
//!
//! Tensor elements: rational coefficients as `p/q`, generators `e1`, `e2`,
//! ..., `*` for the algebra product, `(x)` separating tensor slots, and `1`
//! for the unit. Example: `3/2 * e1*e2 (x) e2 - e2 (x) e1`.
//!
//! Polyvectors: `^` joins wedge factors; factors are generators or named
//! Lie-basis bracketings such as `[e1,[e1,e2]]`; a bare rational is a
//! scalar (empty wedge). Example: `1/2 * e1 ^ [e1,e2]`.

use std::sync::Arc;

use crate::algebra::{LieAlgebraSpec, Monomial, NCElement};
use crate::error::CoreError;
use crate::exterior::{LieBasis, PolyVector};
use crate::scalar::Scalar;
use crate::tensor::TensorElement;

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(Scalar),
    Ident(String),
    Star,
    TensorSep,
    Plus,
    Minus,
    Caret,
    LBracket,
    RBracket,
    Comma,
}

fn tokenize(input: &str) -> Result<Vec<Token>, CoreError> {
    let mut tokens = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '(' => {
                if input[i..].starts_with("(x)") {
                    tokens.push(Token::TensorSep);
                    i += 3;
                } else {
                    return Err(CoreError::Parse(format!("expected `(x)` at position {i}")));
                }
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '[' => {
                tokens.push(Token::LBracket);
                i += 1;
            }
            ']' => {
                tokens.push(Token::RBracket);
                i += 1;
            }
            ',' => {
                tokens.push(Token::Comma);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] as char == '/' {
                    i += 1;
                    let denom_start = i;
                    while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                        i += 1;
                    }
                    if i == denom_start {
                        return Err(CoreError::Parse("missing denominator".into()));
                    }
                }
                tokens.push(Token::Number(input[start..i].parse()?));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len()
                    && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] as char == '_')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(input[start..i].to_string()));
            }
            other => {
                return Err(CoreError::Parse(format!(
                    "unexpected character `{other}` at position {i}"
                )));
            }
        }
    }
    Ok(tokens)
}

struct Cursor {
    tokens: Vec<Token>,
    pos: usize,
}

impl Cursor {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

fn generator_index(algebra: &LieAlgebraSpec, name: &str) -> Result<usize, CoreError> {
    for i in 0..algebra.generator_count() {
        if algebra.generator_name(i) == name {
            return Ok(i);
        }
    }
    Err(CoreError::Parse(format!("unknown generator `{name}`")))
}

/// Parses a tensor-element expression; the arity is inferred from the slot
/// count, which every term must share.
pub fn parse_tensor(
    algebra: &Arc<LieAlgebraSpec>,
    input: &str,
) -> Result<TensorElement, CoreError> {
    let mut cur = Cursor {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let mut element: Option<TensorElement> = None;
    let mut sign = Scalar::one();
    if cur.eat(&Token::Minus) {
        sign = -sign;
    }
    loop {
        let (branches, arity) = parse_tensor_term_branches(algebra, &mut cur)?;
        let el =
            element.get_or_insert_with(|| TensorElement::zero(algebra.clone(), arity as i64 - 1));
        if el.arity() != arity as i64 - 1 {
            return Err(CoreError::Parse(
                "terms have different tensor arities".into(),
            ));
        }
        for (tuple, c) in branches {
            el.add_term(tuple, &c * &sign);
        }
        match cur.next() {
            None => break,
            Some(Token::Plus) => sign = Scalar::one(),
            Some(Token::Minus) => sign = -Scalar::one(),
            Some(t) => {
                return Err(CoreError::Parse(format!("unexpected token {:?}", t)));
            }
        }
    }
    element.ok_or_else(|| CoreError::Parse("empty expression".into()))
}

fn parse_tensor_term_branches(
    algebra: &Arc<LieAlgebraSpec>,
    cur: &mut Cursor,
) -> Result<(Vec<(Vec<Monomial>, Scalar)>, usize), CoreError> {
    let mut coeff = Scalar::one();
    let mut slots: Vec<Vec<(Monomial, Scalar)>> = Vec::new();
    loop {
        let mut letters: Vec<u8> = Vec::new();
        let mut saw_factor = false;
        loop {
            match cur.peek() {
                Some(Token::Number(_)) => {
                    let Some(Token::Number(n)) = cur.next() else {
                        unreachable!()
                    };
                    coeff = &coeff * &n;
                    saw_factor = true;
                }
                Some(Token::Ident(_)) => {
                    let Some(Token::Ident(name)) = cur.next() else {
                        unreachable!()
                    };
                    letters.push(generator_index(algebra, &name)? as u8);
                    saw_factor = true;
                }
                _ => break,
            }
            if !cur.eat(&Token::Star) {
                break;
            }
        }
        if !saw_factor {
            return Err(CoreError::Parse("expected a slot".into()));
        }
        let slot = if letters.is_empty() {
            vec![(Monomial::unit(algebra), Scalar::one())]
        } else {
            let mut acc = vec![(Monomial::unit(algebra), Scalar::one())];
            for &l in &letters {
                let gen = Monomial::generator(algebra, l as usize);
                let mut next = Vec::new();
                for (m, c) in &acc {
                    for (m2, c2) in crate::algebra::mul_monomials(algebra, m, &gen) {
                        next.push((m2, c * &c2));
                    }
                }
                acc = next;
            }
            acc
        };
        slots.push(slot);
        if !cur.eat(&Token::TensorSep) {
            break;
        }
    }
    let arity = slots.len();
    let mut tuples: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), coeff)];
    for slot in slots {
        let mut next = Vec::with_capacity(tuples.len() * slot.len());
        for (prefix, c) in &tuples {
            for (m, k) in &slot {
                let mut p2 = prefix.clone();
                p2.push(m.clone());
                next.push((p2, c * k));
            }
        }
        tuples = next;
    }
    Ok((tuples, arity))
}

/// Parses an element of the enveloping algebra (a single-slot tensor).
pub fn parse_nc(algebra: &Arc<LieAlgebraSpec>, input: &str) -> Result<NCElement, CoreError> {
    let t = parse_tensor(algebra, input)?;
    if t.arity() != 0 {
        return Err(CoreError::Parse("expected a single-slot expression".into()));
    }
    Ok(t.to_nc())
}

fn parse_atom(basis: &Arc<LieBasis>, cur: &mut Cursor) -> Result<usize, CoreError> {
    fn atom_name(basis: &Arc<LieBasis>, cur: &mut Cursor) -> Result<String, CoreError> {
        match cur.next() {
            Some(Token::Ident(name)) => Ok(name),
            Some(Token::LBracket) => {
                let left = atom_name(basis, cur)?;
                if !cur.eat(&Token::Comma) {
                    return Err(CoreError::Parse("expected `,` in bracket".into()));
                }
                let right = atom_name(basis, cur)?;
                if !cur.eat(&Token::RBracket) {
                    return Err(CoreError::Parse("expected `]`".into()));
                }
                Ok(format!("[{left},{right}]"))
            }
            other => Err(CoreError::Parse(format!(
                "expected a wedge factor, found {:?}",
                other
            ))),
        }
    }
    let name = atom_name(basis, cur)?;
    basis
        .index_of_name(&name)
        .ok_or_else(|| CoreError::Parse(format!("`{name}` is not a basis element")))
}

/// Parses a polyvector: terms of `^`-joined basis factors with rational
/// coefficients joined by `*`; a bare rational is a scalar term.
pub fn parse_polyvector(basis: &Arc<LieBasis>, input: &str) -> Result<PolyVector, CoreError> {
    let mut cur = Cursor {
        tokens: tokenize(input)?,
        pos: 0,
    };
    let mut out = PolyVector::zero(basis.clone());
    let mut sign = Scalar::one();
    if cur.eat(&Token::Minus) {
        sign = -sign;
    }
    loop {
        let mut coeff = sign.clone();
        let mut factors: Vec<u16> = Vec::new();
        loop {
            match cur.peek() {
                Some(Token::Number(_)) => {
                    let Some(Token::Number(n)) = cur.next() else {
                        unreachable!()
                    };
                    coeff = &coeff * &n;
                }
                Some(Token::Ident(_)) | Some(Token::LBracket) => {
                    factors.push(parse_atom(basis, &mut cur)? as u16);
                }
                _ => return Err(CoreError::Parse("expected a factor".into())),
            }
            if !(cur.eat(&Token::Caret) || cur.eat(&Token::Star)) {
                break;
            }
        }
        out.add_term(factors, coeff);
        match cur.next() {
            None => break,
            Some(Token::Plus) => sign = Scalar::one(),
            Some(Token::Minus) => sign = -Scalar::one(),
            Some(t) => return Err(CoreError::Parse(format!("unexpected token {:?}", t))),
        }
    }
    Ok(out)
}

fn format_monomial(algebra: &LieAlgebraSpec, m: &Monomial) -> String {
    let letters = m.letters();
    if letters.is_empty() {
        return "1".into();
    }
    letters
        .iter()
        .map(|&l| algebra.generator_name(l as usize))
        .collect::<Vec<_>>()
        .join("*")
}

/// Prints a tensor element in the grammar; terms in canonical order.
pub fn format_tensor(t: &TensorElement) -> String {
    if t.is_zero() {
        return "0".into();
    }
    let algebra = t.algebra();
    let mut out = String::new();
    for (i, (tuple, c)) in t.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if tuple.is_empty() {
            // scalar line: a bare rational
            out.push_str(&format!("{mag}"));
            continue;
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} * "));
        }
        let slots: Vec<String> = tuple.iter().map(|m| format_monomial(algebra, m)).collect();
        out.push_str(&slots.join(" (x) "));
    }
    out
}

/// Prints a polyvector in the grammar; scalars print as bare rationals.
pub fn format_polyvector(pv: &PolyVector) -> String {
    if pv.is_zero() {
        return "0".into();
    }
    let basis = pv.basis();
    let mut out = String::new();
    for (i, (tuple, c)) in pv.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if i == 0 {
            if neg {
                out.push_str("- ");
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        if tuple.is_empty() {
            out.push_str(&format!("{mag}"));
            continue;
        }
        if !mag.is_one() {
            out.push_str(&format!("{mag} * "));
        }
        let names: Vec<&str> = tuple.iter().map(|&i| basis.name(i as usize)).collect();
        out.push_str(&names.join(" ^ "));
    }
    out
}
