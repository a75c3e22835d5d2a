//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! A [`Poly`] owns a handle to its [`PolyRing`] and keeps its terms sorted in
//! strictly descending order of the ring's active monomial order, with no
//! zero coefficients stored. Two polynomials compare equal exactly when they
//! have the same ring and identical canonical term lists.

use super::order::MonomialOrder;
use super::CaError;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

/// Exact rational scalar used for every coefficient in the crate.
pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Debug)]
struct RingRepr {
    vars: Vec<String>,
    order: MonomialOrder,
}

/// A polynomial ring over the rationals: an ordered list of distinct
/// variable names plus a monomial order.
///
/// Handles are cheap to clone; two handles are equal when they present the
/// same variables in the same order under the same monomial order.
#[derive(Clone)]
pub struct PolyRing(Arc<RingRepr>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.vars == other.0.vars && self.0.order == other.0.order)
    }
}
impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QQ[{}; {}]", self.0.vars.join(","), self.0.order.name())
    }
}

impl PolyRing {
    pub fn new(vars: &[&str], order: MonomialOrder) -> Result<Self, CaError> {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        Self::from_names(vars, order)
    }

    pub fn from_names(vars: Vec<String>, order: MonomialOrder) -> Result<Self, CaError> {
        if vars.iter().any(|v| v.is_empty()) {
            return Err(CaError::BadVariable("empty variable name".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(CaError::BadVariable(format!("duplicate variable `{v}`")));
            }
            if !v.chars().next().unwrap().is_ascii_alphabetic()
                || !v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
            {
                return Err(CaError::BadVariable(format!("invalid variable name `{v}`")));
            }
        }
        if let MonomialOrder::Block { split } = order {
            if split > vars.len() {
                return Err(CaError::BadVariable(format!(
                    "block split {split} exceeds variable count {}",
                    vars.len()
                )));
            }
        }
        Ok(PolyRing(Arc::new(RingRepr { vars, order })))
    }

    pub fn num_vars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn order(&self) -> MonomialOrder {
        self.0.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    /// Same variables under a different monomial order.
    pub fn with_order(&self, order: MonomialOrder) -> Result<PolyRing, CaError> {
        PolyRing::from_names(self.0.vars.clone(), order)
    }

    pub fn zero(&self) -> Poly {
        Poly {
            ring: self.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(&self) -> Poly {
        self.constant(Rat::one())
    }

    pub fn constant(&self, c: Rat) -> Poly {
        if c.is_zero() {
            return self.zero();
        }
        Poly {
            ring: self.clone(),
            terms: vec![Term {
                exp: vec![0; self.num_vars()],
                coef: c,
            }],
        }
    }

    pub fn var(&self, i: usize) -> Poly {
        assert!(i < self.num_vars(), "variable index out of range");
        let mut exp = vec![0u32; self.num_vars()];
        exp[i] = 1;
        Poly {
            ring: self.clone(),
            terms: vec![Term {
                exp,
                coef: Rat::one(),
            }],
        }
    }

    pub fn monomial(&self, exp: Vec<u32>, coef: Rat) -> Poly {
        assert_eq!(exp.len(), self.num_vars());
        if coef.is_zero() {
            return self.zero();
        }
        Poly {
            ring: self.clone(),
            terms: vec![Term { exp, coef }],
        }
    }

    /// Parse a polynomial in infix notation: rational constants, declared
    /// variable names, `+ - * ^` and parentheses.
    pub fn parse(&self, text: &str) -> Result<Poly, CaError> {
        parse::parse_poly(self, text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub exp: Vec<u32>,
    pub coef: Rat,
}

/// A polynomial in canonical form: terms strictly descending under the
/// owning ring's monomial order, all coefficients nonzero.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    ring: PolyRing,
    terms: Vec<Term>,
}

impl Poly {
    /// Build from an arbitrary term list, merging duplicates and dropping
    /// zeros.
    pub fn from_terms(ring: &PolyRing, terms: Vec<Term>) -> Poly {
        let mut terms = terms;
        let order = ring.order();
        terms.sort_by(|a, b| order.cmp_exp(&b.exp, &a.exp));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            debug_assert_eq!(t.exp.len(), ring.num_vars());
            match out.last_mut() {
                Some(last) if last.exp == t.exp => last.coef += t.coef,
                _ => out.push(t),
            }
            if let Some(last) = out.last() {
                if last.coef.is_zero() {
                    out.pop();
                }
            }
        }
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.exp.iter().all(|&e| e == 0))
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.terms.len() == 1 && self.terms[0].coef.is_one()
    }

    /// Leading term under the ring's active order.
    pub fn leading(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms
            .iter()
            .map(|t| t.exp.iter().map(|&e| e as u64).sum())
            .max()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp.clone(),
                    coef: -t.coef.clone(),
                })
                .collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring, "ring mismatch in add");
        let order = self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let a = &self.terms[i];
            let b = &other.terms[j];
            match order.cmp_exp(&a.exp, &b.exp) {
                Ordering::Greater => {
                    out.push(a.clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b.clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &a.coef + &b.coef;
                    if !c.is_zero() {
                        out.push(Term {
                            exp: a.exp.clone(),
                            coef: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Multiply by a single term (monomial times scalar).
    pub fn mul_term(&self, exp: &[u32], coef: &Rat) -> Poly {
        if coef.is_zero() {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exp: t.exp.iter().zip(exp).map(|(a, b)| a + b).collect(),
                    coef: &t.coef * coef,
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        let zero = vec![0u32; self.ring.num_vars()];
        self.mul_term(&zero, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.ring, other.ring, "ring mismatch in mul");
        let mut acc = self.ring.zero();
        for t in &other.terms {
            acc = acc.add(&self.mul_term(&t.exp, &t.coef));
        }
        acc
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scale so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => self.clone(),
            Some(lt) => {
                let inv = Rat::one() / lt.coef.clone();
                self.scale(&inv)
            }
        }
    }

    /// Substitute each variable by the given image polynomial (all images in
    /// `target`). Used for ring maps.
    pub fn substitute(&self, target: &PolyRing, images: &[Poly]) -> Result<Poly, CaError> {
        if images.len() != self.ring.num_vars() {
            return Err(CaError::RingMismatch(
                "wrong number of variable images".into(),
            ));
        }
        for im in images {
            if im.ring() != target {
                return Err(CaError::RingMismatch(
                    "variable image outside target ring".into(),
                ));
            }
        }
        let mut acc = target.zero();
        for t in &self.terms {
            let mut m = target.constant(t.coef.clone());
            for (v, &e) in t.exp.iter().enumerate() {
                if e > 0 {
                    m = m.mul(&images[v].pow(e));
                }
            }
            acc = acc.add(&m);
        }
        Ok(acc)
    }

    /// Reinterpret in a ring that contains this ring's variables (by name);
    /// exponents of absent variables must be zero.
    pub fn embed(&self, target: &PolyRing) -> Result<Poly, CaError> {
        let map: Option<Vec<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v))
            .collect();
        let map = map.ok_or_else(|| {
            CaError::RingMismatch("embed: source variable absent from target".into())
        })?;
        let n = target.num_vars();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut exp = vec![0u32; n];
                for (i, &e) in t.exp.iter().enumerate() {
                    exp[map[i]] = e;
                }
                Term {
                    exp,
                    coef: t.coef.clone(),
                }
            })
            .collect();
        Ok(Poly::from_terms(target, terms))
    }

    /// Same terms under a different monomial order on the same variables.
    pub fn reorder(&self, target: &PolyRing) -> Result<Poly, CaError> {
        if target.vars() != self.ring.vars() {
            return Err(CaError::RingMismatch("reorder: different variables".into()));
        }
        Ok(Poly::from_terms(target, self.terms.clone()))
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], exp: &[u32]) -> fmt::Result {
    let mut first = true;
    for (v, &e) in vars.iter().zip(exp) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{v}")?;
        } else {
            write!(f, "{v}^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (i, t) in self.terms.iter().enumerate() {
            let coef = &t.coef;
            let is_const = t.exp.iter().all(|&e| e == 0);
            if i == 0 {
                if coef.is_negative() {
                    write!(f, "-")?;
                }
            } else if coef.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = coef.abs();
            if is_const {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                write_monomial(f, vars, &t.exp)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

mod parse {
    use super::*;

    struct Parser<'a> {
        ring: &'a PolyRing,
        bytes: &'a [u8],
        pos: usize,
    }

    pub fn parse_poly(ring: &PolyRing, text: &str) -> Result<Poly, CaError> {
        let mut p = Parser {
            ring,
            bytes: text.as_bytes(),
            pos: 0,
        };
        let poly = p.expr()?;
        p.skip_ws();
        if p.pos != p.bytes.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(poly)
    }

    impl<'a> Parser<'a> {
        fn err(&self, msg: &str) -> CaError {
            CaError::Parse {
                offset: self.pos,
                message: msg.into(),
            }
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

        fn expr(&mut self) -> Result<Poly, CaError> {
            let mut negate = false;
            if let Some(c) = self.peek() {
                if c == b'-' {
                    self.pos += 1;
                    negate = true;
                } else if c == b'+' {
                    self.pos += 1;
                }
            }
            let mut acc = self.term()?;
            if negate {
                acc = acc.neg();
            }
            while let Some(c) = self.peek() {
                match c {
                    b'+' => {
                        self.pos += 1;
                        let t = self.term()?;
                        acc = acc.add(&t);
                    }
                    b'-' => {
                        self.pos += 1;
                        let t = self.term()?;
                        acc = acc.sub(&t);
                    }
                    _ => break,
                }
            }
            Ok(acc)
        }

        fn term(&mut self) -> Result<Poly, CaError> {
            let mut acc = self.factor()?;
            while let Some(b'*') = self.peek() {
                self.pos += 1;
                let f = self.factor()?;
                acc = acc.mul(&f);
            }
            Ok(acc)
        }

        fn factor(&mut self) -> Result<Poly, CaError> {
            let base = self.base()?;
            if let Some(b'^') = self.peek() {
                self.pos += 1;
                let e = self.uint()?;
                if e > 10_000 {
                    return Err(self.err("exponent too large"));
                }
                return Ok(base.pow(e));
            }
            Ok(base)
        }

        fn base(&mut self) -> Result<Poly, CaError> {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let inner = self.expr()?;
                    match self.peek() {
                        Some(b')') => {
                            self.pos += 1;
                            Ok(inner)
                        }
                        _ => Err(self.err("expected `)`")),
                    }
                }
                Some(c) if c.is_ascii_digit() => {
                    let num = self.uint()?;
                    let mut rat = Rat::from_integer(BigInt::from(num));
                    if let Some(b'/') = self.peek() {
                        self.pos += 1;
                        let den = self.uint()?;
                        if den == 0 {
                            return Err(self.err("zero denominator"));
                        }
                        rat /= Rat::from_integer(BigInt::from(den));
                    }
                    Ok(self.ring.constant(rat))
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.pos < self.bytes.len()
                        && (self.bytes[self.pos].is_ascii_alphanumeric()
                            || self.bytes[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                    match self.ring.var_index(name) {
                        Some(i) => Ok(self.ring.var(i)),
                        None => {
                            self.pos = start;
                            Err(self.err(&format!("unknown variable `{name}`")))
                        }
                    }
                }
                _ => Err(self.err("expected polynomial factor")),
            }
        }

        fn uint(&mut self) -> Result<u32, CaError> {
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected integer"));
            }
            std::str::from_utf8(&self.bytes[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("integer out of range"))
        }
    }
}
