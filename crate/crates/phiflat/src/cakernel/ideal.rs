//! Finitely generated ideals with a cached reduced Gröbner basis.

use super::gb::ModEngine;
use super::poly::{Poly, PolyRing};
use super::{CaError, MonomialOrder};
use std::fmt;
use std::sync::{Arc, OnceLock};

/// An ideal of a polynomial ring, kept as its original generator list. The
/// reduced Gröbner basis under the ring's active order is computed on first
/// use and memoized; the memo is write-once and never observable except
/// through timing.
#[derive(Clone)]
pub struct Ideal {
    ring: PolyRing,
    gens: Vec<Poly>,
    gb: OnceLock<Arc<Vec<Poly>>>,
}

impl PartialEq for Ideal {
    /// Equality of ideals as sets, via reduced Gröbner bases.
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.groebner() == other.groebner()
    }
}
impl Eq for Ideal {}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ")")
    }
}

impl Ideal {
    /// Zero generators are dropped; the empty list is the zero ideal.
    pub fn new(ring: &PolyRing, gens: Vec<Poly>) -> Result<Ideal, CaError> {
        for g in &gens {
            if g.ring() != ring {
                return Err(CaError::RingMismatch("ideal generator outside ring".into()));
            }
        }
        let gens: Vec<Poly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Ideal {
            ring: ring.clone(),
            gens,
            gb: OnceLock::new(),
        })
    }

    pub fn parse(ring: &PolyRing, gens: &[&str]) -> Result<Ideal, CaError> {
        let gens = gens
            .iter()
            .map(|s| ring.parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ideal::new(ring, gens)
    }

    pub fn zero(ring: &PolyRing) -> Ideal {
        Ideal::new(ring, Vec::new()).unwrap()
    }

    pub fn unit(ring: &PolyRing) -> Ideal {
        Ideal::new(ring, vec![ring.one()]).unwrap()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    /// Reduced Gröbner basis under the ring's active monomial order.
    pub fn groebner(&self) -> &[Poly] {
        self.gb
            .get_or_init(|| {
                let eng = ModEngine::new(&self.ring, 1);
                let vs: Vec<Vec<Poly>> = self.gens.iter().map(|g| vec![g.clone()]).collect();
                Arc::new(
                    eng.groebner(&vs)
                        .into_iter()
                        .map(|mut v| v.remove(0))
                        .collect(),
                )
            })
            .as_ref()
    }

    /// Reduced Gröbner basis under a caller-chosen order. The basis is
    /// returned over a ring carrying that order.
    pub fn groebner_with(&self, order: MonomialOrder) -> Result<(PolyRing, Vec<Poly>), CaError> {
        if order == self.ring.order() {
            return Ok((self.ring.clone(), self.groebner().to_vec()));
        }
        let reordered = self.ring.with_order(order)?;
        let eng = ModEngine::new(&reordered, 1);
        let vs: Vec<Vec<Poly>> = self
            .gens
            .iter()
            .map(|g| Ok(vec![g.reorder(&reordered)?]))
            .collect::<Result<Vec<_>, CaError>>()?;
        let gb = eng
            .groebner(&vs)
            .into_iter()
            .map(|mut v| v.remove(0))
            .collect();
        Ok((reordered, gb))
    }

    /// Unique remainder of `f` modulo this ideal.
    pub fn reduce(&self, f: &Poly) -> Result<Poly, CaError> {
        if f.ring() != &self.ring {
            return Err(CaError::RingMismatch("normal form: ring mismatch".into()));
        }
        Ok(normal_form_unchecked(f, self.groebner()))
    }

    pub fn contains(&self, f: &Poly) -> Result<bool, CaError> {
        Ok(self.reduce(f)?.is_zero())
    }

    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool, CaError> {
        if other.ring != self.ring {
            return Err(CaError::RingMismatch(
                "ideal containment: ring mismatch".into(),
            ));
        }
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty() || self.groebner().is_empty()
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.groebner();
        gb.len() == 1 && gb[0].is_one()
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal, CaError> {
        if other.ring != self.ring {
            return Err(CaError::RingMismatch("ideal sum: ring mismatch".into()));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal, CaError> {
        if other.ring != self.ring {
            return Err(CaError::RingMismatch("ideal product: ring mismatch".into()));
        }
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// `self^n`, interreducing generators at each step to keep the list
    /// small. `n = 0` gives the unit ideal.
    pub fn power(&self, n: u32) -> Ideal {
        let mut acc = Ideal::unit(&self.ring);
        for _ in 0..n {
            acc = acc.product(self).unwrap();
            acc = Ideal::new(&self.ring, acc.groebner().to_vec()).unwrap();
        }
        acc
    }

    /// Replace the generator list by the reduced Gröbner basis.
    pub fn canonicalized(&self) -> Ideal {
        Ideal::new(&self.ring, self.groebner().to_vec()).unwrap()
    }
}

/// Unique remainder of `f` modulo a Gröbner basis.
pub fn normal_form(f: &Poly, basis: &[Poly]) -> Result<Poly, CaError> {
    for b in basis {
        if b.ring() != f.ring() {
            return Err(CaError::RingMismatch("normal form: ring mismatch".into()));
        }
    }
    Ok(normal_form_unchecked(f, basis))
}

pub(crate) fn normal_form_unchecked(f: &Poly, basis: &[Poly]) -> Poly {
    let eng = ModEngine::new(f.ring(), 1);
    let vs: Vec<Vec<Poly>> = basis.iter().map(|g| vec![g.clone()]).collect();
    let mut rem = eng.normal_form(&vec![f.clone()], &vs);
    rem.remove(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> PolyRing {
        PolyRing::new(&["u", "v"], MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn membership_via_normal_form() {
        let r = ring();
        let i = Ideal::parse(&r, &["u", "v"]).unwrap();
        assert!(i.contains(&r.parse("u^2 + v").unwrap()).unwrap());
        assert_eq!(
            i.reduce(&r.parse("u + 1").unwrap()).unwrap().to_string(),
            "1"
        );
    }

    #[test]
    fn substitution_membership_in_principal_ideal() {
        // u*v - v^2 lies in (u - v): check by the substitute-u-for-v route
        // and by normal form
        let r = ring();
        let f = r.parse("u*v - v^2").unwrap();
        let subst = f.substitute(&r, &[r.var(1), r.var(1)]).unwrap();
        assert!(subst.is_zero());
        let i = Ideal::parse(&r, &["u - v"]).unwrap();
        assert!(i.contains(&f).unwrap());
    }

    #[test]
    fn equality_is_extensional() {
        let r = ring();
        let a = Ideal::parse(&r, &["u", "v"]).unwrap();
        let b = Ideal::parse(&r, &["u + v", "v"]).unwrap();
        assert_eq!(a, b);
        let c = Ideal::parse(&r, &["u"]).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn powers_and_products() {
        let r = ring();
        let m = Ideal::parse(&r, &["u", "v"]).unwrap();
        let m2 = m.power(2);
        assert!(m2.contains(&r.parse("u*v").unwrap()).unwrap());
        assert!(!m2.contains(&r.parse("u").unwrap()).unwrap());
        assert_eq!(m.power(0), Ideal::unit(&r));
    }

    #[test]
    fn groebner_with_lex_order() {
        let r = ring();
        let i = Ideal::parse(&r, &["u^2 - v", "u^3"]).unwrap();
        let (_, gb) = i.groebner_with(MonomialOrder::Lex).unwrap();
        let strs: Vec<String> = gb.iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, vec!["u^2 - v", "u*v", "v^2"]);
    }

    #[test]
    fn cyclic_three_basis() {
        // classical: eliminating a = -(b+c) leaves b^2 + b*c + c^2 and
        // c^3 - 1
        let r = PolyRing::new(&["a", "b", "c"], MonomialOrder::GrevLex).unwrap();
        let i = Ideal::parse(&r, &["a + b + c", "a*b + b*c + c*a", "a*b*c - 1"]).unwrap();
        let strs: Vec<String> = i.groebner().iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, vec!["c^3 - 1", "b^2 + b*c + c^2", "a + b + c"]);
    }

    #[test]
    fn lex_basis_of_circle_and_diagonal() {
        let r = PolyRing::new(&["x", "y"], MonomialOrder::Lex).unwrap();
        let i = Ideal::parse(&r, &["x^2 + y^2 - 1", "x - y"]).unwrap();
        let strs: Vec<String> = i.groebner().iter().map(|p| p.to_string()).collect();
        assert_eq!(strs, vec!["x - y", "y^2 - 1/2"]);
    }

    #[test]
    fn block_order_eliminates_the_leading_variable() {
        // the twisted cubic: eliminating the parameter from (x - s^2, y - s^3)
        // leaves the plane curve x^3 - y^2
        let r = PolyRing::new(&["s", "x", "y"], MonomialOrder::Block { split: 1 }).unwrap();
        let i = Ideal::parse(&r, &["x - s^2", "y - s^3"]).unwrap();
        let eliminated: Vec<&Poly> = i
            .groebner()
            .iter()
            .filter(|p| p.terms().iter().all(|t| t.exp[0] == 0))
            .collect();
        assert_eq!(eliminated.len(), 1);
        assert_eq!(eliminated[0].to_string(), "x^3 - y^2");
    }
}
