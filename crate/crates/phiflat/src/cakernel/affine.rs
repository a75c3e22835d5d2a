//! Finitely presented affine rings: a polynomial ring together with an
//! optional defining ideal. Ideal and module computations in the quotient
//! are performed by lifting to the ambient ring and adjoining the defining
//! ideal.

use super::ideal::Ideal;
use super::poly::{Poly, PolyRing};
use super::{CaError, MonomialOrder};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct AffineRing {
    ambient: PolyRing,
    defining: Ideal,
    /// Known to be an integral domain. True for polynomial rings and for
    /// rings produced by blow-up charts of domains; user-supplied quotients
    /// are conservatively marked false.
    integral: bool,
    /// Number of blow-up stages below this ring; drives deterministic chart
    /// variable naming.
    blowup_stage: usize,
}

impl fmt::Debug for AffineRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.defining.gens().is_empty() {
            write!(f, "{:?}", self.ambient)
        } else {
            write!(f, "{:?}/{:?}", self.ambient, self.defining)
        }
    }
}

impl AffineRing {
    pub fn polynomial(ambient: PolyRing) -> AffineRing {
        let defining = Ideal::zero(&ambient);
        AffineRing {
            ambient,
            defining,
            integral: true,
            blowup_stage: 0,
        }
    }

    pub fn quotient(ambient: PolyRing, defining: Ideal) -> Result<AffineRing, CaError> {
        Self::quotient_with(ambient, defining, false, 0)
    }

    pub(crate) fn quotient_with(
        ambient: PolyRing,
        defining: Ideal,
        integral: bool,
        blowup_stage: usize,
    ) -> Result<AffineRing, CaError> {
        if defining.ring() != &ambient {
            return Err(CaError::RingMismatch(
                "defining ideal outside ambient ring".into(),
            ));
        }
        let defining = defining.canonicalized();
        let integral = integral && !defining.is_unit();
        Ok(AffineRing {
            ambient,
            defining,
            integral,
            blowup_stage,
        })
    }

    pub fn parse_ring(
        vars: &[&str],
        defining: &[&str],
        order: MonomialOrder,
    ) -> Result<AffineRing, CaError> {
        let ambient = PolyRing::new(vars, order)?;
        if defining.is_empty() {
            return Ok(AffineRing::polynomial(ambient));
        }
        let ideal = Ideal::parse(&ambient, defining)?;
        AffineRing::quotient(ambient, ideal)
    }

    pub fn ambient(&self) -> &PolyRing {
        &self.ambient
    }

    pub fn defining(&self) -> &Ideal {
        &self.defining
    }

    pub fn is_polynomial(&self) -> bool {
        self.defining.gens().is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn blowup_stage(&self) -> usize {
        self.blowup_stage
    }

    /// The zero ring: defined by the unit ideal.
    pub fn is_zero_ring(&self) -> bool {
        self.defining.is_unit()
    }

    /// Canonical representative of `f` in the quotient.
    pub fn nf(&self, f: &Poly) -> Result<Poly, CaError> {
        self.defining.reduce(f)
    }

    pub fn is_zero_elem(&self, f: &Poly) -> Result<bool, CaError> {
        Ok(self.nf(f)?.is_zero())
    }

    /// Membership of `f` in the ideal of the quotient generated by `gens`.
    pub fn ideal_contains(&self, gens: &[Poly], f: &Poly) -> Result<bool, CaError> {
        self.lift_ideal(gens)?.contains(f)
    }

    /// The ambient ideal presenting `gens` as an ideal of the quotient:
    /// generators plus the defining ideal.
    pub fn lift_ideal(&self, gens: &[Poly]) -> Result<Ideal, CaError> {
        let mut all = gens.to_vec();
        all.extend(self.defining.gens().iter().cloned());
        Ideal::new(&self.ambient, all)
    }

    /// Equality of two ideals of the quotient given by generator lists.
    pub fn ideals_equal(&self, a: &[Poly], b: &[Poly]) -> Result<bool, CaError> {
        Ok(self.lift_ideal(a)? == self.lift_ideal(b)?)
    }

    /// Is the ideal of the quotient generated by `gens` the unit ideal?
    pub fn ideal_is_unit(&self, gens: &[Poly]) -> Result<bool, CaError> {
        Ok(self.lift_ideal(gens)?.is_unit())
    }

    /// Is the ideal of the quotient generated by `gens` zero?
    pub fn ideal_is_zero(&self, gens: &[Poly]) -> Result<bool, CaError> {
        for g in gens {
            if !self.is_zero_elem(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_normal_forms() {
        // QQ[u,v]/(v - u^2): v reduces to u^2 under grevlex? leading term of
        // v - u^2 is u^2, so u^2 reduces to v instead
        let r = AffineRing::parse_ring(&["u", "v"], &["v - u^2"], MonomialOrder::GrevLex).unwrap();
        let f = r.ambient().parse("u^2").unwrap();
        assert_eq!(r.nf(&f).unwrap().to_string(), "v");
        assert!(r
            .is_zero_elem(&r.ambient().parse("u^4 - v^2").unwrap())
            .unwrap());
    }

    #[test]
    fn zero_ring_detection() {
        let r = AffineRing::parse_ring(&["u"], &["1"], MonomialOrder::GrevLex).unwrap();
        assert!(r.is_zero_ring());
        assert!(!r.is_integral());
    }

    #[test]
    fn ideal_operations_in_quotient() {
        // QQ[s,t]/(s*t): the ideal (t) contains s*t = 0 but not s
        let r = AffineRing::parse_ring(&["s", "t"], &["s*t"], MonomialOrder::GrevLex).unwrap();
        let t = r.ambient().var(1);
        let s = r.ambient().var(0);
        assert!(r
            .ideal_contains(std::slice::from_ref(&t), &s.mul(&t))
            .unwrap());
        assert!(!r.ideal_contains(&[t], &s).unwrap());
    }
}
