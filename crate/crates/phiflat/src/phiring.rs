//! Rings with a generating family of support ideals.
//!
//! A [`PhiRing`] is an affine ring together with a nonempty finite family
//! `phi0` of finitely generated ideals. An ideal is *admissible* when it
//! contains a power of the product `P` of the family members; equivalently,
//! when it contains a finite product of members. Admissibility is decided by
//! one radical-containment test per generator of `P`, and the witnessing
//! exponent is found by incremental power containment.

use crate::cakernel::{radical_member, AffineRing, CaError, Ideal, Poly};
use thiserror::Error;

/// Cap for the incremental exponent search. Radical containment alone
/// already certifies admissibility, so past the cap the exponent is
/// reported as unknown rather than wrong.
pub const EXPONENT_CAP: u32 = 64;

#[derive(Debug, Error)]
pub enum PhiError {
    #[error("support family is empty")]
    EmptyFamily,
    #[error("product of the support family is the zero ideal; purification would annihilate everything (pass degenerate_ok to allow)")]
    ZeroSupport,
    #[error("malformed morphism: {0}")]
    MalformedMorphism(String),
    #[error(transparent)]
    Kernel(#[from] CaError),
}

/// Outcome of an admissibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Admissibility {
    pub admissible: bool,
    /// Smallest exponent found with `P^N` contained in the ideal; `None`
    /// when admissible but the search passed [`EXPONENT_CAP`].
    pub exponent: Option<u32>,
}

impl Admissibility {
    fn no() -> Self {
        Admissibility {
            admissible: false,
            exponent: None,
        }
    }
}

/// An affine ring with a generating family of constructible supports.
#[derive(Clone, Debug)]
pub struct PhiRing {
    ring: AffineRing,
    phi0: Vec<Ideal>,
    product: Ideal,
    degenerate_ok: bool,
}

impl PhiRing {
    /// Validate and build, caching the product ideal `P`.
    ///
    /// Errors with [`PhiError::ZeroSupport`] when `P` vanishes in the ring
    /// and `degenerate_ok` is unset.
    pub fn new(
        ring: AffineRing,
        phi0: Vec<Ideal>,
        degenerate_ok: bool,
    ) -> Result<PhiRing, PhiError> {
        if phi0.is_empty() {
            return Err(PhiError::EmptyFamily);
        }
        for i in &phi0 {
            if i.ring() != ring.ambient() {
                return Err(PhiError::Kernel(CaError::RingMismatch(
                    "support ideal outside base ring".into(),
                )));
            }
        }
        let mut product = Ideal::unit(ring.ambient());
        for i in &phi0 {
            product = product.product(i)?;
        }
        // canonical generators modulo the defining ideal
        let reduced: Result<Vec<Poly>, CaError> =
            product.gens().iter().map(|g| ring.nf(g)).collect();
        let product = Ideal::new(ring.ambient(), reduced?)?;
        if product.is_zero() && !degenerate_ok {
            return Err(PhiError::ZeroSupport);
        }
        Ok(PhiRing {
            ring,
            phi0,
            product,
            degenerate_ok,
        })
    }

    pub fn parse(
        ring: &AffineRing,
        families: &[&[&str]],
        degenerate_ok: bool,
    ) -> Result<PhiRing, PhiError> {
        let phi0 = families
            .iter()
            .map(|gens| Ideal::parse(ring.ambient(), gens))
            .collect::<Result<Vec<_>, _>>()?;
        PhiRing::new(ring.clone(), phi0, degenerate_ok)
    }

    pub fn ring(&self) -> &AffineRing {
        &self.ring
    }

    pub fn phi0(&self) -> &[Ideal] {
        &self.phi0
    }

    /// The cached product of the family members, with generators reduced
    /// modulo the defining ideal.
    pub fn product(&self) -> &Ideal {
        &self.product
    }

    pub fn degenerate_ok(&self) -> bool {
        self.degenerate_ok
    }

    pub fn has_zero_support(&self) -> bool {
        self.product.is_zero()
    }

    /// Is the ideal generated by `gens` admissible, i.e. does it contain a
    /// power of the support product?
    pub fn is_admissible(&self, gens: &[Poly]) -> Result<Admissibility, PhiError> {
        for g in gens {
            if g.ring() != self.ring.ambient() {
                return Err(PhiError::Kernel(CaError::RingMismatch(
                    "candidate ideal outside base ring".into(),
                )));
            }
        }
        if self.product.is_zero() {
            // the zero ideal is contained in everything
            return Ok(Admissibility {
                admissible: true,
                exponent: Some(1),
            });
        }
        let lifted = self.ring.lift_ideal(gens)?;
        for p in self.product.gens() {
            if !radical_member(p, &lifted)? {
                return Ok(Admissibility::no());
            }
        }
        // incremental power containment for the reported exponent
        let mut power = Ideal::unit(self.ring.ambient());
        for n in 1..=EXPONENT_CAP {
            power = power.product(&self.product)?;
            power = Ideal::new(self.ring.ambient(), power.groebner().to_vec())?;
            if lifted.contains_ideal(&power)? {
                return Ok(Admissibility {
                    admissible: true,
                    exponent: Some(n),
                });
            }
        }
        Ok(Admissibility {
            admissible: true,
            exponent: None,
        })
    }

    pub fn is_admissible_ideal(&self, ideal: &Ideal) -> Result<Admissibility, PhiError> {
        self.is_admissible(ideal.gens())
    }
}

/// A candidate morphism of rings with supports, given by variable images.
#[derive(Clone, Debug)]
pub struct PhiMorphism {
    pub source: PhiRing,
    pub target: PhiRing,
    pub images: Vec<Poly>,
}

impl PhiMorphism {
    /// Images of the source variables must define a ring homomorphism of
    /// the underlying quotients: each defining generator of the source must
    /// map into the defining ideal of the target.
    pub fn well_defined(&self) -> Result<(), PhiError> {
        if self.images.len() != self.source.ring().ambient().num_vars() {
            return Err(PhiError::MalformedMorphism(
                "wrong number of variable images".into(),
            ));
        }
        for d in self.source.ring().defining().gens() {
            let image = d.substitute(self.target.ring().ambient(), &self.images)?;
            if !self.target.ring().is_zero_elem(&image)? {
                return Err(PhiError::MalformedMorphism(format!(
                    "defining relation {d} does not map to zero"
                )));
            }
        }
        Ok(())
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly, PhiError> {
        Ok(f.substitute(self.target.ring().ambient(), &self.images)?)
    }
}

/// Does the map respect supports: is the image of every family member
/// admissible in the target? Sufficient and necessary because the source
/// family is generated by `phi0` under products and supersets.
pub fn is_phi_morphism(f: &PhiMorphism) -> Result<bool, PhiError> {
    f.well_defined()?;
    for member in f.source.phi0() {
        let image: Result<Vec<Poly>, PhiError> = member.gens().iter().map(|g| f.apply(g)).collect();
        if !f.target.is_admissible(&image?)?.admissible {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Push the support family forward along a ring map: the target ring with
/// the family generated by the images of the source `phi0`.
pub fn induced_supports(
    source: &PhiRing,
    target: &AffineRing,
    images: &[Poly],
) -> Result<PhiRing, PhiError> {
    let phi0 = source
        .phi0()
        .iter()
        .map(|member| {
            let gens = member
                .gens()
                .iter()
                .map(|g| {
                    let im = g.substitute(target.ambient(), images)?;
                    target.nf(&im)
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Ideal::new(target.ambient(), gens)?)
        })
        .collect::<Result<Vec<_>, PhiError>>()?;
    PhiRing::new(target.clone(), phi0, source.degenerate_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cakernel::{MonomialOrder, PolyRing};

    fn plane() -> AffineRing {
        AffineRing::parse_ring(&["u", "v"], &[], MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn product_of_family_members() {
        let a = plane();
        let phi = PhiRing::parse(&a, &[&["u", "v"]], false).unwrap();
        assert_eq!(
            phi.product(),
            &Ideal::parse(a.ambient(), &["u", "v"]).unwrap()
        );
        let phi = PhiRing::parse(&a, &[&["u"], &["v"]], false).unwrap();
        assert_eq!(phi.product(), &Ideal::parse(a.ambient(), &["u*v"]).unwrap());
    }

    #[test]
    fn zero_support_is_rejected_without_flag() {
        let a = AffineRing::parse_ring(&["u"], &["u"], MonomialOrder::GrevLex).unwrap();
        let gens = vec![Ideal::parse(a.ambient(), &["u"]).unwrap()];
        assert!(matches!(
            PhiRing::new(a.clone(), gens.clone(), false),
            Err(PhiError::ZeroSupport)
        ));
        assert!(PhiRing::new(a, gens, true).is_ok());
        let b = plane();
        assert!(matches!(
            PhiRing::new(b, vec![], false),
            Err(PhiError::EmptyFamily)
        ));
    }

    #[test]
    fn admissibility_of_powers_and_supersets() {
        let a = plane();
        let phi = PhiRing::parse(&a, &[&["u", "v"]], false).unwrap();
        let m2 = Ideal::parse(a.ambient(), &["u^2", "u*v", "v^2"]).unwrap();
        let res = phi.is_admissible_ideal(&m2).unwrap();
        assert!(res.admissible);
        assert_eq!(res.exponent, Some(2));

        // (u) misses v: not admissible
        let res = phi.is_admissible(&[a.ambient().var(0)]).unwrap();
        assert!(!res.admissible);

        // (u + v^2, v) contains u, hence contains (u,v)
        let i = Ideal::parse(a.ambient(), &["u + v^2", "v"]).unwrap();
        let res = phi.is_admissible_ideal(&i).unwrap();
        assert!(res.admissible);
        assert!(res.exponent.unwrap() <= 2);
    }

    #[test]
    fn exponent_search_caps_honestly() {
        // radical containment proves admissibility, but the witnessing
        // power sits beyond the search cap
        let line = AffineRing::parse_ring(&["t"], &[], MonomialOrder::GrevLex).unwrap();
        let phi = PhiRing::parse(&line, &[&["t"]], false).unwrap();
        let deep = Ideal::parse(line.ambient(), &["t^70"]).unwrap();
        let res = phi.is_admissible_ideal(&deep).unwrap();
        assert!(res.admissible);
        assert_eq!(res.exponent, None);
        // just inside the cap the exponent is reported
        let shallow = Ideal::parse(line.ambient(), &["t^64"]).unwrap();
        let res = phi.is_admissible_ideal(&shallow).unwrap();
        assert_eq!(res.exponent, Some(64));
    }

    #[test]
    fn exponent_witness_is_sound() {
        let a = plane();
        let phi = PhiRing::parse(&a, &[&["u", "v"]], false).unwrap();
        let i = Ideal::parse(a.ambient(), &["u^3", "v^2"]).unwrap();
        let res = phi.is_admissible_ideal(&i).unwrap();
        assert!(res.admissible);
        let n = res.exponent.unwrap();
        let power = phi.product().power(n);
        let lifted = a.lift_ideal(i.gens()).unwrap();
        assert!(lifted.contains_ideal(&power).unwrap());
        // minimality of the reported exponent within the incremental search
        if n > 1 {
            let smaller = phi.product().power(n - 1);
            assert!(!lifted.contains_ideal(&smaller).unwrap());
        }
    }

    #[test]
    fn single_product_family_is_equivalent() {
        let a = plane();
        let two = PhiRing::parse(&a, &[&["u"], &["v"]], false).unwrap();
        let one = PhiRing::new(a.clone(), vec![two.product().clone()], false).unwrap();
        for gens in [&["u*v"][..], &["u"], &["u^2*v^2", "u^3"], &["1"]] {
            let i = Ideal::parse(a.ambient(), gens).unwrap();
            assert_eq!(
                two.is_admissible_ideal(&i).unwrap().admissible,
                one.is_admissible_ideal(&i).unwrap().admissible,
                "families disagree on {i:?}"
            );
        }
    }

    #[test]
    fn identity_is_a_phi_morphism() {
        let a = plane();
        let phi = PhiRing::parse(&a, &[&["u", "v"]], false).unwrap();
        let id = PhiMorphism {
            source: phi.clone(),
            target: phi.clone(),
            images: vec![a.ambient().var(0), a.ambient().var(1)],
        };
        assert!(is_phi_morphism(&id).unwrap());
    }

    #[test]
    fn squaring_map_respects_supports() {
        // QQ[t] with supports (t), t -> t^2: the image ideal (t^2) contains
        // (t)^2, so the map respects supports
        let line = AffineRing::parse_ring(&["t"], &[], MonomialOrder::GrevLex).unwrap();
        let phi = PhiRing::parse(&line, &[&["t"]], false).unwrap();
        let sq = PhiMorphism {
            source: phi.clone(),
            target: phi.clone(),
            images: vec![line.ambient().parse("t^2").unwrap()],
        };
        assert!(is_phi_morphism(&sq).unwrap());
    }

    #[test]
    fn map_that_breaks_supports_is_rejected() {
        // QQ[t] supports (t) -> QQ[s,t]/(s*t) supports (s), t -> t: the
        // image ideal (t) contains no power of s
        let line = AffineRing::parse_ring(&["t"], &[], MonomialOrder::GrevLex).unwrap();
        let source = PhiRing::parse(&line, &[&["t"]], false).unwrap();
        let cross = AffineRing::parse_ring(&["s", "t"], &["s*t"], MonomialOrder::GrevLex).unwrap();
        let target = PhiRing::parse(&cross, &[&["s"]], false).unwrap();
        let f = PhiMorphism {
            source,
            target,
            images: vec![cross.ambient().var(1)],
        };
        assert!(!is_phi_morphism(&f).unwrap());
    }

    #[test]
    fn induced_supports_on_a_chart() {
        // inclusion Q[u,v] -> Q[u,t], u -> u, v -> u*t: the induced family
        // member (u, u*t) equals (u)
        let a = plane();
        let phi = PhiRing::parse(&a, &[&["u", "v"]], false).unwrap();
        let chart =
            AffineRing::polynomial(PolyRing::new(&["u", "t"], MonomialOrder::GrevLex).unwrap());
        let images = vec![
            chart.ambient().var(0),
            chart.ambient().parse("u*t").unwrap(),
        ];
        let induced = induced_supports(&phi, &chart, &images).unwrap();
        assert_eq!(induced.phi0().len(), 1);
        assert_eq!(
            induced.phi0()[0],
            Ideal::parse(chart.ambient(), &["u"]).unwrap()
        );
    }
}
