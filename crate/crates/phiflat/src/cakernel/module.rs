//! Finitely generated submodules of free modules.

use super::gb::{ModEngine, Vect};
use super::poly::{Poly, PolyRing};
use super::CaError;
use std::fmt;
use std::sync::{Arc, OnceLock};

/// A submodule of a free module `A^rank`, generated by the given columns.
/// As with [`super::Ideal`], the reduced Gröbner basis (position-over-term
/// order) is memoized, and equality is extensional.
#[derive(Clone)]
pub struct FreeSubmodule {
    ring: PolyRing,
    rank: usize,
    cols: Vec<Vect>,
    gb: OnceLock<Arc<Vec<Vect>>>,
}

impl PartialEq for FreeSubmodule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.rank == other.rank && self.groebner() == other.groebner()
    }
}
impl Eq for FreeSubmodule {}

impl fmt::Debug for FreeSubmodule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "submodule of A^{} with columns [", self.rank)?;
        for (i, c) in self.cols.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, p) in c.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

impl FreeSubmodule {
    pub fn new(ring: &PolyRing, rank: usize, cols: Vec<Vec<Poly>>) -> Result<Self, CaError> {
        for c in &cols {
            if c.len() != rank {
                return Err(CaError::RankMismatch {
                    expected: rank,
                    found: c.len(),
                });
            }
            for p in c {
                if p.ring() != ring {
                    return Err(CaError::RingMismatch("column entry outside ring".into()));
                }
            }
        }
        let eng = ModEngine::new(ring, rank);
        let cols = cols.into_iter().filter(|c| !eng.is_zero(c)).collect();
        Ok(FreeSubmodule {
            ring: ring.clone(),
            rank,
            cols,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ring: &PolyRing, rank: usize) -> Self {
        FreeSubmodule::new(ring, rank, Vec::new()).unwrap()
    }

    /// The whole free module, generated by the unit vectors.
    pub fn full(ring: &PolyRing, rank: usize) -> Self {
        let eng = ModEngine::new(ring, rank);
        let cols = (0..rank).map(|c| eng.unit_vect(c)).collect();
        FreeSubmodule::new(ring, rank, cols).unwrap()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> &[Vect] {
        &self.cols
    }

    pub fn groebner(&self) -> &[Vect] {
        self.gb
            .get_or_init(|| {
                let eng = ModEngine::new(&self.ring, self.rank);
                Arc::new(eng.groebner(&self.cols))
            })
            .as_ref()
    }

    /// Reduced basis under a caller-chosen monomial order, returned over a
    /// ring carrying that order. Position-over-term stays fixed; only the
    /// order inside each component changes.
    pub fn groebner_with(
        &self,
        order: super::MonomialOrder,
    ) -> Result<(PolyRing, Vec<Vec<Poly>>), CaError> {
        if order == self.ring.order() {
            return Ok((self.ring.clone(), self.groebner().to_vec()));
        }
        let reordered = self.ring.with_order(order)?;
        let cols: Vec<Vect> = self
            .cols
            .iter()
            .map(|c| c.iter().map(|p| p.reorder(&reordered)).collect())
            .collect::<Result<_, _>>()?;
        let eng = ModEngine::new(&reordered, self.rank);
        Ok((reordered, eng.groebner(&cols)))
    }

    pub fn reduce(&self, v: &[Poly]) -> Result<Vec<Poly>, CaError> {
        if v.len() != self.rank {
            return Err(CaError::RankMismatch {
                expected: self.rank,
                found: v.len(),
            });
        }
        let eng = ModEngine::new(&self.ring, self.rank);
        Ok(eng.normal_form(&v.to_vec(), self.groebner()))
    }

    pub fn contains(&self, v: &[Poly]) -> Result<bool, CaError> {
        let eng = ModEngine::new(&self.ring, self.rank);
        Ok(eng.is_zero(&self.reduce(v)?))
    }

    pub fn contains_submodule(&self, other: &FreeSubmodule) -> Result<bool, CaError> {
        if other.rank != self.rank || other.ring != self.ring {
            return Err(CaError::RingMismatch("containment: module mismatch".into()));
        }
        for c in &other.cols {
            if !self.contains(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_zero_module(&self) -> bool {
        self.groebner().is_empty()
    }

    /// Does the submodule contain every unit vector, i.e. equal `A^rank`?
    pub fn is_full(&self) -> bool {
        let eng = ModEngine::new(&self.ring, self.rank);
        (0..self.rank).all(|c| eng.is_zero(&eng.normal_form(&eng.unit_vect(c), self.groebner())))
    }

    pub fn plus(&self, other: &FreeSubmodule) -> Result<FreeSubmodule, CaError> {
        if other.rank != self.rank || other.ring != self.ring {
            return Err(CaError::RingMismatch("sum: module mismatch".into()));
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        FreeSubmodule::new(&self.ring, self.rank, cols)
    }

    /// Replace the generator columns by the reduced Gröbner basis.
    pub fn canonicalized(&self) -> FreeSubmodule {
        FreeSubmodule::new(&self.ring, self.rank, self.groebner().to_vec()).unwrap()
    }
}
