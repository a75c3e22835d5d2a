//! Valuative points over polynomial bases: the desk model of the limit
//! space of admissible blow-ups.
//!
//! A point is a lex-ordered monomial valuation on a polynomial domain. The
//! basic opens are the loci `|I| <= |g|` for `(I, g)` admissible, which in
//! additive notation reads `v(I) >= v(g)`. Pulling a point through an
//! admissible blow-up selects the chart on which the center's pulled-back
//! ideal is freely generated by the minimal-value generator, and the new
//! chart variables `t_j = f_j / f_i` carry the value differences, all
//! nonnegative by minimality.

use crate::blowup::chart_var_names;
use crate::cakernel::{CaError, Poly, PolyRing};
use crate::philocal::{LocalError, ValuationData, Value};
use crate::phiring::PhiRing;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ValError {
    #[error("ideal has infinite value at the point")]
    InfiniteValue,
    #[error("zero generator in a blow-up center")]
    ZeroGenerator,
    #[error("valuative points require a polynomial base ring")]
    QuotientBase,
    #[error(transparent)]
    Valuation(#[from] LocalError),
    #[error(transparent)]
    Kernel(#[from] CaError),
}

/// A monomial valuation on a polynomial base ring, tracked through blow-up
/// stages.
#[derive(Clone, Debug)]
pub struct ValuativePoint {
    ring: PolyRing,
    valuation: ValuationData,
    stage: usize,
}

impl ValuativePoint {
    pub fn new(ring: PolyRing, valuation: ValuationData) -> Result<ValuativePoint, ValError> {
        if valuation.num_vars() != ring.num_vars() {
            return Err(ValError::Valuation(LocalError::BadValuation(
                "weight matrix width differs from variable count".into(),
            )));
        }
        if !valuation.nonnegative_on_variables() {
            return Err(ValError::Valuation(LocalError::BadValuation(
                "point weights must be lex-nonnegative on the variables".into(),
            )));
        }
        Ok(ValuativePoint {
            ring,
            valuation,
            stage: 0,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn valuation(&self) -> &ValuationData {
        &self.valuation
    }

    pub fn stage(&self) -> usize {
        self.stage
    }

    pub fn value(&self, f: &Poly) -> Value {
        self.valuation.value(f)
    }

    pub fn value_of_ideal(&self, gens: &[Poly]) -> Value {
        self.valuation.value_of_ideal(gens)
    }
}

/// The locus `|I| <= |g|` for an admissible pair `(I, g)`.
#[derive(Clone, Debug)]
pub struct BasicOpen {
    ideal_gens: Vec<Poly>,
    denominator: Poly,
}

impl BasicOpen {
    /// Validates that the pair `(I, g)` generates an admissible ideal of
    /// the ambient support family.
    pub fn new(
        phi: &PhiRing,
        ideal_gens: Vec<Poly>,
        denominator: Poly,
    ) -> Result<BasicOpen, ValError> {
        let mut pair = ideal_gens.clone();
        pair.push(denominator.clone());
        let adm = phi
            .is_admissible(&pair)
            .map_err(|e| ValError::Kernel(CaError::RingMismatch(e.to_string())))?;
        if !adm.admissible {
            return Err(ValError::Kernel(CaError::RingMismatch(
                "basic open requires an admissible pair (I, g)".into(),
            )));
        }
        Ok(BasicOpen {
            ideal_gens,
            denominator,
        })
    }

    pub fn ideal_gens(&self) -> &[Poly] {
        &self.ideal_gens
    }

    pub fn denominator(&self) -> &Poly {
        &self.denominator
    }
}

/// A point is admissible for the family when the support product has
/// finite value.
pub fn point_is_admissible(pt: &ValuativePoint, phi: &PhiRing) -> Result<bool, ValError> {
    if !phi.ring().is_polynomial() || phi.ring().ambient() != pt.ring() {
        return Err(ValError::Kernel(CaError::RingMismatch(
            "point and support family live over different rings".into(),
        )));
    }
    Ok(pt.value_of_ideal(phi.product().gens()).is_finite())
}

/// Membership in a basic open: `min_i v(f_i) >= v(g)` under lex.
pub fn in_basic_open(pt: &ValuativePoint, bo: &BasicOpen) -> bool {
    pt.value_of_ideal(bo.ideal_gens()) >= pt.value(bo.denominator())
}

/// Chart selection: the smallest index attaining the minimal value of the
/// center's generators.
pub fn select_chart(pt: &ValuativePoint, gens: &[Poly]) -> Result<usize, ValError> {
    let min = pt.value_of_ideal(gens);
    if !min.is_finite() {
        return Err(ValError::InfiniteValue);
    }
    Ok(gens
        .iter()
        .position(|g| pt.value(g) == min)
        .expect("minimum attained"))
}

/// One stage of a trace through a blow-up sequence.
#[derive(Clone, Debug)]
pub struct TraceStep {
    pub chart_index: usize,
    /// New chart variables with their weight vectors; empty for a
    /// principal center.
    pub new_vars: Vec<(String, Vec<i64>)>,
    /// Variables of the chart ring after this stage.
    pub ring_vars: Vec<String>,
}

/// Chart index, transformed point, and the new chart variables with their
/// value vectors.
pub type TransformedPoint = (usize, ValuativePoint, Vec<(String, Vec<i64>)>);

/// Pull the point through one admissible blow-up, returning the chart
/// index, the transformed point on the chart ring, and the new variables
/// with their values.
pub fn transform_point(pt: &ValuativePoint, gens: &[Poly]) -> Result<TransformedPoint, ValError> {
    for g in gens {
        if g.is_zero() {
            return Err(ValError::ZeroGenerator);
        }
    }
    let i = select_chart(pt, gens)?;
    let vi = match pt.value(&gens[i]) {
        Value::Finite(v) => v,
        Value::Infinity => return Err(ValError::InfiniteValue),
    };
    let names = chart_var_names(pt.stage + 1, gens.len(), i);
    let mut vars: Vec<String> = pt.ring.vars().to_vec();
    for n in &names {
        if vars.contains(n) {
            return Err(ValError::Kernel(CaError::BadVariable(format!(
                "chart variable `{n}` collides with an existing variable"
            ))));
        }
    }
    vars.extend(names.iter().cloned());
    let chart_ring = PolyRing::from_names(vars, pt.ring.order())?;

    let mut new_vars = Vec::new();
    let mut name_iter = names.iter();
    let k = pt.valuation.rank();
    let mut columns: Vec<Vec<i64>> = (0..pt.ring.num_vars())
        .map(|c| pt.valuation.var_value(c))
        .collect();
    for (j, g) in gens.iter().enumerate() {
        if j == i {
            continue;
        }
        let vj = match pt.value(g) {
            Value::Finite(v) => v,
            Value::Infinity => return Err(ValError::InfiniteValue),
        };
        let diff: Vec<i64> = vj.iter().zip(&vi).map(|(a, b)| a - b).collect();
        let name = name_iter.next().expect("one name per non-chart generator");
        new_vars.push((name.clone(), diff.clone()));
        columns.push(diff);
    }
    let weights: Vec<Vec<i64>> = (0..k)
        .map(|row| columns.iter().map(|c| c[row]).collect())
        .collect();
    let valuation = ValuationData::new(chart_ring.num_vars(), weights)?;
    let point = ValuativePoint {
        ring: chart_ring,
        valuation,
        stage: pt.stage + 1,
    };
    Ok((i, point, new_vars))
}

/// Trace the point through a sequence of centers, each given by generator
/// strings parsed in the ring of its stage.
pub fn trace_through_blowups(
    pt: &ValuativePoint,
    centers: &[Vec<String>],
) -> Result<Vec<TraceStep>, ValError> {
    let mut current = pt.clone();
    let mut steps = Vec::new();
    for center in centers {
        let gens: Vec<Poly> = center
            .iter()
            .map(|s| current.ring.parse(s))
            .collect::<Result<_, _>>()?;
        let (chart_index, next, new_vars) = transform_point(&current, &gens)?;
        steps.push(TraceStep {
            chart_index,
            new_vars,
            ring_vars: next.ring.vars().to_vec(),
        });
        current = next;
    }
    Ok(steps)
}
