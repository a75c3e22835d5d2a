//! Admissible blow-ups as explicit Rees-algebra charts, and strict
//! transforms of modules and algebras.
//!
//! The chart of index `i` for a center `(f_1, ..., f_r)` adjoins variables
//! `t_j` with `f_j = t_j * f_i` and divides by the saturation of those
//! relations with respect to `f_i`. Saturating makes the chart the honest
//! Rees chart: the presentation ideal is the kernel of the map into the
//! localization at `f_i`, the center becomes principal generated by the
//! exceptional element, and that element is a nonzerodivisor. Blow-ups are
//! kept as sequences of charts; no recombination into a single center is
//! attempted.

use crate::cakernel::{
    colon_ideal, saturate_ideal, saturate_submodule, AffineRing, CaError, Ideal, Poly, PolyRing,
};
use crate::depth::PresentedModule;
use crate::phiring::{induced_supports, PhiError, PhiRing};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BlowupError {
    #[error("blow-up center has no generators")]
    EmptyCenter,
    #[error("chart generator is zero in the parent ring")]
    ZeroGenerator,
    #[error("chart index {index} out of range for {len} generators")]
    BadChartIndex { index: usize, len: usize },
    #[error("chart variable `{0}` collides with a user variable")]
    VariableCollision(String),
    #[error("center ({center}) is not admissible at stage {stage}")]
    InadmissibleCenter { center: String, stage: usize },
    #[error(transparent)]
    Kernel(#[from] CaError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}

/// Deterministic names for the chart variables of blow-up stage `stage`
/// (1-based): one variable per non-chart generator. A two-generator center
/// gets the single name `t`, larger centers get `t2, t3, ...` indexed by
/// the 1-based generator position; stages past the first carry an `_stage`
/// suffix.
pub fn chart_var_names(stage: usize, num_gens: usize, chart: usize) -> Vec<String> {
    (0..num_gens)
        .filter(|&j| j != chart)
        .map(|j| {
            let base = if num_gens == 2 {
                "t".to_string()
            } else {
                format!("t{}", j + 1)
            };
            if stage <= 1 {
                base
            } else {
                format!("{base}_{stage}")
            }
        })
        .collect()
}

/// One affine chart of an admissible blow-up.
#[derive(Clone, Debug)]
pub struct BlowUpChart {
    parent: AffineRing,
    center: Vec<Poly>,
    chart_index: usize,
    ring: AffineRing,
    new_vars: Vec<String>,
    exceptional: Poly,
    saturation_exponent: usize,
}

impl BlowUpChart {
    pub fn parent(&self) -> &AffineRing {
        &self.parent
    }

    pub fn center(&self) -> &[Poly] {
        &self.center
    }

    pub fn chart_index(&self) -> usize {
        self.chart_index
    }

    /// The chart ring, presented as a quotient of the extended polynomial
    /// ring.
    pub fn ring(&self) -> &AffineRing {
        &self.ring
    }

    pub fn new_vars(&self) -> &[String] {
        &self.new_vars
    }

    /// Image of the chart generator: the exceptional element, which
    /// generates the pulled-back center and is a nonzerodivisor.
    pub fn exceptional(&self) -> &Poly {
        &self.exceptional
    }

    pub fn saturation_exponent(&self) -> usize {
        self.saturation_exponent
    }

    /// Images of the parent variables under the structure map.
    pub fn structure_images(&self) -> Vec<Poly> {
        self.parent
            .ambient()
            .vars()
            .iter()
            .map(|v| {
                let idx = self
                    .ring
                    .ambient()
                    .var_index(v)
                    .expect("parent variable kept");
                self.ring.ambient().var(idx)
            })
            .collect()
    }

    /// Embed a parent-ring polynomial into the chart's ambient ring.
    pub fn lift(&self, f: &Poly) -> Result<Poly, CaError> {
        f.embed(self.ring.ambient())
    }
}

/// The chart of index `i` of the blow-up of `parent` along the center.
pub fn rees_chart(
    parent: &AffineRing,
    center: &[Poly],
    index: usize,
) -> Result<BlowUpChart, BlowupError> {
    if center.is_empty() {
        return Err(BlowupError::EmptyCenter);
    }
    if index >= center.len() {
        return Err(BlowupError::BadChartIndex {
            index,
            len: center.len(),
        });
    }
    let center: Vec<Poly> = center
        .iter()
        .map(|f| parent.nf(f))
        .collect::<Result<_, _>>()?;
    if center[index].is_zero() {
        return Err(BlowupError::ZeroGenerator);
    }
    let stage = parent.blowup_stage() + 1;
    let names = chart_var_names(stage, center.len(), index);
    for n in &names {
        if parent.ambient().vars().contains(n) {
            return Err(BlowupError::VariableCollision(n.clone()));
        }
    }
    let mut vars = parent.ambient().vars().to_vec();
    vars.extend(names.iter().cloned());
    let ambient = PolyRing::from_names(vars, parent.ambient().order())?;

    let fi = center[index].embed(&ambient)?;
    let mut relations: Vec<Poly> = Vec::new();
    let mut name_iter = names.iter();
    for (j, f) in center.iter().enumerate() {
        if j == index {
            continue;
        }
        let name = name_iter.next().expect("one name per non-chart generator");
        let t = ambient.var(ambient.var_index(name).expect("fresh variable"));
        relations.push(f.embed(&ambient)?.sub(&t.mul(&fi)));
    }
    for d in parent.defining().gens() {
        relations.push(d.embed(&ambient)?);
    }
    let raw = Ideal::new(&ambient, relations)?;
    let principal = Ideal::new(&ambient, vec![fi.clone()])?;
    let (saturated, saturation_exponent) = saturate_ideal(&raw, &principal)?;
    debug_assert_eq!(colon_ideal(&saturated, &principal)?, saturated);
    let ring = AffineRing::quotient_with(ambient, saturated, parent.is_integral(), stage)?;
    let exceptional = ring.nf(&fi)?;
    Ok(BlowUpChart {
        parent: parent.clone(),
        center,
        chart_index: index,
        ring,
        new_vars: names,
        exceptional,
        saturation_exponent,
    })
}

/// A strict transform together with the exponent at which the saturation
/// stabilized.
#[derive(Clone, Debug)]
pub struct StrictTransform {
    pub module: PresentedModule,
    pub saturation_exponent: usize,
}

/// Strict transform of a module: pull the presentation back to the chart
/// and quotient by the sections supported on the exceptional divisor,
/// computed as the saturation of the pulled-back relation submodule by the
/// exceptional element.
pub fn strict_transform_module(
    m: &PresentedModule,
    chart: &BlowUpChart,
) -> Result<StrictTransform, BlowupError> {
    if m.ring() != chart.parent() {
        return Err(BlowupError::Kernel(CaError::RingMismatch(
            "module does not live over the chart's parent ring".into(),
        )));
    }
    let ambient = chart.ring().ambient().clone();
    let g = m.num_gens();
    let cols: Vec<Vec<Poly>> = m
        .relations()
        .cols()
        .iter()
        .map(|col| {
            col.iter()
                .map(|p| p.embed(&ambient))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let pulled = PresentedModule::new(chart.ring(), g, cols)?;
    let principal = Ideal::new(&ambient, vec![chart.exceptional().clone()])?;
    let (saturated, saturation_exponent) = saturate_submodule(pulled.relations(), &principal)?;
    let module = PresentedModule::new(chart.ring(), g, saturated.groebner().to_vec())?;
    Ok(StrictTransform {
        module,
        saturation_exponent,
    })
}

/// A finitely presented algebra over an affine ring: extension variables
/// plus a defining ideal of the combined polynomial ring.
#[derive(Clone, Debug)]
pub struct FpAlgebra {
    base: AffineRing,
    ext_vars: Vec<String>,
    ambient: PolyRing,
    relations: Ideal,
}

impl FpAlgebra {
    pub fn new(
        base: &AffineRing,
        ext_vars: &[&str],
        relations: &[&str],
    ) -> Result<FpAlgebra, BlowupError> {
        let mut vars = base.ambient().vars().to_vec();
        for v in ext_vars {
            if vars.contains(&v.to_string()) {
                return Err(BlowupError::VariableCollision(v.to_string()));
            }
            vars.push(v.to_string());
        }
        let ambient = PolyRing::from_names(vars, base.ambient().order())?;
        let mut gens: Vec<Poly> = relations
            .iter()
            .map(|s| ambient.parse(s))
            .collect::<Result<_, _>>()?;
        for d in base.defining().gens() {
            gens.push(d.embed(&ambient)?);
        }
        let relations = Ideal::new(&ambient, gens)?.canonicalized();
        Ok(FpAlgebra {
            base: base.clone(),
            ext_vars: ext_vars.iter().map(|s| s.to_string()).collect(),
            ambient,
            relations,
        })
    }

    pub fn base(&self) -> &AffineRing {
        &self.base
    }

    pub fn ext_vars(&self) -> &[String] {
        &self.ext_vars
    }

    pub fn ambient(&self) -> &PolyRing {
        &self.ambient
    }

    pub fn relations(&self) -> &Ideal {
        &self.relations
    }
}

/// Strict transform of a finitely presented algebra: saturate the
/// pulled-back defining ideal by the exceptional element.
pub fn strict_transform_algebra(
    b: &FpAlgebra,
    chart: &BlowUpChart,
) -> Result<FpAlgebra, BlowupError> {
    if b.base() != chart.parent() {
        return Err(BlowupError::Kernel(CaError::RingMismatch(
            "algebra does not live over the chart's parent ring".into(),
        )));
    }
    let mut vars = chart.ring().ambient().vars().to_vec();
    for v in &b.ext_vars {
        if vars.contains(v) {
            return Err(BlowupError::VariableCollision(v.clone()));
        }
        vars.push(v.clone());
    }
    let ambient = PolyRing::from_names(vars, chart.ring().ambient().order())?;
    let mut gens: Vec<Poly> = b
        .relations
        .gens()
        .iter()
        .map(|p| p.embed(&ambient))
        .collect::<Result<_, _>>()?;
    for d in chart.ring().defining().gens() {
        gens.push(d.embed(&ambient)?);
    }
    let raw = Ideal::new(&ambient, gens)?;
    let principal = Ideal::new(&ambient, vec![chart.exceptional().embed(&ambient)?])?;
    let (saturated, _) = saturate_ideal(&raw, &principal)?;
    Ok(FpAlgebra {
        base: chart.ring().clone(),
        ext_vars: b.ext_vars.clone(),
        ambient,
        relations: saturated,
    })
}

/// One step of a blow-up sequence.
#[derive(Clone, Debug)]
pub struct SequenceStep {
    pub center: Vec<Poly>,
    pub chart_index: usize,
    pub chart: BlowUpChart,
    /// Exponent with `P^N` inside the center at this stage, when the
    /// incremental search found one.
    pub admissibility_exponent: Option<u32>,
}

/// A root-to-leaf path of admissible blow-up charts, with the induced
/// support family tracked at the leaf.
#[derive(Clone, Debug)]
pub struct BlowUpSequence {
    base: PhiRing,
    steps: Vec<SequenceStep>,
    leaf_phi: PhiRing,
}

impl BlowUpSequence {
    pub fn root(base: PhiRing) -> BlowUpSequence {
        BlowUpSequence {
            leaf_phi: base.clone(),
            base,
            steps: Vec::new(),
        }
    }

    pub fn base(&self) -> &PhiRing {
        &self.base
    }

    pub fn steps(&self) -> &[SequenceStep] {
        &self.steps
    }

    pub fn leaf_phi(&self) -> &PhiRing {
        &self.leaf_phi
    }

    pub fn leaf_ring(&self) -> &AffineRing {
        self.leaf_phi.ring()
    }

    /// Exceptional elements accumulated along the path.
    pub fn exceptionals(&self) -> Vec<Poly> {
        self.steps
            .iter()
            .map(|s| s.chart.exceptional().clone())
            .collect()
    }
}

/// Extend a sequence by one admissible blow-up chart. The center must be
/// admissible for the induced supports at the current leaf.
pub fn compose(
    seq: &BlowUpSequence,
    center: &[Poly],
    chart_index: usize,
) -> Result<BlowUpSequence, BlowupError> {
    let leaf = seq.leaf_phi();
    let adm = leaf.is_admissible(center)?;
    if !adm.admissible {
        let center_str: Vec<String> = center.iter().map(|p| p.to_string()).collect();
        return Err(BlowupError::InadmissibleCenter {
            center: center_str.join(", "),
            stage: seq.steps().len(),
        });
    }
    let chart = rees_chart(leaf.ring(), center, chart_index)?;
    let images = chart.structure_images();
    let leaf_phi = induced_supports(leaf, chart.ring(), &images)?;
    let mut steps = seq.steps.clone();
    steps.push(SequenceStep {
        center: chart.center().to_vec(),
        chart_index,
        chart,
        admissibility_exponent: adm.exponent,
    });
    Ok(BlowUpSequence {
        base: seq.base.clone(),
        steps,
        leaf_phi,
    })
}
