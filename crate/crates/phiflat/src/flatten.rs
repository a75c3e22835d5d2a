//! Fitting-ideal flatness tests and the flattening-by-blow-up driver.
//!
//! A finite module over a domain is flat exactly when it is locally free of
//! its generic rank `r`, which the Fitting ideals detect: `Fitt_{r-1} = 0`
//! and `Fitt_r = (1)`. The driver blows up the support product first, then
//! on every chart saturates the pulled-back presentation, re-tests
//! flatness, and extracts the offending Fitting ideal as the next center.
//! Each center must be admissible for the induced supports of its chart;
//! an inadmissible center means the input was not flat over the good open
//! locus in the first place. Everything the driver does is recorded in a
//! replayable certificate.
//!
//! Fitting centers are the standard effective choice, but no termination
//! bound is claimed: the round budget caps the work and exhausting it is
//! reported honestly as an unresolved verdict.

use crate::blowup::{compose, strict_transform_module, BlowUpSequence, BlowupError};
use crate::cakernel::{radical_member, AffineRing, CaError, Ideal, Poly};
use crate::depth::PresentedModule;
use crate::philocal::all_minors;
use crate::phiring::{PhiError, PhiRing};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FlattenError {
    #[error("base ring is not known to be an integral domain")]
    NotADomain,
    #[error("support family is degenerate; nothing to flatten against")]
    DegenerateSupports,
    #[error(transparent)]
    Kernel(#[from] CaError),
    #[error(transparent)]
    Phi(#[from] PhiError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// `Fitt_i(M)`: the ideal of `(g - i)`-minors of the relation matrix,
/// reduced modulo the defining ideal. `Fitt_i <= Fitt_{i+1}`, and
/// `Fitt_g = (1)`.
pub fn fitting_ideal(m: &PresentedModule, i: usize) -> Result<Ideal, CaError> {
    let ring = m.ring();
    let ambient = ring.ambient().clone();
    let g = m.num_gens();
    if i >= g {
        return Ok(Ideal::unit(&ambient));
    }
    let size = g - i;
    let cols = m.relations().groebner();
    let matrix: Vec<Vec<Poly>> = (0..g)
        .map(|row| cols.iter().map(|c| c[row].clone()).collect())
        .collect();
    let minors = all_minors(&ambient, &matrix, size);
    let gens: Vec<Poly> = minors
        .iter()
        .map(|p| ring.nf(p))
        .collect::<Result<_, _>>()?;
    Ideal::new(&ambient, gens)
}

/// Generic rank of a finite module over a domain: the smallest `i` with
/// `Fitt_i` nonzero, equivalently the generator count minus the rank of
/// the relation matrix over the fraction field.
pub fn generic_rank(m: &PresentedModule) -> Result<usize, FlattenError> {
    if !m.ring().is_integral() {
        return Err(FlattenError::NotADomain);
    }
    let ring = m.ring();
    let g = m.num_gens();
    let cols = m.relations().groebner();
    let matrix: Vec<Vec<Poly>> = (0..g)
        .map(|row| cols.iter().map(|c| c[row].clone()).collect())
        .collect();
    // rank over the fraction field of the quotient domain: the largest
    // minor size with a minor nonzero modulo the defining ideal
    let mut rank = 0;
    let max = g.min(cols.len());
    for size in 1..=max {
        let minors = all_minors(ring.ambient(), &matrix, size);
        let mut nonzero = false;
        for p in &minors {
            if !ring.is_zero_elem(p)? {
                nonzero = true;
                break;
            }
        }
        if nonzero {
            rank = size;
        } else {
            break;
        }
    }
    Ok(g - rank)
}

/// Flatness outcome for a finite module over a domain.
#[derive(Clone, Debug)]
pub struct FlatnessState {
    pub rank: usize,
    /// `Fitt_{rank-1} = 0`, which holds by the choice of the rank.
    pub fitt_below_is_zero: bool,
    /// Is `Fitt_rank` the unit ideal?
    pub fitt_rank_is_unit: bool,
    /// The offending Fitting ideal when not flat, with canonical
    /// generators in the quotient.
    pub nonflat_locus: Vec<Poly>,
}

impl FlatnessState {
    pub fn is_flat(&self) -> bool {
        self.fitt_below_is_zero && self.fitt_rank_is_unit
    }
}

/// Flat if and only if `Fitt_{r-1} = 0` and `Fitt_r = (1)` for the generic
/// rank `r`; otherwise `Fitt_r` is the non-flat locus.
pub fn is_flat_finite(m: &PresentedModule) -> Result<FlatnessState, FlattenError> {
    let rank = generic_rank(m)?;
    let ring = m.ring();
    let fitt_r = fitting_ideal(m, rank)?;
    let below = if rank == 0 {
        true
    } else {
        let f = fitting_ideal(m, rank - 1)?;
        ring.ideal_is_zero(f.gens())?
    };
    let unit = ring.ideal_is_unit(fitt_r.gens())?;
    let locus = if unit {
        Vec::new()
    } else {
        canonical_quotient_gens(ring, fitt_r.gens())?
    };
    Ok(FlatnessState {
        rank,
        fitt_below_is_zero: below,
        fitt_rank_is_unit: unit,
        nonflat_locus: locus,
    })
}

/// Canonical generators of the image of an ideal in the quotient: the
/// reduced basis of the lifted ideal, with elements of the defining ideal
/// dropped.
fn canonical_quotient_gens(ring: &AffineRing, gens: &[Poly]) -> Result<Vec<Poly>, CaError> {
    let lifted = ring.lift_ideal(gens)?;
    let mut out = Vec::new();
    for g in lifted.groebner() {
        if !ring.is_zero_elem(g)? {
            out.push(g.clone());
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------
// certificate records
// ---------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingRecord {
    pub vars: Vec<String>,
    pub order: String,
    pub defining: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub gens: usize,
    /// Relation columns of the canonical presentation.
    pub relations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemRecord {
    pub ring: RingRecord,
    pub phi0: Vec<Vec<String>>,
    pub degenerate_ok: bool,
    pub module: ModuleRecord,
    pub max_rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FittingRecord {
    pub rank: usize,
    pub fitt_below_is_zero: bool,
    pub fitt_rank_is_unit: bool,
    pub flat: bool,
    pub nonflat_locus: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartRecord {
    pub chart_index: usize,
    pub ring: RingRecord,
    pub exceptional: String,
    pub new_vars: Vec<String>,
    pub saturation_exponent: usize,
    pub module: ModuleRecord,
    pub fitting: FittingRecord,
    pub blowup: Option<BlowupRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub center: Vec<String>,
    pub admissibility_exponent: Option<u32>,
    pub charts: Vec<ChartRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VerdictRecord {
    Success,
    Unresolved {
        max_rounds: usize,
    },
    InputNotFlatOnU {
        /// Chart indices descended from the root to the failure.
        chart_path: Vec<usize>,
        /// Centers blown up along that path, starting with the support
        /// product.
        path_centers: Vec<Vec<String>>,
        /// The inadmissible Fitting center found at the end of the path.
        offending: Vec<String>,
        /// A support-product generator with no power inside the offending
        /// ideal.
        witness: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatteningCertificate {
    pub version: String,
    pub problem: ProblemRecord,
    pub verdict: VerdictRecord,
    pub rounds_used: usize,
    pub root: FittingRecord,
    pub blowup: Option<BlowupRecord>,
}

impl FlatteningCertificate {
    pub fn is_success(&self) -> bool {
        matches!(self.verdict, VerdictRecord::Success)
    }

    /// Canonical JSON: keys sorted, two-space indentation, trailing
    /// newline. Byte-stable for a fixed version.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("certificate serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("valid json");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<FlatteningCertificate, serde_json::Error> {
        serde_json::from_str(text)
    }
}

pub const CERTIFICATE_VERSION: &str = "phiflat-cert-1";

fn ring_record(ring: &AffineRing) -> RingRecord {
    RingRecord {
        vars: ring.ambient().vars().to_vec(),
        order: ring.ambient().order().name(),
        defining: ring
            .defining()
            .gens()
            .iter()
            .map(|p| p.to_string())
            .collect(),
    }
}

fn module_record(m: &PresentedModule) -> ModuleRecord {
    ModuleRecord {
        gens: m.num_gens(),
        relations: m.relation_strings(),
    }
}

fn fitting_record(state: &FlatnessState) -> FittingRecord {
    FittingRecord {
        rank: state.rank,
        fitt_below_is_zero: state.fitt_below_is_zero,
        fitt_rank_is_unit: state.fitt_rank_is_unit,
        flat: state.is_flat(),
        nonflat_locus: state.nonflat_locus.iter().map(|p| p.to_string()).collect(),
    }
}

// ---------------------------------------------------------------------
// the driver
// ---------------------------------------------------------------------

/// A flattening problem: a module of finite presentation over a ring with
/// supports, and a round budget.
#[derive(Clone, Debug)]
pub struct FlatteningProblem {
    pub phi: PhiRing,
    pub module: PresentedModule,
    pub max_rounds: usize,
}

pub const DEFAULT_MAX_ROUNDS: usize = 5;

impl FlatteningProblem {
    pub fn record(&self) -> ProblemRecord {
        ProblemRecord {
            ring: ring_record(self.phi.ring()),
            phi0: self
                .phi
                .phi0()
                .iter()
                .map(|i| i.gens().iter().map(|p| p.to_string()).collect())
                .collect(),
            degenerate_ok: self.phi.degenerate_ok(),
            module: module_record(&self.module),
            max_rounds: self.max_rounds,
        }
    }
}

/// Error-like short circuit for the inadmissible-center case; converted
/// into a certificate verdict at top level.
struct NotFlatOnU {
    chart_path: Vec<usize>,
    path_centers: Vec<Vec<String>>,
    offending: Vec<String>,
    witness: String,
}

enum DriverStop {
    NotFlatOnU(Box<NotFlatOnU>),
    Hard(FlattenError),
}

impl From<FlattenError> for DriverStop {
    fn from(e: FlattenError) -> Self {
        DriverStop::Hard(e)
    }
}
impl From<CaError> for DriverStop {
    fn from(e: CaError) -> Self {
        DriverStop::Hard(e.into())
    }
}
impl From<PhiError> for DriverStop {
    fn from(e: PhiError) -> Self {
        DriverStop::Hard(e.into())
    }
}
impl From<BlowupError> for DriverStop {
    fn from(e: BlowupError) -> Self {
        DriverStop::Hard(e.into())
    }
}

struct NodeResult {
    record: BlowupRecord,
    all_flat: bool,
    depth_reached: usize,
}

/// A support-product generator with no power inside the candidate ideal.
fn admissibility_witness(phi: &PhiRing, gens: &[Poly]) -> Result<String, FlattenError> {
    let lifted = phi.ring().lift_ideal(gens)?;
    for p in phi.product().gens() {
        if !radical_member(p, &lifted)? {
            return Ok(p.to_string());
        }
    }
    Ok(String::new())
}

/// Blow up `center` on the leaf of `seq`, strict-transform `module` onto
/// every chart, recurse on the non-flat charts.
fn process_node(
    seq: &BlowUpSequence,
    module: &PresentedModule,
    center: &[Poly],
    exponent: Option<u32>,
    depth: usize,
    max_rounds: usize,
    threads: usize,
) -> Result<NodeResult, DriverStop> {
    let per_chart = |i: usize| -> Result<(ChartRecord, bool, usize), DriverStop> {
        let extended = compose(seq, center, i)?;
        let step = extended.steps().last().expect("just composed");
        let chart = &step.chart;
        let st = strict_transform_module(module, chart)?;
        let state = is_flat_finite(&st.module).map_err(DriverStop::Hard)?;
        let base_record = ChartRecord {
            chart_index: i,
            ring: ring_record(chart.ring()),
            exceptional: chart.exceptional().to_string(),
            new_vars: chart.new_vars().to_vec(),
            saturation_exponent: st.saturation_exponent,
            module: module_record(&st.module),
            fitting: fitting_record(&state),
            blowup: None,
        };
        if state.is_flat() {
            return Ok((base_record, true, depth));
        }
        let locus = state.nonflat_locus.clone();
        let adm = extended.leaf_phi().is_admissible(&locus)?;
        if !adm.admissible {
            let witness = admissibility_witness(extended.leaf_phi(), &locus)?;
            return Err(DriverStop::NotFlatOnU(Box::new(NotFlatOnU {
                chart_path: vec![i],
                path_centers: vec![center.iter().map(|p| p.to_string()).collect()],
                offending: locus.iter().map(|p| p.to_string()).collect(),
                witness,
            })));
        }
        if depth + 1 > max_rounds {
            return Ok((base_record, false, depth));
        }
        match process_node(
            &extended,
            &st.module,
            &locus,
            adm.exponent,
            depth + 1,
            max_rounds,
            1,
        ) {
            Ok(child) => {
                let mut record = base_record;
                record.blowup = Some(child.record);
                Ok((record, child.all_flat, child.depth_reached))
            }
            Err(DriverStop::NotFlatOnU(mut stop)) => {
                stop.chart_path.insert(0, i);
                stop.path_centers
                    .insert(0, center.iter().map(|p| p.to_string()).collect());
                Err(DriverStop::NotFlatOnU(stop))
            }
            Err(hard) => Err(hard),
        }
    };

    let results: Vec<Result<(ChartRecord, bool, usize), DriverStop>> =
        if threads > 1 && center.len() > 1 {
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..center.len())
                    .map(|i| scope.spawn(move || per_chart(i)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("chart worker panicked"))
                    .collect()
            })
        } else {
            (0..center.len()).map(per_chart).collect()
        };

    let mut charts = Vec::with_capacity(results.len());
    let mut all_flat = true;
    let mut depth_reached = depth;
    for r in results {
        let (record, flat, d) = r?;
        all_flat &= flat;
        depth_reached = depth_reached.max(d);
        charts.push(record);
    }
    Ok(NodeResult {
        record: BlowupRecord {
            center: center.iter().map(|p| p.to_string()).collect(),
            admissibility_exponent: exponent,
            charts,
        },
        all_flat,
        depth_reached,
    })
}

/// Run the flattening driver. Returns a certificate whose verdict is
/// success, unresolved (round budget exhausted), or a demonstration that
/// the input was not flat over the good open locus. `threads` bounds chart
/// parallelism at the first round; `0` picks the available parallelism.
pub fn flatten(
    problem: &FlatteningProblem,
    threads: usize,
) -> Result<FlatteningCertificate, FlattenError> {
    let phi = &problem.phi;
    if problem.module.ring() != phi.ring() {
        return Err(FlattenError::Kernel(CaError::RingMismatch(
            "module and supports live over different rings".into(),
        )));
    }
    if !phi.ring().is_integral() {
        return Err(FlattenError::NotADomain);
    }
    if phi.has_zero_support() {
        return Err(FlattenError::DegenerateSupports);
    }
    let threads = if threads == 0 {
        std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1)
    } else {
        threads
    };

    let root_state = is_flat_finite(&problem.module)?;
    let root = fitting_record(&root_state);
    if root_state.is_flat() {
        return Ok(FlatteningCertificate {
            version: CERTIFICATE_VERSION.into(),
            problem: problem.record(),
            verdict: VerdictRecord::Success,
            rounds_used: 0,
            root,
            blowup: None,
        });
    }

    if problem.max_rounds == 0 {
        return Ok(FlatteningCertificate {
            version: CERTIFICATE_VERSION.into(),
            problem: problem.record(),
            verdict: VerdictRecord::Unresolved { max_rounds: 0 },
            rounds_used: 0,
            root,
            blowup: None,
        });
    }

    // round 0 blows up the support product, making the boundary invertible
    let center = canonical_quotient_gens(phi.ring(), phi.product().gens())?;
    let adm = phi.is_admissible(&center)?;
    debug_assert!(adm.admissible);
    let seq = BlowUpSequence::root(phi.clone());
    match process_node(
        &seq,
        &problem.module,
        &center,
        adm.exponent,
        1,
        problem.max_rounds,
        threads,
    ) {
        Ok(node) => {
            let verdict = if node.all_flat {
                VerdictRecord::Success
            } else {
                VerdictRecord::Unresolved {
                    max_rounds: problem.max_rounds,
                }
            };
            Ok(FlatteningCertificate {
                version: CERTIFICATE_VERSION.into(),
                problem: problem.record(),
                verdict,
                rounds_used: node.depth_reached,
                root,
                blowup: Some(node.record),
            })
        }
        Err(DriverStop::NotFlatOnU(stop)) => Ok(FlatteningCertificate {
            version: CERTIFICATE_VERSION.into(),
            problem: problem.record(),
            verdict: VerdictRecord::InputNotFlatOnU {
                chart_path: stop.chart_path.clone(),
                path_centers: stop.path_centers.clone(),
                offending: stop.offending.clone(),
                witness: stop.witness.clone(),
            },
            rounds_used: stop.chart_path.len(),
            root,
            blowup: None,
        }),
        Err(DriverStop::Hard(e)) => Err(e),
    }
}

// ---------------------------------------------------------------------
// verification
// ---------------------------------------------------------------------

#[derive(Debug)]
pub struct VerifyOutcome {
    pub valid: bool,
    pub divergence: Option<String>,
}

impl VerifyOutcome {
    fn ok() -> VerifyOutcome {
        VerifyOutcome {
            valid: true,
            divergence: None,
        }
    }

    fn diverged(msg: String) -> VerifyOutcome {
        VerifyOutcome {
            valid: false,
            divergence: Some(msg),
        }
    }
}

macro_rules! check {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Ok(VerifyOutcome::diverged(format!($($msg)*)));
        }
    };
}

/// Replay every strict transform, Fitting verdict and admissibility
/// exponent of a certificate from the problem data. Reports the first
/// divergence found.
pub fn verify_certificate(
    cert: &FlatteningCertificate,
    problem: &FlatteningProblem,
) -> Result<VerifyOutcome, FlattenError> {
    check!(
        cert.version == CERTIFICATE_VERSION,
        "unknown certificate version {}",
        cert.version
    );
    check!(
        cert.problem == problem.record(),
        "embedded problem differs from the provided one"
    );
    let root_state = is_flat_finite(&problem.module)?;
    check!(
        fitting_record(&root_state) == cert.root,
        "root flatness state differs"
    );

    match &cert.verdict {
        VerdictRecord::Success | VerdictRecord::Unresolved { .. } => {
            if root_state.is_flat() {
                check!(
                    cert.blowup.is_none() && cert.is_success(),
                    "flat input must carry an empty success certificate"
                );
                check!(cert.rounds_used == 0, "flat input uses zero rounds");
                return Ok(VerifyOutcome::ok());
            }
            let Some(blowup) = &cert.blowup else {
                // a zero budget legitimately stops before the first round
                if matches!(cert.verdict, VerdictRecord::Unresolved { max_rounds: 0 })
                    && problem.max_rounds == 0
                {
                    return Ok(VerifyOutcome::ok());
                }
                return Ok(VerifyOutcome::diverged(
                    "missing blow-up tree for a non-flat input".into(),
                ));
            };
            let expected_center =
                canonical_quotient_gens(problem.phi.ring(), problem.phi.product().gens())?;
            let seq = BlowUpSequence::root(problem.phi.clone());
            let outcome = verify_node(
                &seq,
                &problem.module,
                &expected_center,
                blowup,
                problem.max_rounds,
                1,
            )?;
            if !outcome.valid {
                return Ok(outcome);
            }
            let all_flat = tree_all_flat(blowup);
            match &cert.verdict {
                VerdictRecord::Success => {
                    check!(all_flat, "success verdict with a non-flat leaf")
                }
                VerdictRecord::Unresolved { max_rounds } => {
                    check!(!all_flat, "unresolved verdict but every leaf is flat");
                    check!(
                        *max_rounds == problem.max_rounds,
                        "unresolved round budget differs"
                    );
                }
                _ => unreachable!(),
            }
            Ok(VerifyOutcome::ok())
        }
        VerdictRecord::InputNotFlatOnU {
            chart_path,
            path_centers,
            offending,
            witness,
        } => {
            check!(
                cert.blowup.is_none(),
                "hypothesis-violation certificates carry no tree"
            );
            check!(
                chart_path.len() == path_centers.len() && !chart_path.is_empty(),
                "malformed failure path"
            );
            let mut seq = BlowUpSequence::root(problem.phi.clone());
            let mut module = problem.module.clone();
            let mut expected_center =
                canonical_quotient_gens(problem.phi.ring(), problem.phi.product().gens())?;
            for (k, (center_strs, &chart)) in path_centers.iter().zip(chart_path.iter()).enumerate()
            {
                let center: Vec<Poly> = center_strs
                    .iter()
                    .map(|s| seq.leaf_ring().ambient().parse(s))
                    .collect::<Result<_, _>>()?;
                check!(
                    center == expected_center,
                    "recorded center at step {k} differs from the replayed one"
                );
                seq = compose(&seq, &center, chart)?;
                let step = seq.steps().last().expect("just composed");
                module = strict_transform_module(&module, &step.chart)?.module;
                let state = is_flat_finite(&module)?;
                if k + 1 == chart_path.len() {
                    check!(!state.is_flat(), "module is flat at the recorded failure");
                    let locus_strs: Vec<String> =
                        state.nonflat_locus.iter().map(|p| p.to_string()).collect();
                    check!(
                        &locus_strs == offending,
                        "offending Fitting ideal differs: replay found ({})",
                        locus_strs.join(", ")
                    );
                    let adm = seq.leaf_phi().is_admissible(&state.nonflat_locus)?;
                    check!(!adm.admissible, "recorded center is actually admissible");
                    let replayed_witness =
                        admissibility_witness(seq.leaf_phi(), &state.nonflat_locus)?;
                    check!(
                        &replayed_witness == witness,
                        "admissibility witness differs: replay found {replayed_witness}"
                    );
                } else {
                    check!(
                        !state.is_flat(),
                        "intermediate module on the failure path is flat"
                    );
                    expected_center = state.nonflat_locus.clone();
                }
            }
            Ok(VerifyOutcome::ok())
        }
    }
}

fn tree_all_flat(node: &BlowupRecord) -> bool {
    node.charts.iter().all(|c| match &c.blowup {
        Some(child) => tree_all_flat(child),
        None => c.fitting.flat,
    })
}

fn verify_node(
    seq: &BlowUpSequence,
    module: &PresentedModule,
    expected_center: &[Poly],
    record: &BlowupRecord,
    max_rounds: usize,
    depth: usize,
) -> Result<VerifyOutcome, FlattenError> {
    let recorded_center: Vec<Poly> = record
        .center
        .iter()
        .map(|s| seq.leaf_ring().ambient().parse(s))
        .collect::<Result<_, _>>()?;
    check!(
        recorded_center == expected_center,
        "center at depth {depth} differs from the replayed Fitting center"
    );
    // direct power-containment check of the recorded exponent
    if let Some(n) = record.admissibility_exponent {
        let power = seq.leaf_phi().product().power(n);
        let lifted = seq.leaf_ring().lift_ideal(&recorded_center)?;
        check!(
            lifted.contains_ideal(&power)?,
            "support product to the {n} is not inside the center at depth {depth}"
        );
    }
    let adm = seq.leaf_phi().is_admissible(&recorded_center)?;
    check!(
        adm.admissible,
        "recorded center at depth {depth} is not admissible"
    );
    check!(
        adm.exponent == record.admissibility_exponent,
        "admissibility exponent at depth {depth} differs"
    );
    check!(
        record.charts.len() == recorded_center.len(),
        "chart count differs from the center generator count at depth {depth}"
    );
    for (i, chart_rec) in record.charts.iter().enumerate() {
        check!(
            chart_rec.chart_index == i,
            "charts out of order at depth {depth}"
        );
        let extended = compose(seq, &recorded_center, i)?;
        let step = extended.steps().last().expect("just composed");
        let chart = &step.chart;
        check!(
            ring_record(chart.ring()) == chart_rec.ring,
            "chart ring differs at depth {depth}, chart {i}"
        );
        check!(
            chart.exceptional().to_string() == chart_rec.exceptional,
            "exceptional element differs at depth {depth}, chart {i}"
        );
        check!(
            chart.new_vars() == chart_rec.new_vars,
            "chart variables differ at depth {depth}, chart {i}"
        );
        let st = strict_transform_module(module, chart)?;
        check!(
            st.saturation_exponent == chart_rec.saturation_exponent,
            "strict transform saturation exponent differs at depth {depth}, chart {i}"
        );
        check!(
            module_record(&st.module) == chart_rec.module,
            "strict transform presentation differs at depth {depth}, chart {i}"
        );
        let state = is_flat_finite(&st.module)?;
        check!(
            fitting_record(&state) == chart_rec.fitting,
            "fitting data differs at depth {depth}, chart {i}"
        );
        match &chart_rec.blowup {
            None => {
                // leaf: must be flat, unless the round budget ran out here
                if !state.is_flat() {
                    check!(
                        depth >= max_rounds,
                        "non-flat leaf above the round budget at depth {depth}, chart {i}"
                    );
                }
            }
            Some(child) => {
                check!(
                    !state.is_flat(),
                    "flat chart should not have been blown up further"
                );
                let outcome = verify_node(
                    &extended,
                    &st.module,
                    &state.nonflat_locus,
                    child,
                    max_rounds,
                    depth + 1,
                )?;
                if !outcome.valid {
                    return Ok(outcome);
                }
            }
        }
    }
    Ok(VerifyOutcome::ok())
}
