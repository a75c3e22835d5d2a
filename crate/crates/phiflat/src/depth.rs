//! Depth with respect to constructible supports: torsion, purification,
//! Hom-from-ideal, the 1-deep/2-deep decision, closure (ideal transform),
//! and the degree-0/1 Čech and Mayer–Vietoris checks.
//!
//! A module is given by a finite presentation. Torsion is computed by
//! saturating the relation submodule; purification quotients it out and is
//! always 1-deep. Closure is computed as a colon chain against a regular
//! element of the support product: the chain `D_{n+1} = (D_n : P)` inside
//! `M[1/f]` is monotone, and one stalled step certifies global
//! stabilization, at which point the result is 2-deep.

use crate::cakernel::{
    colon_submodule, intersect_submodules, saturate_submodule, syzygies, AffineRing, CaError,
    FreeSubmodule, Ideal, Poly,
};
use crate::phiring::{PhiError, PhiRing};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DepthError {
    #[error("support product is zero and the family does not allow degenerate supports")]
    ZeroSupport,
    #[error("no product of support generators is regular on the purified module")]
    NoRegularElement,
    #[error("closure chain did not stabilize within {0} steps")]
    NotStabilized(usize),
    #[error(transparent)]
    Kernel(#[from] CaError),
    #[error(transparent)]
    Phi(#[from] PhiError),
}

/// Default bound for closure chains.
pub const DEFAULT_MAX_STEPS: usize = 32;

/// A finitely presented module over an affine ring: `gens` generators and a
/// relation submodule of the ambient free module. The stored submodule
/// always contains the defining ideal times each generator, and is kept in
/// reduced Gröbner form, so presentations are canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct PresentedModule {
    ring: AffineRing,
    gens: usize,
    relations: FreeSubmodule,
}

impl std::fmt::Debug for PresentedModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "module with {} generators, {:?}",
            self.gens, self.relations
        )
    }
}

impl PresentedModule {
    pub fn new(ring: &AffineRing, gens: usize, columns: Vec<Vec<Poly>>) -> Result<Self, CaError> {
        let mut cols = columns;
        for d in ring.defining().gens() {
            for b in 0..gens {
                let mut col = vec![ring.ambient().zero(); gens];
                col[b] = d.clone();
                cols.push(col);
            }
        }
        let relations = FreeSubmodule::new(ring.ambient(), gens, cols)?.canonicalized();
        Ok(PresentedModule {
            ring: ring.clone(),
            gens,
            relations,
        })
    }

    pub fn free(ring: &AffineRing, rank: usize) -> Self {
        PresentedModule::new(ring, rank, Vec::new()).unwrap()
    }

    /// Parse a relation matrix where rows are generators and columns are
    /// relations.
    pub fn parse(ring: &AffineRing, rows: &[&[&str]]) -> Result<Self, CaError> {
        let gens = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut cols = vec![vec![ring.ambient().zero(); gens]; ncols];
        for (i, row) in rows.iter().enumerate() {
            if row.len() != ncols {
                return Err(CaError::RankMismatch {
                    expected: ncols,
                    found: row.len(),
                });
            }
            for (j, s) in row.iter().enumerate() {
                cols[j][i] = ring.ambient().parse(s)?;
            }
        }
        PresentedModule::new(ring, gens, cols)
    }

    pub fn ring(&self) -> &AffineRing {
        &self.ring
    }

    pub fn num_gens(&self) -> usize {
        self.gens
    }

    /// The canonical relation submodule (defining-ideal columns included).
    pub fn relations(&self) -> &FreeSubmodule {
        &self.relations
    }

    pub fn is_zero_module(&self) -> bool {
        self.gens == 0 || self.relations.is_full()
    }

    /// Relation columns as canonical strings, one inner vector per column.
    pub fn relation_strings(&self) -> Vec<Vec<String>> {
        self.relations
            .groebner()
            .iter()
            .map(|col| col.iter().map(|p| p.to_string()).collect())
            .collect()
    }

    /// The presentation with relations replaced by the given submodule.
    fn with_relations(&self, relations: FreeSubmodule) -> PresentedModule {
        PresentedModule {
            ring: self.ring.clone(),
            gens: self.gens,
            relations: relations.canonicalized(),
        }
    }

    /// Membership of an ambient vector in the relation submodule.
    pub fn is_zero_element(&self, v: &[Poly]) -> Result<bool, CaError> {
        self.relations.contains(v)
    }
}

/// A map of presented modules, given by the images of the source generators
/// as vectors in the target's ambient free module.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: PresentedModule,
    pub target: PresentedModule,
    pub images: Vec<Vec<Poly>>,
}

impl ModuleMap {
    pub fn identity(m: &PresentedModule) -> ModuleMap {
        let ring = m.ring().ambient();
        let images = (0..m.num_gens())
            .map(|b| {
                let mut v = vec![ring.zero(); m.num_gens()];
                v[b] = ring.one();
                v
            })
            .collect();
        ModuleMap {
            source: m.clone(),
            target: m.clone(),
            images,
        }
    }

    /// Kernel of the map as a submodule of the source ambient free module.
    pub fn kernel_submodule(&self) -> Result<FreeSubmodule, CaError> {
        let ring = self.source.ring().ambient().clone();
        let g = self.source.num_gens();
        if g == 0 {
            return Ok(FreeSubmodule::zero(&ring, 0));
        }
        if self.target.num_gens() == 0 {
            // everything maps to the zero module
            return Ok(FreeSubmodule::full(&ring, g));
        }
        // generators with an identically zero image column lie in the
        // kernel outright; the rest are stacked against the target
        // relations, with the syzygy coordinates lifted back
        let mut kernel_cols: Vec<Vec<Poly>> = self.source.relations().cols().to_vec();
        let mut live: Vec<usize> = Vec::new();
        let mut cols: Vec<Vec<Poly>> = Vec::new();
        for (b, img) in self.images.iter().enumerate() {
            if img.iter().all(|p| p.is_zero()) {
                let mut unit = vec![ring.zero(); g];
                unit[b] = ring.one();
                kernel_cols.push(unit);
            } else {
                live.push(b);
                cols.push(img.clone());
            }
        }
        let live_count = live.len();
        if live_count > 0 {
            cols.extend(self.target.relations().cols().iter().cloned());
            let stacked = FreeSubmodule::new(&ring, self.target.num_gens(), cols)?;
            let syz = syzygies(&stacked);
            for rel in syz.groebner() {
                let mut col = vec![ring.zero(); g];
                for (k, &b) in live.iter().enumerate() {
                    col[b] = rel[k].clone();
                }
                kernel_cols.push(col);
            }
        }
        Ok(FreeSubmodule::new(&ring, g, kernel_cols)?.canonicalized())
    }

    pub fn is_injective(&self) -> Result<bool, CaError> {
        let kernel = self.kernel_submodule()?;
        self.source.relations().contains_submodule(&kernel)
    }

    /// The image submodule together with the target relations.
    fn image_span(&self) -> Result<FreeSubmodule, CaError> {
        let ring = self.source.ring().ambient().clone();
        let mut cols = self.images.clone();
        cols.extend(self.target.relations().cols().iter().cloned());
        FreeSubmodule::new(&ring, self.target.num_gens(), cols)
    }

    pub fn is_surjective(&self) -> Result<bool, CaError> {
        Ok(self.image_span()?.is_full())
    }

    pub fn is_isomorphism(&self) -> Result<bool, CaError> {
        Ok(self.is_injective()? && self.is_surjective()?)
    }
}

fn check_same_base(m: &PresentedModule, phi: &PhiRing) -> Result<(), DepthError> {
    if m.ring() != phi.ring() {
        return Err(DepthError::Kernel(CaError::RingMismatch(
            "module and support family live over different rings".into(),
        )));
    }
    Ok(())
}

/// Torsion of a presentation with respect to a single ideal: the saturated
/// relation submodule and the stabilization exponent.
fn torsion_submodule(
    m: &PresentedModule,
    ideal: &Ideal,
) -> Result<(FreeSubmodule, usize), CaError> {
    let reduced: Vec<Poly> = ideal
        .gens()
        .iter()
        .map(|g| m.ring().nf(g))
        .collect::<Result<_, _>>()?;
    let lifted = Ideal::new(m.ring().ambient(), reduced)?;
    saturate_submodule(m.relations(), &lifted)
}

/// The torsion submodule `H^0` of `m` and the purified quotient.
pub struct Torsion {
    /// Saturated relation submodule; the torsion is its image in the module.
    pub saturated: FreeSubmodule,
    /// Saturation exponent.
    pub exponent: usize,
    /// Canonical representatives of nonzero torsion generators.
    pub h0_gens: Vec<Vec<Poly>>,
    /// The purified module.
    pub purified: PresentedModule,
}

impl Torsion {
    pub fn is_zero(&self) -> bool {
        self.h0_gens.is_empty()
    }
}

/// `H^0` with respect to the support family: all elements killed by a power
/// of the support product.
pub fn torsion_h0(m: &PresentedModule, phi: &PhiRing) -> Result<Torsion, DepthError> {
    check_same_base(m, phi)?;
    if phi.has_zero_support() && !phi.degenerate_ok() {
        return Err(DepthError::ZeroSupport);
    }
    let (saturated, exponent) = torsion_submodule(m, phi.product())?;
    let h0_gens: Vec<Vec<Poly>> = saturated
        .groebner()
        .iter()
        .filter_map(|col| {
            let rep = m.relations().reduce(col).ok()?;
            (!rep.iter().all(|p| p.is_zero())).then_some(rep)
        })
        .collect();
    let purified = m.with_relations(saturated.clone());
    Ok(Torsion {
        saturated,
        exponent,
        h0_gens,
        purified,
    })
}

/// Quotient by the torsion submodule. Idempotent, and the result is 1-deep.
pub fn purify(m: &PresentedModule, phi: &PhiRing) -> Result<PresentedModule, DepthError> {
    Ok(torsion_h0(m, phi)?.purified)
}

/// `Hom(I, M)` as a presented module, for `M` 1-deep: the r-tuples
/// `(m_1..m_r)` with `f_i m_j = f_j m_i` inside `M^r`, cut out by the cross
/// relations and computed as a module kernel over the presentation.
pub struct HomModule {
    /// Generators of the Hom module as vectors in `F^r = A^(r*g)`.
    pub hom_gens: Vec<Vec<Poly>>,
    /// Presentation of the Hom module over the same ring.
    pub module: PresentedModule,
    /// Image of each generator of `M` under the canonical map
    /// `m -> (f_1 m, ..., f_r m)`, as vectors in `A^(r*g)`.
    pub eval_images: Vec<Vec<Poly>>,
    r: usize,
    g: usize,
}

impl HomModule {
    /// Submodule of `A^(r*g)` spanned by the canonical image of `M` and the
    /// componentwise relations.
    fn image_span(&self, m: &PresentedModule) -> Result<FreeSubmodule, CaError> {
        let ring = m.ring().ambient().clone();
        let mut cols = self.eval_images.clone();
        cols.extend(relations_in_power(m, self.r).cols().iter().cloned());
        FreeSubmodule::new(&ring, self.r * self.g, cols)
    }

    /// Is the canonical map `M -> Hom(I, M)` surjective?
    pub fn eval_is_surjective(&self, m: &PresentedModule) -> Result<bool, CaError> {
        let span = self.image_span(m)?;
        for h in &self.hom_gens {
            if !span.contains(h)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// A Hom generator outside the canonical image, if any.
    pub fn eval_cokernel_witness(&self, m: &PresentedModule) -> Result<Option<Vec<Poly>>, CaError> {
        let span = self.image_span(m)?;
        for h in &self.hom_gens {
            if !span.contains(h)? {
                return Ok(Some(h.clone()));
            }
        }
        Ok(None)
    }
}

/// Relations of `M^r` inside `A^(r*g)`: each relation column of `M` placed
/// in each of the `r` blocks.
fn relations_in_power(m: &PresentedModule, r: usize) -> FreeSubmodule {
    let ring = m.ring().ambient().clone();
    let g = m.num_gens();
    let zero = ring.zero();
    let mut cols = Vec::new();
    for block in 0..r {
        for rel in m.relations().cols() {
            let mut col = vec![zero.clone(); r * g];
            for (b, p) in rel.iter().enumerate() {
                col[block * g + b] = p.clone();
            }
            cols.push(col);
        }
    }
    FreeSubmodule::new(&ring, r * g, cols).unwrap()
}

pub fn hom_from_ideal(ideal: &Ideal, m: &PresentedModule) -> Result<HomModule, DepthError> {
    if ideal.ring() != m.ring().ambient() {
        return Err(DepthError::Kernel(CaError::RingMismatch(
            "ideal and module live over different rings".into(),
        )));
    }
    let ring = m.ring().ambient().clone();
    let fs: Vec<Poly> = ideal.gens().to_vec();
    let r = fs.len();
    let g = m.num_gens();
    let zero = ring.zero();

    if r == 0 || g == 0 {
        // Hom(0, M) = 0 and Hom(I, 0) = 0
        let module = PresentedModule::new(m.ring(), 0, Vec::new())?;
        return Ok(HomModule {
            hom_gens: Vec::new(),
            module,
            eval_images: vec![vec![]; g],
            r,
            g,
        });
    }

    let pairs: Vec<(usize, usize)> = (0..r)
        .flat_map(|i| ((i + 1)..r).map(move |j| (i, j)))
        .collect();
    let p = pairs.len();

    let raw_gens: Vec<Vec<Poly>> = if p == 0 {
        // single generator: no cross conditions, Hom(I, M) = M
        (0..g)
            .map(|b| {
                let mut v = vec![zero.clone(); g];
                v[b] = ring.one();
                v
            })
            .collect()
    } else {
        // kernel of (v_(c,b)) -> ( f_i v_j - f_j v_i mod N )_(i<j)
        let mut cols: Vec<Vec<Poly>> = Vec::new();
        for c in 0..r {
            for b in 0..g {
                let mut col = vec![zero.clone(); p * g];
                for (pi, &(i, j)) in pairs.iter().enumerate() {
                    if c == j {
                        col[pi * g + b] = fs[i].clone();
                    } else if c == i {
                        col[pi * g + b] = fs[j].neg();
                    }
                }
                cols.push(col);
            }
        }
        for pi in 0..p {
            for rel in m.relations().cols() {
                let mut col = vec![zero.clone(); p * g];
                for (b, q) in rel.iter().enumerate() {
                    col[pi * g + b] = q.clone();
                }
                cols.push(col);
            }
        }
        let stacked = FreeSubmodule::new(&ring, p * g, cols)?;
        let syz = syzygies(&stacked);
        syz.groebner().iter().map(|v| v[..r * g].to_vec()).collect()
    };

    // canonical representatives modulo the componentwise relations
    let npow = relations_in_power(m, r);
    let mut hom_gens: Vec<Vec<Poly>> = Vec::new();
    for h in raw_gens {
        let rep = npow.reduce(&h)?;
        if !rep.iter().all(|p| p.is_zero()) && !hom_gens.contains(&rep) {
            hom_gens.push(rep);
        }
    }

    // presentation of the Hom module: relations among its generators
    let k = hom_gens.len();
    let relations: Vec<Vec<Poly>> = if k == 0 {
        Vec::new()
    } else {
        let mut cols = hom_gens.clone();
        cols.extend(npow.cols().iter().cloned());
        let stacked = FreeSubmodule::new(&ring, r * g, cols)?;
        let syz = syzygies(&stacked);
        syz.groebner().iter().map(|v| v[..k].to_vec()).collect()
    };
    let module = PresentedModule::new(m.ring(), k, relations)?;

    let eval_images: Vec<Vec<Poly>> = (0..g)
        .map(|b| {
            let mut v = vec![zero.clone(); r * g];
            for (i, f) in fs.iter().enumerate() {
                v[i * g + b] = f.clone();
            }
            v
        })
        .collect();

    Ok(HomModule {
        hom_gens,
        module,
        eval_images,
        r,
        g,
    })
}

/// Is the canonical map `M -> Hom(I, M)` injective? Its kernel is the
/// module colon `(N : I)`, so this reduces to one colon computation.
fn eval_is_injective(ideal: &Ideal, m: &PresentedModule) -> Result<bool, DepthError> {
    let reduced: Vec<Poly> = ideal
        .gens()
        .iter()
        .map(|g| m.ring().nf(g))
        .collect::<Result<_, _>>()?;
    let lifted = Ideal::new(m.ring().ambient(), reduced)?;
    let quot = colon_submodule(m.relations(), &lifted)?;
    Ok(m.relations().contains_submodule(&quot)?)
}

/// The d-deep decision for `d` in `{1, 2}`.
///
/// `d = 1`: no support torsion. `d = 2`: additionally, for each family
/// member the canonical map into the Hom module is bijective; checking the
/// generating family only suffices.
pub fn is_deep(m: &PresentedModule, d: u8, phi: &PhiRing) -> Result<bool, DepthError> {
    assert!(d == 1 || d == 2, "only degrees 1 and 2 are decided");
    check_same_base(m, phi)?;
    let torsion = torsion_h0(m, phi)?;
    if !torsion.is_zero() {
        return Ok(false);
    }
    if d == 1 {
        return Ok(true);
    }
    for member in phi.phi0() {
        if !eval_is_injective(member, m)? {
            return Ok(false);
        }
        let hom = hom_from_ideal(member, m)?;
        if !hom.eval_is_surjective(m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of a closure computation.
pub struct Closure {
    /// The closure as a presented module.
    pub module: PresentedModule,
    /// The structure map from the purified module into the closure.
    pub map: ModuleMap,
    /// Stabilization step of the colon chain.
    pub steps: usize,
    /// The regular element used for the chain.
    pub regular: Option<Poly>,
    /// Columns of the stabilized chain module: generator `b` of the closure
    /// is the class of `basis_columns[b] / regular^steps`.
    pub basis_columns: Vec<Vec<Poly>>,
}

/// Candidate regular elements: the support generators in order, then the
/// products of consecutive prefixes, ending with the full product.
fn regular_candidates(phi: &PhiRing) -> Vec<Poly> {
    let gens = phi.product().gens();
    let mut out: Vec<Poly> = gens.to_vec();
    if gens.len() > 1 {
        let mut acc = gens[0].clone();
        for g in &gens[1..] {
            acc = acc.mul(g);
            out.push(acc.clone());
        }
    }
    out
}

/// The closure (ideal transform) `M^cl` with its structure map.
///
/// Purifies first, then picks a regular element `f` of the support product
/// and runs the chain `T_0 = F`, `T_{n+1} = (f*T_n + N : P)` until
/// `T_{n+1} <= f*T_n + N`. Since the transform satisfies
/// `D_{n+1} = (D_n : P)` in `M[1/f]`, one stalled step makes the whole
/// chain constant, which certifies the colimit.
pub fn closure(
    m: &PresentedModule,
    phi: &PhiRing,
    max_steps: usize,
) -> Result<Closure, DepthError> {
    check_same_base(m, phi)?;
    let pur = purify(m, phi)?;
    let ring = pur.ring().ambient().clone();
    let g = pur.num_gens();

    if pur.is_zero_module() {
        let zero = pur.with_relations(FreeSubmodule::full(&ring, g));
        let images = (0..g)
            .map(|b| {
                let mut v = vec![ring.zero(); g];
                v[b] = ring.one();
                v
            })
            .collect();
        return Ok(Closure {
            module: zero.clone(),
            map: ModuleMap {
                source: pur,
                target: zero,
                images,
            },
            steps: 0,
            regular: None,
            basis_columns: Vec::new(),
        });
    }

    let regular = regular_candidates(phi)
        .into_iter()
        .find(|f| {
            let principal = Ideal::new(&ring, vec![f.clone()]).unwrap();
            colon_submodule(pur.relations(), &principal)
                .map(|q| pur.relations().contains_submodule(&q).unwrap_or(false))
                .unwrap_or(false)
        })
        .ok_or(DepthError::NoRegularElement)?;

    let product_lifted = Ideal::new(
        &ring,
        phi.product()
            .gens()
            .iter()
            .map(|p| pur.ring().nf(p))
            .collect::<Result<_, _>>()?,
    )?;

    let mut t_current = FreeSubmodule::full(&ring, g);
    let mut f_power = ring.one();
    for step in 0..=max_steps {
        // f * T_n + N
        let mut shifted: Vec<Vec<Poly>> = t_current
            .groebner()
            .iter()
            .map(|col| col.iter().map(|p| p.mul(&regular)).collect())
            .collect();
        shifted.extend(pur.relations().cols().iter().cloned());
        let shifted = FreeSubmodule::new(&ring, g, shifted)?;
        let t_next = colon_submodule(&shifted, &product_lifted)?;
        if shifted.contains_submodule(&t_next)? {
            // stabilized at this step: present D_step on the basis columns
            let t_cols = t_current.groebner().to_vec();
            let k = t_cols.len();
            let relations: Vec<Vec<Poly>> = {
                let mut cols = t_cols.clone();
                cols.extend(pur.relations().cols().iter().cloned());
                let stacked = FreeSubmodule::new(&ring, g, cols)?;
                let syz = syzygies(&stacked);
                syz.groebner().iter().map(|v| v[..k].to_vec()).collect()
            };
            let module = PresentedModule::new(pur.ring(), k, relations)?;
            // structure map: e_b -> f^step * e_b expressed over the basis
            // columns of T_step
            let images = (0..g)
                .map(|b| {
                    let mut v = vec![ring.zero(); g];
                    v[b] = f_power.clone();
                    express_in_basis(&ring, &v, &t_cols)
                })
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(Closure {
                module: module.clone(),
                map: ModuleMap {
                    source: pur,
                    target: module,
                    images,
                },
                steps: step,
                regular: Some(regular),
                basis_columns: t_cols,
            });
        }
        t_current = t_next;
        f_power = f_power.mul(&regular);
    }
    Err(DepthError::NotStabilized(max_steps))
}

/// Express a member of the span of `basis` as a coefficient vector via
/// division with quotient tracking; the basis must be a Gröbner basis.
fn express_in_basis(
    ring: &crate::cakernel::PolyRing,
    v: &[Poly],
    basis: &[Vec<Poly>],
) -> Result<Vec<Poly>, CaError> {
    use crate::cakernel::division_with_quotients;
    let (rem, quots) = division_with_quotients(ring, v, basis)?;
    if !rem.iter().all(|p| p.is_zero()) {
        return Err(CaError::RingMismatch(
            "element does not lie in the span of the basis".into(),
        ));
    }
    Ok(quots)
}

/// Outcome of a Čech vanishing test in degree 0 or 1.
#[derive(Debug)]
pub struct CechOutcome {
    pub is_zero: bool,
    /// Printable description of a nonvanishing class, when one exists.
    pub witness: Option<String>,
}

/// Vanishing of `H^q` with respect to the ideal generated by `gens`, for
/// `q` in `{0, 1}`.
///
/// Degree 0 reduces to the torsion computation; degree 1 holds exactly when
/// the closure structure map of the purified module (with respect to the
/// single-ideal family) is an isomorphism. The map is always injective
/// here, so only surjectivity is tested, and a failing generator is
/// reported as a witness hom class.
pub fn cech_h(
    m: &PresentedModule,
    gens: &[Poly],
    q: u8,
    max_steps: usize,
) -> Result<CechOutcome, DepthError> {
    assert!(q == 0 || q == 1, "only degrees 0 and 1 are decided");
    let ideal = Ideal::new(m.ring().ambient(), gens.to_vec())?;
    let single = PhiRing::new(m.ring().clone(), vec![ideal], true)?;
    if q == 0 {
        let torsion = torsion_h0(m, &single)?;
        let witness = torsion
            .h0_gens
            .first()
            .map(|v| format!("class of {}", fmt_vec(v)));
        return Ok(CechOutcome {
            is_zero: torsion.is_zero(),
            witness,
        });
    }
    let pur = purify(m, &single)?;
    let cl = closure(&pur, &single, max_steps)?;
    if cl.map.is_surjective()? {
        return Ok(CechOutcome {
            is_zero: true,
            witness: None,
        });
    }
    // a closure generator outside the image is a hom class witness
    let span = cl.map.image_span()?;
    let mut witness = None;
    for (idx, col) in cl.basis_columns.iter().enumerate() {
        let mut unit = vec![m.ring().ambient().zero(); cl.module.num_gens()];
        unit[idx] = m.ring().ambient().one();
        if !span.contains(&unit)? {
            let denom = match (&cl.regular, cl.steps) {
                (Some(f), n) if n > 0 => format!(" / ({f})^{n}"),
                _ => String::new(),
            };
            witness = Some(format!("class of {}{}", fmt_vec(col), denom));
            break;
        }
    }
    Ok(CechOutcome {
        is_zero: false,
        witness,
    })
}

fn fmt_vec(v: &[Poly]) -> String {
    let inner: Vec<String> = v.iter().map(|p| p.to_string()).collect();
    format!("({})", inner.join(", "))
}

/// Exactness of the degree-0 Mayer–Vietoris fragment
/// `0 -> H0_{I+I'} -> H0_I + H0_{I'} -> H0_{I*I'}`.
pub fn mv_check(
    m: &PresentedModule,
    i: &Ideal,
    iprime: &Ideal,
    phi: &PhiRing,
) -> Result<bool, DepthError> {
    check_same_base(m, phi)?;
    let (t_sum, _) = torsion_submodule(m, &i.sum(iprime)?)?;
    let (t_i, _) = torsion_submodule(m, i)?;
    let (t_ip, _) = torsion_submodule(m, iprime)?;
    let (t_prod, _) = torsion_submodule(m, &i.product(iprime)?)?;

    // diagonal well-defined and kernel of the difference map equals its image
    let inter = intersect_submodules(&t_i, &t_ip)?;
    let ok = t_i.contains_submodule(&t_sum)?
        && t_ip.contains_submodule(&t_sum)?
        && t_sum.contains_submodule(&inter)?
        && inter.contains_submodule(&t_sum)?
        && t_prod.contains_submodule(&t_i)?
        && t_prod.contains_submodule(&t_ip)?;
    Ok(ok)
}

/// For `I <= J`: if `H^q_I(M)` vanishes for all `q < d`, so does
/// `H^q_J(M)`. Returns the truth of that implication on this instance.
pub fn h_vanishing_transfer_check(
    m: &PresentedModule,
    i: &Ideal,
    j: &Ideal,
    d: u8,
    max_steps: usize,
) -> Result<bool, DepthError> {
    let lifted_j = m.ring().lift_ideal(j.gens())?;
    for g in i.gens() {
        if !lifted_j.contains(g)? {
            return Err(DepthError::Kernel(CaError::RingMismatch(
                "transfer check requires I contained in J".into(),
            )));
        }
    }
    let vanishes = |ideal: &Ideal, q: u8| -> Result<bool, DepthError> {
        Ok(cech_h(m, ideal.gens(), q, max_steps)?.is_zero)
    };
    let degrees: &[u8] = if d >= 2 { &[0, 1] } else { &[0] };
    let mut premise = true;
    for &q in degrees {
        if !vanishes(i, q)? {
            premise = false;
            break;
        }
    }
    if !premise {
        return Ok(true);
    }
    for &q in degrees {
        if !vanishes(j, q)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cakernel::MonomialOrder;

    fn plane_phi() -> PhiRing {
        let a = AffineRing::parse_ring(&["u", "v"], &[], MonomialOrder::GrevLex).unwrap();
        PhiRing::parse(&a, &[&["u", "v"]], false).unwrap()
    }

    fn ideal_uv_module(phi: &PhiRing) -> PresentedModule {
        // the ideal (u,v) as a module: generators e1 -> u, e2 -> v with the
        // Koszul relation (v, -u)
        PresentedModule::parse(phi.ring(), &[&["v"], &["-u"]]).unwrap()
    }

    #[test]
    fn kernels_of_maps_with_zero_images() {
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        // M = A^2 -> A, e1 -> 0, e2 -> u: kernel = A*e1 + (0 : u) = A*e1
        let map = ModuleMap {
            source: PresentedModule::free(phi.ring(), 2),
            target: PresentedModule::free(phi.ring(), 1),
            images: vec![vec![amb.zero()], vec![amb.var(0)]],
        };
        let kernel = map.kernel_submodule().unwrap();
        assert!(kernel.contains(&[amb.one(), amb.zero()]).unwrap());
        assert!(!kernel.contains(&[amb.zero(), amb.one()]).unwrap());
        assert!(!map.is_injective().unwrap());
        // any map into the zero module has full kernel
        let to_zero = ModuleMap {
            source: PresentedModule::free(phi.ring(), 1),
            target: PresentedModule::new(phi.ring(), 0, Vec::new()).unwrap(),
            images: vec![vec![]],
        };
        assert!(to_zero.kernel_submodule().unwrap().is_full());
    }

    #[test]
    fn torsion_of_monomial_quotient() {
        // M = A/(u^2, u*v): the torsion is (u)/(u^2, u*v) and the purified
        // module is A/(u), by the monomial saturation (u^2,u*v):(u,v)^inf=(u)
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let m = PresentedModule::parse(phi.ring(), &[&["u^2", "u*v"]]).unwrap();
        let t = torsion_h0(&m, &phi).unwrap();
        assert!(!t.is_zero());
        assert_eq!(t.h0_gens, vec![vec![amb.var(0)]]);
        let expected = PresentedModule::parse(phi.ring(), &[&["u"]]).unwrap();
        assert_eq!(t.purified, expected);
    }

    #[test]
    fn torsion_over_a_quotient_base() {
        // A = Q[s,t]/(s*t) with supports (s): the s-power torsion of A is
        // the image of (t), and the purification is A/(t)
        let a = AffineRing::parse_ring(&["s", "t"], &["s*t"], MonomialOrder::GrevLex).unwrap();
        let phi = PhiRing::parse(&a, &[&["s"]], false).unwrap();
        let m = PresentedModule::free(&a, 1);
        let torsion = torsion_h0(&m, &phi).unwrap();
        assert_eq!(torsion.h0_gens, vec![vec![a.ambient().var(1)]]);
        let expected = PresentedModule::parse(&a, &[&["t"]]).unwrap();
        assert_eq!(torsion.purified, expected);
        assert!(is_deep(&torsion.purified, 1, &phi).unwrap());
    }

    #[test]
    fn torsion_of_free_module_is_zero() {
        let phi = plane_phi();
        let m = PresentedModule::free(phi.ring(), 1);
        assert!(torsion_h0(&m, &phi).unwrap().is_zero());
    }

    #[test]
    fn torsion_swallows_residue_field() {
        // M = A/(u,v) is pure support torsion
        let phi = plane_phi();
        let m = PresentedModule::parse(phi.ring(), &[&["u", "v"]]).unwrap();
        let t = torsion_h0(&m, &phi).unwrap();
        assert!(!t.is_zero());
        assert!(t.purified.is_zero_module());
    }

    #[test]
    fn purify_is_idempotent_and_one_deep() {
        let phi = plane_phi();
        let cases: [&[&[&str]]; 3] = [&[&["u^2", "u*v"]], &[&["u"]], &[&["u", "v"]]];
        for rows in cases {
            let m = PresentedModule::parse(phi.ring(), rows).unwrap();
            let p = purify(&m, &phi).unwrap();
            assert_eq!(purify(&p, &phi).unwrap(), p);
            assert!(is_deep(&p, 1, &phi).unwrap());
        }
        // a 1-deep module is a fixed point
        let m = PresentedModule::parse(phi.ring(), &[&["u"]]).unwrap();
        assert_eq!(purify(&m, &phi).unwrap(), m);
    }

    #[test]
    fn hom_from_maximal_ideal_into_ring() {
        // Hom((u,v), A) is free of rank one, generated by the inclusion
        // (m0, m1) = (u, v): solving v*m0 = u*m1 is the Koszul syzygy
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let i = Ideal::parse(&amb, &["u", "v"]).unwrap();
        let m = PresentedModule::free(phi.ring(), 1);
        let hom = hom_from_ideal(&i, &m).unwrap();
        assert_eq!(hom.hom_gens, vec![vec![amb.var(0), amb.var(1)]]);
        assert_eq!(hom.module, PresentedModule::free(phi.ring(), 1));
        assert!(hom.eval_is_surjective(&m).unwrap());
    }

    #[test]
    fn hom_from_unit_ideal_is_identity() {
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let i = Ideal::parse(&amb, &["1"]).unwrap();
        let m = PresentedModule::parse(phi.ring(), &[&["u^2", "u*v"]]).unwrap();
        let hom = hom_from_ideal(&i, &m).unwrap();
        assert_eq!(hom.module, m);
        assert!(hom.eval_is_surjective(&m).unwrap());
    }

    #[test]
    fn hom_into_the_ideal_is_strictly_larger() {
        // Hom((u,v), (u,v)) contains the identity hom, which corresponds to
        // the element 1 of the fraction field and is not a multiple of u, v
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let i = Ideal::parse(&amb, &["u", "v"]).unwrap();
        let m = ideal_uv_module(&phi);
        let hom = hom_from_ideal(&i, &m).unwrap();
        // the identity hom (m0, m1) = (e1, e2)
        let one = amb.one();
        let zero = amb.zero();
        let identity_hom = vec![one.clone(), zero.clone(), zero, one];
        assert!(hom.hom_gens.contains(&identity_hom));
        assert!(!hom.eval_is_surjective(&m).unwrap());
        assert_eq!(hom.eval_cokernel_witness(&m).unwrap(), Some(identity_hom));
    }

    #[test]
    fn deepness_of_ring_ideal_and_quotient() {
        let phi = plane_phi();
        assert!(is_deep(&PresentedModule::free(phi.ring(), 1), 2, &phi).unwrap());
        assert!(!is_deep(&ideal_uv_module(&phi), 2, &phi).unwrap());
        assert!(is_deep(&ideal_uv_module(&phi), 1, &phi).unwrap());
        let quot = PresentedModule::parse(phi.ring(), &[&["u"]]).unwrap();
        assert!(is_deep(&quot, 1, &phi).unwrap());
    }

    #[test]
    fn closure_of_the_maximal_ideal_is_the_ring() {
        let phi = plane_phi();
        let m = ideal_uv_module(&phi);
        let cl = closure(&m, &phi, DEFAULT_MAX_STEPS).unwrap();
        assert!(cl.map.is_injective().unwrap());
        assert!(!cl.map.is_surjective().unwrap());
        assert!(is_deep(&cl.module, 2, &phi).unwrap());
        // idempotent: closing again is an isomorphism
        let again = closure(&cl.module, &phi, DEFAULT_MAX_STEPS).unwrap();
        assert!(again.map.is_isomorphism().unwrap());
    }

    #[test]
    fn closure_fixes_two_deep_modules() {
        let phi = plane_phi();
        let m = PresentedModule::free(phi.ring(), 1);
        let cl = closure(&m, &phi, DEFAULT_MAX_STEPS).unwrap();
        assert_eq!(cl.steps, 0);
        assert!(cl.map.is_isomorphism().unwrap());
    }

    #[test]
    fn closure_of_pure_torsion_is_zero() {
        let phi = plane_phi();
        let m = PresentedModule::parse(phi.ring(), &[&["u", "v"]]).unwrap();
        let cl = closure(&m, &phi, DEFAULT_MAX_STEPS).unwrap();
        assert!(cl.module.is_zero_module());
    }

    #[test]
    fn closure_chain_can_fail_to_stabilize() {
        // A/(u) has unbounded transform along v: H^1 is too large
        let phi = plane_phi();
        let m = PresentedModule::parse(phi.ring(), &[&["u"]]).unwrap();
        match closure(&m, &phi, 4) {
            Err(DepthError::NotStabilized(4)) => {}
            other => panic!("expected NotStabilized, got {:?}", other.map(|c| c.steps)),
        }
    }

    #[test]
    fn cech_degree_zero_matches_torsion() {
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let gens = [amb.var(0), amb.var(1)];
        let m = PresentedModule::parse(phi.ring(), &[&["u", "v"]]).unwrap();
        let out = cech_h(&m, &gens, 0, DEFAULT_MAX_STEPS).unwrap();
        assert!(!out.is_zero);
        assert_eq!(out.witness.as_deref(), Some("class of (1)"));
        let free = PresentedModule::free(phi.ring(), 1);
        assert!(cech_h(&free, &gens, 0, DEFAULT_MAX_STEPS).unwrap().is_zero);
    }

    #[test]
    fn cech_degree_one_detects_depth() {
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let gens = [amb.var(0), amb.var(1)];
        // the plane has depth two at the origin
        let free = PresentedModule::free(phi.ring(), 1);
        assert!(cech_h(&free, &gens, 1, DEFAULT_MAX_STEPS).unwrap().is_zero);
        // the ideal (u,v) does not: the witness is the hom sending (u,v) to 1
        let m = ideal_uv_module(&phi);
        let out = cech_h(&m, &gens, 1, DEFAULT_MAX_STEPS).unwrap();
        assert!(!out.is_zero);
        assert!(out.witness.is_some());
    }

    #[test]
    fn mayer_vietoris_fragment() {
        let a = AffineRing::parse_ring(&["u", "v"], &[], MonomialOrder::GrevLex).unwrap();
        let phi = PhiRing::parse(&a, &[&["u", "v"]], false).unwrap();
        let amb = a.ambient().clone();
        let iu = Ideal::parse(&amb, &["u"]).unwrap();
        let iv = Ideal::parse(&amb, &["v"]).unwrap();
        // M = A/(u*v)
        let m = PresentedModule::parse(&a, &[&["u*v"]]).unwrap();
        assert!(mv_check(&m, &iu, &iv, &phi).unwrap());
        // free module: all torsion groups vanish
        let free = PresentedModule::free(&a, 2);
        assert!(mv_check(&free, &iu, &iv, &phi).unwrap());
        // degenerate equal-ideal case on A/(u^2)
        let m = PresentedModule::parse(&a, &[&["u^2"]]).unwrap();
        assert!(mv_check(&m, &iu, &iu, &phi).unwrap());
    }

    #[test]
    fn vanishing_transfers_to_larger_ideals() {
        let phi = plane_phi();
        let amb = phi.ring().ambient().clone();
        let free = PresentedModule::free(phi.ring(), 1);
        // unit ideal has vanishing cohomology in all degrees
        let i = Ideal::parse(&amb, &["u", "v"]).unwrap();
        let j = Ideal::parse(&amb, &["u", "v", "u + 1"]).unwrap();
        assert!(h_vanishing_transfer_check(&free, &i, &j, 2, DEFAULT_MAX_STEPS).unwrap());
        // (u) <= (u,v) at level 1
        let iu = Ideal::parse(&amb, &["u"]).unwrap();
        assert!(h_vanishing_transfer_check(&free, &iu, &i, 1, DEFAULT_MAX_STEPS).unwrap());
        // same-radical pair on the module (u,v): (u,v)^2 <= (u,v)
        let m = ideal_uv_module(&phi);
        let i2 = i.power(2);
        assert!(h_vanishing_transfer_check(&m, &i2, &i, 1, DEFAULT_MAX_STEPS).unwrap());
        // containment violation is rejected
        assert!(h_vanishing_transfer_check(&m, &i, &i2, 1, DEFAULT_MAX_STEPS).is_err());
    }
}
