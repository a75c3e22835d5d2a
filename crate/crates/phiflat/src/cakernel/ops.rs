//! Syzygies, kernels, colon ideals and saturation.
//!
//! Everything here reduces to one primitive: a Gröbner basis of an extended
//! module in which tag components record coefficient combinations. With the
//! position-over-term order prioritizing the original components, the basis
//! elements whose original part vanishes generate exactly the relation
//! module, so no transformation-matrix bookkeeping is needed.

use super::gb::{ModEngine, Vect};
use super::ideal::Ideal;
use super::module::FreeSubmodule;
use super::poly::{Poly, PolyRing};
use super::CaError;

/// Generators of the full relation module of the columns of `m`: all
/// `c` with `sum(c[i] * cols[i]) = 0`.
pub fn syzygies(m: &FreeSubmodule) -> FreeSubmodule {
    let ring = m.ring().clone();
    let g = m.rank();
    let s = m.cols().len();
    if s == 0 {
        return FreeSubmodule::zero(&ring, 0);
    }
    let eng = ModEngine::new(&ring, g + s);
    let ext: Vec<Vect> = m
        .cols()
        .iter()
        .enumerate()
        .map(|(i, col)| {
            let mut v: Vect = col.clone();
            v.extend((0..s).map(|j| if j == i { ring.one() } else { ring.zero() }));
            v
        })
        .collect();
    let gb = eng.groebner(&ext);
    let syz: Vec<Vect> = gb
        .into_iter()
        .filter(|v| v[..g].iter().all(|p| p.is_zero()))
        .map(|v| v[g..].to_vec())
        .collect();
    FreeSubmodule::new(&ring, s, syz).unwrap()
}

/// Kernel of the module map `A^n -> A^m` given by an `m x n` matrix
/// (`matrix[i][j]` in row `i`, column `j`).
pub fn module_kernel(ring: &PolyRing, matrix: &[Vec<Poly>]) -> Result<FreeSubmodule, CaError> {
    let m = matrix.len();
    let n = if m == 0 { 0 } else { matrix[0].len() };
    for row in matrix {
        if row.len() != n {
            return Err(CaError::RankMismatch {
                expected: n,
                found: row.len(),
            });
        }
    }
    if n == 0 {
        return Ok(FreeSubmodule::zero(ring, 0));
    }
    if m == 0 {
        return Ok(FreeSubmodule::full(ring, n));
    }
    // zero columns contribute unit vectors to the kernel directly; the
    // syzygies of the remaining columns are lifted back to the original
    // indexing
    let eng = ModEngine::new(ring, m);
    let mut kernel_cols: Vec<Vect> = Vec::new();
    let mut live: Vec<usize> = Vec::new();
    let mut live_cols: Vec<Vect> = Vec::new();
    for j in 0..n {
        let col: Vect = (0..m).map(|i| matrix[i][j].clone()).collect();
        if eng.is_zero(&col) {
            let mut unit = vec![ring.zero(); n];
            unit[j] = ring.one();
            kernel_cols.push(unit);
        } else {
            live.push(j);
            live_cols.push(col);
        }
    }
    if !live.is_empty() {
        let as_module = FreeSubmodule::new(ring, m, live_cols)?;
        for rel in syzygies(&as_module).groebner() {
            let mut col = vec![ring.zero(); n];
            for (k, &j) in live.iter().enumerate() {
                col[j] = rel[k].clone();
            }
            kernel_cols.push(col);
        }
    }
    Ok(FreeSubmodule::new(ring, n, kernel_cols)?.canonicalized())
}

/// The ideal quotient `(I : J) = { f | f*J <= I }`.
pub fn colon_ideal(i: &Ideal, j: &Ideal) -> Result<Ideal, CaError> {
    if i.ring() != j.ring() {
        return Err(CaError::RingMismatch("colon: ring mismatch".into()));
    }
    let ring = i.ring().clone();
    if j.gens().is_empty() {
        // (I : 0) is the unit ideal
        return Ok(Ideal::unit(&ring));
    }
    let n = colon_submodule(&ideal_as_submodule(i), j)?;
    let gens = n.groebner().iter().map(|v| v[0].clone()).collect();
    Ok(Ideal::new(&ring, gens)?.canonicalized())
}

/// The module quotient `(N : J) = { v in A^rank | J*v <= N }`.
pub fn colon_submodule(n: &FreeSubmodule, j: &Ideal) -> Result<FreeSubmodule, CaError> {
    if n.ring() != j.ring() {
        return Err(CaError::RingMismatch("colon: ring mismatch".into()));
    }
    let ring = n.ring().clone();
    let g = n.rank();
    let hs = j.gens();
    let t = hs.len();
    if t == 0 {
        return Ok(FreeSubmodule::full(&ring, g));
    }
    let s = n.cols().len();
    // kernel of A^(g + s*t) -> A^(g*t):
    //   (v, c) |-> ( h_j * v - sum_i c_{j,i} n_i )_j
    let zero = ring.zero();
    let mut cols: Vec<Vect> = Vec::with_capacity(g + s * t);
    for b in 0..g {
        let mut col = vec![zero.clone(); g * t];
        for (jj, h) in hs.iter().enumerate() {
            col[jj * g + b] = h.clone();
        }
        cols.push(col);
    }
    for jj in 0..t {
        for ncol in n.cols() {
            let mut col = vec![zero.clone(); g * t];
            for (b, entry) in ncol.iter().enumerate() {
                col[jj * g + b] = entry.neg();
            }
            cols.push(col);
        }
    }
    let stacked = FreeSubmodule::new(&ring, g * t, cols)?;
    let ker = syzygies(&stacked);
    let mut result_cols: Vec<Vect> = ker.groebner().iter().map(|v| v[..g].to_vec()).collect();
    // N itself always sits inside the quotient
    result_cols.extend(n.cols().iter().cloned());
    Ok(FreeSubmodule::new(&ring, g, result_cols)?.canonicalized())
}

/// Saturation `(I : J^infinity)` by iterated colon, with the smallest
/// exponent at which the chain stabilizes.
pub fn saturate_ideal(i: &Ideal, j: &Ideal) -> Result<(Ideal, usize), CaError> {
    let mut current = i.canonicalized();
    for step in 0..usize::MAX {
        let next = colon_ideal(&current, j)?;
        if next == current {
            return Ok((current, step));
        }
        current = next;
    }
    unreachable!("saturation chain in a noetherian ring stabilizes")
}

/// Saturation `(N : J^infinity)` of a submodule, with stabilization exponent.
pub fn saturate_submodule(n: &FreeSubmodule, j: &Ideal) -> Result<(FreeSubmodule, usize), CaError> {
    let mut current = n.canonicalized();
    for step in 0..usize::MAX {
        let next = colon_submodule(&current, j)?;
        if next == current {
            return Ok((current, step));
        }
        current = next;
    }
    unreachable!("saturation chain in a noetherian ring stabilizes")
}

/// Does some power of `f` lie in `I`? Decided by saturation: the answer is
/// yes exactly when `(I : f^infinity)` is the unit ideal.
pub fn radical_member(f: &Poly, i: &Ideal) -> Result<bool, CaError> {
    if f.ring() != i.ring() {
        return Err(CaError::RingMismatch(
            "radical membership: ring mismatch".into(),
        ));
    }
    if f.is_zero() {
        return Ok(true);
    }
    let principal = Ideal::new(f.ring(), vec![f.clone()])?;
    let (sat, _) = saturate_ideal(i, &principal)?;
    Ok(sat.is_unit())
}

/// Intersection of two submodules of the same free module.
pub fn intersect_submodules(
    u: &FreeSubmodule,
    v: &FreeSubmodule,
) -> Result<FreeSubmodule, CaError> {
    if u.ring() != v.ring() || u.rank() != v.rank() {
        return Err(CaError::RingMismatch(
            "intersection: module mismatch".into(),
        ));
    }
    let ring = u.ring().clone();
    let g = u.rank();
    // w in U cap V  <=>  w = U c = V d: read w off the U-part of the
    // syzygies of the concatenated columns [U | -V]
    let mut cols: Vec<Vect> = u.cols().to_vec();
    cols.extend(
        v.cols()
            .iter()
            .map(|c| c.iter().map(|p| p.neg()).collect::<Vect>()),
    );
    let stacked = FreeSubmodule::new(&ring, g, cols)?;
    let syz = syzygies(&stacked);
    let eng = ModEngine::new(&ring, g);
    let su = u.cols().len();
    let mut out: Vec<Vect> = Vec::new();
    for rel in syz.groebner() {
        let mut w = eng.zero_vect();
        for (c, ucol) in rel[..su].iter().zip(u.cols()) {
            w = eng.add(&w, &eng.mul_poly(ucol, c));
        }
        if !eng.is_zero(&w) {
            out.push(w);
        }
    }
    Ok(FreeSubmodule::new(&ring, g, out)?.canonicalized())
}

/// Divide a vector by a module Gröbner basis, returning the remainder and
/// the quotient coefficients: `v = sum(quotients[i] * basis[i]) + remainder`.
pub fn division_with_quotients(
    ring: &PolyRing,
    v: &[Poly],
    basis: &[Vec<Poly>],
) -> Result<(Vec<Poly>, Vec<Poly>), CaError> {
    let rank = v.len();
    for col in basis {
        if col.len() != rank {
            return Err(CaError::RankMismatch {
                expected: rank,
                found: col.len(),
            });
        }
    }
    let eng = ModEngine::new(ring, rank);
    let basis: Vec<Vect> = basis.to_vec();
    Ok(eng.normal_form_with_quotients(&v.to_vec(), &basis))
}

fn ideal_as_submodule(i: &Ideal) -> FreeSubmodule {
    FreeSubmodule::new(
        i.ring(),
        1,
        i.gens().iter().map(|g| vec![g.clone()]).collect(),
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cakernel::MonomialOrder;

    fn ring() -> PolyRing {
        PolyRing::new(&["u", "v"], MonomialOrder::GrevLex).unwrap()
    }

    #[test]
    fn koszul_syzygy_of_two_variables() {
        // elementwise: c0*u + c1*v = 0 over QQ[u,v] forces (c0,c1) in ((v,-u))
        let r = ring();
        let m = FreeSubmodule::new(&r, 1, vec![vec![r.var(0)], vec![r.var(1)]]).unwrap();
        let syz = syzygies(&m);
        let gb = syz.groebner();
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0][0].to_string(), "v");
        assert_eq!(gb[0][1].to_string(), "-u");
    }

    #[test]
    fn syzygy_of_nonzerodivisor_is_zero() {
        let r = ring();
        let m = FreeSubmodule::new(&r, 1, vec![vec![r.var(0)]]).unwrap();
        assert!(syzygies(&m).is_zero_module());
    }

    #[test]
    fn syzygy_with_unit_column() {
        let r = ring();
        let m = FreeSubmodule::new(&r, 1, vec![vec![r.one()], vec![r.var(0)]]).unwrap();
        let syz = syzygies(&m);
        // generated by (u, -1), up to monic normalization
        assert!(syz.contains(&[r.var(0), r.parse("-1").unwrap()]).unwrap());
        assert_eq!(syz.groebner().len(), 1);
    }

    #[test]
    fn kernel_matches_syzygies_and_trivial_cases() {
        let r = ring();
        // 1x2 matrix [u v]
        let k = module_kernel(&r, &[vec![r.var(0), r.var(1)]]).unwrap();
        assert!(k.contains(&[r.var(1), r.var(0).neg()]).unwrap());
        assert_eq!(k.groebner().len(), 1);
        // identity 2x2
        let id = module_kernel(&r, &[vec![r.one(), r.zero()], vec![r.zero(), r.one()]]).unwrap();
        assert!(id.is_zero_module());
        // zero 1x1: the kernel is the whole rank-one free module
        let z = module_kernel(&r, &[vec![r.zero()]]).unwrap();
        assert_eq!(z.rank(), 1);
        assert!(z.is_full());
        // a zero column among nonzero ones contributes its unit vector
        let mixed = module_kernel(&r, &[vec![r.var(0), r.zero(), r.var(1)]]).unwrap();
        assert_eq!(mixed.rank(), 3);
        assert!(mixed.contains(&[r.zero(), r.one(), r.zero()]).unwrap());
        assert!(mixed
            .contains(&[r.var(1), r.zero(), r.var(0).neg()])
            .unwrap());
        assert!(!mixed.contains(&[r.one(), r.zero(), r.zero()]).unwrap());
    }

    #[test]
    fn colon_examples() {
        let r = ring();
        // ((u^2, u*v) : (u)) = (u, v): u*u = u^2 and v*u = u*v, while 1*u is
        // not in the ideal
        let i = Ideal::parse(&r, &["u^2", "u*v"]).unwrap();
        let j = Ideal::parse(&r, &["u"]).unwrap();
        assert_eq!(
            colon_ideal(&i, &j).unwrap(),
            Ideal::parse(&r, &["u", "v"]).unwrap()
        );
        // colon by the unit ideal is the identity
        let p = Ideal::parse(&r, &["u"]).unwrap();
        assert_eq!(colon_ideal(&p, &Ideal::unit(&r)).unwrap(), p);
        // domain: (0 : u) = 0
        let z = Ideal::zero(&r);
        assert!(colon_ideal(&z, &j).unwrap().is_zero());
    }

    #[test]
    fn saturation_examples() {
        let r = ring();
        // (u^2*v : v^inf) = (u^2), one step
        let i = Ideal::parse(&r, &["u^2*v"]).unwrap();
        let v = Ideal::parse(&r, &["v"]).unwrap();
        let (sat, n) = saturate_ideal(&i, &v).unwrap();
        assert_eq!(sat, Ideal::parse(&r, &["u^2"]).unwrap());
        assert_eq!(n, 1);
        // saturation by the unit ideal stabilizes immediately
        let (sat, n) = saturate_ideal(&i, &Ideal::unit(&r)).unwrap();
        assert_eq!(sat, i);
        assert_eq!(n, 0);
        // ((u^2, u*v) : (u,v)^inf) = (u): primary-free part of the monomial
        // ideal, one step
        let i = Ideal::parse(&r, &["u^2", "u*v"]).unwrap();
        let m = Ideal::parse(&r, &["u", "v"]).unwrap();
        let (sat, n) = saturate_ideal(&i, &m).unwrap();
        assert_eq!(sat, Ideal::parse(&r, &["u"]).unwrap());
        assert_eq!(n, 1);
    }

    #[test]
    fn radical_membership_examples() {
        let r = ring();
        let i = Ideal::parse(&r, &["u^2"]).unwrap();
        assert!(radical_member(&r.var(0), &i).unwrap());
        assert!(!radical_member(&r.var(1), &i).unwrap());
        // (u+v)^3 lies in (u^2, v^2): expanding gives u^3+3u^2v+3uv^2+v^3,
        // every term divisible by u^2 or v^2
        let i = Ideal::parse(&r, &["u^2", "v^2"]).unwrap();
        let f = r.parse("u + v").unwrap();
        let cube = f.pow(3);
        assert!(i.contains(&cube).unwrap());
        assert!(radical_member(&f, &i).unwrap());
    }

    #[test]
    fn colon_galois_relation() {
        // J * (I : J) <= I on a handful of ideals
        let r = ring();
        let cases = [
            (vec!["u^2", "u*v"], vec!["u"]),
            (vec!["u^2 - v"], vec!["u", "v"]),
            (vec!["u*v"], vec!["u + v"]),
        ];
        for (igens, jgens) in cases {
            let i = Ideal::parse(&r, &igens).unwrap();
            let j = Ideal::parse(&r, &jgens).unwrap();
            let q = colon_ideal(&i, &j).unwrap();
            for a in q.gens() {
                for b in j.gens() {
                    assert!(i.contains(&a.mul(b)).unwrap());
                }
            }
        }
    }

    #[test]
    fn submodule_saturation_kills_torsion_column() {
        let r = PolyRing::new(&["t"], MonomialOrder::GrevLex).unwrap();
        // presentation of A + A/(t): relation column (0, t)
        let n = FreeSubmodule::new(&r, 2, vec![vec![r.zero(), r.var(0)]]).unwrap();
        let t = Ideal::parse(&r, &["t"]).unwrap();
        let (sat, steps) = saturate_submodule(&n, &t).unwrap();
        assert_eq!(steps, 1);
        assert!(sat.contains(&[r.zero(), r.one()]).unwrap());
        assert!(!sat.contains(&[r.one(), r.zero()]).unwrap());
    }

    #[test]
    fn intersection_of_submodules() {
        let r = ring();
        let u = FreeSubmodule::new(&r, 1, vec![vec![r.var(0)]]).unwrap();
        let v = FreeSubmodule::new(&r, 1, vec![vec![r.var(1)]]).unwrap();
        let w = intersect_submodules(&u, &v).unwrap();
        assert!(w.contains(&[r.parse("u*v").unwrap()]).unwrap());
        assert!(!w.contains(&[r.var(0)]).unwrap());
    }
}
