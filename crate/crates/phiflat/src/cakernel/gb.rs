//! Buchberger's algorithm for submodules of free modules.
//!
//! Vectors are dense lists of polynomials, one per free-module component.
//! The module order is position-over-term: component 0 carries the highest
//! priority, ties are broken by the ring's monomial order. Ideals are the
//! rank-one case. The output of [`ModEngine::groebner`] is the reduced
//! Gröbner basis, which is unique for a fixed order, so all downstream
//! results are canonical.

use super::poly::{Poly, PolyRing, Rat, Term};
use num_traits::One;
use std::cmp::Ordering;

pub(crate) type Vect = Vec<Poly>;

pub(crate) struct ModEngine {
    pub ring: PolyRing,
    pub rank: usize,
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn exp_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn exp_sub(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl ModEngine {
    pub fn new(ring: &PolyRing, rank: usize) -> Self {
        ModEngine {
            ring: ring.clone(),
            rank,
        }
    }

    pub fn zero_vect(&self) -> Vect {
        vec![self.ring.zero(); self.rank]
    }

    pub fn unit_vect(&self, c: usize) -> Vect {
        let mut v = self.zero_vect();
        v[c] = self.ring.one();
        v
    }

    pub fn is_zero(&self, v: &Vect) -> bool {
        v.iter().all(|p| p.is_zero())
    }

    /// Position-over-term leading term: the leading term of the first
    /// nonzero component.
    pub fn leading<'a>(&self, v: &'a Vect) -> Option<(usize, &'a Term)> {
        v.iter()
            .enumerate()
            .find(|(_, p)| !p.is_zero())
            .map(|(c, p)| (c, p.leading().unwrap()))
    }

    pub fn add(&self, a: &Vect, b: &Vect) -> Vect {
        a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
    }

    pub fn sub(&self, a: &Vect, b: &Vect) -> Vect {
        a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
    }

    pub fn mul_term(&self, v: &Vect, exp: &[u32], coef: &Rat) -> Vect {
        v.iter().map(|p| p.mul_term(exp, coef)).collect()
    }

    pub fn mul_poly(&self, v: &Vect, f: &Poly) -> Vect {
        v.iter().map(|p| p.mul(f)).collect()
    }

    pub fn monic(&self, v: &Vect) -> Vect {
        match self.leading(v) {
            None => v.clone(),
            Some((_, t)) => {
                let inv = Rat::one() / t.coef.clone();
                v.iter().map(|p| p.scale(&inv)).collect()
            }
        }
    }

    /// Compare two vectors by their leading terms (zero smallest).
    fn cmp_leading(&self, a: &Vect, b: &Vect) -> Ordering {
        match (self.leading(a), self.leading(b)) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some((ca, ta)), Some((cb, tb))) => match cb.cmp(&ca) {
                Ordering::Equal => self.ring.order().cmp_exp(&ta.exp, &tb.exp),
                other => other,
            },
        }
    }

    /// Full normal form: every term of the result is irreducible modulo the
    /// basis. With `quotients`, also accumulates the combination such that
    /// input = sum(quotients[i] * basis[i]) + remainder.
    pub fn normal_form(&self, v: &Vect, basis: &[Vect]) -> Vect {
        self.normal_form_inner(v, basis, None)
    }

    pub fn normal_form_with_quotients(&self, v: &Vect, basis: &[Vect]) -> (Vect, Vec<Poly>) {
        let mut quots = vec![self.ring.zero(); basis.len()];
        let rem = self.normal_form_inner(v, basis, Some(&mut quots));
        (rem, quots)
    }

    fn normal_form_inner(
        &self,
        v: &Vect,
        basis: &[Vect],
        mut quots: Option<&mut Vec<Poly>>,
    ) -> Vect {
        let mut work = v.clone();
        let mut rem = self.zero_vect();
        'outer: while let Some((c, t)) = self.leading(&work) {
            let (t_exp, t_coef) = (t.exp.clone(), t.coef.clone());
            for (i, g) in basis.iter().enumerate() {
                if let Some((gc, gt)) = self.leading(g) {
                    if gc == c && divides(&gt.exp, &t_exp) {
                        let q_exp = exp_sub(&t_exp, &gt.exp);
                        let q_coef = &t_coef / &gt.coef;
                        work = self.sub(&work, &self.mul_term(g, &q_exp, &q_coef));
                        if let Some(qs) = quots.as_deref_mut() {
                            let m = self.ring.monomial(q_exp, q_coef);
                            qs[i] = qs[i].add(&m);
                        }
                        continue 'outer;
                    }
                }
            }
            // irreducible leading term: move it to the remainder
            let m = self.ring.monomial(t_exp, t_coef);
            rem[c] = rem[c].add(&m);
            work[c] = work[c].sub(&m);
        }
        rem
    }

    fn spair(&self, a: &Vect, b: &Vect) -> Vect {
        let (ca, ta) = self.leading(a).expect("spair of zero vector");
        let (cb, tb) = self.leading(b).expect("spair of zero vector");
        debug_assert_eq!(ca, cb);
        let l = exp_lcm(&ta.exp, &tb.exp);
        let qa = exp_sub(&l, &ta.exp);
        let qb = exp_sub(&l, &tb.exp);
        let ia = Rat::one() / ta.coef.clone();
        let ib = Rat::one() / tb.coef.clone();
        self.sub(&self.mul_term(a, &qa, &ia), &self.mul_term(b, &qb, &ib))
    }

    /// Reduced Gröbner basis of the submodule generated by `gens`.
    pub fn groebner(&self, gens: &[Vect]) -> Vec<Vect> {
        let mut basis: Vec<Vect> = gens
            .iter()
            .filter(|v| !self.is_zero(v))
            .map(|v| self.monic(v))
            .collect();
        basis.sort_by(|a, b| self.cmp_leading(a, b));
        basis.dedup();
        if basis.is_empty() {
            return Vec::new();
        }

        // pending S-pairs as (i, j) indices into basis
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for j in 1..basis.len() {
            for i in 0..j {
                pairs.push((i, j));
            }
        }

        while !pairs.is_empty() {
            // normal selection: smallest lcm of leading monomials first
            let mut best = 0usize;
            for k in 1..pairs.len() {
                if self.pair_cmp(&basis, pairs[k], pairs[best]) == Ordering::Less {
                    best = k;
                }
            }
            let (i, j) = pairs.swap_remove(best);
            let (ci, ti) = self.leading(&basis[i]).unwrap();
            let (cj, tj) = self.leading(&basis[j]).unwrap();
            if ci != cj {
                continue;
            }
            // product criterion, valid in the ideal case only
            if self.rank == 1 {
                let l = exp_lcm(&ti.exp, &tj.exp);
                let prod: Vec<u32> = ti.exp.iter().zip(&tj.exp).map(|(x, y)| x + y).collect();
                if l == prod {
                    continue;
                }
            }
            let s = self.spair(&basis[i], &basis[j]);
            let rem = self.normal_form(&s, &basis);
            if !self.is_zero(&rem) {
                let rem = self.monic(&rem);
                let new = basis.len();
                basis.push(rem);
                for i in 0..new {
                    pairs.push((i, new));
                }
            }
        }
        self.reduce_basis(basis)
    }

    /// Pair preference for the selection strategy.
    fn pair_cmp(&self, basis: &[Vect], p: (usize, usize), q: (usize, usize)) -> Ordering {
        let key = |(i, j): (usize, usize)| {
            let (ci, ti) = self.leading(&basis[i]).unwrap();
            let (cj, tj) = self.leading(&basis[j]).unwrap();
            if ci != cj {
                return None;
            }
            Some((ci, exp_lcm(&ti.exp, &tj.exp)))
        };
        match (key(p), key(q)) {
            (None, None) => p.cmp(&q),
            (None, Some(_)) => Ordering::Less, // discardable pairs drain first
            (Some(_), None) => Ordering::Greater,
            (Some((cp, lp)), Some((cq, lq))) => {
                let dp: u64 = lp.iter().map(|&e| e as u64).sum();
                let dq: u64 = lq.iter().map(|&e| e as u64).sum();
                dp.cmp(&dq)
                    .then(cp.cmp(&cq))
                    .then(self.ring.order().cmp_exp(&lp, &lq))
                    .then(p.cmp(&q))
            }
        }
    }

    /// Minimalize and interreduce; sort descending by leading term.
    fn reduce_basis(&self, mut basis: Vec<Vect>) -> Vec<Vect> {
        // minimal: drop any element whose leading term is divisible by the
        // leading term of another element
        let mut keep = vec![true; basis.len()];
        for i in 0..basis.len() {
            if !keep[i] {
                continue;
            }
            let (ci, ti) = self.leading(&basis[i]).unwrap();
            let (ci, ti_exp) = (ci, ti.exp.clone());
            for j in 0..basis.len() {
                if i == j || !keep[j] {
                    continue;
                }
                let (cj, tj) = self.leading(&basis[j]).unwrap();
                if cj == ci && divides(&tj.exp, &ti_exp) {
                    // prefer to keep j; on equal leading monomials keep the
                    // earlier element
                    if tj.exp == ti_exp && j > i {
                        continue;
                    }
                    keep[i] = false;
                    break;
                }
            }
        }
        let mut minimal: Vec<Vect> = basis
            .drain(..)
            .zip(keep)
            .filter_map(|(v, k)| k.then_some(v))
            .collect();

        // interreduce tails
        loop {
            let mut changed = false;
            for i in 0..minimal.len() {
                let others: Vec<Vect> = minimal
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| v.clone())
                    .collect();
                let red = self.monic(&self.normal_form(&minimal[i], &others));
                if red != minimal[i] {
                    minimal[i] = red;
                    changed = true;
                }
            }
            minimal.retain(|v| !self.is_zero(v));
            if !changed {
                break;
            }
        }
        minimal.sort_by(|a, b| self.cmp_leading(b, a));
        minimal
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cakernel::MonomialOrder;

    fn ring2(order: MonomialOrder) -> PolyRing {
        PolyRing::new(&["u", "v"], order).unwrap()
    }

    fn ideal_gb(ring: &PolyRing, gens: &[&str]) -> Vec<String> {
        let eng = ModEngine::new(ring, 1);
        let vs: Vec<Vect> = gens.iter().map(|s| vec![ring.parse(s).unwrap()]).collect();
        eng.groebner(&vs).iter().map(|v| v[0].to_string()).collect()
    }

    #[test]
    fn already_reduced_pair_of_variables() {
        let r = ring2(MonomialOrder::GrevLex);
        assert_eq!(ideal_gb(&r, &["u", "v"]), vec!["u", "v"]);
    }

    #[test]
    fn unit_ideal() {
        let r = ring2(MonomialOrder::GrevLex);
        assert_eq!(ideal_gb(&r, &["1"]), vec!["1"]);
        assert_eq!(ideal_gb(&r, &["u", "u - 1"]), vec!["1"]);
    }

    #[test]
    fn lex_basis_of_twisted_cubic_style_ideal() {
        let r = ring2(MonomialOrder::Lex);
        // hand-checked: S-pairs of {u^2 - v, u*v, v^2} all reduce to zero and
        // u^3 = u*(u^2 - v) + u*v
        assert_eq!(
            ideal_gb(&r, &["u^2 - v", "u^3"]),
            vec!["u^2 - v", "u*v", "v^2"]
        );
    }

    #[test]
    fn groebner_is_idempotent() {
        let r = ring2(MonomialOrder::GrevLex);
        let first = ideal_gb(&r, &["u^2 - v", "u^3"]);
        let refs: Vec<&str> = first.iter().map(|s| s.as_str()).collect();
        assert_eq!(ideal_gb(&r, &refs), first);
    }

    #[test]
    fn module_gb_koszul_syzygy_shape() {
        // submodule of A^2 generated by (v, -u): already a reduced basis
        let r = ring2(MonomialOrder::GrevLex);
        let eng = ModEngine::new(&r, 2);
        let col = vec![r.parse("v").unwrap(), r.parse("-u").unwrap()];
        let gb = eng.groebner(std::slice::from_ref(&col));
        assert_eq!(gb.len(), 1);
        assert_eq!(gb[0][0].to_string(), "v");
        assert_eq!(gb[0][1].to_string(), "-u");
    }

    #[test]
    fn normal_form_reduces_every_term() {
        let r = ring2(MonomialOrder::GrevLex);
        let eng = ModEngine::new(&r, 1);
        let basis = vec![vec![r.parse("u").unwrap()], vec![r.parse("v").unwrap()]];
        let f = vec![r.parse("u^2 + v").unwrap()];
        assert!(eng.is_zero(&eng.normal_form(&f, &basis)));
        let g = vec![r.parse("u + 1").unwrap()];
        assert_eq!(eng.normal_form(&g, &basis)[0].to_string(), "1");
    }

    #[test]
    fn quotient_tracking_reconstructs_input() {
        let r = ring2(MonomialOrder::GrevLex);
        let eng = ModEngine::new(&r, 1);
        let basis = eng.groebner(&[
            vec![r.parse("u^2 - v").unwrap()],
            vec![r.parse("u*v - 1").unwrap()],
        ]);
        let f = vec![r.parse("u^4*v - u + 3").unwrap()];
        let (rem, quots) = eng.normal_form_with_quotients(&f, &basis);
        let mut recomposed = rem.clone();
        for (q, b) in quots.iter().zip(&basis) {
            recomposed = eng.add(&recomposed, &eng.mul_poly(b, q));
        }
        assert_eq!(recomposed, f);
    }
}
