//! Twisted group algebras `C_alpha[G]` with basis `e_g` and product
//! `e_a e_b = zeta_n^{alpha(a,b)} e_{ab}`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::Cyclotomic;
use crate::cohomology::TwoCocycle;
use crate::error::{Error, Result};
use crate::group::{same_group, GroupRef};

/// Largest order for which associativity is checked on every triple.
pub const EXHAUSTIVE_BOUND: usize = 64;
/// Largest order accepted by [`wedderburn_dims`].
pub const SPECTRAL_BOUND: usize = 256;
pub const DEFAULT_TOL: f64 = 1e-8;
const SAMPLED_TRIPLES: usize = 10_000;

#[derive(Debug, Clone)]
pub struct TwistedGroupAlgebra {
    alpha: TwoCocycle,
}

/// Build `C_alpha[G]`, checking that `e_1` is a unit and that the product
/// is associative (on all triples up to order 64, sampled above).
pub fn build_twisted(group: &GroupRef, alpha: &TwoCocycle) -> Result<TwistedGroupAlgebra> {
    if !same_group(group, alpha.group()) {
        return Err(Error::GroupMismatch);
    }
    let alg = TwistedGroupAlgebra { alpha: alpha.clone() };
    let n = group.order();
    for a in 0..n {
        if alg.mul_basis(0, a) != (a, 0) || alg.mul_basis(a, 0) != (a, 0) {
            return Err(Error::NotACocycle(format!("e_1 is not a unit at element {a}")));
        }
    }
    if n <= EXHAUSTIVE_BOUND {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    alg.check_triple(a, b, c)?;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..SAMPLED_TRIPLES {
            alg.check_triple(rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n))?;
        }
    }
    Ok(alg)
}

impl TwistedGroupAlgebra {
    pub fn group(&self) -> &GroupRef {
        self.alpha.group()
    }

    pub fn cocycle(&self) -> &TwoCocycle {
        &self.alpha
    }

    pub fn dimension(&self) -> usize {
        self.group().order()
    }

    /// `e_a e_b = zeta^k e_c`, returned as `(c, k)`.
    pub fn mul_basis(&self, a: usize, b: usize) -> (usize, u64) {
        (self.group().mul(a, b), self.alpha.exp(a, b))
    }

    fn check_triple(&self, a: usize, b: usize, c: usize) -> Result<()> {
        let m = self.alpha.modulus();
        let (ab, k1) = self.mul_basis(a, b);
        let (l, k2) = self.mul_basis(ab, c);
        let (bc, k3) = self.mul_basis(b, c);
        let (r, k4) = self.mul_basis(a, bc);
        if l != r || (k1 + k2) % m != (k3 + k4) % m {
            return Err(Error::NotACocycle(format!("(e_{a} e_{b}) e_{c} != e_{a} (e_{b} e_{c})")));
        }
        Ok(())
    }

    fn root(&self, k: u64) -> Cyclotomic {
        Cyclotomic::root(self.alpha.modulus(), k as i64)
    }

    pub fn unit(&self) -> Vec<Cyclotomic> {
        let m = self.alpha.modulus();
        let mut v = vec![Cyclotomic::zero(m); self.dimension()];
        v[0] = Cyclotomic::one(m);
        v
    }

    pub fn basis_element(&self, g: usize) -> Vec<Cyclotomic> {
        let m = self.alpha.modulus();
        let mut v = vec![Cyclotomic::zero(m); self.dimension()];
        v[g] = Cyclotomic::one(m);
        v
    }

    /// Exact product of two elements given by coefficient vectors.
    pub fn mul(&self, x: &[Cyclotomic], y: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let n = self.dimension();
        let mut out = vec![Cyclotomic::zero(self.alpha.modulus()); n];
        for (a, xa) in x.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (b, yb) in y.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let (c, k) = self.mul_basis(a, b);
                out[c] = &out[c] + &(&(xa * yb) * &self.root(k));
            }
        }
        out
    }

    /// Exact test `z e_g = e_g z` for every `g`.
    pub fn is_central(&self, z: &[Cyclotomic]) -> bool {
        (0..self.dimension()).all(|g| {
            let e = self.basis_element(g);
            self.mul(z, &e) == self.mul(&e, z)
        })
    }

    /// Matrix of left multiplication by `z` on the basis `e_g`.
    pub fn left_regular(&self, z: &[Complex64]) -> DMatrix<Complex64> {
        let n = self.dimension();
        let mut l = DMatrix::zeros(n, n);
        for (s, &zs) in z.iter().enumerate() {
            if zs == Complex64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..n {
                let (c, _) = self.mul_basis(s, r);
                l[(c, r)] += zs * self.alpha.value(s, r);
            }
        }
        l
    }

    /// `e_t e_s e_t^{-1} = zeta^k e_{t s t^{-1}}`, returned as `(t s t^{-1}, k)`.
    fn conjugation(&self, t: usize, s: usize) -> (usize, u64) {
        let g = self.group();
        let m = self.alpha.modulus();
        let ti = g.inv(t);
        let ts = g.mul(t, s);
        let k = self.alpha.exp(t, s) + self.alpha.exp(ts, ti) + (m - self.alpha.exp(t, ti));
        (g.mul(ts, ti), k % m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    /// Indexed like [`crate::group::FiniteGroup::conjugacy_classes`].
    pub regular: Vec<bool>,
    pub count: usize,
}

/// Classes `<s>` with `alpha(s,r) = alpha(r,s)` for every `r` centralizing
/// `s`. Tested element by element; a class on which the test is not
/// constant is reported as an error.
pub fn alpha_regular(group: &GroupRef, alpha: &TwoCocycle) -> Result<RegularityReport> {
    if !same_group(group, alpha.group()) {
        return Err(Error::GroupMismatch);
    }
    let n = group.order();
    let element: Vec<bool> = (0..n)
        .map(|s| {
            (0..n)
                .filter(|&r| group.mul(s, r) == group.mul(r, s))
                .all(|r| alpha.exp(s, r) == alpha.exp(r, s))
        })
        .collect();
    let mut regular = Vec::with_capacity(group.class_count());
    for (i, class) in group.conjugacy_classes().iter().enumerate() {
        let flag = element[class.representative];
        if class.members.iter().any(|&x| element[x] != flag) {
            return Err(Error::Violation(format!("alpha-regularity is not constant on class {i}")));
        }
        regular.push(flag);
    }
    let count = regular.iter().filter(|&&r| r).count();
    Ok(RegularityReport { regular, count })
}

/// A central element supported on one conjugacy class: coefficient
/// `zeta_n^k` at each listed element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CenterElement {
    pub class: usize,
    pub terms: Vec<(usize, u64)>,
}

impl CenterElement {
    pub fn coefficients(&self, alg: &TwistedGroupAlgebra) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(alg.cocycle().modulus()); alg.dimension()];
        for &(g, k) in &self.terms {
            v[g] = alg.root(k);
        }
        v
    }

    fn complex(&self, alg: &TwistedGroupAlgebra) -> Vec<Complex64> {
        let m = alg.cocycle().modulus() as f64;
        let mut v = vec![Complex64::new(0.0, 0.0); alg.dimension()];
        for &(g, k) in &self.terms {
            v[g] = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / m);
        }
        v
    }
}

/// Basis of the center. Centrality against the generators `e_t` reads
/// `c_{t s t^-1} = lambda(t,s) c_s`, a monomial system: each class carries
/// at most one solution up to scale, found by propagating phases from the
/// representative; an inconsistent cycle forces the class to zero.
pub fn center_basis(alg: &TwistedGroupAlgebra) -> Result<Vec<CenterElement>> {
    let g = alg.group();
    let m = alg.cocycle().modulus();
    let gens = g.generators();
    let mut basis = Vec::new();
    for (ci, class) in g.conjugacy_classes().iter().enumerate() {
        let mut phase: Vec<Option<u64>> = vec![None; g.order()];
        phase[class.representative] = Some(0);
        let mut queue = vec![class.representative];
        let mut consistent = true;
        'bfs: while let Some(s) = queue.pop() {
            let p = phase[s].unwrap_or(0);
            for &t in &gens {
                let (x, k) = alg.conjugation(t, s);
                let want = (p + k) % m;
                match phase[x] {
                    None => {
                        phase[x] = Some(want);
                        queue.push(x);
                    }
                    Some(q) if q != want => {
                        consistent = false;
                        break 'bfs;
                    }
                    _ => {}
                }
            }
        }
        if consistent {
            let terms = class.members.iter().map(|&x| (x, phase[x].unwrap_or(0))).collect();
            basis.push(CenterElement { class: ci, terms });
        }
    }
    let report = alpha_regular(g, alg.cocycle())?;
    if basis.len() != report.count {
        return Err(Error::Violation(format!(
            "center dimension {} differs from alpha-regular class count {}",
            basis.len(),
            report.count
        )));
    }
    Ok(basis)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedderburnProfile {
    pub dims: Vec<usize>,
    pub tol: f64,
    pub seed: u64,
}

/// Block dimensions of `C_alpha[G] = prod M_{d_i}(C)`.
///
/// A random central element `z` acts on block `i` by a scalar, so the
/// Hermitian part of its left-regular matrix has one eigenvalue of
/// multiplicity `d_i^2` per block. Coefficients of `z` are complex so that
/// blocks with conjugate central characters are still separated.
pub fn wedderburn_dims(alg: &TwistedGroupAlgebra, seed: u64, tol: f64) -> Result<WedderburnProfile> {
    let n = alg.dimension();
    if n > SPECTRAL_BOUND {
        return Err(Error::SizeBound(format!("spectral path needs |G| <= {SPECTRAL_BOUND}, got {n}")));
    }
    let basis = center_basis(alg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![Complex64::new(0.0, 0.0); n];
    for b in &basis {
        let t = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        for (zi, bi) in z.iter_mut().zip(b.complex(alg)) {
            *zi += t * bi;
        }
    }
    let l = alg.left_regular(&z);
    let h = (&l + l.adjoint()).scale(0.5);
    let mut eig: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    eig.sort_by(f64::total_cmp);

    let mut sizes = Vec::new();
    let mut run = 1usize;
    for w in eig.windows(2) {
        let gap = w[1] - w[0];
        if gap <= tol {
            run += 1;
            continue;
        }
        if gap <= 10.0 * tol {
            return Err(Error::ClusterAmbiguity { gap, tol, upper: 10.0 * tol });
        }
        sizes.push(run);
        run = 1;
    }
    if n > 0 {
        sizes.push(run);
    }
    let mut dims = Vec::with_capacity(sizes.len());
    for s in sizes {
        let d = (s as f64).sqrt().round() as usize;
        if d * d != s {
            return Err(Error::NonSquareCluster(s));
        }
        dims.push(d);
    }
    dims.sort_unstable();
    let total: usize = dims.iter().map(|d| d * d).sum();
    if total != n || dims.len() != basis.len() {
        return Err(Error::SpectralCheck(format!(
            "{} blocks with sum of squares {total}, expected {} blocks summing to {n}",
            dims.len(),
            basis.len()
        )));
    }
    Ok(WedderburnProfile { dims, tol, seed })
}

/// [`wedderburn_dims`] retried over consecutive seeds on cluster ambiguity.
pub fn wedderburn_dims_retry(alg: &TwistedGroupAlgebra, seed: u64, tol: f64, attempts: u32) -> Result<WedderburnProfile> {
    let mut last = None;
    for i in 0..attempts.max(1) as u64 {
        match wedderburn_dims(alg, seed.wrapping_add(i), tol) {
            Err(e @ Error::ClusterAmbiguity { .. }) => last = Some(e),
            other => return other,
        }
    }
    Err(last.unwrap_or(Error::SpectralCheck("no attempts".into())))
}

/// Multiplicity of `E(C)` in `E(C_alpha[G])` for an additive invariant `E`:
/// the number of alpha-regular classes. Depends only on the class of alpha.
pub fn invariant_copies(alpha: &TwoCocycle) -> Result<usize> {
    Ok(alpha_regular(alpha.group(), alpha)?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::{pairing_cocycle, random_cocycle, schur_multiplier};
    use crate::group::GroupSpec;
    use std::sync::Arc;

    fn group(s: &str) -> GroupRef {
        Arc::new(s.parse::<GroupSpec>().unwrap().build().unwrap())
    }

    #[test]
    fn trivial_twist_is_group_algebra() {
        let s3 = group("symmetric:3");
        let alg = build_twisted(&s3, &TwoCocycle::trivial(s3.clone(), 1)).unwrap();
        assert_eq!(alpha_regular(&s3, alg.cocycle()).unwrap().count, 3);
        let center = center_basis(&alg).unwrap();
        assert_eq!(center.len(), 3);
        for z in &center {
            assert!(z.terms.iter().all(|&(_, k)| k == 0));
            assert!(alg.is_central(&z.coefficients(&alg)));
        }
        assert_eq!(wedderburn_dims(&alg, 1, DEFAULT_TOL).unwrap().dims, vec![1, 1, 2]);
        for n in [2, 3, 5, 7, 12] {
            let g = group(&format!("cyclic:{n}"));
            let alg = build_twisted(&g, &TwoCocycle::trivial(g.clone(), 1)).unwrap();
            assert_eq!(wedderburn_dims(&alg, 0, DEFAULT_TOL).unwrap().dims, vec![1; n]);
        }
    }

    #[test]
    fn central_type() {
        for (m, d) in [(2usize, 2usize), (3, 3)] {
            let alpha = pairing_cocycle(m).unwrap();
            let g = alpha.group().clone();
            let alg = build_twisted(&g, &alpha).unwrap();
            let report = alpha_regular(&g, &alpha).unwrap();
            assert_eq!(report.count, 1);
            assert!(report.regular[g.class_index(0)]);
            let center = center_basis(&alg).unwrap();
            assert_eq!(center.len(), 1);
            assert!(alg.is_central(&center[0].coefficients(&alg)));
            assert_eq!(wedderburn_dims(&alg, 7, DEFAULT_TOL).unwrap().dims, vec![d]);
            assert_eq!(invariant_copies(&alpha).unwrap(), 1);
        }
    }

    #[test]
    fn corrupted_table_is_rejected() {
        let alpha = pairing_cocycle(2).unwrap();
        let g = alpha.group().clone();
        let mut rows = alpha.rows();
        rows[1][2] ^= 1;
        let bad = TwoCocycle::new(g.clone(), 2, rows).unwrap();
        assert!(matches!(build_twisted(&g, &bad), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn d8_nontrivial_class() {
        let d8 = group("dihedral:8");
        let h2 = schur_multiplier(&d8).unwrap();
        let alpha = &h2.section().unwrap()[0];
        let alg = build_twisted(&d8, alpha).unwrap();
        let count = alpha_regular(&d8, alpha).unwrap().count;
        assert!(count < 5);
        let dims = wedderburn_dims(&alg, 3, DEFAULT_TOL).unwrap().dims;
        assert_eq!(dims.len(), count);
        // D8 has a unique nontrivial class, realized by 2-dimensional
        // projective representations only
        assert_eq!(dims, vec![2, 2]);
    }

    #[test]
    fn coboundaries_and_random_cocycles() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in ["symmetric:3", "dihedral:8", "elem_abelian:2,2", "cyclic:2*cyclic:4", "elem_abelian:2,3"] {
            let g = group(spec);
            let n = g.order();
            for _ in 0..4 {
                let d: Vec<u64> = (0..n).map(|i| if i == 0 { 0 } else { rng.gen_range(0..12) }).collect();
                let beta = TwoCocycle::coboundary(g.clone(), 12, &d);
                let alg = build_twisted(&g, &beta).unwrap();
                assert_eq!(center_basis(&alg).unwrap().len(), g.class_count());
                let alpha = random_cocycle(&g, 4, &mut rng).unwrap();
                let alg = build_twisted(&g, &alpha).unwrap();
                let center = center_basis(&alg).unwrap();
                let shifted = alpha.promote(12).unwrap().mul(&beta).unwrap();
                assert_eq!(invariant_copies(&shifted).unwrap(), center.len());
                let prof = wedderburn_dims_retry(&alg, 0, DEFAULT_TOL, 4).unwrap();
                assert_eq!(prof.dims.len(), center.len());
            }
        }
    }
}
