//! Normalized 2-cocycles with values in `mu_n`, stored as exponents mod `n`.

mod frame;
mod schur;

pub use frame::GeneratorFrame;
pub use schur::{
    class_of, relation_module_invariants, schur_multiplier, schur_multiplier_with, CohomClass, SchurMultiplier,
    SchurRoute, DEFAULT_COCHAIN_BOUND,
};

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::{HowellBasis, ModMatrix};
use crate::error::{Error, Result};
use crate::group::{construct_group, same_group, GroupRef, GroupSpec};

/// Largest `|G|^2` accepted by [`cocycle_space`].
pub const COCYCLE_SPACE_BOUND: usize = 4096;

#[derive(Debug, Clone)]
pub struct TwoCocycle {
    group: GroupRef,
    modulus: u64,
    table: Vec<u64>,
}

impl PartialEq for TwoCocycle {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.table == other.table && same_group(&self.group, &other.group)
    }
}

impl Eq for TwoCocycle {}

/// First failure found by [`TwoCocycle::check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CocycleViolation {
    NotNormalized { a: usize, b: usize },
    Identity { tau: usize, rho: usize, sigma: usize },
}

impl fmt::Display for CocycleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CocycleViolation::NotNormalized { a, b } => write!(f, "entry ({a},{b}) breaks normalization"),
            CocycleViolation::Identity { tau, rho, sigma } => {
                write!(f, "cocycle identity fails at (tau,rho,sigma) = ({tau},{rho},{sigma})")
            }
        }
    }
}

impl TwoCocycle {
    /// Wrap an exponent table; entries are reduced mod `modulus`. Only the
    /// shape is checked here, see [`TwoCocycle::check`].
    pub fn new(group: GroupRef, modulus: u64, rows: Vec<Vec<u64>>) -> Result<Self> {
        let n = group.order();
        if modulus == 0 {
            return Err(Error::Parse("modulus must be positive".into()));
        }
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse(format!("exponent table must be {n}x{n}")));
        }
        let table = rows.into_iter().flatten().map(|x| x % modulus).collect();
        Ok(TwoCocycle { group, modulus, table })
    }

    pub(crate) fn from_flat(group: GroupRef, modulus: u64, table: Vec<u64>) -> Self {
        debug_assert_eq!(table.len(), group.order() * group.order());
        TwoCocycle { group, modulus, table }
    }

    pub fn trivial(group: GroupRef, modulus: u64) -> Self {
        let n = group.order();
        TwoCocycle { group, modulus, table: vec![0; n * n] }
    }

    /// Coboundary `e(a,b) = d(a) + d(b) - d(ab)` of a normalized cochain.
    pub fn coboundary(group: GroupRef, modulus: u64, d: &[u64]) -> Self {
        let n = group.order();
        assert_eq!(d.len(), n);
        let m = modulus as i128;
        let mut table = vec![0u64; n * n];
        for a in 0..n {
            for b in 0..n {
                let v = d[a] as i128 + d[b] as i128 - d[group.mul(a, b)] as i128 - d[0] as i128;
                table[a * n + b] = v.rem_euclid(m) as u64;
            }
        }
        TwoCocycle { group, modulus, table }
    }

    pub fn group(&self) -> &GroupRef {
        &self.group
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn exp(&self, a: usize, b: usize) -> u64 {
        self.table[a * self.group.order() + b]
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.table.chunks(self.group.order().max(1)).map(|c| c.to_vec()).collect()
    }

    /// `exp(2 pi i e(a,b) / n)`.
    pub fn value(&self, a: usize, b: usize) -> Complex64 {
        let t = self.exp(a, b) as f64 / self.modulus as f64;
        Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * t)
    }

    /// The same cocycle with values in `mu_m`, `modulus | m`.
    pub fn promote(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.modulus) {
            return Err(Error::ModulusMismatch(self.modulus, m));
        }
        let k = m / self.modulus;
        Ok(TwoCocycle {
            group: self.group.clone(),
            modulus: m,
            table: self.table.iter().map(|&x| x * k).collect(),
        })
    }

    /// Pointwise product, promoting to the lcm of the moduli.
    pub fn mul(&self, other: &TwoCocycle) -> Result<Self> {
        if !same_group(&self.group, &other.group) {
            return Err(Error::GroupMismatch);
        }
        let m = self.modulus.lcm(&other.modulus);
        let (a, b) = (self.promote(m)?, other.promote(m)?);
        let table = a.table.iter().zip(&b.table).map(|(x, y)| (x + y) % m).collect();
        Ok(TwoCocycle { group: self.group.clone(), modulus: m, table })
    }

    pub fn inverse(&self) -> Self {
        let m = self.modulus;
        TwoCocycle {
            group: self.group.clone(),
            modulus: m,
            table: self.table.iter().map(|&x| (m - x) % m).collect(),
        }
    }

    pub fn pow(&self, k: u64) -> Self {
        let m = self.modulus;
        TwoCocycle {
            group: self.group.clone(),
            modulus: m,
            table: self.table.iter().map(|&x| ((x as u128 * k as u128) % m as u128) as u64).collect(),
        }
    }

    /// Normalization and the cocycle identity
    /// `e(r,s) + e(t,rs) = e(t,r) + e(tr,s)`. Exhaustive for `|G| <= 64`;
    /// above that the identity is checked for `s` in a generating set,
    /// which is equivalent for normalized tables.
    pub fn check(&self) -> std::result::Result<(), CocycleViolation> {
        let g = &self.group;
        let n = g.order();
        let m = self.modulus;
        for a in 0..n {
            if self.exp(0, a) != 0 {
                return Err(CocycleViolation::NotNormalized { a: 0, b: a });
            }
            if self.exp(a, 0) != 0 {
                return Err(CocycleViolation::NotNormalized { a, b: 0 });
            }
        }
        let sigmas: Vec<usize> = if n <= 64 { (0..n).collect() } else { g.generators() };
        for tau in 0..n {
            for rho in 0..n {
                let tr = g.mul(tau, rho);
                for &sigma in &sigmas {
                    let lhs = (self.exp(rho, sigma) + self.exp(tau, g.mul(rho, sigma))) % m;
                    let rhs = (self.exp(tau, rho) + self.exp(tr, sigma)) % m;
                    if lhs != rhs {
                        return Err(CocycleViolation::Identity { tau, rho, sigma });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.check().is_ok()
    }

    /// [`TwoCocycle::check`] as an error.
    pub fn ensure_valid(&self) -> Result<()> {
        self.check().map_err(|v| Error::NotACocycle(v.to_string()))
    }
}

/// Validation entry point mirroring [`TwoCocycle::check`].
pub fn cocycle_validate(alpha: &TwoCocycle) -> std::result::Result<(), CocycleViolation> {
    alpha.check()
}

/// The pairing cocycle `((a,b),(c,d)) -> b*c` on `C_m x C_m` (element
/// `(a, b)` has index `a*m + b`), valued in `mu_m`. Its group is of central
/// type: the twisted algebra is a full matrix algebra.
pub fn pairing_cocycle(m: usize) -> Result<TwoCocycle> {
    let group = construct_group(&GroupSpec::product(GroupSpec::cyclic(m), GroupSpec::cyclic(m)))?;
    let n = m * m;
    let mut table = vec![0u64; n * n];
    for x in 0..n {
        for y in 0..n {
            let b = x % m;
            let c = y / m;
            table[x * n + y] = ((b * c) % m) as u64;
        }
    }
    Ok(TwoCocycle { group, modulus: m as u64, table })
}

/// Basis of normalized `Z^2(G, Z/n)` in Howell form over the `|G|^2`
/// table coordinates (row-major).
pub fn cocycle_space(group: &GroupRef, modulus: u64) -> Result<ModMatrix> {
    let n = group.order();
    if n * n > COCYCLE_SPACE_BOUND {
        return Err(Error::SizeBound(format!("|G|^2 = {} exceeds {COCYCLE_SPACE_BOUND}", n * n)));
    }
    if modulus == 0 {
        return Err(Error::Parse("modulus must be positive".into()));
    }
    if modulus == 1 || n == 1 {
        return Ok(ModMatrix::zero(modulus, 0, n * n));
    }
    let frame = GeneratorFrame::new(group);
    let params = frame.equations(modulus).kernel();
    let rows = params.rows().iter().map(|f| frame.expand(f, modulus)).collect();
    Ok(ModMatrix::new(modulus, n * n, rows).howell_form())
}

/// Uniformly random element of `Z^2(G, Z/n)`: a random combination of the
/// rows of [`cocycle_space`].
pub fn random_cocycle<R: rand::Rng + ?Sized>(group: &GroupRef, modulus: u64, rng: &mut R) -> Result<TwoCocycle> {
    let space = cocycle_space(group, modulus)?;
    let n = group.order();
    let mut table = vec![0u64; n * n];
    for row in space.rows() {
        let c = rng.gen_range(0..modulus);
        for (t, &r) in table.iter_mut().zip(row) {
            *t = ((*t as u128 + c as u128 * r as u128) % modulus as u128) as u64;
        }
    }
    Ok(TwoCocycle::from_flat(group.clone(), modulus, table))
}

/// Witness `d : G -> Z/N` with `d(rs) + e_a(r,s) = d(s) + d(r) + e_b(r,s)`
/// after both cocycles are promoted to `N = n |G|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoboundaryWitness {
    pub modulus: u64,
    pub values: Vec<u64>,
}

/// Decide whether `alpha` and `beta` define the same class in `H^2(G, C^x)`.
///
/// A witness over `mu_n` alone is not enough (the sign cocycle on `C_2` is
/// a coboundary over `C^x` but not over `mu_2`); any witness over `C^x` can
/// be taken with values in `mu_{n |G|}`, so the system is solved there.
pub fn is_cohomologous(alpha: &TwoCocycle, beta: &TwoCocycle) -> Result<CoboundaryWitness> {
    if !same_group(&alpha.group, &beta.group) {
        return Err(Error::GroupMismatch);
    }
    if alpha.modulus != beta.modulus {
        return Err(Error::ModulusMismatch(alpha.modulus, beta.modulus));
    }
    alpha.ensure_valid()?;
    beta.ensure_valid()?;
    let g = &alpha.group;
    let n = g.order();
    let big = alpha.modulus * n as u64;
    let lift = n as u64;
    let c = |a: usize, b: usize| -> i128 { (alpha.exp(a, b) as i128 - beta.exp(a, b) as i128) * lift as i128 };
    let gens = g.generators();
    let k = gens.len();
    // d(y) = konst[y] + coef[y] . u along the Cayley tree, u_i = d(gens[i])
    let (visit, parent) = g.cayley_tree(&gens);
    let mut konst = vec![0i128; n];
    let mut coef = vec![vec![0i128; k]; n];
    for &y in &visit[1..] {
        let (x, i) = parent[y].unwrap();
        konst[y] = konst[x] - c(x, gens[i]);
        coef[y] = coef[x].clone();
        coef[y][i] += 1;
    }
    let bm = big as i128;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    // the difference is a cocycle, so generator equations determine the rest
    for r in 0..n {
        for &s in &gens {
            let rs = g.mul(r, s);
            let row: Vec<u64> =
                (0..k).map(|i| (coef[r][i] + coef[s][i] - coef[rs][i]).rem_euclid(bm) as u64).collect();
            let b = (c(r, s) - konst[r] - konst[s] + konst[rs]).rem_euclid(bm) as u64;
            if row.iter().all(|&v| v == 0) {
                if b != 0 {
                    return Err(Error::NotCohomologous);
                }
                continue;
            }
            rows.push(row);
            rhs.push(b);
        }
    }
    let u: Vec<u64> = if rows.is_empty() {
        vec![0; k]
    } else {
        match ModMatrix::new(big, k, rows).solve(&rhs) {
            Ok(sol) => sol.particular,
            Err(Error::Unsolvable) => return Err(Error::NotCohomologous),
            Err(e) => return Err(e),
        }
    };
    let values: Vec<u64> = (0..n)
        .map(|y| {
            let v = konst[y] + coef[y].iter().zip(&u).map(|(&a, &b)| a * b as i128).sum::<i128>();
            v.rem_euclid(bm) as u64
        })
        .collect();
    // full check of the displayed relation
    for r in 0..n {
        for s in 0..n {
            let lhs = values[g.mul(r, s)] as i128 + alpha.exp(r, s) as i128 * lift as i128;
            let rhs = values[s] as i128 + values[r] as i128 + beta.exp(r, s) as i128 * lift as i128;
            assert_eq!(lhs.rem_euclid(bm), rhs.rem_euclid(bm), "coboundary witness failed verification");
        }
    }
    Ok(CoboundaryWitness { modulus: big, values })
}

/// Whether `v` (a full table) lies in the span of a cocycle-space basis.
pub fn in_cocycle_space(space: &ModMatrix, table: &[u64]) -> bool {
    HowellBasis::new(space).contains(table)
}

/// On-disk cocycle format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CocycleFile {
    pub group: GroupSpec,
    pub modulus: u64,
    pub exponents: Vec<Vec<u64>>,
}

impl CocycleFile {
    pub fn load(&self) -> Result<TwoCocycle> {
        let group = construct_group(&self.group)?;
        TwoCocycle::new(group, self.modulus, self.exponents.clone())
    }

    pub fn from_cocycle(spec: GroupSpec, alpha: &TwoCocycle) -> Self {
        CocycleFile { group: spec, modulus: alpha.modulus, exponents: alpha.rows() }
    }
}
