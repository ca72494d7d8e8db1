//! Character tables and the representation ring `R(G)` over `C`.

mod dixon;

pub use dixon::dixon_prime;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{GroupRef, Subgroup};

#[derive(Debug)]
pub struct CharacterTable {
    order: usize,
    label: String,
    class_sizes: Vec<usize>,
    class_reps: Vec<usize>,
    inverse_class: Vec<usize>,
    exponent: u64,
    prime: u64,
    degrees: Vec<u64>,
    values: Vec<Vec<Cyclotomic>>,
    approx: Vec<Vec<Complex64>>,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Character table of `group`, memoized on the group.
pub fn character_table(group: &GroupRef) -> Result<Arc<CharacterTable>> {
    group.cached_char_table(|| character_table_seeded(group, 0).map(Arc::new))
}

/// Dixon's method with an explicit seed; the canonical output does not depend on it.
pub fn character_table_seeded(group: &GroupRef, seed: u64) -> Result<CharacterTable> {
    let raw = dixon::dixon(group, seed)?;
    let classes = group.conjugacy_classes();
    let r = classes.len();
    let mut rows: Vec<(u64, Vec<Cyclotomic>)> = raw.degrees.into_iter().zip(raw.values).collect();
    let is_trivial = |row: &(u64, Vec<Cyclotomic>)| row.0 == 1 && row.1.iter().all(|v| v == &Cyclotomic::one(1));
    let trivial_pos = rows
        .iter()
        .position(is_trivial)
        .ok_or_else(|| Error::CharacterTable("no trivial character".into()))?;
    let trivial = rows.remove(trivial_pos);
    let key = |row: &(u64, Vec<Cyclotomic>)| -> (u64, Vec<Vec<BigRational>>) {
        (row.0, row.1.iter().map(|v| v.promote(raw.exponent).coeffs().to_vec()).collect())
    };
    rows.sort_by_key(key);
    rows.insert(0, trivial);
    let (degrees, values): (Vec<u64>, Vec<Vec<Cyclotomic>>) = rows.into_iter().unzip();
    let approx = values.iter().map(|row| row.iter().map(|v| v.to_complex()).collect()).collect();
    let table = CharacterTable {
        order: group.order(),
        label: group.label().to_string(),
        class_sizes: classes.iter().map(|c| c.size()).collect(),
        class_reps: classes.iter().map(|c| c.representative).collect(),
        inverse_class: classes.iter().map(|c| group.class_index(group.inv(c.representative))).collect(),
        exponent: raw.exponent,
        prime: raw.prime,
        degrees,
        values,
        approx,
    };
    if table.degrees.len() != r {
        return Err(Error::CharacterTable(format!("{} rows for {r} classes", table.degrees.len())));
    }
    let sum: u64 = table.degrees.iter().map(|d| d * d).sum();
    if sum != group.order() as u64 {
        return Err(Error::CharacterTable(format!("sum of squared degrees {sum} != {}", group.order())));
    }
    table.check_orthogonality_approx()?;
    Ok(table)
}

impl CharacterTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Prime used by the modular computation (0 for the abelian shortcut).
    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn class_reps(&self) -> &[usize] {
        &self.class_reps
    }

    pub fn values(&self) -> &[Vec<Cyclotomic>] {
        &self.values
    }

    pub fn value(&self, irrep: usize, class: usize) -> &Cyclotomic {
        &self.values[irrep][class]
    }

    fn same(&self, other: &CharacterTable) -> bool {
        std::ptr::eq(self, other)
            || (self.order == other.order
                && self.class_sizes == other.class_sizes
                && self.class_reps == other.class_reps
                && self.values == other.values)
    }

    fn check_orthogonality_approx(&self) -> Result<()> {
        let r = self.len();
        for i in 0..r {
            for j in 0..r {
                let s: Complex64 = (0..r)
                    .map(|c| self.approx[i][c] * self.approx[j][c].conj() * self.class_sizes[c] as f64)
                    .sum::<Complex64>()
                    / self.order as f64;
                let want = if i == j { 1.0 } else { 0.0 };
                if (s - Complex64::new(want, 0.0)).norm() > 1e-6 {
                    return Err(Error::CharacterTable(format!("rows {i},{j} fail orthogonality")));
                }
            }
        }
        Ok(())
    }

    /// Exact row and column orthogonality.
    pub fn verify_exact(&self) -> Result<()> {
        let r = self.len();
        let g = rat(self.order as i64);
        let conj: Vec<Vec<Cyclotomic>> = self.values.iter().map(|row| row.iter().map(|v| v.conj()).collect()).collect();
        for i in 0..r {
            if self.values[0][i] != Cyclotomic::one(1) {
                return Err(Error::CharacterTable("trivial row is not all ones".into()));
            }
            for j in i..r {
                let mut s = Cyclotomic::zero(1);
                for c in 0..r {
                    let t = (&self.values[i][c] * &conj[j][c]).scale(&rat(self.class_sizes[c] as i64));
                    s = &s + &t;
                }
                let want = if i == j { g.clone() } else { BigRational::zero() };
                if s != Cyclotomic::from_rational(1, want) {
                    return Err(Error::CharacterTable(format!("row orthogonality fails for ({i},{j})")));
                }
            }
        }
        for c in 0..r {
            for d in c..r {
                let mut s = Cyclotomic::zero(1);
                for i in 0..r {
                    s = &s + &(&self.values[i][c] * &conj[i][d]);
                }
                let want = if c == d { rat((self.order / self.class_sizes[c]) as i64) } else { BigRational::zero() };
                if s != Cyclotomic::from_rational(1, want) {
                    return Err(Error::CharacterTable(format!("column orthogonality fails for ({c},{d})")));
                }
            }
        }
        Ok(())
    }

    /// Exact inner product `(1/|G|) sum |C| f(c) conj(chi_k(c))` for every irreducible.
    fn decompose_values(&self, f: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let inv_order = BigRational::new(BigInt::one(), BigInt::from(self.order));
        (0..self.len())
            .map(|k| {
                let mut s = Cyclotomic::zero(1);
                for (c, v) in f.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    // conj(chi(c)) = chi(c^-1)
                    let t = v * &self.values[k][self.inverse_class[c]];
                    s = &s + &t.scale(&rat(self.class_sizes[c] as i64));
                }
                s.scale(&inv_order)
            })
            .collect()
    }

    /// Pretty text table with `zN^k` notation.
    pub fn render(&self) -> String {
        let r = self.len();
        let cells: Vec<Vec<String>> = self.values.iter().map(|row| row.iter().map(|v| v.to_string()).collect()).collect();
        let mut width = vec![0usize; r];
        for c in 0..r {
            width[c] = cells.iter().map(|row| row[c].len()).max().unwrap_or(1).max(format!("{}", self.class_sizes[c]).len());
        }
        let mut out = String::new();
        out.push_str(&format!("{:>6} ", "size"));
        for c in 0..r {
            out.push_str(&format!(" {:>w$}", self.class_sizes[c], w = width[c]));
        }
        out.push('\n');
        for (i, row) in cells.iter().enumerate() {
            out.push_str(&format!("{:>6} ", format!("X{}", i + 1)));
            for c in 0..r {
                out.push_str(&format!(" {:>w$}", row[c], w = width[c]));
            }
            out.push('\n');
        }
        out
    }
}

/// JSON view of a table.
#[derive(Debug, Serialize)]
pub struct CharacterTableReport {
    pub group: String,
    pub order: usize,
    pub exponent: u64,
    pub degrees: Vec<u64>,
    pub class_sizes: Vec<usize>,
    pub class_representatives: Vec<usize>,
    pub values: Vec<Vec<Cyclotomic>>,
}

impl From<&CharacterTable> for CharacterTableReport {
    fn from(t: &CharacterTable) -> Self {
        CharacterTableReport {
            group: t.label.clone(),
            order: t.order,
            exponent: t.exponent,
            degrees: t.degrees.clone(),
            class_sizes: t.class_sizes.clone(),
            class_representatives: t.class_reps.clone(),
            values: t.values.iter().map(|row| row.iter().map(|v| v.promote(t.exponent)).collect()).collect(),
        }
    }
}

/// Element of `R(G)` (or `R(G) (x) Q` when coefficients are fractional).
#[derive(Debug, Clone)]
pub struct VirtualCharacter {
    table: Arc<CharacterTable>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for VirtualCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.table.same(&other.table)
    }
}

impl Eq for VirtualCharacter {}

impl VirtualCharacter {
    pub fn from_coeffs(table: Arc<CharacterTable>, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != table.len() {
            return Err(Error::Parse(format!("{} coefficients for {} irreducibles", coeffs.len(), table.len())));
        }
        Ok(VirtualCharacter { table, coeffs })
    }

    pub fn from_ints(table: Arc<CharacterTable>, coeffs: &[i64]) -> Result<Self> {
        Self::from_coeffs(table, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(table: Arc<CharacterTable>) -> Self {
        let coeffs = vec![BigRational::zero(); table.len()];
        VirtualCharacter { table, coeffs }
    }

    pub fn irreducible(table: Arc<CharacterTable>, i: usize) -> Self {
        let mut v = Self::zero(table);
        v.coeffs[i] = BigRational::one();
        v
    }

    pub fn trivial(table: Arc<CharacterTable>) -> Self {
        Self::irreducible(table, 0)
    }

    /// `[kG] = sum deg_i chi_i`.
    pub fn regular(table: Arc<CharacterTable>) -> Self {
        let coeffs = table.degrees.iter().map(|&d| rat(d as i64)).collect();
        VirtualCharacter { table, coeffs }
    }

    /// Decompose a class function given by its values on the classes.
    pub fn from_class_function(table: Arc<CharacterTable>, values: &[Cyclotomic]) -> Result<Self> {
        if values.len() != table.len() {
            return Err(Error::ClassCountMismatch { expected: table.len(), got: values.len() });
        }
        let coeffs = table
            .decompose_values(values)
            .into_iter()
            .enumerate()
            .map(|(k, v)| {
                v.as_rational().ok_or_else(|| {
                    Error::NonIntegralDecomposition(format!("multiplicity of irreducible {k} is {v}"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(VirtualCharacter { table, coeffs })
    }

    pub fn table(&self) -> &Arc<CharacterTable> {
        &self.table
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integral with nonnegative multiplicities.
    pub fn is_genuine(&self) -> bool {
        self.is_integral() && self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn int_coeffs(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
    }

    pub fn class_values(&self) -> Vec<Cyclotomic> {
        let r = self.table.len();
        (0..r)
            .map(|c| {
                let mut s = Cyclotomic::zero(1);
                for (i, k) in self.coeffs.iter().enumerate() {
                    if !k.is_zero() {
                        s = &s + &self.table.values[i][c].scale(k);
                    }
                }
                s
            })
            .collect()
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.table.same(&other.table) {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(VirtualCharacter { table: self.table.clone(), coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        VirtualCharacter { table: self.table.clone(), coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Tensor product: pointwise product of class functions, decomposed exactly.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let a = self.class_values();
        let b = other.class_values();
        let prod: Vec<Cyclotomic> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        let out = Self::from_class_function(self.table.clone(), &prod)?;
        if self.is_integral() && other.is_integral() && !out.is_integral() {
            return Err(Error::NonIntegralDecomposition(format!("{out}")));
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::trivial(self.table.clone());
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Value at the identity.
    pub fn rank(&self) -> BigRational {
        self.coeffs.iter().zip(&self.table.degrees).map(|(c, &d)| c * rat(d as i64)).sum()
    }

    /// `<a, b>` on the irreducible basis.
    pub fn inner(&self, other: &Self) -> Result<BigRational> {
        self.check_same(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b).sum())
    }
}

impl fmt::Display for VirtualCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { format!("X{}", i + 1) } else { format!("{c}*X{}", i + 1) })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Serialize for VirtualCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        v.serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingOp {
    Add,
    Mul,
}

pub fn rr_arith(op: RingOp, a: &VirtualCharacter, b: &VirtualCharacter) -> Result<VirtualCharacter> {
    match op {
        RingOp::Add => a.add(b),
        RingOp::Mul => a.mul(b),
    }
}

pub fn rank(a: &VirtualCharacter) -> BigRational {
    a.rank()
}

/// Unit criterion in the localization at the augmentation ideal.
pub fn is_unit_at_i(a: &VirtualCharacter) -> bool {
    !a.rank().is_zero()
}

#[derive(Debug, Clone)]
pub struct RingIdempotents {
    pub e_plus: VirtualCharacter,
    pub e_minus: VirtualCharacter,
}

/// `e+ = [kG]/|G|` and `e- = 1 - e+`, with every identity verified exactly.
pub fn idempotents(table: &Arc<CharacterTable>) -> Result<RingIdempotents> {
    let order = rat(table.order() as i64);
    let one = VirtualCharacter::trivial(table.clone());
    let e_plus = VirtualCharacter::regular(table.clone()).scale(&(BigRational::one() / order));
    let e_minus = one.sub(&e_plus)?;
    let zero = VirtualCharacter::zero(table.clone());
    let checks = [
        (e_plus.mul(&e_plus)? == e_plus, "e+ is not idempotent"),
        (e_minus.mul(&e_minus)? == e_minus, "e- is not idempotent"),
        (e_plus.mul(&e_minus)? == zero, "e+ e- != 0"),
        (e_plus.add(&e_minus)? == one, "e+ + e- != 1"),
        (e_plus.rank().is_one(), "rank(e+) != 1"),
        (e_minus.rank().is_zero(), "rank(e-) != 0"),
    ];
    for (ok, msg) in checks {
        if !ok {
            return Err(Error::Violation(msg.into()));
        }
    }
    Ok(RingIdempotents { e_plus, e_minus })
}

/// Number of cosets `gH` fixed by `x`: `|C_G(x)| |C ∩ H| / |H|` for the class `C` of `x`.
pub fn permutation_character(group: &GroupRef, h: &Subgroup) -> Result<VirtualCharacter> {
    if !crate::group::same_group(group, h.parent()) {
        return Err(Error::GroupMismatch);
    }
    let table = character_table(group)?;
    let classes = group.conjugacy_classes();
    let values: Vec<Cyclotomic> = classes
        .iter()
        .map(|c| {
            let inside = c.members.iter().filter(|&&m| h.contains(m)).count();
            let fixed = (group.order() / c.size()) * inside / h.order();
            Cyclotomic::from_int(1, fixed as i64)
        })
        .collect();
    let chi = VirtualCharacter::from_class_function(table, &values)?;
    debug_assert!(chi.is_genuine());
    Ok(chi)
}

/// Restriction to `h`, decomposed over `Irr(H)` (local numbering of
/// [`Subgroup::as_group`]).
pub fn restrict(a: &VirtualCharacter, h: &Subgroup) -> Result<VirtualCharacter> {
    let parent = h.parent();
    let parent_table = character_table(parent)?;
    if !a.table.same(&parent_table) {
        return Err(Error::GroupMismatch);
    }
    let (sub, embedding) = h.as_group();
    let sub: GroupRef = Arc::new(sub);
    restrict_to(a, parent, &sub, &embedding)
}

/// Restriction along an explicit embedding `sub -> parent`.
pub fn restrict_to(
    a: &VirtualCharacter,
    parent: &GroupRef,
    sub: &GroupRef,
    embedding: &[usize],
) -> Result<VirtualCharacter> {
    let values = a.class_values();
    let sub_table = character_table(sub)?;
    let sub_values: Vec<Cyclotomic> = sub
        .conjugacy_classes()
        .iter()
        .map(|c| values[parent.class_index(embedding[c.representative])].clone())
        .collect();
    VirtualCharacter::from_class_function(sub_table, &sub_values)
}

#[cfg(test)]
mod tests;
