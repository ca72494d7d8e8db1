//! Exact elements of cyclotomic fields `Q(zeta_e)`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Poly = Vec<BigRational>;

fn cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
}

/// Exact division of integer polynomials by a monic divisor.
fn div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut q = vec![BigInt::zero(); rem.len() - dd];
    for k in (dd..rem.len()).rev() {
        let c = rem[k].clone();
        if c.is_zero() {
            continue;
        }
        q[k - dd] = c.clone();
        for (j, dj) in den.iter().enumerate() {
            rem[k - dd + j] -= &c * dj;
        }
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()), "division not exact");
    trim(&mut q);
    q
}

/// Integer coefficients (low degree first) of the `e`-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(e: u64) -> Arc<Vec<BigInt>> {
    assert!(e >= 1);
    if let Some(p) = cache().lock().unwrap().get(&e) {
        return p.clone();
    }
    // x^e - 1 divided by Phi_d for every proper divisor d
    let mut p = vec![BigInt::zero(); e as usize + 1];
    p[0] = -BigInt::one();
    p[e as usize] = BigInt::one();
    for d in 1..e {
        if e.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            p = div_exact(&p, &phi_d);
        }
    }
    let p = Arc::new(p);
    cache().lock().unwrap().insert(e, p.clone());
    p
}

pub fn euler_phi(e: u64) -> usize {
    cyclotomic_polynomial(e).len() - 1
}

fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

fn reduce(mut p: Poly, e: u64) -> Poly {
    let phi = cyclotomic_polynomial(e);
    let d = phi.len() - 1;
    for k in (d..p.len()).rev() {
        let c = std::mem::replace(&mut p[k], BigRational::zero());
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate().take(d) {
            if !pj.is_zero() {
                p[k - d + j] -= &c * BigRational::from_integer(pj.clone());
            }
        }
    }
    p.resize(d, BigRational::zero());
    p
}

/// An element of `Q(zeta_e)` on the power basis modulo `Phi_e`.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero(e: u64) -> Self {
        Cyclotomic { conductor: e, coeffs: vec![BigRational::zero(); euler_phi(e)] }
    }

    pub fn from_rational(e: u64, r: BigRational) -> Self {
        let mut z = Cyclotomic::zero(e);
        if z.coeffs.is_empty() {
            return z;
        }
        z.coeffs[0] = r;
        z
    }

    pub fn from_int(e: u64, n: i64) -> Self {
        Cyclotomic::from_rational(e, BigRational::from_integer(n.into()))
    }

    pub fn one(e: u64) -> Self {
        Cyclotomic::from_int(e, 1)
    }

    /// `zeta_e^k`.
    pub fn root(e: u64, k: i64) -> Self {
        let k = k.rem_euclid(e as i64) as usize;
        let mut p = vec![BigRational::zero(); k + 1];
        p[k] = BigRational::one();
        Cyclotomic { conductor: e, coeffs: reduce(p, e) }
    }

    /// Build from the redundant expansion `sum_k a_k zeta_e^k`, `k` in `0..e`.
    pub fn from_root_coeffs(e: u64, a: &[BigRational]) -> Self {
        Cyclotomic { conductor: e, coeffs: reduce(a.to_vec(), e) }
    }

    pub fn from_parts(e: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.len() != euler_phi(e) {
            return Err(Error::Parse(format!(
                "conductor {e} needs {} coefficients, got {}",
                euler_phi(e),
                coeffs.len()
            )));
        }
        Ok(Cyclotomic { conductor: e, coeffs })
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Rational value if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Re-express in the larger field `Q(zeta_big)`; `e` must divide `big`.
    pub fn promote(&self, big: u64) -> Self {
        if big == self.conductor {
            return self.clone();
        }
        assert_eq!(big % self.conductor, 0, "conductor must divide the target");
        let step = (big / self.conductor) as usize;
        let mut p = vec![BigRational::zero(); step * self.coeffs.len().max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        Cyclotomic { conductor: big, coeffs: reduce(p, big) }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        let e = lcm(self.conductor, other.conductor);
        (self.promote(e), other.promote(e))
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Complex conjugation `zeta -> zeta^-1`.
    pub fn conj(&self) -> Self {
        let e = self.conductor as usize;
        let mut p = vec![BigRational::zero(); e.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[(e - i) % e] += c;
            }
        }
        Cyclotomic { conductor: self.conductor, coeffs: reduce(p, self.conductor) }
    }

    /// Galois action `zeta -> zeta^k` for `k` coprime to the conductor.
    pub fn galois(&self, k: u64) -> Self {
        let e = self.conductor;
        assert_eq!(k.gcd(&e), 1, "Galois exponent must be a unit");
        let mut p = vec![BigRational::zero(); e as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[((i as u64 * k) % e) as usize] += c;
            }
        }
        Cyclotomic { conductor: e, coeffs: reduce(p, e) }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let e = self.conductor;
        let phi: Poly = cyclotomic_polynomial(e)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // extended Euclid: s * a = 1 (mod phi)
        let (mut r0, mut r1) = (phi, poly_trim(self.coeffs.clone()));
        let (mut s0, mut s1): (Poly, Poly) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
        }
        // r0 is a nonzero constant because Phi_e is irreducible
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let s: Poly = s0.iter().map(|x| x / &c).collect();
        Ok(Cyclotomic { conductor: e, coeffs: reduce(s, e) })
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.conductor);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Floating-point value at `zeta_e = exp(2 pi i / e)`.
    pub fn to_complex(&self) -> Complex64 {
        let e = self.conductor as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let v = c.to_f64().unwrap_or(f64::NAN);
                Complex64::from_polar(v, 2.0 * std::f64::consts::PI * i as f64 / e)
            })
            .sum()
    }

    /// Rational coefficients as strings, for JSON output.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

fn poly_trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().is_some_and(|x| x.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
    p
}

fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let z = BigRational::zero();
    poly_trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    poly_trim(out)
}

fn poly_divrem(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() <= db {
        return (vec![BigRational::zero()], poly_trim(r));
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        if r[k].is_zero() {
            continue;
        }
        let c = &r[k] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] -= &c * bj;
        }
        q[k - db] = c;
    }
    (poly_trim(q), poly_trim(r))
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = self.aligned(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for Cyclotomic {}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor != rhs.conductor {
            let (a, b) = self.aligned(rhs);
            return &a + &b;
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        self + &(-rhs)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if self.conductor != rhs.conductor {
            let (a, b) = self.aligned(rhs);
            return &a * &b;
        }
        let d = self.coeffs.len();
        if d == 0 {
            return self.clone();
        }
        let mut p = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        Cyclotomic { conductor: self.conductor, coeffs: reduce(p, self.conductor) }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $f(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$f(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => format!("z{}", self.conductor),
                _ => format!("z{}^{}", self.conductor, i),
            };
            let term = if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else if (-c).is_one() {
                format!("-{mono}")
            } else {
                format!("{c}*{mono}")
            };
            terms.push(term);
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = terms[0].clone();
        for t in &terms[1..] {
            match t.strip_prefix('-') {
                Some(rest) => out.push_str(&format!(" - {rest}")),
                None => out.push_str(&format!(" + {t}")),
            }
        }
        write!(f, "{out}")
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr { conductor: self.conductor, coeffs: self.coeff_strings() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CycloRepr::deserialize(d)?;
        if r.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let coeffs = r
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>().map_err(|e| D::Error::custom(format!("{s}: {e}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Cyclotomic::from_parts(r.conductor, coeffs).map_err(D::Error::custom)
    }
}

/// Largest absolute coefficient numerator; handy for sanity bounds.
pub fn height(z: &Cyclotomic) -> BigInt {
    z.coeffs.iter().map(|c| c.numer().abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(p: &[BigInt]) -> Vec<i64> {
        p.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(ints(&cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(ints(&cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        assert_eq!(euler_phi(105), 48);
        // Phi_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).iter().any(|c| c.abs() == BigInt::from(2)));
    }

    #[test]
    fn vanishing_sum() {
        let s = &(&Cyclotomic::root(3, 1) + &Cyclotomic::root(3, 2)) + &Cyclotomic::one(3);
        assert!(s.is_zero());
    }

    #[test]
    fn i_squared() {
        let i = Cyclotomic::root(4, 1);
        assert_eq!(&i * &i, Cyclotomic::from_int(4, -1));
    }

    #[test]
    fn inverse_of_one_plus_zeta5() {
        let a = &Cyclotomic::one(5) + &Cyclotomic::root(5, 1);
        let v = a.inv().unwrap();
        assert_eq!(&v * &a, Cyclotomic::one(5));
        assert!(matches!(Cyclotomic::zero(5).inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn mixed_conductors() {
        // zeta_4 * zeta_3 = zeta_12^7
        let p = &Cyclotomic::root(4, 1) * &Cyclotomic::root(3, 1);
        assert_eq!(p, Cyclotomic::root(12, 7));
        assert_eq!(Cyclotomic::root(2, 1), Cyclotomic::from_int(1, -1));
    }

    #[test]
    fn conj_and_display() {
        let z = Cyclotomic::root(8, 3);
        assert_eq!(z.conj(), Cyclotomic::root(8, 5));
        assert_eq!(Cyclotomic::root(3, 2).to_string(), "-1 - z3");
        let json = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&json).unwrap();
        assert_eq!(back, z);
    }

    #[derive(Debug, Clone)]
    enum Expr {
        Root(u64, i64),
        Int(i64),
        Add(Box<Expr>, Box<Expr>),
        Mul(Box<Expr>, Box<Expr>),
        Conj(Box<Expr>),
        Inv(Box<Expr>),
    }

    fn expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 12]), -12i64..12).prop_map(|(e, k)| Expr::Root(e, k)),
            (-3i64..4).prop_map(Expr::Int),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                inner.clone().prop_map(|a| Expr::Conj(Box::new(a))),
                inner.prop_map(|a| Expr::Inv(Box::new(a))),
            ]
        })
    }

    fn eval(e: &Expr) -> Option<(Cyclotomic, Complex64)> {
        Some(match e {
            Expr::Root(c, k) => (
                Cyclotomic::root(*c, *k),
                Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * *k as f64 / *c as f64),
            ),
            Expr::Int(n) => (Cyclotomic::from_int(1, *n), Complex64::new(*n as f64, 0.0)),
            Expr::Add(a, b) => {
                let (x, fx) = eval(a)?;
                let (y, fy) = eval(b)?;
                (&x + &y, fx + fy)
            }
            Expr::Mul(a, b) => {
                let (x, fx) = eval(a)?;
                let (y, fy) = eval(b)?;
                (&x * &y, fx * fy)
            }
            Expr::Conj(a) => {
                let (x, fx) = eval(a)?;
                (x.conj(), fx.conj())
            }
            Expr::Inv(a) => {
                let (x, fx) = eval(a)?;
                if x.is_zero() || fx.norm() < 1e-3 {
                    return None;
                }
                (x.inv().ok()?, fx.inv())
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]
        #[test]
        fn agrees_with_floating_point(e in expr()) {
            if let Some((exact, approx)) = eval(&e) {
                let v = exact.to_complex();
                let scale = 1.0f64.max(approx.norm());
                prop_assert!((v - approx).norm() <= 1e-10 * scale, "{} vs {}", v, approx);
            }
        }

        #[test]
        fn field_axioms(a in expr(), b in expr()) {
            if let (Some((x, _)), Some((y, _))) = (eval(&a), eval(&b)) {
                prop_assert_eq!(&x + &y, &y + &x);
                prop_assert_eq!(&x * &y, &y * &x);
                if !x.is_zero() {
                    prop_assert_eq!(&x.inv().unwrap() * &x, Cyclotomic::one(x.conductor()));
                }
                prop_assert_eq!(x.conj().conj(), x);
            }
        }
    }
}
