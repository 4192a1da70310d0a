//! Exact arithmetic for the supported base fields: the rationals and finite
//! fields F_q with q = p^k <= 2^20, together with places of Q, square
//! classes, Artin-Schreier classes and Hilbert symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest permitted field order. The exhaustive oracle enumerates vectors,
/// so field orders are capped.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

// ---------------------------------------------------------------------------
// Finite field contexts
// ---------------------------------------------------------------------------

/// A finite field F_{p^k} presented as F_p[t] modulo an explicit monic
/// irreducible polynomial. Elements are coefficient vectors of length k,
/// little-endian, reduced mod p.
#[derive(Debug)]
pub struct FqCtx {
    p: u64,
    k: u32,
    /// Monic modulus of degree k, little-endian, length k+1.
    modulus: Vec<u64>,
    order: u64,
}

impl PartialEq for FqCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for FqCtx {}

pub type FqElem = Vec<u64>;

impl FqCtx {
    pub fn new(p: u64, k: u32, modulus: Option<Vec<i64>>) -> Result<FqCtx> {
        if !num_prime::nt_funcs::is_prime64(p) {
            return Err(Error::InvariantViolation(format!(
                "characteristic {p} is not prime"
            )));
        }
        if k == 0 {
            return Err(Error::InvariantViolation("extension degree must be >= 1".into()));
        }
        let mut order: u64 = 1;
        for _ in 0..k {
            order = order
                .checked_mul(p)
                .filter(|&q| q <= MAX_FIELD_ORDER)
                .ok_or_else(|| {
                    Error::InvariantViolation(format!("field order p^k exceeds 2^20 (p={p}, k={k})"))
                })?;
        }
        let modulus = match modulus {
            Some(coeffs) => {
                if coeffs.len() != k as usize + 1 {
                    return Err(Error::InvariantViolation(format!(
                        "modulus must have degree {k} (expected {} coefficients)",
                        k + 1
                    )));
                }
                let reduced: Vec<u64> = coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect();
                if reduced[k as usize] != 1 {
                    return Err(Error::InvariantViolation("modulus must be monic".into()));
                }
                reduced
            }
            None => default_modulus(p, k),
        };
        let ctx = FqCtx { p, k, modulus, order };
        if !ctx.modulus_irreducible() {
            return Err(Error::InvariantViolation("modulus is reducible".into()));
        }
        Ok(ctx)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u64 {
        self.order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Exhaustive root/factor check: the modulus has no monic divisor of
    /// degree between 1 and k/2. Field orders are tiny, so this is cheap.
    fn modulus_irreducible(&self) -> bool {
        let k = self.k as usize;
        if k == 1 {
            return true;
        }
        for d in 1..=(k / 2) {
            let count = self.p.pow(d as u32);
            for idx in 0..count {
                // monic divisor candidate of degree d
                let mut cand = vec![0u64; d + 1];
                let mut n = idx;
                for c in cand.iter_mut().take(d) {
                    *c = n % self.p;
                    n /= self.p;
                }
                cand[d] = 1;
                if poly_rem(&self.modulus, &cand, self.p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    pub fn zero(&self) -> FqElem {
        vec![0; self.k as usize]
    }
    pub fn one(&self) -> FqElem {
        let mut e = self.zero();
        e[0] = 1 % self.p;
        e
    }
    pub fn from_u64(&self, n: u64) -> FqElem {
        let mut e = self.zero();
        e[0] = n % self.p;
        e
    }
    pub fn from_i64(&self, n: i64) -> FqElem {
        let mut e = self.zero();
        e[0] = n.rem_euclid(self.p as i64) as u64;
        e
    }
    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FqElem> {
        if coeffs.len() > self.k as usize {
            return Err(Error::InvariantViolation(format!(
                "element degree must be < {}",
                self.k
            )));
        }
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            e[i] = c.rem_euclid(self.p as i64) as u64;
        }
        Ok(e)
    }

    /// The element whose coefficient vector encodes `idx` in base p.
    pub fn from_index(&self, idx: u64) -> FqElem {
        let mut e = self.zero();
        let mut n = idx;
        for c in e.iter_mut() {
            *c = n % self.p;
            n /= self.p;
        }
        e
    }
    pub fn to_index(&self, x: &FqElem) -> u64 {
        let mut n = 0u64;
        for &c in x.iter().rev() {
            n = n * self.p + c;
        }
        n
    }

    pub fn is_zero(&self, x: &FqElem) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter().zip(b).map(|(&x, &y)| (x + y) % self.p).collect()
    }
    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x + self.p - y) % self.p)
            .collect()
    }
    pub fn neg(&self, a: &FqElem) -> FqElem {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let k = self.k as usize;
        let mut prod = vec![0u128; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] += (x as u128) * (y as u128);
            }
        }
        let mut prod: Vec<u64> = prod.iter().map(|&c| (c % self.p as u128) as u64).collect();
        // reduce by the monic modulus
        for i in (k..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (j, &m) in self.modulus.iter().enumerate().take(k) {
                let idx = i - k + j;
                prod[idx] = ((prod[idx] as u128 + (c as u128) * ((self.p - m) % self.p) as u128)
                    % self.p as u128) as u64;
            }
        }
        prod.truncate(k);
        prod
    }

    pub fn pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FqElem) -> Result<FqElem> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(a, self.order - 2))
    }

    /// Euler criterion; defined for odd characteristic. Zero counts as a square.
    pub fn is_square(&self, a: &FqElem) -> Result<bool> {
        if self.p == 2 {
            return Err(Error::WrongCharacteristic);
        }
        if self.is_zero(a) {
            return Ok(true);
        }
        let e = self.pow(a, (self.order - 1) / 2);
        Ok(e == self.one())
    }

    /// Some square root, by scanning; used only to build small representatives.
    pub fn sqrt(&self, a: &FqElem) -> Option<FqElem> {
        (0..self.order)
            .map(|i| self.from_index(i))
            .find(|y| self.mul(y, y) == *a)
    }

    /// Absolute trace to F_2 (characteristic 2 only): x + x^2 + ... + x^{2^{k-1}}.
    pub fn absolute_trace_bit(&self, a: &FqElem) -> Result<bool> {
        if self.p != 2 {
            return Err(Error::WrongCharacteristic);
        }
        let mut acc = self.zero();
        let mut t = a.clone();
        for _ in 0..self.k {
            acc = self.add(&acc, &t);
            t = self.mul(&t, &t);
        }
        debug_assert!(acc.iter().skip(1).all(|&c| c == 0));
        Ok(acc[0] == 1)
    }

    pub fn iter_elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.order).map(move |i| self.from_index(i))
    }

    /// First non-square unit, by scanning (odd characteristic).
    pub fn a_nonsquare(&self) -> Result<FqElem> {
        if self.p == 2 {
            return Err(Error::WrongCharacteristic);
        }
        for i in 1..self.order {
            let x = self.from_index(i);
            if !self.is_square(&x)? {
                return Ok(x);
            }
        }
        unreachable!("odd finite fields have non-squares")
    }

    /// First element of absolute trace 1 (characteristic 2), for Arf representatives.
    pub fn a_trace_one(&self) -> Result<FqElem> {
        if self.p != 2 {
            return Err(Error::WrongCharacteristic);
        }
        for i in 0..self.order {
            let x = self.from_index(i);
            if self.absolute_trace_bit(&x)? {
                return Ok(x);
            }
        }
        unreachable!("the absolute trace is onto")
    }
}

/// Remainder of `a` by monic `b` over F_p; both little-endian.
fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap();
        let dr = r.len() - 1;
        if lead != 0 {
            for (j, &m) in b.iter().enumerate().take(db) {
                let idx = dr - db + j;
                r[idx] = ((r[idx] as u128 + (lead as u128) * ((p - m) % p) as u128) % p as u128) as u64;
            }
        }
        r.pop();
    }
    r
}

/// Lexicographically smallest monic irreducible of degree k over F_p.
fn default_modulus(p: u64, k: u32) -> Vec<u64> {
    if k == 1 {
        return vec![0, 1];
    }
    let count = p.pow(k);
    for idx in 0..count {
        let mut cand = vec![0u64; k as usize + 1];
        let mut n = idx;
        for c in cand.iter_mut().take(k as usize) {
            *c = n % p;
            n /= p;
        }
        cand[k as usize] = 1;
        let probe = FqCtx {
            p,
            k,
            modulus: cand.clone(),
            order: p.pow(k),
        };
        if probe.modulus_irreducible() {
            return cand;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

// ---------------------------------------------------------------------------
// Base fields and their elements
// ---------------------------------------------------------------------------

/// Either the rational field or an explicit finite field.
#[derive(Clone, Debug)]
pub enum BaseField {
    Rationals,
    Finite(Arc<FqCtx>),
}

impl PartialEq for BaseField {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (BaseField::Rationals, BaseField::Rationals) => true,
            (BaseField::Finite(a), BaseField::Finite(b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for BaseField {}

impl BaseField {
    pub fn rationals() -> Self {
        BaseField::Rationals
    }

    pub fn finite(p: u64, k: u32, modulus: Option<Vec<i64>>) -> Result<Self> {
        Ok(BaseField::Finite(Arc::new(FqCtx::new(p, k, modulus)?)))
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, BaseField::Rationals)
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Finite(ctx) => ctx.characteristic(),
        }
    }

    pub fn is_char2(&self) -> bool {
        self.characteristic() == 2
    }

    pub fn fq(&self) -> Option<&Arc<FqCtx>> {
        match self {
            BaseField::Rationals => None,
            BaseField::Finite(ctx) => Some(ctx),
        }
    }

    pub fn zero(&self) -> FieldElem {
        match self {
            BaseField::Rationals => FieldElem {
                field: self.clone(),
                value: Value::Rational(BigRational::zero()),
            },
            BaseField::Finite(ctx) => FieldElem {
                field: self.clone(),
                value: Value::Finite(ctx.zero()),
            },
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        match self {
            BaseField::Rationals => FieldElem {
                field: self.clone(),
                value: Value::Rational(BigRational::from_integer(BigInt::from(n))),
            },
            BaseField::Finite(ctx) => FieldElem {
                field: self.clone(),
                value: Value::Finite(ctx.from_i64(n)),
            },
        }
    }

    pub fn from_ratio(&self, n: i64, d: i64) -> Result<FieldElem> {
        if d == 0 {
            return Err(Error::DivisionByZero);
        }
        match self {
            BaseField::Rationals => Ok(FieldElem {
                field: self.clone(),
                value: Value::Rational(BigRational::new(BigInt::from(n), BigInt::from(d))),
            }),
            BaseField::Finite(_) => self.from_int(n).div(&self.from_int(d)),
        }
    }

    pub fn from_rational(&self, r: BigRational) -> Result<FieldElem> {
        match self {
            BaseField::Rationals => Ok(FieldElem {
                field: self.clone(),
                value: Value::Rational(r),
            }),
            BaseField::Finite(ctx) => {
                let p = BigInt::from(ctx.characteristic());
                let num = r.numer().mod_floor(&p).to_u64().unwrap();
                let den = r.denom().mod_floor(&p).to_u64().unwrap();
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let num = FieldElem {
                    field: self.clone(),
                    value: Value::Finite(ctx.from_u64(num)),
                };
                let den = FieldElem {
                    field: self.clone(),
                    value: Value::Finite(ctx.from_u64(den)),
                };
                num.div(&den)
            }
        }
    }

    pub fn from_coeffs(&self, coeffs: &[i64]) -> Result<FieldElem> {
        match self {
            BaseField::Rationals => {
                if coeffs.len() == 1 {
                    Ok(self.from_int(coeffs[0]))
                } else {
                    Err(Error::InvariantViolation(
                        "rational elements take a single coefficient".into(),
                    ))
                }
            }
            BaseField::Finite(ctx) => Ok(FieldElem {
                field: self.clone(),
                value: Value::Finite(ctx.from_coeffs(coeffs)?),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Rational(BigRational),
    Finite(FqElem),
}

/// An exact element of a [`BaseField`]. Immutable; all operations are pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    field: BaseField,
    value: Value,
}

impl FieldElem {
    pub fn field(&self) -> &BaseField {
        &self.field
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rational(r) => r.is_zero(),
            Value::Finite(x) => x.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.value {
            Value::Rational(r) => Some(r),
            Value::Finite(_) => None,
        }
    }

    pub fn as_fq(&self) -> Option<&FqElem> {
        match &self.value {
            Value::Finite(x) => Some(x),
            Value::Rational(_) => None,
        }
    }

    fn check_same(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a + b),
            (Value::Finite(a), Value::Finite(b)) => {
                Value::Finite(self.field.fq().unwrap().add(a, b))
            }
            _ => unreachable!(),
        };
        Ok(FieldElem { field: self.field.clone(), value })
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FieldElem {
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(-a),
            Value::Finite(a) => Value::Finite(self.field.fq().unwrap().neg(a)),
        };
        FieldElem { field: self.field.clone(), value }
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.check_same(other)?;
        let value = match (&self.value, &other.value) {
            (Value::Rational(a), Value::Rational(b)) => Value::Rational(a * b),
            (Value::Finite(a), Value::Finite(b)) => {
                Value::Finite(self.field.fq().unwrap().mul(a, b))
            }
            _ => unreachable!(),
        };
        Ok(FieldElem { field: self.field.clone(), value })
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let value = match &self.value {
            Value::Rational(a) => Value::Rational(a.recip()),
            Value::Finite(a) => Value::Finite(self.field.fq().unwrap().inv(a)?),
        };
        Ok(FieldElem { field: self.field.clone(), value })
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            e >>= 1;
        }
        acc
    }

    pub fn double(&self) -> FieldElem {
        self.add(self).unwrap()
    }

    /// 1/2 times self; defined away from characteristic 2.
    pub fn halve(&self) -> Result<FieldElem> {
        if self.field.is_char2() {
            return Err(Error::WrongCharacteristic);
        }
        self.div(&self.field.from_int(2))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rational(r) => write!(f, "{r}"),
            Value::Finite(x) => {
                let ctx = self.field.fq().unwrap();
                write!(f, "[{}]", x.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))?;
                let _ = ctx;
                Ok(())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Places of Q
// ---------------------------------------------------------------------------

/// A place of Q: a prime number or the real place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Finite(BigUint),
    Infinity,
}

impl Place {
    pub fn prime<T: Into<BigUint>>(p: T) -> Result<Place> {
        let p = p.into();
        let ok = match p.to_u64() {
            Some(n) => num_prime::nt_funcs::is_prime64(n),
            None => num_prime::nt_funcs::is_prime(&p, None).probably(),
        };
        if ok {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvariantViolation(format!("{p} is not prime")))
        }
    }

    pub fn two() -> Place {
        Place::Finite(BigUint::from(2u32))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.cmp(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}
impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}

// ---------------------------------------------------------------------------
// Square classes
// ---------------------------------------------------------------------------

/// A canonical square class: over Q the unique signed squarefree integer,
/// over an odd finite field a single bit (true = non-square).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareClass {
    Rational(BigInt),
    FiniteBit(bool),
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Rational(n) => n.is_one(),
            SquareClass::FiniteBit(b) => !b,
        }
    }

    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        match (self, other) {
            (SquareClass::Rational(a), SquareClass::Rational(b)) => {
                Ok(SquareClass::Rational(squarefree_signed_int(&(a * b))))
            }
            (SquareClass::FiniteBit(a), SquareClass::FiniteBit(b)) => {
                Ok(SquareClass::FiniteBit(a ^ b))
            }
            _ => Err(Error::FieldMismatch),
        }
    }
}

pub(crate) fn factor_biguint(n: &BigUint) -> BTreeMap<BigUint, usize> {
    if n.is_one() {
        return BTreeMap::new();
    }
    num_prime::nt_funcs::factorize(n.clone())
}

/// Signed squarefree part of a nonzero integer.
pub(crate) fn squarefree_signed_int(n: &BigInt) -> BigInt {
    debug_assert!(!n.is_zero());
    let sign = if n.is_negative() { -1 } else { 1 };
    let mag = n.magnitude();
    let mut out = BigInt::from(sign);
    for (p, e) in factor_biguint(mag) {
        if e % 2 == 1 {
            out *= BigInt::from_biguint(Sign::Plus, p);
        }
    }
    out
}

/// Signed squarefree representative of the square class of a nonzero rational.
pub(crate) fn squarefree_signed(r: &BigRational) -> BigInt {
    squarefree_signed_int(&(r.numer() * r.denom()))
}

/// Canonical image of a nonzero element in F*/F*^2 (characteristic != 2).
pub fn square_class(a: &FieldElem) -> Result<SquareClass> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    match a.value() {
        Value::Rational(r) => Ok(SquareClass::Rational(squarefree_signed(r))),
        Value::Finite(x) => {
            let ctx = a.field().fq().unwrap();
            Ok(SquareClass::FiniteBit(!ctx.is_square(x)?))
        }
    }
}

/// Artin-Schreier class of c in characteristic 2: 0 iff c = x^2 - x for some
/// x in F_q, i.e. iff the absolute trace of c vanishes.
pub fn artin_schreier_class(c: &FieldElem) -> Result<bool> {
    let ctx = match c.field() {
        BaseField::Finite(ctx) if ctx.characteristic() == 2 => ctx,
        _ => return Err(Error::WrongCharacteristic),
    };
    ctx.absolute_trace_bit(c.as_fq().unwrap())
}

// ---------------------------------------------------------------------------
// Hilbert symbols over Q
// ---------------------------------------------------------------------------

pub(crate) fn val_p(r: &BigRational, p: &BigUint) -> i64 {
    let mut v: i64 = 0;
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut n = r.numer().clone();
    while (&n % &p).is_zero() {
        n /= &p;
        v += 1;
    }
    let mut d = r.denom().clone();
    while (&d % &p).is_zero() {
        d /= &p;
        v -= 1;
    }
    v
}

/// The p-unit part of r (r / p^{val_p r}).
fn unit_part(r: &BigRational, p: &BigUint) -> BigRational {
    let v = val_p(r, p);
    let p = BigRational::from_integer(BigInt::from_biguint(Sign::Plus, p.clone()));
    let mut out = r.clone();
    if v > 0 {
        for _ in 0..v {
            out /= &p;
        }
    } else {
        for _ in 0..(-v) {
            out *= &p;
        }
    }
    out
}

/// Residue mod p of a p-unit rational, as an element of [0, p).
fn residue_mod(r: &BigRational, p: &BigUint) -> BigUint {
    let p = BigInt::from_biguint(Sign::Plus, p.clone());
    let n = r.numer().mod_floor(&p);
    let d = r.denom().mod_floor(&p);
    let d_inv = d.modpow(&(&p - 2), &p);
    (n * d_inv).mod_floor(&p).to_biguint().unwrap()
}

fn legendre(r: &BigRational, p: &BigUint) -> i8 {
    let x = residue_mod(r, p);
    debug_assert!(!x.is_zero());
    let e = (p - 1u32) / 2u32;
    let s = x.modpow(&e, p);
    if s.is_one() {
        1
    } else {
        -1
    }
}

/// Residue of a 2-adic unit rational mod 8 (n/d with d odd: n * d mod 8,
/// using d^2 = 1 mod 8).
fn odd_unit_mod8(r: &BigRational) -> u64 {
    let eight = BigInt::from(8);
    let n = r.numer().mod_floor(&eight).to_u64().unwrap();
    let d = r.denom().mod_floor(&eight).to_u64().unwrap();
    (n * d) % 8
}

fn omega_mod2(u8v: u64) -> u64 {
    // (u^2 - 1)/8 mod 2 for odd u: 0 for u = 1,7; 1 for u = 3,5
    match u8v {
        1 | 7 => 0,
        3 | 5 => 1,
        _ => unreachable!("odd unit mod 8"),
    }
}

/// Hilbert symbol (a, b)_v over Q: +1 iff z^2 = a x^2 + b y^2 has a nonzero
/// solution over the completion at v.
pub fn hilbert_symbol_rat(a: &BigRational, b: &BigRational, v: &Place) -> Result<i8> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    match v {
        Place::Infinity => Ok(if a.is_negative() && b.is_negative() { -1 } else { 1 }),
        Place::Finite(p) => {
            let alpha = val_p(a, p);
            let beta = val_p(b, p);
            let u = unit_part(a, p);
            let w = unit_part(b, p);
            if p.to_u64() == Some(2) {
                let um = odd_unit_mod8(&u);
                let wm = odd_unit_mod8(&w);
                let e = eps_of(um) * eps_of(wm)
                    + (alpha.rem_euclid(2) as u64) * omega_mod2(wm)
                    + (beta.rem_euclid(2) as u64) * omega_mod2(um);
                Ok(if e % 2 == 1 { -1 } else { 1 })
            } else {
                let mut s: i8 = 1;
                if (alpha * beta).rem_euclid(2) == 1 {
                    // (-1)^{alpha beta (p-1)/2}
                    let pm1_half = ((p - 1u32) / 2u32).mod_floor(&BigUint::from(2u32));
                    if pm1_half.is_one() {
                        s = -s;
                    }
                }
                if beta.rem_euclid(2) == 1 {
                    s *= legendre(&u, p);
                }
                if alpha.rem_euclid(2) == 1 {
                    s *= legendre(&w, p);
                }
                Ok(s)
            }
        }
    }
}

fn eps_of(u8v: u64) -> u64 {
    // (u - 1)/2 mod 2: 1 mod 4 -> 0, 3 mod 4 -> 1
    match u8v % 4 {
        1 => 0,
        3 => 1,
        _ => unreachable!("odd unit"),
    }
}

/// Hilbert symbol on field elements of Q.
pub fn hilbert_symbol(a: &FieldElem, b: &FieldElem, v: &Place) -> Result<i8> {
    match (a.as_rational(), b.as_rational()) {
        (Some(ar), Some(br)) => hilbert_symbol_rat(ar, br, v),
        _ => Err(Error::FieldMismatch),
    }
}

/// Places at which the symbol (a, b) could ramify: 2, infinity, and the odd
/// primes dividing a numerator or denominator.
pub(crate) fn candidate_places(values: &[&BigRational]) -> BTreeSet<Place> {
    let mut out = BTreeSet::new();
    out.insert(Place::two());
    out.insert(Place::Infinity);
    for r in values {
        for part in [r.numer(), r.denom()] {
            for (p, _) in factor_biguint(part.magnitude()) {
                out.insert(Place::Finite(p));
            }
        }
    }
    out
}

/// The finite even set of places where (a, b) is ramified.
pub fn ramification_set(a: &BigRational, b: &BigRational) -> Result<BTreeSet<Place>> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let mut out = BTreeSet::new();
    for v in candidate_places(&[a, b]) {
        if hilbert_symbol_rat(a, b, &v)? == -1 {
            out.insert(v);
        }
    }
    debug_assert!(out.len() % 2 == 0, "product formula violated");
    Ok(out)
}

/// Whether a nonzero rational is a square in the completion at v.
pub(crate) fn is_local_square(r: &BigRational, v: &Place) -> bool {
    debug_assert!(!r.is_zero());
    match v {
        Place::Infinity => r.is_positive(),
        Place::Finite(p) => {
            if val_p(r, p).rem_euclid(2) == 1 {
                return false;
            }
            let u = unit_part(r, p);
            if p.to_u64() == Some(2) {
                odd_unit_mod8(&u) == 1
            } else {
                legendre(&u, p) == 1
            }
        }
    }
}
