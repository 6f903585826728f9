//! Exact arithmetic in small finite fields GF(p^k), with subfield embeddings,
//! Frobenius maps, minimal polynomials and linear (in)dependence over subfields.
//!
//! Fields are interned: constructing GF(p^k) with the same modulus twice yields
//! the same shared handle, so element compatibility is a pointer check. All
//! arithmetic goes through precomputed tables; everything here is sized for
//! the desk-scale geometry this crate targets (orders up to ~1024), not for
//! cryptographic work.

use once_cell::sync::Lazy;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use thiserror::Error;

/// Largest field order for which arithmetic tables are built.
pub const MAX_FIELD_ORDER: u64 = 1024;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GfError {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {0} is reducible over GF({1})")]
    ReducibleModulus(String, u64),
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    InvalidModulusDegree { expected: usize, got: usize },
    #[error("field order {0} exceeds the supported maximum {MAX_FIELD_ORDER}")]
    FieldTooLarge(u64),
    #[error("{q} is not an admissible subfield order of a field of order {order}")]
    InvalidSubfieldOrder { q: u64, order: u64 },
    #[error("elements of {0} and {1} cannot be combined")]
    MixedFields(String, String),
}

// ---------------------------------------------------------------------------
// Polynomial arithmetic over GF(p) on raw coefficient vectors (low-to-high).
// Used for modulus validation before any Field exists.
// ---------------------------------------------------------------------------

fn ptrim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ptrim(&mut out);
    out
}

fn prem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    ptrim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = pinv_scalar(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = (r[dr] * lead_inv) % p;
        for i in 0..=dm {
            let idx = dr - dm + i;
            r[idx] = (r[idx] + p - (c * m[i]) % p) % p;
        }
        ptrim(&mut r);
    }
    r
}

fn pinv_scalar(a: u64, p: u64) -> u64 {
    // p is tiny; a scan is fine
    (1..p).find(|&x| (a * x) % p == 1).expect("nonzero scalar")
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Irreducibility over GF(p) by trial division with all monic polynomials of
/// degree at most deg/2.
fn poly_is_irreducible(m: &[u64], p: u64) -> bool {
    let deg = m.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        // monic divisors of degree d, coefficients as base-p counter
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut div = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                div.push(c % p);
                c /= p;
            }
            div.push(1);
            if prem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible degree-k polynomial over GF(p) whose coefficient
/// vector, read as a base-p integer, is smallest.
fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    if k == 1 {
        // x itself
        return vec![0, 1];
    }
    let count = p.pow(k as u32);
    for code in 0..count {
        let mut m = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if poly_is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

/// Decompose q as p^k with p prime. Returns None if q is not a prime power.
pub fn prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    if !is_prime(p) {
        return None;
    }
    let mut rest = q;
    let mut k = 0;
    while rest > 1 {
        if rest % p != 0 {
            return None;
        }
        rest /= p;
        k += 1;
    }
    Some((p, k))
}

// ---------------------------------------------------------------------------
// Field
// ---------------------------------------------------------------------------

#[derive(Debug)]
pub struct FieldInner {
    id: u64,
    p: u64,
    k: usize,
    order: u64,
    modulus: Vec<u64>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>, // inv[0] unused
}

/// A finite field GF(p^k), shared and immutable. Elements are residue classes
/// of polynomials of degree < k over GF(p), indexed by their coefficient
/// vector read as a base-p integer.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

static REGISTRY: Lazy<Mutex<HashMap<(u64, usize, Vec<u64>), Field>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));
static NEXT_ID: Lazy<Mutex<u64>> = Lazy::new(|| Mutex::new(0));

impl Field {
    /// Construct (or fetch the interned copy of) GF(p^k). When `modulus` is
    /// omitted the lexicographically smallest irreducible monic polynomial of
    /// degree k is used, so the result is deterministic across runs.
    pub fn new(p: u64, k: usize, modulus: Option<&[u64]>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NonPrimeCharacteristic(p));
        }
        if k == 0 {
            return Err(GfError::InvalidModulusDegree { expected: 1, got: 0 });
        }
        let order = p.checked_pow(k as u32).filter(|&o| o <= MAX_FIELD_ORDER);
        let order = order.ok_or(GfError::FieldTooLarge(p.pow(k.min(16) as u32)))?;

        let modulus: Vec<u64> = match modulus {
            Some(m) => {
                let mut m: Vec<u64> = m.iter().map(|c| c % p).collect();
                ptrim(&mut m);
                if m.len() != k + 1 {
                    return Err(GfError::InvalidModulusDegree {
                        expected: k,
                        got: m.len().saturating_sub(1),
                    });
                }
                if m[k] != 1 {
                    // normalize to monic
                    let inv = pinv_scalar(m[k], p);
                    for c in m.iter_mut() {
                        *c = (*c * inv) % p;
                    }
                }
                if k > 1 && !poly_is_irreducible(&m, p) {
                    let s = m
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",");
                    return Err(GfError::ReducibleModulus(s, p));
                }
                m
            }
            None => default_modulus(p, k),
        };

        let key = (p, k, modulus.clone());
        let mut reg = REGISTRY.lock().unwrap();
        if let Some(f) = reg.get(&key) {
            return Ok(f.clone());
        }

        let n = order as usize;
        let digits = |idx: usize| -> Vec<u64> {
            let mut v = Vec::with_capacity(k);
            let mut c = idx as u64;
            for _ in 0..k {
                v.push(c % p);
                c /= p;
            }
            v
        };
        let undigits = |v: &[u64]| -> u32 {
            let mut idx = 0u64;
            for &c in v.iter().rev() {
                idx = idx * p + c;
            }
            idx as u32
        };

        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        let mut neg = vec![0u32; n];
        for a in 0..n {
            let da = digits(a);
            let nv: Vec<u64> = da.iter().map(|&c| (p - c) % p).collect();
            neg[a] = undigits(&nv);
            for b in 0..n {
                let db = digits(b);
                let sum: Vec<u64> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[a * n + b] = undigits(&sum);
                let prod = prem(&pmul(&da, &db, p), &modulus, p);
                let mut pv = prod;
                pv.resize(k, 0);
                mul[a * n + b] = undigits(&pv);
            }
        }
        let mut inv = vec![0u32; n];
        for a in 1..n {
            inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap() as u32;
        }

        let mut next = NEXT_ID.lock().unwrap();
        let id = *next;
        *next += 1;
        let field = Field(Arc::new(FieldInner {
            id,
            p,
            k,
            order,
            modulus,
            add,
            mul,
            neg,
            inv,
        }));
        reg.insert(key, field.clone());
        Ok(field)
    }

    /// GF(q) for a prime power q, with the default modulus.
    pub fn of_order(q: u64) -> Result<Field, GfError> {
        let (p, k) = prime_power(q).ok_or(GfError::NonPrimeCharacteristic(q))?;
        Field::new(p, k, None)
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn degree(&self) -> usize {
        self.0.k
    }
    pub fn order(&self) -> u64 {
        self.0.order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub(crate) fn id(&self) -> u64 {
        self.0.id
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(0)
    }
    pub fn one(&self) -> FieldElement {
        self.elem(1)
    }

    /// The residue class of x; for prime fields this is just 1.
    pub fn poly_generator(&self) -> FieldElement {
        if self.0.k == 1 {
            self.one()
        } else {
            self.elem(self.0.p as u32)
        }
    }

    pub fn elem(&self, idx: u32) -> FieldElement {
        assert!((idx as u64) < self.0.order, "element index out of range");
        FieldElement {
            field: self.clone(),
            idx,
        }
    }

    /// The image of an integer under the canonical map Z -> GF(p) -> GF(p^k).
    pub fn elem_from_int(&self, c: u64) -> FieldElement {
        self.elem((c % self.0.p) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.0.k, "too many coefficients");
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            idx = idx * self.0.p + (c % self.0.p);
        }
        self.elem(idx as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.0.order as u32).map(move |i| self.elem(i))
    }

    /// Orders of the subfields of this field: p^d for each divisor d of k.
    pub fn subfield_orders(&self) -> Vec<u64> {
        (1..=self.0.k)
            .filter(|d| self.0.k % d == 0)
            .map(|d| self.0.p.pow(d as u32))
            .collect()
    }

    pub fn is_subfield_order(&self, q: u64) -> bool {
        self.subfield_orders().contains(&q)
    }

    // raw index arithmetic, used by the matrix layer
    #[inline]
    pub(crate) fn add_idx(&self, a: u32, b: u32) -> u32 {
        self.0.add[a as usize * self.0.order as usize + b as usize]
    }
    #[inline]
    pub(crate) fn mul_idx(&self, a: u32, b: u32) -> u32 {
        self.0.mul[a as usize * self.0.order as usize + b as usize]
    }
    #[inline]
    pub(crate) fn neg_idx(&self, a: u32) -> u32 {
        self.0.neg[a as usize]
    }
    #[inline]
    pub(crate) fn inv_idx(&self, a: u32) -> u32 {
        assert!(a != 0, "division by zero");
        self.0.inv[a as usize]
    }
    #[inline]
    pub(crate) fn sub_idx(&self, a: u32, b: u32) -> u32 {
        self.add_idx(a, self.neg_idx(b))
    }

    pub(crate) fn pow_idx(&self, a: u32, mut e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        e %= self.0.order - 1;
        if e == 0 {
            return 1;
        }
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    fn describe(&self) -> String {
        format!("GF({})", self.0.order)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.id == other.0.id
    }
}
impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.id.hash(state);
    }
}

impl PartialOrd for Field {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Field {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.id.cmp(&other.0.id)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self
            .0
            .modulus
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "GF({}; modulus {})", self.0.order, m)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

// ---------------------------------------------------------------------------
// FieldElement
// ---------------------------------------------------------------------------

/// A value in a specific field. Cheap to clone; hashable; ordered by index
/// within its field.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    idx: u32,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn index(&self) -> u32 {
        self.idx
    }
    pub fn is_zero(&self) -> bool {
        self.idx == 0
    }
    pub fn is_one(&self) -> bool {
        self.idx == 1
    }

    /// Coefficient vector over GF(p), low-to-high, length k.
    pub fn coeffs(&self) -> Vec<u64> {
        let p = self.field.p();
        let mut v = Vec::with_capacity(self.field.degree());
        let mut c = self.idx as u64;
        for _ in 0..self.field.degree() {
            v.push(c % p);
            c /= p;
        }
        v
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        self.field.elem(self.field.pow_idx(self.idx, e))
    }

    pub fn inverse(&self) -> Option<FieldElement> {
        if self.idx == 0 {
            None
        } else {
            Some(self.field.elem(self.field.inv_idx(self.idx)))
        }
    }

    /// a^q where q is an admissible subfield order. The map is a field
    /// automorphism fixing GF(q) pointwise.
    pub fn frobenius(&self, q: u64) -> Result<FieldElement, GfError> {
        if !self.field.is_subfield_order(q) {
            return Err(GfError::InvalidSubfieldOrder {
                q,
                order: self.field.order(),
            });
        }
        Ok(self.pow(q))
    }

    /// Multiplicative order; None for zero.
    pub fn mult_order(&self) -> Option<u64> {
        if self.idx == 0 {
            return None;
        }
        let mut acc = self.idx;
        let mut e = 1;
        while acc != 1 {
            acc = self.field.mul_idx(acc, self.idx);
            e += 1;
        }
        Some(e)
    }

    /// Degree of this element over the subfield of order q: the least e with
    /// a^(q^e) = a.
    pub fn degree_over(&self, q: u64) -> Result<usize, GfError> {
        if !self.field.is_subfield_order(q) {
            return Err(GfError::InvalidSubfieldOrder {
                q,
                order: self.field.order(),
            });
        }
        let mut conj = self.pow(q);
        let mut e = 1;
        while conj.idx != self.idx {
            conj = conj.pow(q);
            e += 1;
        }
        Ok(e)
    }

    /// Minimal polynomial over the subfield GF(q), returned with coefficients
    /// in this element's field (they all lie in the embedded copy of GF(q)).
    pub fn minimal_polynomial(&self, q: u64) -> Result<Poly, GfError> {
        if !self.field.is_subfield_order(q) {
            return Err(GfError::InvalidSubfieldOrder {
                q,
                order: self.field.order(),
            });
        }
        // distinct conjugates z, z^q, z^{q^2}, ...
        let mut conjugates = vec![self.clone()];
        let mut c = self.pow(q);
        while c.idx != self.idx {
            conjugates.push(c.clone());
            c = c.pow(q);
        }
        let mut poly = Poly::one(&self.field);
        for z in &conjugates {
            let linear = Poly::new(&self.field, vec![-z.clone(), self.field.one()]);
            poly = poly.mul(&linear);
        }
        for c in &poly.coeffs {
            debug_assert_eq!(c.pow(q).idx, c.idx, "minimal polynomial not over GF(q)");
        }
        Ok(poly)
    }

    fn check_same(&self, other: &FieldElement) {
        if self.field != other.field {
            panic!(
                "{}",
                GfError::MixedFields(self.field.describe(), other.field.describe())
            );
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && self.field == other.field
    }
}
impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.id().hash(state);
        self.idx.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.field.id(), self.idx).cmp(&(other.field.id(), other.idx))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Elements print as their coefficient list low-to-high, e.g. "1,1,0".
impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self
            .coeffs()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",");
        write!(f, "{}", s)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $table:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.check_same(&rhs);
                let idx = self.field.$table(self.idx, rhs.idx);
                self.field.elem(idx)
            }
        }
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.check_same(rhs);
                let idx = self.field.$table(self.idx, rhs.idx);
                self.field.elem(idx)
            }
        }
    };
}

binop!(Add, add, add_idx);
binop!(Sub, sub, sub_idx);
binop!(Mul, mul, mul_idx);

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        self.check_same(&rhs);
        let idx = self.field.mul_idx(self.idx, self.field.inv_idx(rhs.idx));
        self.field.elem(idx)
    }
}
impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.check_same(rhs);
        let idx = self.field.mul_idx(self.idx, self.field.inv_idx(rhs.idx));
        self.field.elem(idx)
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let idx = self.field.neg_idx(self.idx);
        self.field.elem(idx)
    }
}
impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let idx = self.field.neg_idx(self.idx);
        self.field.elem(idx)
    }
}

// ---------------------------------------------------------------------------
// Polynomials over a field
// ---------------------------------------------------------------------------

/// Dense polynomial with coefficients low-to-high; no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, vec![])
    }
    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![field.one()])
    }
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn from_ints(field: &Field, coeffs: &[u64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.elem_from_int(c)).collect())
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Prints as a comma-separated coefficient list low-to-high (e.g. "1,1,0,1"
/// for x^3+x+1 over a prime field). Over extension fields the coefficients,
/// themselves lists, are separated by ';'.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.field.degree() == 1 { "," } else { ";" };
        let s = self
            .coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(sep);
        write!(f, "{}", s)
    }
}

// ---------------------------------------------------------------------------
// Small linear algebra over GF(p) on raw vectors; enough for the embedding
// machinery and the subfield independence test.
// ---------------------------------------------------------------------------

fn prow_reduce(rows: &mut Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pinv_scalar(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let c = rows[r][col];
                for j in 0..cols {
                    rows[r][j] = (rows[r][j] + p * p - c * rows[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rank
}

fn pmat_inverse(mat: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = mat.len();
    let mut aug: Vec<Vec<u64>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    if prow_reduce(&mut aug, p) < n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

// ---------------------------------------------------------------------------
// Subfield embeddings
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct EmbeddingInner {
    source: Field,
    target: Field,
    n: usize,
    fwd: Vec<u32>,
    rev: Vec<Option<u32>>,
    alpha_pows: Vec<u32>,
    /// inverse of the GF(p)-matrix whose columns expand embed(e_i)*alpha^j
    coords_inv: Vec<Vec<u64>>,
}

/// The embedding GF(q) -> GF(q^n) determined by sending the source field's
/// polynomial generator to the first root of the source modulus in the target
/// field. Computed once and cached per (source, target) pair.
///
/// Also carries coordinates with respect to the basis 1, alpha, ...,
/// alpha^(n-1) of the target over the image, where alpha is the target's
/// polynomial generator.
#[derive(Clone)]
pub struct SubfieldEmbedding(Arc<EmbeddingInner>);

static EMB_REGISTRY: Lazy<Mutex<HashMap<(u64, u64), SubfieldEmbedding>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

impl SubfieldEmbedding {
    pub fn new(source: &Field, target: &Field) -> Result<SubfieldEmbedding, GfError> {
        if source.p() != target.p() || target.degree() % source.degree() != 0 {
            return Err(GfError::InvalidSubfieldOrder {
                q: source.order(),
                order: target.order(),
            });
        }
        let key = (source.id(), target.id());
        if let Some(e) = EMB_REGISTRY.lock().unwrap().get(&key) {
            return Ok(e.clone());
        }

        let p = source.p();
        let m = source.degree();
        let big_k = target.degree();
        let n = big_k / m;

        // root of the source modulus in the target field
        let src_mod = Poly::from_ints(target, source.modulus());
        let beta = target
            .elements()
            .find(|y| src_mod.eval(y).is_zero())
            .expect("the source modulus splits in the target field");

        let mut fwd = vec![0u32; source.order() as usize];
        let mut rev = vec![None; target.order() as usize];
        for a in source.elements() {
            // evaluate a's coefficient polynomial at beta
            let mut acc = target.zero();
            for c in a.coeffs().iter().rev() {
                acc = &(&acc * &beta) + &target.elem_from_int(*c);
            }
            fwd[a.index() as usize] = acc.index();
            rev[acc.index() as usize] = Some(a.index());
        }

        // sanity: injective + multiplicative + additive on a full sweep
        for a in source.elements() {
            for b in source.elements() {
                let fa = fwd[a.index() as usize];
                let fb = fwd[b.index() as usize];
                debug_assert_eq!(
                    target.add_idx(fa, fb),
                    fwd[source.add_idx(a.index(), b.index()) as usize]
                );
                debug_assert_eq!(
                    target.mul_idx(fa, fb),
                    fwd[source.mul_idx(a.index(), b.index()) as usize]
                );
            }
        }

        let alpha = target.poly_generator();
        let mut alpha_pows = Vec::with_capacity(n);
        let mut acc = target.one();
        for _ in 0..n {
            alpha_pows.push(acc.index());
            acc = &acc * &alpha;
        }

        // columns: GF(p)-expansion of embed(e_i) * alpha^j, (j,i) j-major
        let mut cols: Vec<Vec<u64>> = Vec::with_capacity(big_k);
        for j in 0..n {
            for i in 0..m {
                let e_i = source.elem(p.pow(i as u32) as u32);
                let v = target.mul_idx(fwd[e_i.index() as usize], alpha_pows[j]);
                cols.push(target.elem(v).coeffs());
            }
        }
        let mat: Vec<Vec<u64>> = (0..big_k)
            .map(|r| (0..big_k).map(|c| cols[c][r]).collect())
            .collect();
        let coords_inv = pmat_inverse(&mat, p).expect("expansion basis is invertible");

        let emb = SubfieldEmbedding(Arc::new(EmbeddingInner {
            source: source.clone(),
            target: target.clone(),
            n,
            fwd,
            rev,
            alpha_pows,
            coords_inv,
        }));
        EMB_REGISTRY.lock().unwrap().insert(key, emb.clone());
        Ok(emb)
    }

    pub fn source(&self) -> &Field {
        &self.0.source
    }
    pub fn target(&self) -> &Field {
        &self.0.target
    }
    /// Extension degree n = [target : source].
    pub fn extension_degree(&self) -> usize {
        self.0.n
    }
    pub fn q(&self) -> u64 {
        self.0.source.order()
    }

    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        assert!(a.field() == &self.0.source, "element not in the source field");
        self.0.target.elem(self.0.fwd[a.index() as usize])
    }

    pub fn embed_idx(&self, idx: u32) -> u32 {
        self.0.fwd[idx as usize]
    }

    /// Preimage under the embedding, if the element lies in the image.
    pub fn preimage(&self, y: &FieldElement) -> Option<FieldElement> {
        assert!(y.field() == &self.0.target, "element not in the target field");
        self.0.rev[y.index() as usize].map(|i| self.0.source.elem(i))
    }

    pub fn in_image(&self, y: &FieldElement) -> bool {
        self.0.rev[y.index() as usize].is_some()
    }

    /// Coordinates of y over the source field with respect to the basis
    /// 1, alpha, ..., alpha^(n-1): y = sum_j embed(c_j) alpha^j.
    pub fn coords(&self, y: &FieldElement) -> Vec<FieldElement> {
        assert!(y.field() == &self.0.target, "element not in the target field");
        let p = self.0.source.p();
        let m = self.0.source.degree();
        let digits = y.coeffs();
        let big_k = digits.len();
        let mut w = vec![0u64; big_k];
        for (r, row) in self.0.coords_inv.iter().enumerate() {
            let mut acc = 0u64;
            for (c, &x) in row.iter().enumerate() {
                acc = (acc + x * digits[c]) % p;
            }
            w[r] = acc;
        }
        (0..self.0.n)
            .map(|j| {
                let mut idx = 0u64;
                for i in (0..m).rev() {
                    idx = idx * p + w[j * m + i];
                }
                self.0.source.elem(idx as u32)
            })
            .collect()
    }

    /// Inverse of `coords`.
    pub fn lift(&self, coords: &[FieldElement]) -> FieldElement {
        assert_eq!(coords.len(), self.0.n, "coordinate vector length");
        let t = &self.0.target;
        let mut acc = 0u32;
        for (j, c) in coords.iter().enumerate() {
            let e = t.mul_idx(self.0.fwd[c.index() as usize], self.0.alpha_pows[j]);
            acc = t.add_idx(acc, e);
        }
        t.elem(acc)
    }

    pub(crate) fn lift_idx(&self, coords: &[u32]) -> u32 {
        let t = &self.0.target;
        let mut acc = 0u32;
        for (j, &c) in coords.iter().enumerate() {
            let e = t.mul_idx(self.0.fwd[c as usize], self.0.alpha_pows[j]);
            acc = t.add_idx(acc, e);
        }
        acc
    }

    pub(crate) fn coords_idx(&self, y: u32) -> Vec<u32> {
        let p = self.0.source.p();
        let m = self.0.source.degree();
        let digits = self.0.target.elem(y).coeffs();
        let big_k = digits.len();
        let mut w = vec![0u64; big_k];
        for (r, row) in self.0.coords_inv.iter().enumerate() {
            let mut acc = 0u64;
            for (c, &x) in row.iter().enumerate() {
                acc = (acc + x * digits[c]) % p;
            }
            w[r] = acc;
        }
        (0..self.0.n)
            .map(|j| {
                let mut idx = 0u64;
                for i in (0..m).rev() {
                    idx = idx * p + w[j * m + i];
                }
                idx as u32
            })
            .collect()
    }
}

impl fmt::Debug for SubfieldEmbedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.0.source, self.0.target)
    }
}

/// True iff no nontrivial GF(q)-combination of the given elements vanishes.
/// Implemented by expanding over the prime field: the elements are
/// GF(q)-independent iff the GF(p)-span of { b*x_i : b basis of GF(q) } has
/// dimension deg_p(q) * len.
pub fn independent_over_subfield(elems: &[FieldElement], q: u64) -> Result<bool, GfError> {
    if elems.is_empty() {
        return Ok(true);
    }
    let field = elems[0].field().clone();
    for e in elems {
        if e.field() != &field {
            panic!(
                "{}",
                GfError::MixedFields(field.to_string(), e.field().to_string())
            );
        }
    }
    if !field.is_subfield_order(q) {
        return Err(GfError::InvalidSubfieldOrder {
            q,
            order: field.order(),
        });
    }
    let p = field.p();
    // GF(p)-basis of the embedded subfield {y : y^q = y}
    let mut sub_basis: Vec<FieldElement> = Vec::new();
    let mut span: Vec<Vec<u64>> = Vec::new();
    for y in field.elements() {
        if y.pow(q) == y && !y.is_zero() {
            let mut trial = span.clone();
            trial.push(y.coeffs());
            if prow_reduce(&mut trial, p) > span.len() {
                span = trial;
                sub_basis.push(y);
            }
        }
    }
    let d = sub_basis.len();
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d * elems.len());
    for x in elems {
        for b in &sub_basis {
            rows.push((b * x).coeffs());
        }
    }
    let rank = prow_reduce(&mut rows, p);
    Ok(rank == d * elems.len())
}
