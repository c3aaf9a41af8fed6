//! Finite fields GF(p^m) in polynomial basis over GF(p).
//!
//! An element is stored as a `u32` whose base-`p` digits are the polynomial
//! coefficients, lowest degree first: the element `c_0 + c_1 x + ...` has raw
//! value `c_0 + c_1 p + c_2 p^2 + ...`. Matrices and polynomials elsewhere in
//! the crate hold raw values next to a single [`Field`] handle; [`FieldElem`]
//! is the checked, self-describing wrapper used at API boundaries.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 20;

/// Extension fields up to this order get exp/log tables.
const TABLE_MAX_ORDER: u32 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds the cap of 2^20")]
    TooLarge { p: u64, m: u32 },
    #[error("modulus {coeffs:?} is not a monic polynomial of degree {m} over GF({p})")]
    BadModulus { coeffs: Vec<u32>, p: u32, m: u32 },
    #[error("modulus {coeffs:?} is reducible over GF({p})")]
    Reducible { coeffs: Vec<u32>, p: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("operands belong to different fields ({left} vs {right})")]
    FieldMismatch { left: String, right: String },
    #[error("raw value {value} is not an element of GF({q})")]
    OutOfRange { value: u64, q: u32 },
    #[error("cannot parse {text:?} as an element of GF({q}): {reason}")]
    Parse { text: String, q: u32, reason: &'static str },
}

/// A finite field GF(p^m). Cheap to clone; clones share the same tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, lowest coefficient first, length `m + 1`.
    modulus: Vec<u32>,
    tables: Option<LogTables>,
    /// Addition table for odd-characteristic extension fields of order <= 256.
    add_table: Option<Vec<u32>>,
}

const ADD_TABLE_MAX_ORDER: u32 = 256;

struct LogTables {
    /// `exp[i] = g^i` for `i < 2(q - 1)`, doubled to skip a reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds GF(p^m). With `modulus == None` and `m > 1` the smallest monic
    /// irreducible of degree `m` is chosen, ordering candidates by their raw
    /// value (highest coefficient most significant). A supplied modulus is
    /// given lowest coefficient first and must include the leading 1; it is
    /// ignored for prime fields.
    pub fn new(p: u64, m: u32, modulus: Option<&[u32]>) -> Result<Field, GfError> {
        if !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        if m == 0 {
            return Err(GfError::ZeroDegree);
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(GfError::TooLarge { p, m })?;
        let (p, q) = (p as u32, q as u32);

        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            match modulus {
                Some(c) => {
                    if c.len() != m as usize + 1 || c[m as usize] != 1 || c.iter().any(|&x| x >= p) {
                        return Err(GfError::BadModulus { coeffs: c.to_vec(), p, m });
                    }
                    if !is_irreducible(c, p) {
                        return Err(GfError::Reducible { coeffs: c.to_vec(), p });
                    }
                    c.to_vec()
                }
                None => smallest_irreducible(p, m),
            }
        };

        let mut inner = Inner { p, m, q, modulus, tables: None, add_table: None };
        if m > 1 && q <= TABLE_MAX_ORDER {
            inner.tables = Some(LogTables::build(&inner));
        }
        if m > 1 && p != 2 && q <= ADD_TABLE_MAX_ORDER {
            let table = (0..q).flat_map(|a| (0..q).map(move |b| digitwise_add(p, m, a, b))).collect();
            inner.add_table = Some(table);
        }
        Ok(Field(Arc::new(inner)))
    }

    /// The prime field GF(p).
    pub fn prime(p: u64) -> Result<Field, GfError> {
        Field::new(p, 1, None)
    }

    /// GF(q) with the default modulus, `q` a prime power.
    pub fn with_order(q: u64) -> Result<Field, GfError> {
        let (p, m) = prime_power(q).ok_or(GfError::NotPrimePower(q))?;
        Field::new(p, m, None)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, lowest coefficient first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    #[inline]
    pub fn contains(&self, raw: u32) -> bool {
        raw < self.0.q
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { field: self.clone(), value: 0 }
    }

    pub fn one(&self) -> FieldElem {
        FieldElem { field: self.clone(), value: 1 }
    }

    pub fn elem(&self, raw: u32) -> Result<FieldElem, GfError> {
        if !self.contains(raw) {
            return Err(GfError::OutOfRange { value: raw as u64, q: self.0.q });
        }
        Ok(FieldElem { field: self.clone(), value: raw })
    }

    /// Element from its coefficient vector, lowest degree first.
    pub fn elem_from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElem, GfError> {
        let Inner { p, m, q, .. } = *self.0;
        if coeffs.len() != m as usize || coeffs.iter().any(|&c| c >= p) {
            return Err(GfError::OutOfRange { value: coeffs.iter().map(|&c| c as u64).sum(), q });
        }
        let raw = coeffs.iter().rev().fold(0u32, |acc, &c| acc * p + c);
        Ok(FieldElem { field: self.clone(), value: raw })
    }

    /// All `q` elements, zero first, in increasing raw order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.0.q).map(move |v| FieldElem { field: self.clone(), value: v })
    }

    /// Coefficients of a raw element, lowest degree first.
    pub fn digits(&self, raw: u32) -> Vec<u32> {
        let p = self.0.p;
        let mut v = raw;
        (0..self.0.m)
            .map(|_| {
                let d = v % p;
                v /= p;
                d
            })
            .collect()
    }

    fn raw_from_digits(&self, digits: &[u32]) -> u32 {
        let p = self.0.p;
        digits.iter().rev().fold(0u32, |acc, &c| acc * p + c)
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let Inner { p, m, .. } = *self.0;
        if p == 2 {
            return a ^ b;
        }
        if m == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        match &self.0.add_table {
            Some(t) => t[(a * self.0.q + b) as usize],
            None => digitwise_add(p, m, a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let Inner { p, m, .. } = *self.0;
        if p == 2 || a == 0 {
            return a;
        }
        if m == 1 {
            return p - a;
        }
        let (mut a, mut out, mut place) = (a, 0u32, 1u32);
        for _ in 0..m {
            out += ((p - a % p) % p) * place;
            a /= p;
            place *= p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.0;
        if inner.m == 1 {
            return ((a as u64 * b as u64) % inner.p as u64) as u32;
        }
        match &inner.tables {
            Some(t) => t.exp[(t.log[a as usize] + t.log[b as usize]) as usize],
            None => self.poly_mul(a, b),
        }
    }

    /// Multiplication through the polynomial representation, skipping the
    /// tables even when they exist.
    pub fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let Inner { p, m, .. } = *self.0;
        let m = m as usize;
        let p64 = p as u64;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p64;
            }
        }
        // x^m = -(c_0 + ... + c_{m-1} x^{m-1})
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mc) in self.0.modulus[..m].iter().enumerate() {
                let idx = top - m + i;
                prod[idx] = (prod[idx] + (p64 - c) * mc as u64) % p64;
            }
        }
        let low: Vec<u32> = prod[..m].iter().map(|&c| c as u32).collect();
        self.raw_from_digits(&low)
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let inner = &*self.0;
        Some(match &inner.tables {
            Some(t) => {
                let order = inner.q - 1;
                t.exp[((order - t.log[a as usize]) % order) as usize]
            }
            None => self.pow(a, inner.q as u64 - 2),
        })
    }

    /// Text form: `m` base-`p` digits, lowest coefficient first. Digits are
    /// `0-9a-z` when `p <= 36`, otherwise decimal numbers joined by `.`.
    pub fn format(&self, raw: u32) -> String {
        let digits = self.digits(raw);
        if self.0.p <= 36 {
            digits.iter().map(|&d| char::from_digit(d, 36).unwrap()).collect()
        } else {
            digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
        }
    }

    pub fn parse(&self, text: &str) -> Result<u32, GfError> {
        let Inner { p, m, q, .. } = *self.0;
        let err = |reason| GfError::Parse { text: text.to_string(), q, reason };
        let digits: Vec<u32> = if p <= 36 {
            text.chars()
                .map(|c| c.to_digit(36).filter(|&d| d < p).ok_or(err("digit out of range")))
                .collect::<Result<_, _>>()?
        } else {
            text.split('.')
                .map(|s| s.parse::<u32>().ok().filter(|&d| d < p).ok_or(err("digit out of range")))
                .collect::<Result<_, _>>()?
        };
        if digits.len() != m as usize {
            return Err(err("wrong number of digits"));
        }
        Ok(self.raw_from_digits(&digits))
    }

    fn describe(&self) -> String {
        let Inner { p, m, q, .. } = *self.0;
        if m == 1 {
            format!("GF({p})")
        } else {
            format!("GF({q}) = GF({p})[x]/({})", format_poly(&self.0.modulus))
        }
    }

    pub(crate) fn check_same(&self, other: &Field) -> Result<(), GfError> {
        if self == other {
            Ok(())
        } else {
            Err(GfError::FieldMismatch { left: self.describe(), right: other.describe() })
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.m == other.0.m && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.m.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl LogTables {
    fn build(inner: &Inner) -> LogTables {
        // A temporary table-free handle so poly_mul can run during setup.
        let bare = Field(Arc::new(Inner {
            p: inner.p,
            m: inner.m,
            q: inner.q,
            modulus: inner.modulus.clone(),
            tables: None,
            add_table: None,
        }));
        let order = (inner.q - 1) as usize;
        for g in 2..inner.q {
            let mut exp = Vec::with_capacity(2 * order);
            let mut x = 1u32;
            let mut primitive = true;
            for i in 0..order {
                if x == 1 && i > 0 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x = bare.poly_mul(x, g);
            }
            if !primitive {
                continue;
            }
            let mut log = vec![0u32; inner.q as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            exp.extend_from_within(..);
            return LogTables { exp, log };
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

fn digitwise_add(p: u32, m: u32, a: u32, b: u32) -> u32 {
    let (mut a, mut b, mut out, mut place) = (a, b, 0u32, 1u32);
    for _ in 0..m {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut m) = (q, 0u32);
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

fn format_poly(coeffs: &[u32]) -> String {
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, &c)| c != 0)
        .map(|(i, &c)| {
            let var = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => var,
                _ => format!("{c}{var}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Remainder of `f` modulo monic `g` over GF(p); both lowest-first.
fn poly_rem(f: &[u32], g: &[u32], p: u32) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = f.iter().map(|&c| c as u64).collect();
    let dg = g.len() - 1;
    while r.len() > dg {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let base = r.len() - dg;
            for (i, &gc) in g[..dg].iter().enumerate() {
                r[base + i] = (r[base + i] + (p - lead) * gc as u64) % p;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Trial division by every monic polynomial of degree `1..=m/2`.
fn is_irreducible(f: &[u32], p: u32) -> bool {
    let m = f.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    if f[0] == 0 {
        return false;
    }
    for deg in 1..=m / 2 {
        let count = (p as u64).pow(deg as u32);
        for v in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut x = v;
            for _ in 0..deg {
                g.push((x % p as u64) as u32);
                x /= p as u64;
            }
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(p: u32, m: u32) -> Vec<u32> {
    let count = (p as u64).pow(m);
    for v in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut x = v;
        for _ in 0..m {
            f.push((x % p as u64) as u32);
            x /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// An element of a [`Field`] carrying its field. Binary operations check
/// that both operands come from the same field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: Field,
    value: u32,
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Raw value: coefficients as base-`p` digits, lowest first.
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn binary(&self, other: &FieldElem, op: impl Fn(&Field, u32, u32) -> u32) -> Result<FieldElem, GfError> {
        self.field.check_same(&other.field)?;
        Ok(FieldElem { value: op(&self.field, self.value, other.value), field: self.field.clone() })
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.binary(other, Field::add)
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.binary(other, Field::sub)
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.binary(other, Field::mul)
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, GfError> {
        self.mul(&other.inv()?)
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { value: self.field.neg(self.value), field: self.field.clone() }
    }

    pub fn inv(&self) -> Result<FieldElem, GfError> {
        let value = self.field.inv(self.value).ok_or(GfError::ZeroInverse)?;
        Ok(FieldElem { value, field: self.field.clone() })
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        FieldElem { value: self.field.pow(self.value, e), field: self.field.clone() }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_poly(&self.coeffs()))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.format(self.value))
    }
}
