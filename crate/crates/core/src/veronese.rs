//! Forms of fixed degree in `X_0..X_n`, the d-uple map `L -> L^d`, and the
//! osculating spaces `{ L^(d-k) F : deg F = k }` of the Veronese variety.
//!
//! Coordinates of a degree-d form are taken in the monomial basis ordered
//! graded-lexicographically, descending, with `X_0 > X_1 > ... > X_n`. For
//! n = 2, d = 2 that is `X0^2, X0X1, X0X2, X1^2, X1X2, X2^2`. The order is part
//! of the serialized code format.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::gf::{Field, FieldElem, GfError};
use crate::linalg::{LinalgError, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VeroneseError {
    #[error("number of variables minus one must be at least 1, got n = {0}")]
    BadVariableCount(usize),
    #[error("degree must be at least 1, got {0}")]
    BadDegree(u32),
    #[error("osculation order k = {k} outside 1..{d}")]
    BadOrder { k: u32, d: u32 },
    #[error("polynomials live in different rings (n = {left} vs n = {right})")]
    RingMismatch { left: usize, right: usize },
    #[error("{expected} coefficients expected, got {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("a linear form needs at least one nonzero coefficient")]
    ZeroForm,
    #[error("cannot parse linear form {0:?}")]
    ParseForm(String),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Binomial coefficient, exact in `u64`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Exponent vector `(d_0, ..., d_n)` of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (i, &e) in self.0.iter().enumerate().filter(|(_, &e)| e > 0) {
            match e {
                1 => write!(f, "X{i}")?,
                _ => write!(f, "X{i}^{e}")?,
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// The monomials of degree `d` in `n + 1` variables, in grlex-descending
/// order. `index_of` ranks combinatorially, so it never consults the list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    d: u32,
    monomials: Vec<MultiIndex>,
}

impl MonomialBasis {
    /// Degree 0 is allowed here: it is the one-dimensional space of
    /// constants, needed for products like `L1^(d-k) L2^(d-k) G` with G in R_0.
    pub fn new(n: usize, d: u32) -> Result<MonomialBasis, VeroneseError> {
        if n < 1 {
            return Err(VeroneseError::BadVariableCount(n));
        }
        let mut monomials = Vec::with_capacity(binomial(n as u64 + d as u64, n as u64) as usize);
        let mut cur = Vec::with_capacity(n + 1);
        fill(n + 1, d, &mut cur, &mut monomials);
        Ok(MonomialBasis { n, d, monomials })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn monomial_at(&self, i: usize) -> Option<&MultiIndex> {
        self.monomials.get(i)
    }

    /// Position of a degree-d monomial. Counts the monomials that precede it:
    /// those with a larger exponent in the first variable where they differ.
    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        if alpha.0.len() != self.n + 1 || alpha.degree() != self.d {
            return None;
        }
        let mut rank = 0u64;
        let mut remaining = self.d as u64;
        for (i, &e) in alpha.0[..self.n].iter().enumerate() {
            let rest_vars = (self.n - i) as u64; // variables after position i
            for larger in (e as u64 + 1)..=remaining {
                let left = remaining - larger;
                rank += binomial(left + rest_vars - 1, rest_vars - 1);
            }
            remaining -= e as u64;
        }
        Some(rank as usize)
    }
}

fn fill(vars: usize, d: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if vars == 1 {
        cur.push(d);
        out.push(MultiIndex(cur.clone()));
        cur.pop();
        return;
    }
    for e in (0..=d).rev() {
        cur.push(e);
        fill(vars - 1, d - e, cur, out);
        cur.pop();
    }
}

/// Monomial basis of R_d; rejects n < 1 and d < 1.
pub fn monomial_basis(n: usize, d: u32) -> Result<MonomialBasis, VeroneseError> {
    if d < 1 {
        return Err(VeroneseError::BadDegree(d));
    }
    MonomialBasis::new(n, d)
}

/// A homogeneous form as its dense coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct DensePoly {
    field: Field,
    basis: Arc<MonomialBasis>,
    coeffs: Vec<u32>,
}

impl DensePoly {
    pub fn zero(field: &Field, n: usize, d: u32) -> Result<DensePoly, VeroneseError> {
        let basis = Arc::new(MonomialBasis::new(n, d)?);
        Ok(DensePoly { field: field.clone(), coeffs: vec![0; basis.len()], basis })
    }

    pub fn constant(field: &Field, n: usize, c: u32) -> Result<DensePoly, VeroneseError> {
        let mut p = DensePoly::zero(field, n, 0)?;
        p.coeffs[0] = c;
        Ok(p)
    }

    pub fn monomial(field: &Field, alpha: &MultiIndex) -> Result<DensePoly, VeroneseError> {
        let n = alpha.0.len().saturating_sub(1);
        let mut p = DensePoly::zero(field, n, alpha.degree())?;
        let i = p.basis.index_of(alpha).expect("degree matches by construction");
        p.coeffs[i] = 1;
        Ok(p)
    }

    pub fn from_coeffs(field: &Field, n: usize, d: u32, coeffs: Vec<u32>) -> Result<DensePoly, VeroneseError> {
        let basis = Arc::new(MonomialBasis::new(n, d)?);
        if coeffs.len() != basis.len() {
            return Err(VeroneseError::CoefficientCount { expected: basis.len(), found: coeffs.len() });
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(GfError::OutOfRange { value: bad as u64, q: field.order() }.into());
        }
        Ok(DensePoly { field: field.clone(), basis, coeffs })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn degree(&self) -> u32 {
        self.basis.d
    }

    /// Raw coefficients in basis order.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElem {
        self.field.elem(self.coeffs[i]).expect("coefficients are field elements")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check_ring(&self, other: &DensePoly) -> Result<(), VeroneseError> {
        self.field.check_same(&other.field)?;
        if self.n() != other.n() {
            return Err(VeroneseError::RingMismatch { left: self.n(), right: other.n() });
        }
        Ok(())
    }

    /// Coefficient-wise sum of two forms of the same degree.
    pub fn add(&self, other: &DensePoly) -> Result<DensePoly, VeroneseError> {
        self.check_ring(other)?;
        if self.degree() != other.degree() {
            return Err(VeroneseError::CoefficientCount { expected: self.coeffs.len(), found: other.coeffs.len() });
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(DensePoly { field: self.field.clone(), basis: self.basis.clone(), coeffs })
    }

    /// Product of forms: convolution over exponent-wise sums.
    pub fn mul(&self, other: &DensePoly) -> Result<DensePoly, VeroneseError> {
        self.check_ring(other)?;
        let f = &self.field;
        let mut out = DensePoly::zero(f, self.n(), self.degree() + other.degree())?;
        for (i, &a) in self.coeffs.iter().enumerate().filter(|(_, &a)| a != 0) {
            let alpha = &self.basis.monomials[i];
            for (j, &b) in other.coeffs.iter().enumerate().filter(|(_, &b)| b != 0) {
                let idx = out.basis.index_of(&alpha.plus(&other.basis.monomials[j])).expect("degrees add");
                out.coeffs[idx] = f.add(out.coeffs[idx], f.mul(a, b));
            }
        }
        Ok(out)
    }

    /// `self^e` by repeated multiplication.
    pub fn pow(&self, e: u32) -> Result<DensePoly, VeroneseError> {
        let mut acc = DensePoly::constant(&self.field, self.n(), 1)?;
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .zip(&self.basis.monomials)
            .filter(|(&c, _)| c != 0)
            .map(|(&c, m)| match c {
                1 => m.to_string(),
                _ => format!("({}){}", self.field.format(c), m),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// `f * g`.
pub fn poly_mul(f: &DensePoly, g: &DensePoly) -> Result<DensePoly, VeroneseError> {
    f.mul(g)
}

/// A nonzero linear form up to scaling, normalized so that its first nonzero
/// coefficient is 1. This is a rational point of P^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm {
    field: Field,
    coeffs: Vec<u32>,
}

impl LinearForm {
    /// Normalizes `coeffs` (raw values for `X_0..X_n`).
    pub fn new(field: &Field, coeffs: &[u32]) -> Result<LinearForm, VeroneseError> {
        if coeffs.len() < 2 {
            return Err(VeroneseError::BadVariableCount(coeffs.len().saturating_sub(1)));
        }
        if let Some(&bad) = coeffs.iter().find(|&&c| !field.contains(c)) {
            return Err(GfError::OutOfRange { value: bad as u64, q: field.order() }.into());
        }
        let lead = *coeffs.iter().find(|&&c| c != 0).ok_or(VeroneseError::ZeroForm)?;
        let inv = field.inv(lead).expect("lead is nonzero");
        Ok(LinearForm { field: field.clone(), coeffs: coeffs.iter().map(|&c| field.mul(inv, c)).collect() })
    }

    /// The coordinate form `X_i`.
    pub fn coordinate(field: &Field, n: usize, i: usize) -> Result<LinearForm, VeroneseError> {
        let mut c = vec![0; n + 1];
        c[i] = 1;
        LinearForm::new(field, &c)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn to_poly(&self) -> DensePoly {
        let basis = Arc::new(MonomialBasis::new(self.n(), 1).expect("n >= 1"));
        // degree-1 grlex order is X_0, X_1, ..., X_n
        DensePoly { field: self.field.clone(), basis, coeffs: self.coeffs.clone() }
    }

    /// Text form: coefficients in field text form joined by `:`, e.g. `1:0:11`.
    pub fn to_text(&self) -> String {
        self.coeffs.iter().map(|&c| self.field.format(c)).collect::<Vec<_>>().join(":")
    }

    /// Parses the text form. Non-normalized input is rejected so that labels
    /// stay canonical.
    pub fn parse(field: &Field, text: &str) -> Result<LinearForm, VeroneseError> {
        let coeffs = text.split(':').map(|t| field.parse(t)).collect::<Result<Vec<_>, _>>()?;
        let form = LinearForm::new(field, &coeffs)?;
        if form.coeffs != coeffs {
            return Err(VeroneseError::ParseForm(text.to_string()));
        }
        Ok(form)
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_text())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// The point `L^d` of the Veronese variety, as a degree-d form.
pub fn veronese_point(l: &LinearForm, d: u32) -> Result<DensePoly, VeroneseError> {
    if d < 1 {
        return Err(VeroneseError::BadDegree(d));
    }
    l.to_poly().pow(d)
}

/// Affine cone of the k-osculating space at `L`: the span of
/// `L^(d-k) X^alpha` over all monomials of degree k, inside GF(q)^C(n+d, d).
pub fn osculating_cone(l: &LinearForm, d: u32, k: u32) -> Result<Subspace, VeroneseError> {
    if d < 2 || k < 1 || k >= d {
        return Err(VeroneseError::BadOrder { k, d });
    }
    let head = l.to_poly().pow(d - k)?;
    span_of_multiples(&head, &MonomialBasis::new(l.n(), k)?)
}

/// Span of `head * X^beta` for every monomial `X^beta` of `tail`.
pub(crate) fn span_of_multiples(head: &DensePoly, tail: &MonomialBasis) -> Result<Subspace, VeroneseError> {
    let f = head.field();
    let rows = tail
        .monomials()
        .iter()
        .map(|beta| Ok(head.mul(&DensePoly::monomial(f, beta)?)?.coeffs))
        .collect::<Result<Vec<_>, VeroneseError>>()?;
    let ambient = MonomialBasis::new(head.n(), head.degree() + tail.degree())?.len();
    Ok(Subspace::span(f, ambient, &rows)?)
}

/// `span{ L1^(d-k) L2^(d-k) X^beta : |beta| = 2k - d }`, the predicted
/// intersection of two osculating cones when `2k >= d`.
pub fn intersection_witness(l1: &LinearForm, l2: &LinearForm, d: u32, k: u32) -> Result<Subspace, VeroneseError> {
    if d < 2 || k < 1 || k >= d || 2 * k < d {
        return Err(VeroneseError::BadOrder { k, d });
    }
    let head = l1.to_poly().pow(d - k)?.mul(&l2.to_poly().pow(d - k)?)?;
    span_of_multiples(&head, &MonomialBasis::new(l1.n(), 2 * k - d)?)
}
