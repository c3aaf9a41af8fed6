//! The k-osculating code of the Veronese variety: one codeword per rational
//! point of P^n, namely the affine cone of the k-osculating space there.

use std::collections::{BTreeSet, HashSet};

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::gf::Field;
use crate::linalg::{intersect_oracle, zassenhaus, LinalgError, Subspace, ENUMERATION_CAP};
use crate::veronese::{binomial, intersection_witness, osculating_cone, LinearForm, VeroneseError};

/// Largest packet length accepted by [`build_code`].
pub const MAX_AMBIENT: u64 = 4096;

/// Codeword pairs whose first space has at most this many vectors are also
/// checked by brute-force enumeration.
pub const ORACLE_CAP: u64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("invalid code parameters: {0}")]
    BadParams(String),
    #[error("{what} count {count} exceeds the cap of {cap}")]
    TooLarge { what: &'static str, count: u128, cap: u64 },
    #[error("a code needs at least two codewords, got {0}")]
    TooFewCodewords(usize),
    #[error("codeword {index} has ambient dimension {found}, expected {expected}")]
    AmbientMismatch { index: usize, expected: usize, found: usize },
    #[error("duplicate codeword label {0}")]
    DuplicateLabel(String),
    #[error(transparent)]
    Veronese(#[from] VeroneseError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// All points of P^n(GF(q)) as normalized linear forms: grouped by the
/// position of the leading 1, then lexicographic in the remaining
/// coordinates (first coordinate most significant, raw element order).
pub fn enum_projective_points(n: usize, field: &Field) -> Result<Vec<LinearForm>, CodeError> {
    if n < 1 {
        return Err(VeroneseError::BadVariableCount(n).into());
    }
    let q = field.order() as u128;
    let count = (0..=n as u32).map(|i| q.pow(i)).sum::<u128>();
    if count > ENUMERATION_CAP as u128 {
        return Err(CodeError::TooLarge { what: "projective point", count, cap: ENUMERATION_CAP });
    }
    let mut points = Vec::with_capacity(count as usize);
    for lead in 0..=n {
        let free = n - lead;
        let mut coords = vec![0u32; n + 1];
        coords[lead] = 1;
        for idx in 0..q.pow(free as u32) {
            let mut x = idx;
            for pos in (lead + 1..=n).rev() {
                coords[pos] = (x % q) as u32;
                x /= q;
            }
            points.push(LinearForm::new(field, &coords)?);
        }
    }
    Ok(points)
}

fn ratio_text<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Type `[N, dim, log_q |C|, D]` together with the normalized weight
/// `lambda = dim / N`, rate `log_q |C| / (N dim)` and normalized distance
/// `delta = D / (2 dim)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CodeParams {
    #[serde(rename = "N")]
    pub packet_length: usize,
    pub dim: usize,
    pub size: u64,
    pub log_q_size: f64,
    #[serde(rename = "D")]
    pub min_distance: usize,
    #[serde(serialize_with = "ratio_text")]
    pub lambda: Ratio<u64>,
    pub rate: f64,
    #[serde(serialize_with = "ratio_text")]
    pub delta: Ratio<u64>,
}

impl CodeParams {
    fn from_counts(q: u64, packet_length: usize, dim: usize, size: u64, min_distance: usize) -> CodeParams {
        let log_q_size = (size as f64).ln() / (q as f64).ln();
        CodeParams {
            packet_length,
            dim,
            size,
            log_q_size,
            min_distance,
            lambda: Ratio::new(dim as u64, packet_length as u64),
            rate: log_q_size / (packet_length * dim) as f64,
            delta: Ratio::new(min_distance as u64, 2 * dim as u64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codeword {
    pub label: LinearForm,
    pub space: Subspace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Code {
    n: usize,
    d: u32,
    k: u32,
    field: Field,
    codewords: Vec<Codeword>,
    params: CodeParams,
}

impl Code {
    /// Assembles a code from labelled codewords and computes its parameters.
    pub fn new(n: usize, d: u32, k: u32, field: &Field, codewords: Vec<Codeword>) -> Result<Code, CodeError> {
        check_nkd(n, d, k)?;
        if codewords.len() < 2 {
            return Err(CodeError::TooFewCodewords(codewords.len()));
        }
        let ambient = binomial(n as u64 + d as u64, n as u64) as usize;
        let mut labels = HashSet::new();
        for (index, cw) in codewords.iter().enumerate() {
            if cw.space.ambient_dim() != ambient {
                return Err(CodeError::AmbientMismatch { index, expected: ambient, found: cw.space.ambient_dim() });
            }
            if cw.label.n() != n {
                return Err(CodeError::BadParams(format!("label {} is not a point of P^{n}", cw.label)));
            }
            field.check_same(cw.space.field()).map_err(LinalgError::from)?;
            if !labels.insert(cw.label.clone()) {
                return Err(CodeError::DuplicateLabel(cw.label.to_text()));
            }
        }
        let params = observed_params(field, &codewords)?;
        Ok(Code { n, d, k, field: field.clone(), codewords, params })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn packet_length(&self) -> usize {
        self.params.packet_length
    }
}

fn check_nkd(n: usize, d: u32, k: u32) -> Result<(), CodeError> {
    if n < 1 {
        return Err(CodeError::BadParams(format!("n must be at least 1, got {n}")));
    }
    if d < 2 || k < 1 || k >= d {
        return Err(CodeError::BadParams(format!("need 1 <= k < d, got k = {k}, d = {d}")));
    }
    Ok(())
}

fn pairs(count: usize) -> Vec<(usize, usize)> {
    (0..count).flat_map(|i| (i + 1..count).map(move |j| (i, j))).collect()
}

fn observed_params(field: &Field, codewords: &[Codeword]) -> Result<CodeParams, CodeError> {
    let distances = pairs(codewords.len())
        .into_par_iter()
        .map(|(i, j)| crate::linalg::subspace_distance(&codewords[i].space, &codewords[j].space))
        .collect::<Result<Vec<_>, _>>()?;
    let min_distance = distances.into_iter().min().expect("at least one pair");
    Ok(CodeParams::from_counts(
        field.order() as u64,
        codewords[0].space.ambient_dim(),
        codewords[0].space.dim(),
        codewords.len() as u64,
        min_distance,
    ))
}

/// One codeword per point of P^n(GF(q)): the osculating cone of order k of
/// the degree-d Veronese variety.
pub fn build_code(n: usize, d: u32, k: u32, field: &Field) -> Result<Code, CodeError> {
    check_nkd(n, d, k)?;
    let ambient = binomial(n as u64 + d as u64, n as u64);
    if ambient > MAX_AMBIENT {
        return Err(CodeError::TooLarge { what: "packet length", count: ambient as u128, cap: MAX_AMBIENT });
    }
    let points = enum_projective_points(n, field)?;
    let codewords = points
        .into_par_iter()
        .map(|label| Ok(Codeword { space: osculating_cone(&label, d, k)?, label }))
        .collect::<Result<Vec<_>, CodeError>>()?;
    Code::new(n, d, k, field, codewords)
}

/// Observed parameters, with D by exhaustive pairwise distance.
pub fn code_params(code: &Code) -> CodeParams {
    code.params.clone()
}

/// Intersection dimension of two distinct codewords: `C(2k-d+n, n)` when
/// `2k >= d`, else 0. At `2k = d` this is 1.
pub fn predicted_intersection_dim(n: usize, d: u32, k: u32) -> Result<usize, CodeError> {
    check_nkd(n, d, k)?;
    Ok(if 2 * k >= d { binomial((2 * k - d) as u64 + n as u64, n as u64) as usize } else { 0 })
}

/// Closed-form parameters, without building anything.
pub fn predicted_params(n: usize, d: u32, k: u32, q: u64) -> Result<CodeParams, CodeError> {
    check_nkd(n, d, k)?;
    if q < 2 {
        return Err(CodeError::BadParams(format!("field order must be at least 2, got {q}")));
    }
    let size = (0..=n as u32)
        .try_fold(0u64, |acc, i| acc.checked_add(q.checked_pow(i)?))
        .ok_or_else(|| CodeError::BadParams("code size overflows".into()))?;
    let packet_length = binomial(n as u64 + d as u64, n as u64) as usize;
    let dim = binomial(k as u64 + n as u64, n as u64) as usize;
    let min_distance = 2 * (dim - predicted_intersection_dim(n, d, k)?);
    Ok(CodeParams::from_counts(q, packet_length, dim, size, min_distance))
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Number of codewords or pairs examined.
    pub cases: usize,
    pub detail: String,
    /// Codeword indices witnessing the first failure.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexample: Vec<usize>,
}

impl Check {
    fn pass(name: &'static str, cases: usize, detail: impl Into<String>) -> Check {
        Check { name, passed: true, cases, detail: detail.into(), counterexample: Vec::new() }
    }

    fn fail(name: &'static str, cases: usize, detail: impl Into<String>, witness: Vec<usize>) -> Check {
        Check { name, passed: false, cases, detail: detail.into(), counterexample: witness }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub q: u32,
    pub n: usize,
    pub d: u32,
    pub k: u32,
    pub observed: CodeParams,
    pub predicted: CodeParams,
    pub checks: Vec<Check>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct PairObservation {
    i: usize,
    j: usize,
    inter_dim: usize,
    distance: usize,
    identity: Option<bool>,
    oracle: Option<usize>,
}

/// Builds the code and checks every parameter claim against it.
pub fn verify_theorem(n: usize, d: u32, k: u32, field: &Field) -> Result<TheoremReport, CodeError> {
    verify_code(&build_code(n, d, k, field)?)
}

/// Checks a constructed (or deserialized) code exhaustively over all pairs.
/// Failures become report entries rather than errors.
pub fn verify_code(code: &Code) -> Result<TheoremReport, CodeError> {
    let (n, d, k) = (code.n, code.d, code.k);
    let q = code.field.order();
    let predicted = predicted_params(n, d, k, q as u64)?;
    let expected_inter = predicted_intersection_dim(n, d, k)?;
    let cws = &code.codewords;
    let all_pairs = pairs(cws.len());

    let observations = all_pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (&cws[i].space, &cws[j].space);
            let (_, inter) = zassenhaus(a, b)?;
            let identity = if 2 * k >= d {
                Some(intersection_witness(&cws[i].label, &cws[j].label, d, k)? == inter)
            } else {
                None
            };
            let oracle = if (q as u128).pow(a.dim() as u32) <= ORACLE_CAP as u128 {
                Some(intersect_oracle(a, b)?)
            } else {
                None
            };
            Ok(PairObservation {
                i,
                j,
                inter_dim: inter.dim(),
                distance: a.dim() + b.dim() - 2 * inter.dim(),
                identity,
                oracle,
            })
        })
        .collect::<Result<Vec<_>, CodeError>>()?;

    let mut checks = Vec::new();

    let bad_dim = cws.iter().position(|c| c.space.dim() != predicted.dim);
    checks.push(match bad_dim {
        None => Check::pass("codeword_dimension", cws.len(), format!("all codewords have dimension {}", predicted.dim)),
        Some(i) => Check::fail(
            "codeword_dimension",
            cws.len(),
            format!("codeword {i} has dimension {}, expected {}", cws[i].space.dim(), predicted.dim),
            vec![i],
        ),
    });

    let size = cws.len() as u64;
    checks.push(if size == predicted.size {
        Check::pass("code_size", 1, format!("|C| = {size}"))
    } else {
        Check::fail("code_size", 1, format!("|C| = {size}, expected {}", predicted.size), Vec::new())
    });

    checks.push(match observations.iter().find(|o| o.distance == 0) {
        None => Check::pass("distinct_codewords", observations.len(), "distinct points give distinct spaces"),
        Some(o) => Check::fail("distinct_codewords", observations.len(), "two points share a codeword", vec![o.i, o.j]),
    });

    checks.push(match observations.iter().find(|o| o.inter_dim != expected_inter) {
        None => Check::pass(
            "intersection_dimension",
            observations.len(),
            format!("every pair meets in dimension {expected_inter}"),
        ),
        Some(o) => Check::fail(
            "intersection_dimension",
            observations.len(),
            format!("pair ({}, {}) meets in dimension {}, expected {expected_inter}", o.i, o.j, o.inter_dim),
            vec![o.i, o.j],
        ),
    });

    checks.push(if 2 * k < d {
        Check::pass("intersection_identity", 0, "not applicable: 2k < d")
    } else {
        match observations.iter().find(|o| o.identity == Some(false)) {
            None => Check::pass(
                "intersection_identity",
                observations.len(),
                "V1 ∩ V2 = span{L1^(d-k) L2^(d-k) G : deg G = 2k-d} for every pair",
            ),
            Some(o) => Check::fail(
                "intersection_identity",
                observations.len(),
                format!("pair ({}, {}) differs from the product span", o.i, o.j),
                vec![o.i, o.j],
            ),
        }
    });

    let distances: BTreeSet<usize> = observations.iter().map(|o| o.distance).collect();
    checks.push(if distances.len() == 1 {
        Check::pass("equidistance", observations.len(), format!("all pairwise distances equal {}", distances.first().unwrap()))
    } else {
        let witness = observations.iter().find(|o| o.distance != *distances.first().unwrap()).unwrap();
        Check::fail(
            "equidistance",
            observations.len(),
            format!("pairwise distances take values {distances:?}"),
            vec![witness.i, witness.j],
        )
    });

    let observed = code.params.clone();
    checks.push(if observed == predicted {
        Check::pass(
            "minimum_distance",
            observations.len(),
            format!("D = {} and all parameters match the closed form", observed.min_distance),
        )
    } else {
        Check::fail(
            "minimum_distance",
            observations.len(),
            format!("observed {observed:?}, predicted {predicted:?}"),
            Vec::new(),
        )
    });

    let oracle_cases: Vec<&PairObservation> = observations.iter().filter(|o| o.oracle.is_some()).collect();
    checks.push(match oracle_cases.iter().find(|o| o.oracle != Some(o.inter_dim)) {
        None if oracle_cases.is_empty() => Check::pass("oracle_agreement", 0, "skipped: codewords too large to enumerate"),
        None => Check::pass(
            "oracle_agreement",
            oracle_cases.len(),
            "brute-force intersection counts agree with row reduction",
        ),
        Some(o) => Check::fail(
            "oracle_agreement",
            oracle_cases.len(),
            format!("pair ({}, {}): oracle {:?}, reduction {}", o.i, o.j, o.oracle, o.inter_dim),
            vec![o.i, o.j],
        ),
    });

    Ok(TheoremReport { q, n, d, k, observed, predicted, checks })
}
