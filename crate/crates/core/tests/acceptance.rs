//! Acceptance criteria. Each test prints one `[PASS]` / `[FAIL]` line; run
//! with `cargo test -p veronet-core --test acceptance -- --nocapture` to see
//! them.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use veronet::channel::{exhaustive_decode, simulate, ChannelConfig, ChannelError};
use veronet::code::{build_code, predicted_intersection_dim, verify_code, Code, TheoremReport};
use veronet::format::{read_code, write_code};
use veronet::gf::Field;
use veronet::linalg::{intersect_oracle, subspace_distance, Subspace};
use veronet::veronese::{binomial, osculating_cone, LinearForm};

const GRID_Q: [u64; 7] = [2, 3, 4, 5, 7, 8, 9];
const GRID_N: [usize; 2] = [1, 2];
const GRID_D: [u32; 3] = [2, 3, 4];

fn report(id: u32, name: &str, passed: bool, detail: &str) {
    let tag = if passed { "PASS" } else { "FAIL" };
    println!("[{tag}] criterion {id}: {name}: {detail}");
    assert!(passed, "criterion {id} ({name}) failed: {detail}");
}

fn grid() -> Vec<(u64, usize, u32, u32)> {
    let mut out = Vec::new();
    for q in GRID_Q {
        for n in GRID_N {
            for d in GRID_D {
                for k in 1..d {
                    out.push((q, n, d, k));
                }
            }
        }
    }
    out
}

struct GridEntry {
    tuple: (u64, usize, u32, u32),
    code: Code,
    report: TheoremReport,
}

fn grid_results() -> &'static [GridEntry] {
    static CELL: OnceLock<Vec<GridEntry>> = OnceLock::new();
    CELL.get_or_init(|| {
        let start = Instant::now();
        let out: Vec<GridEntry> = grid()
            .into_par_iter()
            .map(|tuple @ (q, n, d, k)| {
                let field = Field::with_order(q).unwrap();
                let code = build_code(n, d, k, &field).unwrap();
                let report = verify_code(&code).unwrap();
                GridEntry { tuple, code, report }
            })
            .collect();
        println!("grid of {} codes built and verified in {:.2?}", out.len(), start.elapsed());
        out
    })
}

#[test]
fn criterion_1_theorem_grid_conformance() {
    let start = Instant::now();
    let results = grid_results();
    let mut failures = Vec::new();
    for e in results {
        let (q, n, d, k) = e.tuple;
        let r = &e.report;
        let dim = binomial(k as u64 + n as u64, n as u64) as usize;
        let size: u64 = (0..=n as u32).map(|i| q.pow(i)).sum();
        let inter = if 2 * k >= d { binomial((2 * k - d) as u64 + n as u64, n as u64) as usize } else { 0 };
        let expected_d = 2 * (dim - inter);
        let ok = [
            "codeword_dimension",
            "code_size",
            "distinct_codewords",
            "intersection_dimension",
            "equidistance",
            "minimum_distance",
        ]
        .iter()
        .all(|name| r.check(name).is_some_and(|c| c.passed))
            && r.observed.dim == dim
            && r.observed.size == size
            && r.observed.min_distance == expected_d
            && predicted_intersection_dim(n, d, k).unwrap() == inter
            && r.observed.packet_length == binomial(n as u64 + d as u64, n as u64) as usize;
        if !ok {
            failures.push(format!("{:?}", e.tuple));
        }
    }
    let elapsed = start.elapsed();
    report(
        1,
        "theorem-grid conformance",
        failures.is_empty(),
        &format!("{} tuples, {} failing {:?}, {:.2?}", results.len(), failures.len(), failures, elapsed),
    );
}

#[test]
fn criterion_2_intersection_subspace_identity() {
    let mut pairs = 0;
    let mut mismatches = Vec::new();
    for e in grid_results() {
        let (_, _, d, k) = e.tuple;
        if 2 * k < d {
            continue;
        }
        let c = e.report.check("intersection_identity").unwrap();
        pairs += c.cases;
        if !c.passed || c.cases != e.code.len() * (e.code.len() - 1) / 2 {
            mismatches.push(e.tuple);
        }
    }
    report(
        2,
        "intersection-subspace identity",
        mismatches.is_empty() && pairs > 0,
        &format!("{pairs} pairs compared, {} tuples with mismatches", mismatches.len()),
    );
}

fn random_subspace(rng: &mut ChaCha8Rng, field: &Field, ambient: usize, max_dim: usize) -> Subspace {
    let rows = rng.gen_range(0..=max_dim);
    let vectors: Vec<Vec<u32>> = (0..rows)
        .map(|_| (0..ambient).map(|_| rng.gen_range(0..field.order())).collect())
        .collect();
    Subspace::span(field, ambient, &vectors).unwrap()
}

#[test]
fn criterion_3_oracle_cross_check() {
    let mut codeword_pairs = 0;
    let mut mismatches = 0;
    for e in grid_results() {
        let c = e.report.check("oracle_agreement").unwrap();
        codeword_pairs += c.cases;
        if !c.passed {
            mismatches += 1;
        }
    }
    let mut random_pairs = 0;
    for q in GRID_Q {
        let field = Field::with_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x0c0ffee + q);
        // keep q^dim <= 2^12
        let max_dim = (1..=6).take_while(|&k| q.pow(k as u32) <= 1 << 12).last().unwrap();
        for _ in 0..1000 {
            let a = random_subspace(&mut rng, &field, 6, max_dim);
            let b = random_subspace(&mut rng, &field, 6, 6);
            if intersect_oracle(&a, &b).unwrap() != a.intersect(&b).unwrap().dim() {
                mismatches += 1;
            }
            random_pairs += 1;
        }
    }
    report(
        3,
        "oracle cross-check",
        mismatches == 0 && codeword_pairs > 0,
        &format!("{codeword_pairs} codeword pairs + {random_pairs} random pairs, {mismatches} mismatches"),
    );
}

#[test]
fn criterion_4_metric_axioms() {
    let mut violations = 0;
    let mut triples = 0;
    for q in [2u64, 3, 4] {
        let field = Field::with_order(q).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + q);
        for _ in 0..10_000 {
            let ambient = rng.gen_range(1..=6);
            let a = random_subspace(&mut rng, &field, ambient, ambient);
            let b = random_subspace(&mut rng, &field, ambient, ambient);
            // bias towards equal or nested spaces so the zero-distance branch is hit
            let c = match rng.gen_range(0..4) {
                0 => a.clone(),
                1 => a.sum(&b).unwrap(),
                _ => random_subspace(&mut rng, &field, ambient, ambient),
            };
            let dist = |x: &Subspace, y: &Subspace| subspace_distance(x, y).unwrap();
            let ok = dist(&a, &b) == dist(&b, &a)
                && (dist(&a, &c) == 0) == (a == c)
                && (dist(&a, &b) == 0) == (a == b)
                && dist(&a, &b) <= dist(&a, &c) + dist(&c, &b)
                && a.dim() + b.dim() == a.sum(&b).unwrap().dim() + a.intersect(&b).unwrap().dim();
            if !ok {
                violations += 1;
            }
            triples += 1;
        }
    }
    report(
        4,
        "metric axioms",
        violations == 0,
        &format!("{triples} random triples over GF(2), GF(3), GF(4), {violations} violations"),
    );
}

#[test]
fn criterion_5_characteristic_p_robustness() {
    let mut cones = 0;
    let mut inclusions = 0;
    let mut divisible = 0;
    let mut failures = Vec::new();
    for p in [2u64, 3] {
        let field = Field::prime(p).unwrap();
        for n in 1..=2usize {
            let points = veronet::code::enum_projective_points(n, &field).unwrap();
            for d in 2..=6u32 {
                for l in &points {
                    let mut prev: Option<Subspace> = None;
                    for k in 1..d {
                        let cone = osculating_cone(l, d, k).unwrap();
                        cones += 1;
                        if ((d - k) as u64).is_multiple_of(p) {
                            divisible += 1;
                        }
                        if cone.dim() as u64 != binomial(k as u64 + n as u64, n as u64) {
                            failures.push(format!("dim p={p} n={n} d={d} k={k} L={l}"));
                        }
                        if let Some(smaller) = &prev {
                            inclusions += 1;
                            if smaller.intersect(&cone).unwrap() != *smaller {
                                failures.push(format!("flag p={p} n={n} d={d} k={} L={l}", k - 1));
                            }
                        }
                        prev = Some(cone);
                    }
                }
            }
        }
    }
    // the q = 2, d = 3, k = 1 case where (X0 + X1)^2 loses its cross term
    let f2 = Field::prime(2).unwrap();
    let l = LinearForm::new(&f2, &[1, 1]).unwrap();
    let special = osculating_cone(&l, 3, 1).unwrap();
    let expected = Subspace::span(&f2, 4, &[vec![1, 0, 1, 0], vec![0, 1, 0, 1]]).unwrap();
    if special != expected {
        failures.push("q=2 d=3 k=1 L=X0+X1 cone".into());
    }
    report(
        5,
        "characteristic-p robustness",
        failures.is_empty() && divisible > 0,
        &format!(
            "{cones} cones ({divisible} with p | d-k), {inclusions} flag inclusions, {} failures {:?}",
            failures.len(),
            failures
        ),
    );
}

/// Every (erasures, errors) split with erasures + errors < D/2 that fits the codeword.
fn radius_configs(code: &Code) -> Vec<(usize, usize)> {
    let p = code.params();
    let radius = (p.min_distance - 1) / 2;
    let room = p.packet_length - p.dim;
    (0..=radius)
        .flat_map(|total| (0..=total).map(move |erasures| (erasures, total - erasures)))
        .filter(|&(e, t)| e <= p.dim && t <= room)
        .collect()
}

#[test]
fn criterion_6_decoder_guarantee() {
    let f2 = Field::prime(2).unwrap();
    let mut exhaustive_cases = 0;
    let mut exhaustive_ok = true;
    for (n, d, k) in [(1, 3, 1), (2, 2, 1)] {
        let code = build_code(n, d, k, &f2).unwrap();
        assert_eq!(code.params().min_distance, 4);
        for (erasures, errors) in [(0, 0), (1, 0), (0, 1)] {
            let tally = exhaustive_decode(&code, erasures, errors).unwrap();
            exhaustive_cases += tally.total();
            exhaustive_ok &= tally.correct == tally.total() && tally.total() > 0;
        }
    }

    // Enumerate every outcome where the count allows it, sample elsewhere.
    let mut enumerated_configs = 0;
    let mut sampled_configs = 0;
    let mut sampled_trials = 0;
    let mut imperfect = Vec::new();
    for e in grid_results() {
        for (i, (erasures, errors)) in radius_configs(&e.code).into_iter().enumerate() {
            match exhaustive_decode(&e.code, erasures, errors) {
                Ok(tally) => {
                    enumerated_configs += 1;
                    exhaustive_cases += tally.total();
                    if tally.correct != tally.total() {
                        imperfect.push((e.tuple, erasures, errors, tally.correct as f64 / tally.total() as f64));
                    }
                }
                Err(ChannelError::TooManyOutcomes { .. }) => {
                    let cfg = ChannelConfig { erasures, errors, seed: 0x5eed + i as u64 };
                    let stats = simulate(&e.code, &cfg, 1000).unwrap();
                    sampled_configs += 1;
                    sampled_trials += stats.trials;
                    if stats.success_rate != 1.0 {
                        imperfect.push((e.tuple, erasures, errors, stats.success_rate));
                    }
                }
                Err(other) => panic!("{:?} ({erasures}, {errors}): {other}", e.tuple),
            }
        }
    }
    report(
        6,
        "decoder guarantee",
        exhaustive_ok && imperfect.is_empty(),
        &format!(
            "{exhaustive_cases} enumerated outcomes over {enumerated_configs} configs, \
             {sampled_trials} sampled trials over {sampled_configs} configs, {} configs below 1.0 {:?}",
            imperfect.len(),
            imperfect
        ),
    );
}

#[test]
fn criterion_7_boundary_behavior() {
    let code = build_code(1, 2, 1, &Field::prime(2).unwrap()).unwrap();
    assert_eq!(code.params().min_distance, 2);
    let tally = exhaustive_decode(&code, 1, 0).unwrap();
    report(
        7,
        "boundary behavior at D/2",
        tally.total() == 9 && tally.ambiguous >= 1,
        &format!(
            "{} outcomes: {} correct, {} wrong, {} ambiguous",
            tally.total(),
            tally.correct,
            tally.wrong,
            tally.ambiguous
        ),
    );
}

#[test]
fn criterion_8_serialization_round_trip() {
    let mut failures = Vec::new();
    for e in grid_results() {
        let text = write_code(&e.code);
        let ok = match read_code(&text) {
            Ok(back) => {
                back.codewords().iter().zip(e.code.codewords()).all(|(a, b)| a.space.basis() == b.space.basis())
                    && back == e.code
                    && write_code(&back) == text
                    && verify_code(&back).unwrap().passed()
            }
            Err(_) => false,
        };
        if !ok {
            failures.push(e.tuple);
        }
    }
    report(
        8,
        "serialization round-trip",
        failures.is_empty(),
        &format!("{} codes written, read back and re-verified, {} failures", grid_results().len(), failures.len()),
    );
}
