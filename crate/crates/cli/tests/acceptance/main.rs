//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod instances;
mod perturb;

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use cuspcert::arith::{hnf, IntMatrix, Matrix, QuadFieldElement, Rational, Scalar};
use cuspcert::chains::{
    build_chain_orthogonal, build_chain_symplectic, build_chain_unitary, verify_certificate, ChainCertificate, Link,
};
use cuspcert::embeddings::{
    hermitian_m2_space, segre_point, sl2_conjugation_image, sl2_pair_orthogonal_image, trace_zero_space,
    veronese_point, SL2Element,
};
use cuspcert::forms::{FormSpace, Signature};
use cuspcert::isotropic::SearchConfig;
use cuspcert::levels::{congruence_membership, containment_level, FullLattice};

use instances::{Instance, OrthShape};

const SEED: u64 = 0x5eed_c0de;
const TIME_LIMIT: Duration = Duration::from_secs(60);
const PERTURBATION_THRESHOLD: f64 = 0.95;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn q(n: i64) -> Rational {
    Rational::from(n)
}

fn random_rational(rng: &mut ChaCha8Rng, height: i64) -> Rational {
    Rational::new(rng.gen_range(-height..=height), rng.gen_range(1..=height)).unwrap()
}

/// A random element of `SL₂(ℚ)` with `a, b, c` of height at most `height`.
fn random_sl2(rng: &mut ChaCha8Rng, height: i64) -> SL2Element {
    loop {
        let a = random_rational(rng, height);
        if a.is_zero() {
            continue;
        }
        let b = random_rational(rng, height);
        let c = random_rational(rng, height);
        let d = (Rational::one() + b.clone() * &c) / a.clone();
        return SL2Element::new(a, b, c, d).unwrap();
    }
}

// ---------------------------------------------------------------- criterion 1

struct Built {
    symplectic: Vec<ChainCertificate<Rational>>,
    unitary: Vec<ChainCertificate<QuadFieldElement>>,
    /// `(certificate, the endpoints were intersecting planes)`
    orthogonal: Vec<(ChainCertificate<Rational>, bool)>,
    failures: Vec<String>,
    elapsed: Duration,
}

fn check<S: Scalar>(
    label: &str,
    k: usize,
    built: cuspcert::Result<ChainCertificate<S>>,
    failures: &mut Vec<String>,
) -> Option<ChainCertificate<S>> {
    match built {
        Ok(c) => {
            let report = verify_certificate(&c);
            if !report.ok() {
                failures.push(format!("{label} #{k}: {:?}", report.failures[0]));
            }
            Some(c)
        }
        Err(e) => {
            failures.push(format!("{label} #{k}: build failed: {e}"));
            None
        }
    }
}

fn build_all(rng: &mut ChaCha8Rng) -> Built {
    let start = Instant::now();
    let mut failures = Vec::new();
    let cfg = SearchConfig::default();
    let mut symplectic = Vec::new();
    for k in 0..200 {
        let Instance { space, i1, i2 } = instances::symplectic(rng);
        symplectic.extend(check(
            "symplectic",
            k,
            build_chain_symplectic(&space, &i1, &i2),
            &mut failures,
        ));
    }
    let mut unitary = Vec::new();
    for k in 0..200 {
        let Instance { space, i1, i2 } = instances::unitary(rng);
        unitary.extend(check(
            "unitary",
            k,
            build_chain_unitary(&space, &i1, &i2),
            &mut failures,
        ));
    }
    let mut orthogonal = Vec::new();
    for k in 0..100 {
        let shape = match k % 10 {
            0..=3 => OrthShape::Lines,
            4..=6 => OrthShape::TransversalPlanes,
            _ => OrthShape::IntersectingPlanes,
        };
        let intersecting = matches!(shape, OrthShape::IntersectingPlanes);
        let Instance { space, i1, i2 } = instances::orthogonal(rng, shape);
        if let Some(c) = check(
            "orthogonal",
            k,
            build_chain_orthogonal(&space, &i1, &i2, &cfg),
            &mut failures,
        ) {
            orthogonal.push((c, intersecting));
        }
    }
    Built {
        symplectic,
        unitary,
        orthogonal,
        failures,
        elapsed: start.elapsed(),
    }
}

fn criterion_builder_verifier(b: &Built) -> Outcome {
    let verified = 500 - b.failures.len();
    let mut detail = format!(
        "{verified}/500 certificates verify (200 symplectic, 200 unitary, 100 orthogonal) in {:.1}s, limit {}s",
        b.elapsed.as_secs_f64(),
        TIME_LIMIT.as_secs()
    );
    if let Some(f) = b.failures.first() {
        detail.push_str(&format!("; first failure: {f}"));
    }
    Outcome::new(b.failures.is_empty() && b.elapsed < TIME_LIMIT, detail)
}

// ---------------------------------------------------------------- criterion 2

fn criterion_chain_lengths(b: &Built) -> Outcome {
    let max_su = b
        .symplectic
        .iter()
        .map(|c| c.links.len())
        .chain(b.unitary.iter().map(|c| c.links.len()))
        .max()
        .unwrap_or(0);
    let intersecting: Vec<&ChainCertificate<Rational>> =
        b.orthogonal.iter().filter(|(_, i)| *i).map(|(c, _)| c).collect();
    let three_segre = intersecting
        .iter()
        .filter(|c| c.links.len() == 3 && c.links.iter().all(|l| matches!(l, Link::OrthSegre { .. })))
        .count();
    Outcome::new(
        max_su <= 5 && three_segre == intersecting.len() && !intersecting.is_empty(),
        format!(
            "longest symplectic/unitary chain {max_su} links (bound 5); {three_segre}/{} intersecting plane pairs use exactly 3 Segre links",
            intersecting.len()
        ),
    )
}

// ---------------------------------------------------------------- criterion 3

fn criterion_trace_zero() -> Outcome {
    let (space, _) = trace_zero_space();
    let expected = Matrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 2]]);
    let sig = space.signature().unwrap();
    Outcome::new(
        space.gram() == &expected && sig == Signature::new(2, 1, 0),
        format!(
            "gram {}, signature ({}, {})",
            space.gram().to_json(),
            sig.plus,
            sig.minus
        ),
    )
}

// ---------------------------------------------------------------- criterion 4

/// `x` is a nonzero multiple of `y`, where `y[0] = 1`.
fn proportional(x: &[Rational], y: &[Rational]) -> bool {
    let c = x[0].clone();
    !c.is_zero() && x.iter().zip(y).all(|(a, b)| *a == c.clone() * b)
}

fn criterion_equivariance(rng: &mut ChaCha8Rng) -> Outcome {
    let (tz, _) = trace_zero_space();
    let g = tz.gram();
    let mut bad = Vec::new();
    let samples: Vec<SL2Element> = (0..101).map(|_| random_sl2(rng, 10)).collect();
    for w in samples.windows(2) {
        let (a, b) = (sl2_conjugation_image(&w[0]), sl2_conjugation_image(&w[1]));
        if &a.transpose().mul(g).mul(&a) != g {
            bad.push("conjugation image is not an isometry");
        }
        if sl2_conjugation_image(&w[0].mul(&w[1])) != a.mul(&b) {
            bad.push("conjugation image is not multiplicative");
        }
    }
    let u2 = FormSpace::hyperbolic_sum(2, &[]).unwrap();
    let u1 = FormSpace::hyperbolic_sum(1, &[2]).unwrap();
    for _ in 0..100 {
        let (t1, t2) = (random_rational(rng, 10), random_rational(rng, 10));
        if !u2.norm(&segre_point(&t1, &t2)).is_zero() {
            bad.push("Segre point is not isotropic");
        }
        if !u1.norm(&veronese_point(&t1)).is_zero() {
            bad.push("Veronese point is not isotropic");
        }
    }
    let mut equivariant = 0;
    while equivariant < 20 {
        let (g1, g3) = (random_sl2(rng, 5), random_sl2(rng, 5));
        let (t1, t2) = (random_rational(rng, 10), random_rational(rng, 10));
        let (Some(s1), Some(s2)) = (g1.mobius(&t1), g3.mobius(&t2)) else {
            continue;
        };
        // conjugation by γ moves the Veronese point of τ to that of γ'τ,
        // γ' = [[d, −c], [−b, a]] the contragredient conjugated by [[0, 1], [−1, 0]]
        let [a, b, c, d] = g1.entries();
        let g1_dual = SL2Element::new(d.clone(), -c.clone(), -b.clone(), a.clone()).unwrap();
        let Some(v1) = g1_dual.mobius(&t1) else {
            continue;
        };
        let segre_ok = proportional(
            &sl2_pair_orthogonal_image(&g1, &g3).mul_vec(&segre_point(&t1, &t2)),
            &segre_point(&s1, &s2),
        );
        let veronese_ok = proportional(
            &sl2_conjugation_image(&g1).mul_vec(&veronese_point(&t1)),
            &veronese_point(&v1),
        );
        if !segre_ok {
            bad.push("Segre map is not equivariant");
        }
        if !veronese_ok {
            bad.push("Veronese map is not equivariant");
        }
        equivariant += 1;
    }
    Outcome::new(
        bad.is_empty(),
        format!(
            "100 conjugation images, 100 (tau1, tau2) points, 20 equivariance samples: {} exact failures{}",
            bad.len(),
            bad.first().map_or(String::new(), |b| format!(" ({b})"))
        ),
    )
}

// ---------------------------------------------------------------- criterion 5

fn gamma_word(rng: &mut ChaCha8Rng, n: i64) -> SL2Element {
    let len = rng.gen_range(1..=8);
    (0..len).fold(SL2Element::identity(), |acc, _| {
        let s = if rng.gen_bool(0.5) { n } else { -n };
        let g = if rng.gen_bool(0.5) {
            SL2Element::from_i64(1, s, 0, 1)
        } else {
            SL2Element::from_i64(1, 0, s, 1)
        };
        acc.mul(&g.unwrap())
    })
}

fn criterion_congruence(rng: &mut ChaCha8Rng) -> Outcome {
    let (space, _) = trace_zero_space();
    let lattice = FullLattice::standard(space);
    let mut misses = 0;
    for n in 2..=5u64 {
        for _ in 0..50 {
            let img = sl2_conjugation_image(&gamma_word(rng, n as i64));
            if !congruence_membership(&img, &lattice, n).unwrap_or(false) {
                misses += 1;
            }
        }
    }
    Outcome::new(
        misses == 0,
        format!(
            "{}/200 sampled words of level N in {{2,3,4,5}} land in the level-N congruence group",
            200 - misses
        ),
    )
}

// ---------------------------------------------------------------- criterion 6

fn criterion_hermitian_model(rng: &mut ChaCha8Rng) -> Outcome {
    let mut problems = Vec::new();
    let e11 = Matrix::from_i64_rows(&[&[1, 0], &[0, 0]]);
    for d in [1u64, 2, 3, 7] {
        let model = hermitian_m2_space(d).unwrap();
        let space = model.space();
        if space.signature().unwrap() != Signature::new(1, 1, 0) {
            problems.push(format!("D = {d}: signature is not (1, 1)"));
        }
        if !space.norm(&model.coordinates(&e11)).is_zero() {
            problems.push(format!("D = {d}: e11 is not isotropic"));
        }
        let g = space.gram();
        for _ in 0..25 {
            let m = model.sl2_su11_image(&random_sl2(rng, 10));
            if &m.transpose().mul(g).mul(&m.conj()) != g {
                problems.push(format!("D = {d}: image does not preserve the form"));
            }
            if !m.det().is_one() {
                problems.push(format!("D = {d}: image has determinant != 1"));
            }
        }
    }
    Outcome::new(
        problems.is_empty(),
        format!(
            "D in {{1,2,3,7}}: signature (1,1), e11 isotropic, 100 images unitary of determinant 1; {} problems{}",
            problems.len(),
            problems.first().map_or(String::new(), |p| format!(" ({p})"))
        ),
    )
}

// ---------------------------------------------------------------- criterion 7

fn integral(m: &Matrix<Rational>) -> IntMatrix {
    let den = Rational::from(Rational::lcm_of_denominators(m.entries()));
    IntMatrix::from_rational(&m.scale(&den)).unwrap()
}

/// Rows of `small` lie in the row lattice of `big`: stacking them does not
/// change the Hermite normal form.
fn hnf_contains(big: &Matrix<Rational>, small: &Matrix<Rational>) -> bool {
    let den = Rational::from(Rational::lcm_of_denominators(big.entries().chain(small.entries())));
    let h_big = hnf(&integral(&big.scale(&den))).0;
    let h_all = hnf(&integral(&big.vstack(small).scale(&den))).0;
    let n = big.rows();
    (0..h_all.rows()).all(|i| {
        (0..h_all.cols()).all(|j| {
            if i < n {
                h_all.get(i, j) == h_big.get(i, j)
            } else {
                *h_all.get(i, j) == Default::default()
            }
        })
    })
}

/// Brute-force membership: coordinates in the basis are integers.
fn in_lattice(basis: &Matrix<Rational>, rows: &Matrix<Rational>) -> bool {
    rows.mul(&basis.inverse().unwrap()).entries().all(Rational::is_integer)
}

fn random_unimodular(rng: &mut ChaCha8Rng, n: usize) -> Matrix<Rational> {
    let mut m = Matrix::identity(n, ());
    for _ in 0..6 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let mut e = Matrix::identity(n, ());
            e.set(i, j, q(rng.gen_range(-2..=2)));
            m = m.mul(&e);
        }
    }
    m
}

fn criterion_levels(rng: &mut ChaCha8Rng) -> Outcome {
    let mut mismatches = Vec::new();
    let mut pairs = 0;
    while pairs < 50 {
        let n = rng.gen_range(2..=3);
        let a: Matrix<Rational> = Matrix::from_fn(n, n, (), |_, _| q(rng.gen_range(-4..=4)));
        let index = a.det().abs();
        if index.is_zero() || index > q(20) {
            continue;
        }
        pairs += 1;
        let space = FormSpace::symmetric(Matrix::identity(n, ())).unwrap();
        let base = random_unimodular(rng, n);
        let sub = a.mul(&base);
        let big_n = rng.gen_range(1..=6u64);
        let lat = FullLattice::new(space.clone(), base.clone()).unwrap();
        let lat_prime = FullLattice::new(space, sub.clone()).unwrap();
        let level = containment_level(&lat, &lat_prime, big_n).unwrap();
        let bound = index.to_i64().unwrap() * big_n as i64;
        let nb = base.scale(&q(big_n as i64));
        let brute_n1 = (1..=bound).find(|&k| in_lattice(&nb, &sub.scale(&q(k))));
        let brute_n2 = (1..=bound).find(|&k| in_lattice(&sub, &base.scale(&q(k))));
        let got = (
            level.n1.to_string().parse::<i64>().ok(),
            level.n2.to_string().parse::<i64>().ok(),
        );
        if got != (brute_n1, brute_n2) {
            mismatches.push(format!("got {got:?}, brute force {:?}", (brute_n1, brute_n2)));
            continue;
        }
        let (n1, n2) = (q(got.0.unwrap()), q(got.1.unwrap()));
        if !hnf_contains(&nb, &sub.scale(&n1)) || !hnf_contains(&sub, &base.scale(&n2)) {
            mismatches.push("sandwich does not re-verify by HNF".into());
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        format!(
            "{}/50 lattice pairs (index <= 20) match brute-force N1, N2 and re-verify by HNF{}",
            50 - mismatches.len(),
            mismatches
                .first()
                .map_or(String::new(), |m| format!("; first mismatch: {m}"))
        ),
    )
}

// ---------------------------------------------------------------- criterion 8

fn criterion_perturbation(rng: &mut ChaCha8Rng, b: &Built) -> Outcome {
    let mut certs: Vec<Value> = Vec::new();
    let pick = |n: usize, total: usize| (0..total).step_by((total / n).max(1)).take(n);
    let sym: Vec<_> = b.symplectic.iter().filter(|c| !c.links.is_empty()).collect();
    let uni: Vec<_> = b.unitary.iter().filter(|c| !c.links.is_empty()).collect();
    let ort: Vec<_> = b
        .orthogonal
        .iter()
        .map(|(c, _)| c)
        .filter(|c| !c.links.is_empty())
        .collect();
    certs.extend(pick(25, sym.len()).map(|i| sym[i].to_json()));
    certs.extend(pick(25, uni.len()).map(|i| uni[i].to_json()));
    certs.extend(pick(25, ort.len()).map(|i| ort[i].to_json()));
    let mut tally = perturb::Tally::default();
    for c in &certs {
        perturb::perturb(rng, c, 20, &mut tally);
    }
    let rate = tally.rejection_rate();
    Outcome::new(
        rate > PERTURBATION_THRESHOLD,
        format!(
            "{} perturbations of {} certificates: {} exempt, {} rejected, {} accepted; rejection rate {:.4} (threshold > {})",
            tally.total,
            certs.len(),
            tally.exempt,
            tally.rejected,
            tally.accepted,
            rate,
            PERTURBATION_THRESHOLD
        ),
    )
}

// ---------------------------------------------------------------- criterion 9

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cuspcert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_instance(dir: &Path, tag: &str, space: Value, i1: Value, i2: Value) -> [String; 3] {
    let mut paths = [String::new(), String::new(), String::new()];
    for (slot, (name, v)) in paths.iter_mut().zip([("space", space), ("i1", i1), ("i2", i2)]) {
        let p = dir.join(format!("{tag}-{name}.json"));
        fs::write(&p, v.to_string()).unwrap();
        *slot = p.to_str().unwrap().to_string();
    }
    paths
}

fn criterion_cli(rng: &mut ChaCha8Rng) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for k in 0..4 {
        let s = instances::symplectic(rng);
        files.push(write_instance(
            dir.path(),
            &format!("sp{k}"),
            s.space.to_json(),
            s.i1.to_json(),
            s.i2.to_json(),
        ));
        let u = instances::unitary(rng);
        files.push(write_instance(
            dir.path(),
            &format!("un{k}"),
            u.space.to_json(),
            u.i1.to_json(),
            u.i2.to_json(),
        ));
        let shape = *[
            OrthShape::Lines,
            OrthShape::TransversalPlanes,
            OrthShape::IntersectingPlanes,
        ]
        .choose(rng)
        .unwrap();
        let o = instances::orthogonal(rng, shape);
        files.push(write_instance(
            dir.path(),
            &format!("or{k}"),
            o.space.to_json(),
            o.i1.to_json(),
            o.i2.to_json(),
        ));
    }
    let mut problems = Vec::new();
    for (k, [space, i1, i2]) in files.iter().enumerate() {
        let args = ["chain", "--space", space, "--i1", i1, "--i2", i2];
        let first = cli(&args);
        let second = cli(&args);
        if first.status.code() != Some(0) {
            problems.push(format!("instance {k}: chain exited {:?}", first.status.code()));
            continue;
        }
        if first.stdout != second.stdout {
            problems.push(format!("instance {k}: reruns differ"));
        }
        let out = dir.path().join(format!("cert{k}.json"));
        let out = out.to_str().unwrap();
        let mut with_out = args.to_vec();
        with_out.extend(["--out", out]);
        let third = cli(&with_out);
        if third.status.code() != Some(0) || fs::read(out).ok().as_deref() != Some(first.stdout.as_slice()) {
            problems.push(format!("instance {k}: --out differs from standard output"));
        }
        let verify = cli(&["verify", out]);
        if verify.status.code() != Some(0) {
            problems.push(format!("instance {k}: verify exited {:?}", verify.status.code()));
        }
        let again = cli(&["verify", out]);
        if again.stdout != verify.stdout {
            problems.push(format!("instance {k}: verify reruns differ"));
        }
    }
    Outcome::new(
        problems.is_empty(),
        format!(
            "{}/{} instances: chain exit 0, byte-identical reruns, verify exit 0{}",
            files.len() - problems.len().min(files.len()),
            files.len(),
            problems
                .first()
                .map_or(String::new(), |p| format!("; first problem: {p}"))
        ),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let built = build_all(&mut rng);
    let outcomes = [
        ("builder/verifier suite", criterion_builder_verifier(&built)),
        ("chain-length bounds", criterion_chain_lengths(&built)),
        ("trace-zero model", criterion_trace_zero()),
        ("homomorphism and equivariance", criterion_equivariance(&mut rng)),
        ("congruence containment", criterion_congruence(&mut rng)),
        ("Hermitian M2 model", criterion_hermitian_model(&mut rng)),
        ("level minimality", criterion_levels(&mut rng)),
        ("perturbation soundness", criterion_perturbation(&mut rng, &built)),
        ("CLI determinism and round trip", criterion_cli(&mut rng)),
    ];
    let mut all = true;
    for (k, (name, o)) in outcomes.iter().enumerate() {
        println!(
            "{} {} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
        all &= o.pass;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
