//! Acceptance suite: one pass/fail line per criterion, each backed by the
//! matching verification campaign plus small oracles computed here from
//! first principles (plain integer arithmetic, no zetakit internals).
//!
//! Built without the libtest harness so the lines always reach stdout; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::Value;
use zetakit::bounds::{mu, nu, DegreeProfile};
use zetakit::Limits;
use zetakit_cli::campaigns::{self, CampaignOutcome};

const SEED: u64 = 7;

/// Every criterion is checked exactly; the only pinned tolerance is the
/// wall-clock budget per criterion (criteria 3 and 6 carry no target of
/// their own and get a loose one).
const BUDGETS: [(u32, Duration); 8] = [
    (1, Duration::from_secs(10)),
    (2, Duration::from_secs(30)),
    (3, Duration::from_secs(30)),
    (4, Duration::from_secs(120)),
    (5, Duration::from_secs(60)),
    (6, Duration::from_secs(60)),
    (7, Duration::from_secs(60)),
    (8, Duration::from_secs(1)),
];

struct Line {
    criterion: u32,
    passed: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn line(criterion: u32, outcome: &CampaignOutcome, oracle: Result<(), String>, elapsed: Duration) -> Line {
    let budget = BUDGETS[criterion as usize - 1].1;
    let in_time = elapsed <= budget;
    let passed = outcome.passed && oracle.is_ok() && in_time;
    let mut detail = format!("{} [{:.2}s / {}s]", outcome.summary, elapsed.as_secs_f64(), budget.as_secs());
    if let Err(e) = oracle {
        detail.push_str(&format!("; oracle: {e}"));
    }
    if !in_time {
        detail.push_str("; over budget");
    }
    Line { criterion, passed, detail }
}

fn counts(details: &Value, key: &str) -> Vec<i64> {
    details[key].as_array().expect(key).iter().map(|v| v.as_i64().expect("integer count")).collect()
}

/// y² = x³ − x over F_3 is supersingular: a_1 = 0, so the Frobenius roots
/// are ±i√3 and N_m = 3^m − (α^m + ᾱ^m) with α^m + ᾱ^m = 2(−3)^{m/2} for
/// even m and 0 for odd m.
fn cubic_oracle(outcome: &CampaignOutcome) -> Result<(), String> {
    let on = counts(&outcome.details, "counts_x");
    let off = counts(&outcome.details, "counts_complement");
    for m in 1..=6u32 {
        let trace = if m % 2 == 0 { 2 * (-3i64).pow(m / 2) } else { 0 };
        let expected = 3i64.pow(m) - trace;
        let got = on[m as usize - 1];
        if got != expected {
            return Err(format!("N_{m} = {got}, expected {expected}"));
        }
        if got + off[m as usize - 1] != 9i64.pow(m) {
            return Err(format!("N_{m} + complement ≠ 9^{m}"));
        }
    }
    Ok(())
}

/// Evaluate Σ c·x^e mod p.
fn eval(poly: &[(i64, Vec<u32>)], x: &[i64], p: i64) -> i64 {
    poly.iter()
        .map(|(c, e)| e.iter().zip(x).fold(c.rem_euclid(p), |acc, (&k, &xi)| acc * xi.pow(k) % p))
        .sum::<i64>()
        .rem_euclid(p)
}

fn torus(p: i64, n: usize) -> Vec<Vec<i64>> {
    (0..n).fold(vec![vec![]], |acc, _| {
        acc.into_iter().flat_map(|v| (1..p).map(move |a| [v.clone(), vec![a]].concat())).collect()
    })
}

/// S*_1(Σ y_j f_j) by direct enumeration of the (n + r)-torus, tallied by
/// value of g, against Σ_J (−1)^{r−|J|} p^{|J|} |Z*_J(F_p)|.  Since the
/// p-th roots of unity satisfy only 1 + ζ + … + ζ^{p−1} = 0, the sum equals
/// the integer R iff all nonzero tallies agree and c_0 − c_1 = R.
fn character_sum_oracle(p: i64, n: usize, system: &[Vec<(i64, Vec<u32>)>]) -> Result<(), String> {
    let r = system.len();
    let mut tally = vec![0i64; p as usize];
    for point in torus(p, n + r) {
        let (x, y) = point.split_at(n);
        let g = system.iter().zip(y).map(|(f, &yj)| eval(f, x, p) * yj).sum::<i64>().rem_euclid(p);
        tally[g as usize] += 1;
    }
    if tally[1..].iter().any(|&c| c != tally[1]) {
        return Err(format!("S*_1 not rational over p = {p}: {tally:?}"));
    }
    let mut rhs = 0i64;
    for mask in 0..(1u32 << r) {
        let size = mask.count_ones();
        let zeros = torus(p, n)
            .iter()
            .filter(|x| (0..r).filter(|j| mask >> j & 1 == 1).all(|j| eval(&system[j], x, p) == 0))
            .count() as i64;
        let sign = if (r as u32 - size) % 2 == 0 { 1 } else { -1 };
        rhs += sign * p.pow(size) * zeros;
    }
    let lhs = tally[0] - tally[1];
    if lhs != rhs {
        return Err(format!("S*_1 = {lhs}, strata sum = {rhs} (p = {p})"));
    }
    Ok(())
}

fn character_sum_oracles() -> Result<(), String> {
    let t = |c: i64, e: &[u32]| (c, e.to_vec());
    // Hyperbola x1x2 − 1 over F_5.
    character_sum_oracle(5, 2, &[vec![t(1, &[1, 1]), t(-1, &[0, 0])]])?;
    // Plane cubic y² − x³ + x over F_3.
    character_sum_oracle(3, 2, &[vec![t(1, &[0, 2]), t(-1, &[3, 0]), t(1, &[1, 0])]])?;
    // Linear forms {x1 + x2 + x3, x1 − x2} over F_3.
    character_sum_oracle(3, 3, &[vec![t(1, &[1, 0, 0]), t(1, &[0, 1, 0]), t(1, &[0, 0, 1])], vec![t(1, &[1, 0, 0]), t(-1, &[0, 1, 0])]])
}

/// Chevalley–Warning by hand: a diagonal quadric in three variables over
/// F_3 and F_5 has point count divisible by q^μ₀ with μ₀ = ⌈(3 − 2)/2⌉ = 1.
fn ax_katz_oracle() -> Result<(), String> {
    let profile = DegreeProfile::new(3, vec![2], 2, false).map_err(|e| e.to_string())?;
    let mu0 = mu(&profile, 0).map_err(|e| e.to_string())?;
    if mu0 != 1 {
        return Err(format!("μ₀(3; 2) = {mu0}, expected 1"));
    }
    for p in [3i64, 5] {
        let count = (0..p.pow(3))
            .filter(|&i| {
                let x = [i % p, i / p % p, i / (p * p)];
                (x[0] * x[0] + x[1] * x[1] + 2 * x[2] * x[2]) % p == 0
            })
            .count() as i64;
        if count % p.pow(mu0) != 0 {
            return Err(format!("N(F_{p}) = {count} not divisible by {p}^{mu0}"));
        }
    }
    Ok(())
}

fn trace_oracle(outcome: &CampaignOutcome) -> Result<(), String> {
    // ord_3 ≥ 3 in π-units (e = p − 1 = 2).
    match outcome.details["minus_half_valuation"].as_u64() {
        Some(v) if v >= 6 => Ok(()),
        other => Err(format!("val_π(Tr α + 1/2) = {other:?} < 6")),
    }
}

/// Hand-computed dimensions of the coordinate-subspace fixtures.
fn recombination_oracle(outcome: &CampaignOutcome) -> Result<(), String> {
    let expected = [("three-axes", 1), ("two-planes", 2), ("jump", 1), ("plane-and-line", 2), ("four-axes", 1)];
    let cases = outcome.details["cases"].as_array().ok_or("no cases")?;
    if cases.len() < 5 {
        return Err(format!("only {} fixtures", cases.len()));
    }
    for (name, dim) in expected {
        let case = cases.iter().find(|c| c["fixture"] == name).ok_or(format!("missing {name}"))?;
        if case["dim"].as_i64() != Some(dim) {
            return Err(format!("{name}: dim {} expected {dim}", case["dim"]));
        }
    }
    Ok(())
}

/// μ and ν on profiles worked out by hand.
fn bounds_oracle() -> Result<(), String> {
    let check = |n, degrees: Vec<u32>, dim, j, want_mu, want_nu| -> Result<(), String> {
        let profile = DegreeProfile::new(n, degrees.clone(), dim, false).map_err(|e| e.to_string())?;
        let got = (mu(&profile, j).map_err(|e| e.to_string())?, nu(&profile, j).map_err(|e| e.to_string())?);
        if got != (want_mu, want_nu) {
            return Err(format!("(μ, ν)_{j}({n}; {degrees:?}) = {got:?}, expected ({want_mu}, {want_nu})"));
        }
        Ok(())
    };
    // Chevalley–Warning cubic surface in A^4: μ₀ = ⌈(4 − 3)/3⌉ = 1.
    check(4, vec![3], 3, 0, 1, 1)?;
    // Two quadrics in A^6: μ₀ = ⌈(6 − 4)/2⌉ = 1, μ₁ = 1 + ⌈(5 − 4)/2⌉ = 2.
    check(6, vec![2, 2], 4, 0, 1, 1)?;
    check(6, vec![2, 2], 4, 1, 2, 2)?;
    // Degree exceeding n: no divisibility.
    check(2, vec![3], 1, 0, 0, 0)
}

fn main() -> ExitCode {
    let limits = Limits::default();
    let mut lines = Vec::new();

    let (c1, t1) = timed(|| campaigns::cancellation(&limits).expect("cancellation"));
    let o1 = cubic_oracle(&c1);
    lines.push(line(1, &c1, o1, t1));

    let (c2, t2) = timed(|| campaigns::inclusion_exclusion(SEED, 5, &limits).expect("inclusion-exclusion"));
    lines.push(line(2, &c2, character_sum_oracles(), t2));

    let (c3, t3) = timed(|| campaigns::delta_calculus(SEED, 20).expect("delta"));
    lines.push(line(3, &c3, Ok(()), t3));

    let (c4, t4) = timed(|| campaigns::ax_katz(SEED, 10, &limits).expect("ax-katz"));
    lines.push(line(4, &c4, ax_katz_oracle(), t4));

    let (c5, t5) = timed(|| campaigns::trace_formula(&limits).expect("trace formula"));
    let o5 = trace_oracle(&c5);
    lines.push(line(5, &c5, o5, t5));

    let (c6, t6) = timed(|| campaigns::weight_slopes().expect("slopes"));
    lines.push(line(6, &c6, Ok(()), t6));

    let (c7, t7) = timed(|| campaigns::recombination(SEED, &limits).expect("recombination"));
    let o7 = recombination_oracle(&c7);
    lines.push(line(7, &c7, o7, t7));

    let (c8, t8) = timed(|| campaigns::bound_invariants(SEED, 1000).expect("bound invariants"));
    lines.push(line(8, &c8, bounds_oracle(), t8));

    for l in &lines {
        println!("criterion {}: {} — {}", l.criterion, if l.passed { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.criterion).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", lines.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
