//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use aidepth_core::bits::{bits, BitString};
use aidepth_core::enumerator::{enumerate, write_cache, ComplexityTable, Horizon};
use aidepth_core::measures::{
    deficiency, deficiency_identity_check, depth_t, ldepth, sweep, theorem_part_i, theorem_part_ii, CylinderMeasure,
    PartIiOptions, SlackReport, Weight,
};
use aidepth_core::seqlab::{
    dim_depth_profile, dim_lemma_check, dim_mutual_info, dim_profile, im_star, levin_mi_profile, linear_grid,
    super_deep_diag, Estimator, SequenceGen, DEFAULT_M_FACTOR, DENSITY_TOLERANCE,
};
use aidepth_core::timebound::{Significance, TimeBound};
use aidepth_core::{DyadicRational, Exec};

const T_MAX: u32 = 256;
const STRUCTURE_SECS: u64 = 60;
const EXAMPLE_SECS: u64 = 30;
const K7_SECS: u64 = 60;
const SPREAD_CAP: f64 = 16.0;
const SIGMA_CAP: u32 = 24;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

struct Tables {
    by_k: Vec<ComplexityTable>,
    structure_time: Duration,
}

impl Tables {
    fn k(&self, k: usize) -> &ComplexityTable {
        &self.by_k[k - 1]
    }
}

fn dyadic(num: u32, exp: u32) -> DyadicRational {
    DyadicRational::new(num.into(), exp)
}

fn prefix_free(table: &ComplexityTable) -> usize {
    let mut programs: Vec<&BitString> = table.records().iter().map(|r| &r.program).collect();
    programs.sort();
    programs.windows(2).filter(|w| w[0].is_prefix_of(w[1])).count()
}

fn criterion_1(t: &Tables) -> Outcome {
    let mut violations = 0;
    let mut kraft_ok = true;
    for table in &t.by_k {
        violations += prefix_free(table);
        kraft_ok &= table.kraft_sum() <= DyadicRational::one();
    }
    let k1 = t.k(1).kraft_sum();
    let k2 = t.k(2).kraft_sum();
    let exact = k1 == dyadic(1, 4) && k2 == dyadic(45, 9);
    let fast = t.structure_time < Duration::from_secs(STRUCTURE_SECS);
    outcome(
        violations == 0 && kraft_ok && exact && fast,
        format!(
            "prefix violations {violations}, kraft<=1 {kraft_ok}, kraft(1)={k1}, kraft(2)={k2}, {:.2}s",
            t.structure_time.as_secs_f64()
        ),
    )
}

fn criterion_2(t: &Tables) -> Outcome {
    let big = t.k(6);
    let small = t.k(2);
    let eps = BitString::new();
    let zero = bits("0");
    let uniform = Weight::Measure(CylinderMeasure::Uniform);
    let values = (
        big.k_model(&eps).ok(),
        big.k_model(&zero).ok(),
        big.k_model(&bits("1")).ok(),
        small.q_model(&eps),
        ldepth(small, &eps, 0).ok(),
        ldepth(small, &eps, 1).ok(),
        deficiency(small, &zero, &uniform).ok(),
    );
    let expected = (Some(4), Some(9), Some(12), dyadic(11, 7), Some(2), Some(1), Some(-8));
    outcome(values == expected, format!("{values:?}"))
}

fn criterion_3(t: &Tables) -> Outcome {
    let s1 = t.k(6).coding_spread().expect("non-empty");
    let again = enumerate(Horizon::new(6, T_MAX).unwrap(), 3).unwrap().coding_spread().expect("non-empty");
    let deterministic = s1 == again;
    outcome(
        s1.max.is_finite() && deterministic && s1.max <= SPREAD_CAP,
        format!(
            "spread {:.6} (argmax {:?}, integer part {}), deterministic {deterministic}",
            s1.max,
            s1.argmax.to_string(),
            s1.max_integer_part
        ),
    )
}

fn full_grid() -> Vec<u64> {
    (1..=T_MAX as u64).collect()
}

fn criterion_4(t: &Tables) -> Outcome {
    let table = t.k(5);
    let spread = table.coding_spread().unwrap().max;
    let bs: Vec<u32> = (0..=32).collect();
    let ts = full_grid();
    let report = sweep(table, "lemma4", Exec::Parallel, |x| deficiency_identity_check(table, x, &bs, &ts, spread));
    match report {
        Ok(r) => {
            let part_a = r.violations.iter().filter(|w| w.details["part"] == "a").count();
            outcome(
                r.passed() && r.fitted_constant <= spread + 1.0,
                format!(
                    "part (a) violations {part_a}, total violations {}, max part (b) gap {} <= spread+1 = {:.6}",
                    r.violation_count(),
                    r.fitted_constant,
                    spread + 1.0
                ),
            )
        }
        Err(e) => outcome(false, format!("error: {e}")),
    }
}

fn criterion_5(t: &Tables) -> Outcome {
    let table = t.k(5);
    let spread = table.coding_spread().unwrap().max;
    let ts = full_grid();
    let part_i = sweep(table, "thm3i", Exec::Parallel, |x| theorem_part_i(table, x, &ts, spread + 1.0));
    let part_ii = sweep(table, "thm3ii", Exec::Parallel, |x| {
        let mut total = SlackReport::new("thm3ii", table.horizon());
        for &budget in &ts {
            if table.k_t(x, budget).is_ok() {
                total.absorb(theorem_part_ii(table, x, budget, PartIiOptions { sigma_cap: SIGMA_CAP })?);
            }
        }
        Ok(total)
    });
    match (part_i, part_ii) {
        (Ok(i), Ok(ii)) => outcome(
            i.passed() && i.fitted_constant <= spread + 1.0 && ii.passed() && ii.fitted_constant <= SIGMA_CAP as f64,
            format!(
                "(i) c = {} <= {:.6}, violations {}; (ii) sigma = {} <= {SIGMA_CAP}, violations {}",
                i.fitted_constant,
                spread + 1.0,
                i.violation_count(),
                ii.fitted_constant,
                ii.violation_count()
            ),
        ),
        (Err(e), _) | (_, Err(e)) => outcome(false, format!("error: {e}")),
    }
}

fn criterion_6(t: &Tables) -> Outcome {
    let table = t.k(5);
    let mut violations = 0usize;
    let mut checks = 0usize;
    for x in table.outputs() {
        let mut prev: Option<(Option<usize>, DyadicRational, Option<i64>)> = None;
        for budget in 1..=table.t_max() {
            let k = table.k_t(x, budget).ok();
            let q = table.q_t(x, budget).unwrap();
            let d = depth_t(table, x, budget).ok();
            if let Some((pk, pq, pd)) = &prev {
                checks += 3;
                violations += matches!((pk, k), (Some(a), Some(b)) if b > *a) as usize;
                violations += (pk.is_some() && k.is_none()) as usize;
                violations += (q < *pq) as usize;
                violations += matches!((pd, d), (Some(a), Some(b)) if b > *a) as usize;
            }
            prev = Some((k, q, d));
        }
        let mut prev_l = u64::MAX;
        for b in 0..=48 {
            let l = ldepth(table, x, b).unwrap();
            checks += 1;
            violations += (l > prev_l) as usize;
            prev_l = l;
        }
    }
    outcome(violations == 0, format!("{checks} comparisons, {violations} violations"))
}

fn example_pair() -> (SequenceGen, SequenceGen) {
    let alpha = SequenceGen::RandomPool(1);
    let beta = SequenceGen::interleave(alpha.clone(), SequenceGen::RandomPool(2));
    (alpha, beta)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let (alpha, beta) = example_pair();
    let grid = linear_grid(4096, 16);
    let est = Estimator::Oracle;
    let ba = im_star(&beta, &alpha, &est, &grid, DEFAULT_M_FACTOR, Exec::Parallel);
    let ab = im_star(&alpha, &beta, &est, &grid, DEFAULT_M_FACTOR, Exec::Parallel);
    let levin = levin_mi_profile(&alpha, &beta, &est, &grid, Exec::Parallel);
    let elapsed = start.elapsed();
    match (ba, ab, levin) {
        (Ok(ba), Ok(ab), Ok(levin)) => {
            let in_range = |v: f64, lo: f64, hi: f64| (lo..=hi).contains(&v);
            let ba_ok = in_range(ba.lower, 0.95, 1.05) && in_range(ba.upper, 0.95, 1.05);
            let ab_ok = in_range(ab.lower, 0.45, 0.55) && in_range(ab.upper, 0.45, 0.55);
            let v = &levin.values;
            let growing = v.windows(2).all(|w| w[1] > w[0]) && v[v.len() - 1] >= 8.0 * v[0];
            outcome(
                ba_ok && ab_ok && growing && elapsed < Duration::from_secs(EXAMPLE_SECS),
                format!(
                    "imStar(beta,alpha) = [{:.6}, {:.6}], imStar(alpha,beta) = [{:.6}, {:.6}], levin MI {:.1} -> {:.1}, {:.2}s",
                    ba.lower,
                    ba.upper,
                    ab.lower,
                    ab.upper,
                    v[0],
                    v[v.len() - 1],
                    elapsed.as_secs_f64()
                ),
            )
        }
        _ => outcome(false, "estimator error"),
    }
}

fn criterion_8() -> Outcome {
    let grid = linear_grid(8192, 16);
    let dim = |g: &SequenceGen| dim_profile(g, &Estimator::Oracle, &grid, Exec::Parallel).map(|p| p.tail_inf);
    match (
        dim(&SequenceGen::Zeros),
        dim(&SequenceGen::RandomPool(7)),
        dim(&SequenceGen::dilute(SequenceGen::RandomPool(7))),
    ) {
        (Ok(z), Ok(r), Ok(d)) => outcome(
            z <= 0.02 && r >= 0.98 && (0.48..=0.52).contains(&d),
            format!("zeros {z:.6}, pool {r:.6}, dilute(pool) {d:.6}"),
        ),
        _ => outcome(false, "estimator error"),
    }
}

fn lemma_family() -> Vec<(SequenceGen, SequenceGen)> {
    let (alpha, beta) = example_pair();
    vec![
        (alpha.clone(), beta.clone()),
        (beta, alpha.clone()),
        (SequenceGen::RandomPool(11), SequenceGen::RandomPool(12)),
        (alpha.clone(), alpha.clone()),
        (alpha.clone(), SequenceGen::dilute(alpha.clone())),
        (SequenceGen::dilute(alpha.clone()), alpha.clone()),
        (
            SequenceGen::interleave(SequenceGen::RandomPool(3), SequenceGen::RandomPool(4)),
            SequenceGen::interleave(SequenceGen::RandomPool(4), SequenceGen::RandomPool(5)),
        ),
    ]
}

fn criterion_9() -> Outcome {
    let grid = linear_grid(4096, 16);
    let est = Estimator::Oracle;
    let mut failures = Vec::new();
    let family = lemma_family();
    let mut worst_idim_slack = f64::NEG_INFINITY;
    let mut worst_lemma_slack = f64::NEG_INFINITY;
    for (a, b) in &family {
        let run = || -> aidepth_core::Result<(f64, f64, bool)> {
            let idim = dim_mutual_info(a, b, &est, &grid, Exec::Parallel)?.value;
            let ab = im_star(a, b, &est, &grid, DEFAULT_M_FACTOR, Exec::Parallel)?;
            let ba = im_star(b, a, &est, &grid, DEFAULT_M_FACTOR, Exec::Parallel)?;
            let min_im = ab.lower.min(ba.lower);
            let lemma = dim_lemma_check(a, b, &est, &grid, DEFAULT_M_FACTOR, DENSITY_TOLERANCE, Exec::Parallel)?;
            Ok((idim - min_im, lemma.rhs - lemma.lhs, idim <= min_im + DENSITY_TOLERANCE && lemma.holds))
        };
        match run() {
            Ok((s1, s2, ok)) => {
                worst_idim_slack = worst_idim_slack.max(s1);
                worst_lemma_slack = worst_lemma_slack.max(s2);
                if !ok {
                    failures.push(format!("{} / {}", a.id(), b.id()));
                }
            }
            Err(e) => failures.push(format!("{} / {}: {e}", a.id(), b.id())),
        }
    }
    outcome(
        failures.is_empty() && family.len() >= 5,
        format!(
            "{} pairs, max(I_dim - min imStar) = {worst_idim_slack:.6}, max(rhs - lhs) = {worst_lemma_slack:.6}, failing {failures:?}",
            family.len()
        ),
    )
}

fn diag_grid(gen: &SequenceGen, table: &ComplexityTable) -> Vec<usize> {
    (1..=24).filter(|&n| table.contains(&gen.prefix(n).bits)).collect()
}

fn criterion_10(t: &Tables) -> Outcome {
    let grid = linear_grid(4096, 16);
    let gens = [
        SequenceGen::Zeros,
        SequenceGen::ThueMorse,
        SequenceGen::RandomPool(21),
        SequenceGen::dilute(SequenceGen::ThueMorse),
        SequenceGen::interleave(SequenceGen::ThueMorse, SequenceGen::RandomPool(22)),
    ];
    let mut failures = Vec::new();
    let mut worst = f64::NEG_INFINITY;
    for g in &gens {
        for budget in [1u64, 4] {
            match dim_depth_profile(g, &Estimator::compress(), budget, &grid, Exec::Parallel) {
                Ok(d) => {
                    worst = worst.max(d.depth - (d.dim_t - d.dim));
                    if !d.bound_holds || d.profile.values.iter().any(|v| *v < 0.0) {
                        failures.push(format!("{} @{budget}", g.id()));
                    }
                }
                Err(e) => failures.push(format!("{} @{budget}: {e}", g.id())),
            }
        }
    }

    let table = t.k(6);
    let s_family: Vec<Significance> =
        ["const:0", "const:1", "const:2", "const:4", "log:1"].iter().map(|s| s.parse().unwrap()).collect();
    let t_family: Vec<TimeBound> =
        ["const:1", "const:2", "lin:1", "lin:4", "poly:2", "exp:1"].iter().map(|s| s.parse().unwrap()).collect();
    let diag_gens =
        [SequenceGen::Zeros, SequenceGen::ThueMorse, SequenceGen::HaltingChar(64), SequenceGen::RandomPool(1)];
    let (mut points, mut diag_violations, mut max_c1) = (0usize, 0usize, 0i64);
    for g in &diag_gens {
        let n_grid = diag_grid(g, table);
        if n_grid.is_empty() {
            continue;
        }
        match super_deep_diag(g, table, &s_family, &t_family, &n_grid) {
            Ok(r) => {
                points += r.points.len();
                diag_violations += r.violations.len();
                max_c1 = max_c1.max(r.fitted_c1);
            }
            Err(e) => failures.push(format!("diag {}: {e}", g.id())),
        }
    }
    outcome(
        failures.is_empty() && diag_violations == 0 && points > 0,
        format!(
            "max(depth - (dim_t - dim)) = {worst:.6}; diag points {points}, violations {diag_violations}, fitted c1 {max_c1}; failing {failures:?}"
        ),
    )
}

fn cache_bytes(table: &ComplexityTable) -> Vec<u8> {
    let mut out = Vec::new();
    write_cache(table, &mut out).expect("in-memory write");
    out
}

fn criterion_11() -> Outcome {
    let h6 = Horizon::new(6, T_MAX).unwrap();
    let one = cache_bytes(&enumerate(h6, 1).unwrap());
    let four = cache_bytes(&enumerate(h6, 4).unwrap());
    let identical = one == four;
    let start = Instant::now();
    let k7 = enumerate(Horizon::new(7, T_MAX).unwrap(), 4);
    let elapsed = start.elapsed();
    let k7_ok = k7.is_ok();
    let fast = elapsed < Duration::from_secs(K7_SECS);
    outcome(
        identical && k7_ok && fast,
        format!(
            "1 vs 4 shards identical {identical} ({} bytes), kMax=7 built {k7_ok} in {:.2}s",
            one.len(),
            elapsed.as_secs_f64()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    let by_k: Vec<ComplexityTable> =
        (1..=6).map(|k| enumerate(Horizon::new(k, T_MAX).unwrap(), 4).expect("feasible horizon")).collect();
    let tables = Tables { by_k, structure_time: start.elapsed() };

    let criteria: Vec<Criterion> = vec![
        ("structural invariants", Box::new(|| criterion_1(&tables))),
        ("spot values", Box::new(|| criterion_2(&tables))),
        ("coding spread", Box::new(|| criterion_3(&tables))),
        ("deficiency identities", Box::new(|| criterion_4(&tables))),
        ("depth theorem (i)/(ii)", Box::new(|| criterion_5(&tables))),
        ("monotonicity", Box::new(|| criterion_6(&tables))),
        ("interleaving example", Box::new(criterion_7)),
        ("dimension oracle", Box::new(criterion_8)),
        ("mutual information lemmas", Box::new(criterion_9)),
        ("dimensional depth and diagnostics", Box::new(|| criterion_10(&tables))),
        ("determinism and performance", Box::new(criterion_11)),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failed += !o.pass as usize;
        println!("criterion {:>2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
