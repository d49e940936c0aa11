//! Acceptance gate. Runs every exit criterion at its pinned tolerance,
//! prints one PASS/FAIL line per criterion and exits non-zero if any fails.
//!
//! Run with `cargo test -p ptic-core --test acceptance -- --nocapture`
//! (output is printed either way; the harness is custom).

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{enumerate_uniform, exact_critical, exact_law, small_schemes};
use ptic::io::{write_critical_csv, write_power_csv};
use ptic::schemes::{builtin_scheme, BUILTIN_NAMES};
use ptic::stream::replication_rng;
use ptic::{
    compute_statistics, reliability_estimates, simulate_sample, test_general, transform_scheme,
    uniform_deviations, AlternativeFamily, CensoringScheme, CriticalValueTable, FamilyKind,
    MonteCarlo, Statistic,
};

const N: u64 = 40;
const LEVEL: f64 = 0.05;
const B: usize = 20_000;
const TABLE_SEED: u64 = 1;
const SIZE_SEED: u64 = 2;
const TABLE_TOLERANCE: f64 = 0.02;

/// Reference 5% critical values for n = 40, in `Statistic::ALL` order.
const REFERENCE: [(&str, [f64; 6]); 4] = [
    ("t1p1", [0.2361, 0.2597, 0.3140, 0.3157, 0.0284, 0.1420]),
    ("t1p2", [0.2775, 0.3111, 0.3412, 0.3513, 0.0409, 0.1700]),
    ("t2p1", [0.2470, 0.2417, 0.3066, 0.3214, 0.0310, 0.1378]),
    ("t2p2", [0.3000, 0.3132, 0.3500, 0.3750, 0.0440, 0.1655]),
];

struct Outcome {
    passed: bool,
    detail: String,
}

fn three_se() -> f64 {
    3.0 * (LEVEL * (1.0 - LEVEL) / B as f64).sqrt()
}

fn tables() -> Vec<CriticalValueTable> {
    let mc = MonteCarlo::new(B, TABLE_SEED).unwrap();
    BUILTIN_NAMES
        .iter()
        .map(|name| {
            let mut table = mc
                .critical_values(&builtin_scheme(name).unwrap(), N, LEVEL)
                .unwrap();
            table.scheme_id = name.to_string();
            table
        })
        .collect()
}

fn table_reproduction(tables: &[CriticalValueTable]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut lines = Vec::new();
    for (table, (name, reference)) in tables.iter().zip(REFERENCE) {
        assert_eq!(table.scheme_id, name);
        let mut row = format!("      {name}:");
        for stat in Statistic::ALL {
            let got = table.critical.get(stat);
            let want = reference[stat.index()];
            worst = worst.max((got - want).abs());
            row.push_str(&format!(" {stat}={got:.4}({want:.4})"));
        }
        lines.push(row);
    }
    Outcome {
        passed: worst <= TABLE_TOLERANCE,
        detail: format!(
            "max |simulated - reference| = {worst:.4} (tolerance {TABLE_TOLERANCE})\n{}",
            lines.join("\n")
        ),
    }
}

fn size_control(tables: &[CriticalValueTable]) -> Outcome {
    let mc = MonteCarlo::new(B, SIZE_SEED).unwrap();
    let bound = three_se();
    let mut passed = true;
    let mut lines = Vec::new();
    for table in tables {
        let size = mc
            .power(&table.scheme, N, table, &AlternativeFamily::uniform())
            .unwrap();
        let mut row = format!("      {}:", table.scheme_id);
        for stat in Statistic::ALL {
            let rate = size.power_of(stat);
            let ok = (rate - LEVEL).abs() <= bound && rate <= LEVEL + bound;
            passed &= ok;
            row.push_str(&format!(" {stat}={rate:.4}{}", if ok { "" } else { "!" }));
        }
        lines.push(row);
    }
    Outcome {
        passed,
        detail: format!(
            "rejection rate within {LEVEL} +/- {bound:.4} ('!' marks a miss)\n{}",
            lines.join("\n")
        ),
    }
}

fn null_coincidence(tables: &[CriticalValueTable]) -> Outcome {
    let mc = MonteCarlo::new(B, SIZE_SEED).unwrap();
    let nulls = [
        AlternativeFamily::lehmann(1.0).unwrap(),
        AlternativeFamily::centered(1.0).unwrap(),
        AlternativeFamily::compressed(0.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    let mut passed = true;
    for table in tables {
        let size = mc
            .power(&table.scheme, N, table, &AlternativeFamily::uniform())
            .unwrap();
        for family in &nulls {
            let power = mc.power(&table.scheme, N, table, family).unwrap();
            for stat in Statistic::ALL {
                let gap = (power.power_of(stat) - size.power_of(stat)).abs();
                worst = worst.max(gap);
                passed &= gap <= 3.0 * size.stderr_of(stat);
            }
        }
    }
    Outcome {
        passed,
        detail: format!("lehmann:1, centered:1, compressed:0 vs uniform; max gap {worst:.4}"),
    }
}

fn enumeration_oracle() -> Outcome {
    let b = 50_000usize;
    let mut atoms_checked = 0;
    let mut atom_failures = Vec::new();
    let mut exact_matches = 0;
    let mut boundary_cases = 0;
    let mut critical_failures = Vec::new();
    for (k, (times, percentages)) in small_schemes().into_iter().enumerate() {
        let scheme = CensoringScheme::new(times.clone(), percentages.clone()).unwrap();
        for n in 1..=5u64 {
            let mc = MonteCarlo::new(b, 500 + 10 * k as u64 + n).unwrap();
            let sims = mc.null_statistics(&scheme, n).unwrap();
            let table = mc.critical_values(&scheme, n, LEVEL).unwrap();
            for stat in Statistic::ALL {
                let law = exact_law(&times, &percentages, n, stat.index());
                let mut counts = vec![0u64; law.len()];
                for s in &sims {
                    let v = s.get(stat);
                    match law.iter().position(|(a, _)| (a - v).abs() < 1e-12) {
                        Some(i) => counts[i] += 1,
                        None => {
                            atom_failures.push(format!("scheme {k} n={n} {stat}: stray value {v}"))
                        }
                    }
                }
                for ((value, p), count) in law.iter().zip(&counts) {
                    atoms_checked += 1;
                    let freq = *count as f64 / b as f64;
                    let se = (p * (1.0 - p) / b as f64).sqrt();
                    if (freq - p).abs() > 4.0 * se + 1e-12 {
                        atom_failures.push(format!(
                            "scheme {k} n={n} {stat} atom {value:.6}: {freq:.5} vs {p:.5}"
                        ));
                    }
                }

                let (expected, margin) = exact_critical(&law, LEVEL);
                let got = table.critical.get(stat);
                let quantile_se = (LEVEL * (1.0 - LEVEL) / b as f64).sqrt();
                if margin > 4.0 * quantile_se {
                    if (got - expected).abs() < 1e-12 {
                        exact_matches += 1;
                    } else {
                        critical_failures.push(format!(
                            "scheme {k} n={n} {stat}: {got} vs exact {expected}"
                        ));
                    }
                } else {
                    // an atom's cdf sits within 4 SE of 0.95; either neighbour is a valid draw
                    boundary_cases += 1;
                    let i = law
                        .iter()
                        .position(|(a, _)| (a - expected).abs() < 1e-12)
                        .unwrap();
                    let lo = i.saturating_sub(1);
                    let hi = (i + 1).min(law.len() - 1);
                    if !law[lo..=hi].iter().any(|(a, _)| (a - got).abs() < 1e-12) {
                        critical_failures.push(format!(
                            "scheme {k} n={n} {stat}: {got} not adjacent to exact {expected}"
                        ));
                    }
                }
            }
        }
    }
    let total_paths: usize = small_schemes()
        .iter()
        .map(|(t, p)| enumerate_uniform(t, p, 5).len())
        .sum();
    let passed = atom_failures.is_empty() && critical_failures.is_empty();
    let mut detail = format!(
        "{atoms_checked} atoms within 4 SE; critical values: {exact_matches} exact, {boundary_cases} at a boundary; {total_paths} enumerated paths at n=5"
    );
    for f in atom_failures.iter().chain(&critical_failures).take(10) {
        detail.push_str(&format!("\n      {f}"));
    }
    Outcome { passed, detail }
}

fn estimator_identities() -> Outcome {
    let schemes: Vec<CensoringScheme> = BUILTIN_NAMES
        .iter()
        .map(|n| builtin_scheme(n).unwrap())
        .collect();

    let mut worst_telescope: f64 = 0.0;
    for case in 0..1000u64 {
        let base = &schemes[case as usize % schemes.len()];
        let m = base.inspections();
        let mut percentages = vec![0.0; m];
        percentages[m - 1] = 1.0;
        let scheme = CensoringScheme::new(base.times().to_vec(), percentages).unwrap();
        let n = 1 + case % 60;
        let family = AlternativeFamily::lehmann(0.3 + (case % 7) as f64 * 0.4).unwrap();
        let sample = simulate_sample(&scheme, n, &family, &mut replication_rng(31, case)).unwrap();
        let values = reliability_estimates(&sample).unwrap().values;
        let mut failed = 0;
        for (value, x) in values.iter().zip(sample.failures()) {
            failed += x;
            let direct = (n - failed) as f64 / n as f64;
            worst_telescope = worst_telescope.max((value - direct).abs());
        }
    }

    let mut identity_misses = 0;
    for case in 0..1000u64 {
        let scheme = &schemes[case as usize % schemes.len()];
        let n = 5 + case % 50;
        let family = AlternativeFamily::centered(0.5 + (case % 5) as f64 * 0.5).unwrap();
        let sample = simulate_sample(scheme, n, &family, &mut replication_rng(32, case)).unwrap();
        let rate = 0.3 + (case % 11) as f64 * 0.2;
        let f0 = move |x: f64| 1.0 - (-rate * x).exp();
        let general = test_general(&sample, &f0).unwrap();
        let mapped = sample
            .with_scheme(transform_scheme(sample.scheme(), &f0).unwrap())
            .unwrap();
        let uniform = compute_statistics(&uniform_deviations(&mapped).unwrap()).unwrap();
        if general.to_array().map(f64::to_bits) != uniform.to_array().map(f64::to_bits) {
            identity_misses += 1;
        }
    }

    Outcome {
        passed: worst_telescope <= 1e-12 && identity_misses == 0,
        detail: format!(
            "no-removal telescoping max error {worst_telescope:e} over 1000 samples; general-null identity: {identity_misses} bit mismatches over 1000 cases"
        ),
    }
}

fn csv_outputs(tables_seed: u64) -> String {
    let mc = MonteCarlo::new(B, tables_seed).unwrap();
    let mut tables = Vec::new();
    for name in BUILTIN_NAMES {
        let mut table = mc
            .critical_values(&builtin_scheme(name).unwrap(), N, LEVEL)
            .unwrap();
        table.scheme_id = name.into();
        tables.push(table);
    }
    let mut out = Vec::new();
    write_critical_csv(&mut out, &tables).unwrap();
    let curve = MonteCarlo::new(5_000, tables_seed + 1)
        .unwrap()
        .power_curve(
            &tables[0].scheme,
            N,
            &tables[0],
            FamilyKind::Centered,
            &[0.5, 1.0, 2.0],
        )
        .unwrap();
    write_power_csv(&mut out, &curve).unwrap();
    String::from_utf8(out).unwrap()
}

fn determinism() -> Outcome {
    let outputs: Vec<(usize, String)> = [1usize, 4, 8]
        .into_iter()
        .map(|threads| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            (threads, pool.install(|| csv_outputs(TABLE_SEED)))
        })
        .collect();
    let identical = outputs.windows(2).all(|w| w[0].1 == w[1].1);
    Outcome {
        passed: identical,
        detail: format!(
            "critical-value + power-curve CSV ({} bytes) at 1/4/8 threads: {}",
            outputs[0].1.len(),
            if identical {
                "byte-identical"
            } else {
                "DIFFER"
            }
        ),
    }
}

fn power_trend(tables: &[CriticalValueTable]) -> Outcome {
    let table = &tables[0];
    assert_eq!(table.scheme_id, "t1p1");
    let mc = MonteCarlo::new(B, 3).unwrap();
    let mut passed = true;
    let mut lines = Vec::new();
    let sweeps = [
        (FamilyKind::Lehmann, vec![1.0, 1.5, 2.0, 2.5, 3.0]),
        (FamilyKind::Compressed, vec![0.0, 0.1, 0.2, 0.3]),
    ];
    for (kind, grid) in sweeps {
        let curve = mc
            .power_curve(&table.scheme, N, table, kind, &grid)
            .unwrap();
        for stat in [Statistic::T2, Statistic::T1] {
            let powers: Vec<f64> = curve.iter().map(|e| e.power_of(stat)).collect();
            let steps_ok = curve.windows(2).all(|w| {
                let se = (w[0].stderr_of(stat).powi(2) + w[1].stderr_of(stat).powi(2)).sqrt();
                w[1].power_of(stat) - w[0].power_of(stat) > -2.0 * se
            });
            let extreme_ok = *powers.last().unwrap() > 3.0 * LEVEL;
            passed &= steps_ok && extreme_ok;
            lines.push(format!(
                "      {} {stat}: {}{}",
                kind.name(),
                powers
                    .iter()
                    .map(|p| format!("{p:.4}"))
                    .collect::<Vec<_>>()
                    .join(" "),
                if steps_ok && extreme_ok { "" } else { "  !" }
            ));
        }
    }
    Outcome {
        passed,
        detail: format!(
            "t1p1 power nondecreasing (steps > -2 SE), extreme > {:.2}\n{}",
            3.0 * LEVEL,
            lines.join("\n")
        ),
    }
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let start = Instant::now();
    let tables = tables();
    let criteria: Vec<(&str, Criterion<'_>)> = vec![
        (
            "critical-value table reproduction",
            Box::new(|| table_reproduction(&tables)),
        ),
        ("size control", Box::new(|| size_control(&tables))),
        ("null coincidence", Box::new(|| null_coincidence(&tables))),
        (
            "exhaustive-enumeration oracle",
            Box::new(enumeration_oracle),
        ),
        ("estimator identities", Box::new(estimator_identities)),
        ("determinism across thread counts", Box::new(determinism)),
        ("power trend", Box::new(|| power_trend(&tables))),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let t = Instant::now();
        let outcome = check();
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        if !outcome.passed {
            failed += 1;
        }
        println!(
            "[{tag}] {name} ({:.1}s): {}",
            t.elapsed().as_secs_f64(),
            outcome.detail
        );
    }
    println!(
        "acceptance: {failed} failing criteria, {:.1}s total",
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
