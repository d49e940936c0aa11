//! Exact null laws by brute-force enumeration, written independently of the
//! library's estimator and statistics code.

#![allow(dead_code)]

/// One censoring outcome and its probability.
pub struct Outcome {
    pub failures: Vec<u64>,
    pub removals: Vec<u64>,
    pub prob: f64,
}

fn choose(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn binom_pmf(n: u64, k: u64, p: f64) -> f64 {
    choose(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Every `(X_1..X_m)` path for `n` uniform lifetimes, with sequential
/// binomial weights. Percentages should be dyadic so that the plain floor
/// here agrees with any careful floor.
pub fn enumerate_uniform(times: &[f64], percentages: &[f64], n: u64) -> Vec<Outcome> {
    let m = percentages.len();
    let mut out = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn walk(
        i: usize,
        on_test: u64,
        times: &[f64],
        percentages: &[f64],
        m: usize,
        prob: f64,
        xs: &mut Vec<u64>,
        rs: &mut Vec<u64>,
        out: &mut Vec<Outcome>,
    ) {
        if i == m {
            out.push(Outcome {
                failures: xs.clone(),
                removals: rs.clone(),
                prob,
            });
            return;
        }
        let q = (times[i + 1] - times[i]) / (1.0 - times[i]);
        for x in 0..=on_test {
            let w = binom_pmf(on_test, x, q);
            if w == 0.0 {
                continue;
            }
            let y = on_test - x;
            let r = if i + 1 == m {
                y
            } else {
                (percentages[i] * y as f64).floor() as u64
            };
            xs.push(x);
            rs.push(r);
            walk(i + 1, y - r, times, percentages, m, prob * w, xs, rs, out);
            xs.pop();
            rs.pop();
        }
    }
    walk(
        0,
        n,
        times,
        percentages,
        m,
        1.0,
        &mut Vec::new(),
        &mut Vec::new(),
        &mut out,
    );
    out
}

/// `[c_plus, c_minus, c, k, t1, t2]` straight from the definitions.
pub fn oracle_statistics(times: &[f64], failures: &[u64], removals: &[u64]) -> [f64; 6] {
    let n: u64 = failures.iter().sum::<u64>() + removals.iter().sum::<u64>();
    let m = failures.len();
    let mut d = Vec::with_capacity(m);
    for i in 0..m {
        let mut s = 1.0;
        for j in 0..=i {
            let at_risk = n - failures[..j].iter().sum::<u64>() - removals[..j].iter().sum::<u64>();
            if at_risk > 0 {
                s *= 1.0 - failures[j] as f64 / at_risk as f64;
            }
        }
        d.push(s - (1.0 - times[i + 1]));
    }
    let cp = d.iter().cloned().fold(f64::MIN, f64::max);
    let cm = d.iter().map(|x| -x).fold(f64::MIN, f64::max);
    let t1 = d.iter().map(|x| x * x).sum::<f64>() / m as f64;
    let t2 = d.iter().map(|x| x.abs()).sum::<f64>() / m as f64;
    [cp, cm, cp.max(cm), cp + cm, t1, t2]
}

/// Atoms `(value, probability)` of one statistic, sorted by value; values
/// closer than 1e-12 are merged.
pub fn exact_law(times: &[f64], percentages: &[f64], n: u64, stat: usize) -> Vec<(f64, f64)> {
    let mut points: Vec<(f64, f64)> = enumerate_uniform(times, percentages, n)
        .iter()
        .map(|o| {
            (
                oracle_statistics(times, &o.failures, &o.removals)[stat],
                o.prob,
            )
        })
        .collect();
    points.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut atoms: Vec<(f64, f64)> = Vec::new();
    for (v, p) in points {
        match atoms.last_mut() {
            Some(last) if (v - last.0).abs() < 1e-12 => last.1 += p,
            _ => atoms.push((v, p)),
        }
    }
    atoms
}

/// Smallest atom `v` with `P(S <= v) >= 1 - level`, plus the distance of the
/// cumulative probabilities around it from `1 - level`.
pub fn exact_critical(atoms: &[(f64, f64)], level: f64) -> (f64, f64) {
    let target = 1.0 - level;
    let mut cum = 0.0;
    let mut margin = f64::INFINITY;
    let mut chosen = None;
    for &(v, p) in atoms {
        cum += p;
        margin = margin.min((cum - target).abs());
        if chosen.is_none() && cum >= target - 1e-12 {
            chosen = Some(v);
        }
    }
    (chosen.expect("cdf reaches 1"), margin)
}

/// Small uniform-null schemes with `m <= 2` and dyadic percentages.
pub fn small_schemes() -> Vec<(Vec<f64>, Vec<f64>)> {
    vec![
        (vec![0.0, 0.5], vec![1.0]),
        (vec![0.0, 0.3], vec![1.0]),
        (vec![0.0, 0.25, 0.5], vec![0.5, 1.0]),
        (vec![0.0, 0.2, 0.6], vec![0.0, 1.0]),
        (vec![0.0, 0.4, 0.7], vec![0.25, 1.0]),
        (vec![0.0, 0.1, 0.3], vec![0.75, 1.0]),
    ]
}
