//! Acceptance run: every criterion once, one line each, plus independent
//! oracles for the quantities the criteria rely on.

use std::process::ExitCode;
use std::time::Instant;

use markov_type_lab::experiments::criteria::{run_criterion, CRITERIA};
use markov_type_lab::hyperbolic::min_delta;
use markov_type_lab::metric::{cube_lower_bound, shortest_path_metric, MetricSpace};
use markov_type_lab::tree_walk::{conditioned_walk_moments, lower_bound, pitman_law, pitman_moments};
use markov_type_lab::{rng, WeightedGraph};
use rand::Rng;

/// (largest - second largest of the three pair sums) / 2, maximized over
/// all quadruples.
fn four_point_delta(m: &MetricSpace) -> f64 {
    let n = m.len();
    let mut best = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for w in 0..n {
                    let mut s = [m.dist(x, y) + m.dist(z, w), m.dist(x, z) + m.dist(y, w), m.dist(x, w) + m.dist(y, z)];
                    s.sort_by(f64::total_cmp);
                    best = best.max((s[2] - s[1]) / 2.0);
                }
            }
        }
    }
    best
}

fn oracle_hyperbolicity() -> Result<String, String> {
    let c4 = shortest_path_metric(&WeightedGraph::cycle(4).unwrap()).unwrap();
    let (lib, brute) = (min_delta(&c4).unwrap().delta, four_point_delta(&c4));
    if (lib - 1.0).abs() > 1e-12 || (brute - 1.0).abs() > 1e-12 {
        return Err(format!("C4: library {lib}, brute force {brute}"));
    }
    let mut r = rng::stream(81, 0);
    for k in 0..40 {
        let n = r.random_range(3..=14);
        let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|v| (r.random_range(0..v), v, r.random_range(1..=4) as f64)).collect();
        for _ in 0..r.random_range(0..4) {
            let (a, b) = (r.random_range(0..n), r.random_range(0..n));
            if a != b && !edges.iter().any(|e| (e.0, e.1) == (a, b) || (e.0, e.1) == (b, a)) {
                edges.push((a, b, r.random_range(1..=4) as f64));
            }
        }
        let m = shortest_path_metric(&WeightedGraph::new(n, edges).unwrap()).unwrap();
        let (lib, brute) = (min_delta(&m).unwrap().delta, four_point_delta(&m));
        if (lib - brute).abs() > 1e-12 {
            return Err(format!("graph {k}: library {lib}, brute force {brute}"));
        }
    }
    Ok("min_delta = four-point brute force on C4 and 40 random graphs".into())
}

fn oracle_pitman() -> Result<String, String> {
    for n in 0..=16usize {
        let mut law = std::collections::BTreeMap::<i64, f64>::new();
        for bits in 0u32..(1 << n) {
            let (mut s, mut m) = (0i64, 0i64);
            for i in 0..n {
                s += if bits >> i & 1 == 1 { 1 } else { -1 };
                m = m.max(s);
            }
            *law.entry(2 * m - s).or_default() += 0.5f64.powi(n as i32);
        }
        let lib = pitman_law(n).unwrap();
        let mut tv = 0.0;
        for v in law.keys().chain(lib.support.iter()).copied().collect::<std::collections::BTreeSet<_>>() {
            tv += (law.get(&v).copied().unwrap_or(0.0) - lib.probability(v)).abs();
        }
        if tv / 2.0 > 1e-10 {
            return Err(format!("n={n}: total variation {}", tv / 2.0));
        }
    }
    let m = pitman_moments(3).unwrap();
    if m[1..] != [1.0, 3.0, 5.0] {
        return Err(format!("second moments {:?}", &m[1..]));
    }
    Ok("Pitman law = path enumeration for n <= 16; moments 1, 3, 5".into())
}

fn oracle_conditioned_walk() -> Result<String, String> {
    // Forward DP of the chain x -> x +- 1 with probabilities (x +- 1)/(2x).
    let n_max = 300;
    let mut dist = vec![0.0f64; n_max + 3];
    dist[1] = 1.0;
    let lib = conditioned_walk_moments(n_max, 1).unwrap();
    for n in 1..=n_max {
        let mut next = vec![0.0f64; n_max + 3];
        for x in 1..=n_max + 1 {
            if dist[x] > 0.0 {
                let xf = x as f64;
                next[x + 1] += dist[x] * (xf + 1.0) / (2.0 * xf);
                next[x - 1] += dist[x] * (xf - 1.0) / (2.0 * xf);
            }
        }
        dist = next;
        let m2: f64 = dist.iter().enumerate().map(|(x, p)| p * (x * x) as f64).sum();
        if (m2 - lib[n]).abs() > 1e-9 * n as f64 || (m2 - (3 * n + 1) as f64).abs() > 1e-9 * n as f64 {
            return Err(format!("n={n}: oracle {m2}, library {}", lib[n]));
        }
    }
    Ok("conditioned walk second moments = independent DP for n <= 300".into())
}

fn oracle_constants() -> Result<String, String> {
    let expected = 3.0 * (1.0 - 200.0 / 5001.0) * 100.0 - 8.0 * 300f64.sqrt();
    let got = lower_bound(5000, 100);
    if (got - expected).abs() > 1e-12 {
        return Err(format!("lower_bound(5000, 100) = {got}, expected {expected}"));
    }
    if cube_lower_bound(16, 4.0).unwrap() != 0.1 {
        return Err("cube_lower_bound(16, 4) != 0.1".into());
    }
    Ok(format!("tree bound at h=5000, n=100 is {expected:.4}; cube bound (16, 4) = 0.1"))
}

fn main() -> ExitCode {
    let mut failed = 0;
    println!("acceptance criteria");
    for (id, name, budget) in CRITERIA {
        let start = Instant::now();
        match run_criterion(id) {
            Ok(o) => {
                let secs = start.elapsed().as_secs_f64();
                let ok = o.pass && secs <= budget;
                failed += usize::from(!ok);
                println!(
                    "criterion {id:>2} [{}] {name}: {} cases, {} failures, {secs:.2} s (budget {budget} s)",
                    if ok { "PASS" } else { "FAIL" },
                    o.cases,
                    o.failures
                );
                let detail = o.detail.to_string();
                if !ok || detail.len() <= 320 {
                    println!("    {detail}");
                }
            }
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} [FAIL] {name}: error {e}");
            }
        }
    }
    println!("independent oracles");
    let oracles: [(&str, fn() -> Result<String, String>); 4] = [
        ("hyperbolicity", oracle_hyperbolicity),
        ("pitman", oracle_pitman),
        ("conditioned walk", oracle_conditioned_walk),
        ("constants", oracle_constants),
    ];
    for (name, f) in oracles {
        match f() {
            Ok(msg) => println!("oracle {name} [PASS] {msg}"),
            Err(msg) => {
                failed += 1;
                println!("oracle {name} [FAIL] {msg}");
            }
        }
    }
    if failed == 0 {
        println!("all criteria and oracles pass");
        ExitCode::SUCCESS
    } else {
        println!("{failed} failing");
        ExitCode::FAILURE
    }
}
