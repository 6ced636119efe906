//! Drive the experiment runner from a JSON config, as `mtlab run` does.

use markov_type_lab::experiments::{list_experiments, run, ExperimentConfig};

fn main() -> markov_type_lab::Result<()> {
    let config = ExperimentConfig::from_json(
        r#"{
            "experiment": "markov-type",
            "instance": {
                "chain": {"kind": "walk", "graph": {"kind": "grid", "rows": 3, "cols": 3}},
                "space": {"kind": "cube", "dim": 4},
                "map": {"kind": "images", "images": [0, 1, 3, 2, 6, 7, 5, 4, 12]}
            },
            "params": {"t": [1, 2, 4, 8, 16]},
            "seed": 1
        }"#,
    )?;
    let report = run(&config)?;
    println!("{}", report.summary);
    for row in &report.rows {
        println!("  t={} ratio={}", row["t"], row["ratio"]);
    }
    println!("catalog:");
    for e in list_experiments() {
        println!("  {:<16} {}", e.name, e.description);
    }
    Ok(())
}
