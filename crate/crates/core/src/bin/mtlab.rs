use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use markov_type_lab::experiments::{error_exit_code, list_experiments, run, ExperimentConfig, Instance};
use markov_type_lab::{Error, Result};
use serde_json::{json, Map, Value};

#[derive(Parser)]
#[command(name = "mtlab", version, about = "Markov type experiments on finite metric spaces")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Experiment config (JSON); flags below override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for the JSON and CSV reports.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Args, Default)]
struct InstanceArgs {
    /// Instance JSON file with `space`, `chain`, `map` (and tree data).
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Space spec as inline JSON, e.g. '{"kind":"cube","dim":4}'.
    #[arg(long)]
    space: Option<String>,
    /// Chain spec as inline JSON.
    #[arg(long)]
    chain: Option<String>,
    /// Map spec as inline JSON.
    #[arg(long)]
    map: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Print the experiment catalog as JSON.
    List,
    /// Run the experiment described by --config.
    Run,
    MarkovType {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        t_max: Option<u64>,
        /// exact | montecarlo
        #[arg(long)]
        mode: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
    },
    Spectral {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        t_max: Option<u64>,
    },
    Martingale {
        #[command(flatten)]
        inst: InstanceArgs,
        /// identity | bound | pisier | smooth2pt | convex2pt
        #[arg(long)]
        check: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
    },
    Hyperbolicity {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        report_witness: Option<bool>,
    },
    HypTypeCheck {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long = "C")]
        c: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        t_max: Option<u64>,
    },
    TreeLowerbound {
        #[arg(long)]
        h: Option<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    Laakso {
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        t_max: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    ExtendTree {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long = "L")]
        l: Option<f64>,
    },
    NetColoring {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long = "R")]
        r: Option<f64>,
    },
    Glue {
        #[command(flatten)]
        inst: InstanceArgs,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long = "D")]
        d: Option<f64>,
    },
    Cube {
        #[arg(long)]
        d: Option<u64>,
        #[arg(long)]
        t_max: Option<u64>,
        #[arg(long)]
        trials: Option<u64>,
    },
    PaperSuite,
}

fn set(params: &mut Map<String, Value>, key: &str, v: Option<impl Into<Value>>) {
    if let Some(v) = v {
        params.insert(key.into(), v.into());
    }
}

fn apply_instance(config: &mut ExperimentConfig, args: InstanceArgs) -> Result<()> {
    if let Some(path) = args.instance {
        let text = std::fs::read_to_string(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        config.instance = Some(serde_json::from_str(&text)?);
    }
    let mut inst = config.instance.take().unwrap_or_default();
    if let Some(s) = args.space {
        inst.space = Some(serde_json::from_str(&s)?);
    }
    if let Some(s) = args.chain {
        inst.chain = Some(serde_json::from_str(&s)?);
    }
    if let Some(s) = args.map {
        inst.map = Some(serde_json::from_str(&s)?);
    }
    if inst != Instance::default() {
        config.instance = Some(inst);
    }
    Ok(())
}

fn build_config(cli: Cli) -> Result<Option<ExperimentConfig>> {
    let mut config = match &cli.global.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::new(""),
    };
    let name = |n: &str, c: &mut ExperimentConfig| {
        if c.experiment.is_empty() {
            c.experiment = n.into();
        } else if c.experiment != n {
            return Err(Error::Config(format!("config is for `{}`, subcommand is `{n}`", c.experiment)));
        }
        Ok(())
    };
    let params = |c: &mut ExperimentConfig| std::mem::take(&mut c.params);
    match cli.command {
        Command::List => {
            println!("{}", serde_json::to_string_pretty(&list_experiments()).expect("catalog serializes"));
            return Ok(None);
        }
        Command::Run => {
            if config.experiment.is_empty() {
                return Err(Error::Config("`run` needs --config".into()));
            }
        }
        Command::MarkovType { inst, p, t_max, mode, trials } => {
            name("markov-type", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "p", p);
            set(&mut m, "t_max", t_max);
            set(&mut m, "mode", mode);
            set(&mut m, "trials", trials);
            config.params = m;
        }
        Command::Spectral { inst, t_max } => {
            name("spectral", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "t_max", t_max);
            config.params = m;
        }
        Command::Martingale { inst, check, trials } => {
            name("martingale", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "check", check);
            set(&mut m, "trials", trials);
            config.params = m;
        }
        Command::Hyperbolicity { inst, report_witness } => {
            name("hyperbolicity", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "report_witness", report_witness);
            config.params = m;
        }
        Command::HypTypeCheck { inst, c, delta, t_max } => {
            name("hyp-type-check", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "C", c);
            set(&mut m, "delta", delta);
            set(&mut m, "t_max", t_max);
            config.params = m;
        }
        Command::TreeLowerbound { h, n, trials } => {
            name("tree-lowerbound", &mut config)?;
            let mut m = params(&mut config);
            set(&mut m, "h", h);
            set(&mut m, "n", n);
            set(&mut m, "trials", trials);
            config.params = m;
        }
        Command::Laakso { level, t_max, trials } => {
            name("laakso", &mut config)?;
            let mut m = params(&mut config);
            set(&mut m, "level", level);
            set(&mut m, "t_max", t_max);
            set(&mut m, "trials", trials);
            config.params = m;
        }
        Command::ExtendTree { inst, l } => {
            name("extend-tree", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "L", l);
            config.params = m;
        }
        Command::NetColoring { inst, r } => {
            name("net-coloring", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "R", r);
            config.params = m;
        }
        Command::Glue { inst, eps, d } => {
            name("glue", &mut config)?;
            apply_instance(&mut config, inst)?;
            let mut m = params(&mut config);
            set(&mut m, "eps", eps);
            set(&mut m, "D", d);
            config.params = m;
        }
        Command::Cube { d, t_max, trials } => {
            name("cube", &mut config)?;
            let mut m = params(&mut config);
            set(&mut m, "d", d);
            set(&mut m, "t_max", t_max);
            set(&mut m, "trials", trials);
            config.params = m;
        }
        Command::PaperSuite => name("paper-suite", &mut config)?,
    }
    if let Some(seed) = cli.global.seed {
        config.seed = seed;
    }
    if let Some(out) = cli.global.out {
        config.out = Some(out);
    }
    Ok(Some(config))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let config = match build_config(cli) {
        Ok(Some(c)) => c,
        Ok(None) => return ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(error_exit_code(&e) as u8);
        }
    };
    match run(&config) {
        Ok(report) => {
            println!("{}: {} [{}]", report.experiment, report.summary, if report.pass { "pass" } else { "FAIL" });
            if !report.pass {
                let failing: Vec<_> = report.rows.iter().filter(|r| r.get("pass") == Some(&json!(false))).take(5).collect();
                for r in failing {
                    println!("  failing row: {}", Value::Object(r.clone()));
                }
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
