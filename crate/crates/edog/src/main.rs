use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use edog::detectors::{detect, Method};
use edog::error::{CliError, Result};
use edog::experiment::{annotate_if_needed, attackable_nodes, random_edge_experiment, run_experiment, ExperimentConfig};
use edog::formats::{
    load_attack, load_gcn, load_graph, load_json, load_scores, save_attack, save_gcn, save_graph, save_json,
    save_scores, to_json_line,
};
use edog_core::attack::{run_attack, AttackProfile};
use edog_core::gcn::train_node_classifier;
use edog_core::graph::{gen_barabasi_albert, gen_erdos_renyi};
use edog_core::metrics::roc_auc;

#[derive(Parser)]
#[command(name = "edog", version, about = "Detect adversarially inserted edges in attributed graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Er,
    Ba,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random graph with synthetic features, labels and split
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Edge probability (er)
        #[arg(long)]
        p: Option<f64>,
        /// Edges per new node (ba)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        dim: usize,
        #[arg(long, default_value_t = 0.5)]
        train_fraction: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the node classifier
    Train {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Attack a target node (or the whole graph for `meta`)
    Attack {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = parse_profile)]
        profile: AttackProfile,
        #[arg(long, conflicts_with = "targets_by_degree")]
        target: Option<usize>,
        /// Attack the first correctly classified node of this degree that flips
        #[arg(long)]
        targets_by_degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also write the attacked graph here
        #[arg(long)]
        attacked_graph: Option<PathBuf>,
    },
    /// Score every edge of a graph
    Detect {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// AUC of a score file against the edges an attack added
    Eval {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        attack: PathBuf,
    },
    /// Run an experiment described by a JSON config
    Exp {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Share of top-ranked edges that are not randomly added ones
    RandomEdges {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8,16")]
        counts: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "edog,ald,katz")]
        methods: Vec<Method>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_profile(s: &str) -> std::result::Result<AttackProfile, String> {
    s.parse().map_err(|e: edog_core::Error| e.to_string())
}

fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen {
            kind,
            n,
            p,
            m,
            seed,
            dim,
            train_fraction,
            out,
        } => {
            let g = match kind {
                Kind::Er => gen_erdos_renyi(n, p.ok_or_else(|| CliError::Usage("--p is required for er".into()))?, seed)?,
                Kind::Ba => gen_barabasi_albert(n, m.ok_or_else(|| CliError::Usage("--m is required for ba".into()))?, seed)?,
            };
            let g = annotate_if_needed(g, dim, 3, train_fraction, seed)?;
            save_graph(&out, &g)
        }
        Command::Train { graph, seed, out } => {
            let g = load_graph(&graph)?;
            save_gcn(&out, &train_node_classifier(&g, seed)?)
        }
        Command::Attack {
            graph,
            model,
            profile,
            target,
            targets_by_degree,
            seed,
            out,
            attacked_graph,
        } => {
            let g = load_graph(&graph)?;
            let m = load_gcn(&model)?;
            let result = match (profile, target, targets_by_degree) {
                (AttackProfile::Meta, _, _) => run_attack(&g, &m, profile, None, seed)?,
                (_, Some(t), _) => run_attack(&g, &m, profile, Some(t), seed)?,
                (_, None, Some(d)) => {
                    let mut last = None;
                    for t in attackable_nodes(&g, &m, seed)?.into_iter().filter(|&t| g.degree(t) == d) {
                        let r = run_attack(&g, &m, profile, Some(t), seed)?;
                        let done = r.success;
                        last = Some(r);
                        if done {
                            break;
                        }
                    }
                    last.ok_or_else(|| CliError::Usage(format!("no correctly classified node of degree {d}")))?
                }
                (_, None, None) => return Err(CliError::Usage("give --target or --targets-by-degree".into())),
            };
            if let Some(path) = attacked_graph {
                save_graph(&path, &g.with_added_edges(&result.added_edges)?)?;
            }
            eprintln!(
                "{} attack on {:?}: {} edge(s) added, success = {}",
                result.profile,
                result.target,
                result.added_edges.len(),
                result.success
            );
            save_attack(&out, &result)
        }
        Command::Detect { graph, method, seed, out } => {
            let g = load_graph(&graph)?;
            save_scores(&out, &detect(&g, method, seed)?)
        }
        Command::Eval { scores, attack } => {
            let s = load_scores(&scores, "file")?;
            let r = load_attack(&attack)?;
            let truth = r.added_edges.iter().copied().collect();
            println!("{:.6}", roc_auc(&s, &truth)?);
            Ok(())
        }
        Command::Exp { config, out } => {
            let cfg: ExperimentConfig = load_json(&config)?;
            let start = std::time::Instant::now();
            let report = run_experiment(&cfg)?;
            eprintln!("finished in {:.1}s", start.elapsed().as_secs_f64());
            if let Some(w) = &report.warning {
                eprintln!("warning: {w}");
            }
            save_json(&out, &report)
        }
        Command::RandomEdges {
            graph,
            counts,
            methods,
            seed,
            out,
        } => {
            let g = load_graph(&graph)?;
            let rows = random_edge_experiment(&g, &counts, &methods, seed)?;
            match out {
                Some(path) => save_json(&path, &rows),
                None => {
                    print!("{}", to_json_line(&rows));
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
