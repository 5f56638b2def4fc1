//! Command-line front end for the planning pipeline.
//!
//! Exit codes: 0 = construction found, 2 = no construction for this
//! family (MDS fallback emitted), 1 = error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use geoplan::coloring::{k_colorable, DEFAULT_EXPANSION_BUDGET};
use geoplan::constructors::scalar_mds_scheme;
use geoplan::eval::evaluate;
use geoplan::field::{smallest_prime_above, FieldSpec};
use geoplan::network::Network;
use geoplan::nngraph::build_nn_graphs;
use geoplan::oracle::{
    brute_force_uncoded, verify_corollary1, verify_theorem1, SearchFilter, TheoremVerdict,
    DEFAULT_VARIANT_CAP,
};
use geoplan::plan::{plan, PlanOptions, Verdict};
use geoplan::rational::{rat_display, rat_to_f64, rat_to_json};
use geoplan::scheme::SchemeKind;

#[derive(Parser)]
#[command(name = "geoplan", version, about = "Latency-aware placement planning for geo-distributed storage")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit JSON (default is human-readable text)
    #[arg(long, global = true)]
    json: bool,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Latency lower bounds for a file count k
    Bounds {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Enumerate nearest-neighbor graph variants
    Nngraph {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
        variant_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Try to color the extended graph within a color budget
    Color {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        /// Color budget (number of colors to try)
        #[arg(long)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
        variant_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replace the matrix with all-pairs shortest-path distances
    Reduce {
        network: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Build an MDS baseline scheme
    Construct {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        /// Field characteristic; default is the smallest prime > n
        #[arg(long)]
        field: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate a scheme file against a network
    Evaluate {
        network: PathBuf,
        #[arg(long)]
        scheme: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exhaustive uncoded placement search
    Search {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, value_parser = ["all", "worst-case-optimal"], default_value = "all")]
        filter: String,
        #[arg(long, default_value_t = geoplan::oracle::DEFAULT_ASSIGNMENT_BUDGET)]
        budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cross-check results against independent oracles
    Verify {
        #[command(subcommand)]
        check: VerifyCommand,
    },
    /// Full pipeline: bounds, graphs, coloring, construction, report
    Plan {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        field: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
        variant_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Coloring decision vs exhaustive search
    Theorem1 {
        network: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_VARIANT_CAP)]
        variant_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// k=2 optimal uncoded placement always exists
    Corollary1 {
        network: PathBuf,
        /// accepted for symmetry with other subcommands; must be 2
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn load_network(path: &PathBuf) -> Result<Network, geoplan::Error> {
    Network::from_json(&fs::read_to_string(path)?)
}

fn emit(output: &OutputArgs, value: &Value, text: String) -> Result<(), geoplan::Error> {
    let rendered = if output.json {
        serde_json::to_string_pretty(value).expect("serializable") + "\n"
    } else {
        text
    };
    match &output.out {
        Some(path) => fs::write(path, rendered)?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<u8, geoplan::Error> {
    match cli.command {
        Command::Bounds { network, k, output } => {
            let net = load_network(&network)?;
            let profile = net.lambda_profile();
            let avg = profile.avg_latency_lower_bound(k)?;
            let per_node: Vec<_> = (0..net.len())
                .map(|i| profile.worstcase_lower_bound(k, i))
                .collect::<Result<_, _>>()?;
            let value = json!({
                "format": 1,
                "k": k,
                "per_node_worstcase_bound_ms": net.names().iter().zip(&per_node)
                    .map(|(n, b)| (n.clone(), rat_to_json(b)))
                    .collect::<serde_json::Map<_, _>>(),
                "average_bound_ms": rat_to_json(&avg),
                "average_bound_ms_approx": rat_to_f64(&avg),
                "metric": net.is_metric(),
            });
            let mut text = String::new();
            for (name, b) in net.names().iter().zip(&per_node) {
                text.push_str(&format!("{name}: worst-case bound {} ms\n", rat_display(b)));
            }
            text.push_str(&format!("average bound: {} ms\n", rat_display(&avg)));
            if !net.is_metric() {
                text.push_str("note: matrix violates the triangle inequality; consider `reduce`\n");
            }
            emit(&output, &value, text)?;
            Ok(0)
        }
        Command::Nngraph {
            network,
            k,
            variant_cap,
            output,
        } => {
            let net = load_network(&network)?;
            let set = build_nn_graphs(&net, k, variant_cap)?;
            let value = json!({
                "format": 1,
                "k": k,
                "variant_count": set.graphs.len(),
                "truncated": set.truncated,
                "variants": set.graphs.iter().map(|g| {
                    net.names().iter().enumerate().map(|(i, name)| {
                        (name.clone(), Value::from(g.in_neighbors(i).iter()
                            .map(|&j| net.names()[j].clone()).collect::<Vec<_>>()))
                    }).collect::<serde_json::Map<_, _>>()
                }).collect::<Vec<_>>(),
            });
            let mut text = format!(
                "{} variant(s){}\n",
                set.graphs.len(),
                if set.truncated { " (truncated)" } else { "" }
            );
            for (idx, g) in set.graphs.iter().enumerate() {
                text.push_str(&format!("variant {idx}:\n{}", g.edge_list_text(&net)));
            }
            emit(&output, &value, text)?;
            Ok(0)
        }
        Command::Color {
            network,
            k,
            budget,
            variant_cap,
            output,
        } => {
            let net = load_network(&network)?;
            let set = build_nn_graphs(&net, k, variant_cap)?;
            for (idx, g) in set.graphs.iter().enumerate() {
                if let Some(c) = k_colorable(&g.extend(), budget, DEFAULT_EXPANSION_BUDGET)? {
                    let value = json!({
                        "format": 1,
                        "colorable": true,
                        "variant_index": idx,
                        "colors": net.names().iter().zip(&c.colors)
                            .map(|(n, &col)| (n.clone(), Value::from(col as u64)))
                            .collect::<serde_json::Map<_, _>>(),
                    });
                    let text = net
                        .names()
                        .iter()
                        .zip(&c.colors)
                        .map(|(n, c)| format!("{n}: color {c}\n"))
                        .collect();
                    emit(&output, &value, text)?;
                    return Ok(0);
                }
            }
            let value = json!({"format": 1, "colorable": false, "truncated": set.truncated});
            emit(
                &output,
                &value,
                format!("no variant is {budget}-colorable\n"),
            )?;
            Ok(2)
        }
        Command::Reduce { network, output } => {
            let net = load_network(&network)?.reduce_multihop();
            let value = net.to_json();
            let text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
            emit(&output, &value, text)?;
            Ok(0)
        }
        Command::Construct {
            network,
            k,
            field,
            output,
        } => {
            let net = load_network(&network)?;
            let p = field.unwrap_or_else(|| smallest_prime_above(net.len() as u64));
            let scheme = SchemeKind::Linear(scalar_mds_scheme(&net, k, FieldSpec::new(p)?)?);
            let report = evaluate(&net, &scheme)?;
            let value = json!({
                "format": 1,
                "scheme": scheme.to_json(&net),
                "report": report.to_json(&net),
            });
            let text = report.to_text(&net);
            emit(&output, &value, text)?;
            Ok(0)
        }
        Command::Evaluate {
            network,
            scheme,
            output,
        } => {
            let net = load_network(&network)?;
            let scheme = SchemeKind::from_json(&fs::read_to_string(&scheme)?, &net)?;
            let report = evaluate(&net, &scheme)?;
            emit(&output, &report.to_json(&net), report.to_text(&net))?;
            Ok(0)
        }
        Command::Search {
            network,
            k,
            filter,
            budget,
            output,
        } => {
            let net = load_network(&network)?;
            let filter = match filter.as_str() {
                "worst-case-optimal" => SearchFilter::WorstCaseOptimalOnly,
                _ => SearchFilter::All,
            };
            let res = brute_force_uncoded(&net, k, filter, budget)?;
            let value = json!({
                "format": 1,
                "explored": res.explored,
                "best_average_ms": res.best_average.as_ref().map(rat_to_json),
                "witnesses": res.witnesses.iter()
                    .map(|w| SchemeKind::Uncoded(w.clone()).to_json(&net))
                    .collect::<Vec<_>>(),
            });
            let text = match &res.best_average {
                Some(avg) => format!(
                    "explored {} assignments; best average {} ms with {} witness(es)\n",
                    res.explored,
                    rat_display(avg),
                    res.witnesses.len()
                ),
                None => format!(
                    "explored {} assignments; none pass the filter\n",
                    res.explored
                ),
            };
            emit(&output, &value, text)?;
            Ok(0)
        }
        Command::Verify { check } => match check {
            VerifyCommand::Theorem1 {
                network,
                k,
                variant_cap,
                output,
            } => {
                let net = load_network(&network)?;
                let verdict = verify_theorem1(&net, k, variant_cap)?;
                let (label, code) = match &verdict {
                    TheoremVerdict::Agree { exists } => {
                        (format!("agree (optimal uncoded exists: {exists})"), 0)
                    }
                    TheoremVerdict::Mismatch { coloring, oracle } => (
                        format!("MISMATCH: coloring={coloring} oracle={oracle}"),
                        1,
                    ),
                    TheoremVerdict::Unknown => ("unknown (variant cap exceeded)".to_string(), 2),
                };
                let value = json!({"format": 1, "verdict": label});
                emit(&output, &value, format!("{label}\n"))?;
                Ok(code)
            }
            VerifyCommand::Corollary1 { network, k, output } => {
                if k != 2 {
                    return Err(geoplan::Error::KOutOfRange { k, n: 0 });
                }
                let net = load_network(&network)?;
                let scheme = verify_corollary1(&net)?;
                let value = json!({
                    "format": 1,
                    "verdict": "optimal uncoded placement found",
                    "scheme": SchemeKind::Uncoded(scheme.clone()).to_json(&net),
                });
                let text = net
                    .names()
                    .iter()
                    .zip(&scheme.assignment)
                    .map(|(n, f)| format!("{n}: W{}\n", f + 1))
                    .collect();
                emit(&output, &value, text)?;
                Ok(0)
            }
        },
        Command::Plan {
            network,
            k,
            field,
            variant_cap,
            output,
        } => {
            let net = load_network(&network)?;
            let options = PlanOptions {
                variant_cap,
                coloring_budget: DEFAULT_EXPANSION_BUDGET,
                field: field.map(FieldSpec::new).transpose()?,
            };
            let doc = plan(&net, k, &options)?;
            let value = doc.to_json(&net);
            let mut text = format!("verdict: {}\n", doc.verdict.as_str());
            if let SchemeKind::Linear(l) = &doc.scheme {
                for (i, name) in net.names().iter().enumerate() {
                    text.push_str(&format!("{name}: X = {}\n", l.node_formula(i)));
                }
            }
            if let SchemeKind::Uncoded(u) = &doc.scheme {
                for (name, f) in net.names().iter().zip(&u.assignment) {
                    text.push_str(&format!("{name}: W{}\n", f + 1));
                }
            }
            text.push_str(&doc.report.to_text(&net));
            emit(&output, &value, text)?;
            Ok(match doc.verdict {
                Verdict::NoConstruction => 2,
                _ => 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
