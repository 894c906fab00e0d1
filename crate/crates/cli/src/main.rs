use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use tropmod::bergman::{chains_of_flats_fan, nested_set_fan, one_connected_building_set, FlatFan};
use tropmod::dot::{graph_to_dot, tree_to_dot};
use tropmod::fibre::{non_chordal_counterexample, square_counterexample, verify_fibre_theorem, DEFAULT_SAMPLES};
use tropmod::moduli::{all_splits, losev_manin_fan, m0n_fan, m0w_fan, Projection};
use tropmod::{Error, Graph, GraphicMatroid, M0wOutcome, SuiteConfig, WeightVector, WeightedFan};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "tropmod", version, about = "Tropical moduli of weighted stable curves and Bergman fans of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,

    /// Seed for every random sample.
    #[arg(long, env = "TROPMOD_SEED", default_value_t = 0, global = true)]
    seed: u64,

    /// Re-check produced fans by sampling interior points.
    #[arg(long, global = true)]
    paranoid: bool,

    /// Write the output here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    Nested,
    Chains,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Square,
    NonChordal,
}

#[derive(Subcommand)]
enum Command {
    /// The moduli fan of n marked points.
    M0n {
        #[arg(long)]
        n: usize,
    },
    /// Bergman fan of the reduced weight graph with the image of every split.
    Project {
        #[arg(long, value_parser = parse_weights)]
        w: WeightVector,
    },
    /// The weighted moduli fan, or why there is none.
    M0w {
        #[arg(long, value_parser = parse_weights)]
        w: WeightVector,
    },
    /// The Losev–Manin fan with t light points.
    LosevManin {
        #[arg(long)]
        t: usize,
    },
    /// Bergman fan of a graph read from an edge list or JSON file.
    Bergman {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Structure::Nested)]
        structure: Structure,
        /// Present the fan modulo the all-ones line.
        #[arg(long)]
        quotient: bool,
    },
    /// Fibre-product decomposition of the weight graph, or a counterexample.
    Fibre {
        #[arg(long, value_parser = parse_weights, required_unless_present = "example")]
        w: Option<WeightVector>,
        #[arg(long, value_enum, conflicts_with = "w")]
        example: Option<Example>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
    /// Verification suites.
    Verify {
        #[command(subcommand)]
        suite: VerifySuite,
    },
}

#[derive(Subcommand)]
enum VerifySuite {
    /// Every acceptance check.
    All {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
    },
}

fn parse_weights(s: &str) -> Result<WeightVector, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(String),
    /// A check failed; the payload is the counterexample.
    Verification(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::InvalidWeights(_)
            | Error::InvalidGraph(_)
            | Error::InvalidEmbedding(_)
            | Error::TooLarge { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

struct Output {
    json: Value,
    dot: Option<String>,
    passed: bool,
}

fn envelope(command: &str, body: impl Serialize) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command });
    let body = serde_json::to_value(body).expect("serializable output");
    if let (Some(map), Value::Object(extra)) = (v.as_object_mut(), body) {
        map.extend(extra);
    }
    v
}

fn paranoid(cli: &Cli, fan: &WeightedFan) -> Result<(), Failure> {
    if cli.paranoid {
        fan.paranoid_check(cli.seed, 5)
            .map_err(|why| Failure::Verification(json!({ "schema": SCHEMA, "paranoid_check": why })))?;
    }
    Ok(())
}

fn flat_fan_json(f: &FlatFan) -> Value {
    json!({ "fan": f.fan, "flats": f.flats.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), "quotient": f.quotient })
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let ok = |json: Value, dot: Option<String>| Output { json, dot, passed: true };
    match &cli.command {
        Command::M0n { n } => {
            let f = m0n_fan(*n)?;
            paranoid(cli, &f.fan)?;
            let dot = f.types.iter().enumerate().map(|(i, t)| tree_to_dot(t, &format!("cone{i}"))).collect();
            Ok(ok(envelope("m0n", &f), Some(dot)))
        }
        Command::Project { w } => {
            let p = Projection::new(w)?;
            let m = GraphicMatroid::from_graph(p.graph().clone());
            let fan = nested_set_fan(&m, &one_connected_building_set(&m)?)?.quotient()?;
            paranoid(cli, &fan.fan)?;
            let rays: Vec<_> = all_splits(w.n()).into_iter().map(|s| p.ray_image(s)).collect();
            let body = json!({
                "weights": w,
                "root": p.root(),
                "graph": p.graph(),
                "bergman": flat_fan_json(&fan),
                "ray_images": rays,
            });
            Ok(ok(envelope("project", body), Some(graph_to_dot(p.graph(), "G(w)"))))
        }
        Command::M0w { w } => {
            let out = m0w_fan(w)?;
            if let M0wOutcome::Fan(f) = &out {
                paranoid(cli, &f.fan.fan)?;
            }
            let dot = match &out {
                M0wOutcome::Fan(f) => graph_to_dot(&f.graph, "G(w)"),
                M0wOutcome::Obstruction(_) => graph_to_dot(&w.total_graph(), "G_t(w)"),
            };
            Ok(ok(envelope("m0w", &out), Some(dot)))
        }
        Command::LosevManin { t } => {
            let f = losev_manin_fan(*t)?;
            paranoid(cli, &f.fan)?;
            let star = Graph::star(2, 3..=(*t as i64 + 2))?;
            Ok(ok(
                envelope("losev-manin", json!({ "t": t, "bergman": flat_fan_json(&f) })),
                Some(graph_to_dot(&star, "star")),
            ))
        }
        Command::Bergman { graph, structure, quotient } => {
            let text = fs::read_to_string(graph).map_err(|e| Failure::Usage(format!("{}: {e}", graph.display())))?;
            let g = Graph::parse(&text)?;
            let m = GraphicMatroid::from_graph(g.clone());
            let mut fan = match structure {
                Structure::Nested => nested_set_fan(&m, &one_connected_building_set(&m)?)?,
                Structure::Chains => chains_of_flats_fan(&m)?,
            };
            if *quotient {
                fan = fan.quotient()?;
            }
            paranoid(cli, &fan.fan)?;
            let body = json!({ "graph": g, "bergman": flat_fan_json(&fan) });
            Ok(ok(envelope("bergman", body), Some(graph_to_dot(&g, "graph"))))
        }
        Command::Fibre { w, example, samples } => {
            if let Some(ex) = example {
                let (json, graph, passed) = match ex {
                    Example::Square => {
                        let r = square_counterexample()?;
                        (envelope("fibre", &r), r.glued.clone(), r.dimension_mismatch)
                    }
                    Example::NonChordal => {
                        let r = non_chordal_counterexample()?;
                        (envelope("fibre", &r), r.glued.clone(), r.excess_rays)
                    }
                };
                return Ok(Output { json, dot: Some(graph_to_dot(&graph, "glued")), passed });
            }
            let w = w.as_ref().expect("clap requires --w without --example");
            let r = verify_fibre_theorem(w, *samples, cli.seed)?;
            let dot = graph_to_dot(&r.decomposition.glued, "glued");
            Ok(Output { passed: r.passed, json: envelope("fibre", &r), dot: Some(dot) })
        }
        Command::Verify { suite: VerifySuite::All { max_n } } => {
            if !(4..=7).contains(max_n) {
                return Err(Failure::Usage(format!("--max-n must lie in 4..=7, got {max_n}")));
            }
            let cfg = SuiteConfig { max_n: *max_n, seed: cli.seed, ..SuiteConfig::default() };
            let report = tropmod::run_suite(&cfg);
            for c in &report.criteria {
                eprintln!("criterion {}: {}  {}: {}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(Output { passed: report.passed(), json: envelope("verify", &report), dot: None })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|out| {
        let text = match cli.format {
            Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("json")),
            Format::Dot => out.dot.clone().ok_or_else(|| Failure::Usage("this command has no DOT output".into()))?,
        };
        emit(&cli, &text)?;
        Ok(out.passed)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(v)) => {
            println!("{}", serde_json::to_string_pretty(&v).expect("json"));
            ExitCode::from(1)
        }
    }
}
