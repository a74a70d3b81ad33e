use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use cartwl::cc::wl_closure;
use cartwl::constructions::{
    build_iso_family, exponentiate, probe_exponentiation_equality, tensor_decomposition_check, PermGroup,
};
use cartwl::factor::prime_factorize;
use cartwl::graph::{
    cartesian_product, named_graph, parse_edge_list, parse_graph6, serialize_graph6, Graph,
};
use cartwl::kwl::{k_wl_with_budget, two_closure_with_cap, two_extension_with_cap, wl_m_closed, wl_m_equivalent};
use cartwl::verify::{verify, Suite};
use cartwl::Error;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "cartwl", version, about = "Coherent configurations, k-WL and Cartesian factorization of graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(clap::Args, Debug)]
struct Options {
    /// Named graph such as `hamming:2,4`; repeatable.
    #[arg(long, global = true)]
    named: Vec<String>,
    /// Graph file; repeatable.
    #[arg(long, global = true)]
    file: Vec<PathBuf>,
    /// Format of `--file` inputs; guessed from the extension when absent.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true, default_value_t = 3)]
    k: usize,
    #[arg(long, global = true, default_value_t = 2)]
    m: usize,
    /// Seed for `random_connected:n` specs given without one.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest tuple count k-WL may allocate.
    #[arg(long, global = true, default_value_t = cartwl::kwl::DEFAULT_TUPLE_BUDGET)]
    budget_tuples: u128,
    /// Largest vertex count for 2-extensions and 2-closedness checks.
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Also write the JSON report here (only on success).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Graph6,
    Edges,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GroupKind {
    Symmetric,
    Cyclic,
    Trivial,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coherent closure of one graph.
    WlClose,
    /// k-dimensional WL of one graph.
    Kwl {
        /// Write the raw tuple colors (little-endian u32, row-major) here.
        #[arg(long)]
        colors_out: Option<PathBuf>,
    },
    /// WL_m-equivalence of two graphs.
    Equiv,
    /// Whether pr_2 WL_m equals the coherent closure.
    Closed,
    /// Prime factorization with respect to the Cartesian product.
    Factorize,
    /// Cartesian product of the inputs.
    Product,
    /// Tensor decomposition of the closure of the product of the inputs.
    TensorCheck,
    /// Exponentiation of the closures of WL-equivalent inputs.
    Exponentiate {
        #[arg(long, value_enum, default_value_t = GroupKind::Symmetric)]
        group: GroupKind,
    },
    /// 2-extension and 2-closure of the closure of one graph.
    TwoClosure,
    /// Print the named graphs.
    Named,
    /// Run a property suite over the built-in corpus.
    Verify { suite: String },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::WlClose => "wl-close",
            Command::Kwl { .. } => "kwl",
            Command::Equiv => "equiv",
            Command::Closed => "closed",
            Command::Factorize => "factorize",
            Command::Product => "product",
            Command::TensorCheck => "tensor-check",
            Command::Exponentiate { .. } => "exponentiate",
            Command::TwoClosure => "two-closure",
            Command::Named => "named",
            Command::Verify { .. } => "verify",
        }
    }
}

enum Failure {
    Usage(String),
    Domain(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::UnknownGraph(_) | Error::InvalidParameter { .. } | Error::BadDimension(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Domain(other.to_string()),
        }
    }
}

#[derive(Serialize)]
struct Input {
    source: String,
    graph6: String,
}

#[derive(Serialize)]
struct Report {
    command: String,
    inputs: Vec<Input>,
    result: Value,
    timing_ms: u128,
    version: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.opts.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    match run(&cli) {
        Ok((inputs, result, passed)) => {
            let report = Report {
                command: cli.command.name().to_string(),
                inputs,
                result,
                timing_ms: start.elapsed().as_millis(),
                version: env!("CARGO_PKG_VERSION").to_string(),
            };
            let text = serde_json::to_string_pretty(&report).expect("report serializes");
            if let Some(path) = &cli.opts.out {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            println!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

/// Adds `--seed` to `random_connected:n` specs that lack one.
fn complete_spec(spec: &str, seed: u64) -> String {
    match spec.split_once(':') {
        Some((name, params))
            if matches!(name.trim(), "random_connected" | "random") && !params.contains(',') =>
        {
            format!("{spec},{seed}")
        }
        _ => spec.to_string(),
    }
}

fn load_inputs(opts: &Options) -> Result<Vec<(String, Graph)>, Failure> {
    let mut out = Vec::new();
    for spec in &opts.named {
        let spec = complete_spec(spec, opts.seed);
        let g = named_graph(&spec).map_err(|e| Failure::Usage(format!("--named {spec}: {e}")))?;
        out.push((spec, g));
    }
    for path in &opts.file {
        let bytes = std::fs::read(path).map_err(|e| Failure::Usage(format!("--file {}: {e}", path.display())))?;
        let format = opts.format.unwrap_or_else(|| match path.extension().and_then(|e| e.to_str()) {
            Some("g6" | "graph6") => Format::Graph6,
            _ => Format::Edges,
        });
        let parsed = match format {
            Format::Graph6 => parse_graph6(bytes.trim_ascii_end()),
            Format::Edges => parse_edge_list(&String::from_utf8_lossy(&bytes)),
        };
        let g = parsed.map_err(|e| Failure::Usage(format!("--file {}: {e}", path.display())))?;
        out.push((path.display().to_string(), g));
    }
    Ok(out)
}

fn exactly<const N: usize>(command: &str, graphs: &[(String, Graph)]) -> Result<[Graph; N], Failure> {
    if graphs.len() != N {
        return Err(Failure::Usage(format!(
            "`{command}` takes exactly {N} input graph(s), got {}",
            graphs.len()
        )));
    }
    Ok(std::array::from_fn(|i| graphs[i].1.clone()))
}

fn at_least_one(command: &str, graphs: &[(String, Graph)]) -> Result<Vec<Graph>, Failure> {
    if graphs.is_empty() {
        return Err(Failure::Usage(format!("`{command}` needs at least one input graph")));
    }
    Ok(graphs.iter().map(|(_, g)| g.clone()).collect())
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

fn run(cli: &Cli) -> Result<(Vec<Input>, Value, bool), Failure> {
    let opts = &cli.opts;
    let name = cli.command.name();
    let graphs = load_inputs(opts)?;
    let inputs = graphs
        .iter()
        .map(|(source, g)| Input {
            source: source.clone(),
            graph6: serialize_graph6(g),
        })
        .collect();
    let ext_cap = opts.cap.unwrap_or(cartwl::kwl::DEFAULT_EXTENSION_CAP);
    let mut passed = true;
    let result = match &cli.command {
        Command::WlClose => {
            let [g] = exactly::<1>(name, &graphs)?;
            let cc = wl_closure(&g);
            eprintln!("closure rank {}", cc.rank());
            json!({
                "rank": cc.rank(),
                "rounds": cc.rounds(),
                "class_sizes": cc.class_sizes(),
                "configuration": cc.export(),
            })
        }
        Command::Kwl { colors_out } => {
            let [g] = exactly::<1>(name, &graphs)?;
            let kc = k_wl_with_budget(&g, opts.k, opts.budget_tuples)?;
            if let Some(path) = colors_out {
                let file = std::fs::File::create(path)
                    .map_err(|e| Failure::Domain(format!("cannot create {}: {e}", path.display())))?;
                kc.write_colors(std::io::BufWriter::new(file))
                    .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?;
            }
            eprintln!("{}-WL rank {}", kc.k(), kc.rank());
            to_value(kc.export())
        }
        Command::Equiv => {
            let [g1, g2] = exactly::<2>(name, &graphs)?;
            let equivalent = wl_m_equivalent(&g1, &g2, opts.m, opts.budget_tuples)?;
            json!({ "m": opts.m, "equivalent": equivalent })
        }
        Command::Closed => {
            let [g] = exactly::<1>(name, &graphs)?;
            let closed = wl_m_closed(&g, opts.m, opts.budget_tuples)?;
            json!({ "m": opts.m, "closed": closed })
        }
        Command::Factorize => {
            let [g] = exactly::<1>(name, &graphs)?;
            let r = prime_factorize(&g)?;
            eprintln!("{} prime factor(s)", r.num_factors);
            let edge_classes: Vec<[usize; 3]> = r
                .edges
                .iter()
                .zip(&r.edge_class)
                .map(|(&(u, v), &c)| [u, v, c as usize])
                .collect();
            json!({
                "num_factors": r.num_factors,
                "factor_orders": r.factor_orders(),
                "factor_graph6": r.factors.iter().map(serialize_graph6).collect::<Vec<_>>(),
                "edge_classes": edge_classes,
                "coordinates": r.coordinates,
                "certified": r.certified,
            })
        }
        Command::Product => {
            let factors = at_least_one(name, &graphs)?;
            let (g, ps) = cartesian_product(&factors)?;
            json!({
                "n": g.n(),
                "edge_count": g.edge_count(),
                "factor_orders": ps.orders(),
                "graph6": serialize_graph6(&g),
            })
        }
        Command::TensorCheck => {
            let factors = at_least_one(name, &graphs)?;
            let cap = opts.cap.unwrap_or(cartwl::constructions::DEFAULT_HYPOTHESIS_CAP);
            let r = tensor_decomposition_check(&factors, cap)?;
            if r.hypothesis_2closed.is_none() {
                eprintln!("hypothesis not established: {} points exceed the cap {cap}", r.points);
            }
            to_value(r)
        }
        Command::Exponentiate { group } => {
            let factors = at_least_one(name, &graphs)?;
            let family = build_iso_family(&factors)?;
            let n = factors.len();
            let group = match group {
                GroupKind::Symmetric => PermGroup::symmetric(n)?,
                GroupKind::Cyclic => PermGroup::cyclic(n)?,
                GroupKind::Trivial => PermGroup::trivial(n)?,
            };
            let exp = exponentiate(&family, &group)?;
            let probe = probe_exponentiation_equality(&factors)?;
            json!({
                "points": exp.n(),
                "group_order": group.order(),
                "rank": exp.rank(),
                "coherent": exp.verify_axioms().is_coherent(),
                "edge_set_is_relation": exp.tags().contains_key("E"),
                "symmetric_probe": probe,
            })
        }
        Command::TwoClosure => {
            let [g] = exactly::<1>(name, &graphs)?;
            let cc = wl_closure(&g);
            let ext = two_extension_with_cap(&cc, ext_cap)?;
            let bar = two_closure_with_cap(&cc, ext_cap)?;
            let closed = cartwl::cc::partition_eq(&cc, &bar)?;
            json!({
                "rank": cc.rank(),
                "extension_rank": ext.extended.rank(),
                "two_closure_rank": bar.rank(),
                "two_closed": closed,
            })
        }
        Command::Named => {
            at_least_one(name, &graphs)?;
            Value::Array(
                graphs
                    .iter()
                    .map(|(source, g)| {
                        json!({
                            "spec": source,
                            "n": g.n(),
                            "edge_count": g.edge_count(),
                            "graph6": serialize_graph6(g),
                        })
                    })
                    .collect(),
            )
        }
        Command::Verify { suite } => {
            let suite: Suite = suite.parse()?;
            let report = verify(suite);
            for p in &report.properties {
                eprintln!("{} {} ({} checked)", if p.passed { "pass" } else { "FAIL" }, p.name, p.checked);
            }
            passed = report.passed;
            to_value(report)
        }
    };
    Ok((inputs, result, passed))
}
