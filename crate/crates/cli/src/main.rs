mod formats;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use rbcdn::generate::{self, EmbeddedGraph};
use rbcdn::graph::{hamiltonian_cycle, is_connected};
use rbcdn::planar::embed_components;
use rbcdn::{
    build_rbcdn_instance, extract_hamiltonian_cycle, fpp_embed, solve_exact, solve_greedy, CatalogSpec, FailureEvent,
    RbcdnRpInstance, SolveReport,
};

use formats::{
    invalid, read_json, read_kind, to_json, CliError, EventRecord, GraphFile, InstanceFile, Kind, LayoutFile,
    ReportFile, DEFAULT_SAMPLES, SCHEMA_VERSION,
};

#[derive(Parser)]
#[command(
    name = "rbcdn",
    version,
    about = "Region-based component decomposition numbers and link augmentation"
)]
struct Cli {
    /// Worker threads for catalog evaluation.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum CatalogArg {
    Unit,
    Geometric,
    Sampled,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Cycle,
    Wheel,
    Grid,
    Star,
    K2,
    Tree,
    Maximal,
    Planar,
}

#[derive(clap::Args)]
struct CatalogOpts {
    /// Overrides the catalog semantics declared in the instance file.
    #[arg(long, value_enum)]
    catalog: Option<CatalogArg>,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl CatalogOpts {
    fn spec(&self) -> Result<Option<CatalogSpec>, CliError> {
        Ok(match self.catalog {
            None => None,
            Some(CatalogArg::Unit) => Some(CatalogSpec::Unit),
            Some(CatalogArg::Geometric) => Some(CatalogSpec::Geometric),
            Some(CatalogArg::Sampled) => {
                if self.samples == 0 {
                    return Err(invalid("--samples must be at least 1"));
                }
                Some(CatalogSpec::Sampled {
                    samples: self.samples,
                    seed: self.seed,
                })
            }
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the RBCDN of an instance's network and a witness event.
    Rbcdn {
        instance: PathBuf,
        #[command(flatten)]
        catalog: CatalogOpts,
        /// Also write a JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for an augmentation meeting the instance budget and target.
    Augment {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        #[command(flatten)]
        catalog: CatalogOpts,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a planar graph with rotation into an RBCDN-RP instance.
    Reduce {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read a Hamiltonian cycle off an augmentation of a reduced instance.
    Extract {
        instance: PathBuf,
        #[arg(long)]
        report: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Look for a Hamiltonian cycle by backtracking.
    Ham { graph: PathBuf },
    /// Straight-line grid drawing of a planar graph with rotation.
    Embed {
        graph: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a sample planar graph with its rotation.
    Gen {
        #[arg(value_enum)]
        family: Family,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        rows: usize,
        #[arg(long, default_value_t = 3)]
        cols: usize,
        /// Fraction of non-tree links kept by `planar`.
        #[arg(long, default_value_t = 0.5)]
        keep: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw an instance or layout file as SVG.
    Render {
        input: PathBuf,
        /// Augmentation and witness to overlay.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Internal(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path, catalog: Option<CatalogSpec>) -> Result<RbcdnRpInstance, CliError> {
    read_json::<InstanceFile>(path)?.to_instance(catalog)
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn catalog_echo(inst: &RbcdnRpInstance) -> String {
    match inst.catalog_spec() {
        CatalogSpec::Sampled { samples, seed } => format!("--catalog sampled --samples {samples} --seed {seed}"),
        spec => format!("--catalog {}", spec.tag()),
    }
}

fn fmt_event(ev: &FailureEvent) -> String {
    format!("nodes {:?} links {:?}", ev.failed_nodes(), ev.failed_links())
}

fn cmd_rbcdn(path: &Path, catalog: &CatalogOpts, out: Option<&Path>) -> Result<u8, CliError> {
    let start = Instant::now();
    let inst = load_instance(path, catalog.spec()?)?;
    let base = inst.base_rbcdn();
    let cat = inst.catalog_for(inst.base_graph()).map_err(invalid)?;
    let witness = cat.event(base.witness);
    println!("rbcdn {}", base.value);
    println!("witness {}", fmt_event(witness));
    println!("events {}", cat.len());
    if let Some(out) = out {
        let report = ReportFile {
            schema_version: SCHEMA_VERSION,
            kind: Kind::Report,
            command: format!("rbcdn {}", catalog_echo(&inst)),
            status: "ok".into(),
            augmentation: vec![],
            cost: None,
            base_rbcdn: base.value,
            achieved_rbcdn: Some(base.value),
            witness: Some(witness.into()),
            nodes_explored: None,
            timing_ms: elapsed_ms(start),
        };
        emit(&to_json(&report), Some(out))?;
    }
    Ok(0)
}

fn cmd_augment(path: &Path, method: Method, catalog: &CatalogOpts, out: Option<&Path>) -> Result<u8, CliError> {
    let start = Instant::now();
    let inst = load_instance(path, catalog.spec()?)?;
    let (name, solved) = match method {
        Method::Exact => ("exact", solve_exact(&inst)),
        Method::Greedy => ("greedy", solve_greedy(&inst)),
    };
    let SolveReport {
        status,
        best,
        nodes_explored,
    } = solved.map_err(|e| CliError::Internal(e.to_string()))?;
    let report = ReportFile {
        schema_version: SCHEMA_VERSION,
        kind: Kind::Report,
        command: format!("augment --method {name} {}", catalog_echo(&inst)),
        status: status.as_str().into(),
        augmentation: best.as_ref().map_or(vec![], |a| a.links.clone()),
        cost: best.as_ref().map(|a| a.total_cost.into()),
        base_rbcdn: inst.base_rbcdn().value,
        achieved_rbcdn: best.as_ref().map(|a| a.achieved_rbcdn),
        witness: best.as_ref().map(|a| EventRecord::from(&a.witness)),
        nodes_explored: Some(nodes_explored),
        timing_ms: elapsed_ms(start),
    };
    emit(&to_json(&report), out)?;
    if let Some(out) = out {
        println!("{} {}", report.status, out.display());
    }
    Ok(if best.is_some() { 0 } else { 1 })
}

fn cmd_reduce(path: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let (g, rot) = read_json::<GraphFile>(path)?.embedded()?;
    let inst = build_rbcdn_instance(&g, &rot).map_err(invalid)?;
    emit(&to_json(&InstanceFile::from_instance(&inst)), out)?;
    Ok(0)
}

fn cmd_extract(instance: &Path, report: &Path, graph: &Path) -> Result<u8, CliError> {
    let inst = load_instance(instance, None)?;
    let report: ReportFile = read_json(report)?;
    report.check()?;
    let g = read_json::<GraphFile>(graph)?.graph()?;
    if g.node_count() != inst.node_count() {
        return Err(invalid(format!(
            "graph has {} nodes, instance has {}",
            g.node_count(),
            inst.node_count()
        )));
    }
    match extract_hamiltonian_cycle(&inst, &report.augmentation, &g) {
        Ok(cycle) => {
            println!("cycle {}", join(&cycle));
            Ok(0)
        }
        Err(e) => {
            println!("not found: {e}");
            Ok(1)
        }
    }
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_ham(path: &Path) -> Result<u8, CliError> {
    let g = read_json::<GraphFile>(path)?.graph()?;
    match hamiltonian_cycle(&g) {
        Some(cycle) => {
            println!("cycle {}", join(&cycle));
            Ok(0)
        }
        None => {
            println!("not found");
            Ok(1)
        }
    }
}

fn cmd_embed(path: &Path, out: Option<&Path>) -> Result<u8, CliError> {
    let (g, rot) = read_json::<GraphFile>(path)?.embedded()?;
    let grid = if is_connected(&g) {
        fpp_embed(&g, &rot)
    } else {
        embed_components(&g, &rot)
    }
    .map_err(invalid)?;
    emit(&to_json(&LayoutFile::from_grid(&grid)), out)?;
    Ok(0)
}

fn generated(
    family: Family,
    n: usize,
    rows: usize,
    cols: usize,
    keep: f64,
    seed: u64,
) -> Result<EmbeddedGraph, CliError> {
    let need = |min: usize| {
        if n >= min {
            Ok(())
        } else {
            Err(invalid(format!("--n must be at least {min} for this family")))
        }
    };
    Ok(match family {
        Family::Cycle => {
            need(3)?;
            generate::cycle(n)
        }
        Family::Wheel => {
            need(4)?;
            generate::wheel(n)
        }
        Family::Grid => {
            if rows == 0 || cols == 0 {
                return Err(invalid("--rows and --cols must be positive"));
            }
            generate::grid(rows, cols)
        }
        Family::Star => {
            need(2)?;
            generate::star(n)
        }
        Family::K2 => {
            need(3)?;
            generate::two_hub_bipartite(n - 2)
        }
        Family::Tree => {
            need(1)?;
            generate::random_tree(n, seed)
        }
        Family::Maximal => {
            need(3)?;
            generate::random_maximal_planar(n, seed)
        }
        Family::Planar => {
            need(1)?;
            if !(0.0..=1.0).contains(&keep) {
                return Err(invalid("--keep must lie in [0, 1]"));
            }
            generate::random_planar(n, keep, seed)
        }
    })
}

fn cmd_render(input: &Path, report: Option<&Path>, out: Option<&Path>) -> Result<u8, CliError> {
    let (layout, radius) = match read_kind(input)? {
        Kind::Instance => {
            let inst = load_instance(input, Some(CatalogSpec::Unit))?;
            (inst.layout().clone(), Some(inst.region_radius()))
        }
        Kind::Layout => (read_json::<LayoutFile>(input)?.layout()?, None),
        other => return Err(invalid(format!("cannot render a {other:?} file").to_lowercase())),
    };
    let report = report.map(read_json::<ReportFile>).transpose()?;
    if let Some(r) = &report {
        r.check()?;
    }
    let witness = report
        .as_ref()
        .and_then(|r| r.witness.as_ref())
        .map(|w| FailureEvent::new(w.nodes.iter().copied(), w.links.iter().copied()));
    let n = layout.node_count();
    let aug = report.as_ref().map_or(&[][..], |r| &r.augmentation[..]);
    if let Some(&(u, v)) = aug.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
        return Err(invalid(format!(
            "augmentation link {u}-{v} is not a node pair of the layout"
        )));
    }
    let overlay = svg::Overlay {
        augmentation: aug,
        witness: witness.as_ref(),
        radius,
    };
    emit(&svg::render_svg(&layout, &overlay), out)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if cli.threads == 0 {
        return Err(invalid("--threads must be at least 1"));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    match cli.command {
        Command::Rbcdn { instance, catalog, out } => cmd_rbcdn(&instance, &catalog, out.as_deref()),
        Command::Augment {
            instance,
            method,
            catalog,
            out,
        } => cmd_augment(&instance, method, &catalog, out.as_deref()),
        Command::Reduce { graph, out } => cmd_reduce(&graph, out.as_deref()),
        Command::Extract {
            instance,
            report,
            graph,
        } => cmd_extract(&instance, &report, &graph),
        Command::Ham { graph } => cmd_ham(&graph),
        Command::Embed { graph, out } => cmd_embed(&graph, out.as_deref()),
        Command::Gen {
            family,
            n,
            rows,
            cols,
            keep,
            seed,
            out,
        } => {
            let es = generated(family, n, rows, cols, keep, seed)?;
            emit(&to_json(&GraphFile::new(&es.graph, Some(&es.rotation))), out.as_deref())?;
            Ok(0)
        }
        Command::Render { input, report, out } => cmd_render(&input, report.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
