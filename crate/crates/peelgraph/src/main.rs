use std::io::{self, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use peelgraph::artifact::{self, LoadedArtifact};
use peelgraph::ingest::{self, IngestOptions};
use peelgraph::service::{self, Service};
use peelgraph::{Error, Result};
use peelgraph_core::LayoutParams;

#[derive(Parser)]
#[command(name = "peelgraph", version, about = "Layered peel decomposition of large graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest an edge list, decompose it and write an artifact directory.
    Decompose {
        edges: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `original_id<TAB>label` file.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = '#')]
        comment: char,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        /// Also compute and store the global layout.
        #[arg(long, overrides_with = "no_layout")]
        layout: bool,
        /// Skip the global layout (the default); the service computes it on demand.
        #[arg(long, overrides_with = "layout")]
        no_layout: bool,
        #[command(flatten)]
        params: LayoutArgs,
    },
    /// Print the layer table of an artifact.
    Stats { dir: PathBuf },
    /// Compute and store a layout for an artifact.
    Layout {
        dir: PathBuf,
        #[arg(long, conflicts_with = "global", required_unless_present = "global")]
        layer: Option<u32>,
        #[arg(long)]
        global: bool,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        #[command(flatten)]
        params: LayoutArgs,
    },
    /// Write the measure table or the canonical edge list to stdout or a file.
    Export {
        dir: PathBuf,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Serve artifacts over HTTP.
    Serve {
        #[arg(required = true)]
        dirs: Vec<PathBuf>,
        #[arg(long, env = "PEELGRAPH_PORT", default_value_t = service::DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
    },
    /// Time ingestion-free decomposition over several runs.
    Bench {
        edges: PathBuf,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        #[arg(long, default_value_t = '#')]
        comment: char,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Csv,
    Edgelist,
}

#[derive(Args)]
struct LayoutArgs {
    #[arg(long, default_value_t = LayoutParams::default().iterations)]
    iterations: u32,
    #[arg(long, default_value_t = LayoutParams::default().theta)]
    theta: f64,
    #[arg(long, default_value_t = LayoutParams::default().seed)]
    seed: u64,
}

impl LayoutArgs {
    fn params(&self) -> LayoutParams {
        LayoutParams { iterations: self.iterations, theta: self.theta, seed: self.seed, ..LayoutParams::default() }
    }
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Decompose { edges, out, labels, comment, threads, layout, no_layout: _, params } => {
            let opts = IngestOptions { comment_prefix: comment, label_path: labels, ..Default::default() };
            let params = params.params();
            let run = peelgraph::run_pipeline(&edges, &out, &opts, threads.max(1), layout.then_some(&params))?;
            let s = &run.summary;
            println!(
                "n={} m={} L={} k_max={} seconds={:.3}",
                s.n,
                s.m,
                s.layer_count,
                s.k_max,
                run.elapsed.as_secs_f64()
            );
            Ok(())
        }
        Command::Stats { dir } => {
            let m = artifact::read_manifest(&dir)?;
            println!("n={} m={} L={} k_max={}", m.n, m.m, m.layer_count, m.k_max);
            println!("{:>8} {:>10} {:>12} {:>8} {:>6} {:>10} {:>8}", "value", "vertices", "edges", "clones", "comps", "clustering", "deficit");
            for r in &m.measures {
                let deficit = r.clique_deficit.map_or("-".to_string(), |d| d.to_string());
                println!(
                    "{:>8} {:>10} {:>12} {:>8} {:>6} {:>10.4} {:>8}",
                    r.value, r.vertex_count, r.edge_count, r.clone_count, r.component_count, r.clustering, deficit
                );
            }
            Ok(())
        }
        Command::Layout { dir, layer, global: _, threads, params } => {
            let a = LoadedArtifact::load(&dir)?;
            let params = params.params();
            let start = Instant::now();
            let (result, file) = match layer {
                Some(k) => {
                    let layer = a.decomposition.layer(k)?;
                    (peelgraph_core::layout_layer_with_workers(layer, &params, threads.max(1))?, artifact::layer_positions_file(k))
                }
                None => (
                    peelgraph_core::layout_with_workers(&a.graph, &params, threads.max(1))?,
                    artifact::GLOBAL_POSITIONS.to_string(),
                ),
            };
            let elapsed = start.elapsed();
            artifact::write_positions(&dir.join(&file), &result)?;
            println!("vertices={} file={file} seconds={:.3}", result.vertices.len(), elapsed.as_secs_f64());
            Ok(())
        }
        Command::Export { dir, format, out } => {
            let mut buf = Vec::new();
            match format {
                ExportFormat::Csv => {
                    let m = artifact::read_manifest(&dir)?;
                    artifact::write_measures_csv(&m.measures, &mut buf).map_err(|e| io_err(&dir, e))?;
                }
                ExportFormat::Edgelist => {
                    let a = LoadedArtifact::load(&dir)?;
                    ingest::write_canonical_edge_list(&a.graph, &mut buf).map_err(|e| io_err(&dir, e))?;
                }
            }
            match out {
                Some(path) => std::fs::write(&path, &buf).map_err(|e| io_err(&path, e)),
                None => io::stdout().write_all(&buf).map_err(|e| io_err(Path::new("<stdout>"), e)),
            }
        }
        Command::Serve { dirs, port, host } => {
            let service = Service::load(&dirs)?;
            let addr = SocketAddr::new(host, port);
            let rt = tokio::runtime::Runtime::new().map_err(|e| io_err(Path::new("<runtime>"), e))?;
            eprintln!("serving {} graph(s) on http://{addr}", dirs.len());
            rt.block_on(service::serve(service, addr)).map_err(|e| io_err(Path::new(&addr.to_string()), e))
        }
        Command::Bench { edges, runs, threads, comment } => {
            let opts = IngestOptions { comment_prefix: comment, ..Default::default() };
            let mut graph = ingest::ingest_edge_list(&edges, &opts)?;
            let mut total = 0.0;
            for run in 1..=runs.max(1) {
                let r = peelgraph::analyze(graph, threads.max(1));
                let s = &r.summary;
                let secs = r.elapsed.as_secs_f64();
                total += secs;
                println!("run={run} n={} m={} L={} k_max={} seconds={secs:.3}", s.n, s.m, s.layer_count, s.k_max);
                graph = r.graph;
            }
            println!("mean_seconds={:.3}", total / runs.max(1) as f64);
            Ok(())
        }
    }
}

fn io_err(path: &Path, source: io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}
