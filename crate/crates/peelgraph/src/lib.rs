//! Files, service and command line around [`peelgraph_core`].
//!
//! - [`ingest`]: edge lists and label files into a [`Graph`]
//! - [`artifact`]: the on-disk decomposition directory
//! - [`service`]: the HTTP/JSON exploration API

pub mod artifact;
mod error;
pub mod ingest;
pub mod service;

use std::path::Path;
use std::time::{Duration, Instant};

use peelgraph_core::{Decomposition, Graph, LayoutParams, RibbonSummary};

pub use error::{Error, Result};

/// Output of [`run_pipeline`].
pub struct PipelineRun {
    pub graph: Graph,
    pub decomposition: Decomposition,
    pub summary: RibbonSummary,
    /// Decomposition only; excludes ingestion, measures and writing.
    pub elapsed: Duration,
}

/// Decomposes and measures an already ingested graph.
pub fn analyze(graph: Graph, workers: usize) -> PipelineRun {
    let start = Instant::now();
    let decomposition = peelgraph_core::decompose_with_workers(&graph, workers);
    let elapsed = start.elapsed();
    let summary = peelgraph_core::ribbon_summary(&decomposition, &graph);
    PipelineRun { graph, decomposition, summary, elapsed }
}

/// Ingest, decompose, write the artifact and optionally the global layout.
pub fn run_pipeline(
    edges: &Path,
    out: &Path,
    opts: &ingest::IngestOptions,
    workers: usize,
    layout: Option<&LayoutParams>,
) -> Result<PipelineRun> {
    let graph = ingest::ingest_edge_list(edges, opts)?;
    let run = analyze(graph, workers);
    artifact::write_artifact(out, &run.graph, &run.decomposition, &run.summary)?;
    if let Some(params) = layout {
        if run.graph.n() > 0 {
            let result = peelgraph_core::layout_with_workers(&run.graph, params, workers)?;
            artifact::write_positions(&out.join(artifact::GLOBAL_POSITIONS), &result)?;
        }
    }
    Ok(run)
}
