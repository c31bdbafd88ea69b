//! On-disk decomposition artifacts.
//!
//! ```text
//! <dir>/manifest.json            n, m, L, k_max, layer values, measure table
//! <dir>/edge_layers.bin          u32 LE layer value per edge, canonical edge order
//! <dir>/clones.json              { "<dense id>": [values…] } for multiplicity >= 2
//! <dir>/measures.csv             layer,value,vertices,edges,clones,components,clustering,deficit
//! <dir>/graph.bin                u64 LE n, u64 LE m, then m × (u32 LE u, u32 LE v)
//! <dir>/vertices.json            external ids and optional labels, dense-id order
//! <dir>/positions.global.bin     u64 LE count, then count × (f32 LE x, f32 LE y)
//! <dir>/positions.layer_<k>.bin  same, one pair per layer vertex in ascending dense id
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use peelgraph_core::{Decomposition, ExternalId, Graph, LayerMeasures, LayoutResult, RibbonSummary};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MANIFEST: &str = "manifest.json";
pub const EDGE_LAYERS: &str = "edge_layers.bin";
pub const CLONES: &str = "clones.json";
pub const MEASURES_CSV: &str = "measures.csv";
pub const GRAPH: &str = "graph.bin";
pub const VERTICES: &str = "vertices.json";
pub const GLOBAL_POSITIONS: &str = "positions.global.bin";

pub fn layer_positions_file(k: u32) -> String {
    format!("positions.layer_{k}.bin")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub layer_count: usize,
    pub k_max: u32,
    pub layer_values: Vec<u32>,
    pub measures: Vec<LayerMeasures>,
}

impl Manifest {
    pub fn from_summary(summary: &RibbonSummary) -> Self {
        Manifest {
            n: summary.n,
            m: summary.m,
            layer_count: summary.layer_count,
            k_max: summary.k_max,
            layer_values: summary.rows.iter().map(|r| r.value).collect(),
            measures: summary.rows.clone(),
        }
    }

    pub fn summary(&self) -> RibbonSummary {
        RibbonSummary {
            n: self.n,
            m: self.m,
            layer_count: self.layer_count,
            k_max: self.k_max,
            rows: self.measures.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VertexTable {
    external_ids: Vec<IdRepr>,
    labels: Option<Vec<Option<String>>>,
}

/// Numeric ids as JSON numbers, tokens as strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdRepr {
    Num(u64),
    Token(String),
}

impl From<&ExternalId> for IdRepr {
    fn from(id: &ExternalId) -> Self {
        match id {
            ExternalId::Num(n) => IdRepr::Num(*n),
            ExternalId::Token(t) => IdRepr::Token(t.clone()),
        }
    }
}

impl From<IdRepr> for ExternalId {
    fn from(id: IdRepr) -> Self {
        match id {
            IdRepr::Num(n) => ExternalId::Num(n),
            IdRepr::Token(t) => ExternalId::Token(t),
        }
    }
}

/// Writes every file except positions.
pub fn write_artifact(dir: &Path, g: &Graph, d: &Decomposition, summary: &RibbonSummary) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    write_json(&dir.join(MANIFEST), &Manifest::from_summary(summary))?;

    let mut bytes = Vec::with_capacity(4 * d.edge_layer.len());
    for &k in &d.edge_layer {
        bytes.extend_from_slice(&k.to_le_bytes());
    }
    write_bytes(&dir.join(EDGE_LAYERS), &bytes)?;

    let clones: BTreeMap<u32, &Vec<u32>> = d
        .clone_map
        .iter()
        .enumerate()
        .filter(|(_, ks)| ks.len() >= 2)
        .map(|(v, ks)| (v as u32, ks))
        .collect();
    write_json(&dir.join(CLONES), &clones)?;

    let mut csv = Vec::new();
    write_measures_csv(&summary.rows, &mut csv).map_err(|e| Error::io(dir.join(MEASURES_CSV), e))?;
    write_bytes(&dir.join(MEASURES_CSV), &csv)?;

    let mut bytes = Vec::with_capacity(16 + 8 * g.m());
    bytes.extend_from_slice(&(g.n() as u64).to_le_bytes());
    bytes.extend_from_slice(&(g.m() as u64).to_le_bytes());
    for (u, v) in g.edges() {
        bytes.extend_from_slice(&u.to_le_bytes());
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    write_bytes(&dir.join(GRAPH), &bytes)?;

    let table = VertexTable {
        external_ids: g.external_ids().iter().map(IdRepr::from).collect(),
        labels: g.labels().map(<[_]>::to_vec),
    };
    write_json(&dir.join(VERTICES), &table)
}

/// `layer,value,vertices,edges,clones,components,clustering,deficit`;
/// floats use the same text form as the JSON manifest.
pub fn write_measures_csv(rows: &[LayerMeasures], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "layer,value,vertices,edges,clones,components,clustering,deficit")?;
    for (i, r) in rows.iter().enumerate() {
        let clustering = serde_json::to_string(&r.clustering).map_err(io::Error::other)?;
        let deficit = r.clique_deficit.map(|d| d.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{i},{},{},{},{},{},{clustering},{deficit}",
            r.value, r.vertex_count, r.edge_count, r.clone_count, r.component_count
        )?;
    }
    Ok(())
}

/// Positions rounded to `f32`, in the vertex order of `layout`.
pub fn write_positions(path: &Path, layout: &LayoutResult) -> Result<()> {
    let pairs: Vec<[f32; 2]> = layout.positions.iter().map(|p| [p[0] as f32, p[1] as f32]).collect();
    write_position_pairs(path, &pairs)
}

pub fn write_position_pairs(path: &Path, pairs: &[[f32; 2]]) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 + 8 * pairs.len());
    bytes.extend_from_slice(&(pairs.len() as u64).to_le_bytes());
    for p in pairs {
        bytes.extend_from_slice(&p[0].to_le_bytes());
        bytes.extend_from_slice(&p[1].to_le_bytes());
    }
    write_bytes(path, &bytes)
}

pub fn read_positions(path: &Path) -> Result<Vec<[f32; 2]>> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = || Error::artifact(path, "truncated position file");
    let count = u64::from_le_bytes(bytes.get(..8).ok_or_else(bad)?.try_into().unwrap()) as usize;
    let body = &bytes[8..];
    if body.len() != count * 8 {
        return Err(bad());
    }
    Ok(body
        .chunks_exact(8)
        .map(|c| [f32::from_le_bytes(c[..4].try_into().unwrap()), f32::from_le_bytes(c[4..].try_into().unwrap())])
        .collect())
}

/// Everything needed to serve one decomposition.
#[derive(Debug, Clone)]
pub struct LoadedArtifact {
    pub dir: PathBuf,
    pub manifest: Manifest,
    pub graph: Graph,
    pub decomposition: Decomposition,
}

impl LoadedArtifact {
    /// Loads and cross-checks the graph, edge layers and manifest.
    pub fn load(dir: &Path) -> Result<Self> {
        let manifest: Manifest = read_json(&dir.join(MANIFEST))?;
        let table: VertexTable = read_json(&dir.join(VERTICES))?;

        let path = dir.join(GRAPH);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        if bytes.len() < 16 {
            return Err(Error::artifact(&path, "truncated graph file"));
        }
        let n = u64::from_le_bytes(bytes[..8].try_into().unwrap()) as usize;
        let m = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
        if bytes.len() != 16 + 8 * m || n != table.external_ids.len() {
            return Err(Error::artifact(&path, "graph file does not match its header or vertex table"));
        }
        let edges = bytes[16..]
            .chunks_exact(8)
            .map(|c| (u32::from_le_bytes(c[..4].try_into().unwrap()), u32::from_le_bytes(c[4..].try_into().unwrap())));
        let mut graph = Graph::from_edges(table.external_ids.into_iter().map(ExternalId::from).collect(), edges)?;
        if let Some(labels) = table.labels {
            graph = graph.with_labels(labels)?;
        }

        let path = dir.join(EDGE_LAYERS);
        let bytes = fs::read(&path).map_err(|e| Error::io(&path, e))?;
        if bytes.len() % 4 != 0 {
            return Err(Error::artifact(&path, "length is not a multiple of 4"));
        }
        let edge_layer = bytes.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().unwrap())).collect();
        let decomposition = Decomposition::from_edge_layers(&graph, edge_layer)
            .map_err(|e| Error::artifact(&path, e.to_string()))?;

        let consistent = manifest.n == graph.n()
            && manifest.m == graph.m()
            && manifest.layer_count == decomposition.layer_count()
            && manifest.k_max == decomposition.k_max()
            && manifest.layer_values.iter().copied().eq(decomposition.values());
        if !consistent {
            return Err(Error::artifact(dir, "manifest disagrees with graph.bin / edge_layers.bin"));
        }
        Ok(LoadedArtifact { dir: dir.to_path_buf(), manifest, graph, decomposition })
    }

    pub fn id(&self) -> String {
        self.dir.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "graph".into())
    }
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    read_json(&dir.join(MANIFEST))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_vec_pretty(value).map_err(|e| Error::artifact(path, e.to_string()))?;
    text.push(b'\n');
    write_bytes(path, &text)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_slice(&text).map_err(|e| Error::artifact(path, e.to_string()))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}
