//! Edge-list ingestion and canonical export.
//!
//! Input is one edge per line, `u v` separated by whitespace; further
//! columns (weights, timestamps) are ignored. Lines starting with the
//! comment prefix and blank lines are skipped. The file is memory-mapped
//! and scanned in place.

use std::collections::HashMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use memmap2::Mmap;
use peelgraph_core::{ExternalId, Graph, GraphBuilder, VertexId};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct IngestOptions {
    /// Read each line as an arc and keep the union of both directions.
    /// Peeling is degree-based, so the graph is undirected either way.
    pub symmetrize: bool,
    pub comment_prefix: char,
    /// Optional `original_id<TAB>label` file.
    pub label_path: Option<PathBuf>,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions { symmetrize: true, comment_prefix: '#', label_path: None }
    }
}

impl IngestOptions {
    /// Self-loops are always dropped.
    pub fn drop_self_loops(&self) -> bool {
        true
    }
}

pub fn ingest_edge_list(path: &Path, opts: &IngestOptions) -> Result<Graph> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let len = file.metadata().map_err(|e| Error::io(path, e))?.len();
    let graph = if len == 0 {
        parse_edge_list(b"", path, opts)?
    } else {
        // SAFETY: the map is read-only and dropped before returning; a
        // concurrent writer truncating the file is outside our contract.
        let map = unsafe { Mmap::map(&file) }.map_err(|e| Error::io(path, e))?;
        parse_edge_list(&map, path, opts)?
    };
    match &opts.label_path {
        Some(labels) => attach_labels(graph, labels),
        None => Ok(graph),
    }
}

/// Parses edge-list bytes; `origin` is only used in error messages.
pub fn parse_edge_list(bytes: &[u8], origin: &Path, opts: &IngestOptions) -> Result<Graph> {
    let mut ids = IdTable::default();
    let mut builder = GraphBuilder::new();
    let mut prefix = [0u8; 4];
    let prefix = opts.comment_prefix.encode_utf8(&mut prefix).as_bytes();

    for (i, line) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = line.trim_ascii();
        if line.is_empty() || line.starts_with(prefix) {
            continue;
        }
        let mut tokens = line.split(|b| b.is_ascii_whitespace()).filter(|t| !t.is_empty());
        let (Some(a), Some(b)) = (tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                path: origin.to_path_buf(),
                line: i + 1,
                message: "expected two vertex ids".into(),
            });
        };
        if same_id(a, b) {
            continue;
        }
        let u = ids.dense(a, &mut builder).map_err(|message| Error::Parse { path: origin.to_path_buf(), line: i + 1, message })?;
        let v = ids.dense(b, &mut builder).map_err(|message| Error::Parse { path: origin.to_path_buf(), line: i + 1, message })?;
        builder.push_edge(u, v);
    }
    Ok(builder.build()?)
}

#[derive(Default)]
struct IdTable {
    numeric: HashMap<u64, VertexId>,
    tokens: HashMap<String, VertexId>,
}

impl IdTable {
    fn dense(&mut self, token: &[u8], builder: &mut GraphBuilder) -> std::result::Result<VertexId, String> {
        if let Some(n) = parse_u64(token) {
            return Ok(*self.numeric.entry(n).or_insert_with(|| builder.push_vertex(ExternalId::Num(n))));
        }
        let s = std::str::from_utf8(token).map_err(|_| "vertex id is not valid UTF-8".to_string())?;
        if let Some(&v) = self.tokens.get(s) {
            return Ok(v);
        }
        let v = builder.push_vertex(ExternalId::Token(s.to_owned()));
        self.tokens.insert(s.to_owned(), v);
        Ok(v)
    }

    fn lookup(&self, id: &ExternalId) -> Option<VertexId> {
        match id {
            ExternalId::Num(n) => self.numeric.get(n).copied(),
            ExternalId::Token(t) => self.tokens.get(t).copied(),
        }
    }
}

// Self-loop lines are dropped before either endpoint gets a dense id.
fn same_id(a: &[u8], b: &[u8]) -> bool {
    match (parse_u64(a), parse_u64(b)) {
        (Some(x), Some(y)) => x == y,
        (None, None) => a == b,
        _ => false,
    }
}

fn parse_u64(token: &[u8]) -> Option<u64> {
    if token.is_empty() || !token.iter().all(u8::is_ascii_digit) {
        return None;
    }
    token.iter().try_fold(0u64, |acc, &d| acc.checked_mul(10)?.checked_add((d - b'0') as u64))
}

/// Reads `original_id<TAB>label` lines. Ids not present in the graph are
/// ignored; later lines win.
pub fn attach_labels(graph: Graph, path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut ids = IdTable::default();
    for (v, id) in graph.external_ids().iter().enumerate() {
        match id {
            ExternalId::Num(n) => ids.numeric.insert(*n, v as VertexId),
            ExternalId::Token(t) => ids.tokens.insert(t.clone(), v as VertexId),
        };
    }
    let mut labels = vec![None; graph.n()];
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let Some((id, label)) = line.split_once('\t') else {
            return Err(Error::Parse { path: path.to_path_buf(), line: i + 1, message: "expected original_id<TAB>label".into() });
        };
        if let Some(v) = ids.lookup(&ExternalId::parse(id.trim())) {
            labels[v as usize] = Some(label.to_owned());
        }
    }
    Ok(graph.with_labels(labels)?)
}

/// Writes `u v` per edge, `u < v` in dense ids, lexicographic order.
pub fn write_canonical_edge_list(g: &Graph, out: &mut impl Write) -> io::Result<()> {
    let mut out = io::BufWriter::new(out);
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()
}
