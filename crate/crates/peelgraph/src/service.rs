//! HTTP/JSON exploration API over loaded artifacts.
//!
//! Decompositions and measures come straight from the artifact files.
//! Per-layer independent layouts, the global layout (when the artifact was
//! written without one), and contour sets are computed on first request,
//! single-flight, and kept for the lifetime of the server; layouts are also
//! written beside the artifact so later servers reuse them.

use std::collections::{BTreeMap, HashMap};
use std::net::SocketAddr;
use std::path::Path;
use std::sync::{Arc, Mutex};

use axum::extract::{Path as UrlPath, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use peelgraph_core::contour::default_bandwidth;
use peelgraph_core::pathnet::{expand_net_in, shortest_path_in};
use peelgraph_core::{
    contour_polylines, kde_grid, overview_coordinates, Error as CoreError, LayerMeasures, LayoutParams, LayoutResult,
    LayoutScope, OverviewCoordinates, PathNet, Polyline, VertexId,
};
use serde::{Deserialize, Serialize};
use tokio::sync::OnceCell;
use tower_http::cors::CorsLayer;

use crate::artifact::{self, IdRepr, LoadedArtifact};
use crate::error::Result;

pub const DEFAULT_PORT: u16 = 8765;
const DEFAULT_LEVELS: usize = 8;
const DEFAULT_RESOLUTION: usize = 256;
const MAX_RESOLUTION: usize = 1024;

type Positions = Arc<Vec<[f32; 2]>>;
type Shared<T> = Arc<OnceCell<T>>;

pub struct GraphArtifact {
    pub id: String,
    pub data: LoadedArtifact,
    layout_params: LayoutParams,
    global: OnceCell<Positions>,
    layer_layouts: Mutex<HashMap<u32, Shared<Positions>>>,
    contours: Mutex<HashMap<ContourKey, Shared<Arc<ContourPayload>>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct ContourKey {
    layer: u32,
    independent: bool,
    bandwidth_bits: Option<u64>,
    levels: usize,
    resolution: usize,
}

impl GraphArtifact {
    pub fn new(data: LoadedArtifact) -> Self {
        GraphArtifact {
            id: data.id(),
            data,
            layout_params: LayoutParams::default(),
            global: OnceCell::new(),
            layer_layouts: Mutex::new(HashMap::new()),
            contours: Mutex::new(HashMap::new()),
        }
    }

    fn workers() -> usize {
        std::thread::available_parallelism().map_or(1, |n| n.get())
    }

    async fn global_positions(self: &Arc<Self>) -> std::result::Result<Positions, ApiError> {
        let this = self.clone();
        self.global
            .get_or_try_init(|| async move {
                tokio::task::spawn_blocking(move || {
                    let path = this.data.dir.join(artifact::GLOBAL_POSITIONS);
                    if let Ok(p) = artifact::read_positions(&path) {
                        if p.len() == this.data.graph.n() {
                            return Ok(Arc::new(p));
                        }
                    }
                    if this.data.graph.n() == 0 {
                        return Ok(Arc::new(Vec::new()));
                    }
                    let layout = peelgraph_core::layout_with_workers(&this.data.graph, &this.layout_params, Self::workers())?;
                    // cache write failures only cost a recomputation later
                    let _ = artifact::write_positions(&path, &layout);
                    Ok(Arc::new(rounded(&layout)))
                })
                .await
                .map_err(ApiError::internal)?
            })
            .await
            .cloned()
    }

    async fn layer_positions(self: &Arc<Self>, k: u32) -> std::result::Result<Positions, ApiError> {
        let cell = self.layer_layouts.lock().unwrap().entry(k).or_default().clone();
        let this = self.clone();
        cell.get_or_try_init(|| async move {
            tokio::task::spawn_blocking(move || {
                let layer = this.data.decomposition.layer(k)?;
                let path = this.data.dir.join(artifact::layer_positions_file(k));
                if let Ok(p) = artifact::read_positions(&path) {
                    if p.len() == layer.vertices.len() {
                        return Ok(Arc::new(p));
                    }
                }
                let layout = peelgraph_core::layout_layer_with_workers(layer, &this.layout_params, Self::workers())?;
                let _ = artifact::write_positions(&path, &layout);
                Ok(Arc::new(rounded(&layout)))
            })
            .await
            .map_err(ApiError::internal)?
        })
        .await
        .cloned()
    }

    /// Positions of the layer's vertices (ascending dense id).
    async fn positions_for(self: &Arc<Self>, k: u32, independent: bool) -> std::result::Result<Vec<[f32; 2]>, ApiError> {
        let layer = self.data.decomposition.layer(k)?;
        if independent {
            Ok(self.layer_positions(k).await?.as_ref().clone())
        } else {
            let global = self.global_positions().await?;
            Ok(layer.vertices.iter().map(|&v| global[v as usize]).collect())
        }
    }

    fn measures(&self, k: u32) -> std::result::Result<&LayerMeasures, ApiError> {
        self.data
            .manifest
            .measures
            .iter()
            .find(|r| r.value == k)
            .ok_or_else(|| ApiError::from(CoreError::UnknownLayer(k)))
    }
}

fn rounded(layout: &LayoutResult) -> Vec<[f32; 2]> {
    layout.positions.iter().map(|p| [p[0] as f32, p[1] as f32]).collect()
}

pub struct Service {
    artifacts: BTreeMap<String, Arc<GraphArtifact>>,
}

impl Service {
    pub fn new(artifacts: impl IntoIterator<Item = LoadedArtifact>) -> Self {
        let artifacts = artifacts
            .into_iter()
            .map(|a| {
                let g = GraphArtifact::new(a);
                (g.id.clone(), Arc::new(g))
            })
            .collect();
        Service { artifacts }
    }

    pub fn load(dirs: &[impl AsRef<Path>]) -> Result<Self> {
        let loaded = dirs.iter().map(|d| LoadedArtifact::load(d.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(loaded))
    }

    fn get(&self, id: &str) -> std::result::Result<&Arc<GraphArtifact>, ApiError> {
        self.artifacts.get(id).ok_or_else(|| ApiError::not_found(format!("unknown graph {id}")))
    }
}

pub fn router(service: Arc<Service>) -> Router {
    Router::new()
        .route("/graphs", get(list_graphs))
        .route("/graphs/{id}/ribbon", get(ribbon))
        .route("/graphs/{id}/overview", get(overview))
        .route("/graphs/{id}/layers/{k}", get(layer))
        .route("/graphs/{id}/layers/{k}/pathnet", axum::routing::post(pathnet))
        .route("/graphs/{id}/layers/{k}/contour", get(contour).post(contour_for_positions))
        .route("/graphs/{id}/vertices/{v}/clones", get(clones))
        .layer(CorsLayer::permissive())
        .with_state(service)
}

pub async fn serve(service: Service, addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(service))).await
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
    anchor: Option<VertexId>,
}

impl ApiError {
    fn not_found(message: impl Into<String>) -> Self {
        ApiError { status: StatusCode::NOT_FOUND, message: message.into(), anchor: None }
    }

    fn internal(e: impl std::fmt::Display) -> Self {
        ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, message: e.to_string(), anchor: None }
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let status = match &e {
            CoreError::VertexOutOfRange { .. } | CoreError::UnknownLayer(_) | CoreError::NotInLayer { .. } => {
                StatusCode::NOT_FOUND
            }
            CoreError::NoPath { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            CoreError::InvalidArgument(_) => StatusCode::BAD_REQUEST,
        };
        let anchor = match e {
            CoreError::NoPath { from, .. } => Some(from),
            _ => None,
        };
        ApiError { status, message: e.to_string(), anchor }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    anchor: Option<VertexId>,
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: &self.message, anchor: self.anchor })).into_response()
    }
}

type ApiResult<T> = std::result::Result<Json<T>, ApiError>;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct GraphEntry {
    pub id: String,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "L")]
    pub layer_count: usize,
    pub k_max: u32,
}

async fn list_graphs(State(s): State<Arc<Service>>) -> Json<Vec<GraphEntry>> {
    Json(
        s.artifacts
            .values()
            .map(|a| {
                let m = &a.data.manifest;
                GraphEntry { id: a.id.clone(), n: m.n, m: m.m, layer_count: m.layer_count, k_max: m.k_max }
            })
            .collect(),
    )
}

async fn ribbon(State(s): State<Arc<Service>>, UrlPath(id): UrlPath<String>) -> ApiResult<peelgraph_core::RibbonSummary> {
    Ok(Json(s.get(&id)?.data.manifest.summary()))
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum LayoutMode {
    #[default]
    Global,
    Independent,
}

#[derive(Deserialize)]
struct LayerQuery {
    #[serde(default)]
    layout: LayoutMode,
}

#[derive(Serialize)]
struct NodePayload<'a> {
    id: VertexId,
    original_id: IdRepr,
    label: Option<&'a str>,
    x: f32,
    y: f32,
    multiplicity: usize,
    clone_layers: &'a [u32],
    component: u32,
}

#[derive(Serialize)]
struct LayerPayload<'a> {
    value: u32,
    layout: &'static str,
    nodes: Vec<NodePayload<'a>>,
    edges: &'a [(VertexId, VertexId)],
    measures: &'a LayerMeasures,
}

async fn layer(
    State(s): State<Arc<Service>>,
    UrlPath((id, k)): UrlPath<(String, u32)>,
    Query(q): Query<LayerQuery>,
) -> std::result::Result<Response, ApiError> {
    let a = s.get(&id)?;
    let independent = q.layout == LayoutMode::Independent;
    let positions = a.positions_for(k, independent).await?;
    let data = &a.data;
    let layer = data.decomposition.layer(k)?;
    let components = peelgraph_core::connected_components(&data.graph, Some(&layer.edges));
    let nodes = layer
        .vertices
        .iter()
        .zip(&positions)
        .map(|(&v, p)| NodePayload {
            id: v,
            original_id: IdRepr::from(&data.graph.external_ids()[v as usize]),
            label: data.graph.label(v),
            x: p[0],
            y: p[1],
            multiplicity: data.decomposition.multiplicity(v),
            clone_layers: &data.decomposition.clone_map[v as usize],
            component: components.labels[v as usize].expect("layer vertex has a layer edge"),
        })
        .collect();
    let payload = LayerPayload {
        value: k,
        layout: if independent { "independent" } else { "global" },
        nodes,
        edges: &layer.edges,
        measures: a.measures(k)?,
    };
    Ok(Json(payload).into_response())
}

#[derive(Deserialize)]
struct OverviewQuery {
    height: Option<f64>,
    spread: Option<f64>,
}

async fn overview(
    State(s): State<Arc<Service>>,
    UrlPath(id): UrlPath<String>,
    Query(q): Query<OverviewQuery>,
) -> ApiResult<OverviewCoordinates> {
    let a = s.get(&id)?;
    let global = a.global_positions().await?;
    let layout = LayoutResult {
        scope: LayoutScope::Global,
        vertices: (0..global.len() as VertexId).collect(),
        positions: global.iter().map(|p| [p[0] as f64, p[1] as f64]).collect(),
        params: a.layout_params,
    };
    Ok(Json(overview_coordinates(&a.data.decomposition, &layout, q.height.unwrap_or(1.0), q.spread.unwrap_or(1.0))?))
}

#[derive(Debug, Deserialize, Serialize)]
pub struct PathNetRequest {
    pub anchors: Vec<VertexId>,
    #[serde(default)]
    pub hop_cap: Option<u32>,
}

#[derive(Serialize)]
struct PathNetPayload {
    layer: u32,
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
    anchors: Vec<VertexId>,
    labels: Vec<Option<String>>,
}

async fn pathnet(
    State(s): State<Arc<Service>>,
    UrlPath((id, k)): UrlPath<(String, u32)>,
    Json(req): Json<PathNetRequest>,
) -> ApiResult<PathNetPayload> {
    let a = s.get(&id)?;
    let layer = a.data.decomposition.layer(k)?;
    let [first, second, rest @ ..] = req.anchors.as_slice() else {
        return Err(CoreError::InvalidArgument("a path-net needs at least two anchors".into()).into());
    };
    for &v in &req.anchors {
        if !layer.contains(v) {
            return Err(CoreError::NotInLayer { vertex: v, layer: k }.into());
        }
    }
    let sub = layer.subgraph();
    let path = shortest_path_in(&sub, k, *first, *second).map_err(|e| {
        let mut e = ApiError::from(e);
        e.anchor = e.anchor.map(|_| *second);
        e
    })?;
    let mut net = PathNet { layer: k, vertices: Vec::new(), edges: Vec::new(), anchors: vec![*first, *second] };
    for &v in &path {
        if !net.contains(v) {
            net.vertices.push(v);
        }
    }
    net.edges.extend(path.windows(2).map(|w| (w[0], w[1])));
    for &w in rest {
        net = expand_net_in(&net, &sub, w, req.hop_cap)?;
    }
    let labels = net.vertices.iter().map(|&v| a.data.graph.label(v).map(str::to_owned)).collect();
    Ok(Json(PathNetPayload { layer: net.layer, vertices: net.vertices, edges: net.edges, anchors: net.anchors, labels }))
}

#[derive(Deserialize)]
struct ContourQuery {
    bandwidth: Option<f64>,
    levels: Option<usize>,
    resolution: Option<usize>,
    #[serde(default = "independent")]
    layout: LayoutMode,
}

fn independent() -> LayoutMode {
    LayoutMode::Independent
}

#[derive(Debug, Serialize)]
pub struct ContourPayload {
    layer: u32,
    bandwidth: f64,
    resolution: usize,
    bounds: [f64; 4],
    levels: Vec<f64>,
    polylines: Vec<Vec<Polyline>>,
}

fn compute_contours(
    layer: u32,
    points: &[[f64; 2]],
    bandwidth: Option<f64>,
    levels: usize,
    resolution: usize,
) -> std::result::Result<ContourPayload, CoreError> {
    if resolution > MAX_RESOLUTION {
        return Err(CoreError::InvalidArgument(format!("resolution above {MAX_RESOLUTION}")));
    }
    let h = bandwidth.unwrap_or_else(|| default_bandwidth(points));
    let field = kde_grid(points, h, resolution)?;
    let set = contour_polylines(&field, levels)?;
    Ok(ContourPayload { layer, bandwidth: h, resolution, bounds: field.bounds, levels: set.levels, polylines: set.polylines })
}

async fn contour(
    State(s): State<Arc<Service>>,
    UrlPath((id, k)): UrlPath<(String, u32)>,
    Query(q): Query<ContourQuery>,
) -> std::result::Result<Json<Arc<ContourPayload>>, ApiError> {
    let a = s.get(&id)?.clone();
    a.data.decomposition.layer(k)?;
    let key = ContourKey {
        layer: k,
        independent: q.layout == LayoutMode::Independent,
        bandwidth_bits: q.bandwidth.map(f64::to_bits),
        levels: q.levels.unwrap_or(DEFAULT_LEVELS),
        resolution: q.resolution.unwrap_or(DEFAULT_RESOLUTION),
    };
    let cell = a.contours.lock().unwrap().entry(key).or_default().clone();
    let payload = cell
        .get_or_try_init(|| async {
            let positions = a.positions_for(k, key.independent).await?;
            let points: Vec<[f64; 2]> = positions.iter().map(|p| [p[0] as f64, p[1] as f64]).collect();
            tokio::task::spawn_blocking(move || compute_contours(k, &points, q.bandwidth, key.levels, key.resolution))
                .await
                .map_err(ApiError::internal)?
                .map(Arc::new)
                .map_err(ApiError::from)
        })
        .await?;
    Ok(Json(payload.clone()))
}

/// Contours over client-supplied positions (e.g. after dragging vertices).
#[derive(Deserialize)]
struct ContourRequest {
    positions: Vec<[f64; 2]>,
    bandwidth: Option<f64>,
    levels: Option<usize>,
    resolution: Option<usize>,
}

async fn contour_for_positions(
    State(s): State<Arc<Service>>,
    UrlPath((id, k)): UrlPath<(String, u32)>,
    Json(req): Json<ContourRequest>,
) -> ApiResult<ContourPayload> {
    s.get(&id)?.data.decomposition.layer(k)?;
    let levels = req.levels.unwrap_or(DEFAULT_LEVELS);
    let resolution = req.resolution.unwrap_or(DEFAULT_RESOLUTION / 2);
    let payload = tokio::task::spawn_blocking(move || compute_contours(k, &req.positions, req.bandwidth, levels, resolution))
        .await
        .map_err(ApiError::internal)??;
    Ok(Json(payload))
}

#[derive(Serialize)]
struct ClonesPayload<'a> {
    vertex: VertexId,
    original_id: IdRepr,
    label: Option<&'a str>,
    layers: &'a [u32],
}

async fn clones(
    State(s): State<Arc<Service>>,
    UrlPath((id, v)): UrlPath<(String, VertexId)>,
) -> std::result::Result<Response, ApiError> {
    let a = s.get(&id)?;
    let layers = peelgraph_core::clones_of(&a.data.decomposition, v)?;
    let payload = ClonesPayload {
        vertex: v,
        original_id: IdRepr::from(&a.data.graph.external_ids()[v as usize]),
        label: a.data.graph.label(v),
        layers,
    };
    Ok(Json(payload).into_response())
}
