use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use peelgraph::artifact::{self, LoadedArtifact};
use peelgraph::ingest::{parse_edge_list, IngestOptions};
use peelgraph::service::{router, Service};
use peelgraph_core::Graph;
use serde_json::{json, Value};
use tower::ServiceExt;

const K4_PATH: &str = "1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n4 5\n5 6\n";
const K5: &str = "0 1\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n2 3\n2 4\n3 4\n";
const C6: &str = "0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n";
const TWO_TRIANGLES: &str = "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n";

fn write(root: &Path, name: &str, g: Graph) -> PathBuf {
    let dir = root.join(name);
    let run = peelgraph::analyze(g, 2);
    artifact::write_artifact(&dir, &run.graph, &run.decomposition, &run.summary).unwrap();
    dir
}

fn from_text(root: &Path, name: &str, text: &str) -> PathBuf {
    write(root, name, parse_edge_list(text.as_bytes(), Path::new(name), &IngestOptions::default()).unwrap())
}

fn app(dirs: &[PathBuf]) -> Router {
    router(Arc::new(Service::load(dirs).unwrap()))
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = req.body(body.map_or(Body::empty(), |b| Body::from(b.to_string()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn get_json(app: &Router, uri: &str) -> Value {
    let (status, body) = send(app, "GET", uri, None).await;
    assert_eq!(status, StatusCode::OK, "{uri}: {}", String::from_utf8_lossy(&body));
    serde_json::from_slice(&body).unwrap()
}

#[tokio::test]
async fn empty_server_lists_nothing() {
    let app = app(&[]);
    assert_eq!(get_json(&app, "/graphs").await, json!([]));
    let (status, _) = send(&app, "GET", "/graphs/nope/ribbon", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn k4_path_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = from_text(tmp.path(), "k4path", K4_PATH);
    let app = app(&[dir]);

    let graphs = get_json(&app, "/graphs").await;
    assert_eq!(graphs, json!([{"id": "k4path", "n": 6, "m": 8, "L": 2, "k_max": 3}]));

    let ribbon = get_json(&app, "/graphs/k4path/ribbon").await;
    let values: Vec<u64> = ribbon["rows"].as_array().unwrap().iter().map(|r| r["value"].as_u64().unwrap()).collect();
    assert_eq!(values, [3, 1]);

    let layer3 = get_json(&app, "/graphs/k4path/layers/3").await;
    assert_eq!(layer3["nodes"].as_array().unwrap().len(), 4);
    assert_eq!(layer3["edges"].as_array().unwrap().len(), 6);
    let node4 = layer3["nodes"].as_array().unwrap().iter().find(|n| n["original_id"] == 4).unwrap();
    assert_eq!(node4["clone_layers"], json!([3, 1]));
    assert_eq!(node4["multiplicity"], 2);
    assert_eq!(layer3["measures"]["clique_deficit"], 0);

    let layer1 = get_json(&app, "/graphs/k4path/layers/1").await;
    let originals: Vec<u64> = layer1["nodes"].as_array().unwrap().iter().map(|n| n["original_id"].as_u64().unwrap()).collect();
    assert_eq!(originals, [4, 5, 6]);
    assert_eq!(layer1["edges"].as_array().unwrap().len(), 2);

    let (status, _) = send(&app, "GET", "/graphs/k4path/layers/2", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    // dense id 3 is original vertex 4
    let clones = get_json(&app, "/graphs/k4path/vertices/3/clones").await;
    assert_eq!(clones, json!({"vertex": 3, "original_id": 4, "label": null, "layers": [3, 1]}));
    let (status, _) = send(&app, "GET", "/graphs/k4path/vertices/60/clones", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn overview_stacks_clones() {
    let tmp = tempfile::tempdir().unwrap();
    let app = app(&[from_text(tmp.path(), "k4path", K4_PATH)]);
    let o = get_json(&app, "/graphs/k4path/overview?height=10").await;
    let pts: Vec<&Value> = o["points"].as_array().unwrap().iter().filter(|p| p["vertex"] == 3).collect();
    assert_eq!(pts.len(), 2);
    assert_eq!((pts[0]["z"].as_f64(), pts[1]["z"].as_f64()), (Some(30.0), Some(10.0)));
    assert_eq!((&pts[0]["x"], &pts[0]["y"]), (&pts[1]["x"], &pts[1]["y"]));

    let flat = get_json(&app, "/graphs/k4path/overview?height=0").await;
    assert!(flat["points"].as_array().unwrap().iter().all(|p| p["z"] == 0.0));
}

#[tokio::test]
async fn k5_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let app = app(&[from_text(tmp.path(), "k5", K5)]);
    let ribbon = get_json(&app, "/graphs/k5/ribbon").await;
    assert_eq!(ribbon["rows"].as_array().unwrap().len(), 1);
    assert_eq!(ribbon["rows"][0]["value"], 4);
    for v in 0..5 {
        assert_eq!(get_json(&app, &format!("/graphs/k5/vertices/{v}/clones")).await["layers"], json!([4]));
    }
    let o = get_json(&app, "/graphs/k5/overview?height=2").await;
    assert!(o["points"].as_array().unwrap().iter().all(|p| p["z"] == 8.0));
}

#[tokio::test]
async fn isolated_vertex_has_no_layers() {
    let tmp = tempfile::tempdir().unwrap();
    let g = Graph::from_dense_edges(4, [(0, 1), (1, 2), (2, 0)]).unwrap();
    let app = app(&[write(tmp.path(), "iso", g)]);
    assert_eq!(get_json(&app, "/graphs/iso/vertices/3/clones").await["layers"], json!([]));
}

#[tokio::test]
async fn pathnet_requests() {
    let tmp = tempfile::tempdir().unwrap();
    let app = app(&[from_text(tmp.path(), "c6", C6), from_text(tmp.path(), "tri", TWO_TRIANGLES)]);

    let (status, body) = send(&app, "POST", "/graphs/c6/layers/2/pathnet", Some(json!({"anchors": [0, 3]}))).await;
    assert_eq!(status, StatusCode::OK);
    let net: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(net["vertices"], json!([0, 1, 2, 3]));

    let (_, body) = send(&app, "POST", "/graphs/c6/layers/2/pathnet", Some(json!({"anchors": [0, 3, 5]}))).await;
    let net: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!(net["edges"], json!([[0, 1], [1, 2], [2, 3], [5, 0]]));
    assert_eq!(net["anchors"], json!([0, 3, 5]));

    let (_, body) = send(&app, "POST", "/graphs/c6/layers/2/pathnet", Some(json!({"anchors": [2, 2]}))).await;
    let net: Value = serde_json::from_slice(&body).unwrap();
    assert_eq!((&net["vertices"], &net["edges"]), (&json!([2]), &json!([])));

    let (status, _) = send(&app, "POST", "/graphs/c6/layers/2/pathnet", Some(json!({"anchors": [0, 9]}))).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let (status, body) = send(&app, "POST", "/graphs/tri/layers/2/pathnet", Some(json!({"anchors": [0, 4]}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(serde_json::from_slice::<Value>(&body).unwrap()["anchor"], 4);

    let (status, body) = send(&app, "POST", "/graphs/tri/layers/2/pathnet", Some(json!({"anchors": [0, 1, 5]}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(serde_json::from_slice::<Value>(&body).unwrap()["anchor"], 5);
}

#[tokio::test]
async fn repeated_requests_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = from_text(tmp.path(), "k4path", K4_PATH);
    let app = app(std::slice::from_ref(&dir));
    for uri in [
        "/graphs/k4path/layers/3?layout=independent",
        "/graphs/k4path/layers/1?layout=global",
        "/graphs/k4path/ribbon",
        "/graphs/k4path/overview",
        "/graphs/k4path/layers/3/contour?resolution=64&levels=4",
    ] {
        let (s1, a) = send(&app, "GET", uri, None).await;
        let (s2, b) = send(&app, "GET", uri, None).await;
        assert_eq!((s1, s2), (StatusCode::OK, StatusCode::OK), "{uri}");
        assert_eq!(a, b, "{uri}");
    }
    // a fresh server reuses the layouts cached beside the artifact
    assert!(dir.join(artifact::layer_positions_file(3)).exists());
    let again = app_bytes(&dir, "/graphs/k4path/layers/3?layout=independent").await;
    let (_, first) = send(&app, "GET", "/graphs/k4path/layers/3?layout=independent", None).await;
    assert_eq!(again, first);
}

async fn app_bytes(dir: &Path, uri: &str) -> Vec<u8> {
    let app = router(Arc::new(Service::new([LoadedArtifact::load(dir).unwrap()])));
    send(&app, "GET", uri, None).await.1
}

#[tokio::test]
async fn contour_endpoint() {
    let tmp = tempfile::tempdir().unwrap();
    let app = app(&[from_text(tmp.path(), "k5", K5)]);
    let c = get_json(&app, "/graphs/k5/layers/4/contour?levels=3&resolution=64").await;
    assert_eq!(c["levels"].as_array().unwrap().len(), 3);
    assert_eq!(c["resolution"], 64);
    assert!(c["bandwidth"].as_f64().unwrap() > 0.0);
    assert!(!c["polylines"][0].as_array().unwrap().is_empty());

    let (status, _) = send(&app, "GET", "/graphs/k5/layers/4/contour?bandwidth=0", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let (status, _) = send(&app, "GET", "/graphs/k5/layers/4/contour?resolution=4", None).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);

    let body = json!({"positions": [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], "bandwidth": 0.5, "levels": 2, "resolution": 32});
    let (status, bytes) = send(&app, "POST", "/graphs/k5/layers/4/contour", Some(body)).await;
    assert_eq!(status, StatusCode::OK);
    let c: Value = serde_json::from_slice(&bytes).unwrap();
    assert_eq!(c["bandwidth"], 0.5);
}

#[tokio::test]
async fn ribbon_edges_sum_to_m() {
    let tmp = tempfile::tempdir().unwrap();
    let dirs = [
        from_text(tmp.path(), "k4path", K4_PATH),
        from_text(tmp.path(), "k5", K5),
        from_text(tmp.path(), "c6", C6),
        from_text(tmp.path(), "tri", TWO_TRIANGLES),
    ];
    let app = app(&dirs);
    let graphs = get_json(&app, "/graphs").await;
    for g in graphs.as_array().unwrap() {
        let ribbon = get_json(&app, &format!("/graphs/{}/ribbon", g["id"].as_str().unwrap())).await;
        let sum: u64 = ribbon["rows"].as_array().unwrap().iter().map(|r| r["edge_count"].as_u64().unwrap()).sum();
        assert_eq!(sum, g["m"].as_u64().unwrap());
    }
}

#[tokio::test]
async fn cors_is_permissive() {
    let app = app(&[]);
    let req = Request::builder().uri("/graphs").header("origin", "http://example.com").body(Body::empty()).unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert_eq!(resp.headers()["access-control-allow-origin"], "*");
}
