//! Graph layers by iterated fixed-point degree peeling.
//!
//! The crate is `no_std` (with `alloc`). The `std` feature (on by default)
//! adds the multithreaded coreness kernel and worker-parallel layout.
//!
//! Pipeline:
//!
//! ```text
//! Graph --coreness--> PeelMap
//! Graph --decompose--> Decomposition { layers (decreasing peel value), edge_layer, clone_map }
//! Decomposition + Graph --ribbon_summary--> RibbonSummary
//! Graph | Layer subgraph --layout--> LayoutResult --overview_coordinates--> OverviewCoordinates
//! Layer subgraph --shortest_path / expand_net--> PathNet
//! positions --kde_grid--> DensityField --contour_polylines--> ContourSet
//! ```
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod contour;
pub mod decompose;
mod error;
pub mod graph;
pub mod layout;
pub mod measures;
pub mod pathnet;
pub mod peel;

pub use contour::{contour_polylines, default_bandwidth, kde_grid, ContourSet, DensityField, Polyline};
pub use decompose::{clones_of, decompose, Decomposition, Layer};
pub use error::{Error, Result};
pub use graph::{connected_components, Components, ExternalId, Graph, GraphBuilder, Subgraph, VertexId};
pub use layout::{layout, layout_layer, overview_coordinates, LayoutParams, LayoutResult, LayoutScope, OverviewCoordinates, OverviewPoint};
pub use measures::{layer_measures, ribbon_summary, LayerMeasures, RibbonSummary};
pub use pathnet::{expand_net, shortest_path, PathNet};
pub use peel::{coreness, Adjacency, PeelMap};

#[cfg(feature = "std")]
pub use decompose::decompose_with_workers;
#[cfg(feature = "std")]
pub use layout::{layout_layer_with_workers, layout_with_workers};
#[cfg(feature = "std")]
pub use peel::coreness_parallel;
