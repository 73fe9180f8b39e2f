//! Formation path planning with split and merge on clearance-weighted
//! Voronoi roadmaps.

pub mod bench;
pub mod geometry;
pub mod model;
pub mod optimizer;
pub mod oracle;
pub mod planner;
pub mod roadmap;
