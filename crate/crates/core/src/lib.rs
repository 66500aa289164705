//! Exact verification of a `Z2^3` abelian cover of the projective plane and
//! the double cover built on its 24 nodes, producing a surface with
//! `q = 2`, `p_g = 3`, `K^2 = 16` and canonical map of degree 16.

pub mod assembly;
pub mod bicanonical;
pub mod config;
pub mod cover;
pub mod field;
pub mod group;
pub mod lattice;
pub mod plane;
pub mod report;
pub mod transport;

pub use assembly::{run_pipeline, Headline, PipelineError, TowerReport};
pub use config::RunConfig;
