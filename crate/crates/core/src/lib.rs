//! Markov bases of binary graph models: the marginal map and its matrix,
//! degree-bounded minimal-generator computation, structural classification
//! of low-degree generators, the cycle and complete-bipartite special
//! families, and exact degrees for forest models.

pub mod basis;
pub mod catalog;
pub mod classify;
pub mod error;
pub mod families;
pub mod forest;
pub mod graph;
pub mod io;
pub mod model;

pub use error::{Error, Result};
pub use graph::Graph;
pub use model::{MarginalVector, Move, Table};
