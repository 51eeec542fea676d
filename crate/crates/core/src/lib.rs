//! Proof nets for star-autonomous categories freely generated over a base
//! category: shapes, linkings, the correctness criterion, composition by
//! cut elimination, and net equality by rewiring search.

pub mod base;
pub mod criterion;
pub mod cutelim;
pub mod diagram;
pub mod dot;
pub mod goi;
pub mod linking;
pub mod net;
pub mod sample;
pub mod shape;
