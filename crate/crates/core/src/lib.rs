pub mod algebra;
pub mod catalog;
pub mod degeneration;
pub mod extensions;
pub mod graph;
pub mod invariants;
pub mod linalg;
pub mod nondegeneration;
pub mod par;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod spotcheck;
pub mod suite;
