//! Logical causal statements, the uDAG inference rules, the brute-force
//! MAG oracle, and the precomputed mapping from structures to statements.

mod engine;
mod mapping;
mod oracle;
mod statement;
mod udag;

pub use engine::CiStatus;
pub use mapping::{build_mapping, MappingTable, MAPPING_VERSION};
pub use oracle::{bruteforce_statements, optimal_udags_of_mag, statements_from_faithful_structure};
pub use statement::CausalStatement;
pub use udag::{noncause_statements_from_optimal_udag, udag_ci_query, udag_unique_path_query};
