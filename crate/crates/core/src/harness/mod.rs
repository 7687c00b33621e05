//! Test and batch tooling: the JSON problem format, seeded instance
//! generators, brute-force oracles and finite-difference gradient checks.

pub mod format;
pub mod generate;
pub mod gradcheck;
pub mod oracle;

pub use format::{parse_problem, serialize_problem, ProblemFile, SchemaError};
pub use generate::{default_warm_start, generate_lp, generate_socp_segment, lorentz_segment};
pub use gradcheck::{gradcheck, GradcheckReport};
pub use oracle::{oracle_lp, oracle_segment, OracleError, OracleMethod, OracleResult};
