//! Near-miss explanation generation for function-free clausal theories.
//!
//! Given a theory (background knowledge plus learned rules), a positive
//! example, and a set of domain-specific rewriting filters, this crate
//! derives contrastive near-miss explanations: ground instances of
//! minimally changed rules whose body is modeled but whose head is not,
//! ranked by the number of substitution bindings that had to change.
//!
//! The pipeline is: [`parser::parse_theory`] loads and validates a
//! theory, [`config::parse_config`] validates a run configuration,
//! [`explain::local_explanations`] extracts trace explanations for the
//! example, and [`search::genme`] produces the ranked family of
//! near-miss explanations. [`report`] turns a family into text or JSON.

pub mod config;
pub mod error;
pub mod eval;
pub mod explain;
pub mod logic;
pub mod oracle;
pub mod parser;
pub mod report;
pub mod rewrite;
pub mod search;
pub mod theory;

pub use config::{parse_config, RunConfig, TemplateTable};
pub use error::{Error, Result};
pub use explain::{local_explanations, render_explanation, LocalExplanation};
pub use logic::{match_atom, Atom, Clause, Literal, Substitution, Term};
pub use parser::{parse_ground_atom, parse_theory, serialize_clause};
pub use rewrite::{lift_constants, minimally_changed_clause, rename, FilterMode, RewritingFilter};
pub use search::{
    genme, genme_sequential, minimal_degree_search, near_miss_candidates, NearMissExplanation,
    NearMissFamily, SearchOpts,
};
pub use theory::Theory;
