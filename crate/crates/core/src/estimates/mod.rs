//! Randomized checks of the commutator estimates, weighted growth of the
//! free group, and the two-time unique-continuation residual.
//!
//! Estimates with implicit constants are checked as ratio stability: the
//! corpus maximum must stay within a factor of two under grid refinement and
//! corpus enlargement.

mod commutators;
mod corpus;
mod growth;
mod ucp;

pub use commutators::{
    calderon_ratio, calderon_ratio_with_bound, commutator_a_ratio, commutator_a_ratio_with_bound,
    dalpha_commutator_ratio, dalpha_commutator_ratio_with_bound, ratio_report, Lemma, RatioReport,
};
pub use corpus::{CorpusSpec, Plateau, TestCorpus, TrigSeries};
pub use growth::{group_weighted_growth, GrowthReport, TAIL_EDGE, TAIL_LIMIT};
pub use ucp::{ucp_residual, UcpReport};
