//! Verification engine: self-contraction verdicts, length and Fejér metrics,
//! and audits of the inequalities that make the algorithms self-contracting.

mod audits;
mod brute;
mod report;
mod self_contraction;

pub use audits::{
    audit_backtracking, audit_decrease_lemma, audit_decrease_lemma_with, audit_objective_monotone,
};
pub use brute::brute_force_prox;
pub use report::{check_fejer, report, tail_lengths, TrajectoryReport};
pub use self_contraction::{
    check_self_contracted, check_self_contracted_with, SelfContractionVerdict, DEFAULT_TOL,
};
