//! Membership tests for the symmetrized polydisc and its companion domain,
//! Schwarz-lemma conditions and interpolant synthesis.

pub mod domains;
pub mod error;
pub mod fuzz;
pub mod io;
pub mod linalg;
pub mod nonuniqueness;
pub mod oracles;
pub mod schwarz;

pub use domains::{
    beta_recover, build_bj, condition_vector_thm22, costara_f, costara_sup, d_norm, in_jn, lift_tilde,
    membership_sym, membership_tilde, phi, scale_equiv, sym_map, BetaVector, ConditionValue,
    MembershipVerdict, SymPoint, TildePoint, Which, Witness,
};
pub use error::{Error, Result};
pub use linalg::{CNum, Mat2, Vec2};
pub use schwarz::{build_psi, construct_fj, construct_g, report, SchwarzDatum, SchwarzReport};
