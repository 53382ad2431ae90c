//! Membership tests and structural maps for the symmetrized polydisc and the
//! extended symmetrized polydisc.

mod point;
mod sym;
mod tilde;

pub use point::{BetaVector, ConditionValue, MembershipVerdict, SymPoint, TildePoint, Which, Witness};
pub use sym::{costara_f, costara_sup, membership_sym, scale_equiv, sym_map, CostaraSup};
pub use tilde::{
    beta_recover, branch_a, build_bj, condition_vector_thm22, d_norm, in_jn, lift_tilde,
    membership_tilde, phi, thm22_margins, RootBranch, DEGENERATE_TOL,
};
pub(crate) use tilde::{d_closed, is_degenerate, membership_margin, pair};
