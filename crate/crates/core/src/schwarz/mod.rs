//! Two-point Schwarz lemma data (0 -> 0, l0 -> y0): the equivalent
//! conditions and the constructive interpolant.

mod construct;
mod kernel;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use construct::{
    build_psi, construct_fj, construct_g, construct_g_for, construct_g_mobius,
    construct_g_rank_split, lift_block, max_diff, range_check, verify_g, FFunction, GFunction,
    Interpolant, RangeSummary,
};
pub use kernel::{build_zj, kernel_closed_form, kz_matrix, uv_vectors, KernelClosedForm};

use crate::domains::{
    branch_a, costara_sup, d_closed, in_jn, lift_tilde, membership_margin, membership_tilde, pair,
    BetaVector, ConditionValue, SymPoint, TildePoint, Which,
};
use crate::error::{Error, Result};
use crate::linalg::{r, CNum, TOL};
use crate::oracles::bidisc_nonvanishing;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzDatum {
    pub lambda0: CNum,
    pub y0: TildePoint,
}

impl SchwarzDatum {
    pub fn new(lambda0: CNum, y0: TildePoint) -> Result<Self> {
        let l = lambda0.norm();
        if !(l > 0.0 && l < 1.0) {
            return Err(Error::InvalidParameter(format!("|lambda0| = {l} not in (0, 1)")));
        }
        if !membership_tilde(&y0, Which::Open).member_open {
            return Err(Error::InvalidPoint("target is not in the open domain".into()));
        }
        Ok(Self { lambda0, y0 })
    }

    pub fn n(&self) -> usize {
        self.y0.n()
    }
}

/// The conditions that are mutually equivalent for every datum.
pub const EQUIVALENT: [u8; 8] = [3, 4, 6, 7, 8, 9, 10, 11];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwarzReport {
    pub n: usize,
    pub cond: BTreeMap<u8, ConditionValue>,
    /// per j = 1..[n/2]: whether |y_{n-j}| <= |y_j|
    pub branch: Vec<bool>,
    pub consistency: bool,
    pub jn_member: bool,
}

impl SchwarzReport {
    pub fn holds(&self, k: u8) -> bool {
        self.cond[&k].holds
    }

    pub fn margin(&self, k: u8) -> f64 {
        self.cond[&k].margin
    }
}

/// Whether the margins of `keys` contain both a value above +TOL and one
/// below -TOL.
pub fn hard_disagreement<I: IntoIterator<Item = f64>>(margins: I) -> bool {
    let (mut pos, mut neg) = (false, false);
    for m in margins {
        pos |= m > TOL;
        neg |= m < -TOL;
    }
    pos && neg
}

/// Closed-form margins of conditions 2, 3, 6-10 for the datum.
fn closed_form_margins(d: &SchwarzDatum) -> BTreeMap<u8, f64> {
    let n = d.n();
    let q = d.y0.q();
    let qn = q.norm();
    let l = d.lambda0.norm();
    let l2 = l * l;
    let mut m: BTreeMap<u8, f64> = BTreeMap::new();
    let mut put = |k: u8, v: f64| {
        let e = m.entry(k).or_insert(f64::INFINITY);
        *e = e.min(v);
    };
    for j in 1..n {
        let (cj, a, b, _) = pair(&d.y0, j);
        put(2, d_closed(cj, a, b, q).map_or(f64::NEG_INFINITY, |dj| l - dj));
    }
    for j in 1..=n / 2 {
        let (cj, a, b, _) = pair(&d.y0, j);
        let (p, rr) = if branch_a(&d.y0, j) { (a, b) } else { (b, a) };
        let c2 = cj * cj;
        let prod = (p * rr - q * c2).norm();
        put(3, d_closed(cj, p, rr, q).map_or(f64::NEG_INFINITY, |dj| l - dj));
        let den = c2 - rr.norm_sqr();
        put(6, if den > 0.0 { l - (cj * (p - rr.conj() * q).norm() + prod) / den } else { f64::NEG_INFINITY });
        put(
            7,
            bidisc_nonvanishing(d.lambda0 * cj, p, rr * d.lambda0, q * cj),
        );
        let lhs8 = p.norm_sqr() - l2 * rr.norm_sqr() + c2 * qn * qn - c2 * l2
            + 2.0 * cj * (rr * l2 - p.conj() * q).norm();
        put(8, -lhs8 / c2);
        let lhs9 = p.norm_sqr() + l2 * rr.norm_sqr() - c2 * qn * qn + 2.0 * l * prod;
        put(9, ((c2 * l2 - lhs9) / c2).min(l - qn));
        let lhs10 = (rr * l2 - p.conj() * q).norm() + l * (p - rr.conj() * q).norm() + cj * qn * qn;
        put(10, (cj * l2 - lhs10) / cj);
    }
    m
}

/// Margin of condition 11: |q| <= |l0| and the beta bounds.
fn cond11_margin(d: &SchwarzDatum) -> f64 {
    let l = d.lambda0.norm();
    let gap = l - d.y0.q().norm();
    if gap < -TOL {
        return gap;
    }
    match beta_system(d) {
        Ok((_, margin)) => margin.min(gap),
        Err(Error::SingularSystem { residual }) => -residual,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// The (j-th, partner) pairs of the lifted point and their binomial bounds.
fn beta_pairs(n: usize) -> Vec<(usize, usize, usize)> {
    // (index a, index b, j) into the beta vector, 1-based
    (1..=n / 2)
        .map(|j| if n % 2 == 1 { (j, n - j, j) } else { (j, n + 1 - j, j) })
        .collect()
}

/// Solves the linear systems of condition 11 for beta; returns beta and the
/// minimum over j of (C - |beta_a| - |beta_b|)/C.
pub fn solve_beta_cond11(d: &SchwarzDatum) -> Result<(BetaVector, f64)> {
    let l = d.lambda0.norm();
    let qn = d.y0.q().norm();
    if qn > l + TOL {
        return Err(Error::Infeasible(format!("|q| = {qn} exceeds |lambda0| = {l}")));
    }
    let (beta, margin) = beta_system(d)?;
    if !Which::Closed.holds(margin) {
        return Err(Error::Infeasible(format!("beta bound violated by {:e}", -margin)));
    }
    Ok((beta, margin))
}

/// The unique beta of the linear systems (or the symmetric choice on the
/// singular locus |q| = |l0|) with its bound margin.
fn beta_system(d: &SchwarzDatum) -> Result<(BetaVector, f64)> {
    let n = d.n();
    let q = d.y0.q();
    let qt = q / d.lambda0;
    let qtn = qt.norm();
    let len = if n % 2 == 1 { n - 1 } else { n };
    let mut beta = vec![r(0.0); len];
    let mut margin = f64::INFINITY;
    for (ia, ib, j) in beta_pairs(n) {
        let (cj, a, b, _) = pair(&d.y0, j);
        let (ya, yb) = if branch_a(&d.y0, j) { (a / d.lambda0, b) } else { (a, b / d.lambda0) };
        let (ba, bb) = if (1.0 - qtn).abs() <= 1e-12 {
            let residual = (ya - yb.conj() * qt).norm();
            if residual > TOL {
                return Err(Error::SingularSystem { residual });
            }
            (ya / 2.0, ya.conj() * qt / 2.0)
        } else {
            let den = 1.0 - qtn * qtn;
            ((ya - yb.conj() * qt) / den, (yb - ya.conj() * qt) / den)
        };
        beta[ia - 1] = ba;
        beta[ib - 1] = bb;
        margin = margin.min((cj - ba.norm() - bb.norm()) / cj);
    }
    Ok((BetaVector { n, beta }, margin))
}

/// Margin of the constructive condition 5: the condition 3 margin when every
/// F_j is produced, and -1 when condition 3 holds but a construction fails.
fn cond5_margin(d: &SchwarzDatum, cond3: f64) -> f64 {
    if !Which::Closed.holds(cond3) {
        return cond3;
    }
    if (1..=d.n() / 2).all(|j| construct_fj(d, j).is_ok()) {
        cond3.max(0.0)
    } else {
        -1.0
    }
}

pub fn report(d: &SchwarzDatum) -> SchwarzReport {
    let n = d.n();
    let mut margins = closed_form_margins(d);
    let lifted = lift_tilde(&d.y0, d.lambda0).expect("datum has 0 < |l0| < 1");
    margins.insert(4, membership_margin(&lifted));
    margins.insert(11, cond11_margin(d));
    margins.insert(5, cond5_margin(d, margins[&3]));
    let cond: BTreeMap<u8, ConditionValue> = margins
        .iter()
        .map(|(k, v)| (*k, ConditionValue::eval(Which::Closed, *v)))
        .collect();
    let consistency = !hard_disagreement(EQUIVALENT.iter().map(|k| margins[k]));
    SchwarzReport {
        n,
        cond,
        branch: (1..=n / 2).map(|j| branch_a(&d.y0, j)).collect(),
        consistency,
        jn_member: in_jn(&d.y0),
    }
}

/// Sup of the rational function of the symmetrized polydisc at s0 and the
/// verdict sup <= |l0|.
pub fn costara_schwarz_bound(lambda0: CNum, s0: &SymPoint) -> (f64, bool) {
    let sup = costara_sup(s0).sup;
    (sup, sup <= lambda0.norm() + TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::sym_map;
    use crate::linalg::c;

    fn worked_point() -> TildePoint {
        TildePoint::new(vec![r(1.5), r(0.75)], r(0.5)).unwrap()
    }

    #[test]
    fn datum_validation() {
        assert!(SchwarzDatum::new(r(0.0), worked_point()).is_err());
        assert!(SchwarzDatum::new(r(1.0), worked_point()).is_err());
        let outside = TildePoint::new(vec![r(4.0), r(0.0)], r(0.0)).unwrap();
        assert!(SchwarzDatum::new(r(0.5), outside).is_err());
    }

    #[test]
    fn worked_report() {
        let d = SchwarzDatum::new(r(-0.8), worked_point()).unwrap();
        let rep = report(&d);
        assert!(rep.margin(3).abs() < 1e-12);
        for k in 3..=11 {
            assert!(rep.holds(k), "condition {k}: {:?}", rep.cond[&k]);
        }
        assert!(rep.consistency && rep.jn_member);
        assert_eq!(rep.branch, vec![true]);
    }

    #[test]
    fn worked_report_smaller_lambda() {
        let d = SchwarzDatum::new(r(0.7), worked_point()).unwrap();
        let rep = report(&d);
        assert!(!rep.holds(2) && !rep.holds(3));
        for k in [4, 6, 7, 8, 9, 10, 11] {
            assert!(!rep.holds(k), "condition {k}: {:?}", rep.cond[&k]);
        }
        assert!(rep.consistency);
    }

    #[test]
    fn origin_report() {
        for n in 2..=6 {
            let d = SchwarzDatum::new(c(0.1, -0.3), TildePoint::origin(n)).unwrap();
            let rep = report(&d);
            assert!(rep.cond.values().all(|v| v.holds), "{rep:?}");
        }
    }

    #[test]
    fn beta_solutions() {
        let d = SchwarzDatum::new(r(0.5), TildePoint::origin(4)).unwrap();
        let (b, _) = solve_beta_cond11(&d).unwrap();
        assert_eq!(b.beta.len(), 4);
        assert!(b.beta.iter().all(|x| x.norm() == 0.0));
        let d = SchwarzDatum::new(r(-0.8), worked_point()).unwrap();
        let (b, m) = solve_beta_cond11(&d).unwrap();
        assert!(b.beta[0].norm() + b.beta[1].norm() <= 3.0 + 1e-9 && m >= -1e-9);
        let y = TildePoint::new(vec![r(0.0), r(0.0)], r(0.6)).unwrap();
        let d = SchwarzDatum::new(r(0.5), y).unwrap();
        assert!(matches!(solve_beta_cond11(&d), Err(Error::Infeasible(_))));
    }

    #[test]
    fn costara_bound_examples() {
        assert_eq!(costara_schwarz_bound(r(0.3), &SymPoint::origin(3)), (0.0, true));
        let l = c(0.4, 0.3);
        let s = sym_map(&[c(0.9, 0.0) * l, c(-0.2, 0.5) * l, c(0.1, -0.8) * l]);
        assert!(costara_schwarz_bound(l, &s).1);
    }

    #[test]
    fn disagreement_band() {
        assert!(!hard_disagreement([1.0, 5e-10, -5e-10]));
        assert!(hard_disagreement([1.0, -2e-9]));
    }
}
