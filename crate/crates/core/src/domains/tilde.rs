//! The extended symmetrized polydisc: Phi_j, D_j, the equivalent
//! characterizations and the structural maps built on them.

use std::collections::BTreeMap;

use crate::domains::point::{BetaVector, ConditionValue, MembershipVerdict, TildePoint, Which, Witness};
use crate::error::{Error, Result};
use crate::linalg::{binom_f, op_norm, r, CNum, Mat2, TOL};
use crate::oracles::bidisc_nonvanishing;

/// Tolerance of the degenerate-product test y_j y_{n-j} = C^2 q.
pub const DEGENERATE_TOL: f64 = 1e-12;

/// Square-root branch selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootBranch {
    Principal,
    Negated,
}

impl RootBranch {
    pub fn apply(self, w: CNum) -> CNum {
        match self {
            RootBranch::Principal => w,
            RootBranch::Negated => -w,
        }
    }
}

/// (C, y_j, y_{n-j}, q) with C = binom(n, j).
pub(crate) fn pair(y: &TildePoint, j: usize) -> (f64, CNum, CNum, CNum) {
    let n = y.n();
    (binom_f(n, j), y.y(j), y.y(n - j), y.q())
}

pub(crate) fn is_degenerate(cj: f64, a: CNum, b: CNum, q: CNum) -> bool {
    (a * b - q * (cj * cj)).norm() <= DEGENERATE_TOL
}

/// Phi_j(z, y) = (C q z - y_j)/(y_{n-j} z - C), or y_j / C when the product
/// y_j y_{n-j} equals C^2 q.
pub fn phi(j: usize, z: CNum, y: &TildePoint) -> Result<CNum> {
    y.check_index(j)?;
    let (cj, a, b, q) = pair(y, j);
    if is_degenerate(cj, a, b, q) {
        return Ok(a / cj);
    }
    let den = b * z - cj;
    if den.norm() <= DEGENERATE_TOL * cj {
        return Err(Error::PoleAtZ { j, z_re: z.re, z_im: z.im });
    }
    Ok((q * z * cj - a) / den)
}

/// Closed form of D_j = sup over the disc of |Phi_j(., y)|.
pub fn d_norm(j: usize, y: &TildePoint) -> Result<f64> {
    y.check_index(j)?;
    let (cj, a, b, q) = pair(y, j);
    d_closed(cj, a, b, q).ok_or(Error::OutsideFormulaDomain { j })
}

pub(crate) fn d_closed(cj: f64, a: CNum, b: CNum, q: CNum) -> Option<f64> {
    if is_degenerate(cj, a, b, q) {
        return Some(a.norm() / cj);
    }
    let den = cj * cj - b.norm_sqr();
    if den <= 0.0 {
        return None;
    }
    Some((cj * (a - b.conj() * q).norm() + (a * b - q * (cj * cj)).norm()) / den)
}

/// Signed margins of the characterizing conditions, each the minimum over
/// j = 1..[n/2]. A positive margin means the strict inequality holds.
pub fn thm22_margins(y: &TildePoint) -> BTreeMap<&'static str, f64> {
    let n = y.n();
    let q = y.q();
    let qn = q.norm();
    let mut m: BTreeMap<&'static str, f64> = BTreeMap::new();
    let mut put = |key: &'static str, v: f64| {
        let e = m.entry(key).or_insert(f64::INFINITY);
        *e = e.min(v);
    };
    for j in 1..=n / 2 {
        let (cj, a, b, _) = pair(y, j);
        let c2 = cj * cj;
        let prod = (a * b - q * c2).norm();
        let degenerate = is_degenerate(cj, a, b, q);
        let room_b = (cj - b.norm()) / cj;
        let room_a = (cj - a.norm()) / cj;

        put("2", bidisc_nonvanishing(r(cj), a, b, q * cj));

        let d3 = d_closed(cj, a, b, q).map_or(f64::NEG_INFINITY, |d| 1.0 - d);
        put("3", if degenerate { d3.min(room_b) } else { d3 });
        let d3p = d_closed(cj, b, a, q).map_or(f64::NEG_INFINITY, |d| 1.0 - d);
        put("3'", if degenerate { d3p.min(room_a) } else { d3p });

        put("4", ((c2 - b.norm_sqr() - cj * (a - b.conj() * q).norm() - prod) / c2).min(room_b));
        put("4'", ((c2 - a.norm_sqr() - cj * (b - a.conj() * q).norm() - prod) / c2).min(room_a));

        let lhs5 = a.norm_sqr() - b.norm_sqr() + c2 * qn * qn + 2.0 * cj * (b - a.conj() * q).norm();
        put("5", ((c2 - lhs5) / c2).min(room_b));
        let lhs5p = b.norm_sqr() - a.norm_sqr() + c2 * qn * qn + 2.0 * cj * (a - b.conj() * q).norm();
        put("5'", ((c2 - lhs5p) / c2).min(room_a));

        let lhs6 = a.norm_sqr() + b.norm_sqr() - c2 * qn * qn + 2.0 * prod;
        put("6", ((c2 - lhs6) / c2).min(1.0 - qn));

        let lhs7 = (b - a.conj() * q).norm() + (a - b.conj() * q).norm();
        put("7", (cj * (1.0 - qn * qn) - lhs7) / cj);

        put("9", 1.0 - op_norm(&symmetric_b(cj, a, b, q, RootBranch::Principal)));
    }
    m
}

/// Condition vector of the characterization theorem for the requested flavour.
pub fn condition_vector_thm22(y: &TildePoint, which: Which) -> BTreeMap<String, ConditionValue> {
    thm22_margins(y)
        .into_iter()
        .map(|(k, v)| (k.to_string(), ConditionValue::eval(which, v)))
        .collect()
}

/// Decision margin: condition (4) together with the guard on |q|.
pub(crate) fn membership_margin(y: &TildePoint) -> f64 {
    let n = y.n();
    let q = y.q();
    let mut m = 1.0 - q.norm();
    for j in 1..=n / 2 {
        let (cj, a, b, _) = pair(y, j);
        let c2 = cj * cj;
        let lhs = cj * (a - b.conj() * q).norm() + (a * b - q * c2).norm();
        m = m.min((c2 - b.norm_sqr() - lhs) / c2).min((cj - b.norm()) / cj);
    }
    m
}

pub fn membership_tilde(y: &TildePoint, which: Which) -> MembershipVerdict {
    let margin = membership_margin(y);
    let member_open = Which::Open.holds(margin);
    let member_closed = Which::Closed.holds(margin);
    let witness = if member_closed {
        let beta = beta_recover(y).ok();
        let b_matrices = (1..=y.n() / 2)
            .filter_map(|j| build_bj(y, j, RootBranch::Principal).ok())
            .collect();
        Some(Witness { beta, b_matrices })
    } else {
        None
    };
    MembershipVerdict {
        member_open,
        member_closed,
        condition_values: condition_vector_thm22(y, which),
        witness,
    }
}

/// beta_j = (y_j - conj(y_{n-j}) q)/(1 - |q|^2).
pub fn beta_recover(y: &TildePoint) -> Result<BetaVector> {
    let n = y.n();
    let q = y.q();
    let qn = q.norm();
    if qn >= 1.0 {
        return Err(Error::BoundaryParameter { modulus: qn });
    }
    let den = 1.0 - qn * qn;
    let beta = (1..n).map(|j| (y.y(j) - y.y(n - j).conj() * q) / den).collect();
    Ok(BetaVector { n, beta })
}

pub(crate) fn symmetric_b(cj: f64, a: CNum, b: CNum, q: CNum, branch: RootBranch) -> Mat2 {
    let w = branch.apply((a * b / (cj * cj) - q).sqrt());
    Mat2::new(a / cj, w, w, b / cj)
}

/// Symmetric B with diagonal (y_j/C, y_{n-j}/C) and determinant q.
pub fn build_bj(y: &TildePoint, j: usize, branch: RootBranch) -> Result<Mat2> {
    y.check_index(j)?;
    let margin = membership_margin(y);
    if !Which::Closed.holds(margin) {
        return Err(Error::InvalidPoint(format!("not in the closed domain (margin {margin:e})")));
    }
    let (cj, a, b, q) = pair(y, j);
    let m = symmetric_b(cj, a, b, q, branch);
    let norm = op_norm(&m);
    if norm > 1.0 + TOL {
        return Err(Error::NormCertificateFailed { norm });
    }
    Ok(m)
}

/// Membership in the subset J_n on which single-block lifts are available.
pub fn in_jn(y: &TildePoint) -> bool {
    let n = y.n();
    if n <= 3 {
        return true;
    }
    let nf = n as f64;
    let close = |got: CNum, want: CNum| (got - want).norm() <= 1e-10 * want.norm().max(1.0);
    let (y1, yl) = (y.y(1), y.y(n - 1));
    let upper = if n % 2 == 1 { n / 2 } else { n / 2 - 1 };
    for j in 2..=upper {
        let f = binom_f(n, j) / nf;
        if !close(y.y(j), y1 * f) || !close(y.y(n - j), yl * f) {
            return false;
        }
    }
    if n.is_multiple_of(2) {
        let k = n / 2;
        let f = binom_f(n, k) / nf;
        if !close(y.y(k), (y1 + yl) * (f / 2.0)) {
            return false;
        }
    }
    true
}

/// Whether the pair (j, n-j) divides y_j (rather than y_{n-j}) by lambda0.
pub fn branch_a(y: &TildePoint, j: usize) -> bool {
    let n = y.n();
    2 * j == n || y.y(n - j).norm() <= y.y(j).norm()
}

/// The auxiliary point in C^n (odd n) or C^{n+1} (even n) whose closed
/// membership is equivalent to the Schwarz conditions.
pub fn lift_tilde(y: &TildePoint, lambda0: CNum) -> Result<TildePoint> {
    let l = lambda0.norm();
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::InvalidParameter(format!("|lambda0| = {l} not in (0, 1)")));
    }
    let n = y.n();
    let mut t: Vec<CNum> = y.ys().to_vec();
    for j in 1..=n / 2 {
        if branch_a(y, j) {
            t[j - 1] = y.y(j) / lambda0;
        } else {
            t[n - j - 1] = y.y(n - j) / lambda0;
        }
    }
    let q = y.q() / lambda0;
    if n % 2 == 1 {
        return TildePoint::new(t, q);
    }
    let k = n / 2;
    let np1 = (n + 1) as f64;
    let mut out = vec![r(0.0); n];
    for j in 1..=k {
        out[j - 1] = t[j - 1] * (np1 / (np1 - j as f64));
    }
    out[k] = y.y(k) * (np1 / (k as f64 + 1.0));
    for j in 1..k {
        out[n - j] = t[n - j - 1] * (np1 / (np1 - j as f64));
    }
    TildePoint::new(out, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, det2};
    use crate::oracles::{sup_on_torus, GridSpec};

    fn worked() -> TildePoint {
        TildePoint::new(vec![r(1.5), r(0.75)], r(0.5)).unwrap()
    }

    fn witness() -> TildePoint {
        TildePoint::new(vec![r(2.5), r(1.25)], r(0.5)).unwrap()
    }

    #[test]
    fn phi_at_origin_point() {
        let o = TildePoint::origin(3);
        assert_eq!(phi(1, c(0.3, 0.2), &o).unwrap(), r(0.0));
    }

    #[test]
    fn phi_worked_value() {
        let v = phi(1, r(-1.0), &worked()).unwrap();
        assert!((v.norm() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn phi_reports_pole() {
        let y = TildePoint::new(vec![r(1.0), r(3.0)], r(0.0)).unwrap();
        assert!(matches!(phi(1, r(1.0), &y), Err(Error::PoleAtZ { .. })));
        assert!(phi(3, r(0.0), &y).is_err());
    }

    #[test]
    fn d_norm_worked() {
        assert!((d_norm(1, &worked()).unwrap() - 0.8).abs() < 1e-12);
        assert!((d_norm(2, &worked()).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(d_norm(1, &TildePoint::origin(4)).unwrap(), 0.0);
        let d = d_norm(1, &witness()).unwrap();
        assert!(d > 0.0 && d < 1.0);
        let y = TildePoint::new(vec![r(0.0), r(3.5)], r(0.1)).unwrap();
        assert!(matches!(d_norm(1, &y), Err(Error::OutsideFormulaDomain { .. })));
    }

    #[test]
    fn d_norm_matches_grid() {
        for y in [worked(), witness()] {
            for j in 1..=2 {
                let (s, _) = sup_on_torus(|z| phi(j, z, &y), GridSpec::default()).unwrap();
                assert!((s - d_norm(j, &y).unwrap()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn membership_examples() {
        assert!(membership_tilde(&worked(), Which::Open).member_open);
        assert!(membership_tilde(&witness(), Which::Open).member_open);
        for n in 2..=8 {
            assert!(membership_tilde(&TildePoint::origin(n), Which::Open).member_open);
        }
        let v = membership_tilde(&worked(), Which::Open);
        assert!(v.condition_values.values().all(|c| c.holds), "{v:?}");
    }

    #[test]
    fn boundary_equality_in_seven() {
        let y = TildePoint::new(vec![r(3.0), r(0.0)], r(0.0)).unwrap();
        let m = thm22_margins(&y);
        assert!(m["7"].abs() < 1e-15);
        let v = membership_tilde(&y, Which::Closed);
        assert!(v.member_closed && !v.member_open);
    }

    #[test]
    fn beta_of_witness() {
        let b = beta_recover(&witness()).unwrap();
        assert!((b.beta[0] - r(2.5)).norm() < 1e-15);
        assert!(b.beta[1].norm() < 1e-15);
        let y = TildePoint::new(vec![r(0.0), r(0.0)], r(1.0)).unwrap();
        assert!(matches!(beta_recover(&y), Err(Error::BoundaryParameter { .. })));
    }

    #[test]
    fn b_matrix_of_worked_point() {
        let b = build_bj(&worked(), 1, RootBranch::Principal).unwrap();
        assert!((b.a11 - r(0.5)).norm() < 1e-15 && (b.a22 - r(0.25)).norm() < 1e-15);
        assert_eq!(b.a12, b.a21);
        assert!((det2(&b) - r(0.5)).norm() < 1e-12);
        let z = build_bj(&TildePoint::origin(3), 1, RootBranch::Negated).unwrap();
        assert_eq!(z, Mat2::zero());
    }

    #[test]
    fn jn_examples() {
        assert!(in_jn(&worked()));
        let a = c(0.2, 0.1);
        let b = c(-0.1, 0.3);
        let y = TildePoint::new(vec![a * 4.0, (a + b) * 3.0, b * 4.0], r(0.1)).unwrap();
        assert!(in_jn(&y));
        let y = TildePoint::new(vec![a * 5.0, a * 10.0 + 0.01, b * 10.0, b * 5.0], r(0.0)).unwrap();
        assert!(!in_jn(&y));
        let y = TildePoint::new(vec![a * 5.0, a * 10.0, b * 10.0, b * 5.0], r(0.0)).unwrap();
        assert!(in_jn(&y));
    }

    #[test]
    fn lift_examples() {
        let l = lift_tilde(&worked(), r(-0.8)).unwrap();
        let want = [r(-15.0 / 8.0), r(0.75), r(-0.625)];
        for (g, w) in l.components().iter().zip(want) {
            assert!((g - w).norm() < 1e-15);
        }
        assert_eq!(lift_tilde(&TildePoint::origin(4), r(0.5)).unwrap(), TildePoint::origin(5));
        // n = 2: ((3/2) s / l0, (3/2) s, p / l0)
        let y = TildePoint::new(vec![c(0.4, 0.2)], c(0.1, 0.0)).unwrap();
        let l = lift_tilde(&y, r(0.5)).unwrap();
        assert_eq!(l.n(), 3);
        assert!((l.y(1) - c(0.4, 0.2) * 3.0).norm() < 1e-15);
        assert!((l.y(2) - c(0.4, 0.2) * 1.5).norm() < 1e-15);
        assert!((l.q() - r(0.2)).norm() < 1e-15);
        assert!(lift_tilde(&y, r(1.0)).is_err());
    }
}
