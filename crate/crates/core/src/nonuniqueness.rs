//! An infinite family of distinct interpolants for one boundary datum in
//! dimension three: l0 = -4/5, y = (3/2, 3/4, 1/2).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::domains::TildePoint;
use crate::error::{Error, Result};
use crate::linalg::{blaschke, c, mobius_scalar, pseudo_hyperbolic, r, CNum, Mat2};
use crate::oracles::disc_grid;
use crate::schwarz::{max_diff, FFunction, GFunction, Interpolant};

/// Two-point scalar data g(0) = c0, g(l0) = c1 with a free parameter zeta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSchurSpec {
    pub c0: CNum,
    pub c1: CNum,
    pub lambda0: CNum,
    pub zeta: CNum,
}

/// g(l) = m_{c0}(l * m_{w1}(zeta B(l))).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalarSchur {
    pub c0: CNum,
    pub w1: CNum,
    pub zeta: CNum,
    pub lambda0: CNum,
}

impl ScalarSchur {
    pub fn eval(&self, lambda: CNum) -> CNum {
        let inner = mobius_scalar(self.w1, self.zeta * blaschke(self.lambda0, lambda));
        mobius_scalar(self.c0, lambda * inner)
    }
}

pub fn scalar_np_family(spec: &ScalarSchurSpec) -> Result<ScalarSchur> {
    let l = spec.lambda0.norm();
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::InvalidParameter(format!("|lambda0| = {l} not in (0, 1)")));
    }
    if spec.zeta.norm() > 1.0 + 1e-12 {
        return Err(Error::InvalidParameter(format!("|zeta| = {} > 1", spec.zeta.norm())));
    }
    let m0 = spec.c0.norm();
    if m0 > 1.0 + 1e-12 || spec.c1.norm() > 1.0 + 1e-12 {
        return Err(Error::InfeasibleData { distance: f64::INFINITY, bound: l });
    }
    let w1 = if m0 >= 1.0 - 1e-15 {
        // a unimodular value at 0 forces a constant function
        if (spec.c1 - spec.c0).norm() > 1e-12 {
            return Err(Error::InfeasibleData { distance: 1.0, bound: l });
        }
        r(0.0)
    } else {
        let dist = pseudo_hyperbolic(spec.c0, spec.c1);
        if dist > l + 1e-12 {
            return Err(Error::InfeasibleData { distance: dist, bound: l });
        }
        let w = mobius_scalar(-spec.c0, spec.c1) / spec.lambda0;
        if w.norm() > 1.0 {
            w / w.norm()
        } else {
            w
        }
    };
    let g = ScalarSchur { c0: spec.c0, w1, zeta: spec.zeta, lambda0: spec.lambda0 };
    let res = (g.eval(r(0.0)) - spec.c0).norm().max((g.eval(spec.lambda0) - spec.c1).norm());
    if res > 1e-10 {
        return Err(Error::EndpointViolation { residual: res });
    }
    if let Some(v) = disc_grid(16, 32, 0.999).into_iter().map(|z| g.eval(z).norm()).find(|v| *v > 1.0 + 1e-9) {
        return Err(Error::VerificationFailed(format!("|g| = {v} on the disc grid")));
    }
    Ok(g)
}

pub const LAMBDA0: f64 = -0.8;
pub const G_AT_ZERO: f64 = 0.3;
pub const G_AT_LAMBDA0: f64 = 0.625;

/// The target point (3/2, 3/4, 1/2).
pub fn target() -> TildePoint {
    TildePoint::new(vec![r(1.5), r(0.75)], r(0.5)).expect("finite")
}

/// The off-diagonal entry w = sqrt(15/32) of Z_y.
pub fn w_entry() -> f64 {
    (15.0f64 / 32.0).sqrt()
}

/// Unitary whose columns are unit eigenvectors of Z_y for -1 and 5/8.
pub fn build_uy() -> Mat2 {
    let w = w_entry();
    let (s39, s65, s2) = (39f64.sqrt(), 65f64.sqrt(), 2f64.sqrt());
    Mat2::new(r(8.0 * w / s39), r(4.0 * s2 * w / s65), r(-3.0 / s39), r(5.0 * s2 / s65))
}

/// [G_g(0)]_22 as a function of g(0).
pub fn corner_closed_form(g0: CNum) -> CNum {
    (g0 * 10.0 - 3.0) / 13.0
}

/// G_g = U diag(-1, g) U^*.
pub fn g_family(g: &ScalarSchur) -> GFunction {
    let u = build_uy();
    let (u1, u2) = (u.col1(), u.col2());
    GFunction::RankSplit { sigma: 1.0, y: -u1, x: u1, y_perp: u2, x_perp: u2, tail: *g }
}

/// psi_g = (3 F11, 3 F22, det F) with F = G_g diag(l, 1).
pub fn psi_g(g: &ScalarSchur) -> Result<Interpolant> {
    let l0 = r(LAMBDA0);
    let res = (g.eval(r(0.0)) - r(G_AT_ZERO)).norm().max((g.eval(l0) - r(G_AT_LAMBDA0)).norm());
    if res > 1e-10 {
        return Err(Error::EndpointViolation { residual: res });
    }
    let psi = Interpolant { n: 3, factor: FFunction::Weighted(Box::new(g_family(g))) };
    let res = max_diff(&psi.eval(l0), &target()).max(max_diff(&psi.eval(r(0.0)), &TildePoint::origin(3)));
    if res > 1e-9 {
        return Err(Error::EndpointViolation { residual: res });
    }
    Ok(psi)
}

/// k parameters on the circle of radius 1/2.
pub fn zeta_samples(k: usize) -> Vec<CNum> {
    (0..k).map(|m| c((TAU * m as f64 / k as f64).cos(), (TAU * m as f64 / k as f64).sin()) * 0.5).collect()
}

pub fn member(zeta: CNum) -> Result<(ScalarSchur, Interpolant)> {
    let spec = ScalarSchurSpec { c0: r(G_AT_ZERO), c1: r(G_AT_LAMBDA0), lambda0: r(LAMBDA0), zeta };
    let g = scalar_np_family(&spec)?;
    let psi = psi_g(&g)?;
    Ok((g, psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{det2, eigen2, op_norm};

    #[test]
    fn scalar_parameters() {
        let spec = ScalarSchurSpec { c0: r(0.3), c1: r(0.625), lambda0: r(-0.8), zeta: r(0.0) };
        let g = scalar_np_family(&spec).unwrap();
        assert!((g.w1 - r(-0.5)).norm() < 1e-15);
        assert!((g.eval(r(0.0)) - r(0.3)).norm() < 1e-12);
        assert!((g.eval(r(-0.8)) - r(0.625)).norm() < 1e-12);
        assert!((pseudo_hyperbolic(r(0.3), r(0.625)) - 0.4).abs() < 1e-15);
    }

    #[test]
    fn zeta_distinguishes() {
        let a = member(r(0.5)).unwrap().0.eval(r(0.3));
        let b = member(r(-0.5)).unwrap().0.eval(r(0.3));
        assert!((a - b).norm() > 1e-6);
    }

    #[test]
    fn infeasible_rejected() {
        let spec = ScalarSchurSpec { c0: r(0.0), c1: r(0.9), lambda0: r(0.5), zeta: r(0.0) };
        assert!(matches!(scalar_np_family(&spec), Err(Error::InfeasibleData { .. })));
    }

    #[test]
    fn unitary_and_reconstruction() {
        let u = build_uy();
        assert!((u.adjoint() * u).max_abs_diff(&Mat2::identity()) < 1e-12);
        let w = w_entry();
        let z = u * Mat2::diag(r(-1.0), r(0.625)) * u.adjoint();
        assert!(z.max_abs_diff(&Mat2::new(r(-0.625), r(w), r(w), r(0.25))) < 1e-12);
        let (e1, e2) = eigen2(&z);
        assert!((e1 + 1.0).norm() < 1e-12 && (e2 - 0.625).norm() < 1e-12);
        assert!((op_norm(&z) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn corner_formula() {
        assert!(corner_closed_form(r(0.3)).norm() < 1e-15);
        let (g, _) = member(c(0.2, 0.4)).unwrap();
        let at0 = g_family(&g).eval(r(0.0)).a22;
        assert!((at0 - corner_closed_form(g.eval(r(0.0)))).norm() < 1e-12);
    }

    #[test]
    fn psi_endpoints_and_det() {
        let (g, psi) = member(r(0.5)).unwrap();
        assert!(max_diff(&psi.eval(r(-0.8)), &target()) < 1e-9);
        let lam = c(0.2, -0.3);
        let f = psi.factor.eval(lam);
        assert!((det2(&f) + lam * g.eval(lam)).norm() < 1e-12);
        assert!((psi.eval(lam).q() + lam * g.eval(lam)).norm() < 1e-12);
    }
}
