//! The 2x2 kernel of the constructive interpolation step: Z_j, the test
//! matrix K_Z(rho) and the vectors u(alpha), v(alpha).

use crate::domains::{is_degenerate, RootBranch};
use crate::error::{Error, Result};
use crate::linalg::{herm_sqrt, op_norm, r, CNum, Mat2, Vec2};
use crate::schwarz::SchwarzDatum;

/// (C, p, r) for the pair j: p is the entry divided by lambda0 and r the one
/// kept, following the branch rule.
pub(crate) fn oriented_pair(d: &SchwarzDatum, j: usize) -> (f64, CNum, CNum) {
    let (cj, a, b, _) = crate::domains::pair(&d.y0, j);
    if crate::domains::branch_a(&d.y0, j) {
        (cj, a, b)
    } else {
        (cj, b, a)
    }
}

/// w with w^2 = (p r - C^2 q)/(C^2 lambda0).
pub(crate) fn w_root(cj: f64, p: CNum, rr: CNum, q: CNum, lambda0: CNum, branch: RootBranch) -> CNum {
    branch.apply(((p * rr - q * (cj * cj)) / (lambda0 * (cj * cj))).sqrt())
}

/// Z_j = [[p/(C l0), w], [w, r/C]] for the oriented pair of j.
pub fn build_zj(d: &SchwarzDatum, j: usize, root_branch: RootBranch) -> Result<Mat2> {
    d.y0.check_index(j)?;
    let (cj, p, rr) = oriented_pair(d, j);
    let q = d.y0.q();
    if is_degenerate(cj, p, rr, q) {
        return Err(Error::DegenerateProduct { j });
    }
    let w = w_root(cj, p, rr, q, d.lambda0, root_branch);
    Ok(Mat2::new(p / (d.lambda0 * cj), w, w, rr / cj))
}

fn strict_contraction(z: &Mat2) -> Result<()> {
    let nz = op_norm(z);
    if nz >= 1.0 - 1e-12 {
        Err(Error::ContractionViolation { norm: nz })
    } else {
        Ok(())
    }
}

/// The test matrix K_Z(rho). Its quadratic form satisfies
/// <K conj(alpha), conj(alpha)> = |v(alpha)|^2 - rho^2 |u(alpha)|^2.
pub fn kz_matrix(z: &Mat2, rho: f64) -> Result<Mat2> {
    strict_contraction(z)?;
    let id = Mat2::identity();
    let zs = z.adjoint();
    let rho2 = r(rho * rho);
    let a = (id - zs * *z).inverse().ok_or(Error::ContractionViolation { norm: op_norm(z) })?;
    let b = (id - *z * zs).inverse().ok_or(Error::ContractionViolation { norm: op_norm(z) })?;
    let k11 = ((id - (zs * *z).scale(rho2)) * a).a11;
    let k12 = (b * *z).a21 * (r(1.0) - rho2);
    let k21 = (zs * b).a12 * (r(1.0) - rho2);
    let k22 = ((*z * zs - id.scale(rho2)) * b).a22;
    Ok(Mat2::new(k11, k12, k21, k22))
}

/// u(alpha) = (1-ZZ*)^{-1/2} (alpha1 Z e1 + alpha2 e2),
/// v(alpha) = -(1-Z*Z)^{-1/2} (alpha1 e1 + alpha2 Z* e2).
pub fn uv_vectors(z: &Mat2, alpha: Vec2) -> Result<(Vec2, Vec2)> {
    strict_contraction(z)?;
    let id = Mat2::identity();
    let zs = z.adjoint();
    let left = herm_sqrt(&(id - *z * zs))?
        .inverse()
        .ok_or(Error::ContractionViolation { norm: op_norm(z) })?;
    let right = herm_sqrt(&(id - zs * *z))?
        .inverse()
        .ok_or(Error::ContractionViolation { norm: op_norm(z) })?;
    let u = left.apply(&(z.col1().scale(alpha.v1) + Vec2::new(r(0.0), alpha.v2)));
    let v = -right.apply(&(Vec2::new(alpha.v1, r(0.0)) + zs.col2().scale(alpha.v2)));
    Ok((u, v))
}

/// Closed-form quantities attached to a non-degenerate pair: the scaled test
/// matrix K_Z(|l0|) det(1 - Z*Z) written in the data, and k, k_j, k_{n-j}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelClosedForm {
    pub scaled_k: Mat2,
    pub k: f64,
    pub k_j: f64,
    pub k_nj: f64,
    pub x_j: f64,
    pub x_nj: f64,
}

pub fn kernel_closed_form(d: &SchwarzDatum, j: usize, root_branch: RootBranch) -> Result<KernelClosedForm> {
    d.y0.check_index(j)?;
    let (cj, p, rr) = oriented_pair(d, j);
    let q = d.y0.q();
    if is_degenerate(cj, p, rr, q) {
        return Err(Error::DegenerateProduct { j });
    }
    let w = w_root(cj, p, rr, q, d.lambda0, root_branch);
    let c2 = cj * cj;
    let l = d.lambda0.norm();
    let l2 = l * l;
    let m = (p * rr - q * c2).norm() / c2;
    let (pp, rq, qq) = (p.norm_sqr() / c2, rr.norm_sqr() / c2, q.norm_sqr());
    let e11 = 1.0 - pp - rq + qq - m * (l + 1.0 / l);
    let e22 = -l2 + pp + rq - qq / l2 + m * (l + 1.0 / l);
    let e12 = (w + q / d.lambda0 * w.conj()) * (1.0 - l2);
    let e21 = (w.conj() + q.conj() / d.lambda0.conj() * w) * (1.0 - l2);
    let k_j = l * (1.0 - pp - rq / l2 + qq / l2);
    let k_nj = l * (1.0 - pp / l2 - rq + qq / l2);
    Ok(KernelClosedForm {
        scaled_k: Mat2::new(r(e11), e12, e21, r(e22)),
        k: 2.0 * m,
        k_j,
        k_nj,
        x_j: k_j / m,
        x_nj: k_nj / m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::TildePoint;
    use crate::linalg::{c, det2};

    fn worked() -> SchwarzDatum {
        SchwarzDatum::new(r(-0.8), TildePoint::new(vec![r(1.5), r(0.75)], r(0.5)).unwrap()).unwrap()
    }

    #[test]
    fn zy_of_worked_datum() {
        let z = build_zj(&worked(), 1, RootBranch::Principal).unwrap();
        let w = (15.0f64 / 32.0).sqrt();
        assert!((z.a12 * z.a12 - r(15.0 / 32.0)).norm() < 1e-15);
        assert!(z.max_abs_diff(&Mat2::new(r(-0.625), r(w), r(w), r(0.25))) < 1e-15);
        assert!((op_norm(&z) - 1.0).abs() < 1e-12);
        let zn = build_zj(&worked(), 1, RootBranch::Negated).unwrap();
        assert_eq!(zn.a12, -z.a12);
        assert!((op_norm(&zn) - op_norm(&z)).abs() < 1e-15);
    }

    #[test]
    fn determinant_with_weight_is_q() {
        let d = worked();
        let z = build_zj(&d, 1, RootBranch::Principal).unwrap();
        let b = z * Mat2::diag(d.lambda0, r(1.0));
        assert!((det2(&b) - r(0.5)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_rejected() {
        let d = SchwarzDatum::new(r(0.5), TildePoint::origin(3)).unwrap();
        assert!(matches!(build_zj(&d, 1, RootBranch::Principal), Err(Error::DegenerateProduct { .. })));
    }

    #[test]
    fn kz_at_zero() {
        let k = kz_matrix(&Mat2::zero(), 0.6).unwrap();
        assert!(k.max_abs_diff(&Mat2::diag(r(1.0), r(-0.36))) < 1e-15);
        assert!(kz_matrix(&Mat2::identity(), 0.5).is_err());
    }

    #[test]
    fn kz_quadratic_form() {
        let z = Mat2::new(c(0.2, 0.1), c(-0.3, 0.2), c(0.1, 0.0), c(0.4, -0.2));
        let rho = 0.7;
        let k = kz_matrix(&z, rho).unwrap();
        let alpha = Vec2::new(c(0.3, -0.8), c(1.1, 0.4));
        let (u, v) = uv_vectors(&z, alpha).unwrap();
        let ab = alpha.conj();
        let form = k.apply(&ab).dot(&ab);
        assert!((form.re - (v.norm_sqr() - rho * rho * u.norm_sqr())).abs() < 1e-12);
        assert!(form.im.abs() < 1e-12);
    }

    #[test]
    fn uv_at_zero() {
        let (u, v) = uv_vectors(&Mat2::zero(), Vec2::new(r(0.0), r(1.0))).unwrap();
        assert_eq!(u, Vec2::new(r(0.0), r(1.0)));
        assert!(v.norm() == 0.0);
        let alpha = Vec2::new(c(0.2, 0.3), c(-0.5, 0.1));
        let z = Mat2::new(c(0.2, 0.1), c(-0.3, 0.2), c(0.1, 0.0), c(0.4, -0.2));
        let (u1, v1) = uv_vectors(&z, alpha).unwrap();
        let (u2, v2) = uv_vectors(&z, alpha.scale(c(0.0, 2.0))).unwrap();
        assert!((u1.scale(c(0.0, 2.0)) - u2).norm() < 1e-14);
        assert!((v1.scale(c(0.0, 2.0)) - v2).norm() < 1e-14);
    }
}
