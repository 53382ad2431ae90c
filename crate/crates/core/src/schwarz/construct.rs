//! Schur-class matrix functions G, F_j and the interpolant psi.

use serde::Serialize;

use crate::domains::{d_closed, in_jn, is_degenerate, membership_margin, RootBranch, TildePoint};
use crate::error::{Error, Result};
use crate::linalg::{
    binom_f, blaschke, herm_eigenvalues, herm_eigvec, herm_sqrt, op_norm, r, CNum, Mat2, Vec2, TOL,
};
use crate::nonuniqueness::{scalar_np_family, ScalarSchur, ScalarSchurSpec};
use crate::oracles::disc_grid;
use crate::schwarz::kernel::{build_zj, kz_matrix, oriented_pair, uv_vectors};
use crate::schwarz::SchwarzDatum;

/// Above this norm the Mobius route loses too much precision and the
/// rank-split construction is used.
const BOUNDARY_NORM: f64 = 1.0 - 1e-9;

/// A 2x2 Schur-class function G with prescribed G(l0) and [G(0)]_22 = 0.
#[derive(Debug, Clone, PartialEq)]
pub enum GFunction {
    /// G(l) = M_{-Z}(B(l) Q) with B the Blaschke factor at l0.
    Mobius { z: Mat2, q: Mat2, lambda0: CNum, left: Mat2, right: Mat2 },
    /// G(l) = sigma y x^* + g(l) y' x'^*, built from a singular value
    /// decomposition of the target.
    RankSplit { sigma: f64, y: Vec2, x: Vec2, y_perp: Vec2, x_perp: Vec2, tail: ScalarSchur },
}

impl GFunction {
    pub fn eval(&self, lambda: CNum) -> Mat2 {
        match self {
            GFunction::Mobius { z, q, lambda0, left, right } => {
                let x = q.scale(blaschke(*lambda0, lambda));
                let mid = (Mat2::identity() + z.adjoint() * x).inverse().unwrap_or(Mat2::zero());
                *left * (x + *z) * mid * *right
            }
            GFunction::RankSplit { sigma, y, x, y_perp, x_perp, tail } => {
                y.outer(x).scale(r(*sigma)) + y_perp.outer(x_perp).scale(tail.eval(lambda))
            }
        }
    }
}

fn mobius_g(z: Mat2, q: Mat2, lambda0: CNum) -> Result<GFunction> {
    let id = Mat2::identity();
    let nz = op_norm(&z);
    let left = herm_sqrt(&(id - z * z.adjoint()))?
        .inverse()
        .ok_or(Error::ContractionViolation { norm: nz })?;
    let right = herm_sqrt(&(id - z.adjoint() * z))?;
    Ok(GFunction::Mobius { z, q, lambda0, left, right })
}

/// Checks G(l0) = Z, [G(0)]_22 = 0 and the Schur bound on a 256-point grid.
pub fn verify_g(g: &GFunction, z: &Mat2, lambda0: CNum) -> Result<()> {
    let end = g.eval(lambda0).max_abs_diff(z);
    if end > TOL {
        return Err(Error::EndpointViolation { residual: end });
    }
    let corner = g.eval(r(0.0)).a22.norm();
    if corner > TOL {
        return Err(Error::EndpointViolation { residual: corner });
    }
    for lam in disc_grid(16, 16, 0.999) {
        let nm = op_norm(&g.eval(lam));
        if nm > 1.0 + TOL {
            return Err(Error::VerificationFailed(format!("|G| = {nm} on the disc grid")));
        }
    }
    Ok(())
}

/// Lemma-route construction for a strict contraction Z.
pub fn construct_g_mobius(z: &Mat2, lambda0: CNum) -> Result<GFunction> {
    let k = kz_matrix(z, lambda0.norm())?;
    let (_, lo) = herm_eigenvalues(&k);
    if lo > TOL {
        return Err(Error::DetTestFailed { det: k.det().re });
    }
    let alpha = herm_eigvec(&k.hermitian_part(), lo).conj();
    let (u, v) = uv_vectors(z, alpha)?;
    let a = u.scale(lambda0.conj());
    let (na, nv) = (a.norm(), v.norm());
    if nv > na * (1.0 + TOL) {
        return Err(Error::RankOneInfeasible { ratio: nv / na });
    }
    let q = if na == 0.0 { Mat2::zero() } else { a.outer(&v).scale(r(1.0 / (na * na))) };
    let g = mobius_g(*z, q, lambda0)?;
    verify_g(&g, z, lambda0)?;
    Ok(g)
}

/// Construction through the singular value decomposition of Z, valid up to
/// and including |Z| = 1 as long as Z is not unitary.
pub fn construct_g_rank_split(z: &Mat2, lambda0: CNum) -> Result<GFunction> {
    let m = z.adjoint() * *z;
    let (hi, lo) = herm_eigenvalues(&m);
    let sigma = hi.max(0.0).sqrt();
    if sigma > 1.0 + TOL {
        return Err(Error::ContractionViolation { norm: sigma });
    }
    if lo.max(0.0).sqrt() >= 1.0 - 1e-12 {
        return Err(Error::Infeasible("target is unitary".into()));
    }
    if sigma == 0.0 {
        return construct_g_mobius(z, lambda0);
    }
    let x = herm_eigvec(&m, hi);
    let y = z.apply(&x).scale(r(1.0 / sigma));
    let (x_perp, y_perp) = (x.perp(), y.perp());
    let c = z.apply(&x_perp).dot(&y_perp);
    let den = y_perp.v2 * x_perp.v2.conj();
    let top = y.v2 * x.v2.conj() * sigma;
    let spec = if den.norm() <= 1e-12 {
        if top.norm() > TOL {
            return Err(Error::Infeasible("corner entry cannot vanish".into()));
        }
        ScalarSchurSpec { c0: c, c1: c, lambda0, zeta: r(0.0) }
    } else {
        ScalarSchurSpec { c0: -top / den, c1: c, lambda0, zeta: r(0.0) }
    };
    let tail = scalar_np_family(&spec)?;
    let g = GFunction::RankSplit { sigma, y, x, y_perp, x_perp, tail };
    verify_g(&g, z, lambda0)?;
    Ok(g)
}

/// G in the Schur class with G(l0) = Z and [G(0)]_22 = 0.
/// Near the boundary the Mobius route loses digits at 0, so when its corner
/// residual is visible the exact route is tried too and the better one kept.
pub fn construct_g_for(z: &Mat2, lambda0: CNum) -> Result<GFunction> {
    if op_norm(z) < BOUNDARY_NORM {
        match construct_g_mobius(z, lambda0) {
            Ok(g) => {
                let res = endpoint_residual(&g, z, lambda0);
                if res <= 1e-13 {
                    return Ok(g);
                }
                return Ok(match construct_g_rank_split(z, lambda0) {
                    Ok(alt) if endpoint_residual(&alt, z, lambda0) < res => alt,
                    _ => g,
                });
            }
            Err(e) => return construct_g_rank_split(z, lambda0).map_err(|_| e),
        }
    }
    construct_g_rank_split(z, lambda0)
}

fn endpoint_residual(g: &GFunction, z: &Mat2, lambda0: CNum) -> f64 {
    g.eval(lambda0).max_abs_diff(z).max(g.eval(r(0.0)).a22.norm())
}

pub fn construct_g(d: &SchwarzDatum, j: usize) -> Result<GFunction> {
    let z = build_zj(d, j, RootBranch::Principal)?;
    construct_g_for(&z, d.lambda0)
}

/// A 2x2 Schur-class function F with F(0) strictly upper triangular.
#[derive(Debug, Clone, PartialEq)]
pub enum FFunction {
    /// l diag(d1, d2).
    Diagonal { d1: CNum, d2: CNum },
    /// G(l) diag(l, 1).
    Weighted(Box<GFunction>),
    /// P F(l)^T P with P the coordinate swap.
    Flipped(Box<FFunction>),
}

impl FFunction {
    pub fn eval(&self, lambda: CNum) -> Mat2 {
        match self {
            FFunction::Diagonal { d1, d2 } => Mat2::diag(*d1 * lambda, *d2 * lambda),
            FFunction::Weighted(g) => g.eval(lambda) * Mat2::diag(lambda, r(1.0)),
            FFunction::Flipped(f) => {
                let m = f.eval(lambda);
                Mat2::new(m.a22, m.a12, m.a21, m.a11)
            }
        }
    }
}

/// F_j in the Schur class with F_j(0) = [[0, *], [0, 0]] and
/// F_j(l0) = B_j, diag(B_j) = (y_j/C, y_{n-j}/C), det B_j = q.
pub fn construct_fj(d: &SchwarzDatum, j: usize) -> Result<FFunction> {
    d.y0.check_index(j)?;
    let (cj, p, rr) = oriented_pair(d, j);
    let q = d.y0.q();
    let l = d.lambda0.norm();
    let dj = d_closed(cj, p, rr, q).unwrap_or(f64::INFINITY);
    if dj > l + TOL {
        return Err(Error::ConditionFailed(format!("D = {dj} exceeds |lambda0| = {l} for j = {j}")));
    }
    let f = if is_degenerate(cj, p, rr, q) {
        let scale = r(1.0) / (d.lambda0 * cj);
        FFunction::Diagonal { d1: d.y0.y(j) * scale, d2: d.y0.y(d.n() - j) * scale }
    } else {
        let z = build_zj(d, j, RootBranch::Principal)?;
        let g = construct_g_for(&z, d.lambda0)?;
        if crate::domains::branch_a(&d.y0, j) {
            FFunction::Weighted(Box::new(g))
        } else {
            FFunction::Flipped(Box::new(FFunction::Weighted(Box::new(g))))
        }
    };
    let end = f.eval(d.lambda0);
    let res = [
        (end.a11 - d.y0.y(j) / cj).norm(),
        (end.a22 - d.y0.y(d.n() - j) / cj).norm(),
        (end.det() - q).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if res > TOL {
        return Err(Error::EndpointViolation { residual: res });
    }
    Ok(f)
}

/// psi(l) = pi(F(l)): the symmetrization lift of a single 2x2 block.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    pub n: usize,
    pub factor: FFunction,
}

impl Interpolant {
    pub fn eval(&self, lambda: CNum) -> TildePoint {
        lift_block(self.n, &self.factor.eval(lambda))
    }
}

/// The lift of one block into C^n: y_j = C F11, y_{n-j} = C F22, with the
/// averaged middle entry for even n, and q = det F.
pub fn lift_block(n: usize, f: &Mat2) -> TildePoint {
    let mut y = vec![r(0.0); n - 1];
    for j in 1..=n / 2 {
        let cj = binom_f(n, j);
        if 2 * j == n {
            y[j - 1] = (f.a11 + f.a22) * (cj / 2.0);
        } else {
            y[j - 1] = f.a11 * cj;
            y[n - j - 1] = f.a22 * cj;
        }
    }
    TildePoint::new(y, f.det()).expect("finite block")
}

pub fn build_psi(d: &SchwarzDatum) -> Result<Interpolant> {
    if !in_jn(&d.y0) {
        return Err(Error::NotInJn);
    }
    let f1 = construct_fj(d, 1)?;
    let psi = Interpolant { n: d.n(), factor: f1 };
    let at0 = max_diff(&psi.eval(r(0.0)), &TildePoint::origin(d.n()));
    if at0 > 1e-10 {
        return Err(Error::EndpointViolation { residual: at0 });
    }
    let end = max_diff(&psi.eval(d.lambda0), &d.y0);
    if end > 1e-8 {
        return Err(Error::EndpointViolation { residual: end });
    }
    Ok(psi)
}

pub fn max_diff(a: &TildePoint, b: &TildePoint) -> f64 {
    a.components()
        .iter()
        .zip(b.components())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Summary of closed and open membership of psi over a polar grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RangeSummary {
    pub points: usize,
    #[serde(with = "crate::io::float")]
    pub min_margin: f64,
    /// smallest margin over the grid points of radius at most 1 - 1e-3
    #[serde(with = "crate::io::float")]
    pub min_inner_margin: f64,
}

impl RangeSummary {
    pub fn closed_ok(&self) -> bool {
        self.min_margin >= -1e-8
    }

    pub fn open_ok(&self) -> bool {
        self.min_inner_margin > 0.0
    }
}

pub fn range_check(psi: &Interpolant, rings: usize, spokes: usize) -> RangeSummary {
    let pts = disc_grid(rings, spokes, 1.0 - 1e-6);
    let mut min_margin = f64::INFINITY;
    let mut min_inner = f64::INFINITY;
    for lam in &pts {
        let m = membership_margin(&psi.eval(*lam));
        min_margin = min_margin.min(m);
        if lam.norm() <= 1.0 - 1e-3 {
            min_inner = min_inner.min(m);
        }
    }
    RangeSummary { points: pts.len(), min_margin, min_inner_margin: min_inner }
}
