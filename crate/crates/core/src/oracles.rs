//! Brute-force verifiers and seeded samplers.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domains::{sym_map, SymPoint, TildePoint};
use crate::error::Result;
use crate::linalg::{binom_f, c, r, CNum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSpec {
    pub torus_points: usize,
    pub disc_rings: usize,
    pub refine_iters: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { torus_points: 4096, disc_rings: 16, refine_iters: 2 }
    }
}

impl GridSpec {
    pub fn with_torus(torus_points: usize) -> Self {
        Self { torus_points: torus_points.max(64), ..Self::default() }
    }
}

fn unit(theta: f64) -> CNum {
    c(theta.cos(), theta.sin())
}

fn golden_max<F: Fn(CNum) -> Result<CNum>>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(unit(x1))?.norm();
    let mut f2 = f(unit(x2))?.norm();
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(unit(x2))?.norm();
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(unit(x1))?.norm();
        }
    }
    Ok(if f1 >= f2 { (f1, x1) } else { (f2, x2) })
}

/// Supremum of |f| over the unit circle: grid scan, then golden-section
/// refinement around the best local maxima.
pub fn sup_on_torus<F: Fn(CNum) -> Result<CNum>>(f: F, grid: GridSpec) -> Result<(f64, CNum)> {
    let n = grid.torus_points.max(64);
    let step = TAU / n as f64;
    let vals = (0..n)
        .map(|k| f(unit(k as f64 * step)).map(|v| v.norm()))
        .collect::<Result<Vec<f64>>>()?;
    let mut peaks: Vec<usize> = (0..n)
        .filter(|&k| vals[k] >= vals[(k + n - 1) % n] && vals[k] >= vals[(k + 1) % n])
        .collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    peaks.truncate(3);
    let mut best = (vals[peaks[0]], peaks[0] as f64 * step);
    for &k in &peaks {
        let mut centre = k as f64 * step;
        let mut half = step;
        for _ in 0..grid.refine_iters {
            let (v, t) = golden_max(&f, centre - half, centre + half)?;
            if v > best.0 {
                best = (v, t);
            }
            centre = t;
            half /= 8.0;
        }
    }
    Ok((best.0, unit(best.1)))
}

/// Signed margin for the bilinear polynomial a0 - a1 z - a2 w + a3 z w to be
/// zero-free on the closed bidisc: eliminating w leaves the zero
/// w(z) = (a0 - a1 z)/(a2 - a3 z), so the margin is 1 - sup over the circle of
/// |(a2 - a3 z)/(a0 - a1 z)|, provided a0 - a1 z has no zero in the disc.
pub fn bidisc_nonvanishing(a0: CNum, a1: CNum, a2: CNum, a3: CNum) -> f64 {
    let (m0, m1) = (a0.norm(), a1.norm());
    if m1 >= m0 {
        return if m0 == 0.0 { -1.0 } else { (m0 - m1) / m0.max(m1) };
    }
    let h = |z: CNum| Ok((a2 - a3 * z) / (a0 - a1 * z));
    match sup_on_torus(h, GridSpec::with_torus(1024)) {
        Ok((sup, _)) => 1.0 - sup,
        Err(_) => f64::NEG_INFINITY,
    }
}

/// Number of zeros of g inside the unit disc, by the argument principle on
/// an n-point circle grid. Zeros on the circle itself make the count unstable.
pub fn zeros_inside<F: Fn(CNum) -> CNum>(g: F, n: usize) -> i64 {
    let step = TAU / n as f64;
    let mut total = 0.0;
    let mut prev = g(unit(0.0));
    for k in 1..=n {
        let cur = g(unit(k as f64 * step));
        total += (cur / prev).arg();
        prev = cur;
    }
    (total / TAU).round() as i64
}

/// Polar grid of `rings * spokes` points with radii rmax*k/rings.
pub fn disc_grid(rings: usize, spokes: usize, rmax: f64) -> Vec<CNum> {
    let mut pts = Vec::with_capacity(rings * spokes);
    for k in 1..=rings {
        let rad = rmax * k as f64 / rings as f64;
        for m in 0..spokes {
            // stagger the rings so spokes do not align
            let theta = TAU * (m as f64 + 0.5 * (k % 2) as f64) / spokes as f64;
            pts.push(unit(theta) * rad);
        }
    }
    pts
}

/// Root finder for the monic polynomial X^n + a_{n-1} X^{n-1} + ... + a_0
/// (coefficients given lowest degree first) by Durand-Kerner iteration.
pub fn poly_roots(lower: &[CNum]) -> Vec<CNum> {
    let n = lower.len();
    let eval = |x: CNum| {
        let mut acc = r(1.0);
        for k in (0..n).rev() {
            acc = acc * x + lower[k];
        }
        acc
    };
    let bound = 1.0 + lower.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let mut roots: Vec<CNum> =
        (0..n).map(|k| unit(0.4 + TAU * k as f64 / n as f64) * (0.9 * bound)).collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = r(1.0);
            for k in 0..n {
                if k != i {
                    den *= roots[i] - roots[k];
                }
            }
            if den.norm() == 0.0 {
                den = r(1e-300);
            }
            let step = eval(roots[i]) / den;
            roots[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    roots
}

/// Independent ChaCha stream for sample `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform point in the disc of radius `radius`.
pub fn uniform_disc<R: Rng>(rng: &mut R, radius: f64) -> CNum {
    let rad = radius * rng.gen::<f64>().sqrt();
    unit(TAU * rng.gen::<f64>()) * rad
}

/// n i.i.d. uniform points of the disc of radius `radius`.
pub fn uniform_tuple<R: Rng>(rng: &mut R, n: usize, radius: f64) -> Vec<CNum> {
    (0..n).map(|_| uniform_disc(rng, radius)).collect()
}

pub fn sample_gn(n: usize, count: usize, radius: f64, seed: u64) -> Vec<SymPoint> {
    (0..count)
        .map(|i| {
            let mut rng = substream(seed, i as u64);
            sym_map(&uniform_tuple(&mut rng, n, radius))
        })
        .collect()
}

/// A point of the extended symmetrized polydisc drawn through its beta
/// parametrization, together with the beta that generated it.
pub fn draw_tilde<R: Rng>(rng: &mut R, n: usize) -> (TildePoint, Vec<CNum>) {
    let mut beta = vec![r(0.0); n - 1];
    for j in 1..=n / 2 {
        let cj = binom_f(n, j);
        if 2 * j == n {
            let rad = 0.5 * cj * rng.gen::<f64>();
            beta[j - 1] = unit(TAU * rng.gen::<f64>()) * rad;
            continue;
        }
        let (ra, rb) = loop {
            let ra = cj * rng.gen::<f64>();
            let rb = cj * rng.gen::<f64>();
            if ra + rb < cj {
                break (ra, rb);
            }
        };
        beta[j - 1] = unit(TAU * rng.gen::<f64>()) * ra;
        beta[n - j - 1] = unit(TAU * rng.gen::<f64>()) * rb;
    }
    let q = uniform_disc(rng, 1.0);
    let y = (1..n).map(|j| beta[j - 1] + beta[n - j - 1].conj() * q).collect();
    (TildePoint::new(y, q).expect("finite sample"), beta)
}

/// Uniform point of the bounding polydisc |y_j| < C(n, j), |q| < 1.
pub fn draw_bounding<R: Rng>(rng: &mut R, n: usize) -> TildePoint {
    let y = (1..n).map(|j| uniform_disc(rng, binom_f(n, j))).collect();
    let q = uniform_disc(rng, 1.0);
    TildePoint::new(y, q).expect("finite sample")
}

pub fn sample_tilde(n: usize, count: usize, seed: u64) -> Vec<TildePoint> {
    (0..count).map(|i| draw_tilde(&mut substream(seed, i as u64), n).0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::blaschke;

    #[test]
    fn constant_sup() {
        let (s, _) = sup_on_torus(|_| Ok(c(0.3, 0.4)), GridSpec::default()).unwrap();
        assert!((s - 0.5).abs() < 1e-15);
    }

    #[test]
    fn blaschke_has_unit_boundary_modulus() {
        let (s, _) = sup_on_torus(|z| Ok(blaschke(c(0.3, -0.5), z)), GridSpec::default()).unwrap();
        assert!((s - 1.0).abs() < 1e-9);
    }

    #[test]
    fn refinement_finds_off_grid_peak() {
        // |1/(z - a)| peaks at z = a/|a|, deliberately between grid points
        let a = unit(0.123_456) * 1.05;
        let (s, arg) = sup_on_torus(|z| Ok((z - a).inv()), GridSpec::with_torus(64)).unwrap();
        assert!((s - 20.0).abs() < 1e-6, "{s}");
        assert!((arg.arg() - 0.123_456).abs() < 1e-6);
    }

    #[test]
    fn zero_count() {
        assert_eq!(zeros_inside(|z| (z - r(0.5)) * (z - c(0.0, 2.0)), 1024), 1);
        assert_eq!(zeros_inside(|z| (z - r(0.5)) * (z + c(0.1, 0.2)), 1024), 2);
        assert_eq!(zeros_inside(|_| r(3.0), 1024), 0);
    }

    #[test]
    fn roots_of_expanded_product() {
        let zs = [c(0.3, 0.0), c(0.0, -0.4), c(0.5, 0.1)];
        // X^3 - e1 X^2 + e2 X - e3
        let s = sym_map(&zs);
        let lower = [-s.p(), s.ss()[1], -s.ss()[0]];
        let mut roots = poly_roots(&lower);
        for z in zs {
            let (i, d) = roots
                .iter()
                .enumerate()
                .map(|(i, w)| (i, (w - z).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d < 1e-12);
            roots.remove(i);
        }
    }

    #[test]
    fn samplers_are_deterministic() {
        assert_eq!(sample_tilde(4, 5, 9), sample_tilde(4, 5, 9));
        assert_ne!(sample_tilde(4, 5, 9), sample_tilde(4, 5, 10));
        assert!(sample_gn(3, 0, 1.0, 1).is_empty());
    }
}
