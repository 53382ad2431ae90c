//! Seeded equivalence and identity fuzzing. Each sample draws from its own
//! ChaCha substream, samples run in parallel, and results are folded in
//! index order so a report depends only on (suite, n, count, seed).

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domains::{
    costara_sup, d_closed, d_norm, membership_margin, membership_sym, phi, scale_equiv, sym_map,
    thm22_margins, SymPoint, TildePoint, Which,
};
use crate::linalg::{binom_f, c, det2, op_norm, r, CNum, Mat2, TOL};
use crate::oracles::{
    draw_bounding, draw_tilde, poly_roots, substream, sup_on_torus, uniform_disc, uniform_tuple,
    GridSpec,
};
use crate::schwarz::{
    build_psi, build_zj, costara_schwarz_bound, hard_disagreement, kernel_closed_form, kz_matrix,
    max_diff, range_check, report, SchwarzDatum, EQUIVALENT,
};
use crate::domains::RootBranch;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Thm22,
    Thm37,
    Lemma36,
    Lemma41,
    Scaling,
    G2,
    Thm55,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        Some(match s {
            "thm22" => Suite::Thm22,
            "thm37" => Suite::Thm37,
            "lemma36" => Suite::Lemma36,
            "lemma41" => Suite::Lemma41,
            "scaling" => Suite::Scaling,
            "g2" => Suite::G2,
            "thm55" => Suite::Thm55,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm22 => "thm22",
            Suite::Thm37 => "thm37",
            Suite::Lemma36 => "lemma36",
            Suite::Lemma41 => "lemma41",
            Suite::Scaling => "scaling",
            Suite::G2 => "g2",
            Suite::Thm55 => "thm55",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Real(#[serde(with = "crate::io::float")] pub f64);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub index: u64,
    pub reason: String,
    pub components: Vec<[f64; 2]>,
    pub lambda0: Option<[f64; 2]>,
    pub margins: BTreeMap<String, Real>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub suite: Suite,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub labels: Vec<String>,
    /// agreement[a][b]: samples on which conditions a and b have the same truth value
    pub agreement: Vec<Vec<u64>>,
    pub soft_disagreements: u64,
    pub hard_disagreements: u64,
    pub skipped: u64,
    /// worst value over the samples of each tracked quantity
    pub metrics: BTreeMap<String, Real>,
    pub counterexamples: Vec<Counterexample>,
    pub passed: bool,
}

const MAX_COUNTEREXAMPLES: usize = 8;

#[derive(Default)]
struct Outcome {
    truth: Vec<bool>,
    soft: bool,
    hard: Option<Counterexample>,
    skipped: bool,
    /// (name, value, larger_is_worse)
    metrics: Vec<(&'static str, f64, bool)>,
}

fn comps(v: &[CNum]) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn counterexample(index: u64, reason: &str, point: &[CNum], lambda0: Option<CNum>, margins: &[(String, f64)]) -> Counterexample {
    Counterexample {
        index,
        reason: reason.to_string(),
        components: comps(point),
        lambda0: lambda0.map(|l| [l.re, l.im]),
        margins: margins.iter().map(|(k, v)| (k.clone(), Real(*v))).collect(),
    }
}

fn run<F>(suite: Suite, n: usize, count: usize, seed: u64, labels: &[&str], eval: F) -> FuzzReport
where
    F: Fn(u64, &mut ChaCha8Rng) -> Outcome + Sync,
{
    let outcomes: Vec<Outcome> = (0..count as u64)
        .into_par_iter()
        .map(|i| eval(i, &mut substream(seed, i)))
        .collect();
    let k = labels.len();
    let mut agreement = vec![vec![0u64; k]; k];
    let mut soft = 0;
    let mut hard = 0;
    let mut skipped = 0;
    let mut metrics: BTreeMap<String, Real> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for o in outcomes {
        if o.skipped {
            skipped += 1;
            continue;
        }
        for (row, ta) in agreement.iter_mut().zip(&o.truth) {
            for (cell, tb) in row.iter_mut().zip(&o.truth) {
                if ta == tb {
                    *cell += 1;
                }
            }
        }
        if let Some(ce) = o.hard {
            hard += 1;
            if counterexamples.len() < MAX_COUNTEREXAMPLES {
                counterexamples.push(ce);
            }
        } else if o.soft {
            soft += 1;
        }
        for (name, v, worse_up) in o.metrics {
            let e = metrics
                .entry(name.to_string())
                .or_insert(Real(if worse_up { f64::NEG_INFINITY } else { f64::INFINITY }));
            e.0 = if worse_up { e.0.max(v) } else { e.0.min(v) };
        }
    }
    FuzzReport {
        suite,
        n,
        count,
        seed,
        labels: labels.iter().map(|s| s.to_string()).collect(),
        agreement,
        soft_disagreements: soft,
        hard_disagreements: hard,
        skipped,
        metrics,
        counterexamples,
        passed: hard == 0,
    }
}

pub fn run_suite(suite: Suite, n: usize, count: usize, seed: u64) -> FuzzReport {
    match suite {
        Suite::Thm22 => thm22(n, count, seed),
        Suite::Thm37 => thm37(n, count, seed),
        Suite::Lemma36 => lemma36(n, count, seed),
        Suite::Lemma41 => lemma41(count, seed),
        Suite::Scaling => scaling(n, count, seed),
        Suite::G2 => g2(count, seed),
        Suite::Thm55 => thm55(n, count, seed),
    }
}

const THM22_LABELS: [&str; 10] = ["2", "3", "3'", "4", "4'", "5", "5'", "6", "7", "9"];

/// Characterization fuzz: half of the samples through the beta sampler,
/// half uniform in the bounding polydisc.
pub fn thm22(n: usize, count: usize, seed: u64) -> FuzzReport {
    run(Suite::Thm22, n, count, seed, &THM22_LABELS, |i, rng| {
        let inside = i % 2 == 0;
        let y = if inside { draw_tilde(rng, n).0 } else { draw_bounding(rng, n) };
        let m = thm22_margins(&y);
        let list: Vec<(String, f64)> = THM22_LABELS.iter().map(|k| (k.to_string(), m[k])).collect();
        let mut o = Outcome { truth: list.iter().map(|(_, v)| Which::Open.holds(*v)).collect(), ..Default::default() };
        let eq: Vec<f64> = list[1..].iter().map(|(_, v)| *v).collect();
        let fail = |reason: &str| Some(counterexample(i, reason, &y.components(), None, &list));
        if hard_disagreement(eq.iter().copied()) {
            o.hard = fail("equivalent conditions disagree");
        }
        let (m2, m4) = (m["2"], m["4"]);
        if m2.abs() >= 1e-6 && m4.abs() > TOL && (m2 > 0.0) != (m4 > 0.0) {
            o.hard = fail("bidisc condition disagrees with (4)");
        }
        if inside && membership_margin(&y) < -TOL {
            o.hard = fail("sampled point rejected");
        }
        o.soft = o.hard.is_none() && o.truth[1..].iter().any(|t| *t != o.truth[1]);
        // relative gap between the closed form and the circle maximum, on a
        // quarter of the samples to bound the cost
        let mut gap: f64 = 0.0;
        for j in (1..n).filter(|_| i % 4 == 0) {
            if let Ok(dj) = d_norm(j, &y) {
                if let Ok((s, _)) = sup_on_torus(|z| phi(j, z, &y), GridSpec::default()) {
                    gap = gap.max((s - dj).abs() / dj.max(1.0));
                }
            }
        }
        if gap > 1e-6 {
            o.hard = fail("closed form of D_j differs from the circle maximum");
        }
        o.metrics.push(("d_norm_grid_gap", gap, true));
        o
    })
}

/// Draws a Schwarz datum; half of the time |l0| exceeds the condition (3)
/// threshold so both outcomes are well represented.
pub fn draw_datum(rng: &mut ChaCha8Rng, n: usize) -> Option<SchwarzDatum> {
    let y = draw_tilde(rng, n).0;
    let q = y.q();
    let dmax = (1..=n / 2)
        .map(|j| {
            let (cj, a, b) = (binom_f(n, j), y.y(j), y.y(n - j));
            let (p, rr) = if crate::domains::branch_a(&y, j) { (a, b) } else { (b, a) };
            d_closed(cj, p, rr, q).unwrap_or(f64::INFINITY)
        })
        .fold(0.0, f64::max);
    let modulus = if rng.gen::<bool>() && dmax < 1.0 {
        dmax + (1.0 - dmax) * rng.gen::<f64>()
    } else {
        rng.gen::<f64>()
    };
    let modulus = modulus.clamp(1e-3, 1.0 - 1e-9);
    let theta = TAU * rng.gen::<f64>();
    SchwarzDatum::new(c(theta.cos(), theta.sin()) * modulus, y).ok()
}

const THM37_LABELS: [&str; 10] = ["2", "3", "4", "5", "6", "7", "8", "9", "10", "11"];

pub fn thm37(n: usize, count: usize, seed: u64) -> FuzzReport {
    run(Suite::Thm37, n, count, seed, &THM37_LABELS, |i, rng| {
        let Some(d) = draw_datum(rng, n) else {
            return Outcome { skipped: true, ..Default::default() };
        };
        let rep = report(&d);
        let list: Vec<(String, f64)> = rep.cond.iter().map(|(k, v)| (k.to_string(), v.margin)).collect();
        let mut o = Outcome { truth: rep.cond.values().map(|v| v.holds).collect(), ..Default::default() };
        let fail = |reason: &str| Some(counterexample(i, reason, &d.y0.components(), Some(d.lambda0), &list));
        if !rep.consistency {
            o.hard = fail("equivalent conditions disagree");
        }
        if rep.margin(2) > TOL && rep.margin(3) < -TOL {
            o.hard = fail("(2) holds but (3) fails");
        }
        if rep.holds(3) && rep.margin(5) == -1.0 {
            o.hard = fail("construction of F_j failed under (3)");
        }
        let truth: Vec<bool> = EQUIVALENT.iter().map(|k| rep.holds(*k)).collect();
        o.soft = o.hard.is_none() && truth.iter().any(|t| *t != truth[0]);
        if n <= 3 && rep.holds(3) {
            match build_psi(&d) {
                Ok(psi) => {
                    let end = max_diff(&psi.eval(d.lambda0), &d.y0);
                    let start = max_diff(&psi.eval(r(0.0)), &TildePoint::origin(n));
                    let rs = range_check(&psi, 4, 16);
                    o.metrics.push(("endpoint_residual", end, true));
                    o.metrics.push(("origin_residual", start, true));
                    o.metrics.push(("range_min_margin", rs.min_margin, false));
                    if end > 1e-8 || start > 1e-10 || !rs.closed_ok() {
                        o.hard = fail("synthesized interpolant fails verification");
                    }
                }
                Err(e) => o.hard = fail(&format!("synthesis failed: {e}")),
            }
        }
        o
    })
}

/// Strict, non-degenerate data: |l0| exceeds the condition (3) quantity by
/// at least 1e-3 for every j.
pub fn draw_strict_datum(rng: &mut ChaCha8Rng, n: usize) -> SchwarzDatum {
    loop {
        let y = draw_tilde(rng, n).0;
        let q = y.q();
        let mut dmax: f64 = 0.0;
        let mut degenerate = false;
        for j in 1..=n / 2 {
            let (cj, a, b) = (binom_f(n, j), y.y(j), y.y(n - j));
            degenerate |= (a * b - q * (cj * cj)).norm() < 1e-6;
            let (p, rr) = if crate::domains::branch_a(&y, j) { (a, b) } else { (b, a) };
            dmax = dmax.max(d_closed(cj, p, rr, q).unwrap_or(f64::INFINITY));
        }
        if degenerate || dmax + 1e-3 >= 1.0 - 1e-3 {
            continue;
        }
        let lo = dmax + 1e-3;
        let modulus = lo + (1.0 - 1e-3 - lo) * rng.gen::<f64>();
        let theta = TAU * rng.gen::<f64>();
        if let Ok(d) = SchwarzDatum::new(c(theta.cos(), theta.sin()) * modulus, y) {
            return d;
        }
    }
}

const LEMMA36_LABELS: [&str; 4] = ["entries", "determinant", "x_bounds", "det_k_sign"];

pub fn lemma36(n: usize, count: usize, seed: u64) -> FuzzReport {
    run(Suite::Lemma36, n, count, seed, &LEMMA36_LABELS, |i, rng| {
        let d = draw_strict_datum(rng, n);
        let l = d.lambda0.norm();
        let mut entry: f64 = 0.0;
        let mut det_gap: f64 = 0.0;
        let mut x_min = f64::INFINITY;
        let mut det_k = f64::NEG_INFINITY;
        let mut norm_z: f64 = 0.0;
        for j in 1..=n / 2 {
            let z = build_zj(&d, j, RootBranch::Principal).expect("non-degenerate");
            let cf = kernel_closed_form(&d, j, RootBranch::Principal).expect("non-degenerate");
            let k = kz_matrix(&z, l).expect("strict contraction");
            let scale = (Mat2::identity() - z.adjoint() * z).det();
            entry = entry.max(k.scale(scale).max_abs_diff(&cf.scaled_k));
            det_gap = det_gap.max((det2(&cf.scaled_k) + r((cf.k - cf.k_j) * (cf.k - cf.k_nj))).norm());
            x_min = x_min.min(cf.x_j).min(cf.x_nj);
            det_k = det_k.max(det2(&k).re);
            norm_z = norm_z.max(op_norm(&z));
        }
        let truth = vec![entry <= 1e-10, det_gap <= 1e-10, x_min >= 2.0 - TOL, det_k <= TOL && norm_z < 1.0];
        let mut o = Outcome { truth: truth.clone(), ..Default::default() };
        if truth.iter().any(|t| !t) {
            let list = vec![
                ("entries".to_string(), entry),
                ("determinant".to_string(), det_gap),
                ("x_min".to_string(), x_min),
                ("det_k".to_string(), det_k),
                ("norm_z".to_string(), norm_z),
            ];
            o.hard = Some(counterexample(i, "identity violated", &d.y0.components(), Some(d.lambda0), &list));
        }
        o.metrics.push(("entry_residual", entry, true));
        o.metrics.push(("determinant_residual", det_gap, true));
        o.metrics.push(("x_min", x_min, false));
        o.metrics.push(("det_k_max", det_k, true));
        o.metrics.push(("norm_z_max", norm_z, true));
        o
    })
}

/// Slack of the comparison between the two D-type quotients for n = 3 when
/// |y2| <= |y1|.
pub fn lemma41_slack(y: &TildePoint) -> f64 {
    let (y1, y2, q) = (y.y(1), y.y(2), y.q());
    let prod = (y1 * y2 - q * 9.0).norm();
    let lhs = ((y2 * 3.0 - y1.conj() * q * 3.0).norm() + prod) / (9.0 - y1.norm_sqr());
    let rhs = ((y1 * 3.0 - y2.conj() * q * 3.0).norm() + prod) / (9.0 - y2.norm_sqr());
    rhs - lhs
}

pub fn lemma41(count: usize, seed: u64) -> FuzzReport {
    run(Suite::Lemma41, 3, count, seed, &["inequality"], |i, rng| {
        let y = draw_tilde(rng, 3).0;
        let y = if y.y(2).norm() > y.y(1).norm() {
            TildePoint::new(vec![y.y(2), y.y(1)], y.q()).expect("finite")
        } else {
            y
        };
        let slack = lemma41_slack(&y);
        let mut o = Outcome { truth: vec![slack >= -1e-12], ..Default::default() };
        if slack < -1e-12 {
            o.hard = Some(counterexample(i, "inequality violated", &y.components(), None, &[("slack".into(), slack)]));
        }
        o.metrics.push(("min_slack", slack, false));
        o
    })
}

fn roots_within(s: &SymPoint, radius: f64) -> (bool, f64) {
    // monic X^n - s1 X^{n-1} + s2 X^{n-2} - ... with lowest degree first
    let n = s.n();
    let lower: Vec<CNum> = (0..n)
        .map(|k| {
            let idx = n - k;
            let sign = if idx.is_multiple_of(2) { 1.0 } else { -1.0 };
            s.coeff(idx) * sign
        })
        .collect();
    let top = poly_roots(&lower).iter().map(|z| z.norm()).fold(0.0, f64::max);
    (top < radius, top)
}

const SCALING_LABELS: [&str; 2] = ["membership", "roots"];

/// Scaled domains: s lies in the polydisc image of radius |l| exactly when
/// its rescaling by l lies in the unit one. Even samples come from the
/// radius-1/2 image; odd samples from the unit image scaled down, with one
/// root pushed outside the unit disc on every other odd sample.
pub fn scaling(n: usize, count: usize, seed: u64) -> FuzzReport {
    run(Suite::Scaling, n, count, seed, &SCALING_LABELS, |i, rng| {
        let theta = TAU * rng.gen::<f64>();
        let lambda = c(theta.cos(), theta.sin()) * 0.5;
        let s = if i % 2 == 0 {
            sym_map(&uniform_tuple(rng, n, 0.5))
        } else {
            let mut u = uniform_tuple(rng, n, 1.0);
            if i % 4 == 3 {
                let t = TAU * rng.gen::<f64>();
                u[0] = c(t.cos(), t.sin()) * (1.05 + 0.45 * rng.gen::<f64>());
            }
            let t = sym_map(&u);
            let mut f = r(1.0);
            let comps: Vec<CNum> = t
                .components()
                .into_iter()
                .map(|v| {
                    f *= lambda;
                    v * f
                })
                .collect();
            SymPoint::from_components(&comps).expect("finite")
        };
        let scaled = scale_equiv(&s, lambda).expect("0 < |lambda| <= 1");
        let member = membership_sym(&scaled, Which::Open).member_open;
        let (inside, top) = roots_within(&s, 0.5);
        let mut o = Outcome { truth: vec![member, inside], ..Default::default() };
        if member != inside {
            let list = vec![("largest_root".to_string(), top)];
            o.hard = Some(counterexample(i, "scaled membership disagrees with roots", &s.components(), Some(lambda), &list));
        }
        o
    })
}

/// Agreement of the two membership tests in dimension two.
pub fn g2(count: usize, seed: u64) -> FuzzReport {
    run(Suite::G2, 2, count, seed, &["sym", "tilde"], |i, rng| {
        let y = match i % 3 {
            0 => draw_tilde(rng, 2).0,
            1 => draw_bounding(rng, 2),
            _ => TildePoint::from_components(&sym_map(&uniform_tuple(rng, 2, 1.0)).components()).expect("finite"),
        };
        let s = SymPoint::from_components(&y.components()).expect("finite");
        let ms = 1.0 - costara_sup(&s).sup;
        let mt = membership_margin(&y);
        let mut o = Outcome { truth: vec![Which::Open.holds(ms), Which::Open.holds(mt)], ..Default::default() };
        if hard_disagreement([ms, mt]) {
            let list = vec![("sym".to_string(), ms), ("tilde".to_string(), mt)];
            o.hard = Some(counterexample(i, "membership tests disagree", &y.components(), None, &list));
        }
        o.soft = o.hard.is_none() && o.truth[0] != o.truth[1];
        o
    })
}

/// Necessity of the sup bound: even samples are images pi(l0 a) and must
/// pass; odd samples are n = 2 data violating condition (6) and must fail.
pub fn thm55(n: usize, count: usize, seed: u64) -> FuzzReport {
    run(Suite::Thm55, n, count, seed, &["verdict", "expected"], |i, rng| {
        if i % 2 == 0 {
            let modulus = 0.05 + 0.9 * rng.gen::<f64>();
            let theta = TAU * rng.gen::<f64>();
            let l0 = c(theta.cos(), theta.sin()) * modulus;
            let a = uniform_tuple(rng, n, 1.0);
            let s0 = sym_map(&a.iter().map(|x| x * l0).collect::<Vec<_>>());
            let (sup, ok) = costara_schwarz_bound(l0, &s0);
            let mut o = Outcome { truth: vec![ok, true], ..Default::default() };
            if !ok {
                let list = vec![("sup".to_string(), sup)];
                o.hard = Some(counterexample(i, "bound fails on an image datum", &s0.components(), Some(l0), &list));
            }
            o
        } else {
            let y = loop {
                let y = draw_tilde(rng, 2).0;
                if d_closed(2.0, y.y(1), y.y(1), y.q()).unwrap_or(0.0) > 0.02 {
                    break y;
                }
            };
            let dj = d_closed(2.0, y.y(1), y.y(1), y.q()).expect("inside");
            let modulus = (dj - 1e-6) * (0.01 + 0.98 * rng.gen::<f64>());
            let theta = TAU * rng.gen::<f64>();
            let l0 = c(theta.cos(), theta.sin()) * modulus;
            let s0 = SymPoint::from_components(&y.components()).expect("finite");
            let (sup, ok) = costara_schwarz_bound(l0, &s0);
            let cond6 = SchwarzDatum::new(l0, y.clone()).map(|d| report(&d).holds(6)).unwrap_or(true);
            let mut o = Outcome { truth: vec![ok, false], ..Default::default() };
            if ok || cond6 {
                let list = vec![("sup".to_string(), sup), ("d1".to_string(), dj)];
                o.hard = Some(counterexample(i, "bound holds on a datum violating (6)", &y.components(), Some(l0), &list));
            }
            o
        }
    })
}

/// Disc sample helper for callers building their own data.
pub fn random_lambda(rng: &mut ChaCha8Rng) -> CNum {
    uniform_disc(rng, 1.0)
}
