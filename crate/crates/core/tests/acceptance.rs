//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
//! criterion fails.

use std::time::{Duration, Instant};

use symdisc::domains::{costara_sup, d_norm, membership_sym, membership_tilde, phi, SymPoint, TildePoint, Which};
use symdisc::fuzz::{run_suite, FuzzReport, Suite};
use symdisc::linalg::{eigen2, op_norm, r, CNum, Mat2};
use symdisc::nonuniqueness::{build_uy, corner_closed_form, member, target, zeta_samples, LAMBDA0};
use symdisc::oracles::{sup_on_torus, GridSpec};
use symdisc::schwarz::{build_zj, max_diff, range_check, SchwarzDatum};
use symdisc::domains::RootBranch;

const SEED: u64 = 20240917;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn within(t: Instant, limit: Duration) -> (bool, String) {
    let e = t.elapsed();
    (e < limit, format!("{:.2}s of {:.0}s", e.as_secs_f64(), limit.as_secs_f64()))
}

fn fuzz_ok(reps: &[FuzzReport]) -> (bool, String) {
    let hard: u64 = reps.iter().map(|r| r.hard_disagreements).sum();
    let soft: u64 = reps.iter().map(|r| r.soft_disagreements).sum();
    let mut detail = format!("hard {hard}, soft {soft}");
    for rep in reps {
        for ce in &rep.counterexamples {
            detail.push_str(&format!("; n={} #{}: {}", rep.n, ce.index, ce.reason));
        }
    }
    (reps.iter().all(|r| r.passed), detail)
}

fn worked() -> TildePoint {
    target()
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let y = worked();
    let d1 = d_norm(1, &y).unwrap();
    let d2 = d_norm(2, &y).unwrap();
    let (g1, _) = sup_on_torus(|z| phi(1, z, &y), GridSpec::default()).unwrap();
    let (g2, _) = sup_on_torus(|z| phi(2, z, &y), GridSpec::default()).unwrap();
    let exact = (d1 - 0.8).abs() < 1e-12 && (g1 - 0.8).abs() < 1e-6 && (d2 - 0.5).abs() < 1e-6 && (g2 - d2).abs() < 1e-6;
    let (fast, time) = within(t, Duration::from_secs(1));
    outcome(exact && fast, format!("D1 = {d1}, grid {g1}; D2 = {d2}, grid {g2}; {time}"))
}

fn criterion_2() -> Outcome {
    let d = SchwarzDatum::new(r(LAMBDA0), worked()).unwrap();
    let z = build_zj(&d, 1, RootBranch::Principal).unwrap();
    let w2 = (z.a12 * z.a12 - r(15.0 / 32.0)).norm();
    let nz = (op_norm(&z) - 1.0).abs();
    let (e1, e2) = eigen2(&z);
    let eig = (e1 + 1.0).norm().max((e2 - 0.625).norm());
    let u = build_uy();
    let unitary = (u.adjoint() * u).max_abs_diff(&Mat2::identity());
    let recon = (u * Mat2::diag(r(-1.0), r(0.625)) * u.adjoint()).max_abs_diff(&z);
    let corner = corner_closed_form(r(0.3)).norm();
    let ok = w2 < 1e-15 && nz < 1e-10 && eig < 1e-10 && unitary < 1e-12 && recon < 1e-12 && corner < 1e-12;
    outcome(ok, format!("w^2 err {w2:.1e}, norm err {nz:.1e}, eig err {eig:.1e}, unitary {unitary:.1e}, recon {recon:.1e}, corner {corner:.1e}"))
}

fn criterion_3() -> Outcome {
    let t = Instant::now();
    let zetas = zeta_samples(16);
    let mut psis = Vec::new();
    for z in &zetas {
        match member(*z) {
            Ok((_, psi)) => psis.push(psi),
            Err(e) => return outcome(false, format!("zeta = {z}: {e}")),
        }
    }
    let y0 = target();
    let mut start: f64 = 0.0;
    let mut end: f64 = 0.0;
    let mut margin = f64::INFINITY;
    let mut points = 0;
    for psi in &psis {
        start = start.max(max_diff(&psi.eval(r(0.0)), &TildePoint::origin(3)));
        end = end.max(max_diff(&psi.eval(r(LAMBDA0)), &y0));
        let rs = range_check(psi, 16, 32);
        points = rs.points;
        margin = margin.min(rs.min_margin);
    }
    let at: Vec<TildePoint> = psis.iter().map(|p| p.eval(r(1.0 / 3.0))).collect();
    let mut sep = f64::INFINITY;
    for a in 0..at.len() {
        for b in a + 1..at.len() {
            sep = sep.min(max_diff(&at[a], &at[b]));
        }
    }
    let (fast, time) = within(t, Duration::from_secs(10));
    let ok = psis.len() >= 16 && start < 1e-10 && end < 1e-9 && sep > 1e-8 && points == 512 && margin >= -1e-8 && fast;
    outcome(ok, format!("{} maps, origin {start:.1e}, target {end:.1e}, separation {sep:.2e}, {points} grid points, margin {margin:.2e}; {time}", psis.len()))
}

fn criterion_4() -> Outcome {
    let w: Vec<CNum> = vec![r(2.5), r(1.25), r(0.5)];
    let y = TildePoint::from_components(&w).unwrap();
    let s = SymPoint::from_components(&w).unwrap();
    let tilde = membership_tilde(&y, Which::Open).member_open;
    let sym = membership_sym(&s, Which::Open).member_open;
    let sup = costara_sup(&s);
    let rep = run_suite(Suite::G2, 2, 10_000, SEED);
    let (fuzz, detail) = fuzz_ok(&[rep]);
    let ok = tilde && !sym && sup.sup >= 1.0 - 1e-9 && fuzz;
    outcome(ok, format!("tilde {tilde}, sym {sym}, sup {} (circle {}); agreement fuzz {detail}", sup.sup, sup.circle_sup))
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    let reps: Vec<FuzzReport> = (2..=6).map(|n| run_suite(Suite::Thm22, n, 10_000, SEED)).collect();
    let (ok, detail) = fuzz_ok(&reps);
    let gap = reps.iter().map(|r| r.metrics["d_norm_grid_gap"].0).fold(0.0, f64::max);
    let (fast, time) = within(t, Duration::from_secs(60));
    outcome(ok && fast, format!("{detail}; closed form vs grid {gap:.1e}; {time}"))
}

fn criterion_6() -> Outcome {
    let t = Instant::now();
    let reps: Vec<FuzzReport> = (2..=5).map(|n| run_suite(Suite::Thm37, n, 10_000, SEED)).collect();
    let (ok, detail) = fuzz_ok(&reps);
    let synth: Vec<String> = reps
        .iter()
        .filter(|r| r.n <= 3)
        .map(|r| {
            let m = |k: &str| r.metrics.get(k).map(|v| v.0).unwrap_or(f64::NAN);
            format!("n={} endpoint {:.1e}, range {:.1e}", r.n, m("endpoint_residual"), m("range_min_margin"))
        })
        .collect();
    let skipped: u64 = reps.iter().map(|r| r.skipped).sum();
    let (fast, time) = within(t, Duration::from_secs(300));
    outcome(ok && fast, format!("{detail}; skipped {skipped}; {}; {time}", synth.join(", ")))
}

fn criterion_7() -> Outcome {
    let rep = run_suite(Suite::Lemma36, 3, 1000, SEED);
    let m = |k: &str| rep.metrics[k].0;
    let (ok, detail) = fuzz_ok(std::slice::from_ref(&rep));
    outcome(
        ok,
        format!(
            "{detail}; entries {:.1e}, determinant {:.1e}, min X {:.4}",
            m("entry_residual"),
            m("determinant_residual"),
            m("x_min")
        ),
    )
}

fn criterion_8() -> Outcome {
    let rep = run_suite(Suite::Lemma41, 3, 10_000, SEED);
    let slack = rep.metrics["min_slack"].0;
    let (ok, detail) = fuzz_ok(std::slice::from_ref(&rep));
    outcome(ok, format!("{detail}; min slack {slack:.3e}"))
}

fn criterion_9() -> Outcome {
    // even indices: forward direction; odd: scaled-down points of the unit image,
    // half of them with a root outside
    let rep = run_suite(Suite::Scaling, 3, 4000, SEED);
    let (ok, detail) = fuzz_ok(std::slice::from_ref(&rep));
    outcome(ok, format!("{detail}; {} samples", rep.count))
}

fn criterion_10() -> Outcome {
    let rep = run_suite(Suite::Thm55, 3, 2000, SEED);
    let (ok, detail) = fuzz_ok(std::slice::from_ref(&rep));
    outcome(ok, format!("{detail}; 1000 image data, 1000 violating data"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("worked datum norms", criterion_1),
        ("worked datum matrix facts", criterion_2),
        ("family of distinct interpolants", criterion_3),
        ("separation of the two domains", criterion_4),
        ("characterization equivalence fuzz", criterion_5),
        ("Schwarz condition lattice fuzz", criterion_6),
        ("kernel matrix identity", criterion_7),
        ("quotient comparison inequality", criterion_8),
        ("scaled domains", criterion_9),
        ("necessity of the sup bound", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f();
        if !o.ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} ({name}): {} [{:.2}s]",
            if o.ok { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
