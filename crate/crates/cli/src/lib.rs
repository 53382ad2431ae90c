//! Command implementations behind the `symdisc` binary. Each command returns
//! a [`ReportFile`] and an exit code.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use symdisc::domains::{costara_sup, in_jn, membership_sym, membership_tilde, thm22_margins, SymPoint, Which};
use symdisc::fuzz::{run_suite, Suite};
use symdisc::io::{PointFile, PointKind, SCHEMA_VERSION};
use symdisc::linalg::{r, CNum};
use symdisc::nonuniqueness::{member, target, zeta_samples, LAMBDA0};
use symdisc::schwarz::{build_psi, costara_schwarz_bound, hard_disagreement, max_diff, range_check, report, SchwarzDatum};
use symdisc::TildePoint;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Inputs {
    pub point: Option<PointFile>,
    pub parameters: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub schema_version: String,
    pub command: String,
    pub inputs: Inputs,
    pub results: Value,
    pub seed: u64,
}

impl ReportFile {
    fn new(command: &str, point: Option<PointFile>, parameters: Value, results: Value, seed: u64) -> Self {
        let parameters = match parameters {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        ReportFile {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs: Inputs { point, parameters },
            results,
            seed,
        }
    }
}

/// A failure before any report exists.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }
}

pub type Outcome = Result<(ReportFile, i32), CliError>;

/// JSON number, or the strings "inf", "-inf", "nan".
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn read_point(path: &Path) -> Result<PointFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    let file: PointFile = serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))?;
    file.complex_components().map_err(|e| CliError::parse(e.to_string()))?;
    Ok(file)
}

pub fn parse_complex(s: &str) -> Result<CNum, String> {
    let (a, b) = s.split_once(',').unwrap_or((s, "0"));
    let re: f64 = a.trim().parse().map_err(|e| format!("bad real part {a:?}: {e}"))?;
    let im: f64 = b.trim().parse().map_err(|e| format!("bad imaginary part {b:?}: {e}"))?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(format!("non-finite value {s:?}"));
    }
    Ok(CNum::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Tilde,
    Sym,
}

impl Domain {
    fn of(kind: PointKind) -> Domain {
        match kind {
            PointKind::Tilde => Domain::Tilde,
            PointKind::Sym => Domain::Sym,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Domain::Tilde => "tilde",
            Domain::Sym => "sym",
        }
    }
}

pub fn cmd_membership(file: PointFile, which: Which, domain: Option<Domain>, seed: u64) -> Outcome {
    let comps = file.complex_components().map_err(|e| CliError::parse(e.to_string()))?;
    let domain = domain.unwrap_or(Domain::of(file.kind));
    let params = json!({ "which": which, "domain": domain.name() });
    let (results, code) = match domain {
        Domain::Tilde => {
            let y = TildePoint::from_components(&comps).map_err(|e| CliError::parse(e.to_string()))?;
            let verdict = membership_tilde(&y, which);
            let margins = thm22_margins(&y);
            // every condition but the bidisc one is a decision procedure
            let contradiction = hard_disagreement(margins.iter().filter(|(k, _)| **k != "2").map(|(_, v)| *v));
            let member = match which {
                Which::Open => verdict.member_open,
                Which::Closed => verdict.member_closed,
            };
            let results = json!({
                "member": member,
                "verdict": to_value(&verdict),
                "in_jn": in_jn(&y),
                "contradiction": contradiction,
            });
            (results, if contradiction { EXIT_COUNTEREXAMPLE } else { EXIT_OK })
        }
        Domain::Sym => {
            let s = SymPoint::from_components(&comps).map_err(|e| CliError::parse(e.to_string()))?;
            let verdict = membership_sym(&s, which);
            let sup = costara_sup(&s);
            let member = match which {
                Which::Open => verdict.member_open,
                Which::Closed => verdict.member_closed,
            };
            let results = json!({
                "member": member,
                "verdict": to_value(&verdict),
                "costara": { "sup": num(sup.sup), "circle_sup": num(sup.circle_sup), "pole_inside": sup.pole_inside },
            });
            (results, EXIT_OK)
        }
    };
    Ok((ReportFile::new("membership", Some(file), params, results, seed), code))
}

pub fn cmd_schwarz(file: PointFile, lambda0: CNum, synthesize: bool, domain: Option<Domain>, seed: u64) -> Outcome {
    let comps = file.complex_components().map_err(|e| CliError::parse(e.to_string()))?;
    let domain = domain.unwrap_or(Domain::of(file.kind));
    let params = json!({
        "lambda0": [lambda0.re, lambda0.im],
        "synthesize": synthesize,
        "domain": domain.name(),
    });
    let l = lambda0.norm();
    if !(l > 0.0 && l < 1.0) {
        return Err(CliError::parse(format!("|lambda0| = {l} must lie in (0, 1)")));
    }
    let y = TildePoint::from_components(&comps).map_err(|e| CliError::parse(e.to_string()))?;
    let mut results = Map::new();
    if domain == Domain::Sym {
        let s = SymPoint::from_components(&comps).map_err(|e| CliError::parse(e.to_string()))?;
        let (sup, verdict) = costara_schwarz_bound(lambda0, &s);
        results.insert("costara_bound".into(), json!({ "sup": num(sup), "verdict": verdict }));
    }
    let datum = SchwarzDatum::new(lambda0, y.clone()).map_err(|e| CliError::parse(e.to_string()))?;
    let rep = report(&datum);
    let mut code = if rep.consistency { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    results.insert("report".into(), to_value(&rep));
    if synthesize {
        if !in_jn(&y) {
            results.insert("synthesis".into(), json!({ "error": "target outside the liftable subset" }));
            code = EXIT_UNSUPPORTED;
        } else {
            let synthesis = match build_psi(&datum) {
                Ok(psi) => {
                    let range = range_check(&psi, 4, 16);
                    json!({
                        "origin_residual": num(max_diff(&psi.eval(r(0.0)), &TildePoint::origin(y.n()))),
                        "endpoint_residual": num(max_diff(&psi.eval(lambda0), &y)),
                        "range": to_value(&range),
                        "range_closed_ok": range.closed_ok(),
                        "range_open_ok": range.open_ok(),
                    })
                }
                Err(e) => json!({ "error": e.to_string() }),
            };
            results.insert("synthesis".into(), synthesis);
        }
    }
    Ok((ReportFile::new("schwarz", Some(file), params, Value::Object(results), seed), code))
}

pub fn cmd_nonuniqueness(zeta_count: usize, seed: u64) -> Outcome {
    if zeta_count < 2 {
        return Err(CliError::parse("--zeta-count must be at least 2"));
    }
    let zetas = zeta_samples(zeta_count);
    let y0 = target();
    let mut members = Vec::new();
    let mut values = Vec::new();
    for z in &zetas {
        let (_, psi) = member(*z).map_err(|e| CliError { code: EXIT_COUNTEREXAMPLE, message: e.to_string() })?;
        let range = range_check(&psi, 16, 32);
        members.push(json!({
            "zeta": [z.re, z.im],
            "origin_residual": num(max_diff(&psi.eval(r(0.0)), &TildePoint::origin(3))),
            "endpoint_residual": num(max_diff(&psi.eval(r(LAMBDA0)), &y0)),
            "range_min_margin": num(range.min_margin),
        }));
        values.push(psi.eval(r(1.0 / 3.0)));
    }
    let mut sep = f64::INFINITY;
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            sep = sep.min(max_diff(&values[a], &values[b]));
        }
    }
    let results = json!({
        "lambda0": LAMBDA0,
        "target": y0.components().iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
        "members": members,
        "min_separation": num(sep),
        "distinct": sep > 1e-8,
    });
    let code = if sep > 1e-8 { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    let params = json!({ "zeta_count": zeta_count });
    Ok((ReportFile::new("nonuniqueness", None, params, results, seed), code))
}

pub fn cmd_fuzz(suite: Suite, n: usize, count: usize, seed: u64) -> Outcome {
    if !(2..=6).contains(&n) {
        return Err(CliError::parse(format!("--n {n} outside 2..=6")));
    }
    let rep = run_suite(suite, n, count, seed);
    let code = if rep.passed { EXIT_OK } else { EXIT_COUNTEREXAMPLE };
    let params = json!({ "suite": suite, "n": n, "count": count });
    Ok((ReportFile::new("fuzz", None, params, to_value(&rep), seed), code))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn worked_file() -> PointFile {
        PointFile::from_components(PointKind::Tilde, &target().components())
    }

    #[test]
    fn complex_argument() {
        assert_eq!(parse_complex("-0.8,0").unwrap(), CNum::new(-0.8, 0.0));
        assert_eq!(parse_complex("0.5").unwrap(), CNum::new(0.5, 0.0));
        assert!(parse_complex("a,b").is_err());
        assert!(parse_complex("inf,0").is_err());
    }

    #[test]
    fn report_round_trip() {
        let (rep, code) = cmd_schwarz(worked_file(), r(-0.8), true, None, 5).unwrap();
        assert_eq!(code, EXIT_OK);
        let text = serde_json::to_string(&rep).unwrap();
        let back: ReportFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rep);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
        let extra = text.replacen("{", "{\"unexpected\":0,", 1);
        assert!(serde_json::from_str::<ReportFile>(&extra).is_err());
    }

    #[test]
    fn lambda_outside_disc_rejected() {
        assert_eq!(cmd_schwarz(worked_file(), r(1.0), false, None, 0).unwrap_err().code, EXIT_PARSE);
    }

    #[test]
    fn fuzz_bounds() {
        assert_eq!(cmd_fuzz(Suite::Thm22, 7, 1, 0).unwrap_err().code, EXIT_PARSE);
        let (rep, code) = cmd_fuzz(Suite::Lemma41, 3, 0, 0).unwrap();
        assert_eq!(code, EXIT_OK);
        assert_eq!(rep.results["passed"], json!(true));
    }

    #[test]
    fn non_finite_numbers() {
        assert_eq!(num(f64::INFINITY), json!("inf"));
        assert_eq!(num(f64::NEG_INFINITY), json!("-inf"));
        assert_eq!(num(f64::NAN), json!("nan"));
        assert_eq!(num(0.25), json!(0.25));
    }
}
