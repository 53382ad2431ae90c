//! The symmetrized polydisc and the rational function that characterizes it.

use std::collections::BTreeMap;

use crate::domains::point::{ConditionValue, MembershipVerdict, SymPoint, Which};
use crate::error::{Error, Result};
use crate::linalg::{r, CNum};
use crate::oracles::{sup_on_torus, zeros_inside, GridSpec};

/// Elementary symmetric polynomials (e_1, ..., e_n), with p = e_n.
pub fn sym_map(z: &[CNum]) -> SymPoint {
    // e holds the coefficients of prod (1 + z_i X)
    let mut e = vec![r(0.0); z.len() + 1];
    e[0] = r(1.0);
    for (i, zi) in z.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            let prev = e[k - 1];
            e[k] += *zi * prev;
        }
    }
    let p = e[z.len()];
    let s = e[1..z.len()].to_vec();
    SymPoint::new(s, p).expect("finite symmetric functions")
}

fn numerator(s: &SymPoint, z: CNum) -> CNum {
    let n = s.n();
    let mut acc = r(0.0);
    for k in (1..=n).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * z + s.coeff(k) * (k as f64 * sign);
    }
    acc
}

fn denominator(s: &SymPoint, z: CNum) -> CNum {
    let n = s.n();
    let mut acc = r(0.0);
    for k in (0..n).rev() {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc = acc * z + s.coeff(k) * ((n - k) as f64 * sign);
    }
    acc
}

/// f_s(z) = sum_k k (-1)^k s_k z^{k-1} / sum_k (n-k) (-1)^k s_k z^k.
pub fn costara_f(s: &SymPoint, z: CNum) -> Result<CNum> {
    let den = denominator(s, z);
    if den.norm() <= 1e-14 * s.n() as f64 {
        return Err(Error::PoleHit { z_re: z.re, z_im: z.im });
    }
    Ok(numerator(s, z) / den)
}

/// Sup of |f_s| over the closed disc: infinite when the denominator has a
/// zero inside, otherwise the circle maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostaraSup {
    pub sup: f64,
    pub circle_sup: f64,
    pub pole_inside: bool,
}

pub fn costara_sup(s: &SymPoint) -> CostaraSup {
    let pole_inside = zeros_inside(|z| denominator(s, z), 1024) != 0;
    let circle_sup = sup_on_torus(|z| costara_f(s, z), GridSpec::default())
        .map_or(f64::INFINITY, |(v, _)| v);
    let sup = if pole_inside { f64::INFINITY } else { circle_sup };
    CostaraSup { sup, circle_sup, pole_inside }
}

pub fn membership_sym(s: &SymPoint, which: Which) -> MembershipVerdict {
    let cs = costara_sup(s);
    let margin = 1.0 - cs.sup;
    let mut condition_values = BTreeMap::new();
    condition_values.insert("costara".to_string(), ConditionValue::eval(which, margin));
    condition_values.insert(
        "costara_circle".to_string(),
        ConditionValue::eval(which, 1.0 - cs.circle_sup),
    );
    MembershipVerdict {
        member_open: Which::Open.holds(margin),
        member_closed: Which::Closed.holds(margin),
        condition_values,
        witness: None,
    }
}

/// (s_1/l, ..., s_{n-1}/l^{n-1}, p/l^n).
pub fn scale_equiv(s: &SymPoint, lambda: CNum) -> Result<SymPoint> {
    let l = lambda.norm();
    if !(l > 0.0 && l <= 1.0) {
        return Err(Error::InvalidParameter(format!("|lambda| = {l} not in (0, 1]")));
    }
    let inv = lambda.inv();
    let mut f = r(1.0);
    let comps = s
        .components()
        .into_iter()
        .map(|v| {
            f *= inv;
            v * f
        })
        .collect::<Vec<_>>();
    SymPoint::from_components(&comps)
}
