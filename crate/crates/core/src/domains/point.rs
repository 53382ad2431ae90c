use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CNum, Mat2};

fn check_finite(values: &[CNum]) -> Result<()> {
    if values.iter().all(|z| z.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidPoint("non-finite component".into()))
    }
}

/// A point (y_1, ..., y_{n-1}, q) of C^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TildePoint {
    n: usize,
    y: Vec<CNum>,
    q: CNum,
}

impl TildePoint {
    pub fn new(y: Vec<CNum>, q: CNum) -> Result<Self> {
        let n = y.len() + 1;
        if n < 2 {
            return Err(Error::InvalidPoint("need n >= 2".into()));
        }
        check_finite(&y)?;
        check_finite(&[q])?;
        Ok(Self { n, y, q })
    }

    /// Builds from all n components, the last one being q.
    pub fn from_components(components: &[CNum]) -> Result<Self> {
        match components.split_last() {
            Some((q, y)) => Self::new(y.to_vec(), *q),
            None => Err(Error::InvalidPoint("empty component list".into())),
        }
    }

    pub fn origin(n: usize) -> Self {
        Self { n, y: vec![CNum::new(0.0, 0.0); n.saturating_sub(1)], q: CNum::new(0.0, 0.0) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> CNum {
        self.q
    }

    pub fn ys(&self) -> &[CNum] {
        &self.y
    }

    /// y_j for 1 <= j <= n-1.
    pub fn y(&self, j: usize) -> CNum {
        self.y[j - 1]
    }

    pub fn components(&self) -> Vec<CNum> {
        let mut v = self.y.clone();
        v.push(self.q);
        v
    }

    pub(crate) fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j >= self.n {
            Err(Error::OutOfRange { n: self.n, j })
        } else {
            Ok(())
        }
    }
}

/// A point (s_1, ..., s_{n-1}, p) of C^n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymPoint {
    n: usize,
    s: Vec<CNum>,
    p: CNum,
}

impl SymPoint {
    pub fn new(s: Vec<CNum>, p: CNum) -> Result<Self> {
        check_finite(&s)?;
        check_finite(&[p])?;
        Ok(Self { n: s.len() + 1, s, p })
    }

    pub fn from_components(components: &[CNum]) -> Result<Self> {
        match components.split_last() {
            Some((p, s)) => Self::new(s.to_vec(), *p),
            None => Err(Error::InvalidPoint("empty component list".into())),
        }
    }

    pub fn origin(n: usize) -> Self {
        Self { n, s: vec![CNum::new(0.0, 0.0); n.saturating_sub(1)], p: CNum::new(0.0, 0.0) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> CNum {
        self.p
    }

    pub fn ss(&self) -> &[CNum] {
        &self.s
    }

    /// s_k for 0 <= k <= n with s_0 = 1 and s_n = p.
    pub fn coeff(&self, k: usize) -> CNum {
        if k == 0 {
            CNum::new(1.0, 0.0)
        } else if k == self.n {
            self.p
        } else {
            self.s[k - 1]
        }
    }

    pub fn components(&self) -> Vec<CNum> {
        let mut v = self.s.clone();
        v.push(self.p);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaVector {
    pub n: usize,
    pub beta: Vec<CNum>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Open,
    Closed,
}

impl Which {
    /// Whether `margin` passes the threshold of this flavour.
    pub fn holds(self, margin: f64) -> bool {
        match self {
            Which::Open => margin > crate::linalg::TOL,
            Which::Closed => margin >= -crate::linalg::TOL,
        }
    }
}

/// Truth value of a condition together with its signed margin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionValue {
    pub holds: bool,
    #[serde(with = "crate::io::float")]
    pub margin: f64,
}

impl ConditionValue {
    pub fn eval(which: Which, margin: f64) -> Self {
        Self { holds: which.holds(margin), margin }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Witness {
    pub beta: Option<BetaVector>,
    pub b_matrices: Vec<Mat2>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub member_open: bool,
    pub member_closed: bool,
    pub condition_values: std::collections::BTreeMap<String, ConditionValue>,
    pub witness: Option<Witness>,
}
