use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("contraction bound violated (norm {norm})")]
    ContractionViolation { norm: f64 },
    #[error("index out of range: n = {n}, j = {j}")]
    OutOfRange { n: usize, j: usize },
    #[error("pole of phi_{j} at z = {z_re} + {z_im}i")]
    PoleAtZ { j: usize, z_re: f64, z_im: f64 },
    #[error("closed form for D_{j} does not apply (|y_{{n-j}}| >= C and product non-degenerate)")]
    OutsideFormulaDomain { j: usize },
    #[error("boundary parameter: |q| = {modulus} >= 1")]
    BoundaryParameter { modulus: f64 },
    #[error("norm certificate failed: ||B|| = {norm}")]
    NormCertificateFailed { norm: f64 },
    #[error("denominator vanishes at z = {z_re} + {z_im}i")]
    PoleHit { z_re: f64, z_im: f64 },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("singular linear system (residual {residual:e})")]
    SingularSystem { residual: f64 },
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("degenerate product y_j y_(n-j) = C^2 q for j = {j}")]
    DegenerateProduct { j: usize },
    #[error("determinant test failed: det K = {det:e}")]
    DetTestFailed { det: f64 },
    #[error("rank-one solution infeasible: ||v|| / ||a|| = {ratio}")]
    RankOneInfeasible { ratio: f64 },
    #[error("point is not in J_n")]
    NotInJn,
    #[error("condition failed: {0}")]
    ConditionFailed(String),
    #[error("endpoint violated (residual {residual:e})")]
    EndpointViolation { residual: f64 },
    #[error("infeasible scalar data: distance {distance} exceeds {bound}")]
    InfeasibleData { distance: f64, bound: f64 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}
