use thiserror::Error;

/// Errors raised by the operator routines. Numerical payloads are reported in
/// double precision regardless of the working scalar type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GammaError {
    #[error("matrix is not Hermitian: ‖A − A*‖_F = {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    NotPsd { eigenvalue: f64 },
    #[error("operators do not commute: ‖SP − PS‖_F = {defect:.3e} > {tol:.3e}")]
    NotCommuting { defect: f64, tol: f64 },
    #[error("operator is not normal: ‖AA* − A*A‖_F = {defect:.3e}")]
    NotNormal { defect: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a contraction: ‖P‖ = {norm:.12}")]
    NotContraction { norm: f64 },
    #[error("disc automorphism parameters out of range: |a| = {a_abs}, |β| = {beta_abs}")]
    InvalidAutomorphism { a_abs: f64, beta_abs: f64 },
    #[error("singular denominator 1 − ās + ā²p: modulus {modulus:.3e}")]
    SingularDenominator { modulus: f64 },
    #[error("resolvent I − āS + ā²P is singular: σ_min = {sigma_min:.3e}")]
    SingularResolvent { sigma_min: f64 },
    #[error("operator not invertible: σ_min = {sigma_min:.3e}")]
    NotInvertible { sigma_min: f64 },
    #[error("z = {re} + {im}i lies outside Λ_P (σ_min(I − zP*) = {sigma_min:.3e})")]
    OutsideLambdaP { re: f64, im: f64, sigma_min: f64 },
    #[error("P is not pure: spectral radius {spectral_radius:.12}")]
    NotPure { spectral_radius: f64 },
    #[error("truncation cap {cap} exceeded: ‖P^{cap}‖ = {tail:.3e}")]
    TruncationCapExceeded { cap: usize, tail: f64 },
    #[error("computed unitary part does not reduce S: leakage {leakage:.3e}")]
    ReductionFailure { leakage: f64 },
    #[error("U does not intertwine the pairs: ‖US − S₁U‖ = {s_defect:.3e}, ‖UP − P₁U‖ = {p_defect:.3e}")]
    NotIntertwining { s_defect: f64, p_defect: f64 },
    #[error("defect ranks differ: {left} vs {right}")]
    DefectRankMismatch { left: usize, right: usize },
    #[error("matrix is not unitary: ‖U*U − I‖_F = {defect:.3e}")]
    NotUnitary { defect: f64 },
}

pub type Result<T> = std::result::Result<T, GammaError>;
