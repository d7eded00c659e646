use thiserror::Error;

/// Errors raised by polynomial construction and arithmetic.
#[derive(Debug, Error)]
pub enum PolyError {
    #[error("variable count mismatch: {0} vs {1}")]
    NvarsMismatch(usize, usize),
    #[error("variable index {index} out of range for {nvars} variables")]
    IndexOutOfRange { index: usize, nvars: usize },
    #[error("scale factors must be strictly positive, got {0}")]
    NonPositiveScale(f64),
    #[error("shift has negative imaginary part {0}; only Im >= 0 is allowed")]
    NegativeImagShift(f64),
    #[error("operation requires real coefficients; found imaginary part {0}")]
    NonRealCoefficients(f64),
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("coefficient slice index {k} out of range (degree {degree})")]
    SliceOutOfRange { k: u32, degree: u32 },
    #[error("merge requires two distinct variables, got {0}")]
    SameVariable(usize),
    #[error("line dimension {0} does not match variable count {1}")]
    LineDimMismatch(usize, usize),
    #[error("non-finite coefficient")]
    NonFiniteCoefficient,
    #[error("invalid polynomial JSON: {0}")]
    BadJson(String),
}

/// Errors raised by univariate root analysis.
#[derive(Debug, Error)]
pub enum UniError {
    #[error("root finding requires degree >= 1")]
    DegreeTooLow,
    #[error("degree {0} exceeds the supported maximum of 64")]
    DegreeTooHigh(usize),
    #[error("root report is unreliable (worst residual {0:.3e}); verdict inconclusive")]
    Unreliable(f64),
    #[error("polynomial has non-real coefficients (imaginary magnitude {0:.3e})")]
    NonReal(f64),
    #[error("polynomial is not real-rooted as required")]
    NotRealRooted,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Errors raised by the multivariate stability testers and constructions.
#[derive(Debug, Error)]
pub enum StabError {
    #[error("expected a bilinear polynomial a + bx + cy + dxy in exactly 2 variables")]
    NotBilinear,
    #[error("polynomial is not multiaffine: variable {0} has degree {1}")]
    NotMultiaffine(usize, u32),
    #[error("matrix pencil invariant violated: {0}")]
    BadPencil(String),
    #[error("invalid recurrence spec: {0}")]
    BadRecurrence(String),
    #[error("separability check requires a bivariate polynomial, got {0} variables")]
    NotBivariate(usize),
    #[error("operator symbol must have an even variable count, got {0}")]
    OddSymbol(usize),
    #[error("operator block size {0} does not match argument with {1} variables")]
    BlockMismatch(usize, usize),
    #[error("diagonal operator grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Uni(#[from] UniError),
}
