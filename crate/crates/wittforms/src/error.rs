use thiserror::Error;

/// Library-wide error type with stable codes for the CLI report format.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different base fields")]
    FieldMismatch,
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("operation not defined in this characteristic")]
    WrongCharacteristic,
    #[error("cup product degrees not expressible as a symbol here")]
    UnsupportedDegreeCombination,
    #[error("Pfister slot must be nonzero")]
    ZeroSlot,
    #[error("e_{0} is only defined once e_{} vanishes", .0 - 1)]
    PreviousInvariantNonzero(u32),
    #[error("operation requires an even-dimensional form")]
    OddDimension,
    #[error("form is degenerate")]
    Degenerate,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("algebra is not division; Morita-reduce first")]
    NotDivision,
    #[error("operation is outside the supported algebra range")]
    UnsupportedAlgebra,
    #[error("hermitian form is not even")]
    NotEven,
    #[error("forms live over different algebras")]
    AlgebraMismatch,
    #[error("relative invariant undefined: lower invariant of the difference is nonzero")]
    ClassMismatch,
    #[error("Gram matrix is not skew-hermitian")]
    NotSkewHermitian,
    #[error("operation requires a non-split algebra")]
    SplitAlgebra,
    #[error("operation requires a split algebra")]
    NotSplit,
    #[error("characteristic-2 pair requires an alternating bilinear form")]
    NotAlternatingChar2,
    #[error("rank times index must be even")]
    OddRankTimesIndex,
    #[error("inconsistent module dimension data")]
    InconsistentDimensions,
    #[error("search space exceeds the configured bound")]
    SearchSpaceTooLarge,
    #[error("no reference form recorded for this matrix model")]
    MissingReferenceForm,
    #[error("form is not hermitian for the recorded involution")]
    InvolutionMismatch,
    #[error("schema error: {0}")]
    SchemaError(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable machine-readable code used in CLI reports.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            DivisionByZero => "DivisionByZero",
            FieldMismatch => "FieldMismatch",
            ZeroElement => "ZeroElement",
            WrongCharacteristic => "WrongCharacteristic",
            UnsupportedDegreeCombination => "UnsupportedDegreeCombination",
            ZeroSlot => "ZeroSlot",
            PreviousInvariantNonzero(_) => "PreviousInvariantNonzero",
            OddDimension => "OddDimension",
            Degenerate => "Degenerate",
            DimensionMismatch => "DimensionMismatch",
            NotDivision => "NotDivision",
            UnsupportedAlgebra => "UnsupportedAlgebra",
            NotEven => "NotEven",
            AlgebraMismatch => "AlgebraMismatch",
            ClassMismatch => "ClassMismatch",
            NotSkewHermitian => "NotSkewHermitian",
            SplitAlgebra => "SplitAlgebra",
            NotSplit => "NotSplit",
            NotAlternatingChar2 => "NotAlternatingChar2",
            OddRankTimesIndex => "OddRankTimesIndex",
            InconsistentDimensions => "InconsistentDimensions",
            SearchSpaceTooLarge => "SearchSpaceTooLarge",
            MissingReferenceForm => "MissingReferenceForm",
            InvolutionMismatch => "InvolutionMismatch",
            SchemaError(_) => "SchemaError",
            InvariantViolation(_) => "InvariantViolation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
