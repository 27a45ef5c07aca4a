use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("polytope has dimension 0 and no facets")]
    DegeneratePolytope,
    #[error("polytope lacks the integer decomposition property (witness {witness:?} at degree {degree})")]
    NotIdp { witness: Vec<i64>, degree: usize },
    #[error("IDP check inconclusive up to degree {0}")]
    IdpInconclusive(usize),
    #[error("lattice points do not affinely generate the lattice of the affine hull")]
    LatticeDeficient,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("graph is not perfect")]
    NotPerfect,
    #[error("graph fails the odd cycle condition")]
    OddCycleConditionFails,
    #[error("search budget of {0} nodes exceeded")]
    SearchBudgetExceeded(u64),
    #[error("integer overflow converting to machine integers")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
