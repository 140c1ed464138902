use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invariant factor at position {0} is 0")]
    ZeroInvariantFactor(usize),

    #[error("group order {order} exceeds the configured bound {bound}")]
    GroupTooLarge { order: usize, bound: usize },

    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),

    #[error("multiplication table is not associative: ({a}{b}){c} != {a}({b}{c})")]
    NonAssociative { a: usize, b: usize, c: usize },

    #[error("invalid permutation generator: {0}")]
    InvalidPermutation(String),

    #[error("unknown element label `{0}`")]
    UnknownElement(String),

    #[error("invalid linear action: {0}")]
    InvalidAction(String),

    #[error("no eigen data supplied for the class of `{0}`")]
    MissingEigenData(String),

    #[error("invalid monodromy data: {0}")]
    InvalidMonodromy(String),

    #[error("pushforward degree {0} is not an integer")]
    NonIntegralDegree(String),

    #[error("root index r must be positive")]
    ZeroRootIndex,

    #[error("invalid Picard group data: {0}")]
    InvalidPicard(String),

    #[error("stringy products are not available here: {0}")]
    UnsupportedProduct(String),

    #[error("class belongs to a different action or coefficient ring")]
    MismatchedAction,

    #[error("markings do not glue: sector `{left}` is not balanced against `{right}`")]
    IncompatibleGluing { left: String, right: String },

    #[error("{what} of size {size} exceeds the bound {bound}")]
    SizeBound {
        what: &'static str,
        size: usize,
        bound: usize,
    },

    #[error("invalid table document: {0}")]
    InvalidTableDocument(String),
}
