//! Crate-wide error type.

/// Errors reported by graph construction, codecs, and solvers.
///
/// The variants map onto the CLI exit-code discipline: everything except
/// [`Error::Numerical`] is a usage/structure problem (exit 2); `Numerical`
/// means an algorithm failed to converge or a computed certificate did not
/// verify (exit 3).
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// Inadmissible argument values (bad family parameters, negative
    /// weights, dimension mismatches).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Structural limits exceeded: more than 64 vertices, automorphism
    /// group larger than the enumeration cap, SDP dimension cap.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Malformed graph text. `offset` is the byte position of the first
    /// offending character.
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    /// A verifier was run on a graph that lacks the hypothesis it needs
    /// (self-complementarity for Result 2, vertex-transitivity for Result 3).
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was called outside its stated precondition (e.g.
    /// witness extraction on a point that is not outside the quantum set).
    #[error("precondition error: {0}")]
    Precondition(String),

    /// An iterative solver hit its iteration cap or a self-verification
    /// check failed.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for the variants that signal misuse rather than numerics.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}
