use thiserror::Error;

/// Failures reported by the library.
///
/// `Contract` covers bad caller input, `Budget` a step or search cap that
/// tripped, and `Internal` a broken invariant that should never happen.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid site coordinates ({p}, {q})")]
    InvalidSite { p: i32, q: i32 },
    #[error("invalid hexagon center ({p}, {q})")]
    InvalidHex { p: i32, q: i32 },
    #[error("direction d{k} is not allowed at ({p}, {q})")]
    DirectionNotAllowed { p: i32, q: i32, k: u8 },
    #[error("{0}")]
    Contract(&'static str),
    #[error("budget of {limit} exceeded: {what}")]
    Budget { what: &'static str, limit: u64 },
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
