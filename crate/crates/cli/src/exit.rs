//! Exit codes: 0 success, 1 domain failure, 2 parse or usage error,
//! 3 inconclusive numerics.

use differential_core::DiffError;
use quiver_core::QuiverError;
use stability_core::StabilityError;
use surface_core::SurfaceError;

pub const SUCCESS: i32 = 0;
pub const DOMAIN: i32 = 1;
pub const USAGE: i32 = 2;
pub const INCONCLUSIVE: i32 = 3;

/// Bad input: unreadable file, malformed syntax, invalid flag values.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Numerics that could not decide, reported without being a failure of the
/// input.
#[derive(Debug)]
pub struct InconclusiveError(pub String);

impl std::fmt::Display for InconclusiveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InconclusiveError {}

fn diff_code(e: &DiffError) -> Option<i32> {
    match e {
        DiffError::Inconclusive(_) => Some(INCONCLUSIVE),
        DiffError::Parse(_) | DiffError::Surface(SurfaceError::Parse(_)) | DiffError::Quiver(QuiverError::Parse(_)) => {
            Some(USAGE)
        }
        _ => None,
    }
}

pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<UsageError>() || cause.is::<serde_json::Error>() || cause.is::<std::io::Error>() {
            return USAGE;
        }
        if cause.is::<InconclusiveError>() {
            return INCONCLUSIVE;
        }
        if let Some(e) = cause.downcast_ref::<DiffError>() {
            if let Some(c) = diff_code(e) {
                return c;
            }
        }
        if let Some(StabilityError::Numerics(e)) = cause.downcast_ref::<StabilityError>() {
            if let Some(c) = diff_code(e) {
                return c;
            }
        }
        if let Some(StabilityError::Parse(_)) = cause.downcast_ref::<StabilityError>() {
            return USAGE;
        }
        if let Some(SurfaceError::Parse(_)) = cause.downcast_ref::<SurfaceError>() {
            return USAGE;
        }
        if let Some(QuiverError::Parse(_) | QuiverError::Surface(SurfaceError::Parse(_))) = cause.downcast_ref::<QuiverError>() {
            return USAGE;
        }
    }
    DOMAIN
}
