use thiserror::Error;

use crate::expr::ExprError;
use crate::geometry::TangentState;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error(transparent)]
    Expr(#[from] ExprError),

    #[error("singular metric: |det g| = {det:e} below threshold {threshold:e}")]
    SingularMetric { det: f64, threshold: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid chart: {0}")]
    Chart(String),

    #[error("integration failed at step {step} (t = {t}): {source}")]
    Step {
        step: usize,
        t: f64,
        last_good: Box<TangentState>,
        source: Box<Error>,
    },

    #[error("force is not linear in the velocities: {0}")]
    NotVelocityLinear(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension {
            what,
            expected,
            found,
        })
    }
}
