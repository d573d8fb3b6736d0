use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{name} = {value} is outside the domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The inverse tetrad (or another quantity) is singular on the axis.
    #[error("singular at rho = 0: {0}")]
    Singular(&'static str),

    #[error("spin polarization must be +1 or -1, got {0}")]
    InvalidSpin(i64),

    /// No induced fields without rotation, hence no bound states.
    #[error("no bound states for omega = 0")]
    NoBoundState,

    #[error("not supported: {0}")]
    NotSupported(&'static str),

    /// Second Kummer parameter at a pole of the series.
    #[error("Kummer parameter b = {0} is a non-positive integer")]
    KummerPole(f64),

    #[error("series did not converge after {terms} terms")]
    Accuracy { terms: usize },

    /// The radial grid does not reach far enough into the Gaussian tail.
    #[error("grid truncates the wavefunction: delta * rho_inf^2 = {reached} < {required}")]
    Truncation { reached: f64, required: f64 },

    #[error("contract violation: {0}")]
    Contract(&'static str),

    /// Spinor denominator vanishes or changes sign (outside the positive-energy regime).
    #[error("spinor construction failed: denominator {0} <= 0")]
    Construction(f64),

    #[error("eigenvalue bisection failed to bracket index {index}")]
    Bisection { index: usize },

    #[error("invalid grid: {0}")]
    Grid(&'static str),
}

impl Error {
    pub(crate) fn domain<T: num_traits::ToPrimitive>(
        name: &'static str,
        value: T,
        reason: &'static str,
    ) -> Self {
        Error::Domain {
            name,
            value: value.to_f64().unwrap_or(f64::NAN),
            reason,
        }
    }
}
