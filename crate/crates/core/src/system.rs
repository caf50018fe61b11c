//! Square systems of equations written once against [`Scalar`].

use crate::error::DomainError;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// A map `R^N -> R^N` whose zeros are sought.
pub trait System<const N: usize>: Sync {
    /// Stable identifier written into certificates.
    fn id(&self) -> String;

    fn eval<S: Scalar>(&self, x: &[S; N]) -> Result<[S; N], DomainError>;
}

/// A system depending on one real parameter `mu`.
pub trait ParamSystem<const N: usize>: Sync {
    fn id(&self) -> String;

    fn eval_mu<S: Scalar>(&self, x: &[S; N], mu: S) -> Result<[S; N], DomainError>;

    /// The system with the parameter frozen to an enclosure.
    fn at(&self, mu: Interval) -> AtParam<'_, Self>
    where
        Self: Sized,
    {
        AtParam { sys: self, mu }
    }
}

/// A [`ParamSystem`] with its parameter fixed.
#[derive(Clone, Copy, Debug)]
pub struct AtParam<'a, P: ?Sized> {
    pub sys: &'a P,
    pub mu: Interval,
}

impl<const N: usize, P: ParamSystem<N>> System<N> for AtParam<'_, P> {
    fn id(&self) -> String {
        format!("{}@{}", self.sys.id(), self.mu)
    }

    fn eval<S: Scalar>(&self, x: &[S; N]) -> Result<[S; N], DomainError> {
        self.sys.eval_mu(x, S::from_interval(self.mu))
    }
}

/// Evaluates at interval arguments, rejecting non-finite enclosures.
pub fn eval_interval<const N: usize, F: System<N>>(
    f: &F,
    x: &[Interval; N],
) -> Result<[Interval; N], DomainError> {
    let y = f.eval(x)?;
    if y.iter().all(Interval::is_finite) {
        Ok(y)
    } else {
        Err(DomainError::NonFinite)
    }
}
