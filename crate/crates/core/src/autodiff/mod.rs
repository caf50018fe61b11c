//! Forward-mode differentiation by operator overloading.
//!
//! Every system is a single generic function over [`Scalar`]; the helpers
//! here instantiate it with [`Dual`] for Jacobians and with [`Jet`] for
//! directional derivatives up to third order.

mod dual;
mod jet;
mod matrix;

pub use dual::Dual;
pub use jet::Jet;
pub use matrix::{dot, invert_f64, solve_f64, IntervalMatrix};

use crate::error::DomainError;
use crate::interval::Interval;
use crate::system::{ParamSystem, System};

/// Value and Jacobian enclosures of `f` over `x`.
pub fn jacobian<const N: usize, F: System<N>>(
    f: &F,
    x: &[Interval; N],
) -> Result<([Interval; N], IntervalMatrix<N, N>), DomainError> {
    let out = f.eval(&Dual::<Interval, N>::seed(x))?;
    let value = out.map(|d| d.value);
    let jac = IntervalMatrix(out.map(|d| d.partials));
    if value
        .iter()
        .chain(jac.0.iter().flatten())
        .all(Interval::is_finite)
    {
        Ok((value, jac))
    } else {
        Err(DomainError::NonFinite)
    }
}

/// Floating-point value and Jacobian, for Newton iterations.
pub fn jacobian_f64<const N: usize, F: System<N>>(
    f: &F,
    x: &[f64; N],
) -> Result<([f64; N], [[f64; N]; N]), DomainError> {
    let out = f.eval(&Dual::<f64, N>::seed(x))?;
    Ok((out.map(|d| d.value), out.map(|d| d.partials)))
}

/// Taylor jets of each component of `f` along `x0 + t v`.
///
/// Coefficient `k` of component `i` encloses `D^k f_i(x0)(v,..,v) / k!`
/// for every `x0` in the given enclosure.
pub fn directional_jet<const N: usize, F: System<N>>(
    f: &F,
    x0: &[Interval; N],
    v: &[Interval; N],
) -> Result<[Jet<Interval>; N], DomainError> {
    let line: [Jet<Interval>; N] = std::array::from_fn(|i| Jet::line(x0[i], v[i]));
    f.eval(&line)
}

/// Enclosure of `dF/dmu` at `(x0, mu0)`.
pub fn param_derivative<const N: usize, P: ParamSystem<N>>(
    f: &P,
    x0: &[Interval; N],
    mu0: Interval,
) -> Result<[Interval; N], DomainError> {
    let x = x0.map(Dual::<Interval, 1>::constant);
    let out = f.eval_mu(&x, Dual::variable(mu0, 0))?;
    Ok(out.map(|d| d.partials[0]))
}

/// Enclosure of `DF_mu(x0, mu0) v`, the parameter derivative of the
/// directional derivative.
pub fn mixed_derivative<const N: usize, P: ParamSystem<N>>(
    f: &P,
    x0: &[Interval; N],
    v: &[Interval; N],
    mu0: Interval,
) -> Result<[Interval; N], DomainError> {
    type M = Dual<Interval, 1>;
    let x: [Jet<M>; N] = std::array::from_fn(|i| Jet::line(M::constant(x0[i]), M::constant(v[i])));
    let mu = Jet::constant(M::variable(mu0, 0));
    let out = f.eval_mu(&x, mu)?;
    Ok(out.map(|j| j.coeffs[1].partials[0]))
}
