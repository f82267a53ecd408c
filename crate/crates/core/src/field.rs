//! Functions that can report their partial derivatives at a point.

use crate::poly::Poly;

/// A smooth function `v` with access to `∂^α v(x)`.
///
/// Implementations may return a non-finite value where a partial does not
/// exist (for example at a singular point); consumers reject such values.
pub trait Field: Sync {
    fn dim(&self) -> usize;

    fn partial(&self, x: &[f64], alpha: &[usize]) -> f64;

    fn value(&self, x: &[f64]) -> f64 {
        self.partial(x, &vec![0; self.dim()])
    }
}

impl Field for Poly {
    fn dim(&self) -> usize {
        Poly::dim(self)
    }

    fn partial(&self, x: &[f64], alpha: &[usize]) -> f64 {
        self.derivative(alpha).eval(x)
    }
}

/// Adapts a closure `(x, α) -> ∂^α v(x)`.
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F> FnField<F>
where
    F: Fn(&[f64], &[usize]) -> f64 + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F> Field for FnField<F>
where
    F: Fn(&[f64], &[usize]) -> f64 + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn partial(&self, x: &[f64], alpha: &[usize]) -> f64 {
        (self.f)(x, alpha)
    }
}
