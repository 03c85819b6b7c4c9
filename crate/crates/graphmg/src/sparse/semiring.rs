//! Generalized semiring products.
//!
//! A [`Semiring`] supplies the two operations of a matrix-vector product over
//! `(reduce, combine)` in place of `(+, *)`: `combine` maps a stored matrix
//! entry and an input vector element to an intermediate value, and `reduce`
//! folds intermediates into an output element.
//!
//! Contract required by [`super::dist::spmv_semiring`]: `reduce` must be
//! associative **and commutative**, with `identity()` as its neutral element.
//! Commutativity is what makes the product independent of how the matrix is
//! split into blocks: each output row folds its contributions in whatever
//! order the block layout induces. Selection-style reductions (min, max,
//! argmin with a total tie-break order) are then bitwise reproducible across
//! layouts; floating-point accumulation is reproducible up to roundoff
//! reassociation.

pub trait Semiring {
    /// Stored matrix entry type.
    type MatrixElem;
    /// Input vector element type.
    type Input;
    /// Output vector element type.
    type Output: Clone;

    /// The `combine` (`⊗`) step applied per stored entry.
    fn combine(&self, e: &Self::MatrixElem, x: &Self::Input) -> Self::Output;

    /// The `reduce` (`⊕`) step folding per-row contributions. Must be
    /// associative and commutative.
    fn reduce(&self, a: Self::Output, b: Self::Output) -> Self::Output;

    /// Neutral element of `reduce`; rows with no stored entries produce this.
    fn identity(&self) -> Self::Output;
}

/// Standard arithmetic: `combine = *`, `reduce = +`, identity `0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlusTimes;

impl Semiring for PlusTimes {
    type MatrixElem = f64;
    type Input = f64;
    type Output = f64;

    fn combine(&self, e: &f64, x: &f64) -> f64 {
        e * x
    }

    fn reduce(&self, a: f64, b: f64) -> f64 {
        a + b
    }

    fn identity(&self) -> f64 {
        0.0
    }
}

/// Tropical arithmetic: `combine = +`, `reduce = min`, identity `+inf`.
/// One product relaxes shortest-path distances by one hop.
#[derive(Debug, Clone, Copy, Default)]
pub struct MinPlus;

impl Semiring for MinPlus {
    type MatrixElem = f64;
    type Input = f64;
    type Output = f64;

    fn combine(&self, e: &f64, x: &f64) -> f64 {
        e + x
    }

    fn reduce(&self, a: f64, b: f64) -> f64 {
        a.min(b)
    }

    fn identity(&self) -> f64 {
        f64::INFINITY
    }
}

/// Boolean reachability over a pattern: an entry passes its input through,
/// rows reduce by `or`. One product expands a frontier by one hop.
#[derive(Debug, Clone, Copy, Default)]
pub struct OrPattern;

impl Semiring for OrPattern {
    type MatrixElem = f64;
    type Input = bool;
    type Output = bool;

    fn combine(&self, _e: &f64, x: &bool) -> bool {
        *x
    }

    fn reduce(&self, a: bool, b: bool) -> bool {
        a || b
    }

    fn identity(&self) -> bool {
        false
    }
}
