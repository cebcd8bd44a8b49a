//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! Geometry, automaton updates, and energy bookkeeping are written against
//! [`Scalar`] so the same code runs in `f32` or `f64`. The experiment harness
//! and its file formats are pinned to `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; exact for `f64`.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    fn of_count(n: usize) -> Self {
        Self::from_usize(n).expect("count is representable")
    }

    /// Slack used when deciding whether a battery can sustain a debit, so that
    /// repeated subtraction of the same amount is not cut short by rounding.
    fn budget_slack(amount: Self) -> Self {
        amount.abs() * Self::epsilon() * Self::of(64.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// `true` when `available` covers `required` up to accumulated rounding.
pub fn can_afford<S: Scalar>(available: S, required: S) -> bool {
    available >= required - S::budget_slack(required)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_slices_fit_in_unit_budget() {
        fn slices<S: Scalar>() -> usize {
            let mut residual = S::one();
            let slice = S::of(0.2);
            let mut n = 0;
            while can_afford(residual, slice) {
                residual = (residual - slice).max(S::zero());
                n += 1;
            }
            n
        }
        assert_eq!(slices::<f64>(), 5);
        assert_eq!(slices::<f32>(), 5);
    }

    #[test]
    fn slack_is_relative() {
        assert!(!can_afford(0.19f64, 0.2));
        assert!(can_afford(0.2f64 - 1e-17, 0.2));
    }
}
