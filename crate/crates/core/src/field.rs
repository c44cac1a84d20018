//! The scalar interface shared by the cyclotomic and mod-41 matrix code.

use std::fmt::{Debug, Display};
use std::hash::Hash;

/// A field whose elements have a unique canonical representation, so that
/// structural equality is field equality.
pub trait Field: Clone + Eq + Hash + Debug + Display + Send + Sync + 'static {
    /// Tag written in matrix file headers.
    const TAG: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    fn from_i64(n: i64) -> Self {
        let mut acc = Self::zero();
        let unit = if n < 0 { Self::one().neg() } else { Self::one() };
        for _ in 0..n.unsigned_abs() {
            acc = acc.add(&unit);
        }
        acc
    }
}
