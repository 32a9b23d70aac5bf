//! Truncated formal-parameter series.
//!
//! An [`HPoly`] holds coefficients for powers 0..=N of the formal parameter;
//! every operation truncates at power N+1. The cap is data, not a global:
//! mixing two caps takes the minimum, so one pipeline can carry several
//! truncation orders.

use crate::scalar::Scalar;

/// Coefficient module for a truncated series.
pub trait SeriesCoeff: Clone {
    fn zero_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn is_zero(&self) -> bool;
}

impl SeriesCoeff for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn scale(&self, s: &Scalar) -> Self {
        self * s
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

/// Series sum_{m=0..=cap} h^m * coeff[m], truncated at h^{cap+1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPoly<T> {
    coeffs: Vec<T>,
}

impl<T: SeriesCoeff> HPoly<T> {
    /// Series with the given coefficients for powers 0..=coeffs.len()-1.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the constant term"
        );
        HPoly { coeffs }
    }

    pub fn constant(c: T, cap: usize) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![c];
        coeffs.resize(cap + 1, zero);
        HPoly { coeffs }
    }

    pub fn order_cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, m: usize) -> &T {
        &self.coeffs[m]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SeriesCoeff::is_zero)
    }

    /// Sum; the result cap is the minimum of the operand caps.
    pub fn add(&self, other: &Self) -> Self {
        let cap = self.order_cap().min(other.order_cap());
        let coeffs = (0..=cap)
            .map(|m| self.coeffs[m].add(&other.coeffs[m]))
            .collect();
        HPoly { coeffs }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        HPoly {
            coeffs: self.coeffs.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn negate(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    /// Cauchy product truncated at the minimum cap. The coefficient product
    /// is supplied by the caller, so the same series type serves any
    /// bilinear multiplication.
    pub fn mul_with<F>(&self, other: &Self, mut mul: F) -> Self
    where
        F: FnMut(&T, &T) -> T,
    {
        let cap = self.order_cap().min(other.order_cap());
        let zero = self.coeffs[0].zero_like();
        let mut coeffs = vec![zero; cap + 1];
        for i in 0..=cap {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(cap - i) {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = mul(&self.coeffs[i], &other.coeffs[j]);
                coeffs[i + j] = coeffs[i + j].add(&prod);
            }
        }
        HPoly { coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn poly(vals: &[i64]) -> HPoly<Scalar> {
        HPoly::new(vals.iter().map(|&v| s(v)).collect())
    }

    #[test]
    fn truncated_product() {
        // (1 + h)(1 + h) = 1 + 2h + h^2, capped at h^2
        let p = poly(&[1, 1, 0]);
        let q = p.mul_with(&p, |a, b| a * b);
        assert_eq!(q, poly(&[1, 2, 1]));
        // capped at h^1 the square term disappears
        let short = poly(&[1, 1]);
        assert_eq!(short.mul_with(&short, |a, b| a * b), poly(&[1, 2]));
    }

    #[test]
    fn mixed_caps_take_minimum() {
        let a = poly(&[1, 2, 3, 4]);
        let b = poly(&[1, 1]);
        assert_eq!(a.add(&b).order_cap(), 1);
        assert_eq!(a.mul_with(&b, |x, y| x * y).order_cap(), 1);
    }

    #[test]
    fn product_cap_matches_operand_cap() {
        // multiplying two caps N yields cap N
        let a = poly(&[0, 1, 0]);
        let sq = a.mul_with(&a, |x, y| x * y);
        assert_eq!(sq.order_cap(), 2);
        assert_eq!(sq, poly(&[0, 0, 1]));
    }
}
