//! Truncated power series in the small kick amplitude ε with complex
//! coefficients.

use std::ops::{Add, AddAssign, Mul, Neg};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `Σ_{k=0}^{order} c_k ε^k`. Products drop every power above the smaller of
/// the two operand orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EpsSeries {
    coeffs: Vec<Complex64>,
}

impl EpsSeries {
    pub fn zero(order: usize) -> Self {
        EpsSeries {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = value;
        s
    }

    /// `value · ε^power`, or the zero series if `power > order`.
    pub fn monomial(value: Complex64, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = value;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the constant term"
        );
        EpsSeries { coeffs }
    }

    /// `(1 + ε²)^{-1/2} = 1 − ε²/2 + 3ε⁴/8 − …`
    pub fn inv_sqrt_one_plus_eps_sq(order: usize) -> Self {
        let mut s = Self::zero(order);
        // binomial(-1/2, k), built by the ratio c_k / c_{k-1} = -(2k-1)/(2k)
        let mut c = 1.0;
        for k in 0..=order / 2 {
            if k > 0 {
                c *= -(2.0 * k as f64 - 1.0) / (2.0 * k as f64);
            }
            s.coeffs[2 * k] = Complex64::new(c, 0.0);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `ε^power`; zero beyond the truncation order.
    pub fn coeff(&self, power: usize) -> Complex64 {
        self.coeffs.get(power).copied().unwrap_or_default()
    }

    pub fn eval(&self, epsilon: f64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * epsilon + c)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        EpsSeries {
            coeffs: self.coeffs.iter().map(|&c| c * factor).collect(),
        }
    }

    /// Multiplies by `ε`, dropping the top coefficient.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs[..self.coeffs.len() - 1]);
        EpsSeries { coeffs }
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, Complex64::new(0.0, 0.0));
        EpsSeries { coeffs }
    }

    /// Real series of `|s(ε)|²` for real ε, through this series' order.
    pub fn abs_sq(&self) -> Vec<f64> {
        let n = self.coeffs.len();
        (0..n)
            .map(|k| {
                (0..=k)
                    .map(|i| (self.coeffs[i] * self.coeffs[k - i].conj()).re)
                    .sum()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

impl Add for &EpsSeries {
    type Output = EpsSeries;

    fn add(self, rhs: &EpsSeries) -> EpsSeries {
        let order = self.order().min(rhs.order());
        EpsSeries {
            coeffs: (0..=order)
                .map(|k| self.coeffs[k] + rhs.coeffs[k])
                .collect(),
        }
    }
}

impl AddAssign<&EpsSeries> for EpsSeries {
    fn add_assign(&mut self, rhs: &EpsSeries) {
        *self = &*self + rhs;
    }
}

impl Mul for &EpsSeries {
    type Output = EpsSeries;

    fn mul(self, rhs: &EpsSeries) -> EpsSeries {
        let order = self.order().min(rhs.order());
        let coeffs = (0..=order)
            .map(|k| (0..=k).map(|i| self.coeffs[i] * rhs.coeffs[k - i]).sum())
            .collect();
        EpsSeries { coeffs }
    }
}

impl Neg for &EpsSeries {
    type Output = EpsSeries;

    fn neg(self) -> EpsSeries {
        EpsSeries {
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn normalization_expansion() {
        let s = EpsSeries::inv_sqrt_one_plus_eps_sq(6);
        let expected = [1.0, 0.0, -0.5, 0.0, 3.0 / 8.0, 0.0, -5.0 / 16.0];
        for (k, &e) in expected.iter().enumerate() {
            assert_eq!(s.coeff(k), c(e), "power {k}");
        }
        // squared and multiplied by (1 + ε²) it is 1 through the order
        let one_plus =
            EpsSeries::from_coeffs(vec![c(1.0), c(0.0), c(1.0), c(0.0), c(0.0), c(0.0), c(0.0)]);
        let prod = &(&s * &s) * &one_plus;
        assert_eq!(prod.coeff(0), c(1.0));
        for k in 1..=6 {
            assert!(prod.coeff(k).norm() < 1e-15);
        }
        let eps = 0.01_f64;
        let exact = 1.0 / (1.0 + eps * eps).sqrt();
        assert!((s.eval(eps).re - exact).abs() < 1e-12);
    }

    #[test]
    fn truncated_product_drops_high_powers() {
        let x = EpsSeries::monomial(c(1.0), 1, 3);
        let x2 = &x * &x;
        let x4 = &x2 * &x2;
        assert_eq!(x2.coeff(2), c(1.0));
        assert!(x4.is_zero());
        let mixed = &EpsSeries::constant(c(2.0), 1) * &EpsSeries::monomial(c(1.0), 3, 4);
        assert_eq!(mixed.order(), 1);
        assert!(mixed.is_zero());
    }

    #[test]
    fn shift_and_abs_sq() {
        let s = EpsSeries::from_coeffs(vec![c(1.0), Complex64::new(0.0, 2.0), c(0.0)]);
        assert_eq!(
            s.shift_up().coeffs(),
            &[c(0.0), c(1.0), Complex64::new(0.0, 2.0)]
        );
        // |1 + 2iε|² = 1 + 4ε²
        assert_eq!(s.abs_sq(), vec![1.0, 0.0, 4.0]);
    }

    fn series_strategy() -> impl Strategy<Value = EpsSeries> {
        proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 5).prop_map(|v| {
            EpsSeries::from_coeffs(v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
        })
    }

    proptest! {
        #[test]
        fn eval_is_a_ring_homomorphism_up_to_truncation(a in series_strategy(), b in series_strategy(), eps in 0.0..0.1f64) {
            let sum = (&a + &b).eval(eps);
            prop_assert!((sum - a.eval(eps) - b.eval(eps)).norm() < 1e-12);
            // truncation error of the product is O(ε^5)
            let prod = (&a * &b).eval(eps);
            let bound = 25.0 * eps.powi(5) + 1e-12;
            prop_assert!((prod - a.eval(eps) * b.eval(eps)).norm() <= bound);
        }

        #[test]
        fn abs_sq_matches_pointwise(a in series_strategy(), eps in 0.0..0.1f64) {
            let series: f64 = a.abs_sq().iter().enumerate().map(|(k, v)| v * eps.powi(k as i32)).sum();
            let bound = 25.0 * eps.powi(5) + 1e-12;
            prop_assert!((series - a.eval(eps).norm_sqr()).abs() <= bound);
        }
    }
}
