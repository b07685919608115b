//! Classical transverse Gaussian beam at the detector port.
//!
//! The output field is a superposition of unit-width Gaussians
//! `Σ c_j exp(-(y - s_j)²)`, one per route, each displaced by the sum of the
//! mirror shifts along its route. Both detector signals reduce to closed-form
//! overlap integrals of pairs of components:
//!
//! ```text
//! ∫ e^{-(y-a)²} e^{-(y-b)²} dy             = sqrt(π/2) e^{-(a-b)²/2}
//! ∫ sign(y) e^{-(y-a)²} e^{-(y-b)²} dy     = sqrt(π/2) e^{-(a-b)²/2} erf((a+b)/√2)
//! ```
//!
//! The quadrature routines exist only as an independent check on these.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scenario::{MirrorId, Scenario};

const SQRT_HALF_PI: f64 = 1.253_314_137_315_500_3;

/// Largest per-mirror displacement accepted by [`second_order_intensity`].
pub const SECOND_ORDER_SHIFT_BOUND: f64 = 0.05;

/// `coeff · exp(-(y - shift)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamComponent {
    pub coeff: Complex64,
    pub shift: f64,
}

impl BeamComponent {
    pub fn new(coeff: Complex64, shift: f64) -> Self {
        BeamComponent { coeff, shift }
    }

    pub fn real(coeff: f64, shift: f64) -> Self {
        BeamComponent {
            coeff: Complex64::new(coeff, 0.0),
            shift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BeamField {
    pub components: Vec<BeamComponent>,
}

impl BeamField {
    pub fn new(components: Vec<BeamComponent>) -> Self {
        BeamField { components }
    }

    pub fn value(&self, y: f64) -> Complex64 {
        self.components
            .iter()
            .map(|c| c.coeff * (-(y - c.shift).powi(2)).exp())
            .sum()
    }

    pub fn intensity(&self, y: f64) -> f64 {
        self.value(y).norm_sqr()
    }

    /// Same field with every shift moved by `offset`.
    pub fn translated(&self, offset: f64) -> Self {
        BeamField {
            components: self
                .components
                .iter()
                .map(|c| BeamComponent::new(c.coeff, c.shift + offset))
                .collect(),
        }
    }

    /// Hermitian double sum `Σ_jk c_j conj(c_k) kernel(s_j, s_k)`, real part.
    fn pair_sum(&self, kernel: impl Fn(f64, f64) -> f64) -> f64 {
        let mut total = 0.0;
        for a in &self.components {
            for b in &self.components {
                total += (a.coeff * b.coeff.conj()).re * kernel(a.shift, b.shift);
            }
        }
        total
    }
}

/// Output field at time `t`: arm C with weight `κ`, the route through A with
/// weight −1 and the route through B with weight `e^{iφ}`. Zero-weight
/// components are dropped.
pub fn field_at(scenario: &Scenario, t: f64) -> BeamField {
    let [d_a, d_b, d_c, d_e, d_f] = scenario.shifts(t);
    let candidates = [
        BeamComponent::real(scenario.kappa(), d_c),
        BeamComponent::real(-1.0, d_a + d_e + d_f),
        BeamComponent::new(Complex64::from_polar(1.0, scenario.phi()), d_b + d_e + d_f),
    ];
    BeamField::new(
        candidates
            .into_iter()
            .filter(|c| c.coeff.norm() != 0.0)
            .collect(),
    )
}

/// A beam reflected off a single vibrating mirror and nothing else.
pub fn single_mirror_field(scenario: &Scenario, mirror: MirrorId, t: f64) -> BeamField {
    BeamField::new(vec![BeamComponent::real(1.0, scenario.shift(mirror, t))])
}

/// `I_T = ∫ |Ψ(y)|² dy`.
pub fn total_intensity(field: &BeamField) -> f64 {
    SQRT_HALF_PI * field.pair_sum(|a, b| (-(a - b).powi(2) / 2.0).exp())
}

/// Quad-cell output `ΔI = ∫_0^∞ |Ψ|² − ∫_{-∞}^0 |Ψ|²`.
pub fn quadcell_signal(field: &BeamField) -> f64 {
    quadcell_signal_with(field, libm::erf)
}

/// [`quadcell_signal`] with a caller-supplied error function.
pub fn quadcell_signal_with(field: &BeamField, erf: impl Fn(f64) -> f64) -> f64 {
    SQRT_HALF_PI
        * field.pair_sum(|a, b| {
            (-(a - b).powi(2) / 2.0).exp() * erf((a + b) / std::f64::consts::SQRT_2)
        })
}

fn check_grid(half_width: f64, step: f64) -> Result<usize> {
    if !(half_width >= 8.0 && half_width.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "half_width must be >= 8, got {half_width}"
        )));
    }
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::InvalidGrid(format!(
            "step must lie in (0, 0.01], got {step}"
        )));
    }
    // Simpson needs an even number of intervals
    let mut n = (half_width / step).round() as usize;
    if n % 2 == 1 {
        n += 1;
    }
    Ok(n)
}

/// Composite Simpson integral of `f` over `[0, len]` with `n` (even) intervals.
fn simpson(f: impl Fn(f64) -> f64, len: f64, n: usize) -> f64 {
    let h = len / n as f64;
    let mut acc = f(0.0) + f(len);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(i as f64 * h);
    }
    acc * h / 3.0
}

/// `(∫_{-W}^0 |Ψ|², ∫_0^W |Ψ|²)` by composite Simpson.
fn half_line_integrals(field: &BeamField, half_width: f64, step: f64) -> Result<(f64, f64)> {
    let n = check_grid(half_width, step)?;
    let neg = simpson(|y| field.intensity(-y), half_width, n);
    let pos = simpson(|y| field.intensity(y), half_width, n);
    Ok((neg, pos))
}

/// Fixed-rule quadrature of `∫ |Ψ|² dy` on `[-half_width, half_width]`.
pub fn total_intensity_quadrature(field: &BeamField, half_width: f64, step: f64) -> Result<f64> {
    let (neg, pos) = half_line_integrals(field, half_width, step)?;
    Ok(neg + pos)
}

/// Fixed-rule quadrature of the quad-cell difference.
pub fn quadcell_quadrature(field: &BeamField, half_width: f64, step: f64) -> Result<f64> {
    let (neg, pos) = half_line_integrals(field, half_width, step)?;
    Ok(pos - neg)
}

/// Detector signals of the first-order field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearizedSignals {
    pub total: f64,
    pub quad: f64,
}

/// `(S, D)` with `Ψ_lin(y) = e^{-y²} (S + 2 y D)`, `S = Σ c_j`, `D = Σ c_j s_j`.
fn linear_coefficients(field: &BeamField) -> (Complex64, Complex64) {
    let s = field.components.iter().map(|c| c.coeff).sum();
    let d = field.components.iter().map(|c| c.coeff * c.shift).sum();
    (s, d)
}

/// Field obtained by expanding every component to first order in its shift,
/// `e^{-(y-d)²} ≈ e^{-y²} (1 + 2 y d)`.
pub fn linearized_field_value(scenario: &Scenario, t: f64, y: f64) -> Complex64 {
    let (s, d) = linear_coefficients(&field_at(scenario, t));
    (-y * y).exp() * (s + 2.0 * y * d)
}

/// Total intensity and quad-cell signal of the first-order field.
///
/// With `|Ψ_lin|² = e^{-2y²}(|S|² + 4y Re(S D*) + 4y²|D|²)` and the moments
/// `∫e^{-2y²} = sqrt(π/2)`, `∫y²e^{-2y²} = sqrt(π/2)/4`, `∫|y|e^{-2y²} = 1/2`:
///
/// ```text
/// I_T,lin = sqrt(π/2) (|S|² + |D|²)
/// ΔI_lin  = 2 Re(S D*)
/// ```
///
/// This is a uniform first-order reconstruction; for arm C blocked it reduces
/// to the field `2y e^{-y²}(d_B − d_A)` and a vanishing quad-cell signal.
pub fn linearized_field_intensity(scenario: &Scenario, t: f64) -> LinearizedSignals {
    let (s, d) = linear_coefficients(&field_at(scenario, t));
    LinearizedSignals {
        total: SQRT_HALF_PI * (s.norm_sqr() + d.norm_sqr()),
        quad: 2.0 * (s * d.conj()).re,
    }
}

/// Total intensity expanded to second order in the shift differences,
/// `sqrt(π/2) [Σ|c_j|² + Σ_{j≠k} Re(c_j c_k*) (1 − Δ_jk²/2)]`.
///
/// Fails if any single mirror displacement at `t` exceeds
/// [`SECOND_ORDER_SHIFT_BOUND`].
pub fn second_order_intensity(scenario: &Scenario, t: f64) -> Result<f64> {
    for shift in scenario.shifts(t) {
        if shift.abs() > SECOND_ORDER_SHIFT_BOUND {
            return Err(Error::ShiftBound {
                shift,
                bound: SECOND_ORDER_SHIFT_BOUND,
            });
        }
    }
    let field = field_at(scenario, t);
    let mut total = 0.0;
    for (j, a) in field.components.iter().enumerate() {
        for (k, b) in field.components.iter().enumerate() {
            let w = (a.coeff * b.coeff.conj()).re;
            total += if j == k {
                w
            } else {
                w * (1.0 - (a.shift - b.shift).powi(2) / 2.0)
            };
        }
    }
    Ok(SQRT_HALF_PI * total)
}
