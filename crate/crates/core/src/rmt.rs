//! Random-matrix predictions for low-lying zeros and the test functions they
//! are evaluated on.
//!
//! Fourier convention: `φ̂(u) = ∫ φ(x) e^{−2πixu} dx`. Densities `W₁` are
//! carried as a delta coefficient at the origin plus a regular part, so
//! quadrature never has to integrate a distribution.

use alloc::format;
use num_complex::Complex64;

use crate::error::domain;
use crate::math::{abs, sinc_pi, PI};
use crate::quad::GaussLegendre;
use crate::{Error, Result};

/// Shape of a test-function pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// `φ̂(u) = (1 − |u|/σ)⁺`, `φ(x) = σ (sin πσx / πσx)²`.
    Fejer,
    /// Pointwise square of the Fejér `φ`. Its transform is the
    /// self-convolution of the Fejér triangle, a cubic B-spline.
    FejerSquared,
}

/// Even test function with compactly supported Fourier transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunction {
    shape: Shape,
    /// Width parameter of the underlying Fejér triangle.
    sigma: f64,
    amplitude: f64,
}

impl TestFunction {
    /// Fejér kernel with `supp φ̂ = [−σ, σ]`.
    pub fn fejer(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(TestFunction { shape: Shape::Fejer, sigma, amplitude: 1.0 })
    }

    /// Squared Fejér kernel with `supp φ̂ = [−support, support]`.
    pub fn fejer_squared(support: f64) -> Result<Self> {
        check_sigma(support)?;
        Ok(TestFunction { shape: Shape::FejerSquared, sigma: support / 2.0, amplitude: 1.0 })
    }

    /// Build from a shape name and support radius.
    pub fn from_shape(shape: Shape, support: f64) -> Result<Self> {
        match shape {
            Shape::Fejer => Self::fejer(support),
            Shape::FejerSquared => Self::fejer_squared(support),
        }
    }

    /// Multiply both sides of the pair by `a`.
    pub fn scaled(mut self, a: f64) -> Self {
        self.amplitude *= a;
        self
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// Support radius of `φ̂`.
    pub fn support(&self) -> f64 {
        match self.shape {
            Shape::Fejer => self.sigma,
            Shape::FejerSquared => 2.0 * self.sigma,
        }
    }

    pub fn phi(&self, x: f64) -> f64 {
        let s = self.sigma;
        let f = s * sinc_pi(s * x) * sinc_pi(s * x);
        self.amplitude
            * match self.shape {
                Shape::Fejer => f,
                Shape::FejerSquared => f * f,
            }
    }

    /// `φ` continued to complex arguments.
    pub fn phi_complex(&self, z: Complex64) -> Complex64 {
        let s = self.sigma;
        let w = z * (PI * s);
        let sinc = if w.norm() < 1e-6 { Complex64::new(1.0, 0.0) - w * w / 6.0 } else { w.sin() / w };
        let f = sinc * sinc * s;
        self.amplitude
            * match self.shape {
                Shape::Fejer => f,
                Shape::FejerSquared => f * f,
            }
    }

    pub fn phi_hat(&self, u: f64) -> f64 {
        let s = self.sigma;
        let v = abs(u) / s;
        self.amplitude
            * match self.shape {
                Shape::Fejer => (1.0 - v).max(0.0),
                Shape::FejerSquared => s * cubic_bspline(v),
            }
    }

    pub fn phi0(&self) -> f64 {
        let s = self.sigma;
        self.amplitude
            * match self.shape {
                Shape::Fejer => s,
                Shape::FejerSquared => s * s,
            }
    }

    pub fn phi_hat0(&self) -> f64 {
        self.amplitude
            * match self.shape {
                Shape::Fejer => 1.0,
                Shape::FejerSquared => 2.0 * self.sigma / 3.0,
            }
    }

    /// Kinks of `φ̂` on `[0, ∞)`; between them `φ̂` is a polynomial.
    pub fn breakpoints(&self) -> alloc::vec::Vec<f64> {
        match self.shape {
            Shape::Fejer => alloc::vec![0.0, self.sigma],
            Shape::FejerSquared => alloc::vec![0.0, self.sigma, 2.0 * self.sigma],
        }
    }

    /// Leading-order mass `∫_{|x|>X} φ(x) dx`. Exact to `O(X⁻³)` for the Fejér
    /// shape when `σX` is an integer.
    pub fn tail_mass(&self, x: f64) -> f64 {
        let s = self.sigma;
        self.amplitude
            * match self.shape {
                Shape::Fejer => 1.0 / (PI * PI * s * x),
                Shape::FejerSquared => 1.0 / (4.0 * PI * PI * PI * PI * s * s * x * x * x),
            }
    }

    /// Natural spacing of the oscillation of `φ`.
    pub fn period(&self) -> f64 {
        1.0 / self.sigma
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(domain!("support radius must be positive and finite, got {sigma}"));
    }
    Ok(())
}

/// Cardinal cubic B-spline on `[−2, 2]` with unit integral.
fn cubic_bspline(v: f64) -> f64 {
    let v = abs(v);
    if v < 1.0 {
        2.0 / 3.0 - v * v + v * v * v / 2.0
    } else if v < 2.0 {
        let w = 2.0 - v;
        w * w * w / 6.0
    } else {
        0.0
    }
}

/// Random-matrix symmetry type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryGroup {
    U,
    Sp,
    O,
    SOeven,
    SOodd,
}

impl SymmetryGroup {
    pub const ALL: [SymmetryGroup; 5] =
        [SymmetryGroup::U, SymmetryGroup::Sp, SymmetryGroup::O, SymmetryGroup::SOeven, SymmetryGroup::SOodd];

    /// `sign(G)` for the orthogonal groups: 0 for SO(even), ½ for O, 1 for
    /// SO(odd).
    pub fn sign(&self) -> Option<f64> {
        match self {
            SymmetryGroup::SOeven => Some(0.0),
            SymmetryGroup::O => Some(0.5),
            SymmetryGroup::SOodd => Some(1.0),
            _ => None,
        }
    }

    pub fn is_orthogonal(&self) -> bool {
        self.sign().is_some()
    }

    /// Group matching a symmetry constant `c ∈ {−1, 0, 1}`.
    pub fn from_symmetry_constant(c: i8) -> Option<Self> {
        match c {
            1 => Some(SymmetryGroup::Sp),
            0 => Some(SymmetryGroup::U),
            -1 => Some(SymmetryGroup::O),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SymmetryGroup::U => "U",
            SymmetryGroup::Sp => "Sp",
            SymmetryGroup::O => "O",
            SymmetryGroup::SOeven => "SOeven",
            SymmetryGroup::SOodd => "SOodd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain!("unknown symmetry group {s:?}"))
    }
}

/// `η(u)`: 1, ½, 0 for `|u|` below, at, above 1.
pub fn eta(u: f64) -> f64 {
    let a = abs(u);
    if a < 1.0 {
        1.0
    } else if a == 1.0 {
        0.5
    } else {
        0.0
    }
}

/// `Ŵ₁(u)` as `(coefficient of δ(u), regular part)`.
pub fn fourier_density(g: SymmetryGroup, u: f64) -> (f64, f64) {
    let h = 0.5 * eta(u);
    let regular = match g {
        SymmetryGroup::U => 0.0,
        SymmetryGroup::Sp => -h,
        SymmetryGroup::O => 0.5,
        SymmetryGroup::SOeven => h,
        SymmetryGroup::SOodd => 1.0 - h,
    };
    (1.0, regular)
}

/// `W₁(x)` as `(coefficient of δ(x), regular part)`.
pub fn density_one_point(g: SymmetryGroup, x: f64) -> (f64, f64) {
    let k = sinc_pi(2.0 * x);
    match g {
        SymmetryGroup::U => (0.0, 1.0),
        SymmetryGroup::Sp => (0.0, 1.0 - k),
        SymmetryGroup::SOeven => (0.0, 1.0 + k),
        SymmetryGroup::SOodd => (1.0, 1.0 - k),
        SymmetryGroup::O => (0.5, 1.0),
    }
}

/// `∫ φ Ŵ₁` in closed form plus the rank term `r·φ(0)`.
///
/// For `supp φ̂ ⊂ (−1, 1)` the orthogonal groups agree at `φ̂(0) + ½φ(0)`,
/// the symplectic group gives `φ̂(0) − ½φ(0)` and the unitary group `φ̂(0)`.
pub fn one_level_prediction(g: SymmetryGroup, phi: &TestFunction, rank: f64) -> Result<f64> {
    if phi.support() >= 1.0 {
        return Err(Error::Unsupported(format!(
            "one-level prediction needs supp(phi_hat) inside (-1, 1), got radius {}",
            phi.support()
        )));
    }
    let half = 0.5 * phi.phi0();
    let base = match g {
        SymmetryGroup::U => phi.phi_hat0(),
        SymmetryGroup::Sp => phi.phi_hat0() - half,
        _ => phi.phi_hat0() + half,
    };
    Ok(base + rank * phi.phi0())
}

/// `∫ f̂₁ f̂₂ · w` over the common support, exact up to rounding for the
/// piecewise-polynomial transforms in the library.
fn fourier_product_integral(f1: &TestFunction, f2: &TestFunction, weight_abs: bool) -> f64 {
    let gl = GaussLegendre::new(12);
    let limit = f1.support().min(f2.support());
    let mut cuts: alloc::vec::Vec<f64> =
        f1.breakpoints().into_iter().chain(f2.breakpoints()).filter(|b| *b <= limit).collect();
    cuts.push(limit);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    cuts.dedup();
    let half = gl.integrate_piecewise(
        |u| {
            let w = if weight_abs { u } else { 1.0 };
            w * f1.phi_hat(u) * f2.phi_hat(u)
        },
        &cuts,
        1,
    );
    2.0 * half
}

/// `(f₁f₂)^(0) = ∫ f₁ f₂ dx`, evaluated on the Fourier side (Plancherel).
pub fn product_transform_at_zero(f1: &TestFunction, f2: &TestFunction) -> f64 {
    fourier_product_integral(f1, f2, false)
}

/// Two-level density prediction for an orthogonal group:
///
/// `[f̂₁(0) + ½f₁(0)][f̂₂(0) + ½f₂(0)] + 2∫|u| f̂₁(u) f̂₂(u) du − 2(f₁f₂)^(0)
///  − f₁(0)f₂(0) + sign(G) f₁(0)f₂(0)`,
///
/// valid when `supp f̂₁ + supp f̂₂ < 1`.
pub fn two_level_prediction(g: SymmetryGroup, f1: &TestFunction, f2: &TestFunction) -> Result<f64> {
    let sign = g
        .sign()
        .ok_or_else(|| Error::Unsupported(format!("two-level prediction needs an orthogonal group, got {}", g.name())))?;
    if f1.support() + f2.support() >= 1.0 {
        return Err(Error::Unsupported(format!(
            "two-level prediction needs supp f1 + supp f2 < 1, got {}",
            f1.support() + f2.support()
        )));
    }
    let a = f1.phi_hat0() + 0.5 * f1.phi0();
    let b = f2.phi_hat0() + 0.5 * f2.phi0();
    let cross = 2.0 * fourier_product_integral(f1, f2, true);
    let prod0 = product_transform_at_zero(f1, f2);
    let p00 = f1.phi0() * f2.phi0();
    Ok(a * b + cross - 2.0 * prod0 - p00 + sign * p00)
}

/// `∫ φ̂ Ŵ₁` by quadrature on the Fourier side.
pub fn fourier_side_integral(g: SymmetryGroup, phi: &TestFunction) -> f64 {
    let gl = GaussLegendre::new(12);
    let s = phi.support();
    let mut cuts = phi.breakpoints();
    if s > 1.0 {
        cuts.push(1.0);
    }
    cuts.push(s);
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    cuts.dedup();
    let regular = 2.0 * gl.integrate_piecewise(|u| phi.phi_hat(u) * fourier_density(g, u).1, &cuts, 1);
    phi.phi_hat0() + regular
}

/// `∫ φ W₁` by quadrature in `x` over `[−X, X]` plus the analytic tail of
/// `φ` beyond `X` and the delta atom. `X` is rounded to a multiple of the
/// oscillation period of `φ`.
pub fn spatial_integral(g: SymmetryGroup, phi: &TestFunction, half_width: f64) -> f64 {
    let period = phi.period();
    let x_max = libm::ceil(half_width / period) * period;
    let panels = libm::ceil(2.0 * x_max) as usize;
    let gl = GaussLegendre::new(16);
    let body = 2.0 * gl.integrate_composite(|x| phi.phi(x) * density_one_point(g, x).1, 0.0, x_max, panels.max(1));
    // W₁ → 1 at infinity; the ±sinc(2πx) correction decays fast enough to drop.
    let tail = phi.tail_mass(x_max);
    let (delta, _) = density_one_point(g, 0.0);
    body + tail + delta * phi.phi0()
}

/// Value of `φ` at `x` recovered from `φ̂` by quadrature.
pub fn inverse_transform(phi: &TestFunction, x: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    let mut cuts = phi.breakpoints();
    cuts.push(phi.support());
    cuts.dedup();
    let panels = 4 + libm::ceil(4.0 * abs(x) * phi.support()) as usize;
    2.0 * gl.integrate_piecewise(|u| phi.phi_hat(u) * libm::cos(2.0 * PI * u * x), &cuts, panels)
}
