//! Shared domain types: parameter records, validation, and sweep plumbing.
//!
//! All frequencies and rates are dimensionless, expressed in units of a
//! reference damping rate γ = 1. Phases are stored in radians and are never
//! wrapped implicitly; only [`EffectiveParams::theta`] reduces to `[0, 2π)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{wrap_two_pi, Real};

/// Coupling form used by the coupled-pendulum equations of motion.
///
/// `Symmetric` uses the plain constant `g` on both oscillators.
/// `FrequencyWeighted` uses `g·ω₁/ω₂` on the first and `g·ω₂/ω₁` on the
/// second; both forms share the same steady-state denominator because the
/// product of the two weights is `g²`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingForm {
    #[default]
    Symmetric,
    FrequencyWeighted,
}

/// Parameters of the two driven, damped, linearly coupled oscillators.
///
/// Both drives share the frequency `omega_d`; the stored phases are the
/// post-rotating-frame phases that enter the first-order amplitude
/// equations directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PendulumParams<T: Real> {
    pub omega1: T,
    pub omega2: T,
    pub gamma1: T,
    pub gamma2: T,
    pub g: T,
    pub f1: T,
    pub f2: T,
    pub phi1: T,
    pub phi2: T,
    pub omega_d: T,
    #[serde(default)]
    pub coupling: CouplingForm,
}

impl<T: Real> PendulumParams<T> {
    /// Detuning of the first oscillator from the drive, ω₁ − ω_d.
    pub fn delta1(&self) -> T {
        self.omega1 - self.omega_d
    }

    /// Detuning of the second oscillator from the drive, ω₂ − ω_d.
    pub fn delta2(&self) -> T {
        self.omega2 - self.omega_d
    }

    /// Returns the record unchanged if every invariant holds.
    pub fn validated(self) -> Result<Self> {
        validate_pendulum(&self)?;
        Ok(self)
    }

    /// Returns the same system with the oscillator indices exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            omega1: self.omega2,
            omega2: self.omega1,
            gamma1: self.gamma2,
            gamma2: self.gamma1,
            g: self.g,
            f1: self.f2,
            f2: self.f1,
            phi1: self.phi2,
            phi2: self.phi1,
            omega_d: self.omega_d,
            coupling: self.coupling,
        }
    }
}

/// Drive-level parameters of the two-mode cavity with a driven membrane.
///
/// Detunings are mode frequency minus the respective drive frequency; the
/// mechanical drive enters steady-state calculations only through
/// `delta_b1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptomechDriveParams<T: Real> {
    pub delta_a1: T,
    pub delta_a2: T,
    pub delta_b1: T,
    pub j: T,
    pub g11: T,
    pub g21: T,
    pub eps_a1: T,
    pub eps_a2: T,
    pub phi_a1: T,
    pub phi_a2: T,
    pub eps_b1: T,
    pub gamma_a1: T,
    pub gamma_a2: T,
    pub gamma_b1: T,
}

impl<T: Real> OptomechDriveParams<T> {
    /// Returns the record unchanged if every invariant holds.
    pub fn validated(self) -> Result<Self> {
        validate_drives(&self)?;
        Ok(self)
    }
}

/// Effective (linearized) parameters: the direct input of the scattering
/// solver. The couplings are complex; their phases are inherited from the
/// steady-state cavity amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectiveParams<T: Real> {
    pub delta_p1: T,
    pub delta_p2: T,
    pub delta_b1: T,
    pub j: T,
    pub g11_eff: Complex<T>,
    pub g21_eff: Complex<T>,
    pub gamma_a1: T,
    pub gamma_a2: T,
    pub gamma_b1: T,
}

impl<T: Real> EffectiveParams<T> {
    /// Phase of the first effective coupling; 0 when the coupling vanishes.
    pub fn theta_a1(&self) -> T {
        arg_or_zero(self.g11_eff)
    }

    /// Phase of the second effective coupling; 0 when the coupling vanishes.
    pub fn theta_a2(&self) -> T {
        arg_or_zero(self.g21_eff)
    }

    /// Coupling phase difference θ = θ_a1 − θ_a2 wrapped to `[0, 2π)`.
    pub fn theta(&self) -> T {
        theta_from_phases(self.theta_a1(), self.theta_a2())
    }

    /// Returns the record unchanged if every invariant holds.
    pub fn validated(self) -> Result<Self> {
        validate_effective(&self)?;
        Ok(self)
    }

    /// Re-phases `g11_eff` so that θ takes the requested value, keeping both
    /// coupling magnitudes fixed.
    pub fn with_theta(mut self, theta: T) -> Self {
        let magnitude = self.g11_eff.norm();
        self.g11_eff = Complex::from_polar(magnitude, theta + self.theta_a2());
        self
    }
}

/// Phase-difference reduction shared by [`EffectiveParams::theta`].
pub fn theta_from_phases<T: Real>(theta_a1: T, theta_a2: T) -> T {
    wrap_two_pi(theta_a1 - theta_a2)
}

fn arg_or_zero<T: Real>(z: Complex<T>) -> T {
    if z.norm_sqr() == T::zero() {
        T::zero()
    } else {
        z.arg()
    }
}

/// Mean-field steady state of the optomechanical system together with the
/// effective parameters it induces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SteadyState<T: Real> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
    pub xi: Complex<T>,
    pub effective: EffectiveParams<T>,
    pub iterations: usize,
    pub residual: T,
    /// Residual after each fixed-point update, in iteration order.
    pub residuals: Vec<T>,
}

fn require<T: Real>(value: T, field: &'static str, requirement: &'static str, ok: bool) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParam {
            field,
            requirement: "finite",
        });
    }
    if !ok {
        return Err(Error::InvalidParam { field, requirement });
    }
    Ok(())
}

fn require_finite<T: Real>(value: T, field: &'static str) -> Result<()> {
    require(value, field, "finite", true)
}

/// Checks every [`PendulumParams`] invariant, reporting the first violation.
pub fn validate_pendulum<T: Real>(p: &PendulumParams<T>) -> Result<()> {
    require_finite(p.omega1, "omega1")?;
    require_finite(p.omega2, "omega2")?;
    require(p.gamma1, "gamma1", "> 0", p.gamma1 > T::zero())?;
    require(p.gamma2, "gamma2", "> 0", p.gamma2 > T::zero())?;
    require(p.g, "g", ">= 0", p.g >= T::zero())?;
    require(p.f1, "f1", ">= 0", p.f1 >= T::zero())?;
    require(p.f2, "f2", ">= 0", p.f2 >= T::zero())?;
    require_finite(p.phi1, "phi1")?;
    require_finite(p.phi2, "phi2")?;
    require_finite(p.omega_d, "omega_d")?;
    if p.coupling == CouplingForm::FrequencyWeighted {
        require(p.omega1, "omega1", "> 0 for frequency-weighted coupling", p.omega1 > T::zero())?;
        require(p.omega2, "omega2", "> 0 for frequency-weighted coupling", p.omega2 > T::zero())?;
    }
    Ok(())
}

/// Checks every [`OptomechDriveParams`] invariant, reporting the first violation.
pub fn validate_drives<T: Real>(p: &OptomechDriveParams<T>) -> Result<()> {
    require_finite(p.delta_a1, "delta_a1")?;
    require_finite(p.delta_a2, "delta_a2")?;
    require_finite(p.delta_b1, "delta_b1")?;
    require_finite(p.j, "j")?;
    require(p.g11, "g11", ">= 0", p.g11 >= T::zero())?;
    require(p.g21, "g21", ">= 0", p.g21 >= T::zero())?;
    require(p.eps_a1, "eps_a1", ">= 0", p.eps_a1 >= T::zero())?;
    require(p.eps_a2, "eps_a2", ">= 0", p.eps_a2 >= T::zero())?;
    require(p.eps_b1, "eps_b1", ">= 0", p.eps_b1 >= T::zero())?;
    require_finite(p.phi_a1, "phi_a1")?;
    require_finite(p.phi_a2, "phi_a2")?;
    require(p.gamma_a1, "gamma_a1", "> 0", p.gamma_a1 > T::zero())?;
    require(p.gamma_a2, "gamma_a2", "> 0", p.gamma_a2 > T::zero())?;
    require(p.gamma_b1, "gamma_b1", "> 0", p.gamma_b1 > T::zero())?;
    Ok(())
}

/// Checks every [`EffectiveParams`] invariant, reporting the first violation.
pub fn validate_effective<T: Real>(p: &EffectiveParams<T>) -> Result<()> {
    require_finite(p.delta_p1, "delta_p1")?;
    require_finite(p.delta_p2, "delta_p2")?;
    require_finite(p.delta_b1, "delta_b1")?;
    require_finite(p.j, "j")?;
    require_finite(p.g11_eff.re, "g11_eff.re")?;
    require_finite(p.g11_eff.im, "g11_eff.im")?;
    require_finite(p.g21_eff.re, "g21_eff.re")?;
    require_finite(p.g21_eff.im, "g21_eff.im")?;
    require(p.gamma_a1, "gamma_a1", "> 0", p.gamma_a1 > T::zero())?;
    require(p.gamma_a2, "gamma_a2", "> 0", p.gamma_a2 > T::zero())?;
    require(p.gamma_b1, "gamma_b1", "> 0", p.gamma_b1 > T::zero())?;
    Ok(())
}

/// Quantity varied along a one-dimensional sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Probe frequency ω of the scattering solver.
    ProbeOmega,
    /// Common detuning: Δ′_a1 = Δ′_a2 = Δ_b1 swept together.
    DetuningCommon,
    /// Coupling phase difference θ at fixed magnitudes.
    PhaseTheta,
    /// Common pendulum detuning Δ₁ = Δ₂ = Δ.
    PendulumDetuning,
}

/// Parameter record a sweep is rooted at.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepBase<T: Real> {
    Pendulum(PendulumParams<T>),
    Effective(EffectiveParams<T>),
}

/// Grid definition for a one-dimensional parameter sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec<T: Real> {
    pub variable: SweepVariable,
    pub start: T,
    pub stop: T,
    pub points: usize,
    pub base: SweepBase<T>,
}

impl<T: Real> SweepSpec<T> {
    /// Returns the spec unchanged if the grid definition is well formed.
    pub fn validated(self) -> Result<Self> {
        require_finite(self.start, "start")?;
        require_finite(self.stop, "stop")?;
        if self.start >= self.stop {
            return Err(Error::InvalidParam {
                field: "start",
                requirement: "< stop",
            });
        }
        if self.points < 2 {
            return Err(Error::InvalidParam {
                field: "points",
                requirement: ">= 2",
            });
        }
        match (&self.variable, &self.base) {
            (SweepVariable::PendulumDetuning, SweepBase::Pendulum(_)) => Ok(self),
            (SweepVariable::PendulumDetuning, _) => Err(Error::InvalidParam {
                field: "base",
                requirement: "a pendulum record for variable pendulum_detuning",
            }),
            (_, SweepBase::Effective(_)) => Ok(self),
            (_, _) => Err(Error::InvalidParam {
                field: "base",
                requirement: "an effective record for scattering sweep variables",
            }),
        }
    }

    /// Inclusive linear grid over `[start, stop]`.
    pub fn grid(&self) -> Vec<T> {
        linspace(self.start, self.stop, self.points)
    }
}

/// Inclusive linear grid; both endpoints are hit exactly.
pub fn linspace<T: Real>(start: T, stop: T, points: usize) -> Vec<T> {
    if points == 1 {
        return vec![start];
    }
    let n = T::from_usize(points - 1).expect("grid size fits scalar");
    (0..points)
        .map(|i| {
            let frac = T::from_usize(i).expect("grid index fits scalar") / n;
            start + (stop - start) * frac
        })
        .collect()
}

/// Tabulated sweep output: named columns plus numeric rows, ready for CSV or
/// JSON emission.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable<T: Real> {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<T>>,
}

impl<T: Real> SweepTable<T> {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    /// Writes the table as CSV with a mandatory header row; all values keep
    /// 17 significant digits.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_full(*v)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Full-precision cell formatting (17 significant digits) used by every CSV
/// emitter in the crate.
pub fn fmt_full<T: Real>(value: T) -> String {
    format!("{value:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn fig3_params() -> PendulumParams<f64> {
        PendulumParams {
            omega1: 10.0,
            omega2: 10.0,
            gamma1: 1.0,
            gamma2: 1.0,
            g: 1.0,
            f1: 1.0,
            f2: 1.0,
            phi1: std::f64::consts::FRAC_PI_2,
            phi2: 0.0,
            omega_d: 10.0,
            coupling: CouplingForm::Symmetric,
        }
    }

    #[test]
    fn zero_damping_rejected() {
        let p = PendulumParams { gamma1: 0.0, ..fig3_params() };
        let err = p.validated().unwrap_err();
        assert_eq!(err.to_string(), "gamma1 must be > 0");
    }

    #[test]
    fn fig3_parameter_set_accepted() {
        assert!(fig3_params().validated().is_ok());
    }

    #[test]
    fn fig5_effective_set_accepted() {
        let p = EffectiveParams {
            delta_p1: 10.0,
            delta_p2: 10.0,
            delta_b1: 10.0,
            j: 0.5,
            g11_eff: Complex64::new(0.0, 0.5),
            g21_eff: Complex64::new(0.5, 0.0),
            gamma_a1: 1.0,
            gamma_a2: 1.0,
            gamma_b1: 1.0,
        };
        assert!(p.validated().is_ok());
        assert!((p.theta() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn nan_rejected_before_sign_checks() {
        let p = PendulumParams { f1: f64::NAN, ..fig3_params() };
        let err = p.validated().unwrap_err();
        assert_eq!(err.to_string(), "f1 must be finite");
    }

    #[test]
    fn theta_zero_convention() {
        let p = EffectiveParams {
            delta_p1: 0.0,
            delta_p2: 0.0,
            delta_b1: 0.0,
            j: 0.0,
            g11_eff: Complex64::new(0.0, 0.0),
            g21_eff: Complex64::new(0.0, -1.0),
            gamma_a1: 1.0,
            gamma_a2: 1.0,
            gamma_b1: 1.0,
        };
        assert_eq!(p.theta_a1(), 0.0);
        assert!((p.theta() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn with_theta_sets_phase_difference() {
        let p = EffectiveParams {
            delta_p1: 10.0,
            delta_p2: 10.0,
            delta_b1: 10.0,
            j: 0.5,
            g11_eff: Complex64::new(0.5, 0.0),
            g21_eff: Complex64::from_polar(0.5, 1.2),
            gamma_a1: 1.0,
            gamma_a2: 1.0,
            gamma_b1: 1.0,
        };
        let q = p.with_theta(3.0);
        assert!((q.theta() - 3.0).abs() < 1e-12);
        assert!((q.g11_eff.norm() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn linspace_hits_interior_points_exactly() {
        let grid = linspace(-5.0f64, 5.0, 2001);
        assert_eq!(grid[0], -5.0);
        assert_eq!(grid[2000], 5.0);
        assert_eq!(grid[1000], 0.0);
    }

    #[test]
    fn sweep_spec_rejects_bad_ranges() {
        let base = SweepBase::Pendulum(fig3_params());
        let spec = SweepSpec {
            variable: SweepVariable::PendulumDetuning,
            start: 1.0,
            stop: -1.0,
            points: 100,
            base: base.clone(),
        };
        assert!(spec.validated().is_err());
        let spec = SweepSpec {
            variable: SweepVariable::PendulumDetuning,
            start: -1.0,
            stop: 1.0,
            points: 1,
            base,
        };
        assert!(spec.validated().is_err());
    }

    #[test]
    fn sweep_spec_rejects_mismatched_base() {
        let spec = SweepSpec {
            variable: SweepVariable::ProbeOmega,
            start: 0.0,
            stop: 1.0,
            points: 10,
            base: SweepBase::Pendulum(fig3_params()),
        };
        assert!(spec.validated().is_err());
    }

    #[test]
    fn csv_uses_full_precision() {
        let mut table = SweepTable::<f64>::new(&["a", "b"]);
        table.rows.push(vec![1.0 / 3.0, 2.0]);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("a,b\n"));
        assert!(text.contains("3.3333333333333331e-1"));
    }
}
