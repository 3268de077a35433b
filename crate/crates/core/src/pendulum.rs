//! Driven coupled-pendulum solver: closed-form steady state of the
//! rotating-frame amplitude equations, fixed-step time evolution, and
//! magnitude/phase spectra versus detuning.
//!
//! The amplitude equations integrated here are first order in time,
//!
//! ```text
//! dα₁/dt = -(γ₁ + iΔ₁) α₁ - i g₁₂ α₂ + F₁ e^{iφ₁}
//! dα₂/dt = -(γ₂ + iΔ₂) α₂ - i g₂₁ α₁ + F₂ e^{iφ₂}
//! ```
//!
//! with counter-rotating terms already dropped. See the crate docs for the
//! e^{-iωt} sign convention.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{fmt_full, CouplingForm, PendulumParams};
use crate::scalar::Real;

/// Fraction of the fastest system rate a single RK4 step may cover.
pub const STEP_GUARD: f64 = 0.1;

/// Steady-state complex amplitudes of the two oscillators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PendulumSteadyState<T: Real> {
    pub alpha1: Complex<T>,
    pub alpha2: Complex<T>,
}

/// One sample of a time-domain trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint<T: Real> {
    pub t: T,
    pub alpha1: Complex<T>,
    pub alpha2: Complex<T>,
}

fn coupling_weights<T: Real>(p: &PendulumParams<T>) -> (T, T) {
    match p.coupling {
        CouplingForm::Symmetric => (p.g, p.g),
        CouplingForm::FrequencyWeighted => {
            (p.g * p.omega1 / p.omega2, p.g * p.omega2 / p.omega1)
        }
    }
}

fn drives<T: Real>(p: &PendulumParams<T>) -> (Complex<T>, Complex<T>) {
    (
        Complex::from_polar(p.f1, p.phi1),
        Complex::from_polar(p.f2, p.phi2),
    )
}

/// Two-mode steady-state kernel shared by both detuning variants. `c1`, `c2`
/// are the complex response denominators γᵢ + iΔᵢ.
fn two_mode_amplitudes<T: Real>(
    c1: Complex<T>,
    c2: Complex<T>,
    g12: T,
    g21: T,
    drive1: Complex<T>,
    drive2: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let i = Complex::new(T::zero(), T::one());
    let den = c1 * c2 + Complex::new(g12 * g21, T::zero());
    let a1 = (c2 * drive1 - i * Complex::new(g12, T::zero()) * drive2) / den;
    let a2 = (c1 * drive2 - i * Complex::new(g21, T::zero()) * drive1) / den;
    (a1, a2)
}

/// Steady state at a common detuning Δ₁ = Δ₂ = Δ.
pub fn steady_state<T: Real>(p: &PendulumParams<T>, delta: T) -> PendulumSteadyState<T> {
    steady_state_detuned(p, delta, delta)
}

/// Steady state of the general two-detuning formula.
pub fn steady_state_detuned<T: Real>(
    p: &PendulumParams<T>,
    delta1: T,
    delta2: T,
) -> PendulumSteadyState<T> {
    let (g12, g21) = coupling_weights(p);
    let (d1, d2) = drives(p);
    let c1 = Complex::new(p.gamma1, delta1);
    let c2 = Complex::new(p.gamma2, delta2);
    let (alpha1, alpha2) = two_mode_amplitudes(c1, c2, g12, g21, d1, d2);
    PendulumSteadyState { alpha1, alpha2 }
}

fn check_step<T: Real>(p: &PendulumParams<T>, dt: T) -> Result<()> {
    if !(dt > T::zero()) {
        return Err(Error::InvalidParam {
            field: "dt",
            requirement: "> 0",
        });
    }
    let (g12, g21) = coupling_weights(p);
    let mut scale = p.delta1().abs();
    for rate in [p.delta2().abs(), p.gamma1, p.gamma2, g12.abs(), g21.abs()] {
        if rate > scale {
            scale = rate;
        }
    }
    let product = dt * scale;
    if product > T::lit(STEP_GUARD) {
        return Err(Error::StepSize {
            product: product.to_f64().unwrap_or(f64::NAN),
            limit: STEP_GUARD,
        });
    }
    Ok(())
}

#[inline]
fn rhs<T: Real>(
    p: &PendulumParams<T>,
    g12: T,
    g21: T,
    d1: Complex<T>,
    d2: Complex<T>,
    a1: Complex<T>,
    a2: Complex<T>,
) -> (Complex<T>, Complex<T>) {
    let i = Complex::new(T::zero(), T::one());
    let da1 = -Complex::new(p.gamma1, p.delta1()) * a1 - i * Complex::new(g12, T::zero()) * a2 + d1;
    let da2 = -Complex::new(p.gamma2, p.delta2()) * a2 - i * Complex::new(g21, T::zero()) * a1 + d2;
    (da1, da2)
}

#[inline]
fn rk4_step<T: Real>(
    p: &PendulumParams<T>,
    g12: T,
    g21: T,
    d1: Complex<T>,
    d2: Complex<T>,
    state: (Complex<T>, Complex<T>),
    dt: T,
) -> (Complex<T>, Complex<T>) {
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    let hdt = dt * half;
    let (a1, a2) = state;
    let (k1a, k1b) = rhs(p, g12, g21, d1, d2, a1, a2);
    let (k2a, k2b) = rhs(p, g12, g21, d1, d2, a1 + k1a.scale(hdt), a2 + k1b.scale(hdt));
    let (k3a, k3b) = rhs(p, g12, g21, d1, d2, a1 + k2a.scale(hdt), a2 + k2b.scale(hdt));
    let (k4a, k4b) = rhs(p, g12, g21, d1, d2, a1 + k3a.scale(dt), a2 + k3b.scale(dt));
    let two = T::lit(2.0);
    (
        a1 + (k1a + k2a.scale(two) + k3a.scale(two) + k4a).scale(dt * sixth),
        a2 + (k1b + k2b.scale(two) + k3b.scale(two) + k4b).scale(dt * sixth),
    )
}

/// Fixed-step RK4 trajectory from `state0` over `ceil(t_end/dt)` steps.
/// The initial point is included, so the result holds `steps + 1` samples.
pub fn evolve<T: Real>(
    p: &PendulumParams<T>,
    state0: (Complex<T>, Complex<T>),
    t_end: T,
    dt: T,
) -> Result<Vec<TrajectoryPoint<T>>> {
    check_step(p, dt)?;
    if t_end < dt {
        return Err(Error::InvalidParam {
            field: "t_end",
            requirement: ">= dt",
        });
    }
    let steps = (t_end / dt).ceil().to_usize().ok_or(Error::InvalidParam {
        field: "t_end",
        requirement: "a representable step count",
    })?;
    let (g12, g21) = coupling_weights(p);
    let (d1, d2) = drives(p);
    let mut state = state0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(TrajectoryPoint {
        t: T::zero(),
        alpha1: state.0,
        alpha2: state.1,
    });
    for k in 0..steps {
        state = rk4_step(p, g12, g21, d1, d2, state, dt);
        let t = dt * T::from_usize(k + 1).expect("step count fits scalar");
        out.push(TrajectoryPoint {
            t,
            alpha1: state.0,
            alpha2: state.1,
        });
    }
    Ok(out)
}

/// Endpoint of the same integration without storing the trajectory.
pub fn evolve_end<T: Real>(
    p: &PendulumParams<T>,
    state0: (Complex<T>, Complex<T>),
    t_end: T,
    dt: T,
) -> Result<(Complex<T>, Complex<T>)> {
    check_step(p, dt)?;
    if t_end < dt {
        return Err(Error::InvalidParam {
            field: "t_end",
            requirement: ">= dt",
        });
    }
    let steps = (t_end / dt).ceil().to_usize().ok_or(Error::InvalidParam {
        field: "t_end",
        requirement: "a representable step count",
    })?;
    let (g12, g21) = coupling_weights(p);
    let (d1, d2) = drives(p);
    let mut state = state0;
    for _ in 0..steps {
        state = rk4_step(p, g12, g21, d1, d2, state, dt);
    }
    Ok(state)
}

/// One spectrum row: magnitudes and principal phases at a detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumRow<T: Real> {
    pub delta: T,
    pub abs_alpha1: T,
    pub arg_alpha1: T,
    pub abs_alpha2: T,
    pub arg_alpha2: T,
}

/// Magnitude/phase table of both oscillators over a detuning grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable<T: Real> {
    pub rows: Vec<SpectrumRow<T>>,
}

impl<T: Real> SpectrumTable<T> {
    pub const COLUMNS: [&'static str; 5] =
        ["delta", "abs_alpha1", "arg_alpha1", "abs_alpha2", "arg_alpha2"];

    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::COLUMNS.join(","))?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_full(r.delta),
                fmt_full(r.abs_alpha1),
                fmt_full(r.arg_alpha1),
                fmt_full(r.abs_alpha2),
                fmt_full(r.arg_alpha2),
            )?;
        }
        Ok(())
    }
}

/// Phase in the half-open interval `(-π, π]`.
fn principal_phase<T: Real>(z: Complex<T>) -> T {
    let arg = z.arg();
    if arg == -T::PI() {
        T::PI()
    } else {
        arg
    }
}

/// Steady-state spectrum over a detuning grid, rows in grid order.
pub fn spectrum<T: Real>(p: &PendulumParams<T>, deltas: &[T]) -> Result<SpectrumTable<T>> {
    if deltas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let rows = deltas
        .par_iter()
        .map(|&delta| {
            let ss = steady_state(p, delta);
            SpectrumRow {
                delta,
                abs_alpha1: ss.alpha1.norm(),
                arg_alpha1: principal_phase(ss.alpha1),
                abs_alpha2: ss.alpha2.norm(),
                arg_alpha2: principal_phase(ss.alpha2),
            }
        })
        .collect();
    Ok(SpectrumTable { rows })
}
