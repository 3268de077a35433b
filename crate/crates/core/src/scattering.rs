//! Fluctuation scattering for the linearized optomechanical system: the 6×6
//! drift matrix over (δa₁, δa₂, δb₁, δa₁†, δa₂†, δb₁†), the frequency-domain
//! input–output solution, transmission probabilities, vacuum spectra,
//! stability, and the isolation-frequency finder.
//!
//! The probe convention follows the crate-wide e^{-iωt} evolution: the
//! frequency-domain system matrix is M − iωI and positive ω is the upper
//! sideband.

use num_complex::Complex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Mat6, DIM};
use crate::model::{fmt_full, linspace, EffectiveParams};
use crate::scalar::Real;

/// Number of physical modes; the drift matrix doubles this.
pub const MODES: usize = 3;

/// Regularizer inside the isolation ratio, preventing log of zero at
/// perfect isolation (caps the reported ratio near 150 dB).
pub const ISOLATION_DB_EPSILON: f64 = 1e-15;

/// Minimum variation of the isolation ratio over a scan for an extremum to
/// be considered present, in dB.
pub const FLATNESS_DB: f64 = 0.1;

/// Drift matrix M and input-coupling diagonal Γ of dV/dt = −MV + ΓV_in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix<T: Real> {
    pub m: Mat6<T>,
    /// Diagonal of Γ: (√γ_a1, √γ_a2, √γ_b1) repeated for the conjugates.
    pub gamma_sqrt: [T; DIM],
}

/// Assembles the drift matrix for the linearized fluctuation equations.
///
/// Upper-left block rows: (γ_a1/2 + iΔ′_a1, iJ, iG₁₁), (iJ, γ_a2/2 + iΔ′_a2,
/// iG₂₁), (iG₁₁*, iG₂₁*, γ_b1/2 + iΔ_b1). Upper-right block rows: (0, 0,
/// iG₁₁), (0, 0, iG₂₁), (iG₁₁, iG₂₁, 0). The lower blocks follow from the
/// conjugate-block symmetry M[i+3][j+3] = conj(M[i][j]), M[i+3][j] =
/// conj(M[i][j+3]).
pub fn build_drift<T: Real>(eff: &EffectiveParams<T>) -> DriftMatrix<T> {
    let zero = Complex::new(T::zero(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let half = T::lit(0.5);
    let g1 = eff.g11_eff;
    let g2 = eff.g21_eff;
    let ij = i * Complex::new(eff.j, T::zero());
    let upper_left = [
        [Complex::new(eff.gamma_a1 * half, eff.delta_p1), ij, i * g1],
        [ij, Complex::new(eff.gamma_a2 * half, eff.delta_p2), i * g2],
        [
            i * g1.conj(),
            i * g2.conj(),
            Complex::new(eff.gamma_b1 * half, eff.delta_b1),
        ],
    ];
    let upper_right = [
        [zero, zero, i * g1],
        [zero, zero, i * g2],
        [i * g1, i * g2, zero],
    ];
    let mut m = Mat6::zeros();
    for r in 0..MODES {
        for c in 0..MODES {
            m.set(r, c, upper_left[r][c]);
            m.set(r, c + MODES, upper_right[r][c]);
            m.set(r + MODES, c + MODES, upper_left[r][c].conj());
            m.set(r + MODES, c, upper_right[r][c].conj());
        }
    }
    let roots = [
        eff.gamma_a1.sqrt(),
        eff.gamma_a2.sqrt(),
        eff.gamma_b1.sqrt(),
    ];
    DriftMatrix {
        m,
        gamma_sqrt: [roots[0], roots[1], roots[2], roots[0], roots[1], roots[2]],
    }
}

/// Stability verdict together with the drift-matrix spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stability<T: Real> {
    pub stable: bool,
    pub eigenvalues: [Complex<T>; DIM],
}

/// Eigenvalues of M; the fluctuations decay iff every real part is positive.
pub fn stability<T: Real>(eff: &EffectiveParams<T>) -> Stability<T> {
    let eigenvalues = build_drift(eff).m.eigenvalues();
    let stable = eigenvalues.iter().all(|ev| ev.re > T::zero());
    Stability {
        stable,
        eigenvalues,
    }
}

/// Scattering solution at one probe frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult<T: Real> {
    pub omega: T,
    /// Input–output matrix U(ω) = Γ(M − iωI)⁻¹Γ − I over the doubled space.
    pub u: Mat6<T>,
    /// T_ij = |U_ij|² + |U_{i,j+3}|², the scattering probability matrix.
    pub t: [[T; MODES]; MODES],
    /// Vacuum feedthrough: Σ_l |U_{i,l}|² over the conjugate columns.
    pub s_vac: [T; MODES],
    pub stable: bool,
}

fn scatter_with<T: Real>(
    drift: &DriftMatrix<T>,
    omega: T,
    stable: bool,
) -> Result<ScatteringResult<T>> {
    let system = drift.m.sub_i_omega(omega);
    let (inverse, _rcond) = system.inverse()?;
    let mut u = Mat6::zeros();
    for r in 0..DIM {
        for c in 0..DIM {
            let scaled = inverse.at(r, c).scale(drift.gamma_sqrt[r] * drift.gamma_sqrt[c]);
            let value = if r == c {
                scaled - Complex::new(T::one(), T::zero())
            } else {
                scaled
            };
            u.set(r, c, value);
        }
    }
    let mut t = [[T::zero(); MODES]; MODES];
    for r in 0..MODES {
        for c in 0..MODES {
            t[r][c] = u.at(r, c).norm_sqr() + u.at(r, c + MODES).norm_sqr();
        }
    }
    let mut s_vac = [T::zero(); MODES];
    for r in 0..MODES {
        let mut acc = T::zero();
        for l in MODES..DIM {
            acc = acc + u.at(r, l).norm_sqr();
        }
        s_vac[r] = acc;
    }
    Ok(ScatteringResult {
        omega,
        u,
        t,
        s_vac,
        stable,
    })
}

/// Full scattering solution U(ω), T(ω), S_vac(ω) at one probe frequency.
pub fn scattering_at<T: Real>(eff: &EffectiveParams<T>, omega: T) -> Result<ScatteringResult<T>> {
    let drift = build_drift(eff);
    let stable = stability(eff).stable;
    scatter_with(&drift, omega, stable)
}

/// Output spectrum S_out = T·S_in + S_vac for a classical input spectrum.
pub fn output_spectrum<T: Real>(
    res: &ScatteringResult<T>,
    s_in: [T; MODES],
) -> Result<[T; MODES]> {
    for (index, &value) in s_in.iter().enumerate() {
        if value < T::zero() {
            return Err(Error::NegativeInput {
                index,
                value: value.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut out = res.s_vac;
    for r in 0..MODES {
        let mut acc = T::zero();
        for c in 0..MODES {
            acc = acc + res.t[r][c] * s_in[c];
        }
        out[r] = out[r] + acc;
    }
    Ok(out)
}

/// One row of a transmission sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionRow<T: Real> {
    pub omega: T,
    pub t12: T,
    pub t21: T,
    pub t11: T,
    pub t22: T,
    pub t13: T,
    pub t31: T,
    pub t23: T,
    pub t32: T,
    pub t33: T,
    pub stable: bool,
}

impl<T: Real> TransmissionRow<T> {
    fn from_result(res: &ScatteringResult<T>) -> Self {
        Self {
            omega: res.omega,
            t12: res.t[0][1],
            t21: res.t[1][0],
            t11: res.t[0][0],
            t22: res.t[1][1],
            t13: res.t[0][2],
            t31: res.t[2][0],
            t23: res.t[1][2],
            t32: res.t[2][1],
            t33: res.t[2][2],
            stable: res.stable,
        }
    }
}

/// Transmission probabilities tabulated over a probe-frequency grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionTable<T: Real> {
    pub rows: Vec<TransmissionRow<T>>,
}

impl<T: Real> TransmissionTable<T> {
    pub const COLUMNS: [&'static str; 11] = [
        "omega", "t12", "t21", "t11", "t22", "t13", "t31", "t23", "t32", "t33", "stable",
    ];

    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{}", Self::COLUMNS.join(","))?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                fmt_full(r.omega),
                fmt_full(r.t12),
                fmt_full(r.t21),
                fmt_full(r.t11),
                fmt_full(r.t22),
                fmt_full(r.t13),
                fmt_full(r.t31),
                fmt_full(r.t23),
                fmt_full(r.t32),
                fmt_full(r.t33),
                u8::from(r.stable),
            )?;
        }
        Ok(())
    }

    /// True when every frequency row was computed on a stable drift matrix.
    pub fn all_stable(&self) -> bool {
        self.rows.iter().all(|r| r.stable)
    }
}

/// Scattering probabilities over a probe grid, rows in grid order.
pub fn transmission_sweep<T: Real>(
    eff: &EffectiveParams<T>,
    omegas: &[T],
) -> Result<TransmissionTable<T>> {
    if omegas.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let drift = build_drift(eff);
    let stable = stability(eff).stable;
    let rows = omegas
        .par_iter()
        .map(|&omega| scatter_with(&drift, omega, stable).map(|r| TransmissionRow::from_result(&r)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TransmissionTable { rows })
}

/// Isolation ratio in decibels, regularized against vanishing transmission.
pub fn isolation_db<T: Real>(t12: T, t21: T) -> T {
    let eps = T::lit(ISOLATION_DB_EPSILON);
    T::lit(10.0) * ((t12 + eps) / (t21 + eps)).log10()
}

/// Result of the isolation-frequency search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsolationResult<T: Real> {
    pub omega_iso: T,
    pub t12: T,
    pub t21: T,
    pub isolation_db: T,
}

/// Locates the isolation frequency within `omega_range`.
///
/// A coarse scan of the isolation ratio establishes that an extremum exists
/// (errors out when the ratio is flat to within [`FLATNESS_DB`]) and picks
/// the favored direction. The returned frequency is then refined by a
/// golden-section search on the favored direction's transmission peak,
/// which marks the isolation point: there the passing direction reaches
/// unit transmission while the blocked one is at its floor.
pub fn find_isolation<T: Real>(
    eff: &EffectiveParams<T>,
    omega_range: (T, T),
    points: usize,
    refine_tol: T,
) -> Result<IsolationResult<T>> {
    let (lo, hi) = omega_range;
    if !(lo < hi) {
        return Err(Error::InvalidParam {
            field: "omega_range",
            requirement: "lo < hi",
        });
    }
    if points < 2 {
        return Err(Error::InvalidParam {
            field: "points",
            requirement: ">= 2",
        });
    }
    if !(refine_tol > T::zero()) {
        return Err(Error::InvalidParam {
            field: "refine_tol",
            requirement: "> 0",
        });
    }
    let drift = build_drift(eff);
    let stable = stability(eff).stable;
    let grid = linspace(lo, hi, points);
    let coarse = grid
        .par_iter()
        .map(|&omega| scatter_with(&drift, omega, stable))
        .collect::<Result<Vec<_>>>()?;
    let ratios: Vec<T> = coarse
        .iter()
        .map(|r| isolation_db(r.t[0][1], r.t[1][0]))
        .collect();
    let mut lowest = ratios[0];
    let mut highest = ratios[0];
    for &r in &ratios {
        if r < lowest {
            lowest = r;
        }
        if r > highest {
            highest = r;
        }
    }
    let variation = highest - lowest;
    if variation < T::lit(FLATNESS_DB) {
        return Err(Error::NoExtremum {
            variation_db: variation.to_f64().unwrap_or(f64::NAN),
        });
    }
    // Favored direction at the strongest-ratio point.
    let peak_idx = argmax(ratios.iter().map(|r| r.abs()));
    let forward = ratios[peak_idx] > T::zero();
    let favored = |res: &ScatteringResult<T>| if forward { res.t[0][1] } else { res.t[1][0] };
    // Bracket around the coarse transmission peak of the favored direction.
    let best = argmax(coarse.iter().map(favored));
    let bracket_lo = if best == 0 { grid[0] } else { grid[best - 1] };
    let bracket_hi = if best + 1 == grid.len() {
        grid[grid.len() - 1]
    } else {
        grid[best + 1]
    };
    let omega_iso = golden_section_max(
        |omega| scatter_with(&drift, omega, stable).map(|r| favored(&r)),
        bracket_lo,
        bracket_hi,
        refine_tol,
    )?;
    let at = scatter_with(&drift, omega_iso, stable)?;
    Ok(IsolationResult {
        omega_iso,
        t12: at.t[0][1],
        t21: at.t[1][0],
        isolation_db: isolation_db(at.t[0][1], at.t[1][0]),
    })
}

fn argmax<T: Real>(values: impl Iterator<Item = T>) -> usize {
    let mut best_idx = 0;
    let mut best = T::neg_infinity();
    for (idx, v) in values.enumerate() {
        if v > best {
            best = v;
            best_idx = idx;
        }
    }
    best_idx
}

/// Golden-section maximization over `[a, b]`, shrinking the bracket until
/// its width is at most `tol`.
fn golden_section_max<T: Real, F: FnMut(T) -> Result<T>>(
    mut f: F,
    mut a: T,
    mut b: T,
    tol: T,
) -> Result<T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let mut h = b - a;
    let mut c = b - inv_phi * h;
    let mut d = a + inv_phi * h;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while h > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            h = b - a;
            c = b - inv_phi * h;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            h = b - a;
            d = a + inv_phi * h;
            fd = f(d)?;
        }
    }
    Ok((a + b) * T::lit(0.5))
}
