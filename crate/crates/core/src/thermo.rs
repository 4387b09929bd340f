//! Oscillator thermodynamics: closed forms checked against traces of
//! `e^{−βH}`, the continuum energy integral, and the rotor picture.

use std::fmt::Write as _;

use crate::error::{domain, Result};
use crate::fock::{hamiltonian, ModeKind, ModeSpace};
use crate::opcore::{hermitian_eigensystem, trace_exp, Operator};
use crate::schwinger::HalfInt;
use crate::Units;

/// Independent modes at a common inverse temperature `β = 1/kT`.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    pub modes: Vec<ModeSpace>,
    pub beta: f64,
    pub units: Units,
}

impl EnsembleSpec {
    pub fn new(modes: Vec<ModeSpace>, beta: f64, units: Units) -> Result<Self> {
        if modes.is_empty() {
            return domain("ensemble needs at least one mode");
        }
        check_beta(beta)?;
        Ok(Self { modes, beta, units })
    }

    pub fn single(mode: ModeSpace, beta: f64, units: Units) -> Result<Self> {
        Self::new(vec![mode], beta, units)
    }

    pub fn at_beta(&self, beta: f64) -> Result<Self> {
        Self::new(self.modes.clone(), beta, self.units)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return domain(format!("beta must be positive and finite, got {beta}"));
    }
    Ok(())
}

/// `2cosh(βħω/2)` for a fermion, `e^{−βħω/2}/(1 − e^{−βħω})` for a boson.
pub fn closed_partition(mode: &ModeSpace, beta: f64, units: Units) -> Result<f64> {
    check_beta(beta)?;
    let x = beta * units.hbar * mode.omega();
    Ok(match mode.kind() {
        ModeKind::Fermion => 2.0 * (x / 2.0).cosh(),
        ModeKind::Boson => (-x / 2.0).exp() / -(-x).exp_m1(),
    })
}

/// `ln` of [`closed_partition`], evaluated without overflow.
pub fn closed_log_partition(mode: &ModeSpace, beta: f64, units: Units) -> Result<f64> {
    check_beta(beta)?;
    let x = beta * units.hbar * mode.omega();
    Ok(match mode.kind() {
        ModeKind::Fermion => x / 2.0 + (-x).exp().ln_1p(),
        ModeKind::Boson => -x / 2.0 - (-(-x).exp_m1()).ln(),
    })
}

/// `Tr e^{−βH}`.
pub fn trace_partition(h: &Operator, beta: f64) -> Result<f64> {
    trace_exp(h, beta)
}

/// `ln Tr e^{−βH}`, shifted by the ground energy before exponentiating.
pub fn trace_log_partition(h: &Operator, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let eig = hermitian_eigensystem(h)?;
    let ground = eig.eigenvalues[0];
    let sum: f64 = eig
        .eigenvalues
        .iter()
        .map(|&l| (-beta * (l - ground)).exp())
        .sum();
    Ok(-beta * ground + sum.ln())
}

/// `Σ ln Z_mode` from the closed forms.
pub fn ensemble_log_partition(spec: &EnsembleSpec) -> Result<f64> {
    spec.modes
        .iter()
        .map(|m| closed_log_partition(m, spec.beta, spec.units))
        .sum()
}

/// `Σ ln Tr e^{−βH_mode}`. The modes are independent, so the trace of the
/// joint Hamiltonian factorizes and each factor is diagonalized alone.
pub fn ensemble_trace_log_partition(spec: &EnsembleSpec) -> Result<f64> {
    spec.modes
        .iter()
        .map(|m| trace_log_partition(&hamiltonian(m, spec.units), spec.beta))
        .sum()
}

/// Thermal energy of one mode.
pub fn mode_energy(mode: &ModeSpace, beta: f64, units: Units) -> Result<f64> {
    check_beta(beta)?;
    let e = units.hbar * mode.omega();
    let x = beta * e;
    Ok(match mode.kind() {
        ModeKind::Fermion => -e * (0.5 - 1.0 / (1.0 + x.exp())),
        ModeKind::Boson => e * (0.5 + 1.0 / x.exp_m1()),
    })
}

pub fn mean_energy(spec: &EnsembleSpec) -> Result<f64> {
    spec.modes
        .iter()
        .map(|m| mode_energy(m, spec.beta, spec.units))
        .sum()
}

/// `−(ln Z(β+δ) − ln Z(β−δ)) / 2δ` with traced partition functions.
pub fn mean_energy_fd(spec: &EnsembleSpec, delta: f64) -> Result<f64> {
    if !(delta > 0.0) || spec.beta - delta <= 0.0 {
        return domain(format!(
            "finite-difference step {delta} must be positive and below beta {}",
            spec.beta
        ));
    }
    let up = ensemble_trace_log_partition(&spec.at_beta(spec.beta + delta)?)?;
    let down = ensemble_trace_log_partition(&spec.at_beta(spec.beta - delta)?)?;
    Ok(-(up - down) / (2.0 * delta))
}

/// Pair of fermion modes at frequencies `ω₁`, `ω₂`:
/// `−(ħω₁/2)tanh(βħω₁/2) − (ħω₂/2)tanh(βħω₂/2)`.
pub fn fermion_pair_energy(omega1: f64, omega2: f64, beta: f64, units: Units) -> Result<f64> {
    check_beta(beta)?;
    let term = |w: f64| {
        let e = units.hbar * w;
        -0.5 * e * (0.5 * beta * e).tanh()
    };
    Ok(term(omega1) + term(omega2))
}

pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalReport {
    pub beta: f64,
    pub log_z_closed: f64,
    pub log_z_trace: f64,
    pub energy_closed: f64,
    pub energy_fd: f64,
}

impl ThermalReport {
    pub fn log_z_residual(&self) -> f64 {
        (self.log_z_closed - self.log_z_trace).abs()
    }

    pub fn energy_residual(&self) -> f64 {
        (self.energy_closed - self.energy_fd).abs()
    }
}

pub fn thermal_report(spec: &EnsembleSpec, delta: f64) -> Result<ThermalReport> {
    Ok(ThermalReport {
        beta: spec.beta,
        log_z_closed: ensemble_log_partition(spec)?,
        log_z_trace: ensemble_trace_log_partition(spec)?,
        energy_closed: mean_energy(spec)?,
        energy_fd: mean_energy_fd(spec, delta)?,
    })
}

/// Energy of a continuum of fermion modes between `ε_min` and `ε_m`
/// (in units of `kT`).
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuumEnergy {
    pub eps_min: f64,
    pub eps_max: f64,
    /// `kT[(ε_m − ε_min)/2 + ln((1 + e^{ε_min})/(1 + e^{ε_m}))]`
    pub closed: f64,
    /// `kT ∫ (1/(1+eˣ) − 1/2) dx`, numerically.
    pub quadrature: f64,
    pub quadrature_error_estimate: f64,
    /// Same expression with the linear term `(ε_min − ε_m)/2`.
    pub sign_flipped: f64,
}

impl ContinuumEnergy {
    pub fn residual(&self) -> f64 {
        (self.closed - self.quadrature).abs()
    }

    pub fn sign_flipped_deviation(&self) -> f64 {
        (self.sign_flipped - self.quadrature).abs()
    }
}

pub const CONTINUUM_QUADRATURE_TOL: f64 = 1e-10;
pub const DEFAULT_EPS_MIN: f64 = 1.0;

pub fn continuum_energy(eps_min: f64, eps_max: f64, kt: f64) -> Result<ContinuumEnergy> {
    if !(eps_min >= 0.0) || !(eps_max >= eps_min) || !eps_max.is_finite() {
        return domain(format!(
            "need 0 <= eps_min <= eps_max, got eps_min={eps_min}, eps_max={eps_max}"
        ));
    }
    if !(kt > 0.0) || !kt.is_finite() {
        return domain(format!("kT must be positive, got {kt}"));
    }
    let log_ratio = eps_min.exp().ln_1p() - eps_max.exp().ln_1p();
    let linear = (eps_max - eps_min) / 2.0;
    let (integral, err) = if eps_max == eps_min {
        (0.0, 0.0)
    } else {
        let out = quadrature::double_exponential::integrate(
            |x| 1.0 / (1.0 + x.exp()) - 0.5,
            eps_min,
            eps_max,
            CONTINUUM_QUADRATURE_TOL,
        );
        (out.integral, out.error_estimate)
    };
    Ok(ContinuumEnergy {
        eps_min,
        eps_max,
        closed: kt * (linear + log_ratio),
        quadrature: kt * integral,
        quadrature_error_estimate: kt * err,
        sign_flipped: kt * (-linear + log_ratio),
    })
}

/// Rigid rotor matched to a set of ground-state oscillators.
#[derive(Debug, Clone, PartialEq)]
pub struct RotorEquivalence {
    pub inertia: f64,
    pub rotor_omega: f64,
    pub j_used: HalfInt,
    /// Rotational energy `ħ²j(j+1)/2I` that was matched.
    pub rotational_energy: f64,
    pub convention_note: String,
}

/// Solves `ħ²j(j+1)/(2I) = E_rot` and `Iω̃ = ħ√(j(j+1))`.
///
/// Two oscillators: `E_rot = 2·ħω/2`. Three oscillators: `E_rot + ħω/2 =
/// E_vib` with `E_vib = 3·ħω/2`.
pub fn rotor_equivalence(
    omega: f64,
    j: HalfInt,
    n_oscillators: usize,
    hbar: f64,
) -> Result<RotorEquivalence> {
    if !(omega > 0.0) || !omega.is_finite() {
        return domain(format!("omega must be positive, got {omega}"));
    }
    if j.twice() <= 0 {
        return domain(format!("j must be positive, got {j}"));
    }
    let e0 = hbar * omega / 2.0;
    let (energy, mut note) = match n_oscillators {
        2 => (
            2.0 * e0,
            String::from("E_rot = 2 x hbar*omega/2 (two ground-state modes)"),
        ),
        3 => {
            let vib = 3.0 * e0;
            (
                vib - e0,
                String::from("E_rot = E_vib - hbar*omega/2 with E_vib = 3 x hbar*omega/2"),
            )
        }
        n => {
            return domain(format!(
                "rotor equivalence supports 2 or 3 oscillators, got {n}"
            ))
        }
    };
    let jf = j.to_f64();
    let jj = jf * (jf + 1.0);
    let inertia = hbar * hbar * jj / (2.0 * energy);
    let rotor_omega = hbar * jj.sqrt() / inertia;
    if n_oscillators == 3 {
        let alt_inertia = hbar * hbar * jj / (2.0 * (9.0 * e0 - e0));
        let _ = write!(
            note,
            "; taking E_vib = 9 x hbar*omega/2 instead gives I = {alt_inertia}, omega_rot = {}",
            hbar * jj.sqrt() / alt_inertia
        );
    }
    Ok(RotorEquivalence {
        inertia,
        rotor_omega,
        j_used: j,
        rotational_energy: energy,
        convention_note: note,
    })
}

/// Moment of inertia from `E = ħ²j(j+1)/(2I)` for a fermion pair of thermal
/// energy `E`. Refuses `E ≤ 0`, where no positive inertia exists.
pub fn fermion_pair_inertia(energy: f64, j: HalfInt, hbar: f64) -> Result<f64> {
    if !(energy > 0.0) {
        return domain(format!(
            "thermal energy {energy} is not positive, so hbar^2 j(j+1)/(2I) = E has no solution with I > 0"
        ));
    }
    let jf = j.to_f64();
    Ok(hbar * hbar * jf * (jf + 1.0) / (2.0 * energy))
}

/// `Σ_{j=0}^{j_max} (2j+1) e^{−βħ²j(j+1)/2I}` over integer `j`.
pub fn rotational_partition(inertia: f64, beta: f64, j_max: HalfInt, hbar: f64) -> Result<f64> {
    if !(inertia > 0.0) {
        return domain(format!("inertia must be positive, got {inertia}"));
    }
    check_beta(beta)?;
    if j_max.twice() < 0 {
        return domain(format!("j_max must be non-negative, got {j_max}"));
    }
    let top = j_max.twice() / 2;
    Ok((0..=top)
        .map(|j| {
            let j = j as f64;
            (2.0 * j + 1.0) * (-beta * hbar * hbar * j * (j + 1.0) / (2.0 * inertia)).exp()
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralLine {
    pub frequency: f64,
    pub weight: f64,
}

pub const MATRIX_ELEMENT_CUTOFF: f64 = 1e-10;

/// Frequencies `(λ_j − λ_i)/ħ` carried by `⟨i|O|j⟩` in the eigenbasis of
/// `H`, weighted by `|⟨i|O|j⟩|²`. Equal frequencies (to `1e−9` relative) are
/// merged; the list is sorted by frequency.
pub fn spectral_frequencies(h: &Operator, o: &Operator, hbar: f64) -> Result<Vec<SpectralLine>> {
    if o.dim() != h.dim() {
        return crate::error::shape(format!(
            "observable dimension {} does not match Hamiltonian {}",
            o.dim(),
            h.dim()
        ));
    }
    let eig = hermitian_eigensystem(h)?;
    let v = &eig.eigenvectors;
    let rotated = v.adjoint() * o.matrix() * v;
    let mut lines = Vec::new();
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            let amp = rotated[(i, j)].norm();
            if amp > MATRIX_ELEMENT_CUTOFF {
                lines.push(SpectralLine {
                    frequency: (eig.eigenvalues[j] - eig.eigenvalues[i]) / hbar,
                    weight: amp * amp,
                });
            }
        }
    }
    lines.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
    let mut merged: Vec<SpectralLine> = Vec::new();
    for line in lines {
        match merged.last_mut() {
            Some(last)
                if (line.frequency - last.frequency).abs()
                    <= 1e-9 * line.frequency.abs().max(1.0) =>
            {
                last.weight += line.weight;
            }
            _ => merged.push(line),
        }
    }
    Ok(merged)
}
