//! Single-mode Fock spaces and their ladder operators.
//!
//! Bosonic modes are truncated to `D` levels `|0⟩..|D−1⟩`; the raising
//! operator annihilates the top level, so `[a, a†] = 1` holds only on the
//! levels `0..D−2`. Fermionic modes have exactly the two levels `|0⟩, |1⟩`
//! with `f|0⟩ = 0`, `f†|0⟩ = |1⟩`, `f|1⟩ = |0⟩`, `f†|1⟩ = 0`.
//!
//! In that fermionic basis the Pauli form `f = (σ₁ − iσ₂)/2` is recovered
//! only after swapping the two basis labels (conjugation by σ₁): the textbook
//! matrix `[[0,0],[1,0]]` maps `|0⟩ → |1⟩`, which is our raising operator.

use crate::error::{domain, shape, Result};
use crate::opcore::{tensor_product_with_limit, Operator, C64, DEFAULT_MAX_DIM};
use crate::Units;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Boson,
    Fermion,
}

/// One oscillator mode: its statistics, number of levels and frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpace {
    kind: ModeKind,
    cutoff: usize,
    omega: f64,
}

impl ModeSpace {
    pub fn boson(cutoff: usize, omega: f64) -> Result<Self> {
        if cutoff < 2 {
            return domain(format!("boson cutoff must be at least 2, got {cutoff}"));
        }
        check_omega(omega)?;
        Ok(Self {
            kind: ModeKind::Boson,
            cutoff,
            omega,
        })
    }

    pub fn fermion(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Self {
            kind: ModeKind::Fermion,
            cutoff: 2,
            omega,
        })
    }

    pub fn kind(&self) -> ModeKind {
        self.kind
    }

    /// Number of levels: `D` for bosons, 2 for fermions.
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn operators(&self) -> ModeOperators {
        match self.kind {
            ModeKind::Boson => boson_operators(self.cutoff),
            ModeKind::Fermion => fermion_operators(),
        }
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0) || !omega.is_finite() {
        return domain(format!("omega must be positive and finite, got {omega}"));
    }
    Ok(())
}

/// Lowering, raising and number operator of one mode.
#[derive(Debug, Clone)]
pub struct ModeOperators {
    pub lower: Operator,
    pub raise: Operator,
    pub number: Operator,
}

fn boson_operators(cutoff: usize) -> ModeOperators {
    let lower = Operator::from_fn(cutoff, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .expect("cutoff >= 2");
    let raise = lower.adjoint();
    // Exact integers; `raise * lower` agrees to within rounding of √n·√n.
    let levels: Vec<f64> = (0..cutoff).map(|n| n as f64).collect();
    let number = Operator::diagonal(&levels).expect("cutoff >= 2");
    ModeOperators {
        lower,
        raise,
        number,
    }
}

fn fermion_operators() -> ModeOperators {
    let lower = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).expect("2x2");
    let raise = lower.adjoint();
    let number = &raise * &lower;
    ModeOperators {
        lower,
        raise,
        number,
    }
}

/// Truncated bosonic mode with `cutoff` levels.
pub fn boson_mode(cutoff: usize, omega: f64) -> Result<ModeOperators> {
    Ok(ModeSpace::boson(cutoff, omega)?.operators())
}

pub fn fermion_mode(omega: f64) -> Result<ModeOperators> {
    Ok(ModeSpace::fermion(omega)?.operators())
}

/// `I ⊗ … ⊗ op ⊗ … ⊗ I` with `op` in slot `position` of `layout`.
pub fn lift(op: &Operator, position: usize, layout: &[usize]) -> Result<Operator> {
    if position >= layout.len() {
        return shape(format!(
            "position {position} out of range for layout of {} modes",
            layout.len()
        ));
    }
    if op.dim() != layout[position] {
        return shape(format!(
            "operator dimension {} does not match layout slot {} of size {}",
            op.dim(),
            position,
            layout[position]
        ));
    }
    let mut acc: Option<Operator> = None;
    for (k, &d) in layout.iter().enumerate() {
        let factor = if k == position {
            op.clone().relabel(vec![d])?
        } else {
            Operator::identity(d).relabel(vec![d])?
        };
        acc = Some(match acc {
            None => factor,
            Some(prev) => tensor_product_with_limit(&prev, &factor, DEFAULT_MAX_DIM)?,
        });
    }
    Ok(acc.expect("layout is non-empty"))
}

/// `ħω(N + 1/2)` for bosons, `ħω(Ñ − 1/2)` for fermions.
pub fn hamiltonian(mode: &ModeSpace, units: Units) -> Operator {
    let ops = mode.operators();
    let offset = match mode.kind {
        ModeKind::Boson => 0.5,
        ModeKind::Fermion => -0.5,
    };
    ops.number.shift(offset).scale(units.hbar * mode.omega)
}

/// Sum of the single-mode Hamiltonians lifted onto the joint layout.
pub fn ensemble_hamiltonian(modes: &[ModeSpace], units: Units) -> Result<Operator> {
    if modes.is_empty() {
        return domain("ensemble needs at least one mode");
    }
    let layout: Vec<usize> = modes.iter().map(|m| m.cutoff).collect();
    let mut total: Option<Operator> = None;
    for (k, m) in modes.iter().enumerate() {
        let h = lift(&hamiltonian(m, units), k, &layout)?;
        total = Some(match total {
            None => h,
            Some(t) => t.checked_add(&h)?,
        });
    }
    Ok(total.expect("non-empty"))
}

/// Projector onto boson levels `0..=max_level` of one mode.
pub fn level_projector(cutoff: usize, max_level: usize) -> Operator {
    let diag: Vec<f64> = (0..cutoff)
        .map(|n| if n <= max_level { 1.0 } else { 0.0 })
        .collect();
    Operator::diagonal(&diag).expect("cutoff >= 1")
}

/// Diagonal energies of the two fermionic levels in the `(|0⟩, |1⟩)` basis.
///
/// `vacuum`/`occupied` are what `ħω(Ñ − 1/2)` gives; the `swapped_*` fields
/// are the opposite sign assignment (vacuum at `+ħω/2`), which is what one
/// gets from the same matrices after exchanging the basis labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermionLevelConvention {
    pub vacuum: f64,
    pub occupied: f64,
    pub swapped_vacuum: f64,
    pub swapped_occupied: f64,
}

pub fn fermion_level_convention(omega: f64, units: Units) -> Result<FermionLevelConvention> {
    let h = hamiltonian(&ModeSpace::fermion(omega)?, units);
    let vacuum = h.get(0, 0).re;
    let occupied = h.get(1, 1).re;
    Ok(FermionLevelConvention {
        vacuum,
        occupied,
        swapped_vacuum: occupied,
        swapped_occupied: vacuum,
    })
}
