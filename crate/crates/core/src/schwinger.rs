//! Schwinger angular-momentum maps built from pairs of oscillator modes.
//!
//! Four constructions share one carrier, [`SchwingerGenerators`]:
//!
//! | kind           | layout   | `J₊`                 | `J_z`                      |
//! |----------------|----------|----------------------|----------------------------|
//! | `BosonBoson`   | `[D, D]` | `ħ a₁† a₂`           | `ħ/2 (N₁ − N₂)`            |
//! | `FermionFermion` | `[2, 2]` | `ħ f₁† f₂`         | `ħ/2 (Ñ₁ − Ñ₂)`            |
//! | `BosonFermionNaive` | `[D, 2]` | `ħ a† f`        | `ħ/2 (N − Ñ)`              |
//! | `BosonFermionCorrected` | `[D, 2]` | `ħ a† (1+N)^{−1/2} f` | see [`JzForm`]   |
//!
//! `J₋` is assembled from its own formula and equals `J₊†`. Modes are
//! composed with a plain tensor product, so lifted operators on different
//! modes commute. Negative powers of `N` use the pseudoinverse convention
//! (kernel value 0), which is what makes `J₋` well defined on `n = 0`.
//!
//! Truncated bosons break the ladder identities at the top level, so every
//! identity is checked after sandwiching with a *safe projector*.

use std::fmt;

use nalgebra::DVector;

use crate::check::Check;
use crate::error::{domain, Result};
use crate::fock::{boson_mode, fermion_mode, lift};
use crate::opcore::{anticommutator, commutator, hermitian_eigensystem, power, Operator, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchwingerKind {
    BosonBoson,
    FermionFermion,
    BosonFermionNaive,
    BosonFermionCorrected,
}

impl SchwingerKind {
    pub const ALL: [SchwingerKind; 4] = [
        SchwingerKind::BosonBoson,
        SchwingerKind::FermionFermion,
        SchwingerKind::BosonFermionNaive,
        SchwingerKind::BosonFermionCorrected,
    ];

    pub fn label(self) -> &'static str {
        match self {
            SchwingerKind::BosonBoson => "bb",
            SchwingerKind::FermionFermion => "ff",
            SchwingerKind::BosonFermionNaive => "bf-naive",
            SchwingerKind::BosonFermionCorrected => "bf-corrected",
        }
    }

    fn has_boson(self) -> bool {
        !matches!(self, SchwingerKind::FermionFermion)
    }
}

/// `J_z` convention for the corrected boson–fermion map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum JzForm {
    /// `ħ/2 (a†(1+N)^{−1}a (1 − Ñ) − Ñ)`: zero on `|0,0⟩`.
    Projected,
    /// `ħ/2 (1 − 2Ñ)`: `+ħ/2` on `|0,0⟩`.
    Diagonal,
}

impl JzForm {
    pub fn label(self) -> &'static str {
        match self {
            JzForm::Projected => "projected",
            JzForm::Diagonal => "diagonal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchwingerGenerators {
    pub kind: SchwingerKind,
    pub jz_form: Option<JzForm>,
    pub jplus: Operator,
    pub jminus: Operator,
    pub jz: Operator,
    pub cutoff: usize,
    pub hbar: f64,
}

impl SchwingerGenerators {
    pub fn layout(&self) -> &[usize] {
        self.jz.layout()
    }

    pub fn dim(&self) -> usize {
        self.jz.dim()
    }

    /// Basis index of `|n₁, n₂⟩`.
    pub fn index(&self, n1: usize, n2: usize) -> usize {
        n1 * self.layout()[1] + n2
    }

    /// Occupations of basis index `k`.
    pub fn labels(&self, k: usize) -> (usize, usize) {
        let d2 = self.layout()[1];
        (k / d2, k % d2)
    }
}

/// Builds the generators of `kind`.
///
/// `cutoff` is the boson level count (ignored for the fermion–fermion map).
/// `jz_form` must be `None` except for the corrected boson–fermion map, where
/// `None` selects [`JzForm::Projected`].
pub fn build_generators(
    kind: SchwingerKind,
    cutoff: usize,
    jz_form: Option<JzForm>,
    hbar: f64,
) -> Result<SchwingerGenerators> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return domain(format!("hbar must be positive, got {hbar}"));
    }
    if jz_form.is_some() && kind != SchwingerKind::BosonFermionCorrected {
        return domain(format!(
            "a J_z convention only applies to bf-corrected, not {}",
            kind.label()
        ));
    }
    if kind.has_boson() && cutoff < 2 {
        return domain(format!("boson cutoff must be at least 2, got {cutoff}"));
    }
    let half = 0.5 * hbar;
    let (jplus, jminus, jz, jz_form, cutoff) = match kind {
        SchwingerKind::BosonBoson => {
            let layout = [cutoff, cutoff];
            let m = boson_mode(cutoff, 1.0)?;
            let a1 = lift(&m.lower, 0, &layout)?;
            let a1d = lift(&m.raise, 0, &layout)?;
            let a2 = lift(&m.lower, 1, &layout)?;
            let a2d = lift(&m.raise, 1, &layout)?;
            let n1 = lift(&m.number, 0, &layout)?;
            let n2 = lift(&m.number, 1, &layout)?;
            let jp = (&a1d * &a2).scale(hbar);
            let jm = (&a2d * &a1).scale(hbar);
            let jz = (&n1 - &n2).scale(half);
            (jp, jm, jz, None, cutoff)
        }
        SchwingerKind::FermionFermion => {
            let layout = [2, 2];
            let m = fermion_mode(1.0)?;
            let f1 = lift(&m.lower, 0, &layout)?;
            let f1d = lift(&m.raise, 0, &layout)?;
            let f2 = lift(&m.lower, 1, &layout)?;
            let f2d = lift(&m.raise, 1, &layout)?;
            let jp = (&f1d * &f2).scale(hbar);
            let jm = (&f2d * &f1).scale(hbar);
            let jz = (&(&f1d * &f1) - &(&f2d * &f2)).scale(half);
            (jp, jm, jz, None, 2)
        }
        SchwingerKind::BosonFermionNaive | SchwingerKind::BosonFermionCorrected => {
            let layout = [cutoff, 2];
            let b = boson_mode(cutoff, 1.0)?;
            let f = fermion_mode(1.0)?;
            let a = lift(&b.lower, 0, &layout)?;
            let ad = lift(&b.raise, 0, &layout)?;
            let n = lift(&b.number, 0, &layout)?;
            let fl = lift(&f.lower, 1, &layout)?;
            let fd = lift(&f.raise, 1, &layout)?;
            let nt = lift(&f.number, 1, &layout)?;
            if kind == SchwingerKind::BosonFermionNaive {
                let jp = (&ad * &fl).scale(hbar);
                let jm = (&fd * &a).scale(hbar);
                let jz = (&n - &nt).scale(half);
                (jp, jm, jz, None, cutoff)
            } else {
                let form = jz_form.unwrap_or(JzForm::Projected);
                let one_plus_n = n.shift(1.0);
                let id = Operator::identity(n.dim()).relabel(layout.to_vec())?;
                let s = power(&one_plus_n, -0.5, 0.0)?;
                let jp = (&(&ad * &s) * &fl).scale(hbar);
                let jm = (&(&fd * &s) * &a).scale(hbar);
                let jz = match form {
                    JzForm::Projected => {
                        let inv = power(&one_plus_n, -1.0, 0.0)?;
                        let occupied = &(&ad * &inv) * &a;
                        let empty = &id - &nt;
                        (&(&occupied * &empty) - &nt).scale(half)
                    }
                    JzForm::Diagonal => (&id - &nt.scale(2.0)).scale(half),
                };
                (jp, jm, jz, Some(form), cutoff)
            }
        }
    };
    Ok(SchwingerGenerators {
        kind,
        jz_form,
        jplus,
        jminus,
        jz,
        cutoff,
        hbar,
    })
}

/// `J² = J_z² + ½{J₊, J₋}`.
pub fn casimir(g: &SchwingerGenerators) -> Operator {
    let jz2 = &g.jz * &g.jz;
    let sym = anticommutator(&g.jplus, &g.jminus).expect("generators share a dimension");
    &jz2 + &sym.scale(0.5)
}

fn diagonal_projector(g: &SchwingerGenerators, keep: impl Fn(usize, usize) -> bool) -> Operator {
    let diag: Vec<f64> = (0..g.dim())
        .map(|k| {
            let (n1, n2) = g.labels(k);
            if keep(n1, n2) {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    Operator::diagonal(&diag)
        .and_then(|p| p.relabel(g.layout().to_vec()))
        .expect("dimension and layout come from the generators")
}

/// Default safe subspace: `n₁ + n₂ ≤ D − 2` for two bosons, boson level
/// `≤ D − 2` for the mixed maps, everything for two fermions.
pub fn safe_projector(g: &SchwingerGenerators) -> Operator {
    let top = g.cutoff.saturating_sub(2);
    match g.kind {
        SchwingerKind::BosonBoson => diagonal_projector(g, |n1, n2| n1 + n2 <= top),
        SchwingerKind::FermionFermion => diagonal_projector(g, |_, _| true),
        _ => diagonal_projector(g, |n, _| n <= top),
    }
}

/// Safe projector with `|0,0⟩` removed.
pub fn safe_projector_without_vacuum(g: &SchwingerGenerators) -> Operator {
    let safe = safe_projector(g);
    let vac = diagonal_projector(g, |n1, n2| n1 == 0 && n2 == 0);
    &safe - &vac
}

fn check_projector(p: &Operator, dim: usize) -> Result<()> {
    if p.dim() != dim {
        return domain(format!(
            "projector dimension {} does not match {}",
            p.dim(),
            dim
        ));
    }
    let scale = p.max_norm().max(1.0);
    if !p.is_hermitian(1e-12) || (&(p * p) - p).max_norm() > 1e-12 * scale {
        return domain("projector must be Hermitian and idempotent");
    }
    Ok(())
}

/// Residuals of the su(2) relations and of the Casimir commutators, all
/// sandwiched by a projector.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport {
    /// `‖P([J_z, J₊] − ħJ₊)P‖`
    pub jz_plus: f64,
    /// `‖P([J_z, J₋] + ħJ₋)P‖`
    pub jz_minus: f64,
    /// `‖P([J₊, J₋] − 2ħJ_z)P‖`
    pub plus_minus: f64,
    /// `‖P[J², J_z]P‖`
    pub casimir_jz: f64,
    /// `‖P[J², J₊]P‖`
    pub casimir_plus: f64,
    pub hbar: f64,
    /// Relative tolerance: su(2) residuals are compared with `tol·ħ`,
    /// Casimir commutators with `tol·ħ³`.
    pub tol: f64,
}

impl AlgebraReport {
    pub fn max_su2(&self) -> f64 {
        self.jz_plus.max(self.jz_minus).max(self.plus_minus)
    }

    /// The su(2) relations hold.
    pub fn passed(&self) -> bool {
        let t = self.tol * self.hbar;
        self.jz_plus <= t && self.jz_minus <= t && self.plus_minus <= t
    }

    pub fn casimir_commutes(&self) -> bool {
        let t = self.tol * self.hbar.powi(3);
        self.casimir_jz <= t && self.casimir_plus <= t
    }

    pub fn checks(&self, prefix: &str) -> Vec<Check> {
        let t = self.tol * self.hbar;
        let t3 = self.tol * self.hbar.powi(3);
        vec![
            Check::within(format!("{prefix}su2_jz_jplus"), self.jz_plus, t),
            Check::within(format!("{prefix}su2_jz_jminus"), self.jz_minus, t),
            Check::within(format!("{prefix}su2_jplus_jminus"), self.plus_minus, t),
            Check::within(format!("{prefix}casimir_commutes_jz"), self.casimir_jz, t3),
            Check::within(
                format!("{prefix}casimir_commutes_jplus"),
                self.casimir_plus,
                t3,
            ),
        ]
    }
}

pub const ALGEBRA_TOL: f64 = 1e-10;

/// `‖P[A, B]P‖`.
pub fn commutator_residual(a: &Operator, b: &Operator, projector: &Operator) -> Result<f64> {
    Ok(commutator(a, b)?.sandwich(projector)?.max_norm())
}

pub fn algebra_report(g: &SchwingerGenerators, safe: &Operator) -> Result<AlgebraReport> {
    check_projector(safe, g.dim())?;
    let h = g.hbar;
    let res = |x: Operator| -> Result<f64> { Ok(x.sandwich(safe)?.max_norm()) };
    let jz_plus = res(&commutator(&g.jz, &g.jplus)? - &g.jplus.scale(h))?;
    let jz_minus = res(&commutator(&g.jz, &g.jminus)? + &g.jminus.scale(h))?;
    let plus_minus = res(&commutator(&g.jplus, &g.jminus)? - &g.jz.scale(2.0 * h))?;
    let j2 = casimir(g);
    let casimir_jz = res(commutator(&j2, &g.jz)?)?;
    let casimir_plus = res(commutator(&j2, &g.jplus)?)?;
    Ok(AlgebraReport {
        jz_plus,
        jz_minus,
        plus_minus,
        casimir_jz,
        casimir_plus,
        hbar: h,
        tol: ALGEBRA_TOL,
    })
}

/// Non-negative half-integer or signed half-integer, stored doubled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub fn from_twice(twice: i64) -> Self {
        Self(twice)
    }

    pub fn twice(self) -> i64 {
        self.0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl std::str::FromStr for HalfInt {
    type Err = crate::Error;

    /// Accepts `3`, `-1/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || crate::Error::Domain(format!("not a half-integer: {s:?}"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            return match d.trim() {
                "1" => Ok(Self(2 * n)),
                "2" => Ok(Self(n)),
                _ => Err(bad()),
            };
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let twice = 2.0 * x;
        if twice.fract() != 0.0 || !twice.is_finite() {
            return Err(bad());
        }
        Ok(Self(twice as i64))
    }
}

/// Angular-momentum label `|j, m⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JMLabel {
    j: HalfInt,
    m: HalfInt,
}

impl JMLabel {
    pub fn new(j: HalfInt, m: HalfInt) -> Result<Self> {
        if j.twice() < 0 || m.twice().abs() > j.twice() || (j.twice() + m.twice()) % 2 != 0 {
            return domain(format!("invalid angular-momentum label j={j}, m={m}"));
        }
        Ok(Self { j, m })
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn m(&self) -> HalfInt {
        self.m
    }

    /// Oscillator occupations `(j + m, j − m)`.
    pub fn occupations(&self) -> (usize, usize) {
        (
            ((self.j.twice() + self.m.twice()) / 2) as usize,
            ((self.j.twice() - self.m.twice()) / 2) as usize,
        )
    }
}

/// `j = (n₁ + n₂)/2`, `m = (n₁ − n₂)/2`.
pub fn jm_map(n1: usize, n2: usize) -> JMLabel {
    let (a, b) = (n1 as i64, n2 as i64);
    JMLabel {
        j: HalfInt(a + b),
        m: HalfInt(a - b),
    }
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `(a₁†)^{j+m} (a₂†)^{j−m} / √((j+m)!(j−m)!) |0,0⟩` on layout `[D, D]`.
pub fn schwinger_state(label: JMLabel, cutoff: usize) -> Result<DVector<C64>> {
    let (n1, n2) = label.occupations();
    if cutoff < 2 || n1 >= cutoff || n2 >= cutoff {
        return domain(format!(
            "cutoff {cutoff} too small for occupations ({n1}, {n2})"
        ));
    }
    let layout = [cutoff, cutoff];
    let m = boson_mode(cutoff, 1.0)?;
    let a1d = lift(&m.raise, 0, &layout)?;
    let a2d = lift(&m.raise, 1, &layout)?;
    let mut v = DVector::from_element(cutoff * cutoff, C64::new(0.0, 0.0));
    v[0] = C64::new(1.0, 0.0);
    for _ in 0..n2 {
        v = a2d.apply(&v)?;
    }
    for _ in 0..n1 {
        v = a1d.apply(&v)?;
    }
    let norm = (factorial(n1) * factorial(n2)).sqrt();
    Ok(v.unscale(norm))
}

/// One cluster of the projected Casimir spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CasimirLevel {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Half-integer `j` with `ħ² j(j+1)` equal to the eigenvalue, if any.
    pub j: Option<HalfInt>,
}

/// Orthonormal basis of the range of a projector. Diagonal projectors give
/// coordinate vectors, so restrictions to them are exact.
fn projector_range(p: &Operator) -> Result<Vec<DVector<C64>>> {
    let n = p.dim();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || p.get(i, j) == C64::new(0.0, 0.0)));
    if diagonal {
        return Ok((0..n)
            .filter(|&k| p.get(k, k).re > 0.5)
            .map(|k| {
                let mut v = DVector::from_element(n, C64::new(0.0, 0.0));
                v[k] = C64::new(1.0, 0.0);
                v
            })
            .collect());
    }
    let eig = hermitian_eigensystem(p)?;
    Ok((0..eig.dim())
        .filter(|&k| eig.eigenvalues[k] > 0.5)
        .map(|k| eig.vector(k))
        .collect())
}

/// Eigenvalues of `J²` restricted to the range of `safe`, ascending.
pub fn restricted_eigenvalues(op: &Operator, safe: &Operator) -> Result<Vec<f64>> {
    check_projector(safe, op.dim())?;
    let basis = projector_range(safe)?;
    let r = basis.len();
    if r == 0 {
        return Ok(Vec::new());
    }
    let images: Vec<DVector<C64>> = basis.iter().map(|v| op.apply(v)).collect::<Result<_>>()?;
    let block = Operator::from_fn(r, |i, j| basis[i].dotc(&images[j]))?;
    let mut values = hermitian_eigensystem(&block)?.eigenvalues;
    values.sort_by(f64::total_cmp);
    Ok(values)
}

pub fn infer_j(eigenvalue: f64, hbar: f64) -> Option<HalfInt> {
    let x = eigenvalue / (hbar * hbar);
    if x < -1e-6 {
        return None;
    }
    let j = (-1.0 + (1.0 + 4.0 * x.max(0.0)).sqrt()) / 2.0;
    let twice = (2.0 * j).round();
    let jj = twice / 2.0;
    ((jj * (jj + 1.0) - x).abs() <= 1e-6).then_some(HalfInt(twice as i64))
}

/// Clusters the restricted Casimir spectrum with tolerance `1e−8·ħ²`.
pub fn casimir_spectrum(g: &SchwingerGenerators, safe: &Operator) -> Result<Vec<CasimirLevel>> {
    let values = restricted_eigenvalues(&casimir(g), safe)?;
    let tol = 1e-8 * g.hbar * g.hbar;
    let mut levels: Vec<(Vec<f64>,)> = Vec::new();
    for v in values {
        match levels.last_mut() {
            Some((members,)) if v - members[members.len() - 1] <= tol => members.push(v),
            _ => levels.push((vec![v],)),
        }
    }
    Ok(levels
        .into_iter()
        .map(|(members,)| {
            let mean = members.iter().sum::<f64>() / members.len() as f64;
            CasimirLevel {
                eigenvalue: mean,
                multiplicity: members.len(),
                j: infer_j(mean, g.hbar),
            }
        })
        .collect())
}

/// `ħ²(N/2)(N/2 + 1)` with `N = N₁ + N₂` on layout `[D, D]`.
pub fn boson_pair_casimir_closed_form(cutoff: usize, hbar: f64) -> Result<Operator> {
    let layout = [cutoff, cutoff];
    let m = boson_mode(cutoff, 1.0)?;
    let half_n = (&lift(&m.number, 0, &layout)? + &lift(&m.number, 1, &layout)?).scale(0.5);
    Ok((&half_n * &half_n.shift(1.0)).scale(hbar * hbar))
}

/// `ħ²(Ñ/2)(Ñ/2 + 1) − 2ħ² Ñ₁Ñ₂`.
pub fn fermion_pair_casimir_closed_form(hbar: f64) -> Result<Operator> {
    let layout = [2, 2];
    let m = fermion_mode(1.0)?;
    let n1 = lift(&m.number, 0, &layout)?;
    let n2 = lift(&m.number, 1, &layout)?;
    let half_n = (&n1 + &n2).scale(0.5);
    let first = &half_n * &half_n.shift(1.0);
    Ok((&first - &(&n1 * &n2).scale(2.0)).scale(hbar * hbar))
}

/// `(ħ²/4)(Ñ(Ñ + 2) + N(N + 2) − {N, Ñ})` on layout `[D, 2]`.
pub fn naive_mixed_casimir_closed_form(cutoff: usize, hbar: f64) -> Result<Operator> {
    let layout = [cutoff, 2];
    let n = lift(&boson_mode(cutoff, 1.0)?.number, 0, &layout)?;
    let nt = lift(&fermion_mode(1.0)?.number, 1, &layout)?;
    let sum = &(&nt * &nt.shift(2.0)) + &(&n * &n.shift(2.0));
    Ok((&sum - &anticommutator(&n, &nt)?).scale(hbar * hbar / 4.0))
}

/// Nonzero components of `op · |n₁, n₂⟩`, as `((n₁', n₂'), amplitude)`.
pub fn ladder_action(
    g: &SchwingerGenerators,
    op: &Operator,
    n1: usize,
    n2: usize,
) -> Vec<((usize, usize), C64)> {
    let col = g.index(n1, n2);
    (0..g.dim())
        .filter_map(|row| {
            let z = op.get(row, col);
            (z.norm() > 1e-12).then(|| (g.labels(row), z))
        })
        .collect()
}

/// Diagonal entry of `op` at `|n₁, n₂⟩`.
pub fn diagonal_value(g: &SchwingerGenerators, op: &Operator, n1: usize, n2: usize) -> f64 {
    let k = g.index(n1, n2);
    op.get(k, k).re
}

/// Max over safe boson levels of `|J²|n,ñ⟩ − λ(n,ñ)|n,ñ⟩|`, with
/// `λ(n,0) = ħ²n(n+2)/4` and `λ(n,1) = ħ²(n²+3)/4`.
pub fn naive_mixed_eigen_law_error(g: &SchwingerGenerators) -> Result<f64> {
    if g.kind != SchwingerKind::BosonFermionNaive {
        return domain("eigenvalue law applies to the naive boson-fermion map");
    }
    let j2 = casimir(g);
    let h2 = g.hbar * g.hbar;
    let mut worst = 0.0_f64;
    for n in 0..=g.cutoff - 2 {
        for nt in 0..2 {
            let nf = n as f64;
            let lambda = if nt == 0 {
                h2 * nf * (nf + 2.0) / 4.0
            } else {
                h2 * (nf * nf + 3.0) / 4.0
            };
            let col = g.index(n, nt);
            for row in 0..g.dim() {
                let expect = if row == col { lambda } else { 0.0 };
                worst = worst.max((j2.get(row, col) - C64::new(expect, 0.0)).norm());
            }
        }
    }
    Ok(worst)
}

/// Identity checks appropriate for the kind, with the default safe projector.
pub fn verify(g: &SchwingerGenerators) -> Result<Vec<Check>> {
    verify_with_tol(g, ALGEBRA_TOL)
}

/// As [`verify`], with `tol` as the relative su(2) tolerance.
pub fn verify_with_tol(g: &SchwingerGenerators, tol: f64) -> Result<Vec<Check>> {
    let safe = safe_projector(g);
    let h2 = g.hbar * g.hbar;
    let mut checks = vec![
        Check::exact("jminus_is_adjoint_of_jplus", g.jminus == g.jplus.adjoint()),
        Check::within("jz_hermitian", g.jz.hermiticity_defect(), 1e-12 * g.hbar),
    ];
    let mut report = algebra_report(g, &safe)?;
    report.tol = tol;
    checks.extend(report.checks(""));
    let j2 = casimir(g);
    match g.kind {
        SchwingerKind::BosonBoson => {
            let closed = boson_pair_casimir_closed_form(g.cutoff, g.hbar)?;
            let err = (&j2 - &closed).sandwich(&safe)?.max_norm();
            checks.push(Check::within(
                "casimir_equals_half_n_closed_form",
                err,
                1e-10 * h2,
            ));
        }
        SchwingerKind::FermionFermion => {
            let closed = fermion_pair_casimir_closed_form(g.hbar)?;
            checks.push(Check::within(
                "casimir_equals_closed_form",
                j2.distance(&closed)?,
                1e-12 * h2,
            ));
        }
        SchwingerKind::BosonFermionNaive => {
            let closed = naive_mixed_casimir_closed_form(g.cutoff, g.hbar)?;
            let err = (&j2 - &closed).sandwich(&safe)?.max_norm();
            checks.push(Check::within("casimir_equals_closed_form", err, 1e-12 * h2));
            checks.push(Check::within(
                "casimir_eigen_laws",
                naive_mixed_eigen_law_error(g)?,
                1e-10 * h2,
            ));
        }
        SchwingerKind::BosonFermionCorrected => {
            let p = safe_projector_without_vacuum(g);
            let target = p.scale(0.75 * h2);
            let err = (&j2.sandwich(&p)? - &target).max_norm();
            checks.push(Check::within(
                "casimir_three_quarters_off_vacuum",
                err,
                1e-10 * h2,
            ));
        }
    }
    Ok(checks)
}

/// Residuals of `a N^r = (1+N)^r a` and `N^r a† = a†(1+N)^r` on levels
/// `0..=D−2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftReport {
    pub r: f64,
    pub cutoff: usize,
    pub lowering_residual: f64,
    pub raising_residual: f64,
}

impl ShiftReport {
    pub fn max_residual(&self) -> f64 {
        self.lowering_residual.max(self.raising_residual)
    }
}

pub fn shift_theorem_check(r: f64, cutoff: usize) -> Result<ShiftReport> {
    if cutoff < 3 {
        return domain(format!("shift check needs cutoff >= 3, got {cutoff}"));
    }
    if !r.is_finite() {
        return domain("exponent must be finite");
    }
    let m = boson_mode(cutoff, 1.0)?;
    let n_r = power(&m.number, r, 0.0)?;
    let one_plus_n_r = power(&m.number.shift(1.0), r, 0.0)?;
    let safe = crate::fock::level_projector(cutoff, cutoff - 2);
    let lower = &(&m.lower * &n_r) - &(&one_plus_n_r * &m.lower);
    let raise = &(&n_r * &m.raise) - &(&m.raise * &one_plus_n_r);
    Ok(ShiftReport {
        r,
        cutoff,
        lowering_residual: lower.sandwich(&safe)?.max_norm(),
        raising_residual: raise.sandwich(&safe)?.max_norm(),
    })
}
