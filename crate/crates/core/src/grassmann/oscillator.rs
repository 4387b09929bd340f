//! The classical fermionic oscillator in first-order form.
//!
//! Over generators `(q, q̄, q̇, q̄̇)` the Lagrangian is
//!
//! ```text
//! L = (iħ/2)(q̄ q̇ − q̄̇ q) − (ħω/2)(q̄ q − q q̄)
//! ```
//!
//! Momenta are left derivatives with respect to the velocities, which gives
//! `Π_q = −(iħ/2) q̄` and `Π_q̄ = −(iħ/2) q`. The Legendre transform pairs each
//! velocity on the left of its momentum, `H = q̇ Π_q + q̄̇ Π_q̄ − L`; with that
//! ordering the kinetic part cancels identically and `H = ħω q̄ q`.

use num::{One, Zero};

use super::element::{
    imag, ratio, rational_from_f64, real, Coeff, Generators, GrassmannElement, Side,
};
use crate::error::{domain, Result};
use crate::opcore::{Operator, C64};

/// Names of a conjugate pair and their velocities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldPair {
    pub field: String,
    pub conjugate: String,
}

impl FieldPair {
    pub fn new(field: &str, conjugate: &str) -> Self {
        Self {
            field: field.to_string(),
            conjugate: conjugate.to_string(),
        }
    }

    pub fn psi() -> Self {
        Self::new("psi", "psibar")
    }

    pub fn theta() -> Self {
        Self::new("theta", "thetabar")
    }

    pub fn field_velocity(&self) -> String {
        format!("{}dot", self.field)
    }

    pub fn conjugate_velocity(&self) -> String {
        format!("{}dot", self.conjugate)
    }

    /// `(q, q̄, q̇, q̄̇)`.
    pub fn generators(&self) -> Result<Generators> {
        Generators::new(&[
            self.field.clone(),
            self.conjugate.clone(),
            self.field_velocity(),
            self.conjugate_velocity(),
        ])
    }

    fn rate(&self, name: &str) -> Option<String> {
        if name == self.field {
            Some(self.field_velocity())
        } else if name == self.conjugate {
            Some(self.conjugate_velocity())
        } else {
            None
        }
    }
}

fn mono(g: &Generators, names: &[&str]) -> Result<GrassmannElement> {
    GrassmannElement::monomial(g, names)
}

fn check_scales(hbar: f64, omega: f64) -> Result<()> {
    if !(hbar > 0.0) || !hbar.is_finite() {
        return domain(format!("hbar must be positive, got {hbar}"));
    }
    if !(omega >= 0.0) || !omega.is_finite() {
        return domain(format!("omega must be non-negative, got {omega}"));
    }
    Ok(())
}

pub fn oscillator_lagrangian(pair: &FieldPair, hbar: f64, omega: f64) -> Result<GrassmannElement> {
    check_scales(hbar, omega)?;
    let g = pair.generators()?;
    let (q, qb) = (pair.field.as_str(), pair.conjugate.as_str());
    let (qd, qbd) = (pair.field_velocity(), pair.conjugate_velocity());
    let h = rational_from_f64(hbar)?;
    let w = rational_from_f64(omega)?;

    let kinetic = mono(&g, &[qb, &qd])?.sub(&mono(&g, &[&qbd, q])?)?;
    let potential = mono(&g, &[qb, q])?.sub(&mono(&g, &[q, qb])?)?;
    let half_i_hbar = imag(&h * ratio(1, 2));
    let half_hbar_omega = real(&h * &w * ratio(1, 2));
    kinetic
        .scale(&half_i_hbar)
        .sub(&potential.scale(&half_hbar_omega))
}

/// Every intermediate of the Lagrangian-to-Hamiltonian derivation, together
/// with the closed forms each is compared against.
#[derive(Debug, Clone)]
pub struct HamiltonianDerivation {
    pub pair: FieldPair,
    pub lagrangian: GrassmannElement,
    pub momentum_field: GrassmannElement,
    pub momentum_conjugate: GrassmannElement,
    pub hamiltonian: GrassmannElement,
    /// `−(iħ/2) q̄`
    pub expected_momentum_field: GrassmannElement,
    /// `−(iħ/2) q`
    pub expected_momentum_conjugate: GrassmannElement,
    /// `ħω q̄ q`
    pub expected_hamiltonian: GrassmannElement,
    /// `(ħω/2)(q̄q − qq̄)`, the commutator form of the same target.
    pub commutator_form: GrassmannElement,
    pub ordering: &'static str,
}

impl HamiltonianDerivation {
    pub fn momentum_field_residual(&self) -> GrassmannElement {
        self.momentum_field
            .sub(&self.expected_momentum_field)
            .expect("same universe")
    }

    pub fn momentum_conjugate_residual(&self) -> GrassmannElement {
        self.momentum_conjugate
            .sub(&self.expected_momentum_conjugate)
            .expect("same universe")
    }

    pub fn hamiltonian_residual(&self) -> GrassmannElement {
        self.hamiltonian
            .sub(&self.expected_hamiltonian)
            .expect("same universe")
    }

    /// All three residuals vanish exactly.
    pub fn is_exact(&self) -> bool {
        self.momentum_field_residual().is_zero()
            && self.momentum_conjugate_residual().is_zero()
            && self.hamiltonian_residual().is_zero()
            && self
                .commutator_form
                .sub(&self.expected_hamiltonian)
                .expect("same universe")
                .is_zero()
    }
}

pub const LEGENDRE_ORDERING: &str =
    "H = qdot*Pi_q + qbardot*Pi_qbar - L (velocity left of momentum)";

pub fn derive_hamiltonian(
    pair: &FieldPair,
    hbar: f64,
    omega: f64,
) -> Result<HamiltonianDerivation> {
    let lagrangian = oscillator_lagrangian(pair, hbar, omega)?;
    let g = lagrangian.generators().clone();
    let (q, qb) = (pair.field.as_str(), pair.conjugate.as_str());
    let (qd, qbd) = (pair.field_velocity(), pair.conjugate_velocity());

    let momentum_field = lagrangian.derivative(&qd, Side::Left)?;
    let momentum_conjugate = lagrangian.derivative(&qbd, Side::Left)?;

    let hamiltonian = GrassmannElement::generator(&g, &qd)?
        .mul(&momentum_field)?
        .add(&GrassmannElement::generator(&g, &qbd)?.mul(&momentum_conjugate)?)?
        .sub(&lagrangian)?;

    let h = rational_from_f64(hbar)?;
    let w = rational_from_f64(omega)?;
    let minus_half_i_hbar = imag(-(&h * ratio(1, 2)));
    let expected_momentum_field = GrassmannElement::generator(&g, qb)?.scale(&minus_half_i_hbar);
    let expected_momentum_conjugate = GrassmannElement::generator(&g, q)?.scale(&minus_half_i_hbar);
    let expected_hamiltonian = mono(&g, &[qb, q])?.scale(&real(&h * &w));
    let commutator_form = GrassmannElement::generator(&g, qb)?
        .commutator(&GrassmannElement::generator(&g, q)?)?
        .scale(&real(&h * &w * ratio(1, 2)));

    Ok(HamiltonianDerivation {
        pair: pair.clone(),
        lagrangian,
        momentum_field,
        momentum_conjugate,
        hamiltonian,
        expected_momentum_field,
        expected_momentum_conjugate,
        expected_hamiltonian,
        commutator_form,
        ordering: LEGENDRE_ORDERING,
    })
}

/// Derivation over the `(ψ, ψ̄)` pair; returns the Hamiltonian element.
pub fn derive_oscillator_hamiltonian(omega: f64, hbar: f64) -> Result<GrassmannElement> {
    Ok(derive_hamiltonian(&FieldPair::psi(), hbar, omega)?.hamiltonian)
}

/// `d/dt (∂L/∂q̇) − ∂L/∂q` with left derivatives.
pub fn euler_lagrange(
    lagrangian: &GrassmannElement,
    pair: &FieldPair,
    coordinate: &str,
) -> Result<GrassmannElement> {
    let velocity = pair.rate(coordinate).ok_or_else(|| {
        crate::Error::Domain(format!("{coordinate} is not a coordinate of the pair"))
    })?;
    let momentum = lagrangian.derivative(&velocity, Side::Left)?;
    let dt = momentum.derivation(|n| pair.rate(n))?;
    dt.sub(&lagrangian.derivative(coordinate, Side::Left)?)
}

/// Solution of the equation of motion for the conjugate field.
#[derive(Debug, Clone)]
pub struct ConjugateMotion {
    pub equation: GrassmannElement,
    /// `c` in `q̄̇ = c · q̄`.
    pub rate: Coeff,
    /// `rate / (2i)`: the frequency parameter when the solution is written
    /// as `q̄(t) ∝ e^{2i·ω̃·t}`.
    pub half_rate_frequency: Coeff,
}

/// Euler–Lagrange equation for the coordinate `q`, solved for `q̄̇`.
pub fn conjugate_motion(pair: &FieldPair, hbar: f64, omega: f64) -> Result<ConjugateMotion> {
    let lagrangian = oscillator_lagrangian(pair, hbar, omega)?;
    let equation = euler_lagrange(&lagrangian, pair, &pair.field)?;
    let alpha = equation.coefficient_of(&[&pair.conjugate_velocity()])?;
    let beta = equation.coefficient_of(&[&pair.conjugate])?;
    let linear_only = equation.terms().all(|(m, _)| m.count_ones() == 1);
    if alpha.is_zero() || !linear_only {
        return domain("equation of motion is not of the form a*qbardot + b*qbar = 0");
    }
    let rate = -(beta / alpha);
    let two_i = imag(ratio(2, 1));
    let half_rate_frequency = &rate / two_i;
    Ok(ConjugateMotion {
        equation,
        rate,
        half_rate_frequency,
    })
}

/// Matrices of `θ·` (left multiplication) and `∂_θ` on the basis `(1, θ)`.
#[derive(Debug, Clone)]
pub struct ThetaRepresentation {
    pub multiply: [[Coeff; 2]; 2],
    pub derivative: [[Coeff; 2]; 2],
    pub anticommutator: [[Coeff; 2]; 2],
    pub multiply_squared: [[Coeff; 2]; 2],
}

fn to_operator(m: &[[Coeff; 2]; 2]) -> Operator {
    use super::element::rational_to_f64;
    Operator::from_fn(2, |i, j| {
        C64::new(rational_to_f64(&m[i][j].re), rational_to_f64(&m[i][j].im))
    })
    .expect("2x2")
}

fn mat_mul(a: &[[Coeff; 2]; 2], b: &[[Coeff; 2]; 2]) -> [[Coeff; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j]))
}

fn mat_add(a: &[[Coeff; 2]; 2], b: &[[Coeff; 2]; 2]) -> [[Coeff; 2]; 2] {
    std::array::from_fn(|i| std::array::from_fn(|j| &a[i][j] + &b[i][j]))
}

impl ThetaRepresentation {
    pub fn anticommutator_is_identity(&self) -> bool {
        (0..2).all(|i| {
            (0..2).all(|j| {
                let c = &self.anticommutator[i][j];
                if i == j {
                    c.is_one()
                } else {
                    c.is_zero()
                }
            })
        })
    }

    pub fn multiply_is_nilpotent(&self) -> bool {
        self.multiply_squared.iter().flatten().all(|c| c.is_zero())
    }

    pub fn multiply_operator(&self) -> Operator {
        to_operator(&self.multiply)
    }

    pub fn derivative_operator(&self) -> Operator {
        to_operator(&self.derivative)
    }

    pub fn anticommutator_operator(&self) -> Operator {
        to_operator(&self.anticommutator)
    }
}

pub fn check_theta_representation() -> Result<ThetaRepresentation> {
    let g = Generators::new(&["theta"])?;
    let basis = [
        GrassmannElement::one(&g),
        GrassmannElement::generator(&g, "theta")?,
    ];
    let theta = GrassmannElement::generator(&g, "theta")?;
    // Column j is the image of basis element j, read back in coordinates.
    let coords = |e: &GrassmannElement| [e.coefficient(0), e.coefficient(1)];
    let mut multiply: [[Coeff; 2]; 2] =
        std::array::from_fn(|_| std::array::from_fn(|_| Coeff::zero()));
    let mut derivative = multiply.clone();
    for (j, b) in basis.iter().enumerate() {
        let m = coords(&theta.mul(b)?);
        let d = coords(&b.derivative("theta", Side::Left)?);
        for i in 0..2 {
            multiply[i][j] = m[i].clone();
            derivative[i][j] = d[i].clone();
        }
    }
    let anticommutator = mat_add(
        &mat_mul(&multiply, &derivative),
        &mat_mul(&derivative, &multiply),
    );
    let multiply_squared = mat_mul(&multiply, &multiply);
    Ok(ThetaRepresentation {
        multiply,
        derivative,
        anticommutator,
        multiply_squared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::fermion_mode;

    #[test]
    fn psi_derivation_is_exact() {
        for (hbar, omega) in [(1.0, 1.0), (0.7, 3.25), (1.054_571_817e-34, 2.0e15)] {
            let d = derive_hamiltonian(&FieldPair::psi(), hbar, omega).unwrap();
            assert!(
                d.momentum_field_residual().is_zero(),
                "{}",
                d.momentum_field
            );
            assert!(
                d.momentum_conjugate_residual().is_zero(),
                "{}",
                d.momentum_conjugate
            );
            assert!(d.hamiltonian_residual().is_zero(), "{}", d.hamiltonian);
            assert!(d.is_exact());
        }
    }

    #[test]
    fn zero_frequency_gives_zero_hamiltonian() {
        assert!(derive_oscillator_hamiltonian(0.0, 1.0).unwrap().is_zero());
        assert!(derive_oscillator_hamiltonian(-1.0, 1.0).is_err());
    }

    #[test]
    fn momentum_is_a_left_derivative() {
        // The right derivative of (iħ/2) ψ̄ψ̇ by ψ̇ is +(iħ/2) ψ̄, the opposite sign.
        let pair = FieldPair::psi();
        let g = pair.generators().unwrap();
        let half_i = imag(ratio(1, 2));
        let term = GrassmannElement::monomial(&g, &["psibar", "psidot"])
            .unwrap()
            .scale(&half_i);
        let psibar = GrassmannElement::generator(&g, "psibar").unwrap();
        assert_eq!(
            term.derivative("psidot", Side::Left).unwrap(),
            psibar.scale(&-half_i.clone())
        );
        assert_eq!(
            term.derivative("psidot", Side::Right).unwrap(),
            psibar.scale(&half_i)
        );
    }

    #[test]
    fn theta_pair_has_the_same_form() {
        let d = derive_hamiltonian(&FieldPair::theta(), 1.0, 2.0).unwrap();
        assert!(d.is_exact());
        let l = &d.lagrangian;
        let g = l.generators().clone();
        let expect = crate::grassmann::parse_element(
            "(0,1/2)*(thetabar*thetadot - thetabardot*theta) - 1*(thetabar*theta - theta*thetabar)",
            &g,
        )
        .unwrap();
        assert_eq!(*l, expect);
    }

    #[test]
    fn equation_of_motion_rate() {
        let m = conjugate_motion(&FieldPair::psi(), 1.0, 3.0).unwrap();
        assert_eq!(m.rate, imag(ratio(3, 1)));
        assert_eq!(m.half_rate_frequency, real(ratio(3, 2)));
    }

    #[test]
    fn theta_representation() {
        let r = check_theta_representation().unwrap();
        assert!(r.anticommutator_is_identity());
        assert!(r.multiply_is_nilpotent());
        // θ· sends 1 → θ, i.e. |0⟩ → |1⟩: the fermionic raising matrix.
        let f = fermion_mode(1.0).unwrap();
        assert_eq!(r.multiply_operator(), f.raise);
        assert_eq!(r.derivative_operator(), f.lower);
        assert_eq!(r.anticommutator_operator(), Operator::identity(2));
    }
}
