//! Dense complex operator algebra.
//!
//! [`Operator`] is the carrier for every ladder, number, Hamiltonian and
//! angular-momentum matrix in the crate. Storage is a dense `dim × dim`
//! complex matrix plus a *layout*: the ordered list of single-mode dimensions
//! whose tensor product the operator acts on. Raw matrices carry an empty
//! layout and are treated as a single factor of size `dim` when composed.
//!
//! Tolerances are expressed relative to the max-norm (largest entry modulus)
//! so that results are unaffected by the choice of ħ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
pub use num::complex::Complex64 as C64;

use crate::error::{domain, shape, Error, Result};

/// Largest dimension a tensor product may produce unless overridden.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Relative Hermiticity tolerance accepted by the spectral routines.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues with modulus at or below this map to the kernel value in
/// [`spectral_function`].
pub const KERNEL_EPS: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct Operator {
    matrix: DMatrix<C64>,
    layout: Vec<usize>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Operator")
            .field("dim", &self.dim())
            .field("layout", &self.layout)
            .field("matrix", &self.matrix)
            .finish()
    }
}

impl Operator {
    /// Wraps a square matrix with an empty layout.
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        Self::with_layout(matrix, Vec::new())
    }

    pub fn with_layout(matrix: DMatrix<C64>, layout: Vec<usize>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return shape(format!(
                "operator must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            ));
        }
        if matrix.nrows() == 0 {
            return shape("operator dimension must be at least 1");
        }
        if !layout.is_empty() {
            let product = layout.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
            if layout.contains(&0) || product != Some(matrix.nrows()) {
                return shape(format!(
                    "layout {:?} does not multiply to dimension {}",
                    layout,
                    matrix.nrows()
                ));
            }
        }
        Ok(Self { matrix, layout })
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return shape("rows must form a square array");
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j], 0.0)))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Result<Self> {
        Self::from_matrix(DMatrix::from_fn(dim, dim, f))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_matrix(DMatrix::identity(dim, dim)).expect("identity of positive dimension")
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_matrix(DMatrix::zeros(dim, dim)).expect("zeros of positive dimension")
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let n = values.len();
        Self::from_fn(n, |i, j| {
            if i == j {
                C64::new(values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn layout(&self) -> &[usize] {
        &self.layout
    }

    /// Layout used when composing: a raw matrix counts as one factor.
    pub fn effective_layout(&self) -> Vec<usize> {
        if self.layout.is_empty() {
            vec![self.dim()]
        } else {
            self.layout.clone()
        }
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    /// Replaces the layout; the product must still equal `dim`.
    pub fn relabel(self, layout: Vec<usize>) -> Result<Self> {
        Self::with_layout(self.matrix, layout)
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            layout: self.layout.clone(),
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            matrix: &self.matrix * C64::new(factor, 0.0),
            layout: self.layout.clone(),
        }
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self {
            matrix: &self.matrix * factor,
            layout: self.layout.clone(),
        }
    }

    fn check_same_dim(&self, other: &Self, what: &str) -> Result<()> {
        if self.dim() != other.dim() {
            return shape(format!(
                "{what}: dimension mismatch {} vs {}",
                self.dim(),
                other.dim()
            ));
        }
        Ok(())
    }

    fn merged_layout(&self, other: &Self) -> Vec<usize> {
        if self.layout.is_empty() {
            other.layout.clone()
        } else {
            self.layout.clone()
        }
    }

    /// Matrix product `self · other`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "product")?;
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
            layout: self.merged_layout(other),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "sum")?;
        Ok(Self {
            matrix: &self.matrix + &other.matrix,
            layout: self.merged_layout(other),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other, "difference")?;
        Ok(Self {
            matrix: &self.matrix - &other.matrix,
            layout: self.merged_layout(other),
        })
    }

    /// `self + c·I`.
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        for i in 0..out.dim() {
            out.matrix[(i, i)] += C64::new(c, 0.0);
        }
        out
    }

    /// Integer power by repeated multiplication; `pow(0)` is the identity.
    pub fn pow(&self, exponent: u32) -> Self {
        let mut out = Self {
            matrix: DMatrix::identity(self.dim(), self.dim()),
            layout: self.layout.clone(),
        };
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dim() {
            return shape(format!(
                "vector length {} does not match dimension {}",
                v.len(),
                self.dim()
            ));
        }
        Ok(&self.matrix * v)
    }

    /// Largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.matrix.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint())
            .iter()
            .fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// `‖A − A†‖_max ≤ tol · ‖A‖_max`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.max_norm()
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `P · self · P`.
    pub fn sandwich(&self, projector: &Self) -> Result<Self> {
        projector.product(self)?.product(projector)
    }

    /// Max-norm of `self − other`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        Ok(self.checked_sub(other)?.max_norm())
    }
}

impl<'a> Mul<&'a Operator> for &'a Operator {
    type Output = Operator;

    /// Panics on a dimension mismatch; use [`Operator::product`] for a checked product.
    fn mul(self, rhs: &'a Operator) -> Operator {
        self.product(rhs)
            .expect("operator product dimension mismatch")
    }
}

impl<'a> Add<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn add(self, rhs: &'a Operator) -> Operator {
        self.checked_add(rhs)
            .expect("operator sum dimension mismatch")
    }
}

impl<'a> Sub<&'a Operator> for &'a Operator {
    type Output = Operator;

    fn sub(self, rhs: &'a Operator) -> Operator {
        self.checked_sub(rhs)
            .expect("operator difference dimension mismatch")
    }
}

impl Neg for &Operator {
    type Output = Operator;

    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

/// `A ⊗ B` with the default dimension limit.
pub fn tensor_product(a: &Operator, b: &Operator) -> Result<Operator> {
    tensor_product_with_limit(a, b, DEFAULT_MAX_DIM)
}

/// Entry `(i·dimB + k, j·dimB + l)` of the result is `A(i,j)·B(k,l)`.
pub fn tensor_product_with_limit(a: &Operator, b: &Operator, max_dim: usize) -> Result<Operator> {
    let dim = a.dim().checked_mul(b.dim()).ok_or(Error::Size {
        dim: usize::MAX,
        max: max_dim,
    })?;
    if dim > max_dim {
        return Err(Error::Size { dim, max: max_dim });
    }
    let matrix = a.matrix.kronecker(&b.matrix);
    let mut layout = a.effective_layout();
    layout.extend(b.effective_layout());
    Operator::with_layout(matrix, layout)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BracketKind {
    Commutator,
    Anticommutator,
}

/// `AB − BA` or `AB + BA`.
pub fn bracket(a: &Operator, b: &Operator, kind: BracketKind) -> Result<Operator> {
    let ab = a.product(b)?;
    let ba = b.product(a)?;
    match kind {
        BracketKind::Commutator => ab.checked_sub(&ba),
        BracketKind::Anticommutator => ab.checked_add(&ba),
    }
}

pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    bracket(a, b, BracketKind::Commutator)
}

pub fn anticommutator(a: &Operator, b: &Operator) -> Result<Operator> {
    bracket(a, b, BracketKind::Anticommutator)
}

/// Eigenpairs of a Hermitian operator, eigenvalues ascending, eigenvectors as
/// orthonormal columns with their first significant component real-positive.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.column(k).into_owned()
    }

    /// `V · diag(λ) · V†`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        self.reconstruct_with(|x| x)
    }

    fn reconstruct_with(&self, mut f: impl FnMut(f64) -> f64) -> DMatrix<C64> {
        let v = &self.eigenvectors;
        let n = self.dim();
        let mut scaled = v.clone();
        for (k, &lambda) in self.eigenvalues.iter().enumerate() {
            let w = C64::new(f(lambda), 0.0);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        scaled * v.adjoint()
    }
}

fn first_significant(column: &[C64], threshold: f64) -> Option<usize> {
    column.iter().position(|z| z.norm() > threshold)
}

pub fn hermitian_eigensystem(a: &Operator) -> Result<EigenSystem> {
    let scale = a.max_norm();
    if a.hermiticity_defect() > HERMITIAN_TOL * scale {
        return domain(format!(
            "operator is not Hermitian (defect {:.3e}, norm {:.3e})",
            a.hermiticity_defect(),
            scale
        ));
    }
    let n = a.dim();
    // Symmetrize so the solver sees an exactly Hermitian input.
    let sym = (&a.matrix + a.matrix.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut col: Vec<C64> = eig.eigenvectors.column(k).iter().copied().collect();
            if let Some(p) = first_significant(&col, 1e-12) {
                let phase = col[p].conj() / col[p].norm();
                col.iter_mut().for_each(|z| *z *= phase);
                col[p] = C64::new(col[p].re, 0.0);
            }
            (eig.eigenvalues[k], col)
        })
        .collect();

    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    // Within a degenerate cluster, order by position of the leading component.
    let tie = 1e-10 * scale.max(1.0);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].0 - pairs[end - 1].0 <= tie {
            end += 1;
        }
        pairs[start..end].sort_by(|x, y| {
            let px = first_significant(&x.1, 1e-12).unwrap_or(n);
            let py = first_significant(&y.1, 1e-12).unwrap_or(n);
            px.cmp(&py)
                .then_with(|| {
                    y.1[py.min(n - 1)]
                        .norm()
                        .total_cmp(&x.1[px.min(n - 1)].norm())
                })
                .then_with(|| x.0.total_cmp(&y.0))
        });
        start = end;
    }

    let eigenvalues = pairs.iter().map(|p| p.0).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |i, k| pairs[k].1[i]);
    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// `f(A) = Σ f(λ_k) P_k`, with eigenvalues of modulus ≤ [`KERNEL_EPS`]
/// mapped to `kernel_value` instead of `f(0)`.
pub fn spectral_function(
    a: &Operator,
    f: impl Fn(f64) -> f64,
    kernel_value: f64,
) -> Result<Operator> {
    let eig = hermitian_eigensystem(a)?;
    let mut values = Vec::with_capacity(eig.dim());
    for &lambda in &eig.eigenvalues {
        if lambda.abs() <= KERNEL_EPS {
            values.push(kernel_value);
        } else {
            let v = f(lambda);
            if !v.is_finite() {
                return domain(format!(
                    "spectral function is not finite at eigenvalue {lambda}"
                ));
            }
            values.push(v);
        }
    }
    let mut it = values.into_iter();
    let matrix = eig.reconstruct_with(|_| it.next().expect("one value per eigenvalue"));
    Operator::with_layout(matrix, a.layout.clone())
}

/// `A^r` through the spectral calculus; singular directions go to `kernel_value`.
pub fn power(a: &Operator, r: f64, kernel_value: f64) -> Result<Operator> {
    spectral_function(a, |x| x.powf(r), kernel_value)
}

/// `Tr e^{−βH}`.
pub fn trace_exp(h: &Operator, beta: f64) -> Result<f64> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return domain(format!("beta must be finite and non-negative, got {beta}"));
    }
    let eig = hermitian_eigensystem(h)?;
    Ok(eig.eigenvalues.iter().map(|&l| (-beta * l).exp()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn sigma_x() -> Operator {
        Operator::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    fn lowering(d: usize) -> Operator {
        Operator::from_fn(d, |i, j| {
            if j == i + 1 {
                c((j as f64).sqrt())
            } else {
                c(0.0)
            }
        })
        .unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let p = tensor_product(&Operator::identity(2), &Operator::identity(3)).unwrap();
        assert_eq!(p.matrix(), Operator::identity(6).matrix());
        assert_eq!(p.layout(), &[2, 3]);
    }

    #[test]
    fn tensor_index_formula() {
        // a (two levels) ⊗ I₂: nonzero only at (0,2) and (1,3).
        let a = lowering(2);
        let p = tensor_product(&a, &Operator::identity(2)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expect = if (i, j) == (0, 2) || (i, j) == (1, 3) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(p.get(i, j), c(expect), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn tensor_size_limit() {
        let a = Operator::identity(70);
        let err = tensor_product(&a, &a).unwrap_err();
        assert_eq!(
            err,
            Error::Size {
                dim: 4900,
                max: DEFAULT_MAX_DIM
            }
        );
        assert!(tensor_product_with_limit(&a, &a, 5000).is_ok());
    }

    #[test]
    fn layout_must_match_dim() {
        assert!(Operator::with_layout(DMatrix::identity(6, 6), vec![2, 2]).is_err());
        assert!(Operator::with_layout(DMatrix::identity(6, 6), vec![2, 3]).is_ok());
        assert!(Operator::from_matrix(DMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn bracket_examples() {
        let x = sigma_x();
        assert_eq!(commutator(&x, &x).unwrap().max_norm(), 0.0);

        let a = lowering(4);
        let comm = commutator(&a, &a.adjoint()).unwrap();
        let expect = Operator::diagonal(&[1.0, 1.0, 1.0, -3.0]).unwrap();
        assert!(comm.distance(&expect).unwrap() < 1e-14);

        assert!(matches!(
            commutator(&Operator::identity(2), &Operator::identity(3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn eigen_examples() {
        let d = Operator::diagonal(&[3.0, 1.0, 2.0]).unwrap();
        let e = hermitian_eigensystem(&d).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);

        let e = hermitian_eigensystem(&sigma_x()).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let lead = e.eigenvectors[(0, k)];
            assert!(lead.re > 0.0 && lead.im == 0.0);
        }
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let a = lowering(3);
        assert!(matches!(hermitian_eigensystem(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn spectral_examples() {
        let n = Operator::diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let id = spectral_function(&n, |x| x, 0.0).unwrap();
        assert!(id.distance(&n).unwrap() < 1e-15);

        let inv_sqrt = power(&n, -0.5, 0.0).unwrap();
        let expect = Operator::diagonal(&[0.0, 1.0, 1.0 / 2f64.sqrt()]).unwrap();
        assert!(inv_sqrt.distance(&expect).unwrap() < 1e-15);

        let inv = power(&n.shift(1.0), -1.0, 0.0).unwrap();
        let expect = Operator::diagonal(&[1.0, 0.5, 1.0 / 3.0]).unwrap();
        assert!(inv.distance(&expect).unwrap() < 1e-15);

        assert!(matches!(
            spectral_function(&n, |x| 1.0 / (x - 1.0), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn trace_exp_examples() {
        let h = Operator::diagonal(&[-0.5, 0.5]).unwrap();
        assert_eq!(trace_exp(&h, 0.0).unwrap(), 2.0);
        assert!((trace_exp(&h, 1.0).unwrap() - 2.0 * 0.5f64.cosh()).abs() < 1e-14);
        assert!(trace_exp(&h, -1.0).is_err());

        // Geometric series e^{-1/2}/(1 - e^{-1}); 60 levels leave e^{-60} behind.
        let levels: Vec<f64> = (0..60).map(|n| n as f64 + 0.5).collect();
        let h = Operator::diagonal(&levels).unwrap();
        let expect = (-0.5f64).exp() / (1.0 - (-1.0f64).exp());
        assert!((trace_exp(&h, 1.0).unwrap() - expect).abs() < 1e-14);
        assert!((expect - 0.959_517_375_667_471_9).abs() < 1e-15);
    }
}
