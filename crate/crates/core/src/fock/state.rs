use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{Mode, TruncationPolicy};
use crate::error::FockError;
use crate::table::{SweepTable, TableMetadata};

/// Largest Hilbert-space dimension [`FockState::to_dense`] will build.
pub const DENSE_LIMIT: usize = 4096;

/// `coeff * X ⊗ Y ⊗ |b_row><b_col|` with `X` on mode `a`, `Y` on `a_perp`.
///
/// B index 0 is a photon in `b`, index 1 a photon in `b_perp`.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub mode_a: DMatrix<Complex64>,
    pub mode_perp: DMatrix<Complex64>,
    pub b_row: usize,
    pub b_col: usize,
}

impl Term {
    pub fn factor(&self, mode: Mode) -> &DMatrix<Complex64> {
        match mode {
            Mode::A => &self.mode_a,
            Mode::APerp => &self.mode_perp,
        }
    }

    pub fn factor_mut(&mut self, mode: Mode) -> &mut DMatrix<Complex64> {
        match mode {
            Mode::A => &mut self.mode_a,
            Mode::APerp => &mut self.mode_perp,
        }
    }

    fn other(&self, mode: Mode) -> &DMatrix<Complex64> {
        match mode {
            Mode::A => &self.mode_perp,
            Mode::APerp => &self.mode_a,
        }
    }
}

/// Density operator on `(a, dim n_max+1) ⊗ (a_perp, dim n_max+1) ⊗ (B, dim 2)`.
///
/// Stored as a sum of product [`Term`]s. Every channel in this crate acts on
/// one A mode at a time and maps a product term to a product term, so the
/// number of terms is fixed by the initial state (four for the singlet).
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    dim: usize,
    terms: Vec<Term>,
    pub(crate) policy: TruncationPolicy,
    /// Sum of the trace lost to cropping after each squeezer.
    pub(crate) trace_drift: f64,
    /// Largest top-two-level population seen after any squeezer.
    pub(crate) max_tail: f64,
}

fn ket_projector(dim: usize, n: usize, m: usize) -> DMatrix<Complex64> {
    let mut x = DMatrix::zeros(dim, dim);
    x[(n, m)] = Complex64::new(1.0, 0.0);
    x
}

/// The equatorial singlet `(a^dag b_perp^dag - a_perp^dag b^dag) / sqrt 2 |vac>`.
pub fn build_initial_state(policy: TruncationPolicy) -> Result<FockState, FockError> {
    FockState::from_pure(
        policy,
        &[
            (1, 0, 1, Complex64::new(FRAC_1_SQRT_2, 0.0)),
            (0, 1, 0, Complex64::new(-FRAC_1_SQRT_2, 0.0)),
        ],
    )
}

impl FockState {
    /// `|psi><psi|` for `|psi> = sum amp |n_a, n_perp>|b>` given as
    /// `(n_a, n_perp, b, amp)` components.
    pub fn from_pure(
        policy: TruncationPolicy,
        components: &[(usize, usize, usize, Complex64)],
    ) -> Result<Self, FockError> {
        policy.validate()?;
        let dim = policy.dim();
        for &(na, np, b, _) in components {
            if na >= dim || np >= dim || b > 1 {
                return Err(FockError::InvalidPolicy(format!(
                    "component |{na},{np}>|{b}> does not fit cutoff n_max = {}",
                    policy.n_max
                )));
            }
        }
        let mut terms = Vec::with_capacity(components.len() * components.len());
        for &(na, np, b, amp) in components {
            for &(na2, np2, b2, amp2) in components {
                terms.push(Term {
                    coeff: amp * amp2.conj(),
                    mode_a: ket_projector(dim, na, na2),
                    mode_perp: ket_projector(dim, np, np2),
                    b_row: b,
                    b_col: b2,
                });
            }
        }
        Ok(Self {
            dim,
            terms,
            policy,
            trace_drift: 0.0,
            max_tail: 0.0,
        })
    }

    /// Per-mode Hilbert-space dimension, `n_max + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_max(&self) -> usize {
        self.dim - 1
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub(crate) fn terms_mut(&mut self) -> &mut [Term] {
        &mut self.terms
    }

    pub fn policy(&self) -> &TruncationPolicy {
        &self.policy
    }

    pub fn trace_drift(&self) -> f64 {
        self.trace_drift
    }

    pub fn max_tail_population(&self) -> f64 {
        self.max_tail
    }

    pub fn trace(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.b_row == t.b_col)
            .map(|t| t.coeff * t.mode_a.trace() * t.mode_perp.trace())
            .sum()
    }

    /// Photon-number distribution of one A mode.
    pub fn marginal(&self, mode: Mode) -> Vec<f64> {
        let mut p = vec![0.0; self.dim];
        for t in self.terms.iter().filter(|t| t.b_row == t.b_col) {
            let w = t.coeff * t.other(mode).trace();
            let x = t.factor(mode);
            for (n, pn) in p.iter_mut().enumerate() {
                *pn += (w * x[(n, n)]).re;
            }
        }
        p
    }

    /// Population of the two highest retained levels of `mode`.
    pub fn tail_population(&self, mode: Mode) -> f64 {
        let p = self.marginal(mode);
        p.iter().rev().take(2).sum()
    }

    /// Zero-pads both A modes to cutoff `n_max`. Exact: the padded levels
    /// carry no population.
    pub fn grow(&mut self, n_max: usize) {
        let dim = n_max + 1;
        if dim <= self.dim {
            return;
        }
        let old = self.dim;
        for t in &mut self.terms {
            for mode in Mode::BOTH {
                let x = t.factor_mut(mode);
                let mut padded = DMatrix::zeros(dim, dim);
                padded.view_mut((0, 0), (old, old)).copy_from(x);
                *x = padded;
            }
        }
        self.dim = dim;
        self.policy.n_max = n_max;
    }

    /// Dense matrix, indexed by `(n_a * dim + n_perp) * 2 + b`.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>, FockError> {
        let d = self.dim;
        let total = 2 * d * d;
        if total > DENSE_LIMIT {
            return Err(FockError::TooLarge(total));
        }
        let idx = |na: usize, np: usize, b: usize| (na * d + np) * 2 + b;
        let mut rho = DMatrix::zeros(total, total);
        for t in &self.terms {
            for na in 0..d {
                for na2 in 0..d {
                    let xa = t.mode_a[(na, na2)];
                    if xa == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for np in 0..d {
                        for np2 in 0..d {
                            rho[(idx(na, np, t.b_row), idx(na2, np2, t.b_col))] +=
                                t.coeff * xa * t.mode_perp[(np, np2)];
                        }
                    }
                }
            }
        }
        Ok(rho)
    }

    /// Largest `|rho - rho^dag|` entry.
    pub fn hermiticity_error(&self) -> Result<f64, FockError> {
        let rho = self.to_dense()?;
        let diff = &rho - rho.adjoint();
        Ok(diff.iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// Smallest eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> Result<f64, FockError> {
        let rho = self.to_dense()?;
        let herm = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        Ok(eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min))
    }

    /// Photon-number marginals of both A modes as a table.
    pub fn marginals_table(&self) -> SweepTable {
        let mut meta = TableMetadata::new("fock-marginals");
        meta.fixed.insert("n_max".into(), self.n_max() as f64);
        meta.summary.insert("trace".into(), self.trace().re);
        meta.summary.insert("trace_drift".into(), self.trace_drift);
        let mut table = SweepTable::new(["n", "p_a", "p_a_perp"], meta);
        let pa = self.marginal(Mode::A);
        let pp = self.marginal(Mode::APerp);
        for n in 0..self.dim {
            table
                .push_row(vec![Some(n as f64), Some(pa[n]), Some(pp[n])])
                .expect("three columns");
        }
        table
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy(n_max: usize) -> TruncationPolicy {
        TruncationPolicy {
            n_max,
            ..Default::default()
        }
    }

    #[test]
    fn singlet_is_normalized_and_pure() {
        let s = build_initial_state(policy(3)).unwrap();
        assert_eq!(s.terms().len(), 4);
        assert!((s.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let rho = s.to_dense().unwrap();
        let purity = (&rho * &rho).trace();
        assert!((purity.re - 1.0).abs() < 1e-15);
        assert!(s.hermiticity_error().unwrap() < 1e-15);
        assert!(s.min_eigenvalue().unwrap() > -1e-12);
    }

    #[test]
    fn singlet_marginals() {
        let s = build_initial_state(policy(2)).unwrap();
        for mode in Mode::BOTH {
            let p = s.marginal(mode);
            assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
            assert_eq!(p[2], 0.0);
        }
    }

    #[test]
    fn grow_preserves_state() {
        let mut s = build_initial_state(policy(2)).unwrap();
        let before = s.marginal(Mode::A);
        s.grow(5);
        assert_eq!(s.dim(), 6);
        assert_eq!(s.policy().n_max, 5);
        assert_eq!(&s.marginal(Mode::A)[..3], &before[..]);
        assert!((s.trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn component_outside_cutoff_is_rejected() {
        let err = FockState::from_pure(policy(1), &[(2, 0, 0, Complex64::new(1.0, 0.0))]);
        assert!(err.is_err());
    }

    #[test]
    fn dense_limit() {
        let s = build_initial_state(policy(60)).unwrap();
        assert!(matches!(s.to_dense(), Err(FockError::TooLarge(_))));
    }

    #[test]
    fn marginals_table_shape() {
        let t = build_initial_state(policy(4)).unwrap().marginals_table();
        assert_eq!(t.len(), 5);
        assert_eq!(t.columns(), ["n", "p_a", "p_a_perp"]);
    }
}
