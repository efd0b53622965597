//! Stokes-operator correlations measured directly on a [`FockState`].
//!
//! Equatorial modes are `a_phi = (e^{i phi/2} a_h + e^{-i phi/2} a_v) / sqrt 2`
//! and `a_phi_perp = a_{phi + pi}`. The simulation runs in the pair
//! `(a_phi0, a_phi0_perp)`; every Stokes operator is rewritten in that pair
//! by inverting the 2x2 mode relation, so `J_z` (built from `a_h`, `a_v`)
//! needs no special treatment. On the B side the same 2x2 matrices act on the
//! single-photon qubit.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use super::FockState;
use crate::params::WitnessReport;

type Mat2 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Which equatorial pair the simulation's `a`, `a_perp` (and `b`, `b_perp`) are.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementBasis {
    pub phi0: f64,
}

impl Default for MeasurementBasis {
    fn default() -> Self {
        Self { phi0: 0.0 }
    }
}

/// Coefficients of `a_phi` on `(a_h, a_v)`.
fn equatorial(phi: f64) -> [Complex64; 2] {
    [
        Complex64::from_polar(FRAC_1_SQRT_2, phi / 2.0),
        Complex64::from_polar(FRAC_1_SQRT_2, -phi / 2.0),
    ]
}

impl MeasurementBasis {
    pub fn new(phi0: f64) -> Self {
        Self { phi0 }
    }

    /// Rewrites a mode given on `(a_h, a_v)` in the simulation pair.
    fn to_simulation(&self, hv: [Complex64; 2]) -> [Complex64; 2] {
        let rows = [equatorial(self.phi0), equatorial(self.phi0 + PI)];
        [0, 1].map(|j| rows[j][0].conj() * hv[0] + rows[j][1].conj() * hv[1])
    }

    /// `d^dag d = sum_ij M_ij c_i^dag c_j` for the mode `d` given on `(a_h, a_v)`.
    fn number_matrix(&self, hv: [Complex64; 2]) -> Mat2 {
        let w = self.to_simulation(hv);
        [
            [w[0].conj() * w[0], w[0].conj() * w[1]],
            [w[1].conj() * w[0], w[1].conj() * w[1]],
        ]
    }

    /// Coefficient matrix of the Stokes operator along `axis`.
    pub fn stokes(&self, axis: Axis) -> Mat2 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (plus, minus) = match axis {
            Axis::X => (equatorial(0.0), equatorial(PI)),
            Axis::Y => (equatorial(PI / 2.0), equatorial(3.0 * PI / 2.0)),
            Axis::Z => ([one, zero], [zero, one]),
        };
        let p = self.number_matrix(plus);
        let m = self.number_matrix(minus);
        [
            [p[0][0] - m[0][0], p[0][1] - m[0][1]],
            [p[1][0] - m[1][0], p[1][1] - m[1][1]],
        ]
    }
}

/// `e[i][j][m][n] = tr(rho c_i^dag c_j ⊗ |m><n|_B)` with `c = (a, a_perp)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondMoments {
    e: [[[[Complex64; 2]; 2]; 2]; 2],
}

impl SecondMoments {
    pub fn of(state: &FockState) -> Self {
        let mut e = [[[[Complex64::new(0.0, 0.0); 2]; 2]; 2]; 2];
        let d = state.dim();
        let sqrt: Vec<f64> = (0..=d).map(|n| (n as f64).sqrt()).collect();
        for t in state.terms() {
            let (m, n) = (t.b_col, t.b_row);
            let stats = |x: &nalgebra::DMatrix<Complex64>| {
                let mut tr = Complex64::new(0.0, 0.0);
                let mut num = tr;
                let mut create = tr;
                let mut annihilate = tr;
                for k in 0..d {
                    tr += x[(k, k)];
                    num += x[(k, k)] * k as f64;
                    if k + 1 < d {
                        // <k| X a^dag |k> and <k+1| X a |k+1>
                        create += x[(k, k + 1)] * sqrt[k + 1];
                        annihilate += x[(k + 1, k)] * sqrt[k + 1];
                    }
                }
                (tr, num, create, annihilate)
            };
            let (tr_x, n_x, ad_x, a_x) = stats(&t.mode_a);
            let (tr_y, n_y, ad_y, a_y) = stats(&t.mode_perp);
            let c = t.coeff;
            e[0][0][m][n] += c * n_x * tr_y;
            e[1][1][m][n] += c * tr_x * n_y;
            e[0][1][m][n] += c * ad_x * a_y;
            e[1][0][m][n] += c * a_x * ad_y;
        }
        Self { e }
    }

    /// `<J ⊗ sigma>` for A-side matrix `ja` and B-side matrix `sb`.
    pub fn correlate(&self, ja: &Mat2, sb: &Mat2) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..2 {
            for j in 0..2 {
                for m in 0..2 {
                    for n in 0..2 {
                        acc += ja[i][j] * sb[m][n] * self.e[i][j][m][n];
                    }
                }
            }
        }
        acc
    }

    /// `<J>` on the A modes alone.
    pub fn expect_a(&self, ja: &Mat2) -> Complex64 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        self.correlate(ja, &[[one, zero], [zero, one]])
    }

    /// `<N^A>`.
    pub fn photon_number(&self) -> f64 {
        (0..2)
            .map(|m| (self.e[0][0][m][m] + self.e[1][1][m][m]).re)
            .sum()
    }
}

/// Measures the three Stokes correlators and `<N^A>` in the given basis.
pub fn measure_witness_in(state: &FockState, basis: MeasurementBasis) -> WitnessReport {
    let moments = SecondMoments::of(state);
    let [xx, yy, zz] = Axis::ALL.map(|axis| {
        let s = basis.stokes(axis);
        moments.correlate(&s, &s).re
    });
    WitnessReport::new(xx, yy, zz, moments.photon_number())
}

/// Measures the witness with the simulation pair taken as `phi = 0`.
pub fn measure_witness(state: &FockState) -> WitnessReport {
    measure_witness_in(state, MeasurementBasis::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{apply_loss, build_initial_state, Mode, TruncationPolicy};

    fn policy(n_max: usize) -> TruncationPolicy {
        TruncationPolicy {
            n_max,
            ..Default::default()
        }
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn stokes_matrices_at_phi_zero() {
        let b = MeasurementBasis::default();
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let x = b.stokes(Axis::X);
        let y = b.stokes(Axis::Y);
        let z = b.stokes(Axis::Z);
        let expect_x = [[one, zero], [zero, -one]];
        let expect_y = [[zero, one], [one, zero]];
        let expect_z = [[zero, -i], [i, zero]];
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(x[r][c], expect_x[r][c]));
                assert!(close(y[r][c], expect_y[r][c]));
                assert!(close(z[r][c], expect_z[r][c]));
            }
        }
    }

    #[test]
    fn singlet_witness_is_maximal() {
        let s = build_initial_state(policy(3)).unwrap();
        let r = measure_witness(&s);
        assert!((r.witness - 2.0).abs() < 1e-14);
        assert!((r.correlator_sum() + 3.0).abs() < 1e-14);
        assert!((r.n_a - 1.0).abs() < 1e-15);
    }

    #[test]
    fn singlet_local_stokes_vanish() {
        let s = build_initial_state(policy(3)).unwrap();
        let m = SecondMoments::of(&s);
        for axis in Axis::ALL {
            let j = m.expect_a(&MeasurementBasis::default().stokes(axis));
            assert!(j.norm() < 1e-15, "{axis:?}: {j}");
        }
    }

    #[test]
    fn copolarized_product_state_has_zero_witness() {
        let s = FockState::from_pure(policy(2), &[(1, 0, 0, Complex64::new(1.0, 0.0))]).unwrap();
        let r = measure_witness(&s);
        assert!(r.witness.abs() < 1e-15);
        assert!((r.corr_xx - 1.0).abs() < 1e-15);
    }

    #[test]
    fn loss_without_squeezing_scales_witness() {
        let eta = 0.63;
        let mut s = build_initial_state(policy(2)).unwrap();
        for mode in Mode::BOTH {
            s = apply_loss(eta, s, mode).unwrap();
        }
        let r = measure_witness(&s);
        assert!((r.witness - 2.0 * eta).abs() < 1e-14);
    }

    #[test]
    fn witness_invariant_under_basis_choice() {
        let s = build_initial_state(policy(2)).unwrap();
        let w0 = measure_witness_in(&s, MeasurementBasis::new(0.0)).witness;
        let w1 = measure_witness_in(&s, MeasurementBasis::new(PI / 4.0)).witness;
        assert!((w0 - w1).abs() < 1e-14);
    }
}
