//! Single-mode squeezing and pure-loss channels on a [`FockState`].

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{FockState, Mode};
use crate::error::FockError;

/// `exp[(r/2)(a^dag^2 - a^2)]` restricted to the retained levels.
///
/// The generator is exponentiated on `dim + margin` levels and the leading
/// `dim x dim` block is kept, which pushes the reflection from the hard
/// cutoff out of the retained space. The generator is real, so the block is
/// a real matrix.
#[derive(Debug, Clone)]
pub struct Squeezer {
    r: f64,
    block: DMatrix<Complex64>,
}

/// `(a^dag^2 - a^2) / 2` on `dim` levels.
pub(crate) fn squeeze_generator(dim: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(2) {
        let amp = 0.5 * (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = amp;
        g[(n, n + 2)] = -amp;
    }
    g
}

impl Squeezer {
    pub fn new(r: f64, dim: usize, margin: usize) -> Self {
        let full = (squeeze_generator(dim + margin) * r).exp();
        let block = full
            .view((0, 0), (dim, dim))
            .map(|x| Complex64::new(x, 0.0));
        Self { r, block }
    }

    pub fn strength(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.block.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.block
    }

    /// Conjugates every term's factor on `mode`, without tail checks.
    pub fn apply_unchecked(&self, state: &mut FockState, mode: Mode) {
        assert_eq!(state.dim(), self.dim(), "squeezer built for another cutoff");
        let u_t = self.block.transpose();
        for term in state.terms_mut() {
            let x = term.factor_mut(mode);
            *x = &self.block * &*x * &u_t;
        }
    }
}

/// Squeezes each of `modes` by `r`, enforcing the truncation policy.
///
/// When the top-two-level population exceeds the tolerance and the policy
/// allows growth, the pre-squeeze state is padded to twice the cutoff (up to
/// the ceiling) and the squeeze is redone.
pub(crate) fn squeeze_modes(
    r: f64,
    mut state: FockState,
    modes: &[Mode],
) -> Result<FockState, FockError> {
    if r == 0.0 {
        return Ok(state);
    }
    loop {
        let policy = *state.policy();
        let squeezer = Squeezer::new(r, state.dim(), policy.squeeze_margin);
        let mut next = state.clone();
        let trace_before = next.trace().re;
        let mut worst = 0.0f64;
        for &mode in modes {
            squeezer.apply_unchecked(&mut next, mode);
            worst = worst.max(next.tail_population(mode));
        }
        if worst <= policy.tail_tol {
            next.trace_drift += (trace_before - next.trace().re).abs();
            next.max_tail = next.max_tail.max(worst);
            return Ok(next);
        }
        if policy.auto_grow && policy.n_max < policy.n_max_ceiling {
            state.grow((2 * policy.n_max).min(policy.n_max_ceiling));
            continue;
        }
        let stage = modes
            .iter()
            .map(|m| format!("squeeze({r}) on {}", m.label()))
            .collect::<Vec<_>>()
            .join(", ");
        return Err(FockError::TruncationExceeded {
            stage,
            population: worst,
            tail_tol: policy.tail_tol,
            n_max: policy.n_max,
            ceiling: policy.n_max_ceiling,
        });
    }
}

/// Applies a squeezer of strength `r` to one A mode.
///
/// A cloner of gain `g` is `r = g` on both modes; its inverse is `r = -g`.
pub fn apply_squeezer(r: f64, state: FockState, mode: Mode) -> Result<FockState, FockError> {
    squeeze_modes(r, state, &[mode])
}

/// Pure-loss channel of transmission `eta`: a beam splitter mixing in a
/// vacuum ancilla that is then traced out.
///
/// Kraus operators `K_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|`
/// for `k = 0..=n_max`. Each column of amplitudes is renormalized so that
/// `sum_k K_k^dag K_k = 1` holds on the truncated space to rounding.
#[derive(Debug, Clone)]
pub struct LossChannel {
    eta: f64,
    /// `amps[n][k]` is the amplitude for losing `k` of `n` photons.
    amps: Vec<Vec<f64>>,
}

impl LossChannel {
    pub fn new(eta: f64, dim: usize) -> Self {
        let mut binom: Vec<Vec<f64>> = Vec::with_capacity(dim);
        for n in 0..dim {
            let mut row = vec![1.0; n + 1];
            for k in 1..n {
                row[k] = binom[n - 1][k - 1] + binom[n - 1][k];
            }
            binom.push(row);
        }
        let loss = 1.0 - eta;
        let amps = binom
            .iter()
            .enumerate()
            .map(|(n, row)| {
                let probs: Vec<f64> = row
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * eta.powi((n - k) as i32) * loss.powi(k as i32))
                    .collect();
                let total: f64 = probs.iter().sum();
                probs.iter().map(|p| (p / total).sqrt()).collect()
            })
            .collect();
        Self { eta, amps }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    /// The Kraus operators as explicit matrices.
    pub fn kraus_operators(&self) -> Vec<DMatrix<f64>> {
        let d = self.dim();
        (0..d)
            .map(|k| {
                let mut m = DMatrix::zeros(d, d);
                for n in k..d {
                    m[(n - k, n)] = self.amps[n][k];
                }
                m
            })
            .collect()
    }

    /// `sum_k K_k X K_k^dag` for one mode factor.
    pub fn apply_matrix(&self, x: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |m, mp| {
            let top = m.max(mp);
            (0..d - top)
                .map(|k| x[(m + k, mp + k)] * (self.amps[m + k][k] * self.amps[mp + k][k]))
                .sum()
        })
    }

    pub fn apply(&self, state: &mut FockState, mode: Mode) {
        assert_eq!(
            state.dim(),
            self.dim(),
            "loss channel built for another cutoff"
        );
        if self.eta == 1.0 {
            return;
        }
        for term in state.terms_mut() {
            let x = term.factor_mut(mode);
            *x = self.apply_matrix(x);
        }
    }
}

/// Applies pure loss of transmission `eta` to one A mode.
pub fn apply_loss(eta: f64, mut state: FockState, mode: Mode) -> Result<FockState, FockError> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(crate::error::ParamError::OutOfRange {
            name: "eta".into(),
            value: eta,
            allowed: "[0, 1]",
        }
        .into());
    }
    LossChannel::new(eta, state.dim()).apply(&mut state, mode);
    Ok(state)
}
