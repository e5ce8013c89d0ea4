//! Parameter sweeps. Points run on a rayon pool; rows come back in
//! row-major order of the declared grid.

use quadstab_core::optomech2::{classify_two_mode, steady_states, CaseLabel, PumpParams, TwoModeParams};
use quadstab_core::optomech3::{sweep_point, StabilityGrid};
use quadstab_core::spectral::max_real_part;
use quadstab_core::{Complex64, Result as CoreResult};
use rayon::prelude::*;

use crate::error::CliError;

/// Map `f` over `items` on `jobs` threads (0 = rayon default), keeping order.
pub fn par_map<T, R, F>(items: &[T], jobs: usize, f: F) -> Result<Vec<R>, CliError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> CoreResult<R> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Numeric(format!("thread pool: {e}")))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect::<CoreResult<Vec<R>>>())?)
}

fn product(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoModeRow {
    pub delta: f64,
    pub kappa_abs: f64,
    pub label: CaseLabel,
    pub stable: bool,
    pub lambda_re_max: f64,
}

/// Two-mode case map; `delta` is the outer index.
pub fn two_mode_sweep(deltas: &[f64], kappas: &[f64], omega: f64, phase: f64, jobs: usize) -> Result<Vec<TwoModeRow>, CliError> {
    par_map(&product(deltas, kappas), jobs, |&(delta, k)| two_mode_row(delta, k, omega, phase))
}

pub fn two_mode_row(delta: f64, kappa_abs: f64, omega: f64, phase: f64) -> CoreResult<TwoModeRow> {
    let p = TwoModeParams::new(delta, omega, Complex64::from_polar(kappa_abs, phase))?;
    let case = classify_two_mode(&p)?;
    let a = quadstab_core::optomech2::build_two_mode(&p)?.eom()?;
    Ok(TwoModeRow { delta, kappa_abs, label: case.label, stable: case.stable, lambda_re_max: max_real_part(a.a())? })
}

/// Three-mode stability over `(|κ₁|, |κ₂|)`; `k1` is the outer index.
pub fn three_mode_sweep(delta1: f64, delta2: f64, omega: f64, k1: &[f64], k2: &[f64], jobs: usize) -> Result<StabilityGrid, CliError> {
    if k1.len() < 2 || k2.len() < 2 {
        return Err(CliError::Input("sweep grid must be at least 2x2".into()));
    }
    let points = par_map(&product(k1, k2), jobs, |&(a, b)| sweep_point(delta1, delta2, omega, a, b))?;
    Ok(StabilityGrid { k1: k1.to_vec(), k2: k2.to_vec(), points })
}

/// Steady-state branch summary at one pump setting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyRow {
    pub delta_prime: f64,
    /// `|κ₀ κ_in| / Ω²`.
    pub coupling: f64,
    pub branches: usize,
    pub stable_branches: usize,
    /// Some stable branch is red-detuned (Δ > 0).
    pub stable_red: bool,
    /// Some stable branch is blue-detuned (Δ < 0).
    pub stable_blue: bool,
}

/// Multistability map with `κ_in = 1` and `κ₀ = coupling·Ω²`; `delta_prime`
/// is the outer index.
pub fn steady_sweep(delta_primes: &[f64], couplings: &[f64], omega: f64, jobs: usize) -> Result<Vec<SteadyRow>, CliError> {
    par_map(&product(delta_primes, couplings), jobs, |&(dp, g)| {
        let pump = PumpParams { delta_prime: dp, omega, kappa0: g * omega * omega, kappa_in: Complex64::new(1.0, 0.0) };
        let s = steady_states(&pump)?;
        let stable = |red: bool| s.branches.iter().any(|b| b.verdict.stable && (b.delta > 0.0) == red);
        Ok(SteadyRow {
            delta_prime: dp,
            coupling: g,
            branches: s.branches.len(),
            stable_branches: s.stable_count(),
            stable_red: stable(true),
            stable_blue: stable(false),
        })
    })
}
