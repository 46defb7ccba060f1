//! Eigenvalue computation by Newton iteration seeded from the asymptotics.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::charfn::{Boundary, CharFnEvaluator};
use crate::numerics::roots::{count_zeros, count_zeros_with, newton_in_disk};
use crate::potential::DelayParameter;
use crate::spectrum::{principal_sqrt, SpectralSequence, CLUSTER_TOL};
use crate::wfun::CharFnModel;

type C = Complex64;

/// Search radius in the `rho` plane for `n >= 1`.
const RHO_RADIUS: f64 = 0.5;
/// Search radius in the `lambda` plane for the lowest eigenvalue.
const LAMBDA_RADIUS: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Relative residual target; the absolute target is `tol_root * max(1, |seed|^2)`.
    pub tol_root: f64,
    pub max_iter: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            tol_root: 1e-10,
            max_iter: 60,
        }
    }
}

/// Asymptotic seed for `rho_{n,j}`.
pub fn seed_rho(j: Boundary, n: usize, omega: C, a: f64) -> C {
    let nu = j.base_root(n);
    if n == 0 {
        return C::new(
            match j {
                Boundary::Dirichlet => 0.5,
                Boundary::Neumann => 0.25,
            },
            0.0,
        );
    }
    C::new(nu, 0.0) + omega * ((nu * a).cos() / (PI * n as f64))
}

/// `lambda_{n,j}` for `n = 0..n_max` with default options.
pub fn compute_spectrum(j: Boundary, model: &CharFnModel, n_max: usize) -> Result<SpectralSequence> {
    let ev = CharFnEvaluator::new(model.clone());
    compute_spectrum_with(&ev, j, n_max, &SpectrumOptions::default())
}

pub fn compute_spectrum_with(
    ev: &CharFnEvaluator,
    j: Boundary,
    n_max: usize,
    opts: &SpectrumOptions,
) -> Result<SpectralSequence> {
    if n_max < 8 {
        return Err(Error::Config(format!("n_max must be at least 8, got {n_max}")));
    }
    let a = ev.model().a;
    let omega = ev.omega();
    let seeds: Vec<C> = (0..n_max).map(|n| seed_rho(j, n, omega, a.value())).collect();

    let first: Vec<Option<C>> = (0..n_max)
        .into_par_iter()
        .map(|n| solve_one(ev, j, n, seeds[n], &[], opts))
        .collect();

    let mut last_failure = 0;
    for n_low in 1..=LOW_LIMIT.min(n_max / 2) {
        match split_at(ev, j, &seeds, &first, n_low, opts) {
            Ok(rhos) => return finish(ev, j, a, rhos),
            Err(n) => last_failure = n,
        }
    }
    Err(Error::NonConvergence(last_failure))
}

/// Largest number of eigenvalues located by contour counting instead of
/// their individual seeds.
const LOW_LIMIT: usize = 24;

/// Treats indices `n >= n_low` by their seeds and the first `n_low` roots as
/// the zeros inside `|rho| < R` with `R` halfway between the seeds `n_low - 1`
/// and `n_low`. Fails with the offending index when the counts disagree.
fn split_at(
    ev: &CharFnEvaluator,
    j: Boundary,
    seeds: &[C],
    first: &[Option<C>],
    n_low: usize,
    opts: &SpectrumOptions,
) -> std::result::Result<Vec<C>, usize> {
    let mut rhos = first.to_vec();
    repair(ev, j, seeds, &mut rhos, n_low, opts)?;
    let radius = j.base_root(n_low) - 0.5;
    let high: Vec<C> = rhos[n_low..].iter().map(|r| r.expect("repaired")).collect();
    if high.iter().any(|r| r.norm() < radius + 1e-3) {
        return Err(n_low);
    }
    let r2 = radius * radius;
    let mut f = |lam: C| ev.eval_with_derivative(j, principal_sqrt(lam));
    let points = 256.max(64 * n_low);
    let count = count_zeros_with(&mut f, C::new(0.0, 0.0), r2, points);
    if (count - count.round()).abs() > 0.05 || count.round() as usize != n_low {
        return Err(n_low - 1);
    }

    // candidate seeds: first-pass results inside the disk, the asymptotic
    // seeds, then a polar grid
    let mut starts: Vec<C> = first[..n_low]
        .iter()
        .flatten()
        .filter(|r| r.norm() < radius)
        .map(|r| r * r)
        .collect();
    starts.extend(seeds[..n_low].iter().map(|r| r * r));
    for frac in [0.25, 0.6, 0.9] {
        for k in 0..12 {
            starts.push(C::from_polar(frac * r2, 2.0 * PI * k as f64 / 12.0));
        }
    }
    let mut low: Vec<C> = Vec::with_capacity(n_low);
    for start in starts {
        if low.len() == n_low {
            break;
        }
        let tol = opts.tol_root * start.norm().max(1.0);
        if let Ok(lam) = newton_in_disk(&mut f, start, 2.0 * r2 + 1.0, &low, tol, opts.max_iter) {
            let repeat = low
                .iter()
                .any(|l| (principal_sqrt(*l) - principal_sqrt(lam)).norm() < CLUSTER_TOL);
            if lam.norm() < r2 && certified(ev, j, lam) && (!repeat || is_multiple(ev, j, principal_sqrt(lam))) {
                low.push(lam);
            }
        }
    }
    if low.len() < n_low {
        return Err(low.len());
    }
    let mut out: Vec<C> = low.into_iter().map(principal_sqrt).collect();
    out.extend(high);
    Ok(out)
}

fn certified(ev: &CharFnEvaluator, j: Boundary, lam: C) -> bool {
    ev.eval(j, lam).norm() <= 1e-9 * lam.norm().max(1.0)
}

fn finish(ev: &CharFnEvaluator, j: Boundary, a: DelayParameter, mut rhos: Vec<C>) -> Result<SpectralSequence> {
    rhos.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    let lambdas: Vec<C> = rhos.iter().map(|r| r * r).collect();
    for (n, &l) in lambdas.iter().enumerate() {
        if !certified(ev, j, l) {
            return Err(Error::NonConvergence(n));
        }
    }
    SpectralSequence::new(j, a, lambdas)
}

/// Root near the seed, returned as a principal square root. `excluded` holds
/// roots (in the same principal form) to deflate.
fn solve_one(
    ev: &CharFnEvaluator,
    j: Boundary,
    n: usize,
    seed: C,
    excluded: &[C],
    opts: &SpectrumOptions,
) -> Option<C> {
    let tol = opts.tol_root * seed.norm_sqr().max(1.0);
    if n == 0 {
        let mut f = |lam: C| ev.eval_with_derivative(j, principal_sqrt(lam));
        let ex: Vec<C> = excluded.iter().map(|r| r * r).collect();
        newton_in_disk(&mut f, seed * seed, LAMBDA_RADIUS, &ex, tol, opts.max_iter)
            .ok()
            .map(principal_sqrt)
    } else {
        let mut f = |rho: C| {
            let (v, d) = ev.eval_with_derivative(j, rho);
            (v, d * (2.0 * rho))
        };
        let ex: Vec<C> = excluded.iter().flat_map(|&r| [r, -r]).collect();
        newton_in_disk(&mut f, seed, RHO_RADIUS, &ex, tol, opts.max_iter)
            .ok()
            .map(|r| if r.re < 0.0 { -r } else { r })
    }
}

/// Re-solves failed indices `n >= from` and those that landed on a root
/// already claimed by a lower index, deflating every other root found so
/// far. A coincidence confirmed as a multiple zero is kept. Fails with the
/// first index that cannot be resolved.
fn repair(
    ev: &CharFnEvaluator,
    j: Boundary,
    seeds: &[C],
    rhos: &mut [Option<C>],
    from: usize,
    opts: &SpectrumOptions,
) -> std::result::Result<(), usize> {
    for n in from..rhos.len() {
        let duplicate = match rhos[n] {
            None => true,
            Some(r) => rhos[from..n]
                .iter()
                .flatten()
                .any(|p| (p - r).norm() < CLUSTER_TOL)
                && !is_multiple(ev, j, r),
        };
        if !duplicate {
            continue;
        }
        let others: Vec<C> = (from..rhos.len())
            .filter(|&i| i != n)
            .filter_map(|i| rhos[i])
            .collect();
        match solve_one(ev, j, n, seeds[n], &others, opts) {
            Some(r) if !others.iter().any(|p| (p - r).norm() < CLUSTER_TOL) || is_multiple(ev, j, r) => {
                rhos[n] = Some(r)
            }
            _ => return Err(n),
        }
    }
    Ok(())
}

fn is_multiple(ev: &CharFnEvaluator, j: Boundary, rho: C) -> bool {
    let mut f = |lam: C| ev.eval_with_derivative(j, principal_sqrt(lam));
    let lam = rho * rho;
    let radius = 1e-4 * lam.norm().max(1.0);
    count_zeros(&mut f, lam, radius).round() >= 2.0
}
