//! Complex Newton iteration with an argument-principle fallback.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

type C = Complex64;

/// Radius of the search disk around the seed used by the fallback.
pub const FALLBACK_RADIUS: f64 = 0.5;
const CONTOUR_POINTS: usize = 256;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RootError {
    #[error("no root found in the disk of radius {radius} around {center}")]
    NonConvergence { center: C, radius: f64 },
}

/// Newton iteration on an analytic `f` (returning value and derivative).
///
/// Iterates leaving the disk of radius [`FALLBACK_RADIUS`] around the seed,
/// or exhausting `max_iter`, trigger the contour fallback of [`roots_in_disk`].
pub fn newton_root<F>(mut f: F, seed: C, tol: f64, max_iter: usize) -> Result<C, RootError>
where
    F: FnMut(C) -> (C, C),
{
    newton_deflated(&mut f, seed, &[], tol, max_iter)
}

/// Newton iteration on `f(z) / prod (z - r)` for the excluded roots `r`.
///
/// Acceptance is always judged on the undeflated `|f| <= tol`.
pub fn newton_deflated<F>(
    f: &mut F,
    seed: C,
    excluded: &[C],
    tol: f64,
    max_iter: usize,
) -> Result<C, RootError>
where
    F: FnMut(C) -> (C, C),
{
    newton_in_disk(f, seed, FALLBACK_RADIUS, excluded, tol, max_iter)
}

/// [`newton_deflated`] with an explicit search radius.
pub fn newton_in_disk<F>(
    f: &mut F,
    seed: C,
    radius: f64,
    excluded: &[C],
    tol: f64,
    max_iter: usize,
) -> Result<C, RootError>
where
    F: FnMut(C) -> (C, C),
{
    if let Some(z) = plain_newton(f, seed, radius, excluded, tol, max_iter) {
        return Ok(z);
    }
    let mut ordered = roots_in_disk(f, seed, radius)?;
    // each excluded root cancels one matching candidate
    for &e in excluded {
        if let Some(pos) = ordered.iter().position(|z| (z - e).norm() < 1e-6) {
            ordered.remove(pos);
        }
    }
    ordered.sort_by(|a, b| (a - seed).norm().total_cmp(&(b - seed).norm()));
    for z0 in ordered {
        let mut z = z0;
        for _ in 0..8 {
            let (v, d) = f(z);
            if v.norm() <= tol {
                return Ok(z);
            }
            if d.norm() == 0.0 {
                break;
            }
            let step = v / d;
            if step.norm() > 0.1 {
                break;
            }
            z -= step;
        }
        if f(z).0.norm() <= tol {
            return Ok(z);
        }
    }
    Err(RootError::NonConvergence {
        center: seed,
        radius,
    })
}

fn plain_newton<F>(
    f: &mut F,
    seed: C,
    radius: f64,
    excluded: &[C],
    tol: f64,
    max_iter: usize,
) -> Option<C>
where
    F: FnMut(C) -> (C, C),
{
    let mut z = seed;
    for _ in 0..max_iter {
        let (v, d) = f(z);
        if v.norm() <= tol {
            // one polishing step, kept only if it does not hurt
            if d.norm() > 0.0 {
                let z1 = z - v / d;
                if f(z1).0.norm() <= v.norm() {
                    return Some(z1);
                }
            }
            return Some(z);
        }
        let mut log_deriv = d / v;
        for &r in excluded {
            let diff = z - r;
            if diff.norm() == 0.0 {
                return None;
            }
            log_deriv -= diff.inv();
        }
        if log_deriv.norm() == 0.0 || !log_deriv.re.is_finite() || !log_deriv.im.is_finite() {
            return None;
        }
        z -= log_deriv.inv();
        if (z - seed).norm() > radius {
            return None;
        }
    }
    None
}

/// Zeros of `f` inside the disk `|z - center| < radius`, located from the
/// contour moments `(1/2 pi i) oint z^p f'/f dz`, `p = 0, 1, 2`.
///
/// At most two zeros are resolved (a quadratic in the power sums); the
/// radius is shrunk slightly when a zero sits too close to the contour.
pub fn roots_in_disk<F>(f: &mut F, center: C, radius: f64) -> Result<Vec<C>, RootError>
where
    F: FnMut(C) -> (C, C),
{
    let fail = RootError::NonConvergence { center, radius };
    let mut r = radius;
    for _ in 0..6 {
        let mut s = [C::new(0.0, 0.0); 3];
        let mut ok = true;
        for k in 0..CONTOUR_POINTS {
            let theta = 2.0 * PI * (k as f64 + 0.5) / CONTOUR_POINTS as f64;
            let dz = C::from_polar(r, theta);
            let z = center + dz;
            let (v, d) = f(z);
            if v.norm() == 0.0 {
                ok = false;
                break;
            }
            let g = d / v * dz / CONTOUR_POINTS as f64;
            // moments about the center for conditioning
            s[0] += g;
            s[1] += g * dz;
            s[2] += g * dz * dz;
        }
        if ok {
            let count = s[0].re.round();
            let clean = (s[0].re - count).abs() < 0.05 && s[0].im.abs() < 0.05;
            if clean {
                return match count as i64 {
                    0 => Err(fail),
                    1 => Ok(vec![center + s[1]]),
                    2 => {
                        // e1 = s1, e2 = (s1^2 - s2)/2; z^2 - e1 z + e2 = 0
                        let e1 = s[1];
                        let e2 = (s[1] * s[1] - s[2]) * 0.5;
                        let disc = (e1 * e1 - e2 * 4.0).sqrt();
                        Ok(vec![center + (e1 + disc) * 0.5, center + (e1 - disc) * 0.5])
                    }
                    _ => Err(fail),
                };
            }
        }
        r *= 0.93;
    }
    Err(fail)
}

/// Number of zeros of `f` inside `|z - center| < radius` by the argument principle.
pub fn count_zeros<F>(f: &mut F, center: C, radius: f64) -> f64
where
    F: FnMut(C) -> (C, C),
{
    count_zeros_with(f, center, radius, CONTOUR_POINTS)
}

/// [`count_zeros`] with an explicit number of contour nodes, for contours
/// along which `f` oscillates.
pub fn count_zeros_with<F>(f: &mut F, center: C, radius: f64, points: usize) -> f64
where
    F: FnMut(C) -> (C, C),
{
    let mut s = C::new(0.0, 0.0);
    for k in 0..points {
        let theta = 2.0 * PI * (k as f64 + 0.5) / points as f64;
        let dz = C::from_polar(radius, theta);
        let (v, d) = f(center + dz);
        s += d / v * dz / points as f64;
    }
    s.re
}
