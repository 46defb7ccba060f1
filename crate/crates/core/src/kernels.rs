//! Transformation-operator kernels for `C(x, lambda)` and `S(x, lambda)`.
//!
//! All integrals of `q+` go through the exact antiderivative of its
//! piecewise-linear interpolant; point values at the midpoints `(a+t)/2` and
//! `x + (a-t)/2` use linear interpolation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::PotentialPair;

type C = Complex64;

const DOMAIN_SLACK: f64 = 1e-12;

fn check_domain(x: f64, t: f64, pot: &PotentialPair) -> Result<()> {
    let a = pot.a();
    if t < a - DOMAIN_SLACK || t > x + DOMAIN_SLACK || x > std::f64::consts::PI + DOMAIN_SLACK {
        return Err(Error::KernelDomain { x, t });
    }
    Ok(())
}

/// Kernel of the sine transformation operator:
/// `P(x,t) = 1/2 int_{(a+t)/2}^{x+(a-t)/2} q+`.
pub fn kernel_p(x: f64, t: f64, pot: &PotentialPair) -> Result<C> {
    check_domain(x, t, pot)?;
    let a = pot.a();
    let lo = 0.5 * (a + t);
    let hi = x + 0.5 * (a - t);
    Ok((pot.qplus_integral(hi) - pot.qplus_integral(lo)) * 0.5)
}

/// Kernel of the cosine transformation operator:
/// `K(x,t) = 1/2 int_a^{(a+t)/2} q+ + 1/2 int_a^{x+(a-t)/2} q+`.
pub fn kernel_k(x: f64, t: f64, pot: &PotentialPair) -> Result<C> {
    check_domain(x, t, pot)?;
    let a = pot.a();
    Ok((pot.qplus_integral(0.5 * (a + t)) + pot.qplus_integral(x + 0.5 * (a - t))) * 0.5)
}

/// `K_j(x,t) = 1/4 (q+((a+t)/2) - (-1)^j q+(x + (a-t)/2))`, `j` in `{0, 1}`.
pub fn kernel_kj(j: u8, x: f64, t: f64, pot: &PotentialPair) -> Result<C> {
    check_domain(x, t, pot)?;
    let a = pot.a();
    let first = pot.qplus_at(0.5 * (a + t));
    let second = pot.qplus_at(x + 0.5 * (a - t));
    let sign = if j == 0 { -1.0 } else { 1.0 };
    Ok((first + second * sign) * 0.25)
}

/// `omega(x) = 1/2 int_a^x q+`; `omega_of_x(pi)` is the spectral constant omega.
pub fn omega_of_x(x: f64, pot: &PotentialPair) -> Result<C> {
    if x < pot.a() - DOMAIN_SLACK || x > std::f64::consts::PI + DOMAIN_SLACK {
        return Err(Error::KernelDomain { x, t: pot.a() });
    }
    Ok(pot.qplus_integral(x) * 0.5)
}

/// The constant `omega = 1/2 int_a^pi q+`.
pub fn omega(pot: &PotentialPair) -> C {
    pot.qplus_integral(std::f64::consts::PI) * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridSpec;
    use crate::potential::{Builtin, DelayParameter};
    use std::f64::consts::PI;

    fn step_qplus() -> PotentialPair {
        Builtin::StepQplus.potential(GridSpec::new(512).unwrap())
    }

    #[test]
    fn zero_potential_kernels_vanish() {
        let pot = Builtin::Zero.potential(GridSpec::new(64).unwrap());
        for &(x, t) in &[(3.0, 2.0), (PI, PI / 2.0), (2.0, 2.0)] {
            assert_eq!(kernel_p(x, t, &pot).unwrap(), C::new(0.0, 0.0));
            assert_eq!(kernel_k(x, t, &pot).unwrap(), C::new(0.0, 0.0));
            for j in 0..2 {
                assert_eq!(kernel_kj(j, x, t, &pot).unwrap(), C::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn constant_qplus_closed_forms() {
        let pot = step_qplus();
        let p = kernel_p(3.0, 2.0, &pot).unwrap();
        assert!((p.re - 0.5).abs() < 1e-13 && p.im == 0.0);
        for &t in &[1.7, 2.0, 2.5] {
            let k = kernel_k(3.0, t, &pot).unwrap();
            assert!((k.re - (3.0 - PI / 2.0) / 2.0).abs() < 1e-13);
            assert!((k.re - 0.7146).abs() < 1e-4);
        }
        assert_eq!(kernel_p(2.5, 2.5, &pot).unwrap(), C::new(0.0, 0.0));
        let k0 = kernel_kj(0, 3.0, 2.0, &pot).unwrap();
        let k1 = kernel_kj(1, 3.0, 2.0, &pot).unwrap();
        assert!(k0.norm() < 1e-15);
        assert!((k1.re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn domain_violations_are_rejected() {
        let pot = step_qplus();
        assert!(matches!(kernel_p(3.0, 1.0, &pot), Err(Error::KernelDomain { .. })));
        assert!(matches!(kernel_k(2.0, 2.5, &pot), Err(Error::KernelDomain { .. })));
        assert!(kernel_kj(0, 2.0, 2.5, &pot).is_err());
        assert!(omega_of_x(1.0, &pot).is_err());
    }

    #[test]
    fn omega_values() {
        let pot = step_qplus();
        assert_eq!(omega_of_x(PI / 2.0, &pot).unwrap(), C::new(0.0, 0.0));
        assert!((omega(&pot).re - PI / 4.0).abs() < 1e-14);
        // q+ = sin x on (pi/2, pi): exact value 1/2, trapezoid error O(h^2)
        let g = GridSpec::new(512).unwrap();
        let a = DelayParameter::new(PI / 2.0).unwrap();
        let sine = PotentialPair::from_pieces(g, a, |_| C::new(0.0, 0.0), |x| C::new(x.sin(), 0.0))
            .unwrap();
        let oracle = simpson_oracle(|x| x.sin(), PI / 2.0, PI, 2000) / 2.0;
        assert!((oracle - 0.5).abs() < 1e-12);
        assert!((omega(&sine).re - oracle).abs() < 1e-5);
    }

    fn simpson_oracle(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
        let h = (hi - lo) / n as f64;
        let mut s = f(lo) + f(hi);
        for i in 1..n {
            s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn kj_vanishes_for_symmetric_qplus_at_x_pi() {
        let g = GridSpec::new(512).unwrap();
        let a = DelayParameter::new(0.6 * PI).unwrap();
        let pot0 = PotentialPair::from_pieces(g, a, |_| C::new(0.0, 0.0), |_| C::new(0.0, 0.0))
            .unwrap();
        let centre = 0.5 * (pot0.a() + PI);
        let pot = PotentialPair::from_pieces(
            g,
            a,
            |_| C::new(0.0, 0.0),
            |x| C::new((x - centre).powi(2), 0.3 * (x - centre).powi(4)),
        )
        .unwrap();
        for i in 0..10 {
            let t = pot.a() + (PI - pot.a()) * i as f64 / 9.0;
            assert!(kernel_kj(0, PI, t, &pot).unwrap().norm() < 1e-4);
        }
    }
}
