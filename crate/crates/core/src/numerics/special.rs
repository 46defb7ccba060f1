//! Entire functions that appear when `sin(rho x)/rho` and its relatives are
//! written so that only even powers of `rho` survive.

use num_complex::Complex64;

type C = Complex64;

const SINC_SERIES_BELOW: f64 = 1e-4;
const SERIES_BELOW: f64 = 0.5;

/// `sin z / z`, with a 4-term Taylor series near the origin.
pub fn sinc(z: C) -> C {
    if z.norm() < SINC_SERIES_BELOW {
        let z2 = z * z;
        C::new(1.0, 0.0) - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0
    } else {
        z.sin() / z
    }
}

/// `(sin z - z cos z) / z^3`, equal to `-sinc'(z) / z`.
pub fn sinc_slope(z: C) -> C {
    if z.norm() < SERIES_BELOW {
        // sum_{n>=1} (-1)^{n+1} 2n z^{2n-2} / (2n+1)!
        let z2 = z * z;
        let mut term_pow = C::new(1.0, 0.0);
        let mut fact = 6.0; // (2n+1)! for n = 1
        let mut acc = C::new(0.0, 0.0);
        for n in 1..=10 {
            let nf = n as f64;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            acc += term_pow * (sign * 2.0 * nf / fact);
            term_pow *= z2;
            fact *= (2.0 * nf + 2.0) * (2.0 * nf + 3.0);
        }
        acc
    } else {
        (z.sin() - z * z.cos()) / (z * z * z)
    }
}

/// `-h'(z) / z` where `h` is [`sinc_slope`].
pub fn sinc_curvature(z: C) -> C {
    if z.norm() < SERIES_BELOW {
        // sum_{n>=2} (-1)^n 2n(2n-2) z^{2n-4} / (2n+1)!
        let z2 = z * z;
        let mut term_pow = C::new(1.0, 0.0);
        let mut fact = 120.0; // 5!
        let mut acc = C::new(0.0, 0.0);
        for n in 2..=11 {
            let nf = n as f64;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            acc += term_pow * (sign * 2.0 * nf * (2.0 * nf - 2.0) / fact);
            term_pow *= z2;
            fact *= (2.0 * nf + 2.0) * (2.0 * nf + 3.0);
        }
        acc
    } else {
        let z2 = z * z;
        (z.sin() * 3.0 - z * z.cos() * 3.0 - z2 * z.sin()) / (z2 * z2 * z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C, b: C, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn sinc_matches_direct_formula_across_threshold() {
        for &r in &[1e-6, 5e-5, 2e-4, 0.3, 2.0] {
            let z = C::new(r, 0.7 * r);
            let direct = z.sin() / z;
            assert!(close(sinc(z), direct, 1e-12), "{z}");
        }
        assert_eq!(sinc(C::new(0.0, 0.0)), C::new(1.0, 0.0));
    }

    #[test]
    fn slope_and_curvature_series_agree_with_closed_forms() {
        for &r in &[0.45, 0.499] {
            for &phase in &[0.0, 0.8, 1.9] {
                let z = C::from_polar(r, phase);
                let h_direct = (z.sin() - z * z.cos()) / (z * z * z);
                assert!(close(sinc_slope(z), h_direct, 1e-10));
                let z2 = z * z;
                let k_direct =
                    (z.sin() * 3.0 - z * z.cos() * 3.0 - z2 * z.sin()) / (z2 * z2 * z);
                assert!(close(sinc_curvature(z), k_direct, 1e-8));
            }
        }
        assert!(close(sinc_slope(C::new(0.0, 0.0)), C::new(1.0 / 3.0, 0.0), 1e-15));
        assert!(close(sinc_curvature(C::new(0.0, 0.0)), C::new(1.0 / 15.0, 0.0), 1e-15));
    }

    #[test]
    fn derivative_identities_hold() {
        // sinc'(z) = -z h(z), h'(z) = -z k(z); checked by central differences
        let z = C::new(1.3, -0.4);
        let e = 1e-6;
        let d_sinc = (sinc(z + e) - sinc(z - e)) / (2.0 * e);
        assert!(close(d_sinc, -z * sinc_slope(z), 1e-8));
        let d_h = (sinc_slope(z + e) - sinc_slope(z - e)) / (2.0 * e);
        assert!(close(d_h, -z * sinc_curvature(z), 1e-8));
    }
}
