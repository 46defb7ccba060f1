//! Compensated summation.

use num_complex::Complex64;

type C = Complex64;

/// Kahan sum of complex terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KahanSum {
    sum: C,
    comp: C,
}

impl KahanSum {
    pub fn new(start: C) -> Self {
        KahanSum {
            sum: start,
            comp: C::new(0.0, 0.0),
        }
    }

    pub fn add(&mut self, x: C) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> C {
        self.sum
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_small_terms_lost_by_naive_summation() {
        let mut k = KahanSum::new(C::new(1.0, -1.0));
        let mut naive = C::new(1.0, -1.0);
        let tiny = C::new(1e-17, 1e-17);
        for _ in 0..100_000 {
            k.add(tiny);
            naive += tiny;
        }
        assert_eq!(naive, C::new(1.0, -1.0));
        assert!((k.value() - C::new(1.0 + 1e-12, -1.0 + 1e-12)).norm() < 1e-20);
    }
}
