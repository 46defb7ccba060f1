use num_complex::Complex64;

/// Cumulative `sum |k_n|^2` and whether the last quarter of the sequence
/// contributes less than 5% of the total. A last quarter whose root-mean-square
/// is below `floor` also counts as stable.
pub fn l2_tail_diagnostic(seq: &[Complex64], floor: f64) -> (Vec<f64>, bool) {
    let mut partial = Vec::with_capacity(seq.len());
    let mut acc = 0.0;
    for v in seq {
        acc += v.norm_sqr();
        partial.push(acc);
    }
    let total = acc;
    if total == 0.0 {
        return (partial, true);
    }
    let cut = seq.len() - seq.len() / 4;
    let before = if cut == 0 { 0.0 } else { partial[cut - 1] };
    let tail = total - before;
    let tail_len = (seq.len() - cut).max(1) as f64;
    let stabilized = tail < 0.05 * total || tail <= floor * floor * tail_len;
    (partial, stabilized)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(f: impl Fn(f64) -> f64, n: usize) -> Vec<Complex64> {
        (1..=n).map(|k| Complex64::new(f(k as f64), 0.0)).collect()
    }

    #[test]
    fn zero_sequence_is_stable() {
        let (p, ok) = l2_tail_diagnostic(&vec![Complex64::new(0.0, 0.0); 32], 0.0);
        assert!(ok);
        assert_eq!(*p.last().unwrap(), 0.0);
    }

    #[test]
    fn basel_tail_is_stable() {
        let (p, ok) = l2_tail_diagnostic(&seq(|n| 1.0 / n, 128), 0.0);
        assert!(ok);
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!((p.last().unwrap() - pi2_6).abs() < 1.0 / 127.0);
    }

    #[test]
    fn harmonic_tail_is_not_stable() {
        let (_, ok) = l2_tail_diagnostic(&seq(|n| 1.0 / n.sqrt(), 128), 0.0);
        assert!(!ok);
    }

    #[test]
    fn noise_level_tail_is_stable() {
        let (_, ok) = l2_tail_diagnostic(&seq(|n| 1e-14 * n, 128), 1e-9);
        assert!(ok);
        let (_, ok) = l2_tail_diagnostic(&seq(|n| 1e-14 * n, 128), 0.0);
        assert!(!ok);
    }
}
