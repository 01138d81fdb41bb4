//! Least-squares monotone projection via pool-adjacent-violators.

use crate::table::{Direction, Row};

/// Closest non-decreasing (or non-increasing) sequence in the least-squares
/// sense. Already-monotone input is returned unchanged.
pub fn isotonic_fit(values: &[f64], direction: Direction) -> Vec<f64> {
    if values.windows(2).all(|w| direction.allows(w[0], w[1])) {
        return values.to_vec();
    }
    let sign = match direction {
        Direction::Increasing => 1.0,
        Direction::Decreasing => -1.0,
    };
    // (sum, count) per block of the sign-adjusted sequence
    let mut blocks: Vec<(f64, usize)> = Vec::with_capacity(values.len());
    for &v in values {
        blocks.push((sign * v, 1));
        while blocks.len() > 1 {
            let (s1, c1) = blocks[blocks.len() - 1];
            let (s0, c0) = blocks[blocks.len() - 2];
            if s0 / c0 as f64 > s1 / c1 as f64 {
                blocks.pop();
                *blocks.last_mut().expect("two blocks") = (s0 + s1, c0 + c1);
            } else {
                break;
            }
        }
    }
    blocks
        .into_iter()
        .flat_map(|(sum, count)| std::iter::repeat_n(sign * sum / count as f64, count))
        .collect()
}

pub fn enforce_monotone(row: &Row, direction: Direction) -> Row {
    isotonic_fit(row, direction)
        .try_into()
        .expect("projection preserves length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Exhaustive search over every contiguous block partition.
    fn brute_force(values: &[f64], direction: Direction) -> Vec<f64> {
        let n = values.len();
        let mut best: Option<(f64, Vec<f64>)> = None;
        for mask in 0u32..(1 << (n - 1)) {
            let mut fit = Vec::with_capacity(n);
            let mut start = 0;
            for i in 0..n {
                if i == n - 1 || mask & (1 << i) != 0 {
                    let block = &values[start..=i];
                    let mean = block.iter().sum::<f64>() / block.len() as f64;
                    fit.extend(std::iter::repeat_n(mean, block.len()));
                    start = i + 1;
                }
            }
            if !fit.windows(2).all(|w| direction.allows(w[0], w[1])) {
                continue;
            }
            let sse: f64 = fit.iter().zip(values).map(|(f, v)| (f - v).powi(2)).sum();
            if best.as_ref().is_none_or(|(b, _)| sse < *b) {
                best = Some((sse, fit));
            }
        }
        best.expect("single-block fit is always monotone").1
    }

    #[test]
    fn pools_decreasing_violation() {
        let fit = isotonic_fit(&[1.4, 1.5, 1.2], Direction::Decreasing);
        let oracle = brute_force(&[1.4, 1.5, 1.2], Direction::Decreasing);
        for (a, b) in fit.iter().zip(&oracle) {
            assert_relative_eq!(*a, *b, max_relative = 1e-12);
        }
        assert_relative_eq!(fit[0], 1.45, max_relative = 1e-12);
        assert_relative_eq!(fit[1], 1.45, max_relative = 1e-12);
        assert_eq!(fit[2], 1.2);
    }

    #[test]
    fn fixpoints() {
        let constant = [1.3; 18];
        assert_eq!(enforce_monotone(&constant, Direction::Increasing), constant);
        assert_eq!(enforce_monotone(&constant, Direction::Decreasing), constant);
        let ramp: Row = std::array::from_fn(|i| 0.1 * i as f64 + 0.3);
        assert_eq!(enforce_monotone(&ramp, Direction::Increasing), ramp);
    }

    proptest! {
        #[test]
        fn matches_exhaustive_fit(
            values in proptest::collection::vec(0.1f64..3.0, 1..=5),
            decreasing in any::<bool>(),
        ) {
            let direction = if decreasing { Direction::Decreasing } else { Direction::Increasing };
            let fit = isotonic_fit(&values, direction);
            let oracle = brute_force(&values, direction);
            for (a, b) in fit.iter().zip(&oracle) {
                prop_assert!((a - b).abs() <= 1e-9, "{:?} vs {:?}", fit, oracle);
            }
        }

        #[test]
        fn monotone_and_idempotent(
            values in proptest::collection::vec(0.1f64..3.0, 18),
            decreasing in any::<bool>(),
        ) {
            let direction = if decreasing { Direction::Decreasing } else { Direction::Increasing };
            let fit = isotonic_fit(&values, direction);
            prop_assert!(fit.windows(2).all(|w| direction.allows(w[0], w[1])));
            prop_assert_eq!(isotonic_fit(&fit, direction), fit);
        }
    }
}
