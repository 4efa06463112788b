//! Small search for successor multisets meeting lower and upper count
//! bounds, shared by witnessing functions and the tableau.

use std::collections::HashSet;

/// Finds counts per pattern such that, for every `(j, n)` in `lower`, the
/// patterns containing bit `j` are used at least `n` times, and for every
/// `(j, m)` in `upper` at most `m` times. Returns the counts per pattern.
pub fn solve_counts(patterns: &[u64], lower: &[(usize, u32)], upper: &[(usize, u32)]) -> Option<Vec<u32>> {
    let mut counts = vec![0u32; patterns.len()];
    let width = lower
        .iter()
        .chain(upper)
        .map(|&(j, _)| j + 1)
        .max()
        .unwrap_or(0);
    let mut per_bit = vec![0u32; width];
    let mut seen = HashSet::new();
    if search(patterns, lower, upper, &mut counts, &mut per_bit, &mut seen) {
        Some(counts)
    } else {
        None
    }
}

fn search(
    patterns: &[u64],
    lower: &[(usize, u32)],
    upper: &[(usize, u32)],
    counts: &mut Vec<u32>,
    per_bit: &mut Vec<u32>,
    seen: &mut HashSet<Vec<u32>>,
) -> bool {
    let Some(&(j, _)) = lower.iter().find(|&&(j, n)| per_bit[j] < n) else {
        return true;
    };
    if !seen.insert(counts.clone()) {
        return false;
    }
    for (p, &mask) in patterns.iter().enumerate() {
        if mask >> j & 1 == 0 {
            continue;
        }
        if upper
            .iter()
            .any(|&(k, m)| mask >> k & 1 == 1 && per_bit[k] + 1 > m)
        {
            continue;
        }
        counts[p] += 1;
        bump(per_bit, mask, true);
        if search(patterns, lower, upper, counts, per_bit, seen) {
            return true;
        }
        counts[p] -= 1;
        bump(per_bit, mask, false);
    }
    false
}

fn bump(per_bit: &mut [u32], mask: u64, up: bool) {
    for (k, c) in per_bit.iter_mut().enumerate() {
        if mask >> k & 1 == 1 {
            if up {
                *c += 1;
            } else {
                *c -= 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute(patterns: &[u64], lower: &[(usize, u32)], upper: &[(usize, u32)], cap: u32) -> bool {
        let p = patterns.len();
        let total = (cap + 1).pow(p as u32);
        (0..total).any(|mut code| {
            let mut per = [0u32; 4];
            for &m in patterns {
                let c = code % (cap + 1);
                code /= cap + 1;
                for (k, x) in per.iter_mut().enumerate() {
                    if m >> k & 1 == 1 {
                        *x += c;
                    }
                }
            }
            lower.iter().all(|&(j, n)| per[j] >= n) && upper.iter().all(|&(j, m)| per[j] <= m)
        })
    }

    #[test]
    fn simple_cases() {
        assert!(solve_counts(&[0b1], &[(0, 2)], &[]).is_some());
        assert!(solve_counts(&[0b11], &[(0, 2)], &[(1, 1)]).is_none());
        assert_eq!(solve_counts(&[0b11, 0b01], &[(0, 2)], &[(1, 1)]), Some(vec![1, 1]));
        assert!(solve_counts(&[], &[], &[]).is_some());
        assert!(solve_counts(&[], &[(0, 1)], &[]).is_none());
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            patterns in proptest::collection::vec(0u64..16, 0..4),
            lower in proptest::collection::vec((0usize..4, 1u32..4), 0..3),
            upper in proptest::collection::vec((0usize..4, 0u32..3), 0..3),
        ) {
            let got = solve_counts(&patterns, &lower, &upper);
            prop_assert_eq!(got.is_some(), brute(&patterns, &lower, &upper, 3));
        }
    }
}
