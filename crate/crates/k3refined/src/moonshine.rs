//! Decompositions into dimensions of irreducible M24 representations.
//!
//! The sporadic Mathieu group M24 has 26 irreducible representations whose
//! dimensions take the 20 distinct values listed in [`M24_IRREP_DIMS`].
//! `decompose_m24` finds every multiset of dimensions of minimal size
//! summing to a target, by an exhaustive dynamic program over summand
//! counts. Minimality is measured by summand count; ties are enumerated
//! exhaustively and sorted canonically.

use serde::Serialize;

/// Distinct dimensions of the irreducible representations of M24.
pub const M24_IRREP_DIMS: [u64; 20] = [
    1, 23, 45, 231, 252, 253, 483, 770, 990, 1035, 1265, 1771, 2024, 2277, 3312, 3520, 5313, 5544,
    5796, 10395,
];

/// Default bound on the summand count searched.
pub const DEFAULT_DEPTH_CAP: u32 = 6;

/// All minimal decompositions of a target into irreducible dimensions.
#[derive(Clone, Debug, Serialize)]
pub struct M24Decomposition {
    pub target: u64,
    pub allow_ones: bool,
    /// Minimal summand count, when one exists within the cap.
    pub minimal_count: Option<u32>,
    /// Every multiset of that size, each sorted descending, the list sorted
    /// lexicographically.
    pub solutions: Vec<Vec<u64>>,
    pub depth_cap: u32,
    /// True when no decomposition was found and the cap is the reason the
    /// search stopped (a deeper search might still succeed).
    pub cap_reached: bool,
}

/// Search with the default depth cap.
pub fn decompose_m24(target: u64, allow_ones: bool) -> M24Decomposition {
    decompose_m24_capped(target, allow_ones, DEFAULT_DEPTH_CAP)
}

/// Exhaustive minimal-count decomposition search, bounded by `depth_cap`
/// summands.
pub fn decompose_m24_capped(target: u64, allow_ones: bool, depth_cap: u32) -> M24Decomposition {
    assert!(target >= 1, "target must be positive");
    let dims: Vec<u64> = M24_IRREP_DIMS
        .iter()
        .copied()
        .filter(|&d| allow_ones || d != 1)
        .collect();

    // counts[s] = minimal number of summands producing s (unbounded use).
    let n = target as usize;
    const INF: u32 = u32::MAX;
    let mut counts = vec![INF; n + 1];
    counts[0] = 0;
    for s in 1..=n {
        for &d in &dims {
            let d = d as usize;
            if d <= s && counts[s - d] != INF {
                counts[s] = counts[s].min(counts[s - d] + 1);
            }
        }
    }

    let minimal = counts[n];
    if minimal == INF || minimal > depth_cap {
        return M24Decomposition {
            target,
            allow_ones,
            minimal_count: None,
            solutions: Vec::new(),
            depth_cap,
            cap_reached: minimal != INF,
        };
    }

    // Enumerate all solutions of exactly `minimal` summands, nonincreasing.
    let mut solutions = Vec::new();
    let mut stack = Vec::new();
    enumerate(
        &dims,
        &counts,
        target,
        minimal,
        u64::MAX,
        &mut stack,
        &mut solutions,
    );
    solutions.sort();
    M24Decomposition {
        target,
        allow_ones,
        minimal_count: Some(minimal),
        solutions,
        depth_cap,
        cap_reached: false,
    }
}

fn enumerate(
    dims: &[u64],
    counts: &[u32],
    remaining: u64,
    slots: u32,
    max_dim: u64,
    stack: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if remaining == 0 {
        if slots == 0 {
            out.push(stack.clone());
        }
        return;
    }
    if slots == 0 {
        return;
    }
    // Prune: the table says `remaining` needs more summands than available.
    if counts[remaining as usize] == u32::MAX || counts[remaining as usize] > slots {
        return;
    }
    for &d in dims.iter().rev() {
        if d > max_dim || d > remaining {
            continue;
        }
        stack.push(d);
        enumerate(dims, counts, remaining - d, slots - 1, d, stack, out);
        stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force oracle: every multiset of size below `count` fails to
    /// reach the target.
    fn no_smaller_decomposition(target: u64, count: u32, allow_ones: bool) {
        let dims: Vec<u64> = M24_IRREP_DIMS
            .iter()
            .copied()
            .filter(|&d| allow_ones || d != 1)
            .collect();
        assert!(count <= 3, "oracle only enumerates up to pairs");
        if count >= 1 {
            assert!(!dims.contains(&target));
        }
        if count >= 2 {
            for &a in &dims {
                for &b in &dims {
                    assert_ne!(a + b, target, "pair {a}+{b}");
                }
            }
        }
    }

    #[test]
    fn triple_with_repeats() {
        let d = decompose_m24(1981, true);
        assert_eq!(d.minimal_count, Some(3));
        assert_eq!(d.solutions, vec![vec![990, 990, 1]]);
        no_smaller_decomposition(1981, 3, true);
    }

    #[test]
    fn two_minimal_solutions() {
        let d = decompose_m24(2255, true);
        assert_eq!(d.minimal_count, Some(2));
        assert_eq!(d.solutions, vec![vec![1265, 990], vec![2024, 231]]);
    }

    #[test]
    fn unique_pair() {
        let d = decompose_m24(2254, true);
        assert_eq!(d.minimal_count, Some(2));
        assert_eq!(d.solutions, vec![vec![1771, 483]]);
    }

    #[test]
    fn known_triples_present() {
        let d = decompose_m24(13938, true);
        assert_eq!(d.minimal_count, Some(3));
        assert!(d.solutions.contains(&vec![5313, 5313, 3312]));
        assert!(d.solutions.contains(&vec![10395, 3520, 23]));
        no_smaller_decomposition(13938, 3, true);

        let d = decompose_m24(2233, true);
        assert_eq!(d.minimal_count, Some(3));
        assert!(d.solutions.contains(&vec![990, 990, 253]));
    }

    #[test]
    fn twenty_needs_ones() {
        let without = decompose_m24(20, false);
        assert_eq!(without.minimal_count, None);
        assert!(without.solutions.is_empty());
        assert!(!without.cap_reached);

        // With ones allowed, twenty needs twenty summands, beyond the cap.
        let with = decompose_m24(20, true);
        assert_eq!(with.minimal_count, None);
        assert!(with.cap_reached);
        let deeper = decompose_m24_capped(20, true, 20);
        assert_eq!(deeper.minimal_count, Some(20));
    }

    #[test]
    fn all_solutions_sum_to_target() {
        for target in [1981, 2233, 2254, 2255, 13938] {
            let d = decompose_m24(target, true);
            for s in &d.solutions {
                assert_eq!(s.iter().sum::<u64>(), target);
                assert_eq!(s.len() as u32, d.minimal_count.unwrap());
            }
        }
    }
}
