//! Maximum-weight one-to-one assignment (the Kuhn–Munkres / Hungarian
//! method, in the O(n³) shortest-augmenting-path formulation with dual
//! potentials).
//!
//! Rectangular matrices are padded to square with zero-weight cells, so the
//! result always matches every row or every column of the smaller dimension;
//! callers that only care about positive-weight matches filter the returned
//! pairs themselves.

/// Returns a maximum-total-weight set of (row, column) pairs, each row and
/// column used at most once, covering min(rows, cols) pairs. Weights must be
/// finite; zero-weight pairs may appear in the result and carry no cost.
///
/// The solver is deterministic: the same matrix always produces the same
/// pairing, ordered by row.
pub fn max_weight_assignment(weights: &[Vec<f64>]) -> Vec<(usize, usize)> {
    let rows = weights.len();
    let cols = weights.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Vec::new();
    }
    debug_assert!(weights.iter().all(|r| r.len() == cols));
    let n = rows.max(cols);

    // Minimum-cost perfect matching on the negated, zero-padded square
    // matrix. Arrays are 1-based as in the classic potentials formulation:
    // p[j] is the row matched to column j, way[j] remembers the previous
    // column on the shortest augmenting path.
    let cost = |i: usize, j: usize| -> f64 {
        if i < rows && j < cols {
            -weights[i][j]
        } else {
            0.0
        }
    };
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=n)
        .filter_map(|j| {
            let i = p[j];
            if i >= 1 && i - 1 < rows && j - 1 < cols {
                Some((i - 1, j - 1))
            } else {
                None
            }
        })
        .collect();
    pairs.sort_unstable();
    pairs
}

/// Total weight of an assignment over a matrix, summed in row order.
pub fn assignment_weight(weights: &[Vec<f64>], pairs: &[(usize, usize)]) -> f64 {
    let mut sorted: Vec<(usize, usize)> = pairs.to_vec();
    sorted.sort_unstable();
    sorted.iter().map(|&(i, j)| weights[i][j]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Exhaustive search over all injective row→column maps; the independent
    /// oracle the solver is checked against.
    fn brute_force(weights: &[Vec<f64>]) -> f64 {
        let rows = weights.len();
        let cols = weights.first().map_or(0, Vec::len);
        fn rec(weights: &[Vec<f64>], row: usize, taken: &mut [bool], acc: f64, best: &mut f64) {
            if row == weights.len() {
                if acc > *best {
                    *best = acc;
                }
                return;
            }
            // Leaving a row unmatched can never help with nonnegative
            // weights, but allow it so rectangular cases stay simple.
            for col in 0..taken.len() {
                if !taken[col] {
                    taken[col] = true;
                    rec(weights, row + 1, taken, acc + weights[row][col], best);
                    taken[col] = false;
                }
            }
            if weights.len() > taken.len() {
                rec(weights, row + 1, taken, acc, best);
            }
        }
        let mut best = f64::NEG_INFINITY;
        rec(weights, 0, &mut vec![false; cols], 0.0, &mut best);
        if rows == 0 || cols == 0 {
            0.0
        } else {
            best
        }
    }

    #[test]
    fn single_cell() {
        let m = vec![vec![0.7]];
        assert_eq!(max_weight_assignment(&m), vec![(0, 0)]);
    }

    #[test]
    fn picks_off_diagonal_when_better() {
        let m = vec![vec![0.6, 0.5], vec![0.5, 0.1]];
        let pairs = max_weight_assignment(&m);
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
        assert!((assignment_weight(&m, &pairs) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rectangular_matrices() {
        let wide = vec![vec![0.2, 0.9, 0.4]];
        assert_eq!(max_weight_assignment(&wide), vec![(0, 1)]);
        let tall = vec![vec![0.2], vec![0.9], vec![0.4]];
        assert_eq!(max_weight_assignment(&tall), vec![(1, 0)]);
    }

    #[test]
    fn empty_matrix() {
        assert!(max_weight_assignment(&[]).is_empty());
        let zero_cols: Vec<Vec<f64>> = vec![vec![], vec![]];
        assert!(max_weight_assignment(&zero_cols).is_empty());
    }

    #[test]
    fn matches_brute_force_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..300 {
            let rows = rng.gen_range(1..=6);
            let cols = rng.gen_range(1..=6);
            let m: Vec<Vec<f64>> = (0..rows)
                .map(|_| {
                    (0..cols)
                        .map(|_| {
                            // A third of the cells are zero to exercise the
                            // padding and the "worthless match" paths.
                            if rng.gen_bool(0.33) {
                                0.0
                            } else {
                                rng.gen_range(0.0..1.0)
                            }
                        })
                        .collect()
                })
                .collect();
            let pairs = max_weight_assignment(&m);
            let got = assignment_weight(&m, &pairs);
            let want = brute_force(&m);
            assert!(
                (got - want).abs() < 1e-9,
                "trial {trial}: solver {got} vs brute force {want} on {m:?}"
            );
            // One-to-one on both sides.
            let mut rs: Vec<_> = pairs.iter().map(|p| p.0).collect();
            let mut cs: Vec<_> = pairs.iter().map(|p| p.1).collect();
            rs.sort_unstable();
            rs.dedup();
            cs.sort_unstable();
            cs.dedup();
            assert_eq!(rs.len(), pairs.len());
            assert_eq!(cs.len(), pairs.len());
        }
    }
}
