//! Maximum-weight bipartite assignment (Hungarian algorithm with potentials).

use ndarray::Array2;

/// Solves max-weight assignment on an `n x m` weight matrix.
///
/// Returns, for each row, the column it is assigned to. Every row is matched
/// when `n <= m` (and vice versa); callers decide what zero-weight pairs mean.
pub fn assign_max(weights: &Array2<f64>) -> Vec<Option<usize>> {
    let (n, m) = (weights.nrows(), weights.ncols());
    if n == 0 || m == 0 {
        return vec![None; n];
    }
    if n <= m {
        min_assignment(&weights.mapv(|w| -w))
    } else {
        // transpose, solve, invert the mapping
        let t = weights.t().to_owned();
        let cols = min_assignment(&t.mapv(|w| -w));
        let mut out = vec![None; n];
        for (col, row) in cols.into_iter().enumerate() {
            if let Some(r) = row {
                out[r] = Some(col);
            }
        }
        out
    }
}

/// Min-cost assignment for `n <= m` via the O(n^2 m) potentials method.
fn min_assignment(a: &Array2<f64>) -> Vec<Option<usize>> {
    let (n, m) = (a.nrows(), a.ncols());
    debug_assert!(n <= m);
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    // p[j] = row (1-based) matched to column j; p[0] is the working row
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = a[(i0 - 1, j - 1)] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
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

    let mut out = vec![None; n];
    for j in 1..=m {
        if p[j] != 0 {
            out[p[j] - 1] = Some(j - 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn brute_force_max(w: &Array2<f64>) -> f64 {
        // enumerate all injective row->col maps
        let (n, m) = (w.nrows(), w.ncols());
        fn rec(w: &Array2<f64>, row: usize, used: &mut Vec<bool>, acc: f64, best: &mut f64) {
            if row == w.nrows() {
                *best = best.max(acc);
                return;
            }
            // leaving a row unmatched is never better than a >=0 match, but
            // allow it so rectangular n > m cases are covered
            rec(w, row + 1, used, acc, best);
            for c in 0..w.ncols() {
                if !used[c] {
                    used[c] = true;
                    rec(w, row + 1, used, acc + w[(row, c)], best);
                    used[c] = false;
                }
            }
        }
        let mut best = f64::NEG_INFINITY;
        rec(w, 0, &mut vec![false; m], 0.0, &mut best);
        let _ = n;
        best
    }

    fn total(w: &Array2<f64>, assignment: &[Option<usize>]) -> f64 {
        assignment
            .iter()
            .enumerate()
            .filter_map(|(r, c)| c.map(|c| w[(r, c)]))
            .sum()
    }

    #[test]
    fn matches_bruteforce_on_random_matrices() {
        let mut rng = StdRng::seed_from_u64(11);
        for trial in 0..200 {
            let n = rng.random_range(1..=5);
            let m = rng.random_range(1..=5);
            let w = Array2::from_shape_fn((n, m), |_| rng.random::<f64>());
            let assignment = assign_max(&w);
            let got = total(&w, &assignment);
            let want = brute_force_max(&w);
            assert!(
                (got - want).abs() < 1e-9,
                "trial {trial}: {n}x{m} got {got} want {want}"
            );
            // injectivity
            let mut seen = std::collections::HashSet::new();
            for c in assignment.iter().flatten() {
                assert!(seen.insert(*c));
            }
        }
    }

    #[test]
    fn identity_on_diagonal_dominant() {
        let mut w = Array2::zeros((3, 3));
        for i in 0..3 {
            w[(i, i)] = 10.0;
        }
        let a = assign_max(&w);
        assert_eq!(a, vec![Some(0), Some(1), Some(2)]);
    }
}
