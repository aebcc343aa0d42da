//! Small shared algorithms: bitmask clique enumeration, dense linear
//! solves, and integer Smith normal form. Everything here works at desk
//! scale (dozens of vertices, single-digit dimensions) and favors
//! determinism over asymptotics.

/// Iterate the set bit positions of `mask` in ascending order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let v = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(v)
    })
}

/// All maximal cliques of the graph on `0..n` with adjacency bitmasks
/// `adj`, via Bron–Kerbosch with pivoting. Output sorted ascending as
/// integers, which is deterministic across runs.
pub(crate) fn maximal_cliques(n: usize, adj: &[u64]) -> Vec<u64> {
    assert!(n <= 64, "bitmask clique enumeration caps at 64 vertices");
    let mut out = Vec::new();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    bron_kerbosch(adj, 0, all, 0, &mut out);
    out.sort_unstable();
    out
}

fn bron_kerbosch(adj: &[u64], r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    // Pivot on the candidate dominating the most of P.
    let pivot = bits(p | x)
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p | x nonempty");
    let mut ext = p & !adj[pivot];
    while ext != 0 {
        let v = ext.trailing_zeros() as usize;
        let vbit = 1u64 << v;
        ext &= ext - 1;
        bron_kerbosch(adj, r | vbit, p & adj[v], x & adj[v], out);
        p &= !vbit;
        x |= vbit;
    }
}

/// Solve the dense square system `a * x = b` by Gaussian elimination with
/// partial pivoting. Returns `None` when the matrix is singular to working
/// precision.
pub(crate) fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert!(a.len() == n && a.iter().all(|row| row.len() == n));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite entries")
        })?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = b[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

/// Diagonal of the Smith normal form of an integer matrix, padded with
/// zeros to `min(rows, cols)` entries. Entries are nonnegative and each
/// divides the next.
pub(crate) fn smith_normal_form(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let rank_cap = rows.min(cols);
    let mut diag = Vec::with_capacity(rank_cap);
    let mut top = 0;
    while top < rank_cap {
        // Find a nonzero entry at or below/right of (top, top).
        let Some((pr, pc)) = (top..rows)
            .flat_map(|r| (top..cols).map(move |c| (r, c)))
            .filter(|&(r, c)| m[r][c] != 0)
            .min_by_key(|&(r, c)| (m[r][c].unsigned_abs(), r, c))
        else {
            break;
        };
        m.swap(top, pr);
        for row in m.iter_mut() {
            row.swap(top, pc);
        }
        loop {
            let mut dirty = false;
            for r in top + 1..rows {
                let q = m[r][top].div_euclid(m[top][top]);
                if q != 0 {
                    for c in top..cols {
                        m[r][c] -= q * m[top][c];
                    }
                }
                if m[r][top] != 0 {
                    m.swap(top, r);
                    dirty = true;
                }
            }
            for c in top + 1..cols {
                let q = m[top][c].div_euclid(m[top][top]);
                if q != 0 {
                    for row in m.iter_mut().take(rows).skip(top) {
                        row[c] -= q * row[top];
                    }
                }
                if m[top][c] != 0 {
                    for row in m.iter_mut() {
                        row.swap(top, c);
                    }
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Enforce divisibility into the remaining block.
        let d = m[top][top].abs();
        let mut fixed = true;
        'scan: for r in top + 1..rows {
            for c in top + 1..cols {
                if m[r][c] % d != 0 {
                    for cc in top..cols {
                        m[top][cc] += m[r][cc];
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            diag.push(d);
            top += 1;
        }
    }
    diag.resize(rank_cap, 0);
    diag
}
