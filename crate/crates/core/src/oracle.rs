//! Independent reference computations used to cross-check the engines.
//!
//! Nothing here calls into the Smith normal form code. Every routine is
//! brute force or uses a classical formula, and is only meant for tiny inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Determinant of a small square matrix by fraction-free elimination.
pub fn det_i128(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of a square matrix of big integers (row-major), by Bareiss elimination.
pub fn det_big(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &a[n - 1][n - 1]
}

/// `g[k-1]` = gcd of all k×k minors, for k = 1..=min(rows, cols).
/// The Smith invariants satisfy `d₁⋯d_k = g_k` (up to sign).
pub fn minor_gcds(a: &[Vec<i64>]) -> Vec<i128> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for k in 1..=rows.min(cols) {
        let rs = combinations(rows, k);
        let cs = combinations(cols, k);
        let mut g: i128 = 0;
        'all: for r in &rs {
            for c in &cs {
                let minor: Vec<Vec<i128>> = r
                    .iter()
                    .map(|&i| c.iter().map(|&j| a[i][j] as i128).collect())
                    .collect();
                g = g.gcd(&det_i128(&minor));
                if g == 1 {
                    break 'all;
                }
            }
        }
        out.push(g);
    }
    out
}

/// Smith invariants recovered from minor gcds: `d_k = g_k / g_{k-1}`,
/// stopping at the first vanishing `g_k`.
pub fn invariants_from_minors(a: &[Vec<i64>]) -> Vec<i128> {
    let g = minor_gcds(a);
    let mut out = Vec::new();
    let mut prev = 1i128;
    for gk in g {
        if gk == 0 {
            break;
        }
        out.push(gk / prev);
        prev = gk;
    }
    out
}

/// Number of compatible families `(aₓ ∈ Z/nₓ)` with `c·aₓ = a_y` in `Z/n_y`
/// for each `(x, y, c)`, by enumeration.
pub fn cyclic_limit_order(orders: &[u64], pairs: &[(usize, usize, i64)]) -> u64 {
    let total: u64 = orders.iter().product();
    let mut count = 0;
    let mut a = vec![0u64; orders.len()];
    for mut code in 0..total {
        for (ai, &n) in a.iter_mut().zip(orders) {
            *ai = code % n;
            code /= n;
        }
        let ok = pairs.iter().all(|&(x, y, c)| {
            let ny = orders[y] as i64;
            (c * a[x] as i64 - a[y] as i64).rem_euclid(ny) == 0
        });
        if ok {
            count += 1;
        }
    }
    count
}
