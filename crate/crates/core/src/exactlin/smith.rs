//! Smith normal form by unimodular row and column operations.
//!
//! Pivot rule: the nonzero entry of least absolute value in the active
//! submatrix, ties broken by the lowest (row, col) position. A scan stops at
//! the first unit it meets, which keeps the common sparse ±1 case cheap.

use std::cmp::Ordering;

use num_bigint::BigInt;

use super::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct Want {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
    pub vinv: bool,
}

/// Output of a run, all over `BigInt`. Square transforms are row-major.
/// `diag` holds the nonzero diagonal entries (positive, divisibility chain).
#[derive(Clone, Debug)]
pub(crate) struct Snf {
    pub diag: Vec<BigInt>,
    pub u: Option<Vec<BigInt>>,
    pub uinv: Option<Vec<BigInt>>,
    pub v: Option<Vec<BigInt>>,
    #[cfg_attr(not(test), allow(dead_code))]
    pub vinv: Option<Vec<BigInt>>,
}

struct Engine<T> {
    m: usize,
    n: usize,
    a: Vec<T>,
    // u: row-major, uinv: column-major, v: column-major, vinv: row-major.
    // Each is stored so that the operations it receives touch contiguous memory.
    u: Option<Vec<T>>,
    uinv: Option<Vec<T>>,
    v: Option<Vec<T>>,
    vinv: Option<Vec<T>>,
}

fn identity<T: Scalar>(k: usize) -> Vec<T> {
    let mut out = vec![T::zero(); k * k];
    for i in 0..k {
        out[i * k + i] = T::one();
    }
    out
}

/// `buf[dst*k..] -= q * buf[src*k..]` for two length-`k` stripes.
fn stripe_sub<T: Scalar>(buf: &mut [T], k: usize, dst: usize, src: usize, q: &T) -> Option<()> {
    if q.is_zero() {
        return Some(());
    }
    let (d, s) = two_stripes(buf, k, dst, src);
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x = x.sub_mul(q, y)?;
        }
    }
    Some(())
}

fn two_stripes<T>(buf: &mut [T], k: usize, dst: usize, src: usize) -> (&mut [T], &[T]) {
    debug_assert_ne!(dst, src);
    if dst < src {
        let (lo, hi) = buf.split_at_mut(src * k);
        (&mut lo[dst * k..dst * k + k], &hi[..k])
    } else {
        let (lo, hi) = buf.split_at_mut(dst * k);
        (&mut hi[..k], &lo[src * k..src * k + k])
    }
}

fn stripe_swap<T>(buf: &mut [T], k: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (x, y) = buf.split_at_mut(hi * k);
    x[lo * k..lo * k + k].swap_with_slice(&mut y[..k]);
}

fn stripe_neg<T: Scalar>(buf: &mut [T], k: usize, a: usize) -> Option<()> {
    for x in &mut buf[a * k..a * k + k] {
        if !x.is_zero() {
            *x = x.neg()?;
        }
    }
    Some(())
}

impl<T: Scalar> Engine<T> {
    fn new(m: usize, n: usize, a: Vec<T>, want: Want) -> Self {
        Engine {
            m,
            n,
            a,
            u: want.u.then(|| identity(m)),
            uinv: want.uinv.then(|| identity(m)),
            v: want.v.then(|| identity(n)),
            vinv: want.vinv.then(|| identity(n)),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    /// row_i -= q row_k, acting on columns `from..`.
    fn row_sub(&mut self, i: usize, k: usize, q: &T, from: usize) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        let n = self.n;
        for j in from..n {
            let y = self.a[k * n + j].clone();
            if !y.is_zero() {
                self.a[i * n + j] = self.a[i * n + j].sub_mul(q, &y)?;
            }
        }
        let m = self.m;
        if let Some(u) = self.u.as_mut() {
            stripe_sub(u, m, i, k, q)?;
        }
        if let Some(ui) = self.uinv.as_mut() {
            // column k += q column i
            let nq = q.neg()?;
            stripe_sub(ui, m, k, i, &nq)?;
        }
        Some(())
    }

    /// col_j -= q col_k, acting on rows `from..`.
    fn col_sub(&mut self, j: usize, k: usize, q: &T, from: usize) -> Option<()> {
        if q.is_zero() {
            return Some(());
        }
        let n = self.n;
        for i in from..self.m {
            let y = self.a[i * n + k].clone();
            if !y.is_zero() {
                self.a[i * n + j] = self.a[i * n + j].sub_mul(q, &y)?;
            }
        }
        if let Some(v) = self.v.as_mut() {
            stripe_sub(v, n, j, k, q)?;
        }
        if let Some(vi) = self.vinv.as_mut() {
            // row k += q row j
            let nq = q.neg()?;
            stripe_sub(vi, n, k, j, &nq)?;
        }
        Some(())
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        stripe_swap(&mut self.a, self.n, i, k);
        if let Some(u) = self.u.as_mut() {
            stripe_swap(u, self.m, i, k);
        }
        if let Some(ui) = self.uinv.as_mut() {
            stripe_swap(ui, self.m, i, k);
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        let n = self.n;
        for i in 0..self.m {
            self.a.swap(i * n + j, i * n + k);
        }
        if let Some(v) = self.v.as_mut() {
            stripe_swap(v, n, j, k);
        }
        if let Some(vi) = self.vinv.as_mut() {
            stripe_swap(vi, n, j, k);
        }
    }

    fn neg_row(&mut self, i: usize) -> Option<()> {
        stripe_neg(&mut self.a, self.n, i)?;
        if let Some(u) = self.u.as_mut() {
            stripe_neg(u, self.m, i)?;
        }
        if let Some(ui) = self.uinv.as_mut() {
            stripe_neg(ui, self.m, i)?;
        }
        Some(())
    }

    /// Least |entry| in the block rows t.., cols t.., lowest (row, col) on ties.
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m {
            let row = &self.a[i * self.n..(i + 1) * self.n];
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                let better = match best {
                    None => true,
                    Some((bi, bj)) => x.cmp_abs(self.at(bi, bj)) == Ordering::Less,
                };
                if better {
                    best = Some((i, j));
                    if x.cmp_abs(&T::one()) == Ordering::Equal {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Least |entry| among the off-pivot remainders of row t and column t.
    fn find_remainder_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let consider = |i: usize, j: usize, best: &mut Option<(usize, usize)>| {
            let x = self.at(i, j);
            if x.is_zero() {
                return;
            }
            let better = match *best {
                None => true,
                Some((bi, bj)) => match x.cmp_abs(self.at(bi, bj)) {
                    Ordering::Less => true,
                    Ordering::Equal => (i, j) < (bi, bj),
                    Ordering::Greater => false,
                },
            };
            if better {
                *best = Some((i, j));
            }
        };
        for j in t + 1..self.n {
            consider(t, j, &mut best);
        }
        for i in t + 1..self.m {
            consider(i, t, &mut best);
        }
        best
    }

    fn run(&mut self) -> Option<Vec<T>> {
        let mut diag = Vec::new();
        let kmax = self.m.min(self.n);
        let mut t = 0;
        while t < kmax {
            let Some((pi, pj)) = self.find_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear column t below the pivot, then row t to its right.
                let p = self.at(t, t).clone();
                let mut dirty = false;
                for i in t + 1..self.m {
                    let x = self.at(i, t).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.quot(&p)?;
                    self.row_sub(i, t, &q, t)?;
                    if !self.at(i, t).is_zero() {
                        dirty = true;
                    }
                }
                for j in t + 1..self.n {
                    let x = self.at(t, j).clone();
                    if x.is_zero() {
                        continue;
                    }
                    let q = x.quot(&p)?;
                    self.col_sub(j, t, &q, t)?;
                    if !self.at(t, j).is_zero() {
                        dirty = true;
                    }
                }
                if dirty {
                    let (ri, rj) = self
                        .find_remainder_pivot(t)
                        .expect("a nonzero remainder exists");
                    self.swap_rows(t, ri);
                    self.swap_cols(t, rj);
                    continue;
                }
                // Divisibility: fold any row with an entry the pivot does not divide.
                let mut bad = None;
                if p.cmp_abs(&T::one()) != Ordering::Equal {
                    'scan: for i in t + 1..self.m {
                        for j in t + 1..self.n {
                            if !self.at(i, j).is_multiple_of(&p) {
                                bad = Some(i);
                                break 'scan;
                            }
                        }
                    }
                }
                match bad {
                    Some(i) => {
                        let minus_one = T::one().neg()?;
                        self.row_sub(t, i, &minus_one, t)?;
                    }
                    None => break,
                }
            }
            if self.at(t, t).is_negative() {
                self.neg_row(t)?;
            }
            diag.push(self.at(t, t).clone());
            t += 1;
        }
        Some(diag)
    }
}

fn transpose_sq<T: Clone>(buf: Vec<T>, k: usize) -> Vec<T> {
    let mut out = buf.clone();
    for i in 0..k {
        for j in 0..k {
            out[j * k + i] = buf[i * k + j].clone();
        }
    }
    out
}

fn to_big<T: Scalar>(v: Vec<T>) -> Vec<BigInt> {
    v.iter().map(Scalar::to_big).collect()
}

fn finish<T: Scalar>(mut e: Engine<T>, diag: Vec<T>) -> Snf {
    let (m, n) = (e.m, e.n);
    Snf {
        diag: to_big(diag),
        u: e.u.take().map(to_big),
        uinv: e.uinv.take().map(|x| to_big(transpose_sq(x, m))),
        v: e.v.take().map(|x| to_big(transpose_sq(x, n))),
        vinv: e.vinv.take().map(to_big),
    }
}

/// Runs the elimination, first over `i64` and over `BigInt` if that overflows.
pub(crate) fn snf(m: usize, n: usize, entries: &[BigInt], want: Want) -> Snf {
    let small: Option<Vec<i64>> = entries.iter().map(<i64 as Scalar>::from_big).collect();
    if let Some(small) = small {
        let mut e = Engine::new(m, n, small, want);
        if let Some(diag) = e.run() {
            return finish(e, diag);
        }
    }
    let mut e = Engine::new(m, n, entries.to_vec(), want);
    let diag = e.run().expect("bigint arithmetic does not overflow");
    finish(e, diag)
}

/// Same as [`snf`] but forced onto the arbitrary-precision path.
#[cfg(test)]
pub(crate) fn snf_big(m: usize, n: usize, entries: &[BigInt], want: Want) -> Snf {
    let mut e = Engine::new(m, n, entries.to_vec(), want);
    let diag = e.run().expect("bigint arithmetic does not overflow");
    finish(e, diag)
}
