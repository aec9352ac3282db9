//! Exact integer linear algebra: Smith normal form, integer kernels and
//! solving in column lattices.

mod matrix;
mod scalar;
mod smith;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub use matrix::{vec_add, vec_from_i64, vec_is_zero, vec_neg, vec_scale, vec_sub, IntMatrix};
pub(crate) use smith::Want;

use crate::error::{Error, Result};

/// `U·A·V = S` with `U`, `V` unimodular and `S` in Smith form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// The nonzero diagonal entries of `S`.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.divisors().len()
    }
}

pub(crate) fn snf_raw(a: &IntMatrix, want: Want) -> smith::Snf {
    smith::snf(a.rows(), a.cols(), a.entries(), want)
}

#[cfg(test)]
pub(crate) fn snf_raw_big(a: &IntMatrix, want: Want) -> smith::Snf {
    smith::snf_big(a.rows(), a.cols(), a.entries(), want)
}

fn square(k: usize, buf: Vec<BigInt>) -> IntMatrix {
    IntMatrix::new(k, k, buf).expect("square buffer")
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let r = snf_raw(
        a,
        Want {
            u: true,
            v: true,
            ..Want::default()
        },
    );
    SmithDecomposition {
        u: square(a.rows(), r.u.expect("requested")),
        s: IntMatrix::diagonal(a.rows(), a.cols(), &r.diag),
        v: square(a.cols(), r.v.expect("requested")),
    }
}

/// Nonzero Smith invariants `d₁ | d₂ | …`, without transforms.
pub fn elementary_divisors(a: &IntMatrix) -> Vec<BigInt> {
    snf_raw(a, Want::default()).diag
}

pub fn rank(a: &IntMatrix) -> usize {
    elementary_divisors(a).len()
}

/// Columns form a basis of `{x : A·x = 0}`.
pub fn kernel_basis(a: &IntMatrix) -> IntMatrix {
    let r = snf_raw(
        a,
        Want {
            v: true,
            ..Want::default()
        },
    );
    let n = a.cols();
    let v = square(n, r.v.expect("requested"));
    let mut cols: Vec<Vec<BigInt>> = (r.diag.len()..n).map(|j| v.column(j)).collect();
    for c in &mut cols {
        normalize_sign(c);
    }
    IntMatrix::from_columns(n, &cols)
}

fn normalize_sign(c: &mut [BigInt]) {
    if let Some(x) = c.iter().find(|x| !x.is_zero()) {
        if x.is_negative() {
            for y in c.iter_mut() {
                *y = -&*y;
            }
        }
    }
}

/// A basis (as columns) of the lattice spanned by the columns of `y`.
pub fn lattice_basis(y: &IntMatrix) -> IntMatrix {
    let r = snf_raw(
        y,
        Want {
            uinv: true,
            ..Want::default()
        },
    );
    let m = y.rows();
    let uinv = square(m, r.uinv.expect("requested"));
    let cols: Vec<Vec<BigInt>> = r
        .diag
        .iter()
        .enumerate()
        .map(|(i, d)| uinv.column(i).iter().map(|x| x * d).collect())
        .collect();
    IntMatrix::from_columns(m, &cols)
}

/// Precomputed factorization answering repeated `A·x = b` queries.
#[derive(Clone, Debug)]
pub struct Solver {
    rows: usize,
    cols: usize,
    u: IntMatrix,
    diag: Vec<BigInt>,
    /// first `rank` columns of `V`
    v: IntMatrix,
}

impl Solver {
    pub fn new(a: &IntMatrix) -> Self {
        let r = snf_raw(
            a,
            Want {
                u: true,
                v: true,
                ..Want::default()
            },
        );
        let rank = r.diag.len();
        let v = square(a.cols(), r.v.expect("requested"));
        let keep: Vec<usize> = (0..rank).collect();
        Solver {
            rows: a.rows(),
            cols: a.cols(),
            u: square(a.rows(), r.u.expect("requested")),
            diag: r.diag,
            v: v.select_columns(&keep),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// Some `x` with `A·x = b`, or `None` when `b` is outside the column lattice.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        if b.len() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let ub = self.u.mul_vec(b)?;
        if ub[self.diag.len()..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
        let mut y = Vec::with_capacity(self.diag.len());
        for (c, d) in ub.iter().zip(&self.diag) {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return Ok(None);
            }
            y.push(q);
        }
        Ok(Some(self.v.mul_vec(&y)?))
    }

    pub fn contains(&self, b: &[BigInt]) -> Result<bool> {
        Ok(self.solve(b)?.is_some())
    }

    /// Solves `A·X = B` column by column; entry `j` is `None` when column `j`
    /// of `B` is outside the lattice. One matrix product instead of many
    /// matrix-vector products.
    pub fn solve_columns(&self, b: &IntMatrix) -> Result<Vec<Option<Vec<BigInt>>>> {
        if b.rows() != self.rows {
            return Err(Error::Dimension(format!(
                "right-hand side with {} rows for {} rows",
                b.rows(),
                self.rows
            )));
        }
        let ub = self.u.mul(b)?;
        let r = self.diag.len();
        let mut ys: Vec<Option<Vec<BigInt>>> = Vec::with_capacity(b.cols());
        for j in 0..b.cols() {
            if (r..self.rows).any(|i| !ub[(i, j)].is_zero()) {
                ys.push(None);
                continue;
            }
            let mut y = Vec::with_capacity(r);
            let mut ok = true;
            for (i, d) in self.diag.iter().enumerate() {
                let (q, rem) = ub[(i, j)].div_rem(d);
                if !rem.is_zero() {
                    ok = false;
                    break;
                }
                y.push(q);
            }
            ys.push(ok.then_some(y));
        }
        let good: Vec<usize> = (0..ys.len()).filter(|&j| ys[j].is_some()).collect();
        let ymat = IntMatrix::from_columns(
            r,
            &good
                .iter()
                .map(|&j| ys[j].clone().expect("filtered"))
                .collect::<Vec<_>>(),
        );
        let x = self.v.mul(&ymat)?;
        let mut out = vec![None; b.cols()];
        for (k, &j) in good.iter().enumerate() {
            out[j] = Some(x.column(k));
        }
        Ok(out)
    }

    /// Like [`Solver::solve_columns`] but fails unless every column is solvable.
    pub fn solve_all(&self, b: &IntMatrix) -> Result<Option<IntMatrix>> {
        let cols = self.solve_columns(b)?;
        if cols.iter().any(Option::is_none) {
            return Ok(None);
        }
        let cols: Vec<Vec<BigInt>> = cols.into_iter().map(|c| c.expect("checked")).collect();
        Ok(Some(IntMatrix::from_columns(self.cols, &cols)))
    }
}

/// `x` with `A·x = b`, or `None` when `b` is not in the column lattice of `A`.
pub fn solve_in_image(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side of length {} for {} rows",
            b.len(),
            a.rows()
        )));
    }
    Solver::new(a).solve(b)
}
