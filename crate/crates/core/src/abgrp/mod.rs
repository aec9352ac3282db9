//! Finitely generated abelian groups given by generators and relations.
//!
//! Elements are integer coordinate vectors on the stated generators. Two
//! vectors are equal in the group when their difference lies in the row
//! lattice of the relation matrix.

mod hom;
mod subquotient;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use hom::{hom_group, GroupHom, HomGroup};
pub use subquotient::{congruence_kernel, is_exact, subquotient, Subquotient};

use crate::error::{Error, Result};
use crate::exactlin::{snf_raw, IntMatrix, Want};

/// Free rank and invariant factors `d₁ | d₂ | …`, all `> 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub free_rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl CanonicalForm {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.invariant_factors.iter().product())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.invariant_factors {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Coordinates adapted to the Smith form of the relations.
#[derive(Debug)]
struct Canon {
    /// `y = u·x` turns generator coordinates into adapted coordinates.
    u: IntMatrix,
    /// columns are the adapted generators in original coordinates
    uinv: IntMatrix,
    /// `orders[i]` for every adapted coordinate; zero means infinite order.
    orders: Vec<BigInt>,
    /// adapted coordinates of nonzero order ≠ 1, in order
    active: Vec<usize>,
}

struct Inner {
    n_gens: usize,
    relations: IntMatrix,
    canon: OnceLock<Canon>,
}

#[derive(Clone)]
pub struct FgAbGroup(Arc<Inner>);

impl PartialEq for FgAbGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n_gens == other.0.n_gens && self.0.relations == other.0.relations)
    }
}

impl Eq for FgAbGroup {}

impl Hash for FgAbGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.n_gens.hash(state);
        self.0.relations.hash(state);
    }
}

impl fmt::Debug for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FgAbGroup(gens={}, relations={})",
            self.0.n_gens, self.0.relations
        )
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical_form())
    }
}

impl FgAbGroup {
    /// `relations` has one row per relation and one column per generator.
    pub fn new(n_gens: usize, relations: IntMatrix) -> Result<Self> {
        if relations.cols() != n_gens {
            return Err(Error::Dimension(format!(
                "relation matrix has {} columns for {n_gens} generators",
                relations.cols()
            )));
        }
        Ok(Self::from_parts(n_gens, relations))
    }

    fn from_parts(n_gens: usize, relations: IntMatrix) -> Self {
        FgAbGroup(Arc::new(Inner {
            n_gens,
            relations,
            canon: OnceLock::new(),
        }))
    }

    pub fn trivial() -> Self {
        Self::free(0)
    }

    pub fn free(n: usize) -> Self {
        Self::from_parts(n, IntMatrix::zeros(0, n))
    }

    /// `ℤ/m` on one generator; `m = 0` gives `ℤ`.
    pub fn cyclic(m: u64) -> Self {
        if m == 0 {
            return Self::free(1);
        }
        Self::from_parts(1, IntMatrix::from_rows(&[[m as i64]], 1))
    }

    /// `ℤ^r ⊕ ℤ/d₁ ⊕ …` with the torsion generators first.
    pub fn from_invariants(free_rank: usize, factors: &[u64]) -> Self {
        let n = free_rank + factors.len();
        let mut rel = IntMatrix::zeros(factors.len(), n);
        for (i, &d) in factors.iter().enumerate() {
            rel[(i, i)] = BigInt::from(d);
        }
        Self::from_parts(n, rel)
    }

    pub fn n_gens(&self) -> usize {
        self.0.n_gens
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.0.relations
    }

    /// True when no relation row is nonzero, so the generators are a basis.
    pub fn is_free_presentation(&self) -> bool {
        self.0.relations.is_zero()
    }

    fn canon(&self) -> &Canon {
        self.0.canon.get_or_init(|| {
            let n = self.0.n_gens;
            let rt = self.0.relations.transpose();
            let r = snf_raw(
                &rt,
                Want {
                    u: true,
                    uinv: true,
                    ..Want::default()
                },
            );
            let mut orders = vec![BigInt::zero(); n];
            for (i, d) in r.diag.iter().enumerate() {
                orders[i] = d.clone();
            }
            let active = (0..n).filter(|&i| !orders[i].is_one()).collect();
            Canon {
                u: IntMatrix::new(n, n, r.u.expect("requested")).expect("square"),
                uinv: IntMatrix::new(n, n, r.uinv.expect("requested")).expect("square"),
                orders,
                active,
            }
        })
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let c = self.canon();
        let mut free_rank = 0;
        let mut invariant_factors = Vec::new();
        for &i in &c.active {
            if c.orders[i].is_zero() {
                free_rank += 1;
            } else {
                invariant_factors.push(c.orders[i].clone());
            }
        }
        CanonicalForm {
            free_rank,
            invariant_factors,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.0.n_gens == 0 || self.canonical_form().is_trivial()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.canonical_form().invariant_factors.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.canonical_form().free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.canonical_form().order()
    }

    pub fn is_isomorphic(&self, other: &FgAbGroup) -> bool {
        self.canonical_form() == other.canonical_form()
    }

    pub fn direct_sum(&self, other: &FgAbGroup) -> FgAbGroup {
        Self::from_parts(
            self.n_gens() + other.n_gens(),
            self.relations().block_diag(other.relations()),
        )
    }

    pub fn direct_sum_all(groups: &[FgAbGroup]) -> FgAbGroup {
        groups
            .iter()
            .fold(FgAbGroup::trivial(), |acc, g| acc.direct_sum(g))
    }

    /// Orders of the cyclic factors in [`FgAbGroup::reduce`] coordinates;
    /// zero marks a free factor.
    pub fn factor_orders(&self) -> Vec<BigInt> {
        let c = self.canon();
        c.active.iter().map(|&i| c.orders[i].clone()).collect()
    }

    fn check_len(&self, x: &[BigInt]) -> Result<()> {
        if x.len() != self.n_gens() {
            return Err(Error::Dimension(format!(
                "element of length {} in a group on {} generators",
                x.len(),
                self.n_gens()
            )));
        }
        Ok(())
    }

    /// Normal form of an element: one coordinate per cyclic factor, torsion
    /// coordinates reduced into `[0, d)`. Equal elements have equal normal forms.
    pub fn reduce(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(x)?;
        let c = self.canon();
        Ok(c.active
            .iter()
            .map(|&i| {
                let mut acc = BigInt::zero();
                for (a, b) in c.u.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                let d = &c.orders[i];
                if d.is_zero() {
                    acc
                } else {
                    acc.mod_floor(d)
                }
            })
            .collect())
    }

    /// Generator coordinates of the element with the given normal form.
    pub fn lift(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        let c = self.canon();
        if y.len() != c.active.len() {
            return Err(Error::Dimension(format!(
                "normal form of length {} for {} cyclic factors",
                y.len(),
                c.active.len()
            )));
        }
        let mut x = vec![BigInt::zero(); self.n_gens()];
        for (&i, yi) in c.active.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (r, xr) in x.iter_mut().enumerate() {
                let a = &c.uinv[(r, i)];
                if !a.is_zero() {
                    *xr += a * yi;
                }
            }
        }
        Ok(x)
    }

    /// Generator coordinates of the cyclic-factor generators, one per factor.
    pub fn factor_generators(&self) -> Vec<Vec<BigInt>> {
        let c = self.canon();
        c.active.iter().map(|&i| c.uinv.column(i)).collect()
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> Result<bool> {
        Ok(self.reduce(x)?.iter().all(Zero::is_zero))
    }

    pub fn elements_equal(&self, x: &[BigInt], y: &[BigInt]) -> Result<bool> {
        self.check_len(y)?;
        let d: Vec<BigInt> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.is_zero_element(&d)
    }

    /// All elements of a finite group as normal forms, in lexicographic order.
    pub fn enumerate(&self) -> Result<Vec<Vec<BigInt>>> {
        let orders = self.factor_orders();
        let mut radices = Vec::with_capacity(orders.len());
        for d in &orders {
            let r = d.to_u64().filter(|&r| r > 0).ok_or_else(|| {
                Error::Precondition(format!("group {self} is not finite"))
            })?;
            radices.push(r);
        }
        let total: u64 = radices.iter().product();
        let mut out = Vec::with_capacity(total as usize);
        let mut cur = vec![0u64; radices.len()];
        for _ in 0..total {
            out.push(cur.iter().map(|&c| BigInt::from(c)).collect());
            for k in (0..cur.len()).rev() {
                cur[k] += 1;
                if cur[k] < radices[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
        Ok(out)
    }

    /// Sum of two normal forms, again a normal form.
    pub fn add_reduced(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.factor_orders()
            .iter()
            .zip(a.iter().zip(b))
            .map(|(d, (x, y))| {
                let s = x + y;
                if d.is_zero() {
                    s
                } else {
                    s.mod_floor(d)
                }
            })
            .collect()
    }

    /// Additive order of an element; `None` for infinite order.
    pub fn element_order(&self, x: &[BigInt]) -> Result<Option<BigInt>> {
        let y = self.reduce(x)?;
        let mut acc = BigInt::one();
        for (d, c) in self.factor_orders().iter().zip(&y) {
            if c.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Ok(None);
            }
            let o = d / d.gcd(c);
            acc = acc.lcm(&o);
        }
        Ok(Some(acc.abs()))
    }
}
