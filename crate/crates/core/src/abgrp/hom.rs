use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::FgAbGroup;
use crate::error::{Error, Result};
use crate::exactlin::IntMatrix;

/// A homomorphism given by the images of the source generators.
/// `matrix` is `dst.n_gens × src.n_gens`; column `j` is the image of generator `j`.
/// Equality and hashing compare presentations and matrices; use
/// [`GroupHom::equals`] for equality as maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupHom {
    src: FgAbGroup,
    dst: FgAbGroup,
    matrix: IntMatrix,
}

impl GroupHom {
    /// Checks shapes and that every relation of `src` maps into the relations of `dst`.
    pub fn new(src: FgAbGroup, dst: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        let f = Self::new_unchecked(src, dst, matrix)?;
        let rel = f.src.relations();
        for r in 0..rel.rows() {
            let img = f.matrix.mul_vec(rel.row(r))?;
            if !f.dst.is_zero_element(&img)? {
                return Err(Error::IllDefined(format!(
                    "relation {r} of the source is not sent into the target relations"
                )));
            }
        }
        Ok(f)
    }

    /// Shape-checked only; callers guarantee well-definedness.
    pub fn new_unchecked(src: FgAbGroup, dst: FgAbGroup, matrix: IntMatrix) -> Result<Self> {
        if matrix.rows() != dst.n_gens() || matrix.cols() != src.n_gens() {
            return Err(Error::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                dst.n_gens(),
                src.n_gens()
            )));
        }
        Ok(GroupHom { src, dst, matrix })
    }

    pub fn identity(g: &FgAbGroup) -> Self {
        GroupHom {
            src: g.clone(),
            dst: g.clone(),
            matrix: IntMatrix::identity(g.n_gens()),
        }
    }

    pub fn zero(src: &FgAbGroup, dst: &FgAbGroup) -> Self {
        GroupHom {
            src: src.clone(),
            dst: dst.clone(),
            matrix: IntMatrix::zeros(dst.n_gens(), src.n_gens()),
        }
    }

    pub fn src(&self) -> &FgAbGroup {
        &self.src
    }

    pub fn dst(&self) -> &FgAbGroup {
        &self.dst
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.matrix.mul_vec(x)
    }

    /// `self ∘ g`: apply `g` first.
    pub fn compose(&self, g: &GroupHom) -> Result<GroupHom> {
        if g.dst != self.src {
            return Err(Error::Mismatch(
                "codomain of the inner map is not the domain of the outer map".into(),
            ));
        }
        Ok(GroupHom {
            src: g.src.clone(),
            dst: self.dst.clone(),
            matrix: self.matrix.mul(&g.matrix)?,
        })
    }

    fn check_parallel(&self, other: &GroupHom) -> Result<()> {
        if self.src != other.src || self.dst != other.dst {
            return Err(Error::Mismatch("maps have different endpoints".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom {
            matrix: self.matrix.add(&other.matrix)?,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &GroupHom) -> Result<GroupHom> {
        self.check_parallel(other)?;
        Ok(GroupHom {
            matrix: self.matrix.sub(&other.matrix)?,
            ..self.clone()
        })
    }

    pub fn neg(&self) -> GroupHom {
        GroupHom {
            matrix: self.matrix.neg(),
            ..self.clone()
        }
    }

    pub fn scale(&self, c: &BigInt) -> GroupHom {
        GroupHom {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }

    /// Every generator lands in the target relations.
    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| {
            self.dst
                .is_zero_element(&self.matrix.column(j))
                .expect("shape checked")
        })
    }

    /// Equality as homomorphisms (not as matrices).
    pub fn equals(&self, other: &GroupHom) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// `self ⊕ other : A ⊕ C → B ⊕ D`.
    pub fn direct_sum(&self, other: &GroupHom) -> GroupHom {
        GroupHom {
            src: self.src.direct_sum(&other.src),
            dst: self.dst.direct_sum(&other.dst),
            matrix: self.matrix.block_diag(&other.matrix),
        }
    }
}

/// `Hom(A, B)` presented on the pairs of cyclic factors, with the
/// translation between its elements and [`GroupHom`] values.
#[derive(Clone, Debug)]
pub struct HomGroup {
    pub src: FgAbGroup,
    pub dst: FgAbGroup,
    pub group: FgAbGroup,
    /// one entry per generator of `group`: (source factor, target factor, unit image)
    slots: Vec<(usize, usize, BigInt)>,
}

pub fn hom_group(a: &FgAbGroup, b: &FgAbGroup) -> HomGroup {
    let oa = a.factor_orders();
    let ob = b.factor_orders();
    let mut slots = Vec::new();
    let mut orders = Vec::new();
    for (i, x) in oa.iter().enumerate() {
        for (j, y) in ob.iter().enumerate() {
            // Hom(Z/x, Z/y) with 0 meaning Z
            let (unit, order) = match (x.is_zero(), y.is_zero()) {
                (true, true) => (BigInt::from(1), BigInt::zero()),
                (true, false) => (BigInt::from(1), y.clone()),
                (false, true) => continue,
                (false, false) => {
                    let g = x.gcd(y);
                    if g == BigInt::from(1) {
                        continue;
                    }
                    (y / &g, g)
                }
            };
            slots.push((i, j, unit));
            orders.push(order);
        }
    }
    let n = slots.len();
    let torsion: Vec<usize> = (0..n).filter(|&k| !orders[k].is_zero()).collect();
    let mut rel = IntMatrix::zeros(torsion.len(), n);
    for (r, &k) in torsion.iter().enumerate() {
        rel[(r, k)] = orders[k].clone();
    }
    HomGroup {
        src: a.clone(),
        dst: b.clone(),
        group: FgAbGroup::new(n, rel).expect("shape"),
        slots,
    }
}

impl HomGroup {
    /// The homomorphism with coordinates `c` on the generators of `group`.
    pub fn to_hom(&self, c: &[BigInt]) -> Result<GroupHom> {
        if c.len() != self.slots.len() {
            return Err(Error::Dimension(format!(
                "Hom element of length {} for {} generators",
                c.len(),
                self.slots.len()
            )));
        }
        let na = self.src.factor_orders().len();
        let nb = self.dst.factor_orders().len();
        // matrix in factor coordinates, nb × na
        let mut phi = IntMatrix::zeros(nb, na);
        for ((i, j, unit), ck) in self.slots.iter().zip(c) {
            phi[(*j, *i)] += unit * ck;
        }
        let ga = self.src.clone();
        let ca = ga.canon();
        let cb = self.dst.canon();
        // generator coords of B-factors (columns) and A-factor coordinate rows
        let bcols = cb.uinv.select_columns(&cb.active);
        let arows = ca.u.select_rows(&ca.active);
        let m = bcols.mul(&phi)?.mul(&arows)?;
        GroupHom::new_unchecked(self.src.clone(), self.dst.clone(), m)
    }

    /// Coordinates of `f` on the generators of `group`.
    pub fn from_hom(&self, f: &GroupHom) -> Result<Vec<BigInt>> {
        if f.src() != &self.src || f.dst() != &self.dst {
            return Err(Error::Mismatch("map does not belong to this Hom group".into()));
        }
        let oa = self.src.factor_orders();
        let ob = self.dst.factor_orders();
        let gens = self.src.factor_generators();
        let images: Vec<Vec<BigInt>> = gens
            .iter()
            .map(|g| self.dst.reduce(&f.apply(g)?))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(self.slots.len());
        for (i, j, unit) in &self.slots {
            let c = &images[*i][*j];
            let (x, y) = (&oa[*i], &ob[*j]);
            let coord = if !x.is_zero() && !y.is_zero() {
                let g = x.gcd(y);
                (c / unit).mod_floor(&g)
            } else {
                c.clone()
            };
            out.push(coord);
        }
        Ok(out)
    }
}
