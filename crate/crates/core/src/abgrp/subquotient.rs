use num_bigint::BigInt;

use super::{FgAbGroup, GroupHom};
use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, lattice_basis, IntMatrix, Solver};

/// A group `(S + R) / (Q + R)` cut out of a container presented on `Z^n`
/// with relation lattice `R`, together with coordinate maps both ways.
#[derive(Clone, Debug)]
pub struct Subquotient {
    /// presentation on the basis columns below
    pub group: FgAbGroup,
    /// basis of `S + R` as columns in container coordinates
    basis: IntMatrix,
    solver: Solver,
}

impl Subquotient {
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Container coordinates of a subquotient element.
    pub fn to_container(&self, c: &[BigInt]) -> Result<Vec<BigInt>> {
        self.basis.mul_vec(c)
    }

    /// Subquotient coordinates of a container vector lying in `S + R`.
    pub fn from_container(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        self.solver.solve(x)?.ok_or_else(|| {
            Error::Invalid("vector does not lie in the subgroup".into())
        })
    }

    pub fn contains(&self, x: &[BigInt]) -> Result<bool> {
        self.solver.contains(x)
    }

    /// Column-wise [`Subquotient::from_container`].
    pub fn from_container_columns(&self, xs: &IntMatrix) -> Result<IntMatrix> {
        self.solver
            .solve_all(xs)?
            .ok_or_else(|| Error::Invalid("vector does not lie in the subgroup".into()))
    }
}

impl GroupHom {
    /// The kernel as a subgroup of the source.
    pub fn kernel(&self) -> Result<Subquotient> {
        let k = congruence_kernel(self)?;
        subquotient(self.src(), &k, &IntMatrix::zeros(self.src().n_gens(), 0))
    }

    /// `dst / im(self)` on the generators of `dst`.
    pub fn cokernel(&self) -> FgAbGroup {
        let rel = self
            .dst()
            .relations()
            .vstack(&self.matrix().transpose())
            .expect("column counts agree");
        FgAbGroup::new(self.dst().n_gens(), rel).expect("shape")
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.kernel()?.group.is_trivial())
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_surjective() && self.is_injective()?)
    }
}

/// The image of the columns of `sub_gens` in `container`, modulo the image of
/// the columns of `quotient_rels`. The latter must lie in the former.
pub fn subquotient(
    container: &FgAbGroup,
    sub_gens: &IntMatrix,
    quotient_rels: &IntMatrix,
) -> Result<Subquotient> {
    let n = container.n_gens();
    if sub_gens.rows() != n || quotient_rels.rows() != n {
        return Err(Error::Dimension(format!(
            "generators must have {n} rows (got {} and {})",
            sub_gens.rows(),
            quotient_rels.rows()
        )));
    }
    let rt = container.relations().transpose();
    let basis = lattice_basis(&sub_gens.hstack(&rt)?);
    let solver = Solver::new(&basis);
    let q = quotient_rels.hstack(&rt)?;
    let mut rows = Vec::with_capacity(q.cols());
    for (j, c) in solver.solve_columns(&q)?.into_iter().enumerate() {
        let c = c.ok_or_else(|| {
            Error::Invalid(format!(
                "quotient generator {j} does not lie in the subgroup"
            ))
        })?;
        rows.push(c);
    }
    let k = basis.cols();
    let rel = IntMatrix::from_big_rows(&rows, k)?;
    Ok(Subquotient {
        group: FgAbGroup::new(k, rel)?,
        basis,
        solver,
    })
}

/// Basis (columns) of `{x ∈ Z^src : f(x) = 0 in dst}`, a lattice containing
/// the source relations.
pub fn congruence_kernel(f: &GroupHom) -> Result<IntMatrix> {
    let m = f.matrix();
    let rt = f.dst().relations().transpose();
    let n = m.cols();
    let big = m.hstack(&rt)?;
    let k = kernel_basis(&big);
    let top: Vec<usize> = (0..n).collect();
    let proj = k.select_rows(&top);
    Ok(lattice_basis(&proj))
}

/// Whether `A →a B →b C` is exact at `B`.
pub fn is_exact(a: &GroupHom, b: &GroupHom) -> Result<bool> {
    if a.dst() != b.src() {
        return Err(Error::Mismatch("maps do not meet in a common group".into()));
    }
    if !b.compose(a)?.is_zero() {
        return Ok(false);
    }
    let kernel = congruence_kernel(b)?;
    let image = a.matrix().hstack(&a.dst().relations().transpose())?;
    let solver = Solver::new(&image);
    Ok(solver.solve_all(&kernel)?.is_some())
}
