use std::fmt;

use super::arith::mod_inv;
use super::context::PrecisionContext;
use super::matrix::ResidueMatrix;
use crate::error::Result;

/// A subspace of `M_n(F_p) = F_p^{n^2}`, stored as a reduced row-echelon basis.
///
/// Rows are kept sorted by pivot column with each pivot normalized to 1 and
/// cleared from every other row, so equal subspaces have identical bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSubspace {
    ctx: PrecisionContext,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl FpSubspace {
    pub fn zero(ctx: &PrecisionContext) -> Result<Self> {
        ctx.ensure_field()?;
        Ok(FpSubspace {
            ctx: ctx.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        })
    }

    /// The `F_p`-span of the given matrices, flattened row-major.
    pub fn span<'a, I>(ctx: &PrecisionContext, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a ResidueMatrix>,
    {
        let mut space = Self::zero(ctx)?;
        for v in vectors {
            space.insert(v)?;
        }
        Ok(space)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Ambient dimension `n^2`.
    pub fn ambient_dim(&self) -> usize {
        self.ctx.n() * self.ctx.n()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_matrices(&self) -> Vec<ResidueMatrix> {
        self.rows
            .iter()
            .map(|r| ResidueMatrix::from_reduced(&self.ctx, r.clone()))
            .collect()
    }

    /// Adds `v` to the subspace. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &ResidueMatrix) -> Result<bool> {
        self.ctx.ensure_same(v.ctx())?;
        Ok(self.insert_entries(v.entries()))
    }

    pub(crate) fn insert_entries(&mut self, v: &[u32]) -> bool {
        let p = self.ctx.p();
        let mut w = self.residual(v);
        let Some(lead) = w.iter().position(|&e| e != 0) else {
            return false;
        };
        let s = mod_inv(w[lead] as u64, p).expect("nonzero in a prime field");
        for e in w.iter_mut() {
            *e = (*e as u64 * s % p) as u32;
        }
        for row in &mut self.rows {
            let f = row[lead] as u64;
            if f != 0 {
                for (r, &x) in row.iter_mut().zip(&w) {
                    *r = ((*r as u64 + (p - f) * x as u64) % p) as u32;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < lead);
        self.rows.insert(at, w);
        self.pivots.insert(at, lead);
        true
    }

    /// `v` minus its projection onto the basis along pivot columns.
    fn residual(&self, v: &[u32]) -> Vec<u32> {
        let p = self.ctx.p();
        let mut w: Vec<u32> = v.iter().map(|&e| (e as u64 % p) as u32).collect();
        for (row, &q) in self.rows.iter().zip(&self.pivots) {
            let f = w[q] as u64;
            if f != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p - f) * r as u64) % p) as u32;
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &ResidueMatrix) -> Result<bool> {
        self.ctx.ensure_same(v.ctx())?;
        Ok(self.contains_entries(v.entries()))
    }

    pub(crate) fn contains_entries(&self, v: &[u32]) -> bool {
        self.residual(v).iter().all(|&e| e == 0)
    }

    /// Inclusion `self <= other`.
    pub fn is_subspace_of(&self, other: &FpSubspace) -> Result<bool> {
        self.ctx.ensure_same(&other.ctx)?;
        Ok(self.rows.iter().all(|r| other.contains_entries(r)))
    }
}

impl fmt::Debug for FpSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FpSubspace")
            .field("ctx", &self.ctx)
            .field("dim", &self.dim())
            .field("basis", &self.rows)
            .finish()
    }
}
