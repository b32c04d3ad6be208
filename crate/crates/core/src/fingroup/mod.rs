//! Exhaustive enumeration of finite matrix groups over `Z/p^k`, the p-core
//! generated by elements of order `p`, the logarithm set of those elements,
//! and the resulting Nori dimension.

mod arena;

use arena::MatrixArena;

use crate::error::{Error, Result};
use crate::expcore::{has_order_p, phi, trunc_log, NilpotentMatrix, UnipotentMatrix};
use crate::liealg::lie_closure;
use crate::modring::{FpSubspace, PrecisionContext, ResidueMatrix};

/// Default element budget; `|SL_2(Z/125)| = 1,875,000` fits.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Number of elements whose inverses are looked up after a BFS.
const INVERSE_SAMPLE: usize = 64;

/// All elements of a finite matrix group, in breadth-first discovery order.
#[derive(Clone)]
pub struct EnumeratedGroup {
    ctx: PrecisionContext,
    elements: MatrixArena,
    generators: Vec<ResidueMatrix>,
    cap: usize,
    depth: Option<usize>,
}

impl std::fmt::Debug for EnumeratedGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EnumeratedGroup")
            .field("ctx", &self.ctx)
            .field("order", &self.order())
            .field("generators", &self.generators)
            .finish()
    }
}

impl EnumeratedGroup {
    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Word length needed to reach every element from `I`, when the set was
    /// produced by a BFS over `generators`.
    pub fn bfs_depth(&self) -> Option<usize> {
        self.depth
    }

    pub fn contains(&self, g: &ResidueMatrix) -> bool {
        g.ctx() == &self.ctx && self.elements.contains(g.entries())
    }

    pub fn element(&self, idx: usize) -> ResidueMatrix {
        ResidueMatrix::from_reduced(&self.ctx, self.elements.row(idx))
    }

    /// Elements in discovery order.
    pub fn iter(&self) -> impl ExactSizeIterator<Item = ResidueMatrix> + '_ {
        (0..self.order()).map(|i| self.element(i))
    }

    /// Calls `f` on the raw entries of each element until it returns `false`.
    pub(crate) fn visit_raw(&self, f: impl FnMut(&[u32]) -> bool) {
        self.elements.visit(f)
    }

    /// Elements in lexicographic order of their entries.
    pub fn sorted_elements(&self) -> Vec<ResidueMatrix> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort();
        v
    }

    pub fn is_subset_of(&self, other: &EnumeratedGroup) -> bool {
        if self.ctx != other.ctx {
            return false;
        }
        let mut all = true;
        self.elements.visit(|e| {
            all = other.elements.contains(e);
            all
        });
        all
    }

    /// Equality as element sets, ignoring discovery order.
    pub fn same_elements(&self, other: &EnumeratedGroup) -> bool {
        self.order() == other.order() && self.is_subset_of(other)
    }

    /// Image under reduction mod `p^j`, obtained by reducing every element.
    pub fn reduce_to(&self, j: u32) -> Result<EnumeratedGroup> {
        if j == 0 || j > self.ctx.k() {
            return Err(Error::PrecisionTooLow {
                need: j,
                have: self.ctx.k(),
            });
        }
        let target = self.ctx.with_precision(j)?;
        if j == self.ctx.k() {
            return Ok(self.clone());
        }
        let m = target.modulus() as u32;
        let mut image = MatrixArena::new(self.ctx.n() * self.ctx.n(), target.modulus());
        let mut buf = vec![0u32; self.ctx.n() * self.ctx.n()];
        self.elements.visit(|e| {
            for (b, &x) in buf.iter_mut().zip(e) {
                *b = x % m;
            }
            image.insert(&buf);
            true
        });
        let generators = self
            .generators
            .iter()
            .map(|g| g.reduce_level(j))
            .collect::<Result<_>>()?;
        Ok(EnumeratedGroup {
            ctx: target,
            elements: image,
            generators,
            cap: self.cap,
            depth: None,
        })
    }

    /// Checks closure under products and inverses.
    ///
    /// Every pair is checked when `order <= full_limit`; otherwise `samples`
    /// evenly spaced pairs are.
    pub fn verify_group_axioms(&self, full_limit: usize, samples: usize) -> Result<()> {
        let n = self.ctx.n();
        let len = self.order();
        let mut prod = vec![0u32; n * n];
        let mut a = vec![0u32; n * n];
        let mut b = vec![0u32; n * n];
        let mut check = |i: usize, j: usize, prod: &mut [u32]| -> Result<()> {
            self.elements.read(i, &mut a);
            self.elements.read(j, &mut b);
            self.ctx.mul_into(&a, &b, prod);
            if !self.elements.contains(prod) {
                return Err(Error::violation(
                    "closure under multiplication",
                    format!("{:?} * {:?}", self.element(i), self.element(j)),
                ));
            }
            Ok(())
        };
        if len <= full_limit {
            for i in 0..len {
                for j in 0..len {
                    check(i, j, &mut prod)?;
                }
            }
        } else {
            for s in 0..samples {
                let i = s * len / samples;
                let j = (s * 7919 + len / 2) % len;
                check(i, j, &mut prod)?;
            }
        }
        self.verify_inverses(if len <= full_limit { len } else { samples })
    }

    fn verify_inverses(&self, samples: usize) -> Result<()> {
        let len = self.order();
        let samples = samples.min(len);
        for s in 0..samples {
            let g = self.element(s * len / samples);
            let gi = g.inverse()?;
            if !self.contains(&gi) {
                return Err(Error::violation(
                    "closure under inverses",
                    format!("inverse of {g:?} missing"),
                ));
            }
        }
        Ok(())
    }
}

/// Breadth-first closure of `I` under left multiplication by `generators`.
///
/// The result is a group because the generators are invertible and the
/// set is finite. Discovery order is a function of the inputs only.
pub fn enumerate(
    ctx: &PrecisionContext,
    generators: &[ResidueMatrix],
    cap: usize,
) -> Result<EnumeratedGroup> {
    for g in generators {
        ctx.ensure_same(g.ctx())?;
        if !g.is_invertible() {
            return Err(Error::NotInvertible);
        }
    }
    if cap == 0 {
        return Err(Error::CapExceeded { cap });
    }
    let n = ctx.n();
    let m = ctx.modulus();
    let mut elements = MatrixArena::new(n * n, m);
    elements.insert(ResidueMatrix::identity(ctx).entries());

    let mut current = vec![0u32; n * n];
    let mut next = vec![0u32; n * n];
    let mut layer_start = 0;
    let mut depth = 0;
    loop {
        let layer_end = elements.len();
        for idx in layer_start..layer_end {
            elements.read(idx, &mut current);
            for g in generators {
                ctx.mul_into(g.entries(), &current, &mut next);
                if elements.insert(&next) && elements.len() > cap {
                    return Err(Error::CapExceeded { cap });
                }
            }
        }
        if elements.len() == layer_end {
            break;
        }
        depth += 1;
        layer_start = layer_end;
    }

    let group = EnumeratedGroup {
        ctx: ctx.clone(),
        elements,
        generators: generators.to_vec(),
        cap,
        depth: Some(depth),
    };
    group.verify_inverses(INVERSE_SAMPLE)?;
    Ok(group)
}

/// Elements `g != I` with `g^p = I`, sorted by entries.
pub fn order_p_elements(group: &EnumeratedGroup) -> Result<Vec<UnipotentMatrix>> {
    group.ctx().ensure_field()?;
    let mut out: Vec<UnipotentMatrix> = group
        .iter()
        .filter(has_order_p)
        .map(|g| {
            UnipotentMatrix::new(g).map_err(|_| {
                Error::violation(
                    "order p implies unipotent",
                    "element of order p is not unipotent",
                )
            })
        })
        .collect::<Result<_>>()?;
    out.sort();
    Ok(out)
}

/// The subgroup generated by all elements of order `p`.
///
/// Generators are taken greedily in sorted order, skipping any element
/// already in the subgroup built so far; the recorded generator list is that
/// irredundant subset.
pub fn p_core(group: &EnumeratedGroup, cap: usize) -> Result<EnumeratedGroup> {
    let candidates = order_p_elements(group)?;
    subgroup_generated_by(
        group.ctx(),
        candidates.iter().map(UnipotentMatrix::matrix),
        cap,
    )
}

fn subgroup_generated_by<'a>(
    ctx: &PrecisionContext,
    candidates: impl IntoIterator<Item = &'a ResidueMatrix>,
    cap: usize,
) -> Result<EnumeratedGroup> {
    let mut gens = Vec::new();
    let mut current = enumerate(ctx, &gens, cap)?;
    for g in candidates {
        if !current.contains(g) {
            gens.push(g.clone());
            current = enumerate(ctx, &gens, cap)?;
        }
    }
    Ok(current)
}

/// `N(G) = { log u : u in G, u^p = I }`, including `0`, sorted.
pub fn nilpotent_log_set(group: &EnumeratedGroup) -> Result<Vec<NilpotentMatrix>> {
    let mut logs: Vec<NilpotentMatrix> = order_p_elements(group)?.iter().map(trunc_log).collect();
    logs.push(NilpotentMatrix::new(ResidueMatrix::zero(group.ctx()))?);
    logs.sort();
    logs.dedup();
    Ok(logs)
}

/// Span and Lie closure of `N(G)`; the Nori dimension is the latter.
#[derive(Clone, Debug)]
pub struct NdimReport {
    pub log_set: Vec<NilpotentMatrix>,
    pub span_dim: usize,
    pub lie_dim: usize,
    pub ndim: usize,
    /// `span_dim == lie_dim`.
    pub agreement: bool,
}

pub fn ndim(group: &EnumeratedGroup) -> Result<NdimReport> {
    let log_set = nilpotent_log_set(group)?;
    let ctx = group.ctx();
    let mats: Vec<ResidueMatrix> = log_set.iter().map(|x| x.matrix().clone()).collect();
    let span_dim = FpSubspace::span(ctx, &mats)?.dim();
    let lie_dim = lie_closure(ctx, &mats)?.dim();
    Ok(NdimReport {
        log_set,
        span_dim,
        lie_dim,
        ndim: lie_dim,
        agreement: span_dim == lie_dim,
    })
}

/// The one-parameter generators `{ phi_x(t) : x in N, t in F_p } \ {I}`, sorted.
pub fn phi_generators(
    ctx: &PrecisionContext,
    logs: &[NilpotentMatrix],
) -> Result<Vec<ResidueMatrix>> {
    ctx.ensure_field()?;
    let mut gens = Vec::new();
    for x in logs {
        ctx.ensure_same(x.matrix().ctx())?;
        for t in 0..ctx.p() as i64 {
            let u = phi(x, t).into_matrix();
            if !u.is_identity() {
                gens.push(u);
            }
        }
    }
    gens.sort();
    gens.dedup();
    Ok(gens)
}

/// BFS closure of the `F_p`-points of the one-parameter subgroups `phi_x`.
pub fn exp_generated_subgroup(
    ctx: &PrecisionContext,
    logs: &[NilpotentMatrix],
    cap: usize,
) -> Result<EnumeratedGroup> {
    let gens = phi_generators(ctx, logs)?;
    enumerate(ctx, &gens, cap)
}

/// Least `e >= 1` with `g^e = I`, searching up to `bound`.
pub fn element_order(g: &ResidueMatrix, bound: u64) -> Result<u64> {
    if !g.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let mut power = g.clone();
    for e in 1..=bound {
        if power.is_identity() {
            return Ok(e);
        }
        power = &power * g;
    }
    Err(Error::BoundExceeded { bound })
}
