//! Congruence filtrations of p-adic matrix groups, seen through their finite
//! quotients mod `p^k`.
//!
//! A closed subgroup of `GL_n(Z_p)` is represented by one BFS at the top
//! precision; lower levels are reductions of that element set. The
//! successive quotient `F_m / F_{m+1}` is identified with the subspace of
//! `M_n(F_p)` spanned by `(g - I) / p^m` over `g = I (mod p^m)`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::expcore::{exp_polynomial, trunc_exp, NilpotentMatrix};
use crate::fingroup::{enumerate, ndim, EnumeratedGroup};
use crate::modring::arith::exact_log;
use crate::modring::{FpSubspace, PrecisionContext, ResidueMatrix};
use crate::sampling;

#[derive(Clone, Debug)]
pub struct FiltrationLevel {
    pub m: u32,
    pub subspace: FpSubspace,
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct FiltrationReport {
    pub ctx: PrecisionContext,
    /// Levels `m = 1..k-1`.
    pub levels: Vec<FiltrationLevel>,
    /// `|G mod p^j|` for `j = 1..k`.
    pub group_orders: Vec<u64>,
    pub ndim_mod_p: usize,
}

impl FiltrationReport {
    pub fn dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim).collect()
    }

    /// Checks `dim V_m <= d` for every level, and `dim V_m = d` when the Nori
    /// dimension already reaches `d`.
    pub fn check_declared_dim(&self, declared: usize) -> Result<()> {
        for level in &self.levels {
            if level.dim > declared {
                return Err(Error::violation(
                    "dim V_m <= declared dimension",
                    format!("m = {}: dim {} > {declared}", level.m, level.dim),
                ));
            }
            if self.ndim_mod_p == declared && level.dim != declared {
                return Err(Error::violation(
                    "Ndim = dim forces dim V_m = dim",
                    format!("m = {}: dim {} != {declared}", level.m, level.dim),
                ));
            }
        }
        Ok(())
    }
}

/// The subspace of `M_n(F_p)` identified with `F_m G / F_{m+1} G`.
pub fn filtration_subspace(group: &EnumeratedGroup, m: u32) -> Result<FpSubspace> {
    let ctx = group.ctx();
    if m == 0 {
        return Err(Error::InvalidInput(
            "filtration level m must be positive".into(),
        ));
    }
    if m + 1 > ctx.k() {
        return Err(Error::PrecisionTooLow {
            need: m + 1,
            have: ctx.k(),
        });
    }
    let n = ctx.n();
    let p = ctx.p() as u32;
    let level = ctx.p_power(m + 1) as u32;
    let step = ctx.p_power(m) as u32;
    let field = ctx.with_precision(1)?;
    let mut space = FpSubspace::zero(&field)?;
    let mut v = vec![0u32; n * n];

    // Entries of g - I reduced mod p^{m+1}, kept only when divisible by p^m.
    group.visit_raw(|g| {
        for (idx, (&e, out)) in g.iter().zip(v.iter_mut()).enumerate() {
            let diag = u32::from(idx / n == idx % n);
            let d = (e % level + level - diag) % level;
            if !d.is_multiple_of(step) {
                return true;
            }
            *out = (d / step) % p;
        }
        space.insert_entries(&v);
        space.dim() < n * n
    });
    Ok(space)
}

/// `|G mod p^j|` for `j = 1..k`.
pub fn level_orders(group: &EnumeratedGroup) -> Result<Vec<u64>> {
    let k = group.ctx().k();
    (1..=k)
        .map(|j| {
            if j == k {
                Ok(group.order() as u64)
            } else {
                group.reduce_to(j).map(|g| g.order() as u64)
            }
        })
        .collect()
}

fn exponent_steps(ctx: &PrecisionContext, orders: &[u64]) -> Result<Vec<usize>> {
    orders
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let (lo, hi) = (w[0], w[1]);
            let ratio = (hi % lo == 0)
                .then(|| hi / lo)
                .and_then(|r| exact_log(r, ctx.p()));
            ratio.map(|e| e as usize).ok_or_else(|| {
                Error::violation(
                    "level orders grow by powers of p",
                    format!("|G mod p^{}| = {lo}, |G mod p^{}| = {hi}", i + 1, i + 2),
                )
            })
        })
        .collect()
}

/// Enumerates `<generators>` mod `p^k` and assembles the filtration, checking
/// the inclusion chain, the Nori-dimension lower bound, and the order growth
/// before returning.
pub fn filtration_report(
    ctx: &PrecisionContext,
    generators: &[ResidueMatrix],
    cap: usize,
) -> Result<FiltrationReport> {
    if ctx.k() < 2 {
        return Err(Error::PrecisionTooLow {
            need: 2,
            have: ctx.k(),
        });
    }
    let group = enumerate(ctx, generators, cap)?;
    filtration_report_of(&group)
}

/// As [`filtration_report`], for an enumeration already at hand.
pub fn filtration_report_of(group: &EnumeratedGroup) -> Result<FiltrationReport> {
    let ctx = group.ctx();
    let k = ctx.k();
    if k < 2 {
        return Err(Error::PrecisionTooLow { need: 2, have: k });
    }
    let group_orders = level_orders(group)?;
    let levels: Vec<FiltrationLevel> = (1..k)
        .map(|m| {
            filtration_subspace(group, m).map(|subspace| FiltrationLevel {
                m,
                dim: subspace.dim(),
                subspace,
            })
        })
        .collect::<Result<_>>()?;
    let ndim_mod_p = ndim(&group.reduce_to(1)?)?.ndim;

    let report = FiltrationReport {
        ctx: ctx.clone(),
        levels,
        group_orders,
        ndim_mod_p,
    };
    verify_report(&report)?;
    Ok(report)
}

fn verify_report(report: &FiltrationReport) -> Result<()> {
    for pair in report.levels.windows(2) {
        if !pair[0].subspace.is_subspace_of(&pair[1].subspace)? {
            return Err(Error::violation(
                "V_m contained in V_{m+1}",
                format!(
                    "m = {}: {:?} not in {:?}",
                    pair[0].m, pair[0].subspace, pair[1].subspace
                ),
            ));
        }
    }
    for level in &report.levels {
        if report.ndim_mod_p > level.dim {
            return Err(Error::violation(
                "Ndim <= dim V_m",
                format!(
                    "m = {}: Ndim {} > dim {}",
                    level.m, report.ndim_mod_p, level.dim
                ),
            ));
        }
    }
    let steps = exponent_steps(&report.ctx, &report.group_orders)?;
    for (level, step) in report.levels.iter().zip(steps) {
        if step != level.dim {
            return Err(Error::violation(
                "|G mod p^{m+1}| / |G mod p^m| = p^{dim V_m}",
                format!("m = {}: exponent {step}, dim {}", level.m, level.dim),
            ));
        }
    }
    Ok(())
}

/// `log_p |G mod p^{j+1}| - log_p |G mod p^j|` for `j = 1..k-1`.
pub fn growth_profile(
    ctx: &PrecisionContext,
    generators: &[ResidueMatrix],
    cap: usize,
) -> Result<Vec<usize>> {
    if ctx.k() < 2 {
        return Err(Error::PrecisionTooLow {
            need: 2,
            have: ctx.k(),
        });
    }
    let group = enumerate(ctx, generators, cap)?;
    growth_profile_of(&group)
}

pub fn growth_profile_of(group: &EnumeratedGroup) -> Result<Vec<usize>> {
    exponent_steps(group.ctx(), &level_orders(group)?)
}

/// Whether `(I + p^m A)^p = I + p^{m+1} A (mod p^{m+2})`.
pub fn check_power_congruence(a: &ResidueMatrix, m: u32) -> Result<bool> {
    let have = a.ctx().k();
    if m == 0 {
        return Err(Error::InvalidInput(
            "congruence level m must be positive".into(),
        ));
    }
    if have < m + 2 {
        return Err(Error::PrecisionTooLow { need: m + 2, have });
    }
    let a = a.reduce_level(m + 2)?;
    let ctx = a.ctx();
    let id = ResidueMatrix::identity(ctx);
    let p = ctx.p() as i64;
    let lhs = (&id + &a.scale(p.pow(m))).pow(ctx.p());
    let rhs = &id + &a.scale(p.pow(m + 1));
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftLemmaOutcome {
    pub holds: bool,
    /// `(A^{p^k} - I) / p^k mod p`, when the division is exact.
    pub m: Option<ResidueMatrix>,
    /// The lift `A` that was tested, at precision `k + 1`.
    pub lift: ResidueMatrix,
}

/// Tests `A^{p^k} = I + p^k M (mod p^{k+1})` with `M = x (mod p)` for
/// `A = exp(x~) + p B`, where `x~` is the entrywise lift of `x` and `B` the
/// given perturbation.
pub fn verify_lift_lemma(
    x: &NilpotentMatrix,
    k: u32,
    perturbation: &ResidueMatrix,
) -> Result<LiftLemmaOutcome> {
    let field = x.matrix().ctx();
    field.ensure_field()?;
    if field.p() < 2 * field.n() as u64 {
        return Err(Error::InvalidContext(format!(
            "the lift lemma needs p >= 2n, have {field}"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidInput(
            "lemma exponent k must be positive".into(),
        ));
    }
    let b = perturbation;
    if b.n() != field.n() || b.ctx().p() != field.p() {
        return Err(Error::ContextMismatch {
            left: field.to_string(),
            right: b.ctx().to_string(),
        });
    }
    let b = if b.ctx().k() > k + 1 {
        b.reduce_level(k + 1)?
    } else {
        b.lift(k + 1)?
    };
    let lifted_x = x.matrix().lift(k + 1)?;
    let a = &exp_polynomial(&lifted_x) + &b.scale(field.p() as i64);
    lift_lemma_for(&a, x, k)
}

/// The lemma's conclusion for an arbitrary `A` at precision `k + 1`.
pub fn lift_lemma_for(a: &ResidueMatrix, x: &NilpotentMatrix, k: u32) -> Result<LiftLemmaOutcome> {
    if a.ctx().k() != k + 1 {
        return Err(Error::PrecisionTooLow {
            need: k + 1,
            have: a.ctx().k(),
        });
    }
    if a.reduce_level(1)? != *trunc_exp(x).matrix() {
        return Err(Error::NotALift);
    }
    let ctx = a.ctx();
    let power = a.pow(ctx.p_power(k));
    let diff = &power - &ResidueMatrix::identity(ctx);
    let (holds, m) = match diff.divide_by_p_power(k) {
        Ok(m) => (m == *x.matrix(), Some(m)),
        Err(Error::NotDivisible { .. }) => (false, None),
        Err(e) => return Err(e),
    };
    Ok(LiftLemmaOutcome {
        holds,
        m,
        lift: a.clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaBatch {
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<LiftLemmaOutcome>,
}

/// Runs the lift lemma on seeded random nilpotent `x` and perturbations.
pub fn lemma_batch<R: Rng>(
    field: &PrecisionContext,
    k: u32,
    trials: usize,
    rng: &mut R,
) -> Result<LemmaBatch> {
    field.ensure_field()?;
    let top = field.with_precision(k + 1)?;
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..trials {
        let x = sampling::random_nilpotent(field, rng);
        let b = sampling::random_matrix(&top, rng);
        let outcome = verify_lift_lemma(&x, k, &b)?;
        if !outcome.holds {
            failures += 1;
            first_failure.get_or_insert(outcome);
        }
    }
    Ok(LemmaBatch {
        trials,
        failures,
        first_failure,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceBatch {
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<(ResidueMatrix, u32)>,
}

/// `check_power_congruence` on seeded random `A` at the context precision,
/// for each listed `m`.
pub fn congruence_batch<R: Rng>(
    ctx: &PrecisionContext,
    levels: &[u32],
    trials: usize,
    rng: &mut R,
) -> Result<CongruenceBatch> {
    let mut failures = 0;
    let mut first_failure = None;
    let mut count = 0;
    for _ in 0..trials {
        let a = sampling::random_matrix(ctx, rng);
        for &m in levels {
            count += 1;
            if !check_power_congruence(&a, m)? {
                failures += 1;
                first_failure.get_or_insert((a.clone(), m));
            }
        }
    }
    Ok(CongruenceBatch {
        trials: count,
        failures,
        first_failure,
    })
}
