//! The acceptance battery: exhaustive small-case oracles, catalog checks,
//! filtration and congruence identities, and a determinism re-run.
//!
//! Every criterion reports what it expected, what it observed, and a verdict.
//! Errors such as an exceeded element budget become failing verdicts.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::catalog::{
    enumerate_entry, ndim_check, point_count_bounds_check, Catalog, CatalogEntry,
};
use crate::error::Result;
use crate::expcore::{
    has_order_p, is_nilpotent, is_unipotent, trunc_exp, trunc_log, NilpotentMatrix, UnipotentMatrix,
};
use crate::fingroup::{exp_generated_subgroup, ndim, nilpotent_log_set, p_core, DEFAULT_CAP};
use crate::modring::{PrecisionContext, ResidueMatrix};
use crate::padic::{congruence_batch, filtration_report_of, growth_profile_of, lemma_batch};
use crate::sampling::{self, DEFAULT_SEED};

/// Budget for the catalog sweep, which includes `|SL_3(F_7)| = 5,630,688`.
pub const CATALOG_SWEEP_CAP: usize = 6_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatterySettings {
    pub seed: u64,
    /// Replaces every element budget when set.
    pub cap: Option<usize>,
}

impl Default for BatterySettings {
    fn default() -> Self {
        BatterySettings {
            seed: DEFAULT_SEED,
            cap: None,
        }
    }
}

impl BatterySettings {
    fn cap(&self, default: usize) -> usize {
        self.cap.unwrap_or(default)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Clone, Debug)]
pub struct BatteryReport {
    pub criteria: Vec<Criterion>,
    /// Wall time per criterion, parallel to `criteria`. Not part of any
    /// output document.
    pub timings: Vec<Duration>,
}

impl BatteryReport {
    pub fn all_pass(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.criteria.iter().filter(|c| !c.pass).count()
    }

    /// Fixed-width table of criterion, expected, observed, verdict and time.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<3} {:<34} {:<6} {:>9}\n",
            "#", "criterion", "verdict", "time"
        );
        for (c, t) in self.criteria.iter().zip(&self.timings) {
            out.push_str(&format!(
                "{:<3} {:<34} {:<6} {:>8.3}s\n    expected: {}\n    observed: {}\n",
                c.id,
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                t.as_secs_f64(),
                c.expected,
                c.observed
            ));
        }
        out
    }
}

fn judge(
    id: u32,
    name: &str,
    expected: impl Into<String>,
    check: impl FnOnce() -> Result<(String, bool)>,
) -> Criterion {
    let (observed, pass) = match check() {
        Ok(r) => r,
        Err(e) => (format!("error: {e}"), false),
    };
    Criterion {
        id,
        name: name.into(),
        expected: expected.into(),
        observed,
        pass,
    }
}

fn entry(name: &str) -> Result<&'static CatalogEntry> {
    Catalog::builtin()
        .get(name)
        .ok_or_else(|| crate::Error::InvalidInput(format!("catalog has no entry {name}")))
}

/// All `p^(n*n)` matrices of `M_n(F_p)`, in lexicographic order.
fn all_matrices(ctx: &PrecisionContext) -> impl Iterator<Item = ResidueMatrix> + '_ {
    let n2 = (ctx.n() * ctx.n()) as u32;
    let p = ctx.p() as i64;
    (0..p.pow(n2)).map(move |mut code| {
        let mut v = vec![0i64; n2 as usize];
        for e in v.iter_mut().rev() {
            *e = code % p;
            code /= p;
        }
        ResidueMatrix::from_ints(ctx, &v).expect("shape is n x n")
    })
}

/// Counts of nilpotents, unipotents, and round-trip failures
/// (`log(exp x) != x` or `exp(log u) != u`) for the given exp/log pair.
pub fn round_trip_failures(
    ctx: &PrecisionContext,
    exp: impl Fn(&ResidueMatrix) -> ResidueMatrix,
    log: impl Fn(&ResidueMatrix) -> ResidueMatrix,
) -> (usize, usize, usize) {
    let (mut nilpotents, mut unipotents, mut failures) = (0, 0, 0);
    for m in all_matrices(ctx) {
        if is_nilpotent(&m) {
            nilpotents += 1;
            failures += usize::from(log(&exp(&m)) != m);
        }
        if is_unipotent(&m) {
            unipotents += 1;
            failures += usize::from(exp(&log(&m)) != m);
        }
    }
    (nilpotents, unipotents, failures)
}

fn criterion_1() -> Criterion {
    judge(
        1,
        "exp/log bijection M_2(F_5)",
        "25 nilpotent (oracle 25), 25 unipotent, 0 round-trip failures",
        || {
            let ctx = PrecisionContext::new(2, 5, 1)?;
            // A 2x2 matrix is nilpotent iff its trace and determinant vanish.
            let oracle = all_matrices(&ctx)
                .filter(|m| {
                    let (a, b, c, d) = (
                        m.get(0, 0) as i64,
                        m.get(0, 1) as i64,
                        m.get(1, 0) as i64,
                        m.get(1, 1) as i64,
                    );
                    (a + d) % 5 == 0 && (a * d - b * c).rem_euclid(5) == 0
                })
                .count();
            let (count, unipotents, failures) = round_trip_failures(
                &ctx,
                |x| trunc_exp(&NilpotentMatrix::new(x.clone()).expect("filtered")).into_matrix(),
                |u| trunc_log(&UnipotentMatrix::new(u.clone()).expect("filtered")).into_matrix(),
            );
            Ok((
            format!("{count} nilpotent (oracle {oracle}), {unipotents} unipotent, {failures} round-trip failures"),
            count == 25 && oracle == 25 && unipotents == 25 && failures == 0,
        ))
        },
    )
}

fn criterion_2() -> Criterion {
    judge(
        2,
        "order p <=> unipotent GL_2(F_5)",
        "480 invertible (oracle 480), 0 mismatches",
        || {
            let ctx = PrecisionContext::new(2, 5, 1)?;
            let id = ResidueMatrix::identity(&ctx);
            let mut invertible = 0;
            let mut oracle = 0;
            let mut mismatches = 0;
            let mut order_p = 0;
            for g in all_matrices(&ctx) {
                let det = (g.get(0, 0) as i64 * g.get(1, 1) as i64
                    - g.get(0, 1) as i64 * g.get(1, 0) as i64)
                    .rem_euclid(5);
                if det != 0 {
                    oracle += 1;
                }
                if !g.is_invertible() {
                    continue;
                }
                invertible += 1;
                let lhs = has_order_p(&g);
                let rhs = is_nilpotent(&(&g - &id)) && g != id;
                order_p += usize::from(lhs);
                mismatches += usize::from(lhs != rhs);
            }
            Ok((
            format!("{invertible} invertible (oracle {oracle}), {mismatches} mismatches, {order_p} of order p"),
            invertible == 480 && oracle == 480 && mismatches == 0,
        ))
        },
    )
}

fn criterion_3(s: &BatterySettings) -> Criterion {
    let expected =
        "SL2 p=5,7,11: 3; Heisenberg p=5: 3; Torus1 p=5: 0; span = lie for SL2, Heisenberg";
    judge(3, "Nori dimension on catalog", expected, || {
        let cap = s.cap(DEFAULT_CAP);
        let mut parts = Vec::new();
        let mut pass = true;
        let cases: [(&str, u64, usize, bool); 5] = [
            ("SL2", 5, 3, true),
            ("SL2", 7, 3, true),
            ("SL2", 11, 3, true),
            ("Heisenberg", 5, 3, true),
            ("Torus1", 5, 0, false),
        ];
        for (name, p, want, needs_agreement) in cases {
            let g = enumerate_entry(entry(name)?, p, 1, cap)?;
            let r = ndim(&g)?;
            pass &= r.ndim == want && (!needs_agreement || r.agreement);
            parts.push(format!(
                "{name} p={p}: ndim {} span {} lie {} order {}",
                r.ndim,
                r.span_dim,
                r.lie_dim,
                g.order()
            ));
        }
        Ok((parts.join("; "), pass))
    })
}

fn criterion_4(s: &BatterySettings) -> Criterion {
    let expected = "ndim <= known_dim for every entry at p=5,7; strict for Torus1, Borel2";
    judge(4, "Ndim <= dim on catalog", expected, || {
        let cap = s.cap(CATALOG_SWEEP_CAP);
        let mut parts = Vec::new();
        let mut pass = true;
        for e in &Catalog::builtin().entries {
            for p in [5, 7] {
                let c = ndim_check(e, p, cap)?;
                let strict = matches!(e.name.as_str(), "Torus1" | "Borel2");
                let ok = c.bounded && (!strict || c.report.ndim < c.known_dim);
                pass &= ok;
                parts.push(format!(
                    "{} p={p}: {}<={}{}",
                    e.name,
                    c.report.ndim,
                    c.known_dim,
                    if ok { "" } else { " FAIL" }
                ));
            }
        }
        Ok((parts.join("; "), pass))
    })
}

fn criterion_5(s: &BatterySettings) -> Criterion {
    let expected = "mod 125: dims [3, 3], V_1 in V_2, orders [120, 15000, 1875000], growth [3, 3]; mod 25: dims [3], order 15000";
    judge(5, "filtration chain SL_2(Z_5)", expected, || {
        let cap = s.cap(DEFAULT_CAP);
        let sl2 = entry("SL2")?;
        let smoke = enumerate_entry(sl2, 5, 2, cap)?;
        let smoke_report = filtration_report_of(&smoke)?;
        let full = enumerate_entry(sl2, 5, 3, cap)?;
        let report = filtration_report_of(&full)?;
        let included = report.levels[0]
            .subspace
            .is_subspace_of(&report.levels[1].subspace)?;
        let growth = growth_profile_of(&full)?;
        let observed = format!(
            "mod 125: dims {:?}, V_1 in V_2 {included}, orders {:?}, growth {growth:?}; mod 25: dims {:?}, order {}",
            report.dims(),
            report.group_orders,
            smoke_report.dims(),
            smoke.order()
        );
        let pass = report.dims() == [3, 3]
            && included
            && report.group_orders == [120, 15_000, 1_875_000]
            && growth == [3, 3]
            && smoke_report.dims() == [3]
            && smoke.order() == 15_000;
        Ok((observed, pass))
    })
}

fn criterion_6(s: &BatterySettings) -> Criterion {
    judge(
        6,
        "p-power congruence",
        "0 failures over 100 A in M_2(Z/5^4) and 100 in M_3(Z/7^4), m = 1, 2",
        || {
            let mut rng = sampling::rng(s.seed);
            let mut parts = Vec::new();
            let mut failures = 0;
            for (n, p) in [(2, 5), (3, 7)] {
                let ctx = PrecisionContext::new(n, p, 4)?;
                let b = congruence_batch(&ctx, &[1, 2], 100, &mut rng)?;
                failures += b.failures;
                parts.push(format!(
                    "n={n} p={p}: {} checks, {} failures",
                    b.trials, b.failures
                ));
            }
            Ok((parts.join("; "), failures == 0))
        },
    )
}

fn criterion_7(s: &BatterySettings) -> Criterion {
    judge(
        7,
        "lift lemma",
        "0 failures over 200 trials, n in {2,3}, p in {7,11}, k in {1,2}",
        || {
            let mut rng = sampling::rng(s.seed);
            let mut trials = 0;
            let mut failures = 0;
            for n in [2, 3] {
                for p in [7, 11] {
                    let field = PrecisionContext::new(n, p, 1)?;
                    for k in [1, 2] {
                        let b = lemma_batch(&field, k, 25, &mut rng)?;
                        trials += b.trials;
                        failures += b.failures;
                    }
                }
            }
            Ok((
                format!("{trials} trials, {failures} failures"),
                trials == 200 && failures == 0,
            ))
        },
    )
}

fn criterion_8(s: &BatterySettings) -> Criterion {
    judge(
        8,
        "p-core identity",
        "exp-generated = p-core for SL2, Heisenberg, GL2, Torus1 at p=5",
        || {
            let cap = s.cap(DEFAULT_CAP);
            let mut parts = Vec::new();
            let mut pass = true;
            for name in ["SL2", "Heisenberg", "GL2", "Torus1"] {
                let g = enumerate_entry(entry(name)?, 5, 1, cap)?;
                let logs = nilpotent_log_set(&g)?;
                let eg = exp_generated_subgroup(g.ctx(), &logs, cap)?;
                let core = p_core(&g, cap)?;
                let same = eg.same_elements(&core);
                pass &= same;
                parts.push(format!(
                    "{name}: {} vs {} {}",
                    eg.order(),
                    core.order(),
                    if same { "equal" } else { "differ" }
                ));
            }
            Ok((parts.join("; "), pass))
        },
    )
}

fn criterion_9(s: &BatterySettings) -> Criterion {
    let expected = "(p-1)^d <= count <= (p+1)^d for SL2, Heisenberg, Torus1 at p=5,7; SL2 = p(p^2-1), Heisenberg = p^3";
    judge(9, "point-count bounds", expected, || {
        let cap = s.cap(DEFAULT_CAP);
        let mut parts = Vec::new();
        let mut pass = true;
        for name in ["SL2", "Heisenberg", "Torus1"] {
            for p in [5u64, 7] {
                let c = point_count_bounds_check(entry(name)?, p, cap)?;
                // Closed forms written out here, independent of the catalog.
                let closed = match name {
                    "SL2" => Some(p * (p * p - 1)),
                    "Heisenberg" => Some(p.pow(3)),
                    _ => None,
                };
                let matches = closed.is_none_or(|o| o == c.count);
                pass &= c.ok && matches && c.formula_matches != Some(false);
                parts.push(format!(
                    "{name} p={p}: {} <= {} <= {}",
                    c.lower, c.count, c.upper
                ));
            }
        }
        Ok((parts.join("; "), pass))
    })
}

/// Criteria 1 to 9.
fn core_battery(s: &BatterySettings) -> (Vec<Criterion>, Vec<Duration>) {
    let runs: [&dyn Fn() -> Criterion; 9] = [
        &criterion_1,
        &criterion_2,
        &|| criterion_3(s),
        &|| criterion_4(s),
        &|| criterion_5(s),
        &|| criterion_6(s),
        &|| criterion_7(s),
        &|| criterion_8(s),
        &|| criterion_9(s),
    ];
    let mut criteria = Vec::new();
    let mut timings = Vec::new();
    for run in runs {
        let t = Instant::now();
        criteria.push(run());
        timings.push(t.elapsed());
    }
    (criteria, timings)
}

/// Runs criteria 1 to 9, then runs them again and compares the serialized
/// results byte for byte as criterion 10.
pub fn run_battery(s: &BatterySettings) -> BatteryReport {
    let (mut criteria, mut timings) = core_battery(s);
    let t = Instant::now();
    let (again, _) = core_battery(s);
    let first = serde_json::to_vec(&criteria).expect("criteria serialize");
    let second = serde_json::to_vec(&again).expect("criteria serialize");
    criteria.push(Criterion {
        id: 10,
        name: "determinism".into(),
        expected: "identical bytes on re-run".into(),
        observed: if first == second {
            format!("identical ({} bytes)", first.len())
        } else {
            format!("differ ({} vs {} bytes)", first.len(), second.len())
        },
        pass: first == second,
    });
    timings.push(t.elapsed());
    BatteryReport { criteria, timings }
}
