//! Example groups with declared ground truth, point-count bounds, and the
//! word-length diagnostic for one-parameter generators.
//!
//! The built-in catalog is `data/catalog.json`. Each entry lists integer
//! generator matrices (row-major; the string `"g"` stands for the least
//! primitive root mod `p`), the declared dimension of the Zariski closure,
//! the expected Nori dimension, and the order of the `F_p`-points as a
//! polynomial in `p` with ascending integer coefficients.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expcore::NilpotentMatrix;
use crate::fingroup::{enumerate, ndim, phi_generators, EnumeratedGroup, NdimReport};
use crate::modring::arith::primitive_root;
use crate::modring::{PrecisionContext, ResidueMatrix};

const BUILTIN: &str = include_str!("../data/catalog.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symbol {
    /// Least primitive root mod `p`.
    #[serde(rename = "g")]
    PrimitiveRoot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryValue {
    Int(i64),
    Symbol(Symbol),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadicalTag {
    UnipotentRadical,
    Toric,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NdimRelation {
    EqualsKnownDim,
    StrictlyLess,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExpectedNdim {
    Exactly(usize),
    Relation(NdimRelation),
}

impl ExpectedNdim {
    pub fn admits(&self, ndim: usize, known_dim: usize) -> bool {
        match *self {
            ExpectedNdim::Exactly(d) => ndim == d,
            ExpectedNdim::Relation(NdimRelation::EqualsKnownDim) => ndim == known_dim,
            ExpectedNdim::Relation(NdimRelation::StrictlyLess) => ndim < known_dim,
        }
    }

    fn upper_bound(&self, known_dim: usize) -> Option<usize> {
        match *self {
            ExpectedNdim::Exactly(d) => Some(d),
            ExpectedNdim::Relation(NdimRelation::EqualsKnownDim) => Some(known_dim),
            ExpectedNdim::Relation(NdimRelation::StrictlyLess) => known_dim.checked_sub(1),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub n: usize,
    pub generators: Vec<Vec<EntryValue>>,
    pub known_dim: usize,
    #[serde(default)]
    pub known_dim_reason: String,
    pub tag: RadicalTag,
    pub connected: bool,
    pub expected_ndim: ExpectedNdim,
    /// Nori dimension observed at build time, for entries whose expectation
    /// is only a relation.
    #[serde(default)]
    pub regression_ndim: Option<usize>,
    #[serde(default)]
    pub order_poly: Option<Vec<i64>>,
    #[serde(default)]
    pub order_formula: Option<String>,
    #[serde(default)]
    pub bad_primes: Vec<u64>,
    /// Largest prime at which `|G(F_p)|` fits the default element budget.
    #[serde(default)]
    pub max_prime: Option<u64>,
    /// Whether the entry is exercised at precision `k > 1`.
    #[serde(default)]
    pub padic: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Catalog {
    pub schema_version: u32,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn from_json(text: &str) -> Result<Self> {
        let catalog: Catalog =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("catalog: {e}")))?;
        for e in &catalog.entries {
            e.validate()?;
        }
        Ok(catalog)
    }

    /// The catalog shipped with the crate.
    pub fn builtin() -> &'static Catalog {
        static CATALOG: OnceLock<Catalog> = OnceLock::new();
        CATALOG.get_or_init(|| Catalog::from_json(BUILTIN).expect("built-in catalog is valid"))
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

impl CatalogEntry {
    fn validate(&self) -> Result<()> {
        let bad = |why: String| {
            Err(Error::InvalidInput(format!(
                "catalog entry {}: {why}",
                self.name
            )))
        };
        if let Some(g) = self.generators.iter().find(|g| g.len() != self.n * self.n) {
            return bad(format!(
                "generator has {} entries, expected {}",
                g.len(),
                self.n * self.n
            ));
        }
        if self.expected_ndim.upper_bound(self.known_dim).is_none() {
            return bad("expected Nori dimension exceeds the declared dimension".into());
        }
        if let ExpectedNdim::Exactly(d) = self.expected_ndim {
            if d > self.known_dim {
                return bad(format!(
                    "expected Nori dimension {d} > known_dim {}",
                    self.known_dim
                ));
            }
        }
        if let Some(r) = self.regression_ndim {
            if !self.expected_ndim.admits(r, self.known_dim) {
                return bad(format!("regression value {r} contradicts the expectation"));
            }
        }
        Ok(())
    }

    /// Whether `p` lies within the entry's enumeration budget.
    pub fn fits_budget(&self, p: u64) -> bool {
        self.max_prime.is_none_or(|m| p <= m)
    }

    /// `|G(F_p)|` from the declared polynomial, if any.
    pub fn order_from_formula(&self, p: u64) -> Option<i128> {
        let poly = self.order_poly.as_ref()?;
        Some(
            poly.iter()
                .rev()
                .fold(0i128, |acc, &c| acc * p as i128 + c as i128),
        )
    }
}

/// The entry's generators reduced into `M_n(Z/p^k)`.
pub fn instantiate(entry: &CatalogEntry, p: u64, k: u32) -> Result<Vec<ResidueMatrix>> {
    let inadmissible = |reason: String| Error::InadmissiblePrime {
        entry: entry.name.clone(),
        p,
        reason,
    };
    if entry.bad_primes.contains(&p) {
        return Err(inadmissible("declared bad prime".into()));
    }
    let ctx = PrecisionContext::new(entry.n, p, k).map_err(|e| inadmissible(e.to_string()))?;
    let g = primitive_root(p) as i64;
    entry
        .generators
        .iter()
        .map(|gen| {
            let ints: Vec<i64> = gen
                .iter()
                .map(|v| match v {
                    EntryValue::Int(i) => *i,
                    EntryValue::Symbol(Symbol::PrimitiveRoot) => g,
                })
                .collect();
            let m = ResidueMatrix::from_ints(&ctx, &ints)?;
            if m.is_invertible() {
                Ok(m)
            } else {
                Err(inadmissible(format!("generator {m} is singular mod p")))
            }
        })
        .collect()
}

/// Enumerates the entry's group mod `p^k`.
pub fn enumerate_entry(
    entry: &CatalogEntry,
    p: u64,
    k: u32,
    cap: usize,
) -> Result<EnumeratedGroup> {
    let gens = instantiate(entry, p, k)?;
    let ctx = PrecisionContext::new(entry.n, p, k)?;
    enumerate(&ctx, &gens, cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointCountCheck {
    pub count: u64,
    pub lower: u64,
    pub upper: u64,
    /// `lower <= count <= upper`.
    pub ok: bool,
    pub formula_order: Option<i128>,
    /// `None` when the entry declares no order polynomial.
    pub formula_matches: Option<bool>,
}

/// `(p-1)^d <= |G(F_p)| <= (p+1)^d` for the declared dimension `d`, with
/// the count taken by BFS.
pub fn point_count_bounds_check(
    entry: &CatalogEntry,
    p: u64,
    cap: usize,
) -> Result<PointCountCheck> {
    if !entry.connected {
        return Err(Error::InvalidInput(format!(
            "point-count bounds apply to connected groups; {} is not tagged connected",
            entry.name
        )));
    }
    let count = enumerate_entry(entry, p, 1, cap)?.order() as u64;
    let d = entry.known_dim as u32;
    let lower = (p - 1).pow(d);
    let upper = (p + 1).pow(d);
    let formula_order = entry.order_from_formula(p);
    Ok(PointCountCheck {
        count,
        lower,
        upper,
        ok: lower <= count && count <= upper,
        formula_order,
        formula_matches: formula_order.map(|f| f == count as i128),
    })
}

#[derive(Clone, Debug)]
pub struct NdimCheck {
    pub report: NdimReport,
    pub order: usize,
    pub known_dim: usize,
    /// `ndim <= known_dim`.
    pub bounded: bool,
    /// The entry's expectation holds.
    pub expected: bool,
}

pub fn ndim_check(entry: &CatalogEntry, p: u64, cap: usize) -> Result<NdimCheck> {
    let group = enumerate_entry(entry, p, 1, cap)?;
    let report = ndim(&group)?;
    Ok(NdimCheck {
        bounded: report.ndim <= entry.known_dim,
        expected: entry.expected_ndim.admits(report.ndim, entry.known_dim),
        order: group.order(),
        known_dim: entry.known_dim,
        report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BorelDiagnostic {
    /// Longest word in the `phi_x(t)` generators needed by the BFS.
    pub max_bfs_depth: usize,
    /// `2 n^2 * n^2`: `2 n^2` passes over a product of `n^2` one-parameter images.
    pub budget: usize,
    pub order: usize,
}

/// Reports how many one-parameter factors the BFS needed to exhaust
/// `G_N(F_p)`. No verdict: the variety-level surjection says nothing
/// definite about rational points.
pub fn borel_wordlength_diagnostic(
    ctx: &PrecisionContext,
    logs: &[NilpotentMatrix],
    cap: usize,
) -> Result<BorelDiagnostic> {
    let gens = phi_generators(ctx, logs)?;
    let group = enumerate(ctx, &gens, cap)?;
    let n2 = ctx.n() * ctx.n();
    Ok(BorelDiagnostic {
        max_bfs_depth: group.bfs_depth().expect("fresh BFS records its depth"),
        budget: 2 * n2 * n2,
        order: group.order(),
    })
}
