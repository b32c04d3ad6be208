use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use strength_reduce::StrengthReducedU64;

use super::arith::{is_prime, mod_inv};
use crate::error::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_DIMENSION: usize = 50;

/// Exclusive upper bound on `p^k`, so that entry products fit in 64 bits.
pub const MODULUS_LIMIT: u64 = 1 << 31;

/// The triple `(n, p, k)`: `n x n` matrices with entries in `Z/p^k`.
///
/// Cloning is cheap; the precomputed inverse tables are shared.
#[derive(Clone)]
pub struct PrecisionContext {
    inner: Arc<ContextData>,
}

struct ContextData {
    n: usize,
    p: u64,
    k: u32,
    modulus: u64,
    reducer: StrengthReducedU64,
    single_reduction: bool,
    factorial_inv: Vec<u64>,
    reciprocal: Vec<u64>,
}

impl PrecisionContext {
    pub fn new(n: usize, p: u64, k: u32) -> Result<Self> {
        if n == 0 || n > MAX_DIMENSION {
            return Err(Error::InvalidContext(format!(
                "n = {n} must lie in 1..={MAX_DIMENSION}"
            )));
        }
        if !is_prime(p) {
            return Err(Error::InvalidContext(format!("p = {p} is not prime")));
        }
        if p < n as u64 {
            return Err(Error::InvalidContext(format!(
                "p = {p} must be at least n = {n} so that i! is a unit for i < n"
            )));
        }
        if k == 0 {
            return Err(Error::InvalidContext("k must be at least 1".into()));
        }
        let modulus = p
            .checked_pow(k)
            .filter(|&m| m < MODULUS_LIMIT)
            .ok_or_else(|| Error::InvalidContext(format!("p^k = {p}^{k} must be below 2^31")))?;

        let mut factorial_inv = Vec::with_capacity(n);
        let mut reciprocal = vec![0u64; n];
        let mut fact = 1u64;
        for i in 0..n as u64 {
            if i > 0 {
                fact = fact * i % modulus;
                reciprocal[i as usize] = mod_inv(i, modulus).expect("i < p is a unit");
            }
            factorial_inv.push(mod_inv(fact, modulus).expect("i! is a unit for i < p"));
        }

        Ok(PrecisionContext {
            inner: Arc::new(ContextData {
                n,
                p,
                k,
                modulus,
                reducer: StrengthReducedU64::new(modulus),
                single_reduction: (n as u128) * ((modulus - 1) as u128).pow(2) <= u64::MAX as u128,
                factorial_inv,
                reciprocal,
            }),
        })
    }

    pub fn n(&self) -> usize {
        self.inner.n
    }

    /// Row-major product `out = a * b` of reduced `n x n` entry slices.
    #[inline]
    pub(crate) fn mul_into(&self, a: &[u32], b: &[u32], out: &mut [u32]) {
        const FOLD: u64 = 1 << 62;
        let n = self.inner.n;
        let r = self.inner.reducer;
        let single = self.inner.single_reduction;
        for i in 0..n {
            let row = &a[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc = 0u64;
                for (l, &x) in row.iter().enumerate() {
                    acc += x as u64 * b[l * n + j] as u64;
                    if !single && acc >= FOLD {
                        acc = acc % r;
                    }
                }
                out[i * n + j] = (acc % r) as u32;
            }
        }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// `p^k`.
    pub fn modulus(&self) -> u64 {
        self.inner.modulus
    }

    /// `p^e` for `e <= k`.
    pub fn p_power(&self, e: u32) -> u64 {
        self.inner.p.pow(e)
    }

    /// Inverse of `i!` mod `p^k`, for `i < n`.
    pub fn factorial_inv(&self, i: usize) -> u64 {
        self.inner.factorial_inv[i]
    }

    /// Inverse of `i` mod `p^k`, for `1 <= i < n`.
    pub fn reciprocal(&self, i: usize) -> u64 {
        self.inner.reciprocal[i]
    }

    /// Same `n` and `p`, precision `j`.
    pub fn with_precision(&self, j: u32) -> Result<Self> {
        if j == self.k() {
            return Ok(self.clone());
        }
        PrecisionContext::new(self.n(), self.p(), j)
    }

    /// Canonical representative of an integer in `[0, p^k)`.
    pub fn reduce(&self, value: i64) -> u32 {
        value.rem_euclid(self.modulus() as i64) as u32
    }

    pub(crate) fn ensure_same(&self, other: &PrecisionContext) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }

    pub(crate) fn ensure_field(&self) -> Result<()> {
        if self.k() == 1 {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "operation requires k = 1, context has {self}"
            )))
        }
    }
}

impl PartialEq for PrecisionContext {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.n() == other.n() && self.p() == other.p() && self.k() == other.k())
    }
}

impl Eq for PrecisionContext {}

impl Hash for PrecisionContext {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.n(), self.p(), self.k()).hash(state);
    }
}

impl fmt::Display for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}, p={}, k={}", self.n(), self.p(), self.k())
    }
}

impl fmt::Debug for PrecisionContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrecisionContext({self})")
    }
}
