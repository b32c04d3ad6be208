use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};

use super::arith::mod_inv;
use super::context::PrecisionContext;
use crate::error::{Error, Result};

/// An `n x n` matrix over `Z/p^k` with entries kept in `[0, p^k)`.
///
/// Equality and hashing are structural on the context triple and the
/// row-major entry array.
#[derive(Clone)]
pub struct ResidueMatrix {
    ctx: PrecisionContext,
    entries: Vec<u32>,
}

/// `out = a * b` over `Z/modulus` for row-major `n x n` slices.
impl ResidueMatrix {
    /// Builds a matrix from row-major integers, reducing each into `[0, p^k)`.
    pub fn from_ints(ctx: &PrecisionContext, values: &[i64]) -> Result<Self> {
        let expected = ctx.n() * ctx.n();
        if values.len() != expected {
            return Err(Error::Shape {
                expected,
                got: values.len(),
            });
        }
        Ok(ResidueMatrix {
            ctx: ctx.clone(),
            entries: values.iter().map(|&v| ctx.reduce(v)).collect(),
        })
    }

    /// Wraps entries already known to be reduced.
    pub(crate) fn from_reduced(ctx: &PrecisionContext, entries: Vec<u32>) -> Self {
        debug_assert_eq!(entries.len(), ctx.n() * ctx.n());
        debug_assert!(entries.iter().all(|&e| (e as u64) < ctx.modulus()));
        ResidueMatrix {
            ctx: ctx.clone(),
            entries,
        }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::from_reduced(ctx, vec![0; ctx.n() * ctx.n()])
    }

    pub fn identity(ctx: &PrecisionContext) -> Self {
        Self::scalar(ctx, 1)
    }

    pub fn scalar(ctx: &PrecisionContext, c: i64) -> Self {
        let n = ctx.n();
        let mut m = Self::zero(ctx);
        let c = ctx.reduce(c);
        for i in 0..n {
            m.entries[i * n + i] = c;
        }
        m
    }

    /// The matrix unit with a single 1 at 0-based position `(i, j)`.
    pub fn unit(ctx: &PrecisionContext, i: usize, j: usize) -> Self {
        let n = ctx.n();
        assert!(
            i < n && j < n,
            "matrix unit ({i}, {j}) out of range for n = {n}"
        );
        let mut m = Self::zero(ctx);
        m.entries[i * n + j] = 1;
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(ctx: &PrecisionContext, diag: &[i64]) -> Result<Self> {
        let n = ctx.n();
        if diag.len() != n {
            return Err(Error::Shape {
                expected: n,
                got: diag.len(),
            });
        }
        let mut m = Self::zero(ctx);
        for (i, &d) in diag.iter().enumerate() {
            m.entries[i * n + i] = ctx.reduce(d);
        }
        Ok(m)
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn n(&self) -> usize {
        self.ctx.n()
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n() + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n();
        self.entries
            .iter()
            .enumerate()
            .all(|(idx, &e)| e == u32::from(idx / n == idx % n))
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let m = self.ctx.modulus();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| ((a as u64 + b as u64) % m) as u32)
            .collect();
        Ok(Self::from_reduced(&self.ctx, entries))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let m = self.ctx.modulus();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| ((a as u64 + m - b as u64) % m) as u32)
            .collect();
        Ok(Self::from_reduced(&self.ctx, entries))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.ctx.ensure_same(&other.ctx)?;
        let n = self.n();
        let mut out = vec![0u32; n * n];
        self.ctx.mul_into(&self.entries, &other.entries, &mut out);
        Ok(Self::from_reduced(&self.ctx, out))
    }

    /// Multiplies every entry by the integer `c`.
    pub fn scale(&self, c: i64) -> Self {
        let m = self.ctx.modulus();
        let c = self.ctx.reduce(c) as u64;
        let entries = self
            .entries
            .iter()
            .map(|&e| (e as u64 * c % m) as u32)
            .collect();
        Self::from_reduced(&self.ctx, entries)
    }

    /// `self^e` by square-and-multiply; `self^0 = I`.
    pub fn pow(&self, mut e: u64) -> Self {
        let n = self.n();
        let mut acc = Self::identity(&self.ctx).entries;
        let mut base = self.entries.clone();
        let mut scratch = vec![0u32; n * n];
        while e > 0 {
            if e & 1 == 1 {
                self.ctx.mul_into(&acc, &base, &mut scratch);
                std::mem::swap(&mut acc, &mut scratch);
            }
            e >>= 1;
            if e > 0 {
                self.ctx.mul_into(&base, &base, &mut scratch);
                std::mem::swap(&mut base, &mut scratch);
            }
        }
        Self::from_reduced(&self.ctx, acc)
    }

    /// Inverse over `Z/p^k` by Gauss-Jordan elimination with unit pivots.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n();
        let p = self.ctx.p();
        let m = self.ctx.modulus();
        let mut a: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let mut inv: Vec<u64> = Self::identity(&self.ctx)
            .entries
            .iter()
            .map(|&e| e as u64)
            .collect();

        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_multiple_of(p))
                .ok_or(Error::NotInvertible)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let s = mod_inv(a[col * n + col], m).expect("pivot is a unit");
            for j in 0..n {
                a[col * n + j] = a[col * n + j] * s % m;
                inv[col * n + j] = inv[col * n + j] * s % m;
            }
            for r in 0..n {
                let f = a[r * n + col];
                if r == col || f == 0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] = (a[r * n + j] + (m - f) * a[col * n + j]) % m;
                    inv[r * n + j] = (inv[r * n + j] + (m - f) * inv[col * n + j]) % m;
                }
            }
        }
        Ok(Self::from_reduced(
            &self.ctx,
            inv.into_iter().map(|e| e as u32).collect(),
        ))
    }

    /// True iff the determinant is a unit mod `p`.
    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    /// Image under `Z/p^k -> Z/p^j`.
    pub fn reduce_level(&self, j: u32) -> Result<Self> {
        if j == 0 || j > self.ctx.k() {
            return Err(Error::PrecisionTooLow {
                need: j,
                have: self.ctx.k(),
            });
        }
        let target = self.ctx.with_precision(j)?;
        let m = target.modulus() as u32;
        Ok(Self::from_reduced(
            &target,
            self.entries.iter().map(|&e| e % m).collect(),
        ))
    }

    /// Entrywise lift of the canonical representatives into precision `j >= k`.
    pub fn lift(&self, j: u32) -> Result<Self> {
        if j < self.ctx.k() {
            return Err(Error::InvalidInput(format!(
                "cannot lift from precision {} to lower precision {j}",
                self.ctx.k()
            )));
        }
        let target = self.ctx.with_precision(j)?;
        Ok(Self::from_reduced(&target, self.entries.clone()))
    }

    /// Exact division by `p^e`, landing in precision `k - e`.
    ///
    /// Fails unless every entry is divisible by `p^e` and `e < k`.
    pub fn divide_by_p_power(&self, e: u32) -> Result<Self> {
        if e >= self.ctx.k() {
            return Err(Error::PrecisionTooLow {
                need: e + 1,
                have: self.ctx.k(),
            });
        }
        let d = self.ctx.p_power(e) as u32;
        if self.entries.iter().any(|&x| x % d != 0) {
            return Err(Error::NotDivisible { exponent: e });
        }
        let target = self.ctx.with_precision(self.ctx.k() - e)?;
        Ok(Self::from_reduced(
            &target,
            self.entries.iter().map(|&x| x / d).collect(),
        ))
    }

    /// Rows as nested vectors, for display and serialization.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.n()).map(<[u32]>::to_vec).collect()
    }
}

impl PartialEq for ResidueMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries && self.ctx == other.ctx
    }
}

impl Eq for ResidueMatrix {}

impl Hash for ResidueMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.hash(state);
        self.entries.hash(state);
    }
}

impl PartialOrd for ResidueMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Lexicographic on `(n, p, k)` and then on the row-major entries.
impl Ord for ResidueMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.ctx.n(), self.ctx.p(), self.ctx.k())
            .cmp(&(other.ctx.n(), other.ctx.p(), other.ctx.k()))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl fmt::Debug for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} mod {}", self.rows(), self.ctx.modulus())
    }
}

impl fmt::Display for ResidueMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

// Operator forms panic on context mismatch, like shape mismatches in ndarray.
// Use the `checked_*` methods where contexts come from untrusted input.

impl Add for &ResidueMatrix {
    type Output = ResidueMatrix;
    fn add(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.checked_add(rhs).expect("matrix addition")
    }
}

impl Sub for &ResidueMatrix {
    type Output = ResidueMatrix;
    fn sub(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.checked_sub(rhs).expect("matrix subtraction")
    }
}

impl Mul for &ResidueMatrix {
    type Output = ResidueMatrix;
    fn mul(self, rhs: &ResidueMatrix) -> ResidueMatrix {
        self.checked_mul(rhs).expect("matrix multiplication")
    }
}

impl Neg for &ResidueMatrix {
    type Output = ResidueMatrix;
    fn neg(self) -> ResidueMatrix {
        self.scale(-1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, p: u64, k: u32) -> PrecisionContext {
        PrecisionContext::new(n, p, k).unwrap()
    }

    fn mat(c: &PrecisionContext, v: &[i64]) -> ResidueMatrix {
        ResidueMatrix::from_ints(c, v).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let c = ctx(2, 5, 1);
        let i = ResidueMatrix::identity(&c);
        assert_eq!(&i * &i, i);
        let prod = &mat(&c, &[1, 1, 0, 1]) * &mat(&c, &[1, 0, 1, 1]);
        assert_eq!(prod, mat(&c, &[2, 1, 1, 1]));

        let c25 = ctx(2, 5, 2);
        let e12 = ResidueMatrix::unit(&c25, 0, 1);
        let i25 = ResidueMatrix::identity(&c25);
        assert_eq!(&(&i25 + &e12) * &(&i25 - &e12), i25);
    }

    #[test]
    fn context_mismatch_is_an_error() {
        let a = ResidueMatrix::identity(&ctx(2, 5, 1));
        let b = ResidueMatrix::identity(&ctx(2, 5, 2));
        assert!(matches!(
            a.checked_mul(&b),
            Err(Error::ContextMismatch { .. })
        ));
        assert!(a.checked_add(&b).is_err());
    }

    #[test]
    fn powers() {
        let c = ctx(2, 5, 1);
        let a = mat(&c, &[1, 1, 0, 1]);
        assert_eq!(a.pow(0), ResidueMatrix::identity(&c));
        assert_eq!(a.pow(5), ResidueMatrix::identity(&c));
        assert_eq!(a.pow(3), mat(&c, &[1, 3, 0, 1]));

        let c25 = ctx(2, 5, 2);
        let u = mat(&c25, &[1, 1, 0, 1]);
        assert_eq!(u.pow(5), mat(&c25, &[1, 5, 0, 1]));
    }

    #[test]
    fn inverses() {
        let c = ctx(2, 5, 1);
        let i = ResidueMatrix::identity(&c);
        assert_eq!(i.inverse().unwrap(), i);
        assert_eq!(
            mat(&c, &[1, 1, 0, 1]).inverse().unwrap(),
            mat(&c, &[1, -1, 0, 1])
        );
        assert_eq!(
            mat(&c, &[2, 0, 0, 1]).inverse().unwrap(),
            mat(&c, &[3, 0, 0, 1])
        );
        assert_eq!(mat(&c, &[1, 2, 2, 4]).inverse(), Err(Error::NotInvertible));

        // Needs a row swap and a non-trivial unit pivot mod 25.
        let c25 = ctx(2, 5, 2);
        let a = mat(&c25, &[5, 3, 7, 10]);
        let ai = a.inverse().unwrap();
        assert_eq!(&a * &ai, ResidueMatrix::identity(&c25));
        assert_eq!(&ai * &a, ResidueMatrix::identity(&c25));
        assert_eq!(
            mat(&c25, &[5, 0, 0, 1]).inverse(),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn reduction_and_lifting() {
        let c25 = ctx(2, 5, 2);
        let a = mat(&c25, &[1, 5, 0, 1]);
        assert_eq!(
            a.reduce_level(1).unwrap(),
            ResidueMatrix::identity(&ctx(2, 5, 1))
        );
        assert_eq!(a.reduce_level(2).unwrap(), a);
        assert_eq!(
            mat(&c25, &[7, 0, 0, 1]).reduce_level(1).unwrap(),
            mat(&ctx(2, 5, 1), &[2, 0, 0, 1])
        );
        assert!(a.reduce_level(3).is_err());
        assert!(a.reduce_level(0).is_err());

        let lifted = mat(&ctx(2, 5, 1), &[4, 1, 0, 3]).lift(3).unwrap();
        assert_eq!(lifted.entries(), &[4, 1, 0, 3]);
        assert_eq!(lifted.ctx().k(), 3);
    }

    #[test]
    fn exact_division() {
        let c = ctx(2, 5, 3);
        let a = mat(&c, &[0, 25, 50, 100]);
        let q = a.divide_by_p_power(2).unwrap();
        assert_eq!(q, mat(&ctx(2, 5, 1), &[0, 1, 2, 4]));
        assert_eq!(
            mat(&c, &[0, 5, 0, 0]).divide_by_p_power(2),
            Err(Error::NotDivisible { exponent: 2 })
        );
        assert!(a.divide_by_p_power(3).is_err());
    }

    #[test]
    fn predicates() {
        let c = ctx(3, 7, 1);
        assert!(ResidueMatrix::identity(&c).is_identity());
        assert!(!ResidueMatrix::unit(&c, 0, 1).is_identity());
        assert!(ResidueMatrix::zero(&c).is_zero());
        assert_eq!(
            &ResidueMatrix::unit(&c, 1, 2) + &ResidueMatrix::unit(&c, 1, 2),
            ResidueMatrix::unit(&c, 1, 2).scale(2)
        );
        assert_eq!(-&ResidueMatrix::identity(&c), ResidueMatrix::scalar(&c, 6));
    }

    #[test]
    fn shape_is_checked() {
        assert_eq!(
            ResidueMatrix::from_ints(&ctx(2, 5, 1), &[1, 2, 3]),
            Err(Error::Shape {
                expected: 4,
                got: 3
            })
        );
    }
}
