//! Seeded random matrices for randomized checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::expcore::NilpotentMatrix;
use crate::modring::{PrecisionContext, ResidueMatrix};

/// Seed used by every randomized check unless one is supplied.
pub const DEFAULT_SEED: u64 = 0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix<R: Rng>(ctx: &PrecisionContext, rng: &mut R) -> ResidueMatrix {
    let m = ctx.modulus();
    let n = ctx.n();
    let entries: Vec<i64> = (0..n * n).map(|_| rng.gen_range(0..m) as i64).collect();
    ResidueMatrix::from_ints(ctx, &entries).expect("shape is n x n")
}

/// Rejection-sampled element of `GL_n(Z/p^k)`.
pub fn random_invertible<R: Rng>(ctx: &PrecisionContext, rng: &mut R) -> ResidueMatrix {
    loop {
        let a = random_matrix(ctx, rng);
        if a.is_invertible() {
            return a;
        }
    }
}

/// A random nilpotent matrix `P U P^{-1}` with `U` strictly upper triangular.
pub fn random_nilpotent<R: Rng>(ctx: &PrecisionContext, rng: &mut R) -> NilpotentMatrix {
    let n = ctx.n();
    let m = ctx.modulus();
    let mut upper = vec![0i64; n * n];
    for i in 0..n {
        for j in i + 1..n {
            upper[i * n + j] = rng.gen_range(0..m) as i64;
        }
    }
    let upper = ResidueMatrix::from_ints(ctx, &upper).expect("shape is n x n");
    let p = random_invertible(ctx, rng);
    let pi = p.inverse().expect("sampled invertible");
    NilpotentMatrix::new(&(&p * &upper) * &pi).expect("conjugate of strictly upper triangular")
}
