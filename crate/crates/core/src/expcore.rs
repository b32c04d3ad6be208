//! Truncated exponential and logarithm between nilpotent and unipotent
//! matrices, the one-parameter map `t -> exp(t x)`, and order-`p` detection.
//!
//! With `p >= n` every `i!` for `i < n` is a unit, so
//! `exp(x) = sum_{i<n} x^i / i!` and `log(u) = -sum_{1<=i<n} (1-u)^i / i`
//! are polynomials with coefficients in `Z/p^k`.

use crate::error::{Error, Result};
use crate::modring::ResidueMatrix;

/// A matrix with `x^n = 0` at its precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NilpotentMatrix(ResidueMatrix);

/// A matrix with `(u - I)^n = 0` at its precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnipotentMatrix(ResidueMatrix);

impl NilpotentMatrix {
    pub fn new(x: ResidueMatrix) -> Result<Self> {
        if is_nilpotent(&x) {
            Ok(NilpotentMatrix(x))
        } else {
            Err(Error::NotNilpotent)
        }
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ResidueMatrix {
        self.0
    }
}

impl UnipotentMatrix {
    pub fn new(u: ResidueMatrix) -> Result<Self> {
        if is_unipotent(&u) {
            Ok(UnipotentMatrix(u))
        } else {
            Err(Error::NotUnipotent)
        }
    }

    pub fn matrix(&self) -> &ResidueMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ResidueMatrix {
        self.0
    }
}

impl AsRef<ResidueMatrix> for NilpotentMatrix {
    fn as_ref(&self) -> &ResidueMatrix {
        &self.0
    }
}

impl AsRef<ResidueMatrix> for UnipotentMatrix {
    fn as_ref(&self) -> &ResidueMatrix {
        &self.0
    }
}

pub fn is_nilpotent(x: &ResidueMatrix) -> bool {
    x.pow(x.n() as u64).is_zero()
}

pub fn is_unipotent(u: &ResidueMatrix) -> bool {
    is_nilpotent(&(u - &ResidueMatrix::identity(u.ctx())))
}

/// The degree `n - 1` exponential polynomial, evaluated on any matrix.
///
/// Used directly for lifts of `exp(x)` that need not be nilpotent at
/// higher precision.
pub fn exp_polynomial(x: &ResidueMatrix) -> ResidueMatrix {
    let ctx = x.ctx();
    let mut sum = ResidueMatrix::identity(ctx);
    let mut power = ResidueMatrix::identity(ctx);
    for i in 1..ctx.n() {
        power = &power * x;
        sum = &sum + &power.scale(ctx.factorial_inv(i) as i64);
    }
    sum
}

/// The degree `n - 1` logarithm polynomial `-sum (1-u)^i / i`.
pub fn log_polynomial(u: &ResidueMatrix) -> ResidueMatrix {
    let ctx = u.ctx();
    let y = &ResidueMatrix::identity(ctx) - u;
    let mut sum = ResidueMatrix::zero(ctx);
    let mut power = ResidueMatrix::identity(ctx);
    for i in 1..ctx.n() {
        power = &power * &y;
        sum = &sum - &power.scale(ctx.reciprocal(i) as i64);
    }
    sum
}

pub fn trunc_exp(x: &NilpotentMatrix) -> UnipotentMatrix {
    UnipotentMatrix(exp_polynomial(&x.0))
}

pub fn trunc_log(u: &UnipotentMatrix) -> NilpotentMatrix {
    NilpotentMatrix(log_polynomial(&u.0))
}

/// `phi_x(t) = exp(t x)`.
pub fn phi(x: &NilpotentMatrix, t: i64) -> UnipotentMatrix {
    UnipotentMatrix(exp_polynomial(&x.0.scale(t)))
}

/// `g != I` and `g^p = I`, computed by powering.
pub fn has_order_p(g: &ResidueMatrix) -> bool {
    !g.is_identity() && g.pow(g.ctx().p()).is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::PrecisionContext;
    use crate::sampling;
    use proptest::prelude::*;

    fn ctx(n: usize, p: u64, k: u32) -> PrecisionContext {
        PrecisionContext::new(n, p, k).unwrap()
    }

    fn mat(c: &PrecisionContext, v: &[i64]) -> ResidueMatrix {
        ResidueMatrix::from_ints(c, v).unwrap()
    }

    fn nil(m: ResidueMatrix) -> NilpotentMatrix {
        NilpotentMatrix::new(m).unwrap()
    }

    fn all_matrices(c: &PrecisionContext) -> impl Iterator<Item = ResidueMatrix> + '_ {
        let m = c.modulus() as i64;
        let len = c.n() * c.n();
        (0..m.pow(len as u32)).map(move |mut code| {
            let v: Vec<i64> = (0..len)
                .map(|_| {
                    let d = code % m;
                    code /= m;
                    d
                })
                .collect();
            mat(c, &v)
        })
    }

    #[test]
    fn nilpotency_examples() {
        let c = ctx(2, 5, 1);
        assert!(is_nilpotent(&ResidueMatrix::zero(&c)));
        assert!(is_nilpotent(&ResidueMatrix::unit(&c, 0, 1)));
        assert!(!is_nilpotent(&ResidueMatrix::identity(&c)));
        assert_eq!(
            NilpotentMatrix::new(ResidueMatrix::identity(&c)),
            Err(Error::NotNilpotent)
        );
        assert_eq!(
            UnipotentMatrix::new(ResidueMatrix::zero(&c)),
            Err(Error::NotUnipotent)
        );
    }

    #[test]
    fn exp_examples() {
        let c = ctx(2, 5, 1);
        assert!(trunc_exp(&nil(ResidueMatrix::zero(&c)))
            .matrix()
            .is_identity());
        assert_eq!(
            trunc_exp(&nil(ResidueMatrix::unit(&c, 0, 1))).into_matrix(),
            mat(&c, &[1, 1, 0, 1])
        );

        // e12 + e23 in M_3(F_7): I + x + x^2 * inv(2), inv(2) = 4.
        let c = ctx(3, 7, 1);
        let x = mat(&c, &[0, 1, 0, 0, 0, 1, 0, 0, 0]);
        assert_eq!(
            trunc_exp(&nil(x)).into_matrix(),
            mat(&c, &[1, 1, 4, 0, 1, 1, 0, 0, 1])
        );
    }

    #[test]
    fn log_examples() {
        let c = ctx(2, 5, 1);
        let i = UnipotentMatrix::new(ResidueMatrix::identity(&c)).unwrap();
        assert!(trunc_log(&i).matrix().is_zero());
        let u = UnipotentMatrix::new(mat(&c, &[1, 1, 0, 1])).unwrap();
        assert_eq!(trunc_log(&u).into_matrix(), ResidueMatrix::unit(&c, 0, 1));
    }

    #[test]
    fn exhaustive_bijection_2x2_mod_5() {
        let c = ctx(2, 5, 1);
        let nilpotents: Vec<_> = all_matrices(&c).filter(is_nilpotent).collect();
        assert_eq!(nilpotents.len(), 25);
        for x in nilpotents {
            let x = nil(x);
            let u = trunc_exp(&x);
            assert!(is_unipotent(u.matrix()));
            assert_eq!(trunc_log(&u), x);
        }
        for u in all_matrices(&c).filter(is_unipotent) {
            let u = UnipotentMatrix::new(u).unwrap();
            assert_eq!(trunc_exp(&trunc_log(&u)), u);
        }
    }

    #[test]
    fn phi_examples() {
        let c = ctx(2, 5, 1);
        let e12 = nil(ResidueMatrix::unit(&c, 0, 1));
        assert!(phi(&e12, 0).matrix().is_identity());
        assert_eq!(phi(&e12, 3).into_matrix(), mat(&c, &[1, 3, 0, 1]));
    }

    #[test]
    fn phi_is_additive_exhaustive_2x2_mod_5() {
        let c = ctx(2, 5, 1);
        for x in all_matrices(&c).filter(is_nilpotent) {
            let x = nil(x);
            for s in 0..5 {
                for t in 0..5 {
                    assert_eq!(
                        phi(&x, s + t).into_matrix(),
                        phi(&x, s).matrix() * phi(&x, t).matrix()
                    );
                }
            }
        }
    }

    #[test]
    fn order_p_examples() {
        let c = ctx(2, 5, 1);
        assert!(!has_order_p(&ResidueMatrix::identity(&c)));
        assert!(has_order_p(&mat(&c, &[1, 1, 0, 1])));
        assert!(!has_order_p(&mat(&c, &[2, 0, 0, 1])));
    }

    #[test]
    fn order_p_iff_unipotent_exhaustive_gl2_mod_5() {
        let c = ctx(2, 5, 1);
        let mut invertible = 0;
        for g in all_matrices(&c).filter(ResidueMatrix::is_invertible) {
            invertible += 1;
            assert_eq!(
                has_order_p(&g),
                is_unipotent(&g) && !g.is_identity(),
                "{g:?}"
            );
        }
        assert_eq!(invertible, 480);
    }

    #[test]
    fn bijection_holds_at_higher_precision() {
        let c = ctx(3, 5, 3);
        let x = nil(mat(&c, &[0, 7, 31, 0, 0, 100, 0, 0, 0]));
        assert_eq!(trunc_log(&trunc_exp(&x)), x);
    }

    proptest! {
        #[test]
        fn random_bijection_3x3(seed in any::<u64>(), p in prop::sample::select(vec![3u64, 5, 7, 11])) {
            let c = ctx(3, p, 1);
            let mut r = sampling::rng(seed);
            let x = sampling::random_nilpotent(&c, &mut r);
            let u = trunc_exp(&x);
            prop_assert!(is_unipotent(u.matrix()));
            prop_assert_eq!(trunc_log(&u), x);
            prop_assert_eq!(trunc_exp(&trunc_log(&u)), u);
        }

        #[test]
        fn exp_is_additive_on_commuting_pairs(seed in any::<u64>(), a in 0i64..7, b in 0i64..7) {
            // y = a x + b x^2 commutes with x.
            let c = ctx(3, 7, 1);
            let mut r = sampling::rng(seed);
            let x = sampling::random_nilpotent(&c, &mut r);
            let xm = x.matrix();
            let y = nil(&xm.scale(a) + &(xm * xm).scale(b));
            let sum = nil(xm + y.matrix());
            prop_assert_eq!(trunc_exp(&sum).into_matrix(), trunc_exp(&x).matrix() * trunc_exp(&y).matrix());
        }

        #[test]
        fn powers_follow_the_one_parameter_map(seed in any::<u64>(), t in 0u64..40) {
            let c = ctx(3, 5, 1);
            let mut r = sampling::rng(seed);
            let u = trunc_exp(&sampling::random_nilpotent(&c, &mut r));
            prop_assert_eq!(u.matrix().pow(t), phi(&trunc_log(&u), t as i64).into_matrix());
        }

        #[test]
        fn order_p_iff_unipotent_3x3(seed in any::<u64>()) {
            let c = ctx(3, 5, 1);
            let mut r = sampling::rng(seed);
            // Mixes unipotent and generic invertible samples.
            let g = if seed % 2 == 0 {
                trunc_exp(&sampling::random_nilpotent(&c, &mut r)).into_matrix()
            } else {
                sampling::random_invertible(&c, &mut r)
            };
            prop_assert_eq!(has_order_p(&g), is_unipotent(&g) && !g.is_identity());
        }
    }
}
