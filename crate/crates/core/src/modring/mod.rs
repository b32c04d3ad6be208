//! Exact arithmetic for matrices over `Z/p^k` and linear algebra over `F_p`.

pub mod arith;
mod context;
mod matrix;
mod subspace;

pub use context::{PrecisionContext, MAX_DIMENSION, MODULUS_LIMIT};
pub use matrix::ResidueMatrix;
pub use subspace::FpSubspace;

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn entries(len: usize, modulus: u64) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(0..modulus as i64, len)
    }

    proptest! {
        #[test]
        fn inverse_is_two_sided(v in entries(9, 343)) {
            let c = PrecisionContext::new(3, 7, 3).unwrap();
            let a = ResidueMatrix::from_ints(&c, &v).unwrap();
            match a.inverse() {
                Ok(ai) => {
                    prop_assert!((&a * &ai).is_identity());
                    prop_assert!((&ai * &a).is_identity());
                }
                Err(_) => {
                    prop_assert!(a.reduce_level(1).unwrap().inverse().is_err());
                }
            }
        }

        #[test]
        fn reduction_is_a_ring_homomorphism(a in entries(9, 625), b in entries(9, 625), j in 1u32..4) {
            let c = PrecisionContext::new(3, 5, 4).unwrap();
            let a = ResidueMatrix::from_ints(&c, &a).unwrap();
            let b = ResidueMatrix::from_ints(&c, &b).unwrap();
            let r = |m: &ResidueMatrix| m.reduce_level(j).unwrap();
            prop_assert_eq!(r(&(&a * &b)), &r(&a) * &r(&b));
            prop_assert_eq!(r(&(&a + &b)), &r(&a) + &r(&b));
            prop_assert_eq!(r(&(&a - &b)), &r(&a) - &r(&b));
        }

        #[test]
        fn span_is_canonical(vs in prop::collection::vec(entries(4, 5), 0..7), seed in any::<u64>()) {
            let c = PrecisionContext::new(2, 5, 1).unwrap();
            let mats: Vec<_> = vs.iter().map(|v| ResidueMatrix::from_ints(&c, v).unwrap()).collect();
            let s = FpSubspace::span(&c, &mats).unwrap();

            let again = FpSubspace::span(&c, &s.basis_matrices()).unwrap();
            prop_assert_eq!(&again, &s);

            let mut shuffled = mats.clone();
            let len = shuffled.len();
            if len > 1 {
                let mut state = seed;
                for i in (1..len).rev() {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    shuffled.swap(i, (state >> 33) as usize % (i + 1));
                }
            }
            prop_assert_eq!(FpSubspace::span(&c, &shuffled).unwrap(), s);
        }

        #[test]
        fn mutual_inclusion_iff_identical(a in prop::collection::vec(entries(4, 3), 0..4),
                                          b in prop::collection::vec(entries(4, 3), 0..4)) {
            let c = PrecisionContext::new(2, 3, 1).unwrap();
            let sp = |vs: &Vec<Vec<i64>>| {
                let mats: Vec<_> = vs.iter().map(|v| ResidueMatrix::from_ints(&c, v).unwrap()).collect();
                FpSubspace::span(&c, &mats).unwrap()
            };
            let (u, v) = (sp(&a), sp(&b));
            let both = u.is_subspace_of(&v).unwrap() && v.is_subspace_of(&u).unwrap();
            prop_assert_eq!(both, u.basis() == v.basis());
        }
    }
}
