//! Lie brackets and bracket closure of subspaces of `gl_n(F_p)`.

use crate::error::{Error, Result};
use crate::expcore::is_nilpotent;
use crate::modring::{FpSubspace, PrecisionContext, ResidueMatrix};

/// Default budget for the exhaustive scan in [`is_nilpotently_generated`].
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 1_000_000;

/// A Lie subalgebra of `gl_n(F_p)` with the generators it was closed from.
#[derive(Clone, Debug)]
pub struct LieAlgebraFp {
    carrier: FpSubspace,
    generators: Vec<ResidueMatrix>,
}

impl LieAlgebraFp {
    pub fn carrier(&self) -> &FpSubspace {
        &self.carrier
    }

    pub fn generators(&self) -> &[ResidueMatrix] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim()
    }

    /// Checks closure under bracket on the canonical basis.
    pub fn is_closed(&self) -> bool {
        let basis = self.carrier.basis_matrices();
        basis.iter().enumerate().all(|(i, a)| {
            basis[..i].iter().all(|b| {
                self.carrier
                    .contains_entries((&(a * b) - &(b * a)).entries())
            })
        })
    }
}

/// `ab - ba`.
pub fn bracket(a: &ResidueMatrix, b: &ResidueMatrix) -> Result<ResidueMatrix> {
    a.ctx().ensure_same(b.ctx())?;
    a.ctx().ensure_field()?;
    Ok(&(a * b) - &(b * a))
}

/// Smallest bracket-closed subspace containing `generators`.
///
/// Keeps an independent spanning list in insertion order; each element is
/// bracketed against every earlier one and the result appended whenever it
/// enlarges the span. Once every pair has been visited the span is closed
/// by bilinearity.
pub fn lie_closure(ctx: &PrecisionContext, generators: &[ResidueMatrix]) -> Result<LieAlgebraFp> {
    ctx.ensure_field()?;
    let mut carrier = FpSubspace::zero(ctx)?;
    let mut spanning = Vec::new();
    for g in generators {
        if carrier.insert(g)? {
            spanning.push(g.clone());
        }
    }
    let mut i = 0;
    while i < spanning.len() {
        for j in 0..i {
            let c = bracket(&spanning[i], &spanning[j])?;
            if carrier.insert_entries(c.entries()) {
                spanning.push(c);
            }
        }
        i += 1;
    }
    Ok(LieAlgebraFp {
        carrier,
        generators: generators.to_vec(),
    })
}

/// Whether the nilpotent elements of `algebra` span it.
///
/// Nilpotent generators, basis vectors and basis brackets are tried first;
/// if they fall short, every element of the carrier is scanned provided
/// `p^dim <= cap`.
pub fn is_nilpotently_generated(algebra: &LieAlgebraFp, cap: usize) -> Result<bool> {
    let carrier = algebra.carrier();
    let ctx = carrier.ctx();
    let basis = carrier.basis_matrices();

    let mut candidates: Vec<ResidueMatrix> = algebra.generators().to_vec();
    candidates.extend(basis.iter().cloned());
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[..i] {
            candidates.push(bracket(a, b)?);
        }
    }
    let mut nilpotent_span = FpSubspace::zero(ctx)?;
    for c in candidates.iter().filter(|c| is_nilpotent(c)) {
        nilpotent_span.insert(c)?;
    }
    if nilpotent_span.dim() == carrier.dim() {
        return Ok(true);
    }

    let p = ctx.p();
    let total = (p as u128).checked_pow(carrier.dim() as u32);
    if total.is_none_or(|t| t > cap as u128) {
        return Err(Error::CapExceeded { cap });
    }
    let mut coeffs = vec![0u64; basis.len()];
    loop {
        let mut x = ResidueMatrix::zero(ctx);
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                x = &x + &b.scale(*c as i64);
            }
        }
        if is_nilpotent(&x) && nilpotent_span.insert(&x)? && nilpotent_span.dim() == carrier.dim() {
            return Ok(true);
        }
        // Odometer over F_p^dim.
        let mut pos = 0;
        loop {
            if pos == coeffs.len() {
                return Ok(false);
            }
            coeffs[pos] += 1;
            if coeffs[pos] < p {
                break;
            }
            coeffs[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use proptest::prelude::*;

    fn ctx(n: usize, p: u64) -> PrecisionContext {
        PrecisionContext::new(n, p, 1).unwrap()
    }

    fn e(c: &PrecisionContext, i: usize, j: usize) -> ResidueMatrix {
        ResidueMatrix::unit(c, i, j)
    }

    #[test]
    fn bracket_examples() {
        let c = ctx(2, 5);
        let a = ResidueMatrix::from_ints(&c, &[1, 2, 3, 4]).unwrap();
        assert!(bracket(&a, &a).unwrap().is_zero());
        let h = &e(&c, 0, 0) - &e(&c, 1, 1);
        assert_eq!(bracket(&e(&c, 0, 1), &e(&c, 1, 0)).unwrap(), h);
        assert_eq!(bracket(&e(&c, 0, 1), &h).unwrap(), e(&c, 0, 1).scale(3));
    }

    #[test]
    fn bracket_rejects_higher_precision() {
        let c = PrecisionContext::new(2, 5, 2).unwrap();
        assert!(bracket(&e(&c, 0, 1), &e(&c, 1, 0)).is_err());
    }

    #[test]
    fn closure_examples() {
        let c = ctx(2, 5);
        assert_eq!(lie_closure(&c, &[]).unwrap().dim(), 0);
        assert_eq!(lie_closure(&c, &[e(&c, 0, 1)]).unwrap().dim(), 1);
        let sl2 = lie_closure(&c, &[e(&c, 0, 1), e(&c, 1, 0)]).unwrap();
        assert_eq!(sl2.dim(), 3);
        let h = &e(&c, 0, 0) - &e(&c, 1, 1);
        assert!(sl2.carrier().contains(&h).unwrap());
        assert!(!sl2.carrier().contains(&e(&c, 0, 0)).unwrap());
        assert!(sl2.is_closed());
    }

    #[test]
    fn heisenberg_closure_picks_up_the_corner() {
        let c = ctx(3, 5);
        let l = lie_closure(&c, &[e(&c, 0, 1), e(&c, 1, 2)]).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(l.carrier().contains(&e(&c, 0, 2)).unwrap());
        let span = FpSubspace::span(&c, [&e(&c, 0, 1), &e(&c, 1, 2)]).unwrap();
        assert_eq!(span.dim(), 2);
    }

    #[test]
    fn closure_of_sl3_transvections() {
        let c = ctx(3, 7);
        let l = lie_closure(&c, &[e(&c, 0, 1), e(&c, 1, 0), e(&c, 1, 2), e(&c, 2, 1)]).unwrap();
        assert_eq!(l.dim(), 8);
    }

    #[test]
    fn nilpotent_generation_examples() {
        let c = ctx(2, 5);
        let zero = lie_closure(&c, &[]).unwrap();
        assert!(is_nilpotently_generated(&zero, DEFAULT_EXHAUSTIVE_CAP).unwrap());

        let sl2 = lie_closure(&c, &[e(&c, 0, 1), e(&c, 1, 0)]).unwrap();
        assert!(is_nilpotently_generated(&sl2, DEFAULT_EXHAUSTIVE_CAP).unwrap());

        let diag = lie_closure(&c, &[e(&c, 0, 0)]).unwrap();
        assert!(!is_nilpotently_generated(&diag, DEFAULT_EXHAUSTIVE_CAP).unwrap());
    }

    #[test]
    fn sl2_from_a_non_nilpotent_basis_needs_the_scan() {
        // h, e12 + e21 and e12 - e21 span sl_2 with no nilpotent generator
        // besides what the brackets produce.
        let c = ctx(2, 5);
        let h = &e(&c, 0, 0) - &e(&c, 1, 1);
        let s = &e(&c, 0, 1) + &e(&c, 1, 0);
        let l = lie_closure(&c, &[h, s]).unwrap();
        assert_eq!(l.dim(), 3);
        assert!(is_nilpotently_generated(&l, DEFAULT_EXHAUSTIVE_CAP).unwrap());
    }

    #[test]
    fn scan_respects_the_cap() {
        let c = ctx(3, 5);
        // The full diagonal algebra: brackets vanish, no nilpotent generators.
        let l = lie_closure(&c, &[e(&c, 0, 0), e(&c, 1, 1), e(&c, 2, 2)]).unwrap();
        assert_eq!(
            is_nilpotently_generated(&l, 100),
            Err(Error::CapExceeded { cap: 100 })
        );
        assert!(!is_nilpotently_generated(&l, 1000).unwrap());
    }

    proptest! {
        #[test]
        fn jacobi_identity(seed in any::<u64>()) {
            let c = ctx(3, 7);
            let mut r = sampling::rng(seed);
            let [a, b, d] = std::array::from_fn(|_| sampling::random_matrix(&c, &mut r));
            let br = |x: &ResidueMatrix, y: &ResidueMatrix| bracket(x, y).unwrap();
            let total = &(&br(&a, &br(&b, &d)) + &br(&b, &br(&d, &a))) + &br(&d, &br(&a, &b));
            prop_assert!(total.is_zero());
        }

        #[test]
        fn closure_is_monotone_idempotent_and_dominates_span(seed in any::<u64>(), count in 0usize..4, extra in 0usize..3) {
            let c = ctx(3, 5);
            let mut r = sampling::rng(seed);
            let gens: Vec<_> = (0..count).map(|_| sampling::random_nilpotent(&c, &mut r).into_matrix()).collect();
            let more: Vec<_> = gens.iter().cloned()
                .chain((0..extra).map(|_| sampling::random_matrix(&c, &mut r)))
                .collect();
            let l = lie_closure(&c, &gens).unwrap();
            let l_more = lie_closure(&c, &more).unwrap();
            prop_assert!(l.is_closed());
            prop_assert!(l.carrier().is_subspace_of(l_more.carrier()).unwrap());

            let again = lie_closure(&c, &l.carrier().basis_matrices()).unwrap();
            prop_assert_eq!(again.carrier(), l.carrier());

            let span = FpSubspace::span(&c, &gens).unwrap();
            prop_assert!(l.dim() >= span.dim());
            let span_closed = lie_closure(&c, &span.basis_matrices()).unwrap().dim() == span.dim();
            if span_closed {
                prop_assert_eq!(l.dim(), span.dim());
            }
        }

        #[test]
        fn single_generator_is_one_dimensional(seed in any::<u64>()) {
            let c = ctx(3, 11);
            let mut r = sampling::rng(seed);
            let x = sampling::random_matrix(&c, &mut r);
            prop_assume!(!x.is_zero());
            prop_assert_eq!(lie_closure(&c, &[x]).unwrap().dim(), 1);
        }
    }
}
