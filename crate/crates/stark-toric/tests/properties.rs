//! Property tests for the exact algebra and the separation bookkeeping.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use stark_toric::{
    build_system, ck_table, lc_pullback, separability_poly, separate, split_separable,
    BivariatePoly, PotentialKind, SystemParams, UnivariatePoly,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12)
        .prop_map(|(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d)))
}

fn sparse_poly() -> impl Strategy<Value = BivariatePoly> {
    prop::collection::vec(((0u32..6, 0u32..6), rational()), 0..8)
        .prop_map(BivariatePoly::from_terms)
}

/// Re-expands a split `G1(z1) + G2(z2)` as a bivariate polynomial.
fn recombine(g1: &UnivariatePoly, g2: &UnivariatePoly) -> BivariatePoly {
    let mut p = BivariatePoly::zero();
    for (k, c) in g1.coeffs().iter().enumerate() {
        p.add_term(k as u32, 0, c.clone());
    }
    for (k, c) in g2.coeffs().iter().enumerate() {
        p.add_term(0, k as u32, c.clone());
    }
    p
}

proptest! {
    #[test]
    fn addition_is_associative_and_commutative(
        p in sparse_poly(),
        q in sparse_poly(),
        r in sparse_poly(),
    ) {
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn multiplication_distributes_over_addition(
        p in sparse_poly(),
        q in sparse_poly(),
        r in sparse_poly(),
    ) {
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
    }

    /// Whenever the pullback splits, the two halves recombine to the exact
    /// pullback; when it does not, the reported monomial is a genuine mixed
    /// term of the expansion.
    #[test]
    fn split_round_trip(g in sparse_poly()) {
        let pulled = lc_pullback(&g);
        match split_separable(&pulled) {
            Ok((g1, g2)) => {
                prop_assert_eq!(recombine(&g1, &g2), pulled);
                prop_assert!(g2.coeff(0).is_zero());
            }
            Err(err) => {
                let (e1, e2) = err.exponents;
                prop_assert!(e1 > 0 && e2 > 0);
                prop_assert_eq!(pulled.coeff(e1, e2), err.coeff);
            }
        }
    }

    /// Linear combinations of known Stark-type modifications stay Stark-type.
    #[test]
    fn family_combinations_separate(
        c0 in rational(),
        c1 in rational(),
        c2 in rational(),
        n in 1u32..5,
    ) {
        let mut g = BivariatePoly::monomial(c0, 0, 0);
        g = g.add(&BivariatePoly::monomial(c1, 1, 0));
        g = g.add(&separability_poly(&ck_table(n).unwrap()).scale(&c2));
        let pulled = lc_pullback(&g);
        let (g1, g2) = split_separable(&pulled).expect("family combination must separate");
        prop_assert_eq!(recombine(&g1, &g2), pulled);
    }

    /// Separation preserves the energy bookkeeping: at any rational phase
    /// point, `kappa |w|^2 + V1(z1^2) + V2(z2^2)` equals the pullback of the
    /// shifted Hamiltonian times `|z|^2`, plus the level `m`. The kinetic
    /// rescaling `w -> w/2` is accounted for by `|p|^2 = |w|^2 / |z|^2`.
    #[test]
    fn separation_energy_bookkeeping(
        z1 in rational(),
        z2 in rational(),
        w1 in rational(),
        w2 in rational(),
        m_num in 1i64..8,
        g_num in -6i64..=6,
        f_num in 1i64..8,
        n in 1u32..4,
    ) {
        prop_assume!(!(z1.is_zero() && z2.is_zero()));
        prop_assume!(g_num != 0);
        let m = m_num as f64 / 2.0;
        let g = g_num as f64 / 4.0;
        let f = f_num as f64 / 2.0;
        let pot = build_system(
            PotentialKind::Generalized(n),
            &SystemParams { m, g: Some(g), n: Some(n), f },
        )
        .unwrap();
        let sys = separate(&pot, f).unwrap();

        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let z1sq = &z1 * &z1;
        let z2sq = &z2 * &z2;
        let zsq = &z1sq + &z2sq; // |z|^2 = |q|
        let wsq = &w1 * &w1 + &w2 * &w2;
        let lhs = &half * &wsq + sys.v1.eval(&z1sq) + sys.v2.eval(&z2sq);

        let q1 = &z1sq - &z2sq;
        let q2 = BigRational::from_integer(BigInt::from(2)) * &z1 * &z2;
        let shifted = &half * &wsq / &zsq - &pot.m / &zsq - pot.g_poly.eval(&q1, &q2)
            + BigRational::from_float(f).unwrap();
        let rhs = &zsq * shifted + &pot.m;
        prop_assert_eq!(lhs, rhs);
    }
}
