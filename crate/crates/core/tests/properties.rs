//! Randomized algebraic invariants. These are the laws the exact-arithmetic
//! layers must satisfy for the cross-checks to mean anything: field axioms
//! and canonical-form uniqueness for the scalars, ring laws for the free
//! algebra, homomorphism properties of evaluation and series expansion, and
//! the group/encoding laws of the index combinatorics.

use proptest::prelude::*;

use sdet_core::emit::{from_text, to_text};
use sdet_core::freealg::{expand_series, AlgElem, GenSym, Word};
use sdet_core::permcomb::{enum_in, eta_to_kappa, kappa_to_eta, IdxTuple, Perm};
use sdet_core::scalars::{ratio, RatFunc, Rational, UPoly};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| ratio(n, d))
}

fn upoly() -> impl Strategy<Value = UPoly> {
    proptest::collection::vec(rational(), 0..5).prop_map(UPoly::from_coeffs)
}

fn nonzero_upoly() -> impl Strategy<Value = UPoly> {
    upoly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> {
    (upoly(), nonzero_upoly()).prop_map(|(n, d)| RatFunc::new(n, d))
}

fn gensym() -> impl Strategy<Value = GenSym> {
    (1usize..=4, 1usize..=4, 0usize..4).prop_map(|(p, q, shift)| GenSym { p, q, shift })
}

fn word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(gensym(), 0..4)
}

fn algelem() -> impl Strategy<Value = AlgElem> {
    proptest::collection::vec((word(), ratfunc()), 0..4).prop_map(|terms| {
        let mut out = AlgElem::zero();
        for (w, c) in terms {
            out.add_term(w, &c);
        }
        out
    })
}

fn perm() -> impl Strategy<Value = Perm> {
    (1usize..=6)
        .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
        .prop_map(Perm::from_images)
}

/// A uniformly random member of the index set `I_n`.
fn idx_tuple() -> impl Strategy<Value = IdxTuple> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(proptest::num::usize::ANY, n).prop_map(move |raw| {
            let k = raw
                .iter()
                .enumerate()
                .map(|(idx, r)| idx + 1 + r % (n - idx))
                .collect();
            IdxTuple::new(k)
        })
    })
}

proptest! {
    #[test]
    fn scalar_field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a - &b) + &b, a.clone());
        if !b.is_zero() {
            let q = a.div(&b).unwrap();
            prop_assert_eq!(&q * &b, a);
        }
    }

    #[test]
    fn canonical_form_ignores_common_factors(
        n in upoly(), d in nonzero_upoly(), g in nonzero_upoly()
    ) {
        let plain = RatFunc::new(n.clone(), d.clone());
        let scaled = RatFunc::new(&n * &g, &d * &g);
        prop_assert_eq!(plain, scaled);
    }

    #[test]
    fn evaluation_is_multiplicative(a in ratfunc(), b in ratfunc(), u in -30i64..=30) {
        let u = Rational::from_integer(u.into());
        if let (Ok(va), Ok(vb), Ok(vab)) = (a.eval(&u), b.eval(&u), (&a * &b).eval(&u)) {
            prop_assert_eq!(va * vb, vab);
        }
    }

    #[test]
    fn infinity_expansion_is_additive(a in ratfunc(), b in ratfunc()) {
        let order = 4;
        if let (Ok(ea), Ok(eb), Ok(es)) = (
            a.expand_at_infinity(order),
            b.expand_at_infinity(order),
            (&a + &b).expand_at_infinity(order),
        ) {
            prop_assert_eq!(ea.add(&eb), es);
        }
    }

    #[test]
    fn free_algebra_ring_laws(x in algelem(), y in algelem(), z in algelem()) {
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.sub(&x), AlgElem::zero());
    }

    #[test]
    fn series_expansion_is_a_homomorphism(x in algelem(), y in algelem()) {
        let order = 3;
        if let (Ok(ex), Ok(ey), Ok(exy), Ok(exs)) = (
            expand_series(&x, order),
            expand_series(&y, order),
            expand_series(&x.mul(&y), order),
            expand_series(&x.add(&y), order),
        ) {
            prop_assert_eq!(ex.mul(&ey), exy);
            prop_assert_eq!(ex.add(&ey), exs);
        }
    }

    #[test]
    fn term_text_roundtrips(x in algelem()) {
        prop_assert_eq!(from_text(&to_text(&x)).unwrap(), x);
    }

    #[test]
    fn permutation_group_laws(a in perm(), b in perm(), c in perm()) {
        // Work in the larger symmetric group when sizes differ.
        let n = a.n().max(b.n()).max(c.n());
        let lift = |p: &Perm| {
            let mut images: Vec<usize> = p.images().to_vec();
            images.extend(p.n() + 1..=n);
            Perm::from_images(images)
        };
        let (a, b, c) = (lift(&a), lift(&b), lift(&c));
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).sign(), a.sign() * b.sign());
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(Perm::parse_cycles(&a.format_cycles(), n).unwrap(), a);
    }

    #[test]
    fn tuple_encodings_are_inverse(kappa in idx_tuple()) {
        prop_assert_eq!(eta_to_kappa(&kappa_to_eta(&kappa)), kappa.clone());
        // And the image really lies in the index set.
        let n = kappa.n();
        let eta = kappa_to_eta(&kappa);
        prop_assert!(enum_in(n).contains(&eta));
    }
}
