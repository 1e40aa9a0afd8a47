//! Randomized property checks over the toy group: field and group axioms,
//! interpolation invariances, and codec round trips.

use proptest::prelude::*;

use uxnb_handover::auth::{PublicCredential, UeId};
use uxnb_handover::group::toy::{ToyGroup, ToyScalar};
use uxnb_handover::group::{lagrange_coefficients, Field, Group};
use uxnb_handover::seal::{derive_symmetric_key, open, seal, SealedBox};

fn scalar() -> impl Strategy<Value = ToyScalar> {
    any::<u64>().prop_map(ToyScalar::from_u64)
}

fn nonzero_scalar() -> impl Strategy<Value = ToyScalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn distinct_nonzero(count: usize) -> impl Strategy<Value = Vec<ToyScalar>> {
    proptest::collection::btree_set(1u32..uxnb_handover::group::toy::TOY_ORDER, count).prop_map(
        |set| {
            set.into_iter()
                .map(|v| ToyScalar::from_u64(v as u64))
                .collect()
        },
    )
}

proptest! {
    #[test]
    fn field_axioms_hold(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&a.neg()), ToyScalar::zero());
        prop_assert_eq!(a.sub(&b), a.add(&b.neg()));
    }

    #[test]
    fn nonzero_inversion_round_trips(a in nonzero_scalar()) {
        prop_assert_eq!(a.mul(&a.invert().unwrap()), ToyScalar::one());
    }

    #[test]
    fn group_axioms_hold(a in scalar(), b in scalar()) {
        let g = ToyGroup::generator();
        let pa = ToyGroup::mul(&g, &a);
        let pb = ToyGroup::mul(&g, &b);
        prop_assert_eq!(ToyGroup::add(&pa, &pb), ToyGroup::add(&pb, &pa));
        prop_assert_eq!(ToyGroup::add(&pa, &ToyGroup::identity()), pa);
        // q * X = identity and (a + b) X = aX + bX
        prop_assert_eq!(ToyGroup::mul(&pa, &ToyScalar::zero()), ToyGroup::identity());
        prop_assert_eq!(ToyGroup::mul_generator(&a.add(&b)), ToyGroup::add(&pa, &pb));
    }

    #[test]
    fn scalar_codec_round_trips(a in scalar()) {
        let bytes = a.to_bytes();
        prop_assert_eq!(bytes.len(), ToyScalar::byte_width());
        prop_assert_eq!(ToyScalar::from_bytes(&bytes), Some(a));
    }

    #[test]
    fn point_codec_round_trips(k in scalar()) {
        let point = ToyGroup::mul_generator(&k);
        prop_assert_eq!(ToyGroup::decode_point(&ToyGroup::encode_point(&point)), Some(point));
    }

    #[test]
    fn lagrange_coefficients_sum_shares_to_any_line_through_zero(
        points in distinct_nonzero(4),
        secret in nonzero_scalar(),
        slope in scalar(),
    ) {
        // f(x) = secret + slope x evaluated over 4 points reconstructs secret
        let coefficients = lagrange_coefficients(&points).unwrap();
        let mut acc = ToyScalar::zero();
        for (lambda, x) in coefficients.iter().zip(&points) {
            acc = acc.add(&lambda.mul(&secret.add(&slope.mul(x))));
        }
        prop_assert_eq!(acc, secret);
    }

    #[test]
    fn credential_codec_round_trips(
        id in "[a-z0-9-]{1,24}",
        x in scalar(),
        k in scalar(),
    ) {
        let cred = PublicCredential::<ToyGroup> {
            ue_id: UeId::new(id),
            public_x: x,
            public_point: ToyGroup::mul_generator(&k),
        };
        prop_assert_eq!(PublicCredential::<ToyGroup>::from_bytes(&cred.to_bytes()).unwrap(), cred);
    }

    #[test]
    fn seal_open_round_trips_any_payload(
        share in scalar(),
        payload in proptest::collection::vec(any::<u8>(), 0..256),
        seed in any::<u64>(),
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(seed);
        let key = derive_symmetric_key(&share);
        let sealed = seal(&key, &mut rng, &payload);
        prop_assert_eq!(open(&key, &sealed), Some(payload));
        prop_assert_eq!(SealedBox::from_bytes(&sealed.to_bytes()).unwrap(), sealed);
    }
}
