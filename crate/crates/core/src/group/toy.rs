//! A deliberately small group: the order-`q` subgroup of `Z_p^*` with
//! `q = 65393` and `p = 2q + 1 = 130787` (both prime).
//!
//! The subgroup of squares modulo a safe prime has prime order `q`, so any
//! square other than 1 generates it; we use 4. Elements fit in a `u32` and
//! every operation is a couple of `u64` multiplications, which keeps
//! exhaustive and thousand-trial tests cheap. Discrete logs here are
//! brute-forceable on purpose.

use num_bigint::BigUint;
use rand::Rng;

use super::{Field, Group};

/// Subgroup order `q` (prime).
pub const TOY_ORDER: u32 = 65_393;
/// Ambient modulus `p = 2q + 1` (prime).
pub const TOY_MODULUS: u32 = 130_787;
/// Generator of the order-`q` subgroup.
pub const TOY_GENERATOR: u32 = 4;

const SCALAR_WIDTH: usize = 2;
const POINT_WIDTH: usize = 3;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Residue modulo [`TOY_ORDER`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ToyScalar(u32);

impl ToyScalar {
    pub fn new(value: u32) -> Self {
        ToyScalar(value % TOY_ORDER)
    }

    pub fn value(&self) -> u32 {
        self.0
    }
}

impl Field for ToyScalar {
    fn zero() -> Self {
        ToyScalar(0)
    }

    fn one() -> Self {
        ToyScalar(1)
    }

    fn from_u64(value: u64) -> Self {
        ToyScalar((value % TOY_ORDER as u64) as u32)
    }

    fn from_biguint_reduced(value: &BigUint) -> Self {
        ToyScalar((value % TOY_ORDER).iter_u32_digits().next().unwrap_or(0))
    }

    fn add(&self, rhs: &Self) -> Self {
        ToyScalar(((self.0 as u64 + rhs.0 as u64) % TOY_ORDER as u64) as u32)
    }

    fn sub(&self, rhs: &Self) -> Self {
        ToyScalar(((self.0 as u64 + (TOY_ORDER - rhs.0) as u64) % TOY_ORDER as u64) as u32)
    }

    fn mul(&self, rhs: &Self) -> Self {
        ToyScalar(mul_mod(self.0 as u64, rhs.0 as u64, TOY_ORDER as u64) as u32)
    }

    fn neg(&self) -> Self {
        if self.0 == 0 {
            ToyScalar(0)
        } else {
            ToyScalar(TOY_ORDER - self.0)
        }
    }

    fn invert(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(q-2) mod q
        Some(ToyScalar(
            pow_mod(self.0 as u64, TOY_ORDER as u64 - 2, TOY_ORDER as u64) as u32,
        ))
    }

    fn is_zero(&self) -> bool {
        self.0 == 0
    }

    fn order() -> BigUint {
        BigUint::from(TOY_ORDER)
    }

    fn byte_width() -> usize {
        SCALAR_WIDTH
    }

    fn to_bytes(&self) -> Vec<u8> {
        (self.0 as u16).to_be_bytes().to_vec()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let raw: [u8; SCALAR_WIDTH] = bytes.try_into().ok()?;
        let value = u16::from_be_bytes(raw) as u32;
        (value < TOY_ORDER).then_some(ToyScalar(value))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        ToyScalar(rng.gen_range(0..TOY_ORDER))
    }
}

/// Subgroup element of `Z_p^*` (the identity is 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ToyPoint(u32);

impl ToyPoint {
    pub fn value(&self) -> u32 {
        self.0
    }
}

/// Marker type implementing [`Group`] for the toy subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyGroup;

impl Group for ToyGroup {
    type Scalar = ToyScalar;
    type Point = ToyPoint;

    const NAME: &'static str = "toy-130787";

    fn generator() -> ToyPoint {
        ToyPoint(TOY_GENERATOR)
    }

    fn identity() -> ToyPoint {
        ToyPoint(1)
    }

    fn add(a: &ToyPoint, b: &ToyPoint) -> ToyPoint {
        ToyPoint(mul_mod(a.0 as u64, b.0 as u64, TOY_MODULUS as u64) as u32)
    }

    fn mul(point: &ToyPoint, scalar: &ToyScalar) -> ToyPoint {
        ToyPoint(pow_mod(point.0 as u64, scalar.0 as u64, TOY_MODULUS as u64) as u32)
    }

    fn point_width() -> usize {
        POINT_WIDTH
    }

    fn encode_point(point: &ToyPoint) -> Vec<u8> {
        let be = point.0.to_be_bytes();
        be[1..].to_vec()
    }

    fn decode_point(bytes: &[u8]) -> Option<ToyPoint> {
        let raw: [u8; POINT_WIDTH] = bytes.try_into().ok()?;
        let value = u32::from_be_bytes([0, raw[0], raw[1], raw[2]]);
        if value == 0 || value >= TOY_MODULUS {
            return None;
        }
        // membership: the subgroup is exactly the kernel of x -> x^q
        (pow_mod(value as u64, TOY_ORDER as u64, TOY_MODULUS as u64) == 1)
            .then_some(ToyPoint(value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn generator_has_order_q() {
        let q = ToyScalar::from_u64(0); // q = 0 mod q
        assert_eq!(
            ToyGroup::mul(&ToyGroup::generator(), &q),
            ToyGroup::identity()
        );
        // no smaller order: q is prime, so it suffices that g != 1
        assert_ne!(ToyGroup::generator(), ToyGroup::identity());
    }

    #[test]
    fn scalar_mult_distributes_over_addition() {
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = ToyScalar::random(&mut rng);
            let b = ToyScalar::random(&mut rng);
            let g = ToyGroup::generator();
            let lhs = ToyGroup::mul(&g, &a.add(&b));
            let rhs = ToyGroup::add(&ToyGroup::mul(&g, &a), &ToyGroup::mul(&g, &b));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_round_trips() {
        let mut rng = ChaCha20Rng::seed_from_u64(8);
        for _ in 0..200 {
            let a = ToyScalar::random_nonzero(&mut rng);
            assert_eq!(a.mul(&a.invert().unwrap()), ToyScalar::one());
        }
        assert_eq!(ToyScalar::zero().invert(), None);
    }

    #[test]
    fn point_codec_round_trips_and_validates() {
        let mut rng = ChaCha20Rng::seed_from_u64(9);
        for _ in 0..100 {
            let k = ToyScalar::random(&mut rng);
            let p = ToyGroup::mul_generator(&k);
            let decoded = ToyGroup::decode_point(&ToyGroup::encode_point(&p)).unwrap();
            assert_eq!(decoded, p);
        }
        // 2 is a non-residue mod a safe prime, hence outside the subgroup
        assert_eq!(ToyGroup::decode_point(&[0, 0, 2]), None);
        assert_eq!(ToyGroup::decode_point(&[0, 0, 0]), None);
    }

    #[test]
    fn scalar_codec_rejects_out_of_range() {
        assert_eq!(
            ToyScalar::from_bytes(&(TOY_ORDER as u16).to_be_bytes()),
            None
        );
        assert_eq!(ToyScalar::from_bytes(&[1]), None);
        let s = ToyScalar::new(12345);
        assert_eq!(ToyScalar::from_bytes(&s.to_bytes()), Some(s));
    }
}
