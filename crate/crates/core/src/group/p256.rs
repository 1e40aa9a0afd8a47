//! NIST P-256 (secp256r1) with affine arithmetic over `BigUint`.
//!
//! The curve has cofactor 1, so the whole point set (plus infinity) is the
//! prime-order group. Point compression uses the usual 0x02/0x03 parity tag;
//! the identity encodes as 33 zero bytes. Square roots for decompression use
//! the `p ≡ 3 (mod 4)` exponent shortcut.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, Zero};
use rand::Rng;

use super::{Field, Group};

const SCALAR_WIDTH: usize = 32;
const POINT_WIDTH: usize = 33;

struct CurveParams {
    /// Field prime.
    p: BigUint,
    /// Curve constant in y^2 = x^3 - 3x + b.
    b: BigUint,
    /// Group order.
    n: BigUint,
    gx: BigUint,
    gy: BigUint,
    /// (p + 1) / 4, the square-root exponent.
    sqrt_exp: BigUint,
}

fn hex(s: &str) -> BigUint {
    BigUint::parse_bytes(s.as_bytes(), 16).expect("valid hex constant")
}

fn params() -> &'static CurveParams {
    static PARAMS: OnceLock<CurveParams> = OnceLock::new();
    PARAMS.get_or_init(|| {
        let p = hex("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff");
        let sqrt_exp = (&p + 1u32) >> 2;
        CurveParams {
            b: hex("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"),
            n: hex("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"),
            gx: hex("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
            gy: hex("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
            p,
            sqrt_exp,
        }
    })
}

fn fp_add(a: &BigUint, b: &BigUint) -> BigUint {
    (a + b) % &params().p
}

fn fp_sub(a: &BigUint, b: &BigUint) -> BigUint {
    let p = &params().p;
    ((a + p) - b) % p
}

fn fp_mul(a: &BigUint, b: &BigUint) -> BigUint {
    (a * b) % &params().p
}

fn fp_inv(a: &BigUint) -> BigUint {
    a.modinv(&params().p)
        .expect("nonzero element of a prime field")
}

/// Scalar modulo the P-256 group order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct P256Scalar(BigUint);

impl P256Scalar {
    pub fn value(&self) -> &BigUint {
        &self.0
    }
}

impl Field for P256Scalar {
    fn zero() -> Self {
        P256Scalar(BigUint::zero())
    }

    fn one() -> Self {
        P256Scalar(BigUint::one())
    }

    fn from_u64(value: u64) -> Self {
        P256Scalar(BigUint::from(value) % &params().n)
    }

    fn from_biguint_reduced(value: &BigUint) -> Self {
        P256Scalar(value % &params().n)
    }

    fn add(&self, rhs: &Self) -> Self {
        P256Scalar((&self.0 + &rhs.0) % &params().n)
    }

    fn sub(&self, rhs: &Self) -> Self {
        let n = &params().n;
        P256Scalar(((&self.0 + n) - &rhs.0) % n)
    }

    fn mul(&self, rhs: &Self) -> Self {
        P256Scalar((&self.0 * &rhs.0) % &params().n)
    }

    fn neg(&self) -> Self {
        if self.0.is_zero() {
            Self::zero()
        } else {
            P256Scalar(&params().n - &self.0)
        }
    }

    fn invert(&self) -> Option<Self> {
        self.0.modinv(&params().n).map(P256Scalar)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn order() -> BigUint {
        params().n.clone()
    }

    fn byte_width() -> usize {
        SCALAR_WIDTH
    }

    fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; SCALAR_WIDTH];
        let raw = self.0.to_bytes_be();
        out[SCALAR_WIDTH - raw.len()..].copy_from_slice(&raw);
        out
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        if bytes.len() != SCALAR_WIDTH {
            return None;
        }
        let value = BigUint::from_bytes_be(bytes);
        (value < params().n).then_some(P256Scalar(value))
    }

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        P256Scalar(rng.gen_biguint_below(&params().n))
    }
}

/// Affine point or the point at infinity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum P256Point {
    Infinity,
    Affine { x: BigUint, y: BigUint },
}

/// Marker type implementing [`Group`] for NIST P-256.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct P256Group;

impl P256Point {
    fn double(&self) -> P256Point {
        let P256Point::Affine { x, y } = self else {
            return P256Point::Infinity;
        };
        if y.is_zero() {
            return P256Point::Infinity;
        }
        // lambda = (3x^2 - 3) / 2y, using a = -3
        let three = BigUint::from(3u32);
        let num = fp_mul(&three, &fp_sub(&fp_mul(x, x), &BigUint::one()));
        let lambda = fp_mul(&num, &fp_inv(&fp_mul(&BigUint::from(2u32), y)));
        let x3 = fp_sub(&fp_mul(&lambda, &lambda), &fp_add(x, x));
        let y3 = fp_sub(&fp_mul(&lambda, &fp_sub(x, &x3)), y);
        P256Point::Affine { x: x3, y: y3 }
    }
}

impl Group for P256Group {
    type Scalar = P256Scalar;
    type Point = P256Point;

    const NAME: &'static str = "nist-p256";

    fn generator() -> P256Point {
        P256Point::Affine {
            x: params().gx.clone(),
            y: params().gy.clone(),
        }
    }

    fn identity() -> P256Point {
        P256Point::Infinity
    }

    fn add(a: &P256Point, b: &P256Point) -> P256Point {
        let (x1, y1) = match a {
            P256Point::Infinity => return b.clone(),
            P256Point::Affine { x, y } => (x, y),
        };
        let (x2, y2) = match b {
            P256Point::Infinity => return a.clone(),
            P256Point::Affine { x, y } => (x, y),
        };
        if x1 == x2 {
            return if fp_add(y1, y2).is_zero() {
                P256Point::Infinity
            } else {
                a.double()
            };
        }
        let lambda = fp_mul(&fp_sub(y2, y1), &fp_inv(&fp_sub(x2, x1)));
        let x3 = fp_sub(&fp_sub(&fp_mul(&lambda, &lambda), x1), x2);
        let y3 = fp_sub(&fp_mul(&lambda, &fp_sub(x1, &x3)), y1);
        P256Point::Affine { x: x3, y: y3 }
    }

    fn mul(point: &P256Point, scalar: &P256Scalar) -> P256Point {
        let mut acc = P256Point::Infinity;
        let bits = scalar.0.bits();
        for i in (0..bits).rev() {
            acc = acc.double();
            if scalar.0.bit(i) {
                acc = Self::add(&acc, point);
            }
        }
        acc
    }

    fn point_width() -> usize {
        POINT_WIDTH
    }

    fn encode_point(point: &P256Point) -> Vec<u8> {
        match point {
            P256Point::Infinity => vec![0u8; POINT_WIDTH],
            P256Point::Affine { x, y } => {
                let mut out = vec![0u8; POINT_WIDTH];
                out[0] = if y.bit(0) { 0x03 } else { 0x02 };
                let raw = x.to_bytes_be();
                out[POINT_WIDTH - raw.len()..].copy_from_slice(&raw);
                out
            }
        }
    }

    fn decode_point(bytes: &[u8]) -> Option<P256Point> {
        if bytes.len() != POINT_WIDTH {
            return None;
        }
        let prm = params();
        match bytes[0] {
            0x00 => bytes[1..]
                .iter()
                .all(|&b| b == 0)
                .then_some(P256Point::Infinity),
            tag @ (0x02 | 0x03) => {
                let x = BigUint::from_bytes_be(&bytes[1..]);
                if x >= prm.p {
                    return None;
                }
                // y^2 = x^3 - 3x + b
                let rhs = fp_add(
                    &fp_sub(
                        &fp_mul(&fp_mul(&x, &x), &x),
                        &fp_mul(&BigUint::from(3u32), &x),
                    ),
                    &prm.b,
                );
                let y = rhs.modpow(&prm.sqrt_exp, &prm.p);
                if fp_mul(&y, &y) != rhs {
                    return None; // x is not on the curve
                }
                let y = if y.bit(0) == (tag == 0x03) {
                    y
                } else {
                    fp_sub(&BigUint::zero(), &y)
                };
                Some(P256Point::Affine { x, y })
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn generator_is_on_curve_and_has_order_n() {
        let prm = params();
        let lhs = fp_mul(&prm.gy, &prm.gy);
        let rhs = fp_add(
            &fp_sub(
                &fp_mul(&fp_mul(&prm.gx, &prm.gx), &prm.gx),
                &fp_mul(&BigUint::from(3u32), &prm.gx),
            ),
            &prm.b,
        );
        assert_eq!(lhs, rhs);
        let n = P256Scalar::from_biguint_reduced(&prm.n);
        assert!(n.is_zero());
        // n * G via (n-1) * G + G, since n reduces to zero as a scalar
        let n_minus_1 = P256Scalar(&prm.n - 1u32);
        let almost = P256Group::mul_generator(&n_minus_1);
        assert_eq!(
            P256Group::add(&almost, &P256Group::generator()),
            P256Point::Infinity
        );
    }

    #[test]
    fn scalar_mult_distributes() {
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..8 {
            let a = P256Scalar::random(&mut rng);
            let b = P256Scalar::random(&mut rng);
            let lhs = P256Group::mul_generator(&a.add(&b));
            let rhs = P256Group::add(&P256Group::mul_generator(&a), &P256Group::mul_generator(&b));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn point_codec_round_trips() {
        let mut rng = ChaCha20Rng::seed_from_u64(12);
        for _ in 0..8 {
            let k = P256Scalar::random(&mut rng);
            let point = P256Group::mul_generator(&k);
            let encoded = P256Group::encode_point(&point);
            assert_eq!(P256Group::decode_point(&encoded), Some(point));
        }
        let id = P256Group::encode_point(&P256Point::Infinity);
        assert_eq!(P256Group::decode_point(&id), Some(P256Point::Infinity));
    }

    #[test]
    fn point_codec_rejects_malformed_input() {
        let valid = P256Group::encode_point(&P256Group::generator());
        let mut bad_tag = valid.clone();
        bad_tag[0] = 0x05;
        assert_eq!(P256Group::decode_point(&bad_tag), None);
        assert_eq!(P256Group::decode_point(&valid[..32]), None);
        // x >= p is not canonical
        let mut oversized = vec![0xffu8; POINT_WIDTH];
        oversized[0] = 0x02;
        assert_eq!(P256Group::decode_point(&oversized), None);
        // nonzero padding after the infinity tag
        let mut bad_identity = vec![0u8; POINT_WIDTH];
        bad_identity[5] = 1;
        assert_eq!(P256Group::decode_point(&bad_identity), None);
    }

    #[test]
    fn scalar_inverse_round_trips() {
        let mut rng = ChaCha20Rng::seed_from_u64(13);
        let a = P256Scalar::random(&mut rng);
        let inv = a.invert().unwrap();
        assert_eq!(a.mul(&inv), P256Scalar::one());
        assert!(P256Scalar::zero().invert().is_none());
    }
}
