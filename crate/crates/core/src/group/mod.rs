//! Scalar-field and prime-order-group arithmetic.
//!
//! Everything above this module is generic over a [`Group`]: a cyclic group of
//! prime order `q` together with its scalar field `Z_q`. Two instantiations
//! ship with the crate:
//!
//! * [`toy::ToyGroup`]: the order-65393 subgroup of `Z_130787^*`. Small
//!   enough for exhaustive and brute-force tests, fast enough for thousands
//!   of randomized trials.
//! * [`p256::P256Group`]: the NIST P-256 elliptic curve, for runs at a
//!   realistic credential size.
//!
//! Arithmetic here is *not* constant time and is not meant to guard real
//! keys; the crate is a protocol model.

pub mod p256;
pub mod poly;
pub mod toy;

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigUint;
use rand::Rng;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use poly::{
    interpolate_at_zero, interpolate_in_exponent, lagrange_coefficient, lagrange_coefficients,
    SecretPolynomial,
};

/// Number of bytes produced by [`hash_to_digest`].
pub const DIGEST_LEN: usize = 32;

/// Errors from field and interpolation arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MathError {
    /// Two evaluation points coincide; the Lagrange denominator would be zero.
    #[error("evaluation points must be pairwise distinct")]
    DuplicateEvaluationPoint,
    /// An evaluation point of zero would hand out the secret `f(0)` directly.
    #[error("evaluation point 0 is not allowed")]
    ZeroEvaluationPoint,
    /// A polynomial needs at least one coefficient.
    #[error("polynomial has no coefficients")]
    EmptyPolynomial,
    /// A sharing polynomial of degree t-1 must have a nonzero leading term.
    #[error("leading coefficient must be nonzero")]
    ZeroLeadingCoefficient,
    /// The constant term is the group secret and must be nonzero.
    #[error("constant term (group secret) must be nonzero")]
    ZeroSecret,
    /// A share index was out of range for the supplied evaluation points.
    #[error("index {index} out of bounds for {len} evaluation points")]
    IndexOutOfBounds { index: usize, len: usize },
}

/// An element of the prime field `Z_q`, where `q` is the group order.
///
/// Values are canonical residues in `[0, q)`. `to_bytes` is the fixed-width
/// big-endian encoding of the residue ([`Field::byte_width`] bytes), so
/// digests and wire layouts are reproducible.
pub trait Field:
    Sized + Clone + PartialEq + Eq + PartialOrd + Ord + Hash + Debug + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(value: u64) -> Self;
    /// Reduce an arbitrary non-negative integer into the field.
    fn from_biguint_reduced(value: &BigUint) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn invert(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;

    /// The field modulus `q` (= the group order).
    fn order() -> BigUint;
    /// Width of the canonical encoding in bytes.
    fn byte_width() -> usize;
    /// Fixed-width big-endian encoding of the residue.
    fn to_bytes(&self) -> Vec<u8>;
    /// Inverse of [`Field::to_bytes`]; rejects wrong widths and values `>= q`.
    fn from_bytes(bytes: &[u8]) -> Option<Self>;

    /// Uniform residue in `[0, q)`.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Uniform residue in `[1, q)`.
    fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let v = Self::random(rng);
            if !v.is_zero() {
                return v;
            }
        }
    }
}

/// A cyclic group of prime order with an attached scalar field.
///
/// The group operation is written additively: `add` combines two elements,
/// `mul` is scalar multiplication, and `identity` is the neutral element.
pub trait Group: Sized + Clone + PartialEq + Eq + Debug + Send + Sync + 'static {
    type Scalar: Field;
    type Point: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    /// Short name of the instantiation, e.g. `"toy-130787"` or `"nist-p256"`.
    const NAME: &'static str;

    fn generator() -> Self::Point;
    fn identity() -> Self::Point;
    fn add(a: &Self::Point, b: &Self::Point) -> Self::Point;
    fn mul(point: &Self::Point, scalar: &Self::Scalar) -> Self::Point;

    fn mul_generator(scalar: &Self::Scalar) -> Self::Point {
        Self::mul(&Self::generator(), scalar)
    }

    /// Width of the canonical point encoding in bytes.
    fn point_width() -> usize;
    /// Canonical fixed-width point encoding (compressed for curves).
    fn encode_point(point: &Self::Point) -> Vec<u8>;
    /// Inverse of [`Group::encode_point`]; validates group membership.
    fn decode_point(bytes: &[u8]) -> Option<Self::Point>;

    fn descriptor() -> GroupDescriptor {
        GroupDescriptor {
            curve_id: Self::NAME,
            order: <Self::Scalar as Field>::order(),
            generator: Self::encode_point(&Self::generator()),
        }
    }
}

/// Public description of a concrete group instantiation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupDescriptor {
    pub curve_id: &'static str,
    /// The prime group order `q`.
    pub order: BigUint,
    /// Canonical encoding of the generator.
    pub generator: Vec<u8>,
}

/// SHA-256 of `data`; the one hash used for digests, key derivation and
/// key-chain edges throughout the crate.
pub fn hash_to_digest(data: &[u8]) -> [u8; DIGEST_LEN] {
    let out = Sha256::digest(data);
    out.as_slice()
        .try_into()
        .expect("sha256 output is 32 bytes")
}

/// Hash `data` under a domain-separation `tag` and reduce into the field.
///
/// Used for deriving public evaluation points from subscriber identifiers
/// (SUPI-style issuance). The modular reduction has negligible bias for the
/// shipped groups.
pub fn hash_to_scalar<F: Field>(tag: &[u8], data: &[u8]) -> F {
    let mut hasher = Sha256::new();
    hasher.update(tag);
    hasher.update(data);
    let digest = hasher.finalize();
    F::from_biguint_reduced(&BigUint::from_bytes_be(&digest))
}
