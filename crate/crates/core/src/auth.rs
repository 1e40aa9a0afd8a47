//! Group authentication: share issuance and credential verification.
//!
//! The core network (AMF) plays the group-manager role. At initialization it
//! draws a degree `t-1` polynomial `f` with group secret `s = f(0)` and
//! publishes the group parameters: the commitment `Q = s·P`, the threshold,
//! and the digest `H(s)`. Each participant receives a key share
//! `(x_i, f(x_i))` with public credential `(x_i, f(x_i)·P)`.
//!
//! Verification runs in two modes:
//! * **GM mode**: the issuer recomputes `f(x_i)·P` and compares.
//! * **Aggregate mode**: anyone holding only the public parameters combines
//!   `m >= t` credentials with interpolation in the exponent and checks the
//!   result against `Q`.
//!
//! `H(s)` is published but only consumed by [`Issuer::audit_secret_digest`],
//! a self-check that the issuer's polynomial still matches the advertised
//! digest; no protocol step depends on it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::group::{
    hash_to_digest, hash_to_scalar, interpolate_in_exponent, Field, Group, GroupDescriptor,
    MathError, SecretPolynomial, DIGEST_LEN,
};
use crate::wire::{put_identifier, put_u32_be, read_identifier, Reader, WireError};

const SUPI_X_TAG: &[u8] = b"uxnb-handover/supi-x/v1";
const PARAMS_VERSION: u8 = 1;

/// Opaque participant identifier (`ID_i`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UeId(String);

impl UeId {
    pub fn new(id: impl Into<String>) -> Self {
        UeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for UeId {
    fn from(value: &str) -> Self {
        UeId(value.to_owned())
    }
}

impl From<String> for UeId {
    fn from(value: String) -> Self {
        UeId(value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AuthError {
    #[error("threshold must be at least 1")]
    InvalidThreshold,
    #[error("identity {0} already holds a share")]
    DuplicateIdentity(UeId),
    #[error("all nonzero evaluation points have been issued")]
    ShareSpaceExhausted,
    #[error("derived evaluation point already in use or zero")]
    EvaluationPointInUse,
    #[error("credential list is empty")]
    EmptyCredentialList,
    #[error(transparent)]
    Math(#[from] MathError),
}

/// Public group context published by the issuer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupParams<G: Group> {
    pub descriptor: GroupDescriptor,
    /// `Q = s·P`.
    pub commitment_q: G::Point,
    /// Threshold `t` (= polynomial degree + 1).
    pub threshold: usize,
    /// `H(s)` over the canonical secret encoding.
    pub secret_digest: [u8; DIGEST_LEN],
    /// Every evaluation point ever issued; no duplicates, never zero.
    pub issued_points: BTreeSet<G::Scalar>,
}

impl<G: Group> GroupParams<G> {
    /// Canonical layout: `version || curve_id_len(u8) || curve_id ||
    /// threshold(u32) || Q || digest(32) || count(u32) || x_i ascending`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.push(PARAMS_VERSION);
        let id = self.descriptor.curve_id.as_bytes();
        out.push(id.len() as u8);
        out.extend_from_slice(id);
        put_u32_be(&mut out, self.threshold as u32);
        out.extend_from_slice(&G::encode_point(&self.commitment_q));
        out.extend_from_slice(&self.secret_digest);
        put_u32_be(&mut out, self.issued_points.len() as u32);
        for x in &self.issued_points {
            out.extend_from_slice(&x.to_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut reader = Reader::new(bytes);
        let version = reader.u8()?;
        if version != PARAMS_VERSION {
            return Err(WireError::UnsupportedVersion(version));
        }
        let id_len = reader.u8()? as usize;
        let id_raw = reader.take(id_len)?;
        let descriptor = G::descriptor();
        if descriptor.curve_id.as_bytes() != id_raw {
            return Err(WireError::InvalidIdentifier);
        }
        let threshold = reader.u32_be()? as usize;
        let commitment_q = reader.point::<G>()?;
        let secret_digest: [u8; DIGEST_LEN] = reader.take(DIGEST_LEN)?.try_into().unwrap();
        let count = reader.u32_be()? as usize;
        let mut issued_points = BTreeSet::new();
        for _ in 0..count {
            issued_points.insert(reader.scalar::<G::Scalar>()?);
        }
        reader.finish()?;
        Ok(GroupParams {
            descriptor,
            commitment_q,
            threshold,
            secret_digest,
            issued_points,
        })
    }
}

/// Public half of a key share: what a participant shows to a verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicCredential<G: Group> {
    pub ue_id: UeId,
    pub public_x: G::Scalar,
    /// `f(x_i)·P`.
    pub public_point: G::Point,
}

impl<G: Group> PublicCredential<G> {
    /// Canonical layout: `ue_id_len(u16) || ue_id || x || point`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        put_identifier(&mut out, self.ue_id.as_str()).expect("identifier fits u16 length");
        out.extend_from_slice(&self.public_x.to_bytes());
        out.extend_from_slice(&G::encode_point(&self.public_point));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut reader = Reader::new(bytes);
        let cred = Self::read(&mut reader)?;
        reader.finish()?;
        Ok(cred)
    }

    pub(crate) fn read(reader: &mut Reader<'_>) -> Result<Self, WireError> {
        let ue_id = UeId::new(read_identifier(reader)?);
        let public_x = reader.scalar::<G::Scalar>()?;
        let public_point = reader.point::<G>()?;
        Ok(PublicCredential {
            ue_id,
            public_x,
            public_point,
        })
    }
}

/// A participant's full credential, including the private share `f(x_i)`.
#[derive(Clone, PartialEq, Eq)]
pub struct KeyShare<G: Group> {
    pub ue_id: UeId,
    pub public_x: G::Scalar,
    private_share: G::Scalar,
    pub public_point: G::Point,
}

impl<G: Group> KeyShare<G> {
    pub fn private_share(&self) -> &G::Scalar {
        &self.private_share
    }

    pub fn credential(&self) -> PublicCredential<G> {
        PublicCredential {
            ue_id: self.ue_id.clone(),
            public_x: self.public_x.clone(),
            public_point: self.public_point.clone(),
        }
    }

    /// Canonical layout: credential fields followed by the private share.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.credential().to_bytes();
        out.extend_from_slice(&self.private_share.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut reader = Reader::new(bytes);
        let cred = PublicCredential::<G>::read(&mut reader)?;
        let private_share = reader.scalar::<G::Scalar>()?;
        reader.finish()?;
        Ok(KeyShare {
            ue_id: cred.ue_id,
            public_x: cred.public_x,
            private_share,
            public_point: cred.public_point,
        })
    }
}

impl<G: Group> fmt::Debug for KeyShare<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KeyShare")
            .field("ue_id", &self.ue_id)
            .field("public_x", &self.public_x)
            .field("private_share", &"<redacted>")
            .field("public_point", &self.public_point)
            .finish()
    }
}

/// Outcome of the aggregate confirmation check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateVerdict {
    /// `m >= t` credentials combined to the commitment `Q`.
    Accept,
    /// Fewer than `t` credentials; the check is not probative below the
    /// threshold, so no Accept/Reject claim is made.
    TooFew,
    /// The combination missed `Q`: at least one credential is invalid.
    Reject,
}

/// The group manager: holds the secret polynomial and the issuance registry.
///
/// Single-writer: issuance mutates the registry and the issuance RNG, so a
/// given issuer must be driven from one place. Verification methods take
/// `&self` and are safe to call concurrently.
pub struct Issuer<G: Group> {
    polynomial: SecretPolynomial<G>,
    params: GroupParams<G>,
    registry: BTreeMap<UeId, PublicCredential<G>>,
    uxnb_issued: usize,
    rng: ChaCha20Rng,
}

/// Initialization: draw the group polynomial and publish parameters.
/// Deterministic for a fixed seed.
pub fn initialize_group<G: Group>(threshold: usize, rng_seed: u64) -> Result<Issuer<G>, AuthError> {
    Issuer::initialize(threshold, rng_seed)
}

impl<G: Group> Issuer<G> {
    pub fn initialize(threshold: usize, rng_seed: u64) -> Result<Self, AuthError> {
        if threshold < 1 {
            return Err(AuthError::InvalidThreshold);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
        let polynomial = SecretPolynomial::<G>::random(threshold, &mut rng);
        let params = GroupParams {
            descriptor: G::descriptor(),
            commitment_q: G::mul_generator(polynomial.secret()),
            threshold,
            secret_digest: hash_to_digest(&polynomial.secret().to_bytes()),
            issued_points: BTreeSet::new(),
        };
        Ok(Issuer {
            polynomial,
            params,
            registry: BTreeMap::new(),
            uxnb_issued: 0,
            rng,
        })
    }

    pub fn params(&self) -> &GroupParams<G> {
        &self.params
    }

    pub fn registry(&self) -> &BTreeMap<UeId, PublicCredential<G>> {
        &self.registry
    }

    pub fn is_registered(&self, ue_id: &UeId) -> bool {
        self.registry.contains_key(ue_id)
    }

    /// Hand the secret polynomial to a terrestrial base station over the
    /// secure core link. This is provisioning, not a wire message: the
    /// polynomial never appears in a simulated packet unencrypted.
    pub fn export_secret_function(&self) -> SecretPolynomial<G> {
        self.polynomial.clone()
    }

    /// Number of shares issued to base stations rather than UEs.
    pub fn uxnb_shares_issued(&self) -> usize {
        self.uxnb_issued
    }

    /// True once enough base-station shares exist that a coalition of
    /// compromised UxNBs could reconstruct the secret polynomial outright.
    pub fn secret_recovery_risk(&self) -> bool {
        self.uxnb_issued >= self.params.threshold
    }

    /// Self-check that the published `H(s)` still matches the polynomial.
    pub fn audit_secret_digest(&self) -> bool {
        hash_to_digest(&self.polynomial.secret().to_bytes()) == self.params.secret_digest
    }

    fn fresh_point(&mut self) -> Result<G::Scalar, AuthError> {
        let nonzero_scalars = <G::Scalar as Field>::order() - 1u32;
        if BigUint::from(self.params.issued_points.len()) >= nonzero_scalars {
            return Err(AuthError::ShareSpaceExhausted);
        }
        loop {
            let x = G::Scalar::random_nonzero(&mut self.rng);
            if !self.params.issued_points.contains(&x) {
                return Ok(x);
            }
        }
    }

    fn issue_at(&mut self, ue_id: UeId, public_x: G::Scalar) -> KeyShare<G> {
        let private_share = self.polynomial.evaluate(&public_x);
        let public_point = G::mul_generator(&private_share);
        let share = KeyShare {
            ue_id: ue_id.clone(),
            public_x: public_x.clone(),
            private_share,
            public_point,
        };
        self.params.issued_points.insert(public_x);
        self.registry.insert(ue_id, share.credential());
        share
    }

    /// Issue a share at a fresh random evaluation point.
    pub fn issue_share(&mut self, ue_id: impl Into<UeId>) -> Result<KeyShare<G>, AuthError> {
        let ue_id = ue_id.into();
        if self.registry.contains_key(&ue_id) {
            return Err(AuthError::DuplicateIdentity(ue_id));
        }
        let x = self.fresh_point()?;
        Ok(self.issue_at(ue_id, x))
    }

    /// Issue a share whose evaluation point is derived from a subscriber
    /// identifier (hash-to-scalar of an encrypted SUPI/SUCI string), removing
    /// the need to distribute fresh `x_i` values out of band.
    pub fn issue_share_from_supi(
        &mut self,
        ue_id: impl Into<UeId>,
        supi: &str,
    ) -> Result<KeyShare<G>, AuthError> {
        let ue_id = ue_id.into();
        if self.registry.contains_key(&ue_id) {
            return Err(AuthError::DuplicateIdentity(ue_id));
        }
        let x: G::Scalar = hash_to_scalar(SUPI_X_TAG, supi.as_bytes());
        if x.is_zero() || self.params.issued_points.contains(&x) {
            return Err(AuthError::EvaluationPointInUse);
        }
        Ok(self.issue_at(ue_id, x))
    }

    /// Issue a share to a UxNB and track how much of the threshold the
    /// aerial fleet now holds (see [`Issuer::secret_recovery_risk`]).
    pub fn issue_uxnb_share(&mut self, bs_id: impl Into<UeId>) -> Result<KeyShare<G>, AuthError> {
        let share = self.issue_share(bs_id)?;
        self.uxnb_issued += 1;
        Ok(share)
    }

    /// GM-mode verification: recompute `f(x_i)·P` and compare. Mathematical
    /// validity only; registry membership is a separate policy question.
    pub fn verify_credential_gm(&self, cred: &PublicCredential<G>) -> bool {
        G::mul_generator(&self.polynomial.evaluate(&cred.public_x)) == cred.public_point
    }
}

impl<G: Group> fmt::Debug for Issuer<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Issuer")
            .field("polynomial", &self.polynomial)
            .field("threshold", &self.params.threshold)
            .field("registered", &self.registry.len())
            .field("uxnb_issued", &self.uxnb_issued)
            .finish()
    }
}

/// Aggregate-mode verification (confirmation phase without the GM).
///
/// Combines the credentials with interpolation in the exponent and compares
/// against `Q`. Any `m >= t` works: interpolation through more than `t`
/// points of a degree `t-1` polynomial still lands on `f(0)`.
///
/// Malformed batches (duplicate or zero evaluation points) are protocol
/// errors, distinct from an honest `Reject`.
pub fn verify_group_aggregate<G: Group>(
    params: &GroupParams<G>,
    creds: &[PublicCredential<G>],
) -> Result<AggregateVerdict, AuthError> {
    if creds.is_empty() {
        return Err(AuthError::EmptyCredentialList);
    }
    let shares: Vec<(G::Scalar, G::Point)> = creds
        .iter()
        .map(|c| (c.public_x.clone(), c.public_point.clone()))
        .collect();
    let combined = interpolate_in_exponent::<G>(&shares)?;
    if creds.len() < params.threshold {
        return Ok(AggregateVerdict::TooFew);
    }
    if combined == params.commitment_q {
        Ok(AggregateVerdict::Accept)
    } else {
        Ok(AggregateVerdict::Reject)
    }
}
