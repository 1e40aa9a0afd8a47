//! UxNB admission and group handover.
//!
//! Two procedures sit at the center of this crate:
//!
//! 1. **UxNB authentication**: an arriving aerial base station presents its
//!    AMF-issued credential `(x_i, f(x_i)·P)` to the terrestrial BS. The
//!    terrestrial BS checks it against the secret function `f` and, on
//!    success, returns `f` itself encrypted under the symmetric key derived
//!    from `f(x_i)`. Only the holder of the private share can open it, which
//!    is what defeats credential replay.
//! 2. **Group handover**: each UE uploads `(x_i, f(x_i)·P)` to the UxNB.
//!    The UxNB sums the derived shares (`TotalX`) and the uploaded points
//!    (`TotalPoint`) and accepts the whole batch on the single comparison
//!    `TotalX·P == TotalPoint`. On a miss it falls back to checking UEs one
//!    by one, from the last index down.
//!
//! Handing `f` to every admitted UxNB makes that UxNB as powerful as the
//! issuer itself; the scheme trades that trust for handovers with no
//! per-UE inter-BS signaling, and this crate implements it as specified.
//! The plain summation in step 2 is not Lagrange interpolation, so batches
//! of any size `m >= 1` verify regardless of the group threshold.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::RngCore;
use thiserror::Error;

use crate::auth::{GroupParams, KeyShare, PublicCredential, UeId};
use crate::group::{Field, Group, MathError, SecretPolynomial};
use crate::seal::{derive_symmetric_key, open, seal, SealedBox};
use crate::wire::{put_u16_be, Reader, WireError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HandoverError {
    #[error("base station does not hold the secret function")]
    MissingSecretFunction,
    #[error("payload failed authenticated decryption")]
    DecryptionFailure,
    #[error("recovered polynomial does not match the held credential")]
    PolynomialMismatch,
    #[error("handover batch is empty")]
    EmptyBatch,
    #[error(transparent)]
    Math(#[from] MathError),
    #[error(transparent)]
    Wire(#[from] WireError),
}

/// Role of a simulated base station.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsRole {
    Terrestrial,
    Uxnb,
}

/// Result of admitting (or not) an arriving UxNB.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UxnbAuthOutcome<G: Group> {
    /// Credential verified; the sealed secret function travels back.
    Accept(EncryptedPayload<G>),
    /// "Not valid UxNB".
    Reject,
}

/// The secret function in transit: sealed under the key derived from the
/// applicant's private share, with `key_hint` naming the share that opens it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncryptedPayload<G: Group> {
    pub key_hint: G::Scalar,
    pub body: SealedBox,
}

impl<G: Group> EncryptedPayload<G> {
    /// Wire layout: `key_hint || nonce (12) || ct_len (u32) || ciphertext`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.key_hint.to_bytes();
        out.extend_from_slice(&self.body.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut reader = Reader::new(bytes);
        let key_hint = reader.scalar::<G::Scalar>()?;
        let body = SealedBox::read(&mut reader)?;
        reader.finish()?;
        Ok(EncryptedPayload { key_hint, body })
    }
}

/// Post-handover service traffic: the sender's public point is appended in
/// clear, the payload is sealed under the key derived from `f(sender_x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceRequest<G: Group> {
    pub sender_x: G::Scalar,
    pub body: SealedBox,
}

impl<G: Group> ServiceRequest<G> {
    /// Wire layout: `sender_x || nonce (12) || ct_len (u32) || ciphertext`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.sender_x.to_bytes();
        out.extend_from_slice(&self.body.to_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut reader = Reader::new(bytes);
        let sender_x = reader.scalar::<G::Scalar>()?;
        let body = SealedBox::read(&mut reader)?;
        reader.finish()?;
        Ok(ServiceRequest { sender_x, body })
    }
}

/// Why a service request was turned away.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ServiceRejection {
    /// The sender was never handed over to this base station.
    NotServed,
    /// Authentication of the ciphertext failed under the derived key.
    BadCiphertext,
}

/// Outcome of handling a service request.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ServiceOutcome {
    Accept(Vec<u8>),
    Reject(ServiceRejection),
}

/// Outcome of a group handover batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupResult {
    pub accepted: BTreeSet<UeId>,
    pub rejected: BTreeSet<UeId>,
    /// True when the single aggregate comparison admitted the whole batch.
    pub aggregate_hit: bool,
    /// Point-equality comparisons performed: 1 on an aggregate hit,
    /// `1 + m` when the per-UE fallback ran.
    pub point_comparisons: usize,
}

/// Running batch totals, as accumulated while UEs upload credentials.
///
/// `total_point` is public arithmetic; `total_scalar` requires the secret
/// function and therefore only exists on the base-station side.
#[derive(Debug, Clone)]
pub struct HandoverBatch<G: Group> {
    credentials: Vec<PublicCredential<G>>,
    total_point: G::Point,
    total_scalar: G::Scalar,
}

impl<G: Group> HandoverBatch<G> {
    pub fn new() -> Self {
        HandoverBatch {
            credentials: Vec::new(),
            total_point: G::identity(),
            total_scalar: G::Scalar::zero(),
        }
    }

    /// Fold one uploaded credential into the running totals. Deriving the
    /// share side of the sum needs the secret function, which is why only a
    /// base station holding it can maintain the batch.
    pub fn push(&mut self, secret_fn: &SecretPolynomial<G>, cred: PublicCredential<G>) {
        self.total_point = G::add(&self.total_point, &cred.public_point);
        self.total_scalar = self.total_scalar.add(&secret_fn.evaluate(&cred.public_x));
        self.credentials.push(cred);
    }

    pub fn credentials(&self) -> &[PublicCredential<G>] {
        &self.credentials
    }

    pub fn total_point(&self) -> &G::Point {
        &self.total_point
    }

    /// The single aggregate comparison: `TotalX * P == TotalPoint`.
    pub fn aggregate_matches(&self) -> bool {
        G::mul_generator(&self.total_scalar) == self.total_point
    }
}

impl<G: Group> Default for HandoverBatch<G> {
    fn default() -> Self {
        Self::new()
    }
}

/// One simulated base station.
///
/// Single-writer state machine: handovers and secret-function receipt
/// mutate it, verification helpers are read-only. A terrestrial BS starts
/// with the secret function (it ran group authentication with the core
/// beforehand); a UxNB only gains it through a successful admission.
#[derive(Clone)]
pub struct BaseStationState<G: Group> {
    pub bs_id: String,
    pub role: BsRole,
    pub params: GroupParams<G>,
    secret_fn: Option<SecretPolynomial<G>>,
    own_share: Option<KeyShare<G>>,
    served: BTreeMap<G::Scalar, UeId>,
}

impl<G: Group> BaseStationState<G> {
    pub fn terrestrial(
        bs_id: impl Into<String>,
        params: GroupParams<G>,
        secret_fn: SecretPolynomial<G>,
    ) -> Self {
        BaseStationState {
            bs_id: bs_id.into(),
            role: BsRole::Terrestrial,
            params,
            secret_fn: Some(secret_fn),
            own_share: None,
            served: BTreeMap::new(),
        }
    }

    pub fn uxnb(bs_id: impl Into<String>, params: GroupParams<G>, own_share: KeyShare<G>) -> Self {
        BaseStationState {
            bs_id: bs_id.into(),
            role: BsRole::Uxnb,
            params,
            secret_fn: None,
            own_share: Some(own_share),
            served: BTreeMap::new(),
        }
    }

    pub fn has_secret_function(&self) -> bool {
        self.secret_fn.is_some()
    }

    pub fn served_ues(&self) -> BTreeSet<UeId> {
        self.served.values().cloned().collect()
    }

    pub fn is_serving(&self, sender_x: &G::Scalar) -> bool {
        self.served.contains_key(sender_x)
    }

    /// Record UEs already attached (e.g. the terrestrial BS before handover).
    pub fn adopt_served(&mut self, creds: &[PublicCredential<G>]) {
        for cred in creds {
            self.served
                .insert(cred.public_x.clone(), cred.ue_id.clone());
        }
    }

    /// Drop UEs that completed handover to another base station.
    pub fn release_served(&mut self, ids: &BTreeSet<UeId>) {
        self.served.retain(|_, ue| !ids.contains(ue));
    }

    fn secret_fn(&self) -> Result<&SecretPolynomial<G>, HandoverError> {
        self.secret_fn
            .as_ref()
            .ok_or(HandoverError::MissingSecretFunction)
    }

    fn share_is_valid(secret_fn: &SecretPolynomial<G>, cred: &PublicCredential<G>) -> bool {
        // x = 0 evaluates to the public commitment; never a legitimate share
        !cred.public_x.is_zero()
            && G::mul_generator(&secret_fn.evaluate(&cred.public_x)) == cred.public_point
    }

    /// Admit (or refuse) an arriving UxNB and, on success, seal the secret
    /// function under the key derived from the applicant's private share.
    pub fn authenticate_uxnb<R: RngCore + ?Sized>(
        &self,
        applicant: &PublicCredential<G>,
        rng: &mut R,
    ) -> Result<UxnbAuthOutcome<G>, HandoverError> {
        let secret_fn = self.secret_fn()?;
        if !Self::share_is_valid(secret_fn, applicant) {
            return Ok(UxnbAuthOutcome::Reject);
        }
        let key = derive_symmetric_key(&secret_fn.evaluate(&applicant.public_x));
        let body = seal(&key, rng, &encode_polynomial::<G>(secret_fn));
        Ok(UxnbAuthOutcome::Accept(EncryptedPayload {
            key_hint: applicant.public_x.clone(),
            body,
        }))
    }

    /// Open a sealed secret function with our own share and install it.
    ///
    /// A payload keyed to some other share simply fails authenticated
    /// decryption. After decryption the recovered polynomial must reproduce
    /// our own public point, which guards against an issuer handing out a
    /// different function than the one our credential lives on.
    pub fn receive_secret_function(
        &mut self,
        payload: &EncryptedPayload<G>,
    ) -> Result<(), HandoverError> {
        let own = self
            .own_share
            .as_ref()
            .ok_or(HandoverError::MissingSecretFunction)?;
        let key = derive_symmetric_key(own.private_share());
        let plaintext = open(&key, &payload.body).ok_or(HandoverError::DecryptionFailure)?;
        let polynomial = decode_polynomial::<G>(&plaintext)?;
        if G::mul_generator(&polynomial.evaluate(&own.public_x)) != own.public_point {
            return Err(HandoverError::PolynomialMismatch);
        }
        self.secret_fn = Some(polynomial);
        Ok(())
    }

    /// Single-UE check against the secret function.
    pub fn verify_single_ue(&self, cred: &PublicCredential<G>) -> Result<bool, HandoverError> {
        Ok(Self::share_is_valid(self.secret_fn()?, cred))
    }

    /// Admit a batch of UEs: one aggregate comparison, with a per-UE
    /// fallback walk (last index down) when the aggregate misses.
    pub fn group_handover(
        &mut self,
        creds: &[PublicCredential<G>],
    ) -> Result<GroupResult, HandoverError> {
        let secret_fn = self.secret_fn()?.clone();
        if creds.is_empty() {
            return Err(HandoverError::EmptyBatch);
        }
        for (i, cred) in creds.iter().enumerate() {
            if cred.public_x.is_zero() {
                return Err(HandoverError::Math(MathError::ZeroEvaluationPoint));
            }
            if creds[..i].iter().any(|c| c.public_x == cred.public_x) {
                return Err(HandoverError::Math(MathError::DuplicateEvaluationPoint));
            }
        }

        let mut batch = HandoverBatch::<G>::new();
        for cred in creds {
            batch.push(&secret_fn, cred.clone());
        }

        let mut accepted = BTreeSet::new();
        let mut rejected = BTreeSet::new();
        let mut point_comparisons = 1;
        let aggregate_hit = batch.aggregate_matches();

        if aggregate_hit {
            for cred in &batch.credentials {
                accepted.insert(cred.ue_id.clone());
                self.served
                    .insert(cred.public_x.clone(), cred.ue_id.clone());
            }
        } else {
            for cred in batch.credentials.iter().rev() {
                point_comparisons += 1;
                if Self::share_is_valid(&secret_fn, cred) {
                    accepted.insert(cred.ue_id.clone());
                    self.served
                        .insert(cred.public_x.clone(), cred.ue_id.clone());
                } else {
                    rejected.insert(cred.ue_id.clone());
                }
            }
        }

        Ok(GroupResult {
            accepted,
            rejected,
            aggregate_hit,
            point_comparisons,
        })
    }

    /// Decrypt and answer a post-handover service request.
    pub fn handle_service_request(
        &self,
        req: &ServiceRequest<G>,
    ) -> Result<ServiceOutcome, HandoverError> {
        let secret_fn = self.secret_fn()?;
        if !self.served.contains_key(&req.sender_x) {
            return Ok(ServiceOutcome::Reject(ServiceRejection::NotServed));
        }
        let key = derive_symmetric_key(&secret_fn.evaluate(&req.sender_x));
        match open(&key, &req.body) {
            Some(plaintext) => Ok(ServiceOutcome::Accept(plaintext)),
            None => Ok(ServiceOutcome::Reject(ServiceRejection::BadCiphertext)),
        }
    }
}

impl<G: Group> fmt::Debug for BaseStationState<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseStationState")
            .field("bs_id", &self.bs_id)
            .field("role", &self.role)
            .field("has_secret_fn", &self.secret_fn.is_some())
            .field("served", &self.served.len())
            .finish()
    }
}

/// Encrypt a UE's service payload under its own private share.
pub fn ue_send_service_request<G: Group, R: RngCore + ?Sized>(
    share: &KeyShare<G>,
    plaintext: &[u8],
    rng: &mut R,
) -> ServiceRequest<G> {
    let key = derive_symmetric_key(share.private_share());
    ServiceRequest {
        sender_x: share.public_x.clone(),
        body: seal(&key, rng, plaintext),
    }
}

/// Canonical polynomial layout used inside the sealed transfer:
/// `coeff_count (u16) || coefficients` (constant term first).
pub fn encode_polynomial<G: Group>(poly: &SecretPolynomial<G>) -> Vec<u8> {
    let coeffs = poly.coefficients();
    let mut out = Vec::with_capacity(2 + coeffs.len() * G::Scalar::byte_width());
    put_u16_be(&mut out, coeffs.len() as u16);
    for c in coeffs {
        out.extend_from_slice(&c.to_bytes());
    }
    out
}

pub fn decode_polynomial<G: Group>(bytes: &[u8]) -> Result<SecretPolynomial<G>, HandoverError> {
    let mut reader = Reader::new(bytes);
    let count = reader.u16_be()? as usize;
    let mut coeffs = Vec::with_capacity(count);
    for _ in 0..count {
        coeffs.push(reader.scalar::<G::Scalar>()?);
    }
    reader.finish().map_err(HandoverError::Wire)?;
    SecretPolynomial::new(coeffs).map_err(HandoverError::Math)
}
