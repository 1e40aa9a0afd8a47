//! Threshold group authentication and group handover for drone-mounted base
//! stations (UxNBs), with the LTE / 5G NR handover flows as an executable
//! baseline and a deterministic control-plane simulator on top.
//!
//! The protocol stack, bottom up:
//!
//! * [`group`]: prime-order group arithmetic, sharing polynomials, and
//!   Lagrange interpolation (plain and in the exponent). Generic over two
//!   instantiations: a brute-forceable toy subgroup and NIST P-256.
//! * [`auth`]: the group manager (AMF) issuing key shares, plus GM-mode
//!   and aggregate-mode credential verification.
//! * [`handover`]: UxNB admission with the sealed secret-function
//!   transfer, batch group handover with per-UE fallback, and post-handover
//!   service traffic.
//! * [`baseline`]: the standardized LTE/NR 13-step handover sequences, the
//!   5G key hierarchy, and NCC-driven key refresh.
//! * [`sim`]: seeded scenarios, the analytic latency model, adversary
//!   scripts, sweeps, CSV artifacts, and the capacity planner.
//!
//! Everything is deterministic under a seed; sweeps and adversary trial
//! batches parallelize with the `parallel` feature (on by default) and fall
//! back to sequential execution without it.
//!
//! The whole flow in miniature:
//!
//! ```
//! use rand::SeedableRng;
//! use uxnb_handover::{
//!     BaseStationState, Issuer, ServiceOutcome, ToyGroup, UxnbAuthOutcome,
//!     ue_send_service_request,
//! };
//!
//! let mut issuer = Issuer::<ToyGroup>::initialize(3, 42)?;
//! let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(7);
//!
//! // the terrestrial BS holds the secret function; the UxNB earns it
//! let uxnb_share = issuer.issue_uxnb_share("uxnb-0")?;
//! let terrestrial = BaseStationState::terrestrial(
//!     "gnb-0",
//!     issuer.params().clone(),
//!     issuer.export_secret_function(),
//! );
//! let mut uxnb = BaseStationState::uxnb("uxnb-0", issuer.params().clone(), uxnb_share.clone());
//! let UxnbAuthOutcome::Accept(sealed) =
//!     terrestrial.authenticate_uxnb(&uxnb_share.credential(), &mut rng)?
//! else {
//!     unreachable!("credential was issued by the group manager");
//! };
//! uxnb.receive_secret_function(&sealed)?;
//!
//! // a batch of UEs hands over on one aggregate comparison
//! let shares: Vec<_> = (0..5)
//!     .map(|i| issuer.issue_share(format!("ue-{i}")))
//!     .collect::<Result<_, _>>()?;
//! let creds: Vec<_> = shares.iter().map(|s| s.credential()).collect();
//! let result = uxnb.group_handover(&creds)?;
//! assert!(result.aggregate_hit);
//!
//! // and served UEs talk over share-derived keys
//! let request = ue_send_service_request(&shares[0], b"hello", &mut rng);
//! assert!(matches!(
//!     uxnb.handle_service_request(&request)?,
//!     ServiceOutcome::Accept(body) if body == b"hello"
//! ));
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod auth;
pub mod baseline;
pub mod group;
pub mod handover;
pub mod seal;
pub mod sim;
pub mod wire;

pub use auth::{
    initialize_group, verify_group_aggregate, AggregateVerdict, AuthError, GroupParams, Issuer,
    KeyShare, PublicCredential, UeId,
};
pub use group::{
    p256::P256Group, toy::ToyGroup, Field, Group, GroupDescriptor, MathError, SecretPolynomial,
};
pub use handover::{
    ue_send_service_request, BaseStationState, BsRole, EncryptedPayload, GroupResult,
    HandoverError, ServiceOutcome, ServiceRequest, UxnbAuthOutcome,
};
pub use sim::{
    capacity_plan, run_adversary, run_scenario, sweep, sweep_sequential, AdversaryKind,
    AdversaryOutcome, LatencyModel, ProtocolKind, Scenario, ScenarioReport, SimError, SimTime,
};
