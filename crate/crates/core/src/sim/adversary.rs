//! Scripted adversaries for the security claims.
//!
//! Each script models an attacker constrained to bytes it saw on the
//! simulated wire: credentials, sealed payloads, service requests. The
//! harness records every transmitted frame in a [`WireLog`] and audits the
//! script afterwards: any stored byte string that never crossed the wire is
//! an invariant violation, which is how a buggy (or cheating) script gets
//! trapped rather than silently measured.
//!
//! The four wire-bound scripts are expected to end `Thwarted`:
//!
//! * `ReplayUxnbCredential` replays a captured UxNB credential. The
//!   admission check passes (the credential is genuine), but the secret
//!   function comes back sealed under the share the adversary lacks.
//! * `ReplayUeCredential` replays a captured UE credential into a
//!   handover batch, then tries to mint service traffic from public bytes.
//!   Origin authenticity is the claim under test: nothing the adversary can
//!   craft decrypts under `f(x_i)`. (Replaying a captured ciphertext
//!   verbatim is out of scope; there is no freshness counter in the scheme.)
//! * `EavesdropServiceTraffic` captures service requests and attempts
//!   plaintext recovery with every key derivable from public bytes.
//! * `FakeBsDesync` advances the NCC key chain on one side only; the next
//!   legitimate exchange must surface the mismatch.
//!
//! `StolenShareControl` is the harness sensitivity check: it is handed a
//! private share outright and must end `Succeeded`, proving the harness can
//! tell the difference.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::auth::{Issuer, PublicCredential};
use crate::baseline::keychain::{chains_agree, derive_key_hierarchy, handover_key_exchange};
use crate::group::{hash_to_digest, Field, Group};
use crate::handover::{
    ue_send_service_request, BaseStationState, EncryptedPayload, ServiceOutcome, ServiceRequest,
    UxnbAuthOutcome,
};
use crate::seal::{derive_symmetric_key, open, seal, SealedBox, KEY_LEN};

use super::{subseed, SimError};

/// The scripted attack strategies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AdversaryKind {
    ReplayUxnbCredential,
    ReplayUeCredential,
    EavesdropServiceTraffic,
    FakeBsDesync,
    /// Control: granted a stolen private share; must succeed.
    StolenShareControl,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 5] = [
        AdversaryKind::ReplayUxnbCredential,
        AdversaryKind::ReplayUeCredential,
        AdversaryKind::EavesdropServiceTraffic,
        AdversaryKind::FakeBsDesync,
        AdversaryKind::StolenShareControl,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AdversaryKind::ReplayUxnbCredential => "replay_uxnb_credential",
            AdversaryKind::ReplayUeCredential => "replay_ue_credential",
            AdversaryKind::EavesdropServiceTraffic => "eavesdrop_service_traffic",
            AdversaryKind::FakeBsDesync => "fake_bs_desync",
            AdversaryKind::StolenShareControl => "stolen_share_control",
        }
    }

    pub fn parse(s: &str) -> Option<AdversaryKind> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    /// The outcome the scheme promises for this script.
    pub fn expected_outcome(&self) -> AdversaryOutcome {
        match self {
            AdversaryKind::StolenShareControl => AdversaryOutcome::Succeeded,
            _ => AdversaryOutcome::Thwarted,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdversaryOutcome {
    Thwarted,
    Succeeded,
    NotApplicable,
}

/// Every frame the harness ever put on the simulated wire.
#[derive(Debug, Default)]
pub struct WireLog {
    frames: Vec<Vec<u8>>,
}

impl WireLog {
    pub fn transmit(&mut self, frame: Vec<u8>) -> &[u8] {
        self.frames.push(frame);
        self.frames.last().unwrap()
    }

    pub fn contains(&self, frame: &[u8]) -> bool {
        self.frames.iter().any(|f| f == frame)
    }
}

/// An adversary's entire state: its strategy and the frames it captured.
#[derive(Debug)]
pub struct AdversaryScript {
    pub kind: AdversaryKind,
    observed: Vec<Vec<u8>>,
}

impl AdversaryScript {
    pub fn new(kind: AdversaryKind) -> Self {
        AdversaryScript {
            kind,
            observed: Vec::new(),
        }
    }

    pub fn observe(&mut self, frame: &[u8]) {
        self.observed.push(frame.to_vec());
    }

    pub fn observed(&self) -> &[Vec<u8>] {
        &self.observed
    }
}

/// Wire-knowledge audit: every byte string a script stored must have been
/// transmitted. Catches scripts that stash secrets they were never sent.
pub fn audit_wire_knowledge(script: &AdversaryScript, wire: &WireLog) -> Result<(), SimError> {
    for frame in &script.observed {
        if !wire.contains(frame) {
            return Err(SimError::AdversaryInvariantViolation);
        }
    }
    Ok(())
}

/// Every symmetric key an adversary can derive from its captured bytes:
/// digests of whole frames, and share-key derivations that mistake public
/// values (`x_i`, points) for the private share. Deduplicated, since the
/// same identities recur across captured frames.
fn candidate_keys<G: Group>(script: &AdversaryScript) -> Vec<[u8; KEY_LEN]> {
    let mut keys = std::collections::BTreeSet::new();
    for frame in &script.observed {
        keys.insert(hash_to_digest(frame));
        if let Ok(cred) = PublicCredential::<G>::from_bytes(frame) {
            keys.insert(derive_symmetric_key(&cred.public_x));
            keys.insert(hash_to_digest(&G::encode_point(&cred.public_point)));
        }
        if let Ok(req) = ServiceRequest::<G>::from_bytes(frame) {
            keys.insert(derive_symmetric_key(&req.sender_x));
            keys.insert(hash_to_digest(&req.sender_x.to_bytes()));
        }
        if let Ok(payload) = EncryptedPayload::<G>::from_bytes(frame) {
            keys.insert(derive_symmetric_key(&payload.key_hint));
        }
    }
    keys.into_iter().collect()
}

fn try_open_any(keys: &[[u8; KEY_LEN]], body: &SealedBox) -> bool {
    keys.iter().any(|key| open(key, body).is_some())
}

struct Stage<G: Group> {
    issuer: Issuer<G>,
    terrestrial: BaseStationState<G>,
    uxnb: BaseStationState<G>,
    wire: WireLog,
    rng: ChaCha20Rng,
}

/// Common scenario: a terrestrial BS holding the secret function and a
/// legitimate UxNB admitted through the sealed transfer, every frame logged.
fn stage<G: Group>(seed: u64) -> Result<Stage<G>, SimError> {
    let mut issuer = Issuer::<G>::initialize(3, subseed(seed, 101))?;
    let mut rng = ChaCha20Rng::seed_from_u64(subseed(seed, 102));
    let uxnb_share = issuer.issue_uxnb_share("uxnb-0")?;
    let terrestrial = BaseStationState::<G>::terrestrial(
        "terrestrial-gnb",
        issuer.params().clone(),
        issuer.export_secret_function(),
    );
    let mut uxnb =
        BaseStationState::<G>::uxnb("uxnb-0", issuer.params().clone(), uxnb_share.clone());

    let mut wire = WireLog::default();
    wire.transmit(uxnb_share.credential().to_bytes());
    let payload = match terrestrial.authenticate_uxnb(&uxnb_share.credential(), &mut rng)? {
        UxnbAuthOutcome::Accept(payload) => payload,
        UxnbAuthOutcome::Reject => return Err(SimError::SetupRejected),
    };
    wire.transmit(payload.to_bytes());
    uxnb.receive_secret_function(&payload)?;
    Ok(Stage {
        issuer,
        terrestrial,
        uxnb,
        wire,
        rng,
    })
}

fn replay_uxnb_credential<G: Group>(seed: u64) -> Result<AdversaryOutcome, SimError> {
    let mut s = stage::<G>(seed)?;
    let mut script = AdversaryScript::new(AdversaryKind::ReplayUxnbCredential);
    // the admission exchange happened in the open
    script.observe(&s.wire.frames[0]);
    script.observe(&s.wire.frames[1]);

    // replaying the captured credential passes the validity check...
    let replayed = PublicCredential::<G>::from_bytes(&s.wire.frames[0])
        .expect("captured frame is a credential");
    let outcome = s.terrestrial.authenticate_uxnb(&replayed, &mut s.rng)?;
    let UxnbAuthOutcome::Accept(fresh_payload) = outcome else {
        return Err(SimError::SetupRejected);
    };
    script.observe(s.wire.transmit(fresh_payload.to_bytes()));

    // ...but the secret function is sealed under the share the adversary lacks
    let keys = candidate_keys::<G>(&script);
    let recovered = try_open_any(&keys, &fresh_payload.body)
        || EncryptedPayload::<G>::from_bytes(&s.wire.frames[1])
            .map(|p| try_open_any(&keys, &p.body))
            .unwrap_or(false);

    audit_wire_knowledge(&script, &s.wire)?;
    Ok(if recovered {
        AdversaryOutcome::Succeeded
    } else {
        AdversaryOutcome::Thwarted
    })
}

fn stolen_share_control<G: Group>(seed: u64) -> Result<AdversaryOutcome, SimError> {
    let mut s = stage::<G>(seed)?;
    // grant the adversary a UxNB share outright (this is the control arm;
    // the stolen material deliberately bypasses the wire log)
    let stolen = s.issuer.issue_uxnb_share("uxnb-compromised")?;
    let outcome = s
        .terrestrial
        .authenticate_uxnb(&stolen.credential(), &mut s.rng)?;
    let UxnbAuthOutcome::Accept(payload) = outcome else {
        return Err(SimError::SetupRejected);
    };
    let key = derive_symmetric_key(stolen.private_share());
    Ok(if open(&key, &payload.body).is_some() {
        AdversaryOutcome::Succeeded
    } else {
        AdversaryOutcome::Thwarted
    })
}

fn replay_ue_credential<G: Group>(seed: u64) -> Result<AdversaryOutcome, SimError> {
    let mut s = stage::<G>(seed)?;
    let mut script = AdversaryScript::new(AdversaryKind::ReplayUeCredential);

    let ue0 = s.issuer.issue_share("ue-0")?;
    let ue1 = s.issuer.issue_share("ue-1")?;
    script.observe(s.wire.transmit(ue0.credential().to_bytes()));
    script.observe(s.wire.transmit(ue1.credential().to_bytes()));
    s.uxnb
        .group_handover(&[ue0.credential(), ue1.credential()])?;

    let genuine = ue_send_service_request(&ue0, b"subscriber uplink data", &mut s.rng);
    script.observe(s.wire.transmit(genuine.to_bytes()));

    // the captured credential still verifies in a fresh batch...
    let replayed = PublicCredential::<G>::from_bytes(&script.observed()[0])
        .expect("captured frame is a credential");
    if !s.uxnb.verify_single_ue(&replayed)? {
        return Err(SimError::SetupRejected);
    }

    // ...yet no craftable request gets past the base station
    let mut any_accepted = false;
    for key in candidate_keys::<G>(&script) {
        let forged = ServiceRequest::<G> {
            sender_x: replayed.public_x.clone(),
            body: seal(&key, &mut s.rng, b"forged request"),
        };
        if matches!(
            s.uxnb.handle_service_request(&forged)?,
            ServiceOutcome::Accept(_)
        ) {
            any_accepted = true;
        }
    }
    // redirecting the captured ciphertext to another identity fails too
    let mut redirected = ServiceRequest::<G>::from_bytes(&script.observed()[2])
        .expect("captured frame is a service request");
    redirected.sender_x = ue1.public_x.clone();
    if matches!(
        s.uxnb.handle_service_request(&redirected)?,
        ServiceOutcome::Accept(_)
    ) {
        any_accepted = true;
    }

    audit_wire_knowledge(&script, &s.wire)?;
    Ok(if any_accepted {
        AdversaryOutcome::Succeeded
    } else {
        AdversaryOutcome::Thwarted
    })
}

fn eavesdrop_service_traffic<G: Group>(seed: u64) -> Result<AdversaryOutcome, SimError> {
    let mut s = stage::<G>(seed)?;
    let mut script = AdversaryScript::new(AdversaryKind::EavesdropServiceTraffic);
    // the admission exchange was also in the open
    script.observe(&s.wire.frames[0]);
    script.observe(&s.wire.frames[1]);
    let global_keys = candidate_keys::<G>(&script);

    let shares: Vec<_> = (0..10)
        .map(|i| s.issuer.issue_share(format!("ue-{i}")))
        .collect::<Result<_, _>>()?;
    let creds: Vec<_> = shares.iter().map(|sh| sh.credential()).collect();
    s.uxnb.group_handover(&creds)?;

    // 100 service requests cross the air interface; per ciphertext the
    // adversary tries the global candidates plus everything derivable from
    // that request's own public fields
    let mut recovered = false;
    for round in 0..10 {
        for share in &shares {
            let plaintext = format!("stream-{}-{}", round, share.ue_id);
            let req = ue_send_service_request(share, plaintext.as_bytes(), &mut s.rng);
            let frame = s.wire.transmit(req.to_bytes()).to_vec();
            script.observe(&frame);
            let mut keys = global_keys.clone();
            keys.push(hash_to_digest(&frame));
            keys.push(derive_symmetric_key(&req.sender_x));
            keys.push(hash_to_digest(&req.sender_x.to_bytes()));
            recovered |= try_open_any(&keys, &req.body);
        }
    }

    audit_wire_knowledge(&script, &s.wire)?;
    Ok(if recovered {
        AdversaryOutcome::Succeeded
    } else {
        AdversaryOutcome::Thwarted
    })
}

fn fake_bs_desync(seed: u64) -> Result<AdversaryOutcome, SimError> {
    let mut rng = ChaCha20Rng::seed_from_u64(subseed(seed, 103));
    let mut k_amf = [0u8; 32];
    rng.fill(&mut k_amf);
    let ue_chain = derive_key_hierarchy(&k_amf).expect("nonempty master key");
    let network_chain = ue_chain.clone();

    // a fake base station drives one handover the UE never participates in
    let network_chain = handover_key_exchange(&network_chain);

    // the next legitimate handover derives on both sides; the mismatch is
    // the detection signal
    let ue_next = handover_key_exchange(&ue_chain);
    let network_next = handover_key_exchange(&network_chain);
    let detected = !chains_agree(&ue_next, &network_next)
        && ue_next.derived.gnb_ue_enc != network_next.derived.gnb_ue_enc;
    Ok(if detected {
        AdversaryOutcome::Thwarted
    } else {
        AdversaryOutcome::Succeeded
    })
}

pub(crate) fn run_adversary_inner<G: Group>(
    kind: AdversaryKind,
    seed: u64,
) -> Result<AdversaryOutcome, SimError> {
    match kind {
        AdversaryKind::ReplayUxnbCredential => replay_uxnb_credential::<G>(seed),
        AdversaryKind::ReplayUeCredential => replay_ue_credential::<G>(seed),
        AdversaryKind::EavesdropServiceTraffic => eavesdrop_service_traffic::<G>(seed),
        AdversaryKind::FakeBsDesync => fake_bs_desync(seed),
        AdversaryKind::StolenShareControl => stolen_share_control::<G>(seed),
    }
}

/// Run the adversary scripted in `sc` and report its outcome.
pub fn run_adversary<G: Group>(sc: &super::Scenario) -> Result<super::ScenarioReport, SimError> {
    if sc.adversary.is_none() {
        return Err(SimError::MissingAdversary);
    }
    super::run_scenario::<G>(sc)
}

/// Seeded trial batch for one adversary kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversaryTrialSummary {
    pub kind: AdversaryKind,
    pub trials: u32,
    pub thwarted: u32,
    pub succeeded: u32,
}

impl AdversaryTrialSummary {
    /// Whether every trial landed on the outcome the scheme promises.
    pub fn all_as_expected(&self) -> bool {
        match self.kind.expected_outcome() {
            AdversaryOutcome::Thwarted => self.thwarted == self.trials,
            AdversaryOutcome::Succeeded => self.succeeded == self.trials,
            AdversaryOutcome::NotApplicable => false,
        }
    }
}

/// Run `trials` independent seeded episodes of one adversary kind.
/// Trials are independent, so they run on the thread pool under the
/// `parallel` feature; the tally is order-insensitive.
pub fn run_adversary_trials<G: Group>(
    kind: AdversaryKind,
    trials: u32,
    base_seed: u64,
) -> Result<AdversaryTrialSummary, SimError> {
    let seeds: Vec<u64> = (0..trials).map(|i| subseed(base_seed, i as u64)).collect();
    #[cfg(feature = "parallel")]
    let outcomes: Result<Vec<AdversaryOutcome>, SimError> = seeds
        .par_iter()
        .map(|&s| run_adversary_inner::<G>(kind, s))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Result<Vec<AdversaryOutcome>, SimError> = seeds
        .iter()
        .map(|&s| run_adversary_inner::<G>(kind, s))
        .collect();
    let outcomes = outcomes?;
    Ok(AdversaryTrialSummary {
        kind,
        trials,
        thwarted: outcomes
            .iter()
            .filter(|o| **o == AdversaryOutcome::Thwarted)
            .count() as u32,
        succeeded: outcomes
            .iter()
            .filter(|o| **o == AdversaryOutcome::Succeeded)
            .count() as u32,
    })
}
