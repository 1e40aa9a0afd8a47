//! Deterministic scenario engine.
//!
//! A [`Scenario`] binds one protocol (LTE baseline, NR baseline, or group
//! handover) to a UE population, an optional corruption set, an optional
//! adversary script, and a seed. [`run_scenario`] executes the control-plane
//! exchange over the simulated wire, prices it with the analytic
//! [`LatencyModel`], and returns a [`ScenarioReport`]: identical scenarios
//! (seed included) produce byte-identical reports.
//!
//! Scenarios are independent of one another, so [`sweep`] fans the
//! cross-product of protocols and UE counts out over a thread pool when the
//! `parallel` feature (default) is enabled; [`sweep_sequential`] is the
//! fallback and the reference ordering. Reports come back in input order
//! either way.

pub mod adversary;
pub mod csv;
pub mod time;

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::auth::{Issuer, PublicCredential, UeId};
use crate::baseline::trace::{
    group_handover_trace, run_lte_handover, run_nr_handover, LinkClass, SequenceTrace,
};
use crate::baseline::TraceError;
use crate::group::{Field, Group};
use crate::handover::{BaseStationState, HandoverError, UxnbAuthOutcome};

pub use adversary::{
    run_adversary, run_adversary_trials, AdversaryKind, AdversaryOutcome, AdversaryScript,
    AdversaryTrialSummary,
};
pub use time::{LatencyModel, SimTime};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("scenario needs at least one UE")]
    NoUes,
    #[error("threshold must be at least 1")]
    InvalidThreshold,
    #[error("corrupted UE index {0} outside the population")]
    CorruptionOutOfRange(u32),
    #[error("scenario has no adversary script")]
    MissingAdversary,
    #[error("adversary state contains bytes never seen on the wire")]
    AdversaryInvariantViolation,
    #[error("rate parameters must be positive")]
    InvalidRate,
    #[error("legitimate UxNB was rejected during setup")]
    SetupRejected,
    #[error("trace: {0}")]
    Trace(#[from] TraceError),
    #[error("handover: {0}")]
    Handover(#[from] HandoverError),
    #[error("auth: {0}")]
    Auth(#[from] crate::auth::AuthError),
}

/// Which protocol a scenario exercises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ProtocolKind {
    LteBaseline,
    NrBaseline,
    GroupHandover,
}

impl ProtocolKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ProtocolKind::LteBaseline => "lte",
            ProtocolKind::NrBaseline => "nr",
            ProtocolKind::GroupHandover => "group",
        }
    }

    pub fn parse(s: &str) -> Option<ProtocolKind> {
        match s {
            "lte" => Some(ProtocolKind::LteBaseline),
            "nr" => Some(ProtocolKind::NrBaseline),
            "group" => Some(ProtocolKind::GroupHandover),
            _ => None,
        }
    }
}

/// One run description. `corruption_set` holds UE indices whose uploaded
/// credentials get tampered in flight (group protocol only; the baselines
/// carry credentials without any cryptographic admission check).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub protocol: ProtocolKind,
    pub ue_count: u32,
    pub threshold: u32,
    pub corruption_set: BTreeSet<u32>,
    pub adversary: Option<AdversaryKind>,
    pub rng_seed: u64,
}

impl Scenario {
    pub fn new(protocol: ProtocolKind, ue_count: u32, threshold: u32, rng_seed: u64) -> Self {
        Scenario {
            protocol,
            ue_count,
            threshold,
            corruption_set: BTreeSet::new(),
            adversary: None,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.ue_count == 0 {
            return Err(SimError::NoUes);
        }
        if self.threshold == 0 {
            return Err(SimError::InvalidThreshold);
        }
        if let Some(&bad) = self.corruption_set.iter().find(|&&i| i >= self.ue_count) {
            return Err(SimError::CorruptionOutOfRange(bad));
        }
        Ok(())
    }
}

/// Trace-true transmission counts by link class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PacketCounts {
    pub ue_bs: u64,
    pub bs_bs: u64,
    pub bs_core: u64,
}

impl PacketCounts {
    pub fn total(&self) -> u64 {
        self.ue_bs + self.bs_bs + self.bs_core
    }

    fn of(trace: &SequenceTrace) -> PacketCounts {
        let counts = trace.per_link_counts();
        PacketCounts {
            ue_bs: counts[&LinkClass::UeBs],
            bs_bs: counts[&LinkClass::BsBs],
            bs_core: counts[&LinkClass::BsCore],
        }
    }
}

/// Additive components of the modeled handover time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeBreakdown {
    /// Fixed batch cost (UE start + core update), 0.05 s.
    pub base: SimTime,
    /// Completion acknowledgment, charged once per batch (baselines only).
    pub completion: SimTime,
    /// Per-UE credential transfer between base stations (baselines only).
    pub bs_bs_transfer: SimTime,
}

impl TimeBreakdown {
    pub fn total(&self) -> SimTime {
        self.base + self.completion + self.bs_bs_transfer
    }
}

/// Everything a run produces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioReport {
    pub protocol: ProtocolKind,
    pub ue_count: u32,
    pub threshold: u32,
    pub rng_seed: u64,
    pub handover_time: SimTime,
    pub time_breakdown: TimeBreakdown,
    /// Handover-phase transmissions by link class.
    pub packets: PacketCounts,
    /// The six-per-UE core-update chain (spans the UE-BS and BS-core classes).
    pub ue_core_packets: u64,
    /// Inter-BS packets that scale with the batch (request/ack pairs); the
    /// figure-level "BS-BS" series. Completion signaling is charged in time,
    /// once, and excluded here.
    pub bs_bs_handover_packets: u64,
    /// One-time admission exchange (group protocol), kept out of the
    /// per-handover accounting.
    pub setup_packets: PacketCounts,
    pub accepted: BTreeSet<u32>,
    pub rejected: BTreeSet<u32>,
    /// Group protocol: whether the single aggregate comparison admitted the
    /// whole batch.
    pub aggregate_hit: Option<bool>,
    pub adversary_outcome: AdversaryOutcome,
}

pub(crate) fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Derive an independent stream seed from a base seed.
pub fn subseed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

fn ue_index(id: &UeId) -> u32 {
    id.as_str()
        .strip_prefix("ue-")
        .and_then(|s| s.parse().ok())
        .expect("simulator UE id")
}

fn run_baseline(sc: &Scenario, model: &LatencyModel) -> Result<ScenarioReport, SimError> {
    let trace = match sc.protocol {
        ProtocolKind::LteBaseline => run_lte_handover(sc.ue_count)?,
        ProtocolKind::NrBaseline => run_nr_handover(sc.ue_count)?,
        ProtocolKind::GroupHandover => unreachable!("baseline runner"),
    };
    let breakdown = TimeBreakdown {
        base: model.base_handover_time,
        completion: model.completion_ack,
        bs_bs_transfer: model.bs_bs_per_packet.mul(trace.bs_bs_transfer_count()),
    };
    Ok(ScenarioReport {
        protocol: sc.protocol,
        ue_count: sc.ue_count,
        threshold: sc.threshold,
        rng_seed: sc.rng_seed,
        handover_time: breakdown.total(),
        time_breakdown: breakdown,
        packets: PacketCounts::of(&trace),
        ue_core_packets: trace.core_update_count(),
        bs_bs_handover_packets: trace.bs_bs_transfer_count(),
        setup_packets: PacketCounts::default(),
        accepted: (0..sc.ue_count).collect(),
        rejected: BTreeSet::new(),
        aggregate_hit: None,
        adversary_outcome: AdversaryOutcome::NotApplicable,
    })
}

fn run_group<G: Group>(sc: &Scenario, model: &LatencyModel) -> Result<ScenarioReport, SimError> {
    let mut issuer = Issuer::<G>::initialize(sc.threshold as usize, subseed(sc.rng_seed, 1))?;
    let mut corrupt_rng = ChaCha20Rng::seed_from_u64(subseed(sc.rng_seed, 2));
    let mut nonce_rng = ChaCha20Rng::seed_from_u64(subseed(sc.rng_seed, 3));

    // provisioning: the terrestrial BS already ran group authentication with
    // the core and holds the secret function
    let uxnb_share = issuer.issue_uxnb_share("uxnb-0")?;
    let terrestrial = BaseStationState::<G>::terrestrial(
        "terrestrial-gnb",
        issuer.params().clone(),
        issuer.export_secret_function(),
    );
    let mut uxnb =
        BaseStationState::<G>::uxnb("uxnb-0", issuer.params().clone(), uxnb_share.clone());

    // one-time admission exchange (setup, not per-handover cost):
    // credential up, sealed secret function back
    let uxnb_cred = uxnb_share.credential();
    let payload = match terrestrial.authenticate_uxnb(&uxnb_cred, &mut nonce_rng)? {
        UxnbAuthOutcome::Accept(payload) => payload,
        UxnbAuthOutcome::Reject => return Err(SimError::SetupRejected),
    };
    uxnb.receive_secret_function(&payload)?;
    let setup_packets = PacketCounts {
        ue_bs: 0,
        bs_bs: 2,
        bs_core: 0,
    };

    // the handover batch, with scripted in-flight corruption
    let mut creds: Vec<PublicCredential<G>> = (0..sc.ue_count)
        .map(|i| {
            issuer
                .issue_share(format!("ue-{i}"))
                .map(|s| s.credential())
        })
        .collect::<Result<_, _>>()?;
    for &i in &sc.corruption_set {
        let delta = G::Scalar::random_nonzero(&mut corrupt_rng);
        creds[i as usize].public_point =
            G::add(&creds[i as usize].public_point, &G::mul_generator(&delta));
    }

    let result = uxnb.group_handover(&creds)?;
    let accepted: BTreeSet<u32> = result.accepted.iter().map(ue_index).collect();
    let rejected: BTreeSet<u32> = result.rejected.iter().map(ue_index).collect();

    let accepted_vec: Vec<u32> = accepted.iter().copied().collect();
    let trace = group_handover_trace(sc.ue_count, &accepted_vec)?;

    let breakdown = TimeBreakdown {
        base: model.base_handover_time,
        completion: SimTime::ZERO,
        bs_bs_transfer: SimTime::ZERO,
    };
    Ok(ScenarioReport {
        protocol: sc.protocol,
        ue_count: sc.ue_count,
        threshold: sc.threshold,
        rng_seed: sc.rng_seed,
        handover_time: breakdown.total(),
        time_breakdown: breakdown,
        packets: PacketCounts::of(&trace),
        ue_core_packets: trace.core_update_count(),
        bs_bs_handover_packets: 0,
        setup_packets,
        accepted,
        rejected,
        aggregate_hit: Some(result.aggregate_hit),
        adversary_outcome: AdversaryOutcome::NotApplicable,
    })
}

/// Execute one scenario under the default latency constants.
pub fn run_scenario<G: Group>(sc: &Scenario) -> Result<ScenarioReport, SimError> {
    run_scenario_with_model::<G>(sc, &LatencyModel::default())
}

pub fn run_scenario_with_model<G: Group>(
    sc: &Scenario,
    model: &LatencyModel,
) -> Result<ScenarioReport, SimError> {
    sc.validate()?;
    let mut report = match sc.protocol {
        ProtocolKind::GroupHandover => run_group::<G>(sc, model)?,
        _ => run_baseline(sc, model)?,
    };
    if let Some(kind) = sc.adversary {
        report.adversary_outcome = adversary::run_adversary_inner::<G>(kind, sc.rng_seed)?;
    }
    Ok(report)
}

fn sweep_jobs(
    ue_counts: &[u32],
    protocols: &[ProtocolKind],
    threshold: u32,
    base_seed: u64,
) -> Vec<Scenario> {
    let mut jobs = Vec::with_capacity(ue_counts.len() * protocols.len());
    for (p_idx, &protocol) in protocols.iter().enumerate() {
        for &ue_count in ue_counts {
            let seed = subseed(base_seed, ((p_idx as u64) << 32) | ue_count as u64);
            jobs.push(Scenario::new(protocol, ue_count, threshold, seed));
        }
    }
    jobs
}

/// Cross-product sweep. Runs scenarios in parallel when the `parallel`
/// feature is on; the report order matches the sequential sweep regardless.
pub fn sweep<G: Group>(
    ue_counts: &[u32],
    protocols: &[ProtocolKind],
    threshold: u32,
    base_seed: u64,
) -> Result<Vec<ScenarioReport>, SimError> {
    let jobs = sweep_jobs(ue_counts, protocols, threshold, base_seed);
    #[cfg(feature = "parallel")]
    {
        jobs.par_iter().map(run_scenario::<G>).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(run_scenario::<G>).collect()
    }
}

/// Always-sequential sweep; the reference for benchmarks and for builds
/// without the `parallel` feature.
pub fn sweep_sequential<G: Group>(
    ue_counts: &[u32],
    protocols: &[ProtocolKind],
    threshold: u32,
    base_seed: u64,
) -> Result<Vec<ScenarioReport>, SimError> {
    sweep_jobs(ue_counts, protocols, threshold, base_seed)
        .iter()
        .map(run_scenario::<G>)
        .collect()
}

/// Sizing output for capacity injection.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityPlan {
    pub ue_count: u32,
    pub offered_load_mbps: f64,
    pub overflow_mbps: f64,
    /// Minimum UxNBs so their combined capacity covers the overflow.
    pub uxnbs_by_capacity: u64,
    /// The reported rule of thumb of one UxNB per ten overflow UEs; shown
    /// alongside the capacity figure, not reconciled with it.
    pub uxnbs_by_ten_ue_rule: u64,
}

/// Default per-UE demand: 100 simultaneous video UEs were measured to offer
/// 110 Mbps, i.e. 1.1 Mbps each.
pub const DEFAULT_PER_UE_DEMAND_MBPS: f64 = 1.1;
/// Average terrestrial LTE downlink.
pub const DEFAULT_TERRESTRIAL_CAPACITY_MBPS: f64 = 100.0;
/// Reported UxNB downlink at a 150 m flight height.
pub const DEFAULT_UXNB_CAPACITY_MBPS: f64 = 160.0;

/// How many UxNBs the overflow load needs (ceiling on capacity), plus the
/// ten-UE rule of thumb for comparison.
pub fn capacity_plan(
    ue_count: u32,
    per_ue_demand_mbps: f64,
    terrestrial_capacity_mbps: f64,
    uxnb_capacity_mbps: f64,
) -> Result<CapacityPlan, SimError> {
    if per_ue_demand_mbps <= 0.0 || terrestrial_capacity_mbps <= 0.0 || uxnb_capacity_mbps <= 0.0 {
        return Err(SimError::InvalidRate);
    }
    let offered = ue_count as f64 * per_ue_demand_mbps;
    let overflow = (offered - terrestrial_capacity_mbps).max(0.0);
    let uxnbs_by_capacity = (overflow / uxnb_capacity_mbps).ceil() as u64;
    let overflow_ues = (overflow / per_ue_demand_mbps).ceil() as u64;
    Ok(CapacityPlan {
        ue_count,
        offered_load_mbps: offered,
        overflow_mbps: overflow,
        uxnbs_by_capacity,
        uxnbs_by_ten_ue_rule: overflow_ues.div_ceil(10),
    })
}
