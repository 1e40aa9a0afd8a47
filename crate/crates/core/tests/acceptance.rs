//! Acceptance suite: every release-gating property, one test per criterion,
//! each printing a `criterion N: PASS/FAIL` line (visible with
//! `cargo test --test acceptance -- --nocapture`).
//!
//! Numeric expectations are exact where the model is exact (integer
//! picosecond latency arithmetic, packet counts) and trial-counted where
//! the property is statistical (seeded, so reruns are identical).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use uxnb_handover::baseline::{chains_agree, derive_key_hierarchy, handover_key_exchange};
use uxnb_handover::group::toy::{ToyGroup, ToyScalar, TOY_ORDER};
use uxnb_handover::group::{interpolate_in_exponent, Field, Group, SecretPolynomial};
use uxnb_handover::sim::csv::{handover_time_csv, packet_counts_csv, RunMetadata};
use uxnb_handover::sim::{run_adversary_trials, sweep, AdversaryKind, SimTime};
use uxnb_handover::{
    verify_group_aggregate, AggregateVerdict, BaseStationState, Issuer, ProtocolKind,
    PublicCredential, Scenario, UeId, UxnbAuthOutcome,
};

fn report(criterion: u32, ok: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} -- {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {criterion} failed: {detail}");
}

/// Corruption step bounded to order/5 so that up to five corrupted points
/// can never sum to a multiple of the group order: a corrupted batch is
/// *never* an accidental aggregate hit, not merely rarely.
fn bounded_delta(rng: &mut ChaCha20Rng) -> ToyScalar {
    ToyScalar::from_u64(rng.gen_range(1..=(TOY_ORDER as u64 / 5)))
}

fn corrupt(cred: &mut PublicCredential<ToyGroup>, rng: &mut ChaCha20Rng) {
    cred.public_point = ToyGroup::add(
        &cred.public_point,
        &ToyGroup::mul_generator(&bounded_delta(rng)),
    );
}

fn distinct_nonzero_points(count: usize, rng: &mut ChaCha20Rng) -> Vec<ToyScalar> {
    let mut points = Vec::with_capacity(count);
    while points.len() < count {
        let x = ToyScalar::random_nonzero(rng);
        if !points.contains(&x) {
            points.push(x);
        }
    }
    points
}

#[test]
fn criterion_1_aggregate_verification_matches_the_gm_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(0xACC1);
    let mut trials = 0u32;
    let mut disagreements = 0u32;

    for t in 1..=6usize {
        for m in t..=t + 4 {
            for _ in 0..100 {
                let mut issuer = Issuer::<ToyGroup>::initialize(t, rng.gen()).unwrap();
                let mut creds: Vec<PublicCredential<ToyGroup>> = (0..m)
                    .map(|i| issuer.issue_share(format!("ue-{i}")).unwrap().credential())
                    .collect();
                let corruptions = rng.gen_range(0..=2.min(m));
                let mut hit = BTreeSet::new();
                while hit.len() < corruptions {
                    hit.insert(rng.gen_range(0..m));
                }
                for &i in &hit {
                    corrupt(&mut creds[i], &mut rng);
                }

                let all_valid = creds.iter().all(|c| issuer.verify_credential_gm(c));
                let verdict = verify_group_aggregate(issuer.params(), &creds).unwrap();
                let agreed = (verdict == AggregateVerdict::Accept) == all_valid;
                trials += 1;
                if !agreed {
                    disagreements += 1;
                }
            }
        }
    }

    let elapsed = start.elapsed();
    report(
        1,
        disagreements == 0 && elapsed < Duration::from_secs(5),
        &format!(
            "aggregate vs per-credential oracle: {disagreements} disagreements in {trials} trials \
             (t in 1..=6, m in t..=t+4), {elapsed:.2?} < 5s"
        ),
    );
}

#[test]
fn criterion_2_exponent_interpolation_reconstructs_the_commitment() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(0xACC2);

    let mut hits = 0u32;
    for _ in 0..1000 {
        let t = rng.gen_range(1..=6usize);
        let extra = rng.gen_range(0..=4usize);
        let poly = SecretPolynomial::<ToyGroup>::random(t, &mut rng);
        let points = distinct_nonzero_points(t + extra, &mut rng);
        let shares: Vec<(ToyScalar, <ToyGroup as Group>::Point)> = points
            .iter()
            .map(|x| (*x, ToyGroup::mul_generator(&poly.evaluate(x))))
            .collect();
        let q = ToyGroup::mul_generator(poly.secret());
        if interpolate_in_exponent::<ToyGroup>(&shares).unwrap() == q {
            hits += 1;
        }
    }

    let mut undershoot_hits = 0u32;
    for _ in 0..1000 {
        let poly = SecretPolynomial::<ToyGroup>::random(3, &mut rng);
        let points = distinct_nonzero_points(2, &mut rng);
        let shares: Vec<(ToyScalar, <ToyGroup as Group>::Point)> = points
            .iter()
            .map(|x| (*x, ToyGroup::mul_generator(&poly.evaluate(x))))
            .collect();
        let q = ToyGroup::mul_generator(poly.secret());
        if interpolate_in_exponent::<ToyGroup>(&shares).unwrap() == q {
            undershoot_hits += 1;
        }
    }

    let elapsed = start.elapsed();
    report(
        2,
        hits == 1000 && undershoot_hits == 0 && elapsed < Duration::from_secs(5),
        &format!(
            "m >= t reconstruction {hits}/1000, m = t-1 false hits {undershoot_hits}/1000 (t=3), \
             {elapsed:.2?} < 5s"
        ),
    );
}

#[test]
fn criterion_3_group_handover_agrees_with_the_per_ue_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(0xACC3);
    let mut mismatches = 0u32;
    let mut aggregate_errors = 0u32;

    for _ in 0..200 {
        let mut issuer = Issuer::<ToyGroup>::initialize(3, rng.gen()).unwrap();
        let uxnb_share = issuer.issue_uxnb_share("uxnb-0").unwrap();
        let terrestrial = BaseStationState::terrestrial(
            "gnb-0",
            issuer.params().clone(),
            issuer.export_secret_function(),
        );
        let mut uxnb =
            BaseStationState::uxnb("uxnb-0", issuer.params().clone(), uxnb_share.clone());
        let mut nonce_rng = ChaCha20Rng::seed_from_u64(rng.gen());
        match terrestrial
            .authenticate_uxnb(&uxnb_share.credential(), &mut nonce_rng)
            .unwrap()
        {
            UxnbAuthOutcome::Accept(payload) => uxnb.receive_secret_function(&payload).unwrap(),
            UxnbAuthOutcome::Reject => panic!("legitimate UxNB rejected"),
        }

        let m = rng.gen_range(1..=200usize);
        let mut creds: Vec<PublicCredential<ToyGroup>> = (0..m)
            .map(|i| issuer.issue_share(format!("ue-{i}")).unwrap().credential())
            .collect();
        let corruptions = rng.gen_range(0..=5.min(m));
        let mut hit = BTreeSet::new();
        while hit.len() < corruptions {
            hit.insert(rng.gen_range(0..m));
        }
        for &i in &hit {
            corrupt(&mut creds[i], &mut rng);
        }

        let oracle: BTreeSet<UeId> = creds
            .iter()
            .filter(|c| terrestrial.verify_single_ue(c).unwrap())
            .map(|c| c.ue_id.clone())
            .collect();
        let result = uxnb.group_handover(&creds).unwrap();
        if result.accepted != oracle {
            mismatches += 1;
        }
        if result.aggregate_hit != (corruptions == 0) {
            aggregate_errors += 1;
        }
    }

    let elapsed = start.elapsed();
    report(
        3,
        mismatches == 0 && aggregate_errors == 0 && elapsed < Duration::from_secs(10),
        &format!(
            "200 batches (sizes 1..=200, 0..=5 corruptions): {mismatches} accepted-set \
             mismatches, {aggregate_errors} aggregate-hit errors, {elapsed:.2?} < 10s"
        ),
    );
}

#[test]
fn criterion_4_adversaries_are_thwarted_and_the_control_succeeds() {
    let mut lines = Vec::new();
    let mut ok = true;
    for kind in [
        AdversaryKind::ReplayUxnbCredential,
        AdversaryKind::ReplayUeCredential,
        AdversaryKind::EavesdropServiceTraffic,
        AdversaryKind::FakeBsDesync,
    ] {
        let summary = run_adversary_trials::<ToyGroup>(kind, 100, 0xACC4).unwrap();
        ok &= summary.thwarted == 100;
        lines.push(format!(
            "{} {}/100 thwarted",
            kind.as_str(),
            summary.thwarted
        ));
    }
    let control =
        run_adversary_trials::<ToyGroup>(AdversaryKind::StolenShareControl, 100, 0xACC4).unwrap();
    ok &= control.succeeded == 100;
    lines.push(format!(
        "stolen_share_control {}/100 succeeded",
        control.succeeded
    ));
    report(4, ok, &lines.join(", "));
}

#[test]
fn criterion_5_handover_time_model_is_exact() {
    let time_for = |protocol: ProtocolKind, n: u32| {
        uxnb_handover::run_scenario::<ToyGroup>(&Scenario::new(protocol, n, 3, 5))
            .unwrap()
            .handover_time
    };

    let group_constant = [1u32, 10, 100, 500].iter().all(|&n| {
        let t = time_for(ProtocolKind::GroupHandover, n);
        t == SimTime::from_millis(50) && t.seconds_string() == "0.050000000000"
    });

    let lte_gap = time_for(ProtocolKind::LteBaseline, 100) - time_for(ProtocolKind::LteBaseline, 1);
    let gap_exact = lte_gap == SimTime::from_picos(99 * 15_000); // 99 x 15 ns = 1.485 us

    let transfer = uxnb_handover::run_scenario::<ToyGroup>(&Scenario::new(
        ProtocolKind::LteBaseline,
        100,
        3,
        5,
    ))
    .unwrap()
    .time_breakdown
    .bs_bs_transfer;
    let transfer_exact = transfer == SimTime::from_nanos(1_500); // 1.5 us at 100 UEs

    report(
        5,
        group_constant && gap_exact && transfer_exact,
        &format!(
            "group time 0.0500000 s at n in {{1,10,100,500}}: {group_constant}; \
             LTE t(100)-t(1) = {} s (= 1.485 us): {gap_exact}; \
             LTE transfer at 100 UEs = {} s (= 1.5 us): {transfer_exact}",
            lte_gap.seconds_string(),
            transfer.seconds_string()
        ),
    );
}

#[test]
fn criterion_6_packet_counts_match_the_analytic_model() {
    let counts: Vec<u32> = (1..=100).collect();
    let reports = sweep::<ToyGroup>(
        &counts,
        &[ProtocolKind::LteBaseline, ProtocolKind::GroupHandover],
        3,
        6,
    )
    .unwrap();

    let mut ok = true;
    for report in &reports {
        ok &= report.ue_core_packets == 6 * report.ue_count as u64;
        match report.protocol {
            ProtocolKind::GroupHandover => {
                ok &= report.bs_bs_handover_packets == 0 && report.packets.bs_bs == 0;
            }
            _ => ok &= report.bs_bs_handover_packets == 2 * report.ue_count as u64,
        }
    }
    report(
        6,
        ok,
        "ue_core = 6/UE on both protocols; BS-BS handover packets = 2n (LTE) and 0 (group) \
         for n in 1..=100",
    );
}

#[test]
fn criterion_7_key_hierarchy_dual_derivation_and_desync_detection() {
    let mut rng = ChaCha20Rng::seed_from_u64(0xACC7);
    let mut dual_ok = 0u32;
    for _ in 0..100 {
        let mut k_amf = [0u8; 32];
        rng.fill(&mut k_amf);
        let network = derive_key_hierarchy(&k_amf).unwrap();
        let ue = derive_key_hierarchy(&k_amf).unwrap();
        if chains_agree(&network, &ue)
            && chains_agree(
                &handover_key_exchange(&network),
                &handover_key_exchange(&ue),
            )
        {
            dual_ok += 1;
        }
    }

    let mut desync_detected = 0u32;
    for _ in 0..100 {
        let mut k_amf = [0u8; 32];
        rng.fill(&mut k_amf);
        let ue = derive_key_hierarchy(&k_amf).unwrap();
        let network = handover_key_exchange(&derive_key_hierarchy(&k_amf).unwrap());
        // first exchange after the one-sided advance
        if !chains_agree(
            &handover_key_exchange(&ue),
            &handover_key_exchange(&network),
        ) {
            desync_detected += 1;
        }
    }

    report(
        7,
        dual_ok == 100 && desync_detected == 100,
        &format!(
            "dual derivation byte-identical {dual_ok}/100; desync detected on first \
             post-desync exchange {desync_detected}/100"
        ),
    );
}

#[test]
fn criterion_8_sweeps_are_byte_deterministic() {
    let counts = [1u32, 10, 50, 100];
    let protocols = [
        ProtocolKind::LteBaseline,
        ProtocolKind::NrBaseline,
        ProtocolKind::GroupHandover,
    ];
    let meta = RunMetadata::new(7, "toy");

    let run = || {
        let reports = sweep::<ToyGroup>(&counts, &protocols, 3, 7).unwrap();
        (
            handover_time_csv(&reports, &meta),
            packet_counts_csv(&reports, &meta),
        )
    };
    let (times_a, packets_a) = run();
    let (times_b, packets_b) = run();

    report(
        8,
        times_a == times_b && packets_a == packets_b,
        "repeated sweeps with identical config and seed emit byte-identical CSV artifacts",
    );
}
