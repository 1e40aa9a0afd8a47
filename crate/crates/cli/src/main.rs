//! Command-line runner: group/key lifecycle, scenario execution, sweeps,
//! adversary trial batches, and capacity planning.
//!
//! Exit codes: 0 success, 1 scenario failure (a run that did not go as
//! scripted), 2 usage or config error. Diagnostics go to stderr, data to
//! files under `--out` and to stdout.

mod config;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{load_config, parse_corrupt, parse_ue_counts, FileConfig};
use uxnb_handover::sim::csv::{adversary_csv, handover_time_csv, packet_counts_csv, RunMetadata};
use uxnb_handover::sim::{
    capacity_plan, run_adversary_trials, run_scenario, sweep, AdversaryKind, ProtocolKind,
    Scenario, ScenarioReport, SimError, DEFAULT_PER_UE_DEMAND_MBPS,
    DEFAULT_TERRESTRIAL_CAPACITY_MBPS, DEFAULT_UXNB_CAPACITY_MBPS,
};
use uxnb_handover::{BaseStationState, Field, Group, Issuer, P256Group, ToyGroup, UxnbAuthOutcome};

#[derive(Parser)]
#[command(
    name = "uxnb-handover",
    version,
    about = "Group handover simulator for drone-mounted base stations"
)]
struct Cli {
    /// TOML config file supplying defaults for any flag
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// RNG seed (default 0)
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Group instantiation: fast toy subgroup or a 256-bit curve
    #[arg(long, global = true, value_parser = ["toy", "standard"])]
    group: Option<String>,
    /// Output directory for CSV artifacts (default "results")
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Initialize a group and issue UE credentials
    Keygen(KeygenArgs),
    /// Run the UxNB admission exchange end to end
    AuthenticateUxnb(AuthUxnbArgs),
    /// Run one group-handover scenario
    Handover(HandoverArgs),
    /// Sweep protocols across UE counts and emit CSV artifacts
    Sweep(SweepArgs),
    /// Run seeded adversary trial batches
    Adversary(AdversaryArgs),
    /// Size the UxNB fleet for an offered load
    Capacity(CapacityArgs),
}

#[derive(Args, Default)]
struct KeygenArgs {
    #[arg(long, value_name = "N")]
    ue_count: Option<u32>,
    #[arg(long, value_name = "N")]
    threshold: Option<u32>,
    /// Derive each x_i from the UE identifier (SUPI-style) instead of randomly
    #[arg(long)]
    supi_from_id: bool,
}

#[derive(Args, Default)]
struct AuthUxnbArgs {
    #[arg(long, value_name = "N")]
    threshold: Option<u32>,
}

#[derive(Args, Default)]
struct HandoverArgs {
    #[arg(long, value_name = "N")]
    ue_count: Option<u32>,
    #[arg(long, value_name = "N")]
    threshold: Option<u32>,
    /// UE indices whose credentials get corrupted in flight, e.g. "17" or "1,2,3"
    #[arg(long, value_name = "LIST")]
    corrupt: Option<String>,
}

#[derive(Args, Default)]
struct SweepArgs {
    /// Range "A:B" (inclusive) or comma list "1,5,10"
    #[arg(long, value_name = "SPEC")]
    ue_counts: Option<String>,
    /// Comma list from {lte, nr, group}
    #[arg(long, value_name = "LIST")]
    protocols: Option<String>,
    #[arg(long, value_name = "N")]
    threshold: Option<u32>,
}

#[derive(Args, Default)]
struct AdversaryArgs {
    /// One adversary kind, or "all"
    #[arg(long, value_name = "KIND")]
    kind: Option<String>,
    #[arg(long, value_name = "N")]
    trials: Option<u32>,
}

#[derive(Args, Default)]
struct CapacityArgs {
    #[arg(long, value_name = "N")]
    ue_count: Option<u32>,
    #[arg(long, value_name = "MBPS")]
    per_ue_demand: Option<f64>,
    #[arg(long, value_name = "MBPS")]
    terrestrial_capacity: Option<f64>,
    #[arg(long, value_name = "MBPS")]
    uxnb_capacity: Option<f64>,
}

enum RunError {
    /// Bad flags or config: exit 2.
    Usage(String),
    /// The run itself failed or deviated from the script: exit 1.
    Scenario(String),
}

impl RunError {
    fn usage(msg: impl Into<String>) -> Self {
        RunError::Usage(msg.into())
    }

    fn scenario(msg: impl Into<String>) -> Self {
        RunError::Scenario(msg.into())
    }
}

impl From<SimError> for RunError {
    fn from(err: SimError) -> Self {
        match err {
            SimError::NoUes
            | SimError::InvalidThreshold
            | SimError::CorruptionOutOfRange(_)
            | SimError::InvalidRate
            | SimError::MissingAdversary => RunError::Usage(err.to_string()),
            other => RunError::Scenario(other.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(err: std::io::Error) -> Self {
        RunError::Scenario(format!("io: {err}"))
    }
}

/// Tracks flag-vs-config resolution and remembers which config values were
/// overridden from the command line.
struct Merge {
    overrides: Vec<String>,
}

impl Merge {
    fn new() -> Self {
        Merge {
            overrides: Vec::new(),
        }
    }

    fn pick<T>(&mut self, key: &str, cli: Option<T>, file: Option<T>, default: T) -> T {
        match (cli, file) {
            (Some(v), Some(_)) => {
                self.overrides.push(key.to_string());
                v
            }
            (Some(v), None) => v,
            (None, Some(v)) => v,
            (None, None) => default,
        }
    }
}

struct Ctx {
    seed: u64,
    group: String,
    out: PathBuf,
    meta: RunMetadata,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(RunError::Scenario(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), RunError> {
    let (file, config_digest) = match &cli.config {
        Some(path) => {
            let (file, digest) = load_config(path).map_err(|e| RunError::usage(e.to_string()))?;
            (file, digest)
        }
        None => (FileConfig::default(), "none".to_string()),
    };

    let mut merge = Merge::new();
    let seed = merge.pick("seed", cli.seed, file.seed, 0);
    let group = merge.pick(
        "group",
        cli.group.clone(),
        file.group.clone(),
        "toy".to_string(),
    );
    let out = merge.pick(
        "out",
        cli.out.clone(),
        file.out.clone().map(PathBuf::from),
        PathBuf::from("results"),
    );

    let command = match (cli.command, file.command.as_deref()) {
        (Some(cmd), from_file) => {
            if from_file.is_some() {
                merge.overrides.push("command".to_string());
            }
            cmd
        }
        (None, Some(name)) => command_from_name(name)?,
        (None, None) => {
            return Err(RunError::usage(
                "no command given; pass a subcommand or a config file with `command`",
            ))
        }
    };

    let mut meta = RunMetadata::new(seed, &group);
    meta.config_digest = config_digest;

    let mut ctx = Ctx {
        seed,
        group,
        out,
        meta,
    };

    match command {
        Command::Keygen(args) => {
            let ue_count = merge.pick("ue_count", args.ue_count, positive(&file.ue_count), 10);
            let threshold = merge.pick("threshold", args.threshold, positive(&file.threshold), 3);
            let supi = args.supi_from_id || file.supi_from_id.unwrap_or(false);
            ctx.meta.overrides = merge.overrides;
            dispatch_keygen(&ctx, ue_count, threshold, supi)
        }
        Command::AuthenticateUxnb(args) => {
            let threshold = merge.pick("threshold", args.threshold, positive(&file.threshold), 3);
            ctx.meta.overrides = merge.overrides;
            dispatch_authenticate(&ctx, threshold)
        }
        Command::Handover(args) => {
            let ue_count = merge.pick("ue_count", args.ue_count, positive(&file.ue_count), 10);
            let threshold = merge.pick("threshold", args.threshold, positive(&file.threshold), 3);
            let corrupt_cli = args
                .corrupt
                .as_deref()
                .map(parse_corrupt)
                .transpose()
                .map_err(RunError::usage)?;
            let corrupt_file = file
                .corrupt
                .as_ref()
                .map(|v| v.iter().map(|&i| i as u32).collect::<BTreeSet<u32>>());
            let corrupt = merge.pick("corrupt", corrupt_cli, corrupt_file, BTreeSet::new());
            ctx.meta.overrides = merge.overrides;
            dispatch_handover(&ctx, ue_count, threshold, corrupt)
        }
        Command::Sweep(args) => {
            let counts_spec = merge.pick(
                "ue_counts",
                args.ue_counts,
                file.ue_counts.clone(),
                "1:100".to_string(),
            );
            let protocols_cli = args.protocols.map(|s| {
                s.split(',')
                    .map(|p| p.trim().to_string())
                    .collect::<Vec<_>>()
            });
            let protocols_spec = merge.pick(
                "protocols",
                protocols_cli,
                file.protocols.clone(),
                vec!["lte".to_string(), "group".to_string()],
            );
            let threshold = merge.pick("threshold", args.threshold, positive(&file.threshold), 3);
            ctx.meta.overrides = merge.overrides;
            let counts = parse_ue_counts(&counts_spec).map_err(RunError::usage)?;
            let protocols = protocols_spec
                .iter()
                .map(|name| {
                    ProtocolKind::parse(name)
                        .ok_or_else(|| RunError::usage(format!("unknown protocol {name:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            dispatch_sweep(&ctx, &counts, &protocols, threshold)
        }
        Command::Adversary(args) => {
            let kind = merge.pick("kind", args.kind, file.kind.clone(), "all".to_string());
            let trials = merge.pick("trials", args.trials, positive(&file.trials), 100);
            ctx.meta.overrides = merge.overrides;
            let kinds: Vec<AdversaryKind> = if kind == "all" {
                AdversaryKind::ALL.to_vec()
            } else {
                vec![AdversaryKind::parse(&kind)
                    .ok_or_else(|| RunError::usage(format!("unknown adversary kind {kind:?}")))?]
            };
            dispatch_adversary(&ctx, &kinds, trials)
        }
        Command::Capacity(args) => {
            let ue_count = merge.pick("ue_count", args.ue_count, positive(&file.ue_count), 100);
            let demand = merge.pick(
                "per_ue_demand",
                args.per_ue_demand,
                file.per_ue_demand_mbps,
                DEFAULT_PER_UE_DEMAND_MBPS,
            );
            let terrestrial = merge.pick(
                "terrestrial_capacity",
                args.terrestrial_capacity,
                file.terrestrial_capacity_mbps,
                DEFAULT_TERRESTRIAL_CAPACITY_MBPS,
            );
            let uxnb = merge.pick(
                "uxnb_capacity",
                args.uxnb_capacity,
                file.uxnb_capacity_mbps,
                DEFAULT_UXNB_CAPACITY_MBPS,
            );
            ctx.meta.overrides = merge.overrides;
            run_capacity(ue_count, demand, terrestrial, uxnb)
        }
    }
}

fn positive(value: &Option<i64>) -> Option<u32> {
    value.map(|v| v as u32)
}

fn command_from_name(name: &str) -> Result<Command, RunError> {
    Ok(match name {
        "keygen" => Command::Keygen(KeygenArgs::default()),
        "authenticate-uxnb" => Command::AuthenticateUxnb(AuthUxnbArgs::default()),
        "handover" => Command::Handover(HandoverArgs::default()),
        "sweep" => Command::Sweep(SweepArgs::default()),
        "adversary" => Command::Adversary(AdversaryArgs::default()),
        "capacity" => Command::Capacity(CapacityArgs::default()),
        other => return Err(RunError::usage(format!("unknown command {other:?}"))),
    })
}

fn dispatch_keygen(ctx: &Ctx, ue_count: u32, threshold: u32, supi: bool) -> Result<(), RunError> {
    match ctx.group.as_str() {
        "standard" => run_keygen::<P256Group>(ctx, ue_count, threshold, supi),
        _ => run_keygen::<ToyGroup>(ctx, ue_count, threshold, supi),
    }
}

fn dispatch_authenticate(ctx: &Ctx, threshold: u32) -> Result<(), RunError> {
    match ctx.group.as_str() {
        "standard" => run_authenticate::<P256Group>(ctx, threshold),
        _ => run_authenticate::<ToyGroup>(ctx, threshold),
    }
}

fn dispatch_handover(
    ctx: &Ctx,
    ue_count: u32,
    threshold: u32,
    corrupt: BTreeSet<u32>,
) -> Result<(), RunError> {
    match ctx.group.as_str() {
        "standard" => run_handover::<P256Group>(ctx, ue_count, threshold, corrupt),
        _ => run_handover::<ToyGroup>(ctx, ue_count, threshold, corrupt),
    }
}

fn dispatch_sweep(
    ctx: &Ctx,
    counts: &[u32],
    protocols: &[ProtocolKind],
    threshold: u32,
) -> Result<(), RunError> {
    match ctx.group.as_str() {
        "standard" => run_sweep::<P256Group>(ctx, counts, protocols, threshold),
        _ => run_sweep::<ToyGroup>(ctx, counts, protocols, threshold),
    }
}

fn dispatch_adversary(ctx: &Ctx, kinds: &[AdversaryKind], trials: u32) -> Result<(), RunError> {
    match ctx.group.as_str() {
        "standard" => run_adversary_cmd::<P256Group>(ctx, kinds, trials),
        _ => run_adversary_cmd::<ToyGroup>(ctx, kinds, trials),
    }
}

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, RunError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

fn run_keygen<G: Group>(
    ctx: &Ctx,
    ue_count: u32,
    threshold: u32,
    supi: bool,
) -> Result<(), RunError> {
    let mut issuer = Issuer::<G>::initialize(threshold as usize, ctx.seed)
        .map_err(|e| RunError::usage(e.to_string()))?;
    let mut shares = Vec::with_capacity(ue_count as usize);
    for i in 0..ue_count {
        let ue_id = format!("ue-{i}");
        let share = if supi {
            issuer.issue_share_from_supi(ue_id.as_str(), &format!("supi-{i:010}"))
        } else {
            issuer.issue_share(ue_id.as_str())
        };
        shares.push(share.map_err(|e| RunError::scenario(e.to_string()))?);
    }

    let params_hex = hex::encode(issuer.params().to_bytes());
    write_artifact(&ctx.out, "group_params.hex", &format!("{params_hex}\n"))?;

    let mut credentials = String::from("ue_id,public_x,public_point\n");
    let mut secret_shares = String::from("ue_id,public_x,private_share,public_point\n");
    for share in &shares {
        let cred = share.credential();
        let x = hex::encode(cred.public_x.to_bytes());
        let point = hex::encode(G::encode_point(&cred.public_point));
        credentials.push_str(&format!("{},{x},{point}\n", cred.ue_id));
        secret_shares.push_str(&format!(
            "{},{x},{},{point}\n",
            cred.ue_id,
            hex::encode(share.private_share().to_bytes())
        ));
    }
    write_artifact(&ctx.out, "credentials.csv", &credentials)?;
    write_artifact(&ctx.out, "shares.csv", &secret_shares)?;

    println!(
        "group: {} (order {})",
        G::NAME,
        <G::Scalar as Field>::order()
    );
    println!(
        "threshold: {threshold}, credentials issued: {ue_count}, seed: {}",
        ctx.seed
    );
    println!(
        "issuer digest audit: {}",
        if issuer.audit_secret_digest() {
            "ok"
        } else {
            "FAILED"
        }
    );
    println!("wrote {}", ctx.out.join("group_params.hex").display());
    println!("wrote {}", ctx.out.join("credentials.csv").display());
    println!("wrote {}", ctx.out.join("shares.csv").display());
    Ok(())
}

fn run_authenticate<G: Group>(ctx: &Ctx, threshold: u32) -> Result<(), RunError> {
    let mut issuer = Issuer::<G>::initialize(threshold as usize, ctx.seed)
        .map_err(|e| RunError::usage(e.to_string()))?;
    let uxnb_share = issuer
        .issue_uxnb_share("uxnb-0")
        .map_err(|e| RunError::scenario(e.to_string()))?;
    let terrestrial = BaseStationState::<G>::terrestrial(
        "terrestrial-gnb",
        issuer.params().clone(),
        issuer.export_secret_function(),
    );
    let mut uxnb =
        BaseStationState::<G>::uxnb("uxnb-0", issuer.params().clone(), uxnb_share.clone());

    let mut rng = seeded_rng(ctx.seed);
    println!(
        "uxnb-0 -> terrestrial-gnb: credential ({} bytes)",
        uxnb_share.credential().to_bytes().len()
    );
    let payload = match terrestrial
        .authenticate_uxnb(&uxnb_share.credential(), &mut rng)
        .map_err(|e| RunError::scenario(e.to_string()))?
    {
        UxnbAuthOutcome::Accept(payload) => payload,
        UxnbAuthOutcome::Reject => {
            return Err(RunError::scenario(
                "terrestrial BS rejected a legitimate UxNB",
            ))
        }
    };
    println!(
        "terrestrial-gnb -> uxnb-0: sealed secret function ({} bytes)",
        payload.to_bytes().len()
    );
    uxnb.receive_secret_function(&payload)
        .map_err(|e| RunError::scenario(e.to_string()))?;
    println!("uxnb-0: decryption ok, recovered function matches own credential");
    if issuer.secret_recovery_risk() {
        eprintln!(
            "warning: {} UxNB shares issued with threshold {}; a coalition could recover the secret function",
            issuer.uxnb_shares_issued(),
            threshold
        );
    }
    Ok(())
}

fn format_report(report: &ScenarioReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("protocol: {}\n", report.protocol.as_str()));
    out.push_str(&format!(
        "ue_count: {}, threshold: {}, seed: {}\n",
        report.ue_count, report.threshold, report.rng_seed
    ));
    out.push_str(&format!(
        "handover_time: {} s\n",
        report.handover_time.seconds_string()
    ));
    out.push_str(&format!(
        "packets: ue_bs={} bs_bs={} bs_core={} (ue_core chain: {}, inter-BS transfer: {})\n",
        report.packets.ue_bs,
        report.packets.bs_bs,
        report.packets.bs_core,
        report.ue_core_packets,
        report.bs_bs_handover_packets
    ));
    if let Some(hit) = report.aggregate_hit {
        out.push_str(&format!("aggregate_hit: {hit}\n"));
    }
    out.push_str(&format!("accepted: {} UEs\n", report.accepted.len()));
    if report.rejected.is_empty() {
        out.push_str("rejected: none\n");
    } else {
        let list: Vec<String> = report.rejected.iter().map(|i| format!("ue-{i}")).collect();
        out.push_str(&format!("rejected: {}\n", list.join(",")));
    }
    out
}

fn run_handover<G: Group>(
    ctx: &Ctx,
    ue_count: u32,
    threshold: u32,
    corrupt: BTreeSet<u32>,
) -> Result<(), RunError> {
    let mut sc = Scenario::new(ProtocolKind::GroupHandover, ue_count, threshold, ctx.seed);
    sc.corruption_set = corrupt.clone();
    sc.validate()?;
    let report = run_scenario::<G>(&sc)?;

    let text = format_report(&report);
    print!("{text}");
    write_artifact(&ctx.out, "report.txt", &text)?;
    let reports = [report.clone()];
    write_artifact(
        &ctx.out,
        "handover_time.csv",
        &handover_time_csv(&reports, &ctx.meta),
    )?;
    write_artifact(
        &ctx.out,
        "packet_counts.csv",
        &packet_counts_csv(&reports, &ctx.meta),
    )?;

    if report.rejected != corrupt {
        return Err(RunError::scenario(format!(
            "rejected set {:?} does not match the scripted corruption {:?}",
            report.rejected, corrupt
        )));
    }
    Ok(())
}

fn run_sweep<G: Group>(
    ctx: &Ctx,
    counts: &[u32],
    protocols: &[ProtocolKind],
    threshold: u32,
) -> Result<(), RunError> {
    let reports = sweep::<G>(counts, protocols, threshold, ctx.seed)?;
    let times = write_artifact(
        &ctx.out,
        "handover_time.csv",
        &handover_time_csv(&reports, &ctx.meta),
    )?;
    let packets = write_artifact(
        &ctx.out,
        "packet_counts.csv",
        &packet_counts_csv(&reports, &ctx.meta),
    )?;
    println!(
        "ran {} scenarios across {} protocols",
        reports.len(),
        protocols.len()
    );
    println!("wrote {}", times.display());
    println!("wrote {}", packets.display());
    Ok(())
}

fn run_adversary_cmd<G: Group>(
    ctx: &Ctx,
    kinds: &[AdversaryKind],
    trials: u32,
) -> Result<(), RunError> {
    let mut summaries = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let summary = run_adversary_trials::<G>(kind, trials, ctx.seed)?;
        println!(
            "{}: thwarted {}/{} (expected {})",
            summary.kind.as_str(),
            summary.thwarted,
            summary.trials,
            match kind.expected_outcome() {
                uxnb_handover::AdversaryOutcome::Succeeded => "succeeded",
                _ => "thwarted",
            }
        );
        summaries.push(summary);
    }
    let path = write_artifact(
        &ctx.out,
        "adversary.csv",
        &adversary_csv(&summaries, &ctx.meta),
    )?;
    println!("wrote {}", path.display());
    if summaries.iter().all(|s| s.all_as_expected()) {
        Ok(())
    } else {
        Err(RunError::scenario(
            "an adversary trial deviated from the expected outcome",
        ))
    }
}

fn run_capacity(ue_count: u32, demand: f64, terrestrial: f64, uxnb: f64) -> Result<(), RunError> {
    let plan = capacity_plan(ue_count, demand, terrestrial, uxnb)?;
    println!("ue_count: {}", plan.ue_count);
    println!(
        "offered load: {:.3} Mbps ({demand} Mbps per UE)",
        plan.offered_load_mbps
    );
    println!(
        "terrestrial capacity: {terrestrial} Mbps -> overflow {:.3} Mbps",
        plan.overflow_mbps
    );
    println!(
        "UxNBs required by capacity ({uxnb} Mbps each): {}",
        plan.uxnbs_by_capacity
    );
    println!(
        "UxNBs by the ten-UE rule of thumb: {}",
        plan.uxnbs_by_ten_ue_rule
    );
    Ok(())
}

fn seeded_rng(seed: u64) -> impl rand::RngCore {
    use rand::SeedableRng;
    rand_chacha::ChaCha20Rng::seed_from_u64(seed)
}
