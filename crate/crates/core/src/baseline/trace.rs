//! Message-sequence traces for the baseline and group handover flows.
//!
//! The LTE and NR procedures both run thirteen steps per UE. Twelve of them
//! are transmissions; the handover decision at the serving BS is a local
//! action and produces no packet. The only structural difference between the
//! two stacks is who sends the handover command to the UE: the target BS in
//! LTE, the serving BS in NR, plus the core-node names (MME/SGW vs AMF/UPF).
//!
//! Six of the transmissions form the per-UE core-update chain (attach,
//! uplink allocation, then the path-switch/bearer-update exchange) and are
//! tallied by [`SequenceTrace::core_update_count`]. That chain is identical
//! in the group handover flow: batching removes inter-BS signaling, not the
//! UE's conversation with the core.

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("a handover needs at least one UE")]
    InvalidCount,
}

/// Protocol flavor of a trace (controls node naming).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stack {
    Lte,
    Nr,
    Group,
}

/// Simulated network node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Ue(u32),
    ServingBs,
    TargetBs,
    /// MME in LTE, AMF in 5G.
    MobilityCore,
    /// SGW in LTE, UPF in 5G.
    GatewayCore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    Ue,
    Bs,
    Core,
}

impl Node {
    pub fn role(&self) -> NodeRole {
        match self {
            Node::Ue(_) => NodeRole::Ue,
            Node::ServingBs | Node::TargetBs => NodeRole::Bs,
            Node::MobilityCore | Node::GatewayCore => NodeRole::Core,
        }
    }

    pub fn label(&self, stack: Stack) -> String {
        match (self, stack) {
            (Node::Ue(i), _) => format!("ue-{i}"),
            (Node::ServingBs, Stack::Lte) => "s-bs".into(),
            (Node::TargetBs, Stack::Lte) => "t-bs".into(),
            (Node::ServingBs, Stack::Nr) => "s-gnb".into(),
            (Node::TargetBs, Stack::Nr) => "t-gnb".into(),
            (Node::ServingBs, Stack::Group) => "terrestrial-gnb".into(),
            (Node::TargetBs, Stack::Group) => "uxnb".into(),
            (Node::MobilityCore, Stack::Lte) => "mme".into(),
            (Node::GatewayCore, Stack::Lte) => "sgw".into(),
            (Node::MobilityCore, _) => "amf".into(),
            (Node::GatewayCore, _) => "upf".into(),
        }
    }
}

/// Link bucket of a transmission, fixed by the endpoint roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinkClass {
    UeBs,
    BsBs,
    /// Signaling on the core side, including core-internal hops.
    BsCore,
}

impl LinkClass {
    pub fn of(sender: &Node, receiver: &Node) -> LinkClass {
        match (sender.role(), receiver.role()) {
            (NodeRole::Bs, NodeRole::Bs) => LinkClass::BsBs,
            (NodeRole::Ue, _) | (_, NodeRole::Ue) => LinkClass::UeBs,
            _ => LinkClass::BsCore,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            LinkClass::UeBs => "ue_bs",
            LinkClass::BsBs => "bs_bs",
            LinkClass::BsCore => "bs_core",
        }
    }
}

/// Procedure step carried by a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepKind {
    MeasurementControl,
    MeasurementReport,
    HandoverRequest,
    HandoverAck,
    HandoverCommand,
    CellAttach,
    UplinkAllocation,
    PathSwitchRequest,
    BearerUpdate,
    BearerUpdateAck,
    PathSwitchAck,
    HandoverComplete,
    /// Group flow only: a UE uploading `(x_i, f(x_i)·P)` to the UxNB.
    UeCredentialTransfer,
}

impl StepKind {
    /// The six per-UE packets that update the core network (steps 7-12 of
    /// the standardized sequences).
    pub fn is_core_update(&self) -> bool {
        matches!(
            self,
            StepKind::CellAttach
                | StepKind::UplinkAllocation
                | StepKind::PathSwitchRequest
                | StepKind::BearerUpdate
                | StepKind::BearerUpdateAck
                | StepKind::PathSwitchAck
        )
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            StepKind::MeasurementControl => "measurement_control",
            StepKind::MeasurementReport => "measurement_report",
            StepKind::HandoverRequest => "handover_request",
            StepKind::HandoverAck => "handover_ack",
            StepKind::HandoverCommand => "handover_command",
            StepKind::CellAttach => "cell_attach",
            StepKind::UplinkAllocation => "uplink_allocation",
            StepKind::PathSwitchRequest => "path_switch_request",
            StepKind::BearerUpdate => "bearer_update",
            StepKind::BearerUpdateAck => "bearer_update_ack",
            StepKind::PathSwitchAck => "path_switch_ack",
            StepKind::HandoverComplete => "handover_complete",
            StepKind::UeCredentialTransfer => "ue_credential_transfer",
        }
    }
}

/// One simulated control-plane packet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlMessage {
    pub seq: u32,
    pub sender: Node,
    pub receiver: Node,
    pub kind: StepKind,
    pub link_class: LinkClass,
    /// Abstract units; a credential transfer is 1 unit.
    pub payload_size: u32,
}

/// Ordered transmissions of one scenario, with counting helpers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTrace {
    pub stack: Stack,
    pub messages: Vec<ControlMessage>,
}

impl SequenceTrace {
    pub fn per_link_counts(&self) -> BTreeMap<LinkClass, u64> {
        let mut counts = BTreeMap::new();
        counts.insert(LinkClass::UeBs, 0);
        counts.insert(LinkClass::BsBs, 0);
        counts.insert(LinkClass::BsCore, 0);
        for msg in &self.messages {
            *counts.get_mut(&msg.link_class).unwrap() += 1;
        }
        counts
    }

    /// Per-UE core-update packets (six per UE in every flow).
    pub fn core_update_count(&self) -> u64 {
        self.messages
            .iter()
            .filter(|m| m.kind.is_core_update())
            .count() as u64
    }

    pub fn count_kind(&self, kind: StepKind) -> u64 {
        self.messages.iter().filter(|m| m.kind == kind).count() as u64
    }

    /// Inter-BS packets that scale with the batch: handover request + ack
    /// pairs, excluding the once-charged completion signal.
    pub fn bs_bs_transfer_count(&self) -> u64 {
        self.count_kind(StepKind::HandoverRequest) + self.count_kind(StepKind::HandoverAck)
    }

    /// Line-oriented export for golden-file comparisons:
    /// `seq,sender,receiver,kind,link_class` per message.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for msg in &self.messages {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                msg.seq,
                msg.sender.label(self.stack),
                msg.receiver.label(self.stack),
                msg.kind.as_str(),
                msg.link_class.as_str()
            ));
        }
        out
    }
}

struct TraceBuilder {
    stack: Stack,
    messages: Vec<ControlMessage>,
}

impl TraceBuilder {
    fn new(stack: Stack) -> Self {
        TraceBuilder {
            stack,
            messages: Vec::new(),
        }
    }

    fn send(&mut self, sender: Node, receiver: Node, kind: StepKind) {
        self.messages.push(ControlMessage {
            seq: self.messages.len() as u32 + 1,
            sender,
            receiver,
            kind,
            link_class: LinkClass::of(&sender, &receiver),
            payload_size: 1,
        });
    }

    fn core_update_chain(&mut self, ue: Node) {
        self.send(ue, Node::TargetBs, StepKind::CellAttach);
        self.send(Node::TargetBs, ue, StepKind::UplinkAllocation);
        self.send(
            Node::TargetBs,
            Node::MobilityCore,
            StepKind::PathSwitchRequest,
        );
        self.send(
            Node::MobilityCore,
            Node::GatewayCore,
            StepKind::BearerUpdate,
        );
        self.send(
            Node::GatewayCore,
            Node::MobilityCore,
            StepKind::BearerUpdateAck,
        );
        self.send(Node::MobilityCore, Node::TargetBs, StepKind::PathSwitchAck);
    }

    fn finish(self) -> SequenceTrace {
        SequenceTrace {
            stack: self.stack,
            messages: self.messages,
        }
    }
}

fn run_standard_handover(stack: Stack, ue_count: u32) -> Result<SequenceTrace, TraceError> {
    if ue_count == 0 {
        return Err(TraceError::InvalidCount);
    }
    let mut trace = TraceBuilder::new(stack);
    for i in 0..ue_count {
        let ue = Node::Ue(i);
        trace.send(Node::ServingBs, ue, StepKind::MeasurementControl);
        trace.send(ue, Node::ServingBs, StepKind::MeasurementReport);
        // the serving BS takes the handover decision locally (no packet)
        trace.send(Node::ServingBs, Node::TargetBs, StepKind::HandoverRequest);
        trace.send(Node::TargetBs, Node::ServingBs, StepKind::HandoverAck);
        let command_sender = match stack {
            Stack::Lte => Node::TargetBs,
            _ => Node::ServingBs,
        };
        trace.send(command_sender, ue, StepKind::HandoverCommand);
        trace.core_update_chain(ue);
        trace.send(Node::TargetBs, Node::ServingBs, StepKind::HandoverComplete);
    }
    Ok(trace.finish())
}

/// The 13-step LTE handover for each UE in turn (12 transmissions; the
/// decision step is local). The handover command comes from the target BS.
pub fn run_lte_handover(ue_count: u32) -> Result<SequenceTrace, TraceError> {
    run_standard_handover(Stack::Lte, ue_count)
}

/// The 5G NR sequence: same structure as LTE with the command sent by the
/// serving BS and the AMF/UPF core roles.
pub fn run_nr_handover(ue_count: u32) -> Result<SequenceTrace, TraceError> {
    run_standard_handover(Stack::Nr, ue_count)
}

/// Group handover trace: every UE uploads its credential to the UxNB, then
/// each accepted UE runs the usual six-packet core-update chain. No inter-BS
/// packets at all.
pub fn group_handover_trace(ue_count: u32, accepted: &[u32]) -> Result<SequenceTrace, TraceError> {
    if ue_count == 0 {
        return Err(TraceError::InvalidCount);
    }
    let mut trace = TraceBuilder::new(Stack::Group);
    for i in 0..ue_count {
        trace.send(Node::Ue(i), Node::TargetBs, StepKind::UeCredentialTransfer);
    }
    for &i in accepted {
        trace.core_update_chain(Node::Ue(i));
    }
    Ok(trace.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lte_per_ue_structure_is_fixed() {
        let trace = run_lte_handover(1).unwrap();
        // 12 transmissions realize the 13-step procedure (one local decision)
        assert_eq!(trace.messages.len(), 12);
        let counts = trace.per_link_counts();
        assert_eq!(counts[&LinkClass::UeBs], 5);
        // request + ack per UE, plus one completion message
        assert_eq!(counts[&LinkClass::BsBs], 3);
        assert_eq!(trace.bs_bs_transfer_count(), 2);
        assert_eq!(counts[&LinkClass::BsCore], 4);
        assert_eq!(trace.core_update_count(), 6);
    }

    #[test]
    fn zero_ues_is_rejected() {
        assert_eq!(run_lte_handover(0).unwrap_err(), TraceError::InvalidCount);
        assert_eq!(run_nr_handover(0).unwrap_err(), TraceError::InvalidCount);
        assert_eq!(
            group_handover_trace(0, &[]).unwrap_err(),
            TraceError::InvalidCount
        );
    }

    #[test]
    fn hundred_ues_produce_six_hundred_core_update_packets() {
        let trace = run_lte_handover(100).unwrap();
        assert_eq!(trace.core_update_count(), 600);
    }

    #[test]
    fn counts_scale_linearly_with_ue_count() {
        let one = run_nr_handover(1).unwrap();
        let ten = run_nr_handover(10).unwrap();
        for (class, count) in one.per_link_counts() {
            assert_eq!(ten.per_link_counts()[&class], count * 10);
        }
        assert_eq!(ten.messages.len(), one.messages.len() * 10);
    }

    #[test]
    fn nr_command_comes_from_the_serving_bs() {
        let lte = run_lte_handover(1).unwrap();
        let nr = run_nr_handover(1).unwrap();
        let lte_cmd = lte
            .messages
            .iter()
            .find(|m| m.kind == StepKind::HandoverCommand)
            .unwrap();
        let nr_cmd = nr
            .messages
            .iter()
            .find(|m| m.kind == StepKind::HandoverCommand)
            .unwrap();
        assert_eq!(lte_cmd.sender, Node::TargetBs);
        assert_eq!(nr_cmd.sender, Node::ServingBs);
    }

    #[test]
    fn nr_step_multiset_equals_lte_up_to_renaming_and_command_direction() {
        let lte = run_lte_handover(7).unwrap();
        let nr = run_nr_handover(7).unwrap();
        let project = |trace: &SequenceTrace| {
            let mut kinds: Vec<(StepKind, LinkClass)> = trace
                .messages
                .iter()
                .map(|m| (m.kind, m.link_class))
                .collect();
            kinds.sort();
            kinds
        };
        assert_eq!(project(&lte), project(&nr));
        // and the traces differ only in the command direction + node names
        let differing: Vec<_> = lte
            .messages
            .iter()
            .zip(&nr.messages)
            .filter(|(a, b)| (a.sender, a.receiver) != (b.sender, b.receiver))
            .collect();
        assert!(differing
            .iter()
            .all(|(a, _)| a.kind == StepKind::HandoverCommand));
    }

    #[test]
    fn every_request_is_acked_before_the_command() {
        let trace = run_lte_handover(20).unwrap();
        for i in 0..20 {
            let ue = Node::Ue(i);
            let command_pos = trace
                .messages
                .iter()
                .position(|m| m.kind == StepKind::HandoverCommand && m.receiver == ue)
                .unwrap();
            let before = &trace.messages[..command_pos];
            let requests = before
                .iter()
                .filter(|m| m.kind == StepKind::HandoverRequest)
                .count();
            let acks = before
                .iter()
                .filter(|m| m.kind == StepKind::HandoverAck)
                .count();
            assert_eq!(requests, i as usize + 1);
            assert_eq!(acks, i as usize + 1);
        }
    }

    #[test]
    fn group_trace_has_no_inter_bs_packets() {
        let accepted: Vec<u32> = (0..30).collect();
        let trace = group_handover_trace(30, &accepted).unwrap();
        assert_eq!(trace.per_link_counts()[&LinkClass::BsBs], 0);
        assert_eq!(trace.core_update_count(), 180);
        assert_eq!(trace.count_kind(StepKind::UeCredentialTransfer), 30);
    }

    #[test]
    fn rejected_ues_upload_credentials_but_skip_the_core_chain() {
        let trace = group_handover_trace(5, &[0, 2, 4]).unwrap();
        assert_eq!(trace.count_kind(StepKind::UeCredentialTransfer), 5);
        assert_eq!(trace.core_update_count(), 18);
    }

    #[test]
    fn per_link_counts_cover_every_message_exactly_once() {
        for trace in [
            run_lte_handover(13).unwrap(),
            run_nr_handover(13).unwrap(),
            group_handover_trace(13, &(0..13).collect::<Vec<_>>()).unwrap(),
        ] {
            let total: u64 = trace.per_link_counts().values().sum();
            assert_eq!(total, trace.messages.len() as u64);
        }
    }

    #[test]
    fn trace_export_matches_golden_files() {
        let lte = run_lte_handover(1).unwrap();
        let nr = run_nr_handover(1).unwrap();
        assert_eq!(
            lte.to_text(),
            include_str!("../../tests/data/lte_trace_1ue.txt")
        );
        assert_eq!(
            nr.to_text(),
            include_str!("../../tests/data/nr_trace_1ue.txt")
        );
    }
}
