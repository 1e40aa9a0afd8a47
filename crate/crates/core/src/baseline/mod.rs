//! Executable models of the standardized handover flows used as the
//! comparison baseline: the LTE and 5G NR message sequences, the 5G key
//! hierarchy, and per-handover key refresh with the NCC counter.

pub mod keychain;
pub mod trace;

pub use keychain::{
    chains_agree, derive_key_hierarchy, handover_key_exchange, DerivedKeys, KeyChainState, KeyError,
};
pub use trace::{
    group_handover_trace, run_lte_handover, run_nr_handover, ControlMessage, LinkClass, Node,
    NodeRole, SequenceTrace, Stack, StepKind, TraceError,
};
