//! The 5G key hierarchy and per-handover key refresh.
//!
//! From the shared master key `K_AMF` both the network and the UE derive the
//! base-station key `K_gNB`, the AMF/UE integrity and encryption keys, and
//! the gNB/UE integrity and encryption keys. Each handover rolls `K_gNB`
//! forward into `K_gNB*` keyed by the next-hop chaining counter (NCC), and
//! both ends re-derive the gNB-level keys from it.
//!
//! The derivation edges are modeled as labeled hashes of the parent key;
//! only equality and inequality of derived keys matter here, not the exact
//! 3GPP KDF internals. Because both sides run the same deterministic
//! derivation, a fake handover that advances the counter on one side only is
//! caught at the next exchange: the chains stop agreeing byte-for-byte.

use thiserror::Error;

use crate::group::{hash_to_digest, DIGEST_LEN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KeyError {
    #[error("master key must be nonempty")]
    EmptyKey,
}

pub type KeyBytes = [u8; DIGEST_LEN];

fn kdf(parent: &[u8], label: &str, ncc: u32) -> KeyBytes {
    let mut input = Vec::with_capacity(parent.len() + label.len() + 4);
    input.extend_from_slice(parent);
    input.extend_from_slice(label.as_bytes());
    input.extend_from_slice(&ncc.to_be_bytes());
    hash_to_digest(&input)
}

/// Integrity/encryption keys below the two main keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedKeys {
    pub amf_ue_int: KeyBytes,
    pub amf_ue_enc: KeyBytes,
    pub gnb_ue_int: KeyBytes,
    pub gnb_ue_enc: KeyBytes,
}

/// One side's view of the key chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyChainState {
    pub k_amf: Vec<u8>,
    pub k_gnb: KeyBytes,
    /// The freshly derived next-hop key after a handover; `None` before the
    /// first exchange.
    pub k_gnb_star: Option<KeyBytes>,
    /// Next-hop chaining counter; advances by exactly one per handover.
    pub ncc: u32,
    pub derived: DerivedKeys,
}

fn gnb_level_keys(k_gnb: &KeyBytes, k_amf: &[u8], ncc: u32) -> DerivedKeys {
    DerivedKeys {
        amf_ue_int: kdf(k_amf, "amf-ue-int", 0),
        amf_ue_enc: kdf(k_amf, "amf-ue-enc", 0),
        gnb_ue_int: kdf(k_gnb, "gnb-ue-int", ncc),
        gnb_ue_enc: kdf(k_gnb, "gnb-ue-enc", ncc),
    }
}

/// Derive the full hierarchy from a master key. Deterministic, so the UE
/// side and the network side reach byte-identical chains independently.
pub fn derive_key_hierarchy(k_amf: &[u8]) -> Result<KeyChainState, KeyError> {
    if k_amf.is_empty() {
        return Err(KeyError::EmptyKey);
    }
    let k_gnb = kdf(k_amf, "kgnb", 0);
    Ok(KeyChainState {
        k_amf: k_amf.to_vec(),
        derived: gnb_level_keys(&k_gnb, k_amf, 0),
        k_gnb,
        k_gnb_star: None,
        ncc: 0,
    })
}

/// One handover: roll `K_gNB` into `K_gNB*` under the advanced counter and
/// re-derive the gNB-level keys. Pure; returns the successor state.
pub fn handover_key_exchange(state: &KeyChainState) -> KeyChainState {
    let ncc = state.ncc + 1;
    let star = kdf(&state.k_gnb, "kgnb-star", ncc);
    KeyChainState {
        k_amf: state.k_amf.clone(),
        derived: gnb_level_keys(&star, &state.k_amf, ncc),
        k_gnb: star,
        k_gnb_star: Some(star),
        ncc,
    }
}

/// Byte-for-byte agreement across every node of the hierarchy.
pub fn chains_agree(a: &KeyChainState, b: &KeyChainState) -> bool {
    a == b
}
