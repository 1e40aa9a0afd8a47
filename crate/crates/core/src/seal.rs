//! Symmetric authenticated encryption keyed from a secret share.
//!
//! The protocol wraps the secret sharing polynomial and post-handover
//! service traffic under keys derived from individual shares. An AEAD is
//! required rather than bare encryption: the replay defenses rest on the
//! receiver noticing forged or tampered ciphertexts. ChaCha20-Poly1305 with
//! a random per-message nonce does that job.

use chacha20poly1305::aead::Aead;
use chacha20poly1305::{ChaCha20Poly1305, Key, KeyInit, Nonce};
use rand::RngCore;

use crate::group::{hash_to_digest, Field};
use crate::wire::{put_u32_be, Reader, WireError};

pub const KEY_LEN: usize = 32;
pub const NONCE_LEN: usize = 12;

const KEY_TAG: &[u8] = b"uxnb-handover/share-key/v1";

/// Derive the symmetric key for a share value: the digest of the canonical
/// share encoding followed by a domain-separation tag. Deterministic, so
/// both ends of a link derive the same key from the same share.
pub fn derive_symmetric_key<F: Field>(share_value: &F) -> [u8; KEY_LEN] {
    let mut input = share_value.to_bytes();
    input.extend_from_slice(KEY_TAG);
    hash_to_digest(&input)
}

/// Nonce plus AEAD ciphertext (tag included).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SealedBox {
    pub nonce: [u8; NONCE_LEN],
    pub ciphertext: Vec<u8>,
}

impl SealedBox {
    /// Wire layout: `nonce (12) || ct_len (u32) || ciphertext`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(NONCE_LEN + 4 + self.ciphertext.len());
        out.extend_from_slice(&self.nonce);
        put_u32_be(&mut out, self.ciphertext.len() as u32);
        out.extend_from_slice(&self.ciphertext);
        out
    }

    pub(crate) fn read(reader: &mut Reader<'_>) -> Result<Self, WireError> {
        let nonce: [u8; NONCE_LEN] = reader.take(NONCE_LEN)?.try_into().unwrap();
        let len = reader.u32_be()? as usize;
        let ciphertext = reader.take(len)?.to_vec();
        Ok(SealedBox { nonce, ciphertext })
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, WireError> {
        let mut reader = Reader::new(bytes);
        let boxed = Self::read(&mut reader)?;
        reader.finish()?;
        Ok(boxed)
    }
}

/// Encrypt under `key` with a nonce drawn from `rng`.
pub fn seal<R: RngCore + ?Sized>(key: &[u8; KEY_LEN], rng: &mut R, plaintext: &[u8]) -> SealedBox {
    let cipher = ChaCha20Poly1305::new(Key::from_slice(key));
    let mut nonce = [0u8; NONCE_LEN];
    rng.fill_bytes(&mut nonce);
    let ciphertext = cipher
        .encrypt(Nonce::from_slice(&nonce), plaintext)
        .expect("chacha20poly1305 encryption is infallible for in-memory buffers");
    SealedBox { nonce, ciphertext }
}

/// Authenticated decryption; `None` on any tamper or key mismatch.
pub fn open(key: &[u8; KEY_LEN], sealed: &SealedBox) -> Option<Vec<u8>> {
    let cipher = ChaCha20Poly1305::new(Key::from_slice(key));
    cipher
        .decrypt(
            Nonce::from_slice(&sealed.nonce),
            sealed.ciphertext.as_slice(),
        )
        .ok()
}
