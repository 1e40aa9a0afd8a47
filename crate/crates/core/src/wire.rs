//! Canonical byte layouts for everything that crosses the simulated wire.
//!
//! All integers are big-endian. Scalars and points use the fixed widths of
//! the active group ([`Field::byte_width`], [`Group::point_width`]); see
//! `docs/wire-formats.md` for the field-by-field layouts. Decoders reject
//! trailing bytes so every encoding is canonical.

use thiserror::Error;

use crate::group::{Field, Group};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WireError {
    #[error("message truncated")]
    Truncated,
    #[error("trailing bytes after message")]
    TrailingBytes,
    #[error("non-canonical or out-of-range scalar")]
    InvalidScalar,
    #[error("invalid point encoding")]
    InvalidPoint,
    #[error("identifier is not valid UTF-8")]
    InvalidIdentifier,
    #[error("identifier longer than 65535 bytes")]
    IdentifierTooLong,
    #[error("unsupported version tag {0}")]
    UnsupportedVersion(u8),
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    pub fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    pub fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.pos + n > self.buf.len() {
            return Err(WireError::Truncated);
        }
        let out = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    pub fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    pub fn u16_be(&mut self) -> Result<u16, WireError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    pub fn u32_be(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub fn scalar<F: Field>(&mut self) -> Result<F, WireError> {
        F::from_bytes(self.take(F::byte_width())?).ok_or(WireError::InvalidScalar)
    }

    pub fn point<G: Group>(&mut self) -> Result<G::Point, WireError> {
        G::decode_point(self.take(G::point_width())?).ok_or(WireError::InvalidPoint)
    }

    pub fn finish(&self) -> Result<(), WireError> {
        if self.pos == self.buf.len() {
            Ok(())
        } else {
            Err(WireError::TrailingBytes)
        }
    }
}

pub(crate) fn put_u16_be(out: &mut Vec<u8>, v: u16) {
    out.extend_from_slice(&v.to_be_bytes());
}

pub(crate) fn put_u32_be(out: &mut Vec<u8>, v: u32) {
    out.extend_from_slice(&v.to_be_bytes());
}

pub(crate) fn put_identifier(out: &mut Vec<u8>, id: &str) -> Result<(), WireError> {
    let bytes = id.as_bytes();
    if bytes.len() > u16::MAX as usize {
        return Err(WireError::IdentifierTooLong);
    }
    put_u16_be(out, bytes.len() as u16);
    out.extend_from_slice(bytes);
    Ok(())
}

pub(crate) fn read_identifier(reader: &mut Reader<'_>) -> Result<String, WireError> {
    let len = reader.u16_be()? as usize;
    let raw = reader.take(len)?;
    String::from_utf8(raw.to_vec()).map_err(|_| WireError::InvalidIdentifier)
}
