//! Payload framing and bit-stream conversion shared by every technique.
//!
//! A frame is `"SKT1" ‖ len:u32be ‖ payload ‖ crc32(payload):u32be`. Bits are
//! always taken most-significant first within each byte.

use crate::error::{Error, Result};

pub const FRAME_MAGIC: [u8; 4] = *b"SKT1";
/// Bytes added around the payload by [`frame_payload`].
pub const FRAME_OVERHEAD: usize = 12;

/// An ordered sequence of bits with a read cursor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BitStream {
    bits: Vec<bool>,
    cursor: usize,
}

impl BitStream {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bytes(bytes: &[u8]) -> Self {
        Self {
            bits: bytes_to_bits(bytes).collect(),
            cursor: 0,
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        Self {
            bits: bits.into_iter().collect(),
            cursor: 0,
        }
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.bits.len() - self.cursor
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Reads the next bit and advances the cursor.
    pub fn read_bit(&mut self) -> Option<bool> {
        let bit = self.bits.get(self.cursor).copied()?;
        self.cursor += 1;
        Some(bit)
    }

    /// Packs the stream into bytes. Fails unless the length is a multiple of 8.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        if !self.bits.len().is_multiple_of(8) {
            return Err(Error::InvalidParameter(format!(
                "bit length {} is not a multiple of 8",
                self.bits.len()
            )));
        }
        Ok(bits_to_bytes(self.bits.iter().copied()))
    }

    /// Packs whole bytes only; a partial final byte is dropped.
    pub fn to_bytes_truncating(&self) -> Vec<u8> {
        bits_to_bytes(self.bits.iter().copied())
    }
}

impl FromIterator<bool> for BitStream {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter)
    }
}

/// MSB-first bit iterator over `bytes`.
pub fn bytes_to_bits(bytes: &[u8]) -> impl Iterator<Item = bool> + '_ {
    bytes
        .iter()
        .flat_map(|&b| (0..8).rev().map(move |i| (b >> i) & 1 == 1))
}

/// Packs MSB-first bits into bytes, dropping any incomplete trailing byte.
pub fn bits_to_bytes(bits: impl IntoIterator<Item = bool>) -> Vec<u8> {
    let mut out = Vec::new();
    let mut acc = 0u8;
    let mut n = 0;
    for bit in bits {
        acc = (acc << 1) | bit as u8;
        n += 1;
        if n == 8 {
            out.push(acc);
            acc = 0;
            n = 0;
        }
    }
    out
}

pub fn crc32(data: &[u8]) -> u32 {
    crc32fast::hash(data)
}

/// Wraps `payload` in an `SKT1` frame.
///
/// Panics if the payload is 4 GiB or larger.
pub fn frame_payload(payload: &[u8]) -> Vec<u8> {
    let len = u32::try_from(payload.len()).expect("payload length must fit in u32");
    let mut out = Vec::with_capacity(FRAME_OVERHEAD + payload.len());
    out.extend_from_slice(&FRAME_MAGIC);
    out.extend_from_slice(&len.to_be_bytes());
    out.extend_from_slice(payload);
    out.extend_from_slice(&crc32(payload).to_be_bytes());
    out
}

/// Size of the frame that will wrap a payload of `payload_len` bytes.
pub fn framed_len(payload_len: usize) -> usize {
    payload_len + FRAME_OVERHEAD
}

/// Validates and strips an `SKT1` frame at the start of `stream`. Bytes after
/// the frame are ignored.
pub fn unframe_payload(stream: &[u8]) -> Result<Vec<u8>> {
    if stream.len() < FRAME_MAGIC.len() || stream[..4] != FRAME_MAGIC {
        return Err(Error::NoMagic);
    }
    if stream.len() < 8 {
        return Err(Error::CorruptFrame("length field missing".into()));
    }
    let len = u32::from_be_bytes(stream[4..8].try_into().unwrap()) as usize;
    let end = 8usize
        .checked_add(len)
        .and_then(|n| n.checked_add(4))
        .filter(|&n| n <= stream.len())
        .ok_or_else(|| {
            Error::CorruptFrame(format!(
                "declared length {len} exceeds the {} available bytes",
                stream.len().saturating_sub(FRAME_OVERHEAD)
            ))
        })?;
    let payload = &stream[8..8 + len];
    let stored = u32::from_be_bytes(stream[8 + len..end].try_into().unwrap());
    let actual = crc32(payload);
    if stored != actual {
        return Err(Error::CorruptFrame(format!(
            "crc mismatch: stored {stored:08x}, computed {actual:08x}"
        )));
    }
    Ok(payload.to_vec())
}

/// Unframes a bit stream read from a carrier. Trailing bits that do not fill
/// a byte are ignored.
pub fn unframe_bits(bits: impl IntoIterator<Item = bool>) -> Result<Vec<u8>> {
    unframe_payload(&bits_to_bytes(bits))
}
