//! Binary frame codec for [`GtpMessage`].
//!
//! ```text
//! 0      1        2            10     11        13
//! +------+--------+------------+------+---------+---------------------+-----------+
//! | 0x47 | 0x01   | session_id | step | width   | payload             | nonce TLV |
//! | 'G'  | version| u64 BE     | u8   | u16 BE  | ceil(width/8) B, BE | optional  |
//! +------+--------+------------+------+---------+---------------------+-----------+
//! ```
//!
//! Step codes are `0x1A`, `0x1B`, `0x2A`, `0x2B`. The nonce TLV is
//! `0x4E ('N') | 0x08 | u64 BE`. Nothing may follow it.

use thiserror::Error;

use crate::protocol::{BitWord, GtpMessage, Step, MAX_WIDTH};

pub const MAGIC: u8 = 0x47;
pub const VERSION: u8 = 0x01;
pub const NONCE_TAG: u8 = 0x4E;
pub const NONCE_LEN: u8 = 8;

const HEADER_LEN: usize = 13;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("short frame: need {needed} bytes, got {got}")]
    ShortFrame { needed: usize, got: usize },
    #[error("bad magic byte {0:#04x}")]
    BadMagic(u8),
    #[error("unsupported version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("unknown step code {0:#04x}")]
    UnknownStep(u8),
    #[error("invalid payload width {0}")]
    InvalidWidth(u16),
    #[error("payload {value:#x} overflows width {width}")]
    PayloadOverflow { value: u64, width: u16 },
    #[error("unknown tag {0:#04x}")]
    UnknownTag(u8),
    #[error("nonce length {0}, expected {NONCE_LEN}")]
    BadNonceLength(u8),
    #[error("{0} trailing bytes after frame")]
    TrailingBytes(usize),
}

fn payload_len(width: u32) -> usize {
    width.div_ceil(8) as usize
}

pub fn encode_message(m: &GtpMessage) -> Vec<u8> {
    let width = m.payload.width();
    let plen = payload_len(width);
    let mut out = Vec::with_capacity(HEADER_LEN + plen + 10);
    out.push(MAGIC);
    out.push(VERSION);
    out.extend_from_slice(&m.session_id.to_be_bytes());
    out.push(m.step.code());
    // width <= 64 by BitWord's invariant
    out.extend_from_slice(&(width as u16).to_be_bytes());
    out.extend_from_slice(&m.payload.value().to_be_bytes()[8 - plen..]);
    if let Some(nonce) = m.nonce {
        out.push(NONCE_TAG);
        out.push(NONCE_LEN);
        out.extend_from_slice(&nonce.to_be_bytes());
    }
    out
}

fn take(bytes: &[u8], at: usize, len: usize) -> Result<&[u8], CodecError> {
    bytes.get(at..at + len).ok_or(CodecError::ShortFrame {
        needed: at + len,
        got: bytes.len(),
    })
}

pub fn decode_message(bytes: &[u8]) -> Result<GtpMessage, CodecError> {
    let header = take(bytes, 0, HEADER_LEN)?;
    if header[0] != MAGIC {
        return Err(CodecError::BadMagic(header[0]));
    }
    if header[1] != VERSION {
        return Err(CodecError::UnsupportedVersion(header[1]));
    }
    let session_id = u64::from_be_bytes(header[2..10].try_into().unwrap());
    let step = Step::from_code(header[10]).ok_or(CodecError::UnknownStep(header[10]))?;
    let width = u16::from_be_bytes([header[11], header[12]]);
    if width == 0 || u32::from(width) > MAX_WIDTH {
        return Err(CodecError::InvalidWidth(width));
    }
    let plen = payload_len(u32::from(width));
    let raw = take(bytes, HEADER_LEN, plen)?;
    let value = raw.iter().fold(0u64, |acc, &b| (acc << 8) | u64::from(b));
    let payload = BitWord::new(value, u32::from(width))
        .map_err(|_| CodecError::PayloadOverflow { value, width })?;

    let mut at = HEADER_LEN + plen;
    let mut nonce = None;
    if at < bytes.len() {
        let tag = bytes[at];
        if tag != NONCE_TAG {
            return Err(CodecError::UnknownTag(tag));
        }
        let len = take(bytes, at + 1, 1)?[0];
        if len != NONCE_LEN {
            return Err(CodecError::BadNonceLength(len));
        }
        let value = take(bytes, at + 2, 8)?;
        nonce = Some(u64::from_be_bytes(value.try_into().unwrap()));
        at += 10;
    }
    if at < bytes.len() {
        return Err(CodecError::TrailingBytes(bytes.len() - at));
    }
    Ok(GtpMessage {
        session_id,
        step,
        payload,
        nonce,
    })
}
