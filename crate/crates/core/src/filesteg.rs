//! Byte-append hiding: the payload is concatenated after a complete host
//! file, and found again by locating where the host format says it ends.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::imagesteg::declared_file_size;

pub const JPEG_SOI: [u8; 2] = [0xFF, 0xD8];
pub const JPEG_EOI: [u8; 2] = [0xFF, 0xD9];
pub const PNG_SIGNATURE: [u8; 8] = [0x89, 0x50, 0x4E, 0x47, 0x0D, 0x0A, 0x1A, 0x0A];
pub const ZIP_LOCAL_HEADER: [u8; 4] = [0x50, 0x4B, 0x03, 0x04];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HostFormat {
    Jpeg,
    Png,
    Bmp,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrailerKind {
    Zip,
    Text,
    Unknown,
}

/// Data found past the logical end of a host file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrailerFinding {
    pub host_format: HostFormat,
    pub trailer_offset: usize,
    pub trailer_kind: TrailerKind,
    pub trailer_len: usize,
}

pub fn append_embed(cover: &[u8], payload: &[u8]) -> Result<Vec<u8>> {
    if cover.is_empty() {
        return Err(Error::InvalidParameter("cover file is empty".into()));
    }
    let mut out = Vec::with_capacity(cover.len() + payload.len());
    out.extend_from_slice(cover);
    out.extend_from_slice(payload);
    Ok(out)
}

pub fn detect_host(data: &[u8]) -> HostFormat {
    if data.starts_with(&PNG_SIGNATURE) {
        HostFormat::Png
    } else if data.starts_with(&JPEG_SOI) {
        HostFormat::Jpeg
    } else if data.starts_with(b"BM") && data.len() >= 14 {
        HostFormat::Bmp
    } else {
        HostFormat::Unknown
    }
}

/// Offset one past the last byte of the host file, when the format is
/// recognized and its end can be located.
pub fn host_boundary(data: &[u8]) -> Option<(HostFormat, usize)> {
    let format = detect_host(data);
    let end = match format {
        HostFormat::Jpeg => rfind(data, &JPEG_EOI)? + 2,
        HostFormat::Png => png_end(data)?,
        HostFormat::Bmp => {
            let declared = declared_file_size(data)? as usize;
            if declared < 14 || declared > data.len() {
                return None;
            }
            declared
        }
        HostFormat::Unknown => return None,
    };
    Some((format, end))
}

/// Walks PNG chunks up to and including IEND and its CRC.
fn png_end(data: &[u8]) -> Option<usize> {
    let mut pos = PNG_SIGNATURE.len();
    loop {
        let header = data.get(pos..pos + 8)?;
        let len = u32::from_be_bytes(header[..4].try_into().unwrap()) as usize;
        let end = pos.checked_add(12)?.checked_add(len)?;
        if end > data.len() {
            return None;
        }
        if &header[4..8] == b"IEND" {
            return Some(end);
        }
        pos = end;
    }
}

pub fn classify_trailer(trailer: &[u8]) -> TrailerKind {
    if trailer.starts_with(&ZIP_LOCAL_HEADER) {
        TrailerKind::Zip
    } else if !trailer.is_empty()
        && trailer
            .iter()
            .all(|&b| b.is_ascii_graphic() || b.is_ascii_whitespace() || b == b' ')
    {
        TrailerKind::Text
    } else {
        TrailerKind::Unknown
    }
}

/// Returns a finding when bytes remain past the host's logical end. Unknown
/// or malformed hosts yield `None`.
pub fn scan_trailer(data: &[u8]) -> Option<TrailerFinding> {
    let (host_format, end) = host_boundary(data)?;
    (end < data.len()).then(|| TrailerFinding {
        host_format,
        trailer_offset: end,
        trailer_kind: classify_trailer(&data[end..]),
        trailer_len: data.len() - end,
    })
}

pub fn extract_trailer(data: &[u8]) -> Result<Vec<u8>> {
    scan_trailer(data)
        .map(|f| data[f.trailer_offset..].to_vec())
        .ok_or(Error::NoTrailer)
}

pub(crate) fn find(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).position(|w| w == needle)
}

fn rfind(haystack: &[u8], needle: &[u8]) -> Option<usize> {
    haystack.windows(needle.len()).rposition(|w| w == needle)
}
