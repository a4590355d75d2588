//! Classic libpcap files (microsecond timestamps, version 2.4).

use crate::error::{Error, Result};

pub const PCAP_MAGIC: u32 = 0xA1B2_C3D4;
pub const PCAP_GLOBAL_HEADER_LEN: usize = 24;
pub const PCAP_RECORD_HEADER_LEN: usize = 16;
pub const DEFAULT_SNAPLEN: u32 = 65_535;

pub const LINKTYPE_NULL: u32 = 0;
pub const LINKTYPE_ETHERNET: u32 = 1;
pub const LINKTYPE_RAW: u32 = 101;
pub const LINKTYPE_IPV4: u32 = 228;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcapRecord {
    pub ts_sec: u32,
    pub ts_usec: u32,
    pub data: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcapCapture {
    pub linktype: u32,
    pub records: Vec<PcapRecord>,
}

impl Default for PcapCapture {
    fn default() -> Self {
        Self {
            linktype: LINKTYPE_RAW,
            records: Vec::new(),
        }
    }
}

/// Serializes little-endian with snaplen 65535.
pub fn write_pcap(capture: &PcapCapture) -> Vec<u8> {
    let body: usize = capture
        .records
        .iter()
        .map(|r| PCAP_RECORD_HEADER_LEN + r.data.len())
        .sum();
    let mut out = Vec::with_capacity(PCAP_GLOBAL_HEADER_LEN + body);
    out.extend_from_slice(&PCAP_MAGIC.to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes());
    out.extend_from_slice(&4u16.to_le_bytes());
    out.extend_from_slice(&0i32.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&DEFAULT_SNAPLEN.to_le_bytes());
    out.extend_from_slice(&capture.linktype.to_le_bytes());
    for r in &capture.records {
        let len = r.data.len() as u32;
        out.extend_from_slice(&r.ts_sec.to_le_bytes());
        out.extend_from_slice(&r.ts_usec.to_le_bytes());
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(&r.data);
    }
    out
}

/// Parses a classic pcap file written in either byte order.
pub fn read_pcap(bytes: &[u8]) -> Result<PcapCapture> {
    if bytes.len() < 4 {
        return Err(Error::Truncated("pcap global header".into()));
    }
    let raw: [u8; 4] = bytes[..4].try_into().unwrap();
    let little = if u32::from_le_bytes(raw) == PCAP_MAGIC {
        true
    } else if u32::from_be_bytes(raw) == PCAP_MAGIC {
        false
    } else {
        return Err(Error::BadMagic(format!(
            "{:02X} {:02X} {:02X} {:02X} is not a microsecond pcap magic",
            raw[0], raw[1], raw[2], raw[3]
        )));
    };
    let u16_at = |at: usize| {
        let b = [bytes[at], bytes[at + 1]];
        if little {
            u16::from_le_bytes(b)
        } else {
            u16::from_be_bytes(b)
        }
    };
    let u32_at = |at: usize| {
        let b: [u8; 4] = bytes[at..at + 4].try_into().unwrap();
        if little {
            u32::from_le_bytes(b)
        } else {
            u32::from_be_bytes(b)
        }
    };
    if bytes.len() < PCAP_GLOBAL_HEADER_LEN {
        return Err(Error::Truncated("pcap global header".into()));
    }
    let (major, minor) = (u16_at(4), u16_at(6));
    if (major, minor) != (2, 4) {
        return Err(Error::BadMagic(format!(
            "unsupported pcap version {major}.{minor}"
        )));
    }
    let linktype = u32_at(20);

    let mut records = Vec::new();
    let mut pos = PCAP_GLOBAL_HEADER_LEN;
    while pos < bytes.len() {
        if pos + PCAP_RECORD_HEADER_LEN > bytes.len() {
            return Err(Error::Truncated(format!("record header at offset {pos}")));
        }
        let ts_sec = u32_at(pos);
        let ts_usec = u32_at(pos + 4);
        let incl = u32_at(pos + 8) as usize;
        let start = pos + PCAP_RECORD_HEADER_LEN;
        if start + incl > bytes.len() {
            return Err(Error::Truncated(format!(
                "record at offset {pos} declares {incl} bytes"
            )));
        }
        records.push(PcapRecord {
            ts_sec,
            ts_usec,
            data: bytes[start..start + incl].to_vec(),
        });
        pos = start + incl;
    }
    Ok(PcapCapture { linktype, records })
}
