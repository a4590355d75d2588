//! TCP/IP header covert channels: one message byte per packet, carried in the
//! IP identification field, the TCP sequence number, or (ACK bounce) the
//! acknowledgment number. Captures are read and written as classic pcap.

mod packet;
mod pcap;

use std::fmt;
use std::net::Ipv4Addr;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use packet::{
    ones_complement_checksum, ones_complement_sum, tcp_checksum, tcp_verify_sum, Ipv4Header,
    TcpHeader, TcpPacket, IPV4_HEADER_LEN, PROTO_TCP, TCP_ACK, TCP_FIN, TCP_HEADER_LEN, TCP_PSH,
    TCP_RST, TCP_SYN,
};
pub use pcap::{
    read_pcap, write_pcap, PcapCapture, PcapRecord, DEFAULT_SNAPLEN, LINKTYPE_ETHERNET,
    LINKTYPE_IPV4, LINKTYPE_NULL, LINKTYPE_RAW, PCAP_MAGIC,
};

use crate::error::{Error, Result};

/// Scale applied to a byte placed in the sequence or acknowledgment field.
pub const SEQ_SCALE: u32 = 16_777_216;

pub const DEFAULT_TTL: u8 = 64;
pub const DEFAULT_WINDOW: u16 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CovertMode {
    IpId,
    Seq,
    AckBounce,
}

impl FromStr for CovertMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ipid" | "id" => Ok(CovertMode::IpId),
            "seq" => Ok(CovertMode::Seq),
            "ack" | "ackbounce" => Ok(CovertMode::AckBounce),
            other => Err(Error::InvalidParameter(format!(
                "unknown covert mode {other:?} (expected ipid, seq or ack)"
            ))),
        }
    }
}

impl fmt::Display for CovertMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CovertMode::IpId => "ipid",
            CovertMode::Seq => "seq",
            CovertMode::AckBounce => "ack",
        })
    }
}

/// Endpoints and knobs for [`covert_encode`].
///
/// In [`CovertMode::AckBounce`] the capture is what the receiver sees: `src`
/// and `src_port` are the bounce server, `dst` and `dst_port` the receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovertConfig {
    pub mode: CovertMode,
    pub src: Ipv4Addr,
    pub dst: Ipv4Addr,
    pub src_port: u16,
    pub dst_port: u16,
    /// Multiplier for IP-ID mode; 1 is the literal byte, 256 matches covert_tcp.
    pub id_scale: u16,
    /// Seeds every field that does not carry message data.
    pub seed: u64,
    pub interval_usec: u64,
}

impl CovertConfig {
    pub fn new(mode: CovertMode) -> Self {
        Self {
            mode,
            src: Ipv4Addr::new(10, 0, 0, 1),
            dst: Ipv4Addr::new(10, 0, 0, 2),
            src_port: 1234,
            dst_port: 80,
            id_scale: 1,
            seed: 0,
            interval_usec: 1_000_000,
        }
    }
}

fn check_id_scale(scale: u16) -> Result<()> {
    if scale == 0 || 255 * scale as u32 > u16::MAX as u32 {
        return Err(Error::InvalidParameter(format!(
            "id scale must be in 1..=257, got {scale}"
        )));
    }
    Ok(())
}

/// Builds one SYN (SYN/ACK for ACK bounce) packet per message byte.
pub fn covert_encode(message: &[u8], config: &CovertConfig) -> Result<PcapCapture> {
    if message.is_empty() {
        return Err(Error::InvalidParameter("message is empty".into()));
    }
    check_id_scale(config.id_scale)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::with_capacity(message.len());
    for (i, &b) in message.iter().enumerate() {
        let mut identification: u16 = rng.gen();
        let mut sequence: u32 = rng.gen();
        let mut acknowledgment = 0;
        let mut flags = TCP_SYN;
        match config.mode {
            CovertMode::IpId => identification = b as u16 * config.id_scale,
            CovertMode::Seq => sequence = b as u32 * SEQ_SCALE,
            CovertMode::AckBounce => {
                acknowledgment = (b as u32 * SEQ_SCALE).wrapping_add(1);
                flags |= TCP_ACK;
            }
        }
        let mut pkt = TcpPacket {
            ip: Ipv4Header {
                tos: 0,
                total_length: 0,
                identification,
                flags_fragment: 0,
                ttl: DEFAULT_TTL,
                protocol: PROTO_TCP,
                header_checksum: 0,
                src_addr: config.src,
                dst_addr: config.dst,
            },
            tcp: TcpHeader {
                src_port: config.src_port,
                dst_port: config.dst_port,
                sequence,
                acknowledgment,
                flags,
                window: DEFAULT_WINDOW,
                checksum: 0,
                urgent: 0,
            },
            payload: Vec::new(),
        };
        pkt.finalize();
        let t = i as u64 * config.interval_usec;
        records.push(PcapRecord {
            ts_sec: (t / 1_000_000) as u32,
            ts_usec: (t % 1_000_000) as u32,
            data: pkt.to_bytes(),
        });
    }
    Ok(PcapCapture {
        linktype: LINKTYPE_RAW,
        records,
    })
}

/// Strips the link-layer header so the result starts at the IPv4 header.
fn network_layer(linktype: u32, data: &[u8]) -> std::result::Result<&[u8], String> {
    match linktype {
        LINKTYPE_RAW | LINKTYPE_IPV4 => Ok(data),
        LINKTYPE_ETHERNET => {
            if data.len() < 14 {
                return Err("short Ethernet frame".into());
            }
            match u16::from_be_bytes([data[12], data[13]]) {
                0x0800 => Ok(&data[14..]),
                t => Err(format!("ethertype {t:#06x} is not IPv4")),
            }
        }
        LINKTYPE_NULL => {
            if data.len() < 4 {
                return Err("short loopback frame".into());
            }
            Ok(&data[4..])
        }
        other => Err(format!("unsupported link type {other}")),
    }
}

/// Parses every record of a capture in timestamp order.
pub fn parse_packets(capture: &PcapCapture) -> Result<Vec<TcpPacket>> {
    let mut order: Vec<usize> = (0..capture.records.len()).collect();
    order.sort_by_key(|&i| (capture.records[i].ts_sec, capture.records[i].ts_usec));
    order
        .into_iter()
        .map(|i| {
            network_layer(capture.linktype, &capture.records[i].data)
                .and_then(TcpPacket::parse)
                .map_err(|reason| Error::MalformedPacket { index: i, reason })
        })
        .collect()
}

pub fn covert_decode(capture: &PcapCapture, mode: CovertMode) -> Result<Vec<u8>> {
    covert_decode_scaled(capture, mode, 1)
}

/// Like [`covert_decode`], dividing IP-ID values by `id_scale`.
pub fn covert_decode_scaled(
    capture: &PcapCapture,
    mode: CovertMode,
    id_scale: u16,
) -> Result<Vec<u8>> {
    check_id_scale(id_scale)?;
    let packets = parse_packets(capture)?;
    packets
        .iter()
        .enumerate()
        .map(|(index, p)| {
            let out_of_range = |reason: String| Error::FieldOutOfRange { index, reason };
            match mode {
                CovertMode::IpId => {
                    let id = p.ip.identification;
                    if id % id_scale != 0 || id / id_scale > 255 {
                        return Err(out_of_range(format!(
                            "identification {id} is not a byte times {id_scale}"
                        )));
                    }
                    Ok((id / id_scale) as u8)
                }
                CovertMode::Seq => {
                    let seq = p.tcp.sequence;
                    if seq % SEQ_SCALE != 0 {
                        return Err(out_of_range(format!(
                            "sequence {seq} is not a multiple of {SEQ_SCALE}"
                        )));
                    }
                    Ok((seq / SEQ_SCALE) as u8)
                }
                CovertMode::AckBounce => {
                    let ack = p.tcp.acknowledgment;
                    let base = ack.wrapping_sub(1);
                    if base % SEQ_SCALE != 0 {
                        return Err(out_of_range(format!(
                            "acknowledgment {ack} is not 1 more than a multiple of {SEQ_SCALE}"
                        )));
                    }
                    Ok((base / SEQ_SCALE) as u8)
                }
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seqs(cap: &PcapCapture) -> Vec<u32> {
        parse_packets(cap)
            .unwrap()
            .iter()
            .map(|p| p.tcp.sequence)
            .collect()
    }

    #[test]
    fn seq_mode_single_byte() {
        let cap = covert_encode(b"A", &CovertConfig::new(CovertMode::Seq)).unwrap();
        assert_eq!(cap.records.len(), 1);
        assert_eq!(seqs(&cap), vec![1_090_519_040]);
        assert_eq!(covert_decode(&cap, CovertMode::Seq).unwrap(), b"A");
    }

    #[test]
    fn ipid_mode_hello() {
        let cap = covert_encode(b"HELLO", &CovertConfig::new(CovertMode::IpId)).unwrap();
        let ids: Vec<u16> = parse_packets(&cap)
            .unwrap()
            .iter()
            .map(|p| p.ip.identification)
            .collect();
        assert_eq!(ids, vec![72, 69, 76, 76, 79]);
    }

    #[test]
    fn ack_bounce_fields() {
        let mut cfg = CovertConfig::new(CovertMode::AckBounce);
        cfg.src = Ipv4Addr::new(192, 0, 2, 80);
        cfg.dst = Ipv4Addr::new(198, 51, 100, 7);
        let cap = covert_encode(b"A", &cfg).unwrap();
        let p = &parse_packets(&cap).unwrap()[0];
        assert_eq!(p.tcp.acknowledgment, 1_090_519_041);
        assert_eq!(p.tcp.flags, TCP_SYN | TCP_ACK);
        assert_eq!((p.ip.src_addr, p.ip.dst_addr), (cfg.src, cfg.dst));
        assert_eq!(covert_decode(&cap, CovertMode::AckBounce).unwrap(), b"A");
    }

    #[test]
    fn timestamps_one_second_apart() {
        let cap = covert_encode(b"abc", &CovertConfig::new(CovertMode::Seq)).unwrap();
        let ts: Vec<_> = cap.records.iter().map(|r| (r.ts_sec, r.ts_usec)).collect();
        assert_eq!(ts, vec![(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn decode_uses_timestamp_order() {
        let mut cap = covert_encode(b"abc", &CovertConfig::new(CovertMode::Seq)).unwrap();
        cap.records.reverse();
        assert_eq!(covert_decode(&cap, CovertMode::Seq).unwrap(), b"abc");
    }

    #[test]
    fn id_scale_256() {
        let mut cfg = CovertConfig::new(CovertMode::IpId);
        cfg.id_scale = 256;
        let cap = covert_encode(b"Hi", &cfg).unwrap();
        let ids: Vec<u16> = parse_packets(&cap)
            .unwrap()
            .iter()
            .map(|p| p.ip.identification)
            .collect();
        assert_eq!(ids, vec![72 * 256, 105 * 256]);
        assert_eq!(
            covert_decode_scaled(&cap, CovertMode::IpId, 256).unwrap(),
            b"Hi"
        );
        assert!(matches!(
            covert_decode(&cap, CovertMode::IpId),
            Err(Error::FieldOutOfRange { .. })
        ));
    }

    #[test]
    fn out_of_range_fields() {
        // A seq-mode capture carries random IP IDs, almost surely > 255.
        let cap = covert_encode(b"xyz", &CovertConfig::new(CovertMode::Seq)).unwrap();
        assert!(matches!(
            covert_decode(&cap, CovertMode::IpId),
            Err(Error::FieldOutOfRange { .. })
        ));
        let cap = covert_encode(b"xyz", &CovertConfig::new(CovertMode::IpId)).unwrap();
        assert!(matches!(
            covert_decode(&cap, CovertMode::Seq),
            Err(Error::FieldOutOfRange { .. })
        ));
    }

    #[test]
    fn corrupt_ip_checksum_is_malformed() {
        let mut cap = covert_encode(b"A", &CovertConfig::new(CovertMode::Seq)).unwrap();
        cap.records[0].data[11] ^= 0x40;
        assert!(matches!(
            covert_decode(&cap, CovertMode::Seq),
            Err(Error::MalformedPacket { index: 0, .. })
        ));
    }

    #[test]
    fn ethernet_linktype() {
        let cap = covert_encode(b"eth", &CovertConfig::new(CovertMode::Seq)).unwrap();
        let framed = PcapCapture {
            linktype: LINKTYPE_ETHERNET,
            records: cap
                .records
                .iter()
                .map(|r| {
                    let mut d = vec![0u8; 12];
                    d.extend_from_slice(&[0x08, 0x00]);
                    d.extend_from_slice(&r.data);
                    PcapRecord {
                        data: d,
                        ..r.clone()
                    }
                })
                .collect(),
        };
        assert_eq!(covert_decode(&framed, CovertMode::Seq).unwrap(), b"eth");
    }

    #[test]
    fn seeded_reproducibility() {
        let cfg = CovertConfig::new(CovertMode::IpId);
        let a = covert_encode(b"same", &cfg).unwrap();
        assert_eq!(a, covert_encode(b"same", &cfg).unwrap());
        let other = CovertConfig { seed: 99, ..cfg };
        assert_ne!(a, covert_encode(b"same", &other).unwrap());
    }

    #[test]
    fn empty_message_rejected() {
        assert!(covert_encode(b"", &CovertConfig::new(CovertMode::Seq)).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("ipid".parse::<CovertMode>().unwrap(), CovertMode::IpId);
        assert_eq!("SEQ".parse::<CovertMode>().unwrap(), CovertMode::Seq);
        assert_eq!("ack".parse::<CovertMode>().unwrap(), CovertMode::AckBounce);
        assert!("udp".parse::<CovertMode>().is_err());
    }
}
