//! IPv4 and TCP headers (no options) with Internet checksums.

use std::net::Ipv4Addr;

pub const IPV4_HEADER_LEN: usize = 20;
pub const TCP_HEADER_LEN: usize = 20;
pub const PROTO_TCP: u8 = 6;

pub const TCP_FIN: u8 = 0x01;
pub const TCP_SYN: u8 = 0x02;
pub const TCP_RST: u8 = 0x04;
pub const TCP_PSH: u8 = 0x08;
pub const TCP_ACK: u8 = 0x10;

/// 16-bit ones'-complement sum of big-endian words, complemented. Odd input
/// is padded with a zero byte.
pub fn ones_complement_checksum(data: &[u8]) -> u16 {
    !fold(sum_words(data, 0))
}

fn sum_words(data: &[u8], mut acc: u32) -> u32 {
    let mut chunks = data.chunks_exact(2);
    for w in &mut chunks {
        acc = acc.wrapping_add(u16::from_be_bytes([w[0], w[1]]) as u32);
    }
    if let [last] = chunks.remainder() {
        acc = acc.wrapping_add((*last as u32) << 8);
    }
    acc
}

fn fold(mut acc: u32) -> u16 {
    while acc > 0xFFFF {
        acc = (acc & 0xFFFF) + (acc >> 16);
    }
    acc as u16
}

/// Ones'-complement sum without the final complement; a header whose
/// checksum field is correct sums to `0xFFFF`.
pub fn ones_complement_sum(data: &[u8]) -> u16 {
    fold(sum_words(data, 0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ipv4Header {
    pub tos: u8,
    pub total_length: u16,
    pub identification: u16,
    pub flags_fragment: u16,
    pub ttl: u8,
    pub protocol: u8,
    pub header_checksum: u16,
    pub src_addr: Ipv4Addr,
    pub dst_addr: Ipv4Addr,
}

impl Ipv4Header {
    pub fn to_bytes(&self) -> [u8; IPV4_HEADER_LEN] {
        let mut b = [0u8; IPV4_HEADER_LEN];
        b[0] = 0x45;
        b[1] = self.tos;
        b[2..4].copy_from_slice(&self.total_length.to_be_bytes());
        b[4..6].copy_from_slice(&self.identification.to_be_bytes());
        b[6..8].copy_from_slice(&self.flags_fragment.to_be_bytes());
        b[8] = self.ttl;
        b[9] = self.protocol;
        b[10..12].copy_from_slice(&self.header_checksum.to_be_bytes());
        b[12..16].copy_from_slice(&self.src_addr.octets());
        b[16..20].copy_from_slice(&self.dst_addr.octets());
        b
    }

    pub fn compute_checksum(&self) -> u16 {
        let mut b = self.to_bytes();
        b[10] = 0;
        b[11] = 0;
        ones_complement_checksum(&b)
    }

    pub fn fill_checksum(&mut self) {
        self.header_checksum = self.compute_checksum();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TcpHeader {
    pub src_port: u16,
    pub dst_port: u16,
    pub sequence: u32,
    pub acknowledgment: u32,
    pub flags: u8,
    pub window: u16,
    pub checksum: u16,
    pub urgent: u16,
}

impl TcpHeader {
    pub fn to_bytes(&self) -> [u8; TCP_HEADER_LEN] {
        let mut b = [0u8; TCP_HEADER_LEN];
        b[0..2].copy_from_slice(&self.src_port.to_be_bytes());
        b[2..4].copy_from_slice(&self.dst_port.to_be_bytes());
        b[4..8].copy_from_slice(&self.sequence.to_be_bytes());
        b[8..12].copy_from_slice(&self.acknowledgment.to_be_bytes());
        b[12] = 5 << 4;
        b[13] = self.flags;
        b[14..16].copy_from_slice(&self.window.to_be_bytes());
        b[16..18].copy_from_slice(&self.checksum.to_be_bytes());
        b[18..20].copy_from_slice(&self.urgent.to_be_bytes());
        b
    }
}

fn pseudo_header(src: Ipv4Addr, dst: Ipv4Addr, tcp_len: usize) -> [u8; 12] {
    let mut p = [0u8; 12];
    p[0..4].copy_from_slice(&src.octets());
    p[4..8].copy_from_slice(&dst.octets());
    p[9] = PROTO_TCP;
    p[10..12].copy_from_slice(&(tcp_len as u16).to_be_bytes());
    p
}

/// TCP checksum of `segment` (header with zeroed checksum field, plus data).
pub fn tcp_checksum(src: Ipv4Addr, dst: Ipv4Addr, segment: &[u8]) -> u16 {
    let acc = sum_words(&pseudo_header(src, dst, segment.len()), 0);
    !fold(sum_words(segment, acc))
}

/// Sum of pseudo-header and segment including its checksum field.
pub fn tcp_verify_sum(src: Ipv4Addr, dst: Ipv4Addr, segment: &[u8]) -> u16 {
    let acc = sum_words(&pseudo_header(src, dst, segment.len()), 0);
    fold(sum_words(segment, acc))
}

/// An IPv4 datagram carrying a TCP segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TcpPacket {
    pub ip: Ipv4Header,
    pub tcp: TcpHeader,
    pub payload: Vec<u8>,
}

impl TcpPacket {
    /// Sets the IP total length and both checksums from the current fields.
    pub fn finalize(&mut self) {
        self.ip.total_length = (IPV4_HEADER_LEN + TCP_HEADER_LEN + self.payload.len()) as u16;
        self.ip.protocol = PROTO_TCP;
        self.ip.fill_checksum();
        self.tcp.checksum = 0;
        let segment = self.segment_bytes();
        self.tcp.checksum = tcp_checksum(self.ip.src_addr, self.ip.dst_addr, &segment);
    }

    fn segment_bytes(&self) -> Vec<u8> {
        let mut s = self.tcp.to_bytes().to_vec();
        s.extend_from_slice(&self.payload);
        s
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.ip.to_bytes().to_vec();
        out.extend_from_slice(&self.segment_bytes());
        out
    }

    /// Parses and checks an IPv4/TCP datagram, including both checksums.
    pub fn parse(data: &[u8]) -> Result<Self, String> {
        if data.len() < IPV4_HEADER_LEN {
            return Err(format!(
                "{} bytes is too short for an IPv4 header",
                data.len()
            ));
        }
        let version = data[0] >> 4;
        let ihl = (data[0] & 0x0F) as usize * 4;
        if version != 4 {
            return Err(format!("IP version {version}"));
        }
        if ihl < IPV4_HEADER_LEN || data.len() < ihl {
            return Err(format!("bad IHL {ihl}"));
        }
        if ones_complement_sum(&data[..ihl]) != 0xFFFF {
            return Err("IP header checksum does not verify".into());
        }
        let total_length = u16::from_be_bytes([data[2], data[3]]);
        let total = total_length as usize;
        if total < ihl + TCP_HEADER_LEN || total > data.len() {
            return Err(format!(
                "IP total length {total} inconsistent with {} bytes",
                data.len()
            ));
        }
        if data[9] != PROTO_TCP {
            return Err(format!("IP protocol {} is not TCP", data[9]));
        }
        let ip = Ipv4Header {
            tos: data[1],
            total_length,
            identification: u16::from_be_bytes([data[4], data[5]]),
            flags_fragment: u16::from_be_bytes([data[6], data[7]]),
            ttl: data[8],
            protocol: data[9],
            header_checksum: u16::from_be_bytes([data[10], data[11]]),
            src_addr: Ipv4Addr::new(data[12], data[13], data[14], data[15]),
            dst_addr: Ipv4Addr::new(data[16], data[17], data[18], data[19]),
        };
        let seg = &data[ihl..total];
        let data_offset = (seg[12] >> 4) as usize * 4;
        if data_offset < TCP_HEADER_LEN || data_offset > seg.len() {
            return Err(format!("bad TCP data offset {data_offset}"));
        }
        if tcp_verify_sum(ip.src_addr, ip.dst_addr, seg) != 0xFFFF {
            return Err("TCP checksum does not verify".into());
        }
        let be16 = |i: usize| u16::from_be_bytes([seg[i], seg[i + 1]]);
        let be32 = |i: usize| u32::from_be_bytes(seg[i..i + 4].try_into().unwrap());
        let tcp = TcpHeader {
            src_port: be16(0),
            dst_port: be16(2),
            sequence: be32(4),
            acknowledgment: be32(8),
            flags: seg[13],
            window: be16(14),
            checksum: be16(16),
            urgent: be16(18),
        };
        Ok(Self {
            ip,
            tcp,
            payload: seg[data_offset..].to_vec(),
        })
    }

    /// Whether both checksums verify over the serialized packet.
    pub fn checksums_valid(&self) -> bool {
        let ip_ok = ones_complement_sum(&self.ip.to_bytes()) == 0xFFFF;
        ip_ok && tcp_verify_sum(self.ip.src_addr, self.ip.dst_addr, &self.segment_bytes()) == 0xFFFF
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_header_checksum() {
        assert_eq!(ones_complement_checksum(&[0u8; 20]), 0xFFFF);
    }

    #[test]
    fn hand_computed_vector() {
        // 0x0001 + 0xF203 + 0xF4F5 + 0xF6F7 = 0x2DDF0 -> 0xDDF0 + 0x2 = 0xDDF2 -> !0xDDF2 = 0x220D
        let v = [0x00, 0x01, 0xF2, 0x03, 0xF4, 0xF5, 0xF6, 0xF7];
        assert_eq!(ones_complement_checksum(&v), 0x220D);
    }

    #[test]
    fn odd_length_pads_with_zero() {
        assert_eq!(ones_complement_checksum(&[0x12]), !0x1200);
        assert_eq!(
            ones_complement_checksum(&[0xAB, 0xCD, 0xEF]),
            ones_complement_checksum(&[0xAB, 0xCD, 0xEF, 0x00])
        );
    }

    #[test]
    fn textbook_ip_header() {
        // Widely used example header; its checksum is 0xB861.
        let hdr = [
            0x45, 0x00, 0x00, 0x73, 0x00, 0x00, 0x40, 0x00, 0x40, 0x11, 0x00, 0x00, 0xC0, 0xA8,
            0x00, 0x01, 0xC0, 0xA8, 0x00, 0xC7,
        ];
        assert_eq!(ones_complement_checksum(&hdr), 0xB861);
    }

    fn sample() -> TcpPacket {
        let mut p = TcpPacket {
            ip: Ipv4Header {
                tos: 0,
                total_length: 0,
                identification: 72,
                flags_fragment: 0,
                ttl: 64,
                protocol: PROTO_TCP,
                header_checksum: 0,
                src_addr: Ipv4Addr::new(10, 0, 0, 1),
                dst_addr: Ipv4Addr::new(10, 0, 0, 2),
            },
            tcp: TcpHeader {
                src_port: 1234,
                dst_port: 80,
                sequence: 0xDEADBEEF,
                acknowledgment: 0,
                flags: TCP_SYN,
                window: 512,
                checksum: 0,
                urgent: 0,
            },
            payload: vec![],
        };
        p.finalize();
        p
    }

    #[test]
    fn inserted_checksums_verify() {
        let p = sample();
        let bytes = p.to_bytes();
        assert_eq!(bytes.len(), 40);
        assert_eq!(ones_complement_sum(&bytes[..20]), 0xFFFF);
        assert!(p.checksums_valid());
        assert_eq!(TcpPacket::parse(&bytes).unwrap(), p);
    }

    #[test]
    fn corrupt_checksums_rejected() {
        let mut bytes = sample().to_bytes();
        bytes[10] ^= 0xFF;
        assert!(TcpPacket::parse(&bytes)
            .unwrap_err()
            .contains("IP header checksum"));
        let mut bytes = sample().to_bytes();
        bytes[24] ^= 0x01;
        assert!(TcpPacket::parse(&bytes)
            .unwrap_err()
            .contains("TCP checksum"));
    }

    #[test]
    fn rejects_non_tcp() {
        let mut p = sample();
        p.finalize();
        let mut bytes = p.to_bytes();
        bytes[9] = 17;
        bytes[10] = 0;
        bytes[11] = 0;
        let c = ones_complement_checksum(&bytes[..20]);
        bytes[10..12].copy_from_slice(&c.to_be_bytes());
        assert!(TcpPacket::parse(&bytes).unwrap_err().contains("not TCP"));
    }
}
