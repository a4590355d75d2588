//! Quantized 8×8 DCT coefficient planes and magnitude-LSB embedding that
//! leaves coefficients valued 0 and 1 alone.

use std::f64::consts::PI;
use std::sync::OnceLock;

use super::{Capacity, RasterImage};
use crate::bitcodec::{bytes_to_bits, frame_payload, unframe_bits};
use crate::error::{Error, Result};

pub const SCF_MAGIC: [u8; 4] = *b"SCF1";
const SCF_HEADER_LEN: usize = 9;

/// Natural (row-major) index of each zig-zag position.
pub const ZIGZAG: [usize; 64] = [
    0, 1, 8, 16, 9, 2, 3, 10, 17, 24, 32, 25, 18, 11, 4, 5, 12, 19, 26, 33, 40, 48, 41, 34, 27, 20,
    13, 6, 7, 14, 21, 28, 35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51, 58, 59,
    52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63,
];

/// Standard JPEG luminance quantization table, natural order.
pub const BASE_LUMA_TABLE: [u16; 64] = [
    16, 11, 10, 16, 24, 40, 51, 61, //
    12, 12, 14, 19, 26, 58, 60, 55, //
    14, 13, 16, 24, 40, 57, 69, 56, //
    14, 17, 22, 29, 51, 87, 80, 62, //
    18, 22, 37, 56, 68, 109, 103, 77, //
    24, 35, 55, 64, 81, 104, 113, 92, //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
];

/// Quantized coefficients for a grayscale image, one 64-entry block per 8×8
/// tile in raster order. Each block is stored in zig-zag order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffPlane {
    width: u16,
    height: u16,
    quality: u8,
    blocks: Vec<[i16; 64]>,
}

impl CoeffPlane {
    pub fn new(width: u16, height: u16, quality: u8, blocks: Vec<[i16; 64]>) -> Result<Self> {
        check_quality(quality)?;
        let expected = block_count(width as usize, height as usize);
        if blocks.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "{width}x{height} plane needs {expected} blocks, got {}",
                blocks.len()
            )));
        }
        Ok(Self {
            width,
            height,
            quality,
            blocks,
        })
    }

    pub fn width(&self) -> u16 {
        self.width
    }

    pub fn height(&self) -> u16 {
        self.height
    }

    pub fn quality(&self) -> u8 {
        self.quality
    }

    pub fn blocks(&self) -> &[[i16; 64]] {
        &self.blocks
    }

    pub fn blocks_mut(&mut self) -> &mut [[i16; 64]] {
        &mut self.blocks
    }

    pub fn blocks_wide(&self) -> usize {
        (self.width as usize).div_ceil(8)
    }

    /// All coefficients in storage order.
    pub fn coefficients(&self) -> impl Iterator<Item = i16> + '_ {
        self.blocks.iter().flatten().copied()
    }

    pub fn coefficient_count(&self) -> usize {
        self.blocks.len() * 64
    }
}

fn block_count(width: usize, height: usize) -> usize {
    width.div_ceil(8) * height.div_ceil(8)
}

fn check_quality(quality: u8) -> Result<()> {
    if !(1..=100).contains(&quality) {
        return Err(Error::InvalidParameter(format!(
            "quality must be in 1..=100, got {quality}"
        )));
    }
    Ok(())
}

/// Luminance table scaled for `quality` (50 = base table), natural order.
pub fn quant_table(quality: u8) -> [u16; 64] {
    let q = quality.clamp(1, 100) as u32;
    let scale = if q < 50 { 5000 / q } else { 200 - 2 * q };
    BASE_LUMA_TABLE.map(|b| ((b as u32 * scale + 50) / 100).max(1) as u16)
}

fn dct_matrix() -> &'static [[f64; 8]; 8] {
    static M: OnceLock<[[f64; 8]; 8]> = OnceLock::new();
    M.get_or_init(|| {
        let mut m = [[0.0; 8]; 8];
        for (u, row) in m.iter_mut().enumerate() {
            let c = if u == 0 { (1.0f64 / 8.0).sqrt() } else { 0.5 };
            for (x, v) in row.iter_mut().enumerate() {
                *v = c * ((2 * x + 1) as f64 * u as f64 * PI / 16.0).cos();
            }
        }
        m
    })
}

/// Orthonormal 2-D type-II DCT of a row-major 8×8 block.
pub fn forward_dct(block: &[f64; 64]) -> [f64; 64] {
    let m = dct_matrix();
    let mut tmp = [0.0; 64];
    for y in 0..8 {
        for u in 0..8 {
            tmp[y * 8 + u] = (0..8).map(|x| m[u][x] * block[y * 8 + x]).sum();
        }
    }
    let mut out = [0.0; 64];
    for v in 0..8 {
        for u in 0..8 {
            out[v * 8 + u] = (0..8).map(|y| m[v][y] * tmp[y * 8 + u]).sum();
        }
    }
    out
}

/// Inverse of [`forward_dct`].
pub fn inverse_dct(coeffs: &[f64; 64]) -> [f64; 64] {
    let m = dct_matrix();
    let mut tmp = [0.0; 64];
    for v in 0..8 {
        for x in 0..8 {
            tmp[v * 8 + x] = (0..8).map(|u| m[u][x] * coeffs[v * 8 + u]).sum();
        }
    }
    let mut out = [0.0; 64];
    for y in 0..8 {
        for x in 0..8 {
            out[y * 8 + x] = (0..8).map(|v| m[v][y] * tmp[v * 8 + x]).sum();
        }
    }
    out
}

/// Level-shift, transform and quantize every 8×8 tile. RGB input is reduced
/// to luma first; partial edge tiles are padded by replicating the last
/// row and column.
pub fn image_to_coeffs(image: &RasterImage, quality: u8) -> Result<CoeffPlane> {
    check_quality(quality)?;
    let gray = image.to_grayscale();
    let (w, h) = (gray.width() as usize, gray.height() as usize);
    if w > u16::MAX as usize || h > u16::MAX as usize {
        return Err(Error::InvalidParameter(format!(
            "{w}x{h} exceeds the 65535-pixel plane limit"
        )));
    }
    let table = quant_table(quality);
    let px = gray.samples();
    let (bw, bh) = (w.div_ceil(8), h.div_ceil(8));
    let mut blocks = Vec::with_capacity(bw * bh);
    for by in 0..bh {
        for bx in 0..bw {
            let mut tile = [0.0; 64];
            for y in 0..8 {
                let sy = (by * 8 + y).min(h - 1);
                for x in 0..8 {
                    let sx = (bx * 8 + x).min(w - 1);
                    tile[y * 8 + x] = px[sy * w + sx] as f64 - 128.0;
                }
            }
            let freq = forward_dct(&tile);
            let mut block = [0i16; 64];
            for (k, &nat) in ZIGZAG.iter().enumerate() {
                block[k] = (freq[nat] / table[nat] as f64).round() as i16;
            }
            blocks.push(block);
        }
    }
    CoeffPlane::new(w as u16, h as u16, quality, blocks)
}

/// Dequantize, inverse transform, shift back and clamp to a grayscale raster.
pub fn coeffs_to_image(plane: &CoeffPlane) -> RasterImage {
    let (w, h) = (plane.width as usize, plane.height as usize);
    let table = quant_table(plane.quality);
    let bw = plane.blocks_wide();
    let mut samples = vec![0u8; w * h];
    for (i, block) in plane.blocks.iter().enumerate() {
        let (bx, by) = (i % bw, i / bw);
        let mut freq = [0.0; 64];
        for (k, &nat) in ZIGZAG.iter().enumerate() {
            freq[nat] = block[k] as f64 * table[nat] as f64;
        }
        let tile = inverse_dct(&freq);
        for y in 0..8 {
            let py = by * 8 + y;
            if py >= h {
                break;
            }
            for x in 0..8 {
                let pxx = bx * 8 + x;
                if pxx >= w {
                    break;
                }
                samples[py * w + pxx] = (tile[y * 8 + x] + 128.0).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    RasterImage::new(w as u32, h as u32, 1, samples).expect("dimensions are consistent")
}

fn carries_bit(v: i16) -> bool {
    v != 0 && v != 1
}

/// Capacity counting every coefficient whose value is neither 0 nor 1.
pub fn dct_capacity(plane: &CoeffPlane) -> Capacity {
    Capacity::from_bits(plane.coefficients().filter(|&v| carries_bit(v)).count())
}

/// Replace the magnitude LSB of `v`, keeping its sign. Never yields 0 or 1.
fn set_magnitude_lsb(v: i16, bit: bool) -> i16 {
    let sign = if v < 0 { -1 } else { 1 };
    let mag = (v as i32).abs();
    let mut new = (mag & !1) | bit as i32;
    if new == 0 {
        // -1 carrying a 0 bit: step outward to -2 rather than collapse to 0.
        new = 2;
    }
    if new > i16::MAX as i32 {
        new = i16::MAX as i32;
    }
    (sign * new) as i16
}

pub fn dct_embed(plane: &CoeffPlane, payload: &[u8]) -> Result<CoeffPlane> {
    dct_capacity(plane).check(payload.len())?;
    let frame = frame_payload(payload);
    let mut bits = bytes_to_bits(&frame);
    let mut out = plane.clone();
    'blocks: for block in out.blocks.iter_mut() {
        for v in block.iter_mut() {
            if !carries_bit(*v) {
                continue;
            }
            match bits.next() {
                Some(bit) => *v = set_magnitude_lsb(*v, bit),
                None => break 'blocks,
            }
        }
    }
    Ok(out)
}

pub fn dct_extract(plane: &CoeffPlane) -> Result<Vec<u8>> {
    unframe_bits(
        plane
            .coefficients()
            .filter(|&v| carries_bit(v))
            .map(|v| v.unsigned_abs() & 1 == 1),
    )
}

/// Serializes a plane as an `SCF1` container (big-endian throughout).
pub fn encode_scf(plane: &CoeffPlane) -> Vec<u8> {
    let mut out = Vec::with_capacity(SCF_HEADER_LEN + plane.coefficient_count() * 2);
    out.extend_from_slice(&SCF_MAGIC);
    out.extend_from_slice(&plane.width.to_be_bytes());
    out.extend_from_slice(&plane.height.to_be_bytes());
    out.push(plane.quality);
    for v in plane.coefficients() {
        out.extend_from_slice(&v.to_be_bytes());
    }
    out
}

pub fn decode_scf(bytes: &[u8]) -> Result<CoeffPlane> {
    if bytes.len() < 4 || bytes[..4] != SCF_MAGIC {
        return Err(Error::BadMagic("not an SCF1 coefficient container".into()));
    }
    if bytes.len() < SCF_HEADER_LEN {
        return Err(Error::Truncated("SCF header".into()));
    }
    let width = u16::from_be_bytes([bytes[4], bytes[5]]);
    let height = u16::from_be_bytes([bytes[6], bytes[7]]);
    let quality = bytes[8];
    let n = block_count(width as usize, height as usize);
    let body = &bytes[SCF_HEADER_LEN..];
    if body.len() != n * 128 {
        return Err(Error::Truncated(format!(
            "{width}x{height} plane needs {} coefficient bytes, found {}",
            n * 128,
            body.len()
        )));
    }
    let blocks = body
        .chunks_exact(128)
        .map(|chunk| {
            let mut block = [0i16; 64];
            for (v, b) in block.iter_mut().zip(chunk.chunks_exact(2)) {
                *v = i16::from_be_bytes([b[0], b[1]]);
            }
            block
        })
        .collect();
    CoeffPlane::new(width, height, quality, blocks)
}
