//! Uncompressed BMP subset: 24-bit BGR and 8-bit paletted, BITMAPINFOHEADER.

use super::RasterImage;
use crate::error::{Error, Result};

const FILE_HEADER_LEN: usize = 14;
const INFO_HEADER_LEN: usize = 40;
const PPM_72_DPI: i32 = 2835;

fn u16_le(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_le(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn i32_le(b: &[u8], at: usize) -> i32 {
    u32_le(b, at) as i32
}

/// Bytes per stored row, padded to a multiple of four.
pub fn row_stride(width: usize, bits_per_pixel: usize) -> usize {
    (width * bits_per_pixel).div_ceil(32) * 4
}

/// Luma of an RGB triple, rounded to the nearest integer.
pub fn luminance(r: u8, g: u8, b: u8) -> u8 {
    (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64)
        .round()
        .clamp(0.0, 255.0) as u8
}

/// File size recorded at offset 2 of a BMP file header, if `data` looks like one.
pub fn declared_file_size(data: &[u8]) -> Option<u32> {
    (data.len() >= FILE_HEADER_LEN && data.starts_with(b"BM")).then(|| u32_le(data, 2))
}

pub fn decode_bmp(bytes: &[u8]) -> Result<RasterImage> {
    if bytes.len() < 2 || &bytes[..2] != b"BM" {
        return Err(Error::UnsupportedBmp("missing BM signature".into()));
    }
    if bytes.len() < FILE_HEADER_LEN + INFO_HEADER_LEN {
        return Err(Error::Truncated(format!(
            "{} bytes is shorter than the BMP headers",
            bytes.len()
        )));
    }
    let pixel_offset = u32_le(bytes, 10) as usize;
    let info_len = u32_le(bytes, 14) as usize;
    if info_len < INFO_HEADER_LEN {
        return Err(Error::UnsupportedBmp(format!(
            "info header size {info_len}"
        )));
    }
    let width = i32_le(bytes, 18);
    let raw_height = i32_le(bytes, 22);
    let planes = u16_le(bytes, 26);
    let bpp = u16_le(bytes, 28);
    let compression = u32_le(bytes, 30);
    let colors_used = u32_le(bytes, 46) as usize;

    if compression != 0 {
        return Err(Error::UnsupportedBmp(format!("compression {compression}")));
    }
    if planes != 1 {
        return Err(Error::UnsupportedBmp(format!("{planes} planes")));
    }
    if width < 0 || raw_height == i32::MIN {
        return Err(Error::UnsupportedBmp("negative width".into()));
    }
    let width = width as usize;
    let top_down = raw_height < 0;
    let height = raw_height.unsigned_abs() as usize;

    let palette = match bpp {
        24 => None,
        8 => {
            let entries = if colors_used == 0 {
                256
            } else {
                colors_used.min(256)
            };
            let start = FILE_HEADER_LEN + info_len;
            let end = start + entries * 4;
            if bytes.len() < end {
                return Err(Error::Truncated("palette runs past end of file".into()));
            }
            let mut lut = [0u8; 256];
            for (i, entry) in bytes[start..end].chunks_exact(4).enumerate() {
                lut[i] = luminance(entry[2], entry[1], entry[0]);
            }
            Some(lut)
        }
        other => return Err(Error::UnsupportedBmp(format!("{other} bits per pixel"))),
    };

    let stride = row_stride(width, bpp as usize);
    let needed = stride
        .checked_mul(height)
        .and_then(|n| n.checked_add(pixel_offset))
        .ok_or_else(|| Error::UnsupportedBmp("dimensions overflow".into()))?;
    if bytes.len() < needed {
        return Err(Error::Truncated(format!(
            "pixel data needs {needed} bytes, file has {}",
            bytes.len()
        )));
    }

    let channels: u8 = if palette.is_some() { 1 } else { 3 };
    let mut samples = Vec::with_capacity(width * height * channels as usize);
    for y in 0..height {
        let stored_row = if top_down { y } else { height - 1 - y };
        let row = &bytes[pixel_offset + stored_row * stride..][..stride];
        match &palette {
            Some(lut) => samples.extend(row[..width].iter().map(|&i| lut[i as usize])),
            None => {
                for px in row[..width * 3].chunks_exact(3) {
                    samples.extend_from_slice(&[px[2], px[1], px[0]]);
                }
            }
        }
    }
    RasterImage::new(width as u32, height as u32, channels, samples)
}

/// Writes a bottom-up BMP: 24-bit for RGB rasters, 8-bit with an identity
/// grey palette for single-channel ones.
pub fn encode_bmp(image: &RasterImage) -> Vec<u8> {
    let width = image.width() as usize;
    let height = image.height() as usize;
    let gray = image.channels() == 1;
    let bpp = if gray { 8 } else { 24 };
    let palette_len = if gray { 256 * 4 } else { 0 };
    let stride = row_stride(width, bpp);
    let pixel_offset = FILE_HEADER_LEN + INFO_HEADER_LEN + palette_len;
    let image_size = stride * height;
    let file_size = pixel_offset + image_size;

    let mut out = Vec::with_capacity(file_size);
    out.extend_from_slice(b"BM");
    out.extend_from_slice(&(file_size as u32).to_le_bytes());
    out.extend_from_slice(&[0; 4]);
    out.extend_from_slice(&(pixel_offset as u32).to_le_bytes());

    out.extend_from_slice(&(INFO_HEADER_LEN as u32).to_le_bytes());
    out.extend_from_slice(&(width as i32).to_le_bytes());
    out.extend_from_slice(&(height as i32).to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes());
    out.extend_from_slice(&(bpp as u16).to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());
    out.extend_from_slice(&(image_size as u32).to_le_bytes());
    out.extend_from_slice(&PPM_72_DPI.to_le_bytes());
    out.extend_from_slice(&PPM_72_DPI.to_le_bytes());
    let colors: u32 = if gray { 256 } else { 0 };
    out.extend_from_slice(&colors.to_le_bytes());
    out.extend_from_slice(&0u32.to_le_bytes());

    if gray {
        for i in 0..=255u8 {
            out.extend_from_slice(&[i, i, i, 0]);
        }
    }

    let row_bytes = width * image.channels() as usize;
    let pad = stride - if gray { width } else { width * 3 };
    for y in (0..height).rev() {
        let row = &image.samples()[y * row_bytes..][..row_bytes];
        if gray {
            out.extend_from_slice(row);
        } else {
            for px in row.chunks_exact(3) {
                out.extend_from_slice(&[px[2], px[1], px[0]]);
            }
        }
        out.extend(std::iter::repeat_n(0, pad));
    }
    debug_assert_eq!(out.len(), file_size);
    out
}
