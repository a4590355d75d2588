//! Image carriers: a lossless BMP codec, spatial LSB embedding, and
//! embedding into quantized 8×8 DCT coefficients.

mod bmp;
mod dct;
mod lsb;

pub use bmp::{declared_file_size, decode_bmp, encode_bmp, luminance, row_stride};
pub use dct::{
    coeffs_to_image, dct_capacity, dct_embed, dct_extract, decode_scf, encode_scf, forward_dct,
    image_to_coeffs, inverse_dct, quant_table, CoeffPlane, BASE_LUMA_TABLE, SCF_MAGIC, ZIGZAG,
};
pub use lsb::{lsb_capacity, lsb_embed, lsb_extract, Capacity};

use crate::error::{Error, Result};

/// Decoded pixel raster, row-major, top row first, 8 bits per channel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    channels: u8,
    samples: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, channels: u8, samples: Vec<u8>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::InvalidParameter(format!(
                "channels must be 1 or 3, got {channels}"
            )));
        }
        let expected = width as usize * height as usize * channels as usize;
        if samples.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "{}x{}x{} raster needs {expected} samples, got {}",
                width,
                height,
                channels,
                samples.len()
            )));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    /// A raster with every sample set to `value`.
    pub fn filled(width: u32, height: u32, channels: u8, value: u8) -> Result<Self> {
        let n = width as usize * height as usize * channels as usize;
        Self::new(width, height, channels, vec![value; n])
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn channels(&self) -> u8 {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    pub fn samples_mut(&mut self) -> &mut [u8] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<u8> {
        self.samples
    }

    /// Sample at (`x`, `y`) in channel `c`.
    pub fn get(&self, x: u32, y: u32, c: u8) -> u8 {
        self.samples[self.index(x, y, c)]
    }

    pub fn set(&mut self, x: u32, y: u32, c: u8, value: u8) {
        let i = self.index(x, y, c);
        self.samples[i] = value;
    }

    fn index(&self, x: u32, y: u32, c: u8) -> usize {
        (y as usize * self.width as usize + x as usize) * self.channels as usize + c as usize
    }

    /// Single-channel luma view; grayscale images are returned unchanged.
    pub fn to_grayscale(&self) -> RasterImage {
        if self.channels == 1 {
            return self.clone();
        }
        let samples = self
            .samples
            .chunks_exact(3)
            .map(|p| luminance(p[0], p[1], p[2]))
            .collect();
        RasterImage {
            width: self.width,
            height: self.height,
            channels: 1,
            samples,
        }
    }
}
