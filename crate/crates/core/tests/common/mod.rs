//! Shared fixture builders for the integration and acceptance suites.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stegkit::imagesteg::RasterImage;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_bytes(rng: &mut impl Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.gen()).collect()
}

pub fn random_image(rng: &mut impl Rng, width: u32, height: u32, channels: u8) -> RasterImage {
    let n = (width * height) as usize * channels as usize;
    RasterImage::new(width, height, channels, random_bytes(rng, n)).unwrap()
}

/// Photo-like RGB raster: a smooth scene from a few random gratings plus
/// sensor noise, quantized to 8 bits, then given a per-channel levels
/// stretch in the 8-bit domain the way an editor would. The stretch leaves
/// the comb-shaped histogram typical of processed photographs.
pub fn natural_image(seed: u64, width: u32, height: u32) -> RasterImage {
    let mut rng = rng(seed);
    let waves: Vec<[f64; 5]> = (0..6)
        .map(|_| {
            [
                rng.gen_range(-0.06..0.06),
                rng.gen_range(-0.06..0.06),
                rng.gen_range(0.0..std::f64::consts::TAU),
                rng.gen_range(6.0..25.0),
                rng.gen_range(0.0..1.0),
            ]
        })
        .collect();
    let base: [f64; 3] = [
        rng.gen_range(90.0..160.0),
        rng.gen_range(90.0..160.0),
        rng.gen_range(90.0..160.0),
    ];
    let mut raw = Vec::with_capacity((width * height * 3) as usize);
    for y in 0..height {
        for x in 0..width {
            for (c, b) in base.iter().enumerate() {
                let mut v = *b;
                for w in &waves {
                    v += w[3] * (w[0] * x as f64 + w[1] * y as f64 + w[2] + c as f64 * w[4]).sin();
                }
                let noise: f64 = (0..3).map(|_| rng.gen::<f64>()).sum::<f64>() - 1.5;
                v += noise * 3.0;
                raw.push(v.round().clamp(0.0, 255.0) as u8);
            }
        }
    }
    let mut out = raw.clone();
    for c in 0..3 {
        let channel = raw.iter().skip(c).step_by(3);
        let lo = *channel.clone().min().unwrap() as f64;
        let hi = *channel.max().unwrap() as f64;
        let span = (hi - lo).max(1.0);
        for v in out.iter_mut().skip(c).step_by(3) {
            *v = ((*v as f64 - lo) * 255.0 / span).round().clamp(0.0, 255.0) as u8;
        }
    }
    RasterImage::new(width, height, 3, out).unwrap()
}

/// Host files produced by an independent image library.
pub fn jpeg_fixture(seed: u64, width: u32, height: u32) -> Vec<u8> {
    let img = natural_image(seed, width, height);
    let mut out = Vec::new();
    image::codecs::jpeg::JpegEncoder::new_with_quality(&mut out, 85)
        .encode(img.samples(), width, height, image::ColorType::Rgb8)
        .unwrap();
    out
}

pub fn png_fixture(seed: u64, width: u32, height: u32) -> Vec<u8> {
    use image::ImageEncoder;
    let img = natural_image(seed, width, height);
    let mut out = Vec::new();
    image::codecs::png::PngEncoder::new(&mut out)
        .write_image(img.samples(), width, height, image::ColorType::Rgb8)
        .unwrap();
    out
}

pub fn bmp_fixture(seed: u64, width: u32, height: u32) -> Vec<u8> {
    let img = natural_image(seed, width, height);
    let mut out = Vec::new();
    image::codecs::bmp::BmpEncoder::new(&mut out)
        .encode(img.samples(), width, height, image::ColorType::Rgb8)
        .unwrap();
    out
}

/// Minimal single-entry stored ZIP archive.
pub fn zip_archive(name: &str, contents: &[u8]) -> Vec<u8> {
    let crc = crc32fast::hash(contents);
    let size = contents.len() as u32;
    let name_len = name.len() as u16;
    let mut z = Vec::new();
    z.extend_from_slice(b"PK\x03\x04");
    z.extend_from_slice(&20u16.to_le_bytes());
    z.extend_from_slice(&0u16.to_le_bytes());
    z.extend_from_slice(&0u16.to_le_bytes());
    z.extend_from_slice(&0u16.to_le_bytes());
    z.extend_from_slice(&0x21u16.to_le_bytes());
    z.extend_from_slice(&crc.to_le_bytes());
    z.extend_from_slice(&size.to_le_bytes());
    z.extend_from_slice(&size.to_le_bytes());
    z.extend_from_slice(&name_len.to_le_bytes());
    z.extend_from_slice(&0u16.to_le_bytes());
    z.extend_from_slice(name.as_bytes());
    z.extend_from_slice(contents);
    let cd_offset = z.len() as u32;
    let mut cd = Vec::new();
    cd.extend_from_slice(b"PK\x01\x02");
    cd.extend_from_slice(&20u16.to_le_bytes());
    cd.extend_from_slice(&20u16.to_le_bytes());
    cd.extend_from_slice(&0u16.to_le_bytes());
    cd.extend_from_slice(&0u16.to_le_bytes());
    cd.extend_from_slice(&0u16.to_le_bytes());
    cd.extend_from_slice(&0x21u16.to_le_bytes());
    cd.extend_from_slice(&crc.to_le_bytes());
    cd.extend_from_slice(&size.to_le_bytes());
    cd.extend_from_slice(&size.to_le_bytes());
    cd.extend_from_slice(&name_len.to_le_bytes());
    cd.extend_from_slice(&[0; 12]);
    cd.extend_from_slice(&0u32.to_le_bytes());
    cd.extend_from_slice(name.as_bytes());
    z.extend_from_slice(&cd);
    z.extend_from_slice(b"PK\x05\x06");
    z.extend_from_slice(&[0; 4]);
    z.extend_from_slice(&1u16.to_le_bytes());
    z.extend_from_slice(&1u16.to_le_bytes());
    z.extend_from_slice(&(cd.len() as u32).to_le_bytes());
    z.extend_from_slice(&cd_offset.to_le_bytes());
    z.extend_from_slice(&0u16.to_le_bytes());
    z
}

pub fn contains(haystack: &[u8], needle: &[u8]) -> bool {
    haystack.windows(needle.len()).any(|w| w == needle)
}

/// ZIP payload guaranteed free of the JPEG end marker.
pub fn secret_zip(text: &str) -> Vec<u8> {
    let mut body = text.to_string();
    loop {
        let z = zip_archive("secret.txt", body.as_bytes());
        if !contains(&z, &[0xFF, 0xD9]) {
            return z;
        }
        body.push(' ');
    }
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        let floor = 8.0 * f64::EPSILON * (left + right).abs();
        if depth == 0 || delta.abs() <= 15.0 * tol.max(floor) {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    let (fa, fb) = (f(a), f(b));
    let (m, fm, whole) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, tol, 40)
}

/// P(a, x) as a ratio of two quadratures of t^(a-1) e^(-t); no gamma
/// function evaluation involved. The integrand is rescaled by its peak, and
/// for a < 1 the substitution t = u^(1/a) removes the endpoint singularity.
pub fn gamma_p_by_quadrature(a: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let upper = a + 40.0 * a.sqrt() + 60.0;
    let split = x.min(upper);
    // integrate over unit-width pieces so the narrow peak is never skipped
    let pieces = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, n: usize| -> f64 {
        let h = (hi - lo) / n as f64;
        (0..n)
            .map(|i| integrate(f, lo + i as f64 * h, lo + (i + 1) as f64 * h, 1e-15))
            .sum()
    };
    let (num, rest) = if a < 1.0 {
        let f = move |u: f64| {
            if u <= 0.0 {
                1.0 / a
            } else {
                (-u.powf(1.0 / a)).exp() / a
            }
        };
        let (s, e) = (split.powf(a), upper.powf(a));
        (pieces(&f, 0.0, s, 64), pieces(&f, s, e, 256))
    } else {
        let peak = a - 1.0;
        let log_peak = if peak > 0.0 {
            peak * peak.ln() - peak
        } else {
            0.0
        };
        let f = move |t: f64| {
            if t <= 0.0 {
                if a == 1.0 {
                    (-log_peak).exp()
                } else {
                    0.0
                }
            } else {
                ((a - 1.0) * t.ln() - t - log_peak).exp()
            }
        };
        let n = |len: f64| (len.ceil() as usize).max(1) * 4;
        (
            pieces(&f, 0.0, split, n(split)),
            pieces(&f, split, upper, n(upper - split)),
        )
    };
    num / (num + rest)
}

/// Exhaustive minimum of Σ f·len over all length vectors satisfying Kraft's
/// inequality, which by Kraft–McMillan covers every prefix code.
pub fn optimal_prefix_cost(freqs: &[u64]) -> u64 {
    let n = freqs.len();
    let max_len = n.max(2) - 1;
    let mut best = u64::MAX;
    let mut lens = vec![1usize; n];
    loop {
        let kraft: f64 = lens.iter().map(|&l| 0.5f64.powi(l as i32)).sum();
        if kraft <= 1.0 + 1e-12 {
            let cost = freqs.iter().zip(&lens).map(|(f, &l)| f * l as u64).sum();
            best = best.min(cost);
        }
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            lens[i] += 1;
            if lens[i] <= max_len {
                break;
            }
            lens[i] = 1;
            i += 1;
        }
    }
}

/// Folded 16-bit ones'-complement sum of big-endian words.
pub fn ones_sum(bytes: &[u8]) -> u16 {
    let mut sum: u64 = bytes
        .chunks(2)
        .map(|c| u64::from(c[0]) << 8 | u64::from(*c.get(1).unwrap_or(&0)))
        .sum();
    while sum > 0xFFFF {
        sum = (sum & 0xFFFF) + (sum >> 16);
    }
    sum as u16
}

/// Verifies both checksums of a raw IPv4/TCP packet from first principles.
pub fn packet_checksums_verify(packet: &[u8]) -> bool {
    let ihl = usize::from(packet[0] & 0x0F) * 4;
    let total = usize::from(u16::from_be_bytes([packet[2], packet[3]]));
    let segment = &packet[ihl..total];
    let mut pseudo = Vec::new();
    pseudo.extend_from_slice(&packet[12..20]);
    pseudo.push(0);
    pseudo.push(packet[9]);
    pseudo.extend_from_slice(&(segment.len() as u16).to_be_bytes());
    pseudo.extend_from_slice(segment);
    ones_sum(&packet[..ihl]) == 0xFFFF && ones_sum(&pseudo) == 0xFFFF
}

pub fn random_text(rng: &mut impl Rng, min_len: usize, max_len: usize) -> String {
    let len = rng.gen_range(min_len..=max_len);
    (0..len)
        .map(|_| rng.gen_range(0x20u8..0x7F) as char)
        .collect()
}
