use std::fs;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stegkit::audiosteg::{
    audio_lsb_capacity, audio_lsb_embed, audio_lsb_extract, decode_wav, encode_wav, rasterize_text,
    spectro_decode, spectro_encode, SpectroParams,
};
use stegkit::filesteg::{append_embed, extract_trailer, scan_trailer};
use stegkit::graphsteg::{
    build_table, decode_series, encode_series, parse_series, serialize_series, GraphKey,
};
use stegkit::imagesteg::{
    coeffs_to_image, dct_capacity, dct_embed, dct_extract, decode_bmp, decode_scf, encode_bmp,
    encode_scf, image_to_coeffs, lsb_capacity, lsb_embed, lsb_extract,
};
use stegkit::netsteg::{covert_decode_scaled, covert_encode, read_pcap, write_pcap, CovertConfig};
use stegkit::steganalysis::{analyze_path, AnalysisOptions, Thresholds};
use stegkit::{Error, Result};

use crate::args::{
    AnalyzeArgs, AudioCommand, DctCommand, EmbedArgs, ExtractArgs, FileCommand, GraphCommand,
    ImageCommand, NetCommand, SpectroArgs,
};

/// What a successful command wants the process to exit with.
pub enum Status {
    Done,
    NothingFound,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<()> {
    fs::write(path, data).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Recovered bytes go to `out` when given, otherwise raw to stdout.
fn emit(out: Option<&Path>, data: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            write(path, data)?;
            eprintln!("recovered {} bytes -> {}", data.len(), path.display());
            Ok(())
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(data)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn extract_with(
    args: &ExtractArgs,
    extract: impl FnOnce(&[u8]) -> Result<Vec<u8>>,
) -> Result<Status> {
    let payload = extract(&read(&args.stego)?)?;
    emit(args.out.as_deref(), &payload)?;
    Ok(Status::Done)
}

pub fn image(cmd: &ImageCommand) -> Result<Status> {
    match cmd {
        ImageCommand::Embed(EmbedArgs { cover, input, out }) => {
            let img = decode_bmp(&read(cover)?)?;
            let payload = read(input)?;
            let stego = lsb_embed(&img, &payload)?;
            write(out, &encode_bmp(&stego))?;
            println!(
                "embedded {} bytes in {}x{} image (capacity {} bytes) -> {}",
                payload.len(),
                img.width(),
                img.height(),
                lsb_capacity(&img).usable_bytes,
                out.display()
            );
            Ok(Status::Done)
        }
        ImageCommand::Extract(args) => extract_with(args, |d| lsb_extract(&decode_bmp(d)?)),
        ImageCommand::Capacity { cover } => {
            let img = decode_bmp(&read(cover)?)?;
            let cap = lsb_capacity(&img);
            println!(
                "{}: {}x{}x{} samples, {} bytes raw, {} bytes usable payload",
                cover.display(),
                img.width(),
                img.height(),
                img.channels(),
                cap.total_bytes,
                cap.usable_bytes
            );
            Ok(Status::Done)
        }
    }
}

pub fn dct(cmd: &DctCommand) -> Result<Status> {
    match cmd {
        DctCommand::Embed {
            io,
            quality,
            preview,
        } => {
            let img = decode_bmp(&read(&io.cover)?)?;
            let payload = read(&io.input)?;
            let plane = image_to_coeffs(&img, *quality)?;
            let stego = dct_embed(&plane, &payload)?;
            write(&io.out, &encode_scf(&stego))?;
            if let Some(path) = preview {
                write(path, &encode_bmp(&coeffs_to_image(&stego)))?;
            }
            let cap = dct_capacity(&plane);
            println!(
                "embedded {} bytes in {} coefficients at quality {} (capacity {} bytes) -> {}",
                payload.len(),
                plane.coefficient_count(),
                quality,
                cap.usable_bytes,
                io.out.display()
            );
            Ok(Status::Done)
        }
        DctCommand::Extract(args) => extract_with(args, |d| dct_extract(&decode_scf(d)?)),
    }
}

pub fn file(cmd: &FileCommand) -> Result<Status> {
    match cmd {
        FileCommand::Append(EmbedArgs { cover, input, out }) => {
            let cover_bytes = read(cover)?;
            let payload = read(input)?;
            let stego = append_embed(&cover_bytes, &payload)?;
            write(out, &stego)?;
            println!(
                "{} + {} = {} bytes -> {}",
                cover_bytes.len(),
                payload.len(),
                stego.len(),
                out.display()
            );
            Ok(Status::Done)
        }
        FileCommand::Scan { target, json } => match scan_trailer(&read(target)?) {
            Some(f) if *json => {
                println!("{}", serde_json::to_string(&f).expect("finding serializes"));
                Ok(Status::Done)
            }
            Some(f) => {
                println!(
                    "{}: {:?} host, {:?} trailer at offset {} ({} bytes)",
                    target.display(),
                    f.host_format,
                    f.trailer_kind,
                    f.trailer_offset,
                    f.trailer_len
                );
                Ok(Status::Done)
            }
            None => {
                println!("{}: no trailer", target.display());
                Ok(Status::NothingFound)
            }
        },
        FileCommand::Extract(args) => extract_with(args, extract_trailer),
    }
}

fn spectro_params(args: &SpectroArgs) -> Result<SpectroParams> {
    let params = SpectroParams {
        f_min: args.f_min,
        f_max: args.f_max,
        samples_per_column: args.samples_per_column,
        window_len: args.window_len,
        fft_size: args.window_len.max(SpectroParams::default().fft_size),
        ..SpectroParams::default()
    };
    params.validate()?;
    Ok(params)
}

pub fn audio(cmd: &AudioCommand) -> Result<Status> {
    match cmd {
        AudioCommand::Embed(EmbedArgs { cover, input, out }) => {
            let wav = decode_wav(&read(cover)?)?;
            let payload = read(input)?;
            let stego = audio_lsb_embed(&wav, &payload)?;
            write(out, &encode_wav(&stego))?;
            println!(
                "embedded {} bytes in {} samples (capacity {} bytes) -> {}",
                payload.len(),
                wav.samples().len(),
                audio_lsb_capacity(&wav).usable_bytes,
                out.display()
            );
            Ok(Status::Done)
        }
        AudioCommand::Extract(args) => extract_with(args, |d| audio_lsb_extract(&decode_wav(d)?)),
        AudioCommand::Paint {
            text,
            image,
            out,
            spectro,
        } => {
            let params = spectro_params(spectro)?;
            let picture = match (text, image) {
                (Some(text), _) => rasterize_text(text)?,
                (None, Some(path)) => decode_bmp(&read(path)?)?,
                (None, None) => unreachable!("clap requires --text or --image"),
            };
            let wav = spectro_encode(&picture, &params)?;
            write(out, &encode_wav(&wav))?;
            println!(
                "painted {}x{} picture into {:.2} s of audio -> {}",
                picture.width(),
                picture.height(),
                wav.duration_secs(),
                out.display()
            );
            Ok(Status::Done)
        }
        AudioCommand::Unpaint {
            audio,
            out,
            height,
            width,
            spectro,
        } => {
            let params = spectro_params(spectro)?;
            let wav = decode_wav(&read(audio)?)?;
            let width = width.unwrap_or(wav.samples().len() / params.samples_per_column);
            let picture = spectro_decode(&wav, *height, width, &params)?;
            write(out, &encode_bmp(&picture))?;
            println!("rendered {width}x{height} spectrogram -> {}", out.display());
            Ok(Status::Done)
        }
    }
}

pub fn net(cmd: &NetCommand, seed: u64) -> Result<Status> {
    match cmd {
        NetCommand::Send {
            mode,
            msg,
            input,
            out,
            src,
            dst,
            sport,
            dport,
            id_scale,
        } => {
            let message = match (msg, input) {
                (Some(m), _) => m.clone().into_bytes(),
                (None, Some(path)) => read(path)?,
                (None, None) => unreachable!("clap requires --msg or --in"),
            };
            let config = CovertConfig {
                src: *src,
                dst: *dst,
                src_port: *sport,
                dst_port: *dport,
                id_scale: *id_scale,
                seed,
                ..CovertConfig::new(*mode)
            };
            let capture = covert_encode(&message, &config)?;
            write(out, &write_pcap(&capture))?;
            println!(
                "wrote {} packets ({} mode) -> {}",
                capture.records.len(),
                mode,
                out.display()
            );
            Ok(Status::Done)
        }
        NetCommand::Recv {
            capture,
            mode,
            id_scale,
            out,
        } => {
            let capture = read_pcap(&read(capture)?)?;
            let message = covert_decode_scaled(&capture, *mode, *id_scale)?;
            match out {
                Some(path) => emit(Some(path), &message)?,
                None => println!("{}", String::from_utf8_lossy(&message)),
            }
            Ok(Status::Done)
        }
    }
}

pub fn graph(cmd: &GraphCommand, seed: u64) -> Result<Status> {
    match cmd {
        GraphCommand::Keygen {
            message,
            alpha,
            beta,
            out,
        } => {
            let table = build_table(message)?;
            let beta = beta.unwrap_or_else(|| ChaCha8Rng::seed_from_u64(seed).gen_range(2..=9_999));
            let key = GraphKey::new(*alpha, beta, table)?;
            write(out, key.to_json().as_bytes())?;
            println!(
                "key with {} letters, alpha {}, beta {} -> {}",
                key.table.len(),
                key.alpha,
                key.beta,
                out.display()
            );
            Ok(Status::Done)
        }
        GraphCommand::Encode {
            key,
            msg,
            title,
            out,
        } => {
            let key = GraphKey::from_json(&read_text(key)?)?;
            let mut series = encode_series(msg, &key)?;
            series.title = title.clone();
            write(out, serialize_series(&series).as_bytes())?;
            println!("wrote {} points -> {}", series.points.len(), out.display());
            Ok(Status::Done)
        }
        GraphCommand::Decode { series, key } => {
            let key = GraphKey::from_json(&read_text(key)?)?;
            let series = parse_series(&read_text(series)?)?;
            println!("{}", decode_series(&series, &key)?);
            Ok(Status::Done)
        }
    }
}

pub fn analyze(args: &AnalyzeArgs) -> Result<Status> {
    let options = AnalysisOptions {
        thresholds: Thresholds {
            detected: args.detect_threshold,
            suspicious: args.suspicious_threshold,
        },
        window: args.window,
    };
    if !args.path.exists() {
        return Err(Error::Io(format!(
            "{}: no such file or directory",
            args.path.display()
        )));
    }
    for report in analyze_path(&args.path, &options)? {
        if args.json {
            println!("{}", report.to_json());
        } else {
            print!("{}", report.to_text());
        }
    }
    Ok(Status::Done)
}
