use std::net::Ipv4Addr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use stegkit::netsteg::CovertMode;

#[derive(Debug, Parser)]
#[command(
    name = "stegkit",
    version,
    about = "Hide, recover and detect data in images, audio, files, packets and charts"
)]
pub struct Cli {
    /// Seed for every random choice (packet cover fields, generated keys)
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spatial LSB embedding in BMP images
    #[command(subcommand)]
    Image(ImageCommand),
    /// Quantized-DCT coefficient embedding (BMP in, SCF coefficient file out)
    #[command(subcommand)]
    Dct(DctCommand),
    /// Append data after a host file and find it again
    #[command(subcommand)]
    File(FileCommand),
    /// WAV sample LSB embedding and spectrogram painting
    #[command(subcommand)]
    Audio(AudioCommand),
    /// TCP/IP header covert channels written to pcap captures
    #[command(subcommand)]
    Net(NetCommand),
    /// Huffman-coded messages published as numeric chart series
    #[command(subcommand)]
    Graph(GraphCommand),
    /// Statistical and signature steganalysis of a file or directory
    Analyze(AnalyzeArgs),
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Carrier file
    #[arg(long)]
    pub cover: PathBuf,
    /// File holding the payload
    #[arg(long = "in", value_name = "PATH")]
    pub input: PathBuf,
    /// Where to write the result
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// File to extract from
    pub stego: PathBuf,
    /// Write recovered bytes here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ImageCommand {
    /// Hide a payload in the pixel LSBs of a BMP
    Embed(EmbedArgs),
    /// Recover a payload from a BMP
    Extract(ExtractArgs),
    /// Report how many payload bytes a BMP can carry
    Capacity { cover: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum DctCommand {
    /// Transform a BMP to quantized coefficients and hide a payload in them
    Embed {
        #[command(flatten)]
        io: EmbedArgs,
        /// Quantization quality, 1..=100
        #[arg(long, default_value_t = 75, value_parser = clap::value_parser!(u8).range(1..=100))]
        quality: u8,
        /// Also write the decoded stego image as a BMP
        #[arg(long)]
        preview: Option<PathBuf>,
    },
    /// Recover a payload from an SCF coefficient file
    Extract(ExtractArgs),
}

#[derive(Debug, Subcommand)]
pub enum FileCommand {
    /// Concatenate a payload after a cover file
    Append(EmbedArgs),
    /// Locate data appended after the host file's end
    Scan {
        target: PathBuf,
        /// Print the finding as JSON
        #[arg(long)]
        json: bool,
    },
    /// Copy out the bytes after the host file's end
    Extract(ExtractArgs),
}

#[derive(Debug, Subcommand)]
pub enum AudioCommand {
    /// Hide a payload in the sample LSBs of a 16-bit mono WAV
    Embed(EmbedArgs),
    /// Recover a payload from a WAV
    Extract(ExtractArgs),
    /// Paint text or a BMP into the spectrogram of a new WAV
    Paint {
        /// Text to render with the built-in 5x7 font
        #[arg(long, conflicts_with = "image", required_unless_present = "image")]
        text: Option<String>,
        /// Image to paint (row 0 is the highest frequency)
        #[arg(long)]
        image: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        spectro: SpectroArgs,
    },
    /// Render the spectrogram of a painted WAV back into a BMP
    Unpaint {
        audio: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Rows of the painted picture
        #[arg(long, default_value_t = 8)]
        height: usize,
        /// Columns of the painted picture (default: one per column of audio)
        #[arg(long)]
        width: Option<usize>,
        #[command(flatten)]
        spectro: SpectroArgs,
    },
}

#[derive(Debug, Args)]
pub struct SpectroArgs {
    /// Lowest painted frequency in Hz
    #[arg(long, default_value_t = 500.0)]
    pub f_min: f64,
    /// Highest painted frequency in Hz
    #[arg(long, default_value_t = 5000.0)]
    pub f_max: f64,
    /// Audio samples per picture column
    #[arg(long, default_value_t = 1024)]
    pub samples_per_column: usize,
    /// Hann window length used when decoding (shorter is sharper in time)
    #[arg(long, default_value_t = 4096)]
    pub window_len: usize,
}

#[derive(Debug, Subcommand)]
pub enum NetCommand {
    /// Encode a message into crafted TCP SYN packets in a pcap file
    Send {
        #[arg(long, default_value = "seq")]
        mode: CovertMode,
        /// Message text
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        msg: Option<String>,
        /// File holding the message bytes
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "10.0.0.1")]
        src: Ipv4Addr,
        #[arg(long, default_value = "10.0.0.2")]
        dst: Ipv4Addr,
        #[arg(long, default_value_t = 1234)]
        sport: u16,
        #[arg(long, default_value_t = 80)]
        dport: u16,
        /// IP-ID multiplier (256 puts the byte in the high octet)
        #[arg(long, default_value_t = 1)]
        id_scale: u16,
    },
    /// Decode a message from a pcap file
    Recv {
        capture: PathBuf,
        #[arg(long, default_value = "seq")]
        mode: CovertMode,
        #[arg(long, default_value_t = 1)]
        id_scale: u16,
        /// Write the message bytes here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GraphCommand {
    /// Build a key (Huffman table from a message, plus alpha and beta)
    Keygen {
        /// Text whose letter frequencies shape the table
        #[arg(long)]
        message: String,
        /// Separator value between words
        #[arg(long, default_value_t = 1)]
        alpha: u64,
        /// Multiplier for every point (random from --seed when omitted)
        #[arg(long)]
        beta: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Turn a message into a CSV data series
    Encode {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        msg: String,
        #[arg(long)]
        title: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the message from a CSV data series
    Decode {
        series: PathBuf,
        #[arg(long)]
        key: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// File or directory to analyze
    pub path: PathBuf,
    /// One JSON report per line instead of text
    #[arg(long)]
    pub json: bool,
    /// Test windows of this many samples and report the largest p
    #[arg(long)]
    pub window: Option<usize>,
    /// p at or above which a file is flagged
    #[arg(long, default_value_t = 0.95)]
    pub detect_threshold: f64,
    /// p at or above which a file is suspicious
    #[arg(long, default_value_t = 0.5)]
    pub suspicious_threshold: f64,
}
