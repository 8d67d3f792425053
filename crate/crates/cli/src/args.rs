use std::path::PathBuf;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "timesub", version, about = "Time-based subscription access control for NDN")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true, env = "TIMESUB_CONFIG")]
    pub config: Option<PathBuf>,
    /// Master seed; fresh OS randomness when absent.
    #[arg(long, global = true, env = "TIMESUB_SEED")]
    pub seed: Option<u64>,
    /// Artifact directory.
    #[arg(long, global = true, env = "TIMESUB_DIR")]
    pub dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate public parameters and the master secret.
    Setup(SetupArgs),
    /// Issue a consumer key for a subscription range.
    Register(RegisterArgs),
    /// Encrypt a file under the policy path of a publish date.
    Publish(PublishArgs),
    /// Sign an interest for a content name.
    Sign(SignArgs),
    /// Check a signed interest as an edge router would.
    Verify(VerifyArgs),
    /// Decrypt a published file with a consumer key.
    Decrypt(DecryptArgs),
    /// Producer-side revocation: shares and headers.
    #[command(subcommand)]
    Revoke(RevokeCommand),
    /// Consumer key update: recover the rekey secret from a header.
    Update(UpdateArgs),
    /// Timing and size tables.
    Bench(BenchArgs),
    /// Run the fetch scenarios on a simulated network.
    Sim(SimArgs),
    /// Print the effective configuration as TOML.
    Config,
}

#[derive(Debug, Args)]
pub struct SetupArgs {
    #[arg(long)]
    pub year: Option<i32>,
    /// Freshness window Δt in seconds.
    #[arg(long)]
    pub freshness: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RegisterArgs {
    #[arg(long)]
    pub id: String,
    #[arg(long)]
    pub start: NaiveDate,
    #[arg(long)]
    pub end: NaiveDate,
    /// Defaults to key-<id>.bin.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PublishArgs {
    #[arg(long)]
    pub date: NaiveDate,
    /// File name component, e.g. video.mp4.
    #[arg(long)]
    pub name: String,
    #[arg(long)]
    pub input: PathBuf,
    /// Name prefix; defaults to the configured prefix.
    #[arg(long)]
    pub prefix: Option<String>,
    /// Producer rekey secret from `revoke header`; binds the content to it.
    #[arg(long)]
    pub rekey: Option<PathBuf>,
    /// Name of the revocation header object.
    #[arg(long)]
    pub revocation_name: Option<String>,
    /// Defaults to <name>.ct.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignArgs {
    #[arg(long)]
    pub key: PathBuf,
    /// Content name carrying a policy component.
    #[arg(long)]
    pub name: String,
    /// Unix seconds; defaults to now.
    #[arg(long)]
    pub ts: Option<u64>,
    #[arg(long, default_value = "sig.bin")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub sig: PathBuf,
    /// Unix seconds; defaults to now.
    #[arg(long)]
    pub now: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long)]
    pub ct: PathBuf,
    /// Rekey secret from `update`, for content bound to a revocation header.
    #[arg(long)]
    pub rekey: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum RevokeCommand {
    /// Create the revocation polynomial and its padding pool.
    Init {
        #[arg(long)]
        degree: Option<usize>,
        #[arg(long)]
        capacity: Option<usize>,
    },
    /// Hand a share to a consumer.
    Issue {
        #[arg(long)]
        id: String,
        /// Defaults to share-<id>.bin.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Broadcast a header revoking the listed consumers, with a fresh rekey secret.
    Header {
        #[arg(long, value_delimiter = ',')]
        revoke: Vec<String>,
        #[arg(long, default_value = "revocation-header.bin")]
        out: PathBuf,
        #[arg(long, default_value = "rekey.bin")]
        rekey_out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct UpdateArgs {
    #[arg(long)]
    pub header: PathBuf,
    #[arg(long)]
    pub share: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    PublishHeight,
    KeyupdateRevoked,
    Sizes,
    CryptoOps,
    All,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// i, ii, iii or all.
    #[arg(long)]
    pub scenario: Option<String>,
    #[arg(long)]
    pub topology: Option<PathBuf>,
    #[arg(long)]
    pub consumers: Option<usize>,
    /// Plaintext file size in bytes.
    #[arg(long)]
    pub file_bytes: Option<usize>,
    /// concurrent or staggered.
    #[arg(long)]
    pub start: Option<String>,
    #[arg(long)]
    pub stagger_ms: Option<u64>,
    #[arg(long)]
    pub loss_rate: Option<f64>,
    #[arg(long)]
    pub cs_capacity: Option<usize>,
}
