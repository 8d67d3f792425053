use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use timesub::revocation::{recover_key, RekeySecret, RevocationHeader, RevocationSetup, Share};
use timesub::scheme::{
    decrypt, naming, producer_setup, publish, publish_revocable, register_consumer, sign_interest_on_path,
    verify_interest_on_path, Ciphertext, ConsumerKey, InterestSignature, MasterSecret, PublicParams, Verdict,
};
use timesub::wire::WireError;

use crate::args::{
    Cli, Command, DecryptArgs, PublishArgs, RegisterArgs, RevokeCommand, SetupArgs, SignArgs, UpdateArgs, VerifyArgs,
};
use crate::config::RunConfig;
use crate::error::{reject_label, CliError};
use crate::seed::stream;
use crate::{bench, sim};

pub const PP_FILE: &str = "pp.bin";
pub const MS_FILE: &str = "ms.bin";
pub const REVOCATION_FILE: &str = "revocation.bin";

/// Effective configuration: file, then environment and flags on top.
pub struct Ctx {
    pub config: RunConfig,
    pub seed: u64,
}

impl Ctx {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let mut config = match &cli.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if cli.seed.is_some() {
            config.seed = cli.seed;
        }
        if let Some(dir) = &cli.dir {
            config.dir = dir.clone();
        }
        let seed = config.seed.unwrap_or_else(rand::random);
        Ok(Self { config, seed })
    }

    fn path(&self, name: impl AsRef<Path>) -> PathBuf {
        self.config.artifact(name)
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let ctx = Ctx::from_cli(&cli)?;
    match cli.command {
        Command::Setup(a) => setup(&ctx, a, out),
        Command::Register(a) => register(&ctx, a, out),
        Command::Publish(a) => publish_cmd(&ctx, a, out),
        Command::Sign(a) => sign(&ctx, a, out),
        Command::Verify(a) => verify(&ctx, a, out),
        Command::Decrypt(a) => decrypt_cmd(&ctx, a, out),
        Command::Revoke(c) => revoke(&ctx, c, out),
        Command::Update(a) => update(&ctx, a, out),
        Command::Bench(a) => bench::cmd_bench(&ctx, a, out),
        Command::Sim(a) => sim::cmd_sim(&ctx, a, out),
        Command::Config => say(out, ctx.config.to_toml().trim_end()),
    }
}

pub(crate) fn say(out: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(out, "{line}").map_err(|e| CliError::io(Path::new("<stdout>"), e))
}

pub(crate) fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn load<T>(path: &Path, what: &str, decode: impl FnOnce(&[u8]) -> Result<T, WireError>) -> Result<T, CliError> {
    decode(&read(path)?).map_err(|e| CliError::malformed(format!("{what} ({})", path.display()), e))
}

fn now_secs() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

/// IDs end up in file names, so keep them to a portable alphabet.
fn check_id(id: &str) -> Result<(), CliError> {
    let ok = !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || "-_.".contains(c));
    if ok {
        Ok(())
    } else {
        Err(CliError::Input(format!("consumer id {id:?} must be non-empty [A-Za-z0-9._-]")))
    }
}

fn setup(ctx: &Ctx, a: SetupArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let year = a.year.unwrap_or(ctx.config.year);
    let freshness = a.freshness.unwrap_or(ctx.config.freshness_secs);
    let mut rng = stream(ctx.seed, "setup");
    let (pp, ms, _) = producer_setup(year, freshness, &mut rng)?;
    write(&ctx.path(PP_FILE), &pp.to_bytes())?;
    write(&ctx.path(MS_FILE), &ms.to_bytes())?;
    say(out, &format!("setup year={year} freshness={freshness}s"))
}

fn load_pp(ctx: &Ctx) -> Result<PublicParams, CliError> {
    load(&ctx.path(PP_FILE), "public parameters", PublicParams::from_bytes)
}

fn load_ms(ctx: &Ctx) -> Result<MasterSecret, CliError> {
    load(&ctx.path(MS_FILE), "master secret", MasterSecret::from_bytes)
}

fn register(ctx: &Ctx, a: RegisterArgs, out: &mut dyn Write) -> Result<(), CliError> {
    check_id(&a.id)?;
    let (pp, ms) = (load_pp(ctx)?, load_ms(ctx)?);
    let mut rng = stream(ctx.seed, &format!("register/{}/{}/{}", a.id, a.start, a.end));
    let key = register_consumer(&ms, &pp, a.id.as_bytes(), a.start, a.end, &mut rng)?;
    let path = ctx.path(a.out.unwrap_or_else(|| format!("key-{}.bin", a.id).into()));
    write(&path, &key.to_bytes())?;
    say(out, &format!("key {} cover {}", path.display(), key.cover().labels().join(",")))
}

fn publish_cmd(ctx: &Ctx, a: PublishArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (pp, ms) = (load_pp(ctx)?, load_ms(ctx)?);
    let tree = pp.tree();
    let plaintext = read(&a.input)?;
    let prefix = a.prefix.unwrap_or_else(|| ctx.config.prefix.clone());
    let path = tree.policy_path(a.date).map_err(timesub::scheme::SchemeError::from)?;
    let name = naming::file_prefix(&prefix, &path, &a.name);
    let mut rng = stream(ctx.seed, &format!("publish/{name}"));
    let ct = match &a.rekey {
        Some(rekey_path) => {
            let rekey = load(&ctx.path(rekey_path), "rekey secret", RekeySecret::from_bytes)?;
            let header_name = a
                .revocation_name
                .unwrap_or_else(|| format!("{}/revocation/seq=1", prefix.trim_end_matches('/')));
            publish_revocable(&ms, &pp, &tree, a.date, &name, &plaintext, &header_name, &rekey, &mut rng)?
        }
        None => publish(&ms, &pp, &tree, a.date, &name, &plaintext, &mut rng)?,
    };
    let file = ctx.path(a.out.unwrap_or_else(|| format!("{}.ct", a.name).into()));
    write(&file, &ct.to_bytes())?;
    say(out, &name)
}

fn sign(ctx: &Ctx, a: SignArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let pp = load_pp(ctx)?;
    let key = load(&ctx.path(&a.key), "consumer key", ConsumerKey::from_bytes)?;
    let labels = naming::path_labels(&a.name).map_err(|e| CliError::Input(e.to_string()))?;
    let ts = a.ts.unwrap_or_else(now_secs);
    let mut rng = stream(ctx.seed, &format!("sign/{}/{}/{ts}", String::from_utf8_lossy(key.id()), a.name));
    let sig = sign_interest_on_path(&key, &pp, &a.name, ts, &labels, &mut rng)?;
    write(&ctx.path(&a.out), &sig.to_bytes())?;
    say(out, &format!("signed {} ts={ts} node={}", a.name, sig.node))
}

fn verify(ctx: &Ctx, a: VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let pp = load_pp(ctx)?;
    let sig = load(&ctx.path(&a.sig), "signature", InterestSignature::from_bytes)?;
    let labels = naming::path_labels(&sig.content_name).map_err(|e| CliError::Input(e.to_string()))?;
    let now = a.now.unwrap_or_else(now_secs);
    match verify_interest_on_path(&pp, &sig, now, &labels) {
        Verdict::Accept => say(out, "accept"),
        Verdict::Reject(r) => {
            say(out, &format!("reject({})", reject_label(&r)))?;
            Err(CliError::Rejected(r))
        }
    }
}

fn decrypt_cmd(ctx: &Ctx, a: DecryptArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let key = load(&ctx.path(&a.key), "consumer key", ConsumerKey::from_bytes)?;
    let ct = load(&ctx.path(&a.ct), "ciphertext", Ciphertext::from_bytes)?;
    let rekey = a
        .rekey
        .map(|p| load(&ctx.path(p), "rekey secret", RekeySecret::from_bytes))
        .transpose()?;
    let plaintext = decrypt(&key, &ct, rekey.as_ref())?;
    let path = ctx.path(&a.out);
    write(&path, &plaintext)?;
    say(out, &format!("decrypted {} bytes to {}", plaintext.len(), path.display()))
}

fn load_revocation(ctx: &Ctx) -> Result<RevocationSetup, CliError> {
    load(&ctx.path(REVOCATION_FILE), "revocation state", RevocationSetup::from_bytes)
}

fn revoke(ctx: &Ctx, c: RevokeCommand, out: &mut dyn Write) -> Result<(), CliError> {
    match c {
        RevokeCommand::Init { degree, capacity } => {
            let degree = degree.unwrap_or(ctx.config.revocation.degree);
            let capacity = capacity.unwrap_or(ctx.config.revocation.capacity);
            let mut rng = stream(ctx.seed, "revoke/init");
            let setup = RevocationSetup::new(degree, capacity, &mut rng)?;
            write(&ctx.path(REVOCATION_FILE), &setup.to_bytes())?;
            say(out, &format!("revocation degree={degree} capacity={capacity}"))
        }
        RevokeCommand::Issue { id, out: file } => {
            check_id(&id)?;
            let mut setup = load_revocation(ctx)?;
            let mut rng = stream(ctx.seed, &format!("revoke/issue/{id}"));
            let share = setup.issue_share(&id, &mut rng)?;
            write(&ctx.path(REVOCATION_FILE), &setup.to_bytes())?;
            let path = ctx.path(file.unwrap_or_else(|| format!("share-{id}.bin").into()));
            write(&path, &share.to_bytes())?;
            say(out, &format!("share {}", path.display()))
        }
        RevokeCommand::Header { revoke, out: file, rekey_out } => {
            let setup = load_revocation(ctx)?;
            let revoked: BTreeSet<String> = revoke.into_iter().filter(|s| !s.is_empty()).collect();
            let label: Vec<&str> = revoked.iter().map(String::as_str).collect();
            let mut rng = stream(ctx.seed, &format!("revoke/header/{}", label.join(",")));
            let k = RekeySecret::random(&mut rng);
            let header = setup.make_header(&revoked, &k, &mut rng)?;
            write(&ctx.path(&file), &header.to_bytes())?;
            write(&ctx.path(&rekey_out), &k.to_bytes())?;
            say(out, &format!("header revokes {} consumer(s)", revoked.len()))
        }
    }
}

fn update(ctx: &Ctx, a: UpdateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let header = load(&ctx.path(&a.header), "revocation header", RevocationHeader::from_bytes)?;
    let share = load(&ctx.path(&a.share), "share", Share::from_bytes)?;
    let k = recover_key(&header, &share)?;
    let path = ctx.path(&a.out);
    write(&path, &k.to_bytes())?;
    say(out, &format!("rekey {}", path.display()))
}
