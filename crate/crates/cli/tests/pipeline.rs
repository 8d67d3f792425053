use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn timesub(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_timesub"))
        .args(["--seed", "42", "--dir"])
        .arg(dir)
        .args(args)
        .env_remove("TIMESUB_CONFIG")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = timesub(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(dir: &Path, args: &[&str]) -> i32 {
    timesub(dir, args).status.code().expect("exit code")
}

/// setup, register alice for August and publish a file dated 2023-08-20.
fn prepare(dir: &Path) -> String {
    fs::write(dir.join("plain.txt"), b"a subscription payload").unwrap();
    ok(dir, &["setup"]);
    ok(dir, &["register", "--id", "alice", "--start", "2023-08-01", "--end", "2023-08-31"]);
    let input = dir.join("plain.txt");
    let name = ok(
        dir,
        &["publish", "--date", "2023-08-20", "--name", "file", "--input", input.to_str().unwrap()],
    );
    name.trim().to_string()
}

#[test]
fn publish_sign_verify_decrypt() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let name = prepare(dir);
    assert_eq!(name, "/com/test/y2023.m8.m8w3.m8w3d6/file");

    ok(dir, &["sign", "--key", "key-alice.bin", "--name", &name, "--ts", "1000"]);
    assert_eq!(ok(dir, &["verify", "--sig", "sig.bin", "--now", "1005"]).trim(), "accept");
    assert_eq!(code(dir, &["verify", "--sig", "sig.bin", "--now", "1011"]), 10);

    ok(dir, &["decrypt", "--key", "key-alice.bin", "--ct", "file.ct", "--out", "back.txt"]);
    assert_eq!(fs::read(dir.join("back.txt")).unwrap(), b"a subscription payload");
}

#[test]
fn outsiders_and_bad_input() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let name = prepare(dir);
    ok(dir, &["register", "--id", "bob", "--start", "2023-01-01", "--end", "2023-03-31"]);
    assert_eq!(code(dir, &["sign", "--key", "key-bob.bin", "--name", &name, "--ts", "1"]), 20);
    assert_eq!(code(dir, &["decrypt", "--key", "key-bob.bin", "--ct", "file.ct", "--out", "x"]), 20);

    fs::write(dir.join("junk.bin"), b"junk").unwrap();
    assert_eq!(code(dir, &["verify", "--sig", "junk.bin", "--now", "0"]), 4);
    assert_eq!(code(dir, &["verify", "--sig", "missing.bin", "--now", "0"]), 3);
    assert_eq!(code(dir, &["register", "--id", "bad id", "--start", "2023-01-01", "--end", "2023-01-02"]), 6);
    assert_eq!(code(dir, &["frobnicate"]), 2);
}

#[test]
fn revocation_flow() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    prepare(dir);
    ok(dir, &["register", "--id", "carol", "--start", "2023-08-01", "--end", "2023-08-31"]);
    ok(dir, &["revoke", "init", "--degree", "4", "--capacity", "10"]);
    ok(dir, &["revoke", "issue", "--id", "alice"]);
    ok(dir, &["revoke", "issue", "--id", "carol"]);
    ok(dir, &["revoke", "header", "--revoke", "carol"]);
    let input = dir.join("plain.txt");
    ok(
        dir,
        &[
            "publish", "--date", "2023-08-20", "--name", "v2", "--input", input.to_str().unwrap(), "--rekey",
            "rekey.bin",
        ],
    );

    ok(dir, &["update", "--header", "revocation-header.bin", "--share", "share-alice.bin", "--out", "alice.rk"]);
    ok(dir, &["decrypt", "--key", "key-alice.bin", "--ct", "v2.ct", "--rekey", "alice.rk", "--out", "a.txt"]);
    assert_eq!(fs::read(dir.join("a.txt")).unwrap(), b"a subscription payload");

    assert_eq!(
        code(dir, &["update", "--header", "revocation-header.bin", "--share", "share-carol.bin", "--out", "c.rk"]),
        31
    );
    assert_eq!(code(dir, &["decrypt", "--key", "key-carol.bin", "--ct", "v2.ct", "--out", "c.txt"]), 22);
}

#[test]
fn fixed_seed_gives_identical_artifacts() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    prepare(a.path());
    prepare(b.path());
    for file in ["pp.bin", "ms.bin", "key-alice.bin", "file.ct"] {
        assert_eq!(
            fs::read(a.path().join(file)).unwrap(),
            fs::read(b.path().join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn config_file_round_trips() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let cfg = dir.join("run.toml");
    fs::write(&cfg, "year = 2024\n[sim]\nconsumers = 3\n").unwrap();
    let printed = ok(dir, &["--config", cfg.to_str().unwrap(), "config"]);
    assert!(printed.contains("year = 2024"), "{printed}");
    assert!(printed.contains("consumers = 3"), "{printed}");

    fs::write(&cfg, &printed).unwrap();
    assert_eq!(ok(dir, &["--config", cfg.to_str().unwrap(), "config"]), printed);

    fs::write(&cfg, "yeer = 1\n").unwrap();
    assert_eq!(code(dir, &["--config", cfg.to_str().unwrap(), "config"]), 5);
}

#[test]
fn sim_writes_csv() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    let out = ok(dir, &["sim", "--scenario", "ii", "--consumers", "2", "--file-bytes", "200000"]);
    assert!(out.contains("opened 2/2"), "{out}");
    let consumers = fs::read_to_string(dir.join("sim-ii-consumers.csv")).unwrap();
    assert_eq!(consumers.lines().count(), 3);
    assert!(dir.join("sim-ii-nodes.csv").exists());
}
