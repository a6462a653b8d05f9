use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hec"))
        .args(args)
        .output()
        .unwrap()
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Small deterministic cube in BIP order, 8-bit samples.
fn cube(nx: usize, ny: usize, nz: usize) -> Vec<u8> {
    let mut state = 0x2545_f491_u32;
    (0..nx * ny * nz)
        .map(|i| {
            state ^= state << 13;
            state ^= state >> 17;
            state ^= state << 5;
            if i % nz == 0 {
                (state % 200) as u8
            } else {
                (state % 4) as u8
            }
        })
        .collect()
}

fn encode_args<'a>(input: &'a str, output: &'a str, tables: &'a str) -> Vec<&'a str> {
    vec![
        "encode", "--input", input, "--output", output, "--nx", "6", "--ny", "5", "--nz", "4",
        "--d", "8", "--tables", tables,
    ]
}

#[test]
fn both_cores_pass() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.raw");
    std::fs::write(&input, cube(6, 5, 4)).unwrap();
    let out = dir.path().join("out.hec");
    let stats = dir.path().join("stats.txt");
    let tables = fixture("synthetic16.tbl");
    let mut args = encode_args(s(&input), s(&out), s(&tables));
    args.extend(["--core", "both", "--stats", s(&stats)]);
    let res = hec(&args);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert!(stdout.contains("equivalence=PASS"));
    assert!(stdout.contains("samples=120"));
    assert!(stdout.contains("predicted_cycles="));
    assert_eq!(std::fs::read_to_string(&stats).unwrap(), stdout);
    assert!(out.exists());
    assert!(dir.path().join("out.hec.meta").exists());
}

#[test]
fn bsq_input_matches_bip_input() {
    let dir = tempfile::tempdir().unwrap();
    let bip = cube(6, 5, 4);
    let mut bsq = vec![0u8; bip.len()];
    for y in 0..5 {
        for x in 0..6 {
            for z in 0..4 {
                bsq[z * 30 + y * 6 + x] = bip[(y * 6 + x) * 4 + z];
            }
        }
    }
    let tables = fixture("synthetic16.tbl");
    let (a_in, b_in) = (dir.path().join("a.raw"), dir.path().join("b.raw"));
    let (a_out, b_out) = (dir.path().join("a.hec"), dir.path().join("b.hec"));
    std::fs::write(&a_in, &bip).unwrap();
    std::fs::write(&b_in, &bsq).unwrap();
    assert!(hec(&encode_args(s(&a_in), s(&a_out), s(&tables)))
        .status
        .success());
    let mut args = encode_args(s(&b_in), s(&b_out), s(&tables));
    args.extend(["--order", "bsq"]);
    assert!(hec(&args).status.success());
    assert_eq!(std::fs::read(a_out).unwrap(), std::fs::read(b_out).unwrap());
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.raw");
    std::fs::write(&input, cube(6, 5, 4)).unwrap();
    let cfg = dir.path().join("params.cfg");
    std::fs::write(&cfg, "# cube\nnx=6\nny=5\nnz=4\nd=4\numax=8\n").unwrap();
    let tables = fixture("example.tbl");
    let out = dir.path().join("o.hec");
    let base = [
        "encode",
        "--input",
        s(&input),
        "--output",
        s(&out),
        "--tables",
        s(&tables),
        "--config",
        s(&cfg),
    ];
    // values up to 199 do not fit in 4 bits
    assert_eq!(hec(&base).status.code(), Some(3));
    let mut args = base.to_vec();
    args.extend(["--d", "8"]);
    let res = hec(&args);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    assert!(String::from_utf8(res.stdout).unwrap().contains("umax=8"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.raw");
    std::fs::write(&input, cube(6, 5, 4)).unwrap();
    let out = dir.path().join("o.hec");
    let tables = fixture("synthetic16.tbl");

    // missing --tables
    let args = [
        "encode",
        "--input",
        s(&input),
        "--output",
        s(&out),
        "--nx",
        "6",
        "--ny",
        "5",
        "--nz",
        "4",
        "--d",
        "8",
    ];
    let res = hec(&args);
    assert_eq!(res.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&res.stderr).contains("--tables"));

    // bad table file
    let bad = dir.path().join("bad.tbl");
    std::fs::write(
        &bad,
        "table 0 threshold=1 limit=0\ncode 0 1'b0\nflush - 1'b0\nend\n",
    )
    .unwrap();
    assert_eq!(
        hec(&encode_args(s(&input), s(&out), s(&bad))).status.code(),
        Some(4)
    );

    // invalid parameters
    let mut args = encode_args(s(&input), s(&out), s(&tables));
    args.extend(["--gamma-star", "12"]);
    assert_eq!(hec(&args).status.code(), Some(2));

    // size mismatch
    let mut args = encode_args(s(&input), s(&out), s(&tables));
    args[6] = "7";
    assert_eq!(hec(&args).status.code(), Some(3));

    // unreadable input
    let missing = dir.path().join("missing.raw");
    assert_eq!(
        hec(&encode_args(s(&missing), s(&out), s(&tables)))
            .status
            .code(),
        Some(3)
    );

    // usage error
    assert_eq!(hec(&["encode", "--order", "zigzag"]).status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn dump_rom_prints_example_layout() {
    let res = hec(&["dump-rom", "--tables", s(&fixture("example.tbl"))]);
    assert!(res.status.success());
    let text = String::from_utf8(res.stdout).unwrap();
    assert!(text.contains("1 (1'h0, ptr = 3)\n"));
    assert!(text.contains("5 (2'h1, 6'hE)\n"));
}
