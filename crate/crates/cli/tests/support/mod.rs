#![allow(dead_code)]

use qsa_cli::{run, Terminal};

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn qsa_with_input(args: &[&str], input: &str, terminal: Terminal) -> Output {
    let mut argv = vec!["qsa"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(argv, terminal, &mut input.as_bytes(), &mut out, &mut err);
    Output { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

pub fn qsa(args: &[&str]) -> Output {
    qsa_with_input(args, "", Terminal::default())
}

/// Golden cases: file stem and arguments.
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("list", &["list"]),
    ("list-json", &["list", "--format", "json"]),
    ("show-decomposition", &["show", "decomposition"]),
    ("show-sparing", &["show", "fault-tolerance", "sparing"]),
    (
        "advise-qkd",
        &[
            "advise", "communication", "--weight", "security=1",
            "--answer", "g-comm=entanglement,secure", "--answer", "g-entanglement=connection",
            "--answer", "g-connection=on-demand", "--answer", "g-secure=qkd",
        ],
    ),
    ("advise-zero", &["advise", "data-processing", "--answer", "g-data=multistage,handling,measurement", "--answer", "g-handling=mediate"]),
    ("advise-json", &["advise", "decomposition", "--weight", "modularity=2", "--weight", "performance=0.5", "--answer", "g-decomp=split", "--format", "json"]),
    ("export-dot-decomposition", &["export-dot", "decomposition"]),
    ("export-dot-communication", &["export-dot", "communication"]),
];

pub fn golden_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}
