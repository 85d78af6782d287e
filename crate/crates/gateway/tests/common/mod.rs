#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const CORE_FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");

pub fn corpus_files() -> Vec<PathBuf> {
    ["ch1_introduction.html", "ch2_number_systems.html"]
        .iter()
        .map(|f| Path::new(CORE_FIXTURES).join("corpus").join(f))
        .collect()
}

pub fn judgments() -> PathBuf {
    Path::new(CORE_FIXTURES).join("judgments.tsv")
}

/// Writes a manifest over the fixture corpus into `dir` and returns its path.
pub fn write_manifest(dir: &Path, extra: &str) -> PathBuf {
    let corpus: Vec<String> = corpus_files()
        .iter()
        .map(|p| format!("{:?}", p.to_str().unwrap()))
        .collect();
    let text = format!(
        "corpus = [{}]\nsnapshot = \"out/graph.tsv\"\nbundle = \"out/bundle.tsv\"\n{extra}",
        corpus.join(", ")
    );
    let path = dir.join("textgraph.toml");
    std::fs::write(&path, text).unwrap();
    path
}

pub fn textgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_textgraph"))
        .args(args)
        .output()
        .unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Builds the fixture corpus and returns (snapshot, bundle) paths.
pub fn built(dir: &Path) -> (String, String) {
    let manifest = write_manifest(dir, "");
    let o = textgraph(&["build", "--manifest", manifest.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = dir.join("out");
    (
        out.join("graph.tsv").to_string_lossy().into_owned(),
        out.join("bundle.tsv").to_string_lossy().into_owned(),
    )
}
