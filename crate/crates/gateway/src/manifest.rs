//! Build manifests.
//!
//! ```toml
//! corpus = ["ch1.html", "ch2.html"]
//! inference = true
//! lexical = true
//! stopwords = "stopwords.txt"
//! snapshot = "out/graph.tsv"
//! bundle = "out/bundle.tsv"
//! ```
//!
//! Relative paths resolve against the manifest's directory. Content-bundle
//! anchors name each corpus file by its final path component.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildManifest {
    pub corpus: Vec<PathBuf>,
    #[serde(default = "yes")]
    pub inference: bool,
    #[serde(default = "yes")]
    pub lexical: bool,
    #[serde(default)]
    pub stopwords: Option<PathBuf>,
    pub snapshot: PathBuf,
    pub bundle: PathBuf,
    /// Directory the relative paths above are resolved against.
    #[serde(skip)]
    pub base: PathBuf,
}

impl BuildManifest {
    pub fn from_toml(text: &str, base: &Path) -> Result<BuildManifest> {
        let mut manifest: BuildManifest = toml::from_str(text)?;
        manifest.base = base.to_path_buf();
        Ok(manifest)
    }

    pub fn load(path: &Path) -> Result<BuildManifest> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading manifest {}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        BuildManifest::from_toml(&text, base).with_context(|| format!("parsing manifest {}", path.display()))
    }

    pub fn resolve(&self, path: &Path) -> PathBuf {
        self.base.join(path)
    }
}
