//! Registry directory layout:
//!
//! ```text
//! tbox.ttl
//! globals.ttl
//! frameworks/<id>.ttl
//! cases/<id>.ttl
//! manifest.txt        relative path <TAB> sha256 hex, one line per file
//! ```

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{is_case_id, Registry, StoreError};
use crate::rdf::Graph;
use crate::syntax::{parse_turtle, serialize_turtle};
use crate::Vocab;

pub const MANIFEST: &str = "manifest.txt";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Part {
    Tbox,
    Globals,
    Framework,
    Case,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> StoreError + '_ {
    move |e| StoreError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes `bytes` next to `path` and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), StoreError> {
    let tmp = path.with_extension("tmp");
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// SHA-256 of the manifest file, or `None` when there is none.
pub fn manifest_digest(dir: &Path) -> Option<String> {
    fs::read(dir.join(MANIFEST)).ok().map(|b| sha256_hex(&b))
}

fn classify(rel: &str) -> Option<(Part, &str)> {
    match rel {
        "tbox.ttl" => Some((Part::Tbox, "")),
        "globals.ttl" => Some((Part::Globals, "")),
        _ => {
            let (dir, file) = rel.split_once('/')?;
            let id = file.strip_suffix(".ttl").filter(|id| is_case_id(id))?;
            match dir {
                "frameworks" => Some((Part::Framework, id)),
                "cases" => Some((Part::Case, id)),
                _ => None,
            }
        }
    }
}

impl Registry {
    fn files(&self) -> Vec<(String, &Graph)> {
        let mut files = vec![
            ("tbox.ttl".to_string(), &self.tbox),
            ("globals.ttl".to_string(), &self.globals),
        ];
        files.extend(
            self.frameworks
                .iter()
                .map(|(id, g)| (format!("frameworks/{id}.ttl"), g)),
        );
        files.extend(self.cases.iter().map(|(id, g)| (format!("cases/{id}.ttl"), g)));
        files
    }

    /// Writes every member graph as canonical Turtle, then the manifest.
    /// Files of members no longer in the registry are removed.
    pub fn save(&self, dir: &Path) -> Result<(), StoreError> {
        let pm = self.prefixes();
        for sub in ["frameworks", "cases"] {
            let d = dir.join(sub);
            fs::create_dir_all(&d).map_err(io_err(&d))?;
        }
        let mut manifest = String::new();
        let files = self.files();
        for (rel, g) in &files {
            let text = serialize_turtle(g, &pm);
            write_atomic(&dir.join(rel), text.as_bytes())?;
            manifest.push_str(&format!("{rel}\t{}\n", sha256_hex(text.as_bytes())));
        }
        write_atomic(&dir.join(MANIFEST), manifest.as_bytes())?;

        for sub in ["frameworks", "cases"] {
            let d = dir.join(sub);
            for entry in fs::read_dir(&d).map_err(io_err(&d))? {
                let entry = entry.map_err(io_err(&d))?;
                let rel = format!("{sub}/{}", entry.file_name().to_string_lossy());
                if !files.iter().any(|(r, _)| *r == rel) {
                    let p = entry.path();
                    fs::remove_file(&p).map_err(io_err(&p))?;
                }
            }
        }
        Ok(())
    }

    /// Loads a registry saved by [`Registry::save`]. A missing or empty
    /// directory gives a fresh registry with the T-Box. Any unreadable,
    /// unparsable or hash-mismatched file fails the whole load.
    pub fn load(dir: &Path, vocab: Vocab) -> Result<Registry, StoreError> {
        let mut reg = Registry::new(vocab);
        let manifest_path = dir.join(MANIFEST);
        if !manifest_path.exists() {
            let has_graphs = ["tbox.ttl", "globals.ttl", "frameworks", "cases"]
                .iter()
                .any(|p| dir.join(p).exists());
            if has_graphs {
                return Err(StoreError::Corrupt {
                    file: manifest_path,
                    line: 0,
                    message: "registry files present but the manifest is missing".into(),
                });
            }
            return Ok(reg);
        }
        let manifest = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
        let pm = reg.prefixes();
        for (i, line) in manifest.lines().enumerate() {
            let corrupt = |message: String| StoreError::Corrupt {
                file: manifest_path.clone(),
                line: i + 1,
                message,
            };
            if line.trim().is_empty() {
                continue;
            }
            let (rel, hash) = line
                .split_once('\t')
                .ok_or_else(|| corrupt("expected `path<TAB>sha256`".into()))?;
            let (part, id) = classify(rel).ok_or_else(|| corrupt(format!("unexpected entry `{rel}`")))?;
            let path: PathBuf = dir.join(rel);
            let text = fs::read_to_string(&path).map_err(io_err(&path))?;
            let g = parse_turtle(&text, &pm).map_err(|e| StoreError::Corrupt {
                file: path.clone(),
                line: e.line().unwrap_or(0),
                message: e.to_string(),
            })?;
            if sha256_hex(text.as_bytes()) != hash {
                return Err(StoreError::Corrupt {
                    file: path,
                    line: 0,
                    message: format!("content does not match manifest line {}", i + 1),
                });
            }
            reg.insert_raw(part, id, g);
        }
        Ok(reg)
    }
}
