//! Where results go: `--out`, else `$ARGMIN_OUT_DIR/<default name>`, else stdout.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub const OUT_DIR_VAR: &str = "ARGMIN_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Destination of one command's tables.
#[derive(Debug, Clone)]
pub struct Output {
    path: Option<PathBuf>,
}

impl Output {
    /// `stem` names the file when only the output directory is known.
    pub fn resolve(out: Option<PathBuf>, stem: &str, format: Format) -> Result<Self> {
        let path = match out {
            Some(p) => Some(p),
            None => std::env::var_os(OUT_DIR_VAR)
                .map(|dir| Path::new(&dir).join(format!("{stem}.{}", format.extension()))),
        };
        if let Some(dir) = path.as_ref().and_then(|p| p.parent()) {
            if !dir.as_os_str().is_empty() {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
        }
        Ok(Self { path })
    }

    /// Writes the main table.
    pub fn write<F>(&self, body: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write) -> argmin_core::Result<()>,
    {
        match &self.path {
            Some(p) => write_file(p, body),
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                body(&mut w)?;
                w.flush()?;
                Ok(())
            }
        }
    }

    /// Writes a companion table next to the main one: `x.csv` gets
    /// `x.<tag>.csv`; on stdout it follows after a blank line.
    pub fn write_sibling<F>(&self, tag: &str, body: F) -> Result<()>
    where
        F: FnOnce(&mut dyn Write) -> argmin_core::Result<()>,
    {
        match &self.path {
            Some(p) => write_file(&sibling(p, tag), body),
            None => {
                let stdout = io::stdout();
                let mut w = BufWriter::new(stdout.lock());
                writeln!(w)?;
                body(&mut w)?;
                w.flush()?;
                Ok(())
            }
        }
    }
}

fn write_file<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> argmin_core::Result<()>,
{
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    body(&mut w).with_context(|| format!("writing {}", path.display()))?;
    w.flush()?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// `dir/name.ext` → `dir/name.tag.ext`.
pub fn sibling(path: &Path, tag: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

/// Pretty JSON of any serializable value.
pub fn json<T: serde::Serialize + ?Sized>(value: &T, w: &mut dyn Write) -> argmin_core::Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sibling_names() {
        assert_eq!(
            sibling(Path::new("out/k.csv"), "pi"),
            PathBuf::from("out/k.pi.csv")
        );
        assert_eq!(sibling(Path::new("k"), "pi"), PathBuf::from("k.pi"));
    }
}
