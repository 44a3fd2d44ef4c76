//! Output files with provenance headers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::LinePlot;

pub struct Output {
    dir: PathBuf,
    header: Vec<String>,
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

impl Output {
    pub fn new(cfg: &RunConfig, command: &str) -> Result<Self, CliError> {
        let dir = cfg.output.dir.clone();
        std::fs::create_dir_all(&dir).map_err(io_error(&dir))?;
        let mut header = vec![
            format!("fastmode {}", env!("CARGO_PKG_VERSION")),
            format!("command: {command}"),
            format!(
                "generated: {}",
                chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
            ),
            "config:".to_string(),
        ];
        header.extend(cfg.echo().lines().filter(|l| !l.is_empty()).map(|l| format!("  {l}")));
        Ok(Self { dir, header })
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    /// Creates `name` in the output directory and hands a writer to `body`.
    pub fn write_with(
        &self,
        name: &str,
        body: impl FnOnce(&mut BufWriter<File>) -> io::Result<()>,
    ) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let file = File::create(&path).map_err(io_error(&path))?;
        let mut w = BufWriter::new(file);
        body(&mut w).and_then(|_| w.flush()).map_err(io_error(&path))?;
        Ok(path)
    }

    /// Writes a CSV file: provenance, `notes` as further comment lines, the
    /// column row, then `rows`.
    pub fn write_csv(&self, name: &str, notes: &[String], columns: &str, rows: &[String]) -> Result<PathBuf, CliError> {
        self.write_with(name, |w| {
            for line in self.header.iter().chain(notes) {
                writeln!(w, "# {line}")?;
            }
            writeln!(w, "{columns}")?;
            for row in rows {
                writeln!(w, "{row}")?;
            }
            Ok(())
        })
    }

    pub fn write_svg(&self, name: &str, plot: &LinePlot) -> Result<PathBuf, CliError> {
        let text = plot.render(&self.header);
        self.write_with(name, |w| w.write_all(text.as_bytes()))
    }
}
