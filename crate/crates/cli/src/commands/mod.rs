//! The four batch commands. Each writes its outputs next to `--out` and
//! produces byte-identical files for identical jobs.

mod check;
mod compare;
mod extend;
mod maximal;

use std::fs;
use std::path::{Path, PathBuf};

pub use check::{check_report, CheckReport};
pub use compare::{compare_rows, summarize, CompareRow, CompareSettings, CompareSummary, RatioRange};
pub use extend::{extension_outputs, ExtendReport};
pub use maximal::{maximal_outputs, MaximalSummary};

use crate::job::{Command, JobSpec};
use crate::CliError;

/// Runs `job` and returns the paths it wrote.
pub fn run(job: &JobSpec) -> Result<Vec<PathBuf>, CliError> {
    job.validate()?;
    match job.command {
        Command::Check => check::run(job),
        Command::Extend => extend::run(job),
        Command::Maximal => maximal::run(job),
        Command::Compare => compare::run(job),
    }
}

/// `out` with its extension replaced by `ext`, or with `.ext` appended when
/// that would overwrite `out` itself.
pub fn sidecar(out: &Path, ext: &str) -> PathBuf {
    let candidate = out.with_extension(ext);
    if candidate == out {
        let mut name = out.as_os_str().to_owned();
        name.push(".");
        name.push(ext);
        PathBuf::from(name)
    } else {
        candidate
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_paths() {
        assert_eq!(sidecar(Path::new("a/out.json"), "csv"), Path::new("a/out.csv"));
        assert_eq!(sidecar(Path::new("out.csv"), "csv"), Path::new("out.csv.csv"));
        assert_eq!(sidecar(Path::new("out"), "json"), Path::new("out.json"));
        assert_eq!(sidecar(Path::new("r.csv"), "summary.csv"), Path::new("r.summary.csv"));
    }
}
