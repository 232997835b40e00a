//! Run configuration: a TOML file whose keys can each be overridden by a
//! command-line flag. The only environment variable consulted is
//! `WAGERLEARN_OUT_DIR`, and only for the output directory; precedence is
//! flag, then file, then environment, then the built-in default.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{HarnessError, Result};

pub const OUT_DIR_ENV: &str = "WAGERLEARN_OUT_DIR";

/// Everything a config file may set. Unknown keys are rejected so typos
/// fail loudly instead of silently running defaults.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub k: Option<usize>,
    pub t: Option<usize>,
    pub repetitions: Option<usize>,
    pub rate_early: Option<f64>,
    pub rate_late: Option<f64>,
    pub seed: Option<u64>,
    pub algorithms: Option<Vec<String>>,
    pub eta: Option<f64>,
    pub gamma: Option<f64>,
    pub num_samples: Option<usize>,
    pub group_size: Option<usize>,
    pub num_groups: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub formats: Option<Vec<String>>,
    pub width: Option<u32>,
    pub height: Option<u32>,
    pub per_trace: Option<bool>,
}

pub fn load_config(path: impl AsRef<Path>) -> Result<FileConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    toml::from_str(&text).map_err(|e| {
        let line = e.span().map_or(0, |span| {
            1 + text[..span.start.min(text.len())]
                .bytes()
                .filter(|&b| b == b'\n')
                .count() as u64
        });
        HarnessError::parse(path, line, e.message().to_string())
    })
}

pub fn load_config_opt(path: Option<&PathBuf>) -> Result<FileConfig> {
    match path {
        Some(path) => load_config(path),
        None => Ok(FileConfig::default()),
    }
}

/// Flag beats file beats default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}

/// Flag beats file; both absent stays absent.
pub fn pick_opt<T>(flag: Option<T>, file: Option<T>) -> Option<T> {
    flag.or(file)
}

pub fn resolve_out_dir(flag: Option<PathBuf>, file: Option<PathBuf>) -> PathBuf {
    flag.or(file)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

/// Output formats for the simulate and bench commands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Formats {
    pub fn parse(names: &[String]) -> Result<Self> {
        let mut formats = Formats {
            csv: false,
            json: false,
            svg: false,
        };
        for name in names {
            match name.as_str() {
                "csv" => formats.csv = true,
                "json" => formats.json = true,
                "svg" => formats.svg = true,
                other => {
                    return Err(HarnessError::validation(format!(
                        "unknown format {other:?}; choose from csv, json, svg"
                    )))
                }
            }
        }
        if !(formats.csv || formats.json || formats.svg) {
            return Err(HarnessError::validation("no output format selected"));
        }
        Ok(formats)
    }

    pub fn all() -> Self {
        Formats {
            csv: true,
            json: true,
            svg: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn full_config_parses() {
        let f = write_temp(
            "k = 10\n\
             t = 500\n\
             repetitions = 20\n\
             rate_early = 0.4\n\
             rate_late = 0.6\n\
             seed = 7\n\
             algorithms = [\"wsu\", \"mwu-aggr\"]\n\
             eta = 0.25\n\
             out_dir = \"out\"\n\
             formats = [\"csv\", \"svg\"]\n\
             per_trace = true\n",
        );
        let cfg = load_config(f.path()).unwrap();
        assert_eq!(cfg.k, Some(10));
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.algorithms.as_deref().unwrap().len(), 2);
        assert_eq!(cfg.out_dir.as_deref(), Some(Path::new("out")));
        assert_eq!(cfg.per_trace, Some(true));
        assert_eq!(cfg.gamma, None);
    }

    #[test]
    fn unknown_keys_are_rejected_with_a_line() {
        let f = write_temp("k = 10\nrepetitons = 20\n");
        match load_config(f.path()).unwrap_err() {
            HarnessError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn precedence_is_flag_then_file_then_default() {
        assert_eq!(pick(Some(1), Some(2), 3), 1);
        assert_eq!(pick(None, Some(2), 3), 2);
        assert_eq!(pick(None::<usize>, None, 3), 3);
        assert_eq!(pick_opt(Some(0.1), Some(0.2)), Some(0.1));
        assert_eq!(pick_opt(None, Some(0.2)), Some(0.2));
    }

    #[test]
    fn out_dir_falls_back_to_the_environment_then_dot() {
        std::env::remove_var(OUT_DIR_ENV);
        assert_eq!(resolve_out_dir(None, None), PathBuf::from("."));
        std::env::set_var(OUT_DIR_ENV, "/tmp/somewhere");
        assert_eq!(resolve_out_dir(None, None), PathBuf::from("/tmp/somewhere"));
        assert_eq!(
            resolve_out_dir(Some("flag".into()), None),
            PathBuf::from("flag")
        );
        assert_eq!(
            resolve_out_dir(None, Some("file".into())),
            PathBuf::from("file")
        );
        std::env::remove_var(OUT_DIR_ENV);
    }

    #[test]
    fn formats_parse_and_reject_unknowns() {
        let f = Formats::parse(&["csv".into(), "svg".into()]).unwrap();
        assert!(f.csv && f.svg && !f.json);
        assert!(Formats::parse(&["png".into()]).is_err());
        assert!(Formats::parse(&[]).is_err());
    }
}
