//! TOML manifests bundling a dataset's files and configuration overrides.
//!
//! ```toml
//! blurry = "blurry.f32"
//! events = "events.txt"
//! gt_video = "video"
//! t_start = -0.06
//! t_end = 0.06
//!
//! [config]
//! n = 10
//! lambda = 1.0
//! ```
//!
//! Relative paths resolve against the manifest's directory. Command-line
//! flags override manifest values, which override built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::io::events::read_events;
use crate::repr::ExposureInterval;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub c_plus: Option<f64>,
    pub c_minus: Option<f64>,
    pub sigma: Option<f64>,
    pub seed: Option<u64>,
    pub exposure_ms: Option<f64>,
    pub n: Option<usize>,
    pub count: Option<usize>,
    pub c: Option<f64>,
    pub lambda: Option<f64>,
    pub imax: Option<usize>,
    pub bins: Option<usize>,
    pub threads: Option<usize>,
    pub solver: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub blurry: Option<PathBuf>,
    pub events: Option<PathBuf>,
    pub gt_video: Option<PathBuf>,
    pub t_start: Option<f64>,
    pub t_end: Option<f64>,
    #[serde(default)]
    pub config: ConfigOverrides,
}

impl Manifest {
    /// Parses, resolves relative paths and validates a manifest file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut m: Manifest = toml::from_str(&text).map_err(|e| Error::Format {
            path: path.to_path_buf(),
            message: e.message().to_string(),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        for p in [&mut m.blurry, &mut m.events, &mut m.gt_video]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        m.validate()?;
        Ok(m)
    }

    pub fn interval(&self) -> Result<Option<ExposureInterval>> {
        match (self.t_start, self.t_end) {
            (Some(s), Some(e)) => Ok(Some(ExposureInterval::new(s, e)?)),
            (None, None) => Ok(None),
            _ => Err(Error::Validation(
                "manifest must give both t_start and t_end or neither".into(),
            )),
        }
    }

    fn validate(&self) -> Result<()> {
        for p in [&self.blurry, &self.events, &self.gt_video]
            .into_iter()
            .flatten()
        {
            if !p.exists() {
                return Err(Error::Validation(format!(
                    "manifest references missing path {}",
                    p.display()
                )));
            }
        }
        if let (Some(iv), Some(events)) = (self.interval()?, &self.events) {
            // Geometry comes from the file header; only the times are checked.
            let stream = read_events(events, None)?;
            if let Some(e) = stream.events().iter().find(|e| !iv.contains(e.t)) {
                return Err(Error::Validation(format!(
                    "event at t={} lies outside the manifest interval [{}, {}]",
                    e.t,
                    iv.start(),
                    iv.end()
                )));
            }
        }
        Ok(())
    }
}

/// `flag` if given, else `manifest`, else `default`.
pub fn resolve<T>(flag: Option<T>, manifest: Option<T>, default: T) -> T {
    flag.or(manifest).unwrap_or(default)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        assert_eq!(resolve(Some(1), Some(2), 3), 1);
        assert_eq!(resolve(None, Some(2), 3), 2);
        assert_eq!(resolve(None::<i32>, None, 3), 3);
        assert_eq!(resolve(Some(1), None, 3), 1);
    }

    #[test]
    fn loads_and_resolves_paths() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("blurry.f32"), b"").unwrap();
        fs::write(
            dir.path().join("m.toml"),
            "blurry = \"blurry.f32\"\nt_start = -0.06\nt_end = 0.06\n[config]\nn = 7\n",
        )
        .unwrap();
        let m = Manifest::load(&dir.path().join("m.toml")).unwrap();
        assert_eq!(m.blurry.clone().unwrap(), dir.path().join("blurry.f32"));
        assert_eq!(m.config.n, Some(7));
        assert!(m.interval().unwrap().is_some());
    }

    #[test]
    fn missing_file_and_unknown_key() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("a.toml"), "events = \"nope.txt\"\n").unwrap();
        assert!(matches!(
            Manifest::load(&dir.path().join("a.toml")),
            Err(Error::Validation(_))
        ));
        fs::write(dir.path().join("b.toml"), "bogus = 1\n").unwrap();
        assert!(matches!(
            Manifest::load(&dir.path().join("b.toml")),
            Err(Error::Format { .. })
        ));
    }

    #[test]
    fn events_outside_interval_rejected() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(
            dir.path().join("ev.txt"),
            "# ecir-events width=2 height=2 t_start=-1 t_end=1\n0.5 0 0 1\n",
        )
        .unwrap();
        fs::write(
            dir.path().join("m.toml"),
            "events = \"ev.txt\"\nt_start = -0.1\nt_end = 0.1\n",
        )
        .unwrap();
        assert!(matches!(
            Manifest::load(&dir.path().join("m.toml")),
            Err(Error::Validation(_))
        ));
    }
}
