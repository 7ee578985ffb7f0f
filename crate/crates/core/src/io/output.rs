use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Writes rows as CSV with a header taken from the row's field names.
/// Fails without writing if any field is NaN or infinite.
pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    let text = String::from_utf8(bytes).expect("csv output is utf-8");
    for (line, row) in text.lines().enumerate().skip(1) {
        if row.split(',').any(|f| matches!(f, "NaN" | "inf" | "-inf")) {
            return Err(Error::NonFinite(format!("{} row {line}", path.display())));
        }
    }
    std::fs::write(path, text)?;
    Ok(())
}

/// One named invariant check of an experiment.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    /// Passes when value <= threshold.
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            pass: value <= threshold,
            value,
            threshold,
        }
    }

    /// Passes when value > threshold.
    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            pass: value > threshold,
            value,
            threshold,
        }
    }
}

/// JSON summary of one experiment. Wall-clock time is kept out so that
/// reruns are byte-identical; it lives in the manifest.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub experiment: String,
    pub params: serde_json::Value,
    pub seeds: Vec<u64>,
    pub checks: Vec<Check>,
    pub constants: BTreeMap<String, f64>,
}

impl Report {
    pub fn new(experiment: &str, params: serde_json::Value, seeds: Vec<u64>) -> Self {
        Report {
            experiment: experiment.into(),
            params,
            seeds,
            checks: Vec::new(),
            constants: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn constant(&mut self, name: &str, value: f64) {
        self.constants.insert(name.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let bad = self
            .checks
            .iter()
            .map(|c| (c.name.as_str(), c.value))
            .chain(self.constants.iter().map(|(k, v)| (k.as_str(), *v)))
            .find(|(_, v)| !v.is_finite());
        if let Some((name, _)) = bad {
            return Err(Error::NonFinite(format!("report value {name}")));
        }
        let mut text =
            serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Row {
        t: f64,
        x: f64,
    }

    #[test]
    fn csv_rejects_non_finite() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_csv(&p, &[Row { t: 0.0, x: 1.5 }]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "t,x\n0.0,1.5\n");
        let q = dir.path().join("b.csv");
        assert!(write_csv(
            &q,
            &[Row {
                t: 0.0,
                x: f64::NAN
            }]
        )
        .is_err());
        assert!(!q.exists());
    }

    #[test]
    fn report_rejects_non_finite() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = Report::new("x", serde_json::json!({}), vec![1]);
        r.check(Check::at_most("drift", 1e-9, 1e-8));
        assert!(r.passed());
        r.write(&dir.path().join("ok.json")).unwrap();
        r.constant("c", f64::INFINITY);
        assert!(r.write(&dir.path().join("bad.json")).is_err());
    }
}
