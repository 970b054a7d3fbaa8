//! Run configuration: flags override a `key = value` file, which overrides
//! the defaults.

use std::path::Path;

use serde::Serialize;

use crate::UsageError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub p: u64,
    /// p-adic precision `N`.
    pub precision: u32,
    /// Witt length `L`.
    pub witt_length: usize,
    /// Degree bound `D`.
    pub degree_bound: i64,
    /// Series truncation `K`.
    pub truncation: u32,
    #[serde(skip)]
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { p: 3, precision: 12, witt_length: 6, degree_bound: 40, truncation: 18, format: Format::Json }
    }
}

/// Values that may come from flags or from a config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub p: Option<u64>,
    pub precision: Option<u32>,
    pub witt_length: Option<usize>,
    pub degree_bound: Option<i64>,
    pub truncation: Option<u32>,
    pub format: Option<Format>,
}

impl Overrides {
    /// Fill unset fields from `other`.
    pub fn or(self, other: Overrides) -> Overrides {
        Overrides {
            p: self.p.or(other.p),
            precision: self.precision.or(other.precision),
            witt_length: self.witt_length.or(other.witt_length),
            degree_bound: self.degree_bound.or(other.degree_bound),
            truncation: self.truncation.or(other.truncation),
            format: self.format.or(other.format),
        }
    }

    pub fn parse_file_contents(text: &str) -> Result<Overrides, UsageError> {
        let mut o = Overrides::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |what: &str| UsageError(format!("config line {}: {what}", lineno + 1));
            let (key, value) = line.split_once('=').ok_or_else(|| bad("expected key = value"))?;
            let value = value.trim();
            let num = |v: &str| v.parse::<i64>().map_err(|_| bad(&format!("not an integer: {v}")));
            let nonneg = |v: &str| -> Result<u64, UsageError> {
                u64::try_from(num(v)?).map_err(|_| bad(&format!("negative value: {v}")))
            };
            match key.trim() {
                "p" => o.p = Some(nonneg(value)?),
                "N" | "precision" => o.precision = Some(nonneg(value)? as u32),
                "L" | "witt_length" => o.witt_length = Some(nonneg(value)? as usize),
                "D" | "degree_bound" => o.degree_bound = Some(num(value)?),
                "K" | "truncation" => o.truncation = Some(nonneg(value)? as u32),
                "format" => {
                    o.format = Some(match value {
                        "json" => Format::Json,
                        "text" => Format::Text,
                        other => return Err(bad(&format!("unknown format {other}"))),
                    })
                }
                other => return Err(bad(&format!("unknown key {other}"))),
            }
        }
        Ok(o)
    }

    pub fn from_file(path: &Path) -> Result<Overrides, UsageError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Overrides::parse_file_contents(&text)
    }
}

impl RunConfig {
    pub fn resolve(flags: Overrides, file: Option<Overrides>) -> Result<RunConfig, UsageError> {
        let o = flags.or(file.unwrap_or_default());
        let d = RunConfig::default();
        let c = RunConfig {
            p: o.p.unwrap_or(d.p),
            precision: o.precision.unwrap_or(d.precision),
            witt_length: o.witt_length.unwrap_or(d.witt_length),
            degree_bound: o.degree_bound.unwrap_or(d.degree_bound),
            truncation: o.truncation.unwrap_or(d.truncation),
            format: o.format.unwrap_or(d.format),
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), UsageError> {
        if pdcalc::exactalg::require_prime(self.p).is_err() {
            return Err(UsageError(format!("{} is not prime", self.p)));
        }
        if self.precision == 0 || self.witt_length == 0 || self.degree_bound < 1 || self.truncation == 0 {
            return Err(UsageError("N, L, D and K must all be at least 1".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = Overrides::parse_file_contents("p = 5\nN = 7 # comment\n\nD=12").unwrap();
        let flags = Overrides { p: Some(2), ..Default::default() };
        let c = RunConfig::resolve(flags, Some(file)).unwrap();
        assert_eq!((c.p, c.precision, c.degree_bound, c.witt_length), (2, 7, 12, 6));
        assert_eq!(RunConfig::resolve(Overrides::default(), None).unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_bad_input() {
        let four = Overrides { p: Some(4), ..Default::default() };
        assert!(RunConfig::resolve(four, None).is_err());
        assert!(Overrides::parse_file_contents("q = 1").is_err());
        assert!(Overrides::parse_file_contents("p 3").is_err());
        let zero = Overrides { truncation: Some(0), ..Default::default() };
        assert!(RunConfig::resolve(zero, None).is_err());
    }
}
