//! Session configuration: the choice of `xi`, bounds and output options.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::calculus::CalculusContext;
use crate::error::{Error, Result};
use crate::ideal::{Bounds, LetterOrder, RuleMode, DEFAULT_SIZE_CAP};
use crate::parse::{parse_algebra, parse_scalar};
use crate::scalar::CycScalar;
use crate::xi::XiHomomorphism;

/// Built-in choices of `xi` on `n` generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// `xi_k^{ij} = delta_jk x_i`
    #[serde(rename = "commutative")]
    Commutative,
    /// `xi_k^{ij} = c delta_jk x_i`, default `c = q`
    #[serde(rename = "scalar-twist")]
    ScalarTwist,
    /// `xi_k^{ij} = c delta_jk`, default `c = 1`
    #[serde(rename = "constant")]
    Constant,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Commutative, Preset::ScalarTwist, Preset::Constant];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Commutative => "commutative",
            Preset::ScalarTwist => "scalar-twist",
            Preset::Constant => "constant",
        }
    }

    pub fn default_param(self) -> CycScalar {
        match self {
            Preset::ScalarTwist => CycScalar::q(),
            _ => CycScalar::from(1),
        }
    }

    pub fn build(self, n: usize, param: Option<&CycScalar>) -> XiHomomorphism {
        let c = param.cloned().unwrap_or_else(|| self.default_param());
        match self {
            Preset::Commutative => XiHomomorphism::commutative(n),
            Preset::ScalarTwist => XiHomomorphism::scalar_twist(n, c),
            Preset::Constant => XiHomomorphism::constant(n, c),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown preset '{s}' (expected commutative, scalar-twist or constant)")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Latex,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "latex" => Ok(OutputFormat::Latex),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::Config(format!("unknown format '{s}' (expected text, latex or json)"))),
        }
    }
}

fn default_max_steps() -> usize {
    10_000
}

fn default_size_cap() -> usize {
    DEFAULT_SIZE_CAP
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(default)]
    pub grade_bound: Option<usize>,
    #[serde(default)]
    pub word_bound: Option<usize>,
    #[serde(default = "default_max_steps")]
    pub max_steps: usize,
    #[serde(default = "default_size_cap")]
    pub size_cap: usize,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig { grade_bound: None, word_bound: None, max_steps: default_max_steps(), size_cap: default_size_cap() }
    }
}

impl BoundsConfig {
    pub fn membership_bounds(&self) -> Bounds {
        Bounds { grade_bound: self.grade_bound, word_bound: self.word_bound, size_cap: self.size_cap }
    }
}

/// A JSON session document. Either `preset` or a full `xi_entries` array,
/// indexed `[i][k][j]` for `xi_k^{ij}`, must be given; a preset wins.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi_entries: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset_param: Option<String>,
    #[serde(default)]
    pub bounds: BoundsConfig,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub letter_order: LetterOrder,
    #[serde(default)]
    pub rule_mode: RuleMode,
}

impl SessionConfig {
    pub fn from_preset(preset: Preset, n: usize) -> Self {
        SessionConfig {
            n,
            xi_entries: None,
            preset: Some(preset),
            preset_param: None,
            bounds: BoundsConfig::default(),
            format: OutputFormat::Text,
            seed: 0,
            letter_order: LetterOrder::default(),
            rule_mode: RuleMode::default(),
        }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Config(e.to_string()))
    }

    /// A short label for reports: the preset name or `custom`.
    pub fn label(&self) -> String {
        match self.preset {
            Some(p) => p.name().to_string(),
            None => "custom".to_string(),
        }
    }

    pub fn build_xi(&self) -> Result<XiHomomorphism> {
        if self.n == 0 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if let Some(p) = self.preset {
            let param = self.preset_param.as_deref().map(parse_scalar).transpose()?;
            return Ok(p.build(self.n, param.as_ref()));
        }
        let entries = self.xi_entries.as_ref().ok_or_else(|| Error::Config("either preset or xi_entries is required".into()))?;
        let n = self.n;
        let shape_ok = entries.len() == n && entries.iter().all(|m| m.len() == n && m.iter().all(|row| row.len() == n));
        if !shape_ok {
            return Err(Error::Config(format!("xi_entries must be an {n} x {n} x {n} array indexed [i][k][j]")));
        }
        // Entries are grade 0, so any xi serves for parsing them.
        let scratch = CalculusContext::new(XiHomomorphism::commutative(n));
        let mut parsed = vec![vec![vec![]; n]; n];
        for (i, m) in entries.iter().enumerate() {
            for (k, row) in m.iter().enumerate() {
                for src in row {
                    let v = parse_algebra(src, &scratch)
                        .map_err(|e| Error::Config(format!("xi_entries[{i}][{k}]: {e}")))?;
                    parsed[i][k].push(v);
                }
            }
        }
        XiHomomorphism::from_fn(n, |i, k, j| parsed[i][k][j].clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::AlgebraElement;

    #[test]
    fn preset_document() {
        let c = SessionConfig::from_json(r#"{"n": 2, "preset": "scalar-twist", "seed": 7}"#).unwrap();
        assert_eq!(c.build_xi().unwrap(), XiHomomorphism::scalar_twist(2, CycScalar::q()));
        assert_eq!(c.bounds.size_cap, DEFAULT_SIZE_CAP);
        assert_eq!(c.seed, 7);
        let c2 = SessionConfig::from_json(r#"{"n": 2, "preset": "constant", "preset_param": "1 + q"}"#).unwrap();
        assert_eq!(c2.build_xi().unwrap(), XiHomomorphism::constant(2, CycScalar::from_ints(1, 1)));
    }

    #[test]
    fn explicit_entries() {
        let src = r#"{"n": 2, "xi_entries": [[["x1", "0"], ["0", "x1"]], [["x2", "0"], ["0", "x2"]]]}"#;
        let c = SessionConfig::from_json(src).unwrap();
        assert_eq!(c.build_xi().unwrap(), XiHomomorphism::commutative(2));
        assert_eq!(c.build_xi().unwrap().entry(1, 0, 0), &AlgebraElement::gen(1));
    }

    #[test]
    fn rejects_bad_documents() {
        for src in [
            r#"{"n": 2}"#,
            r#"{"n": 2, "preset": "quantum"}"#,
            r#"{"n": 2, "xi_entries": [[["x1"]]]}"#,
            r#"{"n": 1, "xi_entries": [[["x2"]]]}"#,
            r#"{"n": 2, "preset": "commutative", "extra": 1}"#,
        ] {
            let r = SessionConfig::from_json(src).and_then(|c| c.build_xi());
            assert!(matches!(r, Err(Error::Config(_))), "{src}: {r:?}");
        }
    }

    #[test]
    fn serializes_back() {
        let c = SessionConfig::from_preset(Preset::Commutative, 2);
        let again = SessionConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(again, c);
    }
}
