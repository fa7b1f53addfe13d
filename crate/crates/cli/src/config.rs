//! Scenario configuration shared by the TOML file and the command-line flags.
//!
//! Every parameter is optional at this layer. Flags are overlaid on the file
//! values, then the scenario runner fills defaults and validates the result.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

macro_rules! value_enum {
    ($name:ident { $($variant:ident => $tag:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
        pub enum $name {
            $(
                #[serde(rename = $tag)]
                #[value(name = $tag)]
                $variant,
            )+
        }

        impl $name {
            pub fn tag(self) -> &'static str {
                match self {
                    $($name::$variant => $tag,)+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.tag())
            }
        }
    };
}

value_enum!(Kind { Nchannel => "nchannel", Twoslit => "twoslit", Epr => "epr", Sample => "sample" });
value_enum!(Format { Csv => "csv", Json => "json", Svg => "svg" });
value_enum!(Preset { Default => "default", Dft => "dft" });
value_enum!(Condition { None => "none", D1 => "d1", D2 => "d2", Dplus => "dplus", Dminus => "dminus" });
value_enum!(EnvelopeKind { Flat => "flat", Gaussian => "gaussian" });
value_enum!(SignArg { Plus => "plus", Minus => "minus" });
value_enum!(PatternKind { Bare => "bare", Washed => "washed", Conditioned => "conditioned" });
value_enum!(Axis { Z => "z", X => "x" });
value_enum!(Source { Nchannel => "nchannel", Twoslit => "twoslit", Epr => "epr" });
value_enum!(Order { MarkerFirst => "marker_first", SystemFirst => "system_first" });
value_enum!(MarkerBasisArg { Erasure => "erasure", WhichPath => "which_path" });

macro_rules! parameters {
    ($($name:ident: $ty:ty),+ $(,)?) => {
        /// Kind-specific parameters. Keys a kind does not use are rejected
        /// when the scenario is resolved.
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct Parameters {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $name: Option<$ty>,
            )+
        }

        impl Parameters {
            /// Values set in `top` win over values in `self`.
            pub fn overlay(self, top: Parameters) -> Parameters {
                Parameters { $($name: top.$name.or(self.$name),)+ }
            }

            /// Names of the keys that are set.
            pub fn keys(&self) -> Vec<&'static str> {
                let mut keys = Vec::new();
                $(if self.$name.is_some() { keys.push(stringify!($name)); })+
                keys
            }
        }
    };
}

parameters! {
    n: usize,
    preset: Preset,
    thetas: Vec<f64>,
    phis: Vec<f64>,
    condition: Condition,
    theta: f64,
    bare: bool,
    d: f64,
    lambda: f64,
    distance: f64,
    x_min: f64,
    x_max: f64,
    bins: usize,
    envelope: EnvelopeKind,
    sigma: f64,
    sign: SignArg,
    pattern: PatternKind,
    basis1: Axis,
    basis2: Axis,
    source: Source,
    basis: MarkerBasisArg,
    order: Order,
    count: usize,
    seed: u64,
    id: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub parameters: Parameters,
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse(format!("invalid config: {}", e.message())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// `top` wins field by field, parameters included.
    pub fn overlay(self, top: ScenarioConfig) -> ScenarioConfig {
        ScenarioConfig {
            kind: top.kind.or(self.kind),
            format: top.format.or(self.format),
            output: top.output.or(self.output),
            parameters: self.parameters.overlay(top.parameters),
        }
    }
}

/// The configuration actually executed, echoed into artifacts. The output
/// path is left out so artifacts do not depend on where they are written.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EffectiveConfig {
    pub kind: Kind,
    pub format: Format,
    pub parameters: Parameters,
}

impl EffectiveConfig {
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("effective config serializes to TOML")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("effective config serializes to JSON")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_parameters() {
        let cfg = ScenarioConfig::from_toml(
            "kind = \"nchannel\"\nformat = \"csv\"\n[parameters]\nn = 6\ncondition = \"dplus\"\ntheta = 0.25\n",
        )
        .unwrap();
        assert_eq!(cfg.kind, Some(Kind::Nchannel));
        assert_eq!(cfg.parameters.n, Some(6));
        assert_eq!(cfg.parameters.condition, Some(Condition::Dplus));
        assert_eq!(cfg.parameters.keys(), vec!["n", "condition", "theta"]);
    }

    #[test]
    fn unknown_keys_are_parse_errors() {
        for text in ["colour = 1\n", "[parameters]\nslits = 3\n"] {
            assert!(matches!(ScenarioConfig::from_toml(text), Err(CliError::Parse(_))));
        }
    }

    #[test]
    fn overlay_prefers_top() {
        let file = ScenarioConfig::from_toml("format = \"json\"\n[parameters]\nn = 4\nseed = 9\n").unwrap();
        let flags = ScenarioConfig {
            parameters: Parameters { n: Some(8), ..Default::default() },
            ..Default::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.format, Some(Format::Json));
        assert_eq!(merged.parameters.n, Some(8));
        assert_eq!(merged.parameters.seed, Some(9));
    }

    #[test]
    fn effective_config_round_trips_through_toml() {
        let eff = EffectiveConfig {
            kind: Kind::Twoslit,
            format: Format::Svg,
            parameters: Parameters { theta: Some(0.5), sign: Some(SignArg::Minus), ..Default::default() },
        };
        let back = ScenarioConfig::from_toml(&eff.to_toml()).unwrap();
        assert_eq!(back.kind, Some(Kind::Twoslit));
        assert_eq!(back.parameters, eff.parameters);
    }
}
