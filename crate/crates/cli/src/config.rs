//! Plain-text experiment configs: one `key = value` pair per line, `#`
//! comments. Qubit and basis-state numbering in config files is 1-based
//! for qubits (matching the physics convention) and 0-based for basis
//! indices; angles are radians, noise strengths dimensionless.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};

use entpower::channels::{ChannelKind, ChannelSpec};
use entpower::gates::GateSpec;
use entpower::power::{DisorderedGate, GateEnsemble, InputSet, MeasureKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Power,
    Quench,
    Noisy,
    Survey,
}

/// Everything a `power`/`quench`/`noisy`/`survey` run needs.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub gate: Option<GateSpec>,
    pub matrix_file: Option<PathBuf>,
    pub family: Option<DisorderedGate>,
    pub ensemble: Option<GateEnsemble>,
    pub measure: MeasureKind,
    pub inputs: InputSet,
    pub channels: Vec<ChannelSpec>,
    pub means: Vec<f64>,
    pub sds: Vec<f64>,
    pub realizations: usize,
    pub reuse_optimal_input: bool,
    pub n_gates: usize,
    pub compute_delta: bool,
    pub restarts: usize,
    pub max_iters: usize,
    pub ftol: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

struct KeyMap {
    entries: BTreeMap<String, String>,
}

impl KeyMap {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`, got {raw:?}", idx + 1))?;
            entries.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { entries })
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| anyhow!("missing key: {key}"))
    }

    fn optional(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let raw = self.required(key)?;
        raw.split([' ', ','])
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|_| anyhow!("invalid value for {key}: {tok:?}"))
            })
            .collect()
    }

    fn parse_as<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.optional(key) {
            None => Ok(default),
            Some(raw) => raw
                .parse::<T>()
                .map_err(|_| anyhow!("invalid value for {key}: {raw:?}")),
        }
    }
}

pub fn parse_config(text: &str, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let map = KeyMap::parse(text)?;
    let declared = map.required("experiment")?;
    let declared_kind = match declared {
        "power" => ExperimentKind::Power,
        "quench" => ExperimentKind::Quench,
        "noisy" => ExperimentKind::Noisy,
        "survey" => ExperimentKind::Survey,
        other => bail!("invalid value for experiment: {other:?}"),
    };
    if declared_kind != kind {
        bail!("config declares experiment = {declared} but was passed to the other subcommand");
    }

    let inputs = match map.optional("inputs").unwrap_or("fs") {
        "fs" => {
            let n = map.parse_as::<usize>("qubits", 2)?;
            InputSet::FullySeparable { n_qubits: n }
        }
        "bs" => InputSet::Biseparable12_3,
        other => bail!("invalid value for inputs: {other:?} (want fs or bs)"),
    };

    let measure = match map.optional("measure").unwrap_or("negativity") {
        "ggm" => MeasureKind::Ggm,
        "negativity" => MeasureKind::Negativity,
        "monogamy" => {
            let nodal_1based = map.parse_as::<usize>("nodal", 2)?;
            if nodal_1based == 0 {
                bail!("invalid value for nodal: qubits are numbered from 1");
            }
            MeasureKind::MonogamyNegSq {
                nodal: nodal_1based - 1,
            }
        }
        other => bail!("invalid value for measure: {other:?}"),
    };

    let channels = match map.optional("channels") {
        None | Some("") | Some("none") => Vec::new(),
        Some(raw) => parse_channels(raw)?,
    };

    let mut cfg = ExperimentConfig {
        kind,
        gate: None,
        matrix_file: None,
        family: None,
        ensemble: None,
        measure,
        inputs,
        channels,
        means: Vec::new(),
        sds: Vec::new(),
        realizations: map.parse_as("realizations", 10_000)?,
        reuse_optimal_input: map.parse_as("reuse_optimal_input", true)?,
        n_gates: map.parse_as("n_gates", 10_000)?,
        compute_delta: map.parse_as("compute_delta", false)?,
        restarts: map.parse_as("restarts", 50)?,
        max_iters: map.parse_as("max_iters", 2000)?,
        ftol: map.parse_as("ftol", 1e-9)?,
        seed: map.parse_as("seed", 0)?,
        out: map.optional("out").map(PathBuf::from),
    };

    match kind {
        ExperimentKind::Power | ExperimentKind::Noisy => {
            let (gate, file) = parse_gate(&map)?;
            cfg.gate = gate;
            cfg.matrix_file = file;
            if kind == ExperimentKind::Power && !cfg.channels.is_empty() {
                bail!("invalid value for channels: the power experiment is noiseless");
            }
            if kind == ExperimentKind::Noisy && cfg.channels.is_empty() {
                bail!("missing key: channels");
            }
        }
        ExperimentKind::Quench => {
            cfg.family = Some(parse_family(&map)?);
            cfg.means = map.f64_list("means")?;
            cfg.sds = map.f64_list("sds")?;
        }
        ExperimentKind::Survey => {
            cfg.ensemble = Some(match map.optional("ensemble").unwrap_or("unl") {
                "unl" => GateEnsemble::CanonicalUniformJ,
                "haar" => GateEnsemble::Haar {
                    dim: map.parse_as("dim", 4)?,
                },
                other => bail!("invalid value for ensemble: {other:?}"),
            });
        }
    }

    if matches!(cfg.measure, MeasureKind::Ggm) && !cfg.channels.is_empty() {
        bail!("invalid config: measure = ggm cannot be combined with channels");
    }
    Ok(cfg)
}

fn parse_gate(map: &KeyMap) -> Result<(Option<GateSpec>, Option<PathBuf>)> {
    let gate = map.required("gate")?;
    let spec = match gate {
        "diag" => GateSpec::Diagonal {
            dim: map.parse_as("dim", 4)?,
            phis: map.f64_list("phis")?,
        },
        "unl" => {
            let js = map.f64_list("js")?;
            if js.len() != 3 {
                bail!("invalid value for js: need exactly three couplings");
            }
            GateSpec::CanonicalNl {
                j: [js[0], js[1], js[2]],
            }
        }
        "perm" => {
            let swap = map.f64_list("swap")?;
            if swap.len() != 2 {
                bail!("invalid value for swap: need two basis indices");
            }
            GateSpec::Transposition {
                dim: map.parse_as("dim", 8)?,
                i: swap[0] as usize,
                j: swap[1] as usize,
            }
        }
        "haar" => GateSpec::HaarRandom {
            dim: map.parse_as("dim", 4)?,
            seed: map.parse_as("haar_seed", 0)?,
        },
        "fixture" => GateSpec::Fixture {
            k: map.parse_as("fixture", 1)?,
        },
        "file" => {
            let path = map.required("matrix_file")?;
            return Ok((None, Some(PathBuf::from(path))));
        }
        other => bail!("invalid value for gate: {other:?}"),
    };
    Ok((Some(spec), None))
}

fn parse_family(map: &KeyMap) -> Result<DisorderedGate> {
    Ok(match map.required("family")? {
        "diag" => DisorderedGate::Diagonal {
            dim: map.parse_as("dim", 4)?,
        },
        "unl_equal" => DisorderedGate::CanonicalEqualJ,
        "unl_indep" => DisorderedGate::CanonicalIndependentJ,
        "unl_locked" => DisorderedGate::CanonicalLockedJ23 {
            j1: map
                .required("j1")?
                .parse()
                .map_err(|_| anyhow!("invalid value for j1"))?,
        },
        other => bail!("invalid value for family: {other:?}"),
    })
}

/// `kind:p@qubit` items, comma separated; qubits are 1-based.
fn parse_channels(raw: &str) -> Result<Vec<ChannelSpec>> {
    raw.split(',')
        .map(str::trim)
        .filter(|item| !item.is_empty())
        .map(|item| {
            let (kind_str, rest) = item
                .split_once(':')
                .ok_or_else(|| anyhow!("invalid value for channels: {item:?}"))?;
            let (p_str, target_str) = rest
                .split_once('@')
                .ok_or_else(|| anyhow!("invalid value for channels: {item:?}"))?;
            let kind = match kind_str {
                "adc" => ChannelKind::Adc,
                "pdc" => ChannelKind::Pdc,
                "dpc" => ChannelKind::Dpc,
                "identity" => ChannelKind::Identity,
                other => bail!("invalid channel kind: {other:?}"),
            };
            let p: f64 = p_str
                .parse()
                .map_err(|_| anyhow!("invalid channel strength in {item:?}"))?;
            let target_1based: usize = target_str
                .parse()
                .map_err(|_| anyhow!("invalid channel target in {item:?}"))?;
            if target_1based == 0 {
                bail!("invalid channel target in {item:?}: qubits are numbered from 1");
            }
            ChannelSpec::new(kind, p, target_1based - 1)
                .with_context(|| format!("invalid channel {item:?}"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_names_the_missing_key() {
        let err = parse_config("", ExperimentKind::Power).unwrap_err();
        assert!(err.to_string().contains("missing key: experiment"), "{err}");
    }

    #[test]
    fn minimal_noisy_config_parses() {
        let text = "\
experiment = noisy
gate = diag
dim = 4
phis = 0.7853981633974483
channels = adc:0.4@1
seed = 7
";
        let cfg = parse_config(text, ExperimentKind::Noisy).unwrap();
        assert_eq!(cfg.channels.len(), 1);
        assert_eq!(cfg.channels[0].target, 0);
        assert_eq!(cfg.seed, 7);
        assert!(matches!(cfg.gate, Some(GateSpec::Diagonal { dim: 4, .. })));
    }

    #[test]
    fn ggm_with_channels_is_rejected() {
        let text = "experiment = noisy\ngate = diag\nphis = 3.1\nmeasure = ggm\nchannels = pdc:0.5@2\n";
        let err = parse_config(text, ExperimentKind::Noisy).unwrap_err();
        assert!(err.to_string().contains("ggm"), "{err}");
    }

    #[test]
    fn quench_config_parses_family() {
        let text = "\
experiment = quench
family = unl_locked
j1 = 0.7
means = 0.9
sds = 0.2
measure = ggm
realizations = 500
";
        let cfg = parse_config(text, ExperimentKind::Quench).unwrap();
        assert!(matches!(
            cfg.family,
            Some(DisorderedGate::CanonicalLockedJ23 { .. })
        ));
        assert_eq!(cfg.realizations, 500);
    }

    #[test]
    fn bad_channel_kind_is_named() {
        let text = "experiment = noisy\ngate = unl\njs = 0.1 0.2 0.3\nchannels = xyz:0.5@1\n";
        let err = parse_config(text, ExperimentKind::Noisy).unwrap_err();
        assert!(err.to_string().contains("invalid channel kind"), "{err}");
    }

    #[test]
    fn mismatched_subcommand_is_rejected() {
        let text = "experiment = power\ngate = diag\nphis = 3.1\n";
        assert!(parse_config(text, ExperimentKind::Quench).is_err());
    }
}
