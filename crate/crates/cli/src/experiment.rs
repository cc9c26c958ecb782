//! Experiment files: a flat TOML document with an `[experiment]` header,
//! shared `[geometry]` and `[defaults]` sections, and one `[entry.<name>]`
//! table per simulated scheme.
//!
//! ```toml
//! [experiment]
//! output_dir = "out/fig4"
//! seed = 1
//!
//! [geometry]
//! r_s = 1.0
//! r_d = 9.0
//! direct = 9.85
//!
//! [defaults]
//! snr_start = 60.0
//! snr_stop = 100.0
//! snr_step = 2.0
//!
//! [entry.ris_alamouti_n16]
//! scheme = "ris_alamouti"
//! n_elements = 16
//! ```

use std::fmt;

use indexmap::IndexMap;
use rismimo::channel::{FadingSpec, Geometry, LosPattern};
use rismimo::harness::{PowerSplit, SchemeConfig, SchemeKind, StopRule};
use rismimo::modem::ModulationKind;
use rismimo::vblast::{AntennaPair, ImMode, IndexDetector};
use serde::{Deserialize, Serialize};
use toml::{Table, Value};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("bad override `{0}`: {1}")]
    Override(String, String),
    #[error("invalid `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

impl ConfigError {
    fn invalid(field: impl Into<String>, reason: impl fmt::Display) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            reason: reason.to_string(),
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            ConfigError::Parse { .. } | ConfigError::Override(..) => 2,
            ConfigError::Invalid { .. } => 3,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub output_dir: Option<String>,
    pub seed: Option<u64>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub r_s: Option<f64>,
    pub r_d: Option<f64>,
    pub direct: Option<f64>,
    pub frequency_hz: Option<f64>,
}

/// Flat per-entry settings; anything left out comes from `[defaults]`, then
/// from the scheme's own defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub scheme: Option<String>,
    pub n_tx: Option<usize>,
    pub n_rx: Option<usize>,
    pub n_elements: Option<usize>,
    pub modulation: Option<String>,
    pub order: Option<usize>,
    pub mode: Option<String>,
    /// Enhancing-mode pair, e.g. `"T1-R1"`.
    pub pair: Option<String>,
    pub detector: Option<String>,
    pub quant_bits: Option<u32>,
    /// K-factor for both hops; `-inf` is Rayleigh.
    pub k_factor_db: Option<f64>,
    pub k_h1_db: Option<f64>,
    pub k_g1_db: Option<f64>,
    pub los: Option<String>,
    pub los_seed: Option<u64>,
    pub power: Option<String>,
    pub snr_db: Option<Vec<f64>>,
    pub snr_start: Option<f64>,
    pub snr_stop: Option<f64>,
    pub snr_step: Option<f64>,
    pub min_bit_errors: Option<u64>,
    pub max_trials: Option<u64>,
    pub seed: Option<u64>,
}

macro_rules! overlay {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl EntrySpec {
    fn with_defaults(mut self, d: &EntrySpec) -> Self {
        overlay!(self, d; scheme, n_tx, n_rx, n_elements, modulation, order, mode, pair, detector,
            quant_bits, k_factor_db, k_h1_db, k_g1_db, los, los_seed, power, snr_db, snr_start,
            snr_stop, snr_step, min_bit_errors, max_trials, seed);
        self
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub defaults: EntrySpec,
    #[serde(default)]
    pub entry: IndexMap<String, EntrySpec>,
}

/// One fully resolved entry.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedEntry {
    pub name: String,
    pub config: SchemeConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct Experiment {
    pub output_dir: Option<String>,
    pub seed: u64,
    pub description: Option<String>,
    pub entries: Vec<ResolvedEntry>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |i| before.len() - i - 1) + 1;
    (line, column)
}

fn parse_error(origin: &str, text: &str, e: toml::de::Error) -> ConfigError {
    let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
    ConfigError::Parse {
        origin: origin.to_string(),
        line,
        column,
        message: e.message().trim().to_string(),
    }
}

/// Parses an override value as a TOML value, falling back to a bare string.
fn override_value(raw: &str) -> Value {
    let doc = format!("v = {raw}");
    match doc.parse::<Table>() {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| Value::String(raw.to_string())),
        Err(_) => Value::String(raw.to_string()),
    }
}

const ENTRY_KEYS: &[&str] = &[
    "scheme",
    "n_tx",
    "n_rx",
    "n_elements",
    "modulation",
    "order",
    "mode",
    "pair",
    "detector",
    "quant_bits",
    "k_factor_db",
    "k_h1_db",
    "k_g1_db",
    "los",
    "los_seed",
    "power",
    "snr_db",
    "snr_start",
    "snr_stop",
    "snr_step",
    "min_bit_errors",
    "max_trials",
    "seed",
];

/// Applies one `key=value` override to the raw document.
///
/// `section.key` and `entry.<name>.key` address one value; a bare entry key
/// such as `max_trials=1000` is applied to every entry.
pub fn apply_override(doc: &mut Table, spec: &str) -> Result<(), ConfigError> {
    let bad = |why: &str| ConfigError::Override(spec.to_string(), why.to_string());
    let (key, raw) = spec.split_once('=').ok_or_else(|| bad("expected key=value"))?;
    let (key, value) = (key.trim(), override_value(raw.trim()));
    let path: Vec<&str> = key.split('.').collect();
    match path.as_slice() {
        [k] if ENTRY_KEYS.contains(k) => {
            let entries = doc.get_mut("entry").and_then(Value::as_table_mut).ok_or_else(|| bad("no entries"))?;
            for (_, e) in entries.iter_mut() {
                if let Some(t) = e.as_table_mut() {
                    t.insert(k.to_string(), value.clone());
                }
            }
        }
        [section, k] if ["experiment", "geometry", "defaults"].contains(section) => {
            let v = doc.entry(section.to_string()).or_insert_with(|| Value::Table(Table::new()));
            v.as_table_mut().ok_or_else(|| bad("not a table"))?.insert(k.to_string(), value);
        }
        ["entry", name, k] => {
            let t = doc
                .get_mut("entry")
                .and_then(Value::as_table_mut)
                .and_then(|e| e.get_mut(*name))
                .and_then(Value::as_table_mut)
                .ok_or_else(|| bad(&format!("no entry named `{name}`")))?;
            t.insert(k.to_string(), value);
        }
        _ => return Err(bad("unknown key")),
    }
    Ok(())
}

/// Parses, overrides and resolves an experiment file. Every entry is
/// validated before this returns.
pub fn load(origin: &str, text: &str, overrides: &[String]) -> Result<Experiment, ConfigError> {
    // typed parse of the file itself, for line/column diagnostics
    toml::from_str::<ExperimentFile>(text).map_err(|e| parse_error(origin, text, e))?;
    let mut doc: Table = text.parse().map_err(|e| parse_error(origin, text, e))?;
    for o in overrides {
        apply_override(&mut doc, o)?;
    }
    let file: ExperimentFile = ExperimentFile::deserialize(doc)
        .map_err(|e| ConfigError::Override(overrides.join(" "), e.message().trim().to_string()))?;
    resolve(file)
}

pub fn resolve(file: ExperimentFile) -> Result<Experiment, ConfigError> {
    if file.entry.is_empty() {
        return Err(ConfigError::invalid("entry", "no [entry.<name>] tables"));
    }
    let seed = file.experiment.seed.unwrap_or(1);
    let entries = file
        .entry
        .iter()
        .map(|(name, spec)| {
            let spec = spec.clone().with_defaults(&file.defaults);
            let config = to_scheme_config(name, &spec, &file.geometry, seed)?;
            Ok(ResolvedEntry {
                name: name.clone(),
                config,
            })
        })
        .collect::<Result<Vec<_>, ConfigError>>()?;
    Ok(Experiment {
        output_dir: file.experiment.output_dir,
        seed,
        description: file.experiment.description,
        entries,
    })
}

fn snr_grid(field: &str, spec: &EntrySpec) -> Result<Vec<f64>, ConfigError> {
    if let Some(list) = &spec.snr_db {
        return Ok(list.clone());
    }
    match (spec.snr_start, spec.snr_stop, spec.snr_step) {
        (Some(a), Some(b), Some(s)) => {
            if !(s > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
                return Err(ConfigError::invalid(
                    format!("{field}.snr_step"),
                    format!("need snr_start <= snr_stop and snr_step > 0, got {a}, {b}, {s}"),
                ));
            }
            let n = ((b - a) / s + 1e-9).floor() as usize;
            Ok((0..=n).map(|i| a + s * i as f64).collect())
        }
        _ => Err(ConfigError::invalid(
            format!("{field}.snr_db"),
            "give snr_db or all of snr_start, snr_stop, snr_step",
        )),
    }
}

fn parse_pair(text: &str) -> Option<AntennaPair> {
    let (t, r) = text.trim().split_once('-')?;
    let tx: usize = t.trim().strip_prefix(['T', 't'])?.parse().ok()?;
    let rx: usize = r.trim().strip_prefix(['R', 'r'])?.parse().ok()?;
    (tx >= 1 && rx >= 1).then(|| AntennaPair::new(tx - 1, rx - 1))
}

fn fading(field: String, k: Option<f64>) -> Result<FadingSpec, ConfigError> {
    FadingSpec::from_k_db(k.unwrap_or(f64::NEG_INFINITY)).map_err(|e| ConfigError::invalid(field, e))
}

fn pick<T: Copy>(field: String, value: Option<&str>, default: T, options: &[(&str, T)]) -> Result<T, ConfigError> {
    let Some(v) = value else { return Ok(default) };
    options.iter().find(|(n, _)| *n == v).map(|(_, t)| *t).ok_or_else(|| {
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        ConfigError::invalid(field, format!("`{v}` is not one of {}", names.join(", ")))
    })
}

fn to_scheme_config(name: &str, spec: &EntrySpec, geom: &GeometrySection, seed: u64) -> Result<SchemeConfig, ConfigError> {
    let f = |k: &str| format!("entry.{name}.{k}");
    let scheme: SchemeKind = spec
        .scheme
        .as_deref()
        .ok_or_else(|| ConfigError::invalid(f("scheme"), "missing"))?
        .parse()
        .map_err(|e| ConfigError::invalid(f("scheme"), e))?;
    let mut c = SchemeConfig::new(scheme);
    let g = &mut c.geometry;
    g.r_s = geom.r_s.unwrap_or(g.r_s);
    g.r_d = geom.r_d.unwrap_or(g.r_d);
    g.direct = geom.direct.unwrap_or(g.direct);
    g.frequency_hz = geom.frequency_hz.unwrap_or(g.frequency_hz);
    c.geometry = Geometry::new(g.r_s, g.r_d, g.direct, g.frequency_hz)
        .map_err(|e| ConfigError::invalid("geometry", e))?;

    c.n_tx = spec.n_tx.unwrap_or(c.n_tx);
    c.n_rx = spec.n_rx.unwrap_or(c.n_rx);
    c.n_elements = spec.n_elements.unwrap_or(c.n_elements);
    c.modulation = pick(
        f("modulation"),
        spec.modulation.as_deref(),
        ModulationKind::Psk,
        &[("psk", ModulationKind::Psk), ("qam", ModulationKind::Qam)],
    )?;
    c.order = spec.order.unwrap_or(c.order);
    c.detector = pick(
        f("detector"),
        spec.detector.as_deref(),
        IndexDetector::Optimal,
        &[("optimal", IndexDetector::Optimal), ("suboptimal", IndexDetector::Suboptimal)],
    )?;
    c.quant_bits = spec.quant_bits;
    c.power = pick(
        f("power"),
        spec.power.as_deref(),
        PowerSplit::Split,
        &[("split", PowerSplit::Split), ("full", PowerSplit::Full)],
    )?;
    let k = spec.k_factor_db;
    c.fading_h1 = fading(f("k_h1_db"), spec.k_h1_db.or(k))?;
    c.fading_g1 = fading(f("k_g1_db"), spec.k_g1_db.or(k))?;
    c.los = match spec.los.as_deref() {
        None | Some("all_ones") => LosPattern::AllOnes,
        Some("random_fixed") => LosPattern::RandomFixed {
            seed: spec.los_seed.unwrap_or(0),
        },
        Some(other) => {
            return Err(ConfigError::invalid(
                f("los"),
                format!("`{other}` is not one of all_ones, random_fixed"),
            ))
        }
    };
    if scheme == SchemeKind::RisImVblast {
        c.mode = Some(match spec.mode.as_deref().unwrap_or("full_im") {
            "full_im" => ImMode::FullIm,
            "partial_im" => ImMode::PartialIm,
            "enhancing" => {
                let text = spec.pair.as_deref().unwrap_or("T1-R1");
                let pair = parse_pair(text)
                    .ok_or_else(|| ConfigError::invalid(f("pair"), format!("expected `T<l>-R<m>`, got `{text}`")))?;
                ImMode::Enhancing { pair }
            }
            other => {
                return Err(ConfigError::invalid(
                    f("mode"),
                    format!("`{other}` is not one of full_im, partial_im, enhancing"),
                ))
            }
        });
    } else if spec.mode.is_some() {
        return Err(ConfigError::invalid(f("mode"), format!("{scheme} has no RIS mode")));
    }
    c.snr_grid_db = snr_grid(&format!("entry.{name}"), spec)?;
    let d = StopRule::default();
    c.stop = StopRule {
        min_bit_errors: spec.min_bit_errors.unwrap_or(d.min_bit_errors),
        max_trials: spec.max_trials.unwrap_or(d.max_trials),
    };
    c.seed = spec.seed.unwrap_or(seed);
    c.validate().map_err(|e| match e {
        rismimo::Error::InvalidConfig { field, reason } => ConfigError::invalid(f(&field), reason),
        other => ConfigError::invalid(format!("entry.{name}"), other),
    })?;
    Ok(c)
}
