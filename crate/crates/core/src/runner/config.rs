use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::benchmarking::RbConfig;
use crate::experiments::DecayKind;
use crate::noise::{load_noise_preset, ConfusionMatrix, NoiseModel, PRESET_LABELS};
use crate::{Error, Result};

pub const CONFIG_SCHEMA: &str = "spinq-config/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Rb,
    Icrb,
    Tomography,
    Spam,
    Coherence,
    Calibrate,
    Report,
}

impl ExperimentKind {
    pub fn label(self) -> &'static str {
        match self {
            ExperimentKind::Rb => "rb",
            ExperimentKind::Icrb => "icrb",
            ExperimentKind::Tomography => "tomography",
            ExperimentKind::Spam => "spam",
            ExperimentKind::Coherence => "coherence",
            ExperimentKind::Calibrate => "calibrate",
            ExperimentKind::Report => "report",
        }
    }
}

/// Noise preset plus targeted overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSection {
    pub preset: String,
    /// Drop every gate and relaxation channel but keep the readout.
    pub ideal_gates: bool,
    /// Replace the readout confusion with the identity.
    pub ideal_readout: bool,
    /// Explicit 4x4 confusion matrix, rows indexed by the prepared state.
    pub confusion: Option<Vec<Vec<f64>>>,
    pub parity_flip: Option<f64>,
    /// Relative X-pulse amplitude error per qubit.
    pub overrotation: Option<[f64; 2]>,
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self {
            preset: "ideal".into(),
            ideal_gates: false,
            ideal_readout: false,
            confusion: None,
            parity_flip: None,
            overrotation: None,
        }
    }
}

impl NoiseSection {
    pub fn build(&self) -> Result<NoiseModel> {
        let preset = load_noise_preset(&self.preset)?;
        let mut nm = if self.ideal_gates {
            NoiseModel::ideal(2)
                .with_gate_times(preset.gate_times().clone())?
                .with_readout(preset.readout().clone())?
                .with_label(format!("{} (readout only)", preset.label()))
        } else {
            preset
        };
        if self.ideal_readout {
            nm = nm.without_readout();
        }
        if let Some(rows) = &self.confusion {
            nm = nm.with_readout(ConfusionMatrix::from_rows(rows.clone())?)?;
        }
        if let Some(q) = self.parity_flip {
            nm = nm.with_parity_flip(q)?;
        }
        if let Some(eps) = self.overrotation {
            nm = nm.with_overrotation(0, eps[0])?.with_overrotation(1, eps[1])?;
        }
        Ok(nm)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TomographySection {
    pub shots: Option<u64>,
    /// Mitigate with a confusion matrix measured by prepare-and-measure
    /// instead of the model's own readout.
    pub estimate_confusion: bool,
    pub confusion_shots: Option<u64>,
}

impl Default for TomographySection {
    fn default() -> Self {
        Self { shots: Some(10_000), estimate_confusion: false, confusion_shots: Some(10_000) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpamSection {
    pub shots: Option<u64>,
}

impl Default for SpamSection {
    fn default() -> Self {
        Self { shots: Some(10_000) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoherenceSection {
    pub kinds: Vec<DecayKind>,
    pub points: usize,
    /// Grid end as a multiple of the model's decay time.
    pub span: f64,
    /// Explicit grid end in seconds, used when the model does not decay.
    pub t_max_s: Option<f64>,
    pub shots: Option<u64>,
    pub t1_shots: Option<u64>,
    pub detuning_hz: Option<f64>,
}

impl Default for CoherenceSection {
    fn default() -> Self {
        Self {
            kinds: vec![DecayKind::Ramsey, DecayKind::Echo, DecayKind::T1],
            points: 121,
            span: 3.0,
            t_max_s: None,
            shots: Some(10_000),
            t1_shots: Some(200),
            detuning_hz: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrateSection {
    /// Phase errors of the CZ under calibration on (Q0, Q1), in units of pi.
    pub cz_phases_pi: [f64; 2],
    pub points: usize,
    pub shots: Option<u64>,
    /// Half-width of the chevron detuning axis.
    pub chevron_detuning_hz: f64,
    pub chevron_points: usize,
}

impl Default for CalibrateSection {
    fn default() -> Self {
        Self { cz_phases_pi: [0.0, 0.0], points: 24, shots: Some(1000), chevron_detuning_hz: 10e6, chevron_points: 41 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportSection {
    /// Run directories to summarize, relative to the config file.
    pub runs: Vec<PathBuf>,
}

impl Default for ReportSection {
    fn default() -> Self {
        Self { runs: Vec::new() }
    }
}

/// A complete run description. Every table rejects unknown keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    /// Overrides the shot count of every section when present.
    #[serde(default)]
    pub shots: Option<u64>,
    /// Exact probabilities instead of sampling wherever supported.
    #[serde(default)]
    pub analytic: bool,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "default_qubits")]
    pub qubits: Vec<usize>,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub rb: RbConfig,
    #[serde(default)]
    pub tomography: TomographySection,
    #[serde(default)]
    pub spam: SpamSection,
    #[serde(default)]
    pub coherence: CoherenceSection,
    #[serde(default)]
    pub calibrate: CalibrateSection,
    #[serde(default)]
    pub report: ReportSection,
}

fn default_qubits() -> Vec<usize> {
    vec![0, 1]
}

/// Command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub analytic: bool,
}

impl RunConfig {
    /// A config for `experiment` with every section at its default.
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            schema: CONFIG_SCHEMA.into(),
            experiment,
            seed: 0,
            shots: None,
            analytic: false,
            out: None,
            qubits: default_qubits(),
            noise: NoiseSection::default(),
            rb: RbConfig::default(),
            tomography: TomographySection::default(),
            spam: SpamSection::default(),
            coherence: CoherenceSection::default(),
            calibrate: CalibrateSection::default(),
            report: ReportSection::default(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string() + &location(text, &e)))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads and validates a config file. Relative report paths are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for run in &mut cfg.report.runs {
            if run.is_relative() {
                *run = base.join(&*run);
            }
        }
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(p) = &o.preset {
            self.noise.preset = p.clone();
        }
        if let Some(out) = &o.out {
            self.out = Some(out.clone());
        }
        self.analytic |= o.analytic;
        self.validate()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, why: &str| Err(Error::Config(format!("`{key}`: {why}")));
        if self.schema != CONFIG_SCHEMA {
            return bad("schema", &format!("expected \"{CONFIG_SCHEMA}\", got \"{}\"", self.schema));
        }
        if !PRESET_LABELS.contains(&self.noise.preset.as_str()) {
            return bad("noise.preset", &format!("unknown preset \"{}\" (known: {PRESET_LABELS:?})", self.noise.preset));
        }
        if self.shots == Some(0) {
            return bad("shots", "must be positive");
        }
        if self.qubits.is_empty() || self.qubits.iter().any(|q| *q > 1) {
            return bad("qubits", "must list qubits 0 and/or 1");
        }
        if self.rb.seed != 0 && self.rb.seed != self.seed {
            return bad("rb.seed", "conflicts with the top-level seed; set only `seed`");
        }
        self.rb.validate().or_else(|e| bad("rb", &e.to_string()))?;
        if let Some(q) = self.noise.parity_flip {
            if !(0.0..=0.5).contains(&q) {
                return bad("noise.parity_flip", "must lie in [0, 0.5]");
            }
        }
        if let Some(rows) = &self.noise.confusion {
            if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
                return bad("noise.confusion", "must be a 4x4 matrix");
            }
        }
        for (key, s) in [
            ("tomography.shots", self.tomography.shots),
            ("tomography.confusion_shots", self.tomography.confusion_shots),
            ("spam.shots", self.spam.shots),
            ("coherence.shots", self.coherence.shots),
            ("coherence.t1_shots", self.coherence.t1_shots),
            ("calibrate.shots", self.calibrate.shots),
        ] {
            if s == Some(0) {
                return bad(key, "must be positive");
            }
        }
        if self.coherence.points < 6 {
            return bad("coherence.points", "at least six delays are needed for a fit");
        }
        if !(self.coherence.span > 0.0) {
            return bad("coherence.span", "must be positive");
        }
        if self.coherence.t_max_s.is_some_and(|t| !(t > 0.0)) {
            return bad("coherence.t_max_s", "must be positive");
        }
        if self.calibrate.points < 3 {
            return bad("calibrate.points", "at least three phases are needed");
        }
        if self.calibrate.chevron_points < 2 || !(self.calibrate.chevron_detuning_hz > 0.0) {
            return bad("calibrate.chevron_points", "need at least two points over a positive detuning span");
        }
        if self.experiment == ExperimentKind::Report && self.report.runs.is_empty() {
            return bad("report.runs", "list at least one run directory");
        }
        Ok(())
    }

    /// Effective shot count for a section: `None` in analytic mode, the
    /// top-level value when given, otherwise the section's own.
    pub fn shots_for(&self, section: Option<u64>) -> Option<u64> {
        if self.analytic {
            None
        } else {
            self.shots.or(section)
        }
    }

    pub fn rb_config(&self) -> RbConfig {
        RbConfig { seed: self.seed, shots: self.shots_for(self.rb.shots), ..self.rb.clone() }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("runs").join(self.experiment.label()))
    }
}

fn location(text: &str, e: &toml::de::Error) -> String {
    match e.span() {
        Some(span) => {
            let line = text[..span.start.min(text.len())].matches('\n').count() + 1;
            format!(" (line {line})")
        }
        None => String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_named() {
        let err = RunConfig::from_toml("schema = \"spinq-config/1\"\nexperiment = \"rb\"\nsede = 3\n").unwrap_err();
        assert!(err.to_string().contains("sede"), "{err}");
        let err = RunConfig::from_toml("schema = \"spinq-config/1\"\nexperiment = \"rb\"\n[rb]\ndepth = [1]\n")
            .unwrap_err();
        assert!(err.to_string().contains("depth"), "{err}");
    }

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::new(ExperimentKind::Icrb);
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_toml(&text).unwrap(), cfg);
    }

    #[test]
    fn preset_is_checked() {
        let err = RunConfig::from_toml("schema = \"spinq-config/1\"\nexperiment = \"rb\"\n[noise]\npreset = \"4K\"\n")
            .unwrap_err();
        assert!(err.to_string().contains("noise.preset"));
    }
}
