//! Run configuration: a TOML document describing the potential, the
//! command, numeric parameters and the output target.
//!
//! Schema sketch (see the project README for the full field list):
//!
//! ```toml
//! command = "bands"
//!
//! [potential]                 # periodic potential q = σ′ + τ
//! period = 1.0
//! delta_comb = { strength = 1.0, spacing = 1.0 }   # shorthand, or:
//! # [[potential.sigma]]
//! # kind = "sawtooth"
//! # amplitude = -1.0
//! # period = 1.0
//! # phase = 0.0
//!
//! [quasiperiodic]             # alternative: quasiperiodic potential
//! theta = 0.0
//! alpha = { liouville = { base = 10, terms = 4 } }
//! sigma2 = { kind = "fourier_mode", harmonic = 1, cos_coeff = 0.0, sin_coeff = 1.0, period = 1.0 }
//!
//! [params]
//! lambda_min = 0.0
//! lambda_max = 10.0
//! lambda_count = 200
//! tol = 1e-9
//!
//! [output]
//! path = "bands.csv"
//! format = "csv"
//! ```
//!
//! Unknown keys are rejected; invariant violations name the offending field.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gordon::liouville_truncation;
use crate::piece::PieceFunction;
use crate::potential::{QuasiperiodicPotential, SigmaTau};
use crate::report::ReportFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bands,
    Monodromy,
    ThreePeriods,
    Gordon,
    VerifyBounds,
    SobolevCheck,
    EigenScan,
    Decay,
    Norms,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bands => "bands",
            Command::Monodromy => "monodromy",
            Command::ThreePeriods => "three-periods",
            Command::Gordon => "gordon",
            Command::VerifyBounds => "verify-bounds",
            Command::SobolevCheck => "sobolev-check",
            Command::EigenScan => "eigen-scan",
            Command::Decay => "decay",
            Command::Norms => "norms",
        }
    }
}

impl std::str::FromStr for Command {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bands" => Ok(Command::Bands),
            "monodromy" => Ok(Command::Monodromy),
            "three-periods" => Ok(Command::ThreePeriods),
            "gordon" => Ok(Command::Gordon),
            "verify-bounds" => Ok(Command::VerifyBounds),
            "sobolev-check" => Ok(Command::SobolevCheck),
            "eigen-scan" => Ok(Command::EigenScan),
            "decay" => Ok(Command::Decay),
            "norms" => Ok(Command::Norms),
            other => Err(Error::Config(format!("unknown command '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct DeltaCombSpec {
    strength: f64,
    spacing: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialSpec {
    #[serde(default)]
    period: Option<f64>,
    #[serde(default)]
    delta_comb: Option<DeltaCombSpec>,
    #[serde(default)]
    sigma: Vec<PieceFunction>,
    #[serde(default)]
    tau: Vec<PieceFunction>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct LiouvilleSpec {
    base: u32,
    terms: u32,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct AlphaSpec {
    /// plain float, converted to its exact binary rational
    #[serde(default)]
    value: Option<f64>,
    /// exact numerator/denominator, decimal strings
    #[serde(default)]
    rational: Option<[String; 2]>,
    /// truncated Liouville series Σ base^(−k!)
    #[serde(default)]
    liouville: Option<LiouvilleSpec>,
}

impl AlphaSpec {
    fn build(&self) -> Result<BigRational> {
        let picks =
            self.value.is_some() as u8 + self.rational.is_some() as u8 + self.liouville.is_some() as u8;
        if picks != 1 {
            return Err(Error::Config(
                "alpha needs exactly one of value/rational/liouville".into(),
            ));
        }
        if let Some(v) = self.value {
            return BigRational::from_f64(v)
                .ok_or_else(|| Error::Config(format!("alpha value {v} is not finite")));
        }
        if let Some([n, d]) = &self.rational {
            let num: BigInt = n
                .parse()
                .map_err(|_| Error::Config(format!("alpha numerator '{n}' is not an integer")))?;
            let den: BigInt = d
                .parse()
                .map_err(|_| Error::Config(format!("alpha denominator '{d}' is not an integer")))?;
            if den == BigInt::from(0) {
                return Err(Error::Config("alpha denominator must be nonzero".into()));
            }
            return Ok(BigRational::new(num, den));
        }
        let spec = self.liouville.as_ref().unwrap();
        liouville_truncation(spec.base, spec.terms)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuasiSpec {
    alpha: AlphaSpec,
    #[serde(default)]
    theta: f64,
    #[serde(default)]
    sigma1: Option<PieceFunction>,
    #[serde(default)]
    sigma2: Option<PieceFunction>,
    #[serde(default)]
    tau1: Option<PieceFunction>,
    #[serde(default)]
    tau2: Option<PieceFunction>,
}

/// One band-limited mode of the sobolev-check test function.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    pub harmonic: u32,
    pub cos_coeff: f64,
    pub sin_coeff: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SobolevFunctionSpec {
    pub modes: Vec<ModeSpec>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    257
}

/// Numeric parameters; commands read the fields they need and reject
/// missing ones by name.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default)]
    pub lambda: Option<f64>,
    #[serde(default)]
    pub lambda_min: Option<f64>,
    #[serde(default)]
    pub lambda_max: Option<f64>,
    #[serde(default)]
    pub lambda_count: Option<usize>,
    #[serde(default)]
    pub lambda_grid: Option<Vec<f64>>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    #[serde(default = "default_angles")]
    pub angles: usize,
    #[serde(default)]
    pub u0: Option<[f64; 2]>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub t_list: Option<Vec<f64>>,
    #[serde(default)]
    pub interval: Option<[f64; 2]>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub dilate_a: Option<f64>,
    #[serde(default)]
    pub dilate_b: Option<f64>,
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub t_range: Option<f64>,
    #[serde(default)]
    pub s: Option<f64>,
}

fn default_tol() -> f64 {
    1e-9
}
fn default_m_max() -> usize {
    6
}
fn default_angles() -> usize {
    360
}
fn default_n_samples() -> usize {
    41
}

impl Default for Params {
    fn default() -> Self {
        toml::from_str("").expect("empty params")
    }
}

impl Params {
    /// The λ grid: explicit list, or min/max/count, or the single λ.
    pub fn lambda_grid(&self) -> Result<Vec<f64>> {
        if let Some(g) = &self.lambda_grid {
            if g.is_empty() {
                return Err(Error::Config("params.lambda_grid must be nonempty".into()));
            }
            return Ok(g.clone());
        }
        match (self.lambda_min, self.lambda_max, self.lambda_count) {
            (Some(lo), Some(hi), Some(n)) => {
                if !(lo < hi) || n < 2 {
                    return Err(Error::Config(
                        "params.lambda_min/lambda_max/lambda_count must describe a grid".into(),
                    ));
                }
                Ok((0..n)
                    .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
                    .collect())
            }
            (None, None, None) => match self.lambda {
                Some(l) => Ok(vec![l]),
                None => Err(Error::Config(
                    "missing λ grid: set params.lambda or lambda_min/lambda_max/lambda_count".into(),
                )),
            },
            _ => Err(Error::Config(
                "lambda_min, lambda_max and lambda_count must be given together".into(),
            )),
        }
    }

    pub fn require(&self, field: &str) -> Result<f64> {
        let v = match field {
            "lambda" => self.lambda,
            "gamma" => self.gamma,
            "t_max" => self.t_max,
            "eps" => self.eps,
            "dilate_a" => self.dilate_a,
            "dilate_b" => self.dilate_b,
            "alpha" => self.alpha,
            "beta" => self.beta,
            "t_range" => self.t_range,
            "s" => self.s,
            other => return Err(Error::Config(format!("unknown required field '{other}'"))),
        };
        v.ok_or_else(|| Error::Config(format!("missing required field params.{field}")))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct OutputSpec {
    #[serde(default)]
    path: Option<String>,
    #[serde(default)]
    format: Option<ReportFormat>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Command,
    #[serde(default)]
    potential: Option<PotentialSpec>,
    #[serde(default)]
    quasiperiodic: Option<QuasiSpec>,
    #[serde(default)]
    params: Option<Params>,
    #[serde(default)]
    sobolev_function: Option<SobolevFunctionSpec>,
    #[serde(default)]
    output: Option<OutputSpec>,
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub potential: Option<SigmaTau>,
    pub quasiperiodic: Option<QuasiperiodicPotential>,
    pub sobolev_function: Option<SobolevFunctionSpec>,
    pub params: Params,
    pub out_path: Option<String>,
    pub format: ReportFormat,
}

impl RunConfig {
    /// The periodic potential, converting a quasiperiodic one if needed.
    pub fn require_sigma_tau(&self) -> Result<SigmaTau> {
        if let Some(st) = &self.potential {
            return Ok(st.clone());
        }
        if let Some(qp) = &self.quasiperiodic {
            return qp.to_sigma_tau();
        }
        Err(Error::Config("this command needs a [potential] or [quasiperiodic] table".into()))
    }

    pub fn require_quasiperiodic(&self) -> Result<&QuasiperiodicPotential> {
        self.quasiperiodic
            .as_ref()
            .ok_or_else(|| Error::Config("this command needs a [quasiperiodic] table".into()))
    }
}

/// Parse and validate a TOML configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Config(format!("malformed config: {e}")))?;

    let potential = match &raw.potential {
        None => None,
        Some(spec) => {
            let mut sigma = spec.sigma.clone();
            let mut tau = spec.tau.clone();
            let mut period = spec.period;
            if let Some(comb) = &spec.delta_comb {
                let st = SigmaTau::delta_comb(comb.strength, comb.spacing)?;
                sigma.extend(st.sigma);
                tau.extend(st.tau);
                period = period.or(st.period);
            }
            Some(SigmaTau::new(sigma, tau, period)?)
        }
    };

    let quasiperiodic = match &raw.quasiperiodic {
        None => None,
        Some(spec) => Some(QuasiperiodicPotential::new(
            spec.sigma1.clone(),
            spec.sigma2.clone(),
            spec.tau1.clone(),
            spec.tau2.clone(),
            spec.alpha.build()?,
            spec.theta,
        )?),
    };

    let params = raw.params.unwrap_or_default();
    if !(params.tol > 0.0) {
        return Err(Error::Config("params.tol must be positive".into()));
    }
    if let Some(s) = params.s {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Config("params.s must lie in [0, 1]".into()));
        }
    }
    let (out_path, format) = match raw.output {
        None => (None, ReportFormat::Csv),
        Some(o) => (o.path, o.format.unwrap_or(ReportFormat::Csv)),
    };

    Ok(RunConfig {
        command: raw.command,
        potential,
        quasiperiodic,
        sobolev_function: raw.sobolev_function,
        params,
        out_path,
        format,
    })
}
