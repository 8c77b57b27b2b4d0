use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use plueckerlab::bundle_pairs::PairDescription;
use plueckerlab::scalars::DEFAULT_PRIME;
use plueckerlab::{Error, Field};
use serde::Serialize;

/// One verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    TaylorCheck,
    ExpandCheck,
    MultiplicityBound,
    Theorem31,
    Lemma33,
    Prop32,
    Thm38,
    P1Divisor,
    P1Detmap,
    P1Lambda,
    P1NoForm,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::TaylorCheck,
        Command::ExpandCheck,
        Command::MultiplicityBound,
        Command::Theorem31,
        Command::Lemma33,
        Command::Prop32,
        Command::Thm38,
        Command::P1Divisor,
        Command::P1Detmap,
        Command::P1Lambda,
        Command::P1NoForm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::TaylorCheck => "taylor-check",
            Command::ExpandCheck => "expand-check",
            Command::MultiplicityBound => "multiplicity-bound",
            Command::Theorem31 => "theorem31",
            Command::Lemma33 => "lemma33",
            Command::Prop32 => "prop32",
            Command::Thm38 => "thm38",
            Command::P1Divisor => "p1-divisor",
            Command::P1Detmap => "p1-detmap",
            Command::P1Lambda => "p1-lambda",
            Command::P1NoForm => "p1-no-form",
        }
    }

    /// The statement the suite checks, echoed in the report header.
    pub fn statement(self) -> &'static str {
        match self {
            Command::TaylorCheck => "the Taylor coefficients of the form along a line are its polars",
            Command::ExpandCheck => "the shuffle expansion of the form agrees with the total wedge",
            Command::MultiplicityBound => "no point of the form's hypersurface has multiplicity m",
            Command::Theorem31 => "the Grassmannian is cut out by multiplicity and tangent codimension at the diagonal",
            Command::Lemma33 => "diagonal points of decomposable vectors attain the minimal tangent codimension",
            Command::Prop32 => "wedge multiplication by w has minimal rank exactly when w is decomposable",
            Command::Thm38 => "m subspaces lie in a hyperplane exactly when the form vanishes on them",
            Command::P1Divisor => "the determinant divisor of a pair on P^1 is r times the big diagonal",
            Command::P1Detmap => "the determinant map is onto and the classifying curve spans its image",
            Command::P1Lambda => "the dual determinant map restricts to the classifying map",
            Command::P1NoForm => "unbalanced pairs on P^1 have an identically degenerate evaluation map",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Malformed(format!("unknown command {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    #[default]
    Fp,
    Q,
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "fp" => Ok(FieldTag::Fp),
            "q" => Ok(FieldTag::Q),
            _ => Err(Error::Malformed(format!("unknown field {s:?}, expected fp or q"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Malformed(format!("unknown format {s:?}, expected json or csv"))),
        }
    }
}

/// Everything that determines a run. Unset `r`, `m` and `trials` select
/// each suite's default cases and sample counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub r: Option<usize>,
    pub m: Option<usize>,
    pub splitting: Option<Vec<i64>>,
    pub field: FieldTag,
    pub prime: u64,
    pub seed: u64,
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<PairDescription>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub verbose: bool,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            r: None,
            m: None,
            splitting: None,
            field: FieldTag::Fp,
            prime: DEFAULT_PRIME,
            seed: 0,
            trials: None,
            pair: None,
            out: None,
            format: Format::Json,
            verbose: false,
        }
    }

    pub fn with_shape(mut self, r: usize, m: usize) -> Self {
        self.r = Some(r);
        self.m = Some(m);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: usize) -> Self {
        self.trials = Some(trials);
        self
    }

    pub fn with_splitting(mut self, splitting: Vec<i64>) -> Self {
        self.splitting = Some(splitting);
        self
    }

    pub fn field(&self) -> Result<Field, Error> {
        match self.field {
            FieldTag::Fp => Field::prime(self.prime),
            FieldTag::Q => Ok(Field::Rational),
        }
    }

    /// Trial count, falling back to the suite default.
    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    /// The suite's default `(r, m)` cases, or the single case selected by
    /// `--r` / `--m` (missing values taken from the first default).
    pub fn shapes(&self, defaults: &[(usize, usize)]) -> Vec<(usize, usize)> {
        match (self.r, self.m) {
            (None, None) => defaults.to_vec(),
            (r, m) => vec![(r.unwrap_or(defaults[0].0), m.unwrap_or(defaults[0].1))],
        }
    }
}
