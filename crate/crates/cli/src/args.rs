use std::path::PathBuf;
use std::str::FromStr;

use cdmx_markov::estimation::{Transition, TABLE_HORIZONS, TABLE_TRANSITIONS};
use cdmx_markov::StateId;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cdmx-markov",
    version,
    about = "Markov chain analytics for Mexico City COVID-19 case progression"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the matrix is row-stochastic; exit 1 with one finding per violation.
    Validate,
    /// n-step probabilities of the ten tabulated transitions.
    Horizons,
    /// Fundamental matrix, absorption probabilities and expected steps to absorption.
    Absorb,
    /// Frequency estimate of the matrix from a crossed count table, with consistency findings.
    Estimate(EstimateArgs),
    /// Recover a one-step matrix from a horizon table.
    Fit(FitArgs),
    /// Monte Carlo cohort from one start state, compared with the analytic distribution.
    Simulate(SimulateArgs),
    /// Long-format n-step probabilities for plotting.
    Plotdata(PlotArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// `paper`, `file:PATH`, `mle[:PATH]` (estimate from counts) or `fit[:PATH]` (fit a horizon table).
    #[arg(long, global = true, default_value = "paper")]
    pub matrix: MatrixSource,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Comma list of days and inclusive ranges (`7,15,30`, `1-365`), or `table4`.
    #[arg(long, global = true, alias = "horizons")]
    pub days: Option<DayList>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of trajectories.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub n: u64,
    /// Exit 1 when any finding is reported.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Crossed count table (defaults to the bundled Mexico City table).
    pub counts: Option<PathBuf>,
    /// Delegation summary table used for the consistency checks.
    #[arg(long)]
    pub delegations: Option<PathBuf>,
    /// Venn region table used for the consistency checks.
    #[arg(long)]
    pub regions: Option<PathBuf>,
    /// Locality whose rows are checked against the count table.
    #[arg(long, default_value = "CDMX")]
    pub locality: String,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Horizon table CSV (`days,EF,HF,...`).
    pub table: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value = "S")]
    pub start: StateId,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    /// Comma list of transitions such as `ID,HS` (`F` and `D` are the same
    /// state), `table4`, `dead` or `recovered`.
    #[arg(long, default_value = "table4")]
    pub transitions: TransitionList,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixSource {
    Paper,
    File(PathBuf),
    /// `None` is the bundled count table.
    Mle(Option<PathBuf>),
    /// `None` is the bundled Table 4.
    Fit(Option<PathBuf>),
}

impl FromStr for MatrixSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let path = |rest: &str| (!rest.is_empty()).then(|| PathBuf::from(rest));
        match s.split_once(':') {
            None if s == "paper" => Ok(MatrixSource::Paper),
            None if s == "mle" => Ok(MatrixSource::Mle(None)),
            None if s == "fit" => Ok(MatrixSource::Fit(None)),
            Some(("file", rest)) if !rest.is_empty() => Ok(MatrixSource::File(rest.into())),
            Some(("mle", rest)) => Ok(MatrixSource::Mle(path(rest))),
            Some(("fit", rest)) => Ok(MatrixSource::Fit(path(rest))),
            _ => Err(format!("`{s}`: expected paper, file:PATH, mle[:PATH] or fit[:PATH]")),
        }
    }
}

impl std::fmt::Display for MatrixSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MatrixSource::Paper => f.write_str("paper"),
            MatrixSource::File(p) => write!(f, "file:{}", p.display()),
            MatrixSource::Mle(None) => f.write_str("mle"),
            MatrixSource::Mle(Some(p)) => write!(f, "mle:{}", p.display()),
            MatrixSource::Fit(None) => f.write_str("fit"),
            MatrixSource::Fit(Some(p)) => write!(f, "fit:{}", p.display()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DayList(pub Vec<u32>);

impl FromStr for DayList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "table4" {
            return Ok(DayList(TABLE_HORIZONS.to_vec()));
        }
        let day = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("`{t}`: {e}"));
        let mut days = Vec::new();
        for part in s.split(',') {
            match part.split_once('-') {
                Some((a, b)) => {
                    let (a, b) = (day(a)?, day(b)?);
                    if a > b {
                        return Err(format!("`{part}`: empty range"));
                    }
                    days.extend(a..=b);
                }
                None => days.push(day(part)?),
            }
        }
        Ok(DayList(days))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionList(pub Vec<Transition>);

impl FromStr for TransitionList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use StateId::*;
        let to = |to: StateId, from: &[StateId]| from.iter().map(|&from| Transition::new(from, to)).collect();
        match s {
            "table4" => return Ok(TransitionList(TABLE_TRANSITIONS.to_vec())),
            "dead" => return Ok(TransitionList(to(D, &[E, H, U, I]))),
            "recovered" => return Ok(TransitionList(to(S, &[H, U, I]))),
            _ => {}
        }
        s.split(',')
            .map(|code| {
                let mut chars = code.trim().chars();
                match (
                    chars.next().and_then(StateId::from_char),
                    chars.next().and_then(StateId::from_char),
                    chars.next(),
                ) {
                    (Some(from), Some(to), None) => Ok(Transition::new(from, to)),
                    _ => Err(format!("`{code}`: expected two state letters such as ID")),
                }
            })
            .collect::<Result<_, _>>()
            .map(TransitionList)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn day_lists() {
        assert_eq!("7,15".parse::<DayList>().unwrap().0, [7, 15]);
        assert_eq!("0-3,10".parse::<DayList>().unwrap().0, [0, 1, 2, 3, 10]);
        assert_eq!("table4".parse::<DayList>().unwrap().0, TABLE_HORIZONS);
        assert!("5-2".parse::<DayList>().is_err());
        assert!("x".parse::<DayList>().is_err());
        assert!("".parse::<DayList>().is_err());
    }

    #[test]
    fn matrix_sources() {
        assert_eq!("paper".parse::<MatrixSource>().unwrap(), MatrixSource::Paper);
        assert_eq!(
            "file:a.csv".parse::<MatrixSource>().unwrap(),
            MatrixSource::File("a.csv".into())
        );
        assert_eq!("mle".parse::<MatrixSource>().unwrap(), MatrixSource::Mle(None));
        assert_eq!("fit:t.csv".parse::<MatrixSource>().unwrap().to_string(), "fit:t.csv");
        assert!("file:".parse::<MatrixSource>().is_err());
        assert!("papers".parse::<MatrixSource>().is_err());
    }

    #[test]
    fn transition_lists() {
        let t = "IF,hs".parse::<TransitionList>().unwrap().0;
        assert_eq!(
            t,
            [
                Transition::new(StateId::I, StateId::D),
                Transition::new(StateId::H, StateId::S)
            ]
        );
        assert_eq!("dead".parse::<TransitionList>().unwrap().0.len(), 4);
        assert!("IDX".parse::<TransitionList>().is_err());
    }
}
