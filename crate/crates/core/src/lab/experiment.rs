//! Experiment configuration and dispatch to the estimators.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::examples::{build_example, ExampleName, ExampleSpec};
use crate::error::{Error, Result};
use crate::flow::{
    bowen_cover_estimate, covering_entropy_estimate, critical_exponent_estimate, f_entropy_estimate,
    geodesic_covering_entropy_estimate, limit_schedule, BiWord, BowenConfig, BowenStrategy, EntropyReport,
    GeodesicPath, WeightFunction, WindowCondition,
};
use crate::hyperbolic::{
    check_line_convexity, estimate_delta_with, minkowski_dimension_estimate, uniform_grid, BoundaryPoint, BoundarySet,
    CylinderSet, DeltaConfig,
};
use crate::space::cover::DEFAULT_VERTEX_BUDGET;
use crate::space::{Cover, CoverPatch, Length, SideId, SpaceDescription};
use crate::symbolic::{geodesic_shift, local_geodesic_shift, quotient_coding, sft_entropy, SymbolPartition};

/// Default decay of `f(s) = e^{−a|s|}`.
pub const DEFAULT_DECAY: f64 = 2.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantity {
    Hcrit,
    Sft,
    Bowen,
    Delta,
    Md,
    Hcov,
    Hgeod,
    Ferg,
    Schedule,
    Convexity,
}

pub const QUANTITIES: &[Quantity] = &[
    Quantity::Hcrit,
    Quantity::Sft,
    Quantity::Bowen,
    Quantity::Delta,
    Quantity::Md,
    Quantity::Hcov,
    Quantity::Hgeod,
    Quantity::Ferg,
    Quantity::Schedule,
    Quantity::Convexity,
];

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Hcrit => "hcrit",
            Quantity::Sft => "sft",
            Quantity::Bowen => "bowen",
            Quantity::Delta => "delta",
            Quantity::Md => "md",
            Quantity::Hcov => "hcov",
            Quantity::Hgeod => "hgeod",
            Quantity::Ferg => "ferg",
            Quantity::Schedule => "schedule",
            Quantity::Convexity => "convexity",
        }
    }

    fn needs_group(self) -> bool {
        matches!(self, Quantity::Hcrit | Quantity::Bowen | Quantity::Md | Quantity::Ferg)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QUANTITIES
            .iter()
            .copied()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown quantity {s}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Config(format!("unknown format {s}"))),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Example name (see `list_examples`) or path to a space description JSON file.
    pub space: String,
    pub quantity: Option<Quantity>,
    /// Explicit horizons; `horizon` alone means `1..=horizon`.
    #[serde(default)]
    pub horizons: Option<Vec<usize>>,
    #[serde(default)]
    pub horizon: Option<usize>,
    /// Covering radius, as an integer, fraction `p/q` or decimal.
    #[serde(default)]
    pub r: Option<String>,
    /// Decay `a` of the weight `e^{−a|s|}`.
    #[serde(default)]
    pub a: Option<f64>,
    /// Anchor radius `R` (region radius for `delta`).
    #[serde(default, rename = "R")]
    pub anchor_radius: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Vertex budget for patches; quadruple budget for `delta`.
    #[serde(default)]
    pub budget: Option<u64>,
    /// Boundary cylinders by side labels; absent means the full boundary.
    #[serde(default)]
    pub cylinders: Option<Vec<String>>,
    /// Boundary points as `head|period` side words.
    #[serde(default)]
    pub points: Option<Vec<String>>,
    /// Window `L` of the geodesic shift; absent means the local-geodesic shift.
    #[serde(default)]
    pub window: Option<usize>,
    /// Code the shift through the example's symbol partition.
    #[serde(default)]
    pub quotient: bool,
    #[serde(default)]
    pub strategy: Option<String>,
    /// Distance to the orbit for `schedule`.
    #[serde(default)]
    pub tau: Option<String>,
    /// Grid spacing for the schedule's `Λ_τ` check; defaults to `tau`.
    #[serde(default)]
    pub grid: Option<String>,
    #[serde(default)]
    pub window_condition: Option<WindowCondition>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

/// Parses `3`, `1/3` or `0.25` into an exact length.
pub fn parse_length(text: &str) -> Result<Length> {
    let t = text.trim();
    let bad = || Error::Config(format!("not a number: {text:?}"));
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 12 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let whole: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let scale = 10i64.pow(digits);
        let num = whole.abs() * scale + frac;
        return Ok(Length::new(if neg { -num } else { num }, scale));
    }
    t.parse::<Length>().map_err(|_| bad())
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn quantity(&self) -> Result<Quantity> {
        self.quantity.ok_or_else(|| Error::Config("missing quantity".into()))
    }

    pub fn horizon_list(&self) -> Result<Vec<usize>> {
        match (&self.horizons, self.horizon) {
            (Some(h), _) if !h.is_empty() => {
                let mut h = h.clone();
                h.sort_unstable();
                h.dedup();
                Ok(h)
            }
            (_, Some(t)) if t >= 1 => Ok((1..=t).collect()),
            _ => Err(Error::Config(format!("quantity {} needs horizons", self.quantity()?))),
        }
    }

    fn max_horizon(&self) -> Result<usize> {
        Ok(*self.horizon_list()?.last().expect("nonempty"))
    }

    pub fn radius(&self) -> Result<Length> {
        let r = self
            .r
            .as_deref()
            .ok_or_else(|| Error::Config(format!("quantity {} needs r", self.quantity().map(|q| q.name()).unwrap_or("?"))))?;
        let r = parse_length(r)?;
        if r <= Length::zero() {
            return Err(Error::Config("r must be positive".into()));
        }
        Ok(r)
    }

    pub fn weight(&self) -> Result<WeightFunction> {
        WeightFunction::new(self.a.unwrap_or(DEFAULT_DECAY)).map_err(|e| Error::Config(e.to_string()))
    }

    fn anchor(&self) -> Result<usize> {
        self.anchor_radius
            .ok_or_else(|| Error::Config(format!("quantity {} needs R", self.quantity().map(|q| q.name()).unwrap_or("?"))))
    }

    fn vertex_budget(&self) -> usize {
        self.budget.map_or(DEFAULT_VERTEX_BUDGET, |b| b as usize)
    }

    /// Checks that every parameter the quantity needs is present and well formed.
    pub fn validate(&self) -> Result<()> {
        let q = self.quantity()?;
        match q {
            Quantity::Hcrit | Quantity::Md | Quantity::Convexity => {
                self.horizon_list()?;
            }
            Quantity::Sft => {}
            Quantity::Bowen | Quantity::Hcov | Quantity::Hgeod => {
                self.horizon_list()?;
                self.radius()?;
                self.weight()?;
            }
            Quantity::Ferg => {
                self.horizon_list()?;
                self.radius()?;
                self.weight()?;
                self.anchor()?;
            }
            Quantity::Delta => {
                self.anchor()?;
            }
            Quantity::Schedule => {
                self.max_horizon()?;
                let tau = self.tau.as_deref().ok_or_else(|| Error::Config("schedule needs tau".into()))?;
                parse_length(tau)?;
                if self.points.as_ref().is_none_or(|p| p.len() != 1) {
                    return Err(Error::Config("schedule needs exactly one boundary point".into()));
                }
            }
        }
        if q == Quantity::Md && self.horizon_list()?.len() < 2 {
            return Err(Error::Config("md needs at least two depths".into()));
        }
        if let Some(s) = &self.strategy {
            s.parse::<BowenStrategy>().map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.cylinders.is_some() && self.points.is_some() && q != Quantity::Schedule {
            return Err(Error::Config("give cylinders or points, not both".into()));
        }
        Ok(())
    }
}

/// A space resolved from an example name or a description file.
pub fn load_space(space: &str) -> Result<ExampleSpec> {
    match space.parse::<ExampleName>() {
        Ok(name) => build_example(&name),
        Err(Error::UnknownExample(_)) if Path::new(space).exists() => {
            let text = std::fs::read_to_string(space).map_err(|e| Error::Io(format!("{space}: {e}")))?;
            let description: SpaceDescription =
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{space}: {e}")))?;
            let cover = Cover::from_description(&description)?;
            Ok(ExampleSpec {
                name: ExampleName::Tree(2),
                description,
                cover,
                partition: None,
                has_group: true,
                expected: Vec::new(),
            })
        }
        Err(Error::UnknownExample(_)) => Err(Error::Config(format!("{space} is neither an example nor a file"))),
        Err(e) => Err(Error::Config(e.to_string())),
    }
}

/// Non-report results, kept as sorted JSON.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bundle {
    pub quantity: String,
    pub values: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Outcome {
    Report(EntropyReport),
    Bundle(Bundle),
}

impl Outcome {
    pub fn quantity(&self) -> &str {
        match self {
            Outcome::Report(r) => &r.quantity,
            Outcome::Bundle(b) => &b.quantity,
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("serializable")
}

fn boundary_set(cover: &Cover, config: &ExperimentConfig) -> Result<BoundarySet> {
    if let Some(c) = &config.cylinders {
        let labels: Vec<&str> = c.iter().map(String::as_str).collect();
        return Ok(BoundarySet::Cylinders(CylinderSet::parse(cover, &labels)?));
    }
    if let Some(p) = &config.points {
        return Ok(BoundarySet::Points(p.iter().map(|s| parse_point(cover, s)).collect::<Result<_>>()?));
    }
    Ok(BoundarySet::Full)
}

/// `head|period`, or `head` alone for a windowed point.
pub fn parse_point(cover: &Cover, text: &str) -> Result<BoundaryPoint> {
    match text.split_once('|') {
        Some((head, period)) => BoundaryPoint::parse(cover, head, period),
        None => BoundaryPoint::windowed(cover, cover.base().parse_sides(text)?),
    }
}

fn expand(cover: &Cover, radius: usize, config: &ExperimentConfig) -> Result<CoverPatch> {
    cover.expand_with_budget(Length::from_integer(radius as i64), config.vertex_budget())
}

/// The shift of local geodesics (or the geodesic shift with window `L`), optionally coded
/// through the example's partition.
fn shift_for(ex: &ExampleSpec, config: &ExperimentConfig) -> Result<crate::symbolic::ShiftSpace> {
    let shift = match config.window {
        Some(l) => geodesic_shift(&expand(&ex.cover, l + 1, config)?, l)?,
        None => local_geodesic_shift(ex.cover.base())?,
    };
    if !config.quotient {
        return Ok(shift);
    }
    let classes = ex
        .partition
        .as_ref()
        .ok_or_else(|| Error::Config(format!("{} ships no symbol partition", config.space)))?;
    quotient_coding(&shift, &SymbolPartition::from_labels(shift.alphabet(), classes)?)
}

/// A line along the first loop, and either a parallel twin through one edge or a deck translate.
pub fn default_line_pair(cover: &Cover) -> Result<(GeodesicPath, GeodesicPath)> {
    let base = cover.base();
    let s0 = SideId::forward(0);
    if base.tail(s0) != base.head(s0) || base.tail(s0) != cover.basepoint_base() {
        return Err(Error::Config("convexity needs a loop at the basepoint".into()));
    }
    let line = GeodesicPath::periodic(cover, cover.basepoint(), vec![s0])?;
    let v0 = cover.voltages().get(s0);
    let twin = (1..base.edge_count())
        .map(SideId::forward)
        .find(|&s| base.tail(s) == base.tail(s0) && base.head(s) == base.head(s0) && cover.voltages().get(s) == v0);
    if let Some(t) = twin {
        let word = BiWord::new(vec![s0], vec![t], vec![s0], 0);
        return Ok((line.clone(), GeodesicPath::new(cover, cover.basepoint(), word, Length::zero())?));
    }
    let g = (1..base.edge_count())
        .map(|e| cover.voltages().get(SideId::forward(e)).clone())
        .find(|g| !g.is_identity() && g != v0)
        .ok_or_else(|| Error::Config("no second generator to translate by".into()))?;
    let other = line.translate(cover, &g);
    Ok((line, other))
}

/// Runs one experiment. Deterministic for a fixed configuration.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Outcome> {
    config.validate()?;
    let q = config.quantity()?;
    let ex = load_space(&config.space)?;
    if q.needs_group() && !ex.has_group {
        return Err(Error::Config(format!("{q} needs a cocompact deck group; {} has none", config.space)));
    }
    let cover = &ex.cover;
    let outcome = match q {
        Quantity::Hcrit => Outcome::Report(critical_exponent_estimate(cover, &config.horizon_list()?)?),
        Quantity::Sft => {
            let shift = shift_for(&ex, config)?;
            let bracket = sft_entropy(&shift)?;
            let counts: Vec<String> = match config.horizon {
                Some(t) => (1..=t).map(|n| shift.word_count(n).to_string()).collect(),
                None => Vec::new(),
            };
            Outcome::Bundle(Bundle {
                quantity: "sft".into(),
                values: serde_json::json!({
                    "entropy": bracket.value(),
                    "bracket": to_json(&bracket),
                    "states": shift.state_count(),
                    "word_counts": counts,
                }),
            })
        }
        Quantity::Bowen => {
            let shift = local_geodesic_shift(cover.base())?;
            let patch = expand(cover, 4, config)?;
            let mut bc = BowenConfig::new(config.radius()?, config.weight()?, config.horizon_list()?);
            if let Some(s) = &config.strategy {
                bc.strategy = s.parse()?;
            }
            if let Some(b) = config.budget {
                bc.budget = b as usize;
            }
            let mut rep = bowen_cover_estimate(&patch, &shift, &bc)?;
            rep.config.seed = config.seed;
            Outcome::Report(rep)
        }
        Quantity::Delta => {
            let radius = config.anchor()?;
            let patch = expand(cover, 2 * radius, config)?;
            let mut dc = DeltaConfig::default();
            if let Some(s) = config.seed {
                dc.seed = s;
            }
            if let Some(b) = config.budget {
                dc.budget = b;
            }
            let rep = estimate_delta_with(&patch, Length::from_integer(radius as i64), &dc)?;
            Outcome::Bundle(Bundle { quantity: "delta".into(), values: to_json(&rep) })
        }
        Quantity::Md => {
            let h = config.horizon_list()?;
            let set = boundary_set(cover, config)?;
            Outcome::Report(minkowski_dimension_estimate(cover, &set, h[0], *h.last().unwrap())?)
        }
        Quantity::Hcov => {
            let patch = expand(cover, config.max_horizon()? + 1, config)?;
            Outcome::Report(covering_entropy_estimate(&patch, config.radius()?, &config.horizon_list()?)?)
        }
        Quantity::Hgeod => {
            let patch = expand(cover, config.max_horizon()? + 1, config)?;
            let set = boundary_set(cover, config)?;
            Outcome::Report(geodesic_covering_entropy_estimate(&patch, &set, config.radius()?, &config.horizon_list()?)?)
        }
        Quantity::Ferg => {
            let set = boundary_set(cover, config)?;
            let mut rep = f_entropy_estimate(
                cover,
                &set,
                config.anchor()?,
                config.radius()?,
                &config.weight()?,
                &config.horizon_list()?,
            )?;
            rep.quantity = "ferg".into();
            Outcome::Report(rep)
        }
        Quantity::Schedule => {
            let z = parse_point(cover, &config.points.as_ref().expect("validated")[0])?;
            let tau = parse_length(config.tau.as_deref().expect("validated"))?;
            let grid = config.grid.as_deref().map(parse_length).transpose()?;
            let horizon = Length::from_integer(config.max_horizon()? as i64);
            let s = limit_schedule(cover, &z, tau, horizon, grid, config.window_condition)?;
            Outcome::Bundle(Bundle { quantity: "schedule".into(), values: to_json(&s) })
        }
        Quantity::Convexity => {
            let h = config.max_horizon()? as i64;
            let patch = expand(cover, 2, config)?;
            let (a, b) = default_line_pair(cover)?;
            let grid = uniform_grid(Length::from_integer(-h), Length::from_integer(h), Length::new(1, 2))?;
            let rep = check_line_convexity(&patch, &a, &b, &grid)?;
            Outcome::Bundle(Bundle { quantity: "convexity".into(), values: to_json(&rep) })
        }
    };
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(space: &str, q: Quantity) -> ExperimentConfig {
        ExperimentConfig {
            space: space.into(),
            quantity: Some(q),
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn lengths_parse() {
        assert_eq!(parse_length("1/3").unwrap(), Length::new(1, 3));
        assert_eq!(parse_length("2").unwrap(), Length::from_integer(2));
        assert_eq!(parse_length("0.25").unwrap(), Length::new(1, 4));
        assert_eq!(parse_length("-1.5").unwrap(), Length::new(-3, 2));
        assert!(parse_length("x").is_err());
    }

    #[test]
    fn completeness_is_checked() {
        let c = config("tree:2", Quantity::Bowen);
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let c = ExperimentConfig { horizon: Some(3), ..config("tree:2", Quantity::Bowen) };
        assert!(matches!(c.validate(), Err(Error::Config(m)) if m.contains("needs r")));
        let c = ExperimentConfig { horizon: Some(3), r: Some("1/3".into()), ..config("tree:2", Quantity::Bowen) };
        assert!(c.validate().is_ok());
        assert!(config("tree:2", Quantity::Delta).validate().is_err());
        assert!(config("tree:2", Quantity::Sft).validate().is_ok());
        let c = ExperimentConfig { horizon: Some(1), ..config("tree:2", Quantity::Md) };
        assert!(c.validate().is_err());
    }

    #[test]
    fn runs_are_deterministic() {
        let c = ExperimentConfig { horizon: Some(12), ..config("tree:2", Quantity::Hcrit) };
        let a = run_experiment(&c).unwrap();
        assert_eq!(a, run_experiment(&c).unwrap());
        let Outcome::Report(rep) = a else { panic!("report expected") };
        assert!((rep.slope - 3f64.ln()).abs() < 0.01);
    }

    #[test]
    fn quotient_sft_is_zero() {
        let c = ExperimentConfig { quotient: true, ..config("rotation-t4", Quantity::Sft) };
        let Outcome::Bundle(b) = run_experiment(&c).unwrap() else { panic!() };
        assert_eq!(b.values["entropy"], 0.0);
        let c = config("tree:2", Quantity::Sft);
        assert!(matches!(
            run_experiment(&ExperimentConfig { quotient: true, ..c }),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn delta_of_small_tree() {
        let c = ExperimentConfig { anchor_radius: Some(2), ..config("tree:2", Quantity::Delta) };
        let Outcome::Bundle(b) = run_experiment(&c).unwrap() else { panic!() };
        assert_eq!(b.values["delta"], 0.0);
    }

    #[test]
    fn group_quantities_need_a_group() {
        let c = ExperimentConfig { horizon: Some(3), ..config("tufted-ray:linear:3", Quantity::Hcrit) };
        assert!(matches!(run_experiment(&c), Err(Error::Config(_))));
        assert!(matches!(run_experiment(&config("torus", Quantity::Sft)), Err(Error::Config(_))));
    }

    #[test]
    fn other_quantities_dispatch() {
        let schedule = ExperimentConfig {
            horizon: Some(6),
            tau: Some("0".into()),
            grid: Some("1".into()),
            points: Some(vec!["|a1a2".into()]),
            ..config("tree:2", Quantity::Schedule)
        };
        let Outcome::Bundle(b) = run_experiment(&schedule).unwrap() else { panic!() };
        assert_eq!(b.values["grid"]["passed"], true);
        let convexity = ExperimentConfig { horizon: Some(2), ..config("doubled:2", Quantity::Convexity) };
        let Outcome::Bundle(b) = run_experiment(&convexity).unwrap() else { panic!() };
        assert_eq!(b.values["convex_on_grid"], false);
        let ferg = ExperimentConfig {
            horizons: Some(vec![1, 2, 3]),
            r: Some("1/2".into()),
            anchor_radius: Some(0),
            ..config("tree:2", Quantity::Ferg)
        };
        let Outcome::Report(rep) = run_experiment(&ferg).unwrap() else { panic!() };
        assert_eq!(rep.quantity, "ferg");
        let md = ExperimentConfig { horizons: Some(vec![1, 4]), cylinders: Some(vec!["a1".into()]), ..config("tree:2", Quantity::Md) };
        assert!(matches!(run_experiment(&md).unwrap(), Outcome::Report(_)));
    }

    #[test]
    fn config_json_round_trip() {
        let text = r#"{"space": "tree:2", "quantity": "bowen", "horizons": [1, 2], "r": "1/3", "a": 1.0, "R": 0}"#;
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.anchor_radius, Some(0));
        assert!(c.validate().is_ok());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"space": "tree:2", "bogus": 1}"#).is_err());
    }
}
