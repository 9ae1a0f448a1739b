//! Game spec documents: JSON files naming a constructor, its arguments and an optional
//! payoff override.

use std::collections::BTreeMap;
use std::path::Path;

use gamecat_core::game::{canonical_game, Canonical};
use gamecat_core::topo::{self, FinSpace, PointedFinSpace, Sampling, Selection, Set, Target};
use gamecat_core::{Game, Move, Player, RegularGame, Run};
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// The only schema version understood.
pub const VERSION: &str = "1";

/// Default chain length of Banach-Mazur spec documents.
pub const DEFAULT_STAB: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Canonical,
    Bm,
    Covering,
    Tightness,
    CustomRegular,
}

/// Payoff bits: `1` marks a run won by Alice, `0` a run won by Bob.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Bits {
    Text(String),
    List(Vec<u8>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub version: String,
    pub kind: Kind,
    #[serde(default)]
    pub params: Value,
    #[serde(default)]
    pub payoff: Option<Bits>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CanonicalParams {
    name: String,
}

/// A space given by name, by the text format, or by explicit point and open lists.
#[derive(Deserialize)]
#[serde(untagged)]
enum SpaceParam {
    Text(String),
    Explicit { points: Vec<String>, opens: Vec<Vec<String>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BmParams {
    space: SpaceParam,
    #[serde(default = "default_stab")]
    stab: usize,
}

#[derive(Deserialize, Clone, Copy)]
#[serde(rename_all = "kebab-case")]
enum TargetParam {
    Omega,
    Gamma,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CoveringParams {
    space: SpaceParam,
    #[serde(default = "default_target")]
    target: TargetParam,
    #[serde(default)]
    families: Option<Vec<Vec<String>>>,
    #[serde(default = "one")]
    prefix: usize,
    #[serde(default = "one")]
    period: usize,
    #[serde(default)]
    cap: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TightnessParams {
    space: SpaceParam,
    base: String,
    #[serde(default = "default_target")]
    target: TargetParam,
    #[serde(default)]
    sets: Option<Vec<String>>,
    #[serde(default = "one")]
    prefix: usize,
    #[serde(default = "one")]
    period: usize,
    #[serde(default)]
    cap: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunParam {
    #[serde(default)]
    prefix: Vec<String>,
    cycle: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CustomParams {
    runs: Vec<RunParam>,
}

fn default_stab() -> usize {
    DEFAULT_STAB
}

fn default_target() -> TargetParam {
    TargetParam::Omega
}

fn one() -> usize {
    1
}

/// Extra structure kept for the topological kinds.
#[derive(Debug, Clone)]
pub enum TopoInfo {
    Bm { space: FinSpace },
    Selection { spec: Selection },
}

/// A loaded spec document.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub name: String,
    pub game: Game,
    pub regular: Option<RegularGame>,
    pub topo: Option<TopoInfo>,
}

impl Loaded {
    /// The regular game, or an unsupported-fragment error naming the document.
    pub fn require_regular(&self) -> CliResult<&RegularGame> {
        self.regular
            .as_ref()
            .ok_or_else(|| CliError::Unsupported(format!("{}: the game has no finite run basis", self.name)))
    }

    /// A loaded canonical game under its own name.
    pub fn canonical(which: Canonical, name: &str) -> Loaded {
        let game = canonical_game(which);
        let regular = game.regular().cloned();
        Loaded { name: name.into(), game, regular, topo: None }
    }

    pub fn from_regular(name: &str, g: RegularGame, topo: Option<TopoInfo>) -> Loaded {
        Loaded { name: name.into(), game: g.game(), regular: Some(g), topo }
    }
}

/// Reads and builds a spec document from a file.
pub fn load(path: &Path) -> CliResult<Loaded> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(&shown, e))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| shown.clone());
    parse(&shown, &name, &text)
}

/// Builds a spec document from its text. `location` prefixes every error.
pub fn parse(location: &str, name: &str, text: &str) -> CliResult<Loaded> {
    let doc: SpecDocument = serde_json::from_str(text)
        .map_err(|e| CliError::input(format!("{location}:{}:{}", e.line(), e.column()), e.to_string()))?;
    build(location, name, doc)
}

fn params<T: for<'de> Deserialize<'de>>(location: &str, v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| CliError::input(format!("{location}: params"), e.to_string()))
}

fn game_err(location: &str, field: &str) -> impl Fn(gamecat_core::GameError) -> CliError {
    let at = format!("{location}: {field}");
    move |e| CliError::from_game(at.clone(), e)
}

/// Builds a spec document that has already been parsed.
pub fn build(location: &str, name: &str, doc: SpecDocument) -> CliResult<Loaded> {
    if doc.version != VERSION {
        return Err(CliError::input(
            format!("{location}: version"),
            format!("unsupported version `{}`; expected `{VERSION}`", doc.version),
        ));
    }
    let mut loaded = match doc.kind {
        Kind::Canonical => {
            let p: CanonicalParams = params(location, doc.params)?;
            let which: Canonical = p.name.parse().map_err(game_err(location, "params.name"))?;
            Loaded::canonical(which, name)
        }
        Kind::Bm => {
            let p: BmParams = params(location, doc.params)?;
            let space = space(location, p.space)?;
            let g = topo::bm_game(&space, p.stab).map_err(game_err(location, "params.stab"))?;
            Loaded::from_regular(name, g, Some(TopoInfo::Bm { space }))
        }
        Kind::Covering => {
            let p: CoveringParams = params(location, doc.params)?;
            let space = space(location, p.space)?;
            let families = match p.families {
                None => None,
                Some(fams) => Some(
                    fams.iter()
                        .enumerate()
                        .map(|(i, fam)| {
                            fam.iter()
                                .enumerate()
                                .map(|(j, s)| set(location, &format!("params.families[{i}][{j}]"), &space, s))
                                .collect::<CliResult<Vec<Set>>>()
                        })
                        .collect::<CliResult<Vec<_>>>()?,
                ),
            };
            let spec = Selection::Covering { space, target: target(p.target), families };
            let sample = sampling(p.prefix, p.period, p.cap);
            let g = topo::selection_game(&spec, sample).map_err(game_err(location, "params"))?;
            Loaded::from_regular(name, g, Some(TopoInfo::Selection { spec }))
        }
        Kind::Tightness => {
            let p: TightnessParams = params(location, doc.params)?;
            let space = space(location, p.space)?;
            let base = space.index_of(&p.base).ok_or_else(|| {
                CliError::input(format!("{location}: params.base"), format!("unknown point `{}`", p.base))
            })?;
            let sets = match p.sets {
                None => None,
                Some(sets) => Some(
                    sets.iter()
                        .enumerate()
                        .map(|(i, s)| set(location, &format!("params.sets[{i}]"), &space, s))
                        .collect::<CliResult<Vec<Set>>>()?,
                ),
            };
            let pointed = PointedFinSpace::new(space, base).map_err(game_err(location, "params.base"))?;
            let spec = Selection::Tightness { space: pointed, target: target(p.target), sets };
            let sample = sampling(p.prefix, p.period, p.cap);
            let g = topo::selection_game(&spec, sample).map_err(game_err(location, "params"))?;
            Loaded::from_regular(name, g, Some(TopoInfo::Selection { spec }))
        }
        Kind::CustomRegular => {
            let p: CustomParams = params(location, doc.params)?;
            let bits = match &doc.payoff {
                Some(b) => bits(location, b)?,
                None => {
                    return Err(CliError::input(format!("{location}: payoff"), "custom-regular games need payoff bits"))
                }
            };
            if bits.len() != p.runs.len() {
                return Err(CliError::input(
                    format!("{location}: payoff"),
                    format!("{} bits for {} declared runs", bits.len(), p.runs.len()),
                ));
            }
            let mut runs = BTreeMap::new();
            for (i, (r, alice)) in p.runs.iter().zip(&bits).enumerate() {
                if r.cycle.is_empty() {
                    return Err(CliError::input(format!("{location}: params.runs[{i}].cycle"), "the cycle is empty"));
                }
                let run = Run::new(moves(&r.prefix), moves(&r.cycle));
                let winner = if *alice { Player::Alice } else { Player::Bob };
                if runs.insert(run.clone(), winner).is_some() {
                    return Err(CliError::input(
                        format!("{location}: params.runs[{i}]"),
                        format!("run {run} is declared twice"),
                    ));
                }
            }
            let g = RegularGame::new(runs).map_err(game_err(location, "params.runs"))?;
            return Ok(Loaded::from_regular(name, g, None));
        }
    };
    if let Some(b) = &doc.payoff {
        let bits = bits(location, b)?;
        let g = loaded.regular.as_ref().ok_or_else(|| {
            CliError::Unsupported(format!("{location}: payoff: the game has no finite run basis to repaint"))
        })?;
        if bits.len() != g.len() {
            return Err(CliError::input(
                format!("{location}: payoff"),
                format!("{} bits for {} basis runs", bits.len(), g.len()),
            ));
        }
        let winners: BTreeMap<Run, Player> = g
            .basis()
            .into_iter()
            .zip(bits)
            .map(|(r, a)| (r, if a { Player::Alice } else { Player::Bob }))
            .collect();
        let g = RegularGame::from_map(winners);
        loaded.game = g.game();
        loaded.regular = Some(g);
    }
    Ok(loaded)
}

fn moves(tokens: &[String]) -> Vec<Move> {
    tokens.iter().map(Move::atom).collect()
}

fn bits(location: &str, b: &Bits) -> CliResult<Vec<bool>> {
    let at = format!("{location}: payoff");
    match b {
        Bits::Text(s) => s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(CliError::input(&at, format!("`{other}` is not a payoff bit"))),
            })
            .collect(),
        Bits::List(v) => v
            .iter()
            .map(|c| match c {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(CliError::input(&at, format!("`{other}` is not a payoff bit"))),
            })
            .collect(),
    }
}

fn target(t: TargetParam) -> Target {
    match t {
        TargetParam::Omega => Target::Omega,
        TargetParam::Gamma => Target::Gamma,
    }
}

fn sampling(prefix: usize, period: usize, cap: Option<usize>) -> Sampling {
    let mut s = Sampling::new(prefix, period);
    if let Some(c) = cap {
        s.cap = c;
    }
    s
}

fn set(location: &str, field: &str, x: &FinSpace, token: &str) -> CliResult<Set> {
    x.parse_set(token)
        .ok_or_else(|| CliError::input(format!("{location}: {field}"), format!("`{token}` is not a set of points")))
}

/// Resolves a space parameter: a name, the text format, or explicit lists.
fn space(location: &str, p: SpaceParam) -> CliResult<FinSpace> {
    let at = format!("{location}: params.space");
    match p {
        SpaceParam::Text(s) if s.contains("points:") => FinSpace::parse(&s).map_err(|e| CliError::from_game(at, e)),
        SpaceParam::Text(s) => named_space(&s).map_err(|e| CliError::from_game(at, e)),
        SpaceParam::Explicit { points, opens } => {
            let mut masks = Vec::with_capacity(opens.len());
            for (i, open) in opens.iter().enumerate() {
                let mut mask: Set = 0;
                for p in open {
                    let k = points.iter().position(|q| q == p).ok_or_else(|| {
                        CliError::input(format!("{at}.opens[{i}]"), format!("unknown point `{p}`"))
                    })?;
                    mask |= 1 << k;
                }
                masks.push(mask);
            }
            topo::fin_space(points, masks).map_err(|e| CliError::from_game(at, e))
        }
    }
}

/// The named spaces: `sierpinski`, `point`, `empty`, `discrete:N` and `indiscrete:N`.
pub fn named_space(name: &str) -> gamecat_core::Result<FinSpace> {
    let sized = |prefix: &str| -> Option<usize> { name.strip_prefix(prefix).and_then(|n| n.parse().ok()) };
    let names = |n: usize| (0..n).map(|i| format!("p{i}")).collect::<Vec<_>>();
    match name {
        "sierpinski" => Ok(FinSpace::sierpinski()),
        "point" => Ok(FinSpace::point()),
        "empty" => Ok(FinSpace::empty()),
        _ => {
            if let Some(n) = sized("discrete:") {
                FinSpace::discrete(names(n))
            } else if let Some(n) = sized("indiscrete:") {
                FinSpace::indiscrete(names(n))
            } else {
                Err(gamecat_core::GameError::rejected(format!("unknown space `{name}`")))
            }
        }
    }
}
