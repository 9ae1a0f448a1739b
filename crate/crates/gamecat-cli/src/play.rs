//! The play loop: one side reads moves from a line source, the other follows a named
//! strategy.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use gamecat_core::strategy::{self, PlayRecord, StrategyMapping};
use gamecat_core::{Game, Move, Moment, Player, RegularGame};

use crate::error::{CliError, CliResult};
use crate::spec::Loaded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Side {
    Alice,
    Bob,
}

impl Side {
    pub fn player(self) -> Player {
        match self {
            Side::Alice => Player::Alice,
            Side::Bob => Player::Bob,
        }
    }
}

/// The opponent strategies understood by `play`.
pub const OPPONENTS: [&str; 4] = ["first", "last", "repeat", "winning"];

fn player_name(p: Player) -> &'static str {
    match p {
        Player::Alice => "alice",
        Player::Bob => "bob",
    }
}

/// Resolves an opponent name such as `repeat` or `repeat-bob` for the given player.
pub fn opponent(spec: &Loaded, name: &str, player: Player) -> CliResult<StrategyMapping> {
    let base = match name.rsplit_once('-') {
        Some((base, suffix)) if suffix == "alice" || suffix == "bob" => {
            if suffix != player_name(player) {
                return Err(CliError::input(
                    "--opponent",
                    format!("`{name}` plays {suffix} but the opponent is {}", player_name(player)),
                ));
            }
            base
        }
        _ => name,
    };
    let game = spec.game.clone();
    match base {
        "first" => Ok(StrategyMapping::new(player, move |t| game.tree.children(t).into_iter().next())),
        "last" => Ok(StrategyMapping::new(player, move |t| game.tree.children(t).into_iter().last())),
        "repeat" => Ok(StrategyMapping::new(player, move |t| repeat(&game, t))),
        "winning" => {
            let g = spec.require_regular()?;
            let sub = strategy::winning_strategy(g, player).ok_or_else(|| {
                CliError::Unsupported(format!("{}: {} has no winning strategy", spec.name, player_name(player)))
            })?;
            Ok(StrategyMapping::new(player, move |t| {
                sub.children(t).into_iter().next().or_else(|| game.tree.children(t).into_iter().next())
            }))
        }
        other => Err(CliError::input(
            "--opponent",
            format!("unknown strategy `{other}`; known: {}", OPPONENTS.join(", ")),
        )),
    }
}

/// Copies the previous move when it is legal, otherwise plays the first legal move.
fn repeat(game: &Game, t: &[Move]) -> Option<Move> {
    let legal = game.tree.children(t);
    match t.last() {
        Some(m) if legal.contains(m) => Some(m.clone()),
        _ => legal.into_iter().next(),
    }
}

/// Plays `innings` innings with the human side reading from `input`. Prompts and
/// rejections go to `prompts`.
pub fn run(
    spec: &Loaded,
    side: Side,
    opponent_name: &str,
    innings: usize,
    input: &mut dyn BufRead,
    prompts: &mut dyn Write,
) -> CliResult<(PlayRecord, String)> {
    let me = side.player();
    let other = opponent(spec, opponent_name, me.opponent())?;
    let (alice, bob) = match me {
        Player::Alice => (None, Some(&other)),
        Player::Bob => (Some(&other), None),
    };
    let mut driver = |t: &Moment, p: Player, legal: &[Move]| -> Option<Move> {
        let tokens: Vec<String> = legal.iter().map(Move::token).collect();
        let _ = writeln!(prompts, "inning {}, {} to move; legal: {}", t.len() / 2, player_name(p), tokens.join(" "));
        loop {
            let mut line = String::new();
            match input.read_line(&mut line) {
                Ok(0) | Err(_) => return None,
                Ok(_) => {}
            }
            let token = line.trim();
            if token.is_empty() || token.starts_with('#') {
                continue;
            }
            match tokens.iter().position(|x| x == token) {
                Some(i) => return Some(legal[i].clone()),
                None => {
                    let _ = writeln!(prompts, "illegal move `{token}`; legal: {}", tokens.join(" "));
                }
            }
        }
    };
    let record = strategy::play(&spec.game, alice, bob, &mut driver, innings)
        .map_err(|e| CliError::from_game(&spec.name, e))?;
    let text = transcript(spec.regular.as_ref(), &record)?;
    Ok((record, text))
}

/// One `inning player move` line per move, then the outcome.
pub fn transcript(g: Option<&RegularGame>, record: &PlayRecord) -> CliResult<String> {
    let mut out = String::new();
    for s in &record.steps {
        let _ = writeln!(out, "{} {} {}", s.inning, player_name(s.player), s.mv.token());
    }
    if record.aborted {
        let _ = writeln!(out, "result: aborted after {} moves", record.steps.len());
        return Ok(out);
    }
    let decided = match g {
        Some(g) => {
            let runs = g.runs_through(&record.moment).map_err(|e| CliError::from_game("play", e))?;
            let mut winners = runs.iter().filter_map(|r| g.winner(r));
            let first = winners.next();
            first.filter(|p| winners.all(|q| q == *p))
        }
        None => None,
    };
    match decided {
        Some(p) => {
            let _ = writeln!(out, "result: {} wins", player_name(p));
        }
        None => {
            let _ = writeln!(out, "result: undecided at depth {}", record.moment.len());
        }
    }
    Ok(out)
}
