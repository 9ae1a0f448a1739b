//! Exponential games of regular games, with evaluation and currying.
//!
//! A moment of length `n` is a compatible sequence of level maps `f_k: T₁(k+1) → T₂(k+1)`
//! for `k < n`. Compatibility makes `f_k` determined by `f_{k-1}` and the last move of
//! each image, so the k-th move is the tuple of those last moves over `T₁(k+1)` in
//! lexicographic order. Runs are chronological maps `T₁ → T₂`, which on regular games
//! are the Δ-nonexpanding maps between run bases.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::limits::product_regular;
use super::Mode;
use crate::enumerate::run_maps;
use crate::error::{GameError, Result};
use crate::game::{lcm, Moment, Move, Player, RegularGame, Run};
use crate::morphism::ChronMap;

/// An exponential game with the chronological map behind each of its runs.
#[derive(Debug, Clone)]
pub struct Exponential {
    pub game: RegularGame,
    pub base: RegularGame,
    pub target: RegularGame,
    /// The run map encoded by each run of the exponential.
    pub maps: BTreeMap<Run, BTreeMap<Run, Run>>,
}

/// Encodes a Δ-nonexpanding run map `T₁ → T₂` as a run of the exponential.
pub fn encode(phi: &BTreeMap<Run, Run>, base: &RegularGame) -> Run {
    if base.is_empty() {
        return Run::constant(Vec::new(), Move::tuple(Vec::new()));
    }
    let start = phi.values().map(Run::stabilization).max().unwrap_or(0).max(base.separation());
    let period = phi.values().map(Run::period).fold(1, lcm);
    // Basis runs are sorted, so equal truncations are adjacent and already in order.
    let runs = base.basis();
    let phi = phi.clone();
    Run::from_fn(start, period, move |k| {
        let mut entries: Vec<(Moment, Move)> = Vec::new();
        for r in &runs {
            let t = r.truncate(k + 1);
            if entries.last().map(|(u, _)| *u != t).unwrap_or(true) {
                entries.push((t, phi[r].at(k).clone()));
            }
        }
        Move::tuple(entries.into_iter().map(|(_, m)| m).collect())
    })
}

/// The exponential game `G₂^{G₁}`. Alice wins a run iff its map is an A-morphism.
/// Fails with a cap error when more than `cap` maps exist.
pub fn exponential(base: &RegularGame, target: &RegularGame, cap: usize) -> Result<Exponential> {
    let mut maps = BTreeMap::new();
    let mut winners = BTreeMap::new();
    for phi in run_maps(base, target, cap)? {
        let alice = base.runs().all(|(r, p)| p != Player::Alice || target.winner(&phi[r]) == Some(Player::Alice));
        let run = encode(&phi, base);
        winners.insert(run.clone(), if alice { Player::Alice } else { Player::Bob });
        maps.insert(run, phi);
    }
    Ok(Exponential { game: RegularGame::from_map(winners), base: base.clone(), target: target.clone(), maps })
}

/// The position of a moment among the sorted moments of its length in a regular game.
fn position(g: &RegularGame, t: &[Move]) -> Option<usize> {
    g.level(t.len()).iter().position(|u| u.0.as_slice() == t)
}

/// The evaluation map `G₂^{G₁} × G₁ → G₂` and, given `h: G × G₁ → G₂`, its curried
/// transpose `G → G₂^{G₁}`.
pub fn eval_curry(
    exp: &Exponential,
    game: Option<&RegularGame>,
    h: Option<&ChronMap>,
) -> Result<(ChronMap, Option<ChronMap>)> {
    let base = exp.base.clone();
    let maps = Arc::new(exp.maps.clone());
    let ev = {
        let base = base.clone();
        let maps = maps.clone();
        ChronMap::new(move |t| {
            let mut s: Vec<Move> = Vec::with_capacity(t.len());
            let mut out = Vec::with_capacity(t.len());
            for m in t {
                let parts = m.parts().expect("pair move");
                s.push(parts[1].clone());
                let idx = position(&base, &s).unwrap_or(0);
                let entry = parts[0].parts().and_then(|e| e.get(idx)).cloned();
                out.push(entry.unwrap_or_else(|| parts[1].clone()));
            }
            Moment(out)
        })
        .with_run_rule(move |r| {
            let parts = r.unzip(2).ok_or_else(|| GameError::rejected("pair run expected"))?;
            let phi = maps.get(&parts[0]).ok_or_else(|| GameError::rejected(format!("{} is not an exponential run", parts[0])))?;
            phi.get(&parts[1]).cloned().ok_or_else(|| GameError::rejected(format!("{} is not a base run", parts[1])))
        })
    };
    let curried = match (game, h) {
        (Some(g), Some(h)) => Some(curry(g, &base, h, exp)?),
        (None, None) => None,
        _ => return Err(GameError::rejected("currying needs both the game and the map")),
    };
    Ok((ev, curried))
}

/// The transpose of `h: G × G₁ → G₂`: `t ↦ ⟨f_{t↾1}, …, f_t⟩` with `f_t(s) = h(t, s)`.
fn curry(g: &RegularGame, base: &RegularGame, h: &ChronMap, exp: &Exponential) -> Result<ChronMap> {
    let (prod, _) = product_regular(&[g.clone(), base.clone()], Mode::A);
    for (r, _) in prod.runs() {
        h.run_image(r)?;
    }
    let mut runs = BTreeMap::new();
    for (r, _) in g.runs() {
        let phi: BTreeMap<Run, Run> =
            base.runs().map(|(s, _)| Ok((s.clone(), h.run_image(&Run::zip(&[r.clone(), s.clone()]))?))).collect::<Result<_>>()?;
        let e = encode(&phi, base);
        if !exp.maps.contains_key(&e) {
            return Err(GameError::Integrity { probe: 0, reason: format!("the transpose of {r} is not chronological") });
        }
        runs.insert(r.clone(), e);
    }
    let (base, h) = (base.clone(), h.clone());
    let runs = Arc::new(runs);
    Ok(ChronMap::new(move |t| {
        let mut out = Vec::with_capacity(t.len());
        for k in 0..t.len() {
            let prefix = &t[..=k];
            let entries: Vec<Move> = base
                .level(k + 1)
                .iter()
                .map(|s| {
                    let pair: Vec<Move> = prefix.iter().zip(s.iter()).map(|(a, b)| Move::tuple(alloc::vec![a.clone(), b.clone()])).collect();
                    h.apply(&pair)[k].clone()
                })
                .collect();
            out.push(Move::tuple(entries));
        }
        Moment(out)
    })
    .with_run_rule(move |r| runs.get(r).cloned().ok_or_else(|| GameError::rejected(format!("{r} is not a basis run")))))
}

/// The inverse of the one-board exponential: each tuple move of `G^{G₁}` with a single
/// entry is sent to that entry. An isomorphism of trees when `G₁` has one run.
pub fn single_board() -> ChronMap {
    ChronMap::letterwise(|m| m.parts().and_then(|p| p.first()).cloned().unwrap_or_else(|| m.clone()))
}
