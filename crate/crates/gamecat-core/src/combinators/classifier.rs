//! Weak classifiers for strong partial maps.
//!
//! `T_⊥` adds a padding move `*_T` at every moment of `T`; once it is played only
//! padding follows, and every padded run is Alice's. A partial map `S̃ ↩ S → T` with
//! `m` an embedding is classified by following `f` while the play stays inside
//! `m[S]` and padding from the first step that leaves it.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::factor::{is_initial, is_injective};
use crate::error::{GameError, Result};
use crate::game::{Code, Game, GameTree, Moment, Move, Player, RegularGame, Run};
use crate::morphism::{run_table, ChronMap};

/// The padding move of `T_⊥`.
pub fn pad() -> Move {
    Move::fresh("*_T")
}

fn padded(r: &Run) -> bool {
    let p = pad();
    r.prefix().contains(&p) || r.cycle().contains(&p)
}

/// The padded game `T_⊥` with the inclusion `i: T → T_⊥`.
pub fn weak_classifier(g: &Game) -> (Game, ChronMap) {
    let tree = g.tree.clone();
    let empty = g.is_empty();
    let star = pad();
    let t = GameTree::new(move |t| {
        if empty || t.contains(&star) {
            return alloc::vec![star.clone()];
        }
        let mut kids = tree.children(t);
        kids.push(star.clone());
        kids
    });
    let payoff = g.payoff.clone();
    (Game::new(t, move |r| if padded(r) { Player::Alice } else { payoff(r) }), ChronMap::identity())
}

/// Whether a moment lies in the image of an injective map, with its preimage.
fn preimage_of(m: &ChronMap, s_game: &RegularGame, u: &[Move]) -> Option<Moment> {
    s_game.level(u.len()).into_iter().find(|t| m.apply(t).0.as_slice() == u)
}

/// The classifying map `f_⊥: S̃ → T_⊥` of the partial map `S̃ ↩ S → T`.
/// Rejects `m` unless it is an embedding (injective and initial).
pub fn classify_partial(m: &ChronMap, s: &RegularGame, s_tilde: &RegularGame, f: &ChronMap) -> Result<ChronMap> {
    let m_table = run_table(m, s)?;
    if !is_injective(&m_table) || !is_initial(&m_table, s, s_tilde) {
        return Err(GameError::rejected("the partial map's domain inclusion is not an embedding"));
    }
    let inverse: BTreeMap<Run, Run> = m_table.iter().map(|(r, r2)| (r2.clone(), r.clone())).collect();
    let (m1, f1, s1) = (m.clone(), f.clone(), s.clone());
    let (f2, inverse) = (f.clone(), Arc::new(inverse));
    Ok(ChronMap::new(move |u| {
        let mut n = u.len();
        let base = loop {
            if n == 0 {
                break Moment::root();
            }
            if let Some(t) = preimage_of(&m1, &s1, &u[..n]) {
                break t;
            }
            n -= 1;
        };
        let mut out = f1.apply(&base).into_vec();
        out.extend(core::iter::repeat_n(pad(), u.len() - n));
        Moment(out)
    })
    .with_run_rule(move |r| {
        if let Some(src) = inverse.get(r) {
            return f2.run_image(src);
        }
        let n = inverse
            .keys()
            .map(|r2| match r.delta(r2) {
                Code::Fin(k) => k,
                Code::Inf => usize::MAX,
            })
            .max()
            .unwrap_or(0);
        let src = inverse.iter().find(|(r2, _)| r.delta(r2) == Code::Fin(n)).map(|(_, src)| src.clone());
        let head = match src {
            Some(src) => f2.run_image(&src)?.truncate(n).into_vec(),
            None => Vec::new(),
        };
        Ok(Run::constant(head, pad()))
    }))
}

/// The verdicts of the square `f_⊥∘m = i∘f` being a pullback.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSquare {
    /// `f_⊥∘m = i∘f` on moments up to the depth.
    pub commutes: bool,
    /// `m[S] = f_⊥⁻¹(i[T])` on moments up to the depth.
    pub preimage: bool,
    /// The run-level pullback property, including the payoff of `S`.
    pub runs: bool,
    /// `f_⊥` sends Alice runs to Alice runs.
    pub a_morphism: bool,
    /// A moment where one of the checks failed.
    pub witness: Option<Moment>,
}

impl PartialSquare {
    pub fn holds(&self) -> bool {
        self.commutes && self.preimage && self.runs && self.a_morphism
    }
}

/// Checks the classifying square of `(m, f)` with classifying map `f_bot`.
pub fn check_square(
    m: &ChronMap,
    s: &RegularGame,
    s_tilde: &RegularGame,
    f: &ChronMap,
    t: &RegularGame,
    f_bot: &ChronMap,
    depth: usize,
) -> Result<PartialSquare> {
    let mut witness = None;
    let mut commutes = true;
    for u in s.moments_upto(depth) {
        if f_bot.apply(&m.apply(&u)) != f.apply(&u) {
            commutes = false;
            witness.get_or_insert(u);
        }
    }
    let image: BTreeSet<Moment> = s.moments_upto(depth).iter().map(|u| m.apply(u)).collect();
    let mut preimage = true;
    for u in s_tilde.moments_upto(depth) {
        let img = f_bot.apply(&u);
        let inside = !img.contains(&pad()) && t.contains(&img);
        if inside != image.contains(&u) {
            preimage = false;
            witness.get_or_insert(u);
        }
    }
    let m_table = run_table(m, s)?;
    let f_table = run_table(f, s)?;
    let bot_table = run_table(f_bot, s_tilde)?;
    let mut runs = true;
    for (r, img) in &bot_table {
        if padded(img) {
            continue;
        }
        let lifts: Vec<&Run> = m_table.iter().filter(|(_, r2)| *r2 == r).map(|(src, _)| src).collect();
        let ok = lifts.len() == 1 && f_table[lifts[0]] == *img && t.winner(img).is_some();
        if !ok {
            runs = false;
            witness.get_or_insert(r.truncate(depth));
        }
    }
    for (r, p) in s.runs() {
        let alice = s_tilde.winner(&m_table[r]) == Some(Player::Alice) && t.winner(&f_table[r]) == Some(Player::Alice);
        if alice != (p == Player::Alice) {
            runs = false;
            witness.get_or_insert(r.truncate(depth));
        }
    }
    let mut a_morphism = true;
    for (r, p) in s_tilde.runs() {
        let img = &bot_table[r];
        if p == Player::Alice && !padded(img) && t.winner(img) != Some(Player::Alice) {
            a_morphism = false;
            witness.get_or_insert(r.truncate(depth));
        }
    }
    Ok(PartialSquare { commutes, preimage, runs, a_morphism, witness })
}
