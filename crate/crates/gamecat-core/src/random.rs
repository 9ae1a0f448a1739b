//! Seeded generators of regular games and maps for the property suites.
//!
//! All generators take any [`rand::Rng`], so suites are reproducible from a seed.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::game::{Move, Moment, Player, RegularGame, Run};
use crate::morphism::ChronMap;

/// Shape limits for random regular games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    /// Size of the move alphabet, which bounds the branching.
    pub branching: usize,
    /// Longest normal-form prefix.
    pub stab: usize,
    /// Largest number of basis runs.
    pub max_runs: usize,
}

impl Shape {
    pub const fn new(branching: usize, stab: usize, max_runs: usize) -> Shape {
        Shape { branching, stab, max_runs }
    }
}

fn token(i: usize) -> Move {
    Move::atom(format!("{i}"))
}

fn random_player(rng: &mut impl Rng) -> Player {
    if rng.gen_bool(0.5) {
        Player::Alice
    } else {
        Player::Bob
    }
}

/// A random nonempty regular game with eventually constant runs and random winners.
pub fn regular_game(rng: &mut impl Rng, shape: Shape) -> RegularGame {
    let k = rng.gen_range(1..=shape.max_runs.max(1));
    let mut runs = BTreeMap::new();
    for _ in 0..k {
        let len = rng.gen_range(0..=shape.stab);
        let prefix: Vec<Move> = (0..len).map(|_| token(rng.gen_range(0..shape.branching))).collect();
        let tail = token(rng.gen_range(0..shape.branching));
        runs.entry(Run::constant(prefix, tail)).or_insert_with(|| random_player(rng));
    }
    RegularGame::from_map(runs)
}

/// A random Δ-nonexpanding run map: children of each domain moment are sent to random
/// children of its image until a single run remains, which goes to a random run.
pub fn run_map(rng: &mut impl Rng, dom: &RegularGame, cod: &RegularGame) -> BTreeMap<Run, Run> {
    fn walk(
        rng: &mut impl Rng,
        dom: &RegularGame,
        cod: &RegularGame,
        t: Moment,
        u: Moment,
        out: &mut BTreeMap<Run, Run>,
    ) {
        let runs = dom.runs_through(&t).unwrap_or_default();
        if runs.len() == 1 {
            let targets = cod.runs_through(&u).unwrap_or_default();
            out.insert(runs[0].clone(), targets.choose(rng).expect("pruned codomain").clone());
            return;
        }
        let ys = cod.children(&u);
        for x in dom.children(&t) {
            let y = ys.choose(rng).expect("pruned codomain").clone();
            walk(rng, dom, cod, t.child(x), u.child(y), out);
        }
    }
    let mut out = BTreeMap::new();
    if !dom.is_empty() && !cod.is_empty() {
        walk(rng, dom, cod, Moment::root(), Moment::root(), &mut out);
    }
    out
}

/// A random chronological map with its run table.
pub fn chron_map(rng: &mut impl Rng, dom: &RegularGame, cod: &RegularGame) -> (BTreeMap<Run, Run>, ChronMap) {
    let table = run_map(rng, dom, cod);
    let f = ChronMap::from_run_table(dom, table.clone()).expect("generated maps are nonexpanding");
    (table, f)
}

/// A random locally surjective map onto `cod`: the domain unfolds `cod` up to its
/// horizon and duplicates some moves, tagging copies `a` and `b`, while keeping at
/// most `max_branching` children per moment. Returns the domain without payoff
/// constraints (winners random) and the run table.
pub fn locally_surjective_cover(
    rng: &mut impl Rng,
    cod: &RegularGame,
    max_branching: usize,
) -> (RegularGame, BTreeMap<Run, Run>) {
    let depth = cod.horizon() + 1;
    let mut table = BTreeMap::new();
    fn walk(
        rng: &mut impl Rng,
        cod: &RegularGame,
        depth: usize,
        max_branching: usize,
        t: Vec<Move>,
        u: Moment,
        table: &mut BTreeMap<Run, Run>,
    ) {
        if u.len() >= depth {
            let s = cod.runs_through(&u).expect("reachable")[0].clone();
            let start = depth.max(s.stabilization());
            let tt = t.clone();
            let s2 = s.clone();
            let r = Run::from_fn(start, s.period(), move |n| {
                if n < depth {
                    tt[n].clone()
                } else {
                    Move::tagged("a", s2.at(n).clone())
                }
            });
            table.insert(r, s);
            return;
        }
        let ys = cod.children(&u);
        let mut spare = max_branching.saturating_sub(ys.len());
        for y in ys {
            let copies = if spare > 0 && rng.gen_bool(0.4) {
                spare -= 1;
                2
            } else {
                1
            };
            for c in ["a", "b"].iter().take(copies) {
                let mut t2 = t.clone();
                t2.push(Move::tagged(*c, y.clone()));
                walk(rng, cod, depth, max_branching, t2, u.child(y.clone()), table);
            }
        }
    }
    if !cod.is_empty() {
        walk(rng, cod, depth, max_branching, Vec::new(), Moment::root(), &mut table);
    }
    let dom = RegularGame::from_map(table.keys().map(|r| (r.clone(), random_player(rng))).collect());
    (dom, table)
}

/// Rewrites the domain winners so that the run map is an A-morphism (`Alice`) or a
/// B-morphism (`Bob`); unconstrained runs keep their current winner.
pub fn payoff_for_kind(dom: &RegularGame, cod: &RegularGame, table: &BTreeMap<Run, Run>, kind: Player) -> RegularGame {
    dom.with_payoff(|r| {
        let img = cod.winner(&table[r]).expect("image is a codomain run");
        let cur = dom.winner(r).expect("basis run");
        match kind {
            Player::Alice if img == Player::Bob => Player::Bob,
            Player::Bob if img == Player::Alice => Player::Alice,
            _ => cur,
        }
    })
}

/// A random nonempty subgame of a regular game, keeping winners.
pub fn subgame(rng: &mut impl Rng, g: &RegularGame) -> RegularGame {
    let runs = g.basis();
    let keep = rng.gen_range(1..=runs.len());
    let mut chosen: Vec<Run> = runs.clone();
    chosen.shuffle(rng);
    chosen.truncate(keep);
    chosen.sort();
    g.restrict(|r| chosen.binary_search(r).is_ok())
}

/// Random winners on a fixed basis.
pub fn repaint(rng: &mut impl Rng, g: &RegularGame) -> RegularGame {
    let winners: Vec<Player> = (0..g.len()).map(|_| random_player(rng)).collect();
    let runs = g.basis();
    RegularGame::from_map(runs.into_iter().zip(winners).collect())
}
