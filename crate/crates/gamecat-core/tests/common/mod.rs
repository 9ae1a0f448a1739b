//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use gamecat_core::game::{canonical_game, Canonical, Move, Moment, Player, RegularGame, Run};
use gamecat_core::morphism::ChronMap;
use gamecat_core::random::{self, Shape};
use gamecat_core::topo::{fin_space, FinSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Table = BTreeMap<Run, Run>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn m(s: &str) -> Move {
    Move::atom(s)
}

pub fn run(prefix: &[&str], tail: &str) -> Run {
    Run::constant(prefix.iter().map(|s| m(s)).collect(), m(tail))
}

pub fn moment(moves: &[&str]) -> Moment {
    Moment(moves.iter().map(|s| m(s)).collect())
}

pub fn game(runs: &[(Run, Player)]) -> RegularGame {
    RegularGame::new(runs.iter().cloned()).expect("valid basis")
}

pub fn terminal() -> RegularGame {
    canonical_game(Canonical::Terminal).regular().expect("regular").clone()
}

pub fn generating() -> RegularGame {
    canonical_game(Canonical::Generating).regular().expect("regular").clone()
}

/// The full binary game with constant runs after `depth` choices; winners by parity of
/// the number of `1`s.
pub fn binary(depth: usize) -> RegularGame {
    let mut runs = BTreeMap::new();
    for bits in 0..(1usize << depth) {
        let prefix: Vec<Move> = (0..depth).map(|i| m(if bits >> i & 1 == 1 { "1" } else { "0" })).collect();
        let ones = bits.count_ones();
        let p = if ones % 2 == 0 { Player::Alice } else { Player::Bob };
        runs.insert(Run::constant(prefix, m("0")), p);
    }
    RegularGame::from_map(runs)
}

pub fn small(rng: &mut ChaCha8Rng, branching: usize, stab: usize, max_runs: usize) -> RegularGame {
    random::regular_game(rng, Shape::new(branching, stab, max_runs))
}

/// A random morphism of the given kind: a random run map whose domain winners are
/// adjusted so that the map preserves the kind.
pub fn morphism(rng: &mut ChaCha8Rng, dom: &RegularGame, cod: &RegularGame, kind: Player) -> (RegularGame, Table, ChronMap) {
    let table = random::run_map(rng, dom, cod);
    let dom = random::payoff_for_kind(dom, cod, &table, kind);
    let f = ChronMap::from_run_table(&dom, table.clone()).expect("nonexpanding");
    (dom, table, f)
}

/// Level sizes computed from the run basis by collecting truncations.
pub fn level_counts(g: &RegularGame, depth: usize) -> Vec<usize> {
    (0..=depth).map(|n| g.runs().map(|(r, _)| r.truncate(n)).collect::<BTreeSet<_>>().len()).collect()
}

/// Composition of run tables by direct lookup.
pub fn then(f: &Table, g: &Table) -> Table {
    f.iter().map(|(r, s)| (r.clone(), g[s].clone())).collect()
}

/// Whether a table sends the kind's winning runs to winning runs.
pub fn preserves(table: &Table, dom: &RegularGame, cod: &RegularGame, kind: Player) -> bool {
    dom.runs().all(|(r, p)| p != kind || cod.winner(&table[r]) == Some(kind))
}

/// Every Δ-nonexpanding map between two run bases, by brute force over all functions.
pub fn all_nonexpanding(dom: &RegularGame, cod: &RegularGame) -> Vec<Table> {
    all_functions(dom, cod)
        .into_iter()
        .filter(|t| t.iter().all(|(r, s)| t.iter().all(|(r2, s2)| r.delta(r2) <= s.delta(s2))))
        .collect()
}

/// Every function between two run bases.
pub fn all_functions(dom: &RegularGame, cod: &RegularGame) -> Vec<Table> {
    let xs = dom.basis();
    let ys = cod.basis();
    let mut out = Vec::new();
    if ys.is_empty() {
        if xs.is_empty() {
            out.push(Table::new());
        }
        return out;
    }
    let mut idx = vec![0usize; xs.len()];
    loop {
        out.push(xs.iter().cloned().zip(idx.iter().map(|&k| ys[k].clone())).collect());
        let mut i = 0;
        loop {
            if i == xs.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] < ys.len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// Exhaustive scan: whether some choice function of the player, over every turn of
/// theirs up to the horizon, leaves only winning runs. `None` past `cap` choices.
pub fn scan_winning(g: &RegularGame, player: Player, cap: usize) -> Option<bool> {
    if g.is_empty() {
        return Some(false);
    }
    let depth = g.horizon() + 1;
    let turns: Vec<(Moment, Vec<Move>)> = g
        .moments_upto(depth)
        .into_iter()
        .filter(|t| t.to_move() == player)
        .map(|t| {
            let kids = g.children(&t);
            (t, kids)
        })
        .filter(|(_, kids)| kids.len() > 1)
        .collect();
    let total = turns.iter().try_fold(1usize, |acc, (_, k)| acc.checked_mul(k.len()))?;
    if total > cap {
        return None;
    }
    let runs: Vec<(&Run, Player)> = g.runs().collect();
    for code in 0..total {
        let mut rest = code;
        let choice: BTreeMap<&Moment, &Move> = turns
            .iter()
            .map(|(t, kids)| {
                let c = &kids[rest % kids.len()];
                rest /= kids.len();
                (t, c)
            })
            .collect();
        let wins = runs.iter().all(|(r, p)| {
            let consistent = (0..depth).all(|n| choice.get(&r.truncate(n)).map(|c| r.at(n) == *c).unwrap_or(true));
            !consistent || *p == player
        });
        if wins {
            return Some(true);
        }
    }
    Some(false)
}

/// A random topology on `n` points: random subsets closed under union and intersection.
pub fn random_space(seed: u64, n: usize) -> FinSpace {
    let mut r = rng(seed);
    let full = (1u64 << n) - 1;
    let mut opens: BTreeSet<u64> = [0, full].into_iter().collect();
    for _ in 0..r.gen_range(0..4) {
        opens.insert(r.gen_range(0..=full));
    }
    loop {
        let list: Vec<u64> = opens.iter().copied().collect();
        let before = opens.len();
        for &a in &list {
            for &b in &list {
                opens.insert(a | b);
                opens.insert(a & b);
            }
        }
        if opens.len() == before {
            break;
        }
    }
    let points = (0..n).map(|i| format!("x{i}")).collect();
    fin_space(points, opens.into_iter().collect()).unwrap()
}

/// Every finite subset of the space has a superset in the family.
pub fn omega_oracle(x: &FinSpace, family: &[u64]) -> bool {
    let full = x.full();
    (0..=full).all(|f| family.iter().any(|u| f & !u == 0))
}

/// Every eventually periodic infinite selection of positions, given by a bit pattern
/// over the prefix and a repeating pattern over two cycles, picks an ω-cover.
pub fn gamma_oracle(x: &FinSpace, prefix: &[u64], cycle: &[u64]) -> bool {
    let block: Vec<u64> = cycle.iter().chain(cycle).copied().collect();
    for pre in 0u32..(1 << prefix.len()) {
        for cyc in 1u32..(1 << block.len()) {
            let picked: Vec<u64> = (0..prefix.len())
                .filter(|i| pre >> i & 1 == 1)
                .map(|i| prefix[i])
                .chain((0..block.len()).filter(|i| cyc >> i & 1 == 1).map(|i| block[i]))
                .collect();
            if !omega_oracle(x, &picked) {
                return false;
            }
        }
    }
    true
}
