//! Coequalizers and pushouts of regular games.
//!
//! The quotient tree identifies moments of the codomain under the least equivalence
//! with `f(t) ~ g(t)`, computed level by level with union-find. The move that enters
//! a class is the last move of the class's lexicographically least member, tagged
//! with the position of that member's parent inside the parent class when the parent
//! is not itself the least. Sibling classes therefore get distinct moves, and past
//! the separation depths every class is a fixed set of runs whose least member is a
//! fixed run, which makes quotient runs eventually periodic.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::limits::{coproduct_regular, injection};
use super::Mode;
use crate::error::{GameError, Result};
use crate::game::{Moment, Move, Player, RegularGame, Run};
use crate::morphism::{compose, run_table, ChronMap};

/// One level of the quotient: the codomain moments of that length with their classes.
#[derive(Debug, Clone)]
struct Level {
    moments: Vec<Moment>,
    /// Index of the least member of each moment's class.
    class: Vec<usize>,
    /// Members of each class, sorted, keyed by the least member's index.
    members: BTreeMap<usize, Vec<usize>>,
    index: BTreeMap<Moment, usize>,
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// The class structure of a coequalizer, materialized up to a depth and extended
/// along runs beyond it.
#[derive(Debug, Clone)]
struct Classes {
    levels: Vec<Level>,
    cod: RegularGame,
    /// Quotient runs of the codomain basis.
    table: BTreeMap<Run, Run>,
}

impl Classes {
    fn build(f: &ChronMap, g: &ChronMap, dom: &RegularGame, cod: &RegularGame) -> Result<Classes> {
        let start = dom.separation().max(cod.separation()).max(cod.stabilization());
        let period = cod.period();
        let depth = start + 2 * period + 1;
        let mut levels = Vec::with_capacity(depth + 1);
        for n in 0..=depth {
            let moments = cod.level(n);
            let index: BTreeMap<Moment, usize> = moments.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
            let mut parent: Vec<usize> = (0..moments.len()).collect();
            for t in dom.level(n) {
                let (a, b) = (f.apply(&t), g.apply(&t));
                let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                    return Err(GameError::rejected(format!("image of {t} leaves the codomain")));
                };
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    let (lo, hi) = if ri < rj { (ri, rj) } else { (rj, ri) };
                    parent[hi] = lo;
                }
            }
            let class: Vec<usize> = (0..moments.len()).map(|i| find(&mut parent, i)).collect();
            let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, &c) in class.iter().enumerate() {
                members.entry(c).or_default().push(i);
            }
            levels.push(Level { moments, class, members, index });
        }
        let mut c = Classes { levels, cod: cod.clone(), table: BTreeMap::new() };
        for (r, _) in cod.runs() {
            let moves = c.moves(&r.truncate(depth));
            if (start..depth - period).any(|i| moves[i] != moves[i + period]) {
                return Err(GameError::Integrity {
                    probe: depth,
                    reason: format!("quotient of {r} is not periodic after {start}"),
                });
            }
            let img = Run::new(moves[..start].to_vec(), moves[start..start + period].to_vec());
            c.table.insert(r.clone(), img);
        }
        Ok(c)
    }

    /// The quotient moves of a codomain moment within the materialized depth.
    fn moves(&self, t: &[Move]) -> Vec<Move> {
        let mut out = Vec::with_capacity(t.len());
        for i in 1..=t.len() {
            let lv = &self.levels[i];
            let me = lv.index[&Moment::from(&t[..i])];
            let rep = lv.class[me];
            let rep_moment = &lv.moments[rep];
            let last = rep_moment[i - 1].clone();
            let up = &self.levels[i - 1];
            let parent_idx = up.index[&rep_moment.truncated(i - 1)];
            let parent_class = &up.members[&up.class[parent_idx]];
            let pos = parent_class.iter().position(|&k| k == parent_idx).expect("member of its class");
            out.push(if pos == 0 { last } else { Move::tagged(format!("~{pos}"), last) });
        }
        out
    }

    fn apply(&self, t: &[Move]) -> Moment {
        if t.len() < self.levels.len() {
            return Moment(self.moves(t));
        }
        match self.cod.runs_through(t) {
            Ok(runs) => self.table[&runs[0]].truncate(t.len()),
            Err(_) => Moment::from(t),
        }
    }
}

/// A coequalizer `q: G' → G''`.
#[derive(Debug, Clone)]
pub struct Coequalizer {
    pub game: RegularGame,
    pub q: ChronMap,
    /// `q̄` on the codomain basis.
    pub table: BTreeMap<Run, Run>,
}

/// The coequalizer of `f, g: G → G'`. In mode A a quotient run is Alice's iff some
/// representative is, in mode B it is Bob's iff some representative is.
pub fn coequalizer(f: &ChronMap, g: &ChronMap, dom: &RegularGame, cod: &RegularGame, mode: Mode) -> Result<Coequalizer> {
    if cod.is_empty() {
        return Ok(Coequalizer { game: RegularGame::empty(), q: ChronMap::identity(), table: BTreeMap::new() });
    }
    let classes = Arc::new(Classes::build(f, g, dom, cod)?);
    let hero = mode.player();
    let mut map: BTreeMap<Run, Player> = BTreeMap::new();
    for (r, p) in cod.runs() {
        let img = classes.table[r].clone();
        let e = map.entry(img).or_insert(hero.opponent());
        if p == hero {
            *e = hero;
        }
    }
    let table = classes.table.clone();
    let (c1, c2) = (classes.clone(), classes);
    let q = ChronMap::new(move |t| c1.apply(t)).with_run_rule(move |r| {
        c2.table.get(r).cloned().ok_or_else(|| GameError::rejected(format!("{r} is not a codomain run")))
    });
    Ok(Coequalizer { game: RegularGame::from_map(map), q, table })
}

/// A pushout `G₁ → P ← G₂` of a span `G₁ ← G → G₂`.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub game: RegularGame,
    pub j1: ChronMap,
    pub j2: ChronMap,
    /// The coproduct the pushout is a quotient of, with its quotient map.
    pub sum: RegularGame,
    pub q: ChronMap,
}

/// The pushout of `f: G → G₁` and `g: G → G₂`: the coequalizer of `i₁∘f` and `i₂∘g`.
pub fn pushout(
    f: &ChronMap,
    g: &ChronMap,
    dom: &RegularGame,
    g1: &RegularGame,
    g2: &RegularGame,
    mode: Mode,
) -> Result<Pushout> {
    let sum = coproduct_regular(&[g1.clone(), g2.clone()]);
    let (i1, i2) = (injection(0), injection(1));
    let c = coequalizer(&compose(&i1, f), &compose(&i2, g), dom, &sum, mode)?;
    Ok(Pushout {
        game: c.game,
        j1: compose(&c.q, &i1),
        j2: compose(&c.q, &i2),
        sum,
        q: c.q,
    })
}

/// The kernel pair of `f`: pairs of domain runs with the same image, with both
/// projections. Payoffs are combined conjunctively in mode A.
pub fn kernel_pair(f: &ChronMap, dom: &RegularGame) -> Result<super::Pullback> {
    super::pullback(f, f, dom, dom, Mode::A)
}

/// Level sizes of a regular game up to `depth`.
pub fn level_sizes(g: &RegularGame, depth: usize) -> Vec<usize> {
    (0..=depth).map(|n| g.level(n).len()).collect()
}

/// Whether two regular games have the same number of moments at each level up to
/// `depth` and the same number of Alice runs.
pub fn same_shape(a: &RegularGame, b: &RegularGame, depth: usize) -> bool {
    level_sizes(a, depth) == level_sizes(b, depth) && a.alice_runs().len() == b.alice_runs().len() && a.len() == b.len()
}

/// The quotient classes of codomain runs, for reports.
pub fn run_classes(c: &Coequalizer) -> BTreeMap<Run, BTreeSet<Run>> {
    let mut out: BTreeMap<Run, BTreeSet<Run>> = BTreeMap::new();
    for (r, img) in &c.table {
        out.entry(img.clone()).or_default().insert(r.clone());
    }
    out
}

/// Checks that `q` is surjective and compatible: `q∘f = q∘g` on the domain basis.
pub fn coequalizes(c: &Coequalizer, f: &ChronMap, g: &ChronMap, dom: &RegularGame) -> Result<bool> {
    let tf = run_table(&compose(&c.q, f), dom)?;
    let tg = run_table(&compose(&c.q, g), dom)?;
    Ok(tf == tg)
}
