//! The four orthogonal factorization systems on regular games.
//!
//! On trees there are two systems: surjective maps against injective maps, and strong
//! epimorphisms against run-injective maps. Each lifts to games in two ways, by
//! requiring the right class to carry the preimage payoff (initial maps) or the left
//! class to carry the image payoff (final maps).
//!
//! The strong-epi part is the coequalizer of the kernel pair. On finitely branching
//! trees every run of that quotient lifts to a domain run, so the induced map is
//! already run-injective and one step suffices.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use super::colimits::coequalizer;
use super::limits::pullback;
use super::Mode;
use crate::enumerate::{filter_kind, run_maps};
use crate::error::{GameError, Result};
use crate::game::{Player, RegularGame, Run};
use crate::morphism::{run_table, ChronMap};

/// A factorization system, named by its left and right classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum System {
    /// Surjective maps against embeddings (injective, initial).
    EpiRegMono,
    /// Surjective final maps against injective maps.
    EStarM,
    /// Strong epimorphisms against run-injective initial maps.
    EMStar,
    /// Strong epimorphisms that are final against run-injective maps.
    StrongEpiMono,
}

impl System {
    pub const ALL: [System; 4] = [System::EpiRegMono, System::EStarM, System::EMStar, System::StrongEpiMono];

    pub fn name(self) -> &'static str {
        match self {
            System::EpiRegMono => "epi_regmono",
            System::EStarM => "Estar_M",
            System::EMStar => "E_Mstar",
            System::StrongEpiMono => "strongepi_mono",
        }
    }

    /// Whether the left class is the strong epimorphisms rather than the surjections.
    fn strong(self) -> bool {
        matches!(self, System::EMStar | System::StrongEpiMono)
    }

    /// Whether the middle payoff is the image of the domain payoff.
    fn final_left(self) -> bool {
        matches!(self, System::EStarM | System::StrongEpiMono)
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = GameError;
    fn from_str(s: &str) -> Result<System> {
        System::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| GameError::rejected(alloc::format!("unknown factorization system {s}")))
    }
}

/// A factorization `f = m∘e` through a middle game.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub system: System,
    pub middle: RegularGame,
    pub e: ChronMap,
    pub m: ChronMap,
    pub e_table: BTreeMap<Run, Run>,
    pub m_table: BTreeMap<Run, Run>,
}

/// Factors an A-morphism `f: dom → cod` in the given system.
pub fn factorize(f: &ChronMap, dom: &RegularGame, cod: &RegularGame, system: System) -> Result<Factorization> {
    let f_table = run_table(f, dom)?;
    if !super::table_preserves(&f_table, dom, cod, Player::Alice) {
        return Err(GameError::rejected("only A-morphisms are factored"));
    }
    let (e_table, m_table) = if system.strong() {
        let kp = pullback(f, f, dom, dom, Mode::A)?;
        let c = coequalizer(&kp.p1, &kp.p2, &kp.game, dom, Mode::A)?;
        let e_table: BTreeMap<Run, Run> = dom.runs().map(|(r, _)| (r.clone(), c.table[r].clone())).collect();
        let mut m_table = BTreeMap::new();
        for (r, s) in &e_table {
            m_table.insert(s.clone(), f_table[r].clone());
        }
        (e_table, m_table)
    } else {
        let m_table: BTreeMap<Run, Run> = f_table.values().map(|s| (s.clone(), s.clone())).collect();
        (f_table.clone(), m_table)
    };
    let winners: BTreeMap<Run, Player> = m_table
        .iter()
        .map(|(s, img)| {
            let p = if system.final_left() {
                let alice = e_table.iter().any(|(r, s2)| s2 == s && dom.winner(r) == Some(Player::Alice));
                if alice {
                    Player::Alice
                } else {
                    Player::Bob
                }
            } else {
                cod.winner(img).expect("image lies in the codomain")
            };
            (s.clone(), p)
        })
        .collect();
    let middle = RegularGame::from_map(winners);
    let e = ChronMap::from_run_table(dom, e_table.clone())?;
    let m = ChronMap::from_run_table(&middle, m_table.clone())?;
    Ok(Factorization { system, middle, e, m, e_table, m_table })
}

/// Whether a run table hits every codomain run. On finitely branching trees this is
/// the same as surjectivity on moments.
pub fn is_surjective(table: &BTreeMap<Run, Run>, cod: &RegularGame) -> bool {
    let hit: BTreeSet<&Run> = table.values().collect();
    cod.runs().all(|(s, _)| hit.contains(s))
}

/// Whether the map is injective on moments: it preserves `Δ` exactly.
pub fn is_injective(table: &BTreeMap<Run, Run>) -> bool {
    let runs: Vec<(&Run, &Run)> = table.iter().collect();
    runs.iter()
        .enumerate()
        .all(|(i, (r, s))| runs[i + 1..].iter().all(|(r2, s2)| r.delta(r2) == s.delta(s2)))
}

/// Whether the run extension is injective.
pub fn is_run_injective(table: &BTreeMap<Run, Run>) -> bool {
    let hit: BTreeSet<&Run> = table.values().collect();
    hit.len() == table.len()
}

/// Whether the domain payoff is the preimage of the codomain payoff.
pub fn is_initial(table: &BTreeMap<Run, Run>, dom: &RegularGame, cod: &RegularGame) -> bool {
    dom.runs().all(|(r, p)| cod.winner(&table[r]) == Some(p))
}

/// Whether the codomain payoff is the image of the domain payoff.
pub fn is_final(table: &BTreeMap<Run, Run>, dom: &RegularGame, cod: &RegularGame) -> bool {
    cod.runs().all(|(s, p)| {
        let alice = table.iter().any(|(r, s2)| s2 == s && dom.winner(r) == Some(Player::Alice));
        (p == Player::Alice) == alice
    })
}

/// Whether a surjective map is a strong epimorphism: on every level, the moments
/// linked through pairs of runs with equal images form exactly the fibres.
pub fn is_strong_epi(table: &BTreeMap<Run, Run>, dom: &RegularGame, cod: &RegularGame) -> bool {
    if !is_surjective(table, cod) {
        return false;
    }
    let depth = dom.separation().max(cod.separation()) + 1;
    let runs: Vec<&Run> = table.keys().collect();
    for n in 0..=depth {
        let level = dom.level(n);
        let index: BTreeMap<_, usize> = level.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        let mut parent: Vec<usize> = (0..level.len()).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for (i, r) in runs.iter().enumerate() {
            for r2 in &runs[i + 1..] {
                if table[*r] == table[*r2] {
                    let a = find(&mut parent, index[&r.truncate(n)]);
                    let b = find(&mut parent, index[&r2.truncate(n)]);
                    parent[a] = b;
                }
            }
        }
        let classes: BTreeSet<usize> = (0..level.len()).map(|i| find(&mut parent, i)).collect();
        if classes.len() != cod.level(n).len() {
            return false;
        }
    }
    true
}

/// Membership in the left class of a system.
pub fn in_left(system: System, table: &BTreeMap<Run, Run>, dom: &RegularGame, cod: &RegularGame) -> bool {
    let base = if system.strong() { is_strong_epi(table, dom, cod) } else { is_surjective(table, cod) };
    base && (!system.final_left() || is_final(table, dom, cod))
}

/// Membership in the right class of a system.
pub fn in_right(system: System, table: &BTreeMap<Run, Run>, dom: &RegularGame, cod: &RegularGame) -> bool {
    let base = if system.strong() { is_run_injective(table) } else { is_injective(table) };
    base && (system.final_left() || is_initial(table, dom, cod))
}

/// Checks a factorization of `f`: `m∘e = f`, both are A-morphisms, `e` is in the left
/// class and `m` in the right class.
pub fn check_factorization(fac: &Factorization, f: &ChronMap, dom: &RegularGame, cod: &RegularGame) -> Result<bool> {
    let f_table = run_table(f, dom)?;
    let composite = super::compose_tables(&fac.e_table, &fac.m_table)?;
    Ok(composite == f_table
        && super::table_preserves(&fac.e_table, dom, &fac.middle, Player::Alice)
        && super::table_preserves(&fac.m_table, &fac.middle, cod, Player::Alice)
        && in_left(fac.system, &fac.e_table, dom, &fac.middle)
        && in_right(fac.system, &fac.m_table, &fac.middle, cod))
}

/// One game with a run table, as a morphism of the test squares.
#[derive(Debug, Clone)]
pub struct Arrow {
    pub dom: RegularGame,
    pub cod: RegularGame,
    pub table: BTreeMap<Run, Run>,
}

/// For a left-class `e: A → B` and a right-class `m: C → D`, enumerates every commuting
/// square `v∘e = m∘u` of A-morphisms and returns, for each, the number of diagonals
/// `d: B → C` with `d∘e = u` and `m∘d = v`.
pub fn orthogonal_diagonals(e: &Arrow, m: &Arrow, cap: usize) -> Result<Vec<usize>> {
    let us = filter_kind(run_maps(&e.dom, &m.dom, cap)?, &e.dom, &m.dom, Player::Alice);
    let vs = filter_kind(run_maps(&e.cod, &m.cod, cap)?, &e.cod, &m.cod, Player::Alice);
    let ds = filter_kind(run_maps(&e.cod, &m.dom, cap)?, &e.cod, &m.dom, Player::Alice);
    let mut out = Vec::new();
    for u in &us {
        let mu = super::compose_tables(u, &m.table)?;
        for v in &vs {
            if super::compose_tables(&e.table, v)? != mu {
                continue;
            }
            let mut count = 0;
            for d in &ds {
                if super::compose_tables(&e.table, d)? == *u && super::compose_tables(d, &m.table)? == *v {
                    count += 1;
                }
            }
            out.push(count);
        }
    }
    Ok(out)
}

/// A short description of the middle game of a factorization: level sizes up to
/// `depth` and the Alice runs.
pub fn middle_signature(fac: &Factorization, depth: usize) -> (Vec<usize>, Vec<Run>) {
    ((0..=depth).map(|n| fac.middle.level(n).len()).collect(), fac.middle.alice_runs())
}

