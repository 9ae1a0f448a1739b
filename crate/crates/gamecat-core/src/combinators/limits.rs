//! Products, coproducts, equalizers, pullbacks, the quit-move extension and the
//! distributivity map.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::Mode;
use crate::error::Result;
use crate::game::{canonical_game, Canonical, Game, GameTree, Moment, Move, Player, RegularGame, Run};
use crate::morphism::{run_table, ChronMap};

/// A product game with its projections.
#[derive(Debug, Clone)]
pub struct Product {
    pub game: Game,
    pub projections: Vec<ChronMap>,
}

/// A coproduct game with its injections.
#[derive(Debug, Clone)]
pub struct Coproduct {
    pub game: Game,
    pub injections: Vec<ChronMap>,
}

/// A pullback span `G₁ ← P → G₂`.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub game: RegularGame,
    pub p1: ChronMap,
    pub p2: ChronMap,
}

fn combine(mode: Mode, winners: impl IntoIterator<Item = Player>) -> Player {
    let w: Vec<Player> = winners.into_iter().collect();
    let hero = mode.player();
    let all = w.iter().all(|&p| p == hero);
    if all {
        hero
    } else {
        hero.opponent()
    }
}

/// Projection onto the i-th board.
pub fn projection(i: usize) -> ChronMap {
    ChronMap::letterwise(move |m| m.parts().expect("tuple move")[i].clone())
}

/// The coproduct tag of component `j`.
pub fn component(j: usize) -> String {
    format!("{j}")
}

/// Injection of component `j` into a coproduct.
pub fn injection(j: usize) -> ChronMap {
    let tag = component(j);
    ChronMap::letterwise(move |m| Move::tagged(tag.clone(), m.clone()))
}

/// The multiboard game. In mode A Alice must win every board, in mode B Bob must.
/// The empty product is the terminal game.
pub fn product(games: &[Game], mode: Mode) -> Product {
    if games.is_empty() {
        return Product { game: canonical_game(Canonical::Terminal), projections: Vec::new() };
    }
    let projections = (0..games.len()).map(projection).collect();
    if let Some(regs) = games.iter().map(|g| g.regular().cloned()).collect::<Option<Vec<_>>>() {
        let (reg, _) = product_regular(&regs, mode);
        return Product { game: reg.game(), projections };
    }
    if games.iter().any(Game::is_empty) {
        return Product { game: Game::new(GameTree::empty(), |_| Player::Bob), projections };
    }
    let trees: Vec<GameTree> = games.iter().map(|g| g.tree.clone()).collect();
    let k = trees.len();
    let tree = GameTree::new(move |t| {
        let mut acc: Vec<Vec<Move>> = vec![Vec::new()];
        for (i, tr) in trees.iter().enumerate() {
            let comp: Vec<Move> = t.iter().map(|m| m.parts().expect("tuple move")[i].clone()).collect();
            let kids = tr.children(&comp);
            let mut next = Vec::with_capacity(acc.len() * kids.len());
            for a in &acc {
                for x in &kids {
                    let mut b = a.clone();
                    b.push(x.clone());
                    next.push(b);
                }
            }
            acc = next;
        }
        acc.into_iter().map(Move::tuple).collect()
    });
    let payoffs: Vec<_> = games.iter().map(|g| g.payoff.clone()).collect();
    let game = Game::new(tree, move |r| match r.unzip(k) {
        Some(parts) => combine(mode, parts.iter().zip(&payoffs).map(|(p, pay)| pay(p))),
        None => Player::Bob,
    });
    Product { game, projections }
}

/// The product of regular games: all tuples of basis runs.
pub fn product_regular(games: &[RegularGame], mode: Mode) -> (RegularGame, Vec<ChronMap>) {
    if games.is_empty() {
        let t = canonical_game(Canonical::Terminal);
        return (t.regular().expect("terminal is regular").clone(), Vec::new());
    }
    let mut acc: Vec<(Vec<Run>, Vec<Player>)> = vec![(Vec::new(), Vec::new())];
    for g in games {
        let mut next = Vec::new();
        for (runs, ws) in &acc {
            for (r, p) in g.runs() {
                let mut runs2 = runs.clone();
                runs2.push(r.clone());
                let mut ws2 = ws.clone();
                ws2.push(p);
                next.push((runs2, ws2));
            }
        }
        acc = next;
    }
    let map = acc.into_iter().map(|(runs, ws)| (Run::zip(&runs), combine(mode, ws))).collect();
    (RegularGame::from_map(map), (0..games.len()).map(projection).collect())
}

/// Disjoint union: Alice's first move picks the component. Moves carry the component
/// index as their tag. The empty coproduct is the empty game.
pub fn coproduct(games: &[Game]) -> Coproduct {
    let injections = (0..games.len()).map(injection).collect();
    if let Some(regs) = games.iter().map(|g| g.regular().cloned()).collect::<Option<Vec<_>>>() {
        return Coproduct { game: coproduct_regular(&regs).game(), injections };
    }
    if games.iter().all(Game::is_empty) {
        return Coproduct { game: Game::new(GameTree::empty(), |_| Player::Bob), injections };
    }
    let trees: Vec<GameTree> = games.iter().map(|g| g.tree.clone()).collect();
    let tree = GameTree::new(move |t| {
        if t.is_empty() {
            return trees
                .iter()
                .enumerate()
                .flat_map(|(j, tr)| tr.children(&[]).into_iter().map(move |x| Move::tagged(component(j), x)))
                .collect();
        }
        let Some((j, comp)) = untag_moment(t) else { return Vec::new() };
        let tag = component(j);
        trees[j].children(&comp).into_iter().map(|x| Move::tagged(tag.clone(), x)).collect()
    });
    let payoffs: Vec<_> = games.iter().map(|g| g.payoff.clone()).collect();
    let game = Game::new(tree, move |r| match untag_run(r) {
        Some((j, inner)) if j < payoffs.len() => payoffs[j](&inner),
        _ => Player::Bob,
    });
    Coproduct { game, injections }
}

fn tag_index(m: &Move) -> Option<usize> {
    m.component_tag()?.parse().ok()
}

/// Splits a coproduct moment into its component index and untagged moment.
pub fn untag_moment(t: &[Move]) -> Option<(usize, Vec<Move>)> {
    let j = tag_index(t.first()?)?;
    let inner = t.iter().map(|m| m.untagged().cloned()).collect::<Option<Vec<_>>>()?;
    Some((j, inner))
}

/// Splits a coproduct run into its component index and untagged run.
pub fn untag_run(r: &Run) -> Option<(usize, Run)> {
    let j = tag_index(r.at(0))?;
    let prefix = r.prefix().iter().map(|m| m.untagged().cloned()).collect::<Option<Vec<_>>>()?;
    let cycle = r.cycle().iter().map(|m| m.untagged().cloned()).collect::<Option<Vec<_>>>()?;
    Some((j, Run::new(prefix, cycle)))
}

/// The coproduct of regular games.
pub fn coproduct_regular(games: &[RegularGame]) -> RegularGame {
    let mut map = BTreeMap::new();
    for (j, g) in games.iter().enumerate() {
        let tag = component(j);
        for (r, p) in g.runs() {
            map.insert(r.map_moves(|m| Move::tagged(tag.clone(), m.clone())), p);
        }
    }
    RegularGame::from_map(map)
}

/// The equalizer of `f, g: G → G'`: the subgame of runs with `f̄(R) = ḡ(R)`, with its
/// inclusion.
pub fn equalizer(f: &ChronMap, g: &ChronMap, dom: &RegularGame) -> Result<(RegularGame, ChronMap)> {
    let mut keep = BTreeSet::new();
    for (r, _) in dom.runs() {
        if f.run_image(r)? == g.run_image(r)? {
            keep.insert(r.clone());
        }
    }
    Ok((dom.restrict(|r| keep.contains(r)), ChronMap::identity()))
}

/// The pullback of `f: G₁ → G` and `g: G₂ → G`: pairs of runs with equal images.
/// In mode A Alice wins a pair iff she wins both components, in mode B Bob must.
pub fn pullback(f: &ChronMap, g: &ChronMap, g1: &RegularGame, g2: &RegularGame, mode: Mode) -> Result<Pullback> {
    let t1 = run_table(f, g1)?;
    let t2 = run_table(g, g2)?;
    let mut map = BTreeMap::new();
    for (r1, p1) in g1.runs() {
        for (r2, p2) in g2.runs() {
            if t1[r1] == t2[r2] {
                map.insert(Run::zip(&[r1.clone(), r2.clone()]), combine(mode, [p1, p2]));
            }
        }
    }
    Ok(Pullback { game: RegularGame::from_map(map), p1: projection(0), p2: projection(1) })
}

/// The quit move added by the quit-move extension.
pub fn quit_move() -> Move {
    Move::fresh("0_G")
}

fn has_quit(r: &Run) -> bool {
    let q = quit_move();
    r.cycle().contains(&q) || r.prefix().contains(&q)
}

/// The quit-move extension: Alice may quit at each of her turns, after which both
/// players repeat the quit move and Bob wins. The empty game becomes one quit branch.
pub fn d_b(g: &Game) -> Game {
    let quit = quit_move();
    let tree = g.tree.clone();
    let empty = g.is_empty();
    let q2 = quit.clone();
    let t = GameTree::new(move |t| {
        if empty || t.last() == Some(&q2) {
            return vec![q2.clone()];
        }
        let mut kids = tree.children(t);
        if t.len() % 2 == 0 {
            kids.push(q2.clone());
        }
        kids
    });
    let payoff = g.payoff.clone();
    Game::new(t, move |r| if has_quit(r) { Player::Bob } else { payoff(r) })
}

/// The regular part of the quit-move extension: the original runs plus the quit runs
/// leaving from Alice's turns of length at most `depth`.
pub fn d_b_regular(g: &RegularGame, depth: usize) -> RegularGame {
    let quit = quit_move();
    if g.is_empty() {
        return RegularGame::single(Run::constant(Vec::new(), quit), Player::Bob);
    }
    let mut map = g.map().clone();
    for t in g.moments_upto(depth) {
        if t.len() % 2 == 0 {
            map.insert(Run::constant(t.into_vec(), quit.clone()), Player::Bob);
        }
    }
    RegularGame::from_map(map)
}

/// The quit-move extension of a map: `f` before the quit, quits after it.
pub fn d_b_map(f: &ChronMap) -> ChronMap {
    let (f1, f2) = (f.clone(), f.clone());
    ChronMap::new(move |t| {
        let quit = quit_move();
        let k = t.iter().position(|m| *m == quit).unwrap_or(t.len());
        let mut out = f1.apply(&t[..k]).into_vec();
        out.extend(core::iter::repeat_n(quit, t.len() - k));
        Moment(out)
    })
    .with_run_rule(move |r| {
        if has_quit(r) {
            let k = r.stabilization();
            Ok(Run::constant(f2.apply(&r.truncate(k)).into_vec(), quit_move()))
        } else {
            f2.run_image(r)
        }
    })
}

/// The canonical map `⊔(G×G_j) → G×⊔G_j` and whether it is an isomorphism: a bijection
/// on every level up to `depth` and on runs, with matching winners.
#[derive(Debug, Clone)]
pub struct Distributivity {
    pub domain: RegularGame,
    pub codomain: RegularGame,
    pub map: ChronMap,
    pub iso_at_depth: bool,
}

/// Builds the canonical map `⊔(G×G_j) → G×⊔G_j` and checks it up to `depth`.
pub fn extensivity_canonical(g: &RegularGame, games: &[RegularGame], depth: usize) -> Result<Distributivity> {
    let summands: Vec<RegularGame> =
        games.iter().map(|gj| product_regular(&[g.clone(), gj.clone()], Mode::A).0).collect();
    let domain = coproduct_regular(&summands);
    let codomain = product_regular(&[g.clone(), coproduct_regular(games)], Mode::A).0;
    let map = ChronMap::letterwise(|m| {
        let tag = m.component_tag().expect("tagged move");
        let parts = m.untagged().and_then(Move::parts).expect("tuple move");
        Move::tuple(vec![parts[0].clone(), Move::tagged(tag, parts[1].clone())])
    });
    let mut iso = true;
    for n in 0..=depth {
        let imgs: BTreeSet<Moment> = domain.level(n).iter().map(|t| map.apply(t)).collect();
        let target: BTreeSet<Moment> = codomain.level(n).into_iter().collect();
        iso &= imgs.len() == domain.level(n).len() && imgs == target;
    }
    let table = run_table(&map, &domain)?;
    let hit: BTreeSet<&Run> = table.values().collect();
    iso &= hit.len() == domain.len() && hit.len() == codomain.len();
    for (r, p) in domain.runs() {
        iso &= codomain.winner(&table[r]) == Some(p);
    }
    Ok(Distributivity { domain, codomain, map, iso_at_depth: iso })
}
