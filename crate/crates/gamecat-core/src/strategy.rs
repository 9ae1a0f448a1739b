//! Strategies as subgames and as mappings, winning checks, play and transport.
//!
//! A strategy for a player is a pruned subtree in which the player has exactly one
//! move at each of their turns and the opponent keeps every legal reply. The mapping
//! form records the chosen move at each of the player's turns instead.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{GameError, Result};
use crate::game::{truncate, Game, GameTree, Moment, Move, Player, RegularGame, DEFAULT_CAP};
use crate::morphism::{image_regular, preimage_regular, profile, unlifted_child, ChronMap};

/// True, false, or unknown beyond a checked depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Undecided { depth: usize },
}

impl Tri {
    pub fn from_bool(b: bool) -> Tri {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Tri::True
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tri::True => f.write_str("true"),
            Tri::False => f.write_str("false"),
            Tri::Undecided { depth } => write!(f, "undecided at depth {depth}"),
        }
    }
}

/// A strategy in subgame form.
#[derive(Clone, Debug)]
pub struct StrategySubgame {
    pub player: Player,
    pub tree: GameTree,
    /// The strategy's runs when the host is regular.
    pub regular: Option<RegularGame>,
}

impl StrategySubgame {
    /// A strategy given by a subset of the basis runs of a regular host.
    pub fn from_runs(player: Player, runs: RegularGame) -> StrategySubgame {
        StrategySubgame { player, tree: runs.tree(), regular: Some(runs) }
    }

    pub fn lazy(player: Player, tree: GameTree) -> StrategySubgame {
        StrategySubgame { player, tree, regular: None }
    }
}

/// Chooser oracle of a strategy mapping; `None` marks moments outside its domain.
pub type Chooser = Arc<dyn Fn(&[Move]) -> Option<Move> + Send + Sync>;

/// A strategy in mapping form: the chosen move at each of the player's turns in its domain.
#[derive(Clone)]
pub struct StrategyMapping {
    pub player: Player,
    pub choose: Chooser,
}

impl fmt::Debug for StrategyMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StrategyMapping").field("player", &self.player).finish()
    }
}

impl StrategyMapping {
    pub fn new(player: Player, choose: impl Fn(&[Move]) -> Option<Move> + Send + Sync + 'static) -> Self {
        StrategyMapping { player, choose: Arc::new(choose) }
    }

    pub fn choose(&self, t: &[Move]) -> Option<Move> {
        (self.choose)(t)
    }
}

/// A validation failure with the offending moment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invalid {
    pub witness: Moment,
    pub reason: String,
}

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.reason, self.witness)
    }
}

fn invalid(t: &[Move], reason: impl Into<String>) -> Invalid {
    Invalid { witness: Moment::from(t), reason: reason.into() }
}

/// The depth up to which checks on a host are complete: past the separation depth of a
/// regular host every moment has a single continuation.
fn effective_depth(host: &Game, depth: usize) -> usize {
    host.regular().map_or(depth, |r| depth.max(r.horizon() + 1))
}

/// Checks the strategy conditions on all moments of length < depth: nonempty, a
/// pruned subtree of the host, one move at each of the player's turns, and every
/// host reply at the opponent's turns.
pub fn validate(host: &Game, s: &StrategySubgame, depth: usize) -> core::result::Result<(), Invalid> {
    if s.tree.is_empty() {
        return Err(invalid(&[], "empty strategy"));
    }
    if host.is_empty() {
        return Err(invalid(&[], "strategy in the empty game"));
    }
    let depth = effective_depth(host, depth);
    let mut frontier = vec![Moment::root()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            let kids = s.tree.children(t);
            let host_kids = host.tree.children(t);
            if kids.is_empty() {
                return Err(invalid(t, "no continuation"));
            }
            if let Some(x) = kids.iter().find(|x| !host_kids.contains(x)) {
                return Err(invalid(t, format!("move {x} is not legal in the host")));
            }
            if t.to_move() == s.player {
                if kids.len() != 1 {
                    return Err(invalid(t, format!("{} moves for the strategy's player", kids.len())));
                }
            } else if let Some(y) = host_kids.iter().find(|y| !kids.contains(y)) {
                return Err(invalid(t, format!("reply {y} is not served")));
            }
            for x in kids {
                next.push(t.child(x));
            }
        }
        frontier = next;
    }
    Ok(())
}

/// Checks a strategy mapping: the root is served, chosen moves are legal, the domain is
/// closed under opponent replies, and the domain contains no moment unreachable by play.
pub fn validate_mapping(host: &Game, s: &StrategyMapping, depth: usize) -> core::result::Result<(), Invalid> {
    let depth = effective_depth(host, depth);
    let frag = truncate(&host.tree, depth.saturating_sub(1), DEFAULT_CAP)
        .map_err(|e| invalid(&[], format!("{e}")))?;
    let follows = |t: &[Move]| {
        (0..t.len()).all(|i| Player::to_move(i) != s.player || s.choose(&t[..i]).as_ref() == Some(&t[i]))
    };
    for t in &frag.moments {
        if t.to_move() != s.player {
            continue;
        }
        let reachable = follows(t);
        match (reachable, s.choose(t)) {
            (true, None) => return Err(invalid(t, "reachable turn without a chosen move")),
            (true, Some(x)) if !host.tree.children(t).contains(&x) => {
                return Err(invalid(t, format!("chosen move {x} is illegal")))
            }
            (false, Some(_)) => return Err(invalid(t, "domain is not minimal")),
            _ => {}
        }
    }
    Ok(())
}

/// The mapping form of a subgame strategy.
pub fn to_mapping(s: &StrategySubgame) -> StrategyMapping {
    let (tree, player) = (s.tree.clone(), s.player);
    StrategyMapping::new(player, move |t| {
        if Player::to_move(t.len()) != player || !tree.contains(t) {
            return None;
        }
        tree.children(t).into_iter().next()
    })
}

/// The subgame form of a strategy mapping: the player's chosen moves and every host reply.
pub fn to_subgame(host: &Game, s: &StrategyMapping) -> StrategySubgame {
    let (tree, map, player) = (host.tree.clone(), s.clone(), s.player);
    let lazy = GameTree::new(move |t| {
        if Player::to_move(t.len()) == player {
            map.choose(t).into_iter().collect()
        } else {
            tree.children(t)
        }
    });
    let regular = host.regular().map(|reg| {
        let m = s.clone();
        reg.restrict(|r| {
            (0..=reg.horizon() + 1)
                .filter(|&i| Player::to_move(i) == player)
                .all(|i| m.choose(&r.truncate(i)).as_ref() == Some(r.at(i)))
        })
    });
    StrategySubgame { player, tree: lazy, regular }
}

/// Converts a subgame strategy to a mapping after validating it.
pub fn convert_to_mapping(host: &Game, s: &StrategySubgame, depth: usize) -> core::result::Result<StrategyMapping, Invalid> {
    validate(host, s, depth)?;
    Ok(to_mapping(s))
}

/// Converts a mapping to a subgame strategy after validating it.
pub fn convert_to_subgame(host: &Game, s: &StrategyMapping, depth: usize) -> core::result::Result<StrategySubgame, Invalid> {
    validate_mapping(host, s, depth)?;
    Ok(to_subgame(host, s))
}

/// Whether every run of the strategy is won by its player. Undecided without run bases.
pub fn is_winning(host: &RegularGame, s: &StrategySubgame) -> Tri {
    match &s.regular {
        Some(runs) => Tri::from_bool(runs.runs().all(|(r, _)| host.winner(r) == Some(s.player))),
        None => Tri::Undecided { depth: host.horizon() + 1 },
    }
}

/// Keeps, inside a regular quasi-strategy, the least move at each of the player's turns
/// and every reply of the opponent.
pub fn select_strategy(sub: &RegularGame, player: Player) -> RegularGame {
    fn walk(sub: &RegularGame, player: Player, t: Moment, out: &mut BTreeMap<crate::game::Run, Player>) {
        let runs = sub.runs_through(&t).unwrap_or_default();
        if runs.len() == 1 {
            let r = runs.into_iter().next().expect("one run");
            let p = sub.winner(&r).expect("basis run");
            out.insert(r, p);
            return;
        }
        let kids = sub.children(&t);
        if t.to_move() == player {
            if let Some(x) = kids.into_iter().next() {
                walk(sub, player, t.child(x), out);
            }
        } else {
            for x in kids {
                walk(sub, player, t.child(x), out);
            }
        }
    }
    let mut out = BTreeMap::new();
    if !sub.is_empty() {
        walk(sub, player, Moment::root(), &mut out);
    }
    RegularGame::from_map(out)
}

/// Whether the player has a winning strategy in a regular game, by AND-OR search.
pub fn has_winning_strategy(g: &RegularGame, player: Player) -> bool {
    winning_strategy(g, player).is_some()
}

/// A winning strategy for the player in a regular game, if one exists.
pub fn winning_strategy(g: &RegularGame, player: Player) -> Option<RegularGame> {
    fn solve(g: &RegularGame, player: Player, t: Moment, out: &mut Vec<crate::game::Run>) -> bool {
        let runs = g.runs_through(&t).unwrap_or_default();
        if runs.len() == 1 {
            let r = &runs[0];
            if g.winner(r) == Some(player) {
                out.push(r.clone());
                return true;
            }
            return false;
        }
        let kids = g.children(&t);
        if t.to_move() == player {
            for x in kids {
                let mut sub = Vec::new();
                if solve(g, player, t.child(x), &mut sub) {
                    out.extend(sub);
                    return true;
                }
            }
            false
        } else {
            for x in kids {
                if !solve(g, player, t.child(x), out) {
                    return false;
                }
            }
            true
        }
    }
    if g.is_empty() {
        return None;
    }
    let mut runs = Vec::new();
    if solve(g, player, Moment::root(), &mut runs) {
        Some(g.restrict(|r| runs.contains(r)))
    } else {
        None
    }
}

/// Every strategy of the player in a regular game, as run subsets. Fails past `cap`.
pub fn enumerate_strategies(g: &RegularGame, player: Player, cap: usize) -> Result<Vec<RegularGame>> {
    fn expand(g: &RegularGame, player: Player, t: Moment, cap: usize) -> Result<Vec<Vec<crate::game::Run>>> {
        let runs = g.runs_through(&t)?;
        if runs.len() == 1 {
            return Ok(vec![runs]);
        }
        let kids = g.children(&t);
        if t.to_move() == player {
            let mut out = Vec::new();
            for x in kids {
                out.extend(expand(g, player, t.child(x), cap)?);
                if out.len() > cap {
                    return Err(GameError::Cap { cap, moment: t });
                }
            }
            Ok(out)
        } else {
            let mut acc: Vec<Vec<crate::game::Run>> = vec![Vec::new()];
            for x in kids {
                let options = expand(g, player, t.child(x), cap)?;
                let mut next = Vec::new();
                for a in &acc {
                    for o in &options {
                        let mut v = a.clone();
                        v.extend(o.iter().cloned());
                        next.push(v);
                        if next.len() > cap {
                            return Err(GameError::Cap { cap, moment: t.clone() });
                        }
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
    }
    if g.is_empty() {
        return Ok(Vec::new());
    }
    Ok(expand(g, player, Moment::root(), cap)?
        .into_iter()
        .map(|runs| g.restrict(|r| runs.contains(r)))
        .collect())
}

/// Who supplied a move during play.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Strategy,
    Driver,
}

/// One move of a play transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayStep {
    pub inning: usize,
    pub player: Player,
    pub mv: Move,
    pub source: Source,
}

/// A play record: the moment reached and how each move was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayRecord {
    pub moment: Moment,
    pub steps: Vec<PlayStep>,
    /// True when the driver stopped before the requested number of innings.
    pub aborted: bool,
}

/// Move source for turns without a strategy. Returning `None` aborts the play.
pub type Driver<'a> = &'a mut dyn FnMut(&Moment, Player, &[Move]) -> Option<Move>;

/// Plays up to `max_innings` innings. Strategies are consulted on their player's turns
/// and the driver on the others. An illegal driver move is rejected with the legal list.
pub fn play(
    g: &Game,
    alice: Option<&StrategyMapping>,
    bob: Option<&StrategyMapping>,
    driver: Driver<'_>,
    max_innings: usize,
) -> Result<PlayRecord> {
    let mut t = Moment::root();
    let mut steps = Vec::new();
    if g.is_empty() {
        return Ok(PlayRecord { moment: t, steps, aborted: max_innings > 0 });
    }
    while t.len() < 2 * max_innings {
        let player = t.to_move();
        let legal = g.tree.children(&t);
        let strat = match player {
            Player::Alice => alice,
            Player::Bob => bob,
        };
        let (mv, source) = match strat.and_then(|s| s.choose(&t)) {
            Some(x) => (x, Source::Strategy),
            None => match driver(&t, player, &legal) {
                Some(x) => (x, Source::Driver),
                None => return Ok(PlayRecord { moment: t, steps, aborted: true }),
            },
        };
        if !legal.contains(&mv) {
            let list: Vec<String> = legal.iter().map(Move::token).collect();
            return Err(GameError::rejected(format!(
                "illegal move {mv} at {t}; legal moves: {}",
                list.join(" ")
            )));
        }
        steps.push(PlayStep { inning: t.len() / 2, player, mv: mv.clone(), source });
        t = t.child(mv);
    }
    Ok(PlayRecord { moment: t, steps, aborted: false })
}

/// Which corollary a transport uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransportKind {
    /// An A-morphism carrying Alice's winning strategies forward, or pulling Bob's back.
    AMorphismAlice,
    /// A B-morphism carrying Bob's winning strategies forward, or pulling Alice's back.
    BMorphismBob,
}

fn require_kind(f: &ChronMap, g1: &Game, g2: &Game, kind: TransportKind, depth: usize) -> Result<()> {
    let p = profile(f, g1, g2, depth)?;
    let c = match kind {
        TransportKind::AMorphismAlice => &p.is_a,
        TransportKind::BMorphismBob => &p.is_b,
    };
    if !c.holds {
        return Err(GameError::rejected(format!(
            "map is not the required morphism kind; witness {}",
            c.witness.as_ref().map(|w| format!("{w}")).unwrap_or_default()
        )));
    }
    Ok(())
}

/// Transports a winning strategy forward along a locally surjective morphism.
///
/// The image of the strategy tree contains every opponent reply because `f` lifts
/// them. When `f` merges moments that the strategy answers differently, the image has
/// several moves at a player turn; the least one is kept.
pub fn transport(
    f: &ChronMap,
    g1: &Game,
    g2: &Game,
    s: &StrategySubgame,
    kind: TransportKind,
) -> Result<StrategySubgame> {
    let (r1, r2) = match (g1.regular(), g2.regular(), &s.regular) {
        (Some(a), Some(b), Some(_)) => (a, b),
        _ => return Err(GameError::unsupported("transport needs regular games and strategies")),
    };
    let depth = r1.horizon().max(r2.horizon()) + 2;
    require_kind(f, g1, g2, kind, depth)?;
    let want = match kind {
        TransportKind::AMorphismAlice => Player::Alice,
        TransportKind::BMorphismBob => Player::Bob,
    };
    if s.player != want {
        return Err(GameError::rejected("strategy player does not match the transport kind"));
    }
    let strat = s.regular.as_ref().expect("checked");
    for t in strat.moments_upto(depth) {
        if t.to_move() != s.player {
            if let Some(u) = unlifted_child(f, &g1.tree, &g2.tree, &t) {
                return Err(GameError::rejected(format!("not locally surjective at {t}: {u} does not lift")));
            }
        }
    }
    let image = image_regular(f, strat, g2)?;
    let out = StrategySubgame::from_runs(s.player, select_strategy(&image, s.player));
    validate(g2, &out, depth).map_err(|e| GameError::Integrity { probe: depth, reason: format!("{e}") })?;
    Ok(out)
}

/// Pulls a winning strategy back along a locally surjective morphism: a strategy
/// selected inside the pruned preimage of the strategy tree.
pub fn pullback_strategy(
    f: &ChronMap,
    g: &Game,
    g2: &Game,
    s: &StrategySubgame,
    kind: TransportKind,
) -> Result<StrategySubgame> {
    let (r1, r2) = match (g.regular(), g2.regular(), &s.regular) {
        (Some(a), Some(b), Some(_)) => (a, b),
        _ => return Err(GameError::unsupported("pullback needs regular games and strategies")),
    };
    let depth = r1.horizon().max(r2.horizon()) + 2;
    require_kind(f, g, g2, kind, depth)?;
    let want = match kind {
        TransportKind::AMorphismAlice => Player::Bob,
        TransportKind::BMorphismBob => Player::Alice,
    };
    if s.player != want {
        return Err(GameError::rejected("strategy player does not match the pullback kind"));
    }
    if let Some((t, u)) = crate::morphism::local_surjectivity_witness(f, &g.tree, &g2.tree, depth)? {
        return Err(GameError::rejected(format!("not locally surjective at {t}: {u} does not lift")));
    }
    let pre = preimage_regular(f, r1, s.regular.as_ref().expect("checked"))?;
    let out = StrategySubgame::from_runs(s.player, select_strategy(&pre, s.player));
    validate(g, &out, depth).map_err(|e| GameError::Integrity { probe: depth, reason: format!("{e}") })?;
    Ok(out)
}
