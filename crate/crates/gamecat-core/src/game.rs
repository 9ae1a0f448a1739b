//! Moments, lazy game trees, runs and payoffs.
//!
//! A [`GameTree`] is a children oracle over moments. A [`Game`] pairs it with a
//! payoff oracle on [`Run`] descriptors. The [`RegularGame`] fragment stores a
//! finite basis of eventually periodic runs; its tree is the set of all
//! truncations of basis runs, so every run of that tree is a basis run and
//! every quantifier over runs becomes a finite loop.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;
use core::str::FromStr;

use crate::error::{GameError, Result};

/// Default bound on the number of moments a single enumeration may visit.
pub const DEFAULT_CAP: usize = 100_000;

/// A distance code in ℕ ∪ {∞}. The metric value is `1/(code+1)`, and `Inf` means distance 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    Fin(usize),
    Inf,
}

impl Code {
    pub fn is_inf(self) -> bool {
        matches!(self, Code::Inf)
    }

    /// The finite value, if any.
    pub fn finite(self) -> Option<usize> {
        match self {
            Code::Fin(n) => Some(n),
            Code::Inf => None,
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Code::Fin(n) => write!(f, "{n}"),
            Code::Inf => f.write_str("∞"),
        }
    }
}

/// The two players. Alice moves at even lengths, Bob at odd lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }

    /// The player whose turn it is at a moment of the given length.
    pub fn to_move(len: usize) -> Player {
        if len % 2 == 0 {
            Player::Alice
        } else {
            Player::Bob
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Alice => "Alice",
            Player::Bob => "Bob",
        })
    }
}

/// Structural content of a move.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveRepr {
    /// A plain token.
    Atom(String),
    /// A move of the component named by the tag inside a disjoint union.
    Tagged(String, Move),
    /// Simultaneous moves on several boards.
    Tuple(Vec<Move>),
    /// A move guaranteed not to collide with any atom, such as a quit move.
    Fresh(String),
}

/// A move. Cloning is cheap and equality, order and hashing are structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Move(Arc<MoveRepr>);

impl Move {
    pub fn atom(token: impl Into<String>) -> Move {
        Move(Arc::new(MoveRepr::Atom(token.into())))
    }

    pub fn tagged(tag: impl Into<String>, inner: Move) -> Move {
        Move(Arc::new(MoveRepr::Tagged(tag.into(), inner)))
    }

    pub fn tuple(parts: Vec<Move>) -> Move {
        Move(Arc::new(MoveRepr::Tuple(parts)))
    }

    pub fn fresh(name: impl Into<String>) -> Move {
        Move(Arc::new(MoveRepr::Fresh(name.into())))
    }

    pub fn repr(&self) -> &MoveRepr {
        &self.0
    }

    /// The serialized token used in reports and graph labels.
    pub fn token(&self) -> String {
        self.to_string()
    }

    /// The disjoint-union tag, if this move lives in a coproduct component.
    pub fn component_tag(&self) -> Option<&str> {
        match &*self.0 {
            MoveRepr::Tagged(tag, _) => Some(tag),
            _ => None,
        }
    }

    /// The move inside a tagged move.
    pub fn untagged(&self) -> Option<&Move> {
        match &*self.0 {
            MoveRepr::Tagged(_, inner) => Some(inner),
            _ => None,
        }
    }

    /// The components of a tuple move.
    pub fn parts(&self) -> Option<&[Move]> {
        match &*self.0 {
            MoveRepr::Tuple(parts) => Some(parts),
            _ => None,
        }
    }

    pub fn is_fresh(&self) -> bool {
        matches!(&*self.0, MoveRepr::Fresh(_))
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            MoveRepr::Atom(s) | MoveRepr::Fresh(s) => f.write_str(s),
            MoveRepr::Tagged(tag, inner) => write!(f, "{tag}:{inner}"),
            MoveRepr::Tuple(parts) => {
                f.write_str("(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Shorthand for a list of atom moves.
pub fn atoms(tokens: &[&str]) -> Vec<Move> {
    tokens.iter().map(|t| Move::atom(*t)).collect()
}

/// A finite sequence of moves.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Moment(pub Vec<Move>);

impl Moment {
    pub fn root() -> Moment {
        Moment(Vec::new())
    }

    /// The truncation `t↾k`.
    pub fn truncated(&self, k: usize) -> Moment {
        Moment(self.0[..k.min(self.0.len())].to_vec())
    }

    /// The extension `t⌢⟨x⟩`.
    pub fn child(&self, x: Move) -> Moment {
        let mut v = self.0.clone();
        v.push(x);
        Moment(v)
    }

    pub fn to_move(&self) -> Player {
        Player::to_move(self.0.len())
    }

    pub fn into_vec(self) -> Vec<Move> {
        self.0
    }
}

impl Deref for Moment {
    type Target = [Move];
    fn deref(&self) -> &[Move] {
        &self.0
    }
}

impl From<Vec<Move>> for Moment {
    fn from(v: Vec<Move>) -> Self {
        Moment(v)
    }
}

impl From<&[Move]> for Moment {
    fn from(v: &[Move]) -> Self {
        Moment(v.to_vec())
    }
}

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("⟩")
    }
}

/// An eventually periodic infinite sequence of moves: `prefix⌢cycle⌢cycle⌢…`.
///
/// Descriptors are kept in normal form: the cycle is primitive and the prefix is as
/// short as possible, so equal sequences have identical descriptors. A run with a
/// one-move cycle is an eventually constant run.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Run {
    prefix: Vec<Move>,
    cycle: Vec<Move>,
}

fn primitive_root(cycle: &[Move]) -> Vec<Move> {
    let n = cycle.len();
    for d in 1..=n {
        if n % d == 0 && (0..n).all(|i| cycle[i] == cycle[i % d]) {
            return cycle[..d].to_vec();
        }
    }
    cycle.to_vec()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least common multiple of positive integers.
pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl Run {
    /// Builds the normal form of `prefix⌢cycle^ω`. Panics on an empty cycle.
    pub fn new(prefix: Vec<Move>, cycle: Vec<Move>) -> Run {
        assert!(!cycle.is_empty(), "a run needs a nonempty cycle");
        let mut prefix = prefix;
        let mut cycle = primitive_root(&cycle);
        while let Some(last) = prefix.last() {
            if *last != *cycle.last().expect("nonempty") {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Run { prefix, cycle }
    }

    /// The eventually constant run `prefix⌢⟨tail,tail,…⟩`.
    pub fn constant(prefix: Vec<Move>, tail: Move) -> Run {
        Run::new(prefix, vec![tail])
    }

    /// The run whose n-th move is `f(n)`, given that it is periodic with the given
    /// period from position `start` on.
    pub fn from_fn(start: usize, period: usize, f: impl Fn(usize) -> Move) -> Run {
        let prefix = (0..start).map(&f).collect();
        let cycle = (start..start + period.max(1)).map(&f).collect();
        Run::new(prefix, cycle)
    }

    pub fn prefix(&self) -> &[Move] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Move] {
        &self.cycle
    }

    /// The repeated move of an eventually constant run.
    pub fn tail(&self) -> Option<&Move> {
        if self.cycle.len() == 1 {
            self.cycle.first()
        } else {
            None
        }
    }

    /// Length of the normal-form prefix: from here on the run is periodic.
    pub fn stabilization(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// The move `R(n)`.
    pub fn at(&self, n: usize) -> &Move {
        if n < self.prefix.len() {
            &self.prefix[n]
        } else {
            &self.cycle[(n - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The moment `R↾n`.
    pub fn truncate(&self, n: usize) -> Moment {
        Moment((0..n).map(|i| self.at(i).clone()).collect())
    }

    /// Whether `t` is an initial segment of the run.
    pub fn extends(&self, t: &[Move]) -> bool {
        t.iter().enumerate().all(|(i, m)| self.at(i) == m)
    }

    /// The first index of disagreement, or `Inf` for equal runs.
    pub fn delta(&self, other: &Run) -> Code {
        let bound = self.prefix.len().max(other.prefix.len()) + lcm(self.period(), other.period());
        (0..bound)
            .find(|&n| self.at(n) != other.at(n))
            .map_or(Code::Inf, Code::Fin)
    }

    /// The run `⟨x⟩⌢R`.
    pub fn cons(&self, x: Move) -> Run {
        let mut p = vec![x];
        p.extend(self.prefix.iter().cloned());
        Run::new(p, self.cycle.clone())
    }

    /// Applies a move relabeling letterwise.
    pub fn map_moves(&self, f: impl Fn(&Move) -> Move) -> Run {
        Run::new(self.prefix.iter().map(&f).collect(), self.cycle.iter().map(&f).collect())
    }

    /// The run of tuples `(R_0(n), …, R_k(n))`.
    pub fn zip(runs: &[Run]) -> Run {
        let start = runs.iter().map(Run::stabilization).max().unwrap_or(0);
        let period = runs.iter().map(Run::period).fold(1, lcm);
        Run::from_fn(start, period, |n| Move::tuple(runs.iter().map(|r| r.at(n).clone()).collect()))
    }

    /// Splits a run of tuples into its component runs.
    pub fn unzip(&self, arity: usize) -> Option<Vec<Run>> {
        let mut out = Vec::with_capacity(arity);
        for i in 0..arity {
            let pick = |m: &Move| m.parts().and_then(|p| p.get(i)).cloned();
            let prefix: Option<Vec<Move>> = self.prefix.iter().map(pick).collect();
            let cycle: Option<Vec<Move>> = self.cycle.iter().map(pick).collect();
            out.push(Run::new(prefix?, cycle?));
        }
        Some(out)
    }

    /// A length that covers the prefix and two full cycles.
    pub fn horizon(&self) -> usize {
        self.prefix.len() + 2 * self.cycle.len()
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        for m in &self.prefix {
            write!(f, "{m},")?;
        }
        f.write_str("(")?;
        for (i, m) in self.cycle.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")^ω⟩")
    }
}

/// Lazy children oracle.
pub type Children = Arc<dyn Fn(&[Move]) -> Vec<Move> + Send + Sync>;

/// A pruned game tree given by its children oracle.
///
/// `None` represents the empty tree, which has no moments at all, not even ⟨⟩.
/// The oracle is only consulted on reachable moments.
#[derive(Clone)]
pub struct GameTree {
    children: Option<Children>,
    branching_bound: Option<usize>,
}

impl fmt::Debug for GameTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameTree")
            .field("empty", &self.is_empty())
            .field("branching_bound", &self.branching_bound)
            .finish()
    }
}

impl GameTree {
    pub fn new(children: impl Fn(&[Move]) -> Vec<Move> + Send + Sync + 'static) -> GameTree {
        GameTree { children: Some(Arc::new(children)), branching_bound: None }
    }

    pub fn from_arc(children: Children) -> GameTree {
        GameTree { children: Some(children), branching_bound: None }
    }

    pub fn empty() -> GameTree {
        GameTree { children: None, branching_bound: None }
    }

    pub fn with_branching_bound(mut self, bound: usize) -> GameTree {
        self.branching_bound = Some(bound);
        self
    }

    pub fn branching_bound(&self) -> Option<usize> {
        self.branching_bound
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_none()
    }

    pub fn oracle(&self) -> Option<&Children> {
        self.children.as_ref()
    }

    /// Legal moves at a reachable moment, in the tree's fixed order.
    pub fn children(&self, t: &[Move]) -> Vec<Move> {
        match &self.children {
            Some(c) => c(t),
            None => Vec::new(),
        }
    }

    /// Whether `t` is a moment of the tree.
    pub fn contains(&self, t: &[Move]) -> bool {
        if self.is_empty() {
            return false;
        }
        (0..t.len()).all(|i| self.children(&t[..i]).contains(&t[i]))
    }

    /// The first length at which a truncation of `r` leaves the tree, probing up to `depth`.
    pub fn run_violation(&self, r: &Run, depth: usize) -> Option<usize> {
        if self.is_empty() {
            return Some(0);
        }
        let mut t = Vec::new();
        for n in 0..depth {
            if !self.children(&t).contains(r.at(n)) {
                return Some(n + 1);
            }
            t.push(r.at(n).clone());
        }
        None
    }

    /// The moments of length exactly `n`, in depth-first order.
    pub fn level(&self, n: usize, cap: usize) -> Result<Vec<Moment>> {
        if self.is_empty() {
            return Ok(Vec::new());
        }
        let mut frontier = vec![Moment::root()];
        for _ in 0..n {
            let mut next = Vec::new();
            for t in &frontier {
                for x in self.children(t) {
                    next.push(t.child(x));
                    if next.len() > cap {
                        return Err(GameError::Cap { cap, moment: t.clone() });
                    }
                }
            }
            frontier = next;
        }
        Ok(frontier)
    }

    /// The subtree of moments all of whose moves satisfy the filter, as a children oracle.
    /// The caller guarantees the result is pruned.
    pub fn filter(&self, keep: impl Fn(&[Move], &Move) -> bool + Send + Sync + 'static) -> GameTree {
        let Some(c) = self.children.clone() else { return GameTree::empty() };
        GameTree::new(move |t| c(t).into_iter().filter(|x| keep(t, x)).collect())
    }
}

/// Payoff oracle: the winner of each run.
pub type Payoff = Arc<dyn Fn(&Run) -> Player + Send + Sync>;

/// An infinite game `(T, A)` with an optional exact run basis.
#[derive(Clone)]
pub struct Game {
    pub tree: GameTree,
    pub payoff: Payoff,
    regular: Option<RegularGame>,
}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game").field("tree", &self.tree).field("regular", &self.regular).finish()
    }
}

impl Game {
    pub fn new(tree: GameTree, payoff: impl Fn(&Run) -> Player + Send + Sync + 'static) -> Game {
        Game { tree, payoff: Arc::new(payoff), regular: None }
    }

    pub fn from_parts(tree: GameTree, payoff: Payoff) -> Game {
        Game { tree, payoff, regular: None }
    }

    /// The exact run basis, when the game lies in the regular fragment.
    pub fn regular(&self) -> Option<&RegularGame> {
        self.regular.as_ref()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    /// The payoff verdict on a run, after checking that the run belongs to the tree.
    pub fn evaluate(&self, r: &Run) -> Result<Player> {
        evaluate(self, r)
    }
}

/// Number of moves probed beyond a run's horizon when validating it against a lazy tree.
pub const RUN_PROBE: usize = 8;

/// The winner of `r` in `g`. Fails with the first offending truncation length
/// when `r` is not a run of the tree.
pub fn evaluate(g: &Game, r: &Run) -> Result<Player> {
    if let Some(reg) = &g.regular {
        return reg.winner(r).ok_or_else(|| GameError::NotARun {
            depth: reg.first_exit(r),
        });
    }
    if let Some(depth) = g.tree.run_violation(r, r.horizon() + RUN_PROBE * r.period()) {
        return Err(GameError::NotARun { depth });
    }
    Ok((g.payoff)(r))
}

/// The four games of the introductory examples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Canonical {
    Empty,
    Terminal,
    Generating,
    Cogenerating,
}

impl FromStr for Canonical {
    type Err = GameError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empty" => Ok(Canonical::Empty),
            "terminal" => Ok(Canonical::Terminal),
            "generating" => Ok(Canonical::Generating),
            "cogenerating" => Ok(Canonical::Cogenerating),
            other => Err(GameError::rejected(alloc::format!("unknown canonical game `{other}`"))),
        }
    }
}

/// The single move of the one-branch trees.
pub fn star() -> Move {
    Move::atom("*")
}

/// Builds one of the canonical games by name.
pub fn canonical(name: &str) -> Result<Game> {
    Ok(canonical_game(name.parse()?))
}

pub fn canonical_game(which: Canonical) -> Game {
    match which {
        Canonical::Empty => RegularGame::empty().game(),
        Canonical::Terminal => RegularGame::single(Run::constant(vec![], star()), Player::Alice).game(),
        Canonical::Generating => RegularGame::single(Run::constant(vec![], star()), Player::Bob).game(),
        Canonical::Cogenerating => cogenerating(),
    }
}

/// Strings of 1s followed by 0s, every run won by Alice. Children are listed as `[1, 0]`.
pub fn cogenerating() -> Game {
    let one = Move::atom("1");
    let zero = Move::atom("0");
    let tree = GameTree::new(move |t| {
        if t.iter().all(|m| *m == one) {
            vec![one.clone(), zero.clone()]
        } else {
            vec![zero.clone()]
        }
    })
    .with_branching_bound(2);
    Game::new(tree, |_| Player::Alice)
}

/// A materialized truncation `T↾n` with parent links in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFragment {
    pub moments: Vec<Moment>,
    pub parent: Vec<Option<usize>>,
}

impl TreeFragment {
    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    /// The moments of length exactly `k`.
    pub fn at_depth(&self, k: usize) -> impl Iterator<Item = &Moment> {
        self.moments.iter().filter(move |m| m.len() == k)
    }
}

/// All moments of length at most `n`, breadth first, each level in tree order.
pub fn truncate(tree: &GameTree, n: usize, cap: usize) -> Result<TreeFragment> {
    let mut out = TreeFragment { moments: Vec::new(), parent: Vec::new() };
    if tree.is_empty() {
        return Ok(out);
    }
    let mut queue = VecDeque::new();
    queue.push_back((Moment::root(), None));
    while let Some((t, parent)) = queue.pop_front() {
        if out.moments.len() >= cap {
            return Err(GameError::Cap { cap, moment: t });
        }
        let idx = out.moments.len();
        if t.len() < n {
            for x in tree.children(&t) {
                queue.push_back((t.child(x), Some(idx)));
            }
        }
        out.moments.push(t);
        out.parent.push(parent);
    }
    Ok(out)
}

/// First index of disagreement of two runs.
pub fn delta(r1: &Run, r2: &Run) -> Code {
    r1.delta(r2)
}

/// Restricts `g` to a subtree, checking inclusion and prunedness up to `check_depth`.
pub fn subgame(g: &Game, subtree: GameTree, check_depth: usize) -> Result<Game> {
    check_subtree(&g.tree, &subtree, check_depth)?;
    let mut out = Game::from_parts(subtree.clone(), g.payoff.clone());
    if let Some(reg) = &g.regular {
        // Past the separation depth a basis run is the only host continuation, so a
        // pruned subtree keeping the run that long keeps it forever.
        let sub = reg.restrict(|r| subtree.run_violation(r, reg.separation() + 1).is_none());
        out.regular = Some(sub);
        out.tree = subtree;
    }
    Ok(out)
}

/// Checks that `sub` is a pruned subtree of `host` on all moments of length ≤ depth.
pub fn check_subtree(host: &GameTree, sub: &GameTree, depth: usize) -> Result<()> {
    if sub.is_empty() {
        return Ok(());
    }
    if host.is_empty() {
        return Err(GameError::rejected("nonempty subtree of the empty tree"));
    }
    let mut frontier = vec![Moment::root()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in &frontier {
            let kids = sub.children(t);
            if kids.is_empty() {
                return Err(GameError::NotPruned { witness: t.clone() });
            }
            let host_kids = host.children(t);
            for x in kids {
                if !host_kids.contains(&x) {
                    return Err(GameError::rejected(alloc::format!(
                        "move {x} at {t} is not legal in the host tree"
                    )));
                }
                next.push(t.child(x));
            }
        }
        frontier = next;
    }
    Ok(())
}

/// The pruned subtree of moments from which `extendable` promises an infinite branch.
pub fn prune(
    candidate: &GameTree,
    extendable: impl Fn(&[Move]) -> bool + Send + Sync + 'static,
) -> GameTree {
    let Some(c) = candidate.oracle().cloned() else { return GameTree::empty() };
    if !extendable(&[]) {
        return GameTree::empty();
    }
    GameTree::new(move |t| {
        let mut s = t.to_vec();
        c(t).into_iter()
            .filter(|x| {
                s.push(x.clone());
                let ok = extendable(&s);
                s.pop();
                ok
            })
            .collect()
    })
}

/// The level-system view: level n is the set of moments of length n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSystem {
    pub levels: Vec<Vec<Moment>>,
}

impl LevelSystem {
    /// The truncation map `level(n) → level(m)` applied to one moment.
    pub fn trunc(&self, t: &Moment, m: usize) -> Moment {
        t.truncated(m)
    }

    /// Whether `trunc: level(n+1) → level(n)` is onto.
    pub fn trunc_surjective(&self, n: usize) -> bool {
        let (Some(lo), Some(hi)) = (self.levels.get(n), self.levels.get(n + 1)) else {
            return true;
        };
        let hit: BTreeSet<Moment> = hi.iter().map(|t| t.truncated(n)).collect();
        lo.iter().all(|t| hit.contains(t))
    }

    /// Rebuilds a children oracle from the levels. Moments at the last level have no
    /// recorded children, so the result agrees with the source tree below that level.
    pub fn to_tree(&self) -> GameTree {
        if self.levels.first().is_none_or(|l| l.is_empty()) {
            return GameTree::empty();
        }
        let mut kids: BTreeMap<Moment, Vec<Move>> = BTreeMap::new();
        for level in self.levels.iter().skip(1) {
            for t in level {
                let parent = t.truncated(t.len() - 1);
                let e = kids.entry(parent).or_default();
                let x = t[t.len() - 1].clone();
                if !e.contains(&x) {
                    e.push(x);
                }
            }
        }
        let kids = Arc::new(kids);
        GameTree::new(move |t| kids.get(&Moment::from(t)).cloned().unwrap_or_default())
    }
}

/// The levels `0..=depth` of a tree.
pub fn to_levels(tree: &GameTree, depth: usize, cap: usize) -> Result<LevelSystem> {
    if tree.is_empty() {
        return Ok(LevelSystem { levels: Vec::new() });
    }
    let mut levels = vec![vec![Moment::root()]];
    let mut seen = 1usize;
    for _ in 0..depth {
        let mut next = Vec::new();
        for t in levels.last().expect("nonempty") {
            for x in tree.children(t) {
                next.push(t.child(x));
            }
        }
        seen += next.len();
        if seen > cap {
            return Err(GameError::Cap { cap, moment: next.pop().unwrap_or_default() });
        }
        levels.push(next);
    }
    Ok(LevelSystem { levels })
}

/// A game in the regular fragment: a finite set of eventually periodic runs with winners.
///
/// The tree is the set of truncations of basis runs. A finite set of runs is closed in
/// the run topology, so this tree has no other runs. The empty basis is the empty game.
#[derive(Clone, PartialEq, Eq)]
pub struct RegularGame {
    runs: Arc<BTreeMap<Run, Player>>,
}

impl fmt::Debug for RegularGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.runs.iter().map(|(r, p)| (alloc::format!("{r}"), *p))).finish()
    }
}

impl RegularGame {
    /// Builds a regular game, rejecting a run listed with two different winners.
    pub fn new(runs: impl IntoIterator<Item = (Run, Player)>) -> Result<RegularGame> {
        let mut map = BTreeMap::new();
        for (r, p) in runs {
            if let Some(old) = map.insert(r.clone(), p) {
                if old != p {
                    return Err(GameError::rejected(alloc::format!("run {r} has two winners")));
                }
            }
        }
        Ok(RegularGame { runs: Arc::new(map) })
    }

    pub fn from_map(runs: BTreeMap<Run, Player>) -> RegularGame {
        RegularGame { runs: Arc::new(runs) }
    }

    pub fn empty() -> RegularGame {
        RegularGame { runs: Arc::new(BTreeMap::new()) }
    }

    pub fn single(r: Run, p: Player) -> RegularGame {
        let mut m = BTreeMap::new();
        m.insert(r, p);
        RegularGame::from_map(m)
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.runs.len()
    }

    /// Basis runs with winners, in normal-form order.
    pub fn runs(&self) -> impl Iterator<Item = (&Run, Player)> {
        self.runs.iter().map(|(r, p)| (r, *p))
    }

    pub fn basis(&self) -> Vec<Run> {
        self.runs.keys().cloned().collect()
    }

    pub fn map(&self) -> &BTreeMap<Run, Player> {
        &self.runs
    }

    pub fn winner(&self, r: &Run) -> Option<Player> {
        self.runs.get(r).copied()
    }

    /// Runs won by Alice, the payoff set A.
    pub fn alice_runs(&self) -> Vec<Run> {
        self.runs().filter(|(_, p)| *p == Player::Alice).map(|(r, _)| r.clone()).collect()
    }

    /// Length of the longest common prefix of a run with the basis, plus one.
    fn first_exit(&self, r: &Run) -> usize {
        let best = self
            .runs
            .keys()
            .map(|s| s.delta(r).finite().unwrap_or(usize::MAX))
            .max()
            .unwrap_or(0);
        best.saturating_add(1)
    }

    /// The least n such that distinct basis runs already differ before n.
    pub fn separation(&self) -> usize {
        let runs: Vec<&Run> = self.runs.keys().collect();
        let mut sep = 0;
        for i in 0..runs.len() {
            for j in i + 1..runs.len() {
                if let Code::Fin(d) = runs[i].delta(runs[j]) {
                    sep = sep.max(d + 1);
                }
            }
        }
        sep
    }

    /// The longest normal-form prefix among basis runs.
    pub fn stabilization(&self) -> usize {
        self.runs.keys().map(Run::stabilization).max().unwrap_or(0)
    }

    /// The least common multiple of the basis periods.
    pub fn period(&self) -> usize {
        self.runs.keys().map(Run::period).fold(1, lcm)
    }

    /// A depth past which every moment determines its run and every run is periodic.
    pub fn horizon(&self) -> usize {
        self.separation().max(self.stabilization())
    }

    pub fn contains(&self, t: &[Move]) -> bool {
        self.runs.keys().any(|r| r.extends(t))
    }

    /// The basis runs through `t`.
    pub fn runs_through(&self, t: &[Move]) -> Result<Vec<Run>> {
        let out: Vec<Run> = self.runs.keys().filter(|r| r.extends(t)).cloned().collect();
        if out.is_empty() {
            return Err(GameError::Unreachable { moment: Moment::from(t) });
        }
        Ok(out)
    }

    pub fn children(&self, t: &[Move]) -> Vec<Move> {
        let set: BTreeSet<Move> =
            self.runs.keys().filter(|r| r.extends(t)).map(|r| r.at(t.len()).clone()).collect();
        set.into_iter().collect()
    }

    /// The moments of length n, sorted.
    pub fn level(&self, n: usize) -> Vec<Moment> {
        let set: BTreeSet<Moment> = self.runs.keys().map(|r| r.truncate(n)).collect();
        set.into_iter().collect()
    }

    /// All moments of length at most n, sorted by length then order.
    pub fn moments_upto(&self, n: usize) -> Vec<Moment> {
        (0..=n).flat_map(|k| self.level(k)).collect()
    }

    pub fn tree(&self) -> GameTree {
        if self.is_empty() {
            return GameTree::empty();
        }
        let me = self.clone();
        let bound = (0..=self.horizon()).map(|n| self.level(n).len()).max().unwrap_or(1);
        GameTree::new(move |t| me.children(t)).with_branching_bound(bound)
    }

    /// The lazy game with this basis attached. Runs outside the basis are reported as Bob's.
    pub fn game(&self) -> Game {
        let me = self.clone();
        let mut g = Game::new(self.tree(), move |r| me.winner(r).unwrap_or(Player::Bob));
        g.regular = Some(self.clone());
        g
    }

    /// The subgame on the basis runs satisfying `keep`.
    pub fn restrict(&self, keep: impl Fn(&Run) -> bool) -> RegularGame {
        RegularGame::from_map(self.runs.iter().filter(|(r, _)| keep(r)).map(|(r, p)| (r.clone(), *p)).collect())
    }

    /// The same tree with a new payoff.
    pub fn with_payoff(&self, winner: impl Fn(&Run) -> Player) -> RegularGame {
        RegularGame::from_map(self.runs.keys().map(|r| (r.clone(), winner(r))).collect())
    }

    /// The regular subgame of a lazy game formed by its runs with prefix length at most
    /// `max_stab` and period at most `max_period`. Repetition of the cycle is checked up
    /// to `probe` moves.
    pub fn from_game(g: &Game, max_stab: usize, max_period: usize, probe: usize, cap: usize) -> Result<RegularGame> {
        if let Some(reg) = &g.regular {
            return Ok(reg.restrict(|r| r.stabilization() <= max_stab && r.period() <= max_period));
        }
        if g.tree.is_empty() {
            return Ok(RegularGame::empty());
        }
        let mut found = BTreeMap::new();
        let mut stack = vec![Moment::root()];
        let mut visited = 0usize;
        while let Some(w) = stack.pop() {
            visited += 1;
            if visited > cap {
                return Err(GameError::Cap { cap, moment: w });
            }
            for s in 0..=w.len().min(max_stab) {
                let q = w.len() - s;
                if q == 0 || q > max_period {
                    continue;
                }
                let r = Run::new(w[..s].to_vec(), w[s..].to_vec());
                if found.contains_key(&r) {
                    continue;
                }
                let depth = probe.max(r.horizon() + RUN_PROBE * r.period());
                if g.tree.run_violation(&r, depth).is_none() {
                    let p = (g.payoff)(&r);
                    found.insert(r, p);
                }
            }
            if w.len() < max_stab + max_period {
                for x in g.tree.children(&w).into_iter().rev() {
                    stack.push(w.child(x));
                }
            }
        }
        Ok(RegularGame::from_map(found))
    }

    /// Replaces moves letterwise, keeping winners.
    pub fn relabel(&self, f: impl Fn(&Move) -> Move) -> RegularGame {
        RegularGame::from_map(self.runs.iter().map(|(r, p)| (r.map_moves(&f), *p)).collect())
    }
}

/// The basis runs of a regular game through `t`.
pub fn runs_through(g: &RegularGame, t: &[Move]) -> Result<Vec<Run>> {
    g.runs_through(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(s: &str) -> Move {
        Move::atom(s)
    }

    #[test]
    fn normal_form_is_unique() {
        let a = Run::new(atoms(&["0", "1", "1"]), atoms(&["1"]));
        let b = Run::new(atoms(&["0"]), atoms(&["1", "1"]));
        assert_eq!(a, b);
        assert_eq!(a.prefix(), &atoms(&["0"])[..]);
        let c = Run::new(atoms(&["a", "b", "a"]), atoms(&["b", "a"]));
        assert_eq!(c, Run::new(vec![], atoms(&["a", "b"])));
    }

    #[test]
    fn delta_examples() {
        let r = Run::constant(vec![], m("0"));
        let s = Run::constant(atoms(&["0"]), m("1"));
        assert_eq!(r.delta(&s), Code::Fin(1));
        assert_eq!(r.delta(&r), Code::Inf);
        let p = Run::new(vec![], atoms(&["a", "b"]));
        let q = Run::new(atoms(&["a", "b", "a"]), atoms(&["c"]));
        assert_eq!(p.delta(&q), Code::Fin(3));
    }

    #[test]
    fn canonical_games() {
        let all_star = Run::constant(vec![], star());
        assert_eq!(canonical("terminal").unwrap().evaluate(&all_star).unwrap(), Player::Alice);
        assert_eq!(canonical("generating").unwrap().evaluate(&all_star).unwrap(), Player::Bob);
        let cog = canonical("cogenerating").unwrap();
        assert_eq!(cog.tree.children(&atoms(&["1"])), atoms(&["1", "0"]));
        assert!(canonical("nope").is_err());
        assert!(canonical("empty").unwrap().is_empty());
    }

    #[test]
    fn truncations() {
        let gen = canonical("generating").unwrap();
        assert_eq!(truncate(&gen.tree, 2, DEFAULT_CAP).unwrap().len(), 3);
        let cog = cogenerating();
        assert_eq!(truncate(&cog.tree, 2, DEFAULT_CAP).unwrap().len(), 6);
        assert!(matches!(truncate(&cog.tree, 20, 10), Err(GameError::Cap { .. })));
    }

    #[test]
    fn levels_of_cogenerating() {
        let ls = to_levels(&cogenerating().tree, 5, DEFAULT_CAP).unwrap();
        for n in 0..=5 {
            assert_eq!(ls.levels[n].len(), n + 1);
        }
        for n in 0..5 {
            assert!(ls.trunc_surjective(n));
        }
        let back = to_levels(&ls.to_tree(), 4, DEFAULT_CAP).unwrap();
        for n in 0..=4 {
            assert_eq!(back.levels[n], ls.levels[n]);
        }
    }

    #[test]
    fn regular_subgame_of_cogenerating() {
        let reg = RegularGame::from_game(&cogenerating(), 2, 1, 12, DEFAULT_CAP).unwrap();
        let want: Vec<Run> = vec![
            Run::constant(vec![], m("0")),
            Run::constant(vec![], m("1")),
            Run::constant(atoms(&["1"]), m("0")),
            Run::constant(atoms(&["1", "1"]), m("0")),
        ];
        let mut want = want;
        want.sort();
        assert_eq!(reg.basis(), want);
        assert_eq!(runs_through(&reg, &atoms(&["1", "1"])).unwrap().len(), 2);
        assert!(runs_through(&reg, &atoms(&["0", "1"])).is_err());
    }

    #[test]
    fn evaluate_rejects_foreign_runs() {
        let cog = cogenerating();
        let bad = Run::constant(atoms(&["0"]), m("1"));
        assert_eq!(cog.evaluate(&bad), Err(GameError::NotARun { depth: 2 }));
    }

    #[test]
    fn prune_removes_dead_ends() {
        // Candidate: {⟨⟩, ⟨0⟩} ∪ ⟨1⟩⌢1*. The moment ⟨0⟩ has no continuation.
        let one = m("1");
        let cand = GameTree::new(move |t| {
            if t.is_empty() {
                atoms(&["0", "1"])
            } else if t[0] == one {
                vec![one.clone()]
            } else {
                vec![]
            }
        });
        let pruned = prune(&cand, |t| t.first().is_none_or(|x| x.token() == "1"));
        assert_eq!(pruned.children(&[]), atoms(&["1"]));
        let again = prune(&pruned, |t| t.first().is_none_or(|x| x.token() == "1"));
        assert_eq!(truncate(&again, 4, 100).unwrap(), truncate(&pruned, 4, 100).unwrap());
    }

    #[test]
    fn subgame_of_cogenerating_branch() {
        let cog = cogenerating();
        let branch = GameTree::new(|_| atoms(&["1"]));
        let sub = subgame(&cog, branch, 6).unwrap();
        assert_eq!(sub.evaluate(&Run::constant(vec![], m("1"))).unwrap(), Player::Alice);
        let bad = GameTree::new(|_| atoms(&["2"]));
        assert!(subgame(&cog, bad, 3).is_err());
    }
}
