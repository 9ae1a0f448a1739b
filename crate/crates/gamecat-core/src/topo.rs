//! Finite topological spaces and their topological games.
//!
//! A space has at most 64 points and a point set is a bitmask. Games over a finite
//! space are regular: their runs are sampled by a declared number of prefix innings
//! and cycle innings, and payoffs are decided on the periodic tail, because the
//! values met infinitely often along an eventually periodic run are exactly the
//! values in its cycle.
//!
//! Function spaces `C_p(X)` are replaced by finite families of rational functions.
//! In a finite family every subset is closed, so the condition that the zero
//! function lies in the closure of a set of functions becomes membership.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::combinators::limits::{d_b_map, d_b_regular};
use crate::error::{GameError, Result};
use crate::game::{lcm, Moment, Move, MoveRepr, Player, RegularGame, Run, DEFAULT_CAP};
use crate::metric::{krom_space, RunSpace};
use crate::morphism::{check_chronological, ChronMap};

/// A set of points of a finite space, one bit per point.
pub type Set = u64;

/// Rational values of sampled real functions.
pub type Q = Ratio<i64>;

pub const MAX_POINTS: usize = 64;

/// Spaces with more points than this are not expanded into all subsets.
const MAX_SUBSET_POINTS: usize = 20;

/// Discrete spaces list every subset as an open, and validation is quadratic in that.
const MAX_DISCRETE_POINTS: usize = 10;

fn full_mask(n: usize) -> Set {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn bits(s: Set) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| s >> i & 1 == 1)
}

fn subsets_of(s: Set) -> Vec<Set> {
    let mut out = Vec::new();
    let mut sub = s;
    loop {
        out.push(sub);
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & s;
    }
    out.reverse();
    out
}

fn reserved(c: char) -> bool {
    ",{}[]<>=()".contains(c) || c.is_whitespace()
}

/// A finite topological space: a point list and its open sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinSpace {
    points: Vec<String>,
    opens: Vec<Set>,
}

/// Builds a space after checking that `∅` and the whole set are open and that the
/// opens are closed under binary union and intersection. Opens are kept sorted by
/// size, then by mask.
pub fn fin_space(points: Vec<String>, opens: Vec<Set>) -> Result<FinSpace> {
    let n = points.len();
    if n > MAX_POINTS {
        return Err(GameError::rejected(format!("{n} points exceed the limit of {MAX_POINTS}")));
    }
    let mut seen = BTreeSet::new();
    for p in &points {
        if p.is_empty() || p.chars().any(reserved) {
            return Err(GameError::rejected(format!("point name {p:?} is empty or uses a reserved character")));
        }
        if !seen.insert(p.as_str()) {
            return Err(GameError::rejected(format!("point {p} is listed twice")));
        }
    }
    let full = full_mask(n);
    let set: BTreeSet<Set> = opens.iter().copied().collect();
    let label = |s: Set| set_label(&points, s);
    if let Some(o) = set.iter().find(|o| **o & !full != 0) {
        return Err(GameError::rejected(format!("open mask {o:#b} names a point outside the space")));
    }
    if !set.contains(&0) {
        return Err(GameError::rejected("the empty set is not open"));
    }
    if !set.contains(&full) {
        return Err(GameError::rejected(format!("the whole space {} is not open", label(full))));
    }
    for &a in &set {
        for &b in &set {
            if !set.contains(&(a | b)) {
                return Err(GameError::rejected(format!(
                    "missing union: {} ∪ {} = {} is not open",
                    label(a),
                    label(b),
                    label(a | b)
                )));
            }
            if !set.contains(&(a & b)) {
                return Err(GameError::rejected(format!(
                    "missing intersection: {} ∩ {} = {} is not open",
                    label(a),
                    label(b),
                    label(a & b)
                )));
            }
        }
    }
    let mut opens: Vec<Set> = set.into_iter().collect();
    opens.sort_by_key(|o| (o.count_ones(), *o));
    Ok(FinSpace { points, opens })
}

fn set_label(points: &[String], s: Set) -> String {
    let names: Vec<&str> = bits(s).filter(|&i| i < points.len()).map(|i| points[i].as_str()).collect();
    format!("{{{}}}", names.join(","))
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

impl FinSpace {
    /// The discrete space: every subset is open.
    pub fn discrete(points: Vec<String>) -> Result<FinSpace> {
        if points.len() > MAX_DISCRETE_POINTS {
            return Err(GameError::rejected(format!("a discrete space is limited to {MAX_DISCRETE_POINTS} points")));
        }
        let opens = subsets_of(full_mask(points.len()));
        fin_space(points, opens)
    }

    /// The indiscrete space: only `∅` and the whole set are open.
    pub fn indiscrete(points: Vec<String>) -> Result<FinSpace> {
        let full = full_mask(points.len());
        fin_space(points, vec![0, full])
    }

    /// The Sierpiński space on `{a, b}` with opens `∅, {a}, {a,b}`.
    pub fn sierpinski() -> FinSpace {
        fin_space(vec!["a".to_string(), "b".to_string()], vec![0, 1, 3]).expect("valid")
    }

    /// The discrete space on points `p0, …, p(n-1)`.
    pub fn discrete_n(n: usize) -> Result<FinSpace> {
        FinSpace::discrete(names("p", n))
    }

    /// The one-point space `{p}`.
    pub fn point() -> FinSpace {
        fin_space(vec!["p".to_string()], vec![0, 1]).expect("valid")
    }

    pub fn empty() -> FinSpace {
        FinSpace { points: Vec::new(), opens: vec![0] }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn point_name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.points.iter().position(|p| p == name)
    }

    pub fn opens(&self) -> &[Set] {
        &self.opens
    }

    /// The nonempty opens, in canonical order.
    pub fn nonempty_opens(&self) -> Vec<Set> {
        self.opens.iter().copied().filter(|o| *o != 0).collect()
    }

    pub fn full(&self) -> Set {
        full_mask(self.len())
    }

    pub fn is_open(&self, s: Set) -> bool {
        self.opens.binary_search_by_key(&(s.count_ones(), s), |o| (o.count_ones(), *o)).is_ok()
    }

    /// The set written as `{a,b}`.
    pub fn label(&self, s: Set) -> String {
        set_label(&self.points, s)
    }

    /// The set of the named points.
    pub fn set_of(&self, names: &[&str]) -> Result<Set> {
        names.iter().try_fold(0, |acc, n| {
            let i = self.index_of(n).ok_or_else(|| GameError::rejected(format!("unknown point {n}")))?;
            Ok(acc | 1 << i)
        })
    }

    /// Parses a set written as `{a,b}`.
    pub fn parse_set(&self, token: &str) -> Option<Set> {
        let inner = token.strip_prefix('{')?.strip_suffix('}')?;
        if inner.is_empty() {
            return Some(0);
        }
        inner.split(',').try_fold(0, |acc, n| Some(acc | 1 << self.index_of(n)?))
    }

    /// The closure: the complement of the largest open disjoint from `s`.
    pub fn closure(&self, s: Set) -> Set {
        let outside = self.opens.iter().filter(|o| *o & s == 0).fold(0, |acc, o| acc | o);
        self.full() & !outside
    }

    /// The least open containing the point.
    pub fn neighborhood(&self, p: usize) -> Set {
        self.opens.iter().filter(|o| *o >> p & 1 == 1).fold(self.full(), |acc, o| acc & o)
    }

    /// Reads the text format: a line `points: a b c` and a line `opens: 0 1 3 7` with
    /// each open as a bitmask in decimal or `0b` binary, bit `i` for the `i`-th point.
    pub fn parse(text: &str) -> Result<FinSpace> {
        let mut points = None;
        let mut opens = None;
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            if let Some(rest) = line.strip_prefix("points:") {
                points = Some(rest.split_whitespace().map(String::from).collect::<Vec<_>>());
            } else if let Some(rest) = line.strip_prefix("opens:") {
                let masks = rest
                    .split_whitespace()
                    .map(|w| {
                        let parsed = match w.strip_prefix("0b") {
                            Some(b) => u64::from_str_radix(b, 2),
                            None => w.parse(),
                        };
                        parsed.map_err(|_| GameError::rejected(format!("bad open mask {w:?}")))
                    })
                    .collect::<Result<Vec<Set>>>()?;
                opens = Some(masks);
            } else {
                return Err(GameError::rejected(format!("unrecognized line {line:?}")));
            }
        }
        let points = points.ok_or_else(|| GameError::rejected("missing `points:` line"))?;
        let opens = opens.ok_or_else(|| GameError::rejected("missing `opens:` line"))?;
        fin_space(points, opens)
    }
}

impl fmt::Display for FinSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "points: {}", self.points.join(" "))?;
        let masks: Vec<String> = self.opens.iter().map(|o| o.to_string()).collect();
        writeln!(f, "opens: {}", masks.join(" "))
    }
}

/// A space with a distinguished base point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedFinSpace {
    pub space: FinSpace,
    pub base: usize,
}

impl PointedFinSpace {
    pub fn new(space: FinSpace, base: usize) -> Result<PointedFinSpace> {
        if base >= space.len() {
            return Err(GameError::rejected(format!("base point {base} is not a point of the space")));
        }
        Ok(PointedFinSpace { space, base })
    }
}

/// A function between the point sets of two finite spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMap {
    pub dom: FinSpace,
    pub cod: FinSpace,
    /// Image index of each domain point.
    pub images: Vec<usize>,
}

impl SpaceMap {
    pub fn new(dom: FinSpace, cod: FinSpace, images: Vec<usize>) -> Result<SpaceMap> {
        if images.len() != dom.len() {
            return Err(GameError::rejected(format!("{} images for {} points", images.len(), dom.len())));
        }
        if let Some(i) = images.iter().position(|&y| y >= cod.len()) {
            return Err(GameError::rejected(format!("point {} has no image in the codomain", dom.point_name(i))));
        }
        Ok(SpaceMap { dom, cod, images })
    }

    pub fn identity(x: &FinSpace) -> SpaceMap {
        SpaceMap { dom: x.clone(), cod: x.clone(), images: (0..x.len()).collect() }
    }

    /// The constant map onto a point.
    pub fn constant(dom: &FinSpace, cod: &FinSpace, y: usize) -> Result<SpaceMap> {
        SpaceMap::new(dom.clone(), cod.clone(), vec![y; dom.len()])
    }

    pub fn image(&self, s: Set) -> Set {
        bits(s).fold(0, |acc, i| acc | 1 << self.images[i])
    }

    pub fn preimage(&self, s: Set) -> Set {
        (0..self.dom.len()).filter(|&i| s >> self.images[i] & 1 == 1).fold(0, |acc, i| acc | 1 << i)
    }

    /// An open of the codomain whose preimage is not open.
    pub fn continuity_witness(&self) -> Option<Set> {
        self.cod.opens().iter().copied().find(|&v| !self.dom.is_open(self.preimage(v)))
    }

    /// An open of the domain whose image is not open.
    pub fn openness_witness(&self) -> Option<Set> {
        self.dom.opens().iter().copied().find(|&u| !self.cod.is_open(self.image(u)))
    }

    /// The composite `g∘self`.
    pub fn then(&self, g: &SpaceMap) -> Result<SpaceMap> {
        if self.cod != g.dom {
            return Err(GameError::rejected("maps do not compose"));
        }
        SpaceMap::new(self.dom.clone(), g.cod.clone(), self.images.iter().map(|&y| g.images[y]).collect())
    }

    fn require_continuous(&self) -> Result<()> {
        match self.continuity_witness() {
            Some(v) => Err(GameError::rejected(format!(
                "not continuous: the preimage of the open {} is {}, which is not open",
                self.cod.label(v),
                self.dom.label(self.preimage(v))
            ))),
            None => Ok(()),
        }
    }

    fn require_open(&self) -> Result<()> {
        match self.openness_witness() {
            Some(u) => Err(GameError::rejected(format!(
                "not open: the image of the open {} is {}, which is not open",
                self.dom.label(u),
                self.cod.label(self.image(u))
            ))),
            None => Ok(()),
        }
    }
}

/// A rational-valued function on the points of a finite space.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFn {
    pub values: Vec<Q>,
}

impl RationalFn {
    pub fn new(values: Vec<Q>) -> RationalFn {
        RationalFn { values }
    }

    pub fn zero(n: usize) -> RationalFn {
        RationalFn { values: vec![Q::from_integer(0); n] }
    }

    pub fn constant(n: usize, v: Q) -> RationalFn {
        RationalFn { values: vec![v; n] }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Q::from_integer(0))
    }

    /// `φ⁻¹(I_n)` with `I_n = (−1/(n+1), 1/(n+1))`.
    pub fn preimage(&self, n: usize) -> Set {
        let bound = Q::new(1, n as i64 + 1);
        self.values.iter().enumerate().filter(|(_, v)| abs(v) < bound).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn zero_set(&self) -> Set {
        self.values.iter().enumerate().filter(|(_, v)| **v == Q::from_integer(0)).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// The least `N` with `φ⁻¹(I_n)` equal to the zero set for every `n ≥ N`.
    pub fn stable_index(&self) -> usize {
        self.values
            .iter()
            .filter(|v| **v != Q::from_integer(0))
            .map(|v| {
                let inv = abs(v).recip();
                (inv.ceil().to_integer() - 1).max(0) as usize
            })
            .max()
            .unwrap_or(0)
    }

    /// The pullback `φ∘f` along a map into the function's space.
    pub fn pullback(&self, f: &SpaceMap) -> RationalFn {
        RationalFn { values: f.images.iter().map(|&y| self.values[y]).collect() }
    }

    /// The function written as `<a=1/2,b=0>`.
    pub fn token(&self, x: &FinSpace) -> String {
        let parts: Vec<String> =
            self.values.iter().enumerate().map(|(i, v)| format!("{}={}", x.point_name(i), v)).collect();
        format!("<{}>", parts.join(","))
    }
}

/// A finite family of continuous rational functions standing in for `C_p(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionFamily {
    space: FinSpace,
    fns: Vec<RationalFn>,
}

impl FunctionFamily {
    /// Validates lengths and continuity and requires the zero function. Duplicates are
    /// dropped and the order is canonical.
    pub fn new(space: FinSpace, fns: Vec<RationalFn>) -> Result<FunctionFamily> {
        let mut set = BTreeSet::new();
        for f in fns {
            if f.values.len() != space.len() {
                return Err(GameError::rejected(format!(
                    "a function has {} values on a space of {} points",
                    f.values.len(),
                    space.len()
                )));
            }
            let values: BTreeSet<&Q> = f.values.iter().collect();
            for v in values {
                let fibre =
                    f.values.iter().enumerate().filter(|(_, w)| *w == v).fold(0, |acc, (i, _)| acc | 1 << i);
                if !space.is_open(fibre) {
                    return Err(GameError::rejected(format!(
                        "{} is not continuous: its fibre {} over {v} is not open",
                        f.token(&space),
                        space.label(fibre)
                    )));
                }
            }
            set.insert(f);
        }
        if !set.iter().any(RationalFn::is_zero) {
            return Err(GameError::rejected("the family lacks the zero function"));
        }
        Ok(FunctionFamily { space, fns: set.into_iter().collect() })
    }

    pub fn space(&self) -> &FinSpace {
        &self.space
    }

    pub fn functions(&self) -> &[RationalFn] {
        &self.fns
    }

    pub fn zero_index(&self) -> usize {
        self.fns.iter().position(RationalFn::is_zero).expect("validated")
    }

    pub fn index_of(&self, f: &RationalFn) -> Option<usize> {
        self.fns.iter().position(|g| g == f)
    }

    /// The family `{φ∘f}` on the domain of `f`.
    pub fn pullback(&self, f: &SpaceMap) -> Result<FunctionFamily> {
        if f.cod != self.space {
            return Err(GameError::rejected("the map does not land in the family's space"));
        }
        FunctionFamily::new(f.dom.clone(), self.fns.iter().map(|g| g.pullback(f)).collect())
    }

    /// Reads one function per nonempty line, each a whitespace-separated list of
    /// rationals `n` or `n/d`, one per point.
    pub fn parse(space: FinSpace, text: &str) -> Result<FunctionFamily> {
        let fns = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                l.split_whitespace()
                    .map(|w| w.parse::<Q>().map_err(|_| GameError::rejected(format!("bad rational {w:?}"))))
                    .collect::<Result<Vec<Q>>>()
                    .map(RationalFn::new)
            })
            .collect::<Result<Vec<_>>>()?;
        FunctionFamily::new(space, fns)
    }
}

fn abs(v: &Q) -> Q {
    if *v < Q::from_integer(0) {
        -*v
    } else {
        *v
    }
}

fn atom(s: String) -> Move {
    Move::atom(s)
}

fn atom_text(m: &Move) -> Option<&str> {
    match m.repr() {
        MoveRepr::Atom(s) => Some(s),
        _ => None,
    }
}

/// The move naming a point set.
pub fn set_move(x: &FinSpace, s: Set) -> Move {
    atom(x.label(s))
}

/// The move naming a family of open sets, written `[{a},{a,b}]` in canonical order.
pub fn family_move(x: &FinSpace, family: &[Set]) -> Move {
    let mut fam: Vec<Set> = family.to_vec();
    fam.sort_by_key(|o| (o.count_ones(), *o));
    fam.dedup();
    let parts: Vec<String> = fam.iter().map(|s| x.label(*s)).collect();
    atom(format!("[{}]", parts.join(",")))
}

/// Parses a family move back into its sets.
pub fn parse_family(x: &FinSpace, token: &str) -> Option<Vec<Set>> {
    let inner = token.strip_prefix('[')?.strip_suffix(']')?;
    let mut out = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let end = rest.find('}')?;
        out.push(x.parse_set(&rest[..=end])?);
        rest = rest[end + 1..].strip_prefix(',').unwrap_or(&rest[end + 1..]);
    }
    Some(out)
}

/// Whether an open family is an ω-cover: some member contains every finite subset of
/// the space. For a finite space this means some member is the whole space.
pub fn is_omega_cover(x: &FinSpace, family: &[Set]) -> bool {
    family.iter().any(|u| u & x.full() == x.full())
}

/// An open family, or an eventually periodic sequence of opens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpenInput {
    /// A family, read as the sequence that lists each member infinitely often.
    Family(Vec<Set>),
    Sequence { prefix: Vec<Set>, cycle: Vec<Set> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverVerdict {
    pub omega: bool,
    pub gamma: bool,
}

/// Decides the ω-cover and γ-cover properties. Every infinite selection of an
/// eventually periodic sequence meets some cycle value infinitely often, and the
/// selection of a single cycle value's positions is infinite, so the sequence is a
/// γ-cover exactly when each cycle value is an ω-cover on its own.
pub fn cover_predicates(x: &FinSpace, u: &OpenInput) -> Result<CoverVerdict> {
    let (all, tail): (Vec<Set>, Vec<Set>) = match u {
        OpenInput::Family(f) => (f.clone(), f.clone()),
        OpenInput::Sequence { prefix, cycle } => {
            if cycle.is_empty() {
                return Err(GameError::rejected("a sequence needs a nonempty cycle"));
            }
            (prefix.iter().chain(cycle).copied().collect(), cycle.clone())
        }
    };
    if let Some(v) = all.iter().find(|v| !x.is_open(**v)) {
        return Err(GameError::rejected(format!("{} is not open", x.label(*v))));
    }
    Ok(CoverVerdict {
        omega: is_omega_cover(x, &all),
        gamma: !tail.is_empty() && tail.iter().all(|v| is_omega_cover(x, &[*v])),
    })
}

/// The Banach-Mazur game over a finite space. Moves are nonempty opens and each move
/// is contained in the previous one. The basis holds the runs whose chain is constant
/// from position `stab - 1` on; every chain in a finite lattice stabilizes, so larger
/// `stab` exhausts longer descents. Alice wins iff the stabilized open is empty, which
/// never happens for nonempty opens. The empty space gives the empty game.
pub fn bm_game(x: &FinSpace, stab: usize) -> Result<RegularGame> {
    if x.is_empty() {
        return Ok(RegularGame::empty());
    }
    let stab = stab.max(1);
    let opens = x.nonempty_opens();
    let mut map = BTreeMap::new();
    let mut stack: Vec<Vec<Set>> = opens.iter().map(|o| vec![*o]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("nonempty");
        if chain.len() == stab {
            let moves: Vec<Move> = chain.iter().map(|s| set_move(x, *s)).collect();
            let run = Run::constant(moves[..stab - 1].to_vec(), moves[stab - 1].clone());
            map.insert(run, if last == 0 { Player::Alice } else { Player::Bob });
            if map.len() > DEFAULT_CAP {
                return Err(GameError::Cap { cap: DEFAULT_CAP, moment: Moment::root() });
            }
            continue;
        }
        for o in opens.iter().filter(|o| *o & !last == 0) {
            let mut next = chain.clone();
            next.push(*o);
            stack.push(next);
        }
    }
    Ok(RegularGame::from_map(map))
}

/// Whether Alice or Bob wins a Banach-Mazur run: Alice iff the stabilized open is
/// empty.
pub fn bm_winner(x: &FinSpace, r: &Run) -> Result<Player> {
    let tail = r.tail().ok_or_else(|| GameError::rejected(format!("{r} does not stabilize")))?;
    let s = atom_text(tail)
        .and_then(|t| x.parse_set(t))
        .ok_or_else(|| GameError::rejected(format!("{tail} is not a set of the space")))?;
    Ok(if s == 0 { Player::Alice } else { Player::Bob })
}

/// Which selection property Bob aims for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    /// `Ω` or `Ω_x`: the tail values form an ω-cover, or accumulate at the base point.
    Omega,
    /// `Γ` or `Γ_x`: every infinite selection is an ω-cover, or the picks converge.
    Gamma,
}

/// A selection game over a finite space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selection {
    /// Alice plays ω-covers, Bob picks a member. `families` restricts Alice's moves.
    Covering { space: FinSpace, target: Target, families: Option<Vec<Vec<Set>>> },
    /// Alice plays sets with the base point in their closure, Bob picks a point.
    /// `sets` restricts Alice's moves.
    Tightness { space: PointedFinSpace, target: Target, sets: Option<Vec<Set>> },
}

impl Selection {
    pub fn covering(space: FinSpace, target: Target) -> Selection {
        Selection::Covering { space, target, families: None }
    }

    pub fn tightness(space: PointedFinSpace, target: Target) -> Selection {
        Selection::Tightness { space, target, sets: None }
    }

    pub fn space(&self) -> &FinSpace {
        match self {
            Selection::Covering { space, .. } => space,
            Selection::Tightness { space, .. } => &space.space,
        }
    }
}

/// How runs of an inning-based game are sampled: every sequence of `prefix` innings
/// followed by a repeated block of `period` innings. More than `cap` runs is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampling {
    pub prefix: usize,
    pub period: usize,
    pub cap: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Sampling { prefix: 1, period: 1, cap: 50_000 }
    }
}

impl Sampling {
    pub fn new(prefix: usize, period: usize) -> Sampling {
        Sampling { prefix, period: period.max(1), ..Sampling::default() }
    }

    /// Chain length used for Banach-Mazur games.
    pub fn chain_length(&self) -> usize {
        2 * (self.prefix + self.period)
    }
}

/// Bob wins a covering run iff the cycle picks satisfy the target.
pub fn covering_bob_wins(x: &FinSpace, target: Target, cycle: &[Set]) -> bool {
    match target {
        Target::Omega => is_omega_cover(x, cycle),
        Target::Gamma => cycle.iter().all(|v| is_omega_cover(x, &[*v])),
    }
}

/// Bob wins a tightness run iff the base point is in the closure of the cycle picks
/// (`Ω_x`), or every cycle pick lies in every open around the base point (`Γ_x`).
pub fn tightness_bob_wins(x: &PointedFinSpace, target: Target, cycle: &[usize]) -> bool {
    let picks = cycle.iter().fold(0, |acc, p| acc | 1 << p);
    match target {
        Target::Omega => x.space.closure(picks) >> x.base & 1 == 1,
        Target::Gamma => picks & !x.space.neighborhood(x.base) == 0,
    }
}

/// The game whose runs are the sampled sequences of innings; `bob_wins` decides a run
/// from the indices of its cycle innings.
fn inning_game(innings: &[(Move, Move)], sample: &Sampling, bob_wins: impl Fn(&[usize]) -> bool) -> Result<RegularGame> {
    if innings.is_empty() {
        return Err(GameError::rejected("Alice has no legal move"));
    }
    let k = innings.len();
    let slots = sample.prefix + sample.period.max(1);
    let total = u32::try_from(slots).ok().and_then(|s| k.checked_pow(s)).filter(|t| *t <= sample.cap);
    let Some(total) = total else {
        return Err(GameError::Cap { cap: sample.cap, moment: Moment::root() });
    };
    let mut map = BTreeMap::new();
    let mut idx = vec![0usize; slots];
    for _ in 0..total {
        let moves = |ix: &[usize]| -> Vec<Move> {
            ix.iter().flat_map(|&i| [innings[i].0.clone(), innings[i].1.clone()]).collect()
        };
        let run = Run::new(moves(&idx[..sample.prefix]), moves(&idx[sample.prefix..]));
        let winner = if bob_wins(&idx[sample.prefix..]) { Player::Bob } else { Player::Alice };
        map.insert(run, winner);
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < k {
                break;
            }
            *slot = 0;
        }
    }
    Ok(RegularGame::from_map(map))
}

fn covering_innings(x: &FinSpace, families: &Option<Vec<Vec<Set>>>) -> Result<Vec<(Move, Move, Set)>> {
    let fams: Vec<Vec<Set>> = match families {
        Some(fs) => {
            for f in fs {
                if let Some(v) = f.iter().find(|v| !x.is_open(**v)) {
                    return Err(GameError::rejected(format!("{} is not open", x.label(*v))));
                }
                if !is_omega_cover(x, f) {
                    return Err(GameError::rejected(format!("{} is not an ω-cover", family_move(x, f))));
                }
            }
            fs.clone()
        }
        None => {
            let others: Vec<Set> = x.opens().iter().copied().filter(|o| *o != x.full()).collect();
            if others.len() > MAX_SUBSET_POINTS {
                return Err(GameError::rejected("too many opens to list every ω-cover"));
            }
            subsets_of(full_mask(others.len()))
                .into_iter()
                .map(|pick| {
                    let mut f: Vec<Set> = bits(pick).map(|i| others[i]).collect();
                    f.push(x.full());
                    f
                })
                .collect()
        }
    };
    let mut out = Vec::new();
    for f in fams {
        let mut f = f;
        f.sort_by_key(|o| (o.count_ones(), *o));
        f.dedup();
        let a = family_move(x, &f);
        for u in f {
            out.push((a.clone(), set_move(x, u), u));
        }
    }
    Ok(out)
}

fn tightness_innings(x: &PointedFinSpace, sets: &Option<Vec<Set>>) -> Result<Vec<(Move, Move, usize)>> {
    let space = &x.space;
    let list: Vec<Set> = match sets {
        Some(ss) => {
            for s in ss {
                if s & !space.full() != 0 || space.closure(*s) >> x.base & 1 == 0 {
                    return Err(GameError::rejected(format!(
                        "{} does not have {} in its closure",
                        space.label(*s),
                        space.point_name(x.base)
                    )));
                }
            }
            ss.clone()
        }
        None => {
            if space.len() > MAX_SUBSET_POINTS {
                return Err(GameError::rejected("too many points to list every set"));
            }
            subsets_of(space.full()).into_iter().filter(|s| space.closure(*s) >> x.base & 1 == 1).collect()
        }
    };
    let mut out = Vec::new();
    for s in list {
        let a = set_move(space, s);
        for p in bits(s) {
            out.push((a.clone(), atom(space.point_name(p).to_string()), p));
        }
    }
    Ok(out)
}

/// The sampled selection game: covering games `G₁(Ω,Ω)`, `G₁(Ω,Γ)` and tightness games
/// `G₁(Ω_x,Ω_x)`, `G₁(Ω_x,Γ_x)`. Alice's moves are ω-covers (resp. sets with the base
/// point in their closure) and Bob picks a member.
pub fn selection_game(spec: &Selection, sample: Sampling) -> Result<RegularGame> {
    match spec {
        Selection::Covering { space, target, families } => {
            let inn = covering_innings(space, families)?;
            let moves: Vec<(Move, Move)> = inn.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
            inning_game(&moves, &sample, |cyc| {
                let picks: Vec<Set> = cyc.iter().map(|&i| inn[i].2).collect();
                covering_bob_wins(space, *target, &picks)
            })
        }
        Selection::Tightness { space, target, sets } => {
            let inn = tightness_innings(space, sets)?;
            let moves: Vec<(Move, Move)> = inn.iter().map(|(a, b, _)| (a.clone(), b.clone())).collect();
            inning_game(&moves, &sample, |cyc| {
                let picks: Vec<usize> = cyc.iter().map(|&i| inn[i].2).collect();
                tightness_bob_wins(space, *target, &picks)
            })
        }
    }
}

/// Bob's moves along one period of the tail of an inning-based run.
fn bob_tail(r: &Run) -> Vec<Move> {
    let start = r.stabilization() + r.stabilization() % 2;
    let block = lcm(r.period(), 2);
    (start..start + block).filter(|n| n % 2 == 1).map(|n| r.at(n).clone()).collect()
}

/// The payoff of a selection game on any eventually periodic run over its moves.
pub fn selection_winner(spec: &Selection, r: &Run) -> Result<Player> {
    let bad = |m: &Move| GameError::rejected(format!("{m} is not a move of Bob in this game"));
    let bob = bob_tail(r);
    let wins = match spec {
        Selection::Covering { space, target, .. } => {
            let picks = bob
                .iter()
                .map(|m| atom_text(m).and_then(|t| space.parse_set(t)).ok_or_else(|| bad(m)))
                .collect::<Result<Vec<Set>>>()?;
            covering_bob_wins(space, *target, &picks)
        }
        Selection::Tightness { space, target, .. } => {
            let picks = bob
                .iter()
                .map(|m| atom_text(m).and_then(|t| space.space.index_of(t)).ok_or_else(|| bad(m)))
                .collect::<Result<Vec<usize>>>()?;
            tightness_bob_wins(space, *target, &picks)
        }
    };
    Ok(if wins { Player::Bob } else { Player::Alice })
}

/// The functors from spaces to games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Functor {
    /// Contravariant on continuous maps: `𝒰 ↦ f⁻¹[𝒰]`, `U ↦ f⁻¹(U)`.
    Cover(Target),
    /// Covariant on continuous pointed maps: `A ↦ f[A]`, `a ↦ f(a)`. Holds the base
    /// point of the domain.
    Tight(Target, usize),
    /// Covariant on open maps: `U ↦ f[U]`.
    Bm,
}

/// A functor applied to a map, with the sampled games it connects.
#[derive(Debug, Clone)]
pub struct FunctorAction {
    pub map: ChronMap,
    pub domain: RegularGame,
    pub codomain: RegularGame,
}

/// The move-wise translation of covering moves along `f⁻¹`.
fn cover_letter(f: &SpaceMap) -> impl Fn(&Move) -> Move + Send + Sync + 'static {
    let f = f.clone();
    move |m| {
        let Some(t) = atom_text(m) else { return m.clone() };
        if let Some(fam) = parse_family(&f.cod, t) {
            let pre: Vec<Set> = fam.iter().map(|u| f.preimage(*u)).collect();
            family_move(&f.dom, &pre)
        } else if let Some(u) = f.cod.parse_set(t) {
            set_move(&f.dom, f.preimage(u))
        } else {
            m.clone()
        }
    }
}

fn tight_letter(f: &SpaceMap) -> impl Fn(&Move) -> Move + Send + Sync + 'static {
    let f = f.clone();
    move |m| {
        let Some(t) = atom_text(m) else { return m.clone() };
        if let Some(a) = f.dom.parse_set(t) {
            set_move(&f.cod, f.image(a))
        } else if let Some(p) = f.dom.index_of(t) {
            atom(f.cod.point_name(f.images[p]).to_string())
        } else {
            m.clone()
        }
    }
}

fn bm_letter(f: &SpaceMap) -> impl Fn(&Move) -> Move + Send + Sync + 'static {
    let f = f.clone();
    move |m| match atom_text(m).and_then(|t| f.dom.parse_set(t)) {
        Some(u) => set_move(&f.cod, f.image(u)),
        None => m.clone(),
    }
}

/// Applies a functor to a map and checks, on the sampled run bases, that every image
/// run is a run of the codomain game and that Bob-won runs go to Bob-won runs.
pub fn functor_action(kind: Functor, f: &SpaceMap, sample: Sampling) -> Result<FunctorAction> {
    let (map, domain, codomain) = match kind {
        Functor::Cover(target) => {
            f.require_continuous()?;
            let dom = selection_game(&Selection::covering(f.cod.clone(), target), sample)?;
            let cod = selection_game(&Selection::covering(f.dom.clone(), target), sample)?;
            (ChronMap::letterwise(cover_letter(f)), dom, cod)
        }
        Functor::Tight(target, base) => {
            f.require_continuous()?;
            let x = PointedFinSpace::new(f.dom.clone(), base)?;
            let y = PointedFinSpace::new(f.cod.clone(), f.images[base])?;
            let dom = selection_game(&Selection::tightness(x, target), sample)?;
            let cod = selection_game(&Selection::tightness(y, target), sample)?;
            (ChronMap::letterwise(tight_letter(f)), dom, cod)
        }
        Functor::Bm => {
            f.require_open()?;
            let dom = bm_game(&f.dom, sample.chain_length())?;
            let cod = bm_game(&f.cod, sample.chain_length())?;
            (ChronMap::letterwise(bm_letter(f)), dom, cod)
        }
    };
    for (r, p) in domain.runs() {
        let img = map.run_image(r)?;
        match codomain.winner(&img) {
            None => return Err(GameError::rejected(format!("the image {img} of {r} is not a sampled run"))),
            Some(q) if p == Player::Bob && q == Player::Alice => {
                return Err(GameError::rejected(format!("Bob-won {r} goes to the Alice-won {img}")));
            }
            _ => {}
        }
    }
    Ok(FunctorAction { map, domain, codomain })
}

/// The transformations from tightness games over function families to covering games.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transform {
    /// `θ`: `⟨A_n, φ_n⟩ ↦ ⟨U_0(A_n), φ_n⁻¹(I_0)⟩` between the `Ω` games.
    Theta,
    /// `η`: `⟨A_n, φ_n⟩ ↦ ⟨U_n(A_n), φ_n⁻¹(I_n)⟩` between the `Ω` games.
    Eta,
    /// `θ` between the `Γ` games.
    ThetaGamma,
    /// `η` between the `Γ` games.
    EtaGamma,
}

impl Transform {
    pub const ALL: [Transform; 4] = [Transform::Theta, Transform::Eta, Transform::ThetaGamma, Transform::EtaGamma];

    pub fn target(self) -> Target {
        match self {
            Transform::Theta | Transform::Eta => Target::Omega,
            Transform::ThetaGamma | Transform::EtaGamma => Target::Gamma,
        }
    }

    /// The interval index used at an inning.
    pub fn interval(self, inning: usize) -> usize {
        match self {
            Transform::Theta | Transform::ThetaGamma => 0,
            Transform::Eta | Transform::EtaGamma => inning,
        }
    }

    fn indexed(self) -> bool {
        matches!(self, Transform::Eta | Transform::EtaGamma)
    }
}

/// Move names of a tightness game over a function family.
#[derive(Debug, Clone)]
struct FamilyCodec {
    family: FunctionFamily,
    alice: BTreeMap<Move, Vec<usize>>,
    bob: BTreeMap<Move, usize>,
}

impl FamilyCodec {
    fn new(family: &FunctionFamily) -> FamilyCodec {
        let x = family.space();
        let bob = family.fns.iter().enumerate().map(|(i, f)| (atom(f.token(x)), i)).collect();
        FamilyCodec { family: family.clone(), alice: BTreeMap::new(), bob }
    }

    fn fn_move(&self, i: usize) -> Move {
        atom(self.family.fns[i].token(self.family.space()))
    }

    fn set_move(&self, set: &BTreeSet<usize>) -> Move {
        let parts: Vec<String> = set.iter().map(|&i| self.family.fns[i].token(self.family.space())).collect();
        atom(format!("[{}]", parts.join(",")))
    }

    /// Alice's moves: the subsets of the family containing the zero function.
    fn alice_sets(&self) -> Result<Vec<BTreeSet<usize>>> {
        let zero = self.family.zero_index();
        let others: Vec<usize> = (0..self.family.fns.len()).filter(|&i| i != zero).collect();
        if others.len() > 16 {
            return Err(GameError::rejected("too many functions to list every subset"));
        }
        Ok(subsets_of(full_mask(others.len()))
            .into_iter()
            .map(|pick| {
                let mut s: BTreeSet<usize> = bits(pick).map(|i| others[i]).collect();
                s.insert(zero);
                s
            })
            .collect())
    }
}

/// The tightness game at the zero function over a finite function family. Alice
/// plays subsets containing the zero function, Bob picks a member. In a finite family
/// the zero function is in the closure of the tail picks iff it is a cycle pick, and
/// the picks converge to it iff every cycle pick is zero.
fn family_tightness(codec: &mut FamilyCodec, target: Target, sample: Sampling) -> Result<RegularGame> {
    let mut innings = Vec::new();
    let mut picks = Vec::new();
    for s in codec.alice_sets()? {
        let a = codec.set_move(&s);
        codec.alice.insert(a.clone(), s.iter().copied().collect());
        for &i in &s {
            innings.push((a.clone(), codec.fn_move(i)));
            picks.push(i);
        }
    }
    let zero = codec.family.zero_index();
    inning_game(&innings, &sample, |cyc| match target {
        Target::Omega => cyc.iter().any(|&i| picks[i] == zero),
        Target::Gamma => cyc.iter().all(|&i| picks[i] == zero),
    })
}

/// The tightness game over a function family, as used by [`theta_eta`].
pub fn family_tightness_game(family: &FunctionFamily, target: Target, sample: Sampling) -> Result<RegularGame> {
    family_tightness(&mut FamilyCodec::new(family), target, sample)
}

fn transform_map(codec: &FamilyCodec, variant: Transform, shift: usize) -> ChronMap {
    let codec = Arc::new(codec.clone());
    let c2 = codec.clone();
    let letter = move |c: &FamilyCodec, i: usize, m: &Move| -> Move {
        let n = variant.interval(i / 2) + shift;
        let x = c.family.space();
        if let Some(set) = c.alice.get(m) {
            let fam: Vec<Set> = set.iter().map(|&j| c.family.fns[j].preimage(n)).collect();
            family_move(x, &fam)
        } else if let Some(&j) = c.bob.get(m) {
            set_move(x, c.family.fns[j].preimage(n))
        } else {
            m.clone()
        }
    };
    let stable = if variant.indexed() { codec.family.fns.iter().map(RationalFn::stable_index).max().unwrap_or(0) } else { 0 };
    ChronMap::new(move |t| t.iter().enumerate().map(|(i, m)| letter(&codec, i, m)).collect::<Vec<_>>().into())
        .with_run_rule(move |r| {
            let start = r.stabilization().max(2 * stable);
            Ok(Run::from_fn(start, r.period(), |n| letter(&c2, n, r.at(n))))
        })
}

/// A transformation applied to a function family: the sampled tightness game, the
/// covering subgame formed by the image runs, and the map between them.
#[derive(Debug, Clone)]
pub struct TransformMap {
    pub domain: RegularGame,
    pub image: RegularGame,
    pub map: ChronMap,
}

/// `θ` or `η` on a function family over `X`. Image moments are checked to be legal in
/// the covering game: each Alice move is an ω-cover of opens and Bob picks a member.
pub fn theta_eta(family: &FunctionFamily, variant: Transform, sample: Sampling) -> Result<TransformMap> {
    transform_with_shift(family, variant, sample, 0)
}

fn transform_with_shift(family: &FunctionFamily, variant: Transform, sample: Sampling, shift: usize) -> Result<TransformMap> {
    let mut codec = FamilyCodec::new(family);
    let domain = family_tightness(&mut codec, variant.target(), sample)?;
    let map = transform_map(&codec, variant, shift);
    let x = family.space();
    let mut image = BTreeMap::new();
    for (r, _) in domain.runs() {
        let img = map.run_image(r)?;
        for n in (0..img.horizon() + 2).step_by(2) {
            let fam = atom_text(img.at(n)).and_then(|t| parse_family(x, t));
            let pick = atom_text(img.at(n + 1)).and_then(|t| x.parse_set(t));
            let legal = match (&fam, pick) {
                (Some(f), Some(u)) => f.iter().all(|v| x.is_open(*v)) && is_omega_cover(x, f) && f.contains(&u),
                _ => false,
            };
            if !legal {
                return Err(GameError::rejected(format!("image inning {n} of {img} is not a covering-game inning")));
            }
        }
        let cover = Selection::covering(x.clone(), variant.target());
        let w = selection_winner(&cover, &img)?;
        image.insert(img, w);
    }
    Ok(TransformMap { domain, image: RegularGame::from_map(image), map })
}

/// The outcome of a naturality square check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaturalityReport {
    pub holds: bool,
    /// The first moment on which the two composites differ.
    pub witness: Option<Moment>,
    /// A failure that is not a single moment, such as an image leaving the sample.
    pub reason: Option<String>,
    /// Number of moments compared.
    pub checked: usize,
}

impl NaturalityReport {
    fn compare(moments: &[Moment], left: impl Fn(&Moment) -> Moment, right: impl Fn(&Moment) -> Moment) -> Self {
        for (i, t) in moments.iter().enumerate() {
            if left(t) != right(t) {
                return NaturalityReport { holds: false, witness: Some(t.clone()), reason: None, checked: i + 1 };
            }
        }
        NaturalityReport { holds: true, witness: None, reason: None, checked: moments.len() }
    }
}

/// Checks `T_X ∘ Tight(C_p f) = Cover(f) ∘ T_Y` on every moment up to `depth` of the
/// sampled tightness game over `family` on `Y`, where `T` is the transformation and
/// `Tight(C_p f)` sends `φ` to `φ∘f`. The family on `X` is the pullback family. With
/// `mutate` the left leg uses `I_{n+1}` in place of `I_n`.
pub fn naturality_check(
    variant: Transform,
    f: &SpaceMap,
    family: &FunctionFamily,
    depth: usize,
    sample: Sampling,
    mutate: bool,
) -> Result<NaturalityReport> {
    f.require_continuous()?;
    let fam_x = family.pullback(f)?;
    let mut codec_y = FamilyCodec::new(family);
    let dom = family_tightness(&mut codec_y, variant.target(), sample)?;
    let mut codec_x = FamilyCodec::new(&fam_x);
    family_tightness(&mut codec_x, variant.target(), sample)?;
    let pull: Vec<usize> =
        family.fns.iter().map(|g| fam_x.index_of(&g.pullback(f)).expect("pullback family")).collect();
    let cy = codec_y.clone();
    let cx = codec_x.clone();
    let tight_cp = ChronMap::letterwise(move |m| {
        if let Some(set) = cy.alice.get(m) {
            cx.set_move(&set.iter().map(|&i| pull[i]).collect())
        } else if let Some(&i) = cy.bob.get(m) {
            cx.fn_move(pull[i])
        } else {
            m.clone()
        }
    });
    let theta_x = transform_map(&codec_x, variant, usize::from(mutate));
    let theta_y = transform_map(&codec_y, variant, 0);
    let cover_f = ChronMap::letterwise(cover_letter(f));
    let left = tight_cp.then(&theta_x);
    let right = theta_y.then(&cover_f);
    Ok(NaturalityReport::compare(&dom.moments_upto(depth), |t| left.apply(t), |t| right.apply(t)))
}

/// The Banach-Mazur embedding of a regular game. The Krom space of the quit-move
/// extension is sampled by its Bob-won basis runs: the original Bob-won runs and the
/// quit runs leaving from Alice's turns up to `depth`. A basic open `[t]` is read as
/// the set of sampled points through `t`, named `{k0,k3}` by point index, and
/// `η(t) = ⟨[t↾1], …, [t]⟩`.
#[derive(Debug, Clone)]
pub struct BmEmbedding {
    /// The sampled quit-move extension.
    pub quit: RegularGame,
    pub krom: RunSpace,
    /// The Banach-Mazur subgame spanned by the images of the runs of `quit`. Alice wins
    /// a run iff the sampled open it stabilizes at is empty.
    pub target: RegularGame,
    pub eta: ChronMap,
    pub depth: usize,
}

fn points_through(krom: &[Run], t: &[Move]) -> BTreeSet<usize> {
    krom.iter().enumerate().filter(|(_, r)| r.extends(t)).map(|(i, _)| i).collect()
}

/// The move naming a set of sampled Krom points.
pub fn krom_move(points: &BTreeSet<usize>) -> Move {
    let parts: Vec<String> = points.iter().map(|i| format!("k{i}")).collect();
    atom(format!("{{{}}}", parts.join(",")))
}

/// The length from which every truncation of `r` meets the same sampled points.
fn krom_stable(krom: &[Run], r: &Run) -> usize {
    krom.iter().filter_map(|s| s.delta(r).finite()).max().map_or(0, |d| d + 1)
}

/// [`bm_embedding_at`] with quit runs up to one past the horizon, enough for every
/// branching of the game to be witnessed by sampled points on both sides.
pub fn bm_embedding(g: &RegularGame) -> BmEmbedding {
    bm_embedding_at(g, g.horizon() + 1)
}

pub fn bm_embedding_at(g: &RegularGame, depth: usize) -> BmEmbedding {
    let quit = d_b_regular(g, depth);
    let krom = krom_space(&quit);
    let runs = Arc::new(krom.runs.clone());
    let (r1, r2) = (runs.clone(), runs.clone());
    let eta = ChronMap::new(move |t| (1..=t.len()).map(|n| krom_move(&points_through(&r1, &t[..n]))).collect::<Vec<_>>().into())
        .with_run_rule(move |r| {
            let start = krom_stable(&r2, r);
            Ok(Run::from_fn(start, 1, |n| krom_move(&points_through(&r2, &r.truncate(n + 1)))))
        });
    let empty = krom_move(&BTreeSet::new());
    let target = quit
        .runs()
        .map(|(r, _)| {
            let img = eta.run_image(r).expect("exact run rule");
            let w = if img.tail() == Some(&empty) { Player::Alice } else { Player::Bob };
            (img, w)
        })
        .collect();
    BmEmbedding { quit, krom, target: RegularGame::from_map(target), eta, depth }
}

/// The outcome of the universality checks, with the first failure found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityReport {
    pub chronological: bool,
    pub injective: bool,
    pub winners: bool,
    pub shrinkage: bool,
    pub witness: Option<String>,
}

impl UniversalityReport {
    pub fn holds(&self) -> bool {
        self.chronological && self.injective && self.winners && self.shrinkage
    }
}

/// Verifies the embedding `η: G → BM(K̃G)`: (i) `η` is chronological and injective on
/// moments up to `depth`; (ii) every basis run keeps its winner; (iii) the sampled
/// opens `[R↾n]` decrease to `{R}` for Bob-won runs and to `∅` for Alice-won runs.
pub fn verify_universality(g: &RegularGame, depth: usize) -> Result<UniversalityReport> {
    let e = bm_embedding(g);
    let mut rep = UniversalityReport { chronological: true, injective: true, winners: true, shrinkage: true, witness: None };
    if let Err(err) = check_chronological(&e.eta, &g.tree(), depth, DEFAULT_CAP) {
        rep.chronological = false;
        rep.witness = Some(err.to_string());
    }
    let mut seen: BTreeMap<Moment, Moment> = BTreeMap::new();
    for t in g.moments_upto(depth) {
        if let Some(s) = seen.insert(e.eta.apply(&t), t.clone()) {
            rep.injective = false;
            rep.witness.get_or_insert_with(|| format!("η({s}) = η({t})"));
        }
    }
    for (r, p) in g.runs() {
        let img = e.eta.run_image(r)?;
        let q = e.target.winner(&img);
        if q != Some(p) {
            rep.winners = false;
            rep.witness.get_or_insert_with(|| format!("{r} is won by {p:?} but η̄ gives {q:?}"));
        }
        let stop = krom_stable(&e.krom.runs, r) + 1;
        let sets: Vec<BTreeSet<usize>> = (1..=stop).map(|n| points_through(&e.krom.runs, &r.truncate(n))).collect();
        let nested = sets.windows(2).all(|w| w[1].is_subset(&w[0]));
        let expect: BTreeSet<usize> = match p {
            Player::Bob => e.krom.point_of(r).into_iter().collect(),
            Player::Alice => BTreeSet::new(),
        };
        let last = sets.last().cloned().unwrap_or_default();
        if !nested || last != expect || (p == Player::Bob && expect.is_empty()) {
            rep.shrinkage = false;
            rep.witness.get_or_insert_with(|| format!("the opens around {r} shrink to {}", krom_move(&last)));
        }
    }
    Ok(rep)
}

/// Checks the naturality square `BM(K̃f) ∘ η_G = η_{G′} ∘ f` on every moment of `g1` up
/// to `depth`. Both Krom samples use quit runs up to one past the larger horizon, and
/// `K̃f` is the quit-move extension of `f` on sampled points.
pub fn bm_naturality(f: &ChronMap, g1: &RegularGame, g2: &RegularGame, depth: usize) -> Result<NaturalityReport> {
    let d = g1.horizon().max(g2.horizon()) + 1;
    let (e1, e2) = (bm_embedding_at(g1, d), bm_embedding_at(g2, d));
    let kf = d_b_map(f);
    let mut points = Vec::with_capacity(e1.krom.runs.len());
    for s in &e1.krom.runs {
        let img = kf.run_image(s)?;
        match e2.krom.point_of(&img) {
            Some(j) => points.push(j),
            None => {
                return Ok(NaturalityReport {
                    holds: false,
                    witness: None,
                    reason: Some(format!("the Krom point {s} goes to {img}, outside the sampled Krom space")),
                    checked: 0,
                })
            }
        }
    }
    let k1 = e1.krom.runs.clone();
    let left = |t: &Moment| -> Moment {
        (1..=t.len())
            .map(|n| krom_move(&points_through(&k1, &t[..n]).iter().map(|&i| points[i]).collect()))
            .collect::<Vec<_>>()
            .into()
    };
    let right = |t: &Moment| e2.eta.apply(&f.apply(t));
    Ok(NaturalityReport::compare(&g1.moments_upto(depth), left, right))
}
