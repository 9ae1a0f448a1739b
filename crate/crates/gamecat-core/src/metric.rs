//! Run spaces, the ball construction, hom spaces and Krom spaces.
//!
//! Distances are stored as codes: code `n` stands for `1/(n+1)` and `Inf` for 0, so
//! every space built here has its distances in `{0} ∪ {1/(n+1)}` and larger codes
//! mean closer points. Finite spaces are complete, so their coded form is exactly the
//! sequence-space representation.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::error::{GameError, Result};
use crate::game::{Code, Moment, Move, Player, RegularGame, Run};
use crate::morphism::ChronMap;

/// A finite ultrametric space of diameter at most 1 with coded distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UltraSpace {
    labels: Vec<String>,
    codes: Vec<Vec<Code>>,
}

impl UltraSpace {
    /// A validated space; see [`UltraSpace::validate`].
    pub fn new(labels: Vec<String>, codes: Vec<Vec<Code>>) -> Result<UltraSpace> {
        let x = UltraSpace::raw(labels, codes)?;
        x.validate()?;
        Ok(x)
    }

    /// A space from a code function on point indices, validated.
    pub fn from_fn(labels: Vec<String>, code: impl Fn(usize, usize) -> Code) -> Result<UltraSpace> {
        let n = labels.len();
        let codes = (0..n).map(|i| (0..n).map(|j| code(i, j)).collect()).collect();
        UltraSpace::new(labels, codes)
    }

    /// A space without the metric checks. Only the table shape is enforced.
    pub fn raw(labels: Vec<String>, codes: Vec<Vec<Code>>) -> Result<UltraSpace> {
        if codes.len() != labels.len() || codes.iter().any(|row| row.len() != labels.len()) {
            return Err(GameError::rejected("code table must be square with one row per label"));
        }
        Ok(UltraSpace { labels, codes })
    }

    pub fn empty() -> UltraSpace {
        UltraSpace { labels: Vec::new(), codes: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn code(&self, i: usize, j: usize) -> Code {
        self.codes[i][j]
    }

    /// The distance `1/(code+1)`, or 0 for code `∞`.
    pub fn distance(&self, i: usize, j: usize) -> Ratio<u64> {
        match self.code(i, j) {
            Code::Fin(n) => Ratio::new(1, n as u64 + 1),
            Code::Inf => Ratio::from_integer(0),
        }
    }

    /// A triple violating `code(x,z) ≥ min(code(x,y), code(y,z))`, if any.
    pub fn strong_triangle_witness(&self) -> Option<(usize, usize, usize)> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.code(x, z) < self.code(x, y).min(self.code(y, z)) {
                        return Some((x, y, z));
                    }
                }
            }
        }
        None
    }

    /// Checks the representation: zero self-distance, positive distance between
    /// distinct points, symmetry and the strong triangle inequality.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if self.code(i, i) != Code::Inf {
                return Err(GameError::rejected(format!("point {} has nonzero self-distance", self.labels[i])));
            }
            for j in 0..n {
                if i != j && self.code(i, j) == Code::Inf {
                    return Err(GameError::rejected(format!(
                        "distinct points {} and {} are at distance 0",
                        self.labels[i], self.labels[j]
                    )));
                }
                if self.code(i, j) != self.code(j, i) {
                    return Err(GameError::rejected(format!("asymmetric codes between {} and {}", self.labels[i], self.labels[j])));
                }
            }
        }
        if let Some((x, y, z)) = self.strong_triangle_witness() {
            return Err(GameError::rejected(format!(
                "strong triangle fails on {}, {}, {}",
                self.labels[x], self.labels[y], self.labels[z]
            )));
        }
        Ok(())
    }

    /// The subspace on the given points, in the given order.
    pub fn subspace(&self, keep: &[usize]) -> UltraSpace {
        UltraSpace {
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            codes: keep.iter().map(|&i| keep.iter().map(|&j| self.codes[i][j]).collect()).collect(),
        }
    }

    /// Whether a point map `self → y` is 1-Lipschitz: codes never decrease.
    pub fn is_nonexpanding(&self, y: &UltraSpace, map: &[usize]) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| y.code(map[a], map[b]) >= self.code(a, b)))
    }

    /// Whether a point map `self → y` preserves every code.
    pub fn is_isometry(&self, y: &UltraSpace, map: &[usize]) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| y.code(map[a], map[b]) == self.code(a, b)))
    }

    /// The largest finite code from a point, or `None` in a one-point space.
    fn max_code_from(&self, x: usize) -> Option<usize> {
        (0..self.len()).filter(|&y| y != x).filter_map(|y| self.code(x, y).finite()).max()
    }

    /// The closed ball of radius `1/(i+2)` around `x`: the points at code at least `i+1`.
    pub fn ball(&self, x: usize, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&y| self.code(x, y) >= Code::Fin(i + 1)).collect()
    }
}

/// Whether a space is a sequence space: a valid coded ultrametric space. Finite spaces
/// are complete, so this is the representation check.
pub fn is_seqspa(x: &UltraSpace) -> bool {
    x.validate().is_ok()
}

impl fmt::Display for UltraSpace {
    /// The lower triangle of the code matrix, one labeled row per point.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}:", self.labels[i])?;
            for j in 0..=i {
                write!(f, " {}", self.codes[i][j])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// The run space of a regular game with its payoff marker.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunSpace {
    pub space: UltraSpace,
    /// The run behind each point.
    pub runs: Vec<Run>,
    /// Whether each point is won by Alice.
    pub alice: Vec<bool>,
}

impl RunSpace {
    pub fn point_of(&self, r: &Run) -> Option<usize> {
        self.runs.iter().position(|s| s == r)
    }
}

fn space_of_runs(runs: &[Run]) -> UltraSpace {
    UltraSpace {
        labels: runs.iter().map(|r| r.to_string()).collect(),
        codes: runs.iter().map(|r| runs.iter().map(|s| r.delta(s)).collect()).collect(),
    }
}

/// The run space `(Run(T), d_T)` of a regular game: code of two runs is their `Δ`.
pub fn run_space(g: &RegularGame) -> RunSpace {
    let runs = g.basis();
    let alice = runs.iter().map(|r| g.winner(r) == Some(Player::Alice)).collect();
    RunSpace { space: space_of_runs(&runs), runs, alice }
}

/// The Krom space: the subspace of Bob-won runs.
pub fn krom_space(g: &RegularGame) -> RunSpace {
    let runs: Vec<Run> = g.runs().filter(|(_, p)| *p == Player::Bob).map(|(r, _)| r.clone()).collect();
    RunSpace { space: space_of_runs(&runs), alice: vec![false; runs.len()], runs }
}

/// The ball game of a finite space. Each move is a closed ball, named by its point set;
/// the `i`-th move of a run has radius `1/(i+2)`.
#[derive(Debug, Clone)]
pub struct BallGame {
    pub game: RegularGame,
    /// The run of balls around each point.
    pub runs: Vec<Run>,
    /// The point set behind each ball move.
    pub balls: BTreeMap<Move, BTreeSet<usize>>,
}

fn ball_move(x: &UltraSpace, points: &[usize]) -> Move {
    let names: Vec<&str> = points.iter().map(|&p| x.label(p)).collect();
    Move::atom(format!("{{{}}}", names.join(",")))
}

/// The ball game of a space. With a subset, Alice wins the runs whose center lies in it;
/// without one, Alice wins every run.
pub fn ball_game(x: &UltraSpace, subset: Option<&[bool]>) -> BallGame {
    let mut runs = Vec::with_capacity(x.len());
    let mut balls = BTreeMap::new();
    let mut winners = BTreeMap::new();
    for p in 0..x.len() {
        let stab = x.max_code_from(p).unwrap_or(0);
        let prefix: Vec<Move> = (0..stab)
            .map(|i| {
                let b = x.ball(p, i);
                let m = ball_move(x, &b);
                balls.insert(m.clone(), b.into_iter().collect());
                m
            })
            .collect();
        let tail = ball_move(x, &[p]);
        balls.insert(tail.clone(), BTreeSet::from([p]));
        let r = Run::constant(prefix, tail);
        let alice = subset.map(|s| s[p]).unwrap_or(true);
        winners.insert(r.clone(), if alice { Player::Alice } else { Player::Bob });
        runs.push(r);
    }
    BallGame { game: RegularGame::from_map(winners), runs, balls }
}

/// The counit `Run(Ball(X)) → X`: each run goes to the unique point in the
/// intersection of its balls. Fails if some intersection is not a single point.
pub fn counit(b: &BallGame) -> Result<BTreeMap<Run, usize>> {
    let mut out = BTreeMap::new();
    for (r, _) in b.game.runs() {
        let mut acc: Option<BTreeSet<usize>> = None;
        for k in 0..=r.stabilization() + r.period() {
            let ball = b.balls.get(r.at(k)).ok_or_else(|| GameError::rejected(format!("{} is not a ball", r.at(k))))?;
            acc = Some(match acc {
                None => ball.clone(),
                Some(a) => a.intersection(ball).copied().collect(),
            });
        }
        let points = acc.unwrap_or_default();
        if points.len() != 1 {
            return Err(GameError::Integrity { probe: r.stabilization() + 1, reason: format!("{r} has {} centers", points.len()) });
        }
        out.insert(r.clone(), points.into_iter().next().expect("one point"));
    }
    Ok(out)
}

/// The verdict of the round trip `X → Run(Ball(X)) → X`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundTrip {
    /// The counit is a bijection onto the points.
    pub bijective: bool,
    /// Codes of images are at least the run codes.
    pub nonexpanding: bool,
    /// Codes of images equal the run codes.
    pub isometry: bool,
}

impl RoundTrip {
    pub fn holds(&self) -> bool {
        self.bijective && self.nonexpanding && self.isometry
    }
}

/// Builds the ball game of `x` and checks its counit.
pub fn ball_roundtrip(x: &UltraSpace) -> Result<RoundTrip> {
    let b = ball_game(x, None);
    let eps = counit(&b)?;
    let hit: BTreeSet<usize> = eps.values().copied().collect();
    let bijective = hit.len() == x.len() && eps.len() == x.len();
    let runs: Vec<(&Run, usize)> = eps.iter().map(|(r, p)| (r, *p)).collect();
    let mut nonexpanding = true;
    let mut isometry = true;
    for (r, p) in &runs {
        for (s, q) in &runs {
            let (rc, pc) = (r.delta(s), x.code(*p, *q));
            nonexpanding &= pc >= rc;
            isometry &= pc == rc;
        }
    }
    Ok(RoundTrip { bijective, nonexpanding, isometry })
}

/// The chronological map `Ball(f)`: each ball goes to the ball of the same radius around
/// the image of any of its points.
pub fn ball_map(x: &BallGame, y_space: &UltraSpace, f: &[usize]) -> ChronMap {
    let balls = Arc::new(x.balls.clone());
    let (y, f) = (y_space.clone(), f.to_vec());
    let (balls2, y2, f2) = (balls.clone(), y.clone(), f.clone());
    let image = move |balls: &BTreeMap<Move, BTreeSet<usize>>, y: &UltraSpace, f: &[usize], t: &[Move]| -> Moment {
        t.iter()
            .enumerate()
            .map(|(i, m)| match balls.get(m).and_then(|b| b.iter().next()) {
                Some(&c) => ball_move(y, &y.ball(f[c], i)),
                None => m.clone(),
            })
            .collect::<Vec<_>>()
            .into()
    };
    ChronMap::new(move |t| image(&balls, &y, &f, t)).with_run_rule(move |r| {
        let center = balls2
            .get(r.at(r.stabilization()))
            .and_then(|b| b.iter().next().copied())
            .ok_or_else(|| GameError::rejected(format!("{r} is not a ball run")))?;
        let c = f2[center];
        let stab = y2.max_code_from(c).unwrap_or(0);
        Ok(Run::constant((0..stab).map(|i| ball_move(&y2, &y2.ball(c, i))).collect(), ball_move(&y2, &[c])))
    })
}

/// The hom space `[X, Y]` of 1-Lipschitz maps with the sup metric.
#[derive(Debug, Clone)]
pub struct HomSpace {
    pub space: UltraSpace,
    /// Each map as the list of images of the points of `X`.
    pub maps: Vec<Vec<usize>>,
}

/// Enumerates the 1-Lipschitz maps `x → y`. Fails when `|y|^|x|` exceeds `cap`.
pub fn hom_space(x: &UltraSpace, y: &UltraSpace, cap: usize) -> Result<HomSpace> {
    let total = (0..x.len()).try_fold(1usize, |acc, _| acc.checked_mul(y.len()));
    match total {
        Some(t) if t <= cap => {}
        _ => return Err(GameError::Cap { cap, moment: Moment::root() }),
    }
    let total = total.expect("checked");
    let mut maps = Vec::new();
    for code in 0..total {
        let mut rest = code;
        let f: Vec<usize> = (0..x.len())
            .map(|_| {
                let v = rest % y.len().max(1);
                rest /= y.len().max(1);
                v
            })
            .collect();
        if x.is_nonexpanding(y, &f) {
            maps.push(f);
        }
    }
    maps.sort();
    let labels = maps
        .iter()
        .map(|f| format!("[{}]", f.iter().map(|&p| y.label(p)).collect::<Vec<_>>().join(",")))
        .collect();
    let codes = maps
        .iter()
        .map(|f| {
            maps.iter()
                .map(|g| (0..x.len()).map(|p| y.code(f[p], g[p])).min().unwrap_or(Code::Inf))
                .collect()
        })
        .collect();
    Ok(HomSpace { space: UltraSpace { labels, codes }, maps })
}

/// The space of the classifier argument with two classifying maps of `x̄`.
#[derive(Debug, Clone)]
pub struct ClassifierGadget {
    /// Points `x_0, …, x_{n-1}, x̄` with `code(x̄, x_k) = k` and `code(x_k, x_m) = min(k, m)`.
    pub space: UltraSpace,
    /// The run space of the cogenerating tree cut at `n` branches: runs `1^k 0^ω` for
    /// `k < n` and `1^ω`.
    pub target: UltraSpace,
    pub chi: Vec<usize>,
    pub chi_prime: Vec<usize>,
}

impl ClassifierGadget {
    /// The index of `x̄`.
    pub fn limit(&self) -> usize {
        self.space.len() - 1
    }

    /// The points of the space sent to the same point as `p` by the map.
    pub fn fibre(&self, map: &[usize], p: usize) -> Vec<usize> {
        (0..self.space.len()).filter(|&q| map[q] == map[p]).collect()
    }
}

/// Builds the classifier gadget for `n ≥ 2` points besides `x̄`. The map `χ` sends
/// `x_k` to `1^k 0^ω` and `x̄` to `1^ω`; `χ′` shifts, sending `x_k` to `χ(x_{k+1})` and
/// the last point to its own image.
pub fn classifier_gadget(n: usize) -> Result<ClassifierGadget> {
    if n < 2 {
        return Err(GameError::rejected("the classifier gadget needs n ≥ 2"));
    }
    let mut labels: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
    labels.push("x̄".to_string());
    // Indices run x_0, …, x_{n-1}, x̄ = n, so both rules read code = min of the indices.
    let space = UltraSpace::from_fn(labels, |a, b| if a == b { Code::Inf } else { Code::Fin(a.min(b)) })?;
    let one = Move::atom("1");
    let zero = Move::atom("0");
    let mut runs: Vec<Run> = (0..n).map(|k| Run::constant(vec![one.clone(); k], zero.clone())).collect();
    runs.push(Run::constant(Vec::new(), one));
    let target = space_of_runs(&runs);
    let chi: Vec<usize> = (0..=n).collect();
    let chi_prime: Vec<usize> = (0..=n).map(|k| if k + 1 < n { k + 1 } else { k }).collect();
    Ok(ClassifierGadget { space, target, chi, chi_prime })
}
