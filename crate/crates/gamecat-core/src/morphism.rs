//! Chronological maps and the morphism classes built on them.
//!
//! A [`ChronMap`] is a length- and truncation-preserving moment oracle together with
//! a rule for its run extension `f̄`. Predicates that quantify over runs are exact on
//! the regular fragment and bounded otherwise; every false verdict carries a witness.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{GameError, Result};
use crate::game::{
    evaluate, lcm, truncate, Code, Game, GameTree, Moment, Move, Player, RegularGame, Run, DEFAULT_CAP,
};

/// Default number of repetitions used when inferring the periodic tail of an image run.
pub const DEFAULT_LAG: usize = 8;

pub type MomentFn = Arc<dyn Fn(&[Move]) -> Moment + Send + Sync>;
pub type RunFn = Arc<dyn Fn(&Run) -> Result<Run> + Send + Sync>;

/// A chronological map between game trees.
#[derive(Clone)]
pub struct ChronMap {
    apply: MomentFn,
    run: Option<RunFn>,
    lag: usize,
}

impl fmt::Debug for ChronMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChronMap").field("exact_runs", &self.run.is_some()).field("lag", &self.lag).finish()
    }
}

impl ChronMap {
    /// A map given by its moment oracle. Run images are inferred by probing.
    pub fn new(apply: impl Fn(&[Move]) -> Moment + Send + Sync + 'static) -> ChronMap {
        ChronMap { apply: Arc::new(apply), run: None, lag: DEFAULT_LAG }
    }

    /// Supplies an exact rule for the run extension.
    pub fn with_run_rule(mut self, run: impl Fn(&Run) -> Result<Run> + Send + Sync + 'static) -> ChronMap {
        self.run = Some(Arc::new(run));
        self
    }

    pub fn with_lag(mut self, lag: usize) -> ChronMap {
        self.lag = lag.max(1);
        self
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn has_exact_runs(&self) -> bool {
        self.run.is_some()
    }

    /// The image of a moment.
    pub fn apply(&self, t: &[Move]) -> Moment {
        (self.apply)(t)
    }

    /// The image run `f̄(R)`.
    pub fn run_image(&self, r: &Run) -> Result<Run> {
        match &self.run {
            Some(rule) => rule(r),
            None => self.probe_run(r),
        }
    }

    /// Infers `f̄(R)` from the moment oracle: the image of a long truncation must be
    /// periodic over its last `2·lag` blocks, with block length a multiple of the
    /// period of `R` and of the turn parity.
    pub fn probe_run(&self, r: &Run) -> Result<Run> {
        let block = lcm(r.period(), 2);
        let start = r.stabilization() + self.lag * block;
        let len = start + 2 * self.lag * block;
        let w = self.apply(&r.truncate(len));
        if w.len() != len {
            return Err(GameError::Integrity {
                probe: len,
                reason: format!("image of a moment of length {len} has length {}", w.len()),
            });
        }
        if let Some(i) = (start..len - block).find(|&i| w[i] != w[i + block]) {
            return Err(GameError::Integrity {
                probe: len,
                reason: format!("image of {r} is not periodic after position {i}"),
            });
        }
        Ok(Run::new(w[..start].to_vec(), w[start..start + block].to_vec()))
    }

    /// The identity map.
    pub fn identity() -> ChronMap {
        ChronMap::new(|t| Moment::from(t)).with_run_rule(|r| Ok(r.clone()))
    }

    /// The map that relabels every move by `f`.
    pub fn letterwise(f: impl Fn(&Move) -> Move + Send + Sync + 'static) -> ChronMap {
        let f = Arc::new(f);
        let g = f.clone();
        ChronMap::new(move |t| t.iter().map(|m| f(m)).collect::<Vec<_>>().into())
            .with_run_rule(move |r| Ok(r.map_moves(|m| g(m))))
    }

    /// The map whose run extension is the given table on the basis of a regular domain.
    /// Fails unless the table is Δ-nonexpanding, which is exactly when a
    /// chronological map with that run extension exists.
    pub fn from_run_table(domain: &RegularGame, table: BTreeMap<Run, Run>) -> Result<ChronMap> {
        let runs = domain.basis();
        for r in &runs {
            if !table.contains_key(r) {
                return Err(GameError::rejected(format!("run table misses {r}")));
            }
        }
        for (i, r) in runs.iter().enumerate() {
            for s in &runs[i + 1..] {
                let d = r.delta(s);
                if table[r].delta(&table[s]) < d {
                    let n = d.finite().unwrap_or(0);
                    return Err(GameError::NotChronological {
                        witness: r.truncate(n),
                        reason: format!("runs {r} and {s} agree up to {n} but their images do not"),
                    });
                }
            }
        }
        let table = Arc::new(table);
        let t2 = table.clone();
        let runs = Arc::new(runs);
        Ok(ChronMap::new(move |t| {
            match runs.iter().find(|r| r.extends(t)) {
                Some(r) => table[r].truncate(t.len()),
                None => Moment::from(t),
            }
        })
        .with_run_rule(move |r| {
            t2.get(r).cloned().ok_or_else(|| GameError::rejected(format!("{r} is not a basis run of the domain")))
        }))
    }

    /// The composite `g∘self`.
    pub fn then(&self, g: &ChronMap) -> ChronMap {
        compose(g, self)
    }
}

/// The composite `g∘f`.
pub fn compose(g: &ChronMap, f: &ChronMap) -> ChronMap {
    let (f1, g1) = (f.clone(), g.clone());
    let (f2, g2) = (f.clone(), g.clone());
    ChronMap::new(move |t| g1.apply(&f1.apply(t)))
        .with_run_rule(move |r| g2.run_image(&f2.run_image(r)?))
        .with_lag(f.lag.max(g.lag))
}

/// The run image `f̄(R)`.
pub fn run_image(f: &ChronMap, r: &Run) -> Result<Run> {
    f.run_image(r)
}

/// The run extension of `f` on every basis run of a regular domain.
pub fn run_table(f: &ChronMap, domain: &RegularGame) -> Result<BTreeMap<Run, Run>> {
    domain.runs().map(|(r, _)| Ok((r.clone(), f.run_image(r)?))).collect()
}

/// Checks length and truncation preservation on all moments of length ≤ depth.
pub fn check_chronological(f: &ChronMap, tree: &GameTree, depth: usize, cap: usize) -> Result<()> {
    let frag = truncate(tree, depth, cap)?;
    for t in &frag.moments {
        let img = f.apply(t);
        if img.len() != t.len() {
            return Err(GameError::NotChronological {
                witness: t.clone(),
                reason: format!("image {img} has length {}", img.len()),
            });
        }
        if let Some(k) = (0..t.len()).find(|&k| f.apply(&t[..k]) != img.truncated(k)) {
            return Err(GameError::NotChronological {
                witness: t.clone(),
                reason: format!("image of the truncation to {k} is not the truncated image"),
            });
        }
    }
    Ok(())
}

/// Checks that the run rule agrees with the moment oracle on all basis runs.
pub fn check_run_rule(f: &ChronMap, domain: &RegularGame) -> Result<()> {
    for (r, _) in domain.runs() {
        let img = f.run_image(r)?;
        let probe = r.horizon() + 2 * f.lag * lcm(r.period(), 2);
        if f.apply(&r.truncate(probe)) != img.truncate(probe) {
            return Err(GameError::Integrity { probe, reason: format!("run rule disagrees with moments on {r}") });
        }
    }
    Ok(())
}

/// A counterexample attached to a false verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Moment(Moment),
    MomentPair(Moment, Moment),
    Run(Run),
    RunPair(Run, Run),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Moment(t) => write!(f, "{t}"),
            Witness::MomentPair(t, s) => write!(f, "{t}, {s}"),
            Witness::Run(r) => write!(f, "{r}"),
            Witness::RunPair(r, s) => write!(f, "{r}, {s}"),
        }
    }
}

/// A verdict that records whether it is exact and why it failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub holds: bool,
    /// True when the verdict quantifies over all runs, false when it is verified up to a depth or sample.
    pub exact: bool,
    pub witness: Option<Witness>,
}

impl Check {
    fn pass(exact: bool) -> Check {
        Check { holds: true, exact, witness: None }
    }

    fn fail(witness: Witness) -> Check {
        Check { holds: false, exact: true, witness: Some(witness) }
    }
}

/// All morphism-class flags of a chronological map between two games.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismProfile {
    pub is_a: Check,
    pub is_b: Check,
    pub mono: Check,
    pub injective: Check,
    pub epi: Check,
    pub run_surjective: Check,
    pub embedding: Check,
    pub locally_surjective: Check,
}

/// The runs to quantify over: the exact basis when present, else a sample of short runs.
fn runs_of(g: &Game, depth: usize) -> Result<(RegularGame, bool)> {
    match g.regular() {
        Some(r) => Ok((r.clone(), true)),
        None => {
            let probe = 2 * depth + 8;
            Ok((RegularGame::from_game(g, depth.min(4), 2, probe, DEFAULT_CAP)?, false))
        }
    }
}

/// Computes the morphism profile of `f: g1 → g2`.
///
/// Run quantifiers use the regular bases of the games when available and a sample of
/// short eventually periodic runs otherwise, flagging such verdicts as inexact.
/// Moment quantifiers run up to `depth`, extended to the separation depth of a
/// regular game, past which they are exact.
pub fn profile(f: &ChronMap, g1: &Game, g2: &Game, depth: usize) -> Result<MorphismProfile> {
    let d1 = g1.regular().map_or(depth, |r| depth.max(r.horizon() + 1));
    let d2 = g2.regular().map_or(depth, |r| depth.max(r.horizon() + 1));
    let deep = d1.max(d2);
    check_chronological(f, &g1.tree, deep, DEFAULT_CAP)?;
    let (b1, exact1) = runs_of(g1, depth)?;
    let images = run_table(f, &b1)?;

    let mut is_a = Check::pass(exact1);
    let mut is_b = Check::pass(exact1);
    for (r, p) in b1.runs() {
        let q = evaluate(g2, &images[r])?;
        if p == Player::Alice && q == Player::Bob && is_a.holds {
            is_a = Check::fail(Witness::Run(r.clone()));
        }
        if p == Player::Bob && q == Player::Alice && is_b.holds {
            is_b = Check::fail(Witness::Run(r.clone()));
        }
    }

    let mut mono = Check::pass(exact1);
    let mut seen: BTreeMap<&Run, &Run> = BTreeMap::new();
    for (r, img) in &images {
        if let Some(prev) = seen.insert(img, r) {
            mono = Check::fail(Witness::RunPair(prev.clone(), r.clone()));
            break;
        }
    }

    let frag1 = truncate(&g1.tree, deep, DEFAULT_CAP)?;
    let mut injective = Check::pass(g1.regular().is_some());
    let mut by_image: BTreeMap<Moment, Moment> = BTreeMap::new();
    let mut image_set: BTreeSet<Moment> = BTreeSet::new();
    for t in &frag1.moments {
        let img = f.apply(t);
        image_set.insert(img.clone());
        if let Some(prev) = by_image.insert(img, t.clone()) {
            if injective.holds {
                injective = Check::fail(Witness::MomentPair(prev, t.clone()));
            }
        }
    }

    let epi_depth = d2.min(deep);
    let frag2 = truncate(&g2.tree, epi_depth, DEFAULT_CAP)?;
    let epi_exact = g1.regular().is_some() && g2.regular().is_some();
    let epi = match frag2.moments.iter().find(|u| !image_set.contains(*u)) {
        Some(u) => Check::fail(Witness::Moment(u.clone())),
        None => Check::pass(epi_exact),
    };

    let (b2, exact2) = runs_of(g2, depth)?;
    let hit: BTreeSet<&Run> = images.values().collect();
    let run_surjective = match b2.runs().find(|(s, _)| !hit.contains(s)) {
        Some((s, _)) => Check::fail(Witness::Run(s.clone())),
        None => Check::pass(exact1 && exact2),
    };

    let embedding = if !injective.holds {
        injective.clone()
    } else if !is_a.holds {
        is_a.clone()
    } else if !is_b.holds {
        is_b.clone()
    } else {
        Check::pass(injective.exact && is_a.exact)
    };

    let locally_surjective = match local_surjectivity_witness(f, &g1.tree, &g2.tree, deep)? {
        Some((t, u)) => Check::fail(Witness::MomentPair(t, u)),
        None => {
            if g1.is_empty() && !g2.is_empty() {
                Check::fail(Witness::Moment(Moment::root()))
            } else {
                Check::pass(g1.regular().is_some() && g2.regular().is_some())
            }
        }
    };

    Ok(MorphismProfile { is_a, is_b, mono, injective, epi, run_surjective, embedding, locally_surjective })
}

/// The first `(t, f(t)⌢y)` at which `f` fails to lift a codomain move, searching
/// moments of length < depth in breadth-first order.
pub fn local_surjectivity_witness(
    f: &ChronMap,
    dom: &GameTree,
    cod: &GameTree,
    depth: usize,
) -> Result<Option<(Moment, Moment)>> {
    let frag = truncate(dom, depth.saturating_sub(1), DEFAULT_CAP)?;
    for t in &frag.moments {
        if let Some(u) = unlifted_child(f, dom, cod, t) {
            return Ok(Some((t.clone(), u)));
        }
    }
    Ok(None)
}

/// A codomain child of `f(t)` with no lift at `t`, if any.
pub fn unlifted_child(f: &ChronMap, dom: &GameTree, cod: &GameTree, t: &[Move]) -> Option<Moment> {
    let ft = f.apply(t);
    let lifted: BTreeSet<Move> = dom
        .children(t)
        .into_iter()
        .map(|x| {
            let mut s = t.to_vec();
            s.push(x);
            f.apply(&s)[t.len()].clone()
        })
        .collect();
    cod.children(&ft).into_iter().find(|y| !lifted.contains(y)).map(|y| ft.child(y))
}

/// The section `g_t` of a locally surjective `f`: a chronological right inverse
/// through `t`. Children of the domain are tried in tree order.
pub fn section(f: &ChronMap, dom: &GameTree, t: &[Move]) -> ChronMap {
    let (f, dom, t) = (f.clone(), dom.clone(), Moment::from(t));
    ChronMap::new(move |s| {
        let mut out: Vec<Move> = Vec::with_capacity(s.len());
        for n in 0..s.len() {
            if n < t.len() && f.apply(&t[..n + 1])[..] == s[..n + 1] && out[..] == t[..n] {
                out.push(t[n].clone());
                continue;
            }
            let pick = dom.children(&out).into_iter().find(|x| {
                let mut c = out.clone();
                c.push(x.clone());
                f.apply(&c)[n] == s[n]
            });
            match pick {
                Some(x) => out.push(x),
                None => break,
            }
        }
        Moment(out)
    })
}

/// Moments of `dom` mapping onto `u`, found by a search that follows prefixes of `u`.
pub fn preimages(f: &ChronMap, dom: &GameTree, u: &[Move]) -> Vec<Moment> {
    if dom.is_empty() {
        return Vec::new();
    }
    let mut frontier = vec![Moment::root()];
    for n in 0..u.len() {
        let mut next = Vec::new();
        for t in &frontier {
            for x in dom.children(t) {
                let c = t.child(x);
                if f.apply(&c)[n] == u[n] {
                    next.push(c);
                }
            }
        }
        frontier = next;
    }
    frontier
}

/// The image tree `f[T]` of a subtree of the domain.
pub fn image_subgame(f: &ChronMap, subtree: &GameTree) -> GameTree {
    if subtree.is_empty() {
        return GameTree::empty();
    }
    let (f, sub) = (f.clone(), subtree.clone());
    GameTree::new(move |u| {
        let mut kids = BTreeSet::new();
        for t in preimages(&f, &sub, u) {
            for x in sub.children(&t) {
                let c = t.child(x);
                kids.insert(f.apply(&c)[u.len()].clone());
            }
        }
        kids.into_iter().collect()
    })
}

/// The image of a regular subgame, winners read from the codomain payoff.
pub fn image_regular(f: &ChronMap, sub: &RegularGame, cod: &Game) -> Result<RegularGame> {
    let mut out = BTreeMap::new();
    for (r, _) in sub.runs() {
        let img = f.run_image(r)?;
        let p = evaluate(cod, &img)?;
        out.insert(img, p);
    }
    Ok(RegularGame::from_map(out))
}

/// A materialized preimage `f⁻¹(T″)` with its prunedness verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageReport {
    pub moments: Vec<Moment>,
    pub pruned: bool,
    /// A moment of length below the depth with no continuation in the preimage.
    pub witness: Option<Moment>,
}

/// Materializes `f⁻¹(target)` up to `depth` and reports the first dead end.
pub fn preimage_tree(f: &ChronMap, dom: &GameTree, target: &GameTree, depth: usize) -> Result<PreimageReport> {
    let mut moments = Vec::new();
    let mut witness = None;
    if !dom.is_empty() && target.contains(&f.apply(&[])) {
        let mut queue = VecDeque::from([Moment::root()]);
        while let Some(t) = queue.pop_front() {
            if moments.len() >= DEFAULT_CAP {
                return Err(GameError::Cap { cap: DEFAULT_CAP, moment: t });
            }
            if t.len() < depth {
                let mut any = false;
                for x in dom.children(&t) {
                    let c = t.child(x);
                    if target.contains(&f.apply(&c)) {
                        any = true;
                        queue.push_back(c);
                    }
                }
                if !any && witness.is_none() {
                    witness = Some(t.clone());
                }
            }
            moments.push(t);
        }
    }
    Ok(PreimageReport { moments, pruned: witness.is_none(), witness })
}

/// The pruned preimage of a regular target: the domain runs whose image is a target run.
pub fn preimage_regular(f: &ChronMap, dom: &RegularGame, target: &RegularGame) -> Result<RegularGame> {
    let mut out = BTreeMap::new();
    for (r, p) in dom.runs() {
        if target.winner(&f.run_image(r)?).is_some() {
            out.insert(r.clone(), p);
        }
    }
    Ok(RegularGame::from_map(out))
}

/// Outcome of a quotient-map check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientVerdict {
    pub holds: bool,
    /// The level at which linking failed.
    pub level: Option<usize>,
    /// Two moments with the same image that no chain of runs links.
    pub witness: Option<(Moment, Moment)>,
}

fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut Vec<usize>, a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Decides the quotient-map condition at every level `0..=n`.
///
/// At level N the relation "both extend runs with the same image" is closed
/// transitively and compared with the fibers of `f`. Levels are checked in order and
/// each level first checks surjectivity onto the codomain level.
pub fn is_quotient(f: &ChronMap, dom: &RegularGame, cod: &GameTree, n: usize) -> Result<QuotientVerdict> {
    let images = run_table(f, dom)?;
    let mut by_image: BTreeMap<&Run, Vec<&Run>> = BTreeMap::new();
    for (r, img) in &images {
        by_image.entry(img).or_default().push(r);
    }
    for level in 0..=n {
        let moments = dom.level(level);
        let index: BTreeMap<&Moment, usize> = moments.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let imgs: Vec<Moment> = moments.iter().map(|t| f.apply(t)).collect();
        let hit: BTreeSet<&Moment> = imgs.iter().collect();
        for u in cod.level(level, DEFAULT_CAP)? {
            if !hit.contains(&u) {
                return Err(GameError::NotSurjective { missing: u });
            }
        }
        let mut parent: Vec<usize> = (0..moments.len()).collect();
        for group in by_image.values() {
            let first = index[&group[0].truncate(level)];
            for r in &group[1..] {
                union(&mut parent, first, index[&r.truncate(level)]);
            }
        }
        let mut fiber_rep: BTreeMap<&Moment, usize> = BTreeMap::new();
        for (i, img) in imgs.iter().enumerate() {
            match fiber_rep.get(img) {
                Some(&j) => {
                    if find(&mut parent, i) != find(&mut parent, j) {
                        return Ok(QuotientVerdict {
                            holds: false,
                            level: Some(level),
                            witness: Some((moments[j].clone(), moments[i].clone())),
                        });
                    }
                }
                None => {
                    fiber_rep.insert(img, i);
                }
            }
        }
    }
    Ok(QuotientVerdict { holds: true, level: None, witness: None })
}

/// A shortest chain `R_0, …, R_k` attesting that `t` and `s` are linked at level `|t|`:
/// `t = R_0↾N`, `s = R_k↾N`, even steps agree up to N, odd steps have equal images.
pub fn quotient_chain(f: &ChronMap, dom: &RegularGame, t: &[Move], s: &[Move]) -> Result<Option<Vec<Run>>> {
    let n = t.len();
    let runs = dom.basis();
    let images: Vec<Run> = runs.iter().map(|r| f.run_image(r)).collect::<Result<_>>()?;
    let mut prev: BTreeMap<(usize, bool), Option<(usize, bool)>> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for (i, r) in runs.iter().enumerate() {
        if r.extends(t) {
            prev.insert((i, false), None);
            queue.push_back((i, false));
        }
    }
    while let Some((i, odd)) = queue.pop_front() {
        if runs[i].extends(s) {
            let mut chain = vec![runs[i].clone()];
            let mut cur = (i, odd);
            while let Some(Some(p)) = prev.get(&cur) {
                chain.push(runs[p.0].clone());
                cur = *p;
            }
            chain.reverse();
            return Ok(Some(chain));
        }
        for j in 0..runs.len() {
            let linked = if odd { images[i] == images[j] } else { runs[i].delta(&runs[j]) >= Code::Fin(n) };
            let key = (j, !odd);
            if linked && !prev.contains_key(&key) {
                prev.insert(key, Some((i, odd)));
                queue.push_back(key);
            }
        }
    }
    Ok(None)
}

/// A violation of the strict-quotient condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrictWitness {
    /// A codomain run outside the image of `f̄`.
    Missed(Run),
    /// Distinct codomain runs whose preimage pairs all separate earlier than they do.
    Gap { r: Run, r2: Run, delta: Code, best_preimage_delta: Code },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictVerdict {
    pub holds: bool,
    pub witness: Option<StrictWitness>,
}

/// Decides the strict-quotient condition by scanning all pairs of codomain runs.
pub fn is_strict_quotient(f: &ChronMap, dom: &RegularGame, cod: &RegularGame) -> Result<StrictVerdict> {
    let images = run_table(f, dom)?;
    let mut fibers: BTreeMap<&Run, Vec<&Run>> = BTreeMap::new();
    for (r, img) in &images {
        fibers.entry(img).or_default().push(r);
    }
    let targets = cod.basis();
    for r in &targets {
        if !fibers.contains_key(r) {
            return Ok(StrictVerdict { holds: false, witness: Some(StrictWitness::Missed(r.clone())) });
        }
    }
    for (i, r) in targets.iter().enumerate() {
        for r2 in &targets[i + 1..] {
            let delta = r.delta(r2);
            let mut best = Code::Fin(0);
            for s in &fibers[r] {
                for s2 in &fibers[r2] {
                    best = best.max(s.delta(s2));
                }
            }
            if best != delta {
                return Ok(StrictVerdict {
                    holds: false,
                    witness: Some(StrictWitness::Gap { r: r.clone(), r2: r2.clone(), delta, best_preimage_delta: best }),
                });
            }
        }
    }
    Ok(StrictVerdict { holds: true, witness: None })
}

/// The A-morphism from the generating game that unfolds a run.
pub fn run_to_morphism(g: &Game, r: &Run) -> Result<ChronMap> {
    evaluate(g, r)?;
    let (r1, r2) = (r.clone(), r.clone());
    Ok(ChronMap::new(move |t| r1.truncate(t.len())).with_run_rule(move |_| Ok(r2.clone())))
}

/// The least moment (by length, then tree order) on which two maps disagree.
pub fn first_disagreement(f: &ChronMap, g: &ChronMap, dom: &GameTree, depth: usize) -> Result<Option<Moment>> {
    let frag = truncate(dom, depth, DEFAULT_CAP)?;
    Ok(frag.moments.into_iter().find(|t| f.apply(t) != g.apply(t)))
}

/// A map `h` into the cogenerating game with `h∘f ≠ h∘g`, or `None` when `f` and `g`
/// agree up to `depth`. With `s` the least disagreement, `h` sends `t` to
/// `1^{|s|}⌢0^{|t|-|s|}` when `|t| > |s|` and `t↾|s| = f(s)`, and to `1^{|t|}` otherwise.
/// The composites then differ on every one-move extension of `s`.
pub fn separating_map(f: &ChronMap, g: &ChronMap, dom: &GameTree, depth: usize) -> Result<Option<(ChronMap, Moment)>> {
    let Some(s) = first_disagreement(f, g, dom, depth)? else { return Ok(None) };
    let fs = f.apply(&s);
    let (fs1, fs2) = (fs.clone(), fs.clone());
    let one = Move::atom("1");
    let zero = Move::atom("0");
    let (one2, zero2) = (one.clone(), zero.clone());
    let h = ChronMap::new(move |t| {
        let k = fs1.len();
        if t.len() > k && t[..k] == fs1[..] {
            (0..t.len()).map(|i| if i < k { one.clone() } else { zero.clone() }).collect::<Vec<_>>().into()
        } else {
            vec![one.clone(); t.len()].into()
        }
    })
    .with_run_rule(move |r| {
        if r.extends(&fs2) {
            Ok(Run::constant(vec![one2.clone(); fs2.len()], zero2.clone()))
        } else {
            Ok(Run::constant(vec![], one2.clone()))
        }
    });
    Ok(Some((h, s)))
}

/// Whether two maps agree on all moments of length ≤ depth.
pub fn agree_upto(f: &ChronMap, g: &ChronMap, dom: &GameTree, depth: usize) -> Result<bool> {
    Ok(first_disagreement(f, g, dom, depth)?.is_none())
}

/// Human-readable summary line for a check.
pub fn describe(name: &str, c: &Check) -> String {
    match (&c.witness, c.holds) {
        (_, true) => format!("{name}: true{}", if c.exact { "" } else { " (verified up to depth)" }),
        (Some(w), false) => format!("{name}: false, witness {w}"),
        (None, false) => format!("{name}: false"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{atoms, canonical, cogenerating};

    #[test]
    fn identity_profile_on_terminal() {
        let t = canonical("terminal").unwrap();
        let p = profile(&ChronMap::identity(), &t, &t, 4).unwrap();
        for c in [&p.is_a, &p.is_b, &p.mono, &p.injective, &p.epi, &p.run_surjective, &p.embedding, &p.locally_surjective] {
            assert!(c.holds);
        }
    }

    #[test]
    fn probe_infers_periodic_image() {
        let f = ChronMap::new(|t| t.iter().map(|m| Move::tagged("x", m.clone())).collect::<Vec<_>>().into());
        let r = Run::new(atoms(&["a"]), atoms(&["b", "c"]));
        let img = f.run_image(&r).unwrap();
        assert_eq!(img, r.map_moves(|m| Move::tagged("x", m.clone())));
    }

    #[test]
    fn probe_catches_aperiodic_image() {
        // Writes 1 at positions that are powers of two.
        let f = ChronMap::new(|t| {
            (0..t.len()).map(|i| Move::atom(if (i + 1).is_power_of_two() { "1" } else { "0" })).collect::<Vec<_>>().into()
        });
        assert!(matches!(f.run_image(&Run::constant(vec![], Move::atom("*"))), Err(GameError::Integrity { .. })));
    }

    #[test]
    fn separating_map_splits_after_disagreement() {
        let cog = cogenerating();
        let f = ChronMap::identity();
        let g = ChronMap::new(|t| {
            let mut v: Vec<Move> = t.to_vec();
            if !v.is_empty() {
                v[0] = Move::atom("1");
            }
            v.into()
        });
        let (h, s) = separating_map(&f, &g, &cog.tree, 3).unwrap().unwrap();
        assert_eq!(s, Moment(atoms(&["0"])));
        check_chronological(&h, &cog.tree, 5, 1000).unwrap();
        let hf = f.then(&h);
        let hg = g.then(&h);
        let ext = s.child(Move::atom("0"));
        assert_eq!(hf.apply(&ext), Moment(atoms(&["1", "0"])));
        assert_eq!(hg.apply(&ext), Moment(atoms(&["1", "1"])));
        assert!(separating_map(&f, &f, &cog.tree, 4).unwrap().is_none());
    }
}
