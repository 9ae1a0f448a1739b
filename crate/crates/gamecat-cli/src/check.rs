//! The `check` suites and their plain-text report.

use std::fmt;
use std::time::{Duration, Instant};

use gamecat_core::combinators::gallery::{counterexample, SCENARIOS};
use gamecat_core::combinators::limits::{coproduct, d_b_regular, product};
use gamecat_core::combinators::{compose_tables, table_preserves, Mode};
use gamecat_core::game::{canonical_game, truncate, Canonical};
use gamecat_core::metric::{ball_roundtrip, is_seqspa, krom_space, run_space};
use gamecat_core::morphism::{check_chronological, first_disagreement, run_table};
use gamecat_core::random::{self, Shape};
use gamecat_core::strategy::has_winning_strategy;
use gamecat_core::topo::{
    self, naturality_check, theta_eta, verify_universality, FinSpace, FunctionFamily, RationalFn, Sampling,
    Selection, SpaceMap, Target, Transform,
};
use gamecat_core::{ChronMap, Game, GameError, Player, RegularGame};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::spec::{Loaded, TopoInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Laws,
    Counterexamples,
    Metric,
    Topo,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Laws, Suite::Counterexamples, Suite::Metric, Suite::Topo],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Laws => "laws",
            Suite::Counterexamples => "counterexamples",
            Suite::Metric => "metric",
            Suite::Topo => "topo",
            Suite::All => "all",
        }
    }
}

/// Number of components used by the counterexample constructions.
pub const GALLERY_COMPONENTS: usize = 4;
/// Randomized instances per seeded law.
const RANDOM_INSTANCES: usize = 30;
/// Largest run basis handed to the universality check.
const UNIVERSALITY_RUNS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The check needed more than the cap at the given depth.
    Undecided { depth: usize },
}

/// One check of a report with its detail or witness.
#[derive(Debug, Clone)]
pub struct Entry {
    pub suite: &'static str,
    pub check: String,
    pub verdict: Verdict,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = match self.verdict {
            Verdict::Pass => "pass".to_string(),
            Verdict::Fail => "fail".to_string(),
            Verdict::Undecided { depth } => format!("undecided-at-depth-{depth}"),
        };
        write!(f, "{} {} {v}", self.suite, self.check)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Report {
    pub suite: Suite,
    pub depth: usize,
    pub seed: u64,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.verdict == Verdict::Fail).count()
    }

    pub fn undecided(&self) -> usize {
        self.entries.iter().filter(|e| matches!(e.verdict, Verdict::Undecided { .. })).count()
    }

    /// Per-check timings, kept out of the report body so that reports stay identical
    /// across runs.
    pub fn timings(&self) -> String {
        self.entries
            .iter()
            .map(|e| format!("{} {} {:.3}s\n", e.suite, e.check, e.elapsed.as_secs_f64()))
            .collect()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "report suite={} depth={} seed={}", self.suite.name(), self.depth, self.seed)?;
        for e in &self.entries {
            writeln!(f, "{e}")?;
        }
        let pass = self.entries.len() - self.failed() - self.undecided();
        writeln!(f, "summary pass={pass} fail={} undecided={}", self.failed(), self.undecided())
    }
}

/// Settings shared by every suite.
#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub depth: usize,
    pub seed: u64,
    pub cap: usize,
}

struct Recorder {
    settings: Settings,
    suite: &'static str,
    entries: Vec<Entry>,
}

impl Recorder {
    /// Runs a check. `Ok((true, _))` passes, a cap error is undecided at the suite depth,
    /// and any other error fails with the error as witness.
    fn check(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<(bool, String), GameError>) {
        let start = Instant::now();
        let (verdict, detail) = match f() {
            Ok((true, d)) => (Verdict::Pass, d),
            Ok((false, d)) => (Verdict::Fail, d),
            Err(e @ GameError::Cap { .. }) => (Verdict::Undecided { depth: self.settings.depth }, e.to_string()),
            Err(e) => (Verdict::Fail, e.to_string()),
        };
        self.entries.push(Entry { suite: self.suite, check: name.into(), verdict, detail, elapsed: start.elapsed() });
    }

    fn undecided(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.entries.push(Entry {
            suite: self.suite,
            check: name.into(),
            verdict: Verdict::Undecided { depth: self.settings.depth },
            detail: detail.into(),
            elapsed: Duration::ZERO,
        });
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The four canonical games, used when no spec is given.
pub fn canonical_specs() -> Vec<Loaded> {
    [
        (Canonical::Empty, "empty"),
        (Canonical::Terminal, "terminal"),
        (Canonical::Generating, "generating"),
        (Canonical::Cogenerating, "cogenerating"),
    ]
    .into_iter()
    .map(|(c, n)| Loaded::canonical(c, n))
    .collect()
}

/// Runs the requested suites over the given specs in a fixed order.
pub fn run(suite: Suite, specs: &[Loaded], settings: Settings) -> Report {
    let mut entries = Vec::new();
    for s in suite.members() {
        let mut rec = Recorder { settings, suite: s.name(), entries: Vec::new() };
        match s {
            Suite::Laws => laws(&mut rec, specs),
            Suite::Counterexamples => counterexamples(&mut rec),
            Suite::Metric => metric(&mut rec, specs),
            Suite::Topo => topo_suite(&mut rec, specs),
            Suite::All => unreachable!("expanded by members"),
        }
        entries.extend(rec.entries);
    }
    Report { suite, depth: settings.depth, seed: settings.seed, entries }
}

fn level_counts(g: &Game, depth: usize, cap: usize) -> Result<Vec<usize>, GameError> {
    let frag = truncate(&g.tree, depth, cap)?;
    Ok((0..=depth).map(|k| frag.at_depth(k).count()).collect())
}

fn laws(rec: &mut Recorder, specs: &[Loaded]) {
    let Settings { depth, seed, cap } = rec.settings;
    let defaults;
    let specs = if specs.is_empty() {
        defaults = canonical_specs();
        &defaults[..]
    } else {
        specs
    };
    let terminal = canonical_game(Canonical::Terminal);
    let empty = canonical_game(Canonical::Empty);
    for s in specs {
        let g = &s.game;
        rec.check(format!("{}/pruned", s.name), || {
            let frag = truncate(&g.tree, depth, cap)?;
            match frag.moments.iter().find(|t| t.len() < depth && g.tree.children(t).is_empty()) {
                Some(t) => Ok((false, format!("{t} has no move"))),
                None => Ok((true, format!("{} moments", frag.len()))),
            }
        });
        rec.check(format!("{}/identity-chronological", s.name), || {
            check_chronological(&ChronMap::identity(), &g.tree, depth, cap).map(|_| (true, String::new()))
        });
        rec.check(format!("{}/identity-unit", s.name), || {
            let id = ChronMap::identity();
            match first_disagreement(&id.then(&id), &id, &g.tree, depth)? {
                Some(t) => Ok((false, format!("differs at {t}"))),
                None => Ok((true, String::new())),
            }
        });
        rec.check(format!("{}/terminal-product-unit", s.name), || {
            let p = product(&[g.clone(), terminal.clone()], Mode::A);
            let (a, b) = (level_counts(g, depth, cap)?, level_counts(&p.game, depth, cap)?);
            Ok((a == b, format!("levels {a:?} against {b:?}")))
        });
        rec.check(format!("{}/empty-coproduct-unit", s.name), || {
            let c = coproduct(&[g.clone(), empty.clone()]);
            let (a, b) = (level_counts(g, depth, cap)?, level_counts(&c.game, depth, cap)?);
            Ok((a == b, format!("levels {a:?} against {b:?}")))
        });
        if let Some(r) = &s.regular {
            rec.check(format!("{}/determinacy", s.name), || {
                let (a, b) = (has_winning_strategy(r, Player::Alice), has_winning_strategy(r, Player::Bob));
                let holds = if r.is_empty() { !a && !b } else { a != b };
                Ok((holds, format!("alice {a}, bob {b}")))
            });
            if r.is_empty() {
                continue;
            }
            rec.check(format!("{}/quit-extension-keeps-strategies", s.name), || {
                let d = d_b_regular(r, depth);
                let same = [Player::Alice, Player::Bob]
                    .into_iter()
                    .all(|p| has_winning_strategy(r, p) == has_winning_strategy(&d, p));
                Ok((same, String::new()))
            });
        }
    }
    rec.check("random/chronological-composites", || {
        let mut rng = rng(seed);
        for i in 0..RANDOM_INSTANCES {
            let shape = Shape::new(3, 3, 6);
            let (g1, g2, g3) =
                (random::regular_game(&mut rng, shape), random::regular_game(&mut rng, shape), random::regular_game(&mut rng, shape));
            let (t1, f) = random::chron_map(&mut rng, &g1, &g2);
            let (t2, g) = random::chron_map(&mut rng, &g2, &g3);
            let fg = f.then(&g);
            check_chronological(&fg, &g1.tree(), depth, cap)?;
            if run_table(&fg, &g1)? != compose_tables(&t1, &t2)? {
                return Ok((false, format!("instance {i}: composite run map differs from the table composite")));
            }
        }
        Ok((true, format!("{RANDOM_INSTANCES} composites")))
    });
    for mode in [Mode::A, Mode::B] {
        let kind = mode.player();
        rec.check(format!("random/{}-morphisms-compose", if kind == Player::Alice { "a" } else { "b" }), || {
            let mut rng = rng(seed.wrapping_add(1));
            let shape = Shape::new(3, 3, 6);
            for i in 0..RANDOM_INSTANCES {
                let g3 = random::regular_game(&mut rng, shape);
                let g2 = random::regular_game(&mut rng, shape);
                let t2 = random::run_map(&mut rng, &g2, &g3);
                let g2 = random::payoff_for_kind(&g2, &g3, &t2, kind);
                let g1 = random::regular_game(&mut rng, shape);
                let t1 = random::run_map(&mut rng, &g1, &g2);
                let g1 = random::payoff_for_kind(&g1, &g2, &t1, kind);
                if !table_preserves(&compose_tables(&t1, &t2)?, &g1, &g3, kind) {
                    return Ok((false, format!("instance {i}: composite loses a {kind} run")));
                }
            }
            Ok((true, format!("{RANDOM_INSTANCES} composites")))
        });
    }
}

fn counterexamples(rec: &mut Recorder) {
    let depth = rec.settings.depth;
    for name in SCENARIOS {
        let sc = match counterexample(name, GALLERY_COMPONENTS) {
            Ok(sc) => sc,
            Err(e) => {
                rec.check(name, || Err(e));
                continue;
            }
        };
        if sc.depth > depth {
            rec.undecided(name, format!("the construction is checked at depth {}", sc.depth));
            continue;
        }
        rec.check(name, || {
            let verdicts = sc.evaluate()?;
            match verdicts.iter().find(|v| !v.agrees()) {
                Some(v) => Ok((false, format!("`{}` expected {} observed {}: {}", v.claim, v.expected, v.observed, v.detail))),
                None => Ok((true, format!("{} claims", verdicts.len()))),
            }
        });
    }
}

fn regular_or_undecided<'a>(rec: &mut Recorder, s: &'a Loaded) -> Option<&'a RegularGame> {
    if s.regular.is_none() {
        rec.undecided(format!("{}/regular", s.name), "the game has no finite run basis");
    }
    s.regular.as_ref()
}

fn metric(rec: &mut Recorder, specs: &[Loaded]) {
    let Settings { seed, .. } = rec.settings;
    let mut games: Vec<(String, RegularGame)> = Vec::new();
    if specs.is_empty() {
        for s in canonical_specs() {
            if let Some(r) = s.regular {
                games.push((s.name, r));
            }
        }
        let mut rng = rng(seed);
        for i in 0..RANDOM_INSTANCES {
            games.push((format!("random{i}"), random::regular_game(&mut rng, Shape::new(3, 4, 8))));
        }
    } else {
        for s in specs {
            if let Some(r) = regular_or_undecided(rec, s) {
                games.push((s.name.clone(), r.clone()));
            }
        }
    }
    for (name, g) in &games {
        let rs = run_space(g);
        rec.check(format!("{name}/strong-triangle"), || match rs.space.strong_triangle_witness() {
            Some((i, j, k)) => Ok((false, format!("points {i}, {j}, {k}"))),
            None => Ok((true, format!("{} points", rs.space.len()))),
        });
        rec.check(format!("{name}/sequence-space"), || Ok((is_seqspa(&rs.space), String::new())));
        rec.check(format!("{name}/ball-roundtrip"), || {
            let rt = ball_roundtrip(&rs.space)?;
            Ok((rt.holds(), format!("bijective {}, isometry {}", rt.bijective, rt.isometry)))
        });
        rec.check(format!("{name}/krom-points"), || {
            let k = krom_space(g);
            let bob = g.runs().filter(|(_, p)| *p == Player::Bob).count();
            Ok((k.space.len() == bob, format!("{} of {} runs", k.space.len(), g.len())))
        });
    }
}

fn q(n: i64, d: i64) -> Ratio<i64> {
    Ratio::new(n, d)
}

fn topo_suite(rec: &mut Recorder, specs: &[Loaded]) {
    let Settings { depth, cap, .. } = rec.settings;
    let defaults;
    let specs = if specs.is_empty() {
        defaults = default_topo_specs();
        &defaults[..]
    } else {
        specs
    };
    for s in specs {
        let Some(g) = regular_or_undecided(rec, s) else { continue };
        if let Some(info) = &s.topo {
            rec.check(format!("{}/winners", s.name), || {
                for (r, p) in g.runs() {
                    let w = match info {
                        TopoInfo::Bm { space, .. } => topo::bm_winner(space, r)?,
                        TopoInfo::Selection { spec, .. } => topo::selection_winner(spec, r)?,
                    };
                    if w != p {
                        return Ok((false, format!("run {r}: payoff {w}, basis {p}")));
                    }
                }
                Ok((true, format!("{} runs", g.len())))
            });
        }
        if g.len() > UNIVERSALITY_RUNS {
            rec.undecided(format!("{}/universality", s.name), format!("{} runs exceed {UNIVERSALITY_RUNS}", g.len()));
        } else {
            rec.check(format!("{}/universality", s.name), || {
                let rep = verify_universality(g, depth)?;
                let detail = rep.witness.clone().unwrap_or_default();
                Ok((rep.holds(), detail))
            });
        }
    }
    let x = FinSpace::discrete_n(2).expect("two points");
    let family = FunctionFamily::new(
        x,
        vec![RationalFn::zero(2), RationalFn::new(vec![q(1, 2), q(0, 1)]), RationalFn::new(vec![q(1, 4), q(-2, 1)])],
    )
    .expect("continuous family with zero");
    for variant in Transform::ALL {
        rec.check(format!("transform/{variant:?}-chronological"), || {
            let tm = theta_eta(&family, variant, Sampling::new(1, 1))?;
            check_chronological(&tm.map, &tm.domain.tree(), depth, cap)?;
            let table = run_table(&tm.map, &tm.domain)?;
            let kind = match variant {
                Transform::Theta | Transform::ThetaGamma => Player::Bob,
                Transform::Eta | Transform::EtaGamma => Player::Alice,
            };
            Ok((table_preserves(&table, &tm.domain, &tm.image, kind), format!("preserves {kind} runs")))
        });
    }
    let f = SpaceMap::constant(&FinSpace::sierpinski(), &FinSpace::point(), 0).expect("constant map");
    let fam_y = FunctionFamily::new(
        FinSpace::point(),
        vec![RationalFn::zero(1), RationalFn::constant(1, q(1, 2)), RationalFn::constant(1, q(1, 1))],
    )
    .expect("continuous family with zero");
    for variant in Transform::ALL {
        rec.check(format!("naturality/{variant:?}"), || {
            let rep = naturality_check(variant, &f, &fam_y, depth, Sampling::new(1, 1), false)?;
            Ok((rep.holds, nat_detail(&rep)))
        });
    }
    rec.check("naturality/mutation-caught", || {
        let rep = naturality_check(Transform::Theta, &f, &fam_y, depth, Sampling::new(1, 1), true)?;
        Ok((!rep.holds, nat_detail(&rep)))
    });
}

fn nat_detail(rep: &topo::NaturalityReport) -> String {
    match (&rep.witness, &rep.reason) {
        (Some(w), _) => format!("witness {w}"),
        (None, Some(r)) => r.clone(),
        (None, None) => format!("{} moments", rep.checked),
    }
}

/// Topological games checked when no spec is given.
fn default_topo_specs() -> Vec<Loaded> {
    let mut out = Vec::new();
    let s = FinSpace::sierpinski();
    if let Ok(g) = topo::bm_game(&s, 3) {
        out.push(Loaded::from_regular(
            "bm-sierpinski",
                        g,
            Some(TopoInfo::Bm { space: s.clone() }),
        ));
    }
    let sample = Sampling::new(1, 1);
    for (name, target) in [("covering-omega-sierpinski", Target::Omega), ("covering-gamma-sierpinski", Target::Gamma)] {
        let spec = Selection::covering(s.clone(), target);
        if let Ok(g) = topo::selection_game(&spec, sample) {
            out.push(Loaded::from_regular(
                name,
                                g,
                Some(TopoInfo::Selection { spec }),
            ));
        }
    }
    out
}
