//! Packaged counterexamples with their expected verdicts.
//!
//! Each scenario materializes regular games and chronological maps and lists claims
//! with the verdict the construction is known to produce. Families indexed by all
//! natural numbers are truncated to `k` components.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use super::limits::{coproduct_regular, projection, pullback, untag_moment, untag_run};
use super::{sum_map, Mode};
use crate::error::{GameError, Result};
use crate::game::{cogenerating, star, Code, Game, Moment, Move, Player, RegularGame, Run};
use crate::morphism::{
    compose, is_quotient, is_strict_quotient, preimage_tree, profile, quotient_chain, ChronMap, StrictWitness,
};

/// The scenario names understood by [`counterexample`].
pub const SCENARIOS: [&str; 6] = [
    "quotient_composite",
    "strict_quotient_gap",
    "mono_noninjective",
    "preimage_unpruned",
    "descent_failure",
    "surjective_not_run_surjective",
];

type ClaimCheck = Arc<dyn Fn(&Scenario) -> Result<(bool, String)> + Send + Sync>;

/// A claim about a scenario with the verdict the construction produces.
#[derive(Clone)]
pub struct Claim {
    pub text: String,
    pub expected: bool,
    check: ClaimCheck,
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Claim").field("text", &self.text).field("expected", &self.expected).finish()
    }
}

/// A named chronological map between two named games of a scenario.
#[derive(Debug, Clone)]
pub struct NamedMap {
    pub name: String,
    pub dom: String,
    pub cod: String,
    pub map: ChronMap,
}

/// The evaluated outcome of a claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub claim: String,
    pub expected: bool,
    pub observed: bool,
    pub detail: String,
}

impl Verdict {
    pub fn agrees(&self) -> bool {
        self.expected == self.observed
    }
}

/// A materialized counterexample.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub k: usize,
    pub depth: usize,
    pub games: Vec<(String, Game)>,
    pub maps: Vec<NamedMap>,
    pub claims: Vec<Claim>,
}

impl Scenario {
    fn new(name: &str, k: usize, depth: usize) -> Scenario {
        Scenario { name: name.into(), k, depth, games: Vec::new(), maps: Vec::new(), claims: Vec::new() }
    }

    fn add_game(&mut self, name: &str, g: Game) {
        self.games.push((name.into(), g));
    }

    fn add_regular(&mut self, name: &str, g: &RegularGame) {
        self.add_game(name, g.game());
    }

    fn add_map(&mut self, name: &str, dom: &str, cod: &str, map: ChronMap) {
        self.maps.push(NamedMap { name: name.into(), dom: dom.into(), cod: cod.into(), map });
    }

    fn claim(
        &mut self,
        text: impl Into<String>,
        expected: bool,
        check: impl Fn(&Scenario) -> Result<(bool, String)> + Send + Sync + 'static,
    ) {
        self.claims.push(Claim { text: text.into(), expected, check: Arc::new(check) });
    }

    /// The game of the given name.
    pub fn game(&self, name: &str) -> Result<&Game> {
        self.games
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, g)| g)
            .ok_or_else(|| GameError::rejected(format!("scenario {} has no game {name}", self.name)))
    }

    /// The regular game of the given name.
    pub fn regular(&self, name: &str) -> Result<&RegularGame> {
        self.game(name)?.regular().ok_or_else(|| GameError::rejected(format!("game {name} is not regular")))
    }

    /// The map of the given name.
    pub fn map(&self, name: &str) -> Result<&ChronMap> {
        self.maps
            .iter()
            .find(|m| m.name == name)
            .map(|m| &m.map)
            .ok_or_else(|| GameError::rejected(format!("scenario {} has no map {name}", self.name)))
    }

    /// Evaluates every claim.
    pub fn evaluate(&self) -> Result<Vec<Verdict>> {
        self.claims
            .iter()
            .map(|c| {
                let (observed, detail) = (c.check)(self)?;
                Ok(Verdict { claim: c.text.clone(), expected: c.expected, observed, detail })
            })
            .collect()
    }
}

fn atom(s: &str) -> Move {
    Move::atom(s)
}

fn stars(n: usize) -> Vec<Move> {
    vec![star(); n]
}

fn moment_text(t: &[Move]) -> String {
    Moment::from(t).to_string()
}

/// A quotient check of a named map onto a named regular codomain, reported with its
/// witness pair.
fn quotient_claim(map: &'static str, dom: &'static str, cod: &'static str) -> impl Fn(&Scenario) -> Result<(bool, String)> {
    move |s: &Scenario| {
        let v = is_quotient(s.map(map)?, s.regular(dom)?, &s.regular(cod)?.tree(), s.depth)?;
        let detail = match (&v.level, &v.witness) {
            (Some(l), Some((a, b))) => format!("level {l}: {a} and {b} share an image but are not linked"),
            _ => format!("fibres linked on levels 0..={}", s.depth),
        };
        Ok((v.holds, detail))
    }
}

/// Builds the named scenario with `k` components where a family is infinite.
pub fn counterexample(name: &str, k: usize) -> Result<Scenario> {
    match name {
        "quotient_composite" => quotient_composite(k),
        "strict_quotient_gap" => Ok(strict_quotient_gap()),
        "mono_noninjective" => Ok(mono_noninjective()),
        "preimage_unpruned" => Ok(preimage_unpruned()),
        "descent_failure" => Ok(descent_failure()),
        "surjective_not_run_surjective" => surjective_not_run_surjective(k),
        other => Err(GameError::rejected(format!("unknown scenario {other}; known: {}", SCENARIOS.join(", ")))),
    }
}

/// `T_n`: `n` stars, then a constant 0 or 1. Winners are all Bob.
fn t_component(n: usize) -> RegularGame {
    RegularGame::from_map(
        ["0", "1"].iter().map(|x| (Run::constant(stars(n), atom(x)), Player::Bob)).collect(),
    )
}

/// The map `q: ⊔T_n → Q` reading the digit after the stars as one extra star.
fn q_map() -> ChronMap {
    ChronMap::new(|t| {
        let Some((n, inner)) = untag_moment(t) else { return Moment::from(t) };
        let len = inner.len();
        if len > n {
            let a = n + usize::from(inner[n] == atom("1"));
            let mut out = stars(a);
            out.extend(core::iter::repeat_n(atom("0"), len - a));
            Moment(out)
        } else {
            Moment(stars(len))
        }
    })
    .with_run_rule(|r| {
        let (n, inner) = untag_run(r).ok_or_else(|| GameError::rejected(format!("{r} is not a coproduct run")))?;
        let a = n + usize::from(*inner.at(n) == atom("1"));
        Ok(Run::constant(stars(a), atom("0")))
    })
}

/// `Q` up to `k+1` stars before the zeros, optionally with the all-star run.
fn q_game(k: usize, with_stars: bool) -> RegularGame {
    let mut map: alloc::collections::BTreeMap<Run, Player> =
        (0..=k).map(|a| (Run::constant(stars(a), atom("0")), Player::Bob)).collect();
    if with_stars {
        map.insert(Run::constant(Vec::new(), star()), Player::Bob);
    }
    RegularGame::from_map(map)
}

/// The map `c: Q⊔Q → C` writing the copy index in place of the zeros.
fn c_map() -> ChronMap {
    ChronMap::letterwise(|m| {
        let tag = m.component_tag().unwrap_or("0").to_string();
        match m.untagged() {
            Some(inner) if *inner == atom("0") => atom(&tag),
            Some(inner) => inner.clone(),
            None => m.clone(),
        }
    })
}

fn quotient_composite(k: usize) -> Result<Scenario> {
    if k < 2 {
        return Err(GameError::rejected("quotient_composite needs at least 2 components"));
    }
    let mut s = Scenario::new("quotient_composite", k, 6);
    let t = coproduct_regular(&(0..k).map(t_component).collect::<Vec<_>>());
    let q = q_game(k, false);
    let q_hat = q_game(k, true);
    let tt = coproduct_regular(&[t.clone(), t.clone()]);
    let qq = coproduct_regular(&[q.clone(), q.clone()]);
    let qq_hat = coproduct_regular(&[q_hat.clone(), q_hat.clone()]);
    let mut c_runs: alloc::collections::BTreeMap<Run, Player> = (0..=k)
        .flat_map(|a| ["0", "1"].into_iter().map(move |x| (Run::constant(stars(a), atom(x)), Player::Bob)))
        .collect();
    let e_img = RegularGame::from_map(c_runs.clone());
    c_runs.insert(Run::constant(Vec::new(), star()), Player::Bob);
    let c = RegularGame::from_map(c_runs);
    let qsum = sum_map(&[q_map(), q_map()]);
    let e = compose(&c_map(), &qsum);
    for (name, g) in [("T", &t), ("Q", &q), ("Qhat", &q_hat), ("TT", &tt), ("QQ", &qq), ("QQhat", &qq_hat), ("C", &c), ("E", &e_img)] {
        s.add_regular(name, g);
    }
    s.add_map("q", "T", "Q", q_map());
    s.add_map("qq", "TT", "QQ", qsum);
    s.add_map("c", "QQhat", "C", c_map());
    s.add_map("e", "TT", "E", e);
    s.claim("q is a quotient map", true, quotient_claim("q", "T", "Q"));
    s.claim("q⊔q is a quotient map", true, quotient_claim("qq", "TT", "QQ"));
    s.claim("c is a quotient map", true, quotient_claim("c", "QQhat", "C"));
    s.claim("e = c∘(q⊔q) is a quotient map", false, quotient_claim("e", "TT", "E"));
    let t0 = vec![Move::tagged("0", Move::tagged("1", star()))];
    let t1 = vec![Move::tagged("1", Move::tagged("1", star()))];
    let (a0, a1) = (t0.clone(), t1.clone());
    s.claim("e(t⁰₁) = e(t¹₁)", true, move |s: &Scenario| {
        let e = s.map("e")?;
        let (x, y) = (e.apply(&a0), e.apply(&a1));
        Ok((x == y, format!("e({}) = {x}, e({}) = {y}", moment_text(&a0), moment_text(&a1))))
    });
    s.claim("a run chain links t⁰₁ and t¹₁ under e", false, move |s: &Scenario| {
        let chain = quotient_chain(s.map("e")?, s.regular("TT")?, &t0, &t1)?;
        let detail = match &chain {
            Some(c) => format!("chain of {} runs", c.len()),
            None => format!("no chain from {} to {}", moment_text(&t0), moment_text(&t1)),
        };
        Ok((chain.is_some(), detail))
    });
    Ok(s)
}

/// `T_k = {*^n} ∪ {* k^n}` for `k ∈ {0,1}`, their coproduct, `C` and the untagging map.
fn strict_gap_parts() -> (RegularGame, RegularGame, ChronMap) {
    let comp = |k: &str| {
        RegularGame::from_map(
            [(Run::constant(Vec::new(), star()), Player::Bob), (Run::constant(vec![star()], atom(k)), Player::Bob)]
                .into_iter()
                .collect(),
        )
    };
    let t = coproduct_regular(&[comp("0"), comp("1")]);
    let c = RegularGame::from_map(
        [
            (Run::constant(Vec::new(), star()), Player::Bob),
            (Run::constant(vec![star()], atom("0")), Player::Bob),
            (Run::constant(vec![star()], atom("1")), Player::Bob),
        ]
        .into_iter()
        .collect(),
    );
    let untag = ChronMap::letterwise(|m| m.untagged().cloned().unwrap_or_else(|| m.clone()));
    (t, c, untag)
}

fn strict_quotient_gap() -> Scenario {
    let mut s = Scenario::new("strict_quotient_gap", 2, 6);
    let (t, c, map) = strict_gap_parts();
    s.add_regular("T", &t);
    s.add_regular("C", &c);
    s.add_map("c", "T", "C", map);
    s.claim("c is a quotient map", true, quotient_claim("c", "T", "C"));
    s.claim("c is a strict quotient map", false, |s: &Scenario| {
        let v = is_strict_quotient(s.map("c")?, s.regular("T")?, s.regular("C")?)?;
        Ok((v.holds, format!("{:?}", v.witness)))
    });
    s.claim("Δ(S,S′) = 0 < 1 = Δ(R,R′)", true, |s: &Scenario| {
        let v = is_strict_quotient(s.map("c")?, s.regular("T")?, s.regular("C")?)?;
        let r = Run::constant(vec![star()], atom("0"));
        let r2 = Run::constant(vec![star()], atom("1"));
        let ok = matches!(
            &v.witness,
            Some(StrictWitness::Gap { r: a, r2: b, delta: Code::Fin(1), best_preimage_delta: Code::Fin(0) })
                if *a == r && *b == r2
        );
        Ok((ok, format!("{:?}", v.witness)))
    });
    s
}

/// The two-run game `X` below `N` stars and the map `f: X → C` of the pullback gadget.
fn gadget(n: usize) -> (RegularGame, ChronMap) {
    let x = RegularGame::from_map(
        ["0", "1"].iter().map(|d| (Run::constant(stars(n), atom(d)), Player::Bob)).collect(),
    );
    let r0 = Run::constant(vec![star()], atom("0"));
    let r1 = Run::constant(vec![star()], atom("1"));
    let (a0, a1) = (r0.clone(), r1.clone());
    let f = ChronMap::new(move |t| {
        if t.len() > n && t[n] == atom("0") {
            a0.truncate(t.len())
        } else {
            a1.truncate(t.len())
        }
    })
    .with_run_rule(move |r| Ok(if *r.at(n) == atom("0") { r0.clone() } else { r1.clone() }));
    (x, f)
}

fn descent_failure() -> Scenario {
    let mut s = Scenario::new("descent_failure", 2, 6);
    let (t, c, cmap) = strict_gap_parts();
    let n = 1;
    let (x, f) = gadget(n);
    let p = pullback(&cmap, &f, &t, &x, Mode::A).expect("maps are defined on the bases");
    s.add_regular("T", &t);
    s.add_regular("C", &c);
    s.add_regular("X", &x);
    s.add_regular("P", &p.game);
    s.add_map("c", "T", "C", cmap);
    s.add_map("f", "X", "C", f);
    s.add_map("p1", "P", "T", projection(0));
    s.add_map("p2", "P", "X", projection(1));
    s.claim("c is a quotient map", true, quotient_claim("c", "T", "C"));
    s.claim("the pullback projection p₂ is a quotient map", false, quotient_claim("p2", "P", "X"));
    s
}

/// `T` with the runs `0^ω` and `1^ω`, `T′ = ⟨⟩ ∪ 0⌢T` and the shift `f: T → T′`.
fn shift_parts() -> (RegularGame, RegularGame, ChronMap) {
    let t = RegularGame::from_map(
        ["0", "1"].iter().map(|d| (Run::constant(Vec::new(), atom(d)), Player::Bob)).collect(),
    );
    let t2 = RegularGame::from_map(
        ["0", "1"].iter().map(|d| (Run::constant(vec![atom("0")], atom(d)), Player::Bob)).collect(),
    );
    let f = ChronMap::new(|t| {
        if t.is_empty() {
            return Moment::root();
        }
        let mut out = vec![atom("0")];
        out.extend_from_slice(&t[..t.len() - 1]);
        Moment(out)
    })
    .with_run_rule(|r| Ok(r.cons(atom("0"))));
    (t, t2, f)
}

fn mono_noninjective() -> Scenario {
    let mut s = Scenario::new("mono_noninjective", 2, 6);
    let (t, t2, f) = shift_parts();
    s.add_regular("T", &t);
    s.add_regular("T2", &t2);
    s.add_map("f", "T", "T2", f);
    let check = |pick: fn(&crate::morphism::MorphismProfile) -> &crate::morphism::Check| {
        move |s: &Scenario| {
            let p = profile(s.map("f")?, s.game("T")?, s.game("T2")?, s.depth)?;
            let c = pick(&p);
            Ok((c.holds, format!("{:?}", c.witness)))
        }
    };
    s.claim("f is a monomorphism", true, check(|p| &p.mono));
    s.claim("f is injective", false, check(|p| &p.injective));
    s.claim("f is an epimorphism", true, check(|p| &p.epi));
    s
}

fn preimage_unpruned() -> Scenario {
    let mut s = Scenario::new("preimage_unpruned", 2, 6);
    let (t, t2, f) = shift_parts();
    let sub = RegularGame::single(Run::constant(vec![atom("0")], atom("1")), Player::Bob);
    s.add_regular("T", &t);
    s.add_regular("T2", &t2);
    s.add_regular("T3", &sub);
    s.add_map("f", "T", "T2", f);
    let report = |s: &Scenario| preimage_tree(s.map("f")?, &s.game("T")?.tree, &s.game("T3")?.tree, s.depth);
    s.claim("the preimage f⁻¹(T″) is pruned", false, move |s: &Scenario| {
        let r = report(s)?;
        Ok((r.pruned, format!("dead end {:?}", r.witness.map(|w| w.to_string()))))
    });
    s.claim("the dead end of f⁻¹(T″) is ⟨0⟩", true, move |s: &Scenario| {
        let r = report(s)?;
        Ok((r.witness == Some(Moment(vec![atom("0")])), format!("{:?}", r.witness.map(|w| w.to_string()))))
    });
    s
}

fn surjective_not_run_surjective(k: usize) -> Result<Scenario> {
    if k < 2 {
        return Err(GameError::rejected("surjective_not_run_surjective needs at least 2 components"));
    }
    // With K components the moment 1^n is hit only for n < K, so surjectivity is
    // checked up to depth K - 1.
    let mut s = Scenario::new("surjective_not_run_surjective", k, k - 1);
    let t1 = RegularGame::from_map((0..k).map(|j| (Run::constant(Vec::new(), atom(&format!("{j}"))), Player::Bob)).collect());
    let index = |m: &Move| m.token().parse::<usize>().unwrap_or(0);
    let f = ChronMap::new(move |t| {
        let n = t.len();
        let j = t.first().map(index).unwrap_or(0);
        let ones = if n > j { j } else { n };
        let mut out = vec![atom("1"); ones];
        out.extend(core::iter::repeat_n(atom("0"), n - ones));
        Moment(out)
    })
    .with_run_rule(move |r| Ok(Run::constant(vec![atom("1"); index(r.at(0))], atom("0"))));
    s.add_regular("T1", &t1);
    s.add_game("cogenerating", cogenerating());
    s.add_map("f", "T1", "cogenerating", f);
    let depth = s.depth;
    s.claim(format!("f is surjective on moments up to depth {depth}"), true, |s: &Scenario| {
        let p = profile(s.map("f")?, s.game("T1")?, s.game("cogenerating")?, s.depth)?;
        Ok((p.epi.holds, format!("{:?}", p.epi.witness)))
    });
    s.claim("f̄ is surjective", false, |s: &Scenario| {
        let p = profile(s.map("f")?, s.game("T1")?, s.game("cogenerating")?, s.depth)?;
        Ok((p.run_surjective.holds, format!("{:?}", p.run_surjective.witness)))
    });
    s.claim("⟨1:n<ω⟩ is a missed run", true, |s: &Scenario| {
        let p = profile(s.map("f")?, s.game("T1")?, s.game("cogenerating")?, s.depth)?;
        let ones = Run::constant(Vec::new(), atom("1"));
        let missed = matches!(&p.run_surjective.witness, Some(crate::morphism::Witness::Run(r)) if *r == ones);
        Ok((missed, format!("{:?}", p.run_surjective.witness)))
    });
    Ok(s)
}
