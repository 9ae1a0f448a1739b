//! Limits, colimits, factorizations, exponentials and classifiers of games.
//!
//! Constructions on lazy [`Game`]s are provided where they make sense on trees
//! (products, coproducts, the quit-move extension, the padded classifier game).
//! Everything that has to quantify over runs works on the regular fragment, where
//! results are again regular and all verdicts are exact.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{GameError, Result};
use crate::game::{Moment, Move, Player, RegularGame, Run};
use crate::morphism::ChronMap;

pub mod classifier;
pub mod colimits;
pub mod exponential;
pub mod factor;
pub mod gallery;
pub mod limits;
pub mod ump;

pub use classifier::{classify_partial, weak_classifier, PartialSquare};
pub use colimits::{coequalizer, pushout, Coequalizer, Pushout};
pub use exponential::{eval_curry, exponential, Exponential};
pub use factor::{factorize, orthogonal_diagonals, Factorization, System};
pub use gallery::{counterexample, Scenario};
pub use limits::{
    coproduct, coproduct_regular, d_b, d_b_map, d_b_regular, equalizer, extensivity_canonical, product,
    product_regular, pullback, quit_move, Coproduct, Distributivity, Product, Pullback,
};

/// Which player's payoff a construction is conjunctive for.
///
/// In mode A a product run is won by Alice iff she wins every board and a quotient
/// run is Alice's iff some representative is. Mode B swaps the roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

impl Mode {
    /// The player whose winning runs the mode's morphisms preserve.
    pub fn player(self) -> Player {
        match self {
            Mode::A => Player::Alice,
            Mode::B => Player::Bob,
        }
    }
}

/// The run table of `g∘f` from the tables of `f` and `g`.
pub fn compose_tables(f: &BTreeMap<Run, Run>, g: &BTreeMap<Run, Run>) -> Result<BTreeMap<Run, Run>> {
    f.iter()
        .map(|(r, s)| {
            g.get(s)
                .map(|t| (r.clone(), t.clone()))
                .ok_or_else(|| GameError::rejected(alloc::format!("{s} is outside the domain of the second map")))
        })
        .collect()
}

/// Whether a run table preserves the given player's runs between two regular games.
pub fn table_preserves(table: &BTreeMap<Run, Run>, dom: &RegularGame, cod: &RegularGame, kind: Player) -> bool {
    dom.runs().all(|(r, p)| p != kind || table.get(r).and_then(|s| cod.winner(s)) == Some(kind))
}

/// The map `f_0 × … × f_k` acting componentwise on tuple moves.
pub fn product_map(maps: &[ChronMap]) -> ChronMap {
    let ms: Vec<ChronMap> = maps.to_vec();
    let ms2 = ms.clone();
    ChronMap::new(move |t| {
        let images: Vec<Vec<Move>> = ms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let comp: Vec<Move> = t.iter().map(|m| m.parts().expect("tuple move")[i].clone()).collect();
                f.apply(&comp).into_vec()
            })
            .collect();
        (0..t.len())
            .map(|n| Move::tuple(images.iter().map(|img| img[n].clone()).collect()))
            .collect::<Vec<_>>()
            .into()
    })
    .with_run_rule(move |r| {
        let parts = r.unzip(ms2.len()).ok_or_else(|| GameError::rejected("run of tuple moves expected"))?;
        let images: Vec<Run> = parts.iter().zip(&ms2).map(|(p, f)| f.run_image(p)).collect::<Result<_>>()?;
        Ok(Run::zip(&images))
    })
}

/// The pairing `⟨f_0, …, f_k⟩` into a product.
pub fn pairing(maps: &[ChronMap]) -> ChronMap {
    let ms: Vec<ChronMap> = maps.to_vec();
    let ms2 = ms.clone();
    ChronMap::new(move |t| {
        let images: Vec<Vec<Move>> = ms.iter().map(|f| f.apply(t).into_vec()).collect();
        (0..t.len())
            .map(|n| Move::tuple(images.iter().map(|img| img[n].clone()).collect()))
            .collect::<Vec<_>>()
            .into()
    })
    .with_run_rule(move |r| {
        let images: Vec<Run> = ms2.iter().map(|f| f.run_image(r)).collect::<Result<_>>()?;
        Ok(Run::zip(&images))
    })
}

/// The map `f_0 ⊔ … ⊔ f_k` between coproducts, acting on each tagged component.
pub fn sum_map(maps: &[ChronMap]) -> ChronMap {
    let ms: Vec<ChronMap> = maps.to_vec();
    let ms2 = ms.clone();
    ChronMap::new(move |t| match limits::untag_moment(t) {
        Some((j, inner)) if j < ms.len() => {
            let tag = limits::component(j);
            ms[j].apply(&inner).iter().map(|m| Move::tagged(tag.clone(), m.clone())).collect::<Vec<_>>().into()
        }
        _ => Moment::from(t),
    })
    .with_run_rule(move |r| {
        let (j, inner) = limits::untag_run(r).ok_or_else(|| GameError::rejected(alloc::format!("{r} is not a coproduct run")))?;
        let f = ms2.get(j).ok_or_else(|| GameError::rejected(alloc::format!("no component {j}")))?;
        let tag = limits::component(j);
        Ok(f.run_image(&inner)?.map_moves(|m| Move::tagged(tag.clone(), m.clone())))
    })
}
