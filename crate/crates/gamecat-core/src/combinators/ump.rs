//! Universal properties checked by exhaustive enumeration of mediating maps.
//!
//! Each check enumerates every cone (or cocone) of morphisms of the given kind into
//! (or out of) a test game and counts the mediating morphisms through the
//! construction. The universal property holds on the instance when every count is 1.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::colimits::coequalizer;
use super::limits::{coproduct_regular, equalizer, injection, product_regular};
use super::{compose_tables, Mode};
use crate::enumerate::{filter_kind, run_maps};
use crate::error::Result;
use crate::game::{RegularGame, Run};
use crate::morphism::{run_table, ChronMap};

type Table = BTreeMap<Run, Run>;

fn morphisms(dom: &RegularGame, cod: &RegularGame, mode: Mode, cap: usize) -> Result<Vec<Table>> {
    Ok(filter_kind(run_maps(dom, cod, cap)?, dom, cod, mode.player()))
}

/// For every pair of morphisms `z → g1`, `z → g2`, the number of mediators into the product.
pub fn product_ump(g1: &RegularGame, g2: &RegularGame, z: &RegularGame, mode: Mode, cap: usize) -> Result<Vec<usize>> {
    let (p, projections) = product_regular(&[g1.clone(), g2.clone()], mode);
    let p1 = run_table(&projections[0], &p)?;
    let p2 = run_table(&projections[1], &p)?;
    let candidates = morphisms(z, &p, mode, cap)?;
    let composed: Vec<(Table, Table)> =
        candidates.iter().map(|u| Ok((compose_tables(u, &p1)?, compose_tables(u, &p2)?))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in morphisms(z, g1, mode, cap)? {
        for b in morphisms(z, g2, mode, cap)? {
            out.push(composed.iter().filter(|(x, y)| *x == a && *y == b).count());
        }
    }
    Ok(out)
}

/// For every pair of morphisms `g1 → z`, `g2 → z`, the number of mediators out of the
/// coproduct.
pub fn coproduct_ump(g1: &RegularGame, g2: &RegularGame, z: &RegularGame, mode: Mode, cap: usize) -> Result<Vec<usize>> {
    let s = coproduct_regular(&[g1.clone(), g2.clone()]);
    let i1 = run_table(&injection(0), g1)?;
    let i2 = run_table(&injection(1), g2)?;
    let candidates = morphisms(&s, z, mode, cap)?;
    let composed: Vec<(Table, Table)> =
        candidates.iter().map(|u| Ok((compose_tables(&i1, u)?, compose_tables(&i2, u)?))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for a in morphisms(g1, z, mode, cap)? {
        for b in morphisms(g2, z, mode, cap)? {
            out.push(composed.iter().filter(|(x, y)| *x == a && *y == b).count());
        }
    }
    Ok(out)
}

/// For every morphism `h: z → dom` with `f∘h = g∘h`, the number of mediators into the
/// equalizer.
pub fn equalizer_ump(
    f: &ChronMap,
    g: &ChronMap,
    dom: &RegularGame,
    z: &RegularGame,
    mode: Mode,
    cap: usize,
) -> Result<Vec<usize>> {
    let (e, incl) = equalizer(f, g, dom)?;
    let incl = run_table(&incl, &e)?;
    let (tf, tg) = (run_table(f, dom)?, run_table(g, dom)?);
    let candidates: Vec<Table> =
        morphisms(z, &e, mode, cap)?.iter().map(|u| compose_tables(u, &incl)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for h in morphisms(z, dom, mode, cap)? {
        if compose_tables(&h, &tf)? == compose_tables(&h, &tg)? {
            out.push(candidates.iter().filter(|c| **c == h).count());
        }
    }
    Ok(out)
}

/// For every morphism `h: cod → z` with `h∘f = h∘g`, the number of mediators out of
/// the coequalizer.
pub fn coequalizer_ump(
    f: &ChronMap,
    g: &ChronMap,
    dom: &RegularGame,
    cod: &RegularGame,
    z: &RegularGame,
    mode: Mode,
    cap: usize,
) -> Result<Vec<usize>> {
    let c = coequalizer(f, g, dom, cod, mode)?;
    let (tf, tg) = (run_table(f, dom)?, run_table(g, dom)?);
    let candidates: Vec<Table> =
        morphisms(&c.game, z, mode, cap)?.iter().map(|u| compose_tables(&c.table, u)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for h in morphisms(cod, z, mode, cap)? {
        if compose_tables(&tf, &h)? == compose_tables(&tg, &h)? {
            out.push(candidates.iter().filter(|c| **c == h).count());
        }
    }
    Ok(out)
}
