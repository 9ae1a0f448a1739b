//! Exhaustive enumeration of chronological maps between regular games.
//!
//! Two independent enumerations are provided. [`run_maps`] lists the Δ-nonexpanding
//! maps between run bases. [`level_maps`] builds chronological maps moment by moment,
//! sending each child to a child of its parent's image. They agree by the
//! correspondence between chronological maps and nonexpanding run maps, which the
//! test suites check.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{GameError, Result};
use crate::game::{Moment, RegularGame, Run};
use crate::morphism::ChronMap;

/// All Δ-nonexpanding maps from the basis of `dom` to the basis of `cod`.
pub fn run_maps(dom: &RegularGame, cod: &RegularGame, cap: usize) -> Result<Vec<BTreeMap<Run, Run>>> {
    let src = dom.basis();
    let dst = cod.basis();
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    fn rec(
        src: &[Run],
        dst: &[Run],
        current: &mut Vec<usize>,
        out: &mut Vec<BTreeMap<Run, Run>>,
        cap: usize,
    ) -> Result<()> {
        let i = current.len();
        if i == src.len() {
            out.push(current.iter().enumerate().map(|(k, &j)| (src[k].clone(), dst[j].clone())).collect());
            if out.len() > cap {
                return Err(GameError::Cap { cap, moment: Moment::root() });
            }
            return Ok(());
        }
        for j in 0..dst.len() {
            let ok = current.iter().enumerate().all(|(k, &jk)| dst[jk].delta(&dst[j]) >= src[k].delta(&src[i]));
            if ok {
                current.push(j);
                rec(src, dst, current, out, cap)?;
                current.pop();
            }
        }
        Ok(())
    }
    rec(&src, &dst, &mut current, &mut out, cap)?;
    Ok(out)
}

/// All chronological maps given as moment tables on levels `0..=depth` of `dom`.
/// Each moment's image is a child of its parent's image.
pub fn level_maps(dom: &RegularGame, cod: &RegularGame, depth: usize, cap: usize) -> Result<Vec<BTreeMap<Moment, Moment>>> {
    if dom.is_empty() {
        return Ok(alloc::vec![BTreeMap::new()]);
    }
    if cod.is_empty() {
        return Ok(Vec::new());
    }
    let moments: Vec<Moment> = dom.moments_upto(depth);
    let mut out = Vec::new();
    let mut table: BTreeMap<Moment, Moment> = BTreeMap::new();
    fn rec(
        moments: &[Moment],
        i: usize,
        cod: &RegularGame,
        table: &mut BTreeMap<Moment, Moment>,
        out: &mut Vec<BTreeMap<Moment, Moment>>,
        cap: usize,
    ) -> Result<()> {
        if i == moments.len() {
            out.push(table.clone());
            if out.len() > cap {
                return Err(GameError::Cap { cap, moment: Moment::root() });
            }
            return Ok(());
        }
        let t = &moments[i];
        if t.is_empty() {
            table.insert(t.clone(), Moment::root());
            rec(moments, i + 1, cod, table, out, cap)?;
            table.remove(t);
            return Ok(());
        }
        let parent_img = table[&t.truncated(t.len() - 1)].clone();
        for y in cod.children(&parent_img) {
            table.insert(t.clone(), parent_img.child(y));
            rec(moments, i + 1, cod, table, out, cap)?;
        }
        table.remove(t);
        Ok(())
    }
    rec(&moments, 0, cod, &mut table, &mut out, cap)?;
    Ok(out)
}

/// Reads off the run map of a moment table defined past both separation depths.
pub fn level_map_to_run_map(dom: &RegularGame, cod: &RegularGame, table: &BTreeMap<Moment, Moment>, depth: usize) -> BTreeMap<Run, Run> {
    dom.runs()
        .map(|(r, _)| {
            let img = &table[&r.truncate(depth)];
            let s = cod.runs_through(img).expect("image moment is reachable");
            (r.clone(), s[0].clone())
        })
        .collect()
}

/// Enumerates chronological maps between regular games as [`ChronMap`]s with their tables.
pub fn chron_maps(dom: &RegularGame, cod: &RegularGame, cap: usize) -> Result<Vec<(BTreeMap<Run, Run>, ChronMap)>> {
    run_maps(dom, cod, cap)?
        .into_iter()
        .map(|t| Ok((t.clone(), ChronMap::from_run_table(dom, t)?)))
        .collect()
}

/// Keeps the maps that are A-morphisms (`Alice`) or B-morphisms (`Bob`) between the games.
pub fn filter_kind(
    maps: Vec<BTreeMap<Run, Run>>,
    dom: &RegularGame,
    cod: &RegularGame,
    kind: crate::game::Player,
) -> Vec<BTreeMap<Run, Run>> {
    maps.into_iter()
        .filter(|m| dom.runs().all(|(r, p)| p != kind || cod.winner(&m[r]) == Some(kind)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{atoms, Move, Player};
    use alloc::vec;

    fn two_runs() -> RegularGame {
        RegularGame::new([
            (Run::constant(vec![], Move::atom("0")), Player::Alice),
            (Run::constant(vec![], Move::atom("1")), Player::Bob),
        ])
        .unwrap()
    }

    #[test]
    fn both_enumerations_agree() {
        let g = two_runs();
        let h = RegularGame::new([
            (Run::constant(atoms(&["0"]), Move::atom("1")), Player::Alice),
            (Run::constant(vec![], Move::atom("0")), Player::Alice),
            (Run::constant(vec![], Move::atom("1")), Player::Bob),
        ])
        .unwrap();
        let a = run_maps(&g, &h, 1000).unwrap();
        let depth = g.separation().max(h.separation());
        let b: Vec<_> = level_maps(&g, &h, depth, 1000).unwrap().iter().map(|t| level_map_to_run_map(&g, &h, t, depth)).collect();
        let mut a2 = a.clone();
        a2.sort();
        let mut b2 = b.clone();
        b2.sort();
        b2.dedup();
        assert_eq!(a2, b2);
        assert_eq!(a.len(), 9);
    }
}
