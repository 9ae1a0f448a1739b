//! Executable categories of infinite two-player games on trees.
//!
//! Games are lazy pruned trees with payoff oracles. The regular fragment, where a
//! game is a finite set of eventually periodic runs with winners, makes every
//! run quantifier exact; everything else is checked up to a depth.
//!
//! Modules:
//! - [`game`]: moments, trees, runs, payoffs, the regular fragment and canonical games.
//! - [`morphism`]: chronological maps, A/B-morphisms, quotient checks, images and preimages.
//! - [`strategy`]: strategies as subgames and as mappings, winning checks, play and transport.
//! - [`combinators`]: limits, colimits, factorizations, exponentials and weak classifiers.
//! - [`metric`]: run spaces, ball games and hom spaces over finite ultrametric spaces.
//! - [`topo`]: finite spaces and their Banach-Mazur, covering and tightness games.
//! - [`enumerate`]: exhaustive enumeration of chronological maps between regular games.
//! - [`random`]: seeded generators of regular games and maps for property suites.

#![no_std]

extern crate alloc;

pub mod combinators;
pub mod enumerate;
pub mod error;
pub mod game;
pub mod metric;
pub mod morphism;
pub mod random;
pub mod strategy;
pub mod topo;

pub use error::{GameError, Result};
pub use game::{Code, Game, GameTree, Moment, Move, Player, RegularGame, Run};
pub use morphism::ChronMap;
