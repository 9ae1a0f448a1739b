//! Truncated game trees as indented text or as Graphviz DOT.

use std::fmt::Write as _;

use gamecat_core::game::{truncate, TreeFragment};
use gamecat_core::{Moment, Player, RegularGame};

use crate::error::{CliError, CliResult};
use crate::spec::Loaded;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Graph,
}

/// Renders the moments of length at most `depth`.
pub fn render(spec: &Loaded, depth: usize, cap: usize, format: Format) -> CliResult<String> {
    let frag = truncate(&spec.game.tree, depth, cap).map_err(|e| CliError::from_game(&spec.name, e))?;
    let marks: Vec<Option<Player>> =
        frag.moments.iter().map(|t| leaf_mark(spec.regular.as_ref(), t, depth)).collect::<CliResult<_>>()?;
    Ok(match format {
        Format::Text => text(spec, &frag, &marks),
        Format::Graph => graph(spec, &frag, &marks),
    })
}

/// The winner shown at a leaf: every basis run through it has the same winner.
fn leaf_mark(g: Option<&RegularGame>, t: &Moment, depth: usize) -> CliResult<Option<Player>> {
    let Some(g) = g else { return Ok(None) };
    if t.len() != depth {
        return Ok(None);
    }
    let runs = g.runs_through(t).map_err(|e| CliError::from_game("viz", e))?;
    let mut winners = runs.iter().filter_map(|r| g.winner(r));
    let first = winners.next();
    Ok(first.filter(|p| winners.all(|q| q == *p)))
}

fn side(t: &Moment) -> &'static str {
    match t.to_move() {
        Player::Alice => "alice",
        Player::Bob => "bob",
    }
}

fn label(t: &Moment) -> String {
    t.last().map(|m| m.token()).unwrap_or_else(|| "root".into())
}

fn text(spec: &Loaded, frag: &TreeFragment, marks: &[Option<Player>]) -> String {
    let mut out = String::new();
    if frag.is_empty() {
        let _ = writeln!(out, "{}: empty game", spec.name);
        return out;
    }
    // Depth-first order so that children sit under their parent.
    let mut kids = vec![Vec::new(); frag.len()];
    for (j, parent) in frag.parent.iter().enumerate() {
        if let Some(p) = parent {
            kids[*p].push(j);
        }
    }
    let mut order = Vec::new();
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        order.push(i);
        stack.extend(kids[i].iter().rev());
    }
    for i in order {
        let t = &frag.moments[i];
        let _ = write!(out, "{}{} ({} to move)", "  ".repeat(t.len()), label(t), side(t));
        if let Some(p) = marks[i] {
            let _ = write!(out, " [{} wins]", name(p));
        }
        out.push('\n');
    }
    out
}

fn name(p: Player) -> &'static str {
    match p {
        Player::Alice => "alice",
        Player::Bob => "bob",
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn graph(spec: &Loaded, frag: &TreeFragment, marks: &[Option<Player>]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(&spec.name));
    if frag.is_empty() {
        let _ = writeln!(out, "  n0 [label=\"empty game\", shape=note];");
        out.push_str("}\n");
        return out;
    }
    for (i, t) in frag.moments.iter().enumerate() {
        let shape = match t.to_move() {
            Player::Alice => "box",
            Player::Bob => "ellipse",
        };
        let _ = write!(out, "  n{i} [label=\"{}\", shape={shape}", escape(&label(t)));
        if let Some(p) = marks[i] {
            let _ = write!(out, ", peripheries=2, xlabel=\"{} wins\"", name(p));
        }
        out.push_str("];\n");
    }
    for (i, parent) in frag.parent.iter().enumerate() {
        if let Some(p) = parent {
            let _ = writeln!(out, "  n{p} -> n{i};");
        }
    }
    out.push_str("}\n");
    out
}
