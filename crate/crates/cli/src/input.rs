use std::fs;

use magnihom::digraph::{parse_digraph, Digraph};
use magnihom::fixtures::{fixture_complex, fixture_digraph};
use magnihom::simplicial::{extended_hasse, parse_complex, PureComplex};
use magnihom::{Error, Result};

/// What the user pointed at: a digraph, or a complex (usable as a digraph
/// through its extended Hasse diagram).
pub enum Input {
    Digraph(Digraph),
    Complex(PureComplex),
}

impl Input {
    pub fn digraph(&self) -> Digraph {
        match self {
            Input::Digraph(g) => g.clone(),
            Input::Complex(k) => extended_hasse(k),
        }
    }

    pub fn complex(&self) -> Option<&PureComplex> {
        match self {
            Input::Complex(k) => Some(k),
            Input::Digraph(_) => None,
        }
    }
}

pub fn load(fixture: Option<&str>, path: Option<&str>) -> Result<(String, Input)> {
    match (fixture, path) {
        (Some(name), None) => {
            if let Ok(k) = fixture_complex(name) {
                return Ok((name.to_string(), Input::Complex(k)));
            }
            Ok((name.to_string(), Input::Digraph(fixture_digraph(name)?)))
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {}", path, e)))?;
            let input = if text.contains("\"facets\"") {
                Input::Complex(parse_complex(&text)?)
            } else {
                Input::Digraph(parse_digraph(&text)?)
            };
            Ok((path.to_string(), input))
        }
        _ => Err(Error::Parse("exactly one of --fixture and --input is required".into())),
    }
}

/// Parses `x,y` where each side is a vertex label or index.
pub fn parse_pair(g: &Digraph, text: &str) -> Result<(usize, usize)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let lookup = |s: &str| g.vertex_by_name(s).ok_or_else(|| Error::Parse(format!("unknown vertex '{}'", s)));
    match parts.as_slice() {
        [x, y] => Ok((lookup(x)?, lookup(y)?)),
        _ => Err(Error::Parse(format!("expected 'x,y', got '{}'", text))),
    }
}
