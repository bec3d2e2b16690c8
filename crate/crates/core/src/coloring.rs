use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Color = u32;

/// A coloring of H_n: entry `i - 1` is the color of point `i`. Colors are
/// positive.
///
/// The text form is one line of comma-separated decimal integers, e.g.
/// `1,2,3,1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Color>", into = "Vec<Color>")]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Result<Self> {
        if let Some(i) = colors.iter().position(|&c| c == 0) {
            return Err(Error::domain(format!(
                "color at point {} is 0; colors are positive",
                i + 1
            )));
        }
        Ok(Coloring(colors))
    }

    /// Callers guarantee all entries are positive.
    pub(crate) fn from_vec_unchecked(colors: Vec<Color>) -> Self {
        debug_assert!(colors.iter().all(|&c| c > 0));
        Coloring(colors)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Color] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Color> {
        self.0
    }

    /// Color of 1-based point `i`.
    pub fn color_of(&self, point: usize) -> Option<Color> {
        point.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn max_color(&self) -> Color {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn colors_used(&self) -> usize {
        colors_used(self)
    }

    /// The first `n` points. Panics if `n > len`.
    pub fn prefix(&self, n: usize) -> Coloring {
        Coloring(self.0[..n].to_vec())
    }

    pub fn reversed(&self) -> Coloring {
        Coloring(self.0.iter().rev().copied().collect())
    }
}

/// Number of distinct colors.
pub fn colors_used(c: &Coloring) -> usize {
    c.0.iter().collect::<BTreeSet<_>>().len()
}

impl TryFrom<Vec<Color>> for Coloring {
    type Error = Error;

    fn try_from(colors: Vec<Color>) -> Result<Self> {
        Coloring::new(colors)
    }
}

impl From<Coloring> for Vec<Color> {
    fn from(c: Coloring) -> Self {
        c.0
    }
}

impl AsRef<[Color]> for Coloring {
    fn as_ref(&self) -> &[Color] {
        &self.0
    }
}

impl fmt::Display for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.0 {
            if !first {
                f.write_str(",")?;
            }
            first = false;
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for Coloring {
    type Err = Error;

    /// Parses the one-line format. A single trailing newline is tolerated;
    /// anything else (blank fields, signs, whitespace inside fields, zero) is
    /// rejected.
    fn from_str(s: &str) -> Result<Self> {
        let line = s.strip_suffix('\n').unwrap_or(s);
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.is_empty() {
            return Err(Error::Parse("empty coloring".into()));
        }
        let colors = line
            .split(',')
            .enumerate()
            .map(|(i, field)| {
                if field.is_empty() || !field.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(Error::Parse(format!(
                        "field {} is not a positive integer: {field:?}",
                        i + 1
                    )));
                }
                match field.parse::<Color>() {
                    Ok(0) => Err(Error::Parse(format!("field {} is 0; colors are positive", i + 1))),
                    Ok(c) => Ok(c),
                    Err(e) => Err(Error::Parse(format!("field {}: {e}", i + 1))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Coloring(colors))
    }
}
