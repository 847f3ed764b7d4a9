//! Compact unions of closed intervals with rational endpoints.

use std::fmt;

use crate::poly::Rat;
use crate::text::{parse_rat, ParseError};

/// A compact set `[a1,b1] u ... u [ak,bk]` with
/// `a1 <= b1 < a2 <= b2 < ... < ak <= bk`. Degenerate components
/// (`ai = bi`) are permitted.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntervalUnion {
    comps: Vec<(Rat, Rat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("interval union must have at least one component")]
    Empty,
    #[error("component {index}: endpoints out of order")]
    EndpointOrder { index: usize },
    #[error("components {index} and {}: not strictly separated", .index + 1)]
    Overlap { index: usize },
    #[error("{0}")]
    Parse(#[from] ParseError),
}

impl IntervalUnion {
    pub fn new(comps: Vec<(Rat, Rat)>) -> Result<Self, IntervalError> {
        if comps.is_empty() {
            return Err(IntervalError::Empty);
        }
        for (i, (a, b)) in comps.iter().enumerate() {
            if a > b {
                return Err(IntervalError::EndpointOrder { index: i });
            }
        }
        for i in 0..comps.len() - 1 {
            if comps[i].1 >= comps[i + 1].0 {
                return Err(IntervalError::Overlap { index: i });
            }
        }
        Ok(IntervalUnion { comps })
    }

    /// Single interval `[a, b]`.
    pub fn interval(a: Rat, b: Rat) -> Result<Self, IntervalError> {
        Self::new(vec![(a, b)])
    }

    /// Parse the textual form `[0,1]u[2,3]`.
    pub fn parse(s: &str) -> Result<Self, IntervalError> {
        let mut comps = Vec::new();
        for piece in s.split(['u', 'U']) {
            let t = piece.trim();
            let inner = t
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| ParseError { pos: 0, msg: format!("expected [a,b], found '{t}'") })?;
            let (a, b) = inner
                .split_once(',')
                .ok_or_else(|| ParseError { pos: 0, msg: format!("expected two endpoints in '{t}'") })?;
            comps.push((parse_rat(a)?, parse_rat(b)?));
        }
        Self::new(comps)
    }

    pub fn components(&self) -> &[(Rat, Rat)] {
        &self.comps
    }

    pub fn num_components(&self) -> usize {
        self.comps.len()
    }

    /// Leftmost endpoint `a1`.
    pub fn lo(&self) -> &Rat {
        &self.comps[0].0
    }

    /// Rightmost endpoint `bk`.
    pub fn hi(&self) -> &Rat {
        &self.comps[self.comps.len() - 1].1
    }

    pub fn contains(&self, x: &Rat) -> bool {
        self.comps.iter().any(|(a, b)| a <= x && x <= b)
    }

    /// The open gaps `(b_i, a_{i+1})` between consecutive components.
    pub fn gaps(&self) -> Vec<(Rat, Rat)> {
        self.comps
            .windows(2)
            .map(|w| (w[0].1.clone(), w[1].0.clone()))
            .collect()
    }

    /// True when every component is a single point.
    pub fn is_all_points(&self) -> bool {
        self.comps.iter().all(|(a, b)| a == b)
    }
}

impl fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (a, b)) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str("u")?;
            }
            write!(f, "[{},{}]", a, b)?;
        }
        Ok(())
    }
}
