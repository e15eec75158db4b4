//! The retraction `r: B_*(C) → C` and its extension by `0` to all of `B(C)`.
//!
//! `r(F)` is the least point of `F` not covered by an `F`-even basic set.
//! The inclusion-maximal `F`-even sets are found by one walk down the prefix
//! tree of `F`: a node holding an even number of points is maximal (all of
//! its ancestors were odd), an odd node with at least three points splits
//! into one odd and one even-or-void child, and nodes with at most one
//! point have no even descendants.

use std::fmt;

use thiserror::Error;

use crate::cantor::{all_words, BasicSet, CantorPoint, Digit, Word};
use crate::group::{GroupElement, Parity, classify};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RetractionError {
    #[error("empty element has no even decomposition")]
    EmptyElement,
    #[error("even cardinality {0}: the retraction is defined only for odd sets")]
    EvenCardinality(usize),
    #[error("depth {depth} does not separate the points (need at least {needed})")]
    DepthTooSmall { depth: usize, needed: usize },
}

/// The inclusion-maximal `F`-even basic sets and the points they miss.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenDecomposition {
    pub maximal_even: Vec<BasicSet>,
    pub residue: GroupElement,
}

impl fmt::Display for EvenDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "maximal_even = {{")?;
        for (k, u) in self.maximal_even.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}")?;
        }
        write!(f, "}}; residue = {}", self.residue)
    }
}

/// Visitor for the left-to-right walk; returning `true` stops the walk.
trait Visit<'a> {
    fn even(&mut self, node: &Word) -> bool;
    fn residue(&mut self, p: &'a CantorPoint) -> bool;
}

/// `points` are the sorted points whose expansions begin with `node`.
fn walk<'a, V: Visit<'a>>(points: &'a [CantorPoint], node: &mut Word, v: &mut V) -> bool {
    match points.len() {
        0 => false,
        1 => v.residue(&points[0]),
        n if n % 2 == 0 => v.even(node),
        _ => {
            let depth = node.len();
            let split = points.partition_point(|p| p.digit_at(depth) == Digit::Zero);
            node.push(Digit::Zero);
            let stop = walk(&points[..split], node, v);
            node.pop();
            if stop {
                return true;
            }
            node.push(Digit::Two);
            let stop = walk(&points[split..], node, v);
            node.pop();
            stop
        }
    }
}

struct Collect {
    maximal_even: Vec<BasicSet>,
    residue: Vec<CantorPoint>,
}

impl<'a> Visit<'a> for Collect {
    fn even(&mut self, node: &Word) -> bool {
        self.maximal_even.push(BasicSet::new(node.iter().copied()));
        false
    }

    fn residue(&mut self, p: &'a CantorPoint) -> bool {
        self.residue.push(p.clone());
        false
    }
}

struct FirstResidue<'a>(Option<&'a CantorPoint>);

impl<'a> Visit<'a> for FirstResidue<'a> {
    fn even(&mut self, _: &Word) -> bool {
        false
    }

    fn residue(&mut self, p: &'a CantorPoint) -> bool {
        self.0 = Some(p);
        true
    }
}

pub fn maximal_even_prefixes(f: &GroupElement) -> Result<EvenDecomposition, RetractionError> {
    if f.is_empty() {
        return Err(RetractionError::EmptyElement);
    }
    let mut c = Collect {
        maximal_even: Vec::new(),
        residue: Vec::new(),
    };
    walk(f.points(), &mut Word::new(), &mut c);
    Ok(EvenDecomposition {
        maximal_even: c.maximal_even,
        residue: GroupElement::from_sorted_unchecked(c.residue),
    })
}

/// `r(F)` for `|F|` odd.
pub fn retract(f: &GroupElement) -> Result<CantorPoint, RetractionError> {
    if !f.is_odd() {
        return Err(RetractionError::EvenCardinality(f.len()));
    }
    let mut first = FirstResidue(None);
    walk(f.points(), &mut Word::new(), &mut first);
    // An odd total minus disjoint even blocks leaves an odd residue.
    Ok(first.0.expect("odd sets have a residue").clone())
}

/// `r̂(F)`: `r(F)` on odd sets, the point `0` on even ones.
pub fn retract_extended(f: &GroupElement) -> CantorPoint {
    retract(f).unwrap_or_else(|_| CantorPoint::zero())
}

/// Least `L` such that the length-`L` prefixes of the points are distinct.
pub fn separation_depth(f: &GroupElement) -> usize {
    f.points()
        .windows(2)
        .map(|w| {
            (0..)
                .find(|&i| w[0].digit_at(i) != w[1].digit_at(i))
                .expect("distinct points differ somewhere")
                + 1
        })
        .max()
        .unwrap_or(0)
}

/// Reference retraction: classify every prefix up to `depth`, discard the
/// points covered by any even one, and take the minimum of the rest.
pub fn brute_force_retract(f: &GroupElement, depth: usize) -> Result<CantorPoint, RetractionError> {
    if !f.is_odd() {
        return Err(RetractionError::EvenCardinality(f.len()));
    }
    let needed = separation_depth(f);
    if depth < needed {
        return Err(RetractionError::DepthTooSmall { depth, needed });
    }
    let even: Vec<BasicSet> = all_words(depth)
        .map(BasicSet::new)
        .filter(|u| classify(u, f) == Parity::Even)
        .collect();
    f.points()
        .iter()
        .filter(|p| !even.iter().any(|u| u.contains(p)))
        .min()
        .cloned()
        .ok_or(RetractionError::EvenCardinality(f.len()))
}
