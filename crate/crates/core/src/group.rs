//! The Boolean group `B(C)` of finite point sets under symmetric
//! difference, finite clopen partitions of `C`, and the parity subgroups
//! `H_Γ` they induce.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cantor::{grid, BasicSet, CantorPoint, Digit, ParseError, Word};

/// A finite subset of `C`; the group operation is symmetric difference.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupElement {
    points: Vec<CantorPoint>,
}

impl GroupElement {
    /// The group identity.
    pub fn empty() -> GroupElement {
        GroupElement::default()
    }

    pub fn singleton(p: CantorPoint) -> GroupElement {
        GroupElement { points: vec![p] }
    }

    /// Collects points as a set; repeated points collapse to one.
    pub fn from_points(points: impl IntoIterator<Item = CantorPoint>) -> GroupElement {
        let mut points: Vec<CantorPoint> = points.into_iter().collect();
        points.sort();
        points.dedup();
        GroupElement { points }
    }

    /// From points already strictly increasing.
    pub(crate) fn from_sorted_unchecked(points: Vec<CantorPoint>) -> GroupElement {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        GroupElement { points }
    }

    pub fn points(&self) -> &[CantorPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether `|F|` is odd, i.e. `F ∈ B_*(C)`.
    pub fn is_odd(&self) -> bool {
        self.points.len() % 2 == 1
    }

    pub fn contains(&self, p: &CantorPoint) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn symmetric_difference(&self, other: &GroupElement) -> GroupElement {
        let (a, b) = (&self.points, &other.points);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        GroupElement { points: out }
    }

    /// The points lying in `u`, which form a contiguous run.
    pub fn points_in(&self, u: &BasicSet) -> &[CantorPoint] {
        let lo = self.points.partition_point(|p| *p < u.left_endpoint());
        let hi = self.points.partition_point(|p| *p <= u.right_endpoint());
        &self.points[lo..hi]
    }

    pub fn count_in(&self, u: &BasicSet) -> usize {
        self.points.iter().filter(|p| u.contains(p)).count()
    }

    pub fn without(&self, index: usize) -> GroupElement {
        let mut points = self.points.clone();
        points.remove(index);
        GroupElement { points }
    }
}

pub fn symmetric_difference(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a.symmetric_difference(b)
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, &self.points)
    }
}

fn write_braced<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "{{")?;
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{item}")?;
    }
    write!(f, "}}")
}

/// Splits `{a, b, …}` into trimmed items with their character offsets.
fn split_braced(s: &str) -> Result<Vec<(usize, &str)>, ParseError> {
    let lead = s.len() - s.trim_start().len();
    let body = s.trim();
    if !body.starts_with('{') {
        return Err(ParseError::Expected {
            position: lead,
            expected: "'{'",
        });
    }
    if !body.ends_with('}') || body.len() < 2 {
        return Err(ParseError::Expected {
            position: lead + body.len(),
            expected: "'}'",
        });
    }
    let inner = &body[1..body.len() - 1];
    let base = lead + 1;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut items = Vec::new();
    let mut start = 0;
    for piece in inner.split(',') {
        let trimmed_lead = piece.len() - piece.trim_start().len();
        let item = piece.trim();
        let position = base + start + trimmed_lead;
        if item.is_empty() {
            return Err(ParseError::Expected {
                position,
                expected: "an entry",
            });
        }
        items.push((position, item));
        start += piece.len() + 1;
    }
    Ok(items)
}

impl FromStr for GroupElement {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<GroupElement, ParseError> {
        let mut points = Vec::new();
        for (position, item) in split_braced(s)? {
            let p: CantorPoint = item.parse().map_err(|e: ParseError| e.offset(position))?;
            if points.contains(&p) {
                return Err(ParseError::Duplicate {
                    position,
                    entry: p.to_string(),
                });
            }
            points.push(p);
        }
        Ok(GroupElement::from_points(points))
    }
}

/// How a set meets a finite `F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    /// `A ∩ F = ∅`
    Void,
    /// `|A ∩ F|` even and positive
    Even,
    /// `|A ∩ F|` odd
    Odd,
}

impl Parity {
    pub fn of_count(n: usize) -> Parity {
        if n == 0 {
            Parity::Void
        } else if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Void => "void",
            Parity::Even => "even",
            Parity::Odd => "odd",
        })
    }
}

pub fn classify(u: &BasicSet, f: &GroupElement) -> Parity {
    Parity::of_count(f.points_in(u).len())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid cover: parts {0} and {1} overlap")]
    Overlap(BasicSet, BasicSet),
    #[error("invalid cover: incomplete, no part contains {0}")]
    Incomplete(BasicSet),
    #[error("sets {0} and {1} are not disjoint")]
    NotDisjoint(BasicSet, BasicSet),
}

/// A finite partition of `C` into basic sets, i.e. a complete antichain in
/// the prefix tree. Parts are kept in left-to-right order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cover {
    parts: Vec<BasicSet>,
}

impl Cover {
    pub fn new(parts: impl IntoIterator<Item = BasicSet>) -> Result<Cover, CoverError> {
        let mut parts: Vec<BasicSet> = parts.into_iter().collect();
        parts.sort();
        check_antichain(&parts, CoverError::Overlap)?;
        if let Some(hole) = first_uncovered(&parts, 0, &mut Word::new()) {
            return Err(CoverError::Incomplete(hole));
        }
        Ok(Cover { parts })
    }

    /// The cover `{C}`.
    pub fn trivial() -> Cover {
        Cover {
            parts: vec![BasicSet::whole()],
        }
    }

    pub fn parts(&self) -> &[BasicSet] {
        &self.parts
    }

    pub fn max_prefix_len(&self) -> usize {
        self.parts.iter().map(BasicSet::len).max().unwrap_or(0)
    }

    pub fn has_part(&self, u: &BasicSet) -> bool {
        self.parts.binary_search(u).is_ok()
    }

    /// Index of the part containing `p`.
    pub fn part_index(&self, p: &CantorPoint) -> usize {
        // Parts are disjoint and ordered, so the containing part is the
        // last one whose left endpoint is at most `p`.
        let k = self.parts.partition_point(|u| u.left_endpoint() <= *p);
        debug_assert!(k > 0 && self.parts[k - 1].contains(p));
        k - 1
    }

    pub fn part_containing(&self, p: &CantorPoint) -> &BasicSet {
        &self.parts[self.part_index(p)]
    }
}

/// Sorted parts overlap only if some part is a prefix of its successor.
fn check_antichain(
    sorted: &[BasicSet],
    err: fn(BasicSet, BasicSet) -> CoverError,
) -> Result<(), CoverError> {
    for w in sorted.windows(2) {
        if w[0].includes(&w[1]) {
            return Err(err(w[0].clone(), w[1].clone()));
        }
    }
    Ok(())
}

/// Walks the prefix tree below `node`; `parts` are the sorted parts
/// extending `node`. Returns a basic set covered by no part, if any.
fn first_uncovered(parts: &[BasicSet], depth: usize, node: &mut Word) -> Option<BasicSet> {
    match parts {
        [] => Some(BasicSet::new(node.iter().copied())),
        [only] if only.len() == depth => None,
        _ => {
            let split = parts.partition_point(|u| u.prefix()[depth] == Digit::Zero);
            for (digit, side) in [(Digit::Zero, &parts[..split]), (Digit::Two, &parts[split..])] {
                node.push(digit);
                let hole = first_uncovered(side, depth + 1, node);
                node.pop();
                if hole.is_some() {
                    return hole;
                }
            }
            None
        }
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, &self.parts)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverParseError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] CoverError),
}

impl FromStr for Cover {
    type Err = CoverParseError;

    fn from_str(s: &str) -> Result<Cover, CoverParseError> {
        let mut parts = Vec::new();
        for (position, item) in split_braced(s)? {
            let u: BasicSet = item.parse().map_err(|e: ParseError| e.offset(position))?;
            if parts.contains(&u) {
                return Err(ParseError::Duplicate {
                    position,
                    entry: u.to_string(),
                }
                .into());
            }
            parts.push(u);
        }
        Ok(Cover::new(parts)?)
    }
}

/// `F ∈ H_Γ`: every part of `Γ` meets `F` in an even number of points.
pub fn in_subgroup(gamma: &Cover, f: &GroupElement) -> bool {
    gamma
        .parts()
        .iter()
        .all(|u| f.points_in(u).len().is_multiple_of(2))
}

/// Completes pairwise disjoint basic sets to a cover by adding every word
/// of the maximal special length that is unrelated to all special sets.
pub fn refine_to_cover(special: &[BasicSet]) -> Result<Cover, CoverError> {
    let mut sorted = special.to_vec();
    sorted.sort();
    sorted.dedup();
    check_antichain(&sorted, CoverError::NotDisjoint)?;
    let depth = sorted.iter().map(BasicSet::len).max().unwrap_or(0);
    let mut parts = sorted.clone();
    fill(&sorted, depth, &mut Word::new(), &mut parts);
    Ok(Cover::new(parts).expect("uniform completion is a cover"))
}

fn fill(special: &[BasicSet], depth: usize, node: &mut Word, out: &mut Vec<BasicSet>) {
    let level = node.len();
    if special.is_empty() {
        // Nothing special below: emit all descendants at the target depth.
        let rest = depth - level;
        for bits in 0u64..(1u64 << rest) {
            let mut w = node.clone();
            w.extend((0..rest).map(|i| {
                if bits >> (rest - 1 - i) & 1 == 1 {
                    Digit::Two
                } else {
                    Digit::Zero
                }
            }));
            out.push(BasicSet::new(w));
        }
        return;
    }
    if special.len() == 1 && special[0].len() == level {
        return;
    }
    let split = special.partition_point(|u| u.prefix()[level] == Digit::Zero);
    for (digit, side) in [(Digit::Zero, &special[..split]), (Digit::Two, &special[split..])] {
        node.push(digit);
        fill(side, depth, node, out);
        node.pop();
    }
}

/// Raised when enumeration stops at the cap with elements left over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("enumeration truncated after {cap} elements")]
pub struct CapExceeded {
    pub cap: usize,
}

/// Bounded enumeration of `H_Γ` over the tail-zero grid of a given depth.
///
/// Elements come ordered by size, then lexicographically by their sorted
/// point sequences; the identity is first. Partial selections are pruned
/// with an exact feasibility test, so every explored branch yields output.
pub struct SubgroupEnumerator {
    grid: Vec<CantorPoint>,
    part_of: Vec<usize>,
    // available[i][p]: grid points with index >= i lying in part p
    available: Vec<Vec<u32>>,
    counts: Vec<u32>,
    chosen: Vec<usize>,
    size: usize,
    cap: usize,
    emitted: usize,
    started: bool,
    done: bool,
    truncated: bool,
}

impl SubgroupEnumerator {
    pub fn new(gamma: &Cover, depth: usize, cap: usize) -> SubgroupEnumerator {
        let grid = grid(depth);
        let part_of: Vec<usize> = grid.iter().map(|p| gamma.part_index(p)).collect();
        let nparts = gamma.parts().len();
        let mut available = vec![vec![0u32; nparts]; grid.len() + 1];
        for i in (0..grid.len()).rev() {
            available[i] = available[i + 1].clone();
            available[i][part_of[i]] += 1;
        }
        SubgroupEnumerator {
            grid,
            part_of,
            available,
            counts: vec![0; nparts],
            chosen: Vec::new(),
            size: 0,
            cap,
            emitted: 0,
            started: false,
            done: false,
            truncated: false,
        }
    }

    pub fn grid(&self) -> &[CantorPoint] {
        &self.grid
    }

    /// Whether iteration stopped at the cap with elements remaining.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn cap_exceeded(&self) -> Option<CapExceeded> {
        self.truncated.then_some(CapExceeded { cap: self.cap })
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Can the current selection be completed to size `self.size` using
    /// grid indices `>= from`?
    fn feasible(&self, from: usize) -> bool {
        let remaining = self.size - self.chosen.len();
        let (mut lo, mut hi) = (0usize, 0usize);
        for (p, &have) in self.counts.iter().enumerate() {
            let avail = self.available[from][p] as usize;
            let odd = (have % 2) as usize;
            if odd == 1 && avail == 0 {
                return false;
            }
            lo += odd;
            hi += if avail % 2 == odd { avail } else { avail - 1 };
        }
        lo <= remaining && remaining <= hi
    }

    fn push(&mut self, i: usize) {
        self.chosen.push(i);
        self.counts[self.part_of[i]] += 1;
    }

    fn pop(&mut self) -> Option<usize> {
        let i = self.chosen.pop()?;
        self.counts[self.part_of[i]] -= 1;
        Some(i)
    }

    /// Extends the selection with the smallest feasible index `>= from`.
    fn push_first_feasible(&mut self, from: usize) -> bool {
        for i in from..self.grid.len() {
            self.push(i);
            if self.feasible(i + 1) {
                return true;
            }
            self.pop();
        }
        false
    }

    /// Greedily completes a feasible partial selection.
    fn fill(&mut self) {
        while self.chosen.len() < self.size {
            let from = self.chosen.last().map_or(0, |&i| i + 1);
            let ok = self.push_first_feasible(from);
            debug_assert!(ok, "feasible selections always complete");
        }
    }

    fn start_size(&mut self) -> bool {
        while self.size <= self.grid.len() {
            if self.feasible(0) {
                self.fill();
                return true;
            }
            self.size += 2;
        }
        false
    }

    fn advance(&mut self) -> bool {
        if !self.started {
            self.started = true;
            return self.start_size();
        }
        while let Some(last) = self.pop() {
            if self.push_first_feasible(last + 1) {
                self.fill();
                return true;
            }
        }
        // Odd sizes never meet every part evenly.
        self.size += 2;
        self.start_size()
    }

    fn current(&self) -> GroupElement {
        GroupElement::from_sorted_unchecked(
            self.chosen.iter().map(|&i| self.grid[i].clone()).collect(),
        )
    }
}

impl Iterator for SubgroupEnumerator {
    type Item = GroupElement;

    fn next(&mut self) -> Option<GroupElement> {
        if self.done {
            return None;
        }
        if !self.advance() {
            self.done = true;
            return None;
        }
        if self.emitted == self.cap {
            self.truncated = true;
            self.done = true;
            return None;
        }
        self.emitted += 1;
        Some(self.current())
    }
}

pub fn enumerate_subgroup(gamma: &Cover, depth: usize, cap: usize) -> SubgroupEnumerator {
    SubgroupEnumerator::new(gamma, depth, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn cover(s: &str) -> Cover {
        s.parse().unwrap()
    }

    fn sets(items: &[&str]) -> Vec<BasicSet> {
        items.iter().map(|s| s.parse().unwrap()).collect()
    }

    /// Every subset of the grid, filtered by membership; the enumerator's
    /// order is then imposed by sorting.
    fn power_set_oracle(gamma: &Cover, depth: usize) -> Vec<GroupElement> {
        let g = grid(depth);
        let mut out: Vec<GroupElement> = (0u64..(1 << g.len()))
            .map(|mask| {
                GroupElement::from_points(
                    (0..g.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| g[i].clone()),
                )
            })
            .filter(|h| in_subgroup(gamma, h))
            .collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.points().cmp(b.points())));
        out
    }

    #[test]
    fn symmetric_difference_examples() {
        assert_eq!(el("{2}").symmetric_difference(&el("{2}")), GroupElement::empty());
        assert_eq!(el("{0}").symmetric_difference(&el("{2}")), el("{0, 2}"));
        assert_eq!(el("{0, 02}").symmetric_difference(&el("{02, 2}")), el("{0, 2}"));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&"0".parse().unwrap(), &el("{2}")), Parity::Void);
        assert_eq!(classify(&"2".parse().unwrap(), &el("{2, 22}")), Parity::Even);
        assert_eq!(classify(&"*".parse().unwrap(), &el("{0, 02, 2}")), Parity::Odd);
    }

    #[test]
    fn points_in_agrees_with_counting() {
        let f = el("{0, 002, 00~2, 0~2, 2, 202, 20~2, ~2}");
        for w in crate::cantor::all_words(4) {
            let u = BasicSet::new(w);
            assert_eq!(f.points_in(&u).len(), f.count_in(&u), "{u}");
        }
    }

    #[test]
    fn subgroup_membership_examples() {
        let g = cover("{0, 2}");
        assert!(in_subgroup(&g, &el("{0, 02}")));
        assert!(!in_subgroup(&g, &el("{0, 2}")));
        assert!(in_subgroup(&g, &GroupElement::empty()));
    }

    #[test]
    fn cover_validation() {
        assert_eq!(
            "{0}".parse::<Cover>(),
            Err(CoverParseError::Invalid(CoverError::Incomplete("2".parse().unwrap())))
        );
        assert!(matches!(
            "{0, 02, 2}".parse::<Cover>(),
            Err(CoverParseError::Invalid(CoverError::Overlap(..)))
        ));
        assert!(matches!(
            "{*, *}".parse::<Cover>(),
            Err(CoverParseError::Parse(ParseError::Duplicate { .. }))
        ));
        assert!(matches!(
            "{00, 2}".parse::<Cover>(),
            Err(CoverParseError::Invalid(CoverError::Incomplete(_)))
        ));
        assert_eq!(cover("{2, 00, 02}").to_string(), "{00, 02, 2}");
        assert_eq!(Cover::trivial().to_string(), "{*}");
    }

    #[test]
    fn part_lookup() {
        let g = cover("{00, 02, 2}");
        let p: CantorPoint = "0~2".parse().unwrap();
        assert_eq!(g.part_containing(&p).to_string(), "02");
        assert_eq!(g.part_containing(&CantorPoint::one()).to_string(), "2");
        assert_eq!(g.part_containing(&CantorPoint::zero()).to_string(), "00");
    }

    #[test]
    fn refine_examples() {
        assert_eq!(refine_to_cover(&sets(&["2"])).unwrap(), cover("{0, 2}"));
        assert_eq!(
            refine_to_cover(&sets(&["02"])).unwrap(),
            cover("{00, 02, 20, 22}")
        );
        assert_eq!(refine_to_cover(&[]).unwrap(), Cover::trivial());
        assert_eq!(
            refine_to_cover(&sets(&["2", "000"])).unwrap(),
            cover("{000, 002, 020, 022, 2}")
        );
        assert!(matches!(
            refine_to_cover(&sets(&["0", "02"])),
            Err(CoverError::NotDisjoint(..))
        ));
    }

    #[test]
    fn enumerate_depth_one() {
        let all: Vec<_> = enumerate_subgroup(&cover("{0, 2}"), 1, 100).collect();
        assert_eq!(all, vec![GroupElement::empty()]);
        let trivial: Vec<_> = enumerate_subgroup(&Cover::trivial(), 1, 100).collect();
        assert_eq!(trivial, vec![GroupElement::empty(), el("{0, 2}")]);
    }

    #[test]
    fn enumerate_depth_two() {
        let all: Vec<_> = enumerate_subgroup(&cover("{0, 2}"), 2, 100).collect();
        assert_eq!(
            all,
            vec![
                GroupElement::empty(),
                el("{0, 02}"),
                el("{2, 22}"),
                el("{0, 02, 2, 22}"),
            ]
        );
    }

    #[test]
    fn enumerate_cap() {
        let mut e = enumerate_subgroup(&cover("{0, 2}"), 3, 1);
        assert_eq!(e.next(), Some(GroupElement::empty()));
        assert_eq!(e.next(), None);
        assert_eq!(e.cap_exceeded(), Some(CapExceeded { cap: 1 }));

        let mut e = enumerate_subgroup(&cover("{0, 2}"), 2, 4);
        assert_eq!(e.by_ref().count(), 4);
        assert!(!e.truncated());
    }

    #[test]
    fn enumerate_matches_power_set() {
        for s in [
            "{*}",
            "{0, 2}",
            "{00, 02, 2}",
            "{0, 20, 22}",
            "{00, 02, 20, 22}",
            "{000, 002, 02, 2}",
        ] {
            let g = cover(s);
            for depth in g.max_prefix_len()..=3 {
                let got: Vec<_> = enumerate_subgroup(&g, depth, usize::MAX).collect();
                assert_eq!(got, power_set_oracle(&g, depth), "{s} at depth {depth}");
            }
        }
    }

    #[test]
    fn parse_print_roundtrip() {
        for s in ["{}", "{0}", "{0, 02, 0~2, 20~2, ~2}"] {
            assert_eq!(el(s).to_string(), s);
        }
        assert_eq!(el("{ 22 ,0,2 }").to_string(), "{0, 2, 22}");
        assert!(matches!(
            "{0, 00}".parse::<GroupElement>(),
            Err(ParseError::Duplicate { position: 4, .. })
        ));
        assert_eq!(
            "{0, 21}".parse::<GroupElement>(),
            Err(ParseError::InvalidChar { position: 5, found: '1' })
        );
        assert!(matches!(
            "0, 2".parse::<GroupElement>(),
            Err(ParseError::Expected { position: 0, .. })
        ));
        assert!(matches!(
            "{0,,2}".parse::<GroupElement>(),
            Err(ParseError::Expected { .. })
        ));
    }
}
