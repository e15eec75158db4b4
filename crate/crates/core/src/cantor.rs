//! Points of the Cantor set with eventually-constant ternary expansions, and
//! the basic clopen sets `U_w` given by finite prefixes over `{0, 2}`.
//!
//! A point is a finite word followed by an infinite run of one digit. The
//! stored word never ends with the tail digit, so structural equality is
//! equality of the real numbers denoted.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use smallvec::SmallVec;
use thiserror::Error;

/// A ternary digit of a point in the Cantor set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Digit {
    Zero,
    Two,
}

impl Digit {
    pub fn as_char(self) -> char {
        match self {
            Digit::Zero => '0',
            Digit::Two => '2',
        }
    }

    pub fn from_char(c: char) -> Option<Digit> {
        match c {
            '0' => Some(Digit::Zero),
            '2' => Some(Digit::Two),
            _ => None,
        }
    }
}

/// The constant digit repeated forever after a point's finite word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Zeros,
    Twos,
}

impl Tail {
    pub fn digit(self) -> Digit {
        match self {
            Tail::Zeros => Digit::Zero,
            Tail::Twos => Digit::Two,
        }
    }
}

/// Finite word over `{0, 2}`.
pub type Word = SmallVec<[Digit; 16]>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid character {found:?} at position {position}")]
    InvalidChar { position: usize, found: char },
    #[error("invalid tail marker at position {position}: expected \"~0\" or \"~2\"")]
    InvalidTail { position: usize },
    #[error("expected {expected} at position {position}")]
    Expected { position: usize, expected: &'static str },
    #[error("duplicate entry {entry} at position {position}")]
    Duplicate { position: usize, entry: String },
    #[error("empty input")]
    Empty,
}

impl ParseError {
    /// Shift every reported position by `by` characters.
    pub(crate) fn offset(self, by: usize) -> ParseError {
        match self {
            ParseError::InvalidChar { position, found } => ParseError::InvalidChar {
                position: position + by,
                found,
            },
            ParseError::InvalidTail { position } => ParseError::InvalidTail {
                position: position + by,
            },
            ParseError::Expected { position, expected } => ParseError::Expected {
                position: position + by,
                expected,
            },
            ParseError::Duplicate { position, entry } => ParseError::Duplicate {
                position: position + by,
                entry,
            },
            ParseError::Empty => ParseError::Empty,
        }
    }
}

fn parse_word(s: &str) -> Result<Word, ParseError> {
    s.chars()
        .enumerate()
        .map(|(position, found)| {
            Digit::from_char(found).ok_or(ParseError::InvalidChar { position, found })
        })
        .collect()
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[Digit]) -> fmt::Result {
    for d in word {
        write!(f, "{}", d.as_char())?;
    }
    Ok(())
}

/// A point of the Cantor set: `0.w ddd…` in ternary, with `w` finite and
/// `d` the tail digit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CantorPoint {
    word: Word,
    tail: Tail,
}

impl CantorPoint {
    /// Builds a point, stripping trailing copies of the tail digit.
    pub fn new(word: impl IntoIterator<Item = Digit>, tail: Tail) -> CantorPoint {
        let mut word: Word = word.into_iter().collect();
        let t = tail.digit();
        while word.last() == Some(&t) {
            word.pop();
        }
        CantorPoint { word, tail }
    }

    /// The point 0, i.e. `0.000…`.
    pub fn zero() -> CantorPoint {
        CantorPoint {
            word: Word::new(),
            tail: Tail::Zeros,
        }
    }

    /// The point 1, i.e. `0.222…`.
    pub fn one() -> CantorPoint {
        CantorPoint {
            word: Word::new(),
            tail: Tail::Twos,
        }
    }

    pub fn word(&self) -> &[Digit] {
        &self.word
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Returns the point in canonical form. Points are always stored
    /// canonically, so this is a clone; it exists so callers can state
    /// idempotence explicitly.
    pub fn canonicalize(&self) -> CantorPoint {
        CantorPoint::new(self.word.iter().copied(), self.tail)
    }

    /// The `i`-th digit (0-based) of the full infinite expansion.
    #[inline]
    pub fn digit_at(&self, i: usize) -> Digit {
        match self.word.get(i) {
            Some(&d) => d,
            None => self.tail.digit(),
        }
    }

    /// The first `len` digits of the expansion, as a basic set.
    pub fn prefix(&self, len: usize) -> BasicSet {
        BasicSet::new((0..len).map(|i| self.digit_at(i)))
    }
}

impl Ord for CantorPoint {
    fn cmp(&self, other: &CantorPoint) -> Ordering {
        // Past the longer word both expansions are constant, so one extra
        // digit settles the comparison.
        let n = self.word.len().max(other.word.len()) + 1;
        for i in 0..n {
            match self.digit_at(i).cmp(&other.digit_at(i)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for CantorPoint {
    fn partial_cmp(&self, other: &CantorPoint) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Order of the real numbers denoted by `a` and `b`.
pub fn compare(a: &CantorPoint, b: &CantorPoint) -> Ordering {
    a.cmp(b)
}

impl fmt::Display for CantorPoint {
    /// Canonical text: the word, plus `~2` for a tail of twos. The point 0
    /// prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tail {
            Tail::Zeros if self.word.is_empty() => write!(f, "0"),
            Tail::Zeros => write_word(f, &self.word),
            Tail::Twos => {
                write_word(f, &self.word)?;
                write!(f, "~2")
            }
        }
    }
}

impl FromStr for CantorPoint {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<CantorPoint, ParseError> {
        let (word_text, tail) = match s.find('~') {
            None => (s, Tail::Zeros),
            Some(at) => {
                let tail = match &s[at..] {
                    "~0" => Tail::Zeros,
                    "~2" => Tail::Twos,
                    _ => return Err(ParseError::InvalidTail { position: at }),
                };
                (&s[..at], tail)
            }
        };
        Ok(CantorPoint::new(parse_word(word_text)?, tail))
    }
}

/// Basic clopen set `U_w`: every point whose expansion begins with `w`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasicSet {
    prefix: Word,
}

/// How two basic sets sit in the prefix tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrefixRelation {
    UContainsV,
    VContainsU,
    Equal,
    Disjoint,
}

impl BasicSet {
    pub fn new(prefix: impl IntoIterator<Item = Digit>) -> BasicSet {
        BasicSet {
            prefix: prefix.into_iter().collect(),
        }
    }

    /// The whole Cantor set, `U_∅`.
    pub fn whole() -> BasicSet {
        BasicSet { prefix: Word::new() }
    }

    pub fn prefix(&self) -> &[Digit] {
        &self.prefix
    }

    #[allow(clippy::len_without_is_empty)] // a basic set is never empty; see is_whole
    pub fn len(&self) -> usize {
        self.prefix.len()
    }

    pub fn is_whole(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn child(&self, d: Digit) -> BasicSet {
        let mut prefix = self.prefix.clone();
        prefix.push(d);
        BasicSet { prefix }
    }

    /// Proper ancestors, from the whole space down to the parent.
    pub fn ancestors(&self) -> impl Iterator<Item = BasicSet> + '_ {
        (0..self.prefix.len()).map(|k| BasicSet::new(self.prefix[..k].iter().copied()))
    }

    #[inline]
    pub fn contains(&self, p: &CantorPoint) -> bool {
        self.prefix
            .iter()
            .enumerate()
            .all(|(i, &d)| p.digit_at(i) == d)
    }

    /// Set inclusion `other ⊆ self`.
    pub fn includes(&self, other: &BasicSet) -> bool {
        other.prefix.starts_with(&self.prefix)
    }

    pub fn is_disjoint(&self, other: &BasicSet) -> bool {
        !self.includes(other) && !other.includes(self)
    }

    pub fn left_endpoint(&self) -> CantorPoint {
        CantorPoint::new(self.prefix.iter().copied(), Tail::Zeros)
    }

    pub fn right_endpoint(&self) -> CantorPoint {
        CantorPoint::new(self.prefix.iter().copied(), Tail::Twos)
    }

    /// For disjoint sets: whether every point of `self` lies left of `other`.
    pub fn is_left_of(&self, other: &BasicSet) -> bool {
        self.right_endpoint() < other.left_endpoint()
    }
}

pub fn contains(u: &BasicSet, p: &CantorPoint) -> bool {
    u.contains(p)
}

pub fn prefix_relation(u: &BasicSet, v: &BasicSet) -> PrefixRelation {
    match (u.includes(v), v.includes(u)) {
        (true, true) => PrefixRelation::Equal,
        (true, false) => PrefixRelation::UContainsV,
        (false, true) => PrefixRelation::VContainsU,
        (false, false) => PrefixRelation::Disjoint,
    }
}

pub fn left_endpoint(u: &BasicSet) -> CantorPoint {
    u.left_endpoint()
}

pub fn right_endpoint(u: &BasicSet) -> CantorPoint {
    u.right_endpoint()
}

impl fmt::Display for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            write!(f, "*")
        } else {
            write_word(f, &self.prefix)
        }
    }
}

impl FromStr for BasicSet {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<BasicSet, ParseError> {
        match s {
            "*" => Ok(BasicSet::whole()),
            "" => Err(ParseError::Empty),
            _ => Ok(BasicSet {
                prefix: parse_word(s)?,
            }),
        }
    }
}

/// All tail-zero points whose canonical word has length at most `depth`,
/// in increasing order. There are `2^depth` of them.
pub fn grid(depth: usize) -> Vec<CantorPoint> {
    let mut points: Vec<CantorPoint> = all_words(depth)
        .filter(|w| w.len() == depth)
        .map(|w| CantorPoint::new(w, Tail::Zeros))
        .collect();
    points.sort();
    points.dedup();
    points
}

/// Every word over `{0, 2}` of length at most `max_len`, shortest first,
/// lexicographic within a length.
pub fn all_words(max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(|len| {
        (0u64..(1u64 << len)).map(move |bits| {
            (0..len)
                .map(|i| {
                    if bits >> (len - 1 - i) & 1 == 1 {
                        Digit::Two
                    } else {
                        Digit::Zero
                    }
                })
                .collect()
        })
    })
}
