//! Continuity witnesses for the retraction.
//!
//! Given an odd `F` and a basic neighbourhood `U` of `x = r(F)`, the
//! construction picks a basic `V_x ⊆ U` around `x` that meets `F` only in
//! `x` and misses every maximal `F`-even set, then completes those sets and
//! `V_x` to a cover `Γ`. Every `H ∈ H_Γ` then satisfies `r(F △ H) ∈ V_x`.
//! [`verify_witness`] checks that claim over a bounded piece of `H_Γ`.

use std::fmt;

use thiserror::Error;

use crate::cantor::{BasicSet, CantorPoint};
use crate::group::{
    classify, enumerate_subgroup, refine_to_cover, CapExceeded, Cover, GroupElement, Parity,
};
use crate::retraction::{maximal_even_prefixes, retract, RetractionError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("{u} is not a neighbourhood of r(F) = {x}")]
    NotNeighborhood { x: CantorPoint, u: BasicSet },
    #[error("even cardinality {0}: the retraction is defined only for odd sets")]
    EvenCardinality(usize),
    #[error("no part of the cover is odd for the given element")]
    NoOddPart,
    #[error("enumeration depth {depth} is below the cover's prefix length {needed}")]
    DepthTooSmall { depth: usize, needed: usize },
    #[error("{x} does not lie in {v_x}")]
    PointOutside { x: CantorPoint, v_x: BasicSet },
}

impl From<RetractionError> for WitnessError {
    fn from(e: RetractionError) -> WitnessError {
        match e {
            RetractionError::EvenCardinality(n) => WitnessError::EvenCardinality(n),
            RetractionError::EmptyElement => WitnessError::EvenCardinality(0),
            RetractionError::DepthTooSmall { depth, needed } => {
                WitnessError::DepthTooSmall { depth, needed }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub x: CantorPoint,
    pub v_x: BasicSet,
    pub maximal_even: Vec<BasicSet>,
    pub gamma: Cover,
    pub target: BasicSet,
}

impl WitnessReport {
    /// Default enumeration depth for verification: two levels below the
    /// deepest part of the cover.
    pub fn default_depth(&self) -> usize {
        self.gamma.max_prefix_len() + 2
    }
}

pub const DEFAULT_CAP: usize = 200_000;

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "x = {}", self.x)?;
        writeln!(f, "target = {}", self.target)?;
        writeln!(f, "v_x = {}", self.v_x)?;
        write!(f, "maximal_even = {{")?;
        for (k, u) in self.maximal_even.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}")?;
        }
        writeln!(f, "}}")?;
        write!(f, "gamma = {}", self.gamma)
    }
}

pub fn build_witness(f: &GroupElement, u: &BasicSet) -> Result<WitnessReport, WitnessError> {
    let x = retract(f)?;
    if !u.contains(&x) {
        return Err(WitnessError::NotNeighborhood { x, u: u.clone() });
    }
    let maximal_even = maximal_even_prefixes(f)?.maximal_even;
    // Prefixes of x eventually isolate it from the other points of F.
    let v_x = (u.len()..)
        .map(|len| x.prefix(len))
        .find(|v| {
            f.points_in(v).len() == 1 && maximal_even.iter().all(|w| v.is_disjoint(w))
        })
        .expect("a long enough prefix of x isolates it");
    let mut special = maximal_even.clone();
    special.push(v_x.clone());
    let gamma = refine_to_cover(&special).expect("V_x misses every maximal even set");
    Ok(WitnessReport {
        x,
        v_x,
        maximal_even,
        gamma,
        target: u.clone(),
    })
}

/// The `F`-odd part of `gamma` furthest to the left.
pub fn leftmost_odd_part<'g>(
    gamma: &'g Cover,
    f: &GroupElement,
) -> Result<&'g BasicSet, WitnessError> {
    gamma
        .parts()
        .iter()
        .find(|u| classify(u, f) == Parity::Odd)
        .ok_or(WitnessError::NoOddPart)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The first `H` whose image escapes, with `F △ H` and its image.
    Counterexample {
        h: GroupElement,
        moved: GroupElement,
        image: CantorPoint,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub checked: usize,
    pub outcome: Outcome,
    pub warning: Option<CapExceeded>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "checked = {}", self.checked)?;
        match &self.outcome {
            Outcome::Pass => write!(f, "result = pass")?,
            Outcome::Counterexample { h, moved, image } => {
                writeln!(f, "result = counterexample")?;
                writeln!(f, "H = {h}")?;
                writeln!(f, "F + H = {moved}")?;
                write!(f, "image = {image}")?;
            }
        }
        if let Some(w) = self.warning {
            write!(f, "\nwarning: {w}")?;
        }
        Ok(())
    }
}

fn check_depth(gamma: &Cover, depth: usize) -> Result<(), WitnessError> {
    let needed = gamma.max_prefix_len();
    if depth < needed {
        return Err(WitnessError::DepthTooSmall { depth, needed });
    }
    Ok(())
}

/// Checks `r(F △ H) ∈ V_x` for every enumerated `H ∈ H_Γ`.
pub fn verify_witness(
    report: &WitnessReport,
    f: &GroupElement,
    depth: usize,
    cap: usize,
) -> Result<Verification, WitnessError> {
    check_depth(&report.gamma, depth)?;
    let mut hs = enumerate_subgroup(&report.gamma, depth, cap);
    let mut checked = 0;
    for h in hs.by_ref() {
        let moved = f.symmetric_difference(&h);
        let image = retract(&moved)?;
        checked += 1;
        if !report.v_x.contains(&image) {
            return Ok(Verification {
                checked,
                outcome: Outcome::Counterexample { h, moved, image },
                warning: None,
            });
        }
    }
    Ok(Verification {
        checked,
        outcome: Outcome::Pass,
        warning: hs.cap_exceeded(),
    })
}

/// Checks `(x + H_Γ) ∩ C ⊆ V_x`: whenever `{x} △ H` is a single point, that
/// point lies in `v_x`. The inclusion holds whenever `v_x` is a part of
/// `gamma`; other choices may fail and are reported as counterexamples.
pub fn check_subspace_embedding(
    x: &CantorPoint,
    v_x: &BasicSet,
    gamma: &Cover,
    depth: usize,
    cap: usize,
) -> Result<Verification, WitnessError> {
    if !v_x.contains(x) {
        return Err(WitnessError::PointOutside {
            x: x.clone(),
            v_x: v_x.clone(),
        });
    }
    check_depth(gamma, depth)?;
    let start = GroupElement::singleton(x.clone());
    let mut hs = enumerate_subgroup(gamma, depth, cap);
    let mut checked = 0;
    for h in hs.by_ref() {
        // {x} △ H has |H| ± 1 points; elements arrive by increasing size,
        // so past size 2 no singleton can appear.
        if h.len() > 2 {
            return Ok(Verification {
                checked,
                outcome: Outcome::Pass,
                warning: None,
            });
        }
        checked += 1;
        let moved = start.symmetric_difference(&h);
        if let [y] = moved.points() {
            if !v_x.contains(y) {
                let image = y.clone();
                return Ok(Verification {
                    checked,
                    outcome: Outcome::Counterexample { h, moved, image },
                    warning: None,
                });
            }
        }
    }
    Ok(Verification {
        checked,
        outcome: Outcome::Pass,
        warning: hs.cap_exceeded(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    fn set(s: &str) -> BasicSet {
        s.parse().unwrap()
    }

    fn cover(s: &str) -> Cover {
        s.parse().unwrap()
    }

    #[test]
    fn witness_singleton() {
        let w = build_witness(&el("{2}"), &set("2")).unwrap();
        assert_eq!(w.x.to_string(), "2");
        assert!(w.maximal_even.is_empty());
        assert_eq!(w.v_x, set("2"));
        assert_eq!(w.gamma, cover("{0, 2}"));
    }

    #[test]
    fn witness_with_even_part() {
        let f = el("{0, 2, 22}");
        let w = build_witness(&f, &set("*")).unwrap();
        assert_eq!(w.x.to_string(), "0");
        assert_eq!(w.maximal_even, vec![set("2")]);
        assert_eq!(w.v_x, set("0"));
        assert_eq!(f.points_in(&w.v_x).len(), 1);
        assert!(w.v_x.is_disjoint(&set("2")));
        assert_eq!(w.gamma, cover("{0, 2}"));
    }

    #[test]
    fn witness_right_of_even_part() {
        let w = build_witness(&el("{0, 02, 2}"), &set("2")).unwrap();
        assert_eq!(w.x.to_string(), "2");
        assert_eq!(w.maximal_even, vec![set("0")]);
        assert_eq!(w.v_x, set("2"));
        assert_eq!(w.gamma, cover("{0, 2}"));
    }

    #[test]
    fn witness_errors() {
        assert_eq!(
            build_witness(&el("{0, 2, 22}"), &set("2")),
            Err(WitnessError::NotNeighborhood {
                x: "0".parse().unwrap(),
                u: set("2")
            })
        );
        assert_eq!(
            build_witness(&el("{0, 2}"), &set("*")),
            Err(WitnessError::EvenCardinality(2))
        );
    }

    #[test]
    fn leftmost_odd_examples() {
        let g = cover("{0, 2}");
        assert_eq!(leftmost_odd_part(&g, &el("{0, 2, 22}")).unwrap(), &set("0"));
        assert_eq!(leftmost_odd_part(&g, &el("{2}")).unwrap(), &set("2"));
        let g = cover("{00, 02, 2}");
        assert_eq!(leftmost_odd_part(&g, &el("{02, 2, 22}")).unwrap(), &set("02"));
        assert_eq!(
            leftmost_odd_part(&g, &el("{2, 22}")),
            Err(WitnessError::NoOddPart)
        );
    }

    #[test]
    fn verify_examples() {
        let f = el("{2}");
        let w = build_witness(&f, &set("2")).unwrap();
        assert!(verify_witness(&w, &f, 2, DEFAULT_CAP).unwrap().passed());

        let f = el("{0, 2, 22}");
        let w = build_witness(&f, &set("*")).unwrap();
        let v = verify_witness(&w, &f, 3, DEFAULT_CAP).unwrap();
        assert!(v.passed());
        assert_eq!(v.warning, None);
    }

    #[test]
    fn corrupted_cover_is_caught() {
        let f = el("{0, 02, 2}");
        let mut w = build_witness(&f, &set("2")).unwrap();
        w.gamma = Cover::trivial();
        let v = verify_witness(&w, &f, 3, DEFAULT_CAP).unwrap();
        // Found by the enumeration: {0, 002}, {0, 02}, {0, 022} all keep the
        // image at 2; {0, 2} leaves F △ H = {02}.
        assert_eq!(
            v.outcome,
            Outcome::Counterexample {
                h: el("{0, 2}"),
                moved: el("{02}"),
                image: "02".parse().unwrap()
            }
        );
        assert_eq!(v.checked, 5);
    }

    #[test]
    fn verify_rejects_shallow_depth() {
        let f = el("{0, 2, 22}");
        let w = build_witness(&f, &set("00")).unwrap();
        assert_eq!(
            verify_witness(&w, &f, 1, 10),
            Err(WitnessError::DepthTooSmall { depth: 1, needed: 2 })
        );
    }

    #[test]
    fn subspace_embedding_examples() {
        let x: CantorPoint = "2".parse().unwrap();
        let v = check_subspace_embedding(&x, &set("2"), &cover("{0, 2}"), 2, DEFAULT_CAP).unwrap();
        assert!(v.passed());

        let x = CantorPoint::zero();
        let v = check_subspace_embedding(&x, &set("0"), &cover("{0, 2}"), 1, DEFAULT_CAP).unwrap();
        assert!(v.passed());
        assert_eq!(v.checked, 1);
    }

    #[test]
    fn trivial_cover_does_not_embed() {
        let x = CantorPoint::zero();
        let v = check_subspace_embedding(&x, &set("0"), &Cover::trivial(), 1, DEFAULT_CAP)
            .unwrap();
        assert_eq!(
            v.outcome,
            Outcome::Counterexample {
                h: el("{0, 2}"),
                moved: el("{2}"),
                image: "2".parse().unwrap()
            }
        );
        assert!(matches!(
            check_subspace_embedding(&x, &set("2"), &cover("{0, 2}"), 1, DEFAULT_CAP),
            Err(WitnessError::PointOutside { .. })
        ));
    }
}
