//! Negative controls: covers that do not come from the witness
//! construction, under which the image of `F + H_Γ` escapes the target.

use std::fmt;

use crate::cantor::{grid, BasicSet, CantorPoint};
use crate::group::{enumerate_subgroup, refine_to_cover, Cover, GroupElement};
use crate::retraction::retract;
use crate::witness::{build_witness, WitnessReport};

use super::gen::combinations;
use super::TestCampaign;

/// Families of covers tried by the search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BadCover {
    /// `{C}`: only the total parity is constrained.
    Trivial,
    /// The witness cover with `V_x` replaced by its parent; maximal even
    /// sets inside the parent are dropped.
    MergedParent,
}

impl BadCover {
    fn cover_for(self, w: &WitnessReport) -> Option<Cover> {
        match self {
            BadCover::Trivial => Some(Cover::trivial()),
            BadCover::MergedParent => {
                let parent = w.v_x.ancestors().last()?;
                let mut special: Vec<BasicSet> = w
                    .maximal_even
                    .iter()
                    .filter(|m| parent.is_disjoint(m))
                    .cloned()
                    .collect();
                special.push(parent);
                refine_to_cover(&special).ok()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegativeControl {
    pub f: GroupElement,
    pub u: BasicSet,
    pub bad_gamma: Cover,
    pub h: GroupElement,
    pub image: CantorPoint,
}

impl fmt::Display for NegativeControl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F = {}, U = {}, gamma = {}, H = {}, r(F + H) = {}",
            self.f, self.u, self.bad_gamma, self.h, self.image
        )
    }
}

/// First enumerated `H ∈ H_gamma` with `r(F △ H) ∉ u`, for odd `f`.
pub fn find_escape(
    f: &GroupElement,
    u: &BasicSet,
    gamma: &Cover,
    depth: usize,
    cap: usize,
) -> Option<(GroupElement, CantorPoint)> {
    let depth = depth.max(gamma.max_prefix_len());
    enumerate_subgroup(gamma, depth, cap).find_map(|h| {
        let image = retract(&f.symmetric_difference(&h)).ok()?;
        (!u.contains(&image)).then_some((h, image))
    })
}

pub fn search_negative_control(bound: &TestCampaign) -> Option<NegativeControl> {
    search_negative_control_with(bound, &[BadCover::Trivial, BadCover::MergedParent])
}

/// Scans odd `F` on the grid of `max_word_length` (by size, then
/// lexicographically), each proper basic neighbourhood `U` of `r(F)` up to
/// that length, and each requested cover family.
pub fn search_negative_control_with(
    bound: &TestCampaign,
    kinds: &[BadCover],
) -> Option<NegativeControl> {
    let points = grid(bound.max_word_length);
    for size in (1..=bound.max_set_size).step_by(2) {
        for pts in combinations(&points, size) {
            let f = GroupElement::from_points(pts);
            let x = retract(&f).ok()?;
            for len in 1..=bound.max_word_length {
                let u = x.prefix(len);
                let witness = build_witness(&f, &u).ok()?;
                for &kind in kinds {
                    let Some(bad_gamma) = kind.cover_for(&witness) else {
                        continue;
                    };
                    if bad_gamma == witness.gamma {
                        continue;
                    }
                    if let Some((h, image)) =
                        find_escape(&f, &u, &bad_gamma, bound.enum_depth, bound.enum_cap)
                    {
                        return Some(NegativeControl {
                            f,
                            u,
                            bad_gamma,
                            h,
                            image,
                        });
                    }
                }
            }
        }
    }
    None
}
