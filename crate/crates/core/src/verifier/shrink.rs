//! Greedy shrinking of failing group elements by point removal.

use crate::group::GroupElement;

/// Elements with one point removed, then with two points removed. Pairs
/// keep the parity of the input, which odd-only properties need.
pub fn removal_candidates(f: &GroupElement) -> Vec<GroupElement> {
    let n = f.len();
    let mut out: Vec<GroupElement> = (0..n).map(|i| f.without(i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(f.without(j).without(i));
        }
    }
    out
}

/// Repeatedly replaces `f` by the first removal candidate that still
/// fails, until none does. `fails` must be false on inputs outside the
/// property's precondition.
pub fn shrink_element(f: GroupElement, fails: impl Fn(&GroupElement) -> bool) -> GroupElement {
    let mut best = f;
    'outer: loop {
        for candidate in removal_candidates(&best) {
            if fails(&candidate) {
                best = candidate;
                continue 'outer;
            }
        }
        return best;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cantor::CantorPoint;

    fn el(s: &str) -> GroupElement {
        s.parse().unwrap()
    }

    #[test]
    fn shrinks_to_minimal_failing_set() {
        let target: CantorPoint = "22".parse().unwrap();
        // fails whenever 22 is present
        let small = shrink_element(el("{0, 02, 2, 22, 222}"), |f| f.contains(&target));
        assert_eq!(small, el("{22}"));
    }

    #[test]
    fn parity_preserving_removal() {
        // fails on odd sets of size >= 3; single removals break parity
        let small = shrink_element(el("{0, 02, 2, 22, 222}"), |f| f.is_odd() && f.len() >= 3);
        assert_eq!(small.len(), 3);
    }

    #[test]
    fn passing_predicate_keeps_input() {
        let f = el("{0, 2}");
        assert_eq!(shrink_element(f.clone(), |_| false), f);
    }
}
