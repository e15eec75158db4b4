use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::cantor::{
    all_words, compare, contains, grid, prefix_relation, BasicSet, CantorPoint, PrefixRelation,
};
use crate::group::{
    classify, enumerate_subgroup, in_subgroup, refine_to_cover, Cover, GroupElement, Parity,
};
use crate::retraction::{brute_force_retract, maximal_even_prefixes, retract};
use crate::witness::{
    build_witness, check_subspace_embedding, leftmost_odd_part, verify_witness, WitnessReport,
};

use super::gen::{
    all_covers, all_points, random_basic_set, random_cover, random_element, random_grid_point,
    random_odd_element, random_point, random_point_in, random_subgroup_element, real_order,
};
use super::shrink::shrink_element;
use super::{search_negative_control, Counterexample, Suite, TestCampaign};

/// Random covers used by the subgroup suites have at most this many parts.
const COVER_PARTS: usize = 8;
/// Enumerated subgroup elements kept per cover in the subgroup suites.
const SUBGROUP_SAMPLE: usize = 2_000;
const CASES_PER_COVER: usize = 25;

#[derive(Default)]
pub(super) struct Tally {
    pub passed: usize,
    pub failed: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl Tally {
    /// Records one case. A failure is evaluated a second time before it is
    /// reported.
    fn check(&mut self, holds: impl Fn() -> bool, describe: impl FnOnce() -> String) {
        if holds() {
            self.passed += 1;
            return;
        }
        let reproduced = !holds();
        self.fail(describe(), reproduced);
    }

    /// Like [`Tally::check`] for properties of one group element; failures
    /// are shrunk by point removal before being reported.
    fn check_element(
        &mut self,
        f: &GroupElement,
        holds: impl Fn(&GroupElement) -> bool,
        describe: impl Fn(&GroupElement) -> String,
    ) {
        if holds(f) {
            self.passed += 1;
            return;
        }
        let reproduced = !holds(f);
        let small = if reproduced {
            shrink_element(f.clone(), |g| !holds(g))
        } else {
            f.clone()
        };
        self.fail(describe(&small), reproduced);
    }

    fn fail(&mut self, description: String, reproduced: bool) {
        self.failed += 1;
        self.counterexamples.push(Counterexample {
            description,
            reproduced,
        });
    }
}

pub(super) fn run(suite: Suite, c: &TestCampaign, rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::default();
    match suite {
        Suite::CanonicalIdempotent => canonical_idempotent(c, rng, &mut t),
        Suite::OrderTotal => order_total(c, rng, &mut t),
        Suite::TreeProperty => tree_property(c, rng, &mut t),
        Suite::EndpointConsistency => endpoint_consistency(c, rng, &mut t),
        Suite::GroupLaws => group_laws(c, rng, &mut t),
        Suite::SubgroupClosure => subgroup_closure(c, rng, &mut t),
        Suite::EvenCardinality => even_cardinality(c, rng, &mut t),
        Suite::ParityTransfer => parity_transfer(c, rng, &mut t),
        Suite::CoverCompleteness => cover_completeness(c, rng, &mut t),
        Suite::EnumerationOracle => enumeration_oracle(&mut t),
        Suite::RetractionIdentity => retraction_identity(c, &mut t),
        Suite::RetractMembership => retract_membership(c, rng, &mut t),
        Suite::OddResidue => odd_residue(c, rng, &mut t),
        Suite::RetractionOracle => retraction_oracle(c, rng, &mut t),
        Suite::Maximality => maximality(c, rng, &mut t),
        Suite::UnionProperty => union_property(c, rng, &mut t),
        Suite::MainTheorem => main_theorem(c, rng, &mut t),
        Suite::LeftmostOddStability => leftmost_odd_stability(c, rng, &mut t),
        Suite::VxParity => vx_parity(c, rng, &mut t),
        Suite::NoEvenLanding => no_even_landing(c, rng, &mut t),
        Suite::SubspaceEmbedding => subspace_embedding(c, rng, &mut t),
        Suite::NegativeControl => negative_control(c, &mut t),
    }
    t
}

// cantor-core

fn canonical_idempotent(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let raw = random_point(rng, c.max_word_length);
        // Pad with copies of the tail digit to create a non-canonical word.
        let pad = rng.gen_range(0..=3);
        let mut word: Vec<_> = raw.word().to_vec();
        word.extend(std::iter::repeat_n(raw.tail().digit(), pad));
        let p = CantorPoint::new(word.clone(), raw.tail());
        t.check(
            || {
                let q = p.canonicalize();
                q == p
                    && q.canonicalize() == q
                    && q.word().last() != Some(&q.tail().digit())
                    && (0..word.len() + 2).all(|i| {
                        q.digit_at(i) == word.get(i).copied().unwrap_or(raw.tail().digit())
                    })
            },
            || format!("word {word:?} tail {:?} canonicalized to {p}", raw.tail()),
        );
    }
}

fn order_total(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let a = random_point(rng, c.max_word_length);
        let b = random_point(rng, c.max_word_length);
        let m = random_point(rng, c.max_word_length);
        t.check(
            || {
                let ab = compare(&a, &b);
                let antisymmetric = compare(&b, &a) == ab.reverse();
                let equal_iff_same = (ab == Ordering::Equal) == (a == b);
                let transitive = !(a <= b && b <= m) || a <= m;
                let real = ab == real_order(&a, &b)
                    && compare(&b, &m) == real_order(&b, &m)
                    && compare(&a, &m) == real_order(&a, &m);
                antisymmetric && equal_iff_same && transitive && real
            },
            || format!("points {a}, {b}, {m}"),
        );
    }
}

fn tree_property(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let u = random_basic_set(rng, c.max_word_length);
        let v = if rng.gen() {
            // Bias towards related pairs.
            let mut w = u.prefix().to_vec();
            w.truncate(rng.gen_range(0..=w.len()));
            w.extend(random_basic_set(rng, 2).prefix().iter().copied());
            BasicSet::new(w)
        } else {
            random_basic_set(rng, c.max_word_length)
        };
        let in_u: Vec<CantorPoint> = (0..4).map(|_| random_point_in(rng, &u, 3)).collect();
        let in_v: Vec<CantorPoint> = (0..4).map(|_| random_point_in(rng, &v, 3)).collect();
        t.check(
            || {
                let rel = prefix_relation(&u, &v);
                let u_pre = v.prefix().starts_with(u.prefix());
                let v_pre = u.prefix().starts_with(v.prefix());
                let expected = match (u_pre, v_pre) {
                    (true, true) => PrefixRelation::Equal,
                    (true, false) => PrefixRelation::UContainsV,
                    (false, true) => PrefixRelation::VContainsU,
                    (false, false) => PrefixRelation::Disjoint,
                };
                let samples_ok = match rel {
                    PrefixRelation::Equal => in_u.iter().chain(&in_v).all(|p| contains(&u, p) && contains(&v, p)),
                    PrefixRelation::UContainsV => in_v.iter().all(|p| contains(&u, p)),
                    PrefixRelation::VContainsU => in_u.iter().all(|p| contains(&v, p)),
                    PrefixRelation::Disjoint => {
                        in_v.iter().all(|p| !contains(&u, p)) && in_u.iter().all(|p| !contains(&v, p))
                    }
                };
                rel == expected && samples_ok
            },
            || format!("u = {u}, v = {v}"),
        );
    }
}

fn endpoint_consistency(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let u = random_basic_set(rng, c.max_word_length);
        let v = random_basic_set(rng, c.max_word_length);
        t.check(
            || {
                let (l, r) = (u.left_endpoint(), u.right_endpoint());
                let own = contains(&u, &l) && contains(&u, &r) && l <= r;
                let order = !u.is_disjoint(&v) || {
                    // The set whose prefix has 0 at the first difference is left.
                    let k = (0..)
                        .find(|&i| u.prefix()[i] != v.prefix()[i])
                        .expect("disjoint prefixes differ");
                    let u_left = u.prefix()[k] < v.prefix()[k];
                    u.is_left_of(&v) == u_left && v.is_left_of(&u) == !u_left
                };
                own && order
            },
            || format!("u = {u}, v = {v}"),
        );
    }
}

// boolean-group

fn group_laws(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let draw = |rng: &mut ChaCha8Rng| {
            let n = rng.gen_range(0..=c.max_set_size);
            random_element(rng, n, c.max_word_length)
        };
        let (a, b, m) = (draw(rng), draw(rng), draw(rng));
        t.check(
            || {
                let e = GroupElement::empty();
                let ab = a.symmetric_difference(&b);
                let elementwise = a
                    .points()
                    .iter()
                    .chain(b.points())
                    .all(|p| ab.contains(p) == (a.contains(p) != b.contains(p)))
                    && ab.points().iter().all(|p| a.contains(p) || b.contains(p));
                ab.symmetric_difference(&m) == a.symmetric_difference(&b.symmetric_difference(&m))
                    && ab == b.symmetric_difference(&a)
                    && a.symmetric_difference(&e) == a
                    && a.symmetric_difference(&a) == e
                    && elementwise
            },
            || format!("a = {a}, b = {b}, c = {m}"),
        );
    }
}

struct SubgroupSample {
    gamma: Cover,
    depth: usize,
    hs: Vec<GroupElement>,
}

/// A random cover with a pool of its subgroup elements: the first
/// enumerated ones plus random sums of pairs, which reach larger sizes.
fn subgroup_sample(c: &TestCampaign, rng: &mut ChaCha8Rng) -> SubgroupSample {
    let gamma = random_cover(rng, COVER_PARTS, c.max_word_length);
    let depth = c.enum_depth;
    let mut hs: Vec<GroupElement> =
        enumerate_subgroup(&gamma, depth, c.enum_cap.min(SUBGROUP_SAMPLE)).collect();
    for _ in 0..CASES_PER_COVER {
        hs.push(random_subgroup_element(rng, &gamma, depth, c.max_set_size));
    }
    SubgroupSample { gamma, depth, hs }
}

fn cover_rounds(c: &TestCampaign) -> usize {
    c.cases.div_ceil(CASES_PER_COVER)
}

fn subgroup_closure(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..cover_rounds(c) {
        let s = subgroup_sample(c, rng);
        for _ in 0..CASES_PER_COVER {
            let h1 = s.hs.choose(rng).expect("identity is enumerated");
            let h2 = s.hs.choose(rng).expect("identity is enumerated");
            t.check(
                || {
                    in_subgroup(&s.gamma, h1)
                        && in_subgroup(&s.gamma, h2)
                        && in_subgroup(&s.gamma, &h1.symmetric_difference(h2))
                },
                || format!("gamma = {}, H1 = {h1}, H2 = {h2}", s.gamma),
            );
        }
    }
}

fn even_cardinality(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..cover_rounds(c) {
        let s = subgroup_sample(c, rng);
        for _ in 0..CASES_PER_COVER {
            let h = s.hs.choose(rng).expect("identity is enumerated");
            let n = rng.gen_range(0..=c.max_set_size);
            let f = random_element(rng, n, s.depth);
            t.check(
                || h.len().is_multiple_of(2) && f.symmetric_difference(h).is_odd() == f.is_odd(),
                || format!("gamma = {}, H = {h}, F = {f}", s.gamma),
            );
        }
    }
}

fn parity_transfer(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..cover_rounds(c) {
        let s = subgroup_sample(c, rng);
        for _ in 0..CASES_PER_COVER {
            let h = s.hs.choose(rng).expect("identity is enumerated");
            let n = rng.gen_range(0..=c.max_set_size);
            let f = random_element(rng, n, s.depth);
            let v = s.gamma.parts().choose(rng).expect("covers are nonempty");
            t.check(
                || {
                    (classify(v, &f.symmetric_difference(h)) == Parity::Odd)
                        == (classify(v, &f) == Parity::Odd)
                },
                || format!("gamma = {}, part = {v}, H = {h}, F = {f}", s.gamma),
            );
        }
    }
}

/// Independent completeness test: the parts' measures `2^-len` sum to one
/// and no two parts are comparable.
fn is_partition(parts: &[BasicSet]) -> bool {
    let depth = parts.iter().map(BasicSet::len).max().unwrap_or(0);
    let measure: u128 = parts.iter().map(|u| 1u128 << (depth - u.len())).sum();
    let disjoint = parts
        .iter()
        .enumerate()
        .all(|(i, u)| parts[i + 1..].iter().all(|v| u.is_disjoint(v)));
    disjoint && measure == 1u128 << depth
}

fn cover_completeness(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let source = random_cover(rng, COVER_PARTS, c.max_word_length);
        let special: Vec<BasicSet> = source
            .parts()
            .iter()
            .filter(|_| rng.gen_bool(0.4))
            .cloned()
            .collect();
        t.check(
            || {
                is_partition(source.parts())
                    && match refine_to_cover(&special) {
                        Ok(g) => {
                            is_partition(g.parts())
                                && special.iter().all(|s| g.has_part(s))
                                && g.parts().iter().all(|p| {
                                    special.contains(p) || special.iter().all(|s| p.is_disjoint(s))
                                })
                        }
                        Err(_) => false,
                    }
            },
            || {
                let names: Vec<String> = special.iter().map(ToString::to_string).collect();
                format!("source = {source}, special = {{{}}}", names.join(", "))
            },
        );
    }
}

fn enumeration_oracle(t: &mut Tally) {
    for gamma in all_covers(2) {
        for depth in gamma.max_prefix_len()..=3 {
            let g = grid(depth);
            let mut expected: Vec<GroupElement> = (0u64..(1 << g.len()))
                .map(|mask| {
                    GroupElement::from_points(
                        (0..g.len()).filter(|i| mask >> i & 1 == 1).map(|i| g[i].clone()),
                    )
                })
                .filter(|h| {
                    gamma
                        .parts()
                        .iter()
                        .all(|u| h.points().iter().filter(|p| u.contains(p)).count() % 2 == 0)
                })
                .collect();
            expected.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.points().cmp(b.points())));
            t.check(
                || enumerate_subgroup(&gamma, depth, usize::MAX).eq(expected.iter().cloned()),
                || format!("gamma = {gamma}, depth = {depth}"),
            );
        }
    }
}

// retraction

fn retraction_identity(c: &TestCampaign, t: &mut Tally) {
    for x in all_points(c.max_word_length) {
        let f = GroupElement::singleton(x.clone());
        t.check(|| retract(&f).as_ref() == Ok(&x), || format!("x = {x}"));
    }
}

fn retract_membership(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let f = random_odd_element(rng, c.max_set_size, c.max_word_length);
        t.check_element(
            &f,
            |g| g.is_odd() && retract(g).is_ok_and(|x| g.contains(&x)),
            |g| format!("F = {g}"),
        );
    }
}

fn odd_residue(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let f = random_odd_element(rng, c.max_set_size, c.max_word_length);
        t.check_element(
            &f,
            |g| {
                g.is_odd()
                    && maximal_even_prefixes(g).is_ok_and(|d| {
                        let uncovered = GroupElement::from_points(
                            g.points()
                                .iter()
                                .filter(|p| !d.maximal_even.iter().any(|u| u.contains(p)))
                                .cloned(),
                        );
                        d.residue.is_odd() && d.residue == uncovered
                    })
            },
            |g| format!("F = {g}"),
        );
    }
}

fn retraction_oracle(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let depth = c.max_word_length + 2;
    for _ in 0..c.cases {
        let f = random_odd_element(rng, c.max_set_size, c.max_word_length);
        t.check_element(
            &f,
            |g| g.is_odd() && retract(g).ok() == brute_force_retract(g, depth).ok(),
            |g| {
                format!(
                    "F = {g}: trie walk {:?}, oracle {:?}",
                    retract(g).map(|x| x.to_string()),
                    brute_force_retract(g, depth).map(|x| x.to_string())
                )
            },
        );
    }
}

fn maximality(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let f = random_odd_element(rng, c.max_set_size, c.max_word_length);
        t.check_element(
            &f,
            |g| {
                maximal_even_prefixes(g).is_ok_and(|d| {
                    let parts = &d.maximal_even;
                    parts.iter().all(|u| {
                        classify(u, g) == Parity::Even
                            && u.ancestors().all(|a| classify(&a, g) != Parity::Even)
                    }) && parts
                        .iter()
                        .enumerate()
                        .all(|(i, u)| parts[i + 1..].iter().all(|v| u.is_disjoint(v)))
                })
            },
            |g| format!("F = {g}"),
        );
    }
}

fn union_property(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    let depth = c.max_word_length + 2;
    for _ in 0..c.cases {
        let f = random_odd_element(rng, c.max_set_size, c.max_word_length);
        t.check_element(
            &f,
            |g| {
                maximal_even_prefixes(g).is_ok_and(|d| {
                    let covered = all_words(depth)
                        .map(BasicSet::new)
                        .filter(|u| classify(u, g) == Parity::Even)
                        .all(|u| d.maximal_even.iter().any(|m| m.includes(&u)));
                    let union_count: usize =
                        d.maximal_even.iter().map(|m| g.points_in(m).len()).sum();
                    covered && union_count.is_multiple_of(2)
                })
            },
            |g| format!("F = {g}"),
        );
    }
}

// topology-witness

fn random_witness(c: &TestCampaign, rng: &mut ChaCha8Rng) -> (GroupElement, WitnessReport) {
    let f = random_odd_element(rng, c.max_set_size, c.max_word_length);
    let x = retract(&f).expect("odd");
    let u = x.prefix(rng.gen_range(0..=c.max_word_length));
    let w = build_witness(&f, &u).expect("u is a neighbourhood of r(F)");
    (f, w)
}

fn describe_witness(f: &GroupElement, w: &WitnessReport) -> String {
    format!("F = {f}, U = {}, v_x = {}, gamma = {}", w.target, w.v_x, w.gamma)
}

fn witness_invariants(w: &WitnessReport, f: &GroupElement) -> bool {
    w.target.includes(&w.v_x)
        && f.points_in(&w.v_x) == std::slice::from_ref(&w.x)
        && w.maximal_even.iter().all(|m| m.is_disjoint(&w.v_x) && w.gamma.has_part(m))
        && w.gamma.has_part(&w.v_x)
}

fn main_theorem(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let (f, w) = random_witness(c, rng);
        let outcome = || {
            witness_invariants(&w, &f)
                && verify_witness(&w, &f, c.enum_depth, c.enum_cap).is_ok_and(|v| v.passed())
        };
        t.check(outcome, || {
            let detail = verify_witness(&w, &f, c.enum_depth, c.enum_cap)
                .map(|v| v.to_string().replace('\n', "; "))
                .unwrap_or_else(|e| e.to_string());
            format!("{}: {detail}", describe_witness(&f, &w))
        });
    }
}

/// Checks `prop(F △ H)` for every enumerated `H` of the witness cover; the
/// first failing `H` is returned.
fn first_bad_h(
    c: &TestCampaign,
    f: &GroupElement,
    w: &WitnessReport,
    prop: impl Fn(&GroupElement) -> bool,
) -> Option<GroupElement> {
    enumerate_subgroup(&w.gamma, c.enum_depth, c.enum_cap)
        .find(|h| !prop(&f.symmetric_difference(h)))
}

fn witness_suite(
    c: &TestCampaign,
    rng: &mut ChaCha8Rng,
    t: &mut Tally,
    prop: impl Fn(&WitnessReport, &GroupElement) -> bool,
) {
    for _ in 0..c.cases {
        let (f, w) = random_witness(c, rng);
        let bad = || first_bad_h(c, &f, &w, |moved| prop(&w, moved));
        t.check(
            || bad().is_none(),
            || match bad() {
                Some(h) => format!("{}, H = {h}", describe_witness(&f, &w)),
                None => describe_witness(&f, &w),
            },
        );
    }
}

fn leftmost_odd_stability(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    // H = ∅ covers the unperturbed case leftmost_odd_part(Γ, F) = V_x.
    witness_suite(c, rng, t, |w, moved| {
        leftmost_odd_part(&w.gamma, moved).is_ok_and(|v| *v == w.v_x)
    });
}

fn vx_parity(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    witness_suite(c, rng, t, |w, moved| classify(&w.v_x, moved) == Parity::Odd);
}

fn no_even_landing(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    witness_suite(c, rng, t, |w, moved| {
        retract(moved).is_ok_and(|y| classify(w.gamma.part_containing(&y), moved) != Parity::Even)
    });
}

fn subspace_embedding(c: &TestCampaign, rng: &mut ChaCha8Rng, t: &mut Tally) {
    for _ in 0..c.cases {
        let (_, w) = random_witness(c, rng);
        let x = loop {
            let p = random_grid_point(rng, c.max_word_length.max(w.v_x.len()));
            if w.v_x.contains(&p) {
                break p;
            }
            if rng.gen_bool(0.1) {
                break w.x.clone();
            }
        };
        t.check(
            || {
                check_subspace_embedding(&x, &w.v_x, &w.gamma, c.enum_depth, c.enum_cap)
                    .is_ok_and(|v| v.passed())
            },
            || format!("x = {x}, v_x = {}, gamma = {}", w.v_x, w.gamma),
        );
    }
}

fn negative_control(c: &TestCampaign, t: &mut Tally) {
    let found = search_negative_control(c);
    t.check(
        || {
            found.as_ref().is_some_and(|n| {
                in_subgroup(&n.bad_gamma, &n.h)
                    && retract(&n.f.symmetric_difference(&n.h)).ok().as_ref() == Some(&n.image)
                    && !n.u.contains(&n.image)
            })
        },
        || match &found {
            Some(n) => format!("invalid control {n}"),
            None => "no escaping H found under any non-witness cover".to_string(),
        },
    );
}
