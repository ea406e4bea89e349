//! Increasing events and positive association.
//!
//! An *up-set* (increasing event) over `n` two-valued coordinates is a set
//! of configuration ranks closed under raising coordinates. A measure is
//! *positively associated* if every pair of up-sets has nonnegative
//! covariance; [`positive_association_check`] verifies this by exhausting
//! all up-set pairs, which is exact but grows with the Dedekind numbers
//! (2, 3, 6, 20, 168, 7581 up-sets for 0 to 5 coordinates), hence the
//! coordinate caps.
//!
//! The module also provides the two covariance checks used to relate a
//! spin event to an edge under single-site conditioning: an exact
//! conditional-covariance decomposition ([`lemma1_decomposition_check`])
//! and a scan over all increasing spin events of the covariance with one
//! edge's state, conditioned on one vertex being plus ([`lemma2_check`]).

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::rational::{common_numerators, Rational};
use crate::spin_measure::JointMeasure;
use crate::Result;

/// Default cap on coordinates for exhaustive up-set pair scans.
pub const DEFAULT_COORDINATE_CAP: usize = 4;

/// Hard cap on coordinates for up-set enumeration (7581 up-sets at 5
/// coordinates; 6 would take millions).
pub const UPSET_ENUMERATION_CAP: usize = 5;

/// An event over `n <= 6` two-valued coordinates, closed upward: if a
/// rank is a member, so is every rank obtained by raising coordinates.
/// Membership is stored as a bitmask over ranks (bit `r` set means rank
/// `r` is in the event).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UpSet {
    coordinates: usize,
    members: u64,
}

impl UpSet {
    /// Builds an up-set from a membership mask, validating upward closure.
    pub fn new(coordinates: usize, members: u64) -> Result<UpSet> {
        if coordinates > 6 {
            return Err(Error::CoordinateCapExceeded {
                coordinates,
                cap: 6,
            });
        }
        let rank_count = 1u64 << coordinates;
        if rank_count < 64 && members >> rank_count != 0 {
            return Err(Error::Unsupported(alloc::format!(
                "membership mask {members:#x} names ranks outside 0..{rank_count}"
            )));
        }
        for r in 0..rank_count {
            if (members >> r) & 1 == 1 {
                for i in 0..coordinates {
                    let above = r | (1 << i);
                    if (members >> above) & 1 == 0 {
                        return Err(Error::Unsupported(alloc::format!(
                            "set is not closed upward: rank {r} is a member but rank {above} is not"
                        )));
                    }
                }
            }
        }
        Ok(UpSet {
            coordinates,
            members,
        })
    }

    /// The empty event.
    pub fn empty(coordinates: usize) -> Result<UpSet> {
        UpSet::new(coordinates, 0)
    }

    /// The sure event (all ranks).
    pub fn full(coordinates: usize) -> Result<UpSet> {
        let rank_count = 1u64 << coordinates;
        let members = if rank_count >= 64 {
            u64::MAX
        } else {
            (1u64 << rank_count) - 1
        };
        UpSet::new(coordinates, members)
    }

    /// The principal up-set of `generator`: all ranks whose coordinates
    /// dominate it.
    pub fn principal(coordinates: usize, generator: u64) -> Result<UpSet> {
        if coordinates > 6 {
            return Err(Error::CoordinateCapExceeded {
                coordinates,
                cap: 6,
            });
        }
        let rank_count = 1u64 << coordinates;
        if generator >= rank_count {
            return Err(Error::ConfigOutOfRange {
                rank: generator,
                edge_count: coordinates,
            });
        }
        let mut members = 0u64;
        for r in 0..rank_count {
            if r & generator == generator {
                members |= 1 << r;
            }
        }
        Ok(UpSet {
            coordinates,
            members,
        })
    }

    pub fn coordinates(&self) -> usize {
        self.coordinates
    }

    /// The membership mask over ranks.
    pub fn members_mask(&self) -> u64 {
        self.members
    }

    /// Whether `rank` belongs to the event.
    pub fn contains(&self, rank: u64) -> bool {
        rank < (1u64 << self.coordinates) && (self.members >> rank) & 1 == 1
    }

    /// Member ranks in ascending order.
    pub fn member_ranks(&self) -> Vec<u64> {
        (0..(1u64 << self.coordinates))
            .filter(|&r| (self.members >> r) & 1 == 1)
            .collect()
    }

    /// The complement is a down-set; its indicator is 1 minus this one's.
    pub fn member_count(&self) -> u32 {
        self.members.count_ones()
    }
}

/// An increasing event described only by a membership predicate; used
/// where the coordinate count exceeds what [`UpSet`] masks can hold.
pub trait IncreasingEvent {
    fn coordinates(&self) -> usize;
    fn contains(&self, rank: u64) -> bool;
}

impl IncreasingEvent for UpSet {
    fn coordinates(&self) -> usize {
        self.coordinates
    }

    fn contains(&self, rank: u64) -> bool {
        UpSet::contains(self, rank)
    }
}

/// The principal increasing event above one generator configuration, for
/// any coordinate count: membership is domination of the generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrincipalUpSet {
    pub coordinates: usize,
    pub generator: u64,
}

impl IncreasingEvent for PrincipalUpSet {
    fn coordinates(&self) -> usize {
        self.coordinates
    }

    fn contains(&self, rank: u64) -> bool {
        rank & self.generator == self.generator
    }
}

/// Enumerates every up-set over `coordinates <= 5` two-valued
/// coordinates, in ascending membership-mask order. The counts follow
/// the Dedekind numbers: 2, 3, 6, 20, 168, 7581.
pub fn enumerate_upsets(coordinates: usize) -> Result<Vec<UpSet>> {
    if coordinates > UPSET_ENUMERATION_CAP {
        return Err(Error::CoordinateCapExceeded {
            coordinates,
            cap: UPSET_ENUMERATION_CAP,
        });
    }
    let rank_count = 1u64 << coordinates;
    // Decide membership rank by rank, visiting every rank after all of its
    // supersets (sort by descending popcount, then descending rank), so
    // "member" is allowed exactly when all immediate supersets are members.
    let mut order: Vec<u64> = (0..rank_count).collect();
    order.sort_by(|a, b| {
        b.count_ones()
            .cmp(&a.count_ones())
            .then_with(|| b.cmp(a))
    });
    let mut out = Vec::new();
    let mut stack: Vec<(usize, u64)> = alloc::vec![(0, 0)];
    while let Some((i, members)) = stack.pop() {
        if i == order.len() {
            out.push(members);
            continue;
        }
        let r = order[i];
        let closable = (0..coordinates).all(|bit| {
            let above = r | (1 << bit);
            above == r || (members >> above) & 1 == 1
        });
        // Push "not a member" last so it is explored first; the final
        // list is sorted anyway, but keep the traversal deterministic.
        if closable {
            stack.push((i + 1, members | (1 << r)));
        }
        stack.push((i + 1, members));
    }
    out.sort_unstable();
    Ok(out
        .into_iter()
        .map(|members| UpSet {
            coordinates,
            members,
        })
        .collect())
}

/// Covariance of the indicators of two events over a rank-indexed
/// probability table: `P(A and B) - P(A) P(B)`.
pub fn correlation(table: &[Rational], a: &UpSet, b: &UpSet) -> Result<Rational> {
    let n = a.coordinates;
    if b.coordinates != n || table.len() != 1usize << n {
        return Err(Error::IncompatibleMeasures);
    }
    let mut p_a = Rational::zero();
    let mut p_b = Rational::zero();
    let mut p_ab = Rational::zero();
    for (rank, p) in table.iter().enumerate() {
        let in_a = a.contains(rank as u64);
        let in_b = b.contains(rank as u64);
        if in_a {
            p_a += p;
        }
        if in_b {
            p_b += p;
        }
        if in_a && in_b {
            p_ab += p;
        }
    }
    Ok(p_ab - p_a * p_b)
}

/// Outcome of an exhaustive positive-association scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PaVerdict {
    /// Every pair of up-sets has nonnegative covariance.
    Holds,
    /// Some pair is negatively correlated; the witness is the first such
    /// pair in ascending (mask, mask) order.
    Fails(PaWitness),
}

impl PaVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PaVerdict::Holds)
    }
}

/// A negatively correlated pair of increasing events, with the exact
/// covariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaWitness {
    pub a: UpSet,
    pub b: UpSet,
    pub covariance: Rational,
}

/// Checks positive association of a rank-indexed probability table over
/// `n` two-valued coordinates (`table.len() == 2^n`) by scanning every
/// pair of up-sets. Capped at [`DEFAULT_COORDINATE_CAP`] coordinates.
pub fn positive_association_check(table: &[Rational]) -> Result<PaVerdict> {
    positive_association_check_with_cap(table, DEFAULT_COORDINATE_CAP)
}

/// As [`positive_association_check`] with an explicit coordinate cap; the
/// enumeration itself supports at most [`UPSET_ENUMERATION_CAP`].
pub fn positive_association_check_with_cap(
    table: &[Rational],
    max_coordinates: usize,
) -> Result<PaVerdict> {
    if !table.len().is_power_of_two() {
        return Err(Error::IncompatibleMeasures);
    }
    let n = table.len().trailing_zeros() as usize;
    if n > max_coordinates {
        return Err(Error::CoordinateCapExceeded {
            coordinates: n,
            cap: max_coordinates,
        });
    }
    let upsets = enumerate_upsets(n)?;
    let (numers, denom) = common_numerators(table);

    // Covariance sign over a common denominator D: with event sums
    // n_A = sum of numerators over A, the covariance is nonnegative
    // exactly when n_AB * D >= n_A * n_B. When D fits in u64 every sum
    // does too, and the products fit in u128.
    if let Some(d) = denom.to_u64() {
        let small: Vec<u64> = numers
            .iter()
            .map(|n| n.to_u64().expect("numerators are at most the denominator"))
            .collect();
        let sum_over = |mask: u64| -> u64 {
            let mut m = mask;
            let mut total = 0u64;
            while m != 0 {
                let r = m.trailing_zeros() as usize;
                total += small[r];
                m &= m - 1;
            }
            total
        };
        let sums: Vec<u64> = upsets.iter().map(|u| sum_over(u.members)).collect();
        for (i, a) in upsets.iter().enumerate() {
            for (j, b) in upsets.iter().enumerate().skip(i) {
                let n_ab = sum_over(a.members & b.members);
                if (n_ab as u128) * (d as u128) < (sums[i] as u128) * (sums[j] as u128) {
                    return Ok(PaVerdict::Fails(PaWitness {
                        a: *a,
                        b: *b,
                        covariance: correlation(table, a, b)?,
                    }));
                }
            }
        }
        return Ok(PaVerdict::Holds);
    }

    let sum_over = |mask: u64| -> BigInt {
        let mut m = mask;
        let mut total = BigInt::zero();
        while m != 0 {
            let r = m.trailing_zeros() as usize;
            total += &numers[r];
            m &= m - 1;
        }
        total
    };
    let sums: Vec<BigInt> = upsets.iter().map(|u| sum_over(u.members)).collect();
    for (i, a) in upsets.iter().enumerate() {
        for (j, b) in upsets.iter().enumerate().skip(i) {
            let n_ab = sum_over(a.members & b.members);
            if n_ab * &denom < &sums[i] * &sums[j] {
                return Ok(PaVerdict::Fails(PaWitness {
                    a: *a,
                    b: *b,
                    covariance: correlation(table, a, b)?,
                }));
            }
        }
    }
    Ok(PaVerdict::Holds)
}

/// The exact decomposition of a covariance by conditioning on an event
/// `C`:
///
/// ```text
/// Cov(A, B) = P(C) Cov(A, B | C) + P(not C) Cov(A, B | not C)
///           + P(C) P(not C) * (P(A|C) - P(A|not C)) * (P(B|C) - P(B|not C))
/// ```
///
/// and the soundness of the inference built on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// `Cov(A, B | C)`; `None` when `P(C) = 0`.
    pub cov_given_c: Option<Rational>,
    /// `Cov(A, B | not C)`; `None` when `P(C) = 1`.
    pub cov_given_not_c: Option<Rational>,
    /// `P(A | C) - P(A | not C)`; `None` unless both conditionings exist.
    pub delta_a: Option<Rational>,
    /// `P(B | C) - P(B | not C)`; `None` unless both conditionings exist.
    pub delta_b: Option<Rational>,
    /// The unconditional covariance `Cov(A, B)`.
    pub covariance: Rational,
    /// Whether the hypotheses hold: both conditional covariances
    /// nonnegative, and the two deltas do not have strictly opposite
    /// signs. Degenerate conditionings count as satisfied.
    pub hypotheses_hold: bool,
    /// Whether `Cov(A, B) >= 0`.
    pub conclusion_holds: bool,
}

/// Computes the conditional-covariance decomposition of `Cov(A, B)` over
/// the event `C`, verifying the decomposition identity exactly, and
/// reports whether the hypotheses (nonnegative conditional covariances,
/// deltas of equal sign) and the conclusion (nonnegative covariance)
/// hold. The identity guarantees hypotheses imply the conclusion; the
/// report lets a caller observe each quantity.
pub fn lemma1_decomposition_check(
    table: &[Rational],
    a: &UpSet,
    b: &UpSet,
    c: &UpSet,
) -> Result<DecompositionReport> {
    let n = a.coordinates;
    if b.coordinates != n || c.coordinates != n || table.len() != 1usize << n {
        return Err(Error::IncompatibleMeasures);
    }
    let p_c: Rational = c
        .member_ranks()
        .iter()
        .map(|&r| table[r as usize].clone())
        .sum();
    let one = Rational::from_integer(1.into());
    let p_not_c = &one - &p_c;

    let conditional = |inside: bool| -> Option<(Rational, Rational, Rational)> {
        let mass = if inside { &p_c } else { &p_not_c };
        if mass.is_zero() {
            return None;
        }
        let mut pa = Rational::zero();
        let mut pb = Rational::zero();
        let mut pab = Rational::zero();
        for (rank, p) in table.iter().enumerate() {
            if c.contains(rank as u64) != inside {
                continue;
            }
            let in_a = a.contains(rank as u64);
            let in_b = b.contains(rank as u64);
            if in_a {
                pa += p;
            }
            if in_b {
                pb += p;
            }
            if in_a && in_b {
                pab += p;
            }
        }
        Some((pa / mass, pb / mass, pab / mass))
    };

    let given_c = conditional(true);
    let given_not_c = conditional(false);
    let cov_of = |t: &(Rational, Rational, Rational)| -> Rational { &t.2 - &t.0 * &t.1 };
    let cov_given_c = given_c.as_ref().map(cov_of);
    let cov_given_not_c = given_not_c.as_ref().map(cov_of);
    let (delta_a, delta_b) = match (&given_c, &given_not_c) {
        (Some(yes), Some(no)) => (Some(&yes.0 - &no.0), Some(&yes.1 - &no.1)),
        _ => (None, None),
    };
    let covariance = correlation(table, a, b)?;

    // The decomposition identity, exactly.
    let mut reconstructed = Rational::zero();
    if let Some(cc) = &cov_given_c {
        reconstructed += &p_c * cc;
    }
    if let Some(cn) = &cov_given_not_c {
        reconstructed += &p_not_c * cn;
    }
    if let (Some(da), Some(db)) = (&delta_a, &delta_b) {
        reconstructed += &p_c * &p_not_c * da * db;
    }
    if reconstructed != covariance {
        return Err(Error::Unsupported(alloc::format!(
            "internal consistency failure: decomposition gives {reconstructed}, covariance is {covariance}"
        )));
    }

    let nonneg = |r: &Option<Rational>| r.as_ref().map_or(true, |v| !v.is_negative());
    let deltas_aligned = match (&delta_a, &delta_b) {
        (Some(da), Some(db)) => !(da * db).is_negative(),
        _ => true,
    };
    let hypotheses_hold = nonneg(&cov_given_c) && nonneg(&cov_given_not_c) && deltas_aligned;
    let conclusion_holds = !covariance.is_negative();
    Ok(DecompositionReport {
        cov_given_c,
        cov_given_not_c,
        delta_a,
        delta_b,
        covariance,
        hypotheses_hold,
        conclusion_holds,
    })
}

/// Outcome of the single-site conditional covariance scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionalCovVerdict {
    /// Every increasing spin event considered has nonnegative covariance
    /// with the edge's state under the conditioning.
    Holds,
    /// Some increasing event is negatively correlated with the edge.
    Fails(ConditionalCovWitness),
}

impl ConditionalCovVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ConditionalCovVerdict::Holds)
    }
}

/// A violating increasing event with its exact conditional covariance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionalCovWitness {
    pub event: WitnessEvent,
    pub covariance: Rational,
}

/// How a violating event is described: by full membership when the scan
/// was exhaustive, or by the generator of a principal up-set when the
/// instance was above the exhaustive cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessEvent {
    Enumerated(UpSet),
    Principal(PrincipalUpSet),
}

/// Covariance, conditioned on vertex `x` being plus, between an
/// increasing spin event and the openness of edge `e`:
///
/// ```text
/// Cov(1[spins in event], 1[e open] | spin at x is plus)
/// ```
///
/// The edge must be incident to `x`.
pub fn lemma2_covariance<E: IncreasingEvent>(
    jm: &JointMeasure,
    x: usize,
    e: usize,
    event: &E,
) -> Result<Rational> {
    let (mass, p_event, p_open, p_both) = conditioned_sums(jm, x, e, event)?;
    Ok(p_both / &mass - (p_event / &mass) * (p_open / &mass))
}

fn check_incidence(jm: &JointMeasure, x: usize, e: usize) -> Result<()> {
    let g = jm.graph();
    g.check_vertex(x)?;
    let (u, v) = g.endpoints(e)?;
    if u != x && v != x {
        return Err(Error::EdgeNotIncident { edge: e, vertex: x });
    }
    Ok(())
}

fn conditioned_sums<E: IncreasingEvent>(
    jm: &JointMeasure,
    x: usize,
    e: usize,
    event: &E,
) -> Result<(Rational, Rational, Rational, Rational)> {
    check_incidence(jm, x, e)?;
    if event.coordinates() != jm.graph().vertex_count() {
        return Err(Error::IncompatibleMeasures);
    }
    let mut mass = Rational::zero();
    let mut p_event = Rational::zero();
    let mut p_open = Rational::zero();
    let mut p_both = Rational::zero();
    for (c, s, p) in jm.entries() {
        if (s.0 >> x) & 1 == 0 {
            continue;
        }
        mass += p;
        let in_event = event.contains(s.0);
        let open = c.is_open(e);
        if in_event {
            p_event += p;
        }
        if open {
            p_open += p;
        }
        if in_event && open {
            p_both += p;
        }
    }
    if mass.is_zero() {
        return Err(Error::NullConditioning);
    }
    Ok((mass, p_event, p_open, p_both))
}

/// Scans increasing spin events for negative covariance with the state of
/// edge `e`, conditioned on the spin at `x` (an endpoint of `e`) being
/// plus, at the default coordinate cap.
pub fn lemma2_check(jm: &JointMeasure, x: usize, e: usize) -> Result<ConditionalCovVerdict> {
    lemma2_check_with_cap(jm, x, e, DEFAULT_COORDINATE_CAP)
}

/// As [`lemma2_check`] with an explicit cap on the exhaustive scan.
///
/// With at most `min(max_coordinates, 5)` vertices, every up-set is
/// checked and `Holds` is a complete verdict. Above that the scan falls
/// back to principal up-sets only, in decreasing generator order (the
/// all-plus point first): a violation is still a sound `Fails`, but if
/// none is found the result is [`Error::InconclusiveAboveCap`] rather
/// than a claim that the property holds.
pub fn lemma2_check_with_cap(
    jm: &JointMeasure,
    x: usize,
    e: usize,
    max_coordinates: usize,
) -> Result<ConditionalCovVerdict> {
    check_incidence(jm, x, e)?;
    let n = jm.graph().vertex_count();
    let cap = max_coordinates.min(UPSET_ENUMERATION_CAP);

    // One pass over the joint support: conditioned on the spin at x being
    // plus, accumulate per spin rank the total mass and the mass where e
    // is open.
    let mut mass = Rational::zero();
    let mut open_total = Rational::zero();
    let mut by_rank: alloc::collections::BTreeMap<u64, (Rational, Rational)> =
        alloc::collections::BTreeMap::new();
    for (c, s, p) in jm.entries() {
        if (s.0 >> x) & 1 == 0 {
            continue;
        }
        mass += p;
        let entry = by_rank
            .entry(s.0)
            .or_insert_with(|| (Rational::zero(), Rational::zero()));
        entry.0 += p;
        if c.is_open(e) {
            entry.1 += p;
            open_total += p;
        }
    }
    if mass.is_zero() {
        return Err(Error::NullConditioning);
    }

    // Cov(event, open | x plus) >= 0, cross-multiplied by mass^2:
    // sum_both * mass >= sum_event * open_total.
    let cov_sign = |member: &dyn Fn(u64) -> bool| -> Option<Rational> {
        let mut p_event = Rational::zero();
        let mut p_both = Rational::zero();
        for (&rank, (m, o)) in &by_rank {
            if member(rank) {
                p_event += m;
                p_both += o;
            }
        }
        if &p_both * &mass < &p_event * &open_total {
            Some(&p_both / &mass - (p_event / &mass) * (&open_total / &mass))
        } else {
            None
        }
    };

    if n <= cap {
        for upset in enumerate_upsets(n)? {
            let member = |rank: u64| upset.contains(rank);
            if let Some(covariance) = cov_sign(&member) {
                return Ok(ConditionalCovVerdict::Fails(ConditionalCovWitness {
                    event: WitnessEvent::Enumerated(upset),
                    covariance,
                }));
            }
        }
        return Ok(ConditionalCovVerdict::Holds);
    }

    // Above the cap: principal up-sets only, largest generator first.
    for generator in (0..(1u64 << n)).rev() {
        let principal = PrincipalUpSet {
            coordinates: n,
            generator,
        };
        let member = |rank: u64| principal.contains(rank);
        if let Some(covariance) = cov_sign(&member) {
            return Ok(ConditionalCovVerdict::Fails(ConditionalCovWitness {
                event: WitnessEvent::Principal(principal),
                covariance,
            }));
        }
    }
    Err(Error::InconclusiveAboveCap {
        coordinates: n,
        cap,
    })
}
