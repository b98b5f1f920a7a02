//! Core value types: response types, potential-outcome events, observed data
//! distributions, and mass functions over response types.
//!
//! A unit's behaviour is summarized by a response type `w = (y0, y1, d0, d1)`:
//! the potential outcomes under no treatment / treatment and the potential
//! treatment receipts under instrument 0 / 1. There are 16 response types. The
//! observed data are the eight conditional probabilities `P[y,d|z]`. Events are
//! subsets of the four potential-outcome pairs `(y0, y1)`.
//!
//! Everything here is immutable and pure; values are safe to share across
//! threads freely.

use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::rational::{format_rational, parse_rational, Rational};
use crate::Error;

/// One potential-outcome pair `(y0, y1)`. Canonical index: `2*y0 + y1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OutcomeCell {
    pub y0: bool,
    pub y1: bool,
}

impl OutcomeCell {
    pub const fn new(y0: bool, y1: bool) -> Self {
        OutcomeCell { y0, y1 }
    }

    pub fn index(self) -> usize {
        2 * usize::from(self.y0) + usize::from(self.y1)
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 4, "outcome cell index out of range");
        OutcomeCell::new(index & 2 != 0, index & 1 != 0)
    }

    pub fn all() -> impl Iterator<Item = OutcomeCell> {
        (0..4).map(OutcomeCell::from_index)
    }
}

impl std::fmt::Display for OutcomeCell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{}", u8::from(self.y0), u8::from(self.y1))
    }
}

/// A subset of the four outcome cells, stored as a 4-bit mask keyed by
/// [`OutcomeCell::index`]. There are 16 events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(u8);

impl Event {
    pub const EMPTY: Event = Event(0);
    pub const FULL: Event = Event(0b1111);

    pub fn from_mask(mask: u8) -> Self {
        assert!(mask < 16, "event mask out of range");
        Event(mask)
    }

    pub fn singleton(cell: OutcomeCell) -> Self {
        Event(1 << cell.index())
    }

    pub fn from_cells<I: IntoIterator<Item = OutcomeCell>>(cells: I) -> Self {
        let mut mask = 0;
        for cell in cells {
            mask |= 1 << cell.index();
        }
        Event(mask)
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn contains(self, cell: OutcomeCell) -> bool {
        self.0 & (1 << cell.index()) != 0
    }

    /// Member cells in canonical index order.
    pub fn cells(self) -> impl Iterator<Item = OutcomeCell> {
        (0..4).filter(move |i| self.0 & (1 << i) != 0).map(OutcomeCell::from_index)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self) -> Event {
        Event(!self.0 & 0b1111)
    }

    pub fn union(self, other: Event) -> Event {
        Event(self.0 | other.0)
    }

    pub fn intersection(self, other: Event) -> Event {
        Event(self.0 & other.0)
    }

    pub fn is_subset_of(self, other: Event) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint_from(self, other: Event) -> bool {
        self.0 & other.0 == 0
    }

    /// All 16 events in mask order.
    pub fn all() -> impl Iterator<Item = Event> {
        (0..16).map(Event)
    }

    /// Serialized form: deduplicated `[y0, y1]` pairs sorted by canonical index.
    pub fn to_pairs(self) -> Vec<[u8; 2]> {
        self.cells().map(|c| [u8::from(c.y0), u8::from(c.y1)]).collect()
    }

    pub fn from_pairs(pairs: &[[u8; 2]]) -> Result<Self, Error> {
        let mut mask = 0;
        for pair in pairs {
            let [y0, y1] = *pair;
            if y0 > 1 || y1 > 1 {
                return Err(Error::MalformedInput(format!(
                    "event cell [{y0},{y1}] is not a pair of bits"
                )));
            }
            mask |= 1 << OutcomeCell::new(y0 == 1, y1 == 1).index();
        }
        Ok(Event(mask))
    }
}

impl std::fmt::Display for Event {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, cell) in self.cells().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{cell}")?;
        }
        write!(f, "}}")
    }
}

/// A response type `w = (y0, y1, d0, d1)`.
///
/// Canonical index: `8*y0 + 4*y1 + 2*d0 + d1`. Every vector indexed by
/// response types uses this ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResponseType {
    pub y0: bool,
    pub y1: bool,
    pub d0: bool,
    pub d1: bool,
}

impl ResponseType {
    pub const fn new(y0: bool, y1: bool, d0: bool, d1: bool) -> Self {
        ResponseType { y0, y1, d0, d1 }
    }

    pub fn index(self) -> usize {
        8 * usize::from(self.y0) + 4 * usize::from(self.y1) + 2 * usize::from(self.d0) + usize::from(self.d1)
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 16, "response type index out of range");
        ResponseType::new(index & 8 != 0, index & 4 != 0, index & 2 != 0, index & 1 != 0)
    }

    pub fn all() -> impl Iterator<Item = ResponseType> {
        (0..16).map(ResponseType::from_index)
    }

    /// Potential treatment receipt under instrument value `z`.
    pub fn treatment(self, z: bool) -> bool {
        if z {
            self.d1
        } else {
            self.d0
        }
    }

    /// Potential outcome under treatment status `d`.
    pub fn outcome(self, d: bool) -> bool {
        if d {
            self.y1
        } else {
            self.y0
        }
    }

    /// The observed `(y, d)` cell this type lands in when the instrument is `z`.
    pub fn observed(self, z: bool) -> (bool, bool) {
        let d = self.treatment(z);
        (self.outcome(d), d)
    }

    /// Defiers take treatment at z=0 and refuse it at z=1; instrument
    /// monotonicity is exactly "zero mass on defiers".
    pub fn is_defier(self) -> bool {
        self.d0 && !self.d1
    }

    pub fn outcome_cell(self) -> OutcomeCell {
        OutcomeCell::new(self.y0, self.y1)
    }
}

impl std::fmt::Display for ResponseType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}{}{}",
            u8::from(self.y0),
            u8::from(self.y1),
            u8::from(self.d0),
            u8::from(self.d1)
        )
    }
}

/// Which identifying assumptions are imposed on the mass function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AssumptionSet {
    /// Instrument exogeneity only.
    ExogeneityOnly,
    /// Instrument exogeneity plus instrument monotonicity (no defiers).
    ExogeneityPlusMonotonicity,
}

impl AssumptionSet {
    pub const BOTH: [AssumptionSet; 2] =
        [AssumptionSet::ExogeneityOnly, AssumptionSet::ExogeneityPlusMonotonicity];

    pub fn label(self) -> &'static str {
        match self {
            AssumptionSet::ExogeneityOnly => "E",
            AssumptionSet::ExogeneityPlusMonotonicity => "EM",
        }
    }
}

/// The types that land in observed cell `(y, d)` when the instrument is `z`;
/// always exactly four, and the four cells at fixed `z` partition all 16 types.
pub fn response_types_for_cell(y: bool, d: bool, z: bool) -> Vec<ResponseType> {
    ResponseType::all().filter(|w| w.observed(z) == (y, d)).collect()
}

/// The types whose potential-outcome pair lies in `event`; `4 * |event|` types.
pub fn response_types_for_event(event: Event) -> Vec<ResponseType> {
    ResponseType::all().filter(|w| event.contains(w.outcome_cell())).collect()
}

/// The eight observed conditional probabilities `P[y,d|z]`.
///
/// Internal layout: index `4*z + 2*d + y`. Entries are validated to be
/// nonnegative and to sum to exactly one within each instrument arm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataDistribution {
    p: [Rational; 8],
}

impl DataDistribution {
    fn cell_index(y: bool, d: bool, z: bool) -> usize {
        4 * usize::from(z) + 2 * usize::from(d) + usize::from(y)
    }

    pub fn from_fn(mut f: impl FnMut(bool, bool, bool) -> Rational) -> Result<Self, Error> {
        let mut p = std::array::from_fn(|_| Rational::zero());
        for z in [false, true] {
            for d in [false, true] {
                for y in [false, true] {
                    p[Self::cell_index(y, d, z)] = f(y, d, z);
                }
            }
        }
        Self::new(p)
    }

    pub fn new(p: [Rational; 8]) -> Result<Self, Error> {
        for z in [false, true] {
            let mut sum = Rational::zero();
            for d in [false, true] {
                for y in [false, true] {
                    let value = &p[Self::cell_index(y, d, z)];
                    let place = (u8::from(y), u8::from(d), u8::from(z));
                    if value.is_negative() {
                        return Err(Error::NegativeEntry {
                            y: place.0,
                            d: place.1,
                            z: place.2,
                            value: format_rational(value),
                        });
                    }
                    if *value > Rational::one() {
                        return Err(Error::EntryAboveOne {
                            y: place.0,
                            d: place.1,
                            z: place.2,
                            value: format_rational(value),
                        });
                    }
                    sum += value;
                }
            }
            if !sum.is_one() {
                return Err(Error::ConditionalSumNotOne {
                    z: u8::from(z),
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(DataDistribution { p })
    }

    /// `P[y,d|z]`.
    pub fn p(&self, y: bool, d: bool, z: bool) -> &Rational {
        &self.p[Self::cell_index(y, d, z)]
    }

    /// The four margins of the treatment-arm consistency condition, in the
    /// order `P[0,1|1]-P[0,1|0]`, `P[1,1|1]-P[1,1|0]`, `P[0,0|0]-P[0,0|1]`,
    /// `P[1,0|0]-P[1,0|1]`. All four nonnegative is necessary and sufficient
    /// for the no-defier model to be consistent with the data.
    pub fn monotonicity_margins(&self) -> [Rational; 4] {
        [
            self.p(false, true, true) - self.p(false, true, false),
            self.p(true, true, true) - self.p(true, true, false),
            self.p(false, false, false) - self.p(false, false, true),
            self.p(true, false, false) - self.p(true, false, true),
        ]
    }

    pub fn is_em_consistent(&self) -> bool {
        self.monotonicity_margins().iter().all(|m| !m.is_negative())
    }

    /// Positive noncompliance in both instrument arms: `P[D=1|Z=0] > 0` and
    /// `P[D=0|Z=1] > 0`.
    pub fn two_sided_noncompliance(&self) -> bool {
        let d1_given_z0 = self.p(false, true, false) + self.p(true, true, false);
        let d0_given_z1 = self.p(false, false, true) + self.p(true, false, true);
        d1_given_z0.is_positive() && d0_given_z1.is_positive()
    }

    /// Parses the document form
    /// `{"z0": {"y0d0": s, "y1d0": s, "y0d1": s, "y1d1": s}, "z1": {...}}`
    /// where each `s` is a rational or finite-decimal string.
    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let raw: RawDistribution =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        raw.build()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let arm = |z: bool| {
            serde_json::json!({
                "y0d0": format_rational(self.p(false, false, z)),
                "y1d0": format_rational(self.p(true, false, z)),
                "y0d1": format_rational(self.p(false, true, z)),
                "y1d1": format_rational(self.p(true, true, z)),
            })
        };
        serde_json::json!({ "z0": arm(false), "z1": arm(true) })
    }
}

#[derive(Deserialize)]
struct RawDistribution {
    z0: RawArm,
    z1: RawArm,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArm {
    y0d0: String,
    y1d0: String,
    y0d1: String,
    y1d1: String,
}

impl RawDistribution {
    fn build(&self) -> Result<DataDistribution, Error> {
        let mut p = std::array::from_fn(|_| Rational::zero());
        for (z, arm) in [(false, &self.z0), (true, &self.z1)] {
            for (y, d, text) in [
                (false, false, &arm.y0d0),
                (true, false, &arm.y1d0),
                (false, true, &arm.y0d1),
                (true, true, &arm.y1d1),
            ] {
                p[DataDistribution::cell_index(y, d, z)] = parse_rational(text)?;
            }
        }
        DataDistribution::new(p)
    }
}

/// A probability mass function over the 16 response types, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MassFunction {
    q: [Rational; 16],
}

impl MassFunction {
    pub fn new(q: [Rational; 16]) -> Result<Self, Error> {
        let mut sum = Rational::zero();
        for (index, value) in q.iter().enumerate() {
            if value.is_negative() {
                return Err(Error::NegativeMass { index: index as u8 });
            }
            sum += value;
        }
        if !sum.is_one() {
            return Err(Error::MassSumNotOne { sum: format_rational(&sum) });
        }
        Ok(MassFunction { q })
    }

    pub fn from_fn(mut f: impl FnMut(ResponseType) -> Rational) -> Result<Self, Error> {
        Self::new(std::array::from_fn(|i| f(ResponseType::from_index(i))))
    }

    pub fn point_mass(w: ResponseType) -> Self {
        let q = std::array::from_fn(|i| {
            if i == w.index() {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        MassFunction { q }
    }

    pub fn uniform() -> Self {
        MassFunction { q: std::array::from_fn(|_| crate::rational::ratio(1, 16)) }
    }

    pub fn q(&self, w: ResponseType) -> &Rational {
        &self.q[w.index()]
    }

    pub fn values(&self) -> &[Rational; 16] {
        &self.q
    }

    pub fn defier_mass(&self) -> Rational {
        ResponseType::all().filter(|w| w.is_defier()).map(|w| self.q(w)).sum()
    }

    /// Probability assigned to an outcome event.
    pub fn event_mass(&self, event: Event) -> Rational {
        ResponseType::all()
            .filter(|w| event.contains(w.outcome_cell()))
            .map(|w| self.q(w))
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut map = serde_json::Map::new();
        for w in ResponseType::all() {
            map.insert(w.to_string(), format_rational(self.q(w)).into());
        }
        serde_json::Value::Object(map)
    }

    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        let raw: std::collections::BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| Error::MalformedInput(e.to_string()))?;
        let mut q = std::array::from_fn(|_| Rational::zero());
        for (key, value) in &raw {
            let bits: Vec<bool> = key
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::MalformedInput(format!("bad response type key {key:?}"))),
                })
                .collect::<Result<_, _>>()?;
            if bits.len() != 4 {
                return Err(Error::MalformedInput(format!("bad response type key {key:?}")));
            }
            let w = ResponseType::new(bits[0], bits[1], bits[2], bits[3]);
            q[w.index()] = parse_rational(value)?;
        }
        MassFunction::new(q)
    }
}

/// Forward map from a mass function to the distribution of the data:
/// `P[y,d|z]` is the total mass of the types that land in cell `(y,d)` at `z`.
pub fn push_forward(q: &MassFunction) -> DataDistribution {
    DataDistribution::from_fn(|y, d, z| {
        response_types_for_cell(y, d, z).iter().map(|w| q.q(*w)).sum()
    })
    .expect("push-forward of a valid mass function is a valid distribution")
}

/// A closed subinterval of [0, 1].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, Error> {
        if lo.is_negative() || lo > hi || hi > Rational::one() {
            return Err(Error::InvalidInterval {
                lo: format_rational(&lo),
                hi: format_rational(&hi),
            });
        }
        Ok(Interval { lo, hi })
    }

    /// Constructor for diagnostic output that may carry an empty or inverted
    /// range (consistency checks disabled); ordinary code paths use `new`.
    pub fn new_unchecked(lo: Rational, hi: Rational) -> Self {
        Interval { lo, hi }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, value: &Rational) -> bool {
        self.lo <= *value && *value <= self.hi
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// True when `self` is a subset of `other` and not equal to it.
    pub fn strictly_inside(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi && (self.lo > other.lo || self.hi < other.hi)
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", format_rational(&self.lo), format_rational(&self.hi))
    }
}
