//! Exact algebra of finite interval unions on the half-line and on the real
//! line.
//!
//! A [`TimeSet`] is the canonical carrier of "the set of times at which a
//! formula holds on a fixed trace"; a [`RegionSet`] is the same structure used
//! for state-space regions. Sets are kept in canonical form (sorted, pairwise
//! disjoint, no two consecutive intervals mergeable), so structural equality
//! coincides with point-set equality.
//!
//! All endpoint arithmetic is double precision with **exact** comparisons:
//! endpoints produced by the evaluators come from closed-form arithmetic on
//! input breakpoints, and the open/closed distinctions matter. A tolerance
//! knob exists on [`IntervalSet::canonicalize_with_tolerance`] for callers
//! whose endpoints carry float noise; the default everywhere is zero.

use std::fmt;

use thiserror::Error;

/// Errors from interval construction and notation parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TimeSetError {
    #[error("empty interval: {0}")]
    EmptyInterval(String),

    #[error("window has an infinite upper endpoint")]
    UnboundedWindow,

    #[error("bad interval notation at `{0}`: {1}")]
    Notation(String, String),
}

/// One side of an interval: a value together with a closed/open flag.
///
/// Infinite endpoints are always open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Endpoint {
    pub value: f64,
    pub closed: bool,
}

impl Endpoint {
    pub fn new(value: f64, closed: bool) -> Self {
        Endpoint { value, closed }
    }
}

/// A nonempty interval with open/closed endpoint flags.
///
/// Degenerate point intervals (`{x}`) are first-class: both endpoints equal
/// and closed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    /// Builds an interval, rejecting empty ones: `lo > hi`, `lo == hi` with an
    /// open side, or an infinite endpoint marked closed.
    pub fn new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Result<Self, TimeSetError> {
        Interval::try_new(lo, lo_closed, hi, hi_closed).ok_or_else(|| {
            TimeSetError::EmptyInterval(format!(
                "<{lo},{hi}> with flags ({lo_closed},{hi_closed})"
            ))
        })
    }

    /// Like [`Interval::new`] but returns `None` for empty intervals without
    /// building an error. Set operations probe many empty candidates, so
    /// the hot paths use this.
    pub fn try_new(lo: f64, lo_closed: bool, hi: f64, hi_closed: bool) -> Option<Self> {
        if lo.is_nan() || hi.is_nan() {
            return None;
        }
        if lo.is_infinite() && lo_closed || hi.is_infinite() && hi_closed {
            return None;
        }
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return None;
        }
        Some(Interval {
            lo: Endpoint::new(lo, lo_closed),
            hi: Endpoint::new(hi, hi_closed),
        })
    }

    /// `[a,b]`; panics if empty.
    pub fn closed(a: f64, b: f64) -> Self {
        Interval::new(a, true, b, true).expect("nonempty closed interval")
    }

    /// `(a,b)`; panics if empty.
    pub fn open(a: f64, b: f64) -> Self {
        Interval::new(a, false, b, false).expect("nonempty open interval")
    }

    /// The degenerate point interval `{x}`.
    pub fn point(x: f64) -> Self {
        Interval::closed(x, x)
    }

    /// The whole real line.
    pub fn all_reals() -> Self {
        Interval::new(f64::NEG_INFINITY, false, f64::INFINITY, false).unwrap()
    }

    pub fn lo(&self) -> Endpoint {
        self.lo
    }

    pub fn hi(&self) -> Endpoint {
        self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo.value == self.hi.value
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.value.is_finite() && self.hi.value.is_finite()
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = x > self.lo.value || (x == self.lo.value && self.lo.closed);
        let below = x < self.hi.value || (x == self.hi.value && self.hi.closed);
        above && below
    }

    /// Exact intersection; `None` when the point sets are disjoint.
    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = match self.lo.value.partial_cmp(&other.lo.value)? {
            std::cmp::Ordering::Greater => self.lo,
            std::cmp::Ordering::Less => other.lo,
            std::cmp::Ordering::Equal => {
                Endpoint::new(self.lo.value, self.lo.closed && other.lo.closed)
            }
        };
        let hi = match self.hi.value.partial_cmp(&other.hi.value)? {
            std::cmp::Ordering::Less => self.hi,
            std::cmp::Ordering::Greater => other.hi,
            std::cmp::Ordering::Equal => {
                Endpoint::new(self.hi.value, self.hi.closed && other.hi.closed)
            }
        };
        Interval::try_new(lo.value, lo.closed, hi.value, hi.closed)
    }

    /// Parses `"[a,b)"`, `"(a,b]"`, `"{x}"`, ... with `inf`/`-inf` endpoints.
    pub fn parse(text: &str) -> Result<Self, TimeSetError> {
        let s = text.trim();
        let err = |m: &str| TimeSetError::Notation(s.to_string(), m.to_string());
        if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let x = parse_extended(inner.trim()).ok_or_else(|| err("expected a number"))?;
            return Interval::new(x, true, x, true);
        }
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(err("expected '[', '(' or '{'")),
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(err("expected ')' or ']'")),
        };
        let body = &s[1..s.len() - 1];
        let (a, b) = body
            .split_once(',')
            .ok_or_else(|| err("expected ',' between endpoints"))?;
        let lo = parse_extended(a.trim()).ok_or_else(|| err("bad lower endpoint"))?;
        let hi = parse_extended(b.trim()).ok_or_else(|| err("bad upper endpoint"))?;
        Interval::new(lo, lo_closed, hi, hi_closed)
    }
}

fn parse_extended(s: &str) -> Option<f64> {
    match s {
        "inf" | "+inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse::<f64>().ok().filter(|v| v.is_finite()),
    }
}

fn fmt_extended(v: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if v == f64::INFINITY {
        write!(f, "inf")
    } else if v == f64::NEG_INFINITY {
        write!(f, "-inf")
    } else {
        write!(f, "{v}")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            write!(f, "{{{}}}", self.lo.value)
        } else {
            write!(f, "{}", if self.lo.closed { '[' } else { '(' })?;
            fmt_extended(self.lo.value, f)?;
            write!(f, ",")?;
            fmt_extended(self.hi.value, f)?;
            write!(f, "{}", if self.hi.closed { ']' } else { ')' })
        }
    }
}

/// Canonical finite union of intervals: sorted, pairwise disjoint, no two
/// consecutive intervals mergeable.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

/// Interval union on `[0, ∞)` — the satisfaction time set of a formula.
pub type TimeSet = IntervalSet;

/// Interval union on all of `ℝ` — the state region of an atom.
pub type RegionSet = IntervalSet;

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet::default()
    }

    /// The whole real line (useful as an atom region).
    pub fn all_reals() -> Self {
        IntervalSet {
            intervals: vec![Interval::all_reals()],
        }
    }

    pub fn from_interval(iv: Interval) -> Self {
        IntervalSet {
            intervals: vec![iv],
        }
    }

    /// Set of isolated points.
    pub fn from_points(points: &[f64]) -> Self {
        IntervalSet::canonicalize(points.iter().map(|&p| Interval::point(p)).collect())
    }

    /// Sorts and merges raw intervals into canonical form. Exact endpoint
    /// comparison: intervals merge when they overlap or touch with at least
    /// one closed endpoint.
    pub fn canonicalize(raw: Vec<Interval>) -> Self {
        IntervalSet::canonicalize_with_tolerance(raw, 0.0)
    }

    /// Like [`IntervalSet::canonicalize`], but additionally merges intervals
    /// whose gap is at most `tol`. Intended for callers whose endpoints carry
    /// float noise; `tol = 0` is the exact default used internally.
    pub fn canonicalize_with_tolerance(mut raw: Vec<Interval>, tol: f64) -> Self {
        raw.sort_by(|a, b| {
            a.lo
                .value
                .partial_cmp(&b.lo.value)
                .unwrap()
                .then_with(|| b.lo.closed.cmp(&a.lo.closed))
        });
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            match out.last_mut() {
                Some(prev) if mergeable(prev, &iv, tol) => {
                    // keep the endpoint that extends further
                    if iv.hi.value > prev.hi.value
                        || (iv.hi.value == prev.hi.value && iv.hi.closed && !prev.hi.closed)
                    {
                        prev.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        IntervalSet { intervals: out }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Exact point membership.
    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.lo.value <= x);
        idx > 0 && self.intervals[idx - 1].contains(x)
    }

    /// True when some member interval meets `iv` as a point set.
    pub fn intersects_interval(&self, iv: &Interval) -> bool {
        self.intervals.iter().any(|own| own.intersect(iv).is_some())
    }

    /// Exact point-set union.
    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        let mut raw = self.intervals.clone();
        raw.extend_from_slice(&other.intervals);
        IntervalSet::canonicalize(raw)
    }

    /// Exact point-set intersection.
    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.intervals.len() && j < other.intervals.len() {
            let (a, b) = (&self.intervals[i], &other.intervals[j]);
            if let Some(m) = a.intersect(b) {
                out.push(m);
            }
            // advance whichever ends first
            if a.hi.value < b.hi.value || (a.hi.value == b.hi.value && !a.hi.closed && b.hi.closed)
            {
                i += 1;
            } else if b.hi.value < a.hi.value
                || (a.hi.value == b.hi.value && a.hi.closed && !b.hi.closed)
            {
                j += 1;
            } else {
                i += 1;
                j += 1;
            }
        }
        IntervalSet { intervals: out }
    }

    /// Restriction to a single interval (e.g. `[0, horizon]`).
    pub fn clip(&self, window: Interval) -> IntervalSet {
        self.intersect(&IntervalSet::from_interval(window))
    }

    /// Exact complement within `universe`. Flags flip at shared endpoints, so
    /// complementing twice restores the set clipped to the universe.
    pub fn complement_within(&self, universe: Interval) -> IntervalSet {
        let inside = self.clip(universe);
        let mut out = Vec::new();
        let mut cursor = universe.lo();
        for iv in &inside.intervals {
            if let Some(gap) =
                Interval::try_new(cursor.value, cursor.closed, iv.lo.value, !iv.lo.closed)
            {
                out.push(gap);
            }
            cursor = Endpoint::new(iv.hi.value, !iv.hi.closed);
        }
        if let Some(gap) = Interval::try_new(
            cursor.value,
            cursor.closed,
            universe.hi().value,
            universe.hi().closed,
        ) {
            out.push(gap);
        }
        IntervalSet { intervals: out }
    }

    /// Complement within `[0, horizon]` — the time-set form of negation.
    pub fn complement(&self, horizon: f64) -> IntervalSet {
        self.complement_within(Interval::closed(0.0, horizon))
    }

    /// The set `{t : (t ⊕ window) ∩ self ≠ ∅}` clipped to `[0, horizon]`:
    /// the exact preimage of the "eventually within `window`" operator.
    ///
    /// For each member `⟨u,v⟩` and `window = ⟨S,T⟩` the contribution is
    /// `⟨u−T, v−S⟩`, closed on the left iff both `T` and `u` are closed and on
    /// the right iff both `S` and `v` are closed.
    pub fn diamond_preimage(
        &self,
        window: Interval,
        horizon: f64,
    ) -> Result<IntervalSet, TimeSetError> {
        if window.hi().value.is_infinite() {
            return Err(TimeSetError::UnboundedWindow);
        }
        debug_assert!(window.lo().value >= 0.0, "window must be positive");
        let (s, t) = (window.lo(), window.hi());
        let clip_to = Interval::closed(0.0, horizon);
        let mut out = Vec::new();
        for iv in &self.intervals {
            let lo = iv.lo.value - t.value;
            let hi = iv.hi.value - s.value;
            if let Some(cand) = Interval::try_new(
                lo,
                t.closed && iv.lo.closed,
                hi,
                s.closed && iv.hi.closed,
            ) {
                if let Some(clipped) = cand.intersect(&clip_to) {
                    out.push(clipped);
                }
            }
        }
        Ok(IntervalSet::canonicalize(out))
    }

    /// The debut (reaching time) `inf { s > t : s ∈ self }`, or `+∞` when no
    /// such `s` exists. The infimum need not belong to the set.
    pub fn debut(&self, t: f64) -> f64 {
        let idx = self.intervals.partition_point(|iv| iv.hi.value <= t);
        match self.intervals.get(idx) {
            None => f64::INFINITY,
            Some(iv) => {
                if iv.lo.value > t {
                    iv.lo.value
                } else {
                    t
                }
            }
        }
    }

    /// Interior, closure and boundary relative to the subspace `[0, horizon]`.
    pub fn topology(&self, horizon: f64) -> Topology {
        let inside = self.clip(Interval::closed(0.0, horizon));
        let mut interior_raw = Vec::new();
        let mut closure_raw = Vec::new();
        for iv in &inside.intervals {
            // [0, x) and (x, horizon] are open in the subspace topology
            let lo_closed = iv.lo.value == 0.0 && iv.lo.closed;
            let hi_closed = iv.hi.value == horizon && iv.hi.closed;
            if let Some(open) = Interval::try_new(iv.lo.value, lo_closed, iv.hi.value, hi_closed)
            {
                interior_raw.push(open);
            }
            closure_raw.push(Interval::closed(iv.lo.value, iv.hi.value));
        }
        let interior = IntervalSet::canonicalize(interior_raw);
        let closure = IntervalSet::canonicalize(closure_raw);
        let boundary_set = closure.intersect(&interior.complement(horizon));
        let boundary = boundary_set
            .intervals
            .iter()
            .map(|iv| {
                debug_assert!(iv.is_point(), "boundary of an interval union is finite");
                iv.lo.value
            })
            .collect();
        Topology {
            interior,
            closure,
            boundary,
        }
    }

    /// Elementwise shift `{t − c : t ∈ self} ∩ [0, ∞)`, canonical.
    pub fn shift_minus(&self, c: f64) -> IntervalSet {
        debug_assert!(c >= 0.0);
        let mut out = Vec::new();
        for iv in &self.intervals {
            let lo = iv.lo.value - c;
            let hi = iv.hi.value - c;
            let (lo, lo_closed) = if lo < 0.0 {
                (0.0, true)
            } else {
                (lo, iv.lo.closed)
            };
            if let Some(shifted) = Interval::try_new(lo, lo_closed, hi, iv.hi.closed) {
                if shifted.hi().value >= 0.0 {
                    out.push(shifted);
                }
            }
        }
        IntervalSet::canonicalize(out)
    }

    /// Total length (Lebesgue measure) of the union; points contribute zero.
    pub fn measure(&self) -> f64 {
        self.intervals
            .iter()
            .map(|iv| iv.hi.value - iv.lo.value)
            .sum()
    }

    /// Parses a comma-separated list of intervals; `empty` (or a blank
    /// string) denotes the empty set.
    pub fn parse(text: &str) -> Result<Self, TimeSetError> {
        let s = text.trim();
        if s.is_empty() || s == "empty" {
            return Ok(IntervalSet::empty());
        }
        let mut raw = Vec::new();
        let mut rest = s;
        loop {
            rest = rest.trim_start();
            // each element is delimited: "{x}" or "<lo,hi>" — find its closer
            let end = match rest.chars().next() {
                Some('{') => rest.find('}'),
                Some('[') | Some('(') => rest
                    .find(',')
                    .and_then(|c| rest[c..].find([')', ']']).map(|off| c + off)),
                _ => None,
            }
            .ok_or_else(|| {
                TimeSetError::Notation(rest.into(), "expected an interval or point".into())
            })?;
            raw.push(Interval::parse(&rest[..=end])?);
            rest = rest[end + 1..].trim_start();
            match rest.strip_prefix(',') {
                Some(r) => rest = r,
                None if rest.is_empty() => break,
                None => {
                    return Err(TimeSetError::Notation(
                        rest.into(),
                        "expected ',' between intervals".into(),
                    ))
                }
            }
        }
        Ok(IntervalSet::canonicalize(raw))
    }
}

/// Result of [`IntervalSet::topology`].
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub interior: IntervalSet,
    pub closure: IntervalSet,
    /// Finite set of boundary points, sorted ascending.
    pub boundary: Vec<f64>,
}

fn mergeable(a: &Interval, b: &Interval, tol: f64) -> bool {
    // b.lo >= a.lo by sort order
    if b.lo.value < a.hi.value {
        return true;
    }
    if b.lo.value == a.hi.value {
        return a.hi.closed || b.lo.closed || tol > 0.0;
    }
    b.lo.value - a.hi.value <= tol && tol > 0.0
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "empty");
        }
        for (i, iv) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{iv}")?;
        }
        Ok(())
    }
}
