//! MTL abstract syntax, concrete syntax, desugaring and the flat fragment.
//!
//! The grammar (concrete syntax, recursive descent in [`parse`]):
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "!" unary | "F" ival unary | "G" ival unary
//!          | atom_or_paren ("U" ival unary)?
//! ival    := ("[" | "(") num "," (num | "inf") (")" | "]")
//! ```
//!
//! Atoms are identifiers; `true`/`false` are constants. `F`/`G`/`U` are
//! reserved. Unbounded windows like `[0,inf)` parse fine and are rejected at
//! evaluation time, not here.

mod parse;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::EvalError;
use crate::timeset::{Interval, IntervalSet, RegionSet};

pub use parse::ParseError;

/// Reserved atom name the desugarer uses for ⊤; resolves to the region `ℝ`.
/// The parser keywords `true`/`false` guarantee no user atom collides.
pub const TRUE_ATOM: &str = "true";
/// Reserved atom name for ⊥; resolves to the empty region.
pub const FALSE_ATOM: &str = "false";

/// MTL formula over named atoms.
///
/// `Until` is the core temporal operator; `Eventually` (`F`, the diamond) and
/// `Always` (`G`, the box) are first-class sugar, removable with
/// [`Formula::to_core`].
#[derive(Debug, Clone, PartialEq)]
pub enum Formula {
    Atom(String),
    Top,
    Bot,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Until(Interval, Box<Formula>, Box<Formula>),
    Eventually(Interval, Box<Formula>),
    Always(Interval, Box<Formula>),
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Formula {
        Formula::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(inner: Formula) -> Formula {
        Formula::Not(Box::new(inner))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn until(window: Interval, lhs: Formula, rhs: Formula) -> Formula {
        Formula::Until(window, Box::new(lhs), Box::new(rhs))
    }

    pub fn eventually(window: Interval, inner: Formula) -> Formula {
        Formula::Eventually(window, Box::new(inner))
    }

    pub fn always(window: Interval, inner: Formula) -> Formula {
        Formula::Always(window, Box::new(inner))
    }

    /// Parses the concrete syntax above.
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse::parse(text)
    }

    /// Removes sugar: the result uses only `Atom`/`Not`/`And`/`Until`, with ⊤
    /// encoded as the reserved always-true atom.
    ///
    /// `F_I φ = ⊤ U_I φ`, `G_I φ = ¬(⊤ U_I ¬φ)`, `a ∨ b = ¬(¬a ∧ ¬b)`.
    pub fn to_core(&self) -> Formula {
        match self {
            Formula::Atom(name) => Formula::atom(name.clone()),
            Formula::Top => Formula::atom(TRUE_ATOM),
            Formula::Bot => Formula::not(Formula::atom(TRUE_ATOM)),
            Formula::Not(inner) => Formula::not(inner.to_core()),
            Formula::And(a, b) => Formula::and(a.to_core(), b.to_core()),
            Formula::Or(a, b) => Formula::not(Formula::and(
                Formula::not(a.to_core()),
                Formula::not(b.to_core()),
            )),
            Formula::Until(w, a, b) => Formula::until(*w, a.to_core(), b.to_core()),
            Formula::Eventually(w, inner) => {
                Formula::until(*w, Formula::atom(TRUE_ATOM), inner.to_core())
            }
            Formula::Always(w, inner) => Formula::not(Formula::until(
                *w,
                Formula::atom(TRUE_ATOM),
                Formula::not(inner.to_core()),
            )),
        }
    }

    /// True when the formula contains no temporal operator.
    pub fn is_propositional(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => true,
            Formula::Not(inner) => inner.is_propositional(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_propositional() && b.is_propositional()
            }
            Formula::Until(..) | Formula::Eventually(..) | Formula::Always(..) => false,
        }
    }

    /// True when the formula lies in the flat fragment: a Boolean combination
    /// of propositional formulas and un-nested `F_I p` / `G_I p` with `p`
    /// propositional. No until operator anywhere.
    ///
    /// The check runs on the sugared AST; use [`Formula::check_flat`] for a
    /// diagnostic path on failure.
    pub fn is_flat(&self) -> bool {
        self.check_flat().is_ok()
    }

    /// Like [`Formula::is_flat`], reporting the offending subformula path.
    pub fn check_flat(&self) -> Result<(), FlatViolation> {
        self.check_flat_at("root")
    }

    fn check_flat_at(&self, path: &str) -> Result<(), FlatViolation> {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => Ok(()),
            Formula::Not(inner) => inner.check_flat_at(&format!("{path}/!")),
            Formula::And(a, b) => {
                a.check_flat_at(&format!("{path}/&lhs"))?;
                b.check_flat_at(&format!("{path}/&rhs"))
            }
            Formula::Or(a, b) => {
                a.check_flat_at(&format!("{path}/|lhs"))?;
                b.check_flat_at(&format!("{path}/|rhs"))
            }
            Formula::Eventually(_, inner) | Formula::Always(_, inner) => {
                if inner.is_propositional() {
                    Ok(())
                } else {
                    Err(FlatViolation {
                        path: format!("{path}/{}", self.head_token()),
                        reason: "temporal operator over a non-propositional argument",
                    })
                }
            }
            Formula::Until(..) => Err(FlatViolation {
                path: format!("{path}/U"),
                reason: "until operator is outside the flat fragment",
            }),
        }
    }

    fn head_token(&self) -> &'static str {
        match self {
            Formula::Atom(_) => "atom",
            Formula::Top => "true",
            Formula::Bot => "false",
            Formula::Not(_) => "!",
            Formula::And(..) => "&",
            Formula::Or(..) => "|",
            Formula::Until(..) => "U",
            Formula::Eventually(..) => "F",
            Formula::Always(..) => "G",
        }
    }

    /// Names of all atoms appearing in the formula.
    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Formula::Atom(name) => {
                out.insert(name.as_str());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Not(inner) | Formula::Eventually(_, inner) | Formula::Always(_, inner) => {
                inner.collect_atoms(out)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Until(_, a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Maximum, over AST paths, of the sum of window upper endpoints: how far
    /// past `t` an evaluation at `t` may need the trace. `+∞` when some
    /// window is unbounded.
    pub fn window_sum(&self) -> f64 {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bot => 0.0,
            Formula::Not(inner) => inner.window_sum(),
            Formula::And(a, b) | Formula::Or(a, b) => a.window_sum().max(b.window_sum()),
            Formula::Until(w, a, b) => w.hi().value + a.window_sum().max(b.window_sum()),
            Formula::Eventually(w, inner) | Formula::Always(w, inner) => {
                w.hi().value + inner.window_sum()
            }
        }
    }
}

/// Diagnostic for [`Formula::check_flat`] failures.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatViolation {
    /// Path from the root to the offending node, e.g. `root/&lhs/F`.
    pub path: String,
    pub reason: &'static str,
}

impl fmt::Display for FlatViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.reason, self.path)
    }
}

// Printing mirrors the grammar levels so that `parse ∘ to_string` is the
// identity on ASTs. `prec`: 0 = disj, 1 = conj, 2 = unary, 3 = atom_or_paren.
impl Formula {
    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let mine = match self {
            Formula::Or(..) => 0,
            Formula::And(..) => 1,
            Formula::Not(_)
            | Formula::Eventually(..)
            | Formula::Always(..)
            | Formula::Until(..) => 2,
            Formula::Atom(_) | Formula::Top | Formula::Bot => 3,
        };
        if mine < prec {
            write!(f, "(")?;
            self.fmt_prec(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Formula::Atom(name) => write!(f, "{name}"),
            Formula::Top => write!(f, "true"),
            Formula::Bot => write!(f, "false"),
            Formula::Or(a, b) => {
                a.fmt_prec(f, 0)?;
                write!(f, " | ")?;
                // the right operand parses at conj level
                b.fmt_prec(f, 1)
            }
            Formula::And(a, b) => {
                a.fmt_prec(f, 1)?;
                write!(f, " & ")?;
                b.fmt_prec(f, 2)
            }
            Formula::Not(inner) => {
                write!(f, "!")?;
                inner.fmt_prec(f, 2)
            }
            Formula::Eventually(w, inner) => {
                write!(f, "F{}", WindowNotation(w))?;
                write!(f, " ")?;
                inner.fmt_prec(f, 2)
            }
            Formula::Always(w, inner) => {
                write!(f, "G{}", WindowNotation(w))?;
                write!(f, " ")?;
                inner.fmt_prec(f, 2)
            }
            Formula::Until(w, a, b) => {
                // the left operand of U parses at atom_or_paren level
                a.fmt_prec(f, 3)?;
                write!(f, " U{} ", WindowNotation(w))?;
                b.fmt_prec(f, 2)
            }
        }
    }
}

struct WindowNotation<'a>(&'a Interval);

impl fmt::Display for WindowNotation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let iv = self.0;
        write!(f, "{}", if iv.lo().closed { '[' } else { '(' })?;
        write!(f, "{},", iv.lo().value)?;
        if iv.hi().value.is_infinite() {
            write!(f, "inf")?;
        } else {
            write!(f, "{}", iv.hi().value)?;
        }
        write!(f, "{}", if iv.hi().closed { ']' } else { ')' })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Assignment of state regions to atom names.
///
/// The reserved names `true` and `false` always resolve to `ℝ` and `∅` and
/// cannot be declared.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AtomMap {
    regions: BTreeMap<String, RegionSet>,
}

impl AtomMap {
    pub fn new() -> Self {
        AtomMap::default()
    }

    /// Builds a map from `(name, region)` pairs.
    pub fn from_pairs<I, S>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, RegionSet)>,
        S: Into<String>,
    {
        let mut map = AtomMap::new();
        for (name, region) in pairs {
            map.insert(name, region);
        }
        map
    }

    pub fn insert(&mut self, name: impl Into<String>, region: RegionSet) {
        let name = name.into();
        assert!(
            name != TRUE_ATOM && name != FALSE_ATOM,
            "`{name}` is reserved"
        );
        self.regions.insert(name, region);
    }

    /// Region of an atom; the reserved constants resolve without declaration.
    pub fn region_of(&self, name: &str) -> Result<RegionSet, EvalError> {
        match name {
            TRUE_ATOM => Ok(IntervalSet::all_reals()),
            FALSE_ATOM => Ok(IntervalSet::empty()),
            _ => self
                .regions
                .get(name)
                .cloned()
                .ok_or_else(|| EvalError::UnknownAtom(name.to_string())),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &RegionSet)> {
        self.regions.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Parses the config format: one `name = <region notation>` line per
    /// atom; `#` comments and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut map = AtomMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, notation) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `name = region`", idx + 1))?;
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(format!("line {}: bad atom name `{name}`", idx + 1));
            }
            if name == TRUE_ATOM || name == FALSE_ATOM {
                return Err(format!("line {}: `{name}` is reserved", idx + 1));
            }
            let region = IntervalSet::parse(notation)
                .map_err(|e| format!("line {}: {e}", idx + 1))?;
            map.insert(name, region);
        }
        Ok(map)
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self, String> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| format!("{}: {e}", path.as_ref().display()))?;
        AtomMap::parse(&text)
    }
}

impl fmt::Display for AtomMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, region) in &self.regions {
            writeln!(f, "{name} = {region}")?;
        }
        Ok(())
    }
}

/// Computes the state region of a propositional formula by Boolean region
/// algebra; complement is taken within `ℝ`.
pub fn propositional_region(formula: &Formula, atoms: &AtomMap) -> Result<RegionSet, EvalError> {
    match formula {
        Formula::Atom(name) => atoms.region_of(name),
        Formula::Top => Ok(IntervalSet::all_reals()),
        Formula::Bot => Ok(IntervalSet::empty()),
        Formula::Not(inner) => Ok(propositional_region(inner, atoms)?
            .complement_within(Interval::all_reals())),
        Formula::And(a, b) => {
            Ok(propositional_region(a, atoms)?.intersect(&propositional_region(b, atoms)?))
        }
        Formula::Or(a, b) => {
            Ok(propositional_region(a, atoms)?.union(&propositional_region(b, atoms)?))
        }
        Formula::Until(..) | Formula::Eventually(..) | Formula::Always(..) => {
            Err(EvalError::NotPropositional)
        }
    }
}

/// True when the canonical components of the region have pairwise disjoint
/// closures. `∅` and `ℝ` are separated.
pub fn check_separated(region: &RegionSet) -> bool {
    region
        .intervals()
        .windows(2)
        .all(|pair| pair[0].hi().value < pair[1].lo().value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win(lo: f64, lo_c: bool, hi: f64, hi_c: bool) -> Interval {
        Interval::new(lo, lo_c, hi, hi_c).unwrap()
    }

    /// The nested formula whose satisfaction set has an isolated point:
    /// `G(1,2)(F(1,4) p & !F(1,3) p)`.
    fn nested_box() -> Formula {
        Formula::always(
            Interval::open(1.0, 2.0),
            Formula::and(
                Formula::eventually(Interval::open(1.0, 4.0), Formula::atom("p")),
                Formula::not(Formula::eventually(Interval::open(1.0, 3.0), Formula::atom("p"))),
            ),
        )
    }

    #[test]
    fn parse_conjunction_of_diamonds() {
        let got = Formula::parse("F(1,4) p & !F(1,3) p").unwrap();
        let want = Formula::and(
            Formula::eventually(Interval::open(1.0, 4.0), Formula::atom("p")),
            Formula::not(Formula::eventually(Interval::open(1.0, 3.0), Formula::atom("p"))),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn parse_nested_box() {
        let got = Formula::parse("G(1,2)(F(1,4) p & !F(1,3) p)").unwrap();
        assert_eq!(got, nested_box());
    }

    #[test]
    fn parse_unbounded_until() {
        let got = Formula::parse("p U[0,inf) q").unwrap();
        let want = Formula::until(
            win(0.0, true, f64::INFINITY, false),
            Formula::atom("p"),
            Formula::atom("q"),
        );
        assert_eq!(got, want);
        // unbounded windows are an evaluation-time error, not a parse error
        assert_eq!(got.window_sum(), f64::INFINITY);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let err = Formula::parse("p & ").unwrap_err();
        assert_eq!(err.offset, 4);
        let err = Formula::parse("F(2,1) p").unwrap_err();
        assert!(err.message.contains("empty"), "{err}");
    }

    #[test]
    fn to_core_examples() {
        let w = win(1.0, true, 2.0, true);
        assert_eq!(
            Formula::eventually(w, Formula::atom("p")).to_core(),
            Formula::until(w, Formula::atom(TRUE_ATOM), Formula::atom("p"))
        );
        assert_eq!(
            Formula::always(w, Formula::atom("p")).to_core(),
            Formula::not(Formula::until(
                w,
                Formula::atom(TRUE_ATOM),
                Formula::not(Formula::atom("p"))
            ))
        );
        assert_eq!(Formula::atom("p").to_core(), Formula::atom("p"));
    }

    #[test]
    fn flat_fragment_examples() {
        let flat = Formula::not(Formula::eventually(Interval::open(0.0, 1.0), Formula::atom("p")));
        assert!(flat.is_flat());
        assert!(Formula::and(Formula::atom("p"), Formula::not(Formula::atom("q"))).is_flat());

        // nesting a box under a diamond leaves the fragment
        let nested = Formula::eventually(Interval::open(1.0, 3.0), nested_box());
        assert!(!nested.is_flat());
        let v = nested.check_flat().unwrap_err();
        assert!(v.path.contains('F'), "{v}");

        assert!(!Formula::until(
            Interval::closed(0.0, 1.0),
            Formula::atom("p"),
            Formula::atom("q")
        )
        .is_flat());
    }

    #[test]
    fn propositional_region_examples() {
        let atoms = AtomMap::from_pairs([
            ("a", IntervalSet::parse("(-inf,1)").unwrap()),
            ("b", IntervalSet::parse("(1,inf)").unwrap()),
        ]);
        // a and b overlap nowhere, so !(a & b) is all of R
        let region = propositional_region(
            &Formula::not(Formula::and(Formula::atom("a"), Formula::atom("b"))),
            &atoms,
        )
        .unwrap();
        assert_eq!(region, IntervalSet::all_reals());

        let atoms = AtomMap::from_pairs([("a", IntervalSet::parse("[1,inf)").unwrap())]);
        assert_eq!(
            propositional_region(&Formula::atom("a"), &atoms).unwrap(),
            IntervalSet::parse("[1,inf)").unwrap()
        );
        assert_eq!(
            propositional_region(
                &Formula::and(Formula::atom("a"), Formula::not(Formula::atom("a"))),
                &atoms
            )
            .unwrap(),
            IntervalSet::empty()
        );
        assert_eq!(
            propositional_region(&nested_box(), &atoms),
            Err(EvalError::NotPropositional)
        );
    }

    #[test]
    fn separation_examples() {
        assert!(!check_separated(
            &IntervalSet::parse("(-inf,1), (1,inf)").unwrap()
        ));
        assert!(check_separated(&IntervalSet::parse("[0,1], [3,4]").unwrap()));
        assert!(check_separated(&IntervalSet::all_reals()));
        assert!(check_separated(&IntervalSet::empty()));
    }

    #[test]
    fn display_round_trips() {
        let samples = [
            "p",
            "!p & !F(0,8) p",
            "G(1,2)(F(1,4) p & !F(1,3) p)",
            "(p | q) U[0.5,2] !r",
            "p U[1,2] (q U[0,1] r)",
            "!(p & q) | true",
        ];
        for s in samples {
            let ast = Formula::parse(s).unwrap();
            let printed = ast.to_string();
            assert_eq!(Formula::parse(&printed).unwrap(), ast, "printed: {printed}");
        }
    }

    #[test]
    fn random_asts_round_trip_through_printing() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0xF0);
        for case in 0..10_000 {
            let ast = random_formula(&mut rng, 3);
            let printed = ast.to_string();
            let reparsed = Formula::parse(&printed)
                .unwrap_or_else(|e| panic!("case {case}: `{printed}`: {e}"));
            assert_eq!(reparsed, ast, "case {case}: `{printed}`");
        }

        fn random_formula(rng: &mut rand_chacha::ChaCha12Rng, depth: u32) -> Formula {
            let pick = if depth == 0 {
                rng.random_range(0..3)
            } else {
                rng.random_range(0..9)
            };
            let window = |rng: &mut rand_chacha::ChaCha12Rng| {
                let lo = rng.random_range(0..8) as f64 * 0.25;
                let hi = lo + rng.random_range(1..8) as f64 * 0.25;
                if rng.random_bool(0.1) {
                    Interval::point(lo)
                } else {
                    Interval::new(lo, rng.random(), hi, rng.random()).unwrap()
                }
            };
            match pick {
                0 => Formula::atom(["p", "q", "r"][rng.random_range(0..3)]),
                1 => Formula::Top,
                2 => Formula::Bot,
                3 => Formula::not(random_formula(rng, depth - 1)),
                4 => Formula::and(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
                5 => Formula::or(random_formula(rng, depth - 1), random_formula(rng, depth - 1)),
                6 => Formula::eventually(window(rng), random_formula(rng, depth - 1)),
                7 => Formula::always(window(rng), random_formula(rng, depth - 1)),
                _ => Formula::until(
                    window(rng),
                    random_formula(rng, depth - 1),
                    random_formula(rng, depth - 1),
                ),
            }
        }
    }

    #[test]
    fn flat_formulas_desugar_to_shallow_until() {
        use rand::{Rng, SeedableRng};
        // is_flat implies: core form has until depth <= 1 and every until
        // left argument is the true constant
        fn until_ok(f: &Formula, inside: bool) -> bool {
            match f {
                Formula::Atom(_) | Formula::Top | Formula::Bot => true,
                Formula::Not(x) => until_ok(x, inside),
                Formula::And(a, b) | Formula::Or(a, b) => until_ok(a, inside) && until_ok(b, inside),
                Formula::Until(_, lhs, rhs) => {
                    !inside
                        && **lhs == Formula::atom(TRUE_ATOM)
                        && until_ok(rhs, true)
                }
                Formula::Eventually(..) | Formula::Always(..) => false,
            }
        }
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(0xF1);
        let mut flat_seen = 0;
        for _ in 0..5000 {
            let atom = Formula::atom(["p", "q"][rng.random_range(0..2)]);
            let prop = if rng.random_bool(0.5) {
                Formula::and(atom.clone(), Formula::not(Formula::atom("r")))
            } else {
                atom
            };
            let f = match rng.random_range(0..4) {
                0 => prop,
                1 => Formula::eventually(Interval::closed(0.0, 1.0), prop),
                2 => Formula::not(Formula::always(Interval::open(0.0, 2.0), prop)),
                _ => Formula::or(
                    Formula::eventually(Interval::closed(1.0, 2.0), prop),
                    Formula::atom("q"),
                ),
            };
            if f.is_flat() {
                flat_seen += 1;
                assert!(until_ok(&f.to_core(), false), "{f}");
            }
        }
        assert!(flat_seen > 4000);
    }

    #[test]
    fn atom_map_config_round_trip() {
        let text = "# regions\np = [1, inf)\nq = [0,1], (2,3), {5}\nr = empty\n";
        let map = AtomMap::parse(text).unwrap();
        assert_eq!(
            map.region_of("q").unwrap(),
            IntervalSet::parse("[0,1], (2,3), {5}").unwrap()
        );
        assert_eq!(map.region_of("r").unwrap(), IntervalSet::empty());
        assert!(map.region_of("true").unwrap().contains(1e9));
        assert!(map.region_of("zzz").is_err());
        let reparsed = AtomMap::parse(&map.to_string()).unwrap();
        assert_eq!(reparsed, map);
    }
}
