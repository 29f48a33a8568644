//! Discrete-semantics evaluator over grid traces.
//!
//! Satisfaction at `t ∈ ℕ/n` follows the literal recursive definition: a
//! temporal window `⟨S,T⟩` quantifies over `s ∈ ⟨S,T⟩ ∩ ℕ/n`. Window bounds
//! are resolved to integer grid offsets once per formula with exact rational
//! arithmetic (`j/n` versus the exact binary value of the endpoint), never
//! with float comparisons, so floor/ceil boundary cases are decided
//! correctly.
//!
//! [`eval_holds`] evaluates one grid point by memoized recursion;
//! [`eval_all`] produces the whole truth sequence bottom-up with
//! sliding-window scans (amortized constant work per grid point), which is
//! what the Monte Carlo harness uses. Grid positions whose window would
//! reach past the trace horizon are explicitly undefined, never silently
//! false.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};

use crate::error::EvalError;
use crate::formula::{AtomMap, Formula};
use crate::timeset::{Interval, RegionSet};
use crate::trace::{lambda_index, GridTrace};

/// A formula compiled against a resolution and an atom map: every temporal
/// window becomes an inclusive integer offset range, every atom a region.
#[derive(Debug, Clone)]
pub struct GridFormula {
    n: u32,
    nodes: Vec<Node>,
    lookaheads: Vec<u64>,
    /// grid offsets the root may look ahead of the evaluation point
    lookahead: u64,
}

#[derive(Debug, Clone)]
enum Node {
    Atom(RegionSet),
    Const(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    /// `∃ s = j/n, j ∈ [lo, hi]`
    Eventually { lo: u64, hi: u64, child: usize },
    /// `∀ s = j/n, j ∈ [lo, hi]`
    Always { lo: u64, hi: u64, child: usize },
    Until { lo: u64, hi: u64, lhs: usize, rhs: usize },
}

/// Inclusive integer range `{j ≥ 0 : j/n ∈ window}`, or `None` when empty.
fn grid_offsets(window: &Interval, n: u32) -> Result<Option<(u64, u64)>, EvalError> {
    if window.hi().value.is_infinite() {
        return Err(EvalError::UnboundedWindow);
    }
    if window.lo().value < 0.0 {
        return Err(EvalError::NegativeWindow);
    }
    let n_big = BigInt::from(n);
    let lo_exact = BigRational::from_f64(window.lo().value).unwrap() * &n_big;
    let hi_exact = BigRational::from_f64(window.hi().value).unwrap() * &n_big;

    let mut lo = lo_exact.ceil().to_integer();
    if !window.lo().closed && BigRational::from(lo.clone()) == lo_exact {
        lo += 1;
    }
    if lo.is_negative() {
        lo = BigInt::zero();
    }
    let mut hi = hi_exact.floor().to_integer();
    if !window.hi().closed && BigRational::from(hi.clone()) == hi_exact {
        hi -= 1;
    }
    if hi < lo {
        return Ok(None);
    }
    Ok(Some((
        lo.to_u64().expect("window offset fits u64"),
        hi.to_u64().expect("window offset fits u64"),
    )))
}

impl GridFormula {
    pub fn compile(formula: &Formula, n: u32, atoms: &AtomMap) -> Result<Self, EvalError> {
        let mut nodes = Vec::new();
        let root = Self::build(formula, n, atoms, &mut nodes)?;
        debug_assert_eq!(root, nodes.len() - 1);
        let lookaheads = lookaheads_of(&nodes);
        let lookahead = lookaheads[root];
        Ok(GridFormula {
            n,
            nodes,
            lookaheads,
            lookahead,
        })
    }

    fn build(
        formula: &Formula,
        n: u32,
        atoms: &AtomMap,
        nodes: &mut Vec<Node>,
    ) -> Result<usize, EvalError> {
        let node = match formula {
            Formula::Atom(name) => Node::Atom(atoms.region_of(name)?),
            Formula::Top => Node::Const(true),
            Formula::Bot => Node::Const(false),
            Formula::Not(inner) => Node::Not(Self::build(inner, n, atoms, nodes)?),
            Formula::And(a, b) => {
                let lhs = Self::build(a, n, atoms, nodes)?;
                let rhs = Self::build(b, n, atoms, nodes)?;
                Node::And(lhs, rhs)
            }
            Formula::Or(a, b) => {
                let lhs = Self::build(a, n, atoms, nodes)?;
                let rhs = Self::build(b, n, atoms, nodes)?;
                Node::Or(lhs, rhs)
            }
            Formula::Eventually(w, inner) => {
                let child = Self::build(inner, n, atoms, nodes)?;
                match grid_offsets(w, n)? {
                    Some((lo, hi)) => Node::Eventually { lo, hi, child },
                    None => Node::Const(false),
                }
            }
            Formula::Always(w, inner) => {
                let child = Self::build(inner, n, atoms, nodes)?;
                match grid_offsets(w, n)? {
                    Some((lo, hi)) => Node::Always { lo, hi, child },
                    None => Node::Const(true),
                }
            }
            Formula::Until(w, a, b) => {
                let lhs = Self::build(a, n, atoms, nodes)?;
                let rhs = Self::build(b, n, atoms, nodes)?;
                match grid_offsets(w, n)? {
                    Some((lo, hi)) => Node::Until { lo, hi, lhs, rhs },
                    None => Node::Const(false),
                }
            }
        };
        nodes.push(node);
        Ok(nodes.len() - 1)
    }

    pub fn resolution(&self) -> u32 {
        self.n
    }

    /// How many grid steps past the evaluation point the formula may probe.
    pub fn lookahead(&self) -> u64 {
        self.lookahead
    }

    /// Truth at grid index `k`; errors when the window reaches past the grid.
    pub fn holds_at_index(&self, grid: &GridTrace, k: u64) -> Result<bool, EvalError> {
        if grid.resolution() != self.n {
            return Err(EvalError::OffGrid {
                t: k as f64 / self.n as f64,
                n: grid.resolution(),
            });
        }
        if k + self.lookahead > grid.max_index() {
            return Err(EvalError::HorizonExceeded {
                needed: (k + self.lookahead) as f64 / self.n as f64,
                available: grid.horizon(),
            });
        }
        let mut memo = HashMap::new();
        Ok(self.holds_rec(grid, self.nodes.len() - 1, k, &mut memo))
    }

    fn holds_rec(
        &self,
        grid: &GridTrace,
        node: usize,
        k: u64,
        memo: &mut HashMap<(usize, u64), bool>,
    ) -> bool {
        if let Some(&cached) = memo.get(&(node, k)) {
            return cached;
        }
        let result = match &self.nodes[node] {
            Node::Atom(region) => region.contains(grid.value_at(k)),
            Node::Const(b) => *b,
            Node::Not(c) => !self.holds_rec(grid, *c, k, memo),
            Node::And(a, b) => {
                self.holds_rec(grid, *a, k, memo) && self.holds_rec(grid, *b, k, memo)
            }
            Node::Or(a, b) => {
                self.holds_rec(grid, *a, k, memo) || self.holds_rec(grid, *b, k, memo)
            }
            Node::Eventually { lo, hi, child } => {
                (*lo..=*hi).any(|j| self.holds_rec(grid, *child, k + j, memo))
            }
            Node::Always { lo, hi, child } => {
                (*lo..=*hi).all(|j| self.holds_rec(grid, *child, k + j, memo))
            }
            Node::Until { lo, hi, lhs, rhs } => (*lo..=*hi).any(|j| {
                self.holds_rec(grid, *rhs, k + j, memo)
                    && (0..j).all(|jp| self.holds_rec(grid, *lhs, k + jp, memo))
            }),
        };
        memo.insert((node, k), result);
        result
    }

    /// Bottom-up truth sequence over the whole grid. Position `k` is `Some`
    /// exactly when every window reachable from `k` fits the horizon, and
    /// then equals [`GridFormula::holds_at_index`] at `k`.
    pub fn eval_all(&self, grid: &GridTrace) -> Result<Vec<Option<bool>>, EvalError> {
        if grid.resolution() != self.n {
            return Err(EvalError::OffGrid {
                t: 0.0,
                n: grid.resolution(),
            });
        }
        let len = grid.values().len();
        // per-node valid prefix of length len - lookahead; tail positions
        // would peek past the horizon
        let mut truth: Vec<Vec<bool>> = Vec::with_capacity(self.nodes.len());
        for (idx, node) in self.nodes.iter().enumerate() {
            let out_len = len.saturating_sub(self.lookaheads[idx] as usize);
            let row = match node {
                Node::Atom(region) => grid.values().iter().map(|&x| region.contains(x)).collect(),
                Node::Const(b) => vec![*b; len],
                Node::Not(c) => truth[*c].iter().map(|v| !v).collect(),
                Node::And(a, b) => zip_bool(&truth[*a], &truth[*b], |x, y| x && y),
                Node::Or(a, b) => zip_bool(&truth[*a], &truth[*b], |x, y| x || y),
                Node::Eventually { lo, hi, child } => {
                    window_scan(&truth[*child], *lo, *hi, out_len, WindowMode::Any)
                }
                Node::Always { lo, hi, child } => {
                    window_scan(&truth[*child], *lo, *hi, out_len, WindowMode::All)
                }
                Node::Until { lo, hi, lhs, rhs } => {
                    until_scan(&truth[*lhs], &truth[*rhs], *lo, *hi, out_len)
                }
            };
            debug_assert!(row.len() >= out_len);
            truth.push(row);
        }
        let root = truth.pop().unwrap();
        let mut out: Vec<Option<bool>> = root.into_iter().map(Some).collect();
        out.resize(len, None);
        Ok(out)
    }
}

// nodes are in postorder, so children precede parents
fn lookaheads_of(nodes: &[Node]) -> Vec<u64> {
    let mut las = Vec::with_capacity(nodes.len());
    for node in nodes {
        let la = match node {
            Node::Atom(_) | Node::Const(_) => 0,
            Node::Not(c) => las[*c],
            Node::And(a, b) | Node::Or(a, b) => las[*a].max(las[*b]),
            Node::Eventually { hi, child, .. } | Node::Always { hi, child, .. } => hi + las[*child],
            Node::Until { hi, lhs, rhs, .. } => hi + las[*lhs].max(las[*rhs]),
        };
        las.push(la);
    }
    las
}

fn zip_bool(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

enum WindowMode {
    Any,
    All,
}

/// `out[k] = ANY/ALL of child[k+lo ..= k+hi]`, via a prefix-count scan.
fn window_scan(child: &[bool], lo: u64, hi: u64, out_len: usize, mode: WindowMode) -> Vec<bool> {
    let (lo, hi) = (lo as usize, hi as usize);
    debug_assert!(out_len + hi <= child.len() || out_len == 0);
    let prefix = prefix_counts(child);
    let width = (hi - lo + 1) as u32;
    (0..out_len)
        .map(|k| {
            let trues = prefix[k + hi + 1] - prefix[k + lo];
            match mode {
                WindowMode::Any => trues > 0,
                WindowMode::All => trues == width,
            }
        })
        .collect()
}

/// `out[k] = ∃ j ∈ [lo, hi]: rhs[k+j] ∧ ∀ j' < j: lhs[k+j']`.
///
/// Uses the run length of `lhs` starting at `k` to cap the witness range,
/// then a prefix-count query on `rhs`.
fn until_scan(lhs: &[bool], rhs: &[bool], lo: u64, hi: u64, out_len: usize) -> Vec<bool> {
    let (lo, hi) = (lo as usize, hi as usize);
    debug_assert!(out_len + hi <= rhs.len() || out_len == 0);
    let mut run = vec![0usize; lhs.len() + 1];
    for k in (0..lhs.len()).rev() {
        run[k] = if lhs[k] { run[k + 1] + 1 } else { 0 };
    }
    let prefix = prefix_counts(rhs);
    (0..out_len)
        .map(|k| {
            let cap = hi.min(run[k]);
            cap >= lo && prefix[k + cap + 1] - prefix[k + lo] > 0
        })
        .collect()
}

fn prefix_counts(values: &[bool]) -> Vec<u32> {
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0u32);
    for &v in values {
        prefix.push(prefix.last().unwrap() + u32::from(v));
    }
    prefix
}

/// Truth of `formula` at grid time `t ∈ ℕ/n` by the literal recursion
/// (memoized). `t` must be a grid point of `grid`.
pub fn eval_holds(
    formula: &Formula,
    grid: &GridTrace,
    atoms: &AtomMap,
    t: f64,
) -> Result<bool, EvalError> {
    let k = grid_index(grid, t)?;
    GridFormula::compile(formula, grid.resolution(), atoms)?.holds_at_index(grid, k)
}

/// Truth of `formula` at every grid point at once; `None` marks positions
/// whose windows would reach past the horizon.
pub fn eval_all(
    formula: &Formula,
    grid: &GridTrace,
    atoms: &AtomMap,
) -> Result<Vec<Option<bool>>, EvalError> {
    GridFormula::compile(formula, grid.resolution(), atoms)?.eval_all(grid)
}

fn grid_index(grid: &GridTrace, t: f64) -> Result<u64, EvalError> {
    let n = grid.resolution();
    if t < 0.0 || t > grid.horizon() {
        return Err(EvalError::OffGrid { t, n });
    }
    let k = lambda_index(t, n);
    if k as f64 / n as f64 != t {
        return Err(EvalError::OffGrid { t, n });
    }
    Ok(k)
}
