//! Decorated trees and the sums `S_{g,n} = Σ_Γ N(Γ)`.
//!
//! An `(n,g)`-decorated tree is a rooted unordered tree with `n` labelled
//! leaves, `g` unary vertices and `n-1` binary vertices. Internal vertices
//! carry distinct step labels `cp` in `1..=2g+n-1`; labels grow towards the
//! leaves, a unary label `a` needs `a > 1` with `a-1` unused, and every leaf
//! hangs off a binary vertex. The weight is
//!
//! ```text
//! N(Γ) = n^{-(n+g-1)} · Π_binary ml/cp · Π_unary (ml^3 - ml)/(12 cp)
//! ```
//!
//! where `ml` counts leaf descendants.
//!
//! Trees are generated from histories: starting from `n` single-leaf roots
//! and `t = 2g+n-1`, each step either joins two roots under a binary vertex
//! labelled `t` (then `t -= 1`) or caps a root with at least two leaves by a
//! unary vertex labelled `t` (then `t -= 2`, skipping `t-1`). Every decorated
//! tree has exactly one such history, read off by sorting its vertices by
//! descending `cp`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::arith::{factorial, ExactRational};
use crate::error::{Error, Result};

/// Largest leaf count supported by explicit enumeration (label sets are
/// 128-bit masks).
pub const MAX_ENUMERATION_LEAVES: u32 = 128;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf { nm: u32 },
    Unary { cp: u32, child: Arc<Node> },
    Binary { cp: u32, children: [Arc<Node>; 2] },
}

impl Node {
    pub fn leaf(nm: u32) -> Arc<Node> {
        Arc::new(Node::Leaf { nm })
    }

    pub fn unary(cp: u32, child: Arc<Node>) -> Arc<Node> {
        Arc::new(Node::Unary { cp, child })
    }

    pub fn binary(cp: u32, a: Arc<Node>, b: Arc<Node>) -> Arc<Node> {
        Arc::new(Node::Binary {
            cp,
            children: [a, b],
        })
    }

    pub fn cp(&self) -> Option<u32> {
        match self {
            Node::Leaf { .. } => None,
            Node::Unary { cp, .. } | Node::Binary { cp, .. } => Some(*cp),
        }
    }

    fn encode_into(&self, out: &mut String) {
        match self {
            Node::Leaf { nm } => {
                out.push('L');
                out.push_str(&nm.to_string());
            }
            Node::Unary { cp, child } => {
                out.push('U');
                out.push_str(&cp.to_string());
                out.push('(');
                child.encode_into(out);
                out.push(')');
            }
            Node::Binary { cp, children } => {
                let mut x = String::new();
                let mut y = String::new();
                children[0].encode_into(&mut x);
                children[1].encode_into(&mut y);
                if y < x {
                    std::mem::swap(&mut x, &mut y);
                }
                out.push('B');
                out.push_str(&cp.to_string());
                out.push('(');
                out.push_str(&x);
                out.push(',');
                out.push_str(&y);
                out.push(')');
            }
        }
    }
}

/// A rooted tree together with the `(g, n)` it claims to belong to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedTree {
    pub g: u32,
    pub n: u32,
    pub root: Arc<Node>,
}

impl DecoratedTree {
    /// Wraps a root without validating it; see [`validate_tree`].
    pub fn new(g: u32, n: u32, root: Arc<Node>) -> Self {
        Self { g, n, root }
    }

    /// Parse the canonical text form. `n` and `g` are read off as the number
    /// of leaves and unary vertices.
    pub fn from_encoding(text: &str) -> Result<Self> {
        let mut p = Parser {
            s: text.as_bytes(),
            pos: 0,
        };
        let root = p.node()?;
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        let (mut leaves, mut unary) = (0, 0);
        walk(&root, &mut |node, _| match node {
            Node::Leaf { .. } => leaves += 1,
            Node::Unary { .. } => unary += 1,
            Node::Binary { .. } => {}
        });
        Ok(Self::new(unary, leaves, root))
    }
}

impl fmt::Display for DecoratedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&canonical_encoding(self))
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::InvalidQuery(format!("tree encoding: {what} at byte {}", self.pos))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.s.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|d| d.parse().ok())
            .ok_or_else(|| self.err("expected a number"))
    }

    fn node(&mut self) -> Result<Arc<Node>> {
        let tag = *self
            .s
            .get(self.pos)
            .ok_or_else(|| self.err("unexpected end"))?;
        self.pos += 1;
        match tag {
            b'L' => Ok(Node::leaf(self.number()?)),
            b'U' => {
                let cp = self.number()?;
                self.expect(b'(')?;
                let child = self.node()?;
                self.expect(b')')?;
                Ok(Node::unary(cp, child))
            }
            b'B' => {
                let cp = self.number()?;
                self.expect(b'(')?;
                let a = self.node()?;
                self.expect(b',')?;
                let b = self.node()?;
                self.expect(b')')?;
                Ok(Node::binary(cp, a, b))
            }
            _ => {
                self.pos -= 1;
                Err(self.err("expected L, U or B"))
            }
        }
    }
}

/// Pre-order walk passing each node and its parent.
fn walk<'a>(root: &'a Node, f: &mut impl FnMut(&'a Node, Option<&'a Node>)) {
    fn go<'a>(
        node: &'a Node,
        parent: Option<&'a Node>,
        f: &mut impl FnMut(&'a Node, Option<&'a Node>),
    ) {
        f(node, parent);
        match node {
            Node::Leaf { .. } => {}
            Node::Unary { child, .. } => go(child, Some(node), f),
            Node::Binary { children, .. } => {
                go(&children[0], Some(node), f);
                go(&children[1], Some(node), f);
            }
        }
    }
    go(root, None, f)
}

/// `L<nm>`, `U<cp>(child)`, `B<cp>(x,y)` with `x ≤ y` as strings.
pub fn canonical_encoding(tree: &DecoratedTree) -> String {
    let mut out = String::new();
    tree.root.encode_into(&mut out);
    out
}

/// The first rule a candidate tree breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeViolation {
    LeafCount { expected: u32, found: u32 },
    UnaryCount { expected: u32, found: u32 },
    BinaryCount { expected: u32, found: u32 },
    LeafLabels,
    LeafParentNotBinary { nm: u32 },
    CpOutOfRange { cp: u32 },
    CpNotInjective { cp: u32 },
    UnarySkip { cp: u32 },
    Descent { parent: u32, child: u32 },
    RootLabel { cp: u32 },
    Incomplete,
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LeafCount { expected, found } => {
                write!(f, "expected {expected} leaves, found {found}")
            }
            Self::UnaryCount { expected, found } => {
                write!(f, "expected {expected} unary vertices, found {found}")
            }
            Self::BinaryCount { expected, found } => {
                write!(f, "expected {expected} binary vertices, found {found}")
            }
            Self::LeafLabels => f.write_str("leaf labels are not a bijection onto 1..n"),
            Self::LeafParentNotBinary { nm } => {
                write!(f, "leaf {nm} does not hang off a binary vertex")
            }
            Self::CpOutOfRange { cp } => write!(f, "step label {cp} out of range"),
            Self::CpNotInjective { cp } => write!(f, "step label {cp} used twice"),
            Self::UnarySkip { cp } => write!(f, "unary label {cp} needs {cp}-1 free and > 0"),
            Self::Descent { parent, child } => {
                write!(f, "child label {child} not above parent label {parent}")
            }
            Self::RootLabel { cp } => write!(f, "root label {cp} is not 1 (binary) or 2 (unary)"),
            Self::Incomplete => f.write_str("step labels and unary skips do not fill the range"),
        }
    }
}

impl std::error::Error for TreeViolation {}

/// Check every defining rule of an `(n,g)`-decorated tree.
pub fn validate_tree(tree: &DecoratedTree) -> Result<(), TreeViolation> {
    let (g, n) = (tree.g, tree.n);
    let mut nms = Vec::new();
    let (mut unary, mut binary) = (0u32, 0u32);
    let mut leaf_parent_ok = None;
    walk(&tree.root, &mut |node, parent| match node {
        Node::Leaf { nm } => {
            nms.push(*nm);
            if leaf_parent_ok.is_none() && matches!(parent, Some(Node::Unary { .. })) {
                leaf_parent_ok = Some(*nm);
            }
        }
        Node::Unary { .. } => unary += 1,
        Node::Binary { .. } => binary += 1,
    });
    let leaves = nms.len() as u32;
    if leaves != n {
        return Err(TreeViolation::LeafCount {
            expected: n,
            found: leaves,
        });
    }
    if unary != g {
        return Err(TreeViolation::UnaryCount {
            expected: g,
            found: unary,
        });
    }
    if binary + 1 != n {
        return Err(TreeViolation::BinaryCount {
            expected: n - 1,
            found: binary,
        });
    }
    nms.sort_unstable();
    if nms.iter().enumerate().any(|(k, &nm)| nm != k as u32 + 1) {
        return Err(TreeViolation::LeafLabels);
    }
    if let Some(nm) = leaf_parent_ok {
        return Err(TreeViolation::LeafParentNotBinary { nm });
    }

    let top = 2 * g + n - 1;
    let mut used = vec![false; top as usize + 1];
    let mut unary_labels = Vec::new();
    let mut first_error = None;
    walk(&tree.root, &mut |node, _| {
        if first_error.is_some() {
            return;
        }
        let Some(cp) = node.cp() else { return };
        if cp == 0 || cp > top {
            first_error = Some(TreeViolation::CpOutOfRange { cp });
        } else if used[cp as usize] {
            first_error = Some(TreeViolation::CpNotInjective { cp });
        } else {
            used[cp as usize] = true;
            if matches!(node, Node::Unary { .. }) {
                unary_labels.push(cp);
            }
        }
    });
    if let Some(e) = first_error {
        return Err(e);
    }
    for &cp in &unary_labels {
        if cp <= 1 || used[cp as usize - 1] {
            return Err(TreeViolation::UnarySkip { cp });
        }
    }
    walk(&tree.root, &mut |node, parent| {
        if first_error.is_some() {
            return;
        }
        if let (Some(c), Some(p)) = (node.cp(), parent.and_then(Node::cp)) {
            if c <= p {
                first_error = Some(TreeViolation::Descent {
                    parent: p,
                    child: c,
                });
            }
        }
    });
    if let Some(e) = first_error {
        return Err(e);
    }
    match *tree.root {
        Node::Unary { cp, .. } if cp != 2 => return Err(TreeViolation::RootLabel { cp }),
        Node::Binary { cp, .. } if cp != 1 => return Err(TreeViolation::RootLabel { cp }),
        _ => {}
    }
    let mut filled = used;
    for &cp in &unary_labels {
        filled[cp as usize - 1] = true;
    }
    if filled[1..].iter().any(|&b| !b) {
        return Err(TreeViolation::Incomplete);
    }
    Ok(())
}

/// Exact `N(Γ)`; the tree is validated first.
pub fn tree_weight(tree: &DecoratedTree) -> Result<ExactRational> {
    validate_tree(tree).map_err(|v| Error::InvalidQuery(format!("invalid decorated tree: {v}")))?;
    Ok(weight_unchecked(tree))
}

fn weight_unchecked(tree: &DecoratedTree) -> ExactRational {
    fn go(node: &Node, num: &mut BigInt, den: &mut BigInt) -> u64 {
        match node {
            Node::Leaf { .. } => 1,
            Node::Unary { cp, child } => {
                let ml = go(child, num, den);
                *num *= ml * ml * ml - ml;
                *den *= 12 * *cp as u64;
                ml
            }
            Node::Binary { cp, children } => {
                let ml = go(&children[0], num, den) + go(&children[1], num, den);
                *num *= ml;
                *den *= *cp as u64;
                ml
            }
        }
    }
    let mut num = BigInt::one();
    let mut den = num_traits::pow(BigInt::from(tree.n), (tree.n + tree.g - 1) as usize);
    go(&tree.root, &mut num, &mut den);
    ExactRational::new(num, den).expect("positive denominator")
}

/// Leaf-label set of a root, as a bitmask over labels `1..=128`.
pub type LabelSet = u128;

fn label_bit(nm: u32) -> LabelSet {
    1u128 << (nm - 1)
}

/// One step of a history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Move {
    /// Join two roots (label sets stored with the smaller mask first).
    Join { cp: u32, a: LabelSet, b: LabelSet },
    /// Cap one root by a unary vertex.
    Cap { cp: u32, set: LabelSet },
}

impl Move {
    fn join(cp: u32, x: LabelSet, y: LabelSet) -> Self {
        Move::Join {
            cp,
            a: x.min(y),
            b: x.max(y),
        }
    }
}

/// Recover the unique history of a tree by reading vertices in order of
/// descending `cp`.
pub fn history_of(tree: &DecoratedTree) -> Vec<Move> {
    fn go(node: &Node, out: &mut Vec<Move>) -> LabelSet {
        match node {
            Node::Leaf { nm } => label_bit(*nm),
            Node::Unary { cp, child } => {
                let set = go(child, out);
                out.push(Move::Cap { cp: *cp, set });
                set
            }
            Node::Binary { cp, children } => {
                let x = go(&children[0], out);
                let y = go(&children[1], out);
                out.push(Move::join(*cp, x, y));
                x | y
            }
        }
    }
    let mut out = Vec::new();
    go(&tree.root, &mut out);
    out.sort_by_key(|m| match m {
        Move::Join { cp, .. } | Move::Cap { cp, .. } => std::cmp::Reverse(*cp),
    });
    out
}

/// Enumerator state: live roots with their label sets and leaf counts.
#[derive(Clone, Debug)]
struct ForestState {
    roots: Vec<(Arc<Node>, LabelSet, u32)>,
    t: u32,
    budget: u32,
    history: Vec<Move>,
}

impl ForestState {
    fn dfs(&mut self, g: u32, n: u32, visit: &mut dyn FnMut(&DecoratedTree, &[Move])) {
        if self.t == 0 {
            debug_assert!(self.roots.len() == 1 && self.budget == 0);
            let tree = DecoratedTree::new(g, n, self.roots[0].0.clone());
            visit(&tree, &self.history);
            return;
        }
        let t = self.t;
        let len = self.roots.len();
        for x in 0..len {
            for y in x + 1..len {
                let saved = self.roots.clone();
                let (ny, sy, ly) = self.roots.remove(y);
                let (nx, sx, lx) = self.roots[x].clone();
                self.roots[x] = (Node::binary(t, nx, ny), sx | sy, lx + ly);
                self.history.push(Move::join(t, sx, sy));
                self.t -= 1;
                self.dfs(g, n, visit);
                self.t += 1;
                self.history.pop();
                self.roots = saved;
            }
        }
        if self.budget > 0 && t >= 2 {
            for x in 0..len {
                let (node, set, leaves) = self.roots[x].clone();
                if leaves < 2 {
                    continue;
                }
                self.roots[x] = (Node::unary(t, node.clone()), set, leaves);
                self.history.push(Move::Cap { cp: t, set });
                self.t -= 2;
                self.budget -= 1;
                self.dfs(g, n, visit);
                self.budget += 1;
                self.t += 2;
                self.history.pop();
                self.roots[x] = (node, set, leaves);
            }
        }
    }
}

/// Visit every `(n,g)`-decorated tree with its generating history.
///
/// # Panics
///
/// If `n` is 0 or exceeds [`MAX_ENUMERATION_LEAVES`].
pub fn for_each_tree(g: u32, n: u32, mut visit: impl FnMut(&DecoratedTree, &[Move])) {
    assert!(
        (1..=MAX_ENUMERATION_LEAVES).contains(&n),
        "n must lie in 1..=128"
    );
    let mut state = ForestState {
        roots: (1..=n)
            .map(|nm| (Node::leaf(nm), label_bit(nm), 1))
            .collect(),
        t: 2 * g + n - 1,
        budget: g,
        history: Vec::new(),
    };
    state.dfs(g, n, &mut visit);
}

/// All `(n,g)`-decorated trees, in generation order.
pub fn enumerate_trees(g: u32, n: u32) -> Vec<DecoratedTree> {
    let mut out = Vec::new();
    for_each_tree(g, n, |t, _| out.push(t.clone()));
    out
}

/// `Σ N(Γ)` over the explicit enumeration.
pub fn tree_sum_by_enumeration(g: u32, n: u32) -> ExactRational {
    let mut sum = ExactRational::zero();
    for_each_tree(g, n, |t, _| sum += weight_unchecked(t));
    sum
}

/// Sorted root leaf counts plus remaining genus budget; the step counter is
/// determined by these (`t = roots - 1 + 2 budget`).
type ForestClass = (Vec<u32>, u32);

fn class_step(class: &ForestClass) -> u32 {
    class.0.len() as u32 - 1 + 2 * class.1
}

/// Children of a forest class, with how many labelled moves realise each
/// and the per-move factor of `N(Γ)` (before the global `n^{-(n+g-1)}`).
fn class_moves(class: &ForestClass) -> Vec<(u64, ExactRational, ForestClass)> {
    let (sizes, budget) = class;
    let t = class_step(class) as i64;
    let mut counts: Vec<(u32, u64)> = Vec::new();
    for &s in sizes {
        match counts.last_mut() {
            Some((v, c)) if *v == s => *c += 1,
            _ => counts.push((s, 1)),
        }
    }
    let mut out = Vec::new();
    for (a, &(p, cp)) in counts.iter().enumerate() {
        for &(q, cq) in &counts[a..] {
            let ways = if p == q { cp * (cp - 1) / 2 } else { cp * cq };
            if ways == 0 {
                continue;
            }
            let mut next = sizes.clone();
            let ip = next.iter().position(|&x| x == p).expect("present");
            next.remove(ip);
            let iq = next.iter().position(|&x| x == q).expect("present");
            next.remove(iq);
            next.push(p + q);
            next.sort_unstable();
            out.push((
                ways,
                ExactRational::frac((p + q) as i64, t),
                (next, *budget),
            ));
        }
    }
    if *budget > 0 && t >= 2 {
        for &(m, c) in &counts {
            if m >= 2 {
                let m = m as i64;
                out.push((
                    c,
                    ExactRational::frac(m * m * m - m, 12 * t),
                    (sizes.clone(), budget - 1),
                ));
            }
        }
    }
    out
}

/// `S_{g,n}` by summing over histories grouped by forest class.
///
/// Two labelled forests with the same multiset of root sizes and genus
/// budget have identical completions up to relabelling, and `N(Γ)` only sees
/// sizes and step labels, so the sum over all histories collapses to a
/// memoized sum over classes. Agrees with [`tree_sum_by_enumeration`]
/// wherever the latter is affordable.
pub fn tree_sum(g: u32, n: u32) -> ExactRational {
    assert!(n >= 1, "n must be positive");
    fn go(class: &ForestClass, memo: &mut HashMap<ForestClass, ExactRational>) -> ExactRational {
        if class.0.len() == 1 && class.1 == 0 {
            return ExactRational::one();
        }
        if let Some(v) = memo.get(class) {
            return v.clone();
        }
        let mut sum = ExactRational::zero();
        for (ways, factor, next) in class_moves(class) {
            let sub = go(&next, memo);
            if !sub.is_zero() {
                sum += factor * ExactRational::from(ways) * sub;
            }
        }
        memo.insert(class.clone(), sum.clone());
        sum
    }
    let mut memo = HashMap::new();
    let raw = go(&(vec![1; n as usize], g), &mut memo);
    let norm = num_traits::pow(BigInt::from(n), (n + g - 1) as usize);
    raw.checked_div(&ExactRational::from(norm))
        .expect("nonzero")
}

/// Number of histories (equivalently, of decorated trees) without
/// materializing them.
pub fn count_histories(g: u32, n: u32) -> u128 {
    assert!(n >= 1, "n must be positive");
    fn go(class: &ForestClass, memo: &mut HashMap<ForestClass, u128>) -> u128 {
        if class.0.len() == 1 && class.1 == 0 {
            return 1;
        }
        if let Some(&v) = memo.get(class) {
            return v;
        }
        let v = class_moves(class)
            .into_iter()
            .map(|(ways, _, next)| ways as u128 * go(&next, memo))
            .sum();
        memo.insert(class.clone(), v);
        v
    }
    go(&(vec![1; n as usize], g), &mut HashMap::new())
}

/// How a bijectivity check was carried out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BijectivityMethod {
    /// Every history generated; canonical encodings collected in a set.
    Explicit { distinct_encodings: u128 },
    /// One history per relabelling orbit generated and round-tripped through
    /// its encoding; orbit sizes summed back to the history count.
    OrbitReduced {
        orbits: u128,
        orbit_size_total: u128,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BijectivityReport {
    pub g: u32,
    pub n: u32,
    pub histories: u128,
    pub check: BijectivityMethod,
    pub ok: bool,
}

/// Generate every history, require each tree to validate and to decode back
/// to its history, and count distinct canonical encodings.
pub fn bijectivity_explicit(g: u32, n: u32) -> BijectivityReport {
    let mut seen: HashSet<String> = HashSet::new();
    let mut histories = 0u128;
    let mut ok = true;
    for_each_tree(g, n, |tree, history| {
        histories += 1;
        let enc = canonical_encoding(tree);
        ok &= validate_tree(tree).is_ok() && history_of(tree) == history;
        seen.insert(enc);
    });
    let distinct = seen.len() as u128;
    BijectivityReport {
        g,
        n,
        histories,
        check: BijectivityMethod::Explicit {
            distinct_encodings: distinct,
        },
        ok: ok && distinct == histories && histories == count_histories(g, n),
    }
}

/// Symmetry-reduced exact check.
///
/// Relabelling leaves acts on histories and on trees compatibly, and both
/// the tree built from a history and the history read back from a tree
/// commute with relabelling. So it suffices to round-trip one history per
/// orbit: those where leaves enter in label order (first use of a leaf takes
/// the next unused label). A history whose `f` fresh-with-fresh joins can
/// each be swapped has orbit size `n! / 2^f`; the sizes must add up to the
/// full history count.
pub fn bijectivity_orbit_reduced(g: u32, n: u32) -> BijectivityReport {
    struct Walk {
        g: u32,
        n: u32,
        roots: Vec<(Arc<Node>, LabelSet, u32)>,
        next_label: u32,
        t: u32,
        budget: u32,
        fresh_pairs: u32,
        history: Vec<Move>,
        orbits: u128,
        orbit_size_total: u128,
        n_factorial: u128,
        ok: bool,
    }

    impl Walk {
        fn fresh(&mut self) -> (Arc<Node>, LabelSet, u32) {
            let nm = self.next_label;
            self.next_label += 1;
            (Node::leaf(nm), label_bit(nm), 1)
        }

        fn finish(&mut self) {
            let tree = DecoratedTree::new(self.g, self.n, self.roots[0].0.clone());
            let decoded = DecoratedTree::from_encoding(&canonical_encoding(&tree));
            let round_trip = decoded
                .map(|d| validate_tree(&d).is_ok() && history_of(&d) == self.history)
                .unwrap_or(false);
            self.ok &= round_trip;
            self.orbits += 1;
            self.orbit_size_total += self.n_factorial >> self.fresh_pairs;
        }

        fn join_step(&mut self, a: (Arc<Node>, LabelSet, u32), b: (Arc<Node>, LabelSet, u32)) {
            let t = self.t;
            self.roots
                .push((Node::binary(t, a.0, b.0), a.1 | b.1, a.2 + b.2));
            self.history.push(Move::join(t, a.1, b.1));
            self.t -= 1;
            self.go();
            self.t += 1;
            self.history.pop();
            self.roots.pop();
        }

        fn go(&mut self) {
            let fresh_left = self.n + 1 - self.next_label;
            if self.t == 0 {
                if self.roots.len() == 1 && fresh_left == 0 && self.budget == 0 {
                    self.finish();
                }
                return;
            }
            let len = self.roots.len();
            for x in 0..len {
                for y in x + 1..len {
                    let saved = self.roots.clone();
                    let b = self.roots.remove(y);
                    let a = self.roots.remove(x);
                    self.join_step(a, b);
                    self.roots = saved;
                }
            }
            if fresh_left >= 1 {
                for x in 0..len {
                    let saved = self.roots.clone();
                    let a = self.roots.remove(x);
                    let leaf = self.fresh();
                    self.join_step(a, leaf);
                    self.next_label -= 1;
                    self.roots = saved;
                }
            }
            if fresh_left >= 2 {
                let a = self.fresh();
                let b = self.fresh();
                self.fresh_pairs += 1;
                self.join_step(a, b);
                self.fresh_pairs -= 1;
                self.next_label -= 2;
            }
            if self.budget > 0 && self.t >= 2 {
                for x in 0..len {
                    let (node, set, leaves) = self.roots[x].clone();
                    if leaves < 2 {
                        continue;
                    }
                    let t = self.t;
                    self.roots[x] = (Node::unary(t, node.clone()), set, leaves);
                    self.history.push(Move::Cap { cp: t, set });
                    self.t -= 2;
                    self.budget -= 1;
                    self.go();
                    self.budget += 1;
                    self.t += 2;
                    self.history.pop();
                    self.roots[x] = (node, set, leaves);
                }
            }
        }
    }

    assert!((1..=33).contains(&n), "n! must fit in u128");
    let n_factorial: u128 = factorial(n as u64).try_into().expect("fits");
    let mut w = Walk {
        g,
        n,
        roots: Vec::new(),
        next_label: 1,
        t: 2 * g + n - 1,
        budget: g,
        fresh_pairs: 0,
        history: Vec::new(),
        orbits: 0,
        orbit_size_total: 0,
        n_factorial,
        ok: true,
    };
    if n == 1 {
        // A lone leaf: no moves at all.
        let leaf = w.fresh();
        w.roots.push(leaf);
    }
    w.go();
    let histories = count_histories(g, n);
    BijectivityReport {
        g,
        n,
        histories,
        ok: w.ok && w.orbit_size_total == histories,
        check: BijectivityMethod::OrbitReduced {
            orbits: w.orbits,
            orbit_size_total: w.orbit_size_total,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn encodings(g: u32, n: u32) -> Vec<String> {
        let mut v: Vec<_> = enumerate_trees(g, n)
            .iter()
            .map(canonical_encoding)
            .collect();
        v.sort();
        v
    }

    #[test]
    fn small_counts() {
        assert!(enumerate_trees(2, 1).is_empty());
        assert_eq!(enumerate_trees(2, 2).len(), 1);
        assert_eq!(enumerate_trees(2, 3).len(), 9);
        assert_eq!(encodings(0, 1), vec!["L1"]);
        for g in 1..5 {
            assert!(enumerate_trees(g, 1).is_empty());
        }
    }

    /// Strip leaf labels so that only shape and step labels remain.
    fn shape(enc: &str) -> String {
        let mut out = String::new();
        let mut after_leaf = false;
        for c in enc.chars() {
            if after_leaf && c.is_ascii_digit() {
                continue;
            }
            after_leaf = c == 'L';
            out.push(c);
        }
        out
    }

    #[test]
    fn genus_two_shapes() {
        assert_eq!(encodings(2, 2), vec!["U2(U4(B5(L1,L2)))"]);
        let e = encodings(2, 3);
        let mut shapes: Vec<String> = e.iter().map(|s| shape(s)).collect();
        shapes.dedup();
        assert_eq!(
            shapes,
            vec![
                "B1(L,U3(U5(B6(L,L))))",
                "U2(B3(L,U5(B6(L,L))))",
                "U2(U4(B5(B6(L,L),L)))"
            ]
        );
        for s in &shapes {
            assert_eq!(e.iter().filter(|x| shape(x) == *s).count(), 3);
        }
    }

    #[test]
    fn weights() {
        let t = DecoratedTree::from_encoding("U2(U4(B5(L1,L2)))").unwrap();
        assert_eq!(tree_weight(&t).unwrap(), q("1/640"));
        let t = DecoratedTree::from_encoding("U2(U4(B5(L3,B6(L1,L2))))").unwrap();
        assert_eq!(tree_weight(&t).unwrap(), q("1/810"));
        let t = DecoratedTree::from_encoding("L1").unwrap();
        assert_eq!(tree_weight(&t).unwrap(), ExactRational::one());
        let bad = DecoratedTree::from_encoding("U3(B3(L1,L2))").unwrap();
        assert!(tree_weight(&bad).is_err());
    }

    #[test]
    fn sums() {
        assert_eq!(tree_sum(2, 3), q("1/180"));
        assert_eq!(tree_sum(2, 2), q("1/640"));
        assert_eq!(tree_sum(1, 2), q("1/24"));
        assert!(tree_sum(2, 1).is_zero());
        for n in 1..=9 {
            assert_eq!(tree_sum(0, n), ExactRational::one(), "n = {n}");
        }
    }

    #[test]
    fn class_sum_matches_enumeration() {
        for g in 0..=3 {
            for n in 1..=6 {
                if 2 * g + n - 1 > 8 {
                    continue;
                }
                assert_eq!(tree_sum(g, n), tree_sum_by_enumeration(g, n), "g={g} n={n}");
                assert_eq!(count_histories(g, n), enumerate_trees(g, n).len() as u128);
            }
        }
    }

    #[test]
    fn encoding_rules() {
        assert_eq!(encodings(1, 2), vec!["U2(B3(L1,L2))"]);
        let a = DecoratedTree::new(0, 2, Node::binary(1, Node::leaf(2), Node::leaf(1)));
        let b = DecoratedTree::new(0, 2, Node::binary(1, Node::leaf(1), Node::leaf(2)));
        assert_eq!(canonical_encoding(&a), canonical_encoding(&b));
        assert_eq!(canonical_encoding(&a), "B1(L1,L2)");
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "X1", "L", "B1(L1)", "U2(L1", "L1,", "B1(L1,L2)x"] {
            assert!(DecoratedTree::from_encoding(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn validation_mutations() {
        let ok = DecoratedTree::from_encoding("U2(B3(L1,L2))").unwrap();
        assert_eq!(validate_tree(&ok), Ok(()));

        let root_cp = DecoratedTree::from_encoding("U3(B3(L1,L2))").unwrap();
        assert_eq!(
            validate_tree(&root_cp),
            Err(TreeViolation::CpNotInjective { cp: 3 })
        );

        let unary_leaf = DecoratedTree::from_encoding("B1(U3(L1),L2)").unwrap();
        assert_eq!(
            validate_tree(&unary_leaf),
            Err(TreeViolation::LeafParentNotBinary { nm: 1 })
        );

        let descent = DecoratedTree::from_encoding("B2(B1(L1,L2),L3)").unwrap();
        assert_eq!(
            validate_tree(&descent),
            Err(TreeViolation::Descent {
                parent: 2,
                child: 1
            })
        );
    }

    #[test]
    fn validation_other_rules() {
        let check = |s: &str, g: u32, n: u32| {
            validate_tree(&DecoratedTree::new(
                g,
                n,
                DecoratedTree::from_encoding(s).unwrap().root,
            ))
        };
        assert!(matches!(
            check("B1(L1,L2)", 0, 3),
            Err(TreeViolation::LeafCount { .. })
        ));
        assert!(matches!(
            check("B1(L1,L2)", 1, 2),
            Err(TreeViolation::UnaryCount { .. })
        ));
        assert_eq!(check("B1(L1,L1)", 0, 2), Err(TreeViolation::LeafLabels));
        assert_eq!(
            check("B2(L1,L2)", 0, 2),
            Err(TreeViolation::CpOutOfRange { cp: 2 })
        );
        assert_eq!(
            check("U2(U3(B5(L1,L2)))", 2, 2),
            Err(TreeViolation::UnarySkip { cp: 3 })
        );
        assert_eq!(
            check("U4(U2(B5(L1,L2)))", 2, 2),
            Err(TreeViolation::Descent {
                parent: 4,
                child: 2
            })
        );
        assert_eq!(
            check("B2(B3(L1,L2),L3)", 0, 3),
            Err(TreeViolation::CpOutOfRange { cp: 3 })
        );
        assert_eq!(check("B1(B2(L1,L2),L3)", 0, 3), Ok(()));
        assert_eq!(
            check("U4(B5(L1,L2))", 1, 2),
            Err(TreeViolation::CpOutOfRange { cp: 4 })
        );
    }

    #[test]
    fn every_generated_tree_is_valid() {
        for (g, n) in [(0, 5), (1, 4), (2, 3), (2, 4), (3, 3)] {
            for_each_tree(g, n, |t, h| {
                assert_eq!(validate_tree(t), Ok(()), "{t}");
                assert_eq!(history_of(t), h);
                match *t.root {
                    Node::Binary { cp, .. } => assert_eq!(cp, 1),
                    Node::Unary { cp, .. } => assert_eq!(cp, 2),
                    Node::Leaf { .. } => unreachable!(),
                }
            });
        }
    }

    #[test]
    fn orbit_check_agrees_with_explicit() {
        for (g, n) in [
            (0, 1),
            (0, 4),
            (0, 6),
            (1, 2),
            (1, 5),
            (2, 3),
            (2, 4),
            (3, 2),
        ] {
            let e = bijectivity_explicit(g, n);
            let o = bijectivity_orbit_reduced(g, n);
            assert!(e.ok && o.ok, "{e:?} {o:?}");
            assert_eq!(e.histories, o.histories);
        }
        let none = bijectivity_orbit_reduced(2, 1);
        assert_eq!(none.histories, 0);
        assert!(none.ok);
    }
}
