//! Rooted trees and forests in canonical form.
//!
//! A tree is a labelled root together with a sorted multiset of child
//! subtrees. Children are kept in ascending canonical order, so two trees are
//! isomorphic (respecting labels) exactly when they are structurally equal.
//! Unlabelled trees use the unit label `()`, rendered as `*`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};
use crate::rational::{one, q, Q};

/// Default upper bound on the vertex count accepted by [`enumerate_trees`].
pub const DEFAULT_MAX_VERTICES: usize = 10;

/// Vertex label that can be written to and read from the text encoding.
pub trait Label: Clone + Ord + Hash + fmt::Debug {
    fn render(&self) -> String;
    fn parse_label(token: &str) -> Option<Self>;
}

impl Label for () {
    fn render(&self) -> String {
        "*".to_string()
    }

    fn parse_label(token: &str) -> Option<Self> {
        (token == "*").then_some(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Tree<L> {
    label: L,
    children: Vec<Tree<L>>,
    size: usize,
}

/// Unlabelled rooted tree.
pub type RootedTree = Tree<()>;

impl<L: Ord> Ord for Tree<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| self.label.cmp(&other.label))
            .then_with(|| self.children.cmp(&other.children))
    }
}

impl<L: Ord> PartialOrd for Tree<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Clone + Ord> Tree<L> {
    pub fn leaf(label: L) -> Self {
        Tree { label, children: Vec::new(), size: 1 }
    }

    pub fn new(label: L, mut children: Vec<Tree<L>>) -> Self {
        children.sort();
        let size = 1 + children.iter().map(|c| c.size).sum::<usize>();
        Tree { label, children, size }
    }

    pub fn label(&self) -> &L {
        &self.label
    }

    pub fn children(&self) -> &[Tree<L>] {
        &self.children
    }

    pub fn vertex_count(&self) -> usize {
        self.size
    }

    /// Unlabelled shape of this tree.
    pub fn shape(&self) -> RootedTree {
        Tree::new((), self.children.iter().map(Tree::shape).collect())
    }

    /// Labels in preorder (root first, children in canonical order).
    pub fn labels_preorder(&self) -> Vec<L> {
        let mut out = Vec::with_capacity(self.size);
        fn walk<L: Clone>(t: &Tree<L>, out: &mut Vec<L>) {
            out.push(t.label.clone());
            for c in &t.children {
                walk(c, out);
            }
        }
        walk(self, &mut out);
        out
    }

    /// Order of the (label-respecting) automorphism group.
    pub fn aut_order(&self) -> u64 {
        self.children.iter().map(Tree::aut_order).product::<u64>() * multiplicity_factor(&self.children)
    }

    /// Number of linear extensions of the ancestry order with vertices
    /// distinguished: `n! / prod(subtree sizes)`.
    pub fn linear_extension_count(&self) -> u64 {
        fn hooks<L>(t: &Tree<L>) -> u64 {
            t.size as u64 * t.children.iter().map(hooks).product::<u64>()
        }
        (1..=self.size as u64).product::<u64>() / hooks(self)
    }

    /// Flattens into a parent array in preorder; vertex 0 is the root.
    pub fn to_arena(&self) -> Arena<L> {
        let mut arena = Arena { labels: Vec::new(), parents: Vec::new() };
        arena.push_tree(self, None);
        arena
    }

    /// Canonical text form, e.g. `(a (b) (b (c)))`.
    pub fn encode(&self) -> String
    where
        L: Label,
    {
        let mut s = String::new();
        self.write_encoding(&mut s);
        s
    }

    fn write_encoding(&self, out: &mut String)
    where
        L: Label,
    {
        out.push('(');
        out.push_str(&self.label.render());
        for c in &self.children {
            out.push(' ');
            c.write_encoding(out);
        }
        out.push(')');
    }

    /// Parses the text form; children may appear in any order.
    pub fn parse(text: &str) -> Result<Self>
    where
        L: Label,
    {
        let mut p = TreeParser { src: text.as_bytes(), pos: 0 };
        p.skip_ws();
        let t = p.tree::<L>()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, "trailing input after tree"));
        }
        Ok(t)
    }
}

impl<L: Label> fmt::Display for Tree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// `prod m!` over runs of equal elements in a sorted slice.
fn multiplicity_factor<T: PartialEq>(sorted: &[T]) -> u64 {
    let mut acc = 1u64;
    let mut run = 0u64;
    for (i, x) in sorted.iter().enumerate() {
        if i > 0 && sorted[i - 1] == *x {
            run += 1;
        } else {
            run = 1;
        }
        acc *= run;
    }
    acc
}

pub(crate) struct TreeParser<'a> {
    pub(crate) src: &'a [u8],
    pub(crate) pos: usize,
}

impl TreeParser<'_> {
    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn tree<L: Label>(&mut self) -> Result<Tree<L>> {
        self.skip_ws();
        if self.src.get(self.pos) != Some(&b'(') {
            return Err(Error::parse(self.pos, "expected `(`"));
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            if c.is_ascii_whitespace() || c == b'(' || c == b')' {
                break;
            }
            self.pos += 1;
        }
        let token = std::str::from_utf8(&self.src[start..self.pos])
            .map_err(|_| Error::parse(start, "label is not valid UTF-8"))?;
        if token.is_empty() {
            return Err(Error::parse(start, "missing vertex label"));
        }
        let label = L::parse_label(token).ok_or_else(|| Error::parse(start, format!("invalid label `{token}`")))?;
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.src.get(self.pos) {
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                Some(b'(') => children.push(self.tree::<L>()?),
                Some(_) => return Err(Error::parse(self.pos, "expected `(` or `)`")),
                None => return Err(Error::parse(self.pos, "unterminated tree")),
            }
        }
        Ok(Tree::new(label, children))
    }
}

/// Parent-array view of a tree or forest; used for grafting and levelizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arena<L> {
    pub labels: Vec<L>,
    pub parents: Vec<Option<usize>>,
}

impl<L: Clone + Ord> Arena<L> {
    fn push_tree(&mut self, t: &Tree<L>, parent: Option<usize>) {
        let id = self.labels.len();
        self.labels.push(t.label.clone());
        self.parents.push(parent);
        for c in &t.children {
            self.push_tree(c, Some(id));
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.parents[v].is_none()).collect()
    }

    fn child_lists(&self) -> Vec<Vec<usize>> {
        let mut ch = vec![Vec::new(); self.len()];
        for (v, p) in self.parents.iter().enumerate() {
            if let Some(p) = p {
                ch[*p].push(v);
            }
        }
        ch
    }

    /// Rebuilds canonical trees, one per root.
    pub fn to_forest(&self) -> Forest<L> {
        let ch = self.child_lists();
        fn build<L: Clone + Ord>(v: usize, a: &Arena<L>, ch: &[Vec<usize>]) -> Tree<L> {
            Tree::new(a.labels[v].clone(), ch[v].iter().map(|&c| build(c, a, ch)).collect())
        }
        Forest::new(self.roots().into_iter().map(|r| build(r, self, &ch)).collect())
    }

    /// Same arena with each label replaced by `f(vertex, label)`.
    pub fn relabel<M, F: Fn(usize, &L) -> M>(&self, f: F) -> Arena<M> {
        Arena {
            labels: self.labels.iter().enumerate().map(|(v, l)| f(v, l)).collect(),
            parents: self.parents.clone(),
        }
    }
}

/// Multiset of trees in canonical order. The empty forest is allowed.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Forest<L = ()> {
    trees: Vec<Tree<L>>,
}

impl<L: Ord> Ord for Forest<L> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.trees.cmp(&other.trees)
    }
}

impl<L: Ord> PartialOrd for Forest<L> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<L: Clone + Ord> Forest<L> {
    pub fn new(mut trees: Vec<Tree<L>>) -> Self {
        trees.sort();
        Forest { trees }
    }

    pub fn single(t: Tree<L>) -> Self {
        Forest { trees: vec![t] }
    }

    pub fn trees(&self) -> &[Tree<L>] {
        &self.trees
    }

    pub fn vertex_count(&self) -> usize {
        self.trees.iter().map(Tree::vertex_count).sum()
    }

    /// `|Aut f|`, including the permutations of identical components.
    pub fn aut_order(&self) -> u64 {
        self.trees.iter().map(Tree::aut_order).product::<u64>() * multiplicity_factor(&self.trees)
    }

    pub fn to_arena(&self) -> Arena<L> {
        let mut arena = Arena { labels: Vec::new(), parents: Vec::new() };
        for t in &self.trees {
            arena.push_tree(t, None);
        }
        arena
    }
}

/// Placement of a forest's vertices on distinct levels, top level first,
/// with every vertex strictly above its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Levelization {
    parents: Vec<Option<usize>>,
    order: Vec<usize>,
}

impl Levelization {
    /// Checks that `order` is a linear extension of the ancestry order given
    /// by `parents`, children placed before their parents.
    pub fn new(parents: Vec<Option<usize>>, order: Vec<usize>) -> Result<Self> {
        let n = parents.len();
        if order.len() != n {
            return Err(Error::Validation(format!("levelization has {} levels for {} vertices", order.len(), n)));
        }
        let mut level = vec![usize::MAX; n];
        for (lv, &v) in order.iter().enumerate() {
            if v >= n || level[v] != usize::MAX {
                return Err(Error::Validation(format!("vertex {v} missing or repeated")));
            }
            level[v] = lv;
        }
        for (v, p) in parents.iter().enumerate() {
            match p {
                Some(p) if *p >= n => return Err(Error::Validation(format!("vertex {v} has unknown parent {p}"))),
                Some(p) if level[v] >= level[*p] => {
                    return Err(Error::Validation(format!("vertex {v} is not above its parent {p}")))
                }
                _ => {}
            }
        }
        Ok(Levelization { parents, order })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parents
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Level index of every vertex (0 = top).
    pub fn levels(&self) -> Vec<usize> {
        let mut level = vec![0; self.order.len()];
        for (lv, &v) in self.order.iter().enumerate() {
            level[v] = lv;
        }
        level
    }

    /// Strand counts for each gap below a level, top gap first. Every root
    /// carries a stem down to the ground below the lowest level.
    pub fn gap_strands(&self) -> Vec<usize> {
        let level = self.levels();
        let n = self.order.len();
        (0..n)
            .map(|gap| {
                self.parents
                    .iter()
                    .enumerate()
                    .filter(|&(v, p)| level[v] <= gap && p.is_none_or(|p| gap < level[p]))
                    .count()
            })
            .collect()
    }
}

/// Weight of a levelization: product over the gaps of one over the number of
/// strands crossing the gap.
pub fn level_weight(lev: &Levelization) -> Result<Q> {
    let lev = Levelization::new(lev.parents.clone(), lev.order.clone())?;
    let mut w = one();
    for s in lev.gap_strands() {
        w /= q(s as i64);
    }
    Ok(w)
}

/// All levelizations of a forest, counted up to automorphisms of the forest:
/// two linear extensions that differ by an automorphism give the same leveled
/// picture and are listed once. Deterministic order.
pub fn levelizations<L: Clone + Ord + Hash>(forest: &Forest<L>) -> Vec<Levelization> {
    let arena = forest.to_arena();
    let n = arena.len();
    if n == 0 {
        return Vec::new();
    }
    let children = arena.child_lists();
    let mut remaining_children: Vec<usize> = children.iter().map(Vec::len).collect();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut seen: BTreeSet<Forest<(L, usize)>> = BTreeSet::new();
    let mut out = Vec::new();

    #[allow(clippy::too_many_arguments)]
    fn rec<L: Clone + Ord>(
        arena: &Arena<L>,
        remaining: &mut Vec<usize>,
        placed: &mut Vec<bool>,
        order: &mut Vec<usize>,
        seen: &mut BTreeSet<Forest<(L, usize)>>,
        out: &mut Vec<Levelization>,
    ) {
        let n = arena.len();
        if order.len() == n {
            let lev = Levelization { parents: arena.parents.clone(), order: order.clone() };
            let levels = lev.levels();
            let key = arena.relabel(|v, l| (l.clone(), levels[v])).to_forest();
            if seen.insert(key) {
                out.push(lev);
            }
            return;
        }
        for v in 0..n {
            if placed[v] || remaining[v] != 0 {
                continue;
            }
            placed[v] = true;
            order.push(v);
            if let Some(p) = arena.parents[v] {
                remaining[p] -= 1;
            }
            rec(arena, remaining, placed, order, seen, out);
            if let Some(p) = arena.parents[v] {
                remaining[p] += 1;
            }
            order.pop();
            placed[v] = false;
        }
    }

    rec(&arena, &mut remaining_children, &mut placed, &mut order, &mut seen, &mut out);
    out
}

/// Connes–Moscovici weight `n_t`: the number of levelizations of `t` up to
/// automorphism, equal to `|t|! / (prod subtree sizes * |Aut t|)`.
pub fn cm_weight<L: Clone + Ord>(t: &Tree<L>) -> u64 {
    t.linear_extension_count() / t.aut_order()
}

/// All unlabelled rooted trees with `n` vertices, canonical and sorted.
pub fn enumerate_trees(n: usize) -> Result<Vec<RootedTree>> {
    enumerate_trees_bounded(n, DEFAULT_MAX_VERTICES)
}

pub fn enumerate_trees_bounded(n: usize, max: usize) -> Result<Vec<RootedTree>> {
    if n == 0 || n > max {
        return Err(Error::Bounds(format!("tree size {n} outside 1..={max}")));
    }
    Ok(TreeTable::up_to(n).by_size.swap_remove(n))
}

/// All forests with exactly `n` vertices (`n = 0` gives the empty forest).
pub fn enumerate_forests(n: usize) -> Result<Vec<Forest>> {
    if n + 1 > DEFAULT_MAX_VERTICES + 1 {
        return Err(Error::Bounds(format!("forest size {n} above {}", DEFAULT_MAX_VERTICES)));
    }
    let mut out: Vec<Forest> =
        TreeTable::up_to(n + 1).by_size[n + 1].iter().map(|t| Forest::new(t.children.clone())).collect();
    out.sort();
    Ok(out)
}

struct TreeTable {
    by_size: Vec<Vec<RootedTree>>,
}

impl TreeTable {
    fn up_to(n: usize) -> Self {
        let mut by_size: Vec<Vec<RootedTree>> = vec![Vec::new(); n + 1];
        for size in 1..=n {
            // flat list of all smaller trees in canonical order
            let pool: Vec<&RootedTree> = by_size[1..size].iter().flatten().collect();
            let mut acc = Vec::new();
            let mut chosen: Vec<RootedTree> = Vec::new();
            fn multisets(
                pool: &[&RootedTree],
                start: usize,
                remaining: usize,
                chosen: &mut Vec<RootedTree>,
                acc: &mut Vec<RootedTree>,
            ) {
                if remaining == 0 {
                    acc.push(Tree::new((), chosen.clone()));
                    return;
                }
                for i in start..pool.len() {
                    let s = pool[i].size;
                    if s > remaining {
                        // pool is sorted by size first
                        break;
                    }
                    chosen.push(pool[i].clone());
                    multisets(pool, i, remaining - s, chosen, acc);
                    chosen.pop();
                }
            }
            multisets(&pool, 0, size - 1, &mut chosen, &mut acc);
            acc.sort();
            by_size[size] = acc;
        }
        TreeTable { by_size }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn t(s: &str) -> RootedTree {
        RootedTree::parse(s).unwrap()
    }

    fn four_vertex_tree() -> RootedTree {
        t("(* (*) (* (*)))")
    }

    #[test]
    fn counts_small_sizes() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_trees(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
        assert_eq!(enumerate_trees(1).unwrap(), vec![RootedTree::leaf(())]);
    }

    #[test]
    fn size_bounds_are_enforced() {
        assert!(matches!(enumerate_trees(0), Err(Error::Bounds(_))));
        assert!(matches!(enumerate_trees(11), Err(Error::Bounds(_))));
        assert_eq!(enumerate_trees_bounded(11, 11).unwrap().len(), 1842);
    }

    #[test]
    fn ten_vertex_count() {
        assert_eq!(enumerate_trees(10).unwrap().len(), 719);
    }

    #[test]
    fn automorphisms() {
        assert_eq!(RootedTree::leaf(()).aut_order(), 1);
        assert_eq!(t("(* (*) (*) (*))").aut_order(), 6);
        assert_eq!(four_vertex_tree().aut_order(), 1);
        let pair = Forest::new(vec![t("(* (*) (*))"), t("(* (*) (*))")]);
        assert_eq!(pair.aut_order(), 2 * 2 * 2);
    }

    #[test]
    fn levelization_counts() {
        assert_eq!(levelizations(&Forest::single(four_vertex_tree())).len(), 3);
        assert_eq!(levelizations(&Forest::single(t("(* (* (* (*))))"))).len(), 1);
        // the two leaves of a cherry are interchangeable
        assert_eq!(levelizations(&Forest::single(t("(* (*) (*))"))).len(), 1);
        assert!(levelizations(&Forest::<()>::new(vec![])).is_empty());
        assert_eq!(cm_weight(&four_vertex_tree()), 3);
        assert_eq!(cm_weight(&t("(* (*) (*) (*))")), 1);
        assert_eq!(cm_weight(&RootedTree::leaf(())), 1);
    }

    #[test]
    fn worked_weights() {
        // vertices in preorder: root 0, leaf 1, chain base 2, chain top 3
        let parents = vec![None, Some(0), Some(0), Some(2)];
        let lev = Levelization::new(parents, vec![3, 1, 2, 0]).unwrap();
        assert_eq!(level_weight(&lev).unwrap(), frac(1, 4));

        // forest: cherry (0; 1, 2) and an isolated vertex 3
        let parents = vec![None, Some(0), Some(0), None];
        let lev = Levelization::new(parents, vec![1, 3, 2, 0]).unwrap();
        assert_eq!(level_weight(&lev).unwrap(), frac(1, 12));

        let chain = t("(* (* (* (* (*)))))");
        for lev in levelizations(&Forest::single(chain)) {
            assert_eq!(level_weight(&lev).unwrap(), one());
        }
    }

    #[test]
    fn invalid_levelizations_are_rejected() {
        let parents = vec![None, Some(0)];
        assert!(Levelization::new(parents.clone(), vec![0, 1]).is_err());
        assert!(Levelization::new(parents.clone(), vec![1]).is_err());
        assert!(Levelization::new(parents, vec![1, 1]).is_err());
    }

    #[test]
    fn text_round_trip_canonicalizes() {
        let a = t("(* (* (*)) (*))");
        assert_eq!(a.encode(), "(* (*) (* (*)))");
        assert_eq!(t(&a.encode()), a);
        assert!(RootedTree::parse("(* (*)").is_err());
        assert!(RootedTree::parse("(x)").is_err());
        assert!(RootedTree::parse("(*) extra").is_err());
    }

    #[test]
    fn forests_are_children_of_trees() {
        let counts: Vec<usize> = (0..=4).map(|n| enumerate_forests(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9]);
    }
}
