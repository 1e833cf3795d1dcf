use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::{split_grouplike, PreLieAlgebra};
use crate::error::{Error, Result};
use crate::rational::{parse_q, Q};
use crate::trees::{Label, Tree};

/// Generator symbol of the free pre-Lie algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator(Arc<str>);

impl Generator {
    pub fn new(symbol: &str) -> Result<Self> {
        Self::parse_label(symbol).ok_or_else(|| Error::parse(0, format!("invalid generator symbol `{symbol}`")))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Label for Generator {
    fn render(&self) -> String {
        self.0.to_string()
    }

    fn parse_label(token: &str) -> Option<Self> {
        let ok = !token.is_empty() && !token.chars().any(|c| c.is_whitespace() || c == '(' || c == ')');
        ok.then(|| Generator(Arc::from(token)))
    }
}

pub type LabeledTree = Tree<Generator>;

/// Element of the free pre-Lie algebra truncated at `order` vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TreeSeries {
    unit: Q,
    terms: BTreeMap<LabeledTree, Q>,
    order: usize,
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Q>, key: K, c: Q) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key);
    match entry {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl TreeSeries {
    pub fn zero(order: usize) -> Self {
        TreeSeries { unit: Q::zero(), terms: BTreeMap::new(), order }
    }

    pub fn unit(order: usize) -> Self {
        TreeSeries { unit: Q::one(), terms: BTreeMap::new(), order }
    }

    /// The one-vertex tree on `symbol`.
    ///
    /// # Panics
    /// If `symbol` contains whitespace or parentheses.
    pub fn generator(symbol: &str, order: usize) -> Self {
        let g = Generator::new(symbol).expect("invalid generator symbol");
        Self::from_terms(Q::zero(), [(Tree::leaf(g), Q::one())], order)
    }

    /// Sums the given terms, dropping trees above the truncation order.
    pub fn from_terms<I>(unit: Q, terms: I, order: usize) -> Self
    where
        I: IntoIterator<Item = (LabeledTree, Q)>,
    {
        let mut map = BTreeMap::new();
        for (t, c) in terms {
            if t.vertex_count() <= order {
                add_into(&mut map, t, c);
            }
        }
        TreeSeries { unit, terms: map, order }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn unit_coeff(&self) -> &Q {
        &self.unit
    }

    pub fn terms(&self) -> &BTreeMap<LabeledTree, Q> {
        &self.terms
    }

    pub fn coeff(&self, t: &LabeledTree) -> Q {
        self.terms.get(t).cloned().unwrap_or_else(Q::zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::Config(format!(
                "truncation orders differ ({} vs {})",
                self.order, other.order
            )));
        }
        Ok(())
    }

    /// Grafting product; fails on mismatched truncation orders.
    pub fn graft(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.star(other))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.plus(other))
    }

    pub fn brace(&self, args: &[Self]) -> Result<Self> {
        for a in args {
            self.check_order(a)?;
        }
        Ok(self.braces(args))
    }

    pub fn circle_checked(&self, g: &Self) -> Result<Self> {
        self.check_order(g)?;
        self.circle(g)
    }

    /// Parses the one-term-per-line text format. Blank lines and lines
    /// starting with `#` are skipped; trees above `order` are dropped.
    pub fn parse(text: &str, order: usize) -> Result<Self> {
        let mut unit = Q::zero();
        let mut terms = Vec::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let start = offset;
            offset += line.len();
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let lead = line.len() - line.trim_start().len();
            let (coef, rest) = trimmed.split_once(char::is_whitespace).ok_or_else(|| {
                Error::parse(start + lead, "expected `<rational> <tree>`")
            })?;
            let c = parse_q(coef).map_err(|_| Error::parse(start + lead, format!("invalid coefficient `{coef}`")))?;
            let rest_trim = rest.trim();
            let tree_pos = start + lead + coef.len() + 1 + (rest.len() - rest.trim_start().len());
            if rest_trim.replace(char::is_whitespace, "") == "()" {
                unit += c;
                continue;
            }
            let t = LabeledTree::parse(rest_trim).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::parse(tree_pos + pos, msg),
                other => other,
            })?;
            terms.push((t, c));
        }
        Ok(Self::from_terms(unit, terms, order))
    }

    /// Attaches the forests in `attach[v]` below vertex `v` of `sigma`.
    fn attach(sigma: &LabeledTree, attach: &[Vec<LabeledTree>]) -> LabeledTree {
        fn go(t: &LabeledTree, attach: &[Vec<LabeledTree>], next: &mut usize) -> LabeledTree {
            let v = *next;
            *next += 1;
            let mut children: Vec<LabeledTree> = t.children().iter().map(|c| go(c, attach, next)).collect();
            children.extend(attach[v].iter().cloned());
            Tree::new(t.label().clone(), children)
        }
        let mut next = 0;
        go(sigma, attach, &mut next)
    }

    /// Places, independently at each vertex of `sigma`, one of the weighted
    /// forests produced by `choices(v)`, keeping the result within `order`.
    fn distribute<F>(sigma: &LabeledTree, order: usize, choices: F) -> BTreeMap<LabeledTree, Q>
    where
        F: Fn(usize, usize) -> Vec<(Vec<LabeledTree>, usize, Q)>,
    {
        let n = sigma.vertex_count();
        let mut states: Vec<(Vec<Vec<LabeledTree>>, usize, Q)> = vec![(Vec::new(), n, Q::one())];
        for v in 0..n {
            let mut next = Vec::new();
            for (att, size, c) in &states {
                for (forest, fsize, fc) in choices(v, order - size) {
                    let mut a = att.clone();
                    a.push(forest);
                    next.push((a, size + fsize, c * &fc));
                }
            }
            states = next;
        }
        let mut out = BTreeMap::new();
        for (att, _, c) in states {
            add_into(&mut out, Self::attach(sigma, &att), c);
        }
        out
    }

    fn positive_terms(&self) -> impl Iterator<Item = (&LabeledTree, &Q)> {
        self.terms.iter()
    }
}

impl fmt::Display for TreeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.unit.is_zero() {
            writeln!(f, "{} ()", self.unit)?;
        }
        for (t, c) in &self.terms {
            writeln!(f, "{c} {t}")?;
        }
        Ok(())
    }
}

/// All ways of grafting `tau` onto single vertices of `sigma`, with
/// multiplicities.
fn graft_trees(sigma: &LabeledTree, tau: &LabeledTree) -> Vec<(LabeledTree, u64)> {
    let mut out = Vec::new();
    let mut kids = sigma.children().to_vec();
    kids.push(tau.clone());
    out.push((Tree::new(sigma.label().clone(), kids), 1));
    let children = sigma.children();
    let mut i = 0;
    while i < children.len() {
        let mut j = i;
        while j < children.len() && children[j] == children[i] {
            j += 1;
        }
        let run = (j - i) as u64;
        for (g, m) in graft_trees(&children[i], tau) {
            let mut kids = children.to_vec();
            kids[i] = g;
            out.push((Tree::new(sigma.label().clone(), kids), m * run));
        }
        i = j;
    }
    out
}

impl PreLieAlgebra for TreeSeries {
    fn star(&self, rhs: &Self) -> Self {
        debug_assert_eq!(self.order, rhs.order);
        let mut map = BTreeMap::new();
        if !self.unit.is_zero() {
            for (t, c) in &rhs.terms {
                add_into(&mut map, t.clone(), &self.unit * c);
            }
        }
        for (s, cs) in &self.terms {
            for (t, ct) in &rhs.terms {
                if s.vertex_count() + t.vertex_count() > self.order {
                    continue;
                }
                let c = cs * ct;
                for (g, m) in graft_trees(s, t) {
                    add_into(&mut map, g, &c * Q::from_integer(m.into()));
                }
            }
        }
        TreeSeries { unit: &self.unit * &rhs.unit, terms: map, order: self.order }
    }

    fn plus(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.unit += &rhs.unit;
        for (t, c) in &rhs.terms {
            add_into(&mut out.terms, t.clone(), c.clone());
        }
        out
    }

    fn scaled(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TreeSeries {
            unit: &self.unit * c,
            terms: self.terms.iter().map(|(t, x)| (t.clone(), x * c)).collect(),
            order: self.order,
        }
    }

    fn zero_like(&self) -> Self {
        Self::zero(self.order)
    }

    fn unit_like(&self) -> Self {
        Self::unit(self.order)
    }

    fn is_zero(&self) -> bool {
        self.unit.is_zero() && self.terms.is_empty()
    }

    fn max_weight(&self) -> usize {
        self.order
    }

    fn weight_part(&self, w: usize) -> Self {
        if w == 0 {
            return TreeSeries { unit: self.unit.clone(), terms: BTreeMap::new(), order: self.order };
        }
        TreeSeries {
            unit: Q::zero(),
            terms: self.terms.iter().filter(|(t, _)| t.vertex_count() == w).map(|(t, c)| (t.clone(), c.clone())).collect(),
            order: self.order,
        }
    }

    /// Direct multi-grafting: every argument's root is attached to some
    /// vertex of each tree of `self`. Agrees with the brace recursion on
    /// arguments without unit part.
    fn braces(&self, args: &[Self]) -> Self {
        let order = self.order;
        let mut out = match args {
            [] => self.unit.clone(),
            _ => Q::zero(),
        };
        let mut map = BTreeMap::new();
        if !self.unit.is_zero() {
            match args {
                [] => {}
                [b] => {
                    out = &self.unit * &b.unit;
                    for (t, c) in &b.terms {
                        add_into(&mut map, t.clone(), &self.unit * c);
                    }
                }
                _ => {}
            }
        }
        for (sigma, cs) in &self.terms {
            let n = sigma.vertex_count();
            // states: attachments per vertex (sorted), keyed canonically
            let mut states: BTreeMap<(Vec<Vec<LabeledTree>>, usize), Q> = BTreeMap::new();
            states.insert((vec![Vec::new(); n], n), cs.clone());
            for arg in args {
                let mut next = BTreeMap::new();
                for ((att, size), c) in &states {
                    for (tau, ct) in arg.positive_terms() {
                        let s = size + tau.vertex_count();
                        if s > order {
                            continue;
                        }
                        let c2 = c * ct;
                        for v in 0..n {
                            let mut a = att.clone();
                            let pos = a[v].binary_search(tau).unwrap_or_else(|p| p);
                            a[v].insert(pos, tau.clone());
                            add_into(&mut next, (a, s), c2.clone());
                        }
                    }
                }
                states = next;
            }
            for ((att, _), c) in states {
                add_into(&mut map, Self::attach(sigma, &att), c);
            }
        }
        TreeSeries { unit: out, terms: map, order }
    }

    /// `a ⊛ (1+b)`: each vertex of each tree of `a` independently receives
    /// a forest `F` from `exp(b) = sum_m b^m/m!` taken in the symmetric
    /// algebra of forests.
    fn circle(&self, g: &Self) -> Result<Self> {
        let b = split_grouplike(g)?;
        let order = self.order;
        // forests of b-trees with coefficient prod c / prod mult!
        let mut forests: BTreeMap<Vec<LabeledTree>, Q> = BTreeMap::new();
        forests.insert(Vec::new(), Q::one());
        let mut layer = forests.clone();
        for m in 1..order {
            let mut next = BTreeMap::new();
            for (f, c) in &layer {
                let size: usize = f.iter().map(Tree::vertex_count).sum();
                for (t, ct) in &b.terms {
                    if size + t.vertex_count() > order - 1 {
                        continue;
                    }
                    let mut f2 = f.clone();
                    let pos = f2.binary_search(t).unwrap_or_else(|p| p);
                    f2.insert(pos, t.clone());
                    add_into(&mut next, f2, c * ct / Q::from_integer((m as i64).into()));
                }
            }
            if next.is_empty() {
                break;
            }
            for (f, c) in &next {
                add_into(&mut forests, f.clone(), c.clone());
            }
            layer = next;
        }
        let forests: Vec<(Vec<LabeledTree>, usize, Q)> = forests
            .into_iter()
            .map(|(f, c)| {
                let s = f.iter().map(Tree::vertex_count).sum();
                (f, s, c)
            })
            .collect();
        let mut out = g.scaled(&self.unit);
        for (sigma, cs) in &self.terms {
            let placed = Self::distribute(sigma, order, |_, budget| {
                forests.iter().filter(|(_, s, _)| *s <= budget).cloned().collect()
            });
            for (t, c) in placed {
                add_into(&mut out.terms, t, c * cs);
            }
        }
        Ok(out)
    }
}
