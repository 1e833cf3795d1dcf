//! Pre-Lie calculus over any weight-graded left-unital pre-Lie algebra, and
//! its free instance on rooted trees ([`TreeSeries`]).
//!
//! The generic operations (braces, circle product, exponential, Magnus
//! logarithm, BCH, gauge action, tree evaluation) are written once against
//! [`PreLieAlgebra`] and reused by the convolution algebra in [`crate::ainf`].

mod series;

pub use series::{Generator, LabeledTree, TreeSeries};

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::rational::{factorial, one, Q};
use crate::trees::{enumerate_trees_bounded, Label, Tree};

/// A left-unital pre-Lie algebra `A = prod_n A^(n)` truncated at a finite
/// weight, with `A^(n) * A^(m)` landing in `A^(n+m)`.
///
/// Binary operations assume both operands share the same truncation.
pub trait PreLieAlgebra: Clone + PartialEq + Debug {
    fn star(&self, rhs: &Self) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn scaled(&self, c: &Q) -> Self;
    fn zero_like(&self) -> Self;
    /// The left unit `1`, of weight zero.
    fn unit_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    /// Highest weight kept by the truncation.
    fn max_weight(&self) -> usize;
    fn weight_part(&self, w: usize) -> Self;

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.scaled(&-one()))
    }

    /// Part of weight at most `w`.
    fn truncated_to(&self, w: usize) -> Self {
        (0..=w.min(self.max_weight())).fold(self.zero_like(), |acc, k| acc.plus(&self.weight_part(k)))
    }

    /// Symmetric braces `{self; args..}`.
    fn braces(&self, args: &[Self]) -> Self {
        brace(self, args)
    }

    /// Circle product `self ⊛ g` for group-like `g`.
    fn circle(&self, g: &Self) -> Result<Self> {
        circle_by_braces(self, g)
    }
}

/// `{a; b1..bn}` by the defining recursion
/// `{{a; b1..b(n-1)}; bn} - sum_i {a; b1..{bi; bn}..b(n-1)}`.
pub fn brace<A: PreLieAlgebra>(a: &A, args: &[A]) -> A {
    match args {
        [] => a.clone(),
        [b] => a.star(b),
        [init @ .., last] => {
            let mut acc = brace(&brace(a, init), std::slice::from_ref(last));
            for i in 0..init.len() {
                let mut inner = init.to_vec();
                inner[i] = init[i].star(last);
                acc = acc.minus(&brace(a, &inner));
            }
            acc
        }
    }
}

pub(crate) fn split_grouplike<A: PreLieAlgebra>(g: &A) -> Result<A> {
    let unit = g.unit_like();
    if g.weight_part(0) != unit {
        return Err(Error::Domain("expected a group-like element (weight-zero part equal to 1)".into()));
    }
    Ok(g.minus(&unit))
}

/// `a ⊛ (1+b) = sum_n (1/n!) {a; b,..,b}`.
pub fn circle_by_braces<A: PreLieAlgebra>(a: &A, g: &A) -> Result<A> {
    let b = split_grouplike(g)?;
    let mut acc = a.clone();
    let mut args: Vec<A> = Vec::new();
    for n in 1..=a.max_weight() {
        args.push(b.clone());
        let term = a.braces(&args);
        if term.is_zero() && n > a.max_weight() {
            break;
        }
        acc = acc.plus(&term.scaled(&(one() / factorial(n))));
    }
    Ok(acc)
}

/// `a ⊛ (1+b; c) = sum_n (1/n!) {a; b,..,b, c}`.
pub fn circle_pointed<A: PreLieAlgebra>(a: &A, g: &A, c: &A) -> Result<A> {
    let b = split_grouplike(g)?;
    let mut acc = a.zero_like();
    let mut args: Vec<A> = vec![c.clone()];
    for n in 0..=a.max_weight() {
        if n > 0 {
            args.insert(0, b.clone());
        }
        acc = acc.plus(&a.braces(&args).scaled(&(one() / factorial(n))));
    }
    Ok(acc)
}

fn require_positive_weight<A: PreLieAlgebra>(x: &A, what: &str) -> Result<()> {
    if !x.weight_part(0).is_zero() {
        return Err(Error::Domain(format!("{what} must have zero weight-zero component")));
    }
    Ok(())
}

/// Pre-Lie exponential `1 + λ + λ^2/2! + ...` with right-iterated powers
/// `λ^(k+1) = λ^k * λ`.
pub fn exp<A: PreLieAlgebra>(lambda: &A) -> Result<A> {
    require_positive_weight(lambda, "exponent")?;
    let mut acc = lambda.unit_like().plus(lambda);
    let mut power = lambda.clone();
    for k in 2..=lambda.max_weight() {
        power = power.star(lambda);
        if power.is_zero() {
            break;
        }
        acc = acc.plus(&power.scaled(&(one() / factorial(k))));
    }
    Ok(acc)
}

/// Pre-Lie Magnus expansion: the unique `λ` of positive weight with
/// `exp(λ) = 1 + a`, solved one weight at a time.
pub fn magnus<A: PreLieAlgebra>(a: &A) -> Result<A> {
    require_positive_weight(a, "Magnus argument")?;
    let mut lambda = a.zero_like();
    for n in 1..=a.max_weight() {
        let current = exp(&lambda)?.weight_part(n);
        lambda = lambda.plus(&a.weight_part(n).minus(&current));
    }
    Ok(lambda)
}

/// Lie bracket `x*y - y*x` (degree-zero elements).
pub fn bracket<A: PreLieAlgebra>(x: &A, y: &A) -> A {
    x.star(y).minus(&y.star(x))
}

/// `ln(e^x ⊛ e^y)`, the Baker–Campbell–Hausdorff product.
pub fn bch<A: PreLieAlgebra>(x: &A, y: &A) -> Result<A> {
    let g = exp(x)?.circle(&exp(y)?)?;
    magnus(&g.minus(&g.unit_like()))
}

/// Gauge action `(e^λ * α) ⊛ e^(-λ)`.
pub fn gauge_act<A: PreLieAlgebra>(lambda: &A, alpha: &A) -> Result<A> {
    let e = exp(lambda)?;
    let e_inv = exp(&lambda.scaled(&-one()))?;
    e.star(alpha).circle(&e_inv)
}

/// Truncated `e^(ad_λ)(α) = sum_k ad_λ^k(α)/k!`.
pub fn exp_ad<A: PreLieAlgebra>(lambda: &A, alpha: &A) -> A {
    let mut acc = alpha.clone();
    let mut term = alpha.clone();
    for k in 1..=alpha.max_weight() {
        term = bracket(lambda, &term);
        acc = acc.plus(&term.scaled(&(one() / factorial(k))));
    }
    acc
}

/// Inverse of a group-like element for ⊛, solving `x ⊛ g = 1` weight by
/// weight.
pub fn circle_inverse<A: PreLieAlgebra>(g: &A) -> Result<A> {
    split_grouplike(g)?;
    let mut x = g.unit_like();
    for n in 1..=g.max_weight() {
        let r = x.circle(g)?.weight_part(n);
        x = x.minus(&r);
    }
    Ok(x)
}

/// `(1-μ)^(⊛-1) = sum_t t(μ)/|Aut t|` over unlabelled rooted trees,
/// checked against [`circle_inverse`].
pub fn grouplike_inverse<A: PreLieAlgebra>(g: &A) -> Result<A> {
    let mu = split_grouplike(g)?.scaled(&-one());
    let mut acc = g.unit_like();
    for n in 1..=g.max_weight() {
        for t in enumerate_trees_bounded(n, n)? {
            let term: A = eval_tree(&t, &|_: &()| Some(mu.clone()))?;
            acc = acc.plus(&term.scaled(&(one() / Q::from_integer(t.aut_order().into()))));
        }
    }
    let solved = circle_inverse(g)?;
    if solved != acc {
        return Err(Error::CrossCheck("tree-sum inverse disagrees with the solved inverse".into()));
    }
    Ok(acc)
}

/// Image of a tree monomial: a vertex with children `s1..sk` evaluates to
/// `{value(vertex); eval(s1),..,eval(sk)}`.
pub fn eval_tree<L, A, F>(t: &Tree<L>, value: &F) -> Result<A>
where
    L: Label,
    A: PreLieAlgebra,
    F: Fn(&L) -> Option<A>,
{
    let root = value(t.label()).ok_or_else(|| Error::Lookup(t.label().render()))?;
    let args = t.children().iter().map(|c| eval_tree(c, value)).collect::<Result<Vec<_>>>()?;
    Ok(root.braces(&args))
}
