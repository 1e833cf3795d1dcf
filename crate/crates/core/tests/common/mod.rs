#![allow(dead_code)]

use prelie::prelie_series::{Generator, LabeledTree, TreeSeries};
use prelie::rational::{frac, Q};
use prelie::trees::{Label, RootedTree, Tree};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_q(rng: &mut ChaCha8Rng) -> Q {
    let num = loop {
        let n: i64 = rng.gen_range(-3..=3);
        if n != 0 {
            break n;
        }
    };
    frac(num, rng.gen_range(1..=3))
}

fn build(v: usize, kids: &[Vec<usize>], labels: &[Generator]) -> LabeledTree {
    Tree::new(labels[v].clone(), kids[v].iter().map(|&c| build(c, kids, labels)).collect())
}

/// Uniform random recursive tree on `n` vertices with random labels.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize, alphabet: &[&str]) -> LabeledTree {
    let mut kids = vec![Vec::new(); n];
    for i in 1..n {
        let p = rng.gen_range(0..i);
        kids[p].push(i);
    }
    let labels: Vec<Generator> = (0..n)
        .map(|_| Generator::parse_label(alphabet[rng.gen_range(0..alphabet.len())]).unwrap())
        .collect();
    build(0, &kids, &labels)
}

/// Random series with `terms` trees of 1..=max_size vertices and no unit part.
pub fn random_series(rng: &mut ChaCha8Rng, order: usize, max_size: usize, terms: usize, alphabet: &[&str]) -> TreeSeries {
    let ts: Vec<(LabeledTree, Q)> = (0..terms)
        .map(|_| {
            let n = rng.gen_range(1..=max_size.min(order));
            (random_tree(rng, n, alphabet), small_q(rng))
        })
        .collect();
    TreeSeries::from_terms(Q::from_integer(0.into()), ts, order)
}

pub fn label_shape(t: &RootedTree, symbol: &str) -> LabeledTree {
    let g = Generator::parse_label(symbol).unwrap();
    fn go(t: &RootedTree, g: &Generator) -> LabeledTree {
        Tree::new(g.clone(), t.children().iter().map(|c| go(c, g)).collect())
    }
    go(t, &g)
}

use prelie::graded::GradedSpace;
use prelie::linalg::Matrix;

/// Random homogeneous map of `degree`, each allowed entry nonzero with
/// probability `density`.
pub fn random_graded_map(
    rng: &mut ChaCha8Rng,
    source: &GradedSpace,
    target: &GradedSpace,
    degree: i64,
    density: f64,
) -> Matrix {
    let sd = source.basis_degrees();
    let td = target.basis_degrees();
    let mut m = Matrix::zeros(td.len(), sd.len());
    for (r, rd) in td.iter().enumerate() {
        for (c, cd) in sd.iter().enumerate() {
            if *rd == cd + degree && rng.gen_bool(density) {
                m.set(r, c, small_q(rng));
            }
        }
    }
    m
}

/// Random degree-preserving automorphism (unitriangular times diagonal per degree).
pub fn random_automorphism(rng: &mut ChaCha8Rng, space: &GradedSpace) -> Matrix {
    let degs = space.basis_degrees();
    let n = degs.len();
    let mut m = Matrix::identity(n);
    for r in 0..n {
        let d: i64 = [1, 2, -1, 3][rng.gen_range(0..4)];
        m.set(r, r, Q::from_integer(d.into()));
        for c in r + 1..n {
            if degs[r] == degs[c] && rng.gen_bool(0.6) {
                m.set(r, c, small_q(rng));
            }
        }
    }
    let mut p = Matrix::identity(n);
    for r in 0..n {
        for c in 0..r {
            if degs[r] == degs[c] && rng.gen_bool(0.5) {
                p.set(r, c, small_q(rng));
            }
        }
    }
    p.mul(&m)
}

use prelie::ainf::{json as ajson, ConvElement, MultiOp, Space};
use prelie::contraction::Contraction;
use prelie::json::parse_document;

pub fn fixture(name: &str) -> String {
    let path = format!("{}/tests/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

/// A structure fixture and its contraction.
pub fn ainf_fixture(name: &str) -> (ConvElement, Contraction) {
    let alpha = ajson::element_from_json(&parse_document(&fixture(name)).unwrap(), -1, "structure").unwrap();
    let c = ajson::contraction_from_json(&parse_document(&fixture(&format!("{name}_contraction"))).unwrap(), &alpha)
        .unwrap();
    (alpha, c)
}

pub fn with_truncation(alpha: &ConvElement, a: usize) -> ConvElement {
    let ops = alpha.components().iter().take(a).cloned().collect();
    ConvElement::from_ops(alpha.source().clone(), alpha.target().clone(), alpha.degree(), a, ops).unwrap()
}

/// Random homogeneous multilinear map on `sV`.
pub fn random_op(rng: &mut ChaCha8Rng, space: &Space, arity: usize, degree: i64, terms: usize) -> MultiOp {
    let degs = space.degrees();
    let mut op = MultiOp::zero(space.clone(), space.clone(), arity, degree);
    for _ in 0..terms {
        let u: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..degs.len())).collect();
        let target: i64 = u.iter().map(|&x| degs[x]).sum::<i64>() + degree;
        let outs: Vec<usize> = (0..degs.len()).filter(|&o| degs[o] == target).collect();
        if outs.is_empty() {
            continue;
        }
        let o = outs[rng.gen_range(0..outs.len())];
        op.insert(&u, o, small_q(rng)).unwrap();
    }
    op
}

/// Random degree-0 element with vanishing arity-one part.
pub fn random_gauge(rng: &mut ChaCha8Rng, space: &Space, truncation: usize, terms: usize) -> ConvElement {
    let ops = (2..=truncation).map(|n| random_op(rng, space, n, 0, terms)).collect();
    ConvElement::from_ops(space.clone(), space.clone(), 0, truncation, ops).unwrap()
}

/// `g α (g^{-1})^{⊗n}` for a degree-preserving automorphism `g`.
pub fn transport(alpha: &ConvElement, g: &Matrix) -> ConvElement {
    let s = alpha.source();
    let a = alpha.truncation();
    let gi = ConvElement::strict(s.clone(), s.clone(), &g.inverse().unwrap(), 0, a).unwrap();
    alpha.postcompose(g, 0, s).circle_direct(&gi).unwrap()
}

/// Space with a random number (≤ 3) of basis vectors in each of the given degrees.
pub fn random_space(rng: &mut ChaCha8Rng, degrees: std::ops::RangeInclusive<i64>) -> GradedSpace {
    GradedSpace::new(degrees.map(|d| (d, rng.gen_range(0..=3))))
}

/// Random contraction onto homology: `V = H ⊕ B ⊕ C` with `d : C ≅ B`,
/// moved by a random automorphism.
pub fn random_contraction(rng: &mut ChaCha8Rng) -> Contraction {
    loop {
        let space = random_space(rng, 0..=2);
        if space.total() == 0 || space.total() > 7 {
            continue;
        }
        let degs = space.basis_degrees();
        let n = degs.len();
        let mut d = Matrix::zeros(n, n);
        let mut used = vec![false; n];
        for c in 0..n {
            if used[c] || !rng.gen_bool(0.6) {
                continue;
            }
            if let Some(r) = (0..n).find(|&r| !used[r] && r != c && degs[r] == degs[c] - 1) {
                d.set(r, c, prelie::rational::one());
                used[r] = true;
                used[c] = true;
            }
        }
        let g = random_automorphism(rng, &space);
        let d = g.mul(&d).mul(&g.inverse().unwrap());
        return Contraction::onto_homology(space, d).unwrap();
    }
}

use prelie::prelie_series::{bracket, PreLieAlgebra};
use prelie::rational::{factorial, one};

/// Classical Dynkin series for log(e^x e^y) with right-nested brackets.
pub fn dynkin_bch(x: &TreeSeries, y: &TreeSeries, max_weight: usize) -> TreeSeries {
    fn nested(word: &[&TreeSeries]) -> TreeSeries {
        match word {
            [w] => (*w).clone(),
            [w, rest @ ..] => bracket(w, &nested(rest)),
            [] => unreachable!(),
        }
    }
    fn rec(
        x: &TreeSeries,
        y: &TreeSeries,
        max: usize,
        pairs: &mut Vec<(usize, usize)>,
        n_left: usize,
        acc: &mut TreeSeries,
        n_total: usize,
    ) {
        if n_left == 0 {
            let m: usize = pairs.iter().map(|(r, s)| r + s).sum();
            let mut word = Vec::new();
            let mut denom = Q::from_integer((m as i64).into());
            for &(r, s) in pairs.iter() {
                word.extend(std::iter::repeat_n(x, r));
                word.extend(std::iter::repeat_n(y, s));
                denom *= factorial(r) * factorial(s);
            }
            let sign = if n_total % 2 == 1 { one() } else { -one() };
            let c = sign / (Q::from_integer((n_total as i64).into()) * denom);
            *acc = acc.plus(&nested(&word).scaled(&c));
            return;
        }
        let used: usize = pairs.iter().map(|(r, s)| r + s).sum();
        for r in 0..=max - used {
            for s in 0..=max - used - r {
                if r + s == 0 || used + r + s + (n_left - 1) > max {
                    continue;
                }
                pairs.push((r, s));
                rec(x, y, max, pairs, n_left - 1, acc, n_total);
                pairs.pop();
            }
        }
    }
    let mut acc = TreeSeries::zero(x.order());
    for n in 1..=max_weight {
        rec(x, y, max_weight, &mut Vec::new(), n, &mut acc, n);
    }
    acc
}
