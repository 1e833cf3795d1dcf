use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::multiop::{MultiOp, Space};
use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{factorial, sign, Q};

/// One tensor factor: an arity-one map and its degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub map: Matrix,
    pub degree: i64,
}

/// A linear combination of pure tensors `A_1 ⊗ .. ⊗ A_n` of endomorphisms
/// of `sV`, acting with Koszul signs.
#[derive(Clone, Debug)]
pub struct TensorOp {
    space: Space,
    arity: usize,
    terms: Vec<(Q, Vec<Factor>)>,
}

impl TensorOp {
    pub fn zero(space: Space, arity: usize) -> Self {
        TensorOp { space, arity, terms: Vec::new() }
    }

    pub fn pure(space: Space, factors: Vec<Factor>) -> Self {
        let arity = factors.len();
        TensorOp { space, arity, terms: vec![(Q::one(), factors)] }
    }

    /// `f^{⊗n}`.
    pub fn power(space: Space, f: &Factor, n: usize) -> Self {
        TensorOp::pure(space, vec![f.clone(); n])
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &[(Q, Vec<Factor>)] {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        TensorOp { terms, ..self.clone() }
    }

    pub fn scale(&self, c: &Q) -> Self {
        TensorOp { terms: self.terms.iter().map(|(x, f)| (x * c, f.clone())).collect(), ..self.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = Vec::new();
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                let mut f = fa.clone();
                f.extend(fb.iter().cloned());
                terms.push((a * b, f));
            }
        }
        TensorOp { space: self.space.clone(), arity: self.arity + other.arity, terms }
    }

    /// `self ∘ other`, using
    /// `(A_1⊗..⊗A_n)(B_1⊗..⊗B_n) = (-1)^{sum_{s<t} |A_t||B_s|} A_1B_1 ⊗ .. ⊗ A_nB_n`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.arity, other.arity);
        let mut terms = Vec::new();
        for (a, fa) in &self.terms {
            for (b, fb) in &other.terms {
                let mut exp = 0i64;
                for t in 0..self.arity {
                    for s in 0..t {
                        exp += fa[t].degree * fb[s].degree;
                    }
                }
                let mut c = a * b;
                if exp.rem_euclid(2) == 1 {
                    c = -c;
                }
                let f = fa
                    .iter()
                    .zip(fb)
                    .map(|(x, y)| Factor { map: x.map.mul(&y.map), degree: x.degree + y.degree })
                    .collect();
                terms.push((c, f));
            }
        }
        TensorOp { space: self.space.clone(), arity: self.arity, terms }.collected()
    }

    /// Drops terms with a zero factor and merges terms with equal factors.
    fn collected(self) -> Self {
        let mut merged: Vec<(Q, Vec<Factor>)> = Vec::new();
        for (c, f) in self.terms {
            if c.is_zero() || f.iter().any(|x| x.map.is_zero()) {
                continue;
            }
            match merged.iter_mut().find(|(_, g)| *g == f) {
                Some((d, _)) => *d += c,
                None => merged.push((c, f)),
            }
        }
        merged.retain(|(c, _)| !c.is_zero());
        TensorOp { terms: merged, ..self }
    }

    /// Image of a basis tuple.
    pub fn apply(&self, inputs: &[usize]) -> BTreeMap<Vec<usize>, Q> {
        let degs = self.space.degrees();
        let mut out: BTreeMap<Vec<usize>, Q> = BTreeMap::new();
        for (c, factors) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let mut exp = 0i64;
            let mut before = 0i64;
            for (t, &v) in inputs.iter().enumerate() {
                exp += factors[t].degree * before;
                before += degs[v];
            }
            let c0 = if exp.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
            let mut partial: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), c0)];
            for (t, &v) in inputs.iter().enumerate() {
                let m = &factors[t].map;
                let mut next = Vec::new();
                for (w, x) in &partial {
                    for r in 0..m.rows() {
                        let e = m.get(r, v);
                        if !e.is_zero() {
                            let mut w2 = w.clone();
                            w2.push(r);
                            next.push((w2, x * e));
                        }
                    }
                }
                partial = next;
            }
            for (w, x) in partial {
                *out.entry(w).or_insert_with(Q::zero) += x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }

    /// Equality as maps, tested on every basis tuple.
    pub fn same_map(&self, other: &Self) -> bool {
        if self.arity != other.arity {
            return false;
        }
        let d = self.space.dim();
        let mut tuple = vec![0usize; self.arity];
        loop {
            if self.apply(&tuple) != other.apply(&tuple) {
                return false;
            }
            let mut i = 0;
            loop {
                if i == self.arity {
                    return true;
                }
                tuple[i] += 1;
                if tuple[i] < d {
                    break;
                }
                tuple[i] = 0;
                i += 1;
            }
            if d == 0 {
                return true;
            }
        }
    }

    /// `x ∘ self` for an arity-`n` operator `x` on the same space.
    pub fn precompose_into(&self, x: &MultiOp) -> Result<MultiOp> {
        if x.arity() != self.arity {
            return Err(Error::Shape("arity mismatch in precomposition".into()));
        }
        let mut acc: Option<MultiOp> = None;
        for (c, factors) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let ops: Vec<(&Matrix, i64)> = factors.iter().map(|f| (&f.map, f.degree)).collect();
            let term = x.precompose(&ops, &self.space)?.scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term),
            });
        }
        let deg = x.degree() + self.terms.first().map_or(0, |(_, f)| f.iter().map(|g| g.degree).sum());
        Ok(acc.unwrap_or_else(|| MultiOp::zero(self.space.clone(), x.target().clone(), self.arity, deg)))
    }
}

/// The factors `id`, `π = ip` and `h` of a contraction, on `sV`.
pub fn contraction_factors(c: &Contraction) -> (Factor, Factor, Factor) {
    let n = c.big().total();
    (
        Factor { map: Matrix::identity(n), degree: 0 },
        Factor { map: c.pi(), degree: 0 },
        Factor { map: c.h().clone(), degree: 1 },
    )
}

/// Symmetrized homotopy on `(sV)^{⊗n}`:
/// `h_n = sum over I ⊔ P ⊔ H = [n], |H| = 1, of (|I|! |P|! / n!) id^I π^P h^H`.
pub fn sym_homotopy(space: &Space, c: &Contraction, n: usize) -> TensorOp {
    let (id, pi, h) = contraction_factors(c);
    let mut op = TensorOp::zero(space.clone(), n);
    let nf = factorial(n);
    for hpos in 0..n {
        let others: Vec<usize> = (0..n).filter(|&i| i != hpos).collect();
        for mask in 0u32..(1 << others.len()) {
            let mut factors = vec![id.clone(); n];
            factors[hpos] = h.clone();
            let mut np = 0;
            for (b, &pos) in others.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    factors[pos] = pi.clone();
                    np += 1;
                }
            }
            let ni = n - 1 - np;
            let coef = factorial(ni) * factorial(np) / nf.clone();
            op.terms.push((coef, factors));
        }
    }
    op
}

fn id_power(space: &Space, c: &Contraction, n: usize) -> TensorOp {
    TensorOp::power(space.clone(), &contraction_factors(c).0, n)
}

/// `h_{k+1+l} (h^{⊗k} ⊗ id ⊗ π^{⊗l}) = ((-1)^k/(k+1)) h^{⊗(k+1)} ⊗ π^{⊗l}`.
///
/// The sign is the Koszul sign of `(id^{⊗k} ⊗ h)(h^{⊗k} ⊗ id) = (-1)^k h^{⊗(k+1)}`.
pub fn check_homotopy_absorption(space: &Space, c: &Contraction, k: usize, l: usize) -> bool {
    let (id, pi, h) = contraction_factors(c);
    let inner = TensorOp::power(space.clone(), &h, k)
        .tensor(&TensorOp::pure(space.clone(), vec![id]))
        .tensor(&TensorOp::power(space.clone(), &pi, l));
    let lhs = sym_homotopy(space, c, k + 1 + l).compose(&inner);
    let rhs = TensorOp::power(space.clone(), &h, k + 1)
        .tensor(&TensorOp::power(space.clone(), &pi, l))
        .scale(&(sign(k % 2 == 1) / Q::from_integer((k as i64 + 1).into())));
    lhs.same_map(&rhs)
}

/// `(h_p ⊗ id^{⊗q} - id^{⊗p} ⊗ h_q) h_{p+q} = h_p ⊗ h_q`.
pub fn check_homotopy_splitting(space: &Space, c: &Contraction, p: usize, q: usize) -> bool {
    let left = sym_homotopy(space, c, p)
        .tensor(&id_power(space, c, q))
        .sub(&id_power(space, c, p).tensor(&sym_homotopy(space, c, q)));
    let lhs = left.compose(&sym_homotopy(space, c, p + q));
    let rhs = sym_homotopy(space, c, p).tensor(&sym_homotopy(space, c, q));
    lhs.same_map(&rhs)
}

fn binom(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

/// Checks the two binomial identities behind the symmetrized homotopy for
/// all parameters up to `bound`:
///
/// `C(a+b+c+1, a+b+1) = sum_{i+j=c} C(a+i, a) C(b+j, b)` and
/// `C(a+b+c+d+2, a+b+1) = sum_{i+j=b} C(a+c+i+1, c) C(j+d, d) + sum_{i+j=d} C(a+c+i+1, a) C(j+b, b)`.
pub fn binomial_identities_check(bound: u64) -> bool {
    for a in 0..=bound {
        for b in 0..=bound {
            for c in 0..=bound {
                let lhs = binom(a + b + c + 1, a + b + 1);
                let rhs: BigUint = (0..=c).map(|i| binom(a + i, a) * binom(b + c - i, b)).sum();
                if lhs != rhs {
                    return false;
                }
                for d in 0..=bound {
                    let lhs = binom(a + b + c + d + 2, a + b + 1);
                    let s1: BigUint = (0..=b).map(|i| binom(a + c + i + 1, c) * binom(b - i + d, d)).sum();
                    let s2: BigUint = (0..=d).map(|i| binom(a + c + i + 1, a) * binom(d - i + b, b)).sum();
                    if lhs != s1 + s2 {
                        return false;
                    }
                }
            }
        }
    }
    true
}
