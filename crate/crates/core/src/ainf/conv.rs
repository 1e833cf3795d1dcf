use std::fmt;

use num_traits::One;

use super::multiop::{MultiOp, Space};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::prelie_series::PreLieAlgebra;
use crate::rational::Q;

/// A family `(f_1, .., f_A)` of multilinear maps `(sA)^{⊗n} -> sB`, all of
/// one degree. Arity `n` carries weight `n - 1`.
///
/// Degree `-1` families on a single space are structures, degree `0`
/// families are morphisms and gauge parameters.
#[derive(Clone, PartialEq, Eq)]
pub struct ConvElement {
    source: Space,
    target: Space,
    degree: i64,
    comps: Vec<MultiOp>,
}

impl fmt::Debug for ConvElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.comps.iter().filter(|c| !c.is_zero())).finish()
    }
}

/// First arity at which an identity fails, with the offending difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArityResidual {
    pub arity: usize,
    pub difference: MultiOp,
}

impl ConvElement {
    pub fn zero(source: Space, target: Space, degree: i64, truncation: usize) -> Self {
        let comps = (1..=truncation)
            .map(|n| MultiOp::zero(source.clone(), target.clone(), n, degree))
            .collect();
        ConvElement { source, target, degree, comps }
    }

    pub fn identity(space: Space, truncation: usize) -> Self {
        let mut z = ConvElement::zero(space.clone(), space.clone(), 0, truncation);
        z.comps[0] = MultiOp::identity(space);
        z
    }

    /// Arity-one element given by a matrix.
    pub fn strict(source: Space, target: Space, m: &Matrix, degree: i64, truncation: usize) -> Result<Self> {
        let mut z = ConvElement::zero(source.clone(), target.clone(), degree, truncation);
        z.comps[0] = MultiOp::from_matrix(source, target, m, degree)?;
        Ok(z)
    }

    /// Builds an element from components; missing arities are zero.
    pub fn from_ops(source: Space, target: Space, degree: i64, truncation: usize, ops: Vec<MultiOp>) -> Result<Self> {
        let mut z = ConvElement::zero(source, target, degree, truncation);
        for op in ops {
            z.set(op)?;
        }
        Ok(z)
    }

    pub fn set(&mut self, op: MultiOp) -> Result<()> {
        let n = op.arity();
        if n == 0 || n > self.truncation() {
            return Err(Error::Bounds(format!("arity {n} outside 1..={}", self.truncation())));
        }
        if op.source() != &self.source || op.target() != &self.target {
            return Err(Error::Shape(format!("arity {n} component lives on different spaces")));
        }
        if !op.is_zero() && op.degree() != self.degree {
            return Err(Error::Shape(format!(
                "arity {n} component has degree {}, expected {}",
                op.degree(),
                self.degree
            )));
        }
        self.comps[n - 1] = op;
        Ok(())
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn truncation(&self) -> usize {
        self.comps.len()
    }

    /// Component of arity `n` (1-based).
    pub fn component(&self, n: usize) -> &MultiOp {
        &self.comps[n - 1]
    }

    pub fn components(&self) -> &[MultiOp] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(MultiOp::is_zero)
    }

    /// First arity with a nonzero component.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero()).map(|i| i + 1)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.source != other.source || self.target != other.target || self.truncation() != other.truncation() {
            return Err(Error::Config("operands have different spaces or truncations".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.degree != other.degree {
            return Err(Error::Config("adding elements of different degrees".into()));
        }
        let comps = self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect();
        Ok(ConvElement { comps, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Self {
        ConvElement { comps: self.comps.iter().map(|x| x.scale(c)).collect(), ..self.clone() }
    }

    /// Keeps the components of arity at most `n`, zeroing the rest.
    pub fn arity_part(&self, lo: usize, hi: usize) -> Self {
        let mut z = ConvElement::zero(self.source.clone(), self.target.clone(), self.degree, self.truncation());
        for n in lo.max(1)..=hi.min(self.truncation()) {
            z.comps[n - 1] = self.comps[n - 1].clone();
        }
        z
    }

    /// `f ⋆ g = sum_j f_k ∘_j g_l`, for `g` an endomorphism family of the
    /// source of `f`.
    pub fn star(&self, g: &ConvElement) -> Result<Self> {
        if g.source != self.source || g.target != self.source {
            return Err(Error::Config("f ⋆ g needs g to act on the source of f".into()));
        }
        if g.truncation() != self.truncation() {
            return Err(Error::Config("operands have different truncations".into()));
        }
        let a = self.truncation();
        let mut out = ConvElement::zero(self.source.clone(), self.target.clone(), self.degree + g.degree, a);
        for k in 1..=a {
            let f = &self.comps[k - 1];
            if f.is_zero() {
                continue;
            }
            for l in 1..=a + 1 - k {
                let gl = &g.comps[l - 1];
                if gl.is_zero() {
                    continue;
                }
                let n = k + l - 1;
                for j in 1..=k {
                    let c = f.compose_at(gl, j)?;
                    out.comps[n - 1] = out.comps[n - 1].add(&c);
                }
            }
        }
        Ok(out)
    }

    /// `f ⊛ g = sum f_k ∘ (g_{i_1} ⊗ .. ⊗ g_{i_k})` for `g` of degree zero.
    /// No group-like condition on `g` is needed here.
    pub fn circle_direct(&self, g: &ConvElement) -> Result<Self> {
        if g.target != self.source {
            return Err(Error::Config("f ⊛ g needs the target of g to be the source of f".into()));
        }
        if g.truncation() != self.truncation() {
            return Err(Error::Config("operands have different truncations".into()));
        }
        if g.degree != 0 && !g.is_zero() {
            return Err(Error::Domain("the right factor of ⊛ must have degree 0".into()));
        }
        let a = self.truncation();
        let mut out = ConvElement::zero(g.source.clone(), self.target.clone(), self.degree, a);
        let mut by_out: Vec<Vec<(&[usize], &Q)>> = vec![Vec::new(); g.target.dim()];
        for comp in &g.comps {
            for (o, list) in comp.by_output_all() {
                by_out[o].extend(list);
            }
        }
        for f in &self.comps {
            for (u, o, c) in f.entries() {
                let mut stack: Vec<(Vec<usize>, Q)> = vec![(Vec::new(), c.clone())];
                for (t, &ut) in u.iter().enumerate() {
                    // each remaining slot takes at least one input
                    let room = a - (u.len() - t - 1);
                    let mut next = Vec::new();
                    for (inp, coef) in &stack {
                        for (w, cg) in &by_out[ut] {
                            if inp.len() + w.len() > room {
                                continue;
                            }
                            let mut i2 = inp.clone();
                            i2.extend_from_slice(w);
                            next.push((i2, coef * *cg));
                        }
                    }
                    stack = next;
                    if stack.is_empty() {
                        break;
                    }
                }
                for (inp, coef) in stack {
                    let n = inp.len();
                    out.comps[n - 1].push_raw(inp, o, coef);
                }
            }
        }
        Ok(out)
    }

    /// Post-composition by an arity-one map.
    pub fn postcompose(&self, m: &Matrix, deg: i64, new_target: &Space) -> Self {
        let comps = self.comps.iter().map(|c| c.postcompose(m, deg, new_target)).collect();
        ConvElement { source: self.source.clone(), target: new_target.clone(), degree: self.degree + deg, comps }
    }

    /// Maurer–Cartan check `α ⋆ α = 0`, reporting the first failing arity.
    pub fn mc_check(&self) -> Result<std::result::Result<(), ArityResidual>> {
        if self.degree != -1 && !self.is_zero() {
            return Err(Error::Domain("a structure must have degree -1 on the shifted space".into()));
        }
        let sq = self.star(self)?;
        Ok(match sq.first_nonzero() {
            None => Ok(()),
            Some(n) => Err(ArityResidual { arity: n, difference: sq.comps[n - 1].clone() }),
        })
    }

    /// Checks `f ⋆ alpha = beta ⊛ f` for an ∞-morphism `f` from `alpha` to `beta`.
    pub fn inf_morphism_check(&self, alpha: &ConvElement, beta: &ConvElement) -> Result<std::result::Result<(), ArityResidual>> {
        let lhs = self.star(alpha)?;
        let rhs = beta.circle_direct(self)?;
        let diff = lhs.sub(&rhs)?;
        Ok(match diff.first_nonzero() {
            None => Ok(()),
            Some(n) => Err(ArityResidual { arity: n, difference: diff.comps[n - 1].clone() }),
        })
    }

    /// `f_1 = id`, required of gauge group elements.
    pub fn is_grouplike(&self) -> bool {
        self.source == self.target && self.comps[0] == MultiOp::identity(self.source.clone())
    }
}

impl PreLieAlgebra for ConvElement {
    fn star(&self, rhs: &Self) -> Self {
        ConvElement::star(self, rhs).expect("star of mismatched convolution elements")
    }

    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs).expect("sum of mismatched convolution elements")
    }

    fn scaled(&self, c: &Q) -> Self {
        self.scale(c)
    }

    fn zero_like(&self) -> Self {
        ConvElement::zero(self.source.clone(), self.target.clone(), self.degree, self.truncation())
    }

    fn unit_like(&self) -> Self {
        ConvElement::identity(self.source.clone(), self.truncation())
    }

    fn is_zero(&self) -> bool {
        ConvElement::is_zero(self)
    }

    fn max_weight(&self) -> usize {
        self.truncation() - 1
    }

    fn weight_part(&self, w: usize) -> Self {
        self.arity_part(w + 1, w + 1)
    }

    fn circle(&self, g: &Self) -> Result<Self> {
        if !g.is_grouplike() {
            return Err(Error::Domain("expected a group-like element (arity-one part equal to id)".into()));
        }
        self.circle_direct(g)
    }
}
