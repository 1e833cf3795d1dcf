use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::GradedSpace;
use crate::linalg::Matrix;
use crate::rational::Q;

/// A graded space `V` seen through its suspension `sV`: basis vectors keep
/// their indices, and signs use the shifted degree `|v| + 1`.
#[derive(Clone)]
pub struct Space(Arc<(GradedSpace, Vec<i64>)>);

impl Space {
    pub fn new(v: GradedSpace) -> Self {
        let degs = v.basis_degrees().into_iter().map(|d| d + 1).collect();
        Space(Arc::new((v, degs)))
    }

    /// The unshifted space `V`.
    pub fn graded(&self) -> &GradedSpace {
        &self.0 .0
    }

    /// Shifted degree of each basis vector.
    pub fn degrees(&self) -> &[i64] {
        &self.0 .1
    }

    pub fn dim(&self) -> usize {
        self.0 .1.len()
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 .0 == other.0 .0
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.graded().dims())
    }
}

type Vector = BTreeMap<usize, Q>;

fn add_to<K: Ord>(m: &mut BTreeMap<K, Q>, k: K, c: Q) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match m.entry(k) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

/// Multilinear map `(sA)^{⊗n} -> sB` of a fixed degree, stored sparsely as
/// input tuple ↦ output vector.
#[derive(Clone)]
pub struct MultiOp {
    source: Space,
    target: Space,
    arity: usize,
    degree: i64,
    entries: BTreeMap<Vec<usize>, Vector>,
}

impl PartialEq for MultiOp {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
            && self.target == other.target
            && self.arity == other.arity
            && self.entries == other.entries
            && (self.degree == other.degree || self.entries.is_empty())
    }
}

impl Eq for MultiOp {}

impl fmt::Debug for MultiOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiOp(arity {}, degree {}) {{", self.arity, self.degree)?;
        for (inputs, out) in &self.entries {
            for (o, c) in out {
                write!(f, " {inputs:?}->{o}: {c};")?;
            }
        }
        write!(f, " }}")
    }
}

impl MultiOp {
    pub fn zero(source: Space, target: Space, arity: usize, degree: i64) -> Self {
        MultiOp { source, target, arity, degree, entries: BTreeMap::new() }
    }

    pub fn identity(space: Space) -> Self {
        let mut op = MultiOp::zero(space.clone(), space.clone(), 1, 0);
        for v in 0..space.dim() {
            op.entries.insert(vec![v], [(v, Q::one())].into_iter().collect());
        }
        op
    }

    /// Arity-one operator with matrix `m : source -> target` (rows index the target).
    pub fn from_matrix(source: Space, target: Space, m: &Matrix, degree: i64) -> Result<Self> {
        let mut op = MultiOp::zero(source, target, 1, degree);
        if m.rows() != op.target.dim() || m.cols() != op.source.dim() {
            return Err(Error::Shape("matrix does not match the spaces".into()));
        }
        for c in 0..m.cols() {
            for r in 0..m.rows() {
                if !m.get(r, c).is_zero() {
                    op.insert(&[c], r, m.get(r, c).clone())?;
                }
            }
        }
        Ok(op)
    }

    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.arity, 1);
        let mut m = Matrix::zeros(self.target.dim(), self.source.dim());
        for (inp, out) in &self.entries {
            for (o, c) in out {
                m.set(*o, inp[0], c.clone());
            }
        }
        m
    }

    pub fn source(&self) -> &Space {
        &self.source
    }

    pub fn target(&self) -> &Space {
        &self.target
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize, &Q)> {
        self.entries.iter().flat_map(|(i, out)| out.iter().map(move |(o, c)| (i.as_slice(), *o, c)))
    }

    pub fn nnz(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn get(&self, inputs: &[usize], output: usize) -> Q {
        self.entries.get(inputs).and_then(|v| v.get(&output)).cloned().unwrap_or_else(Q::zero)
    }

    /// Output vector on a basis tuple.
    pub fn apply(&self, inputs: &[usize]) -> Option<&BTreeMap<usize, Q>> {
        self.entries.get(inputs)
    }

    /// Adds `c` to the coefficient of `output` in the image of `inputs`.
    pub fn insert(&mut self, inputs: &[usize], output: usize, c: Q) -> Result<()> {
        if inputs.len() != self.arity {
            return Err(Error::Shape(format!("expected {} inputs, got {}", self.arity, inputs.len())));
        }
        if let Some(&bad) = inputs.iter().find(|&&i| i >= self.source.dim()) {
            return Err(Error::Bounds(format!("input basis index {bad} out of range")));
        }
        if output >= self.target.dim() {
            return Err(Error::Bounds(format!("output basis index {output} out of range")));
        }
        let din: i64 = inputs.iter().map(|&i| self.source.degrees()[i]).sum();
        if self.target.degrees()[output] != din + self.degree {
            return Err(Error::Shape(format!(
                "entry {inputs:?} -> {output} does not have degree {}",
                self.degree
            )));
        }
        self.add_unchecked(inputs.to_vec(), output, c);
        Ok(())
    }

    fn add_unchecked(&mut self, inputs: Vec<usize>, output: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let v = self.entries.entry(inputs.clone()).or_default();
        add_to(v, output, c);
        if v.is_empty() {
            self.entries.remove(&inputs);
        }
    }

    fn check_same(&self, other: &Self) {
        assert!(
            self.source == other.source && self.target == other.target && self.arity == other.arity,
            "operands live in different hom-spaces"
        );
    }

    /// # Panics
    /// If the operands have different spaces, arities or (nonzero) degrees.
    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        assert_eq!(self.degree, other.degree, "adding operators of different degrees");
        let mut out = self.clone();
        for (i, o, c) in other.entries() {
            out.add_unchecked(i.to_vec(), o, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return MultiOp::zero(self.source.clone(), self.target.clone(), self.arity, self.degree);
        }
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            for x in v.values_mut() {
                *x *= c;
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q::one()))
    }

    fn by_output(&self) -> HashMap<usize, Vec<(&[usize], &Q)>> {
        let mut m: HashMap<usize, Vec<(&[usize], &Q)>> = HashMap::new();
        for (i, o, c) in self.entries() {
            m.entry(o).or_default().push((i, c));
        }
        m
    }

    /// Partial composition `f ∘_j g` (1-based `j`):
    /// `(f ∘_j g)(v_1..) = (-1)^{|g|(|v_1|+..+|v_{j-1}|)} f(v_1, .., g(v_j, ..), ..)`.
    pub fn compose_at(&self, g: &MultiOp, j: usize) -> Result<MultiOp> {
        if j == 0 || j > self.arity {
            return Err(Error::Bounds(format!("slot {j} out of range for arity {}", self.arity)));
        }
        if g.target != self.source || g.source != self.source {
            return Err(Error::Shape("partial composition needs g : A^n -> A with f : A^k -> B".into()));
        }
        let arity = self.arity + g.arity - 1;
        let mut out = MultiOp::zero(self.source.clone(), self.target.clone(), arity, self.degree + g.degree);
        let g_by_out = g.by_output();
        let degs = self.source.degrees();
        for (u, o, c) in self.entries() {
            let Some(pre) = g_by_out.get(&u[j - 1]) else { continue };
            let before: i64 = u[..j - 1].iter().map(|&x| degs[x]).sum();
            let sign_odd = (g.degree * before).rem_euclid(2) == 1;
            for (w, cg) in pre {
                let mut inputs = Vec::with_capacity(arity);
                inputs.extend_from_slice(&u[..j - 1]);
                inputs.extend_from_slice(w);
                inputs.extend_from_slice(&u[j..]);
                let mut coef = c * *cg;
                if sign_odd {
                    coef = -coef;
                }
                out.add_unchecked(inputs, o, coef);
            }
        }
        Ok(out)
    }

    /// `f ∘ (O_1 ⊗ .. ⊗ O_n)` for arity-one maps `O_t : C -> A` of degrees
    /// `deg_t`, with the Koszul rule `(A⊗B)(v⊗w) = (-1)^{|B||v|} Av ⊗ Bw`.
    pub fn precompose(&self, ops: &[(&Matrix, i64)], new_source: &Space) -> Result<MultiOp> {
        if ops.len() != self.arity {
            return Err(Error::Shape("one operator per input expected".into()));
        }
        // preimages: for each slot, row r of O_t -> list of (column, coefficient)
        let pre: Vec<HashMap<usize, Vec<(usize, Q)>>> = ops
            .iter()
            .map(|(m, _)| {
                let mut h: HashMap<usize, Vec<(usize, Q)>> = HashMap::new();
                for r in 0..m.rows() {
                    for c in 0..m.cols() {
                        if !m.get(r, c).is_zero() {
                            h.entry(r).or_default().push((c, m.get(r, c).clone()));
                        }
                    }
                }
                h
            })
            .collect();
        let deg_total: i64 = ops.iter().map(|(_, d)| d).sum();
        let mut out = MultiOp::zero(new_source.clone(), self.target.clone(), self.arity, self.degree + deg_total);
        let sdeg = new_source.degrees();
        for (u, o, c) in self.entries() {
            let mut stack: Vec<(Vec<usize>, Q, i64)> = vec![(Vec::new(), c.clone(), 0)];
            for (t, &ut) in u.iter().enumerate() {
                let Some(cands) = pre[t].get(&ut) else {
                    stack.clear();
                    break;
                };
                let mut next = Vec::with_capacity(stack.len() * cands.len());
                for (inp, coef, before) in &stack {
                    let odd = (ops[t].1 * before).rem_euclid(2) == 1;
                    for (v, m) in cands {
                        let mut i2 = inp.clone();
                        i2.push(*v);
                        let mut c2 = coef * m;
                        if odd {
                            c2 = -c2;
                        }
                        next.push((i2, c2, before + sdeg[*v]));
                    }
                }
                stack = next;
            }
            for (inp, coef, _) in stack {
                out.add_unchecked(inp, o, coef);
            }
        }
        Ok(out)
    }

    /// Post-composition `m ∘ f` by an arity-one map of degree `deg`.
    pub fn postcompose(&self, m: &Matrix, deg: i64, new_target: &Space) -> MultiOp {
        let mut out = MultiOp::zero(self.source.clone(), new_target.clone(), self.arity, self.degree + deg);
        for (u, o, c) in self.entries() {
            for r in 0..m.rows() {
                let x = m.get(r, o);
                if !x.is_zero() {
                    out.add_unchecked(u.to_vec(), r, c * x);
                }
            }
        }
        out
    }

    pub(crate) fn by_output_all(&self) -> HashMap<usize, Vec<(&[usize], &Q)>> {
        self.by_output()
    }

    pub(crate) fn push_raw(&mut self, inputs: Vec<usize>, output: usize, c: Q) {
        self.add_unchecked(inputs, output, c);
    }
}
