//! Multicomplexes: the associative convolution algebra of towers of
//! operators `d_0, d_1, d_2, ...` on a graded space, with `d_n` of degree
//! `2n - 1`.

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::graded::{check_homogeneous, GradedSpace};
use crate::json;
use crate::linalg::{Matrix, SparseSystem};
use crate::rational::{factorial, Q};

/// Degree pattern of a tower: weight `n` lives in degree `2n - 1`
/// (structures), `2n` (gauge elements and isotopies) or `2n - 2` (squares
/// of structures).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TowerKind {
    Structure,
    Gauge,
    Square,
}

impl TowerKind {
    pub fn degree(self, weight: usize) -> i64 {
        let w = 2 * weight as i64;
        match self {
            TowerKind::Structure => w - 1,
            TowerKind::Gauge => w,
            TowerKind::Square => w - 2,
        }
    }

    fn product(self, rhs: TowerKind) -> Result<TowerKind> {
        use TowerKind::*;
        match (self, rhs) {
            (Gauge, k) | (k, Gauge) => Ok(k),
            (Structure, Structure) => Ok(Square),
            _ => Err(Error::Config(format!("no tower kind for the product of {self:?} and {rhs:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorTower {
    space: GradedSpace,
    kind: TowerKind,
    components: Vec<Matrix>,
}

/// Outcome of an equation check: the first weight where the two sides
/// differ, with the difference.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub weight: usize,
    pub difference: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trivialization {
    /// `f * δ = α * f` with `f = exp(λ)`.
    Found { f: OperatorTower, lambda: OperatorTower },
    /// The weight-`weight` stage `f_n d - d f_n = rhs` has no solution.
    Obstructed { weight: usize, rhs: Matrix },
}

impl OperatorTower {
    pub fn zero(space: GradedSpace, kind: TowerKind, truncation: usize) -> Self {
        let n = space.total();
        OperatorTower { space, kind, components: vec![Matrix::zeros(n, n); truncation + 1] }
    }

    /// The unit `1`: identity in weight 0.
    pub fn unit(space: GradedSpace, truncation: usize) -> Self {
        let mut t = Self::zero(space, TowerKind::Gauge, truncation);
        t.components[0] = Matrix::identity(t.space.total());
        t
    }

    /// Builds a tower from its components `0..=N`, checking degrees.
    pub fn from_components(space: GradedSpace, kind: TowerKind, components: Vec<Matrix>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Config("a tower needs at least its weight-0 component".into()));
        }
        for (w, m) in components.iter().enumerate() {
            check_homogeneous(m, &space, &space, kind.degree(w), &format!("weight {w} operator"))?;
        }
        Ok(OperatorTower { space, kind, components })
    }

    pub fn space(&self) -> &GradedSpace {
        &self.space
    }

    pub fn kind(&self) -> TowerKind {
        self.kind
    }

    pub fn truncation(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, weight: usize) -> &Matrix {
        &self.components[weight]
    }

    pub fn components(&self) -> &[Matrix] {
        &self.components
    }

    pub fn with_component(mut self, weight: usize, m: Matrix) -> Result<Self> {
        if weight > self.truncation() {
            return Err(Error::Bounds(format!("weight {weight} exceeds truncation {}", self.truncation())));
        }
        check_homogeneous(&m, &self.space, &self.space, self.kind.degree(weight), &format!("weight {weight} operator"))?;
        self.components[weight] = m;
        Ok(self)
    }

    fn compatible(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Shape("towers live on different spaces".into()));
        }
        if self.truncation() != other.truncation() {
            return Err(Error::Config(format!(
                "truncations differ ({} vs {})",
                self.truncation(),
                other.truncation()
            )));
        }
        Ok(())
    }

    /// `(f * g)_n = sum_{i+j=n} f_i g_j`.
    pub fn star(&self, other: &Self) -> Result<Self> {
        self.compatible(other)?;
        let kind = self.kind.product(other.kind)?;
        let n = self.truncation();
        let dim = self.space.total();
        let components = (0..=n)
            .map(|w| {
                (0..=w).fold(Matrix::zeros(dim, dim), |acc, i| acc.add(&self.components[i].mul(&other.components[w - i])))
            })
            .collect();
        Ok(OperatorTower { space: self.space.clone(), kind, components })
    }

    fn zip(&self, other: &Self, f: impl Fn(&Matrix, &Matrix) -> Matrix) -> Result<Self> {
        self.compatible(other)?;
        if self.kind != other.kind {
            return Err(Error::Config(format!("cannot add towers of kinds {:?} and {:?}", self.kind, other.kind)));
        }
        let components = self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect();
        Ok(OperatorTower { space: self.space.clone(), kind: self.kind, components })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, Matrix::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, Matrix::sub)
    }

    pub fn scale(&self, c: &Q) -> Self {
        OperatorTower {
            space: self.space.clone(),
            kind: self.kind,
            components: self.components.iter().map(|m| m.scale(c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Matrix::is_zero)
    }

    fn first_difference(&self, other: &Self) -> Option<Residual> {
        self.components.iter().zip(&other.components).enumerate().find_map(|(w, (a, b))| {
            let diff = a.sub(b);
            (!diff.is_zero()).then_some(Residual { weight: w, difference: diff })
        })
    }

    fn require_kind(&self, kind: TowerKind, what: &str) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Domain(format!("{what} must be a {kind:?} tower, got {:?}", self.kind)));
        }
        Ok(())
    }

    /// `α * α = 0` through the truncation; `Err` carries the first nonzero
    /// weight of `α * α`.
    pub fn mc_check(&self) -> Result<std::result::Result<(), Residual>> {
        self.require_kind(TowerKind::Structure, "Maurer–Cartan candidate")?;
        let sq = self.star(self)?;
        let zero = OperatorTower::zero(self.space.clone(), TowerKind::Square, self.truncation());
        Ok(match sq.first_difference(&zero) {
            None => Ok(()),
            Some(r) => Err(r),
        })
    }

    /// `exp(λ) = sum λ^k / k!` for a gauge tower with zero weight-0 part.
    pub fn exp_assoc(&self) -> Result<Self> {
        self.require_kind(TowerKind::Gauge, "exponent")?;
        if !self.components[0].is_zero() {
            return Err(Error::Domain("exponent must have zero weight-0 component".into()));
        }
        let unit = OperatorTower::unit(self.space.clone(), self.truncation());
        let mut acc = unit.clone();
        let mut power = unit;
        for k in 1..=self.truncation() {
            power = power.star(self)?;
            acc = acc.add(&power.scale(&(Q::one() / factorial(k))))?;
        }
        Ok(acc)
    }

    /// `log(1 + x) = sum (-1)^(k+1) x^k / k` for a gauge tower with identity
    /// weight-0 part.
    pub fn log_assoc(&self) -> Result<Self> {
        self.require_kind(TowerKind::Gauge, "logarithm argument")?;
        if self.components[0] != Matrix::identity(self.space.total()) {
            return Err(Error::Domain("logarithm argument must have identity weight-0 component".into()));
        }
        let unit = OperatorTower::unit(self.space.clone(), self.truncation());
        let x = self.sub(&unit)?;
        let mut acc = OperatorTower::zero(self.space.clone(), TowerKind::Gauge, self.truncation());
        let mut power = unit;
        for k in 1..=self.truncation() {
            power = power.star(&x)?;
            let c = Q::from_integer(if k % 2 == 1 { 1.into() } else { (-1).into() }) / Q::from_integer((k as i64).into());
            acc = acc.add(&power.scale(&c))?;
        }
        Ok(acc)
    }

    /// `log(exp(μ) * exp(λ))`.
    pub fn bch_assoc(mu: &Self, lambda: &Self) -> Result<Self> {
        mu.exp_assoc()?.star(&lambda.exp_assoc()?)?.log_assoc()
    }

    /// `e^λ * α * e^(-λ)`.
    pub fn conjugate(lambda: &Self, alpha: &Self) -> Result<Self> {
        alpha.require_kind(TowerKind::Structure, "conjugated tower")?;
        let e = lambda.exp_assoc()?;
        let e_inv = lambda.scale(&-Q::one()).exp_assoc()?;
        e.star(alpha)?.star(&e_inv)
    }

    /// `f * α = β * f` through the truncation.
    pub fn isotopy_check(f: &Self, alpha: &Self, beta: &Self) -> Result<std::result::Result<(), Residual>> {
        f.require_kind(TowerKind::Gauge, "isotopy")?;
        if f.components[0] != Matrix::identity(f.space.total()) {
            return Err(Error::Domain("an isotopy must have identity weight-0 component".into()));
        }
        alpha.require_kind(TowerKind::Structure, "source structure")?;
        beta.require_kind(TowerKind::Structure, "target structure")?;
        let lhs = f.star(alpha)?;
        let rhs = beta.star(f)?;
        Ok(match lhs.first_difference(&rhs) {
            None => Ok(()),
            Some(r) => Err(r),
        })
    }

    /// The tower `δ` holding only the weight-0 differential.
    pub fn differential_part(&self) -> Self {
        let mut t = OperatorTower::zero(self.space.clone(), self.kind, self.truncation());
        t.components[0] = self.components[0].clone();
        t
    }

    /// Solves `f * δ = α * f` weight by weight, `f = 1 + f_1 + ...`.
    pub fn trivialize(&self) -> Result<Trivialization> {
        if let Err(r) = self.mc_check()? {
            return Err(Error::Domain(format!("input is not Maurer–Cartan (residual at weight {})", r.weight)));
        }
        let dim = self.space.total();
        let degs = self.space.basis_degrees();
        let d = &self.components[0];
        let mut f = OperatorTower::unit(self.space.clone(), self.truncation());
        for n in 1..=self.truncation() {
            let rhs = (1..=n).fold(Matrix::zeros(dim, dim), |acc, i| acc.add(&self.components[i].mul(&f.components[n - i])));
            let deg = TowerKind::Gauge.degree(n);
            // unknowns: entries (r, c) of f_n with deg r = deg c + 2n
            let mut var = vec![vec![None; dim]; dim];
            let mut count = 0;
            for r in 0..dim {
                for c in 0..dim {
                    if degs[r] == degs[c] + deg {
                        var[r][c] = Some(count);
                        count += 1;
                    }
                }
            }
            let mut sys = SparseSystem::new(count);
            for r in 0..dim {
                for c in 0..dim {
                    if degs[r] != degs[c] + deg - 1 {
                        continue;
                    }
                    // (f_n d - d f_n)[r, c]
                    let mut row = std::collections::BTreeMap::new();
                    for k in 0..dim {
                        if let Some(v) = var[r][k] {
                            if !d.get(k, c).is_zero() {
                                *row.entry(v).or_insert_with(Q::zero) += d.get(k, c);
                            }
                        }
                        if let Some(v) = var[k][c] {
                            if !d.get(r, k).is_zero() {
                                *row.entry(v).or_insert_with(Q::zero) -= d.get(r, k);
                            }
                        }
                    }
                    sys.add_row(row, rhs.get(r, c).clone());
                }
            }
            let Some(x) = sys.solve() else {
                return Ok(Trivialization::Obstructed { weight: n, rhs });
            };
            let mut fnm = Matrix::zeros(dim, dim);
            for r in 0..dim {
                for c in 0..dim {
                    if let Some(v) = var[r][c] {
                        fnm.set(r, c, x[v].clone());
                    }
                }
            }
            f.components[n] = fnm;
        }
        let lambda = f.log_assoc()?;
        Ok(Trivialization::Found { f, lambda })
    }

    /// Transferred structure on the small space of `c`:
    /// `D_n = sum p d_(i1) h d_(i2) h ... h d_(ik) i` over compositions of `n`.
    /// The weight-0 part is `p d_0 i`; `c` must contract `(V, d_0)`.
    pub fn transfer(&self, c: &Contraction) -> Result<(OperatorTower, Matrix)> {
        self.require_kind(TowerKind::Structure, "transferred structure")?;
        if c.big() != &self.space || c.d() != &self.components[0] {
            return Err(Error::Config("contraction does not match the tower's space and differential".into()));
        }
        let n = self.truncation();
        let dim = self.space.total();
        // chains[w] = sum over compositions of w of d_(i1) h ... h d_(ik), i.e. (1 - δ'h)^(-1) δ' at weight w
        let mut chains: Vec<Matrix> = vec![Matrix::zeros(dim, dim); n + 1];
        for w in 1..=n {
            let mut acc = self.components[w].clone();
            for j in 1..w {
                acc = acc.add(&self.components[j].mul(c.h()).mul(&chains[w - j]));
            }
            chains[w] = acc;
        }
        let mut comps = vec![c.d_small().clone()];
        for ch in chains.iter().skip(1) {
            comps.push(c.p().mul(ch).mul(c.i()));
        }
        let tower = OperatorTower::from_components(c.small().clone(), TowerKind::Structure, comps)?;
        // weight components of i_∞ = i + h A i stacked as a block column
        let mut i_inf = c.i().clone();
        for ch in chains.iter().skip(1) {
            i_inf = i_inf.hstack(&c.h().mul(ch).mul(c.i()));
        }
        Ok((tower, i_inf))
    }

    /// Gauge triviality through the homology criterion: transfers along a
    /// contraction onto homology and tests whether the result vanishes.
    pub fn trivial_by_transfer(&self) -> Result<bool> {
        let c = Contraction::onto_homology(self.space.clone(), self.components[0].clone())?;
        let (t, _) = self.transfer(&c)?;
        Ok(t.is_zero())
    }

    pub fn from_json(v: &Value, kind: TowerKind) -> Result<Self> {
        let space = json::space_from_json(json::field(v, "space", "tower")?, "tower.space")?;
        let truncation = json::as_usize(json::field(v, "truncation", "tower")?, "tower.truncation")?;
        let mut t = OperatorTower::zero(space, kind, truncation);
        for (k, op) in json::as_array(json::field(v, "operators", "tower")?, "tower.operators")?.iter().enumerate() {
            let ctx = format!("tower.operators[{k}]");
            let w = json::as_usize(json::field(op, "weight", &ctx)?, &ctx)?;
            if w > truncation {
                return Err(json::structure(format!("{ctx}: weight {w} exceeds truncation {truncation}")));
            }
            let deg = kind.degree(w);
            for (e_idx, e) in json::as_array(json::field(op, "entries", &ctx)?, &ctx)?.iter().enumerate() {
                let ectx = format!("{ctx}.entries[{e_idx}]");
                let e = json::as_array(e, &ectx)?;
                if e.len() != 4 {
                    return Err(json::structure(format!("{ectx}: expected [srcDeg, srcIdx, dstIdx, coefficient]")));
                }
                let sd = json::as_i64(&e[0], &ectx)?;
                let si = json::as_usize(&e[1], &ectx)?;
                let di = json::as_usize(&e[2], &ectx)?;
                let coef = json::coefficient(&e[3], &ectx)?;
                let col = t.space.index(sd, si).map_err(|err| json::structure(format!("{ectx}: {err}")))?;
                let row = t.space.index(sd + deg, di).map_err(|err| json::structure(format!("{ectx}: {err}")))?;
                t.components[w].add_at(row, col, &coef);
            }
        }
        Ok(t)
    }

    pub fn to_json(&self) -> Value {
        let mut ops = Vec::new();
        for (w, m) in self.components.iter().enumerate() {
            let mut entries = Vec::new();
            for c in 0..m.cols() {
                for r in 0..m.rows() {
                    let v = m.get(r, c);
                    if !v.is_zero() {
                        let (sd, si) = self.space.locate(c);
                        let (_, di) = self.space.locate(r);
                        entries.push(json!([sd, si, di, json::coefficient_to_json(v)]));
                    }
                }
            }
            if !entries.is_empty() {
                ops.push(json!({"weight": w, "entries": entries}));
            }
        }
        json!({
            "space": json::space_to_json(&self.space),
            "operators": ops,
            "truncation": self.truncation(),
        })
    }
}
