//! Contractions `(i, p, h)` of a chain complex `(V, d)` onto `(H, p d i)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{check_homogeneous, GradedSpace};
use crate::linalg::Matrix;
use crate::rational::Q;

/// `i : H -> V`, `p : V -> H` of degree 0 and `h : V -> V` of degree +1 with
/// `ip - id = dh + hd`, `pi = id`, `h^2 = 0`, `ph = 0`, `hi = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    big: GradedSpace,
    small: GradedSpace,
    d: Matrix,
    d_small: Matrix,
    i: Matrix,
    p: Matrix,
    h: Matrix,
}

impl Contraction {
    pub fn new(big: GradedSpace, small: GradedSpace, d: Matrix, i: Matrix, p: Matrix, h: Matrix) -> Result<Self> {
        check_homogeneous(&d, &big, &big, -1, "d")?;
        check_homogeneous(&i, &small, &big, 0, "i")?;
        check_homogeneous(&p, &big, &small, 0, "p")?;
        check_homogeneous(&h, &big, &big, 1, "h")?;
        let n = big.total();
        if !d.mul(&d).is_zero() {
            return Err(Error::Validation("d^2 = 0 fails".into()));
        }
        let lhs = i.mul(&p).sub(&Matrix::identity(n));
        let rhs = d.mul(&h).add(&h.mul(&d));
        if lhs != rhs {
            return Err(Error::Validation("ip - id = dh + hd fails".into()));
        }
        if p.mul(&i) != Matrix::identity(small.total()) {
            return Err(Error::Validation("pi = id fails".into()));
        }
        if !h.mul(&h).is_zero() {
            return Err(Error::Validation("h^2 = 0 fails".into()));
        }
        if !p.mul(&h).is_zero() {
            return Err(Error::Validation("ph = 0 fails".into()));
        }
        if !h.mul(&i).is_zero() {
            return Err(Error::Validation("hi = 0 fails".into()));
        }
        let d_small = p.mul(&d).mul(&i);
        Ok(Contraction { big, small, d, d_small, i, p, h })
    }

    /// Contraction onto homology: `V = B ⊕ H ⊕ C` per degree with `d : C ≅ B`,
    /// `h = -(d|C)^(-1)` on boundaries and zero on `H ⊕ C`.
    pub fn onto_homology(big: GradedSpace, d: Matrix) -> Result<Self> {
        check_homogeneous(&d, &big, &big, -1, "d")?;
        if !d.mul(&d).is_zero() {
            return Err(Error::Validation("d^2 = 0 fails".into()));
        }
        let n = big.total();
        let degrees: Vec<i64> = big.dims().keys().copied().collect();
        // per degree: complement C_k of the cycles
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut cycles: Vec<Matrix> = Vec::new();
        for &k in &degrees {
            let (off, dim) = (big.offset(k), big.dim(k));
            let cols: Vec<usize> = (off..off + dim).collect();
            let z = d.select_columns(&cols).kernel();
            let z_full = embed(&z, off, n);
            let mut span = z_full.clone();
            let mut c = Vec::new();
            for j in off..off + dim {
                let e = unit_column(n, j);
                let cand = span.hstack(&e);
                if cand.rank() > span.rank() {
                    span = cand;
                    c.push(j);
                }
            }
            comps.push(c);
            cycles.push(z_full);
        }
        // boundaries B_k = d(C_{k+1}); homology reps extend B_k inside Z_k
        let mut basis = Matrix::zeros(n, 0);
        let mut h_cols = Vec::new();
        let mut small_dims = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new(); // (column of b = d c in new basis, column of c)
        let mut new_cols: Vec<Matrix> = Vec::new();
        for (pos, &k) in degrees.iter().enumerate() {
            let above = degrees.iter().position(|&x| x == k + 1);
            let mut b = Matrix::zeros(n, 0);
            if let Some(a) = above {
                for &c in &comps[a] {
                    b = b.hstack(&d.select_columns(&[c]));
                }
            }
            let mut span = b.clone();
            let mut reps = Matrix::zeros(n, 0);
            let z = &cycles[pos];
            for j in 0..z.cols() {
                let col = z.select_columns(&[j]);
                let cand = span.hstack(&col);
                if cand.rank() > span.rank() {
                    span = cand;
                    reps = reps.hstack(&col);
                }
            }
            small_dims.push((k, reps.cols()));
            new_cols.push(b);
            new_cols.push(reps);
            let mut cm = Matrix::zeros(n, 0);
            for &c in &comps[pos] {
                cm = cm.hstack(&unit_column(n, c));
            }
            new_cols.push(cm);
        }
        // assemble basis in order B, H, C per degree, remember roles
        let mut b_start = Vec::new();
        let mut c_start = Vec::new();
        for (pos, _) in degrees.iter().enumerate() {
            let (b, reps, cm) = (&new_cols[3 * pos], &new_cols[3 * pos + 1], &new_cols[3 * pos + 2]);
            b_start.push(basis.cols());
            basis = basis.hstack(b);
            for j in 0..reps.cols() {
                h_cols.push(basis.cols() + j);
            }
            basis = basis.hstack(reps);
            c_start.push(basis.cols());
            basis = basis.hstack(cm);
        }
        for (pos, &k) in degrees.iter().enumerate() {
            if let Some(a) = degrees.iter().position(|&x| x == k + 1) {
                for j in 0..comps[a].len() {
                    pairs.push((b_start[pos] + j, c_start[a] + j));
                }
            }
        }
        let inv = basis.inverse().ok_or_else(|| Error::Validation("failed to split the complex".into()))?;
        let mut h_new = Matrix::zeros(n, n);
        for (b, c) in pairs {
            h_new.set(c, b, -Q::one());
        }
        let h = basis.mul(&h_new).mul(&inv);
        let i = basis.select_columns(&h_cols);
        let p = Matrix::from_fn(h_cols.len(), n, |r, c| inv.get(h_cols[r], c).clone());
        let small = GradedSpace::new(small_dims);
        Contraction::new(big, small, d, i, p, h)
    }

    /// Transports the contraction along a degree-preserving automorphism `g` of `V`.
    pub fn conjugated(&self, g: &Matrix) -> Result<Self> {
        check_homogeneous(g, &self.big, &self.big, 0, "g")?;
        let gi = g.inverse().ok_or_else(|| Error::Domain("conjugating matrix is singular".into()))?;
        Contraction::new(
            self.big.clone(),
            self.small.clone(),
            g.mul(&self.d).mul(&gi),
            g.mul(&self.i),
            self.p.mul(&gi),
            g.mul(&self.h).mul(&gi),
        )
    }

    pub fn big(&self) -> &GradedSpace {
        &self.big
    }

    pub fn small(&self) -> &GradedSpace {
        &self.small
    }

    pub fn d(&self) -> &Matrix {
        &self.d
    }

    /// Induced differential `p d i` on the small space.
    pub fn d_small(&self) -> &Matrix {
        &self.d_small
    }

    pub fn i(&self) -> &Matrix {
        &self.i
    }

    pub fn p(&self) -> &Matrix {
        &self.p
    }

    pub fn h(&self) -> &Matrix {
        &self.h
    }

    /// `π = ip`.
    pub fn pi(&self) -> Matrix {
        self.i.mul(&self.p)
    }

    pub fn is_onto_homology(&self) -> bool {
        self.d_small.is_zero()
    }
}

fn unit_column(n: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, 1);
    m.set(j, 0, Q::one());
    m
}

fn embed(z: &Matrix, off: usize, n: usize) -> Matrix {
    Matrix::from_fn(n, z.cols(), |r, c| if r >= off && r < off + z.rows() { z.get(r - off, c).clone() } else { Q::zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn homology_of_small_complexes() {
        // k1 -> k0 acyclic plus an extra class in degree 0
        let v = GradedSpace::new([(0, 2), (1, 1)]);
        let mut d = Matrix::zeros(3, 3);
        d.set(1, 2, q(1));
        d.set(0, 2, q(1));
        let c = Contraction::onto_homology(v, d).unwrap();
        assert_eq!(c.small().dims().iter().map(|(k, n)| (*k, *n)).collect::<Vec<_>>(), vec![(0, 1)]);
        assert!(c.is_onto_homology());
    }

    #[test]
    fn rejects_bad_data() {
        let v = GradedSpace::new([(0, 1)]);
        let id = Matrix::identity(1);
        let z = Matrix::zeros(1, 1);
        Contraction::new(v.clone(), v.clone(), z.clone(), id.clone(), id.clone(), z.clone()).unwrap();
        let err = Contraction::new(v.clone(), v.clone(), z.clone(), id.clone(), id.scale(&q(2)), z.clone()).unwrap_err();
        assert!(err.to_string().contains("ip - id"));
        let h = Matrix::identity(1);
        assert!(Contraction::new(v.clone(), v, z, id.clone(), id, h).is_err());
    }

    #[test]
    fn conjugation_preserves_identities() {
        let v = GradedSpace::new([(0, 2), (1, 2)]);
        let mut d = Matrix::zeros(4, 4);
        d.set(0, 2, q(1));
        let c = Contraction::onto_homology(v, d).unwrap();
        let mut g = Matrix::identity(4);
        g.set(0, 1, q(3));
        g.set(3, 2, q(-2));
        let c2 = c.conjugated(&g).unwrap();
        assert_eq!(c2.small().total(), 2);
    }
}
