use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::conv::{ArityResidual, ConvElement};
use super::multiop::{MultiOp, Space};
use super::tensor::{sym_homotopy, TensorOp};
use crate::contraction::Contraction;
use crate::error::{Error, Result};
use crate::linalg::SparseSystem;
use crate::prelie_series::{circle_inverse, grouplike_inverse, magnus};
use crate::rational::Q;

/// A structure `α = δ + ᾱ` together with a contraction of `(V, δ)`.
pub struct Setting<'a> {
    alpha: &'a ConvElement,
    contraction: &'a Contraction,
    small: Space,
    homotopies: Vec<TensorOp>,
}

fn residual(diff: &ConvElement) -> std::result::Result<(), ArityResidual> {
    match diff.first_nonzero() {
        None => Ok(()),
        Some(n) => Err(ArityResidual { arity: n, difference: diff.component(n).clone() }),
    }
}

impl<'a> Setting<'a> {
    pub fn new(alpha: &'a ConvElement, contraction: &'a Contraction) -> Result<Self> {
        let space = alpha.source();
        if space != alpha.target() || (alpha.degree() != -1 && !alpha.is_zero()) {
            return Err(Error::Domain("expected a degree -1 structure on a single space".into()));
        }
        if space.graded() != contraction.big() {
            return Err(Error::Config("contraction and structure live on different spaces".into()));
        }
        if &alpha.component(1).to_matrix() != contraction.d() {
            return Err(Error::Config("contraction differential differs from the arity-one part of the structure".into()));
        }
        let homotopies = (0..=alpha.truncation()).map(|n| sym_homotopy(space, contraction, n)).collect();
        Ok(Setting { alpha, contraction, small: Space::new(contraction.small().clone()), homotopies })
    }

    pub fn space(&self) -> &Space {
        self.alpha.source()
    }

    pub fn small(&self) -> &Space {
        &self.small
    }

    pub fn truncation(&self) -> usize {
        self.alpha.truncation()
    }

    fn unit(&self) -> ConvElement {
        ConvElement::identity(self.space().clone(), self.truncation())
    }

    /// `δ`, the arity-one part.
    pub fn delta(&self) -> ConvElement {
        self.alpha.arity_part(1, 1)
    }

    /// `ᾱ = α - δ`.
    pub fn alpha_bar(&self) -> ConvElement {
        self.alpha.arity_part(2, self.truncation())
    }

    fn pi(&self) -> Result<ConvElement> {
        let s = self.space();
        ConvElement::strict(s.clone(), s.clone(), &self.contraction.pi(), 0, self.truncation())
    }

    /// Strict inclusion `i : H -> V`.
    pub fn inclusion(&self) -> Result<ConvElement> {
        ConvElement::strict(self.small.clone(), self.space().clone(), self.contraction.i(), 0, self.truncation())
    }

    /// `h ∘ ᾱ`.
    pub fn h_alpha(&self) -> ConvElement {
        self.alpha_bar().postcompose(self.contraction.h(), 1, self.space())
    }

    /// `Φ`, the solution of `Φ = 1 + (hᾱ) ⊛ Φ`.
    pub fn phi(&self) -> Result<ConvElement> {
        let one = self.unit();
        let ha = self.h_alpha();
        let mut phi = one.clone();
        for _ in 1..self.truncation() {
            phi = one.add(&ha.circle_direct(&phi)?)?;
        }
        Ok(phi)
    }

    /// `Φ` as `(1 - hᾱ)^{⊛-1}` and as the tree sum `sum_t t(hᾱ)/|Aut t|`.
    pub fn phi_closed_forms(&self) -> Result<(ConvElement, ConvElement)> {
        let g = self.unit().sub(&self.h_alpha())?;
        Ok((circle_inverse(&g)?, grouplike_inverse(&g)?))
    }

    /// `R(x) = -h^*(x ⋆ ᾱ)`, applied arity by arity, where the pullback
    /// `h^*(y) = (-1)^{|y|} y ∘ h_n` carries the Koszul sign of moving `h` past `y`.
    pub fn r_operator(&self, x: &ConvElement) -> Result<ConvElement> {
        let y = x.star(&self.alpha_bar())?;
        let sign = if y.degree().rem_euclid(2) == 1 { Q::one() } else { -Q::one() };
        let mut out = ConvElement::zero(x.source().clone(), x.target().clone(), x.degree(), x.truncation());
        for n in 2..=x.truncation() {
            let comp = y.component(n);
            if comp.is_zero() {
                continue;
            }
            let z = self.homotopies[n].precompose_into(comp)?.scale(&sign);
            out.set(z)?;
        }
        Ok(out)
    }

    /// `Σ_k R^k(x)`.
    pub fn r_series(&self, x: &ConvElement) -> Result<ConvElement> {
        let mut acc = x.clone();
        let mut term = x.clone();
        for _ in 1..self.truncation() {
            term = self.r_operator(&term)?;
            if term.is_zero() {
                break;
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// `Ψ = Σ_k R^k(1)`.
    pub fn psi(&self) -> Result<ConvElement> {
        self.r_series(&self.unit())
    }

    /// `α̂ = (Φ^{-1} ⋆ α) ⊛ Φ`.
    pub fn alpha_hat(&self) -> Result<ConvElement> {
        let phi = self.phi()?;
        circle_inverse(&phi)?.star(self.alpha)?.circle_direct(&phi)
    }

    /// `δ + π ∘ (ᾱ ⊛ Φ)`, the closed form of `α̂`.
    pub fn alpha_hat_closed(&self) -> Result<ConvElement> {
        let t = self.alpha_bar().circle_direct(&self.phi()?)?;
        self.delta().add(&t.postcompose(&self.contraction.pi(), 0, self.space()))
    }

    /// `α̌ = (Ψ ⋆ α) ⊛ Ψ^{-1}`.
    pub fn alpha_check(&self) -> Result<ConvElement> {
        let psi = self.psi()?;
        psi.star(self.alpha)?.circle_direct(&circle_inverse(&psi)?)
    }

    /// `δ + (ᾱ ⊛ Φ) ⊛ π`, the closed form of `α̌`.
    pub fn alpha_check_closed(&self) -> Result<ConvElement> {
        let t = self.alpha_bar().circle_direct(&self.phi()?)?;
        self.delta().add(&t.circle_direct(&self.pi()?)?)
    }

    pub fn transfer(&self) -> Result<Transfer> {
        let phi = self.phi()?;
        let psi = self.psi()?;
        let i = self.inclusion()?;
        let c = self.contraction;
        let a = self.truncation();
        let delta_h = ConvElement::strict(self.small.clone(), self.small.clone(), c.d_small(), -1, a)?;
        let t = self.alpha_bar().circle_direct(&phi)?.postcompose(c.p(), 0, &self.small);
        let beta = delta_h.add(&t.circle_direct(&i)?)?;
        let i_inf = phi.circle_direct(&i)?;
        let p_inf = psi.postcompose(c.p(), 0, &self.small);
        Ok(Transfer { phi, psi, beta, i_inf, p_inf })
    }

    /// The postconditions of the transfer, in a fixed order.
    pub fn transfer_checks(&self, t: &Transfer) -> Result<Vec<Check>> {
        let a = self.truncation();
        let small = &self.small;
        let i = self.inclusion()?;
        let alpha_hat = self.alpha_hat()?;
        let alpha_check = self.alpha_check()?;
        let one_h = ConvElement::identity(small.clone(), a);
        let one = self.unit();
        let p = self.contraction.p();
        let hat_h = alpha_hat.circle_direct(&i)?.postcompose(p, 0, small);
        let check_h = alpha_check.circle_direct(&i)?.postcompose(p, 0, small);
        Ok(vec![
            Check::new("beta is Maurer-Cartan", t.beta.mc_check()?),
            Check::new("p_inf ⊛ i_inf = 1", residual(&t.p_inf.circle_direct(&t.i_inf)?.sub(&one_h)?)),
            Check::new("i ⋆ beta = alpha_hat ⊛ i", i.inf_morphism_check(&t.beta, &alpha_hat)?),
            Check::new("i_inf ⋆ beta = alpha ⊛ i_inf", t.i_inf.inf_morphism_check(&t.beta, self.alpha)?),
            Check::new("p_inf ⋆ alpha = beta ⊛ p_inf", t.p_inf.inf_morphism_check(self.alpha, &t.beta)?),
            Check::new("p alpha_hat i = p alpha_check i", residual(&hat_h.sub(&check_h)?)),
            Check::new(
                "Psi ⊛ Phi = Psi + Phi - 1",
                residual(&t.psi.circle_direct(&t.phi)?.sub(&t.psi.add(&t.phi)?.sub(&one)?)?),
            ),
        ])
    }

    /// The identities `(Ψ ⋆ ᾱ) ⊛ π = (ᾱ ⊛ Φ) ⊛ π` and
    /// `Σ_k R^k(x ⊛ π) = (x ⊛ π) ⊛ Ψ` for a degree-0 element `x`.
    pub fn r_identities(&self, x: &ConvElement) -> Result<[std::result::Result<(), ArityResidual>; 2]> {
        let pi = self.pi()?;
        let psi = self.psi()?;
        let phi = self.phi()?;
        let lhs1 = psi.star(&self.alpha_bar())?.circle_direct(&pi)?;
        let rhs1 = self.alpha_bar().circle_direct(&phi)?.circle_direct(&pi)?;
        let xp = x.circle_direct(&pi)?;
        let lhs2 = self.r_series(&xp)?;
        let rhs2 = xp.circle_direct(&psi)?;
        Ok([residual(&lhs1.sub(&rhs1)?), residual(&lhs2.sub(&rhs2)?)])
    }

    /// Decides gauge triviality through the transferred structure, which
    /// needs a contraction onto homology (`d_H = 0`).
    pub fn gauge_triviality(&self) -> Result<GaugeTriviality> {
        if !self.contraction.d_small().is_zero() {
            return Err(Error::Domain("gauge triviality needs a contraction onto homology (d_H = 0)".into()));
        }
        let transfer = self.transfer()?;
        let obstruction = transfer.beta.first_nonzero().map(|n| ArityResidual {
            arity: n,
            difference: transfer.beta.component(n).clone(),
        });
        Ok(GaugeTriviality { obstruction, transfer })
    }
}

/// Output of the transfer: `Φ`, `Ψ`, the structure `β` on `H`, and the
/// ∞-quasi-isomorphisms `i_∞ : H -> V`, `p_∞ : V -> H`.
#[derive(Clone, Debug)]
pub struct Transfer {
    pub phi: ConvElement,
    pub psi: ConvElement,
    pub beta: ConvElement,
    pub i_inf: ConvElement,
    pub p_inf: ConvElement,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub outcome: std::result::Result<(), ArityResidual>,
}

impl Check {
    fn new(name: &'static str, outcome: std::result::Result<(), ArityResidual>) -> Self {
        Check { name, outcome }
    }

    pub fn passed(&self) -> bool {
        self.outcome.is_ok()
    }
}

#[derive(Clone, Debug)]
pub struct GaugeTriviality {
    /// First nonzero higher operation of the transferred structure.
    pub obstruction: Option<ArityResidual>,
    pub transfer: Transfer,
}

impl GaugeTriviality {
    pub fn is_trivial(&self) -> bool {
        self.obstruction.is_none()
    }
}

/// Result of [`find_trivializer`].
#[derive(Clone, Debug)]
pub enum Trivializer {
    /// `f ⋆ δ = α ⊛ f`, with `f = exp(λ)`.
    Found { f: ConvElement, lambda: ConvElement },
    /// The arity-`arity` equation has no solution; `rhs` is its right-hand side.
    Obstructed { arity: usize, rhs: MultiOp },
}

fn tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..dim).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

/// Searches for an ∞-isotopy `f` from `(V, δ)` to `(V, α)`, solving
/// `Σ_j f_n ∘_j δ - δ ∘ f_n = (α ⊛ f)_n - (f ⋆ δ)_n` one arity at a time.
pub fn find_trivializer(alpha: &ConvElement) -> Result<Trivializer> {
    if alpha.source() != alpha.target() || (alpha.degree() != -1 && !alpha.is_zero()) {
        return Err(Error::Domain("expected a degree -1 structure on a single space".into()));
    }
    if let Err(r) = alpha.mc_check()? {
        return Err(Error::Domain(format!("structure is not Maurer-Cartan (fails at arity {})", r.arity)));
    }
    let space = alpha.source().clone();
    let a = alpha.truncation();
    let delta = alpha.arity_part(1, 1);
    let dmat = alpha.component(1).to_matrix();
    let dim = space.dim();
    let degs = space.degrees();
    // δ[r, c] != 0 : preimages of r and images of c
    let mut pre: Vec<Vec<(usize, Q)>> = vec![Vec::new(); dim];
    let mut img: Vec<Vec<(usize, Q)>> = vec![Vec::new(); dim];
    for r in 0..dim {
        for c in 0..dim {
            let x = dmat.get(r, c);
            if !x.is_zero() {
                pre[r].push((c, x.clone()));
                img[c].push((r, x.clone()));
            }
        }
    }
    let mut f = ConvElement::identity(space.clone(), a);
    for n in 2..=a {
        let err = f.star(&delta)?.sub(&alpha.circle_direct(&f)?)?;
        let rhs = err.component(n).scale(&-Q::one());
        let mut vars: Vec<(Vec<usize>, usize)> = Vec::new();
        for u in tuples(dim, n) {
            let du: i64 = u.iter().map(|&x| degs[x]).sum();
            for o in 0..dim {
                if degs[o] == du {
                    vars.push((u.clone(), o));
                }
            }
        }
        let mut rows: BTreeMap<(Vec<usize>, usize), BTreeMap<usize, Q>> = BTreeMap::new();
        let mut bump = |key: (Vec<usize>, usize), var: usize, c: Q| {
            let row = rows.entry(key).or_default();
            *row.entry(var).or_insert_with(Q::zero) += c;
        };
        for (k, (u, o)) in vars.iter().enumerate() {
            let mut before = 0i64;
            for j in 0..n {
                for (w, x) in &pre[u[j]] {
                    let mut v = u.clone();
                    v[j] = *w;
                    let c = if before.rem_euclid(2) == 1 { -x.clone() } else { x.clone() };
                    bump((v, *o), k, c);
                }
                before += degs[u[j]];
            }
            for (r, x) in &img[*o] {
                bump((u.clone(), *r), k, -x.clone());
            }
        }
        let mut rhs_map: HashMap<(Vec<usize>, usize), Q> = HashMap::new();
        for (u, o, c) in rhs.entries() {
            rhs_map.insert((u.to_vec(), o), c.clone());
            rows.entry((u.to_vec(), o)).or_default();
        }
        let mut sys = SparseSystem::new(vars.len());
        for (key, row) in rows {
            let b = rhs_map.remove(&key).unwrap_or_else(Q::zero);
            sys.add_row(row, b);
        }
        let Some(x) = sys.solve() else {
            return Ok(Trivializer::Obstructed { arity: n, rhs });
        };
        let mut comp = MultiOp::zero(space.clone(), space.clone(), n, 0);
        for ((u, o), c) in vars.iter().zip(x) {
            if !c.is_zero() {
                comp.insert(u, *o, c)?;
            }
        }
        f.set(comp)?;
    }
    let check = f.inf_morphism_check(&delta, alpha)?;
    if let Err(r) = check {
        return Err(Error::CrossCheck(format!("trivializer fails its defining equation at arity {}", r.arity)));
    }
    let lambda = magnus(&f.sub(&ConvElement::identity(space, a))?)?;
    Ok(Trivializer::Found { f, lambda })
}

/// `exp(λ) ⋆ α ⊛ exp(-λ)`, for `λ` of degree 0 with no arity-one part.
pub fn gauge_act(lambda: &ConvElement, alpha: &ConvElement) -> Result<ConvElement> {
    if !lambda.component(1).is_zero() {
        return Err(Error::Domain("gauge parameter must have zero arity-one part".into()));
    }
    if lambda.degree() != 0 && !lambda.is_zero() {
        return Err(Error::Domain("gauge parameter must have degree 0".into()));
    }
    if lambda.source() != alpha.source() || lambda.truncation() != alpha.truncation() {
        return Err(Error::Config("gauge parameter and structure differ in space or truncation".into()));
    }
    crate::prelie_series::gauge_act(lambda, alpha)
}

impl Trivializer {
    pub fn is_found(&self) -> bool {
        matches!(self, Trivializer::Found { .. })
    }
}

