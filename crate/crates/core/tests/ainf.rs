mod common;

use std::collections::BTreeMap;

use common::*;
use num_traits::Zero;
use prelie::ainf::{
    binomial_identities_check, check_homotopy_absorption, check_homotopy_splitting, find_trivializer, gauge_act,
    json::unshifted_sign, ConvElement, MultiOp, Setting, Space, Trivializer,
};
use prelie::graded::GradedSpace;
use prelie::linalg::Matrix;
use prelie::prelie_series::{bch, circle_by_braces};
use prelie::rational::{frac, q, Q};
use rand::Rng;

type Vector = BTreeMap<usize, Q>;

fn add(v: &mut Vector, k: usize, c: Q) {
    *v.entry(k).or_insert_with(Q::zero) += c;
}

fn clean(mut v: Vector) -> Vector {
    v.retain(|_, c| !c.is_zero());
    v
}

fn mat_apply(m: &Matrix, v: &Vector) -> Vector {
    let mut out = Vector::new();
    for (c, x) in v {
        for r in 0..m.rows() {
            if !m.get(r, *c).is_zero() {
                add(&mut out, r, m.get(r, *c) * x);
            }
        }
    }
    clean(out)
}

/// Bilinear evaluation of an arity-two operator on vectors (degree 0 maps
/// inside, so no Koszul signs arise).
fn op2(m: &MultiOp, x: &Vector, y: &Vector) -> Vector {
    let mut out = Vector::new();
    for (i, a) in x {
        for (j, b) in y {
            if let Some(img) = m.apply(&[*i, *j]) {
                for (o, c) in img {
                    add(&mut out, *o, a * b * c);
                }
            }
        }
    }
    clean(out)
}

fn basis(i: usize) -> Vector {
    [(i, q(1))].into_iter().collect()
}

// -- DGA oracle -------------------------------------------------------------

/// Unshifted DGA data: `d` and `m(a, b)` on basis vectors.
struct Dga {
    space: GradedSpace,
    d: Matrix,
    m: BTreeMap<(usize, usize), Vector>,
}

impl Dga {
    fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, a) in x {
            for (j, b) in y {
                if let Some(img) = self.m.get(&(*i, *j)) {
                    for (o, c) in img {
                        add(&mut out, *o, a * b * c);
                    }
                }
            }
        }
        clean(out)
    }

    fn is_dga(&self) -> bool {
        let n = self.space.total();
        let degs = self.space.basis_degrees();
        if !self.d.mul(&self.d).is_zero() {
            return false;
        }
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (basis(i), basis(j));
                let lhs = mat_apply(&self.d, &self.mul(&a, &b));
                let mut rhs = self.mul(&mat_apply(&self.d, &a), &b);
                let s = if degs[i] % 2 == 0 { q(1) } else { q(-1) };
                for (k, c) in self.mul(&a, &mat_apply(&self.d, &b)) {
                    add(&mut rhs, k, s.clone() * c);
                }
                if lhs != clean(rhs) {
                    return false;
                }
                for k in 0..n {
                    let c = basis(k);
                    if self.mul(&self.mul(&a, &b), &c) != self.mul(&a, &self.mul(&b, &c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn to_structure(&self, truncation: usize) -> ConvElement {
        let s = Space::new(self.space.clone());
        let mut m2 = MultiOp::zero(s.clone(), s.clone(), 2, -1);
        for ((i, j), img) in &self.m {
            for (o, c) in img {
                m2.insert(&[*i, *j], *o, c * unshifted_sign(&s, &[*i, *j])).unwrap();
            }
        }
        let d = MultiOp::from_matrix(s.clone(), s.clone(), &self.d, -1).unwrap();
        ConvElement::from_ops(s.clone(), s, -1, truncation, vec![d, m2]).unwrap()
    }
}

fn random_dga_data(rng: &mut rand_chacha::ChaCha8Rng) -> Dga {
    let space = GradedSpace::new([(0, 2), (1, 1)]);
    let degs = space.basis_degrees();
    let n = degs.len();
    let mut m = BTreeMap::new();
    for i in 0..n {
        for j in 0..n {
            for o in 0..n {
                if degs[o] == degs[i] + degs[j] && rng.gen_bool(0.25) {
                    m.entry((i, j)).or_insert_with(Vector::new).insert(o, small_q(rng));
                }
            }
        }
    }
    let d = if rng.gen_bool(0.5) { random_graded_map(rng, &space, &space, -1, 0.5) } else { Matrix::zeros(n, n) };
    Dga { space, d, m }
}

#[test]
fn maurer_cartan_matches_dga_axioms() {
    let mut rng = rng(1);
    let mut agreed = [0usize; 2];
    for _ in 0..300 {
        let dga = random_dga_data(&mut rng);
        let expected = dga.is_dga();
        let got = dga.to_structure(3).mc_check().unwrap().is_ok();
        assert_eq!(got, expected);
        agreed[expected as usize] += 1;
    }
    assert!(agreed[1] > 5, "too few associative samples: {agreed:?}");
    for name in ["massey", "formal", "idempotent", "truncated_polynomial"] {
        let alpha = ajson_structure(name);
        assert!(alpha.mc_check().unwrap().is_ok(), "{name}");
    }
}

fn ajson_structure(name: &str) -> ConvElement {
    let v = prelie::json::parse_document(&fixture(name)).unwrap();
    prelie::ainf::json::element_from_json(&v, -1, name).unwrap()
}

#[test]
fn non_associative_product_fails_at_arity_three() {
    let mut alpha = ajson_structure("truncated_polynomial");
    let s = alpha.source().clone();
    let mut m2 = alpha.component(2).clone();
    // 1·x = x + x^2 breaks (1·1)·x = 1·(1·x)
    m2 = m2.add(&{
        let mut p = MultiOp::zero(s.clone(), s.clone(), 2, -1);
        p.insert(&[0, 1], 2, q(1)).unwrap();
        p
    });
    alpha.set(m2).unwrap();
    let r = alpha.mc_check().unwrap().unwrap_err();
    assert_eq!(r.arity, 3);
}

// -- convolution algebra ------------------------------------------------------

fn random_element(rng: &mut rand_chacha::ChaCha8Rng, s: &Space, a: usize, degree: i64) -> ConvElement {
    let ops = (1..=a).map(|n| random_op(rng, s, n, degree, 4)).collect();
    ConvElement::from_ops(s.clone(), s.clone(), degree, a, ops).unwrap()
}

#[test]
fn circle_by_braces_equals_full_composite() {
    let mut rng = rng(2);
    for k in 0..25 {
        let s = Space::new(random_space(&mut rng, -1..=1));
        if s.dim() == 0 {
            continue;
        }
        let a = 2 + k % 3;
        let x = random_element(&mut rng, &s, a, if k % 2 == 0 { 0 } else { -1 });
        let g = ConvElement::identity(s.clone(), a).add(&random_gauge(&mut rng, &s, a, 4)).unwrap();
        assert_eq!(circle_by_braces(&x, &g).unwrap(), x.circle_direct(&g).unwrap());
    }
}

#[test]
fn star_is_right_pre_lie_and_circle_is_associative() {
    let mut rng = rng(3);
    for _ in 0..10 {
        let s = Space::new(random_space(&mut rng, 0..=2));
        if s.dim() == 0 {
            continue;
        }
        let a = 4;
        let x = random_element(&mut rng, &s, a, 0);
        let y = random_gauge(&mut rng, &s, a, 4);
        let z = random_gauge(&mut rng, &s, a, 4);
        let assoc = |x: &ConvElement, y: &ConvElement, z: &ConvElement| {
            x.star(y).unwrap().star(z).unwrap().sub(&x.star(&y.star(z).unwrap()).unwrap()).unwrap()
        };
        assert_eq!(assoc(&x, &y, &z), assoc(&x, &z, &y));
        let one = ConvElement::identity(s.clone(), a);
        let g = one.add(&y).unwrap();
        let h = one.add(&z).unwrap();
        let lhs = x.circle_direct(&g).unwrap().circle_direct(&h).unwrap();
        let rhs = x.circle_direct(&g.circle_direct(&h).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(x.circle_direct(&one).unwrap(), x);
        assert_eq!(one.circle_direct(&g).unwrap(), g);
    }
}

#[test]
fn gauge_action_preserves_mc_and_is_a_group_action() {
    let mut rng = rng(4);
    let (alpha, _) = ainf_fixture("massey");
    let alpha = with_truncation(&alpha, 4);
    let s = alpha.source().clone();
    for _ in 0..4 {
        let l = random_gauge(&mut rng, &s, 4, 3);
        let m = random_gauge(&mut rng, &s, 4, 3);
        let moved = gauge_act(&l, &alpha).unwrap();
        assert!(moved.mc_check().unwrap().is_ok());
        let twice = gauge_act(&m, &moved).unwrap();
        assert_eq!(twice, gauge_act(&bch(&m, &l).unwrap(), &alpha).unwrap());
    }
    let bad = random_element(&mut rng, &s, 4, 0);
    assert!(gauge_act(&bad, &alpha).is_err() || bad.component(1).is_zero());
}

// -- symmetric homotopies ------------------------------------------------------

#[test]
fn symmetric_homotopy_identities() {
    let mut rng = rng(5);
    for _ in 0..4 {
        let c = random_contraction(&mut rng);
        let s = Space::new(c.big().clone());
        for k in 0..=2 {
            for l in 0..=2 - k {
                assert!(check_homotopy_absorption(&s, &c, k, l), "k={k} l={l}");
            }
        }
        for p in 1..=3 {
            for q in 1..=4 - p {
                assert!(check_homotopy_splitting(&s, &c, p, q), "p={p} q={q}");
            }
        }
    }
}

#[test]
fn binomial_identities() {
    assert!(binomial_identities_check(6));
}

// -- kernels and transfer ------------------------------------------------------

#[test]
fn phi_agrees_with_closed_forms_and_low_arity_formula() {
    for name in ["massey", "idempotent", "formal"] {
        let (alpha, c) = ainf_fixture(name);
        let st = Setting::new(&alpha, &c).unwrap();
        let phi = st.phi().unwrap();
        let (inv, trees) = st.phi_closed_forms().unwrap();
        assert_eq!(phi, inv, "{name}");
        assert_eq!(phi, trees, "{name}");
        // Φ_2 = h m_2
        let m2 = alpha.component(2);
        let s = alpha.source();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let expected = mat_apply(c.h(), &op2(m2, &basis(i), &basis(j)));
                let got = clean(phi.component(2).apply(&[i, j]).cloned().unwrap_or_default());
                assert_eq!(got, expected);
            }
        }
    }
}

#[test]
fn psi_leading_term() {
    let (alpha, c) = ainf_fixture("massey");
    let st = Setting::new(&alpha, &c).unwrap();
    let psi = st.psi().unwrap();
    let s = alpha.source();
    let degs = s.degrees();
    let m2 = alpha.component(2);
    let pi = c.pi();
    let half = frac(1, 2);
    for i in 0..s.dim() {
        for j in 0..s.dim() {
            let (v, w) = (basis(i), basis(j));
            let sgn = if degs[i] % 2 == 0 { q(1) } else { q(-1) };
            let mut expected = Vector::new();
            for (term, coef) in [
                (op2(m2, &mat_apply(c.h(), &v), &w), half.clone()),
                (op2(m2, &mat_apply(c.h(), &v), &mat_apply(&pi, &w)), half.clone()),
                (op2(m2, &v, &mat_apply(c.h(), &w)), &half * &sgn),
                (op2(m2, &mat_apply(&pi, &v), &mat_apply(c.h(), &w)), &half * &sgn),
            ] {
                // Ψ_2 = -h_2^*(m_2) = m_2 ∘ h_2, the pullback carrying (-1)^{|m_2|}
                for (k, x) in term {
                    add(&mut expected, k, x * &coef);
                }
            }
            let got = clean(psi.component(2).apply(&[i, j]).cloned().unwrap_or_default());
            assert_eq!(got, clean(expected));
        }
    }
}

#[test]
fn twisted_structures() {
    let mut rng = rng(6);
    let mut cases = Vec::new();
    for name in ["idempotent", "massey"] {
        let (alpha, c) = ainf_fixture(name);
        cases.push((with_truncation(&alpha, 4), c.clone()));
        let l = random_gauge(&mut rng, alpha.source(), 4, 3);
        cases.push((gauge_act(&l, &with_truncation(&alpha, 4)).unwrap(), c));
    }
    for (alpha, c) in &cases {
        let st = Setting::new(alpha, c).unwrap();
        let hat = st.alpha_hat().unwrap();
        let chk = st.alpha_check().unwrap();
        assert_eq!(hat, st.alpha_hat_closed().unwrap());
        assert_eq!(chk, st.alpha_check_closed().unwrap());
        assert!(hat.mc_check().unwrap().is_ok());
        assert!(chk.mc_check().unwrap().is_ok());
        let pi = c.pi();
        let s = alpha.source();
        let pis = ConvElement::strict(s.clone(), s.clone(), &pi, 0, alpha.truncation()).unwrap();
        let hat_bar = hat.arity_part(2, alpha.truncation());
        let chk_bar = chk.arity_part(2, alpha.truncation());
        assert_eq!(hat_bar.postcompose(&pi, 0, s), hat_bar);
        assert_eq!(chk_bar.circle_direct(&pis).unwrap(), chk_bar);

        let st_hat = Setting::new(&hat, c).unwrap();
        let st_chk = Setting::new(&chk, c).unwrap();
        assert_eq!(st_hat.alpha_hat().unwrap(), hat);
        assert_eq!(st_chk.alpha_check().unwrap(), chk);
        assert_eq!(st_hat.alpha_check().unwrap(), st_chk.alpha_hat().unwrap());

        for (k, r) in st.r_identities(&random_element(&mut rng, s, alpha.truncation(), 0)).unwrap().iter().enumerate() {
            assert!(r.is_ok(), "R identity {}", k + 1);
        }
    }
}

#[test]
fn transfer_postconditions() {
    let mut rng = rng(7);
    for name in ["idempotent", "massey", "formal"] {
        let (alpha, c) = ainf_fixture(name);
        let g = random_automorphism(&mut rng, c.big());
        for (alpha, c) in [(alpha.clone(), c.clone()), (transport(&alpha, &g), c.conjugated(&g).unwrap())] {
            let alpha = with_truncation(&alpha, 4);
            let st = Setting::new(&alpha, &c).unwrap();
            let t = st.transfer().unwrap();
            for check in st.transfer_checks(&t).unwrap() {
                assert!(check.passed(), "{name}: {} {:?}", check.name, check.outcome);
            }
        }
    }
}

#[test]
fn transferred_low_arities_match_direct_expansion() {
    let (alpha, c) = ainf_fixture("massey");
    let st = Setting::new(&alpha, &c).unwrap();
    let beta = st.transfer().unwrap().beta;
    let m2 = alpha.component(2);
    let hs = Space::new(c.small().clone());
    let cols = |m: &Matrix, k: usize| -> Vector { clean((0..m.rows()).map(|r| (r, m.get(r, k).clone())).collect()) };
    let hm2 = |x: &Vector, y: &Vector| mat_apply(c.h(), &op2(m2, x, y));
    for a in 0..hs.dim() {
        for b in 0..hs.dim() {
            let (ia, ib) = (cols(c.i(), a), cols(c.i(), b));
            let expected = mat_apply(c.p(), &op2(m2, &ia, &ib));
            assert_eq!(clean(beta.component(2).apply(&[a, b]).cloned().unwrap_or_default()), expected);
            for e in 0..hs.dim() {
                let ie = cols(c.i(), e);
                let mut x = op2(m2, &hm2(&ia, &ib), &ie);
                for (k, v) in op2(m2, &ia, &hm2(&ib, &ie)) {
                    add(&mut x, k, v);
                }
                let expected = mat_apply(c.p(), &clean(x));
                let got = clean(beta.component(3).apply(&[a, b, e]).cloned().unwrap_or_default());
                assert_eq!(got, expected, "beta_3 on {a} {b} {e}");
            }
        }
    }
    // the Massey product <a, b, c> = ± z
    assert!(!beta.component(3).get(&[0, 1, 2], 3).is_zero());
}

#[test]
fn trivial_structure_transfers_trivially() {
    let (alpha, c) = ainf_fixture("massey");
    let delta = alpha.arity_part(1, 1);
    let st = Setting::new(&delta, &c).unwrap();
    let t = st.transfer().unwrap();
    assert!(t.beta.is_zero());
    assert_eq!(t.i_inf, st.inclusion().unwrap());
    assert_eq!(t.p_inf.first_nonzero(), Some(1));
    assert!(t.p_inf.arity_part(2, 5).is_zero());
    assert_eq!(t.p_inf.component(1).to_matrix(), *c.p());
}

// -- gauge triviality ------------------------------------------------------------

#[test]
fn gauge_triviality_decisions() {
    let (massey, c) = ainf_fixture("massey");
    let st = Setting::new(&massey, &c).unwrap();
    let g = st.gauge_triviality().unwrap();
    assert!(!g.is_trivial());
    assert_eq!(g.obstruction.as_ref().unwrap().arity, 3);

    let (formal, c) = ainf_fixture("formal");
    assert!(Setting::new(&formal, &c).unwrap().gauge_triviality().unwrap().is_trivial());

    let (idem, c) = ainf_fixture("idempotent");
    let g = Setting::new(&idem, &c).unwrap().gauge_triviality().unwrap();
    assert_eq!(g.obstruction.unwrap().arity, 2);

    // acyclic: H = 0
    let s = Space::new(GradedSpace::new([(0, 1), (1, 1)]));
    let d = Matrix::from_rows(vec![vec![q(0), q(1)], vec![q(0), q(0)]], 2);
    let mut rng = rng(8);
    let delta = ConvElement::strict(s.clone(), s.clone(), &d, -1, 4).unwrap();
    let alpha = gauge_act(&random_gauge(&mut rng, &s, 4, 4), &delta).unwrap();
    let c = prelie::contraction::Contraction::onto_homology(s.graded().clone(), d).unwrap();
    assert!(Setting::new(&alpha, &c).unwrap().gauge_triviality().unwrap().is_trivial());
}

#[test]
fn find_trivializer_on_gauged_trivial_structures() {
    let mut rng = rng(9);
    let (massey, _) = ainf_fixture("massey");
    let delta = with_truncation(&massey.arity_part(1, 1), 4);
    let s = delta.source().clone();
    for _ in 0..5 {
        let alpha = gauge_act(&random_gauge(&mut rng, &s, 4, 4), &delta).unwrap();
        match find_trivializer(&alpha).unwrap() {
            Trivializer::Found { f, lambda } => {
                assert!(f.inf_morphism_check(&delta, &alpha).unwrap().is_ok());
                assert_eq!(prelie::prelie_series::exp(&lambda).unwrap(), f);
            }
            Trivializer::Obstructed { arity, .. } => panic!("obstructed at arity {arity}"),
        }
    }
    match find_trivializer(&with_truncation(&massey, 4)).unwrap() {
        Trivializer::Obstructed { arity, rhs } => {
            assert_eq!(arity, 3);
            assert!(!rhs.is_zero());
        }
        Trivializer::Found { .. } => panic!("Massey structure trivialized"),
    }
    assert!(find_trivializer(&delta).unwrap().is_found());
}

#[test]
fn json_round_trip() {
    let (alpha, c) = ainf_fixture("massey");
    let v = prelie::ainf::json::element_to_json(&alpha);
    assert_eq!(prelie::ainf::json::element_from_json(&v, -1, "x").unwrap(), alpha);
    let cv = prelie::ainf::json::contraction_to_json(&c);
    assert_eq!(prelie::ainf::json::contraction_from_json(&cv, &alpha).unwrap(), c);
    let bad = serde_json::json!({"space": {"dims": {"0": 1}}, "truncation": 2,
        "operations": [{"arity": 2, "degree": 0, "entries": [[[[0, 0], [0, 0]], [0, 0], "1"]]}]});
    assert!(prelie::ainf::json::element_from_json(&bad, -1, "x").is_err());
}
