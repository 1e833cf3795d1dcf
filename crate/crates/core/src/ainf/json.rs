use serde_json::{json, Value};

use super::conv::ConvElement;
use super::multiop::{MultiOp, Space};
use crate::contraction::Contraction;
use crate::error::Result;
use crate::graded::GradedSpace;
use crate::json::{self, structure};
use crate::linalg::Matrix;
use crate::rational::{sign, Q};

fn basis_ref(space: &Space, v: &Value, ctx: &str) -> Result<usize> {
    let pair = json::as_array(v, ctx)?;
    if pair.len() != 2 {
        return Err(structure(format!("{ctx}: expected [degree, index]")));
    }
    let deg = json::as_i64(&pair[0], ctx)?;
    let idx = json::as_usize(&pair[1], ctx)?;
    space.graded().index(deg, idx).map_err(|e| structure(format!("{ctx}: {e}")))
}

fn basis_to_json(space: &Space, i: usize) -> Value {
    let (d, k) = space.graded().locate(i);
    json!([d, k])
}

/// Sign turning `m_n(a_1..a_n)` on `V` into the component on `sV`:
/// `(-1)^{sum_i (n-i)(|a_i|+1)}`, `|a_i|` the unshifted degree.
pub fn unshifted_sign(space: &Space, inputs: &[usize]) -> Q {
    let n = inputs.len();
    let e: i64 = inputs.iter().enumerate().map(|(i, &v)| (n - 1 - i) as i64 * space.degrees()[v]).sum();
    sign(e.rem_euclid(2) == 1)
}

/// Reads a MultiOp. With `unshifted`, the entries describe `m_n` on `V` and
/// `degree` is its unshifted degree.
pub fn multiop_from_json(space: &Space, v: &Value, unshifted: bool, ctx: &str) -> Result<MultiOp> {
    let arity = json::as_usize(json::field(v, "arity", ctx)?, ctx)?;
    if arity == 0 {
        return Err(structure(format!("{ctx}: arity must be at least 1")));
    }
    let mut degree = json::as_i64(json::field(v, "degree", ctx)?, ctx)?;
    if unshifted {
        degree = degree + 1 - arity as i64;
    }
    let mut op = MultiOp::zero(space.clone(), space.clone(), arity, degree);
    for (k, e) in json::as_array(json::field(v, "entries", ctx)?, ctx)?.iter().enumerate() {
        let ectx = format!("{ctx}.entries[{k}]");
        let e = json::as_array(e, &ectx)?;
        if e.len() != 3 {
            return Err(structure(format!("{ectx}: expected [[inputs..], output, coefficient]")));
        }
        let inputs = json::as_array(&e[0], &ectx)?
            .iter()
            .map(|x| basis_ref(space, x, &ectx))
            .collect::<Result<Vec<_>>>()?;
        let out = basis_ref(space, &e[1], &ectx)?;
        let mut c = json::coefficient(&e[2], &ectx)?;
        if unshifted {
            c *= unshifted_sign(space, &inputs);
        }
        op.insert(&inputs, out, c).map_err(|err| structure(format!("{ectx}: {err}")))?;
    }
    Ok(op)
}

pub fn multiop_to_json(op: &MultiOp) -> Value {
    let entries: Vec<Value> = op
        .entries()
        .map(|(inp, o, c)| {
            let inputs: Vec<Value> = inp.iter().map(|&i| basis_to_json(op.source(), i)).collect();
            json!([inputs, basis_to_json(op.target(), o), json::coefficient_to_json(c)])
        })
        .collect();
    json!({"arity": op.arity(), "degree": op.degree(), "entries": entries})
}

/// `{"space": .., "truncation": A, "operations": [..], "convention": "shifted" | "unshifted"}`.
///
/// `expected_degree` is the degree on the shifted space (`-1` for
/// structures, `0` for gauge parameters and morphisms).
pub fn element_from_json(v: &Value, expected_degree: i64, ctx: &str) -> Result<ConvElement> {
    let space = Space::new(json::space_from_json(json::field(v, "space", ctx)?, &format!("{ctx}.space"))?);
    let truncation = json::as_usize(json::field(v, "truncation", ctx)?, ctx)?;
    if truncation == 0 {
        return Err(structure(format!("{ctx}: truncation must be at least 1")));
    }
    let unshifted = match v.get("convention").and_then(Value::as_str) {
        None | Some("shifted") => false,
        Some("unshifted") => true,
        Some(other) => return Err(structure(format!("{ctx}: unknown convention `{other}`"))),
    };
    let mut el = ConvElement::zero(space.clone(), space.clone(), expected_degree, truncation);
    for (k, op) in json::as_array(json::field(v, "operations", ctx)?, ctx)?.iter().enumerate() {
        let octx = format!("{ctx}.operations[{k}]");
        let op = multiop_from_json(&space, op, unshifted, &octx)?;
        if op.arity() > truncation {
            return Err(structure(format!("{octx}: arity {} exceeds truncation {truncation}", op.arity())));
        }
        if op.degree() != expected_degree {
            return Err(structure(format!(
                "{octx}: degree {} on the shifted space, expected {expected_degree}",
                op.degree()
            )));
        }
        let merged = el.component(op.arity()).add(&op);
        el.set(merged)?;
    }
    Ok(el)
}

pub fn element_to_json(el: &ConvElement) -> Value {
    let ops: Vec<Value> = el.components().iter().filter(|c| !c.is_zero()).map(multiop_to_json).collect();
    let mut v = json!({
        "space": json::space_to_json(el.source().graded()),
        "truncation": el.truncation(),
        "operations": ops,
    });
    if el.source() != el.target() {
        v["target_space"] = json::space_to_json(el.target().graded());
    }
    v
}

fn matrix_from_json(v: &Value, src: &GradedSpace, tgt: &GradedSpace, degree: i64, ctx: &str) -> Result<Matrix> {
    let mut m = Matrix::zeros(tgt.total(), src.total());
    for (k, e) in json::as_array(v, ctx)?.iter().enumerate() {
        let ectx = format!("{ctx}[{k}]");
        let e = json::as_array(e, &ectx)?;
        if e.len() != 4 {
            return Err(structure(format!("{ectx}: expected [srcDeg, srcIdx, dstIdx, coefficient]")));
        }
        let sd = json::as_i64(&e[0], &ectx)?;
        let col = src.index(sd, json::as_usize(&e[1], &ectx)?).map_err(|err| structure(format!("{ectx}: {err}")))?;
        let row = tgt
            .index(sd + degree, json::as_usize(&e[2], &ectx)?)
            .map_err(|err| structure(format!("{ectx}: {err}")))?;
        m.add_at(row, col, &json::coefficient(&e[3], &ectx)?);
    }
    Ok(m)
}

fn matrix_to_json(m: &Matrix, src: &GradedSpace, tgt: &GradedSpace) -> Value {
    let mut out = Vec::new();
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            let x = m.get(r, c);
            if !num_traits::Zero::is_zero(x) {
                let (sd, si) = src.locate(c);
                let (_, di) = tgt.locate(r);
                out.push(json!([sd, si, di, json::coefficient_to_json(x)]));
            }
        }
    }
    Value::Array(out)
}

/// `{"small_space": .., "i": [..], "p": [..], "h": [..]}` with entries
/// `[srcDeg, srcIdx, dstIdx, coefficient]`; the differential is the arity-one
/// part of `alpha`.
pub fn contraction_from_json(v: &Value, alpha: &ConvElement) -> Result<Contraction> {
    let ctx = "contraction";
    let big = alpha.source().graded().clone();
    let small = json::space_from_json(json::field(v, "small_space", ctx)?, "contraction.small_space")?;
    let i = matrix_from_json(json::field(v, "i", ctx)?, &small, &big, 0, "contraction.i")?;
    let p = matrix_from_json(json::field(v, "p", ctx)?, &big, &small, 0, "contraction.p")?;
    let h = matrix_from_json(json::field(v, "h", ctx)?, &big, &big, 1, "contraction.h")?;
    Contraction::new(big, small, alpha.component(1).to_matrix(), i, p, h)
}

pub fn contraction_to_json(c: &Contraction) -> Value {
    json!({
        "small_space": json::space_to_json(c.small()),
        "i": matrix_to_json(c.i(), c.small(), c.big()),
        "p": matrix_to_json(c.p(), c.big(), c.small()),
        "h": matrix_to_json(c.h(), c.big(), c.big()),
    })
}
