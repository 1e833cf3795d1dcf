use clap::Subcommand;
use prelie::graded::GradedSpace;
use prelie::linalg::Matrix;
use prelie::multicomplex::{OperatorTower, Residual, TowerKind, Trivialization};
use prelie::{Error, Result};
use serde_json::{json, Value};

use crate::io::read_json;
use crate::report::{Artifact, Report};

#[derive(Subcommand)]
pub enum Verb {
    /// Maurer–Cartan check of a structure tower.
    McCheck { tower: String },
    /// Gauge action e^λ α e^{-λ}.
    Conjugate {
        tower: String,
        /// Gauge tower λ (weight-0 part must vanish).
        #[arg(long)]
        gauge: String,
    },
    /// Weight-by-weight search for an isotopy from the differential to the tower.
    Trivialize { tower: String },
}

fn load(path: &str, kind: TowerKind, truncation: Option<usize>) -> Result<OperatorTower> {
    let t = OperatorTower::from_json(&read_json(path)?, kind)?;
    match truncation {
        None => Ok(t),
        Some(n) => {
            let dim = t.space().total();
            let comps = (0..=n)
                .map(|w| t.components().get(w).cloned().unwrap_or_else(|| Matrix::zeros(dim, dim)))
                .collect();
            OperatorTower::from_components(t.space().clone(), kind, comps)
        }
    }
}

pub fn matrix_json(space: &GradedSpace, m: &Matrix) -> Value {
    let mut out = Vec::new();
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            let x = m.get(r, c);
            if *x != prelie::rational::zero() {
                let (sd, si) = space.locate(c);
                let (td, ti) = space.locate(r);
                out.push(json!([sd, si, td, ti, x.to_string()]));
            }
        }
    }
    Value::Array(out)
}

fn record(r: &mut Report, name: &str, space: &GradedSpace, outcome: std::result::Result<(), Residual>) {
    match outcome {
        Ok(()) => r.pass(name),
        Err(res) => r.fail(name, format!("fails at weight {}", res.weight), Some(matrix_json(space, &res.difference))),
    }
}

pub fn run(verb: &Verb, truncation: Option<usize>) -> Result<Report> {
    match verb {
        Verb::McCheck { tower } => {
            let t = load(tower, TowerKind::Structure, truncation)?;
            let mut r = Report::new(format!("Maurer-Cartan check, truncation {}", t.truncation()));
            record(&mut r, "α * α = 0", t.space(), t.mc_check()?);
            r.verdict = r.all_passed();
            Ok(r)
        }
        Verb::Conjugate { tower, gauge } => {
            let alpha = load(tower, TowerKind::Structure, truncation)?;
            let lambda = load(gauge, TowerKind::Gauge, Some(alpha.truncation()))?;
            if lambda.space() != alpha.space() {
                return Err(Error::Config("gauge and tower live on different spaces".into()));
            }
            let beta = OperatorTower::conjugate(&lambda, &alpha)?;
            let mut r = Report::new("conjugation");
            let was_mc = alpha.mc_check()?.is_ok();
            if was_mc {
                record(&mut r, "conjugate is Maurer-Cartan", beta.space(), beta.mc_check()?);
            } else {
                r.note("input tower is not Maurer-Cartan; MC preservation not checked");
            }
            let f = lambda.exp_assoc()?;
            record(&mut r, "e^λ * α = (λ.α) * e^λ", beta.space(), OperatorTower::isotopy_check(&f, &alpha, &beta)?);
            r.verdict = r.all_passed();
            r.artifact = Artifact::Json(beta.to_json());
            Ok(r)
        }
        Verb::Trivialize { tower } => {
            let alpha = load(tower, TowerKind::Structure, truncation)?;
            let mut r = Report::new("trivialization");
            if let Err(res) = alpha.mc_check()? {
                return Err(Error::Domain(format!("tower is not Maurer-Cartan (fails at weight {})", res.weight)));
            }
            match alpha.trivialize()? {
                Trivialization::Found { f, lambda } => {
                    let delta = alpha.differential_part();
                    record(&mut r, "f * δ = α * f", alpha.space(), OperatorTower::isotopy_check(&f, &delta, &alpha)?);
                    r.check("exp(λ) = f", lambda.exp_assoc()? == f);
                    r.verdict = r.all_passed();
                    r.artifact = Artifact::Json(json!({"lambda": lambda.to_json(), "isotopy": f.to_json()}));
                }
                Trivialization::Obstructed { weight, rhs } => {
                    r.fail(
                        format!("stage {weight} solvable"),
                        format!("obstructed at weight {weight}"),
                        Some(matrix_json(alpha.space(), &rhs)),
                    );
                    r.verdict = false;
                }
            }
            match alpha.trivial_by_transfer() {
                Ok(t) => r.note(format!("transferred structure on homology vanishes: {t}")),
                Err(e) => r.note(format!("transfer criterion unavailable: {e}")),
            }
            Ok(r)
        }
    }
}
