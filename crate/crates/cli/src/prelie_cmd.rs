use clap::Subcommand;
use prelie::prelie_series::{self as ps, exp_ad, Generator, PreLieAlgebra, TreeSeries};
use prelie::{Error, Result};

use crate::io::read_input;
use crate::report::{Artifact, Report};

/// Default truncation order for series.
const DEFAULT_ORDER: usize = 5;

#[derive(Subcommand)]
pub enum Verb {
    /// Pre-Lie exponential exp(λ).
    Exp {
        /// Series file (`-` for stdin) or a generator name.
        lambda: String,
    },
    /// Pre-Lie Magnus expansion Ω(a), the logarithm of 1 + a.
    Magnus { a: String },
    /// Baker–Campbell–Hausdorff series Ω(e^x ⊛ e^y - 1).
    Bch { x: String, y: String },
    /// Gauge action (e^λ ⋆ α) ⊛ e^{-λ}.
    GaugeAct { lambda: String, alpha: String },
}

/// A series argument: an existing file, `-` for stdin, or a generator name.
fn series_arg(arg: &str, order: usize) -> Result<TreeSeries> {
    if arg == "-" || std::path::Path::new(arg).is_file() {
        let text = read_input(arg)?;
        return TreeSeries::parse(&text, order).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::parse(pos, format!("{arg}: {msg}")),
            other => other,
        });
    }
    Generator::new(arg).map_err(|_| Error::Config(format!("`{arg}` is neither a file nor a generator name")))?;
    Ok(TreeSeries::generator(arg, order))
}

pub fn run(verb: &Verb, truncation: Option<usize>) -> Result<Report> {
    let order = truncation.unwrap_or(DEFAULT_ORDER);
    if order == 0 {
        return Err(Error::Config("truncation order must be at least 1".into()));
    }
    let mut r;
    let result = match verb {
        Verb::Exp { lambda } => {
            let l = series_arg(lambda, order)?;
            let e = ps::exp(&l)?;
            r = Report::new(format!("exp, order {order}"));
            r.check("magnus(exp(λ) - 1) = λ", ps::magnus(&e.minus(&e.unit_like()))? == l);
            e
        }
        Verb::Magnus { a } => {
            let a = series_arg(a, order)?;
            let om = ps::magnus(&a)?;
            r = Report::new(format!("magnus, order {order}"));
            r.check("exp(Ω(a)) = 1 + a", ps::exp(&om)? == a.plus(&a.unit_like()));
            om
        }
        Verb::Bch { x, y } => {
            let (x, y) = (series_arg(x, order)?, series_arg(y, order)?);
            let b = ps::bch(&x, &y)?;
            r = Report::new(format!("bch, order {order}"));
            r.check("exp(bch(x, y)) = e^x ⊛ e^y", ps::exp(&b)? == ps::exp(&x)?.circle(&ps::exp(&y)?)?);
            b
        }
        Verb::GaugeAct { lambda, alpha } => {
            let (l, a) = (series_arg(lambda, order)?, series_arg(alpha, order)?);
            let g = ps::gauge_act(&l, &a)?;
            r = Report::new(format!("gauge action, order {order}"));
            r.check("(e^λ ⋆ α) ⊛ e^{-λ} = e^{ad_λ}(α)", g == exp_ad(&l, &a));
            g
        }
    };
    r.verdict = r.all_passed();
    r.artifact = Artifact::Text(result.to_string());
    Ok(r)
}
