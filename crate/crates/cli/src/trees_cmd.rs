use clap::Subcommand;
use prelie::prelie_series::LabeledTree;
use prelie::trees::{enumerate_trees, level_weight, levelizations, Forest, Tree};
use prelie::{Error, Result};

use crate::report::{Artifact, Report};

#[derive(Subcommand)]
pub enum Verb {
    /// List all rooted trees with a given number of vertices.
    Enumerate {
        #[arg(long)]
        vertices: usize,
    },
    /// Levelization counts n_t and weights, for all trees of a size or one tree.
    Levelizations {
        #[arg(long, conflicts_with = "tree", required_unless_present = "tree")]
        vertices: Option<usize>,
        /// A tree such as `(* (*) (* (*)))`.
        #[arg(long)]
        tree: Option<String>,
    },
}


fn trees_for(vertices: Option<usize>, tree: &Option<String>) -> Result<Vec<LabeledTree>> {
    match (vertices, tree) {
        (_, Some(t)) => Ok(vec![Tree::parse(t)?]),
        (Some(n), None) => Ok(enumerate_trees(n)?
            .into_iter()
            .map(|t| Tree::parse(&t.encode()).expect("encoded trees reparse"))
            .collect()),
        (None, None) => Err(Error::Config("give --vertices or --tree".into())),
    }
}

pub fn run(verb: &Verb) -> Result<Report> {
    match verb {
        Verb::Enumerate { vertices } => {
            let trees = enumerate_trees(*vertices)?;
            let mut r = Report::new(format!("rooted trees with {vertices} vertices"));
            r.note(format!("{} trees", trees.len()));
            let mut text = String::new();
            for t in &trees {
                text.push_str(&format!("{}  |Aut|={}  n_t={}\n", t.encode(), t.aut_order(), prelie::trees::cm_weight(t)));
            }
            r.artifact = Artifact::Text(text);
            Ok(r)
        }
        Verb::Levelizations { vertices, tree } => {
            let trees = trees_for(*vertices, tree)?;
            let mut r = Report::new("levelizations");
            let mut text = String::new();
            for t in &trees {
                let levs = levelizations(&Forest::single(t.clone()));
                let mut total = prelie::rational::zero();
                for l in &levs {
                    total += level_weight(l)?;
                }
                let aut = t.aut_order();
                let expected = prelie::Q::new(1.into(), (aut as i64).into());
                r.check(format!("sum of level weights = 1/|Aut| for {}", t.encode()), total == expected);
                text.push_str(&format!("{}  n_t={}  |Aut|={}  sum_weights={}\n", t.encode(), levs.len(), aut, total));
            }
            r.verdict = r.all_passed();
            r.artifact = Artifact::Text(text);
            Ok(r)
        }
    }
}
