use clap::{Args, Subcommand};
use flagdeg::localization::{verify_identity, IdentityReport, Space};
use flagdeg::roots::Weight;
use flagdeg::{Field, Result};
use serde::Serialize;
use serde_json::json;

use crate::output::Report;
use crate::Context;

#[derive(Args, Debug, Serialize)]
pub struct TrialArgs {
    /// Number of random substitutions.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Work in F_p instead of Q.
    #[arg(long)]
    p: Option<u64>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdentityCmd {
    /// P^{r-1} x P^{s-1} in its Segre embedding.
    Segre {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Grassmannian fixed-point sum.
    Grassmann {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Grassmannian sum weighted by a Schur polynomial.
    GrassmannSchur {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "0")]
        partition: Vec<u64>,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Partial flag sum; the weight is weakly decreasing and ends in 0.
    PartialFlag {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Full flag sum with Vandermonde Euler classes.
    FullFlag {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Symplectic flag sum over signed permutations.
    SymplecticFlag {
        /// Checked against the length of the weight when given.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[command(flatten)]
        trials: TrialArgs,
    },
    /// Power-sum identity with the Vandermonde of a random weight.
    Derivative {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        trials: TrialArgs,
    },
}

fn space(cmd: &IdentityCmd) -> Result<(Space, &TrialArgs)> {
    Ok(match cmd {
        IdentityCmd::Segre { r, s, trials } => (Space::Segre { r: *r, s: *s }, trials),
        IdentityCmd::Grassmann { n, k, trials } => (Space::Grassmann { n: *n, k: *k }, trials),
        IdentityCmd::GrassmannSchur { n, k, partition, trials } => {
            let mut partition = partition.clone();
            while partition.last() == Some(&0) {
                partition.pop();
            }
            (Space::GrassmannSchur { n: *n, k: *k, partition }, trials)
        }
        IdentityCmd::PartialFlag { lambda, trials } => (Space::PartialFlag { lambda: Weight(lambda.clone()) }, trials),
        IdentityCmd::FullFlag { lambda, trials } => (Space::FullFlag { lambda: Weight(lambda.clone()) }, trials),
        IdentityCmd::SymplecticFlag { k, lambda, trials } => {
            if let Some(k) = k {
                crate::require(*k == lambda.len(), format!("k = {k} but the weight has {} entries", lambda.len()))?;
            }
            (Space::SymplecticFlag { lambda: Weight(lambda.clone()) }, trials)
        }
        IdentityCmd::Derivative { n, k, trials } => (Space::DerivativeIdentity { n: *n, k: *k }, trials),
    })
}

pub fn record(report: &mut Report, r: &IdentityReport) {
    let mismatch = r.first_mismatch.as_ref().map(|m| {
        json!({
            "trial": m.trial,
            "expected": m.expected.to_string(),
            "got": m.got.to_string(),
            "substitution": m.substitution,
        })
    });
    report.push(
        "identity",
        json!({
            "space": r.space.tag(),
            "params": r.space.to_string(),
            "field": r.field.to_string(),
            "trials": r.requested,
            "evaluated": r.evaluated,
            "agreements": r.agreements,
            "degenerate": r.degenerate,
            "expected": r.expected.as_ref().map(|v| v.to_string()),
            "first_mismatch": mismatch,
            "passed": r.passed(),
        }),
    );
    report.flag_finding(!r.passed());
}

pub fn run(cmd: &IdentityCmd, ctx: &Context, report: &mut Report) -> Result<()> {
    let (space, args) = space(cmd)?;
    let field = match args.p {
        Some(p) => Field::mod_p(p)?,
        None => Field::Rational,
    };
    let r = verify_identity(&space, args.trials, field, ctx.seed)?;
    record(report, &r);
    Ok(())
}
