use clap::{Subcommand, ValueEnum};
use flagdeg::localization::{verify_identity, Space};
use flagdeg::roots::{
    bh_degree, full_flag_degree_via_vandermonde, grassmannian_degree, partial_flag_degree, partition_to_indexset,
    schubert_degree, symplectic_flag_degree, Family, IndexSet, RootSystem, Weight,
};
use flagdeg::{Field, Result};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{big, Report};
use crate::Context;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
pub enum FamilyArg {
    A,
    C,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DegreeCmd {
    /// Plücker degree of the Grassmannian of k-planes in C^n.
    Grassmann {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        k: u64,
        #[arg(long)]
        cross_check: bool,
    },
    /// Degree of the symplectic flag variety for a strict positive weight.
    SymplecticFlag {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[arg(long)]
        cross_check: bool,
    },
    /// Borel–Hirzebruch degree of the minimal orbit.
    Bh {
        #[arg(long, value_enum, ignore_case = true)]
        family: FamilyArg,
        /// Rank; defaults to the length of the weight.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[arg(long)]
        cross_check: bool,
    },
    /// Schubert variety in the Grassmannian, by partition or index set.
    Schubert {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', conflicts_with = "indexset")]
        partition: Option<Vec<u64>>,
        #[arg(long, value_delimiter = ',')]
        indexset: Option<Vec<usize>>,
        #[arg(long)]
        cross_check: bool,
    },
    /// Partial flag variety for a weakly decreasing weight ending in 0.
    PartialFlag {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[arg(long)]
        cross_check: bool,
    },
    /// Full flag variety for a strictly decreasing weight ending in 0.
    FullFlag {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
        lambda: Vec<i64>,
        #[arg(long)]
        cross_check: bool,
    },
}

const CROSS_CHECK_TRIALS: usize = 5;

fn degree_record(report: &mut Report, space: &str, params: Value, dim: u64, degree: &BigUint) {
    report.push("degree", json!({ "space": space, "params": params, "dim": dim, "degree": big(degree) }));
}

fn cross_check(report: &mut Report, method: &str, expected: &BigUint, got: Option<&BigUint>) {
    let agrees = got.map(|g| g == expected);
    report.push("cross-check", json!({ "method": method, "degree": got.map(big), "agrees": agrees }));
    report.flag_finding(agrees == Some(false));
}

fn shifted(lambda: &[i64]) -> Weight {
    let last = *lambda.last().unwrap_or(&0);
    Weight(lambda.iter().map(|x| x - last).collect())
}

pub fn run(cmd: &DegreeCmd, ctx: &Context, report: &mut Report) -> Result<()> {
    match cmd {
        DegreeCmd::Grassmann { n, k, cross_check: check } => {
            let d = grassmannian_degree(*n, *k)?;
            degree_record(report, "grassmann", json!({ "n": n, "k": k }), k * (n - k), &d);
            if *check {
                let bh = bh_degree(RootSystem::type_a(*n as usize)?, &Weight::fundamental(*n as usize, *k as usize))?;
                cross_check(report, "borel-hirzebruch", &d, Some(&bh.degree));
            }
        }
        DegreeCmd::SymplecticFlag { lambda, cross_check: check } => {
            let w = Weight(lambda.clone());
            let d = symplectic_flag_degree(&w)?;
            degree_record(report, "symplectic-flag", json!({ "lambda": lambda }), d.dim, &d.degree);
            if *check {
                let bh = bh_degree(RootSystem::type_c(w.len())?, &w)?;
                cross_check(report, "borel-hirzebruch", &d.degree, Some(&bh.degree));
            }
        }
        DegreeCmd::Bh { family, n, lambda, cross_check: check } => {
            let rank = n.unwrap_or(lambda.len());
            let w = Weight(lambda.clone());
            let fam = match family {
                FamilyArg::A => Family::A,
                FamilyArg::C => Family::C,
            };
            let d = bh_degree(RootSystem::new(fam, rank)?, &w)?;
            let params = json!({ "family": family, "n": rank, "lambda": lambda });
            degree_record(report, "bh", params, d.dim, &d.degree);
            if *check {
                match fam {
                    Family::A => {
                        let closed = partial_flag_degree(&shifted(lambda))?;
                        cross_check(report, "partial-flag", &d.degree, Some(&closed.degree));
                    }
                    Family::C if w.is_strictly_decreasing() && lambda.last().is_some_and(|&x| x > 0) => {
                        let closed = symplectic_flag_degree(&w)?;
                        cross_check(report, "symplectic-flag", &d.degree, Some(&closed.degree));
                    }
                    Family::C => cross_check(report, "none", &d.degree, None),
                }
            }
        }
        DegreeCmd::Schubert { n, k, partition, indexset, cross_check: check } => {
            let (set, partition) = match indexset {
                Some(ix) => {
                    let set = IndexSet::new(ix.clone(), *n)?;
                    crate::require(ix.len() == *k, format!("index set {ix:?} must have {k} elements"))?;
                    let part: Vec<u64> = ix.iter().enumerate().map(|(j, &i)| (n - k + j + 1 - i) as u64).collect();
                    (set, part)
                }
                None => {
                    let part = partition.clone().unwrap_or_default();
                    (partition_to_indexset(&part, *n, *k)?, part)
                }
            };
            let d = schubert_degree(&set);
            let params = json!({ "n": n, "k": k, "partition": partition, "indexset": set.indices() });
            degree_record(report, "schubert", params, d.dim, &d.degree);
            if *check {
                let space = Space::GrassmannSchur { n: *n, k: *k, partition };
                let r = verify_identity(&space, CROSS_CHECK_TRIALS, Field::Rational, ctx.seed)?;
                let got = r.passed().then(|| d.degree.clone());
                report.push(
                    "cross-check",
                    json!({
                        "method": "fixed-point-sum",
                        "trials": r.requested,
                        "agreements": r.agreements,
                        "degree": got.as_ref().map(big),
                        "agrees": r.passed(),
                    }),
                );
                report.flag_finding(!r.passed());
            }
        }
        DegreeCmd::PartialFlag { lambda, cross_check: check } => {
            let w = Weight(lambda.clone());
            let d = partial_flag_degree(&w)?;
            degree_record(report, "partial-flag", json!({ "lambda": lambda }), d.dim, &d.degree);
            if *check {
                let bh = bh_degree(RootSystem::type_a(w.len())?, &w)?;
                cross_check(report, "borel-hirzebruch", &d.degree, Some(&bh.degree));
            }
        }
        DegreeCmd::FullFlag { lambda, cross_check: check } => {
            let w = Weight(lambda.clone());
            let degree = full_flag_degree_via_vandermonde(&w)?;
            let dim = (w.len() * (w.len() - 1) / 2) as u64;
            degree_record(report, "full-flag", json!({ "lambda": lambda }), dim, &degree);
            if *check {
                let bh = bh_degree(RootSystem::type_a(w.len())?, &w)?;
                cross_check(report, "borel-hirzebruch", &degree, Some(&bh.degree));
            }
        }
    }
    Ok(())
}
