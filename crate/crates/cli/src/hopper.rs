use std::collections::BTreeSet;

use clap::{Args, Subcommand};
use flagdeg::bruhat::Permutation;
use flagdeg::exact::{factorize, multinomial};
use flagdeg::grasshopper::{
    adversarial_instance, bruhat_condition, bruhat_search, dominating_perfect, grasshopper_search, hall_check,
    is_matching_sequence, perfect_hall_check, randomized_search_trials, randomized_signed_trials, signed_condition,
    signed_search, violated_hall_set, GrasshopperInstance, TrialSummary,
};
use flagdeg::symfun::{k_b, k_b_table, l_w_poly, mu_b, q_poly, r_w_poly, symplectic_k_b};
use flagdeg::{Error, Exec, Result};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::output::{big, Report};
use crate::Context;

/// Trial division bound for `kb` factorizations.
const FACTOR_LIMIT: u64 = 1_000_000;

#[derive(Args, Debug, Serialize)]
pub struct InstanceArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    jumps: Option<Vec<i64>>,
    /// `I:x,y,..` forbids landing on x, y, .. after jump I. Also written `--forbidI x,y,..`.
    #[arg(long, value_name = "I:LIST", allow_hyphen_values = true)]
    forbid: Vec<String>,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GrasshopperCmd {
    /// Matching, Hall and perfect-Hall characterizations of a budget.
    CheckB {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        /// Random instances to search when the budget is a matching sequence.
        #[arg(long, default_value_t = 0)]
        trials: usize,
    },
    /// Searches one instance for a jump order avoiding the forbidden sets.
    Search {
        #[command(flatten)]
        instance: InstanceArgs,
        /// Only orders below this permutation in Bruhat order.
        #[arg(long, value_delimiter = ',')]
        ceiling: Option<Vec<usize>>,
    },
    /// Builds the instance that defeats a budget violating Hall's condition on P.
    Adversary {
        #[arg(long)]
        k: usize,
        #[arg(long = "P", value_delimiter = ',', required = true)]
        p: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
    },
    /// Budget condition under a Bruhat ceiling and the chain polynomials.
    Bruhat {
        #[arg(long, value_delimiter = ',', required = true)]
        w: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Signed jumps: budget condition, coefficient, and search.
    Signed {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        b: Vec<u64>,
        #[arg(long, default_value_t = 0)]
        trials: usize,
        #[command(flatten)]
        instance: InstanceArgs,
    },
    /// Coefficients K_b of the full flag degree with their factorizations.
    Kb {
        #[arg(long)]
        k: usize,
        #[arg(long, value_delimiter = ',')]
        b: Option<Vec<u64>>,
    },
}

fn parse_forbid(specs: &[String], count: usize) -> Result<Vec<BTreeSet<i64>>> {
    let mut out = vec![BTreeSet::new(); count];
    for spec in specs {
        let (index, list) = spec
            .split_once(':')
            .ok_or_else(|| Error::Contract(format!("forbidden set '{spec}' is not of the form I:LIST")))?;
        let i: usize = index.trim().parse().map_err(|_| Error::Contract(format!("bad forbidden index '{index}'")))?;
        crate::require(1 <= i && i <= count, format!("forbidden index {i} outside 1..={count}"))?;
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let x: i64 = item.parse().map_err(|_| Error::Contract(format!("bad forbidden value '{item}'")))?;
            out[i - 1].insert(x);
        }
    }
    Ok(out)
}

fn instance(args: &InstanceArgs, signed: bool) -> Result<Option<GrasshopperInstance>> {
    let Some(jumps) = &args.jumps else {
        crate::require(args.forbid.is_empty(), "forbidden sets given without --jumps".into())?;
        return Ok(None);
    };
    let count = if signed { jumps.len() } else { jumps.len().saturating_sub(1) };
    Ok(Some(GrasshopperInstance::new(jumps.clone(), parse_forbid(&args.forbid, count)?)))
}

fn instance_json(inst: &GrasshopperInstance) -> Value {
    let forbidden: Vec<Vec<i64>> = inst.forbidden.iter().map(|m| m.iter().copied().collect()).collect();
    json!({
        "jumps": inst.jumps,
        "forbidden": forbidden,
        "budget": inst.budget(),
        "ceiling": inst.ceiling.as_ref().map(|w| w.one_line().to_vec()),
    })
}

fn landings(inst: &GrasshopperInstance, order: &Permutation) -> Vec<i64> {
    let mut pos = 0;
    (1..=inst.k())
        .map(|j| {
            pos += inst.jumps[order.at(j) - 1];
            pos
        })
        .collect()
}

fn trials_record(report: &mut Report, kind: &str, s: &TrialSummary, expected: bool) {
    report.push(
        "trials",
        json!({
            "kind": kind,
            "trials": s.trials,
            "successes": s.successes,
            "first_failure": s.first_failure.as_ref().map(instance_json),
        }),
    );
    report.flag_finding(expected && !s.all_passed());
}

fn exponent(b: &[u64]) -> Vec<u32> {
    b.iter().map(|&x| x as u32).collect()
}

fn triangle(k: usize) -> u64 {
    (k * k.saturating_sub(1) / 2) as u64
}

pub fn run(cmd: &GrasshopperCmd, ctx: &Context, report: &mut Report) -> Result<()> {
    match cmd {
        GrasshopperCmd::CheckB { k, b, trials } => {
            let matching = is_matching_sequence(*k, b)?;
            let hall = hall_check(*k, b)?;
            let perfect = b.len() == k - 1 && b.iter().sum::<u64>() == triangle(*k);
            let perfect_hall = if perfect { Some(perfect_hall_check(*k, b)?) } else { None };
            let kb = if perfect { Some(k_b(*k, b)?) } else { None };
            let kb_nonzero = kb.as_ref().map(|x| *x != BigUint::ZERO);
            let agree = matching == hall
                && perfect_hall.is_none_or(|x| x == matching)
                && kb_nonzero.is_none_or(|x| x == matching);
            report.push(
                "check-b",
                json!({
                    "k": k,
                    "b": b,
                    "matching": matching,
                    "hall": hall,
                    "perfect_hall": perfect_hall,
                    "k_b": kb.as_ref().map(big),
                    "violated_set": violated_hall_set(*k, b)?,
                    "dominating_perfect": dominating_perfect(*k, b)?,
                    "agree": agree,
                }),
            );
            report.flag_finding(!agree);
            if *trials > 0 && matching {
                let s = randomized_search_trials(Exec::default(), *k, b, None, *trials, ctx.seed)?;
                trials_record(report, "search", &s, true);
            }
        }
        GrasshopperCmd::Search { instance: args, ceiling } => {
            let mut inst = instance(args, false)?.ok_or_else(|| Error::Contract("search needs --jumps".into()))?;
            if let Some(w) = ceiling {
                inst = inst.with_ceiling(Permutation::new(w.clone())?);
            }
            let warnings = inst.validate()?;
            let witness = grasshopper_search(&inst)?;
            let b = inst.budget();
            let matching = is_matching_sequence(inst.k(), &b)?;
            let promised = match &inst.ceiling {
                Some(w) if b.iter().sum::<u64>() == w.length() as u64 => Some(bruhat_condition(w, &b)?),
                Some(_) => None,
                None => Some(matching),
            };
            report.push(
                "search",
                json!({
                    "instance": instance_json(&inst),
                    "warnings": warnings,
                    "matching": matching,
                    "guaranteed": promised,
                    "witness": witness.as_ref().map(|w| w.one_line().to_vec()),
                    "landings": witness.as_ref().map(|w| landings(&inst, w)),
                }),
            );
            report.flag_finding(promised == Some(true) && witness.is_none());
        }
        GrasshopperCmd::Adversary { k, p, b } => {
            let inst = adversarial_instance(*k, p, b)?;
            let witness = grasshopper_search(&inst)?;
            report.push(
                "adversary",
                json!({
                    "k": k,
                    "P": p,
                    "b": b,
                    "instance": instance_json(&inst),
                    "search": witness.as_ref().map(|w| w.one_line().to_vec()),
                }),
            );
            report.flag_finding(witness.is_some());
        }
        GrasshopperCmd::Bruhat { w, b, trials, instance: args } => {
            let w = Permutation::new(w.clone())?;
            let condition = bruhat_condition(&w, b)?;
            let r = r_w_poly(&w)?.coef(&exponent(b))?;
            let l = l_w_poly(&w)?.coef(&exponent(b))?;
            let positive = |c: &num_bigint::BigInt| c.sign() == num_bigint::Sign::Plus;
            let agree = condition == positive(&r) && condition == positive(&l);
            report.push(
                "bruhat",
                json!({
                    "w": w.one_line(),
                    "length": w.length(),
                    "b": b,
                    "condition": condition,
                    "r_w_coefficient": r.to_string(),
                    "l_w_coefficient": l.to_string(),
                    "agree": agree,
                }),
            );
            report.flag_finding(!agree);
            if let Some(inst) = instance(args, false)? {
                let inst = inst.with_ceiling(w.clone());
                crate::require(inst.budget() == *b, format!("instance budget {:?} differs from b", inst.budget()))?;
                let witness = bruhat_search(&inst)?;
                report.push(
                    "search",
                    json!({
                        "instance": instance_json(&inst),
                        "witness": witness.as_ref().map(|w| w.one_line().to_vec()),
                        "landings": witness.as_ref().map(|x| landings(&inst, x)),
                    }),
                );
                report.flag_finding(condition && witness.is_none());
            }
            if *trials > 0 && condition {
                let s = randomized_search_trials(Exec::default(), w.size(), b, Some(&w), *trials, ctx.seed)?;
                trials_record(report, "bruhat-search", &s, true);
            }
        }
        GrasshopperCmd::Signed { k, b, trials, instance: args } => {
            let condition = signed_condition(*k, b)?;
            let q = q_poly(*k)?.coef(&exponent(b))?;
            let nonzero = q.sign() == num_bigint::Sign::Plus;
            report.push(
                "signed",
                json!({
                    "k": k,
                    "b": b,
                    "condition": condition,
                    "q_coefficient": q.to_string(),
                    "k_b": big(&symplectic_k_b(*k, b)?),
                    "agree": condition == nonzero,
                }),
            );
            report.flag_finding(condition != nonzero);
            if let Some(inst) = instance(args, true)? {
                crate::require(inst.k() == *k, format!("{} jumps but k = {k}", inst.k()))?;
                let warnings = inst.validate_signed()?;
                let path = signed_search(&inst)?;
                report.push(
                    "signed-search",
                    json!({
                        "instance": instance_json(&inst),
                        "warnings": warnings,
                        "order": path.as_ref().map(|p| p.order.one_line().to_vec()),
                        "signs": path.as_ref().map(|p| p.signs.clone()),
                        "landings": path.as_ref().map(|p| p.landings(&inst.jumps)),
                    }),
                );
                report.flag_finding(condition && inst.budget() == *b && path.is_none());
            }
            if *trials > 0 && condition {
                let s = randomized_signed_trials(Exec::default(), *k, b, *trials, ctx.seed)?;
                trials_record(report, "signed-search", &s, true);
            }
        }
        GrasshopperCmd::Kb { k, b } => run_kb(*k, b.as_deref(), ctx, report)?,
    }
    Ok(())
}

fn factor_json(n: &BigUint) -> Value {
    let (factors, cofactor) = factorize(n, FACTOR_LIMIT);
    let list: Vec<Value> = factors.iter().map(|(q, e)| json!([q.to_string(), e])).collect();
    json!({ "factors": list, "cofactor": big(&cofactor) })
}

fn kb_record(report: &mut Report, k: usize, b: &[u64], mu: &BigUint, kb: &BigUint) -> Result<()> {
    let matching = is_matching_sequence(k, b)?;
    report.push(
        "kb",
        json!({
            "k": k,
            "b": b,
            "mu": big(mu),
            "k_b": big(kb),
            "factorization": factor_json(kb),
            "matching": matching,
        }),
    );
    report.flag_finding(matching == (*kb == BigUint::ZERO));
    Ok(())
}

fn run_kb(k: usize, b: Option<&[u64]>, ctx: &Context, report: &mut Report) -> Result<()> {
    if let Some(b) = b {
        return kb_record(report, k, b, &mu_b(k, b)?, &k_b(k, b)?);
    }
    crate::require(k >= 2, format!("need k >= 2, got {k}"))?;
    let d = triangle(k);
    let rows = flagdeg::exact::binomial(d + k as u64 - 2, k as u64 - 2);
    if rows > BigUint::from(ctx.budget) {
        report.push("kb-table", json!({ "k": k, "complete": false, "rows": big(&rows) }));
        report.truncated();
        return Ok(());
    }
    let table = k_b_table(k)?;
    let mut total = BigUint::ZERO;
    for (b, mu, kb) in &table {
        total += multinomial(d, b)? * kb;
        kb_record(report, k, b, mu, kb)?;
    }
    let expected = flagdeg::exact::factorial(d);
    report.push(
        "kb-table",
        json!({
            "k": k,
            "complete": true,
            "rows": table.len(),
            "weighted_sum": big(&total),
            "expected_sum": big(&expected),
            "sum_agrees": total == expected,
        }),
    );
    report.flag_finding(total != expected);
    Ok(())
}
