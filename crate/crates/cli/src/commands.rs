use std::fmt::Write as _;
use std::sync::Arc;

use anyhow::{Context, Result};
use hyperblocks::blocks::block_label;
use hyperblocks::catalog::{append_jsonl, read_catalog, run_id, CatalogRecord};
use hyperblocks::census::{self, Census, CensusConfig, Mode, Shard};
use hyperblocks::counting::decompose_and_bound;
use hyperblocks::fetvins::{
    ample_solve, brute_force_solve_bounded, check_fetvins_bounded, Hyperfield, LinearSystem,
    DEFAULT_CHECK_BUDGET, DEFAULT_SOLVE_BUDGET,
};
use hyperblocks::quotient::{excludes_infinite_quotient, quotient_status};
use hyperblocks::{BlockPartition, HyperfieldCandidate};
use serde_json::{json, Value};

use crate::output::{emit, Report};
use crate::{exit, input, CensusMode, Cli, Command, GlobalArgs, InputArgs};

pub fn run(cli: &Cli) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Blocks => blocks(g),
        Command::Census {
            mode,
            shard,
            all_minus_ones,
        } => census(g, *mode, shard.as_deref(), *all_minus_ones),
        Command::Verify { input } => verify(g, input),
        Command::Count => count(g),
        Command::Quotient { input, bound } => quotient(g, input, *bound),
        Command::Fetvins {
            input,
            nmax,
            system,
        } => fetvins(g, input, *nmax, system.as_deref()),
        Command::Show { input, catalog } => match catalog {
            Some(path) => show_catalog(g, path),
            None => show(g, input),
        },
    }
}

fn blocks_json(bp: &BlockPartition) -> Value {
    let group = bp.group();
    let cm = bp.coefficient_matrix();
    json!({
        "group": group.to_string(),
        "factors": group.factors(),
        "minus_one": bp.minus_one().0,
        "num_blocks": bp.num_blocks(),
        "blocks": bp.blocks().iter().enumerate().map(|(i, b)| json!({
            "label": bp.label(i),
            "size": b.len(),
            "pairs": b.iter().map(|p| [p.x.0, p.y.0]).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
        "coefficient_matrix": {
            "row_labels": cm.row_labels.iter().map(|&e| group.element_name(e)).collect::<Vec<_>>(),
            "rows": cm.rows,
        },
    })
}

fn blocks(g: &GlobalArgs) -> Result<u8> {
    let bp = input::partition(g)?;
    let group = bp.group();
    let mut text = bp.table();
    writeln!(text)?;
    for (i, b) in bp.blocks().iter().enumerate() {
        let pairs: Vec<String> = b
            .iter()
            .map(|p| format!("({},{})", group.element_name(p.x), group.element_name(p.y)))
            .collect();
        writeln!(text, "{} [{}]: {}", bp.label(i), b.len(), pairs.join(" "))?;
    }
    let cm = bp.coefficient_matrix();
    writeln!(
        text,
        "\ncoefficient matrix ({} x {}):",
        cm.rows.len(),
        cm.num_blocks
    )?;
    for (row, &label) in cm.rows.iter().zip(&cm.row_labels) {
        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        writeln!(
            text,
            "{:>6}  {}",
            group.element_name(label),
            cells.join(" ")
        )?;
    }
    let report = Report {
        text,
        json: blocks_json(&bp),
        csv: Some(cm.to_csv(group)),
    };
    emit(g, &report, true)?;
    Ok(exit::OK)
}

fn census_json(c: &Census) -> Value {
    json!({
        "group": c.group.to_string(),
        "minus_one": c.minus_one.0,
        "mode": c.mode.to_string(),
        "shard": c.shard.map(|s| s.to_string()),
        "num_blocks": c.num_blocks,
        "subsets": c.subsets_examined,
        "hyperfields": c.hyperfields,
        "classes": c.num_classes(),
        "ample": c.ample,
        "isomorphism_classes": c.classes.iter().map(|k| json!({
            "canonical": k.canonical,
            "blocks": k.blocks.iter().map(|&b| block_label(b)).collect::<String>(),
            "members": k.members,
            "ample": k.ample,
        })).collect::<Vec<_>>(),
    })
}

fn census(
    g: &GlobalArgs,
    mode: CensusMode,
    shard: Option<&str>,
    all_minus_ones: bool,
) -> Result<u8> {
    let group = input::group(g)?;
    let mode = match mode {
        CensusMode::Full => Mode::Full,
        CensusMode::AmpleOnly => Mode::AmpleOnly,
    };
    let config = CensusConfig {
        max_blocks: g
            .budget
            .map_or(census::DEFAULT_MAX_BLOCKS, |b| b.min(62) as usize),
        shard: shard.map(str::parse::<Shard>).transpose()?,
    };
    let minus_ones = if all_minus_ones {
        group.involution_candidates()
    } else {
        vec![input::minus_one(g, &group)]
    };
    let mut results = Vec::new();
    for m1 in minus_ones {
        let bp = BlockPartition::compute(Arc::clone(&group), m1)?;
        results.push(census::enumerate_with(&bp, mode, &config)?);
    }

    let mut text = String::new();
    let mut csv = String::from("group,minus_one,canonical,blocks,members,ample\n");
    for c in &results {
        writeln!(
            text,
            "group {} -1={} mode={}{}",
            c.group,
            c.group.element_name(c.minus_one),
            c.mode,
            c.shard.map_or(String::new(), |s| format!(" shard={s}"))
        )?;
        writeln!(text, "{}", c.summary_line())?;
        for k in &c.classes {
            let labels: String = k.blocks.iter().map(|&b| block_label(b)).collect();
            writeln!(
                text,
                "  {:<12} members={} ample={} pi={}",
                if labels.is_empty() {
                    "-".into()
                } else {
                    labels.clone()
                },
                k.members,
                k.ample,
                k.canonical
            )?;
            writeln!(
                csv,
                "{},{},{},{},{},{}",
                c.group, c.minus_one.0, k.canonical, labels, k.members, k.ample
            )?;
        }
    }
    let json = if results.len() == 1 {
        census_json(&results[0])
    } else {
        Value::Array(results.iter().map(census_json).collect())
    };
    emit(
        g,
        &Report {
            text,
            json,
            csv: Some(csv),
        },
        false,
    )?;

    if let Some(path) = &g.out {
        for c in &results {
            let id = run_id(&[
                "census",
                &c.group.to_string(),
                &c.minus_one.0.to_string(),
                &c.mode.to_string(),
                &c.shard.map_or("all".into(), |s| s.to_string()),
            ]);
            append_jsonl(path, &CatalogRecord::from_census(c, &id))?;
        }
    }
    Ok(exit::OK)
}

fn verify(g: &GlobalArgs, inp: &InputArgs) -> Result<u8> {
    let (mut h, bp) = input::candidate(g, inp)?;
    let report = h.verify_axioms();
    let params = h.ample_params();
    let blocks = match &bp {
        Some(bp) => h.blocks_used(bp)?,
        None => None,
    };
    let labels = blocks
        .as_ref()
        .map(|b| b.iter().map(|&i| block_label(i)).collect::<String>());

    let mut text = format!(
        "{} -1={}\nstatus: {}\n",
        h.group(),
        h.group().element_name(h.minus_one()),
        h.status()
    );
    for v in &report.violations {
        writeln!(text, "violation: {v}")?;
    }
    writeln!(
        text,
        "m={} k={} ample={}",
        params.m,
        params.k,
        params.is_ample(h.order())
    )?;
    match &labels {
        Some(l) => writeln!(text, "blocks: {}", if l.is_empty() { "-" } else { l })?,
        None => writeln!(text, "blocks: not a union of blocks")?,
    }
    let json = json!({
        "status": h.status().to_string(),
        "hyperfield": h.to_record(),
        "violations": report.violations,
        "ample": {"m": params.m, "k": params.k, "ample": params.is_ample(h.order())},
        "blocks": labels,
    });
    emit(
        g,
        &Report {
            text,
            json,
            csv: None,
        },
        true,
    )?;
    Ok(if report.is_hyperfield() {
        exit::OK
    } else {
        exit::CLAIM_FAILED
    })
}

fn count(g: &GlobalArgs) -> Result<u8> {
    let bp = input::partition(g)?;
    let rep = decompose_and_bound(&bp)?;
    let text = format!(
        "{}: b={} b'={} rows={}\nexact={} lower_bound={} holds={}\nfinal_count={} product_formula={} swaps={}\ninfinite_quotient_bound={}\n",
        bp.group(),
        rep.b,
        rep.b_prime,
        rep.rows,
        rep.exact,
        rep.lower_bound,
        rep.bound_holds,
        rep.final_count,
        rep.product_formula,
        rep.swaps.len(),
        rep.infinite_quotient_bound
    );
    let json = json!({
        "exact": rep.exact as u64,
        "lower_bound": rep.lower_bound as u64,
        "infinite_quotient_bound": rep.infinite_quotient_bound as u64,
        "bound_holds": rep.bound_holds,
        "b": rep.b,
        "b_prime": rep.b_prime,
        "rows": rep.rows,
        "final_count": rep.final_count.to_string(),
        "swaps": rep.swaps,
    });
    emit(
        g,
        &Report {
            text,
            json,
            csv: None,
        },
        true,
    )?;
    Ok(if rep.bound_holds {
        exit::OK
    } else {
        exit::CLAIM_FAILED
    })
}

/// Verifies unless the candidate already carries a hyperfield status.
fn ensure_hyperfield(h: &mut HyperfieldCandidate) -> Option<String> {
    if h.status().is_hyperfield() {
        return None;
    }
    let report = h.verify_axioms();
    report.first_violation().map(|v| v.to_string())
}

fn quotient(g: &GlobalArgs, inp: &InputArgs, bound: Option<u64>) -> Result<u8> {
    let (mut h, _) = input::candidate(g, inp)?;
    if let Some(v) = ensure_hyperfield(&mut h) {
        eprintln!("not a hyperfield: {v}");
        return Ok(exit::CLAIM_FAILED);
    }
    let status = quotient_status(&h, bound)?;
    let mut json = serde_json::to_value(&status)?;
    json["excludes_infinite_quotient"] = json!(excludes_infinite_quotient(&h));
    let text = format!(
        "{status}\nexcludes infinite quotient: {}\n",
        excludes_infinite_quotient(&h)
    );
    emit(
        g,
        &Report {
            text,
            json,
            csv: None,
        },
        true,
    )?;
    Ok(exit::OK)
}

fn fetvins(
    g: &GlobalArgs,
    inp: &InputArgs,
    nmax: usize,
    system: Option<&std::path::Path>,
) -> Result<u8> {
    let (mut h, _) = input::candidate(g, inp)?;
    if let Some(v) = ensure_hyperfield(&mut h) {
        eprintln!("not a hyperfield: {v}");
        return Ok(exit::CLAIM_FAILED);
    }
    let hf = Hyperfield::new(h)?;
    if let Some(path) = system {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m: Vec<Vec<i64>> = serde_json::from_str(&text)
            .map_err(|e| hyperblocks::Error::Parse(format!("{}: {e}", path.display())))?;
        let sys = LinearSystem::from_matrix(&hf, &m)?;
        let budget = g.budget.unwrap_or(DEFAULT_SOLVE_BUDGET);
        let (solver, sol) = if hf.is_ample() && sys.equations() < sys.variables() {
            ("ample", Some(ample_solve(&hf, &sys)?))
        } else {
            ("brute-force", brute_force_solve_bounded(&hf, &sys, budget)?)
        };
        let (json, text, code) = match sol {
            Some(x) => (
                json!({"status": "solved", "solver": solver, "witness": {"solution": x.to_indices(&hf)}}),
                format!("solved ({solver}): {}\n", x.display(&hf)),
                exit::OK,
            ),
            None => (
                json!({"status": "no-solution", "solver": solver, "witness": {"system": m}}),
                "no nontrivial solution\n".to_string(),
                exit::CLAIM_FAILED,
            ),
        };
        emit(
            g,
            &Report {
                text,
                json,
                csv: None,
            },
            true,
        )?;
        return Ok(code);
    }
    let budget = g.budget.unwrap_or(DEFAULT_CHECK_BUDGET);
    let rep = check_fetvins_bounded(&hf, nmax, budget)?;
    let json = match &rep.counterexample {
        None => json!({
            "status": "confirmed",
            "witness": {"n_max": rep.n_max, "systems_checked": rep.systems_checked},
        }),
        Some(s) => json!({"status": "counterexample", "witness": {"system": s.to_matrix()}}),
    };
    let text = format!("{rep}\n");
    emit(
        g,
        &Report {
            text,
            json,
            csv: None,
        },
        true,
    )?;
    Ok(if rep.confirmed() {
        exit::OK
    } else {
        exit::CLAIM_FAILED
    })
}

fn show(g: &GlobalArgs, inp: &InputArgs) -> Result<u8> {
    let (h, bp) = input::candidate(g, inp)?;
    let params = h.ample_params();
    let labels = match &bp {
        Some(bp) => h
            .blocks_used(bp)?
            .map(|b| b.iter().map(|&i| block_label(i)).collect::<String>()),
        None => None,
    };
    let mut text = format!(
        "{} -1={} status={}\npi={}\n",
        h.group(),
        h.group().element_name(h.minus_one()),
        h.status(),
        h.pi().to_bit_string()
    );
    text.push_str(&h.describe());
    writeln!(
        text,
        "m={} k={} ample={}",
        params.m,
        params.k,
        params.is_ample(h.order())
    )?;
    if let Some(l) = &labels {
        writeln!(text, "blocks: {}", if l.is_empty() { "-" } else { l })?;
    }
    let sums: Vec<Value> = h
        .group()
        .elements()
        .map(|x| {
            let s = h.add(hyperblocks::Element::Unit(x), hyperblocks::Element::ONE);
            json!({"x": h.group().element_name(x), "x_plus_one": h.set_name(s)})
        })
        .collect();
    let json = json!({
        "hyperfield": h.to_record(),
        "blocks": labels,
        "ample": {"m": params.m, "k": params.k, "ample": params.is_ample(h.order())},
        "sums": sums,
    });
    emit(
        g,
        &Report {
            text,
            json,
            csv: None,
        },
        true,
    )?;
    Ok(exit::OK)
}

fn show_catalog(g: &GlobalArgs, path: &std::path::Path) -> Result<u8> {
    let records = read_catalog(path)?;
    let mut text = String::new();
    let mut csv = String::from("group,minus_one,pi,status,blocks,members,ample,quotient_status\n");
    for r in &records {
        let group = hyperblocks::AbelianGroup::try_from(&r.group)?;
        writeln!(
            text,
            "{} -1={} {} blocks={} members={} ample={}{}",
            group,
            r.minus_one,
            r.status,
            r.blocks.as_deref().unwrap_or("?"),
            r.members.map_or("?".into(), |m| m.to_string()),
            r.flags.ample,
            r.flags
                .quotient_status
                .as_ref()
                .map_or(String::new(), |q| format!(" quotient={q}"))
        )?;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            group,
            r.minus_one,
            r.pi,
            r.status,
            r.blocks.as_deref().unwrap_or(""),
            r.members.map_or(String::new(), |m| m.to_string()),
            r.flags.ample,
            r.flags.quotient_status.as_deref().unwrap_or("")
        )?;
    }
    let json = serde_json::to_value(&records)?;
    emit(
        g,
        &Report {
            text,
            json,
            csv: Some(csv),
        },
        true,
    )?;
    Ok(exit::OK)
}
