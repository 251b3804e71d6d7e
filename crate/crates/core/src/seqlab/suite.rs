//! The sequence-level lemma suite run by `verify dimlemmas`.

use serde_json::json;

use super::{
    dim_depth_profile, dim_lemma_check, dim_mutual_info, im_star, linear_grid, super_deep_diag, Estimator, SequenceGen,
    DEFAULT_M_FACTOR, DENSITY_TOLERANCE,
};
use crate::bits::BitString;
use crate::enumerator::ComplexityTable;
use crate::error::Result;
use crate::exec::Exec;
use crate::measures::{SlackReport, Witness};
use crate::timebound::{Significance, TimeBound};

/// Generator pairs for the mutual-information lemmas: the interleaving
/// example in both orientations plus independent, identical, diluted and
/// overlapping pairs.
pub fn lemma_pairs() -> Vec<(SequenceGen, SequenceGen)> {
    let alpha = SequenceGen::RandomPool(1);
    let beta = SequenceGen::interleave(alpha.clone(), SequenceGen::RandomPool(2));
    vec![
        (alpha.clone(), beta.clone()),
        (beta, alpha.clone()),
        (SequenceGen::RandomPool(11), SequenceGen::RandomPool(12)),
        (alpha.clone(), alpha.clone()),
        (alpha.clone(), SequenceGen::dilute(alpha.clone())),
        (SequenceGen::dilute(alpha.clone()), alpha),
        (
            SequenceGen::interleave(SequenceGen::RandomPool(3), SequenceGen::RandomPool(4)),
            SequenceGen::interleave(SequenceGen::RandomPool(4), SequenceGen::RandomPool(5)),
        ),
    ]
}

pub fn depth_generators() -> Vec<SequenceGen> {
    vec![
        SequenceGen::Zeros,
        SequenceGen::ThueMorse,
        SequenceGen::RandomPool(21),
        SequenceGen::dilute(SequenceGen::ThueMorse),
        SequenceGen::interleave(SequenceGen::ThueMorse, SequenceGen::RandomPool(22)),
    ]
}

fn violation(details: serde_json::Value) -> Witness {
    Witness { x: BitString::new(), details }
}

/// Mutual-information lemmas (Oracle), the dimensional-depth bound
/// (Compress at 1 and 4 passes) and super-deep diagnostic consistency on
/// every in-horizon prefix of a few generators.
pub fn dim_lemmas_suite(table: &ComplexityTable, exec: Exec) -> Result<SlackReport> {
    let mut report = SlackReport::new("dimlemmas", table.horizon());
    let grid = linear_grid(4096, 16);
    let oracle = Estimator::Oracle;

    let mut worst = f64::NEG_INFINITY;
    for (a, b) in lemma_pairs() {
        let idim = dim_mutual_info(&a, &b, &oracle, &grid, exec)?.value;
        let ab = im_star(&a, &b, &oracle, &grid, DEFAULT_M_FACTOR, exec)?;
        let ba = im_star(&b, &a, &oracle, &grid, DEFAULT_M_FACTOR, exec)?;
        let min_im = ab.lower.min(ba.lower);
        worst = worst.max(idim - min_im);
        if idim > min_im + DENSITY_TOLERANCE {
            report
                .violations
                .push(violation(json!({"lemma": "idim", "a": a.id(), "b": b.id(), "idim": idim, "min_im": min_im})));
        }
        let lemma = dim_lemma_check(&a, &b, &oracle, &grid, DEFAULT_M_FACTOR, DENSITY_TOLERANCE, exec)?;
        worst = worst.max(lemma.rhs - lemma.lhs);
        if !lemma.holds {
            report
                .violations
                .push(violation(json!({"lemma": "dim", "a": a.id(), "b": b.id(), "lhs": lemma.lhs, "rhs": lemma.rhs})));
        }
    }

    for g in depth_generators() {
        for passes in [1u64, 4] {
            let d = dim_depth_profile(&g, &Estimator::compress(), passes, &grid, exec)?;
            worst = worst.max(d.depth - (d.dim_t - d.dim));
            if !d.bound_holds {
                report.violations.push(violation(json!({
                    "lemma": "dimdepth", "generator": g.id(), "passes": passes,
                    "depth": d.depth, "dim_t": d.dim_t, "dim": d.dim,
                })));
            }
        }
    }
    report.fitted_constant = worst;

    let s_family: Vec<Significance> =
        [0, 1, 2, 4].into_iter().map(Significance::Const).chain([Significance::Log(1)]).collect();
    let t_family = [
        TimeBound::Const(1),
        TimeBound::Const(2),
        TimeBound::Linear(1),
        TimeBound::Linear(4),
        TimeBound::Poly(2),
        TimeBound::Exp(1),
    ];
    let mut diag_points = 0usize;
    let mut c1_max = 0i64;
    for g in [SequenceGen::Zeros, SequenceGen::ThueMorse, SequenceGen::HaltingChar(64), SequenceGen::RandomPool(1)] {
        let n_grid: Vec<usize> = (1..=24).filter(|&n| table.contains(&g.prefix(n).bits)).collect();
        if n_grid.is_empty() {
            report.skipped.push(json!({"generator": g.id(), "reason": "no prefix inside the horizon"}));
            continue;
        }
        let diag = super_deep_diag(&g, table, &s_family, &t_family, &n_grid)?;
        diag_points += diag.points.len();
        c1_max = c1_max.max(diag.fitted_c1);
        for v in diag.violations {
            report.violations.push(violation(json!({"lemma": "superdeep", "generator": g.id(), "detail": v})));
        }
    }
    report.metadata.insert("pairs".into(), json!(lemma_pairs().len()));
    report.metadata.insert("diag_points".into(), json!(diag_points));
    report.metadata.insert("diag_c1_max".into(), json!(c1_max));
    report.metadata.insert("pairing".into(), json!("bit interleaving, smaller generator id first"));
    report.metadata.insert("m_factor".into(), json!(DEFAULT_M_FACTOR));
    report.metadata.insert("tolerance".into(), json!(DENSITY_TOLERANCE));
    Ok(report)
}
