//! Invariant suite run by `eraser check`.

use std::f64::consts::PI;

use crate::analysis::sampler::empirical_counts;
use crate::analysis::{
    chi_square, epr_correlation_table, joint_distribution, ordering_invariance_residual, sample_events,
    MeasurementOrder, SamplingPlan, SpinAxis,
};
use crate::error::Result;
use crate::marker::{erasure_basis, Sign};
use crate::nchannel::{
    conditioned_distribution, default_config, delayed_marker_state, detector_probabilities, final_state_bare,
    final_state_marked, random_config,
};
use crate::rng::SplitMix64;
use crate::twoslit::{
    build_grid, delayed_marker_scan, marked_state, pattern_conditioned, pattern_marked_unconditioned, peak_bins,
    visibility, Contrast, Envelope, ScreenGeometry,
};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst < tol,
        detail: format!("max deviation {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn run(name: &'static str, f: impl FnOnce() -> Result<CheckOutcome>) -> CheckOutcome {
    f().unwrap_or_else(|e| CheckOutcome {
        name,
        passed: false,
        detail: format!("error: {e}"),
    })
}

fn bright_dark() -> Result<CheckOutcome> {
    let d = detector_probabilities(&final_state_bare(&default_config(10)?)?);
    let worst = (1..=10)
        .map(|j| (d.detector(j) - if j % 2 == 1 { 0.2 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    Ok(outcome("bare n=10 fringes", worst, 1e-12))
}

fn washed() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for n in [2, 4, 6, 10] {
        let d = detector_probabilities(&final_state_marked(&default_config(n)?)?);
        for p in d.probabilities {
            worst = worst.max((p - 1.0 / n as f64).abs());
        }
    }
    Ok(outcome("marker washes out fringes", worst, 1e-12))
}

fn recovery() -> Result<CheckOutcome> {
    let s = final_state_marked(&default_config(10)?)?;
    let b = erasure_basis(0.0)?;
    let plus = conditioned_distribution(&s, b.plus())?;
    let minus = conditioned_distribution(&s, b.minus())?;
    let mut worst: f64 = 0.0;
    for j in 1..=10 {
        let odd = j % 2 == 1;
        worst = worst.max((plus.detector(j) - if odd { 0.2 } else { 0.0 }).abs());
        worst = worst.max((minus.detector(j) - if odd { 0.0 } else { 0.2 }).abs());
    }
    Ok(outcome("eraser recovers odd/even fringes", worst, 1e-12))
}

fn delayed_discrete() -> Result<CheckOutcome> {
    let s = final_state_marked(&default_config(10)?)?;
    let mut worst: f64 = 0.0;
    for j in 1..=10 {
        let d = delayed_marker_state(&s, j)?;
        let f = if j % 2 == 1 { d.fidelity_plus } else { d.fidelity_minus };
        worst = worst.max((d.purity - 1.0).abs()).max((f - 1.0).abs());
    }
    Ok(outcome("delayed marker definite (detectors)", worst, 1e-12))
}

fn delayed_screen() -> Result<CheckOutcome> {
    let grid = build_grid(ScreenGeometry::default_preset(), Envelope::Flat)?;
    let mut worst: f64 = 0.0;
    for d in delayed_marker_scan(&grid)? {
        let d = d?;
        worst = worst.max((d.fidelity - 1.0).abs()).max((d.purity - 1.0).abs());
    }
    Ok(outcome("delayed marker definite (screen)", worst, 1e-12))
}

fn complementarity() -> Result<CheckOutcome> {
    let grid = build_grid(ScreenGeometry::default_preset(), Envelope::Flat)?;
    let washed = pattern_marked_unconditioned(&grid)?;
    let mut worst: f64 = 0.0;
    let mut vis_worst: f64 = 0.0;
    for m in 0..32 {
        let theta = m as f64 * PI / 32.0;
        let (p, bp) = pattern_conditioned(&grid, theta, Sign::Plus)?;
        let (q, bq) = pattern_conditioned(&grid, theta, Sign::Minus)?;
        for k in 0..grid.bins() {
            let sum = bp * p.probabilities[k] + bq * q.probabilities[k];
            worst = worst.max((sum - washed.probabilities[k]).abs());
        }
        vis_worst = vis_worst
            .max((visibility(&p, Contrast::default())? - 1.0).abs())
            .max((visibility(&q, Contrast::default())? - 1.0).abs());
    }
    Ok(CheckOutcome {
        name: "complementary patterns sum to envelope",
        passed: worst < 1e-12 && vis_worst < 1e-9,
        detail: format!("sum deviation {worst:.3e}, visibility deviation {vis_worst:.3e}"),
    })
}

fn ordering() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    let thetas: Vec<f64> = (0..32).map(|m| m as f64 * PI / 16.0).collect();
    for n in [2, 4, 6, 10] {
        let s = final_state_marked(&default_config(n)?)?;
        for t in &thetas {
            worst = worst.max(ordering_invariance_residual(&s, &erasure_basis(*t)?)?);
        }
    }
    let screen = marked_state(&build_grid(ScreenGeometry::default_preset(), Envelope::Flat)?)?;
    worst = worst.max(ordering_invariance_residual(&screen, &erasure_basis(0.7)?)?);
    let mut rng = SplitMix64::new(2024);
    for i in 0..100 {
        let cfg = random_config(2 + i % 11, &mut rng)?;
        let s = final_state_marked(&cfg)?;
        worst = worst.max(ordering_invariance_residual(&s, &erasure_basis(0.37 * i as f64)?)?);
    }
    Ok(outcome("measurement order invariance", worst, 1e-12))
}

fn epr() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for axis in [SpinAxis::Z, SpinAxis::X] {
        let t = epr_correlation_table(axis, axis)?;
        for (i, p) in t.cells().iter().enumerate() {
            let target = if i == 0 || i == 3 { 0.5 } else { 0.0 };
            worst = worst.max((p - target).abs());
        }
    }
    let t = epr_correlation_table(SpinAxis::Z, SpinAxis::X)?;
    for p in t.cells() {
        worst = worst.max((p - 0.25).abs());
    }
    worst = worst.max(t.mutual_information().abs());
    Ok(outcome("spin-pair correlation tables", worst, 1e-12))
}

fn direct_summation() -> Result<CheckOutcome> {
    let mut rng = SplitMix64::new(77);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = 2 + i % 11;
        let cfg = random_config(n, &mut rng)?;
        let bare = detector_probabilities(&final_state_bare(&cfg)?);
        let marked = detector_probabilities(&final_state_marked(&cfg)?);
        for j in 0..n {
            let expect = (1.0 + (cfg.thetas()[j] - cfg.phis()[j]).cos()) / n as f64;
            worst = worst
                .max((bare.probabilities[j] - expect).abs())
                .max((marked.probabilities[j] - 1.0 / n as f64).abs());
        }
    }
    Ok(outcome("closed-form detector probabilities", worst, 1e-12))
}

fn sampler() -> Result<CheckOutcome> {
    let s = final_state_marked(&default_config(10)?)?;
    let basis = erasure_basis(0.0)?;
    let exact = joint_distribution(&s, &basis, MeasurementOrder::SystemFirst)?;
    let mut passed = 0;
    for seed in 0..100u64 {
        let plan = SamplingPlan {
            scenario_id: "check".into(),
            order: if seed % 2 == 0 { MeasurementOrder::MarkerFirst } else { MeasurementOrder::SystemFirst },
            count: 100_000,
            seed,
            system_base: 0,
        };
        let events: Vec<_> = sample_events(&s, &basis, &plan)?.collect();
        let counts = empirical_counts(&events, exact.rows(), exact.cols(), 0);
        if chi_square(&exact, &counts)?.passes(0.999) {
            passed += 1;
        }
    }
    Ok(CheckOutcome {
        name: "sampler chi-square",
        passed: passed >= 99,
        detail: format!("{passed}/100 seeds below the 0.999 quantile"),
    })
}

fn fringe_width() -> Result<CheckOutcome> {
    let grid = build_grid(ScreenGeometry::default_preset(), Envelope::Flat)?;
    let (p, _) = pattern_conditioned(&grid, 0.0, Sign::Plus)?;
    let peaks: Vec<f64> = peak_bins(&p.probabilities).iter().map(|&k| grid.centers()[k]).collect();
    let w = grid.geometry().fringe_width();
    let worst = peaks
        .windows(2)
        .map(|pair| (pair[1] - pair[0] - w).abs())
        .fold(if peaks.len() < 2 { f64::INFINITY } else { 0.0 }, f64::max);
    Ok(CheckOutcome {
        name: "fringe spacing equals lambda*L/d",
        passed: worst <= grid.geometry().bin_width(),
        detail: format!("{} peaks, spacing deviation {worst:.3e}", peaks.len()),
    })
}

/// Runs every check; order is stable.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        run("bare n=10 fringes", bright_dark),
        run("marker washes out fringes", washed),
        run("eraser recovers odd/even fringes", recovery),
        run("delayed marker definite (detectors)", delayed_discrete),
        run("delayed marker definite (screen)", delayed_screen),
        run("complementary patterns sum to envelope", complementarity),
        run("measurement order invariance", ordering),
        run("spin-pair correlation tables", epr),
        run("closed-form detector probabilities", direct_summation),
        run("sampler chi-square", sampler),
        run("fringe spacing equals lambda*L/d", fringe_width),
    ]
}
