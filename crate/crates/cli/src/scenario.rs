//! Turns a merged configuration into a computed result plus the effective
//! configuration that produced it.

use eraser_core::analysis::{epr_correlation_table, epr_state_in, sample_events, EventStream, JointTable, MeasurementOrder, SamplingPlan, SpinAxis};
use eraser_core::nchannel::{
    conditioned_distribution, default_config, detector_probabilities, dft_config, final_state_bare, final_state_marked,
    PhaseConfig,
};
use eraser_core::twoslit::{
    build_grid, marked_state, pattern_conditioned, pattern_marked_unconditioned, pattern_no_marker, Envelope,
    ScreenGeometry, ScreenGrid,
};
use eraser_core::{erasure_basis, MarkerBasis, MarkerState, PureState, Sign};

use crate::config::{
    Axis, Condition, EffectiveConfig, EnvelopeKind, Format, Kind, MarkerBasisArg, Order, Parameters, PatternKind, Preset,
    SignArg, Source,
};
use crate::error::{CliError, CliResult};

pub const DEFAULT_N: usize = 10;
pub const DEFAULT_COUNT: usize = 100_000;
const FRINGES: f64 = 2.0;

const NCHANNEL_KEYS: &[&str] = &["n", "preset", "thetas", "phis", "condition", "theta", "bare"];
const GEOMETRY_KEYS: &[&str] = &["preset", "d", "lambda", "distance", "x_min", "x_max", "bins", "envelope", "sigma"];
const TWOSLIT_KEYS: &[&str] = &["theta", "sign", "pattern"];
const EPR_KEYS: &[&str] = &["basis1", "basis2"];
const SAMPLE_KEYS: &[&str] = &["source", "order", "count", "seed", "id"];
const SAMPLE_NCHANNEL_KEYS: &[&str] = &["n", "preset", "thetas", "phis", "theta", "basis"];
const SAMPLE_TWOSLIT_KEYS: &[&str] = &["theta", "basis"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Detector,
    Position,
}

/// A probability per detector or per screen bin.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub axis: AxisKind,
    pub xs: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub condition: &'static str,
    pub title: String,
}

pub enum Outcome {
    Pattern(Pattern),
    Table(JointTable),
    Events(EventStream),
}

pub struct Scenario {
    pub effective: EffectiveConfig,
    pub outcome: Outcome,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn check_keys(params: &Parameters, allowed: &[&[&str]], context: &str) -> CliResult<()> {
    for key in params.keys() {
        if !allowed.iter().any(|set| set.contains(&key)) {
            return Err(invalid(format!("parameter `{key}` does not apply to {context}")));
        }
    }
    Ok(())
}

pub fn resolve(kind: Kind, format: Format, params: Parameters) -> CliResult<Scenario> {
    let (parameters, outcome) = match kind {
        Kind::Nchannel => nchannel(params)?,
        Kind::Twoslit => twoslit(params)?,
        Kind::Epr => epr(params)?,
        Kind::Sample => {
            if format != Format::Csv {
                return Err(invalid(format!("sample writes a CSV event log; format `{format}` is not available")));
            }
            sample(params)?
        }
    };
    Ok(Scenario { effective: EffectiveConfig { kind, format, parameters }, outcome })
}

/// Phase configuration from explicit vectors or a named preset. The
/// returned parameters hold exactly what determines the configuration.
fn phase_config(p: &Parameters) -> CliResult<(PhaseConfig, Parameters)> {
    let mut echo = Parameters::default();
    let config = match (&p.thetas, &p.phis) {
        (Some(thetas), Some(phis)) => {
            if p.preset.is_some() {
                return Err(invalid("give either a preset or explicit thetas/phis, not both"));
            }
            if let Some(n) = p.n {
                if n != thetas.len() {
                    return Err(invalid(format!("n = {n} but {} phases were given", thetas.len())));
                }
            }
            echo.n = Some(thetas.len());
            echo.thetas = Some(thetas.clone());
            echo.phis = Some(phis.clone());
            PhaseConfig::new(thetas.clone(), phis.clone())?
        }
        (None, None) => {
            let n = p.n.unwrap_or(DEFAULT_N);
            let preset = p.preset.unwrap_or(Preset::Default);
            echo.n = Some(n);
            echo.preset = Some(preset);
            match preset {
                Preset::Default => default_config(n)?,
                Preset::Dft => dft_config(n)?,
            }
        }
        _ => return Err(invalid("thetas and phis must be given together")),
    };
    Ok((config, echo))
}

fn condition_marker(condition: Condition, theta: f64) -> CliResult<Option<MarkerState>> {
    Ok(match condition {
        Condition::None => None,
        Condition::D1 => Some(MarkerState::d1()),
        Condition::D2 => Some(MarkerState::d2()),
        Condition::Dplus => Some(*erasure_basis(theta)?.plus()),
        Condition::Dminus => Some(*erasure_basis(theta)?.minus()),
    })
}

fn nchannel(p: Parameters) -> CliResult<(Parameters, Outcome)> {
    check_keys(&p, &[NCHANNEL_KEYS], "nchannel")?;
    let (config, mut echo) = phase_config(&p)?;
    let bare = p.bare.unwrap_or(false);
    let condition = p.condition.unwrap_or(Condition::None);
    let erasing = matches!(condition, Condition::Dplus | Condition::Dminus);
    if bare && condition != Condition::None {
        return Err(invalid("a bare run has no marker to condition on"));
    }
    if p.theta.is_some() && !erasing {
        return Err(invalid("theta applies only to the dplus and dminus conditions"));
    }
    let theta = p.theta.unwrap_or(0.0);
    echo.bare = Some(bare);
    echo.condition = Some(condition);
    if erasing {
        echo.theta = Some(theta);
    }

    let distribution = if bare {
        detector_probabilities(&final_state_bare(&config)?)
    } else {
        let state = final_state_marked(&config)?;
        match condition_marker(condition, theta)? {
            None => detector_probabilities(&state),
            Some(marker) => conditioned_distribution(&state, &marker)?,
        }
    };
    let (tag, label) = match (bare, condition) {
        (true, _) => ("bare", "no marker".to_string()),
        (false, Condition::None) => ("none", "marked, unconditioned".to_string()),
        (false, Condition::D1) => ("d1", "d1".to_string()),
        (false, Condition::D2) => ("d2", "d2".to_string()),
        (false, Condition::Dplus) => ("dplus", format!("d+ at θ = {theta}")),
        (false, Condition::Dminus) => ("dminus", format!("d- at θ = {theta}")),
    };
    let n = distribution.n();
    let pattern = Pattern {
        axis: AxisKind::Detector,
        xs: (1..=n).map(|j| j as f64).collect(),
        probabilities: distribution.probabilities,
        condition: tag,
        title: format!("{n}-channel detector probabilities, condition: {label}"),
    };
    Ok((echo, Outcome::Pattern(pattern)))
}

fn screen_grid(p: &Parameters) -> CliResult<(ScreenGrid, Parameters)> {
    if p.preset == Some(Preset::Dft) {
        return Err(invalid("preset `dft` applies only to nchannel"));
    }
    let base = ScreenGeometry::default_preset();
    let d = p.d.unwrap_or(base.d);
    let lambda = p.lambda.unwrap_or(base.lambda);
    let distance = p.distance.unwrap_or(base.distance);
    let bins = p.bins.unwrap_or(base.bins);
    let geometry = match (p.x_min, p.x_max) {
        (Some(lo), Some(hi)) => ScreenGeometry::new(d, lambda, distance, lo, hi, bins)?,
        (None, None) => ScreenGeometry::aligned(d, lambda, distance, FRINGES, bins)?,
        _ => return Err(invalid("x_min and x_max must be given together")),
    };
    let envelope = match (p.envelope.unwrap_or(EnvelopeKind::Flat), p.sigma) {
        (EnvelopeKind::Flat, None) => Envelope::Flat,
        (EnvelopeKind::Flat, Some(_)) => return Err(invalid("sigma applies only to the gaussian envelope")),
        (EnvelopeKind::Gaussian, Some(sigma)) => Envelope::Gaussian { sigma },
        (EnvelopeKind::Gaussian, None) => return Err(invalid("the gaussian envelope needs sigma")),
    };
    let echo = Parameters {
        preset: Some(Preset::Default),
        d: Some(geometry.d),
        lambda: Some(geometry.lambda),
        distance: Some(geometry.distance),
        x_min: Some(geometry.x_min),
        x_max: Some(geometry.x_max),
        bins: Some(geometry.bins),
        envelope: p.envelope.or(Some(EnvelopeKind::Flat)),
        sigma: p.sigma,
        ..Default::default()
    };
    Ok((build_grid(geometry, envelope)?, echo))
}

fn twoslit(p: Parameters) -> CliResult<(Parameters, Outcome)> {
    check_keys(&p, &[GEOMETRY_KEYS, TWOSLIT_KEYS], "twoslit")?;
    let (grid, mut echo) = screen_grid(&p)?;
    let kind = p.pattern.unwrap_or(if p.sign.is_some() || p.theta.is_some() {
        PatternKind::Conditioned
    } else {
        PatternKind::Washed
    });
    if kind != PatternKind::Conditioned && (p.sign.is_some() || p.theta.is_some()) {
        return Err(invalid("theta and sign apply only to the conditioned pattern"));
    }
    echo.pattern = Some(kind);
    let (pattern, tag, label) = match kind {
        PatternKind::Bare => (pattern_no_marker(&grid)?, "bare", "no marker".to_string()),
        PatternKind::Washed => (pattern_marked_unconditioned(&grid)?, "washed", "marked, unconditioned".to_string()),
        PatternKind::Conditioned => {
            let theta = p.theta.unwrap_or(0.0);
            let sign = p.sign.unwrap_or(SignArg::Plus);
            echo.theta = Some(theta);
            echo.sign = Some(sign);
            let (pattern, _) = pattern_conditioned(&grid, theta, core_sign(sign))?;
            let symbol = match sign {
                SignArg::Plus => "d+",
                SignArg::Minus => "d-",
            };
            (pattern, sign.tag(), format!("{symbol} at θ = {theta}"))
        }
    };
    let pattern = Pattern {
        axis: AxisKind::Position,
        xs: grid.centers().to_vec(),
        probabilities: pattern.probabilities,
        condition: tag,
        title: format!("two-slit screen pattern, condition: {label}"),
    };
    Ok((echo, Outcome::Pattern(pattern)))
}

fn core_sign(sign: SignArg) -> Sign {
    match sign {
        SignArg::Plus => Sign::Plus,
        SignArg::Minus => Sign::Minus,
    }
}

fn core_axis(axis: Axis) -> SpinAxis {
    match axis {
        Axis::Z => SpinAxis::Z,
        Axis::X => SpinAxis::X,
    }
}

fn epr(p: Parameters) -> CliResult<(Parameters, Outcome)> {
    check_keys(&p, &[EPR_KEYS], "epr")?;
    let (a1, a2) = (p.basis1.unwrap_or(Axis::Z), p.basis2.unwrap_or(Axis::Z));
    let table = epr_correlation_table(core_axis(a1), core_axis(a2))?;
    let echo = Parameters { basis1: Some(a1), basis2: Some(a2), ..Default::default() };
    Ok((echo, Outcome::Table(table)))
}

fn marker_basis(p: &Parameters) -> CliResult<(MarkerBasis, Parameters)> {
    let kind = p.basis.unwrap_or(MarkerBasisArg::Erasure);
    let mut echo = Parameters { basis: Some(kind), ..Default::default() };
    let basis = match kind {
        MarkerBasisArg::Erasure => {
            let theta = p.theta.unwrap_or(0.0);
            echo.theta = Some(theta);
            erasure_basis(theta)?
        }
        MarkerBasisArg::WhichPath => {
            if p.theta.is_some() {
                return Err(invalid("theta applies only to the erasure basis"));
            }
            MarkerBasis::which_path()
        }
    };
    Ok((basis, echo))
}

fn sample(p: Parameters) -> CliResult<(Parameters, Outcome)> {
    let source = p.source.unwrap_or(Source::Nchannel);
    let (state, basis, base, default_id, echo): (PureState, MarkerBasis, usize, String, Parameters) = match source {
        Source::Nchannel => {
            check_keys(&p, &[SAMPLE_KEYS, SAMPLE_NCHANNEL_KEYS], "sample --source nchannel")?;
            let (config, cfg_echo) = phase_config(&p)?;
            let (basis, basis_echo) = marker_basis(&p)?;
            let id = match (cfg_echo.preset, cfg_echo.n) {
                (Some(preset), Some(n)) => format!("nchannel-{preset}-{n}"),
                _ => format!("nchannel-custom-{}", config.n()),
            };
            (final_state_marked(&config)?, basis, 1, id, cfg_echo.overlay(basis_echo))
        }
        Source::Twoslit => {
            check_keys(&p, &[SAMPLE_KEYS, GEOMETRY_KEYS, SAMPLE_TWOSLIT_KEYS], "sample --source twoslit")?;
            let (grid, grid_echo) = screen_grid(&p)?;
            let (basis, basis_echo) = marker_basis(&p)?;
            (marked_state(&grid)?, basis, 0, "twoslit-default".to_string(), grid_echo.overlay(basis_echo))
        }
        Source::Epr => {
            check_keys(&p, &[SAMPLE_KEYS, EPR_KEYS], "sample --source epr")?;
            let (a1, a2) = (p.basis1.unwrap_or(Axis::Z), p.basis2.unwrap_or(Axis::Z));
            let state = epr_state_in(core_axis(a1), core_axis(a2))?;
            let echo = Parameters { basis1: Some(a1), basis2: Some(a2), ..Default::default() };
            (state, MarkerBasis::which_path(), 0, format!("epr-{a1}-{a2}"), echo)
        }
    };
    let id = p.id.clone().unwrap_or(default_id);
    if id.is_empty() || id.contains([',', '\n', '\r', '"']) {
        return Err(invalid(format!("scenario id `{id}` must be non-empty and free of commas, quotes and newlines")));
    }
    let order = p.order.unwrap_or(Order::MarkerFirst);
    let count = p.count.unwrap_or(DEFAULT_COUNT);
    let seed = p.seed.unwrap_or(0);
    let plan = SamplingPlan {
        scenario_id: id.clone(),
        order: match order {
            Order::MarkerFirst => MeasurementOrder::MarkerFirst,
            Order::SystemFirst => MeasurementOrder::SystemFirst,
        },
        count,
        seed,
        system_base: base,
    };
    let events = sample_events(&state, &basis, &plan)?;
    let echo = echo.overlay(Parameters {
        source: Some(source),
        order: Some(order),
        count: Some(count),
        seed: Some(seed),
        id: Some(id),
        ..Default::default()
    });
    Ok((echo, Outcome::Events(events)))
}
