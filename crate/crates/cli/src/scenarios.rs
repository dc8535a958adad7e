//! Canned experiments, selected by name.

use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};
use strata_core::diagnostics::{
    cross_a, energy_e, sigma_profile, BmAccumulator, FluxSample, KeyQuantities, RunRecord,
};
use strata_core::basis::{SpectralField, Transformer};
use strata_core::dynamics::{conserved_quantities, Checkpoint, ConservedQuantities, Dynamics, Stepper};
use strata_core::fields::{project_mean_free, sobolev_norm, validate_state, Alpha, FlowState, NormSpec};
use strata_core::linear::{eigen_table, predicted_slope, EnvelopeKind, ModeEigenSystem, PropagatorTable};

use crate::config::ScenarioConfig;
use crate::error::{CliError, Result};
use crate::registry::Registry;

/// Everything a scenario needs: the validated config, the initial state
/// and the time stepper.
pub struct RunContext {
    pub cfg: ScenarioConfig,
    pub initial: FlowState,
    pub stepper: Arc<dyn Stepper>,
    pub out_dir: PathBuf,
}

pub trait Scenario: Send + Sync {
    fn name(&self) -> &'static str;
    /// Generator used when the config does not name one.
    fn default_generator(&self) -> &'static str;
    fn run(&self, ctx: &RunContext) -> Result<RunRecord>;
}

pub fn scenarios() -> Registry<dyn Scenario> {
    let mut r: Registry<dyn Scenario> = Registry::new("scenario");
    let all: [Arc<dyn Scenario>; 5] = [
        Arc::new(LinearDecay {
            name: "linear_decay",
            generator: "random-smooth",
        }),
        Arc::new(LinearDecay {
            name: "linear_sharpness",
            generator: "sharpness",
        }),
        Arc::new(Conservation),
        Arc::new(Nonlinear {
            name: "nonlinear_smalldata",
        }),
        Arc::new(Nonlinear {
            name: "sigma_convergence",
        }),
    ];
    for s in all {
        r.register(s.name(), s);
    }
    r
}

/// Column label for a Sobolev index.
pub fn s_label(s: f64) -> String {
    format!("{s}")
}

/// Exact linear flow sampled on the configured time grid; records
/// `||theta_bar||_{H^s}` and `||v_d||_{H^s}` for every configured `s`.
struct LinearDecay {
    name: &'static str,
    generator: &'static str,
}

impl Scenario for LinearDecay {
    fn name(&self) -> &'static str {
        self.name
    }

    fn default_generator(&self) -> &'static str {
        self.generator
    }

    fn run(&self, ctx: &RunContext) -> Result<RunRecord> {
        let cfg = &ctx.cfg;
        let trunc = *ctx.initial.trunc();
        let table = eigen_table(&trunc, cfg.alpha)?;
        let mut columns = Vec::new();
        for &s in &cfg.diagnostics.s {
            columns.push(format!("theta_bar_H{}", s_label(s)));
            columns.push(format!("v_d_H{}", s_label(s)));
        }
        columns.push("E_m".into());
        let rows: Vec<(f64, Vec<f64>)> = cfg
            .sample_times()
            .into_par_iter()
            .map(|t| -> Result<(f64, Vec<f64>)> {
                let u = linear_at(&trunc, &table, &ctx.initial, t)?;
                let theta_bar = project_mean_free(&u.theta);
                let mut row = Vec::new();
                for &s in &cfg.diagnostics.s {
                    row.push(sobolev_norm(&theta_bar, &NormSpec::homogeneous(s))?);
                    row.push(sobolev_norm(&u.v_d, &NormSpec::homogeneous(s))?);
                }
                row.push(energy_e(&u, cfg.m)?);
                Ok((t, row))
            })
            .collect::<Result<_>>()?;
        let mut rec = RunRecord::new(columns);
        for (t, row) in rows {
            rec.push(t, row)?;
        }
        let window = cfg.fit_window();
        for &s in &cfg.diagnostics.s {
            let l = s_label(s);
            let th = predicted_slope(s, cfg.m, cfg.alpha, EnvelopeKind::ThetaBar);
            let vd = predicted_slope(s, cfg.m, cfg.alpha, EnvelopeKind::VD);
            let a = try_fit(&mut rec, &format!("theta_bar_H{l}"), window, th);
            let b = try_fit(&mut rec, &format!("v_d_H{l}"), window, vd);
            if let (Some(a), Some(b)) = (a, b) {
                rec.meta.insert(format!("slope_gap_H{l}"), json!(b - a));
            }
        }
        Ok(rec)
    }
}

/// Fits `series`; a failed fit is recorded under `meta.fit_errors` instead
/// of aborting the run.
fn try_fit(rec: &mut RunRecord, series: &str, window: (f64, f64), predicted: f64) -> Option<f64> {
    match rec.fit(series, window, Some(predicted)) {
        Ok(fit) => Some(fit.slope),
        Err(e) => {
            let errors = rec.meta.entry("fit_errors").or_insert_with(|| json!({}));
            errors[series] = json!(e.to_string());
            None
        }
    }
}

fn linear_at(
    trunc: &strata_core::basis::Truncation,
    table: &[ModeEigenSystem],
    u0: &FlowState,
    t: f64,
) -> Result<FlowState> {
    if t == 0.0 {
        return Ok(u0.clone());
    }
    Ok(PropagatorTable::from_eigen_table(*trunc, table, t)?.apply(u0)?)
}

/// Step size for the next step from `t` towards `target`.
fn next_dt(ctx: &RunContext, dy: &Dynamics, state: &FlowState, target: f64) -> f64 {
    let base = match ctx.cfg.time.dt {
        Some(dt) => dt,
        None => ctx.cfg.time.dt_max.min(0.9 * dy.dt_limit(state)),
    };
    let rest = target - state.t;
    // Avoid a sliver step right before a sample time.
    if base >= rest || rest - base < 1e-3 * base {
        rest
    } else {
        base
    }
}

/// Callbacks of [`integrate`].
trait Observer {
    fn on_step(&mut self, prev: &FlowState, next: &FlowState) -> Result<()>;
    fn on_sample(&mut self, state: &FlowState) -> Result<()>;
}

/// Drives the initial state through every sample time, hitting each one
/// exactly. `on_sample` also sees `t = 0`.
fn integrate(ctx: &RunContext, dy: &mut Dynamics, obs: &mut dyn Observer) -> Result<(FlowState, Vec<f64>)> {
    let mut state = ctx.initial.clone();
    let mut dts = Vec::new();
    let e0 = energy_e(&state, ctx.cfg.m)?;
    for target in ctx.cfg.sample_times() {
        while state.t < target {
            let dt = next_dt(ctx, dy, &state, target);
            let mut next = dy.step(ctx.stepper.as_ref(), &state, dt)?;
            if next.t > target - 1e-12 * target.max(1.0) {
                next.t = target;
            }
            dts.push(dt);
            let e = energy_e(&next, ctx.cfg.m)?;
            if !e.is_finite() || e > 10.0 * e0 {
                let dump = ctx.out_dir.join("instability_checkpoint.json");
                let saved = std::fs::create_dir_all(&ctx.out_dir)
                    .ok()
                    .and_then(|_| Checkpoint::new(&next, ctx.stepper.name(), dts.clone()).save(&dump).ok())
                    .map(|_| dump);
                return Err(CliError::Instability {
                    t: next.t,
                    reason: format!("E_m grew from {e0:e} to {e:e}"),
                    dump: saved,
                });
            }
            obs.on_step(&state, &next)?;
            state = next;
        }
        obs.on_sample(&state)?;
    }
    Ok((state, dts))
}

fn maybe_checkpoint(ctx: &RunContext, state: &FlowState, dts: Vec<f64>) -> Result<()> {
    if ctx.cfg.output.checkpoint {
        std::fs::create_dir_all(&ctx.out_dir).map_err(|e| CliError::io(&ctx.out_dir, e))?;
        Checkpoint::new(state, ctx.stepper.name(), dts).save(&ctx.out_dir.join("checkpoint.json"))?;
    }
    Ok(())
}

/// Full nonlinear flow tracking `int theta`, `int v_h` and the horizontal
/// mean of `v_d`. For `alpha = 0` the mean velocity obeys
/// `int v_h(t) = e^{-t} int v_h(0)`; for `alpha = 1` it is conserved.
struct Conservation;

struct ConservationObserver {
    init: ConservedQuantities,
    decay: f64,
    theta_drift: f64,
    vh_drift: f64,
    law_max: f64,
    vd_max: f64,
    rows: Vec<(f64, Vec<f64>)>,
}

impl ConservationObserver {
    fn law_err(&self, s: &FlowState) -> f64 {
        let c = conserved_quantities(s);
        let f = (-self.decay * s.t).exp();
        c.vh_integral
            .iter()
            .zip(&self.init.vh_integral)
            .map(|(now, init)| {
                let expect = f * init;
                if expect == 0.0 {
                    now.abs()
                } else {
                    ((now - expect) / expect).abs()
                }
            })
            .fold(0.0, f64::max)
    }
}

impl Observer for ConservationObserver {
    fn on_step(&mut self, prev: &FlowState, next: &FlowState) -> Result<()> {
        let (a, b) = (conserved_quantities(prev), conserved_quantities(next));
        let f = (-self.decay * (next.t - prev.t)).exp();
        self.theta_drift = self.theta_drift.max((b.theta_integral - a.theta_integral).abs());
        for (x, y) in a.vh_integral.iter().zip(&b.vh_integral) {
            self.vh_drift = self.vh_drift.max((y - f * x).abs());
        }
        self.law_max = self.law_max.max(self.law_err(next));
        self.vd_max = self.vd_max.max(b.vd_mean_max);
        Ok(())
    }

    fn on_sample(&mut self, s: &FlowState) -> Result<()> {
        let c = conserved_quantities(s);
        let mut row = vec![c.theta_integral];
        row.extend(&c.vh_integral);
        row.extend([c.vd_mean_max, self.law_err(s)]);
        self.rows.push((s.t, row));
        Ok(())
    }
}

impl Scenario for Conservation {
    fn name(&self) -> &'static str {
        "conservation"
    }

    fn default_generator(&self) -> &'static str {
        "mean-velocity"
    }

    fn run(&self, ctx: &RunContext) -> Result<RunRecord> {
        let cfg = &ctx.cfg;
        let mut dy = Dynamics::new(*ctx.initial.trunc(), cfg.alpha)?.with_cfl(cfg.time.cfl);
        let init = conserved_quantities(&ctx.initial);
        let mut columns = vec!["theta_integral".to_string()];
        columns.extend((1..cfg.d).map(|k| format!("vh_integral_{k}")));
        columns.extend(["vd_mean_max".to_string(), "mean_law_rel_err".to_string()]);
        let mut obs = ConservationObserver {
            vd_max: init.vd_mean_max,
            init,
            decay: match cfg.alpha {
                Alpha::Zero => 1.0,
                Alpha::One => 0.0,
            },
            theta_drift: 0.0,
            vh_drift: 0.0,
            law_max: 0.0,
            rows: Vec::new(),
        };
        let (last, dts) = integrate(ctx, &mut dy, &mut obs)?;
        let mut rec = RunRecord::new(columns);
        for (t, row) in obs.rows {
            rec.push(t, row)?;
        }
        rec.meta.insert("steps".into(), json!(dts.len()));
        rec.meta.insert("theta_drift_per_step".into(), json!(obs.theta_drift));
        rec.meta.insert("vh_drift_per_step".into(), json!(obs.vh_drift));
        rec.meta.insert("mean_law_max_rel_err".into(), json!(obs.law_max));
        rec.meta.insert("vd_mean_max".into(), json!(obs.vd_max));
        maybe_checkpoint(ctx, &last, dts)?;
        Ok(rec)
    }
}

/// Full nonlinear flow with the small-data diagnostics: the energy witness
/// `B_m^2 <= 4 ||u_0||_{H^m}^2`, the cross-term bound `|A_k| <= E_k^2 / 2`,
/// the divergence after every step, the key quantities, and the asymptotic
/// profile `sigma` with `||theta - sigma||_{L^2}`.
struct Nonlinear {
    name: &'static str,
}

struct NonlinearObserver<'a> {
    cfg: &'a ScenarioConfig,
    initial: &'a FlowState,
    tr: Transformer,
    table: Option<Vec<ModeEigenSystem>>,
    bm: BmAccumulator,
    keys: KeyQuantities,
    div_since: f64,
    div_max: f64,
    cross_max: f64,
    flux: Vec<FluxSample>,
    rows: Vec<(f64, Vec<f64>)>,
    /// `(||theta_bar||_{L^2}, horizontal-mean profile of theta)` per sample.
    theta_parts: Vec<(f64, SpectralField)>,
}

impl Observer for NonlinearObserver<'_> {
    fn on_step(&mut self, prev: &FlowState, next: &FlowState) -> Result<()> {
        let h = next.t - prev.t;
        self.keys.step(prev, 0.5 * h);
        self.keys.step(next, 0.5 * h);
        self.bm.push(next)?;
        let div = validate_state(next).divergence.max_violation;
        self.div_since = self.div_since.max(div);
        self.div_max = self.div_max.max(div);
        self.flux.push(FluxSample::nonlinear(&self.tr, next)?);
        Ok(())
    }

    fn on_sample(&mut self, s: &FlowState) -> Result<()> {
        let m = self.cfg.m;
        let mut ratio = 0.0f64;
        for k in 1..=(m.floor() as usize) {
            let e = energy_e(s, k as f64)?;
            if e > 0.0 {
                ratio = ratio.max(cross_a(s, k)?.abs() / (0.5 * e * e));
            }
        }
        self.cross_max = self.cross_max.max(ratio);
        let delta_sq = energy_e(self.initial, m)?.powi(2);
        let mut row = vec![
            energy_e(s, m)?,
            self.bm.value_sq() / delta_sq,
            ratio,
            self.div_since,
            self.keys.k1,
            self.keys.k2,
        ];
        if let Some(table) = &self.table {
            let mut diff = linear_at(s.trunc(), table, self.initial, s.t)?;
            diff.axpy(-1.0, s)?;
            row.push(energy_e(&diff, m)?);
        }
        self.div_since = 0.0;
        let bar = project_mean_free(&s.theta);
        let mut mean = s.theta.clone();
        mean.axpy(-1.0, &bar)?;
        self.theta_parts.push((sobolev_norm(&bar, &NormSpec::homogeneous(0.0))?, mean));
        self.rows.push((s.t, row));
        Ok(())
    }
}

impl Scenario for Nonlinear {
    fn name(&self) -> &'static str {
        self.name
    }

    fn default_generator(&self) -> &'static str {
        "random-smooth"
    }

    fn run(&self, ctx: &RunContext) -> Result<RunRecord> {
        let cfg = &ctx.cfg;
        let trunc = *ctx.initial.trunc();
        let mut dy = Dynamics::new(trunc, cfg.alpha)?.with_cfl(cfg.time.cfl);
        let mut obs = NonlinearObserver {
            cfg,
            initial: &ctx.initial,
            tr: dy.transformer().clone(),
            table: if cfg.diagnostics.compare_linear {
                Some(eigen_table(&trunc, cfg.alpha)?)
            } else {
                None
            },
            bm: BmAccumulator::new(cfg.m),
            keys: KeyQuantities::default(),
            div_since: 0.0,
            div_max: validate_state(&ctx.initial).divergence.max_violation,
            cross_max: 0.0,
            flux: vec![FluxSample::nonlinear(dy.transformer(), &ctx.initial)?],
            rows: Vec::new(),
            theta_parts: Vec::new(),
        };
        obs.bm.push(&ctx.initial)?;
        let (last, dts) = integrate(ctx, &mut dy, &mut obs)?;

        let sigma = sigma_profile(&ctx.initial.theta, &obs.flux, cfg.diagnostics.tail_tol)?;
        let half: Vec<FluxSample> = obs
            .flux
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0 || *i == obs.flux.len() - 1)
            .map(|(_, f)| f.clone())
            .collect();
        let sigma_half = sigma_profile(&ctx.initial.theta, &half, cfg.diagnostics.tail_tol)?;
        let sigma_field = sigma.to_field(&ctx.initial.theta)?;

        let mut columns: Vec<String> = [
            "E_m",
            "witness_ratio",
            "cross_ratio",
            "divergence",
            "K1",
            "K2",
        ]
        .map(String::from)
        .to_vec();
        if obs.table.is_some() {
            columns.push("linear_deviation_Hm".into());
        }
        columns.extend(["theta_bar_L2".to_string(), "theta_minus_sigma_L2".to_string()]);
        let mut rec = RunRecord::new(columns);
        for ((t, mut row), (bar, mean)) in obs.rows.into_iter().zip(obs.theta_parts) {
            let mut dev = mean;
            dev.axpy(-1.0, &sigma_field)?;
            let dev = sobolev_norm(&dev, &NormSpec::homogeneous(0.0))?;
            row.extend([bar, (bar * bar + dev * dev).sqrt()]);
            rec.push(t, row)?;
        }
        let predicted = predicted_slope(0.0, cfg.m, cfg.alpha, EnvelopeKind::ThetaBar);
        let window = cfg.fit_window();
        try_fit(&mut rec, "theta_minus_sigma_L2", window, predicted);
        try_fit(&mut rec, "theta_bar_L2", window, predicted);

        let witness_max = rec
            .column("witness_ratio")
            .unwrap_or_default()
            .into_iter()
            .fold(0.0, f64::max);
        let meta = &mut rec.meta;
        meta.insert("steps".into(), json!(dts.len()));
        meta.insert("delta".into(), json!(energy_e(&ctx.initial, cfg.m)?));
        meta.insert("witness_max_ratio".into(), json!(witness_max));
        meta.insert("cross_ratio_max".into(), json!(obs.cross_max));
        meta.insert("divergence_max".into(), json!(obs.div_max));
        meta.insert("K1".into(), json!(obs.keys.k1));
        meta.insert("K2".into(), json!(obs.keys.k2));
        meta.insert("sigma_l2".into(), json!(sigma.l2()));
        meta.insert("sigma_tail_error".into(), json!(finite_or_null(sigma.tail_error)));
        meta.insert("sigma_converged".into(), json!(sigma.converged()));
        meta.insert(
            "sigma_half_density_change".into(),
            json!((sigma_half.l2() - sigma.l2()).abs()),
        );
        meta.insert("sigma".into(), serde_json::to_value(&sigma.coeffs).unwrap_or(Value::Null));
        maybe_checkpoint(ctx, &last, dts)?;
        Ok(rec)
    }
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}
