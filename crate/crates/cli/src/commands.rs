use crate::run_config::{Experiment, Overrides, RunConfig};
use crate::summary::Summary;
use serde::Serialize;
use std::path::{Path, PathBuf};
use wpcurve::curve::{chord_arc_constant, gamma_u, CurveSamples, TangentAngle, DEFAULT_PAIR_SEED};
use wpcurve::extension::{beltrami_of_field, extension_general, tau_bilipschitz};
use wpcurve::fixtures::{self, Member, Profile};
use wpcurve::io::{
    curve_from_csv, curve_to_csv, field_to_csv, function_from_csv, function_to_csv, map_to_csv, read_text,
    series_to_csv, to_json, write_atomic,
};
use wpcurve::lab::{
    continuity_sweep, prop61_scaling, symmetry_suite, thm41_equivalence, windowed_h12, ExperimentConfig,
    ExperimentReport, Verdict,
};
use wpcurve::numerics::{Orientation, SampledLineFunction};
use wpcurve::spaces::{bmo_norm, h12_seminorm, vmo_modulus, IntervalFamily};
use wpcurve::welding::{riemann_maps, welding_map, RiemannOptions, DEFAULT_RESOLUTION};
use wpcurve::{Complex64, Error, Result};

/// Pairs sampled for chord-arc estimates.
const CHORD_ARC_PAIRS: usize = 200_000;
/// Half width of the half-plane grids used by `extend`.
const FIELD_EXTENT: f64 = 8.0;
const FIELD_SUB_LEVELS: usize = 2;

/// What a finished command reports back to `main`.
pub enum Outcome {
    Done,
    Verdict(Verdict),
}

pub struct Context {
    pub out: PathBuf,
    pub overrides: Overrides,
}

impl Context {
    fn write(&self, name: &str, text: &str) -> Result<()> {
        std::fs::create_dir_all(&self.out)?;
        write_atomic(&self.out.join(name), text.as_bytes())
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        self.write(name, &to_json(value)?)
    }

    fn finish(&self, name: &str, summary: Summary) -> Result<Outcome> {
        self.write_json(name, &summary)?;
        match summary.error {
            Some(e) => Err(e),
            None => Ok(Outcome::Done),
        }
    }

    fn resolution(&self) -> usize {
        self.overrides.resolution.unwrap_or(DEFAULT_RESOLUTION)
    }

    fn levels(&self) -> usize {
        self.overrides.levels.unwrap_or(fixtures::DEFAULT_LEVELS)
    }

    /// Resamples `f` when `--grid` or `--window` is given.
    fn regrid(&self, f: SampledLineFunction) -> Result<SampledLineFunction> {
        if self.overrides.grid.is_none() && self.overrides.window.is_none() {
            return Ok(f);
        }
        let l = self.overrides.window.unwrap_or(f.grid().half_extent());
        let n = self.overrides.grid.unwrap_or(f.len());
        let grid = fixtures::line_grid(l, n)?;
        SampledLineFunction::from_fn(grid, f.support(), |x| f.value_at(x))
    }

    fn load_function(&self, path: &Path) -> Result<SampledLineFunction> {
        self.regrid(function_from_csv(&read_text(path)?)?)
    }

    fn load_angle(&self, path: &Path) -> Result<TangentAngle> {
        let f = self.load_function(path)?;
        if !f.is_real() {
            return Err(Error::Parameter("tangent angle must be real".into()));
        }
        TangentAngle::new(f)
    }
}

pub fn sample(ctx: &Context, profile: Profile, amplitude: f64, name: Option<&str>) -> Result<Outcome> {
    ctx.overrides.validate()?;
    let grid = fixtures::line_grid(
        ctx.overrides.window.unwrap_or(fixtures::DEFAULT_HALF_EXTENT),
        ctx.overrides.grid.unwrap_or(fixtures::DEFAULT_NODES),
    )?;
    let f = Member::new(profile, amplitude).sample(&grid)?;
    let file = name.map(str::to_owned).unwrap_or_else(|| format!("{}.csv", profile.name()));
    ctx.write(&file, &function_to_csv(&f))?;
    Ok(Outcome::Done)
}

#[derive(Serialize)]
struct ScaleValue {
    scale: f64,
    value: f64,
}

fn vmo_scales(u: &SampledLineFunction) -> Vec<f64> {
    let floor = 4.0 * u.grid().max_spacing();
    let mut s = u.grid().half_extent();
    let mut out = Vec::new();
    while s >= floor && out.len() < 8 {
        out.push(s);
        s *= 0.5;
    }
    out
}

pub fn norms(ctx: &Context, input: &Path) -> Result<Outcome> {
    ctx.overrides.validate()?;
    let u = ctx.load_function(input)?;
    let mut sum = Summary::new("norms");
    sum.put("nodes", u.len());
    sum.put("half_extent", u.grid().half_extent());
    sum.put("support", u.support());
    if let Some(r) = sum.stage("h12", || Ok(h12_seminorm(&u))) {
        sum.put("h12", r);
    }
    if let Some(r) = sum.stage("bmo", || bmo_norm(&u, IntervalFamily::Dyadic)) {
        sum.put("bmo", r);
    }
    let vmo = sum.stage("vmo", || {
        vmo_scales(&u)
            .into_iter()
            .map(|scale| Ok(ScaleValue { scale, value: vmo_modulus(&u, scale)? }))
            .collect::<Result<Vec<_>>>()
    });
    if let Some(v) = vmo {
        sum.put("vmo", v);
    }
    sum.put("sup", u.sup_norm());
    ctx.finish("norms.json", sum)
}

fn identity_gap(c: &CurveSamples) -> f64 {
    c.arc()
        .iter()
        .zip(c.points())
        .map(|(&s, z)| (z - Complex64::new(s, 0.0)).norm())
        .fold(0.0, f64::max)
}

pub fn synth(ctx: &Context, angle: &Path) -> Result<Outcome> {
    ctx.overrides.validate()?;
    let b = ctx.load_angle(angle)?;
    let mut sum = Summary::new("synth");
    sum.put("nodes", b.b.len());
    if let Some(h) = sum.stage("angle-norms", || Ok((h12_seminorm(&b.b).value, bmo_norm(&b.b, IntervalFamily::Dyadic)?.value))) {
        sum.put("angle_h12", h.0);
        sum.put("angle_bmo", h.1);
    }
    let curve = sum.stage("curve", || Ok(gamma_u(&b.b)?.1));
    if let Some(c) = &curve {
        let (lo, hi) = c.speed_range();
        sum.put("speed_range", [lo, hi]);
        sum.put("diameter", c.diameter());
        sum.put("identity_gap", identity_gap(c));
        ctx.write("curve.csv", &curve_to_csv(c))?;
    }
    let seed = ctx.overrides.seed.unwrap_or(DEFAULT_PAIR_SEED);
    let k = sum.stage("chord-arc", || chord_arc_constant(curve.as_ref().unwrap(), CHORD_ARC_PAIRS, seed));
    if let Some(k) = k {
        sum.put("chord_arc", k);
        sum.put("chord_arc_seed", seed);
    }
    ctx.finish("synth.json", sum)
}

#[derive(Serialize)]
struct PlaneSummary {
    sup: f64,
    energy: f64,
    wp: f64,
    min_d_rho: f64,
    identity_gap: f64,
}

pub fn extend(ctx: &Context, angle: &Path, u_path: &Path) -> Result<Outcome> {
    ctx.overrides.validate()?;
    let b = ctx.load_angle(angle)?;
    let u = ctx.load_function(u_path)?;
    let mut sum = Summary::new("extend");
    let u_h12 = h12_seminorm(&u).value;
    sum.put("u_h12", u_h12);
    let extent = FIELD_EXTENT.min(0.5 * b.grid().half_extent());
    for (label, orientation) in [("upper", Orientation::Upper), ("lower", Orientation::Lower)] {
        let grid = sum.stage(&format!("{label}-grid"), || {
            fixtures::field_grid(b.grid(), extent, ctx.levels(), FIELD_SUB_LEVELS, orientation)
        });
        let tau = sum.stage(&format!("{label}-tau"), || tau_bilipschitz(&b, grid.as_ref().unwrap()));
        let rho = sum.stage(&format!("{label}-extension"), || {
            extension_general(&b, &u, tau.as_ref().unwrap(), grid.as_ref().unwrap())
        });
        let mu = sum.stage(&format!("{label}-beltrami"), || beltrami_of_field(rho.as_ref().unwrap()));
        if let (Some(rho), Some(mu)) = (rho, mu) {
            let g = rho.grid().clone();
            let gap = rho
                .rho
                .values()
                .iter()
                .enumerate()
                .map(|(i, v)| (v - g.point(i / g.cols(), i % g.cols())).norm())
                .fold(0.0, f64::max);
            let n = mu.norm();
            sum.put(
                label,
                PlaneSummary { sup: n.sup, energy: n.energy, wp: n.value, min_d_rho: rho.min_d_rho(), identity_gap: gap },
            );
            if u_h12 > 0.0 {
                sum.put(&format!("{label}_ratio"), n.value / u_h12);
            }
            ctx.write(&format!("rho_{label}.csv"), &field_to_csv(&rho.rho))?;
            ctx.write(&format!("mu_{label}.csv"), &field_to_csv(mu.field()))?;
        }
    }
    ctx.finish("extend.json", sum)
}

pub fn weld(ctx: &Context, curve_path: &Path) -> Result<Outcome> {
    ctx.overrides.validate()?;
    let c = curve_from_csv(&read_text(curve_path)?)?;
    let mut sum = Summary::new("weld");
    sum.put("nodes", c.len());
    sum.put("resolution", ctx.resolution());
    let opts = RiemannOptions { resolution: ctx.resolution(), field_grid: None, self_check: true };
    let maps = sum.stage("riemann-maps", || riemann_maps(&c, &opts));
    let rec = sum.stage("welding", || {
        let m = maps.as_ref().unwrap();
        welding_map(&m.left, &m.right, &c)
    });
    if let (Some(m), Some(r)) = (&maps, &rec) {
        sum.put("left_normalization", m.left.normalization);
        sum.put("right_normalization", m.right.normalization);
        sum.put("convergence", m.convergence);
        let window = 0.5 * c.arc()[c.len() - 1].min(-c.arc()[0]);
        let gap = r
            .h
            .nodes()
            .iter()
            .zip(r.h.values())
            .filter(|(x, _)| x.abs() <= window)
            .map(|(&x, v)| (v.re - x).abs())
            .fold(0.0, f64::max);
        sum.put("identity_gap", gap);
        ctx.write("h.csv", &map_to_csv(&r.h))?;
        ctx.write("h1.csv", &map_to_csv(&r.h1))?;
        ctx.write("h2.csv", &map_to_csv(&r.h2))?;
        ctx.write("log_h_prime.csv", &function_to_csv(&r.log_h_prime))?;
    }
    let h12 = sum.stage("log-derivative-norm", || windowed_h12(&rec.as_ref().unwrap().log_h_prime));
    if let Some(v) = h12 {
        sum.put("log_h_prime_h12", v);
    }
    ctx.finish("weld.json", sum)
}

fn run_experiment(kind: Experiment, cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match kind {
        Experiment::Continuity => continuity_sweep(cfg),
        Experiment::Prop61 => prop61_scaling(cfg),
        Experiment::Thm41 => thm41_equivalence(cfg),
        Experiment::Symmetry => symmetry_suite(cfg),
    }
}

/// Fail dominates inconclusive, which dominates pass.
fn worst(a: Verdict, b: Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        _ => Verdict::Pass,
    }
}

pub fn verify(ctx: &Context, config: &Path) -> Result<Outcome> {
    let rc = RunConfig::load(config, &ctx.overrides)?;
    let report = run_experiment(rc.experiment, &rc.config)?;
    ctx.write_json("report.json", &report)?;
    Ok(Outcome::Verdict(report.verdict))
}

#[derive(Serialize)]
struct SweepRecord {
    experiment: Experiment,
    config_hash: String,
    members: Vec<String>,
    reports: Vec<ExperimentReport>,
}

pub fn sweep(ctx: &Context, config: &Path) -> Result<Outcome> {
    let rc = RunConfig::load(config, &ctx.overrides)?;
    let members = fixtures::calibration_suite();
    let mut reports = Vec::with_capacity(members.len());
    let mut series = Vec::new();
    let mut verdict = Verdict::Pass;
    for (i, m) in members.iter().enumerate() {
        let mut cfg = rc.config.clone();
        cfg.base = *m;
        let r = run_experiment(rc.experiment, &cfg)?;
        if let Some(c) = r.check("forward-monotone") {
            for (&e, k) in cfg.epsilon_ladder.iter().zip(0..) {
                if let Some(v) = c.measured.get(&format!("eps={e}")) {
                    series.push(vec![i as f64, k as f64, e, *v]);
                }
            }
        }
        verdict = worst(verdict, r.verdict);
        reports.push(r);
    }
    if !series.is_empty() {
        ctx.write("series.csv", &series_to_csv(&["member", "step", "eps", "d"], &series))?;
    }
    let record = SweepRecord {
        experiment: rc.experiment,
        config_hash: rc.config.hash(),
        members: members.iter().map(Member::label).collect(),
        reports,
    };
    ctx.write_json("sweep.json", &record)?;
    Ok(Outcome::Verdict(verdict))
}
