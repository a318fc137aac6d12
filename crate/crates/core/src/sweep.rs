//! Seeded experiment sweeps that measure exact sums and counts against
//! bound shapes.
//!
//! A sweep walks a grid of `(p, h)` points, draws a fixed number of
//! pseudo-random admissible instances at each point, computes the exact
//! quantity for the chosen target alongside the matching bound, and
//! collects the ratios. Every bound carries implied constant 1, so the
//! maximum ratio over a sweep is an empirical estimate of the real
//! constant. All randomness flows from one 64-bit seed: row `i` draws
//! from stream `i` of a counter-based generator, which makes reports
//! identical across runs and across worker counts.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundError, BoundParams, DEFAULT_SLACK_C, DEFAULT_SLACK_EPS};
use crate::counting::{count_spectral, predicted_density, BoxSpec, CountError, SystemSpec};
use crate::field::{FieldCtx, FieldError};
use crate::sums::{acz_quadruple_count, exp_sum, mixed_char_sum, PolyMod, SumError};

/// Ways a sweep can fail before or while producing rows.
#[derive(Debug, Error)]
pub enum SweepError {
    #[error("sweep grid is empty")]
    EmptyGrid,
    #[error("sweep needs at least one instance per grid point")]
    ZeroInstances,
    #[error("grid point (p = {p}, h = {h}) needs 1 <= h <= p - 1")]
    BadGridPoint { p: u64, h: u32 },
    #[error("target {target} needs p >= 3 so that nonprincipal characters exist (got p = {p})")]
    TinyPrime { target: &'static str, p: u64 },
    #[error(
        "exponent range [{lo}, {hi}] cannot supply {s} strictly increasing exponents from 3 up"
    )]
    BadExponentRange { lo: u64, hi: u64, s: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Sum(#[from] SumError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// Which exact-versus-bound comparison a sweep runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepTarget {
    /// |Σ χ(x) e_p(F(x))| over an interval against `h * p^(-eta)`.
    Chang,
    /// |Σ e_p(F(x))| over an interval against the two-term Weyl-type bound.
    Wooley,
    /// Quadruple counts `x1 x2 = x3 x4` against `h^4/p` plus explicit slack.
    Acz,
    /// Box-count deviation from `h^n / p^(s+1)` against the error-term shape.
    Theorem,
    /// |Σ χ(G(x)) e_p(F(x))| for squarefree G against `sqrt(p) * ln p`.
    Weil,
}

impl SweepTarget {
    /// All targets, in the order they are documented.
    pub const ALL: [SweepTarget; 5] = [
        SweepTarget::Chang,
        SweepTarget::Wooley,
        SweepTarget::Acz,
        SweepTarget::Theorem,
        SweepTarget::Weil,
    ];

    /// The lowercase name used on the command line and in CSV rows.
    pub fn name(self) -> &'static str {
        match self {
            SweepTarget::Chang => "chang",
            SweepTarget::Wooley => "wooley",
            SweepTarget::Acz => "acz",
            SweepTarget::Theorem => "theorem",
            SweepTarget::Weil => "weil",
        }
    }

    /// Parses a target name; `None` for anything unknown.
    pub fn parse(name: &str) -> Option<SweepTarget> {
        SweepTarget::ALL.into_iter().find(|t| t.name() == name)
    }

    /// Names of the target-specific columns appended to each CSV row,
    /// aligned with [`SweepRow::extra`] by position.
    pub fn extra_columns(self) -> &'static [&'static str] {
        match self {
            SweepTarget::Chang => &["t", "degree"],
            SweepTarget::Wooley => &["degree", "bound_short"],
            SweepTarget::Acz => &["count", "excess"],
            SweepTarget::Theorem => &["count", "main"],
            SweepTarget::Weil => &["t", "g_degree"],
        }
    }
}

impl std::fmt::Display for SweepTarget {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A target-specific value carried alongside the fixed row columns.
/// Integers stay integers so counts survive serialization exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Extra {
    Int(u64),
    Float(f64),
}

/// Everything a sweep needs: target, grid, volume, seed, and the knobs
/// for instance generation. Construct with [`SweepPlan::new`] and adjust
/// fields as needed; the defaults match the documented experiments.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPlan {
    pub target: SweepTarget,
    /// `(p, h)` grid points; sorted by `(p, h)` before rows are assigned.
    pub grid: Vec<(u64, u32)>,
    /// Instances drawn per grid point.
    pub instances: u32,
    /// Root seed; row `i` draws from stream `i` under this seed.
    pub seed: u64,
    /// κ for the chang and theorem targets.
    pub kappa: f64,
    /// Polynomial degree for the chang, wooley, and weil targets.
    pub poly_degree: u64,
    /// Number of variables for the theorem target.
    pub n: usize,
    /// Number of diagonal constraints for the theorem target.
    pub s: usize,
    /// Inclusive exponent range sampled for the theorem target.
    pub k_range: (u64, u64),
    /// Draw strictly increasing exponents starting at 3 or above. When
    /// false, exponents are sampled independently and rows may fall
    /// outside the regime the bounds assume.
    pub strict_ladder: bool,
    /// Slack exponent for the acz target bound.
    pub slack_eps: f64,
    /// Slack constant for the acz target bound.
    pub slack_c: f64,
}

impl SweepPlan {
    /// A plan with the documented defaults: κ = 0.25, degree-3
    /// polynomials, 6-variable single-constraint systems with exponents
    /// drawn from [3, 7], strict ladders, and the default slack.
    pub fn new(target: SweepTarget, grid: &[(u64, u32)], instances: u32, seed: u64) -> Self {
        SweepPlan {
            target,
            grid: grid.to_vec(),
            instances,
            seed,
            kappa: 0.25,
            poly_degree: 3,
            n: 6,
            s: 1,
            k_range: (3, 7),
            strict_ladder: true,
            slack_eps: DEFAULT_SLACK_EPS,
            slack_c: DEFAULT_SLACK_C,
        }
    }
}

/// One instance: the exact quantity, the bound, and their ratio.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub h: u32,
    /// Variables in the instance; 1 for the single-sum targets.
    pub n: usize,
    /// Diagonal constraints; 0 for the single-sum targets.
    pub s: usize,
    /// The generator stream this row drew from; rerunning the row alone
    /// with this stream reproduces it.
    pub seed: u64,
    pub exact: f64,
    pub bound: f64,
    /// `exact / bound`; the bound shapes are strictly positive.
    pub ratio: f64,
    /// True when the bound's hypothesis fails at this `(p, h)`; flagged
    /// rows stay in the report but are excluded from assertions and
    /// summary statistics.
    pub flagged: bool,
    /// Target-specific values, aligned with
    /// [`SweepTarget::extra_columns`].
    pub extra: Vec<Extra>,
}

/// Aggregates over the unflagged rows of a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub rows: usize,
    pub flagged: usize,
    /// Largest ratio over unflagged rows; `None` when every row is
    /// flagged. This is the empirical implied constant.
    pub max_ratio: Option<f64>,
    /// Least-squares slope of `ln(ratio)` against `ln(p)` over unflagged
    /// rows with positive ratio; `None` without two distinct `p`.
    pub trend_slope: Option<f64>,
}

/// A finished sweep: the plan echoed back, rows sorted by `(p, h)`, and
/// the summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub plan: SweepPlan,
    pub rows: Vec<SweepRow>,
    pub summary: SweepSummary,
}

/// Runs a sweep. Grid points evaluate independently and in parallel;
/// rows are assembled in sorted `(p, h)` order regardless of worker
/// count, so reports with the same plan are identical byte for byte.
/// Guard errors from the underlying exact computations abort the sweep.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepReport, SweepError> {
    if plan.grid.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    if plan.instances == 0 {
        return Err(SweepError::ZeroInstances);
    }
    if plan.target == SweepTarget::Theorem && plan.strict_ladder {
        let (lo, hi) = plan.k_range;
        let span = if hi >= lo { hi - lo + 1 } else { 0 };
        if lo < 3 || span < plan.s as u64 {
            return Err(SweepError::BadExponentRange { lo, hi, s: plan.s });
        }
    }

    let mut grid = plan.grid.clone();
    grid.sort_unstable();

    let mut ctxs: BTreeMap<u64, FieldCtx> = BTreeMap::new();
    for &(p, h) in &grid {
        if matches!(plan.target, SweepTarget::Chang | SweepTarget::Weil) && p < 3 {
            return Err(SweepError::TinyPrime {
                target: plan.target.name(),
                p,
            });
        }
        if !ctxs.contains_key(&p) {
            ctxs.insert(p, FieldCtx::new(p)?);
        }
        if h == 0 || u64::from(h) > p - 1 {
            return Err(SweepError::BadGridPoint { p, h });
        }
    }

    let jobs: Vec<(u64, u64, u32)> = grid
        .iter()
        .enumerate()
        .flat_map(|(gi, &(p, h))| {
            (0..plan.instances)
                .map(move |i| (gi as u64 * u64::from(plan.instances) + u64::from(i), p, h))
        })
        .collect();

    let rows: Vec<SweepRow> = jobs
        .into_par_iter()
        .map(|(row_id, p, h)| run_row(plan, &ctxs[&p], h, row_id))
        .collect::<Result<Vec<_>, SweepError>>()?;

    let summary = summarize(&rows);
    Ok(SweepReport {
        plan: plan.clone(),
        rows,
        summary,
    })
}

fn run_row(
    plan: &SweepPlan,
    ctx: &FieldCtx,
    h: u32,
    row_id: u64,
) -> Result<SweepRow, SweepError> {
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    rng.set_stream(row_id);
    match plan.target {
        SweepTarget::Chang => chang_row(plan, ctx, h, row_id, &mut rng),
        SweepTarget::Wooley => wooley_row(plan, ctx, h, row_id, &mut rng),
        SweepTarget::Acz => acz_row(plan, ctx, h, row_id, &mut rng),
        SweepTarget::Theorem => theorem_row(plan, ctx, h, row_id, &mut rng),
        SweepTarget::Weil => weil_row(plan, ctx, h, row_id, &mut rng),
    }
}

fn rand_unit(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    rng.random_range(1..p)
}

fn rand_residue(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    rng.random_range(0..p)
}

fn rand_interval_start(rng: &mut ChaCha8Rng, p: u64, h: u32) -> u32 {
    rng.random_range(0..=(p - 1 - u64::from(h))) as u32
}

/// A random polynomial of exactly the given degree: lower coefficients
/// uniform over all residues, leading coefficient a uniform unit.
fn rand_poly(rng: &mut ChaCha8Rng, ctx: &FieldCtx, degree: u64) -> PolyMod {
    let p = u64::from(ctx.p());
    let mut coeffs: Vec<u64> = (0..degree).map(|_| rand_residue(rng, p)).collect();
    coeffs.push(rand_unit(rng, p));
    PolyMod::new(ctx, &coeffs)
}

fn chang_row(
    plan: &SweepPlan,
    ctx: &FieldCtx,
    h: u32,
    row_id: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepRow, SweepError> {
    let p = u64::from(ctx.p());
    let t = rng.random_range(1..ctx.group_order());
    let f = rand_poly(rng, ctx, plan.poly_degree);
    let u = rand_interval_start(rng, p, h);
    let exact = mixed_char_sum(ctx, t, &PolyMod::identity(), &f, u, h)?.norm();
    let bv = bounds::chang_bound(u64::from(h), p, plan.kappa, plan.poly_degree)?;
    Ok(SweepRow {
        p,
        h,
        n: 1,
        s: 0,
        seed: row_id,
        exact,
        bound: bv.value,
        ratio: exact / bv.value,
        flagged: !bv.in_range,
        extra: vec![Extra::Int(u64::from(t)), Extra::Int(plan.poly_degree)],
    })
}

fn wooley_row(
    plan: &SweepPlan,
    ctx: &FieldCtx,
    h: u32,
    row_id: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepRow, SweepError> {
    let p = u64::from(ctx.p());
    let f = rand_poly(rng, ctx, plan.poly_degree);
    let u = rand_interval_start(rng, p, h);
    let exact = exp_sum(ctx, &f, u, h)?.norm();
    let bound = bounds::wooley_bound(u64::from(h), p, plan.poly_degree)?;
    let short = bounds::wooley_short_bound(u64::from(h), p, plan.poly_degree)?;
    Ok(SweepRow {
        p,
        h,
        n: 1,
        s: 0,
        seed: row_id,
        exact,
        bound,
        ratio: exact / bound,
        flagged: false,
        extra: vec![Extra::Int(plan.poly_degree), Extra::Float(short.value)],
    })
}

fn acz_row(
    plan: &SweepPlan,
    ctx: &FieldCtx,
    h: u32,
    row_id: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepRow, SweepError> {
    let p = u64::from(ctx.p());
    let u = rand_interval_start(rng, p, h);
    let count = acz_quadruple_count(ctx, u, h)?;
    let exact = count as f64;
    let bound = bounds::acz_bound(u64::from(h), p, plan.slack_eps, plan.slack_c);
    let hf = f64::from(h);
    let excess = (exact - hf.powi(4) / p as f64) / (hf * hf);
    Ok(SweepRow {
        p,
        h,
        n: 1,
        s: 0,
        seed: row_id,
        exact,
        bound,
        ratio: exact / bound,
        flagged: false,
        extra: vec![Extra::Int(count), Extra::Float(excess)],
    })
}

fn rand_exponents(rng: &mut ChaCha8Rng, plan: &SweepPlan) -> Vec<u64> {
    let (lo, hi) = plan.k_range;
    if plan.strict_ladder {
        let mut pool: Vec<u64> = (lo..=hi).collect();
        pool.shuffle(rng);
        let mut picked = pool[..plan.s].to_vec();
        picked.sort_unstable();
        picked
    } else {
        (0..plan.s).map(|_| rng.random_range(lo..=hi)).collect()
    }
}

fn theorem_row(
    plan: &SweepPlan,
    ctx: &FieldCtx,
    h: u32,
    row_id: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepRow, SweepError> {
    let p = u64::from(ctx.p());
    let a = rand_unit(rng, p);
    let b: Vec<u64> = (0..plan.s).map(|_| rand_residue(rng, p)).collect();
    let c: Vec<Vec<u64>> = (0..plan.n)
        .map(|_| (0..plan.s).map(|_| rand_unit(rng, p)).collect())
        .collect();
    let k: Vec<Vec<u64>> = (0..plan.n).map(|_| rand_exponents(rng, plan)).collect();
    let u: Vec<u32> = (0..plan.n)
        .map(|_| rand_interval_start(rng, p, h))
        .collect();

    let sys = SystemSpec::new(ctx, a, &b, &c, &k)?;
    let bx = BoxSpec::new(ctx, u, h)?;
    let res = count_spectral(ctx, &sys, &bx)?;
    let main = predicted_density(&sys, &bx).main_term;
    let exact = (res.count as f64 - main).abs();
    let eb = BoundParams::from_system(&sys, &bx, plan.kappa).error_bound()?;
    Ok(SweepRow {
        p,
        h,
        n: plan.n,
        s: plan.s,
        seed: row_id,
        exact,
        bound: eb.value,
        ratio: exact / eb.value,
        flagged: !eb.in_range,
        extra: vec![Extra::Int(res.count), Extra::Float(main)],
    })
}

fn weil_row(
    plan: &SweepPlan,
    ctx: &FieldCtx,
    h: u32,
    row_id: u64,
    rng: &mut ChaCha8Rng,
) -> Result<SweepRow, SweepError> {
    let p = u64::from(ctx.p());
    let t = rng.random_range(1..ctx.group_order());
    let r1 = rand_residue(rng, p);
    let r2 = loop {
        let r = rand_residue(rng, p);
        if r != r1 {
            break r;
        }
    };
    // (X - r1)(X - r2) with distinct roots is squarefree, hence not a
    // constant multiple of any proper power.
    let g = PolyMod::new(ctx, &[(r1 * r2) % p, (2 * p - r1 - r2) % p, 1]);
    let f = rand_poly(rng, ctx, plan.poly_degree);
    let u = rand_interval_start(rng, p, h);
    let exact = mixed_char_sum(ctx, t, &g, &f, u, h)?.norm();
    let bound = bounds::weil_mixed_bound(p);
    Ok(SweepRow {
        p,
        h,
        n: 1,
        s: 0,
        seed: row_id,
        exact,
        bound,
        ratio: exact / bound,
        flagged: false,
        extra: vec![Extra::Int(u64::from(t)), Extra::Int(2)],
    })
}

fn summarize(rows: &[SweepRow]) -> SweepSummary {
    let flagged = rows.iter().filter(|r| r.flagged).count();
    let mut max_ratio: Option<f64> = None;
    let mut pts: Vec<(u64, f64, f64)> = Vec::new();
    for row in rows.iter().filter(|r| !r.flagged) {
        max_ratio = Some(match max_ratio {
            Some(m) => m.max(row.ratio),
            None => row.ratio,
        });
        if row.ratio > 0.0 {
            pts.push(((row.p), (row.p as f64).ln(), row.ratio.ln()));
        }
    }
    SweepSummary {
        rows: rows.len(),
        flagged,
        max_ratio,
        trend_slope: trend_slope(&pts),
    }
}

/// Least-squares slope of `y` against `x` over `(p, x, y)` points;
/// `None` unless at least two distinct `p` contribute.
fn trend_slope(pts: &[(u64, f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let first = pts[0].0;
    if pts.iter().all(|&(p, _, _)| p == first) {
        return None;
    }
    let n = pts.len() as f64;
    let xbar = pts.iter().map(|&(_, x, _)| x).sum::<f64>() / n;
    let ybar = pts.iter().map(|&(_, _, y)| y).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|&(_, x, _)| (x - xbar) * (x - xbar)).sum();
    let sxy: f64 = pts
        .iter()
        .map(|&(_, x, y)| (x - xbar) * (y - ybar))
        .sum();
    if sxx > 0.0 {
        Some(sxy / sxx)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn extra_int(row: &SweepRow, idx: usize) -> u64 {
        match row.extra[idx] {
            Extra::Int(v) => v,
            Extra::Float(v) => panic!("expected integer extra, got {v}"),
        }
    }

    #[test]
    fn same_seed_gives_identical_reports() {
        let plan = SweepPlan::new(SweepTarget::Acz, &[(101, 11), (1009, 32)], 3, 7);
        let a = run_sweep(&plan).unwrap();
        let b = run_sweep(&plan).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let plan = SweepPlan::new(SweepTarget::Chang, &[(101, 40), (211, 60)], 4, 11);
        let wide = run_sweep(&plan).unwrap();
        let narrow = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| run_sweep(&plan))
            .unwrap();
        assert_eq!(wide, narrow);
    }

    #[test]
    fn acz_demo_grid_has_twenty_sorted_rows() {
        // h = ceil(sqrt(p)) at each grid prime.
        let plan = SweepPlan::new(SweepTarget::Acz, &[(1009, 32), (101, 11)], 10, 42);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.rows.len(), 20);
        assert_eq!(report.summary.rows, 20);
        assert_eq!(report.summary.flagged, 0);
        assert!(report.summary.max_ratio.is_some());
        assert!(report.summary.trend_slope.is_some());
        let keys: Vec<(u64, u32)> = report.rows.iter().map(|r| (r.p, r.h)).collect();
        let mut sorted = keys.clone();
        sorted.sort_unstable();
        assert_eq!(keys, sorted);
        for row in &report.rows {
            let count = extra_int(row, 0);
            assert_eq!(count as f64, row.exact);
            let h = u64::from(row.h);
            assert!(count >= 2 * h * h - h, "diagonal quadruples undercounted");
            assert!(row.ratio.is_finite());
        }
    }

    #[test]
    fn theorem_rows_below_hypothesis_are_flagged_not_asserted() {
        let mut plan = SweepPlan::new(SweepTarget::Theorem, &[(101, 4)], 4, 9);
        plan.n = 3;
        plan.k_range = (3, 3);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.rows.len(), 4);
        assert_eq!(report.summary.flagged, 4);
        assert_eq!(report.summary.max_ratio, None);
        assert_eq!(report.summary.trend_slope, None);
        for row in &report.rows {
            assert!(row.flagged);
            assert_eq!(row.n, 3);
            assert_eq!(row.s, 1);
            assert_eq!(row.extra.len(), 2);
            // The deviation never exceeds max(count, main).
            let count = extra_int(row, 0) as f64;
            assert!(row.exact <= count.max(1000.0));
        }
    }

    #[test]
    fn theorem_rows_in_regime_are_unflagged_and_bounded() {
        let mut plan = SweepPlan::new(SweepTarget::Theorem, &[(101, 35)], 3, 5);
        plan.n = 4;
        plan.k_range = (3, 5);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.summary.flagged, 0);
        for row in &report.rows {
            // With n = 4 the bound collapses to h^4/p + h^2, far above
            // any deviation a 4-variable box can produce here.
            assert!(row.ratio.is_finite());
            assert!(row.bound > 0.0);
        }
    }

    #[test]
    fn chang_rows_stay_under_the_trivial_bound() {
        let plan = SweepPlan::new(SweepTarget::Chang, &[(1009, 40)], 6, 3);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.summary.flagged, 0);
        for row in &report.rows {
            assert!(row.exact <= f64::from(row.h) + 1e-9);
            assert!(row.ratio.is_finite());
            let t = extra_int(row, 0);
            assert!(t >= 1 && t <= 1007);
        }
    }

    #[test]
    fn chang_short_intervals_flag_and_fall_back_to_trivial() {
        let plan = SweepPlan::new(SweepTarget::Chang, &[(1009, 8)], 3, 3);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.summary.flagged, 3);
        assert_eq!(report.summary.max_ratio, None);
        for row in &report.rows {
            assert!(row.flagged);
            assert_eq!(row.bound, 8.0);
        }
    }

    #[test]
    fn wooley_rows_record_both_bound_forms() {
        let plan = SweepPlan::new(SweepTarget::Wooley, &[(1009, 40)], 5, 17);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.summary.flagged, 0);
        for row in &report.rows {
            assert!(row.exact <= f64::from(row.h) + 1e-9);
            assert_eq!(extra_int(row, 0), 3);
            let short = match row.extra[1] {
                Extra::Float(v) => v,
                Extra::Int(v) => panic!("expected float extra, got {v}"),
            };
            assert!(short > 0.0 && short < row.bound);
        }
    }

    #[test]
    fn weil_rows_use_squarefree_quadratics() {
        let plan = SweepPlan::new(SweepTarget::Weil, &[(101, 100)], 6, 23);
        let report = run_sweep(&plan).unwrap();
        assert_eq!(report.summary.flagged, 0);
        for row in &report.rows {
            assert!(row.exact <= f64::from(row.h) + 1e-9);
            assert_eq!(extra_int(row, 1), 2);
            assert!(row.ratio.is_finite());
        }
        // Full-interval mixed sums against sqrt(p) ln p should come out
        // well below the trivial bound h.
        let max = report.summary.max_ratio.unwrap();
        assert!(max > 0.0);
    }

    #[test]
    fn empty_grid_is_rejected() {
        let plan = SweepPlan::new(SweepTarget::Acz, &[], 5, 1);
        assert!(matches!(run_sweep(&plan), Err(SweepError::EmptyGrid)));
    }

    #[test]
    fn zero_instances_are_rejected() {
        let plan = SweepPlan::new(SweepTarget::Acz, &[(101, 10)], 0, 1);
        assert!(matches!(run_sweep(&plan), Err(SweepError::ZeroInstances)));
    }

    #[test]
    fn oversized_h_is_rejected() {
        let plan = SweepPlan::new(SweepTarget::Acz, &[(101, 101)], 1, 1);
        assert!(matches!(
            run_sweep(&plan),
            Err(SweepError::BadGridPoint { p: 101, h: 101 })
        ));
        let plan = SweepPlan::new(SweepTarget::Acz, &[(101, 0)], 1, 1);
        assert!(matches!(
            run_sweep(&plan),
            Err(SweepError::BadGridPoint { p: 101, h: 0 })
        ));
    }

    #[test]
    fn narrow_exponent_range_is_rejected() {
        let mut plan = SweepPlan::new(SweepTarget::Theorem, &[(101, 20)], 1, 1);
        plan.s = 2;
        plan.k_range = (3, 3);
        assert!(matches!(
            run_sweep(&plan),
            Err(SweepError::BadExponentRange { lo: 3, hi: 3, s: 2 })
        ));
    }

    #[test]
    fn composite_grid_prime_is_rejected() {
        let plan = SweepPlan::new(SweepTarget::Acz, &[(100, 10)], 1, 1);
        assert!(matches!(run_sweep(&plan), Err(SweepError::Field(_))));
    }

    #[test]
    fn trend_slope_recovers_a_linear_law() {
        // y = 2x + 1 exactly, over three distinct p.
        let pts = [(2u64, 0.0, 1.0), (3, 1.0, 3.0), (5, 2.0, 5.0)];
        let slope = trend_slope(&pts).unwrap();
        assert!((slope - 2.0).abs() < 1e-12);
        assert_eq!(trend_slope(&pts[..1]), None);
        let same_p = [(7u64, 0.0, 1.0), (7, 0.0, 2.0)];
        assert_eq!(trend_slope(&same_p), None);
    }

    #[test]
    fn target_names_round_trip() {
        for t in SweepTarget::ALL {
            assert_eq!(SweepTarget::parse(t.name()), Some(t));
            assert_eq!(t.extra_columns().len(), 2);
        }
        assert_eq!(SweepTarget::parse("unknown"), None);
    }
}
