//! Dispatch from configuration to the verification library, turning every
//! outcome into report records.

use anyhow::{anyhow, Result};
use curvlab_core::ambient::{WarpedSpace, CONDITION_TOL};
use curvlab_core::radial::{Monotonicity, Weight, WeightFamily};
use curvlab_core::rigidity::{
    radial_condition_residual, ratio_condition_residual, soliton_proof_chain, SolitonSpec,
};
use curvlab_core::surfaces::{
    elliptic_point_check, torus3_h1_of_r, torus_profiles, RadialProfile, SurfaceCloud, SurfaceSpec,
};
use curvlab_core::symfun::normalized_hs;
use curvlab_core::verify::{
    brendle_gap, classical_hm_residual, divergence_theorem_check, weighted_hm_residual, xi_ric_sign_check,
    CheckVerdict, IdentityResidual, CLOSED_FORM_TOL, ENGINE_TOL,
};
use curvlab_core::Error as CoreError;

use crate::config::{
    BrendleExpect, ConditionExpect, Experiment, ExperimentConfig, Operation, Pair, Resolution, SolitonExpect,
    SpaceConfig, WeightMap, weight_orders,
};
use crate::expr::ExprRadial;
use crate::geometry::{build_cloud, build_space, build_spec};
use crate::props::{lemma_sweep, oracle_sweep};
use crate::report::{CheckRecord, ProfileRow, ProfileTable, Report, Verdict};

/// Runs every experiment of a config into one report (without timestamp).
///
/// Configuration problems (unknown spaces, incompatible surfaces, bad
/// expressions) are errors; hypothesis violations become `violated`
/// records.
pub fn run_config(cfg: &ExperimentConfig) -> Result<Report> {
    let mut report = Report::new(&cfg.id, cfg.seed, serde_json::to_value(cfg)?);
    for (idx, exp) in cfg.experiments.iter().enumerate() {
        let label = exp.name.clone().unwrap_or_else(|| format!("{idx:02}-{}", exp.operation.name()));
        let space_cfg = exp.space.as_ref().or(cfg.space.as_ref());
        let mut ctx = Ctx { label: &label, exp, seed: cfg.seed, checks: Vec::new(), profiles: Vec::new() };
        match ctx.run(space_cfg) {
            Ok(()) => {}
            Err(e) => match e.downcast_ref::<CoreError>() {
                Some(ce @ (CoreError::HypothesisViolation { .. } | CoreError::Precondition(_))) => {
                    ctx.checks.push(
                        CheckRecord::new(&label, exp.operation.name(), Verdict::Violated).detail(ce.to_string()),
                    );
                }
                _ => return Err(e.context(format!("experiment {label}"))),
            },
        }
        report.checks.append(&mut ctx.checks);
        report.profiles.append(&mut ctx.profiles);
    }
    report.finalize();
    Ok(report)
}

struct Ctx<'a> {
    label: &'a str,
    exp: &'a Experiment,
    seed: u64,
    checks: Vec<CheckRecord>,
    profiles: Vec<ProfileTable>,
}

struct Clouds {
    spec: SurfaceSpec,
    fine: SurfaceCloud,
    coarse: Option<SurfaceCloud>,
}

impl Clouds {
    fn closed_form(&self) -> bool {
        !self.fine.engine
    }
}

impl<'a> Ctx<'a> {
    fn record(&self, name: impl Into<String>, verdict: Verdict) -> CheckRecord {
        CheckRecord::new(self.label, name, verdict)
    }

    fn tol_or(&self, default: f64) -> f64 {
        self.exp.tol.unwrap_or(default)
    }

    fn clouds(&self, space: &WarpedSpace, resolution: Resolution) -> Result<Clouds> {
        let surface = self.exp.operation.surface().ok_or_else(|| anyhow!("operation has no surface"))?;
        let spec = build_spec(surface, space.n())?;
        let fine = build_cloud(&spec, space, resolution.fine(), self.exp.engine)?;
        let coarse = match resolution.coarse() {
            Some(c) => Some(build_cloud(&spec, space, c, self.exp.engine)?),
            None => None,
        };
        Ok(Clouds { spec, fine, coarse })
    }

    fn default_tol(clouds: &Clouds) -> f64 {
        if clouds.closed_form() {
            CLOSED_FORM_TOL
        } else {
            ENGINE_TOL
        }
    }

    fn run(&mut self, space_cfg: Option<&SpaceConfig>) -> Result<()> {
        let op = &self.exp.operation;
        if let Operation::NewtonProps { oracle_vectors, garding_samples, max_m } = op {
            return self.newton_props(*oracle_vectors, *garding_samples, *max_m);
        }
        let space_cfg = space_cfg.ok_or_else(|| anyhow!("no space configured"))?;
        let space = build_space(space_cfg)?;
        match op {
            Operation::CheckConditions { grid_points, grid_max, expect, ricci } => {
                self.check_conditions(&space, *grid_points, *grid_max, expect, ricci.as_ref())
            }
            Operation::VerifyHm { resolution, orders, .. } => self.verify_hm(&space, *resolution, orders),
            Operation::VerifyWeightedHm { resolution, orders, phi, .. } => {
                self.verify_weighted(&space, *resolution, orders, phi)
            }
            Operation::XiRicSign { resolution, .. } => self.xi_ric(&space, *resolution),
            Operation::Brendle { resolution, expect, .. } => self.brendle(&space, *resolution, *expect),
            Operation::EllipticPoint { resolution, .. } => self.elliptic(&space, *resolution),
            Operation::TorusCounterexample { resolution, spread_tol, .. } => {
                self.torus(&space, *resolution, *spread_tol)
            }
            Operation::SolitonCheck { resolution, pairs, mu, expect, min_residual, .. } => {
                self.soliton(&space, *resolution, pairs, *mu, *expect, *min_residual)
            }
            Operation::RadialCondition { resolution, k, b, c, eta, .. } => {
                self.radial_condition(&space, *resolution, *k, b, c, eta)
            }
            Operation::RatioCondition { resolution, a, b, .. } => self.ratio_condition(&space, *resolution, a, b),
            Operation::NewtonProps { .. } => unreachable!(),
        }
    }

    fn check_conditions(
        &mut self,
        space: &WarpedSpace,
        points: usize,
        grid_max: Option<f64>,
        expect: &ConditionExpect,
        ricci: Option<&crate::config::RicciExpect>,
    ) -> Result<()> {
        let tol = self.tol_or(CONDITION_TOL);
        let grid = space.default_grid(points, grid_max.unwrap_or(f64::INFINITY));
        let rep = space.check_conditions(&grid, tol)?;
        let wanted = [expect.h1, expect.h2, expect.h3, expect.h4];
        for (i, (name, v)) in [("H1", rep.h1), ("H2", rep.h2), ("H3", rep.h3), ("H4", rep.h4)].into_iter().enumerate()
        {
            let want = wanted[i].unwrap_or(true);
            let rec = self
                .record(name, Verdict::from_bool(v.pass == want))
                .value("margin", v.margin)
                .value("detail", v.detail)
                .value("holds", if v.pass { 1.0 } else { 0.0 })
                .tolerance(tol)
                .detail(format!("condition {}; expected to {}", if v.pass { "holds" } else { "fails" }, if want { "hold" } else { "fail" }));
            self.checks.push(rec);
        }
        let mut drift = 0.0f64;
        let mut is_ode = false;
        for &r in &grid {
            if let Some(d) = space.first_integral_residual(r)? {
                is_ode = true;
                drift = drift.max(d.abs());
            }
        }
        if is_ode {
            self.checks.push(
                self.record("first integral", Verdict::from_bool(drift <= 1e-10))
                    .value("max_drift", drift)
                    .tolerance(1e-10),
            );
        }
        if let Some(want) = ricci {
            let (mut da, mut db) = (0.0f64, 0.0f64);
            for &r in &grid {
                let c = space.ricci_coeffs(r)?;
                da = da.max((c.alpha - want.alpha).abs());
                db = db.max((c.beta - want.beta).abs());
            }
            self.checks.push(
                self.record("ricci coefficients", Verdict::from_bool(da <= tol && db <= tol))
                    .value("alpha_dev", da)
                    .value("beta_dev", db)
                    .value("grid_points", grid.len() as f64)
                    .tolerance(tol),
            );
        }
        let table = |q: &str, vals: &[f64]| ProfileTable {
            experiment: self.label.to_string(),
            quantity: q.to_string(),
            abscissa: "r".into(),
            rows: grid.iter().zip(vals).map(|(&r, &v)| ProfileRow { r, value: v, weight: None }).collect(),
            verdict: Verdict::Info,
        };
        let h4 = table("h4", &rep.h4_values);
        let q = table("h3_q", &rep.q_values);
        self.profiles.push(h4);
        self.profiles.push(q);
        Ok(())
    }

    fn verify_hm(&mut self, space: &WarpedSpace, res: Resolution, orders: &[usize]) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(Self::default_tol(&clouds));
        for &j in orders {
            let fine = classical_hm_residual(&clouds.fine, space, j)?;
            let coarse = match &clouds.coarse {
                Some(c) => Some(classical_hm_residual(c, space, j)?),
                None => None,
            };
            self.push_identity(format!("classical HM j={j}"), fine, coarse, tol);
        }
        Ok(())
    }

    fn push_identity(&mut self, name: String, fine: IdentityResidual, coarse: Option<IdentityResidual>, tol: f64) {
        let fine = match &coarse {
            Some(c) => fine.with_coarse(c),
            None => fine,
        };
        let order_ok = fine.order.is_none_or(|o| o.at_least(2.0));
        let mut rec = self
            .record(name, Verdict::from_bool(fine.relative.abs() <= tol && order_ok))
            .value("lhs", fine.lhs)
            .value("rhs", fine.rhs)
            .value("residual", fine.residual)
            .value("relative", fine.relative)
            .value("area", fine.area)
            .resolution(fine.resolution)
            .order(fine.order)
            .tolerance(tol);
        if let Some(c) = coarse {
            rec = rec.value("coarse_relative", c.relative).value("coarse_resolution", c.resolution as f64);
        }
        self.checks.push(rec);
    }

    fn verify_weighted(&mut self, space: &WarpedSpace, res: Resolution, orders: &[usize], phi: &str) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(Self::default_tol(&clouds));
        let phi = ExprRadial::parse(phi)?;
        let (lo, hi) = clouds.fine.r_range();
        phi.check_finite(&[lo, 0.5 * (lo + hi), hi])?;
        for &k in orders {
            let fine = weighted_hm_residual(&clouds.fine, space, k, &phi)?;
            let coarse = match &clouds.coarse {
                Some(c) => Some(weighted_hm_residual(c, space, k, &phi)?),
                None => None,
            };
            self.push_identity(format!("weighted HM k={k} phi={}", phi.source), fine, coarse, tol);
            let d = divergence_theorem_check(&clouds.fine, space, k, &phi)?;
            self.checks.push(
                self.record(
                    format!("divergence form k={k}"),
                    Verdict::from_bool(d.agreement <= 1e-12 && d.relative.abs() <= tol),
                )
                .value("value", d.value)
                .value("relative", d.relative)
                .value("agreement", d.agreement)
                .resolution(clouds.fine.resolution)
                .tolerance(tol),
            );
        }
        Ok(())
    }

    fn xi_ric(&mut self, space: &WarpedSpace, res: Resolution) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(CONDITION_TOL);
        let c = xi_ric_sign_check(&clouds.fine, space, tol)?;
        let (verdict, detail) = match c.verdict {
            CheckVerdict::Pass => (Verdict::Pass, None),
            CheckVerdict::Fail => (Verdict::Fail, None),
            CheckVerdict::Skipped(why) => (Verdict::Skipped, Some(why)),
        };
        let mut rec = self
            .record("-xi Ric(e, nu) >= 0", verdict)
            .value("min", c.min)
            .value("min_dr_nu", clouds.fine.min_dr_nu())
            .resolution(clouds.fine.resolution)
            .tolerance(tol);
        if let Some(d) = detail {
            rec = rec.detail(d);
        }
        self.checks.push(rec);
        Ok(())
    }

    fn brendle(&mut self, space: &WarpedSpace, res: Resolution, expect: Option<BrendleExpect>) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(Self::default_tol(&clouds));
        let mut rows = Vec::new();
        if let Some(c) = &clouds.coarse {
            let g = brendle_gap(c, space, tol)?;
            rows.push(ProfileRow { r: c.resolution as f64, value: g.gap, weight: None });
        }
        let g = brendle_gap(&clouds.fine, space, tol)?;
        rows.push(ProfileRow { r: clouds.fine.resolution as f64, value: g.gap, weight: None });
        let direction = g.gap >= -tol * g.area;
        let ok = direction
            && match expect {
                Some(BrendleExpect::Equality) => g.near_equality,
                Some(BrendleExpect::Strict) => g.gap > 10.0 * tol * g.area,
                None => true,
            };
        self.checks.push(
            self.record("brendle gap", Verdict::from_bool(ok))
                .value("lhs", g.lhs)
                .value("rhs", g.rhs)
                .value("gap", g.gap)
                .value("area", g.area)
                .value("near_equality", if g.near_equality { 1.0 } else { 0.0 })
                .resolution(clouds.fine.resolution)
                .tolerance(tol),
        );
        self.profiles.push(ProfileTable {
            experiment: self.label.to_string(),
            quantity: "brendle_gap".into(),
            abscissa: "resolution".into(),
            rows,
            verdict: Verdict::from_bool(ok),
        });
        Ok(())
    }

    fn elliptic(&mut self, space: &WarpedSpace, res: Resolution) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let w = elliptic_point_check(&clouds.fine).ok_or_else(|| anyhow!("empty cloud"))?;
        let min = w.sample.lambdas.values().iter().cloned().fold(f64::INFINITY, f64::min);
        self.checks.push(
            self.record("elliptic point", Verdict::from_bool(w.found))
                .value("r", w.sample.r)
                .value("min_lambda", min)
                .value("index", w.index as f64)
                .resolution(clouds.fine.resolution),
        );
        Ok(())
    }

    fn profile_table(&self, quantity: &str, p: &RadialProfile, verdict: Verdict) -> ProfileTable {
        ProfileTable {
            experiment: self.label.to_string(),
            quantity: quantity.to_string(),
            abscissa: "r".into(),
            rows: p
                .points
                .iter()
                .zip(&p.weights)
                .map(|(&(r, v), &w)| ProfileRow { r, value: v, weight: Some(w) })
                .collect(),
            verdict,
        }
    }

    fn torus(&mut self, space: &WarpedSpace, res: Resolution, spread_tol: Option<f64>) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let spread_tol = spread_tol.unwrap_or(if clouds.closed_form() { 1e-8 } else { 1e-6 });
        let prof = torus_profiles(&clouds.spec, &clouds.fine)?;
        let resolution = clouds.fine.resolution;
        let mut claims = true;
        for (q, p) in [("H1", &prof.h1), ("H2/H1", &prof.ratio)] {
            let radial = p.is_radial(spread_tol);
            let inc = p.strictly_increasing();
            claims &= radial && inc;
            self.checks.push(
                self.record(format!("{q} radial"), Verdict::from_bool(radial))
                    .value("relative_spread", p.relative_spread)
                    .value("orbits", p.points.len() as f64)
                    .resolution(resolution)
                    .tolerance(spread_tol),
            );
            self.checks.push(
                self.record(format!("{q} increasing"), Verdict::from_bool(inc))
                    .value("min_increment", p.min_increment)
                    .resolution(resolution),
            );
            let table = self.profile_table(q, p, Verdict::from_bool(radial && inc));
            self.profiles.push(table);
        }
        let non_umbilic = prof.non_umbilic(1e-7);
        self.checks.push(
            self.record("non-umbilic", Verdict::from_bool(non_umbilic))
                .value("max_spread", prof.max_spread)
                .tolerance(1e-7),
        );
        // the monotonicity claim is made for thin tori only
        self.checks.push(
            self.record("thin", Verdict::Info)
                .value("thin", if prof.thin { 1.0 } else { 0.0 })
                .detail("R2 < R1/2 in R^3, R2 < R1/3 in R^4; reported, not enforced"),
        );
        self.checks.push(
            self.record("counterexample", Verdict::from_bool(claims && non_umbilic))
                .detail("closed, non-umbilic, H1 and H2/H1 radial and increasing"),
        );
        match clouds.spec {
            SurfaceSpec::Torus3 { r1, r2 } => {
                let tol = self.tol_or(CLOSED_FORM_TOL);
                for (label, point) in [("inner", prof.h1.value_at_min_r()), ("outer", prof.h1.value_at_max_r())] {
                    let (r, v) = point.expect("nonempty profile");
                    let want = torus3_h1_of_r(r1, r2, r);
                    self.checks.push(
                        self.record(format!("H1 at {label} equator"), Verdict::from_bool((v - want).abs() <= tol))
                            .value("r", r)
                            .value("value", v)
                            .value("expected", want)
                            .tolerance(tol),
                    );
                }
                let max_dev = prof.printed_comparison.iter().map(|t| (t.1 - t.2).abs()).fold(0.0, f64::max);
                self.checks.push(
                    self.record("printed H1 formula", Verdict::Info)
                        .value("max_abs_difference", max_dev)
                        .detail("comparison only; see the H1_printed table"),
                );
                self.profiles.push(ProfileTable {
                    experiment: self.label.to_string(),
                    quantity: "H1_printed".into(),
                    abscissa: "r".into(),
                    rows: prof
                        .printed_comparison
                        .iter()
                        .map(|&(r, _, p)| ProfileRow { r, value: p, weight: None })
                        .collect(),
                    verdict: Verdict::Info,
                });
            }
            SurfaceSpec::Torus4 { r1, r2 } => {
                // cross-check against (1/R2, 1/R2, cos θ/(R1 + R2 cos θ)), not assumed
                let mut dev = 0.0f64;
                for s in &clouds.fine.samples {
                    let c = (s.r * s.r - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
                    let mut want = [1.0 / r2, 1.0 / r2, c / (r1 + r2 * c)];
                    want.sort_by(f64::total_cmp);
                    let mut got = s.lambdas.values().to_vec();
                    got.sort_by(f64::total_cmp);
                    for (a, b) in got.iter().zip(want) {
                        dev = dev.max((a - b).abs());
                    }
                }
                self.checks.push(
                    self.record("expected curvature structure", Verdict::Info)
                        .value("max_abs_deviation", dev)
                        .resolution(resolution),
                );
            }
            _ => {}
        }
        Ok(())
    }

    fn soliton(
        &mut self,
        space: &WarpedSpace,
        res: Resolution,
        pairs: &[Pair],
        mu: Option<f64>,
        expect: Option<SolitonExpect>,
        min_residual: Option<f64>,
    ) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(Self::default_tol(&clouds));
        let spec = SolitonSpec::new(pairs.iter().map(|p| (p.0, p.1, p.2)).collect(), mu)?;
        let chain = soliton_proof_chain(&clouds.fine, &spec, tol)?;
        let r = chain.residual;
        let min_residual = min_residual.unwrap_or(10.0 * tol);
        let verdict = match expect {
            Some(SolitonExpect::Soliton) => Verdict::from_bool(r.sup <= tol && (r.mu - 1.0).abs() <= tol),
            Some(SolitonExpect::NotSoliton) => Verdict::from_bool(r.sup >= min_residual),
            None => Verdict::Info,
        };
        self.checks.push(
            self.record("soliton residual", verdict)
                .value("mu", r.mu)
                .value("fitted", if r.fitted { 1.0 } else { 0.0 })
                .value("sup", r.sup)
                .value("integral", r.integral)
                .value("k", spec.k() as f64)
                .resolution(clouds.fine.resolution)
                .tolerance(tol),
        );
        for e in &chain.entries {
            let verdict = if e.applicable { Verdict::from_bool(e.holds) } else { Verdict::Info };
            let mut rec = self.record(format!("chain: {}", e.name), verdict).value("min_slack", e.min_slack);
            if !e.applicable {
                rec = rec.detail("integrated comparison applies to exact solitons only");
            }
            self.checks.push(rec);
        }
        Ok(())
    }

    fn weights(map: &WeightMap) -> Result<Vec<(usize, Weight)>> {
        weight_orders(map)?
            .into_iter()
            .map(|(j, src)| Ok((j, Weight::new(ExprRadial::parse(src)?, Monotonicity::Unspecified))))
            .collect()
    }

    fn radial_condition(
        &mut self,
        space: &WarpedSpace,
        res: Resolution,
        k: usize,
        b: &WeightMap,
        c: &WeightMap,
        eta: &str,
    ) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(Self::default_tol(&clouds));
        let eta_fn = ExprRadial::parse(eta)?;
        let (lo, hi) = clouds.fine.r_range();
        let grid = curvlab_core::radial::open_grid(lo, hi, 64);
        let mut family = WeightFamily { b: Self::weights(b)?, c: Self::weights(c)?, ..Default::default() };
        family.eta = Some(Weight::new(eta_fn, Monotonicity::Unspecified));
        let r = radial_condition_residual(&clouds.fine, &family, k)?;
        let eta_w = family.eta.as_ref().expect("set above");
        let inc = Weight { func: eta_w.func.clone(), declared: Monotonicity::Increasing }.check_monotonicity(&grid);
        let dec = Weight { func: eta_w.func.clone(), declared: Monotonicity::Decreasing }.check_monotonicity(&grid);
        self.checks.push(
            self.record("radial condition", Verdict::from_bool(r.raw.sup <= tol))
                .value("sup", r.raw.sup)
                .value("sup_normalized", r.normalized.sup)
                .value("witness", r.raw.witness as f64)
                .resolution(clouds.fine.resolution)
                .tolerance(tol),
        );
        self.checks.push(
            self.record("eta monotonicity", Verdict::Info)
                .value("increasing_margin", inc.margin)
                .value("decreasing_margin", dec.margin),
        );
        Ok(())
    }

    fn ratio_condition(
        &mut self,
        space: &WarpedSpace,
        res: Resolution,
        a: &WeightMap,
        b: &WeightMap,
    ) -> Result<()> {
        let clouds = self.clouds(space, res)?;
        let tol = self.tol_or(Self::default_tol(&clouds));
        let family = WeightFamily { a: Self::weights(a)?, b: Self::weights(b)?, ..Default::default() };
        let r = ratio_condition_residual(&clouds.fine, &family)?;
        self.checks.push(
            self.record("ratio condition", Verdict::from_bool(r.sup <= tol))
                .value("sup", r.sup)
                .value("witness", r.witness as f64)
                .resolution(clouds.fine.resolution)
                .tolerance(tol),
        );
        Ok(())
    }

    fn newton_props(&mut self, vectors: usize, samples: usize, max_m: usize) -> Result<()> {
        let o = oracle_sweep(vectors, max_m.min(6), 5, self.seed);
        self.checks.push(
            self.record("sigma recurrence vs subset oracle", Verdict::from_bool(o.sigma_rel <= 1e-12))
                .value("max_relative", o.sigma_rel)
                .value("vectors", o.vectors as f64)
                .tolerance(1e-12),
        );
        self.checks.push(
            self.record("newton spectrum vs delta oracle", Verdict::from_bool(o.newton_rel <= 1e-10))
                .value("max_relative", o.newton_rel)
                .value("vectors", o.newton_vectors as f64)
                .value("normalization_factor", 1.0)
                .tolerance(1e-10),
        );
        let l = lemma_sweep(samples, max_m, self.seed)?;
        let n = l.samples as f64;
        self.checks.push(
            self.record("maclaurin ratio gap", Verdict::from_bool(l.ratio_gap_rel >= -1e-12))
                .value("min_relative", l.ratio_gap_rel)
                .value("samples", n)
                .tolerance(1e-12),
        );
        self.checks.push(
            self.record("lemma c gap", Verdict::from_bool(l.lemma_c_min > 0.0))
                .value("min", l.lemma_c_min)
                .value("min_relative", l.lemma_c_rel)
                .value("samples", n),
        );
        self.checks.push(
            self.record("splitting identity", Verdict::from_bool(l.split_rel <= 1e-12))
                .value("max_relative", l.split_rel)
                .value("samples", n)
                .tolerance(1e-12),
        );
        self.checks.push(
            self.record("positivity cascade", Verdict::from_bool(l.cascade_min > 0.0))
                .value("min", l.cascade_min)
                .value("samples", n),
        );
        let mut agree = true;
        for nn in 3..=16u64 {
            for k in 2..nn {
                agree &= curvlab_core::symfun::div_coefficient_forms_agree(nn, k);
            }
        }
        self.checks.push(self.record("div-T coefficient forms agree", Verdict::from_bool(agree)).value("max_n", 16.0));
        Ok(())
    }
}

/// `H_1`..`H_m` at a sample, for callers that build their own tables.
pub fn sample_hs(cloud: &SurfaceCloud, i: usize) -> Vec<f64> {
    normalized_hs(&cloud.samples[i].lambdas)
}
