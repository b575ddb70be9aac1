//! The property suite behind `phasedef verify`: acceptance criteria plus documented
//! discrepancies, reported as PASS, FAIL, WARN or INFO.

use crate::cohomology::{
    cohomology_dim, deformation_cocycles, heisenberg_split, hochschild_serre_check, invariant_cocycles,
    same_span_modulo_coboundaries, CochainComplex,
};
use crate::deformation::{
    classify_real, effective_parameter_map, literal_map_direction, normal_form_map, scaling_map, Direction,
};
use crate::error::{Error, Result};
use crate::flow::{collinearity, simulate_free_motion, FlowSettings};
use crate::grassmann::{plucker, plucker_residuals, point_to_plane, same_oriented_plane, Normalization, OrientedPlane};
use crate::lie::{build_deformed, build_from_form, build_quotient_model, build_standard, AlgebraKind, BilinearForm};
use crate::orbit::{
    chart_poisson_from_brackets, chart_poisson_from_form, chart_to_point, compare_with_printed, orbit_casimir,
    poisson_rank, quadratic_casimirs, sample_chart_points, solve_i_branches, Branch, ChartPoint, DualPoint, Layout,
    PoissonStructure,
};
use crate::params::DeformationParams;
use crate::poly::Polynomial;
use crate::rational::{int, rat, random_rational, Rational};
use crate::tolerance::Tolerances;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Warn,
    Info,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Warn => "WARN",
            Status::Info => "INFO",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub title: String,
    pub status: Status,
    pub detail: String,
    /// Wall time; kept out of serialized reports so they stay reproducible.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckResult {
    fn new(id: &str, title: &str, ok: bool, detail: String) -> Self {
        CheckResult {
            id: id.into(),
            title: title.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
            elapsed: Duration::ZERO,
        }
    }

    fn with_status(mut self, s: Status) -> Self {
        self.status = s;
        self
    }

    fn from_result(id: &str, title: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((ok, d)) => Self::new(id, title, ok, d),
            Err(e) => Self::new(id, title, false, format!("error {}: {e}", e.code())),
        }
    }

    pub fn line(&self) -> String {
        format!("{:<4} {:<10} {}: {}", self.status, self.id, self.title, self.detail)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub tolerances: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20240611, tolerances: Tolerances::default() }
    }
}

impl VerifyConfig {
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(stream);
        r
    }
}

fn timed(f: impl FnOnce() -> CheckResult) -> CheckResult {
    let start = Instant::now();
    let mut r = f();
    r.elapsed = start.elapsed();
    r
}

fn random_triple(rng: &mut impl Rng, n: usize) -> DeformationParams {
    loop {
        let e: Vec<Rational> = (0..3).map(|_| random_rational(rng, 9, 7)).collect();
        if let Ok(p) = DeformationParams::new(n, e[0].clone(), e[1].clone(), e[2].clone()) {
            if !p.is_zero() {
                return p;
            }
        }
    }
}

/// Off the cone with `eps1 eps2 != 0`.
fn random_generic(rng: &mut impl Rng, n: usize) -> DeformationParams {
    loop {
        let p = random_triple(rng, n);
        if !p.e1().is_zero() && !p.e2().is_zero() && !p.on_cone() {
            return p;
        }
    }
}

/// H^2 dimensions of g_3, g_4 (expected 3) and e_3, e_4, e_5 (expected 1), exactly.
pub fn criterion_1(_cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        let mut details = Vec::new();
        let mut ok = true;
        let cases = [(AlgebraKind::GN, 3, 3), (AlgebraKind::GN, 4, 3), (AlgebraKind::Euclidean, 3, 1), (AlgebraKind::Euclidean, 4, 1), (AlgebraKind::Euclidean, 5, 1)];
        for (kind, n, expect) in cases {
            let start = Instant::now();
            let got = build_standard(kind, n).and_then(|g| cohomology_dim(&g, 2)).map(|r| r.dimension);
            let fast = start.elapsed() < Duration::from_secs(60);
            let name = if kind == AlgebraKind::GN { "g" } else { "e" };
            match got {
                Ok(d) => {
                    ok &= d == expect && fast;
                    details.push(format!("{name}_{n}={d}"));
                }
                Err(e) => {
                    ok = false;
                    details.push(format!("{name}_{n}: {e}"));
                }
            }
        }
        CheckResult::new("C1", "H^2 dimensions", ok, details.join(", "))
    })
}

/// Invariant classes of g_3 over the Heisenberg ideal agree with the three deformation cocycles.
pub fn criterion_2(_cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C2", "invariant cocycles span f1, f2, f3", (|| {
            let g = build_standard(AlgebraKind::GN, 3)?;
            let (h, k) = heisenberg_split(&g);
            let inv = invariant_cocycles(&g, &h, &k)?;
            let all: Vec<usize> = (0..g.dim()).collect();
            let cx = CochainComplex::new(&g, &h, &all)?;
            let fs = deformation_cocycles(&cx, 3, true)?;
            let same = same_span_modulo_coboundaries(&cx, &inv.representatives, &fs);
            Ok((same && inv.dimension == 3, format!("invariant classes {}, same span {same}", inv.dimension)))
        })())
    })
}

/// Exact Jacobi identity for 50 random triples at each n in 3..=5.
pub fn criterion_3(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        let mut rng = cfg.rng(3);
        let mut bad = 0;
        for n in 3..=5 {
            for _ in 0..50 {
                if !build_deformed(&random_triple(&mut rng, n)).jacobi_residual().is_zero() {
                    bad += 1;
                }
            }
        }
        CheckResult::new("C3", "Jacobi identity", bad == 0, format!("150 tables, {bad} nonzero residuals"))
    })
}

/// The bivector algebra of `B_eps` equals the deformed table for 50 triples at each n in 3..=6.
pub fn criterion_4(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        let mut rng = cfg.rng(4);
        let mut bad = 0;
        for n in 3..=6 {
            for _ in 0..50 {
                let p = random_triple(&mut rng, n);
                if build_from_form(&BilinearForm::deformation(&p)) != build_deformed(&p) {
                    bad += 1;
                }
            }
        }
        CheckResult::new("C4", "quadratic-form route", bad == 0, format!("200 triples, {bad} mismatches"))
    })
}

/// Exact zero residual for normal forms on all strata, including lambda = 10/9.
pub fn criterion_5(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C5", "normal-form isomorphisms", (|| {
            let mut rng = cfg.rng(5);
            let mut cases = Vec::new();
            for _ in 0..30 {
                cases.push(random_triple(&mut rng, 3));
            }
            for _ in 0..10 {
                let a = random_rational(&mut rng, 9, 5);
                let r = random_rational(&mut rng, 9, 5);
                if !a.is_zero() {
                    cases.push(DeformationParams::new(3, a.clone(), &a * &r * &r, &a * &r)?);
                }
                let b = random_rational(&mut rng, 9, 5);
                let c = random_rational(&mut rng, 9, 5);
                if !c.is_zero() {
                    cases.push(DeformationParams::new(3, int(0), b.clone(), c.clone())?);
                    cases.push(DeformationParams::new(3, b, int(0), c)?);
                }
            }
            let (mut checked, mut skipped, mut bad) = (0, 0, 0);
            for p in &cases {
                match normal_form_map(p) {
                    Ok(m) => {
                        checked += 1;
                        if !m.residual()?.is_zero() || !m.is_invertible() {
                            bad += 1;
                        }
                    }
                    Err(Error::NotRealRepresentable(_)) => skipped += 1,
                    Err(e) => return Err(e),
                }
            }
            let special = DeformationParams::new(3, int(1), int(1), rat(3, 5))?;
            let m = normal_form_map(&special)?;
            let lambda_ok = m.lambda.as_ref().is_some_and(|l| l.is_rational() && l.a == rat(10, 9));
            let res0 = m.residual()?.is_zero();
            let sc = scaling_map(&special, &int(2))?.residual()?.is_zero();
            let eff = effective_parameter_map(&special)?.residual()?.is_zero();
            let ok = bad == 0 && lambda_ok && res0 && sc && eff;
            Ok((ok, format!(
                "{checked} maps exact, {bad} nonzero, {skipped} not real-representable; lambda(1,1,3/5)=10/9 {lambda_ok}, residual 0 {res0}"
            )))
        })())
    })
}

/// Central quadratics: one-dimensional, exactly central, `I^2` at 0 and `tr L^2` at (1,1,0).
pub fn criterion_6(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        let mut rng = cfg.rng(6);
        let mut ok = true;
        let mut dims = Vec::new();
        for _ in 0..20 {
            let p = random_generic(&mut rng, 3);
            let ks = quadratic_casimirs(&p);
            let g = build_deformed(&p);
            ok &= ks.len() == 1 && ks.iter().all(|k| k.centrality_residual(&g).is_zero());
            dims.push(ks.len());
        }
        let zero = quadratic_casimirs(&DeformationParams::zero(3));
        let lay = Layout { n: 3 };
        let i = lay.i() as u16;
        let i2 = Polynomial::monomial(lay.dim(), vec![i, i], Rational::one());
        let has_i2 = zero.iter().any(|k| k.poly == i2);
        let unit = quadratic_casimirs(&DeformationParams::from_ints(3, [1, 1, 0]));
        let tr = unit.len() == 1 && unit[0].grouped().is_some_and(|q| q.coeffs == vec![int(1), int(1), int(1), int(0), int(1)]);
        ok &= has_i2 && tr;
        let all_one = dims.iter().all(|&d| d == 1);
        CheckResult::new(
            "C6",
            "quadratic Casimirs",
            ok,
            format!("20 generic triples one-dimensional {all_one}, contains I^2 at 0 {has_i2}, (1,1,0) gives I^2+x^2+p^2+l^2 {tr}"),
        )
    })
}

fn random_plane(rng: &mut impl Rng, m: usize) -> OrientedPlane {
    loop {
        let u: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if let Ok(p) = OrientedPlane::new(u, v) {
            if plucker(&p, Normalization::None).map(|b| b.i().abs() > 1e-3).unwrap_or(false) {
                return p;
            }
        }
    }
}

/// Orbit points for `(0,0,0)` at `I = 1`, `(1,1,0)` and `(0,1,0)`.
pub fn sample_orbit_points(p: &DeformationParams, count: usize, rng: &mut impl Rng) -> Result<Vec<DualPoint>> {
    if p.e1().is_zero() && p.e3().is_zero() {
        let eps2 = p.to_f64()[1];
        return sample_chart_points(eps2, p.n, count, rng)
            .iter()
            .map(|c| chart_to_point(p, c, Branch::Positive))
            .collect();
    }
    let k = orbit_casimir(p)?;
    let mut out = Vec::new();
    while out.len() < count {
        let pl = random_plane(rng, p.n + 2);
        if let Ok(b) = plucker(&pl, Normalization::Orbit { casimir: &k, level: 1.0 }) {
            out.push(DualPoint::new(p, b.coords)?);
        }
    }
    Ok(out)
}

/// Poisson rank `2n` at 20 orbit points for three parameter choices.
pub fn criterion_7(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C7", "orbit dimension 2n", (|| {
            let mut rng = cfg.rng(7);
            let mut parts = Vec::new();
            let mut ok = true;
            for e in [[0, 0, 0], [1, 1, 0], [0, 1, 0]] {
                let p = DeformationParams::from_ints(3, e);
                let ps = PoissonStructure::for_params(&p);
                let pts = sample_orbit_points(&p, 20, &mut rng)?;
                let good = pts.iter().filter(|pt| poisson_rank(&ps, &pt.coords, cfg.tolerances.rank_rel) == 6).count();
                ok &= good == 20;
                parts.push(format!("{e:?}: {good}/20 rank 6"));
            }
            Ok((ok, parts.join(", ")))
        })())
    })
}

fn chart_params(eps2: &Rational) -> Result<DeformationParams> {
    DeformationParams::new(3, int(0), eps2.clone(), int(0))
}

/// `-Ω^{-1}` of the chart form matches the Lie–Poisson brackets of `(q, p)` on 100 points per `eps2`.
pub fn criterion_8(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C8", "chart form vs brackets", (|| {
            let mut rng = cfg.rng(8);
            let mut worst = 0.0f64;
            for eps2 in [rat(-1, 2), rat(1, 2), int(-1), int(1), int(2)] {
                let p = chart_params(&eps2)?;
                let e = p.to_f64()[1];
                let ps = PoissonStructure::for_params(&p);
                for c in sample_chart_points(e, 3, 100, &mut rng) {
                    let a = chart_poisson_from_form(e, &c)?;
                    let b = chart_poisson_from_brackets(&ps, &chart_to_point(&p, &c, Branch::Positive)?)?;
                    worst = worst.max((a - b).amax());
                }
            }
            Ok((worst <= cfg.tolerances.residual, format!("max entry difference {worst:.3e} over 500 points")))
        })())
    })
}

/// Initial states for the conservation runs.
pub fn conservation_start(eps2_sign: i32) -> ChartPoint {
    if eps2_sign >= 0 {
        ChartPoint { q: vec![0.0; 3], p: vec![1.0, 0.0, 0.0] }
    } else {
        ChartPoint { q: vec![0.1, -0.2, 0.05], p: vec![0.4, 0.3, -0.2] }
    }
}

/// Conservation of `H0`, the Casimir and `μ0`, orbit residual growth and gnomonic collinearity.
pub fn criterion_9(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C9", "conservation along free motion", (|| {
            let tol = cfg.tolerances;
            let settings = FlowSettings { t_end: 10.0, dt: 1e-3, stride: 10 };
            let mut ok = true;
            let mut parts = Vec::new();
            for s in [1, -1] {
                let p = DeformationParams::from_ints(3, [0, s as i64, 0]);
                let start = Instant::now();
                let (tr, man) = simulate_free_motion(&p, &conservation_start(s), Branch::Positive, settings, tol, None)?;
                let fast = start.elapsed() < Duration::from_secs(10);
                let d = &tr.drift;
                let mu = d.max_mu0().unwrap_or(f64::INFINITY);
                let col = man.collinearity.unwrap_or(f64::INFINITY);
                let good = d.hamiltonian <= tol.drift
                    && d.max_casimir() <= tol.drift
                    && mu <= tol.drift
                    && d.angular_growth <= tol.growth
                    && d.plucker_growth <= tol.growth
                    && col <= tol.growth
                    && fast;
                ok &= good;
                parts.push(format!(
                    "eps2={s}: H0 {:.1e}, K {:.1e}, mu0 {:.1e}, angular {:.1e}, plucker {:.1e}, line {:.1e}",
                    d.hamiltonian,
                    d.max_casimir(),
                    mu,
                    d.angular_growth.max(0.0),
                    d.plucker_growth.max(0.0),
                    col
                ));
            }
            Ok((ok, parts.join("; ")))
        })())
    })
}

/// First-order convergence of chart brackets as `eps2 -> 0`, and the two sheets `I = ±1` at 0.
pub fn criterion_10(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C10", "degeneration to flat phase space", (|| {
            let mut rng = cfg.rng(10);
            let charts = sample_chart_points(0.0, 3, 20, &mut rng);
            let mut errs = Vec::new();
            for eps2 in [rat(1, 100), rat(1, 10000)] {
                let p = chart_params(&eps2)?;
                let ps = PoissonStructure::for_params(&p);
                let mut worst = 0.0f64;
                for c in &charts {
                    let m = chart_poisson_from_brackets(&ps, &chart_to_point(&p, c, Branch::Positive)?)?;
                    for i in 0..3 {
                        for j in 0..3 {
                            let target = if i == j { 1.0 } else { 0.0 };
                            worst = worst.max((m[(i, 3 + j)] - target).abs());
                        }
                    }
                }
                errs.push(worst / p.to_f64()[1]);
            }
            // error / eps2 stays at the same constant: first order
            let ratio = errs[0] / errs[1];
            let first_order = (0.5..2.0).contains(&ratio) && errs[1] > 0.0;
            let zero = DeformationParams::zero(3);
            let mut two = true;
            for c in &charts {
                let roots = solve_i_branches(&zero, &c.q, &c.p, 1.0);
                two &= roots.len() == 2 && (roots[0] + 1.0).abs() < 1e-15 && (roots[1] - 1.0).abs() < 1e-15;
            }
            Ok((
                first_order && two,
                format!("error/eps2 = {:.4} and {:.4}, sheets I = -1, +1 found {two}", errs[0], errs[1]),
            ))
        })())
    })
}

/// Plane -> Plücker -> plane on 100 random planes, and exact negation under orientation flip.
pub fn criterion_11(cfg: &VerifyConfig) -> CheckResult {
    timed(|| {
        CheckResult::from_result("C11", "Grassmannian roundtrip", (|| {
            let mut rng = cfg.rng(11);
            let mut worst = 0.0f64;
            let mut same = true;
            let mut flip = true;
            for _ in 0..100 {
                let pl = random_plane(&mut rng, 5);
                let b = plucker(&pl, Normalization::ChartU)?;
                let back = point_to_plane(&b, cfg.tolerances.residual)?;
                same &= same_oriented_plane(&pl, &back, cfg.tolerances.residual);
                let b2 = plucker(&back, Normalization::ChartU)?;
                worst = b.coords.iter().zip(&b2.coords).fold(worst, |m, (x, y)| m.max((x - y).abs()));
                flip &= plucker(&pl.flipped(), Normalization::ChartU)? == b.negated();
                worst = worst.max(plucker_residuals(&b));
            }
            Ok((worst <= cfg.tolerances.residual && same && flip, format!("max error {worst:.1e}, oriented planes recovered {same}, flip negates exactly {flip}")))
        })())
    })
}

pub fn acceptance(cfg: &VerifyConfig) -> Vec<CheckResult> {
    vec![
        criterion_1(cfg),
        criterion_2(cfg),
        criterion_3(cfg),
        criterion_4(cfg),
        criterion_5(cfg),
        criterion_6(cfg),
        criterion_7(cfg),
        criterion_8(cfg),
        criterion_9(cfg),
        criterion_10(cfg),
        criterion_11(cfg),
    ]
}

/// Known disagreements with the printed formulas, reported without failing the suite.
pub fn discrepancies(_cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();

    out.push(CheckResult::from_result("D1", "printed Casimir convention", (|| {
        let c = compare_with_printed(&DeformationParams::from_ints(3, [2, 3, 0]))?;
        Ok((c.matches_printed, format!("derived {}, printed {} (centrality residual {})", c.derived.unwrap_or_default(), c.printed, c.printed_centrality_residual)))
    })()).pipe_warn());

    out.push(CheckResult::from_result("D2", "printed cocycles without centre components", (|| {
        let g = build_standard(AlgebraKind::GN, 3)?;
        let (h, _) = heisenberg_split(&g);
        let all: Vec<usize> = (0..g.dim()).collect();
        let cx = CochainComplex::new(&g, &h, &all)?;
        let d2 = cx.differential(2);
        let closed = deformation_cocycles(&cx, 3, false)?.iter().filter(|f| d2.apply(&f.coeffs).is_zero()).count();
        Ok((closed == 3, format!("{closed}/3 closed; the versions with centre components are cocycles")))
    })()).pipe_warn());

    out.push(CheckResult::from_result("D3", "quotient model invariant H^2", (|| {
        let mut parts = Vec::new();
        let mut ok = true;
        for n in [3, 4] {
            let q = build_quotient_model(n)?;
            let (h, k) = heisenberg_split(&q);
            let d = invariant_cocycles(&q, &h, &k)?.dimension;
            ok &= d == 3;
            parts.push(format!("n={n}: {d}"));
        }
        Ok((ok, format!("{} (claimed 3)", parts.join(", "))))
    })()).pipe_warn());

    for (id, e) in [("D4", [0, 1, 5]), ("D5", [0, 0, 1]), ("D6", [1, 1, 2])] {
        out.push(CheckResult::from_result(id, "stratum label vs form signature", (|| {
            let r = classify_real(&DeformationParams::from_ints(3, e))?;
            Ok((!r.conflict, format!("{e:?} {} {}: {}", r.real_stratum, r.paper_label, r.conflict_reasons.join("; "))))
        })()).pipe_warn());
    }

    for (id, e) in [("D7", [rat(1, 1), int(1), rat(3, 5)]), ("D8", [int(1), int(4), int(-2)]), ("D9", [int(0), int(4), int(1)])] {
        out.push(CheckResult::from_result(id, "printed normal-form map direction", (|| {
            let p = DeformationParams::new(3, e[0].clone(), e[1].clone(), e[2].clone())?;
            let d = literal_map_direction(&p)?;
            Ok((d.validated == Direction::Forward, format!("{p}: holds {:?} (forward residual {}, inverse residual {})", d.validated, d.forward_residual, d.inverse_residual)))
        })()).pipe_warn());
    }

    out
}

/// Extra properties beyond the acceptance list.
pub fn properties(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(CheckResult::from_result("P1", "Hochschild-Serre reduction", (|| {
        let mut ok = true;
        let mut parts = Vec::new();
        for n in [3, 4] {
            let g = build_standard(AlgebraKind::GN, n)?;
            let (h, k) = heisenberg_split(&g);
            let r = hochschild_serre_check(&g, &h, &k)?;
            ok &= r.equal;
            parts.push(format!("n={n}: full {} invariant {}", r.h2_full, r.h2_invariant));
        }
        Ok((ok, parts.join(", ")))
    })()));

    out.push(CheckResult::from_result("P2", "Killing signatures", (|| {
        let a = build_deformed(&DeformationParams::from_ints(3, [1, 1, 0])).killing_signature();
        let b = build_deformed(&DeformationParams::from_ints(3, [1, -1, 0])).killing_signature();
        let z = build_deformed(&DeformationParams::zero(3)).killing_radical_dim();
        Ok((a == (0, 10, 0) && b == (4, 6, 0) && z == 7, format!("(1,1,0) {a:?}, (1,-1,0) {b:?}, radical at 0 {z}")))
    })()));

    out.push(CheckResult::from_result("P3", "normal form then rescale", (|| {
        let p = DeformationParams::new(3, int(1), int(1), rat(3, 5))?;
        let m = normal_form_map(&p)?;
        let mf = m.map_scalars(|x| crate::scalar::Scalar::approx_f64(x));
        let t = [mf.target[0], mf.target[1], mf.target[2]];
        let c = t[0] / p.to_f64()[0];
        let s = crate::deformation::float_rescale(&t, 3, c, &p);
        let composed = mf.then(&s);
        let res = composed.residual()?;
        Ok((res <= cfg.tolerances.float_map, format!("g(1,1,3/5) -> g(1,1,0) residual {res:.1e}")))
    })()));

    out.push(CheckResult::from_result("I1", "unit-speed hyperbolic drift", (|| {
        let p = DeformationParams::from_ints(3, [0, -1, 0]);
        let c = ChartPoint { q: vec![0.0; 3], p: vec![1.0, 0.0, 0.0] };
        let s = FlowSettings { t_end: 10.0, dt: 1e-3, stride: 100 };
        let (tr, _) = simulate_free_motion(&p, &c, Branch::Positive, s, cfg.tolerances, None)?;
        let q = tr.gnomonic()?;
        Ok((true, format!("H0 drift {:.1e}, Casimir drift {:.1e}, line {:.1e}; I grows to {:.3e}", tr.drift.hamiltonian, tr.drift.max_casimir(), collinearity(&q), tr.states.last().map_or(0.0, |s| s[Layout { n: 3 }.i()]))))
    })()).with_status(Status::Info));
    out
}

trait PipeWarn {
    fn pipe_warn(self) -> Self;
}

impl PipeWarn for CheckResult {
    /// Failing discrepancy checks become warnings; errors stay failures.
    fn pipe_warn(mut self) -> Self {
        if self.status == Status::Fail && !self.detail.starts_with("error ") {
            self.status = Status::Warn;
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    All,
    Acceptance,
    Discrepancies,
    Properties,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "acceptance" => Ok(Suite::Acceptance),
            "discrepancies" => Ok(Suite::Discrepancies),
            "properties" => Ok(Suite::Properties),
            _ => Err(Error::Parse(format!("unknown suite {s}"))),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Vec<CheckResult> {
    match suite {
        Suite::Acceptance => acceptance(cfg),
        Suite::Discrepancies => discrepancies(cfg),
        Suite::Properties => properties(cfg),
        Suite::All => {
            let mut v = acceptance(cfg);
            v.extend(properties(cfg));
            v.extend(discrepancies(cfg));
            v
        }
    }
}

/// True when nothing failed; warnings and notes do not count.
pub fn suite_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}
