//! The invariant suite behind `cmd_check`: every quantitative property the
//! measures and gauges promise, evaluated on seeded random states so a run
//! is reproducible byte for byte.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gauges;
use crate::linalg::{
    self, C64, ComplexMatrix, DensityMatrix, StateVector, hermitian_eig, sample_mixed,
    sample_pure,
};
use crate::measures::{
    self, MeasureOptions, State, WitnessKind, polar_gauge_psd, witness_validate,
};
use crate::theories::{Theory, TheoryDescriptor, free_membership};

#[allow(unused_imports)]
use num_traits::Float;

/// Outcome of one property over all tested instances.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: &'static str,
    pub passed: bool,
    /// Worst signed residual observed (positive = violation size).
    pub worst_residual: f64,
    pub instances: usize,
    /// Instance description of the worst violation, when one exists.
    pub detail: Option<String>,
}

impl PropertyReport {
    fn new(name: &'static str) -> Self {
        Self { name, passed: true, worst_residual: f64::NEG_INFINITY, instances: 0, detail: None }
    }

    fn record(&mut self, residual: f64, tol: f64, detail: impl Fn() -> String) {
        self.instances += 1;
        if residual > self.worst_residual {
            self.worst_residual = residual;
            if residual > tol {
                self.detail = Some(detail());
            }
        }
        if residual > tol {
            self.passed = false;
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Number of random instances per property family.
    pub count: usize,
    pub seed: u64,
    /// Multiplies every pass tolerance; shrinking it below one is a
    /// harness self-test that must produce failures.
    pub tol_factor: f64,
    pub measure: MeasureOptions,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { count: 50, seed: 0, tol_factor: 1.0, measure: MeasureOptions::default() }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<C64> {
    (0..d)
        .map(|_| C64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0))
        .collect()
}

fn l1(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).sum()
}

fn l2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn linf(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Gauge-level properties on random coefficient vectors (any theory).
fn gauge_properties(opts: &CheckOptions, reports: &mut Vec<PropertyReport>) {
    let tol = 1e-10 * opts.tol_factor;
    let mut chain = PropertyReport::new("ksupport interpolation chain");
    let mut cauchy = PropertyReport::new("generalized Cauchy-Schwarz duality");
    let mut mono = PropertyReport::new("ksupport monotonicity in k");
    let mut unit = PropertyReport::new("unit gauge on k-sparse unit vectors");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(0xA11CE));
    for i in 0..opts.count.max(1) {
        let d = 2 + (i % 6);
        let x = random_vector(&mut rng, d);
        let y = random_vector(&mut rng, d);
        for k in 1..=d {
            let g = gauges::ksupport_norm(&x, k).expect("valid k");
            let gd = gauges::ksupport_dual(&x, k).expect("valid k");
            let worst = (g - l1(&x)).max(l2(&x) - g).max(gd - l2(&x)).max(linf(&x) - gd);
            chain.record(worst, tol, || format!("d={d} k={k}"));
            let ip = linalg::inner(&x, &y).norm();
            let bound = g * gauges::ksupport_dual(&y, k).expect("valid k");
            cauchy.record(ip - bound, 1e-9 * opts.tol_factor, || format!("d={d} k={k}"));
            if k < d {
                let g_next = gauges::ksupport_norm(&x, k + 1).expect("valid k");
                let gd_next = gauges::ksupport_dual(&x, k + 1).expect("valid k");
                mono.record(
                    (g_next - g).max(gd - gd_next),
                    tol,
                    || format!("d={d} k={k}"),
                );
            }
        }
        // k-sparse unit vector has unit gauge.
        let k = 1 + (i % d);
        let mut sparse = vec![C64::new(0.0, 0.0); d];
        for slot in 0..k {
            sparse[slot] = C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
        }
        let n = l2(&sparse);
        if n > 1e-3 {
            for s in &mut sparse {
                *s /= n;
            }
            let g = gauges::ksupport_norm(&sparse, k).expect("valid k");
            unit.record((g - 1.0).abs(), tol, || format!("d={d} k={k}"));
        }
    }
    reports.extend([chain, cauchy, mono, unit]);
}

/// Random mixed state for the theory, alternating ranks.
fn random_state(theory: &Theory, idx: usize, seed: u64) -> DensityMatrix {
    let dims = theory.descriptor().factor_dims();
    let d: usize = dims.iter().product();
    let rank = 1 + (idx % d);
    sample_mixed(&dims, rank, seed.wrapping_add(idx as u64)).expect("valid rank")
}

/// Random convex mixture of free vertices.
fn random_free_state(theory: &Theory, idx: usize, seed: u64) -> Option<DensityMatrix> {
    let polytope = theory.polytope()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0xF7EE).wrapping_add(idx as u64));
    let k = polytope.len();
    let mut w: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let total: f64 = w.iter().sum();
    for wi in &mut w {
        *wi /= total;
    }
    let d = polytope.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (i, wi) in w.iter().enumerate() {
        acc = acc.add(&polytope.vertex_projector(i).matrix().scale(C64::new(*wi, 0.0)));
    }
    DensityMatrix::new(acc, theory.descriptor().factor_dims()).ok()
}

/// Pure-state properties valid for every theory (closed-form paths only).
fn pure_properties(theory: &Theory, opts: &CheckOptions, reports: &mut Vec<PropertyReport>) {
    let dims = theory.descriptor().factor_dims();
    let mut geom = PropertyReport::new("R_g >= G/(1-G) on pure states");
    let mut collapse = PropertyReport::new("roof equals squared gauge on pure states");
    for i in 0..opts.count.max(1) {
        let psi = sample_pure(&dims, opts.seed.wrapping_add(0x9E0).wrapping_add(i as u64));
        let state = State::Pure(psi.clone());
        let (Ok(rg), Ok(g)) = (
            measures::generalized_robustness(&state, theory, &opts.measure),
            measures::geometric_measure(&state, theory, &opts.measure),
        ) else {
            continue;
        };
        let ratio = if g.value < 1.0 { g.value / (1.0 - g.value) } else { f64::INFINITY };
        geom.record(ratio - rg.value, 1e-6 * opts.tol_factor, || format!("instance {i}"));
        let (Ok(roof), Ok(gauge)) = (
            measures::convex_roof_upper(&state, theory, &opts.measure),
            measures::pure_gauge(&psi, theory, &opts.measure),
        ) else {
            continue;
        };
        collapse.record(
            (roof.value - gauge * gauge).abs(),
            1e-6 * opts.tol_factor,
            || format!("instance {i}"),
        );
    }
    reports.extend([geom, collapse]);
}

/// Bipartite-specific property: pure-state negativity agrees between the
/// Schmidt-gauge and partial-transpose paths.
fn negativity_property(theory: &Theory, opts: &CheckOptions, reports: &mut Vec<PropertyReport>) {
    let TheoryDescriptor::SchmidtK { da, db, .. } = theory.descriptor() else {
        return;
    };
    let (da, db) = (*da, *db);
    let mut prop = PropertyReport::new("negativity two-path agreement");
    for i in 0..opts.count.max(1) {
        let psi = sample_pure(&[da, db], opts.seed.wrapping_add(0x7EA).wrapping_add(i as u64));
        let via_schmidt = gauges::pure_negativity(&psi, da, db).expect("bipartite");
        let via_pt = measures::negativity(&DensityMatrix::from_pure(&psi), da, db)
            .expect("bipartite");
        prop.record(
            (via_schmidt - via_pt).abs(),
            1e-8 * opts.tol_factor,
            || format!("instance {i}"),
        );
    }
    reports.push(prop);
}

/// Genuine-multipartite identity: squared gauge minus one is twice the
/// minimum bipartite negativity.
fn genuine_property(theory: &Theory, opts: &CheckOptions, reports: &mut Vec<PropertyReport>) {
    let TheoryDescriptor::GenuineMultipartite { dims } = theory.descriptor() else {
        return;
    };
    let mut prop = PropertyReport::new("genuine gauge matches min bipartition negativity");
    for i in 0..opts.count.max(1) {
        let psi = sample_pure(dims, opts.seed.wrapping_add(0x6E0).wrapping_add(i as u64));
        let g = gauges::genuine_gauge(&psi).expect("party count");
        let mut min_neg = f64::INFINITY;
        for side in gauges::bipartitions(dims.len()) {
            let grouped = gauges::regroup_bipartition(&psi, &side).expect("split");
            let neg = gauges::pure_negativity(&grouped, grouped.dims()[0], grouped.dims()[1])
                .expect("bipartite");
            min_neg = min_neg.min(neg);
        }
        prop.record(
            (g * g - 1.0 - 2.0 * min_neg).abs(),
            1e-9 * opts.tol_factor,
            || format!("instance {i}"),
        );
    }
    reports.push(prop);
}

/// The full measure-level battery on polytope theories.
fn polytope_properties(theory: &Theory, opts: &CheckOptions, reports: &mut Vec<PropertyReport>) {
    if theory.polytope().is_none() {
        return;
    }
    let m = &opts.measure;
    let mut faithful = PropertyReport::new("faithfulness equivalence");
    let mut ordering = PropertyReport::new("base >= nuclear >= R_g + 1, roof >= nuclear");
    let mut purity_bound = PropertyReport::new("R_g >= Tr(rho^2)/polar - 1");
    let mut tprime = PropertyReport::new("modified trace distance <= R_g");
    let mut random_vs_std = PropertyReport::new("random robustness >= standard robustness");
    let mut polar_eq = PropertyReport::new("polar equality on PSD (diagonal vs cross)");
    let mut witness_ok = PropertyReport::new("witness feasibility residuals");
    let mut threshold = PropertyReport::new("polar witness threshold tightness");
    let mut geometric_polar = PropertyReport::new("geometric <= 1 - polar + 2 gap");

    let polytope = theory.polytope().expect("checked").clone();
    for i in 0..opts.count.max(1) {
        // Alternate generic random states with random free mixtures so both
        // directions of the faithfulness equivalence get exercised.
        let rho = if i % 2 == 0 {
            random_state(theory, i, opts.seed)
        } else {
            match random_free_state(theory, i, opts.seed) {
                Some(r) => r,
                None => random_state(theory, i, opts.seed),
            }
        };
        let state = State::Mixed(rho.clone());
        let inside = match free_membership(&rho, theory) {
            Ok(c) => c.inside,
            Err(_) => continue,
        };

        let rs = measures::standard_robustness(&state, theory, m);
        let rg = measures::generalized_robustness(&state, theory, m);
        let nuc = measures::nuclear_gauge(&state, theory, m);
        let roof = measures::convex_roof_upper(&state, theory, m);
        let bfa = measures::best_free_approximation(&state, theory, m);
        let mtd = measures::modified_trace_distance(&state, theory, m);
        let (Ok(rs), Ok(rg), Ok(nuc), Ok(roof), Ok(bfa), Ok(mtd)) =
            (rs, rg, nuc, roof, bfa, mtd)
        else {
            continue;
        };

        // Faithfulness: inside <=> every finite measure is ~zero.
        let mut small = true;
        let mut largest = 0.0f64;
        if rs.is_finite() {
            largest = largest.max(rs.value);
        }
        largest = largest
            .max(rg.value)
            .max(nuc.value - 1.0)
            .max(roof.value - 1.0)
            .max(bfa.value)
            .max(mtd.value);
        small &= largest <= 1e-6 * opts.tol_factor;
        let agreement_residual = if inside == small {
            if inside { largest } else { 0.0 }
        } else {
            // Disagreement: report the margin by which it failed.
            if inside { largest } else { 1e-6 + largest.max(1e-6) }
        };
        faithful.record(agreement_residual, 1e-6 * opts.tol_factor, || {
            format!("instance {i}: inside={inside} largest={largest:.3e}")
        });

        // Ordering chain (slack 1e-5 for the iterative paths).
        let base = match measures::base_gauge(&state, theory, m) {
            Ok(b) => b,
            Err(_) => continue,
        };
        let mut chain_resid = f64::NEG_INFINITY;
        if base.is_finite() && nuc.is_finite() {
            chain_resid = chain_resid.max(nuc.value - base.value);
        }
        chain_resid = chain_resid.max(rg.value + 1.0 - nuc.value);
        chain_resid = chain_resid.max(nuc.value - roof.value);
        ordering.record(chain_resid, 1e-5 * opts.tol_factor, || format!("instance {i}"));

        // Purity/polar dual bound.
        let polar = polar_gauge_psd(rho.op(), theory, m).expect("polytope polar");
        purity_bound.record(
            rho.purity() / polar.value - 1.0 - rg.value,
            1e-6 * opts.tol_factor,
            || format!("instance {i}"),
        );

        tprime.record(mtd.value - rg.value, 1e-6 * opts.tol_factor, || format!("instance {i}"));

        if let (Ok(rr), true) = (measures::random_robustness(&state, theory, m), rs.is_finite()) {
            if rr.is_finite() {
                random_vs_std.record(
                    rs.value - rr.value,
                    1e-8 * opts.tol_factor,
                    || format!("instance {i}"),
                );
            }
        }

        // Polar equality: vertex diagonal max vs full cross max (PSD input).
        let mut cross = 0.0f64;
        for a in polytope.vertices() {
            let pa = rho.matrix().mul_vec(a.amplitudes());
            for b in polytope.vertices() {
                cross = cross.max(linalg::inner(b.amplitudes(), &pa).norm());
            }
        }
        polar_eq.record(
            (polar.value - cross).abs(),
            1e-10 * opts.tol_factor,
            || format!("instance {i}"),
        );

        // Witness feasibility for both robustness kinds.
        if let Some(w) = &rg.witness {
            if let Ok(check) = witness_validate(w, &state, theory, WitnessKind::Generalized) {
                let resid = (-check.min_vertex_inner).max(-check.identity_defect).max(0.0);
                witness_ok.record(resid, 1e-7 * opts.tol_factor, || {
                    format!("instance {i} (generalized)")
                });
            }
        }
        if rs.is_finite() {
            if let Some(w) = &rs.witness {
                if let Ok(check) = witness_validate(w, &state, theory, WitnessKind::Standard) {
                    let resid =
                        (-check.min_vertex_inner).max(check.max_vertex_inner - 1.0).max(0.0);
                    witness_ok.record(resid, 1e-7 * opts.tol_factor, || {
                        format!("instance {i} (standard)")
                    });
                }
            }
        }

        // Witness threshold from the polar gauge.
        let mut min_slack = f64::INFINITY;
        for idx in 0..polytope.len() {
            let slack = polar.lambda_star - rho.op().inner(&polytope.vertex_projector(idx));
            min_slack = min_slack.min(slack);
        }
        threshold.record(
            (-min_slack).max(min_slack.abs() - 1e-9),
            1e-9 * opts.tol_factor,
            || format!("instance {i}"),
        );

        // Geometric measure against the polar bound.
        if let Ok(geo) = measures::geometric_measure(&state, theory, m) {
            let gap = geo.gap.unwrap_or(0.0);
            geometric_polar.record(
                geo.value - (1.0 - polar.value) - 2.0 * gap,
                1e-6 * opts.tol_factor,
                || format!("instance {i}"),
            );
        }
    }
    reports.extend([
        faithful,
        ordering,
        purity_bound,
        tprime,
        random_vs_std,
        polar_eq,
        witness_ok,
        threshold,
        geometric_polar,
    ]);
}

/// Runs the invariant suite for one theory.
pub fn run_checks(theory: &Theory, opts: &CheckOptions) -> Result<Vec<PropertyReport>> {
    let mut reports = Vec::new();
    gauge_properties(opts, &mut reports);
    pure_properties(theory, opts, &mut reports);
    negativity_property(theory, opts, &mut reports);
    genuine_property(theory, opts, &mut reports);
    polytope_properties(theory, opts, &mut reports);
    Ok(reports)
}

/// True when every property passed.
pub fn all_passed(reports: &[PropertyReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
