//! Command implementations: each renders a deterministic report string.

use ccilab_core::dynamics::evolve;
use ccilab_core::fiber::{
    band_structure, fiber_kernel, gauge_normalize, mqw_matrix, mqw_strip_range,
    verify_reconstruction, winding_exact, winding_phase,
};
use ccilab_core::flux::{
    flux_blocks, flux_dense_matrix_free, flux_spectrum, kitaev_trace, shift_witness,
};
use ccilab_core::lattice::{LatticeSite, SField};
use ccilab_core::linalg::{hermitian_eigen, max_abs, spectral_distance, unitary_eigen};
use ccilab_core::operator::{
    apply_u, apply_u_adjoint, boundary_phase_check, parity_apply, plaquette_block, Chirality,
    Closure, StateVector, Window,
};
use ccilab_core::C64;
use serde::Serialize;
use serde_json::json;

use crate::config::{EvolveParams, ExperimentConfig, WINDOW_SITE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub struct CmdError {
    pub kind: &'static str,
    pub message: String,
}

impl CmdError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            kind: "config",
            message: message.into(),
        }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        Self {
            kind: "runtime",
            message: message.into(),
        }
    }
}

impl From<ccilab_core::Error> for CmdError {
    fn from(e: ccilab_core::Error) -> Self {
        CmdError::runtime(e.to_string())
    }
}

pub type CmdResult = Result<String, CmdError>;

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("report serialization cannot fail");
    text.push('\n');
    text
}

fn field_of(cfg: &ExperimentConfig) -> Result<SField, CmdError> {
    SField::from_config(&cfg.model).map_err(|e| CmdError::config(e.to_string()))
}

// ---------------------------------------------------------------- flux ----

pub fn run_flux(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let field = field_of(cfg)?;
    let strip = field.strip();
    let mut reports = Vec::new();
    let mut csv = String::from("cut,j_block,eigenvalue\n");
    for &cut in &cfg.flux.cuts {
        let flux = flux_blocks(&field, &strip, cut)?;
        for block in &flux.blocks {
            for lambda in block.eigenvalues() {
                csv.push_str(&format!("{},{},{}\n", cut, block.column(), lambda));
            }
        }
        reports.push(flux_spectrum(&flux));
    }
    match format {
        Format::Json => Ok(to_json_line(&json!({ "cuts": reports }))),
        Format::Csv => Ok(csv),
    }
}

// --------------------------------------------------------------- index ----

pub fn run_index(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let field = field_of(cfg)?;
    let strip = field.strip();
    let cut = cfg.index.cut;
    let report = flux_spectrum(&flux_blocks(&field, &strip, cut)?);

    let (kitaev, kitaev_rounded, wind) = if field.is_translation_invariant() {
        let kernel = fiber_kernel(&field, &strip)?.kernel;
        let sum = kitaev_trace(&kernel, 1);
        (
            Some(sum),
            Some(sum.round() as i64),
            Some(winding_exact(&kernel)?),
        )
    } else {
        (None, None, None)
    };
    let agree = match (kitaev_rounded, wind) {
        (Some(k), Some(w)) => report.index == k && k == w,
        _ => true,
    };
    match format {
        Format::Json => Ok(to_json_line(&json!({
            "cut": cut,
            "flux_trace": report.trace,
            "flux_index": report.index,
            "kitaev_trace": kitaev,
            "kitaev_rounded": kitaev_rounded,
            "winding_exact": wind,
            "agree": agree,
        }))),
        Format::Csv => {
            let mut csv = String::from(
                "cut,flux_trace,flux_index,kitaev_trace,kitaev_rounded,winding_exact,agree\n",
            );
            let opt_f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let opt_i = |v: Option<i64>| v.map(|x| x.to_string()).unwrap_or_default();
            csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                cut,
                report.trace,
                report.index,
                opt_f(kitaev),
                opt_i(kitaev_rounded),
                opt_i(wind),
                agree
            ));
            Ok(csv)
        }
    }
}

// ------------------------------------------------------------- winding ----

pub fn run_winding(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let field = field_of(cfg)?;
    let strip = field.strip();
    let kernel = fiber_kernel(&field, &strip)?.kernel;
    let exact = winding_exact(&kernel)?;
    let phase = winding_phase(&kernel, cfg.winding.grid)?;
    match format {
        Format::Json => Ok(to_json_line(&json!({
            "exact": exact,
            "phase": phase,
            "agree": exact == phase,
        }))),
        Format::Csv => Ok(format!(
            "exact,phase,agree\n{},{},{}\n",
            exact,
            phase,
            exact == phase
        )),
    }
}

// --------------------------------------------------------------- bands ----

pub fn run_bands(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let field = field_of(cfg)?;
    let strip = field.strip();
    let kernel = fiber_kernel(&field, &strip)?.kernel;
    let bands = band_structure(&kernel, cfg.bands.grid)?;
    match format {
        Format::Json => Ok(to_json_line(&json!({
            "grid": bands.grid,
            "branches": bands.branches,
            "coverage": {
                "covered": bands.coverage.covered,
                "largest_gap": bands.coverage.largest_gap,
                "gap_location": bands.coverage.gap_location,
                "max_step": bands.coverage.max_step,
                "step_bound": bands.coverage.step_bound,
                "certificate": "swept-arc union over the sampled grid",
            },
            "degeneracies": bands.degeneracies,
        }))),
        Format::Csv => {
            let mut csv = String::from("y,branch_id,eigenphase\n");
            for (i, y) in bands.grid.iter().enumerate() {
                for (b, branch) in bands.branches.iter().enumerate() {
                    csv.push_str(&format!("{},{},{}\n", y, b, branch[i]));
                }
            }
            Ok(csv)
        }
    }
}

// ------------------------------------------------------- shift witness ----

pub fn run_shift_witness(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let field = field_of(cfg)?;
    let strip = field.strip();
    let witness = shift_witness(&field, &strip, cfg.shift_witness.depth)?;
    match format {
        Format::Json => Ok(to_json_line(&json!({
            "depth": witness.depth,
            "seed_site": [witness.seed_site.j, witness.seed_site.k],
            "gram_residual": witness.gram_residual,
            "modified_count": witness.modified_sites.len(),
            "rank_bound": witness.rank_bound,
        }))),
        Format::Csv => Ok(format!(
            "depth,seed_j,seed_k,gram_residual,modified_count,rank_bound\n{},{},{},{},{},{}\n",
            witness.depth,
            witness.seed_site.j,
            witness.seed_site.k,
            witness.gram_residual,
            witness.modified_sites.len(),
            witness.rank_bound
        )),
    }
}

// -------------------------------------------------------------- evolve ----

fn evolve_window(field: &SField, params: &EvolveParams) -> Result<Window, CmdError> {
    if let Some([j0, j1, k0, k1]) = params.window {
        return Window::new(j0, j1, k0, k1).map_err(|e| CmdError::config(e.to_string()));
    }
    let strip = field.strip();
    let [sj, sk] = params.start;
    let t = params.steps as i64;
    let j0 = strip.lo().min(sj) - 2;
    let j1 = strip.hi().max(sj) + 2;
    let k0 = sk - t - 2;
    let k1 = sk + t + 2;
    let sites = (j1 - j0 + 1) as i128 * (k1 - k0 + 1) as i128;
    if sites > WINDOW_SITE_CAP as i128 {
        return Err(CmdError::config(format!(
            "auto-sized window would hold {sites} sites (cap {WINDOW_SITE_CAP}); supply evolve.window"
        )));
    }
    Window::new(j0, j1, k0, k1).map_err(|e| CmdError::config(e.to_string()))
}

pub fn run_evolve(cfg: &ExperimentConfig, format: Format) -> CmdResult {
    let params = cfg
        .evolve
        .as_ref()
        .ok_or_else(|| CmdError::config("evolve command needs an \"evolve\" config section"))?;
    let field = field_of(cfg)?;
    let window = evolve_window(&field, params)?;
    let start = LatticeSite::new(params.start[0], params.start[1]);
    let psi0 = StateVector::basis_state(window, Closure::Open, start)
        .map_err(|e| CmdError::config(e.to_string()))?;
    let (trace, _) = evolve(&field, &psi0, params.steps)?;
    match format {
        Format::Json => Ok(to_json_line(&json!({ "records": trace.records }))),
        Format::Csv => {
            let mut csv = String::from("t,mean_k,var_k,upper_weight,jmin,jmax,kmin,kmax\n");
            for r in &trace.records {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.t, r.mean_k, r.var_k, r.upper_weight, r.jmin, r.jmax, r.kmin, r.kmax
                ));
            }
            Ok(csv)
        }
    }
}

// --------------------------------------------------------------- check ----

#[derive(Serialize)]
struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn check(name: &'static str, result: Result<String, String>) -> Check {
    match result {
        Ok(detail) => Check {
            name,
            passed: true,
            detail,
        },
        Err(detail) => Check {
            name,
            passed: false,
            detail,
        },
    }
}

fn chirality_check(field: &SField) -> Result<String, String> {
    let mut sampled = 0;
    for dj in 1..=20i64 {
        for kc in -5..5i64 {
            let j = field.n_left() - dj;
            let s = field.scatter_at(j, kc);
            if s.r().norm() > 1e-12 {
                return Err(format!("left phase broken at (j = {j}, row = {})", 2 * kc));
            }
            let j = field.n_right() + dj - 1;
            let s = field.scatter_at(j, kc);
            if s.t().norm() > 1e-12 {
                return Err(format!("right phase broken at (j = {j}, row = {})", 2 * kc));
            }
            sampled += 2;
        }
    }
    Ok(format!("{sampled} boundary sites sampled"))
}

fn normalization_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let mut worst: f64 = 0.0;
    for j in strip.lo() - 3..=strip.hi() + 3 {
        for kc in -4..4 {
            worst = worst.max(field.scatter_at(j, kc).unitarity_defect());
        }
    }
    if worst <= 1e-12 {
        Ok(format!("max unitarity defect {worst:.2e}"))
    } else {
        Err(format!("unitarity defect {worst:.2e} above 1e-12"))
    }
}

fn operator_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let window = Window::new(strip.lo(), strip.hi(), -6, 5).unwrap();
    for seed in 0..20u64 {
        // interior support keeps one open step leak-free even without a period
        let mut psi = StateVector::seeded_random(window, Closure::Open, 4000 + seed)
            .map_err(|e| e.to_string())?;
        for j in strip.columns() {
            for k in [-6, -5, 4, 5] {
                psi.set(j, k, C64::new(0.0, 0.0))
                    .map_err(|e| e.to_string())?;
            }
        }
        psi.normalize_packet().map_err(|e| e.to_string())?;
        let upsi = apply_u(field, &psi).map_err(|e| e.to_string())?;
        if (upsi.norm() - 1.0).abs() > 1e-12 {
            return Err(format!("norm drift {:.2e}", (upsi.norm() - 1.0).abs()));
        }
        let mut round = apply_u_adjoint(field, &upsi).map_err(|e| e.to_string())?;
        round
            .add_scaled(&psi, C64::new(-1.0, 0.0))
            .map_err(|e| e.to_string())?;
        if round.norm() > 1e-12 {
            return Err(format!("adjoint round trip off by {:.2e}", round.norm()));
        }
        let mut anti =
            parity_apply(&apply_u(field, &parity_apply(&psi)).map_err(|e| e.to_string())?);
        anti.add_scaled(&upsi, C64::new(1.0, 0.0))
            .map_err(|e| e.to_string())?;
        if anti.norm() > 1e-12 {
            return Err(format!("parity identity off by {:.2e}", anti.norm()));
        }
    }
    Ok("20 random states at 1e-12".into())
}

fn boundary_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    match boundary_phase_check(field, &strip, -2..=2) {
        Ok(phases) => Ok(format!("{} relations verified", phases.len())),
        Err(e) => Err(e.to_string()),
    }
}

fn flux_check(field: &SField, cuts: &[i64]) -> Result<String, String> {
    let strip = field.strip();
    for &cut in cuts {
        let flux = flux_blocks(field, &strip, cut).map_err(|e| e.to_string())?;
        if (flux.trace() + 1.0).abs() > 1e-10 {
            return Err(format!("trace {} at cut {cut}", flux.trace()));
        }
        let basis = flux.support_sites();
        let dense = flux.to_dense(&basis);
        let mut dense_eigen = hermitian_eigen(&dense).values;
        dense_eigen.sort_by(f64::total_cmp);
        for (a, b) in dense_eigen.iter().zip(flux.eigenvalues().iter()) {
            if (a - b).abs() > 1e-12 {
                return Err(format!("spectrum mismatch {a} vs {b} at cut {cut}"));
            }
        }
    }
    if let Some(&cut) = cuts.first() {
        let flux = flux_blocks(field, &strip, cut).map_err(|e| e.to_string())?;
        let basis = flux.support_sites();
        let oracle =
            flux_dense_matrix_free(field, &strip, cut, &basis).map_err(|e| e.to_string())?;
        let diff = max_abs(&(flux.to_dense(&basis) - oracle));
        if diff > 1e-12 {
            return Err(format!("matrix-free disagreement {diff:.2e} at cut {cut}"));
        }
    }
    Ok(format!("{} cuts, trace -1, spectra certified", cuts.len()))
}

fn fiber_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let fk = fiber_kernel(field, &strip).map_err(|e| e.to_string())?;
    verify_reconstruction(field, &strip, &fk, 20, 1e-12).map_err(|e| e.to_string())?;
    let defect = fk.kernel.symbol_unitarity_defect(32);
    if defect > 1e-10 {
        return Err(format!("symbol unitarity defect {defect:.2e}"));
    }
    Ok(format!(
        "reconstruction on 20 states, symbol defect {defect:.2e}"
    ))
}

fn winding_check(field: &SField, grid: usize) -> Result<String, String> {
    let strip = field.strip();
    let kernel = fiber_kernel(field, &strip)
        .map_err(|e| e.to_string())?
        .kernel;
    let exact = winding_exact(&kernel).map_err(|e| e.to_string())?;
    let phase = winding_phase(&kernel, grid).map_err(|e| e.to_string())?;
    let cut_sum = kitaev_trace(&kernel, 1);
    if exact != -1 || phase != -1 || (cut_sum + 1.0).abs() > 1e-9 {
        return Err(format!(
            "routes disagree: exact {exact}, phase {phase}, cut sum {cut_sum}"
        ));
    }
    Ok("exact = phase = cut sum = -1".into())
}

fn fiber_pictures_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let kernel = fiber_kernel(field, &strip)
        .map_err(|e| e.to_string())?
        .kernel;
    for i in 0..8 {
        let y = std::f64::consts::TAU * (i as f64 + 0.37) / 8.0;
        let m = mqw_matrix(field, y, mqw_strip_range(&strip)).map_err(|e| e.to_string())?;
        let em = unitary_eigen(&m.matrix, 1e-9).map_err(|e| e.to_string())?;
        let es = unitary_eigen(&kernel.symbol(y), 1e-9).map_err(|e| e.to_string())?;
        let dist = spectral_distance(&em.values, &es.values);
        if dist > 1e-9 {
            return Err(format!("fiber spectra differ by {dist:.2e} at y = {y:.3}"));
        }
    }
    Ok("five-diagonal and symbol spectra agree at 8 quasimomenta".into())
}

fn gauge_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let (gauged, _) = gauge_normalize(field).map_err(|e| e.to_string())?;
    let reference = mqw_matrix(&gauged, 0.0, mqw_strip_range(&strip))
        .map_err(|e| e.to_string())?
        .determinant();
    for i in 0..64 {
        let y = std::f64::consts::TAU * i as f64 / 64.0;
        let det = mqw_matrix(&gauged, y, mqw_strip_range(&strip))
            .map_err(|e| e.to_string())?
            .determinant();
        if (det * C64::from_polar(1.0, y) - reference).norm() > 1e-10 {
            return Err(format!("det·e^(iy) drifts at y = {y:.3}"));
        }
    }
    Ok("det · e^(iy) constant over 64 points".into())
}

fn plaquette_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let p = strip.p_right() + 2;
    let block = plaquette_block(field, p, 0, Chirality::Right).map_err(|e| e.to_string())?;
    let dense = nalgebra::DMatrix::from_fn(4, 4, |r, c| block.matrix[(r, c)]);
    let eig = unitary_eigen(&dense, 1e-10).map_err(|e| e.to_string())?;
    for lambda in &eig.values {
        let nearest = block
            .eigenvalues
            .iter()
            .map(|mu| (mu - lambda).norm())
            .fold(f64::INFINITY, f64::min);
        if nearest > 1e-12 {
            return Err(format!("plaquette eigenvalue off by {nearest:.2e}"));
        }
    }
    Ok("bulk plaquette spectrum matches the accumulated phase".into())
}

fn shift_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let witness = shift_witness(field, &strip, 10).map_err(|e| e.to_string())?;
    if witness.gram_residual > 1e-10 {
        return Err(format!("Gram residual {:.2e}", witness.gram_residual));
    }
    Ok(format!(
        "orbit of depth 10 orthonormal to {:.2e}",
        witness.gram_residual
    ))
}

fn eigenflux_check(field: &SField) -> Result<String, String> {
    let strip = field.strip();
    let dense = ccilab_core::operator::strip_dense(field, &strip, (-4, 3), Closure::TorusVertical)
        .map_err(|e| e.to_string())?;
    let flux = ccilab_core::flux::dense_flux_matrix(&dense, 1);
    let worst = ccilab_core::flux::eigenvector_flux(&dense, &flux).map_err(|e| e.to_string())?;
    if worst > 1e-9 {
        return Err(format!("eigenvector flux {worst:.2e} above 1e-9"));
    }
    let q = ccilab_core::flux::HalfSpaceProjection::new(1).dense(&dense.basis);
    let p = dense.matrix.adjoint() * &q * &dense.matrix;
    let index = ccilab_core::flux::relative_index(&p, &q).map_err(|e| e.to_string())?;
    if index != 0 {
        return Err(format!(
            "finite-rank conjugated projection index {index} ≠ 0"
        ));
    }
    Ok(format!(
        "every torus eigenvector carries flux ≤ {worst:.2e}; finite relative index 0"
    ))
}

pub fn run_check(cfg: &ExperimentConfig, format: Format) -> Result<(String, bool), CmdError> {
    let field = field_of(cfg)?;
    let mut checks = vec![
        check("chirality", chirality_check(&field)),
        check("scatter-normalization", normalization_check(&field)),
        check("unitarity-adjoint-parity", operator_check(&field)),
        check("boundary-phases", boundary_check(&field)),
        check("flux-trace-spectrum", flux_check(&field, &cfg.flux.cuts)),
        check("plaquette-block", plaquette_check(&field)),
        check("shift-witness", shift_check(&field)),
    ];
    if field.is_translation_invariant() {
        checks.push(check("eigenvector-flux", eigenflux_check(&field)));
        checks.push(check("fiber-reconstruction", fiber_check(&field)));
        checks.push(check(
            "winding-routes",
            winding_check(&field, cfg.winding.grid),
        ));
        checks.push(check("fiber-pictures", fiber_pictures_check(&field)));
        checks.push(check("determinant-gauge", gauge_check(&field)));
    }
    let passed = checks.iter().all(|c| c.passed);
    let text = match format {
        Format::Json => to_json_line(&json!({ "passed": passed, "checks": checks })),
        Format::Csv => {
            let mut out = String::new();
            for c in &checks {
                out.push_str(&format!(
                    "{} {} — {}\n",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                ));
            }
            out.push_str(&format!(
                "{} of {} checks passed\n",
                checks.iter().filter(|c| c.passed).count(),
                checks.len()
            ));
            out
        }
    };
    Ok((text, passed))
}
