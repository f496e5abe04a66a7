//! One function per subcommand, each producing a [`Table`].

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use swanson_core::biortho::{scan_exceptional, Axis, ParamGrid};
use swanson_core::entangle::{entropy_profile, ProfileOutcome};
use swanson_core::model::{
    biortho_norms, branch_energies, build_hamiltonian, discriminant, parameter_region, ModelParams,
};
use swanson_core::phase::{from_zdelta, ZDeltaParams};
use swanson_core::trotter::{doubling_ladder, fitted_slope, trotter_error_scan, ChainParams};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::table::{float, Table};

pub const DEFAULT_OMEGA: f64 = 0.25;
pub const DEFAULT_EP_TOL: f64 = 1e-6;

fn axis(s: &Settings, name: &str, default: (f64, f64), points: usize) -> CliResult<Axis> {
    let min = s.f64_or(&format!("{name}-min"), default.0)?;
    let max = s.f64_or(&format!("{name}-max"), default.1)?;
    Ok(Axis::new(min, max, points)?)
}

/// `(α, β)` pairs, row-major in `β`, from `--alpha`/`--beta` or the grid.
fn coupling_points(
    s: &Settings,
    bounds: (f64, f64),
    default_grid: usize,
    table: &mut Table,
) -> CliResult<Vec<(f64, f64)>> {
    if s.has("alpha") && s.has("beta") {
        let (a, b) = (s.f64_or("alpha", 0.0)?, s.f64_or("beta", 0.0)?);
        table.meta("alpha", a);
        table.meta("beta", b);
        return Ok(vec![(a, b)]);
    }
    let (nx, ny) = s.grid_or(default_grid)?;
    let ax = axis(s, "alpha", bounds, nx)?;
    let bx = axis(s, "beta", bounds, ny)?;
    table.meta("alpha", format!("[{}, {}] x {}", ax.min, ax.max, ax.points));
    table.meta("beta", format!("[{}, {}] x {}", bx.min, bx.max, bx.points));
    Ok(bx
        .values()
        .into_iter()
        .flat_map(|b| ax.values().into_iter().map(move |a| (a, b)))
        .collect())
}

pub fn spectrum(s: &Settings) -> CliResult<Table> {
    let mut table = Table::new(&[
        "alpha", "beta", "omega", "E1_re", "E1_im", "E2_re", "E2_im", "E3", "E4", "norm_I",
        "norm_II", "region",
    ]);
    table.meta("command", "spectrum");
    let omega = s.f64_or("omega", DEFAULT_OMEGA)?;
    table.meta("omega", omega);
    ModelParams::new(omega, 0.0, 0.0)?;
    let points = coupling_points(s, (-1.0, 1.0), 201, &mut table)?;
    table.rows = points
        .par_iter()
        .map(|&(a, b)| {
            let p = ModelParams::new(omega, a, b)?;
            let (e1, e2) = branch_energies(a, b);
            let (n1, n2) = biortho_norms(&p).unwrap_or((f64::NAN, f64::NAN));
            Ok(vec![
                float(a),
                float(b),
                float(omega),
                float(e1.re),
                float(e1.im),
                float(e2.re),
                float(e2.im),
                float(omega),
                float(1.0 - omega),
                float(n1),
                float(n2),
                parameter_region(a, b).to_string(),
            ])
        })
        .collect::<CliResult<_>>()?;
    Ok(table)
}

pub fn energy_curves(s: &Settings) -> CliResult<Table> {
    let mut table = Table::new(&["delta", "z", "EI_re", "EI_im", "EII_re", "EII_im"]);
    table.meta("command", "energy-curves");
    let deltas = s.f64_list_or("delta", &[0.0, 0.25, 0.5])?;
    let z = axis(s, "z", (-1.0, 1.0), s.usize_or("z-steps", 201)?)?;
    table.meta(
        "delta",
        deltas
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    table.meta("z", format!("[{}, {}] x {}", z.min, z.max, z.points));
    let zs = z.values();
    table.rows = deltas
        .iter()
        .flat_map(|&delta| zs.iter().map(move |&z| (delta, z)))
        .map(|(delta, z)| {
            let (a, b) = from_zdelta(ZDeltaParams { z, delta });
            let (e1, e2) = branch_energies(a, b);
            vec![
                float(delta),
                float(z),
                float(e1.re),
                float(e1.im),
                float(e2.re),
                float(e2.im),
            ]
        })
        .collect();
    Ok(table)
}

pub fn phase_entropy(s: &Settings) -> CliResult<Table> {
    let mut table = Table::new(&[
        "alpha",
        "beta",
        "ab_product",
        "branch",
        "n1",
        "n2",
        "entropy",
        "status",
    ]);
    table.meta("command", "phase-entropy");
    let omega = s.f64_or("omega", DEFAULT_OMEGA)?;
    let kind = s.norm_kind()?;
    table.meta("omega", omega);
    table.meta("norm", kind);
    let points = coupling_points(s, (-1.0, 1.0), 101, &mut table)?;
    let profile = entropy_profile(omega, &points, kind)?;
    table.rows = profile
        .iter()
        .map(|pt| {
            let (branch, n1, n2, entropy, status) = match pt.outcome {
                ProfileOutcome::Evaluated {
                    branch,
                    n1,
                    n2,
                    entropy,
                } => (branch.as_str(), n1, n2, entropy, "OK"),
                ProfileOutcome::Boundary => (
                    "BOUNDARY",
                    f64::NAN,
                    f64::NAN,
                    f64::NAN,
                    "DEGENERATE_GROUND_STATE",
                ),
                ProfileOutcome::ComplexSpectrum => {
                    ("NA", f64::NAN, f64::NAN, f64::NAN, "COMPLEX_SPECTRUM")
                }
            };
            vec![
                float(pt.alpha),
                float(pt.beta),
                float(pt.product()),
                branch.to_string(),
                float(n1),
                float(n2),
                float(entropy),
                status.to_string(),
            ]
        })
        .collect();
    Ok(table)
}

pub fn ep_scan(s: &Settings) -> CliResult<Table> {
    let mut table = Table::new(&[
        "alpha",
        "beta",
        "eigenvalue_re",
        "eigenvalue_im",
        "eigenvalue_gap",
        "self_overlap",
        "jordan_rank_defect",
        "discriminant",
    ]);
    table.meta("command", "ep-scan");
    let omega = s.f64_or("omega", DEFAULT_OMEGA)?;
    let tol = s.f64_or("tol", DEFAULT_EP_TOL)?;
    ModelParams::new(omega, 0.0, 0.0)?;
    let (nx, ny) = s.grid_or(401)?;
    let grid = ParamGrid::new(
        axis(s, "alpha", (-2.0, 2.0), nx)?,
        axis(s, "beta", (-2.0, 2.0), ny)?,
    );
    table.meta("omega", omega);
    table.meta("tol", tol);
    table.meta(
        "alpha",
        format!("[{}, {}] x {}", grid.x.min, grid.x.max, nx),
    );
    table.meta("beta", format!("[{}, {}] x {}", grid.y.min, grid.y.max, ny));
    table.meta("cell_diagonal", float(grid.cell_diagonal()));
    let builder = |a: f64, b: f64| {
        build_hamiltonian(&ModelParams::new(omega, a, b).expect("omega validated above"))
    };
    let reports = scan_exceptional(&grid, builder, tol)?;
    table.rows = reports
        .iter()
        .map(|r| {
            let (a, b) = r.location;
            vec![
                float(a),
                float(b),
                float(r.eigenvalue.re),
                float(r.eigenvalue.im),
                float(r.eigenvalue_gap),
                float(r.self_overlap),
                r.jordan_rank_defect.to_string(),
                float(discriminant(a, b)),
            ]
        })
        .collect();
    table
        .footer
        .push(("points".into(), reports.len().to_string()));
    Ok(table)
}

fn chain_params(s: &Settings, table: &mut Table) -> CliResult<ChainParams> {
    let sites = s.usize_or("sites", 3)?;
    let bonds = sites.saturating_sub(1);
    let chain = if s.bool_or("random-chain", false)? {
        let seed = s.u64_or("seed", 0)?;
        table.meta("seed", seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let omegas = (0..sites).map(|_| rng.random_range(0.0..1.0)).collect();
        let alphas = (0..bonds).map(|_| rng.random_range(-1.0..1.0)).collect();
        let betas = (0..bonds).map(|_| rng.random_range(-1.0..1.0)).collect();
        ChainParams::new(omegas, alphas, betas)?
    } else {
        let omegas = s.f64_list_or("omegas", &vec![s.f64_or("omega", DEFAULT_OMEGA)?; sites])?;
        let alphas = s.f64_list_or("alphas", &vec![s.f64_or("alpha", 1.0)?; bonds])?;
        let betas = s.f64_list_or("betas", &vec![s.f64_or("beta", 1.0)?; bonds])?;
        if omegas.len() != sites && s.has("sites") {
            return Err(CliError::Usage(format!(
                "sites = {sites} but {} omegas given",
                omegas.len()
            )));
        }
        ChainParams::new(omegas, alphas, betas)?
    };
    let join = |xs: &[f64]| xs.iter().map(|x| float(*x)).collect::<Vec<_>>().join(",");
    table.meta("omegas", join(chain.omegas()));
    table.meta("alphas", join(chain.alphas()));
    table.meta("betas", join(chain.betas()));
    Ok(chain)
}

pub fn trotter(s: &Settings) -> CliResult<Table> {
    let mut table = Table::new(&["L", "t", "N", "error_norm"]);
    table.meta("command", "trotter");
    let chain = chain_params(s, &mut table)?;
    let t = s.f64_or("t", 1.0)?;
    let steps = if s.has("steps") {
        s.list_or::<u64>("steps", &[])?
    } else {
        doubling_ladder(s.u64_or("n-min", 1)?, s.u64_or("n-max", 512)?)
    };
    if steps.is_empty() || steps.contains(&0) {
        return Err(CliError::Usage("step counts must be positive".into()));
    }
    table.meta("t", t);
    let scan = trotter_error_scan(&chain, t, &steps)?;
    let l = chain.site_count().to_string();
    table.rows = scan
        .points
        .iter()
        .map(|&(n, e)| vec![l.clone(), float(t), n.to_string(), float(e)])
        .collect();
    let slope = fitted_slope(&scan.points).map_or_else(|| "NA".to_string(), float);
    table.footer.push(("slope".into(), slope));
    Ok(table)
}
