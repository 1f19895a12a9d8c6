//! One function per subcommand: compute, then hand back the record and a
//! one-line summary.

use j1j2_core::bethe::{energy_from_roots, match_spectrum, solve_bae, BetheRecord, SolveStrategy};
use j1j2_core::spectrum::{
    self, eigs, flagged_runs, group_levels, predicted_real_intervals, relative_imaginary_part, REALITY_RTOL,
};
use j1j2_core::spin_algebra::{verify_r_properties, verify_ybe};
use j1j2_core::thermo::{
    density_normalization, dispersion_curve, gap, ground_density_profile, ground_energy_density, DispersionMode,
};
use j1j2_core::{hamiltonian, transfer, ModelParams, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{
    BaeArgs, DensityArgs, DispersionArgs, EdArgs, GapArgs, ModeArg, RealityArgs, RunConfig, VerifyArgs,
};
use crate::error::{CliError, CliResult};
use crate::record::{
    fmt_num, CheckRow, DensityRow, DispersionRow, GapRow, Payload, PointFailure, RealityRow, SpectrumRow,
};
use crate::sweep::{partition, sweep};

/// Largest chain handled by dense matrices; beyond it ED uses sectors.
const DENSE_SITES: usize = 10;
/// Largest chain for the transfer-matrix checks of `verify`.
const VERIFY_SITES: usize = 8;

pub struct Outcome {
    pub config: RunConfig,
    pub payload: Payload,
    pub summary: String,
    /// Numerical failure to report after the output is written.
    pub failure: Option<String>,
}

fn failures(list: Vec<(f64, String)>) -> Vec<PointFailure> {
    list.into_iter().map(|(x, message)| PointFailure { x, message }).collect()
}

fn failure_note(list: &[PointFailure]) -> Option<String> {
    (!list.is_empty()).then(|| {
        let first = &list[0];
        format!("{} grid points failed (first at {}: {})", list.len(), first.x, first.message)
    })
}

pub fn verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let p = args.model.resolve()?;
    if p.n_sites > VERIFY_SITES {
        return Err(CliError::Usage(format!("verify supports at most {VERIFY_SITES} sites")));
    }
    if args.draws == 0 {
        return Err(CliError::Usage("--draws must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut draw = || C64::new(rng.random_range(-1.0..1.0), rng.random_range(-0.5..0.5));
    let eta = p.eta();
    let (mut ybe, mut rprop, mut comm, mut hat) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..args.draws {
        let (u, v, w) = (draw(), draw(), draw());
        ybe = ybe.max(verify_ybe(u, v, w, eta)?);
        rprop = rprop.max(verify_r_properties(u, eta)?.max());
        let tu = transfer::transfer(u, &p)?;
        let tv = transfer::transfer(v, &p)?;
        comm = comm.max(tu.commutator(&tv).max_abs() / (tu.max_abs() * tv.max_abs()).max(1.0));
        let th = transfer::transfer_hat(-u - eta, &p)?;
        hat = hat.max(tu.max_abs_diff(&th) / tu.max_abs().max(1.0));
    }
    let direct = hamiltonian::build_direct(&p)?;
    let rebuilt = transfer::hamiltonian_from_transfer(&p)?;
    let recon = direct.matrix.max_abs_diff(&rebuilt) / direct.matrix.max_abs().max(1.0);
    let checks: Vec<CheckRow> = [
        ("yang-baxter", ybe),
        ("r-matrix-properties", rprop),
        ("transfer-commutation", comm),
        ("transfer-crossing", hat),
        ("hamiltonian-reconstruction", recon),
    ]
    .into_iter()
    .map(|(name, r)| CheckRow { check: name.into(), residual: r, threshold: args.tol, pass: r < args.tol })
    .collect();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.check.as_str()).collect();
    let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let mut config = RunConfig::new("verify", &args.output)?;
    config.model = Some(p);
    config.seed = Some(args.seed);
    config.draws = Some(args.draws);
    config.tol = Some(args.tol);
    Ok(Outcome {
        summary: format!("verify {p}: {} checks, worst residual {}", checks.len(), fmt_num(worst)),
        failure: (!failed.is_empty()).then(|| format!("checks above {}: {}", args.tol, failed.join(", "))),
        payload: Payload::Verify { checks },
        config,
    })
}

fn ed_spectrum(p: &ModelParams) -> CliResult<spectrum::SpectrumResult> {
    if p.n_sites <= DENSE_SITES {
        let h = hamiltonian::build_direct(p)?;
        Ok(eigs(&h.matrix, p.regime.is_hermitian())?)
    } else {
        Ok(spectrum::sector_spectrum(p)?)
    }
}

pub fn ed(args: &EdArgs) -> CliResult<Outcome> {
    let p = args.model.resolve()?;
    let spec = ed_spectrum(&p)?;
    let levels = group_levels(&spec.eigenvalues, args.level_tol * spec.spectral_radius);
    let rows: Vec<SpectrumRow> = spec
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(index, z)| {
            let level = levels
                .iter()
                .min_by(|x, y| (x.value - z).norm().total_cmp(&(y.value - z).norm()))
                .expect("a nonempty spectrum has levels");
            SpectrumRow { index, re: z.re, im: z.im, multiplicity: level.multiplicity }
        })
        .collect();
    let mut config = RunConfig::new("ed", &args.output)?;
    config.model = Some(p);
    config.tol = Some(args.level_tol);
    Ok(Outcome {
        summary: format!(
            "ed {p}: {} eigenvalues in {} levels, lowest {}, all real: {}",
            rows.len(),
            levels.len(),
            fmt_num(spec.min_real()),
            spec.all_real
        ),
        payload: Payload::Spectrum { rows, levels, all_real: spec.all_real },
        config,
        failure: None,
    })
}

pub fn bae(args: &BaeArgs) -> CliResult<Outcome> {
    let p = args.model.resolve()?;
    let n = p.half_sites();
    let sectors: Vec<usize> = match args.magnons {
        Some(m) if m > n => {
            return Err(CliError::Usage(format!("--magnons {m} exceeds N = {n}; the flipped sector is equivalent")))
        }
        Some(m) => vec![m],
        None => (0..=n).collect(),
    };
    let strategy = SolveStrategy { seeds: args.seeds, rng_seed: args.seed, ..SolveStrategy::default() };
    let mut solutions = Vec::new();
    let mut energies = Vec::new();
    for m in sectors {
        for roots in solve_bae(&p, m, &strategy)?.solutions {
            energies.push(energy_from_roots(&roots, &p)?);
            solutions.push(BetheRecord::new(&roots, &p)?);
        }
    }
    // M > N sectors mirror M <= N, so coverage is only meaningful for a full solve
    let coverage = if args.magnons.is_none() && p.n_sites <= 12 {
        let spec = ed_spectrum(&p)?;
        Some(match_spectrum(&energies, &spec, args.level_tol * spec.spectral_radius).coverage_fraction)
    } else {
        None
    };
    let mut config = RunConfig::new("bae", &args.output)?;
    config.model = Some(p);
    config.magnons = args.magnons;
    config.seed = Some(args.seed);
    config.seeds = Some(args.seeds);
    config.tol = Some(args.level_tol);
    let cov = coverage.map(|c| format!(", ED level coverage {:.3}", c)).unwrap_or_default();
    Ok(Outcome {
        summary: format!("bae {p}: {} solutions{cov}", solutions.len()),
        payload: Payload::Bethe { solutions, coverage },
        config,
        failure: None,
    })
}

pub fn thermo_density(args: &DensityArgs) -> CliResult<Outcome> {
    let p = args.model.resolve()?;
    let profile = ground_density_profile(&p, args.samples)?;
    let normalization = density_normalization(&p)?;
    let energy_density = ground_energy_density(&p)?;
    let rows = profile.grid.iter().zip(&profile.rho).map(|(&u, &rho)| DensityRow { u, rho }).collect();
    let mut config = RunConfig::new("thermo-density", &args.output)?;
    config.model = Some(p);
    config.samples = Some(args.samples);
    Ok(Outcome {
        summary: format!(
            "thermo-density {p}: {} samples, normalization {}, e_g {}",
            args.samples,
            fmt_num(normalization),
            fmt_num(energy_density)
        ),
        payload: Payload::Density { rows, normalization, energy_density },
        config,
        failure: None,
    })
}

pub fn dispersion(args: &DispersionArgs) -> CliResult<Outcome> {
    let p = args.model.resolve()?;
    let mode = match args.mode {
        ModeArg::Diagonal => DispersionMode::Diagonal,
        ModeArg::Pairs => DispersionMode::Pairs,
        ModeArg::Envelope => DispersionMode::Envelope,
    };
    let curve = dispersion_curve(&p, args.samples, mode)?;
    let arches = curve.arches(args.samples.min(400));
    let min_delta_e = curve.min_delta_e();
    let rows = curve
        .points
        .iter()
        .map(|q| DispersionRow { u_r: q.u_r, u_s: q.u_s, k: q.k, delta_e: q.delta_e })
        .collect::<Vec<_>>();
    let mut config = RunConfig::new("dispersion", &args.output)?;
    config.model = Some(p);
    config.samples = Some(args.samples);
    config.mode = Some(args.mode);
    Ok(Outcome {
        summary: format!(
            "dispersion {p}: {} points, min dE {}, {arches} arches",
            rows.len(),
            fmt_num(min_delta_e)
        ),
        payload: Payload::Dispersion { rows, min_delta_e, arches },
        config,
        failure: None,
    })
}

pub fn gap_sweep(args: &GapArgs) -> CliResult<Outcome> {
    let spec = args.grid.spec();
    // validate gamma once so a bad value is a usage error, not a column of failures
    gap(0.0, args.gamma)?;
    let (ok, failed) = partition(sweep(&spec, |a| gap(a, args.gamma))?);
    let rows: Vec<GapRow> = ok
        .into_iter()
        .map(|(a, g)| GapRow { a, gap: g.gap, branch: g.branch.to_string() })
        .collect();
    let failures = failures(failed);
    let best = rows.iter().max_by(|x, y| x.gap.total_cmp(&y.gap));
    let mut config = RunConfig::new("gap", &args.output)?;
    config.grid = Some(spec);
    let summary = format!(
        "gap gamma={}: {} points, maximum {} at a = {}",
        args.gamma,
        rows.len(),
        best.map(|r| fmt_num(r.gap)).unwrap_or_default(),
        best.map(|r| fmt_num(r.a)).unwrap_or_default()
    );
    Ok(Outcome { failure: failure_note(&failures), payload: Payload::Gap { rows, failures }, summary, config })
}

pub fn reality_scan(args: &RealityArgs) -> CliResult<Outcome> {
    let model = ModelParams::nonhermitian(args.sites, args.eta, 0.0)?;
    let spec = args.grid.spec();
    let (ok, failed) = partition(sweep(&spec, |a| relative_imaginary_part(args.eta, a, args.sites))?);
    let rows: Vec<RealityRow> =
        ok.into_iter().map(|(a, r)| RealityRow { a, all_real: r <= REALITY_RTOL, relative_imag: r }).collect();
    let grid: Vec<f64> = rows.iter().map(|r| r.a).collect();
    let flags: Vec<bool> = rows.iter().map(|r| r.all_real).collect();
    let intervals = flagged_runs(&grid, &flags);
    let predicted = predicted_real_intervals(args.eta);
    let failures = failures(failed);
    let show = |v: &[(f64, f64)]| {
        v.iter().map(|(x, y)| format!("[{x:.4}, {y:.4}]")).collect::<Vec<_>>().join(" ")
    };
    let summary = format!(
        "reality-scan eta={} 2N={}: real on {} (predicted {})",
        args.eta,
        args.sites,
        show(&intervals),
        show(&predicted)
    );
    let mut config = RunConfig::new("reality-scan", &args.output)?;
    config.model = Some(model);
    config.grid = Some(spec);
    Ok(Outcome {
        failure: failure_note(&failures),
        payload: Payload::Reality { rows, intervals, predicted, failures },
        summary,
        config,
    })
}
