use std::path::Path;

use serde_json::{json, Map, Value};

use modvar::griddist::{load_coincidence_csv, normalize_counts, render_coincidence_csv, CountsMap, DetectorPlane, JointDistribution, OpticsConfig};
use modvar::spectral::constant_c;
use modvar::states::{add_background, ideal_far_field, ideal_near_field, SimGrid, SlitSpec};
use modvar::witnesses::{
    poisson_uncertainty, resample_poisson_seeded, scan_ell, Criterion, Evaluation, Pairing, SteeringDirection,
    WitnessResult,
};

use crate::args::{
    Cli, Command, ConstantArgs, Format, Inputs, ResampleArgs, ScanArgs, Shared, SimulateArgs, SteerArgs, WitnessArgs,
};
use crate::error::CliError;
use crate::plot;
use crate::report::{write_atomic, RunReport};

/// Largest truncation accepted for the dense eigenproblem.
const MAX_NMAX: usize = 2000;

pub fn run(cli: Cli, command: Vec<String>) -> Result<(), CliError> {
    let shared = &cli.shared;
    if shared.bins < 4 {
        return Err(CliError::usage(format!("--bins must be at least 4, got {}", shared.bins)));
    }
    let mut config = Map::new();
    config.insert("bins".into(), json!(shared.bins));
    config.insert("grid".into(), json!(shared.grid));
    config.insert("seed".into(), json!(shared.seed));
    config.insert("ell".into(), json!(shared.ell));
    let mut report = RunReport::new(command, config)?;
    match &cli.command {
        Command::Simulate(a) => simulate(shared, a, &mut report)?,
        Command::Witness(a) => witness(shared, a, &mut report)?,
        Command::Steer(a) => steer(shared, a, &mut report)?,
        Command::ConstantC(a) => constant(a, &mut report)?,
        Command::ScanEll(a) => scan(shared, a, &mut report)?,
        Command::Resample(a) => resample(shared, a, &mut report)?,
    }
    let text = match shared.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    match &shared.out {
        Some(path) => write_atomic(path, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn set(report: &mut RunReport, key: &str, value: Value) {
    report.config.insert(key.to_string(), value);
}

fn require_ell(shared: &Shared) -> Result<f64, CliError> {
    match shared.ell {
        Some(ell) if ell.is_finite() && ell > 0.0 => Ok(ell),
        Some(ell) => Err(CliError::usage(format!("--ell must be positive, got {ell}"))),
        None => Err(CliError::usage("--ell is required for this command")),
    }
}

fn check_nmax(nmax: usize) -> Result<(), CliError> {
    if nmax > MAX_NMAX {
        return Err(CliError::usage(format!("--nmax must be at most {MAX_NMAX}, got {nmax}")));
    }
    Ok(())
}

fn c_value(nmax: usize, report: &mut RunReport) -> Result<f64, CliError> {
    check_nmax(nmax)?;
    let eig = constant_c(nmax);
    if !eig.converged() {
        log::warn!("C not converged at n_max = {nmax} (delta {:.2e})", eig.convergence_delta);
    }
    set(report, "nmax", json!(nmax));
    set(report, "c", json!(eig.c_value));
    Ok(eig.c_value)
}

fn load(path: &Path, plane: DetectorPlane) -> Result<CountsMap, CliError> {
    let map = load_coincidence_csv(path)?;
    if map.plane() != plane {
        return Err(CliError::usage(format!("{} is not a {plane:?}-field map", path.display()).to_lowercase()));
    }
    Ok(map)
}

struct Loaded {
    near_counts: CountsMap,
    far_counts: CountsMap,
    near: JointDistribution,
    far: JointDistribution,
}

fn load_inputs(inputs: &Inputs, report: &mut RunReport) -> Result<Loaded, CliError> {
    set(report, "near", json!(inputs.near));
    set(report, "far", json!(inputs.far));
    let near_counts = load(&inputs.near, DetectorPlane::Near)?;
    let far_counts = load(&inputs.far, DetectorPlane::Far)?;
    let near = normalize_counts(&near_counts)?;
    let far = normalize_counts(&far_counts)?;
    Ok(Loaded { near_counts, far_counts, near, far })
}

/// Evaluate, then attach a Poisson error bar when `trials > 0`.
fn evaluate(eval: &Evaluation, data: &Loaded, trials: usize, seed: u64) -> Result<WitnessResult, CliError> {
    let mut r = eval.evaluate(&data.near, &data.far)?;
    if trials > 0 {
        let (mean, sd) = poisson_uncertainty(&data.near_counts, &data.far_counts, eval, trials, seed)?;
        r.sd = Some(sd);
        r.components.insert("resample_mean".into(), mean);
    }
    Ok(r)
}

fn write_bars(path: &Path, results: &[WitnessResult]) -> Result<(), CliError> {
    let labels: Vec<String> = results
        .iter()
        .map(|r| match r.pairing {
            Some(p) => format!("{} {p}", r.criterion),
            None => r.criterion.to_string(),
        })
        .collect();
    let values: Vec<f64> = results.iter().map(|r| r.violation).collect();
    write_atomic(path, plot::bar_chart(&labels, &values, "violation (negative = detected)", "violation").as_bytes())
}

fn simulate(shared: &Shared, a: &SimulateArgs, report: &mut RunReport) -> Result<(), CliError> {
    let preset = SlitSpec::experimental(a.slits);
    let width = a.width.or(preset.map(|p| p.width));
    let sep = a.sep.or(preset.map(|p| p.separation));
    let (Some(width), Some(sep)) = (width, sep) else {
        return Err(CliError::usage(format!("--width and --sep are required for {} slits", a.slits)));
    };
    let spec = SlitSpec::new(a.slits, width, sep)?;
    let grid = SimGrid::with_cells(shared.grid)?;
    let optics = OpticsConfig { magnification: a.optics.magnification, focal_mm: a.optics.focal_mm, wavelength_nm: a.optics.wavelength_nm };
    optics.validate()?;

    let near_axis = grid.near_axis(&spec)?;
    let far_axis = grid.far_axis(&spec)?;
    let mut near = ideal_near_field(&spec, &near_axis)?;
    if a.background > 0.0 {
        near = add_background(&near, a.background)?;
    }
    let far = ideal_far_field(&spec, &far_axis, a.far_mode.into())?;
    let mut near_map = CountsMap::from_distribution(&near, optics, a.total)?;
    let mut far_map = CountsMap::from_distribution(&far, optics, a.total)?;
    if a.poisson {
        near_map = resample_poisson_seeded(&near_map, shared.seed)?;
        far_map = resample_poisson_seeded(&far_map, shared.seed.wrapping_add(1))?;
    }
    write_atomic(&a.out_near, render_coincidence_csv(&near_map).as_bytes())?;
    write_atomic(&a.out_far, render_coincidence_csv(&far_map).as_bytes())?;

    set(report, "slits", json!({ "count": spec.slits, "width_mm": spec.width, "separation_mm": spec.separation }));
    set(report, "optics", json!(optics));
    set(report, "total", json!(a.total));
    set(report, "far_mode", json!(modvar::states::FarFieldMode::from(a.far_mode)));
    set(report, "background", json!(a.background));
    set(report, "poisson", json!(a.poisson));
    set(report, "near_cells", json!([near_axis.count(), near_axis.count()]));
    set(report, "far_cells", json!([far_axis.count(), far_axis.count()]));
    set(report, "out_near", json!(a.out_near));
    set(report, "out_far", json!(a.out_far));
    Ok(())
}

fn witness(shared: &Shared, a: &WitnessArgs, report: &mut RunReport) -> Result<(), CliError> {
    let ell = require_ell(shared)?;
    let data = load_inputs(&a.inputs, report)?;
    let c = c_value(a.nmax, report)?;
    let pairing: Pairing = a.pairing.into();
    set(report, "pairing", json!(pairing));
    set(report, "criteria", json!(a.criterion.iter().map(|&c| Criterion::from(c)).collect::<Vec<_>>()));
    set(report, "sep", json!(a.sep));
    set(report, "trials", json!(a.trials));
    for &crit in &a.criterion {
        let eval = Evaluation {
            criterion: crit.into(),
            ell,
            bins: shared.bins,
            pairing,
            direction: SteeringDirection::default(),
            c,
            separation: a.sep,
        };
        report.results.push(evaluate(&eval, &data, a.trials, shared.seed)?);
    }
    if let Some(svg) = &a.svg {
        write_bars(svg, &report.results)?;
    }
    Ok(())
}

fn steer(shared: &Shared, a: &SteerArgs, report: &mut RunReport) -> Result<(), CliError> {
    let ell = require_ell(shared)?;
    let data = load_inputs(&a.inputs, report)?;
    let c = c_value(a.nmax, report)?;
    let direction: SteeringDirection = a.direction.into();
    set(report, "direction", json!(direction));
    set(report, "trials", json!(a.trials));
    for criterion in [Criterion::VarSteer, Criterion::EntSteer] {
        let eval = Evaluation {
            criterion,
            ell,
            bins: shared.bins,
            pairing: Pairing::default(),
            direction,
            c,
            separation: None,
        };
        report.results.push(evaluate(&eval, &data, a.trials, shared.seed)?);
    }
    if let Some(svg) = &a.svg {
        write_bars(svg, &report.results)?;
    }
    Ok(())
}

fn constant(a: &ConstantArgs, report: &mut RunReport) -> Result<(), CliError> {
    check_nmax(a.nmax)?;
    set(report, "nmax", json!(a.nmax));
    report.constant_c = Some(constant_c(a.nmax));
    Ok(())
}

fn ratios(a: &ScanArgs) -> Result<Vec<f64>, CliError> {
    if !(a.step > 0.0 && a.from > 0.0 && a.to >= a.from) {
        return Err(CliError::usage(format!(
            "need 0 < --from <= --to and --step > 0, got from {} to {} step {}",
            a.from, a.to, a.step
        )));
    }
    let count = ((a.to - a.from) / a.step + 1e-9).floor() as usize + 1;
    Ok(modvar::witnesses::ratio_grid(a.from, a.step, count))
}

fn scan(shared: &Shared, a: &ScanArgs, report: &mut RunReport) -> Result<(), CliError> {
    if !(a.sep.is_finite() && a.sep > 0.0) {
        return Err(CliError::usage(format!("--sep must be positive, got {}", a.sep)));
    }
    let ratios = ratios(a)?;
    let data = load_inputs(&a.inputs, report)?;
    let pairing: Pairing = a.pairing.into();
    set(report, "sep", json!(a.sep));
    set(report, "pairing", json!(pairing));
    set(report, "ratios", json!({ "from": a.from, "to": a.to, "step": a.step, "count": ratios.len() }));
    let curve = scan_ell(&data.near, &data.far, a.sep, &ratios, shared.bins, pairing)?;
    if let Some(path) = &a.curve {
        let mut text = String::from("ratio,violation\n");
        for (r, v) in curve.ratios.iter().zip(&curve.violations) {
            text.push_str(&format!("{r},{v}\n"));
        }
        write_atomic(path, text.as_bytes())?;
    }
    if let Some(path) = &a.svg {
        let svg = plot::line_chart(&curve.ratios, &curve.violations, "coarse-grained entropic witness", "l/d", "violation");
        write_atomic(path, svg.as_bytes())?;
    }
    report.scan = Some(curve);
    Ok(())
}

fn resample(shared: &Shared, a: &ResampleArgs, report: &mut RunReport) -> Result<(), CliError> {
    let ell = require_ell(shared)?;
    if a.trials < 2 {
        return Err(CliError::usage(format!("--trials must be at least 2, got {}", a.trials)));
    }
    let data = load_inputs(&a.inputs, report)?;
    let c = c_value(a.nmax, report)?;
    let eval = Evaluation {
        criterion: a.criterion.into(),
        ell,
        bins: shared.bins,
        pairing: a.pairing.into(),
        direction: a.direction.into(),
        c,
        separation: a.sep,
    };
    set(report, "evaluation", json!(eval));
    set(report, "trials", json!(a.trials));
    report.results.push(evaluate(&eval, &data, a.trials, shared.seed)?);
    Ok(())
}
