use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde_json::json;

use eigencond::conditioning::{condition_report, condition_report_diagonal, perturbation_experiment, PerturbationConfig};
use eigencond::extremal::{convergence_study, lattice_generator};
use eigencond::io::{read_configuration_file, write_configuration};
use eigencond::lattice::{enumerate_lattice_in_disk, first_n_lattice_coordinates, Configuration};
use eigencond::linalg::{read_matrix_file, ComplexMatrix, Tolerances};
use eigencond::optimizer::{optimize as run_optimizer, Init, OptimizerConfig};
use eigencond::reproduce::reproduce as run_reproduce;
use eigencond::{Error, Result};

use crate::{
    AsymptoticsArgs, CondArgs, Generator, InitKind, LatticeArgs, MatrixInput, OptimizeArgs, Outcome, PerturbArgs,
    ReproduceArgs, Tolerance,
};

fn csv_error(e: csv::Error) -> Error {
    Error::Io(io::Error::other(e))
}

struct Table {
    writer: csv::Writer<Box<dyn Write>>,
    path: String,
}

impl Table {
    fn create(path: &Option<PathBuf>, header: &[&str]) -> Result<Self> {
        let (sink, name): (Box<dyn Write>, String) = match path {
            Some(p) => (Box::new(BufWriter::new(File::create(p)?)), p.display().to_string()),
            None => (Box::new(io::stdout().lock()), "-".into()),
        };
        let mut writer = csv::WriterBuilder::new().flexible(false).from_writer(sink);
        writer.write_record(header).map_err(csv_error)?;
        Ok(Table { writer, path: name })
    }

    fn row<I: IntoIterator<Item = String>>(&mut self, fields: I) -> Result<()> {
        self.writer.write_record(fields.into_iter().collect::<Vec<_>>()).map_err(csv_error)
    }

    fn finish(mut self) -> Result<String> {
        self.writer.flush()?;
        Ok(self.path)
    }
}

fn tolerances(t: &Tolerance) -> Tolerances {
    Tolerances { eig: t.tol_eig, cluster: t.tol_cluster, block: t.tol_block }
}

fn load_diag(path: &Path) -> Result<Configuration> {
    read_configuration_file(path)
}

fn load_matrix(input: &MatrixInput) -> Result<ComplexMatrix> {
    match (&input.matrix, &input.diag) {
        (Some(path), _) => read_matrix_file(path),
        (None, Some(path)) => Ok(ComplexMatrix::from_diagonal(load_diag(path)?.points())),
        (None, None) => Err(Error::InvalidInput("no input matrix".into())),
    }
}

pub fn lattice(args: &LatticeArgs) -> Result<Outcome> {
    let points = match (args.n, args.r) {
        (Some(n), _) => first_n_lattice_coordinates(n)?,
        (None, Some(r)) => enumerate_lattice_in_disk(r, !args.open)?,
        (None, None) => return Err(Error::InvalidInput("give --n or --r".into())),
    };
    let mut t = Table::create(&args.output, &["index", "a", "b", "re", "im", "modulus"])?;
    for (i, p) in points.iter().enumerate() {
        t.row([
            i.to_string(),
            p.a.to_string(),
            p.b.to_string(),
            p.z.re.to_string(),
            p.z.im.to_string(),
            p.modulus().to_string(),
        ])?;
    }
    Ok(Outcome { outputs: vec![t.finish()?], summary: json!({ "points": points.len() }) })
}

pub fn cond(args: &CondArgs) -> Result<Outcome> {
    let report = match (&args.input.matrix, &args.input.diag) {
        (None, Some(path)) => condition_report_diagonal(&load_diag(path)?)?,
        _ => condition_report(&load_matrix(&args.input)?, &tolerances(&args.tol))?,
    };
    let mut t = Table::create(&args.output, &["lambda_re", "lambda_im", "kappa_lambda", "kappa_x"])?;
    for e in &report.per_eigenpair {
        t.row([e.lambda.re.to_string(), e.lambda.im.to_string(), e.kappa_lambda.to_string(), e.kappa_x.to_string()])?;
    }
    t.row([
        "kappa_max_frob".into(),
        report.kappa_max_frob.to_string(),
        "kappa_max_op".into(),
        report.kappa_max_op.to_string(),
    ])?;
    Ok(Outcome {
        outputs: vec![t.finish()?],
        summary: json!({
            "eigenpairs": report.per_eigenpair.len(),
            "kappa_max_frob": report.kappa_max_frob,
            "kappa_max_op": report.kappa_max_op,
        }),
    })
}

pub fn perturb(args: &PerturbArgs, seed: u64) -> Result<Outcome> {
    let a = load_matrix(&args.input)?;
    let cfg = PerturbationConfig { epsilon: args.eps, trials: args.trials, norm: args.norm, seed };
    let table = perturbation_experiment(&a, &cfg, &tolerances(&args.tol))?;
    let mut t = Table::create(
        &args.output,
        &["lambda_re", "lambda_im", "kappa_lambda", "kappa_x", "max_shift_ratio", "max_angle_ratio"],
    )?;
    for r in &table.rows {
        t.row([
            r.lambda.re.to_string(),
            r.lambda.im.to_string(),
            r.kappa_lambda.to_string(),
            r.kappa_x.to_string(),
            r.max_shift_ratio.to_string(),
            r.max_angle_ratio.to_string(),
        ])?;
    }
    t.row([
        "valid_trials".into(),
        table.valid_trials.to_string(),
        "excluded_trials".into(),
        table.excluded_trials.to_string(),
        "slack".into(),
        table.slack().to_string(),
    ])?;
    Ok(Outcome {
        outputs: vec![t.finish()?],
        summary: json!({
            "valid_trials": table.valid_trials,
            "excluded_trials": table.excluded_trials,
            "slack": table.slack(),
        }),
    })
}

pub fn asymptotics(args: &AsymptoticsArgs) -> Result<Outcome> {
    let rows = match args.generator {
        Generator::Lattice => convergence_study(args.p, &args.n_list, lattice_generator)?,
        Generator::File => {
            let path = args.file.as_ref().ok_or_else(|| Error::InvalidInput("--file is required".into()))?;
            let source = read_configuration_file(path)?;
            convergence_study(args.p, &args.n_list, |n| {
                let pts = source.points();
                if n > pts.len() {
                    return Err(Error::InvalidInput(format!("{} holds {} points, need {n}", path.display(), pts.len())));
                }
                Configuration::new(pts[..n].to_vec())
            })?
        }
    };
    let mut t = Table::create(&args.output, &["n", "raw", "scale", "ratio", "target", "margin"])?;
    for r in &rows {
        t.row([
            r.n.to_string(),
            r.raw.to_string(),
            r.scale.to_string(),
            r.ratio.to_string(),
            r.target.to_string(),
            r.margin().to_string(),
        ])?;
    }
    Ok(Outcome { outputs: vec![t.finish()?], summary: json!({ "rows": rows.len() }) })
}

pub fn optimize(args: &OptimizeArgs, seed: u64) -> Result<Outcome> {
    let mut cfg = OptimizerConfig::new(args.n, args.p);
    cfg.seed = seed;
    cfg.restarts = args.restarts;
    cfg.init = match args.init {
        InitKind::Lattice => Init::Lattice,
        InitKind::Random => Init::RandomDisk,
        InitKind::File => {
            let path = args.init_file.as_ref().ok_or_else(|| Error::InvalidInput("--init-file is required".into()))?;
            Init::Given(read_configuration_file(path)?)
        }
    };
    if let Some(b) = &args.beta_schedule {
        cfg.beta_schedule = b.clone();
    }
    if let Some(s) = &args.step_schedule {
        cfg.step_schedule = s.clone();
    }
    if let Some(m) = args.max_iters {
        cfg.max_iters = m;
    }
    if let Some(r) = args.polish_rounds {
        cfg.polish_rounds = r;
    }
    let result = run_optimizer(&cfg)?;

    let output = match &args.output {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            write_configuration(&result.best, &mut w)?;
            w.flush()?;
            p.display().to_string()
        }
        None => {
            write_configuration(&result.best, io::stdout().lock())?;
            "-".into()
        }
    };
    let mut trace = BufWriter::new(File::create(&args.trace)?);
    for point in &result.trace {
        serde_json::to_writer(&mut trace, point).map_err(io::Error::other)?;
        writeln!(trace)?;
    }
    trace.flush()?;
    Ok(Outcome {
        outputs: vec![output, args.trace.display().to_string()],
        summary: json!({
            "objective": result.objective,
            "init_objective": result.init_objective,
            "winning_seed": result.seed,
        }),
    })
}

pub fn reproduce(args: &ReproduceArgs) -> Result<Outcome> {
    let rows = run_reproduce(args.n)?;
    let mut t = Table::create(
        &args.output,
        &["quantity", "n", "kappa_max", "scale", "ratio", "target", "relative_deviation"],
    )?;
    for r in &rows {
        let quantity = match r.norm {
            eigencond::conditioning::NormKind::Frobenius => "kappa_max_frob/n",
            eigencond::conditioning::NormKind::Operator => "kappa_max_op/sqrt(n)",
        };
        t.row([
            quantity.to_string(),
            r.row.n.to_string(),
            r.kappa_max.to_string(),
            r.row.scale.to_string(),
            r.row.ratio.to_string(),
            r.row.target.to_string(),
            r.relative_deviation().to_string(),
        ])?;
    }
    Ok(Outcome {
        outputs: vec![t.finish()?],
        summary: json!({
            "frobenius_ratio": rows[0].row.ratio,
            "operator_ratio": rows[1].row.ratio,
        }),
    })
}
