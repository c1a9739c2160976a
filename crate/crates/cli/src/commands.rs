use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use spinchain_core::classical::{self, FieldState};
use spinchain_core::heun::{self, BetheOptions, BetheSolution};
use spinchain_core::mathieu::{self, Parity, SpectrumEntry};
use spinchain_core::stereo::{self, ComplexFieldPoint, SpinPoint};
use spinchain_core::verify::{self, ResidualReport};
use spinchain_core::PhysicalParams;

use crate::cli::{
    ClassicalArgs, Command, MathieuArgs, ParityArg, ParitySet, ProjectArgs, RootsArgs, SpectrumArgs, Suite, TableArgs,
    VerifyArgs,
};
use crate::error::CliError;
use crate::table::{Cell, Format, Table};

/// Everything a command needs besides its own arguments.
#[derive(Debug, Clone)]
pub struct Context {
    pub params: PhysicalParams,
    pub seed: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

impl Context {
    fn bethe_options(&self) -> BetheOptions {
        let mut opts = BetheOptions::default();
        if let Some(seed) = self.seed {
            opts.seed = seed;
        }
        opts
    }

    fn emit(&self, table: &Table) -> Result<(), CliError> {
        match &self.out {
            Some(path) => {
                let mut w = BufWriter::new(File::create(path).map_err(|e| io_at(path, e))?);
                table.write(self.format, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                table.write(self.format, &mut w)?;
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn io_at(path: &Path, e: io::Error) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

pub fn run(command: &Command, ctx: &Context) -> Result<(), CliError> {
    match command {
        Command::Project(a) => ctx.emit(&project(a)?),
        Command::Classical(a) => ctx.emit(&classical(a, ctx)?),
        Command::Spectrum(a) => ctx.emit(&spectrum(a, ctx)?),
        Command::Roots(a) => ctx.emit(&roots(a, ctx)?),
        Command::Mathieu(a) => ctx.emit(&mathieu_table(a)?),
        Command::Offplane(a) => ctx.emit(&energy_table(a, ctx, mathieu::offplane_spectrum_with)?),
        Command::Inplane(a) => ctx.emit(&energy_table(a, ctx, mathieu::inplane_spectrum_with)?),
        Command::Verify(a) => verify_cmd(a, ctx),
    }
}

const PROJECT_COLUMNS: [&str; 6] = ["S1", "S2", "S3", "P", "Q", "infinite"];

fn projection_row(s: SpinPoint, w: ComplexFieldPoint) -> Vec<Cell> {
    let (p, q) = match w {
        ComplexFieldPoint::Finite { p, q } => (Cell::Num(p), Cell::Num(q)),
        ComplexFieldPoint::Infinity => (Cell::Null, Cell::Null),
    };
    vec![s.s1.into(), s.s2.into(), s.s3.into(), p, q, w.is_infinite().into()]
}

fn from_spin(s1: f64, s2: f64, s3: f64) -> Result<Vec<Cell>, CliError> {
    let s = SpinPoint::new(s1, s2, s3)?;
    Ok(projection_row(s, stereo::project(s)))
}

fn from_point(p: f64, q: f64) -> Result<Vec<Cell>, CliError> {
    if !(p.is_finite() && q.is_finite()) {
        return Err(spinchain_core::Error::NonFinite("plane point").into());
    }
    let w = ComplexFieldPoint::finite(p, q);
    Ok(projection_row(stereo::unproject(w), w))
}

fn project(a: &ProjectArgs) -> Result<Table, CliError> {
    let mut t = Table::new(&PROJECT_COLUMNS);
    if let Some(s) = &a.spin {
        t.push(from_spin(s[0], s[1], s[2])?);
    } else if let Some(w) = &a.point {
        t.push(from_point(w[0], w[1])?);
    } else if let Some(path) = &a.input {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| match e.kind() {
            csv::ErrorKind::Io(_) => CliError::Usage(format!("{}: {e}", path.display())),
            _ => CliError::from(e),
        })?;
        let headers = rdr.headers()?.clone();
        let col = |name: &str| headers.iter().position(|h| h == name);
        let spin_cols = [col("S1"), col("S2"), col("S3")];
        let point_cols = [col("P"), col("Q")];
        let cols: Vec<usize> = if spin_cols.iter().all(Option::is_some) {
            spin_cols.iter().flatten().copied().collect()
        } else if point_cols.iter().all(Option::is_some) {
            point_cols.iter().flatten().copied().collect()
        } else {
            return Err(CliError::Usage(format!("{}: need columns S1,S2,S3 or P,Q", path.display())));
        };
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            let v = cols
                .iter()
                .map(|&i| {
                    let cell = record.get(i).unwrap_or("");
                    cell.parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("{}: row {}: `{cell}` is not a number", path.display(), line + 1)))
                })
                .collect::<Result<Vec<f64>, _>>()?;
            t.push(if v.len() == 3 { from_spin(v[0], v[1], v[2])? } else { from_point(v[0], v[1])? });
        }
    }
    Ok(t)
}

fn classical(a: &ClassicalArgs, ctx: &Context) -> Result<Table, CliError> {
    let init = FieldState::new(a.p0, a.q0, a.pi_p, a.pi_q);
    let traj = classical::integrate_static(init, (a.z_start, a.z_end), a.step, &ctx.params)?;
    let mut t = Table::new(&["z", "P", "Q", "PiP", "PiQ", "H"]);
    let last = traj.states.len() - 1;
    for (i, ((z, s), h)) in traj.z_grid.iter().zip(&traj.states).zip(&traj.h_values).enumerate() {
        if i % a.every as usize == 0 || i == last {
            t.push(vec![(*z).into(), s.p.into(), s.q.into(), s.pi_p.into(), s.pi_q.into(), (*h).into()]);
        }
    }
    Ok(t)
}

fn level(n: u32, ctx: &Context) -> Result<Vec<BetheSolution>, CliError> {
    Ok(heun::bethe_roots_with_options(n, &ctx.params, None, &ctx.bethe_options())?)
}

fn complex_cell(sol: &BetheSolution) -> Cell {
    Cell::Complex(sol.roots.iter().map(|z| (z.re, z.im)).collect())
}

fn spectrum(a: &SpectrumArgs, ctx: &Context) -> Result<Table, CliError> {
    let mut t = Table::new(&["n", "lambda", "l", "branch", "roots", "energy", "bethe_residual"]);
    for n in 0..=a.max_n {
        for sol in level(n, ctx)? {
            let ix = sol.indices;
            t.push(vec![
                ix.n.into(),
                ix.lambda_n.into(),
                ix.l.into(),
                ix.branch.into(),
                complex_cell(&sol),
                sol.energy.into(),
                sol.residual.into(),
            ]);
        }
    }
    Ok(t)
}

fn roots(a: &RootsArgs, ctx: &Context) -> Result<Table, CliError> {
    let mut t = Table::new(&["n", "branch", "index", "re", "im", "energy", "bethe_residual"]);
    for sol in level(a.n, ctx)? {
        let head = |t: &mut Table, idx: Cell, re: Cell, im: Cell| {
            t.push(vec![
                sol.indices.n.into(),
                sol.indices.branch.into(),
                idx,
                re,
                im,
                sol.energy.into(),
                sol.residual.into(),
            ])
        };
        if sol.roots.is_empty() {
            head(&mut t, Cell::Null, Cell::Null, Cell::Null);
        }
        for (i, z) in sol.roots.iter().enumerate() {
            head(&mut t, i.into(), z.re.into(), z.im.into());
        }
    }
    Ok(t)
}

fn parity_of(p: ParityArg) -> Parity {
    match p {
        ParityArg::Ce => Parity::Even,
        ParityArg::Se => Parity::Odd,
    }
}

fn mathieu_table(a: &MathieuArgs) -> Result<Table, CliError> {
    let sol = mathieu::solve(a.nu, a.q, parity_of(a.parity))?;
    let label = sol.parity.label();
    let Some(samples) = a.samples else {
        let mut t = Table::new(&["nu", "q", "parity", "a", "truncation"]);
        t.push(vec![sol.nu.into(), sol.q.into(), label.into(), sol.a.into(), sol.truncation().into()]);
        return Ok(t);
    };
    if samples == 0 {
        return Err(CliError::Usage("--samples must be positive".into()));
    }
    let mut t = Table::new(&["nu", "q", "parity", "a", "x", "value", "derivative"]);
    for x in verify::periodic_grid(samples) {
        t.push(vec![
            sol.nu.into(),
            sol.q.into(),
            label.into(),
            sol.a.into(),
            x.into(),
            sol.eval(x).into(),
            sol.d1(x).into(),
        ]);
    }
    Ok(t)
}

type SpectrumFn = fn(&PhysicalParams, &[f64], Parity) -> spinchain_core::Result<Vec<SpectrumEntry>>;

fn energy_table(a: &TableArgs, ctx: &Context, f: SpectrumFn) -> Result<Table, CliError> {
    let mut t = Table::new(&["nu", "parity", "q", "a", "energy"]);
    for &nu in &a.orders.0 {
        let parities: &[Parity] = match a.parity {
            ParitySet::Ce => &[Parity::Even],
            ParitySet::Se => &[Parity::Odd],
            // no sine-type branch of order zero
            ParitySet::Both if nu == 0.0 => &[Parity::Even],
            ParitySet::Both => &[Parity::Even, Parity::Odd],
        };
        for &parity in parities {
            for e in f(&ctx.params, &[nu], parity)? {
                t.push(vec![e.nu.into(), e.parity.label().into(), e.q.into(), e.a.into(), e.energy.into()]);
            }
        }
    }
    Ok(t)
}

struct Case {
    suite: &'static str,
    name: String,
    max_rel: f64,
    tolerance: f64,
    /// `(axis label, abscissae, pointwise residuals)` for residual-type checks.
    profile: Option<(&'static str, Vec<f64>, Vec<f64>)>,
}

impl Case {
    fn passed(&self) -> bool {
        self.max_rel < self.tolerance
    }

    fn from_report(suite: &'static str, name: String, axis: &'static str, r: ResidualReport) -> Self {
        Case { suite, name, max_rel: r.max_rel, tolerance: r.tolerance, profile: Some((axis, r.grid, r.residuals)) }
    }

    fn scalar(suite: &'static str, name: String, value: f64, tolerance: f64) -> Self {
        Case { suite, name, max_rel: value, tolerance, profile: None }
    }
}

const FD_NODES: usize = 2048;
const FD_TOL: f64 = 1e-5;

fn radial_cases(a: &VerifyArgs, ctx: &Context, cases: &mut Vec<Case>) -> Result<(), CliError> {
    let levels = match a.n {
        Some(n) => n..=n,
        None => 0..=a.max_n,
    };
    let grid = verify::default_radial_grid();
    for n in levels {
        for sol in level(n, ctx)? {
            let rep = verify::radial_residual(&sol, &ctx.params, &grid)?;
            cases.push(Case::from_report("radial", format!("n={n} branch={}", sol.indices.branch), "r", rep));
        }
    }
    Ok(())
}

fn sorted_energies(ctx: &Context, f: SpectrumFn, top: u32) -> Result<Vec<f64>, CliError> {
    let orders: Vec<f64> = (0..=top).map(f64::from).collect();
    let mut e: Vec<f64> = f(&ctx.params, &orders, Parity::Even)?
        .into_iter()
        .chain(f(&ctx.params, &orders[1..], Parity::Odd)?)
        .map(|r| r.energy)
        .collect();
    e.sort_by(f64::total_cmp);
    Ok(e)
}

fn max_gap(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn mathieu_cases(ctx: &Context, cases: &mut Vec<Case>) -> Result<(), CliError> {
    let grid = verify::periodic_grid(256);
    for &q in &[0.1, 1.0, 5.0] {
        for &nu in &[0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0] {
            for parity in [Parity::Even, Parity::Odd] {
                if parity == Parity::Odd && nu == 0.0 {
                    continue;
                }
                let sol = mathieu::solve(nu, q, parity)?;
                let rep = verify::mathieu_residual(&sol, &grid);
                cases.push(Case::from_report("mathieu", format!("{} nu={nu} q={q}", parity.label()), "x", rep));
            }
        }
        let (even, odd) = verify::fd_richardson_by_parity(|x| 2.0 * q * (2.0 * x).cos(), FD_NODES, 6)?;
        let mut gap = 0.0f64;
        for n in 0..=5u32 {
            gap = gap.max((mathieu::characteristic_value(n as f64, q)? - even[n as usize]).abs());
            if n >= 1 {
                let b = mathieu::characteristic_value_with(n as f64, q, Parity::Odd)?;
                gap = gap.max((b - odd[n as usize - 1]).abs());
            }
        }
        cases.push(Case::scalar("mathieu", format!("fd-oracle q={q}"), gap, FD_TOL));
    }
    // spectra of the active parameters against their own angular equations
    let off = sorted_energies(ctx, mathieu::offplane_spectrum_with, 4)?;
    let off_fd = verify::offplane_fd_energies(&ctx.params, FD_NODES, 4)?;
    cases.push(Case::scalar("mathieu", "offplane-fd lowest 4".into(), max_gap(&off, &off_fd), FD_TOL));
    let inp = sorted_energies(ctx, mathieu::inplane_spectrum_with, 4)?;
    let inp_fd = verify::inplane_fd_energies(&ctx.params, FD_NODES, 4)?;
    cases.push(Case::scalar("mathieu", "inplane-fd lowest 4".into(), max_gap(&inp, &inp_fd), FD_TOL));
    Ok(())
}

fn nlsm_cases(ctx: &Context, cases: &mut Vec<Case>) -> Result<(), CliError> {
    let seed = ctx.seed.unwrap_or(BetheOptions::default().seed);
    cases.push(Case::scalar("nlsm", "analytic 100 samples".into(), verify::nlsm_equivalence(100, seed)?, 1e-8));
    let fd = verify::nlsm_equivalence_fd(100, seed, 1e-5)?;
    cases.push(Case::scalar("nlsm", "finite-difference 100 samples".into(), fd, 1e-6));
    Ok(())
}

fn file_stem(c: &Case) -> String {
    let raw = format!("{}_{}", c.suite, c.name);
    raw.chars().map(|ch| if ch.is_ascii_alphanumeric() || ch == '.' || ch == '-' { ch } else { '_' }).collect()
}

fn write_profiles(dir: &Path, cases: &[Case]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_at(dir, e))?;
    for c in cases {
        let Some((axis, grid, res)) = &c.profile else { continue };
        let path = dir.join(format!("{}.csv", file_stem(c)));
        let mut t = Table::new(&[axis, "residual"]);
        for (x, r) in grid.iter().zip(res) {
            t.push(vec![(*x).into(), (*r).into()]);
        }
        let mut w = BufWriter::new(File::create(&path).map_err(|e| io_at(&path, e))?);
        t.write(Format::Csv, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn verify_cmd(a: &VerifyArgs, ctx: &Context) -> Result<(), CliError> {
    let mut cases = Vec::new();
    if matches!(a.suite, Suite::Radial | Suite::All) {
        radial_cases(a, ctx, &mut cases)?;
    }
    if matches!(a.suite, Suite::Mathieu | Suite::All) {
        mathieu_cases(ctx, &mut cases)?;
    }
    if matches!(a.suite, Suite::Nlsm | Suite::All) {
        nlsm_cases(ctx, &mut cases)?;
    }
    if let Some(dir) = &a.residual_dir {
        write_profiles(dir, &cases)?;
    }

    let table = if a.profile {
        let mut t = Table::new(&["suite", "case", "x", "residual"]);
        for c in &cases {
            if let Some((_, grid, res)) = &c.profile {
                for (x, r) in grid.iter().zip(res) {
                    t.push(vec![c.suite.into(), c.name.clone().into(), (*x).into(), (*r).into()]);
                }
            }
        }
        t
    } else {
        let mut t = Table::new(&["suite", "case", "max_rel", "tolerance", "passed"]);
        for c in &cases {
            t.push(vec![c.suite.into(), c.name.clone().into(), c.max_rel.into(), c.tolerance.into(), c.passed().into()]);
        }
        t
    };
    ctx.emit(&table)?;

    let failed = cases.iter().filter(|c| !c.passed()).count();
    if failed > 0 {
        return Err(CliError::Verification { failed });
    }
    Ok(())
}
