//! Command-line interface: construct or load states, compute information
//! and work reports, minimize discord over bases, simulate the demon
//! engine, and sweep parametric families.
//!
//! Exit codes: 0 success, 1 validation error, 2 capability error,
//! 3 internal numerical failure.

use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qdiscord::basisopt::{min_discord, min_partial_discord, BasisParams, SearchStrategy};
use qdiscord::demon::{outcome_work_credits, quantum_demon_work, simulate_engine, work_report};
use qdiscord::infomeasures::info_report;
use qdiscord::states::{
    ket_plus, ket_zero, load_state, make_bell, make_classical_mixture, make_maximally_mixed,
    make_one_way, make_werner, save_state,
};
use qdiscord::{DensityMatrix, Error, MeasurementBasis, Subsystem};

/// k_B·ln2 in joules per kelvin per bit.
const JOULES_PER_BIT_KELVIN: f64 = 1.380649e-23 * std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "qdiscord",
    version,
    about = "Quantum-correlation measures and demon work extraction for bipartite states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Entropies, mutual informations, and discord at a fixed basis
    Info(InfoArgs),
    /// Discord at a basis, or minimized over bases
    Discord(DiscordArgs),
    /// Work ledger for classical and quantum demons
    Work(WorkArgs),
    /// Monte Carlo demon-engine run
    Simulate(SimulateArgs),
    /// Sweep a parametric state family, emitting one row per point
    Sweep(SweepArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Builtin state: bell, classical-mixture, werner, one-way,
    /// maximally-mixed, product
    #[arg(long, conflicts_with = "state_file")]
    state: Option<String>,

    /// Load a state document (JSON with d_s, d_a, matrix of [re, im])
    #[arg(long)]
    state_file: Option<PathBuf>,

    /// Mixing parameter for the werner builtin
    #[arg(long)]
    z: Option<f64>,

    /// System dimension for maximally-mixed
    #[arg(long, default_value_t = 2)]
    d_s: usize,

    /// Apparatus dimension for maximally-mixed
    #[arg(long, default_value_t = 2)]
    d_a: usize,
}

impl StateArgs {
    fn resolve(&self) -> Result<DensityMatrix, Error> {
        match (&self.state, &self.state_file) {
            (Some(name), None) => match name.as_str() {
                "bell" => Ok(make_bell()),
                "classical-mixture" => Ok(make_classical_mixture()),
                "werner" => {
                    let z = self
                        .z
                        .ok_or_else(|| Error::Validation("werner requires --z in [0, 1]".into()))?;
                    make_werner(z)
                }
                "one-way" => make_one_way(&ket_zero(), &ket_plus()),
                "maximally-mixed" => make_maximally_mixed(self.d_s, self.d_a),
                "product" => {
                    let m = ket_zero().matrix().tensor(ket_zero().matrix())?;
                    DensityMatrix::new(m, 2, 2)
                }
                other => Err(Error::Validation(format!(
                    "unknown builtin state '{other}' (expected bell, classical-mixture, \
                     werner, one-way, maximally-mixed, product)"
                ))),
            },
            (None, Some(path)) => load_state(path),
            _ => Err(Error::Validation(
                "exactly one state source required: --state or --state-file".into(),
            )),
        }
    }
}

#[derive(Args)]
struct BasisArgs {
    /// Named basis: computational, hadamard, circular
    #[arg(long, conflicts_with_all = ["theta", "phi"])]
    basis: Option<String>,

    /// Bloch polar angle of the first basis vector (radians, with --phi)
    #[arg(long, requires = "phi")]
    theta: Option<f64>,

    /// Bloch azimuthal angle (radians, with --theta)
    #[arg(long, requires = "theta")]
    phi: Option<f64>,
}

impl BasisArgs {
    fn resolve(&self, d_a: usize) -> Result<MeasurementBasis, Error> {
        if let (Some(theta), Some(phi)) = (self.theta, self.phi) {
            return qdiscord::basisopt::realize_basis(&BasisParams::Qubit { theta, phi }, d_a);
        }
        let name = self.basis.as_deref().unwrap_or("computational");
        match name {
            "computational" => Ok(MeasurementBasis::computational(d_a)),
            "hadamard" | "circular" => {
                if d_a != 2 {
                    return Err(Error::Dimension(format!(
                        "basis '{name}' is defined for dimension 2, apparatus has {d_a}"
                    )));
                }
                Ok(if name == "hadamard" {
                    MeasurementBasis::hadamard()
                } else {
                    MeasurementBasis::circular()
                })
            }
            other => Err(Error::Validation(format!(
                "unknown basis '{other}' (expected computational, hadamard, circular, \
                 or --theta/--phi)"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    A,
    S,
}

impl From<Side> for Subsystem {
    fn from(side: Side) -> Self {
        match side {
            Side::A => Subsystem::A,
            Side::S => Subsystem::S,
        }
    }
}

#[derive(Args)]
struct InfoArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Also report the measured-outcome marginal entropy and the discord
    /// variant that keeps the unmeasured H(A) in the bracket
    #[arg(long)]
    compare_ha: bool,
    /// Write the resolved input state to this path as a state document
    #[arg(long)]
    write_state: Option<PathBuf>,
}

#[derive(Args)]
struct DiscordArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Minimize over bases instead of using a fixed basis
    #[arg(long, conflicts_with_all = ["basis", "theta", "phi"])]
    optimize: bool,
    /// Which subsystem the demon measures
    #[arg(long, value_enum, ignore_case = true, default_value_t = Side::A)]
    side: Side,
    /// Minimize only the conditional entropy (the H(A) term stays at the
    /// unmeasured marginal)
    #[arg(long, requires = "optimize")]
    partial: bool,
    /// Report the two one-sided minimized discords and their difference
    #[arg(long, conflicts_with_all = ["optimize", "partial", "basis", "theta", "phi"])]
    polarization: bool,
}

#[derive(Args)]
struct WorkArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Evaluate at the discord-minimizing basis instead of a fixed one
    #[arg(long, conflicts_with_all = ["basis", "theta", "phi"])]
    optimize: bool,
    /// Which subsystem the classical demon measures
    #[arg(long, value_enum, ignore_case = true, default_value_t = Side::A)]
    side: Side,
    /// Heat-bath temperature in kelvin; adds joule values to the ledger
    #[arg(long)]
    temperature: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    state: StateArgs,
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Number of engine steps
    #[arg(long, default_value_t = 100_000)]
    steps: usize,
    /// Generator seed; identical seeds replay identical traces
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also DEFLATE the packed outcome record and report its size next
    /// to the ideal code length (comparison only)
    #[arg(long)]
    deflate_check: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// State family to sweep (werner)
    #[arg(long)]
    family: String,
    /// Name of the swept parameter (z for werner)
    #[arg(long, default_value = "z")]
    param: String,
    #[arg(long)]
    from: f64,
    #[arg(long)]
    to: f64,
    #[arg(long)]
    points: usize,
    /// Minimize discord at every point (columns: minimized measures and
    /// optimal-basis work); otherwise a fixed basis is used
    #[arg(long, conflicts_with_all = ["basis", "theta", "phi"])]
    optimize: bool,
    /// Which subsystem the demon measures when optimizing
    #[arg(long, value_enum, ignore_case = true, default_value_t = Side::A)]
    side: Side,
    #[command(flatten)]
    basis: BasisArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

/// One report cell: numbers are printed with 9 significant digits.
#[derive(Clone)]
enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_sig(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) => {
                let rounded: f64 = fmt_sig(*x).parse().expect("formatted float parses");
                serde_json::json!(rounded)
            }
            Cell::Int(n) => serde_json::json!(n),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Bool(b) => serde_json::json!(b),
        }
    }
}

/// %.9g-style formatting: 9 significant digits, fixed notation for
/// exponents in [-4, 9), scientific otherwise.
fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let exp: i32 = sci
        .split_once('e')
        .map(|(_, e)| e.parse().unwrap_or(0))
        .unwrap_or(0);
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

/// Writes the whole report at once; a closed pipe downstream is a
/// normal way for output to end, not an error.
fn write_out(text: &str) {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = lock.write_all(text.as_bytes()).and_then(|_| lock.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write output: {e}");
        std::process::exit(3);
    }
}

fn emit_record(format: Format, rows: &[(&str, Cell)]) {
    let mut out = String::new();
    match format {
        Format::Table => {
            let width = rows.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
            for (name, cell) in rows {
                out.push_str(&format!("{name:<width$}  {}\n", cell.render()));
            }
        }
        Format::Csv => {
            let header: Vec<&str> = rows.iter().map(|(n, _)| *n).collect();
            let values: Vec<String> = rows.iter().map(|(_, c)| c.render()).collect();
            out.push_str(&header.join(","));
            out.push('\n');
            out.push_str(&values.join(","));
            out.push('\n');
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (name, cell) in rows {
                map.insert((*name).to_string(), cell.to_json());
            }
            out.push_str(&serde_json::Value::Object(map).to_string());
            out.push('\n');
        }
    }
    write_out(&out);
}

fn emit_rows(format: Format, header: &[&str], rows: &[Vec<Cell>]) {
    let mut out = String::new();
    match format {
        Format::Table => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            let rendered: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(Cell::render).collect())
                .collect();
            for row in &rendered {
                for (w, cell) in widths.iter_mut().zip(row) {
                    *w = (*w).max(cell.len());
                }
            }
            let head: Vec<String> = header
                .iter()
                .zip(&widths)
                .map(|(h, w)| format!("{h:<w$}"))
                .collect();
            out.push_str(&head.join("  "));
            out.push('\n');
            for row in &rendered {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                out.push_str(&line.join("  "));
                out.push('\n');
            }
        }
        Format::Csv => {
            out.push_str(&header.join(","));
            out.push('\n');
            for row in rows {
                let line: Vec<String> = row.iter().map(Cell::render).collect();
                out.push_str(&line.join(","));
                out.push('\n');
            }
        }
        Format::Json => {
            let array: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    let mut map = serde_json::Map::new();
                    for (name, cell) in header.iter().zip(row) {
                        map.insert((*name).to_string(), cell.to_json());
                    }
                    serde_json::Value::Object(map)
                })
                .collect();
            out.push_str(&serde_json::Value::Array(array).to_string());
            out.push('\n');
        }
    }
    write_out(&out);
}

fn describe_params(params: &BasisParams, rows: &mut Vec<(&'static str, Cell)>) {
    match params {
        BasisParams::Qubit { theta, phi } => {
            rows.push(("theta", Cell::Num(*theta)));
            rows.push(("phi", Cell::Num(*phi)));
        }
        BasisParams::Givens(rotations) => {
            rows.push(("givens_rotations", Cell::Int(rotations.len() as u64)));
            rows.push((
                "givens_params",
                Cell::Text(
                    rotations
                        .iter()
                        .map(|r| {
                            format!(
                                "({},{}):{}:{}",
                                r.plane.0,
                                r.plane.1,
                                fmt_sig(r.angle),
                                fmt_sig(r.phase)
                            )
                        })
                        .collect::<Vec<_>>()
                        .join(";"),
                ),
            ));
        }
    }
}

fn strategy_label(strategy: SearchStrategy) -> &'static str {
    match strategy {
        SearchStrategy::GridRefine => "grid+refine",
        SearchStrategy::RandomRestart => "random-restart (upper bound, not certified minimum)",
    }
}

fn cmd_info(args: &InfoArgs) -> Result<(), Error> {
    let rho = args.state.resolve()?;
    if let Some(path) = &args.write_state {
        save_state(&rho, path)?;
    }
    let basis = args.basis.resolve(rho.d_a())?;
    let r = info_report(&rho, &basis)?;
    let mut rows: Vec<(&str, Cell)> = vec![
        ("h_s", Cell::Num(r.h_s)),
        ("h_a", Cell::Num(r.h_a)),
        ("h_sa", Cell::Num(r.h_sa)),
        ("h_s_given_a", Cell::Num(r.h_s_given_a)),
        ("h_measured_joint", Cell::Num(r.h_measured_joint)),
        ("i_mutual", Cell::Num(r.i_mutual)),
        ("j_asym", Cell::Num(r.j_asym)),
        ("discord", Cell::Num(r.discord)),
    ];
    if args.compare_ha {
        // The bracketed joint entropy admits two readings; report both
        // marginals so they can be compared directly.
        let h_a_measured = r.h_measured_joint - r.h_s_given_a;
        rows.push(("h_a_measured", Cell::Num(h_a_measured)));
        rows.push((
            "discord_unmeasured_ha",
            Cell::Num(r.h_a + r.h_s_given_a - r.h_sa),
        ));
    }
    emit_record(args.format, &rows);
    Ok(())
}

fn cmd_discord(args: &DiscordArgs) -> Result<(), Error> {
    let rho = args.state.resolve()?;
    if args.polarization {
        let towards_s = min_discord(&rho, Subsystem::A)?;
        let towards_a = min_discord(&rho, Subsystem::S)?;
        emit_record(
            args.format,
            &[
                ("polarization", Cell::Num(towards_s.value - towards_a.value)),
                ("min_discord_measuring_a", Cell::Num(towards_s.value)),
                ("min_discord_measuring_s", Cell::Num(towards_a.value)),
            ],
        );
        return Ok(());
    }
    if args.optimize {
        let side: Subsystem = args.side.into();
        let m = if args.partial {
            min_partial_discord(&rho, side)?
        } else {
            min_discord(&rho, side)?
        };
        let name = if args.partial {
            "min_partial_discord"
        } else {
            "min_discord"
        };
        let mut rows: Vec<(&str, Cell)> = vec![(name, Cell::Num(m.value))];
        describe_params(&m.argmin, &mut rows);
        rows.push(("evaluations", Cell::Int(m.evaluations as u64)));
        rows.push(("converged", Cell::Bool(m.converged)));
        rows.push(("search", Cell::Text(strategy_label(m.strategy).into())));
        emit_record(args.format, &rows);
        return Ok(());
    }
    let basis = args.basis.resolve(rho.d_a())?;
    let r = info_report(&rho, &basis)?;
    emit_record(
        args.format,
        &[
            ("discord", Cell::Num(r.discord)),
            ("h_measured_joint", Cell::Num(r.h_measured_joint)),
            ("h_sa", Cell::Num(r.h_sa)),
        ],
    );
    Ok(())
}

fn cmd_work(args: &WorkArgs) -> Result<(), Error> {
    let rho = args.state.resolve()?;
    let side: Subsystem = args.side.into();
    let oriented = match side {
        Subsystem::A => rho.clone(),
        Subsystem::S => rho.swap_sides(),
    };
    let basis = if args.optimize {
        let m = min_discord(&rho, side)?;
        m.realize(oriented.d_a())?
    } else {
        args.basis.resolve(oriented.d_a())?
    };
    let r = work_report(&oriented, &basis)?;
    let mut rows: Vec<(&str, Cell)> = vec![
        (
            "measured_side",
            Cell::Text(match side {
                Subsystem::A => "A".into(),
                Subsystem::S => "S".into(),
            }),
        ),
        ("w_plus", Cell::Num(r.w_plus)),
        ("w_minus", Cell::Num(r.w_minus)),
        ("delta_mu", Cell::Num(r.delta_mu)),
        ("w_naive", Cell::Num(r.naive_net_work())),
        ("w_classical", Cell::Num(r.w_classical)),
        ("w_quantum", Cell::Num(r.w_quantum)),
        ("delta_w", Cell::Num(r.delta_w)),
    ];
    if let Some(temperature) = args.temperature {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::Domain(format!(
                "temperature {temperature} must be positive"
            )));
        }
        let j = JOULES_PER_BIT_KELVIN * temperature;
        rows.push(("w_classical_joules", Cell::Num(r.w_classical * j)));
        rows.push(("w_quantum_joules", Cell::Num(r.w_quantum * j)));
        rows.push(("delta_w_joules", Cell::Num(r.delta_w * j)));
    }
    emit_record(args.format, &rows);
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Error> {
    let rho = args.state.resolve()?;
    let basis = args.basis.resolve(rho.d_a())?;
    let trace = simulate_engine(&rho, &basis, args.steps, args.seed)?;
    let credits = outcome_work_credits(&rho, &basis)?;
    let expected: f64 = credits.iter().map(|c| c.probability * c.work).sum();
    let mut rows: Vec<(&str, Cell)> = vec![
        ("steps", Cell::Int(trace.steps as u64)),
        ("seed", Cell::Int(trace.seed)),
        ("net_work_per_step", Cell::Num(trace.net_work_per_step)),
        ("expected_work_per_step", Cell::Num(expected)),
        (
            "ideal_code_bits_per_step",
            Cell::Num(trace.ideal_code_length / trace.steps as f64),
        ),
        ("quantum_bound", Cell::Num(quantum_demon_work(&rho).work)),
    ];
    if args.deflate_check {
        let packed = pack_outcomes(&trace.outcome_record, rho.d_a());
        let mut encoder = flate2::write::ZlibEncoder::new(Vec::new(), flate2::Compression::best());
        encoder
            .write_all(&packed)
            .and_then(|_| encoder.finish())
            .map(|compressed| {
                rows.push((
                    "deflate_bits_per_step",
                    Cell::Num(compressed.len() as f64 * 8.0 / trace.steps as f64),
                ));
            })
            .map_err(|e| Error::Numerical(format!("compressor failed: {e}")))?;
    }
    emit_record(args.format, &rows);
    Ok(())
}

/// Fixed-width bit packing of the outcome record (comparison input for
/// the general-purpose compressor).
fn pack_outcomes(record: &[usize], d_a: usize) -> Vec<u8> {
    let width = usize::BITS - (d_a.max(2) - 1).leading_zeros();
    let mut bytes = Vec::with_capacity((record.len() * width as usize).div_ceil(8));
    let mut acc: u32 = 0;
    let mut filled: u32 = 0;
    for &k in record {
        acc |= (k as u32) << filled;
        filled += width;
        while filled >= 8 {
            bytes.push((acc & 0xff) as u8);
            acc >>= 8;
            filled -= 8;
        }
    }
    if filled > 0 {
        bytes.push((acc & 0xff) as u8);
    }
    bytes
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Error> {
    if args.family != "werner" {
        return Err(Error::Validation(format!(
            "unknown sweep family '{}' (expected werner)",
            args.family
        )));
    }
    if args.param != "z" {
        return Err(Error::Validation(format!(
            "family werner sweeps parameter 'z', not '{}'",
            args.param
        )));
    }
    if args.points < 2 {
        return Err(Error::Validation("sweep needs at least 2 points".into()));
    }
    let grid: Vec<f64> = (0..args.points)
        .map(|i| args.from + (args.to - args.from) * i as f64 / (args.points - 1) as f64)
        .collect();

    let side: Subsystem = args.side.into();
    if args.optimize {
        let header = [
            "z",
            "h_sa",
            "min_discord",
            "min_partial_discord",
            "w_classical_opt",
            "w_quantum",
            "delta_w",
        ];
        let mut rows = Vec::with_capacity(grid.len());
        for &z in &grid {
            let rho = make_werner(z)?;
            let h_sa = qdiscord::infomeasures::von_neumann_entropy(&rho);
            let full = min_discord(&rho, side)?;
            let partial = min_partial_discord(&rho, side)?;
            let w_quantum = quantum_demon_work(&rho).work;
            let w_classical_opt = (rho.dim() as f64).log2() - (h_sa + full.value);
            rows.push(vec![
                Cell::Num(z),
                Cell::Num(h_sa),
                Cell::Num(full.value),
                Cell::Num(partial.value),
                Cell::Num(w_classical_opt),
                Cell::Num(w_quantum),
                Cell::Num(w_quantum - w_classical_opt),
            ]);
        }
        emit_rows(args.format, &header, &rows);
    } else {
        let header = [
            "z",
            "h_sa",
            "discord",
            "w_classical",
            "w_quantum",
            "delta_w",
        ];
        let mut rows = Vec::with_capacity(grid.len());
        for &z in &grid {
            let rho = make_werner(z)?;
            let basis = args.basis.resolve(rho.d_a())?;
            let discord = info_report(&rho, &basis)?.discord;
            let r = work_report(&rho, &basis)?;
            rows.push(vec![
                Cell::Num(z),
                Cell::Num(qdiscord::infomeasures::von_neumann_entropy(&rho)),
                Cell::Num(discord),
                Cell::Num(r.w_classical),
                Cell::Num(r.w_quantum),
                Cell::Num(r.delta_w),
            ]);
        }
        emit_rows(args.format, &header, &rows);
    }
    Ok(())
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Capability(_) => 2,
        Error::Numerical(_) => 3,
        _ => 1,
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is
            // a config validation failure.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match &cli.command {
        Command::Info(args) => cmd_info(args),
        Command::Discord(args) => cmd_discord(args),
        Command::Work(args) => cmd_work(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Sweep(args) => cmd_sweep(args),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_sig_nine_significant_digits() {
        assert_eq!(fmt_sig(0.0), "0");
        assert_eq!(fmt_sig(-0.0), "0");
        assert_eq!(fmt_sig(1.0), "1.00000000");
        assert_eq!(fmt_sig(0.5), "0.500000000");
        assert_eq!(fmt_sig(-0.5), "-0.500000000");
        assert_eq!(fmt_sig(2.0), "2.00000000");
        assert_eq!(fmt_sig(123456789.0), "123456789");
        assert_eq!(fmt_sig(0.013188643470), "0.0131886435");
        assert_eq!(fmt_sig(1e-5), "1.00000000e-5");
        assert_eq!(fmt_sig(3.203426503e-16), "3.20342650e-16");
        assert_eq!(fmt_sig(1.23456789012e9), "1.23456789e9");
    }

    #[test]
    fn fmt_sig_values_reparse() {
        for x in [0.0, 1.0, -0.25, 0.600876036693, 1e-12, 123456789.0] {
            let s = fmt_sig(x);
            let back: f64 = s.parse().unwrap();
            let err = (back - x).abs();
            assert!(err <= x.abs() * 1e-8, "{x} -> {s} -> {back}");
        }
    }

    #[test]
    fn pack_outcomes_bit_layout() {
        // d_a = 2: one bit per outcome, little-endian within bytes.
        assert_eq!(
            pack_outcomes(&[1, 0, 1, 1, 0, 0, 0, 1], 2),
            vec![0b1000_1101]
        );
        assert_eq!(pack_outcomes(&[1], 2), vec![0b0000_0001]);
        // d_a = 3: two bits per outcome.
        assert_eq!(pack_outcomes(&[0, 1, 2, 0], 3), vec![0b0010_0100]);
        // d_a = 5: three bits per outcome, spilling across bytes.
        assert_eq!(pack_outcomes(&[4, 4, 4], 5), vec![0b0010_0100, 0b0000_0001]);
    }
}
