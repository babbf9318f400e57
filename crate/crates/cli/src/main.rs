use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use adaptmul::cost::{ModelKind, DEFAULT_CAP, DEFAULT_THRESHOLD};
use adaptmul::instance::{Family, InstanceSpec, Repr};
use adaptmul::poly::text;
use adaptmul::{explain, multiply, CostModel, Error, Ring, Strategy};

#[derive(Parser)]
#[command(name = "adaptmul", version, about = "Adaptive polynomial multiplication over prime fields")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random structured polynomial
    Gen(GenArgs),
    /// Multiply two polynomial files
    Mul(MulArgs),
    /// Run every strategy over a matrix of generated instances
    Bench(BenchArgs),
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, default_value = "karatsuba")]
    model: ModelKind,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: u64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

impl ModelArgs {
    fn build(&self) -> Result<CostModel, Error> {
        CostModel::new(self.model).with_threshold(self.threshold)?.with_cap(self.cap)
    }
}

#[derive(Args)]
struct GenArgs {
    /// e.g. random-dense, random-sparse:t=20, chunky:chunks=4,len=8,gap=100,
    /// spaced:k=10,core=5,noise=0, combined:chunks=2,len=5,gap=50,k=3,noise=1
    #[arg(long)]
    family: Family,
    #[arg(long, default_value_t = 64)]
    degree: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 9973)]
    modulus: u64,
    #[arg(long, default_value = "sparse")]
    repr: Repr,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MulArgs {
    a: PathBuf,
    b: PathBuf,
    #[arg(long, default_value = "auto")]
    algo: Strategy,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the report record to this file ("-" for stderr)
    #[arg(long)]
    stats: Option<String>,
    /// Print a readable summary of the report to stderr
    #[arg(long)]
    explain: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// One instance per line: `name family [degree=N] [seed=N] [modulus=P]
    /// [repr=dense|sparse] [algos=a,b,...]`
    matrix: PathBuf,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::ModulusMismatch(..) => 3,
        Error::Capacity(_) => 4,
        _ => 1,
    }
}

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn gen(args: &GenArgs) -> Result<(), Failure> {
    let spec = InstanceSpec {
        seed: args.seed,
        degree: args.degree,
        family: args.family,
        modulus: args.modulus,
        repr: args.repr,
    };
    let (field, poly) = spec.generate()?;
    emit(args.out.as_deref(), &text::serialize(&field, &poly))
}

fn mul(args: &MulArgs) -> Result<(), Failure> {
    let (fa, a) = text::parse(&read(&args.a)?)?;
    let (fb, b) = text::parse(&read(&args.b)?)?;
    if fa.modulus() != fb.modulus() {
        return Err(Error::ModulusMismatch(fa.modulus(), fb.modulus()).into());
    }
    let model = args.model.build()?;
    let (product, report) = multiply(&fa, &a, &b, args.algo, &model)?;
    emit(args.out.as_deref(), &text::serialize(&fa, &product))?;
    match args.stats.as_deref() {
        Some("-") => eprintln!("{}", report.render()),
        Some(path) => emit(Some(Path::new(path)), &format!("{}\n", report.render()))?,
        None => {}
    }
    if args.explain {
        eprint!("{}", explain(&report));
    }
    Ok(())
}

struct Row {
    name: String,
    spec: InstanceSpec,
    algos: Vec<Strategy>,
}

fn parse_matrix(src: &str) -> Result<Vec<Row>, Error> {
    let mut rows = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::Parse { line: i + 1, msg };
        let mut words = line.split_whitespace();
        let name = words.next().unwrap().to_string();
        let family: Family = words
            .next()
            .ok_or_else(|| bad("missing family".into()))?
            .parse()
            .map_err(|e: Error| bad(e.to_string()))?;
        let mut spec = InstanceSpec {
            seed: 1,
            degree: 64,
            family,
            modulus: 9973,
            repr: Repr::Sparse,
        };
        let mut algos = Strategy::ALL.to_vec();
        for w in words {
            let (k, v) = w.split_once('=').ok_or_else(|| bad(format!("expected key=value, got {w:?}")))?;
            let num = || v.parse::<u64>().map_err(|_| bad(format!("bad number {v:?}")));
            match k {
                "degree" => spec.degree = num()?,
                "seed" => spec.seed = num()?,
                "modulus" => spec.modulus = num()?,
                "repr" => spec.repr = v.parse().map_err(|e: Error| bad(e.to_string()))?,
                "algos" => {
                    algos = v
                        .split(',')
                        .map(|a| a.parse())
                        .collect::<Result<_, Error>>()
                        .map_err(|e| bad(e.to_string()))?
                }
                _ => return Err(bad(format!("unknown key {k:?}"))),
            }
        }
        rows.push(Row { name, spec, algos });
    }
    Ok(rows)
}

fn bench(args: &BenchArgs) -> Result<(), Failure> {
    let rows = parse_matrix(&read(&args.matrix)?)?;
    let model = args.model.build()?;
    let mut table = String::from("instance\tstrategy\tmodel_cost\tmul_count\tadd_count\twall_ns\n");
    for row in &rows {
        // the second operand uses the next seed
        let (field, f) = row.spec.generate()?;
        let (_, g) = InstanceSpec {
            seed: row.spec.seed.wrapping_add(1),
            ..row.spec
        }
        .generate()?;
        for &algo in &row.algos {
            let start = Instant::now();
            let (_, report) = multiply(&field, &f, &g, algo, &model)?;
            let wall = start.elapsed().as_nanos();
            let label = if algo == Strategy::Auto {
                format!("auto:{}", report.strategy)
            } else {
                algo.to_string()
            };
            table += &format!(
                "{}\t{label}\t{}\t{}\t{}\t{wall}\n",
                row.name,
                report.cost_of(report.strategy),
                report.mul_count,
                report.add_count
            );
        }
    }
    emit(args.out.as_deref(), &table)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Gen(a) => gen(a),
        Cmd::Mul(a) => mul(a),
        Cmd::Bench(a) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
