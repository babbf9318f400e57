use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_adaptmul"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("adaptmul-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("binary runs");
    assert!(
        out.status.success(),
        "failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn gen(family: &str, seed: u64, repr: &str) -> Vec<u8> {
    run(bin().args(["gen", "--family", family, "--seed", &seed.to_string(), "--repr", repr, "--degree", "300"])).stdout
}

fn exponents(file: &[u8]) -> Vec<u64> {
    String::from_utf8_lossy(file)
        .lines()
        .filter_map(|l| l.strip_prefix("term "))
        .map(|l| l.split_whitespace().nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn gen_is_deterministic() {
    assert_eq!(gen("random-sparse:t=30", 5, "sparse"), gen("random-sparse:t=30", 5, "sparse"));
    assert_ne!(gen("random-sparse:t=30", 5, "sparse"), gen("random-sparse:t=30", 6, "sparse"));
}

#[test]
fn gen_spaced_and_single_term() {
    let exps = exponents(&gen("spaced:k=10,core=5,noise=0", 1, "sparse"));
    assert_eq!(exps.len(), 5);
    assert!(exps.iter().all(|e| e % 10 == exps[0] % 10));
    assert_eq!(exponents(&gen("random-sparse:t=1", 3, "sparse")).len(), 1);
}

#[test]
fn auto_matches_dense_byte_for_byte() {
    let a = scratch("auto-a.poly");
    let b = scratch("auto-b.poly");
    fs::write(&a, gen("combined:chunks=3,len=6,gap=40,k=3,noise=2", 1, "dense")).unwrap();
    fs::write(&b, gen("chunky:chunks=2,len=5,gap=30", 2, "dense")).unwrap();
    let mul = |algo: &str| {
        run(bin().args(["mul", a.to_str().unwrap(), b.to_str().unwrap(), "--algo", algo, "--model", "karatsuba"])).stdout
    };
    let dense = mul("dense");
    for algo in ["auto", "sparse", "chunky", "eqspace", "combined"] {
        assert_eq!(mul(algo), dense, "{algo}");
    }
}

#[test]
fn multiplying_by_one_echoes_input() {
    let a = scratch("echo-a.poly");
    let one = scratch("echo-one.poly");
    let input = gen("random-sparse:t=12", 9, "sparse");
    fs::write(&a, &input).unwrap();
    fs::write(&one, "poly v1 mod 9973\nterm 1 0\n").unwrap();
    let out = run(bin().args(["mul", a.to_str().unwrap(), one.to_str().unwrap()])).stdout;
    assert_eq!(out, input);
}

#[test]
fn stats_record_is_written() {
    let a = scratch("stats-a.poly");
    let s = scratch("stats.txt");
    fs::write(&a, "poly v1 mod 97\nterm 1 0\nterm 1 100\n").unwrap();
    run(bin().args(["mul", a.to_str().unwrap(), a.to_str().unwrap(), "--stats", s.to_str().unwrap()]));
    let rec = fs::read_to_string(&s).unwrap();
    assert!(rec.starts_with("requested=auto strategy=sparse "), "{rec}");
    assert_eq!(rec.lines().count(), 1);
}

#[test]
fn error_exit_codes() {
    let a = scratch("err-a.poly");
    let b = scratch("err-b.poly");
    let bad = scratch("err-bad.poly");
    fs::write(&a, "poly v1 mod 97\ndense 1 2 3\n").unwrap();
    fs::write(&b, "poly v1 mod 101\ndense 1 2\n").unwrap();
    fs::write(&bad, "poly v1 mod 97\nterm 1\n").unwrap();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    let (a, b, bad) = (a.to_str().unwrap(), b.to_str().unwrap(), bad.to_str().unwrap());
    assert_eq!(code(&["mul", a, b]), Some(3));
    assert_eq!(code(&["mul", a, bad]), Some(2));
    assert_eq!(code(&["mul", a, a, "--algo", "dense", "--cap", "3"]), Some(4));
}

#[test]
fn bench_table() {
    let m = scratch("matrix.txt");
    fs::write(
        &m,
        "# name family options\n\
         tiny random-sparse:t=1 degree=0 seed=4\n\
         gaps chunky:chunks=6,len=10,gap=2000 algos=dense,chunky,auto\n",
    )
    .unwrap();
    let table = |model: &str| {
        let out = run(bin().args(["bench", m.to_str().unwrap(), "--model", model])).stdout;
        String::from_utf8(out).unwrap()
    };
    let t = table("schoolbook");
    let rows: Vec<Vec<&str>> = t.lines().map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows[0], ["instance", "strategy", "model_cost", "mul_count", "add_count", "wall_ns"]);
    assert_eq!(rows.len(), 1 + 6 + 3);
    for r in rows.iter().filter(|r| r[0] == "tiny") {
        assert_eq!(r[3], "1", "{r:?}");
    }
    let count = |name: &str| rows.iter().find(|r| r[1] == name && r[0] == "gaps").unwrap()[3].parse::<u64>().unwrap();
    assert!(count("chunky") <= count("dense"));

    let strip = |s: &str| s.lines().map(|l| l.rsplit_once('\t').unwrap().0.to_string()).collect::<Vec<_>>();
    assert_eq!(strip(&t), strip(&table("schoolbook")));
}
