use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pgequiv::bmcanon::CanonOptions;
use pgequiv::codefile::{emit_codes, parse_codes};
use pgequiv::equiv::{
    ceimpg_equiv, cesimpg_equiv, cesimpg_only, code_aut_group, verify_witness, Algorithm, EquivOptions,
    EquivalenceWitness, Geometry, Verdict,
};
use pgequiv::gfield::Field;
use pgequiv::gfmatrix::Matrix;
use pgequiv::lincode::{random_codes, GeneratorMatrix};
use pgequiv::projgeom::PointTable;
use pgequiv::report::{bench_row, classify_report, render_bench, BenchSpec};

/// Environment variable overriding the canonical-form node budget.
const BUDGET_ENV: &str = "PGEQUIV_NODE_BUDGET";

#[derive(Parser)]
#[command(name = "pgequiv", version, about = "Equivalence of linear codes via projective geometry incidence")]
struct Cli {
    /// Node budget of the canonical-form search (default 2000000, or $PGEQUIV_NODE_BUDGET)
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Keep rows of weight n in shortened matrices
    #[arg(long, global = true)]
    no_strip: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Ceimpg,
    Cesimpg,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// List the points of PG(k-1, q)
    Points {
        #[arg(short)]
        k: usize,
        #[arg(short)]
        q: u64,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Characteristic vector and minimum distance of each code
    Chi { file: Option<PathBuf> },
    /// Decide equivalence of the first codes of two files (exit 0 equivalent, 1 inequivalent, 2 error)
    Equiv {
        file1: PathBuf,
        file2: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        /// Do not print the witness
        #[arg(long)]
        quiet: bool,
    },
    /// Partition codes into equivalence classes
    Classify {
        /// Code file; omit to read standard input or with --random
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        /// Worker threads (0: one per core)
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Classify this many random codes instead of reading a file
        #[arg(long, requires_all = ["n", "k", "q"])]
        random: Option<usize>,
        #[arg(short)]
        n: Option<usize>,
        #[arg(short)]
        k: Option<usize>,
        #[arg(short)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        projective: bool,
    },
    /// Write random codes in the code file format
    Gen {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        k: usize,
        #[arg(short)]
        q: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        projective: bool,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Automorphism group of the first code in a file
    Autgroup { file: Option<PathBuf> },
    /// Classify random batches with both algorithms and tabulate the results
    Bench {
        /// Row as q,k,n,count; repeatable
        #[arg(long = "row", value_parser = parse_row)]
        rows: Vec<BenchSpec>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long)]
        projective: bool,
    },
}

fn parse_row(s: &str) -> Result<BenchSpec, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [q, k, n, count] = parts[..] else {
        return Err("expected q,k,n,count".into());
    };
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| format!("bad number {:?}", t));
    Ok(BenchSpec {
        q: num(q)?,
        k: num(k)? as usize,
        n: num(n)? as usize,
        count: num(count)? as usize,
        projective: false,
    })
}

fn options(cli: &Cli) -> Result<EquivOptions> {
    let mut opts = EquivOptions::default();
    let budget = match cli.budget {
        Some(b) => Some(b),
        None => match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(v.trim().parse().with_context(|| format!("{} must be an integer", BUDGET_ENV))?),
            Err(_) => None,
        },
    };
    if let Some(node_budget) = budget {
        opts.canon = CanonOptions { node_budget };
    }
    opts.strip_full_rows = !cli.no_strip;
    Ok(opts)
}

fn field(q: u64, modulus: Option<u64>) -> Result<std::sync::Arc<Field>> {
    Ok(match modulus {
        Some(m) => Field::with_modulus(q, m)?,
        None => Field::new(q)?,
    })
}

fn read_codes(path: Option<&PathBuf>) -> Result<Vec<GeneratorMatrix>> {
    let (name, text) = match path {
        Some(p) if p.as_os_str() != "-" => {
            (p.display().to_string(), std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)
        }
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s).context("reading standard input")?;
            ("<stdin>".to_string(), s)
        }
    };
    let codes = parse_codes(&text).with_context(|| name.clone())?;
    if codes.is_empty() {
        bail!("{}: no codes", name);
    }
    Ok(codes)
}

fn first_code(path: Option<&PathBuf>) -> Result<GeneratorMatrix> {
    Ok(read_codes(path)?.swap_remove(0))
}

fn tuple(v: &[u16]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn matrix_lines(out: &mut String, m: &Matrix) {
    for r in 0..m.rows() {
        let row: Vec<String> = m.row(r).iter().map(|x| x.to_string()).collect();
        writeln!(out, "  {}", row.join(" ")).unwrap();
    }
}

fn witness_text(w: &EquivalenceWitness, verified: bool) -> String {
    let mut s = String::new();
    let sigma: Vec<String> = w.sigma.iter().map(|x| (x + 1).to_string()).collect();
    let lambdas: Vec<String> = w.lambdas.iter().map(|x| x.to_string()).collect();
    writeln!(s, "sigma {}", sigma.join(" ")).unwrap();
    writeln!(s, "lambda {}", lambdas.join(" ")).unwrap();
    writeln!(s, "rho {}", w.rho).unwrap();
    writeln!(s, "Q").unwrap();
    matrix_lines(&mut s, &w.q);
    writeln!(s, "verified {}", if verified { "yes" } else { "no" }).unwrap();
    s
}

fn run(cli: Cli) -> Result<ExitCode> {
    let opts = options(&cli)?;
    let mut out = String::new();
    let mut code = ExitCode::SUCCESS;
    match &cli.command {
        Command::Points { k, q, modulus } => {
            let table = PointTable::new(&field(*q, *modulus)?, *k)?;
            for (i, p) in table.iter() {
                writeln!(out, "{}: {}", i, tuple(p)).unwrap();
            }
        }
        Command::Chi { file } => {
            for g in read_codes(file.as_ref())? {
                let geom = Geometry::for_code(&g)?;
                let chi = g.characteristic_vector(geom.table())?;
                let counts: Vec<String> = chi.counts().iter().map(|c| c.to_string()).collect();
                writeln!(out, "{}", counts.join(" ")).unwrap();
                match geom.incidence() {
                    Ok(n) => writeln!(out, "d {}", chi.min_distance(n)?).unwrap(),
                    Err(e) => eprintln!("minimum distance skipped: {}", e),
                }
            }
        }
        Command::Equiv {
            file1,
            file2,
            algo,
            quiet,
        } => {
            let g1 = first_code(Some(file1))?;
            let g2 = first_code(Some(file2))?;
            if g1.k() != g2.k() || g1.n() != g2.n() || **g1.field() != **g2.field() {
                writeln!(out, "inequivalent (parameters differ)").unwrap();
                print!("{}", out);
                return Ok(ExitCode::from(1));
            }
            let geom = Geometry::for_code(&g1)?;
            let verdict = match algo {
                Algo::Ceimpg => ceimpg_equiv(&g1, &g2, &geom, &opts)?,
                Algo::Auto => cesimpg_equiv(&g1, &g2, &geom, &opts)?,
                Algo::Cesimpg => cesimpg_only(&g1, &g2, &geom, &opts)?
                    .context("search limit reached without a conclusive answer; try --algo auto")?,
            };
            match &verdict {
                Verdict::Equivalent(w) => {
                    writeln!(out, "equivalent").unwrap();
                    let ok = verify_witness(&g1, &g2, w);
                    if !quiet {
                        out.push_str(&witness_text(w, ok));
                    }
                    if !ok {
                        bail!("witness failed verification");
                    }
                }
                Verdict::EquivalentByCeimpg { point_map } => {
                    writeln!(out, "equivalent (canonical forms agree)").unwrap();
                    if !quiet {
                        let pairs: Vec<String> = point_map.iter().map(|(a, b)| format!("{}->{}", a, b)).collect();
                        writeln!(out, "points {}", pairs.join(" ")).unwrap();
                    }
                }
                Verdict::Inequivalent => {
                    writeln!(out, "inequivalent").unwrap();
                    code = ExitCode::from(1);
                }
            }
        }
        Command::Classify {
            file,
            algo,
            jobs,
            random,
            n,
            k,
            q,
            seed,
            projective,
        } => {
            let batch = match random {
                Some(count) => {
                    let (n, k, q) = (n.unwrap(), k.unwrap(), q.unwrap());
                    let table = PointTable::new(&Field::new(q)?, k)?;
                    random_codes(&table, n, *count, *seed, *projective)?
                }
                None => read_codes(file.as_ref())?,
            };
            let geom = Geometry::for_code(&batch[0])?;
            let algorithm = match algo {
                Algo::Ceimpg => Algorithm::Ceimpg,
                Algo::Cesimpg | Algo::Auto => Algorithm::Cesimpg,
            };
            let report = classify_report(&batch, algorithm, &geom, &opts, *jobs)?;
            out.push_str(&report.render());
        }
        Command::Gen {
            n,
            k,
            q,
            count,
            seed,
            projective,
            modulus,
        } => {
            let table = PointTable::new(&field(*q, *modulus)?, *k)?;
            let codes = random_codes(&table, *n, *count, *seed, *projective)?;
            out.push_str(&emit_codes(&codes));
        }
        Command::Autgroup { file } => {
            let g = first_code(file.as_ref())?;
            let geom = Geometry::for_code(&g)?;
            let r = code_aut_group(&g, &geom, &opts)?;
            writeln!(out, "permutation group order {}", r.permutation_group_order).unwrap();
            writeln!(out, "scalar group order {}", r.scalar_group_order).unwrap();
            match &r.code_order {
                Some(o) => writeln!(out, "order {}", o).unwrap(),
                None if !g.field().is_prime_field() => {
                    writeln!(out, "order not computed (field automorphisms over GF({}))", g.field().q()).unwrap()
                }
                None => writeln!(out, "order not computed (some generators do not lift)").unwrap(),
            }
            for (i, gen) in r.generators.iter().enumerate() {
                let tau: Vec<String> = gen.tau.iter().map(|x| (x + 1).to_string()).collect();
                writeln!(out, "generator {}: tau {}", i + 1, tau.join(" ")).unwrap();
                match &gen.witness {
                    Some(w) => out.push_str(&witness_text(w, verify_witness(&g, &g, w))),
                    None => writeln!(out, "no monomial lift").unwrap(),
                }
            }
        }
        Command::Bench {
            rows,
            seed,
            jobs,
            projective,
        } => {
            let specs = if rows.is_empty() {
                vec![BenchSpec {
                    q: 3,
                    k: 3,
                    n: 10,
                    count: 1000,
                    projective: false,
                }]
            } else {
                rows.clone()
            };
            let start = Instant::now();
            let mut results = Vec::new();
            for mut spec in specs {
                spec.projective = *projective;
                let row = bench_row(spec, *seed, &opts, *jobs)?;
                if row.cesimpg_classes != row.ceimpg_classes {
                    eprintln!(
                        "warning: q={} k={} n={}: class counts differ ({} vs {})",
                        spec.q, spec.k, spec.n, row.cesimpg_classes, row.ceimpg_classes
                    );
                }
                results.push(row);
            }
            out.push_str(&render_bench(&results));
            eprintln!("total {:.3}s", start.elapsed().as_secs_f64());
        }
    }
    io::stdout().write_all(out.as_bytes()).context("writing output")?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::from(2)
        }
    }
}
