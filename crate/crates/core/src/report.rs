//! Classification reports and the random-batch benchmark.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use crate::equiv::{classify, Algorithm, Classification, EquivOptions, Geometry};
use crate::error::Result;
use crate::gfield::Field;
use crate::lincode::random_codes;

/// First 16 hex digits of the SHA-256 of a canonical key.
pub fn key_digest(key: &str) -> String {
    let d = Sha256::digest(key.as_bytes());
    d.iter().take(8).map(|b| format!("{:02x}", b)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportClass {
    /// 1-based.
    pub representative: usize,
    /// 1-based.
    pub members: Vec<usize>,
    pub digest: String,
}

#[derive(Debug, Clone)]
pub struct ClassReport {
    pub algorithm: Algorithm,
    pub total: usize,
    pub classes: Vec<ReportClass>,
    /// 1-based index and message.
    pub failures: Vec<(usize, String)>,
    pub elapsed: Duration,
}

impl ClassReport {
    pub fn new(algorithm: Algorithm, total: usize, c: &Classification, elapsed: Duration) -> ClassReport {
        ClassReport {
            algorithm,
            total,
            classes: c
                .classes
                .iter()
                .map(|cl| ReportClass {
                    representative: cl.representative + 1,
                    members: cl.members.iter().map(|i| i + 1).collect(),
                    digest: key_digest(&cl.key),
                })
                .collect(),
            failures: c.failures.iter().map(|(i, e)| (i + 1, e.to_string())).collect(),
            elapsed,
        }
    }

    /// Report body without the timing line.
    pub fn body(&self) -> String {
        let mut s = String::new();
        for (i, c) in self.classes.iter().enumerate() {
            let members: Vec<String> = c.members.iter().map(|m| m.to_string()).collect();
            writeln!(s, "class {} rep {} key {} members {}", i + 1, c.representative, c.digest, members.join(",")).unwrap();
        }
        for (i, msg) in &self.failures {
            writeln!(s, "failed {}: {}", i, msg).unwrap();
        }
        writeln!(s, "codes {} classes {} failed {}", self.total, self.classes.len(), self.failures.len()).unwrap();
        s
    }

    /// Digest of [`ClassReport::body`]; identical for identical inputs.
    pub fn digest(&self) -> String {
        key_digest(&self.body())
    }

    pub fn render(&self) -> String {
        format!(
            "{}digest {}\nelapsed {:.3}s\n",
            self.body(),
            self.digest(),
            self.elapsed.as_secs_f64()
        )
    }
}

/// Classifies and times one batch.
pub fn classify_report(
    batch: &[crate::lincode::GeneratorMatrix],
    algorithm: Algorithm,
    geom: &Geometry,
    opts: &EquivOptions,
    jobs: usize,
) -> Result<ClassReport> {
    let start = Instant::now();
    let c = classify(batch, algorithm, geom, opts, jobs)?;
    Ok(ClassReport::new(algorithm, batch.len(), &c, start.elapsed()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchSpec {
    pub q: u64,
    pub k: usize,
    pub n: usize,
    pub count: usize,
    pub projective: bool,
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub spec: BenchSpec,
    pub cesimpg_classes: usize,
    pub ceimpg_classes: usize,
    pub cesimpg_time: Duration,
    pub ceimpg_time: Duration,
    pub failures: usize,
}

/// Generates `count` seeded random codes and classifies them with both
/// algorithms.
pub fn bench_row(spec: BenchSpec, seed: u64, opts: &EquivOptions, jobs: usize) -> Result<BenchRow> {
    let field = Field::new(spec.q)?;
    let geom = Geometry::new(&field, spec.k)?;
    let batch = random_codes(geom.table(), spec.n, spec.count, seed, spec.projective)?;
    let ces = classify_report(&batch, Algorithm::Cesimpg, &geom, opts, jobs)?;
    let cei = classify_report(&batch, Algorithm::Ceimpg, &geom, opts, jobs)?;
    Ok(BenchRow {
        spec,
        cesimpg_classes: ces.classes.len(),
        ceimpg_classes: cei.classes.len(),
        cesimpg_time: ces.elapsed,
        ceimpg_time: cei.elapsed,
        failures: ces.failures.len() + cei.failures.len(),
    })
}

pub fn render_bench(rows: &[BenchRow]) -> String {
    let mut s = String::from("q\tn\tk\tgenerated\tinequivalent\tcesimpg_s\tceimpg_s\tceimpg_classes\n");
    for r in rows {
        writeln!(
            s,
            "{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{}",
            r.spec.q,
            r.spec.n,
            r.spec.k,
            r.spec.count,
            r.cesimpg_classes,
            r.cesimpg_time.as_secs_f64(),
            r.ceimpg_time.as_secs_f64(),
            r.ceimpg_classes
        )
        .unwrap();
    }
    s
}
