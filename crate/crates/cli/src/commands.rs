use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use slabclique::ball::{max_clique_balls_with, BallInstance, PlaneKind};
use slabclique::cobipartite::{guess_count_estimate, SolveOptions, SolveReport};
use slabclique::gen::{self, GenKind, GenParams};
use slabclique::geom::{Ball, Disk};
use slabclique::io::{digest_hex, disks_digest, verify_ball_clique, verify_disk_clique, InstanceFile, ResultFile};
use slabclique::kradii::{max_clique_kradii_with, DiskInstance};
use slabclique::range::{self, Rect, UnitInstance};
use slabclique::{oracle, Error, Scalar};

use crate::{Algo, Kind, Mode, SolveArgs, Suite};

/// Slab algorithm and oracle disagree.
#[derive(Debug)]
pub struct Mismatch {
    pub slab: usize,
    pub oracle: usize,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "oracle mismatch: slab algorithm found {}, oracle found {}", self.slab, self.oracle)
    }
}

impl std::error::Error for Mismatch {}

fn read_instance(path: &Path) -> anyhow::Result<InstanceFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(InstanceFile::parse(&text)?)
}

fn scalar(s: &str) -> anyhow::Result<Scalar> {
    Ok(s.parse::<Scalar>()?)
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn kind_of(mode: Mode) -> PlaneKind {
    match mode {
        Mode::Parallel => PlaneKind::Parallel,
        Mode::Perp => PlaneKind::Perp,
    }
}

fn options(budget: u128) -> SolveOptions {
    SolveOptions { budget: (budget > 0).then_some(budget) }
}

#[allow(clippy::too_many_arguments)]
pub fn gen(
    kind: Kind,
    n: usize,
    k: usize,
    planes: usize,
    plane_kind: Mode,
    seed: u64,
    bbox: &str,
    radii: &[String],
    out: Option<&Path>,
) -> anyhow::Result<()> {
    let kind = match kind {
        Kind::Disks => GenKind::Disks,
        Kind::UnitDisks => GenKind::UnitDisks,
        Kind::Balls => GenKind::Balls(kind_of(plane_kind)),
    };
    let params = GenParams {
        kind,
        n,
        k,
        planes,
        seed,
        bbox: scalar(bbox)?,
        radii: radii.iter().map(|r| scalar(r)).collect::<anyhow::Result<_>>()?,
    };
    let json = gen::generate(&params)?.to_json();
    match out {
        Some(path) => std::fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(())
}

fn emit(result: &ResultFile, json: bool) -> anyhow::Result<()> {
    if json {
        println!("{}", serde_json::to_string_pretty(result)?);
        return Ok(());
    }
    println!("size {}", result.size);
    println!("clique {}", result.clique.join(" "));
    println!("algorithm {} ({:.3} ms)", result.algorithm, result.elapsed_ms);
    if let Some(t) = &result.timings_ms {
        for (name, ms) in t {
            println!("  {name} {ms:.3} ms");
        }
    }
    println!("instance {}", result.instance_digest);
    Ok(())
}

/// Runs the requested algorithms and folds them into one result.
fn solve(
    algo: Algo,
    check: bool,
    digest: u64,
    slab: impl FnOnce() -> anyhow::Result<ResultFile>,
    brute: impl FnOnce() -> anyhow::Result<Vec<String>>,
) -> anyhow::Result<ResultFile> {
    let slab_result = if algo != Algo::Oracle { Some(slab()?) } else { None };
    let oracle_result = if algo != Algo::Slab || check {
        let start = Instant::now();
        let ids = brute()?;
        Some((ids, millis(start)))
    } else {
        None
    };
    match (slab_result, oracle_result) {
        (Some(s), None) => Ok(s),
        (None, Some((ids, ms))) => Ok(ResultFile {
            size: ids.len(),
            clique: ids,
            algorithm: "oracle".into(),
            witness_guess: None,
            elapsed_ms: ms,
            instance_digest: digest_hex(digest),
            timings_ms: None,
        }),
        (Some(mut s), Some((ids, ms))) => {
            if s.size != ids.len() {
                return Err(Mismatch { slab: s.size, oracle: ids.len() }.into());
            }
            let timings = BTreeMap::from([("slab".to_owned(), s.elapsed_ms), ("oracle".to_owned(), ms)]);
            s.algorithm = "slab+oracle".into();
            s.elapsed_ms += ms;
            s.timings_ms = Some(timings);
            Ok(s)
        }
        (None, None) => unreachable!("at least one algorithm runs"),
    }
}

pub fn clique(args: &SolveArgs) -> anyhow::Result<()> {
    let file = read_instance(&args.file)?;
    let disks = file.disks()?;
    let digest = file.digest();
    let result = solve(
        args.algo,
        args.check,
        digest,
        || {
            let start = Instant::now();
            let inst = DiskInstance::new(disks.clone())?;
            let report = max_clique_kradii_with(&inst, &options(args.budget))?;
            log_report(&report);
            verify_disk_clique(&disks, &report.result.ids)?;
            Ok(ResultFile::from_clique(&inst, &report.result, "slab", millis(start), digest))
        },
        || {
            let ids = oracle::max_clique_disks(&disks)?;
            verify_disk_clique(&disks, &ids)?;
            Ok(ids)
        },
    )?;
    emit(&result, args.json)
}

fn log_report(report: &SolveReport) {
    log::info!("guesses: {} estimated, {} solved", report.guesses_estimated, report.guesses_solved);
}

pub fn ball(mode: Mode, args: &SolveArgs) -> anyhow::Result<()> {
    let file = read_instance(&args.file)?;
    let inst = file.ball_instance()?;
    if inst.kind() != kind_of(mode) {
        let name = |k: PlaneKind| if k == PlaneKind::Parallel { "parallel" } else { "perp" };
        return Err(Error::Invalid(format!(
            "--mode {} does not match the file's {} planes",
            name(kind_of(mode)),
            name(inst.kind())
        ))
        .into());
    }
    let digest = file.digest();
    let balls: &[Ball] = inst.balls();
    let result = solve(
        args.algo,
        args.check,
        digest,
        || {
            let start = Instant::now();
            let report = max_clique_balls_with(&inst, &options(args.budget))?;
            log_report(&report);
            verify_ball_clique(balls, &report.result.ids)?;
            Ok(ResultFile::from_clique(&inst, &report.result, "slab", millis(start), digest))
        },
        || {
            let ids = oracle::max_clique_balls(balls)?;
            verify_ball_clique(balls, &ids)?;
            Ok(ids)
        },
    )?;
    emit(&result, args.json)
}

fn unit_disks(path: &Path, perturb: bool) -> anyhow::Result<Vec<Disk>> {
    let disks = read_instance(path)?.disks()?;
    if !perturb {
        return Ok(disks);
    }
    let (moved, changed) = range::perturb(&disks);
    if changed {
        log::warn!("coordinates perturbed into general position; sizes may differ only for exactly tangent pairs");
    }
    Ok(moved)
}

pub fn range_build(path: &Path, out: &Path, perturb: bool, max_n: usize) -> anyhow::Result<()> {
    let disks = unit_disks(path, perturb)?;
    let digest = disks_digest(&disks);
    let inst = UnitInstance::with_cap(disks, max_n)?;
    let start = Instant::now();
    let tables = range::build_tables(&inst)?;
    let ms = millis(start);
    let mut w = BufWriter::new(File::create(out).with_context(|| format!("creating {}", out.display()))?);
    range::write_tables(&mut w, &inst, &tables, digest)?;
    w.flush()?;
    println!("tables for {} disks built in {ms:.3} ms, written to {}", inst.len(), out.display());
    println!("instance {}", digest_hex(digest));
    Ok(())
}

pub fn range_query(
    path: &Path,
    tables: &Path,
    rect: &[String],
    perturb: bool,
    max_n: usize,
    json: bool,
) -> anyhow::Result<()> {
    let [x1, y1, x2, y2] = rect else {
        return Err(Error::Parse("--rect takes four numbers".into()).into());
    };
    let rect = Rect::new(scalar(x1)?, scalar(y1)?, scalar(x2)?, scalar(y2)?)?;
    let disks = unit_disks(path, perturb)?;
    let digest = disks_digest(&disks);
    let inst = UnitInstance::with_cap(disks, max_n)?;
    let mut r = BufReader::new(File::open(tables).with_context(|| format!("opening {}", tables.display()))?);
    let table = range::read_tables(&mut r)?;
    table.check_instance(&inst, digest)?;
    let start = Instant::now();
    let answer = range::query_rect(&inst, &table.m, &rect)?;
    let ms = millis(start);
    verify_disk_clique(inst.disks(), &answer.ids)?;
    if !answer.ids.iter().all(|id| inst.disks().iter().any(|d| &d.id == id && rect.contains(&d.center))) {
        return Err(Error::Internal("witness leaves the query rectangle".into()).into());
    }
    let result = ResultFile {
        size: answer.size,
        clique: answer.ids,
        algorithm: "range-table".into(),
        witness_guess: None,
        elapsed_ms: ms,
        instance_digest: digest_hex(digest),
        timings_ms: None,
    };
    emit(&result, json)
}

/// One CSV row per (k, n, seed, algorithm).
#[allow(clippy::too_many_arguments)]
pub fn bench(
    suite: Suite,
    seeds: &[u64],
    sizes: &[usize],
    ks: &[usize],
    planes: usize,
    algo: Algo,
    bbox: &str,
) -> anyhow::Result<()> {
    let bbox = scalar(bbox)?;
    let radii = gen::default_radii();
    let out = std::io::stdout();
    let mut out = out.lock();
    writeln!(out, "n,k,r,algo,guesses,elapsed_ms,size")?;
    for &k in ks {
        for &n in sizes {
            for &seed in seeds {
                let rows = match suite {
                    Suite::Disks | Suite::UnitDisks => {
                        let disks = if suite == Suite::Disks {
                            gen::gen_disks(n, k, seed, &bbox, &radii)?
                        } else {
                            gen::gen_unit_disks(n, seed, &bbox, &radii[0])?
                        };
                        let inst = DiskInstance::new(disks.clone())?;
                        bench_rows(
                            algo,
                            guess_count_estimate(&inst),
                            || Ok(max_clique_kradii_with(&inst, &SolveOptions::default())?.result.size),
                            || Ok(oracle::max_clique_disks(&disks)?.len()),
                        )?
                    }
                    Suite::BallsParallel | Suite::BallsPerp => {
                        let kind = if suite == Suite::BallsParallel { PlaneKind::Parallel } else { PlaneKind::Perp };
                        let (pl, balls) = gen::gen_balls(kind, planes, k, n, seed, &bbox, &radii)?;
                        let inst = BallInstance::new(pl, balls)?;
                        bench_rows(
                            algo,
                            guess_count_estimate(&inst),
                            || Ok(max_clique_balls_with(&inst, &SolveOptions::default())?.result.size),
                            || Ok(oracle::max_clique_balls(inst.balls())?.len()),
                        )?
                    }
                };
                let r = if matches!(suite, Suite::Disks | Suite::UnitDisks) { 1 } else { planes };
                let k_col = if suite == Suite::UnitDisks { 1 } else { k };
                for (name, guesses, ms, size) in rows {
                    writeln!(out, "{n},{k_col},{r},{name},{guesses},{ms:.3},{size}")?;
                }
            }
        }
    }
    Ok(())
}

type Row = (&'static str, u128, f64, usize);

fn bench_rows(
    algo: Algo,
    guesses: u128,
    slab: impl FnOnce() -> anyhow::Result<usize>,
    brute: impl FnOnce() -> anyhow::Result<usize>,
) -> anyhow::Result<Vec<Row>> {
    let mut rows = Vec::new();
    if algo != Algo::Oracle {
        let start = Instant::now();
        let size = slab()?;
        rows.push(("slab", guesses, millis(start).max(1e-3), size));
    }
    if algo != Algo::Slab {
        let start = Instant::now();
        let size = brute()?;
        rows.push(("oracle", 0, millis(start).max(1e-3), size));
    }
    if let [a, b] = rows.as_slice() {
        if a.3 != b.3 {
            return Err(Mismatch { slab: a.3, oracle: b.3 }.into());
        }
    }
    Ok(rows)
}
