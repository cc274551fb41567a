//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with
//! `cargo test -p slabclique --test acceptance`; pass a substring of a
//! criterion name to run only matching criteria.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use slabclique::ball::{max_clique_balls_parallel, max_clique_balls_perp, BallInstance, PlaneKind};
use slabclique::cobipartite::{assemble_candidates, assert_side_clique, enumerate_guesses, GuessInstance};
use slabclique::gen::{default_radii, gen_balls, gen_disks, gen_unit_disks};
use slabclique::geom::{slab_bound_holds, slab_bound_holds_3d, Ball, Disk, Plane, Point2, Point3};
use slabclique::kradii::{max_clique_kradii, DiskInstance};
use slabclique::matching::{ConflictGraph, Part};
use slabclique::range::{build_tables, query_rect, Rect, UnitInstance};
use slabclique::{oracle, Scalar};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: usize, detail: String) -> Outcome {
    Outcome { pass: failures == 0, detail }
}

fn s(v: i64) -> Scalar {
    Scalar::from_int(v)
}

// ---------------------------------------------------------------- instances

fn kradii_instances() -> Vec<Vec<Disk>> {
    (0..240u64)
        .map(|i| {
            let k = 1 + (i % 3) as usize;
            let n = 4 + ((i / 3) % 11) as usize;
            let bbox = [4, 7, 10][((i / 33) % 3) as usize];
            gen_disks(n, k, 1000 + i, &s(bbox), &default_radii()).unwrap()
        })
        .collect()
}

fn parallel_instances() -> Vec<(Vec<Plane>, Vec<Ball>)> {
    (0..120u64)
        .map(|i| {
            let k = 1 + (i % 2) as usize;
            let n = 3 + (i % 8) as usize;
            let bbox = [3, 4, 6][((i / 8) % 3) as usize];
            gen_balls(PlaneKind::Parallel, 2, k, n, 2000 + i, &s(bbox), &default_radii()).unwrap()
        })
        .collect()
}

fn perp_instances() -> Vec<(Vec<Plane>, Vec<Ball>)> {
    (0..120u64)
        .map(|i| {
            let n = 3 + (i % 6) as usize;
            let bbox = [2, 3, 4][((i / 6) % 3) as usize];
            gen_balls(PlaneKind::Perp, 2, 1, n, 3000 + i, &s(bbox), &default_radii()).unwrap()
        })
        .collect()
}

fn unit_instance(i: u64) -> (UnitInstance, i64) {
    let n = 3 + (i % 10) as usize;
    let bbox = [2, 3, 4][(i % 3) as usize];
    let disks = gen_unit_disks(n, 5000 + i, &s(bbox), &Scalar::one()).unwrap();
    (UnitInstance::new(disks).unwrap(), bbox)
}

// ------------------------------------------------------------- criterion 1

/// A point of the closed upper slab of `ab`.
fn upper_slab_point(rng: &mut ChaCha8Rng, a: &Point2, b: &Point2) -> Point2 {
    let h = if rng.gen_bool(0.2) { Scalar::zero() } else { unit(rng, 97) * s(rng.gen_range(1..=20)) };
    if a.x == b.x {
        let top = a.y.clone().max(b.y.clone());
        return Point2::new(a.x.clone(), top + h);
    }
    let t = unit(rng, 89);
    let x = &a.x + &(&t * &(&b.x - &a.x));
    let y = &a.y + &(&t * &(&b.y - &a.y));
    Point2::new(x, y + h)
}

fn slab_config(rng: &mut ChaCha8Rng) -> (Point2, Point2, Point2, Point2) {
    let a = Point2::new(rat(rng, 20, 7), rat(rng, 20, 11));
    let b = match rng.gen_range(0..10) {
        0 => a.clone(),
        1 => Point2::new(a.x.clone(), rat(rng, 20, 13)),
        _ => Point2::new(rat(rng, 20, 7), rat(rng, 20, 11)),
    };
    let q = upper_slab_point(rng, &a, &b);
    let lift = if rng.gen_bool(0.2) { Scalar::zero() } else { unit(rng, 53) * s(rng.gen_range(1..=30)) };
    let p = Point2::new(rat(rng, 40, 9), &q.y + &lift);
    (a, b, q, p)
}

fn bound_by_hand(a: &[&Scalar], b: &[&Scalar], q: &[&Scalar], p: &[&Scalar]) -> bool {
    let d = |u: &[&Scalar], v: &[&Scalar]| u.iter().zip(v).fold(Scalar::zero(), |acc, (x, y)| acc + sq(&(*x - *y)));
    d(p, q) <= d(p, a).max(d(p, b))
}

fn planar_ok(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, q, p) = slab_config(&mut rng);
    let by_hand = bound_by_hand(&[&a.x, &a.y], &[&b.x, &b.y], &[&q.x, &q.y], &[&p.x, &p.y]);
    slab_bound_holds(&a, &b, &q, &p).ok() == Some(true) && by_hand
}

fn spatial_ok(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b, q, p) = slab_config(&mut rng);
    let z0 = rat(&mut rng, 10, 3);
    let lift = |u: &Point2| Point3::new(u.x.clone(), u.y.clone(), z0.clone());
    let (a3, b3, q3) = (lift(&a), lift(&b), lift(&q));
    let p3 = Point3::new(p.x.clone(), p.y.clone(), rat(&mut rng, 30, 7));
    let by_hand =
        bound_by_hand(&[&a3.x, &a3.y, &a3.z], &[&b3.x, &b3.y, &b3.z], &[&q3.x, &q3.y, &q3.z], &[&p3.x, &p3.y, &p3.z]);
    slab_bound_holds_3d(&a3, &b3, &q3, &p3).ok() == Some(true) && by_hand
}

fn criterion_1() -> Outcome {
    const RUNS: u64 = 100_000;
    let failures = (0..RUNS).into_par_iter().filter(|&i| !planar_ok(i)).count();
    let failures_3d = (0..RUNS).into_par_iter().filter(|&i| !spatial_ok(RUNS + i)).count();
    outcome(
        failures + failures_3d,
        format!("{RUNS} planar + {RUNS} spatial configurations, {failures} + {failures_3d} violations"),
    )
}

// ------------------------------------------------------------- criterion 2

fn criterion_2() -> Outcome {
    let instances = kradii_instances();
    let mut bad = Vec::new();
    for (i, disks) in instances.iter().enumerate() {
        let inst = DiskInstance::new(disks.clone()).unwrap();
        let got = max_clique_kradii(&inst).unwrap();
        let want = brute_disks(disks);
        let bk = oracle::max_clique_disks(disks).unwrap().len();
        if got.size != want || bk != want || got.ids.len() != got.size || !is_disk_clique(disks, &got.ids) {
            bad.push(format!("#{i}: slab {} brute {want} bk {bk}", got.size));
        }
    }
    let n = instances.len();
    outcome(bad.len(), format!("{n} instances (n 4..=14, k 1..=3), mismatches: {}", summary(&bad)))
}

fn summary(bad: &[String]) -> String {
    if bad.is_empty() {
        "none".into()
    } else {
        format!("{} [{}]", bad.len(), bad.iter().take(5).cloned().collect::<Vec<_>>().join("; "))
    }
}

// ------------------------------------------------------------- criterion 3

/// Checks every assembled side of every guess; returns (sides, violations).
fn side_checks<I: GuessInstance>(inst: &I, meet: impl Fn(usize, usize) -> bool) -> (usize, usize) {
    let (mut sides, mut violations) = (0, 0);
    for guess in enumerate_guesses(inst) {
        let c = assemble_candidates(inst, &guess).unwrap();
        for side in [&c.x, &c.y] {
            sides += 1;
            let by_hand = side.iter().enumerate().all(|(k, &u)| side[k + 1..].iter().all(|&v| meet(u, v)));
            if !by_hand || !assert_side_clique(inst, side) {
                violations += 1;
            }
        }
    }
    (sides, violations)
}

fn criterion_3() -> Outcome {
    let (mut sides, mut violations) = (0, 0);
    for disks in kradii_instances() {
        let inst = DiskInstance::new(disks).unwrap();
        let d = inst.disks();
        let (a, b) = side_checks(&inst, |u, v| meet2(&d[u], &d[v]));
        sides += a;
        violations += b;
    }
    for (planes, balls) in parallel_instances().into_iter().chain(perp_instances()) {
        let inst = BallInstance::new(planes, balls).unwrap();
        let bs = inst.balls();
        let (a, b) = side_checks(&inst, |u, v| meet3(&bs[u], &bs[v]));
        sides += a;
        violations += b;
    }
    outcome(violations, format!("{sides} assembled sides over disk and ball instances, {violations} violations"))
}

// ------------------------------------------------------------- criterion 4

fn random_rect(rng: &mut ChaCha8Rng, bbox: i64, disks: &[Disk]) -> (Scalar, Scalar, Scalar, Scalar) {
    let mut coord = |axis: usize| {
        if rng.gen_bool(0.25) {
            let d = &disks[rng.gen_range(0..disks.len())].center;
            if axis == 0 {
                d.x.clone()
            } else {
                d.y.clone()
            }
        } else {
            Scalar::ratio(rng.gen_range(-100..=(bbox + 1) * 100), 100)
        }
    };
    let (xa, xb, ya, yb) = (coord(0), coord(0), coord(1), coord(1));
    (xa.clone().min(xb.clone()), ya.clone().min(yb.clone()), xa.max(xb), ya.max(yb))
}

fn criterion_4() -> Outcome {
    let (mut entries, mut queries) = (0usize, 0usize);
    let mut bad = Vec::new();
    for i in 0..50u64 {
        let (inst, bbox) = unit_instance(i);
        let tables = build_tables(&inst).unwrap();
        let d = inst.disks();
        let n = d.len();
        let adj = masks(d, meet2);
        let mut ox: Vec<usize> = (0..n).collect();
        ox.sort_by(|&a, &b| d[a].center.x.cmp(&d[b].center.x));
        let mut oy: Vec<usize> = (0..n).collect();
        oy.sort_by(|&a, &b| d[a].center.y.cmp(&d[b].center.y));
        if ox != inst.by_x() || oy != inst.by_y() {
            bad.push(format!("instance {i}: sorted orders differ"));
            continue;
        }
        for l in 0..n {
            for r in 0..n {
                for t in 0..n {
                    for b in 0..n {
                        entries += 1;
                        let want = if l <= r && b <= t {
                            let (x1, x2) = (&d[ox[l]].center.x, &d[ox[r]].center.x);
                            let (y1, y2) = (&d[oy[b]].center.y, &d[oy[t]].center.y);
                            brute_rect(d, &adj, x1, y1, x2, y2)
                        } else {
                            0
                        };
                        if tables.m.get(l, r, t, b) as usize != want {
                            bad.push(format!(
                                "instance {i} M({l},{r},{t},{b}) = {} != {want}",
                                tables.m.get(l, r, t, b)
                            ));
                        }
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(40 + i);
        for _ in 0..1000 {
            queries += 1;
            let (x1, y1, x2, y2) = random_rect(&mut rng, bbox, d);
            let rect = Rect::new(x1.clone(), y1.clone(), x2.clone(), y2.clone()).unwrap();
            let ans = query_rect(&inst, &tables.m, &rect).unwrap();
            let want = brute_rect(d, &adj, &x1, &y1, &x2, &y2);
            let witnessed = ans.ids.len() == ans.size
                && is_disk_clique(d, &ans.ids)
                && ans.ids.iter().all(|id| d.iter().any(|q| &q.id == id && inside(&q.center, &x1, &y1, &x2, &y2)));
            if ans.size != want || !witnessed {
                bad.push(format!("instance {i} query [{x1},{x2}]x[{y1},{y2}]: {} != {want}", ans.size));
            }
        }
    }
    outcome(
        bad.len(),
        format!("50 instances (n 3..=12): {entries} table entries, {queries} queries, mismatches: {}", summary(&bad)),
    )
}

// ------------------------------------------------------------- criterion 5

fn criterion_5() -> Outcome {
    const SEQUENCES: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut snapshots, mut bad) = (0usize, Vec::new());
    for seq in 0..SEQUENCES {
        let (nl, nr) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
        let density = rng.gen_range(0.02..0.3);
        // left vertices are 0..nl, right vertices 40..40+nr
        let edge: Vec<Vec<bool>> = (0..nl).map(|_| (0..nr).map(|_| rng.gen_bool(density)).collect()).collect();
        let conflict = |u: usize, v: usize| {
            let (l, r) = if u < 40 { (u, v) } else { (v, u) };
            edge[l][r - 40]
        };
        let universe: Vec<usize> = (0..nl).chain(40..40 + nr).collect();
        let mut present: Vec<usize> = Vec::new();
        let mut g = ConflictGraph::new();
        for _ in 0..rng.gen_range(5..=40) {
            let absent: Vec<usize> = universe.iter().copied().filter(|v| !present.contains(v)).collect();
            if !absent.is_empty() && (present.is_empty() || rng.gen_bool(0.6)) {
                let v = absent[rng.gen_range(0..absent.len())];
                let part = if v < 40 { Part::Left } else { Part::Right };
                let nbrs: Vec<usize> =
                    present.iter().copied().filter(|&u| (u < 40) != (v < 40) && conflict(u, v)).collect();
                g.insert_vertex(v, part, &nbrs).unwrap();
                present.push(v);
            } else {
                let v = present.swap_remove(rng.gen_range(0..present.len()));
                g.delete_vertex(v).unwrap();
            }
            snapshots += 1;

            let left: Vec<usize> = present.iter().copied().filter(|&v| v < 40).collect();
            let right: Vec<usize> = present.iter().copied().filter(|&v| v >= 40).collect();
            let kuhn_size = kuhn(&left, |u| right.iter().copied().filter(|&v| conflict(u, v)).collect());
            let edges: Vec<(usize, usize)> = left
                .iter()
                .flat_map(|&u| right.iter().filter(move |&&v| conflict(u, v)).map(move |&v| (u, v)))
                .collect();
            let mut rebuilt = ConflictGraph::from_edges(&left, &right, &edges).unwrap();
            let hk = rebuilt.max_matching();
            let mis = g.max_independent_set().unwrap();
            let independent =
                mis.iter().all(|&u| mis.iter().all(|&v| u == v || (u < 40) == (v < 40) || !conflict(u, v)));
            if g.matching_size() != kuhn_size
                || hk != kuhn_size
                || mis.len() + g.matching_size() != present.len()
                || !independent
            {
                bad.push(format!(
                    "sequence {seq} step {snapshots}: incremental {} hk {hk} kuhn {kuhn_size}",
                    g.matching_size()
                ));
            }
        }
    }
    outcome(bad.len(), format!("{SEQUENCES} interleavings, {snapshots} snapshots, mismatches: {}", summary(&bad)))
}

// ------------------------------------------------------------- criterion 6

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    let mut counts = [0usize; 3];
    for (i, (planes, balls)) in parallel_instances().into_iter().enumerate() {
        counts[0] += 1;
        let want = brute_balls(&balls);
        let got = max_clique_balls_parallel(&BallInstance::new(planes, balls.clone()).unwrap()).unwrap();
        if got.size != want || !is_ball_clique(&balls, &got.ids) {
            bad.push(format!("parallel #{i}: {} != {want}", got.size));
        }
    }
    for (i, (planes, balls)) in perp_instances().into_iter().enumerate() {
        counts[1] += 1;
        let want = brute_balls(&balls);
        let got = max_clique_balls_perp(&BallInstance::new(planes, balls.clone()).unwrap()).unwrap();
        if got.size != want || !is_ball_clique(&balls, &got.ids) {
            bad.push(format!("perp #{i}: {} != {want}", got.size));
        }
    }
    for i in 0..100u64 {
        counts[2] += 1;
        let k = 1 + (i % 3) as usize;
        let n = 3 + (i % 10) as usize;
        let (planes, balls) = gen_balls(PlaneKind::Parallel, 1, k, n, 4000 + i, &s(6), &default_radii()).unwrap();
        let disks: Vec<Disk> = balls
            .iter()
            .map(|b| {
                Disk::new(b.id.clone(), Point2::new(b.center.x.clone(), b.center.y.clone()), b.radius.clone()).unwrap()
            })
            .collect();
        let by_ball = max_clique_balls_parallel(&BallInstance::new(planes, balls).unwrap()).unwrap();
        let by_disk = max_clique_kradii(&DiskInstance::new(disks).unwrap()).unwrap();
        if by_ball.ids != by_disk.ids {
            bad.push(format!("single plane #{i}: {:?} != {:?}", by_ball.ids, by_disk.ids));
        }
    }
    outcome(
        bad.len(),
        format!(
            "{} parallel, {} perpendicular, {} single-plane instances, mismatches: {}",
            counts[0],
            counts[1],
            counts[2],
            summary(&bad)
        ),
    )
}

// ------------------------------------------------------------- criterion 7

fn criterion_7() -> Outcome {
    let mut bad = Vec::new();
    let factor = Scalar::ratio(3, 7);
    let instances = kradii_instances();
    for (i, disks) in instances.iter().take(100).enumerate() {
        let scaled: Vec<Disk> = disks
            .iter()
            .map(|d| {
                let c = Point2::new(&d.center.x * &factor, &d.center.y * &factor);
                Disk::new(d.id.clone(), c, &d.radius * &factor).unwrap()
            })
            .collect();
        let before = max_clique_kradii(&DiskInstance::new(disks.clone()).unwrap()).unwrap();
        let after = max_clique_kradii(&DiskInstance::new(scaled).unwrap()).unwrap();
        if before.ids != after.ids {
            bad.push(format!("scaling #{i}: {:?} -> {:?}", before.ids, after.ids));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (i, disks) in instances.iter().skip(100).take(100).enumerate() {
        let before = max_clique_kradii(&DiskInstance::new(disks.clone()).unwrap()).unwrap().size;
        let mut grown = disks.clone();
        let radii = default_radii();
        let extra =
            Point2::new(Scalar::ratio(rng.gen_range(0..=1000), 100), Scalar::ratio(rng.gen_range(0..=1000), 100));
        grown.push(Disk::new("zz-extra", extra, radii[rng.gen_range(0..radii.len())].clone()).unwrap());
        let after = max_clique_kradii(&DiskInstance::new(grown).unwrap()).unwrap().size;
        if after < before {
            bad.push(format!("insertion #{i}: {before} -> {after}"));
        }
    }
    let mut pairs = 0;
    for i in 0..10u64 {
        let (inst, bbox) = unit_instance(100 + i);
        let tables = build_tables(&inst).unwrap();
        for _ in 0..100 {
            pairs += 1;
            let (x1, y1, x2, y2) = random_rect(&mut rng, bbox, inst.disks());
            let within = |lo: &Scalar, hi: &Scalar, rng: &mut ChaCha8Rng| {
                let t = unit(rng, 16);
                lo + &(&t * &(hi - lo))
            };
            let (ix1, iy1) = (within(&x1, &x2, &mut rng), within(&y1, &y2, &mut rng));
            let (ix2, iy2) = (within(&ix1, &x2, &mut rng), within(&iy1, &y2, &mut rng));
            let outer = Rect::new(x1, y1, x2, y2).unwrap();
            let inner = Rect::new(ix1, iy1, ix2, iy2).unwrap();
            let big = query_rect(&inst, &tables.m, &outer).unwrap().size;
            let small = query_rect(&inst, &tables.m, &inner).unwrap().size;
            if !outer.contains_rect(&inner) || small > big {
                bad.push(format!("nesting on instance {i}: inner {small} > outer {big}"));
            }
        }
    }
    outcome(
        bad.len(),
        format!("100 scalings by 3/7, 100 insertions, {pairs} nested rectangle pairs, violations: {}", summary(&bad)),
    )
}

// ------------------------------------------------------------- criterion 8

fn criterion_8() -> Outcome {
    let disks = gen_unit_disks(100, 77, &s(10), &Scalar::one()).unwrap();
    let start = Instant::now();
    let res = max_clique_kradii(&DiskInstance::new(disks.clone()).unwrap()).unwrap();
    let solve = start.elapsed();
    let solve_ok = solve < Duration::from_secs(60) && is_disk_clique(&disks, &res.ids);

    let disks = gen_unit_disks(40, 78, &s(6), &Scalar::one()).unwrap();
    let inst = UnitInstance::new(disks.clone()).unwrap();
    let start = Instant::now();
    let tables = build_tables(&inst).unwrap();
    let build = start.elapsed();
    let full = tables.m.get(0, 39, 39, 0) as usize;
    let build_ok = build < Duration::from_secs(600) && full == brute_disks(&disks);
    Outcome {
        pass: solve_ok && build_ok,
        detail: format!(
            "n=100 k=1 solve {:.2} s (size {}, limit 60 s); n=40 range build {:.2} s (limit 600 s, full-rect size {full})",
            solve.as_secs_f64(),
            res.size,
            build.as_secs_f64()
        ),
    }
}

// ------------------------------------------------------------------ driver

type Criterion = (u32, &'static str, fn() -> Outcome);

const CRITERIA: [Criterion; 8] = [
    (1, "slab distance bounds", criterion_1),
    (2, "k-radii oracle equivalence", criterion_2),
    (3, "side cliques", criterion_3),
    (4, "range tables", criterion_4),
    (5, "incremental matching", criterion_5),
    (6, "ball graphs", criterion_6),
    (7, "invariance", criterion_7),
    (8, "performance smoke", criterion_8),
];

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        for (num, name, _) in CRITERIA {
            println!("criterion {num} {name}: test");
        }
        return ExitCode::SUCCESS;
    }
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (num, name, run) in CRITERIA {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome { pass: false, detail: format!("panicked: {msg}") }
        });
        let verdict = if result.pass { "PASS" } else { "FAIL" };
        println!("[{verdict}] criterion {num} ({name}): {} [{:.1} s]", result.detail, start.elapsed().as_secs_f64());
        if !result.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
