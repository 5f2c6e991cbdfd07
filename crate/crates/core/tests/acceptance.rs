//! Acceptance criteria 1-9. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

use crossbound::bounds::{
    bound_functions, check_arboricity_bound, check_degree_inequality,
    check_second_degree_inequality, subdiv_trick_transfer,
};
use crossbound::cliquesum::{build_ki, check_subdivision, compose, fixture_trees, join};
use crossbound::convex::{convex_draw_chordal, convex_draw_interval, convex_draw_pathwidth};
use crossbound::decomposition::{validate, Decomposition};
use crossbound::drawers::{draw_planar_decomposition, draw_planar_partition, make_home_assignment};
use crossbound::formats::{drawing_to_json, graph_to_json, q_to_string, report_to_json};
use crossbound::generators::{
    gen_k33_free, gen_random_certified, random_gnp, random_order, random_planar,
    random_planar_decomposition, witness_drawing_k33_free, Certificate, RandomKind,
};
use crossbound::geometry::{convex_crossings, count_crossings, crossing_hits};
use crossbound::oracle::{convex_optimum, naive_convex_crossings};
use crossbound::{Drawing, Exec, Graph, Q};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<T>(r: crossbound::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let mut slowest = 0f64;
    for delta in [4usize, 8, 12, 16] {
        for copies in [1usize, 2, 3] {
            let t = Instant::now();
            let w = e2s(witness_drawing_k33_free(delta, copies))?;
            let recount = e2s(count_crossings(&w.drawing))?.total as u64;
            let secs = t.elapsed().as_secs_f64();
            slowest = slowest.max(secs);
            let want = (copies * (delta / 4) * (delta / 4)) as u64;
            let n = e2s(gen_k33_free(delta, copies))?.graph.n() as i64;
            // Delta n / 40 * (1 + 2 / (Delta - 2))
            let d = delta as i64;
            let formula = Q::new(BigInt::from(d * n * d), BigInt::from(40 * (d - 2)));
            ensure(recount == want, || {
                format!("Delta {delta} copies {copies}: {recount} != {want}")
            })?;
            ensure(formula == Q::from_integer(want.into()), || {
                format!("formula {formula} != {want}")
            })?;
            ensure(
                w.drawing.graph().ok().as_ref() == Some(&e2s(gen_k33_free(delta, copies))?.graph),
                || "witness draws a different graph".into(),
            )?;
            ensure(secs < 1.0, || {
                format!("Delta {delta} copies {copies} took {secs:.2}s")
            })?;
        }
    }
    Ok(format!("12 witnesses exact, slowest {slowest:.3}s"))
}

fn criterion_2() -> Outcome {
    let t = Instant::now();
    let mut count = 0;
    let mut worst = 0usize;
    for copies in 1..=10 {
        for delta in [4usize, 8, 12, 16, 20] {
            let inst = e2s(gen_k33_free(delta, copies))?;
            let g = &inst.graph;
            ensure(inst.partition.width() == 2, || {
                "partition width is not 2".into()
            })?;
            let c = e2s(draw_planar_partition(g, &inst.partition))?;
            let r = e2s(count_crossings(&c.drawing))?;
            let sum_sq: usize = g.degrees().iter().map(|d| d * d).sum();
            let cap = 2 * g.max_degree();
            ensure(r.total <= sum_sq, || {
                format!("Delta {delta} copies {copies}: {} > {sum_sq}", r.total)
            })?;
            if delta == 8 && copies == 1 {
                ensure(sum_sq == 360, || format!("sum deg^2 {sum_sq} != 360"))?;
            }
            for (e, &x) in r.per_edge.iter().enumerate() {
                ensure(x <= cap, || format!("edge {e} has {x} > {cap} crossings"))?;
            }
            ensure(
                r.total == c.report.total && c.report.all_satisfied(),
                || "report disagrees".into(),
            )?;
            worst = worst.max(r.total * 1000 / sum_sq.max(1));
            count += 1;
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "{count} instances, max crossings/sum deg^2 = {:.3}, {secs:.2}s",
        worst as f64 / 1000.0
    ))
}

fn criterion_3() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    let mut bends = 0;
    let mut seed = 0u64;
    while done < 100 {
        seed += 1;
        let width = r.gen_range(1..=4);
        let spread = r.gen_range(1..=3);
        let bags = r.gen_range(3..=14);
        let n = r.gen_range(1..=40usize).min(bags * width);
        let (g, d) = e2s(random_planar_decomposition(n, bags, width, spread, seed))?;
        let v = e2s(validate(&g, &d))?;
        ensure(v.is_decomposition, || {
            format!("seed {seed}: generated decomposition is invalid")
        })?;
        let s: Vec<usize> = d.bags_of(g.n()).iter().map(|b| b.len()).collect();
        ensure(s.iter().all(|&x| x <= 3) && d.width() <= 4, || {
            "spread or width too large".into()
        })?;
        let h = e2s(make_home_assignment(&g, &d))?;
        let out = e2s(draw_planar_decomposition(&g, &d, &h))?;
        let drawn = out.drawing.bends();
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            ensure(drawn[e] + 2 <= s[a] + s[b], || {
                format!("seed {seed}: edge {a}{b} has {} bends", drawn[e])
            })?;
        }
        let p = d.width() as u64;
        let cap: u64 = (0..g.n())
            .map(|v| 4 * p * s[v] as u64 * (g.degree(v) * g.degree(v)) as u64)
            .sum();
        let total = e2s(count_crossings(&out.drawing))?.total as u64;
        ensure(total <= cap, || format!("seed {seed}: {total} > {cap}"))?;
        bends += drawn.iter().sum::<usize>();
        done += 1;
    }
    Ok(format!(
        "100 decompositions, {bends} bends drawn, zero violations"
    ))
}

fn criterion_4() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(4);
    for i in 0..200u64 {
        let n = r.gen_range(1..=12);
        let p = r.gen_range(0.1..0.9);
        let g = random_gnp(n, p, i);
        let order = random_order(n, 1000 + i);
        let fast = e2s(convex_crossings(&g, &order))?.total;
        let geo = e2s(count_crossings(&Drawing::convex(&g, &order)))?.total;
        let naive = e2s(naive_convex_crossings(&g, &order))?;
        ensure(fast == geo && geo == naive, || {
            format!("pair {i}: {fast} {geo} {naive}")
        })?;
    }
    Ok("200 pairs, convex = geometric = naive".into())
}

fn criterion_5() -> Outcome {
    let t = Instant::now();
    for (n, want) in [(4, 1), (5, 5), (6, 15)] {
        let got = e2s(convex_optimum(&Graph::complete(n)))?.crossings;
        ensure(got == want, || format!("K{n}: {got} != {want}"))?;
    }
    for n in 3..=9 {
        ensure(
            e2s(convex_optimum(&Graph::cycle(n)))?.crossings == 0,
            || format!("C{n} not 0"),
        )?;
    }
    let mut r = ChaCha8Rng::seed_from_u64(5);
    for i in 0..100u64 {
        let n = r.gen_range(2..=8);
        let (g, drawn) = if i % 2 == 0 {
            let k = r.gen_range(1..=3);
            let (g, _) = e2s(gen_random_certified(RandomKind::KTree { k }, n, i))?;
            let d = e2s(convex_draw_chordal(&g))?.report.total;
            (g, vec![d])
        } else {
            let (g, c) = e2s(gen_random_certified(RandomKind::Interval, n, i))?;
            let Certificate::IntervalOrder(o) = c else {
                return Err("interval certificate expected".into());
            };
            let d1 = e2s(convex_draw_interval(&g, &o))?.report.total;
            let d2 = e2s(convex_draw_chordal(&g))?.report.total;
            (g, vec![d1, d2])
        };
        let best = e2s(convex_optimum(&g))?.crossings;
        ensure(drawn.iter().all(|&d| d >= best), || {
            format!("graph {i}: drawer {drawn:?} below optimum {best}")
        })?;
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "oracle table exact, 100 drawings >= optimum, {secs:.2}s"
    ))
}

fn criterion_6() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(6);
    for i in 0..200u64 {
        let k = r.gen_range(1..=4);
        let n = r.gen_range(1..=100);
        let (g, _) = e2s(gen_random_certified(RandomKind::KTree { k }, n, i))?;
        let d = e2s(convex_draw_chordal(&g))?;
        let total = e2s(convex_crossings(&g, &d.order))?.total;
        let f = bound_functions(&g).sum_edge_deg_prod;
        let kk = (n.min(k + 1) as u64).saturating_sub(1);
        let coarse = BigInt::from(16 * kk * kk) * BigInt::from(g.max_degree()) * BigInt::from(n);
        ensure(
            BigInt::from(total) <= f && BigInt::from(total) <= coarse,
            || format!("k-tree {i}: {total} vs {f} / {coarse}"),
        )?;
    }
    for i in 0..200u64 {
        let n = r.gen_range(1..=60);
        let (g, c) = e2s(gen_random_certified(RandomKind::Interval, n, 10_000 + i))?;
        let Certificate::IntervalOrder(o) = c else {
            return Err("interval certificate expected".into());
        };
        let total = e2s(convex_crossings(&g, &o))?.total;
        e2s(convex_draw_interval(&g, &o))?;
        // omega = largest set of earlier neighbours plus one
        let pos = crossbound::geometry::order_positions(g.n(), &o).map_err(|e| e.to_string())?;
        let omega = (0..n)
            .map(|v| g.neighbors(v).iter().filter(|&&w| pos[w] < pos[v]).count() + 1)
            .max()
            .unwrap_or(0);
        let sum: usize = g.degrees().iter().map(|&d| d * d.saturating_sub(1)).sum();
        let twice_cap = omega.saturating_sub(2) * sum;
        ensure(2 * total <= twice_cap, || {
            format!("interval {i}: 2*{total} > {twice_cap}")
        })?;
    }
    for i in 0..200u64 {
        let k = r.gen_range(1..=3);
        let n = r.gen_range(1..=80);
        let (g, c) = e2s(gen_random_certified(
            RandomKind::Pathwidth { k },
            n,
            20_000 + i,
        ))?;
        let Certificate::PathDecomposition(pd) = c else {
            return Err("path decomposition expected".into());
        };
        let d = e2s(convex_draw_pathwidth(&g, &pd, k))?;
        let total = e2s(convex_crossings(&g, &d.order))?.total;
        let cap = k * k * g.max_degree() * n;
        ensure(total <= cap, || format!("pathwidth {i}: {total} > {cap}"))?;
    }
    Ok("600 drawings within their bounds".into())
}

fn regular_graph(r: &mut ChaCha8Rng) -> Graph {
    // circulant: every vertex joined to +-s for each chosen step s
    let n: usize = r.gen_range(5..=30);
    let mut steps: Vec<usize> = (1..n.div_ceil(2)).filter(|_| r.gen_bool(0.4)).collect();
    if steps.is_empty() {
        steps.push(1);
    }
    let mut edges = Vec::new();
    for v in 0..n {
        for &s in &steps {
            edges.push((v, (v + s) % n));
        }
    }
    Graph::from_edges_lossy(n, edges)
}

fn criterion_7() -> Outcome {
    let mut r = ChaCha8Rng::seed_from_u64(7);
    let mut regular = 0;
    let mut tested = 0;
    while tested < 1000 {
        let g = if tested % 5 == 0 {
            regular_graph(&mut r)
        } else {
            let n = r.gen_range(2..=40);
            random_gnp(n, r.gen_range(0.05..0.6), tested as u64)
        };
        if g.m() == 0 {
            continue;
        }
        tested += 1;
        let one = e2s(check_degree_inequality(&g))?;
        let four = check_second_degree_inequality(&g);
        ensure(one.holds && four.holds, || {
            format!("graph {tested}: inequality fails")
        })?;
        ensure(one.consistent() && four.consistent(), || {
            format!("graph {tested}: equality case off")
        })?;
        let degs = g.degrees();
        let nonzero: Vec<usize> = degs.iter().copied().filter(|&d| d > 0).collect();
        let is_regular = nonzero.iter().all(|&d| d == nonzero[0]);
        if is_regular {
            regular += 1;
            ensure(one.equality && four.equality, || {
                format!("graph {tested}: regular without equality")
            })?;
        } else {
            ensure(!one.equality, || {
                format!("graph {tested}: irregular with equality")
            })?;
        }
    }
    for i in 0..100u64 {
        let mut rr = ChaCha8Rng::seed_from_u64(70_000 + i);
        let n = rr.gen_range(3..=80);
        let g = random_planar(n, &mut rr, 0.2);
        let a = e2s(check_arboricity_bound(&g, 3))?;
        ensure(a.holds, || format!("planar {i}: arboricity bound fails"))?;
    }
    for i in 0..200u64 {
        let g = random_gnp(r.gen_range(1..=30), 0.3, 80_000 + i);
        let s = subdiv_trick_transfer(&g);
        ensure(s.holds && s.edge_sum == s.twice_sum_deg_sq, || {
            format!("graph {i}: subdivision identity fails")
        })?;
    }
    Ok(format!(
        "1000 graphs ({regular} regular), 100 planar, 200 subdivisions"
    ))
}

struct Joined {
    json: String,
    ratio: Q,
}

fn join_fixture(name: &str, t: &crossbound::cliquesum::CliqueSumTree) -> Result<Joined, String> {
    let d = join(t).map_err(|e| format!("{name}: {e}"))?;
    let c = e2s(compose(t))?;
    ensure(
        d.graph == c.graph && e2s(d.drawing.graph())? == c.graph,
        || format!("{name}: wrong graph"),
    )?;
    let aux: Vec<_> = (0..t.pieces.len())
        .map(|i| build_ki(&c, i))
        .collect::<crossbound::Result<_>>()
        .map_err(|e| e.to_string())?;
    e2s(check_subdivision(&c, &aux))?;
    e2s(crossing_hits(&d.drawing, Exec::Sequential))?;
    let recount = e2s(count_crossings(&d.drawing))?;
    ensure(recount.total == d.report.total, || {
        format!("{name}: recount differs")
    })?;
    ensure(d.vertical_pairs == 0, || {
        format!("{name}: vertical segments cross")
    })?;
    let delta = BigInt::from(c.graph.max_degree());
    for reg in &d.regions {
        let cap = &d.constant * Q::from_integer(&delta * BigInt::from(reg.ki_edges));
        ensure(Q::from_integer(reg.crossings.into()) <= cap, || {
            format!("{name}: region {} over", reg.piece)
        })?;
    }
    ensure(d.report.all_satisfied(), || {
        format!("{name}: a bound failed")
    })?;
    ensure(
        t.pieces.len() <= 10 && c.graph.n() <= 200 && d.h <= 4,
        || format!("{name}: fixture too large"),
    )?;
    let json = format!(
        "{}{}{}",
        drawing_to_json(&d.drawing),
        report_to_json(&d.report),
        q_to_string(&d.ratio)
    );
    Ok(Joined {
        json,
        ratio: d.ratio,
    })
}

fn criterion_8() -> Outcome {
    let t = Instant::now();
    let fx = fixture_trees();
    ensure(fx.len() == 20, || "fixture suite is not 20 trees".into())?;
    let mut worst = Q::from_integer(0.into());
    for (name, tree) in &fx {
        let a = join_fixture(name, tree)?;
        let b = join_fixture(name, tree)?;
        ensure(a.json == b.json && a.ratio == b.ratio, || {
            format!("{name}: unstable")
        })?;
        if a.ratio > worst {
            worst = a.ratio.clone();
        }
    }
    let secs = t.elapsed().as_secs_f64();
    ensure(secs < 120.0, || format!("took {secs:.1}s"))?;
    Ok(format!(
        "20 trees valid and stable, max crossings/(Delta n) = {worst}, {secs:.1}s"
    ))
}

/// Everything the fixture matrix produces, serialized.
fn matrix(exec: Exec) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for delta in [4usize, 8, 12, 16] {
        for copies in [1usize, 2, 3] {
            let inst = e2s(gen_k33_free(delta, copies))?;
            out.push(graph_to_json(&inst.graph));
            let w = e2s(witness_drawing_k33_free(delta, copies))?;
            out.push(drawing_to_json(&w.drawing));
            let c = e2s(draw_planar_partition(&inst.graph, &inst.partition))?;
            out.push(drawing_to_json(&c.drawing));
            out.push(report_to_json(&e2s(
                crossbound::geometry::count_crossings_with(&c.drawing, exec),
            )?));
        }
    }
    for seed in 0..10u64 {
        for kind in [
            RandomKind::KTree { k: 3 },
            RandomKind::Interval,
            RandomKind::Planar,
            RandomKind::Pathwidth { k: 2 },
        ] {
            let (g, c) = e2s(gen_random_certified(kind, 40, seed))?;
            out.push(graph_to_json(&g));
            let order = match c {
                Certificate::CliqueTree(_) => e2s(convex_draw_chordal(&g))?.order,
                Certificate::IntervalOrder(o) => e2s(convex_draw_interval(&g, &o))?.order,
                Certificate::PathDecomposition(pd) => e2s(convex_draw_pathwidth(&g, &pd, 2))?.order,
                Certificate::Embedding(_) => {
                    let d = Decomposition::singletons(&g);
                    let h = e2s(make_home_assignment(&g, &d))?;
                    let dd = e2s(draw_planar_decomposition(&g, &d, &h))?;
                    out.push(drawing_to_json(&dd.drawing));
                    continue;
                }
            };
            out.push(report_to_json(&e2s(
                crossbound::geometry::convex_crossings_with(&g, &order, exec),
            )?));
        }
    }
    for (_, t) in fixture_trees() {
        let d = e2s(join(&t))?;
        out.push(drawing_to_json(&d.drawing));
        out.push(report_to_json(&d.report));
    }
    Ok(out)
}

fn criterion_9() -> Outcome {
    let a = matrix(Exec::default())?;
    let b = matrix(Exec::default())?;
    let s = matrix(Exec::Sequential)?;
    ensure(a == b, || "two runs differ".into())?;
    ensure(a == s, || "sequential and parallel runs differ".into())?;
    let bytes: usize = a.iter().map(|x| x.len()).sum();
    Ok(format!(
        "{} documents, {bytes} bytes, bit-identical across runs",
        a.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("lower-bound witness exactness", criterion_1),
        ("width-2 partition pipeline", criterion_2),
        ("decomposition bends", criterion_3),
        ("convex kernel equivalence", criterion_4),
        ("oracle sanity", criterion_5),
        ("convex drawer bounds", criterion_6),
        ("degree inequality suite", criterion_7),
        ("clique-sum end-to-end", criterion_8),
        ("determinism", criterion_9),
    ];
    // optional criterion numbers on the command line select a subset
    let only: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let res = std::panic::catch_unwind(f).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        match res {
            Ok(msg) => println!("criterion {} PASS {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
