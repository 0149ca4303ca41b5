//! Acceptance run: one PASS/FAIL line per criterion; nonzero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use gentlekit::brauer::{brauer_cartan, brauer_classify, BrauerGraph};
use gentlekit::derived::{
    ar_translate, enumerate_perfect_classes, root_system_check, BandComplex, StringComplex,
};
use gentlekit::invariants::{
    aag_from_faces, aag_from_orbits, aag_to_string, analyze, coxeter, euler_analysis, DynkinType,
};
use gentlekit::quiver::all_direction_string_functions;
use gentlekit::random::{random_instance, rng_from_seed, Shape};
use gentlekit::ribbon::{ForbiddenRibbon, VertexSpec};
use gentlekit::walks::{classify_walk, enumerate_reduced_walks, plus_ops, WalkClass};
use gentlekit::{GentleInstance, IntMatrix, RibbonGraph, Walk};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

const SEED: u64 = 0x006e_71e5;
const RANDOM_COUNT: usize = 500;

fn all_instances() -> Vec<(String, GentleInstance)> {
    let mut v = named_instances();
    for (k, inst) in random_instances(SEED, RANDOM_COUNT, 6, 4)
        .into_iter()
        .enumerate()
    {
        v.push((format!("random#{k}"), inst));
    }
    v
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("entries fit in i64")
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i64).collect())
        .collect()
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Outcome {
    let files = ["amiot0.quiver", "amiot1.quiver", "amiot2.quiver"];
    let mut nablas = Vec::new();
    let mut coranks = Vec::new();
    let mut dyns = Vec::new();
    for f in files {
        let r = analyze(&load(f).quiver).map_err(|e| format!("{f}: {e}"))?;
        ensure!(
            aag_to_string(&r.aag) == "{(4,6)}",
            "{f}: AAG {}",
            aag_to_string(&r.aag)
        );
        ensure!(
            r.coxeter.poly.to_string() == "z^5 - z^4 - z + 1",
            "{f}: ψ = {}",
            r.coxeter.poly
        );
        nablas.push(r.euler.nabla);
        coranks.push(r.euler.corank);
        dyns.push(r.euler.dynkin_projectives);
    }
    ensure!(nablas == [1, 0, 1], "∇ = {nablas:?}");
    ensure!(coranks == [2, 1, 2], "crk = {coranks:?}");
    ensure!(
        dyns == [DynkinType::A(3), DynkinType::D(4), DynkinType::A(3)],
        "Dyn = {dyns:?}"
    );
    Ok("AAG {(4,6)}, ψ = z^5 - z^4 - z + 1, ∇ (1,0,1), crk (2,1,2), Dyn (A3,D4,A3)".into())
}

fn criterion_2(instances: &[(String, GentleInstance)]) -> Outcome {
    let mut finite = 0;
    for (name, inst) in instances {
        let c = oracle_cartan(inst.quiver.base());
        ensure!(
            to_rows(&inst.quiver.cartan_matrix()) == c,
            "{name}: Cartan matrix differs from path count"
        );
        let inc = oracle_incidence(&inst.graph);
        ensure!(
            mat_add(&c, &transpose(&c)) == mat_mul(&inc, &transpose(&inc)),
            "{name}: C + Cᵗʳ ≠ Inc·Incᵗʳ"
        );
        let ea = euler_analysis(&inst.quiver);
        ensure!(
            ea.projective_identity_holds(),
            "{name}: library reports identity failure"
        );
        if inst.quiver.gl_dim_finite() {
            finite += 1;
            let fr =
                ForbiddenRibbon::from_gentle(&inst.quiver).map_err(|e| format!("{name}: {e}"))?;
            let ih = to_rows(&fr.incidence_matrix());
            let gs = mat_mul(&ih, &transpose(&ih));
            ensure!(
                mat_mul(&mat_mul(&c, &gs), &transpose(&c)) == mat_add(&c, &transpose(&c)),
                "{name}: C·Inc(Ĝ)Inc(Ĝ)ᵗʳ·Cᵗʳ ≠ C + Cᵗʳ"
            );
            ensure!(
                ea.simples_identity_holds() == Some(true),
                "{name}: library simples identity"
            );
        }
    }
    Ok(format!(
        "{} instances ({} named, {RANDOM_COUNT} random), {finite} with finite gl.dim",
        instances.len(),
        NAMED.len()
    ))
}

fn criterion_3(instances: &[(String, GentleInstance)]) -> Outcome {
    for (name, inst) in instances {
        let c = oracle_cartan(inst.quiver.base());
        let gram = mat_add(&c, &transpose(&c));
        let crk = (gram.len() - oracle_rank(&gram)) as i64;
        let q = inst.quiver.base();
        let expect =
            q.num_arrows() as i64 - q.num_vertices() as i64 + oracle_bipartite(&inst.graph) as i64;
        ensure!(crk == expect, "{name}: crk {crk}, formula {expect}");
        ensure!(
            euler_analysis(&inst.quiver).corank as i64 == crk,
            "{name}: library corank"
        );
    }
    Ok(format!("{} instances", instances.len()))
}

/// Fraction-free determinant of small i128 matrices.
fn bareiss(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

fn criterion_4(instances: &[(String, GentleInstance)]) -> Outcome {
    let mut evaluated = 0;
    for (name, inst) in instances {
        let cx = coxeter(&inst.quiver).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            cx.poly == cx.poly_from_aag,
            "{name}: {} ≠ {}",
            cx.poly,
            cx.poly_from_aag
        );
        // Ψ rebuilt from the path-counted Cartan matrix; det(zI − Ψ) at sample points
        let c = oracle_cartan(inst.quiver.base());
        let j = to_rows(&cx.j_hat);
        let jj = mat_mul(&j, &transpose(&j));
        let n = c.len();
        let prod = mat_mul(&jj, &transpose(&c));
        let psi: Vec<Vec<i64>> = (0..n)
            .map(|a| (0..n).map(|b| identity(n)[a][b] - prod[a][b]).collect())
            .collect();
        ensure!(to_rows(&cx.matrix) == psi, "{name}: Ψ differs");
        for z in -3i64..=3 {
            let m: Vec<Vec<i128>> = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| (z * identity(n)[a][b] - psi[a][b]) as i128)
                        .collect()
                })
                .collect();
            let d = bareiss(m);
            ensure!(
                cx.poly.eval(&BigInt::from(z)) == BigInt::from(d),
                "{name}: char poly at z = {z}"
            );
        }
        evaluated += 1;
    }
    let np = coxeter(&load("nonpalin.quiver").quiver).map_err(|e| e.to_string())?;
    ensure!(np.poly.to_string() == "z^2 - 1", "nonpalin: {}", np.poly);
    Ok(format!(
        "{evaluated} instances agree coefficientwise and at z = -3..3; nonpalin gives z^2 - 1"
    ))
}

fn criterion_5(instances: &[(String, GentleInstance)]) -> Outcome {
    let mut walks = 0usize;
    let mut bands = 0usize;
    for (name, inst) in instances {
        let g = &inst.graph;
        let c = oracle_cartan(inst.quiver.base());
        let gram = mat_add(&c, &transpose(&c));
        for w in enumerate_reduced_walks(g, 8) {
            let (_, class) = oracle_walk_class(g, &w, 0);
            let lib = StringComplex::build(g, 0, &w)
                .map_err(|e| format!("{name}: {e}"))?
                .k0_class(g);
            ensure!(lib == class, "{name}: class of {}", w.to_text(g));
            let expect = if !w.is_closed(g) {
                1
            } else if w.len() % 2 == 0 {
                0
            } else {
                2
            };
            let q = half_form(&gram, &class);
            ensure!(
                q == expect,
                "{name}: q = {q} on {} (expected {expect})",
                w.to_text(g)
            );
            if classify_walk(g, &w) == WalkClass::Belt {
                let band =
                    BandComplex::new(g, 0, w.clone(), 1).map_err(|e| format!("{name}: {e}"))?;
                let x = band
                    .alternating_class(g)
                    .map_err(|e| format!("{name}: {e}"))?;
                ensure!(
                    half_form(&gram, &x) == 0,
                    "{name}: band on {} is not a 0-root",
                    w.to_text(g)
                );
                bands += 1;
            }
            walks += 1;
        }
    }
    Ok(format!(
        "{walks} reduced walks of length ≤ 8 on {} instances, {bands} bands",
        instances.len()
    ))
}

fn criterion_6() -> Outcome {
    let mut rng = rng_from_seed(SEED ^ 6);
    let mut checked = 0;
    let (mut trees, mut cycles) = (0, 0);
    for k in 0..24 {
        let shape = if k % 2 == 0 {
            Shape::Tree
        } else {
            Shape::OddUnicyclic
        };
        let inst = random_instance(&mut rng, 6, 0, shape);
        let g = &inst.graph;
        let n = g.num_edges();
        let ea = euler_analysis(&inst.quiver);
        let max_len = (2 * n + 2).min(14);
        let classes = enumerate_perfect_classes(g, max_len).map_err(|e| e.to_string())?;
        let chk = root_system_check(&ea.gram_projectives, ea.nabla, &classes)
            .ok_or(format!("#{k}: q not positive"))?;
        let gram = to_rows(&ea.gram_projectives);
        let (ones, twos) = box_root_sets(&gram);
        let walk_set: BTreeSet<Vec<i64>> = classes.nonzero().cloned().collect();
        let walk_ones: BTreeSet<Vec<i64>> = walk_set
            .iter()
            .filter(|x| half_form(&gram, x) == 1)
            .cloned()
            .collect();
        ensure!(
            walk_set
                .iter()
                .all(|x| matches!(half_form(&gram, x), 1 | 2)),
            "#{k}: class outside R_q(1) ∪ R_q(2)"
        );
        ensure!(
            walk_ones == ones,
            "#{k}: walk 1-roots {} vs box {}",
            walk_ones.len(),
            ones.len()
        );
        ensure!(
            walk_set
                .iter()
                .filter(|x| half_form(&gram, x) == 2)
                .all(|x| twos.contains(x)),
            "#{k}: walk 2-root missing from box"
        );
        let multi_clock = oracle_bipartite(g);
        let expect = if multi_clock { n * n + n } else { 2 * n * n };
        ensure!(
            walk_set.len() == expect,
            "#{k} (n = {n}, {shape:?}): |P*| = {} ≠ {expect}",
            walk_set.len()
        );
        if !multi_clock {
            ensure!(
                ones.len() == 2 * (n * n - n),
                "#{k}: |R_q(1)| = {} ≠ 2(n² − n)",
                ones.len()
            );
            cycles += 1;
        } else {
            ensure!(shape == Shape::Tree, "#{k}: odd cycle reported bipartite");
            trees += 1;
        }
        ensure!(
            chk.saturated(),
            "#{k}: library check not saturated: {chk:?}"
        );
        checked += 1;
    }
    Ok(format!(
        "{checked} positive instances ({trees} multi-clock, {cycles} odd unicyclic)"
    ))
}

fn criterion_7() -> Outcome {
    let inst = load("amiot1-oriented.rgraph.json");
    let g = &inst.graph;
    let w = Walk::parse("-1 3 5", g).map_err(|e| e.to_string())?;
    let t = ar_translate(g, 0, &w).map_err(|e| e.to_string())?;
    let mid: Vec<String> = t.middle.iter().map(|x| x.walk.to_text(g)).collect();
    ensure!(t.start.walk.to_text(g) == "-1 3 5", "start");
    ensure!(mid == ["4 -1 2 -1 3 5", "-1 3 5 -2 1 -4"], "middle {mid:?}");
    ensure!(
        t.end.walk.to_text(g) == "4 -1 2 -1 3 5 -2 1 -4",
        "end {}",
        t.end.walk.to_text(g)
    );
    ensure!(t.shift == 1, "shift {}", t.shift);

    let lp = load("loop.quiver");
    let one = Walk::parse("1", &lp.graph).map_err(|e| e.to_string())?;
    for l in 1..=6 {
        let wl = one.power(&lp.graph, l).map_err(|e| e.to_string())?;
        let p = plus_ops(&lp.graph, &wl).map_err(|e| e.to_string())?;
        ensure!(p.left == one.power(&lp.graph, l + 1).unwrap(), "₊1^{l}");
        ensure!(
            p.right.len() == l - 1 && (l == 1 || p.right == one.power(&lp.graph, l - 1).unwrap()),
            "1^{l}₊"
        );
        ensure!(p.m_shift == -1, "m(1^{l}) = {}", p.m_shift);
    }

    let mut rng = rng_from_seed(SEED ^ 7);
    let mut done = 0;
    while done < 1000 {
        let inst = random_instance(&mut rng, 5, 3, Shape::Any);
        let g = &inst.graph;
        let psi = to_rows(&coxeter(&inst.quiver).map_err(|e| e.to_string())?.matrix);
        let walks = enumerate_reduced_walks(g, 6);
        for _ in 0..10 {
            let w = walks.choose(&mut rng).ok_or("no walks")?;
            let m = rng.gen_range(-2..=2);
            let t = ar_translate(g, m, w).map_err(|e| e.to_string())?;
            let (start, end) = (t.start.k0_class(g), t.end.k0_class(g));
            let image: Vec<i64> = psi
                .iter()
                .map(|row| row.iter().zip(&end).map(|(a, b)| a * b).sum())
                .collect();
            ensure!(
                image == start,
                "Ψ·[τ-image] ≠ [source] for {} (m = {m})",
                w.to_text(g)
            );
            ensure!(
                t.k0_defect(g).iter().all(|&x| x == 0),
                "triangle not additive for {}",
                w.to_text(g)
            );
            done += 1;
        }
    }
    Ok(format!("A^(1) triangle of -1 3 5 with shift 1; loop family ℓ = 1..6; Ψ·[τ-image] = [source] on {done} random walks"))
}

fn criterion_8(instances: &[(String, GentleInstance)]) -> Outcome {
    for (name, inst) in instances {
        let faces = aag_from_faces(&inst.graph);
        let orbits = aag_from_orbits(&inst.quiver).map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            faces == orbits,
            "{name}: {} vs {}",
            aag_to_string(&faces),
            aag_to_string(&orbits)
        );
    }
    let np = aag_from_faces(&load("nonpalin.quiver").graph);
    ensure!(
        aag_to_string(&np) == "{(0,2),(2,0)}",
        "nonpalin {}",
        aag_to_string(&np)
    );
    Ok(format!(
        "{} instances; nonpalin gives {{(0,2),(2,0)}}",
        instances.len()
    ))
}

fn criterion_9(instances: &[(String, GentleInstance)]) -> Outcome {
    let mut counted = 0;
    for (name, inst) in instances {
        let back = RibbonGraph::from_gentle(&inst.quiver)
            .to_quiver()
            .map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            back.base().structural_key() == inst.quiver.base().structural_key(),
            "{name}: ▽△ changed the quiver"
        );
        let again =
            RibbonGraph::from_gentle(&inst.graph.to_quiver().map_err(|e| format!("{name}: {e}"))?);
        ensure!(
            again.canonical_form() == inst.graph.canonical_form(),
            "{name}: △▽ changed the graph"
        );
        let n = inst.quiver.n();
        if n <= 6 {
            let expect = 1u64 << n;
            let brute = oracle_string_function_count(inst.quiver.base());
            ensure!(
                brute == expect,
                "{name}: {brute} string-function pairs, expected {expect}"
            );
            let lib = all_direction_string_functions(&inst.quiver);
            let distinct: BTreeSet<_> = lib.iter().map(|p| (p.s.clone(), p.t.clone())).collect();
            ensure!(
                distinct.len() as u64 == expect
                    && lib.iter().all(|p| p.is_valid(inst.quiver.base())),
                "{name}: library pairs"
            );
            counted += 1;
        }
    }
    Ok(format!(
        "{} round trips; 2^|Q0| pairs on {counted} instances with |Q0| ≤ 6",
        instances.len()
    ))
}

fn brauer_from_edges<R: Rng>(rng: &mut R, nv: usize, edges: &[(usize, usize)]) -> RibbonGraph {
    let mut halves: Vec<Vec<String>> = vec![Vec::new(); nv];
    let mut iota = Vec::new();
    for (k, &(a, b)) in edges.iter().enumerate() {
        halves[a].push(format!("h{k}a"));
        halves[b].push(format!("h{k}b"));
        iota.push((format!("h{k}a"), format!("h{k}b")));
    }
    let specs = halves
        .into_iter()
        .enumerate()
        .map(|(v, mut hs)| {
            hs.shuffle(rng);
            VertexSpec {
                id: format!("v{v}"),
                half_edges: hs,
                arrow_names: None,
            }
        })
        .collect();
    RibbonGraph::from_parts(specs, iota, None, false).expect("connected graph")
}

fn positive_definite(m: &[Vec<i64>]) -> bool {
    (1..=m.len()).all(|k| {
        let minor: Vec<Vec<i128>> = m[..k]
            .iter()
            .map(|r| r[..k].iter().map(|&x| x as i128).collect())
            .collect();
        bareiss(minor) > 0
    })
}

fn criterion_10() -> Outcome {
    let mut rng = rng_from_seed(SEED ^ 10);
    let graphs = small_multigraphs(6);
    for (nv, edges) in &graphs {
        let g = brauer_from_edges(&mut rng, *nv, edges);
        let trivial = BrauerGraph::trivial(g.clone());
        let inc = oracle_incidence(&g);
        ensure!(
            to_rows(&brauer_cartan(&trivial)) == mat_mul(&inc, &transpose(&inc)),
            "{edges:?}: trivial C_B ≠ Inc·Incᵗʳ"
        );
        let mult: Vec<u64> = (0..*nv).map(|_| rng.gen_range(1..=4)).collect();
        let b = BrauerGraph::new(g, mult.clone()).map_err(|e| e.to_string())?;
        let cb = to_rows(&brauer_cartan(&b));
        let expect = oracle_brauer_positive(*nv, edges);
        ensure!(
            positive_definite(&cb) == expect,
            "{edges:?} with {mult:?}: definiteness"
        );
        let cls = brauer_classify(&b).map_err(|e| e.to_string())?;
        ensure!(
            cls.positive_definite == expect,
            "{edges:?}: library verdict"
        );
        let reshuffled = BrauerGraph::new(brauer_from_edges(&mut rng, *nv, edges), mult)
            .map_err(|e| e.to_string())?;
        ensure!(
            to_rows(&brauer_cartan(&reshuffled)) == cb,
            "{edges:?}: C_B depends on cyclic orders"
        );
    }
    Ok(format!(
        "{} connected graphs with ≤ 6 edges, multiplicities 1..=4",
        graphs.len()
    ))
}

fn main() -> ExitCode {
    let instances = all_instances();
    // walks to length 8 grow like (degree − 1)⁸, so this suite uses its own sample of smaller graphs
    let mut walk_sample = named_instances();
    for (k, inst) in random_instances(SEED ^ 5, 100, 4, 2)
        .into_iter()
        .enumerate()
    {
        walk_sample.push((format!("small-random#{k}"), inst));
    }
    let suites: Vec<(usize, Box<dyn FnOnce() -> Outcome + '_>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(|| criterion_2(&instances))),
        (3, Box::new(|| criterion_3(&instances))),
        (4, Box::new(|| criterion_4(&instances))),
        (5, Box::new(|| criterion_5(&walk_sample))),
        (6, Box::new(criterion_6)),
        (7, Box::new(criterion_7)),
        (8, Box::new(|| criterion_8(&instances))),
        (9, Box::new(|| criterion_9(&instances))),
        (10, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, f) in suites {
        let t0 = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panic: {}", msg.unwrap_or_default()))
        });
        let secs = t0.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("criterion {k}: PASS ({msg}) [{secs:.2}s]"),
            Err(msg) => {
                failed += 1;
                println!("criterion {k}: FAIL ({msg}) [{secs:.2}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
