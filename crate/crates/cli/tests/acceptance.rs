//! Exit criteria. Runs with `harness = false` so every criterion prints one
//! line whether it passes or not; the process fails if any criterion fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stringy_core::moduli::structure_constants;
use stringy_core::stringy::{
    excess_exponents, verify_commutativity, verify_grading, verify_identity, DEFAULT_MAX_BASIS,
};
use stringy_core::twisted_rr::coordinate_obstructions;
use stringy_core::*;

type Outcome = Result<String, String>;

const ASSOC_SAMPLES: usize = 1000;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn perm(points: u32, gens: Vec<Vec<Vec<u32>>>) -> FiniteGroup {
    build_group(&GroupSpec::permutations(points, gens), DEFAULT_MAX_ORDER).unwrap()
}

/// Groups of criterion 1.
fn bg_groups() -> Vec<(String, FiniteGroup)> {
    let mut out: Vec<(String, FiniteGroup)> = (1..=12)
        .map(|n| (format!("Z/{n}"), FiniteGroup::cyclic(n).unwrap()))
        .collect();
    out.push(("S3".into(), FiniteGroup::symmetric(3).unwrap()));
    out.push(("S4".into(), FiniteGroup::symmetric(4).unwrap()));
    out.push(("D4".into(), perm(4, vec![vec![vec![1, 2, 3, 4]], vec![vec![1, 3]]])));
    out.push((
        "Q8".into(),
        perm(
            8,
            vec![
                vec![vec![1, 2, 3, 4], vec![5, 6, 7, 8]],
                vec![vec![1, 5, 3, 7], vec![2, 8, 4, 6]],
            ],
        ),
    ));
    out.push(("A4".into(), perm(4, vec![vec![vec![1, 2, 3]], vec![vec![1, 2], vec![3, 4]]])));
    out
}

/// Abelian instances of criterion 3.
fn abelian_instances() -> Vec<(String, LinearAction)> {
    let mut out = Vec::new();
    for n in 1..=8u64 {
        for chars in [[1, n as i64 - 1], [1, 1]] {
            let g = FiniteGroup::cyclic(n).unwrap();
            let a = LinearAction::diagonal(g, chars.iter().map(|&c| vec![c]).collect()).unwrap();
            out.push((format!("C2/Z{n} {chars:?}"), a));
        }
    }
    let z3 = FiniteGroup::cyclic(3).unwrap();
    out.push((
        "C3/Z3 [1,1,1]".into(),
        LinearAction::diagonal(z3, vec![vec![1]; 3]).unwrap(),
    ));
    let klein = build_group(&GroupSpec::abelian(&[2, 2]), DEFAULT_MAX_ORDER).unwrap();
    for bits in 0..16u32 {
        let row = |b: u32| vec![(b & 1) as i64, ((b >> 1) & 1) as i64];
        let chars = vec![row(bits & 3), row(bits >> 2)];
        out.push((
            format!("C2/(Z2xZ2) {chars:?}"),
            LinearAction::diagonal(klein.clone(), chars).unwrap(),
        ));
    }
    out
}

fn table_of(action: LinearAction) -> RingTable {
    ring_table(&Orbifold::new(action).unwrap(), DEFAULT_MAX_BASIS).unwrap()
}

/// Class-sum structure constants of the center of Z[G] by convolution over
/// G x G: entry [i][j][k] counts pairs (a, b) in C_i x C_j with ab equal to
/// the representative of C_k.
fn class_sum_oracle(g: &FiniteGroup) -> Vec<Vec<Vec<u64>>> {
    let classes = g.conjugacy_classes();
    let n = classes.len();
    let mut class_of = vec![0; g.order()];
    for (k, c) in classes.iter().enumerate() {
        for m in &c.members {
            class_of[m.index()] = k;
        }
    }
    let mut counts = vec![vec![vec![0u64; g.order()]; n]; n];
    for a in g.elements() {
        for b in g.elements() {
            counts[class_of[a.index()]][class_of[b.index()]][g.mul(a, b).index()] += 1;
        }
    }
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    classes
                        .iter()
                        .map(|c| {
                            let v = counts[i][j][c.representative.index()];
                            // the class sum product is central: constant on classes
                            assert!(c.members.iter().all(|m| counts[i][j][m.index()] == v));
                            v
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

fn integer_constant(tbl: &RingTable, i: usize, j: usize, k: usize) -> Result<u64, String> {
    let c = tbl.constant(i, j, k);
    let ring = tbl.orbifold().ring();
    if c.degree_parts().keys().any(|&d| d > 0) {
        return Err(format!("BG constant {i},{j},{k} has positive-degree terms"));
    }
    u64::try_from(ring.rational_image(&c)).map_err(|_| format!("negative constant at {i},{j},{k}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    for (name, g) in bg_groups() {
        let tbl = table_of(LinearAction::point(g.clone()));
        let oracle = class_sum_oracle(&g);
        let classes: Vec<usize> = tbl.basis().iter().map(|s| s.class_index).collect();
        for (i, &ci) in classes.iter().enumerate() {
            for (j, &cj) in classes.iter().enumerate() {
                for (k, &ck) in classes.iter().enumerate() {
                    let got = integer_constant(&tbl, i, j, k)?;
                    ensure(got == oracle[ci][cj][ck], || {
                        format!("{name}: constant ({i},{j},{k}) = {got}, oracle {}", oracle[ci][cj][ck])
                    })?;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("{} groups in {elapsed:.2?}", bg_groups().len()))
}

fn all_tables() -> Vec<(String, RingTable)> {
    let mut out: Vec<(String, RingTable)> = bg_groups()
        .into_iter()
        .map(|(n, g)| (format!("B{n}"), table_of(LinearAction::point(g))))
        .collect();
    out.extend(abelian_instances().into_iter().map(|(n, a)| (n, table_of(a))));
    out
}

fn criterion_2(tables: &[(String, RingTable)]) -> Outcome {
    for (name, t) in tables {
        for rep in [verify_identity(t), verify_commutativity(t)] {
            ensure(rep.passed(), || format!("{name}: {:?}", rep.counterexample))?;
        }
    }
    Ok(format!("{} tables", tables.len()))
}

fn criterion_3(tables: &[(String, RingTable)]) -> Outcome {
    let start = Instant::now();
    let mut triples = 0;
    for (i, (name, t)) in tables.iter().enumerate() {
        let rep = verify_associativity(t, ASSOC_SAMPLES, 1000 + i as u64);
        ensure(rep.passed(), || format!("{name}: {:?}", rep.counterexample))?;
        ensure(rep.basis_triples == t.len().pow(3), || format!("{name}: not exhaustive"))?;
        triples += rep.basis_triples + rep.sampled_triples;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{triples} triples over {} instances in {elapsed:.2?}", tables.len()))
}

fn criterion_4() -> Outcome {
    let mut pairs = 0;
    for (name, a) in abelian_instances() {
        let g = a.group();
        for x in g.elements() {
            for y in g.elements() {
                let ex = excess_exponents(&a, x, y).map_err(|e| e.to_string())?;
                let msum: u32 = ex.m.iter().sum();
                let lhs = a.age(x).unwrap().total + a.age(y).unwrap().total;
                let rhs = a.age(g.mul(x, y)).unwrap().total + BigRational::from_integer(msum.into());
                ensure(lhs == rhs, || format!("{name}: age identity fails"))?;
                pairs += 1;
            }
        }
        let t = table_of(a);
        let rep = verify_grading(&t);
        ensure(rep.passed(), || format!("{name}: {:?}", rep.counterexample))?;
    }
    Ok(format!("{pairs} element pairs"))
}

fn criterion_5() -> Outcome {
    let g = FiniteGroup::cyclic(2).unwrap();
    let a = LinearAction::diagonal(g, vec![vec![1], vec![1]]).unwrap();
    let orb = Orbifold::new(a).unwrap();
    let s = orb.inertia().position_of_label("[1]").ok_or("no sigma sector")?;
    let product = orb
        .product(&orb.basis_class(s), &orb.basis_class(s))
        .map_err(|e| e.to_string())?;
    let ring = orb.ring();
    let t2 = ring.pow(&ring.generator(0), 2);
    let mut expected = StringyClass::zero();
    expected.add_term(ring, orb.inertia().untwisted(), &t2);
    ensure(product == expected, || "1_s * 1_s is not t^2 1_e".into())?;
    ensure(!product.is_zero(), || "product vanishes integrally".into())?;
    let c = product.coefficient(orb.inertia().untwisted()).unwrap();
    ensure(ring.rational_image(c).is_zero(), || "product survives rationally".into())?;
    Ok("1_s * 1_s = t^2 * 1_e, nonzero, rational image 0".into())
}

fn criterion_6() -> Outcome {
    let mut actions: Vec<LinearAction> = abelian_instances().into_iter().map(|(_, a)| a).collect();
    actions.extend(bg_groups().into_iter().map(|(_, g)| LinearAction::point(g)));
    let mut checked = 0;
    for a in &actions {
        let g = a.group();
        for x in g.elements() {
            let lhs = a.age(x).unwrap().total + a.age(g.inverse(x)).unwrap().total;
            let codim = (a.dim() - a.fixed_subspace_dim(x).unwrap()) as i64;
            ensure(lhs == BigRational::from_integer(codim.into()), || {
                format!("age duality fails for {} in {g}", g.label(x))
            })?;
            checked += 1;
        }
    }
    for n in 1..=12u64 {
        let g = FiniteGroup::cyclic(n).unwrap();
        let a = LinearAction::diagonal(g, vec![vec![1], vec![n as i64 - 1]]).unwrap();
        let p = poincare_polynomial(&a).unwrap();
        let mut expected = std::collections::BTreeMap::new();
        expected.insert(BigRational::zero(), 1u64);
        if n > 1 {
            expected.insert(BigRational::from_integer(1.into()), n - 1);
        }
        ensure(p == expected, || format!("Poincaré polynomial of C2/Z{n}: {p:?}"))?;
    }
    Ok(format!("{checked} elements; Poincaré 1 + (n-1)q for n <= 12"))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10_000 {
        let m: [Eigen; 3] = std::array::from_fn(|_| {
            let r = rng.gen_range(1..=24u64);
            Eigen::new(rng.gen_range(0..r), r)
        });
        let defect = m.iter().fold(BigRational::zero(), |acc, e| acc + e.fraction());
        let shift = rng.gen_range(-20i64..=20);
        let b = TwistedLineBundleData::new(defect + BigRational::from_integer(shift.into()), m)
            .map_err(|e| e.to_string())?;
        let d = pushforward_degree(&b).map_err(|e| e.to_string())?;
        let (h0, h1) = cohomology_p1(&d);
        ensure(&h0 - &h1 == &d + 1, || format!("h0 - h1 != d + 1 for {m:?}"))?;
    }
    let groups: Vec<FiniteGroup> = (1..=24).map(|n| FiniteGroup::cyclic(n).unwrap()).collect();
    for _ in 0..10_000 {
        let g = &groups[rng.gen_range(0..groups.len())];
        let n = g.order() as i64;
        let chars: Vec<Vec<i64>> = (0..rng.gen_range(1..=4)).map(|_| vec![rng.gen_range(0..n)]).collect();
        let a = LinearAction::diagonal(g.clone(), chars).unwrap();
        let x = g.element(rng.gen_range(0..g.order())).unwrap();
        let y = g.element(rng.gen_range(0..g.order())).unwrap();
        for c in coordinate_obstructions(&a, x, y).map_err(|e| e.to_string())? {
            ensure((-2..=0).contains(&c.pushforward_degree), || {
                format!("constant-map degree {} for {:?}", c.pushforward_degree, c.monodromies)
            })?;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    Ok(format!("2 x 10^4 triples in {elapsed:.2?}"))
}

fn criterion_8() -> Outcome {
    for (name, g) in bg_groups() {
        let comps = enumerate_k03_bg(&g, DEFAULT_MAX_ORDER).map_err(|e| e.to_string())?;
        let mc = mass_check(&g, &comps);
        ensure(mc.ok, || format!("{name}: mass {} != {}", mc.lhs, mc.rhs))?;
        let from_moduli = structure_constants(&g, &comps);
        let tbl = table_of(LinearAction::point(g.clone()));
        let inertia = tbl.orbifold().inertia();
        let n = tbl.len();
        for i in 0..n {
            for j in 0..n {
                let key = (inertia.get(i).class_index, inertia.get(j).class_index);
                let row = from_moduli.get(&key).cloned().unwrap_or_default();
                for k in 0..n {
                    let m = row.get(&inertia.get(k).class_index).copied().unwrap_or(0);
                    let t = integer_constant(&tbl, i, j, k)?;
                    ensure(m == t, || format!("{name}: moduli {m} vs ring {t} at ({i},{j},{k})"))?;
                }
            }
        }
    }
    Ok(format!("{} groups", bg_groups().len()))
}

/// Solvability of r x = c coordinate by coordinate, by search: a free
/// solution satisfies |x| <= |c|, a torsion solution can be taken in [0, t).
fn roots_by_search(free: &[i64], torsion: &[(i64, i64)], r: i64) -> bool {
    free.iter().all(|&c| (-c.abs()..=c.abs()).any(|x| r * x == c))
        && torsion.iter().all(|&(t, c)| (0..t).any(|x| (r * x - c).rem_euclid(t) == 0))
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut yes = 0;
    for _ in 0..1000 {
        let free: Vec<i64> = (0..rng.gen_range(0..=3)).map(|_| rng.gen_range(-40..=40)).collect();
        let torsion: Vec<(i64, i64)> = (0..rng.gen_range(0..=3))
            .map(|_| {
                let t = rng.gen_range(1..=30);
                (t, rng.gen_range(0..t))
            })
            .collect();
        let r = rng.gen_range(1..=12i64);
        let mut element = free.clone();
        element.extend(torsion.iter().map(|&(_, c)| c));
        let pic = PicardGroupData::new(free.len(), torsion.iter().map(|&(t, _)| t).collect(), element)
            .map_err(|e| e.to_string())?;
        let got = root_section_exists(&pic, r as u64).map_err(|e| e.to_string())?;
        let want = roots_by_search(&free, &torsion, r);
        ensure(got == want, || format!("{pic:?}, r = {r}: {got} vs search {want}"))?;
        yes += usize::from(got);
    }
    Ok(format!("1000 instances, {yes} with roots"))
}

fn corpus() -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

fn commands_for(path: &Path) -> &'static [&'static str] {
    let name = path.file_name().unwrap().to_str().unwrap();
    if name.starts_with("rr_") {
        &["rr"]
    } else if name.starts_with("roots_") {
        &["roots"]
    } else if name.starts_with("pt_") {
        &["inertia", "ring", "verify", "poincare", "moduli"]
    } else if name.contains("_s3_") {
        &["inertia", "poincare"]
    } else {
        &["inertia", "ring", "verify", "poincare"]
    }
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_stringy"))
        .args(args)
        .env_remove("STRINGY_CACHE_DIR")
        .output()
        .expect("run stringy")
}

fn criterion_10() -> Outcome {
    let cache = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cache_dir = cache.path().to_str().unwrap();
    let mut runs = 0;
    for path in corpus() {
        let p = path.to_str().unwrap();
        for cmd in commands_for(&path) {
            for format in ["json", "table"] {
                let base = [*cmd, "--input", p, "--format", format, "--samples", "50"];
                let first = run_cli(&base);
                let second = run_cli(&base);
                ensure(first.status.code() == Some(0), || {
                    format!("{cmd} {p}: exit {:?}: {}", first.status.code(), String::from_utf8_lossy(&first.stderr))
                })?;
                ensure(first.stdout == second.stdout, || format!("{cmd} {p} --format {format}: outputs differ"))?;
                let mut cached = base.to_vec();
                cached.extend(["--cache", cache_dir]);
                let cold = run_cli(&cached);
                let warm = run_cli(&cached);
                ensure(cold.stdout == first.stdout && warm.stdout == first.stdout, || {
                    format!("{cmd} {p}: cached output differs")
                })?;
                runs += 4;
            }
        }
        // round trip: verify the exported table document itself
        if commands_for(&path).contains(&"ring") {
            let out = run_cli(&["ring", "--input", p]);
            let tmp = cache.path().join("table.json");
            std::fs::write(&tmp, &out.stdout).unwrap();
            let v = run_cli(&["verify", "--input", tmp.to_str().unwrap(), "--samples", "50"]);
            ensure(v.status.code() == Some(0), || format!("verify of table from {p} failed"))?;
            runs += 2;
        }
    }
    Ok(format!("{runs} CLI runs over {} corpus files", corpus().len()))
}

fn main() {
    let start = Instant::now();
    let tables = all_tables();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 BG tables equal class-sum constants", criterion_1()),
        ("2 identity and commutativity", criterion_2(&tables)),
        ("3 associativity, basis and sampled", criterion_3(&tables)),
        ("4 grading additivity", criterion_4()),
        ("5 integral refinement witness", criterion_5()),
        ("6 age duality and Poincaré polynomials", criterion_6()),
        ("7 twisted Riemann-Roch", criterion_7()),
        ("8 moduli masses and re-derived constants", criterion_8()),
        ("9 root-gerbe criterion", criterion_9()),
        ("10 CLI determinism", criterion_10()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed ({:.2?})",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
