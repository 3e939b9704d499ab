//! Acceptance suite. Each test writes one `PASS`/`FAIL` line straight to
//! stderr, bypassing output capture, so the verdicts show up in plain
//! `cargo test` logs.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nullcone::algebra::{jacobi_check, killing_form, StructureTensor};
use nullcone::catalog::{self, CatalogVerdict, Filter};
use nullcone::classifier::{search_frame, SearchOptions, Verdict};
use nullcone::constructor::{
    appendix_families, complexified_class, format_class, pairing_plan, realform_bookkeeping, realize_split,
};
use nullcone::curvature::{invariant_suite, invariant_suite_graded, levi_civita, ricci, riemann};
use nullcone::frame::{apply_frame_map, certify_class, FlowedTensor, FrameMap};
use nullcone::rootsystems::{chevalley_split_form, CartanMatrix};
use nullcone::{q, ClassVector, Error, FrameLayout, Rational};

fn report(criterion: u32, title: &str, pass: bool, started: Instant, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let secs = started.elapsed().as_secs_f64();
    let line = format!("{verdict} criterion {criterion} ({title}) [{secs:.2}s]: {detail}\n");
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn within(started: Instant, budget_secs: u64) -> bool {
    started.elapsed() <= Duration::from_secs(budget_secs)
}

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(","))
}

#[test]
fn criterion_1_catalog_sweep() {
    let started = Instant::now();
    let report_ = catalog::verify(&Filter { verdict: Some(CatalogVerdict::InNullCone), ..Filter::default() }).unwrap();
    let checks: usize = report_.entries.iter().map(|e| e.checks.len()).sum();
    let failures: Vec<String> = report_.failures().map(|e| e.name.clone()).collect();
    let exact_margins = report_
        .entries
        .iter()
        .flat_map(|e| &e.checks)
        .all(|c| c.worst_margin.as_deref().and_then(|m| m.parse::<Rational>().ok()).is_some_and(|m| m <= q(-1, 1)));
    let pass = report_.passed && exact_margins && failures.is_empty() && within(started, 10);
    let detail =
        format!("{} realized entries, {checks} sample/signature checks, failures {failures:?}", report_.entries.len());
    report(1, "catalog sweep", pass, started, &detail);
}

#[test]
fn criterion_2_s545_and_sl2_semidirect() {
    let started = Instant::now();
    let l = FrameLayout::canonical(2, 1);
    let class = ClassVector::from_ints(&[2, 1]).unwrap();

    let s545 = &catalog::load("s_{5,45}").unwrap().samples[0].algebra;
    let c1 = certify_class(&l, s545, &class).unwrap();

    let sl2 = &catalog::load("sl(2,R)|+R^2").unwrap().samples[0].algebra;
    let c2 = certify_class(&l, sl2, &class).unwrap();
    let gamma = levi_civita(&l, sl2).unwrap();
    let ric = ricci(&riemann(&l, sl2, &gamma).unwrap(), &l).unwrap();
    let mut nonzero = Vec::new();
    for a in 0..5 {
        for b in 0..5 {
            let v = ric.form.get(a, b);
            if *v != Rational::from(0) {
                nonzero.push((a + 1, b + 1, v.clone()));
            }
        }
    }
    let ric_ok = nonzero == vec![(3, 3, q(-6, 1))];
    let minus_one = Some(q(-1, 1));
    let pass = c1.certified
        && c1.worst_margin == minus_one
        && c2.certified
        && c2.worst_margin == minus_one
        && ric_ok
        && within(started, 1);
    let detail = format!(
        "s_{{5,45}} margin {:?}, sl(2,R)|+R^2 margin {:?}, Ricci components {:?}",
        c1.worst_margin.map(|m| m.to_string()),
        c2.worst_margin.map(|m| m.to_string()),
        nonzero.iter().map(|(a, b, v)| format!("Ric_{a}{b}={v}")).collect::<Vec<_>>()
    );
    report(2, "s_{5,45} and sl(2,R)|+R^2", pass, started, &detail);
}

/// `(type, dim a, dim n, LCS, dim g)` as printed in the split-LCS table.
const SPLIT_LCS: [(&str, usize, usize, &str, usize); 5] = [
    ("G2", 2, 6, "[6,4,3,2,1,0]", 14),
    ("F4", 4, 24, "[24,20,17,14,11,8,6,4,3,2,1,0]", 52),
    ("E6", 6, 36, "[36,30,25,20,15,11,8,5,3,2,1,0]", 78),
    ("E7", 7, 63, "[63,56,50,44,38,32,27,22,18,14,11,8,6,4,3,2,1,0]", 133),
    ("E8", 8, 120, "[120,112,105,98,91,84,77,70,64,58,52,46,41,36,32,28,24,20,17,14,12,10,8,6,5,4,3,2,1,0]", 248),
];

#[test]
fn criterion_3_split_lcs_table() {
    let started = Instant::now();
    let mut mismatches = Vec::new();
    for (name, dim_a, dim_n, lcs, dim_g) in SPLIT_LCS {
        let g = chevalley_split_form(&CartanMatrix::parse(name).unwrap());
        let got = list(&g.lcs_dims());
        let row_ok = g.dim_a == dim_a && g.dim_n() == dim_n && got == lcs && g.dim() == dim_g;
        if !row_ok {
            mismatches.push(format!("{name}: a={} n={} lcs={got} dim={}", g.dim_a, g.dim_n(), g.dim()));
        }
    }
    let pass = mismatches.is_empty() && within(started, 30);
    report(3, "split LCS table", pass, started, &format!("5 rows, mismatches {mismatches:?}"));
}

/// `(type, dims of g_λ for λ > 0, class)` as printed in the split class table.
const SPLIT_CLASSES: [(&str, &str, &str); 5] = [
    ("G2", "[2,1,1,1,1]", "[11,9,7,5,3×2,1×2]"),
    ("F4", "[4,3,3,3,3,2,2,1,1,1,1]", "[23,21,19,17,15×2,13×2,11×3,9×3,7×3,5×3,3×4,1×4]"),
    ("E6", "[6,5,5,5,4,3,3,2,1,1,1]", "[23,21,19,17×2,15×3,13×3,11×4,9×5,7×5,5×5,3×6,1×6]"),
    (
        "E7",
        "[7,6,6,6,6,5,5,4,4,3,3,2,2,1,1,1,1]",
        "[35,33,31,29,27×2,25×2,23×3,21×3,19×4,17×4,15×5,13×5,11×6,9×6,7×6,5×6,3×7,1×7]",
    ),
    (
        "E8",
        "[8,7,7,7,7,7,7,6,6,6,6,5,5,4,4,4,4,3,3,2,2,2,2,1,1,1,1,1,1]",
        "[59,57,55,53,51,49,47×2,45×2,43×2,41×2,39×3,37×3,35×4,33×4,31×4,29×4,27×5,25×5,23×6,21×6,19×6,17×6,\
15×7,13×7,11×7,9×7,7×7,5×7,3×8,1×8]",
    ),
];

#[test]
fn criterion_4_split_class_table() {
    let started = Instant::now();
    let mut mismatches = Vec::new();
    for (name, dims, class) in SPLIT_CLASSES {
        let g = chevalley_split_form(&CartanMatrix::parse(name).unwrap());
        let plan = pairing_plan(&g).unwrap();
        let got = plan.class_multiset();
        if list(&g.dims) != dims || format_class(&got) != class {
            mismatches.push(format!("{name}: dims {} class {}", list(&g.dims), format_class(&got)));
        }
        let doubled: Vec<(u64, usize)> = got.iter().map(|&(v, k)| (v, 2 * k)).collect();
        let complex = complexified_class(&g).unwrap().class_multiset();
        if complex != doubled {
            mismatches.push(format!("{name}^C: class {}", format_class(&complex)));
        }
    }
    let pass = mismatches.is_empty() && within(started, 10);
    report(4, "split class table", pass, started, &format!("5 split + 5 complexified rows, mismatches {mismatches:?}"));
}

#[test]
fn criterion_5_split_e8_realization() {
    let started = Instant::now();
    let r = realize_split("E8").unwrap();
    let dim_ok = r.algebra.dim() == 256 && r.layout == FrameLayout::canonical(128, 0);
    let violations = jacobi_check(&r.algebra).len();
    let cert = certify_class(&r.layout, &r.algebra, &r.class).unwrap();
    let suite = invariant_suite_graded(&r.layout, &r.algebra, Some(&r.class)).unwrap();
    let nonzero: Vec<String> =
        suite.named().into_iter().filter(|(_, v)| *v != Rational::from(0)).map(|(n, v)| format!("{n}={v}")).collect();
    let pass =
        dim_ok && violations == 0 && cert.certified && cert.saturated && nonzero.is_empty() && within(started, 600);
    let detail = format!(
        "dim {} at O({},{}), {} nonzero constants, {violations} Jacobi violations, saturated {}, nonzero invariants {nonzero:?}",
        r.algebra.dim(),
        r.layout.p(),
        r.layout.p() + r.layout.k(),
        r.algebra.nnz(),
        cert.saturated
    );
    report(5, "split E8 realization", pass, started, &detail);
}

#[test]
fn criterion_6_appendix_consistency() {
    let started = Instant::now();
    let (mut rows, mut root_checked) = (0, 0);
    let mut bad = Vec::new();
    for f in appendix_families() {
        let grid: Vec<Vec<i64>> = match f.params.len() {
            0 => vec![vec![]],
            1 => (1..=8).map(|n| vec![n]).collect(),
            _ => (1..=6).flat_map(|p| (1..=6).map(move |q| vec![p, q])).collect(),
        };
        for params in grid {
            match realform_bookkeeping(f.id, &params) {
                Ok(row) => {
                    rows += 1;
                    if row.root_check == Some(true) {
                        root_checked += 1;
                    }
                    if !row.consistent() {
                        bad.push(format!(
                            "{}{:?}: dim g {} vs {}+{}+2·{}, m {} vs {}, total {} vs {}",
                            f.id,
                            row.params,
                            row.dim_g,
                            row.dim_m0,
                            row.dim_a,
                            row.dim_n,
                            row.m,
                            row.dim_m0 + row.dim_a,
                            row.total_dim,
                            row.dim_g + row.m
                        ));
                    }
                }
                Err(Error::ParameterOutOfRange(_)) => {}
                Err(e) => panic!("{} {params:?}: {e}", f.id),
            }
        }
    }
    let pass = bad.is_empty() && within(started, 5);
    report(
        6,
        "appendix consistency",
        pass,
        started,
        &format!("{rows} rows checked, {root_checked} matched root counts, {} inconsistent: {bad:?}", bad.len()),
    );
}

#[test]
fn criterion_7_negative_controls() {
    let started = Instant::now();
    let exhaustive = SearchOptions { prune: false, explicit_signs: true, ..SearchOptions::default() };
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["s_{3,3}", "su(2)", "sl(2,R)", "su(2)+R"] {
        let e = catalog::load(name).unwrap();
        for s in &e.samples {
            for &sig in &e.signatures {
                let r = search_frame(&s.algebra, sig, &exhaustive).unwrap();
                ok &= r.verdict == Verdict::InfeasibleForAllSearchedFrames;
                lines.push(format!(
                    "{name}{} at {sig:?}: {:?} over {} frames",
                    s.label(),
                    r.verdict,
                    r.frames_searched
                ));
            }
        }
    }
    report(7, "negative controls", ok && within(started, 60), started, &lines.join("; "));
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 };
    q(num, rng.gen_range(1..=4))
}

/// Replaces the family parameter `a = 1/2` by a fresh value and rescales
/// every basis vector by a random nonzero rational.
fn randomize(t: &StructureTensor, a_half: bool, rng: &mut ChaCha8Rng) -> StructureTensor {
    let half = q(1, 2);
    let a = q(rng.gen_range(1..=12), 13) * if rng.gen_bool(0.5) { q(1, 1) } else { q(-1, 1) };
    let scale: Vec<Rational> = (0..t.dim()).map(|_| random_rational(rng)).collect();
    StructureTensor::from_entries(
        t.dim(),
        t.entries().map(|(x, y, z, v)| {
            let v = if a_half && *v == half { a.clone() } else { v.clone() };
            let factor = &(&scale[x - 1] * &scale[y - 1]) / &scale[z - 1];
            ((x, y, z), v * factor)
        }),
    )
    .unwrap()
}

/// Random isometry of the canonical layout: permute null pairs, swap sides
/// within pairs, permute transverse directions, and flip signs pairwise.
fn random_isometry(l: &FrameLayout, rng: &mut ChaCha8Rng) -> FrameMap {
    let (p, k) = (l.p(), l.k());
    let mut pairs: Vec<usize> = (0..p).collect();
    pairs.shuffle(rng);
    let mut trans: Vec<usize> = (0..k).collect();
    trans.shuffle(rng);
    let mut permutation = vec![0; 2 * p + k];
    let mut signs = vec![1i8; 2 * p + k];
    for i in 0..p {
        let swap = rng.gen_bool(0.5);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let (lo, hi) = (2 * pairs[i] + 1, 2 * pairs[i] + 2);
        permutation[2 * i] = if swap { hi } else { lo };
        permutation[2 * i + 1] = if swap { lo } else { hi };
        signs[2 * i] = sign;
        signs[2 * i + 1] = sign;
    }
    for j in 0..k {
        permutation[2 * p + j] = 2 * p + trans[j] + 1;
        signs[2 * p + j] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    FrameMap { permutation, signs }
}

fn ad_invariant(t: &StructureTensor) -> bool {
    let b = killing_form(t);
    let n = t.dim();
    // B([e_x, e_y], e_z) + B(e_y, [e_x, e_z]) = 0, with 0-based brackets and 1-based B
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                let lhs: Rational = t.basis_bracket(x, y).iter().map(|(c, v)| v * b.get(c + 1, z + 1)).sum();
                let rhs: Rational = t.basis_bracket(x, z).iter().map(|(c, v)| v * b.get(y + 1, c + 1)).sum();
                (lhs + rhs) == Rational::from(0)
            })
        })
    })
}

#[test]
fn criterion_8_property_suites() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_2024);
    let pool: Vec<_> = catalog::entries().iter().filter(|e| e.dim <= 6).collect();
    let base = q(2, 1);
    let (mut killing, mut group, mut decay, mut frames, mut decay_cases) = (0, 0, 0, 0, 0);
    let mut failures = Vec::new();
    for case in 0..200 {
        let e = pool.choose(&mut rng).unwrap();
        let s = e.samples.choose(&mut rng).unwrap();
        let a_half = s.params.get("a").is_some_and(|v| v == "1/2");
        let t = randomize(&s.algebra, a_half, &mut rng);
        let sig_index = rng.gen_range(0..e.signatures.len());
        let (p, k) = e.signatures[sig_index];
        let l = FrameLayout::canonical(p, k);
        if !jacobi_check(&t).is_empty() {
            failures.push(format!("case {case} {}: randomization broke Jacobi", e.name));
            continue;
        }

        if ad_invariant(&t) {
            killing += 1;
        } else {
            failures.push(format!("case {case} {}: Killing form not ad-invariant", e.name));
        }

        let x = ClassVector::from_ints(&(0..p).map(|_| rng.gen_range(0..=4)).collect::<Vec<_>>()).unwrap();
        let (t1, t2) = (q(rng.gen_range(-6..=6), rng.gen_range(1..=3)), q(rng.gen_range(-6..=6), rng.gen_range(1..=3)));
        let flowed = FlowedTensor::from_tensor(&t, base.clone()).unwrap();
        let composed = flowed.flow(&l, &x, &t1).unwrap().flow(&l, &x, &t2).unwrap();
        if composed == flowed.flow(&l, &x, &(&t1 + &t2)).unwrap() {
            group += 1;
        } else {
            failures.push(format!("case {case} {}: flow group law", e.name));
        }

        if e.verdict == CatalogVerdict::InNullCone && t.nnz() > 0 {
            decay_cases += 1;
            let cls = &e.classes[sig_index];
            let start = q(rng.gen_range(0..=8), rng.gen_range(1..=3));
            let now = flowed.flow(&l, cls, &start).unwrap();
            let later = flowed.flow(&l, cls, &(&start + &q(1, 1))).unwrap();
            let bound = now.scale_value(now.max_abs().unwrap(), &q(-1, 1));
            if later.max_abs().unwrap().abs_cmp(&bound, &base) != std::cmp::Ordering::Greater {
                decay += 1;
            } else {
                failures.push(format!("case {case} {}: flowed maximum did not shrink by the base", e.name));
            }
        }

        let map = random_isometry(&l, &mut rng);
        let moved = apply_frame_map(&t, &map, Some(&l)).unwrap();
        if invariant_suite(&l, &t).unwrap() == invariant_suite(&l, &moved).unwrap() {
            frames += 1;
        } else {
            failures.push(format!("case {case} {}: invariants changed under {map:?}", e.name));
        }
    }
    let pass = failures.is_empty() && decay_cases > 0 && within(started, 60);
    let detail = format!(
        "200 algebras: Killing ad-invariance {killing}, flow group law {group}, decay {decay}/{decay_cases} certified, \
frame-map invariance {frames}; failures {failures:?}"
    );
    report(8, "property suites", pass, started, &detail);
}
