//! End-to-end acceptance suite. Each test prints one pass/fail line.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use num_bigint::BigInt;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use cbr::diagram::{
    compose, enumerate_loop_free, left_closure, right_closure, tensor, Color, ColoredObject,
    Diagram,
};
use cbr::json;
use cbr::matrix::{rat, Rational, RationalMatrix};
use cbr::quantize::{glue, state_sum, CobordismWord, FieldSet};
use cbr::represent::{
    eval, eval_word, fold_word, is_faithful, verify_relations, DualityStructure, Event,
    GeneratorWord, Representation, Slice,
};
use cbr::semiring::{
    chi, q_add, q_compose_mul, q_monoidal_mul, q_monoidal_one, BoolSeries, ExponentVector,
    QElement,
};

fn report(number: u32, name: &str, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let verdict = if outcome.is_ok() { "pass" } else { "fail" };
    println!("criterion {number:2} ({name}): {verdict} [{elapsed:.2?}]");
    if let Err(e) = outcome {
        resume_unwind(e);
    }
}

fn random_duality(rng: &mut ChaCha8Rng, dim: usize) -> DualityStructure {
    loop {
        let mut m = RationalMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = rat(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=3));
                m.set(i, j, v.clone());
                m.set(j, i, v);
            }
        }
        if let Ok(s) = DualityStructure::from_matrix(m) {
            return s;
        }
    }
}

/// All colorings of a boundary of the given length over colors {0, 1}.
fn colorings(len: usize) -> Vec<ColoredObject> {
    (0..1u32 << len)
        .map(|bits| {
            ColoredObject::new((0..len).map(|i| Color((bits >> i) & 1)).collect())
        })
        .collect()
}

/// Boundary pairs (dom, cod) over {0, 1} with total length at most `max`.
fn boundary_pairs(max: usize) -> Vec<(ColoredObject, ColoredObject)> {
    let mut out = Vec::new();
    for m in 0..=max {
        for mp in 0..=(max - m) {
            for dom in colorings(m) {
                for cod in colorings(mp) {
                    out.push((dom.clone(), cod));
                }
            }
        }
    }
    out
}

fn with_loops(d: &Diagram, l0: u64, l1: u64) -> Diagram {
    let mut loops = BTreeMap::new();
    loops.insert(Color(0), l0);
    loops.insert(Color(1), l1);
    Diagram::new(
        d.dom().clone(),
        d.cod().clone(),
        d.pairs().collect(),
        loops,
    )
    .expect("adding loops preserves validity")
}

/// A random word over palette {0, 1} whose running boundary stays within
/// `max_strands`.
fn random_word(rng: &mut ChaCha8Rng, max_slices: usize, max_strands: usize) -> GeneratorWord {
    let start = ColoredObject::new(
        (0..rng.gen_range(0..=max_strands))
            .map(|_| Color(rng.gen_range(0..2u32)))
            .collect(),
    );
    let mut obj = start.clone();
    let mut slices = Vec::new();
    for _ in 0..rng.gen_range(0..=max_slices) {
        let mut candidates: Vec<Slice> = vec![Slice { event: Event::Id, pos: 0 }];
        let colors = obj.colors();
        for pos in 0..colors.len().saturating_sub(1) {
            candidates.push(Slice {
                event: Event::Braid(colors[pos], colors[pos + 1]),
                pos,
            });
            if colors[pos] == colors[pos + 1] {
                candidates.push(Slice {
                    event: Event::Counit(colors[pos]),
                    pos,
                });
            }
        }
        if colors.len() + 2 <= max_strands {
            for pos in 0..=colors.len() {
                for k in 0..2u32 {
                    candidates.push(Slice {
                        event: Event::Unit(Color(k)),
                        pos,
                    });
                }
            }
        }
        let s = candidates[rng.gen_range(0..candidates.len())];
        obj = GeneratorWord::apply_slice(&obj, &s).expect("candidate slices are valid");
        slices.push(s);
    }
    GeneratorWord::new(start, slices)
}

fn two_color_rep(d0: usize, d1: usize) -> Representation {
    Representation::standard(&[d0, d1])
}

#[test]
fn criterion_01_relation_suite() {
    report(1, "relation suite", || {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut rep = Representation::new();
        for (k, dim) in [(0u32, 2usize), (1, 3), (2, 2)] {
            rep.insert(Color(k), random_duality(&mut rng, dim));
        }
        let palette = vec![Color(0), Color(1), Color(2)];
        let rpt = verify_relations(&rep, &palette).unwrap();
        assert!(!rpt.checks.is_empty());
        for c in &rpt.checks {
            assert!(
                c.diagrams_equal && c.matrices_equal,
                "{} fails on colors {:?}",
                c.relation,
                c.colors
            );
        }
    });
}

#[test]
fn criterion_02_oracle_equivalence() {
    report(2, "layer-product oracle", || {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        let rep = two_color_rep(2, 3);
        for _ in 0..1000 {
            let w = random_word(&mut rng, 8, 4);
            let direct = eval(&rep, &fold_word(&w).unwrap()).unwrap();
            let layered = eval_word(&rep, &w).unwrap();
            assert_eq!(direct, layered, "word {w:?}");
        }
    });
}

#[test]
fn criterion_03_loop_value() {
    report(3, "loop value", || {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        let mut rep = two_color_rep(2, 3);
        rep.insert(Color(2), random_duality(&mut rng, 3));
        for (k, s) in rep.colors() {
            let m = eval(&rep, &Diagram::loop_(k)).unwrap();
            let expected = Rational::from(BigInt::from(s.dim()));
            assert_eq!(m.rows(), 1);
            assert_eq!(m.cols(), 1);
            assert_eq!(m.get(0, 0), &expected);
        }
    });
}

#[test]
fn criterion_04_normal_form_round_trip() {
    report(4, "normal form round trip", || {
        for (dom, cod) in boundary_pairs(6) {
            for base in enumerate_loop_free(&dom, &cod) {
                for l0 in 0..=2 {
                    for l1 in 0..=2 {
                        let d = with_loops(&base, l0, l1);
                        let nf = d.normal_form();
                        assert_eq!(nf.reassemble(), d, "round trip failed on {d:?}");
                        for k in [Color(0), Color(1)] {
                            let count = |obj: &ColoredObject| {
                                obj.colors().iter().filter(|&&c| c == k).count() as i64
                            };
                            let p = *nf.cups.get(&k).unwrap_or(&0) as i64;
                            let q = *nf.caps.get(&k).unwrap_or(&0) as i64;
                            let t = *nf.through.get(&k).unwrap_or(&0) as i64;
                            assert_eq!(count(d.dom()) - 2 * p, count(d.cod()) - 2 * q);
                            assert_eq!(count(d.dom()) - 2 * p, t);
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_05_closure_detects_equality() {
    report(5, "closure detects equality", || {
        for (dom, cod) in boundary_pairs(6) {
            let homset = enumerate_loop_free(&dom, &cod);
            if homset.is_empty() {
                continue;
            }
            let mut expected_loops = BTreeMap::new();
            for &k in dom.colors().iter().chain(cod.colors()) {
                *expected_loops.entry(k).or_insert(0u64) += 1;
            }
            for n in expected_loops.values_mut() {
                assert_eq!(*n % 2, 0);
                *n /= 2;
            }
            let pure_loops =
                Diagram::new(ColoredObject::unit(), ColoredObject::unit(), vec![], expected_loops)
                    .unwrap();
            for phi in &homset {
                for psi in &homset {
                    let composite =
                        compose(&left_closure(phi), &right_closure(psi)).unwrap();
                    assert_eq!(
                        phi == psi,
                        composite == pure_loops,
                        "closure test disagrees on {phi:?} vs {psi:?}"
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_06_trace_identity() {
    report(6, "trace identity", || {
        let rep = two_color_rep(2, 3);
        for (dom, cod) in boundary_pairs(6) {
            for phi in enumerate_loop_free(&dom, &cod) {
                let m = eval(&rep, &compose(&phi.reflect(), &phi).unwrap()).unwrap();
                let mut expected = Rational::from(BigInt::from(1));
                let mut counts: BTreeMap<Color, u64> = BTreeMap::new();
                for &k in dom.colors().iter().chain(cod.colors()) {
                    *counts.entry(k).or_insert(0) += 1;
                }
                for (k, n) in counts {
                    let d = Rational::from(BigInt::from(rep.structure(k).unwrap().dim()));
                    for _ in 0..n / 2 {
                        expected *= &d;
                    }
                }
                assert_eq!(m.trace(), expected, "trace identity failed on {phi:?}");
            }
        }
    });
}

#[test]
fn criterion_07_faithfulness_at_desk_scale() {
    report(7, "faithfulness at desk scale", || {
        // dims (2,3): injective on every small hom set
        let rep = two_color_rep(2, 3);
        let verdict = is_faithful(&[2, 3]).unwrap();
        assert!(verdict.faithful);
        assert!(verdict.witness.is_none());
        for m in 0..=2usize {
            for mp in 0..=2usize {
                for dom in colorings(m) {
                    for cod in colorings(mp) {
                        let mut morphisms = Vec::new();
                        for base in enumerate_loop_free(&dom, &cod) {
                            for l0 in 0..=2 {
                                for l1 in 0..=2 {
                                    morphisms.push(with_loops(&base, l0, l1));
                                }
                            }
                        }
                        let images: Vec<RationalMatrix> = morphisms
                            .iter()
                            .map(|d| eval(&rep, d).unwrap())
                            .collect();
                        for i in 0..images.len() {
                            for j in (i + 1)..images.len() {
                                assert_ne!(
                                    images[i], images[j],
                                    "collision between {:?} and {:?}",
                                    morphisms[i], morphisms[j]
                                );
                            }
                        }
                    }
                }
            }
        }

        // dims (2,4): not faithful, witness (2,-1), explicit collision
        let verdict = is_faithful(&[2, 4]).unwrap();
        assert!(!verdict.faithful);
        assert_eq!(verdict.witness, Some(vec![2, -1]));
        let rep24 = two_color_rep(2, 4);
        let double_loop = tensor(&Diagram::loop_(Color(0)), &Diagram::loop_(Color(0)));
        let a = eval(&rep24, &double_loop).unwrap();
        let b = eval(&rep24, &Diagram::loop_(Color(1))).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(0, 0), &Rational::from(BigInt::from(4)));

        // doubled odd primes
        assert!(is_faithful(&[6, 10, 14]).unwrap().faithful);
    });
}

#[test]
fn criterion_08_matching_counts() {
    report(8, "matching counts", || {
        let double_factorial = |n: u64| -> u64 {
            let mut acc = 1;
            let mut k = n;
            while k > 1 {
                acc *= k;
                k -= 2;
            }
            acc
        };
        for total in [2usize, 4, 6] {
            for m in 0..=total {
                let mp = total - m;
                let dom = ColoredObject::new(vec![Color(0); m]);
                let cod = ColoredObject::new(vec![Color(0); mp]);
                let got = enumerate_loop_free(&dom, &cod).len() as u64;
                assert_eq!(
                    got,
                    double_factorial(total as u64 - 1),
                    "hom set size for {m}+{mp} endpoints"
                );
            }
        }
    });
}

fn random_series(rng: &mut ChaCha8Rng) -> BoolSeries {
    let monomials = (0..rng.gen_range(0..=4)).map(|_| {
        ExponentVector::from_pairs(&[
            (0, rng.gen_range(0..=3u64)),
            (1, rng.gen_range(0..=3u64)),
        ])
    });
    BoolSeries::from_monomials(monomials)
}

fn random_qelement(rng: &mut ChaCha8Rng) -> QElement {
    let terms = (0..rng.gen_range(0..=2)).map(|_| {
        let w = random_word(rng, 4, 4);
        chi(&fold_word(&w).unwrap())
    });
    let mut acc = QElement::zero();
    for t in terms {
        acc = q_add(&acc, &t);
    }
    acc
}

#[test]
fn criterion_09_semiring_laws() {
    report(9, "semiring laws", || {
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        for _ in 0..500 {
            let (a, b, c) = (
                random_series(&mut rng),
                random_series(&mut rng),
                random_series(&mut rng),
            );
            assert_eq!(a.add(&a), a);
            assert_eq!(a.add(&b), b.add(&a));
            assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            assert_eq!(a.add(&BoolSeries::zero()), a);
            assert_eq!(a.mul(&b), b.mul(&a));
            assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            assert_eq!(a.mul(&BoolSeries::one()), a);
            assert_eq!(a.mul(&BoolSeries::zero()), BoolSeries::zero());
            assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));

            let (x, y, z) = (
                random_qelement(&mut rng),
                random_qelement(&mut rng),
                random_qelement(&mut rng),
            );
            assert_eq!(q_add(&x, &x), x);
            assert_eq!(q_add(&x, &y), q_add(&y, &x));
            assert_eq!(q_add(&q_add(&x, &y), &z), q_add(&x, &q_add(&y, &z)));
            assert_eq!(q_add(&x, &QElement::zero()), x);
            assert_eq!(
                q_compose_mul(&q_compose_mul(&x, &y), &z),
                q_compose_mul(&x, &q_compose_mul(&y, &z))
            );
            assert_eq!(
                q_compose_mul(&x, &q_add(&y, &z)),
                q_add(&q_compose_mul(&x, &y), &q_compose_mul(&x, &z))
            );
            assert_eq!(
                q_compose_mul(&q_add(&x, &y), &z),
                q_add(&q_compose_mul(&x, &z), &q_compose_mul(&y, &z))
            );
            assert_eq!(
                q_monoidal_mul(&q_monoidal_mul(&x, &y), &z),
                q_monoidal_mul(&x, &q_monoidal_mul(&y, &z))
            );
            assert_eq!(
                q_monoidal_mul(&x, &q_add(&y, &z)),
                q_add(&q_monoidal_mul(&x, &y), &q_monoidal_mul(&x, &z))
            );
            assert_eq!(q_monoidal_mul(&x, &q_monoidal_one()), x);
            assert_eq!(q_monoidal_mul(&q_monoidal_one(), &x), x);
        }

        // chi is multiplicative for both products
        for _ in 0..300 {
            let w1 = random_word(&mut rng, 4, 4);
            let phi = fold_word(&w1).unwrap();
            let w2 = {
                let mut w = random_word(&mut rng, 4, 4);
                w.start = w1.end().unwrap();
                // regenerate slices against the new start
                let mut obj = w.start.clone();
                let mut slices = Vec::new();
                for _ in 0..w.slices.len() {
                    let colors = obj.colors();
                    let mut candidates: Vec<Slice> =
                        vec![Slice { event: Event::Id, pos: 0 }];
                    for pos in 0..colors.len().saturating_sub(1) {
                        candidates.push(Slice {
                            event: Event::Braid(colors[pos], colors[pos + 1]),
                            pos,
                        });
                        if colors[pos] == colors[pos + 1] {
                            candidates.push(Slice {
                                event: Event::Counit(colors[pos]),
                                pos,
                            });
                        }
                    }
                    if colors.len() + 2 <= 4 {
                        for pos in 0..=colors.len() {
                            candidates.push(Slice {
                                event: Event::Unit(Color(rng.gen_range(0..2u32))),
                                pos,
                            });
                        }
                    }
                    let s = candidates[rng.gen_range(0..candidates.len())];
                    obj = GeneratorWord::apply_slice(&obj, &s).unwrap();
                    slices.push(s);
                }
                GeneratorWord::new(w.start.clone(), slices)
            };
            let psi = fold_word(&w2).unwrap();
            assert_eq!(
                chi(&compose(&psi, &phi).unwrap()),
                q_compose_mul(&chi(&phi), &chi(&psi))
            );
            let rho = fold_word(&random_word(&mut rng, 4, 4)).unwrap();
            assert_eq!(chi(&tensor(&phi, &rho)), q_monoidal_mul(&chi(&phi), &chi(&rho)));
        }
    });
}

#[test]
fn criterion_10_gluing_law() {
    report(10, "gluing law", || {
        let mut rng = ChaCha8Rng::seed_from_u64(1010);
        let mut checked = 0;
        while checked < 60 {
            // a shared middle boundary, then words into and out of it
            let w_left = random_word(&mut rng, 4, 4);
            let middle = w_left.end().unwrap();
            let mut left_words = vec![CobordismWord::new(
                w_left.start.clone(),
                middle.clone(),
                w_left.slices.clone(),
            )
            .unwrap()];
            let mut right_words = Vec::new();
            for _ in 0..20 {
                let w = random_word(&mut rng, 4, 4);
                if left_words.len() < 4
                    && w.start == w_left.start
                    && w.end().unwrap() == middle
                {
                    left_words
                        .push(CobordismWord::new(w.start.clone(), middle.clone(), w.slices).unwrap());
                } else if right_words.len() < 4 && w.start == middle {
                    let end = w.end().unwrap();
                    right_words
                        .push(CobordismWord::new(middle.clone(), end, w.slices).unwrap());
                }
            }
            // at minimum the identity word continues from the middle
            right_words.push(
                CobordismWord::new(middle.clone(), middle.clone(), vec![]).unwrap(),
            );
            let out = right_words[0].out_boundary.clone();
            let right_words: Vec<CobordismWord> = right_words
                .into_iter()
                .filter(|w| w.out_boundary == out)
                .take(4)
                .collect();
            let a = FieldSet::new(w_left.start.clone(), middle.clone(), left_words).unwrap();
            let b = FieldSet::new(middle.clone(), out.clone(), right_words).unwrap();
            let mut glued_fields = Vec::new();
            for x in &a.fields {
                for y in &b.fields {
                    glued_fields.push(glue(x, y).unwrap());
                }
            }
            let glued = FieldSet::new(w_left.start.clone(), out, glued_fields).unwrap();
            assert_eq!(
                state_sum(&glued).unwrap(),
                q_compose_mul(&state_sum(&a).unwrap(), &state_sum(&b).unwrap())
            );
            checked += 1;
        }
    });
}

#[test]
fn criterion_11_cli_golden() {
    report(11, "cli golden outputs", || {
        let run = |args: &[&str]| -> String {
            let (code, out, err) = cbr::cli::run(args.iter().copied());
            assert_eq!(code, 0, "stderr: {err}");
            out
        };
        assert_eq!(
            run(&["cbr", "check-faithful", "--dims", "2,3,5"]),
            "{\"faithful\":true}\n"
        );
        assert_eq!(
            run(&["cbr", "check-faithful", "--dims", "2,4"]),
            "{\"faithful\":false,\"witness\":[2,-1]}\n"
        );
        assert_eq!(
            run(&["cbr", "enumerate", "--dom", "0,0", "--cod", "0,0", "--loop-free"]),
            concat!(
                "[{\"cod\":[0,0],\"dom\":[0,0],\"loops\":{},\"pairs\":[[\"d0\",\"d1\"],[\"c0\",\"c1\"]]},",
                "{\"cod\":[0,0],\"dom\":[0,0],\"loops\":{},\"pairs\":[[\"d0\",\"c0\"],[\"d1\",\"c1\"]]},",
                "{\"cod\":[0,0],\"dom\":[0,0],\"loops\":{},\"pairs\":[[\"d0\",\"c1\"],[\"d1\",\"c0\"]]}]\n"
            )
        );
        // DSL round trips through the canonical JSON form
        for expr in [
            "i(0) ; e(0)",
            "(id(0)*i(0)) ; (e(0)*id(0))",
            "b(0,1) ; b(1,0)",
            "b(0,1) * i(2) ; id(1,0) * e(2)",
        ] {
            let d = cbr::dsl::parse_expr(expr).unwrap();
            let s = json::diagram_to_string(&d);
            assert_eq!(json::diagram_from_str(&s).unwrap(), d);
            assert_eq!(json::diagram_to_string(&json::diagram_from_str(&s).unwrap()), s);
        }
    });
}
