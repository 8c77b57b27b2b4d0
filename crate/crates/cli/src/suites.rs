//! One function per command. Each suite fills a [`Builder`] with records in
//! a fixed order; samples run in parallel, each from its own derived seed.

use std::time::Instant;

use plueckerlab::bundle_pairs::{
    evaluation_functional, random_distinct_points, random_points, search_plucker_form, symbolic_factor_check,
    BundlePairP1, DivisorReport, P1Point,
};
use plueckerlab::exterior::binomial;
use plueckerlab::grassmann::{classify_small_m, random_grass_point};
use plueckerlab::plucker_form::eval_expansion;
use plueckerlab::scalars::{derive_seed, determinant, rng_from_seed, solve, Rng};
use plueckerlab::{
    classify_point, det_map_rank, diagonal_factor_check, divisor_value, ev_m_det, eval_form, expand_form,
    lambda_image, lemma33_threshold, make_pair, mat_rank, mu_rank, multiplicity_at, plucker_embed,
    plucker_relations_hold, polar, random_exterior, span_dimension, tangent_codim, theorem31_classify,
    two_point_surjectivity, DenseMatrix, Error, ExteriorVector, Field, FieldElement, PointTuple, Result,
    VerdictTag,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::report::{Builder, Sample};

fn wire(w: &ExteriorVector) -> Value {
    serde_json::to_value(w.to_wire()).expect("wire format serializes")
}

fn wires(ws: &[ExteriorVector]) -> Value {
    Value::Array(ws.iter().map(wire).collect())
}

fn points_json(pts: &[P1Point]) -> Value {
    Value::Array(pts.iter().map(|p| json!([p.u().token(), p.v().token()])).collect())
}

fn shape_label(r: usize, m: usize) -> String {
    format!("r={r},m={m}")
}

fn pair_label(pair: &BundlePairP1) -> String {
    let split: Vec<String> = pair.splitting().iter().map(i64::to_string).collect();
    format!("splitting={},m={}", split.join(","), pair.m())
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs `trials` samples in parallel on a fresh seed stream and records them
/// in index order.
fn sample_par<F>(b: &mut Builder, cfg: &ExperimentConfig, check: &str, case: &str, trials: usize, f: F)
where
    F: Fn(usize, &mut Rng) -> Result<Sample> + Sync,
{
    let stream = derive_seed(cfg.seed, b.next_stream());
    let results: Vec<(u64, Result<Sample>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(stream, i as u64);
            (seed, f(i, &mut rng_from_seed(seed)))
        })
        .collect();
    for (seed, res) in results {
        b.push(check, case, Some(seed), res);
    }
}

/// A single deterministic record on its own seed stream.
fn single<F>(b: &mut Builder, cfg: &ExperimentConfig, check: &str, case: &str, f: F)
where
    F: FnOnce(u64) -> Result<Sample>,
{
    let seed = derive_seed(cfg.seed, b.next_stream());
    b.push(check, case, Some(seed), f(seed));
}

fn decomposable(field: Field, r: usize, n: usize, rng: &mut Rng) -> Result<ExteriorVector> {
    Ok(random_grass_point(field, r, n, rng)?.plucker().clone())
}

fn raw_form(slots: &[ExteriorVector]) -> Result<FieldElement> {
    Ok(ExteriorVector::wedge_all(slots)?.top_coefficient())
}

pub fn taylor_check(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    for (r, m) in cfg.shapes(&[(1, 2), (2, 3), (3, 3)]) {
        let case = shape_label(r, m);
        sample_par(b, cfg, "taylor", &case, cfg.trials_or(100), |_, g| {
            let w = PointTuple::random(field, r, m, g)?;
            let t: Vec<ExteriorVector> =
                (0..m).map(|_| random_exterior(field, r * m, r, g)).collect::<Result<_>>()?;
            // values of ε ↦ form(w + εt) at ε = 0..m, then the Vandermonde solve
            let mut vander = DenseMatrix::zeros(field, m + 1, m + 1);
            let mut values = Vec::with_capacity(m + 1);
            for e in 0..=m {
                let eps = field.from_i64(e as i64);
                for j in 0..=m {
                    vander.set(e, j, eps.pow(j as u32));
                }
                let moved: Vec<ExteriorVector> =
                    w.slots().iter().zip(&t).map(|(a, d)| a.add(&d.scale(&eps))).collect::<Result<_>>()?;
                values.push(raw_form(&moved)?);
            }
            let coeffs = solve(&vander, &values)?.ok_or(Error::RankDeficient { expected: m + 1, found: m })?;
            let mismatched: Vec<usize> = (0..=m)
                .filter(|&k| polar(k, &w, &t).map(|p| p != coeffs[k]).unwrap_or(true))
                .collect();
            Ok(Sample::new(mismatched.is_empty())
                .with("orders", m + 1)
                .with("mismatched_orders", mismatched)
                .input(json!({ "w": wires(w.slots()), "t": wires(&t) })))
        });
    }
    Ok(())
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn expand_check(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    for (r, m) in cfg.shapes(&[(2, 2), (2, 3)]) {
        let case = shape_label(r, m);
        let terms = expand_form(r, m)?;
        let expected = factorial(r * m) / factorial(r).pow(m as u32);
        let count = terms.len();
        single(b, cfg, "term-count", &case, |_| {
            Ok(Sample::new(count as u128 == expected).with("terms", count).with("expected", expected as u64))
        });
        sample_par(b, cfg, "expansion", &case, cfg.trials_or(100), |_, g| {
            let p = PointTuple::random(field, r, m, g)?;
            let (a, e) = (eval_expansion(&terms, &p), eval_form(&p));
            Ok(Sample::new(a == e).with("value", e.token()).input(json!({ "w": wires(p.slots()) })))
        });
    }
    Ok(())
}

pub fn multiplicity_bound(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    for (r, m) in cfg.shapes(&[(2, 3), (3, 3)]) {
        let case = shape_label(r, m);
        sample_par(b, cfg, "multiplicity", &case, cfg.trials_or(1000), |i, g| {
            let (kind, p) = match i % 4 {
                0 => ("random", PointTuple::random(field, r, m, g)?),
                1 => {
                    // slot 0 repeated in every slot but the last
                    let mut slots = PointTuple::random(field, r, m, g)?.slots().to_vec();
                    for s in 1..m.saturating_sub(1) {
                        slots[s] = slots[0].clone();
                    }
                    ("repeated", PointTuple::new(r, m, slots)?)
                }
                2 => ("diagonal-decomposable", PointTuple::diagonal(&decomposable(field, r, r * m, g)?)?),
                _ => ("diagonal-random", PointTuple::diagonal(&random_exterior(field, r * m, r, g)?)?),
            };
            let k = multiplicity_at(&p);
            Ok(Sample::new(k < m)
                .with("kind", kind)
                .with("multiplicity", k)
                .input(json!({ "w": wires(p.slots()) })))
        });
    }
    Ok(())
}

pub fn prop32(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    let all = [(2, 1, 6), (2, 2, 6), (3, 1, 9), (3, 2, 9), (3, 3, 9)];
    let cases: Vec<(usize, usize, usize)> = match cfg.r {
        None => all.to_vec(),
        Some(r) => {
            let d = cfg.m.map_or(3 * r, |m| r * m);
            (1..=d - r).filter(|&s| s <= 3).map(|s| (r, s, d)).collect()
        }
    };
    for (r, s, d) in cases {
        let case = format!("r={r},s={s},d={d}");
        let bound = binomial(d - r, s);
        sample_par(b, cfg, "mu-rank", &case, cfg.trials_or(100), |i, g| {
            let (kind, w) = match i % 3 {
                0 => ("decomposable", decomposable(field, r, d, g)?),
                1 => ("two-term", decomposable(field, r, d, g)?.add(&decomposable(field, r, d, g)?)?),
                _ => ("random", random_exterior(field, d, r, g)?),
            };
            if w.is_zero() {
                return Ok(Sample::new(true).with("kind", kind).with("skipped", "zero vector"));
            }
            let rank = mu_rank(&w, s)?;
            let oracle = plucker_relations_hold(&w)?;
            Ok(Sample::new(rank >= bound && (rank == bound) == oracle)
                .with("kind", kind)
                .with("rank", rank)
                .with("bound", bound)
                .with("decomposable", oracle)
                .input(json!({ "w": wire(&w) })))
        });
    }
    Ok(())
}

/// Verdict expected from independent oracles: the Plücker relations decide
/// membership, and `w ∧ w` decides whether the multiplicity test fires.
fn classifier_sample(w: &ExteriorVector, kind: &str) -> Result<Sample> {
    let start = Instant::now();
    let verdict = theorem31_classify(w)?;
    let elapsed = elapsed_ms(start);
    let expected = if plucker_relations_hold(w)? {
        VerdictTag::InGrassmannian
    } else if !w.wedge(w)?.is_zero() {
        VerdictTag::FailsMultiplicity
    } else {
        VerdictTag::FailsTangentBound
    };
    let codim_ok = match (verdict.tag, verdict.observed_codim) {
        (VerdictTag::InGrassmannian, Some(c)) => c == verdict.threshold,
        (VerdictTag::FailsTangentBound, Some(c)) => c > verdict.threshold,
        (VerdictTag::FailsMultiplicity, None) => true,
        _ => false,
    };
    Ok(Sample::new(verdict.tag == expected && codim_ok)
        .with("kind", kind)
        .with("verdict", verdict.tag)
        .with("expected", expected)
        .with("observed_codim", verdict.observed_codim)
        .with("threshold", verdict.threshold)
        .with("elapsed_ms", elapsed)
        .input(json!({ "w": wire(w) })))
}

pub fn theorem31(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    let shapes = cfg.shapes(&[(2, 3), (3, 3), (4, 3)]);
    for &(r, m) in &shapes {
        if m < 3 {
            return Err(Error::Unsupported(format!(
                "theorem31 needs m >= 3 (got m = {m}); use lemma33 for the m = 2 experiment"
            )));
        }
        lemma33_threshold(r, m)?;
    }
    for (r, m) in shapes {
        let case = shape_label(r, m);
        let n = r * m;
        let trials = cfg.trials_or(match r {
            2 => 200,
            3 => 100,
            _ => 20,
        });
        if r == 4 && m == 3 {
            let crafted = ExteriorVector::basis(field, n, &[1, 2, 3, 4])?
                .add(&ExteriorVector::basis(field, n, &[1, 2, 5, 6])?)?;
            single(b, cfg, "classify-crafted", &case, |_| classifier_sample(&crafted, "crafted"));
        }
        sample_par(b, cfg, "classify-decomposable", &case, trials, |_, g| {
            classifier_sample(&decomposable(field, r, n, g)?, "decomposable")
        });
        sample_par(b, cfg, "classify-random", &case, trials, |_, g| {
            classifier_sample(&random_exterior(field, n, r, g)?, "random")
        });
    }
    Ok(())
}

pub fn lemma33(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    for (r, m) in cfg.shapes(&[(2, 3), (3, 3), (4, 3), (2, 2), (3, 2)]) {
        let case = shape_label(r, m);
        let n = r * m;
        if m == 2 {
            sample_par(b, cfg, "small-m-codim", &case, cfg.trials_or(5), |_, g| {
                let w = decomposable(field, r, n, g)?;
                let v = classify_small_m(&w)?;
                Ok(Sample::new(v.observed_codim == Some(1)).with("observed_codim", v.observed_codim))
            });
            continue;
        }
        let threshold = lemma33_threshold(r, m)?;
        single(b, cfg, "threshold", &case, |_| Ok(Sample::new(true).with("threshold", threshold)));
        sample_par(b, cfg, "decomposable-codim", &case, cfg.trials_or(5), |_, g| {
            let w = decomposable(field, r, n, g)?;
            let c = tangent_codim(&PointTuple::diagonal(&w)?, m - 1)?;
            Ok(Sample::new(c == threshold).with("observed_codim", c).input(json!({ "w": wire(&w) })))
        });
        if r % 2 == 1 {
            // odd degree: every w has w ∧ w = 0, so the diagonal has full multiplicity
            sample_par(b, cfg, "nondecomposable-codim", &case, cfg.trials_or(5), |_, g| {
                let w = random_exterior(field, n, r, g)?;
                if plucker_relations_hold(&w)? {
                    return Ok(Sample::new(true).with("skipped", "decomposable draw"));
                }
                let c = tangent_codim(&PointTuple::diagonal(&w)?, m - 1)?;
                Ok(Sample::new(c > threshold).with("observed_codim", c).input(json!({ "w": wire(&w) })))
            });
        }
    }
    Ok(())
}

pub fn thm38(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    for (r, m) in cfg.shapes(&[(2, 3)]) {
        let case = shape_label(r, m);
        let n = r * m;
        let trials = cfg.trials_or(500);
        let run = |engineered: bool, i: usize, g: &mut Rng| -> Result<Sample> {
            let hyperplane = i % n;
            let mut points = Vec::with_capacity(m);
            while points.len() < m {
                let mut a = DenseMatrix::random(field, r, n, g);
                if engineered {
                    for i in 0..r {
                        a.set(i, hyperplane, field.zero());
                    }
                }
                match plucker_embed(&a) {
                    Ok(p) => points.push(p),
                    Err(Error::RankDeficient { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            let det = ev_m_det(&points)?;
            let slots: Vec<ExteriorVector> = points.iter().map(|p| p.plucker().clone()).collect();
            let form = eval_form(&PointTuple::new(r, m, slots.clone())?);
            let mut pass = det.is_zero() == form.is_zero();
            if engineered {
                pass &= det.is_zero();
            }
            Ok(Sample::new(pass)
                .with("det_zero", det.is_zero())
                .with("form_zero", form.is_zero())
                .with("equal", det == form)
                .input(json!({ "w": wires(&slots) })))
        };
        sample_par(b, cfg, "hyperplane-random", &case, trials, |i, g| run(false, i, g));
        sample_par(b, cfg, "hyperplane-engineered", &case, (trials / 10).max(1), |i, g| run(true, i, g));
    }
    Ok(())
}

fn balanced(r: usize, m: usize) -> Vec<i64> {
    vec![(m - 1) as i64; r]
}

/// Pairs for a P^1 suite: an explicit pair file or `--splitting` wins, then
/// `--r` / `--m` (balanced), then the defaults.
fn pairs(cfg: &ExperimentConfig, defaults: &[(Vec<i64>, usize)]) -> Result<Vec<BundlePairP1>> {
    if let Some(d) = &cfg.pair {
        return Ok(vec![d.build(cfg.prime)?]);
    }
    let field = cfg.field()?;
    if let Some(split) = &cfg.splitting {
        let m = match (cfg.m, cfg.r) {
            (Some(m), _) => m,
            (None, _) => {
                let r = split.len() as i64;
                (split.iter().sum::<i64>() / r.max(1) + 1) as usize
            }
        };
        if let Some(r) = cfg.r {
            if r != split.len() {
                return Err(Error::Malformed(format!("splitting {split:?} does not have r = {r} parts")));
            }
        }
        return Ok(vec![make_pair(split, m, field)?]);
    }
    if cfg.r.is_some() || cfg.m.is_some() {
        let (r, m) = (cfg.r.unwrap_or(2), cfg.m.unwrap_or(3));
        return Ok(vec![make_pair(&balanced(r, m), m, field)?]);
    }
    defaults.iter().map(|(s, m)| make_pair(s, *m, field)).collect()
}

fn balanced_defaults() -> Vec<(Vec<i64>, usize)> {
    [(1, 3), (2, 3), (2, 4), (3, 3)].iter().map(|&(r, m)| (balanced(r, m), m)).collect()
}

/// Random point tuples; every fourth one repeats a point.
fn tuple_with_coincidences(field: Field, m: usize, i: usize, g: &mut Rng) -> Vec<P1Point> {
    let mut pts = random_points(field, m, g);
    if i % 4 == 3 {
        pts[m - 1] = pts[0].clone();
    }
    pts
}

pub fn p1_divisor(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let field = cfg.field()?;
    let list = pairs(cfg, &balanced_defaults())?;
    let trials = cfg.trials_or(200);
    for pair in &list {
        let field = pair.field();
        let case = pair_label(pair);
        let (r, m) = (pair.r(), pair.m());
        single(b, cfg, "divisor-factor", &case, |seed| {
            let report = match diagonal_factor_check(pair, trials, seed) {
                Err(Error::IdenticallyZero) => DivisorReport::identically_zero(field, trials),
                other => other?,
            };
            let pass = report.all_matched && report.power_matched != Some(false);
            Ok(Sample::new(pass).with("report", &report))
        });
        sample_par(b, cfg, "pullback", &case, trials, |i, g| {
            let pts = tuple_with_coincidences(field, m, i, g);
            let det = divisor_value(pair, &pts)?;
            let slots = pts.iter().map(|x| classify_point(pair, x)).collect::<Result<Vec<_>>>()?;
            let form = eval_form(&PointTuple::new(r, m, slots)?);
            Ok(Sample::new(det.is_zero() == form.is_zero() && det == form)
                .with("vanishes", det.is_zero())
                .input(json!({ "points": points_json(&pts) })))
        });
        if matches!((r, m), (1, 3) | (2, 3)) && cfg.pair.is_none() && pair.is_balanced() {
            single(b, cfg, "symbolic", &case, |_| {
                let w = symbolic_factor_check(pair)?;
                Ok(Sample::new(w.constant.is_some())
                    .with("terms", w.terms)
                    .with("constant", w.constant.map(|c| c.token())))
            });
        }
    }
    // basis changes act on unbalanced pairs too
    let mut changed = list.clone();
    if cfg.pair.is_none() && cfg.splitting.is_none() && cfg.r.is_none() && cfg.m.is_none() {
        changed.push(make_pair(&[3, 1], 3, field)?);
        changed.push(make_pair(&[4, 0], 3, field)?);
    }
    for pair in &changed {
        let field = pair.field();
        let case = pair_label(pair);
        let n = pair.r() * pair.m();
        sample_par(b, cfg, "basis-change", &case, cfg.trials_or(50), |i, g| {
            let gm = loop {
                let gm = DenseMatrix::random(field, n, n, g);
                if mat_rank(&gm) == n {
                    break gm;
                }
            };
            let det_g = determinant(&gm)?;
            let other = pair.with_basis_change(&gm)?;
            let pts = tuple_with_coincidences(field, pair.m(), i, g);
            let (before, after) = (divisor_value(pair, &pts)?, divisor_value(&other, &pts)?);
            Ok(Sample::new(after == &det_g * &before && after.is_zero() == before.is_zero())
                .with("vanishes", before.is_zero())
                .input(json!({ "points": points_json(&pts) })))
        });
    }
    Ok(())
}

pub fn p1_detmap(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let mut defaults: Vec<(Vec<i64>, usize)> = balanced_defaults().into_iter().skip(1).collect();
    defaults.push((vec![4, 0], 3));
    for pair in &pairs(cfg, &defaults)? {
        let field = pair.field();
        let case = pair_label(pair);
        let rank = det_map_rank(pair);
        let surjective = pair.det_degree() + 1;
        single(b, cfg, "det-map-rank", &case, |_| {
            Ok(Sample::new(!pair.is_balanced() || rank == surjective)
                .with("rank", rank)
                .with("expected", pair.is_balanced().then_some(surjective)))
        });
        single(b, cfg, "span", &case, |seed| {
            let samples = binomial(pair.r() * pair.m(), pair.r());
            let span = span_dimension(pair, samples, seed);
            match span {
                Ok(s) => Ok(Sample::new(s == rank).with("span_rank", s).with("samples", samples)),
                // some point is a base point of the sections
                Err(Error::NotGloballyGenerated(x)) => {
                    Ok(Sample::new(!pair.is_balanced()).with("not_generated_at", x))
                }
                Err(e) => Err(e),
            }
        });
        let expected = pair.splitting().iter().all(|&d| d >= 1);
        sample_par(b, cfg, "two-point", &case, cfg.trials_or(50), |_, g| {
            let pts = random_distinct_points(field, 2, g);
            let onto = two_point_surjectivity(pair, &pts[0], &pts[1])?;
            Ok(Sample::new(onto == expected)
                .with("surjective", onto)
                .input(json!({ "points": points_json(&pts) })))
        });
    }
    Ok(())
}

pub fn p1_lambda(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    for pair in &pairs(cfg, &balanced_defaults())? {
        let field = pair.field();
        let case = pair_label(pair);
        let trials = cfg.trials_or(50);
        sample_par(b, cfg, "lambda-restriction", &case, trials, |_, g| {
            let x = P1Point::random(field, g);
            let gx = classify_point(pair, &x)?;
            let lam = lambda_image(pair, &evaluation_functional(pair, &x))?;
            Ok(Sample::new(lam.projectively_eq(&gx) && plucker_relations_hold(&gx)?)
                .input(json!({ "points": points_json(&[x]) })))
        });
        // informational: how often a random functional lands on the cone
        single(b, cfg, "random-functional", &case, |seed| {
            let mut g = rng_from_seed(seed);
            let mut on_cone = 0;
            for _ in 0..trials {
                let f: Vec<FieldElement> = (0..=pair.det_degree()).map(|_| field.sample(&mut g)).collect();
                match lambda_image(pair, &f) {
                    Ok(v) if plucker_relations_hold(&v)? => on_cone += 1,
                    Ok(_) | Err(Error::Indeterminacy) => {}
                    Err(e) => return Err(e),
                }
            }
            Ok(Sample::new(true).with("functionals", trials).with("on_cone", on_cone))
        });
    }
    Ok(())
}

pub fn p1_no_form(cfg: &ExperimentConfig, b: &mut Builder) -> Result<()> {
    let defaults = vec![(vec![3, 1], 3), (vec![4, 0], 3), (vec![2, 2], 3), (vec![2], 3)];
    for pair in &pairs(cfg, &defaults)? {
        let field = pair.field();
        let case = pair_label(pair);
        let trials = cfg.trials_or(500);
        // the evaluation matrix splits into one block per summand, of rank
        // min(d_i + 1, m); full rank forces every d_i = m - 1
        let expected = pair.is_balanced();
        single(b, cfg, "has-form", &case, |seed| {
            let search = search_plucker_form(pair, 20, seed)?;
            Ok(Sample::new(search.exists == expected)
                .with("has_plucker_form", search.exists)
                .with("trials", search.trials)
                .with("failure_bound", search.failure_bound))
        });
        if !expected {
            sample_par(b, cfg, "vanishing", &case, trials, |_, g| {
                let pts = random_points(field, pair.m(), g);
                let det = divisor_value(pair, &pts)?;
                Ok(Sample::new(det.is_zero()).input(json!({ "points": points_json(&pts) })))
            });
        }
    }
    Ok(())
}
