//! Acceptance suite: one PASS/FAIL line per criterion, exact comparisons.

mod common;

use common::*;
use kfiltr::filtration::{AffineForm, BlowupBody, CornerChart, Filtration, FiltrationError, OneParamSubgroup};
use kfiltr::invariants::{self as inv, InvariantError, TorusBasis};
use kfiltr::oracle::{self, TwistQuadratic};
use kfiltr::polytope::LatticePolytope;
use kfiltr::rational::{factorial, floor_int, pow, q, qbig, qi, Rational};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

struct Samples {
    /// Seeded random min-affine filtrations.
    random: Vec<Filtration>,
    /// Five one-parameter subgroups per random filtration.
    betas: Vec<Vec<OneParamSubgroup>>,
    /// Random filtrations plus the tent and a linear filtration on each polytope.
    all: Vec<Filtration>,
}

fn samples() -> Samples {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_611);
    let polys = test_polytopes();
    let mut random = Vec::new();
    let mut betas = Vec::new();
    while random.len() < 25 {
        let p = &polys[random.len() % polys.len()];
        let n = p.dim();
        let count = rng.gen_range(1..=3);
        let forms = (0..count)
            .map(|_| AffineForm::new((0..n).map(|_| rng.gen_range(-2..=2)).collect(), rng.gen_range(-2..=2)))
            .collect();
        random.push(Filtration::min_affine(p, forms).unwrap());
        betas.push(
            (0..5)
                .map(|_| OneParamSubgroup::new((0..n).map(|_| rng.gen_range(-2..=2)).collect(), rng.gen_range(-2..=2)))
                .collect(),
        );
    }
    let mut all = random.clone();
    all.push(tent());
    for p in &polys {
        let mut u = vec![0; p.dim()];
        u[0] = 1;
        all.push(Filtration::min_affine(p, vec![AffineForm::new(u, 0)]).unwrap());
    }
    Samples { random, betas, all }
}

fn standard_torus(p: &LatticePolytope) -> TorusBasis {
    let gens = (0..p.dim())
        .map(|i| {
            let mut u = vec![0; p.dim()];
            u[i] = 1;
            OneParamSubgroup::new(u, 0)
        })
        .collect();
    TorusBasis::new(p, gens).unwrap()
}

fn is_linear(f: &Filtration) -> bool {
    f.forms().is_some_and(|fs| fs.len() == 1)
}

fn c1_ehrhart(_: &Samples) -> Outcome {
    let polys = [
        ("segment", LatticePolytope::unit_interval()),
        ("2-simplex", LatticePolytope::unit_simplex(2)),
        ("square", LatticePolytope::unit_cube(2)),
        ("3-cube", LatticePolytope::unit_cube(3)),
    ];
    let mut checked = 0;
    for (name, p) in &polys {
        let h = p.ehrhart_fit().map_err(|e| format!("{name}: {e}"))?;
        for k in 1..=2 * p.dim() as u64 + 2 {
            let count = p.lattice_count(k);
            ensure!(h.eval(k) == qi(count as i64), "{name}: h({k}) = {} but count is {count}", h.eval(k));
            checked += 1;
        }
    }
    Ok(format!("{checked} counts on 4 polytopes"))
}

fn c2_futaki(_: &Samples) -> Outcome {
    for (name, p) in [("2-simplex", LatticePolytope::unit_simplex(2)), ("square", LatticePolytope::unit_cube(2))] {
        for u in [[1, 0], [0, 1], [1, 1]] {
            let fut = inv::futaki(&OneParamSubgroup::new(u.to_vec(), 0), &p).map_err(|e| e.to_string())?;
            ensure!(fut.is_zero(), "{name}, β = {u:?}: futaki = {fut}");
        }
    }
    Ok("6 subgroups, all exactly 0".into())
}

fn c3_twist_identities(s: &Samples) -> Outcome {
    let mut checked = 0;
    for (f, betas) in s.random.iter().zip(&s.betas) {
        for beta in betas {
            let t = f.twist(beta).map_err(|e| e.to_string())?;
            let b = Filtration::from_one_param(beta, f.domain()).map_err(|e| e.to_string())?;
            for k in 1..=12 {
                let w = |g: &Filtration, p| inv::weight(g, k, p).unwrap();
                ensure!(w(&t, 1) == w(f, 1) + w(&b, 1), "first-order identity fails at k = {k}");
                let mixed = inv::mixed_square_weight(f, beta, k).unwrap();
                ensure!(w(&t, 2) == w(f, 2) + 2 * mixed + w(&b, 2), "second-order identity fails at k = {k}");
                checked += 1;
            }
        }
    }
    Ok(format!("25 filtrations × 5 subgroups × k ≤ 12 ({checked} cases)"))
}

fn c4_norm_expansion(s: &Samples) -> Outcome {
    for (f, betas) in s.random.iter().zip(&s.betas) {
        for beta in betas {
            let t = f.twist(beta).unwrap();
            let b = Filtration::from_one_param(beta, f.domain()).unwrap();
            let lhs = inv::l2_norm2(&t).map_err(|e| e.to_string())?;
            let rhs = inv::l2_norm2(f).unwrap() + qi(2) * inv::inner_beta(f, beta).unwrap() + inv::l2_norm2(&b).unwrap();
            ensure!(lhs == rhs, "‖F_β‖² = {lhs} but expansion gives {rhs}");
        }
    }
    Ok("125 pairs exact".into())
}

fn c5_reduced_norm(s: &Samples) -> Outcome {
    let mut pairs: Vec<(Filtration, TorusBasis)> = Vec::new();
    let tent_torus = TorusBasis::new(&LatticePolytope::unit_interval(), vec![OneParamSubgroup::new(vec![1], 0)]).unwrap();
    pairs.push((tent(), tent_torus.clone()));
    for f in s.random.iter().take(9) {
        let torus = if pairs.len() % 2 == 0 {
            standard_torus(f.domain())
        } else {
            let mut u = vec![0; f.dim()];
            u[f.dim() - 1] = 1;
            TorusBasis::new(f.domain(), vec![OneParamSubgroup::new(u, 0)]).unwrap()
        };
        pairs.push((f.clone(), torus));
    }
    let step = q(1, 16);
    for (f, torus) in &pairs {
        let reduced = inv::reduced_norm2(f, torus).map_err(|e| e.to_string())?;
        let betas = torus.filtrations();
        let quad = TwistQuadratic {
            norm2: inv::l2_norm2(f).unwrap(),
            linear: betas.iter().map(|b| inv::inner(f, b).unwrap()).collect(),
            gram: betas.iter().map(|bi| betas.iter().map(|bj| inv::inner(bi, bj).unwrap()).collect()).collect(),
        };
        let radius = reduced
            .xi
            .iter()
            .map(|x| Rational::from_integer(floor_int(&x.abs()) + 2))
            .fold(qi(4), |a, b| a.max(b));
        let grid = oracle::coefficient_grid(torus.rank(), &step, &radius);
        let (min, _) = oracle::reduced_min(&quad, &grid);
        let bound = quad.grid_gap_bound(&step);
        ensure!(reduced.value <= min, "reduced {} exceeds grid minimum {min}", reduced.value);
        ensure!(&min - &reduced.value <= bound, "gap {} exceeds bound {bound}", &min - &reduced.value);
    }
    let tent_value = inv::reduced_norm2(&tent(), &tent_torus).unwrap().value;
    ensure!(tent_value == q(1, 48), "tent reduced norm is {tent_value}, expected 1/48");
    Ok("10 pairs within the grid bound; tent = 1/48".into())
}

fn c6_df_of_twist(s: &Samples) -> Outcome {
    let mut good = 0;
    for (f, betas) in s.random.iter().zip(&s.betas) {
        let Ok(d) = inv::df(f) else { continue };
        good += 1;
        for beta in betas {
            let t = f.twist(beta).unwrap();
            let dt = inv::df(&t).map_err(|e| format!("twist of a good filtration: {e}"))?;
            let fut = inv::futaki(beta, f.domain()).unwrap();
            ensure!(dt == &d + &fut, "DF(F_β) = {dt} but DF(F) + Fut(β) = {}", &d + &fut);
        }
    }
    ensure!(good > 0, "no good filtration in the sample set");
    Ok(format!("{good} good filtrations × 5 subgroups"))
}

fn c7_approximation(s: &Samples) -> Outcome {
    let mut linear = 0;
    for f in &s.all {
        for r in 1..=8 {
            let a = f.approximate(r).map_err(|e| e.to_string())?;
            let lhs = inv::chow(&a, 1).map_err(|e| e.to_string())?;
            let rhs = inv::chow(f, r).map_err(|e| e.to_string())?;
            ensure!(lhs <= rhs, "Chow_1(F_({r})) = {lhs} > Chow_{r}(F) = {rhs}");
            if is_linear(f) {
                ensure!(lhs == rhs, "linear filtration: Chow_1(F_({r})) = {lhs} ≠ {rhs}");
            }
        }
        linear += is_linear(f) as usize;
    }
    Ok(format!("{} filtrations × r ≤ 8; equality on {linear} linear ones", s.all.len()))
}

fn c8_oracle(s: &Samples) -> Outcome {
    for f in &s.all {
        for k in 1..=12 {
            let hist = oracle::filtered_dims(f, k).map_err(|e| e.to_string())?;
            for p in [1, 2] {
                let slow = oracle::histogram_moment(&hist, p);
                let fast = inv::weight(f, k, p).unwrap();
                ensure!(slow == fast, "k = {k}, p = {p}: oracle {slow} vs {fast}");
            }
        }
        let (b0, _) = inv::leading_coeffs(f).map_err(|e| e.to_string())?;
        let c = riemann_constant(f.domain(), &form_max(f), &form_lipschitz(f));
        let n = f.dim() as i32;
        for k in [40u64, 80] {
            let kq = qi(k as i64);
            let w = Rational::from_integer(inv::weight(f, k, 1).unwrap().into());
            let err = (w / pow(&kq, (n + 1) as u32) - &b0).abs();
            ensure!(&err * &kq <= c, "k = {k}: error {err} exceeds C/k with C = {c}");
        }
    }
    Ok(format!("{} filtrations, moments p = 1, 2 for k ≤ 12; C/k bound at k = 40, 80", s.all.len()))
}

fn c9_blowup(s: &Samples) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cases = [
        ("[0,1]²", LatticePolytope::unit_cube(2), 2u64),
        ("[0,1]²", LatticePolytope::unit_cube(2), 3),
        ("2-simplex", LatticePolytope::unit_simplex(2), 3),
    ];
    for (name, p, m) in &cases {
        let body = BlowupBody::new(p, 0, *m).map_err(|e| format!("{name}: {e}"))?;
        let vol = body.body().volume().clone();
        let expected = pow(&qi(*m as i64), 2) * p.volume() - Rational::one() / qbig(factorial(2));
        ensure!(vol == expected, "{name}, m = {m}: vol = {vol}, expected {expected}");
        let f = s
            .random
            .iter()
            .find(|f| f.domain() == p)
            .cloned()
            .unwrap_or_else(|| Filtration::min_affine(p, vec![AffineForm::new(vec![1, -1], 1)]).unwrap());
        let hat = f.blowup(&body).map_err(|e| e.to_string())?;
        let (eh, ef) = (hat.envelope().unwrap(), f.envelope().unwrap());
        let verts = body.body().rational_vertices();
        for _ in 0..50 {
            let w: Vec<i64> = verts.iter().map(|_| rng.gen_range(1..=12)).collect();
            let total = qi(w.iter().sum());
            let x: Vec<Rational> = (0..2)
                .map(|i| verts.iter().zip(&w).map(|(v, &c)| &v[i] * qi(c)).sum::<Rational>() / &total)
                .collect();
            let lhs = eh.eval(&x);
            let rhs = qi(*m as i64) * ef.eval(&body.to_base_point(&x));
            ensure!(lhs == rhs, "{name}, m = {m}: G_F̂({x:?}) = {lhs} but m·G_F(x/m) = {rhs}");
        }
    }
    Ok("3 volumes exact; 150 rational points exact".into())
}

fn c10_lambda(s: &Samples) -> Outcome {
    let mut checked = 0;
    for f in &s.all {
        if f.dim() != 2 {
            continue;
        }
        let ex = inv::extremes(f).map_err(|e| e.to_string())?;
        if ex.m_f == ex.mean {
            continue;
        }
        let lt = inv::lambda_threshold(f).map_err(|e| e.to_string())?;
        ensure!(lt.a_n == q(9, 4) && lt.b_n == q(13, 4), "A₂ = {}, B₂ = {}", lt.a_n, lt.b_n);
        ensure!(
            ex.m_f < lt.lambda && lt.lambda < ex.mean,
            "Λ = {} not strictly between M = {} and mean = {}",
            lt.lambda,
            ex.m_f,
            ex.mean
        );
        checked += 1;
    }
    ensure!(checked > 0, "no nonconstant surface filtration in the sample set");
    Ok(format!("{checked} nonconstant surface filtrations"))
}

fn c11_convergence(s: &Samples) -> Outcome {
    let mut good = 0;
    for f in &s.all {
        if inv::df(f).is_err() {
            continue;
        }
        good += 1;
        let torus = standard_torus(f.domain());
        for beta in torus.generators() {
            let exact = inv::inner_beta(f, beta).unwrap();
            let d40 = (inv::inner_r(f, beta, 40).unwrap() - &exact).abs();
            let d80 = (inv::inner_r(f, beta, 80).unwrap() - &exact).abs();
            ensure!(d80 < d40 || (d80.is_zero() && d40.is_zero()), "inner_r: |Δ|(80) = {d80} ≥ |Δ|(40) = {d40}");
        }
        let df_t = inv::df_rel(f, &torus).map_err(|e| e.to_string())?;
        let d40 = (inv::chow_rel(f, &torus, 40).unwrap() - &df_t).abs();
        let d80 = (inv::chow_rel(f, &torus, 80).unwrap() - &df_t).abs();
        ensure!(d80 < d40 || (d80.is_zero() && d40.is_zero()), "Chow_rT: |Δ|(80) = {d80} ≥ |Δ|(40) = {d40}");
    }
    ensure!(good > 0, "no good filtration in the sample set");
    Ok(format!("{good} good filtrations"))
}

fn c12_errors(_: &Samples) -> Outcome {
    match inv::df(&tent()) {
        Err(InvariantError::NotGood { period: 2 }) => {}
        other => return Err(format!("tent: expected NotGood with period 2, got {other:?}")),
    }
    let wedge = LatticePolytope::new(2, &[vec![0, 0], vec![2, 1], vec![1, 2]]).unwrap();
    let v = wedge.vertex_index(&[0, 0]).unwrap();
    match CornerChart::new(&wedge, v) {
        Err(FiltrationError::NonSmoothCorner { .. }) => {}
        other => return Err(format!("wedge corner: expected NonSmoothCorner, got {:?}", other.err())),
    }
    Ok("NotGood(period 2) and NonSmoothCorner raised".into())
}

fn main() {
    let start = Instant::now();
    let s = samples();
    let criteria: [(&str, fn(&Samples) -> Outcome); 12] = [
        ("Ehrhart exactness", c1_ehrhart),
        ("Futaki vanishing on cscK references", c2_futaki),
        ("twist identities", c3_twist_identities),
        ("norm expansion", c4_norm_expansion),
        ("reduced-norm optimality", c5_reduced_norm),
        ("DF of twist", c6_df_of_twist),
        ("approximation inequality", c7_approximation),
        ("oracle equivalence", c8_oracle),
        ("blowup geometry", c9_blowup),
        ("Λ threshold", c10_lambda),
        ("convergence diagnostics", c11_convergence),
        ("error paths", c12_errors),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(|| run(&s))).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", 12 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
