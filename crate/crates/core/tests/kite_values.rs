//! Values of the kite equations and their derivatives against independent
//! oracles: finite differences, symbolic expansion of polynomials, the
//! full planar equations, and closed forms at special shapes.

use kite_core::autodiff::{directional_jet, invert_f64, jacobian, jacobian_f64, param_derivative};
use kite_core::continuation::{trace_curve, CurveSlice, CurveStationaryHeights};
use kite_core::kite::{
    eval_f1, eval_f2, eval_f2_tilde, eval_g, eval_grad_g, eval_h1_h2, eval_lambda, eval_m,
    shape_to_positions, BifurcationCandidateSystem, CurveStationarySystem, FoldSystem, KiteVars,
    MaxMassSystem, SearchDomain, SymmetricHeightsSystem,
};
use kite_core::planar::FullPlanarSystem;
use kite_core::points::{certify_max_mass, SymmetryBreakingSystem};
use kite_core::prover::CampaignConfig;
use kite_core::{CertError, DomainError, Interval, IntervalBox, ParamSystem, Scalar, System};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FD_STEP: f64 = 1e-6;
const FD_TOL: f64 = 1e-4;

fn random_point<const N: usize>(rng: &mut ChaCha8Rng, region: &[(f64, f64); N]) -> [f64; N] {
    std::array::from_fn(|i| rng.gen_range(region[i].0..region[i].1))
}

fn central_difference<const N: usize, F: System<N>>(
    f: &F,
    x: &[f64; N],
    j: usize,
) -> Option<[f64; N]> {
    let mut hi = *x;
    let mut lo = *x;
    hi[j] += FD_STEP;
    lo[j] -= FD_STEP;
    let (fh, fl) = (f.eval(&hi).ok()?, f.eval(&lo).ok()?);
    Some(std::array::from_fn(|i| (fh[i] - fl[i]) / (2.0 * FD_STEP)))
}

/// On 100 random thin boxes: the Jacobian encloses the central
/// difference, the Jacobian of the box encloses the Jacobians at 100
/// interior points, and the first jet coefficient meets `J v`.
fn check_derivatives<const N: usize, F: System<N>>(f: &F, region: &[(f64, f64); N], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < 100 {
        let c = random_point(&mut rng, region);
        let bx: [Interval; N] = c.map(|x| Interval::new(x - 1e-8, x + 1e-8));
        let Ok((_, jb)) = jacobian(f, &bx) else {
            continue;
        };
        let Ok((_, jp)) = jacobian(f, &c.map(Interval::point)) else {
            continue;
        };
        let Some(fd) = (0..N)
            .map(|j| central_difference(f, &c, j))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        for i in 0..N {
            for j in 0..N {
                let tol = FD_TOL * (1.0 + fd[j][i].abs());
                assert!(
                    jp.0[i][j].inflate(tol).contains(fd[j][i]),
                    "{}: d{i}/d{j} at {c:?}: {:?} vs difference {}",
                    f.id(),
                    jp.0[i][j],
                    fd[j][i]
                );
            }
        }
        for _ in 0..100 {
            let p: [f64; N] = std::array::from_fn(|i| rng.gen_range(bx[i].lo()..=bx[i].hi()));
            let Ok((_, jq)) = jacobian(f, &p.map(Interval::point)) else {
                continue;
            };
            for i in 0..N {
                for j in 0..N {
                    assert!(
                        jb.0[i][j].encloses(&jq.0[i][j]),
                        "{}: isotonicity at {p:?}",
                        f.id()
                    );
                }
            }
        }
        let v: [Interval; N] = std::array::from_fn(|_| Interval::point(rng.gen_range(-1.0..1.0)));
        let jets = directional_jet(f, &c.map(Interval::point), &v).unwrap();
        let jv = jp.mul_vec(&v);
        for i in 0..N {
            assert!(
                jets[i].coeffs[1].intersect(&jv[i]).is_some(),
                "{}: jet vs J v",
                f.id()
            );
        }
        checked += 1;
    }
}

#[test]
fn jacobians_match_finite_differences() {
    check_derivatives(&MaxMassSystem, &[(1.05, 1.95), (1.45, 2.45)], 1);
    check_derivatives(
        &BifurcationCandidateSystem,
        &[(1.05, 1.95), (1.45, 2.45)],
        2,
    );
    check_derivatives(&CurveStationarySystem, &[(1.05, 1.95), (1.45, 2.45)], 3);
    check_derivatives(&CurveStationaryHeights, &[(0.1, 1.7), (1.0, 2.2)], 4);
    check_derivatives(
        &SymmetricHeightsSystem {
            m: Interval::point(0.5),
        },
        &[(0.1, 1.7), (1.0, 2.2)],
        5,
    );
    check_derivatives(
        &SymmetricHeightsSystem { m: Interval::ZERO },
        &[(0.1, 1.7), (1.0, 2.2)],
        6,
    );
    check_derivatives(
        &FoldSystem.at(Interval::ONE),
        &[(1.05, 1.9), (1.5, 2.45)],
        7,
    );
    check_derivatives(
        &SymmetryBreakingSystem,
        &[(0.4, 0.7), (1.5, 1.9), (0.8, 1.3), (0.8, 1.2)],
        8,
    );
    let planar = [(-0.5, 0.5), (0.3, 1.0), (-0.5, 0.5), (1.3, 2.0), (0.5, 2.0)];
    check_derivatives(
        &FullPlanarSystem::STANDARD.at(Interval::point(0.8)),
        &planar,
        9,
    );
    check_derivatives(&FullPlanarSystem::SWAPPED.at(Interval::ZERO), &planar, 10);
    check_derivatives(
        &CurveSlice {
            a: Interval::point(1.3),
        },
        &[(1.5, 2.4)],
        11,
    );
}

/// Coefficients of a polynomial in `t` up to degree 3.
type Cubic = [f64; 4];

fn mul(p: &Cubic, q: &Cubic) -> Cubic {
    let mut r = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 - i {
            r[i + j] += p[i] * q[j];
        }
    }
    r
}

/// `sum c_ij x^i y^j` over `i + j <= 3`.
struct RandomCubic {
    c: [[f64; 4]; 4],
}

impl RandomCubic {
    fn eval<S: Scalar>(&self, x: S, y: S) -> S {
        let mut acc = S::from_f64(0.0);
        for i in 0..4 {
            for j in 0..4 - i {
                acc = acc + S::from_f64(self.c[i][j]) * x.powi(i as u32) * y.powi(j as u32);
            }
        }
        acc
    }

    /// Expansion of `P(x0 + t vx, y0 + t vy)` by polynomial arithmetic.
    fn expand(&self, x0: [f64; 2], v: [f64; 2]) -> Cubic {
        let lx = [x0[0], v[0], 0.0, 0.0];
        let ly = [x0[1], v[1], 0.0, 0.0];
        let mut acc = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 - i {
                let mut term = [self.c[i][j], 0.0, 0.0, 0.0];
                for _ in 0..i {
                    term = mul(&term, &lx);
                }
                for _ in 0..j {
                    term = mul(&term, &ly);
                }
                for k in 0..4 {
                    acc[k] += term[k];
                }
            }
        }
        acc
    }
}

impl System<2> for RandomCubic {
    fn id(&self) -> String {
        "random cubic".into()
    }

    fn eval<S: Scalar>(&self, x: &[S; 2]) -> Result<[S; 2], DomainError> {
        Ok([self.eval(x[0], x[1]), self.eval(x[1], x[0])])
    }
}

#[test]
fn jets_match_symbolic_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..500 {
        let p = RandomCubic {
            c: std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-5.0..5.0))),
        };
        let x0 = [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)];
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let jets = directional_jet(&p, &x0.map(Interval::point), &v.map(Interval::point)).unwrap();
        let want = [p.expand(x0, v), p.expand([x0[1], x0[0]], [v[1], v[0]])];
        for i in 0..2 {
            for k in 0..4 {
                let tol = 5e-11 * (1.0 + want[i][k].abs());
                assert!(
                    jets[i].coeffs[k].inflate(tol).contains(want[i][k]),
                    "{:?} vs {}",
                    jets[i].coeffs[k],
                    want[i][k]
                );
            }
        }
    }
}

#[test]
fn fold_system_has_unit_mass_derivative() {
    let x = [Interval::point(1.3), Interval::point(2.2)];
    let gm = param_derivative(&FoldSystem, &x, Interval::point(0.9)).unwrap();
    assert_eq!(gm, [Interval::ONE, Interval::ONE]);
}

#[test]
fn mass_independent_system_has_zero_parameter_derivative() {
    struct Frozen;
    impl ParamSystem<2> for Frozen {
        fn id(&self) -> String {
            "frozen".into()
        }
        fn eval_mu<S: Scalar>(&self, x: &[S; 2], _: S) -> Result<[S; 2], DomainError> {
            Ok([x[0].sqr(), x[0] * x[1]])
        }
    }
    let d = param_derivative(
        &Frozen,
        &[Interval::ONE, Interval::point(2.0)],
        Interval::ONE,
    )
    .unwrap();
    assert_eq!(d, [Interval::ZERO, Interval::ZERO]);
}

#[test]
fn full_planar_mass_derivative_matches_differences() {
    let sys = FullPlanarSystem::STANDARD;
    let states = [
        [
            -0.009906700029766125,
            0.5423813608539542,
            0.04880076418676227,
            1.6905216297662835,
            1.0,
        ],
        [0.0, 0.5773502691896258, 0.0, 1.7320508075688772, 1.02],
        [
            -0.13477940502391195,
            0.5485425650707881,
            0.5904621819032521,
            1.5460132316491686,
            1.5,
        ],
    ];
    for (x, m) in states.iter().zip([0.996, 1.0, 2.0]) {
        let d = param_derivative(&sys, &x.map(Interval::point), Interval::point(m)).unwrap();
        let hi = sys.eval_mu(x, m + FD_STEP).unwrap();
        let lo = sys.eval_mu(x, m - FD_STEP).unwrap();
        for i in 0..5 {
            let fd = (hi[i] - lo[i]) / (2.0 * FD_STEP);
            assert!(
                d[i].inflate(1e-6 * (1.0 + fd.abs())).contains(fd),
                "{i}: {:?} vs {fd}",
                d[i]
            );
        }
    }
}

#[test]
fn fold_jacobian_matches_printed_entries() {
    let max = certify_max_mass(&CampaignConfig::default()).unwrap();
    let (_, j) = jacobian(&FoldSystem.at(max.m0), &max.shape.0).unwrap();
    let printed = [
        [4.5172058916474534, -2.3231832749879904],
        [231.5225618448226, -119.07124810379195],
    ];
    for i in 0..2 {
        for k in 0..2 {
            assert!(
                (j.0[i][k].mid() - printed[i][k]).abs() < 1e-10 * printed[i][k].abs().max(1.0),
                "{i}{k}: {:?}",
                j.0[i][k]
            );
        }
    }
    // A fold: the Jacobian is singular to working precision, so no
    // floating preconditioner exists and Krawczyk reports Unknown there.
    let det = j.0[0][0] * j.0[1][1] - j.0[0][1] * j.0[1][0];
    assert!(det.contains_zero(), "{det:?}");
    assert!(matches!(
        invert_f64(&j.mid()),
        Err(CertError::SingularMatrix)
    ));
}

#[test]
fn preconditioner_of_simple_matrices() {
    let c = invert_f64(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
    assert_eq!(c, [[1.0, 0.0], [0.0, 1.0]]);
    let c = invert_f64(&[[2.0, 0.0], [0.0, 4.0]]).unwrap();
    assert_eq!(c, [[0.5, 0.0], [0.0, 0.25]]);
}

#[test]
fn values_at_the_maximal_mass_shape() {
    let max = certify_max_mass(&CampaignConfig::default()).unwrap();
    let v = KiteVars::new(max.shape.0[0], max.shape.0[1]);
    assert!(eval_m(v).unwrap().contains(1.002713329037083));
    assert!(eval_f1(v).unwrap().contains_zero());
    assert!(eval_f2_tilde(v).unwrap().contains_zero());
    assert!(eval_g(v).unwrap().contains_zero());
    // The symmetric state with lambda from the reduced equations solves
    // all eight planar equations.
    let (q3, q4) = shape_to_positions(v).unwrap();
    let lambda = eval_lambda(v, max.m0).unwrap();
    assert!(lambda.intersect(&max.lambda0).is_some());
    let e = FullPlanarSystem::STANDARD
        .residuals(&[q3[0], q3[1], q4[0], q4[1], lambda], max.m0)
        .unwrap();
    assert!(e.iter().all(Interval::contains_zero), "{e:?}");
}

#[test]
fn lambda_closed_forms() {
    let e = SearchDomain::equilateral();
    let v = KiteVars::new(e.0[0], e.0[1]);
    let want = 0.25 + 3.0 * 3f64.sqrt() / 8.0 + 0.125;
    assert!(eval_lambda(v, Interval::ONE).unwrap().contains(want));
    let v = KiteVars::new(Interval::point(1.3), Interval::point(2.1));
    assert_eq!(
        eval_lambda(v, Interval::ZERO).unwrap(),
        Interval::point(0.25)
    );
}

#[test]
fn equilateral_row_solves_the_planar_equations() {
    let r3 = 3f64.sqrt();
    let e = SearchDomain::equilateral();
    let v = KiteVars::new(e.0[0], e.0[1]);
    let lambda = eval_lambda(v, Interval::ONE).unwrap();
    let x = [
        Interval::ZERO,
        Interval::ONE
            .checked_div(&Interval::point(r3))
            .unwrap()
            .inflate(1e-16),
        Interval::ZERO,
        Interval::point(r3).inflate(1e-16),
        lambda,
    ];
    let sys = FullPlanarSystem::STANDARD;
    assert!(sys
        .eval_mu(&x, Interval::ONE)
        .unwrap()
        .iter()
        .all(Interval::contains_zero));
    assert!(sys
        .residual_check(&x, Interval::ONE)
        .unwrap()
        .iter()
        .all(Interval::contains_zero));
}

#[test]
fn generic_states_are_not_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let sys = FullPlanarSystem::STANDARD;
    for _ in 0..1000 {
        let x: [f64; 5] = random_point(
            &mut rng,
            &[(-1.0, 1.0), (0.2, 2.0), (-1.0, 1.0), (0.6, 2.5), (0.2, 2.5)],
        );
        let m = rng.gen_range(0.1..3.0);
        let Ok(e) = sys.residuals(&x.map(Interval::point), Interval::point(m)) else {
            continue;
        };
        assert!(e.iter().any(|r| !r.contains_zero()));
        let r = sys
            .residual_check(&x.map(Interval::point), Interval::point(m))
            .unwrap();
        let perturbed = sys
            .eval_mu(&x.map(Interval::point), Interval::point(m))
            .unwrap();
        assert!(r.iter().chain(&perturbed).any(|v| !v.contains_zero()));
    }
}

#[test]
fn f2_numerator_has_the_sign_of_f2() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let (mut agree, mut decided) = (0, 0);
    while decided < 100 {
        let [a, b] = random_point(&mut rng, &[(1.01, 1.99), (1.45, 2.49)]);
        if (a - b).abs() < 0.05 || ((a - 2.0 / 3f64.sqrt()).abs() < 0.02 && (b - 2.0).abs() < 0.02)
        {
            continue;
        }
        let v = KiteVars::new(Interval::point(a), Interval::point(b));
        let (Ok(f2), Ok(ft)) = (eval_f2(v), eval_f2_tilde(v)) else {
            continue;
        };
        if f2.contains_zero() || ft.contains_zero() {
            continue;
        }
        decided += 1;
        agree += (f2.is_positive() == ft.is_positive()) as usize;
    }
    assert_eq!(agree, decided);
}

#[test]
fn derivative_of_g_in_b_is_positive_at_the_equilateral_shape() {
    let e = SearchDomain::equilateral();
    let (_, gb) = eval_grad_g(KiteVars::new(e.0[0], e.0[1])).unwrap();
    assert!(gb.is_positive());
}

#[test]
fn f1_matches_differences_of_m_and_g() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let [a, b] = random_point(&mut rng, &[(1.05, 1.95), (1.45, 2.45)]);
        if (a - b).abs() < 0.05 {
            continue;
        }
        let h = FD_STEP;
        let m = |a: f64, b: f64| eval_m(KiteVars::new(a, b)).unwrap();
        let g = |a: f64, b: f64| eval_g(KiteVars::new(a, b)).unwrap();
        let ma = (m(a + h, b) - m(a - h, b)) / (2.0 * h);
        let mb = (m(a, b + h) - m(a, b - h)) / (2.0 * h);
        let ga = (g(a + h, b) - g(a - h, b)) / (2.0 * h);
        let gb = (g(a, b + h) - g(a, b - h)) / (2.0 * h);
        let fd = ma * gb - mb * ga;
        let f1 = eval_f1(KiteVars::new(a, b)).unwrap();
        assert!(
            (f1 - fd).abs() <= 1e-5 * (1.0 + fd.abs()),
            "({a}, {b}): {f1} vs {fd}"
        );
    }
}

#[test]
fn mass_formulas_agree_on_the_curve() {
    let cfg = CampaignConfig::default();
    let points = trace_curve(1.01, 1.99, 60, &cfg).unwrap();
    let mut compared = 0;
    for p in &points {
        let v = KiteVars::new(p.a, p.b);
        assert!(eval_g(v).unwrap().contains_zero());
        let Ok((h1, h2)) = eval_h1_h2(v) else {
            continue;
        };
        assert!(
            h1.intersect(&h2).is_some(),
            "a = {:?}: {h1:?} vs {h2:?}",
            p.a
        );
        assert!(h1.intersect(&p.m).is_some());
        let (q3, q4) = shape_to_positions(v).unwrap();
        let e = FullPlanarSystem::STANDARD
            .residuals(&[q3[0], q3[1], q4[0], q4[1], p.lambda], p.m)
            .unwrap();
        assert!(e.iter().all(Interval::contains_zero));
        compared += 1;
    }
    assert!(compared >= 55);
}

#[test]
fn h2_is_not_continuous_at_the_equilateral_shape() {
    let e = SearchDomain::equilateral();
    for r in [1e-3, 1e-6, 1e-9] {
        let bx = IntervalBox::new([e.0[0].inflate(r), e.0[1].inflate(r)]);
        match eval_h1_h2(KiteVars::new(bx.0[0], bx.0[1])) {
            Err(_) => {}
            Ok((_, h2)) => assert!(h2.width() > 0.1, "{h2:?}"),
        }
    }
    let (h1, _) = eval_h1_h2(KiteVars::new(e.0[0].inflate(1e-9), e.0[1].inflate(1e-9)))
        .unwrap_or((Interval::ONE, Interval::ONE));
    assert!(h1.contains(1.0));
}

#[test]
fn floating_jacobian_matches_interval_jacobian() {
    let x = [1.2, 2.1];
    let (_, jf) = jacobian_f64(&MaxMassSystem, &x).unwrap();
    let (_, ji) = jacobian(&MaxMassSystem, &x.map(Interval::point)).unwrap();
    for i in 0..2 {
        for k in 0..2 {
            assert!(ji.0[i][k]
                .inflate(1e-12 * jf[i][k].abs())
                .contains(jf[i][k]));
        }
    }
}
