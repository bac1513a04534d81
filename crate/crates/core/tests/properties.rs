mod common;

use common::{bernstein_violation, isotropics, lemma_violation, log_grid, quantity_fn, rel, subordinators, REGVAR_DECADES};
use levy_tails::asymptotics::h_of;
use levy_tails::error::Error;
use levy_tails::inversion::{
    density_exact, forward_laplace_check, levy_tail_exact, radial_tail_exact, subordinator_tail_exact, total_mass, InversionConfig, LaplaceMethod, TailSource,
};
use levy_tails::processes::catalog::{isotropic_stable, stable_subordinator};
use levy_tails::processes::{catalog, estimate_regvar_index, Process, RegVarSource, Regime};
use levy_tails::quadrature::QuadratureConfig;
use proptest::prelude::*;

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

#[test]
fn bernstein_grid() {
    let grid = log_grid(1e-8, 1e8, 64);
    for s in subordinators() {
        assert_eq!(bernstein_violation(&s, &grid), None);
    }
}

#[test]
fn lemma_grid() {
    let lambdas = log_grid(1.0, 100.0, 32);
    let ts = log_grid(1e-4, 1e4, 32);
    for s in isotropics() {
        assert_eq!(lemma_violation(&s, &lambdas, &ts), None);
    }
}

#[test]
fn catalog_normalization() {
    for s in isotropics() {
        for t in [0.1, 1.0, 10.0] {
            let m = total_mass(&s, t, &quad()).unwrap();
            assert!((m - 1.0).abs() <= 1e-6, "{} t = {t}: mass {m}", s.name);
        }
    }
}

#[test]
fn round_trip_grid() {
    for s in subordinators() {
        for t in [0.1, 0.5, 1.0, 4.0] {
            for lambda in [0.25, 1.0, 2.0, 8.0] {
                let d = forward_laplace_check(&s, t, lambda, &quad(), TailSource::Inversion(InversionConfig::default())).unwrap();
                assert!(d <= 1e-4, "{} t = {t} lambda = {lambda}: {d:e}", s.name);
            }
        }
    }
}

#[test]
fn declared_indices_are_recovered() {
    for process in catalog() {
        let table = match &process {
            Process::Subordinator(s) => s.regvar.clone(),
            Process::Isotropic(s) => s.regvar.clone(),
        };
        for (q, info) in table.iter() {
            assert_eq!(info.source, RegVarSource::Declared);
            let f = quantity_fn(&process, *q);
            let est = estimate_regvar_index(&*f, info.location, REGVAR_DECADES).unwrap();
            assert!((est.index - info.index).abs() <= 0.05, "{} {q:?} {}: {} vs {}", process.name(), info.location, est.index, info.index);
        }
    }
}

#[test]
fn subordinator_tails_nonincreasing() {
    let cfg = InversionConfig::default();
    for s in subordinators() {
        for t in [0.1, 1.0] {
            let mut prev = f64::INFINITY;
            for r in log_grid(1e-3, 1e3, 32) {
                match subordinator_tail_exact(&s, t, r, &cfg) {
                    Ok(tail) => {
                        assert!(tail <= prev + 1e-8, "{} t = {t} r = {r}: {tail} after {prev}", s.name);
                        prev = tail;
                    }
                    // deep tails are below what double-precision inversion resolves
                    Err(Error::InversionInstability { .. }) if prev < 1e-4 => break,
                    Err(e) => panic!("{} t = {t} r = {r}: {e}", s.name),
                }
            }
        }
    }
}

#[test]
fn radial_tails_nonincreasing() {
    for s in isotropics() {
        let mut prev = f64::INFINITY;
        for r in log_grid(1e-2, 1e2, 32) {
            match radial_tail_exact(&s, 1.0, r, &quad()) {
                Ok(tail) => {
                    assert!(tail.value <= prev + 1e-8, "{} r = {r}: {} after {prev}", s.name, tail.value);
                    prev = tail.value;
                }
                Err(Error::PrecisionFloor { .. }) => break,
                Err(e) => panic!("{} r = {r}: {e}", s.name),
            }
        }
    }
}

#[test]
fn densities_unimodal() {
    for s in isotropics().into_iter().filter(|s| s.unimodal) {
        for t in [0.1, 1.0] {
            let q: Vec<f64> = log_grid(1e-2, 1e2, 32).into_iter().map(|rho| density_exact(&s, t, rho, &quad()).unwrap()).collect();
            for w in q.windows(2) {
                assert!(w[0] >= w[1] - 1e-10, "{} t = {t}: {:?}", s.name, w);
            }
        }
    }
}

#[test]
fn oracles_agree_with_closed_forms() {
    // Gaver-Stehfest in double precision resolves about five digits
    for (method, tol) in [(LaplaceMethod::Auto, 1e-6), (LaplaceMethod::FixedTalbot, 1e-6), (LaplaceMethod::GaverStehfest, 1e-4)] {
        let cfg = InversionConfig { method, ..Default::default() };
        for s in subordinators() {
            for t in [0.2, 1.0, 3.0] {
                for r in [0.05, 0.5, 2.0, 6.0] {
                    let Some(want) = s.exact_tail(t, r) else { continue };
                    if s.drift_b > 0.0 && (r - s.drift_b * t).abs() < 1e-12 {
                        continue;
                    }
                    let got = match subordinator_tail_exact(&s, t, r, &cfg) {
                        Ok(v) => v,
                        // a refusal from the weaker method is allowed, a wrong value is not
                        Err(Error::InversionInstability { .. }) if method == LaplaceMethod::GaverStehfest => continue,
                        Err(e) => panic!("{} {method:?} t = {t} r = {r}: {e}", s.name),
                    };
                    assert!((got - want).abs() <= tol * want.abs().max(1e-6), "{} {method:?} t = {t} r = {r}: {got} vs {want}", s.name);
                }
            }
            for r in [0.05, 0.5, 2.0] {
                let Some(want) = s.exact_levy_tail(r) else { continue };
                let got = levy_tail_exact(&s, r, &cfg).unwrap();
                assert!((got - want).abs() <= tol * want.abs().max(1e-6), "{} {method:?} Levy r = {r}: {got} vs {want}", s.name);
            }
        }
    }
    for s in isotropics() {
        let density_tol = if s.params.get("alpha") == Some(&1.0) || s.name == "cauchy" { 1e-8 } else { 1e-6 };
        for t in [0.1, 1.0] {
            for r in [0.05, 0.5, 2.0] {
                if let Some(want) = s.exact_density(t, r) {
                    let got = density_exact(&s, t, r, &quad()).unwrap();
                    assert!(rel(got, want) <= density_tol, "{} density t = {t} r = {r}: {got} vs {want}", s.name);
                }
                if let Some(want) = s.exact_radial_tail(t, r) {
                    let got = radial_tail_exact(&s, t, r, &quad()).unwrap();
                    assert!(rel(got.value, want) <= 1e-6, "{} tail t = {t} r = {r}: {} vs {want}", s.name, got.value);
                    assert!(got.routes_agree);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn h_between_zero_and_phi(idx in 0usize..5, e1 in -8.0f64..8.0, e2 in -8.0f64..8.0) {
        let s = &subordinators()[idx];
        let (a, b) = if e1 <= e2 { (10f64.powf(e1), 10f64.powf(e2)) } else { (10f64.powf(e2), 10f64.powf(e1)) };
        let (ha, hb) = (h_of(s, a).unwrap(), h_of(s, b).unwrap());
        prop_assert!(ha >= 0.0 && ha <= s.phi(a) * (1.0 + 1e-12));
        prop_assert!(hb >= ha * (1.0 - 1e-9));
        prop_assert!(s.phi(b) >= s.phi(a) * (1.0 - 1e-12));
        prop_assert!(s.phi_prime(b).unwrap() <= s.phi_prime(a).unwrap() * (1.0 + 1e-7));
    }

    #[test]
    fn lemma_inequality(idx in 0usize..6, lambda in 1.0f64..100.0, e in -4.0f64..4.0) {
        let s = &isotropics()[idx];
        let t = 10f64.powf(e);
        prop_assert!(s.psi(lambda * t) <= 2.0 * (1.0 + lambda * lambda) * s.psi(t) * (1.0 + 1e-12));
    }

    #[test]
    fn power_index_recovered(a in 0.05f64..1.95, at_zero in any::<bool>()) {
        let regime = if at_zero { Regime::AtZero } else { Regime::AtInfinity };
        let est = estimate_regvar_index(&|l: f64| 3.0 * l.powf(a), regime, 3).unwrap();
        prop_assert!((est.index - a).abs() <= 1e-3);
    }

    #[test]
    fn stable_round_trip(g in 0.1f64..0.9, t in 0.1f64..4.0, lambda in 0.25f64..8.0) {
        let s = stable_subordinator(g).unwrap();
        let d = forward_laplace_check(&s, t, lambda, &quad(), TailSource::Inversion(InversionConfig::default())).unwrap();
        prop_assert!(d <= 1e-4, "deviation {d:e}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn stable_mass_is_one(alpha in 0.2f64..2.0, d in 1usize..4, e in -1.0f64..1.0) {
        let s = isotropic_stable(alpha, d).unwrap();
        let m = total_mass(&s, 10f64.powf(e), &quad()).unwrap();
        prop_assert!((m - 1.0).abs() <= 1e-6, "mass {m}");
    }
}
