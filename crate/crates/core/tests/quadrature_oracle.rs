//! Kernel integrals against an independent Gauss-Jacobi / graded Gauss-Legendre oracle.

use gauss_quad::{GaussJacobi, GaussLegendre};
use tailkern::kernels::{eta_integrals, phi_optimal, BabKernel, Kernel};

const TOL: f64 = 1e-9;

fn jacobi_unit(c: f64, deg: usize, f: impl Fn(f64) -> f64) -> f64 {
    // ∫₀¹ s^c f(s) ds; the (1+x)^c weight on [-1,1] maps to (2s)^c.
    let q = GaussJacobi::new(deg.try_into().unwrap(), 0.0.try_into().unwrap(), c.try_into().unwrap());
    q.integrate(0.0, 1.0, f) * 2f64.powf(-c)
}

/// Gauss-Legendre on the dyadic mesh `[2^{-j-1}, 2^{-j}]`, j < 1000.
fn graded_unit(f: impl Fn(f64) -> f64) -> f64 {
    let q = GaussLegendre::new(30.try_into().unwrap());
    (0..1000)
        .map(|j| {
            let b = 0.5f64.powi(j);
            q.integrate(b / 2.0, b, &f)
        })
        .sum()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + b.abs())
}

#[test]
fn power_moments_match_oracle() {
    for k in Kernel::ALL {
        for &t in &[-0.9, -0.5, -0.25, 0.0, 0.3, 1.0, 2.5, 7.0] {
            let got = k.power_moment(t).unwrap();
            let want = if t < 0.0 {
                jacobi_unit(t, 40, |s| k.eval(s.min(1.0 - 1e-300)))
            } else {
                graded_unit(|s| s.powf(t) * k.eval(s))
            };
            assert!(close(got, want, TOL), "{k} t={t}: {got} vs {want}");
        }
    }
}

#[test]
fn weighted_square_integrals_match_oracle() {
    for k in Kernel::ALL {
        for &p in &[0.51, 0.55, 2.0 / 3.0, 0.75, 0.9, 1.0] {
            let got = k.weighted_square_integral(p).unwrap();
            let want = jacobi_unit(1.0 - 1.0 / p, 40, |s| k.eval(s).powi(2));
            assert!(close(got, want, TOL), "{k} p={p}: {got} vs {want}");
        }
        assert!(k.weighted_square_integral(0.5).is_err());
        assert!(k.weighted_square_integral(0.3).is_err());
    }
}

#[test]
fn eta_integrals_match_oracle() {
    for k in Kernel::ALL {
        for &tau in &[-0.1, -0.5, -1.0, -2.0, -4.0] {
            let a = -tau;
            let e = eta_integrals(k, tau).unwrap();
            let eta1 = graded_unit(|s| s.powf(a) * (1.0 + a * s.ln()) * k.eval(s));
            let eta2 = graded_unit(|s| s.powf(a) * k.eval(s));
            let eta3 = graded_unit(|s| (s.powf(a) - s.powf(2.0 * a)) * k.eval(s));
            assert!(close(e.eta1, eta1, TOL), "{k} tau={tau} eta1");
            assert!(close(e.eta2, eta2, TOL), "{k} tau={tau} eta2");
            assert!(close(e.eta3, eta3, TOL), "{k} tau={tau} eta3");
        }
    }
}

#[test]
fn indicator_closed_forms() {
    for &tau in &[-0.2, -1.0, -3.0] {
        let a = -tau;
        let e = eta_integrals(Kernel::Indicator, tau).unwrap();
        assert!(close(e.eta2, 1.0 / (1.0 + a), TOL));
        assert!(close(e.eta1, 1.0 / (1.0 + a).powi(2), TOL));
        assert!(close(e.eta3, 1.0 / (1.0 + a) - 1.0 / (1.0 + 2.0 * a), TOL));
    }
}

#[test]
fn phi_is_product_of_oracle_integrals() {
    for k in Kernel::ALL {
        for &(p, alpha) in &[(0.6, 0.3), (2.0 / 3.0, 0.5), (0.9, 1.2)] {
            let var = jacobi_unit(1.0 - 1.0 / p, 40, |s| k.eval(s).powi(2));
            let bias = graded_unit(|s| s.powf(alpha / p) * k.eval(s));
            let e = 2.0 * alpha + 1.0;
            let want = var.powf(1.0 / e) * bias.powf(-2.0 / e);
            let got = phi_optimal(k, p, alpha).unwrap();
            assert!(close(got, want, TOL), "{k} p={p} alpha={alpha}");
        }
    }
}

#[test]
fn bab_kernels_have_unit_mass() {
    for b in [BabKernel::Zero, BabKernel::One, BabKernel::Two] {
        for &p in &[0.3, 0.5, 2.0 / 3.0, 0.99, 1.0] {
            let mass = p * graded_unit(|s| b.eval(s, p));
            assert!(close(mass, 1.0, 1e-8), "{b:?} p={p}: {mass}");
        }
    }
}
