use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wordrank::spectral::{spectral_radius, Side};

/// Characteristic polynomial coefficients `c[0..=n]` of `det(xI − A)`,
/// leading coefficient first, by the Faddeev–LeVerrier recursion.
fn char_poly(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let mut c = vec![1.0];
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 1..=n {
        m = a * &m + &id * c[k - 1];
        let am = a * &m;
        c.push(-am.trace() / k as f64);
    }
    c
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &k| acc * x + k)
}

/// Largest real root: scan down from the row-sum bound, then bisect.
fn largest_real_root(a: &DMatrix<f64>) -> f64 {
    let c = char_poly(a);
    let top = (0..a.nrows()).map(|i| a.row(i).sum()).fold(0.0, f64::max) + 1e-9;
    let steps = 20_000;
    let h = top / steps as f64;
    let mut hi = top;
    for s in 1..=steps {
        let x = top - s as f64 * h;
        if horner(&c, x).signum() != horner(&c, hi).signum() {
            let mut lo = x;
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if horner(&c, mid).signum() == horner(&c, hi).signum() {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        hi = x;
    }
    0.0
}

fn random_positive(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| rng.gen_range(0.05..1.0))
}

fn random_sparse(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |_, _| {
        if rng.gen_bool(0.35) {
            rng.gen_range(0.0..1.0)
        } else {
            0.0
        }
    })
}

#[test]
fn perron_root_matches_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.gen_range(1..=8);
        let a = random_positive(&mut rng, n);
        let r = spectral_radius(&a, Side::Right).unwrap().radius;
        let root = largest_real_root(&a);
        assert!(
            (r - root).abs() < 1e-8 * root.max(1.0),
            "{r} vs {root}\n{a}"
        );
    }
}

/// `‖A^k‖^{1/k}` for `k = 2^40`, by rescaled repeated squaring.
fn gelfand_radius(a: &DMatrix<f64>) -> f64 {
    let mut m = a.clone();
    let mut log_scale = 0.0;
    let mut k = 1.0;
    for _ in 0..40 {
        m = &m * &m;
        log_scale *= 2.0;
        k *= 2.0;
        let norm = m.amax();
        if norm == 0.0 {
            return 0.0;
        }
        m /= norm;
        log_scale += norm.ln();
    }
    (log_scale / k).exp()
}

#[test]
fn radius_matches_eigenvalue_moduli() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..200 {
        let n = rng.gen_range(1..=8);
        let a = random_sparse(&mut rng, n);
        let (expected, tol) = match a.clone().try_schur(1e-14, 100_000) {
            Some(schur) => (
                schur
                    .complex_eigenvalues()
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max),
                1e-6,
            ),
            None => (gelfand_radius(&a), 1e-4),
        };
        for side in [Side::Right, Side::Left] {
            let res = spectral_radius(&a, side).unwrap();
            assert!(
                (res.radius - expected).abs() < tol * expected.max(1.0),
                "{} vs {expected}\n{a}",
                res.radius
            );
            assert!(res.vector.iter().all(|&v| v >= 0.0));
        }
    }
}

#[test]
fn block_triangular_radius_is_block_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..40 {
        let (p, q) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let b1 = random_positive(&mut rng, p);
        let b2 = random_positive(&mut rng, q);
        let mut a = DMatrix::zeros(p + q, p + q);
        a.view_mut((0, 0), (p, p)).copy_from(&b1);
        a.view_mut((p, p), (q, q)).copy_from(&b2);
        for i in 0..p {
            for j in p..p + q {
                a[(i, j)] = rng.gen_range(0.0..1.0);
            }
        }
        let r1 = spectral_radius(&b1, Side::Right).unwrap().radius;
        let r2 = spectral_radius(&b2, Side::Right).unwrap().radius;
        let r = spectral_radius(&a, Side::Right).unwrap().radius;
        assert!((r - r1.max(r2)).abs() < 1e-12 * r.max(1.0));
    }
}
