use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use surface_ym::holonomy::{magnus_y1_y2, transport, MagnusOrder, PathSignal};
use surface_ym::GroupSpec;

fn smooth_signal(spec: &GroupSpec, seed: u64, n: usize) -> PathSignal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = spec.dim();
    let c: Vec<[f64; 3]> = (0..d).map(|_| std::array::from_fn(|_| rng.random_range(-1.0..1.0))).collect();
    PathSignal::from_fn(spec.clone(), n, move |t| {
        DVector::from_fn(d, |k, _| c[k][0] + c[k][1] * (2.0 * t).sin() + c[k][2] * (3.0 * t).cos())
    })
    .unwrap()
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}

#[test]
fn integrator_step_orders() {
    let spec = GroupSpec::SU2;
    let h = smooth_signal(&spec, 1, 64);
    let ns = [10.0, 20.0, 40.0, 80.0];
    for (order, expected) in [(MagnusOrder::Two, 2.0), (MagnusOrder::Four, 4.0)] {
        let errs: Vec<f64> = ns
            .iter()
            .map(|&n| {
                let n = n as usize;
                transport(&h, n, order).distance(&transport(&h, 10 * n, order))
            })
            .collect();
        let s = -slope(&ns, &errs);
        assert!((s - expected).abs() <= 0.2, "order {expected}: slope {s}, errors {errs:?}");
    }
}

#[test]
fn magnus_truncation_orders() {
    let spec = GroupSpec::SU2;
    let base = smooth_signal(&spec, 2, 2000);
    let eps = [0.025, 0.05, 0.1, 0.2];
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for &e in &eps {
        let h = base.scaled(e);
        let w = transport(&h, 2000, MagnusOrder::Four);
        let (y1, y2) = magnus_y1_y2(&h);
        e1.push(w.distance(&y1.exp()));
        let sum = surface_ym::AlgebraElement::new(spec.clone(), &y1.coords + &y2.coords);
        e2.push(w.distance(&sum.exp()));
    }
    let (s1, s2) = (slope(&eps, &e1), slope(&eps, &e2));
    assert!((s1 - 2.0).abs() <= 0.2, "first term slope {s1}: {e1:?}");
    assert!((s2 - 3.0).abs() <= 0.2, "second term slope {s2}: {e2:?}");
}
