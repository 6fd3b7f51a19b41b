use bbsdp_core::dobrushin::*;
use bbsdp_core::operator::HermitianOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() {
    let z = Complex64::new;
    let h = HermitianOperator::try_new(DMatrix::from_row_slice(
        2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
    )).unwrap();
    for a in [0.5, 0.3] {
        let channel = dephasing_channel(a).unwrap();
        let cfg = CurveConfig {
            symmetry_constraint: true,
            epsilon: 1e-3,
            warm_start: true,
            ..CurveConfig::default()
        };
        let deltas: Vec<f64> = (0..=20).map(|i| 2.0 * i as f64 / 20.0).collect();
        let t0 = std::time::Instant::now();
        let points = dobrushin_curve(&channel, &h, -0.5, &deltas, &cfg).unwrap();
        let mut worst = 0.0f64;
        let mut total_nodes = 0usize;
        for p in &points {
            let reference = analytic_dephasing_curve(a, -0.5, p.delta).unwrap();
            let dev = (p.value - reference).abs();
            worst = worst.max(dev);
            total_nodes += p.nodes;
            if let Some(e) = &p.error { eprintln!("  FAILED delta {}: {e}", p.delta); }
        }
        eprintln!(
            "a={a}: 21 points in {:?}, worst |dev| = {:.2e} (tol 2.1e-3), avg |P| = {:.1}",
            t0.elapsed(), worst, total_nodes as f64 / 21.0
        );
    }
}
