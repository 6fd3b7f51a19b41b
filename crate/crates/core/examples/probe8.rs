use bbsdp_core::dobrushin::*;
use bbsdp_core::operator::HermitianOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() {
    let z = Complex64::new;
    let h = HermitianOperator::try_new(DMatrix::from_row_slice(
        2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
    )).unwrap();
    let a = 0.3;
    let channel = dephasing_channel(a).unwrap();
    let cfg = CurveConfig {
        symmetry_constraint: true,
        epsilon: 1e-3,
        warm_start: true,
        ..CurveConfig::default()
    };
    let deltas: Vec<f64> = (0..=20).map(|i| 2.0 * i as f64 / 20.0).collect();
    let points = dobrushin_curve(&channel, &h, -0.5, &deltas, &cfg).unwrap();
    for p in &points {
        let reference = analytic_dephasing_curve(a, -0.5, p.delta).unwrap();
        eprintln!(
            "delta {:.2}: value {:.6} ref {:.6} dev {:+.2e} hw {:.1e} |P| {}",
            p.delta, p.value, reference, p.value - reference, p.half_width, p.nodes
        );
    }
}
