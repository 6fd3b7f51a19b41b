use bbsdp_core::bnb::*;
use bbsdp_core::dobrushin::*;
use bbsdp_core::operator::HermitianOperator;
use bbsdp_core::sdp::SdpSettings;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() {
    let z = Complex64::new;
    let h = HermitianOperator::try_new(DMatrix::from_row_slice(
        2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
    )).unwrap();
    let channel = dephasing_channel(0.5).unwrap();
    let inst = DobrushinInstance::new(channel, h, -0.5, 2.0, DobrushinMode::Qubit)
        .unwrap().with_symmetry_constraint(true).unwrap();
    let built = inst.build().unwrap();
    let problem = &built.problem;
    let gm = GammaMap::new(problem).unwrap();
    let settings = SdpSettings::default();
    eprintln!("K = {}, n_x = {}, n_y = {}", gm.rank(), gm.n_x(), gm.n_y());
    for j in 0..gm.rank() { eprint!("sigma[{j}]={:.4} ", gm.sigma(j)); }
    eprintln!();
    eprintln!("a = {:?}", gm.linear_x_coeffs().as_slice());
    eprintln!("b = {:?}", gm.linear_y_coeffs().as_slice());

    let rect = bounding_rectangle(problem, &gm, false, &settings).unwrap();
    for j in 0..gm.rank() {
        eprintln!("x[{j}] in [{:.4},{:.4}]  y[{j}] in [{:.4},{:.4}]",
            rect.x_bounds[j].0, rect.x_bounds[j].1, rect.y_bounds[j].0, rect.y_bounds[j].1);
    }
    let root = envelope_bounds(problem, &gm, rect.clone(), &settings).unwrap();
    eprintln!("root: lower {:.6} upper {:.6}", root.lower, root.upper);
    let w = root.witness.as_ref().unwrap();
    eprintln!("witness x = {:?}", w.x_vec.as_slice());
    eprintln!("witness y = {:?}", w.y_vec.as_slice());
    for j in 0..gm.rank() {
        let (h0, h1) = envelope_pieces(gm.sigma(j), w.x_vec[j], w.y_vec[j], rect.x_bounds[j], rect.y_bounds[j]);
        let gap = gm.sigma(j) * w.x_vec[j] * w.y_vec[j] - h0.max(h1);
        eprintln!("coord {j}: v={:.4} w={:.4} sigma*v*w={:.4} max(h0,h1)={:.4} gap={:.4}",
            w.x_vec[j], w.y_vec[j], gm.sigma(j)*w.x_vec[j]*w.y_vec[j], h0.max(h1), gap);
    }
    // Envelope value at witness should equal root.lower.
    eprintln!("Vex(witness) = {:.6} (lower {:.6})", envelope_value(&gm, &rect, &w.x_vec, &w.y_vec), root.lower);
    eprintln!("f(witness)   = {:.6} (upper {:.6})", gm.f_value(&w.x_vec, &w.y_vec), root.upper);

    let children = branch_hyperrectangle(&rect, &w.x_vec, &w.y_vec, &gm).unwrap();
    for (i, ch) in children.iter().enumerate() {
        let node = envelope_bounds(problem, &gm, ch.clone(), &settings).unwrap();
        eprintln!("child {i}: lower {:.6} upper {:.6} status {:?}", node.lower, node.upper, node.status);
    }
}
