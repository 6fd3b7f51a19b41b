use bbsdp_core::bnb::{solve_bilinear, BnbOptions};
use bbsdp_core::dobrushin::*;
use bbsdp_core::operator::HermitianOperator;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() {
    let z = Complex64::new;
    let h = HermitianOperator::try_new(DMatrix::from_row_slice(
        2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)],
    )).unwrap();
    let channel = dephasing_channel(0.5).unwrap();
    let inst = DobrushinInstance::new(channel, h, -0.5, 2.0, DobrushinMode::Qubit)
        .unwrap()
        .with_symmetry_constraint(true)
        .unwrap();
    let built = inst.build().unwrap();
    eprintln!("built; p={} q={}", built.problem.p(), built.problem.q());
    let opts = BnbOptions { max_nodes: 100_000, ..BnbOptions::default() };
    let t = std::time::Instant::now();
    match solve_bilinear(&built.problem, 1e-3, &opts) {
        Ok(res) => {
            eprintln!(
                "status {:?} lower {:.6} upper {:.6} nodes {} |P| {} in {:?}",
                res.status, res.lower, res.upper, res.nodes_evaluated, res.partition_size, t.elapsed()
            );
            for row in res.trace.iter().take(12) {
                eprintln!("  it {} |P| {} lo {:.6} up {:.6}", row.iteration, row.partition_size, row.lower, row.upper);
            }
            eprintln!("value = {:.6}, expect {:.6}", built.curve_value(res.upper), analytic_dephasing_curve(0.5, -0.5, 2.0).unwrap());
        }
        Err(e) => eprintln!("error after {:?}: {e}", t.elapsed()),
    }
}
