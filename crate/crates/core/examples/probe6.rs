use bbsdp_core::bnb::{solve_bilinear, BnbOptions};
use bbsdp_core::dobrushin::*;
use bbsdp_core::operator::HermitianOperator;

fn main() {
    let id = dephasing_channel(1.0).unwrap();
    let inst = DobrushinInstance::new(id, HermitianOperator::zeros(2), 0.0, 2.0, DobrushinMode::Qubit).unwrap();
    let built = inst.build().unwrap();
    let opts = BnbOptions { max_nodes: 4000, ..BnbOptions::default() };
    let res = solve_bilinear(&built.problem, 0.1, &opts).unwrap();
    eprintln!("status {:?} lower {:.6} upper {:.6} |P| {}", res.status, res.lower, res.upper, res.partition_size);
}
