use bbsdp_core::bnb::*;
use bbsdp_core::dobrushin::*;
use bbsdp_core::operator::HermitianOperator;
use bbsdp_core::sdp::SdpSettings;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::cmp::Ordering;

struct E(f64, u64, Node);
impl PartialEq for E { fn eq(&self, o: &Self) -> bool { self.0 == o.0 && self.1 == o.1 } }
impl Eq for E {}
impl PartialOrd for E { fn partial_cmp(&self, o: &Self) -> Option<Ordering> { Some(self.cmp(o)) } }
impl Ord for E { fn cmp(&self, o: &Self) -> Ordering { o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1)) } }

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
    let rect = bounding_rectangle(problem, &gm, false, &settings).unwrap();
    let root = envelope_bounds(problem, &gm, rect, &settings).unwrap();
    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let mut best_up = root.upper;
    heap.push(E(root.lower, seq, root));
    for it in 0..25 {
        let E(_, _, node) = heap.pop().unwrap();
        let w = node.witness.as_ref().unwrap();
        // branch coordinate diagnostics
        let mut gaps = vec![];
        for j in 0..node.rect.active {
            let (h0, h1) = envelope_pieces(gm.sigma(j), w.x_vec[j], w.y_vec[j], node.rect.x_bounds[j], node.rect.y_bounds[j]);
            gaps.push(gm.sigma(j) * w.x_vec[j] * w.y_vec[j] - h0.max(h1));
        }
        let besti = gaps.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        eprintln!("it {it:2} pop lo {:.6} up {:.6} gaps {:?} I={besti} wid_x={:.4} wid_y={:.4}",
            node.lower, node.upper,
            gaps.iter().map(|g| (g * 1e4).round() / 1e4).collect::<Vec<_>>(),
            node.rect.x_bounds[besti].1 - node.rect.x_bounds[besti].0,
            node.rect.y_bounds[besti].1 - node.rect.y_bounds[besti].0);
        let children = branch_hyperrectangle(&node.rect, &w.x_vec, &w.y_vec, &gm).unwrap();
        for ch in children {
            match envelope_bounds(problem, &gm, ch, &settings) {
                Ok(c) => {
                    if c.status == NodeStatus::Bounded {
                        if c.upper < best_up { best_up = c.upper; }
                        seq += 1;
                        let lo = c.lower.max(node.lower);
                        heap.push(E(lo, seq, c));
                    } else { eprintln!("   child infeasible"); }
                }
                Err(e) => eprintln!("   child error: {e}"),
            }
        }
    }
    eprintln!("final: min lo {:.6} best up {:.6}", heap.peek().map(|e| e.0).unwrap_or(f64::NAN), best_up);
}
