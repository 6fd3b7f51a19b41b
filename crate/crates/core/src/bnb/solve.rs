//! The branch-and-bound partition loop: best-first refinement of the bounding
//! rectangle until the certified gap closes below ε.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::DVector;

use crate::error::{CoreError, Result};
use crate::operator::HermitianOperator;
use crate::sdp::SdpSettings;

use super::branch::branch_hyperrectangle;
use super::envelope::{envelope_bounds, Node, NodeStatus, NodeWitness};
use super::gamma::GammaMap;
use super::problem::BilinearProblem;
use super::rect::bounding_rectangle;

/// Options of a branch-and-bound run.
#[derive(Debug, Clone)]
pub struct BnbOptions {
    /// Cap on envelope-relaxation evaluations (root included).
    pub max_nodes: usize,
    /// Optional feasible starting pair initializing the incumbent.
    pub incumbent_hint: Option<(Vec<HermitianOperator>, Vec<HermitianOperator>)>,
    /// Record per-iteration trace rows.
    pub record_trace: bool,
    /// Compute and impose box rows for all coordinates instead of only the K
    /// envelope-active pairs.
    pub full_box_rows: bool,
    /// Evaluate the four children of a branched node concurrently. Results
    /// are merged in a fixed order, so the outcome is unchanged.
    pub parallel_children: bool,
    /// Tolerances of the SDP subproblem solver.
    pub sdp_settings: SdpSettings,
}

impl Default for BnbOptions {
    fn default() -> Self {
        Self {
            max_nodes: 100_000,
            incumbent_hint: None,
            record_trace: true,
            full_box_rows: false,
            parallel_children: false,
            sdp_settings: SdpSettings::default(),
        }
    }
}

/// Termination state of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BnbStatus {
    /// Gap closed: upper − lower ≤ ε.
    Certified,
    /// The node budget ran out first; the interval is still valid.
    NodeBudgetExhausted,
}

/// One row of the convergence trace.
#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub iteration: usize,
    pub partition_size: usize,
    pub lower: f64,
    pub upper: f64,
}

/// Result of a branch-and-bound run.
#[derive(Debug, Clone)]
pub struct GlobalResult {
    pub status: BnbStatus,
    /// Certified global lower bound α̲(P).
    pub lower: f64,
    /// Best feasible value ᾱ(P) = F(X*, Y*).
    pub upper: f64,
    pub witness_x: Vec<HermitianOperator>,
    pub witness_y: Vec<HermitianOperator>,
    pub trace: Vec<TraceRow>,
    /// Envelope relaxations evaluated, root included.
    pub nodes_evaluated: usize,
    /// Partition size |P| at termination.
    pub partition_size: usize,
}

impl GlobalResult {
    pub fn gap(&self) -> f64 {
        self.upper - self.lower
    }
}

/// Heap key: smallest lower bound first, ties to the oldest insertion.
struct HeapEntry {
    lower: f64,
    seq: u64,
    node: Node,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.lower == other.lower && self.seq == other.seq
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap; reverse so the smallest lower pops first.
        other
            .lower
            .total_cmp(&self.lower)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

/// Solves the jointly constrained semidefinite bilinear program to within ε.
///
/// On certified termination, `upper − lower ≤ ε` with `upper = F(X*, Y*)` for
/// the returned feasible witness. If the node budget is exhausted first, the
/// best certified interval is returned with a distinguishing status.
pub fn solve_bilinear(
    problem: &BilinearProblem,
    epsilon: f64,
    options: &BnbOptions,
) -> Result<GlobalResult> {
    if !(epsilon > 0.0) {
        return Err(CoreError::Config("epsilon must be positive".into()));
    }
    let floor = 10.0 * options.sdp_settings.gap_tol;
    if epsilon < floor {
        return Err(CoreError::Config(format!(
            "epsilon {epsilon:.3e} is below the numerical floor {floor:.3e} \
             (10x the SDP gap tolerance); tighten the SDP settings first"
        )));
    }

    let gm = GammaMap::new(problem)?;

    // Root feasibility: S must be nonempty.
    problem.feasible_point(&options.sdp_settings)?;

    let rect = bounding_rectangle(problem, &gm, options.full_box_rows, &options.sdp_settings)?;
    let mut nodes_evaluated = 1usize;
    let root = envelope_bounds(problem, &gm, rect, &options.sdp_settings)
        .map_err(|e| e.in_context("root node"))?;
    if root.status == NodeStatus::Infeasible {
        return Err(CoreError::Infeasible(
            "root relaxation infeasible although S is nonempty".into(),
        ));
    }

    let root_witness = root.witness.clone().expect("bounded root has a witness");
    let mut best_upper = root.upper;
    let mut best_witness = (root_witness.x_ops.clone(), root_witness.y_ops.clone());

    if let Some((hx, hy)) = &options.incumbent_hint {
        let violation = problem.feasibility_violation(hx, hy)?;
        if violation > 1e-6 {
            return Err(CoreError::InvalidInput(format!(
                "incumbent hint violates the constraints by {violation:.3e}"
            )));
        }
        let value = problem.objective_value(hx, hy)?;
        if value < best_upper {
            best_upper = value;
            best_witness = (hx.clone(), hy.clone());
        }
    }

    let mut heap = BinaryHeap::new();
    let mut seq = 0u64;
    let root_lower = root.lower;
    heap.push(HeapEntry {
        lower: root.lower,
        seq,
        node: root,
    });

    let mut trace = Vec::new();
    let mut push_trace = |trace: &mut Vec<TraceRow>, iteration: usize, size: usize, lo: f64, up: f64| {
        if options.record_trace {
            trace.push(TraceRow {
                iteration,
                partition_size: size,
                lower: lo,
                upper: up,
            });
        }
    };
    push_trace(&mut trace, 0, 1, root_lower, best_upper);

    let mut iteration = 0usize;
    let status = loop {
        let global_lower = heap
            .peek()
            .map(|e| e.lower)
            .unwrap_or(best_upper)
            .min(best_upper);
        if best_upper - global_lower <= epsilon {
            break BnbStatus::Certified;
        }
        if nodes_evaluated + 4 > options.max_nodes {
            break BnbStatus::NodeBudgetExhausted;
        }

        let entry = heap.pop().expect("gap open implies nonempty partition");
        let parent = entry.node;
        let witness = parent
            .witness
            .as_ref()
            .expect("bounded nodes carry a witness");
        if std::env::var_os("BBSDP_BNB_TRACE").is_some() {
            eprintln!(
                "bnb it {iteration} pop lo {:.6} up {:.6} |P| {}",
                parent.lower,
                parent.upper,
                heap.len() + 1
            );
        }
        let children_rects =
            branch_hyperrectangle(&parent.rect, &witness.x_vec, &witness.y_vec, &gm)?;

        let evaluate = |rect: &super::rect::Hyperrectangle| -> Result<Node> {
            envelope_bounds(problem, &gm, rect.clone(), &options.sdp_settings)
        };
        let results: Vec<Result<Node>> = if options.parallel_children {
            use rayon::prelude::*;
            children_rects.par_iter().map(evaluate).collect()
        } else {
            children_rects.iter().map(evaluate).collect()
        };
        nodes_evaluated += 4;

        for (child, child_rect) in results.into_iter().zip(&children_rects) {
            let mut node = match child {
                Ok(node) => node,
                Err(e) if e.is_numerical() => {
                    // Conservative fallback: inherit the parent's certified
                    // bound and witness. Sound (the child region is a subset
                    // of the parent's), at the price of a looser node.
                    if std::env::var_os("BBSDP_BNB_TRACE").is_some() {
                        eprintln!("bnb it {iteration} child fallback: {e}");
                    }
                    conservative_child(&parent, witness, child_rect.clone())
                }
                Err(e) => return Err(e.in_context(format!("child of iteration {iteration}"))),
            };
            if node.status == NodeStatus::Infeasible {
                continue;
            }
            // Envelopes tighten on subrectangles; never let a child's bound
            // regress below the parent's certified bound.
            node.lower = node.lower.max(parent.lower);
            if node.witness.is_none() {
                // Degraded solve without a usable witness: branch later at
                // the parent's witness, clamped into this child.
                node.witness = conservative_child(&parent, witness, child_rect.clone()).witness;
            }
            if node.upper < best_upper {
                if let Some(w) = &node.witness {
                    best_upper = node.upper;
                    best_witness = (w.x_ops.clone(), w.y_ops.clone());
                }
            }
            seq += 1;
            heap.push(HeapEntry {
                lower: node.lower,
                seq,
                node,
            });
        }

        iteration += 1;
        let lo = heap
            .peek()
            .map(|e| e.lower)
            .unwrap_or(best_upper)
            .min(best_upper);
        push_trace(&mut trace, iteration, heap.len(), lo, best_upper);
    };

    let lower = heap
        .peek()
        .map(|e| e.lower)
        .unwrap_or(best_upper)
        .min(best_upper);
    Ok(GlobalResult {
        status,
        lower,
        upper: best_upper,
        witness_x: best_witness.0,
        witness_y: best_witness.1,
        trace,
        nodes_evaluated,
        partition_size: heap.len(),
    })
}

fn conservative_child(
    parent: &Node,
    witness: &NodeWitness,
    rect: super::rect::Hyperrectangle,
) -> Node {
    let clamp = |vec: &DVector<f64>, bounds: &[(f64, f64)]| {
        DVector::from_iterator(
            vec.len(),
            vec.iter()
                .zip(bounds)
                .map(|(v, (lo, hi))| v.clamp(*lo, *hi)),
        )
    };
    let x_vec = clamp(&witness.x_vec, &rect.x_bounds);
    let y_vec = clamp(&witness.y_vec, &rect.y_bounds);
    Node {
        rect,
        lower: parent.lower,
        upper: f64::INFINITY,
        witness: Some(NodeWitness {
            x_ops: witness.x_ops.clone(),
            y_ops: witness.y_ops.clone(),
            x_vec,
            y_vec,
        }),
        status: NodeStatus::Bounded,
    }
}
