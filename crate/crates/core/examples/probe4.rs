use bbsdp_core::dobrushin::*;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn main() {
    let z = Complex64::new;
    let t0 = std::time::Instant::now();
    let id = dephasing_channel(1.0).unwrap();
    let eta = contraction_coefficient(&id).unwrap();
    eprintln!("identity: eta {eta:.6} in {:?}", t0.elapsed());

    let t0 = std::time::Instant::now();
    let full = dephasing_channel(0.0).unwrap();
    let eta = contraction_coefficient(&full).unwrap();
    eprintln!("a=0: eta {eta:.6} in {:?}", t0.elapsed());

    let t0 = std::time::Instant::now();
    let paulis = [
        DMatrix::from_row_slice(2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(1., 0.)]),
        DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(1., 0.), z(1., 0.), z(0., 0.)]),
        DMatrix::from_row_slice(2, 2, &[z(0., 0.), z(0., -1.), z(0., 1.), z(0., 0.)]),
        DMatrix::from_row_slice(2, 2, &[z(1., 0.), z(0., 0.), z(0., 0.), z(-1., 0.)]),
    ];
    let kraus = paulis.iter().map(|p| p.scale(0.5)).collect();
    let depol = QuantumChannel::from_kraus(kraus).unwrap();
    let eta = contraction_coefficient(&depol).unwrap();
    eprintln!("depol: eta {eta:.6} in {:?}", t0.elapsed());
}
