use ubbs1::estimation::{fit, mps_objective, Method, OptimizerConfig, UnitSample};
use ubbs1::sampling::{sample_ubbs1, RngState};
use ubbs1::specfun::integrate_adaptive;
use ubbs1::Ubbs1Params;

fn main() {
    // Validate the CDF at the "escaped" parameter point against direct
    // integration of the density.
    let weird = Ubbs1Params::new(1.7504723222638099, 2.0, 0.28, 0.27, 0.9).unwrap();
    for &z in &[0.05, 0.2, 0.5, 0.8, 0.95] {
        let via_cdf = weird.cdf(z).unwrap();
        let (via_pdf, _) = integrate_adaptive(|x| weird.pdf(x).unwrap(), 1e-12, z, 1e-11).unwrap();
        println!("z={z}: cdf={via_cdf:.12} int_pdf={via_pdf:.12} diff={:.2e}", via_cdf - via_pdf);
    }

    // Reproduce the escape and compare objective values along the way.
    let truth = Ubbs1Params::new(0.5, 0.5, 1.0, 1.0, 0.25).unwrap();
    let sample = sample_ubbs1(800, &truth, &mut RngState::new(123)).unwrap();
    let config = OptimizerConfig { starts: 1, ..OptimizerConfig::default() };
    let res = fit(&sample, Method::Mps, Some(truth), &config).unwrap();
    println!("escaped to {:?}", res.params.to_array());
    println!("H(truth)   = {}", mps_objective(&sample, &truth).unwrap());
    println!("H(escaped) = {}", res.objective);

    // Is the escape an overfit artifact? Compare out-of-sample: H on a fresh
    // sample from the truth.
    let fresh = sample_ubbs1(800, &truth, &mut RngState::substream(123, 7)).unwrap();
    println!("H_fresh(truth)   = {}", mps_objective(&fresh, &truth).unwrap());
    println!("H_fresh(escaped) = {}", mps_objective(&fresh, &res.params).unwrap());
    let _ = UnitSample::new(vec![0.5], "x");
}
