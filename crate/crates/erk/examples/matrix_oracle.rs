// Cross-checks the closed-form block determinant against explicit matrices.
//
// cargo run --example matrix_oracle

use erk::oracle::{
    block_split_logdet, exact_finite_rate, logdet_input_erasure, logdet_output_erasure, ErasurePattern, FirFilter,
};
use erk::{two_tap_rate_iid, ChannelParams, ErasureProcess, SeriesConfig};
use num_complex::Complex64;

pub fn run() -> erk::Result<()> {
    let snr = 3.0;
    let pattern = ErasurePattern::from_bits(&[1, 1, 0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 0, 1])?;
    println!("pattern runs {:?}", pattern.runs());

    let filter = FirFilter::from_gains(0.8, 0.2)?;
    let split = block_split_logdet(&filter, &pattern, snr)?;
    let dense = logdet_input_erasure(&filter, &pattern, snr)?;
    println!("two taps:   block split {split:.12}  dense {dense:.12}");

    // Longer complex filters: erasing inputs and erasing outputs give the same determinant.
    let taps = vec![
        Complex64::new(0.6, 0.3),
        Complex64::new(-0.2, 0.5),
        Complex64::new(0.1, -0.4),
    ];
    let filter3 = FirFilter::new(taps)?;
    let input = logdet_input_erasure(&filter3, &pattern, snr)?;
    let output = logdet_output_erasure(&filter3, &pattern, snr)?;
    println!("three taps: input form  {input:.12}  output form {output:.12}");

    // Finite blocks versus the infinite-length series.
    let q = 0.3;
    let process = ErasureProcess::iid(q)?;
    let series = two_tap_rate_iid(&ChannelParams::new(0.8, 0.2, snr)?, q, &SeriesConfig::converged())?;
    println!("series rate at q={q}: {:.8}", series.rate);
    for n in [4, 8, 12, 16] {
        let exact = exact_finite_rate(&filter, snr, &process, n)?;
        println!("  N={n:>2}: exact finite-block rate {:.8}", exact.rate);
    }
    Ok(())
}

fn main() -> erk::Result<()> {
    run()
}
