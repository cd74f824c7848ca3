// Seeded Monte-Carlo estimates against the series and the exhaustive average.
//
// cargo run --example monte_carlo

use erk::oracle::{exact_finite_rate, monte_carlo_rate, FirFilter, McConfig};
use erk::{two_tap_rate_iid, ChannelParams, ErasureProcess, SeriesConfig};

pub fn run() -> erk::Result<()> {
    let (g0, g1, snr, q) = (0.8, 0.2, 10.0, 0.3);
    let filter = FirFilter::from_gains(g0, g1)?;
    let process = ErasureProcess::iid(q)?;
    let series = two_tap_rate_iid(&ChannelParams::new(g0, g1, snr)?, q, &SeriesConfig::converged())?.rate;

    let small = McConfig::new(14, 4000, 7)?;
    let exact = exact_finite_rate(&filter, snr, &process, small.block_size)?.rate;
    let mc = monte_carlo_rate(&filter, snr, &process, &small)?;
    println!(
        "N=14: exact {exact:.6}  MC {:.6} ± {:.6} ({} trials)",
        mc.rate, mc.error_bound, small.trials
    );

    let cfg = McConfig::standard(7);
    let a = monte_carlo_rate(&filter, snr, &process, &cfg)?;
    let b = monte_carlo_rate(&filter, snr, &process, &cfg)?;
    assert_eq!(a.rate.to_bits(), b.rate.to_bits(), "same seed, same estimate");
    println!(
        "N=200: series {series:.6}  MC {:.6} ± {:.6} (seed {})",
        a.rate, a.error_bound, cfg.seed
    );

    let markov = ErasureProcess::markov(0.6, 0.1)?;
    let m = monte_carlo_rate(&filter, snr, &markov, &McConfig::new(400, 200, 7)?)?;
    println!(
        "bursty erasures (q0=0.6, q1=0.1): MC {:.6} ± {:.6}",
        m.rate, m.error_bound
    );
    Ok(())
}

fn main() -> erk::Result<()> {
    run()
}
