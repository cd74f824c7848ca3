// Bursty (Markov) erasures versus i.i.d. erasures at the same average erasure rate.
//
// cargo run --example markov_erasures

use erk::{markov_two_tap_rate, two_tap_rate_iid, ChannelParams, ErasureProcess, SeriesConfig};

pub fn run() -> erk::Result<()> {
    let params = ChannelParams::new(0.5, 0.5, 10.0)?;
    let cfg = SeriesConfig::converged();
    let q_avg = 0.2;
    let iid = two_tap_rate_iid(&params, q_avg, &cfg)?.rate;
    println!("average erasure rate {q_avg}, i.i.d. rate {iid:.6} nats");
    println!("{:>6} {:>6} {:>10} {:>12}", "q0", "q1", "mean burst", "rate");
    // Keep q1/(1 - q0 + q1) = q_avg while lengthening erasure bursts.
    for q0 in [0.2, 0.4, 0.6, 0.8, 0.95] {
        let q1 = q_avg * (1.0 - q0) / (1.0 - q_avg);
        let process = ErasureProcess::markov(q0, q1)?;
        assert!((process.erasure_rate().unwrap() - q_avg).abs() < 1e-12);
        let rate = markov_two_tap_rate(&params, q0, q1, &cfg)?.rate;
        println!("{q0:>6.3} {q1:>6.3} {:>10.2} {rate:>12.6}", 1.0 / (1.0 - q0));
    }
    Ok(())
}

fn main() -> erk::Result<()> {
    run()
}
