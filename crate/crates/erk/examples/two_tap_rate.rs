// Rate of the two-tap erasure channel against its bounds and the one-tap channel.
//
// cargo run --example two_tap_rate

use erk::{erasure_free_upper_bound, one_tap_rate, two_tap_rate_iid, ChannelParams, SeriesConfig};

pub fn run() -> erk::Result<()> {
    let params = ChannelParams::new(0.8, 0.2, 10.0)?;
    let dq = params.derive()?;
    let bound = erasure_free_upper_bound(&params)?;
    println!(
        "g0=0.8 g1=0.2 P=10: a={:.4} b={:.4} r={:.4} s={:.4}",
        dq.a, dq.b, dq.r, dq.s
    );
    println!("erasure-free bound ln r = {bound:.6} nats");
    println!(
        "{:>5} {:>12} {:>12} {:>10} {:>6}",
        "q", "two-tap", "one-tap", "tail", "terms"
    );
    for q in [0.0, 0.05, 0.1, 0.2, 0.4, 0.6, 0.8, 1.0] {
        let r = two_tap_rate_iid(&params, q, &SeriesConfig::default())?;
        let one = one_tap_rate(params.g0 + params.g1, params.snr, q)?;
        assert!(r.rate <= bound + 1e-12);
        println!(
            "{q:>5.2} {:>12.8} {:>12.8} {:>10.1e} {:>6}",
            r.rate,
            one,
            r.error_bound,
            r.meta.terms.unwrap_or(0)
        );
    }
    Ok(())
}

fn main() -> erk::Result<()> {
    run()
}
