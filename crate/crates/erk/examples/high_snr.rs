// High-SNR slope and power offset, compared with the exact rates.
//
// cargo run --example high_snr

use erk::cellular::{high_snr_triple, scheme_rate};
use erk::{high_snr_two_tap, two_tap_rate_iid, CellularParams, ChannelParams, Scheme, SeriesConfig};

pub fn run() -> erk::Result<()> {
    let cfg = SeriesConfig::converged();
    let (g0, g1, q) = (0.8, 0.2, 0.3);
    let h = high_snr_two_tap(g0, g1, q, &cfg)?;
    println!(
        "two-tap g0={g0} g1={g1} q={q}: slope {:.6}, offset {:.6} nats",
        h.s_inf, h.l_inf
    );
    for db in [20.0, 40.0, 60.0] {
        let snr = erk::db_to_linear(db);
        let exact = two_tap_rate_iid(&ChannelParams::new(g0, g1, snr)?, q, &cfg)?.rate;
        println!(
            "  P={db:>4} dB: rate {exact:.6}, affine approximation {:.6}",
            h.approx_rate(snr)
        );
    }

    let p = CellularParams::new(0.5, 1.0, q)?;
    for scheme in Scheme::ALL {
        let h = high_snr_triple(scheme, &p, &cfg)?;
        let at = CellularParams { snr: 1e6, ..p };
        println!(
            "{:>4}: slope {:.4}, offset {:+.5}, rate at 60 dB {:.5} (approx {:.5})",
            scheme.name(),
            h.s_inf,
            h.l_inf,
            scheme_rate(scheme, &at, &cfg)?,
            h.approx_rate(1e6)
        );
    }
    Ok(())
}

fn main() -> erk::Result<()> {
    run()
}
