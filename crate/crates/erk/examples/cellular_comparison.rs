// Multicell processing versus single-cell processing and frequency sharing
// in the soft-handoff uplink.
//
// cargo run --example cellular_comparison

use erk::cellular::{compare_schemes, scp_icfs_crossover};
use erk::{CellularParams, Scheme, SeriesConfig};

pub fn run() -> erk::Result<()> {
    let alpha_sq = 0.5;
    let snr = erk::db_to_linear(14.0);
    let cfg = SeriesConfig::converged();
    println!("alpha^2={alpha_sq}, P=14 dB");
    println!(
        "{:>5} {:>10} {:>10} {:>10} | per active user {:>8} {:>8} {:>8}",
        "q", "MCP", "SCP", "ICFS", "MCP", "SCP", "ICFS"
    );
    for q in [0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9] {
        let c = compare_schemes(&CellularParams::new(alpha_sq, snr, q)?, &cfg)?;
        let t = |s: Scheme| c.get(s).throughput.unwrap_or(f64::NAN);
        println!(
            "{q:>5.2} {:>10.6} {:>10.6} {:>10.6} |                 {:>8.4} {:>8.4} {:>8.4}",
            c.mcp.rate,
            c.scp.rate,
            c.icfs.rate,
            t(Scheme::Mcp),
            t(Scheme::Scp),
            t(Scheme::Icfs)
        );
        assert!(c.mcp.rate >= c.scp.rate.max(c.icfs.rate));
    }
    match scp_icfs_crossover(alpha_sq, snr)? {
        Some(q) => println!("SCP overtakes ICFS at q = {q:.6}"),
        None => println!("SCP and ICFS do not cross"),
    }
    Ok(())
}

fn main() -> erk::Result<()> {
    run()
}
