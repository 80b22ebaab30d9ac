//! Prints a grid of distribution values for cross-checking against other
//! implementations. Usage: cargo run --example reference_values

use wmw_core::special::{normal_cdf, t_cdf, t_quantile};

fn main() {
    let ts = [-30.0, -8.0, -3.5, -1.96, -1.0, -0.4, -0.001, 0.3, 1.0, 2.2, 5.0, 13.0, 80.0];
    let dfs = [0.5, 1.0, 2.0, 2.5, 4.0, 7.3, 15.0, 60.0, 240.5, 5000.0];
    for &df in &dfs {
        for &t in &ts {
            println!("tcdf {df} {t} {:.17e}", t_cdf(t, df));
        }
    }
    for &df in &dfs {
        for &p in &[0.001, 0.025, 0.2, 0.5, 0.8, 0.975, 0.999] {
            println!("tq {df} {p} {:.17e}", t_quantile(p, df));
        }
    }
    for &z in &ts {
        println!("ncdf {z} {:.17e}", normal_cdf(z));
    }
}
