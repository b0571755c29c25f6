//! VCG on a digital good: nobody's presence keeps anyone else from being served, so the
//! Clarke pivot charges nothing and revenue is zero on every profile.

use fedmarket::market::{opt_single_price, vcg_digital_good};

fn main() {
    for values in [vec![0.2, 0.9, 0.4], vec![1.0; 5], vec![0.05, 0.7, 0.3, 0.95, 0.6, 0.1]] {
        let out = vcg_digital_good(&values);
        let revenue: fedmarket::Money = out.payments.iter().sum();
        println!(
            "values {values:?}: served {:?}, VCG revenue {revenue}, best single price revenue {}",
            out.allocated,
            opt_single_price(&values).revenue
        );
    }
}
