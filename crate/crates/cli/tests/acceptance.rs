//! One PASS/FAIL line per acceptance criterion.

use fracsob_cli::suite::{criterion, TITLES};

fn main() {
    let mut failed = Vec::new();
    for k in 1..=16u32 {
        let r = criterion(k, 0, true);
        let status = if r.ok { "PASS" } else { "FAIL" };
        let oracle = r.oracle.map(|o| format!("{o:.6e}")).unwrap_or_else(|| "-".into());
        let err = r.rel_err.map(|e| format!("{e:.3e}")).unwrap_or_else(|| "-".into());
        let tol = r.get("tol").unwrap_or("-");
        let extra = r.get("error").map(|e| format!(" error: {e}")).unwrap_or_default();
        println!(
            "{status} criterion {k:2} {:<42} computed {:.6e} oracle {oracle} rel_err {err} tol [{tol}] {} ms{extra}",
            TITLES[k as usize - 1],
            r.computed,
            r.runtime_ms.unwrap_or(0)
        );
        if !r.ok {
            failed.push(k);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: 16 of 16 criteria pass");
}
