//! Watches the box-count density approach its main term as p grows.
//! For boxes of side h near p^(3/4), the count of solutions divided by
//! h^n / p^(s+1) should settle toward 1, and the mean deviation should
//! shrink as p increases.

use boxcong::sweep::{run_sweep, Extra, SweepPlan, SweepTarget};

fn main() {
    let primes = [101u64, 211, 401];
    let grid: Vec<(u64, u32)> = primes
        .iter()
        .map(|&p| (p, (p as f64).powf(0.75).ceil() as u32))
        .collect();

    let mut plan = SweepPlan::new(SweepTarget::Theorem, &grid, 3, 11);
    plan.n = 6;
    plan.s = 1;
    plan.k_range = (3, 5);
    let report = run_sweep(&plan).unwrap();

    println!("6-variable systems, one diagonal constraint, h near p^(3/4):");
    println!("{:>6} {:>5} {:>14} {:>14} {:>10}", "p", "h", "count", "main term", "|dev|");
    for row in &report.rows {
        let Extra::Int(count) = row.extra[0] else { unreachable!() };
        let Extra::Float(main) = row.extra[1] else { unreachable!() };
        println!(
            "{:>6} {:>5} {:>14} {:>14.2} {:>10.5}",
            row.p,
            row.h,
            count,
            main,
            row.exact / main
        );
    }

    println!("\nmean |count/main - 1| per prime:");
    for &p in &primes {
        let devs: Vec<f64> = report
            .rows
            .iter()
            .filter(|r| r.p == p)
            .map(|r| {
                let Extra::Float(main) = r.extra[1] else { unreachable!() };
                r.exact / main
            })
            .collect();
        let mean = devs.iter().sum::<f64>() / devs.len() as f64;
        println!("  p = {p:>4}: {mean:.5}");
    }
}
