//! Scan along `a = (1 + b²)/(2b)` for a genus-2 base; prints the CSV table.
//! Set `CRTWIST_THREADS` to cap the worker pool.

use crtwist::ruled::{critical_scan, scan_csv, uniform_grid};

fn main() {
    let report = critical_scan(2, 1, &uniform_grid(50, 100)).unwrap();
    print!("{}", scan_csv(&report).unwrap());
    match &report.largest_unstable {
        Some(a) => eprintln!("largest unstable grid point: a = {a}"),
        None => eprintln!("no unstable grid point"),
    }
}
