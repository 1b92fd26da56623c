//! Runs every acceptance criterion and prints one line per criterion.

use std::time::Instant;

use numa::golden::CRITERIA;

fn main() {
  let mut failed = 0;
  for (id, name, run) in CRITERIA {
    let start = Instant::now();
    let r = run();
    let secs = start.elapsed().as_secs_f64();
    let verdict = if r.passed { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict} {name} ({secs:.2}s): {}", r.detail);
    if !r.passed {
      failed += 1;
    }
  }
  println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
  if failed > 0 {
    std::process::exit(1);
  }
}
