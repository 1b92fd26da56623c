use std::io::Write;

fn main() {
  let inv = numa::cli::run(std::env::args());
  print!("{}", inv.stdout);
  eprint!("{}", inv.stderr);
  let _ = std::io::stdout().flush();
  std::process::exit(inv.code);
}
