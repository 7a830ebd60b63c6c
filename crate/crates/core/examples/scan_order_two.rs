//! The order-two groupoid table as CSV, via the same code path as `pspec scan-order2`.

fn main() {
    let mut out = std::io::stdout().lock();
    let code = pspec::cli::run(["pspec", "scan-order2", "--format", "csv"], &mut out, &mut std::io::stderr());
    std::process::exit(code);
}
