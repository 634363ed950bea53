use clap::Parser;

fn main() {
    let cli = credit_curve_cli::Cli::parse();
    if let Err(e) = credit_curve_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
