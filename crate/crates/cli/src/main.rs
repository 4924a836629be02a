use clap::Parser;

fn main() {
    let cli = seqmon_cli::Cli::parse();
    if let Err(e) = seqmon_cli::run(cli) {
        eprintln!("seqmon: {e}");
        std::process::exit(e.exit_code());
    }
}
