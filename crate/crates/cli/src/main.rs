use clap::Parser;

fn main() {
    let cli = rgs_cli::Cli::parse();
    if let Err(e) = rgs_cli::execute(cli, &mut std::io::stdout().lock()) {
        eprintln!("rgs: {e}");
        std::process::exit(e.exit_code());
    }
}
