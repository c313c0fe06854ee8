use clap::Parser;
use qho_dual_cli::Cli;

fn main() {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let code = cli.run(&mut std::io::stderr());
    std::process::exit(code);
}
