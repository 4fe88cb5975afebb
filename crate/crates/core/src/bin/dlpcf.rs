use clap::Parser;

fn main() {
    let cli = dlpcf::cli::Cli::parse();
    let code = dlpcf::cli::execute(cli, &mut std::io::stdout(), &mut std::io::stderr());
    std::process::exit(code);
}
