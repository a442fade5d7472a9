use clap::Parser;

fn main() {
    let cli = iqprob_cli::Cli::parse();
    let outcome = iqprob_cli::execute(cli);
    if !outcome.stdout.is_empty() {
        println!("{}", outcome.stdout);
    }
    if !outcome.stderr.is_empty() {
        eprintln!("{}", outcome.stderr);
    }
    std::process::exit(outcome.exit);
}
