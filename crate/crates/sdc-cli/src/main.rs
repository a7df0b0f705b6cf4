use clap::Parser;

fn main() {
    let cli = sdc_cli::Cli::parse();
    match sdc_cli::run(cli) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}
