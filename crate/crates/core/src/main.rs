use clap::Parser;

fn main() {
    let cli = umbral::cli::Cli::parse();
    match umbral::cli::run(&cli) {
        Ok(out) => {
            println!("{}", out.text);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
    }
}
