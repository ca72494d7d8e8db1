use std::process::ExitCode;

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let as_json = argv.iter().any(|a| a == "--json");
    let result = motivelab::cli::run(argv);
    let out = result.render(as_json);
    if result.code == 1 {
        eprintln!("{out}");
    } else {
        println!("{out}");
    }
    ExitCode::from(result.code as u8)
}
