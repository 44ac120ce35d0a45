use std::io::Write;

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let out = qbench::cli::run(&argv, &mut std::io::stdin().lock());
    std::io::stdout().write_all(out.stdout.as_bytes()).expect("stdout");
    eprintln!("{}", serde_json::to_string(&out.report).expect("report"));
    std::process::exit(out.exit_code);
}
