fn main() {
    std::process::exit(ffgauss_cli_stub());
}

fn ffgauss_cli_stub() -> i32 {
    eprintln!("cli not wired yet");
    2
}
