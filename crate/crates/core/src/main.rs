fn main() -> std::process::ExitCode {
    torus_mahler::cli::main_with_args(std::env::args_os())
}
