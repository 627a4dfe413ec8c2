fn main() -> std::process::ExitCode {
    didself::cli::main()
}
