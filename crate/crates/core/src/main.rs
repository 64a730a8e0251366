fn main() -> std::process::ExitCode {
    twoband::cli::main()
}
