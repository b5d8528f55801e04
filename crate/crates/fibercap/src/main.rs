fn main() -> std::process::ExitCode {
    fibercap::cli::main()
}
