fn main() -> std::process::ExitCode {
    smearstat_cli::main_entry()
}
