fn main() {
    std::process::exit(higgs_spec::run(std::env::args_os()));
}
