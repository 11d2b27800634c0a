fn main() {
    std::process::exit(metric_ramsey::cli::run(std::env::args_os()));
}
