fn main() {
    std::process::exit(feedbacklog::cli::main());
}
