fn main() {
    // Die quietly on a closed pipe (e.g. `cohmax search ... | head`).
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(cohmax::cli::main_entry());
}
