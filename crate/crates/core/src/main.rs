// SPDX-License-Identifier: Apache-2.0

use std::io::Write;

fn main() {
    let env = std::env::vars().collect();
    let result = rcf::cli::run(std::env::args_os(), &env);
    let _ = std::io::stdout().write_all(result.stdout.as_bytes());
    let _ = std::io::stderr().write_all(result.stderr.as_bytes());
    std::process::exit(result.exit_code);
}
