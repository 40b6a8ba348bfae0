use clap::error::ErrorKind;
use clap::Parser;

use fejer_well_cli::{execute, Args, CliError};

fn main() {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit();
        }
        Err(e) => fail(CliError::Usage(e.render().to_string().trim().to_owned())),
    };
    if let Err(e) = args.load().and_then(|cfg| execute(&cfg)) {
        fail(e);
    }
}

fn fail(e: CliError) -> ! {
    eprintln!("{}", e.record());
    std::process::exit(e.exit_code());
}
