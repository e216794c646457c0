//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Time limits are pinned in `tltl::props`; the seed is fixed so the run is
//! reproducible.

use std::path::Path;
use std::process::ExitCode;

use tltl::props;

const SEED: u64 = 7;

fn goldens_match() -> Result<usize, String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let files = props::goldens()?;
    for (name, text) in &files {
        let want = std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"))?;
        if &want != text {
            return Err(format!("{name} differs from the generated output"));
        }
    }
    Ok(files.len())
}

fn main() -> ExitCode {
    let mut failed = 0;
    for s in props::suites() {
        let mut rep = props::run(s.name, SEED).expect("listed suite");
        if rep.name == "fragment" && rep.pass {
            match goldens_match() {
                Ok(n) => rep.detail = format!("{}; {n} golden files match", rep.detail),
                Err(err) => {
                    rep.pass = false;
                    rep.detail = err;
                }
            }
        }
        if !rep.pass {
            failed += 1;
        }
        println!(
            "{} {:<13} {:<55} {:>7.2}s / {:>3}s  {}",
            if rep.pass { "PASS" } else { "FAIL" },
            rep.name,
            rep.title,
            rep.elapsed.as_secs_f64(),
            rep.limit.as_secs(),
            rep.detail
        );
    }
    println!("{} of {} criteria passed", props::suites().len() - failed, props::suites().len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
