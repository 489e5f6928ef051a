use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use hecke_cli::{parse_args, parse_program, print_program, run_program, CliError, Session};

const USAGE: &str = "\
usage:
  hecke run FILE.pairs          run every command of a program
  hecke fmt FILE.pairs          print a program in canonical form
  hecke VERB ARGS... [OPTIONS]  run a single command

verbs:
  verify TARGET                 Hecke axioms        --depth --caps --format --output
  orbits TARGET                 U-orbit sizes       --radius --caps --format --output
  index TARGET WORD...          commensuration      --depth --caps --format --output
  scale TARGET [WORD]           scale estimates     --steps --depth --caps --format --output
  ball TARGET                   Schreier ball       --radius --caps --format text|json|dot --output
  complete TARGET WORD          coset chain         --depth --caps --format --output
  filter compare A.filter B.filter | filter show A.filter
  rank TARGET | rank --certificate FILE.json
  tower --n N [--seed abstract|TARGET]

TARGET is a pair expression such as bs(2) or wreath(dihedral(), translation()).
--caps takes COSET,ORBIT; HECKE_COSET_CAP and HECKE_ORBIT_CAP set the defaults.
exit status: 0 pass, 1 failed finding, 2 usage error";

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_string(), source })
}

fn finish(stdout: &str, stderr: Option<&str>, code: i32) -> ExitCode {
    let _ = std::io::stdout().write_all(stdout.as_bytes());
    if let Some(e) = stderr {
        eprintln!("{e}");
    }
    ExitCode::from(code as u8)
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first().map(String::as_str) {
        None | Some("help" | "--help" | "-h") => {
            let code = if args.is_empty() { 2 } else { 0 };
            finish(&format!("{USAGE}\n"), None, code)
        }
        Some(sub @ ("run" | "fmt")) => {
            let [_, file] = args.as_slice() else {
                return finish("", Some(&format!("error: `{sub}` takes exactly one file\n{USAGE}")), 2);
            };
            let source = match read_file(file) {
                Ok(s) => s,
                Err(e) => return finish("", Some(&format!("error: {e}")), e.exit_code()),
            };
            let program = match parse_program(&source) {
                Ok(p) => p,
                Err(e) => return finish("", Some(&format!("{file}:{}", e.render(&source))), e.exit_code()),
            };
            if sub == "fmt" {
                return finish(&print_program(&program), None, 0);
            }
            let base = Path::new(file).parent().unwrap_or(Path::new("."));
            let mut session = match Session::new(base) {
                Ok(s) => s,
                Err(e) => return finish("", Some(&format!("error: {e}")), e.exit_code()),
            };
            let result = run_program(&mut session, &program, &source);
            let error = result.error.map(|e| format!("{file}:{e}"));
            finish(&result.output, error.as_deref(), result.exit_code)
        }
        Some(_) => {
            let (line, cmd) = match parse_args(&args) {
                Ok(parsed) => parsed,
                Err(e) => return finish("", Some(&e.render(&args.join(" "))), e.exit_code()),
            };
            let session = match Session::new(".") {
                Ok(s) => s,
                Err(e) => return finish("", Some(&format!("error: {e}")), e.exit_code()),
            };
            match session.execute(&cmd) {
                Ok((outcome, text)) => finish(&text, None, outcome.exit_code()),
                Err(e) => finish("", Some(&e.render(&line)), e.exit_code()),
            }
        }
    }
}
