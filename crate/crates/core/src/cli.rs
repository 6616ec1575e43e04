//! Streaming front end: line protocol, LZ mode, generator, counters.
//!
//! Protocol lines (bytes; `%xx` escapes admit newline, `+`, `?` in payloads):
//!   +<bytes>    extend per symbol, reply `ok <n>`
//!   ?<pattern>  reply `<position> <length>` of the most recent longest match
//!   !<pattern>  reply position of the most recent exact match, or `-`
//!   #           reply with the counter snapshot
//! Anything else replies `err <reason>` and the session continues.

use std::fs;
use std::io::{self, BufRead, Write};

use crate::lz::{self, UpdateMode};
use crate::tree::Index;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn decode_payload(raw: &[u8]) -> Result<Vec<u8>, String> {
    let mut out = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        if raw[i] == b'%' {
            if i + 3 > raw.len() {
                return Err("truncated escape".into());
            }
            let hex = std::str::from_utf8(&raw[i + 1..i + 3])
                .map_err(|_| "bad escape".to_string())?;
            let byte = u8::from_str_radix(hex, 16).map_err(|_| "bad escape".to_string())?;
            out.push(byte);
            i += 3;
        } else {
            out.push(raw[i]);
            i += 1;
        }
    }
    Ok(out)
}

pub fn run_protocol<R: BufRead, W: Write>(
    input: R,
    mut output: W,
    window: Option<usize>,
) -> io::Result<()> {
    let mut index = match window {
        Some(w) => match Index::windowed(w) {
            Ok(i) => i,
            Err(e) => {
                writeln!(output, "err {e}")?;
                return Ok(());
            }
        },
        None => Index::new(),
    };
    for line in input.split(b'\n') {
        let line = line?;
        let line = if line.last() == Some(&b'\r') {
            &line[..line.len() - 1]
        } else {
            &line[..]
        };
        if line.is_empty() {
            writeln!(output, "err empty line")?;
            continue;
        }
        let payload = match decode_payload(&line[1..]) {
            Ok(p) => p,
            Err(e) => {
                writeln!(output, "err {e}")?;
                continue;
            }
        };
        match line[0] {
            b'+' => {
                let mut failed = None;
                for &c in &payload {
                    if let Err(e) = index.extend(c) {
                        failed = Some(e);
                        break;
                    }
                }
                match failed {
                    None => writeln!(output, "ok {}", index.n())?,
                    Some(e) => writeln!(output, "err {e}")?,
                }
            }
            b'?' => {
                let m = index.most_recent_longest_match(&payload);
                writeln!(output, "{} {}", m.position, m.length)?;
            }
            b'!' => match index.most_recent_exact_match(&payload) {
                Some(p) => writeln!(output, "{p}")?,
                None => writeln!(output, "-")?,
            },
            b'#' => {
                write!(output, "{}", index.stats())?;
            }
            c => writeln!(output, "err unknown command {:?}", c as char)?,
        }
    }
    output.flush()
}

fn usage() -> i32 {
    eprintln!(
        "usage: recentmatch serve [-w W]\n       recentmatch lz <file> [-w W]\n       recentmatch gen -d D -n N\n       recentmatch bench <file>"
    );
    EXIT_USAGE
}

fn parse_flag(args: &[String], flag: &str) -> Result<Option<usize>, ()> {
    if let Some(pos) = args.iter().position(|a| a == flag) {
        let v = args.get(pos + 1).ok_or(())?;
        let n = v.parse().map_err(|_| ())?;
        Ok(Some(n))
    } else {
        Ok(None)
    }
}

pub fn run(args: &[String]) -> i32 {
    let Some(cmd) = args.first() else {
        return usage();
    };
    match cmd.as_str() {
        "serve" => {
            let window = match parse_flag(&args[1..], "-w") {
                Ok(w) => w,
                Err(()) => return usage(),
            };
            let stdin = io::stdin();
            let stdout = io::stdout();
            match run_protocol(stdin.lock(), stdout.lock(), window) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("io error: {e}");
                    EXIT_IO
                }
            }
        }
        "lz" => {
            let Some(path) = args.get(1).filter(|a| !a.starts_with('-')) else {
                return usage();
            };
            let window = match parse_flag(&args[2..], "-w") {
                Ok(w) => w,
                Err(()) => return usage(),
            };
            let data = match fs::read(path) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("cannot read {path}: {e}");
                    return EXIT_IO;
                }
            };
            let factors = match lz::factorize(&data, window, UpdateMode::Deferred) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("indexing failed: {e}");
                    return EXIT_IO;
                }
            };
            let stdout = io::stdout();
            match lz::write_factors(stdout.lock(), &factors) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("io error: {e}");
                    EXIT_IO
                }
            }
        }
        "gen" => {
            let d = match parse_flag(&args[1..], "-d") {
                Ok(Some(d)) => d,
                _ => return usage(),
            };
            let n = match parse_flag(&args[1..], "-n") {
                Ok(Some(n)) => n,
                _ => return usage(),
            };
            if d == 0 {
                return usage();
            }
            let s = crate::gen::gen_adversarial(d, n);
            let stdout = io::stdout();
            match stdout.lock().write_all(&s) {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    eprintln!("io error: {e}");
                    EXIT_IO
                }
            }
        }
        "bench" => {
            let Some(path) = args.get(1) else {
                return usage();
            };
            let data = match fs::read(path) {
                Ok(d) => d,
                Err(e) => {
                    eprintln!("cannot read {path}: {e}");
                    return EXIT_IO;
                }
            };
            let mut index = Index::new();
            let start = std::time::Instant::now();
            for &c in &data {
                if let Err(e) = index.extend(c) {
                    eprintln!("indexing failed: {e}");
                    return EXIT_IO;
                }
            }
            let elapsed = start.elapsed();
            print!("{}", index.stats());
            println!("elapsed_ms={}", elapsed.as_millis());
            EXIT_OK
        }
        _ => usage(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn session(input: &str) -> String {
        let mut out = Vec::new();
        run_protocol(input.as_bytes(), &mut out, None).unwrap();
        String::from_utf8(out).unwrap()
    }

    #[test]
    fn protocol_examples() {
        let out = session("+abcabda\n?ab\n");
        assert_eq!(out, "ok 7\n3 2\n");
        let out = session("?x\n");
        assert_eq!(out, "0 0\n");
        let out = session("+abcabda\n!abx\n!bd\n");
        assert_eq!(out, "ok 7\n-\n4\n");
    }

    #[test]
    fn protocol_stats_and_errors() {
        let out = session("#\n");
        assert!(out.starts_with("n=0\nnodes=2\n"));
        assert!(out.contains("reprupd_calls=0"));
        let out = session("zzz\n");
        assert!(out.starts_with("err "));
        let out = session("+a%2bb\n?a+\n");
        // the %2b escape admits a literal '+' into the text
        assert_eq!(out, "ok 3\n0 2\n");
    }

    #[test]
    fn protocol_deterministic_replay() {
        let script = "+abaaabbbabaaabbb\n?aab\n!aaa\n#\n+ab\n?ab\n";
        assert_eq!(session(script), session(script));
    }
}
