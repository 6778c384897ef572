//! External elimination backend: a subprocess that receives one
//! first-order sentence on stdin and answers with one quantifier-free
//! formula on stdout.
//!
//! Protocol: the payload is printed in the crate's formula syntax,
//! followed by a newline; stdin is then closed. The process must exit 0
//! and print a single quantifier-free formula. Any other behavior —
//! failure to start, nonzero exit, unparsable or quantified output, or
//! exceeding the timeout — is a bridge failure.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use crate::formula::{parse_formula, print_formula, Formula};

use super::QeError;

#[derive(Clone, Debug)]
pub struct Bridge {
    /// Command line, split on whitespace; the first word is the program.
    pub command: String,
    pub timeout: Duration,
}

impl Bridge {
    pub fn new(command: impl Into<String>) -> Self {
        Bridge { command: command.into(), timeout: Duration::from_secs(30) }
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.timeout = timeout;
        self
    }

    /// Run the external eliminator on one sentence.
    pub fn eliminate(&self, payload: &Formula) -> Result<Formula, QeError> {
        let fail = |msg: String| QeError::BridgeFailure(msg);
        let mut parts = self.command.split_whitespace();
        let prog = parts
            .next()
            .ok_or_else(|| fail("empty bridge command".into()))?;
        let mut child = Command::new(prog)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| fail(format!("failed to start `{}`: {e}", self.command)))?;

        // Writer and readers run on their own threads so a chatty or slow
        // process cannot deadlock us on a full pipe.
        let mut stdin = child.stdin.take().expect("piped stdin");
        let input = format!("{}\n", print_formula(payload));
        let writer = std::thread::spawn(move || {
            let _ = stdin.write_all(input.as_bytes());
        });
        let mut stdout_pipe = child.stdout.take().expect("piped stdout");
        let out_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stdout_pipe.read_to_string(&mut s);
            s
        });
        let mut stderr_pipe = child.stderr.take().expect("piped stderr");
        let err_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr_pipe.read_to_string(&mut s);
            s
        });

        let deadline = Instant::now() + self.timeout;
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status,
                Ok(None) => {
                    if Instant::now() >= deadline {
                        let _ = child.kill();
                        let _ = child.wait();
                        let _ = writer.join();
                        let _ = out_reader.join();
                        let _ = err_reader.join();
                        return Err(fail(format!(
                            "`{}` exceeded the {}s timeout",
                            self.command,
                            self.timeout.as_secs()
                        )));
                    }
                    std::thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return Err(fail(format!("failed to wait for bridge: {e}"))),
            }
        };
        let _ = writer.join();
        let stdout = out_reader.join().unwrap_or_default();
        let stderr = err_reader.join().unwrap_or_default();

        if !status.success() {
            let detail = stderr.trim();
            return Err(fail(format!(
                "`{}` exited with {status}{}{}",
                self.command,
                if detail.is_empty() { "" } else { ": " },
                detail
            )));
        }
        let text = stdout.trim();
        if text.is_empty() {
            return Err(fail(format!("`{}` produced no output", self.command)));
        }
        let f = parse_formula(text)
            .map_err(|e| fail(format!("unparsable bridge output: {e}")))?;
        if !f.is_quantifier_free() {
            return Err(fail("bridge returned a quantified formula".into()));
        }
        Ok(f)
    }
}
