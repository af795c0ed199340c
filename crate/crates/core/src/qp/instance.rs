//! Plain-text dump of a relaxed instance for cross-implementation comparison.
//!
//! ```text
//! q n k beta eta
//! c_1 ... c_q
//! d_1 ... d_q
//! L_11 ... L_1q        (q lines)
//! point cluster        (one pair per membership)
//! ```

use std::io::{BufRead, Write};

use nalgebra::DMatrix;

use super::{Laplacian, SceProblem};
use crate::error::{Result, SceError};

fn join(v: impl IntoIterator<Item = f64>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write_instance<W: Write>(problem: &SceProblem, mut out: W) -> std::io::Result<()> {
    let q = problem.q();
    writeln!(
        out,
        "{} {} {} {} {}",
        q,
        problem.n(),
        problem.k,
        problem.beta,
        problem.eta
    )?;
    writeln!(out, "{}", join(problem.cost.iter().copied()))?;
    writeln!(out, "{}", join(problem.d.iter().copied()))?;
    for i in 0..q {
        writeln!(out, "{}", join((0..q).map(|j| problem.laplacian.entry(i, j))))?;
    }
    for (j, col) in problem.columns.iter().enumerate() {
        for &p in col {
            writeln!(out, "{p} {j}")?;
        }
    }
    Ok(())
}

fn parse_err(row: usize, col: usize, msg: impl Into<String>) -> SceError {
    SceError::Parse {
        row,
        col,
        msg: msg.into(),
    }
}

fn numbers<T: std::str::FromStr>(line: &str, row: usize, expected: usize) -> Result<Vec<T>> {
    let v: Vec<T> = line
        .split_whitespace()
        .enumerate()
        .map(|(c, tok)| {
            tok.parse()
                .map_err(|_| parse_err(row, c + 1, format!("bad number `{tok}`")))
        })
        .collect::<Result<_>>()?;
    if v.len() != expected {
        return Err(SceError::RaggedRows {
            row,
            expected,
            got: v.len(),
        });
    }
    Ok(v)
}

pub fn read_instance<R: BufRead>(input: R) -> Result<SceProblem> {
    let lines: Vec<String> = input
        .lines()
        .collect::<std::io::Result<_>>()
        .map_err(|e| parse_err(0, 0, e.to_string()))?;
    let mut it = lines
        .iter()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.as_str()));
    let mut next = |what: &str| it.next().ok_or_else(|| parse_err(0, 0, format!("missing {what}")));

    let (row, header) = next("header")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 5 {
        return Err(SceError::RaggedRows {
            row,
            expected: 5,
            got: toks.len(),
        });
    }
    let int = |c: usize| -> Result<usize> {
        toks[c]
            .parse()
            .map_err(|_| parse_err(row, c + 1, "expected an integer"))
    };
    let float = |c: usize| -> Result<f64> {
        toks[c]
            .parse()
            .map_err(|_| parse_err(row, c + 1, "expected a number"))
    };
    let (q, n, k, beta, eta) = (int(0)?, int(1)?, int(2)?, float(3)?, float(4)?);

    let (row, line) = next("cost line")?;
    let cost = numbers::<f64>(line, row, q)?;
    let (row, line) = next("d line")?;
    let d = numbers::<f64>(line, row, q)?;
    let mut l = DMatrix::zeros(q, q);
    for i in 0..q {
        let (row, line) = next("Laplacian row")?;
        for (j, v) in numbers::<f64>(line, row, q)?.into_iter().enumerate() {
            l[(i, j)] = v;
        }
    }
    let mut columns = vec![Vec::new(); q];
    for (row, line) in it {
        let pair = numbers::<usize>(line, row, 2)?;
        if pair[1] >= q {
            return Err(parse_err(row, 2, "cluster index out of range"));
        }
        columns[pair[1]].push(pair[0]);
    }
    for c in &mut columns {
        c.sort_unstable();
        c.dedup();
    }
    SceProblem::new(cost, Laplacian::dense(l)?, beta, columns, n, k, d, eta)
}
