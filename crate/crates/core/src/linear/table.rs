use std::io::Write;

use rayon::prelude::*;

use super::eigen::{eigensystem, ModeEigenSystem};
use crate::basis::{BasisKind, Truncation};
use crate::error::Result;
use crate::fields::Alpha;

pub const EIGEN_CSV_HEADER: &str = "n,q,|eta|,disc,region,Re lambda+,Im lambda+,Re lambda-,Im lambda-";

/// Eigensystems of every B-mode, in storage order.
pub fn eigen_table(trunc: &Truncation, alpha: Alpha) -> Result<Vec<ModeEigenSystem>> {
    (0..trunc.mode_count(BasisKind::B))
        .into_par_iter()
        .map(|i| eigensystem(&trunc.mode(BasisKind::B, i), alpha))
        .collect()
}

/// CSV dump; multi-component `n` is written as `n1:n2`.
pub fn write_eigen_csv<W: Write>(mut w: W, table: &[ModeEigenSystem]) -> Result<()> {
    writeln!(w, "{EIGEN_CSV_HEADER}")?;
    for e in table {
        let n: Vec<String> = e.mode.n().iter().map(|v| v.to_string()).collect();
        writeln!(
            w,
            "{},{},{:.17e},{:.17e},{},{:.17e},{:.17e},{:.17e},{:.17e}",
            n.join(":"),
            e.mode.q(),
            e.mode.eta(),
            e.discriminant,
            e.region,
            e.lambda_plus.re,
            e.lambda_plus.im,
            e.lambda_minus.re,
            e.lambda_minus.im
        )?;
    }
    Ok(())
}
