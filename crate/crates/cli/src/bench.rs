//! Seeded Gaussian trials: one certificate search per trial, one CSV row out.

use std::fs::File;
use std::io::Write;
use std::time::Instant;

use hoffman_core::polylp::min_conic_image_norm;
use hoffman_core::{hoffman_inequalities, Algorithm, IndexSet, Matrix, NormConfig, SplitMix64};

use crate::{parse_algo, parse_norm, BenchArgs, CliError};

pub const HEADER: [&str; 8] = ["m", "n", "trial", "n_F", "n_I", "H", "wallclock_ms", "surjective"];

/// Trial `t` of a batch: an `m × n` matrix of independent standard normals
/// drawn row by row from stream `t` of `seed`.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64, t: u64) -> Matrix {
    let mut rng = SplitMix64::for_stream(seed, t);
    Matrix::from_row_major(m, n, rng.normal_vec(m * n)).expect("length matches")
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialRow {
    pub trial: u64,
    pub f: usize,
    pub i: usize,
    pub h: f64,
    pub wallclock_ms: Option<f64>,
    pub surjective: bool,
    /// `None` unless the cover was checked.
    pub cover_ok: Option<bool>,
}

#[derive(Clone, Copy, Debug)]
pub struct TrialConfig {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
    pub norms: NormConfig,
    pub algo: Algorithm,
    pub verify: bool,
    pub timing: bool,
}

pub fn run_trial(cfg: &TrialConfig, t: u64) -> Result<TrialRow, CliError> {
    let a = gaussian_matrix(cfg.m, cfg.n, cfg.seed, t);
    let start = Instant::now();
    let report = hoffman_inequalities(&a, cfg.norms, cfg.algo)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let surjective = min_conic_image_norm(&a, &IndexSet::full(cfg.m), cfg.norms)?.surjective;
    let cover_ok = if cfg.verify {
        Some(report.ledger.verify_cover()?)
    } else {
        None
    };
    Ok(TrialRow {
        trial: t,
        f: report.ledger.surjective().len(),
        i: report.ledger.nonsurjective().len(),
        h: report.h,
        wallclock_ms: cfg.timing.then_some(elapsed),
        surjective,
        cover_ok,
    })
}

/// Runs `trials` trials on `jobs` threads; rows come back in trial order.
pub fn run_trials(cfg: &TrialConfig, trials: u64, jobs: usize) -> Result<Vec<TrialRow>, CliError> {
    let jobs = jobs.max(1) as u64;
    if jobs == 1 {
        return (0..trials).map(|t| run_trial(cfg, t)).collect();
    }
    let mut rows = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|k| {
                s.spawn(move || {
                    (k..trials)
                        .step_by(jobs as usize)
                        .map(|t| run_trial(cfg, t))
                        .collect::<Result<Vec<_>, _>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("trial thread panicked"))
            .collect::<Result<Vec<_>, _>>()
    })?
    .into_iter()
    .flatten()
    .collect::<Vec<_>>();
    rows.sort_by_key(|r| r.trial);
    Ok(rows)
}

pub fn write_csv(out: &mut dyn Write, m: usize, n: usize, rows: &[TrialRow]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| CliError::io(e.to_string());
    w.write_record(HEADER).map_err(csv_err)?;
    for r in rows {
        let wall = r.wallclock_ms.map_or("NA".to_owned(), |ms| format!("{ms:.3}"));
        w.write_record([
            m.to_string(),
            n.to_string(),
            r.trial.to_string(),
            r.f.to_string(),
            r.i.to_string(),
            r.h.to_string(),
            wall,
            u8::from(r.surjective).to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn run(args: &BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = TrialConfig {
        m: args.m,
        n: args.n,
        seed: args.seed,
        norms: NormConfig::new(parse_norm(&args.norm_dom)?, parse_norm(&args.norm_cod)?),
        algo: parse_algo(&args.algo)?,
        verify: args.verify,
        timing: args.timing,
    };
    if !cfg.norms.is_exact() {
        return Err(CliError::new(
            CliError::NORMS,
            format!("norm pair {} has no exact path", cfg.norms),
        ));
    }
    let rows = run_trials(&cfg, args.trials, args.jobs)?;
    match &args.out {
        Some(path) => {
            let mut file = File::create(path)
                .map_err(|e| CliError::io(format!("cannot create {}: {e}", path.display())))?;
            write_csv(&mut file, args.m, args.n, &rows)?;
        }
        None => write_csv(out, args.m, args.n, &rows)?,
    }
    let failed: Vec<u64> = rows
        .iter()
        .filter(|r| r.cover_ok == Some(false))
        .map(|r| r.trial)
        .collect();
    if !failed.is_empty() {
        return Err(CliError::verify(format!("cover check failed on trials {failed:?}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hoffman_core::NormTag;

    fn cfg(m: usize, n: usize) -> TrialConfig {
        TrialConfig {
            m,
            n,
            seed: 7,
            norms: NormConfig::new(NormTag::LInf, NormTag::LInf),
            algo: Algorithm::Worklist,
            verify: true,
            timing: false,
        }
    }

    #[test]
    fn threads_do_not_change_rows() {
        let c = cfg(4, 2);
        assert_eq!(run_trials(&c, 10, 1).unwrap(), run_trials(&c, 10, 3).unwrap());
    }

    #[test]
    fn surjective_trials_are_one_probe() {
        // With m ≤ n a Gaussian matrix is surjective almost surely.
        let c = cfg(2, 4);
        for row in run_trials(&c, 5, 1).unwrap() {
            assert!(row.surjective);
            assert_eq!((row.f, row.i), (1, 0));
            assert_eq!(row.cover_ok, Some(true));
        }
    }
}
