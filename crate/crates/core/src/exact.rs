//! Exact optimal-basis identification by alternating elimination and
//! selection rounds over a shrinking matroid minor.

use crate::env::SamplingSession;
use crate::error::{Error, Result};
use crate::matroid::{at_least, blocks_unchecked, ElementId, Matroid, MatroidView};
use crate::pac::{check_params, pac_sample_prune, ConstantsProfile, Estimates, PacResult};
use crate::trace::{RoundKind, TraceRecord};

/// Accuracy and confidence of round `r`: `(2^{−r}/4, δ/(100 r³))`.
pub fn round_schedule(r: u32, delta: f64) -> Result<(f64, f64)> {
    if r < 1 {
        return Err(Error::domain("rounds are numbered from 1"));
    }
    let rf = f64::from(r);
    Ok((0.25 * 0.5f64.powi(r as i32), delta / (100.0 * rf * rf * rf)))
}

/// Returns the optimal basis with probability at least 1 − δ (distinct true
/// means assumed).
///
/// While the current minor has no more optimal than suboptimal arms it runs
/// an elimination round: an `ε_r`-optimal basis `I` from `pac_sample_prune`
/// discards every arm that `I`'s arms at least `1.5·ε_r` heavier (empirically)
/// block. Otherwise it runs a selection round: every arm not blocked by the
/// other arms heavier than its empirical mean minus `2·ε_r` is committed and
/// contracted away.
pub fn exact_exp_gap(
    session: &mut SamplingSession,
    m: &MatroidView,
    delta: f64,
    constants: &ConstantsProfile,
) -> Result<PacResult> {
    check_params(1.0, delta)?;
    constants.validate()?;
    let start = session.total_samples();
    let (_, input_loops) = crate::matroid::isolated_and_loops(m);

    let mut cur = m.clone();
    let mut answer: Vec<ElementId> = Vec::new();
    let mut transcript = Vec::new();
    let (mut r_elim, mut r_sele) = (1u32, 1u32);

    loop {
        let arms = cur.ground().to_vec();
        let n_opt = cur.full_rank();
        let n_bad = arms.len() - n_opt;

        if n_opt <= n_bad {
            if n_opt == 0 {
                break;
            }
            let r = next_round(&mut r_elim, constants)?;
            let (eps_r, delta_r) = round_schedule(r, delta)?;

            let pac = pac_sample_prune(session, &cur, eps_r, delta_r, constants)?;
            transcript.extend(pac.transcript);
            let solution = pac.basis;
            let rest: Vec<ElementId> = arms.iter().copied().filter(|e| !solution.contains(e)).collect();

            let mut table = Estimates::new(session.num_arms());
            let means = session.uniform_sample(&solution, eps_r / 2.0, delta_r / n_opt as f64)?;
            table.record(&solution, &means);
            if !rest.is_empty() {
                let means = session.uniform_sample(&rest, eps_r, delta_r / n_opt as f64)?;
                table.record(&rest, &means);
            }

            let mut survivors = solution.clone();
            let mut dropped = Vec::new();
            for &e in &rest {
                let heavier = at_least(&solution, table.as_slice(), table.get(e) + 1.5 * eps_r);
                if blocks_unchecked(&cur, &heavier, e) {
                    dropped.push(e);
                } else {
                    survivors.push(e);
                }
            }
            cur = cur.restrict(&survivors)?;
            transcript.push(TraceRecord::ExactRound {
                kind: RoundKind::Elimination,
                r,
                arms: arms.len(),
                n_opt,
                n_bad,
                changed: survivors.len(),
                affected: dropped,
                cumulative_samples: session.total_samples() - start,
            });
        } else {
            if n_bad == 0 {
                answer.extend_from_slice(&arms);
                break;
            }
            let r = next_round(&mut r_sele, constants)?;
            let (eps_r, delta_r) = round_schedule(r, delta)?;

            let means = session.uniform_sample(&arms, eps_r, delta_r / arms.len() as f64)?;
            let mut table = Estimates::new(session.num_arms());
            table.record(&arms, &means);

            let mut others = Vec::with_capacity(arms.len());
            let selected: Vec<ElementId> = arms
                .iter()
                .copied()
                .filter(|&e| {
                    others.clear();
                    others.extend(arms.iter().copied().filter(|&a| a != e));
                    let heavier = at_least(&others, table.as_slice(), table.get(e) - 2.0 * eps_r);
                    !blocks_unchecked(&cur, &heavier, e)
                })
                .collect();

            answer.extend_from_slice(&selected);
            cur = match cur.contract(&selected) {
                Ok(v) => v,
                Err(Error::DependentContraction) => {
                    return Err(Error::internal("selection round picked a dependent set"))
                }
                Err(e) => return Err(e),
            };
            transcript.push(TraceRecord::ExactRound {
                kind: RoundKind::Selection,
                r,
                arms: arms.len(),
                n_opt,
                n_bad,
                changed: selected.len(),
                affected: selected,
                cumulative_samples: session.total_samples() - start,
            });
        }

        if let Some(e) = cur.ground().iter().find(|e| cur.rank_unchecked(&[**e]) == 0 && !input_loops.contains(e)) {
            return Err(Error::internal(format!("element {e} became a loop")));
        }
    }

    answer.sort_unstable();
    Ok(PacResult { basis: answer, samples: session.total_samples() - start, transcript })
}

fn next_round(counter: &mut u32, c: &ConstantsProfile) -> Result<u32> {
    if *counter > c.max_rounds {
        return Err(Error::Budget(format!(
            "round limit {} reached (gaps below 2^-{} are not resolvable)",
            c.max_rounds, c.max_rounds
        )));
    }
    let r = *counter;
    *counter += 1;
    Ok(r)
}
