use super::blocks::{blocks_shorter, canonical_shortest, BlockForm};
use super::{for_each_lasso, Lasso};
use crate::alphabet::Valuation;
use crate::automaton::{MembershipCache, Tgba};

/// Violations of shortening or lengthening insensitivity found among
/// bounded lassos.
#[derive(Clone, Debug, Default)]
pub struct SensitivityReport {
    pub stem_max: usize,
    pub loop_max: usize,
    /// Normalized lassos examined.
    pub words: usize,
    pub shortening_count: usize,
    pub lengthening_count: usize,
    /// Up to [`SensitivityReport::KEPT`] pairs `(w, w')` with `w` accepted,
    /// `w' ⪯ w` rejected.
    pub shortening: Vec<(Lasso, Lasso)>,
    /// Up to [`SensitivityReport::KEPT`] pairs `(w, w')` with `w` accepted,
    /// `w ⪯ w'` rejected.
    pub lengthening: Vec<(Lasso, Lasso)>,
}

impl SensitivityReport {
    pub const KEPT: usize = 8;
}

// stem length (4 bits), cycle length (3 bits), then 6 bits per letter
fn pack(w: &Lasso) -> u64 {
    let mut x = w.stem.len() as u64 | (w.cycle.len() as u64) << 4;
    for (i, v) in w.stem.iter().chain(&w.cycle).enumerate() {
        x |= (v.0 as u64) << (7 + 6 * i);
    }
    x
}

fn unpack(x: u64) -> Lasso {
    let s = (x & 0xf) as usize;
    let c = (x >> 4 & 0x7) as usize;
    let letter = |i: usize| Valuation((x >> (7 + 6 * i) & 0x3f) as u8);
    Lasso {
        stem: (0..s).map(letter).collect(),
        cycle: (s..s + c).map(letter).collect(),
    }
}

const ACCEPTED: u64 = 1 << 63;

/// Enumerates every normalized lasso over `a.ap()` within the bounds and
/// compares each accepted word with every rejected word of its stutter class.
///
/// # Panics
///
/// Panics unless `1 <= loop_max <= 7` and `stem_max + loop_max <= 9`.
pub fn bounded_sensitivity_oracle(a: &Tgba, stem_max: usize, loop_max: usize) -> SensitivityReport {
    assert!((1..=7).contains(&loop_max) && stem_max + loop_max <= 9);
    let mut cache = MembershipCache::new(a);
    let mut rows: Vec<(u64, u64)> = Vec::new();
    for_each_lasso(a.ap().len(), stem_max, loop_max, |w| {
        let key = pack(&canonical_shortest(w));
        let acc = if cache.accepts(w) { ACCEPTED } else { 0 };
        rows.push((key, pack(w) | acc));
    });
    rows.sort_unstable();
    let mut report = SensitivityReport {
        stem_max,
        loop_max,
        words: rows.len(),
        ..Default::default()
    };
    for group in rows.chunk_by(|x, y| x.0 == y.0) {
        let accepted = group.iter().filter(|r| r.1 & ACCEPTED != 0).count();
        if accepted == 0 || accepted == group.len() {
            continue;
        }
        let (acc, rej): (Vec<_>, Vec<_>) = group
            .iter()
            .map(|r| {
                let w = unpack(r.1 & !ACCEPTED);
                let b = BlockForm::of(&w);
                (r.1 & ACCEPTED != 0, w, b)
            })
            .partition(|x| x.0);
        for (_, w, bw) in &acc {
            for (_, v, bv) in &rej {
                if blocks_shorter(bv, bw) {
                    report.shortening_count += 1;
                    if report.shortening.len() < SensitivityReport::KEPT {
                        report.shortening.push((w.clone(), v.clone()));
                    }
                }
                if blocks_shorter(bw, bv) {
                    report.lengthening_count += 1;
                    if report.lengthening.len() < SensitivityReport::KEPT {
                        report.lengthening.push((w.clone(), v.clone()));
                    }
                }
            }
        }
    }
    report
}
