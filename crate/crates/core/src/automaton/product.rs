use std::collections::HashMap;

use super::{Edge, Tgba};
use crate::alphabet::{lift, projection, Marks};
use crate::error::{AutomatonError, Error};
use crate::limits::Limits;

/// Union of two proposition lists: `a` in order, then the names only `b` has.
pub(crate) fn union_ap(a: &[String], b: &[String]) -> Vec<String> {
    let mut ap = a.to_vec();
    for name in b {
        if !ap.contains(name) {
            ap.push(name.clone());
        }
    }
    ap
}

/// Synchronous product. The language is the intersection; `a`'s marks come
/// first and `b`'s are shifted by `a.acceptance_count()`. Only reachable
/// pairs are built.
pub fn product(a: &Tgba, b: &Tgba, limits: &Limits) -> Result<Tgba, Error> {
    let ap = union_ap(a.ap(), b.ap());
    let k = a.acceptance_count() + b.acceptance_count();
    if k > 32 {
        return Err(AutomatonError::TooManyMarks(k as usize).into());
    }
    let pos = |names: &[String]| -> Vec<usize> {
        names
            .iter()
            .map(|n| ap.iter().position(|m| m == n).expect("in union"))
            .collect()
    };
    let proj_a = projection(&pos(a.ap()), ap.len());
    let proj_b = projection(&pos(b.ap()), ap.len());
    let shift = a.acceptance_count();

    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = vec![(a.initial(), b.initial())];
    index.insert(pairs[0], 0);
    let mut edges = Vec::new();
    let mut head = 0;
    while head < pairs.len() {
        let (qa, qb) = pairs[head];
        let src = head;
        head += 1;
        if head % 4096 == 0 {
            limits.check_time("product")?;
        }
        for ea in a.out(qa) {
            let ga = lift(ea.guard, &proj_a);
            for eb in b.out(qb) {
                let guard = ga.intersect(lift(eb.guard, &proj_b));
                if guard.is_empty() {
                    continue;
                }
                let key = (ea.dst, eb.dst);
                let dst = match index.get(&key) {
                    Some(&d) => d,
                    None => {
                        let d = pairs.len();
                        limits.check_states(d + 1, "product")?;
                        index.insert(key, d);
                        pairs.push(key);
                        d
                    }
                };
                edges.push(Edge {
                    src,
                    dst,
                    guard,
                    marks: Marks(ea.marks.0 | eb.marks.0 << shift),
                });
            }
        }
    }
    Ok(Tgba::new(ap, pairs.len(), 0, k, edges)?)
}
