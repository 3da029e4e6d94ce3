use std::collections::VecDeque;

use super::{Edge, Tgba};
use crate::alphabet::Marks;
use crate::error::ResourceError;
use crate::lasso::Lasso;
use crate::limits::Limits;

/// Strongly connected components of a graph.
///
/// Components are numbered in the order Tarjan's algorithm completes them,
/// so every edge leaving a component points to a smaller number. Nodes never
/// reached from the roots have component `usize::MAX`.
#[derive(Clone, Debug)]
pub struct Scc {
    pub component: Vec<usize>,
    pub count: usize,
}

/// Iterative Tarjan over a graph in compressed adjacency form: successors of
/// `v` are `adj[start[v]..start[v + 1]]`.
pub(crate) fn tarjan(
    start: &[usize],
    adj: &[usize],
    roots: impl IntoIterator<Item = usize>,
) -> Scc {
    let n = start.len() - 1;
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut component = vec![UNSEEN; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut count = 0;
    for root in roots {
        if index[root] != UNSEEN {
            continue;
        }
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, start[root]));
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < start[v + 1] {
                let w = adj[*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, start[w]));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    component[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    Scc { component, count }
}

fn adjacency(a: &Tgba) -> (Vec<usize>, Vec<usize>) {
    let mut start = Vec::with_capacity(a.num_states() + 1);
    start.push(0);
    for s in 0..a.num_states() {
        start.push(start[s] + a.out(s).len());
    }
    let adj = a.edges().iter().map(|e| e.dst).collect();
    (start, adj)
}

/// Per component: whether it contains a cycle whose edges carry every mark.
fn accepting_components(a: &Tgba, scc: &Scc) -> Vec<bool> {
    let mut marks = vec![Marks::NONE; scc.count];
    let mut cyclic = vec![false; scc.count];
    for e in a.edges() {
        let c = scc.component[e.src];
        if c != usize::MAX && c == scc.component[e.dst] {
            cyclic[c] = true;
            marks[c] = marks[c].union(e.marks);
        }
    }
    let all = a.all_marks();
    (0..scc.count)
        .map(|c| cyclic[c] && marks[c].is_superset(all))
        .collect()
}

/// States from which at least one accepting run starts.
pub(crate) fn live_states(a: &Tgba) -> Vec<bool> {
    let (start, adj) = adjacency(a);
    let scc = tarjan(&start, &adj, 0..a.num_states());
    let acc = accepting_components(a, &scc);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); scc.count];
    for s in 0..a.num_states() {
        members[scc.component[s]].push(s);
    }
    let mut live_comp = vec![false; scc.count];
    for c in 0..scc.count {
        live_comp[c] = acc[c]
            || members[c].iter().any(|&s| {
                a.out(s).iter().any(|e| {
                    let d = scc.component[e.dst];
                    d != c && live_comp[d]
                })
            });
    }
    (0..a.num_states())
        .map(|s| live_comp[scc.component[s]])
        .collect()
}

/// Checks emptiness; returns an accepted lasso when the language is not
/// empty.
pub fn check_emptiness(a: &Tgba, limits: &Limits) -> Result<Option<Lasso>, ResourceError> {
    limits.check_states(a.num_states(), "emptiness check")?;
    limits.check_time("emptiness check")?;
    let (start, adj) = adjacency(a);
    let scc = tarjan(&start, &adj, [a.initial()]);
    let acc = accepting_components(a, &scc);
    if !acc.iter().any(|&x| x) {
        return Ok(None);
    }

    // shortest stem to any accepting component
    let mut parent: Vec<Option<Edge>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::from([a.initial()]);
    seen[a.initial()] = true;
    let mut entry = None;
    while let Some(s) = queue.pop_front() {
        if acc[scc.component[s]] {
            entry = Some(s);
            break;
        }
        for e in a.out(s) {
            if !seen[e.dst] {
                seen[e.dst] = true;
                parent[e.dst] = Some(*e);
                queue.push_back(e.dst);
            }
        }
    }
    let entry = entry.expect("accepting component is reachable");
    let mut stem = Vec::new();
    let mut s = entry;
    while let Some(e) = parent[s] {
        stem.push(e);
        s = e.src;
    }
    stem.reverse();

    let comp = scc.component[entry];
    let mut cycle: Vec<Edge> = Vec::new();
    let mut need = a.all_marks();
    let mut cur = entry;
    while need != Marks::NONE || cycle.is_empty() {
        let path = path_in_component(a, &scc, comp, cur, |e| {
            need == Marks::NONE || e.marks.0 & need.0 != 0
        })
        .expect("accepting component covers every mark");
        for e in &path {
            need = Marks(need.0 & !e.marks.0);
        }
        cur = path.last().expect("nonempty path").dst;
        cycle.extend(path);
    }
    if cur != entry {
        cycle.extend(
            path_in_component(a, &scc, comp, cur, |e| e.dst == entry)
                .expect("component is strongly connected"),
        );
    }
    let letter = |e: &Edge| e.guard.first().expect("guards are nonempty");
    Ok(Some(Lasso::new(
        stem.iter().map(letter).collect(),
        cycle.iter().map(letter).collect(),
    )))
}

/// Shortest path inside one component from `from` ending with an edge that
/// satisfies `goal`.
fn path_in_component(
    a: &Tgba,
    scc: &Scc,
    comp: usize,
    from: usize,
    goal: impl Fn(&Edge) -> bool,
) -> Option<Vec<Edge>> {
    let mut parent: Vec<Option<Edge>> = vec![None; a.num_states()];
    let mut seen = vec![false; a.num_states()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(s) = queue.pop_front() {
        for e in a.out(s) {
            if scc.component[e.dst] != comp {
                continue;
            }
            if goal(e) {
                let mut path = vec![*e];
                let mut u = s;
                while let Some(p) = parent[u] {
                    path.push(p);
                    u = p.src;
                }
                path.reverse();
                return Some(path);
            }
            if !seen[e.dst] {
                seen[e.dst] = true;
                parent[e.dst] = Some(*e);
                queue.push_back(e.dst);
            }
        }
    }
    None
}

/// Emptiness with default limits. `(true, None)` iff the language is empty.
pub fn is_empty(a: &Tgba) -> (bool, Option<Lasso>) {
    let limits = Limits::default().with_state_cap(usize::MAX);
    let witness = check_emptiness(a, &limits).expect("no limits to exceed");
    (witness.is_none(), witness)
}
