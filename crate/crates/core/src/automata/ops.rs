//! Closure algebra: normalization, determinization, minimization, products,
//! projection, cylindrification and composition.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{Alphabet, StateId, SyncAutomaton, TapeVector, PAD};
use crate::error::{Error, Result};

impl SyncAutomaton {
    /// Trims useless states and renumbers in breadth-first discovery order.
    pub(crate) fn normalized(self) -> Self {
        let n = self.delta.len();
        let mut reach = vec![false; n];
        let mut stack: Vec<StateId> = self.initial.clone();
        for &q in &stack {
            reach[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, d) in &self.delta[q] {
                if !reach[d] {
                    reach[d] = true;
                    stack.push(d);
                }
            }
        }
        let mut rev: Vec<Vec<StateId>> = vec![Vec::new(); n];
        for (q, ts) in self.delta.iter().enumerate() {
            for &(_, d) in ts {
                rev[d].push(q);
            }
        }
        let mut coreach = vec![false; n];
        let mut stack: Vec<StateId> = (0..n).filter(|&q| self.accepting[q]).collect();
        for &q in &stack {
            coreach[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !coreach[p] {
                    coreach[p] = true;
                    stack.push(p);
                }
            }
        }
        let useful: Vec<bool> = (0..n).map(|q| reach[q] && coreach[q]).collect();

        let mut new_id = vec![usize::MAX; n];
        let mut order = Vec::new();
        let mut inits: Vec<StateId> = self.initial.iter().copied().filter(|&q| useful[q]).collect();
        inits.sort_unstable();
        inits.dedup();
        for &q in &inits {
            new_id[q] = order.len();
            order.push(q);
        }
        let mut head = 0;
        while head < order.len() {
            let q = order[head];
            head += 1;
            let mut ts: Vec<&(TapeVector, StateId)> =
                self.delta[q].iter().filter(|(_, d)| useful[*d]).collect();
            ts.sort();
            for (_, d) in ts {
                if new_id[*d] == usize::MAX {
                    new_id[*d] = order.len();
                    order.push(*d);
                }
            }
        }
        let delta: Vec<Vec<(TapeVector, StateId)>> = order
            .iter()
            .map(|&q| {
                let mut ts: Vec<(TapeVector, StateId)> = self.delta[q]
                    .iter()
                    .filter(|(_, d)| useful[*d])
                    .map(|(l, d)| (l.clone(), new_id[*d]))
                    .collect();
                ts.sort();
                ts.dedup();
                ts
            })
            .collect();
        SyncAutomaton {
            tapes: self.tapes,
            alphabet: self.alphabet,
            initial: (0..inits.len()).collect(),
            accepting: order.iter().map(|&q| self.accepting[q]).collect(),
            delta,
            relaxed: self.relaxed,
        }
    }

    /// Product with the well-formed-convolution universe, computed on the
    /// fly: each state is paired with the set of tapes that already ended.
    pub(crate) fn enforce_padding(self) -> Self {
        assert!(self.tapes <= 64, "at most 64 tapes are supported");
        let pad_mask = |l: &TapeVector| -> u64 {
            l.entries()
                .iter()
                .enumerate()
                .filter(|(_, &s)| s == PAD)
                .fold(0u64, |m, (i, _)| m | (1 << i))
        };
        let mut ids: HashMap<(StateId, u64), StateId> = HashMap::new();
        let mut states: Vec<(StateId, u64)> = Vec::new();
        let mut initial = Vec::new();
        for &q in &self.initial {
            let id = *ids.entry((q, 0)).or_insert_with(|| {
                states.push((q, 0));
                states.len() - 1
            });
            initial.push(id);
        }
        let mut delta: Vec<Vec<(TapeVector, StateId)>> = Vec::new();
        let mut head = 0;
        while head < states.len() {
            let (q, mask) = states[head];
            head += 1;
            let mut out = Vec::new();
            for (l, d) in &self.delta[q] {
                let lm = pad_mask(l);
                if mask & !lm != 0 {
                    continue; // a tape that had ended reads a symbol again
                }
                let key = (*d, mask | lm);
                let id = *ids.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                out.push((l.clone(), id));
            }
            delta.push(out);
        }
        let accepting = states.iter().map(|&(q, _)| self.accepting[q]).collect();
        SyncAutomaton::from_raw(self.tapes, self.alphabet, initial, accepting, delta, false)
    }
}

fn check_compatible(a: &SyncAutomaton, b: &SyncAutomaton) -> Result<()> {
    if a.tapes != b.tapes {
        return Err(Error::ArityMismatch {
            expected: a.tapes,
            actual: b.tapes,
        });
    }
    if a.alphabet != b.alphabet {
        return Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            a.alphabet.symbols(),
            b.alphabet.symbols()
        )));
    }
    Ok(())
}

/// Subset construction. Returns the input unchanged when already
/// deterministic.
pub fn determinize(a: &SyncAutomaton) -> SyncAutomaton {
    if a.is_deterministic() {
        return a.clone();
    }
    let mut start: Vec<StateId> = a.initial.clone();
    start.sort_unstable();
    start.dedup();
    let mut ids: HashMap<Vec<StateId>, StateId> = HashMap::new();
    let mut subsets: Vec<Vec<StateId>> = Vec::new();
    ids.insert(start.clone(), 0);
    subsets.push(start);
    let mut delta = Vec::new();
    let mut head = 0;
    while head < subsets.len() {
        let subset = subsets[head].clone();
        head += 1;
        let mut moves: BTreeMap<&TapeVector, Vec<StateId>> = BTreeMap::new();
        for &q in &subset {
            for (l, d) in &a.delta[q] {
                moves.entry(l).or_default().push(*d);
            }
        }
        let mut out = Vec::with_capacity(moves.len());
        for (l, mut targets) in moves {
            targets.sort_unstable();
            targets.dedup();
            let id = match ids.get(&targets) {
                Some(&id) => id,
                None => {
                    let id = subsets.len();
                    ids.insert(targets.clone(), id);
                    subsets.push(targets);
                    id
                }
            };
            out.push((l.clone(), id));
        }
        delta.push(out);
    }
    let accepting = subsets
        .iter()
        .map(|s| s.iter().any(|&q| a.accepting[q]))
        .collect();
    SyncAutomaton::from_raw(a.tapes, a.alphabet.clone(), vec![0], accepting, delta, a.relaxed)
}

/// Outgoing letters with the classes of their targets.
type Signature<'a> = Vec<(&'a TapeVector, usize)>;

/// Minimal deterministic automaton (partial transition function, no dead
/// state) for the language of `a`.
pub fn minimize(a: &SyncAutomaton) -> SyncAutomaton {
    let d = determinize(a);
    let n = d.num_states();
    if n == 0 {
        return d;
    }
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(d.accepting[q])).collect();
    let mut count = if class.iter().all(|&c| c == class[0]) {
        1
    } else {
        2
    };
    loop {
        let mut sigs: HashMap<(usize, Signature), usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let sig: Signature =
                d.delta[q].iter().map(|(l, t)| (l, class[*t])).collect();
            let len = sigs.len();
            next[q] = *sigs.entry((class[q], sig)).or_insert(len);
        }
        let new_count = sigs.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut rep = vec![usize::MAX; count];
    for q in 0..n {
        if rep[class[q]] == usize::MAX {
            rep[class[q]] = q;
        }
    }
    let delta = rep
        .iter()
        .map(|&q| d.delta[q].iter().map(|(l, t)| (l.clone(), class[*t])).collect())
        .collect();
    let accepting = rep.iter().map(|&q| d.accepting[q]).collect();
    SyncAutomaton::from_raw(
        d.tapes,
        d.alphabet.clone(),
        d.initial.iter().map(|&q| class[q]).collect(),
        accepting,
        delta,
        d.relaxed,
    )
}

/// Product automaton accepting the intersection of both languages.
pub fn intersect(a: &SyncAutomaton, b: &SyncAutomaton) -> Result<SyncAutomaton> {
    check_compatible(a, b)?;
    let mut ids: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut states: Vec<(StateId, StateId)> = Vec::new();
    let mut initial = Vec::new();
    for &p in &a.initial {
        for &q in &b.initial {
            let id = *ids.entry((p, q)).or_insert_with(|| {
                states.push((p, q));
                states.len() - 1
            });
            initial.push(id);
        }
    }
    let mut delta = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let (p, q) = states[head];
        head += 1;
        let mut out = Vec::new();
        for (l, dp) in &a.delta[p] {
            for (_, dq) in b.lookup(q, l) {
                let key = (*dp, *dq);
                let id = *ids.entry(key).or_insert_with(|| {
                    states.push(key);
                    states.len() - 1
                });
                out.push((l.clone(), id));
            }
        }
        delta.push(out);
    }
    let accepting = states
        .iter()
        .map(|&(p, q)| a.accepting[p] && b.accepting[q])
        .collect();
    Ok(SyncAutomaton::from_raw(
        a.tapes,
        a.alphabet.clone(),
        initial,
        accepting,
        delta,
        a.relaxed || b.relaxed,
    ))
}

/// Disjoint union.
pub fn union(a: &SyncAutomaton, b: &SyncAutomaton) -> Result<SyncAutomaton> {
    check_compatible(a, b)?;
    let off = a.num_states();
    let mut delta = a.delta.clone();
    delta.extend(
        b.delta
            .iter()
            .map(|ts| ts.iter().map(|(l, d)| (l.clone(), d + off)).collect()),
    );
    let mut initial = a.initial.clone();
    initial.extend(b.initial.iter().map(|q| q + off));
    let mut accepting = a.accepting.clone();
    accepting.extend_from_slice(&b.accepting);
    Ok(SyncAutomaton::from_raw(
        a.tapes,
        a.alphabet.clone(),
        initial,
        accepting,
        delta,
        a.relaxed || b.relaxed,
    ))
}

/// Complement of `a` relative to `universe`.
pub fn complement(a: &SyncAutomaton, universe: &SyncAutomaton) -> Result<SyncAutomaton> {
    check_compatible(a, universe)?;
    let u = determinize(universe);
    let d = determinize(a);
    let Some(&u0) = u.initial.first() else {
        return Ok(u);
    };
    let start = (u0, d.initial.first().copied());
    let mut ids: HashMap<(StateId, Option<StateId>), StateId> = HashMap::from([(start, 0)]);
    let mut states = vec![start];
    let mut delta = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let (qu, qa) = states[head];
        head += 1;
        let mut out = Vec::new();
        for (l, du) in &u.delta[qu] {
            let da = qa.and_then(|q| d.lookup(q, l).next().map(|(_, t)| *t));
            let key = (*du, da);
            let id = *ids.entry(key).or_insert_with(|| {
                states.push(key);
                states.len() - 1
            });
            out.push((l.clone(), id));
        }
        delta.push(out);
    }
    let accepting = states
        .iter()
        .map(|&(qu, qa)| u.accepting[qu] && !qa.is_some_and(|q| d.accepting[q]))
        .collect();
    Ok(SyncAutomaton::from_raw(
        a.tapes,
        a.alphabet.clone(),
        vec![0],
        accepting,
        delta,
        universe.relaxed,
    ))
}

/// Accepts exactly the reversals of the strings accepted by `a`. The result
/// carries the relaxed-padding flag (pads move to the front).
pub fn reverse(a: &SyncAutomaton) -> SyncAutomaton {
    let n = a.num_states();
    let mut delta = vec![Vec::new(); n];
    for (q, ts) in a.delta.iter().enumerate() {
        for (l, d) in ts {
            delta[*d].push((l.clone(), q));
        }
    }
    let initial = a.accepting_states().collect();
    let mut accepting = vec![false; n];
    for &q in &a.initial {
        accepting[q] = true;
    }
    SyncAutomaton::from_raw(a.tapes, a.alphabet.clone(), initial, accepting, delta, !a.relaxed)
}

/// Existential projection onto the tapes in `keep` (strictly increasing).
/// Steps where every kept tape reads padding are removed, so the result
/// again accepts well-formed convolutions.
pub fn project(a: &SyncAutomaton, keep: &[usize]) -> Result<SyncAutomaton> {
    if keep.is_empty() || keep.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "kept tapes must be a non-empty strictly increasing list".into(),
        ));
    }
    if let Some(&bad) = keep.iter().find(|&&t| t >= a.tapes) {
        return Err(Error::InvalidTape {
            index: bad,
            tapes: a.tapes,
        });
    }
    let n = a.num_states();
    let proj = |l: &TapeVector| TapeVector::new(keep.iter().map(|&t| l.get(t)).collect::<Vec<_>>());
    let mut eps: Vec<Vec<StateId>> = vec![Vec::new(); n];
    let mut solid: Vec<Vec<(TapeVector, StateId)>> = vec![Vec::new(); n];
    for (q, ts) in a.delta.iter().enumerate() {
        for (l, d) in ts {
            let pl = proj(l);
            if pl.is_all_pad() {
                eps[q].push(*d);
            } else {
                solid[q].push((pl, *d));
            }
        }
    }
    let mut delta = vec![Vec::new(); n];
    let mut accepting = vec![false; n];
    for q in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![q];
        seen[q] = true;
        while let Some(p) = stack.pop() {
            accepting[q] |= a.accepting[p];
            delta[q].extend(solid[p].iter().cloned());
            for &r in &eps[p] {
                if !seen[r] {
                    seen[r] = true;
                    stack.push(r);
                }
            }
        }
    }
    Ok(SyncAutomaton::from_raw(
        keep.len(),
        a.alphabet.clone(),
        a.initial.clone(),
        accepting,
        delta,
        a.relaxed,
    ))
}

/// Inserts an unconstrained tape at index `position`.
pub fn cylindrify(a: &SyncAutomaton, position: usize) -> Result<SyncAutomaton> {
    if position > a.tapes {
        return Err(Error::InvalidTape {
            index: position,
            tapes: a.tapes + 1,
        });
    }
    if a.relaxed {
        return Err(Error::InvalidArgument(
            "cylindrify needs a well-formed (non-reversed) automaton".into(),
        ));
    }
    let syms: Vec<u8> = a.alphabet.padded_symbols().collect();
    let insert = |l: &[u8], s: u8| {
        let mut v = Vec::with_capacity(l.len() + 1);
        v.extend_from_slice(&l[..position]);
        v.push(s);
        v.extend_from_slice(&l[position..]);
        TapeVector::new(v)
    };
    let n = a.num_states();
    let tail = n;
    let mut delta: Vec<Vec<(TapeVector, StateId)>> = a
        .delta
        .iter()
        .map(|ts| {
            ts.iter()
                .flat_map(|(l, d)| syms.iter().map(move |&s| (insert(l.entries(), s), *d)))
                .collect()
        })
        .collect();
    let pads = vec![PAD; a.tapes];
    let tail_letters: Vec<TapeVector> = (0..a.alphabet.len() as u8).map(|s| insert(&pads, s)).collect();
    for q in a.accepting_states() {
        delta[q].extend(tail_letters.iter().map(|l| (l.clone(), tail)));
    }
    delta.push(tail_letters.iter().map(|l| (l.clone(), tail)).collect());
    let mut accepting = a.accepting.clone();
    accepting.push(true);
    Ok(SyncAutomaton {
        tapes: a.tapes + 1,
        alphabet: a.alphabet.clone(),
        initial: a.initial.clone(),
        accepting,
        delta,
        relaxed: false,
    }
    .enforce_padding())
}

/// Reorders tapes: tape `i` of the result is tape `perm[i]` of `a`.
pub fn permute_tapes(a: &SyncAutomaton, perm: &[usize]) -> Result<SyncAutomaton> {
    let mut sorted = perm.to_vec();
    sorted.sort_unstable();
    if sorted != (0..a.tapes).collect::<Vec<_>>() {
        return Err(Error::InvalidArgument(format!(
            "{perm:?} is not a permutation of {} tapes",
            a.tapes
        )));
    }
    let delta = a
        .delta
        .iter()
        .map(|ts| {
            ts.iter()
                .map(|(l, d)| (TapeVector::new(perm.iter().map(|&i| l.get(i)).collect::<Vec<_>>()), *d))
                .collect()
        })
        .collect();
    Ok(SyncAutomaton::from_raw(
        a.tapes,
        a.alphabet.clone(),
        a.initial.clone(),
        a.accepting.clone(),
        delta,
        a.relaxed,
    ))
}

/// Inverse relation of a two-tape automaton.
pub fn transpose(a: &SyncAutomaton) -> Result<SyncAutomaton> {
    if a.tapes != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            actual: a.tapes,
        });
    }
    permute_tapes(a, &[1, 0])
}

/// Relational composition `{(x, z) | ∃y (x, y) ∈ r1 ∧ (y, z) ∈ r2}`, by
/// cylindrification, intersection and projection. The result is minimized.
pub fn compose(r1: &SyncAutomaton, r2: &SyncAutomaton) -> Result<SyncAutomaton> {
    for r in [r1, r2] {
        if r.tapes != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                actual: r.tapes,
            });
        }
    }
    check_compatible(r1, r2)?;
    let xyz1 = cylindrify(r1, 2)?;
    let xyz2 = cylindrify(r2, 0)?;
    let joined = intersect(&xyz1, &xyz2)?;
    Ok(minimize(&project(&joined, &[0, 2])?))
}

/// Shortest accepted string, least in letter order among the shortest.
pub fn shortest_accepted(a: &SyncAutomaton) -> Option<Vec<TapeVector>> {
    let n = a.num_states();
    let mut parent: Vec<Option<(StateId, TapeVector)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &q in &a.initial {
        if !seen[q] {
            seen[q] = true;
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        if a.accepting[q] {
            let mut path = Vec::new();
            let mut cur = q;
            while let Some((p, l)) = parent[cur].clone() {
                path.push(l);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for (l, d) in &a.delta[q] {
            if !seen[*d] {
                seen[*d] = true;
                parent[*d] = Some((q, l.clone()));
                queue.push_back(*d);
            }
        }
    }
    None
}

/// Language equivalence via emptiness of the symmetric difference. Returns
/// `Ok(None)` when equivalent, otherwise a distinguishing string.
pub fn equivalent(a: &SyncAutomaton, b: &SyncAutomaton) -> Result<Option<Vec<TapeVector>>> {
    check_compatible(a, b)?;
    let da = determinize(a);
    let db = determinize(b);
    type Pair = (Option<StateId>, Option<StateId>);
    let start: Pair = (da.initial.first().copied(), db.initial.first().copied());
    let acc = |(p, q): Pair| {
        p.is_some_and(|p| da.accepting[p]) != q.is_some_and(|q| db.accepting[q])
    };
    let mut parent: HashMap<Pair, Option<(Pair, TapeVector)>> = HashMap::from([(start, None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(pair) = queue.pop_front() {
        if acc(pair) {
            let mut path = Vec::new();
            let mut cur = pair;
            while let Some(Some((prev, l))) = parent.get(&cur).cloned() {
                path.push(l);
                cur = prev;
            }
            path.reverse();
            return Ok(Some(path));
        }
        let (p, q) = pair;
        let mut letters: Vec<&TapeVector> = Vec::new();
        if let Some(p) = p {
            letters.extend(da.delta[p].iter().map(|(l, _)| l));
        }
        if let Some(q) = q {
            letters.extend(db.delta[q].iter().map(|(l, _)| l));
        }
        letters.sort();
        letters.dedup();
        for l in letters {
            let np = p.and_then(|p| da.lookup(p, l).next().map(|(_, t)| *t));
            let nq = q.and_then(|q| db.lookup(q, l).next().map(|(_, t)| *t));
            let next = (np, nq);
            if next == (None, None) || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, Some((pair, l.clone())));
            queue.push_back(next);
        }
    }
    Ok(None)
}

pub(crate) fn same_alphabet(a: &Alphabet, b: &Alphabet) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(format!(
            "{:?} vs {:?}",
            a.symbols(),
            b.symbols()
        )))
    }
}
