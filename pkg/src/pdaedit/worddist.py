"""Word-to-word and word-to-NFA edit distance, edge costs, reachability sets.

Infinity is the explicit value ``math.inf`` rather than an integer sentinel;
Python's arithmetic already saturates (``inf + n == inf``), which is what
empty languages and unreachable states need.  Distance vectors are plain
dicts treated as immutable: each step produces a fresh vector, and the cost
table never changes after construction, so concurrent use is safe.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from .automata import Nfa
from .errors import PreconditionError

INF = math.inf

Cost = int | float


def edit_distance_words(w1: str, w2: str) -> int:
    """Minimum number of letter insertions, deletions, and substitutions."""
    if len(w1) < len(w2):
        w1, w2 = w2, w1
    prev = list(range(len(w2) + 1))
    for i, a in enumerate(w1, start=1):
        cur = [i]
        for j, b in enumerate(w2, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a != b)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class EditCostTable:
    """Per-NFA table of costs m(s, s2, x): the fewest edits applied to the
    single letter (or empty word) ``x`` so that the automaton has a run from
    ``s2`` to ``s`` on the result.

    ``eps[(s, s2)]`` is the shortest run-word length from s2 to s (pure
    insertions); ``letter[(s, s2, x)]`` follows the two cases of editing one
    letter: a run-word avoiding ``x`` costs its full length (the empty
    run-word is allowed only for s == s2, at deletion cost 1), a run-word
    containing ``x`` costs its length minus one.  Missing keys mean no run
    exists and the cost is infinite.
    """

    nfa: Nfa
    states: tuple
    eps: dict = field(repr=False)
    letter: dict = field(repr=False)
    max_finite: int

    def cost(self, target, source, x: str | None) -> Cost:
        """m(target, source, x); x may be None for the empty word."""
        if x is None:
            return self.eps.get((target, source), INF)
        if x in self.nfa.alphabet:
            return self.letter.get((target, source, x), INF)
        # A letter foreign to the alphabet never matches: delete it in place
        # (source == target) or substitute it into a connecting run-word.
        if target == source:
            return 1
        return self.eps.get((target, source), INF)


def _bfs_lengths(adj, source) -> dict:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        q = queue.popleft()
        for _a, r in adj[q]:
            if r not in dist:
                dist[r] = dist[q] + 1
                queue.append(r)
    return dist


def _two_layer_lengths(adj, source, x) -> dict:
    """Shortest run lengths to (state, seen-x flag); the layer flips on x."""
    dist = {(source, False): 0}
    queue = deque([(source, False)])
    while queue:
        q, seen = queue.popleft()
        for a, r in adj[q]:
            key = (r, seen or a == x)
            if key not in dist:
                dist[key] = dist[(q, seen)] + 1
                queue.append(key)
    return dist


def build_edit_cost_table(nfa: Nfa) -> EditCostTable:
    adj = nfa.adjacency()
    states = tuple(sorted(nfa.states, key=str))
    eps: dict = {}
    letter: dict = {}
    max_finite = 0
    for src in states:
        for tgt, d in _bfs_lengths(adj, src).items():
            eps[(tgt, src)] = d
            max_finite = max(max_finite, d)
    for x in sorted(nfa.alphabet):
        for src in states:
            layered = _two_layer_lengths(adj, src, x)
            for tgt in states:
                avoiding = layered.get((tgt, False), INF)
                avoiding = 1 if avoiding == 0 else avoiding
                containing = layered.get((tgt, True), INF) - 1
                m = min(avoiding, containing)
                if m < INF:
                    letter[(tgt, src, x)] = m
                    max_finite = max(max_finite, m)
    return EditCostTable(nfa=nfa, states=states, eps=eps, letter=letter, max_finite=max_finite)


def initial_distances(table: EditCostTable) -> dict:
    """Edits needed to reach each state on the empty word: the fold seed."""
    init = table.nfa.initials
    return {
        s: min((table.cost(s, s2, None) for s2 in init), default=INF)
        for s in table.states
    }


def distance_step(vec: dict, a: str, table: EditCostTable) -> dict:
    """One letter of the left-to-right recurrence:
    new[s] = min over s2 of vec[s2] + m(s, s2, a).  Infinity propagates."""
    items = [(s2, c) for s2, c in vec.items() if c < INF]
    out = {}
    for s in table.states:
        best = INF
        for s2, c in items:
            m = table.cost(s, s2, a)
            if c + m < best:
                best = c + m
        out[s] = best
    return out


def word_to_nfa_distance(word: str, nfa: Nfa, table: EditCostTable | None = None) -> Cost:
    """min over accepted words w2 of ed(word, w2); infinite iff L(nfa) is empty."""
    if table is None:
        table = build_edit_cost_table(nfa)
    vec = initial_distances(table)
    for a in word:
        vec = distance_step(vec, a, table)
    return min((vec[s] for s in nfa.finals), default=INF)


def reach_set(u: str, from_states, nfa: Nfa) -> frozenset:
    """States reachable by any word from the states reached on exactly ``u``.

    The start set must be a subset of the automaton's states; the result is
    closed under reachability, hence a fixed point of further closure.
    """
    from_states = frozenset(from_states)
    if not from_states <= nfa.states:
        raise PreconditionError("start set must be a subset of the automaton states")
    step = nfa.step_map()
    current = set(from_states)
    for a in u:
        current = set().union(*(step.get((q, a), set()) for q in current)) if current else set()
    fwd: dict = {}
    for src, _a, dst in nfa.transitions:
        fwd.setdefault(src, set()).add(dst)
    seen = set(current)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for r in fwd.get(q, ()):
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return frozenset(seen)


def nested_reach_empty(parts, nfa: Nfa) -> bool:
    """True iff folding reach_set over ``parts`` from all states ends empty.

    With no parts this is simply whether the automaton has no states.
    """
    acc = frozenset(nfa.states)
    for u in parts:
        acc = reach_set(u, acc, nfa)
    return not acc
