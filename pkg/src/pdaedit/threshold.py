"""Threshold edit distance from a PDA to an NFA, and language inclusion.

The decision reduces to pushdown emptiness.  A product automaton simulates
the PDA while tracking, per NFA state, the fewest edits that would steer
the prefix read so far onto a run ending in that state.  Entries above the
threshold collapse to an absorbing cap mark, so each tracked vector lives in
{0..t, cap} per state; a product run is accepting when the PDA component
accepts and every final NFA state is capped, i.e. the word read witnesses a
distance above the threshold.  The product is never materialized eagerly:
vectors are interned and product states are created only as the emptiness
saturation reaches them, which keeps the worst-case state bound
|pda states| * (t+2) ** |nfa states| a certificate rather than a cost.

The threshold may be any nonnegative integer; all cap arithmetic saturates,
so thresholds far beyond machine-word range (the finiteness bound needs
them) are fine.
"""

from __future__ import annotations

from dataclasses import dataclass

from .automata import Nfa, Pda
from .emptiness import shortest_accepted_word
from .errors import PreconditionError
from .worddist import INF, EditCostTable, build_edit_cost_table

CAP = "#"
"""Absorbing stand-in for every distance value above the threshold."""


def impact_initial(nfa: Nfa, table: EditCostTable, t: int) -> tuple:
    """Capped per-state edit costs for the empty prefix."""
    init = nfa.initials
    vec = []
    for s in table.states:
        best = min((table.cost(s, s2, None) for s2 in init), default=INF)
        vec.append(best if best <= t else CAP)
    return tuple(vec)


def impact_step(vec: tuple, a: str, table: EditCostTable, t: int) -> tuple:
    """Capped min-plus step of the per-state cost vector on one letter.

    Capped entries act as infinity, and any value climbing past the
    threshold is capped again, so the cap is absorbing.
    """
    states = table.states
    live = [(s2, c) for s2, c in zip(states, vec) if c != CAP]
    out = []
    for s in states:
        best = INF
        for s2, c in live:
            m = table.cost(s, s2, a)
            if c + m < best:
                best = c + m
        out.append(best if best <= t else CAP)
    return tuple(out)


@dataclass(frozen=True)
class TedResult:
    within_threshold: bool
    counterexample: str | None
    explored_states: int
    state_bound: int


class _ImpactProduct:
    """Lazy rule supplier for the PDA x capped-vector product."""

    def __init__(self, pda: Pda, nfa: Nfa, table: EditCostTable, t: int):
        self.pda = pda
        self.rules_by_key = pda.rule_map()
        self.table = table
        self.t = t
        self.final_idx = tuple(
            i for i, s in enumerate(table.states) if s in nfa.finals
        )
        self._vectors: dict[tuple, int] = {}
        self._by_id: list[tuple] = []
        self._steps: dict[tuple[int, str], int] = {}
        self._initial = self._intern(impact_initial(nfa, table, t))

    def _intern(self, vec: tuple) -> int:
        vid = self._vectors.get(vec)
        if vid is None:
            vid = len(self._by_id)
            self._vectors[vec] = vid
            self._by_id.append(vec)
        return vid

    def _step_id(self, vid: int, a: str) -> int:
        key = (vid, a)
        out = self._steps.get(key)
        if out is None:
            out = self._intern(impact_step(self._by_id[vid], a, self.table, self.t))
            self._steps[key] = out
        return out

    def initial_states(self):
        return [(q, self._initial) for q in sorted(self.pda.initials, key=str)]

    def is_final(self, state) -> bool:
        q, vid = state
        if q not in self.pda.finals:
            return False
        vec = self._by_id[vid]
        return all(vec[i] == CAP for i in self.final_idx)

    def rules(self, state, top):
        q, vid = state
        out = []
        for a, dst, push in self.rules_by_key.get((q, top), ()):
            out.append((a, (dst, self._step_id(vid, a)), push))
        return out


def ted_decide(pda: Pda, nfa: Nfa, t: int) -> TedResult:
    """Decide whether every accepted PDA word is within ``t`` edits of the
    NFA's language; when not, return a shortest offending word.

    The counterexample ``w`` always satisfies ``pda_accepts(pda, w)`` and
    has word-to-NFA distance strictly above ``t``; when the NFA's language
    is empty every accepted word qualifies.
    """
    if not isinstance(t, int) or t < 0:
        raise PreconditionError("threshold must be a nonnegative integer")
    table = build_edit_cost_table(nfa)
    product = _ImpactProduct(pda, nfa, table, t)
    word, stats = shortest_accepted_word(product)
    bound = len(pda.states) * (t + 2) ** len(nfa.states)
    assert stats.control_states <= bound, (
        f"explored {stats.control_states} product states, bound {bound}"
    )
    return TedResult(
        within_threshold=word is None,
        counterexample=word,
        explored_states=stats.control_states,
        state_bound=bound,
    )


def inclusion(pda: Pda, nfa: Nfa) -> bool:
    """Language inclusion of the PDA in the NFA: the zero-threshold case."""
    return ted_decide(pda, nfa, 0).within_threshold
