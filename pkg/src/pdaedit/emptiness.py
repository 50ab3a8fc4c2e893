"""Shortest-word reachability saturation for real-time pushdown systems.

The engine answers one question: does some word take an initial control
state with an empty stack to a final control state with an empty stack,
and if so, which shortest word?  It works over an abstract rule supplier,
so the same saturation serves plain PDAs and the lazily-built threshold
product, whose state space is far too large to materialize eagerly.

Facts and derivations
---------------------
Two kinds of facts are saturated, both weighted by input-word length:

* ``(p,)``        — "empty-stack reach": some word takes an initial state
                    with empty stack to state ``p`` with empty stack.
* ``(p, g, q)``   — "pop": some word takes state ``p`` with ``g`` on top of
                    the stack to ``q`` with ``g`` removed, never touching
                    the stack below.

A rule ``(p, top, a, q, push)`` pops ``top`` (``None`` = fires on the empty
stack only) and pushes ``push``; after normalization ``len(push) <= 2`` and
the pushed symbols are removed top-first by chained pop facts.  Every
empty-to-empty run decomposes uniquely at its empty-stack moments, which is
what makes the two fact kinds complete.

Facts are settled in cost order from a priority queue (Knuth's refinement
of Dijkstra to superior derivation costs), so the first final empty-stack
fact settled yields a shortest accepted word; for unit letter costs this
coincides with breadth-first saturation order.  Rules are instantiated on
demand: a state's bottom rules when it settles with empty stack, a state's
``g``-rules the first time it can appear with ``g`` on top.  Only control
states occurring in reachable configurations are ever registered, which is
what keeps lazily-defined products tractable.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from itertools import count
from typing import Iterable, Protocol


class RuleSupplier(Protocol):
    """Implicit pushdown system interface consumed by the saturation."""

    def initial_states(self) -> Iterable: ...

    def is_final(self, state) -> bool: ...

    def rules(self, state, top) -> Iterable[tuple]:
        """Yield (letter or None, successor, push tuple) for ``top``.

        ``top is None`` requests the empty-stack rules.  The iteration
        order must be deterministic.
        """
        ...


@dataclass(frozen=True)
class SaturationStats:
    control_states: int
    facts_settled: int


class PdaRules:
    """RuleSupplier view of a concrete PDA."""

    def __init__(self, pda):
        self._pda = pda
        self._rules = pda.rule_map()

    def initial_states(self):
        return sorted(self._pda.initials, key=str)

    def is_final(self, state):
        return state in self._pda.finals

    def rules(self, state, top):
        return self._rules.get((state, top), ())


def normalized_pda_rules(pda) -> list[tuple]:
    """All PDA transitions with push strings normalized to length <= 2.

    Returns rules (src, top_or_None, letter_or_None, dst, push); long pushes
    are split through fresh intermediate control states (`_Mid`) and fresh
    stack symbols (`_MidSym`), whose chain rules consume no letter.  The
    same normalization underlies both emptiness and the grammar extraction
    from a PDA.
    """
    out = []
    fresh = count()
    for src, a, top, dst, push in sorted(pda.transitions, key=str):
        out.extend(_normalize_rule(src, top, a, dst, push, fresh))
    return out


@dataclass(frozen=True)
class _Mid:
    """Fresh control state introduced while splitting a long push."""

    index: int


@dataclass(frozen=True)
class _MidSym:
    """Fresh stack symbol introduced while splitting a long push."""

    index: int


def _normalize_rule(src, top, letter, dst, push, fresh) -> list[tuple]:
    if len(push) <= 2:
        return [(src, top, letter, dst, tuple(push))]
    # push (g0, .., gm-1) with gm-1 on top: build the stack bottom-up through
    # fresh states, each chain rule pushing one real symbol plus a marker.
    rules = []
    mids = [_Mid(next(fresh)) for _ in range(len(push) - 2)]
    syms = [_MidSym(next(fresh)) for _ in range(len(push) - 2)]
    rules.append((src, top, letter, mids[0], (push[0], syms[0])))
    for i in range(1, len(push) - 2):
        rules.append((mids[i - 1], syms[i - 1], None, mids[i], (push[i], syms[i])))
    rules.append((mids[-1], syms[-1], None, dst, (push[-2], push[-1])))
    return rules


class _Saturation:
    """One saturation run; see the module docstring for the fact system."""

    def __init__(self, system: RuleSupplier):
        self.system = system
        self.state_id: dict = {}
        self.state_obj: list = []
        self.sym_id: dict = {}
        self.sym_obj: list = []
        self.mid_rules: dict = {}  # (mid state id, sym id) -> [(letter, dst id, push ids)]
        self.heap: list = []
        self.order = count()
        self.best: dict = {}
        self.deriv: dict = {}  # fact -> tuple of items (letters and premise facts)
        self.settled: set = set()
        self.pops_at: dict = {}  # (p, g) -> [(fact, cost)]
        self.listeners: dict = {}  # (p, g) -> [continuation]
        self.tops_seen: set = set()
        self._fresh = count()
        self._next_mid_id = count(start=-1, step=-1)  # negative ids never collide

    # -- id management -------------------------------------------------

    def _sid(self, state) -> int:
        i = self.state_id.get(state)
        if i is None:
            i = len(self.state_obj)
            self.state_id[state] = i
            self.state_obj.append(state)
        return i

    def _gid(self, sym) -> int:
        i = self.sym_id.get(sym)
        if i is None:
            i = len(self.sym_obj)
            self.sym_id[sym] = i
            self.sym_obj.append(sym)
        return i

    # -- fact proposal and settling -------------------------------------

    def _propose(self, fact, cost, items):
        if fact in self.settled:
            return
        old = self.best.get(fact)
        if old is None or cost < old:
            self.best[fact] = cost
            self.deriv[fact] = items
            heapq.heappush(self.heap, (cost, next(self.order), fact))

    def _discover_top(self, p: int, g: int):
        key = (p, g)
        if key in self.tops_seen:
            return
        self.tops_seen.add(key)
        rules = self.mid_rules.get(key)
        if rules is None:
            rules = self._supplier_rules(p, g)
        for letter, dst, push in rules:
            self._instantiate(p, g, letter, dst, push)

    def _supplier_rules(self, p: int, g) -> list:
        state = self.state_obj[p]
        top = None if g is None else self.sym_obj[g]
        out = []
        for letter, dst, push in self.system.rules(state, top):
            dst_id = self._sid(dst)
            push_ids = tuple(self._gid(s) for s in push)
            out.extend(self._normalize(p, g, letter, dst_id, push_ids))
        return out

    def _normalize(self, p, g, letter, dst, push):
        if len(push) <= 2:
            return [(letter, dst, push)]
        rules = []
        mids = [next(self._next_mid_id) for _ in range(len(push) - 2)]
        syms = [self._gid(_MidSym(next(self._fresh))) for _ in range(len(push) - 2)]
        for i in range(1, len(push) - 2):
            self.mid_rules[(mids[i - 1], syms[i - 1])] = [
                (None, mids[i], (push[i], syms[i]))
            ]
        self.mid_rules[(mids[-1], syms[-1])] = [(None, dst, (push[-2], push[-1]))]
        rules.append((letter, first_tail, (push[0], syms[0])))
        return rules

    def _instantiate(self, p: int, g, letter, dst: int, push: tuple):
        """Install a normalized rule whose source (p, g) has been discovered.

        ``g is None`` marks a bottom rule; its proposals embed the settled
        empty-stack fact of ``p`` so derivations share structure.
        """
        if g is None:
            src_fact = (p,)
            base_cost = self.best[src_fact]
            base_items = (src_fact,)
            head = None  # propose empty-stack facts
        else:
            base_cost = 0
            base_items = ()
            head = (p, g)
        if letter is not None:
            base_cost += 1
            base_items += (letter,)
        if not push:
            self._finish(head, dst, base_cost, base_items)
            return
        first, rest = push[-1], tuple(reversed(push[:-1]))
        self._listen(dst, first, base_cost, base_items, rest, head)

    def _finish(self, head, endpoint: int, cost, items):
        fact = (endpoint,) if head is None else (head[0], head[1], endpoint)
        self._propose(fact, cost, items)

    def _listen(self, p: int, g: int, base_cost, base_items, rest, head):
        """Wait for pops of (p, g); extend with ``rest`` then finish ``head``."""
        self._discover_top(p, g)
        cont = (base_cost, base_items, rest, head)
        self.listeners.setdefault((p, g), []).append(cont)
        for fact, cost in tuple(self.pops_at.get((p, g), ())):
            self._fire(cont, fact, cost)

    def _fire(self, cont, pop_fact, pop_cost):
        base_cost, base_items, rest, head = cont
        landed = pop_fact[2]
        cost = base_cost + pop_cost
        items = base_items + (pop_fact,)
        if not rest:
            self._finish(head, landed, cost, items)
        else:
            self._listen(landed, rest[0], cost, items, rest[1:], head)

    # -- main loop -------------------------------------------------------

    def run(self):
        for state in self.system.initial_states():
            self._propose((self._sid(state),), 0, ())
        bottoms_done: set = set()
        while self.heap:
            cost, _, fact = heapq.heappop(self.heap)
            if fact in self.settled:
                continue
            self.settled.add(fact)
            if len(fact) == 1:
                p = fact[0]
                if self.system.is_final(self.state_obj[p]):
                    return self._word(fact)
                if p not in bottoms_done:
                    bottoms_done.add(p)
                    for letter, dst, push in self._supplier_rules(p, None):
                        self._instantiate(p, None, letter, dst, push)
            else:
                key = (fact[0], fact[1])
                self.pops_at.setdefault(key, []).append((fact, cost))
                for cont in tuple(self.listeners.get(key, ())):
                    self._fire(cont, fact, cost)
        return None

    def _word(self, fact) -> str:
        out = []
        stack = [fact]
        while stack:
            item = stack.pop()
            if isinstance(item, str):
                out.append(item)
            else:
                stack.extend(reversed(self.deriv[item]))
        return "".join(out)

    def stats(self) -> SaturationStats:
        return SaturationStats(
            control_states=len(self.state_id),
            facts_settled=len(self.settled),
        )


def shortest_accepted_word(system: RuleSupplier) -> tuple[str | None, SaturationStats]:
    """Shortest word accepted by the pushdown system, or None when empty."""
    sat = _Saturation(system)
    word = sat.run()
    return word, sat.stats()
