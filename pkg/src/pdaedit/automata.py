"""Finite and pushdown automaton data model, runs, and basic constructions.

The pushdown model is real-time: every transition consumes exactly one input
letter, there are no silent moves.  A transition ``(q, a, top, q2, push)``
pops ``top`` (or fires on the empty stack when ``top`` is ``None``) and
appends ``push`` to the stack; the top of the stack is the last element.
Acceptance requires both a final state and an empty stack.  An NFA is the
stackless special case.

All values are immutable after construction; every operation here is a pure
function, so concurrent use on shared automata is safe.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable

from .errors import InputError

State = Hashable
NfaTransition = tuple  # (state, letter, state)
PdaTransition = tuple  # (state, letter, stack top or None, state, push tuple)


def _check_letter(a, alphabet) -> None:
    if not isinstance(a, str) or len(a) != 1:
        raise InputError(f"letters must be single characters, got {a!r}")
    if a not in alphabet:
        raise InputError(f"letter {a!r} is not in the alphabet")


@dataclass(frozen=True)
class Nfa:
    """Nondeterministic finite automaton over single-character letters."""

    alphabet: frozenset[str]
    states: frozenset
    initials: frozenset
    finals: frozenset
    transitions: frozenset[NfaTransition]

    def __post_init__(self):
        for a in self.alphabet:
            if not isinstance(a, str) or len(a) != 1:
                raise InputError(f"letters must be single characters, got {a!r}")
        if not self.initials <= self.states or not self.finals <= self.states:
            raise InputError("initial and final states must be states")
        for t in self.transitions:
            if len(t) != 3:
                raise InputError(f"malformed transition {t!r}")
            src, a, dst = t
            if src not in self.states or dst not in self.states:
                raise InputError(f"transition {t!r} uses unknown states")
            _check_letter(a, self.alphabet)

    @classmethod
    def make(cls, alphabet, states, initials, finals, transitions) -> "Nfa":
        return cls(
            frozenset(alphabet),
            frozenset(states),
            frozenset(initials),
            frozenset(finals),
            frozenset(tuple(t) for t in transitions),
        )

    def step_map(self) -> dict:
        """(state, letter) -> set of successor states."""
        out: dict = {}
        for src, a, dst in self.transitions:
            out.setdefault((src, a), set()).add(dst)
        return out

    def adjacency(self) -> dict:
        """state -> sorted list of (letter, successor)."""
        out: dict = {q: [] for q in self.states}
        for src, a, dst in self.transitions:
            out[src].append((a, dst))
        for q in out:
            out[q].sort(key=lambda e: (e[0], str(e[1])))
        return out


@dataclass(frozen=True)
class Dfa(Nfa):
    """NFA with one initial state and at most one transition per (state, letter)."""

    def __post_init__(self):
        super().__post_init__()
        if len(self.initials) != 1:
            raise InputError("a DFA has exactly one initial state")
        seen = set()
        for src, a, _dst in self.transitions:
            if (src, a) in seen:
                raise InputError(f"duplicate transition source ({src!r}, {a!r})")
            seen.add((src, a))


@dataclass(frozen=True)
class Pda:
    """Real-time pushdown automaton accepting by final state with empty stack."""

    alphabet: frozenset[str]
    stack_alphabet: frozenset
    states: frozenset
    initials: frozenset
    finals: frozenset
    transitions: frozenset[PdaTransition]

    def __post_init__(self):
        for a in self.alphabet:
            if not isinstance(a, str) or len(a) != 1:
                raise InputError(f"letters must be single characters, got {a!r}")
        if None in self.stack_alphabet:
            raise InputError("None marks the empty stack and cannot be a stack symbol")
        if not self.initials <= self.states or not self.finals <= self.states:
            raise InputError("initial and final states must be states")
        for t in self.transitions:
            if len(t) != 5:
                raise InputError(f"malformed transition {t!r}")
            src, a, top, dst, push = t
            if src not in self.states or dst not in self.states:
                raise InputError(f"transition {t!r} uses unknown states")
            _check_letter(a, self.alphabet)
            if top is not None and top not in self.stack_alphabet:
                raise InputError(f"transition {t!r} pops unknown stack symbol")
            if not isinstance(push, tuple):
                raise InputError(f"push string of {t!r} must be a tuple")
            for g in push:
                if g not in self.stack_alphabet:
                    raise InputError(f"transition {t!r} pushes unknown symbol {g!r}")

    @classmethod
    def make(cls, alphabet, stack_alphabet, states, initials, finals, transitions) -> "Pda":
        return cls(
            frozenset(alphabet),
            frozenset(stack_alphabet),
            frozenset(states),
            frozenset(initials),
            frozenset(finals),
            frozenset((s, a, g, d, tuple(p)) for (s, a, g, d, p) in transitions),
        )

    def rule_map(self) -> dict:
        """(state, stack top or None) -> sorted list of (letter, successor, push)."""
        out: dict = {}
        for src, a, top, dst, push in self.transitions:
            out.setdefault((src, top), []).append((a, dst, push))
        for key in out:
            out[key].sort(key=lambda r: (r[0], str(r[1]), str(r[2])))
        return out


@dataclass(frozen=True)
class PdaConfiguration:
    """A control state paired with a stack; the stack top is the last element."""

    state: State
    stack: tuple

    def __post_init__(self):
        if not isinstance(self.stack, tuple):
            raise InputError("stack must be a tuple of stack symbols")


def nfa_reachable_states(nfa: Nfa, word: str) -> frozenset:
    """States reachable from some initial state on exactly ``word``.

    The word is accepted iff the result intersects the final states.
    """
    for a in word:
        _check_letter(a, nfa.alphabet)
    step = nfa.step_map()
    current = set(nfa.initials)
    for a in word:
        current = set().union(*(step.get((q, a), set()) for q in current)) if current else set()
    return frozenset(current)


def pda_accepts(pda: Pda, word: str) -> bool:
    """True iff some run on ``word`` ends in a final state with an empty stack.

    Every step consumes one letter, so the configuration search per word is
    bounded; the empty word is accepted iff some initial state is final.
    """
    for a in word:
        _check_letter(a, pda.alphabet)
    rules = pda.rule_map()
    configs = {(q, ()) for q in pda.initials}
    for a in word:
        nxt = set()
        for q, stack in configs:
            top = stack[-1] if stack else None
            below = stack[:-1]
            for letter, dst, push in rules.get((q, top), ()):
                if letter == a:
                    nxt.add((dst, below + push))
        configs = nxt
        if not configs:
            return False
    return any(q in pda.finals and stack == () for q, stack in configs)


def is_deterministic(aut: Nfa | Pda) -> bool:
    """Single initial state and at most one transition per source key.

    The key is (state, letter) for an NFA and (state, letter, stack top)
    for a PDA.
    """
    if len(aut.initials) != 1:
        return False
    seen = set()
    for t in aut.transitions:
        key = (t[0], t[1]) if isinstance(aut, Nfa) else (t[0], t[1], t[2])
        if key in seen:
            return False
        seen.add(key)
    return True


def _reach_forward(states, edges, seeds) -> set:
    """Generic BFS closure over ``edges``: state -> iterable of successors."""
    seen = set(seeds)
    queue = deque(seen)
    while queue:
        q = queue.popleft()
        for r in edges.get(q, ()):
            if r not in seen:
                seen.add(r)
                queue.append(r)
    return seen


def prefix_closure(nfa: Nfa) -> Nfa:
    """Safety NFA (every state final) recognizing the prefixes of L(nfa).

    States that cannot reach a final state are removed, states unreachable
    from the initial states are removed, and every surviving state is made
    final.  When L(nfa) is empty the result has no states at all; callers
    must handle the empty safety automaton.
    """
    fwd: dict = {}
    bwd: dict = {}
    for src, _a, dst in nfa.transitions:
        fwd.setdefault(src, set()).add(dst)
        bwd.setdefault(dst, set()).add(src)
    productive = _reach_forward(nfa.states, bwd, nfa.finals)
    reachable = _reach_forward(nfa.states, fwd, nfa.initials)
    keep = productive & reachable
    return Nfa(
        alphabet=nfa.alphabet,
        states=frozenset(keep),
        initials=nfa.initials & keep,
        finals=frozenset(keep),
        transitions=frozenset(
            (s, a, d) for (s, a, d) in nfa.transitions if s in keep and d in keep
        ),
    )


def nfa_to_pda(nfa: Nfa) -> Pda:
    """View an NFA as a stackless PDA (empty stack alphabet)."""
    return Pda(
        alphabet=nfa.alphabet,
        stack_alphabet=frozenset(),
        states=nfa.states,
        initials=nfa.initials,
        finals=nfa.finals,
        transitions=frozenset((s, a, None, d, ()) for (s, a, d) in nfa.transitions),
    )


def pda_emptiness(pda: Pda) -> tuple[bool, str | None]:
    """Decide whether L(pda) is empty; return a shortest witness when not.

    Input letters are erased to obtain a pushdown system, push strings are
    normalized to length at most two with fresh intermediate control
    locations, and reachability of (final, empty stack) from (initial,
    empty stack) is decided by saturation.  The witness word is rebuilt
    from the input letters along the discovered rule sequence and is
    shortest by construction of the saturation order.
    """
    from .emptiness import PdaRules, shortest_accepted_word

    word, _stats = shortest_accepted_word(PdaRules(pda))
    return word is None, word


def make_word_nfa(words: Iterable[str], alphabet) -> Nfa:
    """Trie NFA for a finite set of words; handy for fixtures and tests."""
    words = sorted(set(words))
    alphabet = frozenset(alphabet)
    states = {()}
    finals = set()
    transitions = set()
    for w in words:
        prefix = ()
        for a in w:
            _check_letter(a, alphabet)
            nxt = prefix + (a,)
            states.add(nxt)
            transitions.add((prefix, a, nxt))
            prefix = nxt
        finals.add(prefix)
    return Nfa(
        alphabet=alphabet,
        states=frozenset(states),
        initials=frozenset({()}),
        finals=frozenset(finals),
        transitions=frozenset(transitions),
    )
