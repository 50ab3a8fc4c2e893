"""Context-free grammars: normal form, parsing, PDA conversions, pumping.

``Cfg`` is the binary normal form used throughout: productions are either
``v -> z u`` (two nonterminals), ``v -> a`` (one terminal), or ``start -> ()``
for the empty word.  When the empty word is in the language the start symbol
must not occur on any right-hand side, so membership and derivation trees can
treat the empty production as root-only.  ``RawCfg`` is the unrestricted
input form accepted by the converter and the file format.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import count

from .automata import Nfa, Pda
from .emptiness import normalized_pda_rules
from .errors import InputError, PreconditionError


@dataclass(frozen=True)
class RawCfg:
    """General grammar: productions map a nonterminal to any symbol string."""

    alphabet: frozenset[str]
    nonterminals: frozenset
    start: object
    productions: frozenset  # of (head, rhs tuple over alphabet | nonterminals)

    def __post_init__(self):
        if self.alphabet & self.nonterminals:
            raise InputError("terminals and nonterminals must be disjoint")
        if self.start not in self.nonterminals:
            raise InputError("start symbol must be a nonterminal")
        for head, rhs in self.productions:
            if head not in self.nonterminals:
                raise InputError(f"unknown production head {head!r}")
            for sym in rhs:
                if sym not in self.alphabet and sym not in self.nonterminals:
                    raise InputError(f"unknown symbol {sym!r} in production")

    @classmethod
    def make(cls, alphabet, start, productions) -> "RawCfg":
        """``productions`` maps head -> iterable of rhs sequences."""
        alphabet = frozenset(alphabet)
        prods = set()
        nonterminals = {start}
        for head, bodies in productions.items():
            nonterminals.add(head)
            for rhs in bodies:
                prods.add((head, tuple(rhs)))
        for _head, rhs in prods:
            nonterminals.update(s for s in rhs if s not in alphabet)
        return cls(alphabet, frozenset(nonterminals), start, frozenset(prods))


@dataclass(frozen=True)
class Cfg:
    """Grammar in binary normal form; ``size`` nonterminals drive the bounds."""

    alphabet: frozenset[str]
    nonterminals: frozenset
    start: object
    productions: frozenset

    def __post_init__(self):
        if self.alphabet & self.nonterminals:
            raise InputError("terminals and nonterminals must be disjoint")
        if self.start not in self.nonterminals:
            raise InputError("start symbol must be a nonterminal")
        has_empty = False
        for head, rhs in self.productions:
            if head not in self.nonterminals:
                raise InputError(f"unknown production head {head!r}")
            if len(rhs) == 2 and all(s in self.nonterminals for s in rhs):
                continue
            if len(rhs) == 1 and rhs[0] in self.alphabet:
                continue
            if rhs == () and head == self.start:
                has_empty = True
                continue
            raise InputError(f"production {head!r} -> {rhs!r} is not in normal form")
        if has_empty:
            for _head, rhs in self.productions:
                if self.start in rhs:
                    raise InputError(
                        "the start symbol may not occur on a right-hand side "
                        "when the empty production is present"
                    )

    @property
    def nonterminal_count(self) -> int:
        return len(self.nonterminals)

    def to_raw(self) -> RawCfg:
        return RawCfg(self.alphabet, self.nonterminals, self.start, self.productions)


@dataclass(frozen=True)
class DerivationTree:
    """Ordered derivation tree node: the applied production fixes the arity.

    Terminal productions have no children (the single leaf letter is the
    production body); the empty production yields a childless root.
    """

    symbol: object
    production: tuple
    children: tuple

    def __post_init__(self):
        if len(self.production) == 2:
            if len(self.children) != 2:
                raise InputError("binary production needs two children")
        elif self.children:
            raise InputError("leaf production takes no children")

    @property
    def word(self) -> str:
        if not self.production:
            return ""
        if len(self.production) == 1:
            return self.production[0]
        return "".join(child.word for child in self.children)


def _fresh_name(base: str, used) -> str:
    if base not in used:
        return base
    for i in count(2):
        name = f"{base}{i}"
        if name not in used:
            return name


def _nullable_set(productions) -> set:
    nullable = set()
    changed = True
    while changed:
        changed = False
        for head, rhs in productions:
            if head not in nullable and all(s in nullable for s in rhs):
                nullable.add(head)
                changed = True
    return nullable


def _productive_set(productions, alphabet) -> set:
    productive = set()
    changed = True
    while changed:
        changed = False
        for head, rhs in productions:
            if head in productive:
                continue
            if all(s in alphabet or s in productive for s in rhs):
                productive.add(head)
                changed = True
    return productive


def _reachable_set(productions, alphabet, start) -> set:
    by_head: dict = {}
    for head, rhs in productions:
        by_head.setdefault(head, []).append(rhs)
    seen = {start}
    queue = deque([start])
    while queue:
        head = queue.popleft()
        for rhs in by_head.get(head, ()):
            for sym in rhs:
                if sym not in alphabet and sym not in seen:
                    seen.add(sym)
                    queue.append(sym)
    return seen


def cfg_to_cnf(raw: RawCfg) -> Cfg:
    """Language-equivalent normal form of an arbitrary grammar.

    Passes: fresh start when the start is recursive, empty-word elimination,
    unit elimination, terminal wrapping, binarization with shared suffix
    helpers, uselessness trimming, and merging of nonterminals with
    identical production sets.  The merge pass exists to keep the
    nonterminal count honest: the finiteness bound is exponential in it.
    """
    alphabet = raw.alphabet
    prods = {(h, tuple(r)) for h, r in raw.productions}
    start = raw.start
    used = set(raw.nonterminals)

    if any(start in rhs for _h, rhs in prods):
        new_start = _fresh_name("S0", used)
        used.add(new_start)
        prods.add((new_start, (start,)))
        start = new_start

    # empty-word elimination
    nullable = _nullable_set(prods)
    empty_in_lang = start in nullable
    expanded = set()
    for head, rhs in prods:
        spots = [i for i, s in enumerate(rhs) if s in nullable]
        for mask in range(1 << len(spots)):
            drop = {spots[i] for i in range(len(spots)) if mask >> i & 1}
            new_rhs = tuple(s for i, s in enumerate(rhs) if i not in drop)
            if new_rhs:
                expanded.add((head, new_rhs))
    prods = expanded

    # unit elimination
    units = {(a, a) for a in used}
    changed = True
    while changed:
        changed = False
        for head, rhs in prods:
            if len(rhs) == 1 and rhs[0] in used:
                for a, b in tuple(units):
                    if b == head and (a, rhs[0]) not in units:
                        units.add((a, rhs[0]))
                        changed = True
    non_unit = {(h, r) for h, r in prods if not (len(r) == 1 and r[0] in used)}
    prods = {(a, rhs) for a, b in units for h, rhs in non_unit if h == b}

    # terminal wrapping in long bodies
    wrappers: dict = {}
    wrapped = set()
    for head, rhs in prods:
        if len(rhs) >= 2:
            body = []
            for sym in rhs:
                if sym in alphabet:
                    if sym not in wrappers:
                        name = _fresh_name(f"T_{sym}", used)
                        used.add(name)
                        wrappers[sym] = name
                    body.append(wrappers[sym])
                else:
                    body.append(sym)
            wrapped.add((head, tuple(body)))
        else:
            wrapped.add((head, rhs))
    prods = wrapped | {(name, (sym,)) for sym, name in wrappers.items()}

    # binarization, sharing helpers between equal suffixes
    helpers: dict = {}
    binary = set()
    for head, rhs in sorted(prods, key=str):
        while len(rhs) > 2:
            suffix = rhs[1:]
            if suffix not in helpers:
                name = _fresh_name(f"B{len(helpers)}", used)
                used.add(name)
                helpers[suffix] = name
            binary.add((head, (rhs[0], helpers[suffix])))
            head, rhs = helpers[suffix], suffix
        binary.add((head, rhs))
    prods = binary

    prods = _trim(prods, alphabet, start)
    prods, start = _merge_duplicates(prods, alphabet, start)
    prods = _trim(prods, alphabet, start)

    nonterminals = {start} | {h for h, _ in prods} | {
        s for _h, rhs in prods for s in rhs if s not in alphabet
    }
    if empty_in_lang:
        prods.add((start, ()))
    return Cfg(alphabet, frozenset(nonterminals), start, frozenset(prods))


def _trim(prods, alphabet, start) -> set:
    productive = _productive_set(prods, alphabet)
    prods = {
        (h, r)
        for h, r in prods
        if h in productive and all(s in alphabet or s in productive for s in r)
    }
    reachable = _reachable_set(prods, alphabet, start)
    return {(h, r) for h, r in prods if h in reachable}


def _merge_duplicates(prods, alphabet, start):
    """Iteratively merge nonterminals whose production sets are identical."""
    while True:
        by_head: dict = {}
        for h, r in prods:
            by_head.setdefault(h, set()).add(r)
        signature: dict = {}
        for h, bodies in by_head.items():
            signature.setdefault(frozenset(bodies), []).append(h)
        rename = {}
        for _sig, heads in signature.items():
            if len(heads) > 1:
                keep = start if start in heads else min(heads, key=str)
                for h in heads:
                    if h != keep:
                        rename[h] = keep
        if not rename:
            return prods, start
        prods = {
            (rename.get(h, h), tuple(rename.get(s, s) if s not in alphabet else s for s in r))
            for h, r in prods
        }


def cyk_membership(g: Cfg, word: str) -> tuple[bool, DerivationTree | None]:
    """Bottom-up membership with a derivation tree witness.

    Tie-breaking is fixed: the leftmost split point wins, then production
    order sorted by text, so trees (and everything derived from them) are
    reproducible.
    """
    if word == "":
        if (g.start, ()) in g.productions:
            return True, DerivationTree(g.start, (), ())
        return False, None
    if any(a not in g.alphabet for a in word):
        return False, None
    n = len(word)
    term_rules = sorted(
        ((h, r) for h, r in g.productions if len(r) == 1), key=str
    )
    bin_rules = sorted(
        ((h, r) for h, r in g.productions if len(r) == 2), key=str
    )
    # table[(i, j)] maps nonterminal -> chosen (production, split) for word[i:j]
    table: dict = {}
    for i, a in enumerate(word):
        cell: dict = {}
        for h, r in term_rules:
            if r[0] == a and h not in cell:
                cell[h] = (r, None)
        table[(i, i + 1)] = cell
    for width in range(2, n + 1):
        for i in range(0, n - width + 1):
            j = i + width
            cell = {}
            for k in range(i + 1, j):
                left, right = table[(i, k)], table[(k, j)]
                for h, r in bin_rules:
                    if h not in cell and r[0] in left and r[1] in right:
                        cell[h] = (r, k)
            table[(i, j)] = cell
    if g.start not in table[(0, n)]:
        return False, None

    def build(symbol, i, j) -> DerivationTree:
        production, split = table[(i, j)][symbol]
        if split is None:
            return DerivationTree(symbol, production, ())
        return DerivationTree(
            symbol,
            production,
            (build(production[0], i, split), build(production[1], split, j)),
        )

    return True, build(g.start, 0, n)


# ---------------------------------------------------------------------------
# grammar -> PDA via terminal-leading productions


def _terminal_leading(g: Cfg) -> dict:
    """Rewrite the normal form so every production is ``A -> a tail``.

    Classic two-pass elimination: forward substitution of lower-ordered
    leading nonterminals with removal of immediate left recursion through
    fresh tail symbols, then backward substitution.  The empty production
    is handled by the caller.
    """
    order = sorted(g.nonterminals, key=str)
    index = {a: i for i, a in enumerate(order)}
    prods: dict = {a: set() for a in order}
    for h, r in g.productions:
        if r:
            prods[h].add(r)
    tails = []
    used = set(order)
    for i, head in enumerate(order):
        changed = True
        while changed:
            changed = False
            for rhs in tuple(prods[head]):
                lead = rhs[0]
                if lead in index and index[lead] < i:
                    prods[head].discard(rhs)
                    for body in prods[lead]:
                        prods[head].add(body + rhs[1:])
                    changed = True
        recursive = {rhs for rhs in prods[head] if rhs[0] == head}
        if recursive:
            tail_sym = _fresh_name(f"R_{head}", used)
            used.add(tail_sym)
            tails.append(tail_sym)
            base = prods[head] - recursive
            prods[head] = set(base) | {rhs + (tail_sym,) for rhs in base}
            prods[tail_sym] = {rhs[1:] for rhs in recursive} | {
                rhs[1:] + (tail_sym,) for rhs in recursive
            }
    for head in reversed(order):
        new = set()
        for rhs in prods[head]:
            if rhs[0] in prods:
                new.update(body + rhs[1:] for body in prods[rhs[0]])
            else:
                new.add(rhs)
        prods[head] = new
    for tail_sym in tails:
        new = set()
        for rhs in prods[tail_sym]:
            if rhs[0] in g.alphabet:
                new.add(rhs)
            else:
                new.update(body + rhs[1:] for body in prods[rhs[0]])
        prods[tail_sym] = new
    return prods


def cfg_to_pda(g: Cfg) -> Pda:
    """Real-time PDA with the same language as the grammar.

    Terminal-leading productions let each move consume one letter while the
    stack simulates the leftmost derivation; acceptance is by empty stack in
    the run state, and the empty word is handled by making the otherwise
    transition-free initial state final.
    """
    empty_in_lang = (g.start, ()) in g.productions
    prods = _terminal_leading(g)

    productive = set()
    changed = True
    while changed:
        changed = False
        for head, bodies in prods.items():
            if head in productive:
                continue
            if any(all(s in g.alphabet or s in productive for s in rhs) for rhs in bodies):
                productive.add(head)
                changed = True
    prods = {
        h: {r for r in bodies if all(s in g.alphabet or s in productive for s in r)}
        for h, bodies in prods.items()
        if h in productive
    }

    q0, run = "q0", "q1"
    transitions = set()
    stack_symbols = set()
    for head, bodies in prods.items():
        for rhs in bodies:
            stack_symbols.update(rhs[1:])
    for head, bodies in prods.items():
        for rhs in bodies:
            a, tail = rhs[0], tuple(reversed(rhs[1:]))
            if head == g.start:
                transitions.add((q0, a, None, run, tail))
            if head in stack_symbols:
                transitions.add((run, a, head, run, tail))
    finals = {run} | ({q0} if empty_in_lang else set())
    return Pda(
        alphabet=g.alphabet,
        stack_alphabet=frozenset(stack_symbols),
        states=frozenset({q0, run}),
        initials=frozenset({q0}),
        finals=frozenset(finals),
        transitions=frozenset(transitions),
    )


def pda_to_cfg(pda: Pda) -> Cfg:
    """Normal-form grammar with the same language as the PDA.

    Uses the pop-triple construction over push strings normalized to length
    at most two: nonterminal ("pop", p, g, q) derives the words that remove
    ``g`` going from p to q, and ("run", p) derives the words taking p with
    empty stack to acceptance.  The result is trimmed and normalized, which
    fixes the nonterminal count used by the finiteness bound.
    """
    rules = normalized_pda_rules(pda)
    states = sorted(
        {r[0] for r in rules} | {r[3] for r in rules} | set(pda.states), key=str
    )
    prods: dict = {}

    def add(head, *rhs):
        prods.setdefault(head, set()).add(tuple(rhs))

    start = "S"
    run = {p: ("run", p) for p in states}
    for p in sorted(pda.initials, key=str):
        add(start, run[p])
    for p in sorted(pda.finals, key=str):
        add(run[p], *())
    for src, top, letter, dst, push in rules:
        body = (letter,) if letter is not None else ()
        if top is None:
            if len(push) == 0:
                add(run[src], *body, run[dst])
            elif len(push) == 1:
                for r in states:
                    add(run[src], *body, ("pop", dst, push[0], r), run[r])
            else:
                for r in states:
                    for r2 in states:
                        add(
                            run[src], *body,
                            ("pop", dst, push[1], r), ("pop", r, push[0], r2), run[r2],
                        )
        else:
            if len(push) == 0:
                add(("pop", src, top, dst), *body)
            elif len(push) == 1:
                for r in states:
                    add(("pop", src, top, r), *body, ("pop", dst, push[0], r))
            else:
                for r in states:
                    for r2 in states:
                        add(
                            ("pop", src, top, r2), *body,
                            ("pop", dst, push[1], r), ("pop", r, push[0], r2),
                        )
    raw = RawCfg.make(pda.alphabet, start, prods)
    return cfg_to_cnf(raw)


# ---------------------------------------------------------------------------
# compact decomposition and pumping


@dataclass(frozen=True)
class CompactDecomposition:
    """Factorization word = s1 u1 s2 u2 .. sk uk s(k+1) with pumpable u parts.

    The static skeleton (all s parts together) has length at most
    2 ** nonterminal_count, and k is at most 2 ** (nonterminal_count + 1) - 2.
    ``pump_pairs`` records, per u-part pair, the preorder indices of the
    ancestor/descendant tree nodes that induced it.
    """

    grammar: Cfg
    word: str
    static_parts: tuple[str, ...]
    pump_parts: tuple[str, ...]
    pump_pairs: tuple = ()

    def __post_init__(self):
        if len(self.static_parts) != len(self.pump_parts) + 1:
            raise InputError("need exactly one more static part than pump parts")
        rebuilt = []
        for i, u in enumerate(self.pump_parts):
            rebuilt.append(self.static_parts[i])
            rebuilt.append(u)
        rebuilt.append(self.static_parts[-1])
        if "".join(rebuilt) != self.word:
            raise InputError("parts do not concatenate to the word")
        t = self.grammar.nonterminal_count
        if sum(len(s) for s in self.static_parts) > 2**t:
            raise InputError("static skeleton exceeds its size bound")
        if len(self.pump_parts) > 2 ** (t + 1) - 2:
            raise InputError("too many pump parts")

    @property
    def skeleton_length(self) -> int:
        return sum(len(s) for s in self.static_parts)


def pump(d: CompactDecomposition, times: int) -> str:
    """The pumped word with every u part repeated ``times``; times=1 is the
    original word and every pumped word stays in the language."""
    out = []
    for i, u in enumerate(d.pump_parts):
        out.append(d.static_parts[i])
        out.append(u * times)
    out.append(d.static_parts[-1])
    return "".join(out)


@dataclass
class _Node:
    symbol: object
    start: int
    end: int
    depth: int
    children: list
    preorder: int


def _annotate(tree: DerivationTree):
    """Flatten a derivation tree into positioned nodes, preorder-indexed."""
    nodes = []
    counter = count()

    def walk(t: DerivationTree, offset: int, depth: int) -> _Node:
        node = _Node(t.symbol, offset, offset, depth, [], next(counter))
        nodes.append(node)
        if len(t.production) == 1 and not t.children:
            node.end = offset + 1
            return node
        pos = offset
        for child in t.children:
            sub = walk(child, pos, depth + 1)
            node.children.append(sub)
            pos = sub.end
        node.end = pos
        return node

    root = walk(tree, 0, 0)
    return root, nodes


def compact_decomposition(g: Cfg, word: str) -> CompactDecomposition:
    """Greedy pump-pair extraction along a preorder traversal.

    At each node whose nonterminal repeats below it, the bottom-most such
    descendant (leftmost among equally deep ones) forms a pump pair; the two
    flanking subwords become pumpable parts and the traversal continues at
    the descendant, so no node joins two pairs and the fully-depumped word
    keeps a repeat-free derivation tree.
    """
    ok, tree = cyk_membership(g, word)
    if not ok:
        raise PreconditionError("the word is not in the grammar's language")
    root, _nodes = _annotate(tree)
    pairs: list[tuple[_Node, _Node]] = []

    def descendants(node):
        for child in node.children:
            yield child
            yield from descendants(child)

    def visit(node):
        repeats = [d for d in descendants(node) if d.symbol == node.symbol]
        if repeats:
            deepest = max(d.depth for d in repeats)
            chosen = min(
                (d for d in repeats if d.depth == deepest), key=lambda d: d.start
            )
            pairs.append((node, chosen))
            visit(chosen)
            return
        for child in node.children:
            visit(child)

    visit(root)

    flanks = []
    pair_ids = []
    for v, u in pairs:
        pair_ids.append((v.preorder, u.preorder))
        for lo, hi in ((v.start, u.start), (u.end, v.end)):
            if hi > lo:
                flanks.append((lo, hi))
    flanks.sort()
    static_parts = []
    pump_parts = []
    pos = 0
    for lo, hi in flanks:
        static_parts.append(word[pos:lo])
        pump_parts.append(word[lo:hi])
        pos = hi
    static_parts.append(word[pos:])
    return CompactDecomposition(
        grammar=g,
        word=word,
        static_parts=tuple(static_parts),
        pump_parts=tuple(pump_parts),
        pump_pairs=tuple(pair_ids),
    )


def doubling_grammar(k: int) -> Cfg:
    """Grammar for the single word a ** (2 ** k): k+1 nonterminals, each
    level doubling the one below.  A small language with a large distance."""
    if k < 0:
        raise InputError("k must be nonnegative")
    names = [f"D{i}" for i in range(k + 1)]
    prods = {(names[0], ("a",))}
    for i in range(1, k + 1):
        prods.add((names[i], (names[i - 1], names[i - 1])))
    return Cfg(
        alphabet=frozenset("a"),
        nonterminals=frozenset(names),
        start=names[k],
        productions=frozenset(prods),
    )
