"""Minimal finite-automata kernel.

DFAs and output automata (DFAOs) over small symbol alphabets.  Symbols
are single-character strings, or tuples of single-character strings for
multi-track relations read in parallel, msd first, shorter tracks padded
with leading zeros.  Every machine is complete (a dead state is
materialized where needed) and immutable after construction.

Provided operations: construction from forbidden factors and from a
restricted regular-expression syntax, boolean combination by product,
minimization with canonical breadth-first state numbering, equivalence
with shortest counterexamples, a line-oriented text format that
round-trips exactly, and DOT export.
"""
from __future__ import annotations

import itertools
import re
from collections import deque
from typing import Iterable, Sequence, Union

Symbol = Union[str, tuple]
Word = Sequence[Symbol]


class AutomatonError(ValueError):
    pass


def format_symbol(sym: Symbol) -> str:
    return ",".join(sym) if isinstance(sym, tuple) else sym


def parse_symbol(token: str) -> Symbol:
    return tuple(token.split(",")) if "," in token else token


def pad_tracks(*tracks: str, pad: str = "0") -> tuple:
    """Zip digit strings into a tuple-symbol word, left-padding the
    shorter tracks."""
    width = max((len(t) for t in tracks), default=0)
    padded = [t.rjust(width, pad) for t in tracks]
    return tuple(zip(*padded))


class _Machine:
    """Shared structure: complete transition table over a sorted alphabet."""

    def __init__(self, alphabet: Iterable[Symbol], transitions, initial: int):
        self.alphabet: tuple = tuple(sorted(set(alphabet)))
        if not self.alphabet:
            raise AutomatonError("alphabet must be nonempty")
        self._index = {s: k for k, s in enumerate(self.alphabet)}
        rows = []
        for q, row in enumerate(transitions):
            try:
                rows.append(tuple(row[s] for s in self.alphabet))
            except KeyError as e:
                raise AutomatonError(f"state {q} has no transition on {e.args[0]!r}") from None
        self.delta: tuple = tuple(rows)
        n = len(rows)
        if not 0 <= initial < n:
            raise AutomatonError(f"initial state {initial} out of range")
        for q, row in enumerate(self.delta):
            for target in row:
                if not 0 <= target < n:
                    raise AutomatonError(f"transition {q} -> {target} leaves the state set")
        self.initial = initial

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def symbol_index(self, sym: Symbol) -> int:
        try:
            return self._index[sym]
        except KeyError:
            raise AutomatonError(f"symbol {format_symbol(sym)!r} not in alphabet") from None

    def final_state(self, word: Word) -> int:
        q = self.initial
        idx = self._index
        delta = self.delta
        try:
            for sym in word:
                q = delta[q][idx[sym]]
        except KeyError as e:
            raise AutomatonError(f"symbol {format_symbol(e.args[0])!r} not in alphabet") from None
        return q

    def reachable_states(self) -> list[int]:
        """States in breadth-first discovery order from the initial state."""
        seen = [False] * self.n_states
        seen[self.initial] = True
        order = [self.initial]
        queue = deque(order)
        while queue:
            q = queue.popleft()
            for target in self.delta[q]:
                if not seen[target]:
                    seen[target] = True
                    order.append(target)
                    queue.append(target)
        return order


class Dfa(_Machine):
    def __init__(self, alphabet, transitions, initial, accepting):
        super().__init__(alphabet, transitions, initial)
        self.accepting = frozenset(accepting)
        for q in self.accepting:
            if not 0 <= q < self.n_states:
                raise AutomatonError(f"accepting state {q} out of range")

    def accepts(self, word: Word) -> bool:
        return self.final_state(word) in self.accepting


class Dfao(_Machine):
    def __init__(self, alphabet, transitions, initial, outputs):
        super().__init__(alphabet, transitions, initial)
        self.outputs = tuple(outputs)
        if len(self.outputs) != self.n_states:
            raise AutomatonError("need exactly one output per state")

    def output(self, word: Word) -> str:
        return self.outputs[self.final_state(word)]


def run(machine, word: Word):
    """Acceptance of a Dfa, or the final-state output of a Dfao."""
    if isinstance(machine, Dfa):
        return machine.accepts(word)
    if isinstance(machine, Dfao):
        return machine.output(word)
    raise AutomatonError(f"not an automaton: {machine!r}")


# ---------------------------------------------------------------------------
# Construction from forbidden factors (Aho-Corasick failure closure)

def forbidden_factor_dfa(alphabet: Iterable[Symbol], patterns: Iterable) -> Dfa:
    """DFA of the words containing no pattern as a factor.

    An empty pattern set yields the universal automaton; an empty
    pattern is rejected because it would forbid everything.
    """
    alphabet = tuple(sorted(set(alphabet)))
    patterns = [tuple(p) if not isinstance(p, str) else p for p in patterns]
    for p in patterns:
        if len(p) == 0:
            raise AutomatonError("empty forbidden pattern would reject every word")
        for sym in p:
            if sym not in alphabet:
                raise AutomatonError(f"pattern symbol {format_symbol(sym)!r} not in alphabet")

    # Trie with failure links; node 0 is the root.
    children: list[dict] = [{}]
    terminal = [False]
    for p in patterns:
        node = 0
        for sym in p:
            node = children[node].setdefault(sym, len(children))
            if node == len(terminal):
                children.append({})
                terminal.append(False)
        terminal[node] = True

    fail = [0] * len(children)
    bad = terminal[:]
    goto: list[dict] = [dict() for _ in children]
    queue = deque()
    for sym in alphabet:
        child = children[0].get(sym)
        if child is None:
            goto[0][sym] = 0
        else:
            goto[0][sym] = child
            fail[child] = 0
            queue.append(child)
    while queue:
        node = queue.popleft()
        bad[node] = bad[node] or bad[fail[node]]
        for sym in alphabet:
            child = children[node].get(sym)
            if child is None:
                goto[node][sym] = goto[fail[node]][sym]
            else:
                fail[child] = goto[fail[node]][sym]
                goto[node][sym] = child
                queue.append(child)

    # Collapse every pattern hit into one absorbing dead state.
    alive = [i for i, b in enumerate(bad) if not b]
    rename = {node: k for k, node in enumerate(alive)}
    dead = len(alive)
    rows = []
    for node in alive:
        rows.append({sym: (rename[t] if not bad[t := goto[node][sym]] else dead) for sym in alphabet})
    rows.append({sym: dead for sym in alphabet})
    return Dfa(alphabet, rows, rename[0], frozenset(range(len(alive))))


# ---------------------------------------------------------------------------
# Product constructions

_OPS = {
    "AND": lambda a, b: a and b,
    "OR": lambda a, b: a or b,
    "ANDNOT": lambda a, b: a and not b,
}


def _check_same_alphabet(a: _Machine, b: _Machine) -> None:
    if a.alphabet != b.alphabet:
        raise AutomatonError(
            f"alphabet mismatch: {[format_symbol(s) for s in a.alphabet]} "
            f"vs {[format_symbol(s) for s in b.alphabet]}"
        )


def combine(a: Dfa, b: Dfa, op: str) -> Dfa:
    """Reachable product of two DFAs under AND, OR or ANDNOT."""
    if op not in _OPS:
        raise AutomatonError(f"unknown combination {op!r}; use AND, OR or ANDNOT")
    _check_same_alphabet(a, b)
    want = _OPS[op]
    n_sym = len(a.alphabet)
    pair_id = {(a.initial, b.initial): 0}
    pairs = [(a.initial, b.initial)]
    rows: list[list[int]] = []
    for qa, qb in pairs:
        row = []
        for k in range(n_sym):
            target = (a.delta[qa][k], b.delta[qb][k])
            t = pair_id.get(target)
            if t is None:
                t = pair_id[target] = len(pairs)
                pairs.append(target)
            row.append(t)
        rows.append(row)
    accepting = frozenset(
        i for i, (qa, qb) in enumerate(pairs) if want(qa in a.accepting, qb in b.accepting)
    )
    dict_rows = [{s: row[k] for k, s in enumerate(a.alphabet)} for row in rows]
    return Dfa(a.alphabet, dict_rows, 0, accepting)


def complement(a: Dfa) -> Dfa:
    rows = [{s: a.delta[q][k] for k, s in enumerate(a.alphabet)} for q in range(a.n_states)]
    return Dfa(a.alphabet, rows, a.initial, frozenset(range(a.n_states)) - a.accepting)


def shortest_difference(a: Dfa, b: Dfa) -> list | None:
    """A shortest word accepted by exactly one of the two, or None."""
    _check_same_alphabet(a, b)
    start = (a.initial, b.initial)
    parent: dict = {start: None}
    queue = deque([start])
    while queue:
        qa, qb = queue.popleft()
        if (qa in a.accepting) != (qb in b.accepting):
            word: list = []
            node = (qa, qb)
            while parent[node] is not None:
                node, sym = parent[node]
                word.append(sym)
            word.reverse()
            return word
        for k, sym in enumerate(a.alphabet):
            target = (a.delta[qa][k], b.delta[qb][k])
            if target not in parent:
                parent[target] = ((qa, qb), sym)
                queue.append(target)
    return None


def equivalent(a: Dfa, b: Dfa) -> bool:
    """Language equality, decided by emptiness of the symmetric difference."""
    return shortest_difference(a, b) is None


# ---------------------------------------------------------------------------
# Minimization (Hopcroft partition refinement, canonical BFS numbering)

def _restrict_to_reachable(m):
    order = m.reachable_states()
    if len(order) == m.n_states and order == list(range(m.n_states)):
        return m
    rename = {q: k for k, q in enumerate(order)}
    rows = [
        {s: rename[m.delta[q][k]] for k, s in enumerate(m.alphabet)}
        for q in order
    ]
    if isinstance(m, Dfa):
        return Dfa(m.alphabet, rows, rename[m.initial],
                   frozenset(rename[q] for q in m.accepting if q in rename))
    return Dfao(m.alphabet, rows, rename[m.initial], tuple(m.outputs[q] for q in order))


def _hopcroft(m: _Machine, seed_classes: list[frozenset]) -> list[int]:
    """Coarsest refinement of the seed partition stable under the
    transition function; returns a block id per state."""
    n = m.n_states
    n_sym = len(m.alphabet)
    preimage = [[[] for _ in range(n)] for _ in range(n_sym)]
    for q in range(n):
        for k in range(n_sym):
            preimage[k][m.delta[q][k]].append(q)

    blocks: list[set] = [set(c) for c in seed_classes if c]
    block_of = [0] * n
    for bid, block in enumerate(blocks):
        for q in block:
            block_of[q] = bid
    worklist = set(range(len(blocks)))

    while worklist:
        splitter_id = worklist.pop()
        for k in range(n_sym):
            touched: dict[int, list[int]] = {}
            for q in list(blocks[splitter_id]):
                for p in preimage[k][q]:
                    touched.setdefault(block_of[p], []).append(p)
            for bid, hits in touched.items():
                block = blocks[bid]
                if len(hits) == len(block):
                    continue
                moved = set(hits)
                blocks[bid] = block - moved
                new_id = len(blocks)
                blocks.append(moved)
                for p in moved:
                    block_of[p] = new_id
                if bid in worklist:
                    worklist.add(new_id)
                else:
                    worklist.add(new_id if len(moved) <= len(blocks[bid]) else bid)
    return block_of


def minimize(m):
    """Language- (or output-) equivalent machine with the minimum number
    of states among complete machines, states numbered in BFS order."""
    m = _restrict_to_reachable(m)
    if isinstance(m, Dfa):
        rest = frozenset(range(m.n_states)) - m.accepting
        seed = [m.accepting, rest]
    else:
        by_output: dict[str, set] = {}
        for q, out in enumerate(m.outputs):
            by_output.setdefault(out, set()).add(q)
        seed = [frozenset(v) for _, v in sorted(by_output.items())]
    block_of = _hopcroft(m, [frozenset(c) for c in seed])

    # Quotient, then renumber blocks in BFS discovery order.
    rep_delta: dict[int, list[int]] = {}
    for q in range(m.n_states):
        b = block_of[q]
        if b not in rep_delta:
            rep_delta[b] = [block_of[t] for t in m.delta[q]]
    order = []
    seen = set()
    queue = deque([block_of[m.initial]])
    seen.add(block_of[m.initial])
    while queue:
        b = queue.popleft()
        order.append(b)
        for t in rep_delta[b]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    rename = {b: k for k, b in enumerate(order)}
    rows = [{s: rename[rep_delta[b][k]] for k, s in enumerate(m.alphabet)} for b in order]
    initial = rename[block_of[m.initial]]
    if isinstance(m, Dfa):
        accepting = frozenset(rename[block_of[q]] for q in m.accepting)
        return Dfa(m.alphabet, rows, initial, accepting)
    outputs = [None] * len(order)
    for q in range(m.n_states):
        outputs[rename[block_of[q]]] = m.outputs[q]
    return Dfao(m.alphabet, rows, initial, tuple(outputs))


def trimmed_state_count(m) -> int:
    """Reachable states that still matter: for a Dfa, those from which an
    accepting state is reachable; for a Dfao, all reachable states.
    Complements the complete-machine count, which includes dead states."""
    m2 = _restrict_to_reachable(m)
    if isinstance(m2, Dfao):
        return m2.n_states
    useful = set(m2.accepting)
    changed = True
    while changed:
        changed = False
        for q in range(m2.n_states):
            if q not in useful and any(t in useful for t in m2.delta[q]):
                useful.add(q)
                changed = True
    return len(useful)


def canonicalize(m):
    """BFS renumbering without minimization; isomorphic machines become equal."""
    return _restrict_to_reachable(m)


def same_structure(a, b) -> bool:
    """Isomorphism of canonicalized machines (exact table equality)."""
    a, b = canonicalize(a), canonicalize(b)
    if type(a) is not type(b) or a.alphabet != b.alphabet or a.delta != b.delta:
        return False
    if a.initial != b.initial:
        return False
    if isinstance(a, Dfa):
        return a.accepting == b.accepting
    return a.outputs == b.outputs


# ---------------------------------------------------------------------------
# Restricted regular expressions
#
# Grammar: alternation "|", concatenation by juxtaposition (whitespace
# ignored), postfix "*", "+", "?", grouping "(...)", the empty word as
# the literal character epsilon, and brace sets "{w1, w2, ...}" denoting a
# finite union of literal words.

_REGEX_SPECIALS = set("()|*+?{},")


class _RegexParser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        raise AutomatonError(f"regex parse error at position {self.pos}: {message}")

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else None

    def take(self):
        c = self.peek()
        self.pos += 1
        return c

    def parse(self):
        node = self.alternation()
        if self.peek() is not None:
            self.error(f"unexpected {self.peek()!r}")
        return node

    def alternation(self):
        parts = [self.concatenation()]
        while self.peek() == "|":
            self.take()
            parts.append(self.concatenation())
        return parts[0] if len(parts) == 1 else ("alt", parts)

    def concatenation(self):
        parts = []
        while True:
            c = self.peek()
            if c is None or c in "|)}," :
                break
            parts.append(self.postfixed())
        if not parts:
            return ("eps",)
        return parts[0] if len(parts) == 1 else ("cat", parts)

    def postfixed(self):
        node = self.atom()
        while self.peek() in ("*", "+", "?"):
            op = self.take()
            node = ({"*": "star", "+": "plus", "?": "opt"}[op], node)
        return node

    def atom(self):
        c = self.peek()
        if c == "(":
            self.take()
            node = self.alternation()
            if self.take() != ")":
                self.error("missing ')'")
            return node
        if c == "{":
            self.take()
            words = []
            current = []
            while True:
                c = self.take()
                if c is None:
                    self.error("missing '}'")
                if c == "}":
                    words.append(current)
                    break
                if c == ",":
                    words.append(current)
                    current = []
                elif c in _REGEX_SPECIALS:
                    self.error(f"nested {c!r} inside a brace set")
                else:
                    current.append(c)
            branches = [
                ("cat", [("lit", ch) for ch in wd]) if wd else ("eps",) for wd in words
            ]
            return branches[0] if len(branches) == 1 else ("alt", branches)
        if c is None or c in _REGEX_SPECIALS:
            self.error(f"expected a literal, got {c!r}")
        self.take()
        if c == "ε":  # epsilon
            return ("eps",)
        return ("lit", c)


def _regex_literals(node, acc: set) -> None:
    kind = node[0]
    if kind == "lit":
        acc.add(node[1])
    elif kind in ("alt", "cat"):
        for part in node[1]:
            _regex_literals(part, acc)
    elif kind in ("star", "plus", "opt"):
        _regex_literals(node[1], acc)


def _thompson(node, edges, eps_edges, new_state):
    """Returns (start, end) fragment; mutates the edge lists."""
    kind = node[0]
    if kind == "eps":
        s = new_state()
        return s, s
    if kind == "lit":
        s, t = new_state(), new_state()
        edges.append((s, node[1], t))
        return s, t
    if kind == "cat":
        start = prev_end = None
        for part in node[1]:
            s, t = _thompson(part, edges, eps_edges, new_state)
            if start is None:
                start = s
            else:
                eps_edges.append((prev_end, s))
            prev_end = t
        return start, prev_end
    if kind == "alt":
        s, t = new_state(), new_state()
        for part in node[1]:
            ps, pt = _thompson(part, edges, eps_edges, new_state)
            eps_edges.append((s, ps))
            eps_edges.append((pt, t))
        return s, t
    if kind in ("star", "plus", "opt"):
        ps, pt = _thompson(node[1], edges, eps_edges, new_state)
        s, t = new_state(), new_state()
        eps_edges.append((s, ps))
        eps_edges.append((pt, t))
        if kind in ("star", "plus"):
            eps_edges.append((pt, ps))
        if kind in ("star", "opt"):
            eps_edges.append((s, t))
        return s, t
    raise AutomatonError(f"unknown regex node {kind!r}")


def regex_to_dfa(expr: str, alphabet: Iterable[Symbol] | None = None) -> Dfa:
    """Minimal complete DFA for a restricted regular expression.

    The alphabet defaults to the literals appearing in the expression;
    pass one explicitly to embed the language in a larger alphabet.
    """
    ast = _RegexParser(expr).parse()
    if alphabet is None:
        found: set = set()
        _regex_literals(ast, found)
        if not found:
            raise AutomatonError("expression has no literals; pass an explicit alphabet")
        alphabet = found
    alphabet = tuple(sorted(set(alphabet)))

    counter = itertools.count()
    edges: list[tuple] = []
    eps_edges: list[tuple] = []
    start, end = _thompson(ast, edges, eps_edges, lambda: next(counter))
    n = next(counter)
    eps_adj: list[list[int]] = [[] for _ in range(n)]
    for s, t in eps_edges:
        eps_adj[s].append(t)
    sym_adj: list[dict] = [dict() for _ in range(n)]
    for s, ch, t in edges:
        if ch not in alphabet:
            raise AutomatonError(f"literal {ch!r} outside the given alphabet")
        sym_adj[s].setdefault(ch, []).append(t)

    def closure(states: frozenset) -> frozenset:
        stack = list(states)
        seen = set(states)
        while stack:
            q = stack.pop()
            for t in eps_adj[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)

    start_set = closure(frozenset([start]))
    subset_id = {start_set: 0}
    subsets = [start_set]
    rows: list[dict] = []
    for current in subsets:
        row = {}
        for sym in alphabet:
            nxt = frozenset(t for q in current for t in sym_adj[q].get(sym, ()))
            nxt = closure(nxt) if nxt else frozenset()
            t = subset_id.get(nxt)
            if t is None:
                t = subset_id[nxt] = len(subsets)
                subsets.append(nxt)
            row[sym] = t
        rows.append(row)
    accepting = frozenset(i for i, ss in enumerate(subsets) if end in ss)
    return minimize(Dfa(alphabet, rows, 0, accepting))


# ---------------------------------------------------------------------------
# Text format and DOT export

def to_text(machine, header: Iterable[str] = ()) -> str:
    """Line-oriented serialization; see from_text.  Round-trips exactly."""
    lines = [f"# {h}" for h in header]
    lines.append("alphabet: " + " ".join(format_symbol(s) for s in machine.alphabet))
    lines.append(f"states: {machine.n_states}")
    lines.append(f"initial: {machine.initial}")
    if isinstance(machine, Dfa):
        lines.append("accepting: " + " ".join(str(q) for q in sorted(machine.accepting)))
    else:
        for q in range(machine.n_states):
            lines.append(f"output: {q} {machine.outputs[q]}")
    for q in range(machine.n_states):
        for k, sym in enumerate(machine.alphabet):
            lines.append(f"{q} {format_symbol(sym)} -> {machine.delta[q][k]}")
    return "\n".join(lines) + "\n"


def from_text(text: str):
    """Parse the text format; returns a Dfa or a Dfao."""
    alphabet: tuple | None = None
    n_states = initial = None
    accepting: set | None = None
    outputs: dict[int, str] = {}
    transitions: list[tuple[int, Symbol, int]] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("alphabet:"):
            alphabet = tuple(parse_symbol(tok) for tok in line.split(":", 1)[1].split())
        elif line.startswith("states:"):
            n_states = int(line.split(":", 1)[1])
        elif line.startswith("initial:"):
            initial = int(line.split(":", 1)[1])
        elif line.startswith("accepting:"):
            accepting = {int(tok) for tok in line.split(":", 1)[1].split()}
        elif line.startswith("output:"):
            _, q, letter = line.split()
            outputs[int(q)] = letter
        else:
            m = re.fullmatch(r"(\d+)\s+(\S+)\s*->\s*(\d+)", line)
            if not m:
                raise AutomatonError(f"unparseable line: {raw!r}")
            transitions.append((int(m.group(1)), parse_symbol(m.group(2)), int(m.group(3))))
    if alphabet is None or n_states is None or initial is None:
        raise AutomatonError("missing alphabet/states/initial header")
    if accepting is not None and outputs:
        raise AutomatonError("both accepting and output lines present")
    rows: list[dict] = [dict() for _ in range(n_states)]
    for q, sym, t in transitions:
        rows[q][sym] = t
    if outputs:
        out = tuple(outputs.get(q, "") for q in range(n_states))
        if any(o == "" for o in out):
            raise AutomatonError("output missing for some state")
        return Dfao(alphabet, rows, initial, out)
    if accepting is None:
        raise AutomatonError("neither accepting nor output lines present")
    return Dfa(alphabet, rows, initial, accepting)


def to_dot(machine, name: str = "automaton") -> str:
    lines = [f"digraph {name} {{", "    rankdir=LR;", '    hidden [label="", shape=plaintext];']
    for q in range(machine.n_states):
        if isinstance(machine, Dfa):
            shape = "doublecircle" if q in machine.accepting else "circle"
            lines.append(f'    {q} [shape={shape}];')
        else:
            lines.append(f'    {q} [shape=circle, label="{q}/{machine.outputs[q]}"];')
    lines.append(f"    hidden -> {machine.initial};")
    for q in range(machine.n_states):
        by_target: dict[int, list[str]] = {}
        for k, sym in enumerate(machine.alphabet):
            by_target.setdefault(machine.delta[q][k], []).append(format_symbol(sym))
        for target, syms in sorted(by_target.items()):
            lines.append(f'    {q} -> {target} [label="{";".join(syms)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
