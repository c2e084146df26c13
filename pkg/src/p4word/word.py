"""The ternary word p: morphic generation, indexed access, letter counts.

p = 012102101021012... is the fixed point of h: 0 -> 01, 1 -> 21, 2 -> 0.
``fixed_point_prefix`` materializes prefixes by iterating h; ``p_at``
answers positional queries through a learned automaton reading the P4
representation of the index.  The two routes are independent and their
agreement is part of the test suite.
"""
from __future__ import annotations

import threading

from . import assets, automata, numeration

ALPHABET = ("0", "1", "2")

P_DFAO_ASSET = "p_dfao.txt"


class WordError(ValueError):
    pass


class Morphism:
    """A letter-to-word substitution over single-character letters.

    The seed's image must start with the seed (prolongability), so that
    iterating from the seed converges to a fixed point prefix by prefix.
    """

    def __init__(self, rules: dict[str, str], seed: str):
        for letter, image in rules.items():
            if len(letter) != 1:
                raise WordError(f"morphism letters must be single characters, got {letter!r}")
            if any(c not in rules for c in image):
                raise WordError(f"image {image!r} uses letters outside the alphabet")
        if seed not in rules:
            raise WordError(f"seed {seed!r} has no rule")
        if not rules[seed].startswith(seed) or len(rules[seed]) < 2:
            raise WordError(f"morphism is not prolongable at seed {seed!r}")
        self.rules = dict(rules)
        self.seed = seed
        self._letters = frozenset(rules)
        self._table = str.maketrans(rules)

    def apply(self, w: str) -> str:
        stray = set(w) - self._letters
        if stray:
            raise WordError(f"unknown letter {min(stray)!r}")
        return w.translate(self._table)

    def iterate(self, n: int) -> str:
        """The n-th iterate of the seed."""
        w = self.seed
        for _ in range(n):
            w = self.apply(w)
        return w


H = Morphism({"0": "01", "1": "21", "2": "0"}, "0")

_buffer = H.seed
_buffer_lock = threading.Lock()


def fixed_point_prefix(length: int) -> str:
    """The first `length` letters of p.

    The buffer grows by whole applications of h, so previously returned
    prefixes never change; growth is serialized, reads are lock-free.
    """
    global _buffer
    if length < 0:
        raise WordError("length must be nonnegative")
    buf = _buffer
    if len(buf) < length:
        with _buffer_lock:
            while len(_buffer) < length:
                _buffer = H.apply(_buffer)
            buf = _buffer
    return buf[:length]


def apply_morphism(w: str) -> str:
    """h applied letterwise to a word over {0,1,2}."""
    return H.apply(w)


def parikh(w: str) -> tuple[int, int, int]:
    """Letter counts (|w|_0, |w|_1, |w|_2)."""
    return (w.count("0"), w.count("1"), w.count("2"))


def parikh_power_formula(n: int) -> tuple[int, int, int]:
    """Closed form for the Parikh vector of h^n(0); needs n >= 3 so the
    backward-extended values X_0, X_{-1} suffice."""
    if n < 3:
        raise WordError("the closed form needs n >= 3")
    x = numeration.x_value
    return (x(n - 1), x(n - 1) + x(n - 3), x(n - 2) + x(n - 4))


def parikh_power_check(n: int) -> bool:
    """Does the counted Parikh vector of h^n(0) match the closed form?"""
    return parikh(H.iterate(n)) == parikh_power_formula(n)


# ---------------------------------------------------------------------------
# Automaton-based random access

_p_dfao: automata.Dfao | None = None
_p_dfao_lock = threading.Lock()


def p_automaton() -> automata.Dfao:
    """The validated output automaton for p, loaded from the asset store."""
    global _p_dfao
    if _p_dfao is None:
        with _p_dfao_lock:
            if _p_dfao is None:
                text = assets.read_asset(P_DFAO_ASSET)
                assets.require_validated(P_DFAO_ASSET, text)
                machine = automata.from_text(text)
                if not isinstance(machine, automata.Dfao):
                    raise assets.AssetError(f"{P_DFAO_ASSET} does not hold an output automaton")
                _p_dfao = machine
    return _p_dfao


def p_at(n: int) -> str:
    """p[n] via the automaton reading the P4 representation of n."""
    if n < 0:
        raise WordError("positions are nonnegative")
    return p_automaton().output(numeration.encode(n))


def p_outputs_upto(count: int, dfao: automata.Dfao | None = None) -> str:
    """Automaton outputs for positions 0..count-1, as one string.

    Shares transition work across representations with a common prefix
    by walking the tree of canonical digit strings in value order, so
    bulk agreement checks against the morphic buffer stay cheap.
    """
    if count <= 0:
        return ""
    m = dfao if dfao is not None else p_automaton()
    d0 = m.symbol_index("0")
    d1 = m.symbol_index("1")
    delta = m.delta
    outputs = m.outputs
    step = numeration.context_step

    res = [""] * count
    res[0] = outputs[m.initial]

    length = 1
    while numeration.x_value(length) < count:
        weights = [numeration.x_value(length - j) for j in range(length)]

        # Depth-first over canonical strings of this exact length; digit 0
        # before digit 1 makes the visit order the numeric order.
        def walk(depth: int, value: int, state: int, ctx: int) -> None:
            if depth == length:
                res[value] = outputs[state]
                return
            w = weights[depth]
            nxt = step(ctx, 0)
            if nxt >= 0:
                walk(depth + 1, value, delta[state][d0], nxt)
            nxt = step(ctx, 1)
            if nxt >= 0 and value + w < count:
                walk(depth + 1, value + w, delta[state][d1], nxt)

        walk(1, weights[0], delta[m.initial][d1], numeration.context_step(0, 1))
        length += 1
    return "".join(res)
