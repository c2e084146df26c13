"""Guess-and-verify synthesis of automata from semantic oracles.

Candidate machines are built from residual classes of input prefixes:
two prefixes are merged when the oracle answers identically on every
suffix up to a configured depth.  The result is a guess.  ``validate``
runs a candidate against its oracle over an exhaustive range plus
randomized trials and returns every disagreement; a machine is only
cached as an asset after validating cleanly, and the asset header
records the bounds.  Validation is testing, not proof: everything here
is "validated to bound N", never proved.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple

from . import assets, automata, numeration, word

DONT_CARE = "-"

P_ASSET = word.P_DFAO_ASSET
SUCCESSOR_ASSET = "successor_dfa.txt"
ADDER_ASSET = "adder_dfa.txt"


class LearnError(RuntimeError):
    pass


class Mismatch(NamedTuple):
    word: tuple
    expected: object
    got: object


@dataclass(frozen=True)
class SequenceOracle:
    """A black-box function from symbol strings to outputs.

    classify returns the output for a string, or None when the string is
    not meaningful (e.g. a track is not a valid representation) and the
    machine's behavior on it is unconstrained.  exhaustive streams
    (input, expected) pairs up to a bound whose meaning (index bound or
    value bound, inclusive or not) is the oracle's own convention,
    documented per oracle.  random_case draws one randomized pair.
    """

    name: str
    alphabet: tuple
    classify: Callable[[tuple], object]
    exhaustive: Callable[[int], Iterator[tuple]]
    random_case: Callable[[random.Random], tuple]


# ---------------------------------------------------------------------------
# Oracles

def p_oracle() -> SequenceOracle:
    """Outputs p[decode(s)] on valid digit strings (leading zeros allowed).

    exhaustive(bound) covers positions n = 0 .. bound-1 on canonical
    representations; random cases add left zero-padding.
    """

    def classify(w: tuple):
        s = "".join(w)
        if any(c not in "01" for c in s) or not numeration.is_valid(s):
            return None
        n = numeration.decode(s)
        return word.fixed_point_prefix(n + 1)[n]

    def exhaustive(bound: int):
        prefix = word.fixed_point_prefix(bound)
        for n in range(bound):
            yield tuple(numeration.encode(n)), prefix[n]

    def random_case(rng: random.Random):
        n = rng.randrange(0, 2_000_000)
        pad = "0" * rng.randrange(0, 4)
        return tuple(pad + numeration.encode(n)), word.fixed_point_prefix(n + 1)[n]

    return SequenceOracle("p", ("0", "1"), classify, exhaustive, random_case)


def _tracks(w: tuple, k: int) -> list[str]:
    cols = list(zip(*w)) if w else [()] * k
    return ["".join(col) for col in cols]


def _relation_classify(w: tuple, k: int, relation) -> bool:
    if not all(isinstance(sym, tuple) and len(sym) == k for sym in w):
        return False
    tracks = _tracks(w, k)
    try:
        if not all(numeration.is_valid(t) for t in tracks):
            return False
        return relation(*[numeration.decode(t) for t in tracks])
    except numeration.NumerationError:
        return False


def _random_symbols(rng: random.Random, alphabet: tuple, max_len: int) -> tuple:
    return tuple(rng.choice(alphabet) for _ in range(rng.randrange(0, max_len + 1)))


def successor_oracle() -> SequenceOracle:
    """Accepts padded pairs (x, y) with y = x + 1; total (bad tracks reject).

    exhaustive(bound) yields, for each n < bound, the true pair and one
    off-by-one rejection.
    """
    alphabet = tuple(itertools.product("01", repeat=2))

    def classify(w: tuple) -> bool:
        return _relation_classify(w, 2, lambda x, y: y == x + 1)

    def exhaustive(bound: int):
        enc = numeration.encode
        for n in range(bound):
            yield automata.pad_tracks(enc(n), enc(n + 1)), True
            yield automata.pad_tracks(enc(n), enc(n + 2)), False

    def random_case(rng: random.Random):
        if rng.random() < 0.5:
            x = rng.randrange(0, 1_000_000)
            y = x + rng.choice((0, 1, 1, 2))
            return automata.pad_tracks(numeration.encode(x), numeration.encode(y)), y == x + 1
        w = _random_symbols(rng, alphabet, 24)
        return w, classify(w)

    return SequenceOracle("successor", alphabet, classify, exhaustive, random_case)


def adder_oracle() -> SequenceOracle:
    """Accepts padded triples (x, y, z) with x + y = z; total.

    exhaustive(bound) yields the true triple for every x, y <= bound
    (inclusive), plus one corrupted rejection per x.
    """
    alphabet = tuple(itertools.product("01", repeat=3))

    def classify(w: tuple) -> bool:
        return _relation_classify(w, 3, lambda x, y, z: x + y == z)

    def exhaustive(bound: int):
        enc = numeration.encode
        reps = [enc(n) for n in range(2 * bound + 3)]
        for x in range(bound + 1):
            for y in range(bound + 1):
                yield automata.pad_tracks(reps[x], reps[y], reps[x + y]), True
            yield automata.pad_tracks(reps[x], reps[x], reps[2 * x + 1]), False

    def random_case(rng: random.Random):
        if rng.random() < 0.5:
            x = rng.randrange(0, 500_000)
            y = rng.randrange(0, 500_000)
            z = x + y + rng.choice((-2, -1, 0, 0, 1, 2))
            z = max(z, 0)
            enc = numeration.encode
            return automata.pad_tracks(enc(x), enc(y), enc(z)), x + y == z
        w = _random_symbols(rng, alphabet, 20)
        return w, classify(w)

    return SequenceOracle("adder", alphabet, classify, exhaustive, random_case)


ORACLES = {
    "p": p_oracle,
    "successor": successor_oracle,
    "adder": adder_oracle,
}

ORACLE_ASSETS = {
    "p": P_ASSET,
    "successor": SUCCESSOR_ASSET,
    "adder": ADDER_ASSET,
}


# ---------------------------------------------------------------------------
# Learning

def _suffixes(alphabet: tuple, depth: int) -> list[tuple]:
    out: list[tuple] = []
    for length in range(depth + 1):
        out.extend(itertools.product(alphabet, repeat=length))
    return out


def learn_dfao(oracle: SequenceOracle, suffix_depth: int = 5, prefix_bound: int = 20,
               state_budget: int = 400):
    """Myhill-Nerode guess: merge prefixes whose oracle outputs agree on
    every suffix of length <= suffix_depth.

    Returns a Dfao; for boolean oracles, a Dfa accepting where the
    oracle answers True.  The result is deterministic in (oracle,
    suffix_depth, prefix_bound) and is NOT verified -- run validate().
    """
    if suffix_depth < 1 or prefix_bound < 1:
        raise LearnError("suffix_depth and prefix_bound must be >= 1")
    suffixes = _suffixes(oracle.alphabet, suffix_depth)
    classify = oracle.classify

    def signature(prefix: tuple) -> tuple:
        return tuple(classify(prefix + s) for s in suffixes)

    reps: list[tuple] = [()]
    sig_to_state = {signature(()): 0}
    rows: list[dict] = []
    state = 0
    while state < len(reps):
        prefix = reps[state]
        row = {}
        for sym in oracle.alphabet:
            child = prefix + (sym,)
            sig = signature(child)
            target = sig_to_state.get(sig)
            if target is None:
                if len(child) > prefix_bound:
                    raise LearnError(
                        f"new residual at prefix {child!r} beyond prefix_bound={prefix_bound}"
                    )
                if len(reps) >= state_budget:
                    raise LearnError(
                        f"state budget {state_budget} exhausted at prefix {child!r}"
                    )
                target = sig_to_state[sig] = len(reps)
                reps.append(child)
            row[sym] = target
        rows.append(row)
        state += 1

    outputs = [classify(r) for r in reps]
    concrete = [o for o in outputs if o is not None]
    if concrete and all(isinstance(o, bool) for o in concrete):
        accepting = frozenset(q for q, o in enumerate(outputs) if o is True)
        return automata.Dfa(oracle.alphabet, rows, 0, accepting)
    letters = tuple(DONT_CARE if o is None else str(o) for o in outputs)
    return automata.Dfao(oracle.alphabet, rows, 0, letters)


# ---------------------------------------------------------------------------
# Validation

def validate(machine, oracle: SequenceOracle, exhaustive_bound: int,
             random_trials: int, seed: int = 0) -> list[Mismatch]:
    """Every disagreement between the machine and the oracle over the
    oracle's exhaustive stream plus seeded random trials."""
    mismatches: list[Mismatch] = []
    is_dfa = isinstance(machine, automata.Dfa)
    for w, expected in oracle.exhaustive(exhaustive_bound):
        got = machine.accepts(w) if is_dfa else machine.output(w)
        if got != expected:
            mismatches.append(Mismatch(w, expected, got))
    rng = random.Random(seed)
    for _ in range(random_trials):
        w, expected = oracle.random_case(rng)
        if expected is None:
            continue
        got = machine.accepts(w) if is_dfa else machine.output(w)
        if got != expected:
            mismatches.append(Mismatch(w, expected, got))
    return mismatches


def format_mismatches(mismatches: list[Mismatch], limit: int = 10) -> str:
    lines = [
        f"  {''.join(automata.format_symbol(s) + ' ' for s in m.word).strip() or '(empty)'}"
        f" expected {m.expected!r} got {m.got!r}"
        for m in mismatches[:limit]
    ]
    if len(mismatches) > limit:
        lines.append(f"  ... and {len(mismatches) - limit} more")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Asset lifecycle: learn, validate, cache with provenance headers

def build_asset(oracle_name: str, suffix_depth: int = 5, prefix_bound: int = 20,
                exhaustive_bound: int | None = None, random_trials: int = 1000,
                seed: int = 0, minimize_result: bool = True):
    """Learn, validate, and return (machine, header lines); raises
    LearnError when validation finds any disagreement."""
    if oracle_name not in ORACLES:
        raise LearnError(f"unknown oracle {oracle_name!r}; choose from {sorted(ORACLES)}")
    oracle = ORACLES[oracle_name]()
    if exhaustive_bound is None:
        exhaustive_bound = {"p": 100_000, "successor": 100_000, "adder": 2000}[oracle_name]
    machine = learn_dfao(oracle, suffix_depth, prefix_bound)
    if minimize_result:
        machine = automata.minimize(machine)
    bad = validate(machine, oracle, exhaustive_bound, random_trials, seed)
    if bad:
        raise LearnError(
            f"candidate for {oracle_name!r} disagrees with its oracle "
            f"({len(bad)} mismatches):\n" + format_mismatches(bad)
        )
    header = [
        f"learned-from: {oracle_name} oracle (residual merge)",
        f"suffix-depth: {suffix_depth}",
        f"prefix-bound: {prefix_bound}",
        f"validated: exhaustive bound {exhaustive_bound}, "
        f"{random_trials} random trials, seed {seed} (tested, not proved)",
    ]
    return machine, header


def save_asset(oracle_name: str, machine, header: list[str]) -> str:
    name = ORACLE_ASSETS[oracle_name]
    assets.write_asset(name, automata.to_text(machine, header))
    return name


def load_learned(oracle_name: str):
    """Load a cached learned machine, insisting on its validation header."""
    name = ORACLE_ASSETS[oracle_name]
    text = assets.read_asset(name)
    assets.require_validated(name, text)
    return automata.from_text(text)
