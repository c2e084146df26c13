"""Exact arithmetic in the P4 numeration system.

Natural numbers are written as sums of the recurrence values

    X_1 = 1, X_2 = 2, X_3 = 4, X_4 = 7,
    X_n = X_{n-1} + X_{n-2} + X_{n-4}   (n >= 5)

as binary digit strings, most significant digit first, avoiding the
factors 111 and 1101.  ``encode``/``decode`` over arbitrary-precision
integers are the semantic ground truth; automaton-based arithmetic is
built in :mod:`p4word.learner` and checked against these functions,
never trusted on its own.
"""
from __future__ import annotations

from bisect import bisect_right

LT, EQ, GT = -1, 0, 1

FORBIDDEN_FACTORS = ("111", "1101")


class NumerationError(ValueError):
    """Bad index, negative value, or malformed digit string."""


# X_i for i >= 1.  The simpler order-3 recurrence
# X_n = 2*X_{n-1} - X_{n-2} + X_{n-3} (n >= 4) runs backwards as
# X_{n-3} = X_n - 2*X_{n-1} + X_{n-2}, giving X_0 = X_{-1} = 1; below -1
# the extension is not defined.
_X_BACKWARD = {0: 1, -1: 1}
_X = [1, 2, 4, 7]


def _grow_to_cover(n: int) -> None:
    # Append-only and idempotent, so concurrent readers are fine.
    while _X[-1] <= n:
        _X.append(_X[-1] + _X[-2] + _X[-4])


def _grow_to_index(i: int) -> None:
    while len(_X) < i:
        _X.append(_X[-1] + _X[-2] + _X[-4])


def x_value(i: int) -> int:
    """The recurrence value X_i, defined for i >= -1."""
    if i < -1:
        raise NumerationError(f"X_{i} is not defined; the backward extension stops at X_-1")
    if i <= 0:
        return _X_BACKWARD[i]
    _grow_to_index(i)
    return _X[i - 1]


def encode(n: int) -> str:
    """Greedy representation of n, msd first.  encode(0) is the empty string."""
    if n < 0:
        raise NumerationError("cannot encode a negative value")
    if n == 0:
        return ""
    _grow_to_cover(n)
    t = bisect_right(_X, n)  # X_t = _X[t-1] <= n < X_{t+1}
    digits = ["0"] * t
    rem = n
    i = t - 1
    while rem:
        if _X[i] <= rem:
            digits[t - 1 - i] = "1"
            rem -= _X[i]
        i -= 1
    return "".join(digits)


def decode(rep: str) -> int:
    """Value of a digit string.  Leading zeros are allowed."""
    length = len(rep)
    if length:
        _grow_to_index(length)
    total = 0
    for j, d in enumerate(rep):
        if d == "1":
            total += _X[length - 1 - j]
        elif d != "0":
            raise NumerationError(f"non-binary digit {d!r} in representation")
    return total


def is_valid(rep: str) -> bool:
    """True when rep avoids 111 and 1101.  Leading zeros are allowed,
    matching the convention for zero-padded automaton inputs."""
    for d in rep:
        if d not in "01":
            raise NumerationError(f"non-binary digit {d!r} in representation")
    return not any(f in rep for f in FORBIDDEN_FACTORS)


def is_canonical(rep: str) -> bool:
    """Valid and either empty or starting with 1: exactly the greedy outputs."""
    return is_valid(rep) and (rep == "" or rep[0] == "1")


def first_forbidden_factor(rep: str) -> str | None:
    """The forbidden factor occurring earliest in rep, or None."""
    best = None
    for f in FORBIDDEN_FACTORS:
        at = rep.find(f)
        if at >= 0 and (best is None or at < best[0]):
            best = (at, f)
    return best[1] if best else None


def successor(rep: str) -> str:
    """encode(decode(rep) + 1); the oracle the learned incrementer is tested against."""
    return encode(decode(rep) + 1)


def add(x: str, y: str) -> str:
    """encode(decode(x) + decode(y)); the oracle the learned adder is tested against."""
    return encode(decode(x) + decode(y))


def compare(x: str, y: str) -> int:
    """Order of the represented values: LT, EQ or GT.

    On canonical representations numeric order coincides with
    length-then-lexicographic order, which is what is used here.
    """
    if len(x) != len(y):
        return LT if len(x) < len(y) else GT
    if x == y:
        return EQ
    return LT if x < y else GT


# Digit-by-digit validity tracking for generators that enumerate
# representations.  The context is the longest suffix of the digits read
# so far that is a proper prefix of a forbidden factor:
#     0 = "", 1 = "1", 2 = "11", 3 = "110"
# and -1 means a forbidden factor was just completed.
_CTX_STEP = (
    (0, 1),
    (0, 2),
    (3, -1),  # "11" + 1 -> 111
    (0, -1),  # "110" + 1 -> 1101
)


def context_step(ctx: int, digit: int) -> int:
    """Advance the validity context by one digit (0 or 1); -1 is forbidden."""
    return _CTX_STEP[ctx][digit]
