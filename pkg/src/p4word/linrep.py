"""Linear representations of integer sequences indexed by P4 digit strings.

A representation (v, zeta, w) of rank r maps a digit string e_t...e_1
(msd first) to the rational v . zeta(e_t) . ... . zeta(e_1) . w; the
empty string maps to v . w.  All arithmetic is exact rational: rank
decisions are discontinuous under rounding, so no floating point enters
this module.  The rank-16 tables for the factor-complexity sequence of p
ship as a checked-in asset in the text format below.

Text format (msd-first evaluation order, left-to-right product):
    rank: r
    v: a1 a2 ... ar          entries as integers or n/d fractions
    zeta 0:                  followed by r rows of r entries
    zeta 1:                  likewise
    w: b1 b2 ... br
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import assets, numeration

COMPLEXITY_ASSET = "complexity_rank16.txt"


class LinRepError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LinRep:
    """Immutable (row vector, per-digit matrix family, column vector)."""

    def __init__(self, v: Sequence, zeta: dict, w: Sequence):
        self.v = tuple(_frac(x) for x in v)
        self.w = tuple(_frac(x) for x in w)
        self.zeta = {
            d: tuple(tuple(_frac(x) for x in row) for row in mat) for d, mat in zeta.items()
        }
        r = len(self.v)
        if len(self.w) != r:
            raise LinRepError("v and w have different lengths")
        for d, mat in self.zeta.items():
            if len(mat) != r or any(len(row) != r for row in mat):
                raise LinRepError(f"zeta({d}) is not {r}x{r}")
        self.digits = tuple(sorted(self.zeta))
        self._int_cache = None

    @property
    def rank(self) -> int:
        return len(self.v)

    def _as_ints(self):
        """Integer copies of v/zeta/w when every entry is integral; the
        hot evaluation path then runs on plain ints (still exact)."""
        if self._int_cache is None:
            if all(x.denominator == 1 for x in self.v) and all(
                x.denominator == 1 for x in self.w
            ) and all(
                x.denominator == 1 for mat in self.zeta.values() for row in mat for x in row
            ):
                self._int_cache = (
                    tuple(int(x) for x in self.v),
                    {d: tuple(tuple(int(x) for x in row) for row in mat)
                     for d, mat in self.zeta.items()},
                    tuple(int(x) for x in self.w),
                )
            else:
                self._int_cache = False
        return self._int_cache


def _row_times_matrix(row, mat):
    r = len(row)
    return tuple(sum(row[i] * mat[i][j] for i in range(r) if row[i]) for j in range(r))


def _matrix_times_col(mat, col):
    r = len(col)
    return tuple(sum(mat[i][j] * col[j] for j in range(r) if col[j]) for i in range(r))


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b) if x and y)


def evaluate(lr: LinRep, rep: str) -> Fraction:
    """Value on a digit string; empty string gives v . w."""
    ints = lr._as_ints()
    if ints:
        v, zeta, w = ints
    else:
        v, zeta, w = lr.v, lr.zeta, lr.w
    row = v
    for d in rep:
        try:
            row = _row_times_matrix(row, zeta[d])
        except KeyError:
            raise LinRepError(f"no matrix for digit {d!r}") from None
    return Fraction(_dot(row, w))


def eval_range(lr: LinRep, count: int) -> list[Fraction]:
    """Values on encode(0), ..., encode(count-1).

    Walks the tree of canonical representations carrying the partial
    row-vector product, so shared prefixes are multiplied once.
    """
    if count <= 0:
        return []
    ints = lr._as_ints()
    v, zeta, w = ints if ints else (lr.v, lr.zeta, lr.w)
    if "0" not in zeta or "1" not in zeta:
        raise LinRepError("eval_range needs matrices for digits 0 and 1")
    z0, z1 = zeta["0"], zeta["1"]
    step = numeration.context_step

    res: list = [None] * count
    res[0] = Fraction(_dot(v, w))
    length = 1
    while numeration.x_value(length) < count:
        weights = [numeration.x_value(length - j) for j in range(length)]

        def walk(depth, value, row, ctx):
            if depth == length:
                res[value] = Fraction(_dot(row, w))
                return
            wt = weights[depth]
            nxt = step(ctx, 0)
            if nxt >= 0:
                walk(depth + 1, value, _row_times_matrix(row, z0), nxt)
            nxt = step(ctx, 1)
            if nxt >= 0 and value + wt < count:
                walk(depth + 1, value + wt, _row_times_matrix(row, z1), nxt)

        walk(1, weights[0], _row_times_matrix(v, z1), step(0, 1))
        length += 1
    return res


# ---------------------------------------------------------------------------
# Exact rank reduction

class _Basis:
    """Incremental basis of a rational vector space with coordinate
    recovery: each stored echelon row remembers its expression in the
    originally inserted vectors."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[tuple] = []      # echelon rows, pivot normalized to 1
        self.pivots: list[int] = []
        self.combo: list[tuple] = []     # row i of echelon = combo[i] . inserted
        self.inserted = 0

    def _reduce(self, vec):
        vec = list(vec)
        coeffs = [Fraction(0)] * len(self.rows)
        for i, (row, p) in enumerate(zip(self.rows, self.pivots)):
            c = vec[p]
            if c:
                coeffs[i] = c
                for j in range(self.dim):
                    if row[j]:
                        vec[j] -= c * row[j]
        return vec, coeffs

    def coordinates(self, vec):
        """Coordinates of vec in the inserted vectors, or None if outside."""
        vec, coeffs = self._reduce([_frac(x) for x in vec])
        if any(vec):
            return None
        out = [Fraction(0)] * self.inserted
        for c, combo in zip(coeffs, self.combo):
            if c:
                for k in range(self.inserted):
                    if combo[k]:
                        out[k] += c * combo[k]
        return out

    def insert(self, vec) -> bool:
        """Add vec if independent; True when the basis grew."""
        vec = [_frac(x) for x in vec]
        red, coeffs = self._reduce(vec)
        pivot = next((j for j, x in enumerate(red) if x), None)
        if pivot is None:
            return False
        inv = Fraction(1) / red[pivot]
        row = tuple(x * inv for x in red)
        combo = [Fraction(0)] * (self.inserted + 1)
        combo[self.inserted] = inv
        for c, old in zip(coeffs, self.combo):
            if c:
                for k, val in enumerate(old):
                    if val:
                        combo[k] -= inv * c * val
        self.combo = [tuple(old) + (Fraction(0),) for old in self.combo]
        self.rows.append(row)
        self.pivots.append(pivot)
        self.combo.append(tuple(combo))
        self.inserted += 1
        return True

    def size(self) -> int:
        return len(self.rows)


def _forward_reduce(lr: LinRep) -> LinRep:
    """Restrict to the row space spanned by v . zeta(word)."""
    basis_vectors: list[tuple] = []
    basis = _Basis(lr.rank)
    if basis.insert(lr.v):
        basis_vectors.append(lr.v)
    frontier = list(basis_vectors)
    while frontier:
        nxt = []
        for vec in frontier:
            for d in lr.digits:
                cand = _row_times_matrix(vec, lr.zeta[d])
                if basis.insert(cand):
                    basis_vectors.append(cand)
                    nxt.append(cand)
        frontier = nxt
    r = len(basis_vectors)
    if r == 0:
        return LinRep((), {d: () for d in lr.digits}, ())
    new_zeta = {}
    for d in lr.digits:
        rows = []
        for vec in basis_vectors:
            coords = basis.coordinates(_row_times_matrix(vec, lr.zeta[d]))
            assert coords is not None, "row space not closed"
            rows.append(tuple(coords))
        new_zeta[d] = tuple(rows)
    new_v = tuple(basis.coordinates(lr.v))
    new_w = tuple(_dot(vec, lr.w) for vec in basis_vectors)
    return LinRep(new_v, new_zeta, new_w)


def _transpose(lr: LinRep) -> LinRep:
    zt = {
        d: tuple(tuple(mat[i][j] for i in range(lr.rank)) for j in range(lr.rank))
        for d, mat in lr.zeta.items()
    }
    return LinRep(lr.w, zt, lr.v)


def minimize(lr: LinRep) -> LinRep:
    """Equivalent representation of minimal rank (two-sided reduction:
    first the reachability space of v, then the observability space of w)."""
    reduced = _forward_reduce(lr)
    if reduced.rank == 0:
        return reduced
    return _transpose(_forward_reduce(_transpose(reduced)))


def stack_difference(a: LinRep, b: LinRep) -> LinRep:
    """Representation of the pointwise difference a - b."""
    if a.digits != b.digits:
        raise LinRepError("digit alphabets differ")
    ra, rb = a.rank, b.rank
    zero_a = tuple(Fraction(0) for _ in range(ra))
    zero_b = tuple(Fraction(0) for _ in range(rb))
    zeta = {}
    for d in a.digits:
        rows = [tuple(a.zeta[d][i]) + zero_b for i in range(ra)]
        rows += [zero_a + tuple(b.zeta[d][i]) for i in range(rb)]
        zeta[d] = tuple(rows)
    v = tuple(a.v) + tuple(-x for x in b.v)
    w = tuple(a.w) + tuple(b.w)
    return LinRep(v, zeta, w)


def agree_upto(a: LinRep, b: LinRep, max_len: int) -> str | None:
    """Exhaustive agreement over all digit strings up to max_len; returns
    a disagreeing string, or None.  Exponential in max_len: meant for the
    small cross-checks of the rank-0 decision route."""
    if a.digits != b.digits:
        raise LinRepError("digit alphabets differ")
    stack = [""]
    while stack:
        s = stack.pop()
        if evaluate(a, s) != evaluate(b, s):
            return s
        if len(s) < max_len:
            stack.extend(s + d for d in a.digits)
    return None


def equal(a: LinRep, b: LinRep) -> bool:
    """Exact function equality on all digit strings, decided by reducing
    the stacked difference to rank 0."""
    return minimize(stack_difference(a, b)).rank == 0


# ---------------------------------------------------------------------------
# Serialization

def _format_entry(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def to_text(lr: LinRep, header: Iterable[str] = ()) -> str:
    lines = [f"# {h}" for h in header]
    lines.append(f"rank: {lr.rank}")
    lines.append("v: " + " ".join(_format_entry(x) for x in lr.v))
    for d in lr.digits:
        lines.append(f"zeta {d}:")
        for row in lr.zeta[d]:
            lines.append("  " + " ".join(_format_entry(x) for x in row))
    lines.append("w: " + " ".join(_format_entry(x) for x in lr.w))
    return "\n".join(lines) + "\n"


def from_text(text: str) -> LinRep:
    rank = None
    v = w = None
    zeta: dict[str, list] = {}
    pending: list | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("rank:"):
            rank = int(line.split(":", 1)[1])
        elif line.startswith("v:"):
            v = [Fraction(tok) for tok in line.split(":", 1)[1].split()]
            pending = None
        elif line.startswith("w:"):
            w = [Fraction(tok) for tok in line.split(":", 1)[1].split()]
            pending = None
        elif line.startswith("zeta"):
            digit = line.split()[1].rstrip(":")
            pending = zeta.setdefault(digit, [])
        else:
            if pending is None:
                raise LinRepError(f"unexpected line: {raw!r}")
            pending.append([Fraction(tok) for tok in line.split()])
    if rank is None or v is None or w is None or not zeta:
        raise LinRepError("missing rank/v/zeta/w section")
    lr = LinRep(v, zeta, w)
    if lr.rank != rank:
        raise LinRepError(f"declared rank {rank} but vectors have length {lr.rank}")
    return lr


def complexity_rank16() -> LinRep:
    """The shipped rank-16 representation of the factor-complexity
    sequence n -> 2n+1 read off the representation of n."""
    return from_text(assets.read_asset(COMPLEXITY_ASSET))
