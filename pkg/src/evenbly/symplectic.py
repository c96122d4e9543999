"""Bit-packed Pauli operators and GF(2) symplectic linear algebra.

A Pauli string on ``n`` qubits is stored as two Python integers used as bit
masks (``x`` and ``z``) plus a real sign.  Bit ``j`` of ``x`` (``z``) is the X
(Z) component on qubit ``j``.  The pair ``x=1, z=1`` denotes the Hermitian
operator Y, so every operator handled here is Hermitian and carries a sign in
{+1, -1}.  Products that would pick up a phase of +-i are rejected.

Binary symplectic vectors use the ``[x | z]`` convention: column ``c < n`` is
the X bit of qubit ``c`` and column ``n + c`` is its Z bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_CHARS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1), "_": (0, 0)}


class PhaseError(ValueError):
    """Raised when a product of Paulis would carry an imaginary phase."""


class CosetTooLarge(ValueError):
    """Raised when an exact coset search would exceed the configured cap."""


def phase_exponent(x1: int, z1: int, x2: int, z2: int) -> int:
    """Power of i picked up by the product ``P1 * P2`` of Hermitian Paulis."""
    y1, y2 = x1 & z1, x2 & z2
    xo1, xo2 = x1 & ~z1, x2 & ~z2
    zo1, zo2 = z1 & ~x1, z2 & ~x2
    plus = ((y1 & zo2) | (xo1 & y2) | (zo1 & xo2)).bit_count()
    minus = ((y1 & xo2) | (xo1 & zo2) | (zo1 & y2)).bit_count()
    return (plus - minus) % 4


@dataclass(frozen=True)
class PauliString:
    n: int
    x: int = 0
    z: int = 0
    sign: int = 1

    def __post_init__(self) -> None:
        limit = 1 << self.n
        if self.x < 0 or self.z < 0 or self.x >= limit or self.z >= limit:
            raise ValueError(f"masks do not fit in {self.n} qubits")
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n)

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        """Parse ``"XIZY"`` with an optional leading ``+``/``-``."""
        text = text.strip().replace("−", "-")
        sign = 1
        if text[:1] in "+-" and text:
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        x = z = 0
        for j, ch in enumerate(text.upper()):
            if ch not in _BITS:
                raise ValueError(f"invalid Pauli character {ch!r}")
            bx, bz = _BITS[ch]
            x |= bx << j
            z |= bz << j
        return cls(len(text), x, z, sign)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str) -> PauliString:
        bx, bz = _BITS[kind]
        return cls(n, bx << qubit, bz << qubit)

    @classmethod
    def from_support(cls, n: int, qubits: Iterable[int], kind: str) -> PauliString:
        bx, bz = _BITS[kind]
        mask = 0
        for j in qubits:
            mask |= 1 << j
        return cls(n, mask if bx else 0, mask if bz else 0)

    def __str__(self) -> str:
        body = "".join(_CHARS[(self.x >> j) & 1, (self.z >> j) & 1] for j in range(self.n))
        return ("-" if self.sign < 0 else "") + body

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __mul__(self, other: PauliString) -> PauliString:
        return compose(self, other)

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support(self) -> list[int]:
        mask = self.x | self.z
        return [j for j in range(self.n) if (mask >> j) & 1]

    @property
    def bsv(self) -> int:
        """Binary symplectic vector packed as ``x | z << n``."""
        return self.x | (self.z << self.n)

    @classmethod
    def from_bsv(cls, n: int, v: int, sign: int = 1) -> PauliString:
        mask = (1 << n) - 1
        return cls(n, v & mask, v >> n, sign)

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def unsigned(self) -> PauliString:
        return self if self.sign == 1 else PauliString(self.n, self.x, self.z)

    def negate(self) -> PauliString:
        return PauliString(self.n, self.x, self.z, -self.sign)

    def commutes_with(self, other: PauliString) -> bool:
        return symplectic_product(self, other) == 0

    def on(self, qubit: int) -> str:
        return _CHARS[(self.x >> qubit) & 1, (self.z >> qubit) & 1]

    def hadamard(self, qubits: Iterable[int] | None = None) -> PauliString:
        """Conjugate by Hadamard on ``qubits`` (all qubits by default).

        H X H = Z, H Z H = X and H Y H = -Y, so the sign flips once per Y.
        """
        mask = (1 << self.n) - 1
        if qubits is not None:
            mask = 0
            for j in qubits:
                mask |= 1 << j
        x, z = self.x, self.z
        nx = (x & ~mask) | (z & mask)
        nz = (z & ~mask) | (x & mask)
        flips = (x & z & mask).bit_count()
        return PauliString(self.n, nx, nz, self.sign * (-1 if flips & 1 else 1))

    def to_bsv_array(self) -> np.ndarray:
        out = np.zeros(2 * self.n, dtype=np.uint8)
        for j in range(self.n):
            out[j] = (self.x >> j) & 1
            out[self.n + j] = (self.z >> j) & 1
        return out


def _check_lengths(a: PauliString, b: PauliString) -> None:
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} vs {b.n}")


def compose(a: PauliString, b: PauliString) -> PauliString:
    """Return the product ``a * b``; raises PhaseError if it is not Hermitian."""
    _check_lengths(a, b)
    g = phase_exponent(a.x, a.z, b.x, b.z)
    if g & 1:
        raise PhaseError(f"{a} * {b} has an imaginary phase")
    sign = a.sign * b.sign * (-1 if g == 2 else 1)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z, sign)


def compose_times_i(a: PauliString, b: PauliString) -> PauliString:
    """Return ``i * a * b`` for anticommuting ``a``, ``b`` (e.g. Y = iXZ)."""
    _check_lengths(a, b)
    g = (phase_exponent(a.x, a.z, b.x, b.z) + 1) % 4
    if g & 1:
        raise PhaseError(f"i * {a} * {b} is not Hermitian")
    sign = a.sign * b.sign * (-1 if g == 2 else 1)
    return PauliString(a.n, a.x ^ b.x, a.z ^ b.z, sign)


def symplectic_product(a: PauliString, b: PauliString) -> int:
    """0 if ``a`` and ``b`` commute, 1 otherwise."""
    _check_lengths(a, b)
    return ((a.x & b.z).bit_count() + (a.z & b.x).bit_count()) & 1


def sp_bits(x1: int, z1: int, x2: int, z2: int) -> int:
    return ((x1 & z2).bit_count() + (z1 & x2).bit_count()) & 1


@dataclass(frozen=True)
class SymplecticMatrix:
    """An ordered list of Pauli rows on a common number of qubits."""

    n: int
    rows: tuple[PauliString, ...] = ()

    def __post_init__(self) -> None:
        for r in self.rows:
            if r.n != self.n:
                raise ValueError("all rows must act on the same number of qubits")

    @classmethod
    def from_rows(cls, rows: Sequence[PauliString], n: int | None = None) -> SymplecticMatrix:
        if n is None:
            if not rows:
                raise ValueError("cannot infer n from an empty row list")
            n = rows[0].n
        return cls(n, tuple(rows))

    @classmethod
    def from_strings(cls, rows: Sequence[str]) -> SymplecticMatrix:
        return cls.from_rows([PauliString.from_str(r) for r in rows])

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    @property
    def rank(self) -> int:
        return gf2_rank([r.bsv for r in self.rows])

    def to_array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.stack([r.to_bsv_array() for r in self.rows])

    def __str__(self) -> str:
        return "\n".join(str(r) for r in self.rows)


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank over GF(2) of integers used as bit vectors."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def in_span(v: int, vectors: Iterable[int]) -> bool:
    basis: dict[int, int] = {}
    for w in vectors:
        while w:
            top = w.bit_length() - 1
            if top in basis:
                w ^= basis[top]
            else:
                basis[top] = w
                break
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return False
        v ^= basis[top]
    return True


def gf2_nullspace(rows: Iterable[int], n: int) -> list[int]:
    """Basis of ``{v : popcount(r & v) even for every r}`` over n bits."""
    piv: dict[int, int] = {}  # pivot column -> fully reduced row
    for r in rows:
        for c, pr in piv.items():
            if (r >> c) & 1:
                r ^= pr
        if not r:
            continue
        c = r.bit_length() - 1
        for c2 in piv:
            if (piv[c2] >> c) & 1:
                piv[c2] ^= r
        piv[c] = r
    basis = []
    for f in range(n):
        if f in piv:
            continue
        v = 1 << f
        for c, pr in piv.items():
            if (pr >> f) & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def rref(
    m: SymplecticMatrix,
    column_order: Sequence[int] | None = None,
    track_signs: bool = False,
) -> tuple[SymplecticMatrix, list[int]]:
    """Reduced row-echelon form over GF(2) under ``column_order``.

    Columns follow the ``[x | z]`` convention.  Zero rows are dropped, so the
    result has exactly ``rank`` rows, the i-th one with its pivot at
    ``pivots[i]``.  With ``track_signs`` the row operations are true Pauli
    products (all rows must commute); otherwise signs are discarded.
    """
    n = m.n
    if column_order is None:
        column_order = range(2 * n)
    elif sorted(column_order) != list(range(2 * n)):
        raise ValueError("column_order must be a permutation of the 2n columns")
    rows = [r.bsv for r in m.rows]
    signs = [r.sign if track_signs else 1 for r in m.rows]
    low = (1 << n) - 1
    pivots: list[int] = []
    top = 0
    for col in column_order:
        bit = 1 << col
        piv = next((i for i in range(top, len(rows)) if rows[i] & bit), None)
        if piv is None:
            continue
        rows[top], rows[piv] = rows[piv], rows[top]
        signs[top], signs[piv] = signs[piv], signs[top]
        pr = rows[top]
        for i in range(len(rows)):
            if i != top and rows[i] & bit:
                if track_signs:
                    g = phase_exponent(rows[i] & low, rows[i] >> n, pr & low, pr >> n)
                    if g & 1:
                        raise PhaseError("rref with track_signs needs commuting rows")
                    signs[i] *= signs[top] * (-1 if g == 2 else 1)
                rows[i] ^= pr
        pivots.append(col)
        top += 1
        if top == len(rows):
            break
    out = [PauliString.from_bsv(n, rows[i], signs[i]) for i in range(top)]
    return SymplecticMatrix(n, tuple(out)), pivots


def destabilizers(stabilizers: Sequence[PauliString]) -> list[PauliString]:
    """One partner per independent stabilizer, anticommuting only with it.

    Solves ``S . T^T = I`` for the symplectic form: row i of the result has
    symplectic product 1 with stabilizer i and 0 with every other one.
    """
    if not stabilizers:
        return []
    n = stabilizers[0].n
    m = len(stabilizers)
    # swapping x and z turns the symplectic product into a plain dot product
    work = [(s.z | (s.x << n)) | (1 << (2 * n + i)) for i, s in enumerate(stabilizers)]
    col_mask = (1 << (2 * n)) - 1
    pivot_cols: list[int] = []
    top = 0
    for col in range(2 * n):
        bit = 1 << col
        piv = next((i for i in range(top, m) if work[i] & bit), None)
        if piv is None:
            continue
        work[top], work[piv] = work[piv], work[top]
        for i in range(m):
            if i != top and work[i] & bit:
                work[i] ^= work[top]
        pivot_cols.append(col)
        top += 1
    if top != m:
        raise ValueError("stabilizers are not independent")
    out = []
    for i in range(m):
        v = 0
        for r, col in enumerate(pivot_cols):
            if (work[r] >> (2 * n + i)) & 1:
                v |= 1 << col
        out.append(PauliString.from_bsv(n, v & col_mask))
    return out


def _echelon_by_qubit(vectors: list[int], n: int, order: Sequence[int]) -> list[tuple[int, list[int]]]:
    """Echelon form grouping pivots by qubit, scanning ``order`` from its end.

    Returns ``[(position, rows), ...]`` sorted by descending position, where
    ``position`` indexes ``order`` and every row in the group is supported on
    qubits ``order[:position + 1]`` only.
    """
    rows = [v for v in vectors if v]
    groups: list[tuple[int, list[int]]] = []
    for pos in range(n - 1, -1, -1):
        q = order[pos]
        picked = []
        for bit in (1 << q, 1 << (n + q)):
            piv = next((i for i, r in enumerate(rows) if r & bit), None)
            if piv is None:
                continue
            pr = rows.pop(piv)
            rows = [r ^ pr if r & bit else r for r in rows]
            picked = [p ^ pr if p & bit else p for p in picked]
            picked.append(pr)
        if picked:
            groups.append((pos, picked))
        rows = [r for r in rows if r]
        if not rows:
            break
    return groups


def min_weight_coset_element(
    e: PauliString,
    generators: SymplecticMatrix | Sequence[PauliString],
    max_free: int = 30,
    order: Sequence[int] | None = None,
) -> PauliString:
    """Minimum-weight element of the coset ``e * span(generators)``.

    Exact branch-and-bound over GF(2) combinations.  Generators are put into
    an echelon form whose pivots are grouped by qubit; deciding one group
    fixes one qubit for good, so the weight on already-fixed qubits is a valid
    lower bound.  The returned operator is unsigned.
    """
    gens = list(generators)
    n = e.n
    for g in gens:
        _check_lengths(e, g)
    if order is None:
        order = list(range(n))
    groups = _echelon_by_qubit([g.bsv for g in gens], n, order)
    free = sum(len(rows) for _, rows in groups)
    if free > max_free:
        raise CosetTooLarge(f"coset has {free} free generators (cap {max_free})")
    best_v, best_w = _branch_and_bound(e.bsv, n, order, groups)
    return PauliString.from_bsv(n, best_v)


def _branch_and_bound(v0: int, n: int, order: Sequence[int], groups: list[tuple[int, list[int]]]):
    low = (1 << n) - 1

    def wt(v: int) -> int:
        return ((v & low) | (v >> n)).bit_count()

    # masks of qubits at positions >= p (fixed once group at p is decided)
    fixed_from = [0] * (n + 1)
    for p in range(n - 1, -1, -1):
        fixed_from[p] = fixed_from[p + 1] | (1 << order[p])
    options = []
    for pos, rows in groups:
        combos = [0]
        for r in rows:
            combos = combos + [c ^ r for c in combos]
        options.append((fixed_from[pos], combos))

    best_v = v0
    best_w = wt(v0)
    depth_total = len(options)

    def search(v: int, d: int) -> None:
        nonlocal best_v, best_w
        if d == depth_total:
            w = wt(v)
            if w < best_w:
                best_v, best_w = v, w
            return
        mask, combos = options[d]
        children = []
        for c in combos:
            u = v ^ c
            lb = (((u & low) | (u >> n)) & mask).bit_count()
            if lb < best_w:
                children.append((lb, u))
        children.sort(key=lambda t: t[0])
        for lb, u in children:
            if lb >= best_w:
                break
            search(u, d + 1)

    search(v0, 0)
    return best_v, best_w


def coset_elements(e: PauliString, generators: Sequence[PauliString]):
    """Yield every element ``e * g`` for g in the span (with repetition if dependent)."""
    k = len(generators)
    vs = [g.bsv for g in generators]
    v = e.bsv
    # Gray-code walk
    yield PauliString.from_bsv(e.n, v)
    for i in range(1, 1 << k):
        bit = (i & -i).bit_length() - 1
        v ^= vs[bit]
        yield PauliString.from_bsv(e.n, v)


def min_weight_exhaustive(e: PauliString, generators: Sequence[PauliString]) -> PauliString:
    """Reference enumeration of the whole coset; for testing only."""
    return min(coset_elements(e, generators), key=lambda p: p.weight)
