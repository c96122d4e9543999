"""Stabilizer codes of Evenbly networks.

Every vertex carries the [[q,1,2]] seed code, every internal edge a Hadamard.
The boundary code is obtained at the stabilizer level: the Choi state of each
seed (code stabilizers on the planar legs, X-bar (x) X and Z-bar (x) Z on
planar legs plus the logical leg) is tensored together, each edge is
projected onto its Bell-type pair state, and the surviving stabilizer group
on the open legs is split into code stabilizers and logical pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .symplectic import (
    PauliString,
    compose,
    compose_times_i,
    gf2_rank,
    phase_exponent,
    symplectic_product,
)
from .tiling import BETA, SEED, Boundary, TilingGraph, build_tiling, geodesics_through

MAX_RATE = "max-rate"
ZERO_RATE = "zero-rate"
CONSTANT_RATE = "constant-rate"
LAYOUTS = (MAX_RATE, ZERO_RATE, CONSTANT_RATE)
BASES = ("X", "Y", "Z")


class ConstructionError(ValueError):
    """Raised when a contraction or gauge fixing violates code invariants."""


@dataclass(frozen=True)
class SeedCode:
    q: int
    generators: tuple[PauliString, ...]
    logical_x: PauliString
    logical_z: PauliString

    @property
    def logical_y(self) -> PauliString:
        return compose_times_i(self.logical_x, self.logical_z)

    def logical(self, basis: str) -> PauliString:
        return {"X": self.logical_x, "Z": self.logical_z, "Y": self.logical_y}[basis]


def seed_code(q: int, hadamard: bool = False) -> SeedCode:
    """The [[q,1,2]] seed: X^q and the ZIZ chain, X-bar=(IX)^(q/2), Z-bar=I..IZZ.

    ``hadamard=True`` returns the variant with the roles of X and Z exchanged.
    """
    if q % 2 or q < 4:
        raise ValueError(f"q must be even and >= 4, got {q}")
    gens = ["X" * q] + ["I" * (k - 2) + "ZIZ" + "I" * (q - k - 1) for k in range(2, q)]
    lx = "IX" * (q // 2)
    lz = "I" * (q - 2) + "ZZ"
    if hadamard:
        swap = str.maketrans("XZ", "ZX")
        gens = [g.translate(swap) for g in gens]
        lx, lz = lz.translate(swap), lx.translate(swap)
    return SeedCode(
        q,
        tuple(PauliString.from_str(g) for g in gens),
        PauliString.from_str(lx),
        PauliString.from_str(lz),
    )


@dataclass(frozen=True)
class GaugeSpec:
    layout: str = MAX_RATE
    gauge_basis: str = "Z"
    extra_gauged_layers: int = 0
    half_filled: bool = True

    def __post_init__(self) -> None:
        if self.layout not in LAYOUTS:
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.gauge_basis not in BASES:
            raise ValueError(f"unknown gauge basis {self.gauge_basis!r}")
        if self.extra_gauged_layers < 0:
            raise ValueError("extra_gauged_layers must be >= 0")
        if self.extra_gauged_layers and self.layout == MAX_RATE:
            raise ValueError("extra gauged layers need a zero-rate or constant-rate layout")

    def to_dict(self) -> dict:
        return {"layout": self.layout, "gauge_basis": self.gauge_basis,
                "extra_gauged_layers": self.extra_gauged_layers, "half_filled": self.half_filled}


@dataclass(frozen=True)
class StabilizerCode:
    """Boundary code with bookkeeping of which bulk qubits are logical or gauge.

    ``stabilizers`` lists the bare stabilizers first and then one gauge-fixing
    operator per entry of ``gauge_pairs`` (same order).
    """

    n: int
    stabilizers: tuple[PauliString, ...]
    logical_pairs: tuple[tuple[PauliString, PauliString], ...]
    gauge_pairs: tuple[tuple[PauliString, PauliString], ...] = ()
    logical_ids: tuple[int, ...] = ()
    gauge_ids: tuple[int, ...] = ()
    gauge_bases: tuple[str, ...] = ()
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        if not self.logical_ids:
            object.__setattr__(self, "logical_ids", tuple(range(len(self.logical_pairs))))
        if len(self.logical_ids) != len(self.logical_pairs):
            raise ValueError("logical_ids length mismatch")
        if len(self.gauge_ids) != len(self.gauge_pairs) or len(self.gauge_bases) != len(self.gauge_pairs):
            raise ValueError("gauge bookkeeping length mismatch")

    @property
    def k(self) -> int:
        return len(self.logical_pairs)

    @property
    def bare_stabilizers(self) -> tuple[PauliString, ...]:
        return self.stabilizers[: len(self.stabilizers) - len(self.gauge_pairs)]

    def pair_of(self, bulk: int) -> tuple[PauliString, PauliString]:
        if bulk in self.logical_ids:
            return self.logical_pairs[self.logical_ids.index(bulk)]
        if bulk in self.gauge_ids:
            return self.gauge_pairs[self.gauge_ids.index(bulk)]
        raise KeyError(f"bulk qubit {bulk} not in code")

    def logical_index(self, bulk: int) -> int:
        return self.logical_ids.index(bulk)

    def verify(self) -> None:
        """Check commutation relations and the qubit count; raise on failure."""
        stabs = self.stabilizers
        for s in stabs:
            if s.n != self.n:
                raise ConstructionError("stabilizer length mismatch")
        _check_commuting(stabs)
        pairs = list(self.logical_pairs)
        for i, (x, z) in enumerate(pairs):
            if symplectic_product(x, z) != 1:
                raise ConstructionError(f"logical pair {i} does not anticommute")
            for s in stabs:
                if symplectic_product(x, s) or symplectic_product(z, s):
                    raise ConstructionError(f"logical pair {i} does not commute with {s}")
            for j in range(i + 1, len(pairs)):
                for a in pairs[i]:
                    for b in pairs[j]:
                        if symplectic_product(a, b):
                            raise ConstructionError(f"logical pairs {i} and {j} interact")
        rank = gf2_rank(s.bsv for s in stabs)
        if rank != len(stabs):
            raise ConstructionError("stabilizers are not independent")
        if rank + len(pairs) != self.n:
            raise ConstructionError(f"rank {rank} + {len(pairs)} pairs != n = {self.n}")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "stabilizers": [str(s) for s in self.stabilizers],
            "logical_pairs": [[str(x), str(z)] for x, z in self.logical_pairs],
            "gauge_pairs": [[str(x), str(z)] for x, z in self.gauge_pairs],
            "logical_ids": list(self.logical_ids),
            "gauge_ids": list(self.gauge_ids),
            "gauge_bases": list(self.gauge_bases),
            "meta": self.meta,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> StabilizerCode:
        P = PauliString.from_str
        return cls(
            d["n"],
            tuple(P(s) for s in d["stabilizers"]),
            tuple((P(x), P(z)) for x, z in d["logical_pairs"]),
            tuple((P(x), P(z)) for x, z in d.get("gauge_pairs", [])),
            tuple(d.get("logical_ids", [])),
            tuple(d.get("gauge_ids", [])),
            tuple(d.get("gauge_bases", [])),
            d.get("meta", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> StabilizerCode:
        return cls.from_dict(json.loads(text))


def _check_commuting(ops: Sequence[PauliString]) -> None:
    for i, a in enumerate(ops):
        for b in ops[i + 1:]:
            if symplectic_product(a, b):
                raise ConstructionError(f"{a} and {b} anticommute")


def seed_as_code(q: int, hadamard: bool = False) -> StabilizerCode:
    s = seed_code(q, hadamard)
    return StabilizerCode(q, s.generators, ((s.logical_x, s.logical_z),), meta={"q": q})


# --- Choi-state contraction engine ---------------------------------------


class _Network:
    """Stabilizer rows ``[x, z, sign]`` of a product of Choi states on global qubits."""

    def __init__(self) -> None:
        self.rows: list[list[int]] = []

    def add_rows(self, ops: Iterable[tuple[PauliString, PauliString | None]],
                 leg_map: Sequence[int], log_map: Sequence[int]) -> None:
        """Add ``P (x) Q`` for each (P on code qubits, Q on logical legs or None)."""
        for p, lq in ops:
            x = z = 0
            for j, pos in enumerate(leg_map):
                x |= ((p.x >> j) & 1) << pos
                z |= ((p.z >> j) & 1) << pos
            sign = p.sign
            if lq is not None:
                for j, pos in enumerate(log_map):
                    x |= ((lq.x >> j) & 1) << pos
                    z |= ((lq.z >> j) & 1) << pos
                sign *= lq.sign
            self.rows.append([x, z, sign])

    def add_code(self, code: StabilizerCode, leg_map: Sequence[int], log_map: Sequence[int]) -> None:
        """Choi state of ``code`` with its logical and gauge pairs as input legs."""
        pairs = list(code.logical_pairs) + list(code.gauge_pairs)
        m = len(pairs)
        ops: list[tuple[PauliString, PauliString | None]] = [(s, None) for s in code.bare_stabilizers]
        for i, (lx, lz) in enumerate(pairs):
            ops.append((lx, PauliString(m, 1 << i, 0)))
            ops.append((lz, PauliString(m, 0, 1 << i)))
        self.add_rows(ops, leg_map, log_map)

    def contract(self, a: int, b: int, gate: str = "H") -> None:
        """Project qubits a, b onto the edge state and drop them."""
        rows = self.rows
        ma, mb = 1 << a, 1 << b
        if gate == "H":
            tests = ((lambda r: ((r[0] >> a) ^ (r[1] >> b)) & 1),
                     (lambda r: ((r[1] >> a) ^ (r[0] >> b)) & 1))
        elif gate == "I":
            tests = ((lambda r: ((r[0] >> a) ^ (r[0] >> b)) & 1),
                     (lambda r: ((r[1] >> a) ^ (r[1] >> b)) & 1))
        else:
            raise ValueError(f"unknown edge gate {gate!r}")
        for test in tests:
            piv = next((i for i, r in enumerate(rows) if test(r)), None)
            if piv is None:
                continue
            pr = rows.pop(piv)
            px, pz, ps = pr
            for r in rows:
                if test(r):
                    g = phase_exponent(r[0], r[1], px, pz)
                    if g & 1:
                        raise ConstructionError("non-commuting rows in network")
                    r[2] *= ps * (-1 if g == 2 else 1)
                    r[0] ^= px
                    r[1] ^= pz
        keep = []
        for r in rows:
            if gate == "I" and (r[0] & ma) and (r[1] & ma):
                # Y (x) Y has eigenvalue -1 on the Bell pair
                r[2] = -r[2]
            r[0] &= ~(ma | mb)
            r[1] &= ~(ma | mb)
            if r[0] or r[1]:
                keep.append(r)
            elif r[2] != 1:
                raise ConstructionError("contraction annihilates the state")
        self.rows = keep

    def extract(self, n: int, k: int) -> tuple[list[PauliString], list[tuple[PauliString, PauliString]]]:
        """Split rows on qubits [0, n) + logical legs [n, n+k) into code data."""
        total = n + k
        rows = [r[:] for r in self.rows]
        for r in rows:
            if (r[0] | r[1]) >> total:
                raise ConstructionError("uncontracted legs remain")
        low = (1 << n) - 1
        # reduced echelon form on the 2k logical columns only
        pivot_rows: dict[tuple[int, int], list[int]] = {}
        for j in range(k):
            bit = 1 << (n + j)
            for which in (0, 1):
                piv = next((i for i, r in enumerate(rows) if r[which] & bit), None)
                if piv is None:
                    raise ConstructionError(f"logical qubit {j} was destroyed by contraction")
                pr = rows.pop(piv)
                for r in rows:
                    if r[which] & bit:
                        _mul_into(r, pr)
                for other in pivot_rows.values():
                    if other[which] & bit:
                        _mul_into(other, pr)
                pivot_rows[(j, which)] = pr
        x_piv = [pivot_rows[(j, 0)] for j in range(k)]
        z_piv = [pivot_rows[(j, 1)] for j in range(k)]
        stabs = []
        for r in rows:
            if r[0] or r[1]:
                stabs.append(PauliString(n, r[0] & low, r[1] & low, r[2]))
            elif r[2] != 1:
                raise ConstructionError("inconsistent signs in network")
        stabs = _independent(stabs)
        pairs = []
        for j in range(k):
            xr, zr = x_piv[j], z_piv[j]
            xbit, zbit = 1 << (n + j), 1 << (n + j)
            if not (xr[0] & xbit) or (xr[1] & zbit) or (zr[0] & xbit) or not (zr[1] & zbit):
                raise ConstructionError("logical pivots are not in canonical form")
            if (xr[0] | xr[1] | zr[0] | zr[1]) >> n & ~(1 << j) & ((1 << k) - 1):
                raise ConstructionError("logical pivots mix bulk qubits")
            pairs.append((PauliString(n, xr[0] & low, xr[1] & low, xr[2]),
                          PauliString(n, zr[0] & low, zr[1] & low, zr[2])))
        return stabs, pairs


def _mul_into(r: list[int], pr: list[int]) -> None:
    g = phase_exponent(r[0], r[1], pr[0], pr[1])
    if g & 1:
        raise ConstructionError("non-commuting rows in network")
    r[2] *= pr[2] * (-1 if g == 2 else 1)
    r[0] ^= pr[0]
    r[1] ^= pr[1]


def _independent(stabs: list[PauliString]) -> list[PauliString]:
    """Drop dependent rows, checking that dependencies are sign-consistent."""
    basis: dict[int, tuple[int, int]] = {}
    out = []
    n = stabs[0].n if stabs else 0
    low = (1 << n) - 1
    for s in stabs:
        v, sign = s.bsv, s.sign
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                break
            bv, bs = basis[top]
            g = phase_exponent(v & low, v >> n, bv & low, bv >> n)
            sign *= bs * (-1 if g == 2 else 1)
            v ^= bv
        if v:
            basis[v.bit_length() - 1] = (v, sign)
            out.append(s)
        elif sign != 1:
            raise ConstructionError("stabilizer group contains -I")
    return out


def conjoin(code_a: StabilizerCode, leg_a: int, code_b: StabilizerCode, leg_b: int,
            edge_gate: str = "H") -> StabilizerCode:
    """Contract physical qubit ``leg_a`` of A with ``leg_b`` of B through the edge gate.

    The result acts on A's remaining qubits followed by B's remaining qubits.
    Logical pairs of A come first, then those of B; gauge pairs likewise.
    Gauge-fixing operators are re-derived from the stored bases.
    """
    if not (0 <= leg_a < code_a.n and 0 <= leg_b < code_b.n):
        raise ValueError("leg index out of range")
    na, nb = code_a.n, code_b.n
    n = na + nb - 2
    ka = code_a.k + len(code_a.gauge_pairs)
    kb = code_b.k + len(code_b.gauge_pairs)
    # global layout: open qubits, then logical legs, then the two contracted legs
    open_a = [j for j in range(na) if j != leg_a]
    open_b = [j for j in range(nb) if j != leg_b]
    map_a = [0] * na
    map_b = [0] * nb
    for i, j in enumerate(open_a):
        map_a[j] = i
    for i, j in enumerate(open_b):
        map_b[j] = len(open_a) + i
    ca, cb = n + ka + kb, n + ka + kb + 1
    map_a[leg_a], map_b[leg_b] = ca, cb
    net = _Network()
    net.add_code(code_a, map_a, list(range(n, n + ka)))
    net.add_code(code_b, map_b, list(range(n + ka, n + ka + kb)))
    net.contract(ca, cb, edge_gate)
    stabs, pairs = net.extract(n, ka + kb)
    a_log = list(range(code_a.k))
    a_gauge = list(range(code_a.k, ka))
    b_log = list(range(ka, ka + code_b.k))
    b_gauge = list(range(ka + code_b.k, ka + kb))
    logical_pairs = tuple(pairs[i] for i in a_log + b_log)
    gauge_pairs = tuple(pairs[i] for i in a_gauge + b_gauge)
    bases = tuple(code_a.gauge_bases) + tuple(code_b.gauge_bases)
    shift = max(code_a.logical_ids + code_a.gauge_ids, default=-1) + 1
    logical_ids = tuple(code_a.logical_ids) + tuple(i + shift for i in code_b.logical_ids)
    gauge_ids = tuple(code_a.gauge_ids) + tuple(i + shift for i in code_b.gauge_ids)
    fixers = [_gauge_operator(x, z, b) for (x, z), b in zip(gauge_pairs, bases)]
    code = StabilizerCode(n, tuple(stabs) + tuple(fixers), logical_pairs, gauge_pairs,
                          logical_ids, gauge_ids, bases)
    code.verify()
    return code


def _gauge_operator(x: PauliString, z: PauliString, basis: str) -> PauliString:
    if basis == "X":
        return x
    if basis == "Z":
        return z
    return compose_times_i(x, z)


def gauge_fix(code: StabilizerCode, qubits: Iterable[int], basis: str) -> StabilizerCode:
    """Move the listed bulk qubits from logical to gauge, fixing them to +1 of X/Y/Z-bar."""
    if basis not in BASES:
        raise ValueError(f"unknown gauge basis {basis!r}")
    chosen = set(qubits)
    missing = chosen - set(code.logical_ids)
    if missing:
        raise ValueError(f"bulk qubits {sorted(missing)} are not ungauged logicals")
    if not chosen:
        return code
    keep_ids, keep_pairs = [], []
    new_ids, new_pairs = [], []
    for bid, pair in zip(code.logical_ids, code.logical_pairs):
        if bid in chosen:
            new_ids.append(bid)
            new_pairs.append(pair)
        else:
            keep_ids.append(bid)
            keep_pairs.append(pair)
    fixers = [_gauge_operator(x, z, basis) for x, z in new_pairs]
    for f in fixers:
        for s in code.stabilizers:
            if symplectic_product(f, s):
                raise ConstructionError(f"gauge operator {f} anticommutes with {s}")
    out = StabilizerCode(
        code.n,
        tuple(code.stabilizers) + tuple(fixers),
        tuple(keep_pairs),
        tuple(code.gauge_pairs) + tuple(new_pairs),
        tuple(keep_ids),
        tuple(code.gauge_ids) + tuple(new_ids),
        tuple(code.gauge_bases) + (basis,) * len(new_ids),
        dict(code.meta),
    )
    out.verify()
    return out


def build_max_rate_code(g: TilingGraph) -> StabilizerCode:
    """Contract the whole network with every bulk qubit logical."""
    q = g.q
    n, k = g.n_boundary, len(g.vertices)
    seed = seed_code(q)
    seed_sc = StabilizerCode(q, seed.generators, ((seed.logical_x, seed.logical_z),))
    bond_pos: dict[tuple[int, int], int] = {}
    nxt = n + k
    for u, a, w, b in g.bonds():
        bond_pos[(u, a)] = nxt
        bond_pos[(w, b)] = nxt + 1
        nxt += 2
    net = _Network()
    for v in g.vertices:
        leg_map = []
        for j in range(q):
            leg = v.legs[j]
            if isinstance(leg, Boundary):
                leg_map.append(leg.qubit)
            else:
                leg_map.append(bond_pos[(v.id, j)])
        net.add_code(seed_sc, leg_map, [n + v.id])
    # contract layer by layer outward so intermediate rows stay local
    order = sorted(g.bonds(), key=lambda t: (max(g.vertices[t[0]].layer, g.vertices[t[2]].layer), t))
    for u, a, w, b in order:
        net.contract(bond_pos[(u, a)], bond_pos[(w, b)], "H")
    stabs, pairs = net.extract(n, k)
    code = StabilizerCode(n, tuple(stabs), tuple(pairs), logical_ids=tuple(range(k)),
                          meta={"p": g.p, "q": g.q, "layers": g.n_layers})
    code.verify()
    return code


def constant_rate_selection(g: TilingGraph, extra_gauged_layers: int = 0, half_filled: bool = True,
                            offset: int = 0) -> set[int]:
    """Bulk qubits kept logical in the constant-rate layout.

    The centre is kept, and in every layer up to ``n_layers - extra_gauged_layers``
    the beta vertices at ring positions ``offset, offset + s, ...`` among the
    betas of that layer, with stride s = 2 (every second beta) or 4 when
    half of those are gauge-fixed again.
    """
    stride = 4 if half_filled else 2
    last = g.n_layers - extra_gauged_layers
    keep = {g.layers[0][0]}
    for layer in g.layers[1:last + 1]:
        betas = [v for v in layer if g.vertices[v].kind == BETA]
        keep.update(betas[offset % stride::stride])
    return keep


def geodesic_conflicts(g: TilingGraph, keep: set[int]) -> dict[int, list[int]]:
    """For each kept vertex, the other kept vertices lying on its geodesics."""
    out = {}
    for v in sorted(keep):
        hits = sorted({w for path in geodesics_through(g, v) for w in path if w in keep and w != v})
        if hits:
            out[v] = hits
    return out


def kept_bulk(g: TilingGraph, spec: GaugeSpec) -> set[int]:
    if spec.layout == MAX_RATE:
        return set(range(len(g.vertices)))
    if spec.layout == ZERO_RATE:
        return {g.layers[0][0]}
    return constant_rate_selection(g, spec.extra_gauged_layers, spec.half_filled)


def build_evenbly_code(g: TilingGraph, spec: GaugeSpec | None = None) -> StabilizerCode:
    """Boundary code of the network on ``g``, gauge-fixed according to ``spec``.

    For ``extra_gauged_layers = e`` the tiling must already contain those
    outer layers; only the inner ``n_layers - e`` layers can hold logicals.
    """
    spec = spec or GaugeSpec()
    if spec.extra_gauged_layers > g.n_layers:
        raise ValueError("more extra gauged layers than layers")
    code = build_max_rate_code(g)
    keep = kept_bulk(g, spec)
    gauged = [b for b in code.logical_ids if b not in keep]
    code = gauge_fix(code, gauged, spec.gauge_basis) if gauged else code
    meta = dict(code.meta)
    meta.update(spec.to_dict())
    return StabilizerCode(code.n, code.stabilizers, code.logical_pairs, code.gauge_pairs,
                          code.logical_ids, code.gauge_ids, code.gauge_bases, meta)


def build_code(p: int, q: int, layers: int, spec: GaugeSpec | None = None) -> tuple[TilingGraph, StabilizerCode]:
    spec = spec or GaugeSpec()
    g = build_tiling(p, q, layers + spec.extra_gauged_layers)
    return g, build_evenbly_code(g, spec)


def stabilizer_sign(stabilizers: Sequence[PauliString], op: PauliString) -> int | None:
    """+1 or -1 if ``op`` or ``-op`` is in the group, None if neither."""
    n = op.n
    low = (1 << n) - 1
    basis: dict[int, tuple[int, int]] = {}
    for s in stabilizers:
        v, sign = s.bsv, s.sign
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                break
            bv, bs = basis[top]
            gexp = phase_exponent(v & low, v >> n, bv & low, bv >> n)
            sign *= bs * (-1 if gexp == 2 else 1)
            v ^= bv
        if v:
            basis[v.bit_length() - 1] = (v, sign)
    v, sign = op.bsv, op.sign
    while v:
        top = v.bit_length() - 1
        if top not in basis:
            return None
        bv, bs = basis[top]
        gexp = phase_exponent(v & low, v >> n, bv & low, bv >> n)
        sign *= bs * (-1 if gexp == 2 else 1)
        v ^= bv
    return sign


# --- operator pushing -----------------------------------------------------

_H = {"I": "I", "X": "Z", "Z": "X", "Y": "Y"}
_PAULI_OF = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}


def _span(ops: Sequence[PauliString]) -> list[PauliString]:
    out = [PauliString(ops[0].n)] if ops else []
    for op in ops:
        out = out + [PauliString(op.n, o.x ^ op.x, o.z ^ op.z) for o in out]
    return out


def push_logical(g: TilingGraph, bulk: int, op: str, gauges: dict[int, str] | None = None,
                 code: StabilizerCode | None = None) -> PauliString:
    """Boundary representative of X-bar/Z-bar of ``bulk`` found by pushing outward.

    The operator is pushed layer by layer.  Within a layer each vertex may be
    multiplied by its seed stabilizers (and by its own fixed gauge operator if
    listed in ``gauges``); ring edges carry a Pauli and its Hadamard image.
    A dynamic program around the ring picks the choice of least weight on the
    outgoing legs, keeping inward legs equal to what arrives from the parent
    layer.  If ``code`` is given, the sign is fixed so that the result equals
    the code's logical up to stabilizers.
    """
    op = op.upper()
    if op not in ("X", "Z"):
        raise ValueError("op must be 'X' or 'Z'")
    gauges = gauges or {}
    q = g.q
    seed = seed_code(q)
    start = g.vertices[bulk]
    # Pauli character currently sitting on the inward legs of each vertex
    incoming: dict[tuple[int, int], str] = {}
    boundary = ["I"] * g.n_boundary
    for layer_idx in range(start.layer, g.n_layers + 1):
        layer = g.layers[layer_idx]
        groups = []
        for vid in layer:
            gens = list(seed.generators)
            if vid in gauges:
                gens.append(seed.logical(gauges[vid]))
            e = seed.logical(op) if vid == bulk else PauliString(q)
            groups.append([PauliString(q, e.x ^ s.x, e.z ^ s.z) for s in _span(gens)])
        choice = _ring_dp(g, layer, groups, incoming, layer_idx == 0)
        incoming = {}
        for vid, elem in zip(layer, choice):
            v = g.vertices[vid]
            for j in v.out_legs:
                ch = elem.on(j)
                leg = v.legs[j]
                if isinstance(leg, Boundary):
                    boundary[leg.qubit] = ch
                elif ch != "I":
                    incoming[(leg.peer, leg.peer_leg)] = _H[ch]
    if any(boundary[i] == "?" for i in range(len(boundary))):
        raise ConstructionError("pushing failed")
    result = PauliString.from_str("".join(boundary))
    if code is not None:
        ref = code.pair_of(bulk)[0 if op == "X" else 1]
        sign = stabilizer_sign(code.stabilizers, compose(result, ref))
        if sign is None:
            raise ConstructionError("pushed operator is not equivalent to the code logical")
        if sign == -1:
            result = result.negate()
    return result


def _ring_dp(g: TilingGraph, layer: list[int], groups, incoming, is_seed_layer: bool):
    """Pick one element per vertex: inward legs match ``incoming``, ring edges agree."""
    best_by_vertex = []
    for vid, elems in zip(layer, groups):
        v = g.vertices[vid]
        table: dict[tuple[str, str], tuple[int, PauliString]] = {}
        for el in elems:
            if any(el.on(j) != incoming.get((vid, j), "I") for j in v.in_legs):
                continue
            if v.kind == SEED:
                key = ("I", "I")
            else:
                a, b = v.ring_legs
                key = (el.on(a), el.on(b))
            w = sum(el.on(j) != "I" for j in v.out_legs)
            if key not in table or w < table[key][0]:
                table[key] = (w, el)
        if not table:
            raise ConstructionError(f"vertex {vid} cannot absorb its inward operator")
        best_by_vertex.append(table)
    if is_seed_layer:
        return [min(t.values(), key=lambda t: t[0])[1] for t in best_by_vertex]
    m = len(layer)
    best_total = None
    paulis = "IXYZ"
    for closing in paulis:
        # closing: Pauli on the last vertex's next leg; first vertex's prev gets its image
        cost = {_H[closing]: (0, [])}
        for i in range(m):
            table = best_by_vertex[i]
            new = {}
            for prev_in, (c0, path) in cost.items():
                for (a, b), (w, el) in table.items():
                    if a != prev_in:
                        continue
                    if i == m - 1 and b != closing:
                        continue
                    nxt = _H[b]
                    c = c0 + w
                    if nxt not in new or c < new[nxt][0]:
                        new[nxt] = (c, path + [el])
            cost = new
            if not cost:
                break
        for c, path in cost.values():
            if best_total is None or c < best_total[0]:
                best_total = (c, path)
    if best_total is None:
        raise ConstructionError("no consistent ring assignment")
    return best_total[1]
