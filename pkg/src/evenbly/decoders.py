"""Erasure and Pauli decoders for Evenbly codes.

Three decoders are provided:

* ``erasure_decodable``: optimal erasure decision by GF(2) elimination.
* ``greedy_decode``: wedge growth on the tensor network by local pushing
  steps on single tensors and adjacent pairs.
* ``pauli_decode``: syndrome, pure error from destabilizers, then an exact
  minimum-weight search over the stabilizer and logical cosets.

Decoders are built once per code (``ErasureDecoder``, ``GreedyDecoder``,
``PauliDecoder``) and then called many times; the module-level functions are
convenience wrappers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .codegen import StabilizerCode, seed_code
from .symplectic import (
    CosetTooLarge,
    PauliString,
    destabilizers,
    gf2_nullspace,
    min_weight_coset_element,
    sp_bits,
    symplectic_product,
)
from .tiling import Bond, TilingGraph


@dataclass(frozen=True)
class ErasurePattern:
    n: int
    erased: frozenset = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "erased", frozenset(self.erased))
        if any(not 0 <= j < self.n for j in self.erased):
            raise ValueError("erased qubit out of range")

    @classmethod
    def from_mask(cls, n: int, mask: int) -> ErasurePattern:
        return cls(n, frozenset(j for j in range(n) if (mask >> j) & 1))

    @classmethod
    def from_str(cls, text: str) -> ErasurePattern:
        """``"0110"``-style string (1 = erased) or comma-separated indices ``n:0,3``."""
        text = text.strip()
        if ":" in text:
            n, _, idx = text.partition(":")
            return cls(int(n), frozenset(int(i) for i in idx.split(",") if i.strip()))
        return cls(len(text), frozenset(j for j, ch in enumerate(text) if ch == "1"))

    @property
    def mask(self) -> int:
        m = 0
        for j in self.erased:
            m |= 1 << j
        return m

    @property
    def weight(self) -> int:
        return len(self.erased)


@dataclass
class DecodeOutcome:
    success: bool
    correction: PauliString | None = None
    detail: dict = field(default_factory=dict)
    tie: bool = False

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "correction": None if self.correction is None else str(self.correction),
            "detail": self.detail,
            "tie": self.tie,
        }


def _resolve_targets(code: StabilizerCode, targets: Iterable[int] | None) -> list[int]:
    """Targets are bulk qubit ids; default is every logical qubit of the code."""
    if targets is None:
        return list(code.logical_ids)
    out = list(targets)
    for t in out:
        if t not in code.logical_ids:
            raise ValueError(f"bulk qubit {t} is not an ungauged logical of the code")
    return out


# --- optimal erasure decoding ---------------------------------------------


class ErasureDecoder:
    """Erasure correctability of target logicals by elimination.

    The rows are the stabilizers (including gauge-fixing operators) and every
    logical pair, each tagged with bits recording anticommutation with the
    target logicals.  An erasure E fails iff some product of rows is supported
    inside E and carries a nonzero tag.
    """

    def __init__(self, code: StabilizerCode, targets: Iterable[int] | None = None):
        self.code = code
        self.n = code.n
        self.targets = _resolve_targets(code, targets)
        n = self.n
        tpairs = [code.pair_of(t) for t in self.targets]
        self.tag_shift = 2 * n
        rows = []
        ops = list(code.stabilizers) + [op for pair in code.logical_pairs for op in pair]
        for op in ops:
            tag = 0
            for i, (tx, tz) in enumerate(tpairs):
                tag |= symplectic_product(op, tx) << (2 * i)
                tag |= symplectic_product(op, tz) << (2 * i + 1)
            rows.append(op.bsv | (tag << self.tag_shift))
        self.rows = rows

    def _eliminate(self, rows: list[int], qubit: int) -> list[int]:
        for bit in (1 << qubit, 1 << (self.n + qubit)):
            piv = None
            for i, r in enumerate(rows):
                if r & bit:
                    piv = i
                    break
            if piv is None:
                continue
            pr = rows[piv]
            rows = [r ^ pr if r & bit else r for j, r in enumerate(rows) if j != piv]
        return rows

    def decodable(self, erased_mask: int) -> bool:
        rows = list(self.rows)
        for q in range(self.n):
            if not (erased_mask >> q) & 1:
                rows = self._eliminate(rows, q)
        shift = self.tag_shift
        return not any(r >> shift for r in rows)

    def failure_weight(self, perm: Sequence[int]) -> int:
        """Smallest w such that erasing ``perm[:w]`` fails (monotone in w)."""
        rows = list(self.rows)
        shift = self.tag_shift
        n = self.n
        if not any(r >> shift for r in rows):
            return n + 1
        for j in range(n - 1, -1, -1):
            rows = self._eliminate(rows, perm[j])
            if not any(r >> shift for r in rows):
                return j + 1
        return 0

    def witness(self, erased_mask: int) -> PauliString | None:
        """A normalizer element inside the erasure acting on a target, if any."""
        rows = list(self.rows)
        for q in range(self.n):
            if not (erased_mask >> q) & 1:
                rows = self._eliminate(rows, q)
        for r in rows:
            if r >> self.tag_shift:
                return PauliString.from_bsv(self.n, r & ((1 << (2 * self.n)) - 1))
        return None


def erasure_decodable(code: StabilizerCode, e: ErasurePattern, targets: Iterable[int] | None = None) -> DecodeOutcome:
    dec = ErasureDecoder(code, targets)
    if e.n != code.n:
        raise ValueError("erasure pattern length does not match the code")
    w = dec.witness(e.mask)
    if w is None:
        return DecodeOutcome(True, detail={"decoder": "gaussian"})
    return DecodeOutcome(False, detail={"decoder": "gaussian", "witness": str(w)})


# --- greedy reconstruction --------------------------------------------------

# single-qubit Paulis indexed x + 2z; Pauli subgroups as 4-bit masks over I, X, Z, Y
FULL = 0b1111
TRIVIAL = 0b0001
_PAULI_IDX = {"I": 0, "X": 1, "Z": 2, "Y": 3}


@dataclass(frozen=True)
class GreedyStep:
    """One family of local reconstruction steps.

    ``size`` adjacent tensors are treated jointly; ``use_gauge`` lets the
    gauge-fixed logical of a gauged tensor act as an extra stabilizer;
    ``only_q`` restricts the step to tilings with that vertex degree.
    """

    name: str
    size: int
    use_gauge: bool
    only_q: int | None = None

    def applies(self, q: int) -> bool:
        return self.only_q is None or self.only_q == q


GREEDY_STEPS: tuple[GreedyStep, ...] = (
    GreedyStep("single", 1, True),
    GreedyStep("pair", 2, False),
    GreedyStep("pair_gauged", 2, True, only_q=4),
)


@dataclass
class GreedyState:
    wedge: set
    frontier: set  # accessible legs as (vertex, leg)


def _mask_rows(cx: int, cz: int, mask: int) -> list[int]:
    """Linear constraints forcing a leg's Pauli into the subgroup ``mask``."""
    if mask == FULL:
        return []
    if mask == TRIVIAL:
        return [cx, cz]
    if mask == 0b0011:  # <X>
        return [cz]
    if mask == 0b0101:  # <Z>
        return [cx]
    if mask == 0b1001:  # <Y>
        return [cx ^ cz]
    raise ValueError(f"not a Pauli subgroup mask: {mask}")


def _solvable(rows: list[tuple[int, int]]) -> bool:
    """Is the GF(2) system {row . c = rhs} consistent?"""
    basis: dict[int, tuple[int, int]] = {}
    for r, rhs in rows:
        while r:
            top = r.bit_length() - 1
            if top not in basis:
                basis[top] = (r, rhs)
                break
            br, bb = basis[top]
            r ^= br
            rhs ^= bb
        else:
            if rhs:
                return False
    return True


class _Cluster:
    """Connected vertices combined in one step.

    The unknowns are coefficients of every member's Choi-group generators
    (seed stabilizers plus both logicals).  ``col[i][j]`` holds the (x, z)
    coefficient masks of leg j of member i, with j = q the logical leg.
    Internal bonds carry a Hadamard, so x on one side matches z on the other.
    """

    def __init__(self, g: TilingGraph, members: tuple[int, ...]):
        q = g.q
        self.members = members
        index = {v: i for i, v in enumerate(members)}
        seed = seed_code(q)
        gens = [(s.x, s.z, 0, 0) for s in seed.generators]
        gens += [(seed.logical_x.x, seed.logical_x.z, 1, 0), (seed.logical_z.x, seed.logical_z.z, 0, 1)]
        self.col: list[list[tuple[int, int]]] = []
        for i in range(len(members)):
            legs = []
            for j in range(q + 1):
                cx = cz = 0
                for t, (gx, gz, lx, lz) in enumerate(gens):
                    var = 1 << (i * len(gens) + t)
                    bx, bz = ((gx >> j) & 1, (gz >> j) & 1) if j < q else (lx, lz)
                    cx |= var if bx else 0
                    cz |= var if bz else 0
                legs.append((cx, cz))
            self.col.append(legs)
        self.internal: list[tuple[int, int, int, int]] = []
        self.external: list[tuple[int, int]] = []
        for i, v in enumerate(members):
            for j, leg in enumerate(g.vertices[v].legs[:q]):
                if isinstance(leg, Bond) and leg.peer in index:
                    if (v, j) < (leg.peer, leg.peer_leg):
                        self.internal.append((i, j, index[leg.peer], leg.peer_leg))
                else:
                    self.external.append((i, j))
        self.bond_of: dict[tuple[int, int], tuple[int, bool]] = {}
        self.bond_rows: list[int] = []
        for bi, (i, a, i2, b) in enumerate(self.internal):
            self.bond_rows.append(self.col[i][a][0] ^ self.col[i2][b][1])
            self.bond_rows.append(self.col[i][a][1] ^ self.col[i2][b][0])
            self.bond_of[(i, a)] = (bi, False)
            self.bond_of[(i2, b)] = (bi, True)

    def recoverable(self, q: int, accessible: tuple[bool, ...], log_masks: tuple[int, ...],
                    target: int | None) -> tuple[int, ...]:
        """Members whose every inaccessible planar leg (and logical, for the
        target index) can be pushed onto accessible external legs."""
        closed: list[tuple[tuple[int, int], list[int]]] = []
        for leg, acc in zip(self.external, accessible):
            if not acc:
                closed.append((leg, list(self.col[leg[0]][leg[1]])))
        logical_rows = []
        for i, m in enumerate(log_masks):
            logical_rows.append(_mask_rows(*self.col[i][q], m))
        bond = [(r, 0) for r in self.bond_rows]

        def pushable(extra: list[tuple[int, int]], skip_leg=None, skip_logical=None) -> bool:
            rows = list(extra)
            for leg, rs in closed:
                if leg != skip_leg:
                    rows.extend((r, 0) for r in rs)
            for i, rs in enumerate(logical_rows):
                if i != skip_logical:
                    rows.extend((r, 0) for r in rs)
            return _solvable(rows)

        closed_legs = {leg for leg, _ in closed}
        out = []
        for i, v in enumerate(self.members):
            ok = True
            for j in range(q):
                if not ok:
                    break
                if (i, j) in closed_legs:
                    cx, cz = self.col[i][j]
                    for bx, bz in ((1, 0), (0, 1)):
                        if not pushable(bond + [(cx, bx), (cz, bz)], skip_leg=(i, j)):
                            ok = False
                            break
                elif (i, j) in self.bond_of:
                    bi, flipped = self.bond_of[(i, j)]
                    for bx, bz in ((1, 0), (0, 1)):
                        rows = list(bond)
                        r0, r1 = (bz, bx) if flipped else (bx, bz)
                        rows[2 * bi] = (self.bond_rows[2 * bi], r0)
                        rows[2 * bi + 1] = (self.bond_rows[2 * bi + 1], r1)
                        if not pushable(rows):
                            ok = False
                            break
            if ok and i == target:
                cx, cz = self.col[i][q]
                for bx, bz in ((1, 0), (0, 1)):
                    if not pushable(bond + [(cx, bx), (cz, bz)], skip_logical=i):
                        ok = False
                        break
            if ok:
                out.append(v)
        return tuple(out)

    def logical_recoverable(self, q: int, accessible: tuple[bool, ...], log_masks: tuple[int, ...],
                            target: int) -> bool:
        """Can the target's logical leg alone be pushed onto accessible legs?"""
        rows = [(r, 0) for r in self.bond_rows]
        for (i, j), acc in zip(self.external, accessible):
            if not acc:
                rows.extend((r, 0) for r in self.col[i][j])
        for i, m in enumerate(log_masks):
            if i != target:
                rows.extend((r, 0) for r in _mask_rows(*self.col[i][q], m))
        cx, cz = self.col[target][q]
        return all(_solvable(rows + [(cx, bx), (cz, bz)]) for bx, bz in ((1, 0), (0, 1)))


def _connected_sets(g: TilingGraph, size: int) -> list[tuple[int, ...]]:
    """All connected vertex sets with exactly ``size`` members, as sorted tuples."""
    def nbrs(v: int) -> set[int]:
        return {leg.peer for leg in g.vertices[v].legs if isinstance(leg, Bond)}

    frontier = {(v,) for v in range(len(g.vertices))}
    for _ in range(size - 1):
        nxt = set()
        for s in frontier:
            for v in s:
                for w in nbrs(v):
                    if w not in s:
                        nxt.add(tuple(sorted(s + (w,))))
        frontier = nxt
    return sorted(frontier)


class GreedyDecoder:
    """Greedy wedge reconstruction of one target bulk qubit.

    A tensor joins the wedge once operators on all its planar legs (and, for
    the target, its logical leg) can be pushed onto accessible legs: unerased
    boundary qubits or bonds into the wedge.  Each step in ``steps`` decides
    this for a connected set of one or more tensors; a set may add only some
    of its members, which covers neighbour-assisted recovery.  Pushing uses
    the seed stabilizers and the gauge-fixed logical when the step allows it;
    ungauged logicals must be left untouched.  Decoding succeeds iff the
    target joins the wedge or its logical leg alone can be pushed out.
    """

    def __init__(self, g: TilingGraph, code: StabilizerCode, target: int | None = None,
                 steps: Sequence[GreedyStep] = GREEDY_STEPS):
        if target is None:
            target = code.logical_ids[0]
        if target not in code.logical_ids:
            raise ValueError("greedy target must be an ungauged logical qubit")
        if code.n != g.n_boundary:
            raise ValueError("code and tiling sizes differ")
        self.g = g
        self.q = g.q
        self.target = target
        self.n = g.n_boundary
        self.steps = tuple(s for s in steps if s.applies(g.q))
        gauge = dict(zip(code.gauge_ids, code.gauge_bases))
        self.gauged = [v.id in gauge for v in g.vertices]
        # ungauged logicals hold unknown states, so pushed operators must act
        # trivially on them; a gauged one absorbs its fixed Pauli
        self.log_mask = []
        for v in g.vertices:
            if v.id in gauge:
                self.log_mask.append(TRIVIAL | (1 << _PAULI_IDX[gauge[v.id]]))
            else:
                self.log_mask.append(TRIVIAL)
        shapes: dict[tuple[int, ...], _Cluster] = {}
        self.units: list[tuple[_Cluster, tuple[int, ...], int | None]] = []
        for size in sorted({s.size for s in self.steps}):
            sets = _connected_sets(g, size)
            for members in sets:
                cl = shapes.setdefault(members, _Cluster(g, members))
                for step in self.steps:
                    if step.size != size:
                        continue
                    masks = tuple(self.log_mask[v] if step.use_gauge or not self.gauged[v] else TRIVIAL
                                  for v in members)
                    tgt = members.index(target) if target in members else None
                    self.units.append((cl, masks, tgt))
        self.units_of: list[list[int]] = [[] for _ in g.vertices]
        for uid, (cl, _, _) in enumerate(self.units):
            for v in cl.members:
                self.units_of[v].append(uid)
        self._cache: dict = {}

    def _accessible(self, v: int, j: int, wedge: set, access: list[bool]) -> bool:
        leg = self.g.vertices[v].legs[j]
        if isinstance(leg, Bond):
            return leg.peer in wedge
        return access[leg.qubit]

    def _apply(self, uid: int, wedge: set, access: list[bool]) -> tuple[int, ...]:
        cl, masks, tgt = self.units[uid]
        if any(v in wedge for v in cl.members):
            return ()
        acc = tuple(self._accessible(cl.members[i], j, wedge, access) for i, j in cl.external)
        key = (uid, acc)
        hit = self._cache.get(key)
        if hit is None:
            hit = cl.recoverable(self.q, acc, masks, tgt)
            self._cache[key] = hit
        return hit

    def _close(self, wedge: set, access: list[bool], pending: Iterable[int]) -> None:
        queue = set(pending)
        while queue:
            uid = queue.pop()
            for v in self._apply(uid, wedge, access):
                if v in wedge:
                    continue
                wedge.add(v)
                for leg in self.g.vertices[v].legs:
                    if isinstance(leg, Bond):
                        queue.update(self.units_of[leg.peer])

    def run(self, erased_mask: int) -> GreedyState:
        access = [not (erased_mask >> j) & 1 for j in range(self.n)]
        wedge: set[int] = set()
        self._close(wedge, access, range(len(self.units)))
        frontier = {(v, j) for v in wedge for j in range(self.q)}
        frontier |= {self.g.boundary_legs[j] for j in range(self.n) if access[j]}
        return GreedyState(wedge, frontier)

    def _target_done(self, wedge: set, access: list[bool]) -> bool:
        # the target tensor need not be whole: its logical leg is enough
        if self.target in wedge:
            return True
        for uid in self.units_of[self.target]:
            cl, masks, tgt = self.units[uid]
            if any(v in wedge for v in cl.members):
                continue
            acc = tuple(self._accessible(cl.members[i], j, wedge, access) for i, j in cl.external)
            key = ("logical", uid, acc)
            hit = self._cache.get(key)
            if hit is None:
                hit = cl.logical_recoverable(self.q, acc, masks, tgt)
                self._cache[key] = hit
            if hit:
                return True
        return False

    def succeeds(self, erased_mask: int) -> tuple[bool, set[int]]:
        access = [not (erased_mask >> j) & 1 for j in range(self.n)]
        wedge: set[int] = set()
        self._close(wedge, access, range(len(self.units)))
        return self._target_done(wedge, access), wedge

    def decode(self, erased_mask: int) -> bool:
        return self.succeeds(erased_mask)[0]

    def wedge(self, erased_mask: int) -> set[int]:
        return self.run(erased_mask).wedge

    def failure_weight(self, perm: Sequence[int]) -> int:
        """Smallest w such that erasing ``perm[:w]`` defeats the greedy decoder."""
        access = [False] * self.n
        wedge: set[int] = set()
        for j in range(self.n - 1, -1, -1):
            qb = perm[j]
            access[qb] = True
            self._close(wedge, access, self.units_of[self.g.boundary_legs[qb][0]])
            if self._target_done(wedge, access):
                return j + 1
        return 0


def greedy_decode(code: StabilizerCode, g: TilingGraph, e: ErasurePattern, target: int | None = None,
                  steps: Sequence[GreedyStep] = GREEDY_STEPS) -> DecodeOutcome:
    dec = GreedyDecoder(g, code, target, steps)
    ok, wedge = dec.succeeds(e.mask)
    return DecodeOutcome(ok, detail={"decoder": "greedy", "target": dec.target,
                                     "wedge": sorted(wedge)})


# --- Pauli decoding by minimum weight --------------------------------------


class _CosetMILP:
    """Minimum-weight coset element as a mixed-integer program.

    Binary coefficients mu select generators; per qubit the x and z bits
    satisfy bit = e + sum(mu * G) - 2 s with integer slack s, and a weight
    indicator dominates both bits.  The solver is HiGHS via scipy.
    """

    def __init__(self, n: int, gens: Sequence[PauliString]):
        import numpy as np
        from scipy.sparse import coo_matrix

        self.n = n
        m = len(gens)
        self.m = m
        gx = np.array([[(gp.x >> j) & 1 for j in range(n)] for gp in gens], dtype=np.int8).reshape(m, n)
        gz = np.array([[(gp.z >> j) & 1 for j in range(n)] for gp in gens], dtype=np.int8).reshape(m, n)
        # variable blocks: mu | x | z | w | sx | sz
        ox, oz, ow, osx, osz = m, m + n, m + 2 * n, m + 3 * n, m + 4 * n
        nv = m + 5 * n
        rows, cols, vals = [], [], []
        for b, (gb, ob, osb) in enumerate(((gx, ox, osx), (gz, oz, osz))):
            for j in range(n):
                r = b * n + j
                rows += [r, r]
                cols += [ob + j, osb + j]
                vals += [1, 2]
                for i in np.nonzero(gb[:, j])[0]:
                    rows.append(r)
                    cols.append(int(i))
                    vals.append(-1)
        for b, ob in enumerate((ox, oz)):
            for j in range(n):
                r = 2 * n + b * n + j
                rows += [r, r]
                cols += [ow + j, ob + j]
                vals += [1, -1]
        self.A = coo_matrix((vals, (rows, cols)), shape=(4 * n, nv)).tocsr()
        self.c = np.zeros(nv)
        self.c[ow:ow + n] = 1
        self.lo = np.zeros(nv)
        self.hi = np.ones(nv)
        self.lo[osx:] = -(m + 1)
        self.hi[osx:] = m + 1
        self.nv = nv
        self.gx_int = [gp.x for gp in gens]
        self.gz_int = [gp.z for gp in gens]

    def solve(self, e: PauliString) -> PauliString:
        import numpy as np
        from scipy.optimize import Bounds, LinearConstraint, milp

        n, m = self.n, self.m
        rhs = np.array([(e.x >> j) & 1 for j in range(n)] + [(e.z >> j) & 1 for j in range(n)], dtype=float)
        lb = np.concatenate([rhs, np.zeros(2 * n)])
        ub = np.concatenate([rhs, np.full(2 * n, np.inf)])
        res = milp(self.c, constraints=LinearConstraint(self.A, lb, ub),
                   integrality=np.ones(self.nv), bounds=Bounds(self.lo, self.hi))
        if res.x is None:
            raise RuntimeError(f"integer program failed: {res.message}")
        mu = np.round(res.x[:m]).astype(int)
        x, z = e.x, e.z
        for i in np.nonzero(mu)[0]:
            x ^= self.gx_int[i]
            z ^= self.gz_int[i]
        return PauliString(n, x, z)


_PAULI_BITS = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


class PauliDecoder:
    """Minimum-weight decoder: pure error from destabilizers, then coset search.

    The search runs over the stabilizers (gauge-fixing operators included)
    together with all logical pairs, so it returns a minimum-weight Pauli with
    the observed syndrome.  Decoding succeeds iff the residual commutes with
    the target logicals.  Results are cached per syndrome.

    With ``restrict`` set to "X", "Y" or "Z" the decoder assumes the channel
    only produces that Pauli type: corrections are searched among operators
    of the same type, i.e. over the error plus the kernel of the restricted
    syndrome map.  Errors of another type are rejected.
    """

    def __init__(self, code: StabilizerCode, targets: Iterable[int] | None = None,
                 max_free: int = 30, detect_ties: bool = False, method: str = "auto",
                 restrict: str | None = None):
        self.code = code
        self.n = code.n
        self.targets = _resolve_targets(code, targets)
        self.stabs = list(code.stabilizers)
        self.destabs = destabilizers(self.stabs)
        self.logicals = [op for pair in code.logical_pairs for op in pair]
        if restrict not in (None, "X", "Y", "Z"):
            raise ValueError("restrict must be None, 'X', 'Y' or 'Z'")
        self.restrict = restrict
        if restrict is None:
            self.gens = self.stabs + self.logicals
        else:
            self.gens = self._restricted_generators(restrict)
        self.max_free = max_free
        self.detect_ties = detect_ties
        self.target_ops = [op for t in self.targets for op in code.pair_of(t)]
        self._cache: dict[int, tuple[PauliString, bool]] = {}
        if method == "auto":
            method = "bnb" if len(self.gens) <= max_free else "milp"
        if method not in ("bnb", "milp"):
            raise ValueError("method must be 'auto', 'bnb' or 'milp'")
        # generator count is the coset dimension; refuse early
        if method == "bnb" and len(self.gens) > max_free:
            raise CosetTooLarge(f"coset has {len(self.gens)} generators (cap {max_free})")
        if method == "milp" and detect_ties:
            raise ValueError("tie detection needs the branch-and-bound search")
        if restrict is not None and detect_ties:
            raise ValueError("tie detection is only defined for the unrestricted search")
        self.method = method
        self._milp = _CosetMILP(self.n, self.gens) if method == "milp" else None

    def _restricted_generators(self, basis: str) -> list[PauliString]:
        tx, tz = _PAULI_BITS[basis]
        # an operator v of type basis commutes with s iff parity(v & rows(s)) is even
        rows = [(s.z if tx else 0) ^ (s.x if tz else 0) for s in self.stabs]
        n = self.n
        return [PauliString(n, v if tx else 0, v if tz else 0) for v in gf2_nullspace(rows, n)]

    def _check_type(self, x: int, z: int) -> None:
        if self.restrict is None:
            return
        tx, tz = _PAULI_BITS[self.restrict]
        v = x | z
        if (x != (v if tx else 0)) or (z != (v if tz else 0)):
            raise ValueError(f"error is not of pure {self.restrict} type")

    def syndrome(self, error: PauliString) -> int:
        s = 0
        ex, ez = error.x, error.z
        for i, st in enumerate(self.stabs):
            s |= sp_bits(ex, ez, st.x, st.z) << i
        return s

    def pure_error(self, syndrome: int) -> PauliString:
        x = z = 0
        i = 0
        s = syndrome
        while s:
            if s & 1:
                t = self.destabs[i]
                x ^= t.x
                z ^= t.z
            s >>= 1
            i += 1
        return PauliString(self.n, x, z)

    def _logical_class(self, op: PauliString) -> tuple[int, ...]:
        return tuple(symplectic_product(op, t) for t in self.target_ops)

    def _correction(self, syndrome: int, rep: PauliString | None = None) -> tuple[PauliString, bool]:
        hit = self._cache.get(syndrome)
        if hit is not None:
            return hit
        # restricted mode: the error itself represents its coset
        eps = self.pure_error(syndrome) if self.restrict is None else rep
        if self._milp is not None:
            best = self._milp.solve(eps)
        else:
            best = min_weight_coset_element(eps, self.gens, max_free=self.max_free)
        tie = False
        if self.detect_ties:
            tie = self._has_tie(best)
        self._cache[syndrome] = (best, tie)
        return best, tie

    def _has_tie(self, best: PauliString) -> bool:
        """Does another target-logical class reach the same minimum weight?"""
        w = best.weight
        t_pairs = [self.code.pair_of(t) for t in self.targets]
        others = self.stabs + [op for bid, pair in zip(self.code.logical_ids, self.code.logical_pairs)
                               if bid not in self.targets for op in pair]
        for i, (tx, tz) in enumerate(t_pairs):
            for shift in (tx, tz, PauliString(self.n, tx.x ^ tz.x, tx.z ^ tz.z)):
                cand = PauliString(self.n, best.x ^ shift.x, best.z ^ shift.z)
                m = min_weight_coset_element(cand, others, max_free=max(self.max_free, len(others)))
                if m.weight <= w:
                    return True
        return False

    def decode(self, error: PauliString) -> DecodeOutcome:
        if error.n != self.n:
            raise ValueError("error length does not match the code")
        self._check_type(error.x, error.z)
        syn = self.syndrome(error)
        corr, tie = self._correction(syn, error)
        resid = PauliString(self.n, corr.x ^ error.x, corr.z ^ error.z)
        cls = self._logical_class(resid)
        ok = not any(cls)
        return DecodeOutcome(ok, corr, {"decoder": "pauli", "syndrome_weight": bin(syn).count("1"),
                                        "correction_weight": corr.weight,
                                        "residual_class": list(cls)}, tie)

    def success(self, error_x: int, error_z: int) -> bool:
        syn = 0
        for i, st in enumerate(self.stabs):
            syn |= sp_bits(error_x, error_z, st.x, st.z) << i
        self._check_type(error_x, error_z)
        corr, _ = self._correction(syn, PauliString(self.n, error_x, error_z))
        rx, rz = corr.x ^ error_x, corr.z ^ error_z
        return not any(sp_bits(rx, rz, t.x, t.z) for t in self.target_ops)


def pauli_decode(code: StabilizerCode, error: PauliString, targets: Iterable[int] | None = None,
                 max_free: int = 30, method: str = "auto", restrict: str | None = None) -> DecodeOutcome:
    dec = PauliDecoder(code, targets, max_free=max_free, method=method, restrict=restrict)
    if dec.method == "bnb" and restrict is None:
        dec.detect_ties = True
    return dec.decode(error)
