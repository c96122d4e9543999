"""Layered {p,q} hyperbolic tilings grown by vertex inflation.

Layer 0 is a single seed vertex.  Every vertex has ``q`` planar legs in
cyclic order plus one logical leg (index ``q``).  For a vertex outside the
seed the planar legs are ordered as::

    [inward legs..., prev, out_1, ..., out_t, next]

where ``prev``/``next`` connect to the ring neighbours in the same layer and
``out_*`` point to the next layer.  The seed has ``q`` outgoing legs and no
ring legs.

Inflation from layer L to L+1 walks the ring of layer L.  Every outgoing leg
gets a child with one inward leg (type alpha).  Between two outgoing legs of
the same parent ``p-3`` children with no inward leg (type beta) are inserted,
and ``p-4`` betas sit between the last child of one parent and the first
child of the next.  This closes every face with exactly ``p`` edges.  For
{5,4} it reproduces the substitution words alpha -> alpha beta,
beta -> alpha beta beta alpha beta and seed -> (alpha beta beta)^4.

Open outgoing legs of the last layer are the physical (boundary) qubits,
numbered in ring order.  Bulk (logical) qubits are the vertices, numbered
layer by layer in ring order, so bulk index == vertex id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

SEED = "delta"
ALPHA = "alpha"
BETA = "beta"

DEFAULT_MAX_QUBITS = 200_000


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class Bond:
    """Contracted leg: connects to ``(peer, peer_leg)``."""

    peer: int
    peer_leg: int


@dataclass(frozen=True)
class Boundary:
    qubit: int


@dataclass(frozen=True)
class Logical:
    bulk: int


Leg = Bond | Boundary | Logical


@dataclass
class Vertex:
    id: int
    layer: int
    kind: str
    legs: list = field(default_factory=list)
    n_in: int = 0

    @property
    def q(self) -> int:
        return len(self.legs) - 1

    @property
    def out_legs(self) -> list[int]:
        if self.kind == SEED:
            return list(range(self.q))
        return list(range(self.n_in + 1, self.q - 1))

    @property
    def ring_legs(self) -> tuple[int, int]:
        """(prev, next) planar leg indices; undefined for the seed."""
        if self.kind == SEED:
            raise TilingError("the seed vertex has no ring legs")
        return self.n_in, self.q - 1

    @property
    def in_legs(self) -> list[int]:
        return list(range(self.n_in))

    @property
    def n_out(self) -> int:
        return len(self.out_legs)


@dataclass
class TilingGraph:
    p: int
    q: int
    vertices: list[Vertex]
    layers: list[list[int]]
    n_boundary: int
    boundary_legs: list[tuple[int, int]]

    @property
    def n_layers(self) -> int:
        return len(self.layers) - 1

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        return self.n_boundary

    def bonds(self) -> Iterator[tuple[int, int, int, int]]:
        """Each contracted edge once, as (u, leg_u, v, leg_v) with u < v or same-vertex order."""
        for v in self.vertices:
            for j, leg in enumerate(v.legs):
                if isinstance(leg, Bond) and (v.id, j) < (leg.peer, leg.peer_leg):
                    yield v.id, j, leg.peer, leg.peer_leg

    def eta(self) -> list[tuple[int, int, int]]:
        """Per-layer (n_alpha, n_beta, n_delta)."""
        out = []
        for layer in self.layers:
            kinds = [self.vertices[v].kind for v in layer]
            out.append((kinds.count(ALPHA), kinds.count(BETA), kinds.count(SEED)))
        return out

    def to_dict(self) -> dict:
        def leg_dict(leg):
            if isinstance(leg, Bond):
                return {"bond": [leg.peer, leg.peer_leg]}
            if isinstance(leg, Boundary):
                return {"boundary": leg.qubit}
            return {"logical": leg.bulk}

        return {
            "p": self.p,
            "q": self.q,
            "layers": self.layers,
            "n_boundary": self.n_boundary,
            "vertices": [
                {"id": v.id, "layer": v.layer, "kind": v.kind, "n_in": v.n_in,
                 "legs": [leg_dict(x) for x in v.legs]}
                for v in self.vertices
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> TilingGraph:
        vertices = []
        for vd in d["vertices"]:
            legs = []
            for ld in vd["legs"]:
                if "bond" in ld:
                    legs.append(Bond(*ld["bond"]))
                elif "boundary" in ld:
                    legs.append(Boundary(ld["boundary"]))
                else:
                    legs.append(Logical(ld["logical"]))
            vertices.append(Vertex(vd["id"], vd["layer"], vd["kind"], legs, vd["n_in"]))
        boundary = [None] * d["n_boundary"]
        for v in vertices:
            for j, leg in enumerate(v.legs):
                if isinstance(leg, Boundary):
                    boundary[leg.qubit] = (v.id, j)
        return cls(d["p"], d["q"], vertices, [list(x) for x in d["layers"]], d["n_boundary"], boundary)


def is_hyperbolic(p: int, q: int) -> bool:
    return Fraction(1, p) + Fraction(1, q) < Fraction(1, 2)


def check_pq(p: int, q: int) -> None:
    if q % 2 or q < 4:
        raise TilingError(f"q must be even and >= 4, got {q}")
    if not is_hyperbolic(p, q):
        raise TilingError(f"{{{p},{q}}} is not hyperbolic")


def build_tiling(p: int, q: int, layers: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> TilingGraph:
    check_pq(p, q)
    if layers < 0:
        raise TilingError("layers must be >= 0")
    # predicted size check before allocating anything
    n_pred, k_pred = predicted_counts(p, q, layers)
    if n_pred + k_pred > max_qubits:
        raise TilingError(f"{n_pred} physical + {k_pred} bulk qubits exceed the cap {max_qubits}")

    vertices: list[Vertex] = []

    def new_vertex(layer: int, kind: str, n_in: int) -> Vertex:
        v = Vertex(len(vertices), layer, kind, [None] * (q + 1), n_in)
        v.legs[q] = Logical(v.id)
        vertices.append(v)
        return v

    def connect(u: Vertex, a: int, w: Vertex, b: int) -> None:
        u.legs[a] = Bond(w.id, b)
        w.legs[b] = Bond(u.id, a)

    seed = new_vertex(0, SEED, 0)
    all_layers = [[seed.id]]
    for layer in range(1, layers + 1):
        ring: list[Vertex] = []
        for u_id in all_layers[-1]:
            u = vertices[u_id]
            outs = u.out_legs
            for j, leg in enumerate(outs):
                child = new_vertex(layer, ALPHA, 1)
                connect(u, leg, child, 0)
                ring.append(child)
                if j < len(outs) - 1:
                    ring.extend(new_vertex(layer, BETA, 0) for _ in range(p - 3))
            gap = p - 3 if u.kind == SEED else p - 4
            ring.extend(new_vertex(layer, BETA, 0) for _ in range(gap))
        for i, v in enumerate(ring):
            w = ring[(i + 1) % len(ring)]
            connect(v, v.ring_legs[1], w, w.ring_legs[0])
        all_layers.append([v.id for v in ring])

    boundary = []
    for v_id in all_layers[-1]:
        v = vertices[v_id]
        for leg in v.out_legs:
            v.legs[leg] = Boundary(len(boundary))
            boundary.append((v_id, leg))
    return TilingGraph(p, q, vertices, all_layers, len(boundary), boundary)


def vertex_counts(g: TilingGraph) -> tuple[int, int, list[tuple[int, int, int]]]:
    """(n_physical, k_bulk, per-layer (n_alpha, n_beta, n_delta))."""
    return g.n_boundary, len(g.vertices), g.eta()


def substitution_matrix(p: int, q: int) -> np.ndarray:
    """Matrix M with eta^(L+1) = M eta^(L) on (n_alpha, n_beta, n_delta)."""
    check_pq(p, q)
    t_alpha, t_beta = q - 3, q - 2
    # children of a parent with t outgoing legs (non-seed)
    def kids(t: int) -> tuple[int, int]:
        return t, (t - 1) * (p - 3) + (p - 4)
    a_a, a_b = kids(t_alpha)
    b_a, b_b = kids(t_beta)
    d_a, d_b = q, q * (p - 3)
    return np.array([[a_a, b_a, d_a], [a_b, b_b, d_b], [0, 0, 0]], dtype=object)


def eta_sequence(p: int, q: int, layers: int) -> list[tuple[int, int, int]]:
    m = substitution_matrix(p, q)
    eta = np.array([0, 0, 1], dtype=object)
    out = [tuple(int(x) for x in eta)]
    for _ in range(layers):
        eta = m.dot(eta)
        out.append(tuple(int(x) for x in eta))
    return out


def predicted_counts(p: int, q: int, layers: int) -> tuple[int, int]:
    """(n, k) from the substitution recursion, without building the graph."""
    seq = eta_sequence(p, q, layers)
    a, b, d = seq[-1]
    n = a * (q - 3) + b * (q - 2) + d * q
    k = sum(sum(e) for e in seq)
    return n, k


def geodesic(g: TilingGraph, start: int, leg: int) -> list[int]:
    """Vertices visited by the straight path leaving ``start`` through ``leg``.

    At each vertex the path continues through the planar leg opposite to the
    one it entered by (``q/2`` positions further), until it reaches the boundary.
    """
    q = g.q
    path = [start]
    v, j = start, leg
    seen = {(start, leg)}
    while True:
        nxt = g.vertices[v].legs[j]
        if not isinstance(nxt, Bond):
            return path
        v, entry = nxt.peer, nxt.peer_leg
        path.append(v)
        j = (entry + q // 2) % q
        if (v, j) in seen:
            return path
        seen.add((v, j))


def geodesics_through(g: TilingGraph, v: int) -> list[list[int]]:
    """The q/2 geodesics through vertex ``v`` (each as a vertex list, v excluded)."""
    q = g.q
    out = []
    for j in range(q // 2):
        a = geodesic(g, v, j)[1:]
        b = geodesic(g, v, j + q // 2)[1:]
        out.append(a[::-1] + b)
    return out
