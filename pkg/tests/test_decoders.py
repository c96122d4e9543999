from __future__ import annotations

import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evenbly.codegen import (
    CONSTANT_RATE,
    MAX_RATE,
    ZERO_RATE,
    GaugeSpec,
    build_code,
    conjoin,
    gauge_fix,
    seed_as_code,
)
from evenbly.decoders import (
    GREEDY_STEPS,
    ErasureDecoder,
    ErasurePattern,
    GreedyDecoder,
    PauliDecoder,
    erasure_decodable,
    greedy_decode,
    pauli_decode,
)
from evenbly.symplectic import CosetTooLarge, PauliString, symplectic_product

from oracles import all_paulis_up_to, normalizer_erasure_ok, normalizer_erasure_ok_linear


def small_codes():
    """Codes with n <= 12 for exhaustive comparisons."""
    s4, s6 = seed_as_code(4), seed_as_code(6)
    two = conjoin(s4, 1, s4, 3)
    three = conjoin(two, 5, s4, 0)
    mixed = conjoin(s4, 0, s6, 2)
    return {
        "seed4": s4,
        "seed6": s6,
        "two4": two,
        "three4": three,
        "two4_gauged": gauge_fix(two, [1], "Y"),
        "three4_gauged": gauge_fix(three, [1, 2], "Z"),
        "mixed": gauge_fix(mixed, [1], "X"),
    }


SMALL = small_codes()


# --- erasure -----------------------------------------------------------------


@pytest.mark.parametrize("q", [4, 6])
def test_erasure_all_patterns_on_seeds(q):
    code = seed_as_code(q)
    dec = ErasureDecoder(code)
    for m in range(1 << q):
        assert dec.decodable(m) == normalizer_erasure_ok(code, m, [0])
    # the seed has distance two: every single erasure is fine, some pairs are not
    assert all(dec.decodable(1 << j) for j in range(q))
    assert not all(dec.decodable((1 << a) | (1 << b)) for a, b in itertools.combinations(range(q), 2))


@pytest.mark.parametrize("name", sorted(SMALL))
def test_erasure_all_patterns_small_codes(name):
    code = SMALL[name]
    for t in code.logical_ids:
        dec = ErasureDecoder(code, [t])
        for m in range(1 << code.n):
            if bin(m).count("1") > 6:
                continue
            assert dec.decodable(m) == normalizer_erasure_ok(code, m, [t])


@pytest.mark.parametrize("layout,basis", [(ZERO_RATE, "Z"), (ZERO_RATE, "Y"), (ZERO_RATE, "X"), (MAX_RATE, "Z"),
                                          (CONSTANT_RATE, "Y")])
def test_erasure_random_patterns_n20(layout, basis):
    _, code = build_code(5, 4, 1, GaugeSpec(layout, basis))
    dec = ErasureDecoder(code, [0])
    rng = random.Random(1)
    for _ in range(300):
        m = sum(1 << j for j in range(code.n) if rng.random() < rng.random())
        assert dec.decodable(m) == normalizer_erasure_ok_linear(code, m, [0])


def test_linear_oracle_matches_exhaustive_oracle():
    _, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))
    rng = random.Random(2)
    for _ in range(100):
        m = sum(1 << j for j in rng.sample(range(20), rng.randint(0, 6)))
        assert normalizer_erasure_ok(code, m, [0]) == normalizer_erasure_ok_linear(code, m, [0])


def test_failure_weight_is_first_failing_prefix():
    _, code = build_code(5, 4, 2, GaugeSpec(ZERO_RATE, "Z"))
    dec = ErasureDecoder(code, [0])
    rng = random.Random(3)
    for _ in range(20):
        perm = list(range(code.n))
        rng.shuffle(perm)
        w = dec.failure_weight(perm)
        prefix = lambda k: sum(1 << j for j in perm[:k])
        assert not dec.decodable(prefix(w))
        assert dec.decodable(prefix(w - 1))


def test_witness_is_a_logical_in_the_erasure():
    code = seed_as_code(4)
    m = 0b0011
    out = erasure_decodable(code, ErasurePattern.from_mask(4, m))
    if not out.success:
        w = PauliString.from_str(out.detail["witness"])
        assert (w.x | w.z) & ~m == 0
        assert all(symplectic_product(w, s) == 0 for s in code.stabilizers)
    assert erasure_decodable(code, ErasurePattern.from_str("1000")).success


def test_erasure_pattern_parsing():
    assert ErasurePattern.from_str("0110").erased == {1, 2}
    assert ErasurePattern.from_str("5:0,3").mask == 0b1001
    with pytest.raises(ValueError):
        ErasurePattern(3, {5})
    with pytest.raises(ValueError):
        erasure_decodable(seed_as_code(4), ErasurePattern(5, {1}))


def test_targets_must_be_logical():
    _, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))
    with pytest.raises(ValueError):
        ErasureDecoder(code, [3])


# --- greedy ------------------------------------------------------------------


GREEDY_CASES = [(5, 4, 1, ZERO_RATE, "Z"), (5, 4, 2, ZERO_RATE, "Y"), (5, 4, 2, ZERO_RATE, "X"),
                (5, 4, 2, MAX_RATE, "Z"), (5, 4, 2, CONSTANT_RATE, "Z"), (6, 4, 2, ZERO_RATE, "Z"),
                (5, 6, 1, ZERO_RATE, "Y")]


@pytest.mark.parametrize("p,q,L,layout,basis", GREEDY_CASES)
def test_greedy_implies_gaussian(p, q, L, layout, basis):
    g, code = build_code(p, q, L, GaugeSpec(layout, basis))
    gd = GreedyDecoder(g, code, 0)
    ed = ErasureDecoder(code, [0])
    rng = random.Random(4)
    hits = 0
    for _ in range(200):
        rate = rng.random() * 0.6
        m = sum(1 << j for j in range(code.n) if rng.random() < rate)
        if gd.decode(m):
            hits += 1
            assert ed.decodable(m)
    assert hits > 0


@pytest.mark.parametrize("p,q,L,layout,basis", GREEDY_CASES[:4])
def test_greedy_failure_weights_bounded_by_gaussian(p, q, L, layout, basis):
    g, code = build_code(p, q, L, GaugeSpec(layout, basis))
    gd = GreedyDecoder(g, code, 0)
    ed = ErasureDecoder(code, [0])
    rng = random.Random(5)
    for _ in range(30):
        perm = list(range(code.n))
        rng.shuffle(perm)
        wg = gd.failure_weight(perm)
        assert wg <= ed.failure_weight(perm)
        # the nested definition agrees with decoding the prefixes directly
        assert not gd.decode(sum(1 << j for j in perm[:wg]))
        if wg > 0:
            assert gd.decode(sum(1 << j for j in perm[:wg - 1]))


def test_greedy_is_monotone_under_fewer_erasures():
    g, code = build_code(5, 4, 2, GaugeSpec(ZERO_RATE, "Z"))
    gd = GreedyDecoder(g, code, 0)
    rng = random.Random(6)
    for _ in range(100):
        m = sum(1 << j for j in range(code.n) if rng.random() < 0.4)
        if gd.decode(m):
            sub = m & rng.getrandbits(code.n)
            assert gd.decode(sub)
            assert gd.wedge(m) <= gd.wedge(sub)


@pytest.mark.parametrize("q", [4, 6])
def test_greedy_exact_on_a_single_tensor(q):
    p = 5
    g, code = build_code(p, q, 0, GaugeSpec(ZERO_RATE, "Z"))
    gd = GreedyDecoder(g, code, 0)
    ed = ErasureDecoder(code, [0])
    for m in range(1 << code.n):
        assert gd.decode(m) == ed.decodable(m)


def test_greedy_no_erasure_recovers_everything():
    g, code = build_code(5, 4, 2, GaugeSpec(ZERO_RATE, "Y"))
    assert greedy_decode(code, g, ErasurePattern(code.n)).success
    full = ErasurePattern.from_mask(code.n, (1 << code.n) - 1)
    assert not greedy_decode(code, g, full).success


def test_greedy_steps_are_data():
    names = [s.name for s in GREEDY_STEPS]
    assert names == ["single", "pair", "pair_gauged"]
    assert not GREEDY_STEPS[2].applies(6) and GREEDY_STEPS[2].applies(4)
    g, code = build_code(5, 4, 2, GaugeSpec(ZERO_RATE, "Z"))
    weak = GreedyDecoder(g, code, 0, steps=GREEDY_STEPS[:1])
    strong = GreedyDecoder(g, code, 0)
    rng = random.Random(7)
    for _ in range(100):
        m = sum(1 << j for j in range(code.n) if rng.random() < 0.3)
        if weak.decode(m):
            assert strong.decode(m)


def test_greedy_q6_x_and_y_gauge_agree():
    gx, cx = build_code(5, 6, 1, GaugeSpec(ZERO_RATE, "X"))
    gy, cy = build_code(5, 6, 1, GaugeSpec(ZERO_RATE, "Y"))
    dx, dy = GreedyDecoder(gx, cx, 0), GreedyDecoder(gy, cy, 0)
    rng = random.Random(8)
    for _ in range(200):
        m = sum(1 << j for j in range(cx.n) if rng.random() < 0.3)
        assert dx.decode(m) == dy.decode(m)


def test_greedy_rejects_gauged_target():
    g, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))
    with pytest.raises(ValueError):
        GreedyDecoder(g, code, 3)


# --- Pauli decoding ------------------------------------------------------------


def _syndrome(code, p: PauliString) -> tuple[int, ...]:
    return tuple(symplectic_product(p, s) for s in code.stabilizers)


def _class(code, target: int, p: PauliString) -> tuple[int, int]:
    x, z = code.pair_of(target)
    return symplectic_product(p, x), symplectic_product(p, z)


def exhaustive_table(code, target: int, w_max: int) -> dict:
    """syndrome -> (minimum weight, logical classes attaining it), by enumeration."""
    table: dict = {}
    for p in all_paulis_up_to(code.n, w_max):
        s = _syndrome(code, p)
        w = p.weight
        if s not in table:
            table[s] = (w, {_class(code, target, p)})
        elif table[s][0] == w:
            table[s][1].add(_class(code, target, p))
    return table


def _check_against_table(code, target, table, errors, dec):
    for e in errors:
        w, classes = table[_syndrome(code, e)]
        out = dec.decode(e)
        assert out.correction.weight == w
        assert _syndrome(code, out.correction) == _syndrome(code, e)
        if len(classes) == 1:
            (cls,) = classes
            assert out.success == (cls == _class(code, target, e))


@pytest.mark.parametrize("name", sorted(SMALL))
def test_pauli_decoder_all_weight_two_errors(name):
    code = SMALL[name]
    for t in code.logical_ids:
        table = exhaustive_table(code, t, code.n)
        dec = PauliDecoder(code, [t])
        _check_against_table(code, t, table, all_paulis_up_to(code.n, 2), dec)


def test_pauli_decoder_random_errors_n20():
    _, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))
    table = exhaustive_table(code, 0, 3)
    dec = PauliDecoder(code, [0])
    rng = random.Random(9)
    errors = []
    for _ in range(200):
        qubits = rng.sample(range(code.n), rng.randint(0, 3))
        errors.append(PauliString.from_support(code.n, [], "I") if not qubits else
                      PauliString(code.n, *_random_bits(rng, qubits)))
    _check_against_table(code, 0, table, errors, dec)


def _random_bits(rng, qubits):
    x = z = 0
    for j in qubits:
        t = rng.randint(1, 3)
        x |= (t & 1) << j
        z |= (t >> 1) << j
    return x, z


def test_milp_agrees_with_branch_and_bound():
    _, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Y"))
    bnb = PauliDecoder(code, [0], method="bnb")
    milp = PauliDecoder(code, [0], method="milp")
    rng = random.Random(10)
    for _ in range(40):
        e = PauliString(code.n, rng.getrandbits(code.n) & rng.getrandbits(code.n),
                        rng.getrandbits(code.n) & rng.getrandbits(code.n))
        assert bnb.decode(e).correction.weight == milp.decode(e).correction.weight


def test_method_selection_and_cap():
    _, code = build_code(5, 4, 2, GaugeSpec(ZERO_RATE, "Z"))
    assert PauliDecoder(code, [0]).method == "milp"
    with pytest.raises(CosetTooLarge):
        PauliDecoder(code, [0], method="bnb")
    with pytest.raises(ValueError):
        PauliDecoder(code, [0], method="simplex")
    with pytest.raises(ValueError):
        PauliDecoder(code, [0], method="milp", detect_ties=True)


def test_pauli_decode_reports_ties_on_the_seed():
    code = seed_as_code(4)
    # ZIII and IIIZ share a syndrome and differ by the logical Z: a tie
    out = pauli_decode(code, PauliString.from_str("ZIII"))
    assert out.correction.weight == 1 and out.tie
    out = pauli_decode(code, PauliString.from_str("IIZZ"))
    assert not out.tie and not out.success and out.correction.weight == 0


@pytest.mark.parametrize("basis", ["X", "Y", "Z"])
def test_restricted_decoder_is_min_weight_within_type(basis):
    _, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))
    dec = PauliDecoder(code, [0], restrict=basis)
    bx, bz = {"X": (1, 0), "Y": (1, 1), "Z": (0, 1)}[basis]
    # exhaustive over all same-type operators (2^20 is too many; restrict the support to 12 qubits)
    support = list(range(12))
    by_syn: dict = {}
    for mask in range(1 << len(support)):
        v = sum(1 << support[i] for i in range(len(support)) if (mask >> i) & 1)
        p = PauliString(code.n, v if bx else 0, v if bz else 0)
        s = _syndrome(code, p)
        if s not in by_syn or p.weight < by_syn[s]:
            by_syn[s] = p.weight
    rng = random.Random(11)
    for _ in range(100):
        v = sum(1 << j for j in support if rng.random() < 0.3)
        e = PauliString(code.n, v if bx else 0, v if bz else 0)
        out = dec.decode(e)
        c = out.correction
        assert (c.x == (c.x | c.z) if bx else c.x == 0) and (c.z == (c.x | c.z) if bz else c.z == 0)
        assert _syndrome(code, c) == _syndrome(code, e)
        assert c.weight <= by_syn[_syndrome(code, e)]


def test_restricted_decoder_rejects_other_types():
    _, code = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))
    dec = PauliDecoder(code, [0], restrict="X")
    with pytest.raises(ValueError):
        dec.decode(PauliString.single(code.n, 0, "Z"))
    with pytest.raises(ValueError):
        PauliDecoder(code, [0], restrict="W")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, (1 << 20) - 1), st.integers(0, (1 << 20) - 1))
def test_pauli_success_matches_decode(x, z):
    code = _ZR1
    dec = _DEC
    e = PauliString(code.n, x, z)
    assert dec.success(x, z) == dec.decode(e).success


_ZR1 = build_code(5, 4, 1, GaugeSpec(ZERO_RATE, "Z"))[1]
_DEC = PauliDecoder(_ZR1, [0])


def test_pure_error_has_the_syndrome():
    dec = _DEC
    rng = np.random.default_rng(12)
    for _ in range(50):
        s = int(rng.integers(0, 1 << len(dec.stabs)))
        assert dec.syndrome(dec.pure_error(s)) == s
