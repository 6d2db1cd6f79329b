import itertools
import math
import pickle
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_table, table, unitaries
from q2diag import cantor
from q2diag.cantor import LevelCapExceeded, Word, set_level_cap
from q2diag.diagonal import (
    DiagonalUnitary,
    Localized,
    NotLocalized,
    ad_u,
    canonicalize,
    compress,
    dmul,
    eval_at,
    phi,
    phi_power,
    sup_distance,
    uz_phi_build,
)
from q2diag.phases import I, MINUS_ONE, ONE, NonExactPhase, Phase
from q2diag.reptrunc import S1, S1_STAR, S2, S2_STAR, U, U_STAR, D, Amplitude, apply_word, diagonal_entries, word

ID = DiagonalUnitary.identity()


def oracle_phi_entries(d, n):
    # diagonal of S1 d S1* + S2 d S2*: exactly one summand survives on each e_m
    out = {}
    for m in range(-n, n):
        hits = [apply_word(w, m, 4 * n) for w in (word(S1, D(d), S1_STAR), word(S2, D(d), S2_STAR))]
        amps = [h for h in hits if isinstance(h, Amplitude)]
        assert len(amps) == 1 and amps[0].index == m
        out[m] = amps[0].amplitude
    return out


def test_eval_at_examples():
    assert eval_at(ID, 7) == ONE
    assert eval_at(table(1, "i", "-i", 1), -1) == ONE
    assert eval_at(table(1, "i"), 6) == ONE
    assert eval_at(table(1, "i"), -3) == I


def test_dmul_examples():
    a = table(1, "i")
    assert dmul(a, a, conjugate_b=True) == ID
    assert dmul(a, a, conjugate_b=True).level == 0
    assert dmul(a, a) == table(1, -1)
    assert dmul(table(1, -1), table(1, 1, "i", 1)) == table(1, -1, "i", -1)


def test_phi_examples():
    assert phi(ID) == ID
    assert phi(table(1, "i")) == table(1, 1, "i", "i")
    d = table(1, "i")
    got = oracle_phi_entries(d, 16)
    assert all(phi(d).eval_at(m) == v for m, v in got.items())


def test_ad_u_examples():
    d = table(1, "i", "-i", 1)
    assert ad_u(d, 0) == d
    assert ad_u(d, 1) == table(1, 1, "i", "-i")
    # oracle: U d U* entries
    got = diagonal_entries(word(U, D(d), U_STAR), 32)
    assert all(ad_u(d, 1).eval_at(m) == v for m, v in got.items())


def test_compress_examples():
    d = table(1, 1, "i", 1)
    assert compress(d, 0) == d
    assert compress(d, 1) == table(1, "i")
    assert compress(d, 2) == ID
    got = diagonal_entries(word(S2_STAR, D(d), S2), 32)
    assert all(compress(d, 1).eval_at(m) == v for m, v in got.items())
    with pytest.raises(ValueError):
        compress(d, -1)


def test_canonicalize_examples():
    z = Phase.dyadic(3, 3)
    c = DiagonalUnitary.from_phases([z] * 4, canonical=False)
    assert c.level == 2
    assert canonicalize(c) == DiagonalUnitary.constant(z) and canonicalize(c).level == 0
    assert canonicalize(table(1, "i", 1, "i")).level == 1
    assert canonicalize(table(1, "i", "-i", 1)).level == 2


def test_sup_distance_examples():
    d = table(1, "i", "-i", 1)
    assert sup_distance(d, d) == 0
    assert sup_distance(DiagonalUnitary.constant(ONE), DiagonalUnitary.constant(MINUS_ONE)) == 2
    assert math.isclose(sup_distance(compress(table(1, 1, "i", 1), 1), ID), math.sqrt(2), abs_tol=1e-12)


def test_uz_phi_build_examples():
    assert uz_phi_build(ONE) == Localized(ID)
    res = uz_phi_build(MINUS_ONE)
    assert res == Localized(table(1, -1, -1, 1))
    # oracle: U_z phi(U_z)* with U_z e_m = z^m e_m as an entrywise product on the window
    z = MINUS_ONE
    for m in range(-40, 40):
        assert res.unitary.eval_at(m) == z ** m * (z ** (m // 2)).conj()
    bad = uz_phi_build(Phase.rational(1, 3), max_level=12)
    assert isinstance(bad, NotLocalized)
    assert bad.tested_level == 12
    i0, i1 = bad.indices
    assert (i1 - i0) % (1 << bad.tested_level) == 0
    assert bad.values[0] != bad.values[1]
    with pytest.raises(NonExactPhase):
        uz_phi_build(Phase.angle(1.0))


@pytest.mark.parametrize("n", range(0, 7))
def test_uz_phi_build_two_power_roots(n):
    z = Phase.dyadic(1, n) if n else ONE
    d = uz_phi_build(z).unitary
    assert d.level <= n + 1
    for m in range(-200, 200):
        assert d.eval_at(m) == z ** (-((-m) // 2))


def test_constructors():
    assert DiagonalUnitary.from_turns([0, 1, 2, 3], den=4) == table(1, "i", -1, "-i")
    cyl = {Word.parse("22"): ONE, Word.parse("12"): I, Word.parse("21"): MINUS_ONE, Word.parse("11"): ONE}
    assert DiagonalUnitary.from_cylinders(cyl) == table(1, "i", -1, 1)
    with pytest.raises(ValueError):
        DiagonalUnitary.from_phases([ONE] * 3)
    with pytest.raises(ValueError):
        DiagonalUnitary(2, [0, 1], 4)
    with pytest.raises(AttributeError):
        ID.level = 3
    d = table(1, "i", -1, 1)
    assert pickle.loads(pickle.dumps(d)) == d


def test_float_tables():
    f = DiagonalUnitary(1, angles=[0.0, math.pi / 2])
    assert not f.is_exact
    assert f == table(1, "i")
    assert dmul(f, table(1, "i"), conjugate_b=True).is_identity()
    assert sup_distance(phi(f), table(1, 1, "i", "i")) < 1e-12


def test_level_cap_respected():
    old = cantor.LEVEL_CAP
    try:
        set_level_cap(3)
        d = table(1, "i", "-i", 1, 1, 1, 1, -1)
        with pytest.raises(LevelCapExceeded):
            phi(d)
    finally:
        set_level_cap(old)


# -- properties ------------------------------------------------------------------


@given(unitaries(), unitaries(), unitaries())
def test_abelian_group(a, b, c):
    assert dmul(dmul(a, b), c) == dmul(a, dmul(b, c))
    assert dmul(a, b) == dmul(b, a)
    assert dmul(a, ID) == a
    assert dmul(a, a, conjugate_b=True) == ID
    assert dmul(a, b, conjugate_b=True) == dmul(a, b.conj())


@pytest.mark.parametrize("level", range(0, 3))
def test_phi_homomorphism_exhaustive(level):
    # every pair over 4th roots at this level
    tables = [DiagonalUnitary(level, list(t), 4) for t in itertools.product(range(4), repeat=1 << level)]
    for a in tables:
        assert phi(a.conj()) == phi(a).conj()
        for b in tables:
            assert phi(dmul(a, b)) == dmul(phi(a), phi(b))
    assert phi(ID) == ID


@settings(max_examples=300, deadline=None)
@given(unitaries(max_level=4, den=4), unitaries(max_level=4, den=4))
def test_phi_homomorphism_level4(a, b):
    assert phi(dmul(a, b)) == dmul(phi(a), phi(b))


@pytest.mark.parametrize("level", [0, 1, 3, 5, 8])
def test_phi_matches_oracle(level, rng):
    d = random_table(rng, level)
    n = 1 << (level + 2)
    got = oracle_phi_entries(d, n)
    pd = phi(d)
    assert all(pd.eval_at(m) == v for m, v in got.items())


@given(unitaries(max_level=6), st.integers(-70, 70), st.integers(-70, 70))
def test_ad_u_action(d, i, j):
    assert ad_u(ad_u(d, i), j) == ad_u(d, i + j)
    assert ad_u(d, 1 << d.level) == d
    for m in range(-5, 5):
        assert ad_u(d, j).eval_at(m) == d.eval_at(m - j)


@given(unitaries(max_level=6))
def test_phi_sibling_pairs(d):
    pd = phi(d)
    assert pd.eval_at(-1) == d.eval_at(-1)
    for m in range(-40, 40):
        assert pd.eval_at(2 * m) == pd.eval_at(2 * m + 1) == d.eval_at(m)


@given(unitaries(max_level=7), st.integers(0, 12))
def test_compress_limit(d, n):
    c = compress(d, n)
    for m in range(-20, 20):
        assert c.eval_at(m) == d.eval_at((1 << n) * m)
    if n >= d.level:
        assert sup_distance(c, DiagonalUnitary.constant(d.eval_at(0))) == 0


@given(unitaries(max_level=5), st.integers(0, 4))
def test_phi_power(d, n):
    p = phi_power(d, n)
    for m in range(-30, 30):
        assert p.eval_at(m) == d.eval_at(m >> n)


@given(unitaries(max_level=5))
def test_canonical_form_minimal(d):
    k = d.level
    if k:
        half = 1 << (k - 1)
        assert any(d.entry(r) != d.entry(r + half) for r in range(half))
    assert canonicalize(d) == d
    big = DiagonalUnitary.from_phases([d.eval_at(m) for m in range(1 << (k + 2))], canonical=False)
    assert canonicalize(big) == d and canonicalize(big).level == k


@given(unitaries(max_level=5))
def test_hash_consistent(d):
    again = DiagonalUnitary.from_phases(list(d.table))
    assert again == d and hash(again) == hash(d)
