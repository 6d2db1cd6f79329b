"""A finite window of the canonical representation of ``Q_2`` on ``l2(Z)``.

Generators act on basis vectors as index maps: ``U e_m = e_{m+1}``,
``S2 e_m = e_{2m}``, ``S1 = U S2``, so ``S1 e_m = e_{2m+1}``, and a diagonal
``D(d)`` multiplies ``e_m`` by ``d(m)``.  Words are applied right to left to a
single basis vector; nothing here uses the table algebra of
:mod:`q2diag.diagonal` beyond reading entries, so agreement between the two
modules is a genuine cross-check.

Indices are confined to ``[-N, N)``.  Leaving the window is reported as
:data:`OUT_OF_WINDOW`, never truncated.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .cantor import check_level
from .diagonal import DiagonalUnitary
from .extend import ExtensionCertificate
from .phases import ONE, Phase, parse_phase_literal


class EmptySafeWindow(ValueError):
    """No basis vector can be pushed through a word without leaving the window."""


# -- words ------------------------------------------------------------------

GENERATORS = ("U", "U*", "S1", "S1*", "S2", "S2*")


@dataclass(frozen=True)
class Gen:
    name: str

    def __post_init__(self):
        if self.name not in GENERATORS:
            raise ValueError(f"unknown generator {self.name!r}")

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Diag:
    """Multiplication by ``d`` (or by ``d*`` when ``adjoint``)."""

    d: DiagonalUnitary
    adjoint: bool = False
    label: str = "d"

    def __str__(self) -> str:
        return f"D{'*' if self.adjoint else ''}:{self.label}"


@dataclass(frozen=True)
class Scalar:
    z: Phase

    def __str__(self) -> str:
        # parse_genword reads this back
        if self.z.is_exact:
            return f"z:{self.z.turn}"
        return f"z:rad:{self.z.radians!r}"


Token = Union[Gen, Diag, Scalar]
GenWord = tuple  # of Token, written as an operator product (rightmost acts first)

U, U_STAR = Gen("U"), Gen("U*")
S1, S1_STAR = Gen("S1"), Gen("S1*")
S2, S2_STAR = Gen("S2"), Gen("S2*")


def D(d: DiagonalUnitary, label: str = "d", adjoint: bool = False) -> Diag:
    return Diag(d, adjoint, label)


def word(*tokens: Token) -> GenWord:
    return tuple(tokens)


def word_str(w: GenWord) -> str:
    return " ".join(str(t) for t in w)


def parse_genword(text: str, resolve: Callable[[str], DiagonalUnitary]) -> GenWord:
    """Parse ``"U U* S1 S1* S2 S2* D:<ref> D*:<ref> z:<phase>"``.

    ``resolve`` maps a ``<ref>`` (for the CLI, ``file#name``) to a unitary.
    """
    tokens = []
    for tok in text.split():
        if tok in GENERATORS:
            tokens.append(Gen(tok))
        elif tok.startswith("D:"):
            tokens.append(Diag(resolve(tok[2:]), False, tok[2:]))
        elif tok.startswith("D*:"):
            tokens.append(Diag(resolve(tok[3:]), True, tok[3:]))
        elif tok.startswith("z:"):
            tokens.append(Scalar(parse_phase_literal(tok[2:])))
        else:
            raise ValueError(f"bad word token {tok!r}")
    return tuple(tokens)


# -- application ----------------------------------------------------------------


@dataclass(frozen=True)
class Amplitude:
    """The vector ``amplitude * e_index``."""

    amplitude: Phase
    index: int


class _Marker:
    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name


OUT_OF_WINDOW = _Marker("OUT_OF_WINDOW")
ANNIHILATED = _Marker("ANNIHILATED")

ApplyResult = Union[Amplitude, _Marker]


def _in_window(m: int, n: int) -> bool:
    return -n <= m < n


def apply_word(w: GenWord, m: int, n: int) -> ApplyResult:
    """Apply ``w`` to ``e_m`` inside the window ``[-n, n)``."""
    if not _in_window(m, n):
        return OUT_OF_WINDOW
    amp = ONE
    for tok in reversed(w):
        if isinstance(tok, Gen):
            name = tok.name
            if name == "U":
                m += 1
            elif name == "U*":
                m -= 1
            elif name == "S2":
                m = 2 * m
            elif name == "S1":
                m = 2 * m + 1
            elif name == "S2*":
                if m % 2:
                    return ANNIHILATED
                m //= 2
            else:  # S1*
                if m % 2 == 0:
                    return ANNIHILATED
                m = (m - 1) // 2
            if not _in_window(m, n):
                return OUT_OF_WINDOW
        elif isinstance(tok, Diag):
            val = tok.d.eval_at(m)
            amp = amp * (val.conj() if tok.adjoint else val)
        else:
            amp = amp * tok.z
    return Amplitude(amp, m)


def _index_bound(w: GenWord, r: int) -> int:
    """Largest ``|index|`` any intermediate state can reach from ``|m| <= r``."""
    b = worst = r
    for tok in reversed(w):
        if isinstance(tok, Gen):
            if tok.name in ("U", "U*"):
                b += 1
            elif tok.name == "S2":
                b = 2 * b
            elif tok.name == "S1":
                b = 2 * b + 1
            # adjoints of isometries never increase |index| (beyond rounding down)
        worst = max(worst, b)
    return worst


def safe_radius(words: Sequence[GenWord], n: int) -> int:
    """Largest ``r`` such that every ``|m| <= r`` stays inside ``[-n, n)`` under every word; -1 if none."""
    lo, hi = -1, n - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if all(_index_bound(w, mid) <= n - 1 for w in words):
            lo = mid
        else:
            hi = mid - 1
    return lo


@dataclass
class VerifyReport:
    passed: bool
    window: int
    safe_window: tuple[int, int]
    checked: int = 0
    violations: list[tuple[int, ApplyResult, ApplyResult]] = field(default_factory=list)


def _same(a: ApplyResult, b: ApplyResult) -> bool:
    if isinstance(a, Amplitude) and isinstance(b, Amplitude):
        return a.index == b.index and a.amplitude == b.amplitude
    return a is b


def verify_identity(lhs: GenWord, rhs: GenWord, n: int, stop_at_first: bool = False) -> VerifyReport:
    """Compare ``lhs e_m`` with ``rhs e_m`` on the safe sub-window of ``[-n, n)``."""
    r = safe_radius([lhs, rhs], n)
    if r < 0:
        raise EmptySafeWindow(f"no safe basis vectors for window {n}")
    report = VerifyReport(True, n, (-r, r))
    for m in _center_out(r):
        a, b = apply_word(lhs, m, n), apply_word(rhs, m, n)
        if a is OUT_OF_WINDOW or b is OUT_OF_WINDOW:  # pragma: no cover - excluded by safe_radius
            raise AssertionError(f"e_{m} left the window despite the safe bound")
        report.checked += 1
        if not _same(a, b):
            report.passed = False
            report.violations.append((m, a, b))
            if stop_at_first:
                break
    if report.violations:
        report.violations.sort(key=lambda v: v[0])
    return report


def _center_out(r: int):
    yield 0
    for k in range(1, r + 1):
        yield -k
        yield k


# -- the extension relations ----------------------------------------------------


def unirel_words(d: DiagonalUnitary, dcheck: DiagonalUnitary) -> dict[str, tuple[GenWord, GenWord]]:
    """Both sides of ``dc U d S1 = d S2 dc U`` and ``dc U d S2 = d S1`` with ``dc = dcheck``."""
    dd, cc = D(d, "d"), D(dcheck, "check")
    return {
        "eq1": (word(cc, U, dd, S1), word(dd, S2, cc, U)),
        "eq2": (word(cc, U, dd, S2), word(dd, S1)),
    }


def default_window(level: int) -> int:
    return 1 << (level + 4)


def verify_extension_relations(
    d: DiagonalUnitary, dcheck: DiagonalUnitary, n: int | None = None, stop_at_first: bool = False
) -> dict[str, VerifyReport]:
    n = default_window(d.level) if n is None else n
    return {
        name: verify_identity(lhs, rhs, n, stop_at_first=stop_at_first)
        for name, (lhs, rhs) in unirel_words(d, dcheck).items()
    }


def verify_certificate(cert: ExtensionCertificate, n: int | None = None) -> dict[str, VerifyReport]:
    return verify_extension_relations(cert.source, cert.check, n)


def exhaustive_check_search(d: DiagonalUnitary, max_level: int, n: int | None = None) -> list[DiagonalUnitary]:
    """Every ``dc`` of level ``<= max_level`` satisfying both extension relations for ``d``.

    Candidates range over tables with entries in ``(1/den) Z``, ``den`` the turn
    denominator of ``d``.  That grid is complete: the relations force every
    entry of a localized solution into the group generated by the entries of
    ``d``.
    """
    if not d.is_exact:
        raise ValueError("exhaustive search needs an exact d")
    n = default_window(max(d.level, max_level)) if n is None else n
    den = d.den
    found = []
    for level in range(max_level + 1):
        for nums in itertools.product(range(den), repeat=1 << level):
            cand = DiagonalUnitary(level, list(nums), den)
            if cand.level != level:
                continue  # already tried at a lower level
            reports = verify_extension_relations(d, cand, n, stop_at_first=True)
            if all(rep.passed for rep in reports.values()):
                found.append(cand)
    return found


def point_spectrum(d: DiagonalUnitary, which: str) -> Phase:
    """The eigenvalue of ``d S2`` (eigenvector ``e_0``) or ``d S1`` (eigenvector ``e_{-1}``)."""
    if which not in ("S1", "S2"):
        raise ValueError(f"which must be 'S1' or 'S2', got {which!r}")
    fixed = 0 if which == "S2" else -1
    lam = d.eval_at(fixed)
    res = apply_word(word(D(d), Gen(which)), fixed, 4)
    if not (isinstance(res, Amplitude) and res.index == fixed and res.amplitude == lam):
        raise RuntimeError(f"e_{fixed} is not an eigenvector of d {which}")
    return lam


# -- the sequences d_k and x_k ----------------------------------------------------


@dataclass
class PartialProducts:
    products: list[DiagonalUnitary]
    # window index -> first k from which d_k(j) no longer changes (within the computed range)
    stabilization: dict[int, int]


def _dk_entry(d: DiagonalUnitary, k: int, j: int) -> Phase:
    # d_k(j) = prod_{i<k} phi^i(d)(j) = prod_{i<k} d(floor(j / 2^i))
    val = ONE
    for i in range(k):
        val = val * d.eval_at(j >> i)
    return val


def partial_products(d: DiagonalUnitary, count: int, n: int | None = None) -> PartialProducts:
    """``d_k = d phi(d) ... phi^(k-1)(d)`` for ``k = 1..count`` as exact tables."""
    check_level(d.level + count - 1)
    n = default_window(d.level) if n is None else n
    products = []
    for k in range(1, count + 1):
        level = d.level + k - 1
        products.append(DiagonalUnitary.from_phases([_dk_entry(d, k, r) for r in range(1 << level)]))
    stab = {}
    for j in range(-n, n):
        vals = [p.eval_at(j) for p in products]
        first = len(vals)
        while first > 1 and vals[first - 2] == vals[-1]:
            first -= 1
        stab[j] = first
    return PartialProducts(products, stab)


@dataclass
class XSequence:
    alpha: Phase
    window: int
    # entries[k-1][m] is the diagonal entry of x_k at e_m: a Phase, or 0 where Q_k kills e_m
    entries: list[dict[int, Union[Phase, int]]]
    # first k with x_j = check on the whole window for every j in k..count, or None
    stable_from: int | None
    # per window index: first k from which x_j(m) = check(m) for all later j, or None
    entry_stable_from: dict[int, int | None]


class _WindowTable:
    """Entries of a diagonal known only on a window of indices."""

    def __init__(self, entries: dict[int, Phase]):
        self.entries = entries

    def eval_at(self, m: int) -> Phase:
        return self.entries[m]


def _window_products(d: DiagonalUnitary, count: int, lo: int, hi: int) -> list[_WindowTable]:
    # d_k(j) = d_{k-1}(j) * phi^(k-1)(d)(j), and phi^i(d)(j) = d(floor(j / 2^i))
    tables, cur = [], {j: ONE for j in range(lo, hi)}
    for k in range(1, count + 1):
        cur = {j: v * d.eval_at(j >> (k - 1)) for j, v in cur.items()}
        tables.append(_WindowTable(cur))
    return tables


@functools.lru_cache(maxsize=64)
def q_projection_entries(count: int, n: int) -> list[dict[int, int]]:
    """Diagonal of ``Q_k = |e_0><e_0| + sum_{i<k} S2^i S1 S1* (S2*)^i`` on ``[-n, n)``, ``k = 1..count``."""
    hits = {m: (1 if m == 0 else 0) for m in range(-n, n)}
    out = []
    for i in range(count):
        proj = word(*([S2] * i), S1, S1_STAR, *([S2_STAR] * i))
        for m in range(-n, n):
            res = apply_word(proj, m, n)
            if isinstance(res, Amplitude) and res.index == m:
                hits[m] += 1
        out.append(dict(hits))
    return out


def x_sequence(cert: ExtensionCertificate, count: int, n: int | None = None) -> XSequence:
    """Diagonal of ``x_k = (alpha - 1)|e_0><e_0| + Q_k d_k U d_k* U*`` on the window.

    ``d`` is the gauge-normalized source (``d(0) = d(-1) = 1``) and
    ``alpha = check(0)``.
    """
    dnorm = cert.source.scale(cert.gauge.conj())
    check_level(dnorm.level + count - 1)
    n = default_window(cert.source.level) if n is None else n
    alpha = cert.check.eval_at(0)
    qs = q_projection_entries(count, n)
    entries = []
    for k, dk in enumerate(_window_products(dnorm, count, -n - 1, n + 1), start=1):
        conj_word = word(Diag(dk, False, "d_k"), U, Diag(dk, True, "d_k"), U_STAR)
        row = {}
        for m in range(-n, n):
            res = apply_word(conj_word, m, n + 1)
            if not (isinstance(res, Amplitude) and res.index == m):
                raise RuntimeError(f"d_k U d_k* U* is not diagonal at e_{m}")
            y = res.amplitude
            if m == 0:
                # (alpha - 1) + y with y = d_k(0) conj(d_k(-1)) = 1 after normalization
                if not y.is_one():
                    raise RuntimeError("normalized d_k(0) conj(d_k(-1)) != 1")
                row[m] = alpha
            elif qs[k - 1][m]:
                row[m] = y
            else:
                row[m] = 0
        entries.append(row)
    target = {m: cert.check.eval_at(m) for m in range(-n, n)}
    entry_stable = {}
    for m in range(-n, n):
        first = None
        for k in range(count, 0, -1):
            val = entries[k - 1][m]
            if isinstance(val, Phase) and val == target[m]:
                first = k
            else:
                break
        entry_stable[m] = first
    stable_from = None
    if all(v is not None for v in entry_stable.values()):
        stable_from = max(entry_stable.values())
    return XSequence(alpha, n, entries, stable_from, entry_stable)


def intertwining_holds(d: DiagonalUnitary, phi_d: DiagonalUnitary, n: int | None = None) -> bool:
    """``S_i D(d) = D(phi_d) S_i`` for both ``i`` on the safe window."""
    n = default_window(d.level + 1) if n is None else n
    return all(
        verify_identity(word(s, D(d)), word(D(phi_d), s), n).passed for s in (S1, S2)
    )


def diagonal_entries(w: GenWord, n: int) -> dict[int, Phase]:
    """Diagonal of a word that maps every in-window ``e_m`` to a multiple of itself."""
    out = {}
    for m in range(-n, n):
        res = apply_word(w, m, n)
        if isinstance(res, Amplitude) and res.index == m:
            out[m] = res.amplitude
    return out
