"""JSON and CSV forms of phases, unitaries, certificates and obstructions."""

from __future__ import annotations

import csv
import io
import json
from typing import Any

from .cantor import LevelCapExceeded, Residue, Word, check_level, residue_to_word
from .diagonal import DiagonalUnitary
from .extend import (
    CocycleObstruction,
    ExtensionCertificate,
    Obstruction,
    PointSpectrumMismatch,
)
from .phases import PhaseError, phase_from_json, phase_to_json


class SpecError(ValueError):
    """Malformed unitary spec."""


class BadLevel(SpecError):
    pass


class DuplicateCylinder(SpecError):
    pass


def unitary_to_json(d: DiagonalUnitary) -> dict:
    return {"level": d.level, "phases": [phase_to_json(p) for p in d.table]}


def _pairs_hook(pairs):
    keys = [k for k, _ in pairs]
    if len(keys) != len(set(keys)):
        dup = next(k for k in keys if keys.count(k) > 1)
        raise DuplicateCylinder(f"duplicate key {dup!r}")
    return dict(pairs)


def load_json(text: str) -> Any:
    """``json.loads`` that rejects duplicate object keys."""
    try:
        return json.loads(text, object_pairs_hook=_pairs_hook)
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON: {exc}") from exc


def parse_unitary_spec(source: str | dict) -> DiagonalUnitary:
    """Validate ``{"level": k, "phases": [...]}`` or ``{"cylinders": {"1121": phase, ...}}``."""
    obj = load_json(source) if isinstance(source, str) else source
    if not isinstance(obj, dict):
        raise SpecError("unitary spec must be a JSON object")
    if "cylinders" in obj:
        cyl = obj["cylinders"]
        if not isinstance(cyl, dict) or not cyl:
            raise SpecError("'cylinders' must be a nonempty object")
        table = {}
        for key, val in cyl.items():
            try:
                w = Word.parse(key)
            except ValueError as exc:
                raise SpecError(str(exc)) from exc
            if w in table:
                raise DuplicateCylinder(f"cylinder {key!r} given twice")
            table[w] = phase_from_json(val)
        lengths = {w.length for w in table}
        if len(lengths) != 1:
            raise BadLevel("cylinder words must share one length")
        k = check_level(lengths.pop())
        if len(table) != 1 << k:
            raise BadLevel(f"{len(table)} cylinders given, level {k} needs {1 << k}")
        return DiagonalUnitary.from_cylinders(table)
    level = obj.get("level")
    phases = obj.get("phases")
    if not isinstance(level, int) or isinstance(level, bool) or level < 0:
        raise BadLevel(f"bad level {level!r}")
    check_level(level)
    if not isinstance(phases, list):
        raise SpecError("'phases' must be a list")
    if len(phases) != 1 << level:
        raise BadLevel(f"{len(phases)} phases given, level {level} needs {1 << level}")
    return DiagonalUnitary.from_phases([phase_from_json(p) for p in phases])


def certificate_to_json(cert: ExtensionCertificate) -> dict:
    return {
        "gauge": phase_to_json(cert.gauge),
        "inner": unitary_to_json(cert.inner),
        "check": unitary_to_json(cert.check),
        "source": unitary_to_json(cert.source),
    }


def certificate_from_json(obj: dict) -> ExtensionCertificate:
    try:
        return ExtensionCertificate(
            phase_from_json(obj["gauge"]),
            parse_unitary_spec(obj["inner"]),
            parse_unitary_spec(obj["check"]),
            parse_unitary_spec(obj["source"]),
        )
    except KeyError as exc:
        raise SpecError(f"certificate is missing {exc}") from exc


def obstruction_to_json(obs: Obstruction) -> dict:
    if isinstance(obs, PointSpectrumMismatch):
        return {
            "kind": "point_spectrum_mismatch",
            "d0": phase_to_json(obs.d0),
            "dm1": phase_to_json(obs.dm1),
        }
    assert isinstance(obs, CocycleObstruction)
    return {
        "kind": "cocycle_obstruction",
        "cycle": list(obs.cycle),
        "product": phase_to_json(obs.product),
    }


def residue_to_json(r: Residue) -> dict:
    return {"r": r.value, "k": r.level}


def residue_from_json(obj) -> Residue:
    if not isinstance(obj, dict) or set(obj) != {"r", "k"}:
        raise SpecError(f"bad residue {obj!r}; expected {{\"r\": int, \"k\": int}}")
    r, k = obj["r"], obj["k"]
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (r, k)):
        raise SpecError(f"bad residue {obj!r}")
    try:
        return Residue(r, check_level(k))
    except LevelCapExceeded:
        raise
    except ValueError as exc:
        raise SpecError(str(exc)) from exc


CSV_COLUMNS = ["residue", "word", "phase_turn_numerator", "phase_turn_denominator", "angle"]


def unitary_csv_rows(d: DiagonalUnitary) -> list[list]:
    rows = []
    for r, p in enumerate(d.table):
        w = str(residue_to_word(Residue(r, d.level)))
        if p.is_exact:
            rows.append([r, w, p.turn.numerator, p.turn.denominator, ""])
        else:
            rows.append([r, w, "", "", repr(p.radians)])
    return rows


def unitary_to_csv(d: DiagonalUnitary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    writer.writerows(unitary_csv_rows(d))
    return buf.getvalue()


__all__ = [
    "BadLevel",
    "DuplicateCylinder",
    "LevelCapExceeded",
    "PhaseError",
    "SpecError",
    "certificate_from_json",
    "certificate_to_json",
    "load_json",
    "obstruction_to_json",
    "parse_unitary_spec",
    "residue_from_json",
    "residue_to_json",
    "unitary_csv_rows",
    "unitary_to_csv",
    "unitary_to_json",
]
