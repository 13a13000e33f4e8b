"""Text formats for H- and V-representations (cdd-style, exact rationals)."""
from __future__ import annotations

from fractions import Fraction

from ..scenario import format_fraction, parse_fraction
from .types import HPolytope, Inequality, PolytopeError, VPolytope


class FormatError(PolytopeError):
    pass


def _fmt(values) -> str:
    return " ".join(format_fraction(Fraction(v)) for v in values)


def write_hrep(h: HPolytope) -> str:
    rows = [e.row for e in h.equalities] + [r.row for r in h.inequalities]
    lines = ["H-representation"]
    if h.equalities:
        idx = " ".join(str(i + 1) for i in range(len(h.equalities)))
        lines.append(f"linearity {len(h.equalities)} {idx}")
    lines += ["begin", f"{len(rows)} {h.dim + 1} rational"]
    lines += [_fmt(r) for r in rows]
    lines.append("end")
    return "\n".join(lines) + "\n"


def write_vrep(v: VPolytope) -> str:
    lines = ["V-representation", "begin", f"{len(v.vertices)} {v.dim + 1} rational"]
    lines += [_fmt((1, *p)) for p in v.vertices]
    lines.append("end")
    return "\n".join(lines) + "\n"


def _parse_block(text: str):
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("*")]
    if not lines:
        raise FormatError("empty file")
    kind = lines[0]
    if kind not in ("H-representation", "V-representation"):
        raise FormatError(f"unknown header {kind!r}")
    linearity: set[int] = set()
    i = 1
    while i < len(lines) and lines[i] != "begin":
        parts = lines[i].split()
        if parts[0] == "linearity":
            try:
                k = int(parts[1])
                linearity = {int(t) - 1 for t in parts[2:2 + k]}
            except (ValueError, IndexError) as exc:
                raise FormatError(f"bad linearity line {lines[i]!r}") from exc
            if len(linearity) != k:
                raise FormatError("linearity count mismatch")
        i += 1
    if i == len(lines):
        raise FormatError("missing 'begin'")
    try:
        nrows, ncols, numtype = lines[i + 1].split()
        nrows, ncols = int(nrows), int(ncols)
    except (ValueError, IndexError) as exc:
        raise FormatError(f"bad size line {lines[i + 1]!r}") from exc
    if numtype not in ("rational", "integer"):
        raise FormatError(f"only exact number types are supported, got {numtype!r}")
    body = lines[i + 2:i + 2 + nrows]
    if len(body) != nrows or len(lines) <= i + 2 + nrows or lines[i + 2 + nrows] != "end":
        raise FormatError("row count does not match or 'end' missing")
    rows = []
    for ln in body:
        try:
            vals = [parse_fraction(t) for t in ln.split()]
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad number in row {ln!r}") from exc
        if len(vals) != ncols:
            raise FormatError(f"expected {ncols} entries in row {ln!r}")
        rows.append(vals)
    return kind, linearity, ncols, rows


def read_polytope(text: str) -> HPolytope | VPolytope:
    kind, linearity, ncols, rows = _parse_block(text)
    dim = ncols - 1
    if kind == "H-representation":
        eqs = tuple(Inequality.from_row(r) for i, r in enumerate(rows) if i in linearity)
        ineqs = tuple(Inequality.from_row(r) for i, r in enumerate(rows) if i not in linearity)
        return HPolytope(dim, ineqs, eqs)
    if linearity:
        raise FormatError("lines/linearity in a V-representation are not supported")
    if any(r[0] != 1 for r in rows):
        raise FormatError("only vertices (leading 1) are supported in V-representations")
    return VPolytope(dim, tuple(tuple(r[1:]) for r in rows))
