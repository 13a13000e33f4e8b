"""End-to-end claim checks producing self-validated reports."""
from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import pi, prod, sqrt
from typing import Any, Sequence

import numpy as np

from .bell import (
    PDSpec,
    ch_row,
    ld_vertices,
    lf_vertices,
    pd_vertices,
    sw_scenario,
    sw_vertices,
)
from .polytope import (
    Canonicalizer,
    Inequality,
    Outside,
    SymmetryGroup,
    VPolytope,
    affine_hull,
    compare_polytopes,
    facet_enum,
    is_facet,
    membership,
)
from .polytope.ops import PolytopeComparison
from .quantum import (
    SequentialProtocol,
    StateVector,
    bell_state,
    born_probabilities,
    polarization_projectors,
    sequential_probabilities,
)
from .scenario import Scenario, format_fraction, rationalize_behaviour

MAX_VERTICES = 10**5
QUANTUM_CH_VALUE = (sqrt(2) - 1) / 2


class ScaleError(ValueError):
    """Requested enumeration exceeds the desk-scale guard."""


def max_dim() -> int:
    return int(os.environ.get("LFPOLY_MAX_DIM", "64"))


def check_scale(dim: int, n_vertices: int = 0) -> None:
    if dim > max_dim():
        raise ScaleError(f"dimension {dim} exceeds the limit {max_dim()} (set LFPOLY_MAX_DIM to override)")
    if n_vertices > MAX_VERTICES:
        raise ScaleError(f"{n_vertices} candidate vertices exceed the limit {MAX_VERTICES}")


@dataclass
class VerificationReport:
    claim_id: str
    parameters: dict[str, Any]
    passed: bool
    witnesses: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def outcome(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def summary_line(self, witness_file: str = "-") -> str:
        return f"CLAIM {self.claim_id} {self.outcome} {witness_file}"

    def to_text(self, timing: bool = True) -> str:
        params = ", ".join(f"{k}={v}" for k, v in self.parameters.items())
        lines = [f"claim: {self.claim_id}", f"parameters: {params}", f"outcome: {self.outcome}"]
        lines += [f"  {n}" for n in self.notes]
        if timing:
            lines.append(f"wall time: {self.wall_time:.3f} s")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {"claim": self.claim_id, "parameters": self.parameters, "outcome": self.outcome,
             "witnesses": self.witnesses, "notes": self.notes},
            indent=1, sort_keys=True, default=_jsonable,
        )


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return sorted(obj) if isinstance(obj, (set, frozenset)) else list(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    raise TypeError(f"cannot serialize {type(obj)}")


def _sparse(weights: Sequence[Fraction]) -> list[list]:
    return [[i, format_fraction(w)] for i, w in enumerate(weights) if w]


def _row_text(row: Inequality) -> list[str]:
    return [format_fraction(v) for v in row.row]


def _certified_comparison(v1: VPolytope, v2: VPolytope, jobs: int = 1) -> tuple[PolytopeComparison, bool]:
    cmp = compare_polytopes(v1, v2, jobs)
    # re-check every certificate from scratch
    ok = all(r.check(p, v2) for r, p in zip(cmp.forward, v1.vertices))
    ok &= all(r.check(p, v1) for r, p in zip(cmp.backward, v2.vertices))
    return cmp, ok


def _comparison_witnesses(cmp: PolytopeComparison) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for name, results in (("first_in_second", cmp.forward), ("second_in_first", cmp.backward)):
        out[name] = [
            {"vertex": i, "inside": True, "weights": _sparse(r.weights)} if r.inside
            else {"vertex": i, "inside": False, "separator": _row_text(r.separator)}
            for i, r in enumerate(results)
        ]
    return out


def verify_theorem5(rounds: int, bob_outcomes: Sequence[int] = (2, 2), friend_outcomes: int = 2,
                    final_outcomes: int = 2, check_facets: bool = True, jobs: int = 1) -> VerificationReport:
    """Sequential-scenario LF polytope equals the local deterministic polytope."""
    t0 = time.perf_counter()
    s = sw_scenario(rounds, friend_outcomes, final_outcomes, bob_outcomes)
    check_scale(s.dim, prod(s.alice_outcomes) * prod(s.bob_outcomes))
    sw = sw_vertices(rounds, friend_outcomes, final_outcomes, bob_outcomes)
    ld = ld_vertices(s)
    cmp, certs_ok = _certified_comparison(sw, ld, jobs)
    notes = [f"effective scenario: {s.header()}", f"SW vertices: {len(sw)}, LD vertices: {len(ld)}"]
    # determinism on friend rounds and Bob's marginal independent of Alice's input
    determinism = all(
        sum((v[s.index(x, y, a, b)] for b in range(s.bob_outcomes[y])), Fraction(0)) in (0, 1)
        for v in sw.vertices for x in range(rounds) for y in range(s.bob_inputs)
        for a in range(s.alice_outcomes[x])
    )
    bob_marginals_fixed = all(
        len({sum((v[s.index(x, y, a, b)] for a in range(s.alice_outcomes[x])), Fraction(0))
             for x in range(s.alice_inputs)}) == 1
        for v in sw.vertices for y in range(s.bob_inputs) for b in range(s.bob_outcomes[y])
    )
    notes.append(f"friend rounds deterministic: {determinism}; Bob marginal input-independent: {bob_marginals_fixed}")
    witnesses = {"sw_vertices": len(sw), "ld_vertices": len(ld), **_comparison_witnesses(cmp)}
    facets_ok = True
    if check_facets:
        ld_h = facet_enum(ld)
        sw_h = facet_enum(sw)
        bad_sw = [(i, j) for j, f in enumerate(ld_h.inequalities) for i, v in enumerate(sw.vertices) if f.evaluate(v) < 0]
        bad_ld = [(i, j) for j, f in enumerate(sw_h.inequalities) for i, v in enumerate(ld.vertices) if f.evaluate(v) < 0]
        facets_ok = not bad_sw and not bad_ld
        notes.append(f"LD facets: {len(ld_h.inequalities)}, SW facets: {len(sw_h.inequalities)}, "
                     f"cross violations: {len(bad_sw) + len(bad_ld)}")
        witnesses["facet_cross_violations"] = bad_sw + bad_ld
    w = cmp.witness()
    if w is not None:
        side, idx, res = w
        notes.append(f"counterexample: vertex {idx} of the {side} polytope is outside the other")
    passed = cmp.equal and certs_ok and determinism and bob_marginals_fixed and facets_ok
    return VerificationReport(
        "theorem5",
        {"R": rounds, "bob": list(bob_outcomes), "friend_outcomes": friend_outcomes, "final_outcomes": final_outcomes},
        passed, witnesses, notes, time.perf_counter() - t0,
    )


def verify_woodhead(s: Scenario, k: int, det_bob: Sequence[int] = (), jobs: int = 1) -> VerificationReport:
    """All of Alice's inputs but ``k`` deterministic collapses PD onto LD."""
    t0 = time.perf_counter()
    check_scale(s.dim)
    det_alice = frozenset(x for x in range(s.alice_inputs) if x != k)
    spec = PDSpec(s, det_alice, frozenset(det_bob))
    pd = pd_vertices(spec)
    ld = ld_vertices(s)
    cmp, certs_ok = _certified_comparison(pd, ld, jobs)
    notes = [f"scenario: {s.header()}", f"PD vertices: {len(pd)}, LD vertices: {len(ld)}"]
    w = cmp.witness()
    if w is not None:
        notes.append(f"counterexample: vertex {w[1]} of the {w[0]} polytope is outside the other")
    return VerificationReport(
        "woodhead",
        {"scenario": s.header(), "k": k, "det_bob": sorted(det_bob)},
        cmp.equal and certs_ok,
        {"pd_vertices": len(pd), "ld_vertices": len(ld), **_comparison_witnesses(cmp)},
        notes, time.perf_counter() - t0,
    )


def ch_rows_lifted(s: Scenario) -> list[tuple[Inequality, set[int], set[int]]]:
    """Distinct CH rows on every pair of binary inputs, with the inputs they involve."""
    group = SymmetryGroup.for_scenario(s)
    canon = Canonicalizer(group)
    seen, out = set(), []
    for g in range(group.order):
        row = group.act_on_row(g, ch_row(s))
        key = canon.reduce(row)
        if key in seen:
            continue
        seen.add(key)
        xs = {s.labels[i][0] for i, c in enumerate(row.coeffs) if c}
        ys = {s.labels[i][1] for i, c in enumerate(row.coeffs) if c}
        out.append((row, xs, ys))
    return out


def verify_lf_gap(M: int) -> VerificationReport:
    """LF with one friend per side equals LD for two settings and exceeds it for three."""
    t0 = time.perf_counter()
    if M not in (2, 3):
        raise ScaleError("only M = 2 and M = 3 are supported")
    s = Scenario.homogeneous(M, 2, M, 2)
    check_scale(s.dim)
    lf, ld = lf_vertices(s), ld_vertices(s)
    notes = [f"LF vertices: {len(lf)}, LD vertices: {len(ld)}"]
    witnesses: dict[str, Any] = {"lf_vertices": len(lf), "ld_vertices": len(ld)}
    if M == 2:
        cmp, certs_ok = _certified_comparison(lf, ld)
        witnesses.update(_comparison_witnesses(cmp))
        notes.append(f"LF = LD: {cmp.equal}")
        return VerificationReport("lf_gap", {"M": M}, cmp.equal and certs_ok, witnesses, notes,
                                  time.perf_counter() - t0)
    # outside witness
    outside = None
    for i, v in enumerate(lf.vertices):
        r = membership(v, ld)
        if not r.inside:
            outside = (i, r)
            break
    gap_ok = outside is not None and outside[1].check(lf.vertices[outside[0]], ld)
    if outside is not None:
        i, r = outside
        witnesses["outside_vertex"] = {"index": i, "point": [format_fraction(c) for c in lf.vertices[i]],
                                       "separator": _row_text(r.separator)}
        notes.append(f"LF vertex {i} lies outside LD; separator value {r.separator.evaluate(lf.vertices[i])}")
    # facet classes
    group = SymmetryGroup.for_scenario(s)
    canon = Canonicalizer(group)
    lf_h, ld_h = facet_enum(lf), facet_enum(ld)
    ld_classes = {canon.canonical(f) for f in ld_h.inequalities}
    lf_canon = [canon.canonical(f) for f in lf_h.inequalities]
    new = [i for i, c in enumerate(lf_canon) if c not in ld_classes]
    notes.append(f"LD facets: {len(ld_h.inequalities)} in {len(ld_classes)} classes; "
                 f"LF facets: {len(lf_h.inequalities)} in {len(set(lf_canon))} classes, "
                 f"{len(new)} facets in classes absent from LD")
    witnesses["lf_facets"] = len(lf_h.inequalities)
    witnesses["ld_facet_classes"] = len(ld_classes)
    witnesses["lf_facet_classes"] = len(set(lf_canon))
    if new:
        witnesses["non_bell_facet"] = _row_text(lf_h.inequalities[new[0]])
    # CH rows stay LF facets exactly when they involve a friend input
    hull_dim = affine_hull(lf.vertices).dim
    ch_ok = True
    ch_counts = {"with_friend_facet": 0, "with_friend_total": 0, "without_friend_facet": 0, "without_friend_total": 0}
    for row, xs, ys in ch_rows_lifted(s):
        facet = is_facet(row.negated(), lf, hull_dim)
        key = "with_friend" if (0 in xs or 0 in ys) else "without_friend"
        ch_counts[f"{key}_total"] += 1
        ch_counts[f"{key}_facet"] += facet
        ch_ok &= facet == (key == "with_friend")
    witnesses["ch_rows"] = ch_counts
    notes.append(f"CH rows involving a friend input that are LF facets: "
                 f"{ch_counts['with_friend_facet']}/{ch_counts['with_friend_total']}; others: "
                 f"{ch_counts['without_friend_facet']}/{ch_counts['without_friend_total']}")
    return VerificationReport("lf_gap", {"M": M}, bool(gap_ok and new and ch_ok), witnesses, notes,
                              time.perf_counter() - t0)


def _ch_canonical(s: Scenario, canon: Canonicalizer) -> tuple[int, ...]:
    return canon.canonical(ch_row(s).negated())


def verify_quantum_violation(alice_angles: Sequence[float] = (0.0, pi / 4),
                             bob_angles: Sequence[float] = (pi / 8, -pi / 8),
                             state: StateVector | None = None,
                             expected: float | None = QUANTUM_CH_VALUE,
                             sequential: bool = False,
                             tol: float = 1e-10) -> VerificationReport:
    """Evaluate the CH expression on a two-qubit setup and certify (non)locality.

    With ``sequential=True`` the two Alice angles are used as the friend's
    measurements z_1, z_2 of a two-round protocol and the behaviour is read
    off the friend rounds.
    """
    t0 = time.perf_counter()
    state = bell_state("phi+") if state is None else state
    bob = [polarization_projectors(t) for t in bob_angles]
    if sequential:
        proto = SequentialProtocol(state, tuple(polarization_projectors(t) for t in alice_angles),
                                   polarization_projectors(0.0), tuple(bob))
        full_s, full_v = sequential_probabilities(proto)
        s = Scenario(full_s.alice_outcomes[:-1], full_s.bob_outcomes)
        values = full_v[: s.dim]
    else:
        s, values = born_probabilities(state, [polarization_projectors(t) for t in alice_angles], bob)
    value = ch_row(s).evaluate_float(values)
    notes = [f"CH value: {value:.12f}"]
    value_ok = expected is None or abs(value - expected) < tol
    if expected is not None:
        notes.append(f"expected {expected:.12f}, |error| = {abs(value - expected):.2e}")
    p = rationalize_behaviour(s, values)
    ld = ld_vertices(s)
    ld_h = facet_enum(ld)
    res = membership(p, ld, ld_h.inequalities)
    certified = res.check(p.coords, ld)
    witnesses: dict[str, Any] = {"ch_value": value, "behaviour": [format_fraction(c) for c in p.coords]}
    if isinstance(res, Outside):
        canon = Canonicalizer(SymmetryGroup.for_scenario(s))
        in_ch_orbit = canon.canonical(res.separator) == _ch_canonical(s, canon)
        witnesses["separator"] = _row_text(res.separator)
        notes.append(f"outside LD; separator in CH class: {in_ch_orbit}")
        member_ok = value > 0 and in_ch_orbit
    else:
        witnesses["weights"] = _sparse(res.weights)
        notes.append("inside LD")
        member_ok = value <= tol
    return VerificationReport(
        "quantum_violation",
        {"alice": list(alice_angles), "bob": list(bob_angles), "sequential": sequential},
        bool(value_ok and member_ok and certified), witnesses, notes, time.perf_counter() - t0,
    )


def verify_all() -> list[VerificationReport]:
    chsh = Scenario.homogeneous(2, 2, 2, 2)
    reports = [verify_quantum_violation(), verify_quantum_violation(sequential=True)]
    for k in range(2):
        for det_bob in ((), (0,), (1,), (0, 1)):
            reports.append(verify_woodhead(chsh, k, det_bob))
    three = Scenario.homogeneous(3, 2, 3, 2)
    reports += [verify_woodhead(three, k) for k in range(3)]
    reports += [verify_lf_gap(2), verify_lf_gap(3)]
    reports += [verify_theorem5(r) for r in (1, 2, 3)]
    return reports
