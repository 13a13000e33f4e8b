"""Born-rule behaviours, measurement dilation and the sequential friend protocol.

Amplitudes are complex doubles.  Behaviours leave this module as exact
rationals (see ``scenario.rationalize_behaviour``) with the float values kept
on ``Behaviour.numeric`` for tolerance checks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, pi, sin, sqrt
from typing import Sequence

import numpy as np

from .scenario import Behaviour, Scenario, rationalize_behaviour

TOL = 1e-12


class QuantumError(ValueError):
    pass


@dataclass(frozen=True)
class StateVector:
    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dims", dims)
        if amps.size != int(np.prod(dims)):
            raise QuantumError(f"{amps.size} amplitudes do not fit dimensions {dims}")
        if abs(np.linalg.norm(amps) - 1) > TOL:
            raise QuantumError(f"state norm {np.linalg.norm(amps)} differs from 1")


@dataclass(frozen=True)
class ProjectiveMeasurement:
    projectors: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        ps = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        object.__setattr__(self, "projectors", ps)
        d = ps[0].shape[0]
        for i, p in enumerate(ps):
            if p.shape != (d, d):
                raise QuantumError("projectors must be square and of equal size")
            if np.abs(p - p.conj().T).max() > TOL or np.abs(p @ p - p).max() > TOL:
                raise QuantumError(f"projector {i} is not a Hermitian idempotent")
            for q in ps[i + 1:]:
                if np.abs(p @ q).max() > TOL:
                    raise QuantumError("projectors are not pairwise orthogonal")
        if np.abs(sum(ps) - np.eye(d)).max() > TOL:
            raise QuantumError("projectors do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def outcomes(self) -> int:
        return len(self.projectors)


def ket_phi(phi: float) -> np.ndarray:
    return np.array([cos(phi), sin(phi)], dtype=complex)


def polarization_projectors(phi: float) -> ProjectiveMeasurement:
    """Outcome 0 (+1) projects on |phi>, outcome 1 (-1) on |phi + pi/2>."""
    plus, minus = ket_phi(phi), ket_phi(phi + pi / 2)
    return ProjectiveMeasurement((np.outer(plus, plus.conj()), np.outer(minus, minus.conj())))


def bell_state(kind: str = "phi+") -> StateVector:
    """|Phi+-> = (|HH> +- |VV>)/sqrt2 and |Psi+-> = (|HV> +- |VH>)/sqrt2."""
    r = 1 / sqrt(2)
    amps = {
        "phi+": [r, 0, 0, r],
        "phi-": [r, 0, 0, -r],
        "psi+": [0, r, r, 0],
        "psi-": [0, r, -r, 0],
    }[kind]
    return StateVector(np.array(amps, dtype=complex), (2, 2))


def born_probabilities(state: StateVector, alice: Sequence[ProjectiveMeasurement],
                       bob: Sequence[ProjectiveMeasurement]) -> tuple[Scenario, np.ndarray]:
    if len(state.dims) != 2:
        raise QuantumError("expected a bipartite state")
    da, db = state.dims
    if any(m.dim != da for m in alice) or any(m.dim != db for m in bob):
        raise QuantumError("measurement dimension does not match the state")
    s = Scenario(tuple(m.outcomes for m in alice), tuple(m.outcomes for m in bob))
    psi = state.amplitudes.reshape(da, db)
    values = np.empty(s.dim)
    for x, y, a, b in s.labels:
        # <psi| Pa (x) Pb |psi>
        v = np.vdot(psi, alice[x].projectors[a] @ psi @ bob[y].projectors[b].T)
        values[s.index(x, y, a, b)] = v.real
    return s, values


def born_behaviour(state: StateVector, alice: Sequence[ProjectiveMeasurement],
                   bob: Sequence[ProjectiveMeasurement]) -> Behaviour:
    s, values = born_probabilities(state, alice, bob)
    return rationalize_behaviour(s, values)


def _shift(register_dim: int, k: int) -> np.ndarray:
    """Cyclic shift |j> -> |j + k mod r>, so the ready state |0> goes to |k>."""
    return np.roll(np.eye(register_dim), k, axis=0)


def dilate_measurement(m: ProjectiveMeasurement, register_dim: int | None = None) -> np.ndarray:
    """Unitary on system (x) register recording outcome k in the register.

    U = sum_k P_k (x) X^k, hence U (P_k psi (x) |0>) = P_k psi (x) |k>.
    """
    r = m.outcomes if register_dim is None else register_dim
    if r < m.outcomes:
        raise QuantumError(f"register of dimension {r} cannot hold {m.outcomes} outcomes")
    return sum(np.kron(p, _shift(r, k)) for k, p in enumerate(m.projectors))


@dataclass(frozen=True)
class SequentialProtocol:
    initial_state: StateVector  # Charlie's particle (x) Bob's particle
    friend_measurements: tuple[ProjectiveMeasurement, ...]  # z_1..z_R, fixed across runs
    final_alice: ProjectiveMeasurement
    bob_measurements: tuple[ProjectiveMeasurement, ...]
    register_dim: int | None = None

    @property
    def rounds(self) -> int:
        return len(self.friend_measurements)

    @property
    def register(self) -> int:
        need = max(m.outcomes for m in self.friend_measurements)
        r = need if self.register_dim is None else self.register_dim
        if r < need:
            raise QuantumError("friend register too small")
        return r

    def scenario(self) -> Scenario:
        return Scenario(
            tuple(m.outcomes for m in self.friend_measurements) + (self.final_alice.outcomes,),
            tuple(m.outcomes for m in self.bob_measurements),
        )


def _on_lab(U: np.ndarray, bob_dim: int) -> np.ndarray:
    return np.kron(U, np.eye(bob_dim))


def sequential_probabilities(proto: SequentialProtocol) -> tuple[Scenario, np.ndarray]:
    if not proto.friend_measurements:
        raise QuantumError("at least one friend round is required")
    dc, db = proto.initial_state.dims
    r = proto.register
    if any(m.dim != dc for m in proto.friend_measurements) or proto.final_alice.dim != dc:
        raise QuantumError("friend/final measurement dimension does not match Charlie's particle")
    if any(m.dim != db for m in proto.bob_measurements):
        raise QuantumError("Bob's measurement dimension does not match his particle")
    s = proto.scenario()
    ready = np.zeros(r, dtype=complex)
    ready[0] = 1
    # ordering: particle (x) register (x) Bob
    psi = np.einsum("cb,r->crb", proto.initial_state.amplitudes.reshape(dc, db), ready).reshape(-1)
    unitaries = [_on_lab(dilate_measurement(z, r), db) for z in proto.friend_measurements]
    values = np.empty(s.dim)
    state = psi
    for i, U in enumerate(unitaries):
        measured = U @ state
        # open the lab: read the register jointly with Bob
        t = measured.reshape(dc, r, db)
        for y, mb in enumerate(proto.bob_measurements):
            for a in range(s.alice_outcomes[i]):
                branch = t[:, a, :]
                for b, pb in enumerate(mb.projectors):
                    values[s.index(i, y, a, b)] = np.vdot(branch, branch @ pb.T).real
        # otherwise reverse the friend's measurement and move to the next round
        state = U.conj().T @ measured
    t = state.reshape(dc, r, db)
    if np.abs(t[:, 1:, :]).max(initial=0) > 1e-10:
        raise QuantumError("reversal did not restore the friend's ready state")
    lab = t[:, 0, :]
    R = proto.rounds
    for y, mb in enumerate(proto.bob_measurements):
        for a, pa in enumerate(proto.final_alice.projectors):
            for b, pb in enumerate(mb.projectors):
                values[s.index(R, y, a, b)] = np.vdot(lab, pa @ lab @ pb.T).real
    return s, values


def sequential_behaviour(proto: SequentialProtocol) -> Behaviour:
    s, values = sequential_probabilities(proto)
    return rationalize_behaviour(s, values)


def ch_demo_setup() -> tuple[StateVector, list[ProjectiveMeasurement], list[ProjectiveMeasurement]]:
    """|Phi+>, Alice at angles 0 and pi/4, Bob at pi/8 and -pi/8."""
    alice = [polarization_projectors(0.0), polarization_projectors(pi / 4)]
    bob = [polarization_projectors(pi / 8), polarization_projectors(-pi / 8)]
    return bell_state("phi+"), alice, bob


# -- text format -------------------------------------------------------------

@dataclass
class QuantumSetup:
    state: StateVector
    alice: list[ProjectiveMeasurement]
    bob: list[ProjectiveMeasurement]
    friend: list[ProjectiveMeasurement]
    final: ProjectiveMeasurement | None

    def protocol(self) -> SequentialProtocol:
        if not self.friend or self.final is None:
            raise QuantumError("a sequential setup needs 'friend:' and 'final:' lines")
        return SequentialProtocol(self.state, tuple(self.friend), self.final, tuple(self.bob))


def parse_setup(text: str) -> QuantumSetup:
    """Read ``dims d1 d2``, amplitude lines ``re im``, then measurement lines.

    Measurements are either angle lists for qubit polarization
    (``alice: 0 0.785``), or explicit projectors introduced by
    ``projector <party> <setting> <outcome>`` followed by d rows of d
    complex entries (Python syntax, e.g. ``0.5+0j``).  Parties are
    ``alice``, ``bob``, ``friend`` and ``final``.
    """
    lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith("dims"):
        raise QuantumError("setup must start with 'dims d1 d2'")
    dims = tuple(int(t) for t in lines[0].split()[1:])
    n = int(np.prod(dims))
    try:
        amps = [complex(float(re), float(im)) for re, im in (ln.split() for ln in lines[1:1 + n])]
    except ValueError as exc:
        raise QuantumError("amplitude lines must read 're im'") from exc
    state = StateVector(np.array(amps), dims)
    angles: dict[str, list[float]] = {}
    explicit: dict[str, dict[int, dict[int, np.ndarray]]] = {}
    i = 1 + n
    while i < len(lines):
        ln = lines[i]
        if ln.startswith("projector"):
            _, party, x, k = ln.split()
            d = dims[1] if party == "bob" else dims[0]
            rows = [[complex(t) for t in lines[i + 1 + j].split()] for j in range(d)]
            explicit.setdefault(party, {}).setdefault(int(x), {})[int(k)] = np.array(rows)
            i += 1 + d
            continue
        key, _, rest = ln.partition(":")
        if key not in ("alice", "bob", "friend", "final"):
            raise QuantumError(f"unknown setup line {ln!r}")
        angles[key] = [float(t) for t in rest.split()]
        i += 1

    def measurements(party: str) -> list[ProjectiveMeasurement]:
        if party in explicit:
            return [ProjectiveMeasurement(tuple(ks[k] for k in sorted(ks)))
                    for _, ks in sorted(explicit[party].items())]
        return [polarization_projectors(phi) for phi in angles.get(party, [])]

    final = measurements("final")
    if len(final) > 1:
        raise QuantumError("only one final measurement is allowed")
    return QuantumSetup(state, measurements("alice"), measurements("bob"), measurements("friend"),
                        final[0] if final else None)
