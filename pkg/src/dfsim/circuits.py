"""Logical circuits (Grover, refined Deutsch-Jozsa) and experiment plans.

A plan is the full description of one run: the realized 16-dimensional gate
sequence, where the engineered-noise points sit, and which temporal-averaging
preparation feeds it.  Two realizations of the same logical circuit exist:

* protected  - every logical gate is lifted block-diagonally onto the four
  decoherence-free subspaces;
* unprotected - physical spins 1 and 4 serve directly as the two qubits
  (identity on spins 2 and 3), so the paired-flip noise hits them.

Noise placement: one point after preparation, one after each gate group, and
one more before acquisition.  The Grover sequence has seven gate groups
(equal superposition, oracle, three-part diffusion, and a two-pulse readout
filter that tilts the final populations into the transverse plane and back),
giving nine points by default.  A custom placement may be supplied as a
sorted list of gate-boundary indices (0 = right after preparation,
len(gates) = just before acquisition; duplicates allowed).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import dfs
from .qcore import DEFAULT_TOL, DIM, frobenius_norm, is_unitary, pauli_decompose
from .readout import PreparationStep, steps_for_mode

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)

MODES = ("protected", "unprotected")
ALGORITHMS = ("grover", "deutsch-jozsa")

BASIS_LABELS = ("00", "01", "10", "11")

#: Two-bit boolean functions satisfying the constant-or-balanced promise,
#: keyed by name; values are f over inputs (x1 x2) = 00, 01, 10, 11.
DJ_FUNCTIONS = {
    "const0": (0, 0, 0, 0),
    "const1": (1, 1, 1, 1),
    "x1": (0, 0, 1, 1),
    "not_x1": (1, 1, 0, 0),
    "x2": (0, 1, 0, 1),
    "not_x2": (1, 0, 1, 0),
    "xor": (0, 1, 1, 0),
    "xnor": (1, 0, 0, 1),
}


@dataclass(frozen=True, eq=False)
class LogicalGate:
    label: str
    matrix: np.ndarray  # 4x4 unitary on the two-qubit register


@dataclass(frozen=True, eq=False)
class Gate:
    """A plan gate: logical 4x4 unitary plus its realized 16x16 action."""

    label: str
    logical: np.ndarray
    physical: np.ndarray


@dataclass(frozen=True, eq=False)
class ExperimentPlan:
    mode: str
    algorithm: str
    gates: tuple[Gate, ...]
    decoherence_points: tuple[int, ...]
    preparation: PreparationStep

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        pts = tuple(int(p) for p in self.decoherence_points)
        n = len(self.gates)
        if any(p < 0 or p > n for p in pts):
            raise ValueError(f"placement indices must lie in [0, {n}]")
        if list(pts) != sorted(pts):
            raise ValueError("placement indices must be sorted")
        object.__setattr__(self, "decoherence_points", pts)

    def with_preparation(self, step: PreparationStep) -> "ExperimentPlan":
        return replace(self, preparation=step)


def hadamard_pair() -> np.ndarray:
    """H on both register qubits; prepares the equal superposition from |00>."""
    return np.kron(_H, _H)


def phase_flip(index: int) -> np.ndarray:
    """Diagonal unitary flipping the sign of one basis state."""
    m = np.eye(4, dtype=complex)
    m[index, index] = -1.0
    return m


def grover_gates(marked: str = "11") -> tuple[LogicalGate, ...]:
    """One-iteration Grover circuit for a four-item search, exact by construction.

    Sequence: equal superposition, oracle sign flip on the marked label, then
    the diffusion operator decomposed as H2 . flip(|00>) . H2.  Applied to
    |00> the composite yields the marked state up to a global phase.
    """
    if marked not in BASIS_LABELS:
        raise ValueError(f"marked label must be one of {BASIS_LABELS}, got {marked!r}")
    hh = hadamard_pair()
    return (
        LogicalGate("superpose", hh),
        LogicalGate(f"oracle:{marked}", phase_flip(int(marked, 2))),
        LogicalGate("diffuse:mix", hh),
        LogicalGate("diffuse:flip00", phase_flip(0)),
        LogicalGate("diffuse:unmix", hh),
    )


def dj_function(function) -> tuple[int, ...]:
    """Normalize a Deutsch-Jozsa function spec (name or truth table) and check the promise."""
    if isinstance(function, str):
        try:
            table = DJ_FUNCTIONS[function]
        except KeyError:
            raise ValueError(f"unknown function name {function!r}") from None
    else:
        table = tuple(int(v) for v in function)
    if len(table) != 4 or any(v not in (0, 1) for v in table):
        raise ValueError("truth table must be 4 bits over inputs 00, 01, 10, 11")
    if sum(table) not in (0, 2, 4):
        raise ValueError("function violates the constant-or-balanced promise")
    return table


def dj_is_constant(function) -> bool:
    return sum(dj_function(function)) in (0, 4)


def dj_gates(function) -> tuple[LogicalGate, ...]:
    """Ancilla-free Deutsch-Jozsa: H2, phase oracle (-1)^f(x), H2.

    The register returns to |00> exactly when f is constant.
    """
    table = dj_function(function)
    oracle = np.diag([(-1.0) ** v for v in table]).astype(complex)
    hh = hadamard_pair()
    name = next((k for k, v in DJ_FUNCTIONS.items() if v == table), "".join(map(str, table)))
    return (
        LogicalGate("superpose", hh),
        LogicalGate(f"oracle:{name}", oracle),
        LogicalGate("unmix", hh),
    )


def readout_gates() -> tuple[LogicalGate, ...]:
    """Two-pulse readout filter: tilt populations into the transverse plane, restore."""
    hh = hadamard_pair()
    return (
        LogicalGate("readout:tilt", hh),
        LogicalGate("readout:restore", hh),
    )


def algorithm_gates(algorithm: str, *, marked: str = "11", function="const0") -> tuple[LogicalGate, ...]:
    if algorithm == "grover":
        return grover_gates(marked)
    if algorithm == "deutsch-jozsa":
        return dj_gates(function)
    raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")


def default_placement(n_gates: int) -> tuple[int, ...]:
    """After preparation, after every gate group, and once more before acquisition."""
    return tuple(range(n_gates + 1)) + (n_gates,)


def embed_on_spins_1_4(u: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Realize a two-qubit unitary on physical spins 1 and 4, identity on 2 and 3."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (4, 4):
        raise ValueError("register unitary must be 4x4")
    if not is_unitary(u, tol):
        raise ValueError("embed_on_spins_1_4 requires a unitary input")
    out = np.zeros((DIM, DIM), dtype=complex)
    for r in range(DIM):
        ra, rb = (r >> 3) & 1, r & 1
        mid = r & 0b0110
        for c in range(DIM):
            if (c & 0b0110) != mid:
                continue
            ca, cb = (c >> 3) & 1, c & 1
            out[r, c] = u[(ra << 1) | rb, (ca << 1) | cb]
    return out


def _realize(gates: tuple[LogicalGate, ...], mode: str) -> tuple[Gate, ...]:
    realized = []
    for g in gates:
        if mode == "protected":
            phys = dfs.lift_logical_unitary(g.matrix)
        else:
            phys = embed_on_spins_1_4(g.matrix)
        realized.append(Gate(g.label, g.matrix, phys))
    return tuple(realized)


def _assemble(
    mode: str,
    algorithm: str,
    *,
    marked: str = "11",
    function="const0",
    preparation: PreparationStep | None = None,
    placement: tuple[int, ...] | None = None,
) -> ExperimentPlan:
    logical = algorithm_gates(algorithm, marked=marked, function=function) + readout_gates()
    gates = _realize(logical, mode)
    if placement is None:
        placement = default_placement(len(gates))
    if preparation is None:
        preparation = steps_for_mode(mode)[0]
    return ExperimentPlan(
        mode=mode,
        algorithm=algorithm,
        gates=gates,
        decoherence_points=tuple(placement),
        preparation=preparation,
    )


def assemble_protected(
    algorithm: str = "grover",
    *,
    marked: str = "11",
    function="const0",
    preparation: PreparationStep | None = None,
    placement: tuple[int, ...] | None = None,
) -> ExperimentPlan:
    """Plan running the algorithm on the encoded register (lifted gates)."""
    return _assemble(
        "protected", algorithm, marked=marked, function=function,
        preparation=preparation, placement=placement,
    )


def assemble_unprotected(
    algorithm: str = "grover",
    *,
    marked: str = "11",
    function="const0",
    preparation: PreparationStep | None = None,
    placement: tuple[int, ...] | None = None,
) -> ExperimentPlan:
    """Plan running the algorithm directly on spins 1 and 4 (no error avoidance)."""
    return _assemble(
        "unprotected", algorithm, marked=marked, function=function,
        preparation=preparation, placement=placement,
    )


def assemble(mode: str, algorithm: str = "grover", **kwargs) -> ExperimentPlan:
    if mode == "protected":
        return assemble_protected(algorithm, **kwargs)
    if mode == "unprotected":
        return assemble_unprotected(algorithm, **kwargs)
    raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def ideal_boundary_deviations(
    plan: ExperimentPlan, preparation: PreparationStep | None = None
) -> list[np.ndarray]:
    """Noise-free deviation matrix at every gate boundary 0..len(gates)."""
    step = preparation if preparation is not None else plan.preparation
    rho = np.asarray(step.deviation, dtype=complex)
    out = [rho]
    for gate in plan.gates:
        rho = gate.physical @ rho @ gate.physical.conj().T
        out.append(rho)
    return out


@dataclass(frozen=True)
class PointDamage:
    """Damage audit entry for one decoherence point."""

    point: int
    boundary: int
    state: str          # Pauli letters of the deviation, or "flip-invariant"
    hits: int           # how many of the two error operators would damage it


def damage_audit(
    plan: ExperimentPlan,
    preparation: PreparationStep | None = None,
    tol: float = 1e-10,
) -> list[PointDamage]:
    """Per-point count of error operators that would alter the ideal state.

    At each noise point the two error operators (XXII then IIXX) are tested
    against the noise-free deviation there: conjugation must return the state
    either unchanged (harmless) or negated (damaging, one unit of n).  Any
    other outcome means the deviation is not a flip eigenstate and the closed
    form (1-2e)^n does not apply; that is reported as an error rather than
    guessed around.
    """
    devs = ideal_boundary_deviations(plan, preparation)
    flips = dfs.flip_matrices()[:2]
    audit = []
    for point, boundary in enumerate(plan.decoherence_points):
        rho = devs[boundary]
        scale = frobenius_norm(rho)
        hits = 0
        for flip in flips:
            conj = flip @ rho @ flip
            if frobenius_norm(conj - rho) <= tol * scale:
                continue
            if frobenius_norm(conj + rho) <= tol * scale:
                hits += 1
                continue
            raise ValueError(
                f"deviation at point {point} (boundary {boundary}) is not a "
                "flip eigenstate; damage counting is undefined for this plan"
            )
        coeffs = pauli_decompose(rho, tol=tol * scale)
        state = next(iter(coeffs)) if len(coeffs) == 1 else "flip-invariant"
        audit.append(PointDamage(point=point, boundary=boundary, state=state, hits=hits))
    return audit


def count_damaging_errors(
    plan: ExperimentPlan,
    preparation: PreparationStep | None = None,
    tol: float = 1e-10,
) -> int:
    """Total damage count n; the exact-channel signal then equals (1-2e)^n."""
    return sum(entry.hits for entry in damage_audit(plan, preparation, tol))
