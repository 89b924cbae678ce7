"""Environment coupling in the receiver's correction step.

The correction unitary is realized by a physical apparatus, so the receiver's
qubit couples to environment states |E0>, |E1>:

    |E0> (x) (a|0> + b|1>)  ->  C0 a |E0>|0> + C1 b |E1>|1>

Only the overlap gamma = <E1|E0> survives into the qubit's reduced state, so a
two-dimensional environment is fully general. |gamma| = 1 leaves the state
pure; gamma = 0 dephases it completely.

Two routes to the reduced state are provided on purpose:

* ``reduced_state`` traces the environment out of the joint state above
  (renormalized) - the canonical form.
* ``reduced_state_paper_literal`` evaluates a printed closed-form variant
  verbatim. Its normalization disagrees with the partial trace away from
  |gamma| = 1 (it is generally not unit-trace); the CLI's ``paper-check``
  reports the divergence instead of silently preferring either side.

The deviation delta is the entrywise-quadratic distance between the delivered
reduced state and the sender's pure-state density matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import frobenius_distance, partial_trace
from .qcore import DensityMatrix, Ket, fidelity, purity, to_density
from .teleport import BellOutcome, run_ideal

__all__ = [
    "DegenerateModelError",
    "EnvironmentModel",
    "DeviationReport",
    "embed_environment",
    "evolve",
    "reduced_state",
    "reduced_state_paper_literal",
    "dephased_limit",
    "deviation",
    "deviation_closed_form_paper",
    "replica_fidelity",
    "direct_report",
    "noisy_teleport",
]

OVERLAP_TOL = 1e-12


class DegenerateModelError(ValueError):
    """Raised when the coupled state has zero norm (both branches suppressed)."""


@dataclass(frozen=True)
class EnvironmentModel:
    """Parameters of the coupling: overlap gamma = <E1|E0> and branch
    coefficients c0, c1."""

    gamma: complex
    c0: complex
    c1: complex

    def __post_init__(self):
        gamma = complex(self.gamma)
        c0 = complex(self.c0)
        c1 = complex(self.c1)
        for name, value in (("gamma", gamma), ("c0", c0), ("c1", c1)):
            if not (np.isfinite(value.real) and np.isfinite(value.imag)):
                raise ValueError(f"{name} is not finite: {value!r}")
        if abs(gamma) > 1.0 + OVERLAP_TOL:
            raise ValueError(f"|gamma| = {abs(gamma)!r} exceeds 1")
        if c0 == 0 and c1 == 0:
            raise ValueError("c0 and c1 cannot both be zero")
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "c0", c0)
        object.__setattr__(self, "c1", c1)


@dataclass(frozen=True, eq=False)
class DeviationReport:
    """Delivered state and its quality metrics at one parameter point.

    ``branch`` is the sampled measurement outcome, or None for a direct
    evaluation that bypasses the protocol."""

    rho3: DensityMatrix
    delta: float
    fidelity: float
    purity: float
    branch: BellOutcome | None = None


def _check_normalized(a: complex, b: complex) -> tuple[complex, complex]:
    a = complex(a)
    b = complex(b)
    norm_sq = abs(a) ** 2 + abs(b) ** 2
    if abs(norm_sq - 1.0) > 1e-10:
        raise ValueError(f"(a, b) is not normalized: |a|^2 + |b|^2 = {norm_sq!r}")
    return a, b


def embed_environment(env: EnvironmentModel) -> tuple[Ket, Ket]:
    """Concrete two-dimensional environment states (e0, e1) with
    <e1|e0> equal to the model's gamma."""
    g = env.gamma
    if abs(g) > 1.0 + OVERLAP_TOL:
        raise ValueError(f"|gamma| = {abs(g)!r} exceeds 1")
    e0 = Ket(np.array([1.0, 0.0]), ("E",))
    residual = np.sqrt(max(1.0 - abs(g) ** 2, 0.0))
    e1 = Ket(np.array([np.conj(g), residual]), ("E",))
    return e0, e1


def evolve(a: complex, b: complex, env: EnvironmentModel) -> Ket:
    """Joint environment (x) qubit state after the coupling,
    C0 a e0|0> + C1 b e1|1>, renormalized."""
    a, b = _check_normalized(a, b)
    e0, e1 = embed_environment(env)
    vec = np.zeros(4, dtype=np.complex128)
    vec[0::2] = env.c0 * a * e0.amplitudes
    vec[1::2] = env.c1 * b * e1.amplitudes
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise DegenerateModelError(
            "coupled state has zero norm: both c0*a and c1*b vanish"
        )
    return Ket(vec / norm, ("E", "3"))


def reduced_state(a: complex, b: complex, env: EnvironmentModel) -> DensityMatrix:
    """The delivered qubit's state: environment traced out of the normalized
    coupled state. Diagonal proportional to (|c0 a|^2, |c1 b|^2); upper
    off-diagonal proportional to c0 conj(c1) a conj(b) gamma."""
    phi = evolve(a, b, env)
    return DensityMatrix(partial_trace(to_density(phi).mat, 2, 2, keep="B"))


def reduced_state_paper_literal(a: complex, b: complex, env: EnvironmentModel) -> np.ndarray:
    """The printed closed form for the delivered state, evaluated verbatim:
    diagonal (1 + |gamma|^2)(|c0 a|^2, |c1 b|^2) and doubled off-diagonals.

    Returned as a raw matrix: away from |gamma| = 1 it is not unit-trace, so
    it is not a valid density matrix. ``paper-check`` prints it next to the
    canonical form.
    """
    a = complex(a)
    b = complex(b)
    g = env.gamma
    g_sq = abs(g) ** 2
    d00 = abs(env.c0 * a) ** 2 * (1.0 + g_sq)
    d01 = 2.0 * env.c0 * np.conj(env.c1) * a * np.conj(b) * g
    d10 = 2.0 * env.c1 * np.conj(env.c0) * b * np.conj(a) * np.conj(g)
    d11 = abs(env.c1 * b) ** 2 * (1.0 + g_sq)
    return np.array([[d00, d01], [d10, d11]], dtype=np.complex128)


def dephased_limit(a: complex, b: complex, c0: complex, c1: complex) -> np.ndarray:
    """Fully dephased (orthogonal-environment) reduced state:
    diag(|c0 a|^2, |c1 b|^2), exactly as printed."""
    return np.diag(
        [abs(complex(c0) * complex(a)) ** 2, abs(complex(c1) * complex(b)) ** 2]
    ).astype(np.complex128)


def deviation(rho3, rho1: DensityMatrix) -> float:
    """Entrywise-quadratic distance sqrt(sum |rho3_nm - rho1_nm|^2) between the
    delivered state and the sender's original."""
    mat3 = rho3.mat if isinstance(rho3, DensityMatrix) else np.asarray(rho3)
    return frobenius_distance(mat3, rho1.mat)


def deviation_closed_form_paper(a: complex, b: complex, env: EnvironmentModel) -> float:
    """The printed four-term expansion of the deviation, applied to the
    printed reduced state; kept verbatim for comparison with
    ``deviation(reduced_state_paper_literal(...), rho1)``."""
    a = complex(a)
    b = complex(b)
    g = env.gamma
    g_sq = abs(g) ** 2
    c0a_sq = abs(env.c0 * a) ** 2
    c1b_sq = abs(env.c1 * b) ** 2
    t00 = abs(c0a_sq + c0a_sq * g_sq - abs(a) ** 2) ** 2
    t01 = abs(2.0 * env.c0 * np.conj(env.c1) * a * np.conj(b) * g - a * np.conj(b)) ** 2
    t10 = abs(2.0 * env.c1 * np.conj(env.c0) * b * np.conj(a) * np.conj(g) - b * np.conj(a)) ** 2
    t11 = abs(c1b_sq + c1b_sq * g_sq - abs(b) ** 2) ** 2
    return float(np.sqrt(t00 + t01 + t10 + t11))


def replica_fidelity(a: complex, b: complex, env: EnvironmentModel) -> float:
    """<psi|rho3|psi> for the canonical reduced state. For c0 = c1 and real
    gamma = s this is 1 - 2|a|^2|b|^2(1 - s)."""
    a, b = _check_normalized(a, b)
    psi = Ket(np.array([a, b]), ("3",))
    return fidelity(psi, reduced_state(a, b, env))


def _report(a: complex, b: complex, env: EnvironmentModel, psi: Ket,
            branch: BellOutcome | None) -> DeviationReport:
    rho3 = reduced_state(a, b, env)
    rho1 = to_density(psi)
    return DeviationReport(
        rho3=rho3,
        delta=deviation(rho3, rho1),
        fidelity=fidelity(psi, rho3),
        purity=purity(rho3),
        branch=branch,
    )


def direct_report(a: complex, b: complex, env: EnvironmentModel) -> DeviationReport:
    """Metrics at one parameter point without running the protocol."""
    a, b = _check_normalized(a, b)
    return _report(a, b, env, Ket(np.array([a, b]), ("3",)), branch=None)


def noisy_teleport(psi: Ket, env: EnvironmentModel, seed: int) -> DeviationReport:
    """Full protocol run whose correction step couples to the environment.

    The ideal branch delivers the input amplitudes up to global phase; the
    coupling then degrades them, so the reported metrics are independent of
    the sampled branch.
    """
    record = run_ideal(psi, seed)
    a, b = record.corrected_state.amplitudes
    return _report(a, b, env, psi, branch=record.outcome)
