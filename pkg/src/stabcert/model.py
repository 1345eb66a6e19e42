"""Problem data and shared scalar diagnostics for damped block systems.

The engine certifies exponential decay for finite-dimensional evolution
systems of the form

    d/dt [[alpha, 0], [0, beta]] (u, v)
        + [[gamma, 0], [0, 0]] (u, v)
        + [[0, -C*], [C, 0]] (u, v) = 0

on a product space H0 x H1.  ``alpha`` and ``beta`` are Hermitian positive
definite material weights, ``gamma`` is a damping block acting on the first
component only, coercive in its Hermitian part, and ``C`` couples the two
components.  ``validate_system`` checks exactly these standing assumptions
and records the measured coercivity constants.

Coercivity is always realized as the smallest eigenvalue of the Hermitian
part (1/2)(M + M*): exact and deterministic in finite dimensions, with the
symmetrization applied before the eigensolve to kill rounding asymmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotCoercive, NotHermitian, ParameterOutOfRange

__all__ = [
    "ComplexMatrix",
    "Tolerances",
    "BlockSystem",
    "as_complex_matrix",
    "adjoint",
    "hermitian_part",
    "hermitian_min_eig",
    "operator_norm",
    "validate_system",
]

# All bounded operators in this package are plain dense complex arrays.
ComplexMatrix = np.ndarray


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances shared across the pipeline.

    Defaults leave double-precision headroom at the dense sizes this
    package targets (a few hundred rows).  Every entry must be strictly
    positive and at most 1e-3.
    """

    hermitian_tol: float = 1e-12
    rank_rel_tol: float = 1e-10
    solve_tol: float = 1e-10
    eig_tol: float = 1e-10

    def __post_init__(self):
        for name in ("hermitian_tol", "rank_rel_tol", "solve_tol", "eig_tol"):
            value = getattr(self, name)
            if not (0.0 < value <= 1e-3):
                raise ParameterOutOfRange(
                    f"{name} must lie in (0, 1e-3], got {value!r}"
                )


DEFAULT_TOLERANCES = Tolerances()


def as_complex_matrix(a, name: str = "matrix") -> ComplexMatrix:
    """Coerce ``a`` to a 2-D complex array with finite entries."""
    M = np.asarray(a, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {M.shape}")
    if M.size and not np.all(np.isfinite(M)):
        raise ParameterOutOfRange(f"{name} contains non-finite entries")
    return M


def adjoint(M: ComplexMatrix) -> ComplexMatrix:
    """Conjugate transpose."""
    return M.conj().T


def hermitian_part(M: ComplexMatrix) -> ComplexMatrix:
    """The Hermitian part (1/2)(M + M*)."""
    return 0.5 * (M + M.conj().T)


def hermitian_min_eig(M) -> float:
    """Smallest eigenvalue of the Hermitian part of a square matrix.

    This realizes coercivity statements of the form ``Re M >= c``: the
    returned value is the largest such ``c``.  For the empty 0 x 0 matrix
    the minimum over an empty spectrum is +inf (vacuous coercivity).

    Raises
    ------
    DimensionMismatch
        If ``M`` is not square.
    """
    M = as_complex_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got {M.shape}")
    if M.shape[0] == 0:
        return math.inf
    w = np.linalg.eigvalsh(hermitian_part(M))
    return float(w[0])


def operator_norm(M) -> float:
    """Largest singular value.  Empty matrices have norm zero."""
    M = as_complex_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.svd(M, compute_uv=False)[0])


@dataclass(frozen=True)
class BlockSystem:
    """Validated coefficient data of a damped block system.

    Attributes
    ----------
    alpha, beta : ComplexMatrix
        Hermitian positive definite weights on H0 and H1.
    gamma : ComplexMatrix
        Damping block on H0 with coercive Hermitian part.
    C : ComplexMatrix
        Coupling operator H0 -> H1 (shape n1 x n0).
    c_alpha, c_beta : float
        Smallest eigenvalues of alpha and beta.
    c_gamma : float
        Smallest eigenvalue of the Hermitian part of gamma.
    """

    alpha: ComplexMatrix
    beta: ComplexMatrix
    gamma: ComplexMatrix
    C: ComplexMatrix
    c_alpha: float
    c_beta: float
    c_gamma: float

    @property
    def n0(self) -> int:
        return self.alpha.shape[0]

    @property
    def n1(self) -> int:
        return self.beta.shape[0]


def _check_hermitian(M: ComplexMatrix, which: str, rel_tol: float) -> None:
    scale = operator_norm(M)
    deviation = operator_norm(M - M.conj().T)
    if scale == 0.0:
        return
    if deviation > rel_tol * scale:
        raise NotHermitian(which, deviation / scale)


def validate_system(alpha, beta, gamma, C, tol: Tolerances | None = None) -> BlockSystem:
    """Validate the standing assumptions and package the system.

    Parameters
    ----------
    alpha, beta, gamma, C : array_like
        Coefficient blocks; ``alpha`` and ``gamma`` are n0 x n0, ``beta``
        n1 x n1 and ``C`` maps H0 to H1, i.e. is n1 x n0.
    tol : Tolerances, optional
        Validation tolerances; defaults to :data:`DEFAULT_TOLERANCES`.

    Returns
    -------
    BlockSystem
        With the measured coercivity constants attached.

    Raises
    ------
    DimensionMismatch
        On incompatible shapes.
    NotHermitian
        If ``alpha`` or ``beta`` deviates from Hermitian symmetry.
    NotCoercive
        If any of the three coercivity constants is not strictly positive
        (beyond the eigenvalue tolerance).
    """
    tol = tol or DEFAULT_TOLERANCES
    A = as_complex_matrix(alpha, "alpha")
    B = as_complex_matrix(beta, "beta")
    G = as_complex_matrix(gamma, "gamma")
    Cm = as_complex_matrix(C, "C")

    if A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"alpha must be square, got {A.shape}")
    if B.shape[0] != B.shape[1]:
        raise DimensionMismatch(f"beta must be square, got {B.shape}")
    n0, n1 = A.shape[0], B.shape[0]
    if G.shape != (n0, n0):
        raise DimensionMismatch(f"gamma must be {n0} x {n0}, got {G.shape}")
    if Cm.shape != (n1, n0):
        raise DimensionMismatch(f"C must be {n1} x {n0}, got {Cm.shape}")

    _check_hermitian(A, "alpha", tol.hermitian_tol)
    _check_hermitian(B, "beta", tol.hermitian_tol)

    c_alpha = hermitian_min_eig(A)
    c_beta = hermitian_min_eig(B)
    c_gamma = hermitian_min_eig(G)
    if not c_alpha > tol.eig_tol:
        raise NotCoercive("alpha", c_alpha)
    if not c_beta > tol.eig_tol:
        raise NotCoercive("beta", c_beta)
    if not c_gamma > tol.eig_tol:
        raise NotCoercive("gamma", c_gamma)

    return BlockSystem(A, B, G, Cm, float(c_alpha), float(c_beta), float(c_gamma))
