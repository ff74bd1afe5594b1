"""Intertwining relations, quasi-affinity diagnostics and spectral matching.

At finite dimension a quasi-affine intertwiner (injective with dense
range) is just a full-rank matrix, so the interesting information is its
conditioning: the smallest singular value stands in for the norm of the
possibly-unbounded inverse.  Reports therefore expose the full singular
value profile rather than hiding it behind a boolean.

Two classical facts about the unbounded setting have no content here and
are deliberately untested: every matrix intertwiner is bounded (so a
nonempty resolvent set imposes nothing), and the continuous and residual
spectra are empty, leaving the point spectrum as the whole story.  Only
the intertwiner-based notion of quasi-similarity is implemented; variants
that instead compare resolutions of the identity are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    Operator,
    cluster_eigenvalues,
    eig_general,
    ensure_operator,
    fro,
)
from .errors import DimensionMismatch, IntertwiningViolated

_TINY = np.finfo(np.float64).tiny

# eigenvalues of non-normal matrices are ill-conditioned, hence the looser default
MATCH_TOL = 1e-7

__all__ = [
    "IntertwinerReport",
    "SpectralMatch",
    "MatchedPair",
    "PushReport",
    "MutualReport",
    "verify_intertwining",
    "spectral_comparison",
    "push_eigenvectors",
    "mutual_qs_check",
    "resolvent_norms",
]


@dataclass(frozen=True, eq=False)
class IntertwinerReport:
    """Residual and conditioning profile of a candidate intertwiner."""

    residual: float
    singular_values: np.ndarray
    min_sv: float
    numerical_rank: int
    quasi_affinity: bool
    bounded_inverse_proxy: float
    tol: float


def verify_intertwining(
    A: Operator | np.ndarray,
    B: Operator | np.ndarray,
    T: Operator | np.ndarray,
    tol: float = DEFAULT_TOL,
) -> IntertwinerReport:
    """Measure ``TA = BT`` and the quasi-affinity of ``T``.

    The residual is ``||TA - BT||_F / (||T||_F (||A||_F + ||B||_F))``;
    large residuals are recorded, never raised.  Quasi-affinity means full
    numerical rank at threshold ``tol * max_sv``.
    """
    A, B, T = ensure_operator(A), ensure_operator(B), ensure_operator(T)
    if not (A.dim == B.dim == T.dim):
        raise DimensionMismatch(
            f"incompatible dims A={A.dim}, B={B.dim}, T={T.dim}"
        )
    defect = fro(T.matrix @ A.matrix - B.matrix @ T.matrix)
    residual = defect / (fro(T.matrix) * (fro(A.matrix) + fro(B.matrix)) + _TINY)
    sv = np.linalg.svd(T.matrix, compute_uv=False)
    max_sv = float(sv[0]) if len(sv) else 0.0
    rank = int(np.count_nonzero(sv > tol * max_sv)) if max_sv > 0 else 0
    min_sv = float(sv[-1]) if len(sv) else 0.0
    return IntertwinerReport(
        residual, sv, min_sv, rank, rank == T.dim, min_sv, tol
    )


@dataclass(frozen=True)
class MatchedPair:
    value_a: complex
    value_b: complex
    distance: float
    mult_a: int
    mult_b: int


@dataclass(frozen=True)
class SpectralMatch:
    """Greedy matching of two point spectra with multiplicities.

    ``inclusion`` holds when every eigenvalue of ``A`` found a partner and
    no matched multiplicity decreases.  Continuous and residual spectra
    are empty at finite dimension and therefore not represented.
    """

    pairs: tuple[MatchedPair, ...]
    unmatched_a: tuple[tuple[complex, int], ...]
    unmatched_b: tuple[tuple[complex, int], ...]
    inclusion: bool
    tolerance: float

    @property
    def total_with_equal_multiplicities(self) -> bool:
        return (
            not self.unmatched_a
            and not self.unmatched_b
            and all(p.mult_a == p.mult_b for p in self.pairs)
        )


def spectral_comparison(
    A: Operator | np.ndarray,
    B: Operator | np.ndarray,
    tol: float = MATCH_TOL,
) -> SpectralMatch:
    """Match the eigenvalue multisets of ``A`` and ``B`` at tolerance.

    Eigenvalues are clustered at ``tol*(1+|lam|)`` to obtain multiplicities,
    then clusters are paired greedily with their nearest partner.
    """
    A, B = ensure_operator(A), ensure_operator(B)
    ca = cluster_eigenvalues(eig_general(A, tol).eigenvalues, tol)
    cb = cluster_eigenvalues(eig_general(B, tol).eigenvalues, tol)
    used = [False] * len(cb)
    pairs: list[MatchedPair] = []
    unmatched_a: list[tuple[complex, int]] = []
    for cl in ca:
        best, best_dist = -1, np.inf
        for j, other in enumerate(cb):
            if used[j]:
                continue
            dist = abs(cl.value - other.value)
            if dist < best_dist:
                best, best_dist = j, dist
        if best >= 0 and best_dist <= tol * (1.0 + abs(cl.value)):
            used[best] = True
            pairs.append(
                MatchedPair(cl.value, cb[best].value, float(best_dist), cl.size, cb[best].size)
            )
        else:
            unmatched_a.append((cl.value, cl.size))
    unmatched_b = [(c.value, c.size) for j, c in enumerate(cb) if not used[j]]
    inclusion = not unmatched_a and all(p.mult_a <= p.mult_b for p in pairs)
    return SpectralMatch(
        tuple(pairs), tuple(unmatched_a), tuple(unmatched_b), inclusion, tol
    )


@dataclass(frozen=True)
class PushedEigenvector:
    eigenvalue: complex
    image_norm: float
    residual: float


@dataclass(frozen=True, eq=False)
class PushReport:
    """Where the intertwiner sends the eigenvectors of ``A``.

    ``annihilated`` lists eigenpairs whose image under ``T`` is numerically
    zero — possible only when quasi-affinity fails.
    """

    rows: tuple[PushedEigenvector, ...]
    annihilated: tuple[tuple[complex, float], ...]
    max_residual: float
    intertwiner: IntertwinerReport
    passed: bool


def push_eigenvectors(
    A: Operator | np.ndarray,
    B: Operator | np.ndarray,
    T: Operator | np.ndarray,
    tol: float = DEFAULT_TOL,
) -> PushReport:
    """Check that ``T`` maps eigenvectors of ``A`` to eigenvectors of ``B``.

    Requires the intertwining residual to be below ``tol`` (else
    :class:`IntertwiningViolated`); per surviving eigenpair the report
    records ``||B(T xi) - lam (T xi)|| / ||T xi||``.
    """
    A, B, T = ensure_operator(A), ensure_operator(B), ensure_operator(T)
    rep = verify_intertwining(A, B, T, tol)
    if rep.residual > tol:
        raise IntertwiningViolated(
            f"intertwining residual {rep.residual:.3e} exceeds {tol:.3e}"
        )
    es = eig_general(A, tol)
    t2 = float(rep.singular_values[0]) if len(rep.singular_values) else 0.0
    rows: list[PushedEigenvector] = []
    annihilated: list[tuple[complex, float]] = []
    for k in range(A.dim):
        lam = es.eigenvalues[k]
        image = T.matrix @ es.right_vectors[:, k]
        norm = float(np.linalg.norm(image))
        if norm <= tol * max(t2, 1.0):
            annihilated.append((complex(lam), norm))
            continue
        res = float(np.linalg.norm(B.matrix @ image - lam * image)) / norm
        rows.append(PushedEigenvector(complex(lam), norm, res))
    max_res = max((r.residual for r in rows), default=0.0)
    return PushReport(
        tuple(rows), tuple(annihilated), max_res, rep, max_res <= tol
    )


@dataclass(frozen=True, eq=False)
class MutualReport:
    """Outcome of the mutual quasi-similarity checks.

    ``unitarily_equivalent`` is the finite-dimensional criterion for
    normal operators (equal eigenvalue multisets); ``None`` when either
    operator fails the normality test.  ``sigma_equal`` is asserted only
    when both intertwiners have min singular value above tolerance.
    """

    intertwining_ab: IntertwinerReport
    intertwining_ba: IntertwinerReport
    match: SpectralMatch
    mutual: bool
    sigma_p_equal: bool
    both_normal: bool
    unitarily_equivalent: bool | None
    sigma_equal: bool | None
    passed: bool


def _is_normal(a: np.ndarray, tol: float) -> bool:
    return fro(a @ a.conj().T - a.conj().T @ a) <= tol * (fro(a) ** 2 + _TINY)


def mutual_qs_check(
    A: Operator | np.ndarray,
    B: Operator | np.ndarray,
    T_ab: Operator | np.ndarray,
    T_ba: Operator | np.ndarray,
    tol: float = DEFAULT_TOL,
    match_tol: float = MATCH_TOL,
) -> MutualReport:
    """Verify both intertwinings, both quasi-affinities, and equal spectra."""
    A, B = ensure_operator(A), ensure_operator(B)
    rep_ab = verify_intertwining(A, B, T_ab, tol)
    rep_ba = verify_intertwining(B, A, T_ba, tol)
    match = spectral_comparison(A, B, match_tol)
    mutual = (
        rep_ab.residual <= tol
        and rep_ba.residual <= tol
        and rep_ab.quasi_affinity
        and rep_ba.quasi_affinity
    )
    sigma_p_equal = match.total_with_equal_multiplicities
    both_normal = _is_normal(A.matrix, tol) and _is_normal(B.matrix, tol)
    unitary = sigma_p_equal if (both_normal and mutual) else None
    if rep_ab.min_sv > tol and rep_ba.min_sv > tol:
        sigma_equal = sigma_p_equal
    else:
        sigma_equal = None
    passed = mutual and sigma_p_equal
    return MutualReport(
        rep_ab,
        rep_ba,
        match,
        mutual,
        sigma_p_equal,
        both_normal,
        unitary,
        sigma_equal,
        passed,
    )


def resolvent_norms(A: Operator | np.ndarray, grid: list[complex]) -> list[float]:
    """``||(A - lam I)^-1||_2`` per grid point, via the smallest singular value.

    Grid points hitting the spectrum to machine precision report
    ``float('inf')``.
    """
    A = ensure_operator(A)
    eye = np.eye(A.dim)
    out: list[float] = []
    for lam in grid:
        sv = np.linalg.svd(A.matrix - complex(lam) * eye, compute_uv=False)
        smin = float(sv[-1])
        out.append(float("inf") if smin == 0.0 else 1.0 / smin)
    return out
