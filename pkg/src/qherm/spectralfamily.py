"""Spectral families and non-orthogonal resolutions of the identity.

For a Hermitian ``K`` the cumulative orthogonal projectors ``E(lam)``
form the usual spectral family.  For a quasi-Hermitian ``A`` with metric
``G`` the conjugated family ``X(lam) = G^-1/2 E(lam) G^1/2`` of the
transform ``K = G^1/2 A G^-1/2`` is an increasing family of oblique
idempotents whose jumps decompose ``A`` as a spectral operator of scalar
type.  Families are finite step functions: evaluation at ``lam`` returns
the largest accumulated projector with threshold at most ``lam``, which
makes right-continuity a representation invariant rather than a
numerical claim.

At finite dimension the decomposition forces ``sigma(A) = sigma(K)`` (the
returned thresholds are literally shared); for unbounded operators with an
unbounded metric inverse that equality can fail, a caveat with no matrix
counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    Operator,
    cluster_eigenvalues,
    eig_hermitian,
    ensure_operator,
    fro,
    herm_part,
    inner,
    spec_norm,
)
from .errors import DimensionMismatch, NotQuasiSelfAdjoint
from .lattice import MetricOperator

__all__ = [
    "SpectralFamily",
    "XFamily",
    "XPropertiesReport",
    "spectral_family",
    "x_family",
    "x_properties",
    "scalar_type_decomposition",
]


@dataclass(frozen=True, eq=False)
class SpectralFamily:
    """Cumulative orthogonal projectors at distinct eigenvalue thresholds."""

    thresholds: np.ndarray
    projectors: tuple[Operator, ...]
    ranks: tuple[int, ...]

    def evaluate(self, lam: float) -> np.ndarray:
        """Value of the step function at ``lam`` (zero below all thresholds)."""
        dim = self.projectors[-1].dim
        out = np.zeros((dim, dim), dtype=np.complex128)
        for t, p in zip(self.thresholds, self.projectors):
            if lam >= t:
                out = p.matrix
        return out


@dataclass(frozen=True, eq=False)
class XFamily:
    """The conjugated family ``X(lam) = G^-1/2 E(lam) G^1/2``.

    Cumulative, idempotent, generally non-Hermitian; the top member is
    the identity.
    """

    thresholds: np.ndarray
    x_projectors: tuple[Operator, ...]
    metric: MetricOperator

    def evaluate(self, lam: float) -> np.ndarray:
        dim = self.x_projectors[-1].dim
        out = np.zeros((dim, dim), dtype=np.complex128)
        for t, p in zip(self.thresholds, self.x_projectors):
            if lam >= t:
                out = p.matrix
        return out

    def jumps(self) -> list[np.ndarray]:
        """The idempotent jump projectors ``X_k - X_{k-1}``."""
        out = []
        prev = np.zeros_like(self.x_projectors[0].matrix)
        for p in self.x_projectors:
            out.append(p.matrix - prev)
            prev = p.matrix
        return out


def spectral_family(H: Operator | np.ndarray, tol: float = DEFAULT_TOL) -> SpectralFamily:
    """Self-adjoint spectral family of a Hermitian operator.

    Eigenvalues are clustered at ``tol*(1+|lam|)``; thresholds are the
    cluster means and projectors accumulate the eigenspaces.
    """
    H = ensure_operator(H)
    es = eig_hermitian(H, tol)
    clusters = cluster_eigenvalues(es.eigenvalues, tol)
    thresholds = np.array([c.value.real for c in clusters])
    projectors: list[Operator] = []
    ranks: list[int] = []
    for c in clusters:
        end = c.start + c.size
        block = es.right_vectors[:, :end]
        projectors.append(Operator(herm_part(block @ block.conj().T)))
        ranks.append(end)
    thresholds.setflags(write=False)
    return SpectralFamily(thresholds, tuple(projectors), tuple(ranks))


def x_family(
    A: Operator | np.ndarray,
    M: MetricOperator,
    tol: float = DEFAULT_TOL,
) -> XFamily:
    """Non-orthogonal resolution of identity for a quasi-Hermitian ``A``.

    Raises :class:`NotQuasiSelfAdjoint` when the transform
    ``K = G^1/2 A G^-1/2`` fails to be Hermitian at tolerance.
    """
    A = ensure_operator(A)
    if A.dim != M.dim:
        raise DimensionMismatch(f"A has dim {A.dim}, metric has dim {M.dim}")
    K = M.G_half.matrix @ A.matrix @ M.G_invhalf.matrix
    defect = fro(K - K.conj().T) / max(fro(K), 1e-300)
    if defect > tol:
        raise NotQuasiSelfAdjoint(
            f"transform Hermiticity defect {defect:.3e} exceeds {tol:.3e}"
        )
    ef = spectral_family(Operator(herm_part(K)), tol)
    xs = [
        Operator(M.G_invhalf.matrix @ p.matrix @ M.G_half.matrix)
        for p in ef.projectors
    ]
    return XFamily(ef.thresholds, tuple(xs), M)


@dataclass(frozen=True)
class XPropertySample:
    endpoint_residual: float
    total_variation: float
    variation_bound: float
    reconstruction_residual: float


@dataclass(frozen=True, eq=False)
class XPropertiesReport:
    """Verification of the step-family properties on sampled vector pairs.

    Right-continuity is structural for step functions evaluated by the
    "largest threshold <= lam" convention, so it is reported as a
    representation fact, not measured.
    """

    samples: tuple[XPropertySample, ...]
    max_endpoint_residual: float
    variation_violations: int
    max_reconstruction_residual: float
    right_continuous: bool
    passed: bool


def x_properties(
    XF: XFamily,
    A: Operator | np.ndarray,
    samples: list[tuple[np.ndarray, np.ndarray]],
    tol: float = DEFAULT_TOL,
) -> XPropertiesReport:
    """Check the four step-family properties per sampled pair ``(xi, eta)``.

    (i) the path vanishes below the spectrum and reaches ``<xi, eta>`` at
    the top; (ii) right-continuity, structural; (iii) total variation of
    ``lam -> <X(lam) xi, eta>`` bounded by ``||G^1/2 xi|| ||G^-1/2 eta||``;
    (iv) ``<A xi, eta>`` equals the Stieltjes sum of the jumps.
    """
    if not samples:
        raise ValueError("x_properties needs a nonempty sample list")
    A = ensure_operator(A)
    a2 = spec_norm(A.matrix)
    jumps = XF.jumps()
    thresholds = XF.thresholds
    top = XF.x_projectors[-1].matrix
    eye = np.eye(A.dim)
    rows: list[XPropertySample] = []
    violations = 0
    for xi, eta in samples:
        xi = np.asarray(xi, dtype=np.complex128)
        eta = np.asarray(eta, dtype=np.complex128)
        nx, ne = float(np.linalg.norm(xi)), float(np.linalg.norm(eta))
        scale = max(nx * ne, 1e-300)
        below = XF.evaluate(float(thresholds[0]) - 1.0)
        endpoint = max(
            abs(inner(below @ xi, eta)) / scale,
            abs(inner((top - eye) @ xi, eta)) / scale,
        )
        jump_values = [inner(p @ xi, eta) for p in jumps]
        variation = float(sum(abs(v) for v in jump_values))
        bound = float(
            np.linalg.norm(XF.metric.G_half.matrix @ xi)
            * np.linalg.norm(XF.metric.G_invhalf.matrix @ eta)
        )
        if variation > bound + tol:
            violations += 1
        stieltjes = sum(t * v for t, v in zip(thresholds, jump_values))
        recon = abs(inner(A.matrix @ xi, eta) - stieltjes) / max(a2 * nx * ne, 1e-300)
        rows.append(XPropertySample(endpoint, variation, bound, recon))
    max_endpoint = max(r.endpoint_residual for r in rows)
    max_recon = max(r.reconstruction_residual for r in rows)
    passed = max_endpoint <= tol and violations == 0 and max_recon <= tol
    return XPropertiesReport(
        tuple(rows), max_endpoint, violations, max_recon, True, passed
    )


def scalar_type_decomposition(
    A: Operator | np.ndarray,
    M: MetricOperator,
    tol: float = DEFAULT_TOL,
) -> list[tuple[float, Operator]]:
    """Decompose ``A = sum lam_k P_k`` with mutually annihilating idempotents.

    The ``P_k`` are the jumps of the X family: oblique projectors, each
    similar to an orthogonal one (rank preserved by the conjugation).
    """
    XF = x_family(A, M, tol)
    return [
        (float(t), Operator(p))
        for t, p in zip(XF.thresholds, XF.jumps())
    ]
