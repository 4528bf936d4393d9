"""Tolerance-aware membership predicates for the matrix classes the decision
pipeline relies on: nonnegative, strictly positive, stochastic, Z, intensity,
M, inverse-M, and irreducible matrices.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from .errors import NotZMatrix
from .numkit import DEFAULT_TOL, ToleranceConfig, as_square_matrix

__all__ = [
    "FLAG_NAMES",
    "ClassReport",
    "classify_matrix",
    "nonneg_eigvec_of_z",
    "is_nonnegative",
    "is_z_matrix",
    "is_intensity_matrix",
    "is_stochastic",
    "is_irreducible",
]

FLAG_NAMES = (
    "nonnegative",
    "strictly_positive",
    "positive_diagonal",
    "stochastic",
    "z_matrix",
    "intensity_matrix",
    "m_matrix",
    "inverse_m_matrix",
    "irreducible",
    "nonsingular",
)


def _offdiag_mask(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def is_nonnegative(A, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    return bool(np.min(A) >= -cfg.entry_tol)


def is_z_matrix(A, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Off-diagonal entries at most ``entry_tol``."""
    A = np.asarray(A)
    off = A[_offdiag_mask(A.shape[0])]
    return bool(off.size == 0 or np.max(off) <= cfg.entry_tol)


def is_intensity_matrix(A, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Off-diagonal entries >= -entry_tol and row sums within n*entry_tol of 0."""
    A = np.asarray(A)
    n = A.shape[0]
    off = A[_offdiag_mask(n)]
    if off.size and np.min(off) < -cfg.entry_tol:
        return False
    return bool(np.max(np.abs(A.sum(axis=1))) <= n * cfg.entry_tol)


def is_stochastic(A, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Nonnegative with row sums within n*entry_tol of 1."""
    A = np.asarray(A)
    if not is_nonnegative(A, cfg):
        return False
    return bool(np.max(np.abs(A.sum(axis=1) - 1.0)) <= A.shape[0] * cfg.entry_tol)


def structural_pattern(A, cfg: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Boolean pattern of entries beyond the structural-zero threshold."""
    return np.abs(np.asarray(A)) > cfg.entry_tol


def is_irreducible(A, cfg: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Strong connectivity of the zero-pattern digraph (exact, no slack beyond
    the structural-zero threshold).  1x1 matrices are irreducible."""
    A = np.asarray(A)
    if A.shape[0] == 1:
        return True
    graph = scipy.sparse.csr_matrix(structural_pattern(A, cfg))
    ncomp, _ = scipy.sparse.csgraph.connected_components(
        graph, directed=True, connection="strong"
    )
    return ncomp == 1


@dataclass
class ClassReport:
    """Outcome of :func:`classify_matrix`.

    ``flags`` maps each name in FLAG_NAMES to a boolean.  Every False flag
    carries a witness describing the violation; the M and inverse-M flags
    additionally carry the computed inverse as a certificate when True.
    """

    flags: Dict[str, bool]
    witnesses: Dict[str, object] = field(default_factory=dict)
    det: float = 0.0
    spectral_radius: float = 0.0


def _first_violation(A, mask, predicate):
    idx = np.argwhere(mask & ~predicate)
    if idx.size == 0:
        return None
    i, j = idx[0]
    return (int(i), int(j), float(A[i, j]))


def classify_matrix(A, cfg: ToleranceConfig = DEFAULT_TOL) -> ClassReport:
    """Evaluate every class flag with ``entry_tol`` slack.

    The M-matrix test is the two-condition one: Z-pattern plus entrywise
    nonnegative inverse.  Inverse-M inverts ``A`` and tests the inverse for
    M-matrix membership.  Irreducibility is decided exactly on the zero
    pattern.  Singular inputs get their inverse-dependent flags set False
    with witness ``"singular"``.
    """
    A = as_square_matrix(A)
    n = A.shape[0]
    off = _offdiag_mask(n)
    flags: Dict[str, bool] = {}
    wit: Dict[str, object] = {}

    det = float(np.linalg.det(A))
    eigvals = np.linalg.eigvals(A)
    rho = float(np.max(np.abs(eigvals)))

    flags["nonnegative"] = is_nonnegative(A, cfg)
    if not flags["nonnegative"]:
        i, j = np.unravel_index(int(np.argmin(A)), A.shape)
        wit["nonnegative"] = (int(i), int(j), float(A[i, j]))

    flags["strictly_positive"] = bool(np.min(A) > cfg.entry_tol)
    if not flags["strictly_positive"]:
        i, j = np.unravel_index(int(np.argmin(A)), A.shape)
        wit["strictly_positive"] = (int(i), int(j), float(A[i, j]))

    diag = np.diag(A)
    flags["positive_diagonal"] = bool(np.min(diag) > cfg.entry_tol)
    if not flags["positive_diagonal"]:
        i = int(np.argmin(diag))
        wit["positive_diagonal"] = (i, i, float(diag[i]))

    row_sums = A.sum(axis=1)
    flags["stochastic"] = is_stochastic(A, cfg)
    if not flags["stochastic"]:
        i = int(np.argmax(np.abs(row_sums - 1.0)))
        wit["stochastic"] = ("row_sum", i, float(row_sums[i]))

    flags["z_matrix"] = is_z_matrix(A, cfg)
    if not flags["z_matrix"]:
        masked = np.where(off, A, -np.inf)
        i, j = np.unravel_index(int(np.argmax(masked)), A.shape)
        wit["z_matrix"] = (int(i), int(j), float(A[i, j]))

    flags["intensity_matrix"] = is_intensity_matrix(A, cfg)
    if not flags["intensity_matrix"]:
        masked = np.where(off, A, np.inf)
        i, j = np.unravel_index(int(np.argmin(masked)), A.shape)
        if n > 1 and A[i, j] < -cfg.entry_tol:
            wit["intensity_matrix"] = (int(i), int(j), float(A[i, j]))
        else:
            i = int(np.argmax(np.abs(row_sums)))
            wit["intensity_matrix"] = ("row_sum", i, float(row_sums[i]))

    singular = abs(det) <= cfg.entry_tol
    Ainv = None
    if not singular:
        try:
            Ainv = np.linalg.inv(A)
        except np.linalg.LinAlgError:
            singular = True
    flags["nonsingular"] = not singular
    if singular:
        wit["nonsingular"] = ("det", det)

    if Ainv is None:
        flags["m_matrix"] = False
        flags["inverse_m_matrix"] = False
        wit["m_matrix"] = "singular"
        wit["inverse_m_matrix"] = "singular"
    else:
        flags["m_matrix"] = flags["z_matrix"] and is_nonnegative(Ainv, cfg)
        if flags["m_matrix"]:
            wit["m_matrix"] = Ainv
        elif not flags["z_matrix"]:
            wit["m_matrix"] = ("not_z_matrix", wit.get("z_matrix"))
        else:
            viol = _first_violation(Ainv, np.ones_like(Ainv, bool), Ainv >= -cfg.entry_tol)
            wit["m_matrix"] = ("inverse_entry_negative", viol)

        # the inverse of A^-1 is A itself, so inverse-M needs only the
        # Z-pattern of A^-1 on top of nonnegativity of A
        flags["inverse_m_matrix"] = flags["nonnegative"] and is_z_matrix(Ainv, cfg)
        if flags["inverse_m_matrix"]:
            wit["inverse_m_matrix"] = Ainv
        elif not flags["nonnegative"]:
            wit["inverse_m_matrix"] = ("not_nonnegative", wit.get("nonnegative"))
        else:
            masked = np.where(off, Ainv, -np.inf)
            i, j = np.unravel_index(int(np.argmax(masked)), Ainv.shape)
            wit["inverse_m_matrix"] = ("inverse_offdiag_positive", (int(i), int(j), float(Ainv[i, j])))

    flags["irreducible"] = is_irreducible(A, cfg)
    if not flags["irreducible"]:
        graph = scipy.sparse.csr_matrix(structural_pattern(A, cfg))
        ncomp, labels = scipy.sparse.csgraph.connected_components(
            graph, directed=True, connection="strong"
        )
        wit["irreducible"] = ("strongly_connected_components", int(ncomp), labels.tolist())

    return ClassReport(flags=flags, witnesses=wit, det=det, spectral_radius=rho)


def nonneg_eigvec_of_z(Q, cfg: ToleranceConfig = DEFAULT_TOL) -> Tuple[np.ndarray, float]:
    """Nonnegative eigenvector of a Z-matrix with its (real) eigenvalue.

    Computed as the Perron pair of ``theta*I - Q`` for
    ``theta = max(diag(Q)) + ||Q||_inf + 1`` and mapped back through
    ``lam = theta - rho(theta*I - Q)``.  The vector is normalized to unit
    1-norm with entries >= -entry_tol.
    """
    Q = as_square_matrix(Q)
    if not is_z_matrix(Q, cfg):
        raise NotZMatrix("off-diagonal entry above entry_tol")
    n = Q.shape[0]
    theta = float(np.max(np.diag(Q))) + float(np.linalg.norm(Q, np.inf)) + 1.0
    M = theta * np.eye(n) - Q
    np.clip(M, 0.0, None, out=M)  # tolerance slack may leave tiny negatives
    rho = float(np.max(np.abs(np.linalg.eigvals(M))))
    lam = theta - rho

    # power iteration on M + I stays inside the nonnegative cone and the
    # shift breaks periodic patterns
    v = np.full(n, 1.0 / n)
    best_v, best_res = v, np.inf
    shifted = M + np.eye(n)
    target = 1e-12 * (1.0 + rho)
    for _ in range(200 + 20 * n):
        w = shifted @ v
        s = w.sum()
        if s <= 0:
            break
        v = w / s
        res = float(np.max(np.abs(M @ v - rho * v)))
        if res < best_res:
            best_v, best_res = v, res
        if res <= target:
            break

    # fall back to the dense eigenvector when iteration stalls
    if best_res > 1e-10 * (1.0 + rho):
        vals, vecs = np.linalg.eig(M)
        j = int(np.argmin(np.abs(vals - rho)))
        cand = vecs[:, j].real
        if cand.sum() < 0:
            cand = -cand
        s = cand.sum()
        if s > 0:
            cand = cand / s
            res = float(np.max(np.abs(M @ cand - rho * cand)))
            if res < best_res and np.min(cand) >= -cfg.entry_tol:
                best_v, best_res = cand, res

    v = np.clip(best_v, 0.0, None)
    v = v / v.sum()
    return v, lam
