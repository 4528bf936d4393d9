"""Decision core for embeddability and strong infinite divisibility.

Eigenvalue branch bounds, enumeration of real candidate logarithms,
three-valued verdicts with checkable witnesses, inverse-M power forms, and
nonnegative root construction.  Branch candidates are independent pure
computations; enumeration order is deterministic (principal branch first,
then lexicographic over offsets sorted by absolute value), so the reported
witness is always the most principal admissible one.
"""

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Tuple

import numpy as np

from . import numkit, structure
from .classify import is_nonnegative, is_stochastic, is_z_matrix
from .errors import (
    IllConditioned,
    NegativeRealEigenvalue,
    NotNonnegative,
    NotStochastic,
    OffDiagonalZeros,
    PerturbationFailed,
    RepeatedEigenvalues,
    SearchExhausted,
    SingularDeterminant,
    SingularMatrix,
)
from .numkit import DEFAULT_TOL, Eigendecomposition, ToleranceConfig, as_square_matrix

__all__ = [
    "BOUND_MODES",
    "EMBEDDABLE",
    "NOT_EMBEDDABLE",
    "STRONGLY_INF_DIVISIBLE",
    "NOT_STRONGLY_INF_DIVISIBLE",
    "UNDETERMINED",
    "BranchSelection",
    "BranchBound",
    "EmbeddabilityReport",
    "DivisibilityReport",
    "InverseMRoot",
    "branch_bound",
    "enumerate_generators",
    "check_embeddable",
    "check_strong_inf_divisible",
    "inverse_m_power_form",
    "im_root_approx",
]

BOUND_MODES = ("israel_two_sided", "paper_one_sided", "theorem4_general")

EMBEDDABLE = "Embeddable"
NOT_EMBEDDABLE = "NotEmbeddable"
STRONGLY_INF_DIVISIBLE = "StronglyInfDivisible"
NOT_STRONGLY_INF_DIVISIBLE = "NotStronglyInfDivisible"
UNDETERMINED = "Undetermined"

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class BranchSelection:
    """One integer branch offset per eigenvalue in the canonical order.

    Admissible real selections keep the spectral-radius position at offset 0
    and carry negated offsets on conjugate-pair positions.
    """

    offsets: Tuple[int, ...]

    @staticmethod
    def principal(n: int) -> "BranchSelection":
        return BranchSelection(offsets=(0,) * n)


@dataclass
class BranchBound:
    """Admissible imaginary-part window for candidate generator eigenvalues
    and the branch-offset counts it induces per eigenvalue."""

    mode: str
    im_low: float
    im_high: float
    per_eigenvalue_counts: List[int]
    raw_tuple_count: int


@dataclass
class EmbeddabilityReport:
    verdict: str
    generator: Optional[np.ndarray] = None
    branches_examined: int = 0
    failed_conditions: List[dict] = field(default_factory=list)
    perturbed: bool = False
    bound_used: Optional[BranchBound] = None


@dataclass
class DivisibilityReport:
    verdict: str
    z_matrix: Optional[np.ndarray] = None
    roots_demonstrated: List[Tuple[int, np.ndarray]] = field(default_factory=list)
    recursion: List["DivisibilityReport"] = field(default_factory=list)
    branches_examined: int = 0
    failed_conditions: List[dict] = field(default_factory=list)
    perturbed: bool = False
    bound_used: Optional[BranchBound] = None


@dataclass(frozen=True)
class InverseMRoot:
    """Root of a matrix that lies in the inverse-M class.

    ``root`` is the nonnegative primary mth root whose inverse is an
    M-matrix.  For stochastic targets ``epsilon`` and ``h`` give the
    equivalent resolvent form ``P = (1 - epsilon)^m (I - epsilon*h)^-m``.
    """

    root: np.ndarray
    epsilon: Optional[float] = None
    h: Optional[np.ndarray] = None


def _offset_window(arg: float, lo: float, hi: float) -> range:
    """Integers k with lo <= arg + 2*pi*k <= hi (tiny slack on the closed ends)."""
    eps = 1e-12
    kmin = math.ceil((lo - arg) / _TWO_PI - eps)
    kmax = math.floor((hi - arg) / _TWO_PI + eps)
    return range(kmin, kmax + 1)


def branch_bound(
    E: Eigendecomposition, det: float, mode: str, lam_tilde: Optional[float] = None
) -> BranchBound:
    """Imaginary-part window for the eigenvalues of a candidate generator.

    israel_two_sided    |Im log lam| <= |log det|
    paper_one_sided     log det <= Im log lam <= 0
    theorem4_general    |Im log lam| <= |lam_tilde*(n-1) - log det|

    The spectral-radius position always gets exactly one offset (its
    logarithm must stay real).  ``raw_tuple_count`` is the product of the
    per-eigenvalue counts before any reality filtering.
    """
    if mode not in BOUND_MODES:
        raise ValueError(f"unknown bound mode {mode!r}")
    if not det > 0:
        raise SingularDeterminant("branch bounds need det > 0")
    n = E.n
    log_det = math.log(det)
    if mode == "israel_two_sided":
        radius = abs(log_det)
        lo, hi = -radius, radius
    elif mode == "paper_one_sided":
        lo, hi = min(log_det, 0.0), max(log_det, 0.0)
    else:
        if lam_tilde is None:
            raise ValueError("theorem4_general mode needs a lam_tilde estimate")
        radius = abs(lam_tilde * (n - 1) - log_det)
        lo, hi = -radius, radius

    counts = []
    for j, lam in enumerate(E.eigenvalues):
        if j == 0:
            counts.append(1)
        else:
            counts.append(max(0, len(_offset_window(float(np.angle(lam)), lo, hi))))
    raw = int(np.prod(counts)) if counts else 0
    return BranchBound(
        mode=mode, im_low=lo, im_high=hi, per_eigenvalue_counts=counts, raw_tuple_count=raw
    )


def _admissible_offsets(E: Eigendecomposition, bound: BranchBound) -> List[List[int]]:
    lists: List[List[int]] = []
    for j, lam in enumerate(E.eigenvalues):
        if j == 0:
            lists.append([0])
        else:
            ks = list(_offset_window(float(np.angle(lam)), bound.im_low, bound.im_high))
            ks.sort(key=lambda k: (abs(k), k))
            lists.append(ks)
    return lists


def _runnenberg_ok(mu: np.ndarray, n: int, slack: float = 1e-9) -> bool:
    """Angular cone admissible for the eigenvalues of an n-state generator:
    arg(z) in [pi*(1/2 + 1/n), pi*(3/2 - 1/n)], zero admitted."""
    lo = math.pi * (0.5 + 1.0 / n)
    hi = math.pi * (1.5 - 1.0 / n)
    for z in mu:
        if abs(z) <= slack:
            continue
        phi = float(np.angle(z))
        if phi < 0:
            phi += _TWO_PI
        if not (lo - slack <= phi <= hi + slack):
            return False
    return True


def _candidate_stream(
    E: Eigendecomposition,
    bound: BranchBound,
    cfg: ToleranceConfig,
    runnenberg: bool = False,
) -> Iterator[Tuple[BranchSelection, Optional[np.ndarray], str]]:
    """Raw branch tuples with their assembled real candidate, or the pruning
    reason when no real candidate exists."""
    lam = E.eigenvalues
    n = E.n
    for combo in itertools.product(*_admissible_offsets(E, bound)):
        sel = BranchSelection(offsets=tuple(combo))
        if runnenberg:
            mu = np.log(lam) + 2j * np.pi * np.asarray(combo)
            if not _runnenberg_ok(mu, n):
                yield sel, None, "runnenberg_cone"
                continue
        candidate = numkit.logm_branch(E, combo, cfg)
        real = numkit.as_real(candidate, cfg)
        if real is None:
            yield sel, None, "complex_candidate"
        else:
            yield sel, real, ""


def enumerate_generators(
    E: Eigendecomposition, bound: BranchBound, cfg: ToleranceConfig = DEFAULT_TOL
) -> Iterator[Tuple[BranchSelection, np.ndarray]]:
    """Yield every admissible branch selection whose assembled logarithm is
    real, principal branch first.

    Eigenvalues must be nonzero.  Repeated eigenvalues are an error except in
    the diagonalizable all-real-positive case, where the principal branch is
    the only real primary candidate and is yielded alone.
    """
    lam = E.eigenvalues
    if np.any(np.abs(lam) <= cfg.entry_tol):
        raise SingularMatrix("zero eigenvalue: no generator exists")
    if E.min_pairwise_gap < cfg.distinct_tol:
        if np.all(np.abs(lam.imag) <= cfg.distinct_tol) and np.all(lam.real > cfg.entry_tol):
            sel = BranchSelection.principal(E.n)
            real = numkit.as_real(numkit.logm_branch(E, sel, cfg), cfg)
            if real is not None:
                yield sel, real
                return
        raise RepeatedEigenvalues(
            "branch enumeration needs distinct eigenvalues (or a real positive spectrum)"
        )
    for sel, real, _ in _candidate_stream(E, bound, cfg):
        if real is not None:
            yield sel, real


def _offdiag(M: np.ndarray) -> np.ndarray:
    return M[~np.eye(M.shape[0], dtype=bool)]


def _log_acceptor(target: np.ndarray, require_row_sums: bool, cfg: ToleranceConfig):
    """Acceptance test for a real candidate logarithm L of ``target``.

    Embeddability requires L to be an intensity matrix; plain divisibility
    only requires -L to be a Z-matrix.  Failures within 10x the slack are
    marked borderline.
    """
    n = target.shape[0]

    def accept(L: np.ndarray):
        off = _offdiag(L)
        min_off = float(np.min(off)) if off.size else 0.0
        if min_off < -cfg.entry_tol:
            return False, {
                "reason": "off_diagonal_negative",
                "value": min_off,
                "borderline": min_off >= -10 * cfg.entry_tol,
            }
        if require_row_sums:
            worst = float(np.max(np.abs(L.sum(axis=1))))
            if worst > n * cfg.entry_tol:
                return False, {
                    "reason": "row_sum_violation",
                    "value": worst,
                    "borderline": worst <= 10 * n * cfg.entry_tol,
                }
        resid = numkit.relative_residual(numkit.expm(L), target)
        if resid > cfg.recon_tol:
            return False, {"reason": "reconstruction_failure", "value": resid}
        return True, None

    return accept


def _branch_search(E, bound, accept, cfg, runnenberg):
    """Scan the admissible branch tuples; return the first accepted log."""
    examined = 0
    records: List[dict] = []
    for sel, real, note in _candidate_stream(E, bound, cfg, runnenberg=runnenberg):
        examined += 1
        if real is None:
            records.append({"branch": sel.offsets, "reason": note})
            continue
        ok, failure = accept(real)
        if ok:
            return real, examined, records
        failure["branch"] = sel.offsets
        records.append(failure)
    return None, examined, records


def _primary_log_is_only_real_log(A: np.ndarray, cfg: ToleranceConfig) -> bool:
    """True when every real logarithm of A must be the principal primary one:
    all eigenvalues real positive and each repeated eigenvalue confined to a
    single Jordan block (geometric multiplicity one)."""
    lam = np.linalg.eigvals(A)
    if np.any(np.abs(lam.imag) > cfg.distinct_tol) or np.any(lam.real <= cfg.entry_tol):
        return False
    n = A.shape[0]
    for cluster in numkit.cluster_indices(lam, cfg.distinct_tol):
        if len(cluster) > 1:
            value = float(np.mean(lam[cluster].real))
            rank = int(np.linalg.matrix_rank(A - value * np.eye(n)))
            if rank != n - 1:
                return False
    return True


def _repeated_spectrum_verdict(A, accept, cfg, allow_perturb, search_after_perturb):
    """Resolve the repeated-eigenvalue case.

    Returns (status, witness_log, perturbed, records) with status one of
    "positive", "negative", "undetermined".  A passing principal primary
    logarithm certifies a positive verdict outright; a failing one is
    conclusive only when it is the sole real-logarithm candidate; otherwise
    exploration falls back to a perturbed copy and any outcome there is
    reported undetermined.
    """
    records: List[dict] = []
    principal = None
    try:
        principal = numkit.principal_log(A, cfg)
    except (SingularMatrix, NegativeRealEigenvalue) as exc:
        records.append({"reason": "principal_log_unavailable", "detail": str(exc)})

    if principal is not None:
        ok, failure = accept(principal)
        if ok:
            return "positive", principal, False, records
        failure["branch"] = "principal_primary"
        records.append(failure)
        if _primary_log_is_only_real_log(A, cfg):
            records.append({"reason": "primary_log_is_only_candidate"})
            return "negative", None, False, records

    if not allow_perturb:
        records.append({"reason": "repeated_eigenvalues", "detail": "perturbation disabled"})
        return "undetermined", None, False, records

    try:
        perturbed = numkit.perturb_distinct(A, cfg)
    except PerturbationFailed as exc:
        records.append({"reason": "perturbation_failed", "detail": str(exc)})
        return "undetermined", None, False, records
    try:
        witness, examined, sub_records = search_after_perturb(perturbed)
    except (SingularMatrix, RepeatedEigenvalues, IllConditioned, SingularDeterminant) as exc:
        records.append({"reason": "perturbed_search_failed", "detail": str(exc)})
        return "undetermined", None, True, records
    records.extend(sub_records)
    if witness is not None:
        records.append({"reason": "witness_reconstructs_perturbed_input"})
        return "undetermined", witness, True, records
    records.append({"reason": "perturbed_search_exhausted", "branches": examined})
    return "undetermined", None, True, records


def check_embeddable(
    P,
    cfg: ToleranceConfig = DEFAULT_TOL,
    bound_mode: str = "israel_two_sided",
    allow_perturb: bool = True,
) -> EmbeddabilityReport:
    """Decide whether a stochastic matrix is the exponential of an intensity
    matrix.

    Pipeline: a positive determinant and the structural necessary conditions
    are required outright; eigenvalue branches within the chosen bound are
    then enumerated (pruned by the angular cone admissible for generator
    spectra) and the first real candidate passing the intensity test is the
    witness.  Exhausting every admissible branch proves non-embeddability
    when eigenvalues are distinct.  Repeated eigenvalues are resolved through
    the primary principal logarithm when possible; otherwise the verdict
    after a perturbed exploration is Undetermined.
    """
    P = as_square_matrix(P)
    if not is_stochastic(P, cfg):
        raise NotStochastic("input is not row-stochastic within tolerance")
    failed: List[dict] = []

    det = float(np.linalg.det(P))
    if abs(det) <= cfg.entry_tol:
        failed.append({"reason": "determinant_near_singular", "value": det})
        return EmbeddabilityReport(verdict=UNDETERMINED, failed_conditions=failed)
    if det < 0:
        failed.append({"reason": "determinant_negative", "value": det})
        return EmbeddabilityReport(verdict=NOT_EMBEDDABLE, failed_conditions=failed)

    nc = structure.necessary_conditions(P, cfg)
    if not nc.passed:
        for name, location in nc.violations:
            failed.append({"reason": "necessary_condition", "condition": name, "location": location})
        return EmbeddabilityReport(verdict=NOT_EMBEDDABLE, failed_conditions=failed)

    accept = _log_acceptor(P, require_row_sums=True, cfg=cfg)

    try:
        eigen = numkit.eig(P, cfg)
    except IllConditioned:
        eigen = None

    if eigen is None or eigen.is_repeated(cfg):

        def explore(perturbed_matrix):
            e = numkit.eig(perturbed_matrix, cfg)
            b = branch_bound(e, float(np.linalg.det(perturbed_matrix)), bound_mode)
            acc = _log_acceptor(perturbed_matrix, require_row_sums=True, cfg=cfg)
            return _branch_search(e, b, acc, cfg, runnenberg=True)

        status, witness, perturbed, records = _repeated_spectrum_verdict(
            P, accept, cfg, allow_perturb, explore
        )
        failed.extend(records)
        verdict = {
            "positive": EMBEDDABLE,
            "negative": NOT_EMBEDDABLE,
            "undetermined": UNDETERMINED,
        }[status]
        return EmbeddabilityReport(
            verdict=verdict,
            generator=witness,
            failed_conditions=failed,
            perturbed=perturbed,
        )

    bound = branch_bound(eigen, det, bound_mode)
    witness, examined, records = _branch_search(eigen, bound, accept, cfg, runnenberg=True)
    failed.extend(records)
    if witness is not None:
        return EmbeddabilityReport(
            verdict=EMBEDDABLE,
            generator=witness,
            branches_examined=examined,
            failed_conditions=failed,
            bound_used=bound,
        )
    failed.append({"reason": "all_branches_exhausted", "branches": examined})
    return EmbeddabilityReport(
        verdict=NOT_EMBEDDABLE,
        branches_examined=examined,
        failed_conditions=failed,
        bound_used=bound,
    )


def _lam_tilde_estimate(B: np.ndarray, eigen: Optional[Eigendecomposition], cfg) -> float:
    """Upper estimate for the nonnegative-eigenvector eigenvalue of an
    unknown candidate Z-matrix: the largest -log of a diagonal entry plus the
    off-diagonal mass of the principal logarithm."""
    diag = np.clip(np.diag(B), 1e-300, None)
    est = max(0.0, float(np.max(-np.log(diag))))
    off_mass = 0.0
    if eigen is not None and not eigen.is_repeated(cfg):
        L0 = numkit.logm_branch(eigen, [0] * eigen.n, cfg)
        off = np.abs(L0.copy())
        np.fill_diagonal(off, 0.0)
        off_mass = float(np.max(off.sum(axis=1)))
    return est + off_mass


def check_strong_inf_divisible(
    B,
    cfg: ToleranceConfig = DEFAULT_TOL,
    allow_perturb: bool = True,
    root_orders: Tuple[int, ...] = (2, 3, 5),
    recurse_trailing: bool = True,
) -> DivisibilityReport:
    """Decide whether a nonnegative matrix has nonnegative roots of every
    order together with a positive determinant.

    A witness is a real matrix Q with nonpositive off-diagonal entries and
    exp(-Q) equal to the input; sample roots exp(-Q/n) are demonstrated for
    ``root_orders`` and, for reducible inputs, every trailing submatrix of
    the block triangular form is checked as well (those sub-reports do not
    recurse further).
    """
    B = as_square_matrix(B)
    if not is_nonnegative(B, cfg):
        raise NotNonnegative("input has an entry below -entry_tol")
    failed: List[dict] = []

    det = float(np.linalg.det(B))
    if det <= cfg.entry_tol:
        failed.append({"reason": "determinant_not_positive", "value": det})
        return DivisibilityReport(verdict=NOT_STRONGLY_INF_DIVISIBLE, failed_conditions=failed)

    nc = structure.necessary_conditions(B, cfg)
    if not nc.passed:
        for name, location in nc.violations:
            failed.append({"reason": "necessary_condition", "condition": name, "location": location})
        return DivisibilityReport(verdict=NOT_STRONGLY_INF_DIVISIBLE, failed_conditions=failed)

    # accepts a real log L when Q = -L is a Z-matrix and exp(L) reconstructs B
    accept = _log_acceptor(B, require_row_sums=False, cfg=cfg)

    try:
        eigen = numkit.eig(B, cfg)
    except IllConditioned:
        eigen = None

    perturbed_flag = False
    bound_used = None
    branches_examined = 0

    if eigen is None or eigen.is_repeated(cfg):

        def explore(perturbed_matrix):
            e = numkit.eig(perturbed_matrix, cfg)
            lam_t = _lam_tilde_estimate(perturbed_matrix, e, cfg)
            b = branch_bound(e, float(np.linalg.det(perturbed_matrix)), "theorem4_general", lam_t)
            acc = _log_acceptor(perturbed_matrix, require_row_sums=False, cfg=cfg)
            return _branch_search(e, b, acc, cfg, runnenberg=False)

        status, witness_log, perturbed_flag, records = _repeated_spectrum_verdict(
            B, accept, cfg, allow_perturb, explore
        )
        failed.extend(records)
        if status == "negative":
            return DivisibilityReport(
                verdict=NOT_STRONGLY_INF_DIVISIBLE,
                failed_conditions=failed,
                perturbed=perturbed_flag,
            )
        if status == "undetermined" or witness_log is None:
            return DivisibilityReport(
                verdict=UNDETERMINED, failed_conditions=failed, perturbed=perturbed_flag
            )
        found_log = witness_log
    else:
        # the bound needs an a-priori estimate of the candidate's leading
        # eigenvalue; widen a bounded number of times on exhaustion
        lam0 = _lam_tilde_estimate(B, eigen, cfg)
        found_log = None
        records: List[dict] = []
        previous_raw = -1
        for factor in (1.0, 2.0, 4.0):
            lam_t = lam0 * factor + (factor - 1.0)
            bound = branch_bound(eigen, det, "theorem4_general", lam_tilde=lam_t)
            if bound.raw_tuple_count == previous_raw:
                break
            previous_raw = bound.raw_tuple_count
            bound_used = bound
            found_log, branches_examined, records = _branch_search(
                eigen, bound, accept, cfg, runnenberg=False
            )
            if found_log is not None:
                break
        failed.extend(records)
        if found_log is None:
            failed.append({"reason": "all_branches_exhausted", "branches": branches_examined})
            return DivisibilityReport(
                verdict=NOT_STRONGLY_INF_DIVISIBLE,
                branches_examined=branches_examined,
                failed_conditions=failed,
                bound_used=bound_used,
            )

    Q = -found_log
    roots: List[Tuple[int, np.ndarray]] = []
    for order in root_orders:
        root = numkit.expm(-Q / order)
        if np.min(root) < -cfg.entry_tol:
            failed.append({"reason": "root_not_nonnegative", "order": order, "value": float(np.min(root))})
            return DivisibilityReport(
                verdict=UNDETERMINED,
                z_matrix=Q,
                failed_conditions=failed,
                perturbed=perturbed_flag,
                bound_used=bound_used,
            )
        power = np.linalg.matrix_power(root, order)
        if numkit.relative_residual(power, B) > 10 * cfg.recon_tol:
            failed.append({"reason": "root_power_mismatch", "order": order})
            return DivisibilityReport(
                verdict=UNDETERMINED,
                z_matrix=Q,
                failed_conditions=failed,
                perturbed=perturbed_flag,
                bound_used=bound_used,
            )
        roots.append((order, root))

    recursion: List[DivisibilityReport] = []
    if recurse_trailing:
        decomp = structure.frobenius_form(B, cfg)
        for t in range(1, decomp.n_blocks):
            sub = structure.trailing_submatrix(decomp, t)
            recursion.append(
                check_strong_inf_divisible(
                    sub, cfg, allow_perturb=allow_perturb, root_orders=root_orders,
                    recurse_trailing=False,
                )
            )

    if perturbed_flag:
        # a perturbed witness cannot certify the original input
        return DivisibilityReport(
            verdict=UNDETERMINED,
            z_matrix=Q,
            roots_demonstrated=roots,
            recursion=recursion,
            branches_examined=branches_examined,
            failed_conditions=failed,
            perturbed=True,
            bound_used=bound_used,
        )
    return DivisibilityReport(
        verdict=STRONGLY_INF_DIVISIBLE,
        z_matrix=Q,
        roots_demonstrated=roots,
        recursion=recursion,
        branches_examined=branches_examined,
        failed_conditions=failed,
        bound_used=bound_used,
    )


def inverse_m_power_form(P, m: int, cfg: ToleranceConfig = DEFAULT_TOL) -> Optional[InverseMRoot]:
    """Express P as the mth power of an inverse-M matrix, when possible.

    The primary mth root W of P^-1 is tested for M-matrix membership.  For
    stochastic P the result carries the resolvent parameters
    ``epsilon = (s-1)/s`` and stochastic ``h`` with ``W = s(I - epsilon*h)``;
    the identity P = (1-epsilon)^m (I - epsilon*h)^-m is verified within
    ``recon_tol``.  Returns None when P has no such representation.
    """
    P = as_square_matrix(P)
    if not (isinstance(m, (int, np.integer)) and m >= 1):
        raise ValueError("power m must be a positive integer")
    n = P.shape[0]
    det = float(np.linalg.det(P))
    if abs(det) <= cfg.entry_tol:
        raise SingularMatrix("inverse-M power form needs a nonsingular matrix")
    stochastic = is_stochastic(P, cfg)
    Pinv = np.linalg.inv(P)
    W = numkit.primary_root(Pinv, m, cfg)

    if not is_z_matrix(W, cfg):
        return None
    try:
        Winv = np.linalg.inv(W)
    except np.linalg.LinAlgError:
        return None
    if not is_nonnegative(Winv, cfg):
        return None

    if not stochastic:
        return InverseMRoot(root=Winv)

    s = float(np.max(np.diag(W)))
    if abs(s - 1.0) <= n * cfg.entry_tol:
        # boundary P = I: epsilon 0 and any stochastic factor; identity by convention
        return InverseMRoot(root=Winv, epsilon=0.0, h=np.eye(n))
    K = s * np.eye(n) - W
    H = K / (s - 1.0)
    if not is_stochastic(H, cfg):
        return None
    epsilon = (s - 1.0) / s
    recon = (1.0 - epsilon) ** m * np.linalg.matrix_power(
        np.linalg.inv(np.eye(n) - epsilon * H), m
    )
    if numkit.relative_residual(recon, P) > cfg.recon_tol:
        return None
    return InverseMRoot(root=Winv, epsilon=epsilon, h=H)


def im_root_approx(
    P,
    generator,
    n: int = 1,
    cfg: ToleranceConfig = DEFAULT_TOL,
    n_max: int = 2**20,
) -> np.ndarray:
    """Smallest-order inverse-M root certificate.

    Requires exp(generator) to reconstruct P and every off-diagonal entry of
    the generator to be strictly positive; without that the construction can
    fail outright.  Doubles the root order from ``n`` until the primary root
    of P^-1 passes the M-matrix test, demonstrating that the matching root of
    P lies in the inverse-M class.
    """
    P = as_square_matrix(P)
    G = as_square_matrix(generator)
    if P.shape != G.shape:
        raise ValueError("matrix and generator must have matching shapes")
    if not (isinstance(n, (int, np.integer)) and n >= 1):
        raise ValueError("starting order n must be a positive integer")
    if numkit.relative_residual(numkit.expm(G), P) > cfg.recon_tol:
        raise ValueError("exp(generator) does not reconstruct the matrix")
    off = _offdiag(G)
    if off.size == 0 or np.min(off) <= cfg.entry_tol:
        raise OffDiagonalZeros(
            "generator off-diagonal entries must be strictly positive"
        )
    Pinv = np.linalg.inv(P)
    order = int(n)
    while order <= n_max:
        W = numkit.primary_root(Pinv, order, cfg)
        if is_z_matrix(W, cfg) and is_nonnegative(np.linalg.inv(W), cfg):
            return W
        order *= 2
    raise SearchExhausted(f"no M-matrix root of the inverse found up to order {n_max}")
