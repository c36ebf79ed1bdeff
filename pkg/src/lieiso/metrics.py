"""The catalog of left-invariant inner products, and metric-skew algebras.

Every left-invariant metric on the groups handled here is isometric, via an
automorphism, to one of a short catalog of Gram matrices in the (e0, e1, e2)
basis.  ``metric_from_table`` builds those Gram matrices and validates the
parameter ranges; arbitrary SPD Gram matrices can be wrapped with
``inner_product_from_gram`` and flow through the generic machinery.

Catalog (nu > 0 throughout):

* family I:            g_nu      = diag(1, 1, nu)
* family c, c < 0:     g_mu_nu   = diag(1, mu, nu),             0 < mu <= |c|
* family c, c = 0:     g_mu_nu   = diag(1, mu, nu),             mu > 0
                       g_nu      = [[1, 1/2, 0], [1/2, 1, 0], [0, 0, nu]]
* family c, 0 < c < 1: g_mu_nu   = P^T diag-block(1, mu; nu) P, 0 <= mu < 1
* family c, c = 1:     g_mu_nu   = diag(1, mu, nu),             0 < mu <= 1
                       g_lam_nu  = [[1, lam, 0], [lam, 1, 0], [0, 0, nu]],
                       0 <= lam < 1 (lam = 0 coincides with g_mu_nu at mu = 1)
* family c, c > 1:     g_mu_nu   = [[1, 1, 0], [1, mu, 0], [0, 0, nu]],
                       1 < mu <= c
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import FAMILY_C, FAMILY_I, LieAlgebra3
from .errors import DegenerateFormError, RangeError, UnsupportedFamilyError
from .linalg import canonical_matrix_basis, check_spd, rank_and_kernel, MATRIX_PIVOT_ORDER
from .settings import DEFAULT, EngineSettings

METRIC_NU = "g_nu"
METRIC_MU_NU = "g_mu_nu"
METRIC_LAMBDA_NU = "g_lambda_nu"
METRIC_GRAM = "gram"


@dataclass(frozen=True)
class InnerProduct:
    """An inner product on the algebra, as a Gram matrix in the e-basis."""

    coeffs: np.ndarray
    name: str
    params: dict[str, float] = field(default_factory=dict)
    boundary_snapped: bool = False

    def __post_init__(self):
        g = check_spd(self.coeffs)
        g.flags.writeable = False
        object.__setattr__(self, "coeffs", g)

    def pairing(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.asarray(x, float) @ self.coeffs @ np.asarray(y, float))

    def norm(self, x: np.ndarray) -> float:
        return math.sqrt(max(self.pairing(x, x), 0.0))


def inner_product_from_gram(gram: np.ndarray) -> InnerProduct:
    return InnerProduct(coeffs=np.asarray(gram, dtype=float), name=METRIC_GRAM)


def canonical_frame_change(c: float) -> np.ndarray:
    """Basis change expressing the canonical 0 < c < 1 inner products in the e-frame.

    Only defined for 0 < c < 1 (the square root below must be real and nonzero).
    """
    if not 0.0 < c < 1.0:
        raise RangeError(f"frame change only defined for 0 < c < 1, got c={c}")
    s = math.sqrt(1.0 - c)
    return np.array(
        [
            [-(1.0 + s) / (2.0 * c * s), -1.0 / (2.0 * s), 0.0],
            [(1.0 - s) / (2.0 * c * s), 1.0 / (2.0 * s), 0.0],
            [0.0, 0.0, 1.0],
        ]
    )


def mid_c_gram_closed_form(c: float, mu: float, nu: float) -> np.ndarray:
    """Closed form of the 0 < c < 1 Gram matrix (used as an independent check)."""
    g00 = (c * mu + c - 2.0) / (2.0 * (c - 1.0) * c * c)
    g01 = (mu - 1.0) / (2.0 * (c - 1.0) * c)
    g11 = (mu - 1.0) / (2.0 * (c - 1.0))
    return np.array([[g00, g01, 0.0], [g01, g11, 0.0], [0.0, 0.0, nu]])


def _snap(value: float, targets: list[float], tol: float) -> tuple[float, bool]:
    for t in targets:
        if value != t and abs(value - t) < tol:
            return t, True
    return value, False


def snap_parameters(
    alg: LieAlgebra3,
    name: str,
    params: dict[str, float],
    settings: EngineSettings = DEFAULT,
) -> tuple[dict[str, float], bool]:
    """Snap metric parameters onto nearby stratum boundaries.

    Classification strata are cut out by exact parameter coincidences
    (mu = |c|, mu = sqrt(c), mu = c, ...).  Parameters within ``tol_case`` of
    such a value are replaced by it, and the second return value records
    whether anything moved.
    """
    if alg.family != FAMILY_C or "mu" not in params and "lam" not in params:
        return dict(params), False
    c = float(alg.c)
    out = dict(params)
    snapped = False
    if name == METRIC_MU_NU and "mu" in params:
        targets: list[float] = []
        if c < 0.0:
            targets = [abs(c)]
        elif 0.0 < c < 1.0:
            targets = [0.0, math.sqrt(c)]
        elif c == 1.0:
            targets = [1.0]
        elif c > 1.0:
            targets = [c, (math.sqrt(c) - 1.0) ** 2 + 1.0]
        out["mu"], snapped = _snap(float(params["mu"]), targets, settings.tol_case)
    elif name == METRIC_LAMBDA_NU and "lam" in params:
        out["lam"], snapped = _snap(float(params["lam"]), [0.0], settings.tol_case)
    return out, snapped


def metric_from_table(
    alg: LieAlgebra3,
    *,
    mu: float | None = None,
    nu: float | None = None,
    lam: float | None = None,
    settings: EngineSettings = DEFAULT,
) -> InnerProduct:
    """Build a catalog inner product for ``alg`` from its parameters.

    Exactly one parameter signature is accepted per family (see the module
    docstring).  Out-of-range parameters raise RangeError naming the violated
    constraint; parameters within ``tol_case`` of a stratum boundary are
    snapped onto it first and the result is flagged as boundary-snapped.
    """
    if alg.family not in (FAMILY_I, FAMILY_C):
        raise UnsupportedFamilyError("catalog metrics are only defined for families I and c")
    if nu is None:
        raise RangeError("every catalog metric requires nu")
    nu = float(nu)
    if not nu > 0.0:
        raise RangeError(f"nu={nu} violates the catalog constraint nu > 0")

    if alg.family == FAMILY_I:
        if mu is not None or lam is not None:
            raise RangeError("family I admits only the one-parameter metric g_nu")
        return InnerProduct(np.diag([1.0, 1.0, nu]), METRIC_NU, {"nu": nu})

    c = float(alg.c)
    if mu is not None and lam is not None:
        raise RangeError("give either mu or lam, not both")

    if lam is not None:
        if c != 1.0:
            raise RangeError("the two-parameter metric g_lambda_nu exists only at c = 1")
        params, snapped = snap_parameters(alg, METRIC_LAMBDA_NU, {"lam": float(lam), "nu": nu}, settings)
        lam = params["lam"]
        if not 0.0 <= lam < 1.0:
            raise RangeError(f"lam={lam} violates the catalog constraint 0 <= lam < 1")
        if lam == 0.0:
            # Glued to the diagonal sheet: g'_{0,nu} is literally g_{1,nu}.
            return InnerProduct(np.diag([1.0, 1.0, nu]), METRIC_MU_NU, {"mu": 1.0, "nu": nu}, snapped)
        g = np.array([[1.0, lam, 0.0], [lam, 1.0, 0.0], [0.0, 0.0, nu]])
        return InnerProduct(g, METRIC_LAMBDA_NU, {"lam": lam, "nu": nu}, snapped)

    if mu is None:
        if c == 0.0:
            g = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, nu]])
            return InnerProduct(g, METRIC_NU, {"nu": nu})
        raise RangeError("the one-parameter metric g_nu exists only at c = 0 (or for family I)")

    params, snapped = snap_parameters(alg, METRIC_MU_NU, {"mu": float(mu), "nu": nu}, settings)
    mu = params["mu"]
    if c < 0.0:
        if not 0.0 < mu <= abs(c):
            raise RangeError(f"mu={mu} violates the catalog constraint 0 < mu <= |c| = {abs(c)} for c < 0")
        g = np.diag([1.0, mu, nu])
    elif c == 0.0:
        if not mu > 0.0:
            raise RangeError(f"mu={mu} violates the catalog constraint mu > 0 for c = 0")
        g = np.diag([1.0, mu, nu])
    elif c < 1.0:
        if not 0.0 <= mu < 1.0:
            raise RangeError(f"mu={mu} violates the catalog constraint 0 <= mu < 1 for 0 < c < 1")
        p = canonical_frame_change(c)
        core = np.array([[1.0, mu, 0.0], [mu, 1.0, 0.0], [0.0, 0.0, nu]])
        g = p.T @ core @ p
    elif c == 1.0:
        if not 0.0 < mu <= 1.0:
            raise RangeError(f"mu={mu} violates the catalog constraint 0 < mu <= 1 for c = 1")
        g = np.diag([1.0, mu, nu])
    else:
        if not 1.0 < mu <= c:
            raise RangeError(f"mu={mu} violates the catalog constraint 1 < mu <= c = {c} for c > 1")
        g = np.array([[1.0, 1.0, 0.0], [1.0, mu, 0.0], [0.0, 0.0, nu]])
    return InnerProduct(g, METRIC_MU_NU, {"mu": mu, "nu": nu}, snapped)


@dataclass(frozen=True)
class SkewAlgebraBasis:
    """Canonical basis of { M : M^T S + S M = 0 } for a symmetric form S."""

    mats: np.ndarray  # (k, 3, 3)
    labels: tuple[str, ...]

    @property
    def dim(self) -> int:
        return len(self.mats)


def _pivot_label(mat: np.ndarray) -> str:
    for i, j in MATRIX_PIVOT_ORDER:
        if abs(mat[i, j]) > 1e-9:
            return f"a{i}{j}"
    return "a??"


def skew_algebra(
    form: np.ndarray,
    *,
    allow_degenerate: bool = False,
    settings: EngineSettings = DEFAULT,
) -> SkewAlgebraBasis:
    """Solve M^T S + S M = 0 for a symmetric 3x3 form S.

    For a nondegenerate S the solution space is 3-dimensional.  Degenerate
    forms raise DegenerateFormError (with the numeric rank attached) unless
    ``allow_degenerate`` is set, in which case the stabilizer is returned with
    whatever dimension it has.
    """
    s = np.asarray(form, dtype=float)
    s = 0.5 * (s + s.T)
    rank, _ = rank_and_kernel(s, settings.tol_rank)
    if rank < 3 and not allow_degenerate:
        raise DegenerateFormError(f"symmetric form is degenerate (rank {rank})", rank=rank)

    # vec(M^T S + S M) as a linear operator on vec(M), row-major flattening.
    op = np.zeros((9, 9))
    for i in range(3):
        for j in range(3):
            row = 3 * i + j
            for k in range(3):
                for l in range(3):
                    col = 3 * k + l
                    val = 0.0
                    if l == i:
                        val += s[k, j]  # (M^T S)_ij = sum_m M_mi S_mj
                    if l == j:
                        val += s[i, k]  # (S M)_ij  = sum_m S_im M_mj
                    op[row, col] += val
    _, kernel = rank_and_kernel(op, settings.tol_rank)
    mats = canonical_matrix_basis(kernel.reshape(-1, 3, 3))
    labels = tuple(_pivot_label(m) for m in mats)
    return SkewAlgebraBasis(mats=mats, labels=labels)


def intersect_skew(
    a: SkewAlgebraBasis | np.ndarray,
    b: SkewAlgebraBasis | np.ndarray,
    settings: EngineSettings = DEFAULT,
) -> SkewAlgebraBasis:
    """Intersection of two spans of 3x3 matrices, canonically re-based."""
    amats = a.mats if isinstance(a, SkewAlgebraBasis) else np.asarray(a, float)
    bmats = b.mats if isinstance(b, SkewAlgebraBasis) else np.asarray(b, float)
    if len(amats) == 0 or len(bmats) == 0:
        return SkewAlgebraBasis(mats=np.zeros((0, 3, 3)), labels=())
    stacked = np.hstack([amats.reshape(len(amats), 9).T, -bmats.reshape(len(bmats), 9).T])
    _, kernel = rank_and_kernel(stacked, settings.tol_rank)
    if len(kernel) == 0:
        return SkewAlgebraBasis(mats=np.zeros((0, 3, 3)), labels=())
    combos = kernel[:, : len(amats)] @ amats.reshape(len(amats), 9)
    mats = canonical_matrix_basis(combos.reshape(-1, 3, 3))
    return SkewAlgebraBasis(mats=mats, labels=tuple(_pivot_label(m) for m in mats))
