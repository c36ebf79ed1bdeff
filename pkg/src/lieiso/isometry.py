"""Killing fields, isotropy algebras and the isometry-group classification.

A Killing field X on the group is encoded by the pair (v, B) of its value
v = X_e and covariant derivative B = (nabla X)_e at the identity; B is skew
with respect to the metric.  The bracket of two Killing fields in this
encoding is

    value:  [X, X']_e = B' v - B v'
    deriv:  (nabla [X, X'])_e = R_{v, v'} - [B, B']

with R_{v, v'} the curvature endomorphism.  The right-invariant fields give
three Killing fields with B = (the connection endomorphism of v); isotropy
Killing fields have v = 0 and B solving the Singer conditions

    B . R = 0,  B . (nabla R) = 0,  B . (nabla^2 R) = 0,

which in dimension 3 (where n(n-1)/2 = 3) already certify integrability.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import FAMILY_C, FAMILY_I, LieAlgebra3
from .curvature import (
    ConnectionOperator,
    CovTensor,
    constant_sectional,
    covariant_derivative,
    curvature,
    levi_civita,
    ricci,
    so_action,
)
from .errors import InternalConsistencyError, UnsupportedFamilyError
from .linalg import rank_and_kernel, canonical_matrix_basis
from .metrics import (
    InnerProduct,
    SkewAlgebraBasis,
    intersect_skew,
    metric_from_table,
    skew_algebra,
    snap_parameters,
)
from .settings import DEFAULT, EngineSettings

#: Tolerance for re-projecting Killing brackets onto the generator basis.
CLOSURE_TOL = 1e-8


class IsometryGroupTag(str, Enum):
    TRANSLATIONS_ONLY = "TranslationsOnly"
    PRODUCT_SO2 = "Product_SO2"
    E1_X_SO21 = "E1_x_SO21"
    SO31 = "SO31"


@dataclass(frozen=True)
class KillingGenerator:
    """A Killing field encoded by (value, covariant derivative) at the identity."""

    v: np.ndarray
    b: np.ndarray
    label: str = ""


@dataclass(frozen=True)
class IsometryDescriptor:
    group_tag: IsometryGroupTag
    isotropy_dim: int
    total_dim: int
    isotropy_generators: np.ndarray  # (k, 3, 3)
    symmetric_space: bool
    sectional_constant: float | None
    boundary_snapped: bool


def right_invariant_b(alg: LieAlgebra3, conn: ConnectionOperator, v: np.ndarray) -> np.ndarray:
    """(nabla r_v)_e for the right-invariant field with value v at the identity.

    Column j is L(e_j) v - [e_j, v]; by torsion-freeness this matrix equals
    the connection endomorphism L(v), a fact the tests pin down.
    """
    v = np.asarray(v, float)
    cols = [conn.mats[j] @ v - alg.bracket(np.eye(3)[j], v) for j in range(3)]
    return np.column_stack(cols)


def _curvature_endomorphism(curv: CovTensor, v: np.ndarray, w: np.ndarray) -> np.ndarray:
    # comps[i, j, k, l] -> matrix[l, k] of z |-> R(v, w) z
    return np.einsum("ijkl,i,j->lk", curv.comps, np.asarray(v, float), np.asarray(w, float))


def killing_bracket(a: KillingGenerator, b: KillingGenerator, curv: CovTensor) -> KillingGenerator:
    v = b.b @ a.v - a.b @ b.v
    bb = _curvature_endomorphism(curv, a.v, b.v) - (a.b @ b.b - b.b @ a.b)
    return KillingGenerator(v=v, b=bb)


def singer_isotropy(
    alg: LieAlgebra3,
    g: InnerProduct,
    *,
    settings: EngineSettings = DEFAULT,
    use_ricci_prefilter: bool = True,
) -> np.ndarray:
    """Basis (k, 3, 3) of the isotropy algebra, canonically normalized.

    Solves the Singer conditions on the metric-skew algebra.  With the
    prefilter enabled the search space is first cut down to the stabilizer of
    the Ricci form (which contains every solution, since Ricci is a curvature
    contraction); this never changes the answer and the tests assert as much.
    """
    conn = levi_civita(alg, g, settings)
    r = curvature(conn, alg)
    tensors = [r, covariant_derivative(r, conn), covariant_derivative(covariant_derivative(r, conn), conn)]

    space = skew_algebra(g.coeffs, settings=settings)
    if use_ricci_prefilter:
        ric = ricci(r)
        ric_stab = skew_algebra(ric, allow_degenerate=True, settings=settings)
        space = intersect_skew(space, ric_stab, settings)
    if space.dim == 0:
        return np.zeros((0, 3, 3))

    # constraint matrix: one column per basis coefficient, rows stack the
    # entries of basis_mat . R, basis_mat . (nabla R), basis_mat . (nabla^2 R)
    blocks = [
        np.stack([so_action(basis_mat, t).comps.ravel() for basis_mat in space.mats], axis=1)
        for t in tensors
    ]
    # the natural scale of the residual system: basis size times tensor size
    # (for a symmetric space the whole matrix is rounding noise)
    scale = max(float(np.max(np.abs(t.comps))) for t in tensors) * float(
        np.max(np.abs(space.mats))
    )
    _, kernel = rank_and_kernel(np.vstack(blocks), settings.tol_rank, scale=scale)
    if len(kernel) == 0:
        return np.zeros((0, 3, 3))
    mats = np.einsum("ks,sij->kij", kernel, space.mats)
    return _normalize_isotropy(canonical_matrix_basis(mats))


def _normalize_isotropy(mats: np.ndarray) -> np.ndarray:
    """Scale a 1-dimensional isotropy generator so its (2,0) entry is 1.

    Canonical bases already carry pivot normalization; this extra step pins
    the printed form of one-dimensional isotropy algebras (whose generator
    has a nonzero (2,0) entry for every catalog case).
    """
    if len(mats) == 1 and abs(mats[0][2, 0]) > 1e-12:
        return np.array([mats[0] / mats[0][2, 0]])
    return mats


@dataclass(frozen=True)
class KillingAlgebra:
    generators: tuple[KillingGenerator, ...]
    structure: np.ndarray  # structure[a, b, m]: coefficient of generator m in [gen_a, gen_b]
    closure_residual: float

    @property
    def dim(self) -> int:
        return len(self.generators)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(gen.label for gen in self.generators)


def killing_algebra(alg: LieAlgebra3, g: InnerProduct, settings: EngineSettings = DEFAULT) -> KillingAlgebra:
    """Full Killing algebra: right-invariant generators plus isotropy.

    Generators are ordered (r0, r1, r2, A1, ..., Ak).  Every pairwise bracket
    is re-expanded in the basis; a projection residual above CLOSURE_TOL
    raises InternalConsistencyError since the Killing algebra must close.
    """
    conn = levi_civita(alg, g, settings)
    curv = curvature(conn, alg)
    iso = singer_isotropy(alg, g, settings=settings)

    gens = [
        KillingGenerator(v=np.eye(3)[i], b=right_invariant_b(alg, conn, np.eye(3)[i]), label=f"r{i}")
        for i in range(3)
    ]
    gens += [KillingGenerator(v=np.zeros(3), b=mat, label=f"A{j + 1}") for j, mat in enumerate(iso)]

    n = len(gens)
    iso_flat = iso.reshape(len(iso), 9) if len(iso) else np.zeros((0, 9))
    structure = np.zeros((n, n, n))
    worst = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            br = killing_bracket(gens[a], gens[b], curv)
            coeffs = np.zeros(n)
            coeffs[:3] = br.v
            rest = br.b - sum(br.v[i] * gens[i].b for i in range(3))
            if len(iso):
                sol, *_ = np.linalg.lstsq(iso_flat.T, rest.ravel(), rcond=None)
                coeffs[3:] = sol
                residual = float(np.max(np.abs(iso_flat.T @ sol - rest.ravel())))
            else:
                residual = float(np.max(np.abs(rest)))
            worst = max(worst, residual)
            structure[a, b] = coeffs
            structure[b, a] = -coeffs
    if worst > CLOSURE_TOL:
        raise InternalConsistencyError(
            f"Killing algebra does not close on its generators (residual {worst:.3e})"
        )
    return KillingAlgebra(generators=tuple(gens), structure=structure, closure_residual=worst)


def killing_form(ka: KillingAlgebra) -> tuple[np.ndarray, np.ndarray]:
    """Killing form K(x, y) = tr(ad x ad y) and its eigenvalues (ascending)."""
    c = ka.structure
    k = np.einsum("anm,bmn->ab", c, c)
    k = 0.5 * (k + k.T)
    return k, np.sort(np.linalg.eigvalsh(k))


def _ricci_product_signature(g: InnerProduct, conn: ConnectionOperator, ric: np.ndarray) -> bool:
    """Detect the metric-product signature: Ricci eigenvalues (0, -a, -a) with
    the kernel direction parallel (so the flat factor splits off)."""
    # generalized eigenproblem Ric v = lambda G v, via the Cholesky reduction
    l = np.linalg.cholesky(g.coeffs)
    linv = np.linalg.inv(l)
    sym = linv @ ric @ linv.T
    evals, evecs = np.linalg.eigh(0.5 * (sym + sym.T))
    scale = max(1.0, float(np.max(np.abs(evals))))
    near_zero = np.abs(evals) < 1e-8 * scale
    if int(near_zero.sum()) != 1:
        return False
    nonzero = evals[~near_zero]
    if len(nonzero) != 2 or abs(nonzero[0] - nonzero[1]) > 1e-8 * scale or nonzero[0] >= 0:
        return False
    v = linv.T @ evecs[:, int(np.argmax(near_zero))]
    v = v / np.linalg.norm(v)
    parallel_defect = max(float(np.max(np.abs(conn.mats[i] @ v))) for i in range(3))
    return parallel_defect <= 1e-8 * max(1.0, float(np.max(np.abs(conn.mats))))


def classify_isometry_group(
    alg: LieAlgebra3, g: InnerProduct, settings: EngineSettings = DEFAULT
) -> IsometryDescriptor:
    """Classify the identity component of the isometry group.

    Decision procedure on the Singer isotropy dimension k:
      k = 3: constant negative curvature, full SO(3,1)
      k = 1 and parallel curvature: metric product line x hyperbolic plane
      k = 1 otherwise: the group itself times a circle of isotropies
      k = 0: only the simply transitive translations
    k = 2 is impossible and raises InternalConsistencyError.
    """
    if alg.family not in (FAMILY_I, FAMILY_C):
        raise UnsupportedFamilyError("classification requires family I or c")
    g, snapped = _resnap_metric(alg, g, settings)

    conn = levi_civita(alg, g, settings)
    curv = curvature(conn, alg)
    nabla_r = covariant_derivative(curv, conn)
    scale = max(1.0, curv.norm())
    symmetric = nabla_r.norm() <= 1e-9 * scale

    iso = singer_isotropy(alg, g, settings=settings)
    k = len(iso)
    sec = constant_sectional(curv, g, tol=settings.tol_rank * 1e3)

    if k == 2:
        raise InternalConsistencyError("isotropy dimension 2 cannot occur in dimension 3")
    if k == 3:
        if sec is None or sec >= 0.0 or not symmetric:
            raise InternalConsistencyError(
                "3-dimensional isotropy must come with constant negative curvature"
            )
        tag = IsometryGroupTag.SO31
    elif k == 1:
        if symmetric:
            ric = ricci(curv)
            if not _ricci_product_signature(g, conn, ric):
                raise InternalConsistencyError(
                    "parallel curvature with 1-dimensional isotropy must be a metric product"
                )
            tag = IsometryGroupTag.E1_X_SO21
        else:
            tag = IsometryGroupTag.PRODUCT_SO2
    else:
        if symmetric:
            raise InternalConsistencyError("a symmetric metric cannot have trivial isotropy here")
        tag = IsometryGroupTag.TRANSLATIONS_ONLY

    return IsometryDescriptor(
        group_tag=tag,
        isotropy_dim=k,
        total_dim=3 + k,
        isotropy_generators=iso,
        symmetric_space=symmetric,
        sectional_constant=sec,
        boundary_snapped=snapped or g.boundary_snapped,
    )


def _resnap_metric(
    alg: LieAlgebra3, g: InnerProduct, settings: EngineSettings
) -> tuple[InnerProduct, bool]:
    """Rebuild a catalog metric whose parameters sit within tol_case of a
    stratum boundary; pass anything else through untouched."""
    if not g.params:
        return g, False
    snapped_params, moved = snap_parameters(alg, g.name, g.params, settings)
    if not moved:
        return g, False
    kwargs = {"nu": snapped_params["nu"]}
    if "mu" in snapped_params:
        kwargs["mu"] = snapped_params["mu"]
    if "lam" in snapped_params:
        kwargs["lam"] = snapped_params["lam"]
    return metric_from_table(alg, settings=settings, **kwargs), True
