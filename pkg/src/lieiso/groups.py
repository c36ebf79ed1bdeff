"""Coordinate models of the groups: products, frames and numeric oracles.

Each group is R^2 x| R with product (v, t) (w, s) = (v + phi(t) w, t + s),
where phi is the one-parameter group generated by the 2x2 block
M = d phi / dt |_0 (the transpose of the adjoint block):

* family I:  phi(t) = e^t Id
* family c:  M = [[0, -c], [1, 2]]; writing N = M - Id and c1^2 = |1 - c|,
    c < 1:  phi(t) = e^t (cosh(c1 t) Id + sinh(c1 t) N / c1)
    c = 1:  phi(t) = e^t (Id + t N)
    c > 1:  phi(t) = e^t (cos(c1 t) Id + sin(c1 t) N / c1)

The three branches are the same analytic function of (1 - c) t^2; they are
split so each is evaluated in real arithmetic without cancellation.

Left translation by (v, t) is affine with constant linear part
blockdiag(phi(t), 1), so the left-invariant frame at p = (x0, x1, x2) is
blockdiag(phi(x2), 1) and the right-invariant frame is [[Id, M xv], [0, 1]].

The finite-difference routines below are deliberately independent of the
algebraic engine: they differentiate the coordinate metric field and serve
as numeric oracles for the structure-constant computations.
"""

from __future__ import annotations

import math

import numpy as np

from .algebra import FAMILY_C, FAMILY_CUSTOM, FAMILY_I, LieAlgebra3
from .metrics import InnerProduct
from .errors import UnsupportedFamilyError
from .settings import DEFAULT, EngineSettings


def generator_block(alg: LieAlgebra3) -> np.ndarray:
    """d phi / dt at t = 0, a 2x2 matrix."""
    if alg.family == FAMILY_CUSTOM:
        raise UnsupportedFamilyError("the coordinate model requires family I or c")
    return alg.adjoint_block().T


def phi(alg: LieAlgebra3, t: float) -> np.ndarray:
    """The 2x2 block phi(t) acting on the normal R^2 factor."""
    t = float(t)
    if alg.family == FAMILY_I:
        return math.exp(t) * np.eye(2)
    if alg.family != FAMILY_C:
        raise UnsupportedFamilyError("the coordinate model requires family I or c")
    c = float(alg.c)
    n = np.array([[-1.0, -c], [1.0, 1.0]])  # M - Id, squares to (1 - c) Id
    if c < 1.0:
        c1 = math.sqrt(1.0 - c)
        core = math.cosh(c1 * t) * np.eye(2) + (math.sinh(c1 * t) / c1) * n
    elif c == 1.0:
        core = np.eye(2) + t * n
    else:
        c1 = math.sqrt(c - 1.0)
        core = math.cos(c1 * t) * np.eye(2) + (math.sin(c1 * t) / c1) * n
    return math.exp(t) * core


def multiply(alg: LieAlgebra3, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Group product in coordinates (x0, x1, x2)."""
    p = np.asarray(p, float)
    q = np.asarray(q, float)
    out = np.empty(3)
    out[:2] = p[:2] + phi(alg, p[2]) @ q[:2]
    out[2] = p[2] + q[2]
    return out


def inverse(alg: LieAlgebra3, p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, float)
    out = np.empty(3)
    out[:2] = -(phi(alg, -p[2]) @ p[:2])
    out[2] = -p[2]
    return out


def left_frame(alg: LieAlgebra3, p: np.ndarray) -> np.ndarray:
    """Columns are the left-invariant frame fields e_0, e_1, e_2 at p."""
    frame = np.eye(3)
    frame[:2, :2] = phi(alg, np.asarray(p, float)[2])
    return frame


def right_frame(alg: LieAlgebra3, p: np.ndarray) -> np.ndarray:
    """Columns are the right-invariant frame fields r_0, r_1, r_2 at p."""
    p = np.asarray(p, float)
    frame = np.eye(3)
    frame[:2, 2] = generator_block(alg) @ p[:2]
    return frame


def left_invariant_field(alg: LieAlgebra3, v: np.ndarray):
    v = np.asarray(v, float)
    return lambda p: left_frame(alg, p) @ v


def right_invariant_field(alg: LieAlgebra3, v: np.ndarray):
    v = np.asarray(v, float)
    return lambda p: right_frame(alg, p) @ v


def metric_field(alg: LieAlgebra3, g: InnerProduct, p: np.ndarray) -> np.ndarray:
    """Coordinate components of the left-invariant metric at p."""
    e_inv = np.linalg.inv(left_frame(alg, p))
    return e_inv.T @ g.coeffs @ e_inv


# ---------------------------------------------------------------------------
# finite differences (fourth-order central stencils)

_STENCIL_1 = ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0))  # /(12 h)
_STENCIL_2 = ((-2, -1.0), (-1, 16.0), (0, -30.0), (1, 16.0), (2, -1.0))  # /(12 h^2)


def _fd1(f, p: np.ndarray, axis: int, h: float):
    acc = None
    for offset, w in _STENCIL_1:
        q = np.array(p, float)
        q[axis] += offset * h
        term = w * np.asarray(f(q), float)
        acc = term if acc is None else acc + term
    return acc / (12.0 * h)


def _fd2(f, p: np.ndarray, axis: int, h: float):
    acc = None
    for offset, w in _STENCIL_2:
        q = np.array(p, float)
        q[axis] += offset * h
        term = w * np.asarray(f(q), float)
        acc = term if acc is None else acc + term
    return acc / (12.0 * h * h)


def christoffels(alg: LieAlgebra3, g: InnerProduct, p: np.ndarray, h: float) -> np.ndarray:
    """Coordinate Christoffel symbols Gamma^k_{ij} at p, by differencing the metric."""
    p = np.asarray(p, float)
    gp = metric_field(alg, g, p)
    dg = np.array([_fd1(lambda q: metric_field(alg, g, q), p, a, h) for a in range(3)])
    ginv = np.linalg.inv(gp)
    # dg[a, i, j] = d_a g_{ij};  Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
    lowered = dg + dg.transpose(1, 0, 2) - dg.transpose(1, 2, 0)
    return 0.5 * np.einsum("kl,ijl->kij", ginv, lowered)


def numeric_curvature(
    alg: LieAlgebra3, g: InnerProduct, p: np.ndarray, settings: EngineSettings = DEFAULT
) -> np.ndarray:
    """Coordinate curvature tensor at p, comps[i, j, k, l] for R(d_i, d_j) d_k.

    Built purely from finite differences of the coordinate metric field; used
    as an oracle against the structure-constant curvature.
    """
    h = settings.fd_step_curvature
    p = np.asarray(p, float)
    gamma = christoffels(alg, g, p, h)
    dgamma = np.array([_fd1(lambda q: christoffels(alg, g, q, h), p, a, h) for a in range(3)])
    # R^l_{ijk} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik} + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    # with gamma[k, i, j] = Gamma^k_{ij} and dgamma[a, l, i, j] = d_a Gamma^l_{ij}.
    d_term = np.einsum("iljk->ijkl", dgamma)
    quad = np.einsum("lim,mjk->ijkl", gamma, gamma)
    return d_term - d_term.transpose(1, 0, 2, 3) + quad - quad.transpose(1, 0, 2, 3)


def numeric_ricci(alg: LieAlgebra3, g: InnerProduct, p: np.ndarray, settings: EngineSettings = DEFAULT) -> np.ndarray:
    comps = numeric_curvature(alg, g, p, settings)
    return np.einsum("ijki->jk", comps)


def numeric_ricci_frame(
    alg: LieAlgebra3, g: InnerProduct, p: np.ndarray, settings: EngineSettings = DEFAULT
) -> np.ndarray:
    """Numeric Ricci at p in the left-invariant frame.

    By left-invariance this is independent of p and must reproduce the
    structure-constant Ricci computed at the identity.
    """
    frame = left_frame(alg, np.asarray(p, float))
    return frame.T @ numeric_ricci(alg, g, p, settings) @ frame


def numeric_sectional(
    alg: LieAlgebra3,
    g: InnerProduct,
    p: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    settings: EngineSettings = DEFAULT,
) -> float:
    comps = numeric_curvature(alg, g, p, settings)
    gp = metric_field(alg, g, p)
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    rxyy = np.einsum("ijkl,i,j,k->l", comps, x, y, y)
    num = float(x @ gp @ rxyy)
    den = float((x @ gp @ x) * (y @ gp @ y) - (x @ gp @ y) ** 2)
    return num / den


def killing_residual(
    alg: LieAlgebra3,
    g: InnerProduct,
    field,
    p: np.ndarray,
    settings: EngineSettings = DEFAULT,
) -> float:
    """Max norm of the Lie derivative (L_X g)_{ij} at p for a vector field X.

    (L_X g)_{ij} = X^m d_m g_{ij} + g_{mj} d_i X^m + g_{im} d_j X^m,
    all derivatives taken by central differences of the coordinate data.
    """
    h = settings.fd_step
    p = np.asarray(p, float)
    gp = metric_field(alg, g, p)
    xp = np.asarray(field(p), float)
    dg = np.array([_fd1(lambda q: metric_field(alg, g, q), p, a, h) for a in range(3)])
    dx = np.array([_fd1(field, p, a, h) for a in range(3)])  # dx[a, m] = d_a X^m
    lie = np.einsum("m,mij->ij", xp, dg)
    lie += np.einsum("mj,im->ij", gp, dx)
    lie += np.einsum("im,jm->ij", gp, dx)
    return float(np.max(np.abs(lie)))


def bracket_field_residual(alg: LieAlgebra3, p: np.ndarray, settings: EngineSettings = DEFAULT) -> float:
    """Check the left frame brackets against the structure constants at p.

    Computes [e_i, e_j] as coordinate vector fields by finite differences and
    compares with c^k_{ij} e_k(p).  Returns the max norm of the difference.
    """
    h = settings.fd_step
    p = np.asarray(p, float)
    frame_p = left_frame(alg, p)
    worst = 0.0
    fields = [lambda q, i=i: left_frame(alg, q)[:, i] for i in range(3)]
    dX = np.array([[_fd1(fields[j], p, a, h) for a in range(3)] for j in range(3)])
    # dX[j, a, m] = d_a (e_j)^m
    for i in range(3):
        for j in range(3):
            lie = frame_p[:, i] @ dX[j] - frame_p[:, j] @ dX[i]
            expected = frame_p @ alg.structure[i, j]
            worst = max(worst, float(np.max(np.abs(lie - expected))))
    return worst
