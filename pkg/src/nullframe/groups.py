"""Matrix realizations of the adapted-frame groups.

The ambient orthogonal group O(n,1) is taken with respect to the pairing
matrix S that has -1 in the (0,n)/(n,0) corners and the identity in the
middle block.  The stabilizer of the null direction (0,...,0,1) is the
group G, parametrized by a dilation a, a rotation R in O(n-1) and a null
translation row U.  Two subgroups matter:

* G_R: U = 0 (dilations and rotations only),
* G_I: a = 1 (rotations and translations; stabilizes the vector itself).

G also acts on the hypersurface as the degenerate orthogonal group
O_1(n-1) inside GL(n), preserving the degenerate covariant form
diag(1,...,1,0); G_I additionally preserves the contravariant form
diag(0,...,0,1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor_core import FrameMatrix, TensorError

LEVEL_G = "G"
LEVEL_GR = "G_R"
LEVEL_GI = "G_I"
LEVELS = (LEVEL_G, LEVEL_GR, LEVEL_GI)

ORTHO_TOL = 1e-12
MEMBER_TOL = 1e-10


class GroupError(ValueError):
    """Raised on invalid group parameters or level mismatches."""


def lorentz_pairing(n: int) -> np.ndarray:
    """The (n+1)x(n+1) pairing S: null corners, euclidean middle block."""
    S = np.zeros((n + 1, n + 1))
    S[0, n] = S[n, 0] = -1.0
    S[1:n, 1:n] = np.eye(n - 1)
    return S


def covariant_degenerate_form(n: int) -> np.ndarray:
    """S_{n-1}(n) = diag(1,...,1,0), the matrix of the degenerate metric."""
    return np.diag(np.r_[np.ones(n - 1), 0.0])


def contravariant_degenerate_form(n: int) -> np.ndarray:
    """S^1(n) = diag(0,...,0,1), the matrix of the null-direction square."""
    return np.diag(np.r_[np.zeros(n - 1), 1.0])


@dataclass(frozen=True)
class DegenerateFormMatrix:
    """A degenerate symmetric form together with its (co/contra)variant kind."""

    q: int
    p: int
    kind: str  # "covariant" or "contravariant"
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        object.__setattr__(self, "matrix", m)
        if self.kind not in ("covariant", "contravariant"):
            raise GroupError(f"bad form kind {self.kind!r}")
        if m.shape != (self.q, self.q):
            raise GroupError("form matrix size mismatch")
        if np.linalg.matrix_rank(m, tol=1e-10) != self.p:
            raise GroupError(f"form matrix does not have rank {self.p}")


def canonical_covariant_form(n: int) -> DegenerateFormMatrix:
    return DegenerateFormMatrix(n, n - 1, "covariant", covariant_degenerate_form(n))


def canonical_contravariant_form(n: int) -> DegenerateFormMatrix:
    return DegenerateFormMatrix(n, 1, "contravariant", contravariant_degenerate_form(n))


@dataclass(frozen=True)
class GroupElement:
    """An element (a, R, U) of G or of one of its subgroups G_R, G_I."""

    a: float
    R: np.ndarray = field(repr=False)
    U: np.ndarray = field(repr=False)
    level: str = LEVEL_G

    def __post_init__(self):
        R = np.asarray(self.R, dtype=float)
        U = np.asarray(self.U, dtype=float).reshape(-1)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "U", U)
        m = R.shape[0]
        if R.shape != (m, m) or U.shape != (m,):
            raise GroupError("R must be square and U a row of matching length")
        if self.level not in LEVELS:
            raise GroupError(f"unknown level {self.level!r}")
        if self.a == 0.0:
            raise GroupError("dilation parameter a must be nonzero")
        if np.max(np.abs(R.T @ R - np.eye(m))) > ORTHO_TOL:
            raise GroupError("R is not orthogonal")
        if self.level == LEVEL_GR and np.any(U != 0.0):
            raise GroupError("G_R elements have no translation part")
        if self.level == LEVEL_GI and self.a != 1.0:
            raise GroupError("G_I elements have unit dilation")

    @property
    def n(self) -> int:
        return self.R.shape[0] + 1


def identity_element(n: int, level: str = LEVEL_G) -> GroupElement:
    return GroupElement(1.0, np.eye(n - 1), np.zeros(n - 1), level)


def embed_in_lorentz(g: GroupElement) -> FrameMatrix:
    """The (n+1)x(n+1) realization inside O(n,1) fixing the null direction."""
    n = g.n
    M = np.zeros((n + 1, n + 1))
    M[0, 0] = 1.0 / g.a
    M[1:n, 0] = g.R @ g.U
    M[1:n, 1:n] = g.R
    M[n, 0] = 0.5 * g.a * float(g.U @ g.U)
    M[n, 1:n] = g.a * g.U
    M[n, n] = g.a
    return FrameMatrix(n + 1, M)


def embed_in_gl_n(g: GroupElement) -> FrameMatrix:
    """The n x n realization inside GL(n): block [[R, 0], [aU, a]]."""
    n = g.n
    M = np.zeros((n, n))
    M[: n - 1, : n - 1] = g.R
    M[n - 1, : n - 1] = g.a * g.U
    M[n - 1, n - 1] = g.a
    return FrameMatrix(n, M)


def compose(g1: GroupElement, g2: GroupElement) -> GroupElement:
    """Group law; matches matrix multiplication of either embedding.

    Read off the bottom row of embed_in_gl_n(g1) @ embed_in_gl_n(g2):
    (a1 U1 R2 + a1 a2 U2, a1 a2) = a (U, 1).
    """
    if g1.level != g2.level:
        raise GroupError("cannot compose elements of different levels")
    if g1.n != g2.n:
        raise GroupError("dimension mismatch")
    a = g1.a * g2.a
    R = g1.R @ g2.R
    U = (g1.U @ g2.R) / g2.a + g2.U
    return GroupElement(a, R, U, g1.level)


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(1.0 / g.a, g.R.T, -g.a * (g.U @ g.R.T), g.level)


def extract_parameters(M: FrameMatrix, level: str = LEVEL_G) -> GroupElement:
    """Invert embed_in_gl_n: read (a, R, U) off the block-triangular matrix."""
    n = M.size
    mat = M.entries
    if np.max(np.abs(mat[: n - 1, n - 1])) > MEMBER_TOL:
        raise GroupError("matrix has no admissible block-triangular shape")
    a = mat[n - 1, n - 1]
    if a == 0.0:
        raise GroupError("vanishing dilation entry")
    R = mat[: n - 1, : n - 1]
    U = mat[n - 1, : n - 1] / a
    return GroupElement(a, R, U, level)


def is_member(M: FrameMatrix, form: DegenerateFormMatrix, tol: float = MEMBER_TOL):
    """Test membership in the degenerate orthogonal group of the given form.

    Covariant kind tests  t(M) S M = S;  contravariant tests  M S t(M) = S.
    Returns (bool, max-abs residual).
    """
    if M.size != form.q:
        raise GroupError("matrix and form sizes differ")
    m, S = M.entries, form.matrix
    if form.kind == "covariant":
        residual = m.T @ S @ m - S
    else:
        residual = m @ S @ m.T - S
    r = float(np.max(np.abs(residual)))
    return r <= tol, r


def act_on_frame(g: GroupElement, frame):
    """Right action on an adapted moving frame (e0, ebar, en).

    ``frame`` is (e0, ebar, en) with e0, en vectors and ebar an array whose
    columns are the n-1 spacelike legs.
    """
    e0, ebar, en = frame
    e0 = np.asarray(e0, dtype=float)
    en = np.asarray(en, dtype=float)
    ebar = np.asarray(ebar, dtype=float)
    u2 = float(g.U @ g.U)
    new_e0 = e0 / g.a + ebar @ (g.R @ g.U) + 0.5 * g.a * u2 * en
    new_ebar = ebar @ g.R + g.a * np.outer(en, g.U)
    new_en = g.a * en
    return new_e0, new_ebar, new_en


def act_on_coframe(g: GroupElement, coframe):
    """Dual action on an ambient coframe (theta0, thetabar, thetan).

    ``thetabar`` holds the n-1 middle coforms as rows.
    """
    th0, thbar, thn = coframe
    th0 = np.asarray(th0, dtype=float)
    thbar = np.asarray(thbar, dtype=float)
    thn = np.asarray(thn, dtype=float)
    u2 = float(g.U @ g.U)
    new_th0 = g.a * th0
    new_thbar = -g.a * np.outer(g.U, th0) + g.R.T @ thbar
    new_thn = thn / g.a - (g.U @ g.R.T) @ thbar + 0.5 * g.a * u2 * th0
    return new_th0, new_thbar, new_thn


def act_on_hypersurface_coframe(g: GroupElement, coframe):
    """The dual action restricted to the hypersurface, where theta^0 = 0."""
    thbar, thn = coframe
    thbar = np.asarray(thbar, dtype=float)
    thn = np.asarray(thn, dtype=float)
    new_thbar = g.R.T @ thbar
    new_thn = thn / g.a - (g.U @ g.R.T) @ thbar
    return new_thbar, new_thn


def random_element(n: int, level: str, rng: np.random.Generator) -> GroupElement:
    """Seeded random element; R from a QR orthogonalization (det +/-1 both kept)."""
    q, r = np.linalg.qr(rng.standard_normal((n - 1, n - 1)))
    R = q * np.sign(np.diag(r))  # kill the QR sign ambiguity, keep O(n-1) spread
    a = 1.0 if level == LEVEL_GI else float(rng.uniform(0.2, 3.0) * rng.choice([-1, 1]))
    U = np.zeros(n - 1) if level == LEVEL_GR else rng.uniform(-2.0, 2.0, n - 1)
    return GroupElement(a, R, U, level)


def v_part_matrix(n: int, V: np.ndarray) -> np.ndarray:
    """Upper-triangular factor with null column V (the R^{n-1} subgroup)."""
    V = np.asarray(V, dtype=float).reshape(-1)
    T = np.eye(n + 1)
    T[0, 1:n] = V
    T[0, n] = 0.5 * float(V @ V)
    T[1:n, n] = V
    return T


def u_part_matrix(n: int, U: np.ndarray) -> np.ndarray:
    """Lower-triangular factor with null row U (the (R^{n-1})* subgroup)."""
    U = np.asarray(U, dtype=float).reshape(-1)
    N = np.eye(n + 1)
    N[1:n, 0] = U
    N[n, 0] = 0.5 * float(U @ U)
    N[n, 1:n] = U
    return N


def diag_part_matrix(n: int, a: float, R: np.ndarray) -> np.ndarray:
    D = np.zeros((n + 1, n + 1))
    D[0, 0] = 1.0 / a
    D[1:n, 1:n] = R
    D[n, n] = a
    return D


def factor_dense_subset(M: FrameMatrix, tol: float = MEMBER_TOL):
    """Factor a Lorentz matrix as (V-part)(a,R-part)(U-part).

    The product T(V) D(a,R) N(U) has last column (a V^2/2, a V, a), so the
    factorization exists exactly where the corner dilation entry M[n,n] is
    nonzero; swap-type isometries exchanging the two null legs fall outside
    this dense subset and raise.

    Returns the three factor matrices (T, D, N); their product reproduces M.
    """
    n = M.size - 1
    S = lorentz_pairing(n)
    m = M.entries
    if np.max(np.abs(m.T @ S @ m - S)) > tol:
        raise GroupError("matrix is not in O(n,1)")
    a = m[n, n]
    if abs(a) < 1e-12:
        raise GroupError("matrix outside the dense subset: not factorizable")
    V = m[1:n, n] / a
    U = m[n, 1:n] / a
    R = m[1:n, 1:n] - a * np.outer(V, U)
    T = v_part_matrix(n, V)
    D = diag_part_matrix(n, a, R)
    N = u_part_matrix(n, U)
    if np.max(np.abs(T @ D @ N - m)) > tol:
        raise GroupError("factorization residual above tolerance")
    return T, D, N
