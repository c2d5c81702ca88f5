"""Gram-Schmidt orthogonalization over an abstract Gram matrix.

Everything here is measure-agnostic: the input is the matrix of inner
products g[j][k] of some basis e_0..e_{N-1} plus the prescribed leading
factors b_{n,n}.  The output describes the unique orthogonal vectors

    E_n = (e_n - sum_{m<n} E_m b_{m,n}) / b_{n,n},   (E_j, E_k) = h_j d_{jk}

through the triangular connection matrices a (E over e) and b (e over E),
the squared norms h_n and the leading Gram determinants.

In the exact backend the loop is classical Gram-Schmidt; with float entries
the same loop re-reads the updated residual at every step, i.e. it is the
modified variant, which is what an ill-conditioned Hankel matrix needs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .errors import BadFactor, NotCheckerboard, NotPositiveDefinite
from .measures import GramMatrix
from .scalars import EXACT, FLOAT

# float pivots at or below this times the magnitude of the leading block that
# produced them mean the matrix is numerically indefinite; stopping beats
# returning garbage (Hankel blocks are graded, so the scale must follow the
# block, not the whole matrix)
PIVOT_FLOOR = 1e-13


def _entries(gram):
    if isinstance(gram, GramMatrix):
        return gram.rows()
    return [list(row) for row in gram]


@dataclass(frozen=True)
class OrthogonalizationResult:
    """Connection data of one orthogonalization pass.

    ``coeffs[m][n]``         a_{m,n}: coefficient of e_m in E_n (upper triangular)
    ``inverse_coeffs[m][n]`` b_{m,n}: coefficient of E_m in e_n
    ``norms[n]``             h_n = (E_n, E_n)
    ``factors[n]``           the prescribed b_{n,n}
    ``gram_dets[k]``         determinant of the leading k x k block (index 0 is 1)
    """

    coeffs: tuple
    inverse_coeffs: tuple
    norms: tuple
    factors: tuple
    gram_dets: tuple

    @property
    def size(self):
        return len(self.norms)

    def vector(self, n):
        """Coefficient column of E_n on the input basis."""
        return tuple(self.coeffs[m][n] for m in range(self.size))


def gram_determinants(gram):
    """Leading principal minors: Z[0] = 1, Z[k] = det of the k x k block."""
    return tuple(linalg.leading_minors(_entries(gram)))


def gram_schmidt(gram, leading_factors) -> OrthogonalizationResult:
    """Orthogonalize against a Gram matrix with prescribed leading factors."""
    g = _entries(gram)
    n_dim = len(g)
    if len(leading_factors) != n_dim:
        raise BadFactor(f"need {n_dim} leading factors, got {len(leading_factors)}")
    kind = linalg.matrix_kind(g) if n_dim else EXACT
    for f in leading_factors:
        if f == 0 or (isinstance(f, float) and not math.isfinite(f)):
            raise BadFactor("leading factors must be nonzero and finite")
    zero = Fraction(0) if kind == EXACT else 0.0

    a = [[zero] * n_dim for _ in range(n_dim)]
    b = [[zero] * n_dim for _ in range(n_dim)]
    norms = []
    block_max = zero
    for col in range(n_dim):
        row_max = max(abs(g[col][k]) for k in range(col + 1))
        block_max = max(block_max, row_max)
        v = [zero] * n_dim
        v[col] = zero + 1 if kind == EXACT else 1.0
        # one exact pass; with floats a second sweep re-removes the rounding
        # residue left by the first (the usual twice-is-enough refinement)
        for _ in range(1 if kind == EXACT else 2):
            for m in range(col):
                # (E_m, v) against the current residual (modified G-S in float)
                overlap = sum(
                    a[j][m] * sum(g[j][k] * v[k] for k in range(col + 1))
                    for j in range(m + 1)
                )
                coef = overlap / norms[m]
                for j in range(m + 1):
                    v[j] -= coef * a[j][m]
                b[m][col] += coef
        factor = leading_factors[col]
        v = [x / factor for x in v]
        h = sum(
            v[j] * g[j][k] * v[k] for j in range(col + 1) for k in range(col + 1)
        )
        if kind == EXACT:
            if h <= 0:
                raise NotPositiveDefinite(f"pivot h_{col} = {h} is not positive")
        elif h <= PIVOT_FLOOR * float(block_max):
            raise NotPositiveDefinite(
                f"float pivot h_{col} = {h} below conditioning floor"
            )
        for j in range(col + 1):
            a[j][col] = v[j]
        b[col][col] = factor if kind == EXACT else float(factor)
        norms.append(h)
    return OrthogonalizationResult(
        tuple(map(tuple, a)),
        tuple(map(tuple, b)),
        tuple(norms),
        tuple(leading_factors),
        gram_determinants(g),
    )


def determinant_oracle_vector(gram, n, leading_factor):
    """Coefficients of E_n on e_0..e_n from the bordered-determinant formula.

    The determinant with Gram rows 0..n-1 and the symbolic basis row is
    expanded along its last row; dividing by Z_{n-1} and by the leading
    factor gives the same column that gram_schmidt produces.
    """
    g = _entries(gram)
    if not 0 <= n < len(g):
        raise IndexError(f"column {n} outside matrix of size {len(g)}")
    if leading_factor == 0:
        raise BadFactor("leading factor must be nonzero")
    z_prev = linalg.det([row[:n] for row in g[:n]])
    if z_prev == 0:
        raise NotPositiveDefinite(f"leading minor of size {n} vanishes")
    rows = list(range(n))
    coeffs = []
    for k in range(n + 1):
        cols = [c for c in range(n + 1) if c != k]
        minor = linalg.det_submatrix(g, rows, cols)
        coeffs.append((-1) ** (n + k) * minor / z_prev / leading_factor)
    return tuple(coeffs)


def oracle_norm(gram, n, leading_factor):
    """h_n = b_{n,n}^{-2} Z_{n+1}/Z_n in size-indexed determinants."""
    g = _entries(gram)
    z_prev = linalg.det([row[:n] for row in g[:n]])
    z_here = linalg.det([row[: n + 1] for row in g[: n + 1]])
    return z_here / z_prev / leading_factor**2


def connection_b(gram, result: OrthogonalizationResult, m, n):
    """b_{m,n} from the bordered determinant with last row (g[n][k]).

    Must reproduce the inverse of the a-matrix; this closed form is the
    cross-check for the inductive loop.
    """
    g = _entries(gram)
    size = result.size
    if not (0 <= m <= n < size):
        raise IndexError(f"require 0 <= m <= n < {size}")
    z_m = result.gram_dets[m + 1]
    bordered = [row[: m + 1] for row in g[:m]]
    bordered.append(list(g[n][: m + 1]))
    return result.factors[m] * linalg.det(bordered) / z_m


def _checkerboard_blocks(matrix):
    n = len(matrix)
    even_idx = list(range(0, n, 2))
    odd_idx = list(range(1, n, 2))
    even = [[matrix[j][k] for k in even_idx] for j in even_idx]
    odd = [[matrix[j][k] for k in odd_idx] for j in odd_idx]
    return even, odd


def checkerboard_det(matrix, last_row_exempt=False):
    """Factor the determinant of a checkerboard matrix into parity blocks.

    The matrix must vanish wherever the row+column index sum is odd, except
    possibly in the last row when ``last_row_exempt``.  Returns
    (det, even_block_det, odd_block_det); the factorization det = even * odd
    holds regardless of the exempt entries.
    """
    m = _entries(matrix)
    n = len(m)
    for j, row in enumerate(m):
        if len(row) != n:
            raise NotCheckerboard("matrix must be square")
        for k, x in enumerate(row):
            if (j + k) % 2 and x != 0 and not (last_row_exempt and j == n - 1):
                raise NotCheckerboard(f"entry ({j},{k}) breaks the parity structure")
    even, odd = _checkerboard_blocks(m)
    return linalg.det(m), linalg.det(even), linalg.det(odd)
