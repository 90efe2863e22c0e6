"""
Exact linear algebra over F_{p^d}
Matrices are numpy int64 arrays of residues interpreted in a given ExtensionField.
"""
from typing import List, Tuple

import numpy as np

from .field import ExtensionField, Polynomial, poly_mul, poly_scale, poly_sub


def identity(field: ExtensionField, n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(field: ExtensionField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over the field."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} x {b.shape}")
    if field.is_prime_field:
        return (a @ b) % int(field.p)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = field.add(out, field.mul(a[:, k, None], b[None, k, :]))
    return out


def matrix_power(field: ExtensionField, a: np.ndarray, exponent: int) -> np.ndarray:
    result = identity(field, a.shape[0])
    base = np.asarray(a, dtype=np.int64)
    while exponent > 0:
        if exponent & 1:
            result = matmul(field, result, base)
        base = matmul(field, base, base)
        exponent >>= 1
    return result


def rref(field: ExtensionField, a: np.ndarray) -> Tuple[np.ndarray, List[int]]:
    """
    Reduced row echelon form.

    Args:
        field: Coefficient field
        a: Matrix of residues

    Returns:
        (RREF matrix, pivot column indices)
    """
    r_mat = np.array(a, dtype=np.int64, copy=True)
    rows, cols = r_mat.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nonzero = np.nonzero(r_mat[r:, c])[0]
        if len(nonzero) == 0:
            continue
        piv = r + int(nonzero[0])
        if piv != r:
            r_mat[[r, piv]] = r_mat[[piv, r]]
        r_mat[r] = field.mul(r_mat[r], field.inv(r_mat[r, c]))
        for i in range(rows):
            if i != r and r_mat[i, c] != 0:
                r_mat[i] = field.sub(r_mat[i], field.mul(r_mat[r], r_mat[i, c]))
        pivots.append(c)
        r += 1
    return r_mat, pivots


def rank(field: ExtensionField, a: np.ndarray) -> int:
    return len(rref(field, a)[1])


def nullspace(field: ExtensionField, a: np.ndarray) -> np.ndarray:
    """Right nullspace; the columns of the result form a basis."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    r_mat, pivots = rref(field, a)
    free = [j for j in range(n) if j not in pivots]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for col, f in enumerate(free):
        basis[f, col] = 1
        for row, pc in enumerate(pivots):
            basis[pc, col] = field.neg(r_mat[row, f])
    return basis


def solve(field: ExtensionField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Solve A X = B for X when A has full column rank.

    Raises:
        ArithmeticError: if the system is inconsistent
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.shape[1]
    r_mat, pivots = rref(field, np.concatenate([a, b], axis=1))
    if pivots[:n] != list(range(n)) or any(pc >= n for pc in pivots):
        raise ArithmeticError("linear system has no unique solution")
    return r_mat[:n, n:]


def charpoly(field: ExtensionField, a: np.ndarray) -> Polynomial:
    """
    Characteristic polynomial det(xI - A), low degree first.

    Reduces A to upper Hessenberg form by similarity, then expands the
    determinant along the subdiagonal. Division-safe in every characteristic.
    """
    h = np.array(a, dtype=np.int64, copy=True)
    n = h.shape[0]
    if h.shape != (n, n):
        raise ValueError(f"charpoly needs a square matrix, got {h.shape}")

    for m in range(1, n - 1):
        nonzero = np.nonzero(h[m:, m - 1])[0]
        if len(nonzero) == 0:
            continue
        i = m + int(nonzero[0])
        if i != m:
            h[[i, m]] = h[[m, i]]
            h[:, [i, m]] = h[:, [m, i]]
        t_inv = field.inv(h[m, m - 1])
        for i in range(m + 1, n):
            u = int(field.mul(h[i, m - 1], t_inv))
            if u == 0:
                continue
            h[i] = field.sub(h[i], field.mul(h[m], u))
            h[:, m] = field.add(h[:, m], field.mul(h[:, i], u))

    polys: List[Polynomial] = [[1]]
    for m in range(1, n + 1):
        current = poly_mul([int(field.neg(h[m - 1, m - 1])), 1], polys[m - 1], field)
        t = 1
        for i in range(m - 1, 0, -1):
            t = int(field.mul(t, h[i, i - 1]))
            coefficient = int(field.mul(h[i - 1, m - 1], t))
            current = poly_sub(current, poly_scale(polys[i - 1], coefficient, field), field)
        polys.append(current)
    return polys[n]

