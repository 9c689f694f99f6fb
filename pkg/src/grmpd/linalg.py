"""Dense linear algebra over a small field GF(q).

Matrices are integer arrays of canonical subfield indices (see
:class:`grmpd.fields.SubField`).  Elimination works directly on the
addition/multiplication tables; products go through the GF(p)-linear
representation so that long inner dimensions reduce to an integer matmul.
"""

import numpy as np


def matmul(F, A, B):
    """Matrix product ``A @ B`` over GF(q)."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    B = np.asarray(B, dtype=np.int64)
    vec_out = B.ndim == 1
    if vec_out:
        B = B[:, None]
    I, K = A.shape
    K2, J = B.shape
    if K != K2:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    e, p = F.e, F.ambient.p
    if e == 1:
        # prime field: vec is the integer value of the element
        a = F.vec[A, 0]
        b = F.vec[B, 0]
        out = F.from_vec[(a @ b) % p]
    else:
        a_big = F.mat[A].transpose(0, 2, 1, 3).reshape(I * e, K * e)
        b_big = F.vec[B].transpose(0, 2, 1).reshape(K * e, J)
        r = ((a_big @ b_big) % p).reshape(I, e, J).transpose(0, 2, 1)
        out = F.from_vec[r @ F._vpows]
    return out[:, 0] if vec_out else out


def rref(F, A, col_order=None):
    """Reduced row echelon form.

    Pivots are searched column by column in ``col_order`` (default: natural
    order).  Returns ``(R, pivots)`` where ``R`` keeps only the nonzero rows
    and ``pivots[i]`` is the pivot column of row ``i``.
    """
    R = np.array(A, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = R.shape
    order = range(cols) if col_order is None else col_order
    pivots = []
    r = 0
    for c in order:
        if r == rows:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        lead = R[r, c]
        if lead != 1:
            R[r] = F.mul_table[F.inv_table[lead], R[r]]
        others = np.flatnonzero(R[:, c])
        others = others[others != r]
        if others.size:
            factors = R[others, c]
            R[others] = F.add_table[R[others], F.neg_table[F.mul_table[factors[:, None], R[r][None, :]]]]
        pivots.append(int(c))
        r += 1
    return R[:r], pivots


def rank(F, A):
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(F, A)[1])


def nullspace(F, A):
    """Basis (as rows) of ``{x : A x = 0}``."""
    A = np.atleast_2d(np.asarray(A, dtype=np.int64))
    cols = A.shape[1]
    R, pivots = rref(F, A)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        N[i, f] = 1
        for r, pc in enumerate(pivots):
            N[i, pc] = F.neg_table[R[r, f]]
    return N


def row_space_equal(F, A, B):
    """True when ``A`` and ``B`` span the same row space."""
    ra, rb = rank(F, A), rank(F, B)
    return ra == rb and rank(F, np.vstack([A, B])) == ra


def hamming_weight(v, axis=-1):
    return np.count_nonzero(np.asarray(v), axis=axis)
