"""Vectorized F_q arithmetic on integer arrays through lookup tables: batched
ranks, matrix products and vector-matrix products over stacks of matrices."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .field import FieldSpec


@dataclass(frozen=True, eq=False)
class Tables:
    add: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray


@lru_cache(maxsize=None)
def tables(F: FieldSpec) -> Tables:
    inv = np.array([0] + [F.inv[x] for x in range(1, F.q)], dtype=np.int64)
    return Tables(
        np.array(F.add, dtype=np.int64),
        np.array(F.mul, dtype=np.int64),
        np.array(F.neg, dtype=np.int64),
        inv,
    )


def batch_rank(T: Tables, A: np.ndarray) -> np.ndarray:
    """Ranks of a stack of matrices (M, r, c) by simultaneous elimination."""
    A = np.array(A, dtype=np.int64, copy=True)
    M, r, c = A.shape
    rank = np.zeros(M, dtype=np.int64)
    rows = np.arange(r)
    for col in range(c):
        mask = (A[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = mask.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = mask[idx].argmax(axis=1)
        t = rank[idx]
        prow = A[idx, piv, :].copy()
        A[idx, piv, :] = A[idx, t, :]
        prow = T.mul[T.inv[prow[:, col]][:, None], prow]
        A[idx, t, :] = prow
        for i in range(r):
            sel = i > t
            if not sel.any():
                continue
            ii = idx[sel]
            f = T.neg[A[ii, i, col]]
            A[ii, i, :] = T.add[A[ii, i, :], T.mul[f[:, None], prow[sel]]]
        rank[idx] += 1
    return rank


def batch_matmul(T: Tables, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """A[m] @ B[m] for stacks (M, r, s) and (M, s, c)."""
    out = np.zeros((A.shape[0], A.shape[1], B.shape[2]), dtype=np.int64)
    for j in range(A.shape[2]):
        out = T.add[out, T.mul[A[:, :, j, None], B[:, None, j, :]]]
    return out


def batch_vecmat(T: Tables, V: np.ndarray, A: np.ndarray) -> np.ndarray:
    """V[m] @ A[m] for stacks (M, s) and (M, s, c)."""
    return batch_matmul(T, V[:, None, :], A)[:, 0, :]


def batch_lincomb(T: Tables, V: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """sum_i V[m, i] * mats[i] for coefficient rows V (M, k) and mats (k, r, c)."""
    out = np.zeros((V.shape[0],) + mats.shape[1:], dtype=np.int64)
    for i in range(mats.shape[0]):
        out = T.add[out, T.mul[V[:, i, None, None], mats[i][None]]]
    return out
