"""Counting kernels over the approval matrix.

Every kernel exists twice: a numba ``@njit`` loop version and a vectorised
numpy version. Both operate on integers only, so they agree bit for bit and
the backend never changes an output. The numba path is used when numba can
be imported and ``RANDCOMMITTEE_DISABLE_NUMBA`` is unset or ``0``.

Shapes: ``approvals`` is ``(n, m)`` uint8, ``mask`` is ``(m,)`` bool and
``masks`` is ``(K, m)`` bool (one row per committee).
"""

from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("RANDCOMMITTEE_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _flag not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by RANDCOMMITTEE_DISABLE_NUMBA")
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:
    NUMBA_AVAILABLE = False


# --------------------------------------------------------------------------
# numpy reference path
# --------------------------------------------------------------------------


def coverage_np(approvals, mask):
    return approvals[:, mask].sum(axis=1, dtype=np.int64)


def underrepresented_counts_np(approvals, mask, ell):
    under = coverage_np(approvals, mask) < ell
    return approvals[under].sum(axis=0, dtype=np.int64)


def pav_scores_np(approvals, masks, harmonic):
    # harmonic[j] = scaled H(j); a voter covered j times contributes harmonic[j]
    cov = masks.astype(np.int64) @ approvals.T.astype(np.int64)
    return harmonic[cov].sum(axis=1)


def first_violations_np(approvals, masks, alpha_num, alpha_den, ell_max, k):
    n, m = approvals.shape
    A = approvals.astype(np.int64)
    cov = masks.astype(np.int64) @ A.T
    out = np.full(masks.shape[0], -1, dtype=np.int64)
    outside = ~masks
    for ell in range(1, ell_max + 1):
        counts = (cov < ell).astype(np.int64) @ A
        viol = outside & (counts * alpha_num * k >= ell * n * alpha_den)
        hit = viol.any(axis=1) & (out < 0)
        if hit.any():
            out[hit] = (ell - 1) * m + viol[hit].argmax(axis=1)
    return out


# --------------------------------------------------------------------------
# numba path
# --------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def coverage_nb(approvals, mask):
        n, m = approvals.shape
        out = np.zeros(n, dtype=np.int64)
        for i in range(n):
            s = 0
            for c in range(m):
                if mask[c] and approvals[i, c]:
                    s += 1
            out[i] = s
        return out

    @njit(cache=True)
    def underrepresented_counts_nb(approvals, mask, ell):
        n, m = approvals.shape
        cov = coverage_nb(approvals, mask)
        out = np.zeros(m, dtype=np.int64)
        for i in range(n):
            if cov[i] < ell:
                for c in range(m):
                    if approvals[i, c]:
                        out[c] += 1
        return out

    @njit(cache=True)
    def pav_scores_nb(approvals, masks, harmonic):
        K = masks.shape[0]
        out = np.zeros(K, dtype=np.int64)
        for j in range(K):
            cov = coverage_nb(approvals, masks[j])
            s = 0
            for i in range(cov.shape[0]):
                s += harmonic[cov[i]]
            out[j] = s
        return out

    @njit(cache=True)
    def first_violations_nb(approvals, masks, alpha_num, alpha_den, ell_max, k):
        n, m = approvals.shape
        K = masks.shape[0]
        out = np.full(K, -1, dtype=np.int64)
        for j in range(K):
            mask = masks[j]
            cov = coverage_nb(approvals, mask)
            found = False
            for ell in range(1, ell_max + 1):
                rhs = ell * n * alpha_den
                for c in range(m):
                    if mask[c]:
                        continue
                    cnt = 0
                    for i in range(n):
                        if approvals[i, c] and cov[i] < ell:
                            cnt += 1
                    if cnt * alpha_num * k >= rhs:
                        out[j] = (ell - 1) * m + c
                        found = True
                        break
                if found:
                    break
        return out

    coverage = coverage_nb
    underrepresented_counts = underrepresented_counts_nb
    pav_scores = pav_scores_nb
    first_violations = first_violations_nb
    BACKEND = "numba"
else:
    coverage = coverage_np
    underrepresented_counts = underrepresented_counts_np
    pav_scores = pav_scores_np
    first_violations = first_violations_np
    BACKEND = "numpy"
