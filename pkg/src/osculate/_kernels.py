"""Inner loop of the fan-displacement multidegree computation.

Set OSCULATE_NO_NUMBA=1 to run the same code as plain Python/numpy (slow,
but useful for debugging and for comparing against the compiled path).
"""

from __future__ import annotations

import os

import numpy as np

NUMBA_DISABLED = os.environ.get("OSCULATE_NO_NUMBA", "").strip().lower() in {"1", "true", "yes"}

try:
    if NUMBA_DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised via the env flag
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


NONGENERIC = -1


@njit(cache=True)
def _det(M, n):
    """Exact determinant of the leading n x n block (Bareiss, int64)."""
    a = M[:n, :n].copy()
    sign = 1
    prev = 1
    for c in range(n):
        piv = -1
        for i in range(c, n):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            return 0
        if piv != c:
            for j in range(n):
                t = a[c, j]
                a[c, j] = a[piv, j]
                a[piv, j] = t
            sign = -sign
        p = a[c, c]
        for i in range(c + 1, n):
            f = a[i, c]
            for j in range(c + 1, n):
                a[i, j] = (p * a[i, j] - f * a[c, j]) // prev
            a[i, c] = 0
        prev = p
    return sign * a[n - 1, n - 1]


@njit(cache=True)
def _add_face_rows(pts, vals, face_idx, start, stop, M, rhs, row, sgn):
    """Tie equations (a_t - a_t0).w = sgn*(vals_t0 - vals_t) for one face."""
    m = pts.shape[1]
    t0 = face_idx[start]
    for q in range(start + 1, stop):
        t = face_idx[q]
        for c in range(m):
            M[row, c] = pts[t, c] - pts[t0, c]
        rhs[row] = sgn * (vals[t0] - vals[t])
        row += 1
    return row


@njit(cache=True)
def enumerate_intersections(
    pts,
    v1,
    v2,
    s1faces,
    flags,
    comp_start,
    live,
    lay_ptr,
    lay_idx,
    lf_ptr,
    face_ptr,
    face_idx,
    extra,
    out,
):
    """Find every (flag, S1, T-faces) combination meeting the displaced product fan.

    Returns the number of rows written to out, NONGENERIC on a tie, or
    out.shape[0] + 1 if out was too small.
    """
    N, m = pts.shape
    nflags, r = flags.shape
    nS1 = s1faces.shape[0]
    w1 = s1faces.shape[1]
    cap = out.shape[0]
    count = 0
    cursor = np.zeros(r, np.int64)
    used = np.zeros(r + 1, np.int64)
    M = np.zeros((m + 1, m + 1), np.int64)
    Mj = np.zeros((m + 1, m + 1), np.int64)
    rhs = np.zeros(m + 1, np.int64)
    W = np.zeros(m, np.int64)
    X = np.zeros(N, np.int64)
    G = np.zeros(N, np.int64)
    Y = np.zeros(N, np.int64)
    mval = np.zeros(r, np.int64)
    inS1 = np.zeros(N, np.bool_)
    inT = np.zeros(N, np.bool_)
    for f in range(nflags):
        pos = 0
        cursor[0] = lf_ptr[flags[f, 0]]
        used[0] = 0
        while pos >= 0:
            L = flags[f, pos]
            if cursor[pos] >= lf_ptr[L + 1]:
                pos -= 1
                if pos >= 0:
                    cursor[pos] += 1
                continue
            fid = cursor[pos]
            sz = face_ptr[fid + 1] - face_ptr[fid]
            nu = used[pos] + sz - 1
            if nu > extra:
                cursor[pos] = lf_ptr[L + 1]  # faces are sorted by size
                continue
            if pos < r - 1:
                used[pos + 1] = nu
                pos += 1
                cursor[pos] = lf_ptr[flags[f, pos]]
                continue
            if nu != extra:
                cursor[pos] += 1
                continue
            # a full choice of layer faces: assemble its m - i equations
            row = 0
            for p in range(r):
                g = cursor[p]
                row = _add_face_rows(pts, v2, face_idx, face_ptr[g], face_ptr[g + 1], M, rhs, row, -1)
            base = row
            for s in range(nS1):
                row = base
                t0 = s1faces[s, 0]
                for q in range(1, w1):
                    t = s1faces[s, q]
                    for c in range(m):
                        M[row, c] = pts[t, c] - pts[t0, c]
                    rhs[row] = v1[t0] - v1[t]
                    row += 1
                den = _det(M, m)
                if den == 0:
                    continue
                for j in range(m):
                    for a in range(m):
                        for b in range(m):
                            Mj[a, b] = M[a, b]
                        Mj[a, j] = rhs[a]
                    W[j] = _det(Mj, m)
                if den < 0:
                    den = -den
                    for j in range(m):
                        W[j] = -W[j]
                # x side: argmax of a.W + den*v1 must be exactly S1
                for j in range(N):
                    acc = den * v1[j]
                    for c in range(m):
                        acc += pts[j, c] * W[c]
                    X[j] = acc
                    inS1[j] = False
                for q in range(w1):
                    inS1[s1faces[s, q]] = True
                xmax = X[s1faces[s, 0]]
                bad = False
                tie = False
                for j in range(N):
                    if not inS1[j]:
                        if X[j] > xmax:
                            bad = True
                            break
                        if X[j] == xmax:
                            tie = True
                if bad:
                    continue
                # y side: per-layer argmin of a.W - den*v2 must be exactly T_l
                for j in range(N):
                    acc = -den * v2[j]
                    for c in range(m):
                        acc += pts[j, c] * W[c]
                    G[j] = acc
                    inT[j] = False
                for p in range(r):
                    g = cursor[p]
                    for q in range(face_ptr[g], face_ptr[g + 1]):
                        inT[face_idx[q]] = True
                for p in range(r):
                    L = flags[f, p]
                    g = cursor[p]
                    mv = G[face_idx[face_ptr[g]]]
                    mval[p] = mv
                    for q in range(lay_ptr[L], lay_ptr[L + 1]):
                        j = lay_idx[q]
                        if not inT[j]:
                            if G[j] < mv:
                                bad = True
                                break
                            if G[j] == mv:
                                tie = True
                        Y[j] = G[j] - mv
                    if bad:
                        break
                    if not comp_start[p]:
                        if mval[p - 1] > mv:
                            bad = True
                            break
                        if mval[p - 1] == mv:
                            tie = True
                if bad:
                    continue
                if tie:
                    return NONGENERIC
                # the point must sit inside maximal cones of both uniform fans
                for j in range(N):
                    for j2 in range(j + 1, N):
                        if not inS1[j] and not inS1[j2] and X[j] == X[j2]:
                            return NONGENERIC
                        if live[j] and live[j2] and not inT[j] and not inT[j2] and Y[j] == Y[j2]:
                            return NONGENERIC
                if count >= cap:
                    return cap + 1
                out[count, 0] = f
                out[count, 1] = s
                for p in range(r):
                    out[count, 2 + p] = cursor[p]
                count += 1
            cursor[pos] += 1
    return count
