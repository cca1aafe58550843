"""Compiled contraction kernels for MPS expectation values and gradients.

Layout: an MPS with ``n`` sites lives in one flat complex vector ``z``; site
``i`` occupies ``z[off[i]:off[i+1]]`` as a C-ordered ``(dl[i], 2, dr[i])``
tensor. Pauli strings are int8 codes (0=I, 1=X, 2=Y, 3=Z); every operator
acts as ``(O psi)[s] = phase[o, s] * psi[perm[o, s]]``.

Environment conventions: a left environment ``L[a, b]`` pairs the bra index
``a`` with the ket index ``b``; right environments ``R[c, d]`` likewise.
Every environment at bond ``b`` is divided by the same positive factor so
long chains neither overflow nor underflow; quotients are unaffected.

Terms are handled as open channels: term ``k`` differs from the plain norm
environment only between its first and last non-identity sites, so the cost
is proportional to the summed term spans rather than ``K * n``.
"""

import numpy as np
from numba import njit

PERM = np.array([[0, 1], [1, 0], [1, 0], [0, 1]], dtype=np.int64)
PHASE = np.array([[1, 1], [1, 1], [-1j, 1j], [1, -1]], dtype=np.complex128)


@njit(cache=True, nogil=True)
def _left(L, z, o, dl, dr, op, out):
    # out[c, d] = sum conj(A[a,s,c]) L[a,b] O[s,t] A[b,t,d]
    X = np.zeros((dl, 2, dr), dtype=np.complex128)
    for a in range(dl):
        for b in range(dl):
            lab = L[a, b]
            if lab == 0:
                continue
            for s in range(2):
                t = PERM[op, s]
                f = lab * PHASE[op, s]
                base = o + (b * 2 + t) * dr
                for d in range(dr):
                    X[a, s, d] += f * z[base + d]
    for c in range(dr):
        for d in range(dr):
            acc = 0j
            for a in range(dl):
                for s in range(2):
                    acc += np.conj(z[o + (a * 2 + s) * dr + c]) * X[a, s, d]
            out[c, d] = acc


@njit(cache=True, nogil=True)
def _right(R, z, o, dl, dr, op, out):
    # out[a, b] = sum conj(A[a,s,c]) O[s,t] A[b,t,d] R[c,d]
    Y = np.zeros((dl, 2, dr), dtype=np.complex128)  # Y[b, t, c] = sum_d A[b,t,d] R[c,d]
    for b in range(dl):
        for t in range(2):
            base = o + (b * 2 + t) * dr
            for c in range(dr):
                acc = 0j
                for d in range(dr):
                    acc += z[base + d] * R[c, d]
                Y[b, t, c] = acc
    for a in range(dl):
        for b in range(dl):
            acc = 0j
            for s in range(2):
                t = PERM[op, s]
                ph = PHASE[op, s]
                for c in range(dr):
                    acc += np.conj(z[o + (a * 2 + s) * dr + c]) * ph * Y[b, t, c]
            out[a, b] = acc


@njit(cache=True, nogil=True)
def _apply(L, R, z, o, dl, dr, op, coeff, g):
    # g[a,s,c] += coeff * sum L[a,b] O[s,t] A[b,t,d] R[c,d]
    Y = np.zeros((dl, 2, dr), dtype=np.complex128)
    for b in range(dl):
        for t in range(2):
            base = o + (b * 2 + t) * dr
            for c in range(dr):
                acc = 0j
                for d in range(dr):
                    acc += z[base + d] * R[c, d]
                Y[b, t, c] = acc
    for a in range(dl):
        for b in range(dl):
            lab = L[a, b] * coeff
            if lab == 0:
                continue
            for s in range(2):
                f = lab * PHASE[op, s]
                t = PERM[op, s]
                gb = o + (a * 2 + s) * dr
                for c in range(dr):
                    g[gb + c] += f * Y[b, t, c]


@njit(cache=True, nogil=True)
def _dot(L, R, dim):
    # sum_{a,b} L[a,b] R[a,b]
    acc = 0j
    for a in range(dim):
        for b in range(dim):
            acc += L[a, b] * R[a, b]
    return acc


@njit(cache=True, nogil=True)
def _frob(M, dim):
    acc = 0.0
    for a in range(dim):
        for b in range(dim):
            acc += M[a, b].real ** 2 + M[a, b].imag ** 2
    return np.sqrt(acc)


@njit(cache=True, nogil=True)
def norm_envs(z, off, dl, dr, D):
    n = dl.shape[0]
    L0 = np.zeros((n + 1, D, D), dtype=np.complex128)
    R0 = np.zeros((n + 1, D, D), dtype=np.complex128)
    sl = np.ones(n + 1)
    sr = np.ones(n + 1)
    L0[0, 0, 0] = 1.0
    R0[n, 0, 0] = 1.0
    for i in range(n):
        _left(L0[i], z, off[i], dl[i], dr[i], 0, L0[i + 1])
        s = _frob(L0[i + 1], dr[i])
        if s == 0.0:
            s = 1.0
        sl[i + 1] = s
        L0[i + 1] /= s
    for i in range(n - 1, -1, -1):
        _right(R0[i + 1], z, off[i], dl[i], dr[i], 0, R0[i])
        s = _frob(R0[i], dl[i])
        if s == 0.0:
            s = 1.0
        sr[i] = s
        R0[i] /= s
    return L0, R0, sl, sr


@njit(cache=True, nogil=True)
def term_values(z, off, dl, dr, D, first, last, codes):
    """<P_k> / <psi|psi> for each Pauli string k (first > last marks the identity)."""
    K = first.shape[0]
    L0, R0, sl, sr = norm_envs(z, off, dl, dr, D)
    out = np.zeros(K, dtype=np.complex128)
    cur = np.zeros((D, D), dtype=np.complex128)
    nxt = np.zeros((D, D), dtype=np.complex128)
    for k in range(K):
        f, l = first[k], last[k]
        if f > l:
            out[k] = 1.0
            continue
        cur[:, :] = L0[f]
        for i in range(f, l + 1):
            nxt[:, :] = 0
            _left(cur, z, off[i], dl[i], dr[i], codes[k, i], nxt)
            cur[:, :] = nxt / sl[i + 1]
        b = l + 1
        out[k] = _dot(cur, R0[b], dl[b] if b < dl.shape[0] else 1) / _dot(
            L0[b], R0[b], dl[b] if b < dl.shape[0] else 1
        )
    return out


@njit(cache=True, nogil=True)
def value_and_grad(z, off, dl, dr, D, first, last, codes, coeffs, constant):
    """Rayleigh quotient <psi|H|psi>/<psi|psi> and d/d conj(z) of it.

    H = constant + sum_k coeffs[k] P_k with every P_k a non-identity string.
    """
    n = dl.shape[0]
    K = first.shape[0]
    L0, R0, sl, sr = norm_envs(z, off, dl, dr, D)

    span = np.zeros(K + 1, dtype=np.int64)
    for k in range(K):
        span[k + 1] = span[k] + (last[k] - first[k])
    Lo = np.zeros((span[K] + 1, D, D), dtype=np.complex128)  # Lo[span[k] + b - first - 1] at bond b
    Ro = np.zeros((span[K] + 1, D, D), dtype=np.complex128)
    CL = np.zeros((n + 1, D, D), dtype=np.complex128)  # terms closing at site i, left side, bond i+1
    CR = np.zeros((n + 1, D, D), dtype=np.complex128)  # terms opening at site i, right side, bond i
    tmp = np.zeros((D, D), dtype=np.complex128)

    for k in range(K):
        f, l = first[k], last[k]
        src = L0[f]
        for i in range(f, l + 1):
            tmp[:, :] = 0
            _left(src, z, off[i], dl[i], dr[i], codes[k, i], tmp)
            if i < l:
                j = span[k] + i - f
                Lo[j] = tmp / sl[i + 1]
                src = Lo[j]
            else:
                CL[i + 1] += coeffs[k] * tmp / sl[i + 1]
        src = R0[l + 1]
        for i in range(l, f - 1, -1):
            tmp[:, :] = 0
            _right(src, z, off[i], dl[i], dr[i], codes[k, i], tmp)
            if i > f:
                j = span[k] + i - f - 1
                Ro[j] = tmp / sr[i]
                src = Ro[j]
            else:
                CR[i] += coeffs[k] * tmp / sr[i]

    HL = np.zeros((n + 1, D, D), dtype=np.complex128)
    HR = np.zeros((n + 1, D, D), dtype=np.complex128)
    for i in range(n):
        tmp[:, :] = 0
        _left(HL[i], z, off[i], dl[i], dr[i], 0, tmp)
        HL[i + 1] = tmp / sl[i + 1] + CL[i + 1]
    for i in range(n - 1, -1, -1):
        tmp[:, :] = 0
        _right(HR[i + 1], z, off[i], dl[i], dr[i], 0, tmp)
        HR[i] = tmp / sr[i] + CR[i]

    num = HL[n, 0, 0]
    den = L0[n, 0, 0]
    value = (num / den).real

    gh = np.zeros(z.shape[0], dtype=np.complex128)
    gn = np.zeros(z.shape[0], dtype=np.complex128)
    for i in range(n):
        _apply(L0[i], HR[i + 1], z, off[i], dl[i], dr[i], 0, 1.0, gh)
        _apply(HL[i], R0[i + 1], z, off[i], dl[i], dr[i], 0, 1.0, gh)
        _apply(L0[i], R0[i + 1], z, off[i], dl[i], dr[i], 0, 1.0, gn)
    for k in range(K):
        f, l = first[k], last[k]
        for i in range(f, l + 1):
            Lk = L0[i] if i == f else Lo[span[k] + i - f - 1]
            Rk = R0[i + 1] if i == l else Ro[span[k] + i - f]
            _apply(Lk, Rk, z, off[i], dl[i], dr[i], codes[k, i], coeffs[k], gh)

    grad = np.zeros(z.shape[0], dtype=np.complex128)
    for i in range(n):
        o0, o1 = off[i], off[i + 1]
        dloc = 0j
        for p in range(o0, o1):
            dloc += np.conj(z[p]) * gn[p]
        dr_ = dloc.real
        for p in range(o0, o1):
            grad[p] = (gh[p] - value * gn[p]) / dr_
    return value + constant, grad
