"""Compiled inner loops for the fast samplers.

All kernels use thinning: candidates are proposed with an upper bound
``qb`` on the true edge probability via geometric skipping and accepted
with probability ``p / qb``. Weight bands supply the upper weight used in
``qb``; each band's ``top`` is at least the largest weight in the band.
"""

import math

import numpy as np
from numba import njit

LONG_RANGE = 1  # p = 1 - exp(-lam * wx * wy / r**alpha)
BALL = 2  # p = 1{min(wx, wy) >= r}


@njit(cache=True)
def _rate(lam, alpha, wx, wy, r):
    # exponent z with p = 1 - exp(-z)
    if r <= 0.0:
        return math.inf
    if alpha == 2.0:
        return lam * wx * wy / (r * r)
    return lam * wx * wy * r ** (-alpha)


@njit(cache=True)
def _prob(code, lam, alpha, wx, wy, r):
    if code == BALL:
        return 1.0 if min(wx, wy) >= r else 0.0
    return -math.expm1(-_rate(lam, alpha, wx, wy, r))


@njit(cache=True)
def _neglog1m(code, lam, alpha, wx, wy, r):
    # -log(1 - qb) for the bound qb; inf when qb = 1
    if code == BALL:
        return math.inf if min(wx, wy) >= r else 0.0
    return _rate(lam, alpha, wx, wy, r)


@njit(cache=True)
def _skip_rate(rng, z):
    """Failures before the next success in Bernoulli(1 - e^-z) trials, as a float."""
    if z == math.inf:
        return 0.0
    return math.floor(rng.standard_exponential() / z)


@njit(cache=True)
def _skip(rng, q):
    # failures before the next success in Bernoulli(q) trials, as a float
    if q >= 1.0:
        return 0.0
    u = 1.0 - rng.random()
    return math.floor(math.log(u) / math.log1p(-q))


@njit(cache=True)
def _grow(a, n):
    b = np.empty(max(64, 2 * a.shape[0]), a.dtype)
    b[:n] = a[:n]
    return b


@njit(cache=True)
def walk_1d(pos, w, band_flat, band_off, band_top, w0, w1, lam, alpha, code, rng, record):
    """Window degrees for points sorted by position on a line.

    Window vertices occupy the index range [w0, w1). Pairs inside the window
    are sampled from their left endpoint only; the left walk only visits
    points left of the window.
    """
    deg = np.zeros(w1 - w0, np.int64)
    ea = np.empty(64 if record else 0, np.int64)
    eb = np.empty(64 if record else 0, np.int64)
    ne = 0
    nb = band_off.shape[0] - 1
    # band-ordered copies keep the walks on contiguous memory
    bpos = pos[band_flat]
    bw = w[band_flat]
    # ptr[j]: first member of band j right of the current x; left[j]: last member left of w0
    ptr = np.empty(nb, np.int64)
    left = np.empty(nb, np.int64)
    for j in range(nb):
        lo = band_off[j]
        hi = band_off[j + 1]
        left[j] = lo + np.searchsorted(band_flat[lo:hi], w0, side="left") - 1
        ptr[j] = left[j] + 1
    for x in range(w0, w1):
        wx = w[x]
        px = pos[x]
        for j in range(nb):
            lo = band_off[j]
            hi = band_off[j + 1]
            if hi == lo:
                continue
            top = band_top[j]
            # right of x
            while ptr[j] < hi and band_flat[ptr[j]] <= x:
                ptr[j] += 1
            k = ptr[j]
            while k < hi:
                r = bpos[k] - px
                zb = _neglog1m(code, lam, alpha, wx, top, r)
                if zb <= 0.0:
                    break
                if zb < math.inf:
                    s = _skip_rate(rng, zb)
                    if s >= hi - k:
                        break
                    k += int(s)
                    r = bpos[k] - px
                qb = 1.0 if zb == math.inf else -math.expm1(-zb)
                p = _prob(code, lam, alpha, wx, bw[k], r)
                if p > 0.0 and (p >= qb or rng.random() * qb < p):
                    y = band_flat[k]
                    deg[x - w0] += 1
                    if y < w1:
                        deg[y - w0] += 1
                    if record:
                        if ne == ea.shape[0]:
                            ea = _grow(ea, ne)
                            eb = _grow(eb, ne)
                        ea[ne] = x
                        eb[ne] = y
                        ne += 1
                k += 1
            # left of the window
            k = left[j]
            while k >= lo:
                r = px - bpos[k]
                zb = _neglog1m(code, lam, alpha, wx, top, r)
                if zb <= 0.0:
                    break
                if zb < math.inf:
                    s = _skip_rate(rng, zb)
                    if s > k - lo:
                        break
                    k -= int(s)
                    r = px - bpos[k]
                qb = 1.0 if zb == math.inf else -math.expm1(-zb)
                p = _prob(code, lam, alpha, wx, bw[k], r)
                if p > 0.0 and (p >= qb or rng.random() * qb < p):
                    deg[x - w0] += 1
                    if record:
                        if ne == ea.shape[0]:
                            ea = _grow(ea, ne)
                            eb = _grow(eb, ne)
                        ea[ne] = x
                        eb[ne] = band_flat[k]
                        ne += 1
                k -= 1
    return deg, ea[:ne], eb[:ne]


@njit(cache=True)
def morton_encode(cell, bits):
    d = cell.shape[0]
    code = 0
    for b in range(bits):
        for k in range(d):
            code |= ((cell[k] >> b) & 1) << (b * d + k)
    return code


@njit(cache=True)
def morton_encode_many(cells, bits):
    out = np.empty(cells.shape[0], np.int64)
    for i in range(cells.shape[0]):
        out[i] = morton_encode(cells[i], bits)
    return out


@njit(cache=True)
def _visit_cell(
    x, xl, cell, level, coords, w, band_flat, band_off, band_top, band_code, all_flat, all_code,
    local, lam, alpha, code, rng, bits, deg, ea, eb, ne, record,
):
    d = coords.shape[1]
    h = float(1 << level)
    d2 = 0.0
    for k in range(d):
        lo_edge = cell[k] * h
        g = max(0.0, lo_edge - coords[x, k], coords[x, k] - (lo_edge + h))
        d2 += g * g
    dmin = math.sqrt(d2)
    wx = w[x]
    m = morton_encode(cell, bits)
    c_lo = m << (d * level)
    c_hi = (m + 1) << (d * level)
    nb = band_off.shape[0] - 1
    a = np.searchsorted(all_code, c_lo, side="left")
    b = np.searchsorted(all_code, c_hi, side="left")
    if b - a <= 2 * nb:
        # few points: test each one directly
        for k in range(a, b):
            y = all_flat[k]
            if y == x:
                continue
            ly = local[y]
            if ly >= 0 and ly < xl:
                continue
            r2 = 0.0
            for t in range(d):
                diff = coords[y, t] - coords[x, t]
                r2 += diff * diff
            p = _prob(code, lam, alpha, wx, w[y], math.sqrt(r2))
            if p >= 1.0 or (p > 0.0 and rng.random() < p):
                deg[xl] += 1
                if ly >= 0:
                    deg[ly] += 1
                if record:
                    if ne == ea.shape[0]:
                        ea = _grow(ea, ne)
                        eb = _grow(eb, ne)
                    ea[ne] = x
                    eb[ne] = y
                    ne += 1
        return ea, eb, ne
    for j in range(nb):
        lo = band_off[j]
        hi = band_off[j + 1]
        if hi == lo:
            continue
        zb = _neglog1m(code, lam, alpha, wx, band_top[j], dmin)
        if zb <= 0.0:
            continue
        qb = 1.0 if zb == math.inf else -math.expm1(-zb)
        a = lo + np.searchsorted(band_code[lo:hi], c_lo, side="left")
        b = lo + np.searchsorted(band_code[lo:hi], c_hi, side="left")
        k = a
        while k < b:
            if qb < 1.0:
                s = _skip_rate(rng, zb)
                if s >= b - k:
                    break
                k += int(s)
            y = band_flat[k]
            k += 1
            if y == x:
                continue
            ly = local[y]
            if ly >= 0 and ly < xl:
                continue  # decided from y's side
            r2 = 0.0
            for t in range(d):
                diff = coords[y, t] - coords[x, t]
                r2 += diff * diff
            p = _prob(code, lam, alpha, wx, w[y], math.sqrt(r2))
            if p > 0.0 and (p >= qb or rng.random() * qb < p):
                deg[xl] += 1
                if ly >= 0:
                    deg[ly] += 1
                if record:
                    if ne == ea.shape[0]:
                        ea = _grow(ea, ne)
                        eb = _grow(eb, ne)
                    ea[ne] = x
                    eb[ne] = y
                    ne += 1
    return ea, eb, ne


@njit(cache=True)
def cells_nd(
    coords, cell0, w, band_flat, band_off, band_top, band_code, all_flat, all_code, window,
    local, lam, alpha, code, levels, bits, near_off, child_off, rng, record,
):
    """Window degrees in dimension d >= 2 via a hierarchical cell decomposition.

    Every pair (x, y) is visited exactly once: either y lies in one of the
    3^d unit cells around x, or at the unique level where y's cell is not a
    neighbour of x's cell but the parent cells are neighbours. Cells holding
    few points are scanned directly through ``all_flat`` (all points in
    Morton order) instead of band by band.
    """
    d = coords.shape[1]
    nwin = window.shape[0]
    deg = np.zeros(nwin, np.int64)
    ea = np.empty(64 if record else 0, np.int64)
    eb = np.empty(64 if record else 0, np.int64)
    ne = 0
    cell = np.empty(d, np.int64)
    for xl in range(nwin):
        x = window[xl]
        wx = w[x]
        for e in range(near_off.shape[0]):
            ok = True
            for k in range(d):
                cell[k] = cell0[x, k] + near_off[e, k]
                if cell[k] < 0:
                    ok = False
            if not ok:
                continue
            ea, eb, ne = _visit_cell(
                x, xl, cell, 0, coords, w, band_flat, band_off, band_top, band_code,
                all_flat, all_code, local, lam, alpha, code, rng, bits, deg, ea, eb, ne, record,
            )
        for lev in range(1, levels + 1):
            child_level = lev - 1
            if code == BALL and float(1 << child_level) > wx:
                break
            for e in range(near_off.shape[0]):
                ok = True
                for k in range(d):
                    if (cell0[x, k] >> lev) + near_off[e, k] < 0:
                        ok = False
                if not ok:
                    continue
                for f in range(child_off.shape[0]):
                    far = False
                    for k in range(d):
                        cell[k] = 2 * ((cell0[x, k] >> lev) + near_off[e, k]) + child_off[f, k]
                        if abs(cell[k] - (cell0[x, k] >> child_level)) > 1:
                            far = True
                    if not far:
                        continue
                    ea, eb, ne = _visit_cell(
                        x, xl, cell, child_level, coords, w, band_flat, band_off, band_top,
                        band_code, all_flat, all_code, local, lam, alpha, code, rng, bits,
                        deg, ea, eb, ne, record,
                    )
    return deg, ea[:ne], eb[:ne]


@njit(cache=True)
def chung_lu_pairs(w, band_flat, band_off, band_top, total, rng):
    """All pairs x <= y joined in a Chung-Lu graph, self-loops included."""
    cap = 1024
    ea = np.empty(cap, np.int64)
    eb = np.empty(cap, np.int64)
    ne = 0
    nb = band_off.shape[0] - 1
    for i in range(nb):
        ni = band_off[i + 1] - band_off[i]
        if ni == 0:
            continue
        for j in range(i, nb):
            nj = band_off[j + 1] - band_off[j]
            if nj == 0:
                continue
            qb = min(band_top[i] * band_top[j] / total, 1.0)
            npairs = ni * (ni + 1) // 2 if i == j else ni * nj
            k = 0
            while k < npairs:
                if qb < 1.0:
                    s = _skip(rng, qb)
                    if s >= npairs - k:
                        break
                    k += int(s)
                if i == j:
                    b = int((math.sqrt(8.0 * k + 1.0) - 1.0) / 2.0)
                    while b * (b + 1) // 2 > k:
                        b -= 1
                    while (b + 1) * (b + 2) // 2 <= k:
                        b += 1
                    a = k - b * (b + 1) // 2
                    x = band_flat[band_off[i] + a]
                    y = band_flat[band_off[i] + b]
                else:
                    x = band_flat[band_off[i] + k // nj]
                    y = band_flat[band_off[j] + k % nj]
                k += 1
                p = min(w[x] * w[y] / total, 1.0)
                if p >= qb or rng.random() * qb < p:
                    if ne == ea.shape[0]:
                        ea = _grow(ea, ne)
                        eb = _grow(eb, ne)
                    ea[ne] = min(x, y)
                    eb[ne] = max(x, y)
                    ne += 1
    return ea[:ne], eb[:ne]


@njit(cache=True)
def poisson_from_tail(t, mu):
    """Smallest k with P(J > k) <= t for J ~ Poisson(mu).

    This is the inverse CDF evaluated at U = 1 - t, computed from the upper
    tail so that small means keep full precision.
    """
    if mu <= 0.0:
        return 0
    sf = -math.expm1(-mu)
    k = 0
    logmu = math.log(mu)
    while sf > t:
        k += 1
        sf -= math.exp(-mu + k * logmu - math.lgamma(k + 1.0))
        if sf <= 0.0:
            break
    return k


@njit(cache=True)
def poisson_from_tail_many(t, mu):
    out = np.empty(t.shape[0], np.int64)
    for i in range(t.shape[0]):
        out[i] = poisson_from_tail(t[i], mu[i])
    return out


@njit(cache=True)
def counting_order(band, nb):
    """Stable ordering of indices by band (a counting sort)."""
    off = np.zeros(nb + 1, np.int64)
    for i in range(band.shape[0]):
        off[band[i] + 1] += 1
    for j in range(nb):
        off[j + 1] += off[j]
    pos = off[:-1].copy()
    out = np.empty(band.shape[0], np.int64)
    for i in range(band.shape[0]):
        b = band[i]
        out[pos[b]] = i
        pos[b] += 1
    return out
