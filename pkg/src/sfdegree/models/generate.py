"""Point simulation, edge sampling and degree extraction for models I-V."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels as K
from .config import ConfigError, ModelConfig, ScalingConstants, scaling_constants, validate


class MemoryGuardError(RuntimeError):
    """The requested simulation would exceed the configured vertex cap."""


@dataclass
class PointSet:
    """All simulated vertices of one replication.

    ``coords`` is ``(N, d)`` for the spatial models and ``None`` for IV/V.
    ``window`` lists the indices of the window vertices in window order.
    """

    coords: Optional[np.ndarray]
    weights: np.ndarray
    window: np.ndarray
    lattice: bool = False

    @property
    def size(self) -> int:
        return int(self.weights.shape[0])


@dataclass
class EdgeList:
    """Edges with at least one window endpoint; ``u``/``v`` index the point set."""

    u: np.ndarray
    v: np.ndarray
    mult: np.ndarray


@dataclass
class DegreeSample:
    config: ModelConfig
    seed: Optional[int]
    positions: np.ndarray
    weights: np.ndarray
    degrees: np.ndarray
    scaling: ScalingConstants
    simulated: int
    edges: Optional[EdgeList] = None
    points: Optional[PointSet] = field(default=None, repr=False)

    @property
    def size(self) -> int:
        """Realized number of window vertices."""
        return int(self.degrees.shape[0])


# -- windows -----------------------------------------------------------------


def lattice_side(config: ModelConfig) -> int:
    """Smallest m with m**d >= n; the lattice window is the first n sites of {0..m-1}^d."""
    m = max(1, math.ceil(config.side - 1e-9))
    while m**config.d < config.n:
        m += 1
    return m


def _lattice_window(m, d, n):
    return np.stack(np.unravel_index(np.arange(n), (m,) * d), axis=1).astype(np.int64)


def _check_guard(config, count):
    if count > config.max_vertices:
        raise MemoryGuardError(
            f"expected {count:.3g} simulated vertices exceeds the cap of {config.max_vertices}"
        )


def expected_vertex_count(config: ModelConfig) -> float:
    """Expected number of simulated vertices (lower bound for model II)."""
    if not config.spatial:
        return float(config.n)
    if config.kind == "I":
        b = math.ceil(config.effective_buffer)
        return float(lattice_side(config) + 2 * b) ** config.d
    if config.kind == "III":
        return (config.side + 2 * config.effective_buffer) ** config.d
    return float(lattice_side(config)) ** config.d


# -- point simulation ------------------------------------------------------------


def simulate_points(config: ModelConfig, rng: np.random.Generator) -> PointSet:
    """Sample vertex positions and weights for one replication."""
    kind, d = config.kind, config.d
    _check_guard(config, expected_vertex_count(config))
    if kind in ("IV", "V"):
        w = config.weight.sample(rng, config.n)
        return PointSet(None, w, np.arange(config.n))
    if kind == "I":
        return _lattice_box(config, math.ceil(config.effective_buffer), rng)
    if kind == "III":
        s, b = config.side, config.effective_buffer
        count = rng.poisson((s + 2 * b) ** d)
        coords = rng.uniform(-b, s + b, size=(count, d))
        if d == 1:
            coords = np.sort(coords, axis=0)
        w = config.weight.sample(rng, count)
        inside = np.all((coords >= 0) & (coords <= s), axis=1)
        return PointSet(coords, w, np.flatnonzero(inside))
    return _model2_thinned(config, rng)


def _lattice_box(config, b, rng, window_weights=None):
    d, n = config.d, config.n
    m = lattice_side(config)
    side = m + 2 * b
    shape = (side,) * d
    total = side**d
    _check_guard(config, total)
    if d == 1:
        coords = np.arange(-b, side - b, dtype=float).reshape(-1, 1)
    else:
        coords = np.stack(np.unravel_index(np.arange(total), shape), axis=1).astype(float) - b
    win_cells = _lattice_window(m, d, n) + b
    window = np.ravel_multi_index(tuple(win_cells.T), shape).astype(np.int64)
    w = config.weight.sample(rng, total)
    if window_weights is not None:
        w[window] = window_weights
    return PointSet(coords, w, window, lattice=True)


def _model2_naive(config, rng, record):
    """Model II on the full lattice box enlarged by the largest window weight.

    Every site of the box gets a weight; each window vertex then scans the
    sites within sup-distance W_x. No site beyond that can attach.
    """
    d, n = config.d, config.n
    m = lattice_side(config)
    wwin = config.weight.sample(rng, n)
    b = int(math.floor(wwin.max()))
    side = m + 2 * b
    _check_guard(config, float(side) ** d)
    grid = config.weight.sample(rng, side**d).reshape((side,) * d)
    win = _lattice_window(m, d, n)
    grid[tuple((win + b).T)] = wwin
    local = np.full(grid.shape, -1, np.int64)
    local[tuple((win + b).T)] = np.arange(n)
    deg = np.zeros(n, np.int64)
    found = []
    for i in range(n):
        x = win[i] + b
        reach = int(math.floor(wwin[i]))
        lo = np.maximum(x - reach, 0)
        hi = x + reach + 1
        box = tuple(slice(l, h) for l, h in zip(lo, hi))
        sub = grid[box]
        offs = np.stack(np.indices(sub.shape), axis=-1) + lo - x
        r = np.sqrt((offs**2).sum(axis=-1))
        hit = np.minimum(wwin[i], sub) >= r
        lsub = local[box]
        hit &= (lsub < 0) | (lsub > i)  # excludes x itself too
        deg[i] += hit.sum()
        np.add.at(deg, lsub[hit & (lsub >= 0)], 1)
        if record:
            found.append((i, np.argwhere(hit) + lo - b))
    coords = [win]
    u, v = [], []
    k = n
    for i, ys in found:
        coords.append(ys)
        u.append(np.full(ys.shape[0], i, np.int64))
        v.append(np.arange(k, k + ys.shape[0]))
        k += ys.shape[0]
    c = np.concatenate(coords).astype(float)
    w = np.empty(c.shape[0])
    w[:n] = wwin
    if k > n:
        w[n:] = grid[tuple((c[n:].astype(np.int64) + b).T)]
    pts = PointSet(c, w, np.arange(n), lattice=True)
    e = np.empty(0, np.int64)
    edges = (np.concatenate(u), np.concatenate(v)) if u else (e, e)
    return pts, deg, edges


def _shell_radii(limit):
    radii = [1]
    while radii[-1] <= limit:
        r = radii[-1]
        radii.append(max(r + 1, int(math.floor(1.25 * r))))
    return radii


def _shell_boxes(m, d, a, b):
    """Boxes partitioning the sites at sup-distance in (a, b] from [0, m-1]^d."""
    inner = (-a, m - 1 + a)
    outer = (-b, m - 1 + b)
    out = []
    for i in range(d):
        for piece in ((-b, -a - 1), (m + a, m - 1 + b)):
            out.append([inner] * i + [piece] + [outer] * (d - i - 1))
    return out


def _model2_thinned(config, rng):
    """Window, the rest of its bounding cube, and every outside site that can attach.

    A site at sup-distance r from the cube can only connect to the window if
    its weight is at least r, so sites are kept with probability S(r_k) at
    the inner radius r_k of their shell and then given a weight drawn from
    the law conditioned on W >= r_k.
    """
    d, n, dist = config.d, config.n, config.weight
    m = lattice_side(config)
    cube = m**d
    w_cube = dist.sample(rng, cube)
    coords = [np.stack(np.unravel_index(np.arange(cube), (m,) * d), axis=1)]
    weights = [w_cube]
    limit = int(math.floor(w_cube[:n].max()))
    radii = _shell_radii(limit)
    plan = []
    expected = float(cube)
    for r_lo, r_next in zip(radii[:-1], radii[1:]):
        if r_lo > limit:
            break
        keep = float(dist.survival(r_lo))
        for box in _shell_boxes(m, d, r_lo - 1, min(r_next - 1, limit)):
            size = math.prod(hi - lo + 1 for lo, hi in box)
            plan.append((r_lo, keep, box, size))
            expected += size * keep
    _check_guard(config, expected)
    for r_lo, keep, box, size in plan:
        count = int(rng.binomial(size, min(keep, 1.0)))
        if count == 0:
            continue
        flat = rng.choice(size, size=count, replace=False) if count < size else np.arange(size)
        shape = tuple(hi - lo + 1 for lo, hi in box)
        offs = np.array([lo for lo, _ in box], dtype=np.int64)
        coords.append(np.stack(np.unravel_index(flat, shape), axis=1) + offs)
        weights.append(dist.sample_tail(float(r_lo), rng, count))
    c = np.concatenate(coords).astype(float)
    w = np.concatenate(weights)
    window = np.arange(n)
    if d == 1:
        order = np.argsort(c[:, 0], kind="stable")
        c, w = c[order], w[order]
        window = np.flatnonzero((c[:, 0] >= 0) & (c[:, 0] <= n - 1))
    return PointSet(c, w, window, lattice=True)


# -- edge sampling --------------------------------------------------------------


def _bands(w):
    base = w.min()
    band = np.floor(np.log2(w / base)).astype(np.int64)
    np.clip(band, 0, None, out=band)
    nb = int(band.max()) + 1
    off = np.zeros(nb + 1, np.int64)
    off[1:] = np.cumsum(np.bincount(band, minlength=nb))
    top = base * 2.0 ** np.arange(1, nb + 1)
    np.maximum.at(top, band, w)
    return band, off, top


_OFFSETS = {}


def _offsets(d):
    if d not in _OFFSETS:
        near = np.array(list(itertools.product((-1, 0, 1), repeat=d)), dtype=np.int64)
        child = np.array(list(itertools.product((0, 1), repeat=d)), dtype=np.int64)
        _OFFSETS[d] = (near, child)
    return _OFFSETS[d]


def _kernel_args(config):
    if config.kind == "II":
        return K.BALL, 1.0, 1.0
    return K.LONG_RANGE, float(config.lam), float(config.alpha)


def _fast_spatial(config, pts, rng, record):
    code, lam, alpha = _kernel_args(config)
    w = pts.weights
    nwin = pts.window.shape[0]
    if nwin == 0:
        e = np.empty(0, np.int64)
        return np.zeros(0, np.int64), e, e
    band, off, top = _bands(w)
    if config.d == 1:
        w0, w1 = int(pts.window[0]), int(pts.window[-1]) + 1
        if w1 - w0 != nwin:
            raise AssertionError("window must be contiguous in one dimension")
        band_flat = K.counting_order(band, off.shape[0] - 1)
        return K.walk_1d(
            np.ascontiguousarray(pts.coords[:, 0]), w, band_flat, off, top, w0, w1,
            lam, alpha, code, rng, record,
        )
    shift = np.floor(pts.coords.min(axis=0))
    rel = pts.coords - shift
    cell0 = np.floor(rel).astype(np.int64)
    bits = max(1, int(cell0.max()).bit_length())
    if bits * config.d > 62:
        raise MemoryGuardError("simulation box too large for cell codes")
    morton = K.morton_encode_many(cell0, bits)
    band_flat = np.lexsort((morton, band)).astype(np.int64)
    all_flat = np.argsort(morton, kind="stable").astype(np.int64)
    local = np.full(w.shape[0], -1, np.int64)
    local[pts.window] = np.arange(nwin)
    near, child = _offsets(config.d)
    return K.cells_nd(
        np.ascontiguousarray(rel), cell0, w, band_flat, off, top, morton[band_flat],
        all_flat, morton[all_flat], pts.window.astype(np.int64), local, lam, alpha, code, bits, bits, near, child, rng, record,
    )


def _naive_spatial(config, pts, rng, record):
    """Every (window, simulated) pair gets its own uniform."""
    c, w, win = pts.coords, pts.weights, pts.window
    n_all, nwin = w.shape[0], win.shape[0]
    local = np.full(n_all, -1, np.int64)
    local[win] = np.arange(nwin)
    deg = np.zeros(nwin, np.int64)
    eu, ev = [], []
    rows = max(1, 2_000_000 // max(n_all, 1))
    for i0 in range(0, nwin, rows):
        xs = win[i0 : i0 + rows]
        r = np.sqrt(((c[None, :, :] - c[xs][:, None, :]) ** 2).sum(axis=2))
        wx = w[xs][:, None]
        if config.kind == "II":
            p = (np.minimum(wx, w[None, :]) >= r).astype(float)
        else:
            with np.errstate(divide="ignore"):
                p = -np.expm1(-config.lam * wx * w[None, :] * r ** (-config.alpha))
        hit = rng.random(p.shape) < p
        li = np.arange(i0, i0 + xs.shape[0])[:, None]
        hit &= (local[None, :] < 0) | (local[None, :] > li)
        deg[i0 : i0 + xs.shape[0]] += hit.sum(axis=1)
        deg += hit[:, win].sum(axis=0)
        if record:
            a, b = np.nonzero(hit)
            eu.append(xs[a])
            ev.append(b)
    if record and eu:
        return deg, np.concatenate(eu).astype(np.int64), np.concatenate(ev).astype(np.int64)
    e = np.empty(0, np.int64)
    return deg, e, e


def _norros_reittu_fast(w, rng):
    """Poisson(L/2) ordered draws proportional to weight plus extra self-loops.

    An unordered pair x != y then receives Poisson(w_x w_y / L) edges and a
    vertex receives Poisson(w_x^2/(2L)) + Poisson(w_x^2/(2L)) self-loops.
    """
    n = w.shape[0]
    total = w.sum()
    m = rng.poisson(total / 2.0)
    ends = rng.choice(n, size=(m, 2), p=w / total)
    extra = rng.poisson(w * w / (2.0 * total))
    a = np.minimum(ends[:, 0], ends[:, 1])
    b = np.maximum(ends[:, 0], ends[:, 1])
    loops = np.nonzero(extra)[0]
    a = np.concatenate([a, np.repeat(loops, extra[loops])]).astype(np.int64)
    b = np.concatenate([b, np.repeat(loops, extra[loops])]).astype(np.int64)
    return a, b


def _norros_reittu_naive(w, rng):
    n = w.shape[0]
    total = w.sum()
    ea, eb, em = [], [], []
    for x in range(n):
        mult = rng.poisson(w[x] * w[x:] / total)
        nz = np.nonzero(mult)[0]
        ea.append(np.full(nz.shape[0], x, np.int64))
        eb.append(nz + x)
        em.append(mult[nz])
    return np.concatenate(ea), np.concatenate(eb), np.concatenate(em)


def _chung_lu_fast(w, rng):
    band, off, top = _bands(w)
    band_flat = K.counting_order(band, off.shape[0] - 1)
    return K.chung_lu_pairs(w, band_flat, off, top, float(w.sum()), rng)


def _chung_lu_naive(w, rng):
    n = w.shape[0]
    total = w.sum()
    ea, eb = [], []
    for x in range(n):
        p = np.minimum(w[x] * w[x:] / total, 1.0)
        nz = np.nonzero(rng.random(p.shape[0]) < p)[0]
        ea.append(np.full(nz.shape[0], x, np.int64))
        eb.append(nz + x)
    return np.concatenate(ea), np.concatenate(eb)


def _aggregate(a, b, n):
    """Collapse repeated pairs into (u, v, multiplicity)."""
    key = a * n + b
    uniq, counts = np.unique(key, return_counts=True)
    return uniq // n, uniq % n, counts.astype(np.int64)


def _multigraph_degrees(a, b, mult, n):
    # a self-loop adds one to the degree of its vertex
    deg = np.bincount(a, weights=mult, minlength=n)
    deg += np.bincount(b, weights=np.where(a == b, 0, mult), minlength=n)
    return deg.astype(np.int64)


def sample_edges(config: ModelConfig, pts: PointSet, rng: np.random.Generator, record=False):
    """Sample edges on a fixed point set.

    Returns window degrees (in window order) and, when ``record`` is true, an
    :class:`EdgeList` indexing ``pts``; otherwise ``None``.
    """
    naive = config.mode == "naive"
    if config.spatial:
        fn = _naive_spatial if naive else _fast_spatial
        deg, a, b = fn(config, pts, rng, record)
        edges = EdgeList(a, b, np.ones(a.shape[0], np.int64)) if record else None
        return np.asarray(deg, np.int64), edges
    w = pts.weights
    n = w.shape[0]
    if config.kind == "IV":
        if naive:
            a, b, mult = _norros_reittu_naive(w, rng)
        else:
            a, b, mult = _aggregate(*_norros_reittu_fast(w, rng), n)
    else:
        a, b = _chung_lu_naive(w, rng) if naive else _chung_lu_fast(w, rng)
        mult = np.ones(a.shape[0], np.int64)
    deg = _multigraph_degrees(a, b, mult, n)
    return deg, (EdgeList(a, b, mult) if record else None)


def generate(
    config: ModelConfig,
    seed: Optional[int],
    *,
    record_edges: bool = False,
    weights=None,
    keep_points: bool = False,
) -> DegreeSample:
    """One replication of ``config`` driven by ``seed``.

    ``weights`` fixes the vertex weights of models IV and V (length ``n``).
    """
    report = validate(config)
    report.raise_for_violations()
    scaling = scaling_constants(config)
    rng = np.random.default_rng(seed)
    if weights is not None:
        if config.spatial:
            raise ConfigError("fixed weights are only supported for models IV and V")
        w = np.asarray(weights, dtype=float)
        if w.shape != (config.n,) or np.any(w <= 0):
            raise ConfigError(f"weights must be {config.n} positive values")
        pts = PointSet(None, w, np.arange(config.n))
        deg, edges = sample_edges(config, pts, rng, record_edges)
    elif config.kind == "II" and config.mode == "naive":
        pts, deg, (a, b) = _model2_naive(config, rng, record_edges)
        edges = EdgeList(a, b, np.ones(a.shape[0], np.int64)) if record_edges else None
    else:
        pts = simulate_points(config, rng)
        deg, edges = sample_edges(config, pts, rng, record_edges)
    if config.spatial:
        positions = pts.coords[pts.window]
        if pts.lattice:
            positions = positions.astype(np.int64)
    else:
        positions = np.arange(1, config.n + 1)
    return DegreeSample(
        config=config,
        seed=seed,
        positions=positions,
        weights=pts.weights[pts.window],
        degrees=deg,
        scaling=scaling,
        simulated=pts.size,
        edges=edges,
        points=pts if (keep_points or record_edges) else None,
    )


# -- edge-list export -------------------------------------------------------------


def _label(pts, idx, lattice):
    if pts.coords is None:
        return str(int(idx) + 1)
    row = pts.coords[idx]
    if lattice:
        return ",".join(str(int(v)) for v in row)
    return ",".join(repr(float(v)) for v in row)


def write_edge_list(sample: DegreeSample, path) -> int:
    """Write ``u v multiplicity`` lines after a ``#`` header; returns the edge count."""
    if sample.edges is None or sample.points is None:
        raise ValueError("sample was generated without record_edges=True")
    pts, e = sample.points, sample.edges
    echo = " ".join(f"{k}={v}" for k, v in sample.config.echo().items())
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# {echo} seed={sample.seed}\n")
        fh.write("# u v multiplicity\n")
        for a, b, m in zip(e.u, e.v, e.mult):
            fh.write(f"{_label(pts, a, pts.lattice)} {_label(pts, b, pts.lattice)} {int(m)}\n")
    return int(e.u.shape[0])
