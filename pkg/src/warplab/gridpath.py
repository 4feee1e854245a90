"""Shortest-path oracle on a grid graph, independent of the Clairaut path.

The rectangle [r_lo, r_hi] x [v_lo, v_hi] is discretized to an 8-connected
grid whose edge weights are the local metric quadratic form at the edge
midpoint, sqrt(dr^2 + h(r_mid)^2 dv^2); Dijkstra (scipy.sparse.csgraph)
then gives a genuine path upper bound for the distance.

Raw grid paths overestimate: discretization contributes O(step) and the
eight fixed directions contribute an anisotropy excess that does not
vanish with the step (up to ~8% for segments at worst angles).  The oracle
therefore reports three numbers:

    raw       - grid distance at the fine resolution
    refined   - two-resolution Richardson extrapolation (kills the O(step))
    relaxed   - exact metric length of the extracted node path after
                descending the discrete length functional over node
                positions (still an admissible path, so still an upper
                bound; the zigzag excess is gone)

plus the measured anisotropy factor raw/relaxed.  Comparisons at the few
percent level must use `relaxed`; `raw` certifies the global route.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra as _csgraph_dijkstra


class ResourceLimit(RuntimeError):
    """Grid size beyond the edge budget."""


@dataclass
class DijkstraResult:
    raw: float
    refined: float
    relaxed: float
    error_estimate: float
    anisotropy_factor: float
    nodes: int

    @property
    def best(self):
        return self.relaxed


def _grid_distance(h_value, p1, p2, r_lo, r_hi, v_lo, v_hi, nr, nv, edge_budget):
    """One Dijkstra solve; returns (distance, path array of (r, v))."""
    n_nodes = nr * nv
    if 8 * n_nodes > edge_budget:
        raise ResourceLimit(f"{8 * n_nodes} edges exceed budget {edge_budget}")
    rs = np.linspace(r_lo, r_hi, nr)
    vs = np.linspace(v_lo, v_hi, nv)
    dr = rs[1] - rs[0]
    dv = vs[1] - vs[0]

    def node(ir, iv):
        return ir * nv + iv

    IR, IV = np.meshgrid(np.arange(nr), np.arange(nv), indexing="ij")

    def add_block(dir_, div_):
        a_ir = IR[max(0, -dir_) : nr - max(0, dir_), max(0, -div_) : nv - max(0, div_)]
        a_iv = IV[max(0, -dir_) : nr - max(0, dir_), max(0, -div_) : nv - max(0, div_)]
        b_ir = a_ir + dir_
        b_iv = a_iv + div_
        r_mid = 0.5 * (rs[a_ir] + rs[b_ir])
        hm = h_value(r_mid)
        w = np.sqrt((rs[b_ir] - rs[a_ir]) ** 2 + (hm * (vs[b_iv] - vs[a_iv])) ** 2)
        rows.append((a_ir * nv + a_iv).ravel())
        cols.append((b_ir * nv + b_iv).ravel())
        data.append(w.ravel())

    rows, cols, data = [], [], []
    for dir_, div_ in ((1, 0), (0, 1), (1, 1), (1, -1)):
        add_block(dir_, div_)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    data = np.concatenate(data)
    graph = coo_matrix((data, (rows, cols)), shape=(n_nodes, n_nodes)).tocsr()

    def nearest(p):
        i = int(round((p[0] - r_lo) / dr)) if dr > 0 else 0
        j = int(round((p[1] - v_lo) / dv)) if dv > 0 else 0
        return node(min(max(i, 0), nr - 1), min(max(j, 0), nv - 1))

    src = nearest(p1)
    dst = nearest(p2)
    dist, pred = _csgraph_dijkstra(
        graph, directed=False, indices=src, return_predecessors=True
    )
    d = float(dist[dst])
    if not math.isfinite(d):
        raise RuntimeError("target unreachable on grid")
    path = []
    k = dst
    while k != src and k >= 0:
        path.append(k)
        k = int(pred[k])
    path.append(src)
    path.reverse()
    pts = np.array([(rs[k // nv], vs[k % nv]) for k in path])
    return d, pts


_GAUSS3_X = np.array([0.5 - math.sqrt(3.0 / 20.0), 0.5, 0.5 + math.sqrt(3.0 / 20.0)])
_GAUSS3_W = np.array([5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0])


def _polyline_length(h_value, pts):
    """Exact-metric length of a coordinate polyline (3-point Gauss per segment)."""
    if len(pts) < 2:
        return 0.0
    a = pts[:-1]
    b = pts[1:]
    dr = b[:, 0] - a[:, 0]
    dv = b[:, 1] - a[:, 1]
    total = np.zeros(len(a))
    for x, w in zip(_GAUSS3_X, _GAUSS3_W):
        rm = a[:, 0] + x * dr
        hm = h_value(rm)
        total += w * np.sqrt(dr**2 + (hm * dv) ** 2)
    return float(np.sum(total))


def _energy_and_grad(h_and_slope, pts, r_floor=0.0):
    """Sum of squared segment lengths and its gradient over node positions.

    Minimizers of sum L_i^2 at fixed endpoints are constant-speed discrete
    geodesics (Cauchy-Schwarz: the length is minimized simultaneously and
    the reparametrization null space of the plain length is removed).
    Segment lengths use 3-point Gauss of sqrt(dr^2 + h(r)^2 dv^2); the
    gradient is metric-aware through h h' at the quadrature nodes.
    """
    a, b = pts[:-1], pts[1:]
    dr = b[:, 0] - a[:, 0]
    dv = b[:, 1] - a[:, 1]
    seg_len = np.zeros(len(a))
    gA = np.zeros_like(a)
    gB = np.zeros_like(b)
    for x, w in zip(_GAUSS3_X, _GAUSS3_W):
        rq = np.maximum(a[:, 0] + x * dr, r_floor)
        h, hp = h_and_slope(rq)
        s = np.maximum(np.sqrt(dr**2 + (h * dv) ** 2), 1e-300)
        seg_len += w * s
        hhp_dv2 = h * hp * dv * dv
        gA[:, 0] += w * (-dr + hhp_dv2 * (1.0 - x)) / s
        gB[:, 0] += w * (dr + hhp_dv2 * x) / s
        gA[:, 1] += w * (-(h * h) * dv) / s
        gB[:, 1] += w * ((h * h) * dv) / s
    E = float(np.sum(seg_len**2))
    grad = np.zeros_like(pts)
    grad[:-1] += 2.0 * seg_len[:, None] * gA
    grad[1:] += 2.0 * seg_len[:, None] * gB
    grad[0] = 0.0
    grad[-1] = 0.0
    return E, grad


def _laplacian_solve(b):
    """Solve T x = b with T = tridiag(-1, 2, -1) (Dirichlet chain)."""
    n = len(b)
    ab = np.zeros((2, n))
    ab[0, 1:] = -1.0
    ab[1, :] = 2.0
    from scipy.linalg import solveh_banded

    return solveh_banded(ab, b)


def _relax_path(h_and_slope, pts, iters=400, n_nodes=640, r_floor=0.0):
    """Relax the extracted grid path by preconditioned descent of the
    squared-length energy (endpoints pinned).

    The energy Hessian over a node chain is Laplacian-like (conditioning
    ~n^2; plain descent stalls), so the descent direction is the gradient
    put through a chain-Laplacian solve, with the v-coordinate additionally
    weighted by the local 1/h^2 -- a semi-implicit curve-shortening step
    that converges in tens of iterations at any resolution.  The result
    stays an admissible path, hence a rigorous upper bound.
    """
    if len(pts) < 3:
        return pts.astype(float)
    pts = _resample(pts.astype(float), n=min(n_nodes, max(len(pts), 4)))
    E, g = _energy_and_grad(h_and_slope, pts, r_floor)
    n = len(pts)
    for _ in range(iters):
        h_nodes, _ = h_and_slope(np.maximum(pts[:, 0], r_floor))
        d = np.zeros_like(pts)
        gi = g[1:-1]
        d[1:-1, 0] = _laplacian_solve(gi[:, 0])
        d[1:-1, 1] = _laplacian_solve(gi[:, 1] / h_nodes[1:-1] ** 2)
        step = 0.5  # Hessian ~ 2 T x (metric weight): this is the Newton step
        improved = False
        for _ in range(25):
            prop = pts - step * d
            prop[:, 0] = np.maximum(prop[:, 0], r_floor)
            E2, g2 = _energy_and_grad(h_and_slope, prop, r_floor)
            if E2 < E:
                pts, E, g = prop, E2, g2
                improved = True
                break
            step *= 0.4
        if not improved:
            break
    return pts


def _resample(pts, n=None):
    """Even re-parametrization by coordinate chord length."""
    n = n or len(pts)
    seg = np.sqrt(np.sum(np.diff(pts, axis=0) ** 2, axis=1))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    if s[-1] == 0:
        return pts
    t = np.linspace(0.0, s[-1], n)
    out = np.empty((n, 2))
    out[:, 0] = np.interp(t, s, pts[:, 0])
    out[:, 1] = np.interp(t, s, pts[:, 1])
    out[0] = pts[0]
    out[-1] = pts[-1]
    return out


def dijkstra_distance_oracle(
    m,
    p1,
    p2,
    r_hi: float,
    nr: int = 260,
    nv: int | None = None,
    r_lo: float = 0.0,
    edge_budget: int = 100_000_000,
    relax_sweeps: int = 600,
) -> DijkstraResult:
    """Grid shortest-path estimate of d(p1, p2) on the halfplane metric m.

    Runs at (nr, nv) and (2nr, 2nv) node resolutions, Richardson-combines
    the two, then relaxes the fine path to scrub the anisotropy excess.
    nv defaults to keeping grid cells roughly metric-square at mid-radius.
    """
    hv = np.vectorize(m.value)

    v_lo = min(p1[1], p2[1])
    v_hi = max(p1[1], p2[1])
    if v_hi - v_lo <= 0:
        v_hi = v_lo + max(1e-6, abs(r_hi - r_lo) * 1e-3)
    if nv is None:
        h_mid = float(m.value(0.5 * (r_lo + r_hi)))
        aspect = (v_hi - v_lo) * max(h_mid, 1e-12) / max(r_hi - r_lo, 1e-12)
        nv = int(min(max(nr * aspect, nr), 14 * nr))

    d1, _ = _grid_distance(hv, p1, p2, r_lo, r_hi, v_lo, v_hi, nr, nv, edge_budget)
    d2, path2 = _grid_distance(
        hv, p1, p2, r_lo, r_hi, v_lo, v_hi, 2 * nr - 1, 2 * nv - 1, edge_budget
    )
    refined = 2.0 * d2 - d1

    def h_and_slope(rq):
        rq = np.atleast_1d(rq)
        h = np.empty_like(rq)
        hp = np.empty_like(rq)
        for i, r in enumerate(rq):
            j = m.jet(float(max(r, 0.0)))
            h[i] = j.value
            hp[i] = j.d1
        return h, hp

    relaxed_path = _relax_path(h_and_slope, path2, iters=relax_sweeps, r_floor=max(r_lo, m.domain_start))
    relaxed = _polyline_length(hv, relaxed_path)
    return DijkstraResult(
        raw=d2,
        refined=refined,
        relaxed=relaxed,
        error_estimate=abs(d2 - d1),
        anisotropy_factor=d2 / relaxed if relaxed > 0 else float("nan"),
        nodes=(2 * nr - 1) * (2 * nv - 1),
    )
