"""Barycentric embedding of queries over a triangulated support set.

The embedding space translates all data so the training centroid sits at
the origin, wraps the support triangulation in a sphere of radius R, and
maps any query x inside the ball to a sparse vector of convex weights:

* x inside the hull: the barycentric coordinates of its containing
  simplex, scattered to the support indices of that simplex.
* x outside the hull: x is joined with its radial projection w = R x/|x|
  onto the sphere.  Among the boundary facets visible from x, the one
  whose virtual simplex (w, facet vertices) contains x supplies the
  coordinates; the weight on w is reported separately as sphere_mass and
  owns no support index.

Entries smaller than 1e-9 in magnitude are zeroed and the rest
renormalized, so exact vertex queries come back as clean indicators.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidMargin,
    NoContainingVirtualSimplex,
    NoVisibleFacet,
    OutsideBall,
    ZeroNorm,
)
from .geometry import (
    TAU,
    Barycentric,
    PointCloud,
    build_delaunay,
    clamp_coords,
    locate,
)

# Relaxed feasibility slack for the virtual-simplex fallback pass.
TAU_FALLBACK = 1e-6


@dataclass
class EmbeddingSpace:
    """Frozen geometric context shared by training and inference.

    centroid : mean of the full training set, in raw coordinates.
    radius   : bounding sphere radius (max translated norm plus margin).
    support  : translated support points; rows are support indices.
    tri      : Delaunay triangulation of the support points.
    """

    dim: int
    centroid: np.ndarray
    radius: float
    support: PointCloud
    tri: object


@dataclass
class SparseXi:
    """Sparse embedding of one query.

    indices     : support indices with nonzero weight, ascending.
    values      : matching weights, each positive.
    sphere_mass : weight on the sphere projection point, 0 inside the hull.
    sphere_point: the projection w when sphere_mass may be nonzero.
    facet_used  : ids of the boundary facet of the virtual simplex.
    """

    indices: np.ndarray
    values: np.ndarray
    sphere_mass: float = 0.0
    sphere_point: np.ndarray = None
    facet_used: tuple = None

    @property
    def entries(self):
        return list(zip(self.indices.tolist(), self.values.tolist()))

    def to_dense(self, m):
        dense = np.zeros(m)
        dense[self.indices] = self.values
        return dense


def fit_space(train_points, support_indices, radius_margin=1.0):
    """Build the embedding space for a training set and support subset.

    The centroid and radius come from the full training set; the support
    rows, translated to centroid-at-origin, get triangulated.  Warns when
    the origin falls outside the support hull, which makes every radial
    projection leave the hull on the opposite side.
    """
    if radius_margin <= 0.0:
        raise InvalidMargin("radius margin must be positive, got %g" % radius_margin)
    pts = train_points.points if isinstance(train_points, PointCloud) else None
    if pts is None:
        pts = PointCloud(np.asarray(train_points)).points
    support_indices = np.asarray(support_indices, dtype=np.int64)
    if support_indices.ndim != 1 or support_indices.size == 0:
        raise ValueError("support_indices must be a nonempty 1-d sequence")
    if np.unique(support_indices).size != support_indices.size:
        raise ValueError("support_indices contains duplicates")
    if support_indices.min() < 0 or support_indices.max() >= pts.shape[0]:
        raise ValueError("support index out of range")

    centroid = pts.mean(axis=0)
    translated = pts - centroid
    radius = float(np.linalg.norm(translated, axis=1).max() + radius_margin)
    support = PointCloud(translated[support_indices])
    tri = build_delaunay(support)
    if locate(tri, np.zeros(pts.shape[1])) is None:
        warnings.warn(
            "training centroid lies outside the support hull; "
            "sphere projections will be one-sided",
            stacklevel=2,
        )
    return EmbeddingSpace(
        dim=pts.shape[1],
        centroid=centroid,
        radius=radius,
        support=support,
        tri=tri,
    )


def project_to_sphere(space, x):
    """Radial projection of a translated point onto the bounding sphere."""
    x = np.asarray(x, dtype=np.float64)
    norm = float(np.linalg.norm(x))
    if norm < 1e-12:
        raise ZeroNorm("cannot project a point with norm %g onto the sphere" % norm)
    return space.radius * x / norm


def _facet_distance(x, facet_points, normal, offset):
    """Euclidean distance from x to a hull facet.

    Exact when the hyperplane projection lands inside the facet, otherwise
    the nearest facet vertex stands in.  Used only by the final fallback.
    """
    signed = float(normal @ x + offset)
    proj = x - signed * normal
    verts = facet_points
    diffs = (verts[1:] - verts[0]).T
    coeff, *_ = np.linalg.lstsq(diffs, proj - verts[0], rcond=None)
    bary = np.concatenate([[1.0 - coeff.sum()], coeff])
    if (bary >= -TAU).all():
        return abs(signed)
    return float(np.linalg.norm(verts - x, axis=1).min())


def _virtual_coords(space, facet, w, x):
    """Raw barycentric coordinates of x in the simplex (w, facet vertices)."""
    pts = space.support.points
    verts = np.vstack([w[None, :], pts[list(facet.facet_ids)]])
    n = verts.shape[1]
    tmat = np.vstack([verts.T, np.ones(n + 1)])
    h = np.append(x, 1.0)
    return np.linalg.solve(tmat, h)


def _xi_outside(space, x):
    """Sphere-augmented embedding for a translated point outside the hull.

    Tries the visible facets first; on numerical failure retries every
    boundary facet with relaxed slack, then falls back to the facet
    nearest to x with clamping.  Ties go to the most interior coordinate
    vector, then to the lowest facet index.
    """
    w = project_to_sphere(space, x)
    try:
        candidates = [f for f in space.tri.boundary if f.side(x) > 0.0]
        if not candidates:
            raise NoVisibleFacet("no visible facet")
    except NoVisibleFacet:
        candidates = []

    best = None
    best_min = -np.inf
    for facet in candidates:
        coords = _virtual_coords(space, facet, w, x)
        low = coords.min()
        if low >= -TAU and low > best_min:
            best, best_min = (facet, coords), low
    if best is None:
        for facet in space.tri.boundary:
            coords = _virtual_coords(space, facet, w, x)
            low = coords.min()
            if low >= -TAU_FALLBACK and low > best_min:
                best, best_min = (facet, coords), low
    if best is None:
        pts = space.support.points
        dists = [
            _facet_distance(x, pts[list(f.facet_ids)], f.normal, f.offset)
            for f in space.tri.boundary
        ]
        facet = space.tri.boundary[int(np.argmin(dists))]
        coords = _virtual_coords(space, facet, w, x)
        coords = np.clip(coords, 0.0, None)
        if coords.sum() <= 0.0:
            raise NoContainingVirtualSimplex(
                "no virtual simplex accepts the exterior point %s" % (x.tolist(),)
            )
        coords = coords / coords.sum()
        best = (facet, coords)

    facet, coords = best
    coords = clamp_coords(coords)
    ids = np.asarray(facet.facet_ids, dtype=np.int64)
    keep = coords[1:] > 0.0
    return SparseXi(
        indices=ids[keep],
        values=coords[1:][keep],
        sphere_mass=float(coords[0]),
        sphere_point=w,
        facet_used=facet.facet_ids,
    )


def _xi_inside(simplex, bary):
    ids = np.asarray(simplex.vertex_ids, dtype=np.int64)
    keep = bary.coords > 0.0
    return SparseXi(indices=ids[keep], values=bary.coords[keep])


def xi(space, x_raw):
    """Sparse embedding of one raw-coordinate query.

    Raises OutsideBall when the translated query leaves the bounding ball.
    """
    x = np.asarray(x_raw, dtype=np.float64) - space.centroid
    if float(np.linalg.norm(x)) > space.radius + TAU:
        raise OutsideBall(
            "query norm %g exceeds ball radius %g"
            % (float(np.linalg.norm(x)), space.radius)
        )
    hit = locate(space.tri, x)
    if hit is not None:
        return _xi_inside(hit[0], hit[1])
    return _xi_outside(space, x)


def xi_batch(space, xs_raw, chunk=512):
    """Embeddings for a batch of raw queries, one SparseXi per row.

    Interior queries are located against all simplices at once; exterior
    rows fall through to the virtual-simplex path.
    """
    xs = np.asarray(xs_raw, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != space.dim:
        raise ValueError("expected queries of shape (Q, %d), got %s" % (space.dim, xs.shape))
    translated = xs - space.centroid
    norms = np.linalg.norm(translated, axis=1)
    outside_ball = np.nonzero(norms > space.radius + TAU)[0]
    if outside_ball.size:
        raise OutsideBall(
            "query %d has norm %g exceeding ball radius %g"
            % (outside_ball[0], norms[outside_ball[0]], space.radius)
        )

    out = [None] * translated.shape[0]
    simplices = space.tri.maximal
    for start in range(0, translated.shape[0], chunk):
        block = translated[start : start + chunk]
        bary = space.tri.barycentric_batch(block)
        feasible = (bary >= -TAU).all(axis=2)
        has_hit = feasible.any(axis=1)
        first = np.argmax(feasible, axis=1)
        for i in range(block.shape[0]):
            if has_hit[i]:
                idx = int(first[i])
                simplex = simplices[idx]
                coords = clamp_coords(bary[i, idx])
                out[start + i] = _xi_inside(simplex, Barycentric(simplex, coords))
            else:
                out[start + i] = _xi_outside(space, block[i])
    return out
