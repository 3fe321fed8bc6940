"""Model persistence as a single self-describing JSON document.

The file stores everything inference needs: label names, centroid,
radius, the translated support points with labels, the triangulation
(maximal simplices plus oriented boundary facets) and the weight matrix.
Floats go through json's repr-based encoder, which round-trips doubles
exactly, so a reloaded model reproduces forward outputs bit for bit.
"""

import json

import numpy as np

from .embedding import EmbeddingSpace
from .geometry import BoundaryFacet, PointCloud, Simplex, Triangulation
from .model import LabelEncoding, SmnnModel

SCHEMA_VERSION = 1


def model_to_dict(model, provenance=None):
    space = model.space
    return {
        "schema_version": SCHEMA_VERSION,
        "dim": space.dim,
        "n_classes": model.encoding.k,
        "labels": list(model.encoding.labels),
        "centroid": space.centroid.tolist(),
        "radius": space.radius,
        "support_points": space.support.points.tolist(),
        "support_labels": model.support_labels.tolist(),
        "simplices": [list(s.vertex_ids) for s in space.tri.maximal],
        "boundary_facets": [
            {
                "facet_ids": list(f.facet_ids),
                "opposite_id": f.opposite_id,
                "normal": f.normal.tolist(),
                "offset": f.offset,
            }
            for f in space.tri.boundary
        ],
        "weights": model.weights.tolist(),
        "provenance": dict(provenance) if provenance else {},
    }


def save_model(model, path, provenance=None):
    with open(path, "w") as fh:
        json.dump(model_to_dict(model, provenance), fh, indent=1)
        fh.write("\n")


def model_from_dict(doc):
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise ValueError(
            "unsupported model schema version %r, expected %d" % (version, SCHEMA_VERSION)
        )
    dim = int(doc["dim"])
    support = PointCloud(np.array(doc["support_points"], dtype=np.float64))
    if support.dim != dim:
        raise ValueError("support points have dimension %d, expected %d" % (support.dim, dim))

    boundary = [
        BoundaryFacet(
            facet_ids=tuple(int(i) for i in f["facet_ids"]),
            opposite_id=int(f["opposite_id"]),
            normal=np.array(f["normal"], dtype=np.float64),
            offset=float(f["offset"]),
        )
        for f in doc["boundary_facets"]
    ]
    tri = Triangulation(
        cloud=support,
        maximal=[Simplex(tuple(int(i) for i in s)) for s in doc["simplices"]],
        boundary=boundary,
    )
    space = EmbeddingSpace(
        dim=dim,
        centroid=np.array(doc["centroid"], dtype=np.float64),
        radius=float(doc["radius"]),
        support=support,
        tri=tri,
    )
    model = SmnnModel(
        space=space,
        encoding=LabelEncoding(tuple(doc["labels"])),
        weights=np.array(doc["weights"], dtype=np.float64),
        support_labels=np.array(doc["support_labels"], dtype=np.int64),
    )
    return model, doc.get("provenance", {})


def load_model(path):
    with open(path) as fh:
        doc = json.load(fh)
    return model_from_dict(doc)
