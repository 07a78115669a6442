"""Session-oriented HTTP API binding the engine for the companion UI and
for scripted use. Sessions live in memory; requests within one session are
serialized by a per-session lock."""

from __future__ import annotations

import json
import secrets
import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .dataset import Clustering, Dataset, Embedding, MetaTable, global_pca, load_session
from .mst import (
    GroupSelection,
    WeightedTree,
    build_mst,
    medoid_subtree,
    medoids,
    selection_from_endpoints,
    selection_from_groups,
    simplify_medoid_subtree,
)
from .projection import ProjectionConfig, kde2d, pca_rcca_project
from .separation import mst_test
from .summaries import heatmap_spec, meta_summary


def points_in_polygon(points: np.ndarray, polygon) -> np.ndarray:
    """Even-odd ray casting; returns a boolean mask over the points."""
    poly = np.asarray(polygon, dtype=float)
    if poly.ndim != 2 or poly.shape[1] != 2 or poly.shape[0] < 3:
        raise ValueError("polygon needs at least 3 (x, y) vertices")
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    x1, y1 = poly[-1]
    for x2, y2 in poly:
        straddles = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            cross_x = (x2 - x1) * (y - y1) / (y2 - y1) + x1
        inside ^= straddles & (x < cross_x)
        x1, y1 = x2, y2
    return inside


@dataclass
class Session:
    id: str
    dataset: Dataset  # original features, used for heatmap/meta panels
    working: Dataset  # optionally PCA-reduced matrix backing MST/test/projection
    embedding: Embedding
    clustering: Clustering
    meta: MetaTable | None
    tree: WeightedTree
    medoid_map: dict[str, int]
    medoid_overlay: WeightedTree
    pca_dims: int | None
    files: dict[str, str | None] = field(default_factory=dict)
    selection: GroupSelection | None = None
    projection_config: ProjectionConfig | None = None
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """In-memory session map with optional snapshot to a single JSON file.

    Snapshots record the source file paths plus the transient selection and
    projection state, enough to rebuild every session from its inputs."""

    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(
        self,
        dataset: Dataset,
        embedding: Embedding,
        clustering: Clustering,
        meta: MetaTable | None,
        pca_dims: int | None = None,
        files: dict[str, str | None] | None = None,
        session_id: str | None = None,
    ) -> Session:
        working = dataset
        if pca_dims is not None:
            working, _ = global_pca(dataset, pca_dims)
        tree = build_mst(working)
        medoid_map = medoids(working, clustering)
        overlay = simplify_medoid_subtree(medoid_subtree(tree, medoid_map), medoid_map)
        session = Session(
            id=session_id or secrets.token_hex(8),
            dataset=dataset,
            working=working,
            embedding=embedding,
            clustering=clustering,
            meta=meta,
            tree=tree,
            medoid_map=medoid_map,
            medoid_overlay=overlay,
            pca_dims=pca_dims,
            files=dict(files or {}),
        )
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        return session

    def ids(self) -> list[str]:
        with self._lock:
            return list(self._sessions)

    def snapshot(self, path: str) -> None:
        with self._lock:
            sessions = list(self._sessions.values())
        payload = []
        for session in sessions:
            if not session.files.get("data_path"):
                continue  # not file-backed, nothing to rebuild from
            entry: dict = {
                "session_id": session.id,
                "files": session.files,
                "pca_dims": session.pca_dims,
                "selection": None,
                "projection_config": (
                    session.projection_config.to_payload() if session.projection_config else None
                ),
            }
            if session.selection is not None:
                ids = session.dataset.row_ids
                entry["selection"] = {
                    "group1": [ids[i] for i in sorted(session.selection.group1)],
                    "group2": [ids[i] for i in sorted(session.selection.group2)],
                }
            payload.append(entry)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"sessions": payload}, fh)

    def restore(self, path: str) -> list[str]:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
        restored = []
        for entry in payload.get("sessions", []):
            files = entry["files"]
            dataset, embedding, clustering, meta = load_session(
                files["data_path"], files["embedding_path"], files["labels_path"],
                files.get("meta_path"),
            )
            session = self.create(
                dataset, embedding, clustering, meta,
                pca_dims=entry.get("pca_dims"),
                files=files,
                session_id=entry["session_id"],
            )
            selection = entry.get("selection")
            if selection:
                rows1 = [dataset.index_of(r) for r in selection["group1"]]
                rows2 = [dataset.index_of(r) for r in selection["group2"]]
                session.selection = selection_from_groups(
                    session.tree, session.working, rows1, rows2
                )
            config = entry.get("projection_config")
            if config:
                session.projection_config = ProjectionConfig(
                    pca_dims=config["pca_dims"],
                    degree=config["degree"],
                    lam=config.get("lambda"),
                    bandwidth=config.get("bandwidth"),
                )
            restored.append(session.id)
        return restored


class CreateSessionRequest(BaseModel):
    data_path: str
    embedding_path: str
    labels_path: str
    meta_path: str | None = None
    pca_dims: int | None = None


class PathRequest(BaseModel):
    a: str
    b: str


class GroupsRequest(BaseModel):
    polygons: list[list[list[float]]] | None = None
    rows: list[list[str]] | None = None


class ProjectRequest(BaseModel):
    pca_dims: int
    degree: int = 2
    lam: float | None = Field(default=None, alias="lambda")
    bandwidth: float | None = None
    grid_size: int = 96

    model_config = {"populate_by_name": True}


class TestRequest(BaseModel):
    replicates: int = 100
    seed: int | None = None
    variance_threshold: float = 0.90


def _edge_payload(tree: WeightedTree, row_ids) -> list[list]:
    return [[row_ids[u], row_ids[v], w] for u, v, w in tree.edges]


def _session_payload(session: Session) -> dict:
    return {
        "session_id": session.id,
        "n": session.dataset.n,
        "p": session.dataset.p,
        "pca_dims": session.pca_dims,
        "row_ids": list(session.dataset.row_ids),
        "embedding": session.embedding.coords.tolist(),
        "labels": list(session.clustering.labels),
        "classes": sorted(session.clustering.classes),
        "has_meta": session.meta is not None,
        "medoids": {lab: session.dataset.row_ids[v] for lab, v in session.medoid_map.items()},
        "medoid_subtree": _edge_payload(session.medoid_overlay, session.dataset.row_ids),
    }


def _selection_payload(session: Session) -> dict:
    sel = session.selection
    ids = session.dataset.row_ids
    return {
        "group1": [ids[i] for i in sorted(sel.group1)],
        "group2": [ids[i] for i in sorted(sel.group2)],
        "path": [ids[i] for i in sel.path],
        "path_embedding": [session.embedding.coords[i].tolist() for i in sel.path],
    }


def create_app(store: SessionStore | None = None) -> FastAPI:
    store = store or SessionStore()
    app = FastAPI(title="mstdiag service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    app.state.store = store

    def fail(exc: Exception) -> HTTPException:
        return HTTPException(status_code=400, detail=str(exc))

    @app.get("/sessions")
    def list_sessions():
        return {"sessions": store.ids()}

    @app.post("/session")
    def create_session(req: CreateSessionRequest):
        try:
            dataset, embedding, clustering, meta = load_session(
                req.data_path, req.embedding_path, req.labels_path, req.meta_path
            )
            session = store.create(
                dataset,
                embedding,
                clustering,
                meta,
                req.pca_dims,
                files={
                    "data_path": req.data_path,
                    "embedding_path": req.embedding_path,
                    "labels_path": req.labels_path,
                    "meta_path": req.meta_path,
                },
            )
        except (ValueError, OSError) as exc:
            raise fail(exc) from exc
        return _session_payload(session)

    @app.get("/session/{session_id}")
    def session_info(session_id: str):
        return _session_payload(store.get(session_id))

    @app.post("/session/{session_id}/path")
    def select_path(session_id: str, req: PathRequest):
        session = store.get(session_id)
        with session.lock:
            try:
                a = session.dataset.index_of(req.a)
                b = session.dataset.index_of(req.b)
                session.selection = selection_from_endpoints(
                    session.tree, session.clustering, a, b
                )
            except (KeyError, ValueError) as exc:
                raise fail(exc) from exc
            return _selection_payload(session)

    @app.post("/session/{session_id}/groups")
    def select_groups(session_id: str, req: GroupsRequest):
        session = store.get(session_id)
        with session.lock:
            try:
                if (req.polygons is None) == (req.rows is None):
                    raise ValueError("provide exactly one of 'polygons' or 'rows'")
                if req.polygons is not None:
                    if len(req.polygons) != 2:
                        raise ValueError("need exactly 2 lasso polygons")
                    masks = [
                        points_in_polygon(session.embedding.coords, poly)
                        for poly in req.polygons
                    ]
                    rows1 = np.flatnonzero(masks[0]).tolist()
                    rows2 = np.flatnonzero(masks[1]).tolist()
                else:
                    if len(req.rows) != 2:
                        raise ValueError("need exactly 2 row-id lists")
                    rows1 = [session.dataset.index_of(r) for r in req.rows[0]]
                    rows2 = [session.dataset.index_of(r) for r in req.rows[1]]
                session.selection = selection_from_groups(
                    session.tree, session.working, rows1, rows2
                )
            except (KeyError, ValueError) as exc:
                raise fail(exc) from exc
            return _selection_payload(session)

    def _require_selection(session: Session) -> GroupSelection:
        if session.selection is None:
            raise HTTPException(status_code=400, detail="no group selection in this session")
        return session.selection

    @app.post("/session/{session_id}/project")
    def project(session_id: str, req: ProjectRequest):
        session = store.get(session_id)
        with session.lock:
            sel = _require_selection(session)
            poi = sorted(sel.members | set(sel.path))
            poi_pos = {v: i for i, v in enumerate(poi)}
            values = session.working.values
            config = ProjectionConfig(
                pca_dims=req.pca_dims, degree=req.degree, lam=req.lam, bandwidth=req.bandwidth
            )
            try:
                result = pca_rcca_project(values[poi], values[list(sel.path)], config)
            except ValueError as exc:
                raise fail(exc) from exc
            session.projection_config = config
            ids = session.dataset.row_ids
            groups = [
                1 if v in sel.group1 else 2 if v in sel.group2 else 0 for v in poi
            ]
            mst_edges = [
                [poi_pos[u], poi_pos[v], w]
                for u, v, w in session.tree.edges
                if u in poi_pos and v in poi_pos
            ]
            payload = result.to_payload()
            payload.update(
                {
                    "poi_ids": [ids[v] for v in poi],
                    "poi_groups": groups,
                    "mst_edges": mst_edges,
                }
            )
            if req.bandwidth is not None:
                surface = kde2d(result.coords, req.bandwidth, req.grid_size)
                payload["surface"] = surface.to_payload()
            return payload

    @app.post("/session/{session_id}/test")
    def run_test(session_id: str, req: TestRequest):
        session = store.get(session_id)
        with session.lock:
            sel = _require_selection(session)
            seed = req.seed if req.seed is not None else secrets.randbits(32)
            try:
                result = mst_test(
                    session.working,
                    session.tree,
                    sel,
                    replicates=req.replicates,
                    variance_threshold=req.variance_threshold,
                    seed=seed,
                )
            except ValueError as exc:
                raise fail(exc) from exc
            return result.to_payload()

    @app.get("/session/{session_id}/heatmap")
    def heatmap(session_id: str, rows: str | None = None, features: str | None = None):
        session = store.get(session_id)
        with session.lock:
            sel = _require_selection(session)
            try:
                sub_rows = None
                if rows:
                    sub_rows = [session.dataset.index_of(r) for r in rows.split(",")]
                sub_features = None
                if features:
                    names = {name: j for j, name in enumerate(session.dataset.feature_names)}
                    sub_features = []
                    for f in features.split(","):
                        sub_features.append(names[f] if f in names else int(f))
                spec = heatmap_spec(session.dataset, sel, sub_rows, sub_features)
            except (KeyError, ValueError) as exc:
                raise fail(exc) from exc
            return spec.to_payload(session.dataset.row_ids)

    @app.get("/session/{session_id}/meta")
    def meta(session_id: str):
        session = store.get(session_id)
        with session.lock:
            sel = _require_selection(session)
            if session.meta is None:
                raise HTTPException(status_code=400, detail="session has no metadata")
            return meta_summary(session.meta, sel).to_payload()

    return app
