"""HTTP/JSON facade over the pipeline for the planning UI.

Single-session service: one dataset and one trained model snapshot at a
time, optionally persisted to a state directory. Reads run against an
immutable snapshot; uploads and training swap the snapshot atomically.
Results are value-identical to the CLI for identical inputs because both
call the same pipeline functions.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from swphm import pipeline
from swphm.errors import (
    CalibrationRangeError,
    EnumerationCapError,
    NotTrainedError,
    SwphmError,
    ValidationError,
)
from swphm.ingest import env_to_record, item_to_record, release_to_record
from swphm.model import BacklogItem, Dataset, EnvironmentSpec, ReleaseRecord
from swphm.prognosis import (
    DEFAULT_CLOCK_COEFFICIENT,
    DEFAULT_THRESHOLD_MS,
    EnvAdjustment,
    apply_env,
)
from swphm.regression import predict_rt


@dataclass
class Session:
    """One immutable snapshot of uploaded data and trained models."""

    dataset: Dataset | None = None
    trained: pipeline.TrainedModels | None = None

    def require_dataset(self) -> Dataset:
        if self.dataset is None:
            raise ValidationError("no dataset uploaded", code="no-dataset")
        return self.dataset

    def require_trained(self) -> pipeline.TrainedModels:
        if self.trained is None:
            raise NotTrainedError("model not trained")
        return self.trained


def _parse_items(records: list) -> dict[str, BacklogItem]:
    items: dict[str, BacklogItem] = {}
    for i, record in enumerate(records):
        if not isinstance(record, dict) or not record.get("id"):
            raise ValidationError(f"backlog record {i + 1}: missing id", code="malformed-record")
        item = BacklogItem(
            id=str(record["id"]),
            title=str(record.get("title", "")),
            description=str(record.get("description", "")),
            kind=str(record.get("kind", "fault")),
            severity=record.get("severity"),
            story_points=record.get("story_points"),
            sign=int(record.get("sign", 1)),
        )
        if item.id in items:
            raise ValidationError(f"duplicate id {item.id!r}", code="duplicate-id")
        items[item.id] = item
    return items


def _parse_releases(records: list) -> tuple[ReleaseRecord, ...]:
    releases = []
    for i, record in enumerate(records):
        if not isinstance(record, dict) or "version" not in record:
            raise ValidationError(f"release record {i + 1}: missing version", code="malformed-record")
        releases.append(
            ReleaseRecord(
                version=str(record["version"]),
                items=tuple(record.get("items", [])),
                env=EnvironmentSpec(**record.get("env", {})),
                rt_runs_ms=tuple(record.get("rt_runs_ms", [])),
            )
        )
    from swphm.model import version_key

    releases.sort(key=lambda r: version_key(r.version))
    return tuple(releases)


def _env_from(record: dict | None, default: EnvironmentSpec | None = None) -> EnvironmentSpec:
    record = record or {}
    base = default or EnvironmentSpec()
    try:
        return EnvironmentSpec(
            os_bits=int(record.get("os_bits", base.os_bits)),
            clock_ghz=float(record.get("clock_ghz", base.clock_ghz)),
            ram_gb=float(record.get("ram_gb", base.ram_gb)),
            disk_gb=float(record.get("disk_gb", base.disk_gb)),
        )
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad environment: {exc}", code="invalid-env") from exc


def _adjustment(payload: dict) -> EnvAdjustment:
    return EnvAdjustment(
        clock_coefficient=float(payload.get("coefficient") or DEFAULT_CLOCK_COEFFICIENT),
        os_factor_32_over_64=(
            float(payload["os_factor"]) if payload.get("os_factor") is not None else None
        ),
    )


def _threshold_ms(payload: dict) -> float:
    threshold_s = payload.get("threshold_s")
    if threshold_s is None:
        return DEFAULT_THRESHOLD_MS
    threshold_s = float(threshold_s)
    if threshold_s <= 0:
        raise ValidationError("threshold_s must be positive", code="invalid-threshold")
    return threshold_s * 1000.0


def create_app(state_dir: str | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="swphm planning service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    state_path = Path(state_dir) if state_dir else None
    write_lock = threading.Lock()
    session = Session()

    if state_path is not None:
        state_path.mkdir(parents=True, exist_ok=True)
        dataset_file = state_path / "dataset.json"
        trained_file = state_path / "trained.json"
        if dataset_file.exists():
            stored = json.loads(dataset_file.read_text(encoding="utf-8"))
            session.dataset = Dataset(
                items=_parse_items(stored["backlog"]),
                releases=_parse_releases(stored["releases"]),
            )
        if trained_file.exists():
            session.trained = pipeline.load_trained(trained_file)

    app.state.session = session

    def _persist_dataset(dataset: Dataset) -> None:
        if state_path is None:
            return
        payload = {
            "backlog": [item_to_record(it) for it in sorted(dataset.items.values(), key=lambda x: x.id)],
            "releases": [release_to_record(r) for r in dataset.releases],
        }
        (state_path / "dataset.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def _persist_trained(trained: pipeline.TrainedModels) -> None:
        if state_path is None:
            return
        pipeline.save_trained(trained, state_path / "trained.json")

    @app.exception_handler(SwphmError)
    async def swphm_error_handler(request, exc: SwphmError):
        status = 400
        if isinstance(exc, NotTrainedError):
            status = 409
        elif isinstance(exc, (CalibrationRangeError, EnumerationCapError)):
            status = 422
        return JSONResponse(status_code=status, content={"error": exc.code, "detail": str(exc)})

    @app.post("/datasets")
    def upload_dataset(payload: dict = Body(...)):
        backlog = payload.get("backlog")
        releases = payload.get("releases")
        if not isinstance(backlog, list) or not isinstance(releases, list):
            raise ValidationError(
                "body must carry 'backlog' and 'releases' arrays", code="malformed-record"
            )
        dataset = Dataset(items=_parse_items(backlog), releases=_parse_releases(releases))
        with write_lock:
            app.state.session = Session(dataset=dataset, trained=None)
            _persist_dataset(dataset)
        return {
            "items": len(dataset.items),
            "releases": len(dataset.releases),
            "measured_releases": len(dataset.measured_releases()),
        }

    @app.get("/datasets")
    def get_dataset():
        session: Session = app.state.session
        dataset = session.require_dataset()
        shipped = {item_id for rel in dataset.releases for item_id in rel.items}
        return {
            "backlog": [
                item_to_record(it)
                for it in sorted(dataset.items.values(), key=lambda x: x.id)
            ],
            "releases": [release_to_record(r) for r in dataset.releases],
            "unshipped": sorted(set(dataset.items) - shipped),
        }

    @app.post("/train")
    def train(payload: dict = Body(default={})):
        current: Session = app.state.session
        dataset = current.require_dataset()
        weighted = pipeline.weigh_dataset(dataset)
        trained = pipeline.train_from_dataset(
            dataset,
            weighted,
            seed=int(payload.get("seed", 42)),
            train_fraction=float(payload.get("train_fraction", 0.8)),
            use_clusters=bool(payload.get("use_clusters", True)),
            k=payload.get("k"),
        )
        with write_lock:
            app.state.session = Session(dataset=dataset, trained=trained)
            _persist_trained(trained)
        return pipeline.trained_to_json(trained)

    @app.get("/model")
    def get_model():
        session: Session = app.state.session
        return pipeline.trained_to_json(session.require_trained())

    @app.post("/predict")
    def predict(payload: dict = Body(...)):
        session: Session = app.state.session
        trained = session.require_trained()
        if "cpv" not in payload:
            raise ValidationError("body must carry 'cpv'", code="missing-field")
        cpv = float(payload["cpv"])
        return {"cpv": cpv, "rt_ms": predict_rt(trained.model, cpv)}

    def _weighted_for(session: Session) -> dict:
        dataset = session.require_dataset()
        return pipeline.weigh_dataset(dataset)

    @app.post("/rul")
    def rul(payload: dict = Body(...)):
        session: Session = app.state.session
        trained = session.require_trained()
        plan_doc = payload.get("plan")
        if not isinstance(plan_doc, dict):
            raise ValidationError("body must carry a 'plan' object", code="malformed-record")
        dataset = session.require_dataset()
        weighted = _weighted_for(session)
        spec, allocation = pipeline.build_plan_spec(plan_doc, weighted, trained.baseline_env)
        if allocation is None:
            raise ValidationError("plan has no 'allocation'", code="missing-allocation")
        result = pipeline.evaluate_allocation(
            trained, dataset.items, weighted, spec, allocation,
            threshold_ms=_threshold_ms(payload), adj=_adjustment(payload),
        )
        return result.rul.to_json()

    @app.post("/plan/evaluate")
    def plan_evaluate(payload: dict = Body(...)):
        session: Session = app.state.session
        trained = session.require_trained()
        allocation = payload.get("allocation")
        if not isinstance(allocation, dict):
            raise ValidationError("body must carry an 'allocation' object", code="malformed-record")
        dataset = session.require_dataset()
        weighted = _weighted_for(session)
        plan_doc = {
            "horizon": payload.get("horizon"),
            "items": sorted(allocation.keys()),
            "allocation": allocation,
            "env_overrides": payload.get("env_overrides"),
            "base_env": payload.get("base_env"),
        }
        spec, alloc = pipeline.build_plan_spec(plan_doc, weighted, trained.baseline_env)
        result = pipeline.evaluate_allocation(
            trained, dataset.items, weighted, spec, alloc,
            threshold_ms=_threshold_ms(payload), adj=_adjustment(payload),
        )
        return result.to_json()

    @app.post("/plan/best")
    def plan_best(payload: dict = Body(...)):
        session: Session = app.state.session
        trained = session.require_trained()
        spec_doc = payload.get("spec")
        if not isinstance(spec_doc, dict):
            raise ValidationError("body must carry a 'spec' object", code="malformed-record")
        dataset = session.require_dataset()
        weighted = _weighted_for(session)
        spec, _ = pipeline.build_plan_spec(spec_doc, weighted, trained.baseline_env)
        result = pipeline.search_best_plan(
            trained, dataset.items, weighted, spec,
            threshold_ms=_threshold_ms(payload), adj=_adjustment(payload),
        )
        return result.to_json()

    @app.post("/adjust")
    def adjust(payload: dict = Body(...)):
        if "rt_ms" not in payload:
            raise ValidationError("body must carry 'rt_ms'", code="missing-field")
        rt_ms = float(payload["rt_ms"])
        baseline = _env_from(payload.get("from"))
        target = _env_from(payload.get("to"), default=baseline)
        return {"rt_ms": apply_env(rt_ms, baseline, target, _adjustment(payload))}

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
