"""HTTP endpoint for clone validation, feedback, retraining, and the queue.

The validate response carries exactly the documented keys
(`prob_false_clone_pair`, `prob_true_clone_pair` under `output`, plus
`log_msg` and `error_msg`), extended with `decision` and `gamma_used`.
Probabilities are emitted at six decimal places.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from starlette.concurrency import run_in_threadpool

from .errors import EmptyFragment, SingleClassTrainingSet, UnknownPair
from .evaluation import k_fold_cross_validate
from .features import extract_features
from .fragments import ClonePair, CodeFragment, Label, SUPPORTED_LANGUAGES
from .models import Prediction, decide, make_classifier
from .store import SOURCE_FEEDBACK, CloneStore

PIPELINE_STAGES = ("Preprocessing clones", "Normalizing codes", "Extracting features", "Predicting")


class ServiceState:
    """Mutable service backing: the store, the served model, one train slot."""

    def __init__(self, store: CloneStore, model=None, default_gamma: float = 0.5):
        self.store = store
        self.models: dict[str, object] = {}
        self.default_model: str | None = None
        self.default_gamma = default_gamma
        self.train_lock = threading.Lock()
        self.last_training: dict | None = None
        if model is not None:
            self.register_model("default", model)

    def register_model(self, name: str, model) -> None:
        # plain dict assignment: swaps are atomic, requests see old or new
        self.models[name] = model
        self.default_model = name

    def resolve_model(self, name: str | None):
        if name is None:
            if self.default_model is None:
                return None
            return self.models.get(self.default_model)
        return self.models.get(name)


def _error_response(status: int, message: str, log: list[str] | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"log_msg": ", ".join(log or []), "error_msg": message},
    )


def _round6(value: float) -> float:
    return round(value, 6)


def _model_wants_extras(model) -> bool:
    names = getattr(model, "feature_names_", None)
    return bool(names) and len(names) > 8


def _predict_pair(model, pair: ClonePair) -> Prediction:
    """Score a pair with whichever model kind is loaded."""
    if hasattr(model, "score"):  # pair-document baseline
        return model.score(pair)
    features = extract_features(pair, include_extras=_model_wants_extras(model))
    return model.predict_one(features.values)


_TRAIN_CONFIG_KEYS = (
    "hidden_layer_sizes",
    "hidden_activation",
    "learning_rate",
    "max_epochs",
    "convergence_tol",
    "dropout",
    "seed",
)


def _run_training(state: "ServiceState", body: dict) -> dict:
    """Assemble, cross-validate, fit, and atomically swap the served model."""
    config = {"model": body.get("model", "nn")}
    for key in _TRAIN_CONFIG_KEYS:
        if key in body:
            config[key] = body[key]
    k = int(body.get("k", 10))
    ts = state.store.assemble_training_set()
    if ts is None:
        raise SingleClassTrainingSet("store has no labeled pairs")
    ts.require_both_classes()
    summary: dict = {"rows": len(ts), "model": config["model"]}
    if k >= 2 and len(ts) >= k:
        report = k_fold_cross_validate(ts, k=k, model_config=config, seed=int(body.get("seed", 0)))
        summary["cv_mean_accuracy"] = _round6(report.mean_accuracy)
        summary["cv_mean_f1"] = _round6(report.means["f1"])
        summary["k"] = k
    model = make_classifier(dict(config))
    model.fit(ts)
    state.register_model(config["model"], model)
    summary["served_model"] = config["model"]
    state.last_training = summary
    return summary


async def _read_json(request: Request) -> dict | None:
    try:
        body = await request.json()
    except json.JSONDecodeError:
        return None
    return body if isinstance(body, dict) else None


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="cloneval validation service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.service = state

    @app.post("/api/validate")
    async def validate(request: Request):
        body = await _read_json(request)
        if body is None:
            return _error_response(400, "malformed JSON body")
        log: list[str] = []
        for field in ("lang", "sourceCode_1", "sourceCode_2"):
            if field not in body:
                return _error_response(400, f"missing field: {field}")
            if not isinstance(body[field], str) or not body[field]:
                return _error_response(400, f"empty field: {field}")
        lang = body["lang"]
        if lang.lower() not in SUPPORTED_LANGUAGES:
            return _error_response(422, f"unsupported language: {lang}")

        model = state.resolve_model(body.get("model"))
        if model is None:
            if body.get("model") is not None:
                return _error_response(422, f"unknown model: {body['model']}")
            return _error_response(503, "no model loaded")

        gamma = body.get("gamma", state.default_gamma)
        if not isinstance(gamma, (int, float)) or not 0.0 <= float(gamma) <= 1.0:
            return _error_response(400, "gamma must be a number in [0, 1]")
        gamma = float(gamma)

        log.append(PIPELINE_STAGES[0])
        pair = ClonePair(
            id="adhoc",
            fragment1=CodeFragment(body["sourceCode_1"], language=lang),
            fragment2=CodeFragment(body["sourceCode_2"], language=lang),
        )
        log.append(PIPELINE_STAGES[1])
        try:
            prediction = _predict_pair(model, pair)
        except EmptyFragment:
            return _error_response(422, "fragment has no comparable content", log)
        log.append(PIPELINE_STAGES[2])
        log.append(PIPELINE_STAGES[3])
        decision = decide(prediction, gamma)

        prob_true = _round6(prediction.prob_true)
        return JSONResponse(
            status_code=200,
            content={
                "output": {
                    "prob_false_clone_pair": _round6(1.0 - prob_true),
                    "prob_true_clone_pair": prob_true,
                },
                "log_msg": ", ".join(log),
                "error_msg": None,
                "decision": decision.value,
                "gamma_used": gamma,
            },
        )

    @app.post("/api/feedback")
    async def feedback(request: Request):
        body = await _read_json(request)
        if body is None:
            return _error_response(400, "malformed JSON body")
        labeler = body.get("labeler")
        if not labeler or not isinstance(labeler, str):
            return _error_response(400, "missing field: labeler")
        try:
            label = Label.parse(str(body.get("label", "")))
        except ValueError:
            return _error_response(400, f"not a valid label: {body.get('label')!r}")
        if label is Label.UNLABELED:
            return _error_response(400, "feedback label must be TP or FP")

        pair_id = body.get("pair_id")
        if pair_id is not None:
            try:
                record = state.store.record_label(pair_id, labeler, label)
                return JSONResponse(
                    {"pair_id": record.pair_id, "label": record.current_label.value,
                     "history_length": len(record.history), "error_msg": None}
                )
            except UnknownPair:
                pass  # fall through to import-then-label
        code1, code2 = body.get("sourceCode_1"), body.get("sourceCode_2")
        if not code1 or not code2:
            return _error_response(400, "unknown pair_id and no inline fragments to import")
        lang = body.get("lang", "Java")
        if lang.lower() not in SUPPORTED_LANGUAGES:
            return _error_response(422, f"unsupported language: {lang}")
        pair = ClonePair(
            id=pair_id or f"fb-{len(state.store):05d}",
            fragment1=CodeFragment(code1, language=lang),
            fragment2=CodeFragment(code2, language=lang),
            detector=body.get("detector"),
        )
        record, _ = state.store.add_pair(pair, source=SOURCE_FEEDBACK)
        record = state.store.record_label(record.pair_id, labeler, label)
        return JSONResponse(
            {"pair_id": record.pair_id, "label": record.current_label.value,
             "history_length": len(record.history), "error_msg": None}
        )

    @app.post("/api/train")
    async def train(request: Request):
        body = await _read_json(request) or {}
        if not state.train_lock.acquire(blocking=False):
            return _error_response(409, "a training job is already running")
        try:
            # the heavy work runs off the event loop so concurrent requests
            # still get served (and can observe the held train slot)
            summary = await run_in_threadpool(_run_training, state, body)
            return JSONResponse({"result": summary, "error_msg": None})
        except SingleClassTrainingSet as exc:
            return _error_response(422, str(exc))
        finally:
            state.train_lock.release()

    @app.get("/api/train/status")
    async def train_status():
        running = state.train_lock.locked()
        return JSONResponse({"running": running, "last": state.last_training})

    @app.get("/api/queue")
    async def queue(page: int = 1, page_size: int = 20):
        page = max(1, page)
        page_size = max(1, min(page_size, 200))
        pending = state.store.unlabeled()
        total = len(pending)
        start = (page - 1) * page_size
        model = state.resolve_model(None)
        items = []
        for record in pending[start : start + page_size]:
            entry = {
                "pair_id": record.pair_id,
                "detector": record.detector,
                "fragment1": {"text": record.fragment1.source_text,
                              "path": record.fragment1.file_path,
                              "start_line": record.fragment1.start_line},
                "fragment2": {"text": record.fragment2.source_text,
                              "path": record.fragment2.file_path,
                              "start_line": record.fragment2.start_line},
                "features": None,
                "prediction": None,
            }
            if model is not None:
                try:
                    if hasattr(model, "score"):
                        prediction = model.score(record.to_pair())
                    else:
                        features = state.store.features_for(
                            record, include_extras=_model_wants_extras(model)
                        )
                        prediction = model.predict_one(features.values)
                        entry["features"] = dict(zip(features.names, features.values))
                    entry["prediction"] = {
                        "prob_true": _round6(prediction.prob_true),
                        "prob_false": _round6(1.0 - _round6(prediction.prob_true)),
                        "decision": decide(prediction, state.default_gamma).value,
                    }
                except EmptyFragment:
                    pass
            items.append(entry)
        return JSONResponse(
            {
                "items": items,
                "page": page,
                "page_size": page_size,
                "total": total,
                "total_pages": (total + page_size - 1) // page_size if total else 0,
                "gamma_default": state.default_gamma,
            }
        )

    @app.get("/api/model")
    async def model_info():
        model = state.resolve_model(None)
        if model is None:
            return JSONResponse({"loaded": False, "kind": None})
        return JSONResponse(
            {
                "loaded": True,
                "kind": getattr(model, "kind", type(model).__name__),
                "feature_names": list(getattr(model, "feature_names_", ()) or ()),
                "gamma_default": state.default_gamma,
                "epochs_trained": getattr(model, "epochs_trained_", None),
            }
        )

    return app


def build_service(
    store_path: str | Path,
    model_path: str | Path | None = None,
    default_gamma: float = 0.5,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    """Wire a service from filesystem paths (store file, model document)."""
    from .models import load_model_file

    store = CloneStore(store_path)
    model = load_model_file(model_path) if model_path else None
    state = ServiceState(store, model, default_gamma)
    app = create_app(state)
    if ui_dir and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")
    return app
