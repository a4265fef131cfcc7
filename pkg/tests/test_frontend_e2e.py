"""Drives the built labeling UI against a live service instance.

Spawns `cloneval serve` on a free port, runs the frontend's live e2e spec
(which renders the real UI and talks to the real API), then verifies the
label history landed in the store. Skipped unless the frontend has been
installed (`npm install` in frontend/).
"""

import os
import socket
import subprocess
import sys
import time
from pathlib import Path

import pytest

from cloneval.fragments import ClonePair, CodeFragment, Label
from cloneval.models import NeuralNetClassifier, save_model
from cloneval.mutation import generate_benchmark, synthesize_corpus
from cloneval.store import CloneStore

REPO_ROOT = Path(__file__).resolve().parent.parent
FRONTEND = REPO_ROOT / "frontend"

pytestmark = pytest.mark.skipif(
    not (FRONTEND / "node_modules").is_dir(),
    reason="frontend not installed (run npm install in frontend/)",
)

try:
    import httpx
except ImportError:  # pragma: no cover
    httpx = None


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


def build_store(path: Path) -> None:
    store = CloneStore(path)
    # labeled rows so training works
    corpus = synthesize_corpus(16, seed=31)
    pairs, _ = generate_benchmark(corpus, 12, 12, seed=31)
    for pair in pairs:
        store.add_pair(pair, source="mutation-bench")
    # an unlabeled queue: half near-identical (high lambda), half dissimilar
    extra = synthesize_corpus(40, seed=77)
    for i in range(15):
        left = extra[i]
        if i % 2 == 0:
            right = CodeFragment(left.source_text + "\n// tail note\n", file_path=left.file_path)
        else:
            right = extra[39 - i]
        store.add_pair(ClonePair(f"queue-{i:02d}", left, right), source="detector-import")


@pytest.mark.skipif(httpx is None, reason="httpx unavailable")
def test_ui_live_against_service(tmp_path):
    store_path = tmp_path / "ui.store"
    build_store(store_path)
    store = CloneStore(store_path)
    ts = store.assemble_training_set()
    model = NeuralNetClassifier(hidden_layer_sizes=(12,), max_epochs=150, seed=5).fit(ts)
    model_path = tmp_path / "ui-model.doc"
    save_model(model, model_path)

    port = free_port()
    server = subprocess.Popen(
        [
            sys.executable, "-m", "cloneval.cli", "serve",
            "--store", str(store_path), "--model", str(model_path),
            "--port", str(port),
        ],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    base_url = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                if httpx.get(f"{base_url}/api/model", timeout=1.0).status_code == 200:
                    break
            except httpx.HTTPError:
                time.sleep(0.1)
        else:
            pytest.fail("service did not come up")

        result = subprocess.run(
            ["npx", "vitest", "run", "tests/live.e2e.test.ts"],
            cwd=FRONTEND,
            env={**os.environ, "CLONEVAL_E2E_URL": base_url},
            capture_output=True,
            text=True,
            timeout=240,
        )
        if result.returncode != 0:
            pytest.fail(f"vitest live run failed:\n{result.stdout}\n{result.stderr}")
    finally:
        server.terminate()
        server.wait(timeout=10)

    # the UI's ten labels must be real store history entries
    reopened = CloneStore(store_path)
    ui_labeled = [
        record
        for record in reopened.records()
        if any(event.labeler == "uiuser" for event in record.history)
    ]
    assert len(ui_labeled) == 10
    for record in ui_labeled:
        assert len(record.history) == 1
        assert record.history[0].label is Label.TRUE_POSITIVE
        assert record.pair_id.startswith("queue-")
    assert len(reopened.unlabeled()) == 5
