import numpy as np
import pytest

from debiaskit import EmbeddingSnapshot, bundled


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\n[acceptance] {name}: {outcome}", flush=True)


@pytest.fixture(scope="session")
def bundled_snapshot() -> EmbeddingSnapshot:
    return bundled.load_default()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def random_snapshot(rng: np.random.Generator, n: int, d: int) -> EmbeddingSnapshot:
    tokens = [f"w{i:04d}" for i in range(n)]
    return EmbeddingSnapshot(tokens, rng.normal(size=(n, d)))


@pytest.fixture()
def snapshot_1000x50(rng) -> EmbeddingSnapshot:
    return random_snapshot(rng, 1000, 50)
