"""
전체 규모 수용 테스트 (pytest -m slow)
"""
import time

import numpy as np
import pytest

from app.models.gf2 import random_invertible, replay
from app.models.topology import named_topology
from app.schemas.pipeline import BENCHMARKED_PIPELINES
from app.service.annealing_service import AnnealingService
from app.service.benchmark_service import BenchmarkService
from app.service.synthesis_service import SynthesisService
from app.service.verify_service import VerifyService

pytestmark = pytest.mark.slow

PIPELINES = [p.value for p in BENCHMARKED_PIPELINES]


@pytest.mark.parametrize("device", ["line-5", "valencia", "ring-8"])
@pytest.mark.parametrize("m", [1, 10, 50])
def test_connectivity_compliance(device, m):
    t = named_topology(device)
    for i in range(100):
        p = BenchmarkService.random_circuit(t.n, m, seed=i)
        for name in PIPELINES:
            result = AnnealingService.run_pipeline(p, t, name, seed=i)
            assert VerifyService.is_compliant(result.gates, t), (device, m, i, name)


def test_semantic_soundness():
    devices = ["line-3", "line-4", "valencia", "yorktown", "ring-4"]
    rng = np.random.default_rng(2024)
    for i in range(200):
        t = named_topology(devices[i % len(devices)])
        p = BenchmarkService.random_circuit(t.n, int(rng.integers(1, 11)), seed=i)
        for name in PIPELINES + ["Uncompiled", "Par+RT+An"]:
            result = AnnealingService.run_pipeline(p, t, name, seed=i)
            assert VerifyService.check_result(p, result), (t.name, i, name)


@pytest.mark.parametrize("n,device", [(5, "valencia"), (8, "ring-8"), (14, "melbourne")])
def test_permrowcol_realization(n, device):
    t = named_topology(device)
    rng = np.random.default_rng(n)
    for _ in range(200):
        m = random_invertible(n, rng)
        gates, sigma = SynthesisService.permrowcol(m, t)
        assert VerifyService.is_compliant(gates, t)
        produced = replay([(g.control, g.target) for g in gates], n).to_bits()
        assert all(np.array_equal(produced[sigma[j]], m.to_bits()[j]) for j in range(n))


def test_paritysynth_beats_steiner_graysynth_at_scale():
    t = named_topology("melbourne")
    par, sg = [], []
    for i in range(20):
        p = BenchmarkService.random_circuit(t.n, 100, seed=i)
        par.append(SynthesisService.paritysynth(p, t).cnot_count)
        sg.append(SynthesisService.steiner_graysynth(p, t).cnot_count)
    assert np.mean(par) < np.mean(sg)


def test_reverse_traversal_and_annealing_improve():
    t = named_topology("valencia")
    sg, rt, rt_an, rt_stage = [], [], [], []
    for i in range(20):
        p = BenchmarkService.random_circuit(t.n, 50, seed=i)
        sg.append(AnnealingService.run_pipeline(p, t, "SG", seed=i).cnot_count)
        rt.append(AnnealingService.run_pipeline(p, t, "SG+RT", seed=i).cnot_count)
        rt_an.append(AnnealingService.run_pipeline(p, t, "SG+RT->An", seed=i).cnot_count)
        rt_stage.append(AnnealingService.reverse_traversal(p, t, 10, "SG", seed=i).cnot_count)
    assert np.mean(rt) <= np.mean(sg)
    assert np.mean(rt_an) <= np.mean(rt)
    assert all(a <= b for a, b in zip(rt_an, rt_stage))


def test_desk_scale_runtime():
    t = named_topology("singapore")
    p = BenchmarkService.random_circuit(t.n, 100, seed=0)
    start = time.perf_counter()
    SynthesisService.paritysynth(p, t)
    assert time.perf_counter() - start < 60
    start = time.perf_counter()
    AnnealingService.run_pipeline(p, t, "An+SG+RT", seed=0)
    assert time.perf_counter() - start < 30 * 60
