import math

import numpy as np
import pytest

from app.models.circuit import Gate, QubitMapping
from app.models.gf2 import ParityMatrix, random_invertible, replay
from app.models.phasepoly import MixedPhasePolynomial, PhaseGadget
from app.models.topology import named_topology
from app.service.benchmark_service import BenchmarkService
from app.service.synthesis_service import Method, SynthesisService
from app.service.verify_service import VerifyService
from app.utils.errors import DimensionMismatchError, SingularMatrixError, UnknownMethodError

METHODS = ["SG", "Par", "gadget"]


def _assert_realizes(gates, sigma, m, topology):
    assert all(topology.has_edge(g.control, g.target) for g in gates)
    produced = replay([(g.control, g.target) for g in gates], m.n).to_bits()
    expected = m.to_bits()
    for j in range(m.n):
        assert np.array_equal(produced[sigma[j]], expected[j])


class TestPermRowCol:
    def test_identity(self, valencia):
        gates, sigma = SynthesisService.permrowcol(ParityMatrix.identity(5), valencia)
        assert gates == []
        assert sigma.is_identity()

    def test_single_edge_cnot(self, line3):
        m = ParityMatrix.identity(3).apply_cnot(0, 1)
        gates, sigma = SynthesisService.permrowcol(m, line3)
        assert len(gates) == 1
        _assert_realizes(gates, sigma, m, line3)

    @pytest.mark.parametrize("name", ["valencia", "yorktown", "ring-8", "grid-3x3", "melbourne"])
    def test_random_matrices(self, rng, name):
        t = named_topology(name)
        for _ in range(15):
            m = random_invertible(t.n, rng)
            gates, sigma = SynthesisService.permrowcol(m, t)
            _assert_realizes(gates, sigma, m, t)

    def test_singular(self, line3):
        with pytest.raises(SingularMatrixError):
            SynthesisService.permrowcol(ParityMatrix.zeros(3), line3)

    def test_dimension(self, line3):
        with pytest.raises(DimensionMismatchError):
            SynthesisService.permrowcol(ParityMatrix.identity(4), line3)

    def test_gauss_reference(self, rng):
        m = random_invertible(6, rng)
        gates = SynthesisService.cnot_network_gauss(m)
        assert replay([(g.control, g.target) for g in gates], 6) == m


class TestMethodParsing:
    @pytest.mark.parametrize("name,method", [
        ("sg", Method.SG), ("Steiner-GraySynth", Method.SG), ("par", Method.PAR),
        ("ParitySynth", Method.PAR), ("Uncompiled", Method.NAIVE), ("gadget", Method.GADGET),
    ])
    def test_aliases(self, name, method):
        assert Method.parse(name) == method

    def test_unknown(self):
        with pytest.raises(UnknownMethodError):
            Method.parse("tket")


class TestSynthesize:
    @pytest.mark.parametrize("method", METHODS + ["naive"])
    def test_empty_polynomial(self, valencia, method):
        result = SynthesisService.synthesize(MixedPhasePolynomial.empty(5), valencia, method)
        assert result.gates == ()

    @pytest.mark.parametrize("method", METHODS)
    def test_weight_one_gadget_is_a_rotation(self, valencia, method):
        p = MixedPhasePolynomial(5, (PhaseGadget.z("00100", 0.3),))
        result = SynthesisService.synthesize(p, valencia, method)
        assert result.gates == (Gate.rz(2, 0.3),)

    def test_fig1_steiner_graysynth(self, fig1, line3):
        result = SynthesisService.steiner_graysynth(fig1, line3)
        assert result.cnot_count <= 4
        assert VerifyService.is_compliant(result.gates, line3)
        assert VerifyService.check_result(fig1, result)

    def test_fig1_naive(self, fig1, line3):
        result = SynthesisService.synthesize(fig1, line3, "naive")
        # ZZZ 사다리 4개 + XX 사다리 2개
        assert result.cnot_count == 6
        assert [g.kind.value for g in result.gates if not g.is_cnot] == ["RZ", "RX"]
        assert VerifyService.check_result(fig1, result)

    def test_naive_count_is_ladder_sum(self, random_polys, valencia):
        for p in random_polys(5, 8, 5):
            expected = sum(2 * (g.weight - 1) for g in p.gadgets)
            assert SynthesisService.synthesize(p, valencia, "naive").cnot_count == expected

    def test_dispatch_matches_direct_calls(self, random_polys, yorktown):
        p = random_polys(5, 6, 1)[0]
        assert SynthesisService.synthesize(p, yorktown, "SG").gates == SynthesisService.steiner_graysynth(p, yorktown).gates
        assert SynthesisService.synthesize(p, yorktown, "Par").gates == SynthesisService.paritysynth(p, yorktown).gates
        assert (
            SynthesisService.synthesize(p, yorktown, "gadget").gates
            == SynthesisService.topology_aware_naive(p, yorktown).gates
        )

    @pytest.mark.parametrize("method", METHODS)
    @pytest.mark.parametrize("device", ["valencia", "yorktown"])
    def test_random_circuits_are_equivalent_and_compliant(self, random_polys, method, device):
        t = named_topology(device)
        for p in random_polys(5, 6, 10, seed=3):
            result = SynthesisService.synthesize(p, t, method)
            assert VerifyService.is_compliant(result.gates, t)
            assert VerifyService.check_result(p, result)

    @pytest.mark.parametrize("method", METHODS)
    def test_nontrivial_tail_and_input_mapping(self, rng, method):
        t = named_topology("line-4")
        p = MixedPhasePolynomial(
            4,
            (PhaseGadget.x("1101", math.pi / 4), PhaseGadget.z("0111", 3 * math.pi / 4)),
            random_invertible(4, rng),
        )
        in_map = QubitMapping((3, 1, 0, 2))
        result = SynthesisService.synthesize(p, t, method, in_map)
        assert result.input_mapping == in_map
        assert VerifyService.is_compliant(result.gates, t)
        assert VerifyService.check_result(p, result)

    def test_dimension_mismatch(self, fig1, valencia):
        with pytest.raises(DimensionMismatchError):
            SynthesisService.synthesize(fig1, valencia)

    def test_deterministic(self, random_polys, valencia):
        p = random_polys(5, 10, 1, seed=9)[0]
        for method in METHODS:
            first = SynthesisService.synthesize(p, valencia, method)
            second = SynthesisService.synthesize(p, valencia, method)
            assert first.gates == second.gates
            assert first.output_mapping == second.output_mapping

    @pytest.mark.parametrize("k", [4, 5, 6])
    def test_complete_graph_never_worse_than_ladder(self, k):
        t = named_topology(f"complete-{k}")
        for seed in range(200):
            m = 1 + seed % 6
            p = BenchmarkService.random_circuit(k, m, seed)
            par = SynthesisService.paritysynth(p, t)
            naive = SynthesisService.synthesize(p, t, "naive")
            assert par.cnot_count <= naive.cnot_count, (k, seed, m)

    def test_complete_graph_with_tail_and_mapping(self, rng):
        t = named_topology("complete-5")
        for seed in range(30):
            base = BenchmarkService.random_circuit(5, 1 + seed % 5, seed)
            p = MixedPhasePolynomial(5, base.gadgets, random_invertible(5, rng))
            in_map = QubitMapping(tuple(int(q) for q in rng.permutation(5)))
            par = SynthesisService.paritysynth(p, t, in_map)
            naive = SynthesisService.synthesize(p, t, "naive", in_map)
            assert par.cnot_count <= naive.cnot_count
            assert VerifyService.check_result(p, par)

    def test_mixed_basis_residue_case(self):
        t = named_topology("complete-4")
        p = MixedPhasePolynomial(
            4,
            (PhaseGadget.x("0111", 7 * math.pi / 4), PhaseGadget.z("1001", 3 * math.pi / 2)),
        )
        par = SynthesisService.paritysynth(p, t)
        naive = SynthesisService.synthesize(p, t, "naive")
        assert naive.cnot_count == 6
        assert par.cnot_count <= naive.cnot_count
        assert VerifyService.is_compliant(par.gates, t)
        assert VerifyService.check_result(p, par)
