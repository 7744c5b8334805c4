"""
명령행 인터페이스

    python -m app gen -n 5 -m 3 --seed 7 -o circuit.txt
    python -m app synth circuit.txt --topology line-5 --method par -o out.qasm
    python -m app synth circuit.txt --topology valencia --pipeline "SG+RT->An" --seed 3
    python -m app bench --devices valencia,yorktown --gadget-counts 1,10 --circuits 5 --csv-out bench.csv
    python -m app verify circuit.txt out.qasm

잘못된 입력은 stderr에 한 줄 메시지를 남기고 종료 코드 2로 끝납니다.
verify는 통과 0, 불일치 1 입니다.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from app.config.settings import get_settings
from app.models.circuit import QubitMapping
from app.models.topology import named_topology
from app.schemas.pipeline import BENCHMARKED_PIPELINES, PipelineSpec
from app.service.annealing_service import AnnealingService
from app.service.benchmark_service import BenchmarkService
from app.service.synthesis_service import Method
from app.service.verify_service import VerifyService
from app.utils.circuit_io import dump_circuit, parse_circuit, read_circuit
from app.utils.qasm import export_qasm, import_qasm, read_mappings

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2


def _split(text: str) -> List[str]:
    return [tok.strip() for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> List[int]:
    try:
        return [int(tok) for tok in _split(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"쉼표로 구분된 정수 목록이어야 합니다: {text}")


def _write_output(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _cmd_gen(args: argparse.Namespace) -> int:
    circuit = BenchmarkService.random_circuit(args.qubits, args.gadgets, args.seed, args.continuous_angles)
    _write_output(dump_circuit(circuit), args.output)
    return EXIT_OK


def _synth_spec(args: argparse.Namespace) -> PipelineSpec:
    if args.pipeline:
        return PipelineSpec.from_name(args.pipeline)
    method = Method.parse(args.method)
    return PipelineSpec(
        name=method.value,
        inner=method.value,
        rt_iterations=args.rt_iters,
        anneal_iterations=args.anneal_iters,
        nested=args.nested,
    )


def _cmd_synth(args: argparse.Namespace) -> int:
    circuit = read_circuit(args.circuit)
    topology = named_topology(args.topology)
    spec = _synth_spec(args)
    result = AnnealingService.run_pipeline(circuit, topology, spec, args.seed)

    if args.format == "json":
        payload = {
            "qubits": circuit.n,
            "topology": topology.name,
            "pipeline": spec.name,
            "cnot_count": result.cnot_count,
            "input_mapping": list(result.input_mapping.perm),
            "output_mapping": list(result.output_mapping.perm),
            "gates": [
                {"kind": g.kind.value, "qubits": list(g.qubits), "angle": g.angle}
                for g in result.gates
            ],
        }
        text = json.dumps(payload, indent=2) + "\n"
    else:
        text = export_qasm(result.gates, circuit.n, result.input_mapping, result.output_mapping)
    _write_output(text, args.output)

    summary = (
        f"CNOT {result.cnot_count} (input {result.input_mapping.to_text()}, "
        f"output {result.output_mapping.to_text()})"
    )
    # QASM이 stdout으로 나가면 요약은 stderr로
    print(summary, file=sys.stdout if args.output not in (None, "-") else sys.stderr)
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    settings = get_settings()
    devices = _split(args.devices) if args.devices else settings.default_devices
    gadget_counts = args.gadget_counts if args.gadget_counts is not None else settings.gadget_counts
    circuits = args.circuits if args.circuits is not None else settings.circuits_per_cell
    methods = _split(args.methods) if args.methods is not None else [p.value for p in BENCHMARKED_PIPELINES]
    jobs = args.jobs if args.jobs is not None else settings.bench_jobs

    rows = BenchmarkService.run_benchmark(
        devices,
        gadget_counts,
        circuits,
        methods,
        seed=args.seed,
        jobs=jobs,
        verify=not args.no_verify,
        continuous=args.continuous_angles,
    )
    if args.csv_out in (None, "-"):
        BenchmarkService.write_csv(rows, sys.stdout, timing=not args.no_timing)
    else:
        BenchmarkService.write_csv(rows, args.csv_out, timing=not args.no_timing)
    if args.summary_out:
        BenchmarkService.write_summary_csv(BenchmarkService.summarize(rows), args.summary_out)
    return EXIT_OK


def _load_synthesized(path: str):
    """QASM 또는 회로 텍스트 파일 → (유니타리, 파일에 적힌 입력/출력 매핑)"""
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".qasm") or text.lstrip().startswith("OPENQASM"):
        gates, n = import_qasm(text)
        in_map, out_map = read_mappings(text)
        return VerifyService.unitary_of_gates(gates, n), in_map, out_map
    return VerifyService.unitary_of_polynomial(parse_circuit(text)), None, None


def _cmd_verify(args: argparse.Namespace) -> int:
    reference = VerifyService.unitary_of_polynomial(read_circuit(args.reference))
    produced, in_map, out_map = _load_synthesized(args.candidate)
    if args.in_map:
        in_map = QubitMapping.from_text(args.in_map)
    if args.out_map:
        out_map = QubitMapping.from_text(args.out_map)

    if VerifyService.equivalent(reference, produced, in_map, out_map, args.tol):
        print("PASS")
        return EXIT_OK
    print("FAIL")
    return EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resynth",
        description="연결성 제약을 고려한 위상 다항식 회로 재합성",
    )
    parser.add_argument("--log-level", default=None, help="로그 레벨 (기본: 설정값)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="무작위 회로 생성")
    gen.add_argument("-n", "--qubits", type=int, required=True, help="큐비트 수")
    gen.add_argument("-m", "--gadgets", type=int, required=True, help="가젯 수")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--continuous-angles", action="store_true", help="[0, 2π) 연속 각도 사용")
    gen.add_argument("-o", "--output", default=None, help="출력 파일 (기본: stdout)")
    gen.set_defaults(handler=_cmd_gen)

    synth = sub.add_parser("synth", help="회로 재합성")
    synth.add_argument("circuit", help="회로 텍스트 파일")
    synth.add_argument("--topology", required=True, help="line-k, ring-k, grid-RxC, complete-k 또는 장치 이름")
    synth.add_argument("--method", default="SG", help="naive | SG | Par | gadget")
    synth.add_argument("--pipeline", default=None, help="이름 붙은 파이프라인 (지정하면 --method 등은 무시)")
    synth.add_argument("--rt-iters", type=int, default=0, help="Reverse Traversal 반복 횟수")
    synth.add_argument("--anneal-iters", type=int, default=0, help="어닐링 반복 횟수")
    synth.add_argument("--nested", action="store_true", help="RT의 매 합성을 어닐링으로 수행")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--format", choices=["qasm", "json"], default="qasm")
    synth.add_argument("-o", "--output", default=None, help="출력 파일 (기본: stdout)")
    synth.set_defaults(handler=_cmd_synth)

    bench = sub.add_parser("bench", help="무작위 회로 벤치마크")
    bench.add_argument("--devices", default=None, help="쉼표로 구분된 토폴로지 이름")
    bench.add_argument("--gadget-counts", type=_int_list, default=None, help="쉼표로 구분된 가젯 수")
    bench.add_argument("--circuits", type=int, default=None, help="셀당 회로 수")
    bench.add_argument("--methods", default=None, help="쉼표로 구분된 파이프라인 이름")
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--csv-out", default=None, help="결과 CSV (기본: stdout)")
    bench.add_argument("--summary-out", default=None, help="평균 요약 CSV")
    bench.add_argument("--jobs", type=int, default=None, help="병렬 프로세스 수")
    bench.add_argument("--no-timing", action="store_true", help="seconds 열을 0으로 기록")
    bench.add_argument("--no-verify", action="store_true", help="연결성/유니타리 검증 생략")
    bench.add_argument("--continuous-angles", action="store_true")
    bench.set_defaults(handler=_cmd_bench)

    verify = sub.add_parser("verify", help="합성 결과 등가성 검증")
    verify.add_argument("reference", help="기준 회로 텍스트 파일")
    verify.add_argument("candidate", help="합성된 QASM (또는 회로 텍스트) 파일")
    verify.add_argument("--in-map", default=None, help="입력 매핑 (예: 0,2,1)")
    verify.add_argument("--out-map", default=None, help="출력 매핑")
    verify.add_argument("--tol", type=float, default=None, help="프로베니우스 허용오차")
    verify.set_defaults(handler=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or get_settings().log_level).upper()
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)

    try:
        return args.handler(args)
    except ValueError as e:
        print(f"❌ {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"❌ 파일 오류: {e}", file=sys.stderr)
        return EXIT_INVALID
