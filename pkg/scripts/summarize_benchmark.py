"""
벤치마크 CSV 요약 스크립트

(device, ngadgets, method)별 평균 CNOT 수 / 평균 컴파일 시간을 표로 출력하고,
두 번째 인자가 있으면 요약 CSV로도 저장합니다.

    python scripts/summarize_benchmark.py bench.csv [summary.csv]
"""
import sys
from pathlib import Path

# 상위 디렉토리를 Python 경로에 추가
sys.path.insert(0, str(Path(__file__).parent.parent))

from app.service.benchmark_service import BenchmarkService


def summarize_benchmark(csv_path: str, out_path: str = None) -> bool:
    """벤치마크 CSV 요약 출력"""
    try:
        rows = BenchmarkService.read_csv(csv_path)
    except (OSError, ValueError) as e:
        print(f"❌ CSV 읽기 실패: {str(e)}")
        return False

    if not rows:
        print("⚠️ 결과 행이 없습니다")
        return True

    summary = BenchmarkService.summarize(rows)
    print(f"✅ {len(rows)}행 → {len(summary)}개 셀")
    print(f"   {'device':<14} {'m':>5} {'method':<12} {'n':>4} {'CNOT':>10} {'seconds':>10}")

    current = None
    for item in summary:
        if current is not None and (item.device, item.ngadgets) != current:
            print()
        current = (item.device, item.ngadgets)
        print(
            f"   {item.device:<14} {item.ngadgets:>5} {item.method:<12} {item.circuits:>4} "
            f"{item.mean_cnots:>10.2f} {item.mean_seconds:>10.4f}"
        )

    if out_path:
        BenchmarkService.write_summary_csv(summary, out_path)
        print(f"✅ 요약 저장: {out_path}")
    return True


if __name__ == "__main__":
    if len(sys.argv) < 2:
        print("사용법: python scripts/summarize_benchmark.py <bench.csv> [summary.csv]")
        sys.exit(2)
    ok = summarize_benchmark(sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else None)
    sys.exit(0 if ok else 1)
