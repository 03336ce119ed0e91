"""sinebody コマンドのサブコマンド定義と実行"""
import argparse
import json
import logging
import sys
from typing import Any, Callable, Dict, List, Optional

from pydantic import ValidationError

from src.application.dto.suite_config_dto import SUITE_NAMES, SuiteConfig, ToleranceConfig
from src.domain.entities.support_body import VolumeMethod
from src.domain.exceptions import SineBodyError
from src.domain.value_objects.kernel_kind import KernelKind
from src.presentation.cli.context import CliDependencies, build_cli_dependencies

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sinebody",
        description="等方球面測度の sine / cosine 変換と凸体の体積不等式を数値検証する",
    )
    subcommands = parser.add_subparsers(dest="command", required=True)

    constants = subcommands.add_parser("constants", help="κ_n, α_n, γ_n と不等式の端点を表示")
    constants.add_argument("--n", type=int, default=3)

    verify = subcommands.add_parser("verify", help="検証スイートを実行して JSON レポートを書き出す")
    verify.add_argument("suite", choices=[*SUITE_NAMES, "all"])
    verify.add_argument("--n", type=int, nargs="+", dest="n_values")
    verify.add_argument("--nmax", type=int)
    verify.add_argument("--resolution", type=int)
    verify.add_argument("--samples", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--count", type=int, help="ランダム測度・多面体コーパスの個数")
    verify.add_argument("--measure", help="測度CSV（スイートに追加）")
    verify.add_argument("--polytope", help="多面体CSV（トモグラフィに追加）")
    verify.add_argument("--vertices", help="多面体の頂点CSV")
    verify.add_argument("--out")
    verify.add_argument("--tol-scale", type=float, dest="tol_scale")

    volume = subcommands.add_parser("volume", help="測度ファイルの sine / cosine 体の体積を推定")
    volume.add_argument("--measure", required=True)
    volume.add_argument("--method", choices=[m.value for m in VolumeMethod], default=VolumeMethod.EXP_INTEGRAL.value)
    volume.add_argument("--kernel", choices=[k.value for k in KernelKind], default=KernelKind.SINE.value)
    volume.add_argument("--resolution", type=int)
    volume.add_argument("--samples", type=int)
    volume.add_argument("--seed", type=int)

    transform = subcommands.add_parser("transform", help="測度ファイルの変換を1点で評価")
    transform.add_argument("--measure", required=True)
    transform.add_argument("--direction", type=float, nargs="+", required=True)
    transform.add_argument("--kernel", choices=[k.value for k in KernelKind], default=KernelKind.SINE.value)

    position = subcommands.add_parser("position", help="多面体を表面積最小位置へ移す")
    position.add_argument("--polytope", required=True)
    position.add_argument("--vertices")

    return parser


def suite_config_from(args: argparse.Namespace, dependencies: CliDependencies) -> SuiteConfig:
    """Settings の既定値に CLI フラグを上書きして SuiteConfig を組み立てる"""
    settings = dependencies.settings
    count = args.count
    return SuiteConfig(
        suite=args.suite,
        n_values=args.n_values or settings.n_values,
        nmax=args.nmax if args.nmax is not None else settings.nmax,
        resolution=args.resolution if args.resolution is not None else settings.resolution,
        high_dim_resolution=settings.high_dim_resolution,
        lebesgue_resolution=settings.lebesgue_resolution,
        samples=args.samples if args.samples is not None else settings.samples,
        seed=args.seed if args.seed is not None else settings.seed,
        measure_count=count if count is not None else settings.suite_measures,
        corpus_size=count if count is not None else settings.corpus_size,
        tol_scale=args.tol_scale if args.tol_scale is not None else settings.tol_scale,
        sigma_multiplier=settings.sigma_multiplier,
        max_workers=settings.max_workers,
        chunk_size=settings.mc_chunk_size,
        measure_path=args.measure,
        polytope_path=args.polytope,
        vertices_path=args.vertices,
        out=args.out or settings.out,
        tolerances=ToleranceConfig(chain_relative=settings.chain_relative_tolerance),
    )


def _print_json(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2, ensure_ascii=False))


def handle_constants(args: argparse.Namespace, dependencies: CliDependencies) -> int:
    _print_json(dependencies.query_service.constants_summary(args.n))
    return EXIT_OK


def handle_verify(args: argparse.Namespace, dependencies: CliDependencies) -> int:
    config = suite_config_from(args, dependencies)
    report = dependencies.verification_service.run_suite(config)
    failed = report.failed_checks
    print(
        f"{'PASS' if report.passed else 'FAIL'} {report.suite_name}: "
        f"{len(report.checks) - len(failed)}/{len(report.checks)} checks passed -> {config.out}"
    )
    for entry in failed:
        print(f"  failed: {entry.name} = {entry.computed_value!r} not in [{entry.lower_bound!r}, {entry.upper_bound!r}] ± {entry.error_bar!r}")
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def handle_volume(args: argparse.Namespace, dependencies: CliDependencies) -> int:
    settings = dependencies.settings
    result = dependencies.query_service.measure_volume(
        args.measure,
        method=args.method,
        kernel=args.kernel,
        resolution=args.resolution if args.resolution is not None else settings.resolution,
        samples=args.samples if args.samples is not None else settings.samples,
        seed=args.seed if args.seed is not None else settings.seed,
        max_workers=settings.max_workers,
        chunk_size=settings.mc_chunk_size,
    )
    _print_json(result)
    return EXIT_OK


def handle_transform(args: argparse.Namespace, dependencies: CliDependencies) -> int:
    _print_json(dependencies.query_service.measure_transform(args.measure, args.direction, kernel=args.kernel))
    return EXIT_OK


def handle_position(args: argparse.Namespace, dependencies: CliDependencies) -> int:
    _print_json(dependencies.query_service.position_polytope(args.polytope, args.vertices))
    return EXIT_OK


HANDLERS: Dict[str, Callable[[argparse.Namespace, CliDependencies], int]] = {
    "constants": handle_constants,
    "verify": handle_verify,
    "volume": handle_volume,
    "transform": handle_transform,
    "position": handle_position,
}


def run(argv: Optional[List[str]] = None, dependencies: Optional[CliDependencies] = None) -> int:
    """終了コード: 0 = 全項目合格、1 = 不合格あり、2 = 入力・設定エラー"""
    args = build_parser().parse_args(argv)
    try:
        dependencies = dependencies or build_cli_dependencies()
        return HANDLERS[args.command](args, dependencies)
    except ValidationError as e:
        logger.error(f"❌ 設定エラー: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except SineBodyError as e:
        logger.error(f"❌ 入力エラー: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
