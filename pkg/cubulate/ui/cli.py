"""cubulate 命令行入口。

每个子命令先解析成 RunConfig，再由 run() 分派；退出码 0 成功，1 判据不成立（结果），2 输入或尺度错误。
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from cubulate import __version__
from cubulate.core.ball import CayleyBall, build_ball
from cubulate.core.errors import CubulateError, MalformedInputError, ScaleError
from cubulate.core.presentation import load_presentation
from cubulate.criteria.axis import DEFAULT_K_MAX, axis_separation
from cubulate.criteria.induced import induce_wallspace
from cubulate.criteria.profile import linear_separation_profile
from cubulate.criteria.selection import select_walls, verify_selection
from cubulate.cubes.complex import check_npc, from_dual, load_cube_complex
from cubulate.cubes.hyperplanes import check_special
from cubulate.dual.sageev import DualComplex, build_dual, check_median, orbit_census
from cubulate.fixtures import write_fixtures
from cubulate.ui import report
from cubulate.utils.artifacts import FORMAT_VERSIONS, read_json, write_json
from cubulate.utils.config import Budgets, ConfigManager, RunConfig, create_default_config
from cubulate.walls.wallspace import WallFamily, Wallspace, build_wallspace, load_walls_spec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FINDING = 1
EXIT_ERROR = 2

INPUT_KEYS = ("group", "ball", "spec", "walls", "candidates", "file", "config")
OUTPUT_KEYS = ("out", "dot", "report", "csv")
OPTION_KEYS = (
    "g",
    "n_max",
    "k_max",
    "step",
    "translate_radius",
    "subgroup",
    "pairs",
    "verify",
    "median",
    "orbits",
    "dry_run",
    "init",
)


# ----------------------------------------------------------------------
# 参数解析
# ----------------------------------------------------------------------
def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--log-level", default="WARNING", help="日志级别，默认 WARNING")
    common.add_argument("--threads", type=int, default=None, help="并行线程数，默认物理核数")
    common.add_argument("--seed", type=int, default=0, help="随机种子，默认 0")
    common.add_argument("--budget-walls", type=int, default=None, help="对偶构造的墙数上限")
    common.add_argument("--budget-zero-cubes", type=int, default=None, help="0-立方体数上限")
    common.add_argument("--budget-rewrite", type=int, default=None, help="每个词的重写步数上限")
    common.add_argument("--budget-vertices", type=int, default=None, help="球的顶点数上限")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubulate", description="墙空间、对偶立方复形与判据检查工具")
    parser.add_argument("--version", action="store_true", help="打印版本与产物格式版本")
    subparsers = parser.add_subparsers(dest="command", help="可用命令")
    common = _common_parser()

    def _add(name: str, help_text: str) -> argparse.ArgumentParser:
        return subparsers.add_parser(name, help=help_text, parents=[common])

    p = _add("ball", "构造 Cayley 球")
    p.add_argument("--group", type=Path, required=True, help="群描述文件 (TOML)")
    p.add_argument("--radius", type=int, required=True, help="球的半径 R")
    p.add_argument("--out", type=Path, default=Path("ball.json"))
    p.add_argument("--dot", type=Path, default=None, help="导出 Cayley 图的 DOT")

    p = _add("walls", "按墙描述文件构造墙空间")
    p.add_argument("--ball", type=Path, required=True)
    p.add_argument("--spec", type=Path, required=True, help="墙描述文件 (TOML)")
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--out", type=Path, default=Path("ws.json"))

    p = _add("dual", "构造对偶立方复形")
    p.add_argument("--walls", type=Path, required=True)
    p.add_argument("--max-dim", type=int, default=8)
    p.add_argument("--median", action="store_true", help="同时检查 1-骨架的中位性")
    p.add_argument("--orbits", action="store_true", help="报告平移轨道计数")
    p.add_argument("--out", type=Path, default=Path("dual.json"))
    p.add_argument("--dot", type=Path, default=None)
    p.add_argument("--report", type=Path, default=None)

    p = _add("check-npc", "检查 Gromov link 条件")
    p.add_argument("file", type=Path, help="立方复形文件 (JSON/TOML) 或对偶复形")
    p.add_argument("--report", type=Path, default=None)

    p = _add("check-special", "检查超平面的四种病态")
    p.add_argument("file", type=Path)
    p.add_argument("--report", type=Path, default=None)
    p.add_argument("--dot", type=Path, default=None, help="按超平面着色的 1-骨架")

    p = _add("criteria", "线性分离剖面")
    p.add_argument("--walls", type=Path, required=True)
    p.add_argument("--L", dest="L", type=int, required=True)
    p.add_argument("--step", type=int, default=1, help="至少每 step 步严格增长一次")
    p.add_argument("--report", type=Path, default=None)
    p.add_argument("--csv", type=Path, default=None)

    p = _add("axis", "轴分离检查")
    p.add_argument("--walls", type=Path, required=True)
    p.add_argument("--g", required=True, help="群元素（词）")
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--report", type=Path, default=None)

    p = _add("select", "贪心选择有限墙集")
    p.add_argument("--ball", type=Path, required=True)
    p.add_argument("--candidates", type=Path, required=True, help="候选墙族 (TOML)")
    p.add_argument("--L", dest="L", type=int, required=True)
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--translate-radius", type=int, default=None)
    p.add_argument("--k-max", type=int, default=DEFAULT_K_MAX)
    p.add_argument("--no-pairs", dest="pairs", action="store_false", help="不要求分离顶点对")
    p.add_argument("--verify", action="store_true", help="只用选中的墙重新验证见证")
    p.add_argument("--out", type=Path, default=None, help="选中墙的墙空间")
    p.add_argument("--report", type=Path, default=None)
    p.add_argument("--csv", type=Path, default=None)

    p = _add("induce", "子群上的诱导墙空间")
    p.add_argument("--walls", type=Path, required=True)
    p.add_argument("--subgroup", required=True, help="子群生成元，逗号分隔；空串表示平凡子群")
    p.add_argument("--radius", type=int, default=None, help="子群球的半径（按子群生成元计）")
    p.add_argument("--margin", type=int, default=None)
    p.add_argument("--L", dest="L", type=int, default=None, help="给出时同时计算诱导剖面")
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--out", type=Path, default=None)
    p.add_argument("--report", type=Path, default=None)

    p = _add("fixtures", "写出全部夹具")
    p.add_argument("--out", type=Path, default=Path("fixtures"))

    p = _add("suite", "按 TOML 配置批量运行子命令")
    p.add_argument("config", type=Path, help="suite 配置文件 (TOML)")
    p.add_argument("--dry-run", action="store_true", help="仅显示执行计划")
    p.add_argument("--init", action="store_true", help="写出示例配置后退出")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    inputs = {k: getattr(args, k) for k in INPUT_KEYS if getattr(args, k, None) is not None}
    outputs = {k: getattr(args, k) for k in OUTPUT_KEYS if getattr(args, k, None) is not None}
    if getattr(args, "init", False):
        outputs["config"] = inputs.pop("config")
    options = {k: getattr(args, k) for k in OPTION_KEYS if hasattr(args, k)}
    options["log_level"] = args.log_level
    budgets = Budgets.from_env(
        walls=args.budget_walls,
        zero_cubes=args.budget_zero_cubes,
        rewrite_steps=args.budget_rewrite,
        vertices=args.budget_vertices,
    )
    return RunConfig(
        command=args.command,
        inputs=inputs,
        outputs=outputs,
        radius=getattr(args, "radius", None),
        margin=getattr(args, "margin", None),
        L=getattr(args, "L", None),
        budgets=budgets,
        max_dim=getattr(args, "max_dim", 8),
        seed=args.seed,
        threads=args.threads,
        options=options,
    )


# ----------------------------------------------------------------------
# 读取产物
# ----------------------------------------------------------------------
def _load_ball(path: Path) -> CayleyBall:
    return CayleyBall.from_dict(read_json(path, "cubulate.ball"))


def _load_wallspace(path: Path) -> Wallspace:
    return Wallspace.from_dict(read_json(path, "cubulate.wallspace"))


def _load_complex(path: Path):
    """立方复形文件；对偶复形产物会先转成立方复形"""

    if path.suffix == ".json":
        data = read_json(path)
        if data.get("format") == "cubulate.dual":
            return from_dual(DualComplex.from_dict(data))
    return load_cube_complex(path)


# ----------------------------------------------------------------------
# 子命令
# ----------------------------------------------------------------------
def handle_ball(config: RunConfig) -> int:
    p = load_presentation(config.inputs["group"])
    if p.rewrite_budget != config.budgets.rewrite_steps and config.budgets.rewrite_steps != Budgets().rewrite_steps:
        p = dataclasses.replace(p, rewrite_budget=config.budgets.rewrite_steps)
    print(f"🚀 构造 {p.display_name} 的半径 {config.radius} 球")
    ball = build_ball(p, config.radius, vertex_budget=config.budgets.vertices)
    print(f"📊 顶点 {len(ball)}，球面大小 {ball.sphere_sizes()}")
    out = write_json(config.outputs["out"], ball.to_dict())
    print(f"📁 {out}")
    if "dot" in config.outputs:
        print(f"📁 {report.write_dot(config.outputs['dot'], ball.to_dot())}")
    return EXIT_OK


def handle_walls(config: RunConfig) -> int:
    ball = _load_ball(config.inputs["ball"])
    spec = load_walls_spec(config.inputs["spec"])
    ws = build_wallspace(ball, spec, config.margin)
    untrusted = sum(1 for i in range(len(ws.walls)) if not ws.is_trusted(i))
    print(f"📊 {len(ws.walls)} 面墙，margin={ws.margin}，可信半径 {ws.trusted_radius}")
    if untrusted:
        print(f"⚠️ {untrusted} 面墙不可信")
    print(f"📁 {write_json(config.outputs['out'], ws.to_dict())}")
    return EXIT_OK


def handle_dual(config: RunConfig) -> int:
    ws = _load_wallspace(config.inputs["walls"])
    dc = build_dual(
        ws,
        max_dim=config.max_dim,
        wall_budget=config.budgets.walls,
        zero_cube_budget=config.budgets.zero_cubes,
    )
    print(f"📊 {report.format_census(dc.census())}")
    median = check_median(dc) if config.options.get("median") else None
    orbits = orbit_census(dc) if config.options.get("orbits") else None
    print(f"📁 {write_json(config.outputs['out'], dc.to_dict())}")
    if "dot" in config.outputs:
        print(f"📁 {report.write_dot(config.outputs['dot'], dc.to_dot())}")
    report.emit(config.outputs.get("report"), "dual", report.dual_body(dc, median, orbits))
    if median is not None and not median.ok:
        print(f"❌ 中位性失败: 三元组 {median.failure}")
        return EXIT_FINDING
    return EXIT_OK


def handle_check_npc(config: RunConfig) -> int:
    C = _load_complex(config.inputs["file"])
    result = check_npc(C)
    report.emit(config.outputs.get("report"), "check-npc", report.npc_body(result, C))
    if result.ok:
        print("NPC")
        return EXIT_OK
    for v in result.violations[:5]:
        print(f"⚠️ 顶点 {v.vertex}: {v.kind} {v.simplex}")
    print(f"❌ 非 NPC，{len(result.violations)} 处违例")
    return EXIT_FINDING


def handle_check_special(config: RunConfig) -> int:
    C = _load_complex(config.inputs["file"])
    result = check_special(C)
    npc = check_npc(C)
    report.emit(config.outputs.get("report"), "check-special", report.special_body(result, C, npc))
    if "dot" in config.outputs:
        report.write_dot(config.outputs["dot"], report.special_dot(result, C))
    print(f"📊 {len(result.hyperplanes)} 个超平面")
    if result.special:
        print("special")
        return EXIT_OK
    print("not special")
    return EXIT_FINDING


def handle_criteria(config: RunConfig) -> int:
    ws = _load_wallspace(config.inputs["walls"])
    profile = linear_separation_profile(ws, config.L, step=config.options.get("step", 1))
    report.emit(config.outputs.get("report"), "criteria", report.profile_body(profile))
    if "csv" in config.outputs:
        report.write_csv(profile.to_frame(), config.outputs["csv"])
    print(f"📊 min 剖面 {tuple(profile.mins)}")
    if any(profile.carrier_skipped):
        print(f"⚠️ 载体包含端点而未计数的墙（每个球面最多）{tuple(profile.carrier_skipped)}")
    if profile.plausible:
        return EXIT_OK
    print(f"❌ 剖面不增长（见证 {profile.witnesses[-1] or '1'}），真性不成立")
    return EXIT_FINDING


def handle_axis(config: RunConfig) -> int:
    ws = _load_wallspace(config.inputs["walls"])
    result = axis_separation(ws, config.options["g"], n_max=config.options.get("n_max"), k_max=config.options["k_max"])
    report.emit(config.outputs.get("report"), "axis", report.axis_body(result))
    if result.verdict:
        w = result.witness
        print(f"📊 见证: 墙 {w.label} (#{w.wall}), n={w.n}, 符号 {w.sign:+d}, 链长 {result.chain_length}")
        return EXIT_OK
    print(f"❌ 元素 {result.element or '1'} 没有轴分离见证 ({result.note})")
    return EXIT_FINDING


def _load_candidates(path: Path) -> Dict[str, Any]:
    manager = ConfigManager(path)
    if not manager.config:
        raise MalformedInputError(f"候选墙族文件不存在或为空: {path}", module="cli")
    families = [WallFamily.from_dict(f) for f in manager.get("families", [])]
    if not families:
        raise MalformedInputError("候选墙族文件至少需要一个 [[families]]", module="cli")
    return {
        "families": families,
        "margin": manager.get("walls.margin"),
        "translate_radius": manager.get("select.translate_radius"),
        "parabolic": [list(g) for g in manager.get("select.parabolic", [])],
    }


def handle_select(config: RunConfig) -> int:
    ball = _load_ball(config.inputs["ball"])
    cands = _load_candidates(config.inputs["candidates"])
    margin = config.margin if config.margin is not None else cands["margin"]
    translate_radius = config.options.get("translate_radius")
    if translate_radius is None:
        translate_radius = cands["translate_radius"]
    result = select_walls(
        ball,
        cands["families"],
        config.L,
        translate_radius=translate_radius,
        margin=margin,
        k_max=config.options["k_max"],
        parabolic=cands["parabolic"],
        separate_pairs=config.options.get("pairs", True),
        threads=config.threads,
    )
    failures = verify_selection(result) if config.options.get("verify") else None
    report.emit(config.outputs.get("report"), "select", report.selection_body(result, failures))
    if "csv" in config.outputs:
        report.write_csv(result.coverage_frame(), config.outputs["csv"])
    if "out" in config.outputs:
        sub, _ = result.selected_wallspace()
        write_json(config.outputs["out"], sub.to_dict())
    print(
        f"📊 候选 {len(result.pool.walls)} 面，选中轴墙 {len(result.axis_walls)} 面、"
        f"分离墙 {len(result.separation_walls)} 面"
    )
    ok = result.complete and not failures
    if result.uncovered:
        print(f"⚠️ 未覆盖: {', '.join(result.uncovered)}")
    if result.unseparated:
        print(f"⚠️ 未分离的顶点对: {len(result.unseparated)}")
    if failures:
        print(f"❌ {len(failures)} 个见证在选中的墙上复验失败")
    return EXIT_OK if ok else EXIT_FINDING


def handle_induce(config: RunConfig) -> int:
    ws = _load_wallspace(config.inputs["walls"])
    text = config.options["subgroup"]
    gens = [g.strip() for g in text.split(",") if g.strip()]
    R_sub = config.radius
    if R_sub is None:
        longest = max((len(ws.ball.presentation.element(g)) for g in gens), default=1) or 1
        R_sub = ws.trusted_radius // longest
    induced = induce_wallspace(ws, gens, R_sub, config.margin)
    profile = None
    if config.L is not None:
        profile = linear_separation_profile(induced.wallspace, config.L, step=config.options.get("step", 1))
    report.emit(config.outputs.get("report"), "induce", report.induced_body(induced, profile))
    if "out" in config.outputs:
        write_json(config.outputs["out"], induced.wallspace.to_dict())
    print(f"📊 诱导墙 {len(induced.wallspace.walls)} 面，丢弃单侧限制 {induced.discarded} 个")
    if profile is not None:
        print(f"📊 诱导剖面 {tuple(profile.mins)}")
        if not profile.plausible:
            return EXIT_FINDING
    return EXIT_OK


def handle_fixtures(config: RunConfig) -> int:
    written = write_fixtures(config.outputs["out"], seed=config.seed)
    print(f"📁 写出 {len(written)} 个夹具到 {config.outputs['out']}")
    return EXIT_OK


def handle_suite(config: RunConfig) -> int:
    from cubulate.scheduler import SuiteScheduler

    if config.options.get("init"):
        create_default_config(config.outputs["config"])
        print(f"📁 已写出示例配置 {config.outputs['config']}")
        return EXIT_OK
    print(f"🚀 启动 suite，配置文件: {config.inputs['config']}")
    scheduler = SuiteScheduler(
        config.inputs["config"],
        dry_run=config.options.get("dry_run", False),
        log_level=config.options.get("log_level", "WARNING"),
    )
    return scheduler.run_all()


HANDLERS: Dict[str, Callable[[RunConfig], int]] = {
    "ball": handle_ball,
    "walls": handle_walls,
    "dual": handle_dual,
    "check-npc": handle_check_npc,
    "check-special": handle_check_special,
    "criteria": handle_criteria,
    "axis": handle_axis,
    "select": handle_select,
    "induce": handle_induce,
    "fixtures": handle_fixtures,
    "suite": handle_suite,
}


def run(config: RunConfig) -> int:
    """执行一个子命令，返回退出码"""
    handler = HANDLERS.get(config.command)
    if handler is None:
        print(f"❌ 未知子命令: {config.command}", file=sys.stderr)
        return EXIT_ERROR
    errors = config.validate()
    if errors:
        for error in errors:
            print(f"❌ {error}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return handler(config)
    except ScaleError as exc:
        hint = f"（建议半径 ≥ {exc.minimal_radius}）" if exc.minimal_radius is not None else ""
        print(f"❌ {exc}{hint}", file=sys.stderr)
        return EXIT_ERROR
    except CubulateError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"❌ [cli] {exc}", file=sys.stderr)
        return EXIT_ERROR


def print_version() -> None:
    print(f"cubulate {__version__}")
    for name, version in sorted(FORMAT_VERSIONS.items()):
        print(f"  {name} v{version}")


def configure_logging(level_name: str) -> None:
    level = logging.getLevelName(str(level_name).upper())
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    logging.getLogger().setLevel(level)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.version:
        print_version()
        return EXIT_OK
    if not hasattr(args, "log_level"):
        parser.print_help()
        return EXIT_OK

    configure_logging(args.log_level)
    try:
        config = config_from_args(args)
    except CubulateError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(config)


__all__ = ["main", "run", "build_parser", "config_from_args", "HANDLERS", "EXIT_OK", "EXIT_FINDING", "EXIT_ERROR"]


if __name__ == "__main__":
    sys.exit(main())
