"""
群模型：字符串重写系统与正规形式

- 字母表是单字符符号的有序元组，元组顺序即 shortlex 序；每个符号带一个形式逆（Coxeter 生成元自逆）。
- 词就是 Python str，正规形式是在重写系统下不可约的词，空串是单位元。
- 两种正规形式引擎：
    * rewriting: 最左优先的字符串重写（自由群、自由交换群、亏格 2 曲面群、用户声明的系统）
    * trace: 直角 Artin/Coxeter 群的迹正规形式（先消去可交换的逆对，再取交换类中字典序最小的代表）
- 内置群在构造时检查所有临界对的局部合流性（亏格 2 只记录结果不强制）。
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import toml

from cubulate.core.errors import CubulateError, DivergenceError, MalformedInputError

logger = logging.getLogger(__name__)

Word = str
GroupElement = str  # 正规形式的词

DEFAULT_REWRITE_BUDGET = 10_000
LETTERS = "abcdefghijklmnopqrstuvwxyz"
GENUS2_RELATOR = "abABcdCD"


class BuiltinKind(Enum):
    """内置群的种类"""
    FREE_GROUP = "FreeGroup"
    FREE_ABELIAN = "FreeAbelian"
    SURFACE_GENUS2 = "SurfaceGenus2"
    RIGHT_ANGLED_COXETER = "RightAngledCoxeter"
    RIGHT_ANGLED_ARTIN = "RightAngledArtin"

    def __str__(self):
        return self.value

    @classmethod
    def from_string(cls, kind_str: str) -> "BuiltinKind":
        for kind in cls:
            if kind.value == kind_str:
                return kind
        raise MalformedInputError(f"未知的内置群: {kind_str}")


class NormalFormEngine(Enum):
    REWRITING = "rewriting"
    TRACE = "trace"


@dataclass(frozen=True)
class BuiltinTag:
    """内置群标签；直角群额外带一张简单图"""
    kind: BuiltinKind
    rank: int = 0
    vertices: Tuple[str, ...] = ()
    edges: Tuple[Tuple[str, str], ...] = ()

    def describe(self) -> str:
        if self.kind in (BuiltinKind.FREE_GROUP, BuiltinKind.FREE_ABELIAN):
            return f"{self.kind.value}({self.rank})"
        if self.kind is BuiltinKind.SURFACE_GENUS2:
            return self.kind.value
        edges = ",".join(f"{u}{v}" for u, v in self.edges)
        return f"{self.kind.value}({''.join(self.vertices)}|{edges})"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "rank": self.rank,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BuiltinTag":
        return cls(
            kind=BuiltinKind.from_string(str(data["kind"])),
            rank=int(data.get("rank", 0)),
            vertices=tuple(data.get("vertices", ())),
            edges=tuple(tuple(e) for e in data.get("edges", ())),
        )


@dataclass(frozen=True)
class CriticalPair:
    """一个未能汇合的临界对：word 的两种一步约化分别落到 left / right"""
    word: Word
    left: Word
    right: Word


@dataclass(frozen=True)
class GroupPresentation:
    """以重写系统给出的群

    symbols 的顺序就是 shortlex 的字母序；inverses[i] 是 symbols[i] 的形式逆。
    """

    symbols: Tuple[str, ...]
    inverses: Tuple[str, ...]
    rules: Tuple[Tuple[Word, Word], ...] = ()
    confluence_declared: bool = False
    builtin: Optional[BuiltinTag] = None
    rewrite_budget: int = DEFAULT_REWRITE_BUDGET
    engine: NormalFormEngine = NormalFormEngine.REWRITING
    commuting: Tuple[Tuple[str, str], ...] = ()  # 可交换的生成元对（trace 引擎）
    name: str = ""

    # 构造期派生的缓存，不参与比较
    confluence_verified: Optional[bool] = field(default=None, compare=False)
    _rank: Dict[str, int] = field(init=False, repr=False, compare=False)
    _inverse: Dict[str, str] = field(init=False, repr=False, compare=False)
    _generator: Dict[str, str] = field(init=False, repr=False, compare=False)
    _commute: FrozenSet[FrozenSet[str]] = field(init=False, repr=False, compare=False)
    _table: Dict[str, str] = field(init=False, repr=False, compare=False)
    _pattern: Optional["re.Pattern[str]"] = field(init=False, repr=False, compare=False)
    _max_lhs: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.symbols) != len(self.inverses):
            raise MalformedInputError("symbols 与 inverses 长度不一致")
        if len(set(self.symbols)) != len(self.symbols):
            raise MalformedInputError("字母表中有重复符号")
        for s in self.symbols:
            if len(s) != 1:
                raise MalformedInputError(f"符号必须是单个字符: {s!r}")
        rank = {s: i for i, s in enumerate(self.symbols)}
        inverse = dict(zip(self.symbols, self.inverses))
        for s, t in inverse.items():
            if t not in rank:
                raise MalformedInputError(f"{s} 的逆 {t!r} 不在字母表中")
            if inverse[t] != s:
                raise MalformedInputError(f"逆映射不是对合: {s} -> {t} -> {inverse[t]}")
        # 生成元代表：{x, x⁻¹} 中序更小的那个
        generator = {s: min(s, inverse[s], key=rank.__getitem__) for s in self.symbols}
        commute = frozenset(frozenset((generator[u], generator[v])) for u, v in self.commuting)

        table: Dict[str, str] = {}
        for lhs, rhs in self.rules:
            if not lhs:
                raise MalformedInputError("规则左侧不能为空")
            for c in lhs + rhs:
                if c not in rank:
                    raise MalformedInputError(f"规则 {lhs} -> {rhs} 含有字母表之外的符号 {c!r}")
            if not self._shortlex_less(rhs, lhs, rank):
                raise MalformedInputError(f"规则 {lhs} -> {rhs} 没有严格降低 shortlex 序（无法保证终止）")
            if lhs in table and table[lhs] != rhs:
                raise MalformedInputError(f"左侧 {lhs} 对应多个右侧")
            table[lhs] = rhs

        pattern = None
        if table:
            ordered = sorted(table, key=lambda w: (-len(w), self._shortlex_key(w, rank)))
            pattern = re.compile("|".join(re.escape(w) for w in ordered))

        object.__setattr__(self, "_rank", rank)
        object.__setattr__(self, "_inverse", inverse)
        object.__setattr__(self, "_generator", generator)
        object.__setattr__(self, "_commute", commute)
        object.__setattr__(self, "_table", table)
        object.__setattr__(self, "_pattern", pattern)
        object.__setattr__(self, "_max_lhs", max((len(w) for w in table), default=0))

    # ------------------------------------------------------------------
    # 序
    # ------------------------------------------------------------------
    @staticmethod
    def _shortlex_key(w: Word, rank: Dict[str, int]) -> Tuple[int, Tuple[int, ...]]:
        return (len(w), tuple(rank[c] for c in w))

    @classmethod
    def _shortlex_less(cls, u: Word, v: Word, rank: Dict[str, int]) -> bool:
        return cls._shortlex_key(u, rank) < cls._shortlex_key(v, rank)

    def shortlex_key(self, w: Word) -> Tuple[int, Tuple[int, ...]]:
        return self._shortlex_key(w, self._rank)

    @property
    def generators(self) -> Tuple[str, ...]:
        """每对 {x, x⁻¹} 的代表，按字母表顺序"""
        seen: List[str] = []
        for s in self.symbols:
            g = self._generator[s]
            if g not in seen:
                seen.append(g)
        return tuple(seen)

    @property
    def display_name(self) -> str:
        if self.name:
            return self.name
        if self.builtin is not None:
            return self.builtin.describe()
        return "Presentation(" + "".join(self.symbols) + ")"

    def inverse_symbol(self, s: str) -> str:
        try:
            return self._inverse[s]
        except KeyError:
            raise MalformedInputError(f"符号 {s!r} 不在字母表 {''.join(self.symbols)} 中") from None

    def commutes(self, x: str, y: str) -> bool:
        gx, gy = self._generator[x], self._generator[y]
        return gx == gy or frozenset((gx, gy)) in self._commute

    # ------------------------------------------------------------------
    # 正规形式与群运算
    # ------------------------------------------------------------------
    def check_word(self, w: Word) -> None:
        for c in w:
            if c not in self._rank:
                raise MalformedInputError(f"符号 {c!r} 不在字母表 {''.join(self.symbols)} 中")

    def normal_form(self, w: Word, budget: Optional[int] = None) -> Word:
        self.check_word(w)
        budget = self.rewrite_budget if budget is None else budget
        if self.engine is NormalFormEngine.TRACE:
            return self._trace_normal_form(w, budget)
        return self._rewrite(w, budget)

    def _rewrite(self, w: Word, budget: int) -> Word:
        if self._pattern is None:
            return w
        steps = 0
        pos = 0
        while True:
            m = self._pattern.search(w, pos)
            if m is None:
                return w
            steps += 1
            if steps > budget:
                raise DivergenceError(f"重写步数超过预算 {budget}（词长 {len(w)}）", budget=budget)
            start = m.start()
            w = w[:start] + self._table[m.group(0)] + w[m.end():]
            # 新的匹配只可能与替换位置重叠
            pos = max(0, start - self._max_lhs + 1)

    def _trace_normal_form(self, w: Word, budget: int) -> Word:
        letters = list(w)
        steps = 0
        # 消去 x ... x⁻¹（中间的字母都与 x 交换）
        changed = True
        while changed:
            changed = False
            for i, x in enumerate(letters):
                x_inv = self._inverse[x]
                for j in range(i + 1, len(letters)):
                    y = letters[j]
                    if y == x_inv:
                        del letters[j]
                        del letters[i]
                        changed = True
                        break
                    if not self.commutes(x, y):
                        break
                if changed:
                    steps += 1
                    if steps > budget:
                        raise DivergenceError(f"消去步数超过预算 {budget}", budget=budget)
                    break
        # 交换类中字典序最小的代表：每次取能移到最前面的最小字母
        out: List[str] = []
        rest = letters
        while rest:
            best = -1
            for j, c in enumerate(rest):
                if best >= 0 and self._rank[c] >= self._rank[rest[best]]:
                    continue
                if all(self.commutes(c, rest[k]) for k in range(j)):
                    best = j
            out.append(rest.pop(best))
        return "".join(out)

    def is_irreducible(self, w: Word) -> bool:
        return self.normal_form(w) == w

    def multiply(self, g: GroupElement, h: GroupElement) -> GroupElement:
        return self.normal_form(g + h)

    def invert(self, g: GroupElement) -> GroupElement:
        return self.normal_form("".join(self.inverse_symbol(c) for c in reversed(g)))

    def power(self, g: GroupElement, k: int) -> GroupElement:
        if k < 0:
            g, k = self.invert(g), -k
        result = ""
        for _ in range(k):
            result = self.multiply(result, g)
        return result

    def parse_word(self, text: str) -> Word:
        """解析 ``a b⁻¹ c`` / ``ab^-1c`` / ``abC`` 之类的写法；``1`` 与空串表示单位元"""
        compact = "".join(text.split())
        if compact in ("", "1", "e", "ε"):
            return ""
        out: List[str] = []
        i = 0
        while i < len(compact):
            c = compact[i]
            self.check_word(c)
            i += 1
            if compact.startswith("⁻¹", i):
                out.append(self.inverse_symbol(c))
                i += 2
            elif compact.startswith("^-1", i):
                out.append(self.inverse_symbol(c))
                i += 3
            else:
                out.append(c)
        return "".join(out)

    def element(self, text: str) -> GroupElement:
        return self.normal_form(self.parse_word(text))

    # ------------------------------------------------------------------
    # 序列化
    # ------------------------------------------------------------------
    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "symbols": list(self.symbols),
            "inverses": list(self.inverses),
            "rules": [[lhs, rhs] for lhs, rhs in self.rules],
            "confluence_declared": self.confluence_declared,
            "builtin": self.builtin.to_dict() if self.builtin else None,
            "rewrite_budget": self.rewrite_budget,
            "engine": self.engine.value,
            "commuting": [list(p) for p in self.commuting],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GroupPresentation":
        builtin = data.get("builtin")
        if builtin:
            tag = BuiltinTag.from_dict(builtin)
            return builtin_presentation(tag, rewrite_budget=int(data.get("rewrite_budget", DEFAULT_REWRITE_BUDGET)))
        return cls(
            symbols=tuple(data["symbols"]),
            inverses=tuple(data["inverses"]),
            rules=tuple((str(lhs), str(rhs)) for lhs, rhs in data.get("rules", ())),
            confluence_declared=bool(data.get("confluence_declared", False)),
            rewrite_budget=int(data.get("rewrite_budget", DEFAULT_REWRITE_BUDGET)),
            engine=NormalFormEngine(data.get("engine", "rewriting")),
            commuting=tuple(tuple(p) for p in data.get("commuting", ())),
            name=str(data.get("name", "")),
        )


# ----------------------------------------------------------------------
# 模块级操作
# ----------------------------------------------------------------------
def normal_form(p: GroupPresentation, w: Word) -> Word:
    return p.normal_form(w)


def multiply(p: GroupPresentation, g: GroupElement, h: GroupElement) -> GroupElement:
    return p.multiply(g, h)


def invert(p: GroupPresentation, g: GroupElement) -> GroupElement:
    return p.invert(g)


def power(p: GroupPresentation, g: GroupElement, k: int) -> GroupElement:
    return p.power(g, k)


def parse_word(p: GroupPresentation, text: str) -> Word:
    return p.parse_word(text)


def element(p: GroupPresentation, text: str) -> GroupElement:
    return p.element(text)


def check_local_confluence(p: GroupPresentation) -> List[CriticalPair]:
    """枚举重叠与包含两类临界对，只用规则表本身重写，返回无法汇合的那些"""
    failures: List[CriticalPair] = []
    seen = set()

    def _check(word: Word, a: Word, b: Word) -> None:
        key = (word, a, b)
        if key in seen:
            return
        seen.add(key)
        na, nb = p._rewrite(a, p.rewrite_budget), p._rewrite(b, p.rewrite_budget)
        if na != nb:
            failures.append(CriticalPair(word=word, left=na, right=nb))

    for l1, r1 in p.rules:
        for l2, r2 in p.rules:
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    _check(l1 + l2[k:], r1 + l2[k:], l1[:-k] + r2)
            if l1 != l2:
                start = l1.find(l2)
                while start != -1:
                    _check(l1, r1, l1[:start] + r2 + l1[start + len(l2):])
                    start = l1.find(l2, start + 1)
    return failures


# ----------------------------------------------------------------------
# 内置群
# ----------------------------------------------------------------------
def _paired_alphabet(letters: Sequence[str]) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """x⁻¹ 用大写表示，排在 x 之前（与整数 -1 < 1 的顺序一致）"""
    symbols: List[str] = []
    inverses: List[str] = []
    for x in letters:
        symbols.extend([x.upper(), x])
        inverses.extend([x, x.upper()])
    return tuple(symbols), tuple(inverses)


def _free_cancellation(symbols: Sequence[str], inverses: Sequence[str]) -> List[Tuple[str, str]]:
    return [(s + t, "") for s, t in zip(symbols, inverses)]


def _commutation_rules(
    symbols: Sequence[str], inverses: Sequence[str], pairs: Iterable[Tuple[str, str]]
) -> List[Tuple[str, str]]:
    """对每对可交换生成元 x < y，把 y 侧字母移到 x 侧字母之后"""
    rank = {s: i for i, s in enumerate(symbols)}
    inv = dict(zip(symbols, inverses))
    rules: List[Tuple[str, str]] = []
    for u, v in pairs:
        x, y = sorted((u, v), key=rank.__getitem__)
        for s in sorted({y, inv[y]}, key=rank.__getitem__):
            for t in sorted({x, inv[x]}, key=rank.__getitem__):
                rules.append((s + t, t + s))
    return rules


def _verify_builtin(p: GroupPresentation) -> GroupPresentation:
    pairs = check_local_confluence(p)
    object.__setattr__(p, "confluence_verified", not pairs)
    if pairs and p.engine is NormalFormEngine.TRACE:
        # 规则表只用于声明；字问题由迹正规形判定
        logger.info(
            "%s 的重写规则有 %d 个未汇合的临界对，例如 %s；正规形式改由迹正规形给出",
            p.display_name, len(pairs), pairs[0].word,
        )
        return p
    if pairs and p.builtin is not None and p.builtin.kind is not BuiltinKind.SURFACE_GENUS2:
        raise CubulateError(
            f"内置群 {p.display_name} 存在 {len(pairs)} 个无法汇合的临界对，例如 {pairs[0].word}",
            module="group-core",
        )
    if pairs:
        logger.warning(
            "%s 的重写系统有 %d 个未汇合的临界对；半径 ≤ 3 的球是精确的，更大的球可能重复计数元素",
            p.display_name, len(pairs),
        )
    return p


@lru_cache(maxsize=None)
def free_group(rank: int, rewrite_budget: int = DEFAULT_REWRITE_BUDGET) -> GroupPresentation:
    if not 0 <= rank <= len(LETTERS):
        raise MalformedInputError(f"秩必须在 0..{len(LETTERS)} 之间: {rank}")
    symbols, inverses = _paired_alphabet(LETTERS[:rank])
    p = GroupPresentation(
        symbols=symbols,
        inverses=inverses,
        rules=tuple(_free_cancellation(symbols, inverses)),
        confluence_declared=True,
        builtin=BuiltinTag(BuiltinKind.FREE_GROUP, rank=rank),
        rewrite_budget=rewrite_budget,
    )
    return _verify_builtin(p)


@lru_cache(maxsize=None)
def free_abelian(rank: int, rewrite_budget: int = DEFAULT_REWRITE_BUDGET) -> GroupPresentation:
    if not 0 <= rank <= len(LETTERS):
        raise MalformedInputError(f"秩必须在 0..{len(LETTERS)} 之间: {rank}")
    letters = LETTERS[:rank]
    symbols, inverses = _paired_alphabet(letters)
    pairs = [(x, y) for i, x in enumerate(letters) for y in letters[i + 1:]]
    rules = _free_cancellation(symbols, inverses) + _commutation_rules(symbols, inverses, pairs)
    p = GroupPresentation(
        symbols=symbols,
        inverses=inverses,
        rules=tuple(rules),
        confluence_declared=True,
        builtin=BuiltinTag(BuiltinKind.FREE_ABELIAN, rank=rank),
        rewrite_budget=rewrite_budget,
    )
    return _verify_builtin(p)


def _invert_raw(w: Word, inverse: Dict[str, str]) -> Word:
    return "".join(inverse[c] for c in reversed(w))


@lru_cache(maxsize=None)
def surface_genus2(rewrite_budget: int = DEFAULT_REWRITE_BUDGET) -> GroupPresentation:
    """亏格 2 闭曲面群 ⟨a,b,c,d | [a,b][c,d]⟩

    规则：自由消去；关系子（及其逆）循环共轭中长度 ≥ 5 的片段替换为剩余部分的逆（Dehn 规则）；
    长度恰为 4 的两半按 shortlex 定向。
    """
    symbols, inverses = _paired_alphabet("abcd")
    inverse = dict(zip(symbols, inverses))
    rank = {s: i for i, s in enumerate(symbols)}
    relator_inv = _invert_raw(GENUS2_RELATOR, inverse)
    conjugates = []
    for base in (GENUS2_RELATOR, relator_inv):
        conjugates.extend(base[i:] + base[:i] for i in range(len(base)))

    table: Dict[str, str] = dict(_free_cancellation(symbols, inverses))
    half = len(GENUS2_RELATOR) // 2
    for u in conjugates:
        for k in range(half, len(u) + 1):
            lhs, rest = u[:k], u[k:]
            rhs = _invert_raw(rest, inverse)
            if k == half:
                if GroupPresentation._shortlex_less(lhs, rhs, rank):
                    lhs, rhs = rhs, lhs
            table[lhs] = rhs
    p = GroupPresentation(
        symbols=symbols,
        inverses=inverses,
        rules=tuple(sorted(table.items(), key=lambda kv: GroupPresentation._shortlex_key(kv[0], rank))),
        confluence_declared=False,
        builtin=BuiltinTag(BuiltinKind.SURFACE_GENUS2),
        rewrite_budget=rewrite_budget,
    )
    return _verify_builtin(p)


def _check_graph(vertices: Sequence[str], edges: Sequence[Tuple[str, str]]) -> None:
    for v in vertices:
        if len(v) != 1 or v not in LETTERS:
            raise MalformedInputError(f"直角群的顶点必须是单个小写字母: {v!r}")
    if len(set(vertices)) != len(vertices):
        raise MalformedInputError("直角群的顶点重复")
    for u, v in edges:
        if u not in vertices or v not in vertices or u == v:
            raise MalformedInputError(f"非法的边: {u}-{v}")


@lru_cache(maxsize=None)
def right_angled_artin(
    vertices: Tuple[str, ...],
    edges: Tuple[Tuple[str, str], ...] = (),
    rewrite_budget: int = DEFAULT_REWRITE_BUDGET,
) -> GroupPresentation:
    _check_graph(vertices, edges)
    symbols, inverses = _paired_alphabet(vertices)
    rules = _free_cancellation(symbols, inverses) + _commutation_rules(symbols, inverses, edges)
    p = GroupPresentation(
        symbols=symbols,
        inverses=inverses,
        rules=tuple(rules),
        confluence_declared=True,
        builtin=BuiltinTag(BuiltinKind.RIGHT_ANGLED_ARTIN, vertices=tuple(vertices), edges=tuple(edges)),
        rewrite_budget=rewrite_budget,
        engine=NormalFormEngine.TRACE,
        commuting=tuple(edges),
    )
    return _verify_builtin(p)


@lru_cache(maxsize=None)
def right_angled_coxeter(
    vertices: Tuple[str, ...],
    edges: Tuple[Tuple[str, str], ...] = (),
    rewrite_budget: int = DEFAULT_REWRITE_BUDGET,
) -> GroupPresentation:
    _check_graph(vertices, edges)
    symbols = tuple(vertices)
    rules = _free_cancellation(symbols, symbols) + _commutation_rules(symbols, symbols, edges)
    p = GroupPresentation(
        symbols=symbols,
        inverses=symbols,
        rules=tuple(rules),
        confluence_declared=True,
        builtin=BuiltinTag(BuiltinKind.RIGHT_ANGLED_COXETER, vertices=tuple(vertices), edges=tuple(edges)),
        rewrite_budget=rewrite_budget,
        engine=NormalFormEngine.TRACE,
        commuting=tuple(edges),
    )
    return _verify_builtin(p)


def builtin_presentation(tag: BuiltinTag, rewrite_budget: int = DEFAULT_REWRITE_BUDGET) -> GroupPresentation:
    if tag.kind is BuiltinKind.FREE_GROUP:
        return free_group(tag.rank, rewrite_budget)
    if tag.kind is BuiltinKind.FREE_ABELIAN:
        return free_abelian(tag.rank, rewrite_budget)
    if tag.kind is BuiltinKind.SURFACE_GENUS2:
        return surface_genus2(rewrite_budget)
    edges = tuple(tuple(e) for e in tag.edges)
    if tag.kind is BuiltinKind.RIGHT_ANGLED_ARTIN:
        return right_angled_artin(tuple(tag.vertices), edges, rewrite_budget)
    return right_angled_coxeter(tuple(tag.vertices), edges, rewrite_budget)


# ----------------------------------------------------------------------
# 群描述文件（TOML）
# ----------------------------------------------------------------------
def presentation_from_config(data: Dict[str, Any]) -> GroupPresentation:
    """从群描述文件的字典构造；语法见 docs/formats.md"""
    options = data.get("options", {}) or {}
    budget = int(options.get("rewrite_budget", DEFAULT_REWRITE_BUDGET))
    if budget <= 0:
        raise MalformedInputError("options.rewrite_budget 必须为正整数")

    if "builtin" in data:
        spec = data["builtin"]
        if not isinstance(spec, dict) or "kind" not in spec:
            raise MalformedInputError("[builtin] 段缺少 kind")
        kind = BuiltinKind.from_string(str(spec["kind"]))
        edges = tuple(tuple(e) for e in spec.get("edges", []))
        for e in edges:
            if len(e) != 2:
                raise MalformedInputError(f"边必须是二元组: {list(e)}")
        tag = BuiltinTag(
            kind=kind,
            rank=int(spec.get("rank", 0)),
            vertices=tuple(spec.get("vertices", [])),
            edges=edges,
        )
        return builtin_presentation(tag, budget)

    generators = data.get("generators", {}) or {}
    order = generators.get("order")
    if not isinstance(order, list) or not order:
        raise MalformedInputError("[generators] 段需要非空的 order 列表")
    declared = data.get("inverses", {}) or {}
    inverse: Dict[str, str] = {}
    for s, t in declared.items():
        inverse[str(s)] = str(t)
        inverse[str(t)] = str(s)
    symbols = tuple(str(s) for s in order)
    for s in inverse:
        if s not in symbols:
            raise MalformedInputError(f"[inverses] 中的 {s!r} 不在 generators.order 中")
    inverses = tuple(inverse.get(s, s) for s in symbols)
    pairs = (data.get("rules", {}) or {}).get("pairs", [])
    rules = []
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2:
            raise MalformedInputError(f"规则必须是 [lhs, rhs]: {pair!r}")
        rules.append((str(pair[0]), str(pair[1])))
    return GroupPresentation(
        symbols=symbols,
        inverses=inverses,
        rules=tuple(rules),
        confluence_declared=bool(options.get("confluence_declared", False)),
        rewrite_budget=budget,
        name=str(options.get("name", "")),
    )


def load_presentation(path: Path) -> GroupPresentation:
    path = Path(path)
    if not path.exists():
        raise MalformedInputError(f"群描述文件不存在: {path}")
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = toml.load(f)
    except toml.TomlDecodeError as e:
        raise MalformedInputError(f"群描述文件格式错误: {e}") from None
    return presentation_from_config(data)


def presentation_to_config(p: GroupPresentation) -> Dict[str, Any]:
    """群描述文件的字典形式（fixtures 导出用）"""
    options = {"rewrite_budget": p.rewrite_budget}
    if p.builtin is not None:
        spec: Dict[str, Any] = {"kind": p.builtin.kind.value}
        if p.builtin.kind in (BuiltinKind.FREE_GROUP, BuiltinKind.FREE_ABELIAN):
            spec["rank"] = p.builtin.rank
        if p.builtin.vertices:
            spec["vertices"] = list(p.builtin.vertices)
            spec["edges"] = [list(e) for e in p.builtin.edges]
        return {"builtin": spec, "options": options}
    options["confluence_declared"] = p.confluence_declared
    if p.name:
        options["name"] = p.name
    inverses = {}
    for s, t in zip(p.symbols, p.inverses):
        if s != t and t not in inverses:
            inverses[s] = t
    return {
        "generators": {"order": list(p.symbols)},
        "inverses": inverses,
        "rules": {"pairs": [[lhs, rhs] for lhs, rhs in p.rules]},
        "options": options,
    }


__all__ = [
    "Word",
    "GroupElement",
    "BuiltinKind",
    "BuiltinTag",
    "NormalFormEngine",
    "CriticalPair",
    "GroupPresentation",
    "normal_form",
    "multiply",
    "invert",
    "power",
    "parse_word",
    "element",
    "check_local_confluence",
    "free_group",
    "free_abelian",
    "surface_genus2",
    "right_angled_artin",
    "right_angled_coxeter",
    "builtin_presentation",
    "presentation_from_config",
    "presentation_to_config",
    "load_presentation",
    "DEFAULT_REWRITE_BUDGET",
    "GENUS2_RELATOR",
]
