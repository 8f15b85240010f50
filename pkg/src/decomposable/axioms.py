"""Model checkers for the independence axioms C1-C9'.

Every checker sweeps all instantiations of its axiom's quantified variables
(pairwise-disjoint sets, distinct single vertices) and records each
instantiation where the premises hold but the conclusion fails.  Sweeps are
deterministic, so reports are reproducible byte for byte.

"Complete" in C8/C9/C9' means pairwise adjacent in the model's own sense:
``g`` and ``d`` are adjacent when ``not I(g, d | U - {g, d})``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Iterable

from .errors import CapExceededError
from .graph import all_subsets, full_mask, iter_bits
from .model import DependencyModel, as_lookup

AXIOM_CAP = 7
MAX_REPORTED = 100


@dataclass(frozen=True)
class AxiomViolation:
    """One failing instantiation.  Set-valued bindings are sorted vertex lists."""

    axiom: str
    bindings: dict
    detail: str

    def to_dict(self) -> dict:
        return {"bindings": self.bindings, "detail": self.detail}


@dataclass
class AxiomReport:
    axiom: str
    title: str
    holds: bool
    violations: list[AxiomViolation] = field(default_factory=list)
    violation_count: int = 0
    instances_checked: int = 0

    def to_dict(self) -> dict:
        return {
            "axiom": self.axiom,
            "title": self.title,
            "holds": self.holds,
            "violations": [v.to_dict() for v in self.violations],
            "violation_count": self.violation_count,
            "instances_checked": self.instances_checked,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass
class AxiomSuiteReport:
    """Reports for several axioms on one model, in checking order."""

    n: int
    reports: dict[str, AxiomReport]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.reports.values())

    def __getitem__(self, name: str) -> AxiomReport:
        return self.reports[name]

    def failing(self) -> list[str]:
        return [k for k, r in self.reports.items() if not r.holds]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "holds": self.holds,
            "axioms": [r.to_dict() for r in self.reports.values()],
        }

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


class _Context:
    """Per-sweep state: the lookup function plus the model's own adjacency."""

    def __init__(self, q, n):
        self.q = q
        self.n = n
        self.full = full_mask(n)
        self._madj = None

    @property
    def madj(self) -> list[int]:
        if self._madj is None:
            q, full = self.q, self.full
            adj = [0] * self.n
            for a in range(self.n):
                for b in range(self.n):
                    if a != b and not q(1 << a, 1 << b, full & ~(1 << a | 1 << b)):
                        adj[a] |= 1 << b
            self._madj = adj
        return self._madj

    def complete(self, w: int) -> bool:
        # |W| <= 1 passes trivially; ordered pairs, since C1 is not assumed
        madj = self.madj
        for v in iter_bits(w):
            if w & ~(1 << v) & ~madj[v]:
                return False
        return True


@dataclass(frozen=True)
class _Axiom:
    name: str
    title: str
    roles: tuple[str, ...]
    set_roles: frozenset
    instances: Callable[[int], tuple]
    evaluate: Callable[[Callable, _Context, tuple], str | None]

    def bindings(self, inst: tuple) -> dict:
        return {
            role: list(iter_bits(val)) if role in self.set_roles else val
            for role, val in zip(self.roles, inst)
        }

    def unbind(self, bindings: dict) -> tuple:
        out = []
        for role in self.roles:
            val = bindings[role]
            if role in self.set_roles:
                mask = 0
                for v in val:
                    mask |= 1 << v
                out.append(mask)
            else:
                out.append(int(val))
        return tuple(out)


# -- instantiation spaces ----------------------------------------------------


@lru_cache(maxsize=None)
def _disjoint_sets(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All k-tuples of pairwise-disjoint masks (each vertex in one set or none)."""
    out = []
    for labels in product(range(k + 1), repeat=n):
        sets = [0] * (k + 1)
        for v, lab in enumerate(labels):
            sets[lab] |= 1 << v
        out.append(tuple(sets[1:]))
    return tuple(out)


@lru_cache(maxsize=None)
def _c1_instances(n):
    return tuple((x, y, z) for x, y, z in _disjoint_sets(n, 3) if x and y)


@lru_cache(maxsize=None)
def _xywz_instances(n):
    # an empty x, y or w makes C2-C4 hold trivially
    return tuple((x, y, w, z) for x, y, w, z in _disjoint_sets(n, 4) if x and y and w)


@lru_cache(maxsize=None)
def _c5_instances(n):
    full = full_mask(n)
    return tuple(
        (x, y, z, g)
        for x, y, z in _disjoint_sets(n, 3)
        if x and y
        for g in iter_bits(full & ~(x | y | z))
    )


@lru_cache(maxsize=None)
def _quad_instances(n, with_z):
    full = full_mask(n)
    out = []
    for a, b, g, d in permutations(range(n), 4):
        if with_z:
            rest = full & ~(1 << a | 1 << b | 1 << g | 1 << d)
            out.extend((a, b, g, d, z) for z in all_subsets(rest))
        else:
            out.append((a, b, g, d))
    return tuple(out)


@lru_cache(maxsize=None)
def _pair_instances(n):
    return tuple(permutations(range(n), 2))


@lru_cache(maxsize=None)
def _pair_set_instances(n):
    full = full_mask(n)
    return tuple(
        (a, b, z) for a, b in permutations(range(n), 2) for z in all_subsets(full & ~(1 << a | 1 << b))
    )


# -- clause evaluation ---------------------------------------------------------


def _eval_c1(q, ctx, inst):
    x, y, z = inst
    if q(x, y, z) and not q(y, x, z):
        return "I(X,Y|Z) holds but I(Y,X|Z) fails"
    return None


def _eval_c2(q, ctx, inst):
    x, y, w, z = inst
    if q(x, y | w, z) and not q(x, y, z):
        return "I(X,Y+W|Z) holds but I(X,Y|Z) fails"
    return None


def _eval_c3(q, ctx, inst):
    x, y, w, z = inst
    if q(x, y, z) and not q(x, y, z | w):
        return "I(X,Y|Z) holds but I(X,Y|Z+W) fails"
    return None


def _eval_c4(q, ctx, inst):
    x, y, w, z = inst
    if q(x, y, z | w) and q(x, w, z | y) and not q(x, y | w, z):
        return "I(X,Y|Z+W) and I(X,W|Z+Y) hold but I(X,Y+W|Z) fails"
    return None


def _eval_c5(q, ctx, inst):
    x, y, z, g = inst
    gm = 1 << g
    if q(x, y, z) and not q(x, gm, z) and not q(gm, y, z):
        return "I(X,Y|Z) holds but both I(X,g|Z) and I(g,Y|Z) fail"
    return None


def _eval_c6(q, ctx, inst):
    a, b, g, d, z = inst
    am, bm, gm, dm = 1 << a, 1 << b, 1 << g, 1 << d
    if (
        q(am, bm, z | gm | dm)
        and q(gm, dm, ctx.full & ~(gm | dm))
        and not q(am, bm, z | gm)
        and not q(am, bm, z | dm)
    ):
        return "I(a,b|Z+g+d) and I(g,d|rest) hold but I(a,b|Z+g) and I(a,b|Z+d) both fail"
    return None


def _eval_c7(q, ctx, inst):
    a, b, g, d = inst
    am, bm, gm, dm = 1 << a, 1 << b, 1 << g, 1 << d
    if q(am, bm, gm | dm) and q(gm, dm, am | bm) and not q(am, bm, gm) and not q(am, bm, dm):
        return "I(a,b|g+d) and I(g,d|a+b) hold but I(a,b|g) and I(a,b|d) both fail"
    return None


def _eval_c8(q, ctx, inst):
    a, b = inst
    am, bm = 1 << a, 1 << b
    rest = ctx.full & ~(am | bm)
    if not q(am, bm, rest):
        return None
    for w in all_subsets(rest):
        if q(am, bm, w) and (w.bit_count() <= 1 or ctx.complete(w)):
            return None
    return "I(a,b|rest) holds but no complete W (or |W|<=1) gives I(a,b|W)"


def _eval_c9(q, ctx, inst):
    a, b, z = inst
    if z.bit_count() <= 1:
        return None
    am, bm = 1 << a, 1 << b
    if not q(am, bm, z):
        return None
    for s in all_subsets(z):
        if s != z and q(am, bm, s):
            return None
    if ctx.complete(z):
        return None
    return "Z is a minimal separator of a and b but is not complete"


def _eval_c9p(q, ctx, inst):
    a, b, g, d, z = inst
    am, bm, gm, dm = 1 << a, 1 << b, 1 << g, 1 << d
    sep = z | gm | dm
    if not (q(am, bm, sep) and q(gm, dm, ctx.full & ~(gm | dm))):
        return None
    for w in all_subsets(sep):
        if w != sep and q(am, bm, w):
            return None
    return "I(a,b|Z+g+d) and I(g,d|rest) hold but no proper subset of Z+g+d separates a and b"


_QUAD = ("alpha", "beta", "gamma", "delta")

AXIOMS: dict[str, _Axiom] = {
    a.name: a
    for a in [
        _Axiom("C1", "symmetry", ("x", "y", "z"), frozenset("xyz"), _c1_instances, _eval_c1),
        _Axiom(
            "C2", "decomposition", ("x", "y", "w", "z"), frozenset("xywz"),
            _xywz_instances, _eval_c2,
        ),
        _Axiom(
            "C3", "strong union", ("x", "y", "w", "z"), frozenset("xywz"),
            _xywz_instances, _eval_c3,
        ),
        _Axiom(
            "C4", "intersection", ("x", "y", "w", "z"), frozenset("xywz"),
            _xywz_instances, _eval_c4,
        ),
        _Axiom("C5", "transitivity", ("x", "y", "z", "gamma"), frozenset("xyz"), _c5_instances, _eval_c5),
        _Axiom(
            "C6", "strong chordality", _QUAD + ("z",), frozenset("z"),
            lambda n: _quad_instances(n, True), _eval_c6,
        ),
        _Axiom("C7", "chordality", _QUAD, frozenset(), lambda n: _quad_instances(n, False), _eval_c7),
        _Axiom("C8", "clique-separability", ("alpha", "beta"), frozenset(), _pair_instances, _eval_c8),
        _Axiom("C9", "completeness", ("alpha", "beta", "z"), frozenset("z"), _pair_set_instances, _eval_c9),
        _Axiom(
            "C9'", "completeness (separator form)", _QUAD + ("z",), frozenset("z"),
            lambda n: _quad_instances(n, True), _eval_c9p,
        ),
    ]
}

AXIOM_NAMES = tuple(AXIOMS)


def normalize_axiom_name(name: str) -> str:
    key = name.strip().upper().replace("PRIME", "'").replace("P", "'")
    if key not in AXIOMS:
        raise ValueError(f"unknown axiom {name!r}; choose from {', '.join(AXIOM_NAMES)}")
    return key


def _prepare(m: DependencyModel):
    if m.n > AXIOM_CAP:
        raise CapExceededError("axiom check", m.n, AXIOM_CAP)
    q = as_lookup(m)
    return q, _Context(q, m.n)


def check_axiom(m: DependencyModel, name: str, *, _prepared=None) -> AxiomReport:
    """Sweep every instantiation of axiom ``name`` over model ``m`` (``n <= 7``)."""
    ax = AXIOMS[normalize_axiom_name(name)]
    q, ctx = _prepared or _prepare(m)
    evaluate = ax.evaluate
    violations = []
    count = 0
    instances = ax.instances(m.n)
    for inst in instances:
        detail = evaluate(q, ctx, inst)
        if detail is not None:
            count += 1
            if len(violations) < MAX_REPORTED:
                violations.append(AxiomViolation(ax.name, ax.bindings(inst), detail))
    return AxiomReport(ax.name, ax.title, count == 0, violations, count, len(instances))


def check_symmetry(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C1")


def check_decomposition(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C2")


def check_strong_union(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C3")


def check_intersection(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C4")


def check_transitivity(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C5")


def check_strong_chordality(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C6")


def check_chordality_c7(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C7")


def check_clique_separability(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C8")


def check_completeness_c9(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C9")


def check_c9prime(m: DependencyModel) -> AxiomReport:
    return check_axiom(m, "C9'")


def check_all(m: DependencyModel, axioms: Iterable[str] | None = None) -> AxiomSuiteReport:
    """Run the selected checkers (default: all of C1-C9') sharing one lookup cache."""
    names = [normalize_axiom_name(a) for a in axioms] if axioms is not None else list(AXIOM_NAMES)
    prepared = _prepare(m)
    return AxiomSuiteReport(m.n, {name: check_axiom(m, name, _prepared=prepared) for name in names})


def holds(m: DependencyModel, name: str, *, _prepared=None) -> bool:
    """Verdict only: stops at the first violation."""
    ax = AXIOMS[normalize_axiom_name(name)]
    q, ctx = _prepared or _prepare(m)
    evaluate = ax.evaluate
    for inst in ax.instances(m.n):
        if evaluate(q, ctx, inst) is not None:
            return False
    return True


def replay(m: DependencyModel, violation: AxiomViolation) -> bool:
    """Re-query ``m`` directly at the violation's bindings; True if it still fails."""
    ax = AXIOMS[violation.axiom]
    inst = ax.unbind(violation.bindings)
    q = lambda x, y, z: True if not x or not y else bool(m.query_mask(x, y, z))  # noqa: E731
    return ax.evaluate(q, _Context(q, m.n), inst) is not None
