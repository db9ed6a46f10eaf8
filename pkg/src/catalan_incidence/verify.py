"""Batch verification of every structural property at a given degree.

Each check iterates *items*, runs them, and records how many elementary
cases passed or failed.  The first failure is kept as a JSON counterexample
that :func:`replay` (and ``catalan-incidence verify --replay``) re-runs as a
single case.

Exhaustive mode walks everything that is affordable; a handful of cubic
checks fall back to seeded sampling past a fixed size and say so in their
``sampled`` flag.  Randomized mode draws monoid elements uniformly.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator

from . import algebra, iso
from .algebra import AlgebraElement, basis_element, incidence_identity
from .bounds import DEFAULT_EXHAUSTIVE_DEGREE, max_degree, require_degree
from .catalan import (
    CMap,
    compose,
    enumerate_monoid,
    from_pair,
    identity,
    image_of_set,
    is_pcs,
    pcs,
    random_cmap,
    to_pair,
)
from .errors import ValidationError
from .posets import PosetPair, Subset, all_subsets, enumerate_pairs, leq, linext_key, pair_key, preceq
from .rings import MOD_KIND, RATIONALS_KIND, RingSpec

CUBIC_LIMIT = 200_000
SAMPLED_TRIPLES = 10_000
ENUMERATE_FOR_SAMPLING = 10


def catalan_number(k: int) -> int:
    """Catalan numbers by the convolution recurrence ``C_{k+1} = sum C_i C_{k-i}``."""
    c = [1]
    for m in range(1, k + 1):
        c.append(sum(c[i] * c[m - 1 - i] for i in range(m)))
    return c[k]


def flipped_incidence_product(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """A deliberately wrong product, ``(U,V)(X,Y) = (X,V)`` iff ``X == V``.

    Used to prove that the harness can fail.
    """
    ring = a.ring
    out: dict = {}
    for p, c in a.terms.items():
        for q, d in b.terms.items():
            if q.X == p.Y:
                key = PosetPair(q.X, p.Y)
                cd = ring.mul(c, d)
                out[key] = ring.add(out[key], cd) if key in out else cd
    return AlgebraElement._normalized(ring, a.basis, out)


MUTATIONS = {"flip-incidence": flipped_incidence_product}


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: int = 0
    counterexample: dict | None = None
    wall_time: float = 0.0
    sampled: bool = False

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "counterexample": self.counterexample,
            "sampled": self.sampled,
        }
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


@dataclass
class VerifyReport:
    n_plus_1: int
    ring: RingSpec
    mode: str
    seed: int
    samples: int | None
    sampling: str
    checks: list[CheckResult] = field(default_factory=list)
    mutation: str | None = None

    @property
    def passed(self) -> bool:
        return all(c.failures == 0 for c in self.checks)

    def first_counterexample(self) -> dict | None:
        for c in self.checks:
            if c.counterexample is not None:
                return c.counterexample
        return None

    def to_json(self, timing: bool = True) -> dict:
        out = {
            "n": self.n_plus_1,
            "ring": str(self.ring),
            "mode": self.mode,
            "seed": self.seed,
            "samples": self.samples,
            "sampling": self.sampling,
            "checks": [c.to_json(timing) for c in self.checks],
            "pass": self.passed,
        }
        if self.mutation:
            out["mutation"] = self.mutation
        return out


# -- serialization of case inputs -------------------------------------------
# key conventions: f, g, h are maps; S, T, X, Y, Z subsets of [n];
# p, q, r pairs; a, b, c ring values; u, v, w algebra elements.

_MAPS, _SUBSETS, _PAIRS, _SCALARS, _ELEMENTS = "fgh", "STXYZ", "pqr", "abc", "uvw"


def _dump_value(name: str, value, ring: RingSpec):
    if name in _MAPS or name in _SUBSETS or name in _PAIRS or name in _ELEMENTS:
        return value.to_json()
    if name in _SCALARS:
        return ring.format(value)
    raise KeyError(name)


def _load_value(name: str, data, n: int, ring: RingSpec):
    if name in _MAPS:
        f = CMap.from_json(data)
        if f.degree != n + 1:
            raise ValidationError(f"map {f} has degree {f.degree}, expected {n + 1}")
        return f
    if name in _SUBSETS:
        return Subset.from_json(n, data)
    if name in _PAIRS:
        return PosetPair.from_json(n, data)
    if name in _SCALARS:
        return ring.coerce(data)
    if name in _ELEMENTS:
        return AlgebraElement.from_json(data)
    raise ValidationError(f"unknown counterexample field {name!r}")


class _Context:
    """Caches shared by the checks of one run."""

    def __init__(self, degree: int, ring: RingSpec, incidence_product: Callable, seed: int):
        self.degree = degree
        self.n = degree - 1
        self.ring = ring
        self.incidence_product = incidence_product
        self.seed = seed
        self._phi: dict[CMap, AlgebraElement] = {}
        self._pcs_masks: dict[CMap, frozenset[int]] = {}
        self._images: dict[CMap, list[int]] = {}

    def rng(self, salt: str) -> random.Random:
        return random.Random(f"{self.seed}:{salt}")

    def phi(self, f: CMap) -> AlgebraElement:
        e = self._phi.get(f)
        if e is None:
            e = self._phi[f] = iso.phi_basis(f, self.ring)
        return e

    def pcs_masks(self, f: CMap) -> frozenset[int]:
        s = self._pcs_masks.get(f)
        if s is None:
            s = self._pcs_masks[f] = frozenset(S.mask for S in pcs(f))
        return s

    def images(self, f: CMap) -> list[int]:
        t = self._images.get(f)
        if t is None:
            t = self._images[f] = [image_of_set(f, Subset(self.n, m)).mask for m in range(1 << self.n)]
        return t


# -- single-case predicates (also used by replay) ----------------------------


def _ring_laws(ctx, a, b, c) -> bool:
    r = ctx.ring
    return (
        r.add(r.add(a, b), c) == r.add(a, r.add(b, c))
        and r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c))
        and r.add(a, b) == r.add(b, a)
        and r.mul(a, b) == r.mul(b, a)
        and r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c))
        and r.add(a, r.zero) == a
        and r.mul(a, r.one) == a
        and r.add(a, r.neg(a)) == r.zero
    )


def _monoid_cardinality(ctx) -> bool:
    return len(enumerate_monoid(ctx.degree, bound=ctx.degree)) == catalan_number(ctx.degree)


def _closure(ctx, f, g) -> bool:
    try:
        CMap(compose(f, g).images)
    except ValidationError:
        return False
    return True


def _associativity(ctx, f, g, h) -> bool:
    return compose(compose(f, g), h) == compose(f, compose(g, h))


def _bijection_map(ctx, f) -> bool:
    X, Y = to_pair(f)
    return leq(X, Y) and from_pair(X, Y, ctx.n) == f


def _bijection_pair(ctx, p) -> bool:
    return to_pair(from_pair(p.X, p.Y, ctx.n)) == (p.X, p.Y)


def _pair_count(ctx) -> bool:
    n = ctx.n
    return len(enumerate_pairs(n, bound=ctx.degree)) == len(enumerate_monoid(n + 1, bound=ctx.degree))


def _order_axioms(ctx, X, Y, Z) -> bool:
    for rel in (leq, preceq):
        if not rel(X, X):
            return False
        if rel(X, Y) and rel(Y, X) and X != Y:
            return False
        if rel(X, Y) and rel(Y, Z) and not rel(X, Z):
            return False
    return not leq(X, Y) or preceq(X, Y)


def _linext_sound(ctx, X, Y) -> bool:
    return X == Y or not preceq(X, Y) or linext_key(X) < linext_key(Y)


def _pair_order_sound(ctx, p, q) -> bool:
    if p == q or not (preceq(p.X, q.X) and preceq(p.Y, q.Y)):
        return True
    return pair_key(p) < pair_key(q)


def _proposition(ctx, f, S) -> bool:
    X, Y = to_pair(f)
    if not is_pcs(f, S):
        return True
    fS = image_of_set(f, S)
    return (
        preceq(S, X)
        and fS.n == ctx.n
        and leq(S, fS)
        and fS.issubset(Y)
        and preceq(fS, Y)
        and is_pcs(f, X)
    )


def _lemma(ctx, f, g, S) -> bool:
    left = is_pcs(compose(f, g), S)
    gS = image_of_set(g, S)
    right = is_pcs(g, S) and gS.n == ctx.n and is_pcs(f, gS)
    return left == right


def _homomorphism(ctx, f, g) -> bool:
    return ctx.phi(compose(f, g)) == ctx.incidence_product(ctx.phi(f), ctx.phi(g))


def _triangularity(ctx, f) -> bool:
    X, Y = to_pair(f)
    e = ctx.phi(f)
    lead = PosetPair(X, Y)
    if e.coefficient(lead) != ctx.ring.one:
        return False
    for p, c in e.terms.items():
        if p == lead:
            continue
        if c != ctx.ring.one or p.X == X or not preceq(p.X, X) or not preceq(p.Y, Y):
            return False
    return True


def _unit(ctx) -> bool:
    return ctx.phi(identity(ctx.degree)) == incidence_identity(ctx.n, ctx.ring)


def _roundtrip_map(ctx, f) -> bool:
    e = basis_element(f, ctx.ring)
    return iso.phi_inverse(iso.phi(e), bound=ctx.degree) == e


def _roundtrip_pair(ctx, p) -> bool:
    e = basis_element(p, ctx.ring)
    return iso.phi(iso.phi_inverse(e, bound=ctx.degree)) == e


def _phi_matrix(ctx) -> bool:
    M = iso.phi_matrix(ctx.n, ctx.ring, bound=ctx.degree)
    z, o = ctx.ring.zero, ctx.ring.one
    return M.dim == catalan_number(ctx.degree) and M.is_unipotent_upper() and all(
        x in (z, o) for row in M.entries for x in row
    )


def _matrix_inverse(ctx) -> bool:
    M = iso.phi_matrix(ctx.n, ctx.ring, bound=ctx.degree)
    N = iso.invert_unipotent(M)
    eye = iso.RingMatrix.identity(ctx.ring, M.dim)
    return M @ N == eye and N @ M == eye


def _monoid_assoc_elems(ctx, u, v, w) -> bool:
    mp = algebra.monoid_product
    ok = mp(mp(u, v), w) == mp(u, mp(v, w))
    ok = ok and mp(u, v + w) == mp(u, v) + mp(u, w) and mp(u + v, w) == mp(u, w) + mp(v, w)
    unit = algebra.monoid_identity(ctx.degree, ctx.ring)
    ok = ok and mp(unit, u) == u and mp(u, unit) == u
    return ok and _normal(mp(u, v))


def _incidence_assoc_elems(ctx, u, v, w) -> bool:
    ip = ctx.incidence_product
    ok = ip(ip(u, v), w) == ip(u, ip(v, w))
    ok = ok and ip(u, v + w) == ip(u, v) + ip(u, w) and ip(u + v, w) == ip(u, w) + ip(v, w)
    unit = incidence_identity(ctx.n, ctx.ring)
    ok = ok and ip(unit, u) == u and ip(u, unit) == u
    return ok and _normal(ip(u, v))


def _monoid_basis_product(ctx, f, g) -> bool:
    e = algebra.monoid_product(basis_element(f, ctx.ring), basis_element(g, ctx.ring))
    return dict(e.terms) == {compose(f, g): ctx.ring.one}


def _incidence_basis_product(ctx, p, q) -> bool:
    e = ctx.incidence_product(basis_element(p, ctx.ring), basis_element(q, ctx.ring))
    return len(e) <= 1 and _normal(e)


def _normal(e: AlgebraElement) -> bool:
    return all(c != e.ring.zero for c in e.terms.values())


PREDICATES: dict[str, Callable] = {
    "ring_laws": _ring_laws,
    "monoid_cardinality": _monoid_cardinality,
    "compose_closure": _closure,
    "compose_associativity": _associativity,
    "bijection_map_roundtrip": _bijection_map,
    "bijection_pair_roundtrip": _bijection_pair,
    "pair_count": _pair_count,
    "order_axioms": _order_axioms,
    "linext_soundness": _linext_sound,
    "pair_order_soundness": _pair_order_sound,
    "proposition_parts": _proposition,
    "lemma_pcs_product": _lemma,
    "theorem_homomorphism": _homomorphism,
    "theorem_triangularity": _triangularity,
    "unit_preservation": _unit,
    "phi_matrix_shape": _phi_matrix,
    "matrix_inverse": _matrix_inverse,
    "roundtrip_phi_inverse_phi": _roundtrip_map,
    "roundtrip_phi_phi_inverse": _roundtrip_pair,
    "monoid_basis_product": _monoid_basis_product,
    "incidence_basis_product": _incidence_basis_product,
    "monoid_algebra_laws": _monoid_assoc_elems,
    "incidence_algebra_laws": _incidence_assoc_elems,
}


# -- item generation ----------------------------------------------------------


class _Plan:
    """Decides, per check, which inputs to visit."""

    def __init__(self, ctx: _Context, randomized: bool, samples: int):
        self.ctx = ctx
        self.randomized = randomized
        self.samples = samples
        degree = ctx.degree
        if randomized and degree > ENUMERATE_FOR_SAMPLING:
            self.monoid = None
            self.sampling = "uniform over C_{n+1} via counting-based sequential sampling of image sequences"
        else:
            self.monoid = enumerate_monoid(degree, bound=degree)
            self.sampling = (
                "uniform draws from the enumerated monoid" if randomized else "exhaustive"
            )

    def draw(self, rng: random.Random) -> CMap:
        if self.monoid is not None:
            return rng.choice(self.monoid)
        return random_cmap(self.ctx.degree, rng)

    def maps(self, k: int, salt: str) -> tuple[Iterable[tuple], bool]:
        """k-tuples of maps: all of them when affordable, else samples."""
        if not self.randomized and len(self.monoid) ** k <= max(CUBIC_LIMIT, len(self.monoid) ** 2):
            return product(self.monoid, repeat=k), False
        rng = self.ctx.rng(salt)
        count = self.samples if self.randomized else SAMPLED_TRIPLES
        return ((tuple(self.draw(rng) for _ in range(k))) for _ in range(count)), True

    def subsets(self, k: int, salt: str) -> tuple[Iterable[tuple], bool]:
        n = self.ctx.n
        subs = all_subsets(n)
        if len(subs) ** k <= CUBIC_LIMIT:
            return product(subs, repeat=k), False
        rng = self.ctx.rng(salt)
        count = self.samples if self.randomized else SAMPLED_TRIPLES
        return (tuple(Subset(n, rng.getrandbits(n)) for _ in range(k)) for _ in range(count)), True

    def pairs(self) -> list[PosetPair] | None:
        if self.randomized and self.ctx.degree > DEFAULT_EXHAUSTIVE_DEGREE:
            return None
        return enumerate_pairs(self.ctx.n, bound=self.ctx.degree)


def _ring_samples(ctx: _Context, count: int) -> Iterator[tuple]:
    rng = ctx.rng("ring")
    r = ctx.ring

    def one():
        if r.kind == MOD_KIND:
            return rng.randrange(r.modulus)
        if r.kind == RATIONALS_KIND:
            return Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        return rng.randint(-(10**30), 10**30)

    for _ in range(count):
        yield one(), one(), one()


def _random_element(ctx: _Context, keys: list, rng: random.Random, terms: int = 3) -> AlgebraElement:
    r = ctx.ring
    out = {}
    for _ in range(terms):
        k = rng.choice(keys)
        out[k] = r.coerce(rng.randint(-3, 3))
    basis = algebra.monoid_basis(ctx.degree) if isinstance(keys[0], CMap) else algebra.pair_basis(ctx.n)
    return AlgebraElement(r, basis, out)


# -- runner -------------------------------------------------------------------


def _run(ctx: _Context, report: VerifyReport, name: str, items: Iterable[dict], sampled: bool = False,
         grouped: Callable | None = None) -> None:
    """Run one check.

    ``items`` yields keyword arguments for the check's predicate.  When
    ``grouped`` is given it replaces the predicate per item and returns
    ``(cases, failing_inputs_or_None)``.
    """
    pred = PREDICATES[name]
    res = CheckResult(name, sampled=sampled)
    t0 = time.perf_counter()
    for kw in items:
        if grouped is not None:
            cases, bad = grouped(ctx, **kw)
        else:
            cases, bad = 1, (None if pred(ctx, **kw) else kw)
        res.cases += cases
        if bad is not None:
            res.failures += 1
            if res.counterexample is None:
                res.counterexample = {
                    "check": name,
                    "n": ctx.degree,
                    "ring": str(ctx.ring),
                    "inputs": {k: _dump_value(k, v, ctx.ring) for k, v in bad.items()},
                }
    res.wall_time = time.perf_counter() - t0
    report.checks.append(res)


def _lemma_grouped(ctx: _Context, f: CMap, g: CMap):
    """All S at once: PCS(fg) must equal {S in PCS(g) : g(S) in PCS(f)}."""
    n = ctx.n
    left = ctx.pcs_masks(compose(f, g))
    pf = ctx.pcs_masks(f)
    img = ctx.images(g)
    right = {m for m in ctx.pcs_masks(g) if img[m] in pf}
    if left == right:
        return 1 << n, None
    bad = min(left.symmetric_difference(right))
    return 1 << n, {"f": f, "g": g, "S": Subset(n, bad)}


def _prop_grouped(ctx: _Context, f: CMap):
    sections = pcs(f)
    for S in sections:
        if not _proposition(ctx, f, S):
            return len(sections), {"f": f, "S": S}
    return len(sections), None


def verify_all(
    n_plus_1: int,
    ring: RingSpec,
    seed: int = 0,
    samples: int | None = None,
    incidence_product: Callable | None = None,
    exhaustive_bound: int | None = None,
    mutation: str | None = None,
) -> VerifyReport:
    """Run every check at degree ``n_plus_1``.

    ``samples=None`` selects exhaustive mode (bounded by ``exhaustive_bound``,
    default 7 or ``CATALAN_MAX_N``); otherwise each sampled check draws
    ``samples`` cases from a generator seeded by ``seed``.
    """
    if n_plus_1 < 1:
        raise ValidationError(f"degree must be >= 1, got {n_plus_1}")
    randomized = samples is not None
    if randomized and samples < 1:
        raise ValidationError("samples must be positive")
    if not randomized:
        limit = exhaustive_bound if exhaustive_bound is not None else max_degree(DEFAULT_EXHAUSTIVE_DEGREE)
        require_degree(n_plus_1, limit, "exhaustive verification")
    if mutation is not None:
        if mutation not in MUTATIONS:
            raise ValidationError(f"unknown mutation {mutation!r}")
        incidence_product = MUTATIONS[mutation]
    ip = incidence_product or algebra.incidence_product
    ctx = _Context(n_plus_1, ring, ip, seed)
    plan = _Plan(ctx, randomized, samples or 0)
    report = VerifyReport(
        n_plus_1, ring, "randomized" if randomized else "exhaustive", seed, samples, plan.sampling,
        mutation=mutation,
    )
    n = ctx.n

    _run(ctx, report, "ring_laws", ({"a": a, "b": b, "c": c} for a, b, c in _ring_samples(ctx, 500)), True)

    # monoid
    if plan.monoid is not None:
        _run(ctx, report, "monoid_cardinality", [{}])
    pairs2, s2 = plan.maps(2, "closure")
    _run(ctx, report, "compose_closure", ({"f": f, "g": g} for f, g in pairs2), s2)
    triples, s3 = plan.maps(3, "assoc")
    _run(ctx, report, "compose_associativity", ({"f": f, "g": g, "h": h} for f, g, h in triples), s3)
    singles, s1 = plan.maps(1, "single")
    singles = list(singles)
    _run(ctx, report, "bijection_map_roundtrip", ({"f": f} for (f,) in singles), s1)

    # poset
    pairs = plan.pairs()
    if pairs is not None:
        _run(ctx, report, "bijection_pair_roundtrip", ({"p": p} for p in pairs))
        _run(ctx, report, "pair_count", [{}])
    subs3, t3 = plan.subsets(3, "order")
    _run(ctx, report, "order_axioms", ({"X": X, "Y": Y, "Z": Z} for X, Y, Z in subs3), t3)
    subs2, t2 = plan.subsets(2, "linext")
    _run(ctx, report, "linext_soundness", ({"X": X, "Y": Y} for X, Y in subs2), t2)
    if pairs is not None:
        if len(pairs) ** 2 <= CUBIC_LIMIT:
            pp, sp = product(pairs, repeat=2), False
        else:
            rng = ctx.rng("pairorder")
            pp, sp = ((rng.choice(pairs), rng.choice(pairs)) for _ in range(SAMPLED_TRIPLES)), True
        _run(ctx, report, "pair_order_soundness", ({"p": p, "q": q} for p, q in pp), sp)

    # partial cross-sections
    _run(ctx, report, "proposition_parts", ({"f": f} for (f,) in singles), s1, grouped=_prop_grouped)
    pairs2, s2 = plan.maps(2, "lemma")
    _run(ctx, report, "lemma_pcs_product", ({"f": f, "g": g} for f, g in pairs2), s2, grouped=_lemma_grouped)

    # algebras
    pairs2, s2 = plan.maps(2, "basisprod")
    _run(ctx, report, "monoid_basis_product", ({"f": f, "g": g} for f, g in pairs2), s2)
    if pairs is not None:
        if len(pairs) ** 2 <= CUBIC_LIMIT:
            pp, sp = product(pairs, repeat=2), False
        else:
            rng = ctx.rng("incbasis")
            pp, sp = ((rng.choice(pairs), rng.choice(pairs)) for _ in range(SAMPLED_TRIPLES)), True
        _run(ctx, report, "incidence_basis_product", ({"p": p, "q": q} for p, q in pp), sp)
    _run(ctx, report, "monoid_algebra_laws", _element_triples(ctx, plan, "monoid"), True)
    if pairs is not None:
        _run(ctx, report, "incidence_algebra_laws", _element_triples(ctx, plan, "pairs", pairs), True)

    # isomorphism
    pairs2, s2 = plan.maps(2, "homomorphism")
    _run(ctx, report, "theorem_homomorphism", ({"f": f, "g": g} for f, g in pairs2), s2)
    _run(ctx, report, "theorem_triangularity", ({"f": f} for (f,) in singles), s1)
    _run(ctx, report, "unit_preservation", [{}])
    if pairs is not None:
        _run(ctx, report, "phi_matrix_shape", [{}])
        _run(ctx, report, "matrix_inverse", [{}])
        _run(ctx, report, "roundtrip_phi_inverse_phi", ({"f": from_pair(p.X, p.Y, n)} for p in pairs))
        _run(ctx, report, "roundtrip_phi_phi_inverse", ({"p": p} for p in pairs))
    return report


def _element_triples(ctx: _Context, plan: _Plan, kind: str, pairs=None) -> Iterator[dict]:
    rng = ctx.rng(f"elements-{kind}")
    if kind == "monoid":
        keys = plan.monoid if plan.monoid is not None else [plan.draw(rng) for _ in range(64)]
    else:
        keys = pairs
    count = min(plan.samples, 500) if plan.randomized else 200
    for _ in range(count):
        yield {k: _random_element(ctx, keys, rng) for k in "uvw"}


def replay(counterexample: dict, mutation: str | None = None) -> bool:
    """Re-run one recorded case; True when it now passes."""
    try:
        name = counterexample["check"]
        degree = int(counterexample["n"])
        ring = RingSpec.parse(counterexample["ring"])
        raw = counterexample.get("inputs", {})
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed counterexample: {counterexample!r}") from exc
    if name not in PREDICATES:
        raise ValidationError(f"unknown check {name!r}")
    if mutation is not None and mutation not in MUTATIONS:
        raise ValidationError(f"unknown mutation {mutation!r}")
    ip = MUTATIONS[mutation] if mutation else algebra.incidence_product
    ctx = _Context(degree, ring, ip, 0)
    inputs = {k: _load_value(k, v, ctx.n, ring) for k, v in raw.items()}
    return bool(PREDICATES[name](ctx, **inputs))


def dumps_report(report: VerifyReport, timing: bool = True) -> str:
    return json.dumps(report.to_json(timing), indent=2)
