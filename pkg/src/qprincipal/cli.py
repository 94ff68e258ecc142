"""Command-line driver: ``qprincipal verify|normalize|coproduct|det|list``."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Sequence, Tuple

from .coeff import DomainError
from .galois import CheckReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MUTATIONS = ("sign-flip", "drop-correction", "wrong-witness")


class UsageError(Exception):
    pass


# -- seeded mutations ------------------------------------------------------------

class Mutation:
    """A single seeded corruption applied at the first matching hook."""

    def __init__(self, kind: str | None, seed: int = 0):
        if kind is not None and kind not in MUTATIONS:
            raise UsageError(f"unknown mutation {kind!r}")
        self.kind = kind
        self.rng = random.Random(seed)
        self.applied: List[str] = []

    def _ready(self, *kinds) -> bool:
        return self.kind in kinds and not self.applied

    def presentation(self, P, prefer=None):
        """Flip the sign of, or drop, a correction term of one rewrite rule (in every presentation)."""
        from .ncalg import Presentation
        if self.kind not in ("sign-flip", "drop-correction"):
            return P
        # commutation rules among matrix entries; the determinant rule is a definition
        entries = [lhs for lhs in P.rules if all(P.keys[g][0] == "a" for g in lhs)]
        cands = [lhs for lhs in entries if len(P.rules[lhs]) >= 2]
        if not cands and self.kind == "sign-flip":
            cands = [lhs for lhs in entries if P.rules[lhs]]
        if prefer is not None and any(prefer(P, lhs) for lhs in cands):
            cands = [lhs for lhs in cands if prefer(P, lhs)]
        cands.sort(key=P.key)
        if not cands:
            return P
        lhs = self.rng.choice(cands)
        rhs = dict(P.rules[lhs])
        # the swapped word is the leading term; anything else is a correction
        words = sorted((w for w in rhs if w != lhs[::-1]), key=P.key) or sorted(rhs, key=P.key)
        w = self.rng.choice(words)
        if self.kind == "sign-flip":
            rhs[w] = -rhs[w]
        else:
            del rhs[w]
        rules = dict(P.rules)
        rules[lhs] = rhs
        self.applied.append(f"{self.kind} in rule {P.word_str(lhs)} at term {P.word_str(w)}")
        return Presentation(P.params, P.keys, P.names, rules, P.divisors, weights=P.weights,
                            inverses=P.inverses, meta=P.meta, aliases=P.aliases, check=False)

    def linmap(self, f):
        """Flip the sign of one term of one generator image, or drop one term."""
        from .maps import LinMap
        from .ncalg import NCPoly
        if not self._ready("sign-flip", "drop-correction"):
            return f
        need = 2 if self.kind == "drop-correction" else 1
        cands = sorted(g for g, v in f.images.items() if len(v.terms) >= need)
        if not cands:
            return f
        g = self.rng.choice(cands)
        img = f.images[g]
        w = self.rng.choice(sorted(img.terms, key=img.pres.key))
        terms = dict(img.terms)
        if self.kind == "sign-flip":
            terms[w] = -terms[w]
        else:
            del terms[w]
        images = dict(f.images)
        images[g] = NCPoly(img.pres, terms)
        self.applied.append(f"{self.kind} in image of {f.source.names[g]} under {f.name or 'map'}")
        return LinMap(f.source, f.target, images, anti=f.anti, coeff=f.coeff, name=f.name)

    def witness(self, w):
        if not self._ready("wrong-witness"):
            return w
        dead = w.H.eliminated()
        g = self.rng.choice(sorted(g for g in w.seeds if g not in dead))
        self.applied.append(f"wrong-witness: translation seed of {w.H.names[g]} negated")
        return w.mutated(w.H.keys[g], -1)

    def cleaving(self, gamma):
        """Negate a basis-rule map (a wrong convolution inverse)."""
        from .galois import LinMapHtoA
        if not self._ready("wrong-witness"):
            return gamma
        self.applied.append(f"wrong-witness: {gamma.name} negated")
        return LinMapHtoA(gamma.hopf, gamma.target, rule=lambda *e: -gamma.rule(*e),
                          pattern=gamma.pattern, name=gamma.name)


# -- suites --------------------------------------------------------------------

@dataclass
class Suite:
    id: str
    cite: str
    run: Callable
    default_n: Tuple[int, ...]
    allowed_n: Tuple[int, ...]
    mutations: Tuple[str, ...]
    presets: Tuple[str, ...] = ("sudbery",)


SUITES: Dict[str, Suite] = {}


def suite(id: str, cite: str, default_n, allowed_n, mutations, presets=("sudbery",)):
    def deco(fn):
        SUITES[id] = Suite(id, cite, fn, tuple(default_n), tuple(allowed_n), tuple(mutations),
                           tuple(presets))
        return fn
    return deco


def _preset(name: str, n: int):
    from .ncalg import preset
    return preset(name, None if name == "gl2_multi" else n)


def _ns(args, s: Suite) -> List[int]:
    return [args.n] if args.n is not None else list(s.default_n)


@suite("determinant", "row and column expansions of the quantum determinant agree; "
       "n = 2 gives a d - p b c; each a_ik q-commutes with it", [], range(1, 7), ["sign-flip", "drop-correction"],
       presets=("gln_multi", "sudbery", "gl2_multi", "generic_mu", "cdv"))
def _determinant(args, mut):
    from .ncalg import NCPoly, determinant_terms
    cases = ([(args.preset, n) for n in _ns(args, SUITES["determinant"])] if args.preset
             else [("gln_multi", n) for n in (1, 2, 3)] + [("sudbery", n) for n in (1, 2, 3, 4)])
    if args.preset and args.n is None:
        cases = [(args.preset, 2 if args.preset == "gl2_multi" else 3)]
    reps = []
    for name, n in cases:
        P = mut.presentation(_preset(name, n), prefer=_adjacent_columns)
        rep = CheckReport(f"{name} n={P.meta['n']}")
        n = P.meta["n"]
        if n >= 2:
            row = P.normalize(NCPoly(P, determinant_terms(P, n, "row")))
            col = P.normalize(NCPoly(P, determinant_terms(P, n, "column")))
            rep.add("row form = column form", row == col, P.format(row - col))
        if n == 2:
            p = P.meta["pfun"](1, 2)
            a, b, c, d = (P.g(("a", i, j)) for i, j in ((1, 1), (1, 2), (2, 1), (2, 2)))
            want = P.mul(a, d) - P.mul(b, c) * p
            rep.add("row form = a d - p b c", row == want, P.format(row - want))
        if 2 <= n <= 4:
            bad = [P.names[g] for g in range(len(P.keys)) if P.keys[g][0] == "a"
                   and P.mul(P.g(g), row) != P.mul(row, P.g(g)) * P.meta["det_factor"][P.keys[g][1:]]]
            rep.add("a_ik det = (scalar) det a_ik", not bad, ", ".join(bad))
        if n == 1:
            rep.add("n = 1 determinant is a11", True)
        reps.append(rep)
    return reps


def _adjacent_columns(P, lhs):
    # rules that the column expansion a_s1 1 a_s2 2 ... actually rewrites
    return len(lhs) == 2 and P.keys[lhs[0]][2] + 1 == P.keys[lhs[1]][2]


@suite("hopf-axioms", "coassociativity, counit and antipode on generators; the determinant is grouplike",
       [2, 3], range(1, 5), ["sign-flip", "drop-correction"],
       presets=("sudbery", "gln_multi", "gl2_multi", "generic_mu", "cdv"))
def _hopf(args, mut):
    from .hopf import (antipode_failures, check_grouplike, coassociativity_failures,
                       counit_failures, standard_hopf)
    from .maps import rule_residuals, tensor_elem
    from .ncalg import NCPoly, determinant_terms
    reps = []
    for n in _ns(args, SUITES["hopf-axioms"]):
        P = mut.presentation(_preset(args.preset or "sudbery", n))
        n = P.meta["n"]
        rep = CheckReport(f"{P.meta['kind']} n={n}")
        hs = standard_hopf(P, with_antipode=False)
        bad = rule_residuals(hs.delta)
        rep.add("coproduct respects the relations", not bad, bad[0][0] if bad else None)
        bad = coassociativity_failures(hs)
        rep.add("coassociativity", not bad, bad[:1] or None)
        bad = counit_failures(hs)
        rep.add("counit", not bad, bad[:1] or None)
        if n <= 2 or "mu" in P.meta:
            hs = standard_hopf(P)
            bad = antipode_failures(hs)
            rep.add("antipode convolution axioms", not bad, bad[:1] or None)
        if n >= 2:
            rep.add("Delta(D) = D (x) D on the generator", check_grouplike(P.g(("D",)), hs))
            det = NCPoly(P, determinant_terms(P, n, "row"))
            full = hs.coproduct(det)
            want = tensor_elem(hs.T2, [det, det])
            rep.add("Delta(det) = det (x) det by full expansion", full == want, full - want)
        reps.append(rep)
    return reps


@suite("rewriting", "critical pairs resolve; normal forms are order-independent; "
       "specializing the parameters to 1 commutes with normalization",
       [], range(1, 5), ["sign-flip", "drop-correction"],
       presets=("gl2_multi", "gln_multi", "sudbery", "cdv", "generic_mu"))
def _rewriting(args, mut):
    from .ncalg import check_confluence, specialization_failures
    if args.preset:
        cases = [(args.preset, n) for n in ([args.n] if args.n else [3])]
    else:
        cases = ([("gl2_multi", 2)] + [("gln_multi", n) for n in (1, 2, 3, 4)]
                 + [("sudbery", n) for n in (1, 2, 3, 4)] + [("cdv", n) for n in (3, 4)]
                 + [("generic_mu", n) for n in (2, 3, 4)])
    reps = []
    for i, (name, n) in enumerate(cases):
        P = mut.presentation(_preset(name, n))
        rep = CheckReport(f"{name} n={P.meta['n']}")
        big = i == 0 or args.preset
        conf = check_confluence(P, 4, samples=1000 if big else 100, seed=args.seed)
        rep.add(f"confluence ({conf.pairs_checked} overlaps, {conf.random_checked} random words)",
                conf.ok, conf.witness())
        bad = specialization_failures(P, {k: 1 for k in P.params.names},
                                      samples=200 if big else 50, seed=args.seed)
        rep.add("specialize o normalize = normalize o specialize", not bad, bad[:1] or None)
        reps.append(rep)
    return reps


def _bundle(args, n):
    from .sheaf import build_bundle_sheaf
    return build_bundle_sheaf(n, _preset(args.preset or "sudbery", n), transitions=args.transitions)


@suite("chart-isos", "the chart changes are comodule algebra isomorphisms and agree on triple overlaps",
       [2, 3], (2, 3), ["sign-flip"], presets=("sudbery", "generic_mu"))
def _chart_isos(args, mut):
    from .sheaf import ChartIso, chart_iso, chart_iso_check, cocycle_report, identity_iso
    reps = []
    for n in _ns(args, SUITES["chart-isos"]):
        F = _bundle(args, n)
        for l in range(1, n + 1):
            for m in range(1, n + 1):
                if l == m:
                    continue
                psi = chart_iso(F, l, m)
                fwd = mut.linmap(psi.forward)
                psi = ChartIso(fwd, psi.inverse, psi.source_coaction, psi.target_coaction)
                rep = chart_iso_check(psi)
                rep.name = f"n={n} {rep.name}"
                reps.append(rep)
        C = F.section((1,))
        rep = chart_iso_check(identity_iso(C, F.chart_coaction(1)))
        rep.name = f"n={n} identity"
        reps.append(rep)
        if n >= 3:
            rep = cocycle_report(F)
            rep.name = f"n={n} {rep.name}"
            reps.append(rep)
    return reps


@suite("sheaf", "restrictions are comodule algebra maps and compose; gluing surrogate; classical limit",
       [2], (2, 3), ["sign-flip", "drop-correction"], presets=("sudbery", "generic_mu"))
def _sheaf(args, mut):
    from .sheaf import (build_projective_sheaf, classical_limit_check, functoriality_failures,
                        gluing_check, restriction_report)
    reps = []
    for n in _ns(args, SUITES["sheaf"]):
        F = _bundle(args, n)
        # corrupt one chart change before any restriction is assembled
        I = tuple(range(1, n + 1))[:2]
        F._maps[("T", I, I[1], I[0])] = mut.linmap(F.transition(I, I[1], I[0]))
        base = build_projective_sheaf(n, F.algebra)
        reps.append(restriction_report(F))
        rep = CheckReport(f"functoriality of {F.name}")
        bad = functoriality_failures(F)
        rep.add("rho_IJ o rho_KI = rho_KJ on every chain", not bad, bad[:1] or None)
        reps.append(rep)
        if n == 2:
            reps.append(gluing_check(F))
        reps.append(classical_limit_check(F))
        reps.append(classical_limit_check(base))
    return reps


@suite("galois", "the canonical map is onto: translation witnesses on every chart, "
       "with the translation-map identities", [2, 3], (2, 3), ["wrong-witness"],
       presets=("sudbery", "generic_mu"))
def _galois(args, mut):
    from .galois import standard_witness, surjectivity_witness_check, translation_properties_check
    from .sheaf import chart_embedding
    rng = random.Random(args.seed)
    reps = []
    for n in _ns(args, SUITES["galois"]):
        F = _bundle(args, n)
        hs, H = F.hopf_pair()
        B = H.base
        live = [g for g in range(len(B.keys)) if g not in B.eliminated()]
        for l in range(1, n + 1):
            c = F.chart_coaction(l)
            w = mut.witness(standard_witness(c, hs, chart_embedding(F.algebra, c.source), ell=l))
            rep = surjectivity_witness_check(c, w, products=1)
            rep.name = f"n={n} U_{l} {rep.name}"
            reps.append(rep)
            rep = CheckReport(f"n={n} U_{l} translation map")
            for g in live:
                k = B.g(rng.choice(live))
                rep.extend(translation_properties_check(c, w, B.g(g), k), prefix=f"{B.names[g]}: ")
            reps.append(rep)
    return reps


def _range(text: str) -> range:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"bad range {text!r}, expected LO..HI") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return range(lo, hi + 1)


@suite("appendix-a", "the chart at c is cleft: gamma_2 and its inverse on Dt^p t^m n^r, "
       "closed forms for Delta(n^r) and delta_2(d^r)", [2], (2,), ["wrong-witness"])
def _appendix(args, mut):
    from .galois import chart_one_cleaving, cleaving_check, coproduct_power_formulas_check, gl2_cleaving_maps
    F = _bundle(args, 2)
    A = F.algebra
    _, H = F.hopf_pair()
    c1, c2 = F.chart_coaction(1), F.chart_coaction(2)
    g, gbar, basis = gl2_cleaving_maps(H, c2.source, A)
    gbar = mut.cleaving(gbar)
    if args.r_max < 0:
        raise UsageError("--r-max must be >= 0")
    tests = basis.monomials(_range(args.p_range), _range(args.m_range), range(args.r_max + 1))
    rep = cleaving_check(g, gbar, c2, tests)
    rep.name = f"gamma_2 on {len(tests)} monomials"
    reps = [rep, coproduct_power_formulas_check(H, c2, A, r_max=max(6, args.r_max))]
    g1 = chart_one_cleaving(H, c1.source, A)
    rep = cleaving_check(g1, None, c1, tests)
    rep.name = "gamma_1 algebra map on chart 1"
    reps.append(rep)
    return reps


@suite("qpb", "the bundle is a quantum principal bundle over projective space: coinvariants, "
       "their relations, surjectivity and coinvariant dimensions", [2, 3], (2, 3), ["wrong-witness"],
       presets=("sudbery", "generic_mu"))
def _qpb(args, mut):
    from .sheaf import build_projective_sheaf, qpb_check
    reps = []
    for n in _ns(args, SUITES["qpb"]):
        F = _bundle(args, n)
        base = build_projective_sheaf(n, F.algebra)
        reps.append(qpb_check(F, base, degree=args.degree_bound, witness_hook=mut.witness))
    return reps


@suite("b-charts", "the index shift B_1 -> B_l between coinvariant charts respects the relations",
       [3, 4], range(2, 7), ["sign-flip"],
       presets=("sudbery", "generic_mu", "cdv"))
def _b_charts(args, mut):
    from .sheaf import b_chart_iso_check
    reps = []
    for n in _ns(args, SUITES["b-charts"]):
        A = _preset(args.preset or "sudbery", n)
        if mut._ready("sign-flip"):
            A = _mutate_mu(A, mut)
        for l in range(1, n + 1):
            reps.append(b_chart_iso_check(n, l, A))
    return reps


def _mutate_mu(A, mut):
    """Negate one entry ``mu_ij`` (leaving ``mu_ji``) in a copy of the metadata."""
    from .ncalg import Presentation
    mu = dict(A.meta["mu"])
    i, j = mut.rng.choice(sorted(k for k in mu if k[0] < k[1]))
    mu[i, j] = -mu[i, j]
    mut.applied.append(f"{mut.kind}: mu_{i}{j} negated")
    meta = dict(A.meta, mu=mu)
    return Presentation(A.params, A.keys, A.names, A.rules, A.divisors, weights=A.weights,
                        inverses=A.inverses, meta=meta, aliases=A.aliases, check=False)


@suite("cdv", "for the theta-deformation the determinant is central; the index shift of coinvariant "
       "charts needs the same-side condition on mu", [4], (4,), ["sign-flip"], presets=("cdv",))
def _cdv(args, mut):
    from .ncalg import NCPoly, cdv, determinant_terms, sudbery
    from .sheaf import b_chart_iso_check, same_side_violations
    A = mut.presentation(cdv(4))
    rep = CheckReport("cdv(4) determinant")
    det = NCPoly(A, determinant_terms(A, 4, "row"))
    for g in range(len(A.keys)):
        if A.keys[g][0] != "a":
            continue
        x = A.g(g)
        res = A.mul(det, x) - A.mul(x, det)
        rep.add(f"det commutes with {A.names[g]}", not res, res)
    reps = [rep]
    rep = CheckReport("index shift versus the same-side condition")
    generic = cdv(6)
    viol = same_side_violations(generic.meta["mu"], 6)
    shifts = [b_chart_iso_check(6, l, generic).ok for l in range(1, 7)]
    rep.add("cdv(6) violates the same-side condition", bool(viol))
    rep.add("cdv(6): some index shift fails", not all(shifts), shifts)
    one = sudbery(6)
    rep.add("single parameter satisfies the same-side condition", not same_side_violations(one.meta["mu"], 6))
    shifts = [b_chart_iso_check(6, l, one).ok for l in range(1, 7)]
    rep.add("single parameter: every index shift holds", all(shifts), shifts)
    reps.append(rep)
    return reps


@suite("reduction-theorem", "f_l are module and comodule algebra maps that glue; the reduced sheaf "
       "equals the direct quotient and is a principal bundle", [2, 3], (2, 3), ["sign-flip"],
       presets=("sudbery", "generic_mu"))
def _reduction(args, mut):
    from .reduction import (ReductionData, check_f_conditions, construct_reduced_sheaf,
                            levi_cleaving_check, reduced_qpb_check, reduction_data_report)
    from .galois import levi_hopf
    from .sheaf import build_projective_sheaf
    reps = []
    for n in _ns(args, SUITES["reduction-theorem"]):
        F = _bundle(args, n)
        hs, H = F.hopf_pair()
        rd = ReductionData(F, hs, H, levi_hopf(H))
        rd.f[1] = mut.linmap(rd.f[1])
        reps.append(reduction_data_report(rd, degree=4 if n == 2 else 3))
        for l in range(1, n + 1):
            reps.append(check_f_conditions(rd, l))
        rs = construct_reduced_sheaf(rd)
        rep = CheckReport(f"reduced sheaf n={n}")
        for I, S in rs.theorem_sections.items():
            rep.add(f"quotient on U_{''.join(map(str, I))} is presentation-identical to F0",
                    S.same_as(rs.F0.section(I)))
        reps.append(rep)
        reps.append(reduced_qpb_check(rs, build_projective_sheaf(n, F.algebra), degree=args.degree_bound))
        reps.append(levi_cleaving_check(rd))
    return reps


# -- running and rendering ---------------------------------------------------------

@dataclass
class Report:
    suite: str
    records: List[dict] = field(default_factory=list)
    mutation: str | None = None
    applied: List[str] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(not r["ok"] for r in self.records)

    @property
    def exit_status(self) -> int:
        return EXIT_OK if not self.failed else EXIT_FAIL

    def summary(self) -> dict:
        out = {"suite": self.suite, "checks": len(self.records), "passed": len(self.records) - self.failed,
               "failed": self.failed, "exit": self.exit_status}
        if self.mutation:
            out["mutation"] = self.mutation
            out["applied"] = list(self.applied)
        return out

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            lines = [json.dumps(r, sort_keys=True) for r in self.records]
            lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
            return "\n".join(lines) + "\n"
        lines = []
        for r in self.records:
            line = f"{'PASS' if r['ok'] else 'FAIL'}  {r['check']}"
            if "elapsed" in r:
                line += f"  ({r['elapsed']:.3f}s)"
            lines.append(line)
            if not r["ok"] and "witness" in r:
                lines.append(f"      witness: {r['witness']}")
        s = self.summary()
        tail = f"{s['suite']}: {s['passed']}/{s['checks']} checks passed"
        if self.mutation:
            tail += f" under mutation {self.mutation} ({'; '.join(self.applied)})"
        lines.append(tail)
        return "\n".join(lines) + "\n"


_RUNTIME_ERRORS = (ValueError, KeyError, ArithmeticError)


ALIASES = {"qpb-n2": ("qpb", 2), "qpb-n3": ("qpb", 3)}


def run_suite(suite_id: str, args=None, timing: bool = False, **overrides) -> Report:
    """Run a registered suite; ``overrides`` set any command-line option by name."""
    if suite_id in ALIASES:
        suite_id, n = ALIASES[suite_id]
        overrides.setdefault("n", n)
    if suite_id not in SUITES:
        raise UsageError(f"unknown suite {suite_id!r}; try 'list'")
    s = SUITES[suite_id]
    if args is None:
        args = build_parser().parse_args(["verify", suite_id])
    for k, v in overrides.items():
        setattr(args, k, v)
    if args.n is not None and args.n not in s.allowed_n:
        raise UsageError(f"suite {suite_id} supports n in {list(s.allowed_n)}, got {args.n}")
    if args.preset is not None and args.preset not in s.presets:
        raise UsageError(f"suite {suite_id} supports presets {list(s.presets)}")
    if args.degree_bound < 0:
        raise UsageError("--degree-bound must be >= 0")
    mut = Mutation(args.mutate, args.seed)
    rep = Report(suite_id, mutation=args.mutate)
    t0 = time.perf_counter()
    try:
        reports = s.run(args, mut)
    except UsageError:
        raise
    except _RUNTIME_ERRORS as exc:
        reports = [CheckReport("construction")]
        reports[0].add("objects could be built", False, f"{type(exc).__name__}: {exc}")
    if args.mutate and not mut.applied:
        raise UsageError(f"mutation {args.mutate} has nothing to act on in this configuration")
    for r in reports:
        for rec in r.records:
            out = {"suite": suite_id, "check": f"{r.name}: {rec['check']}" if r.name else rec["check"],
                   "cite": rec.get("cite") or s.cite, "ok": rec["ok"]}
            if "witness" in rec:
                out["witness"] = rec["witness"]
            rep.records.append(out)
    if timing:
        elapsed = time.perf_counter() - t0
        for rec in rep.records:
            rec["elapsed"] = round(elapsed / max(1, len(rep.records)), 6)
    rep.applied = list(mut.applied)
    return rep


def list_suites(fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps([{"suite": s.id, "cite": s.cite, "default_n": list(s.default_n),
                            "presets": list(s.presets), "mutations": list(s.mutations)}
                           for s in SUITES.values()], indent=2) + "\n"
    width = max(len(k) for k in SUITES)
    return "".join(f"{s.id:<{width}}  {s.cite}\n" for s in SUITES.values())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qprincipal", description="Exact checks for quantum GL(n) bundles.")
    sub = p.add_subparsers(dest="verb", required=True)

    def common(sp, n_default=None):
        sp.add_argument("--preset", default=None, help="gl2_multi, gln_multi, sudbery, cdv or generic_mu")
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    common(v)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--p-range", default="-3..3")
    v.add_argument("--m-range", default="-3..3")
    v.add_argument("--r-max", type=int, default=5)
    v.add_argument("--degree-bound", type=int, default=3)
    v.add_argument("--mutate", choices=MUTATIONS, default=None)
    v.add_argument("--transitions", choices=("psi", "localization"), default="psi")
    v.add_argument("--timing", action="store_true", help="add elapsed times (reports stop being byte-stable)")

    for verb, helptext in (("normalize", "normal form of an expression"),
                           ("coproduct", "coproduct of an expression")):
        sp = sub.add_parser(verb, help=helptext)
        sp.add_argument("expr")
        common(sp)
    d = sub.add_parser("det", help="quantum determinant")
    common(d)
    d.add_argument("--form", choices=("row", "column"), default="row")
    ls = sub.add_parser("list", help="list suites")
    ls.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _algebra(args):
    from .ncalg import preset
    if args.preset is None:
        raise UsageError("--preset is required")
    if args.preset != "gl2_multi" and args.n is None:
        raise UsageError("--n is required for this preset")
    return preset(args.preset, args.n)


def main(argv: Sequence[str] | None = None) -> int:
    from .dsl import ParseError, parse_expr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # "-3..3" looks like an option to argparse
    for i in range(len(argv) - 2, -1, -1):
        if argv[i] in ("--p-range", "--m-range") and argv[i + 1].startswith("-"):
            argv[i:i + 2] = [f"{argv[i]}={argv[i + 1]}"]
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    out = sys.stdout
    try:
        if args.verb == "list":
            out.write(list_suites(args.format))
            return EXIT_OK
        if args.verb == "verify":
            rep = run_suite(args.suite, args, timing=args.timing)
            out.write(rep.render(args.format))
            return rep.exit_status
        A = _algebra(args)
        if args.verb == "det":
            from .hopf import quantum_determinant
            x = A.normalize(quantum_determinant(A, args.form))
            text = A.format(x)
        else:
            x = A.normalize(parse_expr(args.expr, A))
            if args.verb == "normalize":
                text = A.format(x)
            else:
                from .hopf import standard_hopf
                hs = standard_hopf(A, with_antipode=False)
                text = hs.T2.format(hs.coproduct(x))
        out.write(json.dumps({"result": text}) + "\n" if args.format == "json" else text + "\n")
        return EXIT_OK
    except (UsageError, ParseError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
