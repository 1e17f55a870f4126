"""Finite witnesses of unsatisfiability.

If a definable instance has no solution, some finite grounding already has
none. ``find_certificate`` looks for the smallest such grounding, ``shrink``
cuts it down to a vertex-minimal core, and ``verify`` re-checks a
certificate from scratch: exhaustive search plus re-derivation of every
vertex and constraint from the instance's guards.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace
from fractions import Fraction

from . import formulas as F
from .atoms import atom, cell_values, format_atom
from .csp_model import DefinableInstance, GroundInstance, ground, to_dot, vertex_label
from .finite_solver import DEFAULT_BRUTE_BOUND, BruteForceBoundExceeded, brute_force, solve


@dataclass(frozen=True)
class UnsatCertificate:
    pool: tuple
    ground: GroundInstance
    minimal: bool = False

    def to_json(self) -> dict:
        doc = {"pool": [format_atom(a) for a in self.pool], "minimal": self.minimal}
        g = self.ground.to_json()
        doc["vertices"] = g["vertices"]
        doc["constraints"] = g["constraints"]
        return doc

    def to_dot(self) -> str:
        return to_dot(self.ground, "certificate")


def certificate_from_json(doc: dict, instance: DefinableInstance) -> UnsatCertificate:
    vertices = tuple((v["builder"], tuple(atom(a) for a in v["tuple"])) for v in doc["vertices"])
    cons = tuple((c["relation"], tuple(c["vertices"])) for c in doc["constraints"])
    pool = tuple(atom(a) for a in doc["pool"])
    return UnsatCertificate(pool, GroundInstance(vertices, cons, pool, instance.domain),
                            bool(doc.get("minimal", False)))


def candidate_pools(instance: DefinableInstance, m: int) -> list[tuple]:
    """Pools of ``m`` fresh atoms spread over the gaps between parameters, plus the parameters.

    Without parameters this is just ``1..m``.
    """
    params = instance.ctx.params
    if not params:
        return [tuple(Fraction(i) for i in range(1, m + 1))]
    pools = []
    gaps = len(params) + 1
    for split in itertools.product(range(m + 1), repeat=gaps):
        if sum(split) != m:
            continue
        anchors, cell = {}, 0
        for k, p in enumerate(params):
            cell += split[k]
            anchors[cell] = p
            cell += 1
        pools.append(tuple(cell_values(m + len(params), anchors)))
    return pools


def find_certificate(instance: DefinableInstance, max_pool: int = 6,
                     brute_bound: int = DEFAULT_BRUTE_BOUND,
                     minimize: bool = True) -> UnsatCertificate | None:
    """First unsatisfiable grounding by increasing pool size, or ``None`` within ``max_pool``.

    Groundings are screened with the SAT route; the returned certificate is
    confirmed by exhaustive search, which raises ``BruteForceBoundExceeded``
    (naming the pool size) if it is too large to enumerate.
    """
    for m in range(max_pool + 1):
        for pool in candidate_pools(instance, m):
            g = ground(instance, pool)
            if solve(g, instance.domain) is not None:
                continue
            cert = UnsatCertificate(g.pool, g)
            if minimize:
                cert = shrink(cert)
            try:
                confirmed = brute_force(cert.ground, cert.ground.domain, brute_bound) is None
            except BruteForceBoundExceeded as e:
                raise BruteForceBoundExceeded(f"pool size {m}: {e}") from None
            if not confirmed:
                raise AssertionError("SAT route and exhaustive search disagree on a grounding")
            return cert
    return None


def _greedy(g: GroundInstance, keep: list[int]) -> list[int]:
    for v in list(keep):
        trial = [i for i in keep if i != v]
        if solve(g.induced(trial), g.domain) is None:
            keep = trial
    return keep


def shrink(cert: UnsatCertificate) -> UnsatCertificate:
    """Cut a certificate down to a 1-minimal core.

    Greedy vertex deletion in index order first. One pass suffices for
    1-minimality: satisfiability is inherited by induced subinstances, so a
    vertex that was needed stays needed. Greedy cores can be larger than
    necessary, so the core is then refined by swaps: exchange one core
    vertex for an outside vertex and re-run the greedy pass, adopting the
    result whenever it is strictly smaller.
    """
    g = cert.ground
    n = len(g.vertices)
    keep = _greedy(g, list(range(n)))
    improved = True
    while improved:
        improved = False
        outside = [w for w in range(n) if w not in keep]
        for v, w in itertools.product(keep, outside):
            trial = sorted([i for i in keep if i != v] + [w])
            if solve(g.induced(trial), g.domain) is None:
                smaller = _greedy(g, trial)
                if len(smaller) < len(keep):
                    keep, improved = smaller, True
                    break
    return replace(cert, ground=g.induced(keep), minimal=True)


def _derivable(instance: DefinableInstance, cert: UnsatCertificate) -> bool:
    pool = set(cert.pool)
    ctx = instance.ctx
    g = cert.ground
    try:
        for b, tup in g.vertices:
            builder = instance.variables.builder(b)
            if not set(tup) <= pool | set(ctx.params) or not builder.contains(tup):
                return False
    except KeyError:
        return False
    for rel, idx in g.constraints:
        if any(not 0 <= i < len(g.vertices) for i in idx):
            return False
        names = tuple(g.vertices[i][0] for i in idx)
        concat = tuple(a for i in idx for a in g.vertices[i][1])
        if not any(fam.relation == rel and fam.builders == names
                   and F.eval_ground(fam.guard, concat, ctx)
                   for fam in instance.families):
            return False
    return True


def verify(cert: UnsatCertificate, instance: DefinableInstance,
           brute_bound: int = DEFAULT_BRUTE_BOUND) -> bool:
    """No homomorphism exists (exhaustively), and the grounding is a genuine subinstance.

    A certificate flagged ``minimal`` must also become satisfiable after
    deleting any single vertex.
    """
    g = cert.ground
    if not _derivable(instance, cert):
        return False
    if brute_force(g, instance.domain, brute_bound) is not None:
        return False
    if cert.minimal:
        for v in range(len(g.vertices)):
            rest = [i for i in range(len(g.vertices)) if i != v]
            if brute_force(g.induced(rest), instance.domain, brute_bound) is None:
                return False
    return True


def certificate_json(cert: UnsatCertificate | None, verified: bool | None = None) -> str:
    if cert is None:
        doc = {"status": "not_found"}
    else:
        doc = {"status": "certificate", "verified": verified, **cert.to_json(),
               "labels": [vertex_label(v) for v in cert.ground.vertices]}
    return json.dumps(doc, indent=2) + "\n"
