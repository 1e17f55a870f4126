import itertools
import json
from dataclasses import replace

from defcsp import formulas as F
from defcsp.certificates import (UnsatCertificate, candidate_pools, certificate_from_json,
                                 certificate_json, find_certificate, shrink, verify)
from defcsp.csp_model import (ConstraintFamily, DefinableInstance, FiniteDomain, GroundInstance,
                              Signature)
from defcsp.defsets import DefinableSet, SetBuilder
from defcsp.dsl import load

p = F.Pos
COL3 = FiniteDomain(("r", "g", "b"), {"neq": {(a, b) for a in "rgb" for b in "rgb" if a != b}})
# complete graph on atoms: needs as many colours as atoms
CLIQUE = DefinableInstance(Signature((("neq", 2),)), COL3, DefinableSet((SetBuilder("V", 1),)),
                           (ConstraintFamily("neq", (("u", "V"), ("v", "V")), F.ne(p(1), p(2))),))


def test_clique_certificate_is_k4():
    cert = find_certificate(CLIQUE)
    assert len(cert.pool) == 4 and len(cert.ground.vertices) == 4
    assert verify(cert, CLIQUE)


def test_shrink_removes_isolated_vertices():
    vertices = tuple(("V", (i,)) for i in range(7))
    cons = tuple(("neq", e) for a, b in itertools.combinations(range(4), 2) for e in ((a, b), (b, a)))
    g = GroundInstance(vertices, cons, tuple(range(7)), COL3)
    small = shrink(UnsatCertificate(g.pool, g))
    assert [v for v in small.ground.vertices] == list(vertices[:4]) and small.minimal
    again = shrink(small)
    assert again.ground == small.ground


def test_verify_negative_controls():
    cert = find_certificate(CLIQUE)
    g = cert.ground
    assert not verify(replace(cert, ground=g.induced(range(3)), minimal=False), CLIQUE)
    bogus = replace(g, constraints=g.constraints + (("neq", (0, 0)),))
    assert not verify(replace(cert, ground=bogus, minimal=False), CLIQUE)
    foreign = replace(g, vertices=(("W", g.vertices[0][1]),) + g.vertices[1:])
    assert not verify(replace(cert, ground=foreign), CLIQUE)
    unshrunk = replace(cert, ground=g, minimal=True)
    extra = GroundInstance(g.vertices + (("V", (99,)),), g.constraints, g.pool + (99,), g.domain)
    assert not verify(replace(unshrunk, ground=extra, pool=extra.pool), CLIQUE)


def test_sat_instance_has_no_certificate(corpus):
    assert find_certificate(load(corpus / "nae_split.csp").instance, max_pool=5) is None
    assert certificate_json(None) == '{\n  "status": "not_found"\n}\n'


def test_json_round_trip(example1):
    cert = find_certificate(example1, max_pool=5)
    doc = json.loads(certificate_json(cert, True))
    back = certificate_from_json(doc, example1)
    assert back.ground.vertices == cert.ground.vertices
    assert back.ground.constraints == cert.ground.constraints
    assert back.minimal and verify(back, example1)


def test_candidate_pools_cover_gaps(corpus):
    inst = load(corpus / "clique_param.csp").instance
    pools = candidate_pools(inst, 2)
    k = len(inst.ctx)
    assert len(pools) == len({tuple(sorted(p)) for p in pools})
    assert all(len(p) == 2 + k and set(inst.ctx.params) <= set(p) for p in pools)
