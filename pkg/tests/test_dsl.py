import pytest

from defcsp.csp_model import validate
from defcsp.dsl import DslError, format_instance, load, parse


def test_example1_parses(example1):
    assert example1.atoms == "order" and validate(example1) == []
    assert list(example1.variables.names()) == ["V"]
    assert example1.domain.elements == ("Y", "G", "B")


def test_empty_file():
    with pytest.raises(DslError) as e:
        parse("")
    assert any("missing domain" in d for d in e.value.diagnostics)


def test_order_comparator_in_equality_mode():
    text = "atoms equality\ndomain { a }\nrelation r/1 = { (a) }\nvars V(2) where x.1 < x.2\n"
    with pytest.raises(DslError) as e:
        parse(text)
    assert any("4:" in d and "<" in d for d in e.value.diagnostics)


def test_diagnostics_are_located():
    text = "domain { a }\nrelation r/1 = { (a) }\nvars V(1)\nconstraint r on u : W\n"
    with pytest.raises(DslError) as e:
        parse(text)
    assert any(d.startswith("4:") and "W" in d for d in e.value.diagnostics)
    with pytest.raises(DslError):
        parse("domain { a }\nrelation r/1 = { (a) }\nvars V(1) where x.2 = x.1\n")


def test_params_and_options():
    f = parse("params { 0 3/2 }\ndomain { a }\nrelation r/1 = { (a) }\nvars V(1) where x.1 < #2 & x.1 > 0\n"
              "option max_pool = 3\n")
    assert [str(a) for a in f.instance.ctx.params] == ["0", "3/2"]
    assert f.options == {"max_pool": 3}


def test_pretty_print_round_trip(corpus):
    for path in sorted(corpus.glob("*.csp")):
        f = load(path)
        text = format_instance(f)
        again = parse(text)
        assert again.instance == f.instance, path.name
        assert format_instance(again) == text
